use crate::error::{Error, Result};
use crate::fp::{FpMatrix, Prime};

/// Number of monomials `x_i x_j` with `i <= j` in `m` variables.
pub fn tri_len(m: usize) -> usize {
    m * (m + 1) / 2
}

/// Position of `x_i x_j` (`i <= j`, zero-based) in lexicographic monomial order.
#[inline]
pub fn tri_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < m);
    i * m - i * i.saturating_sub(1) / 2 + (j - i)
}

/// A quadratic form `Q = sum_{i<=j} c_ij x_i x_j` over F_2.
///
/// The coefficient table is upper triangular; diagonal entries are the square terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticFormF2 {
    m: usize,
    coeffs: Vec<u8>,
}

impl QuadraticFormF2 {
    pub fn zero(m: usize) -> Self {
        QuadraticFormF2 {
            m,
            coeffs: vec![0; tri_len(m)],
        }
    }

    /// `coeffs` in lexicographic `(i, j)` order, `i <= j`.
    pub fn new(m: usize, coeffs: Vec<u8>) -> Result<Self> {
        if coeffs.len() != tri_len(m) {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a form in {m} variables",
                coeffs.len()
            )));
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c > 1) {
            return Err(Error::EntryOutOfRange {
                value: bad as u32,
                p: 2,
            });
        }
        Ok(QuadraticFormF2 { m, coeffs })
    }

    /// Sum of the monomials `x_i x_j` (zero-based, either order); repeated pairs cancel.
    pub fn from_terms(m: usize, terms: &[(usize, usize)]) -> Result<Self> {
        let mut q = QuadraticFormF2::zero(m);
        for &(i, j) in terms {
            if i >= m || j >= m {
                return Err(Error::DimensionMismatch(format!(
                    "monomial x{}x{} in {m} variables",
                    i + 1,
                    j + 1
                )));
            }
            q.toggle(i, j);
        }
        Ok(q)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> u8 {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[tri_index(self.m, a, b)]
    }

    pub fn toggle(&mut self, i: usize, j: usize) {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[tri_index(self.m, a, b)] ^= 1;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Monomials present, as zero-based `(i, j)` with `i <= j`, in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.m;
        (0..m)
            .flat_map(move |i| (i..m).map(move |j| (i, j)))
            .filter(|&(i, j)| self.coeff(i, j) == 1)
    }

    pub fn add(&self, other: &QuadraticFormF2) -> Result<QuadraticFormF2> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch("sum of forms".into()));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a ^ b).collect();
        Ok(QuadraticFormF2 { m: self.m, coeffs })
    }

    /// `Q(v)` for `v` given as residues.
    pub fn eval(&self, v: &[u8]) -> u8 {
        self.terms().fold(0, |acc, (i, j)| acc ^ (v[i] & v[j] & 1))
    }

    /// `Q(v)` for `v` packed as a bitmask (bit `i` = coordinate `i`).
    pub fn eval_mask(&self, v: u64) -> u8 {
        self.terms()
            .fold(0, |acc, (i, j)| acc ^ ((v >> i) & (v >> j) & 1) as u8)
    }

    /// The substituted form `v -> Q(W v)`.
    pub fn pullback(&self, w: &FpMatrix) -> QuadraticFormF2 {
        let m = self.m;
        let mut out = vec![0u8; tri_len(m)];
        for (i, j) in self.terms() {
            let (ri, rj) = (w.row(i), w.row(j));
            for k in 0..m {
                if ri[k] & rj[k] == 1 {
                    out[tri_index(m, k, k)] ^= 1;
                }
                for l in k + 1..m {
                    out[tri_index(m, k, l)] ^= (ri[k] & rj[l]) ^ (ri[l] & rj[k]);
                }
            }
        }
        QuadraticFormF2 { m, coeffs: out }
    }

    /// The transformed form `s·Q`, defined by `(s·Q)(v) = Q(s⁻¹ v)`.
    pub fn change_basis(&self, s: &FpMatrix) -> Result<QuadraticFormF2> {
        self.check_matrix(s)?;
        Ok(self.pullback(&s.inverse()?))
    }

    pub(crate) fn check_matrix(&self, s: &FpMatrix) -> Result<()> {
        if s.prime() != Prime::TWO {
            return Err(Error::PrimeMismatch(2, s.prime().get()));
        }
        if s.rows() != self.m || s.cols() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix acting on a form in {} variables",
                s.rows(),
                s.cols(),
                self.m
            )));
        }
        Ok(())
    }
}
