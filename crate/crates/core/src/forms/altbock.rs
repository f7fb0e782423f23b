use crate::error::{Error, Result};
use crate::fp::{FpMatrix, Prime};

/// Number of pairs `i < j` among `m` variables.
pub fn strict_len(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

#[inline]
pub fn strict_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

/// A degree-two class over odd `p`: `sum_{i<j} l_ij x_i∧x_j + sum_i b_i βx_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlternatingBockstein {
    p: Prime,
    m: usize,
    alt: Vec<u8>,
    bock: Vec<u8>,
}

impl AlternatingBockstein {
    pub fn zero(p: Prime, m: usize) -> Result<Self> {
        if !p.is_odd() {
            return Err(Error::InvalidInput(
                "alternating/Bockstein classes need an odd prime".into(),
            ));
        }
        Ok(AlternatingBockstein {
            p,
            m,
            alt: vec![0; strict_len(m)],
            bock: vec![0; m],
        })
    }

    pub fn new(p: Prime, m: usize, alt: Vec<u8>, bock: Vec<u8>) -> Result<Self> {
        let mut z = AlternatingBockstein::zero(p, m)?;
        if alt.len() != z.alt.len() || bock.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "alternating part of length {} and Bockstein part of length {} for m = {m}",
                alt.len(),
                bock.len()
            )));
        }
        if let Some(&bad) = alt.iter().chain(&bock).find(|&&c| c as u32 >= p.get()) {
            return Err(Error::EntryOutOfRange {
                value: bad as u32,
                p: p.get(),
            });
        }
        z.alt = alt;
        z.bock = bock;
        Ok(z)
    }

    /// `sum_k c_k x_{i_k}∧x_{j_k}` with zero-based indices; `i > j` contributes `-c`.
    pub fn from_wedges(p: Prime, m: usize, wedges: &[(usize, usize, i64)]) -> Result<Self> {
        let mut z = AlternatingBockstein::zero(p, m)?;
        for &(i, j, c) in wedges {
            z.add_wedge(i, j, c)?;
        }
        Ok(z)
    }

    pub fn add_wedge(&mut self, i: usize, j: usize, c: i64) -> Result<()> {
        if i >= self.m || j >= self.m || i == j {
            return Err(Error::DimensionMismatch(format!(
                "wedge x{}∧x{} in {} variables",
                i + 1,
                j + 1,
                self.m
            )));
        }
        let p = self.p;
        let (a, b, c) = if i < j { (i, j, c) } else { (j, i, -c) };
        let k = strict_index(self.m, a, b);
        self.alt[k] = p.add(self.alt[k], p.reduce(c));
        Ok(())
    }

    pub fn add_bockstein(&mut self, i: usize, c: i64) -> Result<()> {
        if i >= self.m {
            return Err(Error::DimensionMismatch(format!("βx{} in {} variables", i + 1, self.m)));
        }
        self.bock[i] = self.p.add(self.bock[i], self.p.reduce(c));
        Ok(())
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn alt(&self) -> &[u8] {
        &self.alt
    }

    pub fn bock(&self) -> &[u8] {
        &self.bock
    }

    /// Coefficient of `x_i∧x_j` (antisymmetric in `i, j`).
    pub fn wedge(&self, i: usize, j: usize) -> u8 {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.alt[strict_index(self.m, i, j)],
            Greater => self.p.neg(self.alt[strict_index(self.m, j, i)]),
            Equal => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alt.iter().chain(&self.bock).all(|&c| c == 0)
    }

    /// Pullback along `W`: the 2-form becomes `Wᵀ Λ W` and the 1-form `b W`.
    pub fn pullback(&self, w: &FpMatrix) -> AlternatingBockstein {
        let (p, m) = (self.p, self.m);
        let q = p.get();
        let mut alt = vec![0u8; self.alt.len()];
        for k in 0..m {
            for l in k + 1..m {
                let mut acc = 0u32;
                for i in 0..m {
                    for j in i + 1..m {
                        let c = self.alt[strict_index(m, i, j)] as u32;
                        if c != 0 {
                            let plus = w.get(i, k) as u32 * w.get(j, l) as u32;
                            let minus = w.get(j, k) as u32 * w.get(i, l) as u32;
                            acc += c * ((plus + q * q - minus) % q);
                        }
                    }
                }
                alt[strict_index(m, k, l)] = (acc % q) as u8;
            }
        }
        let bock = (0..m)
            .map(|k| {
                let s: u32 = (0..m).map(|i| self.bock[i] as u32 * w.get(i, k) as u32).sum();
                (s % q) as u8
            })
            .collect();
        AlternatingBockstein { p, m, alt, bock }
    }

    /// `s·c` with `(s·c)(v) = c(s⁻¹ v)`.
    pub fn change_basis(&self, s: &FpMatrix) -> Result<AlternatingBockstein> {
        self.check_matrix(s)?;
        Ok(self.pullback(&s.inverse()?))
    }

    pub(crate) fn check_matrix(&self, s: &FpMatrix) -> Result<()> {
        if s.prime() != self.p {
            return Err(Error::PrimeMismatch(self.p.get(), s.prime().get()));
        }
        if s.rows() != self.m || s.cols() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix acting on a class in {} variables",
                s.rows(),
                s.cols(),
                self.m
            )));
        }
        Ok(())
    }
}
