use crate::error::{Error, Result};
use crate::fp::Prime;

/// A subspace of F_p^n stored as a reduced row-echelon basis.
///
/// The echelon form is unique, so structural equality is subspace equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: Prime,
    ambient_dim: usize,
    basis: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: Prime, ambient_dim: usize) -> Self {
        Subspace {
            p,
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: Prime, ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut v = vec![0u8; ambient_dim];
                v[i] = 1;
                v
            })
            .collect();
        Subspace {
            p,
            ambient_dim,
            basis,
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn span<I, V>(p: Prime, ambient_dim: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u8]>,
    {
        let mut s = Subspace::zero(p, ambient_dim);
        for v in vectors {
            s.insert(v.as_ref())?;
        }
        Ok(s)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    /// Reduces `v` against the basis in place; the result is zero iff `v` was in the span.
    fn reduce_in_place(&self, v: &mut [u8]) {
        let p = self.p;
        for (b, &piv) in self.basis.iter().zip(&self.pivots) {
            let c = v[piv];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = p.sub(*x, p.mul(c, y));
                }
            }
        }
    }

    fn check_len(&self, v: &[u8]) -> Result<()> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in F_{}^{}",
                v.len(),
                self.p,
                self.ambient_dim
            )));
        }
        Ok(())
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let mut w: Vec<u8> = v.iter().map(|&x| x % self.p.get() as u8).collect();
        self.reduce_in_place(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the spanning set. Returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u8]) -> Result<bool> {
        self.check_len(v)?;
        let p = self.p;
        let mut w: Vec<u8> = v.iter().map(|&x| (x as u32 % p.get()) as u8).collect();
        self.reduce_in_place(&mut w);
        let Some(piv) = w.iter().position(|&x| x != 0) else {
            return Ok(false);
        };
        let inv = p.inv(w[piv]).expect("nonzero pivot");
        for x in w.iter_mut() {
            *x = p.mul(*x, inv);
        }
        // clear the new pivot column from the existing rows
        for b in self.basis.iter_mut() {
            let c = b[piv];
            if c != 0 {
                for (x, &y) in b.iter_mut().zip(&w) {
                    *x = p.sub(*x, p.mul(c, y));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < piv);
        self.pivots.insert(at, piv);
        self.basis.insert(at, w);
        Ok(true)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|b| other.contains(b))
    }

    /// Number of vectors, `p^dim`.
    pub fn cardinality(&self) -> u128 {
        (self.p.get() as u128).pow(self.dim() as u32)
    }

    /// Every vector of the subspace, in lexicographic order of coefficient tuples.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        let p = self.p;
        let d = self.dim();
        let total = self.cardinality();
        (0..total).map(move |mut idx| {
            let mut coeffs = vec![0u8; d];
            for c in coeffs.iter_mut().rev() {
                *c = (idx % p.get() as u128) as u8;
                idx /= p.get() as u128;
            }
            let mut v = vec![0u8; self.ambient_dim];
            for (c, b) in coeffs.iter().zip(&self.basis) {
                if *c != 0 {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = p.add(*x, p.mul(*c, y));
                    }
                }
            }
            v
        })
    }
}
