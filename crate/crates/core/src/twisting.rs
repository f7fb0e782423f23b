//! Pairs `(σ, τ) ∈ GL_m × GL_n` compatible with a twisting `χ: F_p^m → GL_n(F_p)`.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{FpMatrix, GlEnumeration, Prime, Subspace};
use crate::orbit::{run_chunked, EngineConfig, Method, Pair, Side, StabilizerReport};

/// A homomorphism from an elementary abelian group of rank `q_rank` to `GL_{n_rank}`,
/// given by the images of the basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TwistingJson", into = "TwistingJson")]
pub struct TwistingMap {
    p: Prime,
    q_rank: usize,
    n_rank: usize,
    images: Vec<FpMatrix>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistingJson {
    p: u32,
    q_rank: usize,
    n_rank: usize,
    images: Vec<Vec<Vec<i64>>>,
}

impl TryFrom<TwistingJson> for TwistingMap {
    type Error = Error;

    fn try_from(j: TwistingJson) -> Result<Self> {
        let p = Prime::new(j.p)?;
        let images = j
            .images
            .iter()
            .map(|rows| {
                if rows.iter().any(|r| r.iter().any(|&x| x < 0 || x >= p.get() as i64)) {
                    return Err(Error::InvalidTwisting("matrix entry out of range".into()));
                }
                FpMatrix::from_rows(p, rows)
            })
            .collect::<Result<Vec<_>>>()?;
        TwistingMap::new(p, j.q_rank, j.n_rank, images)
    }
}

impl From<TwistingMap> for TwistingJson {
    fn from(t: TwistingMap) -> Self {
        TwistingJson {
            p: t.p.get(),
            q_rank: t.q_rank,
            n_rank: t.n_rank,
            images: t
                .images
                .iter()
                .map(|a| (0..a.rows()).map(|i| a.row(i).iter().map(|&x| x as i64).collect()).collect())
                .collect(),
        }
    }
}

impl TwistingMap {
    /// Checks that the images are invertible, commute pairwise and have order dividing `p`.
    pub fn new(p: Prime, q_rank: usize, n_rank: usize, images: Vec<FpMatrix>) -> Result<Self> {
        if images.len() != q_rank {
            return Err(Error::InvalidTwisting(format!(
                "{} images for a group of rank {q_rank}",
                images.len()
            )));
        }
        for (i, a) in images.iter().enumerate() {
            if a.prime() != p || a.rows() != n_rank || a.cols() != n_rank {
                return Err(Error::InvalidTwisting(format!("image {i} is not an element of GL_{n_rank}(F_{p})")));
            }
            if !a.pow(p.get() as u64)?.is_identity() {
                return Err(Error::InvalidTwisting(format!("image {i} does not have order dividing {p}")));
            }
        }
        for i in 0..q_rank {
            for j in i + 1..q_rank {
                if images[i].mul(&images[j])? != images[j].mul(&images[i])? {
                    return Err(Error::InvalidTwisting(format!("images {i} and {j} do not commute")));
                }
            }
        }
        Ok(TwistingMap {
            p,
            q_rank,
            n_rank,
            images,
        })
    }

    pub fn trivial(p: Prime, q_rank: usize, n_rank: usize) -> Self {
        TwistingMap {
            p,
            q_rank,
            n_rank,
            images: vec![FpMatrix::identity(p, n_rank); q_rank],
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn q_rank(&self) -> usize {
        self.q_rank
    }

    pub fn n_rank(&self) -> usize {
        self.n_rank
    }

    pub fn images(&self) -> &[FpMatrix] {
        &self.images
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(FpMatrix::is_identity)
    }

    /// `χ(v) = Π χ(e_i)^{v_i}`.
    pub fn eval(&self, v: &[u8]) -> FpMatrix {
        self.images
            .iter()
            .zip(v)
            .fold(FpMatrix::identity(self.p, self.n_rank), |acc, (a, &k)| {
                acc.mul_unchecked(&a.pow(k as u64).expect("square image"))
            })
    }

    /// `ker χ`, found by running over all of `F_p^m`.
    pub fn kernel(&self, cap: u64) -> Result<Subspace> {
        let total = BigUint::from(self.p.get()).pow(self.q_rank as u32);
        let full = Subspace::full(self.p, self.q_rank);
        if total > BigUint::from(cap) {
            return Err(Error::cap(total, cap));
        }
        let mut ker = Subspace::zero(self.p, self.q_rank);
        for v in full.elements() {
            if self.eval(&v).is_identity() {
                ker.insert(&v)?;
            }
        }
        Ok(ker)
    }

    fn check_pair(&self, sigma: &FpMatrix, tau: &FpMatrix) -> Result<()> {
        if sigma.rows() != self.q_rank || sigma.cols() != self.q_rank {
            return Err(Error::DimensionMismatch(format!("σ must be {0}x{0}", self.q_rank)));
        }
        if tau.rows() != self.n_rank || tau.cols() != self.n_rank {
            return Err(Error::DimensionMismatch(format!("τ must be {0}x{0}", self.n_rank)));
        }
        if sigma.prime() != self.p || tau.prime() != self.p {
            return Err(Error::PrimeMismatch(self.p.get(), sigma.prime().get().max(tau.prime().get())));
        }
        Ok(())
    }
}

/// Whether `χ(σ q) = τ χ(q) τ⁻¹` for every basis vector `q`.
pub fn c_chi_membership(chi: &TwistingMap, sigma: &FpMatrix, tau: &FpMatrix) -> Result<bool> {
    chi.check_pair(sigma, tau)?;
    if !sigma.is_invertible() || !tau.is_invertible() {
        return Ok(false);
    }
    for (j, y) in chi.images.iter().enumerate() {
        let x = chi.eval(&sigma.column(j));
        if x.mul(tau)? != tau.mul(y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The linear conditions `X_j τ = τ Y_j` on the entries of `τ`, as a kernel.
fn tau_space(chi: &TwistingMap, sigma: &FpMatrix) -> Subspace {
    let (p, n) = (chi.p, chi.n_rank);
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for (j, y) in chi.images.iter().enumerate() {
        let x = chi.eval(&sigma.column(j));
        // entry (a, b) of Xτ − τY, as a functional on τ (row-major)
        for a in 0..n {
            for b in 0..n {
                let mut row = vec![0u8; n * n];
                for k in 0..n {
                    let i = k * n + b;
                    row[i] = p.add(row[i], x.get(a, k));
                    let i = a * n + k;
                    row[i] = p.sub(row[i], y.get(k, b));
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Subspace::full(p, n * n);
    }
    let flat: Vec<u8> = rows.concat();
    FpMatrix::new(p, rows.len(), n * n, flat).expect("consistent shape").kernel()
}

/// `C_χ`: all compatible pairs, by running over `GL_m` and the solution space in `τ`.
pub fn c_chi(chi: &TwistingMap, cfg: &EngineConfig) -> Result<StabilizerReport> {
    let (p, n) = (chi.p, chi.n_rank);
    let gl = GlEnumeration::new(chi.q_rank, p, cfg.caps.enumeration)?;
    let keep = cfg.caps.elements as usize;
    let affine = cfg.caps.affine;
    let parts = run_chunked(gl.len(), cfg.workers, |range| -> Result<(u64, Vec<Pair>)> {
        let mut count = 0u64;
        let mut els = Vec::new();
        for sigma in gl.range(range) {
            let space = tau_space(chi, &sigma);
            if BigUint::from(space.cardinality()) > BigUint::from(affine) {
                return Err(Error::cap(space.cardinality(), affine));
            }
            for v in space.elements() {
                let tau = FpMatrix::new(p, n, n, v).expect("n x n");
                if tau.is_invertible() {
                    count += 1;
                    if els.len() <= keep {
                        els.push((sigma.clone(), tau));
                    }
                }
            }
        }
        Ok((count, els))
    })?;
    let mut order = 0u64;
    let mut elements = Vec::new();
    for part in parts {
        let (c, els) = part?;
        order += c;
        elements.extend(els);
    }
    let elements = (order <= cfg.caps.elements).then(|| {
        elements.sort();
        elements
    });
    Ok(StabilizerReport {
        side: Side::Joint,
        order: BigUint::from(order),
        elements,
        method: Method::Enumeration,
    })
}
