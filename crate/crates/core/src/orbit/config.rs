use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::FpMatrix;

/// Limits that keep every computation at desk scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// largest group that may be enumerated element by element
    pub enumeration: u64,
    /// largest affine solution space that may be enumerated
    pub affine: u64,
    /// largest element list kept in a report
    pub elements: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: 30_000_000,
            affine: 1_000_000,
            elements: 10_000,
        }
    }
}

/// How a matrix acts on classes.
///
/// `Inverse` is `(s·q)(v) = q(s⁻¹ v)` and `[E] ↦ [E]·t⁻¹`; `Transpose` replaces both
/// inverses by transposes. Reported orders agree under either choice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Inverse,
    Transpose,
}

impl Convention {
    /// The substitution `W` realizing `s` on the `V` side, or the mixing matrix realizing
    /// `t` on the `N` side.
    pub fn substitution(self, a: &FpMatrix) -> Result<FpMatrix> {
        match self {
            Convention::Inverse => a.inverse(),
            Convention::Transpose => Ok(a.transpose()),
        }
    }

    /// Inverse of [`Convention::substitution`].
    pub fn from_substitution(self, w: &FpMatrix) -> Result<FpMatrix> {
        match self {
            Convention::Inverse => w.inverse(),
            Convention::Transpose => Ok(w.transpose()),
        }
    }

    /// The automorphism of `V` (columns are images of basis vectors) induced by an
    /// acting matrix `s`.
    pub fn quotient_automorphism(self, s: &FpMatrix) -> Result<FpMatrix> {
        match self {
            Convention::Inverse => Ok(s.clone()),
            Convention::Transpose => Ok(s.inverse()?.transpose()),
        }
    }

    /// The automorphism `τ` of `N` induced by an acting matrix `t`: a pair fixes `[E]`
    /// iff `τ ∘ E = E ∘ (σ × σ)`.
    pub fn kernel_automorphism(self, t: &FpMatrix) -> Result<FpMatrix> {
        match self {
            Convention::Inverse => Ok(t.inverse()?.transpose()),
            Convention::Transpose => Ok(t.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub caps: Caps,
    pub workers: usize,
    pub convention: Convention,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            caps: Caps::default(),
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            convention: Convention::Inverse,
        }
    }
}

impl EngineConfig {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }
}

/// Chunks per worker; finer chunks balance uneven work.
const CHUNKS_PER_WORKER: usize = 4;

/// Runs `f` on contiguous pieces of `0..len` and returns the results in piece order.
///
/// The output depends only on `len` and `f`, never on the worker count, as long as the
/// caller folds the pieces in order.
pub fn run_chunked<T, F>(len: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    let workers = workers.max(1);
    let pieces = split(len, workers * CHUNKS_PER_WORKER);
    if workers == 1 || pieces.len() <= 1 {
        return Ok(pieces.into_iter().map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        use rayon::prelude::*;
        pieces.into_par_iter().map(&f).collect()
    }))
}

fn split(len: u64, k: usize) -> Vec<Range<u64>> {
    let k = (k.max(1) as u64).min(len.max(1));
    let (base, extra) = (len / k, len % k);
    let mut start = 0;
    (0..k)
        .map(|i| {
            let size = base + u64::from(i < extra);
            let r = start..start + size;
            start += size;
            r
        })
        .collect()
}
