use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{FpMatrix, Prime, Subspace};
use crate::forms::quadratic::QuadraticFormF2;

/// Largest number of variables accepted by [`arf_democratic`].
pub const MAX_DEMOCRATIC_VARS: usize = 24;

/// The complete invariant `(dim V, dim bilrad, Arf)` of a form over F_2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormTriple {
    pub dim: usize,
    pub bilrad_dim: usize,
    pub arf: i8,
}

/// Matrix of the polarization `B(x, y) = Q(x+y) + Q(x) + Q(y)`.
pub fn bilinear_of(q: &QuadraticFormF2) -> FpMatrix {
    FpMatrix::from_fn(Prime::TWO, q.m(), q.m(), |i, j| {
        if i == j {
            0
        } else {
            q.coeff(i, j) as i64
        }
    })
}

pub(crate) fn bilinear_eval(q: &QuadraticFormF2, u: &[u8], v: &[u8]) -> u8 {
    let m = q.m();
    let mut acc = 0;
    for i in 0..m {
        if u[i] == 0 {
            continue;
        }
        for j in 0..m {
            if i != j && v[j] == 1 {
                acc ^= q.coeff(i, j);
            }
        }
    }
    acc
}

pub fn bilrad(q: &QuadraticFormF2) -> Subspace {
    bilinear_of(q).kernel()
}

/// `{x ∈ bilrad : Q(x) = 0}`. `Q` is additive on the bilinear radical, so this is a subspace.
pub fn rad(q: &QuadraticFormF2) -> Subspace {
    let br = bilrad(q);
    let basis = br.basis();
    let odd = basis.iter().find(|b| q.eval(b) == 1);
    let gens = basis.iter().map(|b| match odd {
        Some(o) if q.eval(b) == 1 => b.iter().zip(o).map(|(x, y)| x ^ y).collect(),
        _ => b.clone(),
    });
    Subspace::span(Prime::TWO, q.m(), gens).expect("vectors of length m")
}

/// Majority rule: `+1` if `Q` vanishes on more than half of `F_2^m`, `-1` if it is
/// `1` on more than half, `0` on a tie.
pub fn arf_democratic(q: &QuadraticFormF2) -> Result<i8> {
    let m = q.m();
    if m > MAX_DEMOCRATIC_VARS {
        return Err(Error::InvalidInput(format!(
            "democratic Arf invariant is limited to {MAX_DEMOCRATIC_VARS} variables, got {m}"
        )));
    }
    // walk F_2^m in Gray-code order, updating Q(v) by the partial derivative at each flip
    let mut v = 0u64;
    let mut value = 0u8;
    let mut ones = 0u64;
    let diag: Vec<u8> = (0..m).map(|i| q.coeff(i, i)).collect();
    let masks: Vec<u64> = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i && q.coeff(i, j) == 1)
                .fold(0, |acc, j| acc | 1 << j)
        })
        .collect();
    for step in 1..(1u64 << m) {
        let i = step.trailing_zeros() as usize;
        // Q(v + e_i) = Q(v) + Q(e_i) + B(v, e_i)
        value ^= diag[i] ^ ((v & masks[i]).count_ones() & 1) as u8;
        v ^= 1 << i;
        ones += value as u64;
    }
    let zeros = (1u64 << m) - ones;
    Ok(match zeros.cmp(&ones) {
        std::cmp::Ordering::Greater => 1,
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
    })
}

/// A symplectic decomposition of `F_2^m` for the polarization of `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticDecomposition {
    pub pairs: Vec<(Vec<u8>, Vec<u8>)>,
    /// basis of the bilinear radical
    pub radical: Vec<Vec<u8>>,
}

/// Greedy construction from an ordered basis of `F_2^m`.
///
/// Repeatedly takes the first vector with a partner in the working list and the first
/// such partner, then projects the remaining vectors off the new hyperbolic plane.
/// Whatever has no partner at the end spans the bilinear radical.
pub fn symplectic_decomposition_from(
    q: &QuadraticFormF2,
    start: &[Vec<u8>],
) -> Result<SymplecticDecomposition> {
    let m = q.m();
    if start.len() != m || start.iter().any(|v| v.len() != m) {
        return Err(Error::DimensionMismatch(format!(
            "starting basis must consist of {m} vectors of length {m}"
        )));
    }
    if Subspace::span(Prime::TWO, m, start)?.dim() != m {
        return Err(Error::InvalidInput("starting vectors are not a basis".into()));
    }
    let mut work: Vec<Vec<u8>> = start.iter().map(|v| v.iter().map(|x| x & 1).collect()).collect();
    let mut pairs = Vec::new();
    loop {
        let found = (0..work.len()).find_map(|a| {
            (0..work.len())
                .find(|&b| bilinear_eval(q, &work[a], &work[b]) == 1)
                .map(|b| (a, b))
        });
        let Some((a, b)) = found else { break };
        let (u, v) = (work[a].clone(), work[b].clone());
        let (hi, lo) = if a > b { (a, b) } else { (b, a) };
        work.remove(hi);
        work.remove(lo);
        for w in work.iter_mut() {
            let bu = bilinear_eval(q, w, &u);
            let bv = bilinear_eval(q, w, &v);
            for k in 0..m {
                w[k] ^= (bv & u[k]) ^ (bu & v[k]);
            }
        }
        pairs.push((u, v));
    }
    Ok(SymplecticDecomposition {
        pairs,
        radical: work,
    })
}

pub fn symplectic_decomposition(q: &QuadraticFormF2) -> SymplecticDecomposition {
    symplectic_decomposition_from(q, &standard_basis(q.m())).expect("standard basis")
}

pub(crate) fn standard_basis(m: usize) -> Vec<Vec<u8>> {
    (0..m)
        .map(|i| (0..m).map(|j| (i == j) as u8).collect())
        .collect()
}

fn arf_of_pairs(q: &QuadraticFormF2, d: &SymplecticDecomposition) -> Result<i8> {
    if !d.radical.is_empty() {
        return Err(Error::DegenerateForm);
    }
    let sum = d.pairs.iter().fold(0, |acc, (u, v)| acc ^ (q.eval(u) & q.eval(v)));
    Ok(if sum == 0 { 1 } else { -1 })
}

/// `sum Q(u_i) Q(v_i)` over a symplectic basis, written multiplicatively as `±1`.
pub fn arf_symplectic(q: &QuadraticFormF2) -> Result<i8> {
    arf_of_pairs(q, &symplectic_decomposition(q))
}

/// [`arf_symplectic`] with the greedy construction seeded by `start`.
pub fn arf_symplectic_from(q: &QuadraticFormF2, start: &[Vec<u8>]) -> Result<i8> {
    arf_of_pairs(q, &symplectic_decomposition_from(q, start)?)
}

pub fn classify(q: &QuadraticFormF2) -> Result<FormTriple> {
    Ok(FormTriple {
        dim: q.m(),
        bilrad_dim: bilrad(q).dim(),
        arf: arf_democratic(q)?,
    })
}

/// Block sum `q1 ⊕ q2` on `m1 + m2` variables, `q2` on the trailing block.
pub fn direct_sum(q1: &QuadraticFormF2, q2: &QuadraticFormF2) -> QuadraticFormF2 {
    let off = q1.m();
    let terms: Vec<_> = q1
        .terms()
        .chain(q2.terms().map(|(i, j)| (i + off, j + off)))
        .collect();
    QuadraticFormF2::from_terms(off + q2.m(), &terms).expect("indices in range")
}

/// Verdict on multiplicativity of the Arf invariant for a block sum: `None` when a
/// summand has invariant `0`, otherwise whether `Arf(q1 ⊕ q2) = Arf(q1)·Arf(q2)`.
pub fn arf_direct_sum_check(q1: &QuadraticFormF2, q2: &QuadraticFormF2) -> Result<Option<bool>> {
    let (a1, a2) = (arf_democratic(q1)?, arf_democratic(q2)?);
    if a1 == 0 || a2 == 0 {
        return Ok(None);
    }
    Ok(Some(arf_democratic(&direct_sum(q1, q2))? == a1 * a2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(m: usize, terms: &[(usize, usize)]) -> QuadraticFormF2 {
        QuadraticFormF2::from_terms(m, terms).unwrap()
    }

    fn brute_counts(q: &QuadraticFormF2) -> (u64, u64) {
        let ones = (0..1u64 << q.m()).filter(|&v| q.eval_mask(v) == 1).count() as u64;
        ((1 << q.m()) - ones, ones)
    }

    #[test]
    fn bilinear_examples() {
        let p2 = Prime::TWO;
        assert_eq!(bilinear_of(&f(2, &[(0, 1)])), FpMatrix::from_rows(p2, &[[0, 1], [1, 0]]).unwrap());
        assert_eq!(bilinear_of(&f(1, &[(0, 0)])), FpMatrix::zero(p2, 1, 1));
        let q = f(3, &[(0, 0), (1, 2)]);
        let b = bilinear_of(&q);
        let e = standard_basis(3);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = e[i].clone();
                for k in 0..3 {
                    s[k] ^= e[j][k];
                }
                let polar = q.eval(&s) ^ q.eval(&e[i]) ^ q.eval(&e[j]);
                assert_eq!(b.get(i, j), polar);
            }
        }
    }

    #[test]
    fn radicals() {
        let phi4 = f(4, &[(0, 1), (2, 3)]);
        assert_eq!(bilrad(&phi4).dim(), 0);
        assert_eq!(rad(&phi4).dim(), 0);
        let sq = f(3, &[(0, 0)]);
        assert_eq!(bilrad(&sq).dim(), 3);
        let r = rad(&sq);
        assert_eq!(r.dim(), 2);
        assert!(r.elements().all(|v| v[0] == 0));
        let z = QuadraticFormF2::zero(2);
        assert_eq!((bilrad(&z).dim(), rad(&z).dim()), (2, 2));
    }

    #[test]
    fn democratic_examples() {
        assert_eq!(arf_democratic(&f(2, &[(0, 1)])).unwrap(), 1);
        assert_eq!(arf_democratic(&f(2, &[(0, 0), (0, 1), (1, 1)])).unwrap(), -1);
        assert_eq!(arf_democratic(&f(3, &[(0, 0), (1, 2)])).unwrap(), 0);
        assert_eq!(brute_counts(&f(2, &[(0, 1)])), (3, 1));
    }

    #[test]
    fn democratic_matches_brute_force_counts() {
        for code in 0u32..64 {
            let coeffs = (0..6).map(|b| (code >> b & 1) as u8).collect();
            let q = QuadraticFormF2::new(3, coeffs).unwrap();
            let (z, o) = brute_counts(&q);
            let want = match z.cmp(&o) {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Less => -1,
                std::cmp::Ordering::Equal => 0,
            };
            assert_eq!(arf_democratic(&q).unwrap(), want);
        }
    }

    #[test]
    fn symplectic_examples() {
        assert_eq!(arf_symplectic(&f(4, &[(0, 1), (2, 3)])).unwrap(), 1);
        assert_eq!(arf_symplectic(&f(4, &[(0, 1), (2, 2), (2, 3), (3, 3)])).unwrap(), -1);
        assert!(matches!(arf_symplectic(&f(3, &[(0, 0), (1, 2)])), Err(Error::DegenerateForm)));
    }

    #[test]
    fn classify_examples() {
        let t = |dim, bilrad_dim, arf| FormTriple { dim, bilrad_dim, arf };
        assert_eq!(classify(&f(3, &[(0, 0), (1, 2)])).unwrap(), t(3, 1, 0));
        let phi6m = f(6, &[(0, 1), (2, 3), (4, 4), (4, 5), (5, 5)]);
        assert_eq!(classify(&phi6m).unwrap(), t(6, 0, -1));
        assert_eq!(classify(&QuadraticFormF2::zero(2)).unwrap(), t(2, 2, 1));
    }

    #[test]
    fn direct_sums() {
        let h = f(2, &[(0, 1)]);
        let a = f(2, &[(0, 0), (0, 1), (1, 1)]);
        assert_eq!(arf_democratic(&direct_sum(&h, &h)).unwrap(), 1);
        assert_eq!(arf_direct_sum_check(&h, &h).unwrap(), Some(true));
        assert_eq!(arf_democratic(&direct_sum(&h, &a)).unwrap(), -1);
        assert_eq!(arf_direct_sum_check(&h, &a).unwrap(), Some(true));
        let x2 = f(1, &[(0, 0)]);
        assert_eq!(arf_direct_sum_check(&x2, &x2).unwrap(), None);
    }

    /// On shared variables the invariants of the summands do not determine the sum.
    #[test]
    fn overlapping_sum_is_not_additive() {
        let x2 = f(2, &[(0, 0)]);
        let xy_y2 = f(2, &[(0, 1), (1, 1)]);
        let sum = x2.add(&xy_y2).unwrap();
        let (a, b, c) = (
            arf_democratic(&x2).unwrap(),
            arf_democratic(&xy_y2).unwrap(),
            arf_democratic(&sum).unwrap(),
        );
        assert_eq!((a, b, c), (0, 1, -1));
        assert_ne!(a * b, c);
    }

    #[test]
    fn democratic_limit() {
        assert!(arf_democratic(&QuadraticFormF2::zero(25)).is_err());
    }
}
