use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{FpMatrix, GlEnumeration, Prime};
use crate::forms::arf::{classify, symplectic_decomposition, FormTriple};
use crate::forms::quadratic::QuadraticFormF2;

/// Witness searches enumerate `GL_m(F_2)` and are limited to this many variables.
pub const MAX_WITNESS_VARS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StandardKind {
    Plus,
    Minus,
    Odd,
}

impl fmt::Display for StandardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StandardKind::Plus => "plus",
            StandardKind::Minus => "minus",
            StandardKind::Odd => "odd",
        })
    }
}

/// `Φ⁺ = x1x2 + … + x_{m-1}x_m`, `Φ⁻` with the last pair anisotropic,
/// `Φ = x1² + x2x3 + … + x_{m-1}x_m`.
pub fn standard_form(kind: StandardKind, m: usize) -> Result<QuadraticFormF2> {
    standard_padded(kind, m, 0)
}

/// A standard form on the first `core` variables of `core + pad`.
fn standard_padded(kind: StandardKind, core: usize, pad: usize) -> Result<QuadraticFormF2> {
    let mut terms = Vec::new();
    match kind {
        StandardKind::Plus | StandardKind::Minus => {
            if core % 2 != 0 {
                return Err(Error::ParityMismatch {
                    kind: if kind == StandardKind::Plus { "plus" } else { "minus" },
                    expected: "even",
                    m: core,
                });
            }
            if kind == StandardKind::Minus && core == 0 {
                return Err(Error::InvalidInput("the minus form needs at least 2 variables".into()));
            }
            terms.extend((0..core / 2).map(|k| (2 * k, 2 * k + 1)));
            if kind == StandardKind::Minus {
                terms.push((core - 2, core - 2));
                terms.push((core - 1, core - 1));
            }
        }
        StandardKind::Odd => {
            if core % 2 != 1 {
                return Err(Error::ParityMismatch {
                    kind: "odd",
                    expected: "odd",
                    m: core,
                });
            }
            terms.push((0, 0));
            terms.extend((0..core / 2).map(|k| (2 * k + 1, 2 * k + 2)));
        }
    }
    QuadraticFormF2::from_terms(core + pad, &terms)
}

/// The standard representative with a given invariant, padded with unused variables,
/// together with its kind and number of used variables.
pub fn standard_for_triple(t: FormTriple) -> Result<(StandardKind, usize, QuadraticFormF2)> {
    let bad = || Error::InvalidInput(format!("no quadratic form has invariant {t:?}"));
    if t.bilrad_dim > t.dim {
        return Err(bad());
    }
    let (kind, core) = match t.arf {
        0 if t.bilrad_dim >= 1 => (StandardKind::Odd, t.dim - t.bilrad_dim + 1),
        1 => (StandardKind::Plus, t.dim - t.bilrad_dim),
        -1 if t.dim > t.bilrad_dim => (StandardKind::Minus, t.dim - t.bilrad_dim),
        _ => return Err(bad()),
    };
    let q = standard_padded(kind, core, t.dim - core).map_err(|_| bad())?;
    Ok((kind, core, q))
}

fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

/// A change of basis `s` with `s·q` a padded standard form.
pub fn reduce_to_standard(q: &QuadraticFormF2) -> Result<(FpMatrix, QuadraticFormF2)> {
    if q.is_zero() {
        return Err(Error::ZeroForm);
    }
    let m = q.m();
    let d = symplectic_decomposition(q);
    let mut hyperbolic = Vec::new();
    let mut anisotropic = Vec::new();
    for (u, v) in d.pairs {
        match (q.eval(&u), q.eval(&v)) {
            (0, 0) => hyperbolic.push((u, v)),
            (1, 0) => hyperbolic.push((xor(&u, &v), v)),
            (0, 1) => {
                let w = xor(&u, &v);
                hyperbolic.push((u, w))
            }
            _ => anisotropic.push((u, v)),
        }
    }
    // two anisotropic planes sum to two hyperbolic ones
    while anisotropic.len() >= 2 {
        let (u2, v2) = anisotropic.pop().expect("len >= 2");
        let (u1, v1) = anisotropic.pop().expect("len >= 2");
        let a = xor(&u1, &u2);
        let b = xor(&v1, &a);
        let v12 = xor(&v1, &v2);
        let c = xor(&u2, &v12);
        hyperbolic.push((a, b));
        hyperbolic.push((c, v12));
    }
    let mut radical = d.radical;
    let odd_pos = radical.iter().position(|r| q.eval(r) == 1);
    let mut basis: Vec<Vec<u8>> = Vec::with_capacity(m);
    if let Some(i) = odd_pos {
        let r0 = radical.remove(i);
        for r in radical.iter_mut() {
            if q.eval(r) == 1 {
                *r = xor(r, &r0);
            }
        }
        if let Some((u, v)) = anisotropic.pop() {
            hyperbolic.push((xor(&u, &r0), xor(&v, &r0)));
        }
        basis.push(r0);
        for (u, v) in hyperbolic {
            basis.push(u);
            basis.push(v);
        }
    } else {
        for (u, v) in hyperbolic.into_iter().chain(anisotropic) {
            basis.push(u);
            basis.push(v);
        }
    }
    basis.extend(radical);
    let b = FpMatrix::from_columns(Prime::TWO, m, &basis)?;
    let standard = q.pullback(&b);
    let s = b.inverse()?;
    debug_assert_eq!(
        Some(&standard),
        standard_for_triple(classify(q)?).ok().map(|t| t.2).as_ref()
    );
    Ok((s, standard))
}

/// Whether `q1` and `q2` are equivalent, with a witness `s` (`s·q1 = q2`) on request.
pub fn equivalent(
    q1: &QuadraticFormF2,
    q2: &QuadraticFormF2,
    want_witness: bool,
) -> Result<(bool, Option<FpMatrix>)> {
    if q1.m() != q2.m() {
        return Err(Error::DimensionMismatch(format!(
            "forms in {} and {} variables",
            q1.m(),
            q2.m()
        )));
    }
    let same = classify(q1)? == classify(q2)?;
    if !want_witness {
        return Ok((same, None));
    }
    if q1.m() > MAX_WITNESS_VARS {
        return Err(Error::WitnessSearchCapExceeded(q1.m()));
    }
    if !same {
        return Ok((false, None));
    }
    let witness = GlEnumeration::new(q1.m(), Prime::TWO, u64::MAX)?
        .iter()
        .find(|s| q1.change_basis(s).map(|r| &r == q2).unwrap_or(false));
    debug_assert!(witness.is_some());
    Ok((witness.is_some(), witness))
}
