//! Extension classes `[E] ∈ H²(V; N) = H²(V) ⊗ N` and the two-sided
//! `Aut(V) × Aut(N)` action on them.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fp::{FpMatrix, Prime};
use crate::forms::{coefficient_dim, parse_component, print_component, ClassComponent};

/// An `n`-tuple of components over a fixed `(p, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtensionClass {
    p: Prime,
    m: usize,
    components: Vec<ClassComponent>,
}

impl ExtensionClass {
    pub fn new(p: Prime, m: usize, components: Vec<ClassComponent>) -> Result<Self> {
        for c in &components {
            if c.prime() != p {
                return Err(Error::PrimeMismatch(p.get(), c.prime().get()));
            }
            if c.m() != m {
                return Err(Error::DimensionMismatch(format!(
                    "component in {} variables inside a class over {m} variables",
                    c.m()
                )));
            }
        }
        Ok(ExtensionClass { p, m, components })
    }

    pub fn zero(p: Prime, m: usize, n: usize) -> Self {
        ExtensionClass {
            p,
            m,
            components: vec![ClassComponent::zero(p, m); n],
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ClassComponent] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ClassComponent::is_zero)
    }

    /// Canonical byte encoding: the coordinates of each component in order.
    pub fn key(&self) -> Vec<u8> {
        self.components.iter().flat_map(|c| c.coords()).collect()
    }

    /// The `D × n` matrix whose `j`-th column holds the coordinates of `X_j`.
    pub fn coefficient_matrix(&self) -> FpMatrix {
        let cols: Vec<Vec<u8>> = self.components.iter().map(|c| c.coords()).collect();
        FpMatrix::from_columns(self.p, coefficient_dim(self.m), &cols).expect("consistent lengths")
    }

    pub fn from_coefficient_matrix(p: Prime, m: usize, c: &FpMatrix) -> Result<Self> {
        if c.rows() != coefficient_dim(m) || c.prime() != p {
            return Err(Error::DimensionMismatch(format!(
                "coefficient matrix with {} rows for m = {m}",
                c.rows()
            )));
        }
        let components = (0..c.cols())
            .map(|j| ClassComponent::from_coords(p, m, &c.column(j)))
            .collect::<Result<_>>()?;
        Ok(ExtensionClass { p, m, components })
    }

    /// Componentwise pullback `X_i ↦ X_i ∘ W`.
    pub fn pullback(&self, w: &FpMatrix) -> ExtensionClass {
        ExtensionClass {
            p: self.p,
            m: self.m,
            components: self.components.iter().map(|c| c.pullback(w)).collect(),
        }
    }

    /// Output component `j` is `sum_i u_ij X_i`.
    pub fn mix(&self, u: &FpMatrix) -> ExtensionClass {
        let p = self.p;
        let coords: Vec<Vec<u8>> = self.components.iter().map(|c| c.coords()).collect();
        let d = coefficient_dim(self.m);
        let components = (0..self.n())
            .map(|j| {
                let mut out = vec![0u8; d];
                for (i, x) in coords.iter().enumerate() {
                    let c = u.get(i, j);
                    if c != 0 {
                        for (o, &v) in out.iter_mut().zip(x) {
                            *o = p.add(*o, p.mul(c, v));
                        }
                    }
                }
                ClassComponent::from_coords(p, self.m, &out).expect("valid coordinates")
            })
            .collect();
        ExtensionClass {
            p,
            m: self.m,
            components,
        }
    }

    fn check_square(&self, a: &FpMatrix, size: usize, side: &str) -> Result<()> {
        if a.prime() != self.p {
            return Err(Error::PrimeMismatch(self.p.get(), a.prime().get()));
        }
        if a.rows() != size || a.cols() != size {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix acting on the {side} side of rank {size}",
                a.rows(),
                a.cols()
            )));
        }
        Ok(())
    }
}

/// `s·[E] = (s·X_1, …, s·X_n)`.
pub fn act_v(s: &FpMatrix, e: &ExtensionClass) -> Result<ExtensionClass> {
    e.check_square(s, e.m, "V")?;
    Ok(e.pullback(&s.inverse()?))
}

/// `[E]·t⁻¹`, realized on coordinates by mixing the components with `t⁻¹`.
pub fn act_n(t: &FpMatrix, e: &ExtensionClass) -> Result<ExtensionClass> {
    e.check_square(t, e.n(), "N")?;
    Ok(e.mix(&t.inverse()?))
}

/// `(s, t)[E] = [s E t⁻¹]`.
pub fn pair_act(s: &FpMatrix, t: &FpMatrix, e: &ExtensionClass) -> Result<ExtensionClass> {
    act_n(t, &act_v(s, e)?)
}

/// Parses `;`-separated component expressions.
pub fn parse_class(text: &str, p: Prime, m: usize, n: usize) -> Result<ExtensionClass> {
    if n == 0 {
        return Err(Error::InvalidInput("a class needs at least one component".into()));
    }
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != n {
        return Err(Error::Arity {
            expected: n,
            found: parts.len(),
        });
    }
    let mut offset = 0;
    let mut components = Vec::with_capacity(n);
    for part in parts {
        let c = parse_component(part, p, m).map_err(|e| match e {
            Error::Syntax { pos, msg } => Error::Syntax {
                pos: pos + offset,
                msg,
            },
            other => other,
        })?;
        components.push(c);
        offset += part.len() + 1;
    }
    ExtensionClass::new(p, m, components)
}

pub fn print_class(e: &ExtensionClass) -> String {
    e.components
        .iter()
        .map(print_component)
        .collect::<Vec<_>>()
        .join("; ")
}

impl fmt::Display for ExtensionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_class(self))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassJson {
    p: u32,
    m: usize,
    n: usize,
    components: Vec<ClassComponent>,
}

impl Serialize for ExtensionClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ClassJson {
            p: self.p.get(),
            m: self.m,
            n: self.n(),
            components: self.components.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExtensionClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = ClassJson::deserialize(d)?;
        if j.components.len() != j.n {
            return Err(D::Error::custom(Error::Arity {
                expected: j.n,
                found: j.components.len(),
            }));
        }
        let p = Prime::new(j.p).map_err(D::Error::custom)?;
        ExtensionClass::new(p, j.m, j.components).map_err(D::Error::custom)
    }
}
