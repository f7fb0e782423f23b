use crate::error::{Error, Result};
use crate::fp::{FpMatrix, Prime};
use crate::forms::altbock::{strict_len, AlternatingBockstein};
use crate::forms::quadratic::{tri_len, QuadraticFormF2};

/// One coordinate `X_i` of an extension class: a quadratic form for `p = 2`, an
/// alternating-plus-Bockstein class for odd `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassComponent {
    Quadratic(QuadraticFormF2),
    AltBock(AlternatingBockstein),
}

/// Dimension of `H²(V; F_p)` for `V` of rank `m`; the same for every prime.
pub fn coefficient_dim(m: usize) -> usize {
    tri_len(m)
}

impl ClassComponent {
    pub fn zero(p: Prime, m: usize) -> ClassComponent {
        if p.is_odd() {
            ClassComponent::AltBock(AlternatingBockstein::zero(p, m).expect("odd prime"))
        } else {
            ClassComponent::Quadratic(QuadraticFormF2::zero(m))
        }
    }

    pub fn prime(&self) -> Prime {
        match self {
            ClassComponent::Quadratic(_) => Prime::TWO,
            ClassComponent::AltBock(a) => a.prime(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            ClassComponent::Quadratic(q) => q.m(),
            ClassComponent::AltBock(a) => a.m(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ClassComponent::Quadratic(q) => q.is_zero(),
            ClassComponent::AltBock(a) => a.is_zero(),
        }
    }

    /// Coordinates in `F_p^{m(m+1)/2}`: the triangular coefficients for `p = 2`,
    /// the alternating coefficients followed by the Bockstein vector otherwise.
    pub fn coords(&self) -> Vec<u8> {
        match self {
            ClassComponent::Quadratic(q) => q.coeffs().to_vec(),
            ClassComponent::AltBock(a) => a.alt().iter().chain(a.bock()).copied().collect(),
        }
    }

    pub fn from_coords(p: Prime, m: usize, coords: &[u8]) -> Result<ClassComponent> {
        if coords.len() != coefficient_dim(m) {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a class in {m} variables",
                coords.len()
            )));
        }
        if p.is_odd() {
            let k = strict_len(m);
            Ok(ClassComponent::AltBock(AlternatingBockstein::new(
                p,
                m,
                coords[..k].to_vec(),
                coords[k..].to_vec(),
            )?))
        } else {
            Ok(ClassComponent::Quadratic(QuadraticFormF2::new(m, coords.to_vec())?))
        }
    }

    /// `c ↦ c(W v)`.
    pub fn pullback(&self, w: &FpMatrix) -> ClassComponent {
        match self {
            ClassComponent::Quadratic(q) => ClassComponent::Quadratic(q.pullback(w)),
            ClassComponent::AltBock(a) => ClassComponent::AltBock(a.pullback(w)),
        }
    }

    pub(crate) fn check_matrix(&self, s: &FpMatrix) -> Result<()> {
        match self {
            ClassComponent::Quadratic(q) => q.check_matrix(s),
            ClassComponent::AltBock(a) => a.check_matrix(s),
        }
    }

    /// `s·c`, defined by `(s·c)(v) = c(s⁻¹ v)`.
    pub fn change_basis(&self, s: &FpMatrix) -> Result<ClassComponent> {
        self.check_matrix(s)?;
        Ok(self.pullback(&s.inverse()?))
    }

    pub fn as_quadratic(&self) -> Option<&QuadraticFormF2> {
        match self {
            ClassComponent::Quadratic(q) => Some(q),
            ClassComponent::AltBock(_) => None,
        }
    }

    pub fn as_alt_bock(&self) -> Option<&AlternatingBockstein> {
        match self {
            ClassComponent::AltBock(a) => Some(a),
            ClassComponent::Quadratic(_) => None,
        }
    }
}

impl From<QuadraticFormF2> for ClassComponent {
    fn from(q: QuadraticFormF2) -> Self {
        ClassComponent::Quadratic(q)
    }
}

impl From<AlternatingBockstein> for ClassComponent {
    fn from(a: AlternatingBockstein) -> Self {
        ClassComponent::AltBock(a)
    }
}
