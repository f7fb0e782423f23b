//! Stabilizers, orbits, the intersection orbit group and `|Im ρ|` by exhaustive
//! enumeration of `GL_m(F_p)` with linear solves on the `N` side.

mod config;
mod engine;
mod group;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

pub use config::{run_chunked, Caps, Convention, EngineConfig};
pub use engine::{
    divisibility_check, fixed_classes, im_rho_order, im_rho_order_in, joint_stabilizer,
    joint_stabilizer_in, omega, omega_in, orbit, p_part, pair_mul, stabilizer_n, stabilizer_v,
    stabilizer_v_in, structural_stab_n_order, unitriangular, DivisibilityReport, ImRhoReport,
    Method, OmegaGroup, Pair, Side, StabilizerReport, VGroup,
};
pub(crate) use group::is_power_of;
pub use group::{identify_group, label_for, GroupId, MAX_LABELLED_ORDER};

/// Machine-readable summary of one computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    #[serde(with = "big_string")]
    pub order: BigUint,
    pub label: Option<String>,
    pub breakdown: Option<ImRhoReport>,
    pub method: Method,
    pub elapsed_ms: Option<u64>,
}

/// Big integers as decimal strings.
pub mod big_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
