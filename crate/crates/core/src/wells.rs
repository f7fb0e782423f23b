//! Order bookkeeping along the Wells sequence for central extensions with elementary
//! abelian kernel: `|Aut_N(G)| = |Hom(V, N)|·|Im ρ|`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::class::ExtensionClass;
use crate::error::Result;
use crate::fp::Prime;
use crate::orbit::{
    big_string, identify_group, im_rho_order, is_power_of, joint_stabilizer, pair_mul, EngineConfig, GroupId,
    Pair,
};

/// `|Hom(F_p^m, F_p^n)| = p^{mn}`.
pub fn hom_order(m: usize, n: usize, p: Prime) -> BigUint {
    BigUint::from(p.get()).pow((m * n) as u32)
}

/// Splits `x` as `p^a · u` with `p ∤ u`.
pub fn factor_p(x: &BigUint, p: Prime) -> (u32, BigUint) {
    let q = BigUint::from(p.get());
    let mut u = x.clone();
    let mut a = 0;
    while !u.is_zero() && (&u % &q).is_zero() {
        u /= &q;
        a += 1;
    }
    (a, u)
}

fn factored(x: &BigUint, p: Prime) -> String {
    let (a, u) = factor_p(x, p);
    format!("{}^{} · {}", p.get(), a, u)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutOrderReport {
    pub p: u32,
    pub m: usize,
    pub n: usize,
    #[serde(with = "big_string")]
    pub hom_order: BigUint,
    #[serde(with = "big_string")]
    pub stab_v_order: BigUint,
    #[serde(with = "big_string")]
    pub stab_n_order: BigUint,
    #[serde(with = "big_string")]
    pub omega_order: BigUint,
    #[serde(with = "big_string")]
    pub im_rho_order: BigUint,
    /// `|Aut(G)|` when `n_characteristic_assumed`, otherwise `|Aut_N(G)|`
    #[serde(with = "big_string")]
    pub aut_order: BigUint,
    /// `aut_order` written as `p^a · u`
    pub aut_order_factored: String,
    pub n_characteristic_assumed: bool,
    /// fingerprint of `Im ρ` when its elements fit under the element cap
    pub image_id: Option<GroupId>,
}

impl AutOrderReport {
    /// What `aut_order` counts.
    pub fn aut_name(&self) -> &'static str {
        if self.n_characteristic_assumed {
            "|Aut(G)|"
        } else {
            "|Aut_N(G)|"
        }
    }

    pub fn is_p_group(&self) -> bool {
        factor_p(&self.aut_order, Prime::new(self.p).expect("prime in report")).1.is_one()
    }
}

/// The full order ledger for the extension classified by `e`.
///
/// `n_characteristic` is the caller's assertion that `N` is characteristic in `G`; only
/// then does `aut_order` count all of `Aut(G)`.
pub fn aut_order(e: &ExtensionClass, n_characteristic: bool, cfg: &EngineConfig) -> Result<AutOrderReport> {
    let r = im_rho_order(e, cfg)?;
    let image_id = if r.order <= BigUint::from(cfg.caps.elements) {
        joint_stabilizer(e, cfg)?.identify().transpose()?
    } else {
        None
    };
    let hom = hom_order(e.m(), e.n(), e.prime());
    let aut = &hom * &r.order;
    Ok(AutOrderReport {
        p: e.prime().get(),
        m: e.m(),
        n: e.n(),
        aut_order_factored: factored(&aut, e.prime()),
        hom_order: hom,
        stab_v_order: r.stab_v,
        stab_n_order: r.stab_n,
        omega_order: r.omega,
        im_rho_order: r.order,
        aut_order: aut,
        n_characteristic_assumed: n_characteristic,
        image_id,
    })
}

/// Group-level description of the semisimple quotient of `F_p Aut_N(G)`, which is that
/// of `F_p Im ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemisimpleReport {
    pub p: u32,
    #[serde(with = "big_string")]
    pub image_order: BigUint,
    pub image_order_factored: String,
    pub image: Option<GroupId>,
    /// `Im ρ` is a `p`-group, so the semisimple quotient is the trivial module alone
    pub image_is_p_group: bool,
    /// `Im ρ / O_p(Im ρ)` when the Sylow `p`-subgroup is normal and nontrivial
    pub p_prime_quotient: Option<GroupId>,
}

pub fn semisimple_report(e: &ExtensionClass, cfg: &EngineConfig) -> Result<SemisimpleReport> {
    let p = e.prime();
    let stab = joint_stabilizer(e, cfg)?;
    let (a, u) = factor_p(&stab.order, p);
    let mut report = SemisimpleReport {
        p: p.get(),
        image_order_factored: factored(&stab.order, p),
        image_is_p_group: u.is_one(),
        image_order: stab.order,
        image: None,
        p_prime_quotient: None,
    };
    if let Some(els) = &stab.elements {
        report.image = Some(identify_group(els, pair_mul)?);
        if a > 0 && !report.image_is_p_group {
            let sylow = BigUint::from(p.get()).pow(a);
            report.p_prime_quotient = p_prime_quotient(els, p.get() as u64, &sylow)?;
        }
    }
    Ok(report)
}

fn element_order(x: &Pair, id: &Pair) -> u64 {
    let mut k = 1;
    let mut y = x.clone();
    while y != *id {
        y = pair_mul(&y, x);
        k += 1;
    }
    k
}

/// `G/P` for the Sylow `p`-subgroup `P`, provided the `p`-elements of `G` number exactly
/// `|P|` (then `P` is unique, hence normal).
fn p_prime_quotient(els: &[Pair], p: u64, sylow: &BigUint) -> Result<Option<GroupId>> {
    let id = els.iter().find(|x| pair_mul(x, x) == **x).expect("group has an identity").clone();
    let sylow_els: Vec<&Pair> = els.iter().filter(|x| is_power_of(element_order(x, &id), p)).collect();
    if BigUint::from(sylow_els.len()) != *sylow {
        return Ok(None);
    }
    let index: HashMap<&Pair, usize> = els.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut coset = vec![usize::MAX; els.len()];
    let mut reps = Vec::new();
    for (i, x) in els.iter().enumerate() {
        if coset[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x.clone());
        for y in &sylow_els {
            coset[index[&pair_mul(x, y)]] = c;
        }
    }
    let ids: Vec<usize> = (0..reps.len()).collect();
    let q = identify_group(&ids, |&a, &b| coset[index[&pair_mul(&reps[a], &reps[b])]])?;
    Ok(Some(q))
}
