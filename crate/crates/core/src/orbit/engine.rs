use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::class::ExtensionClass;
use crate::error::{Error, Result};
use crate::fp::{gl_order, FpMatrix, GlEnumeration, Prime, Subspace};
use crate::forms::{coefficient_dim, ClassComponent};
use crate::orbit::config::{run_chunked, EngineConfig};
use crate::orbit::group::{identify_group, GroupId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    V,
    N,
    Joint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Enumeration,
    Structural,
}

/// A pair `(s, t) ∈ Aut(V) × Aut(N)`; one-sided stabilizers use the identity on the
/// other side.
pub type Pair = (FpMatrix, FpMatrix);

pub fn pair_mul(a: &Pair, b: &Pair) -> Pair {
    (a.0.mul_unchecked(&b.0), a.1.mul_unchecked(&b.1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerReport {
    pub side: Side,
    pub order: BigUint,
    pub elements: Option<Vec<Pair>>,
    pub method: Method,
}

impl StabilizerReport {
    pub fn identify(&self) -> Option<Result<GroupId>> {
        self.elements.as_ref().map(|els| identify_group(els, pair_mul))
    }
}

/// The acting group on the `V` side.
#[derive(Clone, Debug)]
pub enum VGroup {
    /// all of `GL_m(F_p)`
    Full,
    /// an explicit subgroup, listed by its elements `s`
    Subgroup(Vec<FpMatrix>),
}

/// `GL_m(F_p)` or a listed subgroup, as a sequence of substitution matrices `W`.
enum Source {
    Full(GlEnumeration),
    Listed(Vec<FpMatrix>),
}

impl Source {
    fn new(group: &VGroup, e: &ExtensionClass, cfg: &EngineConfig) -> Result<Source> {
        match group {
            VGroup::Full => Ok(Source::Full(GlEnumeration::new(
                e.m(),
                e.prime(),
                cfg.caps.enumeration,
            )?)),
            VGroup::Subgroup(s) => {
                for a in s {
                    if a.prime() != e.prime() || a.rows() != e.m() || a.cols() != e.m() {
                        return Err(Error::DimensionMismatch(
                            "subgroup element does not act on V".into(),
                        ));
                    }
                }
                Ok(Source::Listed(
                    s.iter()
                        .map(|a| cfg.convention.substitution(a))
                        .collect::<Result<_>>()?,
                ))
            }
        }
    }

    fn len(&self) -> u64 {
        match self {
            Source::Full(g) => g.len(),
            Source::Listed(v) => v.len() as u64,
        }
    }

    fn for_each(&self, range: std::ops::Range<u64>, mut f: impl FnMut(FpMatrix)) {
        match self {
            Source::Full(g) => g.range(range).for_each(f),
            Source::Listed(v) => v[range.start as usize..range.end as usize]
                .iter()
                .cloned()
                .for_each(&mut f),
        }
    }
}

/// Precomputed data about the class being acted on.
struct Target<'a> {
    e: &'a ExtensionClass,
    key: Vec<u8>,
    span: Subspace,
}

impl<'a> Target<'a> {
    fn new(e: &'a ExtensionClass) -> Result<Self> {
        if e.n() == 0 {
            return Err(Error::InvalidInput("a class needs at least one component".into()));
        }
        let d = coefficient_dim(e.m());
        let span = Subspace::span(e.prime(), d, e.components().iter().map(|c| c.coords()))?;
        Ok(Target {
            e,
            key: e.key(),
            span,
        })
    }

    fn rank(&self) -> usize {
        self.span.dim()
    }
}

#[derive(Default)]
struct ScanPart {
    stab: u64,
    stab_ws: Vec<FpMatrix>,
    compatible: u64,
    compat_ws: Vec<FpMatrix>,
    /// first-seen order of distinct compatible classes: (key, first W, second W)
    classes: Vec<(Vec<u8>, FpMatrix, Option<FpMatrix>)>,
    overflow: bool,
}

struct ScanOptions {
    keep_elements: usize,
    want_classes: bool,
    class_cap: usize,
}

fn scan(
    t: &Target<'_>,
    src: &Source,
    cfg: &EngineConfig,
    opts: &ScanOptions,
) -> Result<ScanPart> {
    let parts = run_chunked(src.len(), cfg.workers, |range| {
        let mut part = ScanPart::default();
        let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
        src.for_each(range, |w| {
            let mut key = Vec::with_capacity(t.key.len());
            let mut compatible = true;
            for c in t.e.components() {
                let coords = c.pullback(&w).coords();
                if !t.span.contains(&coords) {
                    compatible = false;
                    break;
                }
                key.extend_from_slice(&coords);
            }
            if !compatible {
                return;
            }
            part.compatible += 1;
            if part.compat_ws.len() <= opts.keep_elements {
                part.compat_ws.push(w.clone());
            }
            if key == t.key {
                part.stab += 1;
                if part.stab_ws.len() <= opts.keep_elements {
                    part.stab_ws.push(w.clone());
                }
            }
            if opts.want_classes && !part.overflow {
                match index.get(&key) {
                    Some(&i) => {
                        if part.classes[i].2.is_none() {
                            part.classes[i].2 = Some(w);
                        }
                    }
                    None => {
                        if part.classes.len() >= opts.class_cap {
                            part.overflow = true;
                        } else {
                            index.insert(key.clone(), part.classes.len());
                            part.classes.push((key, w, None));
                        }
                    }
                }
            }
        });
        part
    })?;
    // ordered merge
    let mut out = ScanPart::default();
    let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
    for part in parts {
        out.stab += part.stab;
        out.compatible += part.compatible;
        out.overflow |= part.overflow;
        for w in part.stab_ws {
            if out.stab_ws.len() <= opts.keep_elements {
                out.stab_ws.push(w);
            }
        }
        for w in part.compat_ws {
            if out.compat_ws.len() <= opts.keep_elements {
                out.compat_ws.push(w);
            }
        }
        for (key, w1, w2) in part.classes {
            match index.get(&key) {
                Some(&i) => {
                    if out.classes[i].2.is_none() {
                        out.classes[i].2 = Some(w1);
                    }
                }
                None => {
                    if out.classes.len() >= opts.class_cap {
                        out.overflow = true;
                    } else {
                        index.insert(key.clone(), out.classes.len());
                        out.classes.push((key, w1, w2));
                    }
                }
            }
        }
    }
    if out.overflow {
        return Err(Error::cap(out.classes.len() as u64 + 1, opts.class_cap as u64));
    }
    Ok(out)
}

fn to_u64(x: &BigUint) -> Option<u64> {
    x.to_u64()
}

/// `|{u ∈ GL_n : C u = C}| = p^{r(n-r)} |GL_{n-r}(F_p)|` for `C` of rank `r`.
pub fn structural_stab_n_order(p: Prime, n: usize, rank: usize) -> BigUint {
    let free = n - rank;
    BigUint::from(p.get()).pow((rank * free) as u32) * gl_order(free, p)
}

/// Mixing matrices `u` with `C u = C`, by enumerating `I + {columns in ker C}`.
fn stab_n_mixers(t: &Target<'_>, cfg: &EngineConfig) -> Result<Option<Vec<FpMatrix>>> {
    let e = t.e;
    let (p, n) = (e.prime(), e.n());
    let c = e.coefficient_matrix();
    let kernel = c.kernel();
    let coset = BigUint::from(kernel.cardinality()).pow(n as u32);
    let order = structural_stab_n_order(p, n, t.rank());
    if coset > BigUint::from(cfg.caps.affine) || order > BigUint::from(cfg.caps.elements) {
        return Ok(None);
    }
    let kvecs: Vec<Vec<u8>> = kernel.elements().collect();
    let mut out = Vec::new();
    let total = coset.to_u64().expect("below the affine cap");
    for mut idx in 0..total {
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let k = &kvecs[(idx % kvecs.len() as u64) as usize];
            idx /= kvecs.len() as u64;
            let mut col = k.clone();
            col[j] = p.add(col[j], 1);
            cols.push(col);
        }
        let u = FpMatrix::from_columns(p, n, &cols)?;
        if u.is_invertible() {
            out.push(u);
        }
    }
    out.sort();
    Ok(Some(out))
}

/// `{s ∈ A : s·[E] = [E]}` for `A = GL_m(F_p)` or a listed subgroup.
pub fn stabilizer_v_in(e: &ExtensionClass, group: &VGroup, cfg: &EngineConfig) -> Result<StabilizerReport> {
    let t = Target::new(e)?;
    let src = Source::new(group, e, cfg)?;
    let keep = cfg.caps.elements as usize;
    let res = scan(&t, &src, cfg, &ScanOptions { keep_elements: keep, want_classes: false, class_cap: 0 })?;
    let elements = if res.stab as usize <= keep {
        let id_n = FpMatrix::identity(e.prime(), e.n());
        let mut els = res
            .stab_ws
            .iter()
            .map(|w| Ok((cfg.convention.from_substitution(w)?, id_n.clone())))
            .collect::<Result<Vec<_>>>()?;
        els.sort();
        Some(els)
    } else {
        None
    };
    Ok(StabilizerReport {
        side: Side::V,
        order: BigUint::from(res.stab),
        elements,
        method: Method::Enumeration,
    })
}

pub fn stabilizer_v(e: &ExtensionClass, cfg: &EngineConfig) -> Result<StabilizerReport> {
    stabilizer_v_in(e, &VGroup::Full, cfg)
}

/// `{t ∈ GL_n : [E]·t⁻¹ = [E]}`. Enumerates `GL_n` when it fits the enumeration cap and
/// checks the count against the structural formula; otherwise counts structurally.
pub fn stabilizer_n(e: &ExtensionClass, cfg: &EngineConfig) -> Result<StabilizerReport> {
    let t = Target::new(e)?;
    let (p, n) = (e.prime(), e.n());
    let structural = structural_stab_n_order(p, n, t.rank());
    let id_m = FpMatrix::identity(p, e.m());
    let to_pairs = |us: Vec<FpMatrix>| -> Result<Vec<Pair>> {
        let mut out = us
            .iter()
            .map(|u| Ok((id_m.clone(), cfg.convention.from_substitution(u)?)))
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        Ok(out)
    };
    let gl_n = gl_order(n, p);
    if gl_n <= BigUint::from(cfg.caps.enumeration) {
        let g = GlEnumeration::new(n, p, cfg.caps.enumeration)?;
        let c = e.coefficient_matrix();
        let hits: Vec<FpMatrix> = g.iter().filter(|u| c.mul_unchecked(u) == c).collect();
        if BigUint::from(hits.len()) != structural {
            return Err(Error::InvalidInput(format!(
                "stabilizer count {} disagrees with the structural count {structural}",
                hits.len()
            )));
        }
        let elements = if hits.len() as u64 <= cfg.caps.elements {
            Some(to_pairs(hits)?)
        } else {
            None
        };
        return Ok(StabilizerReport {
            side: Side::N,
            order: structural,
            elements,
            method: Method::Enumeration,
        });
    }
    let elements = stab_n_mixers(&t, cfg)?.map(to_pairs).transpose()?;
    Ok(StabilizerReport {
        side: Side::N,
        order: structural,
        elements,
        method: Method::Structural,
    })
}

/// An invertible `u` with `C' u = C`, searched in the affine solution set.
fn solve_mixer(cp: &FpMatrix, c: &FpMatrix, affine_cap: u64) -> Result<Option<FpMatrix>> {
    let Some((x0, kernel)) = cp.solve_matrix(c)? else {
        return Ok(None);
    };
    if x0.is_invertible() {
        return Ok(Some(x0));
    }
    let n = x0.cols();
    let p = x0.prime();
    let per_col = kernel.cardinality();
    let total = BigUint::from(per_col).pow(n as u32);
    if total > BigUint::from(affine_cap) {
        return Err(Error::cap(total, affine_cap));
    }
    let kvecs: Vec<Vec<u8>> = kernel.elements().collect();
    for mut idx in 0..total.to_u64().expect("below cap") {
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let k = &kvecs[(idx % per_col as u64) as usize];
            idx /= per_col as u64;
            let col: Vec<u8> = x0.column(j).iter().zip(k).map(|(&a, &b)| p.add(a, b)).collect();
            cols.push(col);
        }
        let u = FpMatrix::from_columns(p, x0.rows(), &cols)?;
        if u.is_invertible() {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// Pairs `(s, t)` with `(s, t)[E] = [E]`, for `s` in `A` and any `t ∈ GL_n`.
///
/// Enumerates `s` only; `s` is admissible iff it preserves the span of the components,
/// and the admissible `t` for it form a coset of `Aut(N)_[E]`.
pub fn joint_stabilizer_in(e: &ExtensionClass, group: &VGroup, cfg: &EngineConfig) -> Result<StabilizerReport> {
    let t = Target::new(e)?;
    let src = Source::new(group, e, cfg)?;
    let keep = cfg.caps.elements as usize;
    let res = scan(&t, &src, cfg, &ScanOptions { keep_elements: keep, want_classes: false, class_cap: 0 })?;
    let stab_n = structural_stab_n_order(e.prime(), e.n(), t.rank());
    let order = BigUint::from(res.compatible) * &stab_n;
    let mut elements = None;
    if order <= BigUint::from(cfg.caps.elements) {
        if let Some(mixers) = stab_n_mixers(&t, cfg)? {
            let c = e.coefficient_matrix();
            let mut els = Vec::new();
            for w in &res.compat_ws {
                let s = cfg.convention.from_substitution(w)?;
                let cp = e.pullback(w).coefficient_matrix();
                let u1 = solve_mixer(&cp, &c, cfg.caps.affine)?.ok_or_else(|| {
                    Error::InvalidInput("admissible substitution without an invertible mixer".into())
                })?;
                for v in &mixers {
                    let u = u1.mul_unchecked(v);
                    els.push((s.clone(), cfg.convention.from_substitution(&u)?));
                }
            }
            els.sort();
            elements = Some(els);
        }
    }
    Ok(StabilizerReport {
        side: Side::Joint,
        order,
        elements,
        method: Method::Enumeration,
    })
}

pub fn joint_stabilizer(e: &ExtensionClass, cfg: &EngineConfig) -> Result<StabilizerReport> {
    joint_stabilizer_in(e, &VGroup::Full, cfg)
}

/// The intersection orbit group `Ω([E]) = A[E] ∩ [E]B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaGroup {
    /// `elements[identity]` is `[E]`
    pub elements: Vec<ExtensionClass>,
    /// `reps_left[i]·[E] = elements[i]`
    pub reps_left: Vec<FpMatrix>,
    /// `table[i][j]` is the index of `elements[i]·elements[j]`, when built
    pub mult_table: Option<Vec<Vec<usize>>>,
    pub identity: usize,
    pub stab_v_order: u64,
    pub admissible: u64,
}

impl OmegaGroup {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// Associativity, identity and inverses, from the table.
    pub fn check_axioms(&self) -> Result<()> {
        let Some(t) = &self.mult_table else {
            return Err(Error::InvalidInput("no multiplication table".into()));
        };
        let k = t.len();
        let fail = |m: &str| Err(Error::WellDefinednessViolation(m.into()));
        for i in 0..k {
            if t[self.identity][i] != i || t[i][self.identity] != i {
                return fail("identity law");
            }
            if !(0..k).any(|j| t[i][j] == self.identity && t[j][i] == self.identity) {
                return fail("inverse law");
            }
            for j in 0..k {
                for l in 0..k {
                    if t[t[i][j]][l] != t[i][t[j][l]] {
                        return fail("associativity");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identify(&self) -> Result<GroupId> {
        let t = self
            .mult_table
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("no multiplication table".into()))?;
        let idx: Vec<usize> = (0..t.len()).collect();
        identify_group(&idx, |&a, &b| t[a][b])
    }
}

pub fn omega_in(e: &ExtensionClass, group: &VGroup, cfg: &EngineConfig) -> Result<OmegaGroup> {
    let t = Target::new(e)?;
    let src = Source::new(group, e, cfg)?;
    let class_cap = cfg.caps.affine as usize;
    let res = scan(&t, &src, cfg, &ScanOptions { keep_elements: 0, want_classes: true, class_cap })?;
    let (p, m) = (e.prime(), e.m());
    let k = res.classes.len();
    if res.stab == 0 || res.compatible != res.stab * k as u64 {
        return Err(Error::WellDefinednessViolation(format!(
            "{} admissible elements do not split into {k} cosets of a stabilizer of order {}",
            res.compatible, res.stab
        )));
    }
    let decode = |key: &[u8]| -> Result<ExtensionClass> {
        let d = coefficient_dim(m);
        let comps = key
            .chunks(d)
            .map(|c| ClassComponent::from_coords(p, m, c))
            .collect::<Result<Vec<_>>>()?;
        ExtensionClass::new(p, m, comps)
    };
    let mut order: Vec<usize> = (0..k).collect();
    let id = res
        .classes
        .iter()
        .position(|c| c.0 == t.key)
        .ok_or_else(|| Error::WellDefinednessViolation("[E] is missing from its own orbit".into()))?;
    order.remove(id);
    order.insert(0, id);
    let mut elements = Vec::with_capacity(k);
    let mut reps = Vec::with_capacity(k);
    let mut alts = Vec::with_capacity(k);
    for &i in &order {
        let (key, w1, w2) = &res.classes[i];
        elements.push(decode(key)?);
        reps.push(cfg.convention.from_substitution(w1)?);
        alts.push(w2.as_ref().map(|w| cfg.convention.from_substitution(w)).transpose()?);
    }
    let index: HashMap<Vec<u8>, usize> = elements.iter().enumerate().map(|(i, x)| (x.key(), i)).collect();
    let act = |s: &FpMatrix| -> Result<ExtensionClass> { Ok(e.pullback(&cfg.convention.substitution(s)?)) };
    let lookup = |x: &ExtensionClass, what: &str| -> Result<usize> {
        index.get(&x.key()).copied().ok_or_else(|| {
            Error::WellDefinednessViolation(format!("{what} leaves the intersection orbit"))
        })
    };
    let mult_table = if (k as u64).saturating_mul(k as u64) <= cfg.caps.affine {
        let mut table = vec![vec![0usize; k]; k];
        for i in 0..k {
            for j in 0..k {
                table[i][j] = lookup(&act(&reps[i].mul_unchecked(&reps[j]))?, "a product")?;
            }
        }
        // re-derive every product from the alternate representatives
        for i in 0..k {
            if let Some(a) = &alts[i] {
                for j in 0..k {
                    if lookup(&act(&a.mul_unchecked(&reps[j]))?, "a product")? != table[i][j]
                        || lookup(&act(&reps[j].mul_unchecked(a))?, "a product")? != table[j][i]
                    {
                        return Err(Error::WellDefinednessViolation(format!(
                            "product of elements {i} and {j} depends on the representative"
                        )));
                    }
                }
            }
        }
        Some(table)
    } else {
        None
    };
    Ok(OmegaGroup {
        elements,
        reps_left: reps,
        mult_table,
        identity: 0,
        stab_v_order: res.stab,
        admissible: res.compatible,
    })
}

pub fn omega(e: &ExtensionClass, cfg: &EngineConfig) -> Result<OmegaGroup> {
    omega_in(e, &VGroup::Full, cfg)
}

/// `|Im ρ| = |Aut(V)_[E]|·|Aut(N)_[E]|·|Ω([E])|`, with the joint count alongside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImRhoReport {
    #[serde(with = "crate::orbit::big_string")]
    pub stab_v: BigUint,
    #[serde(with = "crate::orbit::big_string")]
    pub stab_n: BigUint,
    #[serde(with = "crate::orbit::big_string")]
    pub omega: BigUint,
    #[serde(with = "crate::orbit::big_string")]
    pub joint: BigUint,
    #[serde(with = "crate::orbit::big_string")]
    pub order: BigUint,
}

pub fn im_rho_order_in(e: &ExtensionClass, group: &VGroup, cfg: &EngineConfig) -> Result<ImRhoReport> {
    let t = Target::new(e)?;
    let src = Source::new(group, e, cfg)?;
    let class_cap = cfg.caps.affine as usize;
    let res = scan(&t, &src, cfg, &ScanOptions { keep_elements: 0, want_classes: true, class_cap })?;
    let stab_v = BigUint::from(res.stab);
    let stab_n = structural_stab_n_order(e.prime(), e.n(), t.rank());
    let omega = BigUint::from(res.classes.len());
    let joint = BigUint::from(res.compatible) * &stab_n;
    let order = &stab_v * &stab_n * &omega;
    if order != joint {
        return Err(Error::WellDefinednessViolation(format!(
            "|stab_v|·|stab_n|·|Ω| = {order} but the joint stabilizer has order {joint}"
        )));
    }
    Ok(ImRhoReport {
        stab_v,
        stab_n,
        omega,
        joint,
        order,
    })
}

pub fn im_rho_order(e: &ExtensionClass, cfg: &EngineConfig) -> Result<ImRhoReport> {
    im_rho_order_in(e, &VGroup::Full, cfg)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityReport {
    #[serde(with = "crate::orbit::big_string")]
    pub omega: BigUint,
    #[serde(with = "crate::orbit::big_string")]
    pub left_orbit: BigUint,
    #[serde(with = "crate::orbit::big_string")]
    pub right_orbit: BigUint,
    #[serde(with = "crate::orbit::big_string")]
    pub gcd: BigUint,
    pub divides: bool,
}

/// Checks that `|Ω|` divides `gcd(|A[E]|, |[E]B|)`.
pub fn divisibility_check(e: &ExtensionClass, cfg: &EngineConfig) -> Result<DivisibilityReport> {
    let r = im_rho_order(e, cfg)?;
    let left_orbit = gl_order(e.m(), e.prime()) / &r.stab_v;
    let right_orbit = gl_order(e.n(), e.prime()) / &r.stab_n;
    let gcd = left_orbit.gcd(&right_orbit);
    let divides = (&gcd % &r.omega).is_zero();
    Ok(DivisibilityReport {
        omega: r.omega,
        left_orbit,
        right_orbit,
        gcd,
        divides,
    })
}

/// The full orbit of `[E]` under `GL_m` (side `V`) or `GL_n` (side `N`), sorted.
pub fn orbit(e: &ExtensionClass, side: Side, cfg: &EngineConfig) -> Result<Vec<ExtensionClass>> {
    let (p, m, n) = (e.prime(), e.m(), e.n());
    let cap = cfg.caps.affine as usize;
    let mut out = BTreeSet::new();
    let mut push = |x: ExtensionClass| -> Result<()> {
        out.insert(x);
        if out.len() > cap {
            return Err(Error::cap(out.len() as u64, cap as u64));
        }
        Ok(())
    };
    match side {
        Side::V => {
            for w in GlEnumeration::new(m, p, cfg.caps.enumeration)?.iter() {
                push(e.pullback(&w))?;
            }
        }
        Side::N => {
            for u in GlEnumeration::new(n, p, cfg.caps.enumeration)?.iter() {
                push(e.mix(&u))?;
            }
        }
        Side::Joint => {
            return Err(Error::InvalidInput("orbits are computed one side at a time".into()))
        }
    }
    Ok(out.into_iter().collect())
}

/// Every class in `H²(V) ⊗ N` fixed by all the given pairs, in coordinate order.
pub fn fixed_classes(
    gens: &[Pair],
    p: Prime,
    m: usize,
    n: usize,
    cfg: &EngineConfig,
) -> Result<Vec<ExtensionClass>> {
    let d = coefficient_dim(m);
    let total = BigUint::from(p.get()).pow((d * n) as u32);
    let cap = cfg.caps.enumeration;
    let Some(total) = to_u64(&total).filter(|&x| x <= cap) else {
        return Err(Error::cap(total, cap));
    };
    let subs = gens
        .iter()
        .map(|(s, t)| {
            if s.rows() != m || t.rows() != n || s.prime() != p || t.prime() != p {
                return Err(Error::DimensionMismatch("generator does not act on this space".into()));
            }
            Ok((cfg.convention.substitution(s)?, cfg.convention.substitution(t)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let q = p.get() as u64;
    let parts = run_chunked(total, cfg.workers, |range| {
        let mut out = Vec::new();
        for mut idx in range {
            let mut coords = vec![0u8; d * n];
            for c in coords.iter_mut().rev() {
                *c = (idx % q) as u8;
                idx /= q;
            }
            let comps: Vec<ClassComponent> = coords
                .chunks(d)
                .map(|c| ClassComponent::from_coords(p, m, c).expect("valid coordinates"))
                .collect();
            let x = ExtensionClass::new(p, m, comps).expect("consistent class");
            if subs.iter().all(|(w, u)| x.pullback(w).mix(u) == x) {
                out.push(x);
            }
        }
        out
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// Upper unitriangular matrices: a Sylow `p`-subgroup of `GL_m(F_p)`.
pub fn unitriangular(m: usize, p: Prime, cap: u64) -> Result<Vec<FpMatrix>> {
    let slots = m * m.saturating_sub(1) / 2;
    let total = BigUint::from(p.get()).pow(slots as u32);
    let Some(total) = to_u64(&total).filter(|&x| x <= cap) else {
        return Err(Error::cap(total, cap));
    };
    let q = p.get() as u64;
    Ok((0..total)
        .map(|mut idx| {
            let mut a = FpMatrix::identity(p, m);
            for i in 0..m {
                for j in i + 1..m {
                    a.set(i, j, (idx % q) as i64);
                    idx /= q;
                }
            }
            a
        })
        .collect())
}

/// `|G|_p`, the largest power of `p` dividing `|G|`.
pub fn p_part(order: &BigUint, p: Prime) -> BigUint {
    let q = BigUint::from(p.get());
    let mut x = order.clone();
    let mut out = BigUint::one();
    while !x.is_zero() && (&x % &q).is_zero() {
        x /= &q;
        out *= &q;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::{act_n, act_v, pair_act, parse_class};
    use crate::orbit::config::Convention;

    fn cfg() -> EngineConfig {
        EngineConfig::default().with_workers(1)
    }

    fn cls(text: &str, p: u32, m: usize, n: usize) -> ExtensionClass {
        parse_class(text, Prime::new(p).unwrap(), m, n).unwrap()
    }

    #[test]
    fn isotropy_orders_in_three_variables() {
        for (text, want) in [("x^2 + yz", 6u32), ("xy", 8), ("x^2 + xy + y^2", 24), ("x^2", 24)] {
            let r = stabilizer_v(&cls(text, 2, 3, 1), &cfg()).unwrap();
            assert_eq!(r.order, BigUint::from(want), "{text}");
        }
        let r = stabilizer_v(&cls("x^2 + yz", 2, 3, 1), &cfg()).unwrap();
        let id = r.identify().unwrap().unwrap();
        assert!(!id.abelian);
        let r = stabilizer_v(&cls("xy", 2, 3, 1), &cfg()).unwrap();
        assert_eq!(r.identify().unwrap().unwrap().label.as_deref(), Some("D8"));
    }

    #[test]
    fn stabilizer_membership_is_exact() {
        let e = cls("xy; x^2 + yz", 2, 3, 2);
        let r = stabilizer_v(&e, &cfg()).unwrap();
        let els: BTreeSet<FpMatrix> = r.elements.unwrap().into_iter().map(|p| p.0).collect();
        for s in GlEnumeration::new(3, Prime::TWO, u64::MAX).unwrap().iter() {
            assert_eq!(act_v(&s, &e).unwrap() == e, els.contains(&s));
        }
    }

    #[test]
    fn n_side_stabilizers() {
        let c = cfg();
        assert_eq!(stabilizer_n(&cls("xy; xy", 2, 2, 2), &c).unwrap().order, BigUint::from(2u32));
        assert_eq!(stabilizer_n(&cls("xy; x^2", 2, 2, 2), &c).unwrap().order, BigUint::from(1u32));
        let r = stabilizer_n(&cls("xy; xy; xy", 2, 2, 3), &c).unwrap();
        assert_eq!(r.order, BigUint::from(24u32));
        let e = cls("xy; xy; xy", 2, 2, 3);
        for (_, t) in r.elements.unwrap() {
            assert_eq!(act_n(&t, &e).unwrap(), e);
        }
        // structural path agrees with enumeration
        let tight = EngineConfig { caps: crate::orbit::Caps { enumeration: 10, ..Default::default() }, ..c };
        let s = stabilizer_n(&e, &tight).unwrap();
        assert_eq!((s.order, s.method), (BigUint::from(24u32), Method::Structural));
        assert_eq!(s.elements.unwrap().len(), 24);
    }

    #[test]
    fn joint_elements_fix_the_class() {
        for e in [cls("xy; yz", 2, 3, 2), cls("xy; xy", 2, 2, 2), cls("xy", 3, 2, 1)] {
            let r = joint_stabilizer(&e, &cfg()).unwrap();
            let els = r.elements.unwrap();
            assert_eq!(BigUint::from(els.len()), r.order);
            for (s, t) in &els {
                assert_eq!(pair_act(s, t, &e).unwrap(), e);
            }
        }
    }

    #[test]
    fn joint_matches_pair_enumeration() {
        let e = cls("xy; x^2", 2, 2, 2);
        let g = GlEnumeration::new(2, Prime::TWO, u64::MAX).unwrap();
        let mut brute = 0;
        for s in g.iter() {
            for t in g.iter() {
                if pair_act(&s, &t, &e).unwrap() == e {
                    brute += 1;
                }
            }
        }
        assert_eq!(joint_stabilizer(&e, &cfg()).unwrap().order, BigUint::from(brute as u32));
    }

    #[test]
    fn omega_examples() {
        let o = omega(&cls("xy; x^2 + yz", 2, 3, 2), &cfg()).unwrap();
        assert_eq!(o.order(), 2);
        assert_eq!(o.elements[0], cls("xy; x^2 + yz", 2, 3, 2));
        assert_eq!(o.elements[1], cls("xy; xy + x^2 + yz", 2, 3, 2));
        o.check_axioms().unwrap();
        assert_eq!(o.identify().unwrap().label.as_deref(), Some("Z/2"));

        let o = omega(&cls("xy; yz", 2, 3, 2), &cfg()).unwrap();
        assert_eq!(o.order(), 6);
        o.check_axioms().unwrap();
    }

    #[test]
    fn im_rho_examples() {
        let c = cfg();
        let order = |t: &str| im_rho_order(&cls(t, 2, 3, 2), &c).unwrap().order;
        assert_eq!(order("xy; xy"), BigUint::from(16u32));
        assert_eq!(order("x^2 + yz; x^2 + xy + y^2"), BigUint::from(2u32));
        // stabilizer of order 2 and a trivial Ω; X + Y is not equivalent to Y
        assert_eq!(order("xy + y^2; x^2 + y^2 + yz + z^2"), BigUint::from(2u32));
    }

    #[test]
    fn divisibility() {
        let r = divisibility_check(&cls("xy; yz", 2, 3, 2), &cfg()).unwrap();
        assert!(r.divides);
        assert_eq!(r.omega, BigUint::from(6u32));
        let r = divisibility_check(&cls("xy", 3, 2, 1), &cfg()).unwrap();
        assert!(r.divides);
    }

    #[test]
    fn orbits() {
        let e = cls("xy", 2, 2, 1);
        let o = orbit(&e, Side::V, &cfg()).unwrap();
        assert_eq!(o.len(), 3);
        let e1 = cls("x^2", 2, 1, 1);
        assert_eq!(orbit(&e1, Side::N, &cfg()).unwrap(), vec![e1.clone()]);
        let e = cls("xy; x^2 + yz", 2, 3, 2);
        let stab = stabilizer_v(&e, &cfg()).unwrap().order;
        let o = orbit(&e, Side::V, &cfg()).unwrap();
        assert_eq!(BigUint::from(o.len()) * stab, gl_order(3, Prime::TWO));
    }

    #[test]
    fn fixed_class_search() {
        let p2 = Prime::TWO;
        let all = fixed_classes(&[], p2, 2, 1, &cfg()).unwrap();
        assert_eq!(all.len(), 8);
        let g = GlEnumeration::new(2, p2, u64::MAX).unwrap();
        let gens: Vec<Pair> = g.iter().map(|s| (s, FpMatrix::identity(p2, 1))).collect();
        let fixed = fixed_classes(&gens, p2, 2, 1, &cfg()).unwrap();
        assert!(fixed.iter().any(|x| x.is_zero()));
        assert_eq!(fixed.len(), 2);
        assert_eq!(fixed[1], cls("x^2 + xy + y^2", 2, 2, 1));
        let one = (FpMatrix::identity(p2, 1), FpMatrix::identity(p2, 1));
        let fixed = fixed_classes(&[one], p2, 1, 1, &cfg()).unwrap();
        assert!(fixed.iter().any(|x| !x.is_zero()));
    }

    #[test]
    fn sylow_restricted_omega_is_a_p_group() {
        let p2 = Prime::TWO;
        let a = VGroup::Subgroup(unitriangular(3, p2, 1_000).unwrap());
        for text in ["xy; yz", "xy; x^2 + yz", "x^2 + yz; xy + xz + y^2"] {
            let e = cls(text, 2, 3, 2);
            let o = omega_in(&e, &a, &cfg()).unwrap();
            assert!(crate::orbit::group::is_power_of(o.order(), 2), "{text}");
            let r = im_rho_order_in(&e, &a, &cfg()).unwrap();
            assert_eq!(r.order, r.joint);
        }
    }

    #[test]
    fn conventions_agree_on_orders() {
        let tr = cfg().with_convention(Convention::Transpose);
        for text in ["xy; yz", "xy + y^2; x^2 + y^2 + yz + z^2", "xy; xy"] {
            let e = cls(text, 2, 3, 2);
            assert_eq!(im_rho_order(&e, &cfg()).unwrap(), im_rho_order(&e, &tr).unwrap());
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let e = cls("xy; yz", 2, 3, 2);
        let a = omega(&e, &cfg()).unwrap();
        let b = omega(&e, &cfg().with_workers(8)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn caps_are_enforced() {
        let tight = EngineConfig { caps: crate::orbit::Caps { enumeration: 100, ..Default::default() }, ..cfg() };
        let e = cls("xy; yz", 2, 3, 2);
        assert!(matches!(stabilizer_v(&e, &tight), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn p_parts() {
        assert_eq!(p_part(&BigUint::from(48u32), Prime::TWO), BigUint::from(16u32));
        assert_eq!(p_part(&BigUint::from(480u32), Prime::new(5).unwrap()), BigUint::from(5u32));
    }
}
