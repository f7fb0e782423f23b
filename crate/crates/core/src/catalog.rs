//! Named extension classes with known stabilizer data, used as golden cases.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::class::{parse_class, print_class, ExtensionClass};
use crate::error::{Error, Result};
use crate::fp::{gl_order, FpMatrix, Prime};
use crate::forms::{print_component, standard_form, ClassComponent, StandardKind};
use crate::orbit::{im_rho_order, joint_stabilizer, omega, EngineConfig};
use crate::twisting::TwistingMap;
use crate::wells::aut_order;

/// Keys used in [`CatalogEntry::expected`].
pub mod key {
    pub const STAB_V: &str = "stab_v";
    pub const STAB_N: &str = "stab_n";
    pub const OMEGA: &str = "omega";
    pub const OMEGA_LABEL: &str = "omega_label";
    pub const IM_RHO: &str = "im_rho";
    pub const JOINT: &str = "joint";
    pub const JOINT_LABEL: &str = "joint_label";
    pub const AUT_ORDER: &str = "aut_order";
}

/// A printed pair `(s, t)` acting on a class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedPair {
    pub name: String,
    pub s: FpMatrix,
    pub t: FpMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub class: ExtensionClass,
    /// claim name ↦ expected value, as decimal strings or group labels
    pub expected: BTreeMap<String, String>,
    /// the group or construction the class comes from
    pub source: String,
    pub notes: Vec<String>,
    pub pairs: Vec<NamedPair>,
    /// needs a long enumeration; skipped by default runs
    pub slow: bool,
}

impl CatalogEntry {
    fn new(name: impl Into<String>, class: ExtensionClass, source: impl Into<String>) -> Self {
        CatalogEntry {
            name: name.into(),
            class,
            expected: BTreeMap::new(),
            source: source.into(),
            notes: Vec::new(),
            pairs: Vec::new(),
            slow: false,
        }
    }

    fn expect(mut self, key: &str, value: impl ToString) -> Self {
        self.expected.insert(key.to_string(), value.to_string());
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    fn pair(mut self, name: &str, s: FpMatrix, t: FpMatrix) -> Self {
        self.pairs.push(NamedPair { name: name.into(), s, t });
        self
    }

    pub fn expected_big(&self, key: &str) -> Option<BigUint> {
        self.expected.get(key).and_then(|v| v.parse().ok())
    }

    pub fn class_text(&self) -> String {
        print_class(&self.class)
    }
}

fn prime(p: u32) -> Result<Prime> {
    Prime::new(p)
}

fn mat(p: Prime, rows: &[&[i64]]) -> FpMatrix {
    FpMatrix::from_rows(p, rows).expect("well-formed literal")
}

/// `|Sp(2n, F_p)| = p^{n²} Π_{i=1}^{n} (p^{2i} − 1)`.
pub fn sp_order(n: usize, p: Prime) -> BigUint {
    let q = BigUint::from(p.get());
    (1..=n).fold(q.pow((n * n) as u32), |acc, i| acc * (q.pow(2 * i as u32) - 1u32))
}

/// `|O^±_{2r}(F_2)| = 2(2^r ∓ 1) Π_{i=1}^{r−1} (2^{2i} − 1) 2^{2i}`.
pub fn orthogonal_order(kind: StandardKind, m: usize) -> Result<BigUint> {
    if m == 0 || m % 2 == 1 || kind == StandardKind::Odd {
        return Err(Error::InvalidInput("orthogonal orders are defined for even m and kinds +/-".into()));
    }
    let r = m / 2;
    let two = BigUint::from(2u32);
    let head = match kind {
        StandardKind::Plus => two.pow(r as u32) - 1u32,
        _ => two.pow(r as u32) + 1u32,
    };
    Ok((1..r).fold(&two * head, |acc, i| {
        acc * (two.pow(2 * i as u32) - 1u32) * two.pow(2 * i as u32)
    }))
}

/// `B ⊗ ζ` with `B = x_1∧x_2 + ⋯ + x_{2n−1}∧x_{2n}` over an odd prime.
pub fn extraspecial(n: usize, p: u32) -> Result<CatalogEntry> {
    let p = prime(p)?;
    if !p.is_odd() || n == 0 {
        return Err(Error::InvalidInput("extraspecial classes need an odd prime and n ≥ 1".into()));
    }
    let m = 2 * n;
    let text = if m == 2 {
        "x∧y".to_string()
    } else {
        (0..n).map(|i| format!("x{}∧x{}", 2 * i + 1, 2 * i + 2)).collect::<Vec<_>>().join(" + ")
    };
    let class = parse_class(&text, p, m, 1)?;
    let joint = BigUint::from(p.get() - 1) * sp_order(n, p);
    let mut e = CatalogEntry::new(
        format!("extraspecial-{n}-{p}"),
        class,
        format!("extraspecial group of order {p}^{} and exponent {p}", m + 1),
    )
    .expect(key::JOINT, &joint)
    .expect(key::IM_RHO, &joint)
    .note("joint stabilizer is GSp(2n, F_p); t is multiplication by det(s)^-1 on the class side");
    e.slow = n >= 2;
    Ok(e)
}

/// The universal W-group class: every monomial of degree two, lexicographically.
pub fn w_group(n: usize) -> Result<CatalogEntry> {
    if n == 0 {
        return Err(Error::InvalidInput("W(n) needs n ≥ 1".into()));
    }
    let names: Vec<String> = if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    };
    let mut comps = Vec::new();
    for i in 0..n {
        for j in i..n {
            comps.push(if i == j {
                format!("{}^2", names[i])
            } else if n <= 3 {
                format!("{}{}", names[i], names[j])
            } else {
                format!("{}*{}", names[i], names[j])
            });
        }
    }
    let rank = comps.len();
    let class = parse_class(&comps.join("; "), Prime::TWO, n, rank)?;
    let gl = gl_order(n, Prime::TWO);
    Ok(CatalogEntry::new(format!("w-group-{n}"), class, format!("universal W-group on {n} generators"))
        .expect(key::IM_RHO, &gl)
        .expect(key::JOINT, &gl)
        .note("the joint stabilizer projects isomorphically onto GL_n(F_2)"))
}

/// `xy ⊗ x̄₁₃ + yz ⊗ x̄₂₄` from `U_4(F_2)`, with the two printed generating pairs.
pub fn u4() -> CatalogEntry {
    let p = Prime::TWO;
    let class = parse_class("xy; yz", p, 3, 2).expect("literal class");
    CatalogEntry::new("u4", class, "U_4(F_2) modulo its second mod-2 lower central term")
        .expect(key::JOINT, 6)
        .expect(key::IM_RHO, 6)
        .expect(key::JOINT_LABEL, "S3")
        .pair(
            "involution",
            mat(p, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]),
            mat(p, &[&[0, 1], &[1, 0]]),
        )
        .pair(
            "order-three",
            mat(p, &[&[1, 0, 1], &[0, 1, 0], &[1, 0, 0]]),
            mat(p, &[&[0, 1], &[1, 1]]),
        )
        .note("basis of V: x12, x23, x34; basis of N: x13, x24")
}

/// Conjugation action of `V` on `Γ¹(U_4) = ⟨x13, x24, x14⟩`.
pub fn u4_twisting() -> TwistingMap {
    let p = Prime::TWO;
    TwistingMap::new(
        p,
        3,
        3,
        vec![
            mat(p, &[&[1, 0, 0], &[0, 1, 0], &[0, 1, 1]]),
            FpMatrix::identity(p, 3),
            mat(p, &[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1]]),
        ],
    )
    .expect("commuting involutions")
}

/// `U_5(F_2)/Γ²` with variables `x1..x4` for `y12, y23, y34, y45`.
pub fn u5() -> CatalogEntry {
    let p = Prime::TWO;
    let class = parse_class("x1*x2; x2*x3; x3*x4", p, 4, 3).expect("literal class");
    CatalogEntry::new("u5", class, "U_5(F_2) modulo its second mod-2 lower central term")
        .expect(key::JOINT, 8)
        .expect(key::IM_RHO, 8)
        .expect(key::JOINT_LABEL, "D8")
        .expect(key::AUT_ORDER, 1u64 << 15)
        .pair(
            "A",
            mat(p, &[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 1, 0]]),
            mat(p, &[&[0, 0, 1], &[1, 1, 0], &[1, 0, 0]]),
        )
        .pair(
            "B",
            mat(p, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 1]]),
            mat(p, &[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]),
        )
        .note("variables x1, x2, x3, x4 stand for y12, y23, y34, y45")
        .note("N = <x13, x24, x35> is the commutator subgroup, hence characteristic")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum P2Variant {
    /// only the commutator component
    Printed,
    /// with the Bockstein components forced by `a^{p²} = b^{p²} = 1`
    WithBockstein,
}

/// The group `⟨a, b, c | a^{p²} = b^{p²} = c^p = 1, c = (b, a)⟩` modulo `Γ^p`, with
/// `N = ⟨a^p, b^p, c⟩`.
pub fn p2_generators(p: u32, variant: P2Variant) -> Result<CatalogEntry> {
    let p = prime(p)?;
    if !p.is_odd() {
        return Err(Error::InvalidInput("this class needs an odd prime".into()));
    }
    let (name, text) = match variant {
        P2Variant::Printed => (format!("p2-generators-{p}"), "0; 0; x∧y"),
        P2Variant::WithBockstein => (format!("p2-generators-bockstein-{p}"), "Bx; By; x∧y"),
    };
    let class = parse_class(text, p, 2, 3)?;
    let source = "two generators of order p^2 with central commutator of order p";
    let e = CatalogEntry::new(name, class, source);
    Ok(match variant {
        P2Variant::WithBockstein => {
            let gl = gl_order(2, p);
            let aut = BigUint::from(p.get()).pow(6) * &gl;
            e.expect(key::IM_RHO, &gl).expect(key::AUT_ORDER, aut)
        }
        P2Variant::Printed => e.note(
            "without the Bockstein components the stabilizer is strictly larger than GL_2(F_p)",
        ),
    })
}

/// `[E_2] = x∧y ⊗ c̄` for the class-three group `⟨a, b, c, d | c = (b, a), d = (c, a)⟩`.
pub fn class_three_e2(p: u32) -> Result<CatalogEntry> {
    let p = prime(p)?;
    if !p.is_odd() {
        return Err(Error::InvalidInput("this class needs an odd prime".into()));
    }
    let class = parse_class("x∧y", p, 2, 1)?;
    let gl = gl_order(2, p);
    Ok(CatalogEntry::new(
        format!("class-three-e2-{p}"),
        class,
        "exponent-p group of class three on two generators, top quotient",
    )
    .expect(key::JOINT, &gl)
    .expect(key::IM_RHO, &gl)
    .note("as automorphisms of N, the stabilizer is {(s, t) : t = det s}"))
}

/// `χ(x̄): c ↦ c + d, d ↦ d` and `χ(ȳ) = id`.
pub fn class_three_twisting(p: u32) -> Result<TwistingMap> {
    let p = prime(p)?;
    TwistingMap::new(p, 2, 2, vec![mat(p, &[&[1, 0], &[1, 1]]), FpMatrix::identity(p, 2)])
}

fn pair_class(x: &str, y: &str) -> ExtensionClass {
    parse_class(&format!("{x}; {y}"), Prime::TWO, 3, 2).expect("literal class")
}

/// Pairs of standard forms in three variables with known `|Im ρ|`.
pub fn simultaneous() -> Vec<CatalogEntry> {
    let same = [
        ("xy", 8, 16),
        ("x^2 + xy + y^2", 24, 48),
        ("x^2 + yz", 6, 12),
        ("x^2", 24, 48),
    ];
    let mut out: Vec<CatalogEntry> = same
        .iter()
        .enumerate()
        .map(|(i, &(x, stab, im))| {
            CatalogEntry::new(format!("simultaneous-equal-{}", i + 1), pair_class(x, x), "pair (X, X)")
                .expect(key::STAB_V, stab)
                .expect(key::STAB_N, 2)
                .expect(key::OMEGA, 1)
                .expect(key::IM_RHO, im)
        })
        .collect();
    let distinct: [(&str, &str, u32, u32, Option<&str>); 4] = [
        ("x^2 + yz", "x^2 + xy + y^2", 2, 1, None),
        ("xy", "x^2 + xy + y^2", 8, 1, None),
        ("xy", "x^2 + yz", 1, 2, Some("Z/2")),
        ("xy", "yz", 1, 6, None),
    ];
    for (i, &(x, y, stab, omega, label)) in distinct.iter().enumerate() {
        let mut e = CatalogEntry::new(
            format!("simultaneous-distinct-{}", i + 1),
            pair_class(x, y),
            "pair (X, Y) of distinct standard forms",
        )
        .expect(key::STAB_V, stab)
        .expect(key::STAB_N, 1)
        .expect(key::OMEGA, omega)
        .expect(key::IM_RHO, stab * omega);
        if let Some(l) = label {
            e = e.expect(key::OMEGA_LABEL, l);
        }
        out.push(e);
    }
    out
}

/// Second forms `Y` paired with `X = x² + yz`, grouped by `|Im ρ|`.
pub const IM_RHO_TABLE: [(u32, &[&str]); 3] = [
    (
        2,
        &[
            "x^2 + xz + yz",
            "x^2 + xy + xz + z^2",
            "x^2 + xz + yz + z^2",
            "x^2 + xy + y^2 + yz",
            "x^2 + xy + yz",
            "x^2 + xy + xz + y^2",
        ],
    ),
    (
        3,
        &[
            "xy + xz + y^2",
            "x^2 + xy + xz + y^2 + yz",
            "xz + y^2 + yz",
            "xy + xz + z^2",
            "x^2 + xy + y^2 + z^2",
            "x^2 + xz + y^2 + z^2",
            "x^2 + xy + z^2",
            "xz + y^2 + yz + z^2",
            "x^2 + xz + y^2",
            "x^2 + xy + xz + yz + z^2",
            "xy + y^2 + yz + z^2",
            "xy + yz + z^2",
        ],
    ),
    (
        4,
        &[
            "x^2 + yz + z^2",
            "xy + xz + y^2 + yz + z^2",
            "xy + xz + yz",
            "xz + y^2 + z^2",
            "x^2 + y^2 + yz",
            "xy + z^2",
            "xy + y^2 + z^2",
            "x^2 + y^2 + yz + z^2",
            "xz + y^2",
        ],
    ),
];

/// The 27 pairs `(x² + yz, Y)` with `Y` equivalent but not simultaneously equivalent.
pub fn im_rho_table() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for (col, ys) in IM_RHO_TABLE {
        let (stab, omega, label) = match col {
            2 => (1, 2, "Z/2"),
            3 => (1, 3, "Z/3"),
            _ => (2, 2, "Z/2"),
        };
        for (row, y) in ys.iter().enumerate() {
            out.push(
                CatalogEntry::new(
                    format!("im-rho-table-{col}-{}", row + 1),
                    pair_class("x^2 + yz", y),
                    "X = x^2 + yz with an equivalent second form",
                )
                .expect(key::IM_RHO, col)
                .expect(key::STAB_V, stab)
                .expect(key::STAB_N, 1)
                .expect(key::OMEGA, omega)
                .expect(key::OMEGA_LABEL, label),
            );
        }
    }
    out
}

/// `(xy + y², x² + y² + yz + z²)` and the two reduction witnesses, written as maps of
/// basis vectors (columns are images).
///
/// The stabilizer order is confirmed; the claimed `Ω ≅ Z/2` and `|Im ρ| = 4` are kept
/// under `notes` only, since `X + Y` is not equivalent to `Y`.
pub fn xy_plus_square() -> CatalogEntry {
    let p = Prime::TWO;
    CatalogEntry::new(
        "xy-plus-square",
        pair_class("xy + y^2", "x^2 + y^2 + yz + z^2"),
        "pair of non-standard forms reduced separately",
    )
    .expect(key::STAB_V, 2)
    .expect(key::STAB_N, 1)
    .expect(key::OMEGA, 1)
    .expect(key::IM_RHO, 2)
    .pair(
        "sigma1",
        mat(p, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
        FpMatrix::identity(p, 2),
    )
    .pair(
        "sigma2",
        mat(p, &[&[1, 0, 0], &[1, 1, 0], &[1, 0, 1]]),
        FpMatrix::identity(p, 2),
    )
    .note("published values: Omega = Z/2 and |Im rho| = 4; enumeration gives a trivial Omega")
    .note("sigma1 (y -> x + y) sends X to xy as a map of basis vectors")
    .note("sigma2 (x -> x + y + z) sends Y to x^2 + yz as a substitution of variables")
}

/// `(X, …, X, Y, …, Y)` with `k` copies of `X = Φ_m⁺` and `n − k` of `Y = Φ_m⁻`.
pub fn standard_tuple(m: usize, n: usize, k: usize) -> Result<CatalogEntry> {
    if m == 0 || m % 2 == 1 || n == 0 || k > n {
        return Err(Error::InvalidInput("standard tuples need even m, n ≥ 1 and k ≤ n".into()));
    }
    let p = Prime::TWO;
    let x: ClassComponent = standard_form(StandardKind::Plus, m)?.into();
    let y: ClassComponent = standard_form(StandardKind::Minus, m)?.into();
    let comps: Vec<ClassComponent> = (0..n).map(|i| if i < k { x.clone() } else { y.clone() }).collect();
    let class = ExtensionClass::new(p, m, comps)?;
    let mut e = CatalogEntry::new(
        format!("standard-tuple-{m}-{n}-{k}"),
        class,
        format!("{k} copies of {} and {} of {}", print_component(&x), n - k, print_component(&y)),
    )
    .expect(key::OMEGA, 1);
    let rank = if k == 0 || k == n { 1 } else { 2 };
    e = e.expect(key::STAB_N, crate::orbit::structural_stab_n_order(p, n, rank));
    if k == n {
        e = e.expect(key::STAB_V, orthogonal_order(StandardKind::Plus, m)?);
    } else if k == 0 {
        e = e.expect(key::STAB_V, orthogonal_order(StandardKind::Minus, m)?);
    } else {
        e = e.note("Aut(V) side is the intersection of the two orthogonal groups");
    }
    Ok(e)
}

/// Every named entry, in a fixed order.
pub fn all() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for (n, p) in [(1, 3), (1, 5), (1, 7), (2, 3)] {
        out.push(extraspecial(n, p).expect("odd prime"));
    }
    for n in [1, 2] {
        out.push(w_group(n).expect("n ≥ 1"));
    }
    out.push(u4());
    out.push(u5());
    for p in [3, 5] {
        out.push(p2_generators(p, P2Variant::Printed).expect("odd prime"));
        out.push(p2_generators(p, P2Variant::WithBockstein).expect("odd prime"));
    }
    out.push(class_three_e2(5).expect("odd prime"));
    out.extend(simultaneous());
    out.extend(im_rho_table());
    out.push(xy_plus_square());
    for m in [2, 4] {
        for n in 1..=3 {
            for k in 0..=n {
                out.push(standard_tuple(m, n, k).expect("valid tuple"));
            }
        }
    }
    out
}

pub fn get(name: &str) -> Option<CatalogEntry> {
    all().into_iter().find(|e| e.name == name)
}

/// One expected value compared with the engine's result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub claim: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

/// Recomputes every expected value of `entry`.
pub fn verify(entry: &CatalogEntry, cfg: &EngineConfig) -> Result<Vec<Check>> {
    let e = &entry.class;
    let r = im_rho_order(e, cfg)?;
    let mut computed: BTreeMap<&str, String> = BTreeMap::from([
        (key::STAB_V, r.stab_v.to_string()),
        (key::STAB_N, r.stab_n.to_string()),
        (key::OMEGA, r.omega.to_string()),
        (key::IM_RHO, r.order.to_string()),
        (key::JOINT, r.joint.to_string()),
    ]);
    if entry.expected.contains_key(key::AUT_ORDER) {
        computed.insert(key::AUT_ORDER, aut_order(e, true, cfg)?.aut_order.to_string());
    }
    if entry.expected.contains_key(key::OMEGA_LABEL) {
        computed.insert(key::OMEGA_LABEL, omega(e, cfg)?.identify()?.display_label());
    }
    if entry.expected.contains_key(key::JOINT_LABEL) {
        let label = match joint_stabilizer(e, cfg)?.identify() {
            Some(id) => id?.display_label(),
            None => "unlisted".to_string(),
        };
        computed.insert(key::JOINT_LABEL, label);
    }
    Ok(entry
        .expected
        .iter()
        .map(|(k, want)| {
            let got = computed.get(k.as_str()).cloned().unwrap_or_else(|| "n/a".into());
            Check {
                claim: k.clone(),
                ok: &got == want,
                expected: want.clone(),
                computed: got,
            }
        })
        .collect())
}
