//! One test per acceptance criterion. Every comparison is exact (integer orders and
//! labels, tolerance 0). Each test prints a single `criterion N: PASS|FAIL` line; run with
//! `--nocapture` to see them.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use extorb_core::catalog::{self, IM_RHO_TABLE};
use extorb_core::class::{pair_act, parse_class, ExtensionClass};
use extorb_core::fp::{gl_order, FpMatrix, Prime};
use extorb_core::forms::{
    arf_democratic, arf_symplectic, classify, parse_component, ClassComponent, QuadraticFormF2,
};
use extorb_core::orbit::{
    divisibility_check, im_rho_order, joint_stabilizer, omega, stabilizer_n, stabilizer_v, Convention,
    EngineConfig,
};
use extorb_core::twisting::{c_chi, c_chi_membership};
use extorb_core::wells::aut_order;

fn cfg() -> EngineConfig {
    EngineConfig::default()
}

fn report(n: u32, what: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {n:>2}: PASS  {what} [exact]");
    } else {
        println!("criterion {n:>2}: FAIL  {what} [exact]: {}", failures.join("; "));
    }
    assert!(failures.is_empty(), "criterion {n}: {}", failures.join("\n"));
}

fn check(fails: &mut Vec<String>, what: impl std::fmt::Display, expected: impl ToString, got: impl ToString) {
    let (e, g) = (expected.to_string(), got.to_string());
    if e != g {
        fails.push(format!("{what}: expected {e}, got {g}"));
    }
}

fn class(text: &str, p: u32, m: usize, n: usize) -> ExtensionClass {
    parse_class(text, Prime::new(p).unwrap(), m, n).unwrap()
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// `|GL_n(F_q)|` straight from the product formula.
fn gl_formula(n: u32, q: u64) -> u64 {
    (0..n).map(|i| q.pow(n) - q.pow(i)).product()
}

/// Every invertible `n × n` matrix over `F_p`, as row-major vectors, by brute force.
fn all_invertible(n: usize, p: u8) -> Vec<Vec<u8>> {
    let total = (p as u64).pow((n * n) as u32);
    (0..total)
        .map(|mut code| {
            (0..n * n)
                .map(|_| {
                    let d = (code % p as u64) as u8;
                    code /= p as u64;
                    d
                })
                .collect::<Vec<u8>>()
        })
        .filter(|a| det_mod(a, n, p) != 0)
        .collect()
}

fn det_mod(a: &[u8], n: usize, p: u8) -> u8 {
    let p = p as i64;
    let at = |i: usize, j: usize| a[i * n + j] as i64;
    let d = match n {
        1 => at(0, 0),
        2 => at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0),
        3 => {
            at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) - at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0))
                + at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0))
        }
        _ => unimplemented!("oracle only needs n ≤ 3"),
    };
    d.rem_euclid(p) as u8
}

fn to_matrix(a: &[u8], n: usize, p: u32) -> FpMatrix {
    FpMatrix::from_fn(Prime::new(p).unwrap(), n, n, |i, j| a[i * n + j] as i64)
}

#[test]
fn criterion_01_isotropy_orders() {
    let mut f = Vec::new();
    let forms = [("x^2 + yz", 6u64), ("xy", 8), ("x^2 + xy + y^2", 24), ("x^2", 24)];
    for (text, want) in forms {
        let r = stabilizer_v(&class(text, 2, 3, 1), &cfg()).unwrap();
        check(&mut f, text, want, &r.order);
        let id = r.identify().unwrap().unwrap();
        match text {
            "x^2 + yz" => check(&mut f, "x^2 + yz group", "S3", id.display_label()),
            // order 8 with two elements of order 4 and non-abelian: dihedral, not elementary abelian
            "xy" => check(&mut f, "xy group", "D8", id.display_label()),
            _ => {}
        }
    }
    report(1, "isotropy orders 6, 8, 24, 24 in GL_3(F_2)", &f);
}

#[test]
fn criterion_02_simultaneous_equivalence() {
    let mut f = Vec::new();
    let equal = [("xy", 16u64), ("x^2 + xy + y^2", 48), ("x^2 + yz", 12), ("x^2", 48)];
    for (x, want) in equal {
        let e = class(&format!("{x}; {x}"), 2, 3, 2);
        check(&mut f, format!("({x}, {x})"), want, im_rho_order(&e, &cfg()).unwrap().order);
    }
    let distinct = [
        ("x^2 + yz; x^2 + xy + y^2", 2u64, None),
        ("xy; x^2 + xy + y^2", 8, None),
        ("xy; x^2 + yz", 2, Some((2u64, "Z/2"))),
        ("xy; yz", 6, Some((6, ""))),
    ];
    for (text, want, om) in distinct {
        let e = class(text, 2, 3, 2);
        check(&mut f, text, want, im_rho_order(&e, &cfg()).unwrap().order);
        if let Some((order, label)) = om {
            let g = omega(&e, &cfg()).unwrap();
            check(&mut f, format!("|Ω| of {text}"), order, g.order());
            if !label.is_empty() {
                check(&mut f, format!("Ω of {text}"), label, g.identify().unwrap().display_label());
            }
        }
    }
    report(2, "simultaneous equivalence: 16, 48, 12, 48 and 2, 8, 2, 6", &f);
}

#[test]
fn criterion_03_im_rho_table() {
    let mut f = Vec::new();
    let mut rows = 0;
    for (col, ys) in IM_RHO_TABLE {
        let (stab, om) = match col {
            2 => (1u64, 2u64),
            3 => (1, 3),
            _ => (2, 2),
        };
        for y in ys.iter() {
            rows += 1;
            let r = im_rho_order(&class(&format!("x^2 + yz; {y}"), 2, 3, 2), &cfg()).unwrap();
            check(&mut f, format!("|Im ρ| for {y}"), col, &r.order);
            check(&mut f, format!("|stab| for {y}"), stab, &r.stab_v);
            check(&mut f, format!("|Ω| for {y}"), om, &r.omega);
        }
    }
    check(&mut f, "rows", 27, rows);
    report(3, "27-row |Im ρ| table with X = x^2 + yz", &f);
}

fn xy_plus_square() -> ExtensionClass {
    class("xy + y^2; x^2 + y^2 + yz + z^2", 2, 3, 2)
}

fn accepted(x: &ClassComponent, s: &FpMatrix, want: &ClassComponent) -> bool {
    x.change_basis(s).unwrap() == *want || x.change_basis(&s.transpose()).unwrap() == *want
}

#[test]
fn criterion_04_final_example_stabilizer_and_witnesses() {
    let mut f = Vec::new();
    let e = xy_plus_square();
    let r = im_rho_order(&e, &cfg()).unwrap();
    check(&mut f, "stabilizer order", 2, &r.stab_v);
    let two = Prime::TWO;
    let x = &e.components()[0];
    let y = &e.components()[1];
    let sigma1 = FpMatrix::from_rows(two, &[[1, 1, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
    let sigma2 = FpMatrix::from_rows(two, &[[1, 0, 0], [1, 1, 0], [1, 0, 1]]).unwrap();
    let xy = parse_component("xy", two, 3).unwrap();
    let odd = parse_component("x^2 + yz", two, 3).unwrap();
    check(&mut f, "sigma1 takes xy + y^2 to xy", true, accepted(x, &sigma1, &xy));
    check(&mut f, "sigma2 takes x^2 + y^2 + yz + z^2 to x^2 + yz", true, accepted(y, &sigma2, &odd));
    report(4, "final example: stabilizer order 2, witnesses accepted", &f);
}

/// The published Ω ≅ Z/2 and |Im ρ| = 4. Exhaustive enumeration of GL_3(F_2) finds only
/// two pairs fixing the class, both with t = 1, so Ω is trivial and |Im ρ| = 2.
#[test]
fn criterion_04_final_example_published_image_order() {
    let mut f = Vec::new();
    let e = xy_plus_square();
    let r = im_rho_order(&e, &cfg()).unwrap();
    check(&mut f, "|Ω|", 2, &r.omega);
    check(&mut f, "|Im ρ|", 4, &r.order);
    report(4, "final example: Ω ≅ Z/2 and |Im ρ| = 4", &f);
}

/// `|O^±_{2r}(F_2)| = 2(2^r ∓ 1) Π_{i<r} (2^{2i} − 1) 2^{2i}`, evaluated with `r = m/2`.
fn orthogonal(plus: bool, m: u32) -> u64 {
    let r = m / 2;
    let head = if plus { 2u64.pow(r) - 1 } else { 2u64.pow(r) + 1 };
    (1..r).fold(2 * head, |acc, i| acc * (4u64.pow(i) - 1) * 4u64.pow(i))
}

/// `Π_{i=1}^{k} (2^i − 1) 2^{i−1}`.
fn gl2_product(k: u32) -> u64 {
    (1..=k).map(|i| (2u64.pow(i) - 1) * 2u64.pow(i - 1)).product()
}

#[test]
fn criterion_05_standard_tuples() {
    let mut f = Vec::new();
    check(&mut f, "|O_2^+|", 2, orthogonal(true, 2));
    check(&mut f, "|O_2^-|", 6, orthogonal(false, 2));
    check(&mut f, "|O_4^+|", 72, orthogonal(true, 4));
    check(&mut f, "|O_4^-|", 120, orthogonal(false, 4));
    for m in [2u32, 4] {
        let plus = if m == 2 { "xy" } else { "x1*x2 + x3*x4" };
        let minus = if m == 2 { "x^2 + xy + y^2" } else { "x1*x2 + x3^2 + x3*x4 + x4^2" };
        for n in 1..=3u32 {
            for k in 0..=n {
                let comps: Vec<&str> = (0..n).map(|i| if i < k { plus } else { minus }).collect();
                let e = class(&comps.join("; "), 2, m as usize, n as usize);
                let tag = format!("m={m} n={n} k={k}");
                let r = im_rho_order(&e, &cfg()).unwrap();
                check(&mut f, format!("{tag} Ω"), 1, &r.omega);
                if k == n || k == 0 {
                    check(&mut f, format!("{tag} |Aut(V)_[E]|"), orthogonal(k == n, m), &r.stab_v);
                    check(&mut f, format!("{tag} |Aut(N)_[E]|"), 2u64.pow(n - 1) * gl2_product(n - 1), &r.stab_n);
                } else {
                    let want = 4u64.pow(n.saturating_sub(2)) * gl2_product(n.saturating_sub(2));
                    check(&mut f, format!("{tag} |Aut(N)_[E]|"), want, &r.stab_n);
                }
                let s = stabilizer_n(&e, &cfg()).unwrap();
                check(&mut f, format!("{tag} |Aut(N)_[E]| enumerated"), &r.stab_n, &s.order);
            }
        }
    }
    report(5, "standard tuples at m = 2, 4 and n ≤ 3", &f);
}

#[test]
fn criterion_06_generators_of_order_p_squared() {
    let mut f = Vec::new();
    let e = class("Bx; By; xy", 5, 2, 3);
    let r = im_rho_order(&e, &cfg()).unwrap();
    check(&mut f, "|Im ρ|", gl_formula(2, 5), &r.order);
    check(&mut f, "|Im ρ| literal", 480, &r.order);
    let a = aut_order(&e, true, &cfg()).unwrap();
    check(&mut f, "|Aut(P)|", 5u64.pow(7) * 24 * 4, &a.aut_order);
    check(&mut f, "|Aut(P)| literal", 7_500_000, &a.aut_order);
    report(6, "p = 5 with Bocksteins: |Im ρ| = 480, |Aut(P)| = 7500000", &f);
}

#[test]
fn criterion_07_u5() {
    let mut f = Vec::new();
    let entry = catalog::u5();
    let r = joint_stabilizer(&entry.class, &cfg()).unwrap();
    check(&mut f, "joint order", 8, &r.order);
    check(&mut f, "label", "D8", r.identify().unwrap().unwrap().display_label());
    let els: BTreeSet<(FpMatrix, FpMatrix)> = r.elements.clone().unwrap().into_iter().collect();
    let two = Prime::TWO;
    let m = |rows: &[&[i64]]| FpMatrix::from_rows(two, rows).unwrap();
    let printed = [
        (
            "A",
            m(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 1, 0]]),
            m(&[&[0, 0, 1], &[1, 1, 0], &[1, 0, 0]]),
        ),
        (
            "B",
            m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 1]]),
            m(&[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]),
        ),
    ];
    for (name, s, t) in &printed {
        check(&mut f, format!("pair {name} fixes"), true, pair_act(s, t, &entry.class).unwrap() == entry.class);
        check(&mut f, format!("pair {name} in stabilizer"), true, els.contains(&(s.clone(), t.clone())));
    }
    let ((a_s, a_t), (b_s, b_t)) = ((&printed[0].1, &printed[0].2), (&printed[1].1, &printed[1].2));
    let a_inv = (a_s.inverse().unwrap(), a_t.inverse().unwrap());
    let bab = (b_s.mul(a_s).unwrap().mul(b_s).unwrap(), b_t.mul(a_t).unwrap().mul(b_t).unwrap());
    check(&mut f, "A^4 = 1", true, a_s.pow(4).unwrap().is_identity() && a_t.pow(4).unwrap().is_identity());
    check(&mut f, "B^2 = 1", true, b_s.pow(2).unwrap().is_identity() && b_t.pow(2).unwrap().is_identity());
    check(&mut f, "BAB = A^-1", true, bab == a_inv);
    let a = aut_order(&entry.class, true, &cfg()).unwrap();
    check(&mut f, "|Aut(P)|", big(1 << 15), &a.aut_order);
    report(7, "U_5 quotient: D8 stabilizer with both generators, |Aut(P)| = 2^15", &f);
}

fn sp_formula(n: u32, p: u64) -> u64 {
    (1..=n).fold(p.pow(n * n), |acc, i| acc * (p.pow(2 * i) - 1))
}

fn extraspecial_class(n: usize, p: u32) -> ExtensionClass {
    let terms: Vec<String> = (0..n).map(|i| format!("x{}*x{}", 2 * i + 1, 2 * i + 2)).collect();
    class(&terms.join(" + "), p, 2 * n, 1)
}

#[test]
fn criterion_08_extraspecial() {
    let mut f = Vec::new();
    for p in [3u64, 5, 7] {
        let r = joint_stabilizer(&extraspecial_class(1, p as u32), &cfg()).unwrap();
        check(&mut f, format!("(1, {p})"), (p - 1) * sp_formula(1, p), &r.order);
    }
    report(8, "extraspecial p^3: (p − 1)|Sp(2, p)| for p = 3, 5, 7", &f);
}

#[test]
#[ignore = "slow: enumerates GL_4(F_3)"]
fn criterion_08_extraspecial_rank_two() {
    let mut f = Vec::new();
    let r = joint_stabilizer(&extraspecial_class(2, 3), &cfg()).unwrap();
    check(&mut f, "(2, 3)", 2 * sp_formula(2, 3), &r.order);
    report(8, "extraspecial 3^5: 2|Sp(4, 3)|", &f);
}

#[test]
fn criterion_09_w_group() {
    let mut f = Vec::new();
    let e = class("x^2; xy; y^2", 2, 2, 3);
    let r = joint_stabilizer(&e, &cfg()).unwrap();
    let els = r.elements.clone().unwrap();
    let proj: BTreeSet<&FpMatrix> = els.iter().map(|(s, _)| s).collect();
    check(&mut f, "projection injective", els.len(), proj.len());
    check(&mut f, "projection onto GL_2(F_2)", gl_formula(2, 2), proj.len());
    check(&mut f, "|Im ρ|", 6, im_rho_order(&e, &cfg()).unwrap().order);
    report(9, "W(2): bijective projection, |Im ρ| = 6", &f);
}

#[test]
fn criterion_10_u4() {
    let mut f = Vec::new();
    let entry = catalog::u4();
    let r = joint_stabilizer(&entry.class, &cfg()).unwrap();
    check(&mut f, "label", "S3", r.identify().unwrap().unwrap().display_label());
    let els: BTreeSet<(FpMatrix, FpMatrix)> = r.elements.clone().unwrap().into_iter().collect();
    let chi = catalog::u4_twisting();
    let conv = Convention::Inverse;
    for pr in &entry.pairs {
        check(&mut f, format!("pair {} in stabilizer", pr.name), true, els.contains(&(pr.s.clone(), pr.t.clone())));
        let sigma = conv.quotient_automorphism(&pr.s).unwrap();
        let t = conv.kernel_automorphism(&pr.t).unwrap();
        // extend by the identity on the third generator of the kernel
        let tau = FpMatrix::from_fn(Prime::TWO, 3, 3, |i, j| if i < 2 && j < 2 { t.get(i, j) as i64 } else { (i == j) as i64 });
        check(&mut f, format!("pair {} extended in C_χ", pr.name), true, c_chi_membership(&chi, &sigma, &tau).unwrap());
    }
    report(10, "U_4 quotient: S3 with both printed pairs, extended pairs in C_χ", &f);
}

#[test]
fn criterion_11_class_three() {
    let mut f = Vec::new();
    let p = 5u32;
    let e = class("xy", p, 2, 1);
    let r = joint_stabilizer(&e, &cfg()).unwrap();
    check(&mut f, "E_2 stabilizer order", 480, &r.order);
    // class-side t scales x∧y by t^{-1}, so the stabilizer is t = det(s)^{-1}, i.e. τ = det σ
    let oracle: BTreeSet<(FpMatrix, FpMatrix)> = all_invertible(2, 5)
        .into_iter()
        .map(|a| {
            let d = det_mod(&a, 2, 5);
            let t = (1..5u8).find(|t| (t * d) % 5 == 1).unwrap();
            (to_matrix(&a, 2, p), FpMatrix::from_fn(Prime::new(p).unwrap(), 1, 1, |_, _| t as i64))
        })
        .collect();
    let got: BTreeSet<(FpMatrix, FpMatrix)> = r.elements.clone().unwrap().into_iter().collect();
    check(&mut f, "E_2 stabilizer equals {τ = det σ}", true, got == oracle);

    let chi = catalog::class_three_twisting(p).unwrap();
    let c = c_chi(&chi, &cfg()).unwrap();
    // brute force over GL_2(F_5)^2: χ(σ e_j) = τ χ(e_j) τ^{-1} with χ(e_0) = [[1,0],[1,1]], χ(e_1) = 1
    let gl2 = all_invertible(2, 5);
    let mut brute = BTreeSet::new();
    for s in &gl2 {
        for t in &gl2 {
            // τ M τ^{-1} = M^k  ⇔  τ M = M^k τ, with M^k = [[1,0],[k,1]]
            let compatible = |j: usize| {
                let k = s[j] as u32; // coefficient of e_0 in σ e_j
                let want = if j == 0 { 1 } else { 0 };
                let (a, b, c2, d) = (t[0] as u32, t[1] as u32, t[2] as u32, t[3] as u32);
                let lhs = if want == 1 { [a + b, b, c2 + d, d] } else { [a, b, c2, d] };
                let rhs = [a, b, k * a + c2, k * b + d];
                lhs.iter().zip(&rhs).all(|(x, y)| x % 5 == y % 5)
            };
            if compatible(0) && compatible(1) {
                brute.insert((to_matrix(s, 2, p), to_matrix(t, 2, p)));
            }
        }
    }
    check(&mut f, "|C_χ| brute force", 1600, brute.len());
    check(&mut f, "|C_χ|", 1600, &c.order);
    let els: BTreeSet<(FpMatrix, FpMatrix)> = c.elements.clone().unwrap().into_iter().collect();
    check(&mut f, "C_χ equals brute force", true, els == brute);
    let fp = Prime::new(p).unwrap();
    let shape = els.iter().all(|(s, t)| t.get(0, 1) == 0 && s.get(0, 1) == 0 && fp.mul(s.get(0, 0), t.get(0, 0)) == t.get(1, 1));
    check(&mut f, "every member has t = 0 and k = v/s", true, shape);
    let kernel_kept = els.iter().all(|(s, _)| s.get(0, 1) == 0);
    check(&mut f, "ker χ preserved", true, kernel_kept);
    report(11, "class-three group: τ = det σ on E_2, |C_χ| = 1600 with t = 0, k = v/s", &f);
}

fn table(q: &QuadraticFormF2) -> Vec<u8> {
    (0..1u64 << q.m()).map(|v| q.eval_mask(v)).collect()
}

fn apply_mask(a: &[u8], m: usize, v: u64) -> u64 {
    (0..m).fold(0, |acc, i| {
        let bit = (0..m).fold(0u8, |b, j| b ^ (a[i * m + j] & ((v >> j) & 1) as u8));
        acc | ((bit as u64) << i)
    })
}

#[test]
fn criterion_12_property_suites() {
    let mut f = Vec::new();

    // classification triple vs brute-force GL_3(F_2) orbits on all 64 forms
    let m = 3;
    let forms: Vec<QuadraticFormF2> = (0..64u8)
        .map(|c| QuadraticFormF2::new(m, (0..6).map(|i| (c >> i) & 1).collect()).unwrap())
        .collect();
    let gl3 = all_invertible(3, 2);
    let mut orbit_id = vec![usize::MAX; 64];
    let tables: Vec<Vec<u8>> = forms.iter().map(table).collect();
    let mut next = 0;
    for i in 0..64 {
        if orbit_id[i] != usize::MAX {
            continue;
        }
        for a in &gl3 {
            let moved: Vec<u8> = (0..8u64).map(|v| tables[i][apply_mask(a, m, v) as usize]).collect();
            let j = tables.iter().position(|t| *t == moved).unwrap();
            orbit_id[j] = next;
        }
        next += 1;
    }
    let triples: Vec<_> = forms.iter().map(|q| classify(q).unwrap()).collect();
    let mut agree = true;
    for i in 0..64 {
        for j in 0..64 {
            agree &= (orbit_id[i] == orbit_id[j]) == (triples[i] == triples[j]);
        }
    }
    check(&mut f, "triple separates GL_3(F_2) orbits", true, agree);

    // democratic = symplectic Arf on every nondegenerate form with m ≤ 4
    for m in 1..=4usize {
        let len = m * (m + 1) / 2;
        for c in 0..1u32 << len {
            let q = QuadraticFormF2::new(m, (0..len).map(|i| ((c >> i) & 1) as u8).collect()).unwrap();
            if let Ok(s) = arf_symplectic(&q) {
                check(&mut f, format!("Arf of {c} in {m} variables"), s, arf_democratic(&q).unwrap());
            }
        }
    }

    // ledger identity, Ω axioms and divisibility on every tested class
    let mut tested: Vec<ExtensionClass> = vec![xy_plus_square(), catalog::u4().class, catalog::u5().class];
    tested.extend(catalog::simultaneous().into_iter().map(|e| e.class));
    tested.extend(catalog::im_rho_table().into_iter().map(|e| e.class));
    for e in ["xy", "Bx; By; xy"] {
        tested.push(class(e, 3, 2, e.split(';').count()));
    }
    for e in &tested {
        let r = im_rho_order(e, &cfg()).unwrap();
        let joint = joint_stabilizer(e, &cfg()).unwrap();
        check(&mut f, "|joint| = |stab_v|·|stab_n|·|Ω|", &joint.order, &r.stab_v * &r.stab_n * &r.omega);
        let g = omega(e, &cfg()).unwrap();
        check(&mut f, "Ω axioms", true, g.check_axioms().is_ok());
        check(&mut f, "|Ω| divides orbit gcd", true, divisibility_check(e, &cfg()).unwrap().divides);
        let t = im_rho_order(e, &cfg().with_convention(Convention::Transpose)).unwrap();
        check(&mut f, "convention-robust |Im ρ|", &r.order, &t.order);
        let one = joint_stabilizer(e, &cfg().with_workers(1)).unwrap();
        let eight = joint_stabilizer(e, &cfg().with_workers(8)).unwrap();
        check(&mut f, "workers 1 vs 8", true, one == eight);
    }
    check(&mut f, "|GL_3(F_2)| oracle", gl_order(3, Prime::TWO), gl3.len());
    report(12, "property suites: orbit partition, Arf, ledger, Ω, conventions, workers", &f);
}
