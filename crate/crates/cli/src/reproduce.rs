use std::collections::BTreeSet;

use clap::ValueEnum;
use num_bigint::BigUint;
use serde::Serialize;

use extorb_core::catalog::{self, key, CatalogEntry, IM_RHO_TABLE};
use extorb_core::class::pair_act;
use extorb_core::fp::{gl_order, FpMatrix, Prime};
use extorb_core::forms::{print_component, standard_form, ClassComponent, StandardKind};
use extorb_core::orbit::{im_rho_order, joint_stabilizer, EngineConfig};
use extorb_core::twisting::{c_chi, c_chi_membership};

use crate::commands::Output;
use crate::error::{CliError, CliResult};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// |Im ρ| for the 27 second forms paired with x^2 + yz
    ImRhoTable,
    /// pairs of standard forms in three variables
    Simultaneous,
    /// tuples of standard forms Φ+ and Φ- in 2 and 4 variables
    StandardTuples,
    /// worked examples: order-p^2 generators, U_5, a non-standard pair
    Examples,
    /// extraspecial groups, W-groups, U_4 and the class-three group
    Applications,
}

#[derive(Clone, Debug, Serialize)]
struct Row {
    name: String,
    class: String,
    claim: String,
    expected: String,
    computed: String,
    ok: bool,
}

impl Row {
    fn new(name: &str, class: String, claim: &str, expected: impl ToString, computed: impl ToString) -> Row {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        Row {
            name: name.into(),
            class,
            claim: claim.into(),
            ok: expected == computed,
            expected,
            computed,
        }
    }
}

fn verify_rows(entry: &CatalogEntry, cfg: &EngineConfig) -> CliResult<Vec<Row>> {
    Ok(catalog::verify(entry, cfg)?
        .into_iter()
        .map(|c| Row {
            name: entry.name.clone(),
            class: entry.class_text(),
            claim: c.claim,
            expected: c.expected,
            computed: c.computed,
            ok: c.ok,
        })
        .collect())
}

fn entry(name: &str) -> CliResult<CatalogEntry> {
    catalog::get(name).ok_or_else(|| CliError::Internal(format!("missing catalog entry {name}")))
}

pub fn run(target: Target, slow: bool, cfg: &EngineConfig, out: &Output) -> CliResult {
    let rows = match target {
        Target::ImRhoTable => im_rho_table(cfg)?,
        Target::Simultaneous => {
            let mut rows = Vec::new();
            for e in catalog::simultaneous() {
                rows.extend(verify_rows(&e, cfg)?);
            }
            rows
        }
        Target::StandardTuples => {
            let mut rows = Vec::new();
            for m in [2, 4] {
                for n in 1..=3 {
                    for k in 0..=n {
                        rows.extend(verify_rows(&catalog::standard_tuple(m, n, k)?, cfg)?);
                    }
                }
            }
            rows
        }
        Target::Examples => examples(cfg)?,
        Target::Applications => applications(slow, cfg)?,
    };
    let mut entries: Vec<(&str, bool)> = Vec::new();
    for r in &rows {
        match entries.last_mut() {
            Some((name, ok)) if *name == r.name => *ok &= r.ok,
            _ => entries.push((&r.name, r.ok)),
        }
    }
    let matched = entries.iter().filter(|e| e.1).count();
    let total = entries.len();
    let checks_ok = rows.iter().filter(|r| r.ok).count();
    let target_name = target.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let value = serde_json::json!({ "target": target_name, "rows": rows, "matched": matched, "total": total, "checks_matched": checks_ok, "checks_total": rows.len() });
    out.emit(&value, || {
        let mut s = String::new();
        if target == Target::ImRhoTable {
            s += &table_layout(&rows);
        }
        for r in &rows {
            s += &format!(
                "{} {:<26} {:<40} {:<12} expected {:<10} computed {}\n",
                if r.ok { "ok  " } else { "FAIL" },
                r.name,
                r.class,
                r.claim,
                r.expected,
                r.computed
            );
        }
        s += &format!("{checks_ok}/{} checks agree\n{matched}/{total} match\n", rows.len());
        s
    })?;
    if matched == total {
        Ok(())
    } else {
        Err(CliError::Mismatch(format!("{matched}/{total} match")))
    }
}

fn im_rho_table(cfg: &EngineConfig) -> CliResult<Vec<Row>> {
    let mut rows = Vec::new();
    for e in catalog::im_rho_table() {
        rows.extend(verify_rows(&e, cfg)?);
    }
    Ok(rows)
}

/// The three columns side by side, one cell per second form.
fn table_layout(rows: &[Row]) -> String {
    let width = 34;
    let mut cols: Vec<Vec<String>> = Vec::new();
    for (col, ys) in IM_RHO_TABLE {
        let cells = ys
            .iter()
            .enumerate()
            .map(|(i, y)| {
                let name = format!("im-rho-table-{col}-{}", i + 1);
                let got = rows
                    .iter()
                    .find(|r| r.name == name && r.claim == key::IM_RHO)
                    .map(|r| r.computed.clone())
                    .unwrap_or_default();
                let mark = if got == col.to_string() { "ok".to_string() } else { format!("got {got}") };
                format!("{y} [{mark}]")
            })
            .collect();
        cols.push(cells);
    }
    let mut s = format!("{:<width$}{:<width$}{}\n", "|Im ρ| = 2", "|Im ρ| = 3", "|Im ρ| = 4");
    let depth = cols.iter().map(Vec::len).max().unwrap_or(0);
    for i in 0..depth {
        let cell = |c: usize| cols[c].get(i).cloned().unwrap_or_default();
        s += &format!("{:<width$}{:<width$}{}\n", cell(0), cell(1), cell(2));
    }
    s + "\n"
}

fn fixes(e: &CatalogEntry, name: &str) -> CliResult<bool> {
    let pr = e
        .pairs
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| CliError::Internal(format!("{} has no pair {name}", e.name)))?;
    Ok(pair_act(&pr.s, &pr.t, &e.class)? == e.class)
}

fn examples(cfg: &EngineConfig) -> CliResult<Vec<Row>> {
    let mut rows = Vec::new();
    for name in ["p2-generators-bockstein-5", "p2-generators-bockstein-3"] {
        rows.extend(verify_rows(&entry(name)?, cfg)?);
    }
    let printed = entry("p2-generators-3")?;
    let r = im_rho_order(&printed.class, cfg)?;
    rows.push(Row::new(
        &printed.name,
        printed.class_text(),
        "im_rho > |GL_2(F_3)|",
        true,
        r.order > gl_order(2, Prime::new(3)?),
    ));

    let u5 = entry("u5")?;
    rows.extend(verify_rows(&u5, cfg)?);
    let stab = joint_stabilizer(&u5.class, cfg)?;
    let els: BTreeSet<(FpMatrix, FpMatrix)> = stab.elements.clone().unwrap_or_default().into_iter().collect();
    for pr in &u5.pairs {
        rows.push(Row::new(&u5.name, u5.class_text(), &format!("pair {} fixes", pr.name), true, fixes(&u5, &pr.name)?));
        rows.push(Row::new(
            &u5.name,
            u5.class_text(),
            &format!("pair {} in stabilizer", pr.name),
            true,
            els.contains(&(pr.s.clone(), pr.t.clone())),
        ));
    }
    let a = &u5.pairs[0];
    let b = &u5.pairs[1];
    let mul = |x: &(FpMatrix, FpMatrix), y: &(FpMatrix, FpMatrix)| -> CliResult<(FpMatrix, FpMatrix)> {
        Ok((x.0.mul(&y.0)?, x.1.mul(&y.1)?))
    };
    let (ap, bp) = ((a.s.clone(), a.t.clone()), (b.s.clone(), b.t.clone()));
    let b2 = mul(&bp, &bp)?;
    let bab = mul(&mul(&bp, &ap)?, &bp)?;
    let a_inv = (ap.0.inverse()?, ap.1.inverse()?);
    let a4 = mul(&mul(&ap, &ap)?, &mul(&ap, &ap)?)?;
    rows.push(Row::new(&u5.name, u5.class_text(), "A^4 = 1", true, a4.0.is_identity() && a4.1.is_identity()));
    rows.push(Row::new(&u5.name, u5.class_text(), "B^2 = 1", true, b2.0.is_identity() && b2.1.is_identity()));
    rows.push(Row::new(&u5.name, u5.class_text(), "BAB = A^-1", true, bab == a_inv));

    let xy = entry("xy-plus-square")?;
    rows.extend(verify_rows(&xy, cfg)?);
    let targets = [
        ("sigma1", 0, StandardKind::Plus, 2usize),
        ("sigma2", 1, StandardKind::Odd, 3usize),
    ];
    for (name, comp, kind, core) in targets {
        let pr = xy.pairs.iter().find(|p| p.name == name).expect("witness present");
        let x = &xy.class.components()[comp];
        let want: ClassComponent = padded(kind, core, 3)?.into();
        let reading = witness_reading(x, &pr.s, &want)?;
        rows.push(Row::new(
            &xy.name,
            xy.class_text(),
            &format!("{name} reduces to {}", print_component(&want)),
            true,
            reading.is_some(),
        ));
        if let Some(r) = reading {
            rows.last_mut().expect("just pushed").claim += &format!(" [{r}]");
        }
    }
    Ok(rows)
}

/// Standard form with `core` used variables inside `m`.
fn padded(kind: StandardKind, core: usize, m: usize) -> CliResult<extorb_core::forms::QuadraticFormF2> {
    let f = standard_form(kind, core)?;
    let terms: Vec<(usize, usize)> = f.terms().collect();
    Ok(extorb_core::forms::QuadraticFormF2::from_terms(m, &terms)?)
}

/// Which reading of a printed witness `s` sends `x` to `want`: as a map of basis vectors,
/// or as a substitution of variables (the transpose).
pub fn witness_reading(x: &ClassComponent, s: &FpMatrix, want: &ClassComponent) -> CliResult<Option<&'static str>> {
    if &x.change_basis(s)? == want {
        return Ok(Some("basis vectors"));
    }
    if &x.change_basis(&s.transpose())? == want {
        return Ok(Some("substitution"));
    }
    Ok(None)
}

fn block_with_identity(t: &FpMatrix, extra: usize) -> FpMatrix {
    let n = t.rows();
    FpMatrix::from_fn(t.prime(), n + extra, n + extra, |i, j| {
        if i < n && j < n {
            t.get(i, j) as i64
        } else {
            (i == j) as i64
        }
    })
}

fn applications(slow: bool, cfg: &EngineConfig) -> CliResult<Vec<Row>> {
    let mut rows = Vec::new();
    let mut names = vec!["extraspecial-1-3", "extraspecial-1-5", "extraspecial-1-7"];
    if slow {
        names.push("extraspecial-2-3");
    }
    for name in names {
        rows.extend(verify_rows(&entry(name)?, cfg)?);
    }

    let w = entry("w-group-2")?;
    rows.extend(verify_rows(&w, cfg)?);
    let els = joint_stabilizer(&w.class, cfg)?.elements.unwrap_or_default();
    let proj: BTreeSet<&FpMatrix> = els.iter().map(|(s, _)| s).collect();
    rows.push(Row::new(
        &w.name,
        w.class_text(),
        "projection to GL_2 bijective",
        true,
        proj.len() == els.len() && BigUint::from(proj.len()) == gl_order(2, Prime::TWO),
    ));

    let u4 = entry("u4")?;
    rows.extend(verify_rows(&u4, cfg)?);
    let chi = catalog::u4_twisting();
    for pr in &u4.pairs {
        rows.push(Row::new(&u4.name, u4.class_text(), &format!("pair {} fixes", pr.name), true, fixes(&u4, &pr.name)?));
        let sigma = cfg.convention.quotient_automorphism(&pr.s)?;
        let tau = block_with_identity(&cfg.convention.kernel_automorphism(&pr.t)?, 1);
        rows.push(Row::new(
            &u4.name,
            u4.class_text(),
            &format!("pair {} extended lies in C_χ", pr.name),
            true,
            c_chi_membership(&chi, &sigma, &tau)?,
        ));
    }

    let e2 = entry("class-three-e2-5")?;
    rows.extend(verify_rows(&e2, cfg)?);
    let els = joint_stabilizer(&e2.class, cfg)?.elements.unwrap_or_default();
    let mut det_rule = !els.is_empty();
    for (s, t) in &els {
        let sigma = cfg.convention.quotient_automorphism(s)?;
        let tau = cfg.convention.kernel_automorphism(t)?;
        det_rule &= tau.get(0, 0) == sigma.det()?;
    }
    rows.push(Row::new(&e2.name, e2.class_text(), "stabilizer is t = det s", true, det_rule));

    let chi = catalog::class_three_twisting(5)?;
    let r = c_chi(&chi, cfg)?;
    let class_text = "twisting class-three-5".to_string();
    rows.push(Row::new("class-three-cchi-5", class_text.clone(), "|C_χ|", 1600, &r.order));
    let p = chi.prime();
    let shape = r.elements.as_ref().is_some_and(|els| {
        els.iter()
            .all(|(s, t)| t.get(0, 1) == 0 && s.get(0, 1) == 0 && p.mul(s.get(0, 0), t.get(0, 0)) == t.get(1, 1))
    });
    rows.push(Row::new("class-three-cchi-5", class_text, "t = 0 and k = v/s", true, shape));
    Ok(rows)
}
