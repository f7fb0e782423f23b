use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;

use extorb_core::catalog;
use extorb_core::class::{parse_class, print_class, ExtensionClass};
use extorb_core::fp::Prime;
use extorb_core::forms::{
    classify as classify_form, equivalent, parse_component, print_component, reduce_to_standard,
    standard_for_triple, ClassComponent, QuadraticFormF2, StandardKind,
};
use extorb_core::orbit::{
    im_rho_order, joint_stabilizer, omega as omega_group, stabilizer_n, stabilizer_v, EngineConfig, Report,
};
use extorb_core::twisting::{c_chi, TwistingMap};
use extorb_core::wells::{aut_order, semisimple_report};

use crate::error::{CliError, CliResult};
use crate::{ClassArgs, SideArg};

pub struct Output {
    pub json: bool,
    pub timing: bool,
}

impl Output {
    pub fn emit<T: Serialize>(&self, value: &T, human: impl FnOnce() -> String) -> CliResult {
        if self.json {
            println!("{}", serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?);
        } else {
            print!("{}", human());
        }
        Ok(())
    }

    fn elapsed(&self, start: Instant) -> Option<u64> {
        self.timing.then(|| start.elapsed().as_millis() as u64)
    }
}

fn prime(p: u32) -> CliResult<Prime> {
    Ok(Prime::new(p)?)
}

fn parse_form(p: u32, m: usize, text: &str) -> CliResult<QuadraticFormF2> {
    if p != 2 {
        return Err(CliError::Input("quadratic forms are defined over F_2; use --p 2".into()));
    }
    match parse_component(text, Prime::TWO, m)? {
        ClassComponent::Quadratic(q) => Ok(q),
        ClassComponent::AltBock(_) => Err(CliError::Internal("odd-prime component over F_2".into())),
    }
}

pub fn parse_class_args(a: &ClassArgs) -> CliResult<ExtensionClass> {
    Ok(parse_class(&a.class, prime(a.p)?, a.m, a.n)?)
}

fn form_text(q: &QuadraticFormF2) -> String {
    print_component(&ClassComponent::Quadratic(q.clone()))
}

fn kind_label(kind: StandardKind, core: usize) -> String {
    match kind {
        StandardKind::Plus => format!("Φ{core}+ (plus standard)"),
        StandardKind::Minus => format!("Φ{core}- (minus standard)"),
        StandardKind::Odd => format!("Φ{core} (odd standard)"),
    }
}

pub fn classify(p: &u32, m: usize, text: &str, out: &Output) -> CliResult {
    let q = parse_form(*p, m, text)?;
    let t = classify_form(&q)?;
    let std = standard_for_triple(t).ok();
    let value = json!({
        "form": form_text(&q),
        "triple": t,
        "kind": std.as_ref().map(|s| s.0),
        "core_dim": std.as_ref().map(|s| s.1),
        "standard": std.as_ref().map(|s| form_text(&s.2)),
        "label": std.as_ref().map(|s| kind_label(s.0, s.1)),
    });
    out.emit(&value, || {
        let mut s = format!("triple ({},{},{})\n", t.dim, t.bilrad_dim, t.arf);
        match &std {
            Some((kind, core, f)) => {
                s += &format!("label {}\nstandard {}\n", kind_label(*kind, *core), form_text(f));
            }
            None => s += "label zero form\n",
        }
        s
    })
}

pub fn reduce(p: &u32, m: usize, text: &str, out: &Output) -> CliResult {
    let q = parse_form(*p, m, text)?;
    let (s, std) = reduce_to_standard(&q)?;
    let value = json!({ "form": form_text(&q), "s": s, "standard": form_text(&std) });
    out.emit(&value, || format!("s = {s}\ns·q = {}\n", form_text(&std)))
}

pub fn equiv(p: &u32, m: usize, a: &str, b: &str, witness: bool, out: &Output) -> CliResult {
    let q1 = parse_form(*p, m, a)?;
    let q2 = parse_form(*p, m, b)?;
    let (eq, w) = equivalent(&q1, &q2, witness)?;
    let value = json!({ "equivalent": eq, "witness": w });
    out.emit(&value, || {
        let mut s = format!("equivalent: {eq}\n");
        if let Some(w) = &w {
            s += &format!("witness s = {w} (s·first = second)\n");
        }
        s
    })
}

pub fn stab(a: &ClassArgs, side: SideArg, cfg: &EngineConfig, out: &Output) -> CliResult {
    let e = parse_class_args(a)?;
    let start = Instant::now();
    let r = match side {
        SideArg::V => stabilizer_v(&e, cfg)?,
        SideArg::N => stabilizer_n(&e, cfg)?,
        SideArg::Joint => joint_stabilizer(&e, cfg)?,
    };
    let label = r.identify().transpose()?.map(|g| g.display_label());
    let report = Report {
        order: r.order.clone(),
        label: label.clone(),
        breakdown: None,
        method: r.method,
        elapsed_ms: out.elapsed(start),
    };
    out.emit(&report, || {
        let mut s = format!("order {}\n", r.order);
        if let Some(l) = &label {
            s += &format!("group {l}\n");
        }
        if let Some(els) = &r.elements {
            if els.len() <= 64 {
                for (x, y) in els {
                    s += &format!("  s = {x}  t = {y}\n");
                }
            }
        }
        s
    })
}

pub fn omega(a: &ClassArgs, cfg: &EngineConfig, out: &Output) -> CliResult {
    let e = parse_class_args(a)?;
    let start = Instant::now();
    let g = omega_group(&e, cfg)?;
    g.check_axioms()?;
    let id = g.identify()?;
    let elements: Vec<String> = g.elements.iter().map(print_class).collect();
    let value = json!({
        "order": g.order().to_string(),
        "label": id.display_label(),
        "group": id,
        "elements": elements,
        "representatives": g.reps_left,
        "table": g.mult_table,
        "elapsed_ms": out.elapsed(start),
    });
    out.emit(&value, || {
        let mut s = format!("|Ω| = {}  ({})\n", g.order(), id.display_label());
        for (i, (x, r)) in elements.iter().zip(&g.reps_left).enumerate() {
            s += &format!("  [{i}] {x}    via s = {r}\n");
        }
        if let Some(t) = &g.mult_table {
            s += "table:\n";
            for row in t {
                s += &format!("  {}\n", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
            }
        }
        s
    })
}

pub fn imrho(a: &ClassArgs, cfg: &EngineConfig, out: &Output) -> CliResult {
    let e = parse_class_args(a)?;
    let start = Instant::now();
    let r = im_rho_order(&e, cfg)?;
    let omega_label = if r.omega <= BigUint::from(cfg.caps.elements) {
        Some(omega_group(&e, cfg)?.identify()?.display_label())
    } else {
        None
    };
    let report = Report {
        order: r.order.clone(),
        label: omega_label.clone(),
        breakdown: Some(r.clone()),
        method: extorb_core::orbit::Method::Enumeration,
        elapsed_ms: out.elapsed(start),
    };
    out.emit(&report, || {
        let mut s = format!("|Im ρ| = {}·{}·{} = {}\n", r.stab_v, r.stab_n, r.omega, r.order);
        if let Some(l) = &omega_label {
            s += &format!("Ω: order {}, {l}\n", r.omega);
        }
        s
    })
}

pub fn autorder(a: &ClassArgs, n_char: bool, semisimple: bool, cfg: &EngineConfig, out: &Output) -> CliResult {
    let e = parse_class_args(a)?;
    let r = aut_order(&e, n_char, cfg)?;
    let ss = if semisimple { Some(semisimple_report(&e, cfg)?) } else { None };
    let value = json!({ "ledger": r, "semisimple": ss });
    out.emit(&value, || {
        let mut s = format!(
            "|Hom(V,N)| = {}\n|Aut(V)_[E]| = {}\n|Aut(N)_[E]| = {}\n|Ω| = {}\n|Im ρ| = {}\n{} = {} = {}\n",
            r.hom_order,
            r.stab_v_order,
            r.stab_n_order,
            r.omega_order,
            r.im_rho_order,
            r.aut_name(),
            r.aut_order,
            r.aut_order_factored
        );
        if let Some(id) = &r.image_id {
            s += &format!("Im ρ ≅ {}\n", id.display_label());
        }
        if let Some(ss) = &ss {
            if ss.image_is_p_group {
                s += "Im ρ is a p-group: the semisimple quotient is the trivial module\n";
            }
            if let Some(q) = &ss.p_prime_quotient {
                s += &format!("p'-quotient of Im ρ: order {} ({})\n", q.order, q.display_label());
            }
        }
        s
    })
}

pub fn named_twisting(name: &str) -> CliResult<TwistingMap> {
    if name == "u4-e3" {
        return Ok(catalog::u4_twisting());
    }
    if let Some(p) = name.strip_prefix("class-three-") {
        let p: u32 = p.parse().map_err(|_| CliError::Input(format!("unknown twisting {name}")))?;
        return Ok(catalog::class_three_twisting(p)?);
    }
    Err(CliError::Input(format!("unknown twisting {name}")))
}

pub fn cchi(json_text: Option<&str>, name: Option<&str>, cfg: &EngineConfig, out: &Output) -> CliResult {
    let chi: TwistingMap = match (json_text, name) {
        (Some(j), _) => serde_json::from_str(j)?,
        (None, Some(n)) => named_twisting(n)?,
        (None, None) => return Err(CliError::Input("give --twisting JSON or --name".into())),
    };
    let start = Instant::now();
    let r = c_chi(&chi, cfg)?;
    let report = Report {
        order: r.order.clone(),
        label: None,
        breakdown: None,
        method: r.method,
        elapsed_ms: out.elapsed(start),
    };
    out.emit(&report, || format!("|C_χ| = {}\n", r.order))
}

pub fn catalog_list(out: &Output) -> CliResult {
    let entries = catalog::all();
    let rows: Vec<_> = entries
        .iter()
        .map(|e| json!({ "name": e.name, "p": e.class.prime().get(), "m": e.class.m(), "n": e.class.n(), "class": e.class_text(), "slow": e.slow }))
        .collect();
    let twistings = ["class-three-5", "u4-e3"];
    out.emit(&json!({ "classes": rows, "twistings": twistings }), || {
        let mut s = String::new();
        for e in &entries {
            s += &format!(
                "{:<28} p={} m={} n={}  {}{}\n",
                e.name,
                e.class.prime(),
                e.class.m(),
                e.class.n(),
                e.class_text(),
                if e.slow { "  (slow)" } else { "" }
            );
        }
        s += "twisting maps: class-three-<p>, u4-e3\n";
        s
    })
}

pub fn catalog_get(name: &str, out: &Output) -> CliResult {
    let e = catalog::get(name).ok_or_else(|| CliError::Input(format!("no catalog entry named {name}")))?;
    out.emit(&e, || {
        let mut s = format!(
            "{}\n  p={} m={} n={}\n  class: {}\n  source: {}\n",
            e.name,
            e.class.prime(),
            e.class.m(),
            e.class.n(),
            e.class_text(),
            e.source
        );
        for (k, v) in &e.expected {
            s += &format!("  expected {k} = {v}\n");
        }
        for pr in &e.pairs {
            s += &format!("  pair {}: s = {}  t = {}\n", pr.name, pr.s, pr.t);
        }
        for n in &e.notes {
            s += &format!("  note: {n}\n");
        }
        s
    })
}
