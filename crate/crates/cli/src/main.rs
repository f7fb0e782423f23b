mod commands;
mod error;
mod reproduce;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use extorb_core::orbit::{Caps, Convention, EngineConfig};

#[derive(Parser, Debug)]
#[command(name = "extorb", version, about = "Stabilizers, orbits and automorphism orders of central extensions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// largest group enumerated element by element
    #[arg(long, global = true, env = "EXTORB_CAP")]
    cap: Option<u64>,
    /// worker threads (default: available parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// machine-readable output
    #[arg(long, global = true)]
    json: bool,
    /// report wall-clock time (JSON field elapsed_ms)
    #[arg(long, global = true)]
    timing: bool,
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::Inverse)]
    convention: ConventionArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ConventionArg {
    Inverse,
    Transpose,
}

impl Global {
    fn config(&self) -> EngineConfig {
        let mut caps = Caps::default();
        if let Some(c) = self.cap {
            caps.enumeration = c;
        }
        let convention = match self.convention {
            ConventionArg::Inverse => Convention::Inverse,
            ConventionArg::Transpose => Convention::Transpose,
        };
        let mut cfg = EngineConfig::default().with_caps(caps).with_convention(convention);
        if let Some(w) = self.workers {
            cfg = cfg.with_workers(w);
        }
        cfg
    }
}

#[derive(Args, Debug, Clone)]
struct ClassArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// components separated by ';', e.g. "xy; yz"
    #[arg(long)]
    class: String,
}

#[derive(Args, Debug, Clone)]
struct FormArgs {
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long)]
    m: usize,
    /// quadratic form, e.g. "x^2 + yz"
    #[arg(long)]
    form: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SideArg {
    V,
    N,
    Joint,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Invariant triple and standard form of a quadratic form over F_2
    Classify(FormArgs),
    /// A change of basis taking a form to its standard representative
    Reduce(FormArgs),
    /// Whether two forms are equivalent
    Equiv {
        #[command(flatten)]
        form: FormArgs,
        /// the second form
        #[arg(long)]
        other: String,
        /// search for an explicit change of basis
        #[arg(long)]
        witness: bool,
    },
    /// Stabilizer of a class
    Stab {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, value_enum, default_value_t = SideArg::Joint)]
        side: SideArg,
    },
    /// The intersection orbit group
    Omega(ClassArgs),
    /// |Im ρ| with its breakdown
    Imrho(ClassArgs),
    /// Order ledger |Hom(V, N)|·|Im ρ|
    Autorder {
        #[command(flatten)]
        class: ClassArgs,
        /// assert that N is characteristic, so the order is that of Aut(G)
        #[arg(long)]
        n_characteristic: bool,
        /// also describe the semisimple quotient
        #[arg(long)]
        semisimple: bool,
    },
    /// Pairs compatible with a twisting map
    Cchi {
        /// twisting map as JSON
        #[arg(long, conflicts_with = "name")]
        twisting: Option<String>,
        /// a named twisting map (see `catalog list`)
        #[arg(long)]
        name: Option<String>,
    },
    /// Named classes
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Recompute a family of known results and compare
    Reproduce {
        #[arg(value_enum)]
        target: reproduce::Target,
        /// include long enumerations
        #[arg(long)]
        slow: bool,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
    Get { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.global.config();
    let out = commands::Output {
        json: cli.global.json,
        timing: cli.global.timing,
    };
    let res = match cli.verb {
        Verb::Classify(f) => commands::classify(&f.p, f.m, &f.form, &out),
        Verb::Reduce(f) => commands::reduce(&f.p, f.m, &f.form, &out),
        Verb::Equiv { form, other, witness } => commands::equiv(&form.p, form.m, &form.form, &other, witness, &out),
        Verb::Stab { class, side } => commands::stab(&class, side, &cfg, &out),
        Verb::Omega(class) => commands::omega(&class, &cfg, &out),
        Verb::Imrho(class) => commands::imrho(&class, &cfg, &out),
        Verb::Autorder {
            class,
            n_characteristic,
            semisimple,
        } => commands::autorder(&class, n_characteristic, semisimple, &cfg, &out),
        Verb::Cchi { twisting, name } => commands::cchi(twisting.as_deref(), name.as_deref(), &cfg, &out),
        Verb::Catalog { action } => match action {
            CatalogAction::List => commands::catalog_list(&out),
            CatalogAction::Get { name } => commands::catalog_get(&name, &out),
        },
        Verb::Reproduce { target, slow } => reproduce::run(target, slow, &cfg, &out),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
