use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use superhopf::budget::{guarded, install_quiet_hook, Budget};
use superhopf::determinants::{qdet, Block, QMatrixView};
use superhopf::hopf::{AxiomResult, Hopf, Tensor};
use superhopf::localization::Localization;
use superhopf::presentation::Presentation;
use superhopf::qspaces::{build_qspace, check_comodule, describe_relations, Coaction, LegKind, Mixed};
use superhopf::{Error, Result};
use superhopf_cli::expr::{element_json, loc_json, parse_element, parse_loc, JsonTerm};
use superhopf_cli::suite::{
    run_suite, CheckReport, Mode, QValue, Status, SuiteKind, SuiteReport, VerificationConfig,
    DEFAULT_MAX_STEPS, DEFAULT_MAX_TERMS,
};

/// Exact verification of the Hopf superalgebras k[GL(m|n)] and k_q[GL(m|n)].
#[derive(Parser)]
#[command(name = "superhopf", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Size of the even block.
    #[arg(long, global = true, default_value_t = 1, env = "SUPERHOPF_M")]
    m: usize,
    /// Size of the odd block.
    #[arg(long, global = true, default_value_t = 1, env = "SUPERHOPF_N")]
    n: usize,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Quantum, env = "SUPERHOPF_MODE")]
    mode: Mode,
    /// `symbolic` or a nonzero rational such as `2` or `-1/3`.
    #[arg(long, global = true, default_value = "symbolic", env = "SUPERHOPF_Q")]
    q: String,
    /// Emit JSON; `--json=PATH` writes it to a file instead of stdout.
    #[arg(long, global = true, num_args = 0..=1, require_equals = true, env = "SUPERHOPF_JSON")]
    json: Option<Option<PathBuf>>,
    #[arg(long, global = true, default_value_t = 0, env = "SUPERHOPF_SEED")]
    seed: u64,
    /// Largest number of terms any intermediate product may have.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_TERMS, env = "SUPERHOPF_MAX_TERMS")]
    max_terms: usize,
    /// Largest number of multiplications a run may perform.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STEPS, env = "SUPERHOPF_MAX_STEPS")]
    max_steps: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites; exit 0 iff every check passes, 3 if only
    /// budgets ran out.
    Verify {
        /// Suites to run; all by default.
        #[arg(long = "suite", value_enum)]
        suites: Vec<SuiteKind>,
        /// Allow symbolic Hopf checks at total size 4 and above.
        #[arg(long)]
        allow_large: bool,
        /// Random words per property.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        grassmann: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Normal form of an expression.
    Nf { expr: String },
    /// Comultiplication of an expression.
    Delta { expr: String },
    /// Antipode of an expression.
    Antipode { expr: String },
    /// Quantum determinant of a block or of a minor of it.
    Qdet {
        #[arg(long, value_parser = ["11", "22"])]
        block: String,
        /// Comma-separated absolute row indices.
        #[arg(long, value_delimiter = ',', requires = "cols")]
        rows: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',', requires = "rows")]
        cols: Option<Vec<usize>>,
    },
    /// The Berezinian as a localized element.
    Berezinian,
    /// Invertibility checks for the determinants and the Berezinian.
    Invcheck,
    /// Coaction on the primal or dual quantum superspace.
    Coaction {
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        dual: u8,
    },
    /// Random checks of the group law on points over a Grassmann algebra.
    Points {
        #[arg(long, default_value_t = 4)]
        grassmann: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

impl Global {
    fn config(&self) -> Result<VerificationConfig> {
        let q: QValue = self.q.parse()?;
        let mut cfg = VerificationConfig::new(self.m, self.n, self.mode, q);
        cfg.seed = self.seed;
        cfg.max_terms = self.max_terms;
        cfg.max_steps = self.max_steps;
        Ok(cfg)
    }

    fn presentation(&self) -> Result<Arc<Presentation>> {
        let cfg = self.config()?;
        Ok(Arc::new(Presentation::new(self.m, self.n, cfg.qmode()?)?))
    }

    fn localization(&self) -> Result<Arc<Localization>> {
        let budget = Arc::new(Budget::new(Some(self.max_terms), Some(self.max_steps)));
        Ok(Arc::new(Localization::with_budget(self.presentation()?, budget)?))
    }

    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<()> {
        match &self.json {
            None => println!("{}", text()),
            Some(None) => println!("{}", serde_json::to_string_pretty(value).expect("serializable")),
            Some(Some(path)) => {
                let body = serde_json::to_string_pretty(value).expect("serializable");
                std::fs::write(path, body + "\n")
                    .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct ElementOut {
    input: String,
    text: String,
    terms: Vec<JsonTerm>,
}

#[derive(Serialize)]
struct TensorTerm {
    legs: Vec<JsonTerm>,
    coeff: String,
}

#[derive(Serialize)]
struct TensorOut {
    input: String,
    text: String,
    terms: Vec<TensorTerm>,
}

fn tensor_json(loc: &Localization, t: &Tensor) -> Vec<TensorTerm> {
    t.terms()
        .map(|(keys, c)| TensorTerm {
            legs: keys
                .iter()
                .flat_map(|k| {
                    loc_json(loc, &superhopf::localization::LocElement::term(k.clone(), superhopf::scalars::Laurent::one()))
                })
                .collect(),
            coeff: c.to_string(),
        })
        .collect()
}

/// Report lines in the common `{axiom, size, mode, q, pass, witness?}` shape.
fn axiom_report(g: &Global, suite: SuiteKind, list: Vec<AxiomResult>) -> Result<SuiteReport> {
    let cfg = g.config()?;
    let results: Vec<CheckReport> = list
        .into_iter()
        .map(|a| CheckReport {
            suite: match suite {
                SuiteKind::Qspaces => "qspaces",
                _ => "localization",
            },
            axiom: a.axiom,
            size: format!("{}|{}", g.m, g.n),
            mode: g.mode,
            q: cfg.q_label(),
            pass: a.pass,
            status: if a.pass { Status::Pass } else { Status::Fail },
            witness: a.witness,
            rate: None,
            time_ms: 0.0,
            peak_terms: 0,
        })
        .collect();
    let status = if results.iter().all(|c| c.pass) {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(SuiteReport {
        m: g.m,
        n: g.n,
        mode: g.mode,
        q: cfg.q_label(),
        seed: g.seed,
        status,
        results,
    })
}

fn print_report(g: &Global, report: &SuiteReport) -> Result<i32> {
    g.emit(report, || report.to_text().trim_end().to_string())?;
    Ok(report.exit_code())
}

fn run(cli: Cli) -> Result<i32> {
    let g = &cli.global;
    match cli.command {
        Command::Verify {
            suites,
            allow_large,
            samples,
            grassmann,
            trials,
        } => {
            let mut cfg = g.config()?;
            if !suites.is_empty() {
                cfg.suites = suites;
            }
            cfg.allow_large = allow_large;
            cfg.samples = samples;
            cfg.grassmann = grassmann;
            cfg.trials = trials;
            print_report(g, &run_suite(&cfg)?)
        }
        Command::Points { grassmann, trials } => {
            let mut cfg = g.config()?;
            cfg.suites = vec![SuiteKind::Points];
            cfg.grassmann = grassmann;
            cfg.trials = trials;
            print_report(g, &run_suite(&cfg)?)
        }
        Command::Nf { expr } => {
            let p = g.presentation()?;
            let out = match parse_element(&p, &expr) {
                Ok(e) => ElementOut {
                    input: expr.clone(),
                    text: p.format_element(&e),
                    terms: element_json(&p, &e),
                },
                Err(Error::Parse { msg, .. }) if msg.contains("localized") => {
                    let loc = g.localization()?;
                    let x = loc.normalize(&parse_loc(&loc, &expr)?);
                    ElementOut {
                        input: expr.clone(),
                        text: loc.format(&x),
                        terms: loc_json(&loc, &x),
                    }
                }
                Err(e) => return Err(e),
            };
            g.emit(&out, || out.text.clone())?;
            Ok(0)
        }
        Command::Delta { expr } => {
            let loc = g.localization()?;
            let h = Hopf::new(loc.clone());
            let t = h.delta(&parse_loc(&loc, &expr)?);
            let out = TensorOut {
                input: expr,
                text: h.format_tensor(&t),
                terms: tensor_json(&loc, &t),
            };
            g.emit(&out, || out.text.clone())?;
            Ok(0)
        }
        Command::Antipode { expr } => {
            let loc = g.localization()?;
            let h = Hopf::new(loc.clone());
            let x = loc.normalize(&h.antipode(&parse_loc(&loc, &expr)?)?);
            let out = ElementOut {
                input: expr,
                text: loc.format(&x),
                terms: loc_json(&loc, &x),
            };
            g.emit(&out, || out.text.clone())?;
            Ok(0)
        }
        Command::Qdet { block, rows, cols } => {
            let p = g.presentation()?;
            let b = if block == "11" { Block::B11 } else { Block::B22 };
            let view = match (rows, cols) {
                (Some(r), Some(c)) => QMatrixView::new(&p, r, c, b)?,
                _ => QMatrixView::full(&p, b),
            };
            let d = qdet(&p, &view);
            let out = ElementOut {
                input: format!("qdet {block}"),
                text: p.format_element(&d),
                terms: element_json(&p, &d),
            };
            g.emit(&out, || out.text.clone())?;
            Ok(0)
        }
        Command::Berezinian => {
            let loc = g.localization()?;
            let x = loc.berezinian()?;
            let out = ElementOut {
                input: "Ber".into(),
                text: loc.format(&x),
                terms: loc_json(&loc, &x),
            };
            g.emit(&out, || out.text.clone())?;
            Ok(0)
        }
        Command::Invcheck => {
            let mut cfg = g.config()?;
            cfg.suites = vec![SuiteKind::Localization];
            print_report(g, &run_suite(&cfg)?)
        }
        Command::Coaction { dual } => {
            let p = g.presentation()?;
            let space = build_qspace(g.m, g.n, dual == 1, p.qmode().clone())?;
            let list = check_comodule(&p, &space)?;
            let report = axiom_report(g, SuiteKind::Qspaces, list)?;
            if g.json.is_none() {
                for r in describe_relations(&space) {
                    println!("relation: {r}");
                }
                let co = Coaction::new(&p, &space)?;
                let kinds = [LegKind::Algebra, LegKind::Space];
                for i in 0..space.dim() as u8 {
                    let img: Mixed = co.coaction_image(i);
                    println!("{} ↦ {}", space.name(i), co.format_mixed(&kinds, &img));
                }
            }
            print_report(g, &report)
        }
    }
}

fn main() -> ExitCode {
    install_quiet_hook();
    let cli = Cli::parse();
    match guarded(|| run(cli)).and_then(|r| r) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e @ Error::Budget(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
