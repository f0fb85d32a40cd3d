//! `effint`: expansions, enumerations and self-checks from the command line.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use effint_core::assoc::{self, assoc_gauge_action};
use effint_core::combinatorics::graph::enumerate_dsgra_bounded;
use effint_core::combinatorics::paprt::enumerate_paprt;
use effint_core::combinatorics::{automorphism_order, enumerate_laprt, enumerate_leveled, DiGraph, LeveledShape};
use effint_core::lie::{bch_dynkin, to_lyndon};
use effint_core::liegraph::{self, bowtie, graph_exp, graph_log, liegraph_gauge_action, partial_composition};
use effint_core::prelie::{self, grouplike_inverse, magnus, prelie_gauge_action};
use effint_core::slinfty::{self, gauge_flow, leaf, mc_residual, universal, FiniteSl};
use effint_core::verify::{run_all, run_suite, Suite};
use effint_core::{Alphabet, Basis, Error, Gen, Series};

/// Largest input count accepted by `enumerate paprt`.
const MAX_PAPRT_INPUTS: usize = 7;
/// Largest vertex count accepted by `graph-compose` results and `enumerate dsgra`.
const MAX_GRAPH_VERTICES: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "effint", version, about = "Exact BCH, pre-Lie, Lie-graph and sL∞ gauge formulas")]
struct Cli {
    /// Truncation weight N: terms of weight above N are dropped.
    #[arg(
        long,
        short = 'w',
        global = true,
        env = "EFFINT_WEIGHT",
        default_value_t = 4,
        value_parser = clap::value_parser!(u32).range(1..)
    )]
    weight: u32,

    /// Output format.
    #[arg(long, short = 'f', global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BchBasis {
    /// Expanded in words of the free associative algebra.
    Words,
    /// In the Lyndon basis of the free Lie algebra.
    Lyndon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GaugeSetting {
    Assoc,
    Prelie,
    Liegraph,
    Slinfty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Assoc,
    Lie,
    Prelie,
    Liegraph,
    Slinfty,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// BCH(x, y) by Dynkin's formula.
    Bch {
        #[arg(long, value_enum, default_value_t = BchBasis::Words)]
        basis: BchBasis,
    },
    /// The pre-Lie Magnus expansion Ω(1+λ) of a generator λ.
    Magnus,
    /// The inverse of 1+λ under the pre-Lie circle product.
    PrelieInverse,
    /// The graph exponential of a generator x.
    GraphExp,
    /// The graph logarithm of 1+x.
    GraphLog,
    /// Partial composition g1 ∘_i g2 of directed simple graphs, given as
    /// "n; e(a,b), ..." with 1-based vertices and edges (upper, lower).
    GraphCompose {
        g1: String,
        /// 1-based vertex of g1 to insert into.
        index: usize,
        g2: String,
    },
    /// The bowtie element (1+x) ⋈ α ⋈ (1+y).
    Bowtie,
    /// Action of the group-like element 1+λ on the Maurer-Cartan element α
    /// with dλ = μ (for slinfty: the gauge flow of λ on the universal
    /// Maurer-Cartan element).
    GaugeAct {
        #[arg(value_enum)]
        setting: GaugeSetting,
    },
    /// Enumerate combinatorial objects up to the weight.
    Enumerate {
        #[command(subcommand)]
        kind: EnumerateKind,
    },
    /// Gauge flow of an sL∞ algebra.
    GaugeFlow {
        /// JSON structure constants, with "lambda" and "alpha".
        #[arg(long, conflicts_with = "free", required_unless_present = "free")]
        structure: Option<PathBuf>,
        /// The universal free setup.
        #[arg(long)]
        free: bool,
    },
    /// Terms of the labelled planar rooted tree gauge-equivalence sum.
    ElinftyTerms,
    /// Run the self-check suites; exit status 1 on any failure.
    Verify {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(Subcommand, Debug)]
enum EnumerateKind {
    /// Directed simple graphs with exactly N vertices.
    Dsgra,
    /// Leveled graphs of a given shape.
    Leveled {
        #[arg(long, default_value_t = 1)]
        bottom: usize,
        #[arg(long, default_value_t = 0)]
        top: usize,
        /// Add a middle level with one vertex.
        #[arg(long)]
        middle: bool,
        /// Mark one bottom vertex.
        #[arg(long)]
        marked: bool,
    },
    /// Planarly partitioned rooted trees with at most N inputs.
    Paprt,
    /// Labelled planar rooted trees of weight at most N.
    Laprt,
}

/// A printable result: a series in one of three renderings, or a list.
enum Report {
    Series { text: String, latex: String, json: Value },
    List(Vec<(String, Value)>),
}

impl Report {
    fn series<B: Basis>(s: &Series<B>, alphabet: &Alphabet) -> Self {
        Report::Series {
            text: s.to_text(alphabet),
            latex: s.to_latex(alphabet),
            json: s.to_json(alphabet),
        }
    }

    fn render(self, format: Format) -> String {
        match (self, format) {
            (Report::Series { text, .. }, Format::Text) => text,
            (Report::Series { latex, .. }, Format::Latex) => latex,
            (Report::Series { json, .. }, Format::Json) => pretty(&json),
            (Report::List(items), Format::Json) => pretty(&Value::Array(items.into_iter().map(|i| i.1).collect())),
            (Report::List(items), Format::Text) => items.into_iter().map(|i| i.0).collect::<Vec<_>>().join("\n"),
            (Report::List(items), Format::Latex) => items
                .into_iter()
                .map(|i| format!("\\texttt{{{}}}", i.0))
                .collect::<Vec<_>>()
                .join(" \\\\\n"),
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

struct Gens {
    a: Alphabet,
    x: Gen,
    y: Gen,
    lam: Gen,
    alpha: Gen,
    mu: Gen,
}

fn gens() -> Gens {
    let mut a = Alphabet::new();
    let x = a.add("x", 0);
    let y = a.add("y", 0);
    let lam = a.add("λ", 0);
    let alpha = a.add("α", -1);
    let mu = a.add("μ", -1);
    Gens { a, x, y, lam, alpha, mu }
}

/// Largest weight a series command accepts; each stays within about half a
/// minute in a release build. Enumerations and `verify` carry their own
/// bounds.
fn weight_bound(cmd: &Command) -> Option<u32> {
    match cmd {
        Command::Bch { .. } => Some(12),
        Command::Magnus | Command::PrelieInverse => Some(10),
        Command::GraphExp | Command::GraphLog | Command::Bowtie => Some(6),
        Command::GaugeAct { setting } => Some(match setting {
            GaugeSetting::Assoc => 12,
            GaugeSetting::Prelie => 7,
            GaugeSetting::Liegraph => 6,
            GaugeSetting::Slinfty => 10,
        }),
        Command::GaugeFlow { .. } => Some(10),
        _ => None,
    }
}

/// Exit status of a run: 1 means a check failed.
type Run = anyhow::Result<(Report, bool)>;

fn run(cli: &Cli) -> Run {
    let n = cli.weight;
    if let Some(bound) = weight_bound(&cli.command) {
        if n > bound {
            bail!(Error::BoundExceeded {
                what: "weight".into(),
                value: n as usize,
                bound: bound as usize,
            });
        }
    }
    let g = gens();
    let ok = |r: Report| Ok((r, true));
    match &cli.command {
        Command::Bch { basis } => {
            let b = bch_dynkin(g.x, g.y, n);
            match basis {
                BchBasis::Words => ok(Report::series(&b, &g.a)),
                BchBasis::Lyndon => {
                    let l = to_lyndon(&b).ok_or_else(|| anyhow!("BCH is not a Lie element"))?;
                    ok(Report::series(&l, &g.a))
                }
            }
        }
        Command::Magnus => {
            let l = prelie::gen(g.lam, n);
            ok(Report::series(&magnus(&(&prelie::unit(n) + &l))?, &g.a))
        }
        Command::PrelieInverse => ok(Report::series(&grouplike_inverse(&prelie::gen(g.lam, n))?, &g.a)),
        Command::GraphExp => ok(Report::series(&graph_exp(&liegraph::gen(g.x, n))?, &g.a)),
        Command::GraphLog => {
            let one_plus = &liegraph::unit(n) + &liegraph::gen(g.x, n);
            ok(Report::series(&graph_log(&one_plus)?, &g.a))
        }
        Command::GraphCompose { g1, index, g2 } => {
            let (a, _) = DiGraph::decode(g1).context("first graph")?;
            let (b, _) = DiGraph::decode(g2).context("second graph")?;
            let size = a.n + b.n - 1;
            if size > MAX_GRAPH_VERTICES {
                bail!(Error::BoundExceeded {
                    what: "composite vertex count".into(),
                    value: size,
                    bound: MAX_GRAPH_VERTICES,
                });
            }
            let terms = partial_composition(&a, *index, &b)?;
            ok(Report::List(
                terms.iter().map(|t| (t.encode(), json!({"graph": t.encode(), "coeff": "1"}))).collect(),
            ))
        }
        Command::Bowtie => {
            let one = liegraph::unit(n);
            let b = bowtie(
                &(&one + &liegraph::gen(g.x, n)),
                &liegraph::gen(g.alpha, n),
                &(&one + &liegraph::gen(g.y, n)),
            )?;
            ok(Report::series(&b, &g.a))
        }
        Command::GaugeAct { setting } => gauge_act(*setting, n, &g),
        Command::Enumerate { kind } => enumerate(kind, n),
        Command::GaugeFlow { structure, free } => {
            if *free {
                let u = universal(n);
                let out = gauge_flow(&u.structure, &leaf(u.lambda, n), &leaf(u.a, n))?;
                return ok(Report::series(&out, &u.alphabet));
            }
            let path = structure.as_ref().expect("clap requires --structure or --free");
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let s = FiniteSl::from_json(&text, n)?;
            let violations = s.check_relations();
            if !violations.is_empty() {
                let items = violations.into_iter().map(|v| (v.clone(), json!({"violation": v}))).collect();
                return Ok((Report::List(items), false));
            }
            let out = gauge_flow(&s, &s.lambda, &s.alpha)?;
            let residual = mc_residual(&s, &s.alpha);
            if !residual.is_zero() {
                eprintln!("warning: alpha is not Maurer-Cartan: residual {}", residual.to_text(&s.alphabet));
            }
            ok(Report::series(&out, &s.alphabet))
        }
        Command::ElinftyTerms => {
            let terms = enumerate_laprt(n as usize)?;
            ok(Report::List(
                terms
                    .iter()
                    .map(|t| {
                        let term = t.term();
                        (term.clone(), json!({"tree": t.encode(), "term": term, "coeff": "1"}))
                    })
                    .collect(),
            ))
        }
        Command::Verify { suite } => {
            let checks = match suite {
                SuiteArg::All => run_all(n)?,
                s => run_suite(to_suite(*s), n)?,
            };
            let passed = checks.iter().all(|c| c.passed);
            let items = checks
                .iter()
                .map(|c| (c.to_string(), serde_json::to_value(c).expect("checks serialize")))
                .collect();
            Ok((Report::List(items), passed))
        }
    }
}

fn to_suite(s: SuiteArg) -> Suite {
    match s {
        SuiteArg::Assoc => Suite::Assoc,
        SuiteArg::Lie => Suite::Lie,
        SuiteArg::Prelie => Suite::Prelie,
        SuiteArg::Liegraph => Suite::Liegraph,
        SuiteArg::Slinfty => Suite::Slinfty,
        SuiteArg::All => unreachable!("handled by the caller"),
    }
}

fn gauge_act(setting: GaugeSetting, n: u32, g: &Gens) -> Run {
    let r = match setting {
        GaugeSetting::Assoc => Report::series(
            &assoc_gauge_action(&assoc::gen(g.lam, n), &assoc::gen(g.alpha, n), &assoc::gen(g.mu, n))?,
            &g.a,
        ),
        GaugeSetting::Prelie => Report::series(
            &prelie_gauge_action(&prelie::gen(g.lam, n), &prelie::gen(g.alpha, n), &prelie::gen(g.mu, n))?,
            &g.a,
        ),
        GaugeSetting::Liegraph => Report::series(
            &liegraph_gauge_action(&liegraph::gen(g.lam, n), &liegraph::gen(g.alpha, n), &liegraph::gen(g.mu, n))?,
            &g.a,
        ),
        GaugeSetting::Slinfty => {
            let u = universal(n);
            let out = slinfty::gauge_flow(&u.structure, &leaf(u.lambda, n), &leaf(u.a, n))?;
            Report::series(&out, &u.alphabet)
        }
    };
    Ok((r, true))
}

fn enumerate(kind: &EnumerateKind, n: u32) -> Run {
    let n = n as usize;
    let items = match kind {
        EnumerateKind::Dsgra => enumerate_dsgra_bounded(n, MAX_GRAPH_VERTICES)?
            .iter()
            .map(|g| {
                let aut = automorphism_order(g)?;
                Ok((
                    format!("{} | aut {aut}", g.encode()),
                    json!({"graph": g.encode(), "automorphisms": aut}),
                ))
            })
            .collect::<anyhow::Result<Vec<_>>>()?,
        EnumerateKind::Leveled {
            bottom,
            top,
            middle,
            marked,
        } => {
            let shape = LeveledShape {
                bottom: *bottom,
                top: *top,
                middle: *middle,
                marked_bottom: *marked,
            };
            enumerate_leveled(shape)?
                .iter()
                .map(|l| {
                    (
                        format!("{} | aut {}", l.encode(), l.automorphisms),
                        json!({"graph": l.graph.encode(), "levels": l.levels, "marked": l.marked.map(|m| m + 1), "automorphisms": l.automorphisms}),
                    )
                })
                .collect()
        }
        EnumerateKind::Paprt => {
            if n > MAX_PAPRT_INPUTS {
                bail!(Error::BoundExceeded {
                    what: "PaPRT inputs".into(),
                    value: n,
                    bound: MAX_PAPRT_INPUTS,
                });
            }
            enumerate_paprt(n)
                .into_iter()
                .map(|(_, code)| (code.clone(), json!({"paprt": code})))
                .collect()
        }
        EnumerateKind::Laprt => enumerate_laprt(n)?
            .iter()
            .map(|t| (t.encode(), json!({"laprt": t.encode(), "weight": t.weight()})))
            .collect(),
    };
    Ok((Report::List(items), true))
}

/// 3 for a resource bound, 4 for malformed input or any other error.
fn error_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::BoundExceeded { .. }) => 3,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, passed)) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout(), "{}", report.render(cli.format));
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}
