//! Command-line verbs. Each returns printable text and an exit code.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use qpcat_core::constructions::{self, compare_qps, keller_qp, AlgebraPresentation};
use qpcat_core::coxeter::{birs_word, is_reduced, qw, qw_tilde, Gcm, Word};
use qpcat_core::jacobian::{is_rigid_up_to_degree, truncated_quotient, DEFAULT_RIGIDITY_SLACK};
use qpcat_core::mutation_class::mutation_class_bfs;
use qpcat_core::qp_mutation::{mutate_along, nondegeneracy_explore, Exploration, ExploreOptions};
use qpcat_core::substitution::DEFAULT_TRUNCATION;
use qpcat_core::{ArrowId, Qp, Scalar, VertexId};

use crate::builders::{self, BuilderParams};
use crate::verify::{verify_paper, VerifyConfig};

#[derive(Parser, Debug)]
#[command(name = "qpcat", version, about = "Quivers with potentials: mutation, Jacobian algebras, Coxeter words")]
pub struct Cli {
    /// Path-length truncation for reductions and Jacobian quotients.
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: usize,
    /// Tubular parameter: a rational or the symbol L.
    #[arg(long, global = true)]
    pub lambda: Option<Scalar>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a named quiver with potential: five-vertex, squid, q2222, ct, keller.
    Build {
        kind: String,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u32>>,
        /// Parameters of the points beyond the third (squid).
        #[arg(long, value_delimiter = ',')]
        lambdas: Vec<Scalar>,
    },
    /// Quiver mutation along a sequence, or mutation class enumeration.
    Mutate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        seq: Vec<VertexId>,
        /// Enumerate the mutation class instead; `--seq` becomes a hint.
        #[arg(long)]
        class: bool,
        #[arg(long, default_value_t = 10_000)]
        max_nodes: usize,
        #[arg(long, default_value_t = 12)]
        max_depth: usize,
    },
    /// QP-mutation along a sequence.
    Qpmutate {
        #[arg(long)]
        input: PathBuf,
        /// Potential as text, overriding the one in the input.
        #[arg(long)]
        potential: Option<String>,
        #[arg(long, value_delimiter = ',')]
        seq: Vec<VertexId>,
    },
    /// Graded dimensions of the truncated Jacobian algebra.
    Jacobian {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        potential: Option<String>,
    },
    /// Search for a mutation sequence leaving the 2-acyclic quivers.
    Nondegen {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        potential: Option<String>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Check that cycles up to a degree lie in the Jacobian ideal modulo commutators.
    Rigid {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        potential: Option<String>,
        #[arg(long)]
        degree: usize,
    },
    /// Coxeter group operations.
    Coxeter {
        #[command(subcommand)]
        command: CoxeterCommand,
    },
    /// The quiver Q(w) of a reduced word, from weights or from a quiver and word.
    Qw {
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u32>>,
        #[arg(long)]
        quiver: Option<PathBuf>,
        #[arg(long)]
        word: Option<String>,
        /// Keep the last occurrence of every letter.
        #[arg(long)]
        tilde: bool,
    },
    /// Keller's QP of a presentation, or of the tubular algebra at --lambda.
    Keller {
        #[arg(long)]
        presentation: Option<PathBuf>,
    },
    /// Run the acceptance checks.
    VerifyPaper {
        /// Only run checks whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Serve the session API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "QPCAT_STATE_DIR", default_value = "qpcat-sessions")]
        state_dir: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum CoxeterCommand {
    /// Reducedness of a word by the root criterion.
    Check {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        word: String,
    },
}

pub struct Output {
    pub text: String,
    pub code: i32,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("invalid JSON input: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Msg(String),
}

fn msg<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Msg(e.to_string())
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(path.clone(), e))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))
}

/// A QP file, or a bare quiver file read with the zero potential.
fn load_qp(path: &PathBuf, potential: Option<&str>) -> Result<Qp, CliError> {
    let v: Value = serde_json::from_str(&read_input(path)?)?;
    // Accepts a QP, a bare quiver, or any verb output carrying a `quiver` field.
    let qp: Qp = match (v.get("quiver"), v.get("potential")) {
        (Some(_), Some(p)) if !p.is_null() => serde_json::from_value(v)?,
        (Some(q), _) => Qp::zero(serde_json::from_value(q.clone())?),
        (None, _) => Qp::zero(serde_json::from_value(v)?),
    };
    match potential {
        Some(text) => Qp::parse(qp.quiver().clone(), text).map_err(msg),
        None => Ok(qp),
    }
}

fn render<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> String {
    if json {
        serde_json::to_string_pretty(value).unwrap()
    } else {
        text()
    }
}

fn qp_text(qp: &Qp) -> String {
    format!("{}\npotential: {}", qp.quiver(), qp.potential())
}

fn lambda(cli: &Cli) -> Result<Scalar, CliError> {
    cli.lambda.clone().ok_or_else(|| CliError::Msg("this command needs --lambda".into()))
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    let ok = |text: String| Ok(Output { text, code: 0 });
    let t = cli.truncation;
    match &cli.command {
        Command::Build { kind, weights, lambdas } => {
            let params = BuilderParams { weights: weights.clone(), lambda: cli.lambda.clone(), lambdas: lambdas.clone() };
            let qp = builders::build(kind, &params).map_err(msg)?;
            ok(render(cli.json, &qp, || qp_text(&qp)))
        }
        Command::Mutate { input, seq, class, max_nodes, max_depth } => {
            let q = load_qp(input, None)?.quiver().clone();
            if *class {
                let hint = (!seq.is_empty()).then_some(seq.as_slice());
                let r = mutation_class_bfs(&q, *max_nodes, *max_depth, hint).map_err(msg)?;
                let summary = json!({
                    "size": r.size(),
                    "incomplete": r.incomplete,
                    "depth_reached": r.depth_reached,
                    "acyclic_witness": r.acyclic_witness,
                    "members": r.members,
                });
                return ok(render(cli.json, &summary, || {
                    let w = r.acyclic_witness.as_ref().map(|w| fmt_seq(w)).unwrap_or_else(|| "none found".into());
                    format!("classes: {}{}\nacyclic witness: {}", r.size(), if r.incomplete { " (incomplete)" } else { "" }, w)
                }));
            }
            let out = q.mutate_sequence(seq).map_err(msg)?;
            let v = json!({ "quiver": out, "acyclic": out.is_acyclic(), "two_acyclic": out.is_two_acyclic() });
            ok(render(cli.json, &v, || format!("{}\nacyclic: {}", out, out.is_acyclic())))
        }
        Command::Qpmutate { input, potential, seq } => {
            let qp = load_qp(input, potential.as_deref())?;
            let trace = mutate_along(&qp, seq, t).map_err(msg)?;
            let last = trace.steps.last().map(|(_, q)| q.clone()).unwrap_or(qp);
            let v = json!({ "qp": last, "two_acyclic": trace.two_acyclic, "sequence": trace.sequence, "truncation": t });
            ok(render(cli.json, &v, || format!("{}\n2-acyclic along the way: {}", qp_text(&last), trace.two_acyclic)))
        }
        Command::Jacobian { input, potential } => {
            let qp = load_qp(input, potential.as_deref())?;
            let r = truncated_quotient(&qp, t).map_err(msg)?.report();
            ok(render(cli.json, &r, || match r.total {
                Some(d) => format!("dims {:?}, stabilizes at degree {}, dimension {}", r.dims, r.stabilized_at.unwrap(), d),
                None => format!("dims {:?} up to degree {}, undetermined", r.dims, t),
            }))
        }
        Command::Nondegen { input, potential, depth, budget } => {
            let qp = load_qp(input, potential.as_deref())?;
            let e = nondegeneracy_explore(&qp, &ExploreOptions { depth: *depth, truncation: t, budget: *budget, prune_back: true }).map_err(msg)?;
            let code = if e.passed() { 0 } else { 1 };
            let text = render(cli.json, &e, || match &e {
                Exploration::Pass { depth, mutations } => format!("pass: all sequences up to length {} stay 2-acyclic ({} mutations)", depth, mutations),
                Exploration::Fail { trace, .. } => format!("fail: sequence {} leaves the 2-acyclic quivers", fmt_seq(&trace.sequence)),
                Exploration::Partial { depth_completed, .. } => format!("partial: budget exhausted after length {}", depth_completed),
            });
            Ok(Output { text, code })
        }
        Command::Rigid { input, potential, degree } => {
            let qp = load_qp(input, potential.as_deref())?;
            let r = is_rigid_up_to_degree(&qp, *degree, DEFAULT_RIGIDITY_SLACK).map_err(msg)?;
            let code = if r.holds { 0 } else { 1 };
            let text = render(cli.json, &r, || match &r.failing_cycle {
                None => format!("rigid up to degree {}", degree),
                Some(c) => format!("cycle {} is not in the ideal modulo commutators", c.join("*")),
            });
            Ok(Output { text, code })
        }
        Command::Coxeter { command: CoxeterCommand::Check { quiver, word } } => {
            let q = load_qp(quiver, None)?.quiver().clone();
            let gcm = Gcm::from_quiver(&q).map_err(msg)?;
            let r = is_reduced(&gcm, &Word::parse(word)).map_err(msg)?;
            let code = if r.reduced { 0 } else { 1 };
            let text = render(cli.json, &r, || match r.failing_position {
                None => "reduced".into(),
                Some(k) => format!("not reduced: fails at position {}", k),
            });
            Ok(Output { text, code })
        }
        Command::Qw { weights, quiver, word, tilde } => {
            let (q, w) = match (weights, quiver, word) {
                (Some(p), None, None) => {
                    let arr: [u32; 3] = p.clone().try_into().map_err(|_| CliError::Msg("need exactly three weights".into()))?;
                    birs_word(arr).map_err(msg)?
                }
                (None, Some(path), Some(w)) => (load_qp(path, None)?.quiver().clone(), Word::parse(w)),
                _ => return Err(CliError::Msg("give either --weights or both --quiver and --word".into())),
            };
            let out = if *tilde { qw_tilde(&q, &w) } else { qw(&q, &w) }.map_err(msg)?;
            let v = json!({ "star": q, "word": w, "quiver": out });
            ok(render(cli.json, &v, || format!("word: {}\n{}", w.letters.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(","), out)))
        }
        Command::Keller { presentation } => {
            let (pres, compare) = match presentation {
                Some(p) => (serde_json::from_str::<AlgebraPresentation>(&read_input(p)?)?, None),
                None => {
                    let l = lambda(&cli)?;
                    (constructions::tubular_algebra(&l).map_err(msg)?, Some(constructions::q2222_qp(&l).map_err(msg)?))
                }
            };
            let qp = keller_qp(&pres).map_err(msg)?;
            let cmp = compare.map(|target| {
                let rhos: Vec<ArrowId> = pres.relations().iter().map(|r| ArrowId::new(format!("rho_{}", r.name))).collect();
                compare_qps(&qp, &target, &rhos)
            });
            let v = json!({ "qp": qp, "comparison_with_q2222": cmp });
            ok(render(cli.json, &v, || {
                let mut s = qp_text(&qp);
                if let Some(c) = &cmp {
                    s.push_str(&format!("\nequal to W_lambda on Q^(2,2,2,2) after renaming: {}", c.isomorphic && c.equal));
                }
                s
            }))
        }
        Command::VerifyPaper { filter } => {
            let report = verify_paper(&VerifyConfig { filter: filter.clone(), truncation: t });
            let code = if report.all_passed() { 0 } else { 1 };
            Ok(Output { text: render(cli.json, &report, || report.to_string()), code })
        }
        Command::Serve { port, state_dir } => {
            let rt = tokio::runtime::Runtime::new().map_err(msg)?;
            eprintln!("listening on 127.0.0.1:{}, sessions in {}", port, state_dir.display());
            rt.block_on(crate::server::serve(*port, state_dir.clone())).map_err(msg)?;
            ok(String::new())
        }
    }
}

fn fmt_seq(s: &[VertexId]) -> String {
    if s.is_empty() {
        return "(empty)".into();
    }
    s.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(",")
}
