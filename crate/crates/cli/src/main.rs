//! `selfsim`: load actions and representations from JSON, run the checks,
//! print reports.
//!
//! Exit codes: 0 when every check passes, 1 when a check reports a
//! violation, 2 on bad input (unreadable file, schema error, unsuitable
//! representation).

use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use selfsim::action::{verify_axioms_window, ActionDoc};
use selfsim::atomic::{build_c_lambda, build_cycle_ck, build_inductive_ck, build_left_regular, build_left_regular_window, build_pure_shift_cycle, verify_relations};
use selfsim::dilation::{check_trivial, dilate_pure_case, dilate_unitary_pure, verify_dilation, DilationReport};
use selfsim::io::{self, RepDoc};
use selfsim::matrix::build_fock;
use selfsim::wold::{classify_atomic, classify_matrix, WoldReport};
use selfsim::zappa_szep::{factory_odometer, parse_zs, zs_multiply};
use selfsim::{AtomicRep, Dilation64, Error, MatrixRep64, Phase, SelfSimilarAction};

#[derive(Parser, Debug)]
#[command(name = "selfsim", version, about = "Self-similar graph actions, their Toeplitz representations and dilations")]
struct Cli {
    /// Output format of reports.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Model {
    LeftRegular,
    Fock,
    CLambda,
    PureShiftCycle,
    InductiveCk,
    CycleCk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Pure,
    UnitaryPure,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the self-similarity axioms for all p, q <= depth and paths of length <= depth.
    VerifyAxioms {
        action: PathBuf,
        /// Bound on semigroup elements and path length.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        /// Separate bound on path length (defaults to --depth).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_len: Option<u64>,
    },
    /// Print n·μ.
    Act {
        action: PathBuf,
        #[arg(long)]
        n: u64,
        /// Edge ids separated by `,`, `.` or spaces, or a vertex id.
        #[arg(long)]
        path: String,
    },
    /// Print the restriction n|_μ.
    Restrict {
        action: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        path: String,
    },
    /// Vertex and edge orbits, with M = Σ_{f ∈ Ω_e} 1|_f per edge orbit.
    Orbits { action: PathBuf },
    /// Multiply two Zappa–Szép elements written `<path>,<p>`.
    ZsMul { action: PathBuf, x: String, y: String },
    /// Build a representation and write it as JSON.
    BuildRep {
        action: PathBuf,
        #[arg(long, value_enum)]
        model: Model,
        /// Base vertex (left-regular, fock, c-lambda, pure-shift-cycle).
        #[arg(long)]
        vertex: Option<String>,
        /// Window depth.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        /// Semigroup window for left-regular and fock (left-regular defaults to 0, fock to --depth).
        #[arg(long)]
        sg_depth: Option<u64>,
        /// Cycle phase in turns, `p/q` or a decimal.
        #[arg(long, default_value = "0")]
        lambda: String,
        /// Multiplicity α of the pure-shift cycle model.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        alpha: u64,
        /// Letters 1..n of the infinite word (inductive-ck) or the cycle word (cycle-ck).
        #[arg(long, value_delimiter = ',')]
        word: Vec<usize>,
        /// cycle-ck: put η₀ in the range of V.
        #[arg(long)]
        eta0_in_ran_v: bool,
        /// Write to this file instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Wold decomposition of a representation.
    Wold {
        rep: PathBuf,
        /// Largest allowed commutation deviation of the component projections.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Build a unitary dilation and verify it.
    Dilate {
        rep: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Edge whose orbit fixes the fiber C^M (unitary-pure; defaults to the first edge).
        #[arg(long)]
        orbit_edge: Option<String>,
        /// Window K of the fiber ℓ²(ℤ) truncated to [-K, K] (pure).
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        window: u64,
        /// Longest generator word checked under compression.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        words: u64,
        /// Off-corner block norm above which the dilation counts as nontrivial.
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        /// Also write the dilation itself as JSON.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Verify a dilation written by `dilate --out`.
    CheckDilation {
        dilation: PathBuf,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        words: u64,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },
}

/// Failure of a subcommand, with its exit code.
enum Fail {
    Input(String),
    Violation(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::NotIsometry { .. } => Fail::Violation(e.to_string()),
            _ => Fail::Input(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Violation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &FsPath) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn load_action(path: &FsPath, checked: bool) -> Result<SelfSimilarAction, Fail> {
    let doc: ActionDoc = io::parse(&read(path)?)?;
    Ok(if checked { SelfSimilarAction::from_doc(&doc)? } else { SelfSimilarAction::from_doc_unchecked(&doc)? })
}

enum Loaded {
    Atomic(AtomicRep),
    Matrix(MatrixRep64),
}

fn load_rep(path: &FsPath) -> Result<Loaded, Fail> {
    Ok(match io::parse_rep(&read(path)?)? {
        RepDoc::Atomic(d) => Loaded::Atomic(io::atomic_from_doc(&d)?),
        RepDoc::Matrix(d) => Loaded::Matrix(io::matrix_from_doc(&d)?),
    })
}

fn check_tol(name: &str, t: f64) -> Result<(), Fail> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Fail::Input(format!("--{name} must lie in (0, 1), got {t}")))
    }
}

fn parse_phase(s: &str) -> Result<Phase, Fail> {
    let bad = || Fail::Input(format!("cannot parse phase `{s}`: expected turns as `p/q` or a decimal"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            Ok(Phase::rational(p, q)?)
        }
        None => {
            if let Ok(p) = s.trim().parse::<i64>() {
                return Ok(Phase::rational(p, 1)?);
            }
            let t: f64 = s.trim().parse().map_err(|_| bad())?;
            Ok(Phase::from_turns(t))
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Fail::Input(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let json = cli.format == Format::Json;
    match &cli.cmd {
        Cmd::VerifyAxioms { action, depth, max_len } => {
            let a = load_action(action, false)?;
            let r = verify_axioms_window(&a, *depth, max_len.unwrap_or(*depth) as usize);
            if json {
                println!("{}", io::to_json(&json!({ "passed": r.passed(), "report": r })));
            } else {
                let total: usize = r.checked.values().sum();
                println!("{} instances checked (p, q <= {}, paths <= {})", total, r.max_semigroup, r.max_path_len);
                for v in &r.violations {
                    if v.witness.starts_with(&v.axiom) {
                        println!("violation {}", v.witness);
                    } else {
                        println!("violation {}: {}", v.axiom, v.witness);
                    }
                }
                if r.suppressed > 0 {
                    println!("... {} more violations", r.suppressed);
                }
                println!("{}", if r.passed() { "passed" } else { "FAILED" });
            }
            Ok(r.passed())
        }
        Cmd::Act { action, n, path } | Cmd::Restrict { action, n, path } => {
            let a = load_action(action, true)?;
            let g = a.graph();
            let mu = g.parse_path(path)?;
            let (np, r) = a.act_restrict(*n, &mu);
            let restrict = matches!(cli.cmd, Cmd::Restrict { .. });
            match (restrict, json) {
                (false, false) => println!("{}", g.display_path(&np)),
                (true, false) => println!("{r}"),
                (false, true) => println!("{}", io::to_json(&json!({ "n": n, "path": g.display_path(&mu), "result": g.display_path(&np) }))),
                (true, true) => println!("{}", io::to_json(&json!({ "n": n, "path": g.display_path(&mu), "restriction": r }))),
            }
            Ok(true)
        }
        Cmd::Orbits { action } => {
            let a = load_action(action, true)?;
            let o = a.orbits();
            let ms: Vec<Option<u64>> = a.edge_orbits().iter().map(|c| a.big_m(c[0]).ok()).collect();
            if json {
                let edges: Vec<_> = o.edge_orbits.iter().zip(&ms).map(|(c, m)| json!({ "edges": c, "big_m": m })).collect();
                println!("{}", io::to_json(&json!({ "vertex_orbits": o.vertex_orbits, "edge_orbits": edges })));
            } else {
                for c in &o.vertex_orbits {
                    println!("vertices {}", c.join(" "));
                }
                for (c, m) in o.edge_orbits.iter().zip(&ms) {
                    let m = m.map_or("none (all restrictions zero)".to_string(), |m| m.to_string());
                    println!("edges {}  M = {m}", c.join(" "));
                }
            }
            Ok(true)
        }
        Cmd::ZsMul { action, x, y } => {
            let a = load_action(action, true)?;
            let g = a.graph();
            let (x, y) = (parse_zs(g, x)?, parse_zs(g, y)?);
            let z = zs_multiply(&a, &x, &y)?;
            if json {
                println!("{}", io::to_json(&json!({ "path": g.display_path(&z.path), "p": z.p })));
            } else {
                println!("{}", z.display(g));
            }
            Ok(true)
        }
        Cmd::BuildRep { action, model, vertex, depth, sg_depth, lambda, alpha, word, eta0_in_ran_v, out } => {
            let a = load_action(action, true)?;
            let g = a.graph();
            let depth = *depth as usize;
            let vertex = || -> Result<_, Fail> {
                let name = vertex.as_deref().ok_or_else(|| Fail::Input(format!("--vertex is required for {model:?}")))?;
                Ok(g.vertex(name)?)
            };
            let odometer = || -> Result<usize, Fail> {
                let n = g.num_edges();
                if factory_odometer(n)? != a {
                    return Err(Fail::Input(format!("{model:?} needs the {n}-odometer as its action")));
                }
                if word.is_empty() {
                    return Err(Fail::Input("--word is required".into()));
                }
                Ok(n)
            };
            let doc = match model {
                Model::LeftRegular => {
                    let v = vertex()?;
                    let rep = match sg_depth {
                        Some(s) => build_left_regular_window(&a, v, depth, *s)?,
                        None => build_left_regular(&a, v, depth)?,
                    };
                    io::rep_to_doc_atomic(&rep)
                }
                Model::Fock => io::rep_to_doc_matrix(&build_fock::<f64>(&a, vertex()?, depth, sg_depth.unwrap_or(depth as u64))?),
                Model::CLambda => io::rep_to_doc_atomic(&build_c_lambda(&a, vertex()?, parse_phase(lambda)?, depth)?),
                Model::PureShiftCycle => io::rep_to_doc_atomic(&build_pure_shift_cycle(&a, vertex()?, *alpha as usize, parse_phase(lambda)?, depth)?),
                Model::InductiveCk => {
                    let n = odometer()?;
                    io::rep_to_doc_atomic(&build_inductive_ck(n, word, depth)?)
                }
                Model::CycleCk => {
                    let n = odometer()?;
                    io::rep_to_doc_atomic(&build_cycle_ck(n, word, parse_phase(lambda)?, *eta0_in_ran_v, depth)?)
                }
            };
            emit(out.as_ref(), &io::to_json(&doc))?;
            Ok(true)
        }
        Cmd::Wold { rep, tol } => {
            check_tol("tol", *tol)?;
            let (report, relations_ok): (WoldReport, bool) = match load_rep(rep)? {
                Loaded::Atomic(r) => (classify_atomic(&r), verify_relations(&r, 2).passed()),
                Loaded::Matrix(r) => (classify_matrix(&r), r.verify_identities().passed()),
            };
            let commuting = report.max_commutation_deviation() <= *tol;
            if json {
                println!("{}", io::to_json(&json!({ "relations_hold": relations_ok, "projections_commute": commuting, "report": report })));
            } else {
                print!("{}", report.table());
                if !relations_ok {
                    println!("the representation relations fail on the interior");
                }
            }
            Ok(relations_ok && commuting)
        }
        Cmd::Dilate { rep, mode, orbit_edge, window, words, tol, out } => {
            check_tol("tol", *tol)?;
            let loaded = load_rep(rep)?;
            let d: Dilation64 = match (mode, &loaded) {
                (Mode::Pure, Loaded::Atomic(r)) => dilate_pure_case(&MatrixRep64::from_atomic(r), *window as usize)?,
                (Mode::Pure, Loaded::Matrix(r)) => dilate_pure_case(r, *window as usize)?,
                (Mode::UnitaryPure, Loaded::Atomic(r)) => {
                    let g = r.action().graph();
                    let e0 = match orbit_edge {
                        Some(name) => g.edge(name)?,
                        None => g.edges().next().ok_or_else(|| Fail::Input("graph has no edges".into()))?,
                    };
                    dilate_unitary_pure(r, e0)?
                }
                (Mode::UnitaryPure, Loaded::Matrix(_)) => return Err(Fail::Input("unitary-pure mode needs an atomic representation".into())),
            };
            if let Some(p) = out {
                emit(Some(p), &io::to_json(&io::dilation_to_doc(&d)))?;
            }
            report_dilation(&d, *words as usize, *tol, json)
        }
        Cmd::CheckDilation { dilation, words, tol } => {
            check_tol("tol", *tol)?;
            let doc: io::DilationDoc = io::parse(&read(dilation)?)?;
            let d: Dilation64 = io::dilation_from_doc(&doc)?;
            report_dilation(&d, *words as usize, *tol, json)
        }
    }
}

fn report_dilation(d: &Dilation64, words: usize, tol: f64, json: bool) -> Outcome {
    let mut r: DilationReport = verify_dilation(d, words)?;
    r.nontriviality = check_trivial(d, tol);
    if json {
        println!("{}", io::to_json(&r));
    } else {
        println!("construction {:?}  small {}  big {}  M {}  rotation {}  offset {}", r.construction, r.small_dim, r.big_dim, r.fiber, r.rotation, r.offset);
        println!("isometry deviation {:.3e}  adjoint deviation {:.3e}", r.isometry_deviation, r.adjoint_deviation);
        let failed = r.compressions.iter().filter(|c| !c.passed).count();
        println!("{} compressions, {} failed, max deviation {:.3e}", r.compressions.len(), failed, r.max_compression_deviation);
        for c in r.compressions.iter().chain(&r.intertwining).filter(|c| !c.passed) {
            println!("  {} = {}: deviation {:.3e}", c.lhs, c.rhs, c.deviation);
        }
        println!("big relations {}  big V unitary {}", if r.big_relations.passed() { "hold" } else { "FAIL" }, r.big_v_unitary);
        if let Some(ck) = r.ck_preserved {
            println!("CK preserved {ck}");
        }
        println!("off-corner norm {:.6}  {}", r.nontriviality.max_norm, if r.nontriviality.trivial { "trivial" } else { "nontrivial" });
        println!("{}", if r.passed { "passed" } else { "FAILED" });
    }
    Ok(r.passed)
}
