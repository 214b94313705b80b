//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use multitile_core::lattice::enumerate_in_polytope;
use multitile_core::refine::{refinement_pipeline, weyl_search};
use multitile_core::scalar::parse_rational;
use multitile_core::synth::{synthesize, SynthesisConfig};
use multitile_core::verify::{
    general_position_check, split_check, verify_constant_multiplicity, verify_generic_multiplicity,
};
use multitile_core::{
    Boundary, Coset, Error, Lattice, Polytope, ProbeDirection, QuasiPeriodicSet, Rational, Scalar, VerificationMode,
};
use serde_json::{json, Value};

use crate::codec::vector;
use crate::problem::{Problem, TranslationSpec};
use crate::render::{render_tiling, Source};
use crate::report::{self, envelope, Status};

#[derive(Debug, Parser)]
#[command(
    name = "multitile",
    version,
    about = "Exact verification of multiple tilings by translates of a convex polytope"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BoundaryArg {
    HalfOpen,
    Closed,
}

#[derive(Debug, Args)]
struct ModeArgs {
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ModeArgs {
    fn mode(&self) -> VerificationMode {
        match self.mode {
            Mode::Exact => VerificationMode::ExactTorus,
            Mode::Sampled => VerificationMode::sampled(self.samples, self.seed),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Checks that the half-open multiplicity is constant.
    Verify {
        #[arg(long)]
        problem: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        /// Run the general-position pipeline for this coset (1-based).
        #[arg(long)]
        coset: Option<usize>,
        /// Only require constancy at points off all translate boundaries.
        #[arg(long)]
        generic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Connectivity of the complement of shared boundaries, per coset.
    Genpos {
        #[arg(long)]
        problem: PathBuf,
        /// Coset to check (1-based); all cosets when absent.
        #[arg(long)]
        coset: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nonnegative integer weights over a coset family.
    Synthesize {
        #[arg(long)]
        problem: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Common refinement of two cosets and verification of the candidate.
    Refine {
        #[arg(long)]
        problem: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest j with every j·a_k within eps of an integer.
    Weyl {
        #[arg(long)]
        problem: Option<PathBuf>,
        /// Comma-separated scalars such as `sqrt:2/2`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<String>,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        jmax: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lists translation points inside the polytope.
    Enumerate {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, value_enum, default_value = "half-open")]
        boundary: BoundaryArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes an SVG of the translates meeting the render window.
    Render {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the two-coset rectangle example end to end.
    #[command(name = "demo-example-5-1")]
    DemoExample51 {
        #[command(flatten)]
        mode: ModeArgs,
        /// Also write the drawing of the tiling here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Inconclusive(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SignIndeterminate { .. }
            | Error::PrecisionUnreachable(_)
            | Error::ModeUnavailable(_)
            | Error::DimensionUnsupported(_) => Failure::Inconclusive(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(Value, Status), Failure>;

fn problem(path: &Path) -> std::result::Result<Problem, Failure> {
    Ok(Problem::load(path)?)
}

fn coset_index(i: usize, n: usize) -> std::result::Result<usize, Failure> {
    if i == 0 || i > n {
        return Err(Failure::Input(format!("--coset {i} is outside 1..={n}")));
    }
    Ok(i - 1)
}

fn setup(pr: &Problem) -> std::result::Result<(Polytope, ProbeDirection), Failure> {
    let p = pr.polytope()?;
    let h = pr.probe_for(&p)?;
    Ok((p, h))
}

fn verify(path: &Path, mode: &ModeArgs, coset: Option<usize>, generic: bool) -> Outcome {
    let pr = problem(path)?;
    let (p, h) = setup(&pr)?;
    let q = QuasiPeriodicSet::new(pr.cosets()?.to_vec())?;
    let mode = mode.mode();
    let mut body = json!({"probe": h.as_slice()});
    let status = if let Some(i) = coset {
        let i = coset_index(i, q.cosets().len())?;
        let others: Vec<usize> = (0..q.cosets().len()).filter(|&j| j != i).collect();
        let (v, s) = report::pipeline(&split_check(&p, &h, &q, &[i], &others, &mode)?);
        body["coset"] = json!(i + 1);
        body["pipeline"] = v;
        s
    } else if let Some((a, b)) = &pr.split {
        let (v, s) = report::pipeline(&split_check(&p, &h, &q, a, b, &mode)?);
        body["split"] = json!({"first": a.iter().map(|i| i + 1).collect::<Vec<_>>(), "second": b.iter().map(|i| i + 1).collect::<Vec<_>>()});
        body["pipeline"] = v;
        s
    } else {
        let v = if generic {
            verify_generic_multiplicity(&p, &h, &q, &mode)?
        } else {
            verify_constant_multiplicity(&p, &h, &q, &mode)?
        };
        let (v, s) = report::verification(&v);
        if let Value::Object(fields) = v {
            body.as_object_mut().expect("object").extend(fields);
        }
        body["generic"] = json!(generic);
        s
    };
    Ok((body, status))
}

fn genpos(path: &Path, coset: Option<usize>) -> Outcome {
    let pr = problem(path)?;
    let p = pr.polytope()?;
    let q = QuasiPeriodicSet::new(pr.cosets()?.to_vec())?;
    let n = q.cosets().len();
    let ids: Vec<usize> = match coset {
        Some(i) => vec![coset_index(i, n)?],
        None => (0..n).collect(),
    };
    let mut status = Status::Ok;
    let mut results = Vec::new();
    for i in ids {
        let (mut v, s) = report::connectivity(&general_position_check(&p, &q, i)?);
        v["coset"] = json!(i + 1);
        results.push(v);
        status = status.and(s);
    }
    Ok((json!({"results": results}), status))
}

fn synth(path: &Path, mode: &ModeArgs) -> Outcome {
    let pr = problem(path)?;
    let (p, h) = setup(&pr)?;
    let family = pr.family()?;
    let config = SynthesisConfig {
        verification_samples: mode.samples,
        ..SynthesisConfig::default()
    };
    let (v, s) = report::synthesis(&synthesize(&p, &h, &family, &mode.mode(), &config)?);
    Ok((json!({"probe": h.as_slice(), "result": v}), s))
}

fn refine(path: &Path, mode: &ModeArgs) -> Outcome {
    let pr = problem(path)?;
    let (p, h) = setup(&pr)?;
    let r = pr
        .refinement
        .as_ref()
        .ok_or_else(|| Failure::Input("the problem has no refinement section".into()))?;
    let res = refinement_pipeline(&p, &h, &r.lattice, &r.t1, &r.t2, r.weights, &mode.mode())?;
    let (v, s) = report::refinement(&res);
    Ok((json!({"probe": h.as_slice(), "result": v}), s))
}

fn weyl(path: Option<&Path>, a: &[String], eps: Option<&str>, jmax: Option<u64>) -> Outcome {
    let spec = match path {
        Some(p) => problem(p)?.weyl,
        None => None,
    };
    let a: Vec<Scalar> = if !a.is_empty() {
        a.iter().map(|t| Scalar::parse(t)).collect::<Result<_, _>>()?
    } else {
        spec.as_ref()
            .map(|w| w.a.clone())
            .ok_or_else(|| Failure::Input("give --a or a problem with a weyl section".into()))?
    };
    let eps: Rational = match eps {
        Some(e) => parse_rational(e)?,
        None => spec
            .as_ref()
            .map(|w| w.eps.clone())
            .ok_or_else(|| Failure::Input("give --eps".into()))?,
    };
    let jmax = jmax.or(spec.as_ref().map(|w| w.jmax)).unwrap_or(1000);
    let j = weyl_search(&a, &eps, jmax)?;
    let status = if j.is_some() { Status::Ok } else { Status::Inconclusive };
    Ok((
        json!({"a": vector(&a), "eps": eps.to_string(), "jmax": jmax, "j": j}),
        status,
    ))
}

fn enumerate(path: &Path, boundary: BoundaryArg) -> Outcome {
    let pr = problem(path)?;
    let (p, h) = setup(&pr)?;
    let b = match boundary {
        BoundaryArg::Closed => Boundary::Closed,
        BoundaryArg::HalfOpen => Boundary::HalfOpen(h.clone()),
    };
    let mut points = Vec::new();
    let mut total = 0u64;
    match &pr.translations {
        Some(TranslationSpec::Cosets(cs)) => {
            for (i, c) in cs.iter().enumerate() {
                for (x, m) in enumerate_in_polytope(c, &p, &b)?.points {
                    total += m;
                    points.push(json!({"coset": i + 1, "point": vector(&x), "weight": m}));
                }
            }
        }
        Some(TranslationSpec::Window(w)) => {
            let strict = b.strictness(&p)?;
            let region = multitile_core::polytope::HalfOpenPolytope::new(p.clone(), h.clone())?;
            for (x, m) in &w.points {
                let hit = if strict.iter().any(|&s| s) {
                    region.contains(x)?
                } else {
                    p.contains_closed(x)?
                };
                if hit {
                    total += m;
                    points.push(json!({"point": vector(x), "weight": m}));
                }
            }
        }
        None => return Err(Failure::Input("the problem has no translations".into())),
    }
    let boundary = match boundary {
        BoundaryArg::Closed => "closed",
        BoundaryArg::HalfOpen => "half_open",
    };
    Ok((
        json!({"boundary": boundary, "probe": h.as_slice(), "count": total, "points": points}),
        Status::Ok,
    ))
}

fn render(path: &Path) -> std::result::Result<(String, usize), Failure> {
    let pr = problem(path)?;
    let p = pr.polytope()?;
    let spec = pr
        .render
        .as_ref()
        .ok_or_else(|| Failure::Input("the problem has no render section".into()))?;
    let source = match &pr.translations {
        Some(TranslationSpec::Cosets(cs)) => Source::Cosets(cs),
        Some(TranslationSpec::Window(w)) => Source::Window(w),
        None => return Err(Failure::Input("the problem has no translations".into())),
    };
    let svg = render_tiling(&p, source, &spec.lower, &spec.upper, &spec.palette)?;
    let tiles = svg.matches("<polygon").count();
    Ok((svg, tiles))
}

/// The rectangle `[0,1] × [0,1/2]` with `Z²` and `(√2/2, 1/2) + Z²`.
pub fn example_problem() -> Problem {
    Problem::parse(EXAMPLE).expect("built-in example parses")
}

const EXAMPLE: &str = r#"{
  "generators": [{"key": "sqrt:2"}],
  "polytope": {"box": {"lower": ["0", "0"], "upper": ["1", "1/2"]}},
  "translations": {"cosets": [
    {"translation": ["0", "0"]},
    {"translation": [{"irr": {"sqrt:2": "1/2"}}, "1/2"]}
  ]},
  "refinement": {"t1": ["0", "0"], "t2": [{"irr": {"sqrt:2": "1/2"}}, "1/2"]},
  "render": {"window": {"lower": ["-2", "-2"], "upper": ["3", "3"]}}
}"#;

fn expect_disproof(s: Status) -> Status {
    match s {
        Status::Disproof => Status::Ok,
        Status::Ok => Status::Disproof,
        Status::Inconclusive => Status::Inconclusive,
    }
}

fn demo(mode: &ModeArgs, out: Option<&Path>) -> Outcome {
    let pr = example_problem();
    let (p, h) = setup(&pr)?;
    let cosets = pr.cosets()?.to_vec();
    let q = QuasiPeriodicSet::new(cosets.clone())?;
    let mode = mode.mode();

    let (union, s_union) = report::verification(&verify_constant_multiplicity(&p, &h, &q, &mode)?);
    let mut singles = Vec::new();
    let mut s_singles = Status::Ok;
    for (i, c) in cosets.iter().enumerate() {
        let single = QuasiPeriodicSet::single(c.clone());
        let (v, s) = report::verification(&verify_constant_multiplicity(&p, &h, &single, &mode)?);
        // Each coset alone is expected not to tile.
        s_singles = s_singles.and(expect_disproof(s));
        singles.push(json!({"coset": i + 1, "result": v}));
    }
    let mut genpos = Vec::new();
    let mut s_genpos = Status::Ok;
    for i in 0..cosets.len() {
        let (mut v, s) = report::connectivity(&general_position_check(&p, &q, i)?);
        s_genpos = s_genpos.and(expect_disproof(s));
        v["coset"] = json!(i + 1);
        genpos.push(v);
    }
    let r = pr.refinement.as_ref().expect("example has a refinement");
    let res = refinement_pipeline(&p, &h, &r.lattice, &r.t1, &r.t2, r.weights, &mode)?;
    let (refined, s_refined) = report::refinement(&res);
    let expected_candidate = Coset::new(
        Lattice::scaled_identity(2, &Rational::new(1.into(), 2.into())),
        vec![Scalar::from(0), Scalar::from(0)],
        1,
    )?;
    let candidate_ok = res.n == 2.into()
        && res.candidate.lattice.same_lattice(&expected_candidate.lattice)?
        && res.verification.multiplicity() == Some(2);
    let s_candidate = if candidate_ok { s_refined } else { Status::Disproof };

    let mut body = json!({
        "union": union,
        "single_cosets": singles,
        "general_position": genpos,
        "refinement": refined,
    });
    if let Some(path) = out {
        let spec = pr.render.as_ref().expect("example has a window");
        let svg = render_tiling(&p, Source::Cosets(&cosets), &spec.lower, &spec.upper, &spec.palette)?;
        write_file(path, &svg)?;
        body["svg"] = json!(path.display().to_string());
    }
    let m1 = union.get("m") == Some(&json!(1));
    let status = s_union
        .and(if m1 { Status::Ok } else { Status::Disproof })
        .and(s_singles)
        .and(s_genpos)
        .and(s_candidate);
    Ok((body, status))
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn emit(command: &str, outcome: Outcome, out: Option<&Path>) -> i32 {
    let (body, code) = match outcome {
        Ok((body, status)) => (body, status.code()),
        Err(Failure::Inconclusive(msg)) => {
            eprintln!("multitile: {msg}");
            (json!({"status": "inconclusive", "error": msg}), 2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("multitile: {msg}");
            (json!({"status": "input_error", "error": msg}), 3)
        }
    };
    let text = serde_json::to_string_pretty(&envelope(command, body)).expect("reports serialize") + "\n";
    match out {
        Some(path) if code != 3 => {
            if let Err(Failure::Input(msg)) = write_file(path, &text) {
                eprintln!("multitile: {msg}");
                return 3;
            }
        }
        _ => {
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
    }
    code
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    match cli.command {
        Command::Verify {
            problem,
            mode,
            coset,
            generic,
            out,
        } => emit("verify", verify(&problem, &mode, coset, generic), out.as_deref()),
        Command::Genpos { problem, coset, out } => emit("genpos", genpos(&problem, coset), out.as_deref()),
        Command::Synthesize { problem, mode, out } => emit("synthesize", synth(&problem, &mode), out.as_deref()),
        Command::Refine { problem, mode, out } => emit("refine", refine(&problem, &mode), out.as_deref()),
        Command::Weyl {
            problem,
            a,
            eps,
            jmax,
            out,
        } => emit(
            "weyl",
            weyl(problem.as_deref(), &a, eps.as_deref(), jmax),
            out.as_deref(),
        ),
        Command::Enumerate { problem, boundary, out } => {
            emit("enumerate", enumerate(&problem, boundary), out.as_deref())
        }
        Command::Render { problem, out } => match render(&problem) {
            Ok((svg, tiles)) => match out {
                Some(path) => {
                    if let Err(Failure::Input(msg)) = write_file(&path, &svg) {
                        eprintln!("multitile: {msg}");
                        return 3;
                    }
                    emit(
                        "render",
                        Ok((
                            json!({"svg": path.display().to_string(), "translates": tiles}),
                            Status::Ok,
                        )),
                        None,
                    )
                }
                None => {
                    let _ = std::io::stdout().write_all(svg.as_bytes());
                    0
                }
            },
            Err(f) => emit("render", Err(f), None),
        },
        Command::DemoExample51 { mode, out } => emit("demo-example-5-1", demo(&mode, out.as_deref()), None),
    }
}
