//! Command-line front end. Every command prints one JSON document.
//!
//! Exit codes: 0 for success or a true verdict, 1 for a false verdict,
//! 2 for errors (reported as `{"error": ...}`).

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tensorbody_core::bm_distance::{classical_bm_upper, tensorial_bm_upper, DistanceOptions};
use tensorbody_core::ellipsoid_analysis::{
    block_matrix_check, block_matrix_falsify, bilinear_identity_check, is_tensorial_ellipsoid, kronecker_decompose_exact,
    sandwich_check_euclidean, BlockLemmaVerdict, BlockMatrixWitness,
};
use tensorbody_core::multilinear::AltMaxOptions;
use tensorbody_core::random;
use tensorbody_core::tensor_products::{eps_product, hilbert_product, pi_product};
use tensorbody_core::tensoriality::{canonical_anchor, counterexample_body, is_tensorial_with, sections_at, TensorialityOptions};
use tensorbody_core::{Body, Matrix, Rational, Representation, Scalar, TensorShape};

use crate::json::{self as codec, body_from_json, body_to_json, matrix_from_json, matrix_to_json, num, JsonScalar};
use crate::verify::{self, Mode, VerifyConfig};

#[derive(Parser, Debug)]
#[command(name = "tensorbody", version, about = "Convex bodies on tensor products of real spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Arithmetic: floating point or exact rationals.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Float)]
    pub mode: ModeArg,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Optimizer restarts per factor permutation.
    #[arg(long, global = true, default_value_t = 20)]
    pub budget: usize,
    /// Factor dimensions, e.g. `2,3`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub shape: Option<Vec<usize>>,
    /// Input JSON file (`-` for stdin); repeatable.
    #[arg(short = 'i', long = "input", global = true)]
    pub input: Vec<PathBuf>,
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Float,
    Exact,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct or convert a single body.
    #[command(subcommand)]
    Body(BodyCmd),
    /// Projective, injective or Hilbertian product of the inputs.
    Tensor {
        #[arg(value_enum)]
        kind: ProductKind,
    },
    /// Decide whether the input is a tensorial body.
    CheckTensorial,
    /// Section bodies at the canonical anchor.
    Sections,
    /// Upper bound for the tensorial Banach–Mazur distance of two bodies.
    BmDistance {
        /// Search all invertible maps instead of decomposable-preserving ones.
        #[arg(long)]
        classical: bool,
    },
    /// Ellipsoid analysis.
    #[command(subcommand)]
    Ellipsoid(EllipsoidCmd),
    /// Run the claim battery.
    VerifyClaims {
        /// Only run these claims (repeatable).
        #[arg(long)]
        only: Vec<String>,
        /// List claim ids and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum BodyCmd {
    /// Standard l_p ball.
    Lp {
        #[arg(long)]
        dim: usize,
        /// A number ≥ 1 or `inf`.
        #[arg(long)]
        p: String,
        /// Expand p ∈ {1, ∞} into a polytope.
        #[arg(long)]
        materialize: bool,
    },
    /// The diagonal ellipsoid that is not tensorial.
    Counterexample {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    Polar,
    /// Random body from the seed.
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = RandomKind::V)]
        kind: RandomKind,
        /// Number of generators for polytopes (default dim + 1).
        #[arg(long)]
        count: Option<usize>,
    },
    ToV,
    ToH,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum RandomKind {
    V,
    H,
    Ellipsoid,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ProductKind {
    Pi,
    Eps,
    Hilbert,
}

#[derive(Subcommand, Debug)]
pub enum EllipsoidCmd {
    /// Kronecker factorization of the ellipsoid matrix.
    Decompose,
    /// Test the Euclidean projective/injective sandwich.
    Sandwich {
        #[arg(long, default_value_t = 20)]
        restarts: usize,
    },
    /// Block-matrix check on a witness, or random falsification without input.
    BlockLemma {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Bilinear identity for a map `T` given as `{"matrix": ...}` or a bare matrix.
    Bilinear {
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

/// A JSON document plus the exit code it implies.
pub struct Output {
    pub value: Value,
    pub code: i32,
}

impl Output {
    fn ok(value: Value) -> Self {
        Self { value, code: 0 }
    }

    fn verdict(value: Value, v: bool) -> Self {
        Self { value, code: if v { 0 } else { 1 } }
    }
}

fn read_input(path: &Path) -> Result<Value> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn inputs(g: &Global, want: Option<usize>) -> Result<Vec<Value>> {
    if let Some(n) = want {
        if g.input.len() != n {
            bail!("expected {n} input file(s) via -i, got {}", g.input.len());
        }
    }
    g.input.iter().map(|p| read_input(p)).collect()
}

fn bodies<S: JsonScalar>(g: &Global, want: Option<usize>) -> Result<Vec<Body<S>>> {
    inputs(g, want)?.iter().map(body_from_json).collect()
}

fn shape(g: &Global) -> Result<TensorShape> {
    let dims = g.shape.clone().ok_or_else(|| anyhow!("--shape is required"))?;
    Ok(TensorShape::new(dims)?)
}

fn parse_p(p: &str) -> Result<f64> {
    match p.trim() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        other => other.parse().with_context(|| format!("invalid p {other:?}")),
    }
}

/// Rebuild a float body in the working scalar type.
fn convert<S: Scalar>(b: &Body<f64>) -> Result<Body<S>> {
    let v = |xs: &[Vec<f64>]| xs.iter().map(|x| x.iter().map(|&t| S::from_f64(t)).collect()).collect::<Vec<Vec<S>>>();
    Ok(match b.rep() {
        Representation::VPolytope { generators } => Body::v_polytope(v(generators))?,
        Representation::HPolytope { normals } => Body::h_polytope(v(normals))?,
        Representation::Ellipsoid { matrix } => Body::ellipsoid(matrix.map(|&t| S::from_f64(t)))?,
        Representation::LpBall { p } => Body::lp_ball(b.dim(), *p)?,
    })
}

fn cmd_body<S: JsonScalar>(g: &Global, cmd: &BodyCmd) -> Result<Output> {
    let b: Body<S> = match cmd {
        BodyCmd::Lp { dim, p, materialize } => Body::standard_ball(*dim, parse_p(p)?, *materialize)?,
        BodyCmd::Counterexample { m, n } => counterexample_body(*m, *n)?,
        BodyCmd::Polar => bodies::<S>(g, Some(1))?[0].polar()?,
        BodyCmd::ToV => bodies::<S>(g, Some(1))?[0].to_v_rep()?,
        BodyCmd::ToH => bodies::<S>(g, Some(1))?[0].to_h_rep()?,
        BodyCmd::Random { dim, kind, count } => {
            let mut rng = random::seeded(g.seed);
            let k = count.unwrap_or(dim + 1);
            let f: Body<f64> = match kind {
                RandomKind::V => Body::v_polytope((0..k).map(|_| random::gaussian_vec(&mut rng, *dim)).collect())?,
                RandomKind::H => Body::h_polytope((0..k).map(|_| random::gaussian_vec(&mut rng, *dim)).collect())?,
                RandomKind::Ellipsoid => {
                    Body::ellipsoid(random::pd_matrix(&mut rng, *dim).add(&Matrix::identity(*dim).scale(&0.2))?)?
                }
            };
            convert(&f)?
        }
    };
    Ok(Output::ok(body_to_json(&b)))
}

fn cmd_tensor<S: JsonScalar>(g: &Global, kind: ProductKind) -> Result<Output> {
    let s = shape(g)?;
    let fs = bodies::<S>(g, Some(s.order()))?;
    let b = match kind {
        ProductKind::Pi => pi_product(&s, &fs)?,
        ProductKind::Eps => eps_product(&s, &fs)?,
        ProductKind::Hilbert => hilbert_product(&s, &fs)?,
    };
    Ok(Output::ok(body_to_json(&b)))
}

fn tensoriality_opts(g: &Global) -> TensorialityOptions {
    TensorialityOptions {
        tol: g.tol,
        seed: g.seed,
        altmax: AltMaxOptions { seed: g.seed, ..AltMaxOptions::default() },
        ..TensorialityOptions::default()
    }
}

fn cmd_check<S: JsonScalar>(g: &Global) -> Result<Output> {
    let s = shape(g)?;
    let q = bodies::<S>(g, Some(1))?.remove(0);
    let r = is_tensorial_with(&s, &q, &tensoriality_opts(g))?;
    Ok(Output::verdict(codec::tensoriality_to_json(&r), r.verdict))
}

fn cmd_sections<S: JsonScalar>(g: &Global) -> Result<Output> {
    let s = shape(g)?;
    let q = bodies::<S>(g, Some(1))?.remove(0);
    let fam = sections_at(&s, &q, &canonical_anchor(&s, &q)?)?;
    Ok(Output::ok(codec::sections_to_json(&fam)))
}

fn cmd_distance<S: JsonScalar>(g: &Global, classical: bool) -> Result<Output> {
    let s = shape(g)?;
    let bs = bodies::<S>(g, Some(2))?;
    let opts = DistanceOptions { budget: g.budget, seed: g.seed, ..DistanceOptions::default() };
    let r = if classical {
        classical_bm_upper(&s, &bs[0], &bs[1], &opts, None)?
    } else {
        tensorial_bm_upper(&s, &bs[0], &bs[1], &opts)?
    };
    Ok(Output::ok(codec::distance_to_json(&r)))
}

fn ellipsoid_matrix<S: JsonScalar>(v: &Value) -> Result<Matrix<S>> {
    if v.get("rep").is_some() {
        let b: Body<S> = body_from_json(v)?;
        return b.ellipsoid_matrix().cloned().ok_or_else(|| anyhow!("input is a {}, not an ellipsoid", b.kind()));
    }
    matrix_from_json(v.get("matrix").unwrap_or(v))
}

fn cmd_ellipsoid(g: &Global, cmd: &EllipsoidCmd) -> Result<Output> {
    match cmd {
        EllipsoidCmd::Decompose => {
            let s = shape(g)?;
            let v = &inputs(g, Some(1))?[0];
            if g.mode == ModeArg::Exact {
                let m: Matrix<Rational> = ellipsoid_matrix(v)?;
                return match kronecker_decompose_exact(&s, &m) {
                    Ok(fs) => Ok(Output::verdict(
                        json!({"verdict": true, "factors": fs.iter().map(matrix_to_json).collect::<Vec<_>>(), "residual": 0}),
                        true,
                    )),
                    Err(tensorbody_core::Error::NotKronecker { .. }) => {
                        Ok(Output::verdict(json!({"verdict": false, "factors": null, "residual": "inf"}), false))
                    }
                    Err(e) => Err(e.into()),
                };
            }
            let m: Matrix<f64> = ellipsoid_matrix(v)?;
            let r = is_tensorial_ellipsoid(&s, &m, g.tol)?;
            let factors = r.factors.as_ref().map(|fs| fs.iter().map(matrix_to_json).collect::<Vec<_>>());
            Ok(Output::verdict(
                json!({"verdict": r.verdict, "factors": factors, "residual": num(r.residual)}),
                r.verdict,
            ))
        }
        EllipsoidCmd::Sandwich { restarts } => {
            let s = shape(g)?;
            let m: Matrix<f64> = ellipsoid_matrix(&inputs(g, Some(1))?[0])?;
            let r = sandwich_check_euclidean(&s, &m, g.tol, *restarts, g.seed)?;
            Ok(Output::verdict(
                json!({
                    "passed": r.passed,
                    "pi_value": num(r.pi_value),
                    "eps_value": num(r.eps_value),
                    "violation": r.violation.as_ref().map(|v| codec::vecs_to_json(v)),
                    "distance_from_identity": num(r.distance_from_identity),
                }),
                r.passed,
            ))
        }
        EllipsoidCmd::BlockLemma { m, n, trials } => {
            if g.input.is_empty() {
                let r = block_matrix_falsify(*m, *n, *trials, g.tol, g.seed)?;
                return Ok(Output::verdict(
                    json!({
                        "trials": r.trials,
                        "positive_definite": r.positive_definite,
                        "structured_inverse": r.structured_inverse,
                        "counterexamples": r.counterexamples,
                    }),
                    r.counterexamples == 0,
                ));
            }
            let v = &inputs(g, Some(1))?[0];
            let field = |k: &str| v.get(k).and_then(Value::as_u64).map(|x| x as usize).with_context(|| format!("witness needs \"{k}\""));
            let blocks = v
                .get("blocks")
                .and_then(Value::as_array)
                .context("witness needs \"blocks\"")?
                .iter()
                .map(matrix_from_json::<f64>)
                .collect::<Result<Vec<_>>>()?;
            let w = BlockMatrixWitness::new(field("m")?, field("n")?, blocks)?;
            let (value, ok) = match block_matrix_check(&w, g.tol)? {
                BlockLemmaVerdict::ConfirmsLemma => (json!({"verdict": "confirms-lemma"}), true),
                BlockLemmaVerdict::StructureBroken { row_block, col_block, deviation } => (
                    json!({"verdict": "structure-broken", "block": [row_block, col_block], "deviation": num(deviation)}),
                    false,
                ),
                BlockLemmaVerdict::Counterexample { deviation } => {
                    (json!({"verdict": "counterexample", "deviation": num(deviation)}), false)
                }
            };
            Ok(Output::verdict(value, ok))
        }
        EllipsoidCmd::Bilinear { samples } => {
            let s = shape(g)?;
            let v = &inputs(g, Some(1))?[0];
            let t: Matrix<f64> = matrix_from_json(v.get("matrix").unwrap_or(v))?;
            let r = bilinear_identity_check(&s, &t, *samples, g.tol, g.seed)?;
            Ok(Output::verdict(
                json!({
                    "passed": r.passed,
                    "samples": r.samples,
                    "max_deviation": num(r.max_deviation),
                    "failure": r.failure.as_ref().map(|f| codec::vecs_to_json(f)),
                }),
                r.passed,
            ))
        }
    }
}

fn cmd_verify(g: &Global, only: &[String], list: bool) -> Result<Output> {
    if list {
        let items: Vec<Value> = verify::claims()
            .iter()
            .map(|c| json!({"id": c.id, "statement": c.statement, "exact": c.exact}))
            .collect();
        return Ok(Output::ok(Value::Array(items)));
    }
    let cfg = VerifyConfig {
        mode: if g.mode == ModeArg::Exact { Mode::Exact } else { Mode::Float },
        seed: g.seed,
        budget: g.budget,
        only: only.to_vec(),
    };
    let results = verify::run(&cfg)?;
    let summary = verify::summary_json(&results);
    let ok = summary["passed"].as_bool().unwrap_or(false);
    Ok(Output::verdict(summary, ok))
}

fn validate(g: &Global) -> Result<()> {
    if !(g.tol > 0.0) {
        bail!("--tol must be positive");
    }
    if g.budget == 0 {
        bail!("--budget must be at least 1");
    }
    Ok(())
}

/// Dispatch a parsed command line.
pub fn execute(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    validate(g)?;
    macro_rules! by_mode {
        ($f:ident($($arg:expr),*)) => {
            match g.mode {
                ModeArg::Float => $f::<f64>($($arg),*),
                ModeArg::Exact => $f::<Rational>($($arg),*),
            }
        };
    }
    match &cli.command {
        Command::Body(cmd) => by_mode!(cmd_body(g, cmd)),
        Command::Tensor { kind } => by_mode!(cmd_tensor(g, *kind)),
        Command::CheckTensorial => by_mode!(cmd_check(g)),
        Command::Sections => by_mode!(cmd_sections(g)),
        Command::BmDistance { classical } => by_mode!(cmd_distance(g, *classical)),
        Command::Ellipsoid(cmd) => cmd_ellipsoid(g, cmd),
        Command::VerifyClaims { only, list } => cmd_verify(g, only, *list),
    }
}

fn emit(value: &Value, output: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn error_json(e: &anyhow::Error) -> Value {
    json!({"error": format!("{e:#}")})
}

/// Parse `args`, run, print, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let _ = emit(&json!({"error": e.to_string().trim()}), None);
            return 2;
        }
    };
    let out = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = emit(&error_json(&e), None);
            return 2;
        }
    };
    match emit(&out.value, cli.global.output.as_deref()) {
        Ok(()) => out.code,
        Err(e) => {
            let _ = emit(&error_json(&e), None);
            2
        }
    }
}
