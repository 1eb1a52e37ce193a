//! The `heckex` batch front end: reads pair/bundle specs and operands as JSON, writes JSON.
//!
//! Exit status: 0 on success, 1 when a checked property fails, 2 on malformed input.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bs::{BsElem, BsPair};
use crate::bundle::{Bundle, Setting, TrivialLine};
use crate::check::{self, suite_rng, Report, Suite};
use crate::eq::{self, EqBundle, Quotient};
use crate::hecke;
use crate::json::rational_to_string;
use crate::pair::{gamma_index, HeckePair, Rng};
use crate::perm::{Perm, PermPair};
use crate::random::Pools;
use crate::rep::{self, CovariantPair, Cosets, FiniteRep};

#[derive(Parser, Debug, Clone)]
#[command(name = "heckex", version, about = "Hecke algebras, orbit Fell bundles and crossed products by Hecke pairs")]
pub struct RunConfig {
    /// Pair spec: {"type":"perm",...} or {"type":"bs","m":2}.
    #[arg(long, global = true)]
    pub pair: Option<String>,
    /// Bundle spec; defaults to the trivial line bundle over the group itself.
    #[arg(long, global = true)]
    pub bundle: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Overrides every per-suite sample count.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Tolerance for floating-point comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Hecke pair data.
    #[command(subcommand)]
    Pair(PairCmd),
    /// Hecke algebra operations.
    #[command(subcommand)]
    Hecke(HeckeCmd),
    /// Crossed-product operations.
    #[command(subcommand)]
    Xp(XpCmd),
    /// Representations.
    #[command(subcommand)]
    Rep(RepCmd),
    /// The LLN algebra and Φ.
    #[command(subcommand)]
    Lln(LlnCmd),
    /// Matrix units and covariant pairs.
    #[command(subcommand)]
    Svn(SvnCmd),
    /// Graded bundles over G×G.
    #[command(subcommand)]
    Eq(EqCmd),
    /// Property suites.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Subcommand, Debug, Clone)]
pub enum PairCmd {
    /// Double cosets, L, R and Δ.
    Info {
        /// Extra elements to report on (JSON).
        #[arg(long = "elem")]
        elems: Vec<String>,
    },
}

// Operands are JSON file paths, or inline JSON starting with `[`, `{` or `"`.
#[derive(Args, Debug, Clone)]
pub struct One {
    pub a: String,
}

#[derive(Args, Debug, Clone)]
pub struct Two {
    pub a: String,
    pub b: String,
}

#[derive(Subcommand, Debug, Clone)]
pub enum HeckeCmd {
    /// Convolution product.
    Mul(Two),
    /// Involution.
    Star(One),
    /// L¹ norm.
    L1(One),
    /// ρ(f) as a matrix on ℓ²(G/Γ), or applied to `--vector`.
    Rho {
        a: String,
        #[arg(long)]
        vector: Option<String>,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum XpCmd {
    /// Product.
    Mul(Two),
    /// Involution.
    Star(One),
    /// E_{gΓ}(f); `--at` defaults to the identity.
    Expect {
        a: String,
        #[arg(long)]
        at: Option<String>,
    },
    /// L¹ norm.
    L1(One),
    /// Decomposition into spanning elements.
    Span(One),
}

#[derive(Subcommand, Debug, Clone)]
pub enum RepCmd {
    /// Integrated form of the regular covariant representation; `--point` uses evaluation at x.
    Integrated {
        a: String,
        #[arg(long)]
        point: Option<String>,
    },
    /// Reduced norm, through the regular representation.
    Rednorm(One),
    /// Checks the covariance identity for the standard pair (M, ρ), optionally amplified,
    /// conjugated by a random unitary, or corrupted.
    Covcheck {
        #[arg(long, default_value_t = 1)]
        amplify: usize,
        #[arg(long)]
        conjugate: bool,
        #[arg(long)]
        corrupt: bool,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum LlnCmd {
    /// Product.
    Mul(Two),
    /// Involution.
    Star(One),
    /// π_x(F) as a matrix on ℓ²(G/Γ), or applied to `--vector`.
    Pix {
        a: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        vector: Option<String>,
    },
    /// Φ of a crossed-product element.
    Phi(One),
    /// Φ⁻¹ of an LLN element.
    PhiInv(One),
}

#[derive(Subcommand, Debug, Clone)]
pub enum SvnCmd {
    /// Matrix-unit and covariant-pair checks.
    Run,
}

#[derive(Subcommand, Debug, Clone)]
pub enum EqCmd {
    /// The graded algebra and its axioms.
    Algebra,
    /// Arrows of the direct quotient ℬ×G/H.
    Quotient {
        /// `gamma`, `trivial`, `core`, or a JSON array of conjugators g (H = ∩ gΓg⁻¹).
        #[arg(long, default_value = "gamma")]
        sub: String,
    },
    /// Bundle axioms, dual action, orbit-vs-direct comparison and the crossed-product suite.
    Check,
}

#[derive(Subcommand, Debug, Clone)]
pub enum CheckCmd {
    /// Every suite applicable to the instance.
    All,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {msg}")]
    Syntax { path: String, line: usize, column: usize, msg: String },
    #[error("{path}: {msg}")]
    Spec { path: String, msg: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Input(String),
}

impl From<crate::bundle::BundleError> for CliError {
    fn from(e: crate::bundle::BundleError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<crate::pair::PairError> for CliError {
    fn from(e: crate::pair::PairError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// JSON result plus whether every checked property held.
pub struct Outcome {
    pub value: Value,
    pub passed: bool,
}

impl Outcome {
    fn data(value: Value) -> Self {
        Outcome { value, passed: true }
    }

    fn report(r: Report) -> Self {
        Outcome { passed: r.passed(), value: r.to_json() }
    }
}

/// Reads a file, or takes `arg` itself when it looks like inline JSON.
pub fn read_json(arg: &str) -> Result<(Value, String), CliError> {
    let t = arg.trim_start();
    let (text, label) = if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') {
        (arg.to_string(), "<inline>".to_string())
    } else {
        let text = fs::read_to_string(arg).map_err(|source| CliError::Io { path: arg.into(), source })?;
        (text, arg.to_string())
    };
    match serde_json::from_str(&text) {
        Ok(v) => Ok((v, label)),
        Err(e) => {
            let full = e.to_string();
            let msg = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m).to_string();
            Err(CliError::Syntax { path: label, line: e.line(), column: e.column(), msg })
        }
    }
}

fn spec_err(path: &str, msg: impl Into<String>) -> CliError {
    CliError::Spec { path: path.into(), msg: msg.into() }
}

/// A loaded pair together with its bundle.
pub enum Instance {
    PermLine(Setting<PermPair, TrivialLine>),
    PermGraded(Setting<PermPair, EqBundle<Perm>>),
    BsLine(Setting<BsPair, TrivialLine>),
}

macro_rules! with_setting {
    ($inst:expr, $s:ident => $body:expr) => {
        match $inst {
            Instance::PermLine($s) => $body,
            Instance::PermGraded($s) => $body,
            Instance::BsLine($s) => $body,
        }
    };
}

enum PairSpec {
    Perm(PermPair),
    Bs(BsPair),
}

fn parse_perm_list(v: Option<&Value>, degree: usize, path: &str, field: &str) -> Result<Vec<Perm>, CliError> {
    let Some(v) = v else { return Ok(vec![]) };
    let arr = v.as_array().ok_or_else(|| spec_err(path, format!("/{field}: expected an array of image arrays")))?;
    let mut out = Vec::new();
    for (i, g) in arr.iter().enumerate() {
        let at = format!("/{field}/{i}");
        let img = g.as_array().ok_or_else(|| spec_err(path, format!("{at}: expected an image array")))?;
        let img: Option<Vec<usize>> = img.iter().map(|x| x.as_u64().map(|n| n as usize)).collect();
        let img = img.ok_or_else(|| spec_err(path, format!("{at}: images must be positive integers")))?;
        if img.len() != degree {
            return Err(spec_err(path, format!("{at}: expected {degree} images, got {}", img.len())));
        }
        out.push(Perm::from_images(&img).map_err(|e| spec_err(path, format!("{at}: {e}")))?);
    }
    Ok(out)
}

fn parse_pair(v: &Value, path: &str) -> Result<PairSpec, CliError> {
    match v.get("type").and_then(Value::as_str) {
        Some("perm") => {
            let degree = v
                .get("degree")
                .and_then(Value::as_u64)
                .ok_or_else(|| spec_err(path, "/degree: expected a positive integer"))? as usize;
            let gens = parse_perm_list(v.get("generators"), degree, path, "generators")?;
            let gamma = parse_perm_list(v.get("gamma"), degree, path, "gamma")?;
            PermPair::new(degree, gens, gamma).map(PairSpec::Perm).map_err(|e| spec_err(path, e.to_string()))
        }
        Some("bs") => {
            let m = v.get("m").and_then(Value::as_u64).ok_or_else(|| spec_err(path, "/m: expected an integer ≥ 2"))?;
            let m = u32::try_from(m).map_err(|_| spec_err(path, "/m: too large"))?;
            BsPair::new(m).map(PairSpec::Bs).map_err(|e| spec_err(path, format!("/m: {e}")))
        }
        Some(t) => Err(spec_err(path, format!("/type: unknown pair type {t:?} (expected \"perm\" or \"bs\")"))),
        None => Err(spec_err(path, "/type: missing")),
    }
}

enum BundleSpec {
    Line,
    Graded(Value),
}

fn parse_bundle(v: &Value, path: &str) -> Result<BundleSpec, CliError> {
    match v.get("kind").and_then(Value::as_str) {
        Some("trivial-line") => match v.get("points").and_then(Value::as_str) {
            None | Some("group-itself") => Ok(BundleSpec::Line),
            Some(o) => Err(spec_err(path, format!("/points: only \"group-itself\" is supported, got {o:?}"))),
        },
        Some("graded") => {
            match v.get("grading-group") {
                None | Some(Value::Null) => {}
                Some(Value::String(s)) if s == "pair" => {}
                Some(_) => return Err(spec_err(path, "/grading-group: the grading group is the pair's group; use \"pair\" or omit")),
            }
            Ok(BundleSpec::Graded(v.clone()))
        }
        Some(k) => Err(spec_err(path, format!("/kind: unknown bundle kind {k:?}"))),
        None => Err(spec_err(path, "/kind: missing")),
    }
}

fn graded_algebra(p: &PermPair, v: &Value, path: &str) -> Result<eq::GradedAlgebra<Perm>, CliError> {
    let alg = match v.get("preset") {
        Some(Value::String(s)) if s == "group-algebra" => eq::group_algebra(p).map_err(|e| spec_err(path, e))?,
        Some(Value::String(s)) if s == "scalars" => eq::scalars_in_degree_e(p),
        Some(Value::Object(o)) if o.contains_key("matrix") => {
            let n = o["matrix"].as_u64().ok_or_else(|| spec_err(path, "/preset/matrix: expected an integer"))?;
            eq::matrix_algebra(p, n as usize)
        }
        Some(other) => return Err(spec_err(path, format!("/preset: unknown preset {other}"))),
        None => eq::algebra_from_json(p, v).map_err(|e| spec_err(path, e))?,
    };
    alg.verify(p).map_err(|e| spec_err(path, format!("graded algebra fails its axioms: {e}")))?;
    Ok(alg)
}

pub fn load_instance(cfg: &RunConfig) -> Result<Instance, CliError> {
    let pair_arg = cfg.pair.as_deref().ok_or_else(|| CliError::Input("--pair is required".into()))?;
    let (pv, ppath) = read_json(pair_arg)?;
    let pair = parse_pair(&pv, &ppath)?;
    let bundle = match &cfg.bundle {
        None => BundleSpec::Line,
        Some(b) => {
            let (bv, bpath) = read_json(b)?;
            match parse_bundle(&bv, &bpath)? {
                BundleSpec::Graded(v) => BundleSpec::Graded(json!({"value": v, "path": bpath})),
                line => line,
            }
        }
    };
    Ok(match (pair, bundle) {
        (PairSpec::Perm(p), BundleSpec::Line) => Instance::PermLine(Setting::new(p, TrivialLine)),
        (PairSpec::Bs(p), BundleSpec::Line) => Instance::BsLine(Setting::new(p, TrivialLine)),
        (PairSpec::Perm(p), BundleSpec::Graded(v)) => {
            let path = v["path"].as_str().unwrap_or_default().to_string();
            let alg = graded_algebra(&p, &v["value"], &path)?;
            Instance::PermGraded(Setting::new(p, EqBundle::new(alg)))
        }
        (PairSpec::Bs(_), BundleSpec::Graded(_)) => {
            return Err(CliError::Input("graded bundles need a finite group".into()));
        }
    })
}

fn operand<T>(arg: &str, parse: impl FnOnce(&Value) -> Result<T, String>) -> Result<T, CliError> {
    let (v, path) = read_json(arg)?;
    parse(&v).map_err(|msg| CliError::Spec { path, msg })
}

fn elem<P: HeckePair>(p: &P, arg: &str) -> Result<P::Elem, CliError> {
    operand(arg, |v| p.elem_from_json(v).map_err(|e| e.to_string()))
}

fn sub_arg<P: HeckePair>(p: &P, arg: &str) -> Result<P::Sub, CliError> {
    match arg {
        "gamma" => Ok(p.gamma()),
        "trivial" => p.trivial_sub().ok_or_else(|| CliError::Input("no trivial subgroup handle for this pair".into())),
        "core" => p.normal_core().ok_or_else(|| CliError::Input("normal core needs a finite group".into())),
        _ => {
            let conj = operand(arg, |v| {
                v.as_array()
                    .ok_or("expected an array of conjugators".to_string())?
                    .iter()
                    .map(|g| p.elem_from_json(g).map_err(|e| e.to_string()))
                    .collect::<Result<Vec<_>, _>>()
            })?;
            Ok(p.sub_from_tag(&conj))
        }
    }
}

fn norm_json(n: &hecke::Norm) -> Value {
    json!({
        "value": n.value,
        "exact": n.exact.as_ref().map(crate::json::scalar_to_json),
    })
}

fn elem_info<P: HeckePair>(p: &P, g: &P::Elem) -> Result<Value, CliError> {
    Ok(json!({
        "g": p.elem_to_json(g),
        "dcoset": p.elem_to_json(&p.dcoset_key(g)),
        "left_count": p.left_count(g).to_string(),
        "right_count": p.right_count(g).to_string(),
        "gamma_index": gamma_index(p, g)?.to_string(),
        "delta": rational_to_string(&p.delta(g)),
    }))
}

fn pair_info<P: HeckePair>(p: &P, extra: &[P::Elem]) -> Result<Value, CliError> {
    let mut v = json!({"pair": p.describe(), "finite": p.is_finite()});
    if let Some(els) = p.elements() {
        v["order"] = json!(els.len());
        v["index"] = json!(p.cosets(p.gamma()).map_or(0, |c| c.len()));
        let ds = p.dcosets().unwrap_or_default();
        v["double_cosets"] = Value::Array(ds.iter().map(|d| elem_info(p, d)).collect::<Result<_, _>>()?);
        v["unimodular"] = json!(ds.iter().all(|d| p.delta(d) == num_rational::BigRational::from_integer(1.into())));
    }
    v["elements"] = Value::Array(extra.iter().map(|g| elem_info(p, g)).collect::<Result<_, _>>()?);
    Ok(v)
}

fn hecke_cmd<P: HeckePair>(p: &P, cmd: &HeckeCmd) -> Result<Value, CliError> {
    let load = |a: &str| operand(a, |v| hecke::from_json(p, v));
    Ok(match cmd {
        HeckeCmd::Mul(t) => hecke::to_json(p, &hecke::convolve(p, &load(&t.a)?, &load(&t.b)?)),
        HeckeCmd::Star(o) => hecke::to_json(p, &hecke::star(p, &load(&o.a)?)),
        HeckeCmd::L1(o) => norm_json(&hecke::l1_norm(p, &load(&o.a)?)),
        HeckeCmd::Rho { a, vector } => {
            let f = load(a)?;
            match vector {
                Some(vec) => {
                    let v = operand(vec, |v| hecke::vector_from_json(p, v))?;
                    hecke::vector_to_json(p, &hecke::rho_apply(p, &f, &v))
                }
                None if p.is_finite() => {
                    let cos = Cosets::of(p)?;
                    json!({
                        "cosets": cos.reps.iter().map(|g| p.elem_to_json(g)).collect::<Vec<_>>(),
                        "matrix": hecke::rho_full(p, &f)?.to_json(),
                    })
                }
                None => hecke::vector_to_json(p, &hecke::rho_apply(p, &f, &hecke::delta_vec(p, &p.identity()))),
            }
        }
    })
}

fn xp_cmd<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>, cmd: &XpCmd) -> Result<Value, CliError> {
    let load = |a: &str| operand(a, |v| s.xp_from_json(v));
    Ok(match cmd {
        XpCmd::Mul(t) => s.xp_to_json(&s.xp_mul(&load(&t.a)?, &load(&t.b)?)?),
        XpCmd::Star(o) => s.xp_to_json(&s.xp_star(&load(&o.a)?)?),
        XpCmd::Expect { a, at } => {
            let g = match at {
                Some(g) => elem(&s.pair, g)?,
                None => s.pair.identity(),
            };
            s.section_to_json(&s.expectation(&load(a)?, &g)?)
        }
        XpCmd::L1(o) => {
            let f = load(&o.a)?;
            let pi = if s.bundle.is_line() { None } else { FiniteRep::faithful(s).ok() };
            norm_json(&s.xp_l1_norm(&f, |sec| check::fiber_norm(s, pi.as_ref(), sec)))
        }
        XpCmd::Span(o) => Value::Array(
            s.spanning_decomposition(&load(&o.a)?)
                .into_iter()
                .map(|(a, x, g)| {
                    json!({
                        "value": crate::json::vector_to_json(&a),
                        "arrow": s.bundle.arrow_to_json(&s.pair, &x),
                        "g": s.pair.elem_to_json(&g),
                    })
                })
                .collect(),
        ),
    })
}

fn rep_cmd<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>, cmd: &RepCmd, seed: u64) -> Result<Outcome, CliError> {
    let p = &s.pair;
    let load = |a: &str| operand(a, |v| s.xp_from_json(v));
    Ok(match cmd {
        RepCmd::Integrated { a, point } => {
            let pi = match point {
                Some(x) => FiniteRep::eval(s, operand(x, |v| s.bundle.arrow_from_json(p, v))?)?,
                None => FiniteRep::faithful(s)?,
            };
            Outcome::data(rep::integrated_form(s, &pi, &load(a)?)?.to_json())
        }
        RepCmd::Rednorm(o) => {
            let pi = FiniteRep::faithful(s)?;
            Outcome::data(json!({"reduced_norm": rep::reduced_norm(s, &pi, &load(&o.a)?)?}))
        }
        RepCmd::Covcheck { amplify, conjugate, corrupt } => {
            let mut rng = suite_rng(seed, 0);
            let mut c = CovariantPair::standard(p)?.amplify((*amplify).max(1));
            if *conjugate {
                c = c.conjugate(&rep::random_unitary(c.dim, &mut rng));
            }
            if *corrupt {
                c = c.corrupt(&mut rng);
            }
            let r = c.check(p)?;
            Outcome {
                passed: r.holds(),
                value: json!({
                    "dim": c.dim,
                    "checked": r.checked,
                    "failures": r.failures,
                    "max_deviation": r.max_deviation,
                    "holds": r.holds(),
                }),
            }
        }
    })
}

fn lln_cmd<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>, cmd: &LlnCmd) -> Result<Value, CliError> {
    let p = &s.pair;
    let load = |a: &str| operand(a, |v| s.lln_from_json(v));
    Ok(match cmd {
        LlnCmd::Mul(t) => s.lln_to_json(&s.lln_mul(&load(&t.a)?, &load(&t.b)?)),
        LlnCmd::Star(o) => s.lln_to_json(&s.lln_star(&load(&o.a)?)),
        LlnCmd::Phi(o) => s.lln_to_json(&s.phi(&operand(&o.a, |v| s.xp_from_json(v))?)?),
        LlnCmd::PhiInv(o) => s.xp_to_json(&s.phi_inv(&load(&o.a)?)?),
        LlnCmd::Pix { a, point, vector } => {
            let f = load(a)?;
            let x = operand(point, |v| s.bundle.arrow_from_json(p, v))?;
            match vector {
                Some(v) => {
                    let v = operand(v, |v| hecke::vector_from_json(p, v))?;
                    hecke::vector_to_json(p, &s.pi_x_apply(&x, &f, &v))
                }
                None if p.is_finite() => check::pi_x_matrix(s, &x, &f, &Cosets::of(p)?).to_json(),
                None => hecke::vector_to_json(p, &s.pi_x_apply(&x, &f, &hecke::delta_vec(p, &p.identity()))),
            }
        }
    })
}

/// Per-suite sample counts.
#[derive(Clone, Copy, Debug)]
pub struct Counts {
    pub pair: usize,
    pub hecke: usize,
    pub embeddings: usize,
    pub pik: usize,
    pub triples: usize,
    pub singles: usize,
    pub regular: usize,
    pub norms: usize,
    pub lln: usize,
    pub l1: usize,
}

impl Counts {
    pub fn new(samples: Option<usize>) -> Self {
        match samples {
            Some(n) => Counts {
                pair: n,
                hecke: n,
                embeddings: n,
                pik: n,
                triples: n,
                singles: n,
                regular: n,
                norms: n,
                lln: n,
                l1: n,
            },
            None => Counts {
                pair: 500,
                hecke: 200,
                embeddings: 200,
                pik: 50,
                triples: 100,
                singles: 200,
                regular: 50,
                norms: 100,
                lln: 100,
                l1: 200,
            },
        }
    }
}

type Job<'a> = Box<dyn Fn(&mut Rng) -> Vec<Suite> + Send + Sync + 'a>;

/// Runs jobs concurrently, each with its own stream of the seeded generator.
fn run_jobs(seed: u64, jobs: Vec<Job<'_>>) -> Vec<Suite> {
    jobs.par_iter()
        .enumerate()
        .flat_map_iter(|(i, job)| job(&mut suite_rng(seed, i as u64 + 1)))
        .collect()
}

/// `K = Γ^d ∩ Γ^{d⁻¹}` for the first non-trivial double coset `d`, and `L ⊆ K` one level deeper.
fn chain<P: HeckePair>(p: &P, dcosets: &[P::Elem]) -> (P::Sub, P::Sub, P::Sub) {
    let gam = p.gamma();
    let d = dcosets.iter().find(|d| !p.contains(gam, d)).cloned().unwrap_or_else(|| p.identity());
    let di = p.inv(&d);
    let k = p.meet(p.gamma_g(&d), p.gamma_g(&di));
    let l = p.trivial_sub().unwrap_or_else(|| {
        let l = p.meet(k, p.gamma_g(&p.mul(&d, &d)));
        p.meet(l, p.gamma_g(&p.mul(&di, &di)))
    });
    (gam, k, l)
}

fn common_jobs<'a, P: HeckePair, B: Bundle<P>>(
    s: &'a Setting<P, B>,
    pools: &'a Pools<P, B>,
    c: Counts,
) -> Vec<Job<'a>> {
    let p = &s.pair;
    vec![
        Box::new(move |r: &mut Rng| vec![check::pair_suite(p, c.pair, r)]),
        Box::new(move |r: &mut Rng| vec![check::hecke_suite(p, &pools.dcosets, c.hecke, r)]),
        Box::new(move |r: &mut Rng| vec![check::l1_suite(s, pools, c.l1, r)]),
    ]
}

pub fn check_all(inst: &Instance, seed: u64, c: Counts) -> Result<Report, CliError> {
    let suites = match inst {
        Instance::PermLine(s) => {
            let pools = Pools::finite(s).ok_or(crate::pair::PairError::NotFinite)?;
            let (h, k, l) = chain(&s.pair, &pools.dcosets);
            let pools = &pools;
            let mut jobs = common_jobs(s, pools, c);
            jobs.push(Box::new(move |r| vec![check::embedding_suite(s, pools, (h, k, l), c.embeddings, r)]));
            jobs.push(Box::new(move |r| vec![check::pik_suite(s, pools, (h, k), c.pik, r)]));
            jobs.push(Box::new(move |r| vec![check::crossed_suite(s, pools, c.triples, c.singles, r)]));
            jobs.push(Box::new(move |r| vec![check::regular_suite(s, pools, c.regular, r)]));
            jobs.push(Box::new(move |r| vec![check::norm_suite(s, pools, c.norms, r)]));
            jobs.push(Box::new(move |r| vec![check::lln_suite(s, pools, c.lln, r)]));
            jobs.push(Box::new(move |r| vec![check::svn_suite(s, r)]));
            run_jobs(seed, jobs)
        }
        Instance::PermGraded(s) => {
            let pools = Pools::finite(s).ok_or(crate::pair::PairError::NotFinite)?;
            let pools = &pools;
            let mut jobs = common_jobs(s, pools, c);
            jobs.push(Box::new(move |r| check::eq_suite(s, c.triples, c.singles, r)));
            jobs.push(Box::new(move |r| vec![check::regular_suite(s, pools, c.regular, r)]));
            jobs.push(Box::new(move |r| vec![check::norm_suite(s, pools, c.norms, r)]));
            run_jobs(seed, jobs)
        }
        Instance::BsLine(s) => {
            let mut rng = suite_rng(seed, 0);
            let pools = Pools::sampled(s, 10, &mut rng);
            let (h, k, l) = chain(&s.pair, &pools.dcosets);
            let window = bs_window(&s.pair, &pools);
            let pools = &pools;
            let window = &window;
            let mut jobs = common_jobs(s, pools, c);
            jobs.push(Box::new(move |r| vec![check::embedding_suite(s, pools, (h, k, l), c.embeddings, r)]));
            jobs.push(Box::new(move |r| vec![check::crossed_suite(s, pools, c.triples, c.singles, r)]));
            jobs.push(Box::new(move |r| vec![check::lln_suite(s, pools, c.lln, r)]));
            jobs.push(Box::new(move |_| vec![check::svn_window(s, window)]));
            run_jobs(seed, jobs)
        }
    };
    Ok(Report::new(seed, suites))
}

/// Six distinct cosets: Γ and cosets of the sampled elements.
fn bs_window(p: &BsPair, pools: &Pools<BsPair, TrivialLine>) -> Vec<BsElem> {
    let mut w = vec![p.identity()];
    for g in pools.arrows.iter().chain([BsElem::int(0, 1), BsElem::int(0, -1), BsElem::int(1, 1)].iter()) {
        if w.len() == 6 {
            break;
        }
        if !w.iter().any(|h| p.same_coset(h, g, p.gamma())) {
            w.push(g.clone());
        }
    }
    w
}

fn svn_run(inst: &Instance, seed: u64) -> Result<Report, CliError> {
    let mut rng = suite_rng(seed, 0);
    let suite = match inst {
        Instance::PermLine(s) => check::svn_suite(s, &mut rng),
        Instance::BsLine(s) => {
            let pools = Pools::sampled(s, 10, &mut rng);
            check::svn_window(s, &bs_window(&s.pair, &pools))
        }
        Instance::PermGraded(_) => return Err(CliError::Input("matrix units need the trivial line bundle".into())),
    };
    Ok(Report::new(seed, vec![suite]))
}

fn eq_cmd(inst: &Instance, cmd: &EqCmd, seed: u64, c: Counts) -> Result<Outcome, CliError> {
    let Instance::PermGraded(s) = inst else {
        return Err(CliError::Input("eq commands need a graded --bundle".into()));
    };
    let p = &s.pair;
    Ok(match cmd {
        EqCmd::Algebra => {
            let verified = s.bundle.algebra.verify(p);
            Outcome {
                passed: verified.is_ok(),
                value: json!({
                    "algebra": eq::algebra_to_json(p, &s.bundle.algebra),
                    "total_dim": s.bundle.algebra.total_dim(),
                    "axioms": verified.err().unwrap_or_else(|| "ok".into()),
                }),
            }
        }
        EqCmd::Quotient { sub } => {
            let h = sub_arg(p, sub)?;
            let q = Quotient { pair: p, algebra: &s.bundle.algebra, sub: h };
            let arrows = q.arrows().ok_or(crate::pair::PairError::NotFinite)?;
            Outcome::data(json!({
                "arrows": arrows.iter().map(|x| s.bundle.arrow_to_json(p, x)).collect::<Vec<_>>(),
            }))
        }
        EqCmd::Check => {
            let suites = check::eq_suite(s, c.triples, c.singles, &mut suite_rng(seed, 0));
            Outcome::report(Report::new(seed, suites))
        }
    })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    check::set_tolerance(cfg.tol);
    let inst = load_instance(cfg)?;
    let counts = Counts::new(cfg.samples);
    Ok(match &cfg.command {
        Command::Pair(PairCmd::Info { elems }) => {
            let v = match &inst {
                Instance::BsLine(s) => {
                    let mut es = vec![BsElem::int(1, 0), BsElem::int(0, 1)];
                    for e in elems {
                        es.push(elem(&s.pair, e)?);
                    }
                    pair_info(&s.pair, &es)?
                }
                _ => with_setting!(&inst, s => {
                    let es = elems.iter().map(|e| elem(&s.pair, e)).collect::<Result<Vec<_>, _>>()?;
                    pair_info(&s.pair, &es)?
                }),
            };
            Outcome::data(v)
        }
        Command::Hecke(c) => Outcome::data(with_setting!(&inst, s => hecke_cmd(&s.pair, c)?)),
        Command::Xp(c) => Outcome::data(with_setting!(&inst, s => xp_cmd(s, c)?)),
        Command::Rep(c) => with_setting!(&inst, s => rep_cmd(s, c, cfg.seed)?),
        Command::Lln(c) => Outcome::data(with_setting!(&inst, s => lln_cmd(s, c)?)),
        Command::Svn(SvnCmd::Run) => Outcome::report(svn_run(&inst, cfg.seed)?),
        Command::Eq(c) => eq_cmd(&inst, c, cfg.seed, counts)?,
        Command::Check(CheckCmd::All) => Outcome::report(check_all(&inst, cfg.seed, counts)?),
    })
}

fn init_threads() {
    if let Some(n) = std::env::var("HECKEX_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Ignored if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses arguments, runs, writes output; returns the process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    init_threads();
    match run(&cfg) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.value).expect("JSON values serialize") + "\n";
            let written = match &cfg.out {
                Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
                Ok(()) if out.passed => 0,
                Ok(()) => 1,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
