use std::fs;
use std::panic;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use freeloci::algebra::{algebra_dim, find_invariant_subspace, nilpotent_flag_basis};
use freeloci::decompose::{BlockKind, DEFAULT_SIZE_CAP};
use freeloci::rational::{fmt_rational, serde_q};
use freeloci::spectra::{hair_span_estimate, matrix_from_json, CMatrix};
use freeloci::{
    block_triangularize, boundary_sample, classify_point, complementary_invariant, det_generic, factor,
    fl_minimal_blocks, higman_linearize, is_atom, is_irreducible_pencil, is_jointly_nilpotent, is_minimal,
    locus_equal, minimal_pencil, minimize, pencil_similar, smooth_density_experiment, Error, HPencil,
    InvariantSearch, LocusComparison, MatrixTuple, MonicPencil, NCPoly, PerturbationData, QMatrix, QVector,
    Realization, Subspace,
};

/// Version of the JSON payload schemas documented in `docs/schemas.md`.
const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "freeloci",
    version = concat!(env!("CARGO_PKG_VERSION"), " (schema 1)"),
    about = "Factorization of noncommutative polynomials and free loci of monic pencils"
)]
struct Cli {
    /// Seed for every randomized search; echoed in the output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print a JSON CommandResult instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Factor a polynomial into atoms (`@file` reads the polynomial from a file).
    Factor { poly: String },
    /// Decide whether two polynomials have the same free locus.
    LocusEq { poly1: String, poly2: String },
    /// Decide whether a polynomial is an atom.
    Atom { poly: String },
    /// Higman linearization of a polynomial with f(0) = 1.
    Linearize { poly: String },
    /// Minimize a realization given as JSON.
    Minimize { realization: String },
    /// Test a monic pencil for irreducibility.
    PencilIrreducible { pencil: String },
    /// Block triangular form and free-locus-minimal blocks of a pencil.
    PencilDecompose { pencil: String },
    /// Search for P with P·L₁·P⁻¹ = L₂.
    PencilSimilar { pencil1: String, pencil2: String },
    /// Test a matrix tuple for joint nilpotency.
    Nilpotent { tuple: String },
    /// Determinant of a pencil at generic n×n matrices.
    DetGeneric {
        pencil: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        cap: usize,
    },
    /// Complement of an invariant subspace of a rank-one perturbation.
    PerturbComplement { data: String },
    /// Numeric experiments on hermitian pencils.
    Spectra {
        #[command(subcommand)]
        cmd: SpectraCmd,
    },
}

#[derive(Subcommand)]
enum SpectraCmd {
    /// Boundary points along random rays.
    Sample {
        pencil: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Classify one point of the boundary.
    Classify { pencil: String, point: String },
    /// Fraction of boundary samples with a one-dimensional kernel.
    Density {
        pencil: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Dimension of the span of hair vectors.
    Hair {
        pencil: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Status {
    Ok,
    NeedsExtension,
    Error,
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: f64,
}

#[derive(Serialize)]
struct CommandResult {
    schema: u32,
    status: Status,
    payload: Value,
    seed: u64,
    timing: Timing,
}

struct Outcome {
    status: Status,
    payload: Value,
    summary: String,
}

impl Outcome {
    fn ok(payload: Value, summary: String) -> Self {
        Outcome { status: Status::Ok, payload, summary }
    }
}

enum Failure {
    Parse(String),
    Precondition(String),
    NeedsExtension(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::NeedsExtension(_) => 4,
            Failure::Internal(_) => 5,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Parse(_) => "parse",
            Failure::Precondition(_) => "precondition",
            Failure::NeedsExtension(_) => "needs-extension",
            Failure::Internal(_) => "internal",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Precondition(m) | Failure::NeedsExtension(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Parse(_) => Failure::Parse(msg),
            Error::Dimension(_) | Error::VariableCount(..) | Error::SizeCap { .. } | Error::Precondition(_) => {
                Failure::Precondition(msg)
            }
            Error::NeedsExtension(_) => Failure::NeedsExtension(msg),
            Error::Internal(_) => Failure::Internal(msg),
        }
    }
}

type Run = Result<Outcome, Failure>;

fn read_file(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("cannot read {path}: {e}")))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, Failure> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{path}: {e}")))
}

fn read_poly(arg: &str) -> Result<NCPoly, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => read_file(path)?,
        None => arg.to_string(),
    };
    Ok(NCPoly::parse(text.trim())?)
}

fn read_polys(a: &str, b: &str) -> Result<(NCPoly, NCPoly), Failure> {
    let (f1, f2) = (read_poly(a)?, read_poly(b)?);
    let g = f1.g().max(f2.g());
    Ok((f1.with_g(g)?, f2.with_g(g)?))
}

fn mat_json(m: &QMatrix) -> Value {
    Value::Array(
        m.to_rows().iter().map(|r| Value::Array(r.iter().map(|x| Value::String(fmt_rational(x))).collect())).collect(),
    )
}

fn vecs_json(vs: &[QVector]) -> Value {
    Value::Array(vs.iter().map(|v| Value::Array(v.iter().map(|x| Value::String(fmt_rational(x))).collect())).collect())
}

fn to_value<T: Serialize>(t: &T) -> Result<Value, Failure> {
    serde_json::to_value(t).map_err(|e| Failure::Internal(e.to_string()))
}

fn render_rows(m: &QMatrix) -> String {
    m.to_rows()
        .iter()
        .map(|r| format!("  [{}]", r.iter().map(fmt_rational).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join("\n")
}

fn cmd_factor(poly: &str, seed: u64) -> Run {
    let f = read_poly(poly)?;
    let fz = factor(&f, seed)?;
    let mut summary = fz.factors.iter().map(|p| format!("({p})")).collect::<Vec<_>>().join(" * ");
    if fz.unit != num_one() {
        summary = format!("{} * {summary}", fmt_rational(&fz.unit));
    }
    let status = if fz.complete { Status::Ok } else { Status::NeedsExtension };
    if !fz.complete {
        summary.push_str("\nthe first factor may still be reducible over an extension field");
    }
    Ok(Outcome { status, payload: to_value(&fz)?, summary })
}

fn num_one() -> freeloci::Rational {
    freeloci::rational::one()
}

fn cmd_locus_eq(a: &str, b: &str, seed: u64) -> Run {
    let (f1, f2) = read_polys(a, b)?;
    Ok(match locus_equal(&f1, &f2, seed)? {
        LocusComparison::Equal => Outcome::ok(json!({ "equal": true }), "Equal".into()),
        LocusComparison::NotEqual { witness } => {
            let summary = match &witness {
                Some(w) => format!("NotEqual (witness of size {})", w.n()),
                None => "NotEqual (no small witness found)".into(),
            };
            Outcome::ok(json!({ "equal": false, "witness": to_value(&witness)? }), summary)
        }
    })
}

fn cmd_atom(poly: &str) -> Run {
    let f = read_poly(poly)?;
    let atom = is_atom(&f)?;
    let size = minimal_pencil(&f)?.map(|l| l.d());
    let summary = if atom { "atom" } else { "not an atom" };
    Ok(Outcome::ok(json!({ "atom": atom, "minimal_pencil_size": size }), summary.into()))
}

fn cmd_linearize(poly: &str) -> Run {
    let f = read_poly(poly)?;
    let l = higman_linearize(&f)?;
    let summary = format!("monic pencil of size {} in {} variables", l.d(), l.g());
    Ok(Outcome::ok(json!({ "size": l.d(), "pencil": to_value(&l)? }), summary))
}

fn cmd_minimize(path: &str) -> Run {
    let r: Realization = read_json(path)?;
    let before = is_minimal(&r);
    let m = minimize(&r);
    let after = is_minimal(&m);
    let summary = format!("size {} -> {}", r.d(), m.d());
    Ok(Outcome::ok(
        json!({ "before": to_value(&before)?, "after": to_value(&after)?, "realization": to_value(&m)? }),
        summary,
    ))
}

fn cmd_pencil_irreducible(path: &str, seed: u64) -> Run {
    let l: MonicPencil = read_json(path)?;
    let dim = algebra_dim(l.coeffs());
    if is_irreducible_pencil(&l) {
        let summary = format!("irreducible (algebra dimension {dim})");
        return Ok(Outcome::ok(json!({ "irreducible": true, "algebra_dim": dim }), summary));
    }
    Ok(match find_invariant_subspace(l.coeffs(), seed) {
        InvariantSearch::Subspace(s) => Outcome::ok(
            json!({ "irreducible": false, "algebra_dim": dim, "invariant_subspace": vecs_json(&s.basis_vectors()) }),
            format!("reducible (algebra dimension {dim}); invariant subspace of dimension {}", s.dim()),
        ),
        InvariantSearch::NeedsExtension => Outcome {
            status: Status::NeedsExtension,
            payload: json!({ "irreducible": false, "algebra_dim": dim, "invariant_subspace": null }),
            summary: format!("reducible (algebra dimension {dim}); no rational invariant subspace found"),
        },
        InvariantSearch::Irreducible => return Err(Failure::Internal("inconsistent irreducibility tests".into())),
    })
}

fn cmd_pencil_decompose(path: &str, seed: u64) -> Run {
    let l: MonicPencil = read_json(path)?;
    let dec = block_triangularize(&l, seed);
    let minimal = if dec.complete { Some(fl_minimal_blocks(&l, seed)?) } else { None };
    let kinds: Vec<String> = dec
        .blocks
        .iter()
        .map(|(b, k)| {
            let tag = match k {
                BlockKind::Identity => "identity",
                BlockKind::Irreducible => "irreducible",
                BlockKind::Unresolved => "unresolved",
            };
            format!("{}:{tag}", b.d())
        })
        .collect();
    let mut summary = format!("blocks {}", kinds.join(" "));
    if let Some(m) = &minimal {
        summary.push_str(&format!("\nfree-locus-minimal blocks: {}", m.len()));
    }
    let status = if dec.complete { Status::Ok } else { Status::NeedsExtension };
    Ok(Outcome { status, payload: json!({ "decomposition": to_value(&dec)?, "fl_minimal": to_value(&minimal)? }), summary })
}

fn cmd_pencil_similar(a: &str, b: &str) -> Run {
    let l1: MonicPencil = read_json(a)?;
    let l2: MonicPencil = read_json(b)?;
    Ok(match pencil_similar(&l1, &l2) {
        Some(p) => Outcome::ok(json!({ "similar": true, "P": mat_json(&p) }), format!("similar, P =\n{}", render_rows(&p))),
        None => Outcome::ok(json!({ "similar": false, "P": null }), "none".into()),
    })
}

fn cmd_nilpotent(path: &str) -> Run {
    let t: MatrixTuple = read_json(path)?;
    let nil = is_jointly_nilpotent(&t);
    let flag = nilpotent_flag_basis(&t);
    let summary = if nil { "jointly nilpotent" } else { "not jointly nilpotent" };
    Ok(Outcome::ok(json!({ "nilpotent": nil, "flag_basis": flag.as_ref().map(mat_json) }), summary.into()))
}

fn cmd_det_generic(path: &str, n: usize, cap: usize) -> Run {
    let l: MonicPencil = read_json(path)?;
    let p = det_generic(&l, n, cap)?;
    let degree = p.degree().unwrap_or(0);
    let s = p.to_string();
    let summary = format!("degree {degree}, {} terms\n{s}", p.num_terms());
    Ok(Outcome::ok(json!({ "n": n, "degree": degree, "terms": p.num_terms(), "polynomial": s }), summary))
}

fn cmd_perturb_complement(path: &str, seed: u64) -> Run {
    let mut v: Value = read_json(path)?;
    let s_json = v
        .as_object_mut()
        .and_then(|o| o.remove("S"))
        .ok_or_else(|| Failure::Parse(format!("{path}: missing field `S` (basis of the invariant subspace)")))?;
    let data: PerturbationData = serde_json::from_value(v).map_err(|e| Failure::Parse(format!("{path}: {e}")))?;
    let rows = s_json.as_array().ok_or_else(|| Failure::Parse("`S` must be a list of vectors".into()))?;
    let mut basis = Vec::with_capacity(rows.len());
    for r in rows {
        let entries = r.as_array().ok_or_else(|| Failure::Parse("`S` must be a list of vectors".into()))?;
        let vec: Result<QVector, String> = entries.iter().map(serde_q::value_to_rational).collect();
        basis.push(vec.map_err(Failure::Parse)?);
    }
    if basis.iter().any(|b| b.len() != data.d()) {
        return Err(Failure::Precondition("vectors of `S` must have length d".into()));
    }
    let s = Subspace::from_vectors(data.d(), &basis);
    let comp = complementary_invariant(&data, &s, seed)?;
    let vecs = comp.basis_vectors();
    let summary = format!(
        "complement of dimension {}:\n{}",
        comp.dim(),
        vecs.iter().map(|v| format!("  ({})", v.iter().map(fmt_rational).collect::<Vec<_>>().join(", "))).collect::<Vec<_>>().join("\n")
    );
    Ok(Outcome::ok(json!({ "complement": vecs_json(&vecs) }), summary))
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(serde::Deserialize)]
struct PointJson {
    matrices: Vec<Vec<Vec<Entry>>>,
}

fn read_point(path: &str) -> Result<Vec<CMatrix>, Failure> {
    let p: PointJson = read_json(path)?;
    p.matrices
        .iter()
        .map(|m| {
            let rows: Vec<Vec<[f64; 2]>> = m
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|e| match e {
                            Entry::Real(x) => [*x, 0.0],
                            Entry::Complex(z) => *z,
                        })
                        .collect()
                })
                .collect();
            matrix_from_json(&rows).map_err(Failure::from)
        })
        .collect()
}

fn cmd_spectra(cmd: &SpectraCmd, seed: u64) -> Run {
    match cmd {
        SpectraCmd::Sample { pencil, n, count } => {
            let l: HPencil = read_json(pencil)?;
            let s = boundary_sample(&l, *n, *count, seed)?;
            let smooth = s.points.iter().filter(|p| p.class.smooth).count();
            let summary = format!("{} boundary points from {count} rays, {smooth} smooth", s.points.len());
            Ok(Outcome::ok(to_value(&s)?, summary))
        }
        SpectraCmd::Classify { pencil, point } => {
            let l: HPencil = read_json(pencil)?;
            let xs = read_point(point)?;
            let c = classify_point(&l, &xs)?;
            let summary = format!(
                "kernel_dim {}, alg_multiplicity {}, {}",
                c.kernel_dim,
                c.alg_multiplicity,
                if c.smooth { "smooth" } else { "singular" }
            );
            Ok(Outcome::ok(to_value(&c)?, summary))
        }
        SpectraCmd::Density { pencil, n, samples } => {
            let l: HPencil = read_json(pencil)?;
            let r = smooth_density_experiment(&l, *n, *samples, seed)?;
            let summary = format!("kernel_dim = 1 fraction {:.4}", r.fraction);
            Ok(Outcome::ok(to_value(&r)?, summary))
        }
        SpectraCmd::Hair { pencil, n, samples } => {
            let l: HPencil = read_json(pencil)?;
            let r = hair_span_estimate(&l, *n, *samples, seed)?;
            let summary = format!("hair span dimension {} from {} points", r.dimension, r.points_used);
            Ok(Outcome::ok(to_value(&r)?, summary))
        }
    }
}

fn run(cli: &Cli) -> Run {
    let seed = cli.seed;
    match &cli.cmd {
        Cmd::Factor { poly } => cmd_factor(poly, seed),
        Cmd::LocusEq { poly1, poly2 } => cmd_locus_eq(poly1, poly2, seed),
        Cmd::Atom { poly } => cmd_atom(poly),
        Cmd::Linearize { poly } => cmd_linearize(poly),
        Cmd::Minimize { realization } => cmd_minimize(realization),
        Cmd::PencilIrreducible { pencil } => cmd_pencil_irreducible(pencil, seed),
        Cmd::PencilDecompose { pencil } => cmd_pencil_decompose(pencil, seed),
        Cmd::PencilSimilar { pencil1, pencil2 } => cmd_pencil_similar(pencil1, pencil2),
        Cmd::Nilpotent { tuple } => cmd_nilpotent(tuple),
        Cmd::DetGeneric { pencil, n, cap } => cmd_det_generic(pencil, *n, *cap),
        Cmd::PerturbComplement { data } => cmd_perturb_complement(data, seed),
        Cmd::Spectra { cmd } => cmd_spectra(cmd, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    panic::set_hook(Box::new(|_| {}));
    let result = panic::catch_unwind(panic::AssertUnwindSafe(|| run(&cli))).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(Failure::Internal(msg))
    });
    let timing = Timing { elapsed_ms: start.elapsed().as_secs_f64() * 1e3 };
    let (status, payload, code) = match &result {
        Ok(o) => (o.status, o.payload.clone(), if o.status == Status::NeedsExtension { 4 } else { 0 }),
        Err(f) => (Status::Error, json!({ "kind": f.kind(), "message": f.message() }), f.code()),
    };
    if cli.json {
        let out = CommandResult { schema: SCHEMA_VERSION, status, payload, seed: cli.seed, timing };
        println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    } else {
        match &result {
            Ok(o) => println!("{}", o.summary),
            Err(f) => eprintln!("error ({}): {}", f.kind(), f.message()),
        }
        println!("seed: {}", cli.seed);
    }
    ExitCode::from(code)
}
