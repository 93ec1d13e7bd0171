//! Command implementations behind the `maj` binary.
//!
//! Every command returns an [`Outcome`] instead of printing, so the same code
//! paths are exercised by the binary, the examples and the tests.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::{
    gaussian_matrix, probabilities, random_density_with, random_unitary_with, rng_from_seed, validate_tpcp,
    DensityMatrix, KrausSet, TPCP_TOL,
};
use crate::entropy::{bound_report, renyi, tsallis, EntropyFamily, EntropyQuery, LogBase};
use crate::error::Error;
use crate::linalg::ComplexMatrix;
use crate::majorization::{
    direct_sum, direct_sum_omega, majorizes, nonempty_subsets, overlap_unitary, pair_ck_sequence,
    partial_sum_extremum, projectors_from_basis, single_op_ck, single_op_ck_literal, single_op_omega,
    tensor_omega, tensor_product, unitary_sk, with_leading_one, MajorizingVector, NormSequence,
};
use crate::qubit::{figure_curve, uniform_grid, DEFAULT_GRID};

pub const SCHEMA_VERSION: &str = "1";

/// Slack below which a sampled inequality counts as violated.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Entropy orders checked by `verify`.
pub const VERIFY_ALPHAS: [f64; 4] = [0.2, 0.5, 1.0, 2.0];

/// Subset pairs are enumerated exhaustively up to this many operators per side.
pub const MAX_SUBSET_OPERATORS: usize = 8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_VIOLATION: i32 = 5;

/// Exit code plus captured output of one command.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Domain(String),
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    Io { path: PathBuf, message: String },
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Parse { .. } => EXIT_PARSE,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(m) => write!(f, "error: {m}"),
            CliError::Parse {
                path,
                line,
                column,
                message,
            } => write!(f, "parse error in {} at line {line}, column {column}: {message}", path.display()),
            CliError::Io { path, message } => write!(f, "I/O error on {}: {message}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<CliError> for Outcome {
    fn from(e: CliError) -> Self {
        Outcome {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("{e}\n"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn finish(r: CliResult<Outcome>) -> Outcome {
    r.unwrap_or_else(Outcome::from)
}

/// Matrix as rows of `[re, im]` pairs.
pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<ComplexMatrix, Error> {
    let rows = rows
        .iter()
        .map(|row| row.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
        .collect();
    ComplexMatrix::from_rows(rows)
}

/// On-disk form of a Kraus set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<JsonMatrix>,
}

impl ChannelFile {
    pub fn from_kraus(k: &KrausSet) -> Self {
        Self {
            dim_in: k.dim(),
            dim_out: k.dim(),
            kraus: k.operators().iter().map(matrix_to_json).collect(),
        }
    }

    /// Operators after shape checks, without the completeness check.
    pub fn operators(&self) -> Result<Vec<ComplexMatrix>, Error> {
        if self.dim_in != self.dim_out {
            return Err(Error::InvalidInput(format!(
                "dim_in {} != dim_out {}: only square operators are supported",
                self.dim_in, self.dim_out
            )));
        }
        if self.kraus.is_empty() {
            return Err(Error::InvalidInput("channel has no Kraus operators".into()));
        }
        self.kraus
            .iter()
            .enumerate()
            .map(|(i, rows)| {
                let m = matrix_from_json(rows)?;
                if m.shape() != (self.dim_out, self.dim_in) {
                    return Err(Error::shape(
                        format!("{}x{}", self.dim_out, self.dim_in),
                        format!("{}x{} (operator {i})", m.rows(), m.cols()),
                    ));
                }
                Ok(m)
            })
            .collect()
    }

    pub fn to_kraus(&self) -> Result<KrausSet, Error> {
        KrausSet::new(self.operators()?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryFile {
    pub dim: usize,
    pub matrix: JsonMatrix,
}

impl UnitaryFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.rows(),
            matrix: matrix_to_json(m),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, Error> {
        let m = matrix_from_json(&self.matrix)?;
        if m.shape() != (self.dim, self.dim) {
            return Err(Error::shape(format!("{0}x{0}", self.dim), format!("{}x{}", m.rows(), m.cols())));
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn load_channel(path: &Path) -> CliResult<KrausSet> {
    Ok(read_json::<ChannelFile>(path)?.to_kraus()?)
}

/// Parses an angle in radians: a float, `pi`, `pi/n`, `kpi/n` or `k*pi/n`,
/// optionally signed.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return if v.is_finite() { Ok(v) } else { Err(format!("angle {s:?} is not finite")) };
    }
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let coef = num
        .strip_suffix("pi")
        .ok_or_else(|| format!("cannot parse angle {s:?}"))?
        .trim_end_matches('*');
    let coef: f64 = if coef.is_empty() {
        1.0
    } else {
        coef.parse().map_err(|_| format!("cannot parse angle {s:?}"))?
    };
    let den: f64 = match den {
        Some(d) => d.parse().map_err(|_| format!("cannot parse angle {s:?}"))?,
        None => 1.0,
    };
    if den == 0.0 || !coef.is_finite() || !den.is_finite() {
        return Err(format!("cannot parse angle {s:?}"));
    }
    Ok(sign * coef * std::f64::consts::PI / den)
}

/// Six-decimal fixed point without negative zero.
pub fn fixed6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn join6(v: &[f64]) -> String {
    v.iter().map(|x| fixed6(*x)).collect::<Vec<_>>().join(" ")
}

fn json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("plain data") + "\n"
}

#[derive(Debug, Parser)]
#[command(name = "maj", version, about = "Majorization entropic uncertainty bounds for quantum operations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the completeness relation of a channel file.
    Validate { file: PathBuf },
    /// Norm sequence, majorizing vectors and entropic bounds for two channels.
    Bounds(BoundsArgs),
    /// Write qubit curve data (direct-sum and Maassen-Uffink bounds) as CSV.
    Curve(CurveArgs),
    /// Sample random states and check every relation.
    Verify(VerifyArgs),
    /// Compare c_k of two projective bases with s_k of their overlap matrix.
    Equivalence(EquivalenceArgs),
    /// Single-operation majorizing vector.
    Single(SingleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value = "renyi")]
    pub family: EntropyFamily,
    #[arg(long, default_value = "2")]
    pub base: LogBase,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub angle: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct EquivalenceSource {
    #[arg(long, requires = "seed")]
    pub dim: Option<usize>,
    #[arg(long)]
    pub unitary: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EquivalenceArgs {
    #[command(flatten)]
    pub source: EquivalenceSource,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct SingleArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Bounds(a) => cmd_bounds(&a),
        Command::Curve(a) => cmd_curve(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Equivalence(a) => cmd_equivalence(&a),
        Command::Single(a) => cmd_single(&a),
    }
}

pub fn cmd_validate(path: &Path) -> Outcome {
    finish((|| {
        let operators = read_json::<ChannelFile>(path)?.operators()?;
        let report = validate_tpcp(&operators, TPCP_TOL)?;
        let text = format!(
            "{}: {} operator(s), dimension {}, max deviation {:e}, {}\n",
            path.display(),
            operators.len(),
            operators[0].rows(),
            report.max_deviation,
            if report.passed { "trace preserving" } else { "NOT trace preserving" }
        );
        Ok(if report.passed {
            Outcome::ok(text)
        } else {
            Outcome {
                code: EXIT_DOMAIN,
                stdout: text,
                stderr: format!("error: completeness relation violated (max deviation {:e})\n", report.max_deviation),
            }
        })
    })())
}

#[derive(Debug, Serialize)]
struct BoundsInputs {
    a: String,
    b: String,
    alpha: f64,
    family: EntropyFamily,
    base: String,
}

#[derive(Debug, Serialize)]
struct BoundsObject {
    #[serde(skip_serializing_if = "Option::is_none")]
    renyi_direct_sum: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    renyi_direct_sum_alpha_gt1: Option<f64>,
    renyi_tensor: f64,
    tsallis_direct_sum: f64,
    mu_bound: f64,
    best_applicable: f64,
    units: LogBase,
}

#[derive(Debug, Serialize)]
struct BoundsDiagnostics {
    /// Slacks of both relations on the maximally mixed state.
    maximally_mixed_direct_sum_slack: f64,
    maximally_mixed_tensor_slack: f64,
    /// Smallest `bound - achieved_max` over all subset pairs, when enumerated.
    #[serde(skip_serializing_if = "Option::is_none")]
    min_saturation_gap: Option<f64>,
    subset_pairs_checked: usize,
}

/// JSON document written by `maj bounds --json`.
#[derive(Debug, Serialize)]
pub struct ReportDocument {
    schema_version: &'static str,
    inputs: BoundsInputs,
    c_sequence: NormSequence,
    omega: MajorizingVector,
    omega_prime: MajorizingVector,
    bounds: BoundsObject,
    diagnostics: BoundsDiagnostics,
}

/// Minimum saturation gap over every pair of non-empty index subsets, or
/// `None` when either operation has too many operators to enumerate.
fn min_saturation_gap(ka: &KrausSet, kb: &KrausSet) -> CliResult<(Option<f64>, usize)> {
    if ka.len() > MAX_SUBSET_OPERATORS || kb.len() > MAX_SUBSET_OPERATORS {
        return Ok((None, 0));
    }
    let (si, sj) = (nonempty_subsets(ka.len()), nonempty_subsets(kb.len()));
    let mut worst = f64::INFINITY;
    for i in &si {
        for j in &sj {
            worst = worst.min(partial_sum_extremum(ka, kb, i, j)?.saturation_gap);
        }
    }
    Ok((Some(worst), si.len() * sj.len()))
}

pub fn bounds_document(args: &BoundsArgs) -> CliResult<ReportDocument> {
    let ka = load_channel(&args.a)?;
    let kb = load_channel(&args.b)?;
    if ka.dim() != kb.dim() {
        return Err(CliError::Domain(format!(
            "channel dimensions differ: {} vs {}",
            ka.dim(),
            kb.dim()
        )));
    }
    let query = EntropyQuery::new(args.alpha, args.family, args.base)?;
    let r = bound_report(&ka, &kb, query)?;

    let mixed = DensityMatrix::maximally_mixed(ka.dim())?;
    let (p, q) = (probabilities(&ka, &mixed)?, probabilities(&kb, &mixed)?);
    let ds = majorizes(&with_leading_one(&r.omega), &direct_sum(&p, &q), VIOLATION_TOL);
    let tp = majorizes(&r.omega_prime.entries, &tensor_product(&p, &q), VIOLATION_TOL);
    let (gap, pairs) = min_saturation_gap(&ka, &kb)?;

    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        inputs: BoundsInputs {
            a: args.a.display().to_string(),
            b: args.b.display().to_string(),
            alpha: args.alpha,
            family: args.family,
            base: args.base.to_string(),
        },
        c_sequence: r.c_sequence,
        omega: r.omega,
        omega_prime: r.omega_prime,
        bounds: BoundsObject {
            renyi_direct_sum: r.renyi_direct_sum,
            renyi_direct_sum_alpha_gt1: r.renyi_direct_sum_alpha_gt1,
            renyi_tensor: r.renyi_tensor,
            tsallis_direct_sum: r.tsallis_direct_sum,
            mu_bound: r.mu_bound,
            best_applicable: r.best_applicable,
            units: r.units,
        },
        diagnostics: BoundsDiagnostics {
            maximally_mixed_direct_sum_slack: ds.min_slack,
            maximally_mixed_tensor_slack: tp.min_slack,
            min_saturation_gap: gap,
            subset_pairs_checked: pairs,
        },
    })
}

fn bounds_text(d: &ReportDocument) -> String {
    let unit = d.bounds.units.unit();
    let mut s = String::new();
    let mut line = |label: &str, value: String| {
        let _ = writeln!(s, "{label:<28}{value}");
    };
    line("alpha", format!("{}", d.inputs.alpha));
    line("family", d.inputs.family.to_string());
    line("c_k", join6(&d.c_sequence.values));
    line("omega", join6(&d.omega.entries));
    line("omega'", join6(&d.omega_prime.entries));
    if let Some(v) = d.bounds.renyi_direct_sum {
        line("renyi direct-sum", format!("{} {unit}", fixed6(v)));
    }
    if let Some(v) = d.bounds.renyi_direct_sum_alpha_gt1 {
        line("renyi direct-sum (alpha>1)", format!("{} {unit}", fixed6(v)));
    }
    line("renyi tensor", format!("{} {unit}", fixed6(d.bounds.renyi_tensor)));
    line("tsallis direct-sum", fixed6(d.bounds.tsallis_direct_sum));
    line("maassen-uffink", format!("{} {unit}", fixed6(d.bounds.mu_bound)));
    let best_unit = if d.inputs.family == EntropyFamily::Tsallis { "" } else { unit };
    line("best applicable", format!("{} {best_unit}", fixed6(d.bounds.best_applicable)).trim_end().to_string());
    s
}

pub fn cmd_bounds(args: &BoundsArgs) -> Outcome {
    finish(bounds_document(args).map(|d| Outcome::ok(if args.json { json(&d) } else { bounds_text(&d) })))
}

/// CSV text for a curve, header included.
pub fn curve_csv(angle: f64, alpha: f64, grid: usize) -> Result<String, Error> {
    let rows = figure_curve(angle, alpha, &uniform_grid(grid)?)?;
    let mut s = String::from("b,majorization_bound,mu_bound\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{}", fixed6(r.b), fixed6(r.majorization_bound), fixed6(r.mu_bound));
    }
    Ok(s)
}

pub fn cmd_curve(args: &CurveArgs) -> Outcome {
    finish((|| {
        let csv = curve_csv(args.angle, args.alpha, args.grid)?;
        fs::write(&args.out, &csv).map_err(|e| CliError::Io {
            path: args.out.clone(),
            message: e.to_string(),
        })?;
        Ok(Outcome::ok(format!("wrote {} rows to {}\n", args.grid, args.out.display())))
    })())
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropySlack {
    pub family: EntropyFamily,
    pub alpha: f64,
    pub bound: f64,
    pub min_slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub sample: usize,
    pub check: String,
    pub slack: f64,
    pub state: JsonMatrix,
}

/// JSON document written by `maj verify`.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema_version: &'static str,
    pub mode: &'static str,
    pub samples: usize,
    pub seed: u64,
    pub c_sequence: NormSequence,
    pub omega: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_prime: Option<Vec<f64>>,
    pub min_direct_sum_slack: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_tensor_slack: Option<f64>,
    pub entropy: Vec<EntropySlack>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_saturation_gap: Option<f64>,
    pub subset_pairs_checked: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
}

/// Sample `i` of a verification run: odd samples are pure, even samples are
/// Hilbert-Schmidt mixed states.
fn sample_state(i: usize, dim: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Result<DensityMatrix, Error> {
    if i % 2 == 1 {
        let g = gaussian_matrix(dim, 1, rng);
        let norm = g.frobenius_norm();
        let psi: Vec<Complex64> = g.column(0).iter().map(|z| z / norm).collect();
        DensityMatrix::pure(&psi)
    } else {
        random_density_with(dim, rng)
    }
}

struct Tracker {
    worst: f64,
}

impl Tracker {
    fn new() -> Self {
        Self { worst: f64::INFINITY }
    }
}

fn record(t: &mut Tracker, slack: f64, sample: usize, check: &str, rho: &DensityMatrix, first: &mut Option<Violation>) {
    t.worst = t.worst.min(slack);
    if (slack < -VIOLATION_TOL || slack.is_nan()) && first.is_none() {
        *first = Some(Violation {
            sample,
            check: check.to_string(),
            slack,
            state: matrix_to_json(rho.matrix()),
        });
    }
}

pub fn verify_report(args: &VerifyArgs) -> CliResult<VerifyReport> {
    let ka = load_channel(&args.a)?;
    match &args.b {
        Some(b) => {
            let kb = load_channel(b)?;
            if ka.dim() != kb.dim() {
                return Err(CliError::Domain(format!(
                    "channel dimensions differ: {} vs {}",
                    ka.dim(),
                    kb.dim()
                )));
            }
            verify_pair(&ka, &kb, args.samples, args.seed)
        }
        None => verify_single(&ka, args.samples, args.seed),
    }
}

/// Samples `samples` states and checks both majorization relations, the
/// Rényi and Tsallis bounds over [`VERIFY_ALPHAS`], and the subset-pair norm
/// bound. Stops at the first violation.
pub fn verify_pair(ka: &KrausSet, kb: &KrausSet, samples: usize, seed: u64) -> CliResult<VerifyReport> {
    let c = pair_ck_sequence(ka, kb)?;
    let omega = direct_sum_omega(&c);
    let omega_prime = tensor_omega(&c);
    let lead = with_leading_one(&omega);
    let bounds: Vec<(EntropyFamily, f64, f64)> = VERIFY_ALPHAS
        .iter()
        .flat_map(|&a| [(EntropyFamily::Renyi, a), (EntropyFamily::Tsallis, a)])
        .map(|(family, alpha)| {
            let q = EntropyQuery::new(alpha, family, LogBase::Two)?;
            Ok((family, alpha, bound_report(ka, kb, q)?.best_applicable))
        })
        .collect::<Result<_, Error>>()?;

    let mut rng = rng_from_seed(seed);
    let mut ds = Tracker::new();
    let mut tp = Tracker::new();
    let mut ent: Vec<Tracker> = bounds.iter().map(|_| Tracker::new()).collect();
    let mut violation = None;
    for i in 0..samples {
        let rho = sample_state(i, ka.dim(), &mut rng)?;
        let p = probabilities(ka, &rho)?;
        let q = probabilities(kb, &rho)?;
        let s = majorizes(&lead, &direct_sum(&p, &q), VIOLATION_TOL);
        record(&mut ds, s.min_slack, i, "direct_sum", &rho, &mut violation);
        let s = majorizes(&omega_prime.entries, &tensor_product(&p, &q), VIOLATION_TOL);
        record(&mut tp, s.min_slack, i, "tensor", &rho, &mut violation);
        for ((family, alpha, bound), t) in bounds.iter().zip(ent.iter_mut()) {
            let sum = match family {
                EntropyFamily::Renyi => renyi(&p, *alpha, LogBase::Two)? + renyi(&q, *alpha, LogBase::Two)?,
                EntropyFamily::Tsallis => tsallis(&p, *alpha)? + tsallis(&q, *alpha)?,
            };
            record(t, sum - bound, i, &format!("{family} alpha={alpha}"), &rho, &mut violation);
        }
        if violation.is_some() {
            break;
        }
    }

    let (gap, pairs) = min_saturation_gap(ka, kb)?;
    if let Some(g) = gap {
        if g < -VIOLATION_TOL && violation.is_none() {
            violation = Some(Violation {
                sample: 0,
                check: "subset_pair_bound".into(),
                slack: g,
                state: Vec::new(),
            });
        }
    }

    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        mode: "pair",
        samples,
        seed,
        c_sequence: c,
        omega: omega.entries,
        omega_prime: Some(omega_prime.entries),
        min_direct_sum_slack: ds.worst,
        min_tensor_slack: Some(tp.worst),
        entropy: bounds
            .iter()
            .zip(&ent)
            .map(|(&(family, alpha, bound), t)| EntropySlack {
                family,
                alpha,
                bound,
                min_slack: t.worst,
            })
            .collect(),
        worst_saturation_gap: gap,
        subset_pairs_checked: pairs,
        passed: violation.is_none(),
        violation,
    })
}

/// Single-operation variant: checks `p ≺ omega~` and `H_alpha(p) >= H_alpha(omega~)`.
pub fn verify_single(k: &KrausSet, samples: usize, seed: u64) -> CliResult<VerifyReport> {
    let c = single_op_ck(k)?;
    let omega = single_op_omega(k)?;
    let bounds: Vec<(EntropyFamily, f64, f64)> = VERIFY_ALPHAS
        .iter()
        .map(|&a| Ok((EntropyFamily::Renyi, a, renyi(&omega.entries, a, LogBase::Two)?)))
        .collect::<Result<_, Error>>()?;
    let mut rng = rng_from_seed(seed);
    let mut maj = Tracker::new();
    let mut ent: Vec<Tracker> = bounds.iter().map(|_| Tracker::new()).collect();
    let mut violation = None;
    for i in 0..samples {
        let rho = sample_state(i, k.dim(), &mut rng)?;
        let p = probabilities(k, &rho)?;
        let s = majorizes(&omega.entries, &p, VIOLATION_TOL);
        record(&mut maj, s.min_slack, i, "single_operation", &rho, &mut violation);
        for ((_, alpha, bound), t) in bounds.iter().zip(ent.iter_mut()) {
            let h = renyi(&p, *alpha, LogBase::Two)?;
            record(t, h - bound, i, &format!("renyi alpha={alpha}"), &rho, &mut violation);
        }
        if violation.is_some() {
            break;
        }
    }
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        mode: "single",
        samples,
        seed,
        c_sequence: c,
        omega: omega.entries,
        omega_prime: None,
        min_direct_sum_slack: maj.worst,
        min_tensor_slack: None,
        entropy: bounds
            .iter()
            .zip(&ent)
            .map(|(&(family, alpha, bound), t)| EntropySlack {
                family,
                alpha,
                bound,
                min_slack: t.worst,
            })
            .collect(),
        worst_saturation_gap: None,
        subset_pairs_checked: 0,
        passed: violation.is_none(),
        violation,
    })
}

pub fn cmd_verify(args: &VerifyArgs) -> Outcome {
    finish(verify_report(args).map(|r| {
        let code = if r.passed { EXIT_OK } else { EXIT_VIOLATION };
        let stderr = match &r.violation {
            Some(v) => format!("violation: {} at sample {} (slack {:e})\n", v.check, v.sample, v.slack),
            None => String::new(),
        };
        Outcome {
            code,
            stdout: json(&r),
            stderr,
        }
    }))
}

/// `c_k` of the projective measurements onto two bases next to `s_k` of
/// their overlap matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Equivalence {
    pub c: Vec<f64>,
    pub s: Vec<f64>,
    pub max_difference: f64,
}

/// Compares the sequences for bases given as matrix columns.
pub fn basis_equivalence(e: &ComplexMatrix, f: &ComplexMatrix) -> Result<Equivalence, Error> {
    let w = overlap_unitary(e, f)?;
    let c = pair_ck_sequence(&projectors_from_basis(e)?, &projectors_from_basis(f)?)?;
    let c = c.truncated().to_vec();
    let s = unitary_sk(&w)?.values;
    let max_difference = if c.len() == s.len() {
        c.iter().zip(&s).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(Equivalence { c, s, max_difference })
}

/// Two Haar-random bases of dimension `dim` drawn from one seeded stream.
pub fn random_basis_pair(dim: usize, seed: u64) -> (ComplexMatrix, ComplexMatrix) {
    let mut rng = rng_from_seed(seed);
    let e = random_unitary_with(dim, &mut rng);
    let f = random_unitary_with(dim, &mut rng);
    (e, f)
}

pub fn cmd_equivalence(args: &EquivalenceArgs) -> Outcome {
    finish((|| {
        let (e, f) = match (&args.source.dim, &args.source.unitary) {
            (Some(d), _) => {
                if !(2..=6).contains(d) {
                    return Err(CliError::Domain(format!("--dim must be in 2..=6, got {d}")));
                }
                random_basis_pair(*d, args.seed.unwrap_or(0))
            }
            (None, Some(path)) => {
                let w = read_json::<UnitaryFile>(path)?.to_matrix()?;
                let deviation = w.unitary_deviation();
                if deviation > crate::majorization::BASIS_TOL {
                    return Err(Error::NotUnitary { deviation }.into());
                }
                (ComplexMatrix::identity(w.rows()), w)
            }
            (None, None) => return Err(CliError::Domain("either --dim or --unitary is required".into())),
        };
        let eq = basis_equivalence(&e, &f)?;
        let mut s = format!("{:<4}{:>12}{:>12}\n", "k", "c_k", "s_k");
        for k in 0..eq.c.len().max(eq.s.len()) {
            let cell = |v: Option<&f64>| v.map(|x| fixed6(*x)).unwrap_or_else(|| "-".into());
            let _ = writeln!(s, "{:<4}{:>12}{:>12}", k + 1, cell(eq.c.get(k)), cell(eq.s.get(k)));
        }
        let _ = writeln!(s, "max difference {:e}", eq.max_difference);
        let code = if eq.max_difference <= 1e-9 { EXIT_OK } else { EXIT_VIOLATION };
        Ok(Outcome {
            code,
            stdout: s,
            stderr: String::new(),
        })
    })())
}

pub fn cmd_single(args: &SingleArgs) -> Outcome {
    finish((|| {
        let k = load_channel(&args.a)?;
        let c = single_op_ck(&k)?;
        let literal = single_op_ck_literal(&k)?;
        let omega = single_op_omega(&k)?;
        let nats = renyi(&omega.entries, args.alpha, LogBase::Natural)?;
        let mut s = String::new();
        let _ = writeln!(s, "{:<24}{}", "c~_k (subset sums)", join6(&c.values));
        let _ = writeln!(s, "{:<24}{}", "c~_k (block classes)", join6(&literal.values));
        let _ = writeln!(s, "{:<24}{}", "omega~", join6(&omega.entries));
        let _ = writeln!(s, "{:<24}{} nats", format!("H_{}(omega~)", args.alpha), fixed6(nats));
        let _ = writeln!(s, "{:<24}{} bits", "", fixed6(LogBase::Two.from_nats(nats)));
        Ok(Outcome::ok(s))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("2*pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert!(parse_angle("tau").is_err());
        assert!(parse_angle("pi/0").is_err());
    }

    #[test]
    fn fixed_point_has_no_negative_zero() {
        assert_eq!(fixed6(-1e-12), "0.000000");
        assert_eq!(fixed6(0.5), "0.500000");
        assert_eq!(fixed6(-0.25), "-0.250000");
    }

    #[test]
    fn channel_file_round_trip() {
        let k = crate::channels::random_kraus_set(3, 2, 7).unwrap();
        let text = ChannelFile::from_kraus(&k).to_json();
        let back: ChannelFile = serde_json::from_str(&text).unwrap();
        let k2 = back.to_kraus().unwrap();
        for (x, y) in k.operators().iter().zip(k2.operators()) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn channel_file_shape_errors() {
        let f = ChannelFile {
            dim_in: 2,
            dim_out: 3,
            kraus: vec![],
        };
        assert!(f.operators().is_err());
        let f = ChannelFile {
            dim_in: 2,
            dim_out: 2,
            kraus: vec![vec![vec![[1.0, 0.0]]]],
        };
        assert!(matches!(f.operators(), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn curve_rows_and_header() {
        let csv = curve_csv(PI / 2.0, 1.0, 101).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "b,majorization_bound,mu_bound");
        assert_eq!(lines.len(), 102);
        assert!(lines[101].starts_with("1.000000,"));
        assert!(lines[101].ends_with(",1.000000"));
        assert!(csv.ends_with('\n'));

        let csv = curve_csv(0.0, 1.0, 11).unwrap();
        assert_eq!(csv.lines().last().unwrap(), "1.000000,0.000000,0.000000");
    }

    #[test]
    fn equivalence_for_identity_and_hadamard() {
        let i = ComplexMatrix::identity(2);
        let eq = basis_equivalence(&i, &i).unwrap();
        assert_eq!(eq.c, vec![1.0]);
        assert_eq!(eq.s, vec![1.0]);

        let h = ComplexMatrix::from_real(&[&[1.0, 1.0], &[1.0, -1.0]])
            .unwrap()
            .scale_real(std::f64::consts::FRAC_1_SQRT_2);
        let eq = basis_equivalence(&i, &h).unwrap();
        assert_eq!(eq.c.len(), 2);
        assert!((eq.c[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(eq.max_difference <= 1e-9);
    }
}
