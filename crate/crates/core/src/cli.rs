//! The `qig` command-line tool.
//!
//! Matrices travel as JSON documents `{"n": n, "matrix": [[[re, im], ...], ...]}`.
//! Exit codes: 0 success, 1 selftest failure, 2 parse error, 3 validation
//! error, 4 contract violation.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::coords::{affine_coords, gellmann_basis, metric_tensor};
use crate::error::QigError;
use crate::legendre::potential;
use crate::manifold::{
    chart, chart_inverse, kubo, kubo_inverse, random_density, relative_entropy, tangent,
    CenteredObservable, DensityMatrix, ExponentialArc, TangentVector, DEFAULT_REGULARIZATION,
};
use crate::metric::{transport, TransportKind};
use crate::numcheck::{format_table, run_suite};
use crate::spectra::{HermitianMatrix, C64, HERMITICITY_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_CONTRACT: i32 = 4;

/// Environment variable overriding the validation tolerance.
pub const TOL_ENV: &str = "QIG_TOL";

/// On-disk form of a complex square matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub n: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl MatrixDocument {
    pub fn from_hermitian(h: &HermitianMatrix) -> Self {
        let m = h.as_matrix();
        let n = h.dim();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self { n, matrix }
    }

    /// Checks the shape and returns the raw complex matrix.
    pub fn to_matrix(&self) -> Result<DMatrix<C64>, QigError> {
        let rows = self.matrix.len();
        if rows != self.n {
            return Err(QigError::DimensionMismatch {
                expected: self.n,
                found: rows,
            });
        }
        if let Some(row) = self.matrix.iter().find(|r| r.len() != rows) {
            return Err(QigError::NotSquare {
                rows,
                cols: row.len(),
            });
        }
        Ok(DMatrix::from_fn(rows, rows, |i, j| {
            let [re, im] = self.matrix[i][j];
            C64::new(re, im)
        }))
    }
}

#[derive(Parser, Debug)]
#[command(name = "qig", version, about = "Information geometry of density matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Pair {
    /// Base state ρ.
    rho: PathBuf,
    /// Second state σ.
    sigma: PathBuf,
}

#[derive(Args, Debug)]
struct WithObservable {
    /// Base state ρ.
    rho: PathBuf,
    /// Hermitian matrix.
    matrix: PathBuf,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ArcPoints {
    /// Single parameter value.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// Number of intervals in an equally spaced grid on [0, 1].
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Relative entropy D(ρ‖σ).
    Divergence(Pair),
    /// Points of the exponential arc from ρ to σ.
    Arc {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        points: ArcPoints,
    },
    /// Chart value c_ρ(σ).
    Chart(Pair),
    /// State with chart value A at ρ.
    ChartInverse(WithObservable),
    /// Kubo transform of a Hermitian matrix at ρ.
    Kubo(WithObservable),
    /// Inverse Kubo transform of a Hermitian matrix at ρ.
    KuboInverse(WithObservable),
    /// Tangent vector Y_ρ(σ).
    Tangent(Pair),
    /// Parallel transport of a traceless matrix from ρ1 to ρ2.
    Transport {
        rho1: PathBuf,
        rho2: PathBuf,
        vector: PathBuf,
        /// m (mixture) or e (exponential).
        #[arg(long)]
        kind: TransportKind,
    },
    /// Potential Φ_ρ(A) and its contact state.
    Potential(WithObservable),
    /// Metric tensor in the Gell-Mann basis.
    MetricTensor { rho: PathBuf },
    /// Affine coordinates in the Gell-Mann basis.
    Coords { sigma: PathBuf },
    /// Seeded random state.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs the verification suite.
    Selftest {
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

/// Library errors raised by a computation are contract violations.
impl From<QigError> for Failure {
    fn from(e: QigError) -> Self {
        Self {
            code: EXIT_CONTRACT,
            message: e.to_string(),
        }
    }
}

type Outcome = std::result::Result<i32, Failure>;

struct Context {
    tol: f64,
}

impl Context {
    fn document(&self, path: &Path) -> Result<MatrixDocument, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
    }

    fn hermitian(&self, path: &Path) -> Result<HermitianMatrix, Failure> {
        let doc = self.document(path)?;
        let fail = |e: QigError| Failure::parse(format!("{}: {e}", path.display()));
        let m = doc.to_matrix().map_err(fail)?;
        HermitianMatrix::with_tolerance(m, self.tol).map_err(fail)
    }

    fn density(&self, path: &Path) -> Result<DensityMatrix, Failure> {
        let h = self.hermitian(path)?;
        DensityMatrix::from_hermitian(h, self.tol).map_err(|e| Failure {
            code: EXIT_VALIDATION,
            message: format!("{}: {e}", path.display()),
        })
    }
}

fn tolerance() -> Result<f64, Failure> {
    match std::env::var(TOL_ENV) {
        Err(_) => Ok(HERMITICITY_TOL),
        Ok(raw) => match raw.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
            _ => Err(Failure::parse(format!("{TOL_ENV}: expected a positive number, got `{raw}`"))),
        },
    }
}

/// Fixed-point with 15 significant digits where that is readable,
/// scientific otherwise.
pub fn format_significant(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exponent = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exponent) {
        format!("{:.*}", (14 - exponent) as usize, v)
    } else {
        format!("{v:.14e}")
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::parse(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Failure::parse(e.to_string()))
}

#[derive(Serialize)]
struct ArcPoint {
    n: usize,
    matrix: Vec<Vec<[f64; 2]>>,
    t: f64,
    alpha: f64,
}

impl ArcPoint {
    fn at(arc: &ExponentialArc, t: f64) -> Self {
        let doc = MatrixDocument::from_hermitian(arc.point(t).matrix());
        Self {
            n: doc.n,
            matrix: doc.matrix,
            t,
            alpha: arc.alpha(t),
        }
    }
}

#[derive(Serialize)]
struct PotentialOutput {
    value: f64,
    contact: MatrixDocument,
}

#[derive(Serialize)]
struct MetricOutput {
    size: usize,
    matrix: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct CoordsOutput {
    n: usize,
    coords: Vec<f64>,
}

fn centered(rho: &DensityMatrix, a: HermitianMatrix) -> Result<CenteredObservable, Failure> {
    Ok(CenteredObservable::new(rho, a)?)
}

fn execute(command: Command, ctx: &Context, out: &mut dyn Write) -> Outcome {
    let doc = |h: &HermitianMatrix| MatrixDocument::from_hermitian(h);
    match command {
        Command::Divergence(p) => {
            let d = relative_entropy(&ctx.density(&p.rho)?, &ctx.density(&p.sigma)?)?;
            writeln!(out, "{}", format_significant(d)).map_err(|e| Failure::parse(e.to_string()))?;
        }
        Command::Arc { pair, points } => {
            let arc = ExponentialArc::new(&ctx.density(&pair.rho)?, &ctx.density(&pair.sigma)?)?;
            match (points.t, points.grid) {
                (Some(t), _) => emit(out, &ArcPoint::at(&arc, t))?,
                (None, Some(k)) => {
                    if k == 0 {
                        return Err(QigError::OutOfRange {
                            name: "grid",
                            value: 0.0,
                            lo: 1.0,
                            hi: f64::INFINITY,
                        }
                        .into());
                    }
                    let pts: Vec<ArcPoint> = (0..=k).map(|i| ArcPoint::at(&arc, i as f64 / k as f64)).collect();
                    emit(out, &pts)?;
                }
                (None, None) => return Err(Failure::parse("one of --t or --grid is required")),
            }
        }
        Command::Chart(p) => {
            let a = chart(&ctx.density(&p.rho)?, &ctx.density(&p.sigma)?)?;
            emit(out, &doc(a.matrix()))?;
        }
        Command::ChartInverse(w) => {
            let rho = ctx.density(&w.rho)?;
            let a = centered(&rho, ctx.hermitian(&w.matrix)?)?;
            emit(out, &doc(chart_inverse(&rho, &a)?.matrix()))?;
        }
        Command::Kubo(w) => {
            let rho = ctx.density(&w.rho)?;
            emit(out, &doc(&kubo(&rho, &ctx.hermitian(&w.matrix)?)?))?;
        }
        Command::KuboInverse(w) => {
            let rho = ctx.density(&w.rho)?;
            emit(out, &doc(&kubo_inverse(&rho, &ctx.hermitian(&w.matrix)?)?))?;
        }
        Command::Tangent(p) => {
            let y = tangent(&ctx.density(&p.rho)?, &ctx.density(&p.sigma)?)?;
            emit(out, &doc(y.matrix()))?;
        }
        Command::Transport {
            rho1,
            rho2,
            vector,
            kind,
        } => {
            let (r1, r2) = (ctx.density(&rho1)?, ctx.density(&rho2)?);
            let v = TangentVector::new(ctx.hermitian(&vector)?)?;
            emit(out, &doc(transport(kind, &r1, &r2, &v)?.matrix()))?;
        }
        Command::Potential(w) => {
            let rho = ctx.density(&w.rho)?;
            let a = centered(&rho, ctx.hermitian(&w.matrix)?)?;
            let phi = potential(&rho, &a)?;
            emit(
                out,
                &PotentialOutput {
                    value: phi.value,
                    contact: doc(phi.contact.matrix()),
                },
            )?;
        }
        Command::MetricTensor { rho } => {
            let rho = ctx.density(&rho)?;
            let g = metric_tensor(&rho, &gellmann_basis(rho.dim())?)?;
            let k = g.size();
            let matrix = (0..k).map(|i| (0..k).map(|j| g.entries[(i, j)]).collect()).collect();
            emit(out, &MetricOutput { size: k, matrix })?;
        }
        Command::Coords { sigma } => {
            let sigma = ctx.density(&sigma)?;
            let coords = affine_coords(&sigma, &gellmann_basis(sigma.dim())?)?;
            emit(out, &CoordsOutput { n: sigma.dim(), coords })?;
        }
        Command::Random { n, seed } => {
            let rho = random_density(n, seed, DEFAULT_REGULARIZATION).map_err(|e| Failure::parse(e.to_string()))?;
            emit(out, &doc(rho.matrix()))?;
        }
        Command::Selftest { n, samples, seed, json } => {
            let reports = run_suite(&n, samples, seed);
            if json {
                emit(out, &reports)?;
            } else {
                write!(out, "{}", format_table(&reports)).map_err(|e| Failure::parse(e.to_string()))?;
            }
            if reports.iter().any(|r| !r.passed) {
                return Ok(EXIT_SELFTEST_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    let result = tolerance().and_then(|tol| execute(cli.command, &Context { tol }, out));
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.0), "0");
        assert_eq!(format_significant(0.143_841_036_225_890_2), "0.143841036225890");
        assert_eq!(format_significant(1.5), "1.50000000000000");
        assert_eq!(format_significant(1e-9), "1.00000000000000e-9");
    }

    #[test]
    fn document_roundtrip() {
        let h = HermitianMatrix::from_real_rows(&[&[0.1, 0.2], &[0.2, 0.3]]).unwrap();
        let doc = MatrixDocument::from_hermitian(&h);
        let text = serde_json::to_string(&doc).unwrap();
        let back: MatrixDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(HermitianMatrix::new(back.to_matrix().unwrap()).unwrap(), h);
    }

    #[test]
    fn malformed_documents() {
        let short = MatrixDocument {
            n: 2,
            matrix: vec![vec![[1.0, 0.0], [0.0, 0.0]]],
        };
        assert_eq!(short.to_matrix().unwrap_err().kind(), "DimensionMismatch");
        let ragged = MatrixDocument {
            n: 2,
            matrix: vec![vec![[1.0, 0.0]], vec![[0.0, 0.0], [1.0, 0.0]]],
        };
        assert_eq!(ragged.to_matrix().unwrap_err().kind(), "NotSquare");
    }

    #[test]
    fn usage_errors_exit_two() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["qig", "nonsense"], &mut out, &mut err), EXIT_PARSE);
        assert_eq!(run(["qig", "random"], &mut out, &mut err), EXIT_PARSE);
        assert_eq!(run(["qig", "random", "--n", "1"], &mut out, &mut err), EXIT_PARSE);
    }

    #[test]
    fn empty_selftest_succeeds() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(["qig", "selftest", "--samples", "0", "--json"], &mut out, &mut err);
        assert_eq!(code, EXIT_OK);
        let parsed: Vec<serde_json::Value> = serde_json::from_slice(&out).unwrap();
        assert!(parsed.is_empty());
    }
}
