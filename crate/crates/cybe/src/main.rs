use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use cybe_core::equivalence::Equivalence;
use cybe_core::{fixtures, RMatrixSeries, Series};

use cybe::commands::{self, Equation, Outcome};
use cybe::document::*;

/// Exact verification, normalization and classification of formal r-matrices.
///
/// Every command reads one document (a path, or `-` for standard input) and prints a report
/// document. Exit codes: 0 verified, 1 the property fails, 2 undetermined on the window,
/// 3 input error.
#[derive(Parser)]
#[command(name = "cybe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the generalized or the classical Yang-Baxter equation.
    #[command(group(ArgGroup::new("equation").required(true).args(["gcybe", "cybe"])))]
    Verify {
        input: PathBuf,
        #[arg(long)]
        gcybe: bool,
        #[arg(long)]
        cybe: bool,
        /// Order N of the certificate on [0, N)^3; defaults to the largest the caps allow.
        #[arg(long, env = "CYBE_ORDER")]
        order: Option<usize>,
        /// Pole window checked before the Laurent part cancels.
        #[arg(long, default_value_t = 6)]
        kx: usize,
    },
    /// Compare the r-matrix with its transpose.
    SkewCheck { input: PathBuf },
    /// The complementary subalgebra of an r-matrix.
    Extract {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The normalized r-matrix of a subalgebra.
    Reconstruct {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Change coordinates so that the rescaling factor becomes 1.
    Normalize {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply an equivalence document to an r-matrix.
    EquivApply {
        input: PathBuf,
        #[arg(long)]
        equivalence: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gauge a normalized skew r-matrix into difference form s(x - y).
    DiffNormalize {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the Lie bialgebra structure of a normalized skew r-matrix.
    CobracketCheck {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Scalar multipliers of the subalgebra of an r-matrix.
    Multipliers {
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_pole: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify the associated plane cubic.
    Classify {
        input: PathBuf,
        #[arg(long, env = "CYBE_CLASSIFY_WINDOW", default_value_t = 14)]
        window: usize,
        #[arg(long, default_value_t = 3)]
        max_pole: usize,
    },
    /// The index (h0, h1) of a subalgebra or a lattice.
    LatticeIndex { input: PathBuf },
    /// Print a fixture document.
    Build {
        fixture: Fixture,
        /// sl<n> or so<n>.
        #[arg(long, default_value = "sl2")]
        algebra: String,
        #[arg(long, default_value_t = 8)]
        nx: usize,
        #[arg(long, default_value_t = 8)]
        ny: usize,
        /// Comma-separated rationals: rescaling polynomial, Skrypnyk parameters or gauge
        /// exponent, depending on the fixture.
        #[arg(long)]
        params: Option<String>,
        /// Coordinates of the gauge direction x.
        #[arg(long)]
        x: Option<String>,
        /// Coefficients of the coordinate change w for an equivalence fixture.
        #[arg(long)]
        w: Option<String>,
        /// Maximal pole order for lattice fixtures.
        #[arg(long, default_value_t = 8)]
        max_pole: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    /// The algebra itself.
    Lie,
    /// γ/(x - y).
    Yang,
    /// μ(y) γ/(x - y) for a polynomial μ (params).
    RescaledYang,
    /// (φ(x) ⊗ φ(y)) γ/(x - y) with φ = exp(p(z) ad x) (params = p).
    GaugeTwistedYang,
    /// Homogeneous so(3) solution for parameters (a1, a2, a3).
    Skrypnyk,
    /// γ/(e^(x-y) - 1) + e⊗f/4 + h⊗h/16 on sl2.
    Trigonometric,
    /// (w', w, exp(p(z) ad x)): a λ-preserving equivalence.
    Equivalence,
    /// Q[z^-2, z^-3].
    CuspLattice,
    /// Q[℘, ℘'/2] for params (g2, g3).
    WpLattice,
}

fn read_input(path: &PathBuf) -> Result<Document, DocError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| DocError::Invalid { what: "input", message: e.to_string() })?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| DocError::Invalid { what: "input", message: format!("{}: {e}", path.display()) })?
    };
    Document::parse(&text)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::SkewCheck { .. } => "skew-check",
        Command::Extract { .. } => "extract",
        Command::Reconstruct { .. } => "reconstruct",
        Command::Normalize { .. } => "normalize",
        Command::EquivApply { .. } => "equiv-apply",
        Command::DiffNormalize { .. } => "diff-normalize",
        Command::CobracketCheck { .. } => "cobracket-check",
        Command::Multipliers { .. } => "multipliers",
        Command::Classify { .. } => "classify",
        Command::LatticeIndex { .. } => "lattice-index",
        Command::Build { .. } => "build",
    }
}

fn list_or(text: &Option<String>, default: &[i64]) -> Result<Vec<cybe_core::Q>, DocError> {
    match text {
        Some(t) => commands::rationals(t),
        None => Ok(default.iter().map(|&n| cybe_core::q(n)).collect()),
    }
}

#[allow(clippy::too_many_arguments)]
fn build(fixture: Fixture, algebra: &str, nx: usize, ny: usize, params: &Option<String>, x: &Option<String>, w: &Option<String>, max_pole: usize) -> Result<Document, DocError> {
    let lie = commands::lie_algebra(algebra)?;
    let d = lie.dim();
    let prec = (nx + ny + 2) as i64;
    let direction = || -> Result<cybe_core::Vector, DocError> {
        let v = list_or(x, &[])?;
        if v.is_empty() {
            return Ok(lie.basis_vector(0));
        }
        if v.len() != d {
            return Err(DocError::Invalid { what: "x", message: format!("expected {d} coordinates") });
        }
        Ok(cybe_core::Vector { data: v })
    };
    let doc = match fixture {
        Fixture::Lie => Document::LieAlgebra(lie_doc(&lie)),
        Fixture::Yang => Document::Rmatrix(rmatrix_doc(&RMatrixSeries::yang(lie, nx, ny))),
        Fixture::RescaledYang => Document::Rmatrix(rmatrix_doc(&RMatrixSeries::rescaled_yang(lie, &list_or(params, &[1, 1])?, nx, ny)?)),
        Fixture::GaugeTwistedYang => {
            let r = fixtures::gauge_twisted_yang(&lie, &direction()?, &list_or(params, &[0, 1])?, nx, ny)?;
            Document::Rmatrix(rmatrix_doc(&r))
        }
        Fixture::Skrypnyk => {
            let a = list_or(params, &[1, 2, 3])?;
            let a: [cybe_core::Q; 3] = a.try_into().map_err(|_| DocError::Invalid { what: "params", message: "expected 3 rationals".into() })?;
            Document::Rmatrix(rmatrix_doc(&fixtures::skrypnyk(&a, nx, ny)?.r))
        }
        Fixture::Trigonometric => Document::Rmatrix(rmatrix_doc(&fixtures::trigonometric(&lie, &fixtures::trigonometric_constant(), nx, ny)?)),
        Fixture::Equivalence => {
            let mut wc = list_or(w, &[0, 1])?;
            wc.truncate(prec as usize);
            let w = Series::polynomial(&wc, prec);
            let phi = lie.exp_ad_poly(&direction()?, &list_or(params, &[0])?, prec)?;
            Document::Equivalence(equivalence_doc(&lie, &Equivalence::new(&lie, w.derive(), w, phi)?))
        }
        Fixture::CuspLattice => {
            let p = (2 * max_pole + 4) as i64;
            let gens = vec![Series::monomial(cybe_core::q(1), -2, p), Series::monomial(cybe_core::q(1), -3, p)];
            Document::Lattice(LatticeDoc { max_pole, generators: gens.iter().map(SeriesDoc::from_series).collect() })
        }
        Fixture::WpLattice => {
            let g = list_or(params, &[4, 0])?;
            if g.len() != 2 {
                return Err(DocError::Invalid { what: "params", message: "expected g2,g3".into() });
            }
            let (_, p, dp) = cybe_core::curve::wp_lattice(&g[0], &g[1], (2 * max_pole + 8) as i64, max_pole)?;
            Document::Lattice(LatticeDoc { max_pole, generators: vec![SeriesDoc::from_series(&p), SeriesDoc::from_series(&dp)] })
        }
    };
    Ok(doc)
}

fn write_out(path: &Option<PathBuf>, outcome: &Outcome) -> Result<(), DocError> {
    if let (Some(path), Some(doc)) = (path, &outcome.output) {
        std::fs::write(path, doc.emit()).map_err(|e| DocError::Invalid { what: "output", message: format!("{}: {e}", path.display()) })?;
    }
    Ok(())
}

fn run(command: &Command) -> Result<Outcome, DocError> {
    let outcome = match command {
        Command::Verify { input, gcybe, order, kx, .. } => {
            let eq = if *gcybe { Equation::Generalized } else { Equation::Classical };
            commands::verify(&read_input(input)?, eq, *order, *kx)?
        }
        Command::SkewCheck { input } => commands::skew_check(&read_input(input)?)?,
        Command::Extract { input, out } => {
            let o = commands::extract(&read_input(input)?)?;
            write_out(out, &o)?;
            o
        }
        Command::Reconstruct { input, out } => {
            let o = commands::reconstruct(&read_input(input)?)?;
            write_out(out, &o)?;
            o
        }
        Command::Normalize { input, out } => {
            let o = commands::normalize_cmd(&read_input(input)?)?;
            write_out(out, &o)?;
            o
        }
        Command::EquivApply { input, equivalence, out } => {
            let o = commands::equiv_apply(&read_input(input)?, &read_input(equivalence)?)?;
            write_out(out, &o)?;
            o
        }
        Command::DiffNormalize { input, out } => {
            let o = commands::diff_normalize(&read_input(input)?)?;
            write_out(out, &o)?;
            o
        }
        Command::CobracketCheck { input, depth } => commands::cobracket(&read_input(input)?, *depth)?,
        Command::Multipliers { input, max_pole, out } => {
            let o = commands::multipliers_cmd(&read_input(input)?, *max_pole)?;
            write_out(out, &o)?;
            o
        }
        Command::Classify { input, window, max_pole } => commands::classify(&read_input(input)?, *window, *max_pole)?,
        Command::LatticeIndex { input } => commands::lattice_index(&read_input(input)?)?,
        Command::Build { .. } => unreachable!("handled in main"),
    };
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Build { fixture, algebra, nx, ny, params, x, w, max_pole } = &cli.command {
        return match build(*fixture, algebra, *nx, *ny, params, x, w, *max_pole) {
            Ok(doc) => {
                print!("{}", doc.emit());
                ExitCode::SUCCESS
            }
            Err(e) => {
                let o = Outcome::from_error(&e);
                eprintln!("cybe: {e}");
                print!("{}", o.report("build").emit());
                ExitCode::from(o.exit_code())
            }
        };
    }
    let name = command_name(&cli.command);
    let outcome = run(&cli.command).unwrap_or_else(|e| {
        eprintln!("cybe: {e}");
        Outcome::from_error(&e)
    });
    print!("{}", outcome.report(name).emit());
    ExitCode::from(outcome.exit_code())
}
