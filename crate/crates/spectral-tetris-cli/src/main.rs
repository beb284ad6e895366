//! Command line interface for the spectral-tetris library.
//!
//! Exit codes: 0 success, 1 validation or verification failure, 2 when the
//! requested fusion dimensions are not majorized by the reference frame,
//! 64 for usage errors.

mod document;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use document::FrameDocument;
use spectral_tetris::{
    blockwise_order, build_fusion_frame, construct, reference_fusion_frame, sparsity,
    verify_frame, verify_fusion, ConstructRequest, DimensionProfile, FrameError, Method, Scalar,
    Spectrum, SpectrumSpec, SynthesisMatrix, VerificationReport, DEFAULT_TOLERANCE,
};

#[derive(Parser)]
#[command(
    name = "spectral-tetris",
    version,
    about = "Construct and verify unit-norm frames and fusion frames with prescribed spectra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Stc,
    Tdftst,
    Dftst,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Stc => Method::Stc,
            MethodArg::Tdftst => Method::Tdftst,
            MethodArg::Dftst => Method::Dftst,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Mtx,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a frame with a prescribed frame-operator spectrum
    Construct {
        /// Dimension of the space
        #[arg(long)]
        n: Option<usize>,
        /// Number of frame vectors
        #[arg(long)]
        m: Option<usize>,
        /// Tight spectrum: every eigenvalue equals m/n
        #[arg(long, conflicts_with = "eigenvalues")]
        tight: bool,
        /// Comma-separated eigenvalues, rationals ("5/2") or decimals
        #[arg(long)]
        eigenvalues: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Run the singleton/doubleton construction below the usual bound
        #[arg(long)]
        allow_small_eigenvalues: bool,
        /// Write the frame document (JSON) here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reference fusion frame for a spectrum
    Rff {
        #[arg(long)]
        eigenvalues: String,
    },
    /// Fusion frame with prescribed subspace dimensions
    Fusion {
        #[arg(long)]
        eigenvalues: String,
        /// Comma-separated subspace dimensions
        #[arg(long)]
        dims: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a frame document
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Export a frame document as json, mtx or csv
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Suggest an eigenvalue order maximizing integer partial sums
    Order {
        #[arg(long)]
        eigenvalues: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(64);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                FrameError::MajorizationFailed { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

/// Comma-separated rationals or decimals, validated as a spectrum.
fn parse_spectrum(text: &str) -> Result<Spectrum, FrameError> {
    let values: Result<Vec<Scalar>, FrameError> =
        text.split(',').map(Scalar::parse).collect();
    Spectrum::new(values?)
}

fn parse_dims(text: &str) -> Result<Vec<usize>, FrameError> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| FrameError::Parse(format!("bad dimension {tok:?}")))
        })
        .collect()
}

fn write_or_print(out: Option<&PathBuf>, content: &str) -> Result<(), FrameError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| FrameError::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load_document(path: &PathBuf) -> Result<FrameDocument, FrameError> {
    let text = fs::read_to_string(path)
        .map_err(|e| FrameError::Parse(format!("cannot read {}: {e}", path.display())))?;
    FrameDocument::from_json(&text)
}

fn print_report(report: &VerificationReport) {
    for check in &report.checks {
        println!(
            "  {:24} {}  max residual {:.3e}",
            check.name,
            if check.pass { "ok  " } else { "FAIL" },
            check.max_residual
        );
    }
}

fn format_dims(dims: &[usize]) -> String {
    dims.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn run(command: Command) -> Result<ExitCode, FrameError> {
    match command {
        Command::Construct {
            n,
            m,
            tight,
            eigenvalues,
            method,
            allow_small_eigenvalues,
            out,
        } => {
            let (spectrum_spec, lam) = match (tight, &eigenvalues) {
                (true, None) => {
                    let n = n.ok_or_else(|| {
                        FrameError::Parse("--tight requires --n".into())
                    })?;
                    let m = m.ok_or_else(|| {
                        FrameError::Parse("--tight requires --m".into())
                    })?;
                    (SpectrumSpec::Tight, Spectrum::tight(n, m)?)
                }
                (false, Some(list)) => {
                    let lam = parse_spectrum(list)?;
                    (SpectrumSpec::Given(lam.clone()), lam)
                }
                (false, None) => {
                    return Err(FrameError::Parse(
                        "provide --tight or --eigenvalues".into(),
                    ))
                }
                (true, Some(_)) => unreachable!("clap rejects the conflict"),
            };
            let req = ConstructRequest {
                n: n.unwrap_or(lam.n()),
                m: m.unwrap_or(lam.m()),
                spectrum: spectrum_spec,
                method: method.into(),
                allow_small_eigenvalues,
            };
            let frame = construct(&req)?;
            print_frame_summary(&frame, &lam);
            if let Some(path) = out {
                let doc = FrameDocument::from_matrix(&frame, &lam, None);
                write_or_print(Some(&path), &doc.to_json())?;
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Rff { eigenvalues } => {
            let lam = parse_spectrum(&eigenvalues)?;
            let rff = reference_fusion_frame(&lam)?;
            println!(
                "constructor: {}",
                rff.matrix.constructor().map_or("-", |c| c.name())
            );
            println!("reference dimensions: {}", format_dims(&rff.dims()));
            for (i, group) in rff.partition.groups().iter().enumerate() {
                println!(
                    "  subspace {} (dim {}): columns {}",
                    i + 1,
                    group.len(),
                    format_dims(group)
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fusion {
            eigenvalues,
            dims,
            out,
        } => {
            let lam = parse_spectrum(&eigenvalues)?;
            let profile = DimensionProfile::new(&parse_dims(&dims)?)?;
            let build = build_fusion_frame(&lam, &profile)?;
            println!(
                "reference dimensions: {}",
                format_dims(&build.reference_dims)
            );
            println!(
                "fusion frame with dimensions {} built in {} rebalance steps",
                format_dims(&build.partition.sizes()),
                build.steps.len()
            );
            for (i, group) in build.partition.groups().iter().enumerate() {
                println!(
                    "  subspace {} (dim {}): columns {}",
                    i + 1,
                    group.len(),
                    format_dims(group)
                );
            }
            if let Some(path) = out {
                let doc =
                    FrameDocument::from_matrix(&build.matrix, &lam, Some(&build.partition));
                write_or_print(Some(&path), &doc.to_json())?;
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file, tol } => {
            let doc = load_document(&file)?;
            let matrix = doc.matrix()?;
            let lam = doc.spectrum()?;
            let report = verify_frame(&matrix, &lam, tol)?;
            println!("frame checks (tolerance {tol:e}):");
            print_report(&report);
            let mut all_passed = report.passed();
            if let Some(partition) = doc.partition()? {
                let dims = partition.sizes();
                let fusion_report = verify_fusion(&matrix, &partition, &dims, &lam, tol)?;
                println!("fusion checks:");
                print_report(&fusion_report);
                all_passed &= fusion_report.passed();
            }
            if all_passed {
                println!("result: PASS");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("result: FAIL");
                Ok(ExitCode::from(1))
            }
        }
        Command::Export { file, format, out } => {
            let doc = load_document(&file)?;
            let content = match format {
                FormatArg::Json => doc.to_json(),
                FormatArg::Mtx => doc.to_matrix_market(),
                FormatArg::Csv => doc.to_csv(),
            };
            write_or_print(out.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Order { eigenvalues } => {
            let lam = parse_spectrum(&eigenvalues)?;
            let result = blockwise_order(&lam);
            let ordered: Vec<String> = result
                .permutation
                .iter()
                .map(|&i| lam.value(i).to_string())
                .collect();
            println!("order: {}", ordered.join(","));
            println!(
                "permutation (0-based): {}",
                format_dims(&result.permutation)
            );
            println!("integral prefixes: {}", result.integral_prefixes);
            println!(
                "certified optimal: {}",
                if result.certified { "yes" } else { "no" }
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_frame_summary(frame: &SynthesisMatrix, lam: &Spectrum) {
    println!(
        "constructor: {}",
        frame.constructor().map_or("-", |c| c.name())
    );
    println!("dimensions: {} x {}", frame.n_rows(), frame.n_cols());
    println!(
        "eigenvalues: {}",
        lam.values()
            .iter()
            .map(Scalar::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    let s = sparsity(frame);
    match (s.formula_value, s.optimal) {
        (Some(formula), Some(optimal)) => println!(
            "sparsity: {} structural nonzeros (closed form {formula}{})",
            s.structural_nonzeros,
            if optimal { ", optimal" } else { ", MISMATCH" }
        ),
        _ => println!("sparsity: {} structural nonzeros", s.structural_nonzeros),
    }
    if !frame.block_log().is_empty() {
        let blocks: Vec<String> = frame
            .block_log()
            .iter()
            .map(|b| {
                format!(
                    "{}[{}]@({},{})",
                    b.kind.name(),
                    b.size,
                    b.row_offset,
                    b.col_offset
                )
            })
            .collect();
        println!("blocks: {}", blocks.join(" "));
    }
    for w in frame.warnings() {
        println!("warning: {w}");
    }
    match verify_frame(frame, lam, DEFAULT_TOLERANCE) {
        Ok(report) if report.passed() => {
            println!("verification: all checks passed (tol {DEFAULT_TOLERANCE:e})")
        }
        Ok(report) => {
            println!("verification: FAILED");
            print_report(&report);
        }
        Err(e) => println!("verification: error: {e}"),
    }
}
