//! `lieconf` — exact verification of Block-type Lie conformal algebra
//! identities: λ-bracket axioms, conformal derivations, rank-1 modules,
//! truncated cohomology, and the vertex Lie / vertex Poisson / Novikov
//! structures. Reports are JSON by default; exit code 0 means every check
//! passed, 1 means some residual was nonzero, 2 means the configuration was
//! unusable.

mod commands;
mod load;
mod output;

use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use lieconf_core::cohomology::TruncationParams;
use lieconf_core::modules::ModuleSpec;
use lieconf_core::Algebra;

use commands::{VerifyAllWindows, VertexCheck};
use output::Report;

#[derive(Parser)]
#[command(name = "lieconf", version, about = "Exact checks for a Block-type Lie conformal algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Algebra preset: block | virasoro | block-central.
    #[arg(long, default_value = "block")]
    preset: String,
    /// Algebra spec file (TOML); overrides --preset.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Output format: json | text.
    #[arg(long, default_value = "json")]
    format: String,
    /// Omit timing so identical configurations produce identical bytes.
    #[arg(long)]
    stable: bool,
    /// Write the report to a file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Skew-symmetry and Jacobi residuals on an index window.
    Axioms {
        #[command(flatten)]
        common: CommonArgs,
        /// Bound on generator indices for both suites.
        #[arg(long = "max-index", default_value_t = 6)]
        max_index: usize,
    },
    /// Window conformal-derivation solver and the inner quotient.
    Derivations {
        #[command(flatten)]
        common: CommonArgs,
        /// Domain window bound N.
        #[arg(short = 'N', default_value_t = 2)]
        n: usize,
        /// Degree bound on image coefficients.
        #[arg(short = 'D', default_value_t = 3)]
        deg: u32,
    },
    /// Module axioms and the rank-1 action classification.
    Modules {
        #[command(flatten)]
        common: CommonArgs,
        /// Coefficient module: trivial | c_a:a=… | m:delta=…,alpha=….
        #[arg(long, default_value = "m:delta=symbolic,alpha=symbolic")]
        coeff: String,
        /// Pair window for axiom checks and classification bound.
        #[arg(short = 'N', default_value_t = 3)]
        n: usize,
        /// Degree bound for the classification unknowns.
        #[arg(short = 'D', default_value_t = 5)]
        deg: u32,
    },
    /// Truncated cohomology dimensions.
    Cohomology {
        #[command(flatten)]
        common: CommonArgs,
        /// Coefficient module: trivial | c_a:a=… | m:delta=…,alpha=….
        #[arg(long, default_value = "trivial")]
        coeff: String,
        /// Cochain degree.
        #[arg(long, default_value_t = 1)]
        q: usize,
        /// Max generator index in tuples.
        #[arg(short = 'N', default_value_t = 3)]
        n: usize,
        /// Max total λ-degree of values.
        #[arg(short = 'D', default_value_t = 5)]
        deg: u32,
        /// Compute in the reduced complex.
        #[arg(long)]
        reduced: bool,
    },
    /// Vertex Lie / vertex Poisson / Novikov checks.
    Vertex {
        #[command(flatten)]
        common: CommonArgs,
        /// Which suite: half-skew | half-comm | th1 | novikov | all.
        #[arg(long, default_value = "all")]
        check: VertexCheck,
        /// Bound on generator indices.
        #[arg(long = "max-index", default_value_t = 4)]
        max_index: usize,
    },
    /// The default verification battery across all suites.
    VerifyAll {
        #[command(flatten)]
        common: CommonArgs,
        /// Window bound fed to the derivation/module/cohomology suites.
        #[arg(short = 'N', default_value_t = 3)]
        n: usize,
        /// Degree bound for those suites.
        #[arg(short = 'D', default_value_t = 5)]
        deg: u32,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn load_algebra(common: &CommonArgs) -> Result<(Algebra, String)> {
    match &common.spec {
        Some(path) => Ok((load::load_algebra_file(path)?, path.display().to_string())),
        None => Ok((load::algebra_from_preset(&common.preset)?, common.preset.clone())),
    }
}

fn run(cli: Cli) -> i32 {
    let started = Instant::now();
    let outcome = build_report(&cli);
    let common = common_args(&cli);
    match outcome {
        Ok(mut report) => {
            let elapsed = if common.stable { None } else { Some(started.elapsed().as_millis()) };
            let all_passed = report.finalize(elapsed);
            let rendered = match common.format.as_str() {
                "text" => report.to_text(),
                _ => report.to_json(),
            };
            match &common.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                }
                None => print!("{rendered}"),
            }
            if all_passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn common_args(cli: &Cli) -> &CommonArgs {
    match &cli.command {
        Command::Axioms { common, .. }
        | Command::Derivations { common, .. }
        | Command::Modules { common, .. }
        | Command::Cohomology { common, .. }
        | Command::Vertex { common, .. }
        | Command::VerifyAll { common, .. } => common,
    }
}

fn build_report(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Axioms { common, max_index } => {
            let (spec, name) = load_algebra(common)?;
            let mut report = Report::new("axioms", name);
            report.window_param("max_index", json!(max_index));
            report.extend(commands::axioms_suite(&spec, *max_index, *max_index)?);
            Ok(report)
        }
        Command::Derivations { common, n, deg } => {
            let (spec, name) = load_algebra(common)?;
            let mut report = Report::new("derivations", name);
            report.window_param("n", json!(n));
            report.window_param("d", json!(deg));
            let (entries, results) = commands::derivations_suite(&spec, *n, *deg)?;
            report.extend(entries);
            report.results = Some(results);
            Ok(report)
        }
        Command::Modules { common, coeff, n, deg } => {
            let (spec, name) = load_algebra(common)?;
            let mspec = load::parse_coeff(coeff)?;
            let mut report = Report::new("modules", name);
            report.window_param("n", json!(n));
            report.window_param("d", json!(deg));
            report.window_param("coeff", json!(mspec.label()));
            report.extend(commands::modules_suite(&spec, &mspec, *n, *deg)?);
            Ok(report)
        }
        Command::Cohomology { common, coeff, q, n, deg, reduced } => {
            let (spec, name) = load_algebra(common)?;
            let mspec = load::parse_coeff(coeff)?;
            let mut report = Report::new("cohomology", name);
            report.window_param("n", json!(n));
            report.window_param("d", json!(deg));
            report.window_param("q", json!(q));
            report.window_param("reduced", json!(reduced));
            report.window_param("coeff", json!(mspec.label()));
            let t = TruncationParams { n: *n, d: *deg, q: *q };
            let (entries, results) = commands::cohomology_suite(&spec, &mspec, t, *reduced)?;
            report.extend(entries);
            report.results = Some(results);
            Ok(report)
        }
        Command::Vertex { common, check, max_index } => {
            let (spec, name) = load_algebra(common)?;
            let mut report = Report::new("vertex", name);
            report.window_param("max_index", json!(max_index));
            report.extend(commands::vertex_suite(&spec, *check, *max_index)?);
            Ok(report)
        }
        Command::VerifyAll { common, n, deg } => {
            let (spec, name) = load_algebra(common)?;
            let w = VerifyAllWindows { n: *n, deg: *deg, ..Default::default() };
            verify_all(&spec, name, &w)
        }
    }
}

fn verify_all(spec: &Algebra, name: String, w: &VerifyAllWindows) -> Result<Report> {
    use lieconf_core::modules::Binding;
    use lieconf_core::{Rat, Scalar};

    let mut report = Report::new("verify-all", name);
    report.window_param("skew_max", json!(w.skew_max));
    report.window_param("jacobi_max", json!(w.jacobi_max));
    report.window_param("n", json!(w.n));
    report.window_param("d", json!(w.deg));
    report.window_param("vertex_max", json!(w.vertex_max));

    report.extend(commands::axioms_suite(spec, w.skew_max, w.jacobi_max)?);

    for dn in 2..=w.n.min(3) {
        let (entries, _) = commands::derivations_suite(spec, dn, dn as u32 + 1)?;
        report.extend(entries);
    }

    let m_sym = ModuleSpec::free_rank1(Binding::Symbolic, Binding::Symbolic);
    report.extend(commands::modules_suite(spec, &m_sym, w.n, w.deg)?);

    // the cohomology battery runs only where the complex is defined
    if !spec.has_center() {
        let trivial = ModuleSpec::<Rat>::trivial();
        for q in 0..=2usize {
            for reduced in [false, true] {
                let t = TruncationParams { n: w.n, d: w.deg, q };
                let (entries, _) = commands::cohomology_suite(spec, &trivial, t, reduced)?;
                report.extend(entries);
            }
        }
        let ca = ModuleSpec::constant_a(Binding::Value(Rat::int(1)));
        for q in 0..=1usize {
            let t = TruncationParams { n: 2, d: 4, q };
            let (entries, _) = commands::cohomology_suite(spec, &ca, t, true)?;
            report.extend(entries);
        }
        report.extend(commands::differential_suite(spec, 2, 2, 3)?);
        report.extend(commands::homotopy_suite(spec, 2, 2, 3)?);
    }

    report.extend(commands::vertex_suite(spec, VertexCheck::All, w.vertex_max)?);
    if spec.preset() == lieconf_core::conformal::Preset::Block {
        report.extend(commands::vertex_suite(spec, VertexCheck::Novikov, 10)?);
    }
    Ok(report)
}
