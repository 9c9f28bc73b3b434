use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use csrecon::fourier::{FftCounter, PartialFourierOp};
use csrecon::metrics::{QualityReport, DEFAULT_PEAK};
use csrecon::phantom::shepp_logan;
use csrecon::sampling::{mask_fraction, radial_mask, radial_mask_for_fraction, variable_density_mask};
use csrecon::solvers::{objective_tv, reconstruct, SolverConfig, SolverKind};
use csrecon::SamplingMask;

use crate::error::{BenchError, Result, EXIT_OK, EXIT_USAGE};
use crate::io::{read_image, read_mask, read_measurements, write_image, write_mask, write_measurements};
use crate::plan::config_lines;
use crate::report::KeyValueReport;
use crate::runner::{render_summary, run_plan_file};

#[derive(Debug, Parser)]
#[command(name = "csrecon", version, about = "Partial-Fourier TV reconstruction toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a sampling mask file.
    Mask(MaskArgs),
    /// Sample an image's spectrum through a mask.
    Measure {
        image: PathBuf,
        mask: PathBuf,
        out: PathBuf,
    },
    /// Reconstruct an image from a measurements file.
    Reconstruct(ReconstructArgs),
    /// Run a benchmark plan.
    Bench { plan: PathBuf },
    /// Relative error and PSNR between two images.
    Metrics {
        reference: PathBuf,
        test: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PEAK)]
        peak: f64,
    },
    /// Write the Shepp-Logan phantom.
    Phantom {
        #[arg(long, default_value_t = 128)]
        width: usize,
        #[arg(long, default_value_t = 128)]
        height: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MaskKind {
    Full,
    Radial,
    VariableDensity,
}

#[derive(Debug, Args)]
struct MaskArgs {
    #[arg(long, value_enum)]
    kind: MaskKind,
    #[arg(long)]
    width: usize,
    #[arg(long)]
    height: usize,
    #[arg(long, conflicts_with = "lines")]
    fraction: Option<f64>,
    #[arg(long)]
    lines: Option<usize>,
    /// Accepted deviation from `--fraction` for radial masks.
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
    #[arg(long, default_value_t = 2.0)]
    decay: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ReconstructArgs {
    measurements: PathBuf,
    #[arg(long)]
    solver: String,
    /// TV weight, translated into the solver's λ convention.
    #[arg(long, conflicts_with = "lambda")]
    tv_weight: Option<f64>,
    /// λ in the solver's own convention.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    inner_prox_iters: Option<usize>,
    #[arg(long)]
    twist_alpha: Option<f64>,
    #[arg(long)]
    twist_beta: Option<f64>,
    #[arg(long)]
    recpf_beta: Option<f64>,
    #[arg(long)]
    salsa_mu: Option<f64>,
    #[arg(long)]
    out_image: Option<PathBuf>,
    /// Report destination; standard output if omitted.
    #[arg(long)]
    out_report: Option<PathBuf>,
    /// Ground truth enabling rel_error_pct and psnr_db in the report.
    #[arg(long)]
    reference: Option<PathBuf>,
}

impl ReconstructArgs {
    fn config(&self, kind: SolverKind) -> SolverConfig {
        let tv_weight = self.tv_weight.unwrap_or(csrecon::solvers::DEFAULT_TV_WEIGHT);
        let mut cfg = SolverConfig::with_tv_weight(kind, tv_weight);
        if let Some(l) = self.lambda {
            cfg.lambda = l;
        }
        if let Some(v) = self.max_iter {
            cfg.max_iter = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if let Some(v) = self.inner_prox_iters {
            cfg.inner_prox_iters = v;
        }
        cfg.twist_alpha = self.twist_alpha;
        cfg.twist_beta = self.twist_beta;
        if let Some(v) = self.recpf_beta {
            cfg.recpf_beta = v;
        }
        if let Some(v) = self.salsa_mu {
            cfg.salsa_mu = v;
        }
        cfg
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| BenchError::io("<stdout>", e))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Mask(args) => cmd_mask(&args, out).map(|_| EXIT_OK),
        Command::Measure { image, mask, out: dest } => cmd_measure(&image, &mask, &dest).map(|_| EXIT_OK),
        Command::Reconstruct(args) => cmd_reconstruct(&args, out).map(|_| EXIT_OK),
        Command::Bench { plan } => {
            let (plan, outcome) = run_plan_file(&plan)?;
            emit(out, &render_summary(&plan, &outcome))?;
            Ok(outcome.exit_code())
        }
        Command::Metrics { reference, test, peak } => {
            let reference = read_image(&reference)?;
            let test = read_image(&test)?;
            let q = QualityReport::measure(&reference, &test, peak)?;
            let mut r = KeyValueReport::new();
            r.push_num("rel_error_pct", q.relative_error_pct);
            r.push_num("psnr_db", q.psnr_db);
            emit(out, &r.render())?;
            Ok(EXIT_OK)
        }
        Command::Phantom { width, height, out: dest } => {
            write_image(&dest, &shepp_logan(width, height)?)?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_mask(args: &MaskArgs, out: &mut dyn Write) -> Result<()> {
    let (w, h) = (args.width, args.height);
    let mut report = KeyValueReport::new();
    let mask: SamplingMask = match args.kind {
        MaskKind::Full => SamplingMask::full(w, h)?,
        MaskKind::Radial => match (args.lines, args.fraction) {
            (Some(n), _) => {
                report.push("lines", n.to_string());
                radial_mask(w, h, n)?
            }
            (None, Some(f)) => {
                let fit = radial_mask_for_fraction(w, h, f, args.tol)?;
                if let Some(n) = fit.num_lines {
                    report.push("lines", n.to_string());
                }
                fit.mask
            }
            (None, None) => return Err(BenchError::Usage("radial masks need --lines or --fraction".into())),
        },
        MaskKind::VariableDensity => {
            let f = args
                .fraction
                .ok_or_else(|| BenchError::Usage("variable-density masks need --fraction".into()))?;
            variable_density_mask(w, h, f, args.decay, args.seed)?
        }
    };
    write_mask(&args.out, &mask)?;
    report.push("selected", mask.count().to_string());
    report.push_num("fraction", mask_fraction(&mask));
    emit(out, &report.render())
}

fn cmd_measure(image: &Path, mask: &Path, dest: &Path) -> Result<()> {
    let x = read_image(image)?;
    let mask = read_mask(mask)?;
    let op = PartialFourierOp::new(mask);
    let y = op.apply(&x, &mut FftCounter::new())?;
    write_measurements(dest, &y)
}

fn cmd_reconstruct(args: &ReconstructArgs, out: &mut dyn Write) -> Result<()> {
    let kind: SolverKind = args
        .solver
        .parse()
        .map_err(|e: csrecon::Error| BenchError::Usage(e.to_string()))?;
    let cfg = args.config(kind);
    let y = read_measurements(&args.measurements)?;
    let reference = args.reference.as_deref().map(read_image).transpose()?;
    let op = PartialFourierOp::new(y.mask().clone());
    let rec = reconstruct(kind, &y, &op, &cfg)?;
    let rep = &rec.report;
    if !rep.fft_accounting_holds() {
        return Err(BenchError::Contract(format!(
            "fft_count {} != {} + 2 x {}",
            rep.fft_count, rep.setup_ffts, rep.iterations
        )));
    }

    let (w, h) = y.dims();
    let mut report = KeyValueReport::new();
    let name = args
        .measurements
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    report.push("image", name);
    report.push("solver", kind.name());
    report.push("width", w.to_string());
    report.push("height", h.to_string());
    report.push_num("mask_fraction", rep.achieved_mask_fraction);
    if let Some(truth) = &reference {
        let q = QualityReport::measure(truth, &rec.image, DEFAULT_PEAK)?;
        report.push_num("rel_error_pct", q.relative_error_pct);
        report.push_num("psnr_db", q.psnr_db);
    }
    report.push_num("cpu_seconds", rep.wall_seconds());
    report.push("iterations", rep.iterations.to_string());
    report.push("fft_count", rep.fft_count.to_string());
    report.push("setup_ffts", rep.setup_ffts.to_string());
    let tv_weight = kind.tv_weight_for_lambda(cfg.lambda);
    report.push_num("objective", objective_tv(&rec.iterate, &y, &op, tv_weight)?);
    for (k, v) in config_lines(kind, &cfg) {
        report.push(k, v);
    }

    if let Some(path) = &args.out_image {
        write_image(path, &rec.image)?;
    }
    match &args.out_report {
        Some(path) => std::fs::write(path, report.render()).map_err(|e| BenchError::io(path, e)),
        None => emit(out, &report.render()),
    }
}
