//! Executes a [`BenchPlan`]: mask → measure → reconstruct → metrics for every
//! (image, solver) pair, with instrumentation contracts checked on each run.

use std::fs;
use std::path::Path;

use csrecon::fourier::{FftCounter, PartialFourierOp};
use csrecon::metrics::{QualityReport, DEFAULT_PEAK};
use csrecon::phantom::shepp_logan;
use csrecon::sampling::mask_fraction;
use csrecon::solvers::{reconstruct, zero_fill_baseline, SolverConfig, SolverKind, SolverReport};
use csrecon::{Image, Measurements};
use rayon::prelude::*;

use crate::error::{BenchError, Result, EXIT_OK};
use crate::io::{read_image, write_image};
use crate::plan::{config_lines, BenchPlan, ImageSource};
use crate::report::{aligned_table, csv_string, fmt_sig, records_table, BenchRecord, RunMetrics};

/// A prepared benchmark input: ground truth plus its measurements.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub truth: Image,
    pub op: PartialFourierOp,
    pub y: Measurements,
    pub mask_fraction: f64,
    pub zero_fill: Image,
    pub zero_fill_quality: QualityReport,
}

impl Instance {
    pub fn prepare(source: &ImageSource, plan: &BenchPlan) -> Result<Self> {
        let truth = match source {
            ImageSource::File(path) => read_image(path)?,
            ImageSource::Phantom { width, height } => shepp_logan(*width, *height)?,
        };
        Self::from_truth(source.name(), truth, plan)
    }

    pub fn from_truth(name: String, truth: Image, plan: &BenchPlan) -> Result<Self> {
        let mask = plan.mask.with_dims(truth.width(), truth.height()).build()?;
        let op = PartialFourierOp::new(mask);
        let y = op.apply(&truth, &mut FftCounter::new())?;
        let zero_fill = zero_fill_baseline(&y, &op)?;
        let zero_fill_quality = QualityReport::measure(&truth, &zero_fill, DEFAULT_PEAK)?;
        Ok(Self {
            name,
            mask_fraction: mask_fraction(op.mask()),
            truth,
            op,
            y,
            zero_fill,
            zero_fill_quality,
        })
    }
}

/// Output of one solver task.
#[derive(Debug, Clone)]
pub struct SolverRun {
    pub metrics: RunMetrics,
    pub image: Image,
    pub report: SolverReport,
}

/// Runs one solver and enforces the per-run contracts: two FFTs per outer
/// iteration plus setup, and a non-increasing TwIST objective.
pub fn run_solver(instance: &Instance, kind: SolverKind, cfg: &SolverConfig) -> Result<SolverRun> {
    let rec = reconstruct(kind, &instance.y, &instance.op, cfg)?;
    let report = rec.report;
    if !report.fft_accounting_holds() {
        return Err(BenchError::Contract(format!(
            "{kind}: fft_count {} != {} setup + 2 x {} iterations",
            report.fft_count, report.setup_ffts, report.iterations
        )));
    }
    if kind == SolverKind::Twist && report.objective_trace.windows(2).any(|w| w[1] > w[0]) {
        return Err(BenchError::Contract("twist: objective trace increased".into()));
    }
    let quality = QualityReport::measure(&instance.truth, &rec.image, DEFAULT_PEAK)?;
    Ok(SolverRun {
        metrics: RunMetrics {
            rel_error_pct: quality.relative_error_pct,
            psnr_db: quality.psnr_db,
            cpu_seconds: report.wall_seconds(),
            iterations: report.iterations,
            fft_count: report.fft_count,
        },
        image: rec.image,
        report,
    })
}

#[derive(Debug, Clone)]
pub struct Failure {
    pub image: String,
    pub solver: Option<SolverKind>,
    pub exit_code: i32,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct ImageBaseline {
    pub image: String,
    pub mask_fraction: f64,
    pub quality: QualityReport,
}

#[derive(Debug, Clone)]
pub struct BenchOutcome {
    /// One per (image, solver), in plan order.
    pub records: Vec<BenchRecord>,
    pub baselines: Vec<ImageBaseline>,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
    /// Reconstructions in record order (`None` for failed runs).
    pub images: Vec<Option<Image>>,
    pub zero_fill_images: Vec<(String, Image)>,
}

impl BenchOutcome {
    /// Worst exit code among failures.
    pub fn exit_code(&self) -> i32 {
        self.failures.iter().map(|f| f.exit_code).max().unwrap_or(EXIT_OK)
    }
}

pub fn run_plan(plan: &BenchPlan) -> BenchOutcome {
    let prepared: Vec<(String, Result<Instance>)> = plan
        .images
        .iter()
        .map(|src| (src.name(), Instance::prepare(src, plan)))
        .collect();

    let tasks: Vec<(usize, SolverKind)> = (0..prepared.len())
        .flat_map(|i| plan.solvers.iter().map(move |&k| (i, k)))
        .collect();
    let run = |&(i, kind): &(usize, SolverKind)| -> Option<Result<SolverRun>> {
        let inst = prepared[i].1.as_ref().ok()?;
        Some(run_solver(inst, kind, &plan.config(kind)))
    };
    let results: Vec<Option<Result<SolverRun>>> = if plan.parallel {
        tasks.par_iter().map(run).collect()
    } else {
        tasks.iter().map(run).collect()
    };

    let mut records = Vec::with_capacity(tasks.len());
    let mut images = Vec::with_capacity(tasks.len());
    let mut failures = Vec::new();
    let mut baselines = Vec::new();
    let mut zero_fill_images = Vec::new();

    for (name, inst) in &prepared {
        match inst {
            Ok(inst) => {
                baselines.push(ImageBaseline {
                    image: name.clone(),
                    mask_fraction: inst.mask_fraction,
                    quality: inst.zero_fill_quality,
                });
                if plan.emit_images {
                    zero_fill_images.push((name.clone(), inst.zero_fill.clone()));
                }
            }
            Err(e) => failures.push(Failure {
                image: name.clone(),
                solver: None,
                exit_code: e.exit_code(),
                reason: e.to_string(),
            }),
        }
    }

    for (&(i, kind), result) in tasks.iter().zip(results) {
        let (name, inst) = &prepared[i];
        let mask_fraction = inst.as_ref().ok().map(|x| x.mask_fraction);
        let outcome = match result {
            Some(Ok(run)) => {
                images.push(plan.emit_images.then_some(run.image));
                Ok(run.metrics)
            }
            Some(Err(e)) => {
                images.push(None);
                failures.push(Failure {
                    image: name.clone(),
                    solver: Some(kind),
                    exit_code: e.exit_code(),
                    reason: e.to_string(),
                });
                Err(e.to_string())
            }
            None => {
                images.push(None);
                Err("input preparation failed".to_string())
            }
        };
        records.push(BenchRecord {
            image: name.clone(),
            solver: kind.name().to_string(),
            mask_fraction,
            outcome,
        });
    }

    let notes = comparison_notes(&records, &baselines);
    BenchOutcome {
        records,
        baselines,
        failures,
        notes,
        images,
        zero_fill_images,
    }
}

/// Per-image observations: PSNR gain over zero-fill, and whether SALSA has
/// the best PSNR and RecPF the shortest time. Informational only.
pub fn comparison_notes(records: &[BenchRecord], baselines: &[ImageBaseline]) -> Vec<String> {
    let mut notes = Vec::new();
    for base in baselines {
        let ok: Vec<(&str, RunMetrics)> = records
            .iter()
            .filter(|r| r.image == base.image)
            .filter_map(|r| r.outcome.as_ref().ok().map(|m| (r.solver.as_str(), *m)))
            .collect();
        for (solver, m) in &ok {
            notes.push(format!(
                "{}: {solver} psnr gain over zero-fill = {} dB",
                base.image,
                fmt_sig(m.psnr_db - base.quality.psnr_db)
            ));
        }
        if ok.len() < 2 {
            continue;
        }
        let best = ok
            .iter()
            .max_by(|a, b| a.1.psnr_db.total_cmp(&b.1.psnr_db))
            .expect("non-empty");
        let fastest = ok
            .iter()
            .min_by(|a, b| a.1.cpu_seconds.total_cmp(&b.1.cpu_seconds))
            .expect("non-empty");
        if ok.iter().any(|(s, _)| *s == "salsa") {
            let verdict = if best.0 == "salsa" { "yes" } else { "no" };
            notes.push(format!(
                "{}: salsa highest psnr: {verdict} (best {} at {} dB)",
                base.image,
                best.0,
                fmt_sig(best.1.psnr_db)
            ));
        }
        if ok.iter().any(|(s, _)| *s == "recpf") {
            let verdict = if fastest.0 == "recpf" { "yes" } else { "no" };
            notes.push(format!(
                "{}: recpf lowest time: {verdict} (fastest {} at {} s)",
                base.image,
                fastest.0,
                fmt_sig(fastest.1.cpu_seconds)
            ));
        }
    }
    notes
}

/// Human-readable summary: results, zero-fill baselines, notes, configuration
/// and failures.
pub fn render_summary(plan: &BenchPlan, outcome: &BenchOutcome) -> String {
    let mut out = records_table(&outcome.records);

    out.push_str("\nzero-fill baseline\n");
    let rows: Vec<Vec<String>> = outcome
        .baselines
        .iter()
        .map(|b| {
            vec![
                b.image.clone(),
                fmt_sig(b.mask_fraction),
                fmt_sig(b.quality.relative_error_pct),
                fmt_sig(b.quality.psnr_db),
            ]
        })
        .collect();
    out.push_str(&aligned_table(&["image", "mask_fraction", "rel_error_pct", "psnr_db"], &rows));

    if !outcome.notes.is_empty() {
        out.push_str("\nnotes\n");
        for n in &outcome.notes {
            out.push_str(n);
            out.push('\n');
        }
    }

    out.push_str("\nconfiguration\n");
    out.push_str(&format!("tv_weight={}\nmask={:?}\n", plan.tv_weight, plan.mask));
    for &kind in &plan.solvers {
        for (k, v) in config_lines(kind, &plan.config(kind)) {
            out.push_str(&format!("{k}={v}\n"));
        }
    }

    if outcome.failures.is_empty() {
        out.push_str("\nall runs succeeded\n");
    } else {
        out.push_str(&format!("\n{} failure(s)\n", outcome.failures.len()));
        for f in &outcome.failures {
            let solver = f.solver.map(|s| s.name()).unwrap_or("-");
            out.push_str(&format!("{} {solver}: {}\n", f.image, f.reason));
        }
    }
    out
}

/// Writes `results.csv`, `results.txt` and, if requested, the images.
pub fn write_outputs(plan: &BenchPlan, outcome: &BenchOutcome) -> Result<()> {
    let dir = &plan.output;
    fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    let write = |name: &str, text: String| {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| BenchError::io(path, e))
    };
    write("results.csv", csv_string(&outcome.records)?)?;
    write("results.txt", render_summary(plan, outcome))?;
    if plan.emit_images {
        for (rec, img) in outcome.records.iter().zip(&outcome.images) {
            if let Some(img) = img {
                write_image(&dir.join(format!("{}_{}.pgm", rec.image, rec.solver)), img)?;
            }
        }
        for (name, img) in &outcome.zero_fill_images {
            write_image(&dir.join(format!("{name}_zerofill.pgm")), img)?;
        }
    }
    Ok(())
}

/// Parses and runs a plan file, writing all outputs; returns the summary and
/// the outcome.
pub fn run_plan_file(path: &Path) -> Result<(BenchPlan, BenchOutcome)> {
    let plan = BenchPlan::from_file(path)?;
    let outcome = run_plan(&plan);
    write_outputs(&plan, &outcome)?;
    Ok((plan, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(text: &str) -> BenchPlan {
        BenchPlan::parse(text, Path::new("/nonexistent")).unwrap()
    }

    #[test]
    fn one_record_per_pair_in_plan_order() {
        let p = plan("image=phantom:16\nimage=phantom:12x8\nsolvers=salsa,twist\nsolver.salsa.max_iter=5\nsolver.twist.max_iter=5\n");
        let out = run_plan(&p);
        let order: Vec<(&str, &str)> = out.records.iter().map(|r| (r.image.as_str(), r.solver.as_str())).collect();
        assert_eq!(
            order,
            [("phantom16", "salsa"), ("phantom16", "twist"), ("phantom12x8", "salsa"), ("phantom12x8", "twist")]
        );
        assert!(out.failures.is_empty(), "{:?}", out.failures);
        assert_eq!(out.exit_code(), 0);
        assert_eq!(out.baselines.len(), 2);
    }

    #[test]
    fn missing_image_fails_its_records_only() {
        let p = plan("image=does-not-exist.pgm\nimage=phantom:16\nsolvers=recpf\n");
        let out = run_plan(&p);
        assert_eq!(out.records.len(), 2);
        assert!(out.records[0].is_failed());
        assert!(!out.records[1].is_failed());
        assert_eq!(out.failures.len(), 1);
        assert_eq!(out.exit_code(), crate::error::EXIT_DATA);
        assert!(render_summary(&p, &out).contains("1 failure(s)"));
    }

    #[test]
    fn notes_flag_orderings() {
        let rec = |solver: &str, psnr: f64, t: f64| BenchRecord {
            image: "a".into(),
            solver: solver.into(),
            mask_fraction: Some(0.25),
            outcome: Ok(RunMetrics {
                rel_error_pct: 1.0,
                psnr_db: psnr,
                cpu_seconds: t,
                iterations: 1,
                fft_count: 3,
            }),
        };
        let base = ImageBaseline {
            image: "a".into(),
            mask_fraction: 0.25,
            quality: QualityReport {
                relative_error_pct: 40.0,
                psnr_db: 20.0,
                peak: 1.0,
            },
        };
        let notes = comparison_notes(&[rec("twist", 30.0, 2.0), rec("recpf", 25.0, 0.1), rec("salsa", 28.0, 1.0)], &[base]);
        assert!(notes.contains(&"a: twist psnr gain over zero-fill = 10 dB".to_string()));
        assert!(notes.contains(&"a: salsa highest psnr: no (best twist at 30 dB)".to_string()));
        assert!(notes.contains(&"a: recpf lowest time: yes (fastest recpf at 0.1 s)".to_string()));
    }
}
