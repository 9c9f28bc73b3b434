//! Acceptance suite: one PASS/FAIL line per criterion, including its time
//! budget. Criterion 9 is informational and printed as REPORT.
//!
//! Oracles here are written independently of the library internals: a naive
//! DFT, a plain projected-gradient dual solver for the TV prox, dense linear
//! solves built by probing the operators with unit vectors, and a separately
//! coded IST loop.

use std::f64::consts::PI;
use std::path::Path;
use std::time::{Duration, Instant};

use csrecon::fourier::{dft2_forward, FftCounter, PartialFourierOp};
use csrecon::metrics::{psnr, relative_error, QualityReport};
use csrecon::phantom::shepp_logan;
use csrecon::sampling::radial_mask_for_fraction;
use csrecon::solvers::{
    objective_tv, reconstruct, reconstruct_twist, RecpfSystem, SalsaSystem, SolverConfig, SolverKind,
};
use csrecon::tv::{chambolle_prox, divergence, gradient, BoundaryRule, ChambolleParams, ChambolleSolver, VectorField};
use csrecon::{inner_product, l2_norm, Image, Measurements, SamplingMask, SpectrumGrid};
use csrecon_bench::io::{decode_mask, decode_measurements, read_mask, read_measurements, write_mask, write_measurements};
use csrecon_bench::plan::BenchPlan;
use csrecon_bench::report::csv_string;
use csrecon_bench::runner::{run_plan, run_solver, Instance};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

enum Status {
    Pass,
    Fail,
    Report,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(id: u32, title: &str, budget: Duration, informational: bool, check: impl FnOnce() -> Check) -> Status {
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let timing = format!("{:.2}s / {}s", elapsed.as_secs_f64(), budget.as_secs());
    let (status, label, detail) = match result {
        _ if informational => {
            let d = result.unwrap_or_else(|e| e);
            (Status::Report, "REPORT", d)
        }
        Ok(d) if elapsed <= budget => (Status::Pass, "PASS", d),
        Ok(d) => (Status::Fail, "FAIL", format!("over time budget; {d}")),
        Err(e) => (Status::Fail, "FAIL", e),
    };
    println!("{label:<6} criterion {id}: {title} ({timing}) — {detail}");
    status
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_image(w: usize, h: usize, rng: &mut ChaCha8Rng) -> Image {
    Image::new(w, h, (0..w * h).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

fn random_spectrum(w: usize, h: usize, rng: &mut ChaCha8Rng) -> SpectrumGrid {
    let v = (0..w * h)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    SpectrumGrid::new(w, h, v).unwrap()
}

fn random_mask(w: usize, h: usize, p: f64, rng: &mut ChaCha8Rng) -> SamplingMask {
    let mut sel: Vec<bool> = (0..w * h).map(|_| rng.gen_bool(p)).collect();
    sel[0] = true;
    SamplingMask::new(w, h, sel).unwrap()
}

// ---------------------------------------------------------------------------
// 1. operator correctness

fn naive_dft(x: &SpectrumGrid) -> SpectrumGrid {
    let (w, h) = x.dims();
    let scale = 1.0 / ((w * h) as f64).sqrt();
    let mut out = Vec::with_capacity(w * h);
    for kr in 0..h {
        for kc in 0..w {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..h {
                for c in 0..w {
                    let phase = -2.0 * PI * ((kr * r) as f64 / h as f64 + (kc * c) as f64 / w as f64);
                    acc += x.values()[r * w + c] * Complex64::from_polar(1.0, phase);
                }
            }
            out.push(acc * scale);
        }
    }
    SpectrumGrid::new(w, h, out).unwrap()
}

fn criterion_1() -> Check {
    let mut g = rng(1);
    let mut worst_adj: f64 = 0.0;
    let mut worst_parseval: f64 = 0.0;
    for _ in 0..100 {
        let mask = random_mask(16, 16, g.gen_range(0.1..0.9), &mut g);
        let op = PartialFourierOp::new(mask.clone());
        let x = random_image(16, 16, &mut g);
        let mut yd = random_spectrum(16, 16, &mut g);
        mask.apply_to(&mut yd).unwrap();
        let y = Measurements::new(mask, yd).unwrap();
        let mut fft = FftCounter::new();
        let kx = op.apply(&x, &mut fft).unwrap();
        let khy = op.adjoint_complex(&y, &mut fft).unwrap();
        let lhs = inner_product(kx.data(), y.data()).unwrap();
        let rhs = inner_product(&SpectrumGrid::from_image(&x), &khy).unwrap();
        worst_adj = worst_adj.max((lhs - rhs).norm() / (l2_norm(&x) * l2_norm(y.data())));

        let z = random_spectrum(16, 16, &mut g);
        let fz = dft2_forward(&z);
        worst_parseval = worst_parseval.max((l2_norm(&fz) - l2_norm(&z)).abs() / l2_norm(&z));
    }
    ensure(worst_adj <= 1e-10, || format!("adjoint identity off by {worst_adj:e}"))?;
    ensure(worst_parseval <= 1e-10, || format!("Parseval off by {worst_parseval:e}"))?;

    let mut worst_dft: f64 = 0.0;
    for _ in 0..10 {
        let z = random_spectrum(8, 8, &mut g);
        let (a, b) = (dft2_forward(&z), naive_dft(&z));
        for (u, v) in a.values().iter().zip(b.values()) {
            worst_dft = worst_dft.max((u - v).norm());
        }
    }
    ensure(worst_dft <= 1e-10, || format!("naive DFT differs by {worst_dft:e}"))?;
    Ok(format!(
        "adjoint {worst_adj:.1e}, Parseval {worst_parseval:.1e}, naive DFT {worst_dft:.1e}"
    ))
}

// ---------------------------------------------------------------------------
// 2. TV kernel

/// Neumann forward differences and isotropic TV, written out directly.
fn oracle_grad(x: &[f64], w: usize, h: usize) -> (Vec<f64>, Vec<f64>) {
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            if c + 1 < w {
                gx[i] = x[i + 1] - x[i];
            }
            if r + 1 < h {
                gy[i] = x[i + w] - x[i];
            }
        }
    }
    (gx, gy)
}

/// Negative adjoint of [`oracle_grad`].
fn oracle_div(px: &[f64], py: &[f64], w: usize, h: usize) -> Vec<f64> {
    let mut d = vec![0.0; w * h];
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            if c + 1 < w {
                d[i] += px[i];
                d[i + 1] -= px[i];
            }
            if r + 1 < h {
                d[i] += py[i];
                d[i + w] -= py[i];
            }
        }
    }
    d
}

fn oracle_tv(x: &[f64], w: usize, h: usize) -> f64 {
    let (gx, gy) = oracle_grad(x, w, h);
    gx.iter().zip(&gy).map(|(a, b)| (a * a + b * b).sqrt()).sum()
}

fn oracle_prox_objective(x: &[f64], v: &[f64], weight: f64, w: usize, h: usize) -> f64 {
    let fit: f64 = x.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
    0.5 * fit + weight * oracle_tv(x, w, h)
}

/// Projected gradient on the dual of the TV prox, step 1/8, run long.
fn oracle_prox(v: &[f64], weight: f64, w: usize, h: usize, steps: usize) -> Vec<f64> {
    let n = w * h;
    let (mut px, mut py) = (vec![0.0; n], vec![0.0; n]);
    for _ in 0..steps {
        let d = oracle_div(&px, &py, w, h);
        let u: Vec<f64> = d.iter().zip(v).map(|(di, vi)| di - vi / weight).collect();
        let (gx, gy) = oracle_grad(&u, w, h);
        for i in 0..n {
            let (a, b) = (px[i] + gx[i] / 8.0, py[i] + gy[i] / 8.0);
            let m = (a * a + b * b).sqrt().max(1.0);
            px[i] = a / m;
            py[i] = b / m;
        }
    }
    let d = oracle_div(&px, &py, w, h);
    v.iter().zip(&d).map(|(vi, di)| vi - weight * di).collect()
}

fn criterion_2() -> Check {
    let mut g = rng(2);
    let mut worst_adj: f64 = 0.0;
    for boundary in [BoundaryRule::Neumann, BoundaryRule::Periodic] {
        for _ in 0..50 {
            let (w, h) = (g.gen_range(1..20), g.gen_range(1..20));
            let x = random_image(w, h, &mut g);
            let p = VectorField::new(
                w,
                h,
                (0..w * h).map(|_| g.gen_range(-1.0..1.0)).collect(),
                (0..w * h).map(|_| g.gen_range(-1.0..1.0)).collect(),
            )
            .unwrap();
            let lhs = gradient(&x, boundary).dot(&p).unwrap();
            let rhs = -x.dot(&divergence(&p, boundary)).unwrap();
            worst_adj = worst_adj.max((lhs - rhs).abs());
        }
    }
    ensure(worst_adj <= 1e-12, || format!("⟨∇x,p⟩ + ⟨x,div p⟩ = {worst_adj:e}"))?;

    // the library's Neumann TV must agree with the oracle's definition
    let probe = random_image(7, 5, &mut g);
    let tv_gap = (csrecon::tv::tv_value(&probe, BoundaryRule::Neumann) - oracle_tv(probe.values(), 7, 5)).abs();
    ensure(tv_gap < 1e-12, || format!("TV definitions differ by {tv_gap:e}"))?;

    // The stopping tolerance bounds the per-pixel dual change, not the
    // objective; the loose inner-solver default (1e-4) leaves a gap of a few
    // 1e-3 at weight 1, so the accuracy check uses a tight one and reports both.
    let max_iter = ChambolleParams::default().max_iter;
    let (tight, loose) = (1e-8, ChambolleParams::default().tol);
    let mut worst_obj: f64 = 0.0;
    let mut worst_loose: f64 = 0.0;
    for i in 0..20 {
        let weight = if i % 2 == 0 { 0.1 } else { 1.0 };
        let v = random_image(4, 4, &mut g);
        let reference = oracle_prox(v.values(), weight, 4, 4, 100_000);
        let f_ref = oracle_prox_objective(&reference, v.values(), weight, 4, 4);
        let gap = |tol: f64| -> Result<f64, String> {
            let x = chambolle_prox(&v, weight, max_iter, tol).map_err(|e| e.to_string())?;
            Ok((oracle_prox_objective(x.values(), v.values(), weight, 4, 4) - f_ref).abs())
        };
        worst_obj = worst_obj.max(gap(tight)?);
        worst_loose = worst_loose.max(gap(loose)?);
    }
    ensure(worst_obj <= 1e-4, || format!("prox objective off by {worst_obj:e}"))?;
    Ok(format!(
        "adjointness {worst_adj:.1e}, prox objective gap {worst_obj:.1e} (max_iter {max_iter}, tol {tight:e}; \
         {worst_loose:.1e} at tol {loose:e})"
    ))
}

// ---------------------------------------------------------------------------
// 3. small-instance solver oracles

const N: usize = 16;

fn unit(j: usize) -> Image {
    let mut v = vec![0.0; N * N];
    v[j] = 1.0;
    Image::new(N, N, v).unwrap()
}

fn probe_matrix(f: impl Fn(&Image) -> Image) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(N * N, N * N);
    for j in 0..N * N {
        for (i, v) in f(&unit(j)).values().iter().enumerate() {
            a[(i, j)] = *v;
        }
    }
    a
}

fn solve(a: DMatrix<f64>, b: &Image) -> Result<Vec<f64>, String> {
    a.lu()
        .solve(&DVector::from_column_slice(b.values()))
        .map(|x| x.as_slice().to_vec())
        .ok_or_else(|| "dense system is singular".to_string())
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn half_mask(g: &mut ChaCha8Rng) -> SamplingMask {
    let mut idx: Vec<usize> = (1..N * N).collect();
    for i in (1..idx.len()).rev() {
        idx.swap(i, g.gen_range(0..=i));
    }
    let mut sel = vec![false; N * N];
    sel[0] = true;
    for &i in &idx[..N * N / 2 - 1] {
        sel[i] = true;
    }
    SamplingMask::new(N, N, sel).unwrap()
}

/// `x ← prox(x + Kᴴ(y − Kx))` from `Kᴴy`, stopping when the objective would
/// rise or the relative change falls below tol.
fn ist_loop(y: &Measurements, op: &PartialFourierOp, cfg: &SolverConfig) -> (Image, usize) {
    let mut fft = FftCounter::new();
    let mut prox = ChambolleSolver::new(N, N, ChambolleParams::inner(cfg.inner_prox_iters));
    let mut x = op.adjoint(y, &mut fft).unwrap();
    let mut f = objective_tv(&x, y, op, cfg.lambda).unwrap();
    let mut t = 0;
    while t < cfg.max_iter {
        t += 1;
        let kx = op.apply(&x, &mut fft).unwrap();
        let r = Measurements::new(op.mask().clone(), y.data().sub(kx.data()).unwrap()).unwrap();
        let next = prox.prox(&x.add(&op.adjoint(&r, &mut fft).unwrap()).unwrap(), cfg.lambda).unwrap();
        let f_next = objective_tv(&next, y, op, cfg.lambda).unwrap();
        if f_next > f {
            break;
        }
        let den = l2_norm(&x);
        let change = if den > 0.0 { l2_norm(&next.sub(&x).unwrap()) / den } else { 0.0 };
        x = next;
        f = f_next;
        if change < cfg.tol {
            break;
        }
    }
    (x, t)
}

fn criterion_3() -> Check {
    let mut g = rng(3);
    let mask = half_mask(&mut g);
    let op = PartialFourierOp::new(mask);
    let truth = shepp_logan(N, N).unwrap();
    let y = op.apply(&truth, &mut FftCounter::new()).unwrap();
    let khy = op.adjoint(&y, &mut FftCounter::new()).unwrap();
    let normal = |e: &Image| {
        let mut fft = FftCounter::new();
        op.adjoint(&op.apply(e, &mut fft).unwrap(), &mut fft).unwrap()
    };

    // RecPF: (β ∇ᵀ∇ + λ KᴴK) x = β ∇ᵀw + λ Kᴴy, periodic differences
    let (beta, lambda) = (10.0, 100.0);
    let w = VectorField::new(
        N,
        N,
        (0..N * N).map(|_| g.gen_range(-0.5..0.5)).collect(),
        (0..N * N).map(|_| g.gen_range(-0.5..0.5)).collect(),
    )
    .unwrap();
    let a = probe_matrix(|e| {
        divergence(&gradient(e, BoundaryRule::Periodic), BoundaryRule::Periodic)
            .scaled(-beta)
            .add(&normal(e).scaled(lambda))
            .unwrap()
    });
    let rhs = divergence(&w, BoundaryRule::Periodic).scaled(-beta).add(&khy.scaled(lambda)).unwrap();
    let expected = solve(a, &rhs)?;
    let step = RecpfSystem::new(&op)
        .x_update(&w, &khy, &y, beta, lambda, &mut FftCounter::new())
        .map_err(|e| e.to_string())?;
    let recpf_gap = max_gap(step.x.values(), &expected);
    ensure(recpf_gap <= 1e-8, || format!("RecPF x-update off by {recpf_gap:e}"))?;

    // SALSA: (KᴴK + μI) x = rhs
    let mu = 1.0;
    let rhs = random_image(N, N, &mut g);
    let a = probe_matrix(|e| normal(e).add(&e.scaled(mu)).unwrap());
    let expected = solve(a, &rhs)?;
    let step = SalsaSystem::new(&op)
        .x_update(&rhs, &y, mu, &mut FftCounter::new())
        .map_err(|e| e.to_string())?;
    let salsa_gap = max_gap(step.x.values(), &expected);
    ensure(salsa_gap <= 1e-8, || format!("SALSA x-update off by {salsa_gap:e}"))?;

    // TwIST with α = β = 1 against the IST loop, bit for bit
    let cfg = SolverConfig {
        lambda: 1e-2,
        twist_alpha: Some(1.0),
        twist_beta: Some(1.0),
        max_iter: 50,
        tol: 1e-6,
        ..SolverConfig::default()
    };
    let twist = reconstruct_twist(&y, &op, &cfg).map_err(|e| e.to_string())?;
    let (ist, ist_iters) = ist_loop(&y, &op, &cfg);
    ensure(twist.report.iterations == ist_iters, || {
        format!("TwIST ran {} iterations, IST {ist_iters}", twist.report.iterations)
    })?;
    let identical = twist
        .iterate
        .values()
        .iter()
        .zip(ist.values())
        .all(|(a, b)| a.to_bits() == b.to_bits());
    ensure(identical, || "TwIST(α=β=1) differs from IST".into())?;
    Ok(format!(
        "RecPF gap {recpf_gap:.1e}, SALSA gap {salsa_gap:.1e}, TwIST≡IST over {ist_iters} iterations"
    ))
}

// ---------------------------------------------------------------------------
// 4. full sampling

fn criterion_4() -> Check {
    let truth = shepp_logan(64, 64).unwrap();
    let op = PartialFourierOp::new(SamplingMask::full(64, 64).unwrap());
    let y = op.apply(&truth, &mut FftCounter::new()).unwrap();
    let mut parts = Vec::new();
    for kind in SolverKind::ALL {
        let cfg = SolverConfig::with_tv_weight(kind, 1e-4);
        let rec = reconstruct(kind, &y, &op, &cfg).map_err(|e| e.to_string())?;
        let err = relative_error(&truth, &rec.image).map_err(|e| e.to_string())?;
        ensure(err < 1.0 && rec.report.iterations <= 100, || {
            format!("{kind}: {err:.3}% after {} iterations", rec.report.iterations)
        })?;
        parts.push(format!("{kind} {err:.3}%"));
    }
    Ok(parts.join(", "))
}

// ---------------------------------------------------------------------------
// 5, 6, 7, 9: the phantom suite through the bench runner

fn suite_plan() -> BenchPlan {
    BenchPlan::parse("image=phantom:64\nimage=phantom:128\n", Path::new(".")).unwrap()
}

fn criterion_5() -> Check {
    let plan = suite_plan();
    let inst = Instance::prepare(&csrecon_bench::plan::ImageSource::Phantom { width: 128, height: 128 }, &plan)
        .map_err(|e| e.to_string())?;
    ensure((inst.mask_fraction - 0.25).abs() <= 0.02, || {
        format!("achieved fraction {}", inst.mask_fraction)
    })?;
    let zf = inst.zero_fill_quality.psnr_db;
    let mut parts = vec![format!("fraction {:.4}, zero-fill {zf:.2} dB", inst.mask_fraction)];
    for kind in SolverKind::ALL {
        let run = run_solver(&inst, kind, &plan.config(kind)).map_err(|e| e.to_string())?;
        let gain = run.metrics.psnr_db - zf;
        ensure(gain >= 3.0, || format!("{kind}: {:.2} dB is only {gain:.2} dB above zero-fill", run.metrics.psnr_db))?;
        parts.push(format!("{kind} +{gain:.2} dB"));
    }
    Ok(parts.join(", "))
}

fn criterion_6() -> Check {
    let plan = suite_plan();
    let mut runs = 0;
    for src in &plan.images {
        let inst = Instance::prepare(src, &plan).map_err(|e| e.to_string())?;
        for &kind in &plan.solvers {
            // run_solver rejects accounting violations; recheck from the report
            let run = run_solver(&inst, kind, &plan.config(kind)).map_err(|e| e.to_string())?;
            let r = &run.report;
            ensure(r.fft_count == r.setup_ffts + 2 * r.iterations as u64 && r.setup_ffts <= 2, || {
                format!("{kind} on {}: {} FFTs, {} setup, {} iterations", inst.name, r.fft_count, r.setup_ffts, r.iterations)
            })?;
            runs += 1;
        }
    }
    let outcome = run_plan(&plan);
    ensure(outcome.failures.is_empty(), || format!("bench failures: {:?}", outcome.failures))?;
    Ok(format!("fft_count = setup + 2·iterations on {runs} solver runs and every bench run"))
}

fn criterion_7() -> Check {
    let plan = suite_plan();
    let mut traces = 0;
    for src in &plan.images {
        let inst = Instance::prepare(src, &plan).map_err(|e| e.to_string())?;
        let run = run_solver(&inst, SolverKind::Twist, &plan.config(SolverKind::Twist)).map_err(|e| e.to_string())?;
        let t = &run.report.objective_trace;
        ensure(t.windows(2).all(|w| w[1] <= w[0]), || format!("TwIST objective rose on {}", inst.name))?;
        traces += 1;
    }

    let strip = |csv: String| -> Vec<String> {
        csv.lines()
            .map(|l| {
                let mut c: Vec<&str> = l.split(',').collect();
                c.remove(5);
                c.join(",")
            })
            .collect()
    };
    let a = csv_string(&run_plan(&plan).records).map_err(|e| e.to_string())?;
    let b = csv_string(&run_plan(&plan).records).map_err(|e| e.to_string())?;
    ensure(strip(a) == strip(b), || "CSV differs between identical runs".into())?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mask = radial_mask_for_fraction(96, 80, 0.3, 0.02).map_err(|e| e.to_string())?.mask;
    let op = PartialFourierOp::new(mask.clone());
    let y = op.apply(&shepp_logan(96, 80).unwrap(), &mut FftCounter::new()).unwrap();
    let (mp, yp) = (dir.path().join("m"), dir.path().join("y"));
    write_mask(&mp, &mask).map_err(|e| e.to_string())?;
    write_measurements(&yp, &y).map_err(|e| e.to_string())?;
    let (m2, y2) = (read_mask(&mp).map_err(|e| e.to_string())?, read_measurements(&yp).map_err(|e| e.to_string())?);
    let bitwise = m2 == mask
        && y2.mask() == y.mask()
        && y2
            .data()
            .values()
            .iter()
            .zip(y.data().values())
            .all(|(p, q)| p.re.to_bits() == q.re.to_bits() && p.im.to_bits() == q.im.to_bits());
    ensure(bitwise, || "file round trip changed data".into())?;
    let bytes = std::fs::read(&yp).map_err(|e| e.to_string())?;
    ensure(decode_measurements(&bytes).is_ok() && decode_mask(&std::fs::read(&mp).unwrap()).is_ok(), || {
        "re-decode failed".into()
    })?;
    Ok(format!("{traces} monotone TwIST traces, CSV reproducible, files round-trip bitwise"))
}

// ---------------------------------------------------------------------------
// 8. metric identities

fn criterion_8() -> Check {
    let mut g = rng(8);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (w, h) = (g.gen_range(1..24), g.gen_range(1..24));
        let a = Image::new(w, h, (0..w * h).map(|_| g.gen_range(0.0..1.0)).collect()).unwrap();
        let b = Image::new(w, h, a.values().iter().map(|v| v + g.gen_range(-0.3..0.3)).collect()).unwrap();
        let q = QualityReport::measure(&a, &b, 1.0).map_err(|e| e.to_string())?;
        if q.relative_error_pct == 0.0 {
            continue;
        }
        // psnr = 20·log10(peak·√N·100 / (rel%·‖ref‖))
        let implied = 20.0 * (((w * h) as f64).sqrt() * 100.0 / (q.relative_error_pct * l2_norm(&a))).log10();
        worst = worst.max((implied - q.psnr_db).abs());
    }
    ensure(worst <= 1e-9, || format!("consistency identity off by {worst:e} dB"))?;

    let reference = Image::filled(32, 32, 0.5).unwrap();
    let test = Image::filled(32, 32, 0.6).unwrap();
    let db = psnr(&reference, &test, 1.0).map_err(|e| e.to_string())?;
    ensure((db - 20.0).abs() <= 1e-9, || format!("uniform 0.1 error gives {db} dB"))?;
    Ok(format!("identity gap {worst:.1e} dB, uniform 0.1 error → {db:.9} dB"))
}

// ---------------------------------------------------------------------------
// 9. qualitative ordering (informational)

fn criterion_9() -> Check {
    let outcome = run_plan(&suite_plan());
    let notes: Vec<String> = outcome
        .notes
        .iter()
        .filter(|n| n.contains("highest psnr") || n.contains("lowest time"))
        .cloned()
        .collect();
    Ok(notes.join("; "))
}

fn main() {
    type Entry = (u32, &'static str, u64, bool, fn() -> Check);
    let checks: Vec<Entry> = vec![
        (1, "operator correctness", 5, false, criterion_1),
        (2, "TV kernel", 10, false, criterion_2),
        (3, "small-instance solver oracles", 30, false, criterion_3),
        (4, "full-sampling recovery", 10, false, criterion_4),
        (5, "25% radial phantom beats zero-fill by 3 dB", 60, false, criterion_5),
        (6, "two FFTs per outer iteration", 60, false, criterion_6),
        (7, "monotonicity and determinism", 60, false, criterion_7),
        (8, "metric identities", 10, false, criterion_8),
        (9, "qualitative ordering", 120, true, criterion_9),
    ];
    let mut failed = 0;
    for (id, title, budget, informational, check) in checks {
        if let Status::Fail = run(id, title, Duration::from_secs(budget), informational, check) {
            failed += 1;
        }
    }
    println!("acceptance: {} of 8 asserted criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
