//! Benchmark plan files.
//!
//! A plan is flat `key=value` text; `#` starts a comment. Keys:
//!
//! ```text
//! image=brain.pgm          # repeatable; relative to the plan's directory
//! image=phantom:128        # built-in Shepp-Logan phantom, 128×128
//! solvers=twist,recpf,salsa
//! tv_weight=0.01           # translated into each solver's λ convention
//! mask.kind=radial         # full | radial | variable-density
//! mask.fraction=0.25
//! mask.tol=0.01
//! mask.lines=22            # radial only; overrides mask.fraction
//! mask.decay=2             # variable-density only
//! mask.seed=0
//! solver.salsa.mu=0.1      # per-solver overrides
//! output=results
//! emit_images=true
//! parallel=false
//! ```

use std::path::{Path, PathBuf};

use csrecon::sampling::{MaskSpec, RadialLines};
use csrecon::solvers::{SolverConfig, SolverKind, DEFAULT_TV_WEIGHT};

use crate::error::{BenchError, Result};

/// Where a benchmark image comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum ImageSource {
    File(PathBuf),
    Phantom { width: usize, height: usize },
}

impl ImageSource {
    /// Name used in the results table.
    pub fn name(&self) -> String {
        match self {
            ImageSource::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            ImageSource::Phantom { width, height } if width == height => format!("phantom{width}"),
            ImageSource::Phantom { width, height } => format!("phantom{width}x{height}"),
        }
    }

    /// Parses `phantom:N`, `phantom:WxH`, or a path (resolved against `base`).
    pub fn parse(text: &str, base: &Path) -> std::result::Result<Self, String> {
        if let Some(size) = text.strip_prefix("phantom:") {
            let (w, h) = match size.split_once('x') {
                Some((w, h)) => (w, h),
                None => (size, size),
            };
            let dim = |s: &str| match s.trim().parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(format!("bad phantom size `{size}`")),
            };
            return Ok(ImageSource::Phantom {
                width: dim(w)?,
                height: dim(h)?,
            });
        }
        let path = Path::new(text);
        Ok(ImageSource::File(if path.is_absolute() { path.to_path_buf() } else { base.join(path) }))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub images: Vec<ImageSource>,
    /// Mask template; its dimensions are replaced by each image's.
    pub mask: MaskSpec,
    pub solvers: Vec<SolverKind>,
    pub tv_weight: f64,
    /// Effective configuration per entry of `solvers`.
    pub configs: Vec<SolverConfig>,
    pub output: PathBuf,
    pub emit_images: bool,
    pub parallel: bool,
}

impl BenchPlan {
    pub fn config(&self, kind: SolverKind) -> SolverConfig {
        self.solvers
            .iter()
            .position(|&k| k == kind)
            .map(|i| self.configs[i])
            .unwrap_or_else(|| SolverConfig::with_tv_weight(kind, self.tv_weight))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut images = Vec::new();
        let mut solvers: Option<Vec<SolverKind>> = None;
        let mut tv_weight = DEFAULT_TV_WEIGHT;
        let mut kind = "radial".to_string();
        let mut fraction = 0.25;
        let mut tol = 0.01;
        let mut lines: Option<usize> = None;
        let mut decay = 2.0;
        let mut seed = 0u64;
        let mut overrides: Vec<(usize, SolverKind, String, String)> = Vec::new();
        let mut output = base.join("results");
        let mut emit_images = false;
        let mut parallel = false;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |reason: String| BenchError::Plan { line: line_no, reason };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, found `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());

            match key {
                "image" => images.push(ImageSource::parse(value, base).map_err(err)?),
                "solvers" => {
                    let list = value
                        .split(',')
                        .map(|s| s.trim().parse::<SolverKind>().map_err(|e| err(e.to_string())))
                        .collect::<Result<Vec<_>>>()?;
                    solvers = Some(list);
                }
                "tv_weight" => tv_weight = parse_num(value).map_err(err)?,
                "mask.kind" => kind = value.to_ascii_lowercase(),
                "mask.fraction" => fraction = parse_num(value).map_err(err)?,
                "mask.tol" => tol = parse_num(value).map_err(err)?,
                "mask.lines" => lines = Some(parse_num(value).map_err(err)?),
                "mask.decay" => decay = parse_num(value).map_err(err)?,
                "mask.seed" => seed = parse_num(value).map_err(err)?,
                "output" => output = base.join(value),
                "emit_images" => emit_images = parse_bool(value).map_err(err)?,
                "parallel" => parallel = parse_bool(value).map_err(err)?,
                _ => {
                    let Some(rest) = key.strip_prefix("solver.") else {
                        return Err(err(format!("unknown key `{key}`")));
                    };
                    let (name, param) = rest
                        .split_once('.')
                        .ok_or_else(|| err(format!("expected solver.<name>.<param>, found `{key}`")))?;
                    let solver = name.parse::<SolverKind>().map_err(|e| err(e.to_string()))?;
                    overrides.push((line_no, solver, param.to_string(), value.to_string()));
                }
            }
        }

        let plan_err = |reason: String| BenchError::Plan { line: 0, reason };
        if images.is_empty() {
            return Err(plan_err("at least one `image=` line is required".into()));
        }
        let solvers = solvers.unwrap_or_else(|| SolverKind::ALL.to_vec());
        if solvers.is_empty() {
            return Err(plan_err("at least one solver is required".into()));
        }
        if !(tv_weight > 0.0 && tv_weight.is_finite()) {
            return Err(plan_err(format!("tv_weight {tv_weight} must be positive")));
        }
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(plan_err(format!("mask.fraction {fraction} must lie in (0, 1]")));
        }
        let mask = match kind.as_str() {
            "full" => MaskSpec::Full { width: 1, height: 1 },
            "radial" => MaskSpec::Radial {
                width: 1,
                height: 1,
                lines: match lines {
                    Some(n) => RadialLines::Count(n),
                    None => RadialLines::Fraction { target: fraction, tol },
                },
            },
            "variable-density" | "variable_density" | "vd" => MaskSpec::VariableDensity {
                width: 1,
                height: 1,
                target_fraction: fraction,
                decay,
                seed,
            },
            other => return Err(plan_err(format!("unknown mask.kind `{other}`"))),
        };

        let mut configs: Vec<SolverConfig> = solvers
            .iter()
            .map(|&k| SolverConfig::with_tv_weight(k, tv_weight))
            .collect();
        for (line, solver, param, value) in &overrides {
            let err = |reason: String| BenchError::Plan { line: *line, reason };
            let Some(i) = solvers.iter().position(|k| k == solver) else {
                return Err(err(format!("override for `{solver}`, which is not in `solvers`")));
            };
            apply_param(&mut configs[i], *solver, param, value).map_err(err)?;
        }
        for cfg in &configs {
            cfg.validate()?;
        }

        Ok(BenchPlan {
            images,
            mask,
            solvers,
            tv_weight,
            configs,
            output,
            emit_images,
            parallel,
        })
    }
}

fn parse_num<T: std::str::FromStr>(value: &str) -> std::result::Result<T, String> {
    value.parse().map_err(|_| format!("`{value}` is not a valid number"))
}

fn parse_bool(value: &str) -> std::result::Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("`{value}` is not a boolean")),
    }
}

fn parse_auto(value: &str) -> std::result::Result<Option<f64>, String> {
    if value.eq_ignore_ascii_case("auto") {
        Ok(None)
    } else {
        parse_num(value).map(Some)
    }
}

/// Sets one named solver parameter; `tv_weight` is translated into λ for `kind`.
pub fn apply_param(cfg: &mut SolverConfig, kind: SolverKind, param: &str, value: &str) -> std::result::Result<(), String> {
    match param {
        "lambda" => cfg.lambda = parse_num(value)?,
        "tv_weight" => cfg.lambda = kind.lambda_for_tv_weight(parse_num(value)?),
        "max_iter" => cfg.max_iter = parse_num(value)?,
        "tol" => cfg.tol = parse_num(value)?,
        "inner_prox_iters" => cfg.inner_prox_iters = parse_num(value)?,
        "twist_alpha" | "alpha" => cfg.twist_alpha = parse_auto(value)?,
        "twist_beta" => cfg.twist_beta = parse_auto(value)?,
        "beta" if kind == SolverKind::Twist => cfg.twist_beta = parse_auto(value)?,
        "recpf_beta" | "beta" => cfg.recpf_beta = parse_num(value)?,
        "salsa_mu" | "mu" => cfg.salsa_mu = parse_num(value)?,
        other => return Err(format!("unknown solver parameter `{other}`")),
    }
    Ok(())
}

/// `key=value` lines describing a configuration, prefixed with the solver name.
pub fn config_lines(kind: SolverKind, cfg: &SolverConfig) -> Vec<(String, String)> {
    let auto = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_else(|| "auto".into());
    let p = |k: &str| format!("config.{kind}.{k}");
    vec![
        (p("lambda"), cfg.lambda.to_string()),
        (p("max_iter"), cfg.max_iter.to_string()),
        (p("tol"), cfg.tol.to_string()),
        (p("inner_prox_iters"), cfg.inner_prox_iters.to_string()),
        (p("twist_alpha"), auto(cfg.twist_alpha)),
        (p("twist_beta"), auto(cfg.twist_beta)),
        (p("recpf_beta"), cfg.recpf_beta.to_string()),
        (p("salsa_mu"), cfg.salsa_mu.to_string()),
    ]
}
