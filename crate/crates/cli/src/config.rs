use std::path::{Path, PathBuf};

use dualbound::exactfield::{parse_rat, Precision, Rat};
use dualbound::functional::VacuumConvention;
use dualbound::magic::QuadratureConfig;
use serde::Serialize;

use crate::args::{Format, GlobalOpts, Vacuum};

pub const CACHE_ENV: &str = "DUALBOUND_CACHE";
const MAX_PRECISION: u32 = 1 << 14;
const MAX_N: usize = 64;
const MAX_POINTS: usize = 10_000;

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub precision_bits: u32,
    #[serde(rename = "N")]
    pub n_top: usize,
    #[serde(serialize_with = "crate::render::ser_f64")]
    pub bisect_tol: f64,
    pub quad_level: u32,
    pub output_format: Format,
    pub vacuum: Vacuum,
    #[serde(skip)]
    pub cache_path: Option<PathBuf>,
    #[serde(skip)]
    pub cert_dir: Option<PathBuf>,
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl RunConfig {
    /// Validates every field. `env_cache` is the value of `DUALBOUND_CACHE`, which overrides `--cache`.
    pub fn from_opts(opts: &GlobalOpts, default_format: Format, env_cache: Option<&Path>) -> Result<Self, String> {
        if opts.precision < Precision::MIN_BITS || opts.precision > MAX_PRECISION {
            return Err(format!(
                "--precision must lie in {}..={MAX_PRECISION}, got {}",
                Precision::MIN_BITS,
                opts.precision
            ));
        }
        if opts.n_top == 0 || opts.n_top > MAX_N {
            return Err(format!("--N must lie in 1..={MAX_N}, got {}", opts.n_top));
        }
        if !(opts.tol > 0.0 && opts.tol < 1.0) {
            return Err(format!("--tol must lie in (0, 1), got {}", opts.tol));
        }
        if !(3..=16).contains(&opts.quad_level) {
            return Err(format!("--quad-level must lie in 3..=16, got {}", opts.quad_level));
        }
        if opts.jobs == Some(0) {
            return Err("--jobs must be positive".into());
        }
        let cache_path = env_cache
            .filter(|p| !p.as_os_str().is_empty())
            .map(Path::to_path_buf)
            .or_else(|| opts.cache.clone());
        let cert_dir = opts
            .cert_dir
            .clone()
            .or_else(|| cache_path.as_ref().map(|c| c.join("certificates")));
        Ok(RunConfig {
            precision_bits: opts.precision,
            n_top: opts.n_top,
            bisect_tol: opts.tol,
            quad_level: opts.quad_level,
            output_format: opts.format.unwrap_or(default_format),
            vacuum: opts.vacuum,
            cache_path,
            cert_dir,
            jobs: opts.jobs,
        })
    }

    pub fn precision(&self) -> Precision {
        Precision::new(self.precision_bits).expect("validated")
    }

    pub fn vacuum_convention(&self) -> VacuumConvention {
        match self.vacuum {
            Vacuum::Leading => VacuumConvention::Leading,
            Vacuum::Subtracted => VacuumConvention::Subtracted,
        }
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig {
            max_level: self.quad_level,
            precision: self.precision(),
            ..QuadratureConfig::default()
        }
    }
}

/// `start:end:step` with exact rational arithmetic, `end` included.
pub fn parse_h_range(s: &str) -> Result<Vec<Rat>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err(format!("expected start:end:step, got {s:?}"));
    };
    let parse = |t: &str| parse_rat(t).map_err(|e| e.to_string());
    let (a, b, step) = (parse(a)?, parse(b)?, parse(step)?);
    if a < 0 {
        return Err("h range must start at a nonnegative value".into());
    }
    if step <= 0 {
        return Err("h step must be positive".into());
    }
    if b < a {
        return Err("h range end precedes its start".into());
    }
    let count = (Rat::from(&b - &a) / &step)
        .floor()
        .numer()
        .to_usize()
        .unwrap_or(usize::MAX);
    if count >= MAX_POINTS {
        return Err(format!("h range has more than {MAX_POINTS} points"));
    }
    Ok((0..=count)
        .map(|i| Rat::from(&a + Rat::from(&step * i as u64)))
        .collect())
}

/// Central charges are exact rationals above 1.
pub fn parse_charge(s: &str) -> Result<Rat, String> {
    let c = parse_rat(s).map_err(|e| e.to_string())?;
    if c <= 1 {
        return Err(format!("central charge must exceed 1, got {s}"));
    }
    Ok(c)
}
