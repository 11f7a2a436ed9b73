use std::path::PathBuf;

use dualbound::codes::{code_bound, verify_lp, LpStatus};
use dualbound::exactfield::{BigFloat, Rat};
use dualbound::functional::FunctionalSpec;
use dualbound::magic::{f_value, verify, MagicCharge, VerifyThresholds};
use dualbound::sdp::{bound_search_with, BoundResult, SearchOptions};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::{write_atomic, CacheKey, ResultCache};
use crate::config::RunConfig;
use crate::render::{dec, FloatStr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    VerificationFailed,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::VerificationFailed => "verification_failed",
            Status::Error => "error",
        }
    }

    pub fn of(record: &Value) -> Status {
        match record.get("status").and_then(Value::as_str) {
            Some("ok") => Status::Ok,
            Some("verification_failed") => Status::VerificationFailed,
            _ => Status::Error,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Job {
    Code { n: usize },
    Lattice { n: u32 },
    Voa { c: Rat },
    MagicVerify { charge: MagicCharge },
    MagicPoint { charge: MagicCharge, h: Rat },
}

impl Job {
    pub fn pipeline(&self) -> &'static str {
        match self {
            Job::Code { .. } => "code-bound",
            Job::Lattice { .. } => "lattice-bound",
            Job::Voa { .. } => "voa-bound",
            Job::MagicVerify { .. } => "magic-verify",
            Job::MagicPoint { .. } => "magic-eval",
        }
    }

    /// Parameters that determine the record, and nothing else.
    fn key(&self, cfg: &RunConfig) -> CacheKey {
        let params = match self {
            Job::Code { n } => json!({ "n": n }),
            Job::Lattice { n } => json!({
                "n": n, "N": cfg.n_top, "precision": cfg.precision_bits, "tol": dec(cfg.bisect_tol),
            }),
            Job::Voa { c } => json!({
                "c": c.to_string(), "N": cfg.n_top, "precision": cfg.precision_bits,
                "tol": dec(cfg.bisect_tol), "vacuum": cfg.vacuum,
            }),
            Job::MagicVerify { charge } => json!({
                "c": charge.c, "precision": cfg.precision_bits, "quad_level": cfg.quad_level,
            }),
            Job::MagicPoint { charge, h } => json!({
                "c": charge.c, "h": h.to_string(), "precision": cfg.precision_bits, "quad_level": cfg.quad_level,
            }),
        };
        CacheKey::new(self.pipeline(), params)
    }

    /// Runs the job or replays it from the cache.
    pub fn run(&self, cfg: &RunConfig, cache: Option<&ResultCache>) -> Value {
        let key = self.key(cfg);
        if let Some(hit) = cache.and_then(|c| c.get(&key)) {
            log::info!("{}: cache hit {}", self.pipeline(), key.digest());
            return hit;
        }
        let record = match self.compute(cfg) {
            Ok((mut v, status)) => {
                v["status"] = json!(status.as_str());
                v
            }
            Err(msg) => json!({ "parameter": self.label(), "status": Status::Error.as_str(), "error": msg }),
        };
        if let Some(c) = cache {
            if Status::of(&record) != Status::Error {
                if let Err(e) = c.put(&key, &record) {
                    log::warn!("cache write failed: {e}");
                }
            }
        }
        record
    }

    fn label(&self) -> String {
        match self {
            Job::Code { n } => n.to_string(),
            Job::Lattice { n } => n.to_string(),
            Job::Voa { c } => c.to_string(),
            Job::MagicVerify { charge } => charge.c.to_string(),
            Job::MagicPoint { h, .. } => h.to_string(),
        }
    }

    fn compute(&self, cfg: &RunConfig) -> Result<(Value, Status), String> {
        match self {
            Job::Code { n } => code_record(*n),
            Job::Lattice { n } => {
                let spec = FunctionalSpec::lattice(*n, cfg.n_top, cfg.precision()).map_err(|e| e.to_string())?;
                bound_record(self, &spec, cfg)
            }
            Job::Voa { c } => {
                let spec = FunctionalSpec::voa(c.clone(), cfg.n_top, cfg.precision()).map_err(|e| e.to_string())?;
                bound_record(self, &spec, cfg)
            }
            Job::MagicVerify { charge } => {
                let report =
                    verify(charge, &cfg.quadrature(), &VerifyThresholds::default()).map_err(|e| e.to_string())?;
                let status = if report.passed {
                    Status::Ok
                } else {
                    Status::VerificationFailed
                };
                Ok((serde_json::to_value(&report).map_err(|e| e.to_string())?, status))
            }
            Job::MagicPoint { charge, h } => {
                let hf = BigFloat::with_val(cfg.precision_bits, h);
                let v = f_value(charge, &hf, &cfg.quadrature()).map_err(|e| format!("h = {h}: {e}"))?;
                let rec = json!({
                    "c": charge.c,
                    "h": dec(h.to_f64()),
                    "f": FloatStr::from(&v.value),
                    "error": dec(v.error),
                });
                Ok((rec, Status::Ok))
            }
        }
    }
}

#[derive(Serialize)]
struct CodeRecord {
    n: usize,
    mu: usize,
    status_per_k: Vec<&'static str>,
    objective_at_k_minus_1: Option<String>,
    certificates_verified: bool,
}

fn code_record(n: usize) -> Result<(Value, Status), String> {
    let b = code_bound(n).map_err(|e| e.to_string())?;
    let verified = b.outcomes.iter().all(verify_lp);
    let rec = CodeRecord {
        n,
        mu: b.mu,
        status_per_k: b
            .outcomes
            .iter()
            .map(|o| match o.status {
                LpStatus::Feasible => "feasible",
                LpStatus::Infeasible => "infeasible",
            })
            .collect(),
        objective_at_k_minus_1: b.objective_below_mu().map(|q| q.to_string()),
        certificates_verified: verified,
    };
    let status = if verified {
        Status::Ok
    } else {
        Status::VerificationFailed
    };
    Ok((serde_json::to_value(rec).map_err(|e| e.to_string())?, status))
}

#[derive(Serialize)]
struct BoundRecord {
    parameter: String,
    #[serde(rename = "N")]
    n_top: usize,
    precision: u32,
    delta_star: FloatStr,
    /// Feasible, then infeasible.
    bracket: [String; 2],
    certificate: Option<String>,
    unverified: bool,
    solver_iterations: usize,
    grid_min: String,
    relative_residual: String,
    positive_roots: usize,
    wall_time: String,
}

fn bound_record(job: &Job, spec: &FunctionalSpec, cfg: &RunConfig) -> Result<(Value, Status), String> {
    let opts = SearchOptions {
        bisect_tol: cfg.bisect_tol,
        vacuum: cfg.vacuum_convention(),
        ..SearchOptions::default()
    };
    let r = bound_search_with(spec, &opts).map_err(|e| e.to_string())?;
    let certificate = match &cfg.cert_dir {
        Some(dir) => Some(write_certificate(job, &r, cfg, dir)?),
        None => None,
    };
    let rec = BoundRecord {
        parameter: job.label(),
        n_top: r.n_top,
        precision: cfg.precision_bits,
        delta_star: FloatStr::from(&r.delta_star),
        bracket: [dec(r.bracket.0), dec(r.bracket.1)],
        certificate,
        unverified: r.unverified,
        solver_iterations: r.solver_iterations,
        grid_min: dec(r.verification.grid_min),
        relative_residual: dec(r.verification.relative_residual),
        positive_roots: r.verification.positive_roots,
        wall_time: dec(r.wall_time),
    };
    Ok((serde_json::to_value(rec).map_err(|e| e.to_string())?, Status::Ok))
}

fn write_certificate(job: &Job, r: &BoundResult, cfg: &RunConfig, dir: &std::path::Path) -> Result<String, String> {
    let name = format!(
        "{}-{}-N{}-p{}.json",
        job.pipeline(),
        job.label().replace('/', "_"),
        cfg.n_top,
        cfg.precision_bits
    );
    let path: PathBuf = dir.join(name);
    let body = json!({ "spec": r.spec, "vacuum": cfg.vacuum, "certificate": r.certificate });
    let bytes = serde_json::to_vec_pretty(&body).map_err(|e| e.to_string())?;
    write_atomic(&path, &bytes).map_err(|e| format!("writing {}: {e}", path.display()))?;
    Ok(path.display().to_string())
}
