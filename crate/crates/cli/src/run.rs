//! Dispatch from a [`RunConfig`] to the library and the resulting record.

use std::time::Instant;

use hilbert_tensor::definiteness::sample_mixed;
use hilbert_tensor::quadrature::quadrature_estimate;
use hilbert_tensor::spectral::dense_spectral_radius;
use hilbert_tensor::{
    apply_fast, apply_naive, check_h_bound, check_z_bound, entry, estimate_operator_norm,
    h_spectral_radius, pd_check, rayleigh_m, z_spectral_radius, ApplyMethod, BoundCheck,
    BoundReport, ConstantsBundle, DenseVector, EigenEstimate, MultiIndex, NormEstimate, PdReport,
    TensorSpec, TruncatedOperatorSpec, Warning, ZOptions,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ApplyChoice, Command, RunConfig, SolverParams, SpecParams, SweepMode};
use crate::error::{CliError, CliResult};

/// How an observed eigenvalue magnitude was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observation {
    PowerMethod,
    ShiftedPower,
    DenseOracle,
    /// Largest sampled `|H x^m| / ‖x‖_m^m`: a lower estimate only.
    RayleighSampling,
    NotComputed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsOutcome {
    pub constants: ConstantsBundle,
    pub h_source: Observation,
    pub h: BoundCheck,
    pub z_source: Observation,
    pub z: BoundReport,
    /// Every checked bound holds.
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMode {
    H,
    Z,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SweepRow {
    Bounds {
        spec: SpecParams,
        outcome: BoundsOutcome,
    },
    Pdcheck {
        spec: SpecParams,
        report: PdReport,
    },
}

impl SweepRow {
    pub fn spec(&self) -> SpecParams {
        match self {
            SweepRow::Bounds { spec, .. } | SweepRow::Pdcheck { spec, .. } => *spec,
        }
    }

    fn violates(&self) -> bool {
        match self {
            SweepRow::Bounds { outcome, .. } => !outcome.holds,
            SweepRow::Pdcheck { report, .. } => report.contradicts_theorem(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Entry {
        value: f64,
    },
    Apply {
        vector: Vec<f64>,
        scalar: f64,
        method: ApplyMethod,
        /// Gauss–Legendre node count; quadrature only.
        nodes: Option<usize>,
    },
    Eigen {
        mode: EigenMode,
        estimate: EigenEstimate,
    },
    Bounds(BoundsOutcome),
    Pdcheck(PdReport),
    Opnorm(NormEstimate),
    Sweep {
        rows: Vec<SweepRow>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub config: RunConfig,
    pub result: Payload,
    pub warnings: Vec<Warning>,
    pub wall_time_s: f64,
}

impl ResultRecord {
    /// A checked claim failed: a bound, a theorem-backed sign, or a norm bound.
    pub fn has_violation(&self) -> bool {
        match &self.result {
            Payload::Bounds(outcome) => !outcome.holds,
            Payload::Pdcheck(report) => report.contradicts_theorem(),
            Payload::Opnorm(estimate) => !estimate.within_bound,
            Payload::Sweep { rows } => rows.iter().any(SweepRow::violates),
            _ => false,
        }
    }

    /// Process exit status for a completed run.
    pub fn exit_code(&self) -> u8 {
        u8::from(self.has_violation())
    }
}

fn tensor(spec: &SpecParams) -> CliResult<TensorSpec> {
    Ok(TensorSpec::finite(spec.m, spec.n, spec.a)?)
}

fn z_options(solver: &SolverParams, seed: u64) -> ZOptions {
    ZOptions {
        tol: solver.tol,
        max_iter: solver.max_iter,
        restarts: solver.restarts,
        seed,
    }
}

/// Largest sampled H-Rayleigh quotient; used where the power method does not apply.
fn sampled_h_observation(spec: &TensorSpec, samples: usize, seed: u64) -> CliResult<f64> {
    let n = spec.require_dim()?;
    let values = (0..samples as u64)
        .into_par_iter()
        .map(|t| rayleigh_m(spec, &sample_mixed(n, seed, t)))
        .collect::<hilbert_tensor::Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

/// Observes `ρ_H` and `ρ_Z` and checks both against their bounds.
///
/// `m = 2` with `a < 0` uses the dense spectrum for both; other `a < 0`
/// cases fall back to Rayleigh sampling for H and shifted power iteration
/// for Z.
pub fn bounds_outcome(
    spec: &SpecParams,
    solver: &SolverParams,
    samples: usize,
    seed: u64,
) -> CliResult<BoundsOutcome> {
    let t = tensor(spec)?;
    let constants = ConstantsBundle::for_spec(&t);
    let positive = spec.a > 0.0;
    let odd = spec.m % 2 == 1;

    let (h_source, h) = if odd {
        (Observation::NotComputed, BoundReport::h_bound(&t, 0.0)?)
    } else if positive {
        let est = h_spectral_radius(&t, solver.tol, solver.max_iter)?;
        (Observation::PowerMethod, check_h_bound(&t, &est)?)
    } else if spec.m == 2 {
        (
            Observation::DenseOracle,
            BoundReport::h_bound(&t, dense_spectral_radius(&t)?)?,
        )
    } else {
        let observed = sampled_h_observation(&t, samples, seed)?;
        (
            Observation::RayleighSampling,
            BoundReport::h_bound(&t, observed)?,
        )
    };

    let (z_source, z) = if spec.m == 2 && !positive {
        (
            Observation::DenseOracle,
            BoundReport::z_bound(&t, dense_spectral_radius(&t)?)?,
        )
    } else {
        let est = z_spectral_radius(&t, &z_options(solver, seed))?;
        (Observation::ShiftedPower, check_z_bound(&t, &est)?)
    };

    let holds = h.holds() && z.holds;
    Ok(BoundsOutcome {
        constants,
        h_source,
        h,
        z_source,
        z,
        holds,
    })
}

fn payload(command: &Command, seed: u64, warnings: &mut Vec<Warning>) -> CliResult<Payload> {
    Ok(match command {
        Command::Entry { spec, idx } => {
            let e = entry(&tensor(spec)?, &MultiIndex::new(idx.clone())?)?;
            warnings.extend(e.warning);
            Payload::Entry { value: e.value }
        }
        Command::Apply {
            spec, x, method, ..
        } => {
            let t = tensor(spec)?;
            let x = DenseVector::new(x.clone())?;
            match method {
                ApplyChoice::Fast | ApplyChoice::Naive => {
                    let r = if *method == ApplyChoice::Fast {
                        apply_fast(&t, &x)?
                    } else {
                        apply_naive(&t, &x)?
                    };
                    warnings.extend(r.warnings);
                    Payload::Apply {
                        vector: r.vector.into_vec(),
                        scalar: r.scalar,
                        method: r.method,
                        nodes: None,
                    }
                }
                ApplyChoice::Quadrature => {
                    // the quadrature route yields the scalar; the vector comes from the fast path
                    let fast = apply_fast(&t, &x)?;
                    let q = quadrature_estimate(&t, &x, None)?;
                    warnings.extend(fast.warnings);
                    Payload::Apply {
                        vector: fast.vector.into_vec(),
                        scalar: q.value,
                        method: ApplyMethod::Quadrature,
                        nodes: Some(q.nodes),
                    }
                }
            }
        }
        Command::Hspec { spec, solver } => Payload::Eigen {
            mode: EigenMode::H,
            estimate: h_spectral_radius(&tensor(spec)?, solver.tol, solver.max_iter)?,
        },
        Command::Zspec { spec, solver } => Payload::Eigen {
            mode: EigenMode::Z,
            estimate: z_spectral_radius(&tensor(spec)?, &z_options(solver, seed))?,
        },
        Command::Bounds {
            spec,
            solver,
            samples,
        } => Payload::Bounds(bounds_outcome(spec, solver, *samples, seed)?),
        Command::Pdcheck { spec, trials } => {
            Payload::Pdcheck(pd_check(&tensor(spec)?, *trials, seed)?)
        }
        Command::Opnorm {
            m,
            a,
            operator,
            samples,
            truncation,
            p,
        } => {
            let spec = match p {
                Some(p) => TruncatedOperatorSpec::new(*operator, *m, *a, *truncation, *p)?,
                None => TruncatedOperatorSpec::standard(*operator, *m, *a, *truncation)?,
            };
            Payload::Opnorm(estimate_operator_norm(&spec, *samples, seed)?)
        }
        Command::Sweep {
            grid,
            mode,
            solver,
            samples,
            trials,
        } => {
            let rows = grid
                .tuples()
                .par_iter()
                .map(|spec| match mode {
                    SweepMode::Bounds => Ok(SweepRow::Bounds {
                        spec: *spec,
                        outcome: bounds_outcome(spec, solver, *samples, seed)?,
                    }),
                    SweepMode::Pdcheck => Ok(SweepRow::Pdcheck {
                        spec: *spec,
                        report: pd_check(&tensor(spec)?, *trials, seed)?,
                    }),
                })
                .collect::<CliResult<Vec<SweepRow>>>()?;
            Payload::Sweep { rows }
        }
    })
}

/// Executes a validated configuration.
pub fn run(config: &RunConfig) -> Result<ResultRecord, CliError> {
    let start = Instant::now();
    let mut warnings = Vec::new();
    let result = payload(&config.command, config.seed, &mut warnings)?;
    Ok(ResultRecord {
        config: config.clone(),
        result,
        warnings,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}
