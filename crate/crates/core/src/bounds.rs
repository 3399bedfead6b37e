//! Quantum-speed-limit bound evaluators along channel trajectories.
//!
//! Three bound families share one shape: a distinguishability numerator at
//! time t over an average speed `(1/t) int_0^t (integrand)`. In a numerical
//! simulation the trajectory becomes indistinguishable from its stationary
//! state at a finite resolution time tau_cri, after which the unmodified
//! bounds keep growing with t even though nothing observable changes. The
//! modified series freezes every bound at its tau_cri evaluation, which
//! removes the runaway growth and leaves the pre-tau_cri values untouched.

use std::cell::RefCell;

use crate::channels::ChannelModel;
use crate::error::{Error, Result};
use crate::metrics::{bures_angle, metric_sample, trace_distance};
use crate::qmat::{commutator, hs_norm, DensityMatrix};
use crate::quad::{cumulative_on_grid, extend_cell, gauss4};

/// Bisection resolution for the tau_cri refinement.
const TAU_CRI_RESOLUTION: f64 = 1e-9;
/// Numerator below which a zero average speed is treated as 0/0 -> 0.
const DEGENERATE_NUMERATOR_TOL: f64 = 1e-12;

/// The bound families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// Bures angle over the average QFI speed.
    Av,
    /// sin^2 of the Bures angle over the average operator-norm speed.
    Op,
    /// sin^2 of the Bures angle over the average Hilbert-Schmidt speed.
    Hs,
    /// sin^2 of the Bures angle over the average trace-norm speed.
    Tr,
    /// sin^2 of the Bures angle over the smallest of the three averages.
    UnifiedMin,
    /// Commutator quantumness over the average commutator speed.
    Quant,
}

impl BoundKind {
    pub const ALL: [BoundKind; 6] = [
        BoundKind::Av,
        BoundKind::Op,
        BoundKind::Hs,
        BoundKind::Tr,
        BoundKind::UnifiedMin,
        BoundKind::Quant,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            BoundKind::Av => "av",
            BoundKind::Op => "op",
            BoundKind::Hs => "hs",
            BoundKind::Tr => "tr",
            BoundKind::UnifiedMin => "min",
            BoundKind::Quant => "quant",
        }
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Witness function used to detect the resolution time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// Trace distance from the evolved state to the stationary state.
    TraceDistanceToStationary,
    /// Magnitude of the channel's decoherence function.
    DecoherenceMagnitude,
}

impl Witness {
    pub fn label(&self) -> &'static str {
        match self {
            Witness::TraceDistanceToStationary => "trace-distance",
            Witness::DecoherenceMagnitude => "decoherence",
        }
    }
}

/// Resolution threshold and scan window for tau_cri detection.
#[derive(Debug, Clone, Copy)]
pub struct ResolutionConfig {
    pub epsilon: f64,
    pub witness: Witness,
    pub t_max: f64,
    pub dt: f64,
}

impl ResolutionConfig {
    pub fn new(epsilon: f64, witness: Witness, t_max: f64, dt: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                reason: "must be in (0, 1)",
            });
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: dt,
                reason: "must be finite and > 0",
            });
        }
        if !(t_max.is_finite() && t_max > dt) {
            return Err(Error::InvalidParameter {
                name: "t_max",
                value: t_max,
                reason: "must be finite and > dt",
            });
        }
        Ok(Self {
            epsilon,
            witness,
            t_max,
            dt,
        })
    }

    /// Uniform grid `0, dt, ..., n dt` with `n = floor(t_max/dt)`.
    pub fn grid(&self) -> Vec<f64> {
        let n = (self.t_max / self.dt + 1e-9).floor() as usize;
        (0..=n).map(|i| i as f64 * self.dt).collect()
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 || grid[0] != 0.0 {
        return Err(Error::InvalidParameter {
            name: "grid",
            value: grid.first().copied().unwrap_or(f64::NAN),
            reason: "grid must start at 0 and have at least two points",
        });
    }
    let increasing = grid
        .windows(2)
        .all(|w| w[0].is_finite() && w[1].is_finite() && w[0] < w[1]);
    if !increasing {
        return Err(Error::InvalidParameter {
            name: "grid",
            value: f64::NAN,
            reason: "grid must be strictly increasing",
        });
    }
    Ok(())
}

/// Instantaneous speed integrand for one bound family.
fn speed_integrand(
    kind: BoundKind,
    t: f64,
    rho0: &DensityMatrix,
    model: &ChannelModel,
) -> Result<f64> {
    let s = metric_sample(t, rho0, model)?;
    Ok(match kind {
        BoundKind::Av => s.qfi.max(0.0).sqrt() / 2.0,
        BoundKind::Op => s.speed_op,
        BoundKind::Hs => s.speed_hs,
        BoundKind::Tr => s.speed_tr,
        BoundKind::Quant => s.speed_quant,
        BoundKind::UnifiedMin => unreachable!("handled by cumulative_speed_integral"),
    })
}

/// Run a fallible integrand through the infallible grid integrator.
fn cumulative_fallible<F>(f: F, grid: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let g = |t: f64| match f(t) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let out = cumulative_on_grid(&g, grid);
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Cumulative integral of the bound's speed integrand along the grid.
///
/// `UnifiedMin` takes the pointwise minimum of the three norm cumulatives,
/// matching a minimum over the three average velocities.
pub fn cumulative_speed_integral(
    kind: BoundKind,
    rho0: &DensityMatrix,
    model: &ChannelModel,
    grid: &[f64],
) -> Result<Vec<f64>> {
    check_grid(grid)?;
    match kind {
        BoundKind::UnifiedMin => {
            let op = cumulative_fallible(|t| speed_integrand(BoundKind::Op, t, rho0, model), grid)?;
            let hs = cumulative_fallible(|t| speed_integrand(BoundKind::Hs, t, rho0, model), grid)?;
            let tr = cumulative_fallible(|t| speed_integrand(BoundKind::Tr, t, rho0, model), grid)?;
            Ok(op
                .iter()
                .zip(hs.iter())
                .zip(tr.iter())
                .map(|((&a, &b), &c)| a.min(b).min(c))
                .collect())
        }
        _ => cumulative_fallible(|t| speed_integrand(kind, t, rho0, model), grid),
    }
}

/// Evaluate the tau_cri witness at one time point.
pub fn witness_value(
    t: f64,
    rho0: &DensityMatrix,
    model: &ChannelModel,
    witness: Witness,
) -> Result<f64> {
    match witness {
        Witness::TraceDistanceToStationary => {
            let rho_t = model.evolve(rho0, t)?;
            Ok(trace_distance(&rho_t, &model.stationary_state(rho0)))
        }
        Witness::DecoherenceMagnitude => Ok(model.decoherence(t)?.abs()),
    }
}

/// Find the resolution time tau_cri: the earliest time at which the witness
/// drops below epsilon *and stays below it* through the whole scan window.
///
/// The stay-below requirement guards against non-Markovian recurrences that
/// dip under the threshold and come back up. The grid crossing is refined by
/// bisection to 1e-9 time resolution. Returns `None` when the witness is
/// still above epsilon at t_max.
pub fn find_tau_cri(
    rho0: &DensityMatrix,
    model: &ChannelModel,
    cfg: &ResolutionConfig,
) -> Result<Option<f64>> {
    let grid = cfg.grid();
    let mut last_above: Option<usize> = None;
    for (i, &t) in grid.iter().enumerate() {
        if witness_value(t, rho0, model, cfg.witness)? >= cfg.epsilon {
            last_above = Some(i);
        }
    }
    let Some(j) = last_above else {
        // below threshold already at t = 0
        return Ok(Some(0.0));
    };
    if j == grid.len() - 1 {
        return Ok(None);
    }
    let mut lo = grid[j];
    let mut hi = grid[j + 1];
    for _ in 0..200 {
        if hi - lo <= TAU_CRI_RESOLUTION {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if witness_value(mid, rho0, model, cfg.witness)? < cfg.epsilon {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Distinguishability numerator of a bound at time t.
fn numerator(kind: BoundKind, t: f64, rho0: &DensityMatrix, model: &ChannelModel) -> Result<f64> {
    let rho_t = model.evolve(rho0, t)?;
    Ok(match kind {
        BoundKind::Av => bures_angle(rho0, &rho_t)?,
        BoundKind::Op | BoundKind::Hs | BoundKind::Tr | BoundKind::UnifiedMin => {
            let b = bures_angle(rho0, &rho_t)?;
            let s = b.sin();
            s * s
        }
        // ||[rho0, rho_t]||_hs = sqrt(Q/2); saturates the Cauchy-Schwarz
        // derivation of the quantumness bound.
        BoundKind::Quant => hs_norm(&commutator(rho0.matrix(), rho_t.matrix())),
    })
}

/// The QSL estimate at one time: numerator over average speed.
///
/// `cumulative` is the speed integral from 0 to t. Both the numerator and
/// the average vanish at t = 0 (and stay zero on fully degenerate
/// trajectories); that 0/0 is defined as 0. A zero average with a
/// non-vanishing numerator is a genuine error.
pub fn qsl_time(
    kind: BoundKind,
    t: f64,
    rho0: &DensityMatrix,
    model: &ChannelModel,
    cumulative: f64,
) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let num = numerator(kind, t, rho0, model)?;
    if cumulative == 0.0 {
        if num.abs() <= DEGENERATE_NUMERATOR_TOL {
            return Ok(0.0);
        }
        return Err(Error::DegenerateBound { t, numerator: num });
    }
    Ok(num * t / cumulative)
}

/// One bound family evaluated along a time grid.
#[derive(Debug, Clone)]
pub struct BoundSeries {
    pub kind: BoundKind,
    pub times: Vec<f64>,
    pub tau_qsl: Vec<f64>,
    /// tau_qsl / t, clamped at 1; the t = 0 entry is 1 for Av (whose small-t
    /// limit saturates) and NaN otherwise.
    pub tightness: Vec<f64>,
    pub tau_cri: Option<f64>,
    /// The bound's value at tau_cri; every grid point at or past tau_cri
    /// holds exactly this value in modified mode.
    pub frozen_value: Option<f64>,
    pub modified: bool,
}

fn tightness_of(kind: BoundKind, times: &[f64], tau: &[f64]) -> Vec<f64> {
    times
        .iter()
        .zip(tau.iter())
        .map(|(&t, &v)| {
            if t == 0.0 {
                if kind == BoundKind::Av {
                    1.0
                } else {
                    f64::NAN
                }
            } else {
                (v / t).min(1.0)
            }
        })
        .collect()
}

/// Evaluate one bound family over an explicit monotone grid.
///
/// `tau_cri = Some(tc)` selects the modified (frozen) series; `tc` must lie
/// inside the grid span. `None` gives the unmodified series.
pub fn qsl_series_on_grid(
    kind: BoundKind,
    rho0: &DensityMatrix,
    model: &ChannelModel,
    grid: &[f64],
    tau_cri: Option<f64>,
) -> Result<BoundSeries> {
    check_grid(grid)?;
    let cumulative = cumulative_speed_integral(kind, rho0, model, grid)?;
    let mut tau = Vec::with_capacity(grid.len());
    for (i, &t) in grid.iter().enumerate() {
        tau.push(qsl_time(kind, t, rho0, model, cumulative[i])?);
    }

    let mut frozen_value = None;
    if let Some(tc) = tau_cri {
        let t_end = *grid.last().expect("grid non-empty");
        if !(0.0..=t_end).contains(&tc) {
            return Err(Error::InvalidParameter {
                name: "tau_cri",
                value: tc,
                reason: "must lie within the grid span",
            });
        }
        let frozen = if tc == 0.0 {
            0.0
        } else {
            // cumulative up to tc: last covered grid point plus a partial cell
            let k = grid
                .iter()
                .rposition(|&t| t <= tc)
                .expect("grid starts at 0");
            let integrand = |u: f64| speed_integrand_min(kind, u, rho0, model);
            let failure: RefCell<Option<Error>> = RefCell::new(None);
            let g = |u: f64| match integrand(u) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            };
            let c_cri = cumulative[k] + extend_cell(&g, grid[k], tc);
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            qsl_time(kind, tc, rho0, model, c_cri)?
        };
        for (i, &t) in grid.iter().enumerate() {
            if t >= tc {
                tau[i] = frozen;
            }
        }
        frozen_value = Some(frozen);
    }

    let tightness = tightness_of(kind, grid, &tau);
    Ok(BoundSeries {
        kind,
        times: grid.to_vec(),
        tau_qsl: tau,
        tightness,
        tau_cri,
        frozen_value,
        modified: tau_cri.is_some(),
    })
}

/// UnifiedMin needs the min of the three norms pointwise for the partial
/// freeze cell; for a Hermitian traceless derivative that minimum is always
/// the operator norm, and the other kinds just delegate.
fn speed_integrand_min(
    kind: BoundKind,
    t: f64,
    rho0: &DensityMatrix,
    model: &ChannelModel,
) -> Result<f64> {
    match kind {
        BoundKind::UnifiedMin => {
            let s = metric_sample(t, rho0, model)?;
            Ok(s.speed_op.min(s.speed_hs).min(s.speed_tr))
        }
        _ => speed_integrand(kind, t, rho0, model),
    }
}

/// Evaluate one bound family on the config's uniform grid.
///
/// In modified mode tau_cri is detected first; failing to reach it within
/// t_max is an error, mirroring the fact that the frozen series is undefined
/// without it.
pub fn qsl_series(
    kind: BoundKind,
    rho0: &DensityMatrix,
    model: &ChannelModel,
    cfg: &ResolutionConfig,
    modified: bool,
) -> Result<BoundSeries> {
    let grid = cfg.grid();
    let tau_cri = if modified {
        match find_tau_cri(rho0, model, cfg)? {
            Some(tc) => Some(tc),
            None => return Err(Error::TauCriNotReached { t_max: cfg.t_max }),
        }
    } else {
        None
    };
    qsl_series_on_grid(kind, rho0, model, &grid, tau_cri)
}

/// Speed integrand value at a single time, re-exported for diagnostics;
/// the Gauss rule keeps the t = 0 sample out of the quadrature entirely.
pub fn first_cell_integral(
    kind: BoundKind,
    rho0: &DensityMatrix,
    model: &ChannelModel,
    t1: f64,
) -> Result<f64> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let g = |u: f64| match speed_integrand_min(kind, u, rho0, model) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let v = gauss4(&g, 0.0, t1);
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}
