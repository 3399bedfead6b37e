//! Command execution: compute series and render deterministic CSV/report
//! text. All numeric output is 12 significant digits so identical configs
//! reproduce byte-identical files.

use qsl_core::bounds::{
    find_tau_cri, qsl_series_on_grid, witness_value, BoundSeries, ResolutionConfig,
};
use qsl_core::channels::ChannelModel;
use qsl_core::metrics::trace_distance;
use qsl_core::qmat::DensityMatrix;

use crate::config::Experiment;

/// What a command run produced, and with which outcome.
pub enum Outcome {
    Ok(String),
    /// tau_cri was required but the witness never settled below epsilon.
    TauCriNotReached(String),
    Failed(String),
}

fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

fn grid_of(exp: &Experiment) -> Vec<f64> {
    let n = (exp.t_max / exp.dt + 1e-9).floor() as usize;
    (0..=n).map(|i| i as f64 * exp.dt).collect()
}

/// Refine an output grid for integration accuracy.
///
/// The speed integrands live on the dimensionless O(1) time scale while the
/// phase-damping window extends to 1e6, so user cells get subdivided down to
/// ~2% of the local time (never finer than 0.01). Returns the internal grid
/// and, for each output point, its index in it; output points are kept
/// bitwise so emitted rows are exact.
fn refine_grid(output: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut internal = vec![output[0]];
    let mut indices = vec![0usize];
    for w in output.windows(2) {
        let (a, b) = (w[0], w[1]);
        let sub = (0.02 * a.max(1.0)).max(0.01);
        let pieces = ((b - a) / sub).ceil().max(1.0) as usize;
        for k in 1..pieces {
            internal.push(a + (b - a) * k as f64 / pieces as f64);
        }
        internal.push(b);
        indices.push(internal.len() - 1);
    }
    (internal, indices)
}

fn resolution_config(exp: &Experiment) -> ResolutionConfig {
    ResolutionConfig::new(exp.epsilon, exp.witness, exp.t_max, exp.dt)
        .expect("experiment validation covers these fields")
}

/// Decoherence function and trace distance to the stationary state per row.
pub fn run_trajectory(exp: &Experiment, model: &ChannelModel, rho0: &DensityMatrix) -> Outcome {
    let mut out = String::new();
    for line in exp.metadata_lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("t,decoherence_function,trace_distance_to_stationary\n");
    let stationary = model.stationary_state(rho0);
    for t in grid_of(exp) {
        let g = match model.decoherence(t) {
            Ok(v) => v,
            Err(e) => return Outcome::Failed(e.to_string()),
        };
        let rho_t = match model.evolve(rho0, t) {
            Ok(v) => v,
            Err(e) => return Outcome::Failed(e.to_string()),
        };
        let d = trace_distance(&rho_t, &stationary);
        out.push_str(&format!("{},{},{}\n", fmt(t), fmt(g), fmt(d)));
    }
    Outcome::Ok(out)
}

/// Requested bound series (and their tightness) per row; modified mode
/// freezes every series at tau_cri and records the frozen values up front.
pub fn run_bounds(exp: &Experiment, model: &ChannelModel, rho0: &DensityMatrix) -> Outcome {
    let grid = grid_of(exp);
    let tau_cri = if exp.modified {
        match find_tau_cri(rho0, model, &resolution_config(exp)) {
            Ok(Some(tc)) => Some(tc),
            Ok(None) => {
                return Outcome::TauCriNotReached(format!(
                    "tau_cri not reached within t_max = {}",
                    exp.t_max
                ))
            }
            Err(e) => return Outcome::Failed(e.to_string()),
        }
    } else {
        None
    };

    let (internal_grid, row_indices) = refine_grid(&grid);
    let mut series: Vec<BoundSeries> = Vec::with_capacity(exp.bounds.len());
    for &kind in &exp.bounds {
        match qsl_series_on_grid(kind, rho0, model, &internal_grid, tau_cri) {
            Ok(s) => series.push(s),
            Err(e) => return Outcome::Failed(e.to_string()),
        }
    }

    let mut out = String::new();
    for line in exp.metadata_lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(&format!("# modified = {}\n", exp.modified));
    if let Some(tc) = tau_cri {
        out.push_str(&format!("# tau_cri = {}\n", fmt(tc)));
        for s in &series {
            out.push_str(&format!(
                "# frozen_{} = {}\n",
                s.kind.label(),
                fmt(s.frozen_value.expect("modified series"))
            ));
        }
    }
    out.push('t');
    for s in &series {
        out.push_str(&format!(",tau_{0},tightness_{0}", s.kind.label()));
    }
    out.push('\n');
    for (row, &t) in grid.iter().enumerate() {
        let i = row_indices[row];
        out.push_str(&fmt(t));
        for s in &series {
            out.push_str(&format!(",{},{}", fmt(s.tau_qsl[i]), fmt(s.tightness[i])));
        }
        out.push('\n');
    }
    Outcome::Ok(out)
}

/// Scalar report of the resolution time.
pub fn run_tau_cri(exp: &Experiment, model: &ChannelModel, rho0: &DensityMatrix) -> Outcome {
    match find_tau_cri(rho0, model, &resolution_config(exp)) {
        Ok(Some(tc)) => {
            let w = match witness_value(tc, rho0, model, exp.witness) {
                Ok(v) => v,
                Err(e) => return Outcome::Failed(e.to_string()),
            };
            let mut out = String::new();
            out.push_str(&format!("tau_cri = {}\n", fmt(tc)));
            out.push_str(&format!("witness = {}\n", exp.witness.label()));
            out.push_str(&format!("epsilon = {}\n", fmt(exp.epsilon)));
            out.push_str(&format!("witness_value_at_tau_cri = {}\n", fmt(w)));
            Outcome::Ok(out)
        }
        Ok(None) => {
            Outcome::TauCriNotReached(format!("tau_cri not reached within t_max = {}", exp.t_max))
        }
        Err(e) => Outcome::Failed(e.to_string()),
    }
}
