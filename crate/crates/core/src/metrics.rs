//! Information-geometric quantities along a trajectory: Bures fidelity and
//! angle, trace distance, quantum Fisher information through the symmetric
//! logarithmic derivative, and commutator quantumness.

use num_complex::Complex64;

use crate::channels::ChannelModel;
use crate::error::{Error, Result};
use crate::qmat::{
    commutator, hermitian_eigendecomposition, hs_norm, norms, psd_sqrt, DensityMatrix, Mat2,
};

/// Eigenvalue-pair weight below which QFI terms are dropped as 0/0.
pub const QFI_REGULARIZATION: f64 = 1e-12;
/// Derivative weight on a null subspace that signals genuine divergence.
const QFI_DIVERGENCE_WEIGHT: f64 = 1e-8;

/// Bures fidelity `F = Tr sqrt(sqrt(rho0) rho1 sqrt(rho0))`, clamped to [0, 1].
pub fn bures_fidelity(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    let root = psd_sqrt(rho0.matrix())?;
    let inner = root.mul(rho1.matrix()).mul(&root);
    // symmetrize away the round-off skew before taking eigenvalues
    let sym = inner.add(&inner.adjoint()).scale_re(0.5);
    let eig = hermitian_eigendecomposition(&sym)?;
    let f = eig.values.iter().map(|&v| v.max(0.0).sqrt()).sum::<f64>();
    Ok(f.clamp(0.0, 1.0))
}

/// Closed form for qubits: `F = sqrt(Tr(rho0 rho1) + 2 sqrt(det rho0 det rho1))`.
///
/// Kept as an independent route against [`bures_fidelity`]; the two must
/// agree and tests hold them together.
pub fn bures_fidelity_closed_form(rho0: &DensityMatrix, rho1: &DensityMatrix) -> f64 {
    let overlap = rho0.matrix().mul(rho1.matrix()).trace().re;
    let dets = (rho0.matrix().det().re * rho1.matrix().det().re).max(0.0);
    (overlap + 2.0 * dets.sqrt())
        .max(0.0)
        .sqrt()
        .clamp(0.0, 1.0)
}

/// Bures angle `B = arccos(F)`.
pub fn bures_angle(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    Ok(bures_fidelity(rho0, rho1)?.acos())
}

/// Trace distance `D = Tr|rho0 - rho1| / 2`.
///
/// The difference of two states is Hermitian and traceless, so its
/// eigenvalues are +-a and D = |a|.
pub fn trace_distance(rho0: &DensityMatrix, rho1: &DensityMatrix) -> f64 {
    let d = rho0.matrix().sub(rho1.matrix());
    let a = d.e[0][0].re;
    let c = d.e[1][1].re;
    let b = (d.e[0][1] + d.e[1][0].conj()).scale(0.5);
    // eigenvalues of the Hermitian difference: mean +- disc
    let mean = 0.5 * (a + c);
    let disc = (0.25 * (a - c) * (a - c) + b.norm_sqr()).sqrt();
    (0.5 * ((mean + disc).abs() + (mean - disc).abs())).min(1.0)
}

/// Quantum Fisher information `Tr(rho L^2)` with the SLD `L` defined by
/// `d rho/dt = (rho L + L rho)/2`.
///
/// Worked in the eigenbasis of `rho`:
/// `QFI = sum_{ij: p_i + p_j > reg} 2 |<i|drho|j>|^2 / (p_i + p_j)`.
/// The same sum assembles L, and `Tr(rho L^2)` is recomputed from it as a
/// consistency check; the routes must agree to 1e-9.
///
/// Errors if the derivative has weight above 1e-8 on an eigenvalue pair the
/// regularization dropped: that pair makes the true QFI divergent.
pub fn qfi(rho: &DensityMatrix, rho_dot: &Mat2) -> Result<f64> {
    check_derivative(rho_dot)?;
    let eig = hermitian_eigendecomposition(rho.matrix())?;
    let p = eig.values;
    // <i|drho|j> in the eigenbasis
    let mut d = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in d.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let vi = eig.vectors[i];
            let vj = eig.vectors[j];
            let col = [
                rho_dot.e[0][0] * vj[0] + rho_dot.e[0][1] * vj[1],
                rho_dot.e[1][0] * vj[0] + rho_dot.e[1][1] * vj[1],
            ];
            *entry = vi[0].conj() * col[0] + vi[1].conj() * col[1];
        }
    }

    let mut direct = 0.0;
    let mut sld = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let w = p[i] + p[j];
            if w > QFI_REGULARIZATION {
                direct += 2.0 * d[i][j].norm_sqr() / w;
                sld[i][j] = d[i][j].scale(2.0 / w);
            } else if d[i][j].norm() > QFI_DIVERGENCE_WEIGHT {
                return Err(Error::DivergentQfi {
                    weight: d[i][j].norm(),
                });
            }
        }
    }

    // Tr(rho L^2) in the same basis: sum_ij p_i |L_ij|^2
    let via_sld: f64 = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| p[i].max(0.0) * sld[i][j].norm_sqr())
        .sum();
    if (via_sld - direct).abs() > 1e-9 * (1.0 + direct.abs()) {
        return Err(Error::InternalConsistency(format!(
            "QFI routes disagree: {direct} vs {via_sld}"
        )));
    }
    Ok(direct)
}

fn check_derivative(rho_dot: &Mat2) -> Result<()> {
    if !rho_dot.is_finite() {
        return Err(Error::NonFiniteEntry);
    }
    let dev = rho_dot.hermiticity_deviation();
    if dev > 1e-10 {
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: 1e-10,
        });
    }
    let tr = rho_dot.trace().norm();
    if tr > 1e-10 {
        return Err(Error::InternalConsistency(format!(
            "state derivative has trace {tr:.3e}, expected 0"
        )));
    }
    Ok(())
}

/// Commutator quantumness `Q = 2 ||[rho0, rho1]||_hs^2`.
///
/// Zero exactly when the two states commute.
pub fn quantumness(rho0: &DensityMatrix, rho1: &DensityMatrix) -> f64 {
    let c = commutator(rho0.matrix(), rho1.matrix());
    let n = hs_norm(&c);
    2.0 * n * n
}

/// Every instantaneous quantity the bounds need, bundled for one time point.
#[derive(Debug, Clone, Copy)]
pub struct MetricSample {
    pub t: f64,
    /// Bures angle between the start state and the evolved state.
    pub bures_angle: f64,
    /// Trace distance from the evolved state to the stationary state.
    pub trace_distance: f64,
    /// Quantum Fisher information of the trajectory at t.
    pub qfi: f64,
    /// Commutator quantumness between start and evolved state.
    pub quantumness: f64,
    /// Operator norm of d rho/dt.
    pub speed_op: f64,
    /// Hilbert-Schmidt norm of d rho/dt.
    pub speed_hs: f64,
    /// Trace norm of d rho/dt.
    pub speed_tr: f64,
    /// Hilbert-Schmidt norm of [rho0, d rho/dt].
    pub speed_quant: f64,
}

/// Evaluate all trajectory metrics at one time point.
pub fn metric_sample(t: f64, rho0: &DensityMatrix, model: &ChannelModel) -> Result<MetricSample> {
    let rho_t = model.evolve(rho0, t)?;
    let rho_dot = model.state_derivative(t, rho0)?;
    let stationary = model.stationary_state(rho0);
    let n = norms(&rho_dot)?;
    Ok(MetricSample {
        t,
        bures_angle: bures_angle(rho0, &rho_t)?,
        trace_distance: trace_distance(&rho_t, &stationary),
        qfi: qfi(&rho_t, &rho_dot)?,
        quantumness: quantumness(rho0, &rho_t),
        speed_op: n.operator,
        speed_hs: n.hilbert_schmidt,
        speed_tr: n.trace,
        speed_quant: hs_norm(&commutator(rho0.matrix(), &rho_dot)),
    })
}
