//! Closed-form reduced dynamics of the two qubit channels.
//!
//! Amplitude damping comes from a damped Jaynes-Cummings model with a
//! Lorentzian spectral density; its decoherence function G(t) has a real
//! branch (Markovian, weak coupling), an oscillatory branch (non-Markovian,
//! strong coupling) and an explicit degenerate branch between them. Phase
//! damping comes from an Ohmic-family reservoir; its decoherence function
//! r(t) is the exponential of a time integral of the dephasing rate, done by
//! adaptive quadrature with cumulative checkpoints.
//!
//! Basis convention: index 0 is the ground state |0>, index 1 the excited
//! state |1>, which makes the Kraus matrices below literal.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::{validate_density, DensityMatrix, Mat2};
use crate::quad::adaptive_simpson;
use crate::special::gamma;

/// Relative threshold on d^2 = lambda^2 - 2 gamma0 lambda below which the
/// degenerate (d -> 0) branch is used.
const DEGENERATE_TOL: f64 = 1e-12;
/// Exponent magnitude up to which the cosh/sinh form of G(t) is safe.
const COSH_SAFE_EXPONENT: f64 = 300.0;
/// Absolute tolerance for each dephasing-integral segment. The phase-damping
/// speed bounds saturate exactly, so accumulated integral error shows up
/// one-for-one in the bound-validity margin; keep this well under 1e-9
/// across ~1e3 chained segments.
const DEPHASING_SEGMENT_TOL: f64 = 1e-14;
/// Completeness tolerance for Kraus sets.
pub const KRAUS_TOL: f64 = 1e-12;

/// Amplitude-damping (damped Jaynes-Cummings) parameters.
///
/// `lambda` sets the spectral width and the inverse time unit, `gamma0` the
/// coupling strength. The detuning is fixed at zero and the transition
/// frequency `omega0` only locates the spectral-density peak; the reduced
/// dynamics depend on neither.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdParams {
    gamma0: f64,
    lambda: f64,
    omega0: f64,
    delta: f64,
}

impl AdParams {
    pub fn new(gamma0: f64, lambda: f64) -> Result<Self> {
        if !(gamma0.is_finite() && gamma0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "gamma0",
                value: gamma0,
                reason: "must be finite and > 0",
            });
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must be finite and > 0",
            });
        }
        Ok(Self {
            gamma0,
            lambda,
            omega0: lambda,
            delta: 0.0,
        })
    }

    pub fn with_omega0(mut self, omega0: f64) -> Self {
        self.omega0 = omega0;
        self
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Weak coupling, `gamma0 < lambda/2`.
    pub fn is_markovian(&self) -> bool {
        self.gamma0 < 0.5 * self.lambda
    }

    fn d_squared(&self) -> f64 {
        self.lambda * self.lambda - 2.0 * self.gamma0 * self.lambda
    }

    fn is_degenerate(&self) -> bool {
        self.d_squared().abs() < DEGENERATE_TOL * self.lambda * self.lambda
    }
}

/// Lorentzian spectral density of the damped JC model,
/// `J(w) = g0 l^2 / (2 pi [(w0 + D - w)^2 + l^2])`.
pub fn spectral_density_ad(omega: f64, p: &AdParams) -> f64 {
    let detuned = p.omega0 + p.delta - omega;
    p.gamma0 * p.lambda * p.lambda / (2.0 * PI * (detuned * detuned + p.lambda * p.lambda))
}

/// Decoherence function of the amplitude-damping channel.
///
/// Weak coupling (d real): `G = e^{-lt/2} [cosh(dt/2) + (l/d) sinh(dt/2)]`,
/// positive and monotone decreasing. Strong coupling continues analytically
/// to `cos` and `sin` with |d| and oscillates through zero. At the boundary
/// the limit `e^{-lt/2}(1 + lt/2)` is used.
pub fn decoherence_ad(t: f64, p: &AdParams) -> f64 {
    let l = p.lambda;
    if p.is_degenerate() {
        return (-0.5 * l * t).exp() * (1.0 + 0.5 * l * t);
    }
    let d2 = p.d_squared();
    if d2 > 0.0 {
        let d = d2.sqrt();
        if 0.5 * l * t < COSH_SAFE_EXPONENT && 0.5 * d * t < COSH_SAFE_EXPONENT {
            let x = 0.5 * d * t;
            (-0.5 * l * t).exp() * (x.cosh() + (l / d) * x.sinh())
        } else {
            // exponential-difference form, safe for large arguments
            0.5 * (1.0 + l / d) * (0.5 * (d - l) * t).exp()
                + 0.5 * (1.0 - l / d) * (-0.5 * (d + l) * t).exp()
        }
    } else {
        let ad = (-d2).sqrt();
        let x = 0.5 * ad * t;
        (-0.5 * l * t).exp() * (x.cos() + (l / ad) * x.sin())
    }
}

/// Analytic time derivative of `decoherence_ad`.
///
/// Differentiating the closed form collapses to
/// `dG/dt = -(g0 l / d) e^{-lt/2} sinh(dt/2)` (and its trig / degenerate
/// continuations), so `dG/dt(0) = 0` exactly in every branch.
pub fn decoherence_ad_derivative(t: f64, p: &AdParams) -> f64 {
    let l = p.lambda;
    let g0 = p.gamma0;
    if p.is_degenerate() {
        return -(g0 * l) * (0.5 * t) * (-0.5 * l * t).exp();
    }
    let d2 = p.d_squared();
    if d2 > 0.0 {
        let d = d2.sqrt();
        if 0.5 * l * t < COSH_SAFE_EXPONENT && 0.5 * d * t < COSH_SAFE_EXPONENT {
            -(g0 * l / d) * (-0.5 * l * t).exp() * (0.5 * d * t).sinh()
        } else {
            -(g0 * l / (2.0 * d)) * ((0.5 * (d - l) * t).exp() - (-0.5 * (d + l) * t).exp())
        }
    } else {
        let ad = (-d2).sqrt();
        -(g0 * l / ad) * (-0.5 * l * t).exp() * (0.5 * ad * t).sin()
    }
}

/// Ohmic-family dephasing parameters: exponent `s` and cutoff `omega_c`.
///
/// Sub-Ohmic for s < 1, Ohmic for s = 1, super-Ohmic for s > 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdParams {
    s: f64,
    omega_c: f64,
    gamma_s: f64,
}

impl PdParams {
    pub fn new(s: f64, omega_c: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0 && s < 170.0) {
            return Err(Error::InvalidParameter {
                name: "s",
                value: s,
                reason: "must be finite and in (0, 170)",
            });
        }
        if !(omega_c.is_finite() && omega_c > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega_c",
                value: omega_c,
                reason: "must be finite and > 0",
            });
        }
        Ok(Self {
            s,
            omega_c,
            gamma_s: gamma(s),
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }
}

/// Ohmic-family spectral density `J(w) = w^s / w_c^{s-1} e^{-w/w_c}`.
pub fn spectral_density_pd(omega: f64, p: &PdParams) -> f64 {
    omega.powf(p.s) / p.omega_c.powf(p.s - 1.0) * (-omega / p.omega_c).exp()
}

/// Dephasing rate `g(t) = w_c [1 + (w_c t)^2]^{-s/2} Gamma(s) sin[s atan(w_c t)]`.
pub fn dephasing_rate(t: f64, p: &PdParams) -> f64 {
    let x = p.omega_c * t;
    p.omega_c * (1.0 + x * x).powf(-0.5 * p.s) * p.gamma_s * (p.s * x.atan()).sin()
}

/// Decoherence function of the phase-damping channel,
/// `r(t) = exp[-int_0^t g(t') dt']`, by adaptive quadrature from scratch.
///
/// Grid-shaped workloads should go through [`ChannelModel`], which reuses
/// cumulative checkpoints instead of re-integrating from zero.
pub fn decoherence_pd(t: f64, p: &PdParams) -> Result<f64> {
    let integral = adaptive_simpson(&|u| dephasing_rate(u, p), 0.0, t, 1e-12)?;
    Ok((-integral).exp())
}

/// A Kraus pair satisfying `k1^dag k1 + k2^dag k2 = 1`.
#[derive(Debug, Clone, Copy)]
pub struct KrausSet {
    pub k1: Mat2,
    pub k2: Mat2,
}

impl KrausSet {
    /// Max-entry deviation of `k1^dag k1 + k2^dag k2` from the identity.
    pub fn completeness_deviation(&self) -> f64 {
        let sum = self
            .k1
            .adjoint()
            .mul(&self.k1)
            .add(&self.k2.adjoint().mul(&self.k2));
        sum.sub(&Mat2::identity()).max_abs()
    }
}

/// Which channel, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelKind {
    AmplitudeDamping(AdParams),
    PhaseDamping(PdParams),
}

/// A channel plus the state needed to evaluate it efficiently.
///
/// For phase damping the model keeps monotone checkpoints of
/// `int_0^t g(t')dt'` behind a mutex, so sweeping a time grid costs one
/// short adaptive segment per point instead of an integral from zero.
/// All evaluation methods are logically pure: results depend only on
/// `(t, parameters)` up to quadrature tolerance.
pub struct ChannelModel {
    kind: ChannelKind,
    dephasing_checkpoints: Mutex<BTreeMap<u64, f64>>,
}

impl Clone for ChannelModel {
    fn clone(&self) -> Self {
        // checkpoints are a cache, not state; a clone starts cold
        Self {
            kind: self.kind,
            dephasing_checkpoints: Mutex::new(BTreeMap::new()),
        }
    }
}

impl std::fmt::Debug for ChannelModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChannelModel")
            .field("kind", &self.kind)
            .finish()
    }
}

impl ChannelModel {
    pub fn amplitude_damping(p: AdParams) -> Self {
        Self {
            kind: ChannelKind::AmplitudeDamping(p),
            dephasing_checkpoints: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn phase_damping(p: PdParams) -> Self {
        Self {
            kind: ChannelKind::PhaseDamping(p),
            dephasing_checkpoints: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn kind(&self) -> &ChannelKind {
        &self.kind
    }

    /// `int_0^t g(t')dt'`, resumed from the nearest checkpoint at or below t.
    fn dephasing_integral(&self, t: f64, p: &PdParams) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        // Non-negative finite f64 bit patterns order like the numbers.
        let key = t.to_bits();
        let mut map = self.dephasing_checkpoints.lock().expect("cache poisoned");
        let (t0, base) = map
            .range(..=key)
            .next_back()
            .map(|(k, v)| (f64::from_bits(*k), *v))
            .unwrap_or((0.0, 0.0));
        if t0 == t {
            return Ok(base);
        }
        let segment = adaptive_simpson(&|u| dephasing_rate(u, p), t0, t, DEPHASING_SEGMENT_TOL)?;
        let value = base + segment;
        map.insert(key, value);
        Ok(value)
    }

    /// The channel's decoherence function at time t: G(t) or r(t).
    pub fn decoherence(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::InvalidParameter {
                name: "t",
                value: t,
                reason: "time must be >= 0",
            });
        }
        match &self.kind {
            ChannelKind::AmplitudeDamping(p) => Ok(decoherence_ad(t, p)),
            ChannelKind::PhaseDamping(p) => Ok((-self.dephasing_integral(t, p)?).exp()),
        }
    }

    /// Analytic derivative of the decoherence function: dG/dt or
    /// dr/dt = -g(t) r(t).
    pub fn decoherence_derivative(&self, t: f64) -> Result<f64> {
        match &self.kind {
            ChannelKind::AmplitudeDamping(p) => Ok(decoherence_ad_derivative(t, p)),
            ChannelKind::PhaseDamping(p) => {
                let r = self.decoherence(t)?;
                Ok(-dephasing_rate(t, p) * r)
            }
        }
    }

    /// Kraus pair of the channel at time t.
    ///
    /// Round-off can push |G| or |r| infinitesimally above 1 near t = 0;
    /// the `sqrt(1 - x^2)` argument is clamped at zero for deviations within
    /// round-off and treated as an internal error beyond that.
    pub fn kraus_at(&self, t: f64) -> Result<KrausSet> {
        let x = self.decoherence(t)?;
        if x.abs() > 1.0 + 1e-9 {
            return Err(Error::InternalConsistency(format!(
                "decoherence function magnitude {x} exceeds 1 beyond round-off at t = {t}"
            )));
        }
        let leak = (1.0 - x * x).max(0.0).sqrt();
        let set = match &self.kind {
            ChannelKind::AmplitudeDamping(_) => KrausSet {
                k1: Mat2::diag(1.0, x),
                k2: Mat2::from_real(0.0, leak, 0.0, 0.0),
            },
            ChannelKind::PhaseDamping(_) => KrausSet {
                k1: Mat2::diag(1.0, x),
                k2: Mat2::diag(0.0, leak),
            },
        };
        Ok(set)
    }

    /// Evolve a state: `rho(t) = sum_mu K_mu rho(0) K_mu^dag`.
    pub fn evolve(&self, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        let kraus = self.kraus_at(t)?;
        let m = rho0.matrix();
        let out = kraus
            .k1
            .mul(m)
            .mul(&kraus.k1.adjoint())
            .add(&kraus.k2.mul(m).mul(&kraus.k2.adjoint()));
        validate_density(&out, crate::qmat::DENSITY_TOL).map_err(|e| {
            Error::InternalConsistency(format!("evolve produced an invalid state at t = {t}: {e}"))
        })?;
        Ok(DensityMatrix::new(out).expect("validated above"))
    }

    /// Analytic d rho/dt at time t for the trajectory started at `rho0`.
    ///
    /// Amplitude damping: with rho0 = [[p, c], [c*, q]],
    /// rho(t) = [[p + (1 - G^2) q, G c], [G c*, G^2 q]], so
    /// d rho/dt = [[-2 G G' q, G' c], [G' c*, 2 G G' q]].
    /// Phase damping only scales the coherences by r(t), so
    /// d rho/dt = r'(t) [[0, c], [c*, 0]].
    /// Hermitian and traceless by construction.
    pub fn state_derivative(&self, t: f64, rho0: &DensityMatrix) -> Result<Mat2> {
        let m = rho0.matrix();
        let q = m.e[1][1].re;
        let c = m.e[0][1];
        match &self.kind {
            ChannelKind::AmplitudeDamping(p) => {
                let g = decoherence_ad(t, p);
                let gd = decoherence_ad_derivative(t, p);
                let pop_rate = 2.0 * g * gd * q;
                Ok(Mat2::new(
                    Complex64::new(-pop_rate, 0.0),
                    c * gd,
                    c.conj() * gd,
                    Complex64::new(pop_rate, 0.0),
                ))
            }
            ChannelKind::PhaseDamping(_) => {
                let rd = self.decoherence_derivative(t)?;
                Ok(Mat2::new(
                    Complex64::new(0.0, 0.0),
                    c * rd,
                    c.conj() * rd,
                    Complex64::new(0.0, 0.0),
                ))
            }
        }
    }

    /// The t -> infinity fixed point of the channel for a given start state.
    ///
    /// Amplitude damping always relaxes to the ground state; phase damping
    /// keeps the populations and kills the coherences.
    pub fn stationary_state(&self, rho0: &DensityMatrix) -> DensityMatrix {
        match &self.kind {
            ChannelKind::AmplitudeDamping(_) => DensityMatrix::ground(),
            ChannelKind::PhaseDamping(_) => {
                let (p, _) = rho0.populations();
                let p = p.clamp(0.0, 1.0);
                DensityMatrix::new(Mat2::diag(p, 1.0 - p)).expect("diagonal state is valid")
            }
        }
    }
}
