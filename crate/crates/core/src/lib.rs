//! Single-qubit open-dynamics library: amplitude- and phase-damping channel
//! trajectories, the information metrics along them, and three
//! quantum-speed-limit bounds with their resolution-time (tau_cri) modified
//! forms.
//!
//! The unmodified bounds divide a distinguishability measure by the average
//! evolution speed, so once a simulated trajectory is numerically pinned to
//! its stationary state they grow linearly in t forever. Detecting the
//! resolution time — where a monotone witness falls below the working
//! precision and stays there — and freezing each bound at that evaluation
//! yields series that grow until tau_cri and then remain constant.

pub mod bounds;
pub mod channels;
pub mod error;
pub mod metrics;
pub mod qmat;
pub mod quad;
pub mod special;

pub use bounds::{
    cumulative_speed_integral, find_tau_cri, qsl_series, qsl_series_on_grid, qsl_time,
    witness_value, BoundKind, BoundSeries, ResolutionConfig, Witness,
};
pub use channels::{
    decoherence_ad, decoherence_ad_derivative, decoherence_pd, dephasing_rate, spectral_density_ad,
    spectral_density_pd, AdParams, ChannelKind, ChannelModel, KrausSet, PdParams,
};
pub use error::{Error, Result};
pub use metrics::{
    bures_angle, bures_fidelity, bures_fidelity_closed_form, metric_sample, qfi, quantumness,
    trace_distance, MetricSample,
};
pub use qmat::{
    commutator, hermitian_eigendecomposition, hs_norm, norms, psd_sqrt, DensityMatrix, EigenH,
    Mat2, MatrixNorms,
};
