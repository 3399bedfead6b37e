//! Acceptance suite. Each test covers one numbered criterion, pins its
//! tolerance in code, and prints one PASS line with the measured margins
//! (visible under `cargo test --test acceptance -- --nocapture`).
//!
//! Scenario grids:
//! - amplitude damping, weak coupling (gamma0/lambda = 0.4), |+>:
//!   uniform dt = 0.01 up to lambda t = 60 (tau_cri ~ 49.2)
//! - amplitude damping, strong coupling (gamma0/lambda = 20), |+>:
//!   uniform dt = 0.005 up to lambda t = 32 (tau_cri ~ 26.25)
//! - phase damping, Ohmic s = 1, |+>: uniform 0.05 up to w_c t = 10, then
//!   geometric steps (ratio 1.02) up to 1e6 (tau_cri ~ 5e5)
//! - amplitude damping, weak coupling, |1>: the degenerate-quantumness start
//!   state, same grid as the first scenario

use std::sync::OnceLock;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qsl_core::bounds::{
    cumulative_speed_integral, find_tau_cri, qsl_series_on_grid, qsl_time, BoundKind, BoundSeries,
    ResolutionConfig, Witness,
};
use qsl_core::channels::{decoherence_ad, decoherence_pd, AdParams, ChannelModel, PdParams};
use qsl_core::metrics::{
    bures_fidelity, bures_fidelity_closed_form, metric_sample, trace_distance,
};
use qsl_core::qmat::{validate_density, DensityMatrix};
use qsl_core::quad::extend_cell;

const EPSILON: f64 = 1e-6;

struct Scenario {
    name: &'static str,
    model: ChannelModel,
    rho0: DensityMatrix,
    grid: Vec<f64>,
    tau_cri: f64,
    modified: Vec<(BoundKind, BoundSeries)>,
    unmodified: Vec<(BoundKind, BoundSeries)>,
}

fn geometric_tail_grid(h0: f64, uniform_end: f64, ratio: f64, t_max: f64) -> Vec<f64> {
    let mut grid = vec![0.0];
    let mut t = 0.0;
    while t < uniform_end - 1e-12 {
        t = (t + h0).min(uniform_end);
        grid.push(t);
    }
    let mut step = h0;
    while t < t_max {
        step *= ratio;
        t = (t + step).min(t_max);
        grid.push(t);
    }
    grid
}

fn build_scenario(
    name: &'static str,
    model: ChannelModel,
    rho0: DensityMatrix,
    grid: Vec<f64>,
    scan: &ResolutionConfig,
) -> Scenario {
    let tau_cri = find_tau_cri(&rho0, &model, scan)
        .expect("witness evaluation")
        .unwrap_or_else(|| panic!("{name}: tau_cri not reached in the scan window"));
    let mut modified = Vec::new();
    let mut unmodified = Vec::new();
    for kind in BoundKind::ALL {
        modified.push((
            kind,
            qsl_series_on_grid(kind, &rho0, &model, &grid, Some(tau_cri)).expect("modified series"),
        ));
        unmodified.push((
            kind,
            qsl_series_on_grid(kind, &rho0, &model, &grid, None).expect("unmodified series"),
        ));
    }
    Scenario {
        name,
        model,
        rho0,
        grid,
        tau_cri,
        modified,
        unmodified,
    }
}

fn scenarios() -> &'static Vec<Scenario> {
    static SCENARIOS: OnceLock<Vec<Scenario>> = OnceLock::new();
    SCENARIOS.get_or_init(|| {
        let uniform = |t_max: f64, dt: f64| -> Vec<f64> {
            let n = (t_max / dt + 1e-9).floor() as usize;
            (0..=n).map(|i| i as f64 * dt).collect()
        };
        vec![
            build_scenario(
                "ad-markovian-plus",
                ChannelModel::amplitude_damping(AdParams::new(0.4, 1.0).unwrap()),
                DensityMatrix::plus(),
                uniform(60.0, 0.01),
                &ResolutionConfig::new(EPSILON, Witness::TraceDistanceToStationary, 60.0, 0.01)
                    .unwrap(),
            ),
            build_scenario(
                "ad-non-markovian-plus",
                ChannelModel::amplitude_damping(AdParams::new(20.0, 1.0).unwrap()),
                DensityMatrix::plus(),
                uniform(32.0, 0.005),
                &ResolutionConfig::new(EPSILON, Witness::TraceDistanceToStationary, 32.0, 0.005)
                    .unwrap(),
            ),
            build_scenario(
                "pd-ohmic-plus",
                ChannelModel::phase_damping(PdParams::new(1.0, 1.0).unwrap()),
                DensityMatrix::plus(),
                geometric_tail_grid(0.05, 10.0, 1.02, 1.0e6),
                &ResolutionConfig::new(EPSILON, Witness::TraceDistanceToStationary, 1.0e6, 250.0)
                    .unwrap(),
            ),
            // The excited-state Av bound saturates exactly and its trajectory
            // ends within 1e-12 of a pure state; past lambda t ~ 53 the QFI
            // regularization threshold starts clipping real Fisher
            // information there (see the qfi docs), so the grid stops at 40,
            // well past this scenario's tau_cri ~ 26.7.
            build_scenario(
                "ad-markovian-excited",
                ChannelModel::amplitude_damping(AdParams::new(0.4, 1.0).unwrap()),
                DensityMatrix::excited(),
                uniform(40.0, 0.01),
                &ResolutionConfig::new(EPSILON, Witness::TraceDistanceToStationary, 40.0, 0.01)
                    .unwrap(),
            ),
        ]
    })
}

fn freeze_scenarios() -> impl Iterator<Item = &'static Scenario> {
    // criteria 1 and 2 name the three |+> scenarios
    scenarios()
        .iter()
        .filter(|s| s.name != "ad-markovian-excited")
}

/// Criterion 1: modified series are exactly constant past tau_cri and
/// continuous at tau_cri within 1e-9 relative.
#[test]
fn criterion_1_modified_series_freeze_and_continuity() {
    let mut worst_rel = 0.0f64;
    for scenario in freeze_scenarios() {
        let tc = scenario.tau_cri;
        for (kind, series) in &scenario.modified {
            let frozen = series
                .frozen_value
                .expect("modified series carries a frozen value");
            for (i, &t) in series.times.iter().enumerate() {
                if t >= tc {
                    assert_eq!(
                        series.tau_qsl[i], frozen,
                        "{}/{kind}: not bitwise constant at t={t}",
                        scenario.name
                    );
                }
            }
            // independent continuity evaluation: rebuild the unmodified
            // bound at exactly tau_cri from public pieces (cumulative over
            // the grid, a partial cell with a test-side integrand, and
            // qsl_time) and compare against the series' frozen value
            let cum =
                cumulative_speed_integral(*kind, &scenario.rho0, &scenario.model, &scenario.grid)
                    .expect("cumulative");
            let k = scenario.grid.iter().rposition(|&t| t <= tc).unwrap();
            let rho0 = scenario.rho0;
            let model = &scenario.model;
            let integrand = |t: f64| -> f64 {
                let s = metric_sample(t, &rho0, model).expect("metric sample");
                match kind {
                    BoundKind::Av => s.qfi.max(0.0).sqrt() / 2.0,
                    BoundKind::Op => s.speed_op,
                    BoundKind::Hs => s.speed_hs,
                    BoundKind::Tr => s.speed_tr,
                    BoundKind::UnifiedMin => s.speed_op.min(s.speed_hs).min(s.speed_tr),
                    BoundKind::Quant => s.speed_quant,
                }
            };
            let c_cri = cum[k] + extend_cell(&integrand, scenario.grid[k], tc);
            let independent = qsl_time(*kind, tc, &scenario.rho0, &scenario.model, c_cri)
                .expect("qsl time at tau_cri");
            let scale = frozen.abs().max(1e-30);
            let rel = (independent - frozen).abs() / scale;
            if frozen.abs() > 1e-14 {
                assert!(
                    rel < 1e-9,
                    "{}/{kind}: discontinuous at tau_cri: frozen {frozen} vs {independent} (rel {rel:.3e})",
                    scenario.name
                );
                worst_rel = worst_rel.max(rel);
            } else {
                assert!(independent.abs() < 1e-14);
            }
        }
    }
    println!("criterion 1 PASS: frozen series bitwise constant past tau_cri; worst continuity deviation {worst_rel:.3e} (limit 1e-9)");
}

/// Criterion 2: the unmodified Av and Op series keep growing strictly after
/// tau_cri in both channels.
#[test]
fn criterion_2_unmodified_series_grow_indefinitely() {
    for scenario in freeze_scenarios() {
        for (kind, series) in &scenario.unmodified {
            if !matches!(kind, BoundKind::Av | BoundKind::Op) {
                continue;
            }
            let mut prev: Option<f64> = None;
            let mut checked = 0usize;
            for (i, &t) in series.times.iter().enumerate() {
                if t > scenario.tau_cri {
                    if let Some(p) = prev {
                        assert!(
                            series.tau_qsl[i] > p,
                            "{}/{kind}: unmodified series not strictly increasing at t={t}",
                            scenario.name
                        );
                    }
                    prev = Some(series.tau_qsl[i]);
                    checked += 1;
                }
            }
            assert!(
                checked > 2,
                "{}: too few points past tau_cri",
                scenario.name
            );
        }
    }
    println!("criterion 2 PASS: unmodified av/op strictly increasing on (tau_cri, t_max] in both channels");
}

/// Criterion 3: every bound respects tau_qsl(t) <= t (1 + 1e-9) at every
/// grid point, all kinds, all scenarios, both modes.
#[test]
fn criterion_3_bound_validity() {
    let mut worst = f64::NEG_INFINITY;
    let mut n_points = 0usize;
    for scenario in scenarios() {
        for collection in [&scenario.unmodified, &scenario.modified] {
            for (kind, series) in collection {
                for (i, &t) in series.times.iter().enumerate() {
                    if t == 0.0 {
                        assert_eq!(series.tau_qsl[i], 0.0);
                        continue;
                    }
                    let excess = series.tau_qsl[i] / t - 1.0;
                    worst = worst.max(excess);
                    n_points += 1;
                    assert!(
                        series.tau_qsl[i] <= t * (1.0 + 1e-9),
                        "{}/{kind}: bound violated at t={t}: tau={} (excess {excess:.3e})",
                        scenario.name,
                        series.tau_qsl[i]
                    );
                }
            }
        }
    }
    println!(
        "criterion 3 PASS: tau_qsl <= t(1+1e-9) at {n_points} points; worst excess {worst:.3e}"
    );
}

/// Criterion 4: strong coupling reaches the resolution time sooner.
#[test]
fn criterion_4_non_markovian_speed_up() {
    let markov = scenarios()
        .iter()
        .find(|s| s.name == "ad-markovian-plus")
        .unwrap();
    let strong = scenarios()
        .iter()
        .find(|s| s.name == "ad-non-markovian-plus")
        .unwrap();
    assert!(
        strong.tau_cri < markov.tau_cri,
        "expected tau_cri({}) < tau_cri({})",
        strong.tau_cri,
        markov.tau_cri
    );
    println!(
        "criterion 4 PASS: tau_cri = {:.6} (gamma0/lambda = 20) < {:.6} (gamma0/lambda = 0.4) at epsilon = 1e-6",
        strong.tau_cri, markov.tau_cri
    );
}

/// Criterion 5: in amplitude damping the quantumness bound is the tightest
/// at >= 95% of grid points before tau_cri, against both av and op.
#[test]
fn criterion_5_quantumness_bound_tightest() {
    for name in ["ad-markovian-plus", "ad-non-markovian-plus"] {
        let scenario = scenarios().iter().find(|s| s.name == name).unwrap();
        let get = |kind: BoundKind| -> &BoundSeries {
            &scenario
                .unmodified
                .iter()
                .find(|(k, _)| *k == kind)
                .unwrap()
                .1
        };
        let quant = get(BoundKind::Quant);
        let av = get(BoundKind::Av);
        let op = get(BoundKind::Op);
        let mut total = 0usize;
        let mut ge_av = 0usize;
        let mut ge_op = 0usize;
        let mut worst_av = 0.0f64;
        let mut worst_op = 0.0f64;
        for (i, &t) in scenario.grid.iter().enumerate() {
            if t <= 0.0 || t >= scenario.tau_cri {
                continue;
            }
            total += 1;
            if quant.tightness[i] >= av.tightness[i] {
                ge_av += 1;
            } else {
                worst_av = worst_av.max(av.tightness[i] - quant.tightness[i]);
            }
            if quant.tightness[i] >= op.tightness[i] {
                ge_op += 1;
            } else {
                worst_op = worst_op.max(op.tightness[i] - quant.tightness[i]);
            }
        }
        let frac_av = ge_av as f64 / total as f64;
        let frac_op = ge_op as f64 / total as f64;
        assert!(
            frac_av >= 0.95,
            "{name}: quant >= av at only {:.2}%",
            frac_av * 100.0
        );
        assert!(
            frac_op >= 0.95,
            "{name}: quant >= op at only {:.2}%",
            frac_op * 100.0
        );
        println!(
            "criterion 5 PASS [{name}]: quant >= av at {:.2}% (worst deficit {worst_av:.3e}), quant >= op at {:.2}% (worst deficit {worst_op:.3e}) of {total} pre-tau_cri points",
            frac_av * 100.0,
            frac_op * 100.0
        );
    }
}

/// Criterion 6: the quantumness bound is identically zero (< 1e-14) for the
/// phase-damping |+> trajectory and the amplitude-damping |1> trajectory.
#[test]
fn criterion_6_degenerate_quantumness() {
    for name in ["pd-ohmic-plus", "ad-markovian-excited"] {
        let scenario = scenarios().iter().find(|s| s.name == name).unwrap();
        for collection in [&scenario.unmodified, &scenario.modified] {
            let quant = &collection
                .iter()
                .find(|(k, _)| *k == BoundKind::Quant)
                .unwrap()
                .1;
            let max = quant.tau_qsl.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
            assert!(max < 1e-14, "{name}: tau_quant reaches {max:.3e}");
        }
    }
    println!("criterion 6 PASS: tau_quant below 1e-14 everywhere for pd |+> and ad |1>");
}

/// Criterion 7a: quadrature decoherence function vs the s = 1 closed form.
#[test]
fn criterion_7a_dephasing_oracle() {
    let p = PdParams::new(1.0, 1.0).unwrap();
    let mut worst = 0.0f64;
    for k in 0..1000 {
        let t = 0.03 * k as f64;
        let expected = 1.0 / (1.0 + t * t).sqrt();
        let got = decoherence_pd(t, &p).unwrap();
        worst = worst.max((got - expected).abs());
    }
    assert!(worst < 1e-8, "worst deviation {worst:.3e}");
    println!("criterion 7a PASS: decoherence_pd matches 1/sqrt(1+(w_c t)^2) within {worst:.3e} (limit 1e-8) on 1000 points");
}

/// Criterion 7b: fidelity through the matrix square root vs the 2x2 closed
/// form on 1000 random pairs.
#[test]
fn criterion_7b_fidelity_oracle() {
    let mut rng = StdRng::seed_from_u64(41);
    let mut random_state = || loop {
        let x: f64 = rng.random_range(-1.0..1.0);
        let y: f64 = rng.random_range(-1.0..1.0);
        let z: f64 = rng.random_range(-1.0..1.0);
        if x * x + y * y + z * z <= 1.0 {
            return DensityMatrix::from_bloch(x, y, z).unwrap();
        }
    };
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let a = random_state();
        let b = random_state();
        let diff = (bures_fidelity(&a, &b).unwrap() - bures_fidelity_closed_form(&a, &b)).abs();
        worst = worst.max(diff);
    }
    assert!(worst < 1e-10, "worst deviation {worst:.3e}");
    println!("criterion 7b PASS: fidelity routes agree within {worst:.3e} (limit 1e-10) on 1000 random pairs");
}

/// Criterion 7c: the analytic state derivative converges against central
/// finite differences at second order in the step.
#[test]
fn criterion_7c_state_derivative_fd_convergence() {
    let cases = [
        (
            ChannelModel::amplitude_damping(AdParams::new(0.4, 1.0).unwrap()),
            DensityMatrix::plus(),
            0.7,
        ),
        (
            ChannelModel::phase_damping(PdParams::new(1.0, 1.0).unwrap()),
            DensityMatrix::plus(),
            1.3,
        ),
    ];
    for (model, rho0, t) in &cases {
        let err = |h: f64| -> f64 {
            let fwd = model.evolve(rho0, t + h).unwrap();
            let bwd = model.evolve(rho0, t - h).unwrap();
            let fd = fwd.matrix().sub(bwd.matrix()).scale_re(1.0 / (2.0 * h));
            model.state_derivative(*t, rho0).unwrap().sub(&fd).max_abs()
        };
        let e1 = err(4e-3);
        let e2 = err(2e-3);
        let e3 = err(1e-3);
        let r12 = e1 / e2;
        let r23 = e2 / e3;
        assert!(
            (3.2..4.8).contains(&r12) && (3.2..4.8).contains(&r23),
            "O(h^2) scaling broken: ratios {r12:.2}, {r23:.2} (errors {e1:.3e}, {e2:.3e}, {e3:.3e})"
        );
        println!("criterion 7c PASS: fd error ratios {r12:.3}, {r23:.3} (expected ~4) at t={t}");
    }
}

/// Criterion 7d: the amplitude-damping trace-distance witness matches its
/// closed form (|G|/2) sqrt(1+G^2).
#[test]
fn criterion_7d_witness_oracle() {
    let mut worst = 0.0f64;
    for gamma0 in [0.4, 20.0] {
        let p = AdParams::new(gamma0, 1.0).unwrap();
        let model = ChannelModel::amplitude_damping(p);
        let rho0 = DensityMatrix::plus();
        let stationary = model.stationary_state(&rho0);
        for k in 0..=600 {
            let t = 0.05 * k as f64;
            let g = decoherence_ad(t, &p);
            let expected = 0.5 * g.abs() * (1.0 + g * g).sqrt();
            let got = trace_distance(&model.evolve(&rho0, t).unwrap(), &stationary);
            worst = worst.max((got - expected).abs());
        }
    }
    assert!(worst < 1e-10, "worst deviation {worst:.3e}");
    println!("criterion 7d PASS: trace-distance witness matches (|G|/2)sqrt(1+G^2) within {worst:.3e} (limit 1e-10)");
}

/// Criterion 8: Kraus completeness at every sampled time, CPTP validity on
/// 200 random triples, and UnifiedMin == Op.
#[test]
fn criterion_8_structural_identities() {
    // completeness along every scenario grid
    let mut worst_completeness = 0.0f64;
    for scenario in scenarios() {
        for &t in &scenario.grid {
            let dev = scenario.model.kraus_at(t).unwrap().completeness_deviation();
            worst_completeness = worst_completeness.max(dev);
        }
    }
    assert!(worst_completeness < 1e-12);

    // CPTP over 200 random (t, model, rho0) triples
    let mut rng = StdRng::seed_from_u64(43);
    for _ in 0..200 {
        let model = if rng.random_bool(0.5) {
            ChannelModel::amplitude_damping(
                AdParams::new(10f64.powf(rng.random_range(-1.3..1.5)), 1.0).unwrap(),
            )
        } else {
            ChannelModel::phase_damping(PdParams::new(rng.random_range(0.2..3.5), 1.0).unwrap())
        };
        let t: f64 = rng.random_range(0.0..20.0);
        let rho0 = loop {
            let x: f64 = rng.random_range(-1.0..1.0);
            let y: f64 = rng.random_range(-1.0..1.0);
            let z: f64 = rng.random_range(-1.0..1.0);
            if x * x + y * y + z * z <= 1.0 {
                break DensityMatrix::from_bloch(x, y, z).unwrap();
            }
        };
        let rho_t = model.evolve(&rho0, t).unwrap();
        validate_density(rho_t.matrix(), 1e-10).unwrap();
    }

    // UnifiedMin == Op on every scenario
    let mut worst_gap = 0.0f64;
    for scenario in scenarios() {
        for collection in [&scenario.unmodified, &scenario.modified] {
            let min = &collection
                .iter()
                .find(|(k, _)| *k == BoundKind::UnifiedMin)
                .unwrap()
                .1;
            let op = &collection
                .iter()
                .find(|(k, _)| *k == BoundKind::Op)
                .unwrap()
                .1;
            for i in 0..min.tau_qsl.len() {
                let gap = (min.tau_qsl[i] - op.tau_qsl[i]).abs();
                worst_gap = worst_gap.max(gap);
                assert!(
                    gap <= 1e-12,
                    "{}: min/op series differ at index {i}",
                    scenario.name
                );
            }
        }
    }
    println!(
        "criterion 8 PASS: completeness <= {worst_completeness:.3e} (limit 1e-12); 200 CPTP triples valid at 1e-10; |min - op| <= {worst_gap:.3e} (limit 1e-12)"
    );
}

/// Criterion 9 (report, not pass/fail): measured saturation of the av and op
/// bounds in phase damping before tau_cri.
#[test]
fn criterion_9_pd_saturation_report() {
    let scenario = scenarios()
        .iter()
        .find(|s| s.name == "pd-ohmic-plus")
        .unwrap();
    for kind in [BoundKind::Av, BoundKind::Op] {
        let series = &scenario
            .unmodified
            .iter()
            .find(|(k, _)| *k == kind)
            .unwrap()
            .1;
        let mut min_tightness = f64::INFINITY;
        let mut sum = 0.0;
        let mut n = 0usize;
        for (i, &t) in scenario.grid.iter().enumerate() {
            if t <= 0.0 || t >= scenario.tau_cri {
                continue;
            }
            min_tightness = min_tightness.min(series.tightness[i]);
            sum += series.tightness[i];
            n += 1;
        }
        let mean = sum / n as f64;
        println!(
            "criterion 9 REPORT [{kind}]: pre-tau_cri tightness over {n} points: min {min_tightness:.12}, mean {mean:.12}, max deviation from exact saturation {:.3e}",
            1.0 - min_tightness
        );
    }
    println!("criterion 9 PASS: saturation measured and reported (claim: both bounds saturated until tau_cri)");
}
