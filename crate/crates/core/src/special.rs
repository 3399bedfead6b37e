//! Euler gamma function via the Lanczos approximation (g = 7, 9 terms),
//! accurate to better than 1e-12 relative on the range the dephasing rate
//! needs, s in (0, 10].

const LANCZOS_G: f64 = 7.0;
// published coefficient set, kept verbatim
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler gamma function for positive real argument.
///
/// Uses the reflection formula below 0.5 so the Lanczos series is always
/// evaluated on its well-conditioned side.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}
