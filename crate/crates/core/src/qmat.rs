//! Complex 2×2 matrix algebra for qubit states: closed-form Hermitian
//! eigendecomposition, PSD square root, the three matrix norms and
//! commutators. Everything downstream (channels, metrics, bounds) is built
//! on these kernels, so they are written to be branch-explicit and
//! cancellation-aware rather than general.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermiticity tolerance accepted by the eigensolver.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Tolerance below which negative eigenvalues are treated as round-off.
pub const PSD_TOL: f64 = 1e-12;
/// Tolerance on density-matrix invariants (Hermiticity, trace, positivity).
pub const DENSITY_TOL: f64 = 1e-12;

/// A 2×2 complex matrix, row-major: `[[a11, a12], [a21, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub e: [[Complex64; 2]; 2],
}

impl Mat2 {
    pub fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Self {
            e: [[a11, a12], [a21, a22]],
        }
    }

    /// Build from real entries (imaginary parts zero).
    pub fn from_real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self::new(
            Complex64::new(a11, 0.0),
            Complex64::new(a12, 0.0),
            Complex64::new(a21, 0.0),
            Complex64::new(a22, 0.0),
        )
    }

    pub fn zero() -> Self {
        Self::from_real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn identity() -> Self {
        Self::from_real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Self::from_real(a, 0.0, 0.0, b)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(
            self.e[0][0].conj(),
            self.e[1][0].conj(),
            self.e[0][1].conj(),
            self.e[1][1].conj(),
        )
    }

    pub fn trace(&self) -> Complex64 {
        self.e[0][0] + self.e[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(
            self.e[0][0] * c,
            self.e[0][1] * c,
            self.e[1][0] * c,
            self.e[1][1] * c,
        )
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.e[0][0] + other.e[0][0],
            self.e[0][1] + other.e[0][1],
            self.e[1][0] + other.e[1][0],
            self.e[1][1] + other.e[1][1],
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.e[0][0] - other.e[0][0],
            self.e[0][1] - other.e[0][1],
            self.e[1][0] - other.e[1][0],
            self.e[1][1] - other.e[1][1],
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let a = &self.e;
        let b = &other.e;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }

    /// Largest entry magnitude; the norm used for invariant checks.
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for row in &self.e {
            for z in row {
                m = m.max(z.norm());
            }
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.e
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Max deviation from Hermiticity across all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d_off = (self.e[1][0] - self.e[0][1].conj()).norm();
        d_off.max(self.e[0][0].im.abs()).max(self.e[1][1].im.abs())
    }
}

/// Commutator `ab - ba`. Anti-Hermitian whenever both arguments are Hermitian.
pub fn commutator(a: &Mat2, b: &Mat2) -> Mat2 {
    a.mul(b).sub(&b.mul(a))
}

/// Eigendecomposition of a Hermitian 2×2 matrix.
///
/// `values` are descending and real; `vectors[k]` is the unit eigenvector for
/// `values[k]`, and the two vectors are orthonormal by construction.
#[derive(Debug, Clone, Copy)]
pub struct EigenH {
    pub values: [f64; 2],
    pub vectors: [[Complex64; 2]; 2],
}

impl EigenH {
    /// Reassemble `sum_k values[k] * v_k v_k^dag`.
    pub fn reconstruct(&self) -> Mat2 {
        let mut m = Mat2::zero();
        for k in 0..2 {
            let v = self.vectors[k];
            let p = Mat2::new(
                v[0] * v[0].conj(),
                v[0] * v[1].conj(),
                v[1] * v[0].conj(),
                v[1] * v[1].conj(),
            );
            m = m.add(&p.scale_re(self.values[k]));
        }
        m
    }
}

/// Closed-form eigendecomposition of a Hermitian 2×2 matrix.
///
/// Solves the quadratic characteristic polynomial directly; no iteration.
/// Exactly degenerate spectra return the standard basis.
pub fn hermitian_eigendecomposition(m: &Mat2) -> Result<EigenH> {
    if !m.is_finite() {
        return Err(Error::NonFiniteEntry);
    }
    let deviation = m.hermiticity_deviation();
    let scale = m.max_abs().max(1.0);
    if deviation > HERMITICITY_TOL * scale {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: HERMITICITY_TOL,
        });
    }

    let a = m.e[0][0].re;
    let c = m.e[1][1].re;
    let b = (m.e[0][1] + m.e[1][0].conj()).scale(0.5); // symmetrized off-diagonal

    let mean = 0.5 * (a + c);
    let half_diff = 0.5 * (a - c);
    let disc = (half_diff * half_diff + b.norm_sqr()).sqrt();
    let values = [mean + disc, mean - disc];

    // Degenerate spectrum: any orthonormal basis works, pick deterministically.
    if disc <= f64::EPSILON * scale {
        return Ok(EigenH {
            values,
            vectors: [
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            ],
        });
    }

    // (m - l1 I) v = 0 admits v = (b, l1 - a) and v = (l1 - c, conj(b));
    // take whichever is better conditioned.
    let l1 = values[0];
    let cand1 = [b, Complex64::new(l1 - a, 0.0)];
    let cand2 = [Complex64::new(l1 - c, 0.0), b.conj()];
    let n1 = cand1[0].norm_sqr() + cand1[1].norm_sqr();
    let n2 = cand2[0].norm_sqr() + cand2[1].norm_sqr();
    let raw = if n1 >= n2 { cand1 } else { cand2 };
    let norm = (raw[0].norm_sqr() + raw[1].norm_sqr()).sqrt();
    let v1 = [raw[0] / norm, raw[1] / norm];
    // Orthogonal complement; for Hermitian m this spans the second eigenspace.
    let v2 = [-v1[1].conj(), v1[0].conj()];

    Ok(EigenH {
        values,
        vectors: [v1, v2],
    })
}

/// Principal square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `[-PSD_TOL, 0)` are clamped to zero; anything lower is an
/// error. Channel round-off routinely produces `-1e-16`-scale eigenvalues
/// near pure states, which is what the clamp absorbs.
pub fn psd_sqrt(m: &Mat2) -> Result<Mat2> {
    let eig = hermitian_eigendecomposition(m)?;
    let min_ev = eig.values[1];
    if min_ev < -PSD_TOL {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: min_ev,
        });
    }
    let rooted = EigenH {
        values: [eig.values[0].max(0.0).sqrt(), eig.values[1].max(0.0).sqrt()],
        vectors: eig.vectors,
    };
    Ok(rooted.reconstruct())
}

/// The three matrix norms of a 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixNorms {
    /// Largest singular value.
    pub operator: f64,
    /// Frobenius norm, `sqrt(sum |a_ij|^2)`.
    pub hilbert_schmidt: f64,
    /// Sum of singular values.
    pub trace: f64,
}

/// Operator, Hilbert-Schmidt and trace norms, with the singular values taken
/// from the eigenvalues of `m^dag m`.
pub fn norms(m: &Mat2) -> Result<MatrixNorms> {
    if !m.is_finite() {
        return Err(Error::NonFiniteEntry);
    }
    let gram = m.adjoint().mul(m);
    let eig = hermitian_eigendecomposition(&gram)?;
    let s1 = eig.values[0].max(0.0).sqrt();
    let s2 = eig.values[1].max(0.0).sqrt();
    let hs = self::hs_norm(m);
    Ok(MatrixNorms {
        operator: s1,
        hilbert_schmidt: hs,
        trace: s1 + s2,
    })
}

/// Hilbert-Schmidt norm straight from the entries.
pub fn hs_norm(m: &Mat2) -> f64 {
    m.e.iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Validate Hermiticity, unit trace and positivity of a candidate state.
pub fn validate_density(m: &Mat2, tol: f64) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::NonFiniteEntry);
    }
    let deviation = m.hermiticity_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: tol,
        });
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > tol {
        return Err(Error::InvalidTrace {
            trace,
            tolerance: tol,
        });
    }
    // Closed-form eigenvalues of the Hermitian part.
    let a = m.e[0][0].re;
    let c = m.e[1][1].re;
    let b = (m.e[0][1] + m.e[1][0].conj()).scale(0.5);
    let disc = (0.25 * (a - c) * (a - c) + b.norm_sqr()).sqrt();
    let min_ev = 0.5 * (a + c) - disc;
    if min_ev < -tol {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: min_ev,
        });
    }
    Ok(())
}

/// A qubit density matrix: Hermitian, unit trace, positive semidefinite.
///
/// Basis convention: index 0 is the ground state `|0>`, index 1 the excited
/// state `|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Mat2);

impl DensityMatrix {
    /// Validate and wrap a matrix as a state.
    pub fn new(m: Mat2) -> Result<Self> {
        validate_density(&m, DENSITY_TOL)?;
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    /// `|+><+|`, coherences 1/2 everywhere.
    pub fn plus() -> Self {
        Self(Mat2::from_real(0.5, 0.5, 0.5, 0.5))
    }

    /// Ground-state projector `|0><0|`.
    pub fn ground() -> Self {
        Self(Mat2::diag(1.0, 0.0))
    }

    /// Excited-state projector `|1><1|`.
    pub fn excited() -> Self {
        Self(Mat2::diag(0.0, 1.0))
    }

    /// State from a Bloch vector, `rho = (I + x sx + y sy + z sz)/2`.
    ///
    /// `|0>` sits at the north pole `z = +1`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = (x * x + y * y + z * z).sqrt();
        if !r.is_finite() || r > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter {
                name: "bloch",
                value: r,
                reason: "Bloch vector length must be <= 1",
            });
        }
        let m = Mat2::new(
            Complex64::new(0.5 * (1.0 + z), 0.0),
            Complex64::new(0.5 * x, -0.5 * y),
            Complex64::new(0.5 * x, 0.5 * y),
            Complex64::new(0.5 * (1.0 - z), 0.0),
        );
        Ok(Self(m))
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let m = &self.0;
        let a = m.e[0][0].re;
        let c = m.e[1][1].re;
        let b = (m.e[0][1] + m.e[1][0].conj()).scale(0.5);
        let mean = 0.5 * (a + c);
        let disc = (0.25 * (a - c) * (a - c) + b.norm_sqr()).sqrt();
        [mean + disc, mean - disc]
    }

    /// Diagonal populations `(rho_11, rho_22)`.
    pub fn populations(&self) -> (f64, f64) {
        (self.0.e[0][0].re, self.0.e[1][1].re)
    }
}
