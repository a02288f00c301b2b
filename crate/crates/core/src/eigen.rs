//! Hermitian eigendecomposition and spectral matrix functions.
//!
//! The solver is a cyclic Jacobi iteration with exact complex Givens
//! rotations. Each (p,q) rotation factors the phase out of the pivot entry
//! and then applies the classic symmetric 2×2 annihilation, so the working
//! matrix stays Hermitian to roundoff throughout. Deterministic, free of
//! external dependencies, and accurate for the dimensions this crate
//! targets (d ≲ 256).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Hermiticity gate for [`eigh`] inputs: ‖M − M†‖_max must stay below this.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Unitarity gate for [`conjugate`]: ‖U†U − 1‖_max must stay below this.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Eigenvalues below this are treated as exact zeros when powering;
/// anything more negative is rejected as not positive semidefinite.
pub const PSD_CLAMP: f64 = -1e-12;

/// Convergence target for the off-diagonal Frobenius norm, relative to
/// ‖M‖_F of the input.
const OFFDIAG_TARGET: f64 = 1e-13;

const MAX_SWEEPS: usize = 60;

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// V diag(w) V† for arbitrary complex weights on the eigenvectors.
    pub fn weighted_reconstruct(&self, weights: &[C64]) -> ComplexMatrix {
        assert_eq!(weights.len(), self.dim(), "one weight per eigenvector");
        let d = self.dim();
        let v = &self.vectors;
        // B = V diag(w), then B V†.
        let mut b = ComplexMatrix::zeros(d);
        for j in 0..d {
            for i in 0..d {
                b[(i, j)] = v[(i, j)] * weights[j];
            }
        }
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let bik = b[(i, k)];
                for j in 0..d {
                    out[(i, j)] += bik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    /// V f(Λ) V† for a scalar function applied to the spectrum.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let weights: Vec<C64> = self.values.iter().map(|&x| f(x)).collect();
        self.weighted_reconstruct(&weights)
    }

    /// V Λ V†, which must agree with the input matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|x| C64::new(x, 0.0))
    }

    /// ‖V†V − 1‖_max.
    pub fn orthonormality_residual(&self) -> f64 {
        self.vectors.unitarity_residual()
    }

    /// Eigenvector column `j`.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim()).map(|i| self.vectors[(i, j)]).collect()
    }
}

fn offdiag_frobenius(a: &ComplexMatrix) -> f64 {
    let d = a.dim();
    let mut acc = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// The input must be Hermitian within [`HERMITICITY_TOL`]; convergence is
/// declared when the off-diagonal Frobenius norm drops below
/// 1e-13·‖M‖_F, with a budget of 60 sweeps.
pub fn eigh(m: &ComplexMatrix) -> Result<EigenSystem> {
    let residual = m.hermitian_residual();
    if residual > HERMITICITY_TOL {
        return Err(Error::NotHermitian(residual));
    }
    let d = m.dim();
    // Work on the exactly Hermitian part so the sub-tolerance asymmetry of
    // the input cannot drift through the sweeps.
    let mut a = m.hermitized();
    let mut v = ComplexMatrix::identity(d);
    let target = OFFDIAG_TARGET * a.frobenius_norm();

    let mut off = offdiag_frobenius(&a);
    let mut sweeps = 0;
    while off > target && sweeps < MAX_SWEEPS {
        for p in 0..d.saturating_sub(1) {
            for q in (p + 1)..d {
                let apq = a[(p, q)];
                let abs = apq.norm();
                if abs == 0.0 {
                    continue;
                }
                // Factor the pivot phase out, then annihilate the real
                // residue with a symmetric rotation:
                //   G_pp = c, G_pq = s·e^{iβ}, G_qp = −s·e^{−iβ}, G_qq = c,
                // with β the phase of a_pq.
                let phase = apq / abs;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let g_pq = phase * s; // s·e^{iβ}
                let g_qp = -phase.conj() * s; // −s·e^{−iβ}

                // Right multiplication: columns p and q of A.
                for i in 0..d {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c + aiq * g_qp;
                    a[(i, q)] = aip * g_pq + aiq * c;
                }
                // Left multiplication by G†: rows p and q.
                for j in 0..d {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c + aqj * g_qp.conj();
                    a[(q, j)] = apj * g_pq.conj() + aqj * c;
                }
                // The pivot is zero by construction; store the exact value.
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                // Accumulate eigenvectors: V ← V·G.
                for i in 0..d {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * g_qp;
                    v[(i, q)] = vip * g_pq + viq * c;
                }
            }
        }
        sweeps += 1;
        off = offdiag_frobenius(&a);
    }
    if off > target {
        return Err(Error::NoConvergence(off, sweeps));
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(d, |i, j| v[(i, order[j])]);
    Ok(EigenSystem { values, vectors })
}

/// Spectrum with the PSD clamp applied. Anything below −1e-12 fails;
/// eigenvalues within ±1e-12 of zero are flattened to exact zeros, on both
/// sides — roundoff of a true kernel eigenvalue is as often +1e-17 as
/// −1e-17, and ε^α amplifies either into visible garbage.
pub(crate) fn clamped_spectrum(es: &EigenSystem) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(es.dim());
    for &p in &es.values {
        if p < PSD_CLAMP {
            return Err(Error::NotPositive(p));
        }
        out.push(if p < PSD_CLAMP.abs() { 0.0 } else { p });
    }
    Ok(out)
}

/// Fractional matrix power ρ^s = V diag(p_ℓ^s) V† for s ∈ (0, 1].
pub fn matrix_power(rho: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::AlphaOutOfRange(s));
    }
    let es = eigh(rho)?;
    matrix_power_of_eigen(&es, s)
}

/// Same as [`matrix_power`] but reusing an existing decomposition.
pub(crate) fn matrix_power_of_eigen(es: &EigenSystem, s: f64) -> Result<ComplexMatrix> {
    let weights: Vec<C64> = clamped_spectrum(es)?
        .into_iter()
        .map(|p| C64::new(p.powf(s), 0.0))
        .collect();
    Ok(es.weighted_reconstruct(&weights).hermitized())
}

/// U = e^{−iφA} = V diag(e^{−iφλ_ℓ}) V† for Hermitian A.
pub fn unitary_from_generator(a: &ComplexMatrix, phi: f64) -> Result<ComplexMatrix> {
    let es = eigh(a)?;
    Ok(es.map_spectrum(|lam| C64::new(0.0, -phi * lam).exp()))
}

/// U ρ U† with a unitarity gate on U.
pub fn conjugate(rho: &ComplexMatrix, u: &ComplexMatrix) -> Result<ComplexMatrix> {
    rho.check_same_dim(u)?;
    let residual = u.unitarity_residual();
    if residual > UNITARITY_TOL {
        return Err(Error::NotUnitary(residual));
    }
    Ok(&(u * rho) * &u.adjoint())
}

/// Trace norm ‖A‖₁ = Tr √(A†A), the sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    let gram = (&a.adjoint() * a).hermitized();
    let es = eigh(&gram).expect("A†A is Hermitian by construction");
    es.values.iter().map(|&x| x.max(0.0).sqrt()).sum()
}
