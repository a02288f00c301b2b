//! Time-reversal echo protocol for the all-to-all Ising model.
//!
//! Forward evolution under H_zz, an intermediate collective rotation
//! R_φ = e^{−iφŜ_x}, then backward evolution. The relative purity between
//! input and output states is the revival signal; the α-MQI spectrum of
//! the intermediate state ρ_t is taken in the Ŝ_x reference basis.
//!
//! H_zz is diagonal in the computational basis, so both time-evolution
//! steps are elementwise phase multiplications, exact and O(d²).

use num_complex::Complex64 as C64;

use crate::coherence::{mqi_spectrum, relative_purity, second_moment, MqiSpectrum};
use crate::eigen::conjugate;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::observables::{collective_spin, ising_hamiltonian, Observable};
use crate::states::{family_state, MixedFamilyParams, StateFamily};

/// Largest echo system; d = 2^N matrices get slow well before memory runs
/// out, but this keeps both in check.
pub const ECHO_MAX_QUBITS: usize = 10;

/// Tolerance on the two-path purity identity before the engine declares
/// itself broken.
pub const PATH_MISMATCH_TOL: f64 = 1e-8;

/// Parameters of one echo sweep. Time is measured in units of 1/J.
#[derive(Clone, Debug)]
pub struct EchoProtocolConfig {
    pub n_qubits: usize,
    pub coupling: f64,
    pub mixing: f64,
    pub phi: f64,
    pub t_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
}

impl EchoProtocolConfig {
    pub fn new(
        n_qubits: usize,
        coupling: f64,
        mixing: f64,
        phi: f64,
        t_grid: Vec<f64>,
        alpha_grid: Vec<f64>,
    ) -> Result<Self> {
        if !(2..=ECHO_MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::TooLarge(n_qubits, ECHO_MAX_QUBITS));
        }
        if !(mixing > 0.0 && mixing < 1.0) {
            return Err(Error::InvalidP(mixing));
        }
        if t_grid.is_empty() || alpha_grid.is_empty() {
            return Err(Error::InvalidGrid("grids must be nonempty"));
        }
        if t_grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidGrid("time grid must ascend"));
        }
        for &alpha in &alpha_grid {
            crate::coherence::check_alpha(alpha)?;
        }
        if !coupling.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidGrid("coupling and phi must be finite"));
        }
        Ok(Self {
            n_qubits,
            coupling,
            mixing,
            phi,
            t_grid,
            alpha_grid,
        })
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }
}

/// Prepared protocol: initial state, Ŝ_x reference basis, rotation, and
/// the diagonal Ising phases, all fixed once per configuration.
pub struct EchoProtocol {
    config: EchoProtocolConfig,
    rho0: ComplexMatrix,
    s_x: Observable,
    rotation: ComplexMatrix,
    h_diag: Vec<f64>,
}

/// One sampled point of an echo sweep; `intensities` runs over
/// m = −N..N, and the normalized columns follow the
/// (G − min G)/(max G − min G) convention over the whole sweep.
#[derive(Clone, Debug)]
pub struct EchoPoint {
    pub t: f64,
    pub alpha: f64,
    pub purity: f64,
    pub second_moment: f64,
    pub intensities: Vec<C64>,
    pub purity_norm: f64,
    pub second_moment_norm: f64,
    pub intensity_norms: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct EchoTrace {
    pub n_qubits: usize,
    /// Coherence orders labelling the intensity columns, −N..N.
    pub orders: Vec<i64>,
    pub points: Vec<EchoPoint>,
}

impl EchoProtocol {
    pub fn new(config: EchoProtocolConfig) -> Result<Self> {
        let params = MixedFamilyParams::new(StateFamily::Eqn, config.n_qubits, config.mixing)?;
        let rho0 = family_state(&params);
        let s_x = collective_spin(config.n_qubits, [1.0, 0.0, 0.0])?;
        let rotation = s_x.unitary(config.phi);
        let ising = ising_hamiltonian(config.n_qubits, config.coupling)?;
        let h_diag = (0..config.dim())
            .map(|b| ising.matrix()[(b, b)].re)
            .collect();
        Ok(Self {
            config,
            rho0,
            s_x,
            rotation,
            h_diag,
        })
    }

    pub fn config(&self) -> &EchoProtocolConfig {
        &self.config
    }

    pub fn initial_state(&self) -> &ComplexMatrix {
        &self.rho0
    }

    pub fn reference_basis(&self) -> &Observable {
        &self.s_x
    }

    /// e^{−itH} M e^{itH}: elementwise phases of the diagonal Hamiltonian.
    fn propagate(&self, m: &ComplexMatrix, t: f64) -> ComplexMatrix {
        let d = self.config.dim();
        ComplexMatrix::from_fn(d, |j, k| {
            m[(j, k)] * C64::new(0.0, -t * (self.h_diag[j] - self.h_diag[k])).exp()
        })
    }

    /// Intermediate state ρ_t.
    pub fn evolved_state(&self, t: f64) -> ComplexMatrix {
        self.propagate(&self.rho0, t)
    }

    /// Full protocol output ρ_f = U_t† R_φ ρ_t R_φ† U_t; the backward leg
    /// applies U_t† exactly (the J → −J trick in closed form).
    pub fn final_state(&self, t: f64) -> Result<ComplexMatrix> {
        let rho_t = self.evolved_state(t);
        let rotated = conjugate(&rho_t, &self.rotation)?;
        Ok(self.propagate(&rotated, -t))
    }

    /// Echo revival f_α(ρ_0, ρ_f), computed along both sides of the
    /// unitary-invariance identity and cross-asserted.
    pub fn purity(&self, t: f64, alpha: f64) -> Result<f64> {
        let rho_t = self.evolved_state(t);
        let rotated = conjugate(&rho_t, &self.rotation)?;
        let rho_f = self.propagate(&rotated, -t);

        let via_endpoints = relative_purity(&self.rho0, &rho_f, alpha)?;
        let via_intermediate = relative_purity(&rho_t, &rotated, alpha)?;
        let gap = (via_endpoints - via_intermediate).abs();
        if gap > PATH_MISMATCH_TOL {
            return Err(Error::MismatchedPaths(gap));
        }
        Ok(via_endpoints)
    }

    /// α-MQI spectrum of ρ_t over the Ŝ_x reference basis.
    pub fn evolved_mqi(&self, t: f64, alpha: f64) -> Result<MqiSpectrum> {
        let rho_t = self.evolved_state(t);
        let spec = mqi_spectrum(&rho_t, &self.s_x, alpha)?;
        // The normalizer is a constant of the motion.
        let at_origin = mqi_spectrum(&self.rho0, &self.s_x, alpha)?;
        let drift = (spec.c_alpha() - at_origin.c_alpha()).abs();
        assert!(
            drift <= 1e-10,
            "c_alpha drifted by {drift} along the unitary orbit"
        );
        Ok(spec)
    }

    /// Evaluate the whole (t × α) table with normalized columns.
    pub fn run_sweep(&self) -> Result<EchoTrace> {
        let n = self.config.n_qubits as i64;
        let orders: Vec<i64> = (-n..=n).collect();

        struct RawPoint {
            t: f64,
            alpha: f64,
            purity: f64,
            second_moment: f64,
            intensities: Vec<C64>,
        }
        let mut raw = Vec::new();
        let mut alphas = self.config.alpha_grid.clone();
        alphas.sort_by(f64::total_cmp);
        for &alpha in &alphas {
            for &t in &self.config.t_grid {
                let purity = self.purity(t, alpha)?;
                let spec = self.evolved_mqi(t, alpha)?;
                let f = second_moment(&spec)?;
                let intensities = orders.iter().map(|&m| spec.intensity(m)).collect();
                raw.push(RawPoint {
                    t,
                    alpha,
                    purity,
                    second_moment: f,
                    intensities,
                });
            }
        }

        // Column-wise normalization over the entire sweep domain; a
        // constant column normalizes to zero.
        let normalize = |values: &[f64]| -> Vec<f64> {
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                values.iter().map(|v| (v - lo) / (hi - lo)).collect()
            } else {
                vec![0.0; values.len()]
            }
        };
        let purity_norm = normalize(&raw.iter().map(|p| p.purity).collect::<Vec<_>>());
        let f_norm = normalize(&raw.iter().map(|p| p.second_moment).collect::<Vec<_>>());
        let mut intensity_norms = vec![vec![0.0; orders.len()]; raw.len()];
        for (col, _) in orders.iter().enumerate() {
            let column: Vec<f64> = raw.iter().map(|p| p.intensities[col].re).collect();
            for (row, v) in normalize(&column).into_iter().enumerate() {
                intensity_norms[row][col] = v;
            }
        }

        let points = raw
            .into_iter()
            .enumerate()
            .map(|(i, p)| EchoPoint {
                t: p.t,
                alpha: p.alpha,
                purity: p.purity,
                second_moment: p.second_moment,
                intensities: p.intensities,
                purity_norm: purity_norm[i],
                second_moment_norm: f_norm[i],
                intensity_norms: std::mem::take(&mut intensity_norms[i]),
            })
            .collect();
        Ok(EchoTrace {
            n_qubits: self.config.n_qubits,
            orders,
            points,
        })
    }
}
