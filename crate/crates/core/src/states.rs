//! Constructors for the state families under study, plus seeded random
//! density matrices for the property suites.
//!
//! Tensor ordering is big-endian: qubit 1 is the leftmost factor, so the
//! computational basis index carries qubit 1 in its most significant bit.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::{pauli_x, pauli_y, pauli_z, ComplexMatrix};

/// Largest particle count accepted by [`family_state`]; d = 2^N beyond this
/// is a memory hazard.
pub const MAX_QUBITS: usize = 12;

/// Full-rank floor mixed into [`random_density`] outputs so relative
/// entropies stay finite in tests.
pub const RANK_FLOOR: f64 = 1e-6;

/// Bloch-sphere coordinates of a strictly mixed qubit state.
#[derive(Clone, Copy, Debug)]
pub struct BlochVector {
    r: f64,
    theta: f64,
    phi: f64,
}

impl BlochVector {
    /// Radius must lie strictly inside (0, 1); angles must be finite.
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidBloch(r));
        }
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidBloch(f64::NAN));
        }
        Ok(Self { r, theta, phi })
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Unit direction r̂ = (sinθ cosφ, sinθ sinφ, cosθ).
    pub fn direction(&self) -> [f64; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }

    /// Full Bloch vector r⃗ = r·r̂.
    pub fn vector(&self) -> [f64; 3] {
        let d = self.direction();
        [self.r * d[0], self.r * d[1], self.r * d[2]]
    }
}

/// Correlation triple (a_x, a_y, a_z) of a two-qubit Bell-diagonal state.
#[derive(Clone, Copy, Debug)]
pub struct BellDiagonalParams {
    a: [f64; 3],
}

impl BellDiagonalParams {
    /// Physicality is checked at construction: every eigenvalue of the
    /// resulting state must be ≥ −1e-12.
    pub fn new(a: [f64; 3]) -> Result<Self> {
        let params = Self { a };
        for v in params.eigenvalues() {
            if v < -1e-12 {
                return Err(Error::Unphysical(v));
            }
        }
        Ok(params)
    }

    pub fn correlations(&self) -> [f64; 3] {
        self.a
    }

    /// Closed-form eigenvalues υ_r of the Bell-diagonal state, ordered as
    /// (Ψ−, Ψ+, Φ+, Φ−).
    pub fn eigenvalues(&self) -> [f64; 4] {
        let [ax, ay, az] = self.a;
        [
            0.25 * (1.0 - ax - ay - az),
            0.25 * (1.0 + ax + ay - az),
            0.25 * (1.0 + ax - ay + az),
            0.25 * (1.0 - ax + ay + az),
        ]
    }
}

/// Mixed multiparticle families: white noise plus a pure-state projector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateFamily {
    /// Equal-superposition product state |+⟩⟨+|^⊗N.
    Eqn,
    Ghz,
    W,
}

impl StateFamily {
    pub fn pure_family(self) -> PureFamily {
        match self {
            StateFamily::Eqn => PureFamily::Plus,
            StateFamily::Ghz => PureFamily::Ghz,
            StateFamily::W => PureFamily::W,
        }
    }
}

/// Pure states entering the mixed families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PureFamily {
    Plus,
    Ghz,
    W,
}

#[derive(Clone, Copy, Debug)]
pub struct MixedFamilyParams {
    n_qubits: usize,
    mixing: f64,
    family: StateFamily,
}

impl MixedFamilyParams {
    pub fn new(family: StateFamily, n_qubits: usize, mixing: f64) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::TooLarge(n_qubits, MAX_QUBITS));
        }
        if !(mixing > 0.0 && mixing < 1.0) {
            return Err(Error::InvalidP(mixing));
        }
        Ok(Self {
            n_qubits,
            mixing,
            family,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn mixing(&self) -> f64 {
        self.mixing
    }

    pub fn family(&self) -> StateFamily {
        self.family
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Spectrum of the mixed family state: (1−p)/d with multiplicity d−1
    /// and (1+(d−1)p)/d with multiplicity 1.
    pub fn small_eigenvalue(&self) -> f64 {
        (1.0 - self.mixing) / self.dim() as f64
    }

    pub fn large_eigenvalue(&self) -> f64 {
        let d = self.dim() as f64;
        (1.0 + (d - 1.0) * self.mixing) / d
    }
}

/// Single qubit state ρ = (1 + r⃗·σ⃗)/2.
pub fn qubit_state(b: &BlochVector) -> ComplexMatrix {
    let [x, y, z] = b.vector();
    let mut rho = ComplexMatrix::identity(2);
    rho = &rho + &pauli_x().scale_re(x);
    rho = &rho + &pauli_y().scale_re(y);
    rho = &rho + &pauli_z().scale_re(z);
    rho.scale_re(0.5)
}

/// Two-qubit Bell-diagonal state ρ = (1⊗1 + Σ_j a_j σ_j⊗σ_j)/4.
pub fn bell_diagonal(params: &BellDiagonalParams) -> ComplexMatrix {
    let [ax, ay, az] = params.correlations();
    let mut rho = ComplexMatrix::identity(4);
    rho = &rho + &pauli_x().kron(&pauli_x()).scale_re(ax);
    rho = &rho + &pauli_y().kron(&pauli_y()).scale_re(ay);
    rho = &rho + &pauli_z().kron(&pauli_z()).scale_re(az);
    rho.scale_re(0.25)
}

/// Mixed family state ((1−p)/d)·1 + p·|ψ⟩⟨ψ|.
pub fn family_state(params: &MixedFamilyParams) -> ComplexMatrix {
    let d = params.dim();
    let psi = pure_vector(params.family().pure_family(), params.n_qubits());
    let projector = ComplexMatrix::projector(&psi);
    let noise = ComplexMatrix::identity(d).scale_re(params.small_eigenvalue());
    &noise + &projector.scale_re(params.mixing())
}

/// Unit-norm pure state vector of length 2^N.
pub fn pure_vector(family: PureFamily, n_qubits: usize) -> Vec<C64> {
    assert!(n_qubits >= 1, "need at least one qubit");
    let d = 1usize << n_qubits;
    let mut psi = vec![C64::new(0.0, 0.0); d];
    match family {
        PureFamily::Plus => {
            let amp = 1.0 / (d as f64).sqrt();
            for entry in psi.iter_mut() {
                *entry = C64::new(amp, 0.0);
            }
        }
        PureFamily::Ghz => {
            let amp = std::f64::consts::FRAC_1_SQRT_2;
            psi[0] = C64::new(amp, 0.0);
            psi[d - 1] = C64::new(amp, 0.0);
        }
        PureFamily::W => {
            let amp = 1.0 / (n_qubits as f64).sqrt();
            // Site l (1-based, leftmost factor first) excites basis index
            // 2^{N−l}.
            for l in 1..=n_qubits {
                psi[1 << (n_qubits - l)] = C64::new(amp, 0.0);
            }
        }
    }
    psi
}

/// SplitMix64: a tiny deterministic stream, stable bit-for-bit across
/// platforms, which is what the reproducibility contract needs.
#[derive(Clone)]
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in (0, 1].
    fn next_open_unit(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 1.0) * (1.0 / 9007199254740992.0)
    }

    /// Standard normal pair via Box-Muller.
    fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_open_unit();
        let u2 = self.next_open_unit();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        (radius * angle.cos(), radius * angle.sin())
    }

    fn next_complex_gaussian(&mut self) -> C64 {
        let (re, im) = self.next_gaussian_pair();
        C64::new(re, im)
    }
}

/// Full-rank random density matrix: GG†/Tr(GG†) mixed with a 1e-6 identity
/// floor and renormalized. Identical seed ⇒ identical matrix.
pub fn random_density(dim: usize, seed: u64) -> ComplexMatrix {
    assert!(dim >= 2, "random density matrices start at dimension 2");
    let mut rng = SplitMix64(seed);
    let g = ComplexMatrix::from_fn(dim, |_, _| rng.next_complex_gaussian());
    let gram = &g * &g.adjoint();
    let trace = gram.trace().re;
    let normalized = gram.scale_re(1.0 / trace);
    let floor = ComplexMatrix::identity(dim).scale_re(RANK_FLOOR / dim as f64);
    (&normalized + &floor).scale_re(1.0 / (1.0 + RANK_FLOOR))
}

/// Seeded random Hermitian matrix (not positive), entries O(1).
pub fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    assert!(dim >= 1);
    let mut rng = SplitMix64(seed ^ 0x517c_c1b7_2722_0a95);
    let g = ComplexMatrix::from_fn(dim, |_, _| rng.next_complex_gaussian());
    (&g + &g.adjoint()).scale_re(0.5)
}

/// Seeded random unit 3-vector.
pub fn random_unit_vector(seed: u64) -> [f64; 3] {
    let mut rng = SplitMix64(seed ^ 0x2545_f491_4f6c_dd1d);
    loop {
        let (x, y) = rng.next_gaussian_pair();
        let (z, _) = rng.next_gaussian_pair();
        let norm = (x * x + y * y + z * z).sqrt();
        if norm > 1e-3 {
            return [x / norm, y / norm, z / norm];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigh;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn qubit_state_equatorial() {
        // r = 0.5 along x̂: ρ = (1 + 0.5σ_x)/2, eigenvalues 0.25 and 0.75.
        let b = BlochVector::new(0.5, std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        let rho = qubit_state(&b);
        let expect = &ComplexMatrix::identity(2).scale_re(0.5) + &pauli_x().scale_re(0.25);
        assert!((&rho - &expect).max_abs() < 1e-14);
        let es = eigh(&rho).unwrap();
        close(es.values[0], 0.25, 1e-14);
        close(es.values[1], 0.75, 1e-14);
    }

    #[test]
    fn qubit_state_polar() {
        let b = BlochVector::new(0.9, 0.0, 0.0).unwrap();
        let rho = qubit_state(&b);
        close(rho[(0, 0)].re, 0.95, 1e-14);
        close(rho[(1, 1)].re, 0.05, 1e-14);
    }

    #[test]
    fn qubit_state_is_density() {
        let b = BlochVector::new(0.37, 1.1, 5.2).unwrap();
        let rho = qubit_state(&b);
        assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(rho.hermitian_residual() < 1e-15);
    }

    #[test]
    fn bloch_rejects_out_of_range_radius() {
        assert!(matches!(
            BlochVector::new(0.0, 0.0, 0.0),
            Err(Error::InvalidBloch(_))
        ));
        assert!(matches!(
            BlochVector::new(1.0, 0.0, 0.0),
            Err(Error::InvalidBloch(_))
        ));
    }

    #[test]
    fn bell_diagonal_maximally_mixed() {
        let params = BellDiagonalParams::new([0.0, 0.0, 0.0]).unwrap();
        let rho = bell_diagonal(&params);
        let expect = ComplexMatrix::identity(4).scale_re(0.25);
        assert!((&rho - &expect).max_abs() < 1e-15);
    }

    #[test]
    fn bell_diagonal_singlet() {
        // a = (−1,−1,−1) is the singlet projector: spectrum (1, 0, 0, 0).
        let params = BellDiagonalParams::new([-1.0, -1.0, -1.0]).unwrap();
        let rho = bell_diagonal(&params);
        let es = eigh(&rho).unwrap();
        close(es.values[3], 1.0, 1e-14);
        for k in 0..3 {
            close(es.values[k], 0.0, 1e-14);
        }
    }

    #[test]
    fn bell_diagonal_spectrum_matches_formula() {
        let params = BellDiagonalParams::new([0.2, 0.1, -0.3]).unwrap();
        let rho = bell_diagonal(&params);
        let mut expect = params.eigenvalues().to_vec();
        expect.sort_by(f64::total_cmp);
        close(expect.iter().sum::<f64>(), 1.0, 1e-15);
        let es = eigh(&rho).unwrap();
        for (got, want) in es.values.iter().zip(expect.iter()) {
            close(*got, *want, 1e-12);
        }
    }

    #[test]
    fn bell_diagonal_rejects_unphysical() {
        assert!(matches!(
            BellDiagonalParams::new([1.0, 1.0, 1.0]),
            Err(Error::Unphysical(_))
        ));
    }

    #[test]
    fn family_state_single_qubit_plus() {
        let p = 0.3;
        let params = MixedFamilyParams::new(StateFamily::Eqn, 1, p).unwrap();
        let rho = family_state(&params);
        let expect = &ComplexMatrix::identity(2).scale_re(0.5) + &pauli_x().scale_re(p / 2.0);
        assert!((&rho - &expect).max_abs() < 1e-14);
    }

    #[test]
    fn family_state_ghz_top_eigenvalue() {
        let params = MixedFamilyParams::new(StateFamily::Ghz, 2, 0.5).unwrap();
        let rho = family_state(&params);
        let es = eigh(&rho).unwrap();
        close(*es.values.last().unwrap(), 0.625, 1e-13);
        close(es.values[0], params.small_eigenvalue(), 1e-13);
    }

    #[test]
    fn family_state_w_purity_matches_spectrum() {
        let params = MixedFamilyParams::new(StateFamily::W, 3, 0.4).unwrap();
        let rho = family_state(&params);
        let d = params.dim() as f64;
        let q = params.small_eigenvalue();
        let big = params.large_eigenvalue();
        let expect_purity = (d - 1.0) * q * q + big * big;
        let purity = (&rho * &rho).trace().re;
        close(purity, expect_purity, 1e-13);
        close(rho.trace().re, 1.0, 1e-13);
    }

    #[test]
    fn family_params_validation() {
        assert!(matches!(
            MixedFamilyParams::new(StateFamily::Ghz, 13, 0.5),
            Err(Error::TooLarge(13, MAX_QUBITS))
        ));
        assert!(matches!(
            MixedFamilyParams::new(StateFamily::Ghz, 2, 1.0),
            Err(Error::InvalidP(_))
        ));
    }

    #[test]
    fn pure_vectors_by_definition() {
        let ghz = pure_vector(PureFamily::Ghz, 2);
        let amp = std::f64::consts::FRAC_1_SQRT_2;
        close(ghz[0].re, amp, 1e-15);
        close(ghz[3].re, amp, 1e-15);
        assert!(ghz[1].norm() < 1e-15 && ghz[2].norm() < 1e-15);

        let w = pure_vector(PureFamily::W, 2);
        close(w[1].re, amp, 1e-15);
        close(w[2].re, amp, 1e-15);
        assert!(w[0].norm() < 1e-15 && w[3].norm() < 1e-15);

        let plus = pure_vector(PureFamily::Plus, 1);
        close(plus[0].re, amp, 1e-15);
        close(plus[1].re, amp, 1e-15);
    }

    #[test]
    fn every_constructor_emits_a_density_matrix() {
        let mut states = vec![
            qubit_state(&BlochVector::new(0.62, 0.8, 4.0).unwrap()),
            bell_diagonal(&BellDiagonalParams::new([0.3, -0.2, 0.1]).unwrap()),
            random_density(5, 99),
        ];
        for family in [StateFamily::Eqn, StateFamily::Ghz, StateFamily::W] {
            let params = MixedFamilyParams::new(family, 3, 0.37).unwrap();
            states.push(family_state(&params));
        }
        for rho in &states {
            assert!(rho.hermitian_residual() < 1e-10);
            assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-10);
            let es = eigh(rho).unwrap();
            assert!(
                es.values[0] > -1e-10,
                "negative eigenvalue {}",
                es.values[0]
            );
        }
    }

    #[test]
    fn family_spectrum_matches_closed_form() {
        for family in [StateFamily::Eqn, StateFamily::Ghz, StateFamily::W] {
            let params = MixedFamilyParams::new(family, 3, 0.55).unwrap();
            let rho = family_state(&params);
            let es = eigh(&rho).unwrap();
            let d = params.dim();
            for &v in &es.values[..d - 1] {
                close(v, params.small_eigenvalue(), 1e-12);
            }
            close(es.values[d - 1], params.large_eigenvalue(), 1e-12);
        }
    }

    #[test]
    fn random_density_is_reproducible_and_full_rank() {
        let a = random_density(4, 7);
        let b = random_density(4, 7);
        assert!(a == b, "identical seeds must give identical matrices");
        let c = random_density(4, 8);
        assert!((&a - &c).max_abs() > 1e-3, "different seeds should differ");

        close(a.trace().re, 1.0, 1e-13);
        let es = eigh(&a).unwrap();
        assert!(es.values[0] > 0.0);
        assert!(*es.values.last().unwrap() < 1.0);

        let tiny = random_density(2, 0);
        let es = eigh(&tiny).unwrap();
        assert!(es.values[0] > 0.0 && es.values[1] < 1.0);
    }
}
