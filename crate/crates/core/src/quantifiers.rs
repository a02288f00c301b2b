//! Skew information, Fisher information, variances, the α → 1 limit, and
//! the evaluator for the chain of bounds tying them to the MQI second
//! moment.
//!
//! The skew quantities are computed from the eigenbasis double sums, which
//! are nonnegative term by term; the commutator-trace forms are kept as
//! independent cross-check routes.

use crate::coherence::{check_alpha, mqi_spectrum_of_eigen, second_moment};
use crate::eigen::{clamped_spectrum, eigh, matrix_power_of_eigen, EigenSystem};
use crate::error::{Error, Result};
use crate::matrix::{commutator, ComplexMatrix};
use crate::observables::Observable;

/// Radicands below this are a broken upstream quantifier, not roundoff.
const RADICAND_FAULT: f64 = -1e-9;

/// Full-rank gate for the α → 1 limit formula.
const FULL_RANK_FLOOR: f64 = 1e-12;

fn check_generator(rho: &ComplexMatrix, a: &ComplexMatrix) -> Result<()> {
    rho.check_same_dim(a)?;
    let residual = a.hermitian_residual();
    if residual > crate::eigen::HERMITICITY_TOL {
        return Err(Error::NotHermitian(residual));
    }
    Ok(())
}

/// Generator rotated into the state eigenbasis, entries ⟨ψ_j|A|ψ_ℓ⟩.
fn projected(a: &ComplexMatrix, es: &EigenSystem) -> ComplexMatrix {
    let v = &es.vectors;
    &(&v.adjoint() * a) * v
}

fn wydsi_sum(spectrum: &[f64], b: &ComplexMatrix, alpha: f64) -> f64 {
    let d = spectrum.len();
    let mut acc = 0.0;
    for j in 0..d {
        for l in (j + 1)..d {
            let da = spectrum[j].powf(alpha) - spectrum[l].powf(alpha);
            let db = spectrum[j].powf(1.0 - alpha) - spectrum[l].powf(1.0 - alpha);
            acc += da * db * b[(j, l)].norm_sqr();
        }
    }
    acc
}

fn lower_sum(spectrum: &[f64], b: &ComplexMatrix) -> f64 {
    let d = spectrum.len();
    let mut acc = 0.0;
    for j in 0..d {
        for l in (j + 1)..d {
            let dp = spectrum[j] - spectrum[l];
            acc += 0.5 * dp * dp * b[(j, l)].norm_sqr();
        }
    }
    acc
}

fn qfi_sum(spectrum: &[f64], b: &ComplexMatrix) -> f64 {
    let d = spectrum.len();
    let mut acc = 0.0;
    for j in 0..d {
        for l in 0..d {
            let sum = spectrum[j] + spectrum[l];
            if sum <= 1e-14 {
                continue;
            }
            let dp = spectrum[j] - spectrum[l];
            acc += 0.5 * dp * dp / sum * b[(j, l)].norm_sqr();
        }
    }
    acc
}

/// Wigner-Yanase-Dyson skew information I_α(ρ, Â), eigenbasis form
/// Σ_{j<ℓ} (p_j^α − p_ℓ^α)(p_j^{1−α} − p_ℓ^{1−α}) |⟨ψ_j|Â|ψ_ℓ⟩|².
pub fn wydsi(rho: &ComplexMatrix, a: &ComplexMatrix, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_generator(rho, a)?;
    let es = eigh(rho)?;
    let spectrum = clamped_spectrum(&es)?;
    Ok(wydsi_sum(&spectrum, &projected(a, &es), alpha))
}

/// Commutator route −½ Tr([Â, ρ^α][Â, ρ^{1−α}]); cross-check for [`wydsi`].
pub fn wydsi_via_commutators(rho: &ComplexMatrix, a: &ComplexMatrix, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_generator(rho, a)?;
    let es = eigh(rho)?;
    let pow_alpha = matrix_power_of_eigen(&es, alpha)?;
    let pow_conj = matrix_power_of_eigen(&es, 1.0 - alpha)?;
    let product = &commutator(a, &pow_alpha) * &commutator(a, &pow_conj);
    Ok(-0.5 * product.trace().re)
}

/// Commutator-based lower quantifier I^L(ρ, Â) = −¼ Tr([ρ, Â]²), computed
/// as the manifestly nonnegative sum ½ Σ_{j<ℓ} (p_j − p_ℓ)² |⟨ψ_j|Â|ψ_ℓ⟩|².
pub fn lower_quantifier(rho: &ComplexMatrix, a: &ComplexMatrix) -> Result<f64> {
    check_generator(rho, a)?;
    let es = eigh(rho)?;
    let spectrum = clamped_spectrum(&es)?;
    Ok(lower_sum(&spectrum, &projected(a, &es)))
}

/// Direct trace route −¼ Tr([ρ, Â]²); cross-check for [`lower_quantifier`].
pub fn lower_quantifier_via_commutator(rho: &ComplexMatrix, a: &ComplexMatrix) -> Result<f64> {
    check_generator(rho, a)?;
    let c = commutator(rho, a);
    Ok(-0.25 * (&c * &c).trace().re)
}

/// Quantum Fisher information, normalized so pure states give the
/// generator variance; terms with p_j + p_ℓ ≈ 0 are skipped.
pub fn qfi(rho: &ComplexMatrix, a: &ComplexMatrix) -> Result<f64> {
    check_generator(rho, a)?;
    let es = eigh(rho)?;
    let spectrum = clamped_spectrum(&es)?;
    Ok(qfi_sum(&spectrum, &projected(a, &es)))
}

/// Variance V(ρ, Â) = Tr(ρÂ²) − [Tr(ρÂ)]².
pub fn variance(rho: &ComplexMatrix, a: &ComplexMatrix) -> Result<f64> {
    check_generator(rho, a)?;
    let mean = (rho * a).trace().re;
    let square = (&(rho * a) * a).trace().re;
    Ok(square - mean * mean)
}

/// α-variance V_α = √(V² − (V − I_α)²); tiny negative radicands are
/// clamped, anything below −1e-9 signals a broken upstream quantifier.
pub fn alpha_variance(rho: &ComplexMatrix, a: &ComplexMatrix, alpha: f64) -> Result<f64> {
    let v = variance(rho, a)?;
    let skew = wydsi(rho, a, alpha)?;
    let radicand = v * v - (v - skew) * (v - skew);
    if radicand < RADICAND_FAULT {
        return Err(Error::NegativeRadicand(radicand));
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Curvature coefficient of the α → 1 limit of D_α(ρ‖ρ_φ):
/// Tr(Â²ρ ln ρ) − Tr(ÂρÂ ln ρ), evaluated in the state eigenbasis.
/// Requires a full-rank state.
pub fn kl_limit_coefficient(rho: &ComplexMatrix, a: &ComplexMatrix) -> Result<f64> {
    check_generator(rho, a)?;
    let es = eigh(rho)?;
    let smallest = es.values[0];
    if smallest < FULL_RANK_FLOOR {
        return Err(Error::SingularState(smallest));
    }
    let b = projected(a, &es);
    let d = es.dim();
    let mut acc = 0.0;
    for j in 0..d {
        for l in 0..d {
            if j == l {
                continue;
            }
            acc += es.values[j] * (es.values[j].ln() - es.values[l].ln()) * b[(j, l)].norm_sqr();
        }
    }
    Ok(acc)
}

/// Every quantifier of the bound chains evaluated at one (ρ, Â, α).
#[derive(Clone, Copy, Debug)]
pub struct BoundReport {
    pub alpha: f64,
    /// 2α(1−α)·I^L, the lower end of the chains.
    pub lower_il_term: f64,
    /// F_I^α/(4 c_α c_{1−α}), computed via the MQI spectrum.
    pub f_over_4cc: f64,
    /// Wigner-Yanase skew information I_{1/2}.
    pub wysi: f64,
    pub v_alpha: f64,
    pub v_half: f64,
    pub variance: f64,
    pub qfi: f64,
    /// One flag per chain: lower ≤ F/4cc ≤ I_{1/2} ≤ V_{1/2};
    /// lower ≤ F/4cc ≤ V_α ≤ V_{1/2}; F/4cc ≤ I_{1/2} ≤ F_Q ≤ 2·I_{1/2}.
    pub chain_ok: [bool; 3],
}

/// Evaluate all chain quantifiers; flags use slack 1e-9·max(1, scale) so
/// the bounds may be saturated without false failures.
pub fn bound_report(rho: &ComplexMatrix, a: &Observable, alpha: f64) -> Result<BoundReport> {
    check_alpha(alpha)?;
    check_generator(rho, a.matrix())?;
    let es = eigh(rho)?;
    let spectrum = clamped_spectrum(&es)?;
    let b = projected(a.matrix(), &es);

    let spec = mqi_spectrum_of_eigen(&es, a, alpha)?;
    let f_over_4cc = second_moment(&spec)? / (4.0 * spec.normalizer());

    let il = lower_sum(&spectrum, &b);
    let lower_il_term = 2.0 * alpha * (1.0 - alpha) * il;
    let wysi = wydsi_sum(&spectrum, &b, 0.5);
    let skew_alpha = wydsi_sum(&spectrum, &b, alpha);
    let var = variance(rho, a.matrix())?;
    let fisher = qfi_sum(&spectrum, &b);

    let v_of = |skew: f64| -> Result<f64> {
        let radicand = var * var - (var - skew) * (var - skew);
        if radicand < RADICAND_FAULT {
            return Err(Error::NegativeRadicand(radicand));
        }
        Ok(radicand.max(0.0).sqrt())
    };
    let v_alpha = v_of(skew_alpha)?;
    let v_half = v_of(wysi)?;

    let scale = [
        lower_il_term,
        f_over_4cc,
        wysi,
        v_alpha,
        v_half,
        var,
        fisher,
    ]
    .into_iter()
    .map(f64::abs)
    .fold(0.0, f64::max);
    let slack = 1e-9 * scale.max(1.0);

    let chain_ok = [
        lower_il_term <= f_over_4cc + slack && f_over_4cc <= wysi + slack && wysi <= v_half + slack,
        lower_il_term <= f_over_4cc + slack
            && f_over_4cc <= v_alpha + slack
            && v_alpha <= v_half + slack,
        f_over_4cc <= wysi + slack && wysi <= fisher + slack && fisher <= 2.0 * wysi + slack,
    ];

    let report = BoundReport {
        alpha,
        lower_il_term,
        f_over_4cc,
        wysi,
        v_alpha,
        v_half,
        variance: var,
        qfi: fisher,
        chain_ok,
    };
    debug_assert!(
        [
            report.lower_il_term,
            report.f_over_4cc,
            report.wysi,
            report.v_alpha,
            report.v_half,
            report.variance,
            report.qfi
        ]
        .iter()
        .all(|x| x.is_finite()),
        "bound report produced a non-finite quantifier"
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{pauli_dot, pauli_x};
    use crate::observables::{collective_spin, qubit_generator};
    use crate::states::{
        family_state, pure_vector, qubit_state, random_density, BlochVector, MixedFamilyParams,
        PureFamily, StateFamily,
    };

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn spin_z(n_qubits: usize) -> ComplexMatrix {
        collective_spin(n_qubits, [0.0, 0.0, 1.0])
            .unwrap()
            .matrix()
            .clone()
    }

    fn spin_x(n_qubits: usize) -> ComplexMatrix {
        collective_spin(n_qubits, [1.0, 0.0, 0.0])
            .unwrap()
            .matrix()
            .clone()
    }

    #[test]
    fn commuting_pair_gives_zero_everywhere() {
        let rho = ComplexMatrix::from_diag(&[0.3, 0.7]);
        let a = pauli_dot([0.0, 0.0, 1.0]).scale_re(0.5);
        close(wydsi(&rho, &a, 0.4).unwrap(), 0.0, 1e-14);
        close(lower_quantifier(&rho, &a).unwrap(), 0.0, 1e-14);
        close(kl_limit_coefficient(&rho, &a).unwrap(), 0.0, 1e-14);
        close(alpha_variance(&rho, &a, 0.4).unwrap(), 0.0, 1e-14);
    }

    #[test]
    fn single_qubit_table_values() {
        let r = 0.6;
        // State along ẑ, generator along x̂, so n̂·r̂ = 0.
        let rho = qubit_state(&BlochVector::new(r, 0.0, 0.0).unwrap());
        let a = pauli_dot([1.0, 0.0, 0.0]).scale_re(0.5);

        close(
            wydsi(&rho, &a, 0.5).unwrap(),
            0.25 * (1.0 - (1.0 - r * r).sqrt()),
            1e-13,
        );
        close(lower_quantifier(&rho, &a).unwrap(), r * r / 8.0, 1e-13);
        close(qfi(&rho, &a).unwrap(), r * r / 4.0, 1e-13);
        close(variance(&rho, &a).unwrap(), 0.25, 1e-13);
    }

    #[test]
    fn single_qubit_variance_uses_full_bloch_vector() {
        // V = (1/4)[1 − (n̂·r⃗)²] with r⃗ = r·r̂.
        let r = 0.8;
        let rho = qubit_state(&BlochVector::new(r, 0.0, 0.0).unwrap());
        let a = pauli_dot([0.0, 0.0, 1.0]).scale_re(0.5);
        close(variance(&rho, &a).unwrap(), 0.25 * (1.0 - r * r), 1e-13);
    }

    #[test]
    fn ghz_wysi_closed_form() {
        let n_qubits = 3;
        let p = 0.45;
        let d = (1u32 << n_qubits) as f64;
        let params = MixedFamilyParams::new(StateFamily::Ghz, n_qubits, p).unwrap();
        let rho = family_state(&params);
        let expect = (n_qubits * n_qubits) as f64 / (4.0 * d)
            * ((1.0 + (d - 1.0) * p).sqrt() - (1.0 - p).sqrt()).powi(2);
        close(wydsi(&rho, &spin_z(n_qubits), 0.5).unwrap(), expect, 1e-12);
    }

    #[test]
    fn w_state_lower_quantifier_closed_form() {
        for n_qubits in [2usize, 3, 4] {
            let p = 0.6;
            let params = MixedFamilyParams::new(StateFamily::W, n_qubits, p).unwrap();
            let rho = family_state(&params);
            let expect = (4.0 + 3.0 * (n_qubits as f64 - 2.0)) * p * p / 8.0;
            close(
                lower_quantifier(&rho, &spin_x(n_qubits)).unwrap(),
                expect,
                1e-12,
            );
        }
    }

    #[test]
    fn eqn_qfi_closed_form() {
        let n_qubits = 4;
        let p = 0.3;
        let d = (1u32 << n_qubits) as f64;
        let params = MixedFamilyParams::new(StateFamily::Eqn, n_qubits, p).unwrap();
        let rho = family_state(&params);
        let expect = n_qubits as f64 * d * p * p / (4.0 * (2.0 + (d - 2.0) * p));
        close(qfi(&rho, &spin_z(n_qubits)).unwrap(), expect, 1e-12);
    }

    #[test]
    fn qfi_of_pure_ghz_recovers_variance() {
        let n_qubits = 3;
        let psi = pure_vector(PureFamily::Ghz, n_qubits);
        let rho = ComplexMatrix::projector(&psi);
        let sz = spin_z(n_qubits);
        let var = variance(&rho, &sz).unwrap();
        close(var, (n_qubits * n_qubits) as f64 / 4.0, 1e-12);
        close(qfi(&rho, &sz).unwrap(), var, 1e-11);
    }

    #[test]
    fn w_state_variance_closed_form() {
        let n_qubits = 4;
        let p = 0.55;
        let params = MixedFamilyParams::new(StateFamily::W, n_qubits, p).unwrap();
        let rho = family_state(&params);
        let expect = 0.25 * (n_qubits as f64 + 2.0 * (n_qubits as f64 - 1.0) * p);
        close(variance(&rho, &spin_x(n_qubits)).unwrap(), expect, 1e-12);
    }

    #[test]
    fn wydsi_sum_and_commutator_routes_agree() {
        let rho = random_density(4, 31);
        let a = crate::states::random_hermitian(4, 32);
        for alpha in [0.2, 0.5, 0.8] {
            let via_sum = wydsi(&rho, &a, alpha).unwrap();
            let via_comm = wydsi_via_commutators(&rho, &a, alpha).unwrap();
            close(via_sum, via_comm, 1e-10);
            assert!(via_sum >= -1e-12);
        }
        let via_sum = lower_quantifier(&rho, &a).unwrap();
        let via_comm = lower_quantifier_via_commutator(&rho, &a).unwrap();
        close(via_sum, via_comm, 1e-10);
    }

    #[test]
    fn alpha_variance_on_pure_states_equals_variance() {
        // For pure states I_α = V, so the radicand collapses to V².
        let psi = pure_vector(PureFamily::W, 3);
        let rho = ComplexMatrix::projector(&psi);
        let a = spin_z(3);
        let v = variance(&rho, &a).unwrap();
        for alpha in [0.25, 0.5, 0.75] {
            close(alpha_variance(&rho, &a, alpha).unwrap(), v, 1e-11);
        }
    }

    #[test]
    fn alpha_variance_bounded_by_variance() {
        let rho = random_density(4, 55);
        let a = crate::states::random_hermitian(4, 56);
        for alpha in [0.1, 0.35, 0.6, 0.9] {
            let va = alpha_variance(&rho, &a, alpha).unwrap();
            let v = variance(&rho, &a).unwrap();
            assert!(va <= v + 1e-10, "V_α = {va} exceeded V = {v}");
        }
    }

    #[test]
    fn kl_limit_matches_trace_oracle() {
        // Oracle: Tr(Â²ρ lnρ) − Tr(ÂρÂ lnρ) via the matrix logarithm.
        let cases = [
            (
                ComplexMatrix::from_diag(&[0.2, 0.8]),
                pauli_x().scale_re(0.5),
            ),
            (
                random_density(4, 91),
                crate::states::random_hermitian(4, 92),
            ),
        ];
        for (rho, a) in cases {
            let es = eigh(&rho).unwrap();
            let log_rho = es.map_spectrum(|p| num_complex::Complex64::new(p.ln(), 0.0));
            let oracle = (&(&(&a * &a) * &rho) * &log_rho).trace().re
                - (&(&(&a * &rho) * &a) * &log_rho).trace().re;
            let got = kl_limit_coefficient(&rho, &a).unwrap();
            close(got, oracle, 1e-10);
            assert!(got >= -1e-12);
        }
    }

    #[test]
    fn kl_limit_matches_alpha_extrapolation() {
        let rho = random_density(4, 17);
        let a = crate::states::random_hermitian(4, 18);
        let limit = kl_limit_coefficient(&rho, &a).unwrap();
        let alpha = 1.0 - 1e-4;
        let finite = wydsi(&rho, &a, alpha).unwrap() / (1.0 - alpha);
        let rel = (finite - limit).abs() / limit.abs().max(1e-12);
        assert!(rel < 1e-3, "relative gap {rel}");
    }

    #[test]
    fn kl_limit_rejects_singular_states() {
        let rho = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let a = pauli_x();
        assert!(matches!(
            kl_limit_coefficient(&rho, &a),
            Err(Error::SingularState(_))
        ));
    }

    #[test]
    fn bound_report_maximally_mixed() {
        let a = collective_spin(2, [0.0, 0.0, 1.0]).unwrap();
        let rho = ComplexMatrix::identity(4).scale_re(0.25);
        let report = bound_report(&rho, &a, 0.4).unwrap();
        for value in [
            report.lower_il_term,
            report.f_over_4cc,
            report.wysi,
            report.v_alpha,
            report.qfi,
        ] {
            close(value, 0.0, 1e-11);
        }
        assert_eq!(report.chain_ok, [true, true, true]);
    }

    #[test]
    fn bound_report_qubit_chains_hold() {
        let rho = qubit_state(&BlochVector::new(0.5, std::f64::consts::FRAC_PI_2, 0.0).unwrap());
        let a = qubit_generator([0.0, 0.0, 1.0]).unwrap();
        let report = bound_report(&rho, &a, 0.3).unwrap();
        assert_eq!(report.chain_ok, [true, true, true]);
        // Main identity: F/(4cc') is exactly the skew information.
        let skew = wydsi(&rho, a.matrix(), 0.3).unwrap();
        close(report.f_over_4cc, skew, 1e-11);
    }

    #[test]
    fn bound_report_ghz_grid() {
        let n_qubits = 3;
        let params = MixedFamilyParams::new(StateFamily::Ghz, n_qubits, 0.5).unwrap();
        let rho = family_state(&params);
        let a = collective_spin(n_qubits, [0.0, 0.0, 1.0]).unwrap();
        for k in 1..10 {
            let alpha = k as f64 / 10.0;
            let report = bound_report(&rho, &a, alpha).unwrap();
            assert_eq!(
                report.chain_ok,
                [true, true, true],
                "chain failed at alpha = {alpha}"
            );
        }
    }
}
