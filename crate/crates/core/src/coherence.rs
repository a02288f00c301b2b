//! Coherence-order machinery: normalized fractional states, block
//! decomposition over a reference basis, the α-MQI spectrum and its second
//! moment, relative purity, and the Rényi entropies tying them together.
//!
//! Everything here works with α strictly inside (0, 1); the α → 1 limit
//! lives in [`crate::quantifiers`] as a dedicated closed form.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::eigen::{
    clamped_spectrum, conjugate, eigh, matrix_power, matrix_power_of_eigen, EigenSystem,
};
use crate::error::{Error, Result};
use crate::matrix::{hs_inner, ComplexMatrix};
use crate::observables::Observable;

/// Blocks whose largest entry falls below this are treated as exactly zero
/// and omitted from the decomposition.
pub const BLOCK_DROP_TOL: f64 = 1e-13;

/// Relative purities at or below this floor count as orthogonal supports,
/// so the relative entropy is +∞.
pub const SUPPORT_FLOOR: f64 = 1e-14;

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(())
}

/// The normalized fractional state ρ^(α) = c_α ρ^α with c_α = 1/Tr(ρ^α).
#[derive(Clone, Debug)]
pub struct NormalizedPower {
    pub alpha: f64,
    pub c_alpha: f64,
    pub matrix: ComplexMatrix,
}

/// Build ρ^(α) from a density matrix for α ∈ (0, 1).
pub fn normalized_power(rho: &ComplexMatrix, alpha: f64) -> Result<NormalizedPower> {
    check_alpha(alpha)?;
    let es = eigh(rho)?;
    normalized_power_of_eigen(&es, alpha)
}

pub(crate) fn normalized_power_of_eigen(es: &EigenSystem, alpha: f64) -> Result<NormalizedPower> {
    let spectrum = clamped_spectrum(es)?;
    let trace_alpha: f64 = spectrum.iter().map(|p| p.powf(alpha)).sum();
    let c_alpha = 1.0 / trace_alpha;
    let weights: Vec<C64> = spectrum
        .iter()
        .map(|p| C64::new(p.powf(alpha) * c_alpha, 0.0))
        .collect();
    let matrix = es.weighted_reconstruct(&weights).hermitized();
    Ok(NormalizedPower {
        alpha,
        c_alpha,
        matrix,
    })
}

/// Sparse coherence-order decomposition ρ^(α) = Σ_m ρ_m^(α); an absent
/// order is a zero block.
#[derive(Clone, Debug)]
pub struct CoherenceDecomposition {
    alpha: f64,
    orders: BTreeMap<i64, ComplexMatrix>,
}

impl CoherenceDecomposition {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn block(&self, m: i64) -> Option<&ComplexMatrix> {
        self.orders.get(&m)
    }

    pub fn orders(&self) -> impl Iterator<Item = (i64, &ComplexMatrix)> {
        self.orders.iter().map(|(&m, b)| (m, b))
    }

    pub fn order_list(&self) -> Vec<i64> {
        self.orders.keys().copied().collect()
    }

    /// Σ_m ρ_m^(α), which must reproduce ρ^(α).
    pub fn sum(&self) -> ComplexMatrix {
        let dim = self
            .orders
            .values()
            .next()
            .map(|b| b.dim())
            .expect("a decomposition always holds the m = 0 block");
        let mut acc = ComplexMatrix::zeros(dim);
        for block in self.orders.values() {
            acc = &acc + block;
        }
        acc
    }
}

/// Split ρ^(α) into coherence-order blocks over the reference basis of `a`.
pub fn decompose(np: &NormalizedPower, a: &Observable) -> Result<CoherenceDecomposition> {
    if np.matrix.dim() != a.dim() {
        return Err(Error::DimMismatch(np.matrix.dim(), a.dim()));
    }
    let dim = a.dim();
    let w = &a.eigensystem().vectors;
    let rotated = &(&w.adjoint() * &np.matrix) * w;

    let mut masks: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for j in 0..dim {
        for l in 0..dim {
            masks.entry(a.order_between(j, l)).or_default().push((j, l));
        }
    }

    let mut orders = BTreeMap::new();
    for (m, pairs) in masks {
        let mut masked = ComplexMatrix::zeros(dim);
        for (j, l) in pairs {
            masked[(j, l)] = rotated[(j, l)];
        }
        let block = &(w * &masked) * &w.adjoint();
        if m == 0 || block.max_abs() > BLOCK_DROP_TOL {
            orders.insert(m, block);
        }
    }
    Ok(CoherenceDecomposition {
        alpha: np.alpha,
        orders,
    })
}

/// The α-MQI spectrum {I_m^α} together with its normalizers.
#[derive(Clone, Debug)]
pub struct MqiSpectrum {
    alpha: f64,
    c_alpha: f64,
    c_one_minus_alpha: f64,
    intensities: BTreeMap<i64, C64>,
}

impl MqiSpectrum {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c_alpha(&self) -> f64 {
        self.c_alpha
    }

    pub fn c_one_minus_alpha(&self) -> f64 {
        self.c_one_minus_alpha
    }

    /// Product c_α·c_{1−α}, the sum-rule normalizer.
    pub fn normalizer(&self) -> f64 {
        self.c_alpha * self.c_one_minus_alpha
    }

    /// I_m, zero for orders not present.
    pub fn intensity(&self, m: i64) -> C64 {
        self.intensities
            .get(&m)
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn orders(&self) -> Vec<i64> {
        self.intensities.keys().copied().collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.intensities.iter().map(|(&m, &v)| (m, v))
    }

    /// Σ_m I_m, which the sum rule pins to c_α·c_{1−α}.
    pub fn total(&self) -> C64 {
        self.intensities.values().sum()
    }

    /// Σ_m e^{−imφ} I_m, the band-limited relative-purity signal scaled by
    /// the normalizer.
    pub fn phase_sum(&self, phi: f64) -> C64 {
        self.intensities
            .iter()
            .map(|(&m, &i)| C64::new(0.0, -(m as f64) * phi).exp() * i)
            .sum()
    }
}

/// α-MQI spectrum of ρ in the reference basis of `a`, computed block by
/// block from the decompositions at α and 1−α.
pub fn mqi_spectrum(rho: &ComplexMatrix, a: &Observable, alpha: f64) -> Result<MqiSpectrum> {
    check_alpha(alpha)?;
    let es = eigh(rho)?;
    mqi_spectrum_of_eigen(&es, a, alpha)
}

pub(crate) fn mqi_spectrum_of_eigen(
    es: &EigenSystem,
    a: &Observable,
    alpha: f64,
) -> Result<MqiSpectrum> {
    let np_alpha = normalized_power_of_eigen(es, alpha)?;
    let np_conj = normalized_power_of_eigen(es, 1.0 - alpha)?;
    let dec_alpha = decompose(&np_alpha, a)?;
    let dec_conj = decompose(&np_conj, a)?;

    let mut intensities = BTreeMap::new();
    for (m, block_alpha) in dec_alpha.orders() {
        if let Some(block_conj) = dec_conj.block(m) {
            // I_m = Tr((ρ_m^(α))† ρ_m^(1−α)).
            intensities.insert(m, hs_inner(block_alpha, block_conj)?);
        }
    }
    Ok(MqiSpectrum {
        alpha,
        c_alpha: np_alpha.c_alpha,
        c_one_minus_alpha: np_conj.c_alpha,
        intensities,
    })
}

/// Second moment F_I^α = 2 Σ_m m² I_m of an MQI spectrum. The result is
/// provably real; a large imaginary residue is an engine fault.
pub fn second_moment(spec: &MqiSpectrum) -> Result<f64> {
    let total: C64 = spec
        .entries()
        .map(|(m, i)| i * (2.0 * (m * m) as f64))
        .sum();
    if total.im.abs() > 1e-9 {
        return Err(Error::ImaginaryResidue(total.im.abs()));
    }
    Ok(total.re)
}

/// Relative purity f_α(ρ, ϱ) = Tr(ρ^α ϱ^{1−α}).
pub fn relative_purity(rho: &ComplexMatrix, sigma: &ComplexMatrix, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    rho.check_same_dim(sigma)?;
    let rho_pow = matrix_power(rho, alpha)?;
    let sigma_pow = matrix_power(sigma, 1.0 - alpha)?;
    Ok((&rho_pow * &sigma_pow).trace().re)
}

/// α-Rényi relative entropy D_α(ρ‖ϱ) = ln f_α(ρ, ϱ)/(α−1); +∞ when the
/// supports are disjoint.
pub fn renyi_relative_entropy(
    rho: &ComplexMatrix,
    sigma: &ComplexMatrix,
    alpha: f64,
) -> Result<f64> {
    let purity = relative_purity(rho, sigma, alpha)?;
    if purity <= SUPPORT_FLOOR {
        return Ok(f64::INFINITY);
    }
    Ok(purity.ln() / (alpha - 1.0))
}

/// Rényi entropy S_α(ρ) = ln Tr(ρ^α)/(1−α).
pub fn renyi_entropy(rho: &ComplexMatrix, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let es = eigh(rho)?;
    let spectrum = clamped_spectrum(&es)?;
    let trace_alpha: f64 = spectrum.iter().map(|p| p.powf(alpha)).sum();
    Ok(trace_alpha.ln() / (1.0 - alpha))
}

/// D_α(ρ‖ρ_φ) reconstructed from the MQI spectrum and the two Rényi
/// entropies, without touching ρ_φ itself.
pub fn d_alpha_from_spectrum(
    spec: &MqiSpectrum,
    s_alpha: f64,
    s_one_minus_alpha: f64,
    phi: f64,
) -> Result<f64> {
    let z = spec.phase_sum(phi);
    if z.im.abs() > 1e-9 {
        return Err(Error::ImaginaryResidue(z.im.abs()));
    }
    if z.re <= SUPPORT_FLOOR {
        return Ok(f64::INFINITY);
    }
    let alpha = spec.alpha();
    Ok(alpha / (alpha - 1.0) * s_one_minus_alpha - s_alpha + z.re.ln() / (alpha - 1.0))
}

/// Recover the MQI spectrum by discrete Fourier inversion of the purity
/// signal f_α(ρ, ρ_φ) over equally spaced phases.
///
/// The signal is a trigonometric polynomial of degree m_max, so
/// 2·m_max + 1 samples already make the inversion exact.
pub fn fourier_extract(
    rho: &ComplexMatrix,
    a: &Observable,
    alpha: f64,
    samples: usize,
) -> Result<MqiSpectrum> {
    check_alpha(alpha)?;
    if rho.dim() != a.dim() {
        return Err(Error::DimMismatch(rho.dim(), a.dim()));
    }
    let m_max = a.max_order();
    let needed = 2 * m_max as usize + 1;
    if samples < needed {
        return Err(Error::Undersampled(samples, needed));
    }

    let es = eigh(rho)?;
    let spectrum = clamped_spectrum(&es)?;
    let c_alpha = 1.0 / spectrum.iter().map(|p| p.powf(alpha)).sum::<f64>();
    let c_conj = 1.0 / spectrum.iter().map(|p| p.powf(1.0 - alpha)).sum::<f64>();
    let rho_pow = matrix_power_of_eigen(&es, alpha)?;

    let mut signal = Vec::with_capacity(samples);
    for k in 0..samples {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
        let u = a.unitary(phi);
        let rho_phi = conjugate(rho, &u)?;
        let sigma_pow = matrix_power(&rho_phi, 1.0 - alpha)?;
        signal.push((&rho_pow * &sigma_pow).trace().re);
    }

    let scale = c_alpha * c_conj / samples as f64;
    let mut intensities = BTreeMap::new();
    for m in -m_max..=m_max {
        let mut acc = C64::new(0.0, 0.0);
        for (k, &f_k) in signal.iter().enumerate() {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            acc += C64::new(0.0, m as f64 * phi).exp() * f_k;
        }
        intensities.insert(m, acc * scale);
    }
    Ok(MqiSpectrum {
        alpha,
        c_alpha,
        c_one_minus_alpha: c_conj,
        intensities,
    })
}
