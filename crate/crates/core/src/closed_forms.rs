//! Analytic closed forms for the studied state families, used to
//! cross-validate the numeric engine.
//!
//! Each builder returns a flat list of named scalars so callers (tests,
//! CLI) can diff them against the block-decomposition path one by one.
//!
//! Two conventions baked in here were pinned against direct eigenbasis
//! evaluations rather than read off naively:
//! - in the Bell-diagonal sums over axis triples (j,k,l), the Fisher
//!   information, lower-quantifier, and skew-information rows count both
//!   orderings of (k,l), while the second-moment formula counts each
//!   unordered pair once — that is the combination under which every row
//!   agrees with the spectral definitions;
//! - the GHZ-family variance is evaluated from its definition,
//!   V = (N/4)(1 − p + N p), which reduces to N²/4 only at p → 1.

use crate::error::Result;
use crate::states::{BellDiagonalParams, BlochVector, MixedFamilyParams, StateFamily};

/// One named analytic value with an echo of the inputs it came from.
#[derive(Clone, Debug)]
pub struct ClosedFormReport {
    pub quantifier: String,
    pub value: f64,
    pub inputs: String,
}

impl ClosedFormReport {
    fn new(quantifier: &str, value: f64, inputs: &str) -> Self {
        Self {
            quantifier: quantifier.to_string(),
            value,
            inputs: inputs.to_string(),
        }
    }
}

/// Find a named value in a report set.
pub fn lookup(reports: &[ClosedFormReport], quantifier: &str) -> Option<f64> {
    reports
        .iter()
        .find(|r| r.quantifier == quantifier)
        .map(|r| r.value)
}

fn check_unit(n: [f64; 3]) -> Result<()> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(crate::error::Error::NotUnit(norm));
    }
    Ok(())
}

/// Single-qubit c_α: 1/c = 2^{−α}[(1+r)^α + (1−r)^α].
pub fn qubit_c_alpha(alpha: f64, r: f64) -> f64 {
    2f64.powf(alpha) / ((1.0 + r).powf(alpha) + (1.0 - r).powf(alpha))
}

/// Family c_α for the spectrum {(1−p)/d ×(d−1), (1+(d−1)p)/d ×1}.
pub fn family_c_alpha(alpha: f64, d: f64, p: f64) -> f64 {
    1.0 / ((d - 1.0) * ((1.0 - p) / d).powf(alpha) + ((1.0 + (d - 1.0) * p) / d).powf(alpha))
}

/// Family weight ξ_α(d, p) = 1 − c_α d^{1−α}(1−p)^α.
pub fn family_xi(alpha: f64, d: f64, p: f64) -> f64 {
    1.0 - family_c_alpha(alpha, d, p) * d.powf(1.0 - alpha) * (1.0 - p).powf(alpha)
}

/// Block degeneracy g_{N,m} = (2N)!/[(N−m)!(N+m)!] = C(2N, N+m).
pub fn block_degeneracy(n_qubits: usize, m: i64) -> f64 {
    let n = n_qubits as i64;
    if m < -n || m > n {
        return 0.0;
    }
    binomial(2 * n_qubits as u64, (n + m) as u64)
}

fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}

/// All single-qubit closed forms at one (ρ(r⃗), Â = n̂·σ⃗/2, α).
pub fn single_qubit_forms(
    b: &BlochVector,
    n: [f64; 3],
    alpha: f64,
) -> Result<Vec<ClosedFormReport>> {
    crate::coherence::check_alpha(alpha)?;
    check_unit(n)?;
    let r = b.radius();
    let rhat = b.direction();
    let kappa = n[0] * rhat[0] + n[1] * rhat[1] + n[2] * rhat[2];
    let kappa2 = kappa * kappa;
    let perp = 1.0 - kappa2;

    let c_alpha = qubit_c_alpha(alpha, r);
    let cc = c_alpha * qubit_c_alpha(1.0 - alpha, r);
    let inputs = format!(
        "qubit r={r} theta={} phi={} n=({},{},{}) alpha={alpha}",
        b.theta(),
        b.phi(),
        n[0],
        n[1],
        n[2],
    );

    Ok(vec![
        ClosedFormReport::new("c_alpha", c_alpha, &inputs),
        ClosedFormReport::new("I_pm1", 0.25 * (2.0 * cc - 1.0) * perp, &inputs),
        ClosedFormReport::new("I_0", 0.5 * (1.0 + (2.0 * cc - 1.0) * kappa2), &inputs),
        ClosedFormReport::new("F", (2.0 * cc - 1.0) * perp, &inputs),
        ClosedFormReport::new("I_L", r * r / 8.0 * perp, &inputs),
        ClosedFormReport::new("F_Q", r * r / 4.0 * perp, &inputs),
        ClosedFormReport::new("V", 0.25 * (1.0 - r * r * kappa2), &inputs),
        ClosedFormReport::new(
            "I_half",
            0.25 * (1.0 - (1.0 - r * r).sqrt()) * perp,
            &inputs,
        ),
    ])
}

/// Bell-diagonal η_{α,j} = c_α[−υ₁^α + (1−2δ_{j,z})υ₂^α + (1−2δ_{j,y})υ₃^α
/// + (1−2δ_{j,x})υ₄^α] for j = x, y, z.
pub fn bell_eta(params: &BellDiagonalParams, alpha: f64) -> [f64; 3] {
    let bare = bell_eta_bare(params, alpha);
    let c = bell_c_alpha(params, alpha);
    [c * bare[0], c * bare[1], c * bare[2]]
}

fn bell_eta_bare(params: &BellDiagonalParams, alpha: f64) -> [f64; 3] {
    let [v1, v2, v3, v4] = params.eigenvalues();
    let pow = |v: f64| v.max(0.0).powf(alpha);
    let (p1, p2, p3, p4) = (pow(v1), pow(v2), pow(v3), pow(v4));
    [
        -p1 + p2 + p3 - p4, // j = x
        -p1 + p2 - p3 + p4, // j = y
        -p1 - p2 + p3 + p4, // j = z
    ]
}

pub fn bell_c_alpha(params: &BellDiagonalParams, alpha: f64) -> f64 {
    let pow_sum: f64 = params
        .eigenvalues()
        .iter()
        .map(|v| v.max(0.0).powf(alpha))
        .sum();
    1.0 / pow_sum
}

/// All Bell-diagonal closed forms at one (ρ_BD(a⃗), Â = n̂·S⃗, α).
pub fn bell_diagonal_forms(
    params: &BellDiagonalParams,
    n: [f64; 3],
    alpha: f64,
) -> Result<Vec<ClosedFormReport>> {
    crate::coherence::check_alpha(alpha)?;
    check_unit(n)?;
    let a = params.correlations();
    let inputs = format!(
        "bell a=({},{},{}) n=({},{},{}) alpha={alpha}",
        a[0], a[1], a[2], n[0], n[1], n[2]
    );

    let c_alpha = bell_c_alpha(params, alpha);
    let eta_a = bell_eta(params, alpha);
    let eta_b = bell_eta(params, 1.0 - alpha);
    let theta_half = bell_eta_bare(params, 0.5);

    // Per axis j, the complementary pair (k, l); the difference products
    // are symmetric under k ↔ l.
    let pairs = [(1usize, 2usize), (2, 0), (0, 1)];

    let mut second_moment = 0.0;
    let mut i_half = 0.0;
    let mut i_lower = 0.0;
    let mut fisher = 0.0;
    let a_sq = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
    for j in 0..3 {
        let (k, l) = pairs[j];
        let nj2 = n[j] * n[j];
        second_moment += nj2 * (eta_a[k] - eta_a[l]) * (eta_b[k] - eta_b[l]);
        i_half += 0.25 * nj2 * (theta_half[k] - theta_half[l]).powi(2);
        i_lower += nj2 * (a[j] * a[j] + 2.0 * a[k] * a[l]);
        fisher += 0.5 * nj2 * (a[k] - a[l]).powi(2) / (1.0 + a[j]);
    }
    let i_lower = (a_sq - i_lower) / 8.0;
    let v = 0.5 * (1.0 + a[0] * n[0] * n[0] + a[1] * n[1] * n[1] + a[2] * n[2] * n[2]);

    Ok(vec![
        ClosedFormReport::new("c_alpha", c_alpha, &inputs),
        ClosedFormReport::new("eta_alpha_x", eta_a[0], &inputs),
        ClosedFormReport::new("eta_alpha_y", eta_a[1], &inputs),
        ClosedFormReport::new("eta_alpha_z", eta_a[2], &inputs),
        ClosedFormReport::new("F", second_moment, &inputs),
        ClosedFormReport::new("I_L", i_lower, &inputs),
        ClosedFormReport::new("F_Q", fisher, &inputs),
        ClosedFormReport::new("V", v, &inputs),
        ClosedFormReport::new("I_half", i_half, &inputs),
    ])
}

/// All mixed-family closed forms at one (family(N, p), α) with the
/// family's canonical generator (Ŝ_z for the uniform-superposition and
/// GHZ families, Ŝ_x for W).
pub fn family_forms(params: &MixedFamilyParams, alpha: f64) -> Result<Vec<ClosedFormReport>> {
    crate::coherence::check_alpha(alpha)?;
    let n_qubits = params.n_qubits();
    let nf = n_qubits as f64;
    let d = params.dim() as f64;
    let p = params.mixing();
    let family = params.family();
    let inputs = format!("family={family:?} n={n_qubits} p={p} alpha={alpha}");

    let c_alpha = family_c_alpha(alpha, d, p);
    let xi = family_xi(alpha, d, p);
    let xi_conj = family_xi(1.0 - alpha, d, p);
    let xi_prod = xi * xi_conj;
    let cc = c_alpha * family_c_alpha(1.0 - alpha, d, p);
    let sqrt_gap = ((1.0 + (d - 1.0) * p).sqrt() - (1.0 - p).sqrt()).powi(2);
    let fisher_denominator = 4.0 * (2.0 + (d - 2.0) * p);

    let mut reports = vec![
        ClosedFormReport::new("c_alpha", c_alpha, &inputs),
        ClosedFormReport::new("xi_alpha", xi, &inputs),
    ];
    match family {
        StateFamily::Eqn => {
            let g0 = block_degeneracy(n_qubits, 0);
            reports.push(ClosedFormReport::new(
                "I_0",
                (1.0 + (g0 / d - 1.0) * xi_prod) / d,
                &inputs,
            ));
            for m in 1..=n_qubits as i64 {
                reports.push(ClosedFormReport::new(
                    &format!("I_pm{m}"),
                    block_degeneracy(n_qubits, m) / (d * d) * xi_prod,
                    &inputs,
                ));
            }
            reports.push(ClosedFormReport::new("F", nf * xi_prod, &inputs));
            reports.push(ClosedFormReport::new("I_L", nf * p * p / 8.0, &inputs));
            reports.push(ClosedFormReport::new(
                "F_Q",
                nf * d * p * p / fisher_denominator,
                &inputs,
            ));
            reports.push(ClosedFormReport::new("V", nf / 4.0, &inputs));
            reports.push(ClosedFormReport::new(
                "I_half",
                nf / (4.0 * d) * sqrt_gap,
                &inputs,
            ));
        }
        StateFamily::Ghz => {
            reports.push(ClosedFormReport::new("I_0", cc - 0.5 * xi_prod, &inputs));
            reports.push(ClosedFormReport::new(
                &format!("I_pm{n_qubits}"),
                0.25 * xi_prod,
                &inputs,
            ));
            reports.push(ClosedFormReport::new("F", nf * nf * xi_prod, &inputs));
            reports.push(ClosedFormReport::new("I_L", nf * nf * p * p / 8.0, &inputs));
            reports.push(ClosedFormReport::new(
                "F_Q",
                nf * nf * d * p * p / fisher_denominator,
                &inputs,
            ));
            // Variance from the definition; the pure-state value N²/4 is
            // recovered only at p → 1.
            reports.push(ClosedFormReport::new(
                "V",
                nf / 4.0 * (1.0 - p + nf * p),
                &inputs,
            ));
            reports.push(ClosedFormReport::new(
                "I_half",
                nf * nf / (4.0 * d) * sqrt_gap,
                &inputs,
            ));
        }
        StateFamily::W => {
            let prefactor = 3.0 * nf - 2.0;
            reports.push(ClosedFormReport::new(
                "F",
                prefactor / (d - 1.0) * (d * cc - 1.0),
                &inputs,
            ));
            reports.push(ClosedFormReport::new(
                "I_L",
                (4.0 + 3.0 * (nf - 2.0)) * p * p / 8.0,
                &inputs,
            ));
            reports.push(ClosedFormReport::new(
                "F_Q",
                prefactor * d * p * p / fisher_denominator,
                &inputs,
            ));
            reports.push(ClosedFormReport::new(
                "V",
                0.25 * (nf + 2.0 * (nf - 1.0) * p),
                &inputs,
            ));
            reports.push(ClosedFormReport::new(
                "I_half",
                prefactor / (4.0 * d) * sqrt_gap,
                &inputs,
            ));
        }
    }
    Ok(reports)
}
