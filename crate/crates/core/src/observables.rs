//! Generators and their grouped reference bases.
//!
//! Coherence orders live on the eigenbasis of a generator whose eigenvalue
//! differences sit on an integer lattice. An [`Observable`] packages the
//! matrix, its eigensystem, the eigenvalues clustered into degenerate
//! levels, and the lattice unit those level differences are multiples of.

use num_complex::Complex64 as C64;

use crate::eigen::{eigh, EigenSystem};
use crate::error::{Error, Result};
use crate::matrix::{pauli_dot, ComplexMatrix};
use crate::states::MAX_QUBITS;

/// Eigenvalues closer than this are clustered into one degenerate level.
pub const LEVEL_GAP: f64 = 1e-9;

/// A level difference may sit off the integer lattice by at most this much,
/// measured in units of the lattice spacing.
pub const LATTICE_TOL: f64 = 1e-7;

/// One degenerate eigenlevel: the shared eigenvalue and the eigenvector
/// column indices that carry it.
#[derive(Clone, Debug)]
pub struct Level {
    pub value: f64,
    pub indices: Vec<usize>,
}

/// A Hermitian generator with its integer-spaced reference basis.
#[derive(Clone, Debug)]
pub struct Observable {
    matrix: ComplexMatrix,
    eigensystem: EigenSystem,
    levels: Vec<Level>,
    spacing_unit: f64,
    level_of: Vec<usize>,
}

impl Observable {
    fn from_eigensystem(
        matrix: ComplexMatrix,
        eigensystem: EigenSystem,
        spacing: Option<f64>,
    ) -> Result<Self> {
        let mut levels: Vec<Level> = Vec::new();
        for (idx, &v) in eigensystem.values.iter().enumerate() {
            match levels.last_mut() {
                // Anchor the cluster to its first member so the in-level
                // spread stays bounded by the gap tolerance.
                Some(level) if v - eigensystem.values[level.indices[0]] <= LEVEL_GAP => {
                    level.indices.push(idx);
                }
                _ => levels.push(Level {
                    value: v,
                    indices: vec![idx],
                }),
            }
        }
        for level in levels.iter_mut() {
            let sum: f64 = level.indices.iter().map(|&i| eigensystem.values[i]).sum();
            level.value = sum / level.indices.len() as f64;
        }

        let spacing_unit = match spacing {
            Some(unit) if levels.len() > 1 => unit,
            _ => infer_spacing(&levels),
        };
        validate_lattice(&levels, spacing_unit)?;

        let mut level_of = vec![0usize; eigensystem.dim()];
        for (k, level) in levels.iter().enumerate() {
            for &i in &level.indices {
                level_of[i] = k;
            }
        }
        Ok(Self {
            matrix,
            eigensystem,
            levels,
            spacing_unit,
            level_of,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigensystem(&self) -> &EigenSystem {
        &self.eigensystem
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn spacing_unit(&self) -> f64 {
        self.spacing_unit
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Largest reachable coherence order, (λ_max − λ_min)/unit.
    pub fn max_order(&self) -> i64 {
        let lo = self.levels.first().map(|l| l.value).unwrap_or(0.0);
        let hi = self.levels.last().map(|l| l.value).unwrap_or(0.0);
        ((hi - lo) / self.spacing_unit).round() as i64
    }

    /// Coherence order m = (λ_j − λ_ℓ)/unit for two eigenvector indices.
    pub fn order_between(&self, j: usize, l: usize) -> i64 {
        let diff = self.levels[self.level_of[j]].value - self.levels[self.level_of[l]].value;
        (diff / self.spacing_unit).round() as i64
    }

    /// e^{−iφA} assembled from the stored eigensystem.
    pub fn unitary(&self, phi: f64) -> ComplexMatrix {
        self.eigensystem
            .map_spectrum(|lam| C64::new(0.0, -phi * lam).exp())
    }
}

fn infer_spacing(levels: &[Level]) -> f64 {
    // Single level: no differences; unit 1 keeps m = 0 well defined.
    if levels.len() < 2 {
        return 1.0;
    }
    let mut smallest = f64::INFINITY;
    for i in 0..levels.len() {
        for j in (i + 1)..levels.len() {
            smallest = smallest.min(levels[j].value - levels[i].value);
        }
    }
    smallest
}

fn validate_lattice(levels: &[Level], unit: f64) -> Result<()> {
    for i in 0..levels.len() {
        for j in (i + 1)..levels.len() {
            let diff = levels[j].value - levels[i].value;
            let steps = diff / unit;
            let offset = (steps - steps.round()).abs();
            if offset > LATTICE_TOL || steps.round() < 1.0 {
                return Err(Error::NotIntegerSpaced(offset, diff));
            }
        }
    }
    Ok(())
}

/// 1^{⊗(site−1)} ⊗ op ⊗ 1^{⊗(N−site)} for a 2×2 operator, sites 1-based.
fn embed_single(op: &ComplexMatrix, site: usize, n_qubits: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(1);
    for l in 1..=n_qubits {
        if l == site {
            out = out.kron(op);
        } else {
            out = out.kron(&ComplexMatrix::identity(2));
        }
    }
    out
}

/// Eigenvectors of n̂·σ⃗: column 0 for +1, column 1 for −1.
fn bloch_rotation(n: [f64; 3]) -> ComplexMatrix {
    let theta = n[2].clamp(-1.0, 1.0).acos();
    let phi = n[1].atan2(n[0]);
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let phase = C64::new(0.0, phi).exp();
    let mut u = ComplexMatrix::zeros(2);
    u[(0, 0)] = C64::new(ct, 0.0);
    u[(1, 0)] = phase * st;
    u[(0, 1)] = -phase.conj() * st;
    u[(1, 1)] = C64::new(ct, 0.0);
    u
}

fn check_unit(n: [f64; 3]) -> Result<()> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnit(norm));
    }
    Ok(())
}

/// Collective spin Â = n̂·S⃗ on N qubits.
///
/// The eigenbasis is the product basis of single-qubit n̂ eigenstates, so
/// it is built analytically: eigenvalue (N − 2k)/2 for a bit pattern with
/// k down-spins, degeneracies binomial in k.
pub fn collective_spin(n_qubits: usize, n: [f64; 3]) -> Result<Observable> {
    check_unit(n)?;
    if !(1..=MAX_QUBITS).contains(&n_qubits) {
        return Err(Error::TooLarge(n_qubits, MAX_QUBITS));
    }
    let dim = 1usize << n_qubits;

    let half = pauli_dot(n).scale_re(0.5);
    let mut matrix = ComplexMatrix::zeros(dim);
    for site in 1..=n_qubits {
        matrix = &matrix + &embed_single(&half, site, n_qubits);
    }

    let mut vectors_product = ComplexMatrix::identity(1);
    let u = bloch_rotation(n);
    for _ in 0..n_qubits {
        vectors_product = vectors_product.kron(&u);
    }
    let raw_values: Vec<f64> = (0..dim)
        .map(|b| (n_qubits as f64 - 2.0 * (b as u32).count_ones() as f64) / 2.0)
        .collect();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| raw_values[a].total_cmp(&raw_values[b]).then(a.cmp(&b)));
    let values: Vec<f64> = order.iter().map(|&b| raw_values[b]).collect();
    let vectors = ComplexMatrix::from_fn(dim, |i, j| vectors_product[(i, order[j])]);

    Observable::from_eigensystem(matrix, EigenSystem { values, vectors }, None)
}

/// Single-qubit generator Â = (n̂·σ⃗)/2 with eigenvalues ±1/2.
pub fn qubit_generator(n: [f64; 3]) -> Result<Observable> {
    collective_spin(1, n)
}

/// Fully connected Ising Hamiltonian H = (J/N) Σ_{j<l} σ_j^z σ_l^z.
///
/// Diagonal in the computational basis; eigenvalue differences are integer
/// multiples of 2J/N, which is taken as the lattice unit.
pub fn ising_hamiltonian(n_qubits: usize, coupling: f64) -> Result<Observable> {
    if !(2..=MAX_QUBITS).contains(&n_qubits) {
        return Err(Error::TooLarge(n_qubits, MAX_QUBITS));
    }
    let dim = 1usize << n_qubits;
    let raw_values: Vec<f64> = (0..dim)
        .map(|b| {
            let magnetization = n_qubits as f64 - 2.0 * (b as u32).count_ones() as f64;
            (coupling / n_qubits as f64) * (magnetization * magnetization - n_qubits as f64) / 2.0
        })
        .collect();
    let matrix = ComplexMatrix::from_diag(&raw_values);

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| raw_values[a].total_cmp(&raw_values[b]).then(a.cmp(&b)));
    let values: Vec<f64> = order.iter().map(|&b| raw_values[b]).collect();
    let vectors = ComplexMatrix::from_fn(dim, |i, j| {
        if i == order[j] {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });

    let spacing = if coupling == 0.0 {
        None
    } else {
        Some(2.0 * coupling.abs() / n_qubits as f64)
    };
    Observable::from_eigensystem(matrix, EigenSystem { values, vectors }, spacing)
}

/// Build the grouped reference basis of an arbitrary Hermitian matrix,
/// inferring the lattice unit as the smallest positive level difference.
pub fn reference_basis(a: &ComplexMatrix) -> Result<Observable> {
    let es = eigh(a)?;
    Observable::from_eigensystem(a.clone(), es, None)
}
