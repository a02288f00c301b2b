//! Flag-value parsers and the resolution step from raw strings to core
//! objects. Everything here is a configuration error (exit code 2);
//! numerical failures only happen later, at run time.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use mqc_core::matrix::ComplexMatrix;
use mqc_core::observables::{collective_spin, ising_hamiltonian, Observable};
use mqc_core::states::{
    bell_diagonal, family_state, qubit_state, BellDiagonalParams, BlochVector, MixedFamilyParams,
    StateFamily,
};
use mqc_core::Complex64;

/// Hard cap on grid sizes so a typo cannot allocate the world.
pub const MAX_GRID_POINTS: usize = 100_000;

/// Largest density-matrix dimension accepted from a state file.
pub const MAX_STATE_DIM: usize = 256;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("{0}")]
    Invalid(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl ConfigError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        ConfigError::Invalid(msg.into())
    }
}

fn parse_f64(what: &'static str, s: &str) -> Result<f64, ConfigError> {
    let value: f64 = s.trim().parse().map_err(|_| ConfigError::Parse {
        what,
        detail: format!("`{s}` is not a number"),
    })?;
    if !value.is_finite() {
        return Err(ConfigError::Parse {
            what,
            detail: format!("`{s}` is not finite"),
        });
    }
    Ok(value)
}

fn parse_fixed<const K: usize>(what: &'static str, s: &str) -> Result<[f64; K], ConfigError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != K {
        return Err(ConfigError::Parse {
            what,
            detail: format!("expected {K} comma-separated numbers, got {}", parts.len()),
        });
    }
    let mut out = [0.0; K];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = parse_f64(what, part)?;
    }
    Ok(out)
}

/// An inclusive arithmetic grid "START:STOP:STEP".
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| self.start + k as f64 * self.step)
            .collect()
    }
}

/// Parse "START:STOP:STEP" with a positive step and a bounded point count.
pub fn parse_grid(s: &str) -> Result<GridSpec, ConfigError> {
    let what = "grid";
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(ConfigError::Parse {
            what,
            detail: format!("expected START:STOP:STEP, got `{s}`"),
        });
    }
    let start = parse_f64(what, parts[0])?;
    let stop = parse_f64(what, parts[1])?;
    let step = parse_f64(what, parts[2])?;
    if step <= 0.0 {
        return Err(ConfigError::invalid(format!(
            "grid step must be positive, got {step}"
        )));
    }
    if stop < start {
        return Err(ConfigError::invalid(format!(
            "grid stop {stop} is below start {start}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor();
    if !count.is_finite() || count as usize + 1 > MAX_GRID_POINTS {
        return Err(ConfigError::invalid(format!(
            "grid would hold more than {MAX_GRID_POINTS} points"
        )));
    }
    Ok(GridSpec { start, stop, step })
}

/// Parse a unit 3-vector "nx,ny,nz"; small normalization slack is absorbed
/// by renormalizing, anything worse is rejected.
pub fn parse_unit_vector(s: &str) -> Result<[f64; 3], ConfigError> {
    let v = parse_fixed::<3>("direction", s)?;
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(ConfigError::invalid(format!(
            "direction ({},{},{}) has norm {norm}, expected a unit vector",
            v[0], v[1], v[2]
        )));
    }
    Ok([v[0] / norm, v[1] / norm, v[2] / norm])
}

/// Parse Bloch coordinates "r,theta,phi" (angles in radians).
pub fn parse_bloch(s: &str) -> Result<BlochVector, ConfigError> {
    let [r, theta, phi] = parse_fixed::<3>("bloch state", s)?;
    BlochVector::new(r, theta, phi).map_err(|e| ConfigError::invalid(e.to_string()))
}

/// Parse Bell-diagonal correlations "ax,ay,az".
pub fn parse_bell(s: &str) -> Result<BellDiagonalParams, ConfigError> {
    let a = parse_fixed::<3>("bell parameters", s)?;
    BellDiagonalParams::new(a).map_err(|e| ConfigError::invalid(e.to_string()))
}

#[derive(Deserialize)]
struct StateFile {
    dim: usize,
    /// Row-major [re, im] pairs, dim² of them.
    entries: Vec<[f64; 2]>,
}

/// Parse a JSON density matrix
/// `{"dim": d, "entries": [[re, im], ...]}` (row-major, dim² entries).
pub fn parse_state_json(bytes: &[u8]) -> Result<ComplexMatrix, ConfigError> {
    let file: StateFile = serde_json::from_slice(bytes).map_err(|e| ConfigError::Parse {
        what: "state file",
        detail: e.to_string(),
    })?;
    if file.dim < 1 || file.dim > MAX_STATE_DIM {
        return Err(ConfigError::invalid(format!(
            "state dimension {} outside 1..={MAX_STATE_DIM}",
            file.dim
        )));
    }
    if file.entries.len() != file.dim * file.dim {
        return Err(ConfigError::invalid(format!(
            "expected {} entries for dim {}, got {}",
            file.dim * file.dim,
            file.dim,
            file.entries.len()
        )));
    }
    if file
        .entries
        .iter()
        .any(|e| !e[0].is_finite() || !e[1].is_finite())
    {
        return Err(ConfigError::invalid("state file holds non-finite entries"));
    }
    let dim = file.dim;
    let rho = ComplexMatrix::from_fn(dim, |i, j| {
        let e = file.entries[i * dim + j];
        Complex64::new(e[0], e[1])
    });
    if rho.hermitian_residual() > 1e-8 {
        return Err(ConfigError::invalid(format!(
            "state file is not Hermitian (residual {:.3e})",
            rho.hermitian_residual()
        )));
    }
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > 1e-6 || trace.im.abs() > 1e-8 {
        return Err(ConfigError::invalid(format!(
            "state file trace is {trace}, expected 1"
        )));
    }
    Ok(rho)
}

pub fn load_state_file(path: &Path) -> Result<ComplexMatrix, ConfigError> {
    let bytes = std::fs::read(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_state_json(&bytes)
}

/// A fully validated state specification.
#[derive(Clone, Debug)]
pub enum ResolvedState {
    Qubit(BlochVector),
    Bell(BellDiagonalParams),
    Family(MixedFamilyParams),
    Matrix(ComplexMatrix),
}

impl ResolvedState {
    pub fn density(&self) -> ComplexMatrix {
        match self {
            ResolvedState::Qubit(b) => qubit_state(b),
            ResolvedState::Bell(params) => bell_diagonal(params),
            ResolvedState::Family(params) => family_state(params),
            ResolvedState::Matrix(m) => m.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ResolvedState::Qubit(_) => 2,
            ResolvedState::Bell(_) => 4,
            ResolvedState::Family(params) => params.dim(),
            ResolvedState::Matrix(m) => m.dim(),
        }
    }

    /// Qubit count, when the dimension is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        let d = self.dim();
        if d.is_power_of_two() {
            Some(d.trailing_zeros() as usize)
        } else {
            None
        }
    }
}

pub fn parse_family(family: &str, n: usize, p: f64) -> Result<MixedFamilyParams, ConfigError> {
    let family = match family.to_ascii_lowercase().as_str() {
        "eqn" => StateFamily::Eqn,
        "ghz" => StateFamily::Ghz,
        "w" => StateFamily::W,
        other => {
            return Err(ConfigError::invalid(format!(
                "unknown family `{other}`, expected eqn | ghz | w"
            )))
        }
    };
    MixedFamilyParams::new(family, n, p).map_err(|e| ConfigError::invalid(e.to_string()))
}

/// A validated generator specification; the observable itself is built
/// once the qubit count is known.
#[derive(Clone, Debug)]
pub enum ResolvedGenerator {
    Spin([f64; 3]),
    Ising(f64),
}

impl ResolvedGenerator {
    pub fn parse(s: &str, coupling: f64) -> Result<Self, ConfigError> {
        match s.to_ascii_lowercase().as_str() {
            "sx" => Ok(ResolvedGenerator::Spin([1.0, 0.0, 0.0])),
            "sy" => Ok(ResolvedGenerator::Spin([0.0, 1.0, 0.0])),
            "sz" => Ok(ResolvedGenerator::Spin([0.0, 0.0, 1.0])),
            "ising" => {
                if !coupling.is_finite() || coupling == 0.0 {
                    return Err(ConfigError::invalid(
                        "ising generator needs a finite nonzero --coupling",
                    ));
                }
                Ok(ResolvedGenerator::Ising(coupling))
            }
            _ => Ok(ResolvedGenerator::Spin(parse_unit_vector(s)?)),
        }
    }

    pub fn build(&self, n_qubits: usize) -> Result<Observable, mqc_core::Error> {
        match self {
            ResolvedGenerator::Spin(axis) => collective_spin(n_qubits, *axis),
            ResolvedGenerator::Ising(j) => ising_hamiltonian(n_qubits, *j),
        }
    }

    /// The spin axis, when this is a collective-spin generator.
    pub fn axis(&self) -> Option<[f64; 3]> {
        match self {
            ResolvedGenerator::Spin(axis) => Some(*axis),
            ResolvedGenerator::Ising(_) => None,
        }
    }
}

/// Resolve the α specification: a single value or an inclusive grid, every
/// value strictly inside (0, 1), ascending.
pub fn resolve_alphas(
    alpha: Option<f64>,
    alpha_grid: Option<&str>,
) -> Result<Vec<f64>, ConfigError> {
    let values = match (alpha, alpha_grid) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::invalid(
                "--alpha and --alpha-grid are mutually exclusive",
            ))
        }
        (Some(a), None) => vec![a],
        (None, Some(spec)) => parse_grid(spec)?.values(),
        (None, None) => {
            return Err(ConfigError::invalid(
                "one of --alpha or --alpha-grid is required",
            ))
        }
    };
    for &a in &values {
        if !(a > 0.0 && a < 1.0) {
            return Err(ConfigError::invalid(format!(
                "alpha must lie strictly inside (0, 1), got {a}"
            )));
        }
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing_and_values() {
        let grid = parse_grid("0.1:0.9:0.2").unwrap();
        let values = grid.values();
        assert_eq!(values.len(), 5);
        assert!((values[0] - 0.1).abs() < 1e-15);
        assert!((values[4] - 0.9).abs() < 1e-12);

        assert!(parse_grid("0.1:0.9").is_err());
        assert!(parse_grid("0.9:0.1:0.1").is_err());
        assert!(parse_grid("0:1:-0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a:b:c").is_err());
        assert!(parse_grid("0:1:1e-9").is_err(), "point-count guard");
        assert!(parse_grid("0:inf:1").is_err());
    }

    #[test]
    fn unit_vector_parsing() {
        assert_eq!(parse_unit_vector("0,0,1").unwrap(), [0.0, 0.0, 1.0]);
        // Truncated decimals renormalize.
        let v = parse_unit_vector("0.5773502,0.5773502,0.5773502").unwrap();
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        assert!((norm - 1.0).abs() < 1e-14);
        assert!(parse_unit_vector("0,0,2").is_err());
        assert!(parse_unit_vector("0,0").is_err());
        assert!(parse_unit_vector("x,y,z").is_err());
    }

    #[test]
    fn bloch_and_bell_parsing() {
        assert!(parse_bloch("0.5,1.5708,0").is_ok());
        assert!(parse_bloch("1.5,0,0").is_err());
        assert!(parse_bloch("0.5,nan,0").is_err());
        assert!(parse_bell("0.2,0.1,-0.3").is_ok());
        assert!(parse_bell("1,1,1").is_err(), "unphysical triple");
    }

    #[test]
    fn state_json_parsing() {
        let good = br#"{"dim": 2, "entries": [[0.8,0.0],[0.0,0.0],[0.0,0.0],[0.2,0.0]]}"#;
        let rho = parse_state_json(good).unwrap();
        assert_eq!(rho.dim(), 2);

        let wrong_len = br#"{"dim": 2, "entries": [[1.0,0.0]]}"#;
        assert!(parse_state_json(wrong_len).is_err());

        let not_hermitian = br#"{"dim": 2, "entries": [[0.8,0.0],[0.3,0.0],[0.0,0.0],[0.2,0.0]]}"#;
        assert!(parse_state_json(not_hermitian).is_err());

        let bad_trace = br#"{"dim": 2, "entries": [[0.8,0.0],[0.0,0.0],[0.0,0.0],[0.8,0.0]]}"#;
        assert!(parse_state_json(bad_trace).is_err());

        assert!(parse_state_json(b"not json").is_err());
        assert!(parse_state_json(br#"{"dim": 0, "entries": []}"#).is_err());
    }

    #[test]
    fn generator_parsing() {
        assert!(matches!(
            ResolvedGenerator::parse("sz", 1.0),
            Ok(ResolvedGenerator::Spin([0.0, 0.0, 1.0]))
        ));
        assert!(matches!(
            ResolvedGenerator::parse("ising", 0.7),
            Ok(ResolvedGenerator::Ising(_))
        ));
        assert!(ResolvedGenerator::parse("ising", 0.0).is_err());
        assert!(matches!(
            ResolvedGenerator::parse("1,0,0", 1.0),
            Ok(ResolvedGenerator::Spin(_))
        ));
        assert!(ResolvedGenerator::parse("nonsense", 1.0).is_err());
    }

    #[test]
    fn alpha_resolution() {
        assert_eq!(resolve_alphas(Some(0.5), None).unwrap(), vec![0.5]);
        assert_eq!(resolve_alphas(None, Some("0.2:0.8:0.3")).unwrap().len(), 3);
        assert!(resolve_alphas(Some(1.2), None).is_err());
        assert!(
            resolve_alphas(None, Some("0:0.9:0.1")).is_err(),
            "alpha = 0"
        );
        assert!(resolve_alphas(Some(0.5), Some("0.1:0.9:0.1")).is_err());
        assert!(resolve_alphas(None, None).is_err());
    }
}
