//! Command implementations: resolved inputs in, tables out.
//!
//! Rows are emitted in a fixed sort order (α, then t, then m) so identical
//! configurations always serialize to identical bytes.

use thiserror::Error;

use mqc_core::closed_forms::{bell_diagonal_forms, family_forms, single_qubit_forms};
use mqc_core::coherence::{mqi_spectrum, second_moment};
use mqc_core::echo::{EchoProtocol, EchoProtocolConfig};
use mqc_core::observables::Observable;
use mqc_core::quantifiers::{bound_report, kl_limit_coefficient, wydsi};
use mqc_core::states::StateFamily;

use crate::config::{ConfigError, ResolvedGenerator, ResolvedState};
use crate::output::{Cell, Table};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Config(#[from] ConfigError),

    #[error("numerical failure: {0}")]
    Core(#[from] mqc_core::Error),

    #[error("numerical failure: {0}")]
    Invariant(String),
}

/// Exit code the error maps to: 2 for configuration, 3 for numerics.
impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Core(_) | RunError::Invariant(_) => 3,
        }
    }
}

/// Rows are gated on their module invariants before anything is written.
fn gate(ok: bool, what: &str) -> Result<(), RunError> {
    if ok {
        Ok(())
    } else {
        Err(RunError::Invariant(what.to_string()))
    }
}

fn qubit_count(state: &ResolvedState) -> Result<usize, ConfigError> {
    state.n_qubits().ok_or_else(|| {
        ConfigError::invalid(format!(
            "state dimension {} is not a power of two; spin generators need qubits",
            state.dim()
        ))
    })
}

fn build_generator(
    state: &ResolvedState,
    generator: &ResolvedGenerator,
) -> Result<Observable, RunError> {
    let n = qubit_count(state)?;
    Ok(generator.build(n)?)
}

/// One row per (α, m): the intensity spectrum with its normalizers and
/// second moment.
pub fn cmd_mqi(
    state: &ResolvedState,
    generator: &ResolvedGenerator,
    alphas: &[f64],
) -> Result<Table, RunError> {
    let rho = state.density();
    let gen = build_generator(state, generator)?;
    let mut table = Table::new(
        [
            "alpha",
            "m",
            "i_re",
            "i_im",
            "c_alpha",
            "c_one_minus_alpha",
            "second_moment",
        ]
        .map(String::from)
        .to_vec(),
    );
    let mut alphas = alphas.to_vec();
    alphas.sort_by(f64::total_cmp);
    for &alpha in &alphas {
        let spec = mqi_spectrum(&rho, &gen, alpha)?;
        let f = second_moment(&spec)?;
        let total = spec.total();
        gate(
            (total.re - spec.normalizer()).abs() <= 1e-9 && total.im.abs() <= 1e-9,
            "MQI sum rule violated before serialization",
        )?;
        for m in -gen.max_order()..=gen.max_order() {
            let i = spec.intensity(m);
            table.push(vec![
                Cell::Float(alpha),
                Cell::Int(m),
                Cell::Float(i.re),
                Cell::Float(i.im),
                Cell::Float(spec.c_alpha()),
                Cell::Float(spec.c_one_minus_alpha()),
                Cell::Float(f),
            ]);
        }
    }
    Ok(table)
}

/// One row per α with every bound-chain quantifier and the chain flags.
pub fn cmd_bounds(
    state: &ResolvedState,
    generator: &ResolvedGenerator,
    alphas: &[f64],
) -> Result<Table, RunError> {
    let rho = state.density();
    let gen = build_generator(state, generator)?;
    let mut table = Table::new(
        [
            "alpha",
            "lower_il_term",
            "f_over_4cc",
            "wysi",
            "v_alpha",
            "v_half",
            "variance",
            "qfi",
            "chain_40",
            "chain_41",
            "chain_43",
        ]
        .map(String::from)
        .to_vec(),
    );
    let mut alphas = alphas.to_vec();
    alphas.sort_by(f64::total_cmp);
    for &alpha in &alphas {
        let rep = bound_report(&rho, &gen, alpha)?;
        // The chains are theorems; a false flag means the engine lost
        // precision, which is a numerical failure, not data.
        gate(
            rep.chain_ok == [true, true, true],
            "bound chain violated before serialization",
        )?;
        table.push(vec![
            Cell::Float(rep.alpha),
            Cell::Float(rep.lower_il_term),
            Cell::Float(rep.f_over_4cc),
            Cell::Float(rep.wysi),
            Cell::Float(rep.v_alpha),
            Cell::Float(rep.v_half),
            Cell::Float(rep.variance),
            Cell::Float(rep.qfi),
            Cell::Bool(rep.chain_ok[0]),
            Cell::Bool(rep.chain_ok[1]),
            Cell::Bool(rep.chain_ok[2]),
        ]);
    }
    Ok(table)
}

/// One row per (α, quantifier): the analytic values for the state family.
pub fn cmd_closed_forms(
    state: &ResolvedState,
    generator: Option<&ResolvedGenerator>,
    alphas: &[f64],
) -> Result<Table, RunError> {
    let mut table = Table::new(
        ["alpha", "quantifier", "value", "inputs"]
            .map(String::from)
            .to_vec(),
    );
    let mut alphas = alphas.to_vec();
    alphas.sort_by(f64::total_cmp);

    // The closed forms are family-specific; a state file has none.
    for &alpha in &alphas {
        let reports = match state {
            ResolvedState::Qubit(b) => {
                let axis = spin_axis_required(generator)?;
                single_qubit_forms(b, axis, alpha)?
            }
            ResolvedState::Bell(params) => {
                let axis = spin_axis_required(generator)?;
                bell_diagonal_forms(params, axis, alpha)?
            }
            ResolvedState::Family(params) => {
                check_canonical_generator(params.family(), generator)?;
                family_forms(params, alpha)?
            }
            ResolvedState::Matrix(_) => {
                return Err(ConfigError::invalid(
                    "closed forms exist for --family, --bloch, and --bell states only",
                )
                .into())
            }
        };
        for report in reports {
            table.push(vec![
                Cell::Float(alpha),
                Cell::Text(report.quantifier),
                Cell::Float(report.value),
                Cell::Text(report.inputs),
            ]);
        }
    }
    Ok(table)
}

fn spin_axis_required(generator: Option<&ResolvedGenerator>) -> Result<[f64; 3], ConfigError> {
    match generator {
        Some(g) => g.axis().ok_or_else(|| {
            ConfigError::invalid("closed forms are defined for spin generators, not ising")
        }),
        None => Err(ConfigError::invalid(
            "closed forms for qubit and Bell states need --generator",
        )),
    }
}

/// The multiparticle closed forms are stated for one canonical generator
/// per family; a different explicit choice is a configuration error.
fn check_canonical_generator(
    family: StateFamily,
    generator: Option<&ResolvedGenerator>,
) -> Result<(), ConfigError> {
    let canonical = match family {
        StateFamily::W => [1.0, 0.0, 0.0],
        _ => [0.0, 0.0, 1.0],
    };
    if let Some(g) = generator {
        let axis = g.axis().ok_or_else(|| {
            ConfigError::invalid("closed forms are defined for spin generators, not ising")
        })?;
        let matches = axis
            .iter()
            .zip(canonical)
            .all(|(a, c)| (a - c).abs() < 1e-12);
        if !matches {
            return Err(ConfigError::invalid(format!(
                "family {family:?} closed forms use the canonical generator {}; \
                 omit --generator or pass that axis",
                if canonical[0] == 1.0 { "sx" } else { "sz" }
            )));
        }
    }
    Ok(())
}

/// Full echo sweep: raw and normalized columns, one row per (α, t).
pub fn cmd_echo(config: EchoProtocolConfig) -> Result<Table, RunError> {
    let n = config.n_qubits as i64;
    let mut columns: Vec<String> = vec![
        "t".into(),
        "alpha".into(),
        "f".into(),
        "second_moment".into(),
    ];
    for m in -n..=n {
        columns.push(format!("i_{m}"));
    }
    columns.push("f_norm".into());
    columns.push("second_moment_norm".into());
    for m in -n..=n {
        columns.push(format!("i_{m}_norm"));
    }

    let protocol = EchoProtocol::new(config)?;
    let trace = protocol.run_sweep()?;
    let mut table = Table::new(columns);
    for point in &trace.points {
        gate(
            point.purity >= -1e-10 && point.purity <= 1.0 + 1e-10,
            "echo purity left the unit interval",
        )?;
        let mut row = vec![
            Cell::Float(point.t),
            Cell::Float(point.alpha),
            Cell::Float(point.purity),
            Cell::Float(point.second_moment),
        ];
        row.extend(point.intensities.iter().map(|i| Cell::Float(i.re)));
        row.push(Cell::Float(point.purity_norm));
        row.push(Cell::Float(point.second_moment_norm));
        row.extend(point.intensity_norms.iter().map(|&v| Cell::Float(v)));
        table.push(row);
    }
    Ok(table)
}

/// One row per α: the finite-α curvature coefficient of D_α(ρ‖ρ_φ) next to
/// its α → 1 limit.
pub fn cmd_limits(
    state: &ResolvedState,
    generator: &ResolvedGenerator,
    alphas: &[f64],
) -> Result<Table, RunError> {
    let rho = state.density();
    let gen = build_generator(state, generator)?;
    let limit = kl_limit_coefficient(&rho, gen.matrix())?;
    let mut table = Table::new(
        [
            "alpha",
            "finite_coefficient",
            "limit_coefficient",
            "rel_gap",
        ]
        .map(String::from)
        .to_vec(),
    );
    let mut alphas = alphas.to_vec();
    alphas.sort_by(f64::total_cmp);
    for &alpha in &alphas {
        let finite = wydsi(&rho, gen.matrix(), alpha)? / (1.0 - alpha);
        let rel_gap = (finite - limit).abs() / limit.abs().max(1e-300);
        table.push(vec![
            Cell::Float(alpha),
            Cell::Float(finite),
            Cell::Float(limit),
            Cell::Float(rel_gap),
        ]);
    }
    Ok(table)
}
