//! End-to-end tests of the `mqc` binary: flag handling, exit codes, file
//! formats, and output determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn mqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mqc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = mqc(args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn parse_csv(body: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = body.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| {
        panic!("missing column {name} in {header:?}");
    })
}

#[test]
fn mqi_qubit_emits_three_orders() {
    let body = stdout_of(&[
        "mqi",
        "--bloch",
        "0.5,1.5708,0",
        "--generator",
        "0,0,1",
        "--alpha",
        "0.3",
    ]);
    let (header, rows) = parse_csv(&body);
    assert_eq!(rows.len(), 3, "orders m = -1, 0, 1");
    let m_col = column(&header, "m");
    let ms: Vec<&str> = rows.iter().map(|r| r[m_col].as_str()).collect();
    assert_eq!(ms, ["-1", "0", "1"]);
}

#[test]
fn mqi_ghz_only_outer_orders_are_nonzero() {
    let body = stdout_of(&[
        "mqi",
        "--family",
        "ghz",
        "--n",
        "3",
        "--p",
        "0.5",
        "--generator",
        "sz",
        "--alpha",
        "0.5",
    ]);
    let (header, rows) = parse_csv(&body);
    assert_eq!(rows.len(), 7);
    let m_col = column(&header, "m");
    let re_col = column(&header, "i_re");
    for row in &rows {
        let m: i64 = row[m_col].parse().unwrap();
        let re: f64 = row[re_col].parse().unwrap();
        if m == 0 || m.abs() == 3 {
            assert!(re.abs() > 1e-3, "order {m} should be visible");
        } else {
            assert!(re.abs() < 1e-12, "order {m} should vanish, got {re}");
        }
    }
}

#[test]
fn malformed_alpha_exits_two() {
    let out = mqc(&[
        "mqi",
        "--family",
        "ghz",
        "--n",
        "3",
        "--p",
        "0.5",
        "--generator",
        "sz",
        "--alpha",
        "1.2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn missing_state_exits_two() {
    let out = mqc(&["mqi", "--generator", "sz", "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unreadable_state_file_exits_two() {
    let out = mqc(&[
        "mqi",
        "--state-file",
        "/nonexistent/state.json",
        "--generator",
        "sz",
        "--alpha",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn singular_state_in_limits_exits_three() {
    // A pure state is singular, so the alpha -> 1 limit formula rejects it
    // at run time (numerical failure class).
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("pure_state.json");
    std::fs::write(
        &path,
        r#"{"dim": 2, "entries": [[1.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]]}"#,
    )
    .unwrap();
    let out = mqc(&[
        "limits",
        "--state-file",
        path.to_str().unwrap(),
        "--generator",
        "sx",
        "--alpha",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bounds_ghz_chains_hold_and_round_trip() {
    let body = stdout_of(&[
        "bounds",
        "--family",
        "ghz",
        "--n",
        "3",
        "--p",
        "0.25",
        "--generator",
        "sz",
        "--alpha-grid",
        "0.05:0.95:0.05",
    ]);
    let (header, rows) = parse_csv(&body);
    assert_eq!(rows.len(), 19);
    for flag in ["chain_40", "chain_41", "chain_43"] {
        let col = column(&header, flag);
        assert!(rows.iter().all(|r| r[col] == "true"), "{flag} not all true");
    }
    // Full-precision floats reformat to the identical string.
    let wysi_col = column(&header, "wysi");
    for row in &rows {
        let value: f64 = row[wysi_col].parse().unwrap();
        assert_eq!(format!("{value:.16e}"), row[wysi_col]);
    }
}

#[test]
fn state_file_matches_equivalent_bloch_state() {
    // diag(0.8, 0.2) is the r = 0.6 Bloch state along ẑ.
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("diag_state.json");
    std::fs::write(
        &path,
        r#"{"dim": 2, "entries": [[0.8,0.0],[0.0,0.0],[0.0,0.0],[0.2,0.0]]}"#,
    )
    .unwrap();
    let via_file = stdout_of(&[
        "mqi",
        "--state-file",
        path.to_str().unwrap(),
        "--generator",
        "sx",
        "--alpha",
        "0.4",
    ]);
    let via_bloch = stdout_of(&[
        "mqi",
        "--bloch",
        "0.6,0,0",
        "--generator",
        "sx",
        "--alpha",
        "0.4",
    ]);
    assert_eq!(via_file, via_bloch);
}

#[test]
fn echo_has_expected_column_block() {
    let body = stdout_of(&[
        "echo",
        "--n",
        "4",
        "--t-grid",
        "0:1.0:0.5",
        "--alpha",
        "0.5",
    ]);
    let (header, rows) = parse_csv(&body);
    // t, alpha, f, F, then 9 raw orders, 2 normalized signals, 9
    // normalized orders.
    let raw_orders: Vec<&String> = header
        .iter()
        .filter(|h| h.starts_with("i_") && !h.ends_with("_norm"))
        .collect();
    assert_eq!(raw_orders.len(), 9, "orders m = -4..4: {header:?}");
    assert_eq!(header.len(), 4 + 9 + 2 + 9);
    assert_eq!(rows.len(), 3);
    let f_col = column(&header, "f");
    let t0: f64 = rows[0][f_col].parse().unwrap();
    assert!((t0 - 1.0).abs() < 1e-9, "echo purity at t = 0");
}

#[test]
fn echo_default_grids_cover_one_period() {
    // Defaults: 40 time points over [0, piN/2] and alphas {0.25, 0.5, 0.75}.
    let body = stdout_of(&["echo", "--n", "4"]);
    let (header, rows) = parse_csv(&body);
    assert_eq!(rows.len(), 120);
    let t_col = column(&header, "t");
    let f_col = column(&header, "f");
    let last_t: f64 = rows.last().unwrap()[t_col].parse().unwrap();
    assert!((last_t - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    for row in rows.iter().filter(|r| r[t_col].parse::<f64>().unwrap() == 0.0) {
        let f: f64 = row[f_col].parse().unwrap();
        assert!((f - 1.0).abs() < 1e-9);
    }
}

#[test]
fn bell_state_flows_through_spectrum_and_closed_forms() {
    let body = stdout_of(&[
        "mqi", "--bell", "0.2,0.1,-0.3", "--generator", "sz", "--alpha", "0.4",
    ]);
    let (header, rows) = parse_csv(&body);
    // Two-qubit generator levels {-1, 0, 0, 1} give orders -2..2.
    assert_eq!(rows.len(), 5);
    let total: f64 = {
        let re_col = column(&header, "i_re");
        rows.iter().map(|r| r[re_col].parse::<f64>().unwrap()).sum()
    };
    let c_col = column(&header, "c_alpha");
    let cc_col = column(&header, "c_one_minus_alpha");
    let normalizer: f64 = rows[0][c_col].parse::<f64>().unwrap()
        * rows[0][cc_col].parse::<f64>().unwrap();
    assert!((total - normalizer).abs() < 1e-9, "sum rule on the emitted rows");

    let forms = stdout_of(&[
        "closed-forms", "--bell", "0.2,0.1,-0.3", "--generator", "sz", "--alpha", "0.4",
    ]);
    let (header, rows) = parse_csv(&forms);
    let q_col = column(&header, "quantifier");
    let names: Vec<&str> = rows.iter().map(|r| r[q_col].as_str()).collect();
    for expect in ["eta_alpha_x", "F", "I_L", "F_Q", "V", "I_half"] {
        assert!(names.contains(&expect), "missing {expect}");
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "echo",
        "--n",
        "3",
        "--p",
        "0.5",
        "--t-grid",
        "0:2:0.5",
        "--alpha-grid",
        "0.25:0.75:0.25",
    ];
    let first = stdout_of(&args);
    let second = stdout_of(&args);
    assert_eq!(first, second);

    let json_args = [
        "mqi",
        "--family",
        "w",
        "--n",
        "3",
        "--p",
        "0.4",
        "--generator",
        "sx",
        "--alpha",
        "0.35",
        "--format",
        "json",
    ];
    assert_eq!(stdout_of(&json_args), stdout_of(&json_args));
}

#[test]
fn json_format_parses_and_matches_csv_values() {
    let csv = stdout_of(&[
        "mqi",
        "--family",
        "eqn",
        "--n",
        "2",
        "--p",
        "0.5",
        "--generator",
        "sz",
        "--alpha",
        "0.5",
    ]);
    let json = stdout_of(&[
        "mqi",
        "--family",
        "eqn",
        "--n",
        "2",
        "--p",
        "0.5",
        "--generator",
        "sz",
        "--alpha",
        "0.5",
        "--format",
        "json",
    ]);
    let rows: serde_json::Value = serde_json::from_str(&json).unwrap();
    let rows = rows.as_array().unwrap();
    let (header, csv_rows) = parse_csv(&csv);
    assert_eq!(rows.len(), csv_rows.len());
    let re_col = column(&header, "i_re");
    for (json_row, csv_row) in rows.iter().zip(&csv_rows) {
        let via_json = json_row["i_re"].as_f64().unwrap();
        let via_csv: f64 = csv_row[re_col].parse().unwrap();
        assert_eq!(via_json.to_bits(), via_csv.to_bits());
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let path: PathBuf = dir.join("mqi_out.csv");
    let _ = std::fs::remove_file(&path);
    let out = mqc(&[
        "mqi",
        "--family",
        "ghz",
        "--n",
        "2",
        "--p",
        "0.5",
        "--generator",
        "sz",
        "--alpha",
        "0.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.starts_with("alpha,m,"));
}

#[test]
fn closed_forms_family_and_generator_guard() {
    let body = stdout_of(&[
        "closed-forms",
        "--family",
        "w",
        "--n",
        "3",
        "--p",
        "0.5",
        "--alpha",
        "0.25",
    ]);
    let (header, rows) = parse_csv(&body);
    let q_col = column(&header, "quantifier");
    let names: Vec<&str> = rows.iter().map(|r| r[q_col].as_str()).collect();
    for expect in ["c_alpha", "xi_alpha", "F", "I_L", "F_Q", "V", "I_half"] {
        assert!(names.contains(&expect), "missing {expect}");
    }

    // The W family is stated for Ŝ_x; asking for Ŝ_z is a config error.
    let out = mqc(&[
        "closed-forms",
        "--family",
        "w",
        "--n",
        "3",
        "--p",
        "0.5",
        "--generator",
        "sz",
        "--alpha",
        "0.25",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn limits_on_full_rank_family_converges() {
    let body = stdout_of(&[
        "limits",
        "--family",
        "eqn",
        "--n",
        "2",
        "--p",
        "0.5",
        "--generator",
        "sz",
        "--alpha-grid",
        "0.9:0.99:0.03",
    ]);
    let (header, rows) = parse_csv(&body);
    let gap_col = column(&header, "rel_gap");
    let gaps: Vec<f64> = rows.iter().map(|r| r[gap_col].parse().unwrap()).collect();
    // The finite-alpha coefficient approaches the limit as alpha -> 1.
    assert!(gaps.last().unwrap() < &0.05);
    assert!(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12));
}

#[test]
fn ising_generator_spectrum_orders() {
    let body = stdout_of(&[
        "mqi",
        "--family",
        "eqn",
        "--n",
        "3",
        "--p",
        "0.5",
        "--generator",
        "ising",
        "--coupling",
        "1.0",
        "--alpha",
        "0.5",
    ]);
    let (header, rows) = parse_csv(&body);
    let m_col = column(&header, "m");
    // N = 3 Ising levels {−J/3, J} are 2 lattice units apart.
    let ms: Vec<i64> = rows.iter().map(|r| r[m_col].parse().unwrap()).collect();
    assert_eq!(ms, vec![-2, -1, 0, 1, 2]);
}
