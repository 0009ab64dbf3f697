//! End-to-end tests of the command-line interface: JSON shapes, exit codes,
//! and byte-level determinism.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supertwirl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn twirl_depolarizing_via_supermap() {
    let out = run(&[
        "twirl",
        "--channel",
        "depolarizing:0.9",
        "--method",
        "supermap",
    ]);
    let v = stdout_json(&out);
    assert!((v["eta"].as_f64().unwrap() - 0.9).abs() < 1e-10);
    assert!(v["residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["depolarizing_form"], Value::Bool(true));
    assert_eq!(v["method"], "supermap");
}

#[test]
fn twirl_identity_via_group_oracle() {
    let out = run(&["twirl", "--channel", "identity", "--method", "oracle-G"]);
    let v = stdout_json(&out);
    let ptm = v["ptm"].as_array().unwrap();
    for (i, row) in ptm.iter().enumerate() {
        for (j, entry) in row.as_array().unwrap().iter().enumerate() {
            let re = entry[0].as_f64().unwrap();
            let im = entry[1].as_f64().unwrap();
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((re - want).abs() < 1e-12 && im.abs() < 1e-12);
        }
    }
}

#[test]
fn twirl_amplitude_damping_eta() {
    for method in ["supermap", "oracle-G", "oracle-clifford"] {
        let out = run(&["twirl", "--channel", "amp_damp:0.1", "--method", method]);
        let v = stdout_json(&out);
        let expected = (2.0 * 0.9_f64.sqrt() + 0.9) / 3.0;
        assert!(
            (v["eta"].as_f64().unwrap() - expected).abs() < 1e-10,
            "method {method}"
        );
    }
}

#[test]
fn twirl_rejects_garbage_spec_with_exit_2() {
    let out = run(&["twirl", "--channel", "depol4rizing:x"]);
    assert_eq!(exit_code(&out), 2);
    let out = run(&["twirl", "--channel", "/no/such/file.json"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn twirl_rejects_non_cptp_file_with_exit_3() {
    let dir = std::env::temp_dir();
    let path = dir.join("supertwirl_cli_non_cptp.json");
    std::fs::write(
        &path,
        r#"{"dim": 2, "kraus": [[[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]]}"#,
    )
    .unwrap();
    let out = run(&["twirl", "--channel", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 3);
    let out = run(&["twirl", "--channel", "depolarizing:1.5"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn verify_passes_at_sane_tolerance() {
    let out = run(&["verify", "--seeds", "5", "--tol", "1e-10"]);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], Value::Bool(true));
    assert!(v["max_eta_deviation"].as_f64().unwrap() <= 1e-10);
    assert!(v["max_ptm_distance_supermap_vs_group"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn verify_fails_below_float_noise_floor() {
    let out = run(&["verify", "--seeds", "1", "--tol", "1e-30"]);
    assert_eq!(exit_code(&out), 1);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], Value::Bool(false));
    assert!(v["worst_seed"].is_u64());
}

#[test]
fn estimate_exact_depolarizing() {
    let out = run(&["estimate", "--target", "depolarizing:0.8", "--shots", "0"]);
    let v = stdout_json(&out);
    assert!((v["eta"].as_f64().unwrap() - 0.8).abs() < 1e-10);
    assert_eq!(v["mode"], "exact");
    assert!((v["fidelity"].as_f64().unwrap() - 0.9).abs() < 1e-10);
}

#[test]
fn estimate_identity_sampled_is_exact() {
    let out = run(&[
        "estimate", "--target", "identity", "--shots", "1000", "--seed", "7",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["eta"].as_f64().unwrap(), 1.0);
    assert_eq!(v["mode"], "sampled");
}

#[test]
fn estimate_is_spam_insensitive_in_exact_mode() {
    let out = run(&[
        "estimate",
        "--target",
        "amp_damp:0.1",
        "--prep",
        "dephasing:0.05",
        "--meas",
        "dephasing:0.05",
        "--shots",
        "0",
    ]);
    let v = stdout_json(&out);
    let expected = (2.0 * 0.9_f64.sqrt() + 0.9) / 3.0;
    assert!((v["eta"].as_f64().unwrap() - expected).abs() < 1e-9);
}

#[test]
fn estimate_degenerate_spam_exits_4() {
    // Fully depolarizing preparation noise makes q2 = q3.
    let out = run(&[
        "estimate",
        "--target",
        "amp_damp:0.1",
        "--prep",
        "depolarizing:0",
        "--shots",
        "0",
    ]);
    assert_eq!(exit_code(&out), 4);
}

#[test]
fn plan_outputs_the_quoted_numbers() {
    let out = run(&[
        "plan",
        "--epsilon",
        "1e-3",
        "--alpha",
        "0.95",
        "--mode",
        "paper",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["n_per_experiment"].as_u64().unwrap(), 372_220);
    assert_eq!(v["n_total"].as_u64().unwrap(), 1_488_880);
    assert_eq!(v["mode"], "paper_literal");

    let out = run(&[
        "plan",
        "--epsilon",
        "1e-3",
        "--alpha",
        "0.95",
        "--mode",
        "rigorous",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["n_per_experiment"].as_u64().unwrap(), 1_844_440);

    let out = run(&[
        "plan",
        "--epsilon",
        "0.5",
        "--alpha",
        "0.5",
        "--mode",
        "rigorous",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["n_per_experiment"].as_u64().unwrap(), 3);
}

#[test]
fn plan_rejects_out_of_range_with_exit_2() {
    let out = run(&["plan", "--epsilon", "-1", "--alpha", "0.95"]);
    assert_eq!(exit_code(&out), 2);
    let out = run(&["plan", "--epsilon", "0.1", "--alpha", "1.5"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn export_w_emits_a_24_by_24_unitary_with_profile() {
    let out = run(&["export-w"]);
    let v = stdout_json(&out);
    assert_eq!(v["profile"], serde_json::json!([2, 4, 3]));
    let rows = v["matrix"].as_array().unwrap();
    assert_eq!(rows.len(), 24);
    let m = supertwirl::io::rows_to_matrix(
        &rows
            .iter()
            .map(|r| {
                r.as_array()
                    .unwrap()
                    .iter()
                    .map(|e| [e[0].as_f64().unwrap(), e[1].as_f64().unwrap()])
                    .collect()
            })
            .collect::<Vec<_>>(),
    )
    .unwrap();
    assert!(supertwirl::linalg::unitarity_check(&m, 1e-12));
}

#[test]
fn rb_curve_has_requested_length() {
    let out = run(&["rb-curve", "--channel", "depolarizing:0.9", "--m-max", "6"]);
    let v = stdout_json(&out);
    let curve = v["curve"].as_array().unwrap();
    assert_eq!(curve.len(), 6);
    assert!((v["eta"].as_f64().unwrap() - 0.9).abs() < 1e-12);
    for (m, p) in curve.iter().enumerate() {
        let expected = (1.0 + 0.9_f64.powi(m as i32 + 2)) / 2.0;
        assert!((p.as_f64().unwrap() - expected).abs() < 1e-10);
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "estimate",
        "--target",
        "amp_damp:0.2",
        "--prep",
        "dephasing:0.1",
        "--shots",
        "5000",
        "--seed",
        "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let c = run(&[
        "estimate",
        "--target",
        "amp_damp:0.2",
        "--prep",
        "dephasing:0.1",
        "--shots",
        "5000",
        "--seed",
        "43",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn out_flag_writes_the_same_json_to_a_file() {
    let dir = std::env::temp_dir();
    let path = dir.join("supertwirl_cli_plan.json");
    let _ = std::fs::remove_file(&path);
    let piped = run(&[
        "plan",
        "--epsilon",
        "1e-3",
        "--alpha",
        "0.95",
        "--mode",
        "rigorous",
    ]);
    let filed = run(&[
        "plan",
        "--epsilon",
        "1e-3",
        "--alpha",
        "0.95",
        "--mode",
        "rigorous",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(filed.status.success());
    assert!(filed.stdout.is_empty());
    let file_bytes = std::fs::read(&path).unwrap();
    assert_eq!(file_bytes, piped.stdout);
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let out = run(&[
        "plan",
        "--epsilon",
        "1e-3",
        "--alpha",
        "0.95",
        "--mode",
        "rigorous",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("\"epsilon\":1.0000000000000000e-3"),
        "unexpected float formatting: {text}"
    );
    assert!(text.contains("\"alpha\":9.4999999999999996e-1"));
}

#[test]
fn channel_file_round_trips_through_the_cli() {
    // Export a random channel to the wire format, feed it back in by path.
    let e = supertwirl::channel::random_channel(11, 2);
    let json =
        supertwirl::io::to_json_string(&supertwirl::io::ChannelJson::from_channel(&e)).unwrap();
    let dir = std::env::temp_dir();
    let path = dir.join("supertwirl_cli_channel.json");
    std::fs::write(&path, json).unwrap();

    let out = run(&[
        "twirl",
        "--channel",
        path.to_str().unwrap(),
        "--method",
        "supermap",
    ]);
    let v = stdout_json(&out);
    let expected = e.ptm().unwrap().eta().unwrap();
    assert!((v["eta"].as_f64().unwrap() - expected).abs() < 1e-10);
}
