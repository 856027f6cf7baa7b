use soc_cli::{manifest_path, run, sha256_hex, Overrides, Subcommand};
use soc_core::Limits;
use std::path::Path;
use std::process::{Command, Output};

fn soc(args: &[&str], config: &Path, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_soc"));
    cmd.args(args).arg("--config").arg(config);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn convergence_row_ten_matches_closed_form() {
    let raw = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/convergence_geometric.json"),
    )
    .unwrap();
    let out = run(Subcommand::Convergence, &raw, &Overrides::default(), &Limits::default()).unwrap();
    assert_eq!(out.table.header, vec!["n", "remainder", "bound", "ratio"]);
    let rem: f64 = out.table.rows[10][1].parse().unwrap();
    assert!((rem - 9.765625e-4).abs() < 1e-12);
}

#[test]
fn non_normal_matrix_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "jordan.json",
        r#"{"functor":{"kind":"geometric","truncation":120},
            "matrix":{"rows":2,"cols":2,"re":[0,1,0,0]},
            "params":{"s":0.75}}"#,
    );
    let out = soc(&["convergence"], &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("contract violation"), "{msg}");
    assert!(msg.contains("normal"), "{msg}");
}

#[test]
fn capacity_cap_from_env_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "adm.json",
        r#"{"functor":{"kind":"exponential","truncation":4},
            "inputs":[{"rows":3,"cols":3,"re":[0.1,0,0,0,0.2,0,0,0,0.3]}],
            "params":{"phi":{"kind":"exp","c":1.0}}}"#,
    );
    let cross = write_config(
        dir.path(),
        "cr.json",
        r#"{"functor":{"kind":"exponential","truncation":6},
            "inputs":[{"rows":3,"cols":3,"re":[0.1,0,0,0,0.2,0,0,0,0.3]},
                      {"rows":3,"cols":3,"re":[0.1,0,0,0,0.2,0,0,0,0.3]}],
            "params":{"direct":true,"n_max":6}}"#,
    );
    assert_eq!(soc(&["admissibility"], &cfg, &[]).status.code(), Some(0));
    let out = soc(&["cross-effect"], &cross, &[("SOC_MAX_ENTRIES", "100")]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), "u.json", r#"{"functor":{"kind":"geometric"},"colour":1}"#);
    assert_eq!(soc(&["radius"], &unknown, &[]).status.code(), Some(1));
    let wrong = write_config(dir.path(), "w.json", r#"{"subcommand":"plethysm"}"#);
    assert_eq!(soc(&["radius"], &wrong, &[]).status.code(), Some(1));
    let missing = dir.path().join("absent.json");
    assert_eq!(soc(&["radius"], &missing, &[]).status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_soc")).arg("radius").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn non_reduced_inner_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"functor":{"kind":"exponential","truncation":6},
            "params":{"inner":{"kind":"geometric","truncation":6}}}"#,
    );
    assert_eq!(soc(&["chain-rule"], &cfg, &[]).status.code(), Some(2));
}

#[test]
fn manifest_records_hash_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{"functor":{"kind":"polynomial","coeffs":[0,1,1]},"params":{"n":2,"samples":3}}"#;
    let cfg = write_config(dir.path(), "e.json", body);
    let csv = dir.path().join("e.csv");
    let out = soc(&["excision", "--seed", "11", "--out", csv.to_str().unwrap()], &cfg, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(manifest_path(&csv)).unwrap()).unwrap();
    assert_eq!(manifest["config_sha256"], sha256_hex(body.as_bytes()));
    assert_eq!(manifest["seed"], 11);
    assert_eq!(manifest["subcommand"], "excision");
    assert_eq!(manifest["rows"], 3);
    assert!(manifest["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn stdout_when_no_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "r.json", r#"{"functor":{"kind":"geometric","truncation":20}}"#);
    let out = soc(&["radius"], &cfg, &[]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "truncation,estimate,eventually_zero\n20,1.0000000000000000e0,false\n"
    );
}

#[test]
fn seed_changes_random_samples_only() {
    let body = r#"{"functor":{"kind":"exponential","truncation":6},"params":{"n":2,"samples":2}}"#;
    let l = Limits::default();
    let with = |seed| {
        run(
            Subcommand::Excision,
            body,
            &Overrides {
                seed: Some(seed),
                ..Default::default()
            },
            &l,
        )
        .unwrap()
        .table
    };
    assert_eq!(with(1), with(1));
    assert_ne!(with(1), with(2));
}

#[test]
fn convention_flag_overrides_config() {
    let body = r#"{"functor":{"kind":"geometric","truncation":60},"params":{"r":0.5,"n_max":3},"convention":"layer_sum"}"#;
    let l = Limits::default();
    let sum = run(Subcommand::Remainder, body, &Overrides::default(), &l).unwrap();
    let max = run(
        Subcommand::Remainder,
        body,
        &Overrides {
            convention: Some(soc_core::linalg::DirectSumNorm::LayerMax),
            ..Default::default()
        },
        &l,
    )
    .unwrap();
    assert_eq!(sum.table.rows[0][1], "1.0000000000000000e0");
    assert_eq!(max.table.rows[0][1], "5.0000000000000000e-1");
}

#[test]
fn kpl_flag_scales_gamma() {
    let body = r#"{"functor":{"kind":"exponential","truncation":8},
                   "params":{"inner":{"kind":"exponential","truncation":8,"reduced":true}}}"#;
    let l = Limits::default();
    let t = run(
        Subcommand::Stability,
        body,
        &Overrides {
            k_pl: Some(2.0),
            ..Default::default()
        },
        &l,
    )
    .unwrap()
    .table;
    assert!(t.column("gamma").unwrap().iter().all(|g| *g == "4.0000000000000000e0"));
    let bad = Overrides {
        k_pl: Some(0.5),
        ..Default::default()
    };
    assert_eq!(run(Subcommand::Stability, body, &bad, &l).unwrap_err().exit_code(), 1);
}

#[test]
fn every_subcommand_has_a_fixture() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for sub in Subcommand::ALL {
        if sub == Subcommand::Remainder {
            assert!(dir.join("remainder_exponential.json").exists());
            continue;
        }
        let prefix = sub.as_str().replace('-', "_");
        let found = std::fs::read_dir(&dir)
            .unwrap()
            .filter_map(Result::ok)
            .any(|e| e.file_name().to_string_lossy().starts_with(&prefix));
        assert!(found, "no fixture for {}", sub.as_str());
    }
}
