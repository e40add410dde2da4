//! End-to-end tests of the binary: exit codes, output determinism, config
//! file handling.

use std::process::Command;

fn ym4() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ym4"))
}

#[test]
fn verify_algebra_suite_passes() {
    let out = ym4()
        .args(["verify", "--suite", "algebra", "--s3-level", "4"])
        .output()
        .expect("run ym4");
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("pass"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = ym4().args(["verify", "--suite", "cooking"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn glue_rejects_zero_connection() {
    // F(0) = 0 violates the insertion precondition: configuration error.
    let out = ym4()
        .args(["glue", "--connection", "zero", "--rho", "0.1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("F(0)"), "stderr: {err}");
}

#[test]
fn glue_rejects_sd_background() {
    // A self-dual background has P_- F(0) = 0: no gain to certify.
    let out = ym4()
        .args(["glue", "--connection", "sd:1", "--rho", "0.1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn glue_csv_is_deterministic() {
    let run = || {
        let out = ym4()
            .args([
                "glue",
                "--connection",
                "asd:1",
                "--construction",
                "bc",
                "--rho",
                "0.2,0.15",
                "--radial-n",
                "12",
                "--s3-level",
                "3",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let first = run();
    let second = run();
    assert_eq!(first, second, "glue output must be byte-identical across runs");
    let text = String::from_utf8_lossy(&first);
    assert!(text.starts_with("rho,tau,c0,a,b,delta_ym,gain_measured,gain_predicted"));
    assert!(text.contains("# fitted rho^4 coefficient"));
}

#[test]
fn glue_json_format_and_out_file() {
    let dir = std::env::temp_dir().join("ym4_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rows.json");
    let out = ym4()
        .args([
            "glue",
            "--connection",
            "asd:1",
            "--rho",
            "0.2",
            "--radial-n",
            "8",
            "--s3-level",
            "3",
            "--format",
            "json",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.contains("\"delta_ym\""));
    assert!(body.contains("\"fitted_coefficient\""));
}

#[test]
fn glue_reads_config_file_with_flag_override() {
    let dir = std::env::temp_dir().join("ym4_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("exp.cfg");
    std::fs::write(&cfg, "connection=asd:1\nrho=0.2\nradial_n=8\ns3_level=3\ntau=0.5\n").unwrap();
    let out = ym4()
        .args(["glue", "--config"])
        .arg(&cfg)
        .args(["--tau", "0.35"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    // The flag value (0.35), not the file value (0.5), lands in the rows.
    assert!(text.contains("3.4999999999999998e-1"), "stdout: {text}");
}

#[test]
fn phi_grid_and_exit_codes() {
    let out = ym4()
        .args(["phi", "--tau-min", "0.3", "--tau-max", "0.4", "--step", "0.01"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("tau,phi,c0_star,sign_change"));
    // Every phi in the window is negative (starts with a minus after the comma).
    for line in text.lines().skip(1) {
        let phi_field = line.split(',').nth(1).unwrap();
        assert!(phi_field.starts_with('-'), "phi not negative: {line}");
    }
    // Nonpositive step: configuration error.
    let out = ym4().args(["phi", "--step=-0.1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = ym4().args(["phi", "--step=0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
