use std::process::{Command, Output};

fn oscilkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscilkit"))
        .args(args)
        .output()
        .expect("run oscilkit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["fig2", "--grid", "0:3:41"][..],
        &["fig1", "--format", "json"],
        &["sum-rule"],
        &["trajectory", "--mode", "al-bounded", "--grid", "0:5:11"],
    ] {
        let a = oscilkit(args);
        let b = oscilkit(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn csv_has_metadata_then_one_header() {
    let o = oscilkit(&["cross-sections", "--grid", "0.5:1.5:5"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    let header = lines.iter().position(|l| !l.starts_with('#')).unwrap();
    assert!(lines[..header]
        .iter()
        .any(|l| l.starts_with("# tau_omega0:")));
    assert!(lines[header].starts_with("omega_over_w0,sigma_abs,sigma_sc"));
    assert_eq!(lines.len() - header - 1, 5);
    assert!(lines[header + 1..].iter().all(|l| !l.starts_with('#')));
}

#[test]
fn json_mirrors_csv() {
    let csv = stdout(&oscilkit(&["fig3", "--grid", "0.9:1.1:3"]));
    let json = stdout(&oscilkit(&[
        "fig3",
        "--grid",
        "0.9:1.1:3",
        "--format",
        "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    let cols: Vec<&str> = v["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert_eq!(cols.join(","), header);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["metadata"]["command"], "fig3");
    let first: f64 = csv
        .lines()
        .filter(|l| !l.starts_with('#'))
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(v["rows"][0][1].as_f64().unwrap(), first);
}

#[test]
fn trajectory_columns() {
    let text = stdout(&oscilkit(&[
        "trajectory",
        "--mode",
        "forced",
        "--grid",
        "0:1:3",
    ]));
    assert!(text.lines().any(|l| l == "t,x,v"));
    let text = stdout(&oscilkit(&["trajectory", "--grid", "0:1:3"]));
    assert!(text.lines().any(|l| l == "t,x,v,b"));
    let row = text.lines().last().unwrap();
    // 17 significant digits per number
    let x = row.split(',').nth(1).unwrap();
    assert_eq!(
        x.split('e').next().unwrap().replace(['-', '.'], "").len(),
        17
    );
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["nonsense"][..],
        &["fig2", "--tau-omega0", "-1"],
        &["fig2", "--grid", "3:0:10"],
        &["fig2", "--si-electron"],
        &["stark", "--transitions", "/nonexistent/table.json"],
    ] {
        assert_eq!(oscilkit(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(oscilkit(&["--help"]).status.code(), Some(0));
}

#[test]
fn numeric_failure_exits_3() {
    // τω₀ this large overflows the closed form of the roots
    let o = oscilkit(&["fig1", "--grid", "1e300:1e308:3"]);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn transitions_file_drives_stark() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    std::fs::write(
        &path,
        r#"{"mass": 9.1093837015e-31, "charge": 1.602176634e-19,
            "transitions": [{"omega": 1e15, "dipole_sq": 1e-58, "gamma": 6.3e6},
                            {"omega": 3e15, "dipole_sq": 2e-59, "gamma": 1e7}]}"#,
    )
    .unwrap();
    let out = dir.path().join("stark.csv");
    let o = oscilkit(&[
        "stark",
        "--transitions",
        path.to_str().unwrap(),
        "--grid",
        "0:4:9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("# transitions: 2"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 10);
}

#[test]
fn injected_jackson_damping_fails_audit() {
    let o = oscilkit(&["audit", "--inject-jackson", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<&serde_json::Value> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r[4] == "false")
        .collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|r| r[0] == 4.0));
}
