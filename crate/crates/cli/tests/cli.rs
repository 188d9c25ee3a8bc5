use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn kdsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdsim"))
        .args(args)
        .output()
        .expect("run kdsim")
}

fn read_columns(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .unwrap();
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let (header, rows) = read_columns(path);
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn figure_2_distinguishable_band() {
    let dir = tempfile::tempdir().unwrap();
    let out = kdsim(&["figure", "--id", "2", "--out", dir.path().to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let data = dir.path().join("fig2.csv");
    let dis = column(&data, "density_distinguishable");
    assert_eq!(dis.len(), 2001);
    let min = dis.iter().copied().fold(f64::INFINITY, f64::min);
    let max = dis.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert!((0.975..=0.985).contains(&min), "min {min}");
    assert!((1.015..=1.025).contains(&max), "max {max}");

    let x = column(&data, "x");
    let centre = x.iter().position(|&v| v == 0.0).unwrap();
    assert_eq!(column(&data, "density_fermion")[centre], 0.0);
    assert!((column(&data, "density_boson")[centre] - 2.0 * dis[centre]).abs() < 1e-10);

    let script = fs::read_to_string(dir.path().join("fig2.gp")).unwrap();
    assert!(script.contains("'fig2.csv'"));
    assert!(!script.contains(dir.path().to_str().unwrap()));
}

#[test]
fn figure_3_columns() {
    let dir = tempfile::tempdir().unwrap();
    assert!(
        kdsim(&["figure", "--id", "3", "--out", dir.path().to_str().unwrap()])
            .status
            .success()
    );
    let data = dir.path().join("fig3.csv");
    let dis = column(&data, "density_distinguishable");
    assert_eq!(dis.iter().copied().fold(0.0, f64::max), 1.0);
    let raw = column(&data, "raw_distinguishable");
    let x = column(&data, "x");
    let centre = x.iter().position(|&v| v == 0.0).unwrap();
    assert_eq!(column(&data, "raw_fermion")[centre], 0.0);
    assert!((column(&data, "raw_boson")[centre] - 2.0 * raw[centre]).abs() < 1e-15);
    // Gaussian envelope: the edges of the scan are far below the peak
    assert!(dis[0] < 1e-6 && dis[dis.len() - 1] < 1e-6);
}

#[test]
fn figure_6_fermion_first_resonance_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    assert!(
        kdsim(&["figure", "--id", "6", "--out", dir.path().to_str().unwrap()])
            .status
            .success()
    );
    let data = dir.path().join("fig6.csv");
    assert!(column(&data, "p_fermion_n1").iter().all(|&v| v == 0.0));
    let dis = column(&data, "p_dis_1_0");
    let boson = column(&data, "p_boson_n1");
    for (b, d) in boson.iter().zip(&dis) {
        assert!((b - 2.0 * d).abs() < 1e-15);
    }
}

#[test]
fn figure_4_single_absorption_dominates_at_small_w() {
    let dir = tempfile::tempdir().unwrap();
    assert!(
        kdsim(&["figure", "--id", "4", "--out", dir.path().to_str().unwrap()])
            .status
            .success()
    );
    let data = dir.path().join("fig4.csv");
    let (header, rows) = read_columns(&data);
    assert_eq!(
        header,
        ["w", "p_0_1", "p_0_2", "p_0_3", "p_1_1", "p_1_2", "p_2_2"]
    );
    let small: Vec<f64> = rows[1].iter().map(|v| v.parse().unwrap()).collect();
    assert!(small[0] > 0.0 && small[0] < 0.01);
    assert!(small[2..].iter().all(|&p| p < small[1]));
}

#[test]
fn written_config_reparses_to_the_same_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.csv");
    let args = [
        "spatial", "--w", "0.37", "--q0", "-1.1", "--K0", "0.25", "--range", "-2:3", "--points",
        "41", "--nmax", "auto",
    ];
    let mut a: Vec<&str> = args.to_vec();
    a.extend(["--out", first.to_str().unwrap()]);
    assert!(kdsim(&a).status.success());

    // strip the comment prefix to recover a config file
    let text = fs::read_to_string(&first).unwrap();
    let config: String = text
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter(|l| {
            !l.starts_with("normalization")
                && !l.starts_with("scale")
                && !l.starts_with("visibility")
        })
        .filter(|l| !l.starts_with("out "))
        .map(|l| format!("{l}\n"))
        .collect();
    let cfg_path = dir.path().join("scenario.cfg");
    fs::write(&cfg_path, config).unwrap();

    let second = dir.path().join("second.csv");
    let out = kdsim(&[
        "spatial",
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let strip_out = |s: String| {
        s.lines()
            .filter(|l| !l.starts_with("# out = "))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(
        strip_out(text),
        strip_out(fs::read_to_string(&second).unwrap())
    );
}

#[test]
fn output_is_deterministic() {
    let args = [
        "correlation",
        "--stats",
        "boson",
        "--points",
        "9",
        "--w",
        "0.8",
    ];
    let a = kdsim(&args);
    let b = kdsim(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let a = kdsim(&[
        "momentum", "--kind", "table", "--k0", "0", "--q0", "2", "--stats", "fermion",
    ]);
    let b = kdsim(&[
        "momentum", "--kind", "table", "--k0", "0", "--q0", "2", "--stats", "fermion",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn coefficients_footer_and_json() {
    let out = kdsim(&["coefficients", "--w", "1.0", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let last = rows.last().unwrap();
    assert_eq!(last[0], "sum");
    assert!((last[3].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["config"]["w"], "1");
}

#[test]
fn correlation_columns_agree() {
    let out = kdsim(&[
        "correlation",
        "--w",
        "0.8",
        "--stats",
        "fermion",
        "--points",
        "16",
    ]);
    assert!(out.status.success());
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(out.stdout.as_slice());
    for rec in r.records() {
        let diff: f64 = rec.unwrap()[3].parse().unwrap();
        assert!(diff < 1e-7);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(kdsim(&["spatial", "--points", "1"]).status.code(), Some(2));
    assert_eq!(kdsim(&["spatial", "--range", "3:1"]).status.code(), Some(2));
    assert_eq!(
        kdsim(&["spatial", "--stats", "anyon"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kdsim(&["spatial", "--config", "/nonexistent/kd.cfg"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(kdsim(&["figure", "--id", "5"]).status.code(), Some(2));
    assert_eq!(kdsim(&["frobnicate"]).status.code(), Some(2));
    // the Gaussian envelope underflows everywhere on this scan
    let far = kdsim(&[
        "multimode",
        "--y",
        "1000",
        "--sigma2",
        "1",
        "--mu2",
        "1",
        "--range",
        "999:1001",
        "--points",
        "5",
    ]);
    assert_eq!(far.status.code(), Some(3));
}
