use std::process::{Command, Output};

fn relgrowth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relgrowth"))
        .args(args)
        .output()
        .expect("run relgrowth")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of the first table (after its column header).
fn rows(text: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines().skip_while(|l| !l.starts_with("#method:")).skip(2);
    let mut out = Vec::new();
    for l in lines.by_ref() {
        if l.is_empty() || l.starts_with('#') {
            break;
        }
        out.push(l.split('\t').map(String::from).collect());
    }
    out
}

#[test]
fn growth_ratio_column_is_ln3_for_f2() {
    let o = relgrowth(&["growth", "--pres", "f2", "--radius", "7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("#method:"));
    assert!(text.contains("radius\tsphere\tball\tratio_log"));
    let rows = rows(&text);
    assert_eq!(rows.len(), 8);
    for row in &rows[2..] {
        let r: f64 = row[3].parse().unwrap();
        assert!((r - 3f64.ln()).abs() < 1e-12, "{row:?}");
    }
    assert_eq!(rows[7][1], "2916");
}

#[test]
fn every_table_has_a_method_header() {
    let runs: &[&[&str]] = &[
        &["ball", "--radius", "2"],
        &["floyd", "--x", "ab", "--y", "B"],
        &["cones", "--radius", "3", "--cone-radius", "1", "--horizon", "1"],
        &["shadow", "--radius", "2"],
        &["partial-shadow", "--radius", "2", "--peripherals", "a", "--R", "2", "--r", "2"],
        &["quotient", "--h", "ab", "--n", "3", "--radius", "3"],
        &["filter", "--h", "ab", "--radius", "3"],
        &["tree", "--depth", "2"],
    ];
    for args in runs {
        let o = relgrowth(args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        let tables = text.lines().filter(|l| l.starts_with("#method:")).count();
        assert!(tables >= 1, "{args:?}");
        assert!(!rows(&text).is_empty(), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["quotient", "--h", "ab", "--n", "2,3,4", "--radius", "5"];
    let a = relgrowth(&args);
    let b = relgrowth(&["--threads", "1", "quotient", "--h", "ab", "--n", "4,3,2", "--radius", "5"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = relgrowth(&["tree", "--depth", "3"]);
    assert_eq!(c.stdout, relgrowth(&["tree", "--depth", "3"]).stdout);
}

#[test]
fn parse_and_config_errors_exit_2() {
    for args in [
        &["growth", "--pres", "no_such_presentation"][..],
        &["floyd", "--x", "q", "--y", "a"],
        &["quotient", "--h", "", "--n", "2"],
        &["growth", "--no-such-flag"],
        &["shadow", "--rank", "0"],
    ] {
        let o = relgrowth(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn budget_exceeded_exits_3_with_partial_table() {
    let o = relgrowth(&["growth", "--radius", "10", "--max-elements", "100"]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert!(text.starts_with("# partial:"));
    let rows = rows(&text);
    assert_eq!(rows.last().unwrap()[0], "3");
}

#[test]
fn presentation_file_and_bundled_name_agree() {
    let dir = std::env::temp_dir().join(format!("relgrowth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z5.grp");
    std::fs::write(&path, "gens: a b\nrel: a^5\n").unwrap();
    let from_file = relgrowth(&["ball", "--pres", path.to_str().unwrap(), "--radius", "4"]);
    let bundled = relgrowth(&["ball", "--pres", "z_star_z5", "--radius", "4"]);
    assert_eq!(rows(&stdout(&from_file)), rows(&stdout(&bundled)));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn shadow_masses_are_exact() {
    let text = stdout(&relgrowth(&["shadow", "--radius", "2", "--r", "0"]));
    let rows = rows(&text);
    let ab = rows.iter().find(|r| r[0] == "ab").unwrap();
    assert_eq!((ab[2].as_str(), ab[3].as_str()), ("1", "12"));
    assert_eq!(ab[4], "3/4");
}

#[test]
fn gnuplot_script_references_output() {
    let dir = std::env::temp_dir().join(format!("relgrowth-gp-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (out, gp) = (dir.join("g.tsv"), dir.join("g.gp"));
    let o = relgrowth(&[
        "growth",
        "--radius",
        "3",
        "--out",
        out.to_str().unwrap(),
        "--gnuplot",
        gp.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let script = std::fs::read_to_string(&gp).unwrap();
    assert!(script.contains(out.to_str().unwrap()));
    assert!(std::fs::read_to_string(&out).unwrap().contains("ratio_log"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_all_passes() {
    let o = relgrowth(&["verify-all"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(rows(&stdout(&o)).iter().all(|r| r[4] == "0"));
}
