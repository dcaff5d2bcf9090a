use std::path::Path;
use std::process::{Command, Output};

fn causticlab(args: &[&str], scenario: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causticlab"))
        .args(args)
        .arg(scenario)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn write(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("s.scn");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn empty_product_list_writes_only_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "[scenario]\nname = empty\ns0 = x0^2*y0/2\nproducts =\n");
    let out = dir.path().join("out");
    let o = causticlab(&["run"], &sc, &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let files: Vec<String> =
        std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    assert_eq!(files, vec!["manifest.json".to_string()]);
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["outputs"], serde_json::json!([]));
    assert_eq!(manifest["seed"], 0);
}

#[test]
fn wrong_expectation_fails_verify() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(
        dir.path(),
        "[scenario]\ns0 = x0^5 + x0^6*y0\nproducts = perestroika\n[perestroika]\nt_range = 0.1, 4\n[expect]\nperestroika.t[0] = 2.7 +- 1e-4\n",
    );
    let out = dir.path().join("out");
    let o = causticlab(&["verify"], &sc, &out);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("verify.json")).unwrap()).unwrap();
    assert_eq!(report["checks"][0]["passed"], false);
    assert!(report["checks"][0]["observed"][0].as_f64().unwrap() > 2.58);
}

#[test]
fn verify_needs_an_expect_block() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "[scenario]\ns0 = x0^2*y0/2\nproducts = caustic\n[time]\nt = 1\n");
    let o = causticlab(&["verify"], &sc, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn unsupported_term_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "[scenario]\ns0 = x0^2*y0^2\nproducts = caustic\n[time]\nt = 1\n");
    let o = causticlab(&["run"], &sc, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("y0^2"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "[scenario]\ns0 = x0^2*y0/2\nbogus = 1\n");
    let o = causticlab(&["run"], &sc, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn preconditions_fail_before_any_output() {
    let dir = tempfile::tempdir().unwrap();
    // levels without a c-list, after a product that would otherwise run
    let sc = write(dir.path(), "[scenario]\ns0 = x0^5 + x0^6*y0\nproducts = perestroika, levels\n[time]\nt = 1\n");
    let o = causticlab(&["run"], &sc, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn seed_flag_overrides_the_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(
        dir.path(),
        "[scenario]\ns0 = x0^2*y0/2\nseed = 1\nproducts = zeta\n[zeta]\nh = 1e-2\nhorizon = 2\n",
    );
    let read = |out: &str, extra: &[&str]| {
        let mut args = vec!["run"];
        args.extend_from_slice(extra);
        let o = causticlab(&args, &sc, &dir.path().join(out));
        assert!(o.status.success());
        std::fs::read_to_string(dir.path().join(out).join("path.csv")).unwrap()
    };
    let a = read("a", &[]);
    let b = read("b", &["--seed", "5"]);
    assert!(a.starts_with("# seed=1 ") && b.starts_with("# seed=5 "));
    assert_ne!(a, b);
}
