use std::path::PathBuf;
use std::process::{Command, Output};

fn pwalnut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwalnut"))
        .args(args)
        .output()
        .expect("spawn pwalnut")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn script(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "scripts", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pwalnut-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn published_scripts_print_true() {
    for name in [
        "thm1.walnut",
        "thm3.walnut",
        "thm5.walnut",
        "thm6.walnut",
        "thm8.walnut",
    ] {
        let o = pwalnut(&["run", &script(name)]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let text = stdout(&o);
        assert!(text.lines().all(|l| l.contains(": TRUE")), "{name}: {text}");
    }
}

#[test]
fn false_sentence_exits_1() {
    let p = scratch("false.walnut", "eval nope \"?msd_2 An T[n]=@0\";\n");
    let o = pwalnut(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("nope: FALSE"));
}

#[test]
fn free_variables_emit_an_automaton() {
    let p = scratch("free.walnut", "eval ones \"?msd_2 T[n]=@1\";\n");
    let dir = p.parent().unwrap().join("emitted");
    let o = pwalnut(&["run", p.to_str().unwrap(), "--emit", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.join("ones.txt")).unwrap();
    assert!(text.starts_with("base 2 tracks 1"), "{text}");
    assert!(dir.join("ones.dot").exists());
}

#[test]
fn stats_log_lists_subformulas() {
    let o = pwalnut(&["run", &script("vtm_images.walnut"), "--stats"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains(":229 states"), "{text}");
    assert!(text.contains(":217 states"), "{text}");
}

#[test]
fn word_prefixes() {
    let o = pwalnut(&["word", "tm", "--length", "32"]);
    assert_eq!(stdout(&o).trim(), "01101001100101101001011001101001");
    let o = pwalnut(&["word", "vtm", "--length", "24"]);
    assert_eq!(stdout(&o).trim(), "012021012102012021020121");
    let o = pwalnut(&["word", "0->01,1->10", "--length", "8"]);
    assert_eq!(stdout(&o).trim(), "01101001");
}

#[test]
fn scans_report_exit_status() {
    let o = pwalnut(&[
        "word",
        "phi_psi_fix",
        "--scan",
        "square",
        "--min-order",
        "3",
        "--length",
        "20000",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = pwalnut(&["word", "tm", "--scan", "square", "--length", "100"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("square of order 1 at position 1: 11"));
    let o = pwalnut(&["word", "tm", "--scan", "cube", "--length", "1000"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn search_json_record() {
    let o = pwalnut(&["--json", "search", "--a", "2", "--b", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["verdict"], "exact");
    assert_eq!(v["length"], 9);
    assert_eq!(v["mode"], "antisquare");
    assert_eq!(v["witness"].as_str().unwrap().chars().count(), 9);
}

#[test]
fn search_region_renders_a_table() {
    let o = pwalnut(&["search", "--region", "2x2"]);
    assert_eq!(stdout(&o), "a\\b\t0\t1\t2\n0\t1\t1\t1\n1\t3\t4\t5\n2\t5\t7\t9\n");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(pwalnut(&["search", "--cutoff", "0"]).status.code(), Some(2));
    assert_eq!(pwalnut(&["search", "--region", "3by4"]).status.code(), Some(2));
    assert_eq!(pwalnut(&["verify", "thm99"]).status.code(), Some(2));
    assert_eq!(pwalnut(&["word", "nosuchword"]).status.code(), Some(2));
    assert_eq!(pwalnut(&["run", "/nonexistent/script"]).status.code(), Some(2));
    assert_eq!(pwalnut(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn state_ceiling_exits_3() {
    let o = pwalnut(&["verify", "thm1", "--limit", "20"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn export_dfao_formats() {
    let o = pwalnut(&["export-dfao", "T"]);
    assert_eq!(
        stdout(&o),
        "base 2 tracks 1\n0 output=0\n1 output=1\n0 (0) 0\n0 (1) 1\n1 (0) 1\n1 (1) 0\n"
    );
    let o = pwalnut(&["export-dfao", "rho_fix", "--format", "dot"]);
    assert!(stdout(&o).starts_with("digraph \"rho_fix\""));
    let p = scratch("words.walnut", "morphism m \"0->01 1->10\";\npromote W m;\n");
    let o = pwalnut(&["export-dfao", "W", "--script", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("base 2 tracks 1"));
}

#[test]
fn verify_reports_method() {
    let o = pwalnut(&["verify", "thm3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("thm3: PASS (decided"));
    let o = pwalnut(&["--json", "verify", "closed-forms"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["method"], "exhaustive");
}
