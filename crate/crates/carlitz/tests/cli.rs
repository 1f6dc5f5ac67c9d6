use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn carlitz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carlitz"))
        .env_remove("CARLITZ_FIELD_CONFIG")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn bracket_and_factorial() {
    let o = carlitz(&["bracket", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "x^2 + x");
    assert_eq!(stdout(&carlitz(&["--q", "3", "bracket", "--n", "inf"])).trim(), "2*x");
    assert_eq!(stdout(&carlitz(&["bracket", "--n", "0"])).trim(), "0");
    let d = json(&carlitz(&["--json", "--q", "3", "factorial", "--n", "2"]));
    assert_eq!(d["status"], "ok");
    assert_eq!(d["result"]["valuation"], "4");
    let l = json(&carlitz(&["--json", "factorial", "--n", "2", "--kind", "l"]));
    assert_eq!(l["result"]["valuation"], "2");
}

#[test]
fn pochhammer_modes_agree() {
    let direct = carlitz(&["pochhammer", "--a", "x + 1", "--m", "3", "--mode", "direct"]);
    let rec = carlitz(&["pochhammer", "--a", "x + 1", "--m", "3"]);
    assert_eq!(direct.status.code(), Some(0));
    assert_eq!(direct.stdout, rec.stdout);
    let zero = carlitz(&["pochhammer", "--alpha", "-1", "--m", "3"]);
    assert_eq!(stdout(&zero).trim(), "0");
}

#[test]
fn usage_and_syntax_errors_exit_2() {
    assert_eq!(carlitz(&["bracket"]).status.code(), Some(2));
    assert_eq!(carlitz(&["frobnicate"]).status.code(), Some(2));
    let o = carlitz(&["pochhammer", "--a", "x^(1/2)", "--m", "1", "--q", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax"));
    let o = carlitz(&["--json", "--q", "6", "bracket", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["reason"], "invalid-field");
    assert_eq!(carlitz(&["--version"]).status.code(), Some(0));
}

#[test]
fn operator_verbs() {
    let o = carlitz(&["op-normalize", "d*tau - tau*d"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("(x + x^(1/2))\n"));
    let j = json(&carlitz(&["--json", "--q", "3", "op-normalize", "delta1*tau - tau*delta1 - (x^3 - x)*tau", "--n", "1"]));
    assert_eq!(j["result"]["normal_form"], "0");
    let alt = json(&carlitz(&["--json", "op-normalize", "tau*delta1", "--n", "1", "--convention", "alt", "--strategy", "random", "--seed", "5"]));
    assert_eq!(alt["result"]["terms"], 2);
    let bad = carlitz(&["--json", "op-normalize", "delta3", "--n", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(json(&bad)["reason"], "syntax");
}

#[test]
fn op_apply_on_a_function_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "u.toml",
        "n = 1\ntrunc_m = 3\ntrunc_i = 3\n\n[field]\nq = 2\n\n[[coeff]]\nm = 0\ni = [1]\nvalue = \"x\"\n",
    );
    let o = carlitz(&["op-apply", "delta1", "--function", &f]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    // Δ acts on s^q by the eigenvalue [1]
    let text = stdout(&o);
    assert!(text.contains("value = \"x^3 + x^2\""), "{}", text);
    let out = write(dir.path(), "v.toml", &text);
    let back = carlitz(&["parse-roundtrip", &out, "--kind", "function"]);
    assert_eq!(back.status.code(), Some(0));
}

const PROBLEM: &str = r#"
n = 1
trunc_m = 4
trunc_i = 4

[field]
q = 3

[[p]]
exp = [1]
coeff = "1"
[[p]]
exp = [0]
coeff = "-x^2"

[[q]]
exp = [1]
coeff = "-1"
[[q]]
exp = [0]
coeff = "1 + x"

[[init]]
i = [0]
value = "1"
"#;

#[test]
fn cauchy_solve_writes_a_solution() {
    let dir = tempfile::tempdir().unwrap();
    let prob = write(dir.path(), "p.toml", PROBLEM);
    let out = dir.path().join("u.toml");
    let o = carlitz(&["cauchy-solve", &prob, "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("residual vanishes"));
    let solution = fs::read_to_string(&out).unwrap();
    assert!(solution.contains("trunc_m = 4"));
    let j = json(&carlitz(&["--json", "cauchy-solve", &prob]));
    assert_eq!(j["result"]["residual_zero"], true);
    assert!(j["result"]["solution"]["coeff"].as_array().unwrap().len() >= 4);
}

#[test]
fn inadmissible_problem_is_refused_with_the_tuple() {
    let dir = tempfile::tempdir().unwrap();
    // Q(t) = t - [2] vanishes at the bracket [2]
    let text = PROBLEM.replace("coeff = \"1 + x\"", "coeff = \"-x^9 + x\"").replace("coeff = \"-1\"", "coeff = \"1\"");
    let prob = write(dir.path(), "bad.toml", &text);
    let o = carlitz(&["--json", "cauchy-solve", &prob]);
    assert_eq!(o.status.code(), Some(1));
    let j = json(&o);
    assert_eq!(j["status"], "refused");
    assert_eq!(j["reason"], "inadmissible");
    assert!(j["message"].as_str().unwrap().contains("(2)"), "{}", j["message"]);
}

#[test]
fn hypergeometric_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "p.toml", "a = [\"x\", \"1\"]\nb = [\"1 + x\"]\n\n[field]\nq = 2\n");
    let o = carlitz(&["hyper-eval", "--params", &params, "--z", "x^2", "--top", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("x^2"), "{}", stdout(&o));
    for form in ["product", "gauss"] {
        let r = carlitz(&["hyper-residual", "--params", &params, "--form", form]);
        assert_eq!(r.status.code(), Some(0), "{}", form);
    }
    let thakur = write(dir.path(), "t.toml", "alphas = [1, 3]\nbetas = [2]\n");
    assert_eq!(carlitz(&["hyper-residual", "--params", &thakur, "--form", "thakur"]).status.code(), Some(0));
    let no_ints = carlitz(&["hyper-residual", "--params", &params, "--form", "thakur"]);
    assert_eq!(no_ints.status.code(), Some(2));
    // b = [1] is a bracket, so the lower parameter is inadmissible
    let bad = carlitz(&["--json", "hyper-eval", "--a", "x", "--b", "x^2 + x", "--z", "x"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["reason"], "inadmissible");
}

#[test]
fn identity_sweeps_are_deterministic() {
    let run = |seed: &str| carlitz(&["--json", "identity-check", "--id", "gauss-mixed", "--seed", seed, "--trials", "6"]);
    let a = run("3");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, run("3").stdout);
    assert_eq!(json(&a)["result"]["passed"], 6);
    let text = carlitz(&["identity-check", "--id", "5.3", "--trials", "20", "--q", "3"]);
    assert_eq!(stdout(&text).trim(), "PASS 20/20");
    assert_eq!(carlitz(&["identity-check", "--id", "9.9"]).status.code(), Some(2));
}

#[test]
fn dim_count_reports_degrees() {
    let j = json(&carlitz(&["--json", "dim-count", "--n", "2"]));
    assert_eq!(j["result"]["degree"]["gamma"], 4);
    assert_eq!(j["result"]["degree"]["fhat"], 3);
    assert_eq!(j["result"]["rows"].as_array().unwrap().len(), 13);
}

#[test]
fn parse_roundtrip_verb() {
    let o = carlitz(&["--q", "3", "parse-roundtrip", "x^(1/3) + 2*x^2 + O(x^5)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "x^(1/3) + 2*x^2 + O(x^5)");
    let op = carlitz(&["parse-roundtrip", "d*tau", "--kind", "operator"]);
    assert_eq!(stdout(&op).lines().next(), Some("(x + x^(1/2)) + tau*d"));
    let sweep = carlitz(&["parse-roundtrip", "--seed", "9", "--trials", "60"]);
    assert_eq!(stdout(&sweep).trim(), "PASS 60/60");
}

#[test]
fn field_config_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "field.toml", "q = 3\n");
    let run = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_carlitz"))
            .env("CARLITZ_FIELD_CONFIG", &cfg)
            .args(extra)
            .output()
            .unwrap()
    };
    assert_eq!(stdout(&run(&["bracket", "--n", "1"])).trim(), "x^3 + 2*x");
    // flags override the file
    assert_eq!(stdout(&run(&["--q", "2", "bracket", "--n", "1"])).trim(), "x^2 + x");
    let missing = Command::new(env!("CARGO_BIN_EXE_carlitz"))
        .env("CARLITZ_FIELD_CONFIG", dir.path().join("nope.toml"))
        .args(["bracket", "--n", "1"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
}
