use std::path::PathBuf;
use std::process::{Command, Output};

fn supconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supconv")).args(args).output().expect("spawn supconv")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("supconv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json stdout")
}

#[test]
fn constants_csv() {
    let out = supconv(&["constants", "--k", "2", "--n", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1), Some("2,3,5/9,5/9,5/9,1/9"));
}

#[test]
fn constants_range() {
    let out = supconv(&["constants", "--k", "1", "--n", "2", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().map(Vec::len), Some(3));
}

#[test]
fn extremal_then_verify_passes() {
    let path = scratch("extremal.json");
    let p = path.to_str().unwrap();
    assert_eq!(supconv(&["extremal", "--k", "2", "--N", "4", "--out", p]).status.code(), Some(0));
    let out = supconv(&["verify-t1", "--input", p, "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["lhs"], "3/8");
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn impossible_tolerance_fails_with_code_two() {
    // A function that violates nothing, checked against a negative slack
    // so the threshold exceeds the attainable ratio.
    let path = scratch("extremal-tight.json");
    let p = path.to_str().unwrap();
    supconv(&["extremal", "--k", "2", "--N", "4", "--out", p]);
    let out = supconv(&["verify-t1", "--input", p, "--n", "2", "--tol-rel=-1/2"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn pair_mode_on_random_input() {
    let path = scratch("random.json");
    let p = path.to_str().unwrap();
    let gen = supconv(&["random", "--k", "2", "--N", "4", "--seed", "7", "--out", p]);
    assert_eq!(gen.status.code(), Some(0));
    let out = supconv(&["verify-t4", "--f", p, "--g", p]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["mode"], "pair");
}

#[test]
fn random_is_deterministic() {
    let a = supconv(&["random", "--k", "2", "--N", "5", "--seed", "3"]);
    let b = supconv(&["random", "--k", "2", "--N", "5", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn envelope_and_supconv_round_trip() {
    let path = scratch("env-in.json");
    let p = path.to_str().unwrap();
    supconv(&["extremal", "--k", "1", "--N", "4", "--out", p]);
    let env = supconv(&["envelope", "--input", p]);
    assert_eq!(env.status.code(), Some(0));
    // The envelope of the vertex indicator on a segment is identically zero.
    for row in json(&env)["values"].as_array().unwrap() {
        assert_eq!(row[2], 0);
    }
    let sc = supconv(&["supconv", "--input", p, "--n", "2"]);
    assert_eq!(sc.status.code(), Some(0));
    let pr = supconv(&["supconv", "--input", p, "--pair", p]);
    assert_eq!(pr.status.code(), Some(0));
}

#[test]
fn classify_reports_cell() {
    let out = supconv(&["classify", "--k", "2", "--n", "3", "--point", "1/2,1/4,1/4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["m"], 2);
    assert_eq!(v["v"], serde_json::json!([1, 0, 0]));
}

#[test]
fn classify_off_simplex_is_usage_error() {
    let out = supconv(&["classify", "--k", "2", "--n", "3", "--point", "1/2,1/2,1/2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn subdivide_writes_svg() {
    let path = scratch("sub.svg");
    let out = supconv(&["subdivide", "--k", "2", "--n", "3", "--svg", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().map(Vec::len), Some(9));
    let svg = std::fs::read_to_string(path).unwrap();
    assert_eq!(svg.matches("class=\"m1\"").count(), 6);
    assert_eq!(svg.matches("class=\"m2\"").count(), 3);
}

#[test]
fn averageable_medial_passes() {
    let out = supconv(&["averageable", "--medial"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["passed"], true);
}

#[test]
fn averageable_unsupported_pair_is_error() {
    let out = supconv(&["averageable", "--k", "5", "--m", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cover_found_for_triangle() {
    let out = supconv(&["cover", "--k", "2", "--n", "2", "--max-level", "2", "--max-refine", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["certificate"].is_object());
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(supconv(&["nonsense"]).status.code(), Some(1));
    assert_eq!(supconv(&["constants", "--k", "2"]).status.code(), Some(1));
    assert_eq!(supconv(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_input_exit_one() {
    let path = scratch("bad.json");
    std::fs::write(&path, "{\"k\": 2}").unwrap();
    assert_eq!(supconv(&["envelope", "--input", path.to_str().unwrap()]).status.code(), Some(1));
}
