use std::process::Command;

fn qpcat(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qpcat")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap() + &String::from_utf8(out.stderr).unwrap())
}

#[test]
fn build_then_mutate_five_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let (code, js) = qpcat(&["build", "five-vertex", "--json"]);
    assert_eq!(code, 0, "{}", js);
    let file = dir.path().join("q5.json");
    std::fs::write(&file, &js).unwrap();
    let (code, out) = qpcat(&["mutate", "--input", file.to_str().unwrap(), "--seq", "5,4,3,2", "--json"]);
    assert_eq!(code, 0, "{}", out);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["acyclic"], true);
}

#[test]
fn jacobian_of_q2222() {
    let dir = tempfile::tempdir().unwrap();
    let (_, js) = qpcat(&["build", "q2222", "--lambda", "L", "--json"]);
    let file = dir.path().join("q.json");
    std::fs::write(&file, &js).unwrap();
    let (code, out) = qpcat(&["jacobian", "--input", file.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0, "{}", out);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["total"], 36);
    assert_eq!(v["dims"], serde_json::json!([6, 12, 12, 6, 0]));
    let (_, out) = qpcat(&["jacobian", "--input", file.to_str().unwrap(), "--truncation", "4"]);
    assert!(out.contains("undetermined"), "{}", out);
}

#[test]
fn potential_text_override() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("tri.json");
    std::fs::write(&file, r#"{"vertices":["1","2","3"],"arrows":[{"id":"x","src":"1","tgt":"2"},{"id":"y","src":"2","tgt":"3"},{"id":"z","src":"3","tgt":"1"}]}"#).unwrap();
    let (code, out) = qpcat(&["jacobian", "--input", file.to_str().unwrap(), "--potential", "z*y*x", "--json"]);
    assert_eq!(code, 0, "{}", out);
    assert!(out.contains("\"total\": 6"), "{}", out);
    let (code, out) = qpcat(&["nondegen", "--input", file.to_str().unwrap(), "--potential", "z*y*x", "--depth", "3"]);
    assert_eq!(code, 0, "{}", out);
    let (code, out) = qpcat(&["rigid", "--input", file.to_str().unwrap(), "--potential", "z*y*x", "--degree", "6"]);
    assert_eq!(code, 0, "{}", out);
    let (code, out) = qpcat(&["mutate", "--input", file.to_str().unwrap(), "--class"]);
    assert_eq!(code, 0, "{}", out);
    assert!(out.contains("classes: 4"), "{}", out);
}

#[test]
fn coxeter_and_qw() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = qpcat(&["qw", "--weights", "2,3,4", "--json"]);
    assert_eq!(code, 0, "{}", out);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    std::fs::write(dir.path().join("star.json"), v["star"].to_string()).unwrap();
    let star = dir.path().join("star.json");
    let word: Vec<String> = v["word"]["letters"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
    let (code, out) = qpcat(&["coxeter", "check", "--quiver", star.to_str().unwrap(), "--word", &word.join(",")]);
    assert_eq!((code, out.trim()), (0, "reduced"));
    let (code, out) = qpcat(&["coxeter", "check", "--quiver", star.to_str().unwrap(), "--word", "o,o"]);
    assert_eq!(code, 1);
    assert!(out.contains("position 2"), "{}", out);
}

#[test]
fn keller_and_qpmutate() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = qpcat(&["keller", "--lambda", "3"]);
    assert_eq!(code, 0, "{}", out);
    assert!(out.contains("after renaming: true"), "{}", out);
    let (_, js) = qpcat(&["build", "squid", "--weights", "2,3,4", "--json"]);
    let file = dir.path().join("s.json");
    std::fs::write(&file, &js).unwrap();
    let (code, out) = qpcat(&["qpmutate", "--input", file.to_str().unwrap(), "--seq", "O,O(c)", "--json"]);
    assert_eq!(code, 0, "{}", out);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["two_acyclic"], true);
}

#[test]
fn verify_paper_exit_codes() {
    let (code, out) = qpcat(&["verify-paper", "--filter", "five-vertex"]);
    assert_eq!(code, 0, "{}", out);
    assert!(out.contains("1/1 checks passed"));
    let (code, _) = qpcat(&["verify-paper", "--filter", "jacobian", "--truncation", "4"]);
    assert_eq!(code, 1);
}

#[test]
fn bad_input_is_an_error() {
    let (code, out) = qpcat(&["build", "q2222", "--lambda", "1"]);
    assert_eq!(code, 2);
    assert!(out.contains("lambda"), "{}", out);
}

#[test]
fn verb_output_feeds_other_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let (_, js) = qpcat(&["build", "five-vertex", "--json"]);
    let q5 = dir.path().join("q5.json");
    std::fs::write(&q5, js).unwrap();
    let (_, js) = qpcat(&["mutate", "--input", q5.to_str().unwrap(), "--seq", "5,4,3,2", "--json"]);
    let out = dir.path().join("out.json");
    std::fs::write(&out, js).unwrap();
    let (code, text) = qpcat(&["coxeter", "check", "--quiver", out.to_str().unwrap(), "--word", "1,2,1"]);
    assert_eq!(code, 0, "{}", text);
    assert!(text.contains("reduced"));
}
