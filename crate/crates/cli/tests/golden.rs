use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

use torus_curves_cli::run_with;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_torus-curves"))
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["torus-curves"];
    argv.extend_from_slice(args);
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("{e}: {s}"))
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let corpus = [
        ("realizable.json", r#"{"n":3,"entries":[2,2,4]}"#, &["check"][..], 0),
        ("six.json", r#"{"n":3,"entries":[6,10,14]}"#, &["check"], 1),
        ("zero.json", r#"{"n":3,"entries":[3,2,0]}"#, &["check"], 1),
        ("meta.json", r#"{"n":2,"entries":[5],"metadata":{"source":"hand"}}"#, &["check"], 0),
        ("short.json", r#"{"n":3,"entries":[1,2]}"#, &["check"], 2),
        ("broken.json", r#"{"n":3,"entries":[1,2,"#, &["check"], 2),
        ("float.json", r#"{"n":2,"entries":[2.5]}"#, &["check"], 2),
        ("extra.json", r#"{"n":2,"entries":[1],"m":1}"#, &["check"], 2),
        ("six.json", r#"{"n":3,"entries":[6,10,14]}"#, &["solve"], 0),
        ("six.json", r#"{"n":3,"entries":[6,10,14]}"#, &["decompose"], 0),
        ("four.json", r#"{"n":4,"entries":[1,1,1,2,1,-1]}"#, &["decompose"], 2),
        ("untriangle.json", r#"{"n":3,"entries":[2,3,4]}"#, &["toz"], 2),
        ("zero.json", r#"{"n":3,"entries":[3,2,0]}"#, &["oracle"], 2),
        ("huge.json", r#"{"n":2,"entries":[99999999]}"#, &["oracle"], 2),
        ("realizable.json", r#"{"n":3,"entries":[2,2,4]}"#, &["oracle"], 0),
    ];
    for (name, body, args, want) in corpus {
        let path = write(&dir, name, body);
        let mut argv: Vec<&str> = args.to_vec();
        argv.push(&path);
        let (code, out, err) = run(&argv);
        assert_eq!(code, want, "{args:?} {body}\nstdout: {out}\nstderr: {err}");
        if want == 2 {
            assert!(err.starts_with("error:"), "{err}");
            assert!(out.is_empty());
        } else {
            json(&out);
        }
    }
    assert_eq!(run(&["check", "/nonexistent/scheme.json"]).0, 2);
    assert_eq!(run(&["bogus"]).0, 2);
    assert_eq!(run(&["farey"]).0, 2);
    assert_eq!(run(&["farey", "--d", "0"]).0, 2);
    assert_eq!(run(&["farey", "--d", "3", "--jobs", "0"]).0, 2);
    assert_eq!(run(&["endemic", "--p", "3", "--q", "3"]).0, 2);
    assert_eq!(run(&["endemic", "--p", "3", "--q", "9"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn process_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "not json");
    let no = write(&dir, "no.json", r#"{"n":3,"entries":[6,10,14]}"#);
    let yes = write(&dir, "yes.json", r#"{"n":3,"entries":[1,1,1]}"#);
    for (path, want) in [(&bad, 2), (&no, 1), (&yes, 0)] {
        let o = bin().args(["check", path]).output().unwrap();
        assert_eq!(o.status.code(), Some(want), "{path}");
    }
    let o = bin().args(["check", &bad]).output().unwrap();
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed JSON"));
}

#[test]
fn check_six_ten_fourteen() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "s.json", r#"{"n":3,"entries":[6,10,14]}"#);
    let (code, out, _) = run(&["check", &path]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["status"], "not_torus");
    assert_eq!(v["reasons"].as_array().unwrap().len(), 1);
    assert_eq!(v["reasons"][0]["kind"], "failed_toz");
    assert_eq!(v["reasons"][0]["prime"], 2);
    assert!(v.get("witness").is_none());
}

#[test]
fn check_realizable_has_verified_witness() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "s.json", r#"{"n":4,"entries":[1,1,1,2,1,-1]}"#);
    let (code, out, _) = run(&["check", &path]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["status"], "torus");
    let w: Vec<(i64, i64)> = serde_json::from_value(v["witness"].clone()).unwrap();
    let entries = [1, 1, 1, 2, 1, -1];
    let mut k = 0;
    for j in 1..4 {
        for i in 0..j {
            assert_eq!(w[i].0 * w[j].1 - w[j].0 * w[i].1, entries[k]);
            k += 1;
        }
    }
}

#[test]
fn toz_is_an_exact_string() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "s.json", r#"{"n":4,"entries":[9,9,9,6,3,-3]}"#);
    let (code, out, _) = run(&["toz", &path]);
    assert_eq!(code, 0);
    let v = json(&out);
    let three = v["primes"].as_array().unwrap().iter().find(|p| p["prime"] == 3).unwrap();
    assert_eq!(three["total"], "7/3");
    let checked: Vec<u64> = v["checked"].as_array().unwrap().iter().map(|c| c["prime"].as_u64().unwrap()).collect();
    assert_eq!(checked, vec![2, 3]);
}

#[test]
fn farey_seven() {
    let (code, out, _) = run(&["farey", "--d", "7", "--jobs", "2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["size"], 10);
    let w: Vec<[i64; 2]> = serde_json::from_value(v["witness"].clone()).unwrap();
    assert_eq!(w.len(), 10);
    for (a, x) in w.iter().enumerate() {
        for y in &w[a + 1..] {
            let i = (x[0] * y[1] - x[1] * y[0]).abs();
            assert!((1..=7).contains(&i), "{x:?} {y:?}");
        }
    }
}

#[test]
fn solve_lists_orbits_and_honours_kappa() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "s.json", r#"{"n":3,"entries":[4,6,10]}"#);
    let (code, out, _) = run(&["solve", &path]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["xy"]["x"], 1);
    assert_eq!(v["xy"]["y"], 1);
    let allowed: Vec<i64> = serde_json::from_value(v["orbits"]["allowed_kappa"].clone()).unwrap();
    assert_eq!(allowed, vec![0]);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 1);

    for (k, sys) in [("0", "[[1,0],[5,4],[5,6]]"), ("2", "[[1,0],[9,4],[11,6]]")] {
        let (code, out, _) = run(&["solve", &path, "--kappa", k]);
        assert_eq!(code, 0);
        let v = json(&out);
        assert_eq!(v["witnesses"][0]["kappa"].to_string(), k);
        assert_eq!(v["witnesses"][0]["system"], json(sys));
    }

    let (code, _, err) = run(&["solve", &path, "--kappa", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("kappa = "), "{err}");
}

#[test]
fn solve_lifts_through_zero_reduction() {
    let dir = TempDir::new().unwrap();
    // curve 3 repeats curve 1
    let path = write(&dir, "s.json", r#"{"n":3,"entries":[1,0,-1]}"#);
    let (code, out, _) = run(&["solve", &path]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["reduced"]["n"], 2);
    let sys: Vec<(i64, i64)> = serde_json::from_value(v["witnesses"][0]["system"].clone()).unwrap();
    assert_eq!(sys.len(), 3);
    assert_eq!(sys[0], sys[2]);
}

#[test]
fn decompose_six_ten_fourteen() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "s.json", r#"{"n":3,"entries":[6,10,14]}"#);
    let (code, out, _) = run(&["decompose", &path]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["kind"], "split");
    let l: Vec<i64> = serde_json::from_value(v["left"]["entries"].clone()).unwrap();
    let r: Vec<i64> = serde_json::from_value(v["right"]["entries"].clone()).unwrap();
    assert_eq!(l.iter().zip(&r).map(|(a, b)| a + b).collect::<Vec<_>>(), vec![6, 10, 14]);
    assert!(v["left_witness"].is_array() && v["right_witness"].is_array());
}

#[test]
fn endemic_with_search() {
    let (code, out, _) = run(&["endemic", "--p", "3", "--q", "5", "--search-bound", "2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["scheme"]["entries"], json("[5,15,15,15,15,3]"));
    assert_eq!(v["verdict"]["status"], "not_torus");
    assert_eq!(v["search"]["found"], false);
}

#[test]
fn render_writes_svg() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "s.json", r#"{"n":3,"entries":[2,2,4]}"#);
    let svg = dir.path().join("w.svg");
    let (code, _, _) = run(&["render", &path, "--out", svg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains(r#"width="512" height="512""#));
    assert_eq!(text.matches("<path").count(), 3);

    let no = write(&dir, "no.json", r#"{"n":3,"entries":[6,10,14]}"#);
    assert_eq!(run(&["render", &no, "--out", svg.to_str().unwrap()]).0, 1);
    let unwritable = Path::new("/nonexistent/dir/w.svg");
    assert_eq!(run(&["render", &path, "--out", unwritable.to_str().unwrap()]).0, 2);
}
