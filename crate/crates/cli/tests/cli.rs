use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidwitt"))
        .args(args)
        .env_remove("RIGIDWITT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = run(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    v
}

#[test]
fn pfister_number_of_the_generic_four_dimensional_form() {
    let o = run(&["pfister-number", "--field", "F3[t1,t2]", "--form", "<1,t1,t2,t1*t2>", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("GP_2 = 1\n"), "{text}");
    assert!(text.contains("verified: true"));

    let v = json(&["pfister-number", "--field", "F3[t1,t2]", "--form", "<1,t1,t2,t1*t2>", "--n", "2", "--unscaled"]);
    assert_eq!(v["gp"], 1);
    assert_eq!(v["p"], 1);
    assert_eq!(v["certificate"]["terms"].as_array().unwrap().len(), 1);
}

#[test]
fn analyze_hyperbolic_plane() {
    let v = json(&["analyze", "--field", "R[]", "--form", "<1,-1>"]);
    assert_eq!(v["status"], "hyperbolic");
    assert_eq!(v["witt_index"], 1);
    assert_eq!(v["anisotropic_part"], "<>");
    let text = stdout(&run(&["analyze", "--field", "R[]", "--form", "<1,-1>"]));
    assert!(text.contains("status: hyperbolic") && text.contains("Witt index: 1"));
}

#[test]
fn bounds_csv_ends_at_sixteen() {
    let o = run(&["bounds", "--n", "3", "--dmax", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("16,3,"), "{last}");
    assert!(text.lines().next().unwrap().starts_with("d,bound,"));
}

#[test]
fn decompose_recombines() {
    let v = json(&["decompose", "--field", "F3[t1,t2]", "--form", "<1,t1,t2,-t1*t2>", "--at", "t2"]);
    assert_eq!(v["recombines"], true);
    assert!(v["t"].as_str().unwrap().contains("t2"));
}

#[test]
fn classify_rejects_wrong_dimension() {
    let o = run(&["classify", "--field", "F3[t1,t2,t3]", "--form", "<<t1,t2,t3>>", "--dim", "14"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["bounds", "--n", "3"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", "--field", "F3[t2]", "--form", "<1>"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--field", "F3[t1]", "--form", "<t3>"]).status.code(), Some(2));
    assert_eq!(run(&["pfister-number", "--field", "F3[t1]", "--form", "<1,t1>", "--n", "2"]).status.code(), Some(3));
    let capped = run(&[
        "pfister-number", "--field", "F3[t1,t2,t3,t4]", "--form", "<1,t1,t2,t3,t4,-t1*t2*t3*t4>", "--n", "2", "--depth-cap", "1",
    ]);
    assert_eq!(capped.status.code(), Some(4));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_rigidwitt"))
        .args(["bounds", "--n", "2", "--dmax", "4"])
        .env("RIGIDWITT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(1));
}

#[test]
fn tabulate_small_sweep() {
    let o = run(&["tabulate", "--field", "F3[t1,t2,t3]", "--n", "2", "--dims", "4,6", "--samples", "5", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("4,4,4,5,"));
    assert!(rows[1].starts_with("6,6,6,5,"));
}

fn without_timings(s: &str) -> String {
    s.lines().map(|l| l.rsplit_once(" (").map_or(l, |(head, _)| head)).collect::<Vec<_>>().join("\n")
}

#[test]
fn verify_is_deterministic_for_a_seed() {
    let a = run(&["verify", "generic-i2", "--seed", "7"]);
    let b = run(&["verify", "generic-i2", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(without_timings(&stdout(&a)), without_timings(&stdout(&b)));
    assert!(stdout(&a).lines().all(|l| !l.starts_with("FAIL")));
    let v = json(&["verify", "tensor-lift", "--seed", "7"]);
    assert_eq!(v["pass"], true);
}

#[test]
fn classify_both_dimensions() {
    let field = "F3[t1,t2,t3,t4,t5,t6]";
    let v = json(&["classify", "--field", field, "--form", "<<t1,t2,t3>> + -1*<<t4,t5,t6>>", "--dim", "14"]);
    assert_eq!(v["gp3"], 2);
    assert_eq!(v["equivalence_holds"], true);
    assert_eq!(v["flagged"], false);
    let v = json(&["classify", "--field", field, "--form", "<<t1,t2,t3>> + <<t4,t5,t6>>", "--dim", "16"]);
    assert_eq!(v["gp3"], 2);
    assert_eq!(v["gp2_decomposition"].as_array().unwrap().len(), 4);
    assert!(v["quadratic"].is_null());
}
