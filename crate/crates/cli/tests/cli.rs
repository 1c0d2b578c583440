use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seminorm-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn every_demo_passes() {
    for id in ["thm4", "thm5", "ex1", "ex2", "ex3", "ex4", "incomplete"] {
        let o = run(&["demo", id, "--n-max", "20"]);
        assert_eq!(o.status.code(), Some(0), "{id}:\n{}", stdout(&o));
        assert!(stdout(&o).trim_end().ends_with("overall: PASS"), "{id}");
    }
}

#[test]
fn json_output_carries_the_schema() {
    let o = run(&["demo", "incomplete", "--n-max", "10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["schema"], "seminorm-lab/1");
    assert_eq!(doc["overall"], "PASS");
    assert!(doc["sections"].as_array().is_some_and(|s| !s.is_empty()));
}

#[test]
fn csv_sweep_rows() {
    let o = run(&["demo", "ex3", "--n-max", "10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("section,n,check,lhs,relation,rhs,lhs_approx,rhs_approx,verdict")
    );
    assert!(text.contains(",1/10@n=4,beta*N1(x_n) > N2(x_n),1/10,>,1/16,0.1,0.0625,PASS"));
}

#[test]
fn usage_errors_exit_2() {
    let o = run(&["demo", "thm6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["demo", "thm4", "--n-max", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("n_max must be at least 2"));
    let o = run(&["bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_point_at_the_offending_position() {
    let o = run(&["check", "axioms", "--spec", "sum(l1,lnorm)"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("at position 7"), "{err}");
    assert!(err.contains("sum(l1,lnorm)\n       ^"), "{err}");
}

#[test]
fn axioms_and_majorization() {
    let o = run(&[
        "check",
        "axioms",
        "--spec",
        "pullback:linf:F(f=diag(1/i))",
        "--samples",
        "200",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&[
        "check",
        "majorize",
        "--lower",
        "linf",
        "--upper",
        "l1",
        "--samples",
        "200",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "check",
        "majorize",
        "--lower",
        "l1",
        "--upper",
        "linf",
        "--samples",
        "200",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("overall: FAIL (first failure: majorization, 200 samples)"));
}

#[test]
fn quotient_distance() {
    let o = run(&[
        "check", "quotient", "--norm", "l1", "--basis", "[e1+e2]", "--point", "e1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("note: value = 1\n"));
    let o = run(&[
        "check", "quotient", "--norm", "linf", "--basis", "[e1+e2]", "--point", "e1",
    ]);
    assert!(stdout(&o).contains("note: value = 1/2 (≈ 0.5)\n"));
    let o = run(&[
        "check", "quotient", "--norm", "coord:1", "--basis", "[e1]", "--point", "e1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("only l1, linf and weighted l1"));
}

#[test]
fn equivalence_sweep() {
    let o = run(&[
        "check",
        "equivalence",
        "--n1",
        "linf",
        "--n2",
        "weighted:2^-i",
        "--beta",
        "1/1000",
        "--gamma",
        "1",
        "--witness",
        "canonical-basis",
        "--n-max",
        "30",
        "--sweep",
        "1,1/1000",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("1/1000@n=10"));
}

#[test]
fn lp_solve_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lp.json");
    fs::write(
        &path,
        r#"{"objective":["1","1"],"constraint_matrix":[["1","2"],["3","1"]],"rhs":["2","3"],
            "row_kinds":[">=",">="],"variable_bounds":["nonnegative","nonnegative"]}"#,
    )
    .unwrap();
    let file = path.to_str().unwrap();
    let o = run(&["lp", "solve", file, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["outcome"]["status"], "optimal");
    assert_eq!(doc["outcome"]["value"], "7/5");
    assert_eq!(doc["certificate_verifies"], true);
    let o = run(&["check", "lp", file]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    fs::write(&path, r#"{"objective":["1"],"constraint_matrix":[["1"]],"rhs":["1","2"],"row_kinds":["<="],"variable_bounds":["free"]}"#).unwrap();
    assert_eq!(run(&["lp", "solve", file]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let a = run(&["demo", "thm5", "--n-max", "8", "--format", "json"]);
    let b = run(&["demo", "thm5", "--n-max", "8", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&[
        "demo",
        "thm5",
        "--n-max",
        "8",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read(&path).unwrap(), a.stdout);
}
