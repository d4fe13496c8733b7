//! End-to-end tests of the binary: frozen outputs for known actions,
//! output determinism, and the exit-code contract.

use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cuntz-ideals"))
}

/// Write `contents` to a temp file and run the binary with the file path
/// substituted for the `@INPUT` placeholder in `args`.
fn run_with_input(args: &[&str], contents: &str) -> Output {
    let mut file = NamedTempFile::new().expect("temp file");
    file.write_all(contents.as_bytes()).expect("write input");
    let path = file.path().to_str().expect("utf-8 path").to_string();
    let args: Vec<String> = args
        .iter()
        .map(|a| if *a == "@INPUT" { path.clone() } else { (*a).to_string() })
        .collect();
    bin().args(&args).output().expect("run binary")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

const Z_WITH_TORSION_WEIGHT: &str = "\
[group]
rank = 1

[action]
omega = [0, 1]
";

const Z4_DOUBLED: &str = "\
[group]
rank = 0
torsion = [4]

[action]
omega = [2, 2]
";

#[test]
fn analyze_reports_the_failing_index_and_exceptional_component() {
    let out = run_with_input(&["analyze", "@INPUT", "--format", "json"], Z_WITH_TORSION_WEIGHT);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(v["simple"], serde_json::json!(false));
    assert_eq!(v["primitive"], serde_json::json!(true));
    assert_eq!(v["condition"]["holds"], serde_json::json!(false));
    assert_eq!(v["condition"]["failing_index"], serde_json::json!(1));
    assert_eq!(v["condition"]["K"], serde_json::json!(1));
    assert_eq!(v["spectrum"], serde_json::json!("N"));
    let spaces: Vec<&str> = v["prim"]
        .as_array()
        .expect("prim array")
        .iter()
        .map(|c| c["space"].as_str().expect("space string"))
        .collect();
    assert_eq!(spaces, vec!["Z x T", "point"]);
}

#[test]
fn analyze_flags_the_simple_case() {
    let input = "\
[group]
rank = 1

[action]
omega = [1, 1]
";
    let out = run_with_input(&["analyze", "@INPUT", "--format", "json"], input);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(v["simple"], serde_json::json!(true));
    assert_eq!(v["condition"]["holds"], serde_json::json!(true));
    assert_eq!(v["spectrum"], serde_json::json!("Z"));
    let spaces: Vec<&str> = v["prim"]
        .as_array()
        .expect("prim array")
        .iter()
        .map(|c| c["space"].as_str().expect("space string"))
        .collect();
    assert_eq!(spaces, vec!["point"]);
}

#[test]
fn ideals_lists_the_diamond_lattice() {
    let out = run_with_input(&["ideals", "@INPUT"], Z4_DOUBLED);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.starts_with("4 ideals over 2 cosets:"), "got: {text}");
    for label in ["{}", "{0, 2}", "{1, 3}", "{0, 1, 2, 3}"] {
        assert!(text.contains(&format!("  {label}\n")), "missing {label} in: {text}");
    }
}

#[test]
fn ideals_draws_the_hasse_diagram() {
    let out = run_with_input(&["ideals", "@INPUT", "--format", "dot"], Z4_DOUBLED);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let dot = stdout_of(&out);
    assert!(dot.starts_with("digraph ideal_lattice {"), "got: {dot}");
    // The diamond: bottom covers both cosets, both cosets cover the top.
    for edge in ["n0 -> n1;", "n0 -> n2;", "n1 -> n3;", "n2 -> n3;"] {
        assert!(dot.contains(edge), "missing {edge} in: {dot}");
    }
    assert!(dot.contains("n3 [label=\"{0, 1, 2, 3}\"];"), "got: {dot}");
}

#[test]
fn ideals_summarizes_when_the_lattice_is_too_large() {
    let input = "\
[group]
rank = 0
torsion = [12]

[action]
omega = [0, 0]
";
    let mut limits = NamedTempFile::new().expect("temp file");
    limits.write_all(b"max_dot_nodes = 16\n").expect("write limits");
    let limits_path = limits.path().to_str().expect("utf-8 path").to_string();
    let out = run_with_input(
        &["ideals", "@INPUT", "--format", "json", "--limits", &limits_path],
        input,
    );
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(v["count"], serde_json::json!("4096"));
    assert_eq!(v["cosets"], serde_json::json!(12));
    assert!(v.get("ideals").is_none(), "should summarize, not list");
}

#[test]
fn kgroups_of_a_cyclic_dual_group_are_explicit() {
    let input = "\
[group]
rank = 0
torsion = [3]

[action]
omega = [1, 1]
";
    let out = run_with_input(&["kgroups", "@INPUT", "--format", "json"], input);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(
        v,
        serde_json::json!({
            "K0": {"factors": [7], "free_rank": 0},
            "K1": {"free_rank": 0},
        })
    );
}

#[test]
fn kgroups_of_an_infinite_dual_group_are_a_presentation() {
    let input = "\
[group]
rank = 1

[action]
omega = [1, 1]
";
    let out = run_with_input(&["kgroups", "@INPUT", "--format", "json"], input);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(v["presentation"], serde_json::json!("1 - 2 t"));
}

#[test]
fn set_queries_atoms_and_unions() {
    let input = format!(
        "{Z_WITH_TORSION_WEIGHT}
[query]
expr = atom(0,{{1}})
member = -5
"
    );
    let out = run_with_input(&["set", "@INPUT", "--format", "json"], &input);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(v["invariant"], serde_json::json!(true));
    assert_eq!(v["prime"], serde_json::json!(true));
    assert_eq!(v["bad"], serde_json::json!(true));
    assert_eq!(v["bad_witness"], serde_json::json!("0"));
    assert_eq!(v["member"], serde_json::json!(false));

    let input = format!(
        "{Z_WITH_TORSION_WEIGHT}
[query]
expr = union(atom(0,{{1}}), atom(-7,{{1}}))
member = -5
"
    );
    let out = run_with_input(&["set", "@INPUT", "--format", "json"], &input);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(v["member"], serde_json::json!(true));
}

#[test]
fn set_queries_points_of_the_extended_space() {
    let input = format!(
        "{Z_WITH_TORSION_WEIGHT}
[query]
expr = ypoint(0, 1/3)
predicates = invariant
member = 0, 1/3
"
    );
    let out = run_with_input(&["set", "@INPUT", "--format", "json"], &input);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(v["invariant"], serde_json::json!(true));
    assert_eq!(v["member"], serde_json::json!(true));

    // The same point rotated off itself is no longer a member.
    let input = format!(
        "{Z_WITH_TORSION_WEIGHT}
[query]
expr = rotate(ypoint(0, 1/3), 1/2)
member = 0, 1/3
"
    );
    let out = run_with_input(&["set", "@INPUT", "--format", "json"], &input);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(v["member"], serde_json::json!(false));
}

#[test]
fn set_projects_an_invariant_extended_set() {
    let input = format!(
        "{Z_WITH_TORSION_WEIGHT}
[query]
expr = lift(atom(0,{{2}}))
predicates = invariant, project
"
    );
    let out = run_with_input(&["set", "@INPUT", "--format", "json"], &input);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(v["invariant"], serde_json::json!(true));
    let projected = v["project"].as_str().expect("project string");
    assert!(projected.contains("atom(0,"), "got: {projected}");
}

#[test]
fn selfcheck_passes_and_reports_its_seed() {
    let out = bin().args(["selfcheck", "--seed", "7", "--format", "json"]).output().expect("run");
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json");
    assert_eq!(v["ok"], serde_json::json!(true));
    assert_eq!(v["seed"], serde_json::json!(7));
    assert!(v["comparisons"].as_u64().expect("count") >= 100);
}

#[test]
fn output_is_deterministic_across_runs() {
    for args in [
        vec!["analyze", "@INPUT", "--format", "json"],
        vec!["ideals", "@INPUT", "--format", "dot"],
    ] {
        let a = run_with_input(&args, Z4_DOUBLED);
        let b = run_with_input(&args, Z4_DOUBLED);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "non-deterministic output for {args:?}");
    }
}

#[test]
fn exit_code_contract() {
    // 2: malformed input.
    let out = run_with_input(&["analyze", "@INPUT"], "bogus\n");
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));

    // 2: DOT requested from a command with no graph.
    let out = run_with_input(&["analyze", "@INPUT", "--format", "dot"], Z4_DOUBLED);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));

    // 3: resource limit (rank above the cap).
    let input = "\
[group]
rank = 5

[action]
omega = [(1,0,0,0,0), (0,1,0,0,0)]
";
    let out = run_with_input(&["analyze", "@INPUT"], input);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr_of(&out));

    // 4: a query that needs a finite dual group.
    let out = run_with_input(&["ideals", "@INPUT"], Z_WITH_TORSION_WEIGHT);
    assert_eq!(out.status.code(), Some(4), "stderr: {}", stderr_of(&out));

    // 5: prime asked of a non-invariant set.
    let input = "\
[group]
rank = 0
torsion = [4]

[action]
omega = [2, 2]

[query]
expr = elems{0}
predicates = prime
";
    let out = run_with_input(&["set", "@INPUT"], input);
    assert_eq!(out.status.code(), Some(5), "stderr: {}", stderr_of(&out));
}
