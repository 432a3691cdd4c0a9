use std::fs;
use std::process::{Command, Output};

fn partiality(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partiality"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn check(args: &[&str], stdout: &str, code: i32) {
    let out = partiality(args);
    assert_eq!(String::from_utf8_lossy(&out.stdout), stdout, "{args:?}");
    assert_eq!(out.status.code(), Some(code), "{args:?}");
}

#[test]
fn run_examples() {
    check(&["run", "--fuel", "4", "(\\x. x) 5"], "now 5 steps=1\n", 0);
    check(&["run", "0 1"], "stuck\n", 3);
    check(&["run", "\\x. x"], "now <closure> steps=0\n", 0);
    check(
        &["vm", "(\\f x. f (f x)) (\\n. suc n) 0"],
        "now 2 steps=4\n",
        0,
    );
    check(&["vm", "suc (\\x. x)"], "stuck\n", 3);
}

#[test]
fn omega_from_a_file_times_out() {
    let dir = std::env::temp_dir().join(format!("partiality-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("omega.lam");
    fs::write(&path, "# self-application\n(\\x. x x) (\\x. x x)\n").unwrap();
    let path = path.to_str().unwrap();
    check(&["run", "--fuel", "10", path], "timeout fuel=10\n", 2);
    check(&["vm", "--fuel", "10", path], "timeout fuel=10\n", 2);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn parse_errors_carry_a_position() {
    let out = partiality(&["run", "x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1:1") && err.contains("unbound"), "{err}");

    let out = partiality(&["compile", "(\\x. x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:7"));
}

#[test]
fn compile_prints_a_listing() {
    check(
        &["compile", "(\\x. x) 5"],
        "0: push_clo\n    0: push_var 0\n    1: ret\n1: push_lit 5\n2: apply\n",
        0,
    );
}

#[test]
fn ispositive_examples() {
    check(
        &["ispositive", "--fuel", "10", "1/1"],
        "positive index=3\n",
        0,
    );
    check(
        &["ispositive", "--fuel", "1000", "0/1"],
        "unknown fuel=1000\n",
        2,
    );
    check(
        &["ispositive", "--fuel", "10", "-1/1"],
        "negative index=3\n",
        0,
    );
    check(&["ispositive", "--fuel", "2", "1/1"], "unknown fuel=2\n", 2);
    check(&["ispositive", "1/0"], "", 1);
    check(&["ispositive", "one"], "", 1);
}

#[test]
fn search_examples() {
    check(
        &["search", "--pred", "prime", "--from", "90"],
        "found 97 index=36\n",
        0,
    );
    check(
        &["search", "--pred", "even", "--from", "1", "--step", "2"],
        "unknown fuel=1000\n",
        2,
    );
    check(
        &[
            "search", "--pred", "mod:5:0", "--from", "3", "--fuel", "100",
        ],
        "found 5 index=6\n",
        0,
    );
    check(&["search", "--pred", "nonsense"], "", 1);
    check(&["search"], "", 1);
}

#[test]
fn laws_pass_and_are_deterministic() {
    let first = partiality(&["laws", "--seed", "42"]);
    let second = partiality(&["laws", "--seed", "42"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = String::from_utf8_lossy(&first.stdout);
    assert!(text.ends_with("all suites passed\n"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("suite ")).count(), 8);
}

#[test]
fn injected_non_monotone_functional_is_reported() {
    let out = partiality(&[
        "laws",
        "--seed",
        "1",
        "--fuel",
        "64",
        "--inject-nonmonotone",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("lub precondition violated"), "{text}");
    assert!(!text.contains("all suites passed"));
}
