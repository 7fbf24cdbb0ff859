use std::process::{Command, Output};

fn qform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qform"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("QFORM_SEED")
        .output()
        .expect("run qform")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

#[test]
fn reference_corpus_exits_zero() {
    let o = qform(&["verify", "corpus", "corpus/reference.corpus"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("0 failed\n"));
}

#[test]
fn failing_corpus_exits_one_and_names_the_record() {
    let o = qform(&["--format", "machine", "verify", "corpus", "tests/data/failing.corpus"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("record=gap-product-floor-is-not-i1 status=fail expected=exact_4 got=exact_8"), "{out}");
    assert!(out.contains("record=gap-factor-i1 status=pass"));
    assert!(out.ends_with("pass=1 fail=1\n"));
}

#[test]
fn empty_corpus_prints_only_the_header() {
    let o = qform(&["--format", "machine", "verify", "corpus", "tests/data/empty.corpus"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "report=qform version=1\n");
}

#[test]
fn parse_errors_exit_two() {
    assert_eq!(qform(&["eval", "<1,"]).status.code(), Some(2));
    assert_eq!(qform(&["eval", "<1,z>", "--field", "Q[[x]]"]).status.code(), Some(2));
    assert_eq!(qform(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(qform(&["verify", "corpus", "tests/data/missing.corpus"]).status.code(), Some(2));
}

#[test]
fn property_reports_are_deterministic() {
    let args = ["--format", "machine", "verify", "properties", "--seed", "99", "--cases", "30"];
    let (a, b) = (qform(&args), qform(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().filter(|l| l.starts_with("record=")).count(), 6);
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_qform"));
        c.args(["verify", "properties", "--cases", "5"]);
        match seed {
            Some(s) => c.env("QFORM_SEED", s),
            None => c.env_remove("QFORM_SEED"),
        };
        c.output().expect("run qform")
    };
    assert_eq!(run(Some("5")).status.code(), Some(0));
    assert_eq!(stdout(&run(None)), stdout(&qform(&["verify", "properties", "--cases", "5", "--seed", "20240917"])));
}

#[test]
fn single_form_commands() {
    let o = qform(&["eval", "pf(-1,-1) (*) <1,1,1,7>"]);
    assert!(stdout(&o).contains("dim: 16"));
    let o = qform(&["--format", "machine", "i1-bounds", "<1,1,1,7>"]);
    assert!(stdout(&o).starts_with("i1=exact_1\n"), "{}", stdout(&o));
    let o = qform(&["maxsplit", "<1,1,1> (*) (<1> (+) pf(x,y))", "--field", "Q[[x,y]]"]);
    let out = stdout(&o);
    assert!(out.starts_with("maxsplit: no\n") && out.contains("R9"), "{out}");
    let o = qform(&["isometric", "<1,1>", "<2,2>"]);
    assert_eq!(stdout(&o), "isometric: true\n");
    let o = qform(&["neighbor", "<1,1,1>", "--pfister", "pf(-1,-1)"]);
    assert!(stdout(&o).contains("complement: <1> over Q"));
    let o = qform(&["witt", "<1,-1,3>"]);
    assert_eq!(stdout(&o), "witt_index: 1\nanisotropic_part: <3> over Q\n");
}
