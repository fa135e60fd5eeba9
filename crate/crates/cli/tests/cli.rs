//! End-to-end checks of the binary: exit codes, stream separation, flags.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_acespec");

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn generate_writes_golden_document_to_stdout() {
    let output = run(&["generate", &fixture("trafficlight.xml")]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let golden = fs::read_to_string(fixture("trafficlight.ace")).unwrap();
    assert_eq!(stdout(&output), golden);
    assert!(stderr(&output).is_empty());
}

#[test]
fn generate_output_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.ace");
    let output = run(&[
        "generate",
        &fixture("crossing.xml"),
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert!(stdout(&output).is_empty(), "quiet with --output");
    let golden = fs::read_to_string(fixture("crossing.ace")).unwrap();
    assert_eq!(fs::read_to_string(path).unwrap(), golden);
}

#[test]
fn generate_sections_subset() {
    let output = run(&[
        "generate",
        &fixture("crossing.xml"),
        "--sections",
        "dictionary",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("# Data dictionary"));
    assert!(!text.contains("# Architecture"));
    assert!(!text.contains("# Behavior"));
    assert!(!text.contains("#! name c1"), "no directives for unrendered names");
}

#[test]
fn missing_model_file_is_an_input_error() {
    let output = run(&["generate", "no-such-file.xml"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("cannot read"));
}

#[test]
fn malformed_model_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.xml");
    fs::write(&path, "<model><rootElements/></model>").unwrap();
    let output = run(&["generate", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("xsi:type"), "{}", stderr(&output));
}

#[test]
fn validate_reports_counts_and_succeeds_on_golden() {
    let output = run(&["validate", &fixture("crossing.ace")]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert_eq!(stdout(&output), "ok: 26 sentences, 23 facts\n");
}

#[test]
fn validate_rejects_bad_document_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ace");
    fs::write(&path, "# heading\nSignal is datatype.\n").unwrap();
    let output = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("line 2"), "{}", stderr(&output));
}

#[test]
fn facts_from_model_and_from_document_agree() {
    let from_xml = run(&["facts", &fixture("trafficlight.xml")]);
    let from_ace = run(&["facts", &fixture("trafficlight.ace")]);
    assert_eq!(from_xml.status.code(), Some(0));
    assert_eq!(from_ace.status.code(), Some(0));
    assert_eq!(stdout(&from_xml), stdout(&from_ace));
    assert!(stdout(&from_xml).contains("HasValue(tRed, 40)"));
}

#[test]
fn query_answers_on_stdout() {
    let output = run(&[
        "query",
        &fixture("trafficlight.xml"),
        "-q",
        "What is Signal?",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert_eq!(stdout(&output), "It is a data-type.\n");
}

#[test]
fn query_about_unknown_name_fails_with_question_code() {
    let output = run(&[
        "query",
        &fixture("trafficlight.xml"),
        "-q",
        "How many elements does Phases have?",
    ]);
    assert_eq!(output.status.code(), Some(3));
    assert!(
        stderr(&output).contains("not mentioned in the specification"),
        "{}",
        stderr(&output)
    );
}

#[test]
fn query_repl_reads_stdin_line_by_line() {
    let mut child = Command::new(BIN)
        .args(["query", &fixture("crossing.xml")])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"Is Idle a state?\n\nWhat is c3?\n")
        .unwrap();
    let output = child.wait_with_output().unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert_eq!(stdout(&output), "Yes, it is.\nIt is a channel.\n");
}

#[test]
fn query_repl_keeps_going_after_a_failed_question() {
    let mut child = Command::new(BIN)
        .args(["query", &fixture("crossing.xml")])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"Where is Lamp?\nWhat is Lamp?\n")
        .unwrap();
    let output = child.wait_with_output().unwrap();
    assert_eq!(output.status.code(), Some(3));
    assert_eq!(stdout(&output), "It is a component.\n");
    assert!(stderr(&output).contains("not supported"));
}

#[test]
fn lexicon_flag_extends_vocabulary_for_validation() {
    let dir = tempfile::tempdir().unwrap();
    let lexicon = dir.path().join("extra.lex");
    fs::write(&lexicon, "# project words\nnoun sensor\n").unwrap();
    let doc = dir.path().join("doc.ace");
    fs::write(&doc, "#! name s1\ns1 is a sensor.\n").unwrap();

    let without = run(&["validate", doc.to_str().unwrap()]);
    assert_eq!(without.status.code(), Some(2), "unknown word rejected");

    let with = run(&[
        "validate",
        doc.to_str().unwrap(),
        "--lexicon",
        lexicon.to_str().unwrap(),
    ]);
    assert_eq!(with.status.code(), Some(0), "{}", stderr(&with));
    assert_eq!(stdout(&with), "ok: 1 sentence, 0 facts\n");
}

#[test]
fn lexicon_env_variable_is_a_fallback_for_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let lexicon = dir.path().join("extra.lex");
    fs::write(&lexicon, "noun sensor\n").unwrap();
    let doc = dir.path().join("doc.ace");
    fs::write(&doc, "#! name s1\ns1 is a sensor.\n").unwrap();
    let output = Command::new(BIN)
        .args(["validate", doc.to_str().unwrap()])
        .env("ACESPEC_LEXICON", lexicon.to_str().unwrap())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
}

#[test]
fn broken_lexicon_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let lexicon = dir.path().join("extra.lex");
    fs::write(&lexicon, "noun sensor\nadjective shiny\n").unwrap();
    let output = run(&[
        "validate",
        &fixture("trafficlight.ace"),
        "--lexicon",
        lexicon.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("line 2"), "{}", stderr(&output));
}

#[test]
fn strict_mode_turns_skipped_elements_into_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extras.xml");
    fs::write(
        &path,
        r#"<model name="M" xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance">
  <rootElements xsi:type="model:DataDictionary">
    <typeDefinitions xsi:type="model:Enumeration" name="Signal">
      <members name="Present"/>
    </typeDefinitions>
    <annotations kind="layout"/>
  </rootElements>
</model>
"#,
    )
    .unwrap();

    let lenient = run(&["generate", path.to_str().unwrap()]);
    assert_eq!(lenient.status.code(), Some(0));
    assert!(stderr(&lenient).contains("warning:"), "{}", stderr(&lenient));
    assert!(stderr(&lenient).contains("annotations"));

    let strict = run(&["generate", path.to_str().unwrap(), "--strict"]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(stderr(&strict).contains("strict"), "{}", stderr(&strict));
}

#[test]
fn fixtures_stay_in_sync_with_the_generator() {
    // Guards the checked-in reference documents against template drift.
    for model in ["trafficlight", "crossing"] {
        let output = run(&["generate", &fixture(&format!("{model}.xml"))]);
        assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
        let golden = fs::read_to_string(fixture(&format!("{model}.ace"))).unwrap();
        assert_eq!(stdout(&output), golden, "{model}.ace is stale");
    }
}

#[test]
fn facts_subcommand_distinguishes_inputs_by_extension() {
    let dir = tempfile::tempdir().unwrap();
    let path: &Path = &dir.path().join("doc.txt");
    fs::write(path, "Signal is a datatype.\nIt consists-of one element that is Present.\n")
        .unwrap();
    let output = run(&["facts", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("IsDatatype(Signal)"));
    assert!(text.contains("ElementOf(Present, Signal)"));
}
