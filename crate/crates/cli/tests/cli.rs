//! End-to-end CLI behavior: exit codes, report shapes, and the transform
//! subcommands whose output must re-import as a canonical document.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semgraph"))
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn meetings_args() -> Vec<String> {
    let fx = fixtures();
    vec![
        "--ontology".into(),
        fx.join("meetings.ontology").display().to_string(),
        "--nodes".into(),
        fx.join("meetings_nodes.csv").display().to_string(),
        "--links".into(),
        fx.join("meetings_links.csv").display().to_string(),
    ]
}

fn run(args: &[String]) -> Output {
    bin().args(args).output().expect("spawn semgraph")
}

fn ok_stdout(args: &[String]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn usage_errors_exit_one() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["stats", "--no-such-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    for sub in [
        "validate", "stats", "dist", "paths", "relevance", "prune", "coarsen", "project",
        "nullmodel", "detect",
    ] {
        assert!(stdout.contains(sub), "--help must list `{sub}`");
    }
}

#[test]
fn data_errors_exit_two_with_diagnostics() {
    let mut args = vec!["stats".to_string()];
    args.extend(meetings_args());
    args[2] = "/nonexistent/schema.ontology".into();
    let out = run(&args);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/schema.ontology"));

    // malformed file surfaces its line number
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ontology");
    std::fs::write(&bad, "nodetype person\nbogus directive\n").unwrap();
    let fx = fixtures();
    let args = vec![
        "stats".to_string(),
        "--ontology".into(),
        bad.display().to_string(),
        "--nodes".into(),
        fx.join("meetings_nodes.csv").display().to_string(),
        "--links".into(),
        fx.join("meetings_links.csv").display().to_string(),
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bad.ontology:2"), "stderr: {stderr}");
}

#[test]
fn validate_reports_violations_as_data() {
    let mut args = vec!["validate".to_string()];
    args.extend(meetings_args());
    let text = ok_stdout(&args);
    assert!(text.contains("conformant: no violations"));

    // a meeting-meeting link is not allowed by the schema
    let dir = tempfile::tempdir().unwrap();
    let links = dir.path().join("links.csv");
    std::fs::write(
        &links,
        "source,target,type\nalice,summit,attended\nsummit,kickoff,attended\n",
    )
    .unwrap();
    let nodes = dir.path().join("nodes.csv");
    std::fs::write(
        &nodes,
        "id,type\nalice,person\nsummit,meeting\nkickoff,meeting\n",
    )
    .unwrap();
    let fx = fixtures();
    let args = vec![
        "validate".to_string(),
        "--ontology".into(),
        fx.join("meetings.ontology").display().to_string(),
        "--nodes".into(),
        nodes.display().to_string(),
        "--links".into(),
        links.display().to_string(),
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0), "violations are data, not errors");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("violations: 1"));
    assert!(text.contains("summit-kickoff"));
}

#[test]
fn dist_and_paths_render() {
    let mut args = vec!["dist".to_string()];
    args.extend(meetings_args());
    let text = ok_stdout(&args);
    assert!(text.contains("type"));
    assert!(text.contains("person"));

    let mut args = vec!["paths".to_string(), "--removal-impact".to_string()];
    args.extend(meetings_args());
    args.push("--format".into());
    args.push("structured".into());
    let text = ok_stdout(&args);
    assert!(text.contains("source,target,mean,reachable,unreachable"));
    assert!(text.contains("[removal-impact]"));
}

#[test]
fn relevance_report_sections() {
    let mut args = vec![
        "relevance".to_string(),
        "--tau".into(),
        "0.2".into(),
        "--min-s".into(),
        "0.5".into(),
        "--node".into(),
        "alice".into(),
    ];
    args.extend(meetings_args());
    let text = ok_stdout(&args);
    for section in ["[nodes]", "[link-types]", "[outliers]", "[latent]", "[pair-types]"] {
        assert!(text.contains(section), "missing {section} in:\n{text}");
    }
    assert!(text.contains("alice"));
}

#[test]
fn prune_output_reimports() {
    let mut args = vec!["prune".to_string(), "--node".into(), "paris".into()];
    args.extend(meetings_args());
    let text = ok_stdout(&args);
    assert!(!text.contains("paris,city"));
    // former neighbors carry the pruned id under its type name by default
    assert!(text.contains("city=paris"));
    // the emitted document parses back
    let mut import = vec!["validate".to_string(), "--graph".into()];
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("pruned.doc");
    std::fs::write(&doc, &text).unwrap();
    import.push(doc.display().to_string());
    let reread = ok_stdout(&import);
    assert!(reread.contains("conformant"));
}

#[test]
fn coarsen_applies_merge_map() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("merge.map");
    std::fs::write(&map, "person=entity\nmeeting=entity\ncity=place\n").unwrap();
    let mut args = vec![
        "coarsen".to_string(),
        "--merge-map".into(),
        map.display().to_string(),
    ];
    args.extend(meetings_args());
    let text = ok_stdout(&args);
    assert!(text.contains("nodetype entity"));
    assert!(text.contains("nodetype place"));
    assert!(text.contains("alice,entity,"));
    assert!(text.contains("original_type=person"));
}

#[test]
fn project_emits_shared_counts() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("bipartite.doc");
    std::fs::write(
        &doc,
        "[schema]\nnodetype actor\nnodetype film\nlinktype acted-in\nallow actor,acted-in,film\n\
         [nodes]\nid,type,attributes\na1,actor,\na2,actor,\nf1,film,\nf2,film,\n\
         [links]\nsource,target,type,attributes\na1,f1,acted-in,\na2,f1,acted-in,\na1,f2,acted-in,\na2,f2,acted-in,\n",
    )
    .unwrap();
    let args = vec![
        "project".to_string(),
        "--keep".into(),
        "actor".into(),
        "--via".into(),
        "film".into(),
        "--graph".into(),
        doc.display().to_string(),
    ];
    let text = ok_stdout(&args);
    assert!(text.contains("nodetype actor"));
    assert!(text.contains("linktype shares-film"));
    assert!(text.contains("shared_count=2"));
    assert!(text.contains("via=f1|f2"));

    // the meetings graph has a person-person link, so projecting the
    // person/meeting pair violates the bipartite precondition
    let mut args = vec![
        "project".to_string(),
        "--keep".into(),
        "person".into(),
        "--via".into(),
        "meeting".into(),
    ];
    args.extend(meetings_args());
    let out = run(&args);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bipartite"));
}

#[test]
fn detect_summary_and_unreachable_marker() {
    let mut args = vec![
        "detect".to_string(),
        "--source".into(),
        "alice".into(),
        "--target".into(),
        "tokyo".into(),
    ];
    args.extend(meetings_args());
    let text = ok_stdout(&args);
    assert!(text.contains("# detect: source=alice target=tokyo distance=2 nodes=3 links=2"));

    // every alice-tokyo path runs through the summit meeting; excluding
    // that type disconnects the pair
    let mut args = vec![
        "detect".to_string(),
        "--source".into(),
        "alice".into(),
        "--target".into(),
        "tokyo".into(),
        "--exclude-node-type".into(),
        "meeting".into(),
    ];
    args.extend(meetings_args());
    let text = ok_stdout(&args);
    assert!(text.contains("distance=unreachable nodes=0 links=0"), "{text}");

    // summit's clustering is 2/6 (alice-bob and carol-tokyo close two of
    // its six neighbor pairs); a threshold above 1/3 prunes it and carol
    // has no other connection to alice
    let mut args = vec![
        "detect".to_string(),
        "--source".into(),
        "alice".into(),
        "--target".into(),
        "carol".into(),
        "--relevance".into(),
        "--tau".into(),
        "0.35".into(),
    ];
    args.extend(meetings_args());
    let text = ok_stdout(&args);
    assert!(text.contains("distance=unreachable"), "{text}");

    // just below that value the summit connector survives
    let mut args = vec![
        "detect".to_string(),
        "--source".into(),
        "alice".into(),
        "--target".into(),
        "carol".into(),
        "--relevance".into(),
        "--tau".into(),
        "0.3".into(),
    ];
    args.extend(meetings_args());
    let text = ok_stdout(&args);
    assert!(text.contains("distance=2"), "{text}");
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let mut args = vec![
        "stats".to_string(),
        "--output".into(),
        path.display().to_string(),
    ];
    args.extend(meetings_args());
    let text = ok_stdout(&args);
    assert!(text.is_empty(), "report goes to the file, not stdout");
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("yr-mode: literal"));
}
