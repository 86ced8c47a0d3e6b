use std::path::{Path, PathBuf};
use std::process::Command;

use proptest::prelude::*;
use webtensor_cli::manifest::Entries;
use webtensor_cli::{parse_manifest, run, ErrorKind, Manifest, Outcome};
use webtensor_core::fixtures;
use webtensor_core::suites::COMMANDS;
use webtensor_core::{Model, Rat};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.toml"))
}

fn webtensor(args: &[&str]) -> Outcome {
    run(std::iter::once("webtensor").chain(args.iter().copied()))
}

fn on(command: &str, name: &str, flags: &[&str]) -> Outcome {
    let path = fixture(name);
    let mut args = vec![command, path.to_str().unwrap()];
    args.extend_from_slice(flags);
    webtensor(&args)
}

fn load(name: &str) -> Model<Rat> {
    parse_manifest(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap().model().unwrap()
}

fn same_model(a: &Model<Rat>, b: &Model<Rat>) -> bool {
    a.name == b.name && a.split == b.split && a.jet.r() == b.jet.r() && a.jet.s() == b.jet.s()
}

const SHIPPED: [&str; 7] = ["sl2-a", "sl2-b", "sl2-b-r", "sl2r", "heisenberg", "abelian", "sl2-group"];

#[test]
fn shipped_manifests_match_the_library_fixtures() {
    for (name, model) in SHIPPED.iter().zip(fixtures::all_fixtures()) {
        assert!(same_model(&load(name), &model), "{name}");
    }
    let a = parse_manifest(&std::fs::read_to_string(fixture("sl2-a")).unwrap()).unwrap();
    assert_eq!((a.dim, a.v_dim), (3, 2));
}

#[test]
fn identities_pass_on_fixture_a() {
    let out = on("identities", "sl2-a", &[]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.lines().last().unwrap().ends_with(": PASS"));
    assert!(!out.stdout.contains("FAIL"));
}

#[test]
fn curved_sl2_is_reported_not_hexagonal_without_failing() {
    let out = on("hexagonal", "sl2r", &["--format", "records"]);
    assert_eq!(out.code, 0);
    let lines: Vec<serde_json::Value> = out.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let verdict = lines.iter().find(|l| l["check"] == "verdict").unwrap();
    assert_eq!(verdict["actual"], "not hexagonal");
    assert!(lines.iter().any(|l| l["check"] == "cyclic-r-condition" && l["witness"] == serde_json::json!([1, 1, 2]) && l["actual"] == "(0, -2, 0)"));
}

#[test]
fn jacobi_violation_fails_with_a_witness_triple() {
    let out = on("validate", "jacobi-violation", &["--format", "records"]);
    assert_eq!(out.code, 1);
    let jacobi: serde_json::Value = out.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).find(|l: &serde_json::Value| l["check"] == "jacobi").unwrap();
    assert_eq!(jacobi["status"], "fail");
    assert_eq!(jacobi["witness"], serde_json::json!([1, 2, 3]));
    for cmd in COMMANDS {
        assert_eq!(on(cmd, "jacobi-violation", &[]).code, 1, "{cmd}");
    }
}

#[test]
fn strict_paper_turns_errata_into_failure() {
    let lenient = on("oracle-check", "sl2-b-r", &[]);
    let strict = on("oracle-check", "sl2-b-r", &["--strict-paper"]);
    assert_eq!((lenient.code, strict.code), (0, 1));
    assert!(lenient.stdout.contains("ERRATUM  closed-form-P-printed"));
    assert_eq!(on("oracle-check", "sl2-a", &["--strict-paper"]).code, 0);
}

#[test]
fn every_fixture_and_command_exits_zero() {
    for name in SHIPPED.iter().chain(["curved-jet"].iter()) {
        for cmd in COMMANDS {
            let out = on(cmd, name, &[]);
            assert_eq!(out.code, 0, "{cmd} {name}:\n{}", out.stdout);
            assert!(out.stderr.is_empty());
        }
    }
}

#[test]
fn input_errors_exit_two() {
    let bad = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = bad.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let range = write("range.toml", "dim = 3\nv_dim = 2\nbrackets = [[1, 2, 0, \"1\"]]\n");
    let syntax = write("syntax.toml", "dim = 3\nv_dim = [\n");
    let rational = write("rat.toml", "dim = 3\nv_dim = 2\nR = [[1, 1, 3, \"1.5\"]]\n");
    let sl2 = fixture("sl2-a");
    let sl2 = sl2.to_str().unwrap();
    for args in [
        vec!["tensors", range.as_str()],
        vec!["tensors", syntax.as_str()],
        vec!["tensors", rational.as_str()],
        vec!["tensors", "/nonexistent/manifest.toml"],
        vec!["transmogrify", sl2],
        vec!["tensors"],
        vec![],
        vec!["tensors", sl2, "--format", "xml"],
        vec!["tensors", sl2, "--loud"],
    ] {
        let out = webtensor(&args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(out.stdout.is_empty() && !out.stderr.is_empty(), "{args:?}");
    }
    let out = webtensor(&["tensors", range.as_str()]);
    assert!(out.stderr.contains("line 3") && out.stderr.contains("index out of range"), "{}", out.stderr);
    assert_eq!(webtensor(&["--help"]).code, 0);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for name in ["sl2-b-r", "curved-jet", "sl2-group"] {
        for cmd in COMMANDS {
            for format in ["human", "records"] {
                let flags = ["--format", format];
                assert_eq!(on(cmd, name, &flags), on(cmd, name, &flags), "{cmd} {name} {format}");
            }
        }
    }
}

#[test]
fn records_have_stable_fields() {
    let keys = ["model", "suite", "check", "status", "witness", "expected", "actual", "detail"];
    let out = on("oracle-check", "sl2-b-r", &["--format", "records", "--strict-paper"]);
    let lines: Vec<serde_json::Value> = out.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    for line in &lines {
        let obj = line.as_object().unwrap();
        let mut sorted = keys;
        sorted.sort_unstable();
        assert_eq!(obj.keys().map(String::as_str).collect::<Vec<_>>(), sorted);
        assert!(["pass", "fail", "erratum", "info"].contains(&obj["status"].as_str().unwrap()));
    }
    for raw in out.stdout.lines() {
        let positions: Vec<usize> = keys.iter().map(|k| raw.find(&format!("\"{k}\":")).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{raw}");
    }
    let last = lines.last().unwrap();
    assert_eq!((last["check"].as_str(), last["status"].as_str()), (Some("summary"), Some("fail")));
    let p = lines.iter().find(|l| l["check"] == "closed-form-P-printed").unwrap();
    assert_eq!(p["status"], "erratum");
    assert_eq!(p["witness"], serde_json::json!([1, 1, 1, 1]));
}

#[test]
fn binary_exit_codes_match_the_library() {
    let bin = env!("CARGO_BIN_EXE_webtensor");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    let (ok, bad) = (fixture("sl2r"), fixture("jacobi-violation"));
    assert_eq!(status(&["hexagonal", ok.to_str().unwrap()]), Some(0));
    assert_eq!(status(&["validate", bad.to_str().unwrap()]), Some(1));
    assert_eq!(status(&["validate", "/nonexistent.toml"]), Some(2));
}

#[test]
fn empty_brackets_give_an_abelian_algebra() {
    let m = parse_manifest("name = \"flat\"\ndim = 4\nv_dim = 2\nbrackets = []\n").unwrap();
    assert!(m.model().unwrap().split.algebra().is_abelian());
    let e = parse_manifest("dim = 3\nv_dim = 2\nbrackets = [[1, 2, 0, \"1\"]]\n").unwrap_err();
    assert_eq!(e.kind, ErrorKind::IndexOutOfRange);
}

fn rational() -> impl Strategy<Value = String> {
    (-9i64..=9, 1i64..=6).prop_map(|(p, q)| if q == 1 { p.to_string() } else { format!("{p}/{q}") })
}

fn manifest() -> impl Strategy<Value = Manifest> {
    (1i64..=6, "[a-z0-9 \"\\\\_-]{0,12}").prop_flat_map(|(dim, name)| {
        (1..=dim).prop_flat_map(move |v_dim| {
            let name = name.clone();
            let any = 1..=dim;
            let v = 1..=v_dim;
            let h = (v_dim + 1)..=dim.max(v_dim + 1);
            let brackets = prop::collection::vec((prop::collection::vec(any, 3), rational()), 0..8);
            let r = prop::collection::vec((prop::collection::vec(v.clone(), 2), h.clone(), rational()), 0..5);
            let s = prop::collection::vec((prop::collection::vec(v, 3), h, rational()), 0..5);
            (brackets, r, s).prop_filter_map("conflicting entries", move |(brackets, r, s)| {
                let keep_h = |rows: Vec<(Vec<i64>, i64, String)>| {
                    rows.into_iter()
                        .filter(|(_, a, _)| *a <= dim)
                        .map(|(mut idx, a, c)| {
                            idx.push(a);
                            (idx, c)
                        })
                        .collect()
                };
                let entries = Entries { brackets, r: keep_h(r), s: keep_h(s) };
                Manifest::from_entries(&name, dim, v_dim, &entries).ok()
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn emitted_manifests_parse_back(m in manifest()) {
        let text = m.emit();
        let back = parse_manifest(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.emit(), text);
        back.model().unwrap();
    }

    #[test]
    fn parsing_never_panics(text in "[a-zA-Z0-9_=\\[\\], \"/\\n-]{0,80}") {
        let _ = parse_manifest(&text);
    }
}
