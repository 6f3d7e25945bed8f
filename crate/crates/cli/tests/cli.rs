use std::process::Command as Proc;

use proptest::prelude::*;
use supergrade_cli::{emit, exit_code, parse_config, run, ConfigError, Format, RunConfig};

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_supergrade"))
}

#[test]
fn grammar_instance() {
    let cfg = parse_config("group=Z2xZ4 sig=2,2 theta=(0,0),(1,0),(0,1),(1,1)").unwrap();
    assert_eq!(cfg.get("group"), Some("Z2xZ4"));
    assert_eq!(cfg.sig().unwrap().size(), 4);
}

#[test]
fn theta_length_is_semantic_error() {
    let err = parse_config("group=Z2 sig=1,1 theta=0,1,1").unwrap_err();
    assert!(matches!(err, ConfigError::Semantic { ref key, .. } if key == "theta"), "{err}");
}

#[test]
fn repeated_blocks_rejected() {
    let err = parse_config("command=verify claim=osp-pairing group=Z2 gs=1,1 p=1,1 q=0,0").unwrap_err();
    assert!(err.to_string().contains("distinctness"), "{err}");
}

#[test]
fn syntax_errors_have_positions() {
    let err = parse_config("group=Z2\n  sig=1,1 oops\n").unwrap_err();
    assert_eq!(
        err,
        ConfigError::Syntax {
            line: 2,
            column: 11,
            message: "expected key=value, found \"oops\"".into()
        }
    );
    let err = parse_config("# comment\ncolour=red").unwrap_err();
    assert!(matches!(err, ConfigError::Syntax { line: 2, column: 1, .. }));
    assert!(matches!(parse_config("group=Z2 group=Z3"), Err(ConfigError::Syntax { column: 10, .. })));
    assert!(matches!(parse_config("bounds=order=0"), Err(ConfigError::Semantic { .. })));
}

#[test]
fn trp_example_passes_exactly() {
    let cfg = parse_config("command=verify claim=trp-product group=Z4 gs=0,1 p=1,1 q=1,1 perm=1,0").unwrap();
    let r = run(&cfg).unwrap();
    assert!(r.passed());
    assert_eq!(r.evidence_kind, supergrade::EvidenceKind::Exact);
}

#[test]
fn queer_minimal_spec_is_bounded() {
    let cfg = parse_config("command=falsify claim=queer-incompatible group=Z2 h=1 gs=0 k=1").unwrap();
    let r = run(&cfg).unwrap();
    assert!(r.passed());
    assert_eq!(r.evidence_kind, supergrade::EvidenceKind::Bounded);
    assert_eq!(r.family_size, Some(64));
}

#[test]
fn text_and_json_agree() {
    let cfg = parse_config("command=falsify claim=pauli-incompatible k=1").unwrap();
    let r = run(&cfg).unwrap();
    let v: serde_json::Value = serde_json::from_str(&emit(&r, Format::Json)).unwrap();
    let text = emit(&r, Format::Text);
    assert!(text.contains(&format!("verdict: {}", v["verdict"].as_str().unwrap())));
    for (i, inst) in v["instances"].as_array().unwrap().iter().enumerate() {
        assert!(text.contains(&format!("[{}] {}", inst["verdict"].as_str().unwrap(), r.instances[i].description)));
    }
    assert_eq!(v["spec_version"], "1");
}

#[test]
fn json_is_deterministic() {
    let cfg = parse_config("command=enumerate group=Z2 n=2 m=2 kind=osp format=json").unwrap();
    let a = emit(&run(&cfg).unwrap(), Format::Json);
    let b = emit(&run(&cfg).unwrap(), Format::Json);
    assert_eq!(a, b);
}

#[test]
fn structures_and_decomposition() {
    let cfg = parse_config("command=structure kind=osp-jordan group=Z2 sig=2,2 theta=0,1,0,1 inv=osp-paired p=1,1 q=1,1")
        .unwrap();
    assert!(run(&cfg).unwrap().passed());
    let cfg = parse_config(
        "command=structure kind=p-jordan group=Z2xZ2xZ2 sig=1,1 theta=(0,0,0),(0,0,1) inv=trp pauli=(1,0,0),(0,1,0)",
    )
    .unwrap();
    let r = run(&cfg).unwrap();
    assert!(r.passed(), "{}", r.to_text());
    assert!(r.instances.iter().any(|i| i.description.starts_with("H(R⊗T)")));
}

#[test]
fn non_graded_structure_is_a_run_error() {
    let cfg = parse_config("command=structure kind=osp-jordan group=Z3 sig=1,2 theta=1,0,0 inv=osp").unwrap();
    let res = run(&cfg);
    assert!(res.is_err());
    assert_eq!(exit_code(&res), 2);
}

#[test]
fn exit_codes() {
    let ok = bin().args(["verify", "--claim", "trp-product", "--group", "Z4", "--gs", "0,1", "--p", "1,1", "--q", "1,1", "--perm", "1,0"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = bin().args(["grade", "--group", "Z2", "--sig", "1,1", "--theta", "0"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("theta"));
    // The transpose-like map moves Pauli components.
    let fail = bin()
        .args(["involution", "--sig", "1,1", "--pauli", "1", "--inv", "trp"])
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));
}

#[test]
fn bounds_from_environment() {
    let out = bin()
        .args(["enumerate", "--group", "Z2", "--n", "2", "--m", "2"])
        .env("SUPERGRADE_BOUNDS", "size=3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bounds"));
}

#[test]
fn config_file_and_flags() {
    let dir = std::env::temp_dir().join(format!("supergrade-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.cfg");
    std::fs::write(&path, "# minimal odd-type spec\ngroup=Z2 h=1\ngs=0 k=1\n").unwrap();
    let out = bin()
        .args(["falsify", "--claim", "queer-incompatible", "--format", "json", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["evidence_kind"], "bounded");
    std::fs::write(&path, "group=Z2\nsig=1,1 theta\n").unwrap();
    let out = bin().args(["grade", "--config"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 9"));
    std::fs::remove_dir_all(&dir).unwrap();
}

fn value_strategy() -> impl Strategy<Value = (String, String)> {
    prop_oneof![
        prop::sample::select(vec!["Z2", "Z4", "Z2xZ2", "Z3"]).prop_map(|g| ("group".to_string(), g.to_string())),
        (0usize..3, 0usize..3)
            .prop_filter("nonempty", |(n, m)| n + m > 0)
            .prop_map(|(n, m)| ("sig".to_string(), format!("{n},{m}"))),
        prop::collection::vec(0usize..4, 1..4)
            .prop_map(|v| ("p".to_string(), v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))),
        prop::sample::select(vec!["osp", "trp", "osp-paired"]).prop_map(|i| ("inv".to_string(), i.to_string())),
        prop::sample::select(vec!["text", "json"]).prop_map(|f| ("format".to_string(), f.to_string())),
        (1u64..40, 1u64..10).prop_map(|(o, s)| ("bounds".to_string(), format!("order={o},size={s}"))),
    ]
}

proptest! {
    #[test]
    fn parse_render_round_trip(entries in prop::collection::vec(value_strategy(), 0..6)) {
        let mut cfg = RunConfig::new();
        for (k, v) in &entries {
            cfg.set(k, v.clone()).unwrap();
        }
        let text = cfg.render();
        let back = parse_config(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.render(), text);
    }
}
