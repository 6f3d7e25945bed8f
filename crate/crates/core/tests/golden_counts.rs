mod common;

use common::oracle::{count, Counts, Family};
use serde_json::Value;
use supergrade::classify::{enumerate_admissible, Bounds, EnumKind};
use supergrade::FiniteAbelianGroup;

fn fixtures() -> Vec<(String, Value)> {
    let v: Value = serde_json::from_str(include_str!("fixtures/golden_counts.json")).unwrap();
    v.as_object().unwrap().iter().map(|(k, v)| (k.clone(), v.clone())).collect()
}

fn frozen(v: &Value) -> Counts {
    Counts {
        tuples: v["tuples"].as_u64().unwrap() as usize,
        raw: v["raw"].as_u64().unwrap() as usize,
        classes: v["classes"].as_u64().unwrap() as usize,
    }
}

fn orders(name: &str) -> Vec<i64> {
    let g: FiniteAbelianGroup = name.parse().unwrap();
    g.invariant_factors().iter().map(|&n| n as i64).collect()
}

fn kinds(v: &Value) -> (Family, EnumKind) {
    match v["kind"].as_str().unwrap() {
        "osp" => (Family::Osp, EnumKind::Osp),
        "trp" => (Family::Trp, EnumKind::Trp),
        other => panic!("unknown kind {other}"),
    }
}

#[test]
fn oracle_reproduces_fixtures() {
    for (name, v) in fixtures() {
        let (family, _) = kinds(&v);
        let (n, m) = (v["n"].as_u64().unwrap() as usize, v["m"].as_u64().unwrap() as usize);
        assert_eq!(count(&orders(v["group"].as_str().unwrap()), n, m, family), frozen(&v), "{name}");
    }
}

#[test]
fn enumeration_matches_fixtures() {
    for (name, v) in fixtures() {
        let (_, kind) = kinds(&v);
        let group: FiniteAbelianGroup = v["group"].as_str().unwrap().parse().unwrap();
        let (n, m) = (v["n"].as_u64().unwrap() as usize, v["m"].as_u64().unwrap() as usize);
        let e = enumerate_admissible(&group, n, m, kind, &Bounds::default()).unwrap();
        let got = Counts {
            tuples: e.admissible().count(),
            raw: e.raw_count(),
            classes: e.class_count(),
        };
        assert_eq!(got, frozen(&v), "{name}");
        assert!(e.disagreements().is_empty(), "{name}");
    }
}

#[test]
fn oracle_agrees_on_other_groups() {
    for (g, n, m, family, kind) in [
        ("Z2xZ2", 2, 2, Family::Osp, EnumKind::Osp),
        ("Z4", 2, 2, Family::Osp, EnumKind::Osp),
        ("Z3", 1, 2, Family::Osp, EnumKind::Osp),
        ("Z2xZ2", 2, 2, Family::Trp, EnumKind::Trp),
        ("Z3", 3, 3, Family::Trp, EnumKind::Trp),
    ] {
        let group: FiniteAbelianGroup = g.parse().unwrap();
        let e = enumerate_admissible(&group, n, m, kind, &Bounds::default()).unwrap();
        let got = Counts {
            tuples: e.admissible().count(),
            raw: e.raw_count(),
            classes: e.class_count(),
        };
        assert_eq!(got, count(&orders(g), n, m, family), "{g} {n},{m}");
    }
}
