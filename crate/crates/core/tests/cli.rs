use std::process::{Command, Output};

use serde_json::Value;

use kronq::basisdec::{Basis, BasisTag, Decomposer};
use kronq::expr::parse;
use kronq::kronrec::KronContext;
use kronq::qtorus::TorusElement;

fn kronq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kronq")).args(args).output().expect("spawn kronq")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn element(v: &Value) -> TorusElement {
    TorusElement::from_json(v).expect("torus element JSON")
}

fn expanded(expr: &str) -> TorusElement {
    KronContext::new().eval(&parse(expr).unwrap())
}

fn tag(v: &Value) -> BasisTag {
    let i = |k: &str| v[k].as_i64().unwrap();
    match v["kind"].as_str().unwrap() {
        "unit" => BasisTag::Unit,
        "cluster" => BasisTag::Cluster { m: i("m"), a: i("a") as u32, b: i("b") as u32 },
        "chebS" => BasisTag::ChebS(i("n") as usize),
        "chebF" => BasisTag::ChebF(i("n") as usize),
        other => panic!("unknown tag kind {other}"),
    }
}

#[test]
fn expand_matches_library() {
    for e in ["x:1", "s:0", "x:-1", "f:2", "x:-2 * x:3"] {
        assert_eq!(element(&json(&kronq(&["expand", e]))), expanded(e), "{e}");
    }
    let x1 = element(&json(&kronq(&["expand", "x:1"])));
    assert_eq!(x1, TorusElement::x([1, 0, 0, 0]));
}

#[test]
fn verify_reports_counts() {
    let out = kronq(&["verify", "exchange", "--N", "3", "--M", "3"]);
    let doc = json(&out);
    assert_eq!(doc["summary"]["ok"], true);
    assert_eq!(doc["summary"]["failed"], 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("passed, 0 failed"));

    let doc = json(&kronq(&["verify", "char", "--n", "2"]));
    assert_eq!(doc["summary"]["ok"], true);

    let doc = json(&kronq(&["verify", "coef", "--N", "0"]));
    assert_eq!(doc["summary"]["total"], 4);
}

#[test]
fn decompose_products() {
    let doc = json(&kronq(&["decompose", "s:1*s:1"]));
    assert_eq!(doc["basis"], "S");
    assert_eq!(doc["residual"], 0);
    assert_eq!(doc["parts"].as_array().unwrap().len(), 2);

    let doc = json(&kronq(&["decompose", "x:1"]));
    let parts = doc["parts"].as_array().unwrap();
    assert_eq!(parts.len(), 1);
    assert_eq!(tag(&parts[0]["tag"]), BasisTag::Cluster { m: 1, a: 1, b: 0 });
}

#[test]
fn decomposition_reexpands() {
    let ctx = KronContext::new();
    for basis in [Basis::S, Basis::B] {
        let doc = json(&kronq(&["decompose", "x:-2*x:3", "--basis", basis.name()]));
        let dec = Decomposer::new(&ctx, basis);
        let mut sum = TorusElement::zero(4);
        for part in doc["parts"].as_array().unwrap() {
            let b = dec.element(tag(&part["tag"])).unwrap();
            sum = sum.add(&ctx.mul(&element(&part["coeff"]), &b.0));
        }
        assert_eq!(sum, expanded("q*x:-1*x:2*t + s:3"), "{}", basis.name());
    }
}

#[test]
fn decompose_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("elt.json");
    std::fs::write(&path, expanded("s:2 + x:0").to_json_string()).unwrap();
    let arg = format!("@{}", path.display());
    let doc = json(&kronq(&["decompose", &arg]));
    let tags: Vec<BasisTag> = doc["parts"].as_array().unwrap().iter().map(|p| tag(&p["tag"])).collect();
    assert!(tags.contains(&BasisTag::ChebS(2)));
}

#[test]
fn exit_codes() {
    assert_eq!(kronq(&["decompose", "X(-1,0,0,0)"]).status.code(), Some(5));
    assert_eq!(kronq(&["count", "r:3", "--e", "2,2", "--budget", "10"]).status.code(), Some(3));
    assert_eq!(kronq(&["expand", "x:("]).status.code(), Some(2));
    assert_eq!(kronq(&["bogus"]).status.code(), Some(2));
    assert_eq!(kronq(&["count", "v:1", "--e", "1,1"]).status.code(), Some(2));
    assert_eq!(kronq(&["count", "v:3", "--e", "1,1", "--p", "4"]).status.code(), Some(2));
    assert_eq!(kronq(&["mutate", "3"]).status.code(), Some(2));
}

#[test]
fn mutate_with_seed_file_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let once = json(&kronq(&["mutate", "1"]));
    let seed = dir.path().join("seed.json");
    std::fs::write(&seed, once.to_string()).unwrap();

    let out = dir.path().join("back.json");
    let status = kronq(&["mutate", "--seed", seed.to_str().unwrap(), "1", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let back: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(back, json(&kronq(&["mutate", "1", "1"])));
    assert_eq!(back["cluster"][0], expanded("x:1").to_json());

    let a = kronq(&["mutate", "1", "2", "1"]).stdout;
    let b = kronq(&["mutate", "1", "2", "1"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn count_and_char() {
    let doc = json(&kronq(&["count", "v:3", "--e", "1,0", "--p", "2"]));
    assert_eq!(doc["count"], 1);
    let doc = json(&kronq(&["char", "v:3"]));
    assert_eq!(element(&doc["element"]), expanded("x:3"));
}
