use std::path::Path;
use std::process::Command;

use serde_json::Value;

use galrep::records::{embedded, embedded_all, GaloisPolyRecord, EMBEDDED_IDS};

mod common;

fn galrep(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_galrep")).args(args).output().unwrap();
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

fn strip_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings_ms");
    v
}

#[test]
fn tables_dims() {
    let (code, v) = galrep(&["tables", "dims"]);
    assert_eq!(code, 0);
    let rows: Vec<[u64; 5]> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| ["k", "ell", "gcd", "dim_j1", "dim_j_gamma_h"].map(|f| r[f].as_u64().unwrap()))
        .collect();
    assert_eq!(
        rows,
        vec![[12, 31, 10, 26, 6], [16, 29, 14, 22, 4], [20, 31, 6, 26, 6], [22, 31, 10, 26, 6]]
    );
}

#[test]
fn tables_genus() {
    for (ell, g) in [(31, 26), (29, 22), (11, 1)] {
        let (code, v) = galrep(&["tables", "genus", "--ell", &ell.to_string()]);
        assert_eq!(code, 0);
        assert_eq!(v["results"]["genus_x1"], g);
    }
    assert_eq!(galrep(&["tables", "genus", "--ell", "30"]).0, 2);
}

#[test]
fn verify_embedded_record() {
    let (code, v) = galrep(&["verify", "--record", "k16l29"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    let vals = v["results"]["discriminant"]["field_valuations"].as_array().unwrap();
    assert!(vals.contains(&serde_json::json!([29, 43])), "{vals:?}");
    assert_eq!(v["results"]["serre_weight"], 16);
}

#[test]
fn verify_mutant_file_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let (_, m) = common::mutants(&embedded("k12l31").unwrap()).remove(0);
    let path = dir.path().join("mutant.galrep");
    m.write_file(&path).unwrap();
    let (code, v) = galrep(&["verify", "--file", path.to_str().unwrap(), "--fail-fast"]);
    assert_eq!(code, 1);
    let res = &v["results"];
    let witness = res["inconsistent_pattern"]
        .as_str()
        .map(str::to_string)
        .or_else(|| res["charpoly_consistency"]["first_failure"]["p"].as_u64().map(|p| p.to_string()));
    assert!(witness.is_some(), "{res}");
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.galrep");
    std::fs::write(&bad, "GALREP v1\nk=12 ell=31 deg=3 kind=projective source=x\n1\n2\n").unwrap();
    assert_eq!(galrep(&["verify", "--file", bad.to_str().unwrap()]).0, 2);
    assert_eq!(galrep(&["verify", "--record", "k14l31"]).0, 2);
    assert_eq!(galrep(&["verify"]).0, 2);
    assert_eq!(galrep(&["build-genus1", "--bits", "100"]).0, 2);
    assert_eq!(galrep(&["tau-mod", "--record", "k12l31", "--p", "12"]).0, 2);
    assert_eq!(galrep(&["lehmer", "verify-candidate", "--p", "982149821766199295999", "--detectors", "11,13,31"]).0, 2);
}

#[test]
fn tau_mod_small_prime() {
    // τ(7) = -16744 ≡ -4 mod 31
    let (code, v) = galrep(&["tau-mod", "--record", "k12l31", "--p", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["candidates"], "{±4, ±8, ±14, ±15}");
    assert_eq!(v["results"]["pattern"], "16^2");
}

#[test]
fn build_genus1_is_precision_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.galrep");
    let b = dir.path().join("b.galrep");
    assert_eq!(galrep(&["build-genus1", "--out", a.to_str().unwrap()]).0, 0);
    assert_eq!(galrep(&["build-genus1", "--bits", "364", "--out", b.to_str().unwrap()]).0, 0);
    let (ta, tb) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_eq!(ta, tb);
    let r = GaloisPolyRecord::read_file(&a).unwrap();
    assert_eq!((r.k, r.ell, r.degree()), (12, 11, 12));
    assert_eq!(r.poly.coeff(0).to_string(), "-22487841800564736");
}

#[test]
fn reports_are_deterministic() {
    let args = ["tables", "modsym-check", "--k", "16", "--ell", "29", "--pmax", "7"];
    let (c1, a) = galrep(&args);
    let (c2, b) = galrep(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(strip_timings(a), strip_timings(b));
}

#[test]
fn lehmer_verify_candidate() {
    let (code, v) = galrep(&["lehmer", "verify-candidate", "--p", "982149821766199295999"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["accepted"], true);
    // fails the congruences
    let (code, _) = galrep(&["lehmer", "verify-candidate", "--p", "1000003"]);
    assert_eq!(code, 1);
}

fn search(dir: &Path, from: &str, to: &str, ckpt: Option<&str>) -> (i32, Value) {
    let mut args = vec!["lehmer", "search", "--from", from, "--to", to, "--detectors", "31"];
    let path;
    if let Some(name) = ckpt {
        path = dir.join(name).to_str().unwrap().to_string();
        args.extend(["--checkpoint", path.as_str()]);
    }
    galrep(&args)
}

#[test]
fn lehmer_search_split_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let (code, whole) = search(dir.path(), "0", "1e16", None);
    assert_eq!(code, 0);
    assert_eq!(whole["results"]["found"], "1021727768831999");

    let (_, lo) = search(dir.path(), "0", "5e15", None);
    let (_, hi) = search(dir.path(), "5e15", "1e16", None);
    let merged = lo["results"]["found"].as_str().or(hi["results"]["found"].as_str());
    assert_eq!(merged, Some("1021727768831999"));

    let (_, first) = search(dir.path(), "0", "1e16", Some("s.ckpt"));
    let (_, again) = search(dir.path(), "0", "1e16", Some("s.ckpt"));
    assert_eq!(first["results"]["found"], whole["results"]["found"]);
    assert_eq!(again["results"]["found"], whole["results"]["found"]);
    assert_eq!(search(dir.path(), "0", "2e16", Some("s.ckpt")).0, 2);

    // a partial detector set cannot support the non-vanishing bound
    let code = galrep(&["lehmer", "search", "--from", "0", "--to", "1e16", "--detectors", "31", "--bound"]).0;
    assert_eq!(code, 2);
}

#[test]
fn galrep_round_trip() {
    for (r, id) in embedded_all().iter().zip(EMBEDDED_IDS) {
        assert_eq!(r.id(), id);
        let back = GaloisPolyRecord::parse_galrep(&r.to_galrep()).unwrap();
        assert_eq!(back.poly, r.poly);
        assert_eq!((back.k, back.ell, back.kind), (r.k, r.ell, r.kind));
    }
    assert_eq!(embedded("k12l31").unwrap().poly.coeff(0).to_string(), "-1261963");
    let consts: Vec<String> = embedded_all().iter().map(|r| r.poly.coeff(0).to_string()).collect();
    assert!(consts.contains(&"187532019539254309".to_string()), "{consts:?}");
}
