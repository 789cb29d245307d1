// One line per acceptance criterion. Runs as a plain binary so the lines are
// always shown; exits non-zero only when an unconditional criterion fails.

mod common;

use std::error::Error;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use galrep::arith::{disc_sign, sturm_real_root_count};
use galrep::frobenius::{charpol_consistency, is_trace_zero, tau_mod_ell};
use galrep::galverify::{field_discriminant, serre_weight, verify_record, VerifyOptions};
use galrep::genus1::{self, build_full_poly, build_projective_poly, EllipticCurveQ};
use galrep::lehmer::{
    search, serre_conditions, DetectorTable, SearchResult, ZeroDetector, CLAIMED_LEAST_PRIME, PREVIOUS_BOUND,
};
use galrep::modcurve::{dim_j_gamma_h, gamma_h, genus_x1, pgl2_brute_force_counts, pgl2_cycle_types};
use galrep::modsym::{eigensystem_check, family_cuspidal_dim};
use galrep::qexp::{check_deligne_bound, check_hecke_recursion, check_multiplicativity, cusp_form_level1};
use galrep::records::{embedded, embedded_all};
use galrep::bigexpr::parse_big_uint;

type Res = Result<Verdict, Box<dyn Error>>;

enum Verdict {
    Pass(String),
    Fail(String),
    /// Needs data that is not shipped; the reason is reported.
    Unmet(String),
}

fn check(ok: bool, detail: String) -> Res {
    Ok(if ok { Verdict::Pass(detail) } else { Verdict::Fail(detail) })
}

struct Tally {
    failed: Vec<u32>,
}

impl Tally {
    fn run(&mut self, n: u32, name: &str, budget: Duration, f: impl FnOnce() -> Res) {
        let t = Instant::now();
        let v = f();
        let dt = t.elapsed();
        let timing = format!("{:.1} s of {} s", dt.as_secs_f64(), budget.as_secs());
        let (tag, detail) = match v {
            Ok(Verdict::Pass(_)) if dt > budget => ("FAIL", "over time budget".to_string()),
            Ok(Verdict::Pass(d)) => ("PASS", d),
            Ok(Verdict::Fail(d)) => ("FAIL", d),
            Ok(Verdict::Unmet(d)) => ("UNMET", d),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if tag == "FAIL" {
            self.failed.push(n);
        }
        println!("criterion {n:>2} [{tag}] {name}: {detail} ({timing})");
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn dims() -> Res {
    let want = [(12, 31, 10, 26, 6), (16, 29, 14, 22, 4), (20, 31, 6, 26, 6), (22, 31, 10, 26, 6)];
    let mut got = Vec::new();
    for &(k, ell, ..) in &want {
        got.push((k, ell, gamma_h(k, ell)?.gcd, genus_x1(ell)?, dim_j_gamma_h(k, ell)?));
    }
    check(got == want, format!("{got:?}"))
}

fn genus() -> Res {
    let g = [genus_x1(31)?, genus_x1(29)?, genus_x1(11)?];
    check(g == [26, 22, 1], format!("g(X1(31), X1(29), X1(11)) = {g:?}"))
}

fn consistency() -> Res {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in embedded_all() {
        let c = charpol_consistency(&r, 500)?;
        ok &= c.pass && c.mismatches == 0;
        parts.push(format!("{} {} primes, {} mismatches", r.id(), c.primes_checked, c.mismatches));
    }
    check(ok, parts.join("; "))
}

fn tau_showcase() -> Res {
    let rec = embedded("k12l31")?;
    let want = [("10^1000+4351", "{±8}"), ("10^1000+10401", "{0}"), ("10^1000+11979", "{±11}"), ("10^1000+17557", "{±8}")];
    let mut ok = true;
    let mut parts = Vec::new();
    for (expr, expected) in want {
        let t = Instant::now();
        let r = tau_mod_ell(&rec, &parse_big_uint(expr)?)?;
        let got = r.candidates.to_string();
        let note = if got == expected {
            ""
        } else if expected_in(&r.candidates, expected) {
            ok = false;
            " (strict superset: not disambiguated)"
        } else {
            ok = false;
            " (wrong)"
        };
        ok &= t.elapsed() <= secs(600);
        parts.push(format!("{expr} -> {got}{note}"));
    }
    check(ok, parts.join(", "))
}

fn expected_in(set: &galrep::frobenius::TraceCandidateSet, expected: &str) -> bool {
    expected
        .trim_matches(|c| c == '{' || c == '}')
        .split(", ")
        .all(|v| v.trim_start_matches('±').parse::<u64>().is_ok_and(|x| set.contains(x)))
}

fn discriminants() -> Res {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in embedded_all() {
        let fd = field_discriminant(&r.poly, 1_000_000)?;
        let w = serre_weight(&r.poly, r.ell)?;
        ok &= w == r.k as i64 && fd.certified;
        if r.ell == 29 {
            let c = fd.cofactor.as_ref().is_some_and(|c| c.passed);
            ok &= fd.field_valuation(29) == 43
                && fd.field_valuation(3) == 0
                && fd.field_valuation(19) == 0
                && fd.poly_valuation(3) == 6
                && fd.poly_valuation(19) == 4
                && c
                && fd.cofactor_small_factor_free;
            parts.push(format!(
                "{}: v29 = {}, v3 = v19 = {}, poly 3^{} 19^{}, cofactor certified {c}, no factor < 10^6 {}, weight {w}",
                r.id(),
                fd.field_valuation(29),
                fd.field_valuation(3).max(fd.field_valuation(19)),
                fd.poly_valuation(3),
                fd.poly_valuation(19),
                fd.cofactor_small_factor_free,
            ));
        } else {
            let v = fd.field_valuation(31);
            ok &= fd.field_disc_negative && v as u64 == r.k + 29;
            parts.push(format!("{}: v31 = {v}, negative {}, weight {w}", r.id(), fd.field_disc_negative));
        }
    }
    check(ok, parts.join("; "))
}

fn oddness() -> Res {
    let r16 = embedded("k16l29")?;
    let real = sturm_real_root_count(&r16.poly)?;
    let mut signs = Vec::new();
    for id in ["k12l31", "k20l31", "k22l31"] {
        signs.push(disc_sign(&embedded(id)?.poly)?);
    }
    check(real < 30 && signs.iter().all(|&s| s < 0), format!("k16l29 real roots {real}; ℓ = 31 disc signs {signs:?}"))
}

fn genus1_end_to_end() -> Res {
    let e = EllipticCurveQ::x0_11();
    let a = build_projective_poly(&e, 11, 300)?;
    let b = build_projective_poly(&e, 11, 364)?;
    let ((full, fc), used) = genus1::with_retries(300, |bits| build_full_poly(&e, 11, bits))?;
    let ok = a.record.poly == b.record.poly
        && a.record.degree() == 12
        && a.consistency.pass
        && a.consistency.pmax == 200
        && full.degree() == 120
        && fc.matches_division_polynomial;
    check(
        ok,
        format!(
            "degree {} identical at 300/364 bits {}, consistency to 200 {}; full degree {} at {used} bits, division-polynomial match {}",
            a.record.degree(),
            a.record.poly == b.record.poly,
            a.consistency.pass,
            full.degree(),
            fc.matches_division_polynomial
        ),
    )
}

fn modular_symbols() -> Res {
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, ell) in [(12, 31), (16, 29), (20, 31), (22, 31)] {
        let cusp = family_cuspidal_dim(k, ell)?;
        let dim = dim_j_gamma_h(k, ell)?;
        let eig = eigensystem_check(k, ell, 20)?;
        ok &= cusp as u64 == 2 * dim && eig.joint_kernel_dim >= 2;
        parts.push(format!("({k},{ell}) cusp {cusp} = 2·{dim}, kernel {}", eig.joint_kernel_dim));
    }
    check(ok, parts.join("; "))
}

fn catalog() -> Res {
    let mut ok = true;
    for ell in [3, 5, 7, 11, 13] {
        let cat = pgl2_cycle_types(ell);
        let brute = pgl2_brute_force_counts(ell);
        ok &= cat.patterns() == brute.keys().cloned().collect();
        ok &= cat.entries().all(|(k, p)| brute.get(p) == Some(&k.element_count(ell)));
    }
    for ell in [11, 13, 17, 19, 29, 31] {
        let cat = pgl2_cycle_types(ell);
        ok &= cat.entries().count() == cat.patterns().len();
        ok &= cat.entries().all(|(k, p)| cat.lookup(p) == Some(*k));
    }
    check(ok, "closed form = brute force for ℓ ≤ 13, lookup injective for ℓ ≤ 31".into())
}

fn lehmer_unconditional() -> Res {
    let p = BigUint::from(CLAIMED_LEAST_PRIME);
    let cond = serre_conditions(&p);
    let z31 = is_trace_zero(&embedded("k12l31")?, &p)?;
    let rec11 = build_projective_poly(&EllipticCurveQ::x0_11(), 11, 300)?.record;
    let z11_rec = ZeroDetector::from_record(rec11)?.is_zero(&p)?;
    let z11_bsgs = ZeroDetector::elliptic_bsgs().is_zero(&p)?;
    let ratio = CLAIMED_LEAST_PRIME as f64 / PREVIOUS_BOUND as f64;
    let ok = cond.all() && z31 && z11_rec && z11_bsgs && (43.0..=43.2).contains(&ratio);
    check(
        ok,
        format!("congruences {}, ℓ = 31 {z31}, ℓ = 11 record {z11_rec} / bsgs {z11_bsgs}, ratio {ratio:.4}", cond.all()),
    )
}

fn lehmer_conditional() -> Res {
    let mut table = DetectorTable::builtin()?;
    let mut loaded = Vec::new();
    if let Some(dir) = std::env::var_os("GALREP_EXTERNAL_RECORDS").map(PathBuf::from) {
        for entry in std::fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "galrep") {
                loaded.push(table.load_file(&path)?);
            }
        }
    }
    let lo = CLAIMED_LEAST_PRIME - 10u128.pow(15);
    let hi = CLAIMED_LEAST_PRIME + 1;
    let have_all = [13, 17, 19].iter().all(|l| loaded.contains(l));
    let ells: Vec<u64> = if have_all { vec![11, 13, 17, 19, 31] } else { vec![11, 31] };
    let r: SearchResult = search(lo, hi, &ells, &table)?;
    let detail = format!(
        "ℓ = {:?} over [p* - 10^15, p* + 1): found {:?} after {} primes",
        r.ells, r.found, r.primes_examined
    );
    if have_all {
        check(r.found == Some(CLAIMED_LEAST_PRIME), detail)
    } else {
        Ok(Verdict::Unmet(format!(
            "conditional on external ℓ = 13, 17, 19 records (set GALREP_EXTERNAL_RECORDS); partial filter {detail}"
        )))
    }
}

fn properties() -> Res {
    let mut parts = Vec::new();
    let mut ok = true;
    for k in [12, 16, 18, 20, 22] {
        let f = cusp_form_level1(k, 10_000)?;
        let m = check_multiplicativity(&f);
        let h = check_hecke_recursion(&f);
        let d = check_deligne_bound(&f);
        ok &= m.is_none() && h.is_none() && d.is_none();
    }
    parts.push(format!("Hecke/multiplicativity/Deligne to 10^4 for k = 12..22 {ok}"));

    let mut t = DetectorTable::new();
    t.insert(ZeroDetector::from_record(embedded("k12l31")?)?);
    let hi = 10u128.pow(16);
    let whole = search(0, hi, &[31], &t)?;
    let mut split_ok = true;
    for mid in [hi / 7, hi / 3, hi / 2] {
        let m = search(0, mid, &[31], &t)?.merge(&search(mid, hi, &[31], &t)?).unwrap();
        split_ok &= m.found == whole.found;
    }
    parts.push(format!("partitioned search {split_ok}"));
    ok &= split_ok;

    let opts = VerifyOptions {
        fail_fast: true,
        ..VerifyOptions::default()
    };
    let mut caught = 0;
    let mut total = 0;
    for r in embedded_all() {
        for (_, m) in common::mutants(&r) {
            total += 1;
            caught += usize::from(!verify_record(&m, &opts)?.pass);
        }
    }
    parts.push(format!("mutants rejected {caught}/{total}"));
    ok &= caught == total && total == 20;
    check(ok, parts.join("; "))
}

fn main() {
    let mut t = Tally { failed: Vec::new() };
    t.run(1, "dimension table", secs(1), dims);
    t.run(2, "genus of X1(ℓ)", secs(1), genus);
    t.run(3, "charpoly consistency p < 500", secs(120), consistency);
    t.run(4, "τ mod 31 at 10^1000 + c", secs(2400), tau_showcase);
    t.run(5, "discriminants and Serre weight", secs(1800), discriminants);
    t.run(6, "oddness", secs(60), oddness);
    t.run(7, "genus-1 construction", secs(120), genus1_end_to_end);
    t.run(8, "modular symbols", secs(600), modular_symbols);
    t.run(9, "PGL2 catalog", secs(60), catalog);
    t.run(10, "Lehmer candidate p*", secs(60), lehmer_unconditional);
    t.run(11, "Lehmer window search", secs(600), lehmer_conditional);
    t.run(12, "property suites", secs(600), properties);
    if !t.failed.is_empty() {
        eprintln!("failed criteria: {:?}", t.failed);
        std::process::exit(1);
    }
}
