// Shared helpers for the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;

use galrep::arith::IntPolynomial;
use galrep::records::GaloisPolyRecord;

/// Five small perturbations of a record, each still monic of the same degree.
pub fn mutants(r: &GaloisPolyRecord) -> Vec<(String, GaloisPolyRecord)> {
    let c = r.poly.coeffs().to_vec();
    let n = c.len() - 1;
    let mid = n / 2;
    let mut out = Vec::new();
    let mut push = |name: String, v: Vec<BigInt>| {
        let rec = GaloisPolyRecord::new(r.k, r.ell, r.kind, IntPolynomial::new(v), "mutant").unwrap();
        out.push((name, rec));
    };

    let mut v = c.clone();
    v[0] += 1;
    push("a0 + 1".into(), v);

    let mut v = c.clone();
    v[1] -= 1;
    push("a1 - 1".into(), v);

    let mut v = c.clone();
    v[mid] = if v[mid] == BigInt::from(0) { BigInt::from(1) } else { -&v[mid] };
    push(format!("a{mid} negated"), v);

    let mut v = c.clone();
    v.swap(2, 3);
    push("a2 <-> a3".into(), v);

    let mut v = c.clone();
    v[n - 1] += BigInt::from(r.ell);
    push(format!("a{} + ell", n - 1), v);
    out
}
