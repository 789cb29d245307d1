//! Frobenius classes read off factorization patterns of a projective record,
//! and the traces mod ℓ they allow.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::modp::{inv_mod_u64, pow_mod_u64};
use crate::arith::{ddf_partial, ddf_pattern, is_prime, is_prime_u64, ArithError, DegreePattern};
use crate::modcurve::{pgl2_cycle_types, projective_order_from_pattern, ClassKind, CycleTypeCatalog};
use crate::qexp::{self, QExpansion};
use crate::records::{GaloisPolyRecord, RecordKind};

#[derive(Debug, thiserror::Error)]
pub enum FrobeniusError {
    #[error("p = {0} is not prime")]
    NotPrime(String),
    #[error("p = {p} is the characteristic ell = {ell} of the record")]
    PrimeIsLevel { p: String, ell: u64 },
    #[error("bad reduction at p = {0}")]
    BadPrime(String),
    #[error("record must be projective")]
    NotProjective,
    #[error("pattern {pattern} at p = {p} is not a PGL2(F_{ell}) cycle type")]
    NotInCatalog { p: String, pattern: String, ell: u64 },
    #[error("no trace is compatible with class {kind} and determinant {d} mod {ell}")]
    Unrealizable { kind: ClassKind, d: u64, ell: u64 },
    #[error(transparent)]
    Qexp(#[from] qexp::QexpError),
}

/// Residues ±t mod ℓ allowed for the trace of Frobenius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceCandidateSet {
    pub ell: u64,
    values: BTreeSet<u64>,
}

impl TraceCandidateSet {
    pub fn new(ell: u64, values: impl IntoIterator<Item = u64>) -> Self {
        let mut set = BTreeSet::new();
        for t in values {
            let t = t % ell;
            set.insert(t);
            set.insert((ell - t) % ell);
        }
        TraceCandidateSet { ell, values: set }
    }

    pub fn values(&self) -> &BTreeSet<u64> {
        &self.values
    }

    pub fn contains(&self, t: u64) -> bool {
        self.values.contains(&(t % self.ell))
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// One representative 0 ≤ t ≤ ℓ/2 per pair {t, -t}.
    pub fn pairs(&self) -> Vec<u64> {
        self.values
            .iter()
            .copied()
            .filter(|&t| t <= self.ell / 2)
            .collect()
    }

    /// True when the set is exactly {0}.
    pub fn is_zero_only(&self) -> bool {
        self.values.len() == 1 && self.values.contains(&0)
    }

    /// True when the set is a single pair {±t} (or {0}).
    pub fn is_single_pair(&self) -> bool {
        self.pairs().len() == 1
    }
}

impl fmt::Display for TraceCandidateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs()
            .iter()
            .map(|&t| if t == 0 { "0".to_string() } else { format!("±{t}") })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for TraceCandidateSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// F_ℓ(√r) for a nonsquare r; elements are pairs (a, b) = a + b√r.
#[derive(Clone, Copy, Debug)]
struct QuadExt {
    ell: u64,
    r: u64,
}

type Q2 = (u64, u64);

impl QuadExt {
    fn mul(&self, x: Q2, y: Q2) -> Q2 {
        let l = self.ell;
        (
            (x.0 * y.0 + x.1 * y.1 % l * self.r) % l,
            (x.0 * y.1 + x.1 * y.0) % l,
        )
    }

    fn order(&self, x: Q2) -> u64 {
        let mut acc = x;
        let mut n = 1;
        while acc != (1, 0) {
            acc = self.mul(acc, x);
            n += 1;
            assert!(n <= self.ell * self.ell, "element is not a unit");
        }
        n
    }

    /// The norm-one elements (the kernel of x ↦ x^{ℓ+1}).
    fn norm_one(&self) -> Vec<Q2> {
        let l = self.ell;
        let mut out = Vec::new();
        for a in 0..l {
            for b in 0..l {
                // a² - r b² = 1
                if (a * a % l + l - self.r * (b * b % l) % l) % l == 1 {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

fn is_square_mod(x: u64, ell: u64) -> bool {
    let x = x % ell;
    x == 0 || pow_mod_u64(x, (ell - 1) / 2, ell) == 1
}

fn sqrt_mod(x: u64, ell: u64) -> Option<u64> {
    let x = x % ell;
    (0..ell).find(|&t| t * t % ell == x)
}

fn nonsquare(ell: u64) -> u64 {
    (2..ell).find(|&r| !is_square_mod(r, ell)).unwrap()
}

fn mult_order(x: u64, ell: u64) -> u64 {
    let mut acc = x % ell;
    let mut n = 1;
    while acc != 1 {
        acc = acc * x % ell;
        n += 1;
    }
    n
}

/// Classes in PGL₂(F_ℓ) of the image of a matrix with trace `a` and
/// determinant `d` (d ≢ 0). A repeated eigenvalue leaves scalar and unipotent
/// both possible.
pub fn charpoly_classes(a: u64, d: u64, ell: u64) -> Vec<ClassKind> {
    let l = ell;
    let (a, d) = (a % l, d % l);
    assert!(d != 0, "determinant must be a unit");
    let disc = (a * a % l + 4 * (l - d)) % l;
    let inv2 = inv_mod_u64(2, l).unwrap();
    if disc == 0 {
        return vec![ClassKind::Identity, ClassKind::Unipotent];
    }
    if is_square_mod(disc, l) {
        let r = sqrt_mod(disc, l).unwrap();
        let alpha = (a + r) * inv2 % l;
        let beta = (a + l - r) * inv2 % l;
        let zeta = alpha * inv_mod_u64(beta, l).unwrap() % l;
        vec![ClassKind::Split(mult_order(zeta, l))]
    } else {
        // α = (a + √disc)/2 in F_ℓ(√disc); ζ = α/β = α²/d.
        let f = QuadExt { ell: l, r: disc };
        let alpha = (a * inv2 % l, inv2);
        let sq = f.mul(alpha, alpha);
        let dinv = inv_mod_u64(d, l).unwrap();
        let zeta = (sq.0 * dinv % l, sq.1 * dinv % l);
        vec![ClassKind::Nonsplit(f.order(zeta))]
    }
}

/// Traces t with t² = d(ζ + ζ⁻¹ + 2) for ζ of the order and kind given.
pub fn trace_candidates(kind: ClassKind, d: u64, ell: u64) -> Result<TraceCandidateSet, FrobeniusError> {
    let l = ell;
    let d = d % l;
    let mut sums: Vec<u64> = Vec::new(); // values of ζ + ζ⁻¹
    match kind {
        ClassKind::Identity | ClassKind::Unipotent => sums.push(2),
        ClassKind::Split(2) | ClassKind::Nonsplit(2) => sums.push(l - 2),
        ClassKind::Split(n) => {
            for z in 1..l {
                if mult_order(z, l) == n {
                    sums.push((z + inv_mod_u64(z, l).unwrap()) % l);
                }
            }
        }
        ClassKind::Nonsplit(n) => {
            let f = QuadExt { ell: l, r: nonsquare(l) };
            for z in f.norm_one() {
                if f.order(z) == n {
                    // ζ⁻¹ is the conjugate, so ζ + ζ⁻¹ = 2a
                    sums.push(2 * z.0 % l);
                }
            }
        }
    }
    let mut values = Vec::new();
    for s in sums {
        let t2 = d * ((s + 2) % l) % l;
        if let Some(t) = sqrt_mod(t2, l) {
            // keep only traces whose characteristic polynomial has this class
            if charpoly_classes(t, d, l).contains(&kind) {
                values.push(t);
            }
        }
    }
    let set = TraceCandidateSet::new(l, values);
    if set.is_empty() {
        return Err(FrobeniusError::Unrealizable { kind, d, ell });
    }
    Ok(set)
}

fn check_prime(record: &GaloisPolyRecord, p: &BigUint) -> Result<(), FrobeniusError> {
    if record.kind != RecordKind::Projective {
        return Err(FrobeniusError::NotProjective);
    }
    if (p % record.ell) == BigUint::from(0u32) {
        return Err(FrobeniusError::PrimeIsLevel {
            p: p.to_string(),
            ell: record.ell,
        });
    }
    let prime = match p.to_u64() {
        Some(x) => is_prime_u64(x),
        None => is_prime(p),
    };
    if !prime {
        return Err(FrobeniusError::NotPrime(p.to_string()));
    }
    Ok(())
}

fn map_arith(p: &BigUint, e: ArithError) -> FrobeniusError {
    match e {
        ArithError::NotSquarefree(_) | ArithError::LeadingCoefficientVanishes(_) => {
            FrobeniusError::BadPrime(p.to_string())
        }
        other => FrobeniusError::BadPrime(format!("{p}: {other}")),
    }
}

/// Degree pattern of the record modulo p.
pub fn frobenius_pattern(record: &GaloisPolyRecord, p: &BigUint) -> Result<DegreePattern, FrobeniusError> {
    check_prime(record, p)?;
    ddf_pattern(&record.poly, p).map_err(|e| map_arith(p, e))
}

/// p^{k-1} mod ℓ.
pub fn determinant_mod(k: u64, ell: u64, p: &BigUint) -> u64 {
    let pm = (p % ell).to_u64().unwrap();
    pow_mod_u64(pm, k - 1, ell)
}

#[derive(Debug, Clone, Serialize)]
pub struct TauModResult {
    pub p: String,
    pub pattern: String,
    pub class: String,
    pub order: u64,
    pub determinant: u64,
    pub candidates: TraceCandidateSet,
}

/// a_p(Δ_k) mod ℓ up to sign, from the Frobenius pattern of the record.
pub fn tau_mod_ell(record: &GaloisPolyRecord, p: &BigUint) -> Result<TauModResult, FrobeniusError> {
    let catalog = pgl2_cycle_types(record.ell);
    let pattern = frobenius_pattern(record, p)?;
    let (order, kind) = projective_order_from_pattern(&pattern, &catalog).map_err(|_| {
        FrobeniusError::NotInCatalog {
            p: p.to_string(),
            pattern: pattern.to_string(),
            ell: record.ell,
        }
    })?;
    let d = determinant_mod(record.k, record.ell, p);
    let candidates = trace_candidates(kind, d, record.ell)?;
    Ok(TauModResult {
        p: p.to_string(),
        pattern: pattern.to_string(),
        class: kind.to_string(),
        order,
        determinant: d,
        candidates,
    })
}

/// Whether Frobenius at p is an involution (trace ≡ 0 mod ℓ). Only the
/// factors of degree ≤ 2 are extracted.
pub fn is_trace_zero(record: &GaloisPolyRecord, p: &BigUint) -> Result<bool, FrobeniusError> {
    check_prime(record, p)?;
    let partial = ddf_partial(&record.poly, p, Some(2)).map_err(|e| map_arith(p, e))?;
    if partial.unresolved != 0 || partial.parts.iter().any(|&d| d > 2) {
        return Ok(false);
    }
    let pattern = DegreePattern::new(partial.parts);
    let catalog = pgl2_cycle_types(record.ell);
    Ok(catalog.lookup(&pattern).is_some_and(|k| k.is_involution()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub p: u64,
    pub pattern: String,
    pub observed: Option<String>,
    pub expected: Vec<String>,
    pub ap_mod_ell: u64,
    pub determinant: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub pmax: u64,
    pub primes_checked: usize,
    pub bad_primes: Vec<u64>,
    pub pass: bool,
    pub first_failure: Option<Mismatch>,
    pub mismatches: usize,
}

enum PrimeOutcome {
    Bad,
    Ok,
    Mismatch(Mismatch),
}

fn check_one(
    record: &GaloisPolyRecord,
    catalog: &CycleTypeCatalog,
    f: &QExpansion,
    p: u64,
) -> PrimeOutcome {
    let ell = record.ell;
    let pb = BigUint::from(p);
    let pattern = match ddf_pattern(&record.poly, &pb) {
        Ok(pat) => pat,
        Err(_) => return PrimeOutcome::Bad,
    };
    let ap = f.coeff_mod(p as usize, ell);
    let d = determinant_mod(record.k, ell, &pb);
    let expected = charpoly_classes(ap, d, ell);
    let observed = catalog.lookup(&pattern);
    match observed {
        Some(kind) if expected.contains(&kind) => PrimeOutcome::Ok,
        _ => PrimeOutcome::Mismatch(Mismatch {
            p,
            pattern: pattern.to_string(),
            observed: observed.map(|k| k.to_string()),
            expected: expected.iter().map(|k| k.to_string()).collect(),
            ap_mod_ell: ap,
            determinant: d,
        }),
    }
}

/// Compares the observed class at every good prime p < pmax with the class
/// forced by x² - a_p x + p^{k-1} mod ℓ, a_p taken from the q-expansion.
pub fn charpol_consistency(record: &GaloisPolyRecord, pmax: u64) -> Result<ConsistencyReport, FrobeniusError> {
    let f = qexp::cusp_form_level1(record.k as u32, pmax.max(2) as usize)?;
    charpol_consistency_with(record, pmax, &f)
}

/// As [`charpol_consistency`] with a precomputed q-expansion of length ≥ pmax.
pub fn charpol_consistency_with(
    record: &GaloisPolyRecord,
    pmax: u64,
    f: &QExpansion,
) -> Result<ConsistencyReport, FrobeniusError> {
    if record.kind != RecordKind::Projective {
        return Err(FrobeniusError::NotProjective);
    }
    let catalog = pgl2_cycle_types(record.ell);
    let primes: Vec<u64> = (2..pmax)
        .filter(|&p| is_prime_u64(p) && p != record.ell)
        .collect();
    let outcomes: Vec<(u64, PrimeOutcome)> = primes
        .par_iter()
        .map(|&p| (p, check_one(record, &catalog, f, p)))
        .collect();
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for (p, o) in outcomes {
        match o {
            PrimeOutcome::Bad => bad.push(p),
            PrimeOutcome::Ok => checked += 1,
            PrimeOutcome::Mismatch(m) => {
                checked += 1;
                mismatches.push(m)
            }
        }
    }
    Ok(ConsistencyReport {
        pmax,
        primes_checked: checked,
        bad_primes: bad,
        pass: mismatches.is_empty(),
        mismatches: mismatches.len(),
        first_failure: mismatches.into_iter().next(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::records::embedded;

    #[test]
    fn candidate_basics() {
        assert_eq!(trace_candidates(ClassKind::Split(2), 3, 31).unwrap().to_string(), "{0}");
        assert_eq!(trace_candidates(ClassKind::Nonsplit(2), 5, 31).unwrap().to_string(), "{0}");
        let s = trace_candidates(ClassKind::Identity, 1, 31).unwrap();
        assert_eq!(s.pairs(), vec![2]);
        assert!(s.contains(29));
    }

    #[test]
    fn classes_from_known_matrices() {
        // diag(2, 1) over F_7: ratio 2 has order 3
        assert_eq!(charpoly_classes(3, 2, 7), vec![ClassKind::Split(3)]);
        // x² + 1 over F_7: ratio -1
        assert_eq!(charpoly_classes(0, 1, 7), vec![ClassKind::Nonsplit(2)]);
    }

    /// Every (trace, det) pair lands in a class whose candidate set contains it.
    #[test]
    fn candidates_cover_all_matrices() {
        for ell in [5u64, 7, 11, 13, 29, 31] {
            for d in 1..ell {
                for a in 0..ell {
                    for kind in charpoly_classes(a, d, ell) {
                        let set = trace_candidates(kind, d, ell).unwrap();
                        assert!(set.contains(a), "ell {ell} a {a} d {d} {kind}");
                    }
                }
            }
        }
    }

    #[test]
    fn small_primes_contain_tau() {
        let rec = embedded("k12l31").unwrap();
        let f = qexp::cusp_form_level1(12, 100).unwrap();
        for p in [2u64, 3, 5, 7, 11, 13, 37, 97] {
            let r = match tau_mod_ell(&rec, &BigUint::from(p)) {
                Ok(r) => r,
                Err(FrobeniusError::BadPrime(_)) => continue,
                Err(e) => panic!("p = {p}: {e}"),
            };
            assert!(r.candidates.contains(f.coeff_mod(p as usize, 31)), "p = {p}: {r:?}");
        }
        assert!(matches!(
            tau_mod_ell(&rec, &BigUint::from(31u32)),
            Err(FrobeniusError::PrimeIsLevel { .. })
        ));
    }

    #[test]
    fn consistency_small() {
        let rec = embedded("k12l31").unwrap();
        let r = charpol_consistency(&rec, 200).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
