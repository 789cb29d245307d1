//! Certification of a projective Galois polynomial: irreducibility,
//! PGL₂-consistency of Frobenius patterns, field-discriminant valuations,
//! oddness and the Serre weight.

pub mod cofactor;
pub mod dedekind;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::primality::primes_below;
use crate::arith::{
    ddf_pattern, poly_disc, sturm_real_root_count, trial_factor, ArithError, DegreePattern,
    IntPolynomial,
};
use crate::frobenius::{charpol_consistency, ConsistencyReport, FrobeniusError};
use crate::modcurve::{pgl2_cycle_types, ClassKind};
use crate::records::{GaloisPolyRecord, RecordKind};

pub use cofactor::{certify_cofactor, cofactor_integrality_test, CofactorCertificate};
pub use dedekind::{dedekind_criterion, local_discriminant, LocalDiscriminant};

#[derive(Debug, thiserror::Error)]
pub enum GalverifyError {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("irreducibility over Q could not be certified")]
    NotIrreducible,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("pattern {pattern} at p = {p} is not a cycle type of PGL2(F_{ell})")]
    InconsistentPattern { p: u64, pattern: String, ell: u64 },
    #[error("cofactor preconditions fail: {0}")]
    CofactorPreconditions(String),
    #[error("zero divisor modulo B exposes the factor {factor}")]
    NonInvertibleLeading { factor: String },
    #[error("only projective records can be verified")]
    NotProjective,
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
}

/// Outcome of the irreducibility scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Irreducibility {
    /// P mod p is irreducible.
    Witness { p: u64 },
    /// No proper factor degree is compatible with all listed patterns.
    SieveProof { primes: Vec<u64> },
    Unknown { primes_tried: usize, hint: String },
}

impl Irreducibility {
    pub fn is_proved(&self) -> bool {
        !matches!(self, Irreducibility::Unknown { .. })
    }
}

fn subset_sums(pattern: &DegreePattern, n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in pattern.parts() {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// Decides irreducibility from a sequence of (good prime, pattern) pairs,
/// consuming only as many as needed.
fn irreducibility_from_patterns(
    n: usize,
    patterns: impl IntoIterator<Item = (u64, DegreePattern)>,
) -> Irreducibility {
    let mut common = vec![true; n + 1];
    let mut used = Vec::new();
    let mut tried = 0;
    for (p, pat) in patterns {
        tried += 1;
        if pat.is_irreducible() {
            return Irreducibility::Witness { p };
        }
        let sums = subset_sums(&pat, n);
        let mut changed = false;
        for (c, s) in common.iter_mut().zip(&sums) {
            if *c && !*s {
                *c = false;
                changed = true;
            }
        }
        if changed {
            used.push(p);
        }
        if !common[1..n].iter().any(|&c| c) {
            return Irreducibility::SieveProof { primes: used };
        }
    }
    let survivors: Vec<usize> = (1..n).filter(|&d| common[d]).collect();
    Irreducibility::Unknown {
        primes_tried: tried,
        hint: format!("factor degrees compatible with every pattern: {survivors:?}"),
    }
}

/// Scans good primes up to `pmax`; stops at the first witness or sieve proof.
pub fn irreducible_over_q(poly: &IntPolynomial, pmax: u64) -> Irreducibility {
    let n = poly.deg().max(0) as usize;
    let pats = primes_below(pmax + 1).into_iter().filter_map(|p| {
        ddf_pattern(poly, &BigUint::from(p)).ok().map(|pat| (p, pat))
    });
    irreducibility_from_patterns(n, pats)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassFrequency {
    pub class: String,
    pub count: usize,
    pub observed: f64,
    pub expected: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PatternEvidence {
    pub primes_sampled: usize,
    pub bad_primes: Vec<u64>,
    pub transitivity: Irreducibility,
    /// Smallest prime whose Frobenius has order ℓ (unipotent).
    pub order_ell_at: Option<u64>,
    /// Smallest prime whose Frobenius has order ℓ+1 (nonsplit Cartan generator).
    pub order_ell_plus_one_at: Option<u64>,
    pub frequencies: Vec<ClassFrequency>,
    pub pass: bool,
}

/// Evidence that the Galois group acts on the roots as PGL₂(F_ℓ) on P¹:
/// catalog membership of every observed pattern, transitivity, and
/// witnessed element orders ℓ and ℓ+1.
pub fn pgl2_consistency(record: &GaloisPolyRecord, sample: &[u64]) -> Result<PatternEvidence, GalverifyError> {
    if record.kind != RecordKind::Projective {
        return Err(GalverifyError::NotProjective);
    }
    let ell = record.ell;
    let n = record.degree();
    let catalog = pgl2_cycle_types(ell);
    let observed: Vec<(u64, Option<DegreePattern>)> = sample
        .par_iter()
        .map(|&p| (p, ddf_pattern(&record.poly, &BigUint::from(p)).ok()))
        .collect();
    let mut bad = Vec::new();
    let mut good: Vec<(u64, DegreePattern)> = Vec::new();
    for (p, pat) in observed {
        match pat {
            Some(pat) => good.push((p, pat)),
            None => bad.push(p),
        }
    }
    let mut counts: BTreeMap<ClassKind, usize> = BTreeMap::new();
    let mut order_ell_at = None;
    let mut order_ell1_at = None;
    for (p, pat) in &good {
        let kind = catalog.lookup(pat).ok_or_else(|| GalverifyError::InconsistentPattern {
            p: *p,
            pattern: pat.to_string(),
            ell,
        })?;
        *counts.entry(kind).or_default() += 1;
        if kind == ClassKind::Unipotent && order_ell_at.is_none() {
            order_ell_at = Some(*p);
        }
        if kind == ClassKind::Nonsplit(ell + 1) && order_ell1_at.is_none() {
            order_ell1_at = Some(*p);
        }
    }
    let transitivity = irreducibility_from_patterns(n, good.iter().cloned());
    let total = good.len().max(1) as f64;
    let frequencies = catalog
        .entries()
        .map(|(kind, _)| {
            let count = counts.get(kind).copied().unwrap_or(0);
            ClassFrequency {
                class: kind.to_string(),
                count,
                observed: count as f64 / total,
                expected: kind.density(ell),
            }
        })
        .collect();
    let pass = transitivity.is_proved() && order_ell_at.is_some() && order_ell1_at.is_some();
    Ok(PatternEvidence {
        primes_sampled: good.len(),
        bad_primes: bad,
        transitivity,
        order_ell_at,
        order_ell_plus_one_at: order_ell1_at,
        frequencies,
        pass,
    })
}

/// Local discriminant at q, for a monic polynomial whose irreducibility can
/// be certified by a prime scan.
pub fn dedekind_vq(poly: &IntPolynomial, q: u64) -> Result<LocalDiscriminant, GalverifyError> {
    if !poly.is_monic() {
        return Err(GalverifyError::NotMonic);
    }
    if !irreducible_over_q(poly, 2000).is_proved() {
        return Err(GalverifyError::NotIrreducible);
    }
    local_discriminant(poly, q)
}

/// Minimal Serre weight from v_ℓ of the field discriminant.
pub fn serre_weight_from_valuation(v_ell: u32, ell: u64) -> i64 {
    v_ell as i64 - ell as i64 + 2
}

pub fn serre_weight(poly: &IntPolynomial, ell: u64) -> Result<i64, GalverifyError> {
    let loc = dedekind_vq(poly, ell)?;
    Ok(serre_weight_from_valuation(loc.field_valuation, ell))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Oddness {
    NotTotallyReal,
    TotallyReal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddnessEvidence {
    pub verdict: Oddness,
    /// "negative discriminant" or "sturm".
    pub method: String,
    pub real_roots: Option<usize>,
}

/// Complex conjugation acts nontrivially iff the field is not totally real.
pub fn oddness_evidence(poly: &IntPolynomial) -> Result<OddnessEvidence, GalverifyError> {
    let n = poly.deg().max(0) as usize;
    let d = poly_disc(poly)?;
    if d.sign() == Sign::Minus {
        return Ok(OddnessEvidence {
            verdict: Oddness::NotTotallyReal,
            method: "negative discriminant".into(),
            real_roots: None,
        });
    }
    let r = sturm_real_root_count(poly)?;
    Ok(OddnessEvidence {
        verdict: if r < n {
            Oddness::NotTotallyReal
        } else {
            Oddness::TotallyReal
        },
        method: "sturm".into(),
        real_roots: Some(r),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldDiscriminant {
    pub poly_disc_digits: usize,
    pub poly_disc_negative: bool,
    /// Primes below the trial bound dividing the polynomial discriminant.
    pub small_primes: Vec<(u64, u32)>,
    pub trial_bound: u64,
    /// The unfactored part is B² with B coprime to every prime below the bound.
    pub cofactor_is_square: bool,
    pub cofactor_small_factor_free: bool,
    pub cofactor: Option<CofactorCertificate>,
    pub local: Vec<LocalDiscriminant>,
    /// Nonzero field-discriminant valuations.
    pub field_valuations: Vec<(u64, u32)>,
    pub field_disc_negative: bool,
    pub certified: bool,
}

impl FieldDiscriminant {
    pub fn field_valuation(&self, q: u64) -> u32 {
        self.local
            .iter()
            .find(|l| l.q == q)
            .map(|l| l.field_valuation)
            .unwrap_or(0)
    }

    pub fn poly_valuation(&self, q: u64) -> u32 {
        self.small_primes
            .iter()
            .find(|(p, _)| *p == q)
            .map(|&(_, v)| v)
            .unwrap_or(0)
    }

    /// Support of the field discriminant is contained in `{ell}`.
    pub fn unramified_outside(&self, ell: u64) -> bool {
        self.certified && self.field_valuations.iter().all(|&(q, _)| q == ell)
    }
}

/// Field discriminant of Q[x]/(P): small primes by Round 2, the remaining
/// square cofactor by the integrality test.
pub fn field_discriminant(poly: &IntPolynomial, trial_bound: u64) -> Result<FieldDiscriminant, GalverifyError> {
    if !poly.is_monic() {
        return Err(GalverifyError::NotMonic);
    }
    let d = poly_disc(poly)?;
    if d.is_zero() {
        return Err(GalverifyError::NotSquarefree);
    }
    let (small, rest) = trial_factor(&d, trial_bound);
    let b = rest.sqrt();
    let is_square = &b * &b == rest;
    let small_free = trial_factor(&BigInt::from(b.clone()), trial_bound).0.is_empty();
    let cofactor = if is_square && small_free {
        Some(certify_cofactor(poly, &b)?)
    } else {
        None
    };
    let local: Vec<LocalDiscriminant> = small
        .par_iter()
        .map(|&(q, _)| local_discriminant(poly, q))
        .collect::<Result<_, _>>()?;
    let field_valuations = local
        .iter()
        .filter(|l| l.field_valuation > 0)
        .map(|l| (l.q, l.field_valuation))
        .collect();
    let certified = cofactor.as_ref().is_some_and(|c| c.passed);
    Ok(FieldDiscriminant {
        poly_disc_digits: d.magnitude().to_string().len(),
        poly_disc_negative: d.sign() == Sign::Minus,
        small_primes: small,
        trial_bound,
        cofactor_is_square: is_square,
        cofactor_small_factor_free: small_free,
        cofactor,
        local,
        field_valuations,
        // disc K and disc P differ by a square factor.
        field_disc_negative: d.sign() == Sign::Minus,
        certified,
    })
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub irreducibility_pmax: u64,
    /// Patterns are sampled at all good primes below this bound.
    pub pattern_pmax: u64,
    /// Charpoly consistency is checked at good primes below this bound.
    pub consistency_pmax: u64,
    pub trial_bound: u64,
    /// Stop at the first failed sub-check.
    pub fail_fast: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            irreducibility_pmax: 2000,
            pattern_pmax: 2000,
            consistency_pmax: 500,
            trial_bound: 1_000_000,
            fail_fast: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientNote {
    /// a₁² − 2a₀a₂ for the low coefficients of P.
    pub a1_sq_minus_2a0a2: String,
    pub negative: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub record: String,
    pub k: u64,
    pub ell: u64,
    pub degree: usize,
    pub source: String,
    pub irreducibility: Option<Irreducibility>,
    pub pattern_consistency: Option<PatternEvidence>,
    pub inconsistent_pattern: Option<String>,
    pub charpoly_consistency: Option<ConsistencyReport>,
    pub discriminant: Option<FieldDiscriminant>,
    pub real_roots: Option<usize>,
    /// sign(disc P) = (−1)^(number of complex-conjugate root pairs).
    pub disc_sign_matches_sturm: Option<bool>,
    pub oddness: Option<OddnessEvidence>,
    pub serre_weight: Option<i64>,
    pub unramified_outside_ell: Option<bool>,
    pub serre_level_note: String,
    pub coefficient_note: CoefficientNote,
    pub failures: Vec<String>,
    pub pass: bool,
}

fn coefficient_note(poly: &IntPolynomial) -> CoefficientNote {
    let v = poly.coeff(1) * poly.coeff(1) - BigInt::from(2) * poly.coeff(0) * poly.coeff(2);
    CoefficientNote {
        negative: v.sign() == Sign::Minus,
        a1_sq_minus_2a0a2: v.to_string(),
    }
}

/// Full verification pipeline for a projective record.
pub fn verify_record(record: &GaloisPolyRecord, opts: &VerifyOptions) -> Result<VerificationReport, GalverifyError> {
    if record.kind != RecordKind::Projective {
        return Err(GalverifyError::NotProjective);
    }
    let poly = &record.poly;
    let ell = record.ell;
    let n = record.degree();
    let mut rep = VerificationReport {
        record: record.id(),
        k: record.k,
        ell,
        degree: n,
        source: record.source.clone(),
        irreducibility: None,
        pattern_consistency: None,
        inconsistent_pattern: None,
        charpoly_consistency: None,
        discriminant: None,
        real_roots: None,
        disc_sign_matches_sturm: None,
        oddness: None,
        serre_weight: None,
        unramified_outside_ell: None,
        serre_level_note: "unramified outside ell is certified from the discriminant support; \
                           level 1 of the lift is a theoretical consequence, not machine-checked"
            .into(),
        coefficient_note: coefficient_note(poly),
        failures: Vec::new(),
        pass: false,
    };
    macro_rules! check {
        ($ok:expr, $msg:expr) => {
            if !$ok {
                rep.failures.push($msg.to_string());
                if opts.fail_fast {
                    return Ok(rep);
                }
            }
        };
    }

    let irr = irreducible_over_q(poly, opts.irreducibility_pmax);
    let irr_ok = irr.is_proved();
    rep.irreducibility = Some(irr);
    check!(irr_ok, "irreducibility not certified");

    let sample = primes_below(opts.pattern_pmax);
    match pgl2_consistency(record, &sample) {
        Ok(ev) => {
            let ok = ev.pass;
            rep.pattern_consistency = Some(ev);
            check!(ok, "PGL2 pattern evidence incomplete");
        }
        Err(GalverifyError::InconsistentPattern { p, pattern, .. }) => {
            rep.inconsistent_pattern = Some(format!("{pattern} at p = {p}"));
            check!(false, "pattern outside the PGL2 catalog");
        }
        Err(e) => return Err(e),
    }

    let cons = charpol_consistency(record, opts.consistency_pmax)?;
    let ok = cons.pass;
    rep.charpoly_consistency = Some(cons);
    check!(ok, "charpoly consistency fails");

    let fd = field_discriminant(poly, opts.trial_bound)?;
    let certified = fd.certified;
    let v_ell = fd.field_valuation(ell);
    let unram = fd.unramified_outside(ell);
    rep.discriminant = Some(fd);
    rep.unramified_outside_ell = Some(unram);
    check!(certified, "cofactor of the discriminant not certified");
    check!(unram, "ramification outside ell");
    let w = serre_weight_from_valuation(v_ell, ell);
    rep.serre_weight = Some(w);
    check!(w == record.k as i64, format!("Serre weight {w} differs from k = {}", record.k));

    let odd = oddness_evidence(poly)?;
    let r = sturm_real_root_count(poly)?;
    let neg = poly_disc(poly)?.sign() == Sign::Minus;
    let pairs = (n - r) / 2;
    rep.real_roots = Some(r);
    rep.disc_sign_matches_sturm = Some(neg == (pairs % 2 == 1));
    let odd_ok = odd.verdict == Oddness::NotTotallyReal;
    rep.oddness = Some(odd);
    check!(rep.disc_sign_matches_sturm == Some(true), "Sturm count disagrees with disc sign");
    check!(odd_ok, "field is totally real");

    rep.pass = rep.failures.is_empty();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::records::embedded;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn irreducibility_small() {
        assert_eq!(irreducible_over_q(&p(&[1, 0, 1]), 100), Irreducibility::Witness { p: 3 });
        assert!(!irreducible_over_q(&p(&[-1, 0, 1]), 200).is_proved());
        // x^4 + 1 is irreducible over Q but split into quadratics or
        // linear factors mod every odd prime, so the sieve cannot exclude 2.
        assert!(!irreducible_over_q(&p(&[1, 0, 0, 0, 1]), 200).is_proved());
        // x^5 - x - 1 is irreducible mod 5.
        assert!(irreducible_over_q(&p(&[-1, -1, 0, 0, 0, 1]), 100).is_proved());
    }

    #[test]
    fn sieve_proof_without_witness() {
        // Ninth cyclotomic polynomial: irreducible mod p for p ≡ 2, 5 mod 9.
        let f = p(&[1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(irreducible_over_q(&f, 100), Irreducibility::Witness { p: 2 });
        let pat = |v: Vec<usize>| DegreePattern::new(v);
        assert_eq!(
            irreducibility_from_patterns(3, [(7, pat(vec![1, 1, 1])), (5, pat(vec![1, 2]))]),
            Irreducibility::Unknown {
                primes_tried: 2,
                hint: "factor degrees compatible with every pattern: [1, 2]".into()
            }
        );
        assert_eq!(
            irreducibility_from_patterns(4, [(3, pat(vec![2, 2])), (5, pat(vec![1, 3]))]),
            Irreducibility::SieveProof { primes: vec![3, 5] }
        );
    }

    #[test]
    fn oddness_small() {
        assert_eq!(oddness_evidence(&p(&[-2, 0, 1])).unwrap().verdict, Oddness::TotallyReal);
        assert_eq!(oddness_evidence(&p(&[2, 0, 1])).unwrap().verdict, Oddness::NotTotallyReal);
        // x^3 - 2 has positive... disc -108 < 0, short-circuit
        assert_eq!(oddness_evidence(&p(&[-2, 0, 0, 1])).unwrap().method, "negative discriminant");
        // x^4 + 1: disc 256 > 0 but no real roots
        let e = oddness_evidence(&p(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!((e.verdict, e.real_roots), (Oddness::NotTotallyReal, Some(0)));
    }

    #[test]
    fn fake_records() {
        // Reducible polynomial padded to degree ℓ+1 = 6.
        let f = &(&p(&[1, 0, 1]) * &p(&[-2, 0, 0, 1])) * &p(&[-5, 1]);
        let rec = GaloisPolyRecord::new(12, 5, RecordKind::Projective, f, "test").unwrap();
        let sample = primes_below(300);
        match pgl2_consistency(&rec, &sample) {
            Ok(ev) => assert!(!ev.transitivity.is_proved() && !ev.pass),
            Err(GalverifyError::InconsistentPattern { .. }) => {}
            Err(e) => panic!("{e}"),
        }
        // x^32 - 2 has cycle types outside the PGL2(F_31) catalog.
        let mut c = vec![0i64; 33];
        c[0] = -2;
        c[32] = 1;
        let rec = GaloisPolyRecord::new(12, 31, RecordKind::Projective, p(&c), "test").unwrap();
        assert!(matches!(
            pgl2_consistency(&rec, &sample),
            Err(GalverifyError::InconsistentPattern { .. })
        ));
    }

    #[test]
    fn record_pattern_evidence() {
        let rec = embedded("k12l31").unwrap();
        let ev = pgl2_consistency(&rec, &primes_below(2000)).unwrap();
        assert!(ev.pass, "{ev:?}");
        assert!(matches!(ev.transitivity, Irreducibility::Witness { .. }));
    }
}
