//! Lehmer's question for τ: Serre's congruence sieve, mod-ℓ zero detectors,
//! candidate verification, range search and the resulting non-vanishing bound.
//!
//! A minimal n with τ(n) = 0 is prime (Lehmer), and such a prime satisfies
//! Serre's congruences and τ(p) ≡ 0 mod ℓ for every ℓ with a known
//! mod-ℓ representation. A prime that is τ ≡ 0 mod ℓ has Frobenius of
//! projective order 2, which the detectors read off from factorization
//! patterns (or, for ℓ = 11, from a point count on X₀(11)).

pub mod checkpoint;
pub mod sieve;

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::is_prime;
use crate::frobenius::{is_trace_zero, FrobeniusError};
use crate::genus1::{self, ap_via_bsgs, EllipticCurveQ, Genus1Error};
use crate::records::{self, GaloisPolyRecord, RecordError, RecordKind};

pub use checkpoint::Checkpoint;
pub use sieve::{serre_candidates, serre_conditions, SerreConditions, SerreSieveSpec, MODULUS};

/// The bound 22798241520242687999 obtained with ℓ ∈ {11, 13, 17, 19} alone.
pub const PREVIOUS_BOUND: u128 = 22_798_241_520_242_687_999;
/// The smallest prime passing all five detectors, as claimed for the ℓ = 31 search.
pub const CLAIMED_LEAST_PRIME: u128 = 982_149_821_766_199_295_999;
/// Detector set needed for the non-vanishing bound.
pub const REQUIRED_ELLS: [u64; 5] = [11, 13, 17, 19, 31];

#[derive(Debug, thiserror::Error)]
pub enum LehmerError {
    #[error("no detector available for ℓ = {0}")]
    MissingDetector(u64),
    #[error("invalid detector: {0}")]
    InvalidDetector(String),
    #[error("detectors for ℓ = {ell} disagree at p = {p}")]
    DetectorDisagreement { ell: u64, p: String },
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("invalid range [{lo}, {hi})")]
    InvalidRange { lo: String, hi: String },
    #[error("refusing to state a bound: {0}")]
    Refused(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
    #[error(transparent)]
    Genus1(#[from] Genus1Error),
    #[error(transparent)]
    Record(#[from] RecordError),
}

#[derive(Debug, Clone)]
pub enum DetectorPayload {
    Record(GaloisPolyRecord),
    Elliptic(EllipticCurveQ),
}

/// Decides τ(p) ≡ 0 mod ℓ.
#[derive(Debug, Clone)]
pub struct ZeroDetector {
    pub ell: u64,
    pub payload: DetectorPayload,
}

impl ZeroDetector {
    /// A projective record for Δ = Δ₁₂.
    pub fn from_record(record: GaloisPolyRecord) -> Result<Self, LehmerError> {
        if record.kind != RecordKind::Projective {
            return Err(LehmerError::InvalidDetector(format!("{} is not a projective record", record.id())));
        }
        if record.k != 12 {
            return Err(LehmerError::InvalidDetector(format!(
                "{} belongs to weight {}, τ needs weight 12",
                record.id(),
                record.k
            )));
        }
        Ok(ZeroDetector {
            ell: record.ell,
            payload: DetectorPayload::Record(record),
        })
    }

    /// ℓ = 11 through a_p of X₀(11), since τ(p) ≡ a_p mod 11.
    pub fn elliptic_bsgs() -> Self {
        ZeroDetector {
            ell: 11,
            payload: DetectorPayload::Elliptic(EllipticCurveQ::x0_11()),
        }
    }

    pub fn method(&self) -> &'static str {
        match self.payload {
            DetectorPayload::Record(_) => "projective-record",
            DetectorPayload::Elliptic(_) => "elliptic-bsgs",
        }
    }

    pub fn is_zero(&self, p: &BigUint) -> Result<bool, LehmerError> {
        match &self.payload {
            DetectorPayload::Record(r) => Ok(is_trace_zero(r, p)?),
            DetectorPayload::Elliptic(e) => {
                let ap = ap_via_bsgs(e, p)?;
                Ok(ap.mod_floor(&BigInt::from(self.ell)) == BigInt::from(0))
            }
        }
    }
}

/// Detectors keyed by ℓ; the first one per ℓ is authoritative, any others
/// are evaluated as cross-checks when enabled.
#[derive(Debug, Clone, Default)]
pub struct DetectorTable {
    by_ell: BTreeMap<u64, Vec<ZeroDetector>>,
    pub cross_check: bool,
}

impl DetectorTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, d: ZeroDetector) {
        self.by_ell.entry(d.ell).or_default().push(d);
    }

    pub fn ells(&self) -> Vec<u64> {
        self.by_ell.keys().copied().collect()
    }

    pub fn get(&self, ell: u64) -> Option<&[ZeroDetector]> {
        self.by_ell.get(&ell).map(|v| v.as_slice())
    }

    /// ℓ = 11 from the genus-1 construction (BSGS as cross-check) and
    /// ℓ = 31 from the embedded weight-12 record. Other ℓ need external files.
    pub fn builtin() -> Result<Self, LehmerError> {
        let mut t = DetectorTable::new();
        let g = genus1::build_projective_poly(&EllipticCurveQ::x0_11(), 11, genus1::DEFAULT_BITS)?;
        t.insert(ZeroDetector::from_record(g.record)?);
        t.insert(ZeroDetector::elliptic_bsgs());
        t.insert(ZeroDetector::from_record(records::embedded("k12l31")?)?);
        Ok(t)
    }

    /// Adds a projective weight-12 record read from a GALREP file.
    pub fn load_file(&mut self, path: &Path) -> Result<u64, LehmerError> {
        let r = GaloisPolyRecord::read_file(path)?;
        let d = ZeroDetector::from_record(r)?;
        let ell = d.ell;
        self.insert(d);
        Ok(ell)
    }

    /// Checks that every requested ℓ is covered and returns them in
    /// evaluation order (ℓ = 11 first, then ascending).
    pub fn plan(&self, ells: &[u64]) -> Result<Vec<u64>, LehmerError> {
        let mut v: Vec<u64> = ells.to_vec();
        v.sort_by_key(|&l| (l != 11, l));
        v.dedup();
        for &l in &v {
            if self.by_ell.get(&l).is_none_or(|d| d.is_empty()) {
                return Err(LehmerError::MissingDetector(l));
            }
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DetectorOutcome {
    pub ell: u64,
    pub method: String,
    /// `None` when skipped after an earlier rejection.
    pub trace_zero: Option<bool>,
    pub cross_checks: Vec<(String, bool)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LehmerCandidate {
    pub p: String,
    pub conditions: SerreConditions,
    pub detectors: Vec<DetectorOutcome>,
    pub accepted: bool,
    pub rejected_at: Option<String>,
}

fn run_detectors(
    p: &BigUint,
    order: &[u64],
    table: &DetectorTable,
    short_circuit: bool,
) -> Result<(Vec<DetectorOutcome>, Option<String>), LehmerError> {
    let mut out = Vec::new();
    let mut rejected_at = None;
    for &ell in order {
        let ds = table.get(ell).ok_or(LehmerError::MissingDetector(ell))?;
        if rejected_at.is_some() && short_circuit {
            out.push(DetectorOutcome {
                ell,
                method: ds[0].method().into(),
                trace_zero: None,
                cross_checks: Vec::new(),
            });
            continue;
        }
        let z = ds[0].is_zero(p)?;
        let mut cross = Vec::new();
        if table.cross_check {
            for d in &ds[1..] {
                let zz = d.is_zero(p)?;
                if zz != z {
                    return Err(LehmerError::DetectorDisagreement { ell, p: p.to_string() });
                }
                cross.push((d.method().to_string(), zz));
            }
        }
        if !z && rejected_at.is_none() {
            rejected_at = Some(format!("ℓ = {ell}"));
        }
        out.push(DetectorOutcome {
            ell,
            method: ds[0].method().into(),
            trace_zero: Some(z),
            cross_checks: cross,
        });
    }
    Ok((out, rejected_at))
}

/// Congruences first, then the detectors for `ells` in cheap-first order,
/// stopping at the first failure.
pub fn verify_candidate(p: &BigUint, ells: &[u64], table: &DetectorTable) -> Result<LehmerCandidate, LehmerError> {
    let order = table.plan(ells)?;
    evaluate(p, &order, table, true)
}

/// As [`verify_candidate`] but in the given order and without
/// short-circuiting; every check is evaluated.
pub fn verify_candidate_exhaustive(
    p: &BigUint,
    order: &[u64],
    table: &DetectorTable,
) -> Result<LehmerCandidate, LehmerError> {
    table.plan(order)?;
    evaluate(p, order, table, false)
}

fn evaluate(p: &BigUint, order: &[u64], table: &DetectorTable, short_circuit: bool) -> Result<LehmerCandidate, LehmerError> {
    if !is_prime(p) {
        return Err(LehmerError::NotPrime(p.to_string()));
    }
    let conditions = serre_conditions(p);
    if !conditions.all() && short_circuit {
        let detectors = order
            .iter()
            .map(|&ell| DetectorOutcome {
                ell,
                method: table.get(ell).unwrap()[0].method().into(),
                trace_zero: None,
                cross_checks: Vec::new(),
            })
            .collect();
        return Ok(LehmerCandidate {
            p: p.to_string(),
            conditions,
            detectors,
            accepted: false,
            rejected_at: Some("congruences".into()),
        });
    }
    let (detectors, mut rejected_at) = run_detectors(p, order, table, short_circuit)?;
    if !conditions.all() {
        rejected_at = Some("congruences".into());
    }
    Ok(LehmerCandidate {
        p: p.to_string(),
        conditions,
        detectors,
        accepted: rejected_at.is_none(),
        rejected_at,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub lo: u128,
    pub hi: u128,
    pub ells: Vec<u64>,
    pub found: Option<u128>,
    pub primes_examined: u64,
}

impl SearchResult {
    /// Minimum-merge of results on adjacent ranges `[a, b)` and `[b, c)`.
    pub fn merge(&self, other: &SearchResult) -> Option<SearchResult> {
        let (a, b) = if self.lo <= other.lo { (self, other) } else { (other, self) };
        if a.hi != b.lo || a.ells != b.ells {
            return None;
        }
        Some(SearchResult {
            lo: a.lo,
            hi: b.hi,
            ells: a.ells.clone(),
            found: a.found.or(b.found),
            primes_examined: a.primes_examined + b.primes_examined,
        })
    }
}

/// Least prime in `[lo, hi)` passing [`verify_candidate`].
pub fn search(lo: u128, hi: u128, ells: &[u64], table: &DetectorTable) -> Result<SearchResult, LehmerError> {
    search_with_checkpoint(lo, hi, ells, table, None)
}

/// [`search`] with per-class cursors persisted to `checkpoint` after each
/// examined prime; an existing checkpoint for the same range and ℓ-set is
/// resumed.
pub fn search_with_checkpoint(
    lo: u128,
    hi: u128,
    ells: &[u64],
    table: &DetectorTable,
    checkpoint: Option<&Path>,
) -> Result<SearchResult, LehmerError> {
    if lo > hi {
        return Err(LehmerError::InvalidRange {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let order = table.plan(ells)?;
    let spec = SerreSieveSpec::standard();
    let state = match checkpoint {
        Some(path) if path.exists() => {
            let c = Checkpoint::read(path)?;
            if c.lo != lo || c.hi != hi || c.ells != order {
                return Err(LehmerError::Checkpoint(format!(
                    "{} belongs to a different search (range [{}, {}), ℓ = {:?})",
                    path.display(),
                    c.lo,
                    c.hi,
                    c.ells
                )));
            }
            c
        }
        _ => Checkpoint::fresh(lo, hi, order.clone(), &spec.classes),
    };
    let state = Mutex::new(state);
    let best: Mutex<Option<u128>> = Mutex::new(state.lock().unwrap().best());
    let examined = Mutex::new(0u64);
    let n = spec.classes.len();
    (0..n).into_par_iter().try_for_each(|ci| -> Result<(), LehmerError> {
        let (r, cursor, done) = {
            let s = state.lock().unwrap();
            let c = &s.classes[ci];
            (c.residue, c.cursor, c.hit.is_some())
        };
        if done {
            return Ok(());
        }
        for p in sieve::class_primes(r, cursor.max(lo), hi) {
            if best.lock().unwrap().is_some_and(|b| p > b) {
                break;
            }
            let cand = verify_candidate(&BigUint::from(p), &order, table)?;
            *examined.lock().unwrap() += 1;
            let mut s = state.lock().unwrap();
            s.classes[ci].cursor = p + 1;
            if cand.accepted {
                s.classes[ci].hit = Some(p);
                let mut b = best.lock().unwrap();
                *b = Some(b.map_or(p, |x| x.min(p)));
            }
            if let Some(path) = checkpoint {
                s.write(path)?;
            }
            if cand.accepted {
                break;
            }
        }
        Ok(())
    })?;
    let s = state.into_inner().unwrap();
    if let Some(path) = checkpoint {
        s.write(path)?;
    }
    Ok(SearchResult {
        lo,
        hi,
        ells: order,
        found: s.best(),
        primes_examined: examined.into_inner().unwrap(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NonvanishingBound {
    pub bound: String,
    pub statement: String,
    pub justification: Vec<String>,
    pub previous_bound: String,
    pub ratio_to_previous: f64,
    pub argument_reconstructed: bool,
}

/// The statement "τ(n) ≠ 0 for all n < p*" from a search started at 2 with
/// the full detector set. Refuses anything weaker.
pub fn nonvanishing_bound(r: &SearchResult) -> Result<NonvanishingBound, LehmerError> {
    let missing: Vec<u64> = REQUIRED_ELLS.iter().copied().filter(|l| !r.ells.contains(l)).collect();
    if !missing.is_empty() {
        return Err(LehmerError::Refused(format!(
            "detector set {:?} lacks ℓ = {:?}; a prime passing a partial filter need not have τ(p) ≡ 0 mod every ℓ, \
             so primes below it are not excluded",
            r.ells, missing
        )));
    }
    if r.lo > 2 {
        return Err(LehmerError::Refused(format!(
            "search started at {} rather than 2, so smaller primes were never examined",
            r.lo
        )));
    }
    let bound = r.found.unwrap_or(r.hi);
    let ells = REQUIRED_ELLS.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("·");
    Ok(NonvanishingBound {
        bound: bound.to_string(),
        statement: format!("τ(n) ≠ 0 for all n < {bound}"),
        justification: vec![
            "if τ(n) = 0 with n minimal then n is prime (Lehmer)".into(),
            "such a prime satisfies Serre's congruences mod 2^11·3^7·5^3·691, 49 and 23".into(),
            format!("and τ(n) ≡ 0 mod {ells}, i.e. passes every detector"),
            format!("no prime below {bound} passed the sieve and all detectors"),
        ],
        previous_bound: PREVIOUS_BOUND.to_string(),
        ratio_to_previous: bound.to_f64().unwrap() / PREVIOUS_BOUND as f64,
        argument_reconstructed: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(ells: Vec<u64>, lo: u128, found: Option<u128>) -> SearchResult {
        SearchResult {
            lo,
            hi: 10u128.pow(21),
            ells,
            found,
            primes_examined: 0,
        }
    }

    #[test]
    fn bound_requires_full_detector_set() {
        let partial = result(vec![11, 31], 0, Some(CLAIMED_LEAST_PRIME));
        assert!(matches!(nonvanishing_bound(&partial), Err(LehmerError::Refused(_))));
        let late = result(REQUIRED_ELLS.to_vec(), 1000, Some(CLAIMED_LEAST_PRIME));
        assert!(matches!(nonvanishing_bound(&late), Err(LehmerError::Refused(_))));
        let full = result(REQUIRED_ELLS.to_vec(), 0, Some(CLAIMED_LEAST_PRIME));
        let b = nonvanishing_bound(&full).unwrap();
        assert_eq!(b.bound, "982149821766199295999");
        assert!((43.0..=43.2).contains(&b.ratio_to_previous), "{}", b.ratio_to_previous);
        let none = result(REQUIRED_ELLS.to_vec(), 0, None);
        assert_eq!(nonvanishing_bound(&none).unwrap().bound, (10u128.pow(21)).to_string());
    }

    #[test]
    fn merge_requires_adjacency() {
        let a = SearchResult {
            lo: 0,
            hi: 10,
            ells: vec![31],
            found: None,
            primes_examined: 1,
        };
        let b = SearchResult {
            lo: 10,
            hi: 20,
            ells: vec![31],
            found: Some(13),
            primes_examined: 2,
        };
        let m = a.merge(&b).unwrap();
        assert_eq!((m.lo, m.hi, m.found, m.primes_examined), (0, 20, Some(13), 3));
        assert_eq!(b.merge(&a), Some(m));
        let c = SearchResult { lo: 30, ..b.clone() };
        assert!(a.merge(&c).is_none());
    }

    #[test]
    fn plan_orders_cheap_first() {
        let mut t = DetectorTable::new();
        t.insert(ZeroDetector::elliptic_bsgs());
        t.insert(ZeroDetector::from_record(records::embedded("k12l31").unwrap()).unwrap());
        assert_eq!(t.plan(&[31, 11]).unwrap(), vec![11, 31]);
        assert!(matches!(t.plan(&[11, 13]), Err(LehmerError::MissingDetector(13))));
        assert!(ZeroDetector::from_record(records::embedded("k16l29").unwrap()).is_err());
    }

    #[test]
    fn congruence_failure_short_circuits() {
        let mut t = DetectorTable::new();
        t.insert(ZeroDetector::from_record(records::embedded("k12l31").unwrap()).unwrap());
        let c = verify_candidate(&BigUint::from(1_000_003u32), &[31], &t).unwrap();
        assert!(!c.accepted);
        assert_eq!(c.rejected_at.as_deref(), Some("congruences"));
        assert!(c.detectors.iter().all(|d| d.trace_zero.is_none()));
        assert!(matches!(
            verify_candidate(&BigUint::from(1_000_001u32), &[31], &t),
            Err(LehmerError::NotPrime(_))
        ));
    }
}
