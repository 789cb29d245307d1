//! Traces of Frobenius by baby-step/giant-step in the Hasse interval.

use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::{Integer, Roots};
use num_traits::{CheckedSub, One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::curve::EllipticCurveQ;
use super::Genus1Error;
use crate::arith::is_prime;

/// Largest prime accepted by [`ap_via_bsgs`].
pub fn max_prime() -> BigUint {
    num_traits::pow(BigUint::from(10u32), 24)
}

const SMALL_PRIME: u64 = 1000;
const MAX_POINTS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Pt {
    Inf,
    Aff(BigUint, BigUint),
}

struct ShortCurve {
    p: BigUint,
    a: BigUint,
}

impl ShortCurve {
    fn sub(&self, x: &BigUint, y: &BigUint) -> BigUint {
        if x >= y {
            x - y
        } else {
            &self.p - (y - x)
        }
    }

    fn inv(&self, x: &BigUint) -> BigUint {
        let xi = BigInt::from(x.clone());
        let pi = BigInt::from(self.p.clone());
        let e = xi.extended_gcd(&pi);
        debug_assert!(e.gcd.is_one());
        e.x.mod_floor(&pi).to_biguint().unwrap()
    }

    fn add(&self, p1: &Pt, p2: &Pt) -> Pt {
        let (x1, y1, x2, y2) = match (p1, p2) {
            (Pt::Inf, q) | (q, Pt::Inf) => return q.clone(),
            (Pt::Aff(x1, y1), Pt::Aff(x2, y2)) => (x1, y1, x2, y2),
        };
        let p = &self.p;
        let lambda = if x1 == x2 {
            if (y1 + y2) % p == BigUint::zero() {
                return Pt::Inf;
            }
            let num = (BigUint::from(3u32) * x1 * x1 + &self.a) % p;
            num * self.inv(&((y1 << 1) % p)) % p
        } else {
            self.sub(y2, y1) * self.inv(&self.sub(x2, x1)) % p
        };
        let x3 = self.sub(&(&lambda * &lambda % p), &((x1 + x2) % p));
        let y3 = self.sub(&(&lambda * self.sub(x1, &x3) % p), y1);
        Pt::Aff(x3, y3)
    }

    fn mul(&self, n: &BigUint, q: &Pt) -> Pt {
        let mut acc = Pt::Inf;
        for i in (0..n.bits()).rev() {
            acc = self.add(&acc, &acc);
            if n.bit(i) {
                acc = self.add(&acc, q);
            }
        }
        acc
    }
}

fn key(x: &BigUint) -> u128 {
    x.to_u128().expect("field element wider than 128 bits")
}

/// All N in `[lo, lo + width]` with N·P = O.
fn orders_in_interval(c: &ShortCurve, pt: &Pt, lo: &BigUint, width: u64) -> BTreeSet<BigUint> {
    let s = ((width / 2).sqrt() + 1).max(1);
    let mut table: HashMap<u128, Vec<(u64, BigUint)>> = HashMap::new();
    let mut zero_js = Vec::new();
    let mut cur = Pt::Inf;
    for j in 1..=s {
        cur = c.add(&cur, pt);
        match &cur {
            Pt::Inf => zero_js.push(j),
            Pt::Aff(x, y) => table.entry(key(x)).or_default().push((j, y.clone())),
        }
    }
    let step = 2 * s + 1;
    let giant = c.mul(&BigUint::from(step), pt);
    let mut r = c.mul(lo, pt);
    let hi = lo + width;
    let mut found = BTreeSet::new();
    let mut push = |base: &BigUint, delta: i64| {
        let n = if delta >= 0 {
            base + delta as u64
        } else {
            match base.checked_sub(&BigUint::from((-delta) as u64)) {
                Some(v) => v,
                None => return,
            }
        };
        if &n >= lo && n <= hi {
            found.insert(n);
        }
    };
    let imax = width / step + 1;
    for i in 0..=imax {
        let base = lo + BigUint::from(i * step);
        match &r {
            Pt::Inf => {
                push(&base, 0);
                for &j in &zero_js {
                    push(&base, j as i64);
                    push(&base, -(j as i64));
                }
            }
            Pt::Aff(x, y) => {
                if let Some(hits) = table.get(&key(x)) {
                    for (j, yj) in hits {
                        // R = jP gives N = base − j, R = −jP gives N = base + j
                        if yj == y {
                            push(&base, -(*j as i64));
                        } else {
                            push(&base, *j as i64);
                        }
                    }
                }
            }
        }
        r = c.add(&r, &giant);
    }
    found
}

fn reduce_i(v: &BigInt, p: &BigUint) -> BigUint {
    v.mod_floor(&BigInt::from(p.clone())).to_biguint().unwrap()
}

/// A random point on a curve isomorphic to `y² = x³ + ax + b` over F_p,
/// returned together with that curve. Uses the twist by a square to avoid
/// extracting square roots.
fn random_point(p: &BigUint, a: &BigUint, b: &BigUint, rng: &mut ChaCha8Rng) -> (ShortCurve, Pt) {
    let e = (p - 1u32) >> 1;
    loop {
        let x0 = rng.gen_biguint_below(p);
        let f = (&x0 * &x0 % p * &x0 + a * &x0 + b) % p;
        if f.is_zero() || f.modpow(&e, p) != BigUint::one() {
            continue;
        }
        let f2 = &f * &f % p;
        let curve = ShortCurve {
            p: p.clone(),
            a: a * &f2 % p,
        };
        return (curve, Pt::Aff(&f * &x0 % p, f2));
    }
}

/// Trace of Frobenius of `e` at `p` by BSGS over at most 8 random points,
/// intersecting the sets of admissible group orders.
pub fn ap_via_bsgs(e: &EllipticCurveQ, p: &BigUint) -> Result<BigInt, Genus1Error> {
    if p > &max_prime() {
        return Err(Genus1Error::Precondition(format!("p = {p} exceeds 10^24")));
    }
    if !is_prime(p) {
        return Err(Genus1Error::Precondition(format!("{p} is not prime")));
    }
    let disc = e.discriminant();
    if (&disc % BigInt::from(p.clone())).is_zero() {
        return Err(Genus1Error::BadReduction(p.clone()));
    }
    if let Some(ps) = p.to_u64().filter(|&v| v < SMALL_PRIME) {
        let ap = if ps <= 3 { e.ap_naive(ps) } else { e.ap_legendre(ps) };
        return Ok(BigInt::from(ap));
    }
    ap_bsgs_large(e, p)
}

pub(crate) fn ap_bsgs_large(e: &EllipticCurveQ, p: &BigUint) -> Result<BigInt, Genus1Error> {
    // y² = x³ − 27c4·x − 54c6 is isomorphic to E over Z[1/6]
    let a = reduce_i(&(-BigInt::from(27) * e.c4()), p);
    let b = reduce_i(&(-BigInt::from(54) * e.c6()), p);
    let two_sqrt = (p << 2u32).sqrt() + 1u32;
    let lo = (p + 1u32).checked_sub(&two_sqrt).unwrap_or_default();
    let width = (&two_sqrt << 1u32).to_u64().expect("Hasse interval too wide");
    let seed = (p % BigUint::from(u64::MAX)).to_u64().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Option<BTreeSet<BigUint>> = None;
    for _ in 0..MAX_POINTS {
        let (curve, pt) = random_point(p, &a, &b, &mut rng);
        let found = orders_in_interval(&curve, &pt, &lo, width);
        let next = match candidates {
            None => found,
            Some(prev) => prev.intersection(&found).cloned().collect(),
        };
        if next.len() == 1 {
            let n = next.into_iter().next().unwrap();
            return Ok(BigInt::from(p + 1u32) - BigInt::from(n));
        }
        if next.is_empty() {
            return Err(Genus1Error::Precision(format!("no admissible group order at p = {p}")));
        }
        candidates = Some(next);
    }
    let cands = candidates.unwrap_or_default();
    Err(Genus1Error::AmbiguousOrder {
        p: p.clone(),
        traces: cands.iter().map(|n| BigInt::from(p + 1u32) - BigInt::from(n.clone())).collect(),
    })
}
