//! Distinct-degree factorization patterns of integer polynomials modulo primes.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::int_poly::IntPolynomial;
use super::modp::{BigField, FpPoly, PrimeField, SmallField};
use super::ArithError;

/// Sorted multiset of irreducible-factor degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DegreePattern {
    parts: Vec<usize>,
}

impl DegreePattern {
    pub fn new(mut parts: Vec<usize>) -> Self {
        assert!(parts.iter().all(|&d| d > 0), "degree parts must be positive");
        parts.sort_unstable();
        DegreePattern { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn count(&self, d: usize) -> usize {
        self.parts.iter().filter(|&&x| x == d).count()
    }

    pub fn fixed_points(&self) -> usize {
        self.count(1)
    }

    /// Least common multiple of the parts (order of a permutation with this cycle type).
    pub fn lcm(&self) -> usize {
        self.parts
            .iter()
            .fold(1usize, |acc, &d| num_integer::lcm(acc, d))
    }

    pub fn is_irreducible(&self) -> bool {
        self.parts.len() == 1
    }
}

impl fmt::Display for DegreePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.parts.len() {
            let d = self.parts[i];
            let mut j = i;
            while j < self.parts.len() && self.parts[j] == d {
                j += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if j - i == 1 {
                write!(f, "{d}")?;
            } else {
                write!(f, "{d}^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Result of a possibly truncated distinct-degree pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialPattern {
    /// Factor degrees found so far.
    pub parts: Vec<usize>,
    /// Degree of the part whose factorization was not resolved.
    pub unresolved: usize,
}

/// Frobenius data for a monic squarefree `f` over `F_p`: the rows are `x^(p*j) mod f`.
struct FrobeniusMatrix<F: PrimeField> {
    rows: Vec<FpPoly<F>>,
}

impl<F: PrimeField> FrobeniusMatrix<F> {
    fn new(f: &FpPoly<F>, field: &F) -> (Self, FpPoly<F>) {
        let n = f.deg() as usize;
        let xp = FpPoly::x_pow_mod(&field.characteristic(), f, field);
        let mut rows = Vec::with_capacity(n);
        rows.push(FpPoly::constant(field.one(), field));
        for j in 1..n {
            let next = field.poly_mulmod(&rows[j - 1], &xp, f);
            rows.push(next);
        }
        (FrobeniusMatrix { rows }, xp)
    }

    /// `h^p mod f`, using `h(x)^p = sum h_j x^(p j)`.
    fn apply(&self, h: &FpPoly<F>, field: &F) -> FpPoly<F> {
        let n = self.rows.len();
        let mut out = vec![field.zero(); n];
        for (j, hj) in h.coeffs.iter().enumerate() {
            if field.is_zero(hj) {
                continue;
            }
            for (k, r) in self.rows[j].coeffs.iter().enumerate() {
                out[k] = field.add(&out[k], &field.mul(hj, r));
            }
        }
        FpPoly::trimmed(out, field)
    }
}

/// Reduces `poly` modulo `p` and makes it monic; errors on a vanishing
/// leading coefficient or a non-squarefree reduction.
fn prepare<F: PrimeField>(
    poly: &IntPolynomial,
    field: &F,
) -> Result<FpPoly<F>, ArithError> {
    if poly.is_zero() {
        return Err(ArithError::ZeroPolynomial);
    }
    let f = FpPoly::from_ints(poly.coeffs(), field);
    if f.deg() != poly.deg() {
        return Err(ArithError::LeadingCoefficientVanishes(
            field.characteristic().to_string(),
        ));
    }
    let f = f.make_monic(field);
    if f.deg() >= 1 {
        let g = f.gcd(&f.derivative(field), field);
        if g.deg() != 0 {
            return Err(ArithError::NotSquarefree(field.characteristic().to_string()));
        }
    }
    Ok(f)
}

/// Distinct-degree splitting, stopping once every factor of degree
/// `<= max_degree` has been extracted.
fn ddf_generic<F: PrimeField>(
    f: &FpPoly<F>,
    field: &F,
    max_degree: Option<usize>,
) -> PartialPattern {
    let n = f.deg();
    if n <= 0 {
        return PartialPattern {
            parts: vec![],
            unresolved: 0,
        };
    }
    if n == 1 {
        return PartialPattern {
            parts: vec![1],
            unresolved: 0,
        };
    }
    let (frob, xp) = FrobeniusMatrix::new(f, field);
    let x = FpPoly::x(field);
    let mut parts = Vec::new();
    let mut cur = f.clone();
    let mut h = xp;
    let mut i = 1usize;
    loop {
        let dc = cur.deg() as usize;
        if dc == 0 {
            break;
        }
        if 2 * i > dc {
            parts.push(dc);
            cur = FpPoly::constant(field.one(), field);
            break;
        }
        if max_degree.is_some_and(|m| i > m) {
            break;
        }
        let t = h.sub(&x, field).rem(&cur, field);
        let g = t.gcd(&cur, field);
        let dg = g.deg() as usize;
        if dg > 0 {
            debug_assert_eq!(dg % i, 0);
            parts.extend(std::iter::repeat_n(i, dg / i));
            cur = cur.div_rem(&g, field).0;
        }
        i += 1;
        if 2 * i <= cur.deg() as usize {
            h = frob.apply(&h, field);
        }
    }
    let unresolved = cur.deg().max(0) as usize;
    PartialPattern { parts, unresolved }
}

fn with_field<R>(
    p: &BigUint,
    small: impl FnOnce(SmallField) -> R,
    big: impl FnOnce(BigField) -> R,
) -> R {
    match p.to_u64() {
        Some(q) if q < (1u64 << 62) => small(SmallField::new(q)),
        _ => big(BigField::new(p.clone())),
    }
}

/// Degree pattern of `poly mod p`.
///
/// Fails with [`ArithError::NotSquarefree`] when the reduction has a repeated
/// factor and with [`ArithError::LeadingCoefficientVanishes`] when `p` divides
/// the leading coefficient.
pub fn ddf_pattern(poly: &IntPolynomial, p: &BigUint) -> Result<DegreePattern, ArithError> {
    let partial = ddf_partial(poly, p, None)?;
    debug_assert_eq!(partial.unresolved, 0);
    Ok(DegreePattern::new(partial.parts))
}

/// Truncated variant of [`ddf_pattern`]: factors of degree above `max_degree`
/// are only reported in aggregate through `unresolved` (unless the remainder
/// is provably irreducible, in which case it is listed as a part).
pub fn ddf_partial(
    poly: &IntPolynomial,
    p: &BigUint,
    max_degree: Option<usize>,
) -> Result<PartialPattern, ArithError> {
    if p < &BigUint::from(2u32) {
        return Err(ArithError::NotPrime(p.to_string()));
    }
    with_field(
        p,
        |f| prepare(poly, &f).map(|g| ddf_generic(&g, &f, max_degree)),
        |f| prepare(poly, &f).map(|g| ddf_generic(&g, &f, max_degree)),
    )
}

/// True iff `poly mod p` is squarefree of full degree.
pub fn is_good_reduction(poly: &IntPolynomial, p: &BigUint) -> bool {
    with_field(p, |f| prepare(poly, &f).is_ok(), |f| prepare(poly, &f).is_ok())
}

/// Number of roots of `poly` in `F_p` (with `p` word-sized), by evaluation.
/// Used only as a cross-check on small inputs.
pub fn count_roots_naive(poly: &IntPolynomial, p: u64) -> usize {
    let field = SmallField::new(p);
    let f = FpPoly::from_ints(poly.coeffs(), &field);
    (0..p).filter(|&a| f.eval(&a, &field) == 0).count()
}

/// Reduction of an integer to a residue in `[0, p)`.
pub fn residue(a: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((a % &m) + &m) % &m;
    r.to_u64().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn trivial_patterns() {
        let three = BigUint::from(3u32);
        assert_eq!(ddf_pattern(&p(&[-1, 0, 1]), &three).unwrap().parts(), &[1, 1]);
        assert_eq!(ddf_pattern(&p(&[1, 0, 1]), &three).unwrap().parts(), &[2]);
    }

    #[test]
    fn not_squarefree_is_reported() {
        let r = ddf_pattern(&p(&[1, 2, 1]), &BigUint::from(7u32));
        assert!(matches!(r, Err(ArithError::NotSquarefree(_))));
        // x^5 - 1 = (x - 1)^5 mod 5
        let r = ddf_pattern(&p(&[-1, 0, 0, 0, 0, 1]), &BigUint::from(5u32));
        assert!(matches!(r, Err(ArithError::NotSquarefree(_))));
    }

    #[test]
    fn leading_coefficient_vanishing() {
        let r = ddf_pattern(&p(&[1, 1, 3]), &BigUint::from(3u32));
        assert!(matches!(r, Err(ArithError::LeadingCoefficientVanishes(_))));
    }

    #[test]
    fn cyclotomic_pattern() {
        // Phi_7 splits into (7-1)/ord_p(7) factors of degree ord; for p = 2, ord = 3.
        let phi7 = p(&[1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(ddf_pattern(&phi7, &BigUint::from(2u32)).unwrap().parts(), &[3, 3]);
        assert_eq!(ddf_pattern(&phi7, &BigUint::from(29u32)).unwrap().parts(), &[1; 6]);
        assert_eq!(ddf_pattern(&phi7, &BigUint::from(3u32)).unwrap().parts(), &[6]);
    }

    #[test]
    fn big_field_agrees_with_small() {
        // p = 1000003 handled by both field implementations.
        let poly = p(&[-2, 0, 0, 0, 0, 1, 0, 3, 0, 1]);
        let q = 1_000_003u64;
        let small = ddf_generic(
            &prepare(&poly, &SmallField::new(q)).unwrap(),
            &SmallField::new(q),
            None,
        );
        let bf = BigField::new(BigUint::from(q));
        let big = ddf_generic(&prepare(&poly, &bf).unwrap(), &bf, None);
        assert_eq!(
            DegreePattern::new(small.parts),
            DegreePattern::new(big.parts)
        );
    }

    #[test]
    fn pattern_display() {
        let d = DegreePattern::new(vec![10, 1, 10, 1, 10]);
        assert_eq!(d.to_string(), "1^2 10^3");
        assert_eq!(d.lcm(), 10);
    }

    /// Factor degrees by trial division with every monic polynomial of
    /// degree <= deg/2 (feasible for deg <= 6 and p < 50).
    fn brute_force_pattern(f: &[u64], p: u64) -> Vec<usize> {
        fn divide(f: &[u64], g: &[u64], p: u64) -> Option<Vec<u64>> {
            let mut r = f.to_vec();
            let dg = g.len() - 1;
            let mut q = vec![0u64; f.len() - dg];
            for i in (0..q.len()).rev() {
                let c = r[i + dg];
                q[i] = c;
                for (j, &gj) in g.iter().enumerate() {
                    r[i + j] = (r[i + j] + p * p - c * gj % p) % p;
                }
            }
            r[..dg].iter().all(|&x| x == 0).then_some(q)
        }
        let mut cur = f.to_vec();
        let mut parts = vec![];
        let mut d = 1;
        while 2 * d < cur.len() {
            let count = p.pow(d as u32);
            let mut found = false;
            for idx in 0..count {
                let mut g = vec![0u64; d + 1];
                let mut t = idx;
                for c in g.iter_mut().take(d) {
                    *c = t % p;
                    t /= p;
                }
                g[d] = 1;
                if let Some(q) = divide(&cur, &g, p) {
                    parts.push(d);
                    cur = q;
                    found = true;
                    break;
                }
            }
            if !found {
                d += 1;
            }
        }
        if cur.len() > 1 {
            parts.push(cur.len() - 1);
        }
        parts.sort_unstable();
        parts
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn agrees_with_brute_force(
            lower in proptest::collection::vec(0u64..1000, 1..=6),
            pi in 0usize..15,
        ) {
            let p = primality_small()[pi];
            let mut coeffs: Vec<u64> = lower.iter().map(|c| c % p).collect();
            coeffs.push(1);
            let poly = IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect());
            match ddf_pattern(&poly, &BigUint::from(p)) {
                Ok(pat) => {
                    proptest::prop_assert_eq!(pat.total(), coeffs.len() - 1);
                    proptest::prop_assert_eq!(pat.parts().to_vec(), brute_force_pattern(&coeffs, p));
                }
                Err(ArithError::NotSquarefree(_)) => {}
                Err(e) => proptest::prop_assert!(false, "unexpected {e}"),
            }
        }
    }

    fn primality_small() -> Vec<u64> {
        crate::arith::primality::primes_below(50)
    }
}
