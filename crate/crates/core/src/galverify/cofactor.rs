//! Certifying that an unfactored discriminant cofactor B is coprime to the
//! field discriminant: with h = P / gcd(P, P') computed in (Z/BZ)[x], the
//! element h̃(θ)/B is shown to be an algebraic integer.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::modp::{FpPoly, SmallField};
use crate::arith::{is_prime, poly_disc, IntPolynomial};

use super::dedekind::radical_mod;
use super::GalverifyError;

/// Polynomial arithmetic in (Z/mZ)[x], constant term first, no trailing zeros.
struct ModRing {
    m: BigInt,
}

impl ModRing {
    fn red(&self, a: &BigInt) -> BigInt {
        a.mod_floor(&self.m)
    }

    fn trim(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }

    fn from_int(&self, p: &IntPolynomial) -> Vec<BigInt> {
        self.trim(p.coeffs().iter().map(|c| self.red(c)).collect())
    }

    /// Inverse of a unit; otherwise the nontrivial gcd with m.
    fn inv(&self, a: &BigInt) -> Result<BigInt, BigInt> {
        let e = a.extended_gcd(&self.m);
        if e.gcd.is_one() {
            Ok(self.red(&e.x))
        } else {
            Err(e.gcd.abs())
        }
    }

    fn div_rem(&self, a: &[BigInt], b: &[BigInt]) -> Result<(Vec<BigInt>, Vec<BigInt>), BigInt> {
        let db = b.len() - 1;
        let li = self.inv(&b[db])?;
        let mut r = a.to_vec();
        if r.len() <= db {
            return Ok((vec![], self.trim(r)));
        }
        let mut q = vec![BigInt::zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            let c = self.red(&(&r[i] * &li));
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                r[i - db + j] = self.red(&(&r[i - db + j] - &c * bj));
            }
            q[i - db] = c;
        }
        r.truncate(db);
        Ok((self.trim(q), self.trim(r)))
    }

    fn gcd(&self, a: &[BigInt], b: &[BigInt]) -> Result<Vec<BigInt>, BigInt> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.div_rem(&a, &b)?.1;
            a = b;
            b = r;
        }
        if a.is_empty() {
            return Ok(a);
        }
        let li = self.inv(a.last().unwrap())?;
        Ok(a.iter().map(|c| self.red(&(c * &li))).collect())
    }

    fn mulmod(&self, a: &[BigInt], b: &[BigInt], f: &IntPolynomial) -> Vec<BigInt> {
        let n = f.deg() as usize;
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut acc = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                acc[i + j] += x * y;
            }
        }
        let fc = f.coeffs();
        for i in (n..acc.len()).rev() {
            let c = self.red(&std::mem::take(&mut acc[i]));
            if c.is_zero() {
                continue;
            }
            for (j, fj) in fc[..n].iter().enumerate() {
                if !fj.is_zero() {
                    acc[i - n + j] -= &c * fj;
                }
            }
        }
        acc.truncate(n);
        self.trim(acc.iter().map(|c| self.red(c)).collect())
    }
}

/// h = P / gcd(P, P') over Z/BZ (the radical over F_B when B is a small prime).
fn reduced_part(poly: &IntPolynomial, b: &BigUint) -> Result<Vec<BigInt>, GalverifyError> {
    let n = poly.deg() as usize;
    if let Some(q) = b.to_u64().filter(|&q| q as usize <= n && is_prime(b)) {
        let field = SmallField::new(q);
        let r = radical_mod(&FpPoly::from_ints(poly.coeffs(), &field), &field);
        return Ok(r.coeffs.iter().map(|&c| BigInt::from(c)).collect());
    }
    let ring = ModRing { m: BigInt::from(b.clone()) };
    let split = |g: BigInt| GalverifyError::NonInvertibleLeading {
        factor: g.to_string(),
    };
    let p = ring.from_int(poly);
    let dp = ring.from_int(&poly.derivative());
    if dp.is_empty() {
        return Ok(vec![BigInt::one()]);
    }
    let g = ring.gcd(&p, &dp).map_err(split)?;
    let (h, r) = ring.div_rem(&p, &g).map_err(split)?;
    if !r.is_empty() {
        return Err(GalverifyError::CofactorPreconditions(
            "gcd does not divide P modulo B".into(),
        ));
    }
    Ok(h)
}

/// Power sums Tr(θ^j), j < n, of the roots of the monic `poly`.
fn root_power_sums(poly: &IntPolynomial) -> Vec<BigInt> {
    let n = poly.deg() as usize;
    let a = poly.coeffs();
    let mut s = vec![BigInt::from(n as u64)];
    for k in 1..n {
        let mut v = -BigInt::from(k as u64) * &a[n - k];
        for i in 1..k {
            v -= &a[n - i] * &s[k - i];
        }
        s.push(v);
    }
    s
}

/// Elementary symmetric functions e_1..e_n of the conjugates of α = a(θ),
/// modulo m, via Newton's identities. Needs gcd(n!, m) = 1.
pub(crate) fn elementary_newton(poly: &IntPolynomial, a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = poly.deg() as usize;
    let ring = ModRing { m: m.clone() };
    let tr = root_power_sums(poly);
    let trace = |v: &[BigInt]| ring.red(&v.iter().zip(&tr).map(|(x, t)| x * t).sum::<BigInt>());
    let a = ring.trim(a.iter().map(|c| ring.red(c)).collect());
    let mut pw = a.clone();
    let mut s = vec![BigInt::zero()];
    for k in 1..=n {
        if k > 1 {
            pw = ring.mulmod(&pw, &a, poly);
        }
        s.push(trace(&pw));
    }
    let mut e = vec![BigInt::one()];
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let t = &e[k - i] * &s[i];
            if i % 2 == 1 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        let inv = ring.inv(&BigInt::from(k as u64)).expect("k invertible");
        e.push(ring.red(&(acc * inv)));
    }
    e.remove(0);
    e
}

/// det(xI − A) over Z/mZ by the division-free Berkowitz recursion; returns
/// the coefficients highest degree first, starting with 1.
pub(crate) fn berkowitz(a: &[Vec<BigInt>], m: &BigInt) -> Vec<BigInt> {
    let n = a.len();
    let red = |x: BigInt| x.mod_floor(m);
    let mut v = vec![BigInt::one()];
    for k in 0..n {
        let mut col = vec![BigInt::one(), red(-&a[k][k])];
        let mut x: Vec<BigInt> = (0..k).map(|i| a[i][k].clone()).collect();
        for _ in 0..k {
            let rx: BigInt = (0..k).map(|i| &a[k][i] * &x[i]).sum();
            col.push(red(-rx));
            x = (0..k)
                .map(|i| red((0..k).map(|j| &a[i][j] * &x[j]).sum()))
                .collect();
        }
        let mut nv = vec![BigInt::zero(); k + 2];
        for (i, slot) in nv.iter_mut().enumerate() {
            let mut acc = BigInt::zero();
            for (j, vj) in v.iter().enumerate().take(i.min(k) + 1) {
                acc += &col[i - j] * vj;
            }
            *slot = red(acc);
        }
        v = nv;
    }
    v
}

fn elementary_berkowitz(poly: &IntPolynomial, a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = poly.deg() as usize;
    let ring = ModRing { m: m.clone() };
    let a = ring.trim(a.iter().map(|c| ring.red(c)).collect());
    // Row i of the matrix: θ^i · α in the power basis.
    let mut rows = Vec::with_capacity(n);
    let mut cur = a.clone();
    for _ in 0..n {
        let mut r = cur.clone();
        r.resize(n, BigInt::zero());
        rows.push(r);
        cur = ring.mulmod(&cur, &[BigInt::zero(), BigInt::one()], poly);
    }
    // Charpoly of the transpose is the same.
    let c = berkowitz(&rows, m);
    (1..=n)
        .map(|k| {
            let v = &c[k];
            if k % 2 == 1 {
                ring.red(&-v)
            } else {
                v.clone()
            }
        })
        .collect()
}

fn small_factorial_coprime(n: usize, b: &BigUint) -> bool {
    (2..=n as u64).all(|k| b.gcd(&BigUint::from(k)).is_one())
}

/// True iff h̃(θ)/B is integral. Errors with `NonInvertibleLeading` when a
/// zero divisor of Z/BZ shows up, which hands back a factor of B.
pub fn cofactor_integrality_test(poly: &IntPolynomial, b: &BigUint) -> Result<bool, GalverifyError> {
    if b.is_one() {
        return Ok(true);
    }
    if b.is_zero() {
        return Err(GalverifyError::CofactorPreconditions("B must be positive".into()));
    }
    if !poly.is_monic() {
        return Err(GalverifyError::NotMonic);
    }
    let disc = poly_disc(poly).map_err(GalverifyError::Arith)?;
    let b2 = BigInt::from(b * b);
    if !(disc % &b2).is_zero() {
        return Err(GalverifyError::CofactorPreconditions("B² does not divide disc P".into()));
    }
    let n = poly.deg() as usize;
    let h = reduced_part(poly, b)?;
    if h.len() > n {
        // gcd(P, P') is a unit mod B: nothing to certify.
        return Ok(false);
    }
    let bi = BigInt::from(b.clone());
    let m = num_traits::pow(bi.clone(), n);
    let e = if small_factorial_coprime(n, b) {
        elementary_newton(poly, &h, &m)
    } else {
        elementary_berkowitz(poly, &h, &m)
    };
    let mut bk = BigInt::one();
    for ek in &e {
        bk *= &bi;
        if !(ek % &bk).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct CofactorPart {
    pub digits: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CofactorCertificate {
    pub digits: usize,
    /// Pieces after splitting on zero divisors met in Z/BZ.
    pub parts: Vec<CofactorPart>,
    pub passed: bool,
}

/// Runs the integrality test on B, splitting B whenever the Euclidean
/// algorithm exposes a factor, until every piece is decided.
pub fn certify_cofactor(poly: &IntPolynomial, b: &BigUint) -> Result<CofactorCertificate, GalverifyError> {
    let mut todo = vec![b.clone()];
    let mut parts = Vec::new();
    while let Some(x) = todo.pop() {
        match cofactor_integrality_test(poly, &x) {
            Ok(passed) => parts.push(CofactorPart {
                digits: x.to_string().len(),
                passed,
            }),
            Err(GalverifyError::NonInvertibleLeading { factor }) => {
                let g: BigUint = factor.parse().expect("decimal factor");
                let other = &x / &g;
                log::info!("cofactor split into {} and {} digits", g.to_string().len(), other.to_string().len());
                todo.push(g);
                todo.push(other);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(CofactorCertificate {
        digits: b.to_string().len(),
        passed: parts.iter().all(|p| p.passed),
        parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FpMatrix;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn small_cases() {
        assert!(cofactor_integrality_test(&p(&[3, 0, 1]), &BigUint::from(2u32)).unwrap());
        assert!(cofactor_integrality_test(&p(&[-2, 0, 1]), &BigUint::one()).unwrap());
        // x^2 + 27: (27 = 3^3) the element (θ)/3 is integral, disc -108 = 3^3 · -4
        assert!(cofactor_integrality_test(&p(&[27, 0, 1]), &BigUint::from(3u32)).unwrap());
        // x^2 - 3: disc 12, B = 2: Z[√3] is 2-maximal.
        assert!(!cofactor_integrality_test(&p(&[-3, 0, 1]), &BigUint::from(2u32)).unwrap());
        assert!(matches!(
            cofactor_integrality_test(&p(&[-2, 0, 1]), &BigUint::from(3u32)),
            Err(GalverifyError::CofactorPreconditions(_))
        ));
    }

    #[test]
    fn eisenstein_cofactor_is_rejected() {
        // x^3 - 2q is Eisenstein at q, so q divides the field discriminant.
        let q = 1_000_003i64;
        let f = p(&[-2 * q, 0, 0, 1]);
        assert!(!cofactor_integrality_test(&f, &BigUint::from(q as u64)).unwrap());
        // x^3 - 2q^3·... θ = q·∛2 gives an integral θ/q.
        let f = IntPolynomial::new(vec![-BigInt::from(2) * BigInt::from(q).pow(3), 0.into(), 0.into(), 1.into()]);
        assert!(cofactor_integrality_test(&f, &BigUint::from(q as u64)).unwrap());
    }

    #[test]
    fn composite_modulus() {
        // (x - 13·7)(x + 13·7)... use x^2 - 91^2·5 = x^2 - 41405: disc 4·5·91², B = 91.
        let f = p(&[-41405, 0, 1]);
        assert!(cofactor_integrality_test(&f, &BigUint::from(91u32)).unwrap());
        let c = certify_cofactor(&f, &BigUint::from(91u32)).unwrap();
        assert!(c.passed);
    }

    #[test]
    fn berkowitz_matches_field_charpoly() {
        let q = 101u64;
        let rows: Vec<Vec<u64>> = (0..5).map(|i| (0..5).map(|j| (i * 7 + j * j * 3 + 1) % q).collect()).collect();
        let fm = FpMatrix::from_rows(q, 5, &rows);
        let mut expect = fm.charpoly();
        expect.reverse();
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let got: Vec<u64> = berkowitz(&big, &BigInt::from(q)).iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(got, expect);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn newton_matches_berkowitz(c in proptest::collection::vec(-20i64..20, 2..6),
                                    a in proptest::collection::vec(-50i64..50, 1..6),
                                    m in prop_oneof![Just(1009u64), Just(7919u64 * 7919), Just(1_000_003u64)]) {
            let mut c = c;
            c.push(1);
            let f = p(&c);
            let n = f.deg() as usize;
            let a: Vec<BigInt> = a.iter().take(n).map(|&x| BigInt::from(x)).collect();
            let m = BigInt::from(m);
            prop_assert_eq!(elementary_newton(&f, &a, &m), elementary_berkowitz(&f, &a, &m));
        }
    }
}
