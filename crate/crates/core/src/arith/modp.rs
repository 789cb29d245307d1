//! Arithmetic in `F_p` and `F_p[x]` for word-sized and arbitrary-size `p`.
//!
//! Polynomial routines are generic over [`PrimeField`]; the big-modulus field
//! overrides modular polynomial multiplication with a lazily reduced variant
//! that keeps the modulus coefficients as small signed integers when possible.

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub trait PrimeField: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn characteristic(&self) -> BigUint;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_bigint(&self, a: &BigInt) -> Self::Elem;
    fn from_u64(&self, a: u64) -> Self::Elem;
    fn to_biguint(&self, a: &Self::Elem) -> BigUint;

    /// `a * b mod f` for `a, b` already reduced modulo the monic `f`.
    fn poly_mulmod(&self, a: &FpPoly<Self>, b: &FpPoly<Self>, f: &FpPoly<Self>) -> FpPoly<Self> {
        a.mul(b, self).rem(f, self)
    }
}

/// `F_p` with `p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallField {
    p: u64,
}

impl SmallField {
    pub fn new(p: u64) -> Self {
        assert!((2..(1 << 63)).contains(&p));
        SmallField { p }
    }
    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl PrimeField for SmallField {
    type Elem = u64;

    fn characteristic(&self) -> BigUint {
        BigUint::from(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod_u64(*a, self.p).expect("inverse of zero")
    }
    fn from_bigint(&self, a: &BigInt) -> u64 {
        a.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
    fn from_u64(&self, a: u64) -> u64 {
        a % self.p
    }
    fn to_biguint(&self, a: &u64) -> BigUint {
        BigUint::from(*a)
    }
}

/// Modular inverse of `a` modulo `m` (any modulus), if it exists.
pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

pub fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// `F_p` for arbitrary `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigField {
    p: BigUint,
    p_int: BigInt,
    half: BigUint,
}

impl BigField {
    pub fn new(p: BigUint) -> Self {
        assert!(p >= BigUint::from(2u32));
        let half = &p >> 1u32;
        BigField {
            p_int: BigInt::from(p.clone()),
            p,
            half,
        }
    }
    pub fn modulus(&self) -> &BigUint {
        &self.p
    }

    fn reduce_int(&self, a: &BigInt) -> BigUint {
        let r = a.mod_floor(&self.p_int);
        r.to_biguint().unwrap()
    }

    /// Symmetric lift in `(-p/2, p/2]`.
    fn symmetric(&self, a: &BigUint) -> BigInt {
        if a > &self.half {
            BigInt::from(a.clone()) - &self.p_int
        } else {
            BigInt::from(a.clone())
        }
    }
}

impl PrimeField for BigField {
    type Elem = BigUint;

    fn characteristic(&self) -> BigUint {
        self.p.clone()
    }
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.p {
            s - &self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + &self.p - b
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.p
    }
    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.p - a
        }
    }
    fn inv(&self, a: &BigUint) -> BigUint {
        let e = BigInt::from(a.clone()).extended_gcd(&self.p_int);
        assert!(e.gcd.is_one(), "inverse of non-unit");
        self.reduce_int(&e.x)
    }
    fn from_bigint(&self, a: &BigInt) -> BigUint {
        self.reduce_int(a)
    }
    fn from_u64(&self, a: u64) -> BigUint {
        BigUint::from(a) % &self.p
    }
    fn to_biguint(&self, a: &BigUint) -> BigUint {
        a.clone()
    }

    fn poly_mulmod(&self, a: &FpPoly<Self>, b: &FpPoly<Self>, f: &FpPoly<Self>) -> FpPoly<Self> {
        if a.is_zero() || b.is_zero() {
            return FpPoly::zero();
        }
        let n = f.coeffs.len() - 1;
        // Unreduced product; squaring uses the symmetric half.
        let la = a.coeffs.len();
        let lb = b.coeffs.len();
        let mut acc: Vec<BigUint> = vec![BigUint::zero(); la + lb - 1];
        if std::ptr::eq(a, b) || a.coeffs == b.coeffs {
            for i in 0..la {
                if a.coeffs[i].is_zero() {
                    continue;
                }
                acc[2 * i] += &a.coeffs[i] * &a.coeffs[i];
                for j in (i + 1)..la {
                    let t = &a.coeffs[i] * &a.coeffs[j];
                    acc[i + j] += &t << 1u32;
                }
            }
        } else {
            for (i, x) in a.coeffs.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.coeffs.iter().enumerate() {
                    acc[i + j] += x * y;
                }
            }
        }
        if acc.len() <= n {
            return FpPoly::trimmed(acc.into_iter().map(|c| c % &self.p).collect(), self);
        }
        // Reduce modulo the monic f using symmetric lifts of its coefficients.
        let lifts: Vec<BigInt> = f.coeffs[..n].iter().map(|c| self.symmetric(c)).collect();
        let mut signed: Vec<BigInt> = acc.into_iter().map(BigInt::from).collect();
        for i in (n..signed.len()).rev() {
            let c = self.reduce_int(&signed[i]);
            if c.is_zero() {
                continue;
            }
            let c = BigInt::from(c);
            for (j, fj) in lifts.iter().enumerate() {
                if fj.is_zero() {
                    continue;
                }
                let t = &c * fj;
                signed[i - n + j] -= t;
            }
        }
        signed.truncate(n);
        FpPoly::trimmed(signed.iter().map(|c| self.reduce_int(c)).collect(), self)
    }
}

/// Polynomial over a prime field, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct FpPoly<F: PrimeField> {
    pub coeffs: Vec<F::Elem>,
}

impl<F: PrimeField> FpPoly<F> {
    pub fn zero() -> Self {
        FpPoly { coeffs: Vec::new() }
    }

    pub fn trimmed(mut coeffs: Vec<F::Elem>, field: &F) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        FpPoly { coeffs }
    }

    pub fn from_ints(c: &[BigInt], field: &F) -> Self {
        Self::trimmed(c.iter().map(|x| field.from_bigint(x)).collect(), field)
    }

    pub fn x(field: &F) -> Self {
        FpPoly::trimmed(vec![field.zero(), field.one()], field)
    }

    pub fn constant(c: F::Elem, field: &F) -> Self {
        Self::trimmed(vec![c], field)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self, field: &F) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = field.zero();
        let v = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&z);
                let b = o.coeffs.get(i).unwrap_or(&z);
                field.add(a, b)
            })
            .collect();
        Self::trimmed(v, field)
    }

    pub fn sub(&self, o: &Self, field: &F) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = field.zero();
        let v = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&z);
                let b = o.coeffs.get(i).unwrap_or(&z);
                field.sub(a, b)
            })
            .collect();
        Self::trimmed(v, field)
    }

    pub fn mul(&self, o: &Self, field: &F) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = field.add(&out[i + j], &field.mul(a, b));
            }
        }
        Self::trimmed(out, field)
    }

    pub fn scale(&self, s: &F::Elem, field: &F) -> Self {
        Self::trimmed(self.coeffs.iter().map(|c| field.mul(c, s)).collect(), field)
    }

    pub fn make_monic(&self, field: &F) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = field.inv(l);
                self.scale(&inv, field)
            }
        }
    }

    pub fn is_monic(&self, field: &F) -> bool {
        self.leading().is_some_and(|l| *l == field.one())
    }

    pub fn derivative(&self, field: &F) -> Self {
        Self::trimmed(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| field.mul(c, &field.from_u64(i as u64)))
                .collect(),
            field,
        )
    }

    pub fn div_rem(&self, b: &Self, field: &F) -> (Self, Self) {
        assert!(!b.is_zero(), "division by zero polynomial");
        let db = b.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return (Self::zero(), self.clone());
        }
        let inv_lb = field.inv(b.leading().unwrap());
        let mut r = self.coeffs.clone();
        let mut q = vec![field.zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            if field.is_zero(&r[i]) {
                continue;
            }
            let c = field.mul(&r[i], &inv_lb);
            for j in 0..db {
                let t = field.mul(&c, &b.coeffs[j]);
                r[i - db + j] = field.sub(&r[i - db + j], &t);
            }
            r[i] = field.zero();
            q[i - db] = c;
        }
        r.truncate(db);
        (Self::trimmed(q, field), Self::trimmed(r, field))
    }

    pub fn rem(&self, b: &Self, field: &F) -> Self {
        self.div_rem(b, field).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, o: &Self, field: &F) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b, field);
            a = b;
            b = r;
        }
        a.make_monic(field)
    }

    pub fn eval(&self, x: &F::Elem, field: &F) -> F::Elem {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x), c);
        }
        acc
    }

    /// `x * self mod f` for monic `f` and `self` reduced.
    pub fn mul_x_mod(&self, f: &Self, field: &F) -> Self {
        let n = f.coeffs.len() - 1;
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(field.zero());
        v.extend(self.coeffs.iter().cloned());
        if v.len() <= n {
            return Self::trimmed(v, field);
        }
        let top = v.pop().unwrap();
        for j in 0..n {
            let t = field.mul(&top, &f.coeffs[j]);
            v[j] = field.sub(&v[j], &t);
        }
        Self::trimmed(v, field)
    }

    /// `x^e mod f` by left-to-right binary exponentiation; `f` monic.
    pub fn x_pow_mod(e: &BigUint, f: &Self, field: &F) -> Self {
        let one = Self::constant(field.one(), field);
        if f.deg() == 0 {
            return Self::zero();
        }
        let mut acc = one;
        for i in (0..e.bits()).rev() {
            acc = field.poly_mulmod(&acc, &acc, f);
            if e.bit(i) {
                acc = acc.mul_x_mod(f, field);
            }
        }
        acc
    }

    /// `self^e mod f` for reduced `self`, monic `f`.
    pub fn pow_mod(&self, e: &BigUint, f: &Self, field: &F) -> Self {
        let mut acc = Self::constant(field.one(), field).rem(f, field);
        for i in (0..e.bits()).rev() {
            acc = field.poly_mulmod(&acc, &acc, f);
            if e.bit(i) {
                acc = field.poly_mulmod(&acc, self, f);
            }
        }
        acc
    }
}

/// Symmetric residue of a `BigUint` residue as a `BigInt`.
pub fn centered(a: &BigUint, p: &BigUint) -> BigInt {
    let half = p >> 1u32;
    if a > &half {
        BigInt::from_biguint(Sign::Minus, p - a)
    } else {
        BigInt::from(a.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_field_inverse() {
        let f = SmallField::new(31);
        for a in 1..31u64 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(inv_mod_u64(6, 9), None);
    }

    #[test]
    fn big_mulmod_matches_generic() {
        let p = BigUint::parse_bytes(b"1000000000000000000000000000057", 10).unwrap();
        let field = BigField::new(p);
        let f = FpPoly::from_ints(&ints(&[-7, 3, 0, -5, 1]), &field);
        let a = FpPoly::from_ints(&ints(&[123456789, -42, 99, 5]), &field);
        let b = FpPoly::from_ints(&ints(&[-1, 2, 3]), &field);
        let fast = field.poly_mulmod(&a, &b, &f);
        let slow = a.mul(&b, &field).rem(&f, &field);
        assert_eq!(fast, slow);
        let sq = field.poly_mulmod(&a, &a, &f);
        assert_eq!(sq, a.mul(&a, &field).rem(&f, &field));
    }

    #[test]
    fn x_pow_mod_small() {
        let field = SmallField::new(5);
        let f = FpPoly::from_ints(&ints(&[2, 0, 1]), &field); // x^2 + 2
        // x^5 = x * (x^2)^2 = x * 4 = 4x mod (x^2+2)
        let r = FpPoly::x_pow_mod(&BigUint::from(5u32), &f, &field);
        assert_eq!(r.coeffs, vec![0, 4]);
    }
}
