//! Dense polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer polynomial, constant term first.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and `degree()` is `None` for it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * x^n`.
    pub fn monomial(c: BigInt, n: usize) -> Self {
        let mut v = vec![BigInt::zero(); n + 1];
        v[n] = c;
        Self::new(v)
    }

    /// `x - a`
    pub fn linear_root(a: BigInt) -> Self {
        Self::new(vec![-a, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree as a signed integer, `-1` for the zero polynomial.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Divides every coefficient by `d`, which must divide all of them.
    pub fn div_exact_scalar(&self, d: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(d);
                    debug_assert!(r.is_zero(), "inexact scalar division");
                    q
                })
                .collect(),
        )
    }

    /// Non-negative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        self.div_exact_scalar(&g)
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &IntPolynomial) -> IntPolynomial {
        assert!(!b.is_zero(), "pseudo-division by zero polynomial");
        let db = b.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return self.clone();
        }
        let lb = b.leading();
        let mut r = self.coeffs.clone();
        let mut steps = r.len() - db;
        while r.len() > db {
            let lr = r.last().cloned().unwrap();
            let shift = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[shift + j] -= &lr * bc;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            steps -= 1;
        }
        // Multiply by the remaining power of lb so the result is the true
        // pseudo-remainder regardless of early cancellation.
        let mut out = IntPolynomial::new(r);
        if steps > 0 {
            out = out.scale(&num_traits::pow(lb, steps));
        }
        out
    }

    /// Exact division by a monic polynomial. Returns `(quotient, remainder)`.
    pub fn div_rem_monic(&self, b: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
        assert!(b.is_monic(), "divisor must be monic");
        let db = b.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return (IntPolynomial::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            let c = std::mem::take(&mut r[i]);
            if c.is_zero() {
                continue;
            }
            for (j, bc) in b.coeffs.iter().enumerate().take(db) {
                r[i - db + j] -= &c * bc;
            }
            q[i - db] = c;
        }
        r.truncate(db);
        (IntPolynomial::new(q), IntPolynomial::new(r))
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(&self, b: &IntPolynomial) -> IntPolynomial {
        self.div_rem_monic(b).1
    }

    /// Exact division in `Z[x]`; returns `None` when `b` does not divide `self`.
    pub fn div_exact(&self, b: &IntPolynomial) -> Option<IntPolynomial> {
        assert!(!b.is_zero());
        if self.is_zero() {
            return Some(Self::zero());
        }
        let db = b.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return None;
        }
        let lb = b.leading();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            let c = std::mem::take(&mut r[i]);
            if c.is_zero() {
                continue;
            }
            let (qc, rem) = c.div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, bc) in b.coeffs.iter().enumerate().take(db) {
                r[i - db + j] -= &qc * bc;
            }
            q[i - db] = qc;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPolynomial::new(q))
    }

    /// Greatest common divisor in `Z[x]` (primitive, positive leading coefficient),
    /// times the gcd of the contents.
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() {
            return other.primitive_part().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&c)
    }

    /// Squarefree part over Q: `P / gcd(P, P')`, made primitive.
    pub fn squarefree_part(&self) -> IntPolynomial {
        if self.deg() <= 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.deg() == 0 {
            return self.primitive_part();
        }
        let pp = self.primitive_part();
        let gp = g.primitive_part();
        pp.div_exact(&gp)
            .expect("gcd divides polynomial")
            .primitive_part()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> IntPolynomial {
        let mut base = self.clone();
        let mut acc = IntPolynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        let a = p(&[1, 2, 0, 0]);
        assert_eq!(a.degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[]).deg(), -1);
    }

    #[test]
    fn pseudo_rem_matches_definition() {
        // (x^3 + 1) mod (2x + 1): lc^3 * a = 8x^3 + 8 -> remainder 8*(-1/8)+8 = 7
        let r = p(&[1, 0, 0, 1]).pseudo_rem(&p(&[1, 2]));
        assert_eq!(r, p(&[7]));
    }

    #[test]
    fn exact_division_and_gcd() {
        let a = &p(&[-1, 1]) * &p(&[2, 0, 1]);
        let b = &p(&[-1, 1]) * &p(&[3, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(a.div_exact(&p(&[-1, 1])), Some(p(&[2, 0, 1])));
        assert_eq!(a.div_exact(&p(&[1, 1])), None);
    }

    #[test]
    fn squarefree_part_removes_repeats() {
        let a = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 1]);
        assert_eq!(a.squarefree_part(), &p(&[-1, 1]) * &p(&[2, 1]));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[-1, 0, 1]).to_string(), "x^2 - 1");
        assert_eq!(p(&[3, -1]).to_string(), "-x + 3");
    }
}
