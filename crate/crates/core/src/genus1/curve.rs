//! Elliptic curves over Q in long Weierstrass form, and their division
//! polynomials.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::IntPolynomial;

/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6` with integer coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EllipticCurveQ {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
}

impl EllipticCurveQ {
    /// Returns `None` for a singular cubic.
    pub fn new(a1: i64, a2: i64, a3: i64, a4: i64, a6: i64) -> Option<Self> {
        let e = EllipticCurveQ { a1, a2, a3, a4, a6 };
        (!e.discriminant().is_zero()).then_some(e)
    }

    /// The curve of conductor 11: `y² + y = x³ − x² − 10x − 20`, a model of X₀(11).
    pub fn x0_11() -> Self {
        EllipticCurveQ {
            a1: 0,
            a2: -1,
            a3: 1,
            a4: -10,
            a6: -20,
        }
    }

    pub fn b2(&self) -> i64 {
        self.a1 * self.a1 + 4 * self.a2
    }

    pub fn b4(&self) -> i64 {
        self.a1 * self.a3 + 2 * self.a4
    }

    pub fn b6(&self) -> i64 {
        self.a3 * self.a3 + 4 * self.a6
    }

    pub fn b8(&self) -> i64 {
        let (a1, a2, a3, a4, a6) = (self.a1, self.a2, self.a3, self.a4, self.a6);
        a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    }

    pub fn c4(&self) -> BigInt {
        let (b2, b4) = (BigInt::from(self.b2()), BigInt::from(self.b4()));
        &b2 * &b2 - 24 * b4
    }

    pub fn c6(&self) -> BigInt {
        let (b2, b4, b6) = (BigInt::from(self.b2()), BigInt::from(self.b4()), BigInt::from(self.b6()));
        -(&b2 * &b2 * &b2) + 36 * &b2 * b4 - 216 * b6
    }

    pub fn discriminant(&self) -> BigInt {
        let b2 = BigInt::from(self.b2());
        let b4 = BigInt::from(self.b4());
        let b6 = BigInt::from(self.b6());
        let b8 = BigInt::from(self.b8());
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * b2 * b4 * b6
    }

    /// `4x³ + b2·x² + 2b4·x + b6`, whose roots are the x-coordinates of the
    /// nontrivial 2-torsion.
    pub fn two_torsion_cubic(&self) -> IntPolynomial {
        IntPolynomial::from_i64s(&[self.b6(), 2 * self.b4(), self.b2(), 4])
    }

    /// Number of points over F_p, including infinity, by direct enumeration.
    pub fn count_points_naive(&self, p: u64) -> u64 {
        let m = |v: i64| v.rem_euclid(p as i64) as u64;
        let (a1, a2, a3, a4, a6) = (m(self.a1), m(self.a2), m(self.a3), m(self.a4), m(self.a6));
        let mut count = 1u64;
        for x in 0..p {
            let rhs = (((x * x % p) * x % p) + a2 * (x * x % p) + a4 * x + a6) % p;
            for y in 0..p {
                let lhs = (y * y + a1 * x % p * y + a3 * y) % p;
                if lhs == rhs {
                    count += 1;
                }
            }
        }
        count
    }

    /// a_p = p + 1 − #E(F_p) by enumeration; only sensible for small p.
    pub fn ap_naive(&self, p: u64) -> i64 {
        p as i64 + 1 - self.count_points_naive(p) as i64
    }

    /// a_p for odd p of good reduction, via the character sum over the
    /// completed square. O(p log p).
    pub fn ap_legendre(&self, p: u64) -> i64 {
        assert!(p > 2);
        let m = |v: i64| v.rem_euclid(p as i64) as u64;
        let (b2, b4, b6) = (m(self.b2()), m(self.b4()), m(self.b6()));
        // (2y + a1x + a3)² = 4x³ + b2x² + 2b4x + b6
        let mut sum: i64 = 0;
        for x in 0..p {
            let v = (4 * (x * x % p) % p * x + b2 * (x * x % p) + 2 * b4 * x + b6) % p;
            sum += legendre_u64(v, p);
        }
        -sum
    }

    /// ψ_n as a polynomial in x, divided by ψ_2 = 2y + a1x + a3 when n is even.
    pub fn division_polynomial(&self, n: usize) -> IntPolynomial {
        division_polynomials(self, n).pop().unwrap()
    }
}

fn legendre_u64(a: u64, p: u64) -> i64 {
    if a == 0 {
        return 0;
    }
    if crate::arith::modp::pow_mod_u64(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// f_0, ..., f_n with f_2 = 1 (the even ψ_n carry a hidden factor ψ_2).
pub fn division_polynomials(e: &EllipticCurveQ, n: usize) -> Vec<IntPolynomial> {
    let (b2, b4, b6, b8) = (e.b2(), e.b4(), e.b6(), e.b8());
    let beta = e.two_torsion_cubic();
    let beta2 = &beta * &beta;
    let f3 = IntPolynomial::from_i64s(&[b8, 3 * b6, 3 * b4, b2, 3]);
    let f4 = IntPolynomial::from_i64s(&[b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, 2]);
    let mut f = vec![
        IntPolynomial::zero(),
        IntPolynomial::one(),
        IntPolynomial::one(),
        f3,
        f4,
    ];
    for k in 5..=n {
        let m = k / 2;
        let next = if k % 2 == 1 {
            let a = &f[m + 2] * &f[m].pow(3);
            let b = &f[m - 1] * &f[m + 1].pow(3);
            if m % 2 == 0 {
                &(&beta2 * &a) - &b
            } else {
                &a - &(&beta2 * &b)
            }
        } else {
            let a = &f[m + 2] * &f[m - 1].pow(2);
            let b = &f[m - 2] * &f[m + 1].pow(2);
            &f[m] * &(&a - &b)
        };
        f.push(next);
    }
    f.truncate(n + 1);
    f
}

/// `s^{deg}·g(X/s)` for `g` of degree `deg`, divided by `lead`: the monic
/// polynomial whose roots are `s` times the roots of `g`. Panics if the
/// result is not integral.
pub fn scale_roots_monic(g: &IntPolynomial, s: i64) -> IntPolynomial {
    let d = g.degree().expect("nonzero polynomial");
    let lead = g.leading();
    let s = BigInt::from(s);
    let mut out = Vec::with_capacity(d + 1);
    let mut pw = BigInt::one();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(d + 1);
    for i in (0..=d).rev() {
        // coefficient of X^i is c_i · s^{d-i}
        coeffs.push(g.coeff(i) * &pw);
        pw *= &s;
    }
    coeffs.reverse();
    for c in coeffs {
        let (q, r) = num_integer::Integer::div_rem(&c, &lead);
        assert!(r.is_zero(), "root scaling by {s} does not give an integral polynomial");
        out.push(q);
    }
    IntPolynomial::new(out)
}
