//! Resultants and discriminants by the subresultant algorithm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::int_poly::IntPolynomial;
use super::ArithError;

fn pow(b: &BigInt, e: usize) -> BigInt {
    num_traits::pow(b.clone(), e)
}

fn div_exact(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    debug_assert!(r.is_zero(), "subresultant division not exact");
    q
}

/// Resultant `res(a, b)` over `Z` (Collins' subresultant sequence).
pub fn resultant(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut s = BigInt::one();
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = -s;
        }
    }
    if b.deg() == 0 {
        return s * pow(&b.leading(), a.deg() as usize);
    }
    let ca = a.content();
    let cb = b.content();
    a = a.div_exact_scalar(&ca);
    b = b.div_exact_scalar(&cb);
    let t = pow(&ca, b.deg() as usize) * pow(&cb, a.deg() as usize);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.deg();
        let db = b.deg();
        let delta = (da - db) as usize;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return BigInt::zero();
        }
        a = b;
        let denom = &g * pow(&h, delta);
        b = r.div_exact_scalar(&denom);
        g = a.leading();
        // h <- g^delta / h^(delta - 1)
        if delta > 0 {
            h = div_exact(&pow(&g, delta), &pow(&h, delta - 1));
        }
        if b.deg() == 0 {
            let da = a.deg() as usize;
            let lb = b.leading();
            let hh = if da == 0 {
                h.clone()
            } else {
                div_exact(&pow(&lb, da), &pow(&h, da - 1))
            };
            return s * t * hh;
        }
    }
}

/// Discriminant `(-1)^(n(n-1)/2) res(P, P') / lc(P)`.
pub fn poly_disc(p: &IntPolynomial) -> Result<BigInt, ArithError> {
    let n = match p.degree() {
        None => return Err(ArithError::ZeroPolynomial),
        Some(0) => return Err(ArithError::ConstantPolynomial),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(BigInt::one());
    }
    let r = resultant(p, &p.derivative());
    let mut d = div_exact(&r, &p.leading());
    if (n * (n - 1) / 2) % 2 == 1 {
        d = -d;
    }
    Ok(d)
}

/// Sign of the discriminant as -1, 0 or 1.
pub fn disc_sign(p: &IntPolynomial) -> Result<i8, ArithError> {
    let d = poly_disc(p)?;
    Ok(if d.is_positive() {
        1
    } else if d.is_negative() {
        -1
    } else {
        0
    })
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Sylvester determinant by fraction-free Bareiss elimination.
    use super::*;

    pub fn sylvester_resultant(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
        let m = a.degree().unwrap();
        let n = b.degree().unwrap();
        let size = m + n;
        if size == 0 {
            return BigInt::one();
        }
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for i in 0..n {
            for (j, c) in a.coeffs().iter().rev().enumerate() {
                mat[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in b.coeffs().iter().rev().enumerate() {
                mat[n + i][i + j] = c.clone();
            }
        }
        bareiss_det(mat)
    }

    pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
        let n = m.len();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                let Some(sw) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, sw);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = div_exact(&v, &prev);
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }
}
