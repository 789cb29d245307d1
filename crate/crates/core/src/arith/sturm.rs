//! Real-root counting with Sturm sequences.

use num_bigint::{BigInt, Sign};
use num_traits::Signed;

use super::int_poly::IntPolynomial;
use super::ArithError;

/// Sturm chain of `p` built from sign-corrected primitive pseudo-remainders.
pub fn sturm_sequence(p: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut seq = vec![p.clone()];
    if p.deg() <= 0 {
        return seq;
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        let (a, b) = (&seq[n - 2], &seq[n - 1]);
        if b.deg() <= 0 {
            break;
        }
        let delta = (a.deg() - b.deg()) as u32;
        let mut r = a.pseudo_rem(b);
        if r.is_zero() {
            break;
        }
        // prem multiplies by lc(b)^(delta+1); undo its sign, then negate.
        let flip = b.leading().is_negative() && delta.is_multiple_of(2);
        if !flip {
            r = r.scale(&BigInt::from(-1));
        }
        let c = r.content();
        seq.push(r.div_exact_scalar(&c));
    }
    seq
}

fn sign_changes(signs: impl Iterator<Item = Sign>) -> usize {
    let mut last = Sign::NoSign;
    let mut changes = 0;
    for s in signs {
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Number of distinct real roots of `p`.
pub fn sturm_real_root_count(p: &IntPolynomial) -> Result<usize, ArithError> {
    match p.degree() {
        None => return Err(ArithError::ZeroPolynomial),
        Some(0) => return Ok(0),
        _ => {}
    }
    let seq = sturm_sequence(p);
    let at_pos = sign_changes(seq.iter().map(|q| q.leading().sign()));
    let at_neg = sign_changes(seq.iter().map(|q| {
        let s = q.leading().sign();
        if q.deg() % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    Ok(at_neg - at_pos)
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn count_roots_in(p: &IntPolynomial, a: &BigInt, b: &BigInt) -> Result<usize, ArithError> {
    if p.is_zero() {
        return Err(ArithError::ZeroPolynomial);
    }
    let seq = sturm_sequence(p);
    let at = |x: &BigInt| sign_changes(seq.iter().map(|q| q.eval(x).sign()));
    Ok(at(a).saturating_sub(at(b)))
}
