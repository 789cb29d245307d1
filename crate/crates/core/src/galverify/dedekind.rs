//! Local field-discriminant valuations: Dedekind's criterion and a
//! Pohst–Zassenhaus (Round 2) enlargement at a single prime.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::modp::{FpPoly, SmallField};
use crate::arith::{poly_disc, valuation, IntPolynomial};
use crate::linalg::FpMatrix;

use super::GalverifyError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalDiscriminant {
    pub q: u64,
    /// Whether Z[x]/(P) is already q-maximal.
    pub maximal: bool,
    pub poly_valuation: u32,
    pub field_valuation: u32,
    /// log_q of [O_K ⊗ Z_q : Z_q[θ]].
    pub index_exponent: u32,
}

/// Radical (product of the distinct monic irreducible factors) of a nonzero
/// polynomial over F_q.
pub fn radical_mod(f: &FpPoly<SmallField>, field: &SmallField) -> FpPoly<SmallField> {
    let f = f.make_monic(field);
    if f.deg() <= 0 {
        return FpPoly::constant(1, field);
    }
    let df = f.derivative(field);
    if df.is_zero() {
        // f = g(x^q) = g(x)^q over F_q.
        let q = field.modulus() as usize;
        let g: Vec<u64> = f.coeffs.iter().step_by(q).copied().collect();
        return radical_mod(&FpPoly::trimmed(g, field), field);
    }
    let c = f.gcd(&df, field);
    let w = f.div_rem(&c, field).0;
    let rc = radical_mod(&c, field);
    // lcm(w, rad c)
    let g = w.gcd(&rc, field);
    w.mul(&rc.div_rem(&g, field).0, field).make_monic(field)
}

fn lift(f: &FpPoly<SmallField>) -> IntPolynomial {
    IntPolynomial::new(f.coeffs.iter().map(|&c| BigInt::from(c)).collect())
}

/// Dedekind's criterion: true iff Z[x]/(P) is q-maximal.
pub fn dedekind_criterion(poly: &IntPolynomial, q: u64) -> bool {
    let field = SmallField::new(q);
    let pbar = FpPoly::from_ints(poly.coeffs(), &field);
    let g = radical_mod(&pbar, &field);
    let h = pbar.div_rem(&g, &field).0;
    let gh = &lift(&g) * &lift(&h);
    let diff = &gh - poly;
    let f = diff.div_exact_scalar(&BigInt::from(q));
    let fbar = FpPoly::from_ints(f.coeffs(), &field);
    let t = fbar.gcd(&g, &field).gcd(&h, &field);
    t.deg() == 0
}

fn mulmod_int(a: &[BigInt], b: &[BigInt], poly: &IntPolynomial) -> Vec<BigInt> {
    let n = poly.deg() as usize;
    let mut acc = vec![BigInt::zero(); 2 * n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            acc[i + j] += x * y;
        }
    }
    let pc = poly.coeffs();
    for i in (n..acc.len()).rev() {
        let c = std::mem::take(&mut acc[i]);
        if c.is_zero() {
            continue;
        }
        for (j, pj) in pc[..n].iter().enumerate() {
            if !pj.is_zero() {
                acc[i - n + j] -= &c * pj;
            }
        }
    }
    acc.truncate(n);
    acc
}

/// Upper-triangular Hermite normal form of the lattice spanned by `gens`
/// together with `r·Z^n`.
pub(crate) fn hnf_mod(gens: Vec<Vec<BigInt>>, n: usize, r: &BigInt) -> Vec<Vec<BigInt>> {
    let reduce = |v: &mut Vec<BigInt>, from: usize| {
        for x in v[from..].iter_mut() {
            *x = x.mod_floor(r);
        }
    };
    let mut rows: Vec<Vec<BigInt>> = gens
        .into_iter()
        .map(|mut v| {
            reduce(&mut v, 0);
            v
        })
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut piv = vec![BigInt::zero(); n];
        piv[c] = r.clone();
        for row in rows.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let e = piv[c].extended_gcd(&row[c]);
            let (a, b) = (&piv[c] / &e.gcd, &row[c] / &e.gcd);
            let mut np = vec![BigInt::zero(); n];
            let mut nr = vec![BigInt::zero(); n];
            for j in c..n {
                np[j] = &e.x * &piv[j] + &e.y * &row[j];
                nr[j] = &a * &row[j] - &b * &piv[j];
            }
            reduce(&mut np, c + 1);
            reduce(&mut nr, c + 1);
            piv = np;
            *row = nr;
        }
        if piv[c].is_negative() {
            for x in piv.iter_mut() {
                *x = -&*x;
            }
            reduce(&mut piv, c + 1);
        }
        out.push(piv);
        rows.retain(|v| v.iter().any(|x| !x.is_zero()));
    }
    for j in 1..n {
        for i in 0..j {
            let f = out[i][j].div_floor(&out[j][j]);
            if f.is_zero() {
                continue;
            }
            let rowj = out[j].clone();
            for (x, y) in out[i][j..].iter_mut().zip(&rowj[j..]) {
                *x -= &f * y;
            }
        }
    }
    out
}

/// An order given by an upper-triangular integer matrix `h` whose rows are
/// `d·ω_i` in the power basis.
struct Order {
    h: Vec<Vec<BigInt>>,
    d: BigInt,
}

impl Order {
    /// Coordinates of `y/d` (power basis) in the order basis; panics if the
    /// element is not in the order.
    fn coords(&self, y: &[BigInt]) -> Vec<BigInt> {
        let n = y.len();
        let mut y = y.to_vec();
        let mut x = vec![BigInt::zero(); n];
        for j in 0..n {
            let (qt, rem) = y[j].div_rem(&self.h[j][j]);
            assert!(rem.is_zero(), "element outside the order");
            for k in j..n {
                y[k] -= &qt * &self.h[j][k];
            }
            x[j] = qt;
        }
        x
    }

    /// Structure constants: `ω_i ω_j = Σ_k c[i][j][k] ω_k`.
    fn structure(&self, poly: &IntPolynomial) -> Vec<Vec<Vec<BigInt>>> {
        let n = self.h.len();
        let mut c = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let z = mulmod_int(&self.h[i], &self.h[j], poly);
                let y: Vec<BigInt> = z
                    .iter()
                    .map(|v| {
                        let (qt, rem) = v.div_rem(&self.d);
                        assert!(rem.is_zero(), "order not closed under multiplication");
                        qt
                    })
                    .collect();
                let x = self.coords(&y);
                c[i][j] = x.clone();
                c[j][i] = x;
            }
        }
        c
    }
}

fn residue_u64(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

/// Lattice `{x : x mod q ∈ span(w)}` in the shape used by Round 2: RREF
/// rows at pivots, `q·e_j` elsewhere.
struct ModqLattice {
    q: u64,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    n: usize,
}

impl ModqLattice {
    fn new(mut w: FpMatrix) -> Self {
        let pivots = w.rref();
        let rows = (0..pivots.len()).map(|i| w.row(i).to_vec()).collect();
        ModqLattice {
            q: w.p,
            rows,
            pivots,
            n: w.cols,
        }
    }

    fn basis(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::with_capacity(self.n);
        let mut r = 0;
        for j in 0..self.n {
            if r < self.pivots.len() && self.pivots[r] == j {
                out.push(self.rows[r].clone());
                r += 1;
            } else {
                let mut e = vec![0u64; self.n];
                e[j] = self.q;
                out.push(e);
            }
        }
        out
    }

    /// Coordinates (mod q) in [`Self::basis`] of `y`, given mod q².
    fn coords_mod_q(&self, y: &[u64]) -> Vec<u64> {
        let q = self.q;
        let q2 = q * q;
        let mut a = vec![0u64; self.n];
        let mut rest: Vec<u64> = y.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            let coef = rest[pc];
            a[pc] = coef % q;
            for j in 0..self.n {
                let s = (coef as u128 * self.rows[r][j] as u128 % q2 as u128) as u64;
                rest[j] = (rest[j] + q2 - s) % q2;
            }
        }
        for j in 0..self.n {
            if self.pivots.contains(&j) {
                continue;
            }
            debug_assert_eq!(rest[j] % q, 0, "element outside the lattice");
            a[j] = rest[j] / q;
        }
        a
    }
}

/// One Round 2 step at q. Returns the enlarged order and the q-exponent of
/// its index over the input, or `None` when the input is q-maximal.
fn enlarge(order: &Order, poly: &IntPolynomial, q: u64) -> Option<(Order, u32)> {
    let n = order.h.len();
    let c = order.structure(poly);
    let q2 = q * q;
    let cq: Vec<Vec<Vec<u64>>> = c
        .iter()
        .map(|ci| ci.iter().map(|v| v.iter().map(|x| residue_u64(x, q)).collect()).collect())
        .collect();
    let cq2: Vec<Vec<Vec<u64>>> = c
        .iter()
        .map(|ci| ci.iter().map(|v| v.iter().map(|x| residue_u64(x, q2)).collect()).collect())
        .collect();
    let mul_q = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; n];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                if b[j] == 0 {
                    continue;
                }
                let s = a[i] * b[j] % q;
                for (o, &v) in out.iter_mut().zip(&cq[i][j]) {
                    *o = (*o + s * v) % q;
                }
            }
        }
        out
    };
    // Frobenius x ↦ x^q on O/qO, iterated until q^j ≥ n: its kernel is the
    // radical of qO.
    let pow_q = |a: &[u64]| -> Vec<u64> {
        let mut acc: Option<Vec<u64>> = None;
        let mut base = a.to_vec();
        let mut e = q;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(v) => mul_q(&v, &base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = mul_q(&base, &base);
            }
        }
        acc.unwrap()
    };
    let frob_rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut e = vec![0u64; n];
            e[i] = 1;
            pow_q(&e)
        })
        .collect();
    let frob = FpMatrix::from_rows(q, n, &frob_rows);
    let mut fj = frob.clone();
    let mut qj = q as u128;
    while qj < n as u128 {
        fj = fj.mul(&frob);
        qj *= q as u128;
    }
    let radical = ModqLattice::new(fj.left_kernel());
    let gamma = radical.basis();

    // α ↦ (multiplication by α on I/qI), as an n × n² matrix over F_q.
    let mut big = FpMatrix::zeros(q, n, n * n);
    for s in 0..n {
        for (t, g) in gamma.iter().enumerate() {
            let mut y = vec![0u64; n];
            for (a, &ga) in g.iter().enumerate() {
                if ga == 0 {
                    continue;
                }
                for (yk, &v) in y.iter_mut().zip(&cq2[s][a]) {
                    *yk = ((*yk as u128 + ga as u128 * v as u128) % q2 as u128) as u64;
                }
            }
            let co = radical.coords_mod_q(&y);
            for (u, &v) in co.iter().enumerate() {
                big.set(s, t * n + u, v);
            }
        }
    }
    let kernel = big.left_kernel();
    if kernel.rows == 0 {
        return None;
    }
    let u = ModqLattice::new(kernel);
    let r = u.pivots.len() as u32;
    let qb = BigInt::from(q);
    let mut gens = Vec::with_capacity(n);
    let mut pr = 0;
    for j in 0..n {
        if pr < u.pivots.len() && u.pivots[pr] == j {
            let mut v = vec![BigInt::zero(); n];
            for (a, &ua) in u.rows[pr].iter().enumerate() {
                if ua == 0 {
                    continue;
                }
                for (vk, hk) in v.iter_mut().zip(&order.h[a]) {
                    *vk += hk * ua;
                }
            }
            gens.push(v);
            pr += 1;
        } else {
            gens.push(order.h[j].iter().map(|x| x * &qb).collect());
        }
    }
    let d = &order.d * &qb;
    let mut h = hnf_mod(gens, n, &d);
    let mut g = d.clone();
    for row in &h {
        for x in row {
            g = g.gcd(x);
        }
    }
    let d = &d / &g;
    for row in h.iter_mut() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
    Some((Order { h, d }, r))
}

/// Exact v_q of the discriminant of the field (or étale algebra) defined by
/// the monic squarefree `poly`, by Round 2 at q.
pub fn local_discriminant(poly: &IntPolynomial, q: u64) -> Result<LocalDiscriminant, GalverifyError> {
    if !poly.is_monic() {
        return Err(GalverifyError::NotMonic);
    }
    if !crate::arith::is_prime_u64(q) {
        return Err(GalverifyError::NotPrime(q));
    }
    let n = poly.deg() as usize;
    let disc = poly_disc(poly).map_err(GalverifyError::Arith)?;
    if disc.is_zero() {
        return Err(GalverifyError::NotSquarefree);
    }
    let pv = valuation(&disc, &BigUint::from(q));
    let mut order = Order {
        h: (0..n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                e
            })
            .collect(),
        d: BigInt::one(),
    };
    let mut index = 0u32;
    let mut maximal = true;
    if pv >= 2 {
        while let Some((next, r)) = enlarge(&order, poly, q) {
            maximal = false;
            index += r;
            order = next;
            assert!(2 * index <= pv, "index exceeds the discriminant bound");
        }
    }
    Ok(LocalDiscriminant {
        q,
        maximal,
        poly_valuation: pv,
        field_valuation: pv - 2 * index,
        index_exponent: index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn quadratic_and_pure_cubic() {
        let r = local_discriminant(&p(&[3, 0, 1]), 2).unwrap();
        assert!(!r.maximal);
        assert_eq!((r.poly_valuation, r.field_valuation), (2, 0));
        assert!(!dedekind_criterion(&p(&[3, 0, 1]), 2));
        let r = local_discriminant(&p(&[-10, 0, 0, 1]), 3).unwrap();
        assert_eq!((r.poly_valuation, r.field_valuation), (3, 1));
        assert!(!r.maximal);
        // x^3 - 2 is 3-maximal: disc -108, field disc -108.
        let r = local_discriminant(&p(&[-2, 0, 0, 1]), 3).unwrap();
        assert!(r.maximal);
        assert_eq!(r.field_valuation, 3);
        // x^2 - 5 at 2: field Q(√5) has disc 5.
        let r = local_discriminant(&p(&[-5, 0, 1]), 2).unwrap();
        assert_eq!(r.field_valuation, 0);
        // x^2 - 8 at 2: Q(√2), disc 8.
        let r = local_discriminant(&p(&[-8, 0, 1]), 2).unwrap();
        assert_eq!((r.poly_valuation, r.field_valuation), (5, 3));
        // x^4 + 1: Q(ζ8), disc 256 = 2^8, monogenic.
        let r = local_discriminant(&p(&[1, 0, 0, 0, 1]), 2).unwrap();
        assert!(r.maximal);
        assert_eq!(r.field_valuation, 8);
        // x^2 + 27 = (3·√-3)-order: disc -108, index 3 at 3, field disc -3.
        let r = local_discriminant(&p(&[27, 0, 1]), 3).unwrap();
        assert_eq!((r.poly_valuation, r.field_valuation, r.index_exponent), (3, 1, 1));
    }

    #[test]
    fn hnf_basic() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let h = hnf_mod(vec![b(&[2, 4]), b(&[0, 6])], 2, &BigInt::from(12));
        assert_eq!(h, vec![b(&[2, 4]), b(&[0, 6])]);
        let h = hnf_mod(vec![b(&[3, 5]), b(&[6, 1])], 2, &BigInt::from(9));
        assert_eq!(h, vec![b(&[3, 2]), b(&[0, 3])]);
    }

    /// v_q of the fundamental discriminant of Q(√D).
    fn quad_field_val(dd: i64, q: u64) -> u32 {
        let mut d = dd;
        let mut f = 2i64;
        while f * f <= d.abs() {
            while d % (f * f) == 0 {
                d /= f * f;
            }
            f += 1;
        }
        let fund = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        valuation(&BigInt::from(fund), &BigUint::from(q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn quadratic_oracle(b in -40i64..40, c in -400i64..400, qi in 0usize..4) {
            let q = [2u64, 3, 5, 7][qi];
            let dd = b * b - 4 * c;
            let r = (dd as f64).abs().sqrt() as i64;
            prop_assume!(dd != 0 && !(dd > 0 && r * r == dd));
            let res = local_discriminant(&p(&[c, b, 1]), q).unwrap();
            prop_assert_eq!(res.field_valuation, quad_field_val(dd, q));
        }

        #[test]
        fn dedekind_agrees_with_round2(c in proptest::collection::vec(-30i64..30, 3..6), qi in 0usize..4) {
            let q = [2u64, 3, 5, 7][qi];
            let mut c = c;
            c.push(1);
            let f = p(&c);
            prop_assume!(!poly_disc(&f).unwrap().is_zero());
            let res = local_discriminant(&f, q).unwrap();
            prop_assert!(res.field_valuation <= res.poly_valuation);
            prop_assert_eq!(res.maximal, dedekind_criterion(&f, q));
            if res.maximal {
                prop_assert_eq!(res.field_valuation, res.poly_valuation);
            }
        }
    }
}
