//! Period lattices by the arithmetic-geometric mean, and the Weierstrass ℘
//! function of a lattice.

use num_traits::ToPrimitive;
use rug::Float;

use super::complex::{pi, Cx};
use super::curve::EllipticCurveQ;
use super::Genus1Error;

/// Periods of `dx/(2y + a1x + a3)` with `Im(ω2/ω1) > 0`.
#[derive(Clone, Debug)]
pub struct ComplexLattice {
    pub bits: u32,
    pub w1: Cx,
    pub w2: Cx,
    pub tau: Cx,
}

impl ComplexLattice {
    /// Real coordinates `(a, b)` with `z = a·ω1 + b·ω2`.
    pub fn coordinates(&self, z: &Cx) -> (Float, Float) {
        let p = z.prec();
        // solve [w1.re w2.re; w1.im w2.im] (a, b) = (z.re, z.im)
        let det = Float::with_val(p, &self.w1.re * &self.w2.im) - Float::with_val(p, &self.w2.re * &self.w1.im);
        let a = (Float::with_val(p, &z.re * &self.w2.im) - Float::with_val(p, &self.w2.re * &z.im)) / &det;
        let b = (Float::with_val(p, &self.w1.re * &z.im) - Float::with_val(p, &z.re * &self.w1.im)) / &det;
        (a, b)
    }

    pub fn point(&self, a: &Float, b: &Float) -> Cx {
        self.w1.scale(a).add(&self.w2.scale(b))
    }

    /// The representative of `z + Λ` closest to the origin.
    pub fn reduce(&self, z: &Cx) -> Cx {
        let (mut a, mut b) = self.coordinates(z);
        a -= a.clone().round();
        b -= b.clone().round();
        let base = self.point(&a, &b);
        let mut best = base.clone();
        let mut best_abs = best.abs();
        for (da, db) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1)] {
            let cand = base.sub(&self.w1.scale_i64(da)).sub(&self.w2.scale_i64(db));
            let ca = cand.abs();
            if ca < best_abs {
                best = cand;
                best_abs = ca;
            }
        }
        best
    }

    /// Length of the shortest nonzero lattice vector.
    pub fn min_norm(&self) -> Float {
        [
            self.w1.abs(),
            self.w2.abs(),
            self.w1.add(&self.w2).abs(),
            self.w1.sub(&self.w2).abs(),
        ]
        .into_iter()
        .min_by(|x, y| x.partial_cmp(y).unwrap())
        .unwrap()
    }
}

fn agm(a: Float, b: Float, max_iter: u32) -> Result<Float, Genus1Error> {
    let p = a.prec();
    let (mut a, mut b) = (a, b);
    let tol = Float::with_val(p, Float::i_exp(1, -(p as i32) + 4));
    for _ in 0..max_iter {
        let diff = Float::with_val(p, &a - &b).abs();
        if diff <= Float::with_val(p, &tol * &a) {
            return Ok(a);
        }
        let na = Float::with_val(p, &a + &b) / 2u32;
        let nb = Float::with_val(p, &a * &b).sqrt();
        a = na;
        b = nb;
    }
    Err(Genus1Error::Precision(format!("AGM did not converge in {max_iter} iterations")))
}

fn eval_real(coeffs: &[i64], x: &Float) -> Float {
    let p = x.prec();
    let mut acc = Float::new(p);
    for &c in coeffs.iter().rev() {
        acc = Float::with_val(p, &acc * x) + c;
    }
    acc
}

/// Real roots of `4x³ + b2x² + 2b4x + b6`, descending, refined by Newton.
fn real_two_torsion(e: &EllipticCurveQ, prec: u32) -> Result<Vec<Float>, Genus1Error> {
    let c = [e.b6(), 2 * e.b4(), e.b2(), 4];
    let dc = [c[1], 2 * c[2], 3 * c[3]];
    // depressed cubic t³ + pt + q with x = t − b2/12
    let (a, b, cc, d) = (4.0, c[2] as f64, c[1] as f64, c[0] as f64);
    let pp = (3.0 * a * cc - b * b) / (3.0 * a * a);
    let qq = (2.0 * b * b * b - 9.0 * a * b * cc + 27.0 * a * a * d) / (27.0 * a * a * a);
    let shift = -b / (3.0 * a);
    let disc = -(4.0 * pp * pp * pp + 27.0 * qq * qq);
    let approx: Vec<f64> = if disc > 0.0 {
        let r = 2.0 * (-pp / 3.0).sqrt();
        let phi = ((3.0 * qq) / (pp * r)).acos() / 3.0;
        (0..3)
            .map(|k| r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift)
            .collect()
    } else {
        let s = (qq * qq / 4.0 + pp * pp * pp / 27.0).sqrt();
        vec![(-qq / 2.0 + s).cbrt() + (-qq / 2.0 - s).cbrt() + shift]
    };
    let mut out = Vec::new();
    for x0 in approx {
        let mut x = Float::with_val(prec, x0);
        let mut converged = false;
        for _ in 0..(2 * (prec as f64).log2() as u32 + 40) {
            let fx = eval_real(&c, &x);
            let dfx = eval_real(&dc, &x);
            let step = fx / dfx;
            x -= &step;
            if step.is_zero() || step.clone().abs().get_exp().unwrap_or(i32::MIN) < x.get_exp().unwrap_or(0) - prec as i32 + 2 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Genus1Error::Precision("Newton iteration for 2-torsion did not settle".into()));
        }
        out.push(x);
    }
    out.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(out)
}

/// Fundamental periods by the AGM (both signs of the discriminant).
pub fn agm_periods(e: &EllipticCurveQ, bits: u32) -> Result<ComplexLattice, Genus1Error> {
    if bits < 128 {
        return Err(Genus1Error::Precondition(format!("period computation needs at least 128 bits, got {bits}")));
    }
    let prec = bits + 32;
    let max_iter = 4 * bits;
    let pi = pi(prec);
    let roots = real_two_torsion(e, prec)?;
    let neg = e.discriminant() < num_bigint::BigInt::from(0);
    let (w1, w2) = if neg {
        let e1 = &roots[0];
        let b2 = Float::with_val(prec, e.b2());
        let b4 = Float::with_val(prec, e.b4());
        let beta = (Float::with_val(prec, e1.square_ref()) * 3u32 + Float::with_val(prec, &b2 * e1) / 2u32 + b4 / 2u32).sqrt();
        let alpha = Float::with_val(prec, e1 * 3u32) + b2 / 4u32;
        let two_sqrt_beta = Float::with_val(prec, beta.sqrt_ref()) * 2u32;
        let two_beta = Float::with_val(prec, &beta * 2u32);
        let m1 = agm(two_sqrt_beta.clone(), Float::with_val(prec, &two_beta + &alpha).sqrt(), max_iter)?;
        let m2 = agm(two_sqrt_beta, Float::with_val(prec, &two_beta - &alpha).sqrt(), max_iter)?;
        let w1 = Float::with_val(prec, &pi * 2u32) / m1;
        let w2 = Cx::new(-Float::with_val(prec, &w1 / 2u32), Float::with_val(prec, &pi / &m2));
        (Cx::real(w1), w2)
    } else {
        let (e1, e2, e3) = (&roots[0], &roots[1], &roots[2]);
        let s13 = Float::with_val(prec, e1 - e3).sqrt();
        let s12 = Float::with_val(prec, e1 - e2).sqrt();
        let s23 = Float::with_val(prec, e2 - e3).sqrt();
        let m1 = agm(s13.clone(), s12, max_iter)?;
        let m2 = agm(s13, s23, max_iter)?;
        let w1 = Float::with_val(prec, &pi / m1);
        let w2 = Cx::new(Float::new(prec), Float::with_val(prec, &pi / m2));
        (Cx::real(w1), w2)
    };
    let mut w2 = w2;
    let mut tau = w2.div(&w1);
    if tau.im.is_sign_negative() {
        w2 = w2.neg();
        tau = tau.neg();
    }
    Ok(ComplexLattice { bits, w1, w2, tau })
}

/// `(g2, g3)` of the lattice from Eisenstein series in `q = e^{2πiτ}`.
pub fn eisenstein_invariants(lat: &ComplexLattice) -> (Cx, Cx) {
    let prec = lat.w1.prec();
    let pi = pi(prec);
    let two_pi_i = Cx::new(Float::new(prec), Float::with_val(prec, &pi * 2u32));
    let q = two_pi_i.mul(&lat.tau).exp();
    let one = Cx::from_i64(prec, 1, 0);
    let mut s3 = Cx::zero(prec);
    let mut s5 = Cx::zero(prec);
    let mut qn = q.clone();
    let eps = prec as f64 + 20.0;
    for n in 1i64.. {
        if -qn.log2_abs() > eps {
            break;
        }
        // n^k qⁿ/(1 − qⁿ) = Σ σ_k-type sum
        let t = qn.div(&one.sub(&qn));
        s3 = s3.add(&t.scale_i64(n * n * n));
        s5 = s5.add(&t.scale_i64(n * n * n * n * n));
        qn = qn.mul(&q);
    }
    let e4 = one.add(&s3.scale_i64(240));
    let e6 = one.sub(&s5.scale_i64(504));
    // (2π/ω1)^4 E4/12, (2π/ω1)^6 E6/216
    let r = Cx::real(Float::with_val(prec, &pi * 2u32)).div(&lat.w1);
    let r2 = r.sqr();
    let r4 = r2.sqr();
    let r6 = r4.mul(&r2);
    (r4.mul(&e4).div_i64(12), r6.mul(&e6).div_i64(216))
}

/// `g2 = c4/12`, `g3 = c6/216` of the short model.
pub fn curve_invariants(e: &EllipticCurveQ, prec: u32) -> (Float, Float) {
    let c4 = e.c4().to_i64().expect("c4 fits in i64");
    let c6 = e.c6().to_i64().expect("c6 fits in i64");
    (Float::with_val(prec, c4) / 12u32, Float::with_val(prec, c6) / 216u32)
}

/// ℘ for a lattice with real invariants `g2`, `g3`.
#[derive(Clone, Debug)]
pub struct WeierstrassP {
    pub lattice: ComplexLattice,
    pub g2: Float,
    pub g3: Float,
    laurent: Vec<Float>,
    rho: Float,
}

impl WeierstrassP {
    pub fn new(lattice: ComplexLattice, g2: Float, g3: Float) -> Self {
        let prec = lattice.w1.prec();
        // c_k for k = 2..N, stored at index k
        let n = (prec / 4 + 16) as usize;
        let mut c = vec![Float::new(prec); n + 1];
        c[2] = Float::with_val(prec, &g2 / 20u32);
        if n >= 3 {
            c[3] = Float::with_val(prec, &g3 / 28u32);
        }
        for k in 4..=n {
            let mut s = Float::new(prec);
            for m in 2..=k - 2 {
                s += Float::with_val(prec, &c[m] * &c[k - m]);
            }
            let den = ((2 * k + 1) * (k - 3)) as u32;
            c[k] = s * 3u32 / den;
        }
        let rho = lattice.min_norm();
        WeierstrassP {
            lattice,
            g2,
            g3,
            laurent: c,
            rho,
        }
    }

    pub fn for_curve(e: &EllipticCurveQ, bits: u32) -> Result<Self, Genus1Error> {
        let lat = agm_periods(e, bits)?;
        let prec = lat.w1.prec();
        let (g2, g3) = curve_invariants(e, prec);
        Ok(Self::new(lat, g2, g3))
    }

    fn laurent_eval(&self, z: &Cx) -> Cx {
        let z2 = z.sqr();
        let mut acc = Cx::zero(z.prec());
        for c in self.laurent[2..].iter().rev() {
            acc = acc.mul(&z2);
            acc.re += c;
        }
        // Σ c_k z^{2k−2} = z² · Σ c_k z^{2(k−2)}
        z2.inv().add(&acc.mul(&z2))
    }

    fn duplicate(&self, w: &Cx) -> Cx {
        // ℘(2z) = −2℘ + (6℘² − g2/2)² / (4(4℘³ − g2℘ − g3))
        let p = w.prec();
        let w2 = w.sqr();
        let half_g2 = Float::with_val(p, &self.g2 / 2u32);
        let mut num = w2.scale_i64(6);
        num.re -= &half_g2;
        let num = num.sqr();
        let mut den = w2.mul(w).scale_i64(4).sub(&w.scale(&self.g2));
        den.re -= &self.g3;
        let den = den.scale_i64(4);
        w.scale_i64(-2).add(&num.div(&den))
    }

    /// ℘(z) by argument reduction, halving into the disc |z| ≤ ρ/4, the
    /// Laurent series and duplication.
    pub fn eval(&self, z: &Cx) -> Result<Cx, Genus1Error> {
        let mut z = self.lattice.reduce(z);
        let quarter = Float::with_val(z.prec(), &self.rho / 4u32);
        if z.abs().is_zero() {
            return Err(Genus1Error::Precision("℘ evaluated at a lattice point".into()));
        }
        let mut halvings = 0;
        while z.abs() > quarter {
            z = z.div_i64(2);
            halvings += 1;
        }
        let mut w = self.laurent_eval(&z);
        for _ in 0..halvings {
            w = self.duplicate(&w);
        }
        if !w.re.is_finite() || !w.im.is_finite() {
            return Err(Genus1Error::Precision("non-finite ℘ value".into()));
        }
        Ok(w)
    }

    /// Independent evaluation through the q-product expansion in `u = e^{2πiz/ω1}`.
    pub fn eval_qseries(&self, z: &Cx) -> Cx {
        let lat = &self.lattice;
        let prec = z.prec();
        let zr = lat.reduce(z);
        let pi = pi(prec);
        let two_pi_i = Cx::new(Float::new(prec), Float::with_val(prec, &pi * 2u32));
        let q = two_pi_i.mul(&lat.tau).exp();
        let u = two_pi_i.mul(&zr.div(&lat.w1)).exp();
        let ui = u.inv();
        let one = Cx::from_i64(prec, 1, 0);
        let term = |x: &Cx| x.div(&one.sub(x).sqr());
        let mut s = term(&u);
        let mut qn = q.clone();
        let eps = prec as f64 + 20.0;
        loop {
            let a = qn.mul(&u);
            let b = qn.mul(&ui);
            s = s.add(&term(&a)).add(&term(&b)).sub(&term(&qn).scale_i64(2));
            if -qn.log2_abs() - 2.0 * (u.log2_abs().abs()) > eps {
                break;
            }
            qn = qn.mul(&q);
        }
        let mut s = s;
        s.re += Float::with_val(prec, 1) / 12u32;
        // (2πi)² = −4π²
        let scale = -Float::with_val(prec, pi.square_ref()) * 4u32;
        s.scale(&scale).div(&lat.w1.sqr())
    }
}
