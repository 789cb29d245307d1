//! Minimal multiprecision complex numbers on top of MPFR floats.

use rug::float::Constant;
use rug::Float;

#[derive(Clone, Debug)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

impl Cx {
    pub fn zero(prec: u32) -> Cx {
        Cx {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn real(re: Float) -> Cx {
        let im = Float::new(re.prec());
        Cx { re, im }
    }

    pub fn new(re: Float, im: Float) -> Cx {
        Cx { re, im }
    }

    pub fn from_i64(prec: u32, re: i64, im: i64) -> Cx {
        Cx {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn add(&self, o: &Cx) -> Cx {
        let p = self.prec();
        Cx {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }

    pub fn sub(&self, o: &Cx) -> Cx {
        let p = self.prec();
        Cx {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }

    pub fn neg(&self) -> Cx {
        Cx {
            re: Float::with_val(self.prec(), -&self.re),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        let p = self.prec();
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        Cx {
            re: ac - bd,
            im: ad + bc,
        }
    }

    pub fn sqr(&self) -> Cx {
        self.mul(self)
    }

    pub fn scale(&self, s: &Float) -> Cx {
        let p = self.prec();
        Cx {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn scale_i64(&self, s: i64) -> Cx {
        let p = self.prec();
        Cx {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn div_i64(&self, s: i64) -> Cx {
        let p = self.prec();
        Cx {
            re: Float::with_val(p, &self.re / s),
            im: Float::with_val(p, &self.im / s),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn inv(&self) -> Cx {
        let p = self.prec();
        let d = self.norm_sqr();
        Cx {
            re: Float::with_val(p, &self.re / &d),
            im: -Float::with_val(p, &self.im / &d),
        }
    }

    pub fn div(&self, o: &Cx) -> Cx {
        self.mul(&o.inv())
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Cx {
        let p = self.prec();
        if self.re.is_zero() && self.im.is_zero() {
            return Cx::zero(p);
        }
        let r = self.abs();
        let t = (Float::with_val(p, self.re.abs_ref()) + r) / 2u32;
        let t = t.sqrt();
        let other = Float::with_val(p, self.im.abs_ref()) / Float::with_val(p, &t * 2u32);
        if !self.re.is_sign_negative() {
            let im = if self.im.is_sign_negative() { -other } else { other };
            Cx { re: t, im }
        } else {
            let im = if self.im.is_sign_negative() { -t } else { t };
            Cx { re: other, im }
        }
    }

    pub fn exp(&self) -> Cx {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Cx {
            re: Float::with_val(p, &m * &c),
            im: m * s,
        }
    }

    /// `-log2 |self|`, or +inf for zero; a cheap magnitude estimate.
    pub fn log2_abs(&self) -> f64 {
        let a = self.abs();
        if a.is_zero() {
            return f64::NEG_INFINITY;
        }
        a.log2().to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_identities() {
        let p = 200;
        let z = Cx::from_i64(p, 3, -4);
        assert!((z.abs().to_f64() - 5.0).abs() < 1e-30);
        let s = z.sqrt();
        let back = s.sqr().sub(&z);
        assert!(back.abs().to_f64() < 1e-50);
        assert!(!s.re.is_sign_negative());
        let w = Cx::from_i64(p, -7, 2);
        let q = z.div(&w).mul(&w).sub(&z);
        assert!(q.abs().to_f64() < 1e-50);
        // e^{iπ} = -1
        let e = Cx::new(Float::new(p), pi(p)).exp();
        assert!(e.add(&Cx::from_i64(p, 1, 0)).abs().to_f64() < 1e-50);
        let neg = Cx::from_i64(p, -4, 0).sqrt();
        assert!((neg.im.to_f64() - 2.0).abs() < 1e-40 && neg.re.to_f64().abs() < 1e-40);
    }
}
