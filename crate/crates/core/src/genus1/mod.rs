//! The ℓ = 11, k = 12 case built from scratch: the Galois polynomials of
//! Δ mod 11 from the complex 11-torsion of the curve X₀(11).
//!
//! X₀(11) has genus 1, so the torsion of its Jacobian is the torsion of the
//! curve itself and the evaluation function is the x-coordinate.

pub mod bsgs;
pub mod complex;
pub mod curve;
pub mod lattice;

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::arith::IntPolynomial;
use crate::frobenius::{charpol_consistency, ConsistencyReport, FrobeniusError};
use crate::records::{GaloisPolyRecord, RecordError, RecordKind};

pub use bsgs::ap_via_bsgs;
pub use complex::Cx;
pub use curve::{division_polynomials, EllipticCurveQ};
pub use lattice::{agm_periods, eisenstein_invariants, ComplexLattice, WeierstrassP};

pub const DEFAULT_BITS: u32 = 300;
pub const MAX_RETRIES: u32 = 2;
pub const SOURCE_TAG: &str = "genus1-x0-11";

#[derive(Debug, thiserror::Error)]
pub enum Genus1Error {
    #[error("precision failure: {0}")]
    Precision(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("coefficient of x^{index} is {distance_log2:.1} bits from an integer at {bits} bits (gate {gate})")]
    RecognitionFailure {
        index: usize,
        distance_log2: f64,
        bits: u32,
        gate: i32,
    },
    #[error("curve has bad reduction at {0}")]
    BadReduction(BigUint),
    #[error("group order at p = {p} not determined; admissible traces {traces:?}")]
    AmbiguousOrder { p: BigUint, traces: Vec<BigInt> },
    #[error("built polynomial failed validation: {0}")]
    Validation(String),
    #[error(transparent)]
    Record(#[from] RecordError),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
}

/// x-coordinates of the nonzero ℓ-torsion points `(iω1 + jω2)/ℓ`.
#[derive(Clone, Debug)]
pub struct TorsionGrid {
    pub ell: u64,
    pub bits: u32,
    values: Vec<Cx>,
}

impl TorsionGrid {
    fn index(&self, i: u64, j: u64) -> usize {
        let (i, j) = (i % self.ell, j % self.ell);
        assert!(i != 0 || j != 0, "the origin is not in the grid");
        (i * self.ell + j) as usize
    }

    pub fn x(&self, i: u64, j: u64) -> &Cx {
        &self.values[self.index(i, j)]
    }

    /// The nonzero points with their x-values.
    pub fn points(&self) -> impl Iterator<Item = ((u64, u64), &Cx)> {
        let ell = self.ell;
        (0..ell)
            .flat_map(move |i| (0..ell).map(move |j| (i, j)))
            .filter(|&(i, j)| i != 0 || j != 0)
            .map(move |(i, j)| ((i, j), &self.values[(i * ell + j) as usize]))
    }

    /// One representative of each pair `{P, −P}`.
    pub fn half(&self) -> Vec<(u64, u64)> {
        let ell = self.ell;
        self.points()
            .map(|(ij, _)| ij)
            .filter(|&(i, j)| i < ell.div_ceil(2) && i != 0 || i == 0 && j < ell.div_ceil(2))
            .collect()
    }

    /// Largest `log2 |f(x)| − log2 Σ|c_i||x|^i` over the half grid, with
    /// `f` the ℓ-division polynomial.
    pub fn division_residual_log2(&self, e: &EllipticCurveQ) -> f64 {
        let f = e.division_polynomial(self.ell as usize);
        self.half()
            .iter()
            .map(|&(i, j)| relative_residual_log2(&f, self.x(i, j)))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Number of distinct values, comparing to within `2^{−bits/2}`.
    pub fn distinct_count(&self) -> usize {
        let tol = -(self.bits as i32) / 2;
        let mut reps: Vec<&Cx> = Vec::new();
        for (_, x) in self.points() {
            if !reps.iter().any(|r| {
                let d = r.sub(x).abs();
                d.is_zero() || d.get_exp().unwrap() < tol
            }) {
                reps.push(x);
            }
        }
        reps.len()
    }
}

fn relative_residual_log2(f: &IntPolynomial, x: &Cx) -> f64 {
    let prec = x.prec();
    let mut acc = Cx::zero(prec);
    let mut scale = Float::new(prec);
    let ax = x.abs();
    for c in f.coeffs().iter().rev() {
        let cf = Float::with_val(prec, rug::Integer::from_str_radix(&c.to_str_radix(16), 16).unwrap());
        acc = acc.mul(x);
        acc.re += &cf;
        scale = Float::with_val(prec, &scale * &ax) + cf.abs();
    }
    acc.log2_abs() - scale.log2().to_f64()
}

/// Evaluates ℘ on the nonzero ℓ-torsion and shifts to the model's x-coordinate.
pub fn torsion_x_table(e: &EllipticCurveQ, wp: &WeierstrassP, ell: u64) -> Result<TorsionGrid, Genus1Error> {
    let bits = wp.lattice.bits;
    if bits < 256 {
        return Err(Genus1Error::Precondition(format!("torsion grid needs at least 256 bits, got {bits}")));
    }
    let prec = wp.lattice.w1.prec();
    let shift = Float::with_val(prec, e.b2()) / 12u32;
    let cells: Vec<(u64, u64)> = (0..ell).flat_map(|i| (0..ell).map(move |j| (i, j))).collect();
    let values: Result<Vec<Cx>, Genus1Error> = cells
        .par_iter()
        .map(|&(i, j)| {
            if i == 0 && j == 0 {
                return Ok(Cx::zero(prec));
            }
            let a = Float::with_val(prec, i) / ell as u32;
            let b = Float::with_val(prec, j) / ell as u32;
            let mut x = wp.eval(&wp.lattice.point(&a, &b))?;
            x.re -= &shift;
            Ok(x)
        })
        .collect();
    Ok(TorsionGrid {
        ell,
        bits,
        values: values?,
    })
}

/// The ℓ + 1 lines of F_ℓ², as generators: `(1, j)` for j < ℓ, then `(0, 1)`.
pub fn line_generators(ell: u64) -> Vec<(u64, u64)> {
    (0..ell).map(|j| (1, j)).chain(std::iter::once((0, 1))).collect()
}

/// `Σ_{P ∈ L∖0} x(P)` for each line.
pub fn line_sums(grid: &TorsionGrid) -> Vec<Cx> {
    let ell = grid.ell;
    line_generators(ell)
        .into_iter()
        .map(|(a, b)| {
            let mut s = Cx::zero(grid.x(a, b).prec());
            for t in 1..ell {
                s = s.add(grid.x(t * a, t * b));
            }
            s
        })
        .collect()
}

/// Coefficients of `∏ (X − r)`, constant term first.
pub fn poly_from_roots(roots: &[Cx]) -> Vec<Cx> {
    let prec = roots.first().map(|r| r.prec()).unwrap_or(64);
    let mut c = vec![Cx::from_i64(prec, 1, 0)];
    for r in roots {
        let mut next = vec![Cx::zero(prec); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = next[i + 1].add(ci);
            next[i] = next[i].sub(&ci.mul(r));
        }
        c = next;
    }
    c
}

/// Rounds each coefficient to the nearest integer, failing if any is farther
/// than `2^{−bits/4}` away.
pub fn recognize_integer_poly(coeffs: &[Cx], bits: u32) -> Result<IntPolynomial, Genus1Error> {
    let gate = -(bits as i32) / 4;
    let mut out = Vec::with_capacity(coeffs.len());
    for (index, c) in coeffs.iter().enumerate() {
        let prec = c.prec();
        let rounded = Float::with_val(prec, c.re.round_ref());
        let d = Cx::new(Float::with_val(prec, &c.re - &rounded), c.im.clone()).abs();
        if !d.is_zero() && d.get_exp().unwrap() > gate {
            return Err(Genus1Error::RecognitionFailure {
                index,
                distance_log2: d.log2().to_f64(),
                bits,
                gate,
            });
        }
        let int = rounded.to_integer().ok_or_else(|| Genus1Error::Precision("non-finite coefficient".into()))?;
        out.push(int.to_string().parse::<BigInt>().unwrap());
    }
    Ok(IntPolynomial::new(out))
}

/// Runs `build` at `bits`, doubling on recognition failure up to
/// [`MAX_RETRIES`] times.
pub fn with_retries<T>(
    bits: u32,
    mut build: impl FnMut(u32) -> Result<T, Genus1Error>,
) -> Result<(T, u32), Genus1Error> {
    let mut b = bits;
    for attempt in 0..=MAX_RETRIES {
        match build(b) {
            Err(Genus1Error::RecognitionFailure { .. }) if attempt < MAX_RETRIES => {
                log::info!("recognition failed at {b} bits, retrying at {}", 2 * b);
                b *= 2;
            }
            other => return other.map(|t| (t, b)),
        }
    }
    unreachable!()
}

fn check_x0_11(e: &EllipticCurveQ, ell: u64) -> Result<(), Genus1Error> {
    if ell != 11 {
        return Err(Genus1Error::Precondition(format!("only ℓ = 11 is supported, got {ell}")));
    }
    if *e != EllipticCurveQ::x0_11() {
        return Err(Genus1Error::Precondition("the curve must be the X₀(11) model".into()));
    }
    Ok(())
}

/// Outcome of [`build_projective_poly`] with its validation evidence.
#[derive(Debug, Clone)]
pub struct ProjectiveBuild {
    pub record: GaloisPolyRecord,
    pub bits: u32,
    pub consistency: ConsistencyReport,
}

/// The degree-12 polynomial `∏_L (X − Σ_{P∈L∖0} x(P))` from the 11-torsion of
/// X₀(11), validated against τ mod 11 for p ≤ 200.
pub fn build_projective_poly(e: &EllipticCurveQ, ell: u64, bits: u32) -> Result<ProjectiveBuild, Genus1Error> {
    check_x0_11(e, ell)?;
    let wp = WeierstrassP::for_curve(e, bits)?;
    let grid = torsion_x_table(e, &wp, ell)?;
    let sums = line_sums(&grid);
    let poly = recognize_integer_poly(&poly_from_roots(&sums), bits)?;
    let record = GaloisPolyRecord::new(12, ell, RecordKind::Projective, poly, SOURCE_TAG)?;
    let consistency = charpol_consistency(&record, 200)?;
    if !consistency.pass {
        return Err(Genus1Error::Validation(format!(
            "Frobenius patterns disagree with τ mod {ell} ({} mismatches)",
            consistency.mismatches
        )));
    }
    Ok(ProjectiveBuild {
        record,
        bits,
        consistency,
    })
}

/// Outcome of [`build_full_poly`].
#[derive(Debug, Clone, Serialize)]
pub struct FullBuildCheck {
    pub bits: u32,
    pub perfect_square: bool,
    pub matches_division_polynomial: bool,
}

/// The degree-120 polynomial `∏_{P≠0} (X − ℓ·x(P))`.
///
/// The x-coordinates of 11-torsion points are not all algebraic integers
/// (the division polynomial has leading coefficient 11), so roots are scaled
/// by ℓ to get a monic integral polynomial. The result is checked to be the
/// square of the half product, and that to equal `ℓ^{59} f_ℓ(X/ℓ)`.
pub fn build_full_poly(e: &EllipticCurveQ, ell: u64, bits: u32) -> Result<(GaloisPolyRecord, FullBuildCheck), Genus1Error> {
    check_x0_11(e, ell)?;
    let wp = WeierstrassP::for_curve(e, bits)?;
    let grid = torsion_x_table(e, &wp, ell)?;
    let s = ell as i64;
    let all: Vec<Cx> = grid.points().map(|(_, x)| x.scale_i64(s)).collect();
    let half: Vec<Cx> = grid.half().iter().map(|&(i, j)| grid.x(i, j).scale_i64(s)).collect();
    let full = recognize_integer_poly(&poly_from_roots(&all), bits)?;
    let h = recognize_integer_poly(&poly_from_roots(&half), bits)?;
    let perfect_square = &h * &h == full;
    let expected = curve::scale_roots_monic(&e.division_polynomial(ell as usize), s);
    let matches_division_polynomial = h == expected;
    if !perfect_square || !matches_division_polynomial {
        return Err(Genus1Error::Validation(format!(
            "full polynomial: perfect square {perfect_square}, division polynomial match {matches_division_polynomial}"
        )));
    }
    let record = GaloisPolyRecord::new(12, ell, RecordKind::Full, full, SOURCE_TAG)?;
    Ok((
        record,
        FullBuildCheck {
            bits,
            perfect_square,
            matches_division_polynomial,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_partition_the_nonzero_points() {
        let ell = 11;
        let mut seen = std::collections::HashSet::new();
        for (a, b) in line_generators(ell) {
            for t in 1..ell {
                assert!(seen.insert(((t * a) % ell, (t * b) % ell)));
            }
        }
        assert_eq!(seen.len(), 120);
    }

    #[test]
    fn grid_structure() {
        let e = EllipticCurveQ::x0_11();
        let wp = WeierstrassP::for_curve(&e, 256).unwrap();
        let grid = torsion_x_table(&e, &wp, 11).unwrap();
        assert_eq!(grid.points().count(), 120);
        assert_eq!(grid.half().len(), 60);
        for ((i, j), x) in grid.points() {
            let d = x.sub(grid.x(11 - i, 11 - j)).abs();
            assert!(d.is_zero() || d.get_exp().unwrap() < -240);
        }
        assert_eq!(grid.distinct_count(), 60);
        assert!(grid.division_residual_log2(&e) < -128.0);
        let wp_low = WeierstrassP::for_curve(&e, 200).unwrap();
        assert!(torsion_x_table(&e, &wp_low, 11).is_err());
    }

    #[test]
    fn recognition_gate() {
        let p = 300;
        let near = Cx::new(Float::with_val(p, 7) + Float::with_val(p, Float::i_exp(1, -100)), Float::new(p));
        assert_eq!(recognize_integer_poly(std::slice::from_ref(&near), 300).unwrap(), IntPolynomial::from_i64s(&[7]));
        assert!(matches!(
            recognize_integer_poly(&[near], 600),
            Err(Genus1Error::RecognitionFailure { index: 0, .. })
        ));
    }

    #[test]
    fn retries_double() {
        let mut seen = Vec::new();
        let r = with_retries(300, |b| {
            seen.push(b);
            if b < 1200 {
                Err(Genus1Error::RecognitionFailure {
                    index: 0,
                    distance_log2: 0.0,
                    bits: b,
                    gate: 0,
                })
            } else {
                Ok(b)
            }
        });
        assert_eq!(r.unwrap(), (1200, 1200));
        assert_eq!(seen, vec![300, 600, 1200]);
        let r: Result<(u32, u32), _> = with_retries(300, |b| {
            Err(Genus1Error::RecognitionFailure {
                index: 0,
                distance_log2: 0.0,
                bits: b,
                gate: 0,
            })
        });
        assert!(r.is_err());
    }
}
