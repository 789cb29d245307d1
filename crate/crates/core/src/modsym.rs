//! Weight-2 modular symbols of prime level ℓ with character ε = ω^e, over F_ℓ.
//!
//! Manin symbols [c, d] are indexed by P¹(F_ℓ) with [λc, λd] = ε(λ)[c, d],
//! matching the action {γx} = ε(d_γ){x} of γ ∈ Γ₀(ℓ). Representatives are
//! (c, 1) for 0 ≤ c < ℓ (index c) and (1, 0) (index ℓ).

use crate::arith::modp::inv_mod_u64;
use crate::arith::is_prime_u64;
use crate::linalg::FpMatrix;
use crate::modcurve::{self, CharacterData, ModcurveError};
use crate::qexp;

#[derive(Debug, thiserror::Error)]
pub enum ModsymError {
    #[error("character ω^{0} is odd; the weight-2 space is zero")]
    OddCharacter(u64),
    #[error("level {0} must be a prime at least 5")]
    BadLevel(u64),
    #[error("Hecke operator T_{p} needs a prime p different from the level {ell}")]
    BadHeckePrime { p: u64, ell: u64 },
    #[error(transparent)]
    Modcurve(#[from] ModcurveError),
    #[error(transparent)]
    Qexp(#[from] qexp::QexpError),
}

/// A sparse element of the free module on the ℓ + 1 generators.
type Sparse = Vec<(usize, u64)>;

#[derive(Debug, Clone)]
pub struct ManinSymbolSpace {
    pub ell: u64,
    pub character: CharacterData,
    /// Images of the ℓ + 1 generators in quotient coordinates.
    gen_images: Vec<Vec<u64>>,
    /// Generators whose images form the quotient basis, in coordinate order.
    free_gens: Vec<usize>,
    /// Dimension of the full symbol space (the quotient).
    pub dim: usize,
    /// Basis of the cuspidal subspace in quotient coordinates, in RREF.
    cuspidal: FpMatrix,
    cusp_pivots: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeMatrix {
    pub p: u64,
    pub matrix: FpMatrix,
}

impl ManinSymbolSpace {
    /// (scalar, generator index) with [c, d] = scalar·[rep].
    fn normalize(&self, c: u64, d: u64) -> (u64, usize) {
        normalize(&self.character, c, d)
    }

    pub fn cuspidal_dim(&self) -> usize {
        self.cuspidal.rows
    }

    pub fn cuspidal_basis(&self) -> &FpMatrix {
        &self.cuspidal
    }

    /// Quotient coordinates of the symbol [c, d] (c, d integers, not both ≡ 0).
    pub fn symbol(&self, c: i64, d: i64) -> Vec<u64> {
        let l = self.ell as i64;
        let (s, i) = self.normalize(c.rem_euclid(l) as u64, d.rem_euclid(l) as u64);
        scale(&self.gen_images[i], s, self.ell)
    }

    fn add_symbol(&self, acc: &mut [u64], c: i64, d: i64, coeff: u64) {
        let v = self.symbol(c, d);
        for (a, x) in acc.iter_mut().zip(v) {
            *a = (*a + coeff * x) % self.ell;
        }
    }

    /// The generator rep (c, d) as integers.
    fn rep(&self, i: usize) -> (i64, i64) {
        if i as u64 == self.ell {
            (1, 0)
        } else {
            (i as i64, 1)
        }
    }


    /// Restricts a map given on quotient basis vectors to the cuspidal subspace.
    fn restrict(&self, full: &FpMatrix) -> FpMatrix {
        let k = self.cuspidal.rows;
        let mut out = FpMatrix::zeros(self.ell, k, k);
        for i in 0..k {
            let img = full.apply_row(self.cuspidal.row(i));
            // coordinates w.r.t. the RREF cuspidal basis are the pivot entries
            for (j, &pc) in self.cusp_pivots.iter().enumerate() {
                out.set(i, j, img[pc]);
            }
            let mut check = vec![0u64; self.dim];
            for (j, _) in self.cusp_pivots.iter().enumerate() {
                let c = out.get(i, j);
                for (t, x) in check.iter_mut().enumerate() {
                    *x = (*x + c * self.cuspidal.get(j, t)) % self.ell;
                }
            }
            assert_eq!(check, img, "operator does not preserve the cuspidal subspace");
        }
        out
    }

    /// Matrix (row convention) of an operator on the full quotient, given its
    /// action on generators as a function returning quotient vectors.
    fn full_matrix(&self, act: impl Fn(usize) -> Vec<u64>) -> FpMatrix {
        let rows: Vec<Vec<u64>> = self.free_gens.iter().map(|&g| act(g)).collect();
        FpMatrix::from_rows(self.ell, self.dim, &rows)
    }

    /// T_p via Merel's Heilbronn matrices, on the cuspidal subspace.
    pub fn hecke_matrix(&self, p: u64) -> Result<HeckeMatrix, ModsymError> {
        Ok(HeckeMatrix {
            p,
            matrix: self.restrict(&self.hecke_full(p)?),
        })
    }

    /// T_p via Merel's Heilbronn matrices, on the whole symbol space.
    pub fn hecke_full(&self, p: u64) -> Result<FpMatrix, ModsymError> {
        self.check_hecke_prime(p)?;
        let hs = heilbronn_merel(p);
        Ok(self.full_matrix(|g| {
            let (c, d) = self.rep(g);
            let mut acc = vec![0u64; self.dim];
            for h in &hs {
                let nc = c * h[0] + d * h[2];
                let nd = c * h[1] + d * h[3];
                self.add_symbol(&mut acc, nc, nd, 1);
            }
            acc
        }))
    }

    fn check_hecke_prime(&self, p: u64) -> Result<(), ModsymError> {
        if p == self.ell || !is_prime_u64(p) {
            return Err(ModsymError::BadHeckePrime { p, ell: self.ell });
        }
        Ok(())
    }

    /// Quotient coordinates of the modular symbol {0, a/b} (b = 0 meaning ∞),
    /// by continued fractions.
    pub fn zero_to(&self, a: i64, b: i64) -> Vec<u64> {
        let mut acc = vec![0u64; self.dim];
        let (mut a, mut b) = (a, b);
        if b < 0 {
            a = -a;
            b = -b;
        }
        if b == 0 {
            self.add_symbol(&mut acc, 0, 1, 1);
            return acc;
        }
        // convergents with p_{-2}/q_{-2} = 0/1 and p_{-1}/q_{-1} = 1/0
        let (mut p2, mut q2, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
        // j = -1 term: {0, ∞} = [0, 1]
        self.add_symbol(&mut acc, 0, 1, 1);
        let (mut num, mut den) = (a, b);
        let mut sign = -1i64; // (-1)^{j-1} at j = 0
        loop {
            let q = num.div_euclid(den);
            let r = num.rem_euclid(den);
            let pj = q * p1 + p2;
            let qj = q * q1 + q2;
            // g_j = [[sign*p_j, p_{j-1}], [sign*q_j, q_{j-1}]] has det 1
            self.add_symbol(&mut acc, sign * qj, q1, 1);
            p2 = p1;
            q2 = q1;
            p1 = pj;
            q1 = qj;
            sign = -sign;
            if r == 0 {
                break;
            }
            num = den;
            den = r;
        }
        debug_assert_eq!(p1 * b, q1 * a);
        acc
    }

    /// {α, β} for cusps α = a1/b1, β = a2/b2.
    pub fn symbol_between(&self, a1: i64, b1: i64, a2: i64, b2: i64) -> Vec<u64> {
        let x = self.zero_to(a2, b2);
        let y = self.zero_to(a1, b1);
        x.iter()
            .zip(y)
            .map(|(u, v)| (u + self.ell - v) % self.ell)
            .collect()
    }

    /// T_p on the whole space from explicit double-coset representatives
    /// acting on the paths g{0, ∞}: [[1, r], [0, p]] for 0 ≤ r < p and
    /// σ_p·diag(p, 1) with σ_p ∈ SL₂(Z) congruent to diag(p⁻¹, p) mod ℓ.
    pub fn hecke_full_naive(&self, p: u64) -> Result<FpMatrix, ModsymError> {
        self.check_hecke_prime(p)?;
        let l = self.ell as i64;
        let pi = p as i64;
        // m p - n ℓ = 1
        let m = inv_mod_u64(p % self.ell, self.ell).unwrap() as i64;
        let n = (m * pi - 1) / l;
        let sigma = [m, n, l, pi];
        let mut mats: Vec<[i64; 4]> = (0..pi).map(|r| [1, r, 0, pi]).collect();
        mats.push(mat_mul(sigma, [pi, 0, 0, 1]));
        Ok(self.full_matrix(|gi| {
            let (c, d) = self.rep(gi);
            let g = lift_sl2(c, d);
            let mut acc = vec![0u64; self.dim];
            for dlt in &mats {
                let mg = mat_mul(*dlt, g);
                // path from mg(0) = mg[1]/mg[3] to mg(∞) = mg[0]/mg[2]
                let v = self.symbol_between(mg[1], mg[3], mg[0], mg[2]);
                for (x, y) in acc.iter_mut().zip(v) {
                    *x = (*x + y) % self.ell;
                }
            }
            acc
        }))
    }

    /// Joint kernel of T_q - a_q over primes q ≤ pmax, q ≠ ℓ, on the
    /// cuspidal subspace.
    pub fn joint_kernel_dim(&self, eigenvalues: &[(u64, u64)]) -> Result<usize, ModsymError> {
        let k = self.cuspidal_dim();
        if k == 0 {
            return Ok(0);
        }
        let mut stacked: Option<FpMatrix> = None;
        for &(q, a) in eigenvalues {
            let t = self.hecke_matrix(q)?.matrix.minus_scalar(a);
            stacked = Some(match stacked {
                None => t,
                Some(s) => s.hconcat(&t),
            });
        }
        Ok(match stacked {
            None => k,
            Some(s) => s.left_kernel().rows,
        })
    }

    /// Boundary map on quotient coordinates (2 columns: B₀, B∞).
    pub fn boundary_matrix(&self) -> FpMatrix {
        let rows: Vec<Vec<u64>> = self
            .free_gens
            .iter()
            .map(|&g| {
                let (c, d) = self.rep(g);
                boundary_of(&self.character, c as u64, d as u64)
            })
            .collect();
        FpMatrix::from_rows(self.ell, 2, &rows)
    }
}

fn mat_mul(a: [i64; 4], b: [i64; 4]) -> [i64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

/// An element of SL₂(Z) with bottom row (c, d) for a generator rep.
fn lift_sl2(c: i64, d: i64) -> [i64; 4] {
    if d == 0 {
        debug_assert_eq!(c, 1);
        [0, -1, 1, 0]
    } else {
        debug_assert_eq!(d, 1);
        [1, 0, c, 1]
    }
}

fn scale(v: &[u64], s: u64, p: u64) -> Vec<u64> {
    v.iter().map(|&x| (x as u128 * s as u128 % p as u128) as u64).collect()
}

fn normalize(chi: &CharacterData, c: u64, d: u64) -> (u64, usize) {
    let l = chi.ell;
    let (c, d) = (c % l, d % l);
    assert!(c != 0 || d != 0, "symbol (0, 0) is not in P^1");
    if d != 0 {
        let dinv = inv_mod_u64(d, l).unwrap();
        (chi.eval(d), (c * dinv % l) as usize)
    } else {
        (chi.eval(c), l as usize)
    }
}

/// δ[c, d] = {a/c} - {b/d} for any lift [[a, b], [c, d]] ∈ SL₂(Z), as
/// coefficients on (B₀, B∞) where {x/y} = ε(y)B₀ for y ≢ 0 and
/// {x/y} = ε(x)⁻¹B∞ for y ≡ 0.
fn boundary_of(chi: &CharacterData, c: u64, d: u64) -> Vec<u64> {
    let l = chi.ell;
    let mut v = vec![0u64; 2];
    // {a/c}: if c ≡ 0 then a ≡ d⁻¹, so ε(a)⁻¹ = ε(d).
    if !c.is_multiple_of(l) {
        v[0] = (v[0] + chi.eval(c)) % l;
    } else {
        v[1] = (v[1] + chi.eval(d)) % l;
    }
    // -{b/d}: if d ≡ 0 then b ≡ -c⁻¹, so ε(b)⁻¹ = ε(-c) = ε(c).
    if !d.is_multiple_of(l) {
        v[0] = (v[0] + l - chi.eval(d)) % l;
    } else {
        v[1] = (v[1] + l - chi.eval(c)) % l;
    }
    v
}

fn add_sparse(v: &mut Sparse, s: u64, i: usize) {
    v.push((i, s));
}

pub fn build_space(ell: u64, e: u64) -> Result<ManinSymbolSpace, ModsymError> {
    if ell < 5 || !is_prime_u64(ell) {
        return Err(ModsymError::BadLevel(ell));
    }
    let chi = CharacterData::new(ell, e);
    if !chi.is_even() {
        return Err(ModsymError::OddCharacter(e));
    }
    let n = ell as usize + 1;
    let rep = |i: usize| -> (u64, u64) {
        if i == ell as usize {
            (1, 0)
        } else {
            (i as u64, 1)
        }
    };
    let neg = |x: u64| (ell - x % ell) % ell;
    let mut relations: Vec<Sparse> = Vec::new();
    for i in 0..n {
        let (c, d) = rep(i);
        // x + xσ with (c, d)σ = (d, -c)
        let mut r = vec![(i, 1)];
        let (s, j) = normalize(&chi, d, neg(c));
        add_sparse(&mut r, s, j);
        relations.push(r);
        // x + xτ + xτ² with (c, d)τ = (d, -c-d)
        let mut r = vec![(i, 1)];
        let (c1, d1) = (d, neg(c + d));
        let (s, j) = normalize(&chi, c1, d1);
        add_sparse(&mut r, s, j);
        let (c2, d2) = (d1, neg(c1 + d1));
        let (s, j) = normalize(&chi, c2, d2);
        add_sparse(&mut r, s, j);
        relations.push(r);
    }
    let mut rel = FpMatrix::zeros(ell, relations.len(), n);
    for (ri, r) in relations.iter().enumerate() {
        for &(j, s) in r {
            rel.set(ri, j, (rel.get(ri, j) + s) % ell);
        }
    }
    let pivots = rel.rref();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let dim = free.len();
    let mut gen_images = vec![vec![0u64; dim]; n];
    for (k, &f) in free.iter().enumerate() {
        gen_images[f][k] = 1;
    }
    for (r, &pc) in pivots.iter().enumerate() {
        for (k, &f) in free.iter().enumerate() {
            gen_images[pc][k] = (ell - rel.get(r, f)) % ell;
        }
    }
    let mut space = ManinSymbolSpace {
        ell,
        character: chi,
        gen_images,
        free_gens: free,
        dim,
        cuspidal: FpMatrix::zeros(ell, 0, dim),
        cusp_pivots: vec![],
    };
    // The boundary map must kill every relation.
    for r in &relations {
        let mut b = vec![0u64; 2];
        for &(j, s) in r {
            let (c, d) = rep(j);
            for (x, y) in b.iter_mut().zip(boundary_of(&chi, c, d)) {
                *x = (*x + s * y) % ell;
            }
        }
        assert_eq!(b, vec![0, 0], "boundary map not well defined");
    }
    let mut cusp = space.boundary_matrix().left_kernel();
    let cusp_pivots = cusp.rref();
    space.cuspidal = cusp;
    space.cusp_pivots = cusp_pivots;
    Ok(space)
}

/// Result of the joint-eigenspace computation for Δ_k mod ℓ.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct EigensystemReport {
    pub k: u64,
    pub ell: u64,
    pub character_exponent: u64,
    pub pmax: u64,
    pub cuspidal_dim: usize,
    pub joint_kernel_dim: usize,
    pub pass: bool,
}

/// a_p(Δ_k) mod ℓ for primes p ≤ pmax, p ≠ ℓ.
pub fn delta_k_eigenvalues(k: u64, ell: u64, pmax: u64) -> Result<Vec<(u64, u64)>, ModsymError> {
    let f = qexp::cusp_form_level1(k as u32, pmax.max(2) as usize)?;
    Ok(qexp::ap_mod_table(&f, ell)
        .into_iter()
        .filter(|&(p, _)| p != ell && p <= pmax)
        .collect())
}

/// Dimension of ∩ ker(T_p - a_p(Δ_k)) in the ω^{k-2} component; passes when
/// at least 2.
pub fn eigensystem_check(k: u64, ell: u64, pmax: u64) -> Result<EigensystemReport, ModsymError> {
    modcurve::gamma_h(k, ell)?;
    let e = (k - 2) % (ell - 1);
    let space = build_space(ell, e)?;
    let eig = delta_k_eigenvalues(k, ell, pmax)?;
    let dim = space.joint_kernel_dim(&eig)?;
    Ok(EigensystemReport {
        k,
        ell,
        character_exponent: e,
        pmax,
        cuspidal_dim: space.cuspidal_dim(),
        joint_kernel_dim: dim,
        pass: dim >= 2,
    })
}

/// Sum of cuspidal dimensions over the characters trivial on H for (k, ℓ);
/// expected to be twice the genus of X_{Γ_H}.
pub fn family_cuspidal_dim(k: u64, ell: u64) -> Result<usize, ModsymError> {
    let spec = modcurve::gamma_h(k, ell)?;
    let mut total = 0;
    for chi in modcurve::characters_of(&spec) {
        total += build_space(ell, chi.exponent)?.cuspidal_dim();
    }
    Ok(total)
}

/// Merel's Heilbronn matrices for a prime p: ad - bc = p, a > b ≥ 0, d > c ≥ 0.
pub fn heilbronn_merel(p: u64) -> Vec<[i64; 4]> {
    let p = p as i64;
    let mut out = Vec::new();
    for a in 1..=p {
        for d in 1..=(p + 1 - a) {
            let r = a * d - p;
            if r < 0 {
                continue;
            }
            if r == 0 {
                // b = 0 with any c < d, or c = 0 with 0 < b < a
                for c in 0..d {
                    out.push([a, 0, c, d]);
                }
                for b in 1..a {
                    out.push([a, b, 0, d]);
                }
                continue;
            }
            for b in 1..a {
                if r % b == 0 {
                    let c = r / b;
                    if c < d {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn charpoly2(m: &FpMatrix) -> (u64, u64) {
        let p = m.p;
        let tr = (m.get(0, 0) + m.get(1, 1)) % p;
        (tr, m.det())
    }

    #[test]
    fn level_11_hecke() {
        let s = build_space(11, 0).unwrap();
        assert_eq!(s.dim, 3);
        assert_eq!(s.cuspidal_dim(), 2);
        // (x + 2)^2: trace -4, det 4
        let t2 = s.hecke_matrix(2).unwrap().matrix;
        assert_eq!(charpoly2(&t2), (11 - 4, 4));
        let t3 = s.hecke_matrix(3).unwrap().matrix;
        assert_eq!(charpoly2(&t3), (11 - 2, 1));
    }

    #[test]
    fn heilbronn_counts() {
        // Merel's set for p = 2: [[1,0],[0,2]], [[1,0],[1,2]], [[2,0],[0,1]], [[2,1],[0,1]]
        let h = heilbronn_merel(2);
        assert_eq!(h.len(), 4);
        for m in heilbronn_merel(13) {
            assert_eq!(m[0] * m[3] - m[1] * m[2], 13);
        }
    }

    #[test]
    fn merel_agrees_with_cosets() {
        for (ell, e) in [(11u64, 0u64), (13, 2), (13, 4), (31, 10), (29, 14), (31, 6)] {
            let s = build_space(ell, e).unwrap();
            for p in [2u64, 3, 5] {
                assert_eq!(
                    s.hecke_full(p).unwrap(),
                    s.hecke_full_naive(p).unwrap(),
                    "ell = {ell}, e = {e}, p = {p}"
                );
            }
        }
    }

    #[test]
    fn hecke_operators_commute() {
        let s = build_space(31, 10).unwrap();
        let ps = [2u64, 3, 5, 7];
        let ms: Vec<FpMatrix> = ps.iter().map(|&p| s.hecke_matrix(p).unwrap().matrix).collect();
        for a in &ms {
            for b in &ms {
                assert_eq!(a.mul(b), b.mul(a));
            }
        }
    }

    #[test]
    fn odd_character_rejected() {
        assert!(matches!(build_space(31, 3), Err(ModsymError::OddCharacter(3))));
    }

    #[test]
    fn eigensystem_level_11() {
        let r = eigensystem_check(12, 11, 20).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.joint_kernel_dim, 2);
    }

    #[test]
    fn table_rows() {
        for (k, ell, dim) in [(12u64, 31u64, 6usize), (16, 29, 4), (20, 31, 6), (22, 31, 6)] {
            assert_eq!(family_cuspidal_dim(k, ell).unwrap(), 2 * dim, "k = {k}, ell = {ell}");
            let r10 = eigensystem_check(k, ell, 10).unwrap();
            let r20 = eigensystem_check(k, ell, 20).unwrap();
            eprintln!("{r20:?}");
            assert!(r20.pass, "{r20:?}");
            assert_eq!(r10.joint_kernel_dim, r20.joint_kernel_dim);
        }
    }
}
