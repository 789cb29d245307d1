//! q-expansions of Δ, E₄, E₆ and the level-one cusp forms Δ_k.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::is_prime_u64;

#[derive(Debug, thiserror::Error)]
pub enum QexpError {
    #[error("no level-one cusp form of weight {0} is handled (use 12, 16, 18, 20 or 22)")]
    UnsupportedWeight(u32),
    #[error("Eisenstein series of weight {0} not provided (use 4 or 6)")]
    UnsupportedEisenstein(u32),
    #[error("cache file {path}: {reason}")]
    BadCache { path: PathBuf, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub const DEFAULT_N: usize = 10_000;

/// Coefficients a_1 .. a_N of a normalized cusp form of weight `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    pub k: u32,
    coeffs: Vec<BigInt>,
}

impl QExpansion {
    pub fn new(k: u32, coeffs: Vec<BigInt>) -> Self {
        QExpansion { k, coeffs }
    }

    /// Truncation order N.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// a_n for 1 ≤ n ≤ N.
    pub fn coeff(&self, n: usize) -> &BigInt {
        assert!(n >= 1 && n <= self.coeffs.len(), "a_{n} outside 1..={}", self.coeffs.len());
        &self.coeffs[n - 1]
    }

    /// a_1, ..., a_N.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// a_n mod m in [0, m).
    pub fn coeff_mod(&self, n: usize, m: u64) -> u64 {
        self.coeff(n).mod_floor(&BigInt::from(m)).to_u64().unwrap()
    }

    pub fn truncate(&self, n: usize) -> QExpansion {
        QExpansion::new(self.k, self.coeffs[..n.min(self.coeffs.len())].to_vec())
    }
}

/// ∏_{n≥1}(1 - qⁿ) to order q^{n-1}, via Euler's pentagonal number theorem.
pub fn euler_product(n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n];
    if n == 0 {
        return out;
    }
    out[0] = 1;
    let mut m: i64 = 1;
    loop {
        let sign = if m % 2 == 1 { -1 } else { 1 };
        let e1 = (m * (3 * m - 1) / 2) as usize;
        let e2 = (m * (3 * m + 1) / 2) as usize;
        if e1 >= n {
            break;
        }
        out[e1] += sign;
        if e2 < n {
            out[e2] += sign;
        }
        m += 1;
    }
    out
}

fn sparse_times_dense(sparse: &[(usize, i64)], dense: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for &(e, c) in sparse {
        if e >= n {
            continue;
        }
        for (i, d) in dense.iter().enumerate().take(n - e) {
            if !d.is_zero() {
                out[e + i] += d * c;
            }
        }
    }
    out
}

/// τ(1), ..., τ(N).
///
/// Δ = q·P²⁴ with P = ∏(1-qⁿ). P comes from the pentagonal series; P³ is
/// again sparse (about √(2N) terms), so P²⁴ = (P³)⁸ is built from seven
/// sparse-by-dense products instead of dense squarings.
pub fn delta_coeffs(n: usize) -> QExpansion {
    if n == 0 {
        return QExpansion::new(12, vec![]);
    }
    let m = n; // need P^24 to order q^{n-1}
    let p = euler_product(m);
    let p_sparse: Vec<(usize, i64)> = p
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, c))
        .collect();
    let p_big: Vec<BigInt> = p.iter().map(|&c| BigInt::from(c)).collect();
    let p2 = sparse_times_dense(&p_sparse, &p_big, m);
    let p3 = sparse_times_dense(&p_sparse, &p2, m);
    let cube: Vec<(usize, i64)> = p3
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.to_i64().expect("coefficients of P^3 are small")))
        .collect();
    let mut acc = p3.clone();
    for _ in 1..8 {
        acc = sparse_times_dense(&cube, &acc, m);
    }
    QExpansion::new(12, acc)
}

#[cfg(test)]
fn sigma(n: u64, e: u32) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += num_traits::pow(BigInt::from(d), e as usize);
            let o = n / d;
            if o != d {
                s += num_traits::pow(BigInt::from(o), e as usize);
            }
        }
        d += 1;
    }
    s
}

/// E₄ or E₆ to order q^{n-1}; entry 0 is the constant term.
pub fn eisenstein(k: u32, n: usize) -> Result<Vec<BigInt>, QexpError> {
    let (c, e) = match k {
        4 => (240i64, 3),
        6 => (-504i64, 5),
        _ => return Err(QexpError::UnsupportedEisenstein(k)),
    };
    let mut out = Vec::with_capacity(n);
    if n > 0 {
        out.push(BigInt::one());
    }
    // sieve divisor sums
    let mut sig = vec![BigInt::zero(); n];
    for d in 1..n {
        let dp = num_traits::pow(BigInt::from(d), e);
        let mut m = d;
        while m < n {
            sig[m] += &dp;
            m += d;
        }
    }
    for s in sig.into_iter().skip(1) {
        out.push(s * c);
    }
    Ok(out)
}

/// Exact truncated product by schoolbook convolution.
pub fn mul_series_naive(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Primes just below 2^50, descending.
fn crt_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << 50) - 1;
    while out.len() < count {
        if is_prime_u64(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

/// Exact truncated product computed modulo several 50-bit primes and
/// reassembled by CRT. Agrees with [`mul_series_naive`].
pub fn mul_series_multimodular(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let la = a.len().min(n);
    let lb = b.len().min(n);
    if la == 0 || lb == 0 {
        return vec![BigInt::zero(); n];
    }
    let max_bits = |v: &[BigInt]| v.iter().map(|x| x.bits()).max().unwrap_or(0);
    let terms = la.min(lb) as u64;
    // |c_i| < 2^(bits_a + bits_b) * terms; need product of primes > 2|c|.
    let bound_bits = max_bits(&a[..la]) + max_bits(&b[..lb]) + 64 - terms.leading_zeros() as u64 + 2;
    let count = (bound_bits as usize).div_ceil(49).max(1);
    let primes = crt_primes(count);

    let mut modulus = BigInt::one();
    let mut result = vec![BigInt::zero(); n];
    for &p in &primes {
        let pb = BigInt::from(p);
        let red = |v: &[BigInt]| -> Vec<u64> {
            v.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect()
        };
        let ra = red(&a[..la]);
        let rb = red(&b[..lb]);
        let mut acc = vec![0u128; n];
        for (i, &x) in ra.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as u128;
            for (j, &y) in rb.iter().enumerate().take(n - i) {
                acc[i + j] += x * y as u128;
            }
        }
        let p128 = p as u128;
        // Garner step: result += modulus * ((r - result) * modulus^{-1} mod p)
        let minv = {
            let m = modulus.mod_floor(&pb).to_u64().unwrap();
            crate::arith::modp::inv_mod_u64(m, p).expect("CRT primes are distinct")
        };
        for (i, r) in acc.iter().enumerate() {
            let r = (r % p128) as u64;
            let cur = result[i].mod_floor(&pb).to_u64().unwrap();
            let diff = (r + p - cur) % p;
            let t = ((diff as u128 * minv as u128) % p128) as u64;
            if t != 0 {
                result[i] += &modulus * t;
            }
        }
        modulus *= p;
    }
    let half = &modulus >> 1;
    for r in result.iter_mut() {
        if *r > half {
            *r -= &modulus;
        }
    }
    result
}

const MULTIMODULAR_THRESHOLD: usize = 256;

pub fn mul_series(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    if n <= MULTIMODULAR_THRESHOLD {
        mul_series_naive(a, b, n)
    } else {
        mul_series_multimodular(a, b, n)
    }
}

pub const SUPPORTED_WEIGHTS: [u32; 5] = [12, 16, 18, 20, 22];

/// Δ_k for k ∈ {12, 16, 18, 20, 22}: Δ, E₄Δ, E₆Δ, E₄²Δ, E₄E₆Δ.
pub fn cusp_form_level1(k: u32, n: usize) -> Result<QExpansion, QexpError> {
    if !SUPPORTED_WEIGHTS.contains(&k) {
        return Err(QexpError::UnsupportedWeight(k));
    }
    let delta = delta_coeffs(n);
    if k == 12 {
        return Ok(delta);
    }
    // Δ as a series with zero constant term shifted: work with Δ/q.
    let d = delta.coeffs;
    let e4 = || eisenstein(4, n);
    let e6 = || eisenstein(6, n);
    let factor = match k {
        16 => e4()?,
        18 => e6()?,
        20 => {
            let a = e4()?;
            mul_series(&a, &a, n)
        }
        22 => mul_series(&e4()?, &e6()?, n),
        _ => unreachable!(),
    };
    let prod = mul_series(&factor, &d, n);
    Ok(QExpansion::new(k, prod))
}

fn cache_path(dir: &Path, k: u32, n: usize) -> PathBuf {
    dir.join(format!("qexp-k{k}-n{n}.txt"))
}

pub fn write_cache(dir: &Path, f: &QExpansion) -> Result<PathBuf, QexpError> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, f.k, f.len());
    let tmp = dir.join(format!(
        ".qexp-k{}-n{}.{}.tmp",
        f.k,
        f.len(),
        std::process::id()
    ));
    {
        let mut w = io::BufWriter::new(fs::File::create(&tmp)?);
        writeln!(w, "QEXP v1 k={} N={}", f.k, f.len())?;
        for c in &f.coeffs {
            writeln!(w, "{c}")?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(path)
}

pub fn read_cache(path: &Path) -> Result<QExpansion, QexpError> {
    let bad = |reason: String| QexpError::BadCache {
        path: path.to_path_buf(),
        reason,
    };
    let file = io::BufReader::new(fs::File::open(path)?);
    let mut lines = file.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))??;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("QEXP") || parts.next() != Some("v1") {
        return Err(bad(format!("bad header {header:?}")));
    }
    let field = |s: Option<&str>, key: &str| -> Result<u64, QexpError> {
        s.and_then(|t| t.strip_prefix(key))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad(format!("missing {key} in header")))
    };
    let k = field(parts.next(), "k=")? as u32;
    let n = field(parts.next(), "N=")? as usize;
    let mut coeffs = Vec::with_capacity(n);
    for line in lines {
        let line = line?;
        coeffs.push(
            line.trim()
                .parse::<BigInt>()
                .map_err(|e| bad(format!("coefficient {}: {e}", coeffs.len() + 1)))?,
        );
    }
    if coeffs.len() != n {
        return Err(bad(format!("expected {n} coefficients, found {}", coeffs.len())));
    }
    Ok(QExpansion::new(k, coeffs))
}

/// Reads Δ_k to order N from `dir` if present, otherwise computes and stores it.
pub fn cached_cusp_form(dir: &Path, k: u32, n: usize) -> Result<QExpansion, QexpError> {
    let path = cache_path(dir, k, n);
    if path.exists() {
        if let Ok(f) = read_cache(&path) {
            if f.k == k && f.len() == n {
                return Ok(f);
            }
        }
        log::warn!("ignoring unreadable cache file {}", path.display());
    }
    let f = cusp_form_level1(k, n)?;
    if let Err(e) = write_cache(dir, &f) {
        log::warn!("could not write q-expansion cache: {e}");
    }
    Ok(f)
}

/// Checks a_{mn} = a_m a_n for coprime m, n with mn ≤ N. Returns the first
/// failing pair.
pub fn check_multiplicativity(f: &QExpansion) -> Option<(usize, usize)> {
    let n = f.len();
    for a in 2..=n {
        for b in 2..=n / a {
            if a < b && a.gcd(&b) == 1 && f.coeff(a * b) != &(f.coeff(a) * f.coeff(b)) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Checks a_{p^{r+1}} = a_p a_{p^r} - p^{k-1} a_{p^{r-1}}. Returns the first
/// failing prime power.
pub fn check_hecke_recursion(f: &QExpansion) -> Option<usize> {
    let n = f.len();
    for p in 2..=n {
        if !is_prime_u64(p as u64) {
            continue;
        }
        let pk = num_traits::pow(BigInt::from(p), (f.k - 1) as usize);
        let mut prev = BigInt::one(); // a_{p^{r-1}}
        let mut cur = f.coeff(p).clone(); // a_{p^r}
        let mut q = p;
        while q <= n / p {
            let next = f.coeff(q * p);
            if *next != f.coeff(p) * &cur - &pk * &prev {
                return Some(q * p);
            }
            prev = cur;
            cur = next.clone();
            q *= p;
        }
    }
    None
}

/// Checks a_p² ≤ 4 p^{k-1} for primes p ≤ N. Returns the first violation.
pub fn check_deligne_bound(f: &QExpansion) -> Option<usize> {
    (2..=f.len())
        .filter(|&p| is_prime_u64(p as u64))
        .find(|&p| {
            let a = f.coeff(p);
            let lhs = a * a;
            let rhs = num_traits::pow(BigInt::from(p), (f.k - 1) as usize) * 4;
            lhs > rhs
        })
}

/// a_p(Δ_k) mod ℓ for the primes p < bound, as a lookup by p.
pub fn ap_mod_table(f: &QExpansion, ell: u64) -> Vec<(u64, u64)> {
    (2..=f.len())
        .filter(|&p| is_prime_u64(p as u64))
        .map(|p| (p as u64, f.coeff_mod(p, ell)))
        .collect()
}

/// Largest |a_n| as a bit count, for sizing.
pub fn max_coeff_bits(f: &QExpansion) -> u64 {
    f.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ∏(1-qⁿ)^24 by multiplying out one factor at a time (small N only).
    fn delta_by_brute_force(n: usize) -> Vec<i128> {
        let mut s = vec![0i128; n];
        s[0] = 1;
        for m in 1..n {
            for _ in 0..24 {
                for i in (m..n).rev() {
                    s[i] -= s[i - m];
                }
            }
        }
        s
    }

    #[test]
    fn tau_small_values() {
        let d = delta_coeffs(30);
        assert_eq!(d.coeff(1), &BigInt::from(1));
        assert_eq!(d.coeff(2), &BigInt::from(-24));
        assert_eq!(d.coeff(3), &BigInt::from(252));
        assert_eq!(d.coeff(5), &BigInt::from(4830));
        assert_eq!(d.coeff(7), &BigInt::from(-16744));
        let brute = delta_by_brute_force(30);
        for n in 1..=30 {
            assert_eq!(d.coeff(n), &BigInt::from(brute[n - 1]), "tau({n})");
        }
    }

    #[test]
    fn eisenstein_values() {
        let e4 = eisenstein(4, 5).unwrap();
        assert_eq!(e4[0], BigInt::from(1));
        assert_eq!(e4[1], BigInt::from(240));
        assert_eq!(e4[2], BigInt::from(240 * 9));
        let e6 = eisenstein(6, 5).unwrap();
        assert_eq!(e6[0], BigInt::from(1));
        assert_eq!(e6[2], BigInt::from(-16632));
        assert_eq!(sigma(12, 1), BigInt::from(28));
    }

    #[test]
    fn cusp_form_second_coefficients() {
        for k in SUPPORTED_WEIGHTS {
            assert_eq!(cusp_form_level1(k, 5).unwrap().coeff(1), &BigInt::from(1));
        }
        assert_eq!(cusp_form_level1(16, 5).unwrap().coeff(2), &BigInt::from(216));
        assert_eq!(cusp_form_level1(20, 5).unwrap().coeff(2), &BigInt::from(456));
        assert!(cusp_form_level1(14, 5).is_err());
    }

    #[test]
    fn multimodular_matches_naive() {
        let n = 2000;
        let e4 = eisenstein(4, n).unwrap();
        let e6 = eisenstein(6, n).unwrap();
        let d = delta_coeffs(n).coeffs;
        assert_eq!(mul_series_naive(&e4, &e6, n), mul_series_multimodular(&e4, &e6, n));
        assert_eq!(mul_series_naive(&e6, &d, n), mul_series_multimodular(&e6, &d, n));
        let neg: Vec<BigInt> = d.iter().map(|c| -c).collect();
        assert_eq!(mul_series_naive(&neg, &d, n), mul_series_multimodular(&neg, &d, n));
    }

    #[test]
    fn hecke_properties_small() {
        for k in SUPPORTED_WEIGHTS {
            let f = cusp_form_level1(k, 600).unwrap();
            assert_eq!(check_multiplicativity(&f), None, "k = {k}");
            assert_eq!(check_hecke_recursion(&f), None, "k = {k}");
            assert_eq!(check_deligne_bound(&f), None, "k = {k}");
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let f = cusp_form_level1(18, 40).unwrap();
        let path = write_cache(dir.path(), &f).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("QEXP v1 k=18 N=40\n1\n"));
        assert_eq!(read_cache(&path).unwrap(), f);
        assert_eq!(cached_cusp_form(dir.path(), 18, 40).unwrap(), f);
    }
}
