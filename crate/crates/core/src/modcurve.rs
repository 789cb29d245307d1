//! Prime-level congruence subgroups between Γ₁(ℓ) and Γ₀(ℓ), their genera,
//! and the conjugacy-class cycle types of PGL₂(F_ℓ) acting on P¹(F_ℓ).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::arith::modp::pow_mod_u64;
use crate::arith::{is_prime_u64, DegreePattern};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModcurveError {
    #[error("weight {0} must be even and at least 4")]
    BadWeight(u64),
    #[error("prime {ell} is smaller than k - 1 = {}", .k - 1)]
    LevelTooSmall { k: u64, ell: u64 },
    #[error("{0} is not an admissible prime here")]
    BadPrime(u64),
    #[error("pattern {pattern} is not a PGL2(F_{ell}) cycle type")]
    NotInCatalog { pattern: String, ell: u64 },
}

/// The power `ω^exponent` of the mod-ℓ cyclotomic character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CharacterData {
    pub ell: u64,
    pub exponent: u64,
}

impl CharacterData {
    pub fn new(ell: u64, exponent: u64) -> Self {
        CharacterData {
            ell,
            exponent: exponent % (ell - 1),
        }
    }

    /// `ω^{k-2}`.
    pub fn for_weight(k: u64, ell: u64) -> Self {
        Self::new(ell, k - 2)
    }

    pub fn is_even(&self) -> bool {
        self.exponent.is_multiple_of(2)
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    /// Value at `x` as an element of F_ℓ.
    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.ell;
        if x == 0 {
            return 0;
        }
        pow_mod_u64(x, self.exponent, self.ell)
    }

    /// Order of the character.
    pub fn order(&self) -> u64 {
        (self.ell - 1) / num_integer::gcd(self.exponent, self.ell - 1)
    }
}

/// Γ_H with H = ker(ω^{k-2}) / {±1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupSpec {
    pub ell: u64,
    pub k: u64,
    /// gcd(k - 2, ℓ - 1); the order of ker(ω^{k-2}) in (Z/ℓ)*.
    pub gcd: u64,
    /// Generator of ker(ω^{k-2}) (a cyclic group).
    pub generator: u64,
    /// Order of H inside (Z/ℓ)*/{±1}.
    pub order: u64,
    /// [Γ_H : Γ₁(ℓ)].
    pub index: u64,
    /// Γ_H = Γ₀(ℓ).
    pub is_gamma0: bool,
}

/// Smallest primitive root modulo the prime `ell`.
pub fn primitive_root(ell: u64) -> u64 {
    if ell == 2 {
        return 1;
    }
    let mut factors = Vec::new();
    let mut m = ell - 1;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            factors.push(q);
            while m.is_multiple_of(q) {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..ell)
        .find(|&g| factors.iter().all(|&f| pow_mod_u64(g, (ell - 1) / f, ell) != 1))
        .expect("primitive root exists")
}

fn check_weight_level(k: u64, ell: u64) -> Result<(), ModcurveError> {
    if k % 2 == 1 || k < 4 {
        return Err(ModcurveError::BadWeight(k));
    }
    if !is_prime_u64(ell) || ell < 5 {
        return Err(ModcurveError::BadPrime(ell));
    }
    if ell < k - 1 {
        return Err(ModcurveError::LevelTooSmall { k, ell });
    }
    Ok(())
}

pub fn gamma_h(k: u64, ell: u64) -> Result<SubgroupSpec, ModcurveError> {
    check_weight_level(k, ell)?;
    let g = num_integer::gcd(k - 2, ell - 1);
    let generator = pow_mod_u64(primitive_root(ell), (ell - 1) / g, ell);
    Ok(SubgroupSpec {
        ell,
        k,
        gcd: g,
        generator,
        order: g / 2,
        index: g / 2,
        is_gamma0: g == ell - 1,
    })
}

/// Genus of X₁(ℓ) for primes ℓ ≥ 11.
pub fn genus_x1(ell: u64) -> Result<u64, ModcurveError> {
    if ell < 11 || !is_prime_u64(ell) {
        return Err(ModcurveError::BadPrime(ell));
    }
    Ok((ell - 5) * (ell - 7) / 24)
}

/// dim S₂(Γ₀(ℓ), ε) for an even character ε = ω^a of prime level ℓ ≥ 5.
///
/// Cohen-Oesterlé at prime level: (ℓ+1)/12 - 1 - ¼Σ_{x²=-1} ε(x)
/// - ⅓Σ_{x²+x+1=0} ε(x) + [ε = 1]. The character sums only involve values
/// of ε at elements of order 4 and 3, so they are real and computed exactly
/// from the exponent.
pub fn dim_s2_character(chi: &CharacterData) -> Result<u64, ModcurveError> {
    let ell = chi.ell;
    if !chi.is_even() || !is_prime_u64(ell) || ell < 5 {
        return Err(ModcurveError::BadPrime(ell));
    }
    let a = chi.exponent as i64;
    let sum4: i64 = if ell % 4 == 1 {
        if (a / 2) % 2 == 0 {
            2
        } else {
            -2
        }
    } else {
        0
    };
    let sum3: i64 = if ell % 3 == 1 {
        if a % 3 == 0 {
            2
        } else {
            -1
        }
    } else {
        0
    };
    let trivial = if chi.is_trivial() { 12 } else { 0 };
    let twelve = (ell as i64 + 1) - 12 - 3 * sum4 - 4 * sum3 + trivial;
    assert!(
        twelve % 12 == 0 && twelve >= 0,
        "dimension formula not integral: {twelve}/12"
    );
    Ok((twelve / 12) as u64)
}

/// Even characters ω^{jg}, j = 0 .. (ℓ-1)/g - 1: the characters trivial on H.
pub fn characters_of(spec: &SubgroupSpec) -> Vec<CharacterData> {
    (0..(spec.ell - 1) / spec.gcd)
        .map(|j| CharacterData::new(spec.ell, j * spec.gcd))
        .collect()
}

/// Genus of X_{Γ_H}, summed character by character.
pub fn dim_j_gamma_h(k: u64, ell: u64) -> Result<u64, ModcurveError> {
    let spec = gamma_h(k, ell)?;
    characters_of(&spec)
        .iter()
        .map(dim_s2_character)
        .sum()
}

/// Conjugacy-class types in PGL₂(F_ℓ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "order", rename_all = "lowercase")]
pub enum ClassKind {
    Identity,
    Unipotent,
    /// Eigenvalue ratio of order d in F_ℓ*.
    Split(u64),
    /// Eigenvalue ratio of order d in the norm-one subgroup of F_{ℓ²}*.
    Nonsplit(u64),
}

impl ClassKind {
    /// Order of the class in PGL₂(F_ℓ).
    pub fn order(&self, ell: u64) -> u64 {
        match *self {
            ClassKind::Identity => 1,
            ClassKind::Unipotent => ell,
            ClassKind::Split(d) | ClassKind::Nonsplit(d) => d,
        }
    }

    pub fn is_involution(&self) -> bool {
        matches!(self, ClassKind::Split(2) | ClassKind::Nonsplit(2))
    }

    /// Number of elements of PGL₂(F_ℓ) of this kind (all classes of the
    /// given order together).
    pub fn element_count(&self, ell: u64) -> u64 {
        let phi_half = |d: u64| if d == 2 { 1 } else { totient(d) / 2 };
        match *self {
            ClassKind::Identity => 1,
            ClassKind::Unipotent => ell * ell - 1,
            ClassKind::Split(d) => phi_half(d) * ell * (ell + 1) / if d == 2 { 2 } else { 1 },
            ClassKind::Nonsplit(d) => phi_half(d) * ell * (ell - 1) / if d == 2 { 2 } else { 1 },
        }
    }

    /// Chebotarev density of this kind in PGL₂(F_ℓ).
    pub fn density(&self, ell: u64) -> f64 {
        self.element_count(ell) as f64 / (ell * (ell * ell - 1)) as f64
    }
}

fn totient(mut n: u64) -> u64 {
    let mut out = n;
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            while n.is_multiple_of(q) {
                n /= q;
            }
            out -= out / q;
        }
        q += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKind::Identity => write!(f, "identity"),
            ClassKind::Unipotent => write!(f, "unipotent"),
            ClassKind::Split(d) => write!(f, "split({d})"),
            ClassKind::Nonsplit(d) => write!(f, "nonsplit({d})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CycleTypeCatalog {
    pub ell: u64,
    entries: BTreeMap<ClassKind, DegreePattern>,
    inverse: BTreeMap<DegreePattern, ClassKind>,
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

impl CycleTypeCatalog {
    pub fn entries(&self) -> impl Iterator<Item = (&ClassKind, &DegreePattern)> {
        self.entries.iter()
    }

    pub fn pattern(&self, kind: &ClassKind) -> Option<&DegreePattern> {
        self.entries.get(kind)
    }

    pub fn patterns(&self) -> BTreeSet<DegreePattern> {
        self.entries.values().cloned().collect()
    }

    pub fn lookup(&self, pattern: &DegreePattern) -> Option<ClassKind> {
        self.inverse.get(pattern).copied()
    }

    pub fn contains(&self, pattern: &DegreePattern) -> bool {
        self.inverse.contains_key(pattern)
    }
}

/// Closed-form catalog. Panics if the pattern → class map fails to be
/// injective, which would make Frobenius classes unreadable from patterns.
pub fn pgl2_cycle_types(ell: u64) -> CycleTypeCatalog {
    assert!(ell >= 3 && is_prime_u64(ell), "need an odd prime, got {ell}");
    let n = ell as usize;
    let mut entries = BTreeMap::new();
    entries.insert(ClassKind::Identity, DegreePattern::new(vec![1; n + 1]));
    entries.insert(ClassKind::Unipotent, DegreePattern::new(vec![1, n]));
    for d in divisors(ell - 1).into_iter().filter(|&d| d > 1) {
        let mut parts = vec![1, 1];
        parts.extend(std::iter::repeat_n(d as usize, (n - 1) / d as usize));
        entries.insert(ClassKind::Split(d), DegreePattern::new(parts));
    }
    for d in divisors(ell + 1).into_iter().filter(|&d| d > 1) {
        let parts = vec![d as usize; (n + 1) / d as usize];
        entries.insert(ClassKind::Nonsplit(d), DegreePattern::new(parts));
    }
    let mut inverse = BTreeMap::new();
    for (kind, pat) in &entries {
        assert_eq!(pat.total(), n + 1);
        let prev = inverse.insert(pat.clone(), *kind);
        assert!(prev.is_none(), "pattern {pat} shared by two classes");
    }
    CycleTypeCatalog {
        ell,
        entries,
        inverse,
    }
}

/// Every cycle type of PGL₂(F_ℓ) on P¹(F_ℓ), by enumerating the whole group.
pub fn pgl2_brute_force_patterns(ell: u64) -> BTreeSet<DegreePattern> {
    pgl2_brute_force_counts(ell).into_keys().collect()
}

/// Number of group elements with each cycle type.
pub fn pgl2_brute_force_counts(ell: u64) -> BTreeMap<DegreePattern, u64> {
    let p = ell;
    let n = (p + 1) as usize;
    let inv = |x: u64| pow_mod_u64(x, p - 2, p);
    // Points 0..p-1 are (x : 1), point p is (1 : 0).
    let act = |m: [u64; 4], pt: u64| -> u64 {
        let (x, y) = if pt == p { (1, 0) } else { (pt, 1) };
        let nx = (m[0] * x + m[1] * y) % p;
        let ny = (m[2] * x + m[3] * y) % p;
        if ny == 0 {
            p
        } else {
            nx * inv(ny) % p
        }
    };
    let mut out = BTreeMap::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let m = [a, b, c, d];
                    if (a * d + p * p - b * c).is_multiple_of(p) {
                        continue;
                    }
                    // One representative per scalar class: first nonzero entry is 1.
                    if m.iter().find(|&&v| v != 0) != Some(&1) {
                        continue;
                    }
                    let mut seen = vec![false; n];
                    let mut parts = Vec::new();
                    for s in 0..n {
                        if seen[s] {
                            continue;
                        }
                        let mut len = 0;
                        let mut cur = s as u64;
                        while !seen[cur as usize] {
                            seen[cur as usize] = true;
                            len += 1;
                            cur = act(m, cur);
                        }
                        parts.push(len);
                    }
                    *out.entry(DegreePattern::new(parts)).or_insert(0) += 1;
                }
            }
        }
    }
    out
}

/// Reads the projective order and class kind off a Frobenius pattern.
pub fn projective_order_from_pattern(
    pattern: &DegreePattern,
    catalog: &CycleTypeCatalog,
) -> Result<(u64, ClassKind), ModcurveError> {
    catalog
        .lookup(pattern)
        .map(|k| (k.order(catalog.ell), k))
        .ok_or_else(|| ModcurveError::NotInCatalog {
            pattern: pattern.to_string(),
            ell: catalog.ell,
        })
}
