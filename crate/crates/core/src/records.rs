//! Galois-representation polynomial records and the GALREP v1 text format.
//!
//! ```text
//! GALREP v1
//! k=12 ell=31 deg=32 kind=projective source=table-1
//! -1261963
//! ...
//! 1
//! ```
//! Coefficients are listed constant term first, one per line.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::arith::IntPolynomial;

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{kind} record for ell = {ell} must have degree {expected}, found {found}")]
    DegreeMismatch {
        kind: RecordKind,
        ell: u64,
        expected: usize,
        found: usize,
    },
    #[error("record polynomial is not monic")]
    NotMonic,
    #[error("unknown record id {0:?}")]
    UnknownId(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    /// Degree ℓ + 1: roots indexed by the lines of the 2-dimensional torsion.
    Projective,
    /// Degree ℓ² - 1: roots indexed by the nonzero torsion points.
    Full,
}

impl RecordKind {
    pub fn degree(&self, ell: u64) -> usize {
        match self {
            RecordKind::Projective => ell as usize + 1,
            RecordKind::Full => (ell * ell - 1) as usize,
        }
    }
}

impl fmt::Display for RecordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecordKind::Projective => "projective",
            RecordKind::Full => "full",
        })
    }
}

impl FromStr for RecordKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "projective" => Ok(RecordKind::Projective),
            "full" => Ok(RecordKind::Full),
            _ => Err(format!("unknown kind {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisPolyRecord {
    pub k: u64,
    pub ell: u64,
    pub kind: RecordKind,
    pub poly: IntPolynomial,
    pub source: String,
}

impl GaloisPolyRecord {
    pub fn new(
        k: u64,
        ell: u64,
        kind: RecordKind,
        poly: IntPolynomial,
        source: impl Into<String>,
    ) -> Result<Self, RecordError> {
        let expected = kind.degree(ell);
        let found = poly.degree().unwrap_or(0);
        if found != expected {
            return Err(RecordError::DegreeMismatch {
                kind,
                ell,
                expected,
                found,
            });
        }
        if !poly.leading().is_one() {
            return Err(RecordError::NotMonic);
        }
        Ok(GaloisPolyRecord {
            k,
            ell,
            kind,
            poly,
            source: source.into(),
        })
    }

    /// Short identifier such as `k12l31`.
    pub fn id(&self) -> String {
        format!("k{}l{}", self.k, self.ell)
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn to_galrep(&self) -> String {
        let mut s = String::new();
        s.push_str("GALREP v1\n");
        s.push_str(&format!(
            "k={} ell={} deg={} kind={} source={}\n",
            self.k,
            self.ell,
            self.degree(),
            self.kind,
            self.source
        ));
        for c in self.poly.coeffs() {
            s.push_str(&c.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse_galrep(text: &str) -> Result<Self, RecordError> {
        let err = |line: usize, msg: String| RecordError::Parse { line, msg };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        match lines.next() {
            Some((_, "GALREP v1")) => {}
            Some((n, other)) => return Err(err(n, format!("expected `GALREP v1`, found {other:?}"))),
            None => return Err(err(1, "empty input".into())),
        }
        let (mline, meta) = lines
            .next()
            .ok_or_else(|| err(2, "missing metadata line".into()))?;
        let mut k = None;
        let mut ell = None;
        let mut deg = None;
        let mut kind = None;
        let mut source = None;
        for field in meta.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| err(mline, format!("malformed field {field:?}")))?;
            let num = |v: &str| -> Result<u64, RecordError> {
                v.parse()
                    .map_err(|_| err(mline, format!("bad value for {key}: {v:?}")))
            };
            match key {
                "k" => k = Some(num(value)?),
                "ell" => ell = Some(num(value)?),
                "deg" => deg = Some(num(value)? as usize),
                "kind" => kind = Some(value.parse::<RecordKind>().map_err(|e| err(mline, e))?),
                "source" => source = Some(value.to_string()),
                _ => return Err(err(mline, format!("unknown field {key:?}"))),
            }
        }
        let missing = |name: &str| err(mline, format!("missing {name}="));
        let k = k.ok_or_else(|| missing("k"))?;
        let ell = ell.ok_or_else(|| missing("ell"))?;
        let deg = deg.ok_or_else(|| missing("deg"))?;
        let kind = kind.ok_or_else(|| missing("kind"))?;
        let source = source.ok_or_else(|| missing("source"))?;
        let mut coeffs = Vec::with_capacity(deg + 1);
        for (n, l) in lines {
            if l.is_empty() {
                continue;
            }
            coeffs.push(
                l.parse::<BigInt>()
                    .map_err(|_| err(n, format!("bad coefficient {l:?}")))?,
            );
        }
        if coeffs.len() != deg + 1 {
            return Err(err(
                mline,
                format!("deg={deg} needs {} coefficients, found {}", deg + 1, coeffs.len()),
            ));
        }
        let poly = IntPolynomial::new(coeffs);
        if poly.degree() != Some(deg) {
            return Err(err(mline, "top coefficient is zero".into()));
        }
        GaloisPolyRecord::new(k, ell, kind, poly, source)
    }

    pub fn read_file(path: &Path) -> Result<Self, RecordError> {
        let text = fs::read_to_string(path).map_err(|e| RecordError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse_galrep(&text)
    }

    pub fn write_file(&self, path: &Path) -> Result<(), RecordError> {
        fs::write(path, self.to_galrep()).map_err(|e| RecordError::Io {
            path: path.display().to_string(),
            source: e,
        })
    }
}

pub const TABLE1_SOURCE: &str = "table-1";

/// Identifiers of the embedded degree-(ℓ+1) polynomials.
pub const EMBEDDED_IDS: [&str; 4] = ["k12l31", "k16l29", "k20l31", "k22l31"];

pub fn embedded(id: &str) -> Result<GaloisPolyRecord, RecordError> {
    let (k, ell, coeffs): (u64, u64, &[i64]) = match id {
        "k12l31" => (12, 31, &K12_L31),
        "k16l29" => (16, 29, &K16_L29),
        "k20l31" => (20, 31, &K20_L31),
        "k22l31" => (22, 31, &K22_L31),
        _ => return Err(RecordError::UnknownId(id.to_string())),
    };
    GaloisPolyRecord::new(
        k,
        ell,
        RecordKind::Projective,
        IntPolynomial::from_i64s(coeffs),
        TABLE1_SOURCE,
    )
}

pub fn embedded_all() -> Vec<GaloisPolyRecord> {
    EMBEDDED_IDS
        .iter()
        .map(|id| embedded(id).expect("embedded data is well formed"))
        .collect()
}

// Coefficients constant term first.
const K12_L31: [i64; 33] = [
    -1261963, 20505628, -201167463, 521018178, -1492309000, 2380573824,
    -4062352344, 4607500922, -5462615927, 4554764528, -4120267319, 2531110165,
    -1820871490, 751001257, -448568729, 66421685, -40645681, -28954961, 4369791,
    -7527575, 747906, -646195, 127410, 24707, -5921, 9300, -2480, 713, -155,
    0, 0, -4, 1,
];

const K16_L29: [i64; 31] = [
    -261910751, 2363203645, 2573924261, -2555610007, 4054490087, -1463296732,
    -7068248851, 17713731976, -27316581262, 35730188833, -40888329774, 40034881756,
    -33394267804, 23992472995, -15020495335, 8240756348, -3929042061, 1602112888,
    -545068137, 149069425, -30157709, 3161522, 599981, -437871, 142158, -33002,
    6003, -899, 116, -13, 1,
];

const K20_L31: [i64; 33] = [
    178725601175511, -1113936554991727, 3269911760551427, -5959749341609879,
    7460752526582377, -6661579151098950, 4206562171750919, -1714511602191278,
    250865100757790, 197719989210108, -162450534558477, 54285321863574,
    -3257558862543, -5273524311353, 2480836111912, -406418167694, -83774789980,
    64357190741, -14790203106, -278789479, 1225662500, -344750256, 12517459,
    17190864, -4280108, 59489, 143499, -23560, -248, 558, -62, -4, 1,
];

const K22_L31: [i64; 33] = [
    187532019539254309, -202960986205176103, -13833080015551423, 16902762581347117,
    61714590456038129, -9976638213111902, -24397472702475140, 294530833190147,
    7446294546204081, -171825071648506, -1135328992145553, -99789981007214,
    146446287180279, 15867354189588, -9952753525850, -1735983387875, 227525150938,
    95827452774, 35629245810, -5281917640, -3865963779, 345367838, 205283395,
    -28562129, -4960682, 1523309, -46593, -44020, 5797, 651, -124, -3, 1,
];
