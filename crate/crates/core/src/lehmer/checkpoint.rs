//! Plain-text search checkpoints: a header, then one line per residue
//! class with its decimal cursor and, once found, the class's first hit.
//!
//! ```text
//! # galrep lehmer checkpoint
//! range 0 10000000000000000
//! ells 11,31
//! 386871551999 4357000000000000 -
//! ...
//! ```

use std::fs;
use std::path::Path;

use super::LehmerError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCursor {
    pub residue: u128,
    /// Next value of the progression not yet examined.
    pub cursor: u128,
    pub hit: Option<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub lo: u128,
    pub hi: u128,
    pub ells: Vec<u64>,
    pub classes: Vec<ClassCursor>,
}

const HEADER: &str = "# galrep lehmer checkpoint";

fn bad(msg: impl Into<String>) -> LehmerError {
    LehmerError::Checkpoint(msg.into())
}

fn num(s: &str) -> Result<u128, LehmerError> {
    s.parse().map_err(|_| bad(format!("{s:?} is not a decimal integer")))
}

impl Checkpoint {
    pub fn fresh(lo: u128, hi: u128, ells: Vec<u64>, classes: &[u128]) -> Self {
        Checkpoint {
            lo,
            hi,
            ells,
            classes: classes
                .iter()
                .map(|&r| ClassCursor {
                    residue: r,
                    cursor: lo,
                    hit: None,
                })
                .collect(),
        }
    }

    pub fn best(&self) -> Option<u128> {
        self.classes.iter().filter_map(|c| c.hit).min()
    }

    pub fn render(&self) -> String {
        let ells: Vec<String> = self.ells.iter().map(|l| l.to_string()).collect();
        let mut s = format!("{HEADER}\nrange {} {}\nells {}\n", self.lo, self.hi, ells.join(","));
        for c in &self.classes {
            let hit = c.hit.map_or("-".to_string(), |h| h.to_string());
            s.push_str(&format!("{} {} {}\n", c.residue, c.cursor, hit));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, LehmerError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        if lines.next() != Some(HEADER) {
            return Err(bad("missing header"));
        }
        let range = lines.next().ok_or_else(|| bad("missing range line"))?;
        let parts: Vec<&str> = range.split_whitespace().collect();
        let [tag, lo, hi] = parts[..] else {
            return Err(bad("malformed range line"));
        };
        if tag != "range" {
            return Err(bad("malformed range line"));
        }
        let (lo, hi) = (num(lo)?, num(hi)?);
        let ells_line = lines.next().ok_or_else(|| bad("missing ells line"))?;
        let ells = ells_line
            .strip_prefix("ells ")
            .ok_or_else(|| bad("malformed ells line"))?
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad(format!("bad ℓ {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut classes = Vec::new();
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            let [r, c, h] = f[..] else {
                return Err(bad(format!("malformed class line {line:?}")));
            };
            let hit = if h == "-" { None } else { Some(num(h)?) };
            classes.push(ClassCursor {
                residue: num(r)?,
                cursor: num(c)?,
                hit,
            });
        }
        Ok(Checkpoint { lo, hi, ells, classes })
    }

    pub fn read(path: &Path) -> Result<Self, LehmerError> {
        let text = fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Writes atomically through a sibling temporary file.
    pub fn write(&self, path: &Path) -> Result<(), LehmerError> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.render()).map_err(|e| bad(format!("{}: {e}", tmp.display())))?;
        fs::rename(&tmp, path).map_err(|e| bad(format!("{}: {e}", path.display())))
    }
}
