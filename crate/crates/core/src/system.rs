use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest number of cylinders a single table may hold.
pub const MAX_TABLE: u64 = 1 << 24;

/// An odometer given by an eventually periodic base sequence.
///
/// The base at coordinate `i` (0-based) is `pre[i]` while `i < pre.len()`,
/// then the period repeats forever. Values are stored in canonical form:
/// the period is primitive and the preperiod is as short as possible, so
/// two systems are equal exactly when their base sequences coincide.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OdometerSystem {
    pre: Vec<u64>,
    per: Vec<u64>,
}

impl OdometerSystem {
    pub fn new(pre: Vec<u64>, per: Vec<u64>) -> Result<Self> {
        if per.is_empty() {
            return Err(Error::InvalidSystem("period must be nonempty".into()));
        }
        if let Some(b) = pre.iter().chain(per.iter()).find(|&&b| b < 2) {
            return Err(Error::InvalidSystem(format!("base {b} is smaller than 2")));
        }
        let mut per = per;
        let n = per.len();
        if let Some(p) = (1..n).find(|&p| n % p == 0 && (p..n).all(|i| per[i] == per[i - p])) {
            per.truncate(p);
        }
        let mut pre = pre;
        while let Some(&last) = pre.last() {
            if last != *per.last().unwrap() {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        Ok(OdometerSystem { pre, per })
    }

    /// The dyadic odometer (all bases equal to 2).
    pub fn dyadic() -> Self {
        OdometerSystem::constant(2)
    }

    pub fn constant(base: u64) -> Self {
        OdometerSystem::new(Vec::new(), vec![base]).expect("constant base must be at least 2")
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.pre
    }

    pub fn period(&self) -> &[u64] {
        &self.per
    }

    /// Base of digit `i` (0-based), i.e. `b_{i+1}`.
    pub fn base(&self, i: usize) -> u64 {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    /// `B_depth`, the number of cylinders of the given depth.
    pub fn radix(&self, depth: usize) -> Result<u64> {
        let mut r: u64 = 1;
        for i in 0..depth {
            r = r
                .checked_mul(self.base(i))
                .ok_or(Error::TooLarge { depth })?;
        }
        Ok(r)
    }

    /// Like [`radix`](Self::radix) but also enforces the table size limit.
    pub fn table_len(&self, depth: usize) -> Result<u64> {
        let r = self.radix(depth)?;
        if r > MAX_TABLE {
            return Err(Error::TooLarge { depth });
        }
        Ok(r)
    }

    /// Product of the bases at digits `from..to`.
    pub fn span(&self, from: usize, to: usize) -> Result<u64> {
        let mut r: u64 = 1;
        for i in from..to {
            r = r.checked_mul(self.base(i)).ok_or(Error::TooLarge { depth: to })?;
        }
        Ok(r)
    }

    /// The system whose bases are those of `self` from digit `depth` on.
    pub fn shifted(&self, depth: usize) -> OdometerSystem {
        if depth <= self.pre.len() {
            return OdometerSystem::new(self.pre[depth..].to_vec(), self.per.clone())
                .expect("tail of a valid system is valid");
        }
        let mut per = self.per.clone();
        per.rotate_left((depth - self.pre.len()) % self.per.len());
        OdometerSystem::new(Vec::new(), per).expect("tail of a valid system is valid")
    }

    /// True when `m` shares no prime factor with any base at digit `depth` or later.
    pub fn coprime_beyond(&self, m: u64, depth: usize) -> bool {
        let tail_pre = self.pre.iter().skip(depth);
        tail_pre
            .chain(self.per.iter())
            .all(|&b| num_integer::gcd(m, b) == 1)
    }

    /// Digits `d_1..d_depth` of a code, least significant first.
    pub fn digits(&self, depth: usize, mut code: u64) -> Vec<u64> {
        (0..depth)
            .map(|i| {
                let b = self.base(i);
                let d = code % b;
                code /= b;
                d
            })
            .collect()
    }

    pub fn code_of(&self, digits: &[u64]) -> Result<u64> {
        let mut code: u64 = 0;
        let mut weight: u64 = 1;
        for (i, &d) in digits.iter().enumerate() {
            let b = self.base(i);
            if d >= b {
                return Err(Error::InvalidSystem(format!(
                    "digit {d} at position {} exceeds base {b}",
                    i + 1
                )));
            }
            code = d
                .checked_mul(weight)
                .and_then(|x| x.checked_add(code))
                .ok_or(Error::TooLarge { depth: digits.len() })?;
            if i + 1 < digits.len() {
                weight = weight.checked_mul(b).ok_or(Error::TooLarge { depth: digits.len() })?;
            }
        }
        Ok(code)
    }

    /// Compact tag used in element serializations, e.g. `D2` or `D(2;3)`.
    pub fn tag(&self) -> String {
        if self.pre.is_empty() && self.per.len() == 1 {
            format!("D{}", self.per[0])
        } else {
            format!("D({};{})", join(&self.pre), join(&self.per))
        }
    }

    /// Parses the compact tag form produced by [`tag`](Self::tag).
    pub fn from_tag(s: &str) -> Result<Self> {
        let body = s
            .strip_prefix('D')
            .ok_or_else(|| Error::parse(1, "system tag must start with 'D'"))?;
        if let Some(inner) = body.strip_prefix('(') {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| Error::parse(s.len(), "expected ')'"))?;
            let (pre, per) = inner
                .split_once(';')
                .ok_or_else(|| Error::parse(3, "expected ';' in system tag"))?;
            OdometerSystem::new(parse_list(pre, 3)?, parse_list(per, 3)?)
        } else {
            let b: u64 = body
                .parse()
                .map_err(|_| Error::parse(2, "expected a base after 'D'"))?;
            OdometerSystem::new(Vec::new(), vec![b])
        }
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn parse_list(s: &str, column: usize) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::parse(column, format!("invalid base '{}'", t.trim())))
        })
        .collect()
}

/// `bases pre=[..] per=[..]`; the `pre` part is omitted when empty.
impl fmt::Display for OdometerSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pre.is_empty() {
            write!(f, "bases per=[{}]", join(&self.per))
        } else {
            write!(f, "bases pre=[{}] per=[{}]", join(&self.pre), join(&self.per))
        }
    }
}

/// Accepts `bases pre=[2] per=[3]`, `per=[2]`, or a compact tag such as `D2`.
impl FromStr for OdometerSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('D') {
            return OdometerSystem::from_tag(t);
        }
        let mut rest = t.strip_prefix("bases").unwrap_or(t);
        let offset = |r: &str| s.len() - r.len() + 1;
        let mut pre = None;
        let mut per = None;
        loop {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            let col = offset(rest);
            let (key, after) = if let Some(a) = rest.strip_prefix("pre=") {
                ("pre", a)
            } else if let Some(a) = rest.strip_prefix("per=") {
                ("per", a)
            } else {
                return Err(Error::parse(col, "expected 'pre=[...]' or 'per=[...]'"));
            };
            let after = after
                .strip_prefix('[')
                .ok_or_else(|| Error::parse(col + 4, "expected '['"))?;
            let close = after
                .find(']')
                .ok_or_else(|| Error::parse(col + 4, "unterminated base list"))?;
            let list = parse_list(&after[..close], col + 5)?;
            let slot = if key == "pre" { &mut pre } else { &mut per };
            if slot.is_some() {
                return Err(Error::parse(col, format!("'{key}' given twice")));
            }
            *slot = Some(list);
            rest = &after[close + 1..];
        }
        let per = per.ok_or_else(|| Error::parse(s.len() + 1, "missing 'per=[...]'"))?;
        OdometerSystem::new(pre.unwrap_or_default(), per)
    }
}
