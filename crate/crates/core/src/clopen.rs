use std::fmt;

use crate::error::{Error, Result};
use crate::system::OdometerSystem;

/// A cylinder: the points whose first `depth` digits encode to `code`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    pub depth: usize,
    pub code: u64,
}

impl Cylinder {
    pub fn new(system: &OdometerSystem, depth: usize, code: u64) -> Result<Self> {
        let radix = system.radix(depth)?;
        if code >= radix {
            return Err(Error::CodeOutOfRange { code, depth, radix });
        }
        Ok(Cylinder { depth, code })
    }

    /// The whole space, `[]`.
    pub fn root() -> Self {
        Cylinder { depth: 0, code: 0 }
    }

    pub fn from_digits(system: &OdometerSystem, digits: &[u64]) -> Result<Self> {
        Ok(Cylinder {
            depth: digits.len(),
            code: system.code_of(digits)?,
        })
    }

    /// Extends the cylinder by `extra` zero digits (same code, deeper).
    pub fn extend_zero(self, extra: usize) -> Self {
        Cylinder {
            depth: self.depth + extra,
            code: self.code,
        }
    }

    /// Renders `[d1 d2 ... dD]`, e.g. `[01]`.
    pub fn render(&self, system: &OdometerSystem) -> String {
        let mut s = String::from("[");
        for d in system.digits(self.depth, self.code) {
            push_digit(&mut s, d);
        }
        s.push(']');
        s
    }

    /// Parses a literal `[digits]`; `column` is the 1-based position of `[` for errors.
    pub fn parse(system: &OdometerSystem, text: &str, column: usize) -> Result<Self> {
        let (cyl, used) = parse_cylinder_prefix(system, text, column)?;
        if used != text.len() {
            return Err(Error::parse(column + used, "trailing characters after cylinder"));
        }
        Ok(cyl)
    }
}

fn push_digit(s: &mut String, d: u64) {
    if d < 36 {
        s.push(std::char::from_digit(d as u32, 36).unwrap());
    } else {
        s.push_str(&format!("<{d}>"));
    }
}

/// Parses a cylinder literal at the start of `text`, returning it and the
/// number of bytes consumed.
pub fn parse_cylinder_prefix(
    system: &OdometerSystem,
    text: &str,
    column: usize,
) -> Result<(Cylinder, usize)> {
    let bytes = text.as_bytes();
    if bytes.first() != Some(&b'[') {
        return Err(Error::parse(column, "expected '['"));
    }
    let mut digits = Vec::new();
    let mut i = 1;
    loop {
        match bytes.get(i) {
            None => return Err(Error::parse(column, "unterminated cylinder literal")),
            Some(b']') => {
                i += 1;
                break;
            }
            Some(b'<') => {
                let close = text[i..]
                    .find('>')
                    .ok_or_else(|| Error::parse(column + i, "unterminated digit"))?;
                let d: u64 = text[i + 1..i + close]
                    .parse()
                    .map_err(|_| Error::parse(column + i, "invalid digit"))?;
                digits.push(d);
                i += close + 1;
            }
            Some(&c) => {
                let d = (c as char)
                    .to_digit(36)
                    .ok_or_else(|| Error::parse(column + i, format!("invalid digit '{}'", c as char)))?;
                digits.push(d as u64);
                i += 1;
            }
        }
    }
    for (k, &d) in digits.iter().enumerate() {
        if d >= system.base(k) {
            return Err(Error::parse(
                column + 1 + k,
                format!("digit {d} is not below base {}", system.base(k)),
            ));
        }
    }
    Ok((Cylinder::from_digits(system, &digits)?, i))
}

/// A clopen subset of the odometer, stored as a code set at one depth.
///
/// The depth is always the smallest one at which the set is a union of
/// cylinders, which makes structural equality coincide with set equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClopenSet {
    system: OdometerSystem,
    depth: usize,
    codes: Vec<u64>,
}

impl ClopenSet {
    /// Builds the canonical form of the union of the given depth-`depth` cylinders.
    pub fn canonicalize(system: &OdometerSystem, depth: usize, codes: Vec<u64>) -> Result<Self> {
        let radix = system.radix(depth)?;
        let mut codes = codes;
        if let Some(&bad) = codes.iter().find(|&&c| c >= radix) {
            return Err(Error::CodeOutOfRange {
                code: bad,
                depth,
                radix,
            });
        }
        codes.sort_unstable();
        codes.dedup();
        let mut depth = depth;
        let mut radix = radix;
        while depth > 0 && !codes.is_empty() {
            let b = system.base(depth - 1);
            let parent_radix = radix / b;
            // codes are sorted, and the top digit is most significant, so each
            // parent's children appear as codes p, p + R, ..., p + (b-1)R.
            if codes.len() as u64 % b != 0 {
                break;
            }
            let per_digit = codes.len() / b as usize;
            let (low, _) = codes.split_at(per_digit);
            let full = low.iter().all(|&c| c < parent_radix)
                && (0..b as usize).all(|j| {
                    (0..per_digit).all(|k| codes[j * per_digit + k] == low[k] + j as u64 * parent_radix)
                });
            if !full {
                break;
            }
            codes.truncate(per_digit);
            depth -= 1;
            radix = parent_radix;
        }
        if codes.is_empty() {
            depth = 0;
        }
        Ok(ClopenSet {
            system: system.clone(),
            depth,
            codes,
        })
    }

    pub fn empty(system: &OdometerSystem) -> Self {
        ClopenSet {
            system: system.clone(),
            depth: 0,
            codes: Vec::new(),
        }
    }

    pub fn full(system: &OdometerSystem) -> Self {
        ClopenSet {
            system: system.clone(),
            depth: 0,
            codes: vec![0],
        }
    }

    pub fn cylinder(system: &OdometerSystem, cyl: Cylinder) -> Result<Self> {
        ClopenSet::canonicalize(system, cyl.depth, vec![cyl.code])
    }

    pub fn system(&self) -> &OdometerSystem {
        &self.system
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Sorted codes at the canonical depth.
    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.depth == 0 && !self.codes.is_empty()
    }

    /// The sorted codes of this set at a deeper depth.
    pub fn codes_at(&self, depth: usize) -> Result<Vec<u64>> {
        if depth < self.depth {
            return Err(Error::invariant(format!(
                "cannot express a depth-{} set at depth {depth}",
                self.depth
            )));
        }
        let r = self.system.radix(self.depth)?;
        let m = self.system.span(self.depth, depth)?;
        if self.codes.len() as u64 * m > crate::system::MAX_TABLE {
            return Err(Error::TooLarge { depth });
        }
        let mut out = Vec::with_capacity(self.codes.len() * m as usize);
        for j in 0..m {
            out.extend(self.codes.iter().map(|&c| c + j * r));
        }
        Ok(out)
    }

    /// Membership bitmap at a depth at least the set's own.
    pub fn mask_at(&self, depth: usize) -> Result<Vec<bool>> {
        let n = self.system.table_len(depth)?;
        let r = self.system.radix(self.depth)?;
        let mut inner = vec![false; r as usize];
        for &c in &self.codes {
            inner[c as usize] = true;
        }
        Ok((0..n).map(|c| inner[(c % r) as usize]).collect())
    }

    /// Whether the depth-`depth` cylinder `code` lies in the set; `depth` must
    /// be at least the set's depth.
    pub fn contains_code(&self, depth: usize, code: u64) -> bool {
        debug_assert!(depth >= self.depth);
        let r = self.system.radix(self.depth).unwrap_or(u64::MAX);
        self.codes.binary_search(&(code % r)).is_ok()
    }

    pub fn contains_cylinder(&self, cyl: Cylinder) -> Result<bool> {
        if cyl.depth >= self.depth {
            return Ok(self.contains_code(cyl.depth, cyl.code));
        }
        let inner = ClopenSet::cylinder(&self.system, cyl)?;
        inner.is_subset(self)
    }

    fn check(&self, other: &ClopenSet) -> Result<()> {
        if self.system != other.system {
            return Err(Error::SystemMismatch);
        }
        Ok(())
    }

    fn combine(&self, other: &ClopenSet, keep: impl Fn(bool, bool) -> bool) -> Result<ClopenSet> {
        self.check(other)?;
        let d = self.depth.max(other.depth);
        let a = self.mask_at(d)?;
        let b = other.mask_at(d)?;
        let codes = (0..a.len())
            .filter(|&i| keep(a[i], b[i]))
            .map(|i| i as u64)
            .collect();
        ClopenSet::canonicalize(&self.system, d, codes)
    }

    pub fn union(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> ClopenSet {
        if self.is_empty() {
            return ClopenSet::full(&self.system);
        }
        let r = self.system.radix(self.depth).expect("canonical depth is tabulable");
        let codes = (0..r).filter(|c| self.codes.binary_search(c).is_err()).collect();
        ClopenSet::canonicalize(&self.system, self.depth, codes).expect("codes are in range")
    }

    pub fn is_subset(&self, other: &ClopenSet) -> Result<bool> {
        self.check(other)?;
        if self.is_empty() {
            return Ok(true);
        }
        if other.depth > self.depth {
            let a = self.codes_at(other.depth)?;
            return Ok(a.iter().all(|&c| other.codes.binary_search(&c).is_ok()));
        }
        Ok(self.codes.iter().all(|&c| other.contains_code(self.depth, c)))
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> Result<bool> {
        Ok(self.intersect(other)?.is_empty())
    }

    /// `g^t A`: every code shifted by `t` modulo `B_D`.
    pub fn translate(&self, t: i64) -> ClopenSet {
        if self.depth == 0 {
            return self.clone();
        }
        let r = self.system.radix(self.depth).expect("canonical depth is tabulable") as i64;
        let codes = self
            .codes
            .iter()
            .map(|&c| (c as i64 + t).rem_euclid(r) as u64)
            .collect();
        ClopenSet::canonicalize(&self.system, self.depth, codes).expect("codes are in range")
    }

    /// Image under the digitwise complement `d_i -> b_i - 1 - d_i`.
    pub fn mirror(&self) -> ClopenSet {
        let r = self.system.radix(self.depth).expect("canonical depth is tabulable");
        let codes = self.codes.iter().map(|&c| r - 1 - c).collect();
        ClopenSet::canonicalize(&self.system, self.depth, codes).expect("codes are in range")
    }

    /// Fraction of `B_D` covered, as (count, radix) at the canonical depth.
    pub fn measure(&self) -> (u64, u64) {
        let r = self.system.radix(self.depth).expect("canonical depth is tabulable");
        (self.codes.len() as u64, r)
    }

    /// The fewest cylinders (of mixed depths) whose union is the set, in
    /// lexicographic digit order.
    pub fn cylinders(&self) -> Vec<Cylinder> {
        let mut out = Vec::new();
        let mut level: Vec<u64> = self.codes.clone();
        let mut depth = self.depth;
        while depth > 0 && !level.is_empty() {
            let b = self.system.base(depth - 1);
            let pr = self.system.radix(depth - 1).expect("tabulable");
            let mut counts = std::collections::BTreeMap::new();
            for &c in &level {
                *counts.entry(c % pr).or_insert(0u64) += 1;
            }
            let mut next = Vec::new();
            for &c in &level {
                if counts[&(c % pr)] == b {
                    if c < pr {
                        next.push(c);
                    }
                } else {
                    out.push(Cylinder { depth, code: c });
                }
            }
            level = next;
            depth -= 1;
        }
        if depth == 0 && !level.is_empty() {
            out.push(Cylinder::root());
        }
        out.sort_by_key(|c| self.system.digits(c.depth, c.code));
        out
    }

    /// Parses `[01]+[1]`, `[]` (the whole space) or `empty`.
    pub fn parse(system: &OdometerSystem, text: &str) -> Result<ClopenSet> {
        let t = text.trim();
        let lead = text.len() - text.trim_start().len();
        if t == "empty" || t == "∅" {
            return Ok(ClopenSet::empty(system));
        }
        let mut acc = ClopenSet::empty(system);
        let mut col = lead + 1;
        for part in t.split('+') {
            let p = part.trim();
            let inner_col = col + (part.len() - part.trim_start().len());
            let cyl = Cylinder::parse(system, p, inner_col)?;
            acc = acc.union(&ClopenSet::cylinder(system, cyl)?)?;
            col += part.len() + 1;
        }
        Ok(acc)
    }
}

/// Renders as cylinders joined by `+`; `[]` is the whole space and `empty` is ∅.
impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("empty");
        }
        let parts: Vec<String> = self
            .cylinders()
            .iter()
            .map(|c| c.render(&self.system))
            .collect();
        f.write_str(&parts.join("+"))
    }
}
