//! Elements of the topological full group of an odometer.
//!
//! An element `h` is stored as a depth-`D` table `n_w` saying that `h` acts
//! on the cylinder with code `w` as `g^{n_w}`. The table is the cocycle of
//! `h` with respect to `g`.
//!
//! Representation theorem. On depth-`D` codes `g` acts as `w -> w + 1 mod B_D`,
//! and for every integer `n` the power `g^n` maps the cylinder `w` bijectively
//! onto the cylinder `(w + n) mod B_D` (only the tail digits beyond `D` absorb
//! the carry). Hence a table defines a homeomorphism exactly when the code map
//! `w -> (w + n_w) mod B_D` is a permutation, every element with a locally
//! constant cocycle arises this way at some depth, and refining a table to a
//! deeper depth (copying each exponent to the children) never changes the map.
//! Every operation below is therefore exact arithmetic on finite tables.

use std::fmt;
use std::str::FromStr;

use crate::clopen::{parse_cylinder_prefix, ClopenSet};
use crate::error::{Error, Result};
use crate::system::OdometerSystem;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    system: OdometerSystem,
    depth: usize,
    table: Vec<i64>,
}

fn reduce_table(system: &OdometerSystem, mut depth: usize, mut table: Vec<i64>) -> (usize, Vec<i64>) {
    while depth > 0 {
        let parent = table.len() / system.base(depth - 1) as usize;
        if (parent..table.len()).any(|c| table[c] != table[c % parent]) {
            break;
        }
        table.truncate(parent);
        depth -= 1;
    }
    (depth, table)
}

impl Element {
    /// Checks that the table defines a bijection and canonicalizes it.
    pub fn validate(system: &OdometerSystem, depth: usize, table: Vec<i64>) -> Result<Self> {
        let radix = system.table_len(depth)?;
        if table.len() as u64 != radix {
            return Err(Error::CodeOutOfRange {
                code: table.len() as u64,
                depth,
                radix,
            });
        }
        let r = radix as i64;
        let mut preimage = vec![u64::MAX; table.len()];
        for (w, &n) in table.iter().enumerate() {
            let image = (w as i64 + n).rem_euclid(r) as usize;
            if preimage[image] != u64::MAX {
                return Err(Error::NotBijective {
                    first: preimage[image],
                    second: w as u64,
                    image: image as u64,
                });
            }
            preimage[image] = w as u64;
        }
        Ok(Element::from_valid(system, depth, table))
    }

    /// Canonicalizes a table already known to be a bijection.
    pub(crate) fn from_valid(system: &OdometerSystem, depth: usize, table: Vec<i64>) -> Self {
        let (depth, table) = reduce_table(system, depth, table);
        Element {
            system: system.clone(),
            depth,
            table,
        }
    }

    pub fn identity(system: &OdometerSystem) -> Self {
        Element::generator_power(system, 0)
    }

    /// The odometer map `g` itself.
    pub fn generator(system: &OdometerSystem) -> Self {
        Element::generator_power(system, 1)
    }

    pub fn generator_power(system: &OdometerSystem, t: i64) -> Self {
        Element {
            system: system.clone(),
            depth: 0,
            table: vec![t],
        }
    }

    pub fn system(&self) -> &OdometerSystem {
        &self.system
    }

    /// Canonical depth.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Exponents in code order at the canonical depth.
    pub fn table(&self) -> &[i64] {
        &self.table
    }

    pub fn radix(&self) -> u64 {
        self.table.len() as u64
    }

    /// The exponent on the depth-`depth` cylinder `code` (`depth >= self.depth()`).
    pub fn exponent(&self, code: u64) -> i64 {
        self.table[(code % self.table.len() as u64) as usize]
    }

    /// The table refined to a deeper depth.
    pub fn table_at(&self, depth: usize) -> Result<Vec<i64>> {
        if depth < self.depth {
            return Err(Error::invariant(format!(
                "cannot express a depth-{} element at depth {depth}",
                self.depth
            )));
        }
        let n = self.system.table_len(depth)? as usize;
        let r = self.table.len();
        Ok((0..n).map(|c| self.table[c % r]).collect())
    }

    /// The code permutation `w -> (w + n_w) mod B_depth`.
    pub fn sigma_at(&self, depth: usize) -> Result<Vec<u64>> {
        let t = self.table_at(depth)?;
        let r = t.len() as i64;
        Ok(t.iter()
            .enumerate()
            .map(|(w, &n)| (w as i64 + n).rem_euclid(r) as u64)
            .collect())
    }

    /// `|h|_g`, the largest absolute exponent.
    pub fn norm(&self) -> u64 {
        self.table.iter().map(|n| n.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn min_exponent(&self) -> i64 {
        *self.table.iter().min().expect("tables are nonempty")
    }

    pub fn max_exponent(&self) -> i64 {
        *self.table.iter().max().expect("tables are nonempty")
    }

    pub fn is_identity(&self) -> bool {
        self.depth == 0 && self.table[0] == 0
    }

    /// All exponents nonnegative.
    pub fn is_strongly_positive(&self) -> bool {
        self.table.iter().all(|&n| n >= 0)
    }

    /// The clopen set where the exponent is nonzero.
    pub fn support(&self) -> ClopenSet {
        let codes = (0..self.table.len() as u64)
            .filter(|&c| self.table[c as usize] != 0)
            .collect();
        ClopenSet::canonicalize(&self.system, self.depth, codes).expect("codes are in range")
    }

    fn check(&self, other: &Element) -> Result<()> {
        if self.system != other.system {
            return Err(Error::SystemMismatch);
        }
        Ok(())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        let d = self.depth.max(other.depth);
        let b = other.table_at(d)?;
        let r = b.len() as i64;
        let ra = self.table.len() as i64;
        let table = b
            .iter()
            .enumerate()
            .map(|(w, &nb)| {
                let image = (w as i64 + nb).rem_euclid(r);
                self.table[(image % ra) as usize] + nb
            })
            .collect();
        Ok(Element::from_valid(&self.system, d, table))
    }

    pub fn invert(&self) -> Element {
        let r = self.table.len() as i64;
        let mut table = vec![0; self.table.len()];
        for (w, &n) in self.table.iter().enumerate() {
            table[(w as i64 + n).rem_euclid(r) as usize] = -n;
        }
        Element::from_valid(&self.system, self.depth, table)
    }

    pub fn power(&self, t: i64) -> Element {
        let base = if t < 0 { self.invert() } else { self.clone() };
        let mut k = t.unsigned_abs();
        if k <= 8 {
            let mut acc = Element::identity(&self.system);
            for _ in 0..k {
                acc = acc.compose(&base).expect("same system");
            }
            return acc;
        }
        let mut acc = Element::identity(&self.system);
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&sq).expect("same system");
            }
            k >>= 1;
            if k > 0 {
                sq = sq.compose(&sq).expect("same system");
            }
        }
        acc
    }

    /// `k ∘ self ∘ k^{-1}`.
    pub fn conjugate_by(&self, k: &Element) -> Result<Element> {
        k.compose(self)?.compose(&k.invert())
    }

    /// The induced transformation `g_A`, extended by the identity off `A`.
    pub fn induced_generator(a: &ClopenSet) -> Result<Element> {
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
        let system = a.system();
        let r = system.radix(a.depth())?;
        let codes = a.codes();
        let mut table = vec![0i64; r as usize];
        for (i, &w) in codes.iter().enumerate() {
            let next = codes[(i + 1) % codes.len()];
            let gap = (next + r - w) % r;
            table[w as usize] = if gap == 0 { r as i64 } else { gap as i64 };
        }
        Ok(Element::from_valid(system, a.depth(), table))
    }

    /// The first-return map of `self` to `A`, extended by the identity off `A`.
    pub fn induced_element(&self, a: &ClopenSet) -> Result<Element> {
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
        if a.system() != &self.system {
            return Err(Error::SystemMismatch);
        }
        let d = self.depth.max(a.depth());
        let t = self.table_at(d)?;
        let sigma = self.sigma_at(d)?;
        let mask = a.mask_at(d)?;
        let mut table = vec![0i64; t.len()];
        for w in 0..t.len() {
            if !mask[w] {
                continue;
            }
            let mut x = w;
            let mut sum = 0i64;
            loop {
                sum += t[x];
                x = sigma[x] as usize;
                if mask[x] {
                    break;
                }
            }
            table[w] = sum;
        }
        Ok(Element::from_valid(&self.system, d, table))
    }

    /// True when `c_a(x) <= c_b(x)` for every point.
    pub fn dominates(a: &Element, b: &Element) -> Result<bool> {
        a.check(b)?;
        let d = a.depth.max(b.depth);
        let ta = a.table_at(d)?;
        let tb = b.table_at(d)?;
        Ok(ta.iter().zip(&tb).all(|(x, y)| x <= y))
    }

    /// Zeroes the exponents off an invariant clopen set.
    pub fn restrict(&self, set: &ClopenSet) -> Result<Element> {
        if set.system() != &self.system {
            return Err(Error::SystemMismatch);
        }
        let d = self.depth.max(set.depth());
        let mut t = self.table_at(d)?;
        let mask = set.mask_at(d)?;
        for (n, &keep) in t.iter_mut().zip(&mask) {
            if !keep {
                *n = 0;
            }
        }
        Element::validate(&self.system, d, t)
    }

    /// Conjugate by the digitwise complement, which turns `g` into `g^{-1}`.
    pub fn mirror(&self) -> Element {
        let r = self.table.len();
        let table = (0..r).map(|w| -self.table[r - 1 - w]).collect();
        Element::from_valid(&self.system, self.depth, table)
    }
}

/// `D2@1{0:3,1:-1}`: system tag, canonical depth, exponents in code order.
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}{{", self.system.tag(), self.depth)?;
        for (w, n) in self.table.iter().enumerate() {
            if w > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}:{n}")?;
        }
        f.write_str("}")
    }
}

/// Parses the serialization; keys may also be cylinder literals such as `[01]:2`.
impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let at = s.find('@').ok_or_else(|| Error::parse(1, "expected '@'"))?;
        let system: OdometerSystem = s[..at].trim().parse()?;
        let open = s[at..]
            .find('{')
            .map(|i| i + at)
            .ok_or_else(|| Error::parse(at + 2, "expected '{'"))?;
        let depth: usize = s[at + 1..open]
            .trim()
            .parse()
            .map_err(|_| Error::parse(at + 2, "expected a depth"))?;
        let body_end = s
            .rfind('}')
            .filter(|&e| e > open && s[e + 1..].trim().is_empty())
            .ok_or_else(|| Error::parse(s.len() + 1, "expected '}' at end"))?;
        let radix = system.table_len(depth)?;
        let mut table: Vec<Option<i64>> = vec![None; radix as usize];
        let mut col = open + 2;
        for entry in s[open + 1..body_end].split(',') {
            let lead = entry.len() - entry.trim_start().len();
            let e = entry.trim();
            let entry_col = col + lead;
            col += entry.len() + 1;
            if e.is_empty() {
                continue;
            }
            let (key, value) = e
                .rsplit_once(':')
                .ok_or_else(|| Error::parse(entry_col, "expected 'code:exponent'"))?;
            let key = key.trim();
            let code = if key.starts_with('[') {
                let (cyl, used) = parse_cylinder_prefix(&system, key, entry_col)?;
                if used != key.len() || cyl.depth != depth {
                    return Err(Error::parse(entry_col, format!("cylinder key must have depth {depth}")));
                }
                cyl.code
            } else {
                key.parse::<u64>()
                    .map_err(|_| Error::parse(entry_col, format!("invalid code '{key}'")))?
            };
            if code >= radix {
                return Err(Error::CodeOutOfRange { code, depth, radix });
            }
            let n: i64 = value
                .trim()
                .parse()
                .map_err(|_| Error::parse(entry_col + key.len() + 1, "invalid exponent"))?;
            if table[code as usize].replace(n).is_some() {
                return Err(Error::parse(entry_col, format!("code {code} given twice")));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(c, n)| n.ok_or_else(|| Error::parse(open + 1, format!("missing exponent for code {c}"))))
            .collect::<Result<Vec<_>>>()?;
        Element::validate(&system, depth, table)
    }
}
