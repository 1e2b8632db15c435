use std::fmt;

use crate::clopen::ClopenSet;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::orbit::index;
use crate::rewrite::word::{GeneratorWord, Token};
use crate::system::OdometerSystem;

/// `h = g_{A_n} ··· g_{A_1} g^r` with `A_n ⊆ ··· ⊆ A_1`, all nonempty and proper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub system: OdometerSystem,
    pub r: i64,
    /// `A_1, A_2, ...` in peeling order (largest first).
    pub chain: Vec<ClopenSet>,
}

impl NormalForm {
    pub fn evaluate(&self) -> Result<Element> {
        let mut h = Element::generator_power(&self.system, self.r);
        for a in &self.chain {
            h = Element::induced_generator(a)?.compose(&h)?;
        }
        Ok(h)
    }

    /// The chain with `r` copies of the whole space prepended (for `r >= 0`),
    /// since `g = g_X`.
    pub fn extended_chain(&self) -> Vec<ClopenSet> {
        let mut out = vec![ClopenSet::full(&self.system); self.r.max(0) as usize];
        out.extend(self.chain.iter().cloned());
        out
    }

    /// The reduced generator word `Ind(A_n) ··· Ind(A_1)` followed by `g^r`.
    pub fn to_word(&self) -> GeneratorWord {
        let mut tokens: Vec<Token> = self.chain.iter().rev().cloned().map(Token::Ind).collect();
        if self.r >= 0 {
            tokens.extend((0..self.r).map(|_| Token::Ind(ClopenSet::full(&self.system))));
        } else {
            tokens.extend((0..-self.r).map(|_| Token::Ginv));
        }
        GeneratorWord::new(&self.system, tokens)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_word().fmt(f)
    }
}

/// Peels induced generators off `h g^{-r}`, where `r` is the least exponent.
pub fn normal_form(h: &Element) -> Result<NormalForm> {
    let system = h.system();
    let r = h.min_exponent();
    let steps = index(h)? - r;
    let mut residual = h.compose(&Element::generator_power(system, -r))?;
    let mut chain: Vec<ClopenSet> = Vec::new();
    while !residual.is_identity() {
        if !residual.is_strongly_positive() {
            return Err(Error::invariant("normal form residual is not strongly positive"));
        }
        if chain.len() as i64 >= steps {
            return Err(Error::invariant("normal form chain exceeds index - r"));
        }
        let a = residual.support();
        if let Some(prev) = chain.last() {
            if !a.is_subset(prev)? {
                return Err(Error::invariant("normal form chain is not nested"));
            }
        }
        residual = residual.compose(&Element::induced_generator(&a)?.invert())?;
        chain.push(a);
    }
    if chain.len() as i64 != steps {
        return Err(Error::invariant("normal form chain length differs from index - r"));
    }
    Ok(NormalForm {
        system: system.clone(),
        r,
        chain,
    })
}

/// Strongly positive, nontrivial and of index one; equivalently an induced
/// generator `g_A` with `A = supp(h)` (or `g` itself).
pub fn is_irreducible(h: &Element) -> Result<bool> {
    Ok(h.is_strongly_positive() && !h.is_identity() && index(h)? == 1)
}

/// The set `A ∗ B` with `g_A g_B = g_{A∗B} g_{A∪B}`.
pub fn star(a: &ClopenSet, b: &ClopenSet) -> Result<ClopenSet> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let e = Element::induced_generator(a)?.compose(&Element::induced_generator(b)?)?;
    let nf = normal_form(&e)?;
    if nf.r < 0 {
        return Err(Error::invariant("product of induced generators has a negative exponent"));
    }
    let ext = nf.extended_chain();
    let union = a.union(b)?;
    if ext.len() != 2 || ext[0] != union {
        return Err(Error::invariant("product of two induced generators has an unexpected normal form"));
    }
    Ok(ext[1].clone())
}

/// The support order: `A ≤ B` iff `A ⊆ B`.
pub fn support_order_le(a: &ClopenSet, b: &ClopenSet) -> Result<bool> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    a.is_subset(b)
}
