use std::cmp::Ordering;
use std::fmt;

use crate::clopen::ClopenSet;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::rewrite::normal_form::{normal_form, star};
use crate::system::OdometerSystem;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    G,
    Ginv,
    /// The induced generator `g_A` (extended by the identity off `A`).
    Ind(ClopenSet),
}

impl Token {
    pub fn evaluate(&self, system: &OdometerSystem) -> Result<Element> {
        match self {
            Token::G => Ok(Element::generator(system)),
            Token::Ginv => Ok(Element::generator_power(system, -1)),
            Token::Ind(a) => Element::induced_generator(a),
        }
    }

    fn render(&self) -> String {
        match self {
            Token::G => "g".into(),
            Token::Ginv => "g^-1".into(),
            Token::Ind(a) if a.is_full() => "g".into(),
            Token::Ind(a) => {
                let cyls = a.cylinders();
                if cyls.len() == 1 {
                    format!("g_{a}")
                } else {
                    format!("g_({a})")
                }
            }
        }
    }
}

/// A word in `g`, `g^{-1}` and the induced generators; the rightmost token is
/// applied first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorWord {
    pub system: OdometerSystem,
    pub tokens: Vec<Token>,
}

impl GeneratorWord {
    pub fn new(system: &OdometerSystem, tokens: Vec<Token>) -> Self {
        GeneratorWord {
            system: system.clone(),
            tokens,
        }
    }

    pub fn empty(system: &OdometerSystem) -> Self {
        GeneratorWord::new(system, Vec::new())
    }

    pub fn evaluate(&self) -> Result<Element> {
        let mut h = Element::identity(&self.system);
        for t in &self.tokens {
            if let Token::Ind(a) = t {
                if a.system() != &self.system {
                    return Err(Error::SystemMismatch);
                }
            }
            h = h.compose(&t.evaluate(&self.system)?)?;
        }
        Ok(h)
    }

    pub fn concat(&self, other: &GeneratorWord) -> Result<GeneratorWord> {
        if self.system != other.system {
            return Err(Error::SystemMismatch);
        }
        let mut tokens = self.tokens.clone();
        tokens.extend(other.tokens.iter().cloned());
        Ok(GeneratorWord::new(&self.system, tokens))
    }

    /// A word for the inverse; `g_A^{-1}` is spelled by its normal form.
    pub fn inverse(&self) -> Result<GeneratorWord> {
        let mut tokens = Vec::new();
        for t in self.tokens.iter().rev() {
            match t {
                Token::G => tokens.push(Token::Ginv),
                Token::Ginv => tokens.push(Token::G),
                Token::Ind(a) => {
                    let inv = Element::induced_generator(a)?.invert();
                    tokens.extend(normal_form(&inv)?.to_word().tokens);
                }
            }
        }
        Ok(GeneratorWord::new(&self.system, tokens))
    }

    pub fn power(&self, k: i64) -> Result<GeneratorWord> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut tokens = Vec::new();
        for _ in 0..k.unsigned_abs() {
            tokens.extend(base.tokens.iter().cloned());
        }
        Ok(GeneratorWord::new(&self.system, tokens))
    }
}

/// Tokens separated by spaces, runs written as powers (`g_[1]^2 g^-1`);
/// the empty word is `id`.
impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tokens.is_empty() {
            return f.write_str("id");
        }
        let rendered: Vec<String> = self.tokens.iter().map(Token::render).collect();
        let mut parts = Vec::new();
        let mut i = 0;
        while i < rendered.len() {
            let mut j = i + 1;
            while j < rendered.len() && rendered[j] == rendered[i] {
                j += 1;
            }
            let run = (j - i) as i64;
            parts.push(match (rendered[i].as_str(), run) {
                (s, 1) => s.to_string(),
                ("g^-1", n) => format!("g^-{n}"),
                (s, n) => format!("{s}^{n}"),
            });
            i = j;
        }
        f.write_str(&parts.join(" "))
    }
}

/// `Ginv · Ind(A) -> Ind(g^{-1} A) · Ginv` at position `i`, if applicable.
pub fn apply_r1(word: &mut GeneratorWord, i: usize) -> bool {
    if let (Some(Token::Ginv), Some(Token::Ind(a))) = (word.tokens.get(i), word.tokens.get(i + 1)) {
        let moved = a.translate(-1);
        word.tokens[i] = Token::Ind(moved);
        word.tokens[i + 1] = Token::Ginv;
        return true;
    }
    false
}

/// `Ind(A) · Ind(B) -> Ind(A∗B) · Ind(A∪B)` at position `i`, if `A ⊄ B`.
pub fn apply_r2(word: &mut GeneratorWord, i: usize) -> Result<bool> {
    if let (Some(Token::Ind(a)), Some(Token::Ind(b))) = (word.tokens.get(i), word.tokens.get(i + 1)) {
        if a.is_subset(b)? {
            return Ok(false);
        }
        let s = star(a, b)?;
        let u = a.union(b)?;
        word.tokens[i] = Token::Ind(s);
        word.tokens[i + 1] = Token::Ind(u);
        return Ok(true);
    }
    Ok(false)
}

/// `Ind(X) · Ginv -> (nothing)` at position `i`, if applicable.
pub fn apply_r3(word: &mut GeneratorWord, i: usize) -> bool {
    if let (Some(Token::Ind(a)), Some(Token::Ginv)) = (word.tokens.get(i), word.tokens.get(i + 1)) {
        if a.is_full() {
            word.tokens.drain(i..i + 2);
            return true;
        }
    }
    false
}

fn measure_cmp(a: &ClopenSet, b: &ClopenSet) -> Ordering {
    let (na, ra) = a.measure();
    let (nb, rb) = b.measure();
    (na as u128 * rb as u128).cmp(&(nb as u128 * ra as u128))
}

/// Sizes of the induced tokens read from the right end.
fn metric(word: &GeneratorWord) -> Vec<ClopenSet> {
    word.tokens
        .iter()
        .rev()
        .filter_map(|t| match t {
            Token::Ind(a) => Some(a.clone()),
            _ => None,
        })
        .collect()
}

fn metric_increased(before: &[ClopenSet], after: &[ClopenSet]) -> bool {
    for (a, b) in before.iter().zip(after) {
        match measure_cmp(a, b) {
            Ordering::Less => return true,
            Ordering::Greater => return false,
            Ordering::Equal => {}
        }
    }
    false
}

/// Rewrites a word to the unique reduced word for its element.
///
/// Phase one moves every `g^{-1}` to the right end with R1, phase two nests
/// the induced tokens with R2 applied to the leftmost non-nested pair, and
/// phase three cancels `g_X g^{-1}` pairs with R3. Each R2 step replaces
/// `(A, B)` by `(A∗B, A∪B)` with `A∪B ⊋ B`, so the measures of the induced
/// tokens read from the right end increase lexicographically; they range over
/// a finite set, so phase two terminates. The increase is checked at every step.
pub fn reduce_word(word: &GeneratorWord) -> Result<GeneratorWord> {
    let mut w = word.clone();
    for t in &w.tokens {
        if let Token::Ind(a) = t {
            if a.is_empty() {
                return Err(Error::EmptySet);
            }
            if a.system() != &w.system {
                return Err(Error::SystemMismatch);
            }
        }
    }
    for t in w.tokens.iter_mut() {
        if *t == Token::G {
            *t = Token::Ind(ClopenSet::full(&word.system));
        }
    }
    loop {
        let pos = (0..w.tokens.len()).find(|&i| {
            matches!(w.tokens[i], Token::Ginv) && matches!(w.tokens.get(i + 1), Some(Token::Ind(_)))
        });
        match pos {
            Some(i) => {
                apply_r1(&mut w, i);
            }
            None => break,
        }
    }
    loop {
        let mut changed = false;
        for i in 0..w.tokens.len().saturating_sub(1) {
            let before = metric(&w);
            if apply_r2(&mut w, i)? {
                if !metric_increased(&before, &metric(&w)) {
                    return Err(Error::invariant("rewriting metric failed to increase"));
                }
                changed = true;
                break;
            }
        }
        if !changed {
            break;
        }
    }
    loop {
        let split = w.tokens.iter().position(|t| *t == Token::Ginv).unwrap_or(w.tokens.len());
        if split == 0 || !apply_r3(&mut w, split - 1) {
            break;
        }
    }
    let expected = normal_form(&word.evaluate()?)?.to_word();
    if w != expected {
        return Err(Error::invariant(format!(
            "reduced word {w} differs from the normal form {expected}"
        )));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2() -> OdometerSystem {
        OdometerSystem::dyadic()
    }

    fn ind(s: &str) -> Token {
        Token::Ind(ClopenSet::parse(&d2(), s).unwrap())
    }

    fn word(tokens: Vec<Token>) -> GeneratorWord {
        GeneratorWord::new(&d2(), tokens)
    }

    #[test]
    fn reduce_examples() {
        let r = reduce_word(&word(vec![Token::Ginv, ind("[1]")])).unwrap();
        assert_eq!(r, word(vec![ind("[0]"), Token::Ginv]));
        assert_eq!(r.to_string(), "g_[0] g^-1");
        let r = reduce_word(&word(vec![ind("[]"), Token::Ginv])).unwrap();
        assert!(r.tokens.is_empty());
        assert_eq!(r.to_string(), "id");
        let r = reduce_word(&word(vec![ind("[0]"), ind("[1]")])).unwrap();
        assert_eq!(r, word(vec![ind("[]"), ind("[]")]));
        assert_eq!(r.to_string(), "g^2");
    }

    #[test]
    fn single_steps_preserve_evaluation() {
        let mut w = word(vec![Token::Ginv, ind("[01]"), ind("[1]"), ind("[0]+[11]")]);
        let e = w.evaluate().unwrap();
        assert!(apply_r1(&mut w, 0));
        assert_eq!(w.evaluate().unwrap(), e);
        assert!(apply_r2(&mut w, 2).unwrap());
        assert_eq!(w.evaluate().unwrap(), e);
        let mut v = word(vec![ind("[]"), Token::Ginv, Token::G]);
        let e = v.evaluate().unwrap();
        assert!(apply_r3(&mut v, 0));
        assert_eq!(v.evaluate().unwrap(), e);
    }

    #[test]
    fn inverse_words() {
        let w = word(vec![ind("[0]"), Token::G, ind("[01]+[1]")]);
        let inv = w.inverse().unwrap();
        assert_eq!(w.concat(&inv).unwrap().evaluate().unwrap(), Element::identity(&d2()));
        assert_eq!(w.power(-2).unwrap().evaluate().unwrap(), w.evaluate().unwrap().power(-2));
    }
}
