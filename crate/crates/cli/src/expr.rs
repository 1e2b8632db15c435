//! Expression language for elements and generator words.
//!
//! ```text
//! expr   := factor+                      juxtaposition, rightmost applied first
//! factor := atom ('^' int)*
//! atom   := 'g' | 'id' | 'g_' cyl | 'g_(' set ')' | '(' expr ')' | literal
//! set    := inter ('+' inter)*
//! inter  := unary ('&' unary)*
//! unary  := '~' unary | cyl | 'empty' | '(' set ')'
//! cyl    := '[' digit* ']'               digits in base 36, or <n> for large ones
//! ```
//!
//! A literal is a serialized element such as `D2@1{0:3,1:-1}`.

use std::fmt;

use fullgroup::{normal_form, ClopenSet, Cylinder, Element, Error, GeneratorWord, OdometerSystem, Result, Token};

/// Source columns `start..end`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExpr {
    Cylinder { digits: Vec<u64>, span: Span },
    Empty(Span),
    Union(Box<SetExpr>, Box<SetExpr>),
    Intersect(Box<SetExpr>, Box<SetExpr>),
    Complement(Box<SetExpr>, Span),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Generator(Span),
    Identity(Span),
    Induced { set: SetExpr, span: Span },
    Literal { element: Element, span: Span },
    Power { base: Box<Expr>, exponent: i64, span: Span },
    Compose(Vec<Expr>),
}

fn parse_error(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        column,
        message: message.into(),
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let e = p.compose()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(parse_error(p.col(), format!("unexpected '{c}'")));
    }
    Ok(e)
}

pub fn parse_set(text: &str) -> Result<SetExpr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let s = p.set_union()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(parse_error(p.col(), format!("unexpected '{c}'")));
    }
    Ok(s)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn col(&self) -> usize {
        self.pos + 1
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat_word(&mut self, word: &str) -> bool {
        let n = word.chars().count();
        let matches = word.chars().enumerate().all(|(k, c)| self.peek_at(k) == Some(c));
        let boundary = !self.peek_at(n).is_some_and(|c| c.is_alphanumeric() || c == '_');
        if matches && boundary {
            self.pos += n;
        }
        matches && boundary
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(parse_error(self.col(), format!("expected '{c}'")))
        }
    }

    fn compose(&mut self) -> Result<Expr> {
        let mut factors = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(')') => break,
                _ => factors.push(self.factor()?),
            }
        }
        match factors.len() {
            0 => Err(parse_error(self.col(), "expected an expression")),
            1 => Ok(factors.pop().unwrap()),
            _ => Ok(Expr::Compose(factors)),
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let start = self.col();
        let mut e = self.atom()?;
        loop {
            self.skip_ws();
            if self.peek() != Some('^') {
                return Ok(e);
            }
            self.pos += 1;
            self.skip_ws();
            let exponent = self.integer()?;
            e = Expr::Power {
                base: Box::new(e),
                exponent,
                span: Span { start, end: self.col() },
            };
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse()
            .map_err(|_| parse_error(start + 1, "expected an integer exponent"))
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = self.col();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.compose()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('g') if self.peek_at(1) == Some('_') => {
                self.pos += 2;
                let set = match self.peek() {
                    Some('[') => self.cylinder()?,
                    Some('(') => {
                        self.pos += 1;
                        let s = self.set_union()?;
                        self.expect(')')?;
                        s
                    }
                    _ => return Err(parse_error(self.col(), "expected '[' or '(' after 'g_'")),
                };
                Ok(Expr::Induced {
                    set,
                    span: Span { start, end: self.col() },
                })
            }
            Some('g') if self.eat_word("g") => Ok(Expr::Generator(Span { start, end: self.col() })),
            Some('i') if self.eat_word("id") => Ok(Expr::Identity(Span { start, end: self.col() })),
            Some('D') => self.literal(),
            Some(c) => Err(parse_error(start, format!("unexpected '{c}'"))),
            None => Err(parse_error(start, "expected an expression")),
        }
    }

    fn literal(&mut self) -> Result<Expr> {
        let start = self.pos;
        let close = (start..self.chars.len())
            .find(|&i| self.chars[i] == '}')
            .ok_or_else(|| parse_error(start + 1, "unterminated element literal"))?;
        let text: String = self.chars[start..=close].iter().collect();
        let element: Element = text.parse().map_err(|e| match e {
            Error::Parse { column, message } => parse_error(start + column, message),
            other => other,
        })?;
        self.pos = close + 1;
        Ok(Expr::Literal {
            element,
            span: Span {
                start: start + 1,
                end: self.col(),
            },
        })
    }

    fn cylinder(&mut self) -> Result<SetExpr> {
        let start = self.col();
        self.pos += 1;
        let mut digits = Vec::new();
        loop {
            match self.peek() {
                None => return Err(parse_error(start, "unterminated cylinder literal")),
                Some(']') => {
                    self.pos += 1;
                    break;
                }
                Some('<') => {
                    let open = self.col();
                    let close = (self.pos..self.chars.len())
                        .find(|&i| self.chars[i] == '>')
                        .ok_or_else(|| parse_error(open, "unterminated digit"))?;
                    let text: String = self.chars[self.pos + 1..close].iter().collect();
                    digits.push(text.parse().map_err(|_| parse_error(open, "invalid digit"))?);
                    self.pos = close + 1;
                }
                Some(c) => {
                    let d = c
                        .to_digit(36)
                        .ok_or_else(|| parse_error(self.col(), format!("invalid digit '{c}'")))?;
                    digits.push(d as u64);
                    self.pos += 1;
                }
            }
        }
        Ok(SetExpr::Cylinder {
            digits,
            span: Span { start, end: self.col() },
        })
    }

    fn set_union(&mut self) -> Result<SetExpr> {
        let mut s = self.set_intersect()?;
        loop {
            self.skip_ws();
            if self.peek() != Some('+') {
                return Ok(s);
            }
            self.pos += 1;
            s = SetExpr::Union(Box::new(s), Box::new(self.set_intersect()?));
        }
    }

    fn set_intersect(&mut self) -> Result<SetExpr> {
        let mut s = self.set_unary()?;
        loop {
            self.skip_ws();
            if self.peek() != Some('&') {
                return Ok(s);
            }
            self.pos += 1;
            s = SetExpr::Intersect(Box::new(s), Box::new(self.set_unary()?));
        }
    }

    fn set_unary(&mut self) -> Result<SetExpr> {
        self.skip_ws();
        let start = self.col();
        match self.peek() {
            Some('~') => {
                self.pos += 1;
                let inner = self.set_unary()?;
                Ok(SetExpr::Complement(Box::new(inner), Span { start, end: self.col() }))
            }
            Some('[') => self.cylinder(),
            Some('(') => {
                self.pos += 1;
                let s = self.set_union()?;
                self.expect(')')?;
                Ok(s)
            }
            Some('e') if self.eat_word("empty") => Ok(SetExpr::Empty(Span { start, end: self.col() })),
            Some(c) => Err(parse_error(start, format!("unexpected '{c}' in set expression"))),
            None => Err(parse_error(start, "expected a set expression")),
        }
    }
}

impl SetExpr {
    pub fn eval(&self, system: &OdometerSystem) -> Result<ClopenSet> {
        match self {
            SetExpr::Cylinder { digits, span } => {
                for (k, &d) in digits.iter().enumerate() {
                    if d >= system.base(k) {
                        return Err(parse_error(
                            span.start + 1 + k,
                            format!("digit {d} is not below base {}", system.base(k)),
                        ));
                    }
                }
                ClopenSet::cylinder(system, Cylinder::from_digits(system, digits)?)
            }
            SetExpr::Empty(_) => Ok(ClopenSet::empty(system)),
            SetExpr::Union(a, b) => a.eval(system)?.union(&b.eval(system)?),
            SetExpr::Intersect(a, b) => a.eval(system)?.intersect(&b.eval(system)?),
            SetExpr::Complement(a, _) => Ok(a.eval(system)?.complement()),
        }
    }

    fn is_cylinder(&self) -> bool {
        matches!(self, SetExpr::Cylinder { .. })
    }
}

impl Expr {
    pub fn eval(&self, system: &OdometerSystem) -> Result<Element> {
        match self {
            Expr::Generator(_) => Ok(Element::generator(system)),
            Expr::Identity(_) => Ok(Element::identity(system)),
            Expr::Induced { set, .. } => induced(set, system),
            Expr::Literal { element, .. } => {
                if element.system() != system {
                    return Err(Error::SystemMismatch);
                }
                Ok(element.clone())
            }
            Expr::Power { base, exponent, .. } => Ok(base.eval(system)?.power(*exponent)),
            Expr::Compose(factors) => {
                let mut h = Element::identity(system);
                for f in factors {
                    h = h.compose(&f.eval(system)?)?;
                }
                Ok(h)
            }
        }
    }

    /// The expression as a word; literals are spelled by their normal forms.
    pub fn word(&self, system: &OdometerSystem) -> Result<GeneratorWord> {
        match self {
            Expr::Generator(_) => Ok(GeneratorWord::new(system, vec![Token::G])),
            Expr::Identity(_) => Ok(GeneratorWord::empty(system)),
            Expr::Induced { set, .. } => {
                let a = set.eval(system)?;
                induced(set, system)?;
                Ok(GeneratorWord::new(system, vec![Token::Ind(a)]))
            }
            Expr::Literal { .. } => Ok(normal_form(&self.eval(system)?)?.to_word()),
            Expr::Power { base, exponent, .. } => base.word(system)?.power(*exponent),
            Expr::Compose(factors) => {
                let mut w = GeneratorWord::empty(system);
                for f in factors {
                    w = w.concat(&f.word(system)?)?;
                }
                Ok(w)
            }
        }
    }

    /// The system of the first element literal, if any.
    pub fn literal_system(&self) -> Option<&OdometerSystem> {
        match self {
            Expr::Literal { element, .. } => Some(element.system()),
            Expr::Power { base, .. } => base.literal_system(),
            Expr::Compose(factors) => factors.iter().find_map(Expr::literal_system),
            _ => None,
        }
    }
}

fn induced(set: &SetExpr, system: &OdometerSystem) -> Result<Element> {
    let a = set.eval(system)?;
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    Element::induced_generator(&a)
}

fn write_digits(f: &mut fmt::Formatter<'_>, digits: &[u64]) -> fmt::Result {
    f.write_str("[")?;
    for &d in digits {
        match std::char::from_digit(d as u32, 36) {
            Some(c) if d < 36 => write!(f, "{c}")?,
            _ => write!(f, "<{d}>")?,
        }
    }
    f.write_str("]")
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetExpr::Cylinder { digits, .. } => write_digits(f, digits),
            SetExpr::Empty(_) => f.write_str("empty"),
            SetExpr::Union(a, b) => write!(f, "{a}+{b}"),
            SetExpr::Intersect(a, b) => {
                for (k, s) in [a, b].into_iter().enumerate() {
                    if k > 0 {
                        f.write_str("&")?;
                    }
                    match **s {
                        SetExpr::Union(..) => write!(f, "({s})")?,
                        _ => write!(f, "{s}")?,
                    }
                }
                Ok(())
            }
            SetExpr::Complement(a, _) => match **a {
                SetExpr::Union(..) | SetExpr::Intersect(..) => write!(f, "~({a})"),
                _ => write!(f, "~{a}"),
            },
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Generator(_) => f.write_str("g"),
            Expr::Identity(_) => f.write_str("id"),
            Expr::Induced { set, .. } if set.is_cylinder() => write!(f, "g_{set}"),
            Expr::Induced { set, .. } => write!(f, "g_({set})"),
            Expr::Literal { element, .. } => write!(f, "{element}"),
            Expr::Power { base, exponent, .. } => match **base {
                Expr::Compose(_) => write!(f, "({base})^{exponent}"),
                _ => write!(f, "{base}^{exponent}"),
            },
            Expr::Compose(factors) => {
                for (k, e) in factors.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ")?;
                    }
                    match e {
                        Expr::Compose(_) => write!(f, "({e})")?,
                        _ => write!(f, "{e}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2() -> OdometerSystem {
        OdometerSystem::dyadic()
    }

    fn column_of(text: &str) -> usize {
        match parse(text) {
            Err(Error::Parse { column, .. }) => column,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn conjugate_of_g_evaluates_to_its_table() {
        let h = parse("g_[1]^2 g^-1").unwrap().eval(&d2()).unwrap();
        assert_eq!(h.to_string(), "D2@1{0:3,1:-1}");
    }

    #[test]
    fn g_times_its_inverse_is_the_identity() {
        assert!(parse("g g^-1").unwrap().eval(&d2()).unwrap().is_identity());
        assert!(parse("id").unwrap().eval(&d2()).unwrap().is_identity());
    }

    #[test]
    fn errors_carry_columns() {
        assert_eq!(column_of("g_["), 3);
        assert_eq!(column_of("g_x"), 3);
        assert_eq!(column_of("g (g"), 5);
        assert_eq!(column_of("g ^ x"), 5);
        assert_eq!(column_of("g_[01] q"), 8);
        assert_eq!(column_of("g_([0] + )"), 10);
    }

    #[test]
    fn digits_are_checked_against_the_bases() {
        let e = parse("g_[02]").unwrap();
        match e.eval(&d2()) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        let s = OdometerSystem::new(vec![2], vec![3]).unwrap();
        assert!(e.eval(&s).is_ok());
    }

    #[test]
    fn set_expressions() {
        let h = parse("g_(~[0] & ([1]+[00]))").unwrap().eval(&d2()).unwrap();
        assert_eq!(h, parse("g_[1]").unwrap().eval(&d2()).unwrap());
        assert_eq!(parse("g_(empty)").unwrap().eval(&d2()), Err(Error::EmptySet));
        assert_eq!(parse("g_([])").unwrap().eval(&d2()).unwrap(), Element::generator(&d2()));
    }

    #[test]
    fn literals_and_words() {
        let e = parse("D2@1{0:3,1:-1} g").unwrap();
        assert_eq!(e.literal_system(), Some(&d2()));
        let h = e.eval(&d2()).unwrap();
        assert_eq!(e.word(&d2()).unwrap().evaluate().unwrap(), h);
        let s = OdometerSystem::new(vec![2], vec![3]).unwrap();
        assert_eq!(e.eval(&s), Err(Error::SystemMismatch));
        let w = parse("(g_[1] g)^-2").unwrap();
        assert_eq!(w.word(&d2()).unwrap().evaluate().unwrap(), w.eval(&d2()).unwrap());
    }

    #[test]
    fn printing_is_canonical() {
        for text in [
            "g_[1]^2 g^-1",
            "g_(~([0]+[11])&[1]) (g id)^3 g_[<40>]",
            "D(2;3)@1{0:1,1:-1}^-1",
            "g_(empty+~~[])",
        ] {
            let printed = parse(text).unwrap().to_string();
            assert_eq!(printed, text);
            assert_eq!(parse(&printed).unwrap().to_string(), printed);
        }
    }
}
