//! Free-group words over the indexed generator alphabets.
//!
//! A [`Word`] is always freely reduced. Text syntax is whitespace separated
//! letters, `r(j,i)` for ρ_{j,i}, `A(i,j)` for the Artin generator A_{i,j}
//! and `p(j)` for ρ_j, each with an optional `^-1` or `^k` suffix.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Generator {
    /// ρ_{j,i} of the orbit configuration group, 0 ≤ i ≤ 2j−2.
    Rho { j: u32, i: u32 },
    /// Artin pure braid generator A_{i,j}, 1 ≤ i < j.
    Artin { i: u32, j: u32 },
    /// The surface generator ρ_j.
    Surface { j: u32 },
}

impl Generator {
    /// Panics on out-of-range indices; use [`Generator::try_rho`] for untrusted input.
    pub fn rho(j: u32, i: u32) -> Self {
        Self::try_rho(j, i).expect("rho index out of range")
    }

    pub fn try_rho(j: u32, i: u32) -> Result<Self> {
        if j >= 1 && i <= 2 * j - 2 {
            Ok(Generator::Rho { j, i })
        } else {
            Err(invalid(format!("r({j},{i}) needs j >= 1 and 0 <= i <= 2j-2")))
        }
    }

    pub fn artin(i: u32, j: u32) -> Self {
        Self::try_artin(i, j).expect("artin index out of range")
    }

    pub fn try_artin(i: u32, j: u32) -> Result<Self> {
        if i >= 1 && i < j {
            Ok(Generator::Artin { i, j })
        } else {
            Err(invalid(format!("A({i},{j}) needs 1 <= i < j")))
        }
    }

    pub fn try_surface(j: u32) -> Result<Self> {
        if j >= 1 {
            Ok(Generator::Surface { j })
        } else {
            Err(invalid("p(j) needs j >= 1"))
        }
    }

    pub fn surface(j: u32) -> Self {
        Self::try_surface(j).expect("surface index out of range")
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::Rho { j, i } => write!(f, "r({j},{i})"),
            Generator::Artin { i, j } => write!(f, "A({i},{j})"),
            Generator::Surface { j } => write!(f, "p({j})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: Generator, exponent: i32) -> Self {
        assert!(exponent == 1 || exponent == -1, "letter exponent must be +1 or -1");
        Letter { generator, inverse: exponent < 0 }
    }

    pub fn pos(generator: Generator) -> Self {
        Letter { generator, inverse: false }
    }

    pub fn neg(generator: Generator) -> Self {
        Letter { generator, inverse: true }
    }

    pub fn exponent(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.generator)
        } else {
            write!(f, "{}", self.generator)
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    pub fn gen(g: Generator) -> Self {
        Word::letter(Letter::pos(g))
    }

    pub fn gen_inv(g: Generator) -> Self {
        Word::letter(Letter::neg(g))
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            push_reduced(&mut letters, l);
        }
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.reserve(other.len());
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Word { letters }
    }

    pub fn invert(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `self · other · self⁻¹`
    pub fn conjugate(&self, other: &Word) -> Word {
        self.concat(other).concat(&self.invert())
    }

    /// Net exponent of `g` in the word.
    pub fn exponent_sum(&self, g: Generator) -> i64 {
        self.letters.iter().filter(|l| l.generator == g).map(Letter::exponent).sum()
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.letters.iter().map(|l| l.generator)
    }

    /// Letter-wise substitution followed by free reduction.
    pub fn apply_homomorphism(&self, images: &HashMap<Generator, Word>) -> Result<Word> {
        self.substitute(|g| images.get(&g).cloned().ok_or(Error::MissingImage(g)))
    }

    /// Substitution driven by a closure; letters mapping to `Err` abort.
    pub fn substitute<F>(&self, mut image: F) -> Result<Word>
    where
        F: FnMut(Generator) -> Result<Word>,
    {
        let mut letters = Vec::with_capacity(self.len());
        for l in &self.letters {
            let w = image(l.generator)?;
            if l.inverse {
                for x in w.letters.iter().rev() {
                    push_reduced(&mut letters, x.inv());
                }
            } else {
                for &x in &w.letters {
                    push_reduced(&mut letters, x);
                }
            }
        }
        Ok(Word { letters })
    }

    /// Keeps only the letters accepted by `keep`.
    pub fn filter<F: FnMut(&Generator) -> bool>(&self, mut keep: F) -> Word {
        Word::reduce(self.letters.iter().copied().filter(|l| keep(&l.generator)))
    }
}

fn push_reduced(stack: &mut Vec<Letter>, l: Letter) {
    match stack.last() {
        Some(top) if top.cancels(&l) => {
            stack.pop();
        }
        _ => stack.push(l),
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(self, rhs: Word) -> Word {
        self.concat(&rhs)
    }
}

impl From<Generator> for Word {
    fn from(g: Generator) -> Self {
        Word::gen(g)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word::reduce(iter)
    }
}

/// Product of a sequence of words, reduced.
pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Word {
    let mut letters = Vec::new();
    for w in words {
        for &l in &w.letters {
            push_reduced(&mut letters, l);
        }
    }
    Word { letters }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        Parser { src: s.as_bytes(), pos: 0 }.word()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match text.parse::<i64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("expected an integer")
            }
        }
    }

    fn index(&mut self) -> Result<u32> {
        let at = self.pos;
        let v = self.integer()?;
        u32::try_from(v).map_err(|_| Error::Parse { pos: at, msg: "index must be non-negative".into() })
    }

    fn wrap<T>(&self, at: usize, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::InvalidArg(msg) => Error::Parse { pos: at, msg },
            other => other,
        })
    }

    fn generator(&mut self) -> Result<Generator> {
        let at = self.pos;
        match self.peek() {
            Some(b'r') => {
                self.pos += 1;
                self.expect(b'(')?;
                let j = self.index()?;
                self.expect(b',')?;
                let i = self.index()?;
                self.expect(b')')?;
                self.wrap(at, Generator::try_rho(j, i))
            }
            Some(b'A') => {
                self.pos += 1;
                self.expect(b'(')?;
                let i = self.index()?;
                self.expect(b',')?;
                let j = self.index()?;
                self.expect(b')')?;
                self.wrap(at, Generator::try_artin(i, j))
            }
            Some(b'p') => {
                self.pos += 1;
                self.expect(b'(')?;
                let j = self.index()?;
                self.expect(b')')?;
                self.wrap(at, Generator::try_surface(j))
            }
            _ => self.err("expected r(j,i), A(i,j) or p(j)"),
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut letters = Vec::new();
        loop {
            self.skip_ws();
            let Some(c) = self.peek() else { break };
            // "1" is accepted as an explicit identity token
            if c == b'1' && self.src.get(self.pos + 1).is_none_or(|n| n.is_ascii_whitespace()) {
                self.pos += 1;
                continue;
            }
            let g = self.generator()?;
            let mut exp = 1i64;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let at = self.pos;
                exp = self.integer()?;
                if exp == 0 {
                    self.pos = at;
                    return self.err("exponent must be nonzero");
                }
            }
            let l = if exp < 0 { Letter::neg(g) } else { Letter::pos(g) };
            for _ in 0..exp.unsigned_abs() {
                push_reduced(&mut letters, l);
            }
        }
        Ok(Word { letters })
    }
}

/// Shorthand used by builders and tests: `w(&[(g, ±1), ...])`.
pub fn word_of(parts: &[(Generator, i32)]) -> Word {
    Word::reduce(parts.iter().map(|&(g, e)| Letter::new(g, e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(j: u32, i: u32) -> Generator {
        Generator::rho(j, i)
    }

    #[test]
    fn reduce_examples() {
        let w = Word::reduce([Letter::pos(r(2, 1)), Letter::neg(r(2, 1))]);
        assert!(w.is_identity());

        let w = Word::reduce([Letter::pos(r(1, 0)), Letter::pos(r(2, 0))]);
        assert_eq!(w.to_string(), "r(1,0) r(2,0)");

        let w = Word::reduce([
            Letter::pos(r(3, 2)),
            Letter::pos(r(2, 0)),
            Letter::neg(r(2, 0)),
            Letter::pos(r(3, 2)),
            Letter::neg(r(3, 2)),
        ]);
        assert_eq!(w, Word::gen(r(3, 2)));
    }

    #[test]
    fn concat_examples() {
        let w: Word = "r(1,0) r(2,0)".parse().unwrap();
        assert_eq!(Word::identity().concat(&w), w);
        assert!(Word::gen(r(2, 1)).concat(&Word::gen_inv(r(2, 1))).is_identity());
        let v: Word = "r(2,0)^-1 r(3,0)".parse().unwrap();
        assert_eq!(w.concat(&v).to_string(), "r(1,0) r(3,0)");
    }

    #[test]
    fn invert_examples() {
        assert!(Word::identity().invert().is_identity());
        let w: Word = "r(1,0) r(2,0)".parse().unwrap();
        assert_eq!(w.invert().to_string(), "r(2,0)^-1 r(1,0)^-1");
        let c: Word = "r(2,0)^-1 r(2,1) r(2,0)".parse().unwrap();
        assert_eq!(c.invert().to_string(), "r(2,0)^-1 r(2,1)^-1 r(2,0)");
    }

    #[test]
    fn exponent_sum_examples() {
        let theta: Word = "r(1,0) r(2,0) r(3,0)".parse().unwrap();
        assert_eq!(theta.exponent_sum(r(2, 0)), 1);
        assert_eq!(Word::identity().exponent_sum(r(1, 0)), 0);
        let c: Word = "r(2,0)^-1 r(2,1) r(2,0)".parse().unwrap();
        assert_eq!(c.exponent_sum(r(2, 0)), 0);
    }

    #[test]
    fn homomorphism_missing_image() {
        let w: Word = "r(1,0) r(2,0)".parse().unwrap();
        let mut images = HashMap::new();
        images.insert(r(1, 0), Word::gen(r(1, 0)));
        assert_eq!(w.apply_homomorphism(&images), Err(Error::MissingImage(r(2, 0))));
        assert!(Word::identity().apply_homomorphism(&HashMap::new()).unwrap().is_identity());
    }

    #[test]
    fn parse_powers_and_errors() {
        let w: Word = "A(1,2)^3 p(2)^-2".parse().unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w.to_string(), "A(1,2) A(1,2) A(1,2) p(2)^-1 p(2)^-1");
        assert!("".parse::<Word>().unwrap().is_identity());
        assert!("  1 ".parse::<Word>().unwrap().is_identity());
        assert!("r(2,3)".parse::<Word>().is_err());
        assert!("A(2,2)".parse::<Word>().is_err());
        assert!("r(1,0)^0".parse::<Word>().is_err());
        assert!("x(1)".parse::<Word>().is_err());
        assert!("r(1,0".parse::<Word>().is_err());
    }
}
