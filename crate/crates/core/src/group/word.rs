use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator or its inverse: generator index `l >> 1`, inverse flag `l & 1`.
///
/// The derived order is the ShortLex letter order `x₁ < x₁⁻¹ < x₂ < x₂⁻¹ < …`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(u8);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        assert!(generator < 128, "generator index out of range");
        Letter(((generator as u8) << 1) | inverse as u8)
    }

    pub fn from_index(index: u8) -> Self {
        Letter(index)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// +1 for a generator, −1 for an inverse.
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}{}", self.generator(), if self.is_inverse() { "⁻" } else { "" })
    }
}

/// A finite sequence of letters, ordered ShortLex (length first, then lexicographic).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// `generator^exponent` as a freely reduced word.
    pub fn power_of(generator: usize, exponent: i64) -> Self {
        let l = Letter::new(generator, exponent < 0);
        Word(vec![l; exponent.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Concatenation followed by free reduction at the seam.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn free_reduce(&self) -> Word {
        Word::identity().concat(self)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    /// Literal power of the word (freely reduced at each seam).
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator()).max()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Generator naming scheme used for parsing and printing words.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    /// `a1, b1, a2, b2, …`: generator `2i` is `a(i+1)`, generator `2i+1` is `b(i+1)`.
    Surface { genus: usize },
    /// `e1, …, en`; `t` is accepted for `e1` when `n = 1`, and `t1…tn` for `e1…en`.
    FreeAbelian { rank: usize },
}

impl Alphabet {
    pub fn generator_count(&self) -> usize {
        match *self {
            Alphabet::Surface { genus } => 2 * genus,
            Alphabet::FreeAbelian { rank } => rank,
        }
    }

    pub fn name(&self, generator: usize) -> String {
        match *self {
            Alphabet::Surface { .. } => {
                format!("{}{}", if generator.is_multiple_of(2) { 'a' } else { 'b' }, generator / 2 + 1)
            }
            Alphabet::FreeAbelian { rank: 1 } => "t".to_string(),
            Alphabet::FreeAbelian { .. } => format!("e{}", generator + 1),
        }
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        let (head, tail) = name.split_at(name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len()));
        let index: Option<usize> = if tail.is_empty() { None } else { tail.parse().ok() };
        let generator = match (*self, head, index) {
            (Alphabet::Surface { .. }, "a", Some(i)) if i >= 1 => 2 * (i - 1),
            (Alphabet::Surface { .. }, "b", Some(i)) if i >= 1 => 2 * (i - 1) + 1,
            (Alphabet::FreeAbelian { .. }, "e" | "t", Some(i)) if i >= 1 => i - 1,
            (Alphabet::FreeAbelian { rank: 1 }, "t", None) => 0,
            _ => return None,
        };
        (generator < self.generator_count()).then_some(generator)
    }

    /// Parses `a1*b1^-1*a2^2`. Whitespace is ignored; `1` or the empty string is the identity.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = Word::identity();
        if compact.is_empty() || compact == "1" {
            return Ok(out);
        }
        for factor in compact.split('*') {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                    (n, e)
                }
                None => (factor, 1),
            };
            if name == "1" {
                continue;
            }
            let generator = self.lookup(name).ok_or_else(|| Error::Parse(format!("unknown generator `{name}`")))?;
            for _ in 0..exp.unsigned_abs() {
                out.push(Letter::new(generator, exp < 0));
            }
        }
        Ok(out)
    }

    /// Prints runs of equal letters as powers; the identity prints as `1`.
    pub fn format(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let exp = (j - i) as i64 * l.sign();
            let name = self.name(l.generator());
            parts.push(if exp == 1 { name } else { format!("{name}^{exp}") });
            i = j;
        }
        parts.join("*")
    }

    /// Rejects letters naming generators outside this alphabet.
    pub fn check(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(g) if g >= self.generator_count() => Err(Error::Parse(format!("generator index {g} out of range"))),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortlex_order() {
        let s = Alphabet::Surface { genus: 2 };
        let w = |t: &str| s.parse(t).unwrap();
        assert!(w("b2") < w("a1*a1"));
        assert!(w("a1") < w("a1^-1"));
        assert!(w("a1^-1") < w("b1"));
        assert!(w("1") < w("a1"));
    }

    #[test]
    fn parse_and_format_round_trip() {
        let s = Alphabet::Surface { genus: 2 };
        for t in ["a1*b1^-1*a2^2", "1", "b2^-3*a1"] {
            assert_eq!(s.format(&s.parse(t).unwrap()), t);
        }
        let z = Alphabet::FreeAbelian { rank: 1 };
        assert_eq!(z.parse("t^2").unwrap(), z.parse("e1*e1").unwrap());
        assert_eq!(z.format(&z.parse("t1^-2").unwrap()), "t^-2");
        assert!(s.parse("c1").is_err());
        assert!(s.parse("a3").is_err());
        assert!(s.parse("a1^x").is_err());
        assert_eq!(s.parse(" a1 * b1 ").unwrap().len(), 2);
    }

    #[test]
    fn inverse_and_concat() {
        let s = Alphabet::Surface { genus: 2 };
        let w = s.parse("a1*b1").unwrap();
        assert!(w.concat(&w.inverse()).is_empty());
        assert_eq!(s.format(&w.pow(-2)), "b1^-1*a1^-1*b1^-1*a1^-1");
    }
}
