//! Line-oriented presentation text format.
//!
//! ```text
//! # free group of rank two modulo the cube of a commutator
//! gens: a b
//! rel: abAB^3
//! order: a A b B
//! ```
//!
//! `gens:` declares generators; inverses are named by upper-casing. The
//! optional `involutions:` line marks generators as self-inverse. `rel:` may
//! repeat. In a relator, `^n` after `)` raises the parenthesized group, and
//! `^n` after a symbol raises the whole preceding word at that nesting level.

use super::{GeneratorSet, Letter, Presentation, Word};
use crate::error::{Error, Result};

pub(super) fn parse_word(gens: &GeneratorSet, text: &str) -> Result<Word> {
    let mut p = Parser {
        gens,
        chars: text.chars().collect(),
        pos: 0,
    };
    let w = p.sequence()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(Error::input(format!(
            "unexpected `{}` in word `{text}`",
            p.chars[p.pos]
        )));
    }
    Ok(Word(w))
}

struct Parser<'a> {
    gens: &'a GeneratorSet,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn sequence(&mut self) -> Result<Vec<Letter>> {
        let mut acc: Vec<Letter> = Vec::new();
        loop {
            self.skip_ws();
            let Some(&c) = self.chars.get(self.pos) else {
                return Ok(acc);
            };
            match c {
                ')' => return Ok(acc),
                '(' => {
                    self.pos += 1;
                    let mut group = self.sequence()?;
                    self.skip_ws();
                    if self.chars.get(self.pos) != Some(&')') {
                        return Err(Error::input("unbalanced parenthesis"));
                    }
                    self.pos += 1;
                    if let Some(n) = self.exponent()? {
                        group = self.power(&group, n);
                    }
                    acc.extend(group);
                }
                '1' if acc.is_empty() && self.chars.get(self.pos + 1).is_none_or(|c| c.is_whitespace()) => {
                    // `1` denotes the empty word
                    self.pos += 1;
                }
                _ => {
                    let l = self.symbol()?;
                    acc.push(l);
                    if let Some(n) = self.exponent()? {
                        acc = self.power(&acc, n);
                    }
                }
            }
        }
    }

    fn symbol(&mut self) -> Result<Letter> {
        let rest: String = self.chars[self.pos..].iter().collect();
        let mut best: Option<(usize, Letter)> = None;
        for l in self.gens.letters() {
            let s = self.gens.symbol(l);
            if rest.starts_with(s) && best.is_none_or(|(len, _)| s.len() > len) {
                best = Some((s.len(), l));
            }
        }
        match best {
            Some((len, l)) => {
                self.pos += rest[..len].chars().count();
                Ok(l)
            }
            None => {
                let tok: String = rest.chars().take_while(|c| c.is_alphanumeric()).collect();
                Err(Error::UnknownSymbol(if tok.is_empty() {
                    rest.chars().next().map(String::from).unwrap_or_default()
                } else {
                    tok
                }))
            }
        }
    }

    fn exponent(&mut self) -> Result<Option<i64>> {
        self.skip_ws();
        if self.chars.get(self.pos) != Some(&'^') {
            return Ok(None);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<i64>()
            .map(Some)
            .map_err(|_| Error::input(format!("bad exponent `{s}`")))
    }

    fn power(&self, w: &[Letter], n: i64) -> Vec<Letter> {
        let base: Vec<Letter> = if n < 0 {
            w.iter().rev().map(|&l| self.gens.inverse(l)).collect()
        } else {
            w.to_vec()
        };
        base.repeat(n.unsigned_abs() as usize)
    }
}

pub(super) fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut gens: Option<Vec<String>> = None;
    let mut involutions: Vec<String> = Vec::new();
    let mut order: Option<Vec<String>> = None;
    let mut rels: Vec<String> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::input(format!("line {}: expected `key: value`", lineno + 1)))?;
        let items = || value.split_whitespace().map(String::from).collect::<Vec<_>>();
        match key.trim() {
            "gens" => gens = Some(items()),
            "involutions" => involutions = items(),
            "order" => order = Some(items()),
            "rel" => rels.push(value.trim().to_string()),
            other => {
                return Err(Error::input(format!(
                    "line {}: unknown key `{other}`",
                    lineno + 1
                )))
            }
        }
    }
    let gens = gens.ok_or_else(|| Error::input("missing `gens:` line"))?;
    let names: Vec<&str> = gens.iter().map(String::as_str).collect();
    let inv: Vec<&str> = involutions.iter().map(String::as_str).collect();
    let ord: Option<Vec<&str>> = order.as_ref().map(|o| o.iter().map(String::as_str).collect());
    let set = GeneratorSet::build(&names, &inv, ord.as_deref())?;
    let relators = rels
        .iter()
        .map(|r| set.parse_word(r))
        .collect::<Result<Vec<_>>>()?;
    Presentation::new(set, relators)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_applies_to_whole_preceding_word() {
        let g = GeneratorSet::free(&["a", "b"]).unwrap();
        assert_eq!(g.format(&g.parse_word("abAB^3").unwrap()), "abABabABabAB");
        assert_eq!(g.format(&g.parse_word("(ab)^2 a").unwrap()), "ababa");
        assert_eq!(g.format(&g.parse_word("((ab)^2)^2").unwrap()), "abababab");
        assert_eq!(g.format(&g.parse_word("(ab)^-1").unwrap()), "BA");
        assert!(g.parse_word("1").unwrap().is_empty());
        assert!(g.parse_word("(ab").is_err());
    }

    #[test]
    fn presentation_file() {
        let p = parse_presentation("# comment\ngens: a b\nrel: abAB^3\n").unwrap();
        assert_eq!(p.generators().rank(), 2);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0].len(), 12);
        let q = parse_presentation("gens: a b\norder: b B a A\n").unwrap();
        assert_eq!(q.generators().symbols(), &["b", "B", "a", "A"]);
        assert!(parse_presentation("rel: ab").is_err());
        assert!(parse_presentation("gens: a\nfoo: 1").is_err());
    }
}
