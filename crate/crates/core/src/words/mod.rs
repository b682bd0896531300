//! Words over a symmetric generating set, free and cyclic reduction,
//! presentations and the exact word-problem oracles built on top of them.

mod abelian;
mod oracle;
mod parse;
mod presentation;
mod symmetrize;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use abelian::AbelianInvariant;
pub use oracle::{
    word_problem, word_problem_traced, ElementKey, FreeImageOracle, FreeOracle, GroupOracle,
    ReductionTrace, ShorteningOracle,
};
pub use presentation::{Presentation, PresentationKind};
pub use symmetrize::{symmetrize_and_measure, SymmetrizedRelators};

/// Index of a symbol in a [`GeneratorSet`]; the index is also its rank in the
/// total order used for lexicographic comparison.
pub type Letter = u8;

/// A finite symmetric generating set `S = S⁻¹` with a total order.
///
/// Symbols are stored in order, so comparing letters as integers is the
/// lexicographic order. Every symbol has a formal inverse; a self-inverse
/// generator is its own inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSet {
    symbols: Vec<String>,
    inverse: Vec<Letter>,
    /// For each symbol: the declared base generator it comes from and the
    /// exponent sign (+1 for the base symbol, -1 for its inverse).
    base: Vec<(usize, i8)>,
    base_names: Vec<String>,
}

impl GeneratorSet {
    /// Generators `names` with inverses named by upper-casing, ordered
    /// `a A b B ...` (each inverse right after its base symbol).
    pub fn free(names: &[&str]) -> Result<Self> {
        Self::build(names, &[], None)
    }

    /// Standard generating set of the free group of the given rank, using
    /// `a, b, c, ...` as generator names.
    pub fn free_rank(rank: usize) -> Self {
        assert!((1..=26).contains(&rank), "rank must be in 1..=26");
        let names: Vec<String> = (0..rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::free(&refs).expect("standard names are valid")
    }

    /// Full constructor: `involutions` are generators declared self-inverse,
    /// `order` optionally lists every symbol (inverses included) in the
    /// desired total order.
    pub fn build(names: &[&str], involutions: &[&str], order: Option<&[&str]>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::input("generating set is empty"));
        }
        let mut symbols: Vec<String> = Vec::new();
        let mut base = Vec::new();
        let mut inverse_unsorted: Vec<usize> = Vec::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(|c| !c.is_alphanumeric()) {
                return Err(Error::input(format!("invalid generator name `{name}`")));
            }
            let at = symbols.len();
            symbols.push(name.to_string());
            base.push((i, 1i8));
            if involutions.contains(name) {
                inverse_unsorted.push(at);
            } else {
                let inv = inverse_name(name);
                symbols.push(inv);
                base.push((i, -1));
                inverse_unsorted.push(at + 1);
                inverse_unsorted.push(at);
            }
        }
        for inv in involutions {
            if !names.contains(inv) {
                return Err(Error::UnknownSymbol(inv.to_string()));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for s in &symbols {
            if !seen.insert(s.clone()) {
                return Err(Error::input(format!("duplicate symbol `{s}`")));
            }
        }
        if symbols.len() > Letter::MAX as usize {
            return Err(Error::input("too many symbols"));
        }

        let mut perm: Vec<usize> = (0..symbols.len()).collect();
        if let Some(order) = order {
            if order.len() != symbols.len() {
                return Err(Error::input(format!(
                    "order lists {} symbols, expected {}",
                    order.len(),
                    symbols.len()
                )));
            }
            perm.clear();
            for o in order {
                let idx = symbols
                    .iter()
                    .position(|s| s == o)
                    .ok_or_else(|| Error::UnknownSymbol(o.to_string()))?;
                if perm.contains(&idx) {
                    return Err(Error::input(format!("symbol `{o}` repeated in order")));
                }
                perm.push(idx);
            }
        }
        // position of each unsorted symbol in the final order
        let mut rank = vec![0usize; perm.len()];
        for (r, &i) in perm.iter().enumerate() {
            rank[i] = r;
        }
        let sorted_symbols: Vec<String> = perm.iter().map(|&i| symbols[i].clone()).collect();
        let sorted_base: Vec<(usize, i8)> = perm.iter().map(|&i| base[i]).collect();
        let inverse = perm
            .iter()
            .map(|&i| rank[inverse_unsorted[i]] as Letter)
            .collect();
        Ok(Self {
            symbols: sorted_symbols,
            inverse,
            base: sorted_base,
            base_names: names.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Number of declared (base) generators.
    pub fn rank(&self) -> usize {
        self.base_names.len()
    }

    pub fn symbol(&self, l: Letter) -> &str {
        &self.symbols[l as usize]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn base_names(&self) -> &[String] {
        &self.base_names
    }

    pub fn inverse(&self, l: Letter) -> Letter {
        self.inverse[l as usize]
    }

    pub fn is_self_inverse(&self, l: Letter) -> bool {
        self.inverse[l as usize] == l
    }

    /// Base generator index and exponent sign of a letter.
    pub fn base_of(&self, l: Letter) -> (usize, i8) {
        self.base[l as usize]
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.symbols.iter().position(|s| s == name).map(|i| i as Letter)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.symbols.len() as Letter
    }

    /// Letter for the base generator `i` raised to `sign`.
    pub fn base_letter(&self, i: usize, sign: i8) -> Letter {
        let first = self
            .base
            .iter()
            .position(|&(b, s)| b == i && s == 1)
            .expect("base generator exists") as Letter;
        if sign >= 0 {
            first
        } else {
            self.inverse(first)
        }
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.0.iter().find(|&&l| l as usize >= self.len()) {
            Some(l) => Err(Error::UnknownSymbol(format!("#{l}"))),
            None => Ok(()),
        }
    }

    /// Render a word; single-character symbols are concatenated, longer
    /// ones separated by spaces.
    pub fn format(&self, w: &Word) -> String {
        let single = self.symbols.iter().all(|s| s.chars().count() == 1);
        let parts: Vec<&str> = w.0.iter().map(|&l| self.symbol(l)).collect();
        if single {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    /// Parse a word written with the presentation syntax (parentheses and
    /// `^n` exponents allowed). The result is not reduced.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse::parse_word(self, text)
    }

    pub fn inverse_word(&self, w: &Word) -> Word {
        Word(w.0.iter().rev().map(|&l| self.inverse(l)).collect())
    }

    /// `u · v` freely reduced.
    pub fn mul(&self, u: &Word, v: &Word) -> Word {
        let mut out = u.0.clone();
        for &l in &v.0 {
            if out.last().is_some_and(|&x| self.inverse(x) == l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// `u⁻¹ · v` freely reduced.
    pub fn left_div(&self, u: &Word, v: &Word) -> Word {
        self.mul(&self.inverse_word(u), v)
    }

    pub fn is_freely_reduced(&self, w: &Word) -> bool {
        w.0.windows(2).all(|p| self.inverse(p[0]) != p[1])
    }

    pub fn is_cyclically_reduced(&self, w: &Word) -> bool {
        self.is_freely_reduced(w)
            && (w.len() < 2 || self.inverse(w.0[0]) != *w.0.last().unwrap())
    }
}

fn inverse_name(name: &str) -> String {
    let upper = name.to_uppercase();
    if upper != name {
        upper
    } else {
        let lower = name.to_lowercase();
        if lower != name {
            lower
        } else {
            format!("{name}_inv")
        }
    }
}

/// A finite sequence of generator symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl Into<Vec<Letter>>) -> Self {
        Word(letters.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn subword(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pushed(&self, l: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(l);
        Word(v)
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    pub fn starts_with(&self, p: &Word) -> bool {
        self.0.starts_with(&p.0)
    }

    /// Length of the longest common prefix.
    pub fn common_prefix_len(&self, other: &Word) -> usize {
        self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count()
    }

    /// Cyclic shift starting at position `k`.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return self.clone();
        }
        let k = k % self.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Unique freely reduced representative of `w`.
pub fn free_reduce(gens: &GeneratorSet, w: &Word) -> Result<Word> {
    gens.check(w)?;
    Ok(gens.mul(&Word::empty(), w))
}

/// Split a freely reduced word as `conjugator · core · conjugator⁻¹` with a
/// cyclically reduced core.
pub fn cyclic_reduce(gens: &GeneratorSet, w: &Word) -> (Word, Word) {
    let l = &w.0;
    let mut i = 0;
    while l.len() >= 2 * (i + 1) && gens.inverse(l[i]) == l[l.len() - 1 - i] {
        i += 1;
    }
    (Word(l[i..l.len() - i].to_vec()), Word(l[..i].to_vec()))
}

/// Write a nonempty word as `uᵏ` with `k` maximal, so `u` is not a proper power.
pub fn root_of(h: &Word) -> Result<(Word, usize)> {
    if h.is_empty() {
        return Err(Error::input("root of the empty word"));
    }
    let n = h.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (d..n).all(|i| h.0[i] == h.0[i - d]) {
            return Ok((h.prefix(d), n / d));
        }
    }
    unreachable!("d = n always divides")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> GeneratorSet {
        GeneratorSet::free(&["a", "b"]).unwrap()
    }

    fn w(g: &GeneratorSet, s: &str) -> Word {
        g.parse_word(s).unwrap()
    }

    #[test]
    fn order_puts_inverses_after_base() {
        let g = f2();
        assert_eq!(g.symbols(), &["a", "A", "b", "B"]);
        assert_eq!(g.inverse(0), 1);
        assert_eq!(g.inverse(3), 2);
    }

    #[test]
    fn explicit_order_and_involution() {
        let g = GeneratorSet::build(&["a", "t"], &["t"], Some(&["t", "A", "a"])).unwrap();
        assert_eq!(g.symbols(), &["t", "A", "a"]);
        assert!(g.is_self_inverse(0));
        assert_eq!(g.inverse(1), 2);
        let r = free_reduce(&g, &w(&g, "attA")).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn free_reduce_examples() {
        let g = f2();
        assert!(free_reduce(&g, &w(&g, "aA")).unwrap().is_empty());
        assert!(free_reduce(&g, &w(&g, "abBA")).unwrap().is_empty());
        assert_eq!(free_reduce(&g, &w(&g, "abAB")).unwrap(), w(&g, "abAB"));
    }

    #[test]
    fn free_reduce_rejects_unknown_letters() {
        let g = f2();
        assert!(matches!(
            free_reduce(&g, &Word(vec![0, 7])),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(matches!(g.parse_word("ax"), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let g = f2();
        assert_eq!(cyclic_reduce(&g, &w(&g, "abA")), (w(&g, "b"), w(&g, "a")));
        assert_eq!(cyclic_reduce(&g, &w(&g, "abAB")), (w(&g, "abAB"), Word::empty()));
        assert_eq!(cyclic_reduce(&g, &Word::empty()), (Word::empty(), Word::empty()));
    }

    #[test]
    fn root_of_examples() {
        let g = f2();
        assert_eq!(root_of(&w(&g, "abab")).unwrap(), (w(&g, "ab"), 2));
        assert_eq!(root_of(&w(&g, "abAB")).unwrap(), (w(&g, "abAB"), 1));
        assert_eq!(root_of(&w(&g, "aabaab")).unwrap(), (w(&g, "aab"), 2));
        assert!(root_of(&Word::empty()).is_err());
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        prop::collection::vec(0u8..4, 0..24).prop_map(Word)
    }

    proptest! {
        #[test]
        fn free_reduce_idempotent_and_shortening(x in word_strategy()) {
            let g = f2();
            let r = free_reduce(&g, &x).unwrap();
            prop_assert!(r.len() <= x.len());
            prop_assert!(g.is_freely_reduced(&r));
            prop_assert_eq!(free_reduce(&g, &r).unwrap(), r);
        }

        #[test]
        fn word_times_inverse_reduces_to_empty(x in word_strategy()) {
            let g = f2();
            let ww = x.concat(&g.inverse_word(&x));
            prop_assert!(free_reduce(&g, &ww).unwrap().is_empty());
        }

        #[test]
        fn cyclic_reduce_reassembles(x in word_strategy()) {
            let g = f2();
            let r = free_reduce(&g, &x).unwrap();
            let (core, c) = cyclic_reduce(&g, &r);
            prop_assert!(g.is_cyclically_reduced(&core));
            let back = g.mul(&g.mul(&c, &core), &g.inverse_word(&c));
            prop_assert_eq!(back, r);
        }
    }
}
