use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use super::abelian::AbelianInvariant;
use super::symmetrize::symmetrized_set;
use super::{cyclic_reduce, root_of, GeneratorSet, Presentation, PresentationKind, Word};
use crate::error::{Error, Result};

/// Hash key used to bucket candidate elements. When the oracle reports
/// `key_is_normal_form`, equal keys mean equal elements; otherwise keys
/// only separate elements (equal elements always share a key).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ElementKey {
    Normal(Word),
    Invariant(Vec<i64>),
}

/// Equality service for group elements written as words.
pub trait GroupOracle: Debug + Send + Sync {
    fn generators(&self) -> &GeneratorSet;

    /// Does `w` represent the identity?
    fn is_trivial(&self, w: &Word) -> Result<bool>;

    fn key(&self, w: &Word) -> ElementKey;

    fn key_is_normal_form(&self) -> bool;

    /// False when the oracle may identify fewer elements than the group does
    /// (free reduction standing in for an unsupported presentation).
    fn is_exact(&self) -> bool;

    fn describe(&self) -> String;

    /// True when the Cayley graph is a tree (free basis, no relators).
    fn cayley_graph_is_tree(&self) -> bool {
        false
    }

    fn equal(&self, u: &Word, v: &Word) -> Result<bool> {
        let g = self.generators();
        self.is_trivial(&g.mul(u, &g.inverse_word(v)))
    }
}

/// Free reduction. Exact for free presentations; as a fallback for other
/// presentations it is flagged inexact.
#[derive(Clone, Debug)]
pub struct FreeOracle {
    gens: GeneratorSet,
    exact: bool,
}

impl FreeOracle {
    pub fn new(gens: GeneratorSet) -> Self {
        Self { gens, exact: true }
    }

    pub fn inexact(gens: GeneratorSet) -> Self {
        Self { gens, exact: false }
    }
}

impl GroupOracle for FreeOracle {
    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn is_trivial(&self, w: &Word) -> Result<bool> {
        self.gens.check(w)?;
        Ok(self.gens.mul(&Word::empty(), w).is_empty())
    }

    fn key(&self, w: &Word) -> ElementKey {
        ElementKey::Normal(self.gens.mul(&Word::empty(), w))
    }

    fn key_is_normal_form(&self) -> bool {
        true
    }

    fn is_exact(&self) -> bool {
        self.exact
    }

    fn cayley_graph_is_tree(&self) -> bool {
        self.exact && self.gens.letters().all(|l| !self.gens.is_self_inverse(l))
    }

    fn describe(&self) -> String {
        if self.exact {
            "free reduction".into()
        } else {
            "free reduction only (not exact for this presentation)".into()
        }
    }
}

/// A subgroup of a free group given by images of the generators; the
/// generators may be redundant (e.g. `c = ab` in F₂, or steps 2 and 3 in Z).
#[derive(Clone, Debug)]
pub struct FreeImageOracle {
    gens: GeneratorSet,
    target: GeneratorSet,
    /// Reduced image of every letter of `gens`.
    images: Vec<Word>,
}

impl FreeImageOracle {
    /// `images[i]` is the image of base generator `i` of `gens`, written over
    /// `target`. Self-inverse generators are rejected (free groups are
    /// torsion free).
    pub fn new(gens: GeneratorSet, target: GeneratorSet, images: Vec<Word>) -> Result<Self> {
        if images.len() != gens.rank() {
            return Err(Error::input(format!(
                "{} images for {} generators",
                images.len(),
                gens.rank()
            )));
        }
        let mut per_letter = Vec::with_capacity(gens.len());
        for l in gens.letters() {
            if gens.is_self_inverse(l) {
                return Err(Error::input("free images cannot realize involutions"));
            }
            let (b, s) = gens.base_of(l);
            target.check(&images[b])?;
            let img = target.mul(&Word::empty(), &images[b]);
            per_letter.push(if s > 0 { img } else { target.inverse_word(&img) });
        }
        Ok(Self {
            gens,
            target,
            images: per_letter,
        })
    }

    /// The integers generated by the given named steps, e.g. `[("x", 2), ("y", 3)]`.
    pub fn integer_steps(steps: &[(&str, i64)]) -> Result<Self> {
        let names: Vec<&str> = steps.iter().map(|s| s.0).collect();
        let gens = GeneratorSet::free(&names)?;
        let target = GeneratorSet::free(&["t"])?;
        let images = steps
            .iter()
            .map(|&(_, k)| {
                let t = if k >= 0 { 0 } else { 1 };
                Word(vec![t; k.unsigned_abs() as usize])
            })
            .collect();
        Self::new(gens, target, images)
    }

    pub fn image(&self, w: &Word) -> Word {
        let mut out = Word::empty();
        for &l in w.letters() {
            out = self.target.mul(&out, &self.images[l as usize]);
        }
        out
    }
}

impl GroupOracle for FreeImageOracle {
    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn is_trivial(&self, w: &Word) -> Result<bool> {
        self.gens.check(w)?;
        Ok(self.image(w).is_empty())
    }

    fn key(&self, w: &Word) -> ElementKey {
        ElementKey::Normal(self.image(w))
    }

    fn key_is_normal_form(&self) -> bool {
        true
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        "image in a free group".into()
    }
}

/// Lengths visited by one shortening run; strictly decreasing, so it is a
/// termination certificate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub lengths: Vec<usize>,
}

impl ReductionTrace {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.lengths.windows(2).all(|p| p[1] < p[0])
    }
}

#[derive(Clone, Debug)]
enum Rule {
    /// `⟨X | uⁿ⟩`: subwords of `(u^{±1})^∞` longer than `(n−1)|u|`.
    Spelling { roots: [Word; 2], exponent: usize },
    /// Symmetrized relators; subwords longer than half a relator.
    Dehn { relators: Vec<Word> },
}

/// Word problem by greedy length reduction: Newman's spelling theorem for
/// one-relator groups with torsion, Dehn's algorithm for C'(1/6)
/// presentations. A nontrivial reduced word equal to 1 always contains a
/// replaceable subword, so a word is trivial iff it reduces to empty.
#[derive(Clone, Debug)]
pub struct ShorteningOracle {
    gens: GeneratorSet,
    rule: Rule,
    abelian: AbelianInvariant,
    even_relators: bool,
}

impl ShorteningOracle {
    /// `⟨X | uⁿ⟩`; a root that is itself a power is normalized first.
    pub fn spelling(gens: GeneratorSet, root: Word, exponent: usize) -> Self {
        let (core, _) = cyclic_reduce(&gens, &gens.mul(&Word::empty(), &root));
        let (u, k) = root_of(&core).expect("relator root is nonempty");
        let n = exponent * k;
        let rel = u.pow(n);
        let abelian = AbelianInvariant::new(&gens, std::slice::from_ref(&rel));
        let inv = gens.inverse_word(&u);
        Self {
            even_relators: rel.len() % 2 == 0,
            rule: Rule::Spelling {
                roots: [u, inv],
                exponent: n,
            },
            abelian,
            gens,
        }
    }

    pub fn dehn(gens: GeneratorSet, relators: &[Word]) -> Self {
        let sym = symmetrized_set(&gens, relators);
        Self {
            abelian: AbelianInvariant::new(&gens, relators),
            even_relators: relators.iter().all(|r| r.len() % 2 == 0),
            rule: Rule::Dehn { relators: sym },
            gens,
        }
    }

    /// Spelling-theorem girth bound `(n−1)|u|`: every nontrivial kernel word
    /// is longer than this. `None` for Dehn oracles.
    pub fn girth_bound(&self) -> Option<usize> {
        match &self.rule {
            Rule::Spelling { roots, exponent } => Some((exponent - 1) * roots[0].len()),
            Rule::Dehn { .. } => None,
        }
    }

    /// Reduce to a word with no replaceable subword; the result equals `w`
    /// up to conjugation.
    pub fn reduce_traced(&self, w: &Word) -> (Word, ReductionTrace) {
        let g = &self.gens;
        let (mut cur, _) = cyclic_reduce(g, &g.mul(&Word::empty(), w));
        let mut trace = ReductionTrace {
            lengths: vec![cur.len()],
        };
        while let Some(next) = self.replace_once(&cur) {
            let (core, _) = cyclic_reduce(g, &g.mul(&Word::empty(), &next));
            debug_assert!(core.len() < cur.len());
            cur = core;
            trace.lengths.push(cur.len());
        }
        (cur, trace)
    }

    fn replace_once(&self, w: &Word) -> Option<Word> {
        let letters = w.letters();
        match &self.rule {
            Rule::Spelling { roots, exponent } => {
                let p = roots[0].len();
                let full = exponent * p;
                let threshold = (exponent - 1) * p;
                for i in 0..letters.len() {
                    for root in roots {
                        let r = root.letters();
                        for k in 0..p {
                            let m = (0..full.min(letters.len() - i))
                                .take_while(|&j| letters[i + j] == r[(k + j) % p])
                                .count();
                            if m > threshold {
                                // s·t is a cyclic shift of root^n, so s = t⁻¹
                                let t: Vec<_> = (m..full).map(|j| r[(k + j) % p]).collect();
                                return Some(splice(&self.gens, letters, i, m, &t));
                            }
                        }
                    }
                }
                None
            }
            Rule::Dehn { relators } => {
                for i in 0..letters.len() {
                    for r in relators {
                        let rl = r.letters();
                        let m = letters[i..]
                            .iter()
                            .zip(rl)
                            .take_while(|(a, b)| a == b)
                            .count();
                        if 2 * m > rl.len() {
                            return Some(splice(&self.gens, letters, i, m, &rl[m..]));
                        }
                    }
                }
                None
            }
        }
    }
}

/// Replace `w[i..i+m]` by the inverse of `t`.
fn splice(gens: &GeneratorSet, w: &[u8], i: usize, m: usize, t: &[u8]) -> Word {
    let mut out = w[..i].to_vec();
    out.extend(t.iter().rev().map(|&l| gens.inverse(l)));
    out.extend_from_slice(&w[i + m..]);
    Word(out)
}

impl GroupOracle for ShorteningOracle {
    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn is_trivial(&self, w: &Word) -> Result<bool> {
        self.gens.check(w)?;
        let (r, trace) = self.reduce_traced(w);
        log::trace!("shortening trace {:?}", trace.lengths);
        Ok(r.is_empty())
    }

    fn key(&self, w: &Word) -> ElementKey {
        let mut k = self.abelian.evaluate(&self.gens, w);
        if self.even_relators {
            k.push((w.len() % 2) as i64);
        }
        ElementKey::Invariant(k)
    }

    fn key_is_normal_form(&self) -> bool {
        false
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        match &self.rule {
            Rule::Spelling { roots, exponent } => format!(
                "spelling reduction for ({})^{}",
                self.gens.format(&roots[0]),
                exponent
            ),
            Rule::Dehn { .. } => "Dehn's algorithm".into(),
        }
    }
}

/// Is `w` trivial in the group presented by `p`?
pub fn word_problem(w: &Word, p: &Presentation) -> Result<bool> {
    word_problem_traced(w, p).map(|(t, _)| t)
}

/// As [`word_problem`], also returning the length trace of the reduction.
pub fn word_problem_traced(w: &Word, p: &Presentation) -> Result<(bool, ReductionTrace)> {
    let g = p.generators();
    g.check(w)?;
    match p.kind() {
        PresentationKind::Free => {
            let r = g.mul(&Word::empty(), w);
            let trace = ReductionTrace {
                lengths: vec![r.len()],
            };
            Ok((r.is_empty(), trace))
        }
        PresentationKind::OneRelatorPower { root, exponent } => {
            let o = ShorteningOracle::spelling(g.clone(), root.clone(), *exponent);
            let (r, t) = o.reduce_traced(w);
            Ok((r.is_empty(), t))
        }
        PresentationKind::SmallCancellation => {
            let o = ShorteningOracle::dehn(g.clone(), p.relators());
            let (r, t) = o.reduce_traced(w);
            Ok((r.is_empty(), t))
        }
        PresentationKind::Generic => Err(Error::UnsupportedOracle(
            "no exact word problem for a generic presentation".into(),
        )),
    }
}
