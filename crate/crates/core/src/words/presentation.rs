use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use super::oracle::{FreeOracle, GroupOracle, ShorteningOracle};
use super::symmetrize::symmetrize_words;
use super::{cyclic_reduce, parse, root_of, GeneratorSet, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresentationKind {
    Free,
    /// `⟨X | uⁿ⟩` with `u` not a proper power and `n ≥ 2`.
    OneRelatorPower { root: Word, exponent: usize },
    /// Classical C'(1/6) with prefix pieces; Dehn's algorithm applies.
    SmallCancellation,
    Generic,
}

/// A finite presentation `⟨S | R⟩`. Relators are stored freely and
/// cyclically reduced; a single relator that is a proper power is stored in
/// root-normalized form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    gens: GeneratorSet,
    relators: Vec<Word>,
    kind: PresentationKind,
}

impl Presentation {
    pub fn new(gens: GeneratorSet, relators: Vec<Word>) -> Result<Self> {
        let mut reduced = Vec::with_capacity(relators.len());
        for r in &relators {
            gens.check(r)?;
            let (core, _) = cyclic_reduce(&gens, &gens.mul(&Word::empty(), r));
            if core.is_empty() {
                return Err(Error::input("relator reduces to the empty word"));
            }
            reduced.push(core);
        }
        let has_involution = gens.letters().any(|l| gens.is_self_inverse(l));
        let kind = if reduced.is_empty() {
            PresentationKind::Free
        } else if has_involution {
            PresentationKind::Generic
        } else if let [r] = reduced.as_slice() {
            let (root, k) = root_of(r)?;
            if k >= 2 {
                PresentationKind::OneRelatorPower { root, exponent: k }
            } else if symmetrize_words(&gens, &reduced)?.satisfies_c_prime(1.0 / 6.0) {
                PresentationKind::SmallCancellation
            } else {
                PresentationKind::Generic
            }
        } else if symmetrize_words(&gens, &reduced)?.satisfies_c_prime(1.0 / 6.0) {
            PresentationKind::SmallCancellation
        } else {
            PresentationKind::Generic
        };
        Ok(Self {
            gens,
            relators: reduced,
            kind,
        })
    }

    pub fn free(rank: usize) -> Self {
        Self {
            gens: GeneratorSet::free_rank(rank),
            relators: Vec::new(),
            kind: PresentationKind::Free,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse::parse_presentation(text)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::parse(&text)
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn kind(&self) -> &PresentationKind {
        &self.kind
    }

    pub fn is_free(&self) -> bool {
        self.kind == PresentationKind::Free
    }

    /// Canonical text form; parsing it back yields an equal presentation.
    pub fn to_text(&self) -> String {
        let g = &self.gens;
        let mut out = format!("gens: {}\n", g.base_names().join(" "));
        let inv: Vec<&str> = g
            .letters()
            .filter(|&l| g.is_self_inverse(l))
            .map(|l| g.symbol(l))
            .collect();
        if !inv.is_empty() {
            out.push_str(&format!("involutions: {}\n", inv.join(" ")));
        }
        out.push_str(&format!("order: {}\n", g.symbols().join(" ")));
        for r in &self.relators {
            out.push_str(&format!("rel: {}\n", g.format(r)));
        }
        out
    }

    /// Hex SHA-256 of the canonical text; keys ball caches.
    pub fn digest(&self) -> String {
        let d = Sha256::digest(self.to_text().as_bytes());
        d.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// The exact word-problem oracle for this presentation, or the
    /// free-reduction-only fallback (flagged inexact) for generic ones.
    pub fn oracle(&self) -> Arc<dyn GroupOracle> {
        match &self.kind {
            PresentationKind::Free => Arc::new(FreeOracle::new(self.gens.clone())),
            PresentationKind::OneRelatorPower { root, exponent } => Arc::new(
                ShorteningOracle::spelling(self.gens.clone(), root.clone(), *exponent),
            ),
            PresentationKind::SmallCancellation => {
                Arc::new(ShorteningOracle::dehn(self.gens.clone(), &self.relators))
            }
            PresentationKind::Generic => Arc::new(FreeOracle::inexact(self.gens.clone())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_are_detected() {
        let p = |s: &str| Presentation::parse(s).unwrap();
        assert_eq!(p("gens: a b").kind(), &PresentationKind::Free);
        match p("gens: a b\nrel: abAB^3").kind() {
            PresentationKind::OneRelatorPower { root, exponent } => {
                assert_eq!(root.len(), 4);
                assert_eq!(*exponent, 3);
            }
            k => panic!("unexpected {k:?}"),
        }
        assert_eq!(p("gens: a b\nrel: abAB").kind(), &PresentationKind::Generic);
        // pieces have length 1 and 1/12 < 1/6
        let sc = p("gens: a b c d e f\nrel: abcdefABCDEF");
        assert_eq!(sc.kind(), &PresentationKind::SmallCancellation);
    }

    #[test]
    fn power_of_power_is_normalized() {
        let p = Presentation::parse("gens: a b\nrel: ((ab)^2)^2").unwrap();
        assert_eq!(
            p.kind(),
            &PresentationKind::OneRelatorPower {
                root: p.generators().parse_word("ab").unwrap(),
                exponent: 4
            }
        );
    }

    #[test]
    fn text_round_trip_and_digest() {
        let p = Presentation::parse("gens: a b\nrel: abAB^2").unwrap();
        let q = Presentation::parse(&p.to_text()).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.digest(), q.digest());
        assert_ne!(p.digest(), Presentation::free(2).digest());
    }

    #[test]
    fn relators_are_cyclically_reduced() {
        let p = Presentation::parse("gens: a b\nrel: b(abAB)^3B").unwrap();
        assert_eq!(p.relators()[0].len(), 12);
        assert!(Presentation::parse("gens: a\nrel: aA").is_err());
    }
}
