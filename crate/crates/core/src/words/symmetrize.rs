use std::collections::BTreeSet;

use super::{cyclic_reduce, GeneratorSet, Presentation, Word};
use crate::error::{Error, Result};

/// All cyclic permutations of the relators and their inverses, with piece
/// statistics.
///
/// `max_piece` is the longest common subword of two distinct members (a
/// plain substring scan, so periodic relators register their self-overlaps).
/// `max_prefix_piece` is the classical piece length: the longest common
/// prefix of two distinct members. Dehn's algorithm is gated on the latter.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetrizedRelators {
    pub words: Vec<Word>,
    pub max_piece: usize,
    pub lambda: f64,
    pub max_prefix_piece: usize,
    pub prefix_lambda: f64,
}

impl SymmetrizedRelators {
    /// Classical C'(λ) with prefix pieces.
    pub fn satisfies_c_prime(&self, lambda: f64) -> bool {
        self.prefix_lambda < lambda
    }

    pub fn shortest(&self) -> usize {
        self.words.iter().map(Word::len).min().unwrap_or(0)
    }
}

pub fn symmetrize_and_measure(p: &Presentation) -> Result<SymmetrizedRelators> {
    symmetrize_words(p.generators(), p.relators())
}

pub(crate) fn symmetrized_set(gens: &GeneratorSet, relators: &[Word]) -> Vec<Word> {
    let mut set = BTreeSet::new();
    for r in relators {
        let (core, _) = cyclic_reduce(gens, &gens.mul(&Word::empty(), r));
        if core.is_empty() {
            continue;
        }
        let inv = gens.inverse_word(&core);
        for k in 0..core.len() {
            set.insert(core.rotate(k));
            set.insert(inv.rotate(k));
        }
    }
    set.into_iter().collect()
}

pub(crate) fn symmetrize_words(gens: &GeneratorSet, relators: &[Word]) -> Result<SymmetrizedRelators> {
    let words = symmetrized_set(gens, relators);
    if words.is_empty() {
        return Err(Error::input("presentation has no nontrivial relators"));
    }
    let mut max_piece = 0;
    let mut max_prefix_piece = 0;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            max_piece = max_piece.max(longest_common_substring(&words[i], &words[j]));
            max_prefix_piece = max_prefix_piece.max(words[i].common_prefix_len(&words[j]));
        }
    }
    let shortest = words.iter().map(Word::len).min().unwrap() as f64;
    Ok(SymmetrizedRelators {
        max_piece,
        lambda: max_piece as f64 / shortest,
        max_prefix_piece,
        prefix_lambda: max_prefix_piece as f64 / shortest,
        words,
    })
}

fn longest_common_substring(a: &Word, b: &Word) -> usize {
    let (a, b) = (a.letters(), b.letters());
    let mut prev = vec![0usize; b.len() + 1];
    let mut best = 0;
    for i in 1..=a.len() {
        let mut cur = vec![0usize; b.len() + 1];
        for j in 1..=b.len() {
            if a[i - 1] == b[j - 1] {
                cur[j] = prev[j - 1] + 1;
                best = best.max(cur[j]);
            }
        }
        prev = cur;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(rel: &str) -> Presentation {
        Presentation::parse(&format!("gens: a b\nrel: {rel}\n")).unwrap()
    }

    /// Independent all-pairs scan over every (i, j, length) triple.
    fn brute_max_piece(words: &[Word]) -> usize {
        let mut best = 0;
        for (x, u) in words.iter().enumerate() {
            for v in &words[x + 1..] {
                for i in 0..u.len() {
                    for j in 0..v.len() {
                        let mut l = 0;
                        while i + l < u.len() && j + l < v.len() && u.0[i + l] == v.0[j + l] {
                            l += 1;
                        }
                        best = best.max(l);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn cube_of_generator_has_no_pieces() {
        let s = symmetrize_and_measure(&pres("aaa")).unwrap();
        assert_eq!(s.words.len(), 2);
        assert_eq!(s.max_piece, 0);
    }

    #[test]
    fn squared_commutator_matches_brute_force() {
        let s = symmetrize_and_measure(&pres("(abAB)^2")).unwrap();
        assert_eq!(s.words.len(), 8);
        assert_eq!(s.max_piece, brute_max_piece(&s.words));
        // abABabAB and bABabABa share bABabAB
        assert_eq!(s.max_piece, 7);
        assert!(s.max_piece < s.shortest());
    }

    #[test]
    fn periodic_relator_fails_c_prime_sixth_by_subwords() {
        let s = symmetrize_and_measure(&pres("(ab)^3")).unwrap();
        assert_eq!(s.max_piece, brute_max_piece(&s.words));
        assert!(s.lambda >= 0.5);
    }

    #[test]
    fn power_relators_force_long_pieces() {
        let g = GeneratorSet::free(&["a", "b"]).unwrap();
        // |u| = 1 is excluded: aⁿ has a single rotation, so max_piece is 0
        for len in 2..=6usize {
            let total = 4usize.pow(len as u32);
            for code in 0..total {
                let mut letters = Vec::new();
                let mut c = code;
                for _ in 0..len {
                    letters.push((c % 4) as u8);
                    c /= 4;
                }
                let u = Word(letters);
                if !g.is_cyclically_reduced(&u) || super::super::root_of(&u).unwrap().1 != 1 {
                    continue;
                }
                for n in 3..=6 {
                    let s = symmetrize_words(&g, &[u.pow(n)]).unwrap();
                    assert!(s.max_piece + u.len() >= (n - 1) * u.len(), "{u:?}^{n}");
                }
            }
        }
    }

    #[test]
    fn empty_relator_set_is_an_error() {
        let g = GeneratorSet::free(&["a"]).unwrap();
        assert!(symmetrize_words(&g, &[]).is_err());
    }
}
