use rayon::prelude::*;
use serde::Serialize;

use super::power::PowerQuotient;
use crate::cayley::{within, Geometry};
use crate::error::{Error, Result};
use crate::relgeom::path_of;
use crate::words::{root_of, word_problem, Word};

/// `W = E(h, L)`: in a free group the elementary closure of `h` is the
/// cyclic group of its root, so `W` is the set of root powers `u^{±m}` with
/// `m·|u| > L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContainmentFilter {
    pub root: Word,
    pub l: usize,
    pub eps: usize,
}

impl ContainmentFilter {
    /// Root normalization of `h` happens here; `h` should be cyclically
    /// reduced.
    pub fn new(h: &Word, l: usize, eps: usize) -> Result<Self> {
        let (root, _) = root_of(h)?;
        Ok(Self { root, l, eps })
    }

    /// Members of `W` with length at most `max_len`.
    pub fn members<G: Geometry + ?Sized>(&self, max_len: usize, geom: &G) -> Vec<Word> {
        let gens = geom.generators();
        let inv = gens.inverse_word(&self.root);
        let mut out = Vec::new();
        let mut m = self.l / self.root.len() + 1;
        while m * self.root.len() <= max_len {
            out.push(self.root.pow(m));
            out.push(inv.pow(m));
            m += 1;
        }
        out
    }
}

/// Whether the lexi-geodesic `ω_g` ε-contains an `f`-subword: some `t` has
/// `d(t, ω_g) ≤ ε` and `d(t·f, ω_g) ≤ ε`.
pub fn epsilon_contains<G: Geometry + ?Sized>(g: &Word, f: &Word, eps: usize, geom: &G) -> Result<bool> {
    let g = geom.normal_form(g)?;
    geom.require(g.len() + eps + f.len(), "ε-containment")?;
    let path = path_of(geom, &Word::empty(), &g)?;
    let near_path = |x: &Word| -> Result<bool> {
        for v in &path {
            if within(geom, x, v, eps)? {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let mut seen = std::collections::HashSet::new();
    for v in &path {
        for t in geom.ball_around(v, eps)? {
            if !seen.insert(t.clone()) {
                continue;
            }
            let tf = match geom.product(&t, f) {
                Ok(x) => x,
                // `t·f` beyond the horizon is farther than ε from the path
                Err(Error::Range { .. }) => continue,
                Err(e) => return Err(e),
            };
            if near_path(&tf)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Elements of `B(1, radius)` whose lexi-geodesics ε-contain no member of
/// `W`, in shortlex order. Only members of length at most `d(1,g) + 2ε`
/// can fit.
pub fn language_filter<G: Geometry + ?Sized>(radius: usize, filt: &ContainmentFilter, geom: &G) -> Result<Vec<Word>> {
    geom.require(radius + filt.eps, "language filter")?;
    let words = geom.ball_words(radius)?;
    let keep: Vec<bool> = words
        .par_iter()
        .map(|g| {
            for f in filt.members(g.len() + 2 * filt.eps, geom) {
                if epsilon_contains(g, &f, filt.eps, geom)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    Ok(words.into_iter().zip(keep).filter_map(|(w, k)| k.then_some(w)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub elements: usize,
    pub pairs: usize,
    /// `(g₁, g₂, g₁·g₂⁻¹)` for pairs identified by the quotient map.
    pub collisions: Vec<(Word, Word, Word)>,
}

impl InjectivityReport {
    pub fn injective(&self) -> bool {
        self.collisions.is_empty()
    }
}

/// Check `π(g₁) ≠ π(g₂)` for all distinct pairs of `kept` by solving the
/// word problem for `g₁·g₂⁻¹` in the quotient.
pub fn injectivity_check(kept: &[Word], q: &PowerQuotient) -> Result<InjectivityReport> {
    let gens = q.quotient.generators();
    let collisions: Vec<Vec<(Word, Word, Word)>> = (0..kept.len())
        .into_par_iter()
        .map(|i| {
            let mut found = Vec::new();
            for j in i + 1..kept.len() {
                let diff = gens.mul(&kept[i], &gens.inverse_word(&kept[j]));
                if word_problem(&diff, &q.quotient)? {
                    found.push((kept[i].clone(), kept[j].clone(), diff));
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    Ok(InjectivityReport {
        elements: kept.len(),
        pairs: kept.len() * kept.len().saturating_sub(1) / 2,
        collisions: collisions.into_iter().flatten().collect(),
    })
}
