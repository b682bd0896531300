//! Cayley-ball exploration: exact balls over a word-problem oracle, growth
//! estimators, annuli, separated nets and dead-end depth.

mod ball;
mod cache;
mod growth;
mod queries;

use crate::error::{Error, Result};
use crate::words::{GeneratorSet, Word};

pub use ball::{build_ball, Ball, Budget, ElemId};
pub use cache::{cache_file_name, load_or_build};
pub use growth::{
    growth_estimate, growth_from_spheres, poincare_from_counts, poincare_partial, GrowthEstimate, PoincareReport,
    PoincareVerdict,
};
pub(crate) use queries::within;
pub use queries::{annulus, annulus_lengths, dead_end_depth, lexi_geodesic, separated_net, AnnulusSet};

/// Word-metric view of a Cayley graph. Elements are passed around as words;
/// the canonical representative of an element is its lexi-geodesic.
pub trait Geometry: Sync {
    fn generators(&self) -> &GeneratorSet;

    /// Largest length for which every element is known; `None` if unbounded.
    fn horizon(&self) -> Option<usize>;

    /// False when element identification relies on an inexact oracle.
    fn is_exact(&self) -> bool;

    /// Lexi-geodesic of the element represented by `w`. Range error when
    /// the element lies beyond the horizon.
    fn normal_form(&self, w: &Word) -> Result<Word>;

    /// All geodesic words for the element, in lexicographic order.
    fn geodesics(&self, w: &Word) -> Result<Vec<Word>>;

    /// Canonical words of all elements of length exactly `k`, in
    /// lexicographic order.
    fn sphere(&self, k: usize) -> Result<Vec<Word>>;

    fn length(&self, w: &Word) -> Result<usize> {
        self.normal_form(w).map(|n| n.len())
    }

    fn distance(&self, x: &Word, y: &Word) -> Result<usize> {
        self.length(&self.generators().left_div(x, y))
    }

    /// Canonical word of `x·y`.
    fn product(&self, x: &Word, y: &Word) -> Result<Word> {
        self.normal_form(&self.generators().mul(x, y))
    }

    /// Errors unless lengths up to `needed` are fully known.
    fn require(&self, needed: usize, what: &str) -> Result<()> {
        match self.horizon() {
            Some(h) if h < needed => Err(Error::range(
                format!("{what} needs radius {needed}, have {h}"),
                needed,
            )),
            _ => Ok(()),
        }
    }

    /// Canonical words of `B(1, r)` ordered by length, then lexicographically.
    fn ball_words(&self, r: usize) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        for k in 0..=r {
            out.extend(self.sphere(k)?);
        }
        Ok(out)
    }

    /// Canonical words of `B(g, r)`.
    fn ball_around(&self, g: &Word, r: usize) -> Result<Vec<Word>> {
        self.ball_words(r)?
            .iter()
            .map(|w| self.product(g, w))
            .collect()
    }
}

/// The free group on the given generators, with no radius limit: the
/// canonical word is the free reduction and geodesics are unique.
#[derive(Clone, Debug)]
pub struct FreeGroup {
    gens: GeneratorSet,
}

impl FreeGroup {
    pub fn new(gens: GeneratorSet) -> Result<Self> {
        if gens.letters().any(|l| gens.is_self_inverse(l)) {
            return Err(Error::input("free group generators cannot be involutions"));
        }
        Ok(Self { gens })
    }

    pub fn of_rank(k: usize) -> Self {
        Self {
            gens: GeneratorSet::free_rank(k),
        }
    }

    pub fn rank(&self) -> usize {
        self.gens.rank()
    }
}

impl Geometry for FreeGroup {
    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn horizon(&self) -> Option<usize> {
        None
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn normal_form(&self, w: &Word) -> Result<Word> {
        crate::words::free_reduce(&self.gens, w)
    }

    fn geodesics(&self, w: &Word) -> Result<Vec<Word>> {
        Ok(vec![self.normal_form(w)?])
    }

    fn sphere(&self, k: usize) -> Result<Vec<Word>> {
        let mut level = vec![Word::empty()];
        for _ in 0..k {
            let mut next = Vec::with_capacity(level.len() * (self.gens.len() - 1));
            for w in &level {
                for l in self.gens.letters() {
                    if w.last().is_none_or(|x| self.gens.inverse(x) != l) {
                        next.push(w.pushed(l));
                    }
                }
            }
            level = next;
        }
        Ok(level)
    }

    fn length(&self, w: &Word) -> Result<usize> {
        self.normal_form(w).map(|n| n.len())
    }
}
