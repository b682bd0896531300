use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::cylinder::{children, total_mass};
use super::TREE_NOTE;
use crate::cayley::{FreeGroup, Geometry};
use crate::error::{Error, Result};
use crate::relgeom::Classifier;
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShadowKind {
    /// Rays with some geodesic from the identity meeting `B(g, r)`.
    Full,
    /// Rays all of whose geodesics meet `B(g, r)`.
    Strong,
    /// Full shadow rays whose geodesic also has an `(ε,R)`-transition point
    /// in `B(g, 2R)`.
    Partial,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShadowDecomposition {
    pub target: Word,
    pub r: usize,
    pub eps: usize,
    pub big_r: usize,
    pub kind: ShadowKind,
    /// Disjoint cylinder prefixes, lexicographically ordered.
    pub cylinders: Vec<Word>,
    pub horizon: usize,
}

impl ShadowDecomposition {
    pub fn mass(&self, f: &FreeGroup) -> Result<BigRational> {
        total_mass(&self.cylinders, f)
    }
}

struct Decider<'a> {
    g: &'a Word,
    r: usize,
    kind: ShadowKind,
    cls: Option<&'a Classifier<'a, FreeGroup>>,
}

impl Decider<'_> {
    /// Whether every ray through the cylinder `[p]` lies in the shadow, none
    /// does, or the prefix is too short to tell.
    fn decide(&self, p: &Word) -> Result<Option<bool>> {
        let g = self.g;
        let m = g.common_prefix_len(p);
        let meets = if m + self.r >= g.len() {
            Some(true)
        } else if m < p.len() {
            Some(false)
        } else {
            None
        };
        let cls = match (self.kind, meets) {
            (_, Some(false)) => return Ok(Some(false)),
            (ShadowKind::Full | ShadowKind::Strong, _) => return Ok(meets),
            (ShadowKind::Partial, _) => self.cls.expect("partial shadows carry a classifier"),
        };
        let big_r = cls.big_r();
        let reach = 2 * big_r;
        // ray vertex j sits at distance j + |g| − 2·min(m, j) from g
        let dist = |j: usize| j + g.len() - 2 * m.min(j);
        let mut found = false;
        let mut pending = false;
        for j in g.len().saturating_sub(reach)..=(g.len() + reach) {
            if j > p.len() {
                // only vertices still following g can come back within reach
                if m == p.len() || dist(j) <= reach {
                    pending = true;
                }
                break;
            }
            if dist(j) > reach {
                continue;
            }
            if j <= big_r || j + big_r <= p.len() {
                if cls.is_transition(p, j, false)? {
                    found = true;
                    break;
                }
            } else {
                pending = true;
            }
        }
        let trans = if found {
            Some(true)
        } else if pending {
            None
        } else {
            Some(false)
        };
        Ok(match (meets, trans) {
            (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        })
    }

    /// Cylinders decided inside, and cylinders left undecided at depth `cap`.
    fn explore(&self, f: &FreeGroup, cap: usize) -> Result<(Vec<Word>, Vec<Word>)> {
        let mut inside = Vec::new();
        let mut open = Vec::new();
        let mut stack = vec![Word::empty()];
        while let Some(p) = stack.pop() {
            match self.decide(&p)? {
                Some(true) => inside.push(p),
                Some(false) => {}
                None if p.len() >= cap => open.push(p),
                None => {
                    let mut kids = children(&p, f);
                    kids.reverse();
                    stack.extend(kids);
                }
            }
        }
        inside.sort();
        open.sort();
        Ok((inside, open))
    }
}

fn decider<'a>(
    g: &'a Word,
    r: usize,
    kind: ShadowKind,
    cls: Option<&'a Classifier<'a, FreeGroup>>,
) -> Result<Decider<'a>> {
    if kind == ShadowKind::Partial && cls.is_none() {
        return Err(Error::input("partial shadows need a peripheral classifier"));
    }
    Ok(Decider { g, r, kind, cls })
}

/// Exact cylinder decomposition of a shadow of `g`. The transition status
/// of vertices in `B(g, 2R)` depends only on the ray within `B(g, 3R)`, so
/// every cylinder is decided by depth `|g| + r + 3R + 1`.
pub fn shadow_decompose<'a>(
    g: &Word,
    r: usize,
    kind: ShadowKind,
    f: &'a FreeGroup,
    cls: Option<&Classifier<'a, FreeGroup>>,
) -> Result<ShadowDecomposition> {
    let g = f.normal_form(g)?;
    let (eps, big_r) = cls.map_or((0, 0), |c| (c.eps(), c.big_r()));
    let horizon = g.len() + r + 3 * big_r + 1;
    let (cylinders, open) = decider(&g, r, kind, cls)?.explore(f, horizon)?;
    if !open.is_empty() {
        return Err(Error::Verification(format!(
            "{} cylinders undecided at horizon {horizon}",
            open.len()
        )));
    }
    Ok(ShadowDecomposition {
        target: g,
        r,
        eps,
        big_r,
        kind,
        cylinders,
        horizon,
    })
}

/// Mass bounds when cylinders still open at depth `cap` are excluded
/// (lower) or included (upper).
fn truncated_bounds(
    g: &Word,
    r: usize,
    kind: ShadowKind,
    f: &FreeGroup,
    cls: Option<&Classifier<'_, FreeGroup>>,
    cap: usize,
) -> Result<(BigRational, BigRational)> {
    let (inside, open) = decider(g, r, kind, cls)?.explore(f, cap)?;
    let lo = total_mass(&inside, f)?;
    let hi = lo.clone() + total_mass(&open, f)?;
    Ok((lo, hi))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShadowRow {
    pub g: Word,
    pub d: usize,
    pub mass: BigRational,
    /// `μ₁(Π(g))·(2k−1)^{d(1,g)}`, exact.
    pub ratio: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShadowLemmaReport {
    pub kind: ShadowKind,
    pub r: usize,
    pub eps: usize,
    pub big_r: usize,
    pub rows: Vec<ShadowRow>,
    /// Extremes over the rows with `g ≠ 1`.
    pub min_ratio: BigRational,
    pub max_ratio: BigRational,
    /// Masses agree at decision horizons `+1` and `+2`.
    pub horizon_stable: bool,
    pub note: &'static str,
}

impl ShadowLemmaReport {
    /// `max ratio · (2k−1)^{−2r}`: the constant in the `e^{2γ r}` headroom.
    pub fn headroom_constant(&self, f: &FreeGroup) -> BigRational {
        let q = BigInt::from(2 * f.rank() as i64 - 1);
        self.max_ratio.clone() / BigRational::from_integer(num_traits::pow(q, 2 * self.r))
    }
}

fn shadow_report(
    radius: usize,
    r: usize,
    kind: ShadowKind,
    f: &FreeGroup,
    cls: Option<&Classifier<'_, FreeGroup>>,
) -> Result<ShadowLemmaReport> {
    let q = BigInt::from(2 * f.rank() as i64 - 1);
    let words = f.ball_words(radius)?;
    let rows: Vec<(ShadowRow, bool)> = words
        .par_iter()
        .map(|g| {
            let dec = shadow_decompose(g, r, kind, f, cls)?;
            let mass = dec.mass(f)?;
            let mut stable = true;
            for extra in 1..=2 {
                let (lo, hi) = truncated_bounds(g, r, kind, f, cls, dec.horizon + extra)?;
                stable &= lo == mass && hi == mass;
            }
            let ratio = mass.clone() * BigRational::from_integer(num_traits::pow(q.clone(), g.len()));
            Ok((
                ShadowRow {
                    g: g.clone(),
                    d: g.len(),
                    mass,
                    ratio,
                },
                stable,
            ))
        })
        .collect::<Result<_>>()?;
    let horizon_stable = rows.iter().all(|(_, s)| *s);
    let rows: Vec<ShadowRow> = rows.into_iter().map(|(row, _)| row).collect();
    let ratios = rows.iter().filter(|row| row.d > 0).map(|row| &row.ratio);
    let min_ratio = ratios.clone().min().cloned().unwrap_or_else(BigRational::zero);
    let max_ratio = ratios.max().cloned().unwrap_or_else(BigRational::zero);
    let (eps, big_r) = cls.map_or((0, 0), |c| (c.eps(), c.big_r()));
    Ok(ShadowLemmaReport {
        kind,
        r,
        eps,
        big_r,
        rows,
        min_ratio,
        max_ratio,
        horizon_stable,
        note: TREE_NOTE,
    })
}

/// Shadow masses `μ₁(Π_r(g))` for every `g ∈ B(1, radius)`, normalized by
/// `e^{γ d(1,g)}` with `γ = ln(2k−1)`.
pub fn verify_shadow_lemma(f: &FreeGroup, radius: usize, r: usize) -> Result<ShadowLemmaReport> {
    let rep = shadow_report(radius, r, ShadowKind::Full, f, None)?;
    if radius > 0 && !rep.min_ratio.is_positive() {
        return Err(Error::Verification(format!("shadow lemma lower bound fails at r = {r}")));
    }
    Ok(rep)
}

/// Same for partial shadows `Π_{r,ε,R}(g)`.
pub fn verify_partial_shadow_lemma(
    radius: usize,
    r: usize,
    cls: &Classifier<'_, FreeGroup>,
) -> Result<ShadowLemmaReport> {
    shadow_report(radius, r, ShadowKind::Partial, cls.geometry(), Some(cls))
}
