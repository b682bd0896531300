//! Rooted geodesic trees whose root paths carry uniformly spaced transition
//! points, grown greedily inside partial lexi-cone annuli.
//!
//! The construction selects children greedily and then checks the
//! conclusions (geodesy, spacing, growth rate) on the tree it built; it does
//! not compute the exact limiting vertex set of the existence proof.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::cayley::{annulus_lengths, Geometry};
use crate::error::{Error, Result};
use crate::relgeom::Classifier;
use crate::words::Word;

pub const GREEDY_NOTE: &str =
    "greedy validated child selection inside a finite ball; conclusions verified on the built tree";

/// `𝓛_{ε,R}(x, r, Δ)`: elements `h` of the annulus `A(x, r, Δ)` whose
/// lexi-geodesic passes through `x` and that satisfy
/// `d(1,h) ≤ d(1,x) + 2R` or have a transition point on `ω_h` within `2R`
/// of `x`. Sorted by the lexi-geodesic of `x⁻¹h`.
pub fn lexi_cone_annulus<G: Geometry + ?Sized>(
    x: &Word,
    r: usize,
    delta: usize,
    cls: &Classifier<G>,
) -> Result<Vec<Word>> {
    let geom = cls.geometry();
    let x = geom.normal_form(x)?;
    let (lo, hi) = annulus_lengths(x.len(), r, delta);
    geom.require(hi.max(x.len() + 2 * cls.big_r()), "lexi-cone annulus")?;
    let two_r = 2 * cls.big_r();
    let mut out = BTreeSet::new();
    for k in lo.saturating_sub(x.len())..=hi - x.len() {
        for f in geom.sphere(k)? {
            let h = geom.product(&x, &f)?;
            if !h.starts_with(&x) {
                continue;
            }
            let keep = h.len() <= x.len() + two_r || {
                let flags = cls.transition_flags(&h)?;
                let mut hit = false;
                for (j, &t) in flags.iter().enumerate() {
                    if t && geom.distance(&geom.normal_form(&h.prefix(j))?, &x)? <= two_r {
                        hit = true;
                        break;
                    }
                }
                hit
            };
            if keep {
                // h starts with x, so ω_{x⁻¹h} is the remaining suffix
                out.insert((h.subword(x.len(), h.len()), h));
            }
        }
    }
    Ok(out.into_iter().map(|(_, h)| h).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TreeConfig {
    pub r: usize,
    pub delta: usize,
    /// Children kept per vertex; `None` keeps the whole annulus.
    pub target_branching: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeVertex {
    pub word: Word,
    pub parent: Option<usize>,
    /// Lexi-geodesic of `parent⁻¹·word`.
    pub edge: Word,
    pub level: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionalTree {
    pub config: TreeConfig,
    pub eps: usize,
    pub big_r: usize,
    pub vertices: Vec<TreeVertex>,
    /// Vertex count per level.
    pub levels: Vec<usize>,
    /// Children per vertex, in vertex order.
    pub children: Vec<Vec<usize>>,
    /// Transition flags along the root path of each vertex.
    pub transition_flags: Vec<Vec<bool>>,
}

impl TransitionalTree {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trees serialize")
    }
}

/// Grow the tree level by level (each level in parallel over the frontier).
/// A vertex whose annulus has no valid member stays a leaf.
pub fn build_tree<G: Geometry + ?Sized>(config: TreeConfig, depth: usize, cls: &Classifier<G>) -> Result<TransitionalTree> {
    let geom = cls.geometry();
    geom.require(depth * (config.r + config.delta), "tree depth")?;
    let mut vertices = vec![TreeVertex {
        word: Word::empty(),
        parent: None,
        edge: Word::empty(),
        level: 0,
    }];
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut levels = vec![1];
    let mut frontier = vec![0usize];
    for level in 1..=depth {
        let picked: Vec<Vec<(Word, Word)>> = frontier
            .par_iter()
            .map(|&i| {
                let x = &vertices[i].word;
                let mut kids = Vec::new();
                for y in lexi_cone_annulus(x, config.r, config.delta, cls)? {
                    if config.target_branching.is_some_and(|t| kids.len() >= t) {
                        break;
                    }
                    let edge = geom.normal_form(&geom.generators().left_div(x, &y))?;
                    if geom.length(&y)? == x.len() + edge.len() {
                        kids.push((y, edge));
                    }
                }
                Ok(kids)
            })
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for (&parent, kids) in frontier.iter().zip(picked) {
            for (word, edge) in kids {
                let id = vertices.len();
                vertices.push(TreeVertex {
                    word,
                    parent: Some(parent),
                    edge,
                    level,
                });
                children.push(Vec::new());
                children[parent].push(id);
                next.push(id);
            }
        }
        levels.push(next.len());
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    let transition_flags = vertices
        .par_iter()
        .map(|v| cls.transition_flags(&v.word))
        .collect::<Result<_>>()?;
    Ok(TransitionalTree {
        config,
        eps: cls.eps(),
        big_r: cls.big_r(),
        vertices,
        levels,
        children,
        transition_flags,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TreeReport {
    pub depth: usize,
    pub levels: Vec<usize>,
    pub vertices: usize,
    pub branching_min: Option<usize>,
    pub branching_mean: Option<f64>,
    /// Largest distance from a root-path vertex to the nearest transition
    /// point on a leaf's root path.
    pub spacing: usize,
    /// `r + 2R + Δ`.
    pub spacing_bound: usize,
    pub spacing_ok: bool,
    /// `ln β/(r+Δ)` with `β` the minimum branching of internal vertices.
    pub rate_bound: Option<f64>,
    /// Least-squares slope of `ln ♯level_i` against `i·(r+Δ)`.
    pub empirical_slope: Option<f64>,
    /// `β·e^{−r·γ̂}` for the supplied growth estimate.
    pub kappa: Option<f64>,
    pub note: &'static str,
}

/// Re-verify geodesy (hard failure on violation), measure spacing and the
/// growth rate of the tree.
pub fn verify_tree<G: Geometry + ?Sized>(t: &TransitionalTree, gamma_hat: f64, cls: &Classifier<G>) -> Result<TreeReport> {
    let geom = cls.geometry();
    let gens = geom.generators();
    for v in &t.vertices {
        let mut total = 0;
        let mut cur = Some(v);
        while let Some(u) = cur {
            total += u.edge.len();
            cur = u.parent.map(|p| &t.vertices[p]);
        }
        if geom.length(&v.word)? != total {
            return Err(Error::Verification(format!(
                "tree vertex {} is not at root-path distance {total}",
                gens.format(&v.word)
            )));
        }
        if let Some(p) = v.parent {
            if !v.word.starts_with(&t.vertices[p].word) {
                return Err(Error::Verification(format!(
                    "parent of {} is off its lexi-geodesic",
                    gens.format(&v.word)
                )));
            }
        }
    }
    let mut spacing = 0;
    for (i, kids) in t.children.iter().enumerate() {
        if !kids.is_empty() {
            continue;
        }
        let flags = &t.transition_flags[i];
        let marks: Vec<usize> = (0..flags.len()).filter(|&j| flags[j]).collect();
        for j in 0..flags.len() {
            let d = marks.iter().map(|&k| j.abs_diff(k)).min().unwrap_or(usize::MAX);
            spacing = spacing.max(d);
        }
    }
    let step = t.config.r + t.config.delta;
    let internal: Vec<usize> = t.children.iter().map(Vec::len).filter(|&n| n > 0).collect();
    let branching_min = internal.iter().copied().min();
    let branching_mean = (!internal.is_empty()).then(|| internal.iter().sum::<usize>() as f64 / internal.len() as f64);
    let rate_bound = branching_min.filter(|_| step > 0).map(|b| (b as f64).ln() / step as f64);
    let pts: Vec<(f64, f64)> = t
        .levels
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(i, &n)| ((i * step) as f64, (n as f64).ln()))
        .collect();
    let empirical_slope = (pts.len() >= 2 && step > 0).then(|| {
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let (mx, my) = (sx / m, sy / m);
        let num: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        num / den
    });
    let spacing_bound = t.config.r + 2 * t.big_r + t.config.delta;
    Ok(TreeReport {
        depth: t.levels.len() - 1,
        levels: t.levels.clone(),
        vertices: t.vertices.len(),
        branching_min,
        branching_mean,
        spacing,
        spacing_bound,
        spacing_ok: spacing < spacing_bound,
        rate_bound,
        empirical_slope,
        kappa: branching_min.map(|b| b as f64 * (-(t.config.r as f64) * gamma_hat).exp()),
        note: GREEDY_NOTE,
    })
}

/// Rate bounds of uncapped trees of the given depth for each `r`.
pub fn tradeoff_sweep<G: Geometry + ?Sized>(
    rs: &[usize],
    delta: usize,
    depth: usize,
    gamma_hat: f64,
    cls: &Classifier<G>,
) -> Result<Vec<(usize, TreeReport)>> {
    rs.iter()
        .map(|&r| {
            let cfg = TreeConfig {
                r,
                delta,
                target_branching: None,
            };
            let t = build_tree(cfg, depth, cls)?;
            Ok((r, verify_tree(&t, gamma_hat, cls)?))
        })
        .collect()
}
