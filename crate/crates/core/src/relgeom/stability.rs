//! Empirical stand-ins for the visibility function and for the stability of
//! transition points under perturbation of geodesic endpoints.

use serde::Serialize;

use super::floyd::tree_floyd_distance;
use super::transition::Classifier;
use crate::cayley::{FreeGroup, Geometry};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VisibilityRow {
    pub kappa: f64,
    /// `max{d(1, γ) : ρ_1(γ₋, γ₊) ≥ κ}` over the sampled geodesics.
    pub max_distance: Option<usize>,
    pub pairs: usize,
}

/// For every pair of elements of `B(1, radius)` in a free group, the
/// geodesic between them is unique, `d(1, γ)` is the length of the common
/// prefix and the Floyd distance at the identity has a closed form. Rows are
/// returned in the order of `kappas`.
pub fn visibility_table(f: &FreeGroup, radius: usize, lambda: f64, kappas: &[f64]) -> Result<Vec<VisibilityRow>> {
    let words = f.ball_words(radius)?;
    let mut samples: Vec<(f64, usize)> = Vec::with_capacity(words.len() * words.len() / 2);
    for (i, x) in words.iter().enumerate() {
        for y in &words[i + 1..] {
            samples.push((tree_floyd_distance(x, y, &lambda), x.common_prefix_len(y)));
        }
    }
    Ok(kappas
        .iter()
        .map(|&kappa| {
            let hits = samples.iter().filter(|(rho, _)| *rho >= kappa);
            let (count, max) = hits.fold((0, None), |(n, m): (usize, Option<usize>), (_, d)| {
                (n + 1, Some(m.map_or(*d, |m| m.max(*d))))
            });
            VisibilityRow {
                kappa,
                max_distance: max,
                pairs: count,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub pairs: usize,
    pub points_checked: usize,
    /// Largest distance from a checked transition point to the nearest
    /// transition point on the partner geodesic.
    pub max_partner_distance: usize,
    /// Points with no transition point at all on the partner geodesic.
    pub unmatched: usize,
}

/// Over geodesics `[1, y]`, `[1, y′]` with `y, y′ ∈ B(1, radius)` and
/// `d(y, y′) ≤ r`, match every transition point of the first at distance
/// more than `l` from both endpoints to the nearest transition point on
/// the second.
pub fn transition_stability<G: Geometry + ?Sized>(
    radius: usize,
    r: usize,
    l: usize,
    cls: &Classifier<G>,
) -> Result<StabilityReport> {
    let geom = cls.geometry();
    let mut report = StabilityReport {
        pairs: 0,
        points_checked: 0,
        max_partner_distance: 0,
        unmatched: 0,
    };
    for y in geom.ball_words(radius)? {
        for gy in geom.geodesics(&y)? {
            let flags = cls.transition_flags(&gy)?;
            for y2 in geom.ball_around(&y, r)? {
                if y2.len() > radius {
                    continue;
                }
                for gy2 in geom.geodesics(&y2)? {
                    report.pairs += 1;
                    let flags2 = cls.transition_flags(&gy2)?;
                    let partner: Vec<_> = (0..=gy2.len())
                        .filter(|&k| flags2[k])
                        .map(|k| geom.normal_form(&gy2.prefix(k)))
                        .collect::<Result<_>>()?;
                    for j in (l + 1)..gy.len().saturating_sub(l) {
                        if !flags[j] {
                            continue;
                        }
                        report.points_checked += 1;
                        let v = geom.normal_form(&gy.prefix(j))?;
                        let best = partner
                            .iter()
                            .map(|u| geom.distance(&v, u))
                            .collect::<Result<Vec<_>>>()?
                            .into_iter()
                            .min();
                        match best {
                            Some(d) => report.max_partner_distance = report.max_partner_distance.max(d),
                            None => report.unmatched += 1,
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}
