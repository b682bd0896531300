use rayon::prelude::*;
use serde::Serialize;

use super::power::make_power_quotient;
use crate::cayley::{build_ball, growth_estimate, Ball, Budget, GrowthEstimate};
use crate::error::Result;
use crate::words::{Presentation, Word};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentLeg {
    pub n: usize,
    pub girth_bound: usize,
    pub spheres: Vec<usize>,
    pub balls: Vec<usize>,
    /// First radius where the quotient sphere is smaller than the free one.
    pub collapse_radius: Option<usize>,
    pub estimate: Option<GrowthEstimate<f64>>,
    /// The quotient ball lists the same lexi-geodesics as the free ball.
    pub equals_free_ball: bool,
    /// Every free word has quotient length at most its own length.
    pub length_nonincreasing: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub radius: usize,
    pub h: Word,
    pub free_spheres: Vec<usize>,
    pub free_estimate: GrowthEstimate<f64>,
    pub legs: Vec<ExperimentLeg>,
    /// Final estimates are non-decreasing in `n` over the completed legs.
    pub monotone: bool,
    /// Legs with `girth_bound > 2·radius` match the free ball exactly and
    /// report the free estimate.
    pub sub_girth_exact: bool,
}

fn run_leg(base: &Presentation, h: &Word, n: usize, radius: usize, free: &Ball, budget: &Budget) -> ExperimentLeg {
    let mut leg = ExperimentLeg {
        n,
        girth_bound: 0,
        spheres: Vec::new(),
        balls: Vec::new(),
        collapse_radius: None,
        estimate: None,
        equals_free_ball: false,
        length_nonincreasing: false,
        error: None,
    };
    let result = (|| -> Result<()> {
        let q = make_power_quotient(base, h, n)?;
        leg.girth_bound = q.girth_bound;
        let b = build_ball(&q.quotient, radius, budget)?;
        leg.spheres = b.sphere_sizes();
        leg.balls = b.ball_sizes();
        leg.collapse_radius = leg.spheres.iter().zip(free.sphere_sizes()).position(|(q, f)| *q < f);
        leg.estimate = Some(growth_estimate(&b)?);
        leg.equals_free_ball = b.words() == free.words();
        let mut ok = true;
        for w in free.words() {
            ok &= b.elem_length(b.locate(w)?) <= w.len();
        }
        leg.length_nonincreasing = ok;
        Ok(())
    })();
    if let Err(e) = result {
        log::warn!("quotient leg n = {n} failed: {e}");
        leg.error = Some(e.to_string());
    }
    leg
}

/// Balls of `F/⟨⟨hⁿ⟩⟩` for every `n` in `n_list` (legs run in parallel and
/// fail independently), compared with the free ball of the same radius.
pub fn theorem_a_experiment(
    base: &Presentation,
    h: &Word,
    n_list: &[usize],
    radius: usize,
    budget: &Budget,
) -> Result<ExperimentResult> {
    let free = build_ball(base, radius, budget)?;
    let free_estimate = growth_estimate(&free)?;
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let legs: Vec<ExperimentLeg> = ns
        .par_iter()
        .map(|&n| run_leg(base, h, n, radius, &free, budget))
        .collect();
    let finals: Vec<f64> = legs.iter().filter_map(|l| l.estimate.as_ref().map(|e| e.reported)).collect();
    let monotone = finals.windows(2).all(|p| p[0] <= p[1]);
    let sub_girth_exact = legs
        .iter()
        .filter(|l| l.error.is_none() && l.girth_bound > 2 * radius)
        .all(|l| l.equals_free_ball && l.estimate.as_ref().map(|e| e.reported) == Some(free_estimate.reported));
    Ok(ExperimentResult {
        radius,
        h: h.clone(),
        free_spheres: free.sphere_sizes(),
        free_estimate,
        legs,
        monotone,
        sub_girth_exact,
    })
}
