//! The invariant suite behind `relgrowth verify-all`, run on the bundled
//! presentations.

use num_rational::BigRational;
use serde::Serialize;

use crate::boundary::{children, cylinder_mass, total_mass};
use crate::cayley::{build_ball, within, Ball, Budget, FreeGroup, Geometry};
use crate::error::Result;
use crate::quotient::{language_filter, ContainmentFilter};
use crate::relgeom::floyd_distance;
use crate::words::{free_reduce, GeneratorSet, Presentation, PresentationKind, Word};

pub const BUNDLED: &[(&str, &str)] = &[
    ("f2", include_str!("../presentations/f2.grp")),
    ("f3", include_str!("../presentations/f3.grp")),
    ("commutator_cube", include_str!("../presentations/commutator_cube.grp")),
    ("ab_cube", include_str!("../presentations/ab_cube.grp")),
    ("surface2", include_str!("../presentations/surface2.grp")),
    ("z_star_z5", include_str!("../presentations/z_star_z5.grp")),
];

/// The bundled presentations, parsed.
pub fn bundled() -> Vec<(String, Presentation)> {
    BUNDLED
        .iter()
        .map(|(name, text)| (name.to_string(), Presentation::parse(text).expect("bundled presentations parse")))
        .collect()
}

pub fn bundled_text(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: &'static str,
    pub presentation: String,
    pub cases: usize,
    pub skipped: usize,
    /// First failures, at most ten.
    pub failures: Vec<String>,
    pub failure_count: usize,
}

impl CheckResult {
    fn new(check: &'static str, presentation: &str) -> Self {
        Self {
            check,
            presentation: presentation.to_string(),
            cases: 0,
            skipped: 0,
            failures: Vec::new(),
            failure_count: 0,
        }
    }

    fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < 10 {
                self.failures.push(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// All words of length at most `n` over the symbols (not only reduced ones).
fn all_words(gens: &GeneratorSet, n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..n {
        layer = layer.iter().flat_map(|w| gens.letters().map(move |l| w.pushed(l))).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn free_reduction_algebra(name: &str, gens: &GeneratorSet) -> Result<CheckResult> {
    let mut res = CheckResult::new("free-reduction algebra", name);
    let words = all_words(gens, 4);
    for w in &words {
        let r = free_reduce(gens, w)?;
        res.case(gens.is_freely_reduced(&r), || format!("{} not reduced", gens.format(&r)));
        res.case(free_reduce(gens, &r)? == r, || format!("reduction of {} not idempotent", gens.format(w)));
        let inv = gens.inverse_word(w);
        res.case(gens.mul(w, &inv).is_empty(), || format!("{}·{}⁻¹ ≠ 1", gens.format(w), gens.format(w)));
        res.case(gens.inverse_word(&inv) == *w, || format!("inverse of {} not involutive", gens.format(w)));
    }
    // `mul` is defined on reduced words
    let short: Vec<Word> = all_words(gens, 2)
        .into_iter()
        .filter(|w| gens.is_freely_reduced(w))
        .collect();
    for x in &short {
        for y in &short {
            for z in &short {
                let left = gens.mul(&gens.mul(x, y), z);
                let right = gens.mul(x, &gens.mul(y, z));
                res.case(left == right, || {
                    format!("({}·{})·{} not associative", gens.format(x), gens.format(y), gens.format(z))
                });
            }
        }
    }
    Ok(res)
}

fn separated_net_bound(name: &str, b: &Ball) -> Result<CheckResult> {
    let mut res = CheckResult::new("separated-net bound", name);
    let r = b.radius();
    let members = b.sphere(r)?;
    for c in 1..=2 {
        let net = crate::cayley::separated_net(&members, c, b)?;
        let ball_c = b.ball_sizes()[c.min(r)];
        res.case(net.len() * ball_c >= members.len(), || {
            format!("C = {c}: {} net points for {} members, ♯B(1,C) = {ball_c}", net.len(), members.len())
        });
        for (i, x) in net.iter().enumerate() {
            for y in &net[i + 1..] {
                res.case(!within(b, x, y, c)?, || format!("C = {c}: net points within C"));
            }
        }
    }
    Ok(res)
}

fn floyd_basepoint(name: &str, b: &Ball) -> Result<CheckResult> {
    let mut res = CheckResult::new("Floyd basepoint inequality", name);
    let lambda = 2.0f64;
    let pts = b.ball_words(2)?;
    let bases = b.ball_words(1)?;
    let pairs: Vec<(&Word, &Word)> = pts
        .iter()
        .enumerate()
        .flat_map(|(i, x)| pts[i + 1..].iter().map(move |y| (x, y)))
        .collect();
    let rho: Vec<Vec<_>> = bases
        .iter()
        .map(|v| pairs.iter().map(|(x, y)| floyd_distance(x, y, v, &lambda, b)).collect())
        .collect::<Result<_>>()?;
    let tol = 1e-12;
    for (i, v) in bases.iter().enumerate() {
        for (j, v2) in bases.iter().enumerate() {
            let d = b.distance(v, v2)? as i32;
            let k = lambda.powi(d);
            for (p, q) in rho[i].iter().zip(&rho[j]) {
                if p.certified && q.certified {
                    let ratio = p.hi / q.hi;
                    res.case(ratio <= k * (1.0 + tol) && ratio >= (1.0 - tol) / k, || {
                        format!("ρ ratio {ratio} outside λ^±{d}")
                    });
                } else {
                    // intervals must at least admit values obeying the bound
                    res.skipped += 1;
                    res.case(p.lo <= k * q.hi * (1.0 + tol) && q.lo <= k * p.hi * (1.0 + tol), || {
                        "Floyd intervals incompatible with the basepoint bound".to_string()
                    });
                }
            }
        }
    }
    Ok(res)
}

fn sub_girth_equality(name: &str, p: &Presentation) -> Result<Option<CheckResult>> {
    let PresentationKind::OneRelatorPower { root, exponent } = p.kind() else {
        return Ok(None);
    };
    let mut res = CheckResult::new("sub-girth equality", name);
    let girth = (exponent - 1) * root.len();
    let radius = (girth.saturating_sub(1) / 2).min(6);
    let b = build_ball(p, radius, &Budget::unlimited())?;
    let free = FreeGroup::new(p.generators().clone())?;
    for k in 0..=radius {
        let fs = free.sphere(k)?;
        let qs = b.sphere(k)?;
        res.case(fs == qs, || format!("sphere {k}: {} quotient vs {} free", qs.len(), fs.len()));
    }
    Ok(Some(res))
}

fn filter_monotonicity(name: &str, f: &FreeGroup) -> Result<CheckResult> {
    let mut res = CheckResult::new("filter monotonicity", name);
    let gens = f.generators();
    let h = gens.mul(&Word::from_letters(vec![0]), &Word::from_letters(vec![2]));
    let kept = |l: usize, eps: usize| language_filter(4, &ContainmentFilter::new(&h, l, eps)?, f);
    for eps in 0..=1 {
        let (a, b) = (kept(1, eps)?, kept(3, eps)?);
        res.case(a.iter().all(|g| b.binary_search_by(|x| cmp_shortlex(x, g)).is_ok()), || {
            format!("ε = {eps}: kept(L=1) ⊄ kept(L=3)")
        });
    }
    for l in [1, 3] {
        let (a, b) = (kept(l, 0)?, kept(l, 1)?);
        res.case(b.iter().all(|g| a.binary_search_by(|x| cmp_shortlex(x, g)).is_ok()), || {
            format!("L = {l}: kept(ε=1) ⊄ kept(ε=0)")
        });
    }
    Ok(res)
}

fn cmp_shortlex(x: &Word, y: &Word) -> std::cmp::Ordering {
    x.len().cmp(&y.len()).then_with(|| x.cmp(y))
}

fn cylinder_additivity(name: &str, f: &FreeGroup) -> Result<CheckResult> {
    let mut res = CheckResult::new("cylinder additivity", name);
    let max = if f.rank() <= 2 { 8 } else { 5 };
    let mut total = BigRational::from_integer(0.into());
    for p in f.sphere(1)? {
        total += cylinder_mass(&p, f)?;
    }
    res.case(total == BigRational::from_integer(1.into()), || "length-1 cylinders do not sum to 1".into());
    for len in 0..max {
        for p in f.sphere(len)? {
            let kids = children(&p, f);
            res.case(total_mass(&kids, f)? == cylinder_mass(&p, f)?, || {
                format!("[{}] ≠ Σ children", f.generators().format(&p))
            });
        }
    }
    Ok(res)
}

/// Run every invariant check on each presentation. Checks that need a free
/// group run on free presentations only; sub-girth equality runs on
/// power-relator presentations.
pub fn verify_all(presentations: &[(String, Presentation)]) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (name, p) in presentations {
        out.push(free_reduction_algebra(name, p.generators())?);
        if matches!(p.kind(), PresentationKind::Generic) {
            continue;
        }
        let b = build_ball(p, 4, &Budget::unlimited())?;
        out.push(separated_net_bound(name, &b)?);
        if p.generators().len() <= 4 {
            let b6 = build_ball(p, 6, &Budget::unlimited())?;
            out.push(floyd_basepoint(name, &b6)?);
        }
        if let Some(r) = sub_girth_equality(name, p)? {
            out.push(r);
        }
        if p.is_free() {
            let f = FreeGroup::new(p.generators().clone())?;
            out.push(filter_monotonicity(name, &f)?);
            out.push(cylinder_additivity(name, &f)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_presentations_parse_and_classify() {
        let all = bundled();
        assert_eq!(all.len(), BUNDLED.len());
        let kind = |n: &str| all.iter().find(|(m, _)| m == n).unwrap().1.kind().clone();
        assert_eq!(kind("f2"), PresentationKind::Free);
        assert!(matches!(kind("commutator_cube"), PresentationKind::OneRelatorPower { exponent: 3, .. }));
        assert!(matches!(kind("z_star_z5"), PresentationKind::OneRelatorPower { exponent: 5, .. }));
        assert_eq!(kind("surface2"), PresentationKind::SmallCancellation);
    }

    #[test]
    fn suite_passes_on_free_group() {
        let f2: Vec<_> = bundled().into_iter().filter(|(n, _)| n == "f2" || n == "ab_cube").collect();
        let results = verify_all(&f2).unwrap();
        for r in &results {
            assert!(r.passed(), "{r:?}");
            assert!(r.cases > 0);
        }
        assert_eq!(results.len(), 5 + 4);
    }
}
