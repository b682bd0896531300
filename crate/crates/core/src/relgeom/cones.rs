use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::transition::Classifier;
use crate::cayley::{annulus_lengths, within, Geometry};
use crate::error::Result;
use crate::words::Word;

/// Indices `j` of vertices of the geodesic word `w` with `d(w_j, g) ≤ radius`.
fn near_vertices<G: Geometry + ?Sized>(geom: &G, w: &Word, g: &Word, radius: usize) -> Result<Vec<usize>> {
    let lo = g.len().saturating_sub(radius);
    let hi = (g.len() + radius).min(w.len());
    let mut out = Vec::new();
    for j in lo..=hi {
        if j > w.len() {
            break;
        }
        let v = geom.normal_form(&w.prefix(j))?;
        if within(geom, &v, g, radius)? {
            out.push(j);
        }
    }
    Ok(out)
}

/// `h ∈ Ω_r(g)`: some geodesic `[1, h]` meets `B(g, r)`.
pub fn in_cone<G: Geometry + ?Sized>(h: &Word, g: &Word, r: usize, geom: &G) -> Result<bool> {
    let g = geom.normal_form(g)?;
    for w in geom.geodesics(h)? {
        if !near_vertices(geom, &w, &g, r)?.is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `h ∈ Ω_{r,ε,R}(g)`: some geodesic `[1, h]` meets `B(g, r)` and either
/// `d(1,h) ≤ d(1,g) + 2R` or that same geodesic has an `(ε,R)`-transition
/// point within `2R` of `g`.
pub fn in_partial_cone<G: Geometry + ?Sized>(h: &Word, g: &Word, r: usize, cls: &Classifier<G>) -> Result<bool> {
    let geom = cls.geometry();
    let g = geom.normal_form(g)?;
    let h = geom.normal_form(h)?;
    let two_r = 2 * cls.big_r();
    for w in geom.geodesics(&h)? {
        if near_vertices(geom, &w, &g, r)?.is_empty() {
            continue;
        }
        if h.len() <= g.len() + two_r {
            return Ok(true);
        }
        for j in near_vertices(geom, &w, &g, two_r)? {
            if cls.is_transition(&w, j, true)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Candidates for `Ω_r(g) ∩ A(g, n, Δ)`: products `u·f` with `u ∈ B(g, r)`
/// and `|u·f| = |u| + |f|`, which covers every element whose geodesic
/// passes through `B(g, r)`.
fn cone_candidates<G: Geometry + ?Sized>(g: &Word, r: usize, n: usize, delta: usize, geom: &G) -> Result<Vec<Word>> {
    let (lo, hi) = annulus_lengths(g.len(), n, delta);
    geom.require(hi + r, "cone annulus")?;
    let mut out = BTreeSet::new();
    for u in geom.ball_around(g, r)? {
        let fmin = lo.saturating_sub(u.len());
        if hi < u.len() {
            continue;
        }
        let fmax = hi - u.len();
        for k in fmin..=fmax {
            for f in geom.sphere(k)? {
                let h = geom.product(&u, &f)?;
                if h.len() == u.len() + f.len() {
                    out.insert((h.len(), h));
                }
            }
        }
    }
    Ok(out.into_iter().map(|(_, h)| h).collect())
}

/// `Ω_{r,ε,R}(g) ∩ A(g, n, Δ)` in shortlex order.
pub fn partial_cone_members<G: Geometry + ?Sized>(
    g: &Word,
    r: usize,
    n: usize,
    delta: usize,
    cls: &Classifier<G>,
) -> Result<Vec<Word>> {
    let geom = cls.geometry();
    let g = geom.normal_form(g)?;
    let mut out = Vec::new();
    for h in cone_candidates(&g, r, n, delta, geom)? {
        if in_partial_cone(&h, &g, r, cls)? {
            out.push(h);
        }
    }
    Ok(out)
}

/// `Ω_r(g) ∩ A(g, n, Δ)` in shortlex order.
pub fn cone_members<G: Geometry + ?Sized>(g: &Word, r: usize, n: usize, delta: usize, geom: &G) -> Result<Vec<Word>> {
    let g = geom.normal_form(g)?;
    let mut out = Vec::new();
    for h in cone_candidates(&g, r, n, delta, geom)? {
        if in_cone(&h, &g, r, geom)? {
            out.push(h);
        }
    }
    Ok(out)
}

/// Data determining the type of `Ω_{ε,R}(g)`, translated to the identity:
/// `level_data = {f ∈ B(1, 2R+1) : g·f ∈ Ω_{ε,R}(g)}` and
/// `f_data = {f ∈ B(1, 2C+1) : d(1, g·f) ≤ d(1, g)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PartialConeType {
    pub level_data: Vec<Word>,
    pub f_data: Vec<Word>,
}

/// Translated cone `g⁻¹·Ω_{ε,R}(g) ∩ B(1, radius)`, sorted.
pub fn translated_cone<G: Geometry + ?Sized>(g: &Word, radius: usize, cls: &Classifier<G>) -> Result<Vec<Word>> {
    let geom = cls.geometry();
    let g = geom.normal_form(g)?;
    geom.require(g.len() + radius, "translated cone")?;
    let mut out = Vec::new();
    for f in geom.ball_words(radius)? {
        let h = geom.product(&g, &f)?;
        // r = 0: g must lie on a geodesic to h
        if h.len() == g.len() + f.len() && in_partial_cone(&h, &g, 0, cls)? {
            out.push(f);
        }
    }
    out.sort();
    Ok(out)
}

pub fn partial_cone_type<G: Geometry + ?Sized>(g: &Word, c: usize, cls: &Classifier<G>) -> Result<PartialConeType> {
    let geom = cls.geometry();
    let g = geom.normal_form(g)?;
    let level_data = translated_cone(&g, 2 * cls.big_r() + 1, cls)?;
    geom.require(g.len() + 2 * c + 1, "F_g horizon")?;
    let mut f_data = Vec::new();
    for f in geom.ball_words(2 * c + 1)? {
        if geom.product(&g, &f)?.len() <= g.len() {
            f_data.push(f);
        }
    }
    f_data.sort();
    Ok(PartialConeType { level_data, f_data })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeCensus {
    pub spheres: Vec<usize>,
    /// Distinct types among elements of each sphere.
    pub per_sphere: Vec<usize>,
    /// Distinct types among elements of `B(1, k)`.
    pub cumulative: Vec<usize>,
    /// Per-sphere counts equal over the last two radii.
    pub stabilized: bool,
}

/// Count partial cone types sphere by sphere (in parallel; the merge is a
/// set union, so independent of scheduling).
pub fn enumerate_types<G: Geometry + ?Sized>(max_radius: usize, c: usize, cls: &Classifier<G>) -> Result<TypeCensus> {
    let geom = cls.geometry();
    let mut seen: BTreeSet<PartialConeType> = BTreeSet::new();
    let mut census = TypeCensus {
        spheres: Vec::new(),
        per_sphere: Vec::new(),
        cumulative: Vec::new(),
        stabilized: false,
    };
    for k in 0..=max_radius {
        let sphere = geom.sphere(k)?;
        let types: Vec<PartialConeType> = sphere
            .par_iter()
            .map(|g| partial_cone_type(g, c, cls))
            .collect::<Result<_>>()?;
        let distinct: BTreeSet<PartialConeType> = types.into_iter().collect();
        census.spheres.push(k);
        census.per_sphere.push(distinct.len());
        seen.extend(distinct);
        census.cumulative.push(seen.len());
    }
    let n = census.per_sphere.len();
    census.stabilized = n >= 2 && census.per_sphere[n - 1] == census.per_sphere[n - 2];
    Ok(census)
}

/// Elements `g` of `B(1, radius)` with `|g| ≥ min_length`, grouped by type;
/// for every group, compare translated cones to the first member's on
/// `B(1, 2R+1+extra)`. Returns the number of elements checked and the
/// disagreements found.
pub fn type_soundness<G: Geometry + ?Sized>(
    radius: usize,
    min_length: usize,
    extra: usize,
    c: usize,
    cls: &Classifier<G>,
) -> Result<(usize, Vec<(Word, Word)>)> {
    let geom = cls.geometry();
    let words: Vec<Word> = geom.ball_words(radius)?.into_iter().filter(|g| g.len() >= min_length).collect();
    let horizon = 2 * cls.big_r() + 1 + extra;
    let keyed: Vec<(PartialConeType, Vec<Word>)> = words
        .par_iter()
        .map(|g| Ok((partial_cone_type(g, c, cls)?, translated_cone(g, horizon, cls)?)))
        .collect::<Result<_>>()?;
    let mut first: HashMap<&PartialConeType, usize> = HashMap::new();
    let mut bad = Vec::new();
    for (i, (t, cone)) in keyed.iter().enumerate() {
        match first.get(t) {
            Some(&j) if keyed[j].1 != *cone => bad.push((words[j].clone(), words[i].clone())),
            Some(_) => {}
            None => {
                first.insert(t, i);
            }
        }
    }
    Ok((words.len(), bad))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Companion {
    pub g_prime: Word,
    /// `♯Ω_{ε,R}(g′, n, Δ)` for `n = 1..=horizon`.
    pub counts: Vec<usize>,
    pub score: f64,
}

/// Search `B(g, search_r)` for the `g′` maximizing
/// `min_n ♯Ω_{ε,R}(g′, n, Δ)·e^{−n·γ̂}`; `g = 1` forces `g′ = 1`.
pub fn companion_cone<G: Geometry + ?Sized>(
    g: &Word,
    search_r: usize,
    delta: usize,
    horizon: usize,
    gamma_hat: f64,
    cls: &Classifier<G>,
) -> Result<Companion> {
    let geom = cls.geometry();
    let g = geom.normal_form(g)?;
    let candidates = if g.is_empty() || search_r == 0 {
        vec![g.clone()]
    } else {
        geom.ball_around(&g, search_r)?
    };
    let mut best: Option<Companion> = None;
    for cand in candidates {
        let counts = (1..=horizon)
            .map(|n| partial_cone_members(&cand, 0, n, delta, cls).map(|m| m.len()))
            .collect::<Result<Vec<_>>>()?;
        let score = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| c as f64 * (-((i + 1) as f64) * gamma_hat).exp())
            .fold(f64::INFINITY, f64::min);
        if best.as_ref().is_none_or(|b| score > b.score) {
            best = Some(Companion {
                g_prime: cand,
                counts,
                score,
            });
        }
    }
    Ok(best.expect("candidate list is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_ball, Budget, FreeGroup};
    use crate::relgeom::{PeripheralIndex, PeripheralStructure};
    use crate::words::Presentation;

    fn w(s: &str) -> Word {
        crate::words::GeneratorSet::free_rank(2).parse_word(s).unwrap()
    }

    fn index(f: &FreeGroup, text: &str) -> PeripheralIndex {
        let p = PeripheralStructure::parse(text, f.generators()).unwrap();
        PeripheralIndex::new(f, &p, 16, 0).unwrap()
    }

    #[test]
    fn partial_cone_examples() {
        let f = FreeGroup::of_rank(2);
        let idx = index(&f, "a;b");
        let cls = Classifier::new(&f, &idx, 0, 1).unwrap();
        let g = w("a^5");
        assert!(in_partial_cone(&w("a^5b"), &g, 0, &cls).unwrap());
        assert!(in_partial_cone(&w("a^5(b^4)"), &g, 0, &cls).unwrap());
        assert!(!in_partial_cone(&w("a^10"), &g, 0, &cls).unwrap());
        assert!(in_cone(&w("a^10"), &g, 0, &f).unwrap());
    }

    #[test]
    fn partial_cone_is_inside_cone_and_monotone_in_r() {
        let f = FreeGroup::of_rank(2);
        let idx = index(&f, "a;b");
        let cls = Classifier::new(&f, &idx, 0, 1).unwrap();
        for g in f.ball_words(2).unwrap() {
            for n in 1..=3 {
                let mut prev: Option<Vec<Word>> = None;
                for r in 0..=2 {
                    let p = partial_cone_members(&g, r, n, 1, &cls).unwrap();
                    let full = cone_members(&g, r, n, 1, &f).unwrap();
                    assert!(p.iter().all(|h| full.contains(h)));
                    if let Some(prev) = &prev {
                        assert!(prev.iter().all(|h| p.contains(h)));
                    }
                    prev = Some(p);
                }
            }
        }
    }

    /// Brute force for cone candidates: scan the whole annulus.
    #[test]
    fn candidates_cover_the_annulus_scan() {
        let f = FreeGroup::of_rank(2);
        let idx = index(&f, "a;b");
        let cls = Classifier::new(&f, &idx, 0, 1).unwrap();
        for g in [w(""), w("a"), w("ab"), w("aaB")] {
            for r in 0..=1 {
                let fast = partial_cone_members(&g, r, 2, 1, &cls).unwrap();
                let ann = crate::cayley::annulus(&g, 2, 1, &f).unwrap();
                let brute: Vec<Word> = ann
                    .members
                    .into_iter()
                    .filter(|h| in_partial_cone(h, &g, r, &cls).unwrap())
                    .collect();
                assert_eq!(fast, brute);
            }
        }
    }

    #[test]
    fn free_group_has_five_cone_types() {
        let f = FreeGroup::of_rank(2);
        let idx = index(&f, "");
        let cls = Classifier::new(&f, &idx, 0, 1).unwrap();
        let census = enumerate_types(5, 0, &cls).unwrap();
        assert_eq!(census.per_sphere, vec![1, 4, 4, 4, 4, 4]);
        assert_eq!(*census.cumulative.last().unwrap(), 5);
        assert!(census.stabilized);
        // type(1) is the only one whose level data is all of B(1, 2R+1)
        let t1 = partial_cone_type(&w(""), 0, &cls).unwrap();
        assert_eq!(t1.level_data.len(), f.ball_words(3).unwrap().len());
        for g in f.ball_words(3).unwrap().iter().skip(1) {
            assert!(partial_cone_type(g, 0, &cls).unwrap().level_data.len() < t1.level_data.len());
        }
    }

    #[test]
    fn type_soundness_at_horizon_three() {
        let f = FreeGroup::of_rank(2);
        let idx = index(&f, "a;b");
        let cls = Classifier::new(&f, &idx, 0, 2).unwrap();
        let (checked, bad) = type_soundness(6, 0, 3, 0, &cls).unwrap();
        assert_eq!(checked, 1457);
        assert!(bad.is_empty(), "{bad:?}");
    }

    /// With R = 1 the key horizon 2R+1 is shorter than the reach 3R+1 of the
    /// endpoint convention: `a` and `a⁴` share a type but `a·a⁴` is in the
    /// partial cone of `a` (the identity is transitional) while `a⁴·a⁴` is
    /// not in that of `a⁴`.
    #[test]
    fn short_key_horizon_is_unsound() {
        let f = FreeGroup::of_rank(2);
        let idx = index(&f, "a;b");
        let cls = Classifier::new(&f, &idx, 0, 1).unwrap();
        assert_eq!(partial_cone_type(&w("a"), 0, &cls).unwrap(), partial_cone_type(&w("a^4"), 0, &cls).unwrap());
        assert!(in_partial_cone(&w("a^5"), &w("a"), 0, &cls).unwrap());
        assert!(!in_partial_cone(&w("a^8"), &w("a^4"), 0, &cls).unwrap());
        let (_, bad) = type_soundness(4, 0, 3, 0, &cls).unwrap();
        assert!(bad.contains(&(w("a"), w("a^4"))));
    }

    /// With the endpoint convention the vertex at distance R from the far
    /// end of `g·f`, `|f| = 2R+1`, is transitional and within 2R of g, so
    /// the level data is every geodesic extension and types collapse onto
    /// F_g. Beyond `|g| > 3R` that key no longer determines the cone.
    #[test]
    fn key_collapses_onto_incoming_letter() {
        let f = FreeGroup::of_rank(2);
        let idx = index(&f, "a;b");
        let cls = Classifier::new(&f, &idx, 0, 2).unwrap();
        let (g1, g2) = (w("a^8"), w("(ba)^4"));
        assert_eq!(partial_cone_type(&g1, 0, &cls).unwrap(), partial_cone_type(&g2, 0, &cls).unwrap());
        assert!(!in_partial_cone(&w("a^16"), &g1, 0, &cls).unwrap());
        assert!(in_partial_cone(&w("(ba)^4(a^8)"), &g2, 0, &cls).unwrap());
    }

    #[test]
    fn companion_examples() {
        let f = FreeGroup::of_rank(2);
        let idx = index(&f, "a;b");
        let cls = Classifier::new(&f, &idx, 0, 1).unwrap();
        let ln3 = 3f64.ln();
        assert_eq!(companion_cone(&w(""), 2, 1, 3, ln3, &cls).unwrap().g_prime, w(""));
        assert_eq!(companion_cone(&w("aaa"), 0, 1, 3, ln3, &cls).unwrap().g_prime, w("aaa"));
        let c = companion_cone(&w("aaa"), 2, 1, 4, ln3, &cls).unwrap();
        assert!(c.counts.iter().all(|&n| n > 0));
        assert!(f.distance(&c.g_prime, &w("aaa")).unwrap() <= 2);
    }

    #[test]
    fn works_on_quotient_balls() {
        let p = Presentation::parse("gens: a b\nrel: (abAB)^3").unwrap();
        let b = build_ball(&p, 6, &Budget::unlimited()).unwrap();
        let idx = PeripheralIndex::new(&b, &PeripheralStructure::parse("a;b", b.generators()).unwrap(), 4, 0).unwrap();
        let cls = Classifier::new(&b, &idx, 0, 1).unwrap();
        let m = partial_cone_members(&w("a"), 0, 2, 1, &cls).unwrap();
        assert!(!m.is_empty());
        assert!(m.iter().all(|h| in_cone(h, &w("a"), 0, &b).unwrap()));
    }
}
