use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use serde::Serialize;

use crate::cayley::{Ball, ElemId, Geometry};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::Word;

/// Floyd length `Σ_e λ^{−d(v,e)}` of a path given by its vertices, with
/// `d(v, e)` the smaller of the endpoint distances.
pub fn floyd_length<T: Scalar, G: Geometry + ?Sized>(path: &[Word], v: &Word, lambda: &T, geom: &G) -> Result<T> {
    check_lambda(lambda)?;
    let mut dist = Vec::with_capacity(path.len());
    for x in path {
        dist.push(geom.distance(v, x)?);
    }
    let mut total = T::zero();
    for (i, pair) in path.windows(2).enumerate() {
        if geom.distance(&pair[0], &pair[1])? != 1 {
            return Err(Error::input(format!("path vertices {i} and {} are not adjacent", i + 1)));
        }
        let d = dist[i].min(dist[i + 1]);
        total = total + lambda.powi(-(d as i32));
    }
    Ok(total)
}

fn check_lambda<T: Scalar>(lambda: &T) -> Result<()> {
    if *lambda > T::one() {
        Ok(())
    } else {
        Err(Error::input("Floyd parameter must exceed 1"))
    }
}

/// Two-sided bound on the Floyd distance `ρ_v(x, y)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FloydInterval<T> {
    pub lo: T,
    pub hi: T,
    pub certified: bool,
    pub method: &'static str,
}

struct MinKey<T>(T, ElemId);

impl<T: PartialOrd> PartialEq for MinKey<T> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<T: PartialOrd> Eq for MinKey<T> {}
impl<T: PartialOrd> PartialOrd for MinKey<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T: PartialOrd> Ord for MinKey<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap
        o.0.partial_cmp(&self.0)
            .unwrap_or(Ordering::Equal)
            .then_with(|| o.1.cmp(&self.1))
    }
}

/// Single-source shortest paths inside the ball with vertex-derived edge
/// weights `λ^{−min(d(a), d(b))}`.
fn dijkstra<T: Scalar>(b: &Ball, src: ElemId, vdist: &[usize], lambda: &T) -> Vec<Option<T>> {
    let ng = b.generators().len() as u8;
    let mut best: Vec<Option<T>> = vec![None; b.len()];
    let mut done = vec![false; b.len()];
    let mut heap = BinaryHeap::new();
    best[src as usize] = Some(T::zero());
    heap.push(MinKey(T::zero(), src));
    while let Some(MinKey(c, x)) = heap.pop() {
        if done[x as usize] {
            continue;
        }
        done[x as usize] = true;
        for s in 0..ng {
            let Some(y) = b.neighbor(x, s) else { continue };
            let d = vdist[x as usize].min(vdist[y as usize]);
            let nc = c.clone() + lambda.powi(-(d as i32));
            if best[y as usize].as_ref().is_none_or(|old| nc < *old) {
                best[y as usize] = Some(nc.clone());
                heap.push(MinKey(nc, y));
            }
        }
    }
    best
}

/// Distances from `v` to every ball element: a lower and an upper bound.
/// Exact where `v⁻¹a` lies in the ball; otherwise the true distance is in
/// `[max(R+1, |a|−|v|), graph distance inside the ball]`.
fn basepoint_distances(b: &Ball, v: ElemId) -> (Vec<usize>, Vec<usize>) {
    let g = b.generators();
    let vw = b.word(v).clone();
    if b.oracle().cayley_graph_is_tree() {
        let d: Vec<usize> = b
            .words()
            .iter()
            .map(|a| vw.len() + a.len() - 2 * vw.common_prefix_len(a))
            .collect();
        return (d.clone(), d);
    }
    let ng = g.len() as u8;
    let mut graph = vec![usize::MAX; b.len()];
    graph[v as usize] = 0;
    let mut q = VecDeque::from([v]);
    while let Some(x) = q.pop_front() {
        for s in 0..ng {
            if let Some(y) = b.neighbor(x, s) {
                if graph[y as usize] == usize::MAX {
                    graph[y as usize] = graph[x as usize] + 1;
                    q.push_back(y);
                }
            }
        }
    }
    let mut lo = vec![0; b.len()];
    let mut hi = vec![0; b.len()];
    for a in 0..b.len() {
        match b.locate(&g.left_div(&vw, b.word(a as ElemId))) {
            Ok(id) => {
                lo[a] = b.elem_length(id);
                hi[a] = lo[a];
            }
            Err(_) => {
                lo[a] = (b.radius() + 1).max(b.word(a as ElemId).len().saturating_sub(vw.len()));
                hi[a] = graph[a];
            }
        }
    }
    (lo, hi)
}

/// `ρ_v(x, y)` bounded from both sides. `hi` is the cheapest path inside
/// the ball. `lo` also allows paths that leave the ball: such a path pays
/// at least `λ^{−d(v,a)}` to leave at `a ∈ S^R` and `λ^{−d(v,b)}` to come
/// back at `b`. In a tree every path crosses the geodesic's edges, so the
/// geodesic cost is exact.
pub fn floyd_distance<T: Scalar>(x: &Word, y: &Word, v: &Word, lambda: &T, b: &Ball) -> Result<FloydInterval<T>> {
    check_lambda(lambda)?;
    let (xi, yi, vi) = (b.locate(x)?, b.locate(y)?, b.locate(v)?);
    let (dlo, dhi) = basepoint_distances(b, vi);
    let from_x_hi = dijkstra(b, xi, &dlo, lambda);
    let hi = from_x_hi[yi as usize]
        .clone()
        .ok_or_else(|| Error::range("points not connected inside the ball", b.radius() + 1))?;
    if b.oracle().cayley_graph_is_tree() {
        return Ok(FloydInterval {
            lo: hi.clone(),
            hi,
            certified: true,
            method: "tree geodesic (every path crosses its edges)",
        });
    }
    let from_x = dijkstra(b, xi, &dhi, lambda);
    let from_y = dijkstra(b, yi, &dhi, lambda);
    let mut lo = from_x[yi as usize].clone().unwrap_or_else(|| hi.clone());
    let mut out_leg: Option<T> = None;
    let mut in_leg: Option<T> = None;
    for a in b.sphere_ids(b.radius()) {
        let exit = lambda.powi(-(dhi[a as usize] as i32));
        if let Some(c) = &from_x[a as usize] {
            let t = c.clone() + exit.clone();
            if out_leg.as_ref().is_none_or(|o| t < *o) {
                out_leg = Some(t);
            }
        }
        if let Some(c) = &from_y[a as usize] {
            let t = c.clone() + exit;
            if in_leg.as_ref().is_none_or(|o| t < *o) {
                in_leg = Some(t);
            }
        }
    }
    if let (Some(o), Some(i)) = (out_leg, in_leg) {
        let escape = o + i;
        if escape < lo {
            lo = escape;
        }
    }
    if hi < lo {
        lo = hi.clone();
    }
    Ok(FloydInterval {
        certified: lo == hi,
        lo,
        hi,
        method: "in-ball Dijkstra with escape lower bound",
    })
}

/// Floyd length of the unique geodesic `[x, y]` in a free group, in closed
/// form: with `m` the common prefix of the reduced words, the edges run
/// from `x` down to the branch point and up to `y`.
pub fn tree_floyd_distance<T: Scalar>(x: &Word, y: &Word, lambda: &T) -> T {
    let m = x.common_prefix_len(y);
    let mut total = T::zero();
    for k in m..x.len() {
        total = total + lambda.powi(-(k as i32));
    }
    for k in m..y.len() {
        total = total + lambda.powi(-(k as i32));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_ball, Budget, FreeGroup};
    use crate::relgeom::transition::path_of;
    use crate::words::Presentation;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        crate::words::GeneratorSet::free_rank(2).parse_word(s).unwrap()
    }

    #[test]
    fn floyd_length_examples() {
        let f = FreeGroup::of_rank(2);
        let two = 2.0f64;
        assert_eq!(floyd_length(&[w(""), w("a")], &w(""), &two, &f).unwrap(), 1.0);
        assert_eq!(floyd_length(&[w("a"), w(""), w("A")], &w(""), &two, &f).unwrap(), 2.0);
        assert_eq!(floyd_length(&[w("a"), w("ab")], &w(""), &two, &f).unwrap(), 0.5);
        let exact = BigRational::from_int(2);
        assert_eq!(
            floyd_length(&[w("a"), w("ab")], &w(""), &exact, &f).unwrap(),
            BigRational::from_ratio(1, 2)
        );
        assert!(floyd_length(&[w("a"), w("b")], &w(""), &two, &f).is_err());
        assert!(floyd_length(&[w("a")], &w(""), &1.0, &f).is_err());
    }

    #[test]
    fn floyd_distance_examples() {
        let b = build_ball(&Presentation::free(2), 6, &Budget::unlimited()).unwrap();
        let two = BigRational::from_int(2);
        let r = floyd_distance(&w("a"), &w("A"), &w(""), &two, &b).unwrap();
        assert!(r.certified);
        assert_eq!(r.hi, BigRational::from_int(2));
        let r = floyd_distance(&w("aa"), &w("ab"), &w(""), &two, &b).unwrap();
        assert_eq!(r.hi, BigRational::from_int(1));
    }

    #[test]
    fn dijkstra_matches_tree_formula() {
        let b = build_ball(&Presentation::free(2), 5, &Budget::unlimited()).unwrap();
        let f = FreeGroup::of_rank(2);
        let two = BigRational::from_int(2);
        let words = f.ball_words(4).unwrap();
        for (i, x) in words.iter().enumerate().step_by(7) {
            for y in words.iter().skip(i).step_by(11) {
                let d = floyd_distance(x, y, &w(""), &two, &b).unwrap();
                assert_eq!(d.hi, tree_floyd_distance(x, y, &two));
                let path = path_of(&f, x, &f.normal_form(&f.generators().left_div(x, y)).unwrap()).unwrap();
                assert_eq!(floyd_length(&path, &w(""), &two, &f).unwrap(), d.hi);
            }
        }
    }

    #[test]
    fn basepoint_change_inequality() {
        let b = build_ball(&Presentation::free(2), 6, &Budget::unlimited()).unwrap();
        let f = FreeGroup::of_rank(2);
        let words = f.ball_words(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let lambda = 2.0f64;
        for _ in 0..100 {
            let x = &words[rng.gen_range(0..words.len())];
            let y = &words[rng.gen_range(0..words.len())];
            if x == y {
                continue;
            }
            let r1 = floyd_distance(x, y, &w(""), &lambda, &b).unwrap();
            let ra = floyd_distance(x, y, &w("a"), &lambda, &b).unwrap();
            assert!(r1.certified && ra.certified);
            let q = ra.hi / r1.hi;
            assert!((1.0 / lambda..=lambda).contains(&q), "{q}");
        }
    }

    #[test]
    fn non_tree_balls_give_intervals() {
        let p = Presentation::parse("gens: a b\nrel: (ab)^3").unwrap();
        let b = build_ball(&p, 5, &Budget::unlimited()).unwrap();
        let r = floyd_distance(&w("a"), &w("A"), &w(""), &2.0f64, &b).unwrap();
        assert!(r.lo <= r.hi);
        assert!(r.hi <= 2.0);
    }
}
