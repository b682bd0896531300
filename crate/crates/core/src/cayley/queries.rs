use std::collections::VecDeque;

use serde::Serialize;

use super::{Ball, ElemId, Geometry};
use crate::error::{Error, Result};
use crate::words::Word;

/// `A(g, n, Δ)`: elements `h` with `n − Δ ≤ d(1,h) − d(1,g) < n + Δ`.
/// `Δ = 0` is read as `d(1,h) − d(1,g) = n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnulusSet {
    pub base: Word,
    pub n: usize,
    pub delta: usize,
    pub members: Vec<Word>,
}

/// Length window `[lo, hi]` of `A(g, n, Δ)` for `d(1,g) = len`.
pub fn annulus_lengths(len: usize, n: usize, delta: usize) -> (usize, usize) {
    if delta == 0 {
        (len + n, len + n)
    } else {
        ((len + n).saturating_sub(delta), len + n + delta - 1)
    }
}

pub fn annulus<G: Geometry + ?Sized>(g: &Word, n: usize, delta: usize, geom: &G) -> Result<AnnulusSet> {
    let base = geom.normal_form(g)?;
    let (lo, hi) = annulus_lengths(base.len(), n, delta);
    geom.require(hi, "annulus")?;
    let mut members = Vec::new();
    for k in lo..=hi {
        members.extend(geom.sphere(k)?);
    }
    Ok(AnnulusSet {
        base,
        n,
        delta,
        members,
    })
}

pub fn lexi_geodesic<G: Geometry + ?Sized>(g: &Word, geom: &G) -> Result<Word> {
    geom.normal_form(g)
}

/// Is `d(x, y) ≤ c`? Elements outside a ball of radius ≥ c are far.
pub(crate) fn within<G: Geometry + ?Sized>(geom: &G, x: &Word, y: &Word, c: usize) -> Result<bool> {
    match geom.distance(x, y) {
        Ok(d) => Ok(d <= c),
        Err(Error::Range { .. }) if geom.horizon().is_some_and(|h| h >= c) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Greedy maximal `C`-separated subset (pairwise distance `> C`), scanning
/// members in the given order. Each kept point covers at most `♯B(1,C)`
/// members, which gives `♯Z·♯B(1,C) ≥ ♯Y`.
pub fn separated_net<G: Geometry + ?Sized>(members: &[Word], c: usize, geom: &G) -> Result<Vec<Word>> {
    if c == 0 {
        return Err(Error::input("separation constant must be at least 1"));
    }
    let mut kept: Vec<Word> = Vec::new();
    for y in members {
        let mut far = true;
        for z in &kept {
            if within(geom, z, y, c)? {
                far = false;
                break;
            }
        }
        if far {
            kept.push(y.clone());
        }
    }
    Ok(kept)
}

/// Length of the shortest `w` with `d(1, gw) > d(1, g)`.
///
/// The first element of length `d(1,g)+1` on any path from `g` is reached
/// through elements of length at most `d(1,g)`, so a breadth-first search
/// inside that region is exact once the ball reaches radius `d(1,g)+1`.
pub fn dead_end_depth(g: &Word, b: &Ball) -> Result<usize> {
    let start = b.locate(g)?;
    let len = b.elem_length(start);
    if b.radius() < len + 1 {
        return Err(Error::range("dead-end depth needs one more sphere", len + 1));
    }
    let ng = b.generators().len() as u8;
    let mut dist = vec![u32::MAX; b.sphere_start[len + 1]];
    dist[start as usize] = 0;
    let mut queue: VecDeque<ElemId> = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for s in 0..ng {
            let y = b.neighbor(x, s).expect("neighbors of inner spheres are in the ball");
            if b.elem_length(y) > len {
                return Ok(dist[x as usize] as usize + 1);
            }
            if dist[y as usize] == u32::MAX {
                dist[y as usize] = dist[x as usize] + 1;
                queue.push_back(y);
            }
        }
    }
    // the group is finite and g lies on its outermost sphere
    Err(Error::range("no longer element exists", usize::MAX))
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;
    use std::sync::Arc;

    use super::*;
    use crate::cayley::{build_ball, Budget, FreeGroup};
    use crate::words::{FreeImageOracle, Presentation};

    #[test]
    fn annulus_examples() {
        let f = FreeGroup::of_rank(2);
        assert_eq!(annulus(&Word::empty(), 2, 1, &f).unwrap().members.len(), 16);
        assert_eq!(annulus(&Word(vec![0]), 1, 0, &f).unwrap().members.len(), 12);
        let q = build_ball(&Presentation::parse("gens: a b\nrel: (abAB)^3").unwrap(), 4, &Budget::unlimited()).unwrap();
        assert_eq!(annulus(&Word::empty(), 4, 0, &q).unwrap().members.len(), 108);
        assert!(matches!(annulus(&Word::empty(), 4, 2, &q), Err(Error::Range { .. })));
    }

    #[test]
    fn separated_net_examples() {
        let f = FreeGroup::of_rank(2);
        let s1 = f.sphere(1).unwrap();
        assert_eq!(separated_net(&s1, 1, &f).unwrap().len(), 4);
        assert_eq!(separated_net(&s1, 2, &f).unwrap(), vec![Word(vec![0])]);
        let s3 = f.sphere(3).unwrap();
        let z = separated_net(&s3, 2, &f).unwrap();
        // exhaustive pairwise check
        for (i, x) in z.iter().enumerate() {
            for y in &z[i + 1..] {
                assert!(f.distance(x, y).unwrap() > 2);
            }
        }
        assert!(z.len() * 17 >= 36);
        // greedy keeps one word per first two letters: 12 of them
        assert_eq!(z.len(), 12);
    }

    #[test]
    fn dead_end_depth_free() {
        let b = build_ball(&Presentation::free(2), 4, &Budget::unlimited()).unwrap();
        for id in 0..b.sphere_start[4] as ElemId {
            assert_eq!(dead_end_depth(b.word(id), &b).unwrap(), 1);
        }
        let far = b.sphere(4).unwrap()[0].clone();
        assert!(dead_end_depth(&far, &b).is_err());
    }

    /// Exhaustive dead-end depths on the integer line with steps ±2, ±3.
    #[test]
    fn dead_end_depth_integer_steps() {
        let o = Arc::new(FreeImageOracle::integer_steps(&[("x", 2), ("y", 3)]).unwrap());
        let b = Ball::build(o.clone(), 9, &Budget::unlimited()).unwrap();

        let steps = [2i64, -2, 3, -3];
        let mut len: HashMap<i64, usize> = HashMap::from([(0, 0)]);
        let mut frontier = vec![0i64];
        for d in 1..=12 {
            let mut next = Vec::new();
            for &x in &frontier {
                for s in steps {
                    len.entry(x + s).or_insert_with(|| {
                        next.push(x + s);
                        d
                    });
                }
            }
            frontier = next;
        }
        let brute = |x: i64| -> usize {
            let l = len[&x];
            // shortest w moving to a longer element
            let mut seen = HashMap::from([(x, 0usize)]);
            let mut q = VecDeque::from([x]);
            while let Some(y) = q.pop_front() {
                for s in steps {
                    let z = y + s;
                    if len[&z] > l {
                        return seen[&y] + 1;
                    }
                    if !seen.contains_key(&z) {
                        seen.insert(z, seen[&y] + 1);
                        q.push_back(z);
                    }
                }
            }
            unreachable!()
        };
        let mut max_depth = 0;
        for id in 0..b.sphere_start[9] as ElemId {
            let w = b.word(id);
            let value: i64 = o.image(w).len() as i64 * if o.image(w).letters().first() == Some(&1) { -1 } else { 1 };
            let d = dead_end_depth(w, &b).unwrap();
            assert_eq!(d, brute(value), "element {value}");
            max_depth = max_depth.max(d);
        }
        assert!(max_depth >= 1);
    }
}
