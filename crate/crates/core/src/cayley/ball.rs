use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::Geometry;
use crate::error::{Error, Result};
use crate::words::{ElementKey, GeneratorSet, GroupOracle, Letter, Presentation, PresentationKind, Word};

/// Index of an element inside a [`Ball`]. Elements are numbered in
/// shortlex order of their lexi-geodesics, so spheres are contiguous.
pub type ElemId = u32;

/// Neighbor outside the ball.
pub(crate) const NONE: ElemId = u32::MAX;
const UNSET: ElemId = u32::MAX - 1;

/// Resource limits for a ball build.
#[derive(Clone, Debug, Default)]
pub struct Budget {
    pub max_elements: Option<usize>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn max_elements(n: usize) -> Self {
        Self {
            max_elements: Some(n),
            deadline: None,
        }
    }

    pub fn with_time_limit(mut self, d: Duration) -> Self {
        self.deadline = Some(Instant::now() + d);
        self
    }

    fn out_of_time(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Bucket {
    One(ElemId),
    Many(Vec<ElemId>),
}

impl Bucket {
    fn ids(&self) -> &[ElemId] {
        match self {
            Bucket::One(id) => std::slice::from_ref(id),
            Bucket::Many(v) => v,
        }
    }

    pub(crate) fn push(&mut self, id: ElemId) {
        match self {
            Bucket::One(first) => *self = Bucket::Many(vec![*first, id]),
            Bucket::Many(v) => v.push(id),
        }
    }
}

pub(crate) fn key_hash(k: &ElementKey) -> u64 {
    let mut h = DefaultHasher::new();
    k.hash(&mut h);
    h.finish()
}

/// The exact ball `B(1, R)` of a Cayley graph.
///
/// Every element is stored as its lexi-geodesic; the right-multiplication
/// table `neighbors[id·|S| + s]` gives `id·s` (or nothing when it leaves the
/// ball). Predecessor sets and all geodesic words are read off this table.
pub struct Ball {
    pub(crate) oracle: Arc<dyn GroupOracle>,
    pub(crate) radius: usize,
    pub(crate) words: Vec<Word>,
    pub(crate) sphere_start: Vec<usize>,
    pub(crate) neighbors: Vec<ElemId>,
    pub(crate) index: HashMap<u64, Bucket>,
    pub(crate) label: String,
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ball")
            .field("radius", &self.radius)
            .field("spheres", &self.sphere_sizes())
            .field("oracle", &self.oracle.describe())
            .finish()
    }
}

enum Resolution {
    Found(ElemId),
    New(Word, ElementKey, u64),
}

/// Build the ball of a presentation with its own oracle. For power-relator
/// presentations the spelling-theorem girth bound is checked on the result:
/// spheres of radius `k` with `2k < (n−1)|u|` must match the free counts.
pub fn build_ball(p: &Presentation, radius: usize, budget: &Budget) -> Result<Ball> {
    let mut ball = Ball::build(p.oracle(), radius, budget)?;
    ball.label = p.digest();
    if let PresentationKind::OneRelatorPower { root, exponent } = p.kind() {
        let girth = (exponent - 1) * root.len();
        let free = free_sphere_sizes(p.generators(), radius);
        for (k, (&q, &f)) in ball.sphere_sizes().iter().zip(&free).enumerate() {
            if 2 * k < girth && q != f {
                return Err(Error::Verification(format!(
                    "sphere {k} has {q} elements, free count {f}, below half-girth {girth}"
                )));
            }
        }
    }
    Ok(ball)
}

/// Sphere sizes of the free group (or free product of Z's and Z/2's) on
/// `gens` up to `radius`.
pub(crate) fn free_sphere_sizes(gens: &GeneratorSet, radius: usize) -> Vec<usize> {
    let m = gens.len();
    let mut out = vec![1usize];
    // count words by last letter: successors exclude the inverse of the last letter
    let mut by_last: Vec<usize> = vec![1; m];
    if radius >= 1 {
        out.push(m);
    }
    for _ in 2..=radius {
        let total: usize = by_last.iter().sum();
        by_last = gens
            .letters()
            .map(|l| total - by_last[gens.inverse(l) as usize])
            .collect();
        out.push(by_last.iter().sum());
    }
    out
}

impl Ball {
    /// Exact ball of the given radius; fails with `BudgetExceeded` when the
    /// budget runs out.
    pub fn build(oracle: Arc<dyn GroupOracle>, radius: usize, budget: &Budget) -> Result<Ball> {
        match Self::build_partial(oracle, radius, budget) {
            (ball, None) => Ok(ball),
            (_, Some(e)) => Err(e),
        }
    }

    /// Like [`Ball::build`] but always returns the largest complete ball,
    /// together with the budget error if the requested radius was not reached.
    pub fn build_partial(
        oracle: Arc<dyn GroupOracle>,
        radius: usize,
        budget: &Budget,
    ) -> (Ball, Option<Error>) {
        let ng = oracle.generators().len();
        let mut ball = Ball {
            label: oracle.describe(),
            oracle,
            radius: 0,
            words: vec![Word::empty()],
            sphere_start: vec![0, 1],
            neighbors: vec![UNSET; ng],
            index: HashMap::new(),
        };
        let k0 = ball.oracle.key(&Word::empty());
        ball.index.insert(key_hash(&k0), Bucket::One(0));

        for k in 0..=radius {
            let mut stop = k == radius || budget.out_of_time();
            let range = ball.sphere_start[k]..ball.sphere_start[k + 1];
            let jobs: Vec<(ElemId, Letter)> = range
                .flat_map(|e| {
                    let nb = &ball.neighbors;
                    (0..ng as Letter)
                        .filter(move |&s| nb[e * ng + s as usize] == UNSET)
                        .map(move |s| (e as ElemId, s))
                })
                .collect();
            let lo = k.saturating_sub(1);
            let resolved: Vec<Resolution> = jobs
                .par_iter()
                .map(|&(e, s)| {
                    let cand = ball.words[e as usize].pushed(s);
                    let key = ball.oracle.key(&cand);
                    let h = key_hash(&key);
                    match ball.lookup(h, &cand, &key, lo, k) {
                        Some(id) => Resolution::Found(id),
                        None => Resolution::New(cand, key, h),
                    }
                })
                .collect();

            // group new candidates by key hash, in order of first appearance
            let mut groups: Vec<Vec<usize>> = Vec::new();
            let mut group_of: HashMap<u64, usize> = HashMap::new();
            if !stop {
                for (j, r) in resolved.iter().enumerate() {
                    if let Resolution::New(_, _, h) = r {
                        let gi = *group_of.entry(*h).or_insert_with(|| {
                            groups.push(Vec::new());
                            groups.len() - 1
                        });
                        groups[gi].push(j);
                    }
                }
            }
            let reps: Vec<Vec<(usize, usize)>> = groups
                .par_iter()
                .map(|members| ball.cluster(members, &resolved))
                .collect();
            let mut rep_of = vec![usize::MAX; resolved.len()];
            let mut new_count = 0;
            for pairs in &reps {
                for &(j, rep) in pairs {
                    rep_of[j] = rep;
                    new_count += (j == rep) as usize;
                }
            }
            if !stop
                && budget
                    .max_elements
                    .is_some_and(|m| ball.words.len() + new_count > m)
            {
                stop = true;
            }

            let mut new_id: HashMap<usize, ElemId> = HashMap::new();
            for (j, r) in resolved.into_iter().enumerate() {
                let (e, s) = jobs[j];
                let target = match r {
                    Resolution::Found(id) => id,
                    Resolution::New(..) if stop => NONE,
                    Resolution::New(cand, _, h) => {
                        let rep = rep_of[j];
                        match new_id.get(&rep) {
                            Some(&id) => id,
                            None => {
                                debug_assert_eq!(rep, j);
                                let id = ball.words.len() as ElemId;
                                ball.words.push(cand);
                                ball.neighbors.extend(std::iter::repeat_n(UNSET, ng));
                                ball.index
                                    .entry(h)
                                    .and_modify(|b| b.push(id))
                                    .or_insert(Bucket::One(id));
                                new_id.insert(rep, id);
                                id
                            }
                        }
                    }
                };
                ball.neighbors[e as usize * ng + s as usize] = target;
                if target != NONE {
                    let back = ball.oracle.generators().inverse(s);
                    ball.neighbors[target as usize * ng + back as usize] = e;
                }
            }
            if stop {
                ball.radius = k;
                ball.sphere_start.truncate(k + 2);
                let err = (k < radius).then_some(Error::BudgetExceeded { completed_radius: k });
                return (ball, err);
            }
            ball.sphere_start.push(ball.words.len());
            log::debug!("sphere {} has {} elements", k + 1, ball.words.len() - ball.sphere_start[k + 1]);
        }
        unreachable!("the final radius always stops the loop")
    }

    /// Existing element with the same key hash, length in `lo..=hi`, equal to `cand`.
    fn lookup(&self, h: u64, cand: &Word, key: &ElementKey, lo: usize, hi: usize) -> Option<ElemId> {
        let bucket = self.index.get(&h)?;
        bucket.ids().iter().copied().find(|&id| {
            let w = &self.words[id as usize];
            (lo..=hi).contains(&w.len()) && self.same(cand, key, w)
        })
    }

    fn same(&self, cand: &Word, key: &ElementKey, w: &Word) -> bool {
        if self.oracle.key(w) != *key {
            return false;
        }
        self.oracle.key_is_normal_form()
            || self
                .oracle
                .equal(cand, w)
                .expect("ball words use the oracle's alphabet")
    }

    /// Greedy clustering of same-hash candidates: pairs (job, representative job).
    fn cluster(&self, members: &[usize], resolved: &[Resolution]) -> Vec<(usize, usize)> {
        let mut reps: Vec<usize> = Vec::new();
        let mut out = Vec::with_capacity(members.len());
        for &j in members {
            let Resolution::New(cand, key, _) = &resolved[j] else {
                unreachable!()
            };
            let hit = reps.iter().copied().find(|&r| {
                let Resolution::New(rw, _, _) = &resolved[r] else {
                    unreachable!()
                };
                self.same(cand, key, rw)
            });
            match hit {
                Some(r) => out.push((j, r)),
                None => {
                    reps.push(j);
                    out.push((j, j));
                }
            }
        }
        out
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn oracle(&self) -> &Arc<dyn GroupOracle> {
        &self.oracle
    }

    /// Presentation digest (or oracle description) identifying the group.
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.sphere_start.windows(2).map(|p| p[1] - p[0]).collect()
    }

    pub fn ball_sizes(&self) -> Vec<usize> {
        self.sphere_start[1..].to_vec()
    }

    pub fn sphere_ids(&self, k: usize) -> std::ops::Range<ElemId> {
        self.sphere_start[k] as ElemId..self.sphere_start[k + 1] as ElemId
    }

    pub fn word(&self, id: ElemId) -> &Word {
        &self.words[id as usize]
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn elem_length(&self, id: ElemId) -> usize {
        self.words[id as usize].len()
    }

    /// `id · s`, or `None` when it leaves the ball.
    pub fn neighbor(&self, id: ElemId, s: Letter) -> Option<ElemId> {
        let n = self.neighbors[id as usize * self.oracle.generators().len() + s as usize];
        (n < UNSET).then_some(n)
    }

    /// Letters `s` such that `id = p·s` for some `p` one sphere lower.
    pub fn predecessors(&self, id: ElemId) -> Vec<(Letter, ElemId)> {
        let g = self.oracle.generators();
        let len = self.elem_length(id);
        let mut out: Vec<(Letter, ElemId)> = g
            .letters()
            .filter_map(|t| {
                let p = self.neighbor(id, t)?;
                (self.elem_length(p) + 1 == len).then(|| (g.inverse(t), p))
            })
            .collect();
        out.sort();
        out
    }

    /// Element represented by `w`. Range error if it is outside the ball.
    pub fn locate(&self, w: &Word) -> Result<ElemId> {
        let g = self.oracle.generators();
        g.check(w)?;
        let mut cur: ElemId = 0;
        for &l in w.letters() {
            match self.neighbor(cur, l) {
                Some(n) => cur = n,
                None => return self.locate_by_key(w),
            }
        }
        Ok(cur)
    }

    fn locate_by_key(&self, w: &Word) -> Result<ElemId> {
        let key = self.oracle.key(w);
        self.lookup(key_hash(&key), w, &key, 0, self.radius)
            .ok_or_else(|| Error::range("element outside the ball", self.radius + 1))
    }

    /// All geodesic words for `id`, via the predecessor DAG.
    pub fn geodesic_words(&self, id: ElemId) -> Vec<Word> {
        if id == 0 {
            return vec![Word::empty()];
        }
        let mut out = Vec::new();
        for (s, p) in self.predecessors(id) {
            for w in self.geodesic_words(p) {
                out.push(w.pushed(s));
            }
        }
        out.sort();
        out
    }
}

impl Geometry for Ball {
    fn generators(&self) -> &GeneratorSet {
        self.oracle.generators()
    }

    fn horizon(&self) -> Option<usize> {
        Some(self.radius)
    }

    fn is_exact(&self) -> bool {
        self.oracle.is_exact()
    }

    fn normal_form(&self, w: &Word) -> Result<Word> {
        self.locate(w).map(|id| self.words[id as usize].clone())
    }

    fn geodesics(&self, w: &Word) -> Result<Vec<Word>> {
        self.locate(w).map(|id| self.geodesic_words(id))
    }

    fn sphere(&self, k: usize) -> Result<Vec<Word>> {
        if k > self.radius {
            return Err(Error::range(format!("sphere {k} beyond radius {}", self.radius), k));
        }
        Ok(self.words[self.sphere_start[k]..self.sphere_start[k + 1]].to_vec())
    }

    fn length(&self, w: &Word) -> Result<usize> {
        self.locate(w).map(|id| self.elem_length(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{FreeImageOracle, FreeOracle};

    fn pres(s: &str) -> Presentation {
        Presentation::parse(s).unwrap()
    }

    #[test]
    fn free_group_spheres() {
        let b = build_ball(&Presentation::free(2), 3, &Budget::unlimited()).unwrap();
        assert_eq!(b.sphere_sizes(), vec![1, 4, 12, 36]);
        assert_eq!(b.ball_sizes(), vec![1, 5, 17, 53]);
        assert!(b.is_exact());
    }

    #[test]
    fn z2_is_flagged_inexact() {
        let b = build_ball(&pres("gens: a b\nrel: abAB"), 2, &Budget::unlimited()).unwrap();
        assert_eq!(b.sphere_sizes(), vec![1, 4, 12]);
        assert!(!b.is_exact());
    }

    #[test]
    fn torsion_quotient_matches_free_below_half_girth() {
        let b = build_ball(&pres("gens: a b\nrel: (abAB)^3"), 5, &Budget::unlimited()).unwrap();
        assert_eq!(b.sphere_sizes(), vec![1, 4, 12, 36, 108, 324]);
    }

    #[test]
    fn finite_quotient_collapses() {
        // ⟨a | a^5⟩ is cyclic of order 5
        let b = build_ball(&pres("gens: a\nrel: a^5"), 4, &Budget::unlimited()).unwrap();
        assert_eq!(b.sphere_sizes(), vec![1, 2, 2, 0, 0]);
        let g = b.generators().clone();
        assert_eq!(b.length(&g.parse_word("a^3").unwrap()).unwrap(), 2);
        assert_eq!(b.normal_form(&g.parse_word("a^3").unwrap()).unwrap(), g.parse_word("AA").unwrap());
    }

    #[test]
    fn integer_steps_two_three() {
        let o = Arc::new(FreeImageOracle::integer_steps(&[("x", 2), ("y", 3)]).unwrap());
        let b = Ball::build(o, 4, &Budget::unlimited()).unwrap();
        // brute force word lengths on Z with steps ±2, ±3
        let mut dist: HashMap<i64, usize> = HashMap::from([(0, 0)]);
        let mut frontier = vec![0i64];
        for d in 1..=4 {
            let mut next = Vec::new();
            for &x in &frontier {
                for s in [2, -2, 3, -3] {
                    dist.entry(x + s).or_insert_with(|| {
                        next.push(x + s);
                        d
                    });
                }
            }
            frontier = next;
        }
        let mut counts = vec![0; 5];
        for &d in dist.values() {
            counts[d] += 1;
        }
        assert_eq!(b.sphere_sizes(), counts);
    }

    #[test]
    fn redundant_generator_shortens() {
        let gens = GeneratorSet::free(&["a", "b", "c"]).unwrap();
        let f2 = GeneratorSet::free_rank(2);
        let imgs = ["a", "b", "ab"].iter().map(|s| f2.parse_word(s).unwrap()).collect();
        let o = Arc::new(FreeImageOracle::new(gens.clone(), f2, imgs).unwrap());
        let b = Ball::build(o, 2, &Budget::unlimited()).unwrap();
        let ab = gens.parse_word("ab").unwrap();
        assert_eq!(b.normal_form(&ab).unwrap(), gens.parse_word("c").unwrap());
        assert_eq!(b.geodesics(&ab).unwrap(), vec![gens.parse_word("c").unwrap()]);
    }

    #[test]
    fn budget_returns_partial_ball() {
        let o: Arc<dyn GroupOracle> = Arc::new(FreeOracle::new(GeneratorSet::free_rank(2)));
        let (b, err) = Ball::build_partial(o.clone(), 6, &Budget::max_elements(60));
        assert_eq!(err, Some(Error::BudgetExceeded { completed_radius: 3 }));
        assert_eq!(b.radius(), 3);
        assert_eq!(b.len(), 53);
        let aaa = b.locate(&Word(vec![0, 0, 0])).unwrap();
        assert_eq!(b.neighbor(aaa, 0), None);
        assert!(b.neighbor(aaa, 1).is_some());
        assert!(matches!(
            Ball::build(o, 6, &Budget::max_elements(60)),
            Err(Error::BudgetExceeded { completed_radius: 3 })
        ));
    }

    #[test]
    fn locate_and_predecessors() {
        let b = build_ball(&pres("gens: a b\nrel: (ab)^3"), 4, &Budget::unlimited()).unwrap();
        let g = b.generators().clone();
        // ababa = B
        let id = b.locate(&g.parse_word("ababa").unwrap()).unwrap();
        assert_eq!(b.word(id), &g.parse_word("B").unwrap());
        assert!(matches!(
            b.locate(&g.parse_word("aaaaa").unwrap()),
            Err(Error::Range { lower_bound: 5, .. })
        ));
        for id in 1..b.len() as ElemId {
            assert!(!b.predecessors(id).is_empty());
        }
    }

    #[test]
    fn free_sphere_formula() {
        assert_eq!(free_sphere_sizes(&GeneratorSet::free_rank(2), 4), vec![1, 4, 12, 36, 108]);
        let inv = GeneratorSet::build(&["s", "t"], &["s", "t"], None).unwrap();
        assert_eq!(free_sphere_sizes(&inv, 3), vec![1, 2, 2, 2]);
    }
}
