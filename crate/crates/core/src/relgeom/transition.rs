use std::collections::{HashMap, HashSet};
use std::sync::RwLock;

use serde::Serialize;

use super::peripheral::{CosetId, PeripheralIndex};
use crate::cayley::Geometry;
use crate::error::{Error, Result};
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Deep(CosetId),
    Transition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexClassification {
    pub vertex: Word,
    pub index: usize,
    pub verdict: Verdict,
    pub eps: usize,
    pub big_r: usize,
}

/// Decides `(ε, R)`-deepness of path vertices against a peripheral index.
///
/// A vertex `v` can only be deep in a coset within `ε` of itself, i.e.
/// `v·e·P_i` with `e ∈ B(1, ε)`. Translating by `(v·e)⁻¹`, the window
/// `γ ∩ B(v, R)` must land in `near[i] = {u ∈ B(1, ε+R) : d(u, P_i) ≤ ε}`.
pub struct Classifier<'a, G: Geometry + ?Sized> {
    geom: &'a G,
    index: &'a PeripheralIndex,
    eps: usize,
    big_r: usize,
    ball_eps: Vec<Word>,
    near: Vec<HashSet<Word>>,
    /// Deepness of the middle vertex of a full window `W[j−R..j+R]`.
    cache: RwLock<HashMap<Vec<u8>, Option<(usize, Word)>>>,
}

impl<'a, G: Geometry + ?Sized> Classifier<'a, G> {
    pub fn new(geom: &'a G, index: &'a PeripheralIndex, eps: usize, big_r: usize) -> Result<Self> {
        let need = 2 * eps + big_r;
        if index.bound() < need {
            return Err(Error::range(
                format!("peripheral enumeration must reach 2ε+R = {need}"),
                need,
            ));
        }
        geom.require(need, "deepness classification")?;
        let ball_eps = geom.ball_words(eps)?;
        let candidates = geom.ball_words(eps + big_r)?;
        let mut near = Vec::with_capacity(index.len());
        for i in 0..index.len() {
            let mut set = HashSet::new();
            for u in &candidates {
                let close = index
                    .elements(i)
                    .iter()
                    .take_while(|p| p.len() <= u.len() + eps)
                    .any(|p| geom.distance(u, p).is_ok_and(|d| d <= eps));
                if close {
                    set.insert(u.clone());
                }
            }
            near.push(set);
        }
        Ok(Self {
            geom,
            index,
            eps,
            big_r,
            ball_eps,
            near,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn eps(&self) -> usize {
        self.eps
    }

    pub fn big_r(&self) -> usize {
        self.big_r
    }

    pub fn geometry(&self) -> &'a G {
        self.geom
    }

    pub fn index(&self) -> &'a PeripheralIndex {
        self.index
    }

    /// Given the window translated to the vertex (`v⁻¹z` for each window
    /// vertex `z`), the first `(i, e)` with the window inside
    /// `N_ε(v·e·P_i)`.
    fn deep_witness(&self, rel: &[Word]) -> Result<Option<(usize, Word)>> {
        let g = self.geom.generators();
        for i in 0..self.near.len() {
            for e in &self.ball_eps {
                let mut inside = true;
                for u in rel {
                    let t = self.geom.normal_form(&g.left_div(e, u))?;
                    if !self.near[i].contains(&t) {
                        inside = false;
                        break;
                    }
                }
                if inside {
                    return Ok(Some((i, e.clone())));
                }
            }
        }
        Ok(None)
    }

    /// Deepness of vertex `j` of the geodesic word `w`. For a finite
    /// geodesic the endpoint `|w|` is an endpoint of the path; for a ray
    /// prefix (`finite = false`) the path continues beyond `w` and the
    /// window must fit inside `w`.
    pub fn deep_on_geodesic(&self, w: &Word, j: usize, finite: bool) -> Result<Option<(usize, Word)>> {
        let r = self.big_r;
        let m = w.len();
        if j <= r || (finite && m - j <= r) {
            return Ok(None);
        }
        if self.near.is_empty() {
            return Ok(None);
        }
        if j + r > m {
            return Err(Error::range("ray prefix too short for the window", j + r));
        }
        let window = &w.letters()[j - r..j + r];
        if let Some(hit) = self.cache.read().unwrap().get(window) {
            return Ok(hit.clone());
        }
        let g = self.geom.generators();
        let mut rel = Vec::with_capacity(2 * r + 1);
        for k in 0..=2 * r {
            let seg = Word(window[k.min(r)..k.max(r)].to_vec());
            rel.push(if k < r { g.inverse_word(&seg) } else { seg });
        }
        let hit = self.deep_witness(&rel)?;
        self.cache
            .write()
            .unwrap()
            .insert(window.to_vec(), hit.clone());
        Ok(hit)
    }

    pub fn is_transition(&self, w: &Word, j: usize, finite: bool) -> Result<bool> {
        Ok(self.deep_on_geodesic(w, j, finite)?.is_none())
    }

    /// Transition flags of the vertices `0..=|w|` of a finite geodesic word.
    pub fn transition_flags(&self, w: &Word) -> Result<Vec<bool>> {
        (0..=w.len()).map(|j| self.is_transition(w, j, true)).collect()
    }

    /// Classify vertex `v` of an arbitrary path given by its vertices.
    pub fn classify_vertex(&self, path: &[Word], v: usize) -> Result<VertexClassification> {
        let vertex = self.geom.normal_form(&path[v])?;
        let mk = |verdict| VertexClassification {
            vertex: vertex.clone(),
            index: v,
            verdict,
            eps: self.eps,
            big_r: self.big_r,
        };
        let near_end = |z: &Word| -> Result<bool> {
            crate::cayley::within(self.geom, &vertex, z, self.big_r)
        };
        if near_end(&path[0])? || near_end(path.last().unwrap())? {
            return Ok(mk(Verdict::Transition));
        }
        let g = self.geom.generators();
        let mut rel = Vec::new();
        for z in path {
            if crate::cayley::within(self.geom, &vertex, z, self.big_r)? {
                rel.push(self.geom.normal_form(&g.left_div(&vertex, z))?);
            }
        }
        match self.deep_witness(&rel)? {
            Some((i, e)) => {
                let base = self.geom.product(&vertex, &e)?;
                Ok(mk(Verdict::Deep(self.index.coset_id(self.geom, &base, i)?)))
            }
            None => Ok(mk(Verdict::Transition)),
        }
    }

    /// Independent re-check of a Deep verdict: every window vertex is within
    /// `ε` of the named coset, by direct distance computation.
    pub fn recheck_deep(&self, path: &[Word], v: usize, coset: &CosetId) -> Result<bool> {
        let vertex = self.geom.normal_form(&path[v])?;
        for z in path {
            if crate::cayley::within(self.geom, &vertex, z, self.big_r)? {
                let d = self.index.coset_distance(self.geom, z, coset)?;
                if d.hi() > self.eps {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Vertices of the geodesic path spelled by `w`, starting at `start`.
pub fn path_of<G: Geometry + ?Sized>(geom: &G, start: &Word, w: &Word) -> Result<Vec<Word>> {
    (0..=w.len())
        .map(|k| geom.product(start, &w.prefix(k)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::FreeGroup;
    use crate::relgeom::PeripheralStructure;

    fn setup() -> (FreeGroup, PeripheralIndex) {
        let f = FreeGroup::of_rank(2);
        let p = PeripheralStructure::parse("a;b", f.generators()).unwrap();
        let idx = PeripheralIndex::new(&f, &p, 16, 0).unwrap();
        (f, idx)
    }

    fn w(f: &FreeGroup, s: &str) -> Word {
        f.generators().parse_word(s).unwrap()
    }

    #[test]
    fn classify_examples() {
        let (f, idx) = setup();
        let c = Classifier::new(&f, &idx, 0, 2).unwrap();
        let path = path_of(&f, &Word::empty(), &w(&f, "a^6")).unwrap();
        let v = c.classify_vertex(&path, 3).unwrap();
        let Verdict::Deep(coset) = &v.verdict else { panic!("expected deep") };
        assert_eq!(coset.subgroup, 0);
        assert!(coset.representative.is_empty());
        assert!(c.recheck_deep(&path, 3, coset).unwrap());

        let path = path_of(&f, &Word::empty(), &w(&f, "a^5b")).unwrap();
        assert!(matches!(c.classify_vertex(&path, 3).unwrap().verdict, Verdict::Deep(_)));
        assert_eq!(c.classify_vertex(&path, 5).unwrap().verdict, Verdict::Transition);
    }

    #[test]
    fn geodesic_fast_path_agrees_with_general_path() {
        let (f, idx) = setup();
        for (eps, r) in [(0, 1), (0, 2), (1, 1), (1, 2)] {
            let c = Classifier::new(&f, &idx, eps, r).unwrap();
            for word in f.sphere(7).unwrap().iter().step_by(5) {
                let path = path_of(&f, &Word::empty(), word).unwrap();
                for j in 0..=word.len() {
                    let general = c.classify_vertex(&path, j).unwrap();
                    let fast = c.is_transition(word, j, true).unwrap();
                    assert_eq!(general.verdict == Verdict::Transition, fast);
                    if let Verdict::Deep(y) = &general.verdict {
                        assert!(c.recheck_deep(&path, j, y).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn empty_structure_is_all_transition() {
        let f = FreeGroup::of_rank(2);
        let idx = PeripheralIndex::new(&f, &PeripheralStructure::empty(), 8, 0).unwrap();
        let c = Classifier::new(&f, &idx, 0, 1).unwrap();
        assert!(c.transition_flags(&w(&f, "a^8")).unwrap().iter().all(|&t| t));
    }

    #[test]
    fn eps_one_absorbs_short_excursions() {
        let (f, idx) = setup();
        let word = w(&f, "aaabaaa");
        let c0 = Classifier::new(&f, &idx, 0, 2).unwrap();
        let c1 = Classifier::new(&f, &idx, 1, 2).unwrap();
        assert!(c0.is_transition(&word, 3, true).unwrap());
        // window {a, a², a³, a³b, a³ba}: a³ba is at distance 2 from a³<a>
        assert!(c1.is_transition(&word, 3, true).unwrap());
        let word = w(&f, "aaaabaaaa");
        let c1 = Classifier::new(&f, &idx, 1, 1).unwrap();
        // vertex a^4: window {a³, a⁴, a⁴b} all within 1 of <a>
        assert!(!c1.is_transition(&word, 4, true).unwrap());
    }
}
