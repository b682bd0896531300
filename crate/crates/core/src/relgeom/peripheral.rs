use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::cayley::Geometry;
use crate::error::{Error, Result};
use crate::words::{GeneratorSet, Word};

/// Finitely generated subgroups whose left cosets form the peripheral family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeripheralStructure {
    pub labels: Vec<String>,
    pub subgroups: Vec<Vec<Word>>,
}

impl PeripheralStructure {
    pub fn empty() -> Self {
        Self {
            labels: Vec::new(),
            subgroups: Vec::new(),
        }
    }

    /// Parse `"a;b"`: subgroups separated by `;`, generator words inside a
    /// subgroup separated by `,` or whitespace. An empty string is the empty
    /// structure.
    pub fn parse(text: &str, gens: &GeneratorSet) -> Result<Self> {
        let mut out = Self::empty();
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let words = part
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| gens.parse_word(s).map(|w| gens.mul(&Word::empty(), &w)))
                .collect::<Result<Vec<_>>>()?;
            out.labels.push(format!("<{part}>"));
            out.subgroups.push(words);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    /// Every subgroup generator must be nontrivial.
    pub fn validate<G: Geometry + ?Sized>(&self, geom: &G) -> Result<()> {
        for (label, gens) in self.labels.iter().zip(&self.subgroups) {
            if gens.is_empty() {
                return Err(Error::input(format!("subgroup {label} has no generators")));
            }
            for w in gens {
                if geom.normal_form(w)?.is_empty() {
                    return Err(Error::input(format!("subgroup {label} has a trivial generator")));
                }
            }
        }
        Ok(())
    }
}

/// A peripheral coset `x·P_i`, named by its shortlex-minimal element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CosetId {
    pub subgroup: usize,
    pub representative: Word,
}

/// Distance to a coset: exact, or an interval when the subgroup
/// enumeration is too short to certify the minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DistanceBound {
    Exact(usize),
    Interval { lo: usize, hi: usize },
}

impl DistanceBound {
    pub fn hi(&self) -> usize {
        match *self {
            DistanceBound::Exact(d) => d,
            DistanceBound::Interval { hi, .. } => hi,
        }
    }

    pub fn lo(&self) -> usize {
        match *self {
            DistanceBound::Exact(d) => d,
            DistanceBound::Interval { lo, .. } => lo,
        }
    }
}

/// `P_i ∩ B(1, bound)` for every peripheral subgroup, as canonical words.
#[derive(Clone, Debug)]
pub struct PeripheralIndex {
    structure: PeripheralStructure,
    bound: usize,
    elements: Vec<Vec<Word>>,
    members: Vec<HashSet<Word>>,
}

impl PeripheralIndex {
    /// Enumerate each subgroup by breadth-first search on products of its
    /// generators, keeping intermediate elements of length at most
    /// `bound + slack`. With `slack` at least the subgroup's quasi-convexity
    /// constant the enumeration is complete; for cyclic subgroups of free
    /// groups `slack = 0` already is.
    pub fn new<G: Geometry + ?Sized>(
        geom: &G,
        structure: &PeripheralStructure,
        bound: usize,
        slack: usize,
    ) -> Result<Self> {
        structure.validate(geom)?;
        let cap = bound + slack;
        let g = geom.generators();
        let mut elements = Vec::new();
        let mut members = Vec::new();
        for gens in &structure.subgroups {
            let mut steps: Vec<Word> = gens.clone();
            steps.extend(gens.iter().map(|w| g.inverse_word(w)));
            let mut seen: HashSet<Word> = HashSet::from([Word::empty()]);
            let mut frontier = vec![Word::empty()];
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for x in &frontier {
                    for s in &steps {
                        let y = match geom.product(x, s) {
                            Ok(y) => y,
                            Err(Error::Range { .. }) => continue,
                            Err(e) => return Err(e),
                        };
                        if y.len() <= cap && seen.insert(y.clone()) {
                            next.push(y);
                        }
                    }
                }
                frontier = next;
            }
            let mut list: Vec<Word> = seen.into_iter().filter(|w| w.len() <= bound).collect();
            list.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            members.push(list.iter().cloned().collect());
            elements.push(list);
        }
        Ok(Self {
            structure: structure.clone(),
            bound,
            elements,
            members,
        })
    }

    pub fn structure(&self) -> &PeripheralStructure {
        &self.structure
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `P_i ∩ B(1, bound)` in shortlex order.
    pub fn elements(&self, i: usize) -> &[Word] {
        &self.elements[i]
    }

    /// Membership of a canonical word in `P_i`.
    pub fn contains(&self, i: usize, x: &Word) -> Result<bool> {
        if x.len() > self.bound {
            return Err(Error::range("subgroup enumeration too short", x.len()));
        }
        Ok(self.members[i].contains(x))
    }

    /// Canonical name of `x·P_i`: the shortlex-minimal element among
    /// `x·p` with `|p| ≤ 2|x|` (every shorter coset element has this form).
    pub fn coset_id<G: Geometry + ?Sized>(&self, geom: &G, x: &Word, i: usize) -> Result<CosetId> {
        let x = geom.normal_form(x)?;
        let limit = 2 * x.len();
        let mut best = x.clone();
        for p in self.elements[i].iter().take_while(|p| p.len() <= limit) {
            let y = match geom.product(&x, p) {
                Ok(y) => y,
                Err(Error::Range { .. }) => continue,
                Err(e) => return Err(e),
            };
            if (y.len(), &y) < (best.len(), &best) {
                best = y;
            }
        }
        Ok(CosetId {
            subgroup: i,
            representative: best,
        })
    }

    /// Do two coset names denote the same coset? Decided by membership of
    /// `rep₁⁻¹·rep₂` in the subgroup.
    pub fn same_coset<G: Geometry + ?Sized>(&self, geom: &G, a: &CosetId, b: &CosetId) -> Result<bool> {
        if a.subgroup != b.subgroup {
            return Ok(false);
        }
        let d = geom.normal_form(&geom.generators().left_div(&a.representative, &b.representative))?;
        self.contains(a.subgroup, &d)
    }

    /// `d(x, c)`. Exact when the enumeration covers `B(1, 2|x⁻¹·rep|)`;
    /// otherwise elements beyond the bound are at least
    /// `bound + 1 − |x⁻¹·rep|` away, giving a certified lower bound.
    pub fn coset_distance<G: Geometry + ?Sized>(&self, geom: &G, x: &Word, c: &CosetId) -> Result<DistanceBound> {
        let z = geom.normal_form(&geom.generators().left_div(x, &c.representative))?;
        let mut hi = z.len();
        for p in &self.elements[c.subgroup] {
            if p.len() > 2 * z.len() {
                break;
            }
            if let Ok(y) = geom.product(&z, p) {
                hi = hi.min(y.len());
            }
        }
        if self.bound >= 2 * z.len() {
            Ok(DistanceBound::Exact(hi))
        } else {
            let lo = hi.min((self.bound + 1).saturating_sub(z.len()));
            if lo == hi {
                Ok(DistanceBound::Exact(hi))
            } else {
                Ok(DistanceBound::Interval { lo, hi })
            }
        }
    }

    /// Cosets `v·e·P_i` with `e ∈ B(1, ε)`, deduplicated.
    pub fn cosets_near<G: Geometry + ?Sized>(&self, geom: &G, v: &Word, eps: usize) -> Result<Vec<CosetId>> {
        let mut out = BTreeSet::new();
        for e in geom.ball_words(eps)? {
            let x = geom.product(v, &e)?;
            for i in 0..self.len() {
                out.insert(self.coset_id(geom, &x, i)?);
            }
        }
        Ok(out.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::FreeGroup;

    fn setup() -> (FreeGroup, PeripheralIndex) {
        let f = FreeGroup::of_rank(2);
        let p = PeripheralStructure::parse("a;b", f.generators()).unwrap();
        let idx = PeripheralIndex::new(&f, &p, 12, 0).unwrap();
        (f, idx)
    }

    fn w(f: &FreeGroup, s: &str) -> Word {
        f.generators().parse_word(s).unwrap()
    }

    #[test]
    fn parse_structures() {
        let f = FreeGroup::of_rank(2);
        let p = PeripheralStructure::parse("a; ab, ba", f.generators()).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.subgroups[1].len(), 2);
        assert!(PeripheralStructure::parse("", f.generators()).unwrap().is_empty());
        assert!(PeripheralStructure::parse("aA", f.generators()).unwrap().validate(&f).is_err());
        assert!(PeripheralStructure::parse("x", f.generators()).is_err());
    }

    #[test]
    fn cyclic_subgroup_enumeration() {
        let (_, idx) = setup();
        assert_eq!(idx.elements(0).len(), 25);
        assert!(idx.elements(0).iter().all(|x| x.letters().iter().all(|&l| l < 2)));
    }

    #[test]
    fn coset_distance_examples() {
        let (f, idx) = setup();
        let a = idx.coset_id(&f, &Word::empty(), 0).unwrap();
        assert_eq!(idx.coset_distance(&f, &w(&f, "aaa"), &a).unwrap(), DistanceBound::Exact(0));
        assert_eq!(idx.coset_distance(&f, &w(&f, "aaab"), &a).unwrap(), DistanceBound::Exact(1));
        assert_eq!(idx.coset_distance(&f, &w(&f, "(ab)^3"), &a).unwrap(), DistanceBound::Exact(5));
    }

    /// Brute-force distance to ⟨a⟩: min over a^k, |k| ≤ 20.
    #[test]
    fn coset_distance_matches_brute_force() {
        let (f, idx) = setup();
        let a = idx.coset_id(&f, &Word::empty(), 0).unwrap();
        for x in f.ball_words(4).unwrap() {
            let brute = (-20i32..=20)
                .map(|k| {
                    let p = if k >= 0 { Word(vec![0; k as usize]) } else { Word(vec![1; (-k) as usize]) };
                    f.distance(&x, &p).unwrap()
                })
                .min()
                .unwrap();
            assert_eq!(idx.coset_distance(&f, &x, &a).unwrap(), DistanceBound::Exact(brute));
        }
    }

    #[test]
    fn coset_names_are_canonical() {
        let (f, idx) = setup();
        let c1 = idx.coset_id(&f, &w(&f, "baaa"), 0).unwrap();
        let c2 = idx.coset_id(&f, &w(&f, "bA"), 0).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(c1.representative, w(&f, "b"));
        assert!(idx.same_coset(&f, &c1, &c2).unwrap());
        let c3 = idx.coset_id(&f, &w(&f, "ba"), 1).unwrap();
        assert!(!idx.same_coset(&f, &c1, &c3).unwrap());
    }

    #[test]
    fn short_enumeration_gives_interval() {
        let f = FreeGroup::of_rank(2);
        let p = PeripheralStructure::parse("a", f.generators()).unwrap();
        let idx = PeripheralIndex::new(&f, &p, 2, 0).unwrap();
        let c = idx.coset_id(&f, &Word::empty(), 0).unwrap();
        // d(a^4 b, <a>) = 1, but a^4 is not enumerated
        let d = idx.coset_distance(&f, &w(&f, "aaaab"), &c).unwrap();
        assert!(d.lo() <= 1 && d.hi() >= 1);
        assert!(matches!(d, DistanceBound::Interval { .. }));
    }
}
