use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::cylinder::{children, cylinder_mass};
use crate::cayley::{FreeGroup, Geometry};
use crate::error::{Error, Result};
use crate::words::Word;

/// Tree Busemann cocycle `B_ξ(x, y) = b_ξ(x) − b_ξ(y)` with
/// `b_ξ(x) = d(x, p_x) − d(1, p_x)`, `p_x` the projection of `x` onto the
/// ray from the identity towards `ξ`. The prefix must extend past both
/// projections.
pub fn busemann(x: &Word, y: &Word, xi_prefix: &Word, f: &FreeGroup) -> Result<i64> {
    let gens = f.generators();
    if !gens.is_freely_reduced(xi_prefix) {
        return Err(Error::input("ray prefix must be reduced"));
    }
    let b = |z: &Word| -> Result<i64> {
        let z = f.normal_form(z)?;
        let m = z.common_prefix_len(xi_prefix);
        if m >= xi_prefix.len() {
            return Err(Error::range("ray prefix too short to locate the projection", m + 1));
        }
        Ok((z.len() - m) as i64 - m as i64)
    };
    Ok(b(x)? - b(y)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConformalityRow {
    pub prefix: Word,
    pub busemann: i64,
    pub mu_identity: BigRational,
    pub mu_g: BigRational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConformalityReport {
    pub g: Word,
    pub rows: Vec<ConformalityRow>,
    pub failures: usize,
}

/// Compare `μ₁(C)/μ_g(C)` with `(2k−1)^{−B_ξ(1,g)}` on every cylinder
/// `C = [w]`, `1 ≤ |w| ≤ max_len`. Here `μ_g(E) = μ₁(g⁻¹E)`. Cylinders on
/// which the Busemann function is not constant (`w` a prefix of `g`) are
/// split until it is.
pub fn verify_conformality(g: &Word, max_len: usize, f: &FreeGroup) -> Result<ConformalityReport> {
    let gens = f.generators();
    let g = f.normal_form(g)?;
    let q = BigInt::from(2 * f.rank() as i64 - 1);
    let mut rows = Vec::new();
    let mut stack: Vec<Word> = f.ball_words(max_len)?.into_iter().filter(|w| !w.is_empty()).collect();
    stack.reverse();
    while let Some(w) = stack.pop() {
        if g.common_prefix_len(&w) >= w.len() {
            let mut kids = children(&w, f);
            kids.reverse();
            stack.extend(kids);
            continue;
        }
        let beta = busemann(&Word::empty(), &g, &w, f)?;
        let mu_identity = cylinder_mass(&w, f)?;
        let moved = f.normal_form(&gens.left_div(&g, &w))?;
        let mu_g = cylinder_mass(&moved, f)?;
        let expected = BigRational::from_integer(num_traits::pow(q.clone(), beta.unsigned_abs() as usize));
        let expected = if beta >= 0 { num_traits::Inv::inv(expected) } else { expected };
        let holds = mu_identity.clone() / mu_g.clone() == expected;
        rows.push(ConformalityRow {
            prefix: w,
            busemann: beta,
            mu_identity,
            mu_g,
            holds,
        });
    }
    let failures = rows.iter().filter(|r| !r.holds).count();
    Ok(ConformalityReport { g, rows, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        crate::words::GeneratorSet::free_rank(2).parse_word(s).unwrap()
    }

    #[test]
    fn busemann_examples() {
        let f = FreeGroup::of_rank(2);
        let ray = w("a^8");
        assert_eq!(busemann(&w("aaa"), &w(""), &ray, &f).unwrap(), -3);
        assert_eq!(busemann(&w("b"), &w(""), &ray, &f).unwrap(), 1);
        assert_eq!(busemann(&w("ab"), &w(""), &ray, &f).unwrap(), 0);
        assert!(matches!(busemann(&w("a^9"), &w(""), &ray, &f), Err(Error::Range { .. })));
    }

    /// Cocycle identity `B(x,z) = B(x,y) + B(y,z)` and antisymmetry.
    #[test]
    fn busemann_is_a_cocycle() {
        let f = FreeGroup::of_rank(2);
        let ray = w("abAbba");
        let pts = f.ball_words(2).unwrap();
        for x in &pts {
            for y in &pts {
                let bxy = busemann(x, y, &ray, &f).unwrap();
                assert_eq!(bxy, -busemann(y, x, &ray, &f).unwrap());
                for z in &pts {
                    assert_eq!(busemann(x, z, &ray, &f).unwrap(), bxy + busemann(y, z, &ray, &f).unwrap());
                }
            }
        }
    }

    #[test]
    fn conformality_examples() {
        let f = FreeGroup::of_rank(2);
        let rep = verify_conformality(&w("a"), 2, &f).unwrap();
        assert_eq!(rep.failures, 0);
        let ab = rep.rows.iter().find(|r| r.prefix == w("ab")).unwrap();
        assert_eq!(ab.busemann, 1);
        assert_eq!(ab.mu_identity, BigRational::new(1.into(), 12.into()));
        assert_eq!(ab.mu_g, BigRational::new(1.into(), 4.into()));
        let big_a = rep.rows.iter().find(|r| r.prefix == w("A")).unwrap();
        assert_eq!(big_a.busemann, -1);
        assert_eq!(big_a.mu_identity.clone() / big_a.mu_g.clone(), BigRational::from_integer(3.into()));
        // [a] itself is split: β is not constant on it
        assert!(rep.rows.iter().all(|r| r.prefix != w("a")));
        let id = verify_conformality(&w(""), 3, &f).unwrap();
        assert!(id.rows.iter().all(|r| r.busemann == 0 && r.mu_identity == r.mu_g));
    }
}
