use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cayley::{FreeGroup, Geometry};
use crate::error::{Error, Result};
use crate::words::Word;

/// `μ₁([w]) = 1/(2k) · (2k−1)^{−(|w|−1)}`, and 1 for the full boundary.
pub fn cylinder_mass(prefix: &Word, f: &FreeGroup) -> Result<BigRational> {
    let gens = f.generators();
    gens.check(prefix)?;
    if !gens.is_freely_reduced(prefix) {
        return Err(Error::input(format!("cylinder prefix {} is not reduced", gens.format(prefix))));
    }
    if prefix.is_empty() {
        return Ok(BigRational::one());
    }
    let k = f.rank() as i64;
    let den = BigInt::from(2 * k) * num_traits::pow(BigInt::from(2 * k - 1), prefix.len() - 1);
    Ok(BigRational::new(BigInt::one(), den))
}

/// The reduced one-letter extensions of `w`: `2k` for the empty word,
/// `2k − 1` otherwise.
pub fn children(w: &Word, f: &FreeGroup) -> Vec<Word> {
    let gens = f.generators();
    let back = w.last().map(|l| gens.inverse(l));
    gens.letters().filter(|&s| Some(s) != back).map(|s| w.pushed(s)).collect()
}

/// Sum of cylinder masses (the cylinders are assumed disjoint).
pub fn total_mass(cylinders: &[Word], f: &FreeGroup) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for c in cylinders {
        total += cylinder_mass(c, f)?;
    }
    Ok(total)
}

/// Finite-ball approximation of the Patterson measure at the identity:
/// `Σ_{h ∈ B(1,N), h ∈ [w]} e^{−s|h|} / Σ_{h ∈ B(1,N)} e^{−s|h|}`, with the
/// count of length-`n` elements under `[w]` equal to `(2k−1)^{n−|w|}`.
pub fn patterson_cylinder_mass(prefix: &Word, s: f64, n_max: usize, f: &FreeGroup) -> f64 {
    let q = (2 * f.rank() - 1) as f64;
    let first = 2.0 * f.rank() as f64;
    let mut num = 0.0;
    let mut den = 1.0;
    for n in 1..=n_max {
        // log-space: counts grow like q^n while weights decay like e^{-sn}
        let sphere = (first.ln() + (n - 1) as f64 * q.ln() - s * n as f64).exp();
        den += sphere;
        if n >= prefix.len() {
            let under = if prefix.is_empty() {
                sphere
            } else {
                ((n - prefix.len()) as f64 * q.ln() - s * n as f64).exp()
            };
            num += under;
        }
    }
    if prefix.is_empty() {
        num += 1.0;
    }
    num / den
}
