use num_traits::Float;
use serde::Serialize;

use super::Ball;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Growth-rate estimators from exact sphere counts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthEstimate<T> {
    /// `ln(♯N(1,n))/n` for `n = 1..=R`.
    pub per_radius_log: Vec<T>,
    /// `ln(♯Sⁿ/♯Sⁿ⁻¹)` for `n = 1..=R`.
    pub ratio_log: Vec<T>,
    /// Headline: the sphere ratio at the largest radius.
    pub reported: T,
    pub method: &'static str,
}

pub const RATIO_METHOD: &str = "sphere-ratio ln(#S_R/#S_(R-1))";

pub fn growth_estimate<T: Float>(b: &Ball) -> Result<GrowthEstimate<T>> {
    growth_from_spheres(&b.sphere_sizes())
}

/// Estimators from a sphere-size sequence `♯S⁰, ♯S¹, …`.
pub fn growth_from_spheres<T: Float>(spheres: &[usize]) -> Result<GrowthEstimate<T>> {
    if spheres.len() < 2 {
        return Err(Error::range("growth estimate needs radius at least 1", 1));
    }
    let conv = |x: usize| T::from(x).expect("count fits in the float type");
    let mut per_radius_log = Vec::new();
    let mut ratio_log = Vec::new();
    let mut ball = spheres[0];
    for n in 1..spheres.len() {
        ball += spheres[n];
        per_radius_log.push(conv(ball).ln() / conv(n));
        ratio_log.push(if spheres[n - 1] == 0 {
            T::nan()
        } else {
            (conv(spheres[n]) / conv(spheres[n - 1])).ln()
        });
    }
    Ok(GrowthEstimate {
        reported: *ratio_log.last().unwrap(),
        per_radius_log,
        ratio_log,
        method: RATIO_METHOD,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PoincareVerdict {
    Diverging,
    Converging,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoincareReport<T> {
    /// `Σ_{d(1,g) ≤ n} q^{d(1,g)}` for `n = 0..=R`.
    pub partial_sums: Vec<T>,
    pub verdict: PoincareVerdict,
    /// Ratio of the last two sphere terms.
    pub tail_ratio: f64,
    /// For a converging tail, the partial sum plus the geometric tail
    /// extrapolated from `tail_ratio`.
    pub extrapolated: Option<f64>,
    pub method: &'static str,
}

pub const POINCARE_METHOD: &str =
    "tail ratio rho of sphere terms: rho >= 0.99 diverging, rho <= 0.9 converging (geometric tail)";

/// Partial Poincaré sums for sphere counts and decay `q = e^{-s}`. Using an
/// exact `q` (e.g. 1/3 as a rational) gives exact partial sums.
pub fn poincare_from_counts<T: Scalar>(counts: &[usize], q: T) -> PoincareReport<T> {
    let mut terms = Vec::with_capacity(counts.len());
    let mut qk = T::one();
    for &c in counts {
        terms.push(T::from_int(c as i64) * qk.clone());
        qk = qk * q.clone();
    }
    let mut partial_sums = Vec::with_capacity(terms.len());
    let mut acc = T::zero();
    for t in &terms {
        acc = acc + t.clone();
        partial_sums.push(acc.clone());
    }
    let n = terms.len();
    let tail_ratio = if n >= 2 && terms[n - 2].to_f64() > 0.0 {
        terms[n - 1].to_f64() / terms[n - 2].to_f64()
    } else {
        f64::NAN
    };
    let verdict = if tail_ratio >= 0.99 {
        PoincareVerdict::Diverging
    } else if tail_ratio <= 0.9 || terms.last().is_some_and(|t| t.to_f64() == 0.0) {
        PoincareVerdict::Converging
    } else {
        PoincareVerdict::Inconclusive
    };
    let extrapolated = (verdict == PoincareVerdict::Converging).then(|| {
        let last = terms.last().map_or(0.0, |t| t.to_f64());
        let rho = if tail_ratio.is_nan() { 0.0 } else { tail_ratio };
        acc.to_f64() + last * rho / (1.0 - rho)
    });
    PoincareReport {
        partial_sums,
        verdict,
        tail_ratio,
        extrapolated,
        method: POINCARE_METHOD,
    }
}

/// Poincaré partial sums of the ball at exponent `s ≥ 0`.
pub fn poincare_partial(b: &Ball, s: f64) -> Result<PoincareReport<f64>> {
    if !(s >= 0.0) {
        return Err(Error::input("poincare exponent must be non-negative"));
    }
    Ok(poincare_from_counts(&b.sphere_sizes(), (-s).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_ball, Budget};
    use crate::words::Presentation;
    use num_rational::BigRational;

    #[test]
    fn free_group_ratios_are_ln3() {
        let b = build_ball(&Presentation::free(2), 10, &Budget::unlimited()).unwrap();
        let est: GrowthEstimate<f64> = growth_estimate(&b).unwrap();
        assert_eq!(est.ratio_log[0], 4f64.ln());
        assert!(est.ratio_log[1..].iter().all(|&r| r == 3f64.ln()));
        assert_eq!(est.reported, 3f64.ln());
        let ball10 = 1 + 2 * (3usize.pow(10) - 1);
        assert_eq!(est.per_radius_log[9], (ball10 as f64).ln() / 10.0);
        let single: GrowthEstimate<f32> = growth_from_spheres(&[1, 4]).unwrap();
        assert_eq!(single.ratio_log, vec![4f32.ln()]);
        assert!(growth_from_spheres::<f64>(&[1]).is_err());
    }

    #[test]
    fn exact_poincare_sums() {
        let counts = [1, 4, 12, 36, 108, 324];
        let third = BigRational::from_ratio(1, 3);
        let r = poincare_from_counts(&counts, third.clone());
        for (n, s) in r.partial_sums.iter().enumerate() {
            let expected = BigRational::from_int(1)
                + BigRational::from_ratio(4, 3) * BigRational::from_int(n as i64);
            assert_eq!(*s, expected);
        }
        assert_eq!(r.verdict, PoincareVerdict::Diverging);

        let r = poincare_from_counts(&[1, 4, 12, 36, 108, 324, 972, 2916], third.clone() * third);
        assert_eq!(r.verdict, PoincareVerdict::Converging);
        assert!((r.extrapolated.unwrap() - 5.0 / 3.0).abs() < 1e-12);

        // the subgroup ⟨a⟩: two elements per length
        let mut sub = vec![1];
        sub.extend(std::iter::repeat_n(2, 20));
        let r = poincare_from_counts(&sub, 1.0f64 / 3.0);
        assert_eq!(r.verdict, PoincareVerdict::Converging);
        assert!((r.extrapolated.unwrap() - 2.0).abs() < 1e-12);
    }
}
