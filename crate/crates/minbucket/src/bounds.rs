//! Analytic cost bounds for the enumeration algorithms, and the limit
//! constant that the per-vertex bucketing work converges to.
//!
//! For a degree sequence d₁…dₙ with m edges, the baseline's work is
//! bounded by Σ dᵥ² and the bucketing algorithm's expected work by
//! n + m⁻²·(Σ dᵥ^{4/3})³. On power-law sequences with exponent α both
//! bounds turn into explicit growth exponents, and for α > 7/3 the
//! expected bucketing work per vertex converges to a finite constant
//!
//! C = (1 / 2·E[d]²) · Σₜ t(t−1)·f(t)·S(t)²,   S(t) = Σ_{s≥t} s·f(s),
//!
//! which this module evaluates with certified error brackets: exactly
//! for finite-support distributions, and by Euler–Maclaurin tail
//! expansion for the untruncated power law.

use crate::degrees::{DegreeSequence, ReferenceDistribution, MAX_TABULATED_CAP};
use crate::error::{Error, Result};
use crate::zeta::{hurwitz_zeta, riemann_zeta};

/// A value known to lie inside [lower, upper].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitConstant {
    /// Midpoint estimate.
    pub value: f64,
    /// Certified lower bound.
    pub lower: f64,
    /// Certified upper bound.
    pub upper: f64,
}

/// Growth of expected work as n → ∞, relative to linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthClass {
    /// Expected work is O(n).
    Linear,
    /// Expected work carries an extra n^excess factor.
    Superlinear {
        /// The positive excess exponent over linear.
        excess: f64,
    },
}

/// Growth exponents implied by a power-law degree distribution with
/// parameter α: the baseline's second moment diverges like t^{3−α} and
/// the bucketing bound's 4/3-moment cube like t^{7−3α}, so those are the
/// excess exponents over linear growth (nonpositive means the moment
/// converges and the algorithm is linear in expectation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawPrediction {
    /// The power-law exponent the prediction is for.
    pub alpha: f64,
    /// Excess exponent of the baseline bound: 3 − α.
    pub trivial_excess: f64,
    /// Excess exponent of the bucketing bound: 7 − 3α.
    pub minbucket_excess: f64,
}

impl PowerLawPrediction {
    /// Growth class of the baseline bound.
    pub fn trivial_growth(&self) -> GrowthClass {
        classify(self.trivial_excess)
    }

    /// Growth class of the bucketing bound.
    pub fn minbucket_growth(&self) -> GrowthClass {
        classify(self.minbucket_excess)
    }

    /// Excess exponents when degrees are capped at n^gamma: a divergent
    /// moment integrates only up to the cap, scaling each positive
    /// excess by gamma. Returns (baseline, bucketing).
    pub fn excess_with_cap(&self, gamma: f64) -> (f64, f64) {
        (
            (gamma * self.trivial_excess).max(0.0),
            (gamma * self.minbucket_excess).max(0.0),
        )
    }
}

fn classify(excess: f64) -> GrowthClass {
    if excess <= 0.0 {
        GrowthClass::Linear
    } else {
        GrowthClass::Superlinear { excess }
    }
}

/// Baseline cost bound Σᵥ dᵥ², computed exactly.
pub fn trivial_bound(seq: &DegreeSequence) -> u128 {
    seq.degrees()
        .iter()
        .map(|&d| (d as u128) * (d as u128))
        .sum()
}

/// Bucketing cost bound n + m⁻²·(Σᵥ dᵥ^{4/3})³.
///
/// The 4/3-power sum runs over runs of equal degrees (the sequence is
/// sorted) with Kahan compensation, so million-vertex sequences cost a
/// handful of `powf` calls and no precision loss.
pub fn minbucket_bound(seq: &DegreeSequence) -> f64 {
    let mut sum = KahanSum::new();
    let degrees = seq.degrees();
    let mut i = 0;
    while i < degrees.len() {
        let d = degrees[i];
        let mut j = i + 1;
        while j < degrees.len() && degrees[j] == d {
            j += 1;
        }
        sum.add((j - i) as f64 * (d as f64).powf(4.0 / 3.0));
        i = j;
    }
    let m = seq.m() as f64;
    seq.n() as f64 + sum.value().powi(3) / (m * m)
}

/// Growth exponents for a power-law degree distribution; α must lie in
/// (1, 4).
pub fn power_law_predictions(alpha: f64) -> Result<PowerLawPrediction> {
    if !alpha.is_finite() || alpha <= 1.0 || alpha >= 4.0 {
        return Err(Error::Parameter(format!(
            "power-law exponent must lie in (1, 4), got {alpha}"
        )));
    }
    Ok(PowerLawPrediction {
        alpha,
        trivial_excess: 3.0 - alpha,
        minbucket_excess: 7.0 - 3.0 * alpha,
    })
}

/// Aggregated bound report for a sequence and/or a power-law parameter,
/// as emitted by the command line `bounds` subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// Power-law exponent the predictions refer to, if one was given.
    pub alpha: Option<f64>,
    /// Σ dᵥ² for the supplied sequence.
    pub trivial_bound: Option<u128>,
    /// n + m⁻²·(Σ d^{4/3})³ for the supplied sequence.
    pub minbucket_bound: Option<f64>,
    /// (3 − α, 7 − 3α) when α was given.
    pub power_law_exponents: Option<(f64, f64)>,
    /// The limit constant, when α > 7/3 makes it finite.
    pub limit_constant: Option<LimitConstant>,
}

impl BoundReport {
    /// Bounds for a concrete degree sequence.
    pub fn for_sequence(seq: &DegreeSequence) -> BoundReport {
        BoundReport {
            alpha: None,
            trivial_bound: Some(trivial_bound(seq)),
            minbucket_bound: Some(minbucket_bound(seq)),
            power_law_exponents: None,
            limit_constant: None,
        }
    }

    /// Predictions for a power-law exponent: growth exponents always,
    /// plus the limit constant when it is finite (α > 7/3).
    pub fn for_power_law(alpha: f64, tol: f64) -> Result<BoundReport> {
        let prediction = power_law_predictions(alpha)?;
        let constant = if alpha > 7.0 / 3.0 {
            Some(limit_constant(
                &ReferenceDistribution::power_law(alpha)?,
                tol,
            )?)
        } else {
            None
        };
        Ok(BoundReport {
            alpha: Some(alpha),
            trivial_bound: None,
            minbucket_bound: None,
            power_law_exponents: Some((prediction.trivial_excess, prediction.minbucket_excess)),
            limit_constant: constant,
        })
    }

    /// Adds sequence bounds to a power-law report (or vice versa).
    pub fn with_sequence(mut self, seq: &DegreeSequence) -> BoundReport {
        self.trivial_bound = Some(trivial_bound(seq));
        self.minbucket_bound = Some(minbucket_bound(seq));
        self
    }
}

/// The limiting expected bucketing work per vertex for i.i.d. degrees
/// drawn from `dist`, with a certified bracket of relative width ≤ tol.
///
/// Finite-support distributions (tables, truncated power laws) are
/// summed exactly. The untruncated power law needs α > 7/3 for the sum
/// to converge; its tail is bracketed through an Euler–Maclaurin
/// expansion of the suffix sums, with the expansion remainder carried
/// into the bounds.
pub fn limit_constant(dist: &ReferenceDistribution, tol: f64) -> Result<LimitConstant> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Parameter(format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    match dist.support_bound() {
        Some(bound) => {
            if bound > MAX_TABULATED_CAP {
                return Err(Error::Resource(format!(
                    "support bound {bound} too large for exact summation \
                     (limit {MAX_TABULATED_CAP})"
                )));
            }
            Ok(finite_limit_constant(dist, bound))
        }
        None => {
            let alpha = dist
                .alpha()
                .expect("unbounded support implies the parametric form");
            untruncated_limit_constant(alpha, tol)
        }
    }
}

/// Exact evaluation over a finite support by backward suffix sums.
fn finite_limit_constant(dist: &ReferenceDistribution, bound: u64) -> LimitConstant {
    let mut suffix = KahanSum::new(); // S(t) = Σ_{s≥t} s f(s)
    let mut numer = KahanSum::new(); // Σ t(t−1) f(t) S(t)²
    for t in (1..=bound).rev() {
        let f = dist.pmf_truncated(t);
        let tf = t as f64;
        suffix.add(tf * f);
        let s_t = suffix.value();
        numer.add(tf * (tf - 1.0) * f * s_t * s_t);
    }
    let mean = suffix.value();
    let value = numer.value() / (2.0 * mean * mean);
    // The only inexactness is f64 roundoff in the sums themselves.
    let slack = 1e-12 * value.abs();
    LimitConstant {
        value,
        lower: value - slack,
        upper: value + slack,
    }
}

/// Bracketed evaluation for the untruncated power law f(t) ∝ t^{−α}.
///
/// Writing H(t) = ζ(α−1, t) for the unnormalized suffix sum, the
/// constant is C = U / (2·ζ(α)·ζ(α−1)²) with
/// U = Σₜ (t² − t)·t^{−α}·H(t)². The head t ≤ T is summed exactly
/// (H by backward recurrence from one ζ evaluation at T+1). For t > T,
/// H(t) is sandwiched between g(t) ∓ ρ(t), where g is the four-term
/// Euler–Maclaurin expansion of ζ(α−1, t) and ρ the first omitted term;
/// expanding (g ∓ ρ)² into monomials c·t^p turns the tail into a short
/// linear combination of Hurwitz zetas, each requiring 3α − 6 > 1 —
/// exactly the α > 7/3 convergence threshold.
fn untruncated_limit_constant(alpha: f64, tol: f64) -> Result<LimitConstant> {
    if alpha <= 7.0 / 3.0 {
        return Err(Error::Divergent(format!(
            "the limit constant diverges for α ≤ 7/3, got α = {alpha}"
        )));
    }
    let s1 = alpha - 1.0;
    let z = riemann_zeta(alpha);
    let t1 = riemann_zeta(s1);
    let denom = 2.0 * z * t1 * t1;

    let mut t_max = 64u64;
    loop {
        let (u_lo, u_hi) = bracket_u_sum(alpha, s1, t_max);
        let lower = u_lo / denom;
        let upper = u_hi / denom;
        let mid = 0.5 * (lower + upper);
        if upper - lower <= tol * mid.abs() || t_max >= (1 << 22) {
            // Cover f64 roundoff in the zeta evaluations themselves.
            let slack = 1e-13 * mid.abs();
            return Ok(LimitConstant {
                value: mid,
                lower: lower - slack,
                upper: upper + slack,
            });
        }
        t_max *= 2;
    }
}

/// Brackets U = Σ_{t≥1} (t²−t)·t^{−α}·H(t)² by exact head + expanded tail.
fn bracket_u_sum(alpha: f64, s1: f64, t_max: u64) -> (f64, f64) {
    // Head: exact backward recurrence H(t) = H(t+1) + t^{1−α+... }
    let mut head = KahanSum::new();
    let mut h = hurwitz_zeta(s1, (t_max + 1) as f64);
    for t in (1..=t_max).rev() {
        let tf = t as f64;
        h += tf.powf(-s1);
        let w = tf.powf(2.0 - alpha) - tf.powf(1.0 - alpha);
        head.add(w * h * h);
    }

    // Tail: H(t) ∈ [g(t) − ρ(t), g(t) + ρ(t)] for t > t_max.
    let g = [
        (1.0 / (s1 - 1.0), 1.0 - s1),
        (0.5, -s1),
        (s1 / 12.0, -s1 - 1.0),
        (-s1 * (s1 + 1.0) * (s1 + 2.0) / 720.0, -s1 - 3.0),
    ];
    let rho = (
        s1 * (s1 + 1.0) * (s1 + 2.0) * (s1 + 3.0) * (s1 + 4.0) / 30240.0,
        -s1 - 5.0,
    );

    let mut lo_poly: Vec<(f64, f64)> = g.to_vec();
    lo_poly.push((-rho.0, rho.1));
    let mut hi_poly: Vec<(f64, f64)> = g.to_vec();
    hi_poly.push((rho.0, rho.1));

    let tail = |poly: &[(f64, f64)]| -> f64 {
        // Σ_{t>T} (t^{2−α} − t^{1−α}) · (Σᵢ cᵢ t^{eᵢ})², expanded into
        // monomials and summed in closed form.
        let base = (t_max + 1) as f64;
        let mut sum = KahanSum::new();
        for (i, &(ci, ei)) in poly.iter().enumerate() {
            for (j, &(cj, ej)) in poly.iter().enumerate().skip(i) {
                let c = if i == j { ci * cj } else { 2.0 * ci * cj };
                let e = ei + ej;
                sum.add(
                    c * (hurwitz_zeta(alpha - 2.0 - e, base)
                        - hurwitz_zeta(alpha - 1.0 - e, base)),
                );
            }
        }
        sum.value()
    };

    // (g − ρ)² underestimates H² and (g + ρ)² overestimates it, and the
    // weight w(t) = t^{2−α} − t^{1−α} is nonnegative, so the two tail
    // sums bracket the true tail.
    let lo = head.value() + tail(&lo_poly);
    let hi = head.value() + tail(&hi_poly);
    (lo.min(hi), lo.max(hi))
}

/// Compensated (Kahan) accumulator.
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn new() -> Self {
        KahanSum { sum: 0.0, carry: 0.0 }
    }

    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degrees::DegreeSequence;
    use approx::assert_relative_eq;

    fn seq(degrees: &[u32]) -> DegreeSequence {
        DegreeSequence::from_degrees(degrees.to_vec()).unwrap()
    }

    fn power_law(alpha: f64) -> ReferenceDistribution {
        ReferenceDistribution::power_law(alpha).unwrap()
    }

    #[test]
    fn trivial_bound_hand_values() {
        assert_eq!(trivial_bound(&seq(&[2, 2, 2])), 12);
        assert_eq!(trivial_bound(&seq(&[3, 1, 1, 1])), 12);
    }

    #[test]
    fn minbucket_bound_hand_values() {
        // Degrees (2,2,2): m = 3, Σ d^{4/3} = 3·2^{4/3}, whose cube is
        // exactly 27·16 = 432, so the bound is 3 + 432/9 = 51.
        assert_relative_eq!(minbucket_bound(&seq(&[2, 2, 2])), 51.0, max_relative = 1e-12);
        // All-ones: Σ d^{4/3} = n, m = n/2, bound = n + 4n = 5n.
        assert_relative_eq!(minbucket_bound(&seq(&[1; 10])), 50.0, max_relative = 1e-12);
        assert_relative_eq!(minbucket_bound(&seq(&[1, 1])), 10.0, max_relative = 1e-12);
    }

    #[test]
    fn prediction_exponents() {
        let p = power_law_predictions(2.4).unwrap();
        assert_relative_eq!(p.trivial_excess, 0.6, max_relative = 1e-12);
        assert_relative_eq!(p.minbucket_excess, -0.2, max_relative = 1e-9);
        assert!(matches!(p.trivial_growth(), GrowthClass::Superlinear { .. }));
        assert_eq!(p.minbucket_growth(), GrowthClass::Linear);

        // At the 7/3 threshold the excess is zero up to f64 rounding,
        // which classifies as linear.
        let boundary = power_law_predictions(7.0 / 3.0).unwrap();
        assert!(boundary.minbucket_excess <= 0.0);
        assert_eq!(boundary.minbucket_growth(), GrowthClass::Linear);

        // At α = 3 the baseline's second moment stops diverging.
        let three = power_law_predictions(3.0).unwrap();
        assert!(three.trivial_excess <= 0.0);
        assert_eq!(three.trivial_growth(), GrowthClass::Linear);

        // α = 2.3 capped at √n: the bucketing bound carries n^{0.05}.
        let p = power_law_predictions(2.3).unwrap();
        let (triv, mb) = p.excess_with_cap(0.5);
        assert_relative_eq!(triv, 0.35, max_relative = 1e-9);
        assert_relative_eq!(mb, 0.05, max_relative = 1e-9);

        assert!(power_law_predictions(1.0).is_err());
        assert!(power_law_predictions(4.0).is_err());
        assert!(power_law_predictions(f64::NAN).is_err());
    }

    #[test]
    fn limit_constant_hand_distributions() {
        // All mass on degree 1: no wedges ever, C = 0.
        let d1 = ReferenceDistribution::from_table(vec![1.0]).unwrap();
        assert_eq!(limit_constant(&d1, 1e-9).unwrap().value, 0.0);

        // Point mass on 2: S(2) = 2, numerator 2·1·1·4 = 8, mean 2,
        // C = 8/(2·4) = 1.
        let d2 = ReferenceDistribution::from_table(vec![0.0, 1.0]).unwrap();
        assert_relative_eq!(limit_constant(&d2, 1e-9).unwrap().value, 1.0, max_relative = 1e-13);

        // Point mass on 3: C = 3·2·9/(2·9) = 3.
        let d3 = ReferenceDistribution::from_table(vec![0.0, 0.0, 1.0]).unwrap();
        assert_relative_eq!(limit_constant(&d3, 1e-9).unwrap().value, 3.0, max_relative = 1e-13);

        // Uniform on {1, 2}: S(2) = 1, S(1) = 3/2, numerator 2·1·½·1 = 1,
        // mean 3/2, C = 1/(2·9/4) = 2/9.
        let u = ReferenceDistribution::from_table(vec![0.5, 0.5]).unwrap();
        assert_relative_eq!(
            limit_constant(&u, 1e-9).unwrap().value,
            2.0 / 9.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn truncated_power_law_constants() {
        // Reference values computed with 30-digit arithmetic.
        let cases = [
            (50u64, 0.19002022044910586),
            (100, 0.24501639078477266),
            (316, 0.33906218242838558),
            (1000, 0.43129356512893080),
            (8944, 0.58797200491907892),
            (50000, 0.68793548159225663),
        ];
        for (cap, expected) in cases {
            let dist = power_law(2.4).truncate(cap).unwrap();
            let c = limit_constant(&dist, 1e-9).unwrap();
            assert_relative_eq!(c.value, expected, max_relative = 1e-11);
            assert!(c.lower <= expected && expected <= c.upper);
        }
    }

    #[test]
    fn untruncated_power_law_constants() {
        // Reference values computed with 50-digit arithmetic.
        let cases = [
            (2.4, 0.9940801013541678),
            (2.5, 0.30420580256256794),
            (3.0, 0.027340853985070606),
        ];
        for (alpha, expected) in cases {
            let c = limit_constant(&power_law(alpha), 1e-9).unwrap();
            assert_relative_eq!(c.value, expected, max_relative = 1e-9);
            assert!(
                c.lower <= expected && expected <= c.upper,
                "α = {alpha}: {expected} outside [{}, {}]",
                c.lower,
                c.upper
            );
            assert!(c.lower <= c.value && c.value <= c.upper);
        }
    }

    #[test]
    fn tight_tolerance_still_brackets() {
        let c = limit_constant(&power_law(2.4), 1e-12).unwrap();
        let expected = 0.9940801013541678;
        assert!(c.lower <= expected && expected <= c.upper);
        assert!((c.upper - c.lower) / c.value < 1e-11);
    }

    #[test]
    fn truncation_approaches_the_limit_from_below() {
        let mut last = 0.0;
        for cap in [100u64, 1000, 10_000] {
            let dist = power_law(2.4).truncate(cap).unwrap();
            let c = limit_constant(&dist, 1e-9).unwrap().value;
            assert!(c > last, "cap {cap}: {c} ≤ {last}");
            last = c;
        }
        let untruncated = limit_constant(&power_law(2.4), 1e-9).unwrap().value;
        assert!(last < untruncated);
    }

    #[test]
    fn finite_support_matches_brute_force() {
        // Independent O(B²) evaluation of the defining double sum.
        let probs = vec![0.35, 0.25, 0.2, 0.12, 0.08];
        let dist = ReferenceDistribution::from_table(probs.clone()).unwrap();
        let mean: f64 = probs.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p).sum();
        let mut numer = 0.0;
        for (i, p) in probs.iter().enumerate() {
            let t = (i + 1) as f64;
            let s: f64 = probs
                .iter()
                .enumerate()
                .skip(i)
                .map(|(j, q)| (j + 1) as f64 * q)
                .sum();
            numer += t * (t - 1.0) * p * s * s;
        }
        let expected = numer / (2.0 * mean * mean);
        assert_relative_eq!(
            limit_constant(&dist, 1e-9).unwrap().value,
            expected,
            max_relative = 1e-12
        );
    }

    #[test]
    fn divergent_and_invalid_inputs() {
        assert!(matches!(
            limit_constant(&power_law(2.2), 1e-9),
            Err(Error::Divergent(_))
        ));
        assert!(matches!(
            limit_constant(&power_law(7.0 / 3.0), 1e-9),
            Err(Error::Divergent(_))
        ));
        assert!(matches!(
            limit_constant(&power_law(2.4), 0.0),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            limit_constant(&power_law(2.4), f64::NAN),
            Err(Error::Parameter(_))
        ));
        let huge = power_law(2.4).truncate(20_000_000).unwrap();
        assert!(matches!(limit_constant(&huge, 1e-9), Err(Error::Resource(_))));
    }

    #[test]
    fn report_constructors() {
        let r = BoundReport::for_sequence(&seq(&[2, 2, 2]));
        assert_eq!(r.trivial_bound, Some(12));
        assert!(r.alpha.is_none());

        let r = BoundReport::for_power_law(2.4, 1e-9).unwrap();
        assert_eq!(r.alpha, Some(2.4));
        let (t, m) = r.power_law_exponents.unwrap();
        assert_relative_eq!(t, 0.6, max_relative = 1e-12);
        assert_relative_eq!(m, -0.2, max_relative = 1e-9);
        assert!(r.limit_constant.is_some());

        // Below the threshold the exponents still come back, but no
        // constant exists.
        let r = BoundReport::for_power_law(2.2, 1e-9).unwrap();
        assert!(r.limit_constant.is_none());
        assert!(r.power_law_exponents.is_some());

        let r = BoundReport::for_power_law(2.2, 1e-9)
            .unwrap()
            .with_sequence(&seq(&[1, 1]));
        assert_eq!(r.trivial_bound, Some(2));
    }
}
