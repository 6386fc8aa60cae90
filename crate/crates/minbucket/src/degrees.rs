//! Degree sequences and reference degree distributions.
//!
//! A [`DegreeSequence`] is the target input to the graph generators: the
//! per-vertex degrees d₁ ≤ … ≤ dₙ with their stub sum (twice the edge
//! count m). A [`ReferenceDistribution`] is the probability law degrees
//! are drawn from — a parametric power law t^(−α)/Z or an explicit finite
//! table — optionally truncated at a cap with the implied renormalization.

use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::zeta::{hurwitz_zeta, riemann_zeta};

/// Largest truncation cap for which weights are tabulated explicitly
/// (sampling, exact moments, exact limit-constant sums).
pub(crate) const MAX_TABULATED_CAP: u64 = 10_000_000;

/// A validated degree sequence: positive degrees stored sorted ascending,
/// with an even stub sum.
///
/// Construction enforces the invariants: every degree is at least 1, and
/// an odd stub sum is repaired by incrementing the first minimum-degree
/// vertex (recorded in [`parity_adjusted`](Self::parity_adjusted)). When
/// the input arrived in per-vertex order that differs from sorted order,
/// [`original_ids`](Self::original_ids) maps each sorted slot back to the
/// original vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
    original_ids: Option<Vec<u32>>,
    stub_sum: u64,
    parity_adjusted: bool,
}

impl DegreeSequence {
    /// Builds a sequence from per-vertex degrees, applying the parity rule
    /// and sorting ascending.
    ///
    /// Errors if the input is empty, contains a zero degree, or is too
    /// large to index with 32-bit vertex ids.
    pub fn from_degrees(mut input: Vec<u32>) -> Result<Self> {
        if input.is_empty() {
            return Err(Error::Parameter("degree sequence is empty".into()));
        }
        if input.len() > u32::MAX as usize {
            return Err(Error::Parameter(format!(
                "degree sequence has {} entries; at most {} are supported",
                input.len(),
                u32::MAX
            )));
        }
        if let Some(pos) = input.iter().position(|&d| d == 0) {
            return Err(Error::Parameter(format!(
                "degree 0 at vertex {pos}; degrees must be at least 1"
            )));
        }
        let mut stub_sum: u128 = input.iter().map(|&d| d as u128).sum();
        let mut parity_adjusted = false;
        if stub_sum % 2 == 1 {
            // Parity rule: bump the first minimum-degree vertex so a
            // perfect stub matching exists; the perturbation is minimal.
            let min = *input.iter().min().expect("nonempty");
            let pos = input.iter().position(|&d| d == min).expect("nonempty");
            input[pos] += 1;
            stub_sum += 1;
            parity_adjusted = true;
        }
        if stub_sum > u64::MAX as u128 {
            return Err(Error::Parameter("stub sum overflows 64 bits".into()));
        }

        let already_sorted = input.windows(2).all(|w| w[0] <= w[1]);
        let (degrees, original_ids) = if already_sorted {
            (input, None)
        } else {
            let mut order: Vec<u32> = (0..input.len() as u32).collect();
            order.sort_by_key(|&i| (input[i as usize], i));
            let degrees = order.iter().map(|&i| input[i as usize]).collect();
            (degrees, Some(order))
        };

        Ok(DegreeSequence {
            degrees,
            original_ids,
            stub_sum: stub_sum as u64,
            parity_adjusted,
        })
    }

    /// The degrees, sorted ascending. Vertex ids used by the graph
    /// generators are positions in this slice.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Number of vertices n.
    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    /// Σᵥ dᵥ — always even.
    pub fn stub_sum(&self) -> u64 {
        self.stub_sum
    }

    /// Edge count of the target multigraph, m = stub_sum / 2.
    pub fn m(&self) -> u64 {
        self.stub_sum / 2
    }

    /// Largest degree dₙ.
    pub fn max_degree(&self) -> u32 {
        *self.degrees.last().expect("nonempty by construction")
    }

    /// True when the parity rule incremented a degree at construction.
    pub fn parity_adjusted(&self) -> bool {
        self.parity_adjusted
    }

    /// For sequences built from per-vertex input that was not already
    /// sorted: `original_ids()[slot]` is the original vertex id now stored
    /// at `slot`. `None` means the identity mapping.
    pub fn original_ids(&self) -> Option<&[u32]> {
        self.original_ids.as_deref()
    }

    /// The degrees in original per-vertex order (undoes the sort).
    pub fn degrees_in_original_order(&self) -> Vec<u32> {
        match &self.original_ids {
            None => self.degrees.clone(),
            Some(ids) => {
                let mut out = vec![0u32; self.degrees.len()];
                for (slot, &id) in ids.iter().enumerate() {
                    out[id as usize] = self.degrees[slot];
                }
                out
            }
        }
    }
}

/// Parameters of a finite-support power law: mass ∝ d^(−α) on
/// {1, …, d_max} spread over n vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawParams {
    alpha: f64,
    n: usize,
    d_max: u32,
}

impl PowerLawParams {
    /// Validates α > 1, d_max ≥ 1, and d_max ≤ n − 1.
    pub fn new(alpha: f64, n: usize, d_max: u32) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 1.0 {
            return Err(Error::Parameter(format!(
                "power-law exponent must be finite and > 1, got {alpha}"
            )));
        }
        if d_max < 1 {
            return Err(Error::Parameter("d_max must be at least 1".into()));
        }
        if (d_max as u64) > (n as u64).saturating_sub(1) {
            return Err(Error::Parameter(format!(
                "d_max = {d_max} exceeds n - 1 = {}",
                (n as u64).saturating_sub(1)
            )));
        }
        Ok(PowerLawParams { alpha, n, d_max })
    }

    /// The exponent α.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The vertex count n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The degree cap d_max.
    pub fn d_max(&self) -> u32 {
        self.d_max
    }
}

/// Deterministic power-law degree sequence by inverse-CDF quantile
/// assignment: vertex i (1-indexed) receives F⁻¹((i − 0.5)/n), where F is
/// the CDF of the distribution with mass ∝ d^(−α) on {1, …, d_max}.
///
/// The construction is deterministic — equal parameters give identical
/// output — and the count of degrees falling in each dyadic bin
/// [2ᵏ, 2ᵏ⁺¹) tracks n/2^((α−1)k) up to constant factors.
pub fn power_law_sequence(params: &PowerLawParams) -> Result<DegreeSequence> {
    let d_max = params.d_max as usize;
    // Prefix sums of the unnormalized masses d^(−α).
    let mut cum = Vec::with_capacity(d_max);
    let mut acc = 0.0f64;
    for d in 1..=d_max {
        acc += (d as f64).powf(-params.alpha);
        cum.push(acc);
    }
    let total = acc;
    let n = params.n;
    let mut degrees = Vec::with_capacity(n);
    let mut d = 0usize; // index into cum; quantiles are nondecreasing
    for i in 1..=n {
        let target = (i as f64 - 0.5) / (n as f64) * total;
        while d + 1 < d_max && cum[d] < target {
            d += 1;
        }
        degrees.push((d + 1) as u32);
    }
    DegreeSequence::from_degrees(degrees)
}

/// Signals whether a distribution moment is finite, and its value when it
/// is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    /// The moment converges to this value.
    Finite(f64),
    /// The moment diverges (for a parametric power law, r ≥ α − 1).
    Divergent,
}

impl Moment {
    /// The value when finite.
    pub fn value(&self) -> Option<f64> {
        match self {
            Moment::Finite(v) => Some(*v),
            Moment::Divergent => None,
        }
    }

    /// True when the moment diverges.
    pub fn is_divergent(&self) -> bool {
        matches!(self, Moment::Divergent)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Pmf {
    /// f(t) = t^(−α) / Z over t ≥ 1, Z = ζ(α).
    PowerLaw { alpha: f64, z: f64 },
    /// f(t) = probs[t − 1] over 1 ≤ t ≤ probs.len(), summing to 1.
    Table { probs: Vec<f64> },
}

/// A reference degree distribution: the law f from which i.i.d. degrees
/// are drawn, optionally truncated at a cap M with support {1, …, M} and
/// the implied renormalization f_M(t) = f(t)/Σ_{s≤M} f(s).
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceDistribution {
    pmf: Pmf,
    cap: Option<u64>,
    /// Σ_{t≤cap} f(t); 1.0 when no cap is set.
    truncated_mass: f64,
}

impl ReferenceDistribution {
    /// The parametric power law f(t) = t^(−α)/ζ(α) on t ≥ 1, untruncated.
    pub fn power_law(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 1.0 {
            return Err(Error::Parameter(format!(
                "power-law exponent must be finite and > 1, got {alpha}"
            )));
        }
        Ok(ReferenceDistribution {
            pmf: Pmf::PowerLaw {
                alpha,
                z: riemann_zeta(alpha),
            },
            cap: None,
            truncated_mass: 1.0,
        })
    }

    /// An explicit finite pmf: `probs[t-1]` is f(t). Entries must be
    /// nonnegative and sum to 1 within 1e-9 (the sum is then normalized
    /// out exactly).
    pub fn from_table(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Parameter("pmf table is empty".into()));
        }
        if probs.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::Parameter(
                "pmf table entries must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!(
                "pmf table sums to {sum}, expected 1"
            )));
        }
        let probs = probs.iter().map(|&p| p / sum).collect();
        Ok(ReferenceDistribution {
            pmf: Pmf::Table { probs },
            cap: None,
            truncated_mass: 1.0,
        })
    }

    /// Truncates the support to {1, …, cap}, recording the removed mass;
    /// queries through [`pmf_truncated`](Self::pmf_truncated) are
    /// renormalized by 1/(1 − γ) where γ is the removed mass.
    pub fn truncate(mut self, cap: u64) -> Result<Self> {
        if cap < 1 {
            return Err(Error::Parameter("truncation cap must be at least 1".into()));
        }
        let mass = match &self.pmf {
            Pmf::PowerLaw { alpha, z } => {
                1.0 - hurwitz_zeta(*alpha, cap as f64 + 1.0) / z
            }
            Pmf::Table { probs } => {
                let upto = (cap as usize).min(probs.len());
                probs[..upto].iter().sum()
            }
        };
        if mass <= 0.0 {
            return Err(Error::Parameter(format!(
                "support truncated at {cap} carries zero mass"
            )));
        }
        self.cap = Some(cap);
        self.truncated_mass = mass;
        Ok(self)
    }

    /// The truncation cap, if one is set.
    pub fn cap(&self) -> Option<u64> {
        self.cap
    }

    /// The largest support point: the cap if set, the table length for
    /// finite tables, `None` for an untruncated parametric power law.
    pub fn support_bound(&self) -> Option<u64> {
        match (&self.pmf, self.cap) {
            (Pmf::Table { probs }, None) => Some(probs.len() as u64),
            (Pmf::Table { probs }, Some(cap)) => Some(cap.min(probs.len() as u64)),
            (Pmf::PowerLaw { .. }, cap) => cap,
        }
    }

    /// The exponent α for parametric power laws.
    pub fn alpha(&self) -> Option<f64> {
        match &self.pmf {
            Pmf::PowerLaw { alpha, .. } => Some(*alpha),
            Pmf::Table { .. } => None,
        }
    }

    /// Untruncated pmf value f(t); zero off the support.
    pub fn pmf(&self, t: u64) -> f64 {
        if t == 0 {
            return 0.0;
        }
        match &self.pmf {
            Pmf::PowerLaw { alpha, z } => (t as f64).powf(-alpha) / z,
            Pmf::Table { probs } => probs.get(t as usize - 1).copied().unwrap_or(0.0),
        }
    }

    /// Truncated, renormalized pmf value f_M(t) = f(t)/Σ_{s≤M} f(s);
    /// equals f(t) when no cap is set.
    pub fn pmf_truncated(&self, t: u64) -> f64 {
        if let Some(cap) = self.cap {
            if t > cap {
                return 0.0;
            }
        }
        self.pmf(t) / self.truncated_mass
    }

    /// The renormalization factor 1/(1 − γ) implied by truncation, where γ
    /// is the mass beyond the cap; 1.0 when no cap is set.
    pub fn renormalizer(&self) -> f64 {
        1.0 / self.truncated_mass
    }

    /// The r-th moment Σₜ tʳ f_M(t) of the (truncated, renormalized)
    /// distribution, to relative accuracy `tol` or better.
    ///
    /// For an untruncated parametric power law the moment is the zeta
    /// ratio ζ(α−r)/ζ(α), evaluated far below any practical `tol`, and
    /// diverges exactly when r ≥ α − 1 — reported as
    /// [`Moment::Divergent`]. Finite supports are summed exactly.
    pub fn moment(&self, r: f64, tol: f64) -> Result<Moment> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Parameter(format!(
                "moment order must be positive and finite, got {r}"
            )));
        }
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::Parameter(format!(
                "relative tolerance must be positive and finite, got {tol}"
            )));
        }
        match (&self.pmf, self.support_bound()) {
            (Pmf::PowerLaw { alpha, z }, None) => {
                if r >= alpha - 1.0 {
                    return Ok(Moment::Divergent);
                }
                Ok(Moment::Finite(riemann_zeta(alpha - r) / z))
            }
            (_, Some(bound)) => {
                if bound > MAX_TABULATED_CAP {
                    return Err(Error::Parameter(format!(
                        "support bound {bound} too large for exact summation \
                         (limit {MAX_TABULATED_CAP})"
                    )));
                }
                // Exact Kahan sum of tʳ f_M(t) over the finite support.
                let mut sum = 0.0f64;
                let mut comp = 0.0f64;
                for t in 1..=bound {
                    let term = (t as f64).powf(r) * self.pmf_truncated(t);
                    let y = term - comp;
                    let s = sum + y;
                    comp = (s - sum) - y;
                    sum = s;
                }
                Ok(Moment::Finite(sum))
            }
            (Pmf::Table { .. }, None) => unreachable!("tables always have a support bound"),
        }
    }
}

/// i.i.d. degrees: n independent draws from the truncated, renormalized
/// distribution using a ChaCha8 generator seeded with `seed`, followed by
/// the parity rule. Fixed `(dist, n, seed)` reproduces the same sequence.
///
/// The distribution must have a finite support bound (a cap for
/// parametric power laws).
pub fn sample_iid_degrees(
    dist: &ReferenceDistribution,
    n: usize,
    seed: u64,
) -> Result<DegreeSequence> {
    if n == 0 {
        return Err(Error::Parameter("cannot sample an empty sequence".into()));
    }
    let bound = dist.support_bound().ok_or_else(|| {
        Error::Parameter("sampling requires a finite support bound (set a truncation cap)".into())
    })?;
    if bound > MAX_TABULATED_CAP {
        return Err(Error::Parameter(format!(
            "support bound {bound} too large for tabulated sampling (limit {MAX_TABULATED_CAP})"
        )));
    }
    // Cumulative unnormalized weights over the truncated support.
    let mut cum = Vec::with_capacity(bound as usize);
    let mut acc = 0.0f64;
    for t in 1..=bound {
        acc += dist.pmf(t);
        cum.push(acc);
    }
    let total = acc;
    if total <= 0.0 {
        return Err(Error::Parameter(
            "truncated support carries zero mass".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degrees = Vec::with_capacity(n);
    for _ in 0..n {
        let target = rng.gen::<f64>() * total;
        let idx = cum.partition_point(|&c| c <= target).min(cum.len() - 1);
        degrees.push(idx as u32 + 1);
    }
    DegreeSequence::from_degrees(degrees)
}

/// Result of checking a sequence against the degree-truncation
/// assumptions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationReport {
    /// Largest degree in the sequence.
    pub max_degree: u32,
    /// Edge count m = stub_sum / 2.
    pub m: u64,
    /// Whether max degree < √m / 2 (required for the work bound to apply).
    pub work_bound_regime: bool,
    /// Whether max degree < √m / 4 (the stronger regime used by the
    /// tightness analysis).
    pub tightness_regime: bool,
}

/// Checks the strict inequalities d_max < √m/2 and d_max < √m/4, exactly
/// in integer arithmetic.
///
/// In strict mode a violation of the √m/2 bound is an error; otherwise
/// the report simply records both flags — generation never requires the
/// bound.
pub fn validate_truncation(seq: &DegreeSequence, strict: bool) -> Result<TruncationReport> {
    let d = seq.max_degree();
    let m = seq.m();
    let d2 = (d as u128) * (d as u128);
    let report = TruncationReport {
        max_degree: d,
        m,
        work_bound_regime: 4 * d2 < m as u128,
        tightness_regime: 16 * d2 < m as u128,
    };
    if strict && !report.work_bound_regime {
        return Err(Error::Truncation {
            max_degree: d,
            m,
            bound: (m as f64).sqrt() / 2.0,
        });
    }
    Ok(report)
}

/// Reads a degree sequence from a text file: one positive decimal integer
/// per line, in vertex order.
pub fn load_degrees(path: &Path) -> Result<DegreeSequence> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut degrees = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        let d: u32 = trimmed
            .parse()
            .map_err(|_| Error::parse(path, idx + 1, format!("expected a positive integer, got {trimmed:?}")))?;
        if d == 0 {
            return Err(Error::parse(path, idx + 1, "degree must be at least 1"));
        }
        degrees.push(d);
    }
    if degrees.is_empty() {
        return Err(Error::parse(path, 1, "degree file is empty"));
    }
    DegreeSequence::from_degrees(degrees)
}

/// Writes a degree sequence as text, one degree per line, in original
/// vertex order.
pub fn save_degrees(seq: &DegreeSequence, path: &Path) -> Result<()> {
    let mut out = String::new();
    for d in seq.degrees_in_original_order() {
        out.push_str(&d.to_string());
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}
