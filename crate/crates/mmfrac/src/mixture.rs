//! Mixture parameters, validation, volatility schedules and truncation.
//!
//! A mixture is a finite list of (σ_k, H_k) pairs with all σ_k > 0 and all
//! Hurst indices pairwise distinct inside (0, 1), optionally with a mean
//! reversion rate λ > 0 for the stationary process built on top of it.
//! Infinite mixtures are represented only through closed-form schedule
//! families, which is what makes the truncation tail computable.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Hurst index, a dimensionless exponent in the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HurstIndex(f64);

impl HurstIndex {
    pub fn new(value: f64) -> Result<Self> {
        if !(value > 0.0 && value < 1.0) {
            return Err(Error::param("hurst", value, "must lie in the open interval (0, 1)"));
        }
        Ok(HurstIndex(value))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// One mixture component: volatility weight and Hurst index.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Component {
    pub sigma: f64,
    pub hurst: HurstIndex,
}

/// A single violated assumption, as reported by [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    EmptyMixture,
    NonPositiveSigma { index: usize, value: f64 },
    HurstOutOfRange { index: usize, value: f64 },
    DuplicateHurst { first: usize, second: usize, value: f64 },
    NonPositiveLambda { value: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::EmptyMixture => write!(f, "mixture has no components"),
            Violation::NonPositiveSigma { index, value } => {
                write!(f, "sigma[{index}] = {value} must be > 0")
            }
            Violation::HurstOutOfRange { index, value } => {
                write!(f, "hurst[{index}] = {value} must lie in (0, 1)")
            }
            Violation::DuplicateHurst { first, second, value } => write!(
                f,
                "hurst values must be pairwise distinct: components {first} and {second} both have H = {value}"
            ),
            Violation::NonPositiveLambda { value } => {
                write!(f, "lambda = {value} must be > 0")
            }
        }
    }
}

/// Outcome of validating raw mixture parameters. Validation never fails;
/// it reports.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ok {
            write!(f, "ok")
        } else {
            let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", msgs.join("; "))
        }
    }
}

/// Check raw (sigma, hurst) pairs and an optional lambda against the
/// standing assumptions. Duplicate detection uses exact comparison of the
/// provided values; the distinctness requirement is structural, not a
/// numerical tolerance.
pub fn validate(components: &[(f64, f64)], lambda: Option<f64>) -> ValidationReport {
    let mut violations = Vec::new();
    if components.is_empty() {
        violations.push(Violation::EmptyMixture);
    }
    for (i, &(sigma, hurst)) in components.iter().enumerate() {
        if !(sigma > 0.0) {
            violations.push(Violation::NonPositiveSigma { index: i, value: sigma });
        }
        if !(hurst > 0.0 && hurst < 1.0) {
            violations.push(Violation::HurstOutOfRange { index: i, value: hurst });
        }
    }
    for i in 0..components.len() {
        for j in (i + 1)..components.len() {
            if components[i].1 == components[j].1 {
                violations.push(Violation::DuplicateHurst {
                    first: i,
                    second: j,
                    value: components[i].1,
                });
            }
        }
    }
    if let Some(l) = lambda {
        if !(l > 0.0) {
            violations.push(Violation::NonPositiveLambda { value: l });
        }
    }
    ValidationReport {
        ok: violations.is_empty(),
        violations,
    }
}

#[derive(Deserialize)]
struct RawComponent {
    sigma: f64,
    hurst: f64,
}

#[derive(Deserialize)]
struct RawSpec {
    components: Vec<RawComponent>,
    #[serde(default)]
    lambda: Option<f64>,
}

/// Validated mixture parameters. Immutable after construction.
#[derive(Debug, Clone, Serialize)]
pub struct MixtureSpec {
    components: Vec<Component>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
}

impl MixtureSpec {
    /// Build a spec from raw pairs, rejecting anything [`validate`] flags.
    pub fn new(components: Vec<(f64, f64)>, lambda: Option<f64>) -> Result<Self> {
        let report = validate(&components, lambda);
        if !report.ok {
            return Err(Error::InvalidSpec(report));
        }
        Ok(MixtureSpec {
            components: components
                .into_iter()
                .map(|(sigma, hurst)| Component {
                    sigma,
                    hurst: HurstIndex(hurst),
                })
                .collect(),
            lambda,
        })
    }

    /// Parse the JSON document
    /// `{"components":[{"sigma":..,"hurst":..},..],"lambda":..?}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text)?;
        Self::new(
            raw.components.iter().map(|c| (c.sigma, c.hurst)).collect(),
            raw.lambda,
        )
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn lambda(&self) -> Option<f64> {
        self.lambda
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::param("lambda", lambda, "must be > 0"));
        }
        self.lambda = Some(lambda);
        Ok(self)
    }

    /// Smallest Hurst index in the mixture (attained; the spec is finite).
    pub fn h_inf(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.hurst.get())
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest Hurst index in the mixture.
    pub fn h_sup(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.hurst.get())
            .fold(0.0, f64::max)
    }

    /// Σ σ_k².
    pub fn sigma_sq_sum(&self) -> f64 {
        self.components.iter().map(|c| c.sigma * c.sigma).sum()
    }

    /// Iterate (σ_k², H_k). Most kernels only need these.
    pub(crate) fn weights(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.components
            .iter()
            .map(|c| (c.sigma * c.sigma, c.hurst.get()))
    }
}

/// Volatility schedule σ_i as a closed-form function of the component
/// index i = 1, 2, …
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum ScheduleKind {
    /// σ_i = 1/i
    Harmonic,
    /// σ_i = 1/i!
    Factorial,
    /// σ_i = e^{-i}
    Exponential,
    /// σ_i = ratio^i with ratio ∈ (0, 1); generalizes `Exponential`
    /// (ratio = e^{-1})
    Geometric { ratio: f64 },
}

impl ScheduleKind {
    pub fn sigma(&self, i: usize) -> f64 {
        let i = i as f64;
        match self {
            ScheduleKind::Harmonic => 1.0 / i,
            ScheduleKind::Factorial => {
                let mut f = 1.0;
                for k in 2..=(i as u64) {
                    f *= k as f64;
                }
                1.0 / f
            }
            ScheduleKind::Exponential => (-i).exp(),
            ScheduleKind::Geometric { ratio } => ratio.powf(i),
        }
    }

    fn check(&self) -> Result<()> {
        if let ScheduleKind::Geometric { ratio } = self {
            if !(*ratio > 0.0 && *ratio < 1.0) {
                return Err(Error::param(
                    "ratio",
                    *ratio,
                    "geometric schedule needs ratio in (0, 1); sigma^2 is not summable otherwise",
                ));
            }
        }
        Ok(())
    }

    /// Closed-form bound on the squared tail Σ_{k>K} σ_k².
    ///
    /// Geometric/exponential tails are exact; the harmonic tail uses the
    /// integral bound Σ_{k>K} 1/k² ≤ 1/K and the factorial tail the ratio
    /// bound Σ_{k>K} (1/k!)² ≤ (1/(K+1)!)² · (K+2)²/((K+2)²-1).
    pub fn sq_tail_bound(&self, retained: usize) -> f64 {
        let k = retained;
        match self {
            ScheduleKind::Harmonic => {
                if k == 0 {
                    // Σ 1/k² = π²/6
                    std::f64::consts::PI * std::f64::consts::PI / 6.0
                } else {
                    1.0 / k as f64
                }
            }
            ScheduleKind::Factorial => {
                let head = self.sigma(k + 1);
                let r = ((k + 2) * (k + 2)) as f64;
                head * head * r / (r - 1.0)
            }
            ScheduleKind::Exponential => {
                let r2 = (-2.0f64).exp();
                r2.powi(k as i32 + 1) / (1.0 - r2)
            }
            ScheduleKind::Geometric { ratio } => {
                let r2 = ratio * ratio;
                r2.powi(k as i32 + 1) / (1.0 - r2)
            }
        }
    }
}

/// A finite schedule: `count` components with σ from `kind` and Hurst
/// indices equidistant on [h_lo, h_hi].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScheduleFamily {
    #[serde(flatten)]
    pub kind: ScheduleKind,
    pub h_lo: f64,
    pub h_hi: f64,
    pub count: usize,
}

impl ScheduleFamily {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Materialize a finite schedule: H_i = h_lo + (i-1)(h_hi-h_lo)/(count-1),
/// σ_i per the schedule formula, i = 1..count.
pub fn make_schedule(family: &ScheduleFamily) -> Result<MixtureSpec> {
    family.kind.check()?;
    let ScheduleFamily { h_lo, h_hi, count, .. } = *family;
    if count < 1 {
        return Err(Error::param("count", count as f64, "must be >= 1"));
    }
    if !(h_lo > 0.0 && h_lo <= h_hi && h_hi < 1.0) {
        return Err(Error::param("h_lo", h_lo, "need 0 < h_lo <= h_hi < 1"));
    }
    if count > 1 && h_lo == h_hi {
        return Err(Error::param(
            "count",
            count as f64,
            "a degenerate Hurst range only admits a single component",
        ));
    }
    let components = (1..=count)
        .map(|i| {
            let h = if count == 1 {
                h_lo
            } else {
                h_lo + (i - 1) as f64 * (h_hi - h_lo) / (count - 1) as f64
            };
            (family.kind.sigma(i), h)
        })
        .collect();
    MixtureSpec::new(components, None)
}

/// Truncation outcome: how many components were kept and the L²(Ω×[0,T])
/// error bound max{1, T³} · Σ_{k>K} σ_k² for what was dropped.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TruncationReport {
    pub retained: usize,
    pub tail_bound: f64,
    pub horizon: f64,
}

/// Base-2 van der Corput point, in (0, 1) for i >= 1.
fn van_der_corput(mut i: usize) -> f64 {
    let mut x = 0.0;
    let mut denom = 1.0;
    while i > 0 {
        denom *= 2.0;
        x += (i % 2) as f64 / denom;
        i /= 2;
    }
    x
}

/// Hurst index of component i (1-based) of the infinite schedule over
/// (h_lo, h_hi): a low-discrepancy enumeration that is pairwise distinct
/// and, crucially, independent of where the schedule is truncated, so a
/// shorter truncation is always a prefix of a longer one.
pub fn infinite_schedule_hurst(h_lo: f64, h_hi: f64, i: usize) -> f64 {
    h_lo + (h_hi - h_lo) * van_der_corput(i)
}

/// Truncate the infinite schedule with the smallest K whose dropped-tail
/// bound max{1, T³} · Σ_{k>K} σ_k² is at most `eps`.
///
/// The truncated spec always has at least one component. Note the infimum
/// Hurst index of the infinite family is not attained; after truncation it
/// is, which is what every downstream formula assumes.
pub fn truncate_schedule(
    family: &ScheduleFamily,
    eps: f64,
    horizon: f64,
) -> Result<(MixtureSpec, TruncationReport)> {
    family.kind.check()?;
    if !(eps > 0.0) {
        return Err(Error::param("eps", eps, "must be > 0"));
    }
    if !(horizon > 0.0) {
        return Err(Error::param("horizon", horizon, "must be > 0"));
    }
    let ScheduleFamily { h_lo, h_hi, .. } = *family;
    if !(h_lo > 0.0 && h_lo < h_hi && h_hi < 1.0) {
        return Err(Error::param("h_lo", h_lo, "need 0 < h_lo < h_hi < 1"));
    }
    let scale = horizon.powi(3).max(1.0);
    let mut retained = 1usize;
    while scale * family.kind.sq_tail_bound(retained) > eps {
        retained += 1;
        if retained > 10_000_000 {
            return Err(Error::param(
                "eps",
                eps,
                "tail bound not reachable within 1e7 components",
            ));
        }
    }
    let components = (1..=retained)
        .map(|i| (family.kind.sigma(i), infinite_schedule_hurst(h_lo, h_hi, i)))
        .collect();
    let spec = MixtureSpec::new(components, None)?;
    let report = TruncationReport {
        retained,
        tail_bound: scale * family.kind.sq_tail_bound(retained),
        horizon,
    };
    Ok((spec, report))
}
