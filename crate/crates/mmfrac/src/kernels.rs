//! Closed-form covariance kernels for the mixture process, its increments,
//! and the stationary mean-reverting process driven by it.
//!
//! The stationary autocovariance ρ_{λ,H}(t) is canonically
//!
//! ```text
//! ρ_{λ,H}(t) = Γ(2H+1)/(2 λ^{2H}) · { cosh(λt) - (1/Γ(2H)) ∫_0^{λt} s^{2H-1} cosh(λt-s) ds }
//! ```
//!
//! valid for every H ∈ (0,1). Evaluated literally, the braced difference
//! cancels catastrophically for large λt (cosh(λt) ~ e^{λt}/2 against a
//! polynomially small result), so the integral branch here first splits
//! cosh into its exponential halves and regroups exactly:
//!
//! ```text
//! { ... } = [K(T) - J(T)] / (2 Γ(2H)) + e^{-T}/2 ,        T = λt,
//! K(T) = e^T ∫_T^∞ v^{2H-1} e^{-v} dv,   J(T) = ∫_0^T (T-v)^{2H-1} e^{-v} dv.
//! ```
//!
//! K and J are integrals of positive integrands of comparable, moderate
//! magnitude; the remaining subtraction loses only ~log10(T) digits. Past
//! the crossover λt > 25 the large-lag expansion takes over.

use crate::error::{Error, Result};
use crate::mixture::{HurstIndex, MixtureSpec};
use crate::special::{
    gamma_fn, inc_gamma_pos, integrate, integrate_power_weighted, integrate_power_weighted_right,
    upper_gamma_reg, QuadratureSpec,
};

/// Which formula produced a kernel value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelBranch {
    ClosedForm,
    Quadrature,
    Asymptotic,
    SpecialCaseHHalf,
}

/// A scalar covariance evaluation together with its provenance.
#[derive(Debug, Clone, Copy)]
pub struct KernelValue {
    pub value: f64,
    pub branch: KernelBranch,
}

/// Number of terms kept in a large-lag expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AsymptoticOrder(usize);

impl AsymptoticOrder {
    pub fn new(n_terms: usize) -> Result<Self> {
        if n_terms < 1 {
            return Err(Error::param("n_terms", n_terms as f64, "must be >= 1"));
        }
        Ok(AsymptoticOrder(n_terms))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// Lag threshold λt above which `fou_autocov` switches from the integral
/// branch to the large-lag expansion.
pub const FOU_CROSSOVER: f64 = 25.0;
/// Expansion order used by `fou_autocov` past the crossover.
pub const FOU_ASYMPTOTIC_TERMS: usize = 5;

/// Covariance ½(t^{2H} + s^{2H} - |t-s|^{2H}) of the self-similar
/// stationary-increment Gaussian process with Hurst index H.
pub fn fbm_cov(h: HurstIndex, t: f64, s: f64) -> KernelValue {
    assert!(t >= 0.0 && s >= 0.0, "time arguments must be nonnegative");
    let two_h = 2.0 * h.get();
    KernelValue {
        value: 0.5 * (t.powf(two_h) + s.powf(two_h) - (t - s).abs().powf(two_h)),
        branch: KernelBranch::ClosedForm,
    }
}

/// Mixture covariance r(t,s) = Σ σ_k² r_{H_k}(t,s).
pub fn mmfbm_cov(spec: &MixtureSpec, t: f64, s: f64) -> KernelValue {
    assert!(t >= 0.0 && s >= 0.0, "time arguments must be nonnegative");
    let mut acc = 0.0;
    for (w, h) in spec.weights() {
        let two_h = 2.0 * h;
        acc += w * 0.5 * (t.powf(two_h) + s.powf(two_h) - (t - s).abs().powf(two_h));
    }
    KernelValue {
        value: acc,
        branch: KernelBranch::ClosedForm,
    }
}

/// Second difference u^a evaluated stably: (t+d)^a + (t-d)^a - 2 t^a.
///
/// For small d/t the direct form cancels; the even binomial series in
/// x = d/t is exact and keeps full precision.
fn second_diff(a: f64, t: f64, d: f64) -> f64 {
    let x = d / t;
    if x >= 0.25 {
        return (t + d).powf(a) + (t - d).powf(a) - 2.0 * t.powf(a);
    }
    // 2 Σ_{m>=1} C(a, 2m) x^{2m}
    let x2 = x * x;
    let mut coef = a * (a - 1.0) / 2.0; // C(a, 2)
    let mut xp = x2;
    let mut sum = coef * xp;
    let mut m = 1usize;
    loop {
        let two_m = 2.0 * m as f64;
        coef *= (a - two_m) * (a - two_m - 1.0) / ((two_m + 1.0) * (two_m + 2.0));
        xp *= x2;
        let term = coef * xp;
        sum += term;
        m += 1;
        if term.abs() <= sum.abs() * f64::EPSILON || m > 200 {
            break;
        }
    }
    2.0 * t.powf(a) * sum
}

/// Increment autocovariance with lag between windows t and window length
/// delta: ϱ(δ; t) = ½ Σ σ_k² [(t+δ)^{2H_k} + (t-δ)^{2H_k} - 2 t^{2H_k}].
pub fn fgn_autocov(spec: &MixtureSpec, delta: f64, t: f64) -> Result<KernelValue> {
    if !(delta > 0.0) {
        return Err(Error::param("delta", delta, "must be > 0"));
    }
    if !(t >= delta) {
        return Err(Error::param("t", t, "must be >= delta"));
    }
    let mut acc = 0.0;
    for (w, h) in spec.weights() {
        acc += w * 0.5 * second_diff(2.0 * h, t, delta);
    }
    Ok(KernelValue {
        value: acc,
        branch: KernelBranch::ClosedForm,
    })
}

/// Leading large-t behaviour of the increment autocovariance:
/// δ² Σ σ_k² H_k (2H_k - 1) t^{2H_k - 2}.
pub fn fgn_autocov_asymptotic(spec: &MixtureSpec, delta: f64, t: f64) -> KernelValue {
    let mut acc = 0.0;
    for (w, h) in spec.weights() {
        acc += w * h * (2.0 * h - 1.0) * t.powf(2.0 * h - 2.0);
    }
    KernelValue {
        value: delta * delta * acc,
        branch: KernelBranch::Asymptotic,
    }
}

/// Stationary variance λ^{-2H} H Γ(2H).
pub fn fou_var0(lambda: f64, h: HurstIndex) -> f64 {
    assert!(lambda > 0.0, "lambda must be > 0");
    let hh = h.get();
    lambda.powf(-2.0 * hh) * hh * gamma_fn(2.0 * hh).expect("2H in (0,2)")
}

/// ∫_T^∞ v^a e^{-v} dv for a ∈ (-1, 1), T ≥ 0.
fn gamma_tail_integral(a: f64, lower: f64, q: &QuadratureSpec) -> Result<f64> {
    let split = lower.max(1.0);
    let tail = integrate(|v: f64| v.powf(a) * (-v).exp(), split, f64::INFINITY, q)?;
    if lower >= split {
        return Ok(tail);
    }
    let head = if a < 0.0 {
        // v = w^{1/(1+a)} removes the v^a weight exactly
        let inv = 1.0 / (1.0 + a);
        integrate(
            |w: f64| (-w.powf(inv)).exp() * inv,
            lower.powf(1.0 + a),
            split.powf(1.0 + a),
            q,
        )?
    } else {
        integrate(|v: f64| v.powf(a) * (-v).exp(), lower, split, q)?
    };
    Ok(head + tail)
}

/// The integral branch of [`fou_autocov`], exposed so the two branches can
/// be compared directly at any lag (branch continuity checks do this at
/// the crossover).
pub fn fou_autocov_integral_form(
    lambda: f64,
    h: HurstIndex,
    t: f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::param("lambda", lambda, "must be > 0"));
    }
    if !(t >= 0.0) {
        return Err(Error::param("t", t, "must be >= 0"));
    }
    let hh = h.get();
    let two_h = 2.0 * hh;
    let a = two_h - 1.0;
    let big_t = lambda * t;

    let k_term = big_t.exp() * gamma_tail_integral(a, big_t, q)?;
    let j_term = if big_t == 0.0 {
        0.0
    } else {
        integrate_power_weighted_right(|v: f64| (-v).exp(), a, 0.0, big_t, q)?
    };
    let g2h = gamma_fn(two_h)?;
    let bracket = 0.5 * (k_term - j_term) / g2h + 0.5 * (-big_t).exp();
    Ok(gamma_fn(two_h + 1.0)? / (2.0 * lambda.powf(two_h)) * bracket)
}

/// Partial sum of the large-lag expansion
/// ½ Σ_{n=1}^N λ^{-2n} (Π_{j=0}^{2n-1} (2H-j)) t^{2H-2n}.
pub fn fou_autocov_asymptotic(
    lambda: f64,
    h: HurstIndex,
    t: f64,
    order: AsymptoticOrder,
) -> KernelValue {
    assert!(lambda > 0.0 && t > 0.0, "need lambda > 0 and t > 0");
    let two_h = 2.0 * h.get();
    let mut prod = 1.0;
    let mut acc = 0.0;
    for n in 1..=order.get() {
        let j0 = (2 * n - 2) as f64;
        prod *= (two_h - j0) * (two_h - j0 - 1.0);
        acc += lambda.powi(-2 * n as i32) * prod * t.powf(two_h - 2.0 * n as f64);
    }
    KernelValue {
        value: 0.5 * acc,
        branch: KernelBranch::Asymptotic,
    }
}

/// Stationary autocovariance ρ_{λ,H}(t) of the mean-reverting process with
/// one driving component.
///
/// Branches: exact e^{-λt}/(2λ) for H = 1/2; the split integral form for
/// λt ≤ 25; the large-lag expansion with 5 terms beyond. The lag-0 value
/// is the closed-form stationary variance.
pub fn fou_autocov(lambda: f64, h: HurstIndex, t: f64) -> Result<KernelValue> {
    if !(lambda > 0.0) {
        return Err(Error::param("lambda", lambda, "must be > 0"));
    }
    if !(t >= 0.0) {
        return Err(Error::param("t", t, "must be >= 0"));
    }
    if t == 0.0 {
        return Ok(KernelValue {
            value: fou_var0(lambda, h),
            branch: KernelBranch::ClosedForm,
        });
    }
    if h.get() == 0.5 {
        return Ok(KernelValue {
            value: (-lambda * t).exp() / (2.0 * lambda),
            branch: KernelBranch::SpecialCaseHHalf,
        });
    }
    if lambda * t > FOU_CROSSOVER {
        let order = AsymptoticOrder::new(FOU_ASYMPTOTIC_TERMS).expect("constant order");
        return Ok(fou_autocov_asymptotic(lambda, h, t, order));
    }
    let q = QuadratureSpec::default();
    Ok(KernelValue {
        value: fou_autocov_integral_form(lambda, h, t, &q)?,
        branch: KernelBranch::Quadrature,
    })
}

/// The gamma-function form of the stationary autocovariance,
///
/// ```text
/// Γ(1+2H)/4 · e^{-λt}/λ^{2H} · { 1 + γ⁺_{2H-1}(λt) + e^{2λt} Γ_{2H-1}(λt) }
/// ```
///
/// valid for H ∈ [1/2, 1) only (the positive-exponent integral diverges
/// below 1/2). Kept as an independent cross-check of [`fou_autocov`]; the
/// two routes share no evaluation machinery.
pub fn fou_autocov_gamma_form(lambda: f64, h: HurstIndex, t: f64) -> Result<KernelValue> {
    if !(lambda > 0.0) {
        return Err(Error::param("lambda", lambda, "must be > 0"));
    }
    if !(t > 0.0) {
        return Err(Error::param("t", t, "must be > 0"));
    }
    let hh = h.get();
    if hh < 0.5 {
        return Err(Error::param(
            "hurst",
            hh,
            "gamma form requires H >= 1/2; the normalized integral diverges below",
        ));
    }
    let big_t = lambda * t;
    // at H = 1/2 the index 2H-1 hits 0, where the conventions are
    // γ⁺_0 = 1 and Γ_0 = 0
    let bracket = if hh == 0.5 {
        2.0
    } else {
        let a = 2.0 * hh - 1.0;
        let q = QuadratureSpec::default();
        1.0 + inc_gamma_pos(a, big_t, &q)? + (2.0 * big_t).exp() * upper_gamma_reg(a, big_t)?
    };
    let two_h = 2.0 * hh;
    Ok(KernelValue {
        value: gamma_fn(1.0 + two_h)? / 4.0 * (-big_t).exp() / lambda.powf(two_h) * bracket,
        branch: KernelBranch::ClosedForm,
    })
}

fn combine_branch(acc: Option<KernelBranch>, b: KernelBranch) -> KernelBranch {
    use KernelBranch::*;
    match acc {
        None => b,
        Some(prev) => {
            let rank = |k: KernelBranch| match k {
                Quadrature => 3,
                Asymptotic => 2,
                SpecialCaseHHalf => 1,
                ClosedForm => 0,
            };
            if rank(b) > rank(prev) {
                b
            } else {
                prev
            }
        }
    }
}

/// Mixture stationary autocovariance Σ σ_k² ρ_{λ,H_k}(t).
pub fn mmfou_autocov(spec: &MixtureSpec, lambda: f64, t: f64) -> Result<KernelValue> {
    let mut acc = 0.0;
    let mut branch = None;
    for c in spec.components() {
        let kv = fou_autocov(lambda, c.hurst, t)?;
        acc += c.sigma * c.sigma * kv.value;
        branch = Some(combine_branch(branch, kv.branch));
    }
    Ok(KernelValue {
        value: acc,
        branch: branch.unwrap_or(KernelBranch::ClosedForm),
    })
}

/// Componentwise large-lag expansion of the mixture autocovariance.
pub fn mmfou_autocov_asymptotic(
    spec: &MixtureSpec,
    lambda: f64,
    t: f64,
    order: AsymptoticOrder,
) -> KernelValue {
    let mut acc = 0.0;
    for c in spec.components() {
        acc += c.sigma * c.sigma * fou_autocov_asymptotic(lambda, c.hurst, t, order).value;
    }
    KernelValue {
        value: acc,
        branch: KernelBranch::Asymptotic,
    }
}
