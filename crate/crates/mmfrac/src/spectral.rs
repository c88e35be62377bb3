//! Spectral densities, the spectral route to the stationary autocovariance,
//! numerical verification of the underlying Fourier identities, and the
//! log-integral criterion used for the conditional-full-support property.

use crate::error::{Error, Result};
use crate::kernels::fou_var0;
use crate::mixture::{HurstIndex, MixtureSpec};
use crate::special::{
    cosine_transform, gamma_fn, inc_gamma_pos, integrate, integrate_power_weighted,
    upper_gamma_reg, QuadratureSpec,
};

/// A spectral density evaluation at frequency `x` (radians per unit time).
///
/// Densities are even in `x` and nonnegative; at the origin the value is
/// reported as `+∞` when the local exponent is negative and `0` when it is
/// positive, so the sentinel is part of the contract rather than an error.
#[derive(Debug, Clone, Copy)]
pub struct SpectralValue {
    pub value: f64,
    pub x: f64,
}

/// sin(πH) Γ(1+2H) / 2π — the normalization constant of the density.
fn sd_coeff(h: f64) -> f64 {
    (std::f64::consts::PI * h).sin() * gamma_fn(1.0 + 2.0 * h).expect("1+2H in (1,3)")
        / (2.0 * std::f64::consts::PI)
}

fn power_at(x: f64, exponent: f64) -> f64 {
    if x == 0.0 {
        if exponent > 0.0 {
            0.0
        } else if exponent < 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    } else {
        x.abs().powf(exponent)
    }
}

/// Spectral density of the stationary-increment process:
/// f_H(x) = sin(πH) Γ(1+2H) / 2π · |x|^{1-2H}.
pub fn fbm_sd(h: HurstIndex, x: f64) -> SpectralValue {
    let hh = h.get();
    SpectralValue {
        value: sd_coeff(hh) * power_at(x, 1.0 - 2.0 * hh),
        x,
    }
}

/// Mixture density f(x) = Σ σ_k² f_{H_k}(x).
pub fn mmfbm_sd(spec: &MixtureSpec, x: f64) -> SpectralValue {
    let mut acc = 0.0;
    for (w, hh) in spec.weights() {
        acc += w * sd_coeff(hh) * power_at(x, 1.0 - 2.0 * hh);
    }
    SpectralValue { value: acc, x }
}

/// Single-component stationary density f_{λ,H}(x) = f_H(x) / (x² + λ²).
pub fn fou_sd(lambda: f64, h: HurstIndex, x: f64) -> SpectralValue {
    assert!(lambda > 0.0, "lambda must be > 0");
    SpectralValue {
        value: fbm_sd(h, x).value / (x * x + lambda * lambda),
        x,
    }
}

/// Mixture stationary density f_λ(x) = f(x) / (x² + λ²).
pub fn mmfou_sd(spec: &MixtureSpec, lambda: f64, x: f64) -> SpectralValue {
    assert!(lambda > 0.0, "lambda must be > 0");
    SpectralValue {
        value: mmfbm_sd(spec, x).value / (x * x + lambda * lambda),
        x,
    }
}

/// One component of the spectral inversion at lag 0:
/// 2 ∫_0^∞ x^β / (x² + λ²) dx with β = 1 - 2H ∈ (-1, 1),
/// split at x = 1 and folded with x ↦ 1/x so both pieces are finite
/// integrals with declared endpoint exponents.
fn lag_zero_component(beta: f64, lambda: f64, q: &QuadratureSpec) -> Result<f64> {
    let l2 = lambda * lambda;
    let near = integrate_power_weighted(|x: f64| 1.0 / (x * x + l2), beta, 0.0, 1.0, q)?;
    let far = integrate_power_weighted(|y: f64| 1.0 / (1.0 + l2 * y * y), -beta, 0.0, 1.0, q)?;
    Ok(2.0 * (near + far))
}

/// Numerical inversion of the stationary spectral representation:
/// 2 ∫_0^∞ cos(t x) f_λ(x) dx, summed component by component so each
/// integral carries a single origin exponent.
///
/// This is an independent oracle for the kernel-route autocovariance: it
/// never touches the incomplete-gamma machinery.
pub fn spectral_autocov(
    spec: &MixtureSpec,
    lambda: f64,
    t: f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::param("lambda", lambda, "must be > 0"));
    }
    if !(t >= 0.0) {
        return Err(Error::param("t", t, "must be >= 0"));
    }
    let l2 = lambda * lambda;
    let head_min = (2.0 * lambda).max(1.0);
    let mut acc = 0.0;
    for (w, hh) in spec.weights() {
        let beta = 1.0 - 2.0 * hh;
        let c = w * sd_coeff(hh);
        let integral = if t == 0.0 {
            lag_zero_component(beta, lambda, q)?
        } else {
            2.0 * cosine_transform(|x| 1.0 / (x * x + l2), beta, t, head_min, q)?
        };
        acc += c * integral;
    }
    Ok(acc)
}

/// Both sides of a Fourier-pair verification.
#[derive(Debug, Clone, Copy)]
pub struct FourierCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

/// Verify, numerically, the closed form of
/// ∫_{-∞}^∞ cos(t x) |x|^p / (λ² + x²) dx for p ∈ (-1, 0):
///
/// ```text
/// rhs = π e^{-λt} / (2 cos(pπ/2) λ^{1-p}) · { 1 + γ⁺_{-p}(λt) + e^{2λt} Γ_{-p}(λt) }
/// ```
///
/// Only the strictly negative p range is checked: there both the Fourier
/// integral and the normalized incomplete integrals are proper. The lhs is
/// oscillatory quadrature, the rhs is gamma machinery; the two share
/// nothing.
pub fn fourier_identity_check(
    p: f64,
    lambda: f64,
    t: f64,
    q: &QuadratureSpec,
) -> Result<FourierCheck> {
    if !(p > -1.0 && p < 0.0) {
        return Err(Error::param("p", p, "must lie in (-1, 0)"));
    }
    if !(lambda > 0.0) {
        return Err(Error::param("lambda", lambda, "must be > 0"));
    }
    if t == 0.0 {
        return Err(Error::param("t", t, "must be nonzero"));
    }
    let t = t.abs(); // both sides are even in t
    let l2 = lambda * lambda;
    let head_min = (2.0 * lambda).max(1.0);
    let lhs = 2.0 * cosine_transform(|x| 1.0 / (x * x + l2), p, t, head_min, q)?;

    let big_t = lambda * t;
    let bracket =
        1.0 + inc_gamma_pos(-p, big_t, q)? + (2.0 * big_t).exp() * upper_gamma_reg(-p, big_t)?;
    let rhs = std::f64::consts::PI * (-big_t).exp()
        / (2.0 * (p * std::f64::consts::FRAC_PI_2).cos() * lambda.powf(1.0 - p))
        * bracket;
    Ok(FourierCheck {
        lhs,
        rhs,
        rel_err: ((lhs - rhs) / rhs).abs(),
    })
}

/// Numerically evaluate ∫_0^∞ ∫_0^∞ e^{-(x+y)} |x-y|^α dx dy against its
/// closed form Γ(α+1), for α > -1.
///
/// The double integral reduces exactly (u = min, v = |x-y|) to
/// 2 ∫_0^∞ e^{-2u} du · ∫_0^∞ e^{-v} v^α dv; both factors are evaluated by
/// quadrature and only the comparison value uses the gamma function.
pub fn double_gamma_check(alpha: f64, q: &QuadratureSpec) -> Result<(f64, f64)> {
    if !(alpha > -1.0) {
        return Err(Error::param("alpha", alpha, "must be > -1"));
    }
    let outer = integrate(|u: f64| (-2.0 * u).exp(), 0.0, f64::INFINITY, q)?;
    let inner_head = integrate_power_weighted(|v: f64| (-v).exp(), alpha, 0.0, 1.0, q)?;
    let inner_tail = integrate(|v: f64| v.powf(alpha) * (-v).exp(), 1.0, f64::INFINITY, q)?;
    let numeric = 2.0 * outer * (inner_head + inner_tail);
    let exact = gamma_fn(alpha + 1.0)?;
    Ok((numeric, exact))
}

/// Piecewise power-law lower bound h(x) on the mixture density:
///
/// ```text
/// h(x) = c/2π · (Σ σ_k²) · |x|^{1-2H_inf}   for |x| ≤ 1,
///        c/2π · (Σ σ_k²) · |x|^{1-2H_sup}   for |x| ≥ 1,
/// ```
///
/// divided by (λ² + x²) in the stationary case. The prefactor uses
/// c = min_k sin(πH_k) Γ(1+2H_k): the gamma factor cannot be dropped,
/// since Γ(1+2H) < 1 for every H < 1/2 and the bound would fail pointwise
/// for rough mixtures without it.
pub fn cfs_lower_bound(spec: &MixtureSpec, lambda: Option<f64>, x: f64) -> SpectralValue {
    let c = spec
        .components()
        .iter()
        .map(|comp| {
            let hh = comp.hurst.get();
            (std::f64::consts::PI * hh).sin() * gamma_fn(1.0 + 2.0 * hh).expect("in range")
        })
        .fold(f64::INFINITY, f64::min);
    let exponent = if x.abs() <= 1.0 {
        1.0 - 2.0 * spec.h_inf()
    } else {
        1.0 - 2.0 * spec.h_sup()
    };
    let mut value =
        c / (2.0 * std::f64::consts::PI) * spec.sigma_sq_sum() * power_at(x, exponent);
    if let Some(l) = lambda {
        value /= x * x + l * l;
    }
    SpectralValue { value, x }
}

/// The log-integral criterion ∫_{x0}^∞ log f(x) / x² dx (stationary form
/// when `lambda` is given). Finiteness of this integral is the implemented
/// criterion; the value is returned so callers can inspect it.
///
/// The substitution x = x0/y maps the domain onto (0, 1]; the integrand
/// picks up only an integrable logarithmic singularity at y = 0.
pub fn cfs_integral(
    spec: &MixtureSpec,
    lambda: Option<f64>,
    x0: f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    if !(x0 > 1.0) {
        return Err(Error::param("x0", x0, "must be > 1"));
    }
    let log_f = |x: f64| -> f64 {
        let mut f = mmfbm_sd(spec, x).value;
        if let Some(l) = lambda {
            f /= x * x + l * l;
        }
        f.ln()
    };
    let value = integrate(|y: f64| log_f(x0 / y), 0.0, 1.0, q)? / x0;
    if !value.is_finite() {
        return Err(Error::Convergence {
            what: "cfs_integral",
            best: value,
            error_bound: f64::INFINITY,
        });
    }
    Ok(value)
}

/// Convenience: lag-0 spectral mass equals the stationary variance
/// Σ σ_k² λ^{-2H_k} H_k Γ(2H_k); used in tests as the analytic target.
pub fn stationary_variance(spec: &MixtureSpec, lambda: f64) -> f64 {
    spec.components()
        .iter()
        .map(|c| c.sigma * c.sigma * fou_var0(lambda, c.hurst))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::mmfou_autocov;

    fn h(v: f64) -> HurstIndex {
        HurstIndex::new(v).unwrap()
    }

    fn spec(parts: &[(f64, f64)]) -> MixtureSpec {
        MixtureSpec::new(parts.to_vec(), None).unwrap()
    }

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn white_level_for_h_half() {
        let want = 1.0 / (2.0 * std::f64::consts::PI);
        for x in [0.1, 1.0, 7.3] {
            let v = fbm_sd(h(0.5), x).value;
            assert!(((v - want) / want).abs() < 1e-14);
        }
    }

    #[test]
    fn density_is_even_and_matches_hand_value() {
        let v = fbm_sd(h(0.75), 2.0);
        let w = fbm_sd(h(0.75), -2.0);
        assert_eq!(v.value, w.value);
        // 40-digit reference
        let want = 0.1057855469152043038027648971676448598458;
        assert!(((v.value - want) / want).abs() < 1e-13);
    }

    #[test]
    fn origin_sentinels() {
        assert!(fbm_sd(h(0.75), 0.0).value.is_infinite());
        assert_eq!(fbm_sd(h(0.25), 0.0).value, 0.0);
        assert!(fou_sd(1.0, h(0.75), 0.0).value.is_infinite());
        let m = spec(&[(1.0, 0.25), (1.0, 0.75)]);
        assert!(mmfbm_sd(&m, 0.0).value.is_infinite());
    }

    #[test]
    fn mixture_density_sums_components() {
        let m = spec(&[(1.0, 0.25), (1.0, 0.75)]);
        let x = 1.0;
        let want = fbm_sd(h(0.25), x).value + fbm_sd(h(0.75), x).value;
        let got = mmfbm_sd(&m, x).value;
        assert!(((got - want) / want).abs() < 1e-14);
    }

    #[test]
    fn stationary_density_is_filtered_mixture_density() {
        let m = spec(&[(0.7, 0.3), (0.4, 0.8)]);
        for x in [0.3, 1.0, 5.0] {
            let a = mmfou_sd(&m, 2.0, x).value * (x * x + 4.0);
            let b = mmfbm_sd(&m, x).value;
            assert!(((a - b) / b).abs() < 1e-14);
        }
        // λ → ∞ kills the density pointwise
        assert!(mmfou_sd(&m, 1e9, 1.0).value < 1e-15);
        // for H = 1/2: 1/(2π(x²+λ²))
        let bm = spec(&[(1.0, 0.5)]);
        let v = mmfou_sd(&bm, 1.0, 1.0).value;
        let want = 1.0 / (2.0 * std::f64::consts::PI * 2.0);
        assert!(((v - want) / want).abs() < 1e-14);
    }

    #[test]
    fn spectral_inversion_recovers_bm_ou_kernel() {
        let bm = spec(&[(1.0, 0.5)]);
        for t in [0.0, 0.5, 1.0, 2.0] {
            let v = spectral_autocov(&bm, 1.0, t, &q()).unwrap();
            let want = (-t).exp() / 2.0;
            assert!(
                (v - want).abs() < 1e-9,
                "t={t}: got {v:.12e} want {want:.12e}"
            );
        }
    }

    #[test]
    fn spectral_inversion_matches_kernel_route() {
        let m = spec(&[(1.0, 0.3), (1.0, 0.7)]);
        for t in [0.0, 0.5, 1.0, 2.0] {
            let s = spectral_autocov(&m, 1.0, t, &q()).unwrap();
            let k = mmfou_autocov(&m, 1.0, t).unwrap().value;
            assert!(
                (s - k).abs() < 1e-8,
                "t={t}: spectral {s:.12e} kernel {k:.12e}"
            );
        }
    }

    #[test]
    fn lag_zero_mass_is_stationary_variance() {
        for parts in [vec![(1.0, 0.3)], vec![(1.0, 0.7)], vec![(0.5, 0.25), (0.5, 0.75)]] {
            let m = MixtureSpec::new(parts, None).unwrap();
            let got = spectral_autocov(&m, 1.0, 0.0, &q()).unwrap();
            let want = stationary_variance(&m, 1.0);
            assert!(
                ((got - want) / want).abs() < 1e-9,
                "got {got:.12e} want {want:.12e}"
            );
        }
    }

    #[test]
    fn fourier_identity_on_proper_range() {
        for p in [-0.8, -0.5, -0.2] {
            for lambda in [0.5, 1.0, 2.0] {
                for t in [0.5, 1.0, 2.0] {
                    let c = fourier_identity_check(p, lambda, t, &q()).unwrap();
                    assert!(
                        c.rel_err <= 1e-8,
                        "p={p} λ={lambda} t={t}: rel {:.3e}",
                        c.rel_err
                    );
                }
            }
        }
    }

    #[test]
    fn fourier_identity_even_in_t() {
        let a = fourier_identity_check(-0.5, 1.0, 1.0, &q()).unwrap();
        let b = fourier_identity_check(-0.5, 1.0, -1.0, &q()).unwrap();
        assert_eq!(a.lhs, b.lhs);
        assert_eq!(a.rhs, b.rhs);
    }

    #[test]
    fn fourier_identity_small_p_tends_to_classical_transform() {
        // as p → 0⁻ the lhs approaches π e^{-λt}/λ
        let c = fourier_identity_check(-1e-4, 1.0, 1.0, &q()).unwrap();
        let classical = std::f64::consts::PI * (-1.0f64).exp();
        assert!(
            ((c.lhs - classical) / classical).abs() < 1e-3,
            "lhs {:.8e} vs classical {classical:.8e}",
            c.lhs
        );
    }

    #[test]
    fn fourier_identity_domain() {
        assert!(fourier_identity_check(0.5, 1.0, 1.0, &q()).is_err());
        assert!(fourier_identity_check(-1.0, 1.0, 1.0, &q()).is_err());
        assert!(fourier_identity_check(-0.5, 1.0, 0.0, &q()).is_err());
    }

    #[test]
    fn exponential_double_integral_reduces_to_gamma() {
        for (alpha, want) in [
            (0.0, 1.0),
            (1.0, 1.0),
            (-0.4, 1.489192248812817153337542854776257612877),
            (2.5, gamma_fn(3.5).unwrap()),
        ] {
            let (numeric, exact) = double_gamma_check(alpha, &q()).unwrap();
            assert!((exact - want).abs() < 1e-13);
            assert!(
                (numeric - exact).abs() < 1e-9,
                "alpha={alpha}: numeric {numeric:.12e} exact {exact:.12e}"
            );
        }
        assert!(double_gamma_check(-1.0, &q()).is_err());
    }

    #[test]
    fn lower_bound_is_dominated_by_density() {
        let specs = [
            spec(&[(1.0, 0.3)]),
            spec(&[(1.0, 0.7)]),
            spec(&[(1.0, 0.3), (1.0, 0.7)]),
            spec(&[(0.5, 0.25), (0.5, 0.75)]),
        ];
        let n = 10_000;
        for m in &specs {
            for i in 0..n {
                // log grid over [1e-3, 1e3]
                let x = 10f64.powf(-3.0 + 6.0 * i as f64 / (n - 1) as f64);
                let f = mmfbm_sd(m, x).value;
                let hb = cfs_lower_bound(m, None, x).value;
                assert!(f >= hb * (1.0 - 1e-12), "x={x}: f={f:.6e} < h={hb:.6e}");
                let fl = mmfou_sd(m, 1.0, x).value;
                let hl = cfs_lower_bound(m, Some(1.0), x).value;
                assert!(fl >= hl * (1.0 - 1e-12), "x={x}: stationary bound");
            }
        }
    }

    #[test]
    fn lower_bound_h_half_plateau() {
        // single H = 1/2: both exponents vanish, h = Σσ²/2π for |x| ≥ 1
        let m = spec(&[(2.0, 0.5)]);
        let want = 4.0 / (2.0 * std::f64::consts::PI);
        for x in [1.0, 3.0, 100.0] {
            let v = cfs_lower_bound(&m, None, x).value;
            assert!(((v - want) / want).abs() < 1e-14);
        }
    }

    #[test]
    fn log_criterion_constant_case_closed_form() {
        // single H = 1/2, no filter: integrand log(1/2π)/x², integral
        // log(1/2π)/x0
        let m = spec(&[(1.0, 0.5)]);
        for x0 in [2.0, 5.0] {
            let v = cfs_integral(&m, None, x0, &q()).unwrap();
            let want = (1.0 / (2.0 * std::f64::consts::PI)).ln() / x0;
            assert!(
                (v - want).abs() < 1e-9,
                "x0={x0}: got {v:.12e} want {want:.12e}"
            );
        }
    }

    #[test]
    fn log_criterion_finite_for_valid_specs() {
        let specs = [
            spec(&[(1.0, 0.3)]),
            spec(&[(1.0, 0.7)]),
            spec(&[(1.0, 0.3), (1.0, 0.7)]),
        ];
        for m in &specs {
            for lambda in [None, Some(1.0)] {
                let v = cfs_integral(m, lambda, 2.0, &q()).unwrap();
                assert!(v.is_finite());
            }
        }
    }

    #[test]
    fn log_criterion_shrinks_with_x0() {
        let m = spec(&[(1.0, 0.3), (1.0, 0.7)]);
        let a = cfs_integral(&m, None, 2.0, &q()).unwrap().abs();
        let b = cfs_integral(&m, None, 8.0, &q()).unwrap().abs();
        assert!(b < a, "{b} !< {a}");
        assert!(cfs_integral(&m, None, 1.0, &q()).is_err());
    }
}
