//! Wiener integrals with respect to the Molchan-Golosov process.
//!
//! ∫ g dY is defined as ∫ (K^H g)(s) dL_s, with
//! (K^H g)(s) = Γ(H+1/2) c_H s^{1/2−H} (I_−^{H−1/2} (·)^{H−1/2} g)(s).
//! For H > 1/2 the right-sided fractional integral is evaluated directly.
//! For step functions K^H reduces to differences of z_H, valid for every H,
//! and for H < 1/2 general integrands are reached through staircase
//! approximations only.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::kernels::MgKernel;
use crate::levy::DriverPath;
use crate::quad::{EndBehavior, Integrator};
use crate::specfun::HurstParameter;

/// One step of a step function in the CLI's JSON format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub upto: f64,
    pub level: f64,
}

/// g = Σ_j a_j 1_{(s_{j−1}, s_j]} with 0 = s_0 < … < s_n = T.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    levels: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != levels.len() + 1 || levels.is_empty() {
            return Err(invalid("a step function needs n + 1 breakpoints for n levels, n ≥ 1"));
        }
        if breakpoints[0] != 0.0 {
            return Err(invalid("the first breakpoint must be 0"));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) || breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(invalid("breakpoints must be finite and strictly increasing"));
        }
        if levels.iter().any(|a| !a.is_finite()) {
            return Err(invalid("levels must be finite"));
        }
        Ok(Self { breakpoints, levels })
    }

    pub fn from_steps(steps: &[Step]) -> Result<Self> {
        let mut breakpoints = vec![0.0];
        breakpoints.extend(steps.iter().map(|s| s.upto));
        Self::new(breakpoints, steps.iter().map(|s| s.level).collect())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let steps: Vec<Step> = serde_json::from_str(text)?;
        Self::from_steps(&steps)
    }

    /// The indicator of (a, b] for 0 ≤ a < b.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        if a == 0.0 {
            Self::new(vec![0.0, b], vec![1.0])
        } else {
            Self::new(vec![0.0, a, b], vec![0.0, 1.0])
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn horizon(&self) -> f64 {
        *self.breakpoints.last().expect("at least two breakpoints")
    }

    pub fn eval(&self, u: f64) -> f64 {
        if u <= 0.0 || u > self.horizon() {
            return 0.0;
        }
        let j = self.breakpoints.partition_point(|&b| b < u);
        self.levels[j - 1]
    }

    /// α f + β g on the union of both partitions.
    pub fn combine(&self, alpha: f64, other: &StepFunction, beta: f64) -> Result<Self> {
        let mut points: Vec<f64> = self.breakpoints.iter().chain(&other.breakpoints).copied().collect();
        points.sort_by(f64::total_cmp);
        points.dedup();
        let levels = points
            .windows(2)
            .map(|w| {
                let m = 0.5 * (w[0] + w[1]);
                alpha * self.eval(m) + beta * other.eval(m)
            })
            .collect();
        Self::new(points, levels)
    }
}

/// A general integrand on [0, T].
#[derive(Clone)]
pub struct IntegrandFunction {
    pub label: String,
    g: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for IntegrandFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IntegrandFunction").field("label", &self.label).finish()
    }
}

impl IntegrandFunction {
    pub fn new(label: impl Into<String>, g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            g: Arc::new(g),
        }
    }

    pub fn eval(&self, u: f64) -> f64 {
        (self.g)(u)
    }

    /// Midpoint staircase on 2^level equal cells of [0, T].
    pub fn staircase(&self, horizon: f64, level: u32) -> Result<StepFunction> {
        let n = 1usize << level;
        let breakpoints: Vec<f64> = (0..=n).map(|i| horizon * i as f64 / n as f64).collect();
        let levels = breakpoints.windows(2).map(|w| self.eval(0.5 * (w[0] + w[1]))).collect();
        StepFunction::new(breakpoints, levels)
    }
}

#[derive(Debug, Clone)]
pub enum Integrand {
    Step(StepFunction),
    Function(IntegrandFunction),
}

/// Evidence that g lies in L²_H([0,T]): the computed norm is finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L2hCertificate {
    pub norm: f64,
    pub horizon: f64,
}

fn function_kh(kernel: &MgKernel, g: &IntegrandFunction, s: f64, horizon: f64) -> Result<f64> {
    let h = kernel.hurst();
    let p = h.offset();
    if p <= 0.0 {
        return Err(Error::Unsupported(format!(
            "K^H of a general integrand needs H > 1/2 (got {}); use a staircase",
            h.value()
        )));
    }
    if !(s > 0.0 && s < horizon) {
        return Ok(0.0);
    }
    // u = s + (T−s)y absorbs (u−s)^{p−1} into the Jacobi weight y^{p−1}
    let d = horizon - s;
    let inner = Integrator::with_rel_tol(1e-11).integrate(
        |y| {
            if y <= 0.0 {
                return 0.0;
            }
            let u = s + d * y;
            y.powf(p - 1.0) * u.powf(p) * g.eval(u)
        },
        0.0,
        1.0,
        EndBehavior::Power(p - 1.0),
        EndBehavior::Regular,
    )?;
    // Γ(H+1/2)/Γ(H−1/2) = p
    Ok(p * h.mg_constant() * s.powf(-p) * d.powf(p) * inner.value)
}

fn step_kh(kernel: &MgKernel, g: &StepFunction, s: f64) -> Result<f64> {
    // Σ a_j (z(s_j, s) − z(s_{j−1}, s)) = Σ (a_j − a_{j+1}) z(s_j, s), a_{n+1} = 0
    let n = g.levels.len();
    let first = g.breakpoints.partition_point(|&b| b <= s).max(1);
    let mut acc = 0.0;
    for j in first..=n {
        let jump = g.levels[j - 1] - if j < n { g.levels[j] } else { 0.0 };
        if jump != 0.0 {
            acc += jump * kernel.eval(g.breakpoints[j], s)?;
        }
    }
    Ok(acc)
}

/// (K^H g)(s) for s in (0, T).
pub fn apply_kh(h: HurstParameter, g: &Integrand, s: f64, horizon: f64) -> Result<f64> {
    let kernel = MgKernel::new(h);
    match g {
        Integrand::Step(f) => step_kh(&kernel, f, s),
        Integrand::Function(f) => function_kh(&kernel, f, s, horizon),
    }
}

/// One realisation of ∫ g dY = Σ_i (K^H g)(τ_i) ΔL_i over jumps in (0, T).
pub fn wiener_integral(h: HurstParameter, g: &Integrand, driver: &DriverPath, horizon: f64) -> Result<f64> {
    let kernel = MgKernel::new(h);
    let mut acc = 0.0;
    for (&tau, &j) in driver.times.iter().zip(&driver.sizes) {
        if tau >= horizon {
            break;
        }
        let k = match g {
            Integrand::Step(f) => step_kh(&kernel, f, tau)?,
            Integrand::Function(f) => function_kh(&kernel, f, tau, horizon)?,
        };
        acc += k * j;
    }
    Ok(acc)
}

/// ‖g‖_{L²_H([0,T])} = ‖K^H g‖_{L²([0,T])}.
pub fn l2h_norm(h: HurstParameter, g: &Integrand, horizon: f64) -> Result<f64> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(invalid(format!("horizon must be positive, got {horizon}")));
    }
    let kernel = MgKernel::new(h);
    let p = h.offset();
    let quad = Integrator {
        abs_tol: 1e-13,
        rel_tol: 1e-9,
        max_segments: 4000,
    };
    let mut failure = None;
    let mut catch = |r: Result<f64>| match r {
        Ok(v) => v * v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let origin = if p == 0.0 {
        EndBehavior::Regular
    } else {
        EndBehavior::Power(-2.0 * p.abs())
    };
    let total = match g {
        Integrand::Step(f) => {
            if f.horizon() > horizon {
                return Err(invalid("step function extends past the horizon"));
            }
            // K^H g jumps like (s_j − s)^p at each breakpoint
            let at_break = if p == 0.0 {
                EndBehavior::Regular
            } else if p < 0.0 {
                EndBehavior::Power(2.0 * p)
            } else {
                EndBehavior::Power(p)
            };
            let mut points = f.breakpoints.clone();
            if f.horizon() < horizon {
                points.push(horizon);
            }
            let ends: Vec<(EndBehavior, EndBehavior)> = (0..points.len() - 1)
                .map(|i| (if i == 0 { origin } else { EndBehavior::Regular }, at_break))
                .collect();
            quad.integrate_pieces(|s| catch(step_kh(&kernel, f, s)), &points, &ends)?
        }
        Integrand::Function(f) => {
            let right = if p == 0.0 {
                EndBehavior::Regular
            } else {
                EndBehavior::Power(2.0 * p)
            };
            quad.integrate(
                |s| catch(function_kh(&kernel, f, s, horizon)),
                0.0,
                horizon,
                origin,
                right,
            )?
        }
    };
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(total.value.max(0.0).sqrt())
}

/// Computes the L²_H norm, failing if it is not finite.
pub fn certify(h: HurstParameter, g: &Integrand, horizon: f64) -> Result<L2hCertificate> {
    let norm = l2h_norm(h, g, horizon)?;
    if !norm.is_finite() {
        return Err(Error::Domain("integrand is not in L²_H".into()));
    }
    Ok(L2hCertificate { norm, horizon })
}

/// ‖S_{n+1} g − S_n g‖_{L²_H} for n = first..last−1, S_n the 2^n-cell staircase.
/// Decreasing increments certify the staircase limit that defines ∫ g dY for H < 1/2.
pub fn staircase_cauchy_increments(
    h: HurstParameter,
    g: &IntegrandFunction,
    horizon: f64,
    first: u32,
    last: u32,
) -> Result<Vec<f64>> {
    if last <= first {
        return Err(invalid("need at least two staircase levels"));
    }
    let stairs: Vec<StepFunction> = (first..=last).map(|n| g.staircase(horizon, n)).collect::<Result<_>>()?;
    stairs
        .windows(2)
        .map(|w| l2h_norm(h, &Integrand::Step(w[1].combine(1.0, &w[0], -1.0)?), horizon))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::mg_kernel;

    fn hp(h: f64) -> HurstParameter {
        HurstParameter::new(h).unwrap()
    }

    #[test]
    fn step_function_validation_and_json() {
        assert!(StepFunction::new(vec![0.0], vec![]).is_err());
        assert!(StepFunction::new(vec![0.1, 1.0], vec![1.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0, 0.5], vec![1.0, 2.0]).is_err());
        let f = StepFunction::from_json(r#"[{"upto": 0.5, "level": 2.0}, {"upto": 1.0, "level": -1.0}]"#).unwrap();
        assert_eq!(f.breakpoints(), &[0.0, 0.5, 1.0]);
        assert_eq!(f.eval(0.5), 2.0);
        assert_eq!(f.eval(0.50001), -1.0);
        assert_eq!(f.eval(0.0), 0.0);
    }

    #[test]
    fn indicator_maps_to_kernel() {
        for h in [0.3, 0.75] {
            let g = Integrand::Step(StepFunction::indicator(0.0, 0.8).unwrap());
            for s in [0.1, 0.5, 0.79] {
                let a = apply_kh(hp(h), &g, s, 1.0).unwrap();
                assert_eq!(a, mg_kernel(hp(h), 0.8, s).unwrap());
            }
            assert_eq!(apply_kh(hp(h), &g, 0.9, 1.0).unwrap(), 0.0);
        }
        // the fractional-integral route reproduces the kernel
        let g = Integrand::Function(IntegrandFunction::new("1[0,0.8)", |u| if u < 0.8 { 1.0 } else { 0.0 }));
        let z = apply_kh(hp(0.75), &g, 0.3, 0.8).unwrap();
        assert!((z - mg_kernel(hp(0.75), 0.8, 0.3).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn zero_integrand() {
        let g = Integrand::Function(IntegrandFunction::new("0", |_| 0.0));
        assert_eq!(apply_kh(hp(0.75), &g, 0.4, 1.0).unwrap(), 0.0);
        assert_eq!(l2h_norm(hp(0.75), &g, 1.0).unwrap(), 0.0);
        let s = Integrand::Step(StepFunction::new(vec![0.0, 1.0], vec![0.0]).unwrap());
        assert_eq!(l2h_norm(hp(0.3), &s, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn general_integrands_need_large_h() {
        let g = Integrand::Function(IntegrandFunction::new("u", |u| u));
        assert!(matches!(apply_kh(hp(0.3), &g, 0.5, 1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn indicator_norm_is_power_of_t() {
        for h in [0.3, 0.6, 0.75] {
            let g = Integrand::Step(StepFunction::indicator(0.0, 0.7).unwrap());
            let n = l2h_norm(hp(h), &g, 1.0).unwrap();
            assert!((n - 0.7f64.powf(h)).abs() < 1e-6, "H={h}: {n}");
        }
        // increments: ‖1_{(a,b]}‖ = (b − a)^H
        let g = Integrand::Step(StepFunction::indicator(0.3, 0.9).unwrap());
        let n = l2h_norm(hp(0.7), &g, 1.0).unwrap();
        assert!((n - 0.6f64.powf(0.7)).abs() < 1e-6, "{n}");
    }

    #[test]
    fn smooth_integrand_matches_fine_staircase() {
        let h = hp(0.75);
        let g = IntegrandFunction::new("u", |u| u);
        let smooth = Integrand::Function(g.clone());
        let stair = Integrand::Step(g.staircase(1.0, 10).unwrap());
        let kernel = MgKernel::new(h);
        let f = IntegrandFunction::new("u", |u| u);
        let quad = Integrator {
            abs_tol: 1e-10,
            rel_tol: 1e-6,
            max_segments: 4000,
        };
        let Integrand::Step(st) = &stair else { unreachable!() };
        let d = quad
            .integrate(
                |s| (function_kh(&kernel, &f, s, 1.0).unwrap() - step_kh(&kernel, st, s).unwrap()).powi(2),
                0.0,
                1.0,
                EndBehavior::Regular,
                EndBehavior::Regular,
            )
            .unwrap();
        assert!(d.value.sqrt() < 1e-3, "{}", d.value.sqrt());
        let a = l2h_norm(h, &smooth, 1.0).unwrap();
        let b = l2h_norm(h, &Integrand::Step(g.staircase(1.0, 6).unwrap()), 1.0).unwrap();
        assert!((a - b).abs() < 1e-3, "{a} vs {b}");
    }

    #[test]
    fn staircases_are_cauchy_for_small_h() {
        let g = IntegrandFunction::new("sin", |u: f64| (3.0 * u).sin());
        let inc = staircase_cauchy_increments(hp(0.3), &g, 1.0, 1, 5).unwrap();
        assert!(inc.windows(2).all(|w| w[1] < w[0]), "{inc:?}");
        assert!(inc[3] < 0.25 * inc[0]);
    }

    #[test]
    fn integral_of_indicator_is_an_increment() {
        use crate::levy::{sample_compound_poisson, LevyMeasureSpec};
        use crate::simulate::flpmg_at;
        let spec = LevyMeasureSpec::rademacher(3.0).unwrap();
        let h = hp(0.7);
        let kernel = MgKernel::new(h);
        for seed in 0..20 {
            let d = sample_compound_poisson(&spec, 1.0, seed).unwrap();
            let g = Integrand::Step(StepFunction::indicator(0.25, 0.8).unwrap());
            let i = wiener_integral(h, &g, &d, 1.0).unwrap();
            let y = flpmg_at(&kernel, &d.times, &d.sizes, &[0.25, 0.8]).unwrap();
            assert!((i - (y[1] - y[0])).abs() < 1e-12);
        }
    }

    #[test]
    fn linearity_on_coupled_paths() {
        use crate::levy::{sample_compound_poisson, LevyMeasureSpec};
        let spec = LevyMeasureSpec::rademacher(3.0).unwrap();
        let h = hp(0.35);
        let f = StepFunction::new(vec![0.0, 0.3, 1.0], vec![1.0, -2.0]).unwrap();
        let g = StepFunction::new(vec![0.0, 0.6, 0.9], vec![0.5, 4.0]).unwrap();
        let fg = f.combine(2.0, &g, -3.0).unwrap();
        for seed in 0..10 {
            let d = sample_compound_poisson(&spec, 1.0, seed).unwrap();
            let a = wiener_integral(h, &Integrand::Step(f.clone()), &d, 1.0).unwrap();
            let b = wiener_integral(h, &Integrand::Step(g.clone()), &d, 1.0).unwrap();
            let c = wiener_integral(h, &Integrand::Step(fg.clone()), &d, 1.0).unwrap();
            assert!((c - (2.0 * a - 3.0 * b)).abs() < 1e-12);
        }
    }
}
