//! The Molchan-Golosov kernel z_H and the Mandelbrot-Van Ness kernel f_H,
//! their power integrals, and the Beta-function moment bounds.
//!
//! z_H(t,s) = c_H (t−s)^p F(−p, p; p+1; (s−t)/s) on 0 < s < t with p = H − 1/2.
//! Applying Pfaff's transformation gives
//! z_H = c_H (t−s)^p r^{−p} F(−p, 1; 1+p; 1−r), r = s/t,
//! which converges geometrically for r ≥ 1/2. For r < 1/2 the connection
//! formula around 1 yields
//! z_H = c_H t^p [ (1/2)(1−r)^p r^{−p} F(−p, 1; 1−2p; r) + A r^p ],
//! A = Γ(1+p)Γ(1−2p) / (2Γ(1−p)),
//! again a series in an argument below 1/2. Both branches are valid for
//! every H in (0,1).

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quad::{EndBehavior, Integrator};
use crate::specfun::{beta, gamma_real, HurstParameter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    MolchanGolosov,
    MandelbrotVanNess,
}

impl KernelKind {
    pub fn short_name(self) -> &'static str {
        match self {
            KernelKind::MolchanGolosov => "mg",
            KernelKind::MandelbrotVanNess => "mvn",
        }
    }
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mg" | "molchan-golosov" | "molchan_golosov" => Ok(KernelKind::MolchanGolosov),
            "mvn" | "mandelbrot-van-ness" | "mandelbrot_van_ness" => Ok(KernelKind::MandelbrotVanNess),
            other => Err(Error::InvalidInput(format!("unknown kernel kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentValue {
    Finite(f64),
    Divergent,
}

/// ∫ kernel(t,s)^K ds over the kernel's support, or a divergence certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelMomentResult {
    pub kind: KernelKind,
    pub value: MomentValue,
    pub k: u32,
    pub h: HurstParameter,
    pub t: f64,
}

impl KernelMomentResult {
    pub fn finite(&self) -> Option<f64> {
        match self.value {
            MomentValue::Finite(v) => Some(v),
            MomentValue::Divergent => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self.value, MomentValue::Divergent)
    }
}

impl std::fmt::Display for KernelMomentResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.value {
            MomentValue::Finite(v) => write!(f, "{v:.12e}"),
            MomentValue::Divergent => f.write_str("divergent"),
        }
    }
}

fn check_horizon(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("horizon t must be positive, got {t}")))
    }
}

// Sum of the series Σ_j Π_{i<j} ratio(i) · x^j with compensated summation.
fn ratio_series(x: f64, ratio: impl Fn(f64) -> f64) -> Result<f64> {
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut term = 1.0f64;
    for j in 0..crate::specfun::SERIES_MAX_TERMS {
        term *= ratio(j as f64) * x;
        let y = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - y) + term
        } else {
            (term - y) + sum
        };
        sum = y;
        if term.abs() <= crate::specfun::SERIES_REL_TOL * (sum + comp).abs() {
            return Ok(sum + comp);
        }
    }
    Err(Error::Accuracy {
        context: format!("kernel series at argument {x}"),
        partial: sum + comp,
        estimate: term.abs(),
    })
}

/// Molchan-Golosov kernel evaluator with the H-dependent constants cached.
#[derive(Debug, Clone, Copy)]
pub struct MgKernel {
    h: HurstParameter,
    p: f64,
    c: f64,
    connection: f64,
}

impl MgKernel {
    pub fn new(h: HurstParameter) -> Self {
        let p = h.offset();
        let connection = gamma_real(1.0 + p) * gamma_real(1.0 - 2.0 * p) / (2.0 * gamma_real(1.0 - p));
        Self {
            h,
            p,
            c: h.mg_constant(),
            connection,
        }
    }

    pub fn hurst(&self) -> HurstParameter {
        self.h
    }

    /// z_H(t, s); zero outside 0 < s < t.
    pub fn eval(&self, t: f64, s: f64) -> Result<f64> {
        check_horizon(t)?;
        if !(s > 0.0 && s < t) {
            return Ok(0.0);
        }
        let p = self.p;
        if p == 0.0 {
            return Ok(1.0);
        }
        let r = s / t;
        if r >= 0.5 {
            let w = 1.0 - r;
            let g = ratio_series(w, |j| (j - p) / (j + 1.0 + p))?;
            Ok(self.c * (t - s).powf(p) * r.powf(-p) * g)
        } else {
            let g = ratio_series(r, |j| (j - p) / (j + 1.0 - 2.0 * p))?;
            let lead = 0.5 * ((1.0 - r) / r).powf(p) * g;
            Ok(self.c * t.powf(p) * (lead + self.connection * r.powf(p)))
        }
    }
}

/// z_H(t, s), the Molchan-Golosov kernel; zero for s ∉ (0, t).
pub fn mg_kernel(h: HurstParameter, t: f64, s: f64) -> Result<f64> {
    MgKernel::new(h).eval(t, s)
}

/// z_H(t, s) for H > 1/2 through the integral representation
/// p c_H s^{−p} ∫_s^t u^p (u−s)^{p−1} du, evaluated with u = s + (t−s)y.
pub fn mg_kernel_integral_form(h: HurstParameter, t: f64, s: f64) -> Result<f64> {
    check_horizon(t)?;
    let p = h.offset();
    if p <= 0.0 {
        return Err(domain(format!("integral form of z_H needs H > 1/2, got {}", h.value())));
    }
    if !(s > 0.0 && s < t) {
        return Ok(0.0);
    }
    let d = t - s;
    let inner = Integrator::with_rel_tol(1e-12).integrate(
        |y| {
            if y > 0.0 {
                y.powf(p - 1.0) * (s + d * y).powf(p)
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        EndBehavior::Power(p - 1.0),
        EndBehavior::Regular,
    )?;
    Ok(p * h.mg_constant() * s.powf(-p) * d.powf(p) * inner.value)
}

/// ∂z_H(t,s)/∂s for H > 1/2, obtained by differentiating the integral form:
/// ∂_s z = p² c_H s^{−p} (t−s)^{p−1} [ (t−s)(B − A/s) − A ] with
/// A = ∫_0^1 y^{p−1}(s+(t−s)y)^p dy and B = ∫_0^1 y^{p−1}(1−y)(s+(t−s)y)^{p−1} dy.
pub fn mg_kernel_sderivative(h: HurstParameter, t: f64, s: f64) -> Result<f64> {
    check_horizon(t)?;
    let p = h.offset();
    if p <= 0.0 {
        return Err(domain(format!("kernel derivative needs H > 1/2, got {}", h.value())));
    }
    if !(s > 0.0 && s < t) {
        return Err(domain(format!("derivative needs 0 < s < t, got s = {s}, t = {t}")));
    }
    let d = t - s;
    let quad = Integrator::with_rel_tol(1e-12);
    let a = quad.integrate(
        |y| {
            if y > 0.0 {
                y.powf(p - 1.0) * (s + d * y).powf(p)
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        EndBehavior::Power(p - 1.0),
        EndBehavior::Regular,
    )?;
    let b = quad.integrate(
        |y| {
            if y > 0.0 {
                y.powf(p - 1.0) * (1.0 - y) * (s + d * y).powf(p - 1.0)
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        EndBehavior::Power(p - 1.0),
        EndBehavior::Regular,
    )?;
    let (a, b) = (a.value, b.value);
    Ok(p * p * h.mg_constant() * s.powf(-p) * d.powf(p - 1.0) * (d * (b - a / s) - a))
}

/// f_H(t, s) = C_H ((t−s)_+^p − (−s)_+^p).
pub fn mvn_kernel(h: HurstParameter, t: f64, s: f64) -> f64 {
    let p = h.offset();
    let c = h.mvn_constant();
    let a = t - s;
    let b = -s;
    match (a > 0.0, b > 0.0) {
        (false, false) => 0.0,
        (true, false) => c * a.powf(p),
        (false, true) => -c * b.powf(p),
        // (a^p − b^p) = b^p ((a/b)^p − 1), evaluated without cancellation when a ≈ b
        (true, true) => c * b.powf(p) * (p * ((a - b) / b).ln_1p()).exp_m1(),
    }
}

fn moment_integrator() -> Integrator {
    Integrator {
        abs_tol: 0.0,
        rel_tol: 1e-10,
        max_segments: 4000,
    }
}

fn check_moment_accuracy(value: f64, error: f64, what: &str) -> Result<()> {
    if error > 1e-5 * value.abs() {
        return Err(Error::Accuracy {
            context: what.to_string(),
            partial: value,
            estimate: error,
        });
    }
    Ok(())
}

// decimal inputs such as H = 0.7, K = 5 sit on the boundary only up to rounding
const BOUNDARY_SLACK: f64 = 1e-12;

/// Whether ∫_0^t z_H(t,s)^K ds diverges: K|H − 1/2| ≥ 1.
pub fn mg_moment_diverges(h: HurstParameter, k: u32) -> bool {
    k as f64 * h.offset().abs() >= 1.0 - BOUNDARY_SLACK
}

/// Whether ∫_{−∞}^t f_H(t,s)^K ds diverges: only for H < 1/2 with K(H − 1/2) ≤ −1.
pub fn mvn_moment_diverges(h: HurstParameter, k: u32) -> bool {
    k as f64 * h.offset() <= -1.0 + BOUNDARY_SLACK
}

/// ∫_ε^t z_H(t,s)^K ds, finite for every ε > 0.
pub fn mg_partial_moment(h: HurstParameter, t: f64, k: u32, eps: f64) -> Result<f64> {
    check_horizon(t)?;
    if !(eps > 0.0 && eps < t) {
        return Err(domain(format!("cut-off must lie in (0, t), got {eps}")));
    }
    let kernel = MgKernel::new(h);
    let kp = k as f64 * h.offset();
    let right = if kp <= -1.0 || kp == 0.0 {
        EndBehavior::Regular
    } else {
        EndBehavior::Power(kp)
    };
    if kp <= -1.0 {
        return Err(domain("partial moment only cuts the left end; the right end diverges"));
    }
    // geometric breakpoints resolve the s^{−K|p|} growth towards ε
    let mut points = vec![eps];
    let mut x = eps;
    while x * 4.0 < t {
        x *= 4.0;
        points.push(x);
    }
    points.push(t);
    let mut ends = vec![(EndBehavior::Regular, EndBehavior::Regular); points.len() - 1];
    if let Some(last) = ends.last_mut() {
        last.1 = right;
    }
    let mut failure = None;
    let r = moment_integrator().integrate_pieces(
        |s| match kernel.eval(t, s) {
            Ok(z) => z.powi(k as i32),
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        &points,
        &ends,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let r = r?;
    check_moment_accuracy(r.value, r.error, "partial Molchan-Golosov moment")?;
    Ok(r.value)
}

fn mg_moment(h: HurstParameter, t: f64, k: u32) -> Result<f64> {
    let kernel = MgKernel::new(h);
    let p = h.offset();
    if p == 0.0 {
        return Ok(t);
    }
    let kp = k as f64 * p;
    let left = EndBehavior::Power(-(k as f64) * p.abs());
    let right = EndBehavior::Power(kp);
    let mut failure = None;
    let r = moment_integrator().integrate(
        |s| match kernel.eval(t, s) {
            Ok(z) => z.powi(k as i32),
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        t,
        left,
        right,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let r = r?;
    check_moment_accuracy(r.value, r.error, "Molchan-Golosov moment")?;
    Ok(r.value)
}

// ∫_{−∞}^t f^K = C^K [ t^{Kp+1}/(Kp+1) + ∫_0^t ((t+v)^p − v^p)^K dv
//                     + t^{Kp+1} ∫_0^1 y^{−Kp−2} ((1+y)^p − 1)^K dy ],
// the last piece being the substitution v = t/y of ∫_t^∞.
fn mvn_moment(h: HurstParameter, t: f64, k: u32) -> Result<f64> {
    let p = h.offset();
    let c = h.mvn_constant();
    if p == 0.0 {
        return Ok(t);
    }
    let kf = k as f64;
    let ki = k as i32;
    let kp = kf * p;
    let quad = moment_integrator();
    let head = t.powf(kp + 1.0) / (kp + 1.0);

    let near_left = if p < 0.0 {
        EndBehavior::Power(kp)
    } else {
        EndBehavior::Regular
    };
    let near = quad.integrate(
        |v| {
            if v <= 0.0 {
                return 0.0;
            }
            (v.powf(p) * (p * (t / v).ln_1p()).exp_m1()).powi(ki)
        },
        0.0,
        t,
        near_left,
        EndBehavior::Regular,
    )?;
    check_moment_accuracy(near.value, near.error, "Mandelbrot-Van Ness moment on (−t, 0)")?;

    let far_exp = kf * (1.0 - p) - 2.0;
    let far = quad.integrate(
        |y| {
            if y <= 0.0 {
                return 0.0;
            }
            // y^{−Kp−2}((1+y)^p − 1)^K = y^{K(1−p)−2} (expm1(p ln1p y)/y)^K
            y.powf(far_exp) * ((p * y.ln_1p()).exp_m1() / y).powi(ki)
        },
        0.0,
        1.0,
        if far_exp == 0.0 {
            EndBehavior::Regular
        } else {
            EndBehavior::Power(far_exp)
        },
        EndBehavior::Regular,
    )?;
    check_moment_accuracy(far.value, far.error, "Mandelbrot-Van Ness moment on (−∞, −t)")?;

    Ok(c.powi(ki) * (head + near.value + t.powf(kp + 1.0) * far.value))
}

/// ∫ kernel(t,s)^K ds over the support, with analytic divergence detection.
pub fn kernel_moment(kind: KernelKind, h: HurstParameter, t: f64, k: u32) -> Result<KernelMomentResult> {
    check_horizon(t)?;
    if k < 2 {
        return Err(domain(format!("moment order must be at least 2, got {k}")));
    }
    let value = match kind {
        KernelKind::MolchanGolosov if mg_moment_diverges(h, k) => MomentValue::Divergent,
        KernelKind::MandelbrotVanNess if mvn_moment_diverges(h, k) => MomentValue::Divergent,
        KernelKind::MolchanGolosov => MomentValue::Finite(mg_moment(h, t, k)?),
        KernelKind::MandelbrotVanNess => MomentValue::Finite(mvn_moment(h, t, k)?),
    };
    Ok(KernelMomentResult { kind, value, k, h, t })
}

/// ∫_0^t z_H(t,s)² ds; equals t^{2H}.
pub fn mg_kernel_l2(h: HurstParameter, t: f64) -> Result<f64> {
    check_horizon(t)?;
    mg_moment(h, t, 2)
}

/// ∫_{−∞}^t f_H(t,s)² ds; equals t^{2H}.
pub fn mvn_kernel_l2(h: HurstParameter, t: f64) -> Result<f64> {
    check_horizon(t)?;
    mvn_moment(h, t, 2)
}

/// Beta-function bounds (g1, g2) on the normalised fourth moments of the two
/// kernels at t = 1, for 1/2 < H < 3/4.
pub fn g1_g2_bounds(h: HurstParameter) -> Result<(f64, f64)> {
    let hv = h.value();
    if !(hv > 0.5 && hv < 0.75) {
        return Err(domain(format!("moment bounds need 1/2 < H < 3/4, got {hv}")));
    }
    let q = 4.0 * hv - 1.0;
    let g1 = beta(3.0 - 4.0 * hv, q)? / 16.0
        + beta(2.0 - 2.0 * hv, q)? / 4.0
        + beta(2.0 * hv, q)? / 4.0
        + beta(q, q)? / 16.0
        + 0.375 / q;
    let p = h.offset();
    let g2 = p.powi(4) / (5.0 - 4.0 * p) + 1.0 / (4.0 * p + 1.0);
    Ok((g1, g2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(h: f64) -> HurstParameter {
        HurstParameter::new(h).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // mpmath hyp2f1 on the defining formula, t = 1
    const MG_REFERENCE: [(f64, [f64; 4]); 4] = [
        (
            0.25,
            [
                2.233_712_439_772_522,
                0.877_948_548_173_557_9,
                0.820_322_623_764_752_8,
                1.159_100_845_704_950_9,
            ],
        ),
        (
            0.6,
            [
                1.352_685_756_221_852_6,
                1.104_311_054_719_638_7,
                1.011_531_420_149_450_5,
                0.855_543_038_445_604_3,
            ],
        ),
        (
            0.75,
            [
                3.129_957_768_034_790_2,
                1.271_826_030_873_253,
                0.937_591_963_698_057_2,
                0.604_773_005_021_864_4,
            ],
        ),
        (
            0.9,
            [
                6.483_060_861_215_905_6,
                1.212_574_786_079_335_4,
                0.675_897_991_721_780_4,
                0.326_977_163_655_365,
            ],
        ),
    ];
    const MG_POINTS: [f64; 4] = [0.001, 0.1, 0.5, 0.9];

    #[test]
    fn mg_matches_high_precision_reference() {
        for (h, values) in MG_REFERENCE {
            let k = MgKernel::new(hp(h));
            for (s, want) in MG_POINTS.iter().zip(values) {
                let got = k.eval(1.0, *s).unwrap();
                assert!(rel(got, want) < 1e-12, "H={h} s={s}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn mg_scales_with_self_similarity() {
        // z_H(at, as) = a^{H−1/2} z_H(t, s)
        let k = MgKernel::new(hp(0.7));
        let a: f64 = 3.5;
        for s in [0.05, 0.4, 0.77] {
            let lhs = k.eval(a, a * s).unwrap();
            let rhs = a.powf(0.2) * k.eval(1.0, s).unwrap();
            assert!(rel(lhs, rhs) < 1e-13);
        }
    }

    #[test]
    fn mg_is_continuous_across_branch_switch() {
        for h in [0.1, 0.3, 0.6, 0.95] {
            let k = MgKernel::new(hp(h));
            let below = k.eval(1.0, 0.5 - 1e-12).unwrap();
            let above = k.eval(1.0, 0.5).unwrap();
            assert!(rel(below, above) < 1e-10, "H={h}");
        }
    }

    #[test]
    fn mg_brownian_case_and_support() {
        let h = hp(0.5);
        for s in [1e-9, 0.3, 0.999] {
            assert_eq!(mg_kernel(h, 1.0, s).unwrap(), 1.0);
        }
        for h in [hp(0.3), hp(0.75)] {
            assert_eq!(mg_kernel(h, 1.0, 1.1).unwrap(), 0.0);
            assert_eq!(mg_kernel(h, 1.0, 1.0).unwrap(), 0.0);
            assert_eq!(mg_kernel(h, 1.0, 0.0).unwrap(), 0.0);
            assert_eq!(mg_kernel(h, 1.0, -0.5).unwrap(), 0.0);
        }
        assert!(mg_kernel(hp(0.75), 0.0, 0.5).is_err());
    }

    #[test]
    fn series_and_integral_forms_agree() {
        for h in [0.55, 0.75, 0.9] {
            for s in [1e-4, 0.2, 0.5, 0.95] {
                let a = mg_kernel(hp(h), 1.0, s).unwrap();
                let b = mg_kernel_integral_form(hp(h), 1.0, s).unwrap();
                assert!(rel(a, b) < 1e-9, "H={h} s={s}: {a} vs {b}");
            }
        }
        assert!(mg_kernel_integral_form(hp(0.4), 1.0, 0.5).is_err());
    }

    #[test]
    fn mg_does_not_vanish_at_origin_for_large_h() {
        let k = MgKernel::new(hp(0.75));
        let mut prev = 0.0;
        for s in [1e-2, 1e-4, 1e-6, 1e-8] {
            let z = k.eval(1.0, s).unwrap();
            assert!(z > prev);
            prev = z;
        }
    }

    #[test]
    fn mvn_closed_form() {
        let h = hp(0.75);
        let c = h.mvn_constant();
        assert!(rel(mvn_kernel(h, 1.0, 0.5), c * 0.5f64.powf(0.25)) < 1e-15);
        assert!(rel(mvn_kernel(h, 1.0, -1.0), c * (2f64.powf(0.25) - 1.0)) < 1e-14);
        assert_eq!(mvn_kernel(h, 1.0, 1.5), 0.0);
        let b = hp(0.5);
        assert_eq!(mvn_kernel(b, 1.0, 0.0), 1.0);
        assert_eq!(mvn_kernel(b, 1.0, 0.7), 1.0);
        assert_eq!(mvn_kernel(b, 1.0, -0.7), 0.0);
        // negative t: only the (−s)_+ term or both
        assert!(rel(mvn_kernel(h, -1.0, -0.5), -c * 0.5f64.powf(0.25)) < 1e-15);
    }

    #[test]
    fn isometry_on_both_kernels() {
        for h in [0.25, 0.4, 0.6, 0.75, 0.9] {
            for t in [0.5f64, 1.0, 2.0] {
                let want = t.powf(2.0 * h);
                let z = mg_kernel_l2(hp(h), t).unwrap();
                let f = mvn_kernel_l2(hp(h), t).unwrap();
                assert!(rel(z, want) < 1e-7, "MG H={h} t={t}: {z}");
                assert!(rel(f, want) < 1e-7, "MvN H={h} t={t}: {f}");
            }
        }
        assert_eq!(mg_kernel_l2(hp(0.5), 2.0).unwrap(), 2.0);
    }

    #[test]
    fn increment_isometry() {
        // ∫ (z(t,u) − z(s,u))² du = |t − s|^{2H}
        let h = hp(0.7);
        let k = MgKernel::new(h);
        let (s, t) = (0.6, 1.0);
        let quad = Integrator::with_rel_tol(1e-10);
        let f = |u: f64| (k.eval(t, u).unwrap() - k.eval(s, u).unwrap()).powi(2);
        let ends = [
            (EndBehavior::Power(-0.4), EndBehavior::Power(0.4)),
            (EndBehavior::Regular, EndBehavior::Power(0.4)),
        ];
        let r = quad.integrate_pieces(f, &[0.0, s, t], &ends).unwrap();
        assert!(rel(r.value, 0.4f64.powf(1.4)) < 1e-6, "{}", r.value);
    }

    #[test]
    fn fourth_moments_and_their_gap() {
        // mpmath reference values at H = 0.6, t = 1
        let h = hp(0.6);
        let mg = kernel_moment(KernelKind::MolchanGolosov, h, 1.0, 4)
            .unwrap()
            .finite()
            .unwrap();
        let mvn = kernel_moment(KernelKind::MandelbrotVanNess, h, 1.0, 4)
            .unwrap()
            .finite()
            .unwrap();
        assert!(rel(mg, 1.040_643_461_709_277_7) < 1e-8, "{mg}");
        assert!(rel(mvn, 0.959_041_461_939_453_2) < 1e-8, "{mvn}");
        assert!(mg > 1.05 * mvn);
    }

    #[test]
    fn divergence_rules() {
        let m = kernel_moment(KernelKind::MolchanGolosov, hp(0.8), 1.0, 4).unwrap();
        assert!(m.is_divergent());
        assert_eq!(m.to_string(), "divergent");
        assert!(kernel_moment(KernelKind::MolchanGolosov, hp(0.75), 1.0, 4)
            .unwrap()
            .is_divergent());
        assert!(kernel_moment(KernelKind::MolchanGolosov, hp(0.2), 1.0, 4)
            .unwrap()
            .is_divergent());
        assert!(kernel_moment(KernelKind::MandelbrotVanNess, hp(0.2), 1.0, 4)
            .unwrap()
            .is_divergent());
        let mvn = kernel_moment(KernelKind::MandelbrotVanNess, hp(0.9), 1.0, 4).unwrap();
        assert!(mvn.finite().unwrap() > 0.0);
        assert!(kernel_moment(KernelKind::MolchanGolosov, hp(0.6), 1.0, 1).is_err());
    }

    #[test]
    fn decimal_boundaries_are_divergent() {
        assert!(mg_moment_diverges(hp(0.7), 5));
        assert!(mg_moment_diverges(hp(0.3), 5));
        assert!(mvn_moment_diverges(hp(0.3), 5));
        assert!(!mg_moment_diverges(hp(0.69), 5));
        assert!(!mvn_moment_diverges(hp(0.31), 5));
    }

    #[test]
    fn partial_moments_grow_past_divergence_threshold() {
        for h in [0.75, 0.8] {
            let vals: Vec<f64> = [1e-2, 1e-4, 1e-6]
                .iter()
                .map(|&e| mg_partial_moment(hp(h), 1.0, 4, e).unwrap())
                .collect();
            assert!(vals[0] < vals[1] && vals[1] < vals[2], "H={h}: {vals:?}");
        }
        // At H = 3/4, z ≈ (c/2) s^{−1/4} near 0, so each factor 100 in ε adds (c/2)^4 ln 100.
        let h = hp(0.75);
        let rate = (h.mg_constant() / 2.0).powi(4) * 100f64.ln();
        let a = mg_partial_moment(h, 1.0, 4, 1e-6).unwrap();
        let b = mg_partial_moment(h, 1.0, 4, 1e-8).unwrap();
        assert!(rel(b - a, rate) < 0.02, "{} vs {rate}", b - a);
    }

    #[test]
    fn beta_bounds() {
        let (g1, g2) = g1_g2_bounds(hp(0.6)).unwrap();
        assert!(rel(g1, 0.756_631_166_746_809_3) < 1e-10, "{g1}");
        assert!(rel(g2, 0.714_307_453_416_149_1) < 1e-12, "{g2}");
        assert!(g1 > g2);
        let (a, b) = g1_g2_bounds(hp(0.51)).unwrap();
        assert!(a > b);
        assert!(g1_g2_bounds(hp(0.5)).is_err());
        assert!(g1_g2_bounds(hp(0.75)).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = hp(0.75);
        let k = MgKernel::new(h);
        for s in [0.05, 0.5, 0.9] {
            let step = 1e-5;
            let fd = (k.eval(1.0, s + step).unwrap() - k.eval(1.0, s - step).unwrap()) / (2.0 * step);
            let d = mg_kernel_sderivative(h, 1.0, s).unwrap();
            assert!(rel(d, fd) < 1e-6, "s={s}: {d} vs {fd}");
        }
        assert!(mg_kernel_sderivative(hp(0.4), 1.0, 0.5).is_err());
        assert!(mg_kernel_sderivative(h, 1.0, 1.0).is_err());
    }

    #[test]
    fn derivative_blows_up_at_the_right_end() {
        let h = hp(0.75);
        let near = mg_kernel_sderivative(h, 1.0, 1.0 - 1e-8).unwrap();
        assert!(near.abs() > 1e4);
    }

    #[test]
    fn indicator_reduction_near_brownian_case() {
        for h in [0.5 + 1e-9, 0.5 - 1e-9] {
            let k = MgKernel::new(hp(h));
            for i in 0..=16 {
                let s = 0.1 + 0.8 * i as f64 / 16.0;
                assert!((k.eval(1.0, s).unwrap() - 1.0).abs() < 1e-3);
                assert!((mvn_kernel(hp(h), 1.0, s) - 1.0).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("mg".parse::<KernelKind>().unwrap(), KernelKind::MolchanGolosov);
        assert_eq!("MVN".parse::<KernelKind>().unwrap(), KernelKind::MandelbrotVanNess);
        assert!("rl".parse::<KernelKind>().is_err());
    }
}
