//! Monte Carlo estimators paired with their closed-form counterparts:
//! covariances, dyadic quadratic variation, cumulants, the characteristic
//! function and the probability of an exact zero.
//!
//! Every empirical figure comes with a Monte Carlo standard error and all
//! acceptance predicates are stated in standard-error units.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::kernels::{kernel_moment, mvn_kernel, KernelKind, MgKernel, MomentValue};
use crate::levy::{sample_compound_poisson, sample_two_sided, LevyMeasureSpec};
use crate::quad::{EndBehavior, Integrator};
use crate::rng::ensemble_map;
use crate::simulate::{flpmg_at, flpmvn_at, mvn_tail_slope, MvnOptions};
use crate::specfun::HurstParameter;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        self.comp += if self.sum.abs() >= x.abs() {
            (self.sum - t) + x
        } else {
            (x - t) + self.sum
        };
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut s = CompensatedSum::default();
    for x in xs {
        s.add(x);
    }
    s.value()
}

/// Sample mean and its standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = compensated_sum(xs.iter().copied()) / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = compensated_sum(xs.iter().map(|x| (x - mean) * (x - mean))) / (n - 1.0);
    (mean, (var / n).sqrt())
}

// Power sums of the data shifted by its mean.
#[derive(Debug, Clone, Copy)]
struct PowerSums {
    n: f64,
    s: [f64; 4],
}

impl PowerSums {
    fn new(xs: &[f64], shift: f64) -> Self {
        let mut acc = [CompensatedSum::default(); 4];
        for &x in xs {
            let d = x - shift;
            let d2 = d * d;
            acc[0].add(d);
            acc[1].add(d2);
            acc[2].add(d2 * d);
            acc[3].add(d2 * d2);
        }
        Self {
            n: xs.len() as f64,
            s: [acc[0].value(), acc[1].value(), acc[2].value(), acc[3].value()],
        }
    }

    fn without(&self, d: f64) -> Self {
        let d2 = d * d;
        Self {
            n: self.n - 1.0,
            s: [self.s[0] - d, self.s[1] - d2, self.s[2] - d2 * d, self.s[3] - d2 * d2],
        }
    }

    fn kstat(&self, k: u32) -> f64 {
        let n = self.n;
        let [s1, s2, s3, s4] = self.s;
        match k {
            2 => (n * s2 - s1 * s1) / (n * (n - 1.0)),
            3 => (2.0 * s1.powi(3) - 3.0 * n * s1 * s2 + n * n * s3) / (n * (n - 1.0) * (n - 2.0)),
            4 => {
                (-6.0 * s1.powi(4) + 12.0 * n * s1 * s1 * s2
                    - 3.0 * n * (n - 1.0) * s2 * s2
                    - 4.0 * n * (n + 1.0) * s1 * s3
                    + n * n * (n + 1.0) * s4)
                    / (n * (n - 1.0) * (n - 2.0) * (n - 3.0))
            }
            _ => unreachable!("k-statistics are provided for k = 2, 3, 4"),
        }
    }
}

fn check_kstat_args(n: usize, k: u32) -> Result<()> {
    if !(2..=4).contains(&k) {
        return Err(invalid(format!("k-statistics are provided for k = 2, 3, 4, got {k}")));
    }
    if n < 6 {
        return Err(invalid(format!(
            "need at least 6 samples for a jackknifed k-statistic, got {n}"
        )));
    }
    Ok(())
}

/// Unbiased k-statistic k_k of the sample.
pub fn kstat(xs: &[f64], k: u32) -> Result<f64> {
    check_kstat_args(xs.len(), k)?;
    let (mean, _) = mean_se(xs);
    Ok(PowerSums::new(xs, mean).kstat(k))
}

/// k-statistic with its delete-one jackknife standard error, in O(n).
pub fn kstat_jackknife(xs: &[f64], k: u32) -> Result<(f64, f64)> {
    check_kstat_args(xs.len(), k)?;
    let (mean, _) = mean_se(xs);
    let full = PowerSums::new(xs, mean);
    let leave_out: Vec<f64> = xs.iter().map(|&x| full.without(x - mean).kstat(k)).collect();
    Ok((full.kstat(k), jackknife_se(&leave_out)))
}

/// k_k(a) − k_k(b) on paired samples, with a jackknife standard error that
/// deletes pairs, so positive correlation between a_i and b_i is accounted for.
pub fn paired_kstat_difference(a: &[f64], b: &[f64], k: u32) -> Result<(f64, f64)> {
    if a.len() != b.len() {
        return Err(invalid("paired samples must have equal length"));
    }
    check_kstat_args(a.len(), k)?;
    let (ma, _) = mean_se(a);
    let (mb, _) = mean_se(b);
    let fa = PowerSums::new(a, ma);
    let fb = PowerSums::new(b, mb);
    let leave_out: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| fa.without(x - ma).kstat(k) - fb.without(y - mb).kstat(k))
        .collect();
    Ok((fa.kstat(k) - fb.kstat(k), jackknife_se(&leave_out)))
}

fn jackknife_se(leave_out: &[f64]) -> f64 {
    let n = leave_out.len() as f64;
    let mean = compensated_sum(leave_out.iter().copied()) / n;
    let ss = compensated_sum(leave_out.iter().map(|v| (v - mean) * (v - mean)));
    ((n - 1.0) / n * ss).sqrt()
}

/// Ensemble of process values at fixed times: `values[path][time]`.
pub fn sample_at_times(
    kind: KernelKind,
    h: HurstParameter,
    spec: &LevyMeasureSpec,
    times: &[f64],
    n: usize,
    master: u64,
    mvn: MvnOptions,
) -> Result<Vec<Vec<f64>>> {
    let horizon = times.iter().copied().fold(0.0, f64::max);
    if !(horizon > 0.0) {
        return Err(invalid("sampling times must include a positive time"));
    }
    let kernel = MgKernel::new(h);
    let paths: Vec<Result<Vec<f64>>> = ensemble_map(master, n, |_, seed| match kind {
        KernelKind::MolchanGolosov => {
            let d = sample_compound_poisson(spec, horizon, seed)?;
            flpmg_at(&kernel, &d.times, &d.sizes, times)
        }
        KernelKind::MandelbrotVanNess => {
            let d = sample_two_sided(spec, mvn.s_trunc, horizon, seed)?;
            Ok(flpmvn_at(h, &d, mvn_tail_slope(h, spec, mvn, seed), times))
        }
    });
    paths.into_iter().collect()
}

/// Closed form E Y_t Y_s = (m2/2)(t^{2H} + s^{2H} − |t−s|^{2H}).
pub fn analytic_covariance(h: HurstParameter, m2: f64, t: f64, s: f64) -> f64 {
    let two_h = 2.0 * h.value();
    0.5 * m2 * (t.abs().powf(two_h) + s.abs().powf(two_h) - (t - s).abs().powf(two_h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceCell {
    pub t: f64,
    pub s: f64,
    pub analytic: f64,
    pub empirical: f64,
    pub stderr: f64,
}

impl CovarianceCell {
    pub fn z(&self) -> f64 {
        z_score(self.empirical, self.analytic, self.stderr)
    }
}

fn z_score(empirical: f64, analytic: f64, se: f64) -> f64 {
    let d = empirical - analytic;
    if d == 0.0 {
        0.0
    } else {
        d / se
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceReport {
    pub cells: Vec<CovarianceCell>,
}

impl CovarianceReport {
    pub fn max_abs_z(&self) -> f64 {
        self.cells.iter().map(|c| c.z().abs()).fold(0.0, f64::max)
    }
}

/// Empirical E Y_t Y_s for every pair of `times` (the processes have mean 0),
/// against the fBm-type covariance scaled by m2.
pub fn covariance_grid(values: &[Vec<f64>], times: &[f64], h: HurstParameter, m2: f64) -> Result<CovarianceReport> {
    if values.len() < 2 {
        return Err(invalid("covariance needs an ensemble of at least two paths"));
    }
    if values.iter().any(|v| v.len() != times.len()) {
        return Err(invalid("every path must have one value per time"));
    }
    let mut cells = Vec::with_capacity(times.len() * times.len());
    for (i, &t) in times.iter().enumerate() {
        for (j, &s) in times.iter().enumerate() {
            let prods: Vec<f64> = values.iter().map(|v| v[i] * v[j]).collect();
            let (empirical, stderr) = mean_se(&prods);
            cells.push(CovarianceCell {
                t,
                s,
                analytic: analytic_covariance(h, m2, t, s),
                empirical,
                stderr,
            });
        }
    }
    Ok(CovarianceReport { cells })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicQvReport {
    pub interval: (f64, f64),
    pub levels: Vec<u32>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub expected: Vec<f64>,
}

impl DyadicQvReport {
    pub fn max_abs_z(&self) -> f64 {
        (0..self.levels.len())
            .map(|i| z_score(self.mean[i], self.expected[i], self.stderr[i]).abs())
            .fold(0.0, f64::max)
    }

    /// Least-squares slope of −log2 E V_n against n, which estimates 2H − 1.
    pub fn fitted_exponent(&self) -> f64 {
        let xs: Vec<f64> = self.levels.iter().map(|&n| n as f64).collect();
        let ys: Vec<f64> = self.mean.iter().map(|v| -v.log2()).collect();
        least_squares_slope(&xs, &ys)
    }
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// V_n = Σ_j (Y_{t_{j+1}} − Y_{t_j})² over the 2^n-cell dyadic partition,
/// read off values sampled on the 2^finest-cell partition.
pub fn dyadic_variation(values: &[f64], finest: u32, level: u32) -> Result<f64> {
    if level > finest {
        return Err(invalid(format!(
            "level {level} is finer than the sampled level {finest}"
        )));
    }
    if values.len() != (1usize << finest) + 1 {
        return Err(invalid(format!(
            "expected {} values for dyadic level {finest}, got {}",
            (1usize << finest) + 1,
            values.len()
        )));
    }
    let stride = 1usize << (finest - level);
    Ok(compensated_sum(
        values
            .iter()
            .step_by(stride)
            .collect::<Vec<_>>()
            .windows(2)
            .map(|w| (w[1] - w[0]).powi(2)),
    ))
}

/// Ensemble mean of V_n on [a, b] for each level, against m2 (b−a)^{2H} 2^{−n(2H−1)}.
/// `values[path]` holds the path at the 2^finest + 1 dyadic points of [a, b].
pub fn dyadic_qv(
    values: &[Vec<f64>],
    interval: (f64, f64),
    finest: u32,
    levels: &[u32],
    h: HurstParameter,
    m2: f64,
) -> Result<DyadicQvReport> {
    if levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("levels must be strictly increasing"));
    }
    let len = interval.1 - interval.0;
    let mut report = DyadicQvReport {
        interval,
        levels: levels.to_vec(),
        mean: Vec::new(),
        stderr: Vec::new(),
        expected: Vec::new(),
    };
    for &n in levels {
        let v: Vec<f64> = values
            .iter()
            .map(|p| dyadic_variation(p, finest, n))
            .collect::<Result<_>>()?;
        let (mean, se) = mean_se(&v);
        report.mean.push(mean);
        report.stderr.push(se);
        report
            .expected
            .push(m2 * len.powf(2.0 * h.value()) * 2f64.powf(-(n as f64) * (2.0 * h.value() - 1.0)));
    }
    Ok(report)
}

/// The dyadic points of [a, b] at the given level.
pub fn dyadic_points(interval: (f64, f64), level: u32) -> Vec<f64> {
    let n = 1usize << level;
    let (a, b) = interval;
    (0..=n)
        .map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CumulantReport {
    pub k: u32,
    pub analytic: MomentValue,
    pub empirical: f64,
    pub stderr: f64,
}

impl CumulantReport {
    pub fn z(&self) -> Option<f64> {
        match self.analytic {
            MomentValue::Finite(a) => Some(z_score(self.empirical, a, self.stderr)),
            MomentValue::Divergent => None,
        }
    }
}

/// Analytic κ_k(t) = m_k ∫ kernel^k, or divergent.
pub fn analytic_cumulant(
    kind: KernelKind,
    h: HurstParameter,
    spec: &LevyMeasureSpec,
    t: f64,
    k: u32,
) -> Result<MomentValue> {
    let mk = spec
        .moments()
        .get(k)
        .ok_or_else(|| invalid(format!("cumulant order {k} is not provided")))?;
    let r = kernel_moment(kind, h, t, k)?;
    Ok(match r.value {
        MomentValue::Finite(v) => MomentValue::Finite(v * mk),
        MomentValue::Divergent => MomentValue::Divergent,
    })
}

/// Second to fourth cumulants of the process at time t: analytic and k-statistics.
pub fn cumulants(
    kind: KernelKind,
    h: HurstParameter,
    spec: &LevyMeasureSpec,
    t: f64,
    n: usize,
    master: u64,
    mvn: MvnOptions,
) -> Result<Vec<CumulantReport>> {
    let values: Vec<f64> = sample_at_times(kind, h, spec, &[t], n, master, mvn)?
        .into_iter()
        .map(|v| v[0])
        .collect();
    (2..=4)
        .map(|k| {
            let (empirical, stderr) = kstat_jackknife(&values, k)?;
            Ok(CumulantReport {
                k,
                analytic: analytic_cumulant(kind, h, spec, t, k)?,
                empirical,
                stderr,
            })
        })
        .collect()
}

/// Empirical separation of the two processes through a cumulant of order k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparationReport {
    pub k: u32,
    pub analytic_mg: MomentValue,
    pub analytic_mvn: MomentValue,
    pub empirical_mg: f64,
    pub stderr_mg: f64,
    pub empirical_mvn: f64,
    pub stderr_mvn: f64,
    pub difference: f64,
    pub stderr_difference: f64,
}

impl SeparationReport {
    pub fn z(&self) -> f64 {
        self.difference / self.stderr_difference
    }
}

/// k-th cumulant of Y_t and X_t driven by the same jumps on (0, t], with a
/// paired jackknife error for the difference.
pub fn cumulant_separation(
    h: HurstParameter,
    spec: &LevyMeasureSpec,
    t: f64,
    k: u32,
    n: usize,
    master: u64,
    mvn: MvnOptions,
) -> Result<SeparationReport> {
    let y: Vec<f64> = sample_at_times(KernelKind::MolchanGolosov, h, spec, &[t], n, master, mvn)?
        .into_iter()
        .map(|v| v[0])
        .collect();
    let x: Vec<f64> = sample_at_times(KernelKind::MandelbrotVanNess, h, spec, &[t], n, master, mvn)?
        .into_iter()
        .map(|v| v[0])
        .collect();
    let (empirical_mg, stderr_mg) = kstat_jackknife(&y, k)?;
    let (empirical_mvn, stderr_mvn) = kstat_jackknife(&x, k)?;
    let (difference, stderr_difference) = paired_kstat_difference(&y, &x, k)?;
    Ok(SeparationReport {
        k,
        analytic_mg: analytic_cumulant(KernelKind::MolchanGolosov, h, spec, t, k)?,
        analytic_mvn: analytic_cumulant(KernelKind::MandelbrotVanNess, h, spec, t, k)?,
        empirical_mg,
        stderr_mg,
        empirical_mvn,
        stderr_mvn,
        difference,
        stderr_difference,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharFnPoint {
    pub times: Vec<f64>,
    pub freqs: Vec<f64>,
    pub analytic: Complex64,
    pub empirical: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
}

impl CharFnPoint {
    pub fn max_abs_z(&self) -> f64 {
        let d = self.empirical - self.analytic;
        z_score(d.re, 0.0, self.stderr_re)
            .abs()
            .max(z_score(d.im, 0.0, self.stderr_im).abs())
    }
}

const CHARFN_TRIM: f64 = 1e-10;

/// exp(∫ Ψ(Σ_j u_j kernel(t_j, s)) ds).
pub fn analytic_charfn(
    kind: KernelKind,
    h: HurstParameter,
    spec: &LevyMeasureSpec,
    times: &[f64],
    freqs: &[f64],
) -> Result<Complex64> {
    if times.len() != freqs.len() || times.is_empty() {
        return Err(invalid("times and frequencies must be non-empty and of equal length"));
    }
    if times[0] <= 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("times must be positive and strictly increasing"));
    }
    if freqs.iter().all(|&u| u == 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let kernel = MgKernel::new(h);
    let mut failure: Option<Error> = None;
    let mut arg = |s: f64| -> f64 {
        let mut a = 0.0;
        for (&t, &u) in times.iter().zip(freqs) {
            let k = match kind {
                KernelKind::MolchanGolosov => match kernel.eval(t, s) {
                    Ok(z) => z,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                },
                KernelKind::MandelbrotVanNess => mvn_kernel(h, t, s),
            };
            a += u * k;
        }
        a
    };
    let quad = Integrator {
        abs_tol: 1e-10,
        rel_tol: 1e-10,
        max_segments: 20_000,
    };
    // |Ψ| ≤ 2λ, so trimming a length ε next to a singular point costs at most 2λε.
    let mut breaks = vec![CHARFN_TRIM];
    if kind == KernelKind::MandelbrotVanNess {
        breaks = vec![-1.0, -CHARFN_TRIM, CHARFN_TRIM];
    }
    for &t in times {
        breaks.push(t - CHARFN_TRIM);
        breaks.push(t + CHARFN_TRIM);
    }
    breaks.pop();
    breaks.sort_by(f64::total_cmp);
    let mut total = Complex64::new(0.0, 0.0);
    for w in breaks.windows(2) {
        if w[1] - w[0] <= 2.0 * CHARFN_TRIM {
            continue;
        }
        let re = quad.integrate(
            |s| spec.psi(arg(s)).re,
            w[0],
            w[1],
            EndBehavior::Regular,
            EndBehavior::Regular,
        )?;
        let im = quad.integrate(
            |s| spec.psi(arg(s)).im,
            w[0],
            w[1],
            EndBehavior::Regular,
            EndBehavior::Regular,
        )?;
        total += Complex64::new(re.value, im.value);
    }
    if kind == KernelKind::MandelbrotVanNess {
        // (−∞, −1] through s = −1/y; the integrand then behaves like y^{−2p} at 0
        let p = h.offset();
        let left = if p == 0.0 {
            EndBehavior::Regular
        } else {
            EndBehavior::Power(-2.0 * p)
        };
        let re = quad.integrate(
            |y| {
                if y > 0.0 {
                    spec.psi(arg(-1.0 / y)).re / (y * y)
                } else {
                    0.0
                }
            },
            0.0,
            1.0,
            left,
            EndBehavior::Regular,
        )?;
        let im = quad.integrate(
            |y| {
                if y > 0.0 {
                    spec.psi(arg(-1.0 / y)).im / (y * y)
                } else {
                    0.0
                }
            },
            0.0,
            1.0,
            left,
            EndBehavior::Regular,
        )?;
        total += Complex64::new(re.value, im.value);
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(total.exp())
}

/// Analytic characteristic function against the ensemble mean of exp(i Σ u_j Y_{t_j}).
pub fn charfn(
    kind: KernelKind,
    h: HurstParameter,
    spec: &LevyMeasureSpec,
    times: &[f64],
    freqs: &[f64],
    n: usize,
    master: u64,
    mvn: MvnOptions,
) -> Result<CharFnPoint> {
    let analytic = analytic_charfn(kind, h, spec, times, freqs)?;
    let values = sample_at_times(kind, h, spec, times, n, master, mvn)?;
    let phases: Vec<f64> = values
        .iter()
        .map(|v| v.iter().zip(freqs).map(|(y, u)| y * u).sum())
        .collect();
    let re: Vec<f64> = phases.iter().map(|p| p.cos()).collect();
    let im: Vec<f64> = phases.iter().map(|p| p.sin()).collect();
    let (mr, sr) = mean_se(&re);
    let (mi, si) = mean_se(&im);
    Ok(CharFnPoint {
        times: times.to_vec(),
        freqs: freqs.to_vec(),
        analytic,
        empirical: Complex64::new(mr, mi),
        stderr_re: sr,
        stderr_im: si,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroProbabilityReport {
    pub p_mg: f64,
    pub stderr_mg: f64,
    pub p_mvn: f64,
    pub stderr_mvn: f64,
    /// e^{−λt}, a lower bound for P(Y_t = 0).
    pub bound_mg: f64,
    /// λ(1+t)e^{−λ(1+t)}, an upper bound for P(X_t = 0).
    pub bound_mvn: f64,
}

impl ZeroProbabilityReport {
    pub fn mg_ok(&self) -> bool {
        self.p_mg >= self.bound_mg - 3.0 * self.stderr_mg
    }

    pub fn mvn_ok(&self) -> bool {
        self.p_mvn <= self.bound_mvn + 3.0 * self.stderr_mvn
    }
}

fn frequency_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Frequencies of Y_t = 0 and X_t = 0 under a ±1 driver of intensity λ.
/// Y_t = 0 is read from the jump count; X_t = 0 means |X_t| < 1e−12.
pub fn zero_probability_test(
    h: HurstParameter,
    lambda: f64,
    t: f64,
    n: usize,
    master: u64,
    mvn: MvnOptions,
) -> Result<ZeroProbabilityReport> {
    if h.offset() <= 0.0 {
        return Err(Error::Domain(format!(
            "the zero-probability comparison needs H > 1/2, got {}",
            h.value()
        )));
    }
    let spec = LevyMeasureSpec::rademacher(lambda)?;
    let flags: Vec<Result<(bool, bool)>> = ensemble_map(master, n, |_, seed| {
        let d = sample_two_sided(&spec, mvn.s_trunc, t, seed)?;
        let mg_zero = d.future.times.iter().all(|&s| s >= t);
        let x = flpmvn_at(h, &d, mvn_tail_slope(h, &spec, mvn, seed), &[t])[0];
        Ok((mg_zero, x.abs() < 1e-12))
    });
    let flags: Vec<(bool, bool)> = flags.into_iter().collect::<Result<_>>()?;
    let p_mg = flags.iter().filter(|f| f.0).count() as f64 / n as f64;
    let p_mvn = flags.iter().filter(|f| f.1).count() as f64 / n as f64;
    Ok(ZeroProbabilityReport {
        p_mg,
        stderr_mg: frequency_se(p_mg, n),
        p_mvn,
        stderr_mvn: frequency_se(p_mvn, n),
        bound_mg: (-lambda * t).exp(),
        bound_mvn: lambda * (1.0 + t) * (-lambda * (1.0 + t)).exp(),
    })
}

/// One line of a `quantity,analytic,empirical,stderr` report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub quantity: String,
    pub analytic: MomentValue,
    pub empirical: f64,
    pub stderr: f64,
}

impl ReportRow {
    pub fn new(quantity: impl Into<String>, analytic: f64, empirical: f64, stderr: f64) -> Self {
        Self {
            quantity: quantity.into(),
            analytic: MomentValue::Finite(analytic),
            empirical,
            stderr,
        }
    }
}

pub fn rows_to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from("quantity,analytic,empirical,stderr\n");
    for r in rows {
        let analytic = match r.analytic {
            MomentValue::Finite(v) => v.to_string(),
            MomentValue::Divergent => "divergent".to_string(),
        };
        let _ = writeln!(out, "{},{},{},{}", r.quantity, analytic, r.empirical, r.stderr);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    DivergentAnalytic,
}

/// Machine-readable outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    pub details: serde_json::Value,
}

impl Verdict {
    pub fn new(check: impl Into<String>, pass: bool, details: serde_json::Value) -> Self {
        Self {
            check: check.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            details,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}
