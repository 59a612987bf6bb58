//! Sample paths of the Molchan-Golosov process Y, the Mandelbrot-Van Ness
//! process X, fractional Brownian motion, the shifted process Z^s and the
//! mixed model U = σZ + εW.
//!
//! All finite-activity schemes evaluate kernels at the exact jump times; the
//! output grid only selects where the path is reported.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::kernels::{mg_kernel_sderivative, mvn_kernel, KernelKind, MgKernel};
use crate::levy::{
    sample_brownian_increments, sample_compound_poisson, sample_two_sided, LevyMeasureSpec, TwoSidedPath,
};
use crate::quad::{EndBehavior, Integrator};
use crate::rng::{stream_rng, Stream};
use crate::specfun::HurstParameter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessKind {
    Mg,
    Mvn,
    Fbm,
    Mixed,
    Shifted,
}

impl ProcessKind {
    pub fn name(self) -> &'static str {
        match self {
            ProcessKind::Mg => "mg",
            ProcessKind::Mvn => "mvn",
            ProcessKind::Fbm => "fbm",
            ProcessKind::Mixed => "mixed",
            ProcessKind::Shifted => "shifted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeTag {
    JumpSum,
    PathwiseIbp,
    RiemannL2,
    TruncatedMvn,
    ShiftedMg,
}

impl SchemeTag {
    pub fn name(self) -> &'static str {
        match self {
            SchemeTag::JumpSum => "jump_sum",
            SchemeTag::PathwiseIbp => "pathwise_ibp",
            SchemeTag::RiemannL2 => "riemann_l2",
            SchemeTag::TruncatedMvn => "truncated_mvn",
            SchemeTag::ShiftedMg => "shifted_mg",
        }
    }
}

/// What replaces the driver's jumps before −S_trunc in the Mandelbrot-Van Ness sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailTreatment {
    /// Jumps before −S_trunc are dropped.
    Truncate,
    /// Their contribution, ≈ t · C_H p Σ (−u)^{p−1} ΔL_u, is replaced by t·A with
    /// A Gaussian of matching variance m2 C_H² p² S^{2p−1}/(1−2p).
    GaussianLinear,
}

impl TailTreatment {
    pub fn name(self) -> &'static str {
        match self {
            TailTreatment::Truncate => "truncate",
            TailTreatment::GaussianLinear => "gaussian_linear",
        }
    }
}

/// Strictly increasing reporting times starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(invalid("a time grid needs at least two points"));
        }
        if times[0] != 0.0 {
            return Err(invalid(format!("time grids start at 0, got {}", times[0])));
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("time grid must be finite and strictly increasing"));
        }
        Ok(Self { times })
    }

    /// `steps` equal cells on [0, horizon].
    pub fn uniform(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) || steps == 0 {
            return Err(invalid(format!(
                "need positive horizon and steps, got {horizon} and {steps}"
            )));
        }
        let dt = horizon / steps as f64;
        let mut times: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
        times[steps] = horizon;
        Self::new(times)
    }

    /// The dyadic partition of [0, horizon] into 2^level cells.
    pub fn dyadic(horizon: f64, level: u32) -> Result<Self> {
        if level > 24 {
            return Err(invalid(format!("dyadic level {level} is too fine")));
        }
        Self::uniform(horizon, 1usize << level)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("grid is non-empty")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Provenance of a path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathMeta {
    pub process: ProcessKind,
    pub hurst: f64,
    pub scheme: SchemeTag,
    pub seed: u64,
    pub spec_hash: Option<String>,
    /// Process-specific parameters in display order.
    pub params: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
    pub meta: PathMeta,
}

/// SHA-256 of the spec's canonical JSON, hex encoded.
pub fn spec_hash(spec: &LevyMeasureSpec) -> String {
    Sha256::digest(spec.to_json().as_bytes())
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

impl SamplePath {
    pub fn times(&self) -> &[f64] {
        self.grid.times()
    }

    /// exp(value) pointwise, the price process of the mixed model.
    pub fn exp_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.exp()).collect()
    }

    /// `t,value` CSV preceded by `#`-prefixed metadata lines.
    pub fn to_csv(&self) -> String {
        let m = &self.meta;
        let mut out = String::new();
        let _ = writeln!(out, "# process: {}", m.process.name());
        let _ = writeln!(out, "# hurst: {}", m.hurst);
        let _ = writeln!(out, "# scheme: {}", m.scheme.name());
        let _ = writeln!(out, "# seed: {}", m.seed);
        if let Some(h) = &m.spec_hash {
            let _ = writeln!(out, "# spec_hash: {h}");
        }
        for (k, v) in &m.params {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str("t,value\n");
        for (t, v) in self.grid.times().iter().zip(&self.values) {
            let _ = writeln!(out, "{t},{v}");
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

fn meta(
    process: ProcessKind,
    h: HurstParameter,
    scheme: SchemeTag,
    seed: u64,
    spec: Option<&LevyMeasureSpec>,
) -> PathMeta {
    PathMeta {
        process,
        hurst: h.value(),
        scheme,
        seed,
        spec_hash: spec.map(spec_hash),
        params: Vec::new(),
    }
}

/// Y_t = Σ_{τ_i < t} z_H(t, τ_i) J_i at each of `times`.
pub fn flpmg_at(kernel: &MgKernel, jump_times: &[f64], sizes: &[f64], times: &[f64]) -> Result<Vec<f64>> {
    times
        .iter()
        .map(|&t| {
            let mut acc = 0.0;
            for (&s, &j) in jump_times.iter().zip(sizes) {
                if s >= t {
                    break;
                }
                acc += kernel.eval(t, s)? * j;
            }
            Ok(acc)
        })
        .collect()
}

/// Molchan-Golosov process by the exact jump sum.
pub fn simulate_flpmg_jumpsum(
    h: HurstParameter,
    spec: &LevyMeasureSpec,
    grid: &TimeGrid,
    seed: u64,
) -> Result<SamplePath> {
    let driver = sample_compound_poisson(spec, grid.horizon(), seed)?;
    let values = flpmg_at(&MgKernel::new(h), &driver.times, &driver.sizes, grid.times())?;
    Ok(SamplePath {
        grid: grid.clone(),
        values,
        meta: meta(ProcessKind::Mg, h, SchemeTag::JumpSum, seed, Some(spec)),
    })
}

/// Y_t = −∫_0^t ∂_s z_H(t,s) L_s ds with L constant between jumps, so the
/// integral splits into pieces [τ_k, min(τ_{k+1}, t)] weighted by L_{τ_k}.
pub fn flpmg_ibp_at(h: HurstParameter, jump_times: &[f64], sizes: &[f64], times: &[f64]) -> Result<Vec<f64>> {
    let p = h.offset();
    if p <= 0.0 {
        return Err(Error::Domain(format!(
            "the pathwise scheme needs H > 1/2, got {}",
            h.value()
        )));
    }
    let quad = Integrator {
        abs_tol: 1e-11,
        rel_tol: 1e-9,
        max_segments: 2000,
    };
    let mut levels = Vec::with_capacity(sizes.len());
    let mut level = 0.0;
    for &j in sizes {
        level += j;
        levels.push(level);
    }
    times
        .iter()
        .map(|&t| {
            let mut acc = 0.0;
            for (k, &start) in jump_times.iter().enumerate() {
                if start >= t {
                    break;
                }
                let next = jump_times.get(k + 1).copied().unwrap_or(f64::INFINITY);
                let (end, right) = if next < t {
                    (next, EndBehavior::Regular)
                } else {
                    (t, EndBehavior::Power(p - 1.0))
                };
                let mut failure = None;
                let piece = quad.integrate(
                    |s| {
                        if s <= start || s >= t {
                            return 0.0;
                        }
                        match mg_kernel_sderivative(h, t, s) {
                            Ok(d) => d,
                            Err(e) => {
                                failure.get_or_insert(e);
                                0.0
                            }
                        }
                    },
                    start,
                    end,
                    EndBehavior::Regular,
                    right,
                );
                if let Some(e) = failure {
                    return Err(e);
                }
                acc -= levels[k] * piece?.value;
            }
            Ok(acc)
        })
        .collect()
}

/// Molchan-Golosov process through the pathwise integration-by-parts formula.
pub fn simulate_flpmg_ibp(h: HurstParameter, spec: &LevyMeasureSpec, grid: &TimeGrid, seed: u64) -> Result<SamplePath> {
    let driver = sample_compound_poisson(spec, grid.horizon(), seed)?;
    let values = flpmg_ibp_at(h, &driver.times, &driver.sizes, grid.times())?;
    Ok(SamplePath {
        grid: grid.clone(),
        values,
        meta: meta(ProcessKind::Mg, h, SchemeTag::PathwiseIbp, seed, Some(spec)),
    })
}

/// Past horizon and tail handling for the Mandelbrot-Van Ness sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MvnOptions {
    pub s_trunc: f64,
    pub tail: TailTreatment,
}

/// max(50, 20T).
pub fn default_s_trunc(horizon: f64) -> f64 {
    (20.0 * horizon).max(50.0)
}

impl MvnOptions {
    pub fn for_horizon(horizon: f64) -> Self {
        Self {
            s_trunc: default_s_trunc(horizon),
            tail: TailTreatment::GaussianLinear,
        }
    }

    pub fn truncated(s_trunc: f64) -> Self {
        Self {
            s_trunc,
            tail: TailTreatment::Truncate,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.s_trunc > 0.0 && self.s_trunc.is_finite() {
            Ok(())
        } else {
            Err(invalid(format!("S_trunc must be positive, got {}", self.s_trunc)))
        }
    }
}

/// Standard deviation of the linearised tail slope A for jumps before −S.
pub fn mvn_tail_sd(h: HurstParameter, m2: f64, s_trunc: f64) -> f64 {
    let p = h.offset();
    let c = h.mvn_constant();
    (m2 * c * c * p * p * s_trunc.powf(2.0 * p - 1.0) / (1.0 - 2.0 * p)).sqrt()
}

/// Tail slope A for a path, zero under `TailTreatment::Truncate`.
pub fn mvn_tail_slope(h: HurstParameter, spec: &LevyMeasureSpec, opts: MvnOptions, seed: u64) -> f64 {
    match opts.tail {
        TailTreatment::Truncate => 0.0,
        TailTreatment::GaussianLinear => {
            let z: f64 = stream_rng(seed, Stream::Tail).sample(StandardNormal);
            z * mvn_tail_sd(h, spec.moments().m2, opts.s_trunc)
        }
    }
}

/// X_t = Σ_u f_H(t, u) ΔL_u + t·A at each of `times`.
pub fn flpmvn_at(h: HurstParameter, driver: &TwoSidedPath, tail_slope: f64, times: &[f64]) -> Vec<f64> {
    times
        .iter()
        .map(|&t| {
            let mut acc = 0.0;
            for (u, j) in driver.jumps() {
                if u >= t {
                    break;
                }
                acc += mvn_kernel(h, t, u) * j;
            }
            acc + t * tail_slope
        })
        .collect()
}

/// Mandelbrot-Van Ness process from a two-sided driver on [−S_trunc, T].
pub fn simulate_flpmvn(
    h: HurstParameter,
    spec: &LevyMeasureSpec,
    grid: &TimeGrid,
    seed: u64,
    opts: MvnOptions,
) -> Result<SamplePath> {
    opts.validate()?;
    let driver = sample_two_sided(spec, opts.s_trunc, grid.horizon(), seed)?;
    let slope = mvn_tail_slope(h, spec, opts, seed);
    let values = flpmvn_at(h, &driver, slope, grid.times());
    let mut m = meta(ProcessKind::Mvn, h, SchemeTag::TruncatedMvn, seed, Some(spec));
    m.params.push(("s_trunc".into(), opts.s_trunc.to_string()));
    m.params.push(("tail".into(), opts.tail.name().into()));
    Ok(SamplePath {
        grid: grid.clone(),
        values,
        meta: m,
    })
}

/// Weight of a driver jump at time v in Z^s_t for a generic F̃, where
/// z_H(t+s, v+s) = c_H (t−v)^p F̃((v−t)/(v+s)):
/// c_H (t−v)^p F̃((v−t)/(v+s)) 1{−s<v<t} − c_H (−v)^p F̃(v/(v+s)) 1{−s<v<0}.
pub fn shifted_weight_with(h: HurstParameter, f_tilde: impl Fn(f64) -> f64, t: f64, s: f64, v: f64) -> f64 {
    if !(v > -s && v < t) {
        return 0.0;
    }
    let p = h.offset();
    let c = h.mg_constant();
    let mut w = c * (t - v).powf(p) * f_tilde((v - t) / (v + s));
    if v < 0.0 {
        w -= c * (-v).powf(p) * f_tilde(v / (v + s));
    }
    w
}

/// The same weight with the true F̃, z_H(t+s, v+s) − z_H(s, v+s).
pub fn shifted_weight(kernel: &MgKernel, t: f64, s: f64, v: f64) -> Result<f64> {
    if !(v > -s && v < t) {
        return Ok(0.0);
    }
    let mut w = kernel.eval(t + s, v + s)?;
    if v < 0.0 {
        w -= kernel.eval(s, v + s)?;
    }
    Ok(w)
}

/// Z^s_t = Y^s_{t+s} − Y^s_s, the Molchan-Golosov process started at −s,
/// at each of `times`. The driver's past must reach back to −s.
pub fn shifted_at(kernel: &MgKernel, driver: &TwoSidedPath, s: f64, times: &[f64]) -> Result<Vec<f64>> {
    if driver.past.horizon < s {
        return Err(invalid(format!(
            "driver past reaches {} but the shift is {s}",
            driver.past.horizon
        )));
    }
    times
        .iter()
        .map(|&t| {
            let mut acc = 0.0;
            for (v, j) in driver.jumps() {
                if v <= -s {
                    continue;
                }
                if v >= t {
                    break;
                }
                acc += shifted_weight(kernel, t, s, v)? * j;
            }
            Ok(acc)
        })
        .collect()
}

/// Shifted Molchan-Golosov process Z^s on the grid.
pub fn simulate_shifted_mg(
    h: HurstParameter,
    spec: &LevyMeasureSpec,
    s_shift: f64,
    grid: &TimeGrid,
    seed: u64,
) -> Result<SamplePath> {
    if !(s_shift > 0.0 && s_shift.is_finite()) {
        return Err(invalid(format!("shift must be positive, got {s_shift}")));
    }
    let driver = sample_two_sided(spec, s_shift, grid.horizon(), seed)?;
    let values = shifted_at(&MgKernel::new(h), &driver, s_shift, grid.times())?;
    let mut m = meta(ProcessKind::Shifted, h, SchemeTag::ShiftedMg, seed, Some(spec));
    m.params.push(("shift".into(), s_shift.to_string()));
    Ok(SamplePath {
        grid: grid.clone(),
        values,
        meta: m,
    })
}

/// Z^s_t − Z^∞_t for each shift on one coupled driver, with
/// Z^∞ = (c_H/C_H) X computed from jumps back to −past_horizon plus the
/// Gaussian tail beyond it.
pub fn coupled_shift_differences(
    h: HurstParameter,
    spec: &LevyMeasureSpec,
    shifts: &[f64],
    t: f64,
    past_horizon: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    if shifts.iter().any(|&s| !(s > 0.0 && s <= past_horizon)) {
        return Err(invalid("every shift must lie in (0, past_horizon]"));
    }
    let driver = sample_two_sided(spec, past_horizon, t, seed)?;
    let opts = MvnOptions {
        s_trunc: past_horizon,
        tail: TailTreatment::GaussianLinear,
    };
    let slope = mvn_tail_slope(h, spec, opts, seed);
    let ratio = h.mg_constant() / h.mvn_constant();
    let z_inf = ratio * flpmvn_at(h, &driver, slope, &[t])[0];
    let kernel = MgKernel::new(h);
    shifts
        .iter()
        .map(|&s| Ok(shifted_at(&kernel, &driver, s, &[t])?[0] - z_inf))
        .collect()
}

/// Cell-average weights w_{ij} = (1/Δ_j) ∫_{cell j} z_H(t_i, s) ds turning
/// Brownian increments on the grid into fBm values.
#[derive(Debug, Clone)]
pub struct FbmWeights {
    grid: TimeGrid,
    rows: Vec<Vec<f64>>,
}

impl FbmWeights {
    pub fn new(h: HurstParameter, grid: &TimeGrid) -> Result<Self> {
        let kernel = MgKernel::new(h);
        let p = h.offset();
        let quad = Integrator {
            abs_tol: 1e-13,
            rel_tol: 1e-10,
            max_segments: 1000,
        };
        let times = grid.times();
        let mut rows = Vec::with_capacity(times.len());
        for (i, &t) in times.iter().enumerate() {
            let mut row = Vec::with_capacity(i);
            for j in 0..i {
                let (a, b) = (times[j], times[j + 1]);
                let left = if j == 0 {
                    EndBehavior::Power(-p.abs())
                } else {
                    EndBehavior::Regular
                };
                let right = if j + 1 == i {
                    EndBehavior::Power(p)
                } else {
                    EndBehavior::Regular
                };
                let mut failure = None;
                let r = quad.integrate(
                    |s| match kernel.eval(t, s) {
                        Ok(z) => z,
                        Err(e) => {
                            failure.get_or_insert(e);
                            0.0
                        }
                    },
                    a,
                    b,
                    left,
                    right,
                );
                if let Some(e) = failure {
                    return Err(e);
                }
                row.push(r?.value / (b - a));
            }
            rows.push(row);
        }
        Ok(Self {
            grid: grid.clone(),
            rows,
        })
    }

    /// B^H_{t_i} = Σ_{j<i} w_{ij} ΔW_j.
    pub fn apply(&self, increments: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(increments).map(|(w, dw)| w * dw).sum())
            .collect()
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }
}

/// fBm on the grid via the Molchan-Golosov representation, using precomputed weights.
pub fn simulate_fbm_with(weights: &FbmWeights, h: HurstParameter, seed: u64) -> Result<SamplePath> {
    let dw = sample_brownian_increments(weights.grid.times(), seed)?;
    Ok(SamplePath {
        grid: weights.grid.clone(),
        values: weights.apply(&dw),
        meta: meta(ProcessKind::Fbm, h, SchemeTag::RiemannL2, seed, None),
    })
}

/// fBm on the grid via the Molchan-Golosov representation.
pub fn simulate_fbm_mg(h: HurstParameter, grid: &TimeGrid, seed: u64) -> Result<SamplePath> {
    simulate_fbm_with(&FbmWeights::new(h, grid)?, h, seed)
}

/// Parameters of U = σZ + εW.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedParams {
    pub sigma: f64,
    pub epsilon: f64,
    pub kind: KernelKind,
    pub mvn: MvnOptions,
}

/// U = σZ + εW with Z the fractional Lévy process of the given kind and W
/// an independent Brownian motion.
pub fn simulate_mixed(
    h: HurstParameter,
    spec: &LevyMeasureSpec,
    params: MixedParams,
    grid: &TimeGrid,
    seed: u64,
) -> Result<SamplePath> {
    if h.offset() <= 0.0 {
        return Err(Error::Domain(format!(
            "the mixed model needs H > 1/2, got {}",
            h.value()
        )));
    }
    if !(params.sigma > 0.0 && params.epsilon > 0.0) {
        return Err(invalid(format!(
            "σ and ε must be positive, got {} and {}",
            params.sigma, params.epsilon
        )));
    }
    let z = match params.kind {
        KernelKind::MolchanGolosov => simulate_flpmg_jumpsum(h, spec, grid, seed)?,
        KernelKind::MandelbrotVanNess => simulate_flpmvn(h, spec, grid, seed, params.mvn)?,
    };
    let dw = sample_brownian_increments(grid.times(), seed)?;
    let mut w = 0.0;
    let mut values = Vec::with_capacity(grid.len());
    values.push(params.sigma * z.values[0]);
    for (zi, d) in z.values[1..].iter().zip(&dw) {
        w += d;
        values.push(params.sigma * zi + params.epsilon * w);
    }
    let mut m = z.meta;
    m.process = ProcessKind::Mixed;
    m.params.push(("kernel".into(), params.kind.short_name().into()));
    m.params.push(("sigma".into(), params.sigma.to_string()));
    m.params.push(("epsilon".into(), params.epsilon.to_string()));
    Ok(SamplePath {
        grid: grid.clone(),
        values,
        meta: m,
    })
}
