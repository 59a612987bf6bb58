//! Command definitions and their implementations.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use frale_core::kernels::{g1_g2_bounds, kernel_moment, mg_kernel, mvn_kernel, KernelKind, MomentValue};
use frale_core::levy::LevyMeasureSpec;
use frale_core::simulate::{
    default_s_trunc, simulate_fbm_mg, simulate_flpmg_ibp, simulate_flpmg_jumpsum, simulate_flpmvn, simulate_mixed,
    MixedParams, MvnOptions, ProcessKind, SamplePath, SchemeTag, TailTreatment, TimeGrid,
};
use frale_core::specfun::HurstParameter;
use frale_core::Error;
use serde::Serialize;

use crate::checks::{run_suite, Budget, Suite, SuiteConfig};
use crate::svg::polyline_svg;
use crate::{EXIT_FAIL, EXIT_INCOMPLETE, EXIT_PASS};

#[derive(Debug, Parser)]
#[command(name = "frale", version, about = "Simulate and verify fractional Lévy processes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a kernel, its moments, or the g1 − g2 curve.
    Kernel(KernelArgs),
    /// Simulate one path on a uniform grid.
    Simulate(SimulateArgs),
    /// Run a verification suite and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Mg,
    Mvn,
}

impl From<KindArg> for KernelKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Mg => KernelKind::MolchanGolosov,
            KindArg::Mvn => KernelKind::MandelbrotVanNess,
        }
    }
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long, value_enum, default_value = "mg")]
    pub kind: KindArg,
    /// Required unless --g1g2 is given.
    #[arg(long, required_unless_present = "g1g2")]
    pub hurst: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Number of s values, or of H values with --g1g2.
    #[arg(long, default_value_t = 512)]
    pub points: usize,
    /// Append ∫ kernel(t,s)^K ds.
    #[arg(long)]
    pub moment: Option<u32>,
    /// Sweep H over (1/2, 3/4) and tabulate g1, g2 and the quadrature gap.
    #[arg(long)]
    pub g1g2: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProcessArg {
    Mg,
    Mvn,
    Fbm,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    JumpSum,
    PathwiseIbp,
    TruncatedMvn,
    RiemannL2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TailArg {
    GaussianLinear,
    Truncate,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub process: ProcessArg,
    #[arg(long)]
    pub hurst: f64,
    /// Lévy measure JSON; required for every process except fbm.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub horizon: f64,
    /// Number of grid steps.
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    /// Past horizon of the Mandelbrot-Van Ness driver [default: max(50, 20T)].
    #[arg(long)]
    pub s_trunc: Option<f64>,
    #[arg(long, value_enum, default_value = "gaussian-linear")]
    pub tail: TailArg,
    /// Mixed model: weight of the fractional Lévy part.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Mixed model: weight of the Brownian part.
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    /// Mixed model: kernel of the fractional Lévy part.
    #[arg(long, value_enum, default_value = "mg")]
    pub kernel: KindArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Wall-clock seconds; checks not started in time are reported as skipped.
    #[arg(long, default_value_t = 300.0)]
    pub budget: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub hurst: Option<f64>,
    /// Override the suite's ensemble size.
    #[arg(long)]
    pub paths: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated parameters of one simulated path.
#[derive(Debug, Clone)]
pub struct SimulateRequest {
    pub process: ProcessKind,
    pub hurst: f64,
    pub spec: Option<LevyMeasureSpec>,
    pub horizon: f64,
    pub steps: usize,
    pub seed: u64,
    pub scheme: Option<SchemeTag>,
    pub mvn: MvnOptions,
    pub sigma: f64,
    pub epsilon: f64,
    pub kernel: KernelKind,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub fn simulate_path(req: &SimulateRequest) -> frale_core::Result<SamplePath> {
    let h = HurstParameter::new(req.hurst)?;
    let grid = TimeGrid::uniform(req.horizon, req.steps)?;
    let spec = || {
        req.spec
            .as_ref()
            .ok_or_else(|| invalid(format!("--spec is required for process {}", req.process.name())))
    };
    let scheme_error = |s: SchemeTag| {
        Err(invalid(format!(
            "scheme {} does not apply to process {}",
            s.name(),
            req.process.name()
        )))
    };
    match (req.process, req.scheme) {
        (ProcessKind::Mg, None | Some(SchemeTag::JumpSum)) => simulate_flpmg_jumpsum(h, spec()?, &grid, req.seed),
        (ProcessKind::Mg, Some(SchemeTag::PathwiseIbp)) => simulate_flpmg_ibp(h, spec()?, &grid, req.seed),
        (ProcessKind::Mvn, None | Some(SchemeTag::TruncatedMvn)) => {
            simulate_flpmvn(h, spec()?, &grid, req.seed, req.mvn)
        }
        (ProcessKind::Fbm, None | Some(SchemeTag::RiemannL2)) => simulate_fbm_mg(h, &grid, req.seed),
        (ProcessKind::Mixed, None) => {
            let params = MixedParams {
                sigma: req.sigma,
                epsilon: req.epsilon,
                kind: req.kernel,
                mvn: req.mvn,
            };
            simulate_mixed(h, spec()?, params, &grid, req.seed)
        }
        (ProcessKind::Shifted, _) => Err(invalid("shifted paths are not exposed on the command line")),
        (_, Some(s)) => scheme_error(s),
    }
}

impl SimulateArgs {
    pub fn to_request(&self) -> Result<SimulateRequest> {
        let spec = match &self.spec {
            Some(path) => {
                Some(LevyMeasureSpec::from_file(path).with_context(|| format!("reading {}", path.display()))?)
            }
            None => None,
        };
        let tail = match self.tail {
            TailArg::GaussianLinear => TailTreatment::GaussianLinear,
            TailArg::Truncate => TailTreatment::Truncate,
        };
        Ok(SimulateRequest {
            process: match self.process {
                ProcessArg::Mg => ProcessKind::Mg,
                ProcessArg::Mvn => ProcessKind::Mvn,
                ProcessArg::Fbm => ProcessKind::Fbm,
                ProcessArg::Mixed => ProcessKind::Mixed,
            },
            hurst: self.hurst,
            spec,
            horizon: self.horizon,
            steps: self.grid,
            seed: self.seed,
            scheme: self.scheme.map(|s| match s {
                SchemeArg::JumpSum => SchemeTag::JumpSum,
                SchemeArg::PathwiseIbp => SchemeTag::PathwiseIbp,
                SchemeArg::TruncatedMvn => SchemeTag::TruncatedMvn,
                SchemeArg::RiemannL2 => SchemeTag::RiemannL2,
            }),
            mvn: MvnOptions {
                s_trunc: self.s_trunc.unwrap_or_else(|| default_s_trunc(self.horizon)),
                tail,
            },
            sigma: self.sigma,
            epsilon: self.epsilon,
            kernel: self.kernel.into(),
        })
    }
}

/// `s,value` table of the kernel at fixed t: s in (0, t) for MG and (−t, t) for MvN.
pub fn kernel_csv(kind: KernelKind, h: HurstParameter, t: f64, points: usize) -> frale_core::Result<String> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid(format!("t must be positive, got {t}")));
    }
    if points == 0 {
        return Err(invalid("--points must be positive"));
    }
    let mut out = String::new();
    let _ = writeln!(out, "# kernel: {}", kind.short_name());
    let _ = writeln!(out, "# hurst: {}", h.value());
    let _ = writeln!(out, "# t: {t}");
    out.push_str("s,value\n");
    let step = 1.0 / (points + 1) as f64;
    for i in 1..=points {
        let (s, v) = match kind {
            KernelKind::MolchanGolosov => {
                let s = t * i as f64 * step;
                (s, mg_kernel(h, t, s)?)
            }
            KernelKind::MandelbrotVanNess => {
                let s = t * (2.0 * i as f64 * step - 1.0);
                (s, mvn_kernel(h, t, s))
            }
        };
        let _ = writeln!(out, "{s},{v}");
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct G1G2Row {
    pub h: f64,
    pub g1: f64,
    pub g2: f64,
    pub difference: f64,
    /// (∫ z⁴ − ∫ f⁴)/C_H⁴ at t = 1 by quadrature.
    pub quadrature_difference: f64,
}

/// g1 − g2 and the quadrature gap of normalised fourth moments on a uniform
/// sweep of the open interval (1/2, 3/4).
pub fn g1g2_sweep(points: usize) -> frale_core::Result<Vec<G1G2Row>> {
    if points == 0 {
        return Err(invalid("--points must be positive"));
    }
    (1..=points)
        .map(|i| {
            let hv = 0.5 + 0.25 * i as f64 / (points + 1) as f64;
            let h = HurstParameter::new(hv)?;
            let (g1, g2) = g1_g2_bounds(h)?;
            let c4 = h.mvn_constant().powi(4);
            let moment = |kind| -> frale_core::Result<f64> {
                Ok(kernel_moment(kind, h, 1.0, 4)?.finite().unwrap_or(f64::INFINITY))
            };
            let gap = (moment(KernelKind::MolchanGolosov)? - moment(KernelKind::MandelbrotVanNess)?) / c4;
            Ok(G1G2Row {
                h: hv,
                g1,
                g2,
                difference: g1 - g2,
                quadrature_difference: gap,
            })
        })
        .collect()
}

pub fn g1g2_csv(rows: &[G1G2Row]) -> String {
    let mut out = String::from("# g1 - g2 for K = 4\nh,g1,g2,difference,quadrature_difference\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.h, r.g1, r.g2, r.difference, r.quadrature_difference
        );
    }
    out
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn emit_svg(csv: &str, column: &str, path: Option<&Path>) -> Result<()> {
    if let Some(path) = path {
        let svg = polyline_svg(csv, column)?;
        std::fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

pub fn run_kernel(args: &KernelArgs) -> Result<u8> {
    if args.g1g2 {
        let csv = g1g2_csv(&g1g2_sweep(args.points)?);
        emit(&csv, args.out.as_deref())?;
        emit_svg(&csv, "difference", args.svg.as_deref())?;
        return Ok(EXIT_PASS);
    }
    let h = HurstParameter::new(args.hurst.expect("clap enforces --hurst without --g1g2"))?;
    let kind = KernelKind::from(args.kind);
    let mut csv = kernel_csv(kind, h, args.t, args.points)?;
    if let Some(k) = args.moment {
        let m = kernel_moment(kind, h, args.t, k)?;
        let value = match m.value {
            MomentValue::Finite(v) => v.to_string(),
            MomentValue::Divergent => "divergent".to_string(),
        };
        let _ = writeln!(csv, "# moment {k}: {value}");
    }
    emit(&csv, args.out.as_deref())?;
    emit_svg(&csv, "value", args.svg.as_deref())?;
    Ok(EXIT_PASS)
}

pub fn run_simulate(args: &SimulateArgs) -> Result<u8> {
    let path = simulate_path(&args.to_request()?)?;
    let csv = path.to_csv();
    emit(&csv, args.out.as_deref())?;
    emit_svg(&csv, "value", args.svg.as_deref())?;
    Ok(EXIT_PASS)
}

pub fn run_verify(args: &VerifyArgs) -> Result<u8> {
    if !(args.budget >= 0.0 && args.budget.is_finite()) {
        return Err(invalid(format!(
            "--budget must be a non-negative number of seconds, got {}",
            args.budget
        ))
        .into());
    }
    if args.paths == Some(0) {
        return Err(invalid("--paths must be positive").into());
    }
    let cfg = SuiteConfig {
        seed: args.seed,
        hurst: args.hurst,
        paths: args.paths,
    };
    let report = run_suite(args.suite, &cfg, &Budget::seconds(args.budget))?;
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    emit(&json, args.out.as_deref())?;
    Ok(if !report.verdicts.iter().all(|v| v.passed()) {
        EXIT_FAIL
    } else if !report.complete {
        EXIT_INCOMPLETE
    } else {
        EXIT_PASS
    })
}

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Kernel(a) => run_kernel(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Verify(a) => run_verify(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brownian_kernel_is_one() {
        let csv = kernel_csv(KernelKind::MolchanGolosov, HurstParameter::new(0.5).unwrap(), 1.0, 16).unwrap();
        let values: Vec<f64> = csv
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with('s'))
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert_eq!(values.len(), 16);
        assert!(values.iter().all(|&v| v == 1.0), "{values:?}");
    }

    #[test]
    fn mvn_table_spans_negative_s() {
        let csv = kernel_csv(KernelKind::MandelbrotVanNess, HurstParameter::new(0.7).unwrap(), 2.0, 3).unwrap();
        let s: Vec<f64> = csv
            .lines()
            .skip_while(|l| !l.starts_with("s,"))
            .skip(1)
            .map(|l| l.split(',').next().unwrap().parse().unwrap())
            .collect();
        assert_eq!(s, vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn g1g2_curve_is_positive() {
        let rows = g1g2_sweep(20).unwrap();
        assert!(rows.iter().all(|r| r.difference > 0.0 && r.quadrature_difference > 0.0));
        assert!(rows.iter().all(|r| r.h > 0.5 && r.h < 0.75));
    }

    #[test]
    fn scheme_mismatch_is_invalid() {
        let req = SimulateRequest {
            process: ProcessKind::Mvn,
            hurst: 0.7,
            spec: Some(LevyMeasureSpec::rademacher(1.0).unwrap()),
            horizon: 1.0,
            steps: 8,
            seed: 1,
            scheme: Some(SchemeTag::PathwiseIbp),
            mvn: MvnOptions::for_horizon(1.0),
            sigma: 1.0,
            epsilon: 1.0,
            kernel: KernelKind::MolchanGolosov,
        };
        assert!(matches!(simulate_path(&req), Err(Error::InvalidInput(_))));
        let req = SimulateRequest {
            spec: None,
            scheme: None,
            ..req
        };
        assert!(matches!(simulate_path(&req), Err(Error::InvalidInput(_))));
    }
}
