//! Adaptive quadrature for integrands with algebraic endpoint singularities.
//!
//! Interior segments use the 7/15-point Gauss-Kronrod pair. A segment that
//! touches an endpoint declared as `EndBehavior::Power(alpha)` is integrated
//! with a Gauss-Jacobi rule whose weight absorbs `|x - end|^alpha`; its error
//! estimate comes from comparing two rule orders. The worst segment is
//! bisected until the global estimate meets the tolerance.

use std::collections::{BinaryHeap, HashMap};
use std::num::NonZeroUsize;
use std::sync::{Arc, LazyLock, RwLock};

use gauss_quad::{FiniteAboveNegOneF64, GaussJacobi};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const JACOBI_LOW: usize = 12;
const JACOBI_HIGH: usize = 24;

/// Behaviour of the integrand at one end of the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndBehavior {
    Regular,
    /// Integrand behaves like `distance^alpha` times a smooth factor, alpha > -1.
    Power(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Tolerances and budget for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_segments: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-11,
            max_segments: 4000,
        }
    }
}

/// Jacobi nodes on [-1, 1] for weight (1+x)^alpha, stored with weights
/// already divided by the weight function so they apply to the full integrand.
struct JacobiRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

type RuleKey = (usize, u64);

static JACOBI_CACHE: LazyLock<RwLock<HashMap<RuleKey, Arc<JacobiRule>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

fn jacobi_rule(n: usize, alpha: f64) -> Arc<JacobiRule> {
    let key = (n, alpha.to_bits());
    if let Some(rule) = JACOBI_CACHE.read().expect("quadrature cache poisoned").get(&key) {
        return rule.clone();
    }
    let deg = NonZeroUsize::new(n).expect("rule order is positive");
    let zero = FiniteAboveNegOneF64::new(0.0).expect("0 is a valid exponent");
    let beta = FiniteAboveNegOneF64::new(alpha).expect("exponent checked by caller");
    let gj = GaussJacobi::new(deg, zero, beta);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &(x, w) in gj.as_node_weight_pairs() {
        nodes.push(x);
        weights.push(w / (1.0 + x).powf(alpha));
    }
    let rule = Arc::new(JacobiRule { nodes, weights });
    JACOBI_CACHE
        .write()
        .expect("quadrature cache poisoned")
        .insert(key, rule.clone());
    rule
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum SegmentKind {
    Plain,
    /// Singular at the left end `a`.
    Left(f64),
    /// Singular at the right end `b`.
    Right(f64),
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    kind: SegmentKind,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    (value, error)
}

fn jacobi_panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, alpha: f64, left: bool) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mut eval = |n: usize| {
        let rule = jacobi_rule(n, alpha);
        let mut acc = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let t = if left {
                a + half * (1.0 + x)
            } else {
                b - half * (1.0 + x)
            };
            acc += w * f(t);
        }
        acc * half
    };
    let low = eval(JACOBI_LOW);
    let high = eval(JACOBI_HIGH);
    (high, (high - low).abs())
}

fn evaluate<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, kind: SegmentKind) -> Segment {
    let (value, error) = match kind {
        SegmentKind::Plain => gauss_kronrod(f, a, b),
        SegmentKind::Left(alpha) => jacobi_panel(f, a, b, alpha, true),
        SegmentKind::Right(alpha) => jacobi_panel(f, a, b, alpha, false),
    };
    Segment {
        a,
        b,
        kind,
        value,
        error,
    }
}

fn kind_for(end: EndBehavior, left: bool) -> SegmentKind {
    match end {
        EndBehavior::Regular => SegmentKind::Plain,
        EndBehavior::Power(0.0) => SegmentKind::Plain,
        EndBehavior::Power(alpha) => {
            if left {
                SegmentKind::Left(alpha)
            } else {
                SegmentKind::Right(alpha)
            }
        }
    }
}

impl Integrator {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    /// ∫_a^b f(x) dx with the declared endpoint behaviour.
    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64, left: EndBehavior, right: EndBehavior) -> Result<QuadResult>
    where
        F: FnMut(f64) -> f64,
    {
        for end in [left, right] {
            if let EndBehavior::Power(alpha) = end {
                if !(alpha > -1.0) || !alpha.is_finite() {
                    return Err(Error::Domain(format!("endpoint exponent {alpha} is not integrable")));
                }
            }
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!(
                "integration limits must be finite, got [{a}, {b}]"
            )));
        }
        if a == b {
            return Ok(QuadResult {
                value: 0.0,
                error: 0.0,
                evaluations: 0,
            });
        }
        if a > b {
            let r = self.integrate(f, b, a, right, left)?;
            return Ok(QuadResult { value: -r.value, ..r });
        }

        let mut evaluations = 0usize;
        let mut counted = |x: f64| {
            evaluations += 1;
            f(x)
        };
        let mid = 0.5 * (a + b);
        let mut heap = BinaryHeap::new();
        heap.push(evaluate(&mut counted, a, mid, kind_for(left, true)));
        heap.push(evaluate(&mut counted, mid, b, kind_for(right, false)));
        // segments that cannot be split further
        let mut settled: Vec<Segment> = Vec::new();

        loop {
            let (value, error) = heap
                .iter()
                .chain(settled.iter())
                .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
            if !value.is_finite() {
                return Err(Error::Accuracy {
                    context: "adaptive quadrature produced a non-finite value".into(),
                    partial: value,
                    estimate: error,
                });
            }
            if error <= self.abs_tol.max(self.rel_tol * value.abs()) || heap.is_empty() {
                return Ok(QuadResult {
                    value,
                    error,
                    evaluations,
                });
            }
            if heap.len() + settled.len() >= self.max_segments {
                return Err(Error::Accuracy {
                    context: format!(
                        "adaptive quadrature on [{a}, {b}] exhausted {} segments",
                        self.max_segments
                    ),
                    partial: value,
                    estimate: error,
                });
            }
            let worst = heap.pop().expect("heap is non-empty");
            let m = 0.5 * (worst.a + worst.b);
            if !(m > worst.a && m < worst.b) || (worst.b - worst.a) <= 1e-15 * worst.a.abs().max(worst.b.abs()) * 4.0 {
                settled.push(worst);
                continue;
            }
            let (lk, rk) = match worst.kind {
                SegmentKind::Plain => (SegmentKind::Plain, SegmentKind::Plain),
                SegmentKind::Left(alpha) => (SegmentKind::Left(alpha), SegmentKind::Plain),
                SegmentKind::Right(alpha) => (SegmentKind::Plain, SegmentKind::Right(alpha)),
            };
            heap.push(evaluate(&mut counted, worst.a, m, lk));
            heap.push(evaluate(&mut counted, m, worst.b, rk));
        }
    }

    /// Sum of `integrate` over consecutive pieces `points[i]..points[i+1]`,
    /// with the given behaviour on either side of every breakpoint.
    pub fn integrate_pieces<F>(
        &self,
        mut f: F,
        points: &[f64],
        ends: &[(EndBehavior, EndBehavior)],
    ) -> Result<QuadResult>
    where
        F: FnMut(f64) -> f64,
    {
        assert_eq!(points.len(), ends.len() + 1, "one end pair per piece");
        let mut total = QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        };
        for (w, &(l, r)) in points.windows(2).zip(ends) {
            let piece = self.integrate(&mut f, w[0], w[1], l, r)?;
            total.value += piece.value;
            total.error += piece.error;
            total.evaluations += piece.evaluations;
        }
        Ok(total)
    }
}

/// Convenience wrapper with the default integrator.
pub fn integrate<F>(f: F, a: f64, b: f64, left: EndBehavior, right: EndBehavior) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    Integrator::default().integrate(f, a, b, left, right)
}
