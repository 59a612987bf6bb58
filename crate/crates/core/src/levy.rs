//! Compound Poisson drivers with atomic, zero-mean Lévy measures, their
//! two-sided extension, Brownian increments, and the characteristic exponent.

use std::path::Path;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::{Exp, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::{stream_rng, Stream};

/// One point mass `rate · δ_x` of the Lévy measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub rate: f64,
}

/// ∫ x^k ν(dx) for k = 2, 3, 4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentFunctionals {
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

impl MomentFunctionals {
    pub fn get(&self, k: u32) -> Option<f64> {
        match k {
            2 => Some(self.m2),
            3 => Some(self.m3),
            4 => Some(self.m4),
            _ => None,
        }
    }
}

/// A finite atomic Lévy measure ν = Σ rate_i δ_{x_i} with Σ rate_i x_i = 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevyMeasureSpec {
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawSpec {
    atoms: Vec<Atom>,
}

impl<'de> Deserialize<'de> for LevyMeasureSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSpec::deserialize(d)?;
        LevyMeasureSpec::new(raw.atoms).map_err(serde::de::Error::custom)
    }
}

const MEAN_TOL: f64 = 1e-12;

fn validate_atoms(atoms: &[Atom]) -> Result<()> {
    if atoms.is_empty() {
        return Err(Error::Degenerate("the atom list is empty".into()));
    }
    for a in atoms {
        if !(a.x.is_finite() && a.rate.is_finite()) {
            return Err(invalid(format!("non-finite atom {a:?}")));
        }
        if a.x == 0.0 {
            return Err(invalid("jump sizes must be nonzero"));
        }
        if a.rate <= 0.0 {
            return Err(Error::Degenerate(format!(
                "atom at {} has non-positive rate {}",
                a.x, a.rate
            )));
        }
    }
    Ok(())
}

impl LevyMeasureSpec {
    /// Validates the atoms and rejects any measure whose mean Σ rate·x is nonzero.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        validate_atoms(&atoms)?;
        let mean: f64 = atoms.iter().map(|a| a.rate * a.x).sum();
        let scale: f64 = atoms.iter().map(|a| a.rate * a.x.abs()).sum::<f64>().max(1.0);
        if mean.abs() > MEAN_TOL * scale {
            return Err(Error::Degenerate(format!(
                "Σ rate·x = {mean:e}; the driver must have zero mean"
            )));
        }
        Ok(Self { atoms })
    }

    /// Shifts every jump by the same amount so that the mean vanishes.
    pub fn centered(atoms: Vec<Atom>) -> Result<Self> {
        validate_atoms(&atoms)?;
        let lambda: f64 = atoms.iter().map(|a| a.rate).sum();
        let mean: f64 = atoms.iter().map(|a| a.rate * a.x).sum();
        let shift = mean / lambda;
        let shifted: Vec<Atom> = atoms
            .iter()
            .map(|a| Atom {
                x: a.x - shift,
                rate: a.rate,
            })
            .collect();
        if shifted.iter().any(|a| a.x == 0.0) {
            return Err(Error::Degenerate("centering moved a jump size to zero".into()));
        }
        Self::new(shifted)
    }

    /// Symmetric ±1 jumps with total intensity λ, i.e. ν = (λ/2)(δ_1 + δ_{−1}).
    pub fn rademacher(lambda: f64) -> Result<Self> {
        Self::new(vec![
            Atom {
                x: 1.0,
                rate: 0.5 * lambda,
            },
            Atom {
                x: -1.0,
                rate: 0.5 * lambda,
            },
        ])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Compact canonical JSON, the basis of the spec hash in path metadata.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("atoms always serialise")
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// λ = Σ rate_i, the jump intensity.
    pub fn total_rate(&self) -> f64 {
        self.atoms.iter().map(|a| a.rate).sum()
    }

    /// m_k = Σ rate_i x_i^k.
    pub fn moment(&self, k: i32) -> f64 {
        self.atoms.iter().map(|a| a.rate * a.x.powi(k)).sum()
    }

    pub fn moments(&self) -> MomentFunctionals {
        MomentFunctionals {
            m2: self.moment(2),
            m3: self.moment(3),
            m4: self.moment(4),
        }
    }

    /// Ψ(u) = Σ rate_i (e^{iux_i} − 1 − iux_i).
    pub fn psi(&self, u: f64) -> Complex64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for a in &self.atoms {
            let v = u * a.x;
            let half = (0.5 * v).sin();
            re -= 2.0 * a.rate * half * half;
            im += a.rate * (v.sin() - v);
        }
        Complex64::new(re, im)
    }

    fn jump_law(&self) -> WeightedIndex<f64> {
        WeightedIndex::new(self.atoms.iter().map(|a| a.rate)).expect("rates validated positive")
    }
}

/// Ψ(u) of the driver.
pub fn psi(spec: &LevyMeasureSpec, u: f64) -> Complex64 {
    spec.psi(u)
}

/// Result of dropping small atoms: the re-centred measure and ∫_{|x|<ε} x² ν(dx).
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    pub spec: LevyMeasureSpec,
    pub discarded_m2: f64,
}

/// Removes atoms with |x| < ε and re-centres the rest.
pub fn truncate_levy_measure(atoms: &[Atom], epsilon: f64) -> Result<Truncation> {
    if !(epsilon > 0.0) {
        return Err(invalid(format!("truncation level must be positive, got {epsilon}")));
    }
    let (kept, dropped): (Vec<Atom>, Vec<Atom>) = atoms.iter().partition(|a| a.x.abs() >= epsilon);
    if kept.is_empty() {
        return Err(Error::Degenerate(format!("no atom has |x| ≥ {epsilon}")));
    }
    let discarded_m2 = dropped.iter().map(|a| a.rate * a.x * a.x).sum();
    Ok(Truncation {
        spec: LevyMeasureSpec::centered(kept)?,
        discarded_m2,
    })
}

/// Jump times and sizes of a one-sided compound Poisson path on (0, T].
#[derive(Debug, Clone, PartialEq)]
pub struct DriverPath {
    pub times: Vec<f64>,
    pub sizes: Vec<f64>,
    pub horizon: f64,
    pub seed: u64,
}

impl DriverPath {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// L_t = Σ_{τ_i ≤ t} J_i.
    pub fn value_at(&self, t: f64) -> f64 {
        let n = self.times.partition_point(|&s| s <= t);
        self.sizes[..n].iter().sum()
    }
}

fn sample_jumps<R: Rng>(rng: &mut R, spec: &LevyMeasureSpec, horizon: f64) -> (Vec<f64>, Vec<f64>) {
    let gap = Exp::new(spec.total_rate()).expect("positive intensity");
    let law = spec.jump_law();
    let mut times = Vec::new();
    let mut sizes = Vec::new();
    let mut t = 0.0;
    loop {
        t += gap.sample(rng);
        // the size is drawn with its time so longer horizons extend the same path
        let size = spec.atoms[law.sample(rng)].x;
        if t > horizon {
            break;
        }
        times.push(t);
        sizes.push(size);
    }
    (times, sizes)
}

fn check_horizon(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("horizon must be positive and finite, got {t}")))
    }
}

/// Compound Poisson path on (0, T]; deterministic in `seed`.
pub fn sample_compound_poisson(spec: &LevyMeasureSpec, horizon: f64, seed: u64) -> Result<DriverPath> {
    check_horizon(horizon)?;
    let mut rng = stream_rng(seed, Stream::Forward);
    let (times, sizes) = sample_jumps(&mut rng, spec, horizon);
    Ok(DriverPath {
        times,
        sizes,
        horizon,
        seed,
    })
}

/// Two-sided driver: `future` on (0, T_+] and an independent copy `past`
/// whose jump at τ contributes a jump at −τ. L_t = −L^{past}_{(−t)−} for
/// t < 0, so paths are right-continuous and L_0 = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSidedPath {
    pub future: DriverPath,
    pub past: DriverPath,
}

impl TwoSidedPath {
    pub fn value_at(&self, t: f64) -> f64 {
        if t >= 0.0 {
            self.future.value_at(t)
        } else {
            let n = self.past.times.partition_point(|&s| s < -t);
            -self.past.sizes[..n].iter().sum::<f64>()
        }
    }

    /// All jumps (time, size) in increasing time order, on [−T_−, T_+].
    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let past = self
            .past
            .times
            .iter()
            .zip(&self.past.sizes)
            .rev()
            .map(|(&t, &j)| (-t, j));
        let future = self.future.times.iter().zip(&self.future.sizes).map(|(&t, &j)| (t, j));
        past.chain(future)
    }
}

/// Two-sided driver on [−past_horizon, future_horizon].
pub fn sample_two_sided(
    spec: &LevyMeasureSpec,
    past_horizon: f64,
    future_horizon: f64,
    seed: u64,
) -> Result<TwoSidedPath> {
    check_horizon(past_horizon)?;
    let future = sample_compound_poisson(spec, future_horizon, seed)?;
    let mut rng = stream_rng(seed, Stream::Backward);
    let (times, sizes) = sample_jumps(&mut rng, spec, past_horizon);
    Ok(TwoSidedPath {
        future,
        past: DriverPath {
            times,
            sizes,
            horizon: past_horizon,
            seed,
        },
    })
}

/// Independent N(0, Δt) increments of a Brownian motion over consecutive grid cells.
pub fn sample_brownian_increments(grid: &[f64], seed: u64) -> Result<Vec<f64>> {
    if grid.windows(2).any(|w| !(w[1] >= w[0])) || grid.iter().any(|t| !t.is_finite()) {
        return Err(invalid("Brownian grid must be finite and non-decreasing"));
    }
    let mut rng = stream_rng(seed, Stream::Brownian);
    Ok(grid
        .windows(2)
        .map(|w| {
            let z: f64 = rng.sample(StandardNormal);
            z * (w[1] - w[0]).sqrt()
        })
        .collect())
}
