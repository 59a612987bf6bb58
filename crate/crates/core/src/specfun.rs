//! Gamma, Beta and Gauss hypergeometric functions, plus the two fBm
//! normalising constants built from them.
//!
//! Everything here is a pure function of its arguments.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

// Lanczos approximation, g = 10.900511, 11 terms (Pugh 2004).
const LANCZOS_G: f64 = 10.900511;
const LANCZOS_COEFFS: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;
const LN_TWO_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;

/// Relative size below which a series term is considered negligible.
pub const SERIES_REL_TOL: f64 = 1e-14;
/// Hard cap on the number of hypergeometric series terms.
pub const SERIES_MAX_TERMS: usize = 10_000;

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_COEFFS
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_COEFFS[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0))
}

/// Γ(x) for any real x that is not a non-positive integer.
pub(crate) fn gamma_real(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_real(1.0 - x))
    } else {
        let s = lanczos_sum(x);
        let base = (x - 0.5 + LANCZOS_G) / E;
        // split the power so that x up to ~170 does not overflow prematurely
        let half = base.powf(0.5 * (x - 0.5));
        s * TWO_SQRT_E_OVER_PI * half * half
    }
}

fn ln_gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        (PI / (PI * x).sin()).ln() - ln_gamma_positive(1.0 - x)
    } else {
        lanczos_sum(x).ln() + LN_TWO_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + LANCZOS_G).ln() - 1.0)
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} requires a finite positive argument, got {x}")))
    }
}

/// The Gamma function on the positive half-line.
pub fn gamma(x: f64) -> Result<f64> {
    check_positive("gamma", x)?;
    Ok(gamma_real(x))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive("ln_gamma", x)?;
    Ok(ln_gamma_positive(x))
}

/// The Beta function B(x, y) = Γ(x)Γ(y)/Γ(x+y).
pub fn beta(x: f64, y: f64) -> Result<f64> {
    check_positive("beta", x)?;
    check_positive("beta", y)?;
    if x + y < 100.0 {
        Ok(gamma_real(x) * gamma_real(y) / gamma_real(x + y))
    } else {
        Ok((ln_gamma_positive(x) + ln_gamma_positive(y) - ln_gamma_positive(x + y)).exp())
    }
}

/// A Hurst parameter in the open unit interval together with the kernel
/// normalising constants it determines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HurstParameter {
    h: f64,
    #[serde(skip)]
    mg_constant: f64,
    #[serde(skip)]
    mvn_constant: f64,
}

impl HurstParameter {
    pub fn new(h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0 && h < 1.0) {
            return Err(domain(format!("Hurst parameter must lie in (0, 1), got {h}")));
        }
        if h == 0.5 {
            return Ok(Self {
                h,
                mg_constant: 1.0,
                mvn_constant: 1.0,
            });
        }
        Ok(Self {
            h,
            mg_constant: mg_constant_raw(h),
            mvn_constant: mvn_constant_raw(h),
        })
    }

    pub fn value(&self) -> f64 {
        self.h
    }

    /// H − 1/2, the exponent appearing in both kernels.
    pub fn offset(&self) -> f64 {
        self.h - 0.5
    }

    /// c_H of the Molchan-Golosov kernel.
    pub fn mg_constant(&self) -> f64 {
        self.mg_constant
    }

    /// C_H of the Mandelbrot-Van Ness kernel.
    pub fn mvn_constant(&self) -> f64 {
        self.mvn_constant
    }
}

impl<'de> Deserialize<'de> for HurstParameter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let h = f64::deserialize(d)?;
        HurstParameter::new(h).map_err(serde::de::Error::custom)
    }
}

fn mg_constant_raw(h: f64) -> f64 {
    let g = gamma_real(h + 0.5);
    (2.0 * h * g * gamma_real(1.5 - h) / gamma_real(2.0 - 2.0 * h)).sqrt() / g
}

fn mvn_constant_raw(h: f64) -> f64 {
    (2.0 * h * (PI * h).sin() * gamma_real(2.0 * h)).sqrt() / gamma_real(h + 0.5)
}

/// c_H = Γ(H+1/2)^{-1} (2H Γ(H+1/2) Γ(3/2−H) / Γ(2−2H))^{1/2}.
pub fn molchan_golosov_constant(h: HurstParameter) -> f64 {
    h.mg_constant
}

/// C_H = (2H sin(πH) Γ(2H))^{1/2} / Γ(H+1/2).
pub fn mandelbrot_van_ness_constant(h: HurstParameter) -> f64 {
    h.mvn_constant
}

/// Parameters (a, b, c) of Gauss' hypergeometric function, c not a
/// non-positive integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HypergeometricParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(domain("hypergeometric parameters must be finite"));
        }
        if c <= 0.0 && c == c.round() {
            return Err(domain(format!("c = {c} is a non-positive integer")));
        }
        Ok(Self { a, b, c })
    }
}

/// Sums Σ_j (a)_j (b)_j / (c)_j · x^j / j! with (·)_0 = 1.
///
/// Stops once a term is below `SERIES_REL_TOL` relative to the partial sum
/// and the term ratio has settled below one in magnitude.
pub(crate) fn gauss_series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut comp = 0.0;
    for j in 0..SERIES_MAX_TERMS {
        let jf = j as f64;
        let ratio = (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * x;
        term *= ratio;
        if term == 0.0 {
            return Ok(sum + comp);
        }
        // Neumaier summation
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        let next_ratio = ((a + jf + 1.0) * (b + jf + 1.0) / ((c + jf + 1.0) * (jf + 2.0)) * x).abs();
        if term.abs() <= SERIES_REL_TOL * (sum + comp).abs() && next_ratio < 1.0 {
            return Ok(sum + comp);
        }
    }
    Err(Error::Accuracy {
        context: format!("hypergeometric series F({a}, {b}, {c}, {x})"),
        partial: sum + comp,
        estimate: term.abs(),
    })
}

/// F(a, b, c, x) by the defining power series; requires |x| < 1.
pub fn hyp2f1_direct(p: HypergeometricParams, x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(domain(format!("direct series needs |x| < 1, got {x}")));
    }
    gauss_series(p.a, p.b, p.c, x)
}

/// F(a, b, c, x) through the Pfaff transformation
/// F(a,b,c,x) = (1−x)^{−a} F(a, c−b, c, x/(x−1)); requires x ≤ 0.
pub fn hyp2f1_pfaff(p: HypergeometricParams, x: f64) -> Result<f64> {
    if !(x <= 0.0) || !x.is_finite() {
        return Err(domain(format!("Pfaff route needs finite x <= 0, got {x}")));
    }
    let w = x / (x - 1.0);
    let inner = gauss_series(p.a, p.c - p.b, p.c, w)?;
    Ok((1.0 - x).powf(-p.a) * inner)
}

/// Gauss' hypergeometric function on the non-positive half-line.
///
/// Direct series on (−1, 0], Pfaff transformation for x ≤ −1.
pub fn hyp2f1(p: HypergeometricParams, x: f64) -> Result<f64> {
    if !x.is_finite() || x > 0.0 {
        return Err(domain(format!("hyp2f1 is provided for x <= 0 only, got {x}")));
    }
    if x > -1.0 {
        hyp2f1_direct(p, x)
    } else {
        hyp2f1_pfaff(p, x)
    }
}
