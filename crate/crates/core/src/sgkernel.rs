//! Special functions and quadrature used by the closed-form coverage
//! expressions.
//!
//! Everything here is a pure function of its arguments. Only `exp`, `ln`,
//! `sqrt`, `powf` and the trigonometric functions of `std` are relied upon.

use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_2_SQRT_PI, PI};

use crate::error::{Error, Result};

/// Iteration cap for the hypergeometric power series.
pub const HYP2F1_MAX_TERMS: usize = 10_000;

/// Subdivision cap for [`integrate_1d`].
pub const MAX_SUBDIVISIONS: usize = 4_000;

/// Panel cap for [`integrate_to_infinity`].
const MAX_PANELS: usize = 200;

const SQRT_PI: f64 = 1.772_453_850_905_516;

// ---------------------------------------------------------------------------
// Gauss hypergeometric 2F1
// ---------------------------------------------------------------------------

/// Gauss hypergeometric function `2F1(a, b; c; z)` for real arguments with
/// `z < 1`.
///
/// `|z| <= 0.5` is summed directly. For `-2 <= z < -0.5` the Pfaff
/// transformation `2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1))` maps
/// the argument into `(1/3, 2/3]`. For `z < -2` the connection formula in
/// `1/z` is used, which needs `b - a` not to be an integer; otherwise the
/// Pfaff branch is used there too and may hit the iteration cap for very
/// large `|z|`. `0.5 < z < 1` is summed directly.
pub fn gauss2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::domain(format!(
            "2F1 needs finite arguments, got ({a}, {b}, {c}, {z})"
        )));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::domain(format!(
            "2F1 undefined for non-positive integer c = {c}"
        )));
    }
    if z >= 1.0 {
        return Err(Error::domain(format!("2F1 requires z < 1, got {z}")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z < -2.0 && !is_integer(b - a) {
        hyp2f1_inverse(a, b, c, z)
    } else if z < -0.5 {
        hyp2f1_pfaff(a, b, c, z)
    } else {
        hyp2f1_series(a, b, c, z)
    }
}

fn is_integer(x: f64) -> bool {
    x == x.round()
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && is_integer(x)
}

/// Pfaff branch of [`gauss2f1`]: `(1-z)^{-a} 2F1(a, c-b; c; z/(z-1))`.
pub fn hyp2f1_pfaff(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if z >= 0.0 {
        return Err(Error::domain(format!("Pfaff branch needs z < 0, got {z}")));
    }
    let w = z / (z - 1.0);
    Ok((1.0 - z).powf(-a) * hyp2f1_series(a, c - b, c, w)?)
}

/// Large-argument branch of [`gauss2f1`], the two-term connection formula
/// in `1/z`. Requires `z < -1` and non-integer `b - a`.
pub fn hyp2f1_inverse(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if z >= -1.0 {
        return Err(Error::domain(format!("1/z branch needs z < -1, got {z}")));
    }
    if is_integer(b - a) {
        return Err(Error::domain("1/z branch needs non-integer b - a"));
    }
    let g = |x: f64| -> Result<f64> {
        if is_nonpositive_integer(x) {
            Err(Error::domain(format!("Gamma pole at {x}")))
        } else {
            Ok(gamma_unchecked(x))
        }
    };
    // a reciprocal Gamma at a pole is zero
    let rg = |x: f64| -> f64 {
        if is_nonpositive_integer(x) {
            0.0
        } else {
            1.0 / gamma_unchecked(x)
        }
    };
    let u = 1.0 / z;
    let gc = g(c)?;
    let mut total = 0.0;
    let k1 = gc * g(b - a)? * rg(b) * rg(c - a);
    if k1 != 0.0 {
        total += k1 * (-z).powf(-a) * hyp2f1_series(a, a - c + 1.0, a - b + 1.0, u)?;
    }
    let k2 = gc * g(a - b)? * rg(a) * rg(c - b);
    if k2 != 0.0 {
        total += k2 * (-z).powf(-b) * hyp2f1_series(b, b - c + 1.0, b - a + 1.0, u)?;
    }
    Ok(total)
}

/// Plain power series of 2F1, valid for `|z| < 1`.
///
/// Stops once the remaining tail, bounded geometrically by the larger of the
/// current term ratio and `|z|`, drops below machine precision relative to
/// the running sum.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if z.abs() >= 1.0 {
        return Err(Error::domain(format!(
            "2F1 power series needs |z| < 1, got {z}"
        )));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::domain(format!("2F1 undefined for c = {c}")));
    }
    let mut sum = 1.0;
    let mut term = 1.0;
    for n in 0..HYP2F1_MAX_TERMS {
        let nf = n as f64;
        let factor = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        term *= factor * z;
        sum += term;
        if term == 0.0 {
            // terminating series (a or b a non-positive integer)
            return Ok(sum);
        }
        let ratio = factor.abs() * z.abs();
        let q = ratio.max(z.abs());
        if q < 1.0 && term.abs() * q / (1.0 - q) <= f64::EPSILON * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NumericFailure {
        routine: "gauss2f1",
        reason: format!("series not converged after {HYP2F1_MAX_TERMS} terms at z = {z}"),
        partial: sum,
    })
}

// ---------------------------------------------------------------------------
// Error function family
// ---------------------------------------------------------------------------

/// Complementary error function.
///
/// Maclaurin series of `erf` for `|x| < 2`; for `x >= 2` the scaled form from
/// [`erfcx`] multiplied by `exp(-x^2)`. Absolute error stays below `1e-14`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        (-x * x).exp() * erfcx_cf(x)
    }
}

/// Error function, `1 - erfc(x)`.
pub fn erf(x: f64) -> f64 {
    if x.abs() < 2.0 {
        erf_series(x)
    } else {
        1.0 - erfc(x)
    }
}

/// Scaled complementary error function `exp(x^2) erfc(x)`.
///
/// Evaluated without forming `exp(x^2)` for `x >= 2`, so the product
/// `exp(t^2) erfc(t)` never overflows for positive arguments.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 2.0 {
        erfcx_cf(x)
    } else if x >= 0.0 {
        (x * x).exp() * (1.0 - erf_series(x))
    } else {
        // erfc(x) = 2 - erfc(-x)
        2.0 * (x * x).exp() - erfcx(-x)
    }
}

fn erf_series(x: f64) -> f64 {
    // erf(x) = 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1))
    let x2 = x * x;
    let mut power = x; // (-1)^n x^(2n+1) / n!
    let mut sum = x;
    for n in 1..200 {
        let nf = n as f64;
        power *= -x2 / nf;
        let term = power / (2.0 * nf + 1.0);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    FRAC_2_SQRT_PI * sum
}

/// Laplace continued fraction for `exp(x^2) erfc(x)`, `x >= 2`:
/// `2x / sqrt(pi) / (2x^2+1 - 1*2/(2x^2+5 - 3*4/(2x^2+9 - ...)))`.
fn erfcx_cf(x: f64) -> f64 {
    let t = 2.0 * x * x;
    // modified Lentz
    let tiny = 1e-300;
    let mut f = t + 1.0;
    let mut c = f;
    let mut d = 0.0;
    for n in 1..500 {
        let nf = n as f64;
        let an = -(2.0 * nf - 1.0) * (2.0 * nf);
        let bn = t + 1.0 + 4.0 * nf;
        d = bn + an * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = bn + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    2.0 * x / (SQRT_PI * f)
}

// ---------------------------------------------------------------------------
// Gamma
// ---------------------------------------------------------------------------

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler Gamma for positive arguments (Lanczos, g = 7).
///
/// Arguments below 1/2 go through the reflection formula so the
/// approximation is only ever evaluated on `[1/2, inf)`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("gamma_fn requires finite x > 0, got {x}")));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// `ln(n!)` by direct summation; exact enough for the small fading orders
/// used here.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Binomial coefficient as a float.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

// ---------------------------------------------------------------------------
// Chebyshev-Gauss quadrature
// ---------------------------------------------------------------------------

/// Chebyshev-Gauss rule of the first kind:
/// nodes `cos((2i-1) pi / (2K))`, weights `pi / K`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Approximates `int_{-1}^{1} f(x) / sqrt(1 - x^2) dx`.
    pub fn integrate_weighted<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Approximates the unweighted `int_lo^hi f(y) dy` by absorbing
    /// `sqrt(1 - x^2)` into the integrand.
    pub fn integrate_interval<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        half * self.integrate_weighted(|x| (1.0 - x * x).sqrt() * f(mid + half * x))
    }
}

pub fn chebyshev_gauss(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::domain("Chebyshev-Gauss order must be at least 1"));
    }
    let k = order as f64;
    let nodes = (1..=order)
        .map(|i| ((2.0 * i as f64 - 1.0) * PI / (2.0 * k)).cos())
        .collect();
    Ok(QuadratureRule {
        nodes,
        weights: vec![PI / k; order],
    })
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod
// ---------------------------------------------------------------------------

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639,
    0.949_107_912_342_758_525,
    0.864_864_423_359_769_073,
    0.741_531_185_599_394_440,
    0.586_087_235_467_691_130,
    0.405_845_151_377_397_167,
    0.207_784_955_007_898_468,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_184,
    0.140_653_259_715_525_919,
    0.169_004_726_639_267_903,
    0.190_350_578_064_785_410,
    0.204_432_940_075_298_892,
    0.209_482_141_084_727_828,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693,
    0.279_705_391_489_276_668,
    0.381_830_050_505_118_945,
    0.417_959_183_673_469_388,
];

struct Segment {
    lo: f64,
    hi: f64,
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

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let fc = f(mid);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive 15-point Gauss-Kronrod integration of `f` over
/// `[lo, hi]` to an absolute error estimate of `tol`.
///
/// The error target is floored at a few ulps of the running result so that
/// an overly strict `tol` cannot stall the bisection.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::domain(format!(
            "integrate_1d needs finite limits, got [{lo}, {hi}]"
        )));
    }
    if lo == hi {
        return Ok(0.0);
    }
    if hi < lo {
        return integrate_1d(f, hi, lo, tol).map(|v| -v);
    }
    let (value, error) = gk15(&f, lo, hi);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { lo, hi, value, error });
    let mut total = value;
    let mut total_err = error;
    while heap.len() < MAX_SUBDIVISIONS {
        if !total.is_finite() {
            return Err(Error::NumericFailure {
                routine: "integrate_1d",
                reason: "integrand produced a non-finite value".into(),
                partial: total,
            });
        }
        if total_err <= tol.max(50.0 * f64::EPSILON * total.abs()) {
            return Ok(total);
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval cannot be split any further in floating point
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&f, worst.lo, mid);
        let (v2, e2) = gk15(&f, mid, worst.hi);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { lo: worst.lo, hi: mid, value: v1, error: e1 });
        heap.push(Segment { lo: mid, hi: worst.hi, value: v2, error: e2 });
    }
    // recompute from scratch to shed accumulated rounding in the running sums
    let total: f64 = heap.iter().map(|s| s.value).sum();
    let total_err: f64 = heap.iter().map(|s| s.error).sum();
    if total_err <= tol.max(50.0 * f64::EPSILON * total.abs()) {
        return Ok(total);
    }
    Err(Error::NumericFailure {
        routine: "integrate_1d",
        reason: format!(
            "subdivision cap reached with error estimate {total_err:e} > tol {tol:e}"
        ),
        partial: total,
    })
}

/// Result of integrating over a truncated semi-infinite range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncated {
    pub value: f64,
    /// Upper limit actually used in place of infinity.
    pub radius: f64,
}

/// Integrates `f` over `[lo, inf)` by panels of doubling width starting at
/// `scale`. Integration stops at the first panel whose contribution, and the
/// integrand at its right edge, are below `1e-12` of the running total.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    scale: f64,
    tol: f64,
) -> Result<Truncated> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::domain(format!(
            "integrate_to_infinity needs a positive scale, got {scale}"
        )));
    }
    let mut total = 0.0;
    let mut a = lo;
    let mut width = scale;
    for _ in 0..MAX_PANELS {
        let b = a + width;
        let panel = integrate_1d(&f, a, b, tol)?;
        total += panel;
        let edge = (f(b) * width).abs();
        if panel.abs() <= 1e-12 * total.abs() && edge <= 1e-12 * total.abs() {
            return Ok(Truncated { value: total, radius: b });
        }
        if total == 0.0 && panel == 0.0 && edge == 0.0 && b > lo + 64.0 * scale {
            return Ok(Truncated { value: 0.0, radius: b });
        }
        a = b;
        width *= 2.0;
    }
    Err(Error::NumericFailure {
        routine: "integrate_to_infinity",
        reason: format!("tail still significant after {MAX_PANELS} panels"),
        partial: total,
    })
}
