//! Reference implementations used only for cross-checking: they share no
//! code with the production special functions and use different
//! expansions (Stirling series for the gamma function, the `1/(1-z)`
//! connection formula for `2F1`, the positive-term series for `erf`).

use std::f64::consts::PI;

/// `ln Gamma(x)` for `x >= 20` by the Stirling series.
fn ln_gamma_large(x: f64) -> f64 {
    // B_2k / (2k (2k-1))
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let x2 = x * x;
    let mut corr = 0.0;
    let mut pow = x;
    for c in C {
        corr += c / pow;
        pow *= x2;
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + corr
}

/// Gamma function for any non-integer-pole argument.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let mut shift = 1.0;
    let mut z = x;
    while z < 20.0 {
        shift *= z;
        z += 1.0;
    }
    ln_gamma_large(z).exp() / shift
}

/// Direct hypergeometric series, for `|z| <= 2/3`.
pub fn hyp2f1_direct(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small = 0;
    for n in 0..20_000 {
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            small += 1;
            if small == 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    sum
}

/// `2F1(a, b; c; z)` for `z <= 0`: the direct series near the origin and
/// the connection formula in `1/(1-z)` elsewhere. Requires `b - a` not an
/// integer.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> f64 {
    if z >= -0.5 {
        return hyp2f1_direct(a, b, c, z);
    }
    let w = 1.0 / (1.0 - z);
    let t1 = gamma(c) * gamma(b - a) / (gamma(b) * gamma(c - a))
        * w.powf(a)
        * hyp2f1_direct(a, c - b, a - b + 1.0, w);
    let t2 = gamma(c) * gamma(a - b) / (gamma(a) * gamma(c - b))
        * w.powf(b)
        * hyp2f1_direct(b, c - a, b - a + 1.0, w);
    t1 + t2
}

/// `erfc(x) = 1 - erf(x)` with
/// `erf(x) = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1} / (2n+1)!!`.
pub fn erfc(x: f64) -> f64 {
    let ax = x.abs();
    let x2 = ax * ax;
    let mut term = ax;
    let mut sum = ax;
    let mut n = 0.0;
    while term > 1e-18 * sum {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
    }
    let erf = 2.0 / PI.sqrt() * (-x2).exp() * sum;
    if x >= 0.0 {
        1.0 - erf
    } else {
        1.0 + erf
    }
}
