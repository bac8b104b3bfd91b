//! Closed-form coverage engine: interference Laplace transforms, the
//! auxiliary expectations and the coverage probabilities of the typical
//! (RIS-served) and the connected (direct-link) NOMA users.

use std::f64::consts::PI;

use crate::channel::{c_ris_e, CrisMode};
use crate::error::{Error, Result};
use crate::params::NetworkParams;
use crate::sgkernel::{
    binomial, chebyshev_gauss, erfcx, gamma_fn, gauss2f1, integrate_1d, integrate_to_infinity,
};

/// Alternating binomial sums whose largest partial sum exceeds the final
/// value by more than this factor are reported as ill-conditioned.
pub const CANCELLATION_LIMIT: f64 = 1e6;

/// Evaluation knobs of the closed-form engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticSettings {
    pub cris_mode: CrisMode,
    /// Chebyshev-Gauss order for the `alpha_t = 4` closed form.
    pub chebyshev_order: usize,
    /// Absolute accuracy target on the probability.
    pub tol: f64,
}

impl Default for AnalyticSettings {
    fn default() -> Self {
        AnalyticSettings {
            cris_mode: CrisMode::Paper,
            chebyshev_order: 64,
            tol: 1e-9,
        }
    }
}

/// A coverage probability together with its unclamped value and the
/// conditioning of the alternating sum that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coverage {
    /// `raw` clamped to `[0, 1]`.
    pub value: f64,
    pub raw: f64,
    /// Largest partial-sum magnitude divided by the final magnitude.
    pub cancellation: f64,
}

impl Coverage {
    fn from_terms(label: &str, terms: &[f64]) -> Coverage {
        let mut acc = 0.0;
        let mut peak: f64 = 0.0;
        for t in terms {
            acc += t;
            peak = peak.max(acc.abs()).max(t.abs());
        }
        let cancellation = if acc == 0.0 { f64::INFINITY } else { peak / acc.abs() };
        if cancellation > CANCELLATION_LIMIT && peak > 0.0 {
            log::warn!("{label}: binomial sum lost {cancellation:.1e} to cancellation");
        }
        let value = acc.clamp(0.0, 1.0);
        if value != acc {
            log::info!("{label}: raw value {acc:e} clamped to {value}");
        }
        Coverage { value, raw: acc, cancellation }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveragePair {
    pub p_typical: f64,
    pub p_connected: f64,
}

fn require_alpha(name: &str, alpha: f64) -> Result<()> {
    if alpha > 2.0 {
        Ok(())
    } else {
        Err(Error::Divergence(format!(
            "{name} = {alpha}: the interference integral diverges for exponents <= 2"
        )))
    }
}

/// Laplace transform of the connected user's interference,
/// `exp(-pi lambda r_c^2 (2F1(-2/alpha_c, m_t; 1-2/alpha_c; -s P_b C/(m_t r_c^alpha_c)) - 1))`.
pub fn laplace_connected(s: f64, p: &NetworkParams) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::domain(format!("Laplace argument must be >= 0, got {s}")));
    }
    require_alpha("alpha_c", p.alpha_c)?;
    let m = p.m_t as f64;
    let d = 2.0 / p.alpha_c;
    let sigma1 = PI * p.lambda_b * p.r_c * p.r_c;
    let sigma2 = p.p_b * p.intercept_c / (m * p.r_c.powf(p.alpha_c));
    let f = gauss2f1(-d, m, 1.0 - d, -sigma2 * s)?;
    Ok((-sigma1 * (f - 1.0)).exp())
}

/// Laplace transform of the typical user's interference given the serving
/// distances, with
/// `varsigma_4 = P_b C_RIS,E / (m_t r_ru0 r_br0^alpha_t)`.
pub fn laplace_typical_ris(
    s: f64,
    r_br0: f64,
    r_ru0: f64,
    p: &NetworkParams,
    mode: CrisMode,
) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::domain(format!("Laplace argument must be >= 0, got {s}")));
    }
    if !(r_br0 > 0.0 && r_ru0 > 0.0) {
        return Err(Error::domain("serving distances must be positive"));
    }
    require_alpha("alpha_t", p.alpha_t)?;
    let m = p.m_t as f64;
    let d = 2.0 / p.alpha_t;
    let ce = c_ris_e(&p.ris_config()?, mode)?;
    let sigma3 = PI * p.lambda_b * r_br0 * r_br0;
    let sigma4 = p.p_b * ce / (m * r_ru0 * r_br0.powf(p.alpha_t));
    let f = gauss2f1(-d, m, 1.0 - d, -s * sigma4)?;
    Ok((-sigma3 * (f - 1.0)).exp())
}

/// Mean interference at the connected user,
/// `2 pi lambda_b P_b C r_c^(2-alpha_c) / (alpha_c - 2)`.
pub fn mean_interference_connected(p: &NetworkParams) -> Result<f64> {
    require_alpha("alpha_c", p.alpha_c)?;
    Ok(2.0 * PI * p.lambda_b * p.p_b * p.intercept_c * p.r_c.powf(2.0 - p.alpha_c)
        / (p.alpha_c - 2.0))
}

/// Mean-interference approximation of the connected user's OMA SNR.
pub fn gamma_c_e(p: &NetworkParams) -> Result<f64> {
    require_alpha("alpha_c", p.alpha_c)?;
    let a = p.alpha_c - 2.0;
    let signal = p.p_b * p.intercept_c * p.r_c.powf(-p.alpha_c);
    Ok(a * signal
        / (2.0 * PI * p.lambda_b * p.p_b * p.intercept_c * p.r_c.powf(2.0 - p.alpha_c)
            + a * p.sigma2))
}

/// `c_t^E = 0.01 Gamma(0.01) = Gamma(1.01)`.
pub fn c_t_e() -> f64 {
    gamma_fn(1.01).expect("positive argument")
}

/// Approximate mean OMA SNR of the typical user,
/// `c_t^E (alpha_t - 2) pi lambda_b`.
pub fn gamma_t_e(p: &NetworkParams) -> f64 {
    c_t_e() * (p.alpha_t - 2.0) * PI * p.lambda_b
}

/// `max(gamma_sic/(a_c - gamma_sic a_t), gamma_t/a_t, gamma_c^E)`.
pub fn upsilon(p: &NetworkParams) -> Result<f64> {
    let den = p.a_c - p.gamma_sic_th * p.a_t;
    if den <= 0.0 {
        return Err(Error::config("a_c - gamma_sic_th * a_t > 0 violated"));
    }
    Ok((p.gamma_sic_th / den)
        .max(p.gamma_t_th / p.a_t)
        .max(gamma_c_e(p)?))
}

/// `beta_1` and `beta_2` of the `n`-th binomial term.
fn typical_betas(n: u32, upsilon: f64, ce: f64, p: &NetworkParams) -> Result<(f64, f64)> {
    let eta = p.fading_t()?.eta;
    let m = p.m_t as f64;
    let x = n as f64 * eta * upsilon;
    let beta1 = x * p.sigma2 / (p.p_b * ce);
    let d = 2.0 / p.alpha_t;
    let beta2 = PI * p.lambda_b * gauss2f1(-d, m, 1.0 - d, -x / m)?;
    Ok((beta1, beta2))
}

/// Typical-user coverage as the double integral over the serving BS-RIS
/// distance `x` and the RIS-user distance `y`:
/// `sum_n (-1)^(n+1) C(m_t, n) 2 pi lambda_b int_0^R_L int_0^inf
///  x exp(-beta_1 (x y)^alpha_t - beta_2 x^2) dx f(y) dy`.
pub fn coverage_typical(p: &NetworkParams, settings: &AnalyticSettings) -> Result<Coverage> {
    require_alpha("alpha_t", p.alpha_t)?;
    let ce = c_ris_e(&p.ris_config()?, settings.cris_mode)?;
    let ups = upsilon(p)?;
    let alpha = p.alpha_t;
    let r_l = p.r_l;
    let mut terms = Vec::with_capacity(p.m_t as usize);
    for n in 1..=p.m_t {
        let (beta1, beta2) = typical_betas(n, ups, ce, p)?;
        let weight = binomial(p.m_t, n) * 2.0 * PI * p.lambda_b;
        let tol = settings.tol / (weight * p.m_t as f64);
        let inner = |y: f64| -> Result<f64> {
            let b0 = beta1 * y.powf(alpha);
            if b0 == 0.0 {
                return Ok(0.5 / beta2);
            }
            let scale = beta2.sqrt().recip().min(b0.powf(-1.0 / alpha));
            let f = |x: f64| x * (-b0 * x.powf(alpha) - beta2 * x * x).exp();
            Ok(integrate_to_infinity(f, 0.0, scale, 0.01 * tol)?.value)
        };
        // the closure cannot return errors through integrate_1d; stash the first
        let failure = std::cell::RefCell::new(None);
        let outer = integrate_1d(
            |y| match inner(y) {
                Ok(v) => v * 2.0 * y / (r_l * r_l),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            },
            0.0,
            r_l,
            0.1 * tol,
        )?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        terms.push(sign * weight * outer);
    }
    Ok(Coverage::from_terms("typical-user coverage", &terms))
}

/// Chebyshev-Gauss closed form of [`coverage_typical`] for `alpha_t = 4`,
/// with the inner integral in terms of `exp(z^2) erfc(z)` evaluated as a
/// single scaled function so it cannot overflow.
pub fn coverage_typical_closed(p: &NetworkParams, settings: &AnalyticSettings) -> Result<Coverage> {
    if p.alpha_t != 4.0 {
        return Err(Error::domain(format!(
            "the closed form needs alpha_t = 4 exactly, got {}",
            p.alpha_t
        )));
    }
    let rule = chebyshev_gauss(settings.chebyshev_order)?;
    let ce = c_ris_e(&p.ris_config()?, settings.cris_mode)?;
    let ups = upsilon(p)?;
    let r_l = p.r_l;
    let lam = p.lambda_b;
    let mut terms = Vec::with_capacity(p.m_t as usize);
    for n in 1..=p.m_t {
        let (beta1, beta2) = typical_betas(n, ups, ce, p)?;
        let mut sum = 0.0;
        for (&w, &omega) in rule.nodes.iter().zip(&rule.weights) {
            let xi = 0.5 * r_l * (w + 1.0);
            let jac = (1.0 - w * w).sqrt();
            let node = if beta1 == 0.0 {
                // noise-free limit of erfcx(z) ~ 1/(z sqrt(pi))
                omega * PI * lam * jac * xi / (r_l * beta2)
            } else {
                let sb = beta1.sqrt();
                omega * PI.powf(1.5) * lam * jac / (2.0 * r_l * sb * xi)
                    * erfcx(beta2 / (2.0 * sb * xi * xi))
            };
            sum += node;
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        terms.push(sign * binomial(p.m_t, n) * sum);
    }
    Ok(Coverage::from_terms("typical-user coverage (closed form)", &terms))
}

/// Connected-user coverage: the sum for the SIC-order event at `gamma_t^E`
/// minus the sum for the decoding event at `gamma_c^th`, both through the
/// Gamma CDF bound and the Laplace transform of the interference.
pub fn coverage_connected_closed(p: &NetworkParams) -> Result<Coverage> {
    require_alpha("alpha_c", p.alpha_c)?;
    let den = p.a_c - p.a_t * p.gamma_c_th;
    if den <= 0.0 {
        return Err(Error::config("a_c - gamma_c_th * a_t > 0 violated"));
    }
    let eta = p.fading_c()?.eta;
    let m = p.m_t as f64;
    let d = 2.0 / p.alpha_c;
    let gte = gamma_t_e(p);
    let rc2 = p.r_c * p.r_c;
    let rca = p.r_c.powf(p.alpha_c);
    let mut terms = Vec::with_capacity(2 * p.m_c as usize);
    for n in 1..=p.m_c {
        let ne = n as f64 * eta;
        let mu1 = PI * p.lambda_b * (gauss2f1(-d, m, 1.0 - d, -ne * p.p_b * gte / m)? - 1.0);
        let mu2 = ne * gte * p.sigma2 / p.intercept_c;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        terms.push(sign * binomial(p.m_c, n) * (-mu1 * rc2 - mu2 * rca).exp());
    }
    for n in 1..=p.m_c {
        let ne = n as f64 * eta;
        let mu3 = PI * p.lambda_b * (gauss2f1(-d, m, 1.0 - d, -ne * p.gamma_c_th / (m * den))? - 1.0);
        let mu4 = ne * p.gamma_c_th * p.sigma2 / (den * p.p_b * p.intercept_c);
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        terms.push(sign * binomial(p.m_c, n) * (-mu3 * rc2 - mu4 * rca).exp());
    }
    Ok(Coverage::from_terms("connected-user coverage", &terms))
}

/// Both coverages, using the closed form for the typical user when
/// `alpha_t = 4`.
pub fn coverage_pair(p: &NetworkParams, settings: &AnalyticSettings) -> Result<CoveragePair> {
    let typical = if p.alpha_t == 4.0 {
        coverage_typical_closed(p, settings)?
    } else {
        coverage_typical(p, settings)?
    };
    Ok(CoveragePair {
        p_typical: typical.value,
        p_connected: coverage_connected_closed(p)?.value,
    })
}
