//! Scalar parameters of the network model and their defaults.

use std::f64::consts::PI;

use crate::channel::{FadingSpec, RisConfig};
use crate::error::{Error, Result};

/// Every scalar of the system model. Powers are linear watts, distances
/// metres, densities per square metre.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    /// Base-station density.
    pub lambda_b: f64,
    /// Radius of the RIS (line-of-sight) ball around the typical user.
    pub r_l: f64,
    /// Fixed distance from the serving BS to the connected user.
    pub r_c: f64,
    /// BS transmit power.
    pub p_b: f64,
    /// Noise power.
    pub sigma2: f64,
    pub a_c: f64,
    pub a_t: f64,
    pub alpha_c: f64,
    pub alpha_t: f64,
    /// Direct-link path-loss intercept `C`.
    pub intercept_c: f64,
    /// RIS half-length `L`.
    pub half_length: f64,
    pub wavenumber: f64,
    pub phase_offset: f64,
    pub m_t: u32,
    pub m_c: u32,
    /// Fraction of the typical-user interference reaching the user.
    pub rho_t: f64,
    /// Incidence share of the BS-RIS-user angle.
    pub rho_a: f64,
    pub gamma_sic_th: f64,
    pub gamma_t_th: f64,
    pub gamma_c_th: f64,
    /// Bandwidth in Hz.
    pub bandwidth: f64,
    /// Target rates in bit/s; `gamma_*_th = 2^(R/B) - 1`.
    pub rate_t: f64,
    pub rate_c: f64,
    /// Simulated BS field radius in units of `1/sqrt(pi lambda_b)`.
    pub r_max_norm: f64,
}

/// Noise power of -90 dBm.
pub const DEFAULT_SIGMA2_W: f64 = 1e-12;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * (w / 1e-3).log10()
}

/// `2^(R/B) - 1`.
pub fn rate_to_threshold(rate: f64, bandwidth: f64) -> f64 {
    (rate / bandwidth * std::f64::consts::LN_2).exp_m1()
}

/// Inverse of [`rate_to_threshold`].
pub fn threshold_to_rate(threshold: f64, bandwidth: f64) -> f64 {
    bandwidth * threshold.ln_1p() / std::f64::consts::LN_2
}

impl Default for NetworkParams {
    fn default() -> Self {
        let bandwidth = 10e6;
        let th = 1e-2;
        let wavelength = 0.1;
        NetworkParams {
            lambda_b: 1.0 / (300.0 * 300.0 * PI),
            r_l: 25.0,
            r_c: 100.0,
            p_b: dbm_to_watts(10.0),
            sigma2: DEFAULT_SIGMA2_W,
            a_c: 0.6,
            a_t: 0.4,
            alpha_c: 4.0,
            alpha_t: 2.4,
            intercept_c: (wavelength / (4.0 * PI)).powi(2),
            half_length: 0.75,
            wavenumber: 2.0 * PI / wavelength,
            phase_offset: 0.0,
            m_t: 4,
            m_c: 4,
            rho_t: 1.0,
            rho_a: 0.5,
            gamma_sic_th: th,
            gamma_t_th: th,
            gamma_c_th: th,
            bandwidth,
            rate_t: threshold_to_rate(th, bandwidth),
            rate_c: threshold_to_rate(th, bandwidth),
            r_max_norm: 20.0,
        }
    }
}

impl NetworkParams {
    /// Sets the transmit power from a transmit SNR `P_b / sigma^2` in dB.
    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        self.p_b = self.sigma2 * 10f64.powf(snr_db / 10.0);
        self
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * (self.p_b / self.sigma2).log10()
    }

    /// Sets both the typical-user threshold and its rate consistently.
    pub fn set_gamma_t_th(&mut self, th: f64) {
        self.gamma_t_th = th;
        self.rate_t = threshold_to_rate(th, self.bandwidth);
    }

    pub fn set_gamma_c_th(&mut self, th: f64) {
        self.gamma_c_th = th;
        self.rate_c = threshold_to_rate(th, self.bandwidth);
    }

    /// Radius of the explicitly simulated BS field.
    pub fn r_max(&self) -> f64 {
        self.r_max_norm / (PI * self.lambda_b).sqrt()
    }

    pub fn ris_config(&self) -> Result<RisConfig> {
        RisConfig::new(self.half_length, self.wavenumber, self.phase_offset, self.rho_a)
    }

    pub fn fading_t(&self) -> Result<FadingSpec> {
        FadingSpec::new(self.m_t)
    }

    pub fn fading_c(&self) -> Result<FadingSpec> {
        FadingSpec::new(self.m_c)
    }

    /// Checks every model invariant, naming the first one violated.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda_b", self.lambda_b),
            ("r_l", self.r_l),
            ("r_c", self.r_c),
            ("p_b", self.p_b),
            ("intercept_c", self.intercept_c),
            ("half_length", self.half_length),
            ("wavenumber", self.wavenumber),
            ("gamma_sic_th", self.gamma_sic_th),
            ("gamma_t_th", self.gamma_t_th),
            ("gamma_c_th", self.gamma_c_th),
            ("bandwidth", self.bandwidth),
            ("r_max_norm", self.r_max_norm),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(self.sigma2 >= 0.0 && self.sigma2.is_finite()) {
            return Err(Error::config(format!("sigma2 must be >= 0, got {}", self.sigma2)));
        }
        if !self.phase_offset.is_finite() {
            return Err(Error::config("phase_offset must be finite"));
        }
        if !(self.a_c > 0.0 && self.a_t > 0.0) {
            return Err(Error::config("power fractions a_c and a_t must be positive"));
        }
        if (self.a_c + self.a_t - 1.0).abs() > 1e-12 {
            return Err(Error::config(format!(
                "a_c + a_t = 1 violated: {} + {} = {}",
                self.a_c,
                self.a_t,
                self.a_c + self.a_t
            )));
        }
        if self.a_c <= self.a_t {
            return Err(Error::config(format!(
                "a_c > a_t violated: a_c = {}, a_t = {}",
                self.a_c, self.a_t
            )));
        }
        if self.a_c - self.gamma_sic_th * self.a_t <= 0.0 {
            return Err(Error::config("a_c - gamma_sic_th * a_t > 0 violated"));
        }
        if self.a_c - self.gamma_c_th * self.a_t <= 0.0 {
            return Err(Error::config("a_c - gamma_c_th * a_t > 0 violated"));
        }
        for (name, a) in [("alpha_c", self.alpha_c), ("alpha_t", self.alpha_t)] {
            if !(a > 2.0 && a.is_finite()) {
                return Err(Error::config(format!("{name} > 2 violated, got {a}")));
            }
        }
        if self.m_t == 0 || self.m_c == 0 {
            return Err(Error::config("Nakagami orders m_t, m_c must be >= 1"));
        }
        if self.m_t > 16 || self.m_c > 16 {
            return Err(Error::config(
                "Nakagami orders above 16 make the alternating binomial sums unreliable",
            ));
        }
        if !(0.0..=1.0).contains(&self.rho_t) {
            return Err(Error::config(format!("rho_t must lie in [0, 1], got {}", self.rho_t)));
        }
        if !(self.rho_a > 0.0 && self.rho_a < 1.0) {
            return Err(Error::config(format!("rho_a must lie in (0, 1), got {}", self.rho_a)));
        }
        for (name, rate, th) in [
            ("rate_t", self.rate_t, self.gamma_t_th),
            ("rate_c", self.rate_c, self.gamma_c_th),
        ] {
            let implied = rate_to_threshold(rate, self.bandwidth);
            if !((implied - th).abs() <= 1e-9 * th) {
                return Err(Error::config(format!(
                    "threshold consistency 2^({name}/bandwidth) - 1 = {implied} differs from {th}"
                )));
            }
        }
        let r_max = self.r_max();
        if r_max <= 2.0 * self.r_l.max(self.r_c) {
            return Err(Error::config(format!(
                "simulated field radius {r_max} m must exceed twice max(r_l, r_c)"
            )));
        }
        Ok(())
    }
}
