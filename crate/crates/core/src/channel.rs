//! Large-scale path loss for the direct and the RIS-reflected links, and
//! Nakagami-m small-scale fading.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::geometry::{LinkGeometry, Point};
use crate::sgkernel::{integrate_1d, ln_factorial};

/// Physical parameters of a linear RIS of length `2L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisConfig {
    pub half_length: f64,
    pub wavenumber: f64,
    pub phase_offset: f64,
    pub rho_a: f64,
}

impl RisConfig {
    pub fn new(half_length: f64, wavenumber: f64, phase_offset: f64, rho_a: f64) -> Result<Self> {
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::domain(format!("RIS half-length must be > 0, got {half_length}")));
        }
        if !(wavenumber > 0.0 && wavenumber.is_finite()) {
            return Err(Error::domain(format!("wavenumber must be > 0, got {wavenumber}")));
        }
        check_rho_a(rho_a)?;
        Ok(RisConfig { half_length, wavenumber, phase_offset, rho_a })
    }
}

fn check_rho_a(rho_a: f64) -> Result<()> {
    if rho_a > 0.0 && rho_a < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("rho_a must lie in (0, 1), got {rho_a}")))
    }
}

/// Nakagami-m fading of integer order `m`, with the constant
/// `eta = m (m!)^(-1/m)` of the Gamma CDF bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingSpec {
    pub m: u32,
    pub eta: f64,
}

impl FadingSpec {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("Nakagami order must be at least 1"));
        }
        let eta = m as f64 * (-ln_factorial(m) / m as f64).exp();
        Ok(FadingSpec { m, eta })
    }

    /// Distribution of the power gain `|h|^2`: Gamma(m, 1/m).
    pub fn power_distribution(&self) -> Gamma<f64> {
        Gamma::new(self.m as f64, 1.0 / self.m as f64).expect("m >= 1 gives valid Gamma")
    }
}

pub fn sample_fading_power<R: Rng + ?Sized>(spec: &FadingSpec, rng: &mut R) -> f64 {
    spec.power_distribution().sample(rng)
}

/// `(1 - exp(-eta x))^m`, the Gamma CDF approximation behind the binomial
/// expansions of the coverage formulas. For `m >= 2` it lies below the true
/// CDF; the two coincide for `m = 1`.
pub fn gamma_cdf_bound(x: f64, spec: &FadingSpec) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (-(-spec.eta * x).exp_m1()).powi(spec.m as i32)
}

/// Direct-link gain `C d^(-alpha_c)`.
pub fn pathloss_direct(distance: f64, intercept: f64, alpha_c: f64) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::domain(format!("link distance must be > 0, got {distance}")));
    }
    Ok(intercept * distance.powf(-alpha_c))
}

/// `C_RIS = (L / 4 pi)(cos theta_br + cos theta_ru)` with both angles
/// clamped to `[0, pi/2]`.
pub fn c_ris(theta_br: f64, theta_ru: f64, half_length: f64) -> f64 {
    let c = |t: f64| t.clamp(0.0, FRAC_PI_2).cos();
    half_length / (4.0 * PI) * (c(theta_br) + c(theta_ru))
}

/// Far-field RIS gain `C_RIS^2 (r_br r_ru)^(-alpha_t)`.
///
/// Split angles beyond `pi/2` (possible for `rho_a` far from 1/2) are
/// clamped to grazing incidence before use.
pub fn pathloss_ris_approx(
    r_br: f64,
    r_ru: f64,
    theta_br: f64,
    theta_ru: f64,
    cfg: &RisConfig,
    alpha_t: f64,
) -> Result<f64> {
    if !(r_br > 0.0 && r_ru > 0.0) {
        return Err(Error::domain(format!(
            "RIS link distances must be > 0, got ({r_br}, {r_ru})"
        )));
    }
    let c = c_ris(theta_br, theta_ru, cfg.half_length);
    Ok(c * c * (r_br * r_ru).powf(-alpha_t))
}

/// The physical-optics integral over the RIS aperture,
/// `|int_{-L}^{L} Psi(x) exp(-j k Omega(x)) dx|^2`.
///
/// `ris_orientation` is the angle of the RIS axis. Distances and local
/// angles at each aperture point come from the exact positions. The phase
/// profile is the linear anomalous-reflector law built from the centre
/// angles in `geom`, with signs taken from the side on which each endpoint
/// lies. The constant `r_br(0) + r_ru(0)` is removed from the phase before
/// integrating, since it drops out of the modulus.
pub fn pathloss_ris_exact(
    geom: &LinkGeometry,
    bs: Point,
    ris: Point,
    ris_orientation: f64,
    cfg: &RisConfig,
    tol: f64,
) -> Result<f64> {
    let user = Point::ORIGIN;
    let (ta, tb) = (ris_orientation.cos(), ris_orientation.sin());
    // normal on the side facing the BS
    let (mut na, mut nb) = (-tb, ta);
    let (bx, by) = (bs.x - ris.x, bs.y - ris.y);
    let (ux, uy) = (user.x - ris.x, user.y - ris.y);
    if na * bx + nb * by < 0.0 {
        na = -na;
        nb = -nb;
    }
    if na * ux + nb * uy <= 0.0 {
        return Err(Error::domain(
            "BS and user must lie on the same side of the RIS",
        ));
    }
    let r_br0 = bx.hypot(by);
    let r_ru0 = ux.hypot(uy);
    // r_br(x) ~ r_br0 + x s_br and r_ru(x) ~ r_ru0 - x s_ru
    let proj_b = (ta * bx + tb * by) / r_br0;
    let proj_u = (ta * ux + tb * uy) / r_ru0;
    let s_br = -proj_b.signum() * geom.theta_br.sin();
    let s_ru = proj_u.signum() * geom.theta_ru.sin();
    let k = cfg.wavenumber;
    let slope = s_br - s_ru;

    let state = move |x: f64| {
        // (r(x)^2 - r0^2) / (r(x) + r0) keeps the difference accurate
        let r_br = (x * x - 2.0 * x * (ta * bx + tb * by) + r_br0 * r_br0).sqrt();
        let r_ru = (x * x - 2.0 * x * (ta * ux + tb * uy) + r_ru0 * r_ru0).sqrt();
        let d_br = (x * x - 2.0 * x * (ta * bx + tb * by)) / (r_br + r_br0);
        let d_ru = (x * x - 2.0 * x * (ta * ux + tb * uy)) / (r_ru + r_ru0);
        let cos_br = (na * (bx - x * ta) + nb * (by - x * tb)) / r_br;
        let cos_ru = (na * (ux - x * ta) + nb * (uy - x * tb)) / r_ru;
        let psi = (cos_br + cos_ru) / (8.0 * PI * (r_br * r_ru).sqrt());
        let phase = -k * (d_br + d_ru - slope * x);
        (psi, phase)
    };
    let l = cfg.half_length;
    // the scale of the integrand bounds what an absolute tolerance means
    let (psi0, _) = state(0.0);
    let abs_tol = tol * psi0.abs() * 2.0 * l;
    let re = integrate_1d(|x| { let (p, ph) = state(x); p * ph.cos() }, -l, l, abs_tol)?;
    let im = integrate_1d(|x| { let (p, ph) = state(x); p * ph.sin() }, -l, l, abs_tol)?;
    Ok(re * re + im * im)
}

/// How the angle-averaged squared RIS constant is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrisMode {
    /// The printed closed form, denominator `4 rho - 12 rho^2 + rho^3`.
    Paper,
    /// The closed form re-derived with denominator `4 rho - 12 rho^2 + 8 rho^3`.
    Corrected,
    /// Direct quadrature of the angle average.
    Numeric,
}

impl CrisMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CrisMode::Paper => "paper",
            CrisMode::Corrected => "corrected",
            CrisMode::Numeric => "numeric",
        }
    }
}

impl std::str::FromStr for CrisMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(CrisMode::Paper),
            "corrected" => Ok(CrisMode::Corrected),
            "numeric" => Ok(CrisMode::Numeric),
            _ => Err(Error::domain(format!(
                "unknown RIS constant mode '{s}' (expected paper, corrected or numeric)"
            ))),
        }
    }
}

/// `E[C_RIS^2]` over `theta ~ U(0, pi)` split in the ratio `rho_a`.
pub fn c_ris_e(cfg: &RisConfig, mode: CrisMode) -> Result<f64> {
    let rho = cfg.rho_a;
    check_rho_a(rho)?;
    let l2 = cfg.half_length * cfg.half_length;
    match mode {
        CrisMode::Paper => {
            let den = 4.0 * rho - 12.0 * rho * rho + rho.powi(3);
            Ok(l2 / (16.0 * PI.powi(3)) * (PI + (2.0 * rho * PI).sin() / den))
        }
        CrisMode::Corrected => {
            // sin(2 rho pi) / (4 rho (1-rho)(1-2 rho)) = pi sinc(pi (1-2 rho)) / (4 rho (1-rho))
            let u = PI * (1.0 - 2.0 * rho);
            let sinc = if u.abs() < 1e-4 {
                1.0 - u * u / 6.0 + u.powi(4) / 120.0
            } else {
                u.sin() / u
            };
            Ok(l2 / (16.0 * PI * PI) * (1.0 + sinc / (4.0 * rho * (1.0 - rho))))
        }
        CrisMode::Numeric => {
            let f = |t: f64| {
                let s = (rho * t).cos() + ((1.0 - rho) * t).cos();
                s * s
            };
            let mean = integrate_1d(f, 0.0, PI, 1e-14)? / PI;
            Ok(l2 / (16.0 * PI * PI) * mean)
        }
    }
}

/// Angle average of the clamped `C_RIS^2` actually used by the simulator.
/// Equals the `Numeric` mode whenever no split angle exceeds `pi/2`.
pub fn c_ris_clamped_mean(cfg: &RisConfig) -> Result<f64> {
    check_rho_a(cfg.rho_a)?;
    let rho = cfg.rho_a;
    let f = |t: f64| {
        let c = c_ris(rho * t, (1.0 - rho) * t, cfg.half_length);
        c * c
    };
    // kinks where a split angle reaches pi/2
    let mut edges = vec![0.0, PI];
    for k in [FRAC_PI_2 / rho, FRAC_PI_2 / (1.0 - rho)] {
        if k < PI {
            edges.push(k);
        }
    }
    edges.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for w in edges.windows(2) {
        total += integrate_1d(f, w[0], w[1], 1e-16)?;
    }
    Ok(total / PI)
}
