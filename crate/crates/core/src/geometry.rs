//! Planar network geometry: base stations from a Poisson point process on an
//! annulus, the RIS uniform in the line-of-sight ball around the typical
//! user, nearest-to-RIS association and the BS-RIS-user link angle.
//!
//! The typical user always sits at the origin.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::sgkernel::ln_factorial;

/// Give up after this many consecutive empty base-station draws.
const MAX_EMPTY_RESAMPLES: u32 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn from_polar(radius: f64, angle: f64) -> Self {
        Point {
            x: radius * angle.cos(),
            y: radius * angle.sin(),
        }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Direction of the vector `other - self`.
    pub fn bearing_to(self, other: Point) -> f64 {
        (other.y - self.y).atan2(other.x - self.x)
    }
}

/// Samples a homogeneous PPP of the given density on the annulus
/// `r_min < |p| <= r_max`.
pub fn sample_ppp_annulus<R: Rng + ?Sized>(
    density: f64,
    r_min: f64,
    r_max: f64,
    rng: &mut R,
) -> Result<Vec<Point>> {
    if !(r_min >= 0.0 && r_max > r_min && r_max.is_finite()) {
        return Err(Error::domain(format!(
            "annulus needs 0 <= r_min < r_max, got ({r_min}, {r_max})"
        )));
    }
    if !(density >= 0.0 && density.is_finite()) {
        return Err(Error::domain(format!("PPP density must be >= 0, got {density}")));
    }
    let mean = density * PI * (r_max * r_max - r_min * r_min);
    if mean == 0.0 {
        return Ok(Vec::new());
    }
    let count = Poisson::new(mean)
        .map_err(|e| Error::domain(format!("Poisson mean {mean}: {e}")))?
        .sample(rng) as usize;
    let (lo2, hi2) = (r_min * r_min, r_max * r_max);
    Ok((0..count)
        .map(|_| {
            let r = rng.random_range(lo2..hi2).sqrt();
            Point::from_polar(r, rng.random_range(0.0..TAU))
        })
        .collect())
}

/// Uniform point in the disk of radius `r_l` around the origin.
pub fn sample_ris<R: Rng + ?Sized>(r_l: f64, rng: &mut R) -> Point {
    let r = r_l * rng.random::<f64>().sqrt();
    Point::from_polar(r, rng.random_range(0.0..TAU))
}

/// Density of the distance to the `n`-th nearest point of a planar PPP.
///
/// Evaluated in log space so large `n` and large `x` neither overflow nor
/// lose the small tail values.
pub fn nearest_bs_pdf(x: f64, n: u32, density: f64) -> f64 {
    if x <= 0.0 || n == 0 || density <= 0.0 {
        return 0.0;
    }
    let pl = PI * density;
    let nf = n as f64;
    let ln = 2f64.ln() + nf * pl.ln() - ln_factorial(n - 1) + (2.0 * nf - 1.0) * x.ln()
        - pl * x * x;
    ln.exp()
}

/// The BS-RIS-user angle `theta` in `[0, pi]`.
///
/// `psi1` is the direction from the user to the RIS and `psi2` the
/// direction from the RIS to the BS, both against the global x-axis;
/// `theta = |pi - |psi2 - psi1||` after reducing the difference modulo
/// `2 pi`. Equivalently `theta` is the angle at the RIS between the BS and
/// the user: 0 when both lie in the same direction, `pi` when the RIS sits
/// between them.
pub fn compute_link_angle(bs: Point, ris: Point, user: Point) -> Result<f64> {
    if bs == ris || ris == user {
        return Err(Error::domain("link angle undefined for coincident points"));
    }
    let psi1 = user.bearing_to(ris);
    let psi2 = ris.bearing_to(bs);
    let d = (psi2 - psi1).abs().rem_euclid(TAU);
    Ok((PI - d).abs().min(PI))
}

/// Splits `theta` into incidence and reflection parts in the ratio `rho_a`.
pub fn split_angle(theta: f64, rho_a: f64) -> Result<(f64, f64)> {
    if !(rho_a > 0.0 && rho_a < 1.0) {
        return Err(Error::domain(format!("rho_a must lie in (0, 1), got {rho_a}")));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::domain(format!("theta must lie in [0, pi], got {theta}")));
    }
    Ok((rho_a * theta, (1.0 - rho_a) * theta))
}

/// One BS -> RIS -> user reflection path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub r_br: f64,
    pub r_ru: f64,
    pub theta: f64,
    pub theta_br: f64,
    pub theta_ru: f64,
}

impl LinkGeometry {
    pub fn from_points(bs: Point, ris: Point, user: Point, rho_a: f64) -> Result<Self> {
        let theta = compute_link_angle(bs, ris, user)?;
        let (theta_br, theta_ru) = split_angle(theta, rho_a)?;
        Ok(LinkGeometry {
            r_br: bs.distance(ris),
            r_ru: ris.distance(user),
            theta,
            theta_br,
            theta_ru,
        })
    }
}

/// Index of the point closest to `target`; ties go to the lowest index.
pub fn nearest_index(points: &[Point], target: Point) -> Option<usize> {
    points
        .iter()
        .map(|p| p.distance(target))
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}

/// Axis angle of a linear RIS whose normal splits the BS-RIS-user angle in
/// the ratio `rho_a`: the normal makes angle `rho_a * theta` with the
/// direction to the BS and `(1 - rho_a) * theta` with the direction to the
/// user.
pub fn ris_axis_for(bs: Point, ris: Point, user: Point, rho_a: f64) -> f64 {
    let to_user = ris.bearing_to(user);
    let to_bs = ris.bearing_to(bs);
    let delta = (to_bs - to_user + PI).rem_euclid(TAU) - PI;
    let normal = to_user + delta.signum() * (1.0 - rho_a) * delta.abs();
    (normal - PI / 2.0).rem_euclid(TAU)
}

/// One sampled network snapshot seen from the typical user.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub bs_points: Vec<Point>,
    pub ris: Point,
    /// Angle of the RIS axis to the global x-axis.
    pub ris_orientation: f64,
    pub associated_index: usize,
    pub rng_seed: u64,
    /// Number of empty base-station sets thrown away before this one.
    pub empty_resamples: u32,
}

impl Realization {
    /// Samples BSs on the annulus `(r_l, r_max)`, the RIS in the disk of
    /// radius `r_l`, and associates the BS nearest to the RIS. An empty BS
    /// set is redrawn.
    pub fn sample<R: Rng + ?Sized>(
        lambda_b: f64,
        r_l: f64,
        r_max: f64,
        rho_a: f64,
        rng_seed: u64,
        rng: &mut R,
    ) -> Result<Self> {
        let mut empty_resamples = 0;
        let bs_points = loop {
            let pts = sample_ppp_annulus(lambda_b, r_l, r_max, rng)?;
            if !pts.is_empty() {
                break pts;
            }
            empty_resamples += 1;
            if empty_resamples >= MAX_EMPTY_RESAMPLES {
                return Err(Error::domain(format!(
                    "no base station in the annulus after {empty_resamples} draws"
                )));
            }
        };
        if empty_resamples > 0 {
            log::debug!("redrew an empty base-station set {empty_resamples} time(s)");
        }
        let ris = sample_ris(r_l, rng);
        let associated_index = nearest_index(&bs_points, ris).expect("nonempty");
        let ris_orientation = ris_axis_for(bs_points[associated_index], ris, Point::ORIGIN, rho_a);
        Ok(Realization {
            bs_points,
            ris,
            ris_orientation,
            associated_index,
            rng_seed,
            empty_resamples,
        })
    }

    pub fn serving_bs(&self) -> Point {
        self.bs_points[self.associated_index]
    }

    pub fn serving_link(&self, rho_a: f64) -> Result<LinkGeometry> {
        LinkGeometry::from_points(self.serving_bs(), self.ris, Point::ORIGIN, rho_a)
    }
}
