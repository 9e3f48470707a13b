use rand::Rng;

use crate::error::{Error, Result};
use crate::metric::{GeodesicPath, Point};

/// The upper half-plane `{(u, v) : v > 0}` with the curvature −1 metric.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HalfPlane;

/// Declared four-point constant of the hyperbolic plane.
pub const HALF_PLANE_DELTA: f64 = std::f64::consts::LN_2;

impl HalfPlane {
    pub fn new() -> Self {
        HalfPlane
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        match *p {
            Point::Plane { u, v } if u.is_finite() && v.is_finite() && v > 0.0 => Ok(()),
            Point::Plane { u, v } => Err(Error::InvalidPoint(format!(
                "half-plane point ({u}, {v}) needs finite coordinates and v > 0"
            ))),
            _ => Err(Error::ForeignPoint(format!(
                "graph point {p} used in the half-plane"
            ))),
        }
    }

    pub fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        self.check_point(a)?;
        self.check_point(b)?;
        Ok(self.distance_unchecked(a, b))
    }

    pub(crate) fn distance_unchecked(&self, a: &Point, b: &Point) -> f64 {
        let (ua, va) = coords(a);
        let (ub, vb) = coords(b);
        // arcosh(1 + r²/(2 va vb)) written in the cancellation-free form
        let chord = (ua - ub).hypot(va - vb);
        2.0 * (chord / (2.0 * (va * vb).sqrt())).asinh()
    }

    pub fn geodesic(&self, a: &Point, b: &Point) -> Result<GeodesicPath> {
        self.check_point(a)?;
        self.check_point(b)?;
        if a == b {
            return Ok(GeodesicPath::constant(*a));
        }
        let (ua, va) = coords(a);
        let (ub, vb) = coords(b);
        if (ua - ub).abs() <= 1e-12 * va.max(vb) {
            return Ok(GeodesicPath::vertical(*a, *b, ua, va, vb));
        }
        let center = ((ub * ub + vb * vb) - (ua * ua + va * va)) / (2.0 * (ub - ua));
        let radius = (ua - center).hypot(va);
        let g = |u: f64, v: f64| (v.atan2(u - center) / 2.0).tan().ln();
        Ok(GeodesicPath::arc(
            *a,
            *b,
            center,
            radius,
            g(ua, va),
            g(ub, vb),
        ))
    }

    /// The point at distance `rho` from `center` on the hyperbolic circle
    /// around it, at circle parameter `phi` (`phi = 0` is straight down).
    pub fn polar(&self, center: &Point, rho: f64, phi: f64) -> Point {
        let (u, v) = coords(center);
        let (s, c) = (rho.sinh(), rho.cosh());
        Point::Plane {
            u: u + v * s * phi.sin(),
            v: v * (c - s * phi.cos()),
        }
    }

    /// Uniform-in-coordinates sample from the box `[u0, u1] × [v0, v1]`.
    pub fn random_in_box<R: Rng + ?Sized>(&self, rng: &mut R, bx: [f64; 4]) -> Point {
        Point::Plane {
            u: rng.gen_range(bx[0]..=bx[1]),
            v: rng.gen_range(bx[2]..=bx[3]),
        }
    }

    /// Sample from the ball of radius `radius` around `center`.
    pub fn random_in_ball<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        center: &Point,
        radius: f64,
    ) -> Point {
        let rho = radius * rng.gen::<f64>().sqrt();
        let phi = rng.gen::<f64>() * std::f64::consts::TAU;
        self.polar(center, rho, phi)
    }
}

pub(crate) fn coords(p: &Point) -> (f64, f64) {
    match *p {
        Point::Plane { u, v } => (u, v),
        _ => unreachable!("checked by caller"),
    }
}
