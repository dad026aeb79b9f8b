//! Curvature of surfaces of revolution and of the torus.
//!
//! A surface of revolution is written in Monge form `r(ρ, φ) = ρ e_ρ + S(ρ) e_z`.
//! Near the surface the metric is
//!
//! ```text
//! ds² = Z² [1 + q k1]² dρ² + ρ² [1 + q k2]² dφ² + dq²,   Z = √(1 + S_ρ²)
//! ```
//!
//! with principal curvatures `k1 = −S_ρρ / Z³` and `k2 = −S_ρ / (ρ Z)`.
//! The curvature potential left behind when a particle is squeezed onto the
//! surface is `V_C = −(H² − K)/2` (units ħ = mass = 1).
//!
//! The angular factor of the metric is sometimes printed as `q S_ρ / (ρ² Z)`;
//! that form is dimensionally inconsistent, and the torus closed form in
//! [`torus_curvatures`] only agrees with `k2 = −S_ρ / (ρ Z)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type ShapeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A surface of revolution given by its height profile `S(ρ)` and the first
/// two derivatives. Derivatives are supplied by the caller; use
/// [`MongeSurface::derivative_mismatch`] to check them.
#[derive(Clone)]
pub struct MongeSurface {
    shape: ShapeFn,
    shape_d1: ShapeFn,
    shape_d2: ShapeFn,
}

impl fmt::Debug for MongeSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MongeSurface").finish_non_exhaustive()
    }
}

impl MongeSurface {
    pub fn new<S, D1, D2>(shape: S, shape_d1: D1, shape_d2: D2) -> Self
    where
        S: Fn(f64) -> f64 + Send + Sync + 'static,
        D1: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            shape: Arc::new(shape),
            shape_d1: Arc::new(shape_d1),
            shape_d2: Arc::new(shape_d2),
        }
    }

    /// The plane `S = 0`.
    pub fn plane() -> Self {
        Self::new(|_| 0.0, |_| 0.0, |_| 0.0)
    }

    /// Upper hemisphere `S = √(r² − ρ²)`, valid for `0 < ρ < r`.
    pub fn hemisphere(radius: f64) -> Self {
        let r2 = radius * radius;
        Self::new(
            move |rho| (r2 - rho * rho).sqrt(),
            move |rho| -rho / (r2 - rho * rho).sqrt(),
            move |rho| -r2 / (r2 - rho * rho).powf(1.5),
        )
    }

    /// Paraboloid `S = c ρ² / 2`.
    pub fn paraboloid(c: f64) -> Self {
        Self::new(move |rho| 0.5 * c * rho * rho, move |rho| c * rho, move |_| c)
    }

    /// Outer-upper cap of a torus, `S = √(a² − (ρ − R)²)` on `R − a < ρ < R + a`.
    /// The point `ρ = R + a cos θ` corresponds to torus angle `θ ∈ (0, π)`.
    pub fn torus_cap(minor: f64, major: f64) -> Self {
        let a2 = minor * minor;
        Self::new(
            move |rho| (a2 - (rho - major).powi(2)).sqrt(),
            move |rho| -(rho - major) / (a2 - (rho - major).powi(2)).sqrt(),
            move |rho| -a2 / (a2 - (rho - major).powi(2)).powf(1.5),
        )
    }

    pub fn shape(&self, rho: f64) -> f64 {
        (self.shape)(rho)
    }

    pub fn shape_d1(&self, rho: f64) -> f64 {
        (self.shape_d1)(rho)
    }

    pub fn shape_d2(&self, rho: f64) -> f64 {
        (self.shape_d2)(rho)
    }

    /// Largest disagreement between the supplied derivatives and central
    /// differences of the lower-order function at step `h`. Consistent
    /// derivatives give an `O(h²)` result.
    pub fn derivative_mismatch(&self, rho: f64, h: f64) -> f64 {
        let fd1 = (self.shape(rho + h) - self.shape(rho - h)) / (2.0 * h);
        let fd2 = (self.shape_d1(rho + h) - self.shape_d1(rho - h)) / (2.0 * h);
        (fd1 - self.shape_d1(rho))
            .abs()
            .max((fd2 - self.shape_d2(rho)).abs())
    }
}

/// Torus with minor radius `a` and major radius `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusGeometry {
    minor: f64,
    major: f64,
    alpha: f64,
}

impl TorusGeometry {
    pub fn new(minor: f64, major: f64) -> Result<Self> {
        let ok = minor.is_finite() && major.is_finite() && minor > 0.0 && major > 0.0;
        let alpha = minor / major;
        if !ok || !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidRadii { a: minor, major });
        }
        Ok(Self { minor, major, alpha })
    }

    /// Torus with unit major radius, so `a = alpha`.
    pub fn with_aspect_ratio(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        Self::new(alpha, 1.0)
    }

    pub fn minor(&self) -> f64 {
        self.minor
    }

    pub fn major(&self) -> f64 {
        self.major
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Distance from the symmetry axis, `F = R + a cos θ`.
    pub fn axis_distance(&self, theta: f64) -> f64 {
        self.major + self.minor * theta.cos()
    }

    /// Closed-form curvature potential `−R² / (8 a² F²)`.
    pub fn curvature_potential(&self, theta: f64) -> f64 {
        let f = self.axis_distance(theta);
        -(self.major * self.major) / (8.0 * self.minor * self.minor * f * f)
    }
}

/// Principal, mean and Gaussian curvature plus the curvature potential at a
/// surface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureBundle {
    pub k1: f64,
    pub k2: f64,
    pub mean: f64,
    pub gaussian: f64,
    pub potential: f64,
}

impl CurvatureBundle {
    /// `V_C` is evaluated as `−(k1 − k2)² / 8`, which equals `−(H² − K)/2`
    /// but stays non-positive and vanishes exactly at umbilic points.
    pub fn from_principal(k1: f64, k2: f64) -> Self {
        let d = k1 - k2;
        Self {
            k1,
            k2,
            mean: 0.5 * (k1 + k2),
            gaussian: k1 * k2,
            potential: -0.125 * d * d,
        }
    }

    /// `−(H² − K)/2` evaluated from the stored mean and Gaussian curvature.
    pub fn potential_from_mean_gaussian(&self) -> f64 {
        -0.5 * (self.mean * self.mean - self.gaussian)
    }
}

/// Curvatures of a Monge surface of revolution at radius `rho`.
pub fn monge_curvatures(surface: &MongeSurface, rho: f64) -> Result<CurvatureBundle> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(rho));
    }
    let s1 = surface.shape_d1(rho);
    if !s1.is_finite() {
        return Err(Error::NonFinite { rho, what: "S_rho" });
    }
    let s2 = surface.shape_d2(rho);
    if !s2.is_finite() {
        return Err(Error::NonFinite { rho, what: "S_rhorho" });
    }
    let z = (1.0 + s1 * s1).sqrt();
    let k1 = -s2 / (z * z * z);
    let k2 = -s1 / (rho * z);
    Ok(CurvatureBundle::from_principal(k1, k2))
}

/// Closed-form torus curvatures at poloidal angle `theta`:
/// `k1 = 1/a`, `k2 = cos θ / F`.
pub fn torus_curvatures(geom: &TorusGeometry, theta: f64) -> CurvatureBundle {
    let f = geom.axis_distance(theta);
    CurvatureBundle::from_principal(1.0 / geom.minor, theta.cos() / f)
}

/// Norm-preserving rescaling weight `W = 1 + 2qH + q²K` at normal offset `q`.
pub fn norm_weight(q: f64, bundle: &CurvatureBundle) -> f64 {
    1.0 + 2.0 * q * bundle.mean + q * q * bundle.gaussian
}

/// Torus angle matching a point of [`MongeSurface::torus_cap`] at radius `rho`.
pub fn torus_cap_angle(geom: &TorusGeometry, rho: f64) -> f64 {
    ((rho - geom.major) / geom.minor).clamp(-1.0, 1.0).acos()
}

/// Uniform closed-open grid on `[0, 2π)`.
pub fn angle_grid(samples: usize) -> impl Iterator<Item = f64> {
    let step = 2.0 * PI / samples as f64;
    (0..samples).map(move |i| i as f64 * step)
}
