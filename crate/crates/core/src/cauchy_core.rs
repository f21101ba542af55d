//! Parameter algebra for the univariate Cauchy family.
//!
//! A Cauchy density `p_{l,s}(x) = s / (π (s² + (x - l)²))` is identified with
//! the point `θ = l + i s` of the upper half-plane ℍ. The real Moebius group
//! SL(2,R) acts on both observations and parameters, and the scalar
//!
//! ```text
//! chi(z, w) = |z - w|² / (2 Im z Im w)
//! ```
//!
//! is a maximal invariant of the induced action on pairs: any two pairs with
//! the same `chi` are related by some `A ∈ SL(2,R)`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{domain, Result};

/// Location-scale parameter of a univariate Cauchy distribution.
///
/// Invariant: `scale > 0` and both fields are finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyParam {
    location: f64,
    scale: f64,
}

impl CauchyParam {
    /// Builds a parameter, rejecting non-finite values and `scale <= 0`.
    pub fn new(location: f64, scale: f64) -> Result<Self> {
        if !location.is_finite() || !scale.is_finite() {
            return Err(domain(format!("non-finite Cauchy parameter ({location}, {scale})")));
        }
        if scale <= 0.0 {
            return Err(domain(format!("Cauchy scale must be positive, got {scale}")));
        }
        Ok(Self { location, scale })
    }

    /// The standard Cauchy distribution `(0, 1)`.
    pub fn standard() -> Self {
        Self { location: 0.0, scale: 1.0 }
    }

    /// Location `l`.
    pub fn location(&self) -> f64 {
        self.location
    }

    /// Scale `s`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Complex view `θ = l + i s`.
    pub fn theta(&self) -> Complex64 {
        Complex64::new(self.location, self.scale)
    }

    /// Builds a parameter from a point of the closed-off upper half-plane.
    ///
    /// A point in the lower half-plane is identified with its conjugate, so
    /// only `Im θ = 0` is rejected.
    pub fn from_theta(theta: Complex64) -> Result<Self> {
        Self::new(theta.re, theta.im.abs())
    }
}

/// Element of SL(2,R), stored as `[[a, b], [c, d]]` with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl MoebiusMap {
    /// Builds a map from a real matrix with positive determinant.
    ///
    /// The matrix is rescaled by `1/√det` so that the stored determinant is
    /// one; matrices with `det <= 0` are rejected.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det <= 0.0 {
            return Err(domain(format!("Moebius matrix needs det > 0, got {det}")));
        }
        let k = det.sqrt().recip();
        Ok(Self { a: a * k, b: b * k, c: c * k, d: d * k })
    }

    /// Identity map.
    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// Translation `z ↦ z + b`.
    pub fn translation(b: f64) -> Self {
        Self { a: 1.0, b, c: 0.0, d: 1.0 }
    }

    /// Dilation `z ↦ k z` for `k > 0`.
    pub fn dilation(k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(domain(format!("dilation factor must be positive, got {k}")));
        }
        let r = k.sqrt();
        Ok(Self { a: r, b: 0.0, c: 0.0, d: r.recip() })
    }

    /// Elliptic rotation about `i`: `[[cos φ, sin φ], [-sin φ, cos φ]]`.
    pub fn rotation(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self { a: c, b: s, c: -s, d: c }
    }

    /// Inversion `z ↦ -1/z`, i.e. `[[0, -1], [1, 0]]`.
    pub fn inversion() -> Self {
        Self { a: 0.0, b: -1.0, c: 1.0, d: 0.0 }
    }

    /// Matrix entries `(a, b, c, d)`.
    pub fn entries(&self) -> (f64, f64, f64, f64) {
        (self.a, self.b, self.c, self.d)
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// Inverse map.
    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Action on an observation: `x ↦ (a x + b) / (c x + d)`.
    ///
    /// Returns an infinite value at the pole `x = -d/c`.
    pub fn apply_point(&self, x: f64) -> f64 {
        (self.a * x + self.b) / (self.c * x + self.d)
    }

    /// Derivative of the observation map, `1 / (c x + d)²`.
    pub fn derivative(&self, x: f64) -> f64 {
        let den = self.c * x + self.d;
        (den * den).recip()
    }
}

/// Density `p_{l,s}(x)`.
pub fn density(p: &CauchyParam, x: f64) -> f64 {
    let z = x - p.location;
    p.scale / (PI * (p.scale * p.scale + z * z))
}

/// Cumulative distribution `Φ_{l,s}(x) = atan((x - l)/s)/π + 1/2`.
pub fn cauchy_cdf(p: &CauchyParam, x: f64) -> f64 {
    ((x - p.location) / p.scale).atan() / PI + 0.5
}

/// Maximal invariant `chi(p, q)`, the Neyman chi-square divergence.
///
/// Evaluated in the expanded real form to avoid complex cancellation.
/// Symmetric in its arguments bit for bit.
pub fn chi(p: &CauchyParam, q: &CauchyParam) -> f64 {
    let dl = p.location - q.location;
    let ds = p.scale - q.scale;
    (dl * dl + ds * ds) / (2.0 * p.scale * q.scale)
}

/// Largest root `λ ≥ 1` of `λ² - (2 + 2chi) λ + 1 = 0`.
pub fn lambda_from_chi(chi: f64) -> f64 {
    1.0 + chi + (chi * (chi + 2.0)).sqrt()
}

/// Inverse of [`lambda_from_chi`]: `chi = (λ - 1)² / (2λ)`.
pub fn chi_from_lambda(lambda: f64) -> f64 {
    let d = lambda - 1.0;
    d * d / (2.0 * lambda)
}

/// Image of a parameter under a Moebius map.
///
/// `l_A = ((al + b)(cl + d) + a c s²) / ((cl + d)² + c² s²)` and
/// `s_A = s / ((cl + d)² + c² s²)`.
pub fn mobius_apply(map: &MoebiusMap, p: &CauchyParam) -> CauchyParam {
    let (a, b, c, d) = map.entries();
    let (l, s) = (p.location, p.scale);
    let cl_d = c * l + d;
    let den = cl_d * cl_d + c * c * s * s;
    CauchyParam {
        location: ((a * l + b) * cl_d + a * c * s * s) / den,
        scale: s / den,
    }
}

/// Finds `λ ≥ 1` and `A ∈ SL(2,R)` with `A.p = (0, λ)` and `A.q = (0, 1)`.
///
/// Built as translation and dilation (sending `q` to `i`), then a rotation
/// about `i` that brings `p` onto the imaginary axis, then an inversion if
/// `p` landed below `i`.
pub fn reduce_to_standard_pair(p: &CauchyParam, q: &CauchyParam) -> (f64, MoebiusMap) {
    let lambda = lambda_from_chi(chi(p, q));
    let s2 = q.scale;
    let rs = s2.sqrt();
    let to_unit = MoebiusMap { a: rs.recip(), b: -q.location / rs, c: 0.0, d: rs };
    let z = mobius_apply(&to_unit, p);
    let (x, y) = (z.location, z.scale);
    if x == 0.0 && y == 1.0 {
        return (lambda, to_unit);
    }
    // Re(R_φ z) = 0  ⇔  sin(2φ)(1 - |z|²)/2 + cos(2φ) x = 0.
    let two_phi = (2.0 * x).atan2(x * x + y * y - 1.0);
    let mut map = MoebiusMap::rotation(0.5 * two_phi).compose(&to_unit);
    if mobius_apply(&map, p).scale < 1.0 {
        map = MoebiusMap::inversion().compose(&map);
    }
    (lambda, map)
}

/// `sup_x q(x)/p(x)` (equal to `sup_x p(x)/q(x)`), which is `λ(chi)`.
pub fn sup_density_ratio(p: &CauchyParam, q: &CauchyParam) -> f64 {
    lambda_from_chi(chi(p, q))
}

/// Poincaré half-plane distance `arccosh(1 + chi)`, evaluated as
/// `2 asinh(√(chi/2))` for accuracy at small separations.
pub fn poincare_distance(p: &CauchyParam, q: &CauchyParam) -> f64 {
    2.0 * (0.5 * chi(p, q)).sqrt().asinh()
}

/// Fisher-Rao distance `arccosh(1 + chi)/√2`.
pub fn fisher_rao_distance(p: &CauchyParam, q: &CauchyParam) -> f64 {
    poincare_distance(p, q) / SQRT_2
}

/// Christoffel symbols `Γ[k][i][j]` of the Fisher metric
/// `g = diag(1/(2s²), 1/(2s²))` in coordinates `(l, s)`.
///
/// Only `Γ¹₁₂ = Γ¹₂₁ = Γ²₂₂ = -1/s` and `Γ²₁₁ = 1/s` are non-zero.
pub fn christoffel(p: &CauchyParam) -> [[[f64; 2]; 2]; 2] {
    let inv = p.scale.recip();
    let mut g = [[[0.0; 2]; 2]; 2];
    g[0][0][1] = -inv;
    g[0][1][0] = -inv;
    g[1][1][1] = -inv;
    g[1][0][0] = inv;
    g
}
