//! Closed-form metrics of the regular polygon `P_{p,q}` (p sides, interior
//! angle `2π/q`) with one vertex at the disc centre, and the chain of
//! intermediate quantities they are derived from.
//!
//! With `a = cos(π/q + π/p)` and `b = cos²(π/q) − sin²(π/p)`:
//!
//! * `h = a / √b`, Euclidean distance from O to the hyperbolic centre of the
//!   circumscribed circle (also the circumradius of the polygon centred at O);
//! * `e = a√b / (a² + b)`, distance from O to its Euclidean centre;
//! * `s = 2h / (1 + h²) = 2e`, the circle's Euclidean diameter through O;
//! * `δ = ln((1 + s)/(1 − s))`, its hyperbolic diameter.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("{{{p},{q}}} is not hyperbolic (cos²(π/q) − sin²(π/p) = {b:e})")]
    DegenerateGeometry { p: u64, q: u64, b: f64 },
    #[error("domain error: {0}")]
    Domain(String),
}

/// Side count `p` and valence `q` of a regular hyperbolic polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolygonSpec {
    pub p: u64,
    pub q: u64,
}

impl PolygonSpec {
    /// Validates `p, q ≥ 3` and `1/p + 1/q < 1/2`.
    pub fn new(p: u64, q: u64) -> Result<Self, MetricsError> {
        if p < 3 || q < 3 {
            return Err(MetricsError::Domain(format!(
                "p = {p} and q = {q} must both be at least 3"
            )));
        }
        // (p − 2)(q − 2) > 4 is the exact integer form of the hyperbolicity test.
        if (p - 2).saturating_mul(q - 2) <= 4 {
            return Err(MetricsError::DegenerateGeometry {
                p,
                q,
                b: b_term(p as f64, q as f64),
            });
        }
        Ok(PolygonSpec { p, q })
    }

    pub fn alpha(&self) -> f64 {
        2.0 * PI / self.q as f64
    }

    fn pf(&self) -> f64 {
        self.p as f64
    }

    fn qf(&self) -> f64 {
        self.q as f64
    }

    /// `a = cos(π/q + π/p)`.
    pub fn a(&self) -> f64 {
        (PI / self.qf() + PI / self.pf()).cos()
    }

    /// `b = cos²(π/q) − sin²(π/p)`.
    pub fn b(&self) -> f64 {
        b_term(self.pf(), self.qf())
    }

    /// `N = sin²(π/q) sin²(π/p)`.
    pub fn n_term(&self) -> f64 {
        ((PI / self.qf()).sin() * (PI / self.pf()).sin()).powi(2)
    }

    /// `b − a²` through its product form `2 sin(π/q) sin(π/p) cos(π/q + π/p)`.
    pub fn b_minus_a2(&self) -> f64 {
        2.0 * (PI / self.qf()).sin() * (PI / self.pf()).sin() * self.a()
    }
}

fn b_term(p: f64, q: f64) -> f64 {
    (PI / q).cos().powi(2) - (PI / p).sin().powi(2)
}

/// Every derived quantity for one `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolygonMetrics {
    pub omega: f64,
    pub r: f64,
    pub h: f64,
    pub e: f64,
    pub s: f64,
    pub delta: f64,
    pub a: f64,
    pub b: f64,
    #[serde(rename = "Delta")]
    pub big_delta: f64,
    #[serde(rename = "N")]
    pub n: f64,
}

impl PolygonMetrics {
    pub fn compute(spec: &PolygonSpec) -> Self {
        let a = spec.a();
        let b = spec.b();
        let h = h_pq(spec);
        PolygonMetrics {
            omega: omega_pq(spec),
            r: circumradius_pq(spec),
            h,
            e: e_pq(spec),
            s: s_from_h(h).expect("h < 1 for hyperbolic specs"),
            delta: delta_pq(spec),
            a,
            b,
            big_delta: b,
            n: spec.n_term(),
        }
    }

    /// Residuals of the identities tying the quantities together.
    pub fn identity_residuals(&self, spec: &PolygonSpec) -> IdentityResiduals {
        let direct_n = (PI / spec.q as f64).cos().powi(2) * (PI / spec.p as f64).cos().powi(2)
            - (PI / spec.q as f64).cos().powi(2)
            + (PI / spec.p as f64).sin().powi(2);
        IdentityResiduals {
            r_vs_h: (self.r - self.h).abs(),
            e_vs_half_s: (self.e - self.s / 2.0).abs(),
            e_vs_h: (self.e - self.h / (1.0 + self.h * self.h)).abs(),
            n_factorisation: (direct_n - self.n).abs(),
            product_form: product_form_residual(spec),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    pub r_vs_h: f64,
    pub e_vs_half_s: f64,
    pub e_vs_h: f64,
    pub n_factorisation: f64,
    pub product_form: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        [
            self.r_vs_h,
            self.e_vs_half_s,
            self.e_vs_h,
            self.n_factorisation,
            self.product_form,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Abscissa of the centre of the circle supporting the side `A_0 A_1` of the
/// polygon centred at O: `ω² = cos²(π/q) / b`.
pub fn omega_pq(spec: &PolygonSpec) -> f64 {
    let b = spec.b();
    (PI / spec.q as f64).cos() / b.sqrt()
}

/// Circumradius of the polygon centred at O from the side circle:
/// `r = ω cos(π/p) − √(ω² cos²(π/p) − 1)`.
pub fn circumradius_pq(spec: &PolygonSpec) -> f64 {
    let w = omega_pq(spec);
    let c = (PI / spec.p as f64).cos();
    let wc = w * c;
    // Rationalised smaller root of r² − 2ωr cos(π/p) + 1 = 0.
    1.0 / (wc + (wc * wc - 1.0).sqrt())
}

/// `h_{p,q} = cos(π/q + π/p) / √(cos²(π/q) − sin²(π/p))`.
pub fn h_pq(spec: &PolygonSpec) -> f64 {
    spec.a() / spec.b().sqrt()
}

/// `e_{p,q} = a√b / (a² + b)`.
pub fn e_pq(spec: &PolygonSpec) -> f64 {
    let a = spec.a();
    let b = spec.b();
    a * b.sqrt() / (a * a + b)
}

/// `s = 2h / (1 + h²)`.
pub fn s_from_h(h: f64) -> Result<f64, MetricsError> {
    if !(0.0..1.0).contains(&h) {
        return Err(MetricsError::Domain(format!("h = {h} outside [0, 1)")));
    }
    Ok(2.0 * h / (1.0 + h * h))
}

/// `1 − s² = ((b − a²)/(a² + b))²`, evaluated without cancellation.
pub fn one_minus_s2(spec: &PolygonSpec) -> f64 {
    let a = spec.a();
    ((spec.b_minus_a2()) / (a * a + spec.b())).powi(2)
}

/// Hyperbolic diameter `δ = ln((1 + s)/(1 − s))` of the circumscribed circle.
pub fn delta_pq(spec: &PolygonSpec) -> f64 {
    let s = 2.0 * e_pq(spec);
    // (1 + s)/(1 − s) = (1 + s)² / (1 − s²).
    2.0 * s.ln_1p() - one_minus_s2(spec).ln()
}

/// `|(b − a²) − 2 sin(π/q) sin(π/p) cos(π/q + π/p)|`.
pub fn product_form_residual(spec: &PolygonSpec) -> f64 {
    let a = spec.a();
    ((spec.b() - a * a) - spec.b_minus_a2()).abs()
}

/// Limit constant of `δ(p, q) − 2 ln p` as `p → ∞`.
pub fn delta_log_constant(q: f64) -> f64 {
    2.0 * (2.0 * (PI / q).cos() / (PI * (PI / q).sin())).ln()
}

/// All hyperbolic pairs of a rectangular grid.
pub fn hyperbolic_grid(
    ps: std::ops::RangeInclusive<u64>,
    qs: std::ops::RangeInclusive<u64>,
) -> Vec<PolygonSpec> {
    let mut out = Vec::new();
    for p in ps {
        for q in qs.clone() {
            if let Ok(s) = PolygonSpec::new(p, q) {
                out.push(s);
            }
        }
    }
    out
}

pub mod oracle {
    //! Numeric construction of `P_{p,q}` with a vertex at O using only
    //! reflections, bisectors and intersections from [`crate::geom`].

    use std::f64::consts::PI;

    use crate::geom::{
        circumcircle, geodesic_through, geodesic_with_tangent, intersect, perpendicular_bisector,
        reflect, segment_angle, DiscPoint, Intersection, Vec2,
    };

    use super::PolygonSpec;

    #[derive(Debug, Clone)]
    pub struct ConstructedPolygon {
        pub vertices: Vec<DiscPoint>,
        /// Hyperbolic centre found on the angle bisector at O.
        pub center: DiscPoint,
        /// Hyperbolic centre found by intersecting two side bisectors.
        pub center_from_bisectors: DiscPoint,
        /// Euclidean centre of the circle through the vertices.
        pub euclid_center: Vec2,
        pub euclid_radius: f64,
        /// Largest distance from a vertex to the fitted circle.
        pub fit_residual: f64,
    }

    impl ConstructedPolygon {
        pub fn h(&self) -> f64 {
            self.center.norm()
        }

        pub fn h_from_bisectors(&self) -> f64 {
            self.center_from_bisectors.norm()
        }

        pub fn e(&self) -> f64 {
            self.euclid_center.norm()
        }

        pub fn s(&self) -> f64 {
            2.0 * self.euclid_radius
        }
    }

    /// Central angle subtended by the first side when that side has
    /// Euclidean length `x`; `None` once the bisectors stop meeting.
    fn central_angle(x: f64, half_angle: f64) -> Option<(f64, DiscPoint)> {
        let v1 = DiscPoint { x, y: 0.0 };
        let mu = perpendicular_bisector(DiscPoint::ORIGIN, v1).ok()?;
        let bis = geodesic_with_tangent(DiscPoint::ORIGIN, Vec2::new(1.0, 0.0).rotated(half_angle));
        match intersect(&mu, &bis).ok()? {
            Intersection::Interior(c) => Some((segment_angle(c, DiscPoint::ORIGIN, v1), c)),
            _ => None,
        }
    }

    /// Finds the side length by bisection on the central angle, then fills
    /// in the vertices by successive reflections through the centre.
    pub fn construct(spec: &PolygonSpec) -> ConstructedPolygon {
        let target = 2.0 * PI / spec.p as f64;
        let half_angle = PI / spec.q as f64;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            match central_angle(mid, half_angle) {
                Some((theta, _)) if theta > target => lo = mid,
                _ => hi = mid,
            }
        }
        let (_, center) = central_angle(lo, half_angle).expect("bracket keeps an interior centre");
        let mut vertices = vec![DiscPoint::ORIGIN, DiscPoint { x: lo, y: 0.0 }];
        while vertices.len() < spec.p as usize {
            let n = vertices.len();
            let spoke = geodesic_through(center, vertices[n - 1]).expect("distinct points");
            vertices.push(reflect(vertices[n - 2], &spoke));
        }
        let m1 = perpendicular_bisector(vertices[0], vertices[1]).expect("distinct");
        let m2 = perpendicular_bisector(vertices[1], vertices[2]).expect("distinct");
        let center_from_bisectors = match intersect(&m1, &m2) {
            Ok(Intersection::Interior(c)) => c,
            other => panic!("side bisectors of a regular polygon must meet: {other:?}"),
        };
        let p = vertices.len();
        let (euclid_center, euclid_radius) = circumcircle(
            vertices[0].vec(),
            vertices[p / 3].vec(),
            vertices[2 * p / 3].vec(),
        )
        .expect("non-collinear");
        let fit_residual = vertices
            .iter()
            .map(|v| ((v.vec() - euclid_center).norm() - euclid_radius).abs())
            .fold(0.0, f64::max);
        ConstructedPolygon {
            vertices,
            center,
            center_from_bisectors,
            euclid_center,
            euclid_radius,
            fit_residual,
        }
    }
}
