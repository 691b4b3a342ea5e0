use num_complex::Complex64;

use crate::geom::{DiscPoint, Geodesic};

/// Isometry of the disc, `z ↦ (a·w + b) / (b̄·w + ā)` with `w = z̄` when
/// `flip` is set (orientation reversing) and `w = z` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    a: Complex64,
    b: Complex64,
    flip: bool,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        flip: false,
    };

    /// Reflection in a geodesic.
    pub fn reflection(g: &Geodesic) -> Isometry {
        match *g {
            Geodesic::Diameter { dx, dy } => Isometry {
                a: Complex64::new(dx, dy),
                b: Complex64::new(0.0, 0.0),
                flip: true,
            },
            // Inversion z ↦ (c·z̄ − 1)/(z̄ − c̄), scaled by i/r into SU(1,1) form.
            Geodesic::Arc { cx, cy, radius } => {
                let c = Complex64::new(cx, cy);
                let i = Complex64::i();
                Isometry {
                    a: i * c / radius,
                    b: -i / radius,
                    flip: true,
                }
            }
        }
    }

    /// Rotation by `theta` about the origin.
    pub fn rotation(theta: f64) -> Isometry {
        Isometry {
            a: Complex64::from_polar(1.0, theta / 2.0),
            b: Complex64::new(0.0, 0.0),
            flip: false,
        }
    }

    pub fn is_orientation_reversing(&self) -> bool {
        self.flip
    }

    pub fn apply(&self, p: DiscPoint) -> DiscPoint {
        let z = Complex64::new(p.x, p.y);
        let w = if self.flip { z.conj() } else { z };
        let img = (self.a * w + self.b) / (self.b.conj() * w + self.a.conj());
        DiscPoint {
            x: img.re,
            y: img.im,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let (a2, b2) = if self.flip {
            (other.a.conj(), other.b.conj())
        } else {
            (other.a, other.b)
        };
        let a = self.a * a2 + self.b * b2.conj();
        let b = self.a * b2 + self.b * a2.conj();
        // Renormalize |a|² − |b|² = 1 against drift.
        let det = (a.norm_sqr() - b.norm_sqr()).sqrt();
        Isometry {
            a: a / det,
            b: b / det,
            flip: self.flip ^ other.flip,
        }
    }

    /// Image of the origin.
    pub fn origin_image(&self) -> DiscPoint {
        let c = self.b / self.a.conj();
        DiscPoint { x: c.re, y: c.im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{geodesic_through, reflect};

    fn close(p: DiscPoint, q: DiscPoint) -> bool {
        p.euclid_dist(q) < 1e-13
    }

    #[test]
    fn reflection_matches_geometry() {
        let g =
            geodesic_through(DiscPoint { x: 0.3, y: 0.1 }, DiscPoint { x: -0.2, y: 0.5 }).unwrap();
        let d =
            geodesic_through(DiscPoint { x: 0.0, y: 0.0 }, DiscPoint { x: 0.3, y: 0.4 }).unwrap();
        let p = DiscPoint { x: 0.12, y: -0.33 };
        for g in [g, d] {
            let r = Isometry::reflection(&g);
            assert!(close(r.apply(p), reflect(p, &g)));
            assert!(close(r.compose(&r).apply(p), p));
        }
    }

    #[test]
    fn composition_is_application_order() {
        let g =
            geodesic_through(DiscPoint { x: 0.3, y: 0.1 }, DiscPoint { x: -0.2, y: 0.5 }).unwrap();
        let r = Isometry::reflection(&g);
        let rot = Isometry::rotation(0.7);
        let p = DiscPoint { x: 0.2, y: 0.2 };
        assert!(close(rot.compose(&r).apply(p), rot.apply(r.apply(p))));
        assert!(close(r.compose(&rot).apply(p), r.apply(rot.apply(p))));
        assert!(close(
            r.compose(&rot).origin_image(),
            r.apply(rot.apply(DiscPoint::ORIGIN))
        ));
        assert!(!rot.compose(&r).compose(&r).is_orientation_reversing());
    }
}
