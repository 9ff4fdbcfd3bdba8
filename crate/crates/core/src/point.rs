//! Domain tags and tagged points shared by the geometry and quadrature layers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which domain a point (or spec) lives on. `Polydisc(n)` and `Tube(n)` are
/// the n-fold products of the disc and the half-plane respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Disc,
    Halfplane,
    Polydisc(usize),
    Tube(usize),
}

impl DomainKind {
    /// Number of complex coordinates.
    pub fn dim(self) -> usize {
        match self {
            DomainKind::Disc | DomainKind::Halfplane => 1,
            DomainKind::Polydisc(n) | DomainKind::Tube(n) => n,
        }
    }

    /// True when each coordinate ranges over the unit disc.
    pub fn is_disc_like(self) -> bool {
        matches!(self, DomainKind::Disc | DomainKind::Polydisc(_))
    }

    /// Strict interior membership, coordinate by coordinate.
    pub fn contains(self, coords: &[Complex64]) -> bool {
        if coords.len() != self.dim() {
            return false;
        }
        if self.is_disc_like() {
            coords.iter().all(|z| z.norm_sqr() < 1.0)
        } else {
            coords.iter().all(|z| z.im > 0.0)
        }
    }
}

/// A point of 𝔻, ℋ, 𝔻ⁿ or ℋⁿ, tagged with the domain it belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainPoint {
    pub kind: DomainKind,
    pub coords: Vec<Complex64>,
}

impl DomainPoint {
    /// Tags `coords` with `kind` after checking interior membership.
    pub fn new(kind: DomainKind, coords: Vec<Complex64>) -> Option<Self> {
        if kind.contains(&coords) {
            Some(DomainPoint { kind, coords })
        } else {
            None
        }
    }

    /// One-dimensional point on the disc.
    pub fn disc(z: Complex64) -> Option<Self> {
        Self::new(DomainKind::Disc, vec![z])
    }

    /// One-dimensional point on the upper half-plane.
    pub fn halfplane(z: Complex64) -> Option<Self> {
        Self::new(DomainKind::Halfplane, vec![z])
    }

    /// The single coordinate of a one-dimensional point.
    pub fn scalar(&self) -> Complex64 {
        debug_assert_eq!(self.coords.len(), 1);
        self.coords[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_is_strict() {
        assert!(DomainPoint::disc(Complex64::new(0.999, 0.0)).is_some());
        assert!(DomainPoint::disc(Complex64::new(1.0, 0.0)).is_none());
        assert!(DomainPoint::halfplane(Complex64::new(5.0, 1e-12)).is_some());
        assert!(DomainPoint::halfplane(Complex64::new(0.0, 0.0)).is_none());
    }

    #[test]
    fn product_membership_checks_every_axis() {
        let ok = DomainPoint::new(
            DomainKind::Polydisc(2),
            vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, -0.9)],
        );
        assert!(ok.is_some());
        let bad = DomainPoint::new(
            DomainKind::Polydisc(2),
            vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, -1.1)],
        );
        assert!(bad.is_none());
        let wrong_arity = DomainPoint::new(DomainKind::Tube(2), vec![Complex64::new(0.0, 1.0)]);
        assert!(wrong_arity.is_none());
    }
}
