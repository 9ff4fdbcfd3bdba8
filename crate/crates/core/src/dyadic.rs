//! Dyadic grids D^β on ℝ, Carleson boxes over intervals (half-plane) and
//! arcs (disc), tent tops, and the shifted-grid cover search.
//!
//! The two grids are
//!   D^β = { 2^j([0,1) + m + (−1)^j β) : j, m ∈ ℤ },   β ∈ {0, 1/3},
//! and every interval I ⊂ ℝ is contained in some J ∈ D^0 ∪ D^{1/3} with
//! |J| ≤ 6|I| (the one-third trick). Intervals are half-open [a, b)
//! throughout so that tilings are exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::point::{DomainKind, DomainPoint};

#[derive(Debug, Error, PartialEq)]
pub enum DyadicError {
    /// The shifted-grid cover search exhausted its window. Treated as a
    /// defect: the one-third trick guarantees a cover within the window.
    #[error("no dyadic cover found for interval [{left}, {right}) within the search window")]
    NoCover { left: f64, right: f64 },
}

/// Grid shift β ∈ {0, 1/3}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridShift {
    Zero,
    OneThird,
}

impl GridShift {
    pub const BOTH: [GridShift; 2] = [GridShift::Zero, GridShift::OneThird];

    pub fn value(self) -> f64 {
        match self {
            GridShift::Zero => 0.0,
            GridShift::OneThird => 1.0 / 3.0,
        }
    }
}

/// An interval of the shifted dyadic grid D^β: realized as
/// 2^j([0,1) + m + (−1)^j β), of length exactly 2^j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub beta: GridShift,
    /// Level: the interval has length 2^j.
    pub j: i32,
    /// Translation index.
    pub m: i64,
}

impl DyadicInterval {
    /// Length 2^j.
    pub fn len(&self) -> f64 {
        (self.j as f64).exp2()
    }

    /// 3·(m + (−1)^j β) as an exact integer, so endpoints across levels
    /// round identically (the only inexact step is a single division by 3).
    fn thirds_numerator(&self) -> i64 {
        let shift = match self.beta {
            GridShift::Zero => 0,
            GridShift::OneThird => 1,
        };
        let sign = if self.j % 2 == 0 { 1 } else { -1 };
        3 * self.m + sign * shift
    }

    /// Left endpoint of the realized interval.
    pub fn left(&self) -> f64 {
        self.len() * (self.thirds_numerator() as f64) / 3.0
    }

    pub fn right(&self) -> f64 {
        self.len() * ((self.thirds_numerator() + 3) as f64) / 3.0
    }

    pub fn interval(&self) -> Interval {
        Interval {
            left: self.left(),
            length: self.len(),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.left() && x < self.right()
    }

    /// Exact-endpoint containment of a plain interval (the thirds
    /// arithmetic keeps shared endpoints bit-identical across levels).
    pub fn covers(&self, other: &Interval) -> bool {
        self.left() <= other.left && other.right() <= self.right()
    }

    /// Exact-endpoint containment of another grid interval.
    pub fn covers_dyadic(&self, other: &DyadicInterval) -> bool {
        self.left() <= other.left() && other.right() <= self.right()
    }

    /// The parent interval one level up (same grid).
    pub fn parent(&self) -> DyadicInterval {
        grid_member(self.beta, self.j + 1, self.left() + 0.5 * self.len())
    }
}

/// A plain half-open interval [left, left + length).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub left: f64,
    pub length: f64,
}

impl Interval {
    pub fn new(left: f64, length: f64) -> Self {
        assert!(length > 0.0, "interval length must be positive");
        Interval { left, length }
    }

    pub fn right(&self) -> f64 {
        self.left + self.length
    }

    pub fn center(&self) -> f64 {
        self.left + 0.5 * self.length
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.left <= other.left && other.right() <= self.right()
    }
}

/// The unique interval of D^β at level `j` containing `x`.
pub fn grid_member(beta: GridShift, j: i32, x: f64) -> DyadicInterval {
    let len = (j as f64).exp2();
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    let m = (x / len - sign * beta.value()).floor() as i64;
    let candidate = DyadicInterval { beta, j, m };
    // Guard against floor() landing one off at panel edges.
    if candidate.contains(x) {
        candidate
    } else if x < candidate.left() {
        DyadicInterval { beta, j, m: m - 1 }
    } else {
        DyadicInterval { beta, j, m: m + 1 }
    }
}

/// A dyadic interval J ⊇ I with |J| ≤ 6|I|, from one of the two shifted
/// grids. The search scans levels ceil(log2 |I|) .. +3 in both grids and
/// returns the smallest cover found.
pub fn dominating_dyadic(interval: &Interval) -> Result<(GridShift, DyadicInterval), DyadicError> {
    let base = interval.length.log2().ceil() as i32;
    for j in base..=base + 3 {
        for beta in GridShift::BOTH {
            let candidate = grid_member(beta, j, interval.left);
            if candidate.covers(interval) && candidate.len() <= 6.0 * interval.length {
                return Ok((beta, candidate));
            }
        }
    }
    Err(DyadicError::NoCover {
        left: interval.left,
        right: interval.right(),
    })
}

/// A Carleson box: over an interval of ℝ for the half-plane, over an arc of
/// the unit circle for the disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "domain", rename_all = "lowercase")]
pub enum CarlesonBox {
    /// {x + iy : x ∈ I, 0 < y < |I|}.
    Halfplane { interval: Interval },
    /// {re^{iθ} : 1 − |I| < r < 1, θ within the arc}, arc length ≤ 1.
    Disc { center_angle: f64, arc_length: f64 },
}

impl CarlesonBox {
    pub fn over_interval(interval: Interval) -> Self {
        CarlesonBox::Halfplane { interval }
    }

    pub fn over_arc(center_angle: f64, arc_length: f64) -> Self {
        assert!(
            arc_length > 0.0 && arc_length <= 1.0,
            "disc boxes require arc length in (0, 1]"
        );
        CarlesonBox::Disc {
            center_angle,
            arc_length,
        }
    }

    /// |I|: interval length or arc length.
    pub fn base_length(&self) -> f64 {
        match self {
            CarlesonBox::Halfplane { interval } => interval.length,
            CarlesonBox::Disc { arc_length, .. } => *arc_length,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            CarlesonBox::Halfplane { interval } => {
                z.re >= interval.left
                    && z.re < interval.right()
                    && z.im > 0.0
                    && z.im < interval.length
            }
            CarlesonBox::Disc {
                center_angle,
                arc_length,
            } => {
                let r = z.norm();
                if r <= 1.0 - arc_length || r >= 1.0 {
                    return false;
                }
                let mut d = (z.arg() - center_angle).rem_euclid(2.0 * std::f64::consts::PI);
                if d > std::f64::consts::PI {
                    d -= 2.0 * std::f64::consts::PI;
                }
                d.abs() < 0.5 * arc_length
            }
        }
    }
}

/// Box over an interval (half-plane convention).
pub fn box_of(interval: Interval) -> CarlesonBox {
    CarlesonBox::over_interval(interval)
}

/// The center of a box: x_I + i|I|/2 on the half-plane, (1 − |I|/2)e^{iθ_I}
/// on the disc.
pub fn center_of(q: &CarlesonBox) -> DomainPoint {
    match q {
        CarlesonBox::Halfplane { interval } => DomainPoint::new(
            DomainKind::Halfplane,
            vec![Complex64::new(interval.center(), 0.5 * interval.length)],
        )
        .expect("box center is interior"),
        CarlesonBox::Disc {
            center_angle,
            arc_length,
        } => {
            let r = 1.0 - 0.5 * arc_length;
            DomainPoint::new(
                DomainKind::Disc,
                vec![Complex64::from_polar(r, *center_angle)],
            )
            .expect("box center is interior")
        }
    }
}

/// The top half of a half-plane Carleson box: {x + iy : x ∈ I, |I|/2 < y < |I|}.
/// Over a single dyadic grid the tops tile the half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TentTop {
    pub interval: Interval,
}

impl TentTop {
    pub fn y_range(&self) -> (f64, f64) {
        (0.5 * self.interval.length, self.interval.length)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let (lo, hi) = self.y_range();
        z.re >= self.interval.left && z.re < self.interval.right() && z.im > lo && z.im < hi
    }

    /// Closure membership, used in coverage checks.
    pub fn closure_contains(&self, z: Complex64) -> bool {
        let (lo, hi) = self.y_range();
        z.re >= self.interval.left && z.re <= self.interval.right() && z.im >= lo && z.im <= hi
    }
}

pub fn top_of(q: &CarlesonBox) -> TentTop {
    match q {
        CarlesonBox::Halfplane { interval } => TentTop {
            interval: *interval,
        },
        CarlesonBox::Disc { .. } => panic!("tent tops are defined for half-plane boxes"),
    }
}

/// Spatial window used by finite enumerations: x ∈ [x_lo, x_hi], y ∈ (y_lo, y_hi).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Window {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Self {
        assert!(x_lo < x_hi && 0.0 < y_lo && y_lo < y_hi);
        Window {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        }
    }
}

/// Enumerates the tops of grid `beta` whose tents meet the window, for all
/// levels whose height band intersects (y_lo, y_hi).
pub fn tops_in_window(beta: GridShift, window: &Window) -> Vec<TentTop> {
    let j_lo = (2.0 * window.y_lo).log2().floor() as i32;
    let j_hi = (2.0 * window.y_hi).log2().ceil() as i32;
    let mut tops = Vec::new();
    for j in j_lo..=j_hi {
        let first = grid_member(beta, j, window.x_lo);
        let mut m = first.m;
        loop {
            let iv = DyadicInterval { beta, j, m };
            if iv.left() > window.x_hi {
                break;
            }
            tops.push(TentTop {
                interval: iv.interval(),
            });
            m += 1;
        }
    }
    tops
}

/// True iff the tops of grid `beta` within the window are pairwise disjoint
/// and their closures cover the window region. Coverage is checked on a
/// deterministic sample lattice.
pub fn tiling_check(beta: GridShift, window: &Window) -> bool {
    let tops = tops_in_window(beta, window);
    // Pairwise disjointness of the open tops, by rectangle arithmetic.
    // Overlaps are measured, not boolean: shared edges re-rounded through
    // left+length may differ by an ulp, so only overlaps of positive
    // relative measure count.
    for (i, a) in tops.iter().enumerate() {
        let (alo, ahi) = a.y_range();
        for b in tops.iter().skip(i + 1) {
            let (blo, bhi) = b.y_range();
            let scale = a.interval.length.min(b.interval.length);
            let x_overlap = (a.interval.right().min(b.interval.right())
                - a.interval.left.max(b.interval.left))
                > 1e-9 * scale;
            let y_overlap = (ahi.min(bhi) - alo.max(blo)) > 1e-9 * scale;
            if x_overlap && y_overlap {
                return false;
            }
        }
    }
    // Coverage of a deterministic lattice of interior sample points.
    let nx = 64;
    let ny = 64;
    for ix in 0..nx {
        let x = window.x_lo + (window.x_hi - window.x_lo) * (ix as f64 + 0.5) / nx as f64;
        for iy in 0..ny {
            // Geometric spacing in y so all height bands get probed.
            let t = (iy as f64 + 0.5) / ny as f64;
            let y = window.y_lo * (window.y_hi / window.y_lo).powf(t);
            let z = Complex64::new(x, y);
            if !tops.iter().any(|top| top.closure_contains(z)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grid_member_base_cases() {
        let iv = grid_member(GridShift::Zero, 0, 0.4);
        assert_eq!(iv.m, 0);
        assert_eq!(iv.left(), 0.0);
        assert_eq!(iv.len(), 1.0);

        // Shifted grid at level 0: [−2/3, 1/3) contains 0 with m = −1.
        let iv = grid_member(GridShift::OneThird, 0, 0.0);
        assert_eq!(iv.m, -1);
        assert!((iv.left() - (-2.0 / 3.0)).abs() < 1e-15);

        // Level 1 flips the shift sign: 2([0,1) + m − 1/3) ∋ 0 gives [−2/3, 4/3).
        let iv = grid_member(GridShift::OneThird, 1, 0.0);
        assert_eq!(iv.m, 0);
        assert!((iv.left() - (-2.0 / 3.0)).abs() < 1e-15);
        assert!((iv.right() - (4.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn dominating_dyadic_examples() {
        // An interval that is already dyadic is its own cover.
        let (beta, j) = dominating_dyadic(&Interval::new(0.0, 1.0)).unwrap();
        assert_eq!(beta, GridShift::Zero);
        assert_eq!(j.interval(), Interval::new(0.0, 1.0));

        let iv = Interval::new(-0.1, 0.2);
        let (_, j) = dominating_dyadic(&iv).unwrap();
        assert!(j.interval().contains_interval(&iv));
        assert!(j.len() <= 6.0 * iv.length);

        // Straddles the integer lattice; the shifted grid must provide the cover.
        let iv = Interval::new(0.9, 0.2);
        let (beta, j) = dominating_dyadic(&iv).unwrap();
        assert_eq!(beta, GridShift::OneThird);
        assert!(j.interval().contains_interval(&iv));
        assert!(j.len() <= 6.0 * iv.length);
    }

    #[test]
    fn box_geometry() {
        let q = box_of(Interval::new(0.0, 1.0));
        let c = center_of(&q).scalar();
        assert_eq!(c, Complex64::new(0.5, 0.5));
        let top = top_of(&q);
        assert_eq!(top.y_range(), (0.5, 1.0));
        assert!(top.contains(Complex64::new(0.2, 0.75)));
        assert!(!top.contains(Complex64::new(0.2, 0.25)));

        let disc_box = CarlesonBox::over_arc(0.0, 1.0);
        assert!(disc_box.contains(Complex64::new(0.5, 0.0)));
        assert!(!disc_box.contains(Complex64::new(-0.5, 0.0)));
    }

    #[test]
    fn tents_tile_a_window() {
        let window = Window::new(0.0, 1.0, 0.25, 4.0);
        assert!(tiling_check(GridShift::Zero, &window));
        assert!(tiling_check(GridShift::OneThird, &window));
    }

    #[test]
    fn sibling_and_parent_tops_are_disjoint() {
        let a = TentTop {
            interval: Interval::new(0.0, 1.0),
        };
        let sibling = TentTop {
            interval: Interval::new(1.0, 1.0),
        };
        let parent = TentTop {
            interval: Interval::new(0.0, 2.0),
        };
        for z in [
            Complex64::new(0.5, 0.75),
            Complex64::new(1.5, 0.75),
            Complex64::new(0.5, 1.5),
        ] {
            let hits = [a, sibling, parent]
                .iter()
                .filter(|t| t.contains(z))
                .count();
            assert_eq!(hits, 1);
        }
    }

    proptest! {
        #[test]
        fn grid_member_contains_and_has_exact_length(
            beta_idx in 0..2usize,
            j in -18i32..18,
            x in -1e5f64..1e5,
        ) {
            let beta = GridShift::BOTH[beta_idx];
            let iv = grid_member(beta, j, x);
            prop_assert!(iv.contains(x));
            prop_assert_eq!(iv.len(), (j as f64).exp2());
        }

        #[test]
        fn grids_are_nested(
            beta_idx in 0..2usize,
            j in -16i32..16,
            x in -1e4f64..1e4,
        ) {
            let beta = GridShift::BOTH[beta_idx];
            let child = grid_member(beta, j, x);
            let parent = grid_member(beta, j + 1, x);
            prop_assert!(parent.covers_dyadic(&child));
        }

        #[test]
        fn one_third_trick_cover(
            left in -1e3f64..1e3,
            log_len in -3f64..3.0,
        ) {
            let iv = Interval::new(left, 10f64.powf(log_len));
            let (_, j) = dominating_dyadic(&iv).unwrap();
            prop_assert!(j.interval().contains_interval(&iv));
            prop_assert!(j.len() <= 6.0 * iv.length);
        }
    }
}

