//! Angles subtended at an axial point by the edges of the regular tetrahedron.
//!
//! All three follow from the cosine law in the triangles `A1A0A2`, `A3A0A4`
//! and `A1A0A4`. For the cross angle the two squared offsets in the
//! numerator are `(c − y)²` and `(c + y)²`: one from each of the two
//! distances `a01` and `a04`. Writing `(c − y)²` twice, as it is sometimes
//! printed, is only correct at `y = 0`.

use crate::geom::{axial_distances, half_axis};

/// `arccos(−1/3)`, the angle between any two vertex rays from the center of
/// a regular tetrahedron.
pub const CENTRAL_ANGLE: f64 = 1.910_633_236_249_018_5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSet {
    /// `∠A1A0A2`
    pub alpha_102: f64,
    /// `∠A3A0A4`
    pub alpha_304: f64,
    /// `∠A1A0A4 = ∠A2A0A3 = ∠A1A0A3 = ∠A2A0A4`
    pub alpha_cross: f64,
}

impl AngleSet {
    /// All six vertex-pair angles in the order 12, 34, 14, 23, 13, 24.
    pub fn all_six(&self) -> [f64; 6] {
        let x = self.alpha_cross;
        [self.alpha_102, self.alpha_304, x, x, x, x]
    }
}

fn safe_acos(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}

pub fn angles_at(a: f64, y: f64) -> AngleSet {
    let c = half_axis(a);
    let (a01, a04) = axial_distances(a, y);
    let a2 = a * a;
    AngleSet {
        alpha_102: safe_acos(1.0 - a2 / (2.0 * a01 * a01)),
        alpha_304: safe_acos(1.0 - a2 / (2.0 * a04 * a04)),
        alpha_cross: safe_acos(((c - y).powi(2) + (c + y).powi(2) - a2 / 2.0) / (2.0 * a01 * a04)),
    }
}
