//! Floating/absorbed classification and the floating equilibrium residual.
//!
//! At vertex `Aᵢ` the pull of the other three weights is
//! `‖Σ_{j≠i} Bⱼ u(Aᵢ, Aⱼ)‖`. If that pull exceeds `Bᵢ` at every vertex the
//! minimizer floats strictly inside; otherwise it sits on the one vertex
//! whose own weight wins.

use crate::error::{Error, Result};
use crate::geom::{unit_vector, Case, Point3, WeightedTetrahedron};

/// Relative distance to a vertex below which the residual is undefined.
pub const VERTEX_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseLabel {
    pub case: Case,
    /// `‖Σ_{j≠i} Bⱼ u(Aᵢ,Aⱼ)‖ − Bᵢ` for each vertex.
    pub margins: [f64; 4],
}

impl CaseLabel {
    pub fn is_floating(&self) -> bool {
        self.case == Case::Floating
    }
}

/// Net pull of the other weights at vertex `i`.
pub fn vertex_pull(t: &WeightedTetrahedron, i: usize) -> Result<Point3> {
    let apex = t.vertex(i);
    let mut acc = Point3::ORIGIN;
    for j in (0..4).filter(|&j| j != i) {
        acc += unit_vector(apex, t.vertex(j))? * t.weight(j);
    }
    Ok(acc)
}

pub fn classify(t: &WeightedTetrahedron) -> Result<CaseLabel> {
    let mut margins = [0.0; 4];
    for (i, m) in margins.iter_mut().enumerate() {
        *m = vertex_pull(t, i)?.norm() - t.weight(i);
    }
    // Ties go to the absorbed side. With positive weights at most one margin
    // can be non-positive; if roundoff produced two, take the most negative.
    let case = margins
        .iter()
        .enumerate()
        .filter(|(_, m)| **m <= 0.0)
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map_or(Case::Floating, |(i, _)| Case::Absorbed(i));
    Ok(CaseLabel { case, margins })
}

/// The weighted unit-vector sum `Σ Bᵢ u(x, Aᵢ)`.
pub fn equilibrium_vector(t: &WeightedTetrahedron, x: Point3) -> Result<Point3> {
    let tol = VERTEX_REL_TOL * t.scale();
    let mut acc = Point3::ORIGIN;
    for (p, w) in t.weighted_points() {
        let separation = x.distance(p);
        if separation <= tol {
            return Err(Error::CoincidentPoints { separation });
        }
        acc += (p - x) * (w / separation);
    }
    Ok(acc)
}

pub fn equilibrium_residual(t: &WeightedTetrahedron, x: Point3) -> Result<f64> {
    equilibrium_vector(t, x).map(Point3::norm)
}
