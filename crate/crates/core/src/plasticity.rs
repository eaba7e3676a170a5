//! Ray-stretch invariance of the floating solution.
//!
//! Moving any vertex `Aᵢ` along the ray from the solution `A0` through `Aᵢ`
//! leaves every unit vector `u(A0, Aᵢ)` unchanged, so `A0` stays in
//! equilibrium and remains the minimizer of the stretched tetrahedron.
//!
//! For a stretched fourth vertex `A4′` the distance `a04′` is predicted from
//! lengths and angles around the edge `A1A2` by a three-dimensional cosine
//! law: place `A2` at the origin with `A1` on the first axis, then `A0` sits
//! at `(√(a02² − h²), h·cos α, h·sin α)` and `A4′` at
//! `a24′·(cos α124′, sin α124′·cos α_g, sin α124′·sin α_g)`, where `h` is the
//! distance from `A0` to the line `A1A2`, `α` the dihedral angle of `A0`
//! measured from the half-plane of `A3`, and `α_g` that of `A4′`. The
//! placement assumes the foot of `A0` on `A1A2` lies on the `A1` side of
//! `A2`, which holds whenever `∠A0A2A1` is acute.

use crate::analytic::solve_symmetric;
use crate::equilibrium::classify;
use crate::error::{Error, Result};
use crate::geom::{angle_at, dihedral_angle, Case, FtSolution, Point3, SymmetricInstance, WeightedTetrahedron};
use crate::numeric::{weiszfeld, SolverConfig};

/// Slack allowed on arccos arguments and radicands before they are rejected.
pub const DOMAIN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasticityInstance {
    pub base: WeightedTetrahedron,
    /// Floating solution of `base`.
    pub a0: Point3,
    /// `Aᵢ′ = A0 + λᵢ·(Aᵢ − A0)`.
    pub lambdas: [f64; 4],
}

impl PlasticityInstance {
    pub fn new(base: WeightedTetrahedron, a0: Point3, lambdas: [f64; 4]) -> Result<Self> {
        if let Some(&l) = lambdas.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::InvalidInput(format!("stretch factors must be positive, got {l}")));
        }
        Ok(PlasticityInstance { base, a0, lambdas })
    }

    /// Stretch of the regular two-pair instance around its closed-form solution.
    pub fn from_symmetric(inst: &SymmetricInstance, lambdas: [f64; 4]) -> Result<Self> {
        let sol = solve_symmetric(inst)?;
        if let Case::Absorbed(vertex) = sol.case {
            return Err(Error::FloatingViolated { vertex });
        }
        PlasticityInstance::new(inst.tetrahedron(), sol.point, lambdas)
    }

    pub fn stretched_vertices(&self) -> [Point3; 4] {
        std::array::from_fn(|i| self.a0 + (self.base.vertex(i) - self.a0) * self.lambdas[i])
    }
}

/// Lengths and angles around the edge `A1A2` of the tetrahedron
/// `A1A2A3A4′` as seen from `A0`. Angles `α_ikj` are at the middle vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DihedralData {
    pub a01: f64,
    pub a02: f64,
    pub a03: f64,
    pub a23: f64,
    pub a12: f64,
    pub a24p: f64,
    pub alpha_123: f64,
    pub alpha_124p: f64,
    /// Dihedral angle between the planes `A3A1A2` and `A4′A1A2`.
    pub alpha_g4p: f64,
}

impl DihedralData {
    /// Measures everything from coordinates: `vertices` are `A1, A2, A3, A4′`.
    pub fn measure(vertices: &[Point3; 4], a0: Point3) -> Self {
        let [p1, p2, p3, p4] = *vertices;
        DihedralData {
            a01: a0.distance(p1),
            a02: a0.distance(p2),
            a03: a0.distance(p3),
            a23: p2.distance(p3),
            a12: p1.distance(p2),
            a24p: p2.distance(p4),
            alpha_123: angle_at(p2, p1, p3),
            alpha_124p: angle_at(p2, p1, p4),
            alpha_g4p: dihedral_angle(p2, p1, p3, p4),
        }
    }
}

/// Height of the triangle `A0A1A2` over the side `A1A2`.
pub fn height_012(a01: f64, a02: f64, a12: f64) -> Result<f64> {
    if !(a01 > 0.0 && a02 > 0.0 && a12 > 0.0) {
        return Err(Error::DegenerateTriangle);
    }
    let (s01, s02, s12) = (a01 * a01, a02 * a02, a12 * a12);
    let radicand = 4.0 * s01 * s02 - (s01 + s02 - s12).powi(2);
    if radicand < -DOMAIN_SLACK * 4.0 * s01 * s02 {
        return Err(Error::DegenerateTriangle);
    }
    Ok((radicand.max(0.0) / (4.0 * s12)).sqrt())
}

fn clamped_acos(arg: f64, what: &'static str) -> Result<f64> {
    if !(arg.abs() <= 1.0 + DOMAIN_SLACK) {
        return Err(Error::OutOfDomain(what));
    }
    Ok(arg.clamp(-1.0, 1.0).acos())
}

/// Dihedral angle between the planes `A0A1A2` and `A3A1A2`.
pub fn dihedral_alpha(d: &DihedralData, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::OutOfDomain("height h must be positive"));
    }
    let sin123 = d.alpha_123.sin();
    if sin123 == 0.0 {
        return Err(Error::OutOfDomain("A1, A2, A3 are collinear"));
    }
    let foot = (d.a02 * d.a02 - h * h).max(0.0).sqrt();
    let projection = (d.a02 * d.a02 + d.a23 * d.a23 - d.a03 * d.a03) / (2.0 * d.a23);
    clamped_acos((projection - foot * d.alpha_123.cos()) / (h * sin123), "dihedral arccos argument")
}

/// Distance from `A0` to `A4′` by the three-dimensional cosine law.
pub fn predict_a04p(d: &DihedralData, h: f64, alpha: f64) -> Result<f64> {
    let s02 = d.a02 * d.a02;
    if h * h > s02 * (1.0 + DOMAIN_SLACK) {
        return Err(Error::OutOfDomain("height exceeds a02"));
    }
    let foot = (s02 - h * h).max(0.0).sqrt();
    let inner = foot * d.alpha_124p.cos() + h * d.alpha_124p.sin() * (d.alpha_g4p - alpha).cos();
    let radicand = s02 + d.a24p * d.a24p - 2.0 * d.a24p * inner;
    if radicand < -DOMAIN_SLACK * (s02 + d.a24p * d.a24p) {
        return Err(Error::OutOfDomain("negative radicand for a04'"));
    }
    Ok(radicand.max(0.0).sqrt())
}

/// The stretched tetrahedron, with the base weights. Fails if it is
/// degenerate or no longer in the floating case.
pub fn stretch(p: &PlasticityInstance) -> Result<WeightedTetrahedron> {
    let t = WeightedTetrahedron::new(p.stretched_vertices(), *p.base.weights())?;
    match classify(&t)?.case {
        Case::Floating => Ok(t),
        Case::Absorbed(vertex) => Err(Error::FloatingViolated { vertex }),
    }
}

/// `a04′` predicted from the measured geometry of a stretched tetrahedron.
pub fn predicted_a04p(stretched: &WeightedTetrahedron, a0: Point3) -> Result<f64> {
    let d = DihedralData::measure(stretched.vertices(), a0);
    let h = height_012(d.a01, d.a02, d.a12)?;
    let alpha = dihedral_alpha(&d, h)?;
    predict_a04p(&d, h, alpha)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceReport {
    pub stretched: WeightedTetrahedron,
    pub solution: FtSolution,
    /// `‖A0′ − A0‖`.
    pub displacement: f64,
    pub predicted_a04p: f64,
    pub measured_a04p: f64,
}

/// Solves the stretched tetrahedron from scratch and measures how far its
/// solution moved.
pub fn verify_invariance(p: &PlasticityInstance, cfg: &SolverConfig) -> Result<InvarianceReport> {
    let stretched = stretch(p)?;
    let solution = weiszfeld(&stretched, cfg)?;
    Ok(InvarianceReport {
        stretched,
        solution,
        displacement: solution.point.distance(p.a0),
        predicted_a04p: predicted_a04p(&stretched, p.a0)?,
        measured_a04p: p.a0.distance(stretched.vertex(3)),
    })
}
