//! Numerical solvers that check the closed forms independently.
//!
//! None of these touch the quartic: the 3-D solver iterates on the
//! objective directly, and the two axial solvers work on the unsquared
//! reduced objective and its derivative.

use std::cmp::Ordering;

use crate::analytic::stationarity_defect;
use crate::equilibrium::{classify, equilibrium_residual};
use crate::error::{Error, Result};
use crate::geom::{axial_distances, Case, FtSolution, Point3, SymmetricInstance, WeightedTetrahedron};

/// Equilibrium residual accepted from the 3-D solver, relative to `ΣBᵢ`.
pub const RESIDUAL_REL_TOL: f64 = 1e-6;

/// Tolerances are relative to the longest edge of the tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Stop once a step is shorter than `tol · scale`.
    pub tol: f64,
    pub max_iter: usize,
    /// Iterates closer than `vertex_epsilon · scale` to a vertex are pushed away.
    pub vertex_epsilon: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tol: 1e-12, max_iter: 10_000, vertex_epsilon: 1e-10 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) || self.max_iter == 0 || !(self.vertex_epsilon > 0.0) {
            return Err(Error::InvalidInput("solver tolerances must be positive and max_iter ≥ 1".into()));
        }
        Ok(())
    }
}

pub fn weiszfeld(t: &WeightedTetrahedron, cfg: &SolverConfig) -> Result<FtSolution> {
    weiszfeld_observed(t, cfg, t.weighted_centroid(), |_, _| {})
}

pub fn weiszfeld_from(t: &WeightedTetrahedron, cfg: &SolverConfig, start: Point3) -> Result<FtSolution> {
    weiszfeld_observed(t, cfg, start, |_, _| {})
}

/// Weiszfeld iteration from `start`; `observe` sees every iterate and its
/// objective value.
///
/// Absorbed instances return their vertex without iterating.
pub fn weiszfeld_observed<F>(
    t: &WeightedTetrahedron,
    cfg: &SolverConfig,
    start: Point3,
    mut observe: F,
) -> Result<FtSolution>
where
    F: FnMut(Point3, f64),
{
    cfg.validate()?;
    let label = classify(t)?;
    if let Case::Absorbed(i) = label.case {
        let point = t.vertex(i);
        return Ok(FtSolution { case: label.case, point, y: None, objective: t.objective(point), residual: 0.0 });
    }

    let scale = t.scale();
    let step_tol = cfg.tol * scale;
    let push = 10.0 * cfg.vertex_epsilon * scale;
    let mut x = start;
    let mut direction = Point3::ORIGIN;
    observe(x, t.objective(x));

    let mut iterations = 0;
    while iterations < cfg.max_iter {
        iterations += 1;
        if let Some(p) = t.vertices().iter().find(|p| x.distance(**p) < cfg.vertex_epsilon * scale) {
            // Back off along the last step so the update below is defined.
            let back = if direction.norm() > 0.0 {
                -direction
            } else {
                let toward = t.weighted_centroid() - *p;
                toward / toward.norm()
            };
            x += back * push;
            continue;
        }
        let mut num = Point3::ORIGIN;
        let mut den = 0.0;
        for (p, w) in t.weighted_points() {
            let k = w / x.distance(p);
            num += p * k;
            den += k;
        }
        let next = num / den;
        let step = next - x;
        x = next;
        observe(x, t.objective(x));
        let heading = step.norm();
        if heading <= step_tol {
            break;
        }
        direction = step / heading;
    }

    let residual = equilibrium_residual(t, x)?;
    if residual >= RESIDUAL_REL_TOL * t.total_weight() {
        return Err(Error::NoConvergence { iterations, residual });
    }
    Ok(FtSolution { case: Case::Floating, point: x, y: None, objective: t.objective(x), residual })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSign {
    Positive,
    Negative,
}

impl PairSign {
    fn factor(self) -> f64 {
        match self {
            PairSign::Positive => 1.0,
            PairSign::Negative => -1.0,
        }
    }
}

/// Half the objective on the axis, `b1·a01(y) ± b4·a04(y)`.
pub fn reduced_objective(inst: &SymmetricInstance, y: f64, sign4: PairSign) -> f64 {
    let (a01, a04) = axial_distances(inst.a, y);
    inst.b1 * a01 + sign4.factor() * inst.b4 * a04
}

/// Golden-section search on `[lo, hi]` driven by a comparison of function
/// values rather than the values themselves, so callers can supply a
/// comparison that stays exact where the values agree to many digits.
pub fn golden_section_by<C>(mut lo: f64, mut hi: f64, width: f64, mut cmp: C) -> f64
where
    C: FnMut(f64, f64) -> Ordering,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    while hi - lo > width {
        if cmp(x1, x2) == Ordering::Less {
            hi = x2;
            x2 = x1;
            x1 = hi - inv_phi * (hi - lo);
        } else {
            lo = x1;
            x1 = x2;
            x2 = lo + inv_phi * (hi - lo);
        }
        if !(x1 > lo && x2 < hi) {
            break;
        }
    }
    0.5 * (lo + hi)
}

pub fn golden_section<F>(lo: f64, hi: f64, width: f64, mut f: F) -> f64
where
    F: FnMut(f64) -> f64,
{
    golden_section_by(lo, hi, width, |p, q| f(p).total_cmp(&f(q)))
}

/// Sign of `f(y1) − f(y2)` for the positive reduced objective, computed
/// from differences of squares so it stays exact near the minimum.
fn compare_reduced(inst: &SymmetricInstance, y1: f64, y2: f64) -> Ordering {
    let c = inst.half_axis();
    let (p1, q1) = axial_distances(inst.a, y1);
    let (p2, q2) = axial_distances(inst.a, y2);
    let slope = -inst.b1 * (2.0 * c - y1 - y2) / (p1 + p2) + inst.b4 * (2.0 * c + y1 + y2) / (q1 + q2);
    ((y1 - y2) * slope).total_cmp(&0.0)
}

/// Minimizer of the reduced objective on `[−c, c]` by golden-section search.
pub fn minimize_reduced(inst: &SymmetricInstance) -> f64 {
    let c = inst.half_axis();
    golden_section_by(-c, c, 1e-12 * inst.a, |p, q| compare_reduced(inst, p, q))
}

/// The exterior critical point of `b1·a01 − b4·a04` (for `b1 > b4`), by
/// bisection on `b1(y − c)/a01 − b4(y + c)/a04` over `y > c`.
pub fn signed_critical_point(inst: &SymmetricInstance) -> Result<f64> {
    let SymmetricInstance { a, b1, b4 } = *inst;
    let c = inst.half_axis();
    let defect = |y: f64| stationarity_defect(a, b1, -b4, y);
    let limit = 1e6 * a;

    let mut lo = c * (1.0 + 1e-9);
    if defect(lo) >= 0.0 {
        return Err(Error::NoBracket { limit });
    }
    let mut hi = 2.0 * c;
    while defect(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > limit {
            return Err(Error::NoBracket { limit });
        }
    }
    while hi - lo > 1e-12 * a.max(hi) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if defect(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::embed_regular;
    use approx::assert_abs_diff_eq;

    fn regular(weights: [f64; 4]) -> WeightedTetrahedron {
        WeightedTetrahedron::new(embed_regular(1.0).unwrap().vertices, weights).unwrap()
    }

    fn inst(a: f64, b1: f64, b4: f64) -> SymmetricInstance {
        SymmetricInstance::new(a, b1, b4).unwrap()
    }

    #[test]
    fn weiszfeld_equal_weights_finds_center() {
        let sol = weiszfeld(&regular([1.0; 4]), &SolverConfig::default()).unwrap();
        assert!(sol.point.norm() < 1e-9);
    }

    #[test]
    fn weiszfeld_worked_example() {
        let cfg = SolverConfig::default();
        let sol = weiszfeld(&regular([2.5, 2.5, 1.0, 1.0]), &cfg).unwrap();
        let target = embed_regular(1.0).unwrap().axis_point(0.198358);
        assert!(sol.point.distance(target) < 1e-6);
        assert_eq!(sol.case, Case::Floating);
    }

    #[test]
    fn weiszfeld_absorbed_short_circuit() {
        let t = regular([1.0, 1.0, 1.0, 3.0]);
        let mut calls = 0;
        let sol = weiszfeld_observed(&t, &SolverConfig::default(), t.weighted_centroid(), |_, _| calls += 1).unwrap();
        assert_eq!(sol.case, Case::Absorbed(3));
        assert_eq!(sol.point, t.vertex(3));
        assert_eq!(calls, 0);
    }

    #[test]
    fn weiszfeld_descends() {
        let t = regular([2.0, 1.5, 1.0, 0.7]);
        let mut values = Vec::new();
        weiszfeld_observed(&t, &SolverConfig::default(), t.vertex(0) * 0.9, |_, f| values.push(f)).unwrap();
        assert!(values.len() > 2);
        for w in values.windows(2) {
            assert!(w[1] <= w[0] + 1e-14 * w[0]);
        }
    }

    #[test]
    fn weiszfeld_reports_no_convergence() {
        let cfg = SolverConfig { max_iter: 2, ..SolverConfig::default() };
        let t = regular([2.5, 2.5, 1.0, 1.0]);
        assert!(matches!(weiszfeld_from(&t, &cfg, t.vertex(2) * 0.99), Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn reduced_objective_examples() {
        let i = inst(1.0, 2.5, 1.0);
        assert_abs_diff_eq!(reduced_objective(&i, 0.198358, PairSign::Positive), 2.053549, epsilon = 1e-5);
        let eq = inst(1.0, 1.0, 1.0);
        assert_abs_diff_eq!(reduced_objective(&eq, 0.0, PairSign::Positive), 2.0 * 0.375f64.sqrt(), epsilon = 1e-15);
        // Central difference of the signed objective at the exterior root.
        let h = 1e-6;
        let d = (reduced_objective(&i, 0.539791 + h, PairSign::Negative)
            - reduced_objective(&i, 0.539791 - h, PairSign::Negative))
            / (2.0 * h);
        assert!(d.abs() < 1e-5);
    }

    #[test]
    fn minimize_reduced_examples() {
        assert_abs_diff_eq!(minimize_reduced(&inst(1.0, 2.5, 1.0)), 0.198358, epsilon = 1e-6);
        assert_abs_diff_eq!(minimize_reduced(&inst(1.0, 1.0, 1.0)), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(minimize_reduced(&inst(1.0, 1.0, 2.5)), -0.198358, epsilon = 1e-6);
    }

    #[test]
    fn reduced_objective_is_convex_on_a_grid() {
        let i = inst(1.3, 7.0, 1.0);
        let c = i.half_axis();
        let h = 2.0 * c / 400.0;
        for k in 1..400 {
            let y = -c + k as f64 * h;
            let f = |y| reduced_objective(&i, y, PairSign::Positive);
            assert!(f(y - h) + f(y + h) - 2.0 * f(y) > 0.0);
        }
    }

    #[test]
    fn golden_section_on_a_parabola() {
        let x = golden_section(-3.0, 5.0, 1e-10, |x| (x - 1.25).powi(2));
        assert_abs_diff_eq!(x, 1.25, epsilon = 1e-8);
    }

    #[test]
    fn signed_critical_point_examples() {
        assert_abs_diff_eq!(signed_critical_point(&inst(1.0, 2.5, 1.0)).unwrap(), 0.539791, epsilon = 1e-6);
        assert_abs_diff_eq!(signed_critical_point(&inst(2.0, 2.5, 1.0)).unwrap(), 1.079582, epsilon = 2e-6);
        let i = inst(1.0, 1.01, 1.0);
        let y = signed_critical_point(&i).unwrap();
        // Independent check against the exterior root of the squared equation.
        let q = crate::analytic::quartic_coefficients(&i);
        assert!(q.eval(y).abs() < 1e-9 * q.magnitude_at(1.0 + y));
        assert_abs_diff_eq!(y, 2.608480, epsilon = 1e-6);
        assert!(stationarity_defect(1.0, 1.01, -1.0, y).abs() < 1e-8);
        assert!(signed_critical_point(&inst(1.0, 1.0001, 1.0)).unwrap() > 10.0);
    }

    #[test]
    fn signed_critical_point_needs_heavier_first_pair() {
        assert!(matches!(signed_critical_point(&inst(1.0, 1.0, 1.0)), Err(Error::NoBracket { .. })));
        assert!(matches!(signed_critical_point(&inst(1.0, 1.0, 2.0)), Err(Error::NoBracket { .. })));
    }
}
