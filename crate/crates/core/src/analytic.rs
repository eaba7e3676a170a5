//! Closed-form axial coordinates for the two-pair-weights regular tetrahedron.
//!
//! With weight `b1` on `A1, A2` and `b4` on `A3, A4`, stationarity of
//! `b1·a01(y) + b4·a04(y)` along the axis, squared once, is the quartic
//!
//! ```text
//! 64(b1² − b4²)·y⁴ − 8√2·a³(b1² + b4²)·y + 3a⁴(b1² − b4²) = 0
//! ```
//!
//! For `b1 > b4` it has exactly two real roots: the minimizer inside the
//! tetrahedron, `0 < y < c`, and the critical point of the mixed-sign
//! (complementary) objective outside it, `y′ > c`, where `c = a√2/4`.
//!
//! Both roots have a radical expression through two intermediates `s` and
//! `t`. The quantity `s` is real but always negative, so its cube root, and
//! everything after it, must be taken on principal complex branches; the
//! imaginary parts cancel only at the very end. The residue of that
//! cancellation is reported as `imag_defect`.
//!
//! `s` is evaluated in the factored form
//! `s = −a⁶(u−v)⁸ / (2√2·√(uv(u²+v²)) + (u+v)²)` with `u = b1²`, `v = b4²`,
//! which equals the expanded twelfth-degree polynomial but avoids its
//! catastrophic cancellation as `b1/b4 → 1`.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::equilibrium::{classify, equilibrium_residual};
use crate::error::{Error, Result};
use crate::geom::{axial_distances, Case, FtSolution, SymmetricInstance};
use crate::quartic::{real_roots, QuarticCoefficients};

pub const EQUAL_WEIGHTS_REL_TOL: f64 = 1e-12;

/// Largest imaginary residue tolerated in an assembled root, relative to `a`.
pub const IMAG_DEFECT_REL_TOL: f64 = 1e-9;

/// Relative stationarity defect accepted when picking quartic roots.
const ROOT_SELECT_REL_TOL: f64 = 1e-6;

pub fn quartic_coefficients(inst: &SymmetricInstance) -> QuarticCoefficients {
    let SymmetricInstance { a, b1, b4 } = *inst;
    let diff = b1 * b1 - b4 * b4;
    let sum = b1 * b1 + b4 * b4;
    QuarticCoefficients::new(64.0 * diff, 0.0, 0.0, -8.0 * SQRT_2 * a.powi(3) * sum, 3.0 * a.powi(4) * diff)
}

pub fn has_equal_weights(inst: &SymmetricInstance) -> bool {
    (inst.b1 - inst.b4).abs() < EQUAL_WEIGHTS_REL_TOL * (inst.b1 + inst.b4)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadicalIntermediates {
    /// Real-valued, carried as complex. Negative whenever `b1 ≠ b4`.
    pub s: Complex64,
    /// The radicand under the square root inside `s`; non-negative.
    pub s_radicand: f64,
    /// Principal cube root of `s`.
    pub s_cbrt: Complex64,
    pub t: Complex64,
    /// Assembled interior root, before discarding the imaginary part.
    pub y: Complex64,
    /// Assembled exterior root, before discarding the imaginary part.
    pub y_complementary: Complex64,
    /// `max(|Im y|, |Im y′|)`.
    pub imag_defect: f64,
}

/// The radicand `a¹²·b1²·b4²·(b1² − b4²)⁸·(b1⁴ + b4⁴)`, i.e. the
/// eleven-term polynomial under the square root in `s`.
pub fn s_radicand(inst: &SymmetricInstance) -> f64 {
    let (u, v) = (inst.b1 * inst.b1, inst.b4 * inst.b4);
    inst.a.powi(12) * u * v * (u - v).powi(8) * (u * u + v * v)
}

/// `s` from its twelve-term expanded expression, as written. Loses all
/// precision as `b1/b4 → 1`; kept as a cross-check on the factored form.
pub fn s_expanded(inst: &SymmetricInstance) -> f64 {
    let SymmetricInstance { a, b1, b4 } = *inst;
    let p = |e1: i32, e4: i32| b1.powi(e1) * b4.powi(e4);
    let a6 = a.powi(6);
    let a12 = a.powi(12);
    let radicand = a12
        * (p(22, 2) - 8.0 * p(20, 4) + 29.0 * p(18, 6) - 64.0 * p(16, 8) + 98.0 * p(14, 10) - 112.0 * p(12, 12)
            + 98.0 * p(10, 14)
            - 64.0 * p(8, 16)
            + 29.0 * p(6, 18)
            - 8.0 * p(4, 20)
            + p(2, 22));
    a6 * (-p(12, 0) + 2.0 * p(10, 2) + p(8, 4) - 4.0 * p(6, 6) + p(4, 8) + 2.0 * p(2, 10) - p(0, 12))
        + 2.0 * SQRT_2 * radicand.sqrt()
}

pub fn radical_intermediates(inst: &SymmetricInstance) -> Result<RadicalIntermediates> {
    if has_equal_weights(inst) {
        return Err(Error::EqualWeights);
    }
    let SymmetricInstance { a, b1, b4 } = *inst;
    let (u, v) = (b1 * b1, b4 * b4);
    let d = u - v;
    let d2 = d * d;
    let a3 = a.powi(3);
    let a4 = a * a3;

    let s_radicand = s_radicand(inst);
    let s_re = -a.powi(6) * d2 * d2 * d2 * d2 / (2.0 * SQRT_2 * (u * v * (u * u + v * v)).sqrt() + (u + v) * (u + v));
    let s = Complex64::new(s_re, 0.0);
    let s_cbrt = Complex64::from_polar(s.norm().cbrt(), s.arg() / 3.0);

    // t = −a⁴(b1⁴ − 2b1²b4² + b4⁴)/(4s^⅓) − s^⅓/(4(b1⁴ − 2b1²b4² + b4⁴))
    let t = -(a4 * d2) / (4.0 * s_cbrt) - s_cbrt / (4.0 * d2);
    let sqrt_t = t.sqrt();
    // The first four terms under the outer root are exactly −t.
    let outer = -t;
    let linear = -8.0 * SQRT_2 * a3 * (u + v);
    let skew = 2.0 * linear / (sqrt_t * (64.0 * d));

    let y = -sqrt_t / 2.0 + (outer + skew).sqrt() / 2.0;
    let y_complementary = sqrt_t / 2.0 + (outer - skew).sqrt() / 2.0;
    let imag_defect = y.im.abs().max(y_complementary.im.abs());

    Ok(RadicalIntermediates { s, s_radicand, s_cbrt, t, y, y_complementary, imag_defect })
}

/// Both closed-form roots for `b1 > b4`, validated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub y: f64,
    pub y_complementary: f64,
    pub intermediates: RadicalIntermediates,
}

/// Evaluates the radical expressions and checks the result: the imaginary
/// residue must be below `IMAG_DEFECT_REL_TOL · a`, and the roots must fall
/// in `(0, c)` and `(c, ∞)` respectively.
pub fn closed_form(inst: &SymmetricInstance) -> Result<ClosedForm> {
    if inst.b1 < inst.b4 {
        return Err(Error::InvalidInput("closed form requires b1 > b4".into()));
    }
    let ri = radical_intermediates(inst)?;
    let c = inst.half_axis();
    let (y, yc) = (ri.y.re, ri.y_complementary.re);
    let usable = ri.imag_defect.is_finite()
        && ri.imag_defect < IMAG_DEFECT_REL_TOL * inst.a
        && y > 0.0
        && y < c
        && yc > c
        && yc.is_finite();
    if !usable {
        return Err(Error::BranchCancellationFailure { imag_defect: ri.imag_defect });
    }
    Ok(ClosedForm { y, y_complementary: yc, intermediates: ri })
}

/// Derivative of `b1·a01(y) + b4·a04(y)` with respect to `y`. Weights may
/// carry either sign.
pub fn stationarity_defect(a: f64, b1: f64, b4: f64, y: f64) -> f64 {
    let c = crate::geom::half_axis(a);
    let (d1, d4) = axial_distances(a, y);
    b1 * (y - c) / d1 + b4 * (y + c) / d4
}

/// Picks the interior and exterior roots out of the quartic's real roots for
/// `b1 > b4`. Squaring the stationarity condition admits extraneous roots;
/// each candidate is checked against the unsquared condition with the sign
/// pattern of its interval.
pub fn quartic_axial_roots(inst: &SymmetricInstance) -> Result<(f64, f64)> {
    if has_equal_weights(inst) {
        return Err(Error::EqualWeights);
    }
    if inst.b1 < inst.b4 {
        return Err(Error::InvalidInput("root selection requires b1 > b4".into()));
    }
    let SymmetricInstance { a, b1, b4 } = *inst;
    let c = inst.half_axis();
    let roots = real_roots(&quartic_coefficients(inst))?.values();
    let tol = ROOT_SELECT_REL_TOL * (b1 + b4);
    let pick = |lo: f64, hi: f64, sign4: f64| {
        roots
            .iter()
            .copied()
            .filter(|&y| y > lo && y < hi)
            .map(|y| (y, stationarity_defect(a, b1, sign4 * b4, y).abs()))
            .filter(|&(_, defect)| defect < tol)
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .map(|(y, _)| y)
            .ok_or(Error::RootNotFound)
    };
    Ok((pick(0.0, c, 1.0)?, pick(c, f64::INFINITY, -1.0)?))
}

/// Signed axial coordinate of the weighted Fermat-Torricelli point.
///
/// Equal weights give `0`. For `b1 < b4` the answer is the mirror image of
/// the swapped instance. If the branch assembly fails its checks the root is
/// taken from the quartic solver instead.
pub fn ft_axial(inst: &SymmetricInstance) -> Result<f64> {
    if has_equal_weights(inst) {
        return Ok(0.0);
    }
    if inst.b1 < inst.b4 {
        return ft_axial(&inst.swapped()).map(|y| -y);
    }
    match closed_form(inst) {
        Ok(cf) => Ok(cf.y),
        Err(Error::BranchCancellationFailure { .. }) => quartic_axial_roots(inst).map(|r| r.0),
        Err(e) => Err(e),
    }
}

/// Axial coordinate of the complementary point: the critical point of the
/// objective with one weight pair negated. It lies beyond the heavier edge,
/// `y′ > c`, and runs off to infinity as the weights equalize.
pub fn complementary_axial(inst: &SymmetricInstance) -> Result<f64> {
    if has_equal_weights(inst) {
        return Err(Error::EqualWeights);
    }
    if inst.b1 < inst.b4 {
        return complementary_axial(&inst.swapped()).map(|y| -y);
    }
    match closed_form(inst) {
        Ok(cf) => Ok(cf.y_complementary),
        Err(Error::BranchCancellationFailure { .. }) => quartic_axial_roots(inst).map(|r| r.1),
        Err(e) => Err(e),
    }
}

pub fn solve_symmetric(inst: &SymmetricInstance) -> Result<FtSolution> {
    let tetra = inst.tetrahedron();
    let emb = inst.embedding();
    let label = classify(&tetra)?;
    if let Case::Absorbed(i) = label.case {
        let point = tetra.vertex(i);
        return Ok(FtSolution {
            case: label.case,
            point,
            y: Some(emb.axial_coordinate(point)),
            objective: tetra.objective(point),
            residual: 0.0,
        });
    }
    let y = ft_axial(inst)?;
    let point = emb.axis_point(y);
    Ok(FtSolution {
        case: Case::Floating,
        point,
        y: Some(y),
        objective: tetra.objective(point),
        residual: equilibrium_residual(&tetra, point)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignedKind {
    /// Both pairs share a sign; the critical point is the ordinary solution.
    Coincident,
    /// The pairs have opposite signs; the critical point lies outside.
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedAxial {
    pub y: f64,
    pub kind: SignedKind,
    /// `|d/dy (b1·a01 + b4·a04)|` at `y`, with the signed weights.
    pub stationarity_defect: f64,
}

/// Axial critical point for signed weights `b1` (on `A1, A2`) and `b4`
/// (on `A3, A4`).
///
/// Negating every weight leaves the critical point where it was; flipping
/// one pair moves it to the exterior root of the same quartic.
pub fn signed_axial(a: f64, b1: f64, b4: f64) -> Result<SignedAxial> {
    for w in [b1, b4] {
        if !(w.is_finite() && w != 0.0) {
            return Err(Error::InvalidWeight(w));
        }
    }
    let inst = SymmetricInstance::new(a, b1.abs(), b4.abs())?;
    let (y, kind) = if b1.signum() == b4.signum() {
        (ft_axial(&inst)?, SignedKind::Coincident)
    } else {
        (complementary_axial(&inst)?, SignedKind::Exterior)
    };
    Ok(SignedAxial { y, kind, stationarity_defect: stationarity_defect(a, b1, b4, y).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn inst(a: f64, b1: f64, b4: f64) -> SymmetricInstance {
        SymmetricInstance::new(a, b1, b4).unwrap()
    }

    #[test]
    fn coefficients_of_worked_example() {
        let q = quartic_coefficients(&inst(1.0, 2.5, 1.0));
        assert_abs_diff_eq!(q.c4, 336.0, epsilon = 1e-12);
        assert_eq!((q.c3, q.c2), (0.0, 0.0));
        assert_abs_diff_eq!(q.c1, -82.02438, epsilon = 1e-5);
        assert_abs_diff_eq!(q.c0, 15.75, epsilon = 1e-12);
    }

    #[test]
    fn equal_weight_coefficients_collapse() {
        let q = quartic_coefficients(&inst(1.0, 1.0, 1.0));
        assert_eq!((q.c4, q.c0), (0.0, 0.0));
        assert_abs_diff_eq!(q.c1, -16.0 * SQRT_2, epsilon = 1e-12);
        assert_eq!(real_roots(&q).unwrap().values(), vec![0.0]);
    }

    #[test]
    fn coefficients_scale_with_edge() {
        let q1 = quartic_coefficients(&inst(1.0, 2.5, 1.0));
        let q2 = quartic_coefficients(&inst(2.0, 2.5, 1.0));
        assert_eq!(q2.c4, q1.c4);
        assert_abs_diff_eq!(q2.c1, 8.0 * q1.c1, epsilon = 1e-12);
        assert_abs_diff_eq!(q2.c0, 16.0 * q1.c0, epsilon = 1e-12);
    }

    #[test]
    fn s_is_negative_with_positive_radicand() {
        let i = inst(1.0, 2.5, 1.0);
        let ri = radical_intermediates(&i).unwrap();
        assert!(ri.s.re < 0.0);
        assert_eq!(ri.s.im, 0.0);
        assert!(ri.s_radicand > 0.0);
        // Independent evaluation of the expanded expression.
        assert_abs_diff_eq!(s_expanded(&i), -5930.314849738, epsilon = 1e-6);
        assert_abs_diff_eq!(ri.s.re, s_expanded(&i), epsilon = 1e-9 * 5930.0);
    }

    #[test]
    fn s_scales_with_twelfth_power_of_weights() {
        let base = radical_intermediates(&inst(1.0, 2.5, 1.0)).unwrap();
        let scaled = radical_intermediates(&inst(1.0, 5.0, 2.0)).unwrap();
        assert_abs_diff_eq!(scaled.s.re / base.s.re, 4096.0, epsilon = 1e-9);
        assert_abs_diff_eq!(scaled.y.re, base.y.re, epsilon = 1e-13);
    }

    #[test]
    fn equal_weights() {
        let i = inst(1.0, 1.0, 1.0);
        assert_eq!(radical_intermediates(&i), Err(Error::EqualWeights));
        assert_eq!(ft_axial(&i), Ok(0.0));
        assert_eq!(complementary_axial(&i), Err(Error::EqualWeights));
    }

    #[test]
    fn worked_example_roots() {
        let i = inst(1.0, 2.5, 1.0);
        assert_abs_diff_eq!(ft_axial(&i).unwrap(), 0.198358, epsilon = 1e-5);
        let yc = complementary_axial(&i).unwrap();
        assert_abs_diff_eq!(yc, 0.539791, epsilon = 1e-5);
        assert!(yc > SQRT_2 / 4.0);
        let cf = closed_form(&i).unwrap();
        assert!(cf.intermediates.imag_defect < 1e-12);
    }

    #[test]
    fn edge_scaling() {
        let y1 = ft_axial(&inst(1.0, 2.5, 1.0)).unwrap();
        let y2 = ft_axial(&inst(2.0, 2.5, 1.0)).unwrap();
        assert_abs_diff_eq!(y2, 2.0 * y1, epsilon = 1e-13);
        assert_abs_diff_eq!(y2, 0.396716, epsilon = 2e-5);
    }

    #[test]
    fn mirrored_weights() {
        let y = ft_axial(&inst(1.0, 1.0, 5.0)).unwrap();
        assert_abs_diff_eq!(y, -ft_axial(&inst(1.0, 5.0, 1.0)).unwrap(), epsilon = 0.0);
        assert!(y < 0.0);
    }

    #[test]
    fn fallback_agrees_with_closed_form() {
        for (b1, b4) in [(2.5, 1.0), (1.3, 1.0), (19.0, 1.0), (7.0, 3.0)] {
            let i = inst(1.7, b1, b4);
            let cf = closed_form(&i).unwrap();
            let (y, yc) = quartic_axial_roots(&i).unwrap();
            assert_abs_diff_eq!(cf.y, y, epsilon = 1e-12);
            assert_abs_diff_eq!(cf.y_complementary, yc, epsilon = 1e-11);
        }
    }

    #[test]
    fn near_equal_weights_stay_on_the_closed_form() {
        for ratio in [1.01, 1.0001, 1.000001] {
            let cf = closed_form(&inst(1.0, ratio, 1.0)).unwrap();
            assert!(cf.intermediates.imag_defect < IMAG_DEFECT_REL_TOL);
            let (y, yc) = quartic_axial_roots(&inst(1.0, ratio, 1.0)).unwrap();
            assert_abs_diff_eq!(cf.y, y, epsilon = 1e-12);
            assert!((cf.y_complementary - yc).abs() < 1e-9 * yc);
        }
    }

    #[test]
    fn complementary_grows_as_weights_equalize() {
        let ys: Vec<f64> = [1.5, 1.2, 1.1].iter().map(|r| complementary_axial(&inst(1.0, *r, 1.0)).unwrap()).collect();
        assert!(ys[0] < ys[1] && ys[1] < ys[2]);
    }

    #[test]
    fn solve_worked_example() {
        let sol = solve_symmetric(&inst(1.0, 2.5, 1.0)).unwrap();
        assert_eq!(sol.case, Case::Floating);
        assert_abs_diff_eq!(sol.y.unwrap(), 0.198358, epsilon = 1e-5);
        assert_abs_diff_eq!(sol.objective, 4.10710, epsilon = 1e-4);
        assert!(sol.residual < 1e-6);
    }

    #[test]
    fn solve_equal_weights_is_the_center() {
        let sol = solve_symmetric(&inst(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(sol.case, Case::Floating);
        assert_eq!(sol.y, Some(0.0));
        assert_eq!(sol.point, crate::Point3::ORIGIN);
    }

    #[test]
    fn signed_variants() {
        let same = signed_axial(1.0, -2.5, -1.0).unwrap();
        assert_eq!(same.kind, SignedKind::Coincident);
        assert_abs_diff_eq!(same.y, 0.198358, epsilon = 1e-5);
        assert!(same.stationarity_defect < 1e-9);
        for (b1, b4) in [(-2.5, 1.0), (2.5, -1.0)] {
            let mixed = signed_axial(1.0, b1, b4).unwrap();
            assert_eq!(mixed.kind, SignedKind::Exterior);
            assert_abs_diff_eq!(mixed.y, 0.539791, epsilon = 1e-5);
            assert!(mixed.stationarity_defect < 1e-9);
        }
        assert!(signed_axial(1.0, 0.0, 1.0).is_err());
    }
}
