//! Real roots of real polynomials of degree at most four.
//!
//! Quartics go through Ferrari's factorization into two quadratics via the
//! largest root of the resolvent cubic; cubics use the trigonometric form
//! when all roots are real and a cancellation-free Cardano form otherwise.
//! Every root is then polished with Newton steps against the original
//! coefficients, and roots closer than `MERGE_REL_TOL · scale` are merged
//! into one root with the summed multiplicity.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Cluster radius for multiplicity detection, relative to `1 + max|root|`.
pub const MERGE_REL_TOL: f64 = 1e-7;

/// Residual bound, relative to `max_k |c_k|·scaleᵏ`.
pub const RESIDUAL_REL_TOL: f64 = 1e-9;

const NEWTON_STEPS: usize = 8;

/// `c4·y⁴ + c3·y³ + c2·y² + c1·y + c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticCoefficients {
    pub c4: f64,
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl QuarticCoefficients {
    pub const fn new(c4: f64, c3: f64, c2: f64, c1: f64, c0: f64) -> Self {
        QuarticCoefficients { c4, c3, c2, c1, c0 }
    }

    /// Coefficients from the highest power down.
    pub fn to_array(self) -> [f64; 5] {
        [self.c4, self.c3, self.c2, self.c1, self.c0]
    }

    pub fn from_array(c: [f64; 5]) -> Self {
        QuarticCoefficients::new(c[0], c[1], c[2], c[3], c[4])
    }

    pub fn eval(&self, y: f64) -> f64 {
        horner(&self.to_array(), y)
    }

    pub fn derivative(&self, y: f64) -> f64 {
        horner(&[4.0 * self.c4, 3.0 * self.c3, 2.0 * self.c2, self.c1], y)
    }

    /// `max_k |c_k|·scaleᵏ`, the magnitude a residual is measured against.
    pub fn magnitude_at(&self, scale: f64) -> f64 {
        let c = self.to_array();
        (0..5).map(|k| c[4 - k].abs() * scale.powi(k as i32)).fold(0.0, f64::max)
    }

    /// Largest residual the roots of `self` are allowed, given those roots.
    pub fn residual_bound(&self, roots: &RealRoots) -> f64 {
        RESIDUAL_REL_TOL * self.magnitude_at(1.0 + roots.max_abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RealRoots {
    /// Ascending, distinct after merging.
    pub roots: Vec<RealRoot>,
}

impl RealRoots {
    pub fn values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.value).collect()
    }

    pub fn count_with_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.roots.iter().map(|r| r.value.abs()).fold(0.0, f64::max)
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().fold(0.0, |acc, &k| acc * x + k)
}

fn horner_with_derivative(c: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &k in c {
        dp = dp * x + p;
        p = p * x + k;
    }
    (p, dp)
}

fn polish(c: &[f64], x0: f64) -> f64 {
    let (mut best, mut best_res) = (x0, horner(c, x0).abs());
    let mut x = x0;
    for _ in 0..NEWTON_STEPS {
        let (p, dp) = horner_with_derivative(c, x);
        if p == 0.0 || dp == 0.0 || !dp.is_finite() {
            break;
        }
        let step = p / dp;
        x -= step;
        let res = horner(c, x).abs();
        if res < best_res {
            best = x;
            best_res = res;
        }
        if step.abs() <= 4.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    best
}

/// Roots of `a·x² + b·x + c` with `a ≠ 0`, each listed with multiplicity.
fn quadratic(a: f64, b: f64, c: f64, out: &mut Vec<f64>) {
    let b = b / a;
    let c = c / a;
    let disc = b * b - 4.0 * c;
    let slack = 8.0 * f64::EPSILON * (b * b + 4.0 * c.abs());
    if disc.abs() <= slack {
        out.extend([-b / 2.0, -b / 2.0]);
    } else if disc > 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            // b = 0 and c < 0.
            let r = (-c).sqrt();
            out.extend([-r, r]);
        } else {
            out.extend([q, c / q]);
        }
    }
}

/// Real roots of the monic cubic `x³ + b·x² + c·x + d`.
fn monic_cubic(b: f64, c: f64, d: f64, out: &mut Vec<f64>) {
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    if p == 0.0 && q == 0.0 {
        out.extend([-shift; 3]);
    } else if disc > 0.0 {
        let s = -q / 2.0 - q.signum() * disc.sqrt();
        let u = s.cbrt();
        let v = if u == 0.0 { 0.0 } else { -p / (3.0 * u) };
        out.push(u + v - shift);
    } else {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * r)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        for k in 0..3 {
            out.push(r * (phi - 2.0 * PI * k as f64 / 3.0).cos() - shift);
        }
    }
}

/// Real roots of the monic quartic `x⁴ + b·x³ + c·x² + d·x + e`.
fn monic_quartic(b: f64, c: f64, d: f64, e: f64, out: &mut Vec<f64>) {
    let shift = b / 4.0;
    let b2 = b * b;
    // Depressed: z⁴ + p·z² + q·z + r.
    let p = c - 3.0 * b2 / 8.0;
    let q = d - b * c / 2.0 + b2 * b / 8.0;
    let r = e - b * d / 4.0 + b2 * c / 16.0 - 3.0 * b2 * b2 / 256.0;

    let mut z = Vec::with_capacity(4);
    let size = p.abs().max(r.abs().sqrt()).max(q.abs().powf(2.0 / 3.0));
    if q.abs() <= 16.0 * f64::EPSILON * size.powf(1.5) {
        // Biquadratic: w² + p·w + r with w = z².
        let mut w = Vec::with_capacity(2);
        quadratic(1.0, p, r, &mut w);
        for wi in w {
            if wi > 0.0 {
                let s = wi.sqrt();
                z.extend([-s, s]);
            } else if wi.abs() <= 16.0 * f64::EPSILON * size {
                z.extend([0.0, 0.0]);
            }
        }
    } else {
        // Resolvent 8m³ + 8p·m² + (2p² − 8r)·m − q² = 0 has a positive root.
        let rc = [1.0, p, p * p / 4.0 - r, -q * q / 8.0];
        let mut ms = Vec::with_capacity(3);
        monic_cubic(rc[1], rc[2], rc[3], &mut ms);
        let m = ms.into_iter().fold(f64::NEG_INFINITY, f64::max);
        let m = polish(&rc, m).max(f64::MIN_POSITIVE);
        let s = (2.0 * m).sqrt();
        // Constant terms of z² ∓ s·z + β± with β₊·β₋ = r.
        let half = p / 2.0 + m;
        let skew = q / (2.0 * s);
        let (beta_minus_s, beta_plus_s) = {
            let big_first = (half + skew).abs() >= (half - skew).abs();
            let (big, big_is_first) = if big_first { (half + skew, true) } else { (half - skew, false) };
            let small = if big != 0.0 { r / big } else { half - skew };
            if big_is_first {
                (big, small)
            } else {
                (small, big)
            }
        };
        quadratic(1.0, -s, beta_minus_s, &mut z);
        quadratic(1.0, s, beta_plus_s, &mut z);
    }
    out.extend(z.into_iter().map(|zi| zi - shift));
}

pub fn real_roots(q: &QuarticCoefficients) -> Result<RealRoots> {
    let coeffs = q.to_array();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("polynomial coefficients must be finite".into()));
    }
    let lead = match coeffs.iter().position(|&c| c != 0.0) {
        Some(i) => i,
        None => return Err(Error::ZeroPolynomial),
    };
    let poly = &coeffs[lead..];
    // Factor out exact zero roots.
    let zeros = poly.iter().rev().take_while(|&&c| c == 0.0).count();
    let reduced = &poly[..poly.len() - zeros];

    let mut raw = vec![0.0; zeros];
    let a = reduced[0];
    match reduced.len() - 1 {
        0 => {}
        1 => raw.push(-reduced[1] / a),
        2 => quadratic(a, reduced[1], reduced[2], &mut raw),
        3 => monic_cubic(reduced[1] / a, reduced[2] / a, reduced[3] / a, &mut raw),
        4 => monic_quartic(reduced[1] / a, reduced[2] / a, reduced[3] / a, reduced[4] / a, &mut raw),
        _ => unreachable!("degree is at most four"),
    }

    let mut polished: Vec<f64> = raw
        .into_iter()
        .filter(|x| x.is_finite())
        .map(|x| if x == 0.0 && zeros > 0 { x } else { polish(poly, x) })
        .collect();
    polished.sort_by(f64::total_cmp);
    Ok(merge(poly, polished))
}

fn merge(poly: &[f64], sorted: Vec<f64>) -> RealRoots {
    let scale = 1.0 + sorted.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let radius = MERGE_REL_TOL * scale;
    let mut roots: Vec<RealRoot> = Vec::with_capacity(sorted.len());
    let mut cluster: Vec<f64> = Vec::new();
    let flush = |cluster: &mut Vec<f64>, roots: &mut Vec<RealRoot>| {
        if cluster.is_empty() {
            return;
        }
        // Keep the member with the smallest residual.
        let value = cluster
            .iter()
            .copied()
            .min_by(|a, b| horner(poly, *a).abs().total_cmp(&horner(poly, *b).abs()))
            .expect("non-empty cluster");
        roots.push(RealRoot { value, multiplicity: cluster.len() });
        cluster.clear();
    };
    for x in sorted {
        if let Some(&last) = cluster.last() {
            if x - last > radius {
                flush(&mut cluster, &mut roots);
            }
        }
        cluster.push(x);
    }
    flush(&mut cluster, &mut roots);
    RealRoots { roots }
}
