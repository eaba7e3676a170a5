//! Points, weighted tetrahedra and the axial frame of the regular tetrahedron.
//!
//! The regular tetrahedron is placed so that the common perpendicular of the
//! opposite edges `A1A2` and `A3A4` lies on the z axis, with its midpoint `O`
//! at the origin and `+z` pointing toward `A1A2`. Every closed-form result in
//! this crate measures the solution by its signed axial coordinate `y`, the
//! z coordinate in this frame.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Relative signed-volume threshold below which four points count as coplanar.
pub const COPLANAR_REL_TOL: f64 = 1e-12;

/// Relative separation below which two points count as the same point.
pub const COINCIDENT_REL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn dot(self, other: Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Point3) -> Point3 {
        Point3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    pub fn distance(self, other: Point3) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(c: [f64; 3]) -> Self {
        Point3::new(c[0], c[1], c[2])
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, rhs: Point3) -> Point3 {
        Point3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Point3 {
    fn add_assign(&mut self, rhs: Point3) {
        *self = *self + rhs;
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Point3) -> Point3 {
        Point3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, k: f64) -> Point3 {
        Point3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Mul<Point3> for f64 {
    type Output = Point3;
    fn mul(self, p: Point3) -> Point3 {
        p * self
    }
}

impl Div<f64> for Point3 {
    type Output = Point3;
    fn div(self, k: f64) -> Point3 {
        Point3::new(self.x / k, self.y / k, self.z / k)
    }
}

/// Unit vector pointing from `from` to `to`.
pub fn unit_vector(from: Point3, to: Point3) -> Result<Point3> {
    let d = to - from;
    let separation = d.norm();
    let scale = 1f64.max(from.norm()).max(to.norm());
    if !(separation > COINCIDENT_REL_TOL * scale) {
        return Err(Error::CoincidentPoints { separation });
    }
    Ok(d / separation)
}

/// Angle at `apex` between the rays toward `p` and `q`, in `[0, π]`.
///
/// Uses `atan2(|u × v|, u · v)`, which stays accurate near 0 and π.
pub fn angle_at(apex: Point3, p: Point3, q: Point3) -> f64 {
    let u = p - apex;
    let v = q - apex;
    u.cross(v).norm().atan2(u.dot(v))
}

/// Dihedral angle along the edge `e0 e1` between the half-planes through `p`
/// and through `q`, in `[0, π]`.
pub fn dihedral_angle(e0: Point3, e1: Point3, p: Point3, q: Point3) -> f64 {
    let e = e1 - e0;
    let e = e / e.norm();
    let reject = |r: Point3| {
        let w = r - e0;
        w - e * w.dot(e)
    };
    let wp = reject(p);
    let wq = reject(q);
    wp.cross(wq).norm().atan2(wp.dot(wq))
}

/// Six times the signed volume of the tetrahedron `abcd`.
pub fn signed_volume6(a: Point3, b: Point3, c: Point3, d: Point3) -> f64 {
    (b - a).dot((c - a).cross(d - a))
}

/// Σ wᵢ‖x − pᵢ‖ over any finite list of weighted points. Weights may be
/// negative.
pub fn objective(points: &[(Point3, f64)], x: Point3) -> f64 {
    points.iter().map(|&(p, w)| w * x.distance(p)).sum()
}

/// Four non-coplanar vertices with positive weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedTetrahedron {
    vertices: [Point3; 4],
    weights: [f64; 4],
}

impl WeightedTetrahedron {
    pub fn new(vertices: [Point3; 4], weights: [f64; 4]) -> Result<Self> {
        if let Some(&w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidWeight(w));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("vertex coordinates must be finite".into()));
        }
        let mut scale = 0.0f64;
        for i in 0..4 {
            for j in i + 1..4 {
                scale = scale.max(vertices[i].distance(vertices[j]));
            }
        }
        let volume = signed_volume6(vertices[0], vertices[1], vertices[2], vertices[3]) / 6.0;
        let threshold = COPLANAR_REL_TOL * scale.powi(3);
        if !(volume.abs() > threshold) {
            return Err(Error::DegenerateTetrahedron { volume, threshold });
        }
        Ok(WeightedTetrahedron { vertices, weights })
    }

    pub fn vertices(&self) -> &[Point3; 4] {
        &self.vertices
    }

    pub fn weights(&self) -> &[f64; 4] {
        &self.weights
    }

    pub fn vertex(&self, i: usize) -> Point3 {
        self.vertices[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Longest edge length.
    pub fn scale(&self) -> f64 {
        let mut s = 0.0f64;
        for i in 0..4 {
            for j in i + 1..4 {
                s = s.max(self.vertices[i].distance(self.vertices[j]));
            }
        }
        s
    }

    pub fn weighted_points(&self) -> [(Point3, f64); 4] {
        std::array::from_fn(|i| (self.vertices[i], self.weights[i]))
    }

    pub fn objective(&self, x: Point3) -> f64 {
        objective(&self.weighted_points(), x)
    }

    pub fn weighted_centroid(&self) -> Point3 {
        let mut acc = Point3::ORIGIN;
        for (p, w) in self.weighted_points() {
            acc += p * w;
        }
        acc / self.total_weight()
    }
}

/// Regular tetrahedron with edge `a`, weight `b1` on `A1, A2` and `b4` on
/// `A3, A4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricInstance {
    pub a: f64,
    pub b1: f64,
    pub b4: f64,
}

impl SymmetricInstance {
    pub fn new(a: f64, b1: f64, b4: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::NonPositiveEdge(a));
        }
        for w in [b1, b4] {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidWeight(w));
            }
        }
        Ok(SymmetricInstance { a, b1, b4 })
    }

    /// Half-length of the common perpendicular, `a√2/4`.
    pub fn half_axis(&self) -> f64 {
        half_axis(self.a)
    }

    /// The same instance with the weight pairs exchanged.
    pub fn swapped(&self) -> Self {
        SymmetricInstance { a: self.a, b1: self.b4, b4: self.b1 }
    }

    pub fn weights(&self) -> [f64; 4] {
        [self.b1, self.b1, self.b4, self.b4]
    }

    pub fn embedding(&self) -> RegularEmbedding {
        // `a` was validated on construction.
        RegularEmbedding::canonical(self.a)
    }

    pub fn tetrahedron(&self) -> WeightedTetrahedron {
        let emb = self.embedding();
        WeightedTetrahedron::new(emb.vertices, self.weights()).expect("regular embedding with validated weights")
    }
}

pub fn half_axis(a: f64) -> f64 {
    a * std::f64::consts::SQRT_2 / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularEmbedding {
    pub a: f64,
    pub vertices: [Point3; 4],
    pub origin: Point3,
    /// Unit direction from the midpoint of `A3A4` toward the midpoint of `A1A2`.
    pub axis: Point3,
    /// Half-length of the common perpendicular.
    pub c: f64,
}

impl RegularEmbedding {
    fn canonical(a: f64) -> Self {
        let c = half_axis(a);
        let h = a / 2.0;
        RegularEmbedding {
            a,
            vertices: [
                Point3::new(-h, 0.0, c),
                Point3::new(h, 0.0, c),
                Point3::new(0.0, -h, -c),
                Point3::new(0.0, h, -c),
            ],
            origin: Point3::ORIGIN,
            axis: Point3::new(0.0, 0.0, 1.0),
            c,
        }
    }

    pub fn axis_point(&self, y: f64) -> Point3 {
        self.origin + self.axis * y
    }

    /// Signed coordinate of the projection of `p` onto the axis.
    pub fn axial_coordinate(&self, p: Point3) -> f64 {
        (p - self.origin).dot(self.axis)
    }

    pub fn midpoint_12(&self) -> Point3 {
        (self.vertices[0] + self.vertices[1]) / 2.0
    }

    pub fn midpoint_34(&self) -> Point3 {
        (self.vertices[2] + self.vertices[3]) / 2.0
    }
}

pub fn embed_regular(a: f64) -> Result<RegularEmbedding> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::NonPositiveEdge(a));
    }
    Ok(RegularEmbedding::canonical(a))
}

pub fn axis_point(emb: &RegularEmbedding, y: f64) -> Point3 {
    emb.axis_point(y)
}

/// Distances from the axis point at `y` to `A1` (= `A2`) and to `A4` (= `A3`).
pub fn axial_distances(a: f64, y: f64) -> (f64, f64) {
    let c = half_axis(a);
    let h = a / 2.0;
    (h.hypot(c - y), h.hypot(c + y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    Floating,
    /// The solution sits on the vertex with this zero-based index.
    Absorbed(usize),
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::Floating => write!(f, "floating"),
            Case::Absorbed(i) => write!(f, "absorbed(A{})", i + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtSolution {
    pub case: Case,
    pub point: Point3,
    /// Axial coordinate, when the solution was computed on the regular frame.
    pub y: Option<f64>,
    pub objective: f64,
    /// Norm of the weighted unit-vector sum at `point`; zero for absorbed cases.
    pub residual: f64,
}
