//! Elementary geometry of weighted balls: power distance, sphere pairs and
//! sphere triples.

use nalgebra::Vector3;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Relative tolerance used for every tangency/degeneracy classification.
/// Multiplied by the largest radius of the ball set to get a length.
pub const GEOMETRIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: Vec3,
    pub radius: f64,
    pub weight: f64,
}

impl Ball {
    pub fn new(center: [f64; 3], radius: f64, weight: f64) -> Self {
        Ball {
            center: Vec3::from(center),
            radius,
            weight,
        }
    }
}

/// The balls of a space-filling diagram, in index order.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSet {
    balls: Vec<Ball>,
}

impl BallSet {
    pub fn new(balls: Vec<Ball>) -> Self {
        BallSet { balls }
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Ball> {
        self.balls.iter()
    }

    pub fn max_radius(&self) -> f64 {
        self.balls.iter().map(|b| b.radius).fold(0.0, f64::max)
    }

    /// Absolute length tolerance for classification.
    pub fn length_tolerance(&self) -> f64 {
        GEOMETRIC_TOLERANCE * self.max_radius().max(f64::MIN_POSITIVE)
    }

    /// Concatenated centers; coordinate `3i + l` is coordinate `l` of ball `i`.
    pub fn state(&self) -> Vec<f64> {
        self.balls
            .iter()
            .flat_map(|b| [b.center.x, b.center.y, b.center.z])
            .collect()
    }

    /// Same radii and weights, centers taken from `x`.
    pub fn with_state(&self, x: &[f64]) -> Result<BallSet> {
        if x.len() != 3 * self.len() {
            return Err(Error::DimensionMismatch {
                expected: 3 * self.len(),
                got: x.len(),
            });
        }
        let balls = self
            .balls
            .iter()
            .enumerate()
            .map(|(i, b)| Ball {
                center: Vec3::new(x[3 * i], x[3 * i + 1], x[3 * i + 2]),
                ..*b
            })
            .collect();
        Ok(BallSet { balls })
    }

    /// State moved to `x + tau * t`.
    pub fn displaced(&self, t: &Momentum, tau: f64) -> Result<BallSet> {
        if t.len() != 3 * self.len() {
            return Err(Error::DimensionMismatch {
                expected: 3 * self.len(),
                got: t.len(),
            });
        }
        let x: Vec<f64> = self
            .state()
            .iter()
            .zip(t.as_slice())
            .map(|(a, b)| a + tau * b)
            .collect();
        self.with_state(&x)
    }

    pub fn with_weights(&self, weights: &[f64]) -> BallSet {
        let balls = self
            .balls
            .iter()
            .zip(weights)
            .map(|(b, &w)| Ball { weight: w, ..*b })
            .collect();
        BallSet { balls }
    }

    pub fn centroid(&self) -> Vec3 {
        if self.balls.is_empty() {
            return Vec3::zeros();
        }
        self.balls.iter().map(|b| b.center).sum::<Vec3>() / self.len() as f64
    }
}

impl std::ops::Index<usize> for BallSet {
    type Output = Ball;
    fn index(&self, i: usize) -> &Ball {
        &self.balls[i]
    }
}

impl FromIterator<Ball> for BallSet {
    fn from_iter<I: IntoIterator<Item = Ball>>(iter: I) -> Self {
        BallSet::new(iter.into_iter().collect())
    }
}

/// Stacked velocity vectors, one 3-vector per ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Momentum(Vec<f64>);

impl Momentum {
    pub fn new(t: Vec<f64>) -> Self {
        Momentum(t)
    }

    pub fn zeros(n: usize) -> Self {
        Momentum(vec![0.0; 3 * n])
    }

    pub fn from_vectors(v: &[Vec3]) -> Self {
        Momentum(v.iter().flat_map(|a| [a.x, a.y, a.z]).collect())
    }

    /// Every ball moves with the same velocity.
    pub fn translation(n: usize, v: Vec3) -> Self {
        Momentum::from_vectors(&vec![v; n])
    }

    /// Infinitesimal rotation about `axis` through `pivot`.
    pub fn rotation(balls: &BallSet, axis: Vec3, pivot: Vec3) -> Self {
        let v: Vec<Vec3> = balls.iter().map(|b| axis.cross(&(b.center - pivot))).collect();
        Momentum::from_vectors(&v)
    }

    /// The six generators of rigid motion: three translations and three
    /// rotations about the centroid.
    pub fn rigid_generators(balls: &BallSet) -> Vec<Momentum> {
        let n = balls.len();
        let c = balls.centroid();
        let mut out = Vec::with_capacity(6);
        for axis in [Vec3::x(), Vec3::y(), Vec3::z()] {
            out.push(Momentum::translation(n, axis));
        }
        for axis in [Vec3::x(), Vec3::y(), Vec3::z()] {
            out.push(Momentum::rotation(balls, axis, c));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn ball(&self, i: usize) -> Vec3 {
        Vec3::new(self.0[3 * i], self.0[3 * i + 1], self.0[3 * i + 2])
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

/// Power distance `|a - x|^2 - r^2` of a point from a ball.
pub fn power_distance(a: &Vec3, ball: &Ball) -> f64 {
    (a - ball.center).norm_squared() - ball.radius * ball.radius
}

/// Two balls and, when their spheres cross, the circle where they meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    pub i: usize,
    pub j: usize,
    /// Distance between the centers.
    pub distance: f64,
    /// Unit vector pointing from `x_j` to `x_i`.
    pub u: Vec3,
    /// Signed distances of `x_i` and `x_j` from the power plane.
    pub xi_i: f64,
    pub xi_j: f64,
    /// Point of the power plane on the center line.
    pub center: Vec3,
    /// Radius of the intersection circle; 0 unless the spheres cross.
    pub circle_radius: f64,
    /// True when `|r_i - r_j| < d < r_i + r_j`.
    pub intersects: bool,
    /// Angle between the sphere normals along the circle.
    pub normal_angle: Option<f64>,
}

pub fn pair_geometry(balls: &BallSet, i: usize, j: usize) -> Result<PairGeometry> {
    let (bi, bj) = (&balls[i], &balls[j]);
    let diff = bi.center - bj.center;
    let d = diff.norm();
    if d <= balls.length_tolerance() {
        return Err(Error::CoincidentCenters(i, j));
    }
    let (ri, rj) = (bi.radius, bj.radius);
    let delta = ri * ri - rj * rj;
    let xi_i = 0.5 * (d + delta / d);
    let xi_j = 0.5 * (d - delta / d);
    let u = diff / d;
    let center = bi.center - xi_i * u;
    let intersects = d < ri + rj && d > (ri - rj).abs();
    // 16 d^2 r_ij^2 factored into four linear terms
    let heron = (ri + rj - d) * (rj + d - ri) * (d + ri - rj) * (d + ri + rj);
    let circle_radius = if intersects {
        heron.max(0.0).sqrt() / (2.0 * d)
    } else {
        0.0
    };
    let normal_angle = if intersects {
        let cos = (ri * ri + rj * rj - d * d) / (2.0 * ri * rj);
        Some(cos.clamp(-1.0, 1.0).acos())
    } else {
        None
    };
    Ok(PairGeometry {
        i,
        j,
        distance: d,
        u,
        xi_i,
        xi_j,
        center,
        circle_radius,
        intersects,
        normal_angle,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    Minus = 0,
    Plus = 1,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Minus, Side::Plus];

    pub fn sign(self) -> f64 {
        match self {
            Side::Minus => -1.0,
            Side::Plus => 1.0,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Three spheres and the two points where they meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleGeometry {
    pub indices: [usize; 3],
    /// Point of equal power to the three balls in the plane of the centers.
    pub center: Vec3,
    /// Unit normal of the plane of centers, oriented by
    /// `(x_j - x_i) x (x_k - x_i)`.
    pub axis: Vec3,
    /// Half-length of the segment joining the two intersection points.
    pub half_length: f64,
    /// `[P-, P+]`; `P+` lies on the positive side of `axis`.
    pub points: [Vec3; 2],
    /// Outward unit normals `[n_i, n_j, n_k]` at each point.
    pub normals: [[Vec3; 3]; 2],
}

impl TripleGeometry {
    pub fn point(&self, side: Side) -> Vec3 {
        self.points[side.index()]
    }

    pub fn normals_at(&self, side: Side) -> [Vec3; 3] {
        self.normals[side.index()]
    }
}

/// Point of equal power to three balls, in the plane of their centers, and
/// the unit normal of that plane. `None` for (nearly) collinear centers.
pub(crate) fn triple_orthocenter(bi: &Ball, bj: &Ball, bk: &Ball) -> Option<(Vec3, Vec3, f64)> {
    let e1 = bj.center - bi.center;
    let e2 = bk.center - bi.center;
    let cross = e1.cross(&e2);
    let scale = e1.norm_squared().max(e2.norm_squared());
    if cross.norm() <= 1e-12 * scale {
        return None;
    }
    let ri2 = bi.radius * bi.radius;
    let h1 = 0.5 * (e1.norm_squared() - bj.radius * bj.radius + ri2);
    let h2 = 0.5 * (e2.norm_squared() - bk.radius * bk.radius + ri2);
    let (g11, g12, g22) = (e1.dot(&e1), e1.dot(&e2), e2.dot(&e2));
    let det = g11 * g22 - g12 * g12;
    let alpha = (h1 * g22 - h2 * g12) / det;
    let beta = (h2 * g11 - h1 * g12) / det;
    let y = alpha * e1 + beta * e2;
    // squared half-length of the common chord: r_i^2 - |y|^2
    let half_sq = ri2 - y.norm_squared();
    Some((bi.center + y, cross / cross.norm(), half_sq))
}

pub fn triple_geometry(balls: &BallSet, i: usize, j: usize, k: usize) -> Result<TripleGeometry> {
    let (bi, bj, bk) = (&balls[i], &balls[j], &balls[k]);
    let (center, axis, half_sq) = triple_orthocenter(bi, bj, bk).ok_or(Error::DegenerateTriple(i, j, k))?;
    let tol = GEOMETRIC_TOLERANCE * bi.radius.max(bj.radius).max(bk.radius);
    if half_sq <= tol * tol {
        return Err(Error::DegenerateTriple(i, j, k));
    }
    let h = half_sq.sqrt();
    let points = [center - h * axis, center + h * axis];
    let normals = points.map(|p| {
        [
            (p - bi.center) / bi.radius,
            (p - bj.center) / bj.radius,
            (p - bk.center) / bk.radius,
        ]
    });
    Ok(TripleGeometry {
        indices: [i, j, k],
        center,
        axis,
        half_length: h,
        points,
        normals,
    })
}

/// Unit vector normal to `u_ij` with positive component along `u_ik`.
pub fn perpendicular_unit(u_ij: &Vec3, u_ik: &Vec3) -> Vec3 {
    let v = u_ik - u_ij.dot(u_ik) * u_ij;
    v / v.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit(c: [f64; 3]) -> Ball {
        Ball::new(c, 1.0, 1.0)
    }

    #[test]
    fn power_distance_examples() {
        let b = unit([0.0, 0.0, 0.0]);
        assert_eq!(power_distance(&Vec3::zeros(), &b), -1.0);
        assert_eq!(power_distance(&Vec3::new(1.0, 0.0, 0.0), &b), 0.0);
        assert_eq!(power_distance(&Vec3::new(2.0, 0.0, 0.0), &b), 3.0);
    }

    #[test]
    fn pair_unit_spheres_at_distance_one() {
        let balls = BallSet::new(vec![unit([0.0, 0.0, 0.0]), unit([1.0, 0.0, 0.0])]);
        let p = pair_geometry(&balls, 0, 1).unwrap();
        assert!((p.xi_i - 0.5).abs() < 1e-15);
        assert!((p.circle_radius - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((p.normal_angle.unwrap() - PI / 3.0).abs() < 1e-15);
        assert!((p.u - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pair_tangent_and_unequal() {
        let balls = BallSet::new(vec![unit([0.0, 0.0, 0.0]), unit([2.0, 0.0, 0.0])]);
        let p = pair_geometry(&balls, 0, 1).unwrap();
        assert_eq!(p.xi_i, 1.0);
        assert_eq!(p.circle_radius, 0.0);
        assert!(!p.intersects);

        let balls = BallSet::new(vec![Ball::new([0.0, 0.0, 0.0], 2.0, 1.0), unit([2.0, 0.0, 0.0])]);
        let p = pair_geometry(&balls, 0, 1).unwrap();
        assert!((p.xi_i - 1.75).abs() < 1e-15);
        assert!((p.circle_radius - (4.0f64 - 3.0625).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn pair_symmetry() {
        let balls = BallSet::new(vec![
            Ball::new([0.1, -0.3, 0.2], 1.3, 1.0),
            Ball::new([1.0, 0.4, -0.2], 0.9, 1.0),
        ]);
        let a = pair_geometry(&balls, 0, 1).unwrap();
        let b = pair_geometry(&balls, 1, 0).unwrap();
        assert!((a.xi_i + a.xi_j - a.distance).abs() < 1e-14);
        assert!((a.circle_radius - b.circle_radius).abs() < 1e-14);
        assert!((a.normal_angle.unwrap() - b.normal_angle.unwrap()).abs() < 1e-14);
        assert!((a.u + b.u).norm() < 1e-15);
        assert!((a.center - b.center).norm() < 1e-14);
    }

    #[test]
    fn coincident_centers_rejected() {
        let balls = BallSet::new(vec![unit([0.0, 0.0, 0.0]), unit([0.0, 0.0, 0.0])]);
        assert!(matches!(
            pair_geometry(&balls, 0, 1),
            Err(Error::CoincidentCenters(0, 1))
        ));
    }

    #[test]
    fn octant_triple() {
        let balls = BallSet::new(vec![
            unit([1.0, 0.0, 0.0]),
            unit([0.0, 1.0, 0.0]),
            unit([0.0, 0.0, 1.0]),
        ]);
        let t = triple_geometry(&balls, 0, 1, 2).unwrap();
        // (x_j - x_i) x (x_k - x_i) points along (1,1,1)
        assert!((t.point(Side::Minus) - Vec3::zeros()).norm() < 1e-14);
        assert!((t.point(Side::Plus) - Vec3::repeat(2.0 / 3.0)).norm() < 1e-14);
        let n = t.normals_at(Side::Minus);
        assert!((n[0] + Vec3::x()).norm() < 1e-14);
        assert!((n[1] + Vec3::y()).norm() < 1e-14);
        assert!((n[2] + Vec3::z()).norm() < 1e-14);
        for side in Side::BOTH {
            let n = t.normals_at(side);
            for (a, b) in [(0, 1), (1, 2), (2, 0)] {
                assert!((n[a].dot(&n[b]).acos() - PI / 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn triple_without_intersection() {
        let balls = BallSet::new(vec![
            unit([1.9, 0.0, 0.0]),
            unit([0.0, 1.0, 0.0]),
            unit([0.0, 0.0, 1.0]),
        ]);
        assert!(matches!(
            triple_geometry(&balls, 0, 1, 2),
            Err(Error::DegenerateTriple(..))
        ));
    }

    #[test]
    fn triple_points_on_spheres_and_angles_match() {
        let balls = BallSet::new(vec![
            Ball::new([0.0, 0.0, 0.0], 1.2, 1.0),
            Ball::new([1.3, 0.2, 0.1], 0.9, 1.0),
            Ball::new([0.4, 1.1, -0.3], 1.0, 1.0),
        ]);
        let t = triple_geometry(&balls, 0, 1, 2).unwrap();
        for side in Side::BOTH {
            let p = t.point(side);
            for m in 0..3 {
                let b = &balls[m];
                assert!(((p - b.center).norm() - b.radius).abs() < 1e-12 * b.radius);
            }
            let n = t.normals_at(side);
            for (a, b) in [(0, 1), (1, 2), (2, 0)] {
                let phi = pair_geometry(&balls, a, b).unwrap().normal_angle.unwrap();
                assert!((n[a].dot(&n[b]).clamp(-1.0, 1.0).acos() - phi).abs() < 1e-10);
            }
        }
    }
}
