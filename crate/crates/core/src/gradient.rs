//! Analytic gradient of the weighted Gaussian curvature.
//!
//! The derivative along a momentum `t` splits into four terms:
//! `d'` from the sphere fractions, `e'` from the circle fractions, `f'` from
//! the normal projections `λ_ij`, and `h'` from the corner quadrangles. Each
//! term is a linear form in `t` and is accumulated directly into per-ball
//! vectors.

use std::f64::consts::{PI, TAU};

use nalgebra::Matrix3;

use crate::alpha::{Arc, CircleFrame, CornerRef};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::geom::{perpendicular_unit, BallSet, Momentum, PairGeometry, Vec3};
use crate::sphtrig::quad_area_gradient;

/// A linear functional `t ↦ Σ ⟨v, t_ball⟩` on momenta.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearForm(pub Vec<(usize, Vec3)>);

impl LinearForm {
    pub fn add(&mut self, ball: usize, v: Vec3) {
        self.0.push((ball, v));
    }

    /// Adds `⟨v, t_a - t_b⟩`.
    pub fn add_difference(&mut self, a: usize, b: usize, v: Vec3) {
        self.0.push((a, v));
        self.0.push((b, -v));
    }

    pub fn extend_scaled(&mut self, other: &LinearForm, s: f64) {
        self.0.extend(other.0.iter().map(|&(b, v)| (b, s * v)));
    }

    pub fn apply(&self, t: &Momentum) -> f64 {
        self.0.iter().map(|(b, v)| v.dot(&t.ball(*b))).sum()
    }

    /// Adds `s` times this form to per-ball gradient vectors.
    pub fn accumulate(&self, s: f64, out: &mut [Vec3]) {
        for (b, v) in &self.0 {
            out[*b] += s * v;
        }
    }

    pub fn to_vectors(&self, n: usize) -> Vec<Vec3> {
        let mut out = vec![Vec3::zeros(); n];
        self.accumulate(1.0, &mut out);
        out
    }
}

/// `λ_ij` and its derivative in the center distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDerivatives {
    pub lambda: f64,
    pub dlambda_dd: f64,
}

pub fn lambda_pair(pair: &PairGeometry, balls: &BallSet) -> PairDerivatives {
    let (ri, rj) = (balls[pair.i].radius, balls[pair.j].radius);
    let d = pair.distance;
    let delta = (ri * ri - rj * rj) / (d * d);
    PairDerivatives {
        lambda: pair.xi_i / ri + pair.xi_j / rj,
        dlambda_dd: (0.5 / ri + 0.5 / rj) - (0.5 / ri - 0.5 / rj) * delta,
    }
}

/// `λ_ij'` along `t`.
pub fn lambda_derivative(pair: &PairGeometry, balls: &BallSet, t: &Momentum) -> f64 {
    let pd = lambda_pair(pair, balls);
    pd.dlambda_dd * pair.u.dot(&(t.ball(pair.i) - t.ball(pair.j)))
}

/// Unit vector from `x_b` to `x_a` and the distance.
fn direction(balls: &BallSet, a: usize, b: usize) -> (Vec3, f64) {
    let v = balls[a].center - balls[b].center;
    let d = v.norm();
    (v / d, d)
}

/// Derivative of the exposed fraction of sphere `i`.
pub fn sigma_i_prime(dg: &Diagram, i: usize) -> LinearForm {
    let balls = &dg.balls;
    let ri = balls[i].radius;
    let mut form = LinearForm::default();
    for (&(a, b), &s) in &dg.measures.sigma_ij {
        if a != i && b != i {
            continue;
        }
        let j = if a == i { b } else { a };
        let (u, d) = direction(balls, i, j);
        let rj = balls[j].radius;
        let c = s / (4.0 * ri) * (1.0 - (ri * ri - rj * rj) / (d * d));
        form.add_difference(i, j, c * u);
    }
    for (t, &nu) in &dg.measures.nu_ijk {
        if !t.contains(&i) || nu == 0.0 {
            continue;
        }
        let h = dg.complex.triangles[t].half_length();
        let others: Vec<usize> = t.iter().copied().filter(|&m| m != i).collect();
        for (j, k) in [(others[0], others[1]), (others[1], others[0])] {
            let (uij, dij) = direction(balls, i, j);
            let (uik, _) = direction(balls, i, k);
            let uijk = perpendicular_unit(&uij, &uik);
            let c = h * nu / (2.0 * PI * ri * dij);
            form.add_difference(i, j, c * uijk);
        }
    }
    form
}

/// Rate of change of the angle of corner `c` on the circle of edge `(a, b)`,
/// times the circle radius.
fn corner_angular_rate(balls: &BallSet, pair: &PairGeometry, c: &CornerRef, point: &Vec3) -> Result<LinearForm> {
    let (a, b) = (pair.i, pair.j);
    let k = c.third(a, b);
    let frame = CircleFrame::new(pair);
    let tau = frame.u.cross(&(point - frame.center)) / frame.radius;
    let rows = [a, b, k].map(|m| point - balls[m].center);
    let n = Matrix3::from_rows(&[rows[0].transpose(), rows[1].transpose(), rows[2].transpose()]);
    let w =
        n.transpose()
            .lu()
            .solve(&tau)
            .ok_or(Error::DegenerateTriple(c.triangle[0], c.triangle[1], c.triangle[2]))?;
    let mut form = LinearForm::default();
    for (m, ball) in [a, b, k].into_iter().enumerate() {
        form.add(ball, w[m] * rows[m]);
    }
    form.add(a, -tau);
    form.add_difference(a, b, pair.xi_i / pair.distance * tau);
    Ok(form)
}

fn corner_point(dg: &Diagram, c: &CornerRef) -> Result<Vec3> {
    let g = dg.complex.triangles[&c.triangle]
        .geometry
        .ok_or(Error::DegenerateTriple(c.triangle[0], c.triangle[1], c.triangle[2]))?;
    Ok(g.point(c.side))
}

/// Derivative of the exposed fraction of the circle of edge `(i, j)`.
pub fn sigma_ij_prime(dg: &Diagram, i: usize, j: usize) -> Result<LinearForm> {
    let mut form = LinearForm::default();
    let Some(edge) = dg.complex.edge(i, j) else {
        return Ok(form);
    };
    let scale = 1.0 / (TAU * edge.pair.circle_radius);
    for arc in &edge.arcs {
        let Arc {
            start: Some(s),
            end: Some(e),
            ..
        } = arc
        else {
            continue;
        };
        let end = corner_angular_rate(&dg.balls, &edge.pair, e, &corner_point(dg, e)?)?;
        let start = corner_angular_rate(&dg.balls, &edge.pair, s, &corner_point(dg, s)?)?;
        form.extend_scaled(&end, scale);
        form.extend_scaled(&start, -scale);
    }
    Ok(form)
}

/// Derivatives of the three quadrangle areas of an exposed corner as linear
/// forms, in the order of the corner's triangle.
pub fn quadrangle_forms(dg: &Diagram, c: &CornerRef) -> Result<[LinearForm; 3]> {
    let balls = &dg.balls;
    let [i, j, k] = c.triangle;
    let data = &dg.corners[c];
    let pairs = [(i, j), (j, k), (k, i)];
    let dirs = pairs.map(|(a, b)| direction(balls, a, b));
    let radii = [i, j, k].map(|m| balls[m].radius);
    let qg = quad_area_gradient(&data.spherical, radii, dirs.map(|(_, d)| d))?;
    let mut out: [LinearForm; 3] = Default::default();
    for (row, coeffs) in [qg.p, qg.q, qg.s].iter().enumerate() {
        for (e, &(a, b)) in pairs.iter().enumerate() {
            out[row].add_difference(a, b, coeffs[e] * dirs[e].0);
        }
    }
    Ok(out)
}

/// Gradient of the weighted Gaussian curvature split into its four terms.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussGradient {
    pub d: Vec<Vec3>,
    pub e: Vec<Vec3>,
    pub f: Vec<Vec3>,
    pub h: Vec<Vec3>,
    pub g: Vec<Vec3>,
}

/// The four scalar terms of a directional derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermValues {
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub h: f64,
}

impl GaussGradient {
    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    /// Stacked gradient in `R^{3n}`.
    pub fn stacked(&self) -> Vec<f64> {
        self.g.iter().flat_map(|v| [v.x, v.y, v.z]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.g.iter().map(|v| v.amax()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.g.iter().map(|v| v.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn terms(&self, t: &Momentum) -> Result<TermValues> {
        check_dimension(self.len(), t)?;
        let dot = |vs: &[Vec3]| vs.iter().enumerate().map(|(b, v)| v.dot(&t.ball(b))).sum();
        Ok(TermValues {
            d: dot(&self.d),
            e: dot(&self.e),
            f: dot(&self.f),
            h: dot(&self.h),
        })
    }
}

fn check_dimension(n: usize, t: &Momentum) -> Result<()> {
    if t.len() != 3 * n {
        return Err(Error::DimensionMismatch {
            expected: 3 * n,
            got: t.len(),
        });
    }
    Ok(())
}

/// `⟨G, t⟩`.
pub fn directional_derivative(g: &GaussGradient, t: &Momentum) -> Result<f64> {
    check_dimension(g.len(), t)?;
    Ok(g.g.iter().enumerate().map(|(b, v)| v.dot(&t.ball(b))).sum())
}

pub fn term_d(dg: &Diagram) -> Vec<Vec3> {
    let n = dg.len();
    let mut out = vec![Vec3::zeros(); n];
    for i in 0..n {
        let w = dg.balls[i].weight;
        if w != 0.0 {
            sigma_i_prime(dg, i).accumulate(4.0 * PI * w, &mut out);
        }
    }
    out
}

pub fn term_e(dg: &Diagram) -> Result<Vec<Vec3>> {
    let mut out = vec![Vec3::zeros(); dg.len()];
    for &(i, j) in dg.measures.sigma_ij.keys() {
        let edge = &dg.complex.edges[&(i, j)];
        let lambda = lambda_pair(&edge.pair, &dg.balls).lambda;
        let w = dg.balls[i].weight + dg.balls[j].weight;
        sigma_ij_prime(dg, i, j)?.accumulate(-PI * w * lambda, &mut out);
    }
    Ok(out)
}

pub fn term_f(dg: &Diagram) -> Vec<Vec3> {
    let mut out = vec![Vec3::zeros(); dg.len()];
    for (&(i, j), &s) in &dg.measures.sigma_ij {
        let pair = &dg.complex.edges[&(i, j)].pair;
        let pd = lambda_pair(pair, &dg.balls);
        let w = dg.balls[i].weight + dg.balls[j].weight;
        let c = -PI * w * s * pd.dlambda_dd;
        out[i] += c * pair.u;
        out[j] -= c * pair.u;
    }
    out
}

pub fn term_h(dg: &Diagram) -> Result<Vec<Vec3>> {
    let mut out = vec![Vec3::zeros(); dg.len()];
    for c in dg.corners.keys() {
        let forms = quadrangle_forms(dg, c)?;
        for (m, form) in forms.iter().enumerate() {
            form.accumulate(dg.balls[c.triangle[m]].weight, &mut out);
        }
    }
    Ok(out)
}

pub fn gauss_gradient(dg: &Diagram) -> Result<GaussGradient> {
    let d = term_d(dg);
    let e = term_e(dg)?;
    let f = term_f(dg);
    let h = term_h(dg)?;
    let g = (0..dg.len()).map(|b| d[b] + e[b] + f[b] + h[b]).collect();
    Ok(GaussGradient { d, e, f, h, g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::weighted_gauss;
    use crate::geom::Ball;
    use crate::oracles::{fd_directional, FdConfig};

    fn pair(w0: f64, w1: f64) -> Diagram {
        Diagram::new(BallSet::new(vec![
            Ball::new([0.0; 3], 1.0, w0),
            Ball::new([1.0, 0.0, 0.0], 1.0, w1),
        ]))
        .unwrap()
    }

    #[test]
    fn lambda_examples() {
        let dg = pair(1.0, 1.0);
        let pd = lambda_pair(&dg.complex.edges[&(0, 1)].pair, &dg.balls);
        assert!((pd.lambda - 1.0).abs() < 1e-15);
        assert!((pd.dlambda_dd - 1.0).abs() < 1e-15);

        let balls = BallSet::new(vec![
            Ball::new([0.0; 3], 2.0, 1.0),
            Ball::new([2.0, 0.0, 0.0], 1.0, 1.0),
        ]);
        let p = crate::geom::pair_geometry(&balls, 0, 1).unwrap();
        let pd = lambda_pair(&p, &balls);
        assert!((pd.lambda - 1.125).abs() < 1e-15);
        let lam = |d: f64| {
            let xi = 0.5 * (d + 3.0 / d);
            xi / 2.0 + (d - xi)
        };
        let fd = (lam(2.0 + 1e-6) - lam(2.0 - 1e-6)) / 2e-6;
        assert!((pd.dlambda_dd - fd).abs() < 1e-8);
    }

    #[test]
    fn separating_pair_terms() {
        // ball 0 moves away from ball 1 at unit rate: d' = 1
        let dg = pair(1.0, 1.0);
        let t = Momentum::new(vec![-1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let s0 = sigma_i_prime(&dg, 0).apply(&t);
        assert!((s0 - 0.25).abs() < 1e-14);
        let p = &dg.complex.edges[&(0, 1)].pair;
        assert!((lambda_derivative(p, &dg.balls, &t) - 1.0).abs() < 1e-14);
        let g = gauss_gradient(&dg).unwrap();
        let terms = g.terms(&t).unwrap();
        assert!((terms.d - 2.0 * PI).abs() < 1e-12);
        assert!((terms.f + 2.0 * PI).abs() < 1e-12);
        assert_eq!(terms.e, 0.0);
        assert_eq!(terms.h, 0.0);
        assert!(g.max_abs() < 1e-12);
    }

    #[test]
    fn weighted_pair_matches_fd() {
        let dg = pair(1.0, 0.0);
        let g = gauss_gradient(&dg).unwrap();
        let t = Momentum::new(vec![-0.3, 0.2, 0.1, 0.5, -0.4, 0.2]);
        let fd = fd_directional(
            &|b: &BallSet| Ok(weighted_gauss(&Diagram::new(b.clone())?)),
            &dg.balls,
            &t,
            &FdConfig::default(),
        )
        .unwrap();
        let an = directional_derivative(&g, &t).unwrap();
        assert!((an - fd).abs() < 1e-6 * fd.abs().max(1.0), "{an} vs {fd}");
    }

    #[test]
    fn dimension_checked() {
        let dg = pair(1.0, 1.0);
        let g = gauss_gradient(&dg).unwrap();
        assert!(matches!(
            directional_derivative(&g, &Momentum::zeros(3)),
            Err(Error::DimensionMismatch { expected: 6, got: 9 })
        ));
    }
}
