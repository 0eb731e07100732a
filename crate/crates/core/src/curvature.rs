//! Weighted volume, area, mean curvature and Gaussian curvature.
//!
//! All sums run over unordered simplices: every sphere patch, every exposed
//! circle and every exposed corner contributes once.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::diagram::Diagram;
use crate::gradient::lambda_pair;
use crate::measures::nu_i_mc;

/// Contributions to the weighted Gaussian curvature.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GaussBreakdown {
    pub patches: f64,
    pub arcs: f64,
    pub corners: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntrinsicVolumes {
    pub volume: f64,
    pub volume_std_error: f64,
    pub area: f64,
    pub mean: f64,
    pub gauss: f64,
    pub gauss_breakdown: GaussBreakdown,
}

pub fn weighted_gauss_breakdown(dg: &Diagram) -> GaussBreakdown {
    let balls = &dg.balls;
    let m = &dg.measures;
    let patches = 4.0 * PI * balls.iter().zip(&m.sigma_i).map(|(b, s)| b.weight * s).sum::<f64>();
    let mut arcs = 0.0;
    for (&(i, j), &s) in &m.sigma_ij {
        let pd = lambda_pair(&dg.complex.edges[&(i, j)].pair, balls);
        arcs -= PI * (balls[i].weight + balls[j].weight) * s * pd.lambda;
    }
    let mut corners = 0.0;
    for c in dg.corners.values() {
        let t = c.corner.triangle;
        corners += (0..3).map(|m| balls[t[m]].weight * c.spherical.quads[m]).sum::<f64>();
    }
    GaussBreakdown { patches, arcs, corners }
}

pub fn weighted_gauss(dg: &Diagram) -> f64 {
    let b = weighted_gauss_breakdown(dg);
    b.patches + b.arcs + b.corners
}

pub fn weighted_area(dg: &Diagram) -> f64 {
    4.0 * PI
        * dg.balls
            .iter()
            .zip(&dg.measures.sigma_i)
            .map(|(b, s)| b.weight * s * b.radius * b.radius)
            .sum::<f64>()
}

pub fn weighted_mean(dg: &Diagram) -> f64 {
    let balls = &dg.balls;
    let m = &dg.measures;
    let patches = 4.0
        * PI
        * balls
            .iter()
            .zip(&m.sigma_i)
            .map(|(b, s)| b.weight * s * b.radius)
            .sum::<f64>();
    let mut arcs = 0.0;
    for (&(i, j), &s) in &m.sigma_ij {
        let pair = &dg.complex.edges[&(i, j)].pair;
        let phi = pair.normal_angle.unwrap_or(0.0);
        arcs += 0.5 * (balls[i].weight + balls[j].weight) * s * phi * pair.circle_radius;
    }
    patches - PI * arcs
}

/// Weighted volume from Monte Carlo volume fractions, with standard error.
pub fn weighted_volume(dg: &Diagram, samples: u64, seed: u64) -> (f64, f64) {
    let parts: Vec<(f64, f64)> = (0..dg.len())
        .into_par_iter()
        .map(|i| {
            let b = &dg.balls[i];
            if b.weight == 0.0 {
                return (0.0, 0.0);
            }
            let (nu, se) = nu_i_mc(&dg.balls, i, samples, seed);
            let scale = 4.0 / 3.0 * PI * b.weight * b.radius.powi(3);
            (scale * nu, scale * se)
        })
        .collect();
    let value = parts.iter().map(|p| p.0).sum::<f64>();
    let var = parts.iter().map(|p| p.1 * p.1).sum::<f64>();
    (value, var.sqrt())
}

pub fn intrinsic_volumes(dg: &Diagram, samples: u64, seed: u64) -> IntrinsicVolumes {
    let (volume, volume_std_error) = weighted_volume(dg, samples, seed);
    let gauss_breakdown = weighted_gauss_breakdown(dg);
    IntrinsicVolumes {
        volume,
        volume_std_error,
        area: weighted_area(dg),
        mean: weighted_mean(dg),
        gauss: gauss_breakdown.patches + gauss_breakdown.arcs + gauss_breakdown.corners,
        gauss_breakdown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Ball, BallSet};

    fn diagram(balls: Vec<Ball>) -> Diagram {
        Diagram::new(BallSet::new(balls)).unwrap()
    }

    #[test]
    fn single_ball() {
        let dg = diagram(vec![Ball::new([0.0; 3], 1.0, 1.0)]);
        assert!((weighted_gauss(&dg) - 4.0 * PI).abs() < 1e-14);
        assert!((weighted_area(&dg) - 4.0 * PI).abs() < 1e-14);
        assert!((weighted_mean(&dg) - 4.0 * PI).abs() < 1e-14);
        let (v, se) = weighted_volume(&dg, 1000, 3);
        assert!((v - 4.0 / 3.0 * PI).abs() < 1e-14);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn overlapping_pair() {
        let dg = diagram(vec![
            Ball::new([0.0; 3], 1.0, 1.0),
            Ball::new([1.0, 0.0, 0.0], 1.0, 1.0),
        ]);
        assert!((weighted_gauss(&dg) - 4.0 * PI).abs() < 1e-12);
        assert!((weighted_area(&dg) - 6.0 * PI).abs() < 1e-12);
        let expected = 6.0 * PI - PI * (PI / 3.0) * (3f64.sqrt() / 2.0);
        assert!((weighted_mean(&dg) - expected).abs() < 1e-12);
        assert!((weighted_mean(&dg) - 16.000446542656).abs() < 1e-9);
        let (v, se) = weighted_volume(&dg, 100_000, 5);
        assert!((v - 4.0 / 3.0 * PI * 2.0 * 0.84375).abs() < 3.0 * se);
    }

    #[test]
    fn disjoint_pair_and_linearity() {
        let dg = diagram(vec![
            Ball::new([0.0; 3], 1.0, 2.0),
            Ball::new([3.0, 0.0, 0.0], 1.0, 3.0),
        ]);
        assert!((weighted_gauss(&dg) - 20.0 * PI).abs() < 1e-12);
        assert!((weighted_mean(&dg) - 20.0 * PI).abs() < 1e-12);

        let balls = BallSet::new(vec![
            Ball::new([0.0; 3], 1.0, 0.7),
            Ball::new([1.1, 0.2, 0.0], 0.9, -0.4),
            Ball::new([0.4, 1.0, 0.3], 1.2, 1.3),
        ]);
        let w: Vec<f64> = balls.iter().map(|b| 2.0 * b.weight).collect();
        let a = Diagram::new(balls.clone()).unwrap();
        let b = Diagram::new(balls.with_weights(&w)).unwrap();
        assert_eq!(2.0 * weighted_gauss(&a), weighted_gauss(&b));
        assert_eq!(2.0 * weighted_area(&a), weighted_area(&b));
    }
}
