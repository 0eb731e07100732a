//! Independent checks: central finite differences and Monte Carlo sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{BallSet, Momentum, Vec3};

/// Samples drawn from one random stream before reseeking.
pub const MC_CHUNK: u64 = 4096;

/// 32-bit words consumed per sample: five `f64` draws.
const WORDS_PER_SAMPLE: u128 = 10;

/// Random stream for chunk `chunk` of ball `ball`. Streams depend only on
/// `(seed, ball, chunk)`, so any split of the work gives identical samples.
pub fn sample_stream(seed: u64, ball: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(ball);
    rng.set_word_pos(chunk as u128 * MC_CHUNK as u128 * WORDS_PER_SAMPLE);
    rng
}

fn gaussian_triple(rng: &mut ChaCha8Rng) -> Vec3 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    let u3: f64 = 1.0 - rng.random::<f64>();
    let u4: f64 = rng.random();
    let r1 = (-2.0 * u1.ln()).sqrt();
    let r2 = (-2.0 * u3.ln()).sqrt();
    let t1 = std::f64::consts::TAU * u2;
    let t2 = std::f64::consts::TAU * u4;
    Vec3::new(r1 * t1.cos(), r1 * t1.sin(), r2 * t2.cos())
}

/// Uniform point in the unit ball; consumes exactly five draws.
pub fn unit_ball_point(rng: &mut ChaCha8Rng) -> Vec3 {
    let g = gaussian_triple(rng);
    let s: f64 = rng.random();
    g.normalize() * s.cbrt()
}

/// Uniform point on the unit sphere; consumes exactly five draws.
pub fn unit_sphere_point(rng: &mut ChaCha8Rng) -> Vec3 {
    let g = gaussian_triple(rng);
    let _: f64 = rng.random();
    g.normalize()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    pub step: f64,
    pub rel_tol: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            step: 1e-5,
            rel_tol: 1e-5,
        }
    }
}

impl FdConfig {
    /// `|analytic - reference| / max(1, |reference|)`.
    pub fn relative_error(analytic: f64, reference: f64) -> f64 {
        (analytic - reference).abs() / reference.abs().max(1.0)
    }

    pub fn accepts(&self, analytic: f64, reference: f64) -> bool {
        Self::relative_error(analytic, reference) <= self.rel_tol
    }
}

fn evaluate<F>(f: &F, balls: &BallSet, t: &Momentum, h: f64) -> Result<f64>
where
    F: Fn(&BallSet) -> Result<f64>,
{
    let moved = balls.displaced(t, h)?;
    f(&moved).map_err(|e| {
        if e.is_degenerate() {
            Error::OracleDegenerate(e.to_string())
        } else {
            e
        }
    })
}

/// Central difference of `f` along `t`.
pub fn fd_directional<F>(f: &F, balls: &BallSet, t: &Momentum, cfg: &FdConfig) -> Result<f64>
where
    F: Fn(&BallSet) -> Result<f64>,
{
    let plus = evaluate(f, balls, t, cfg.step)?;
    let minus = evaluate(f, balls, t, -cfg.step)?;
    Ok((plus - minus) / (2.0 * cfg.step))
}

/// Componentwise central differences.
pub fn fd_gradient<F>(f: &F, balls: &BallSet, cfg: &FdConfig) -> Result<Vec<f64>>
where
    F: Fn(&BallSet) -> Result<f64> + Sync,
{
    let m = 3 * balls.len();
    (0..m)
        .into_par_iter()
        .map(|c| {
            let mut t = vec![0.0; m];
            t[c] = 1.0;
            fd_directional(f, balls, &Momentum::new(t), cfg)
        })
        .collect()
}

/// Monte Carlo exposure estimate for one sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereEstimate {
    pub area: f64,
    pub area_std_error: f64,
    pub sigma: f64,
    pub sigma_std_error: f64,
}

/// Uniform samples on every sphere, counted as exposed when they lie outside
/// all other balls.
pub fn mc_boundary_integrals(balls: &BallSet, samples: u64, seed: u64) -> Vec<SphereEstimate> {
    (0..balls.len())
        .into_par_iter()
        .map(|i| {
            let b = &balls[i];
            let chunks = samples.div_ceil(MC_CHUNK);
            let hits: u64 = (0..chunks)
                .into_par_iter()
                .map(|chunk| {
                    let mut rng = sample_stream(seed, i as u64, chunk);
                    let count = MC_CHUNK.min(samples - chunk * MC_CHUNK);
                    let mut hits = 0u64;
                    for _ in 0..count {
                        let p = b.center + b.radius * unit_sphere_point(&mut rng);
                        let exposed = balls
                            .iter()
                            .enumerate()
                            .all(|(l, o)| l == i || (p - o.center).norm_squared() >= o.radius * o.radius);
                        if exposed {
                            hits += 1;
                        }
                    }
                    hits
                })
                .sum();
            let p = hits as f64 / samples as f64;
            let se = (p * (1.0 - p) / samples as f64).sqrt();
            let full = 4.0 * std::f64::consts::PI * b.radius * b.radius;
            SphereEstimate {
                area: p * full,
                area_std_error: se * full,
                sigma: p,
                sigma_std_error: se,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Ball;

    #[test]
    fn streams_are_split_independent() {
        let mut a = sample_stream(3, 1, 2);
        let mut whole = sample_stream(3, 1, 0);
        for _ in 0..2 * MC_CHUNK {
            unit_ball_point(&mut whole);
        }
        assert_eq!(unit_ball_point(&mut a), unit_ball_point(&mut whole));
    }

    #[test]
    fn fd_of_constant_and_linear() {
        let balls: BallSet = vec![Ball::new([0.0; 3], 1.0, 1.0), Ball::new([1.0, 0.0, 0.0], 1.0, 1.0)]
            .into_iter()
            .collect();
        let cfg = FdConfig::default();
        let t = Momentum::new(vec![0.3, 0.1, 0.0, -0.2, 0.4, 1.0]);
        assert_eq!(fd_directional(&|_: &BallSet| Ok(2.5), &balls, &t, &cfg).unwrap(), 0.0);
        let dist = |b: &BallSet| Ok((b[0].center - b[1].center).norm());
        let sep = Momentum::new(vec![-0.5, 0.0, 0.0, 0.5, 0.0, 0.0]);
        assert!((fd_directional(&dist, &balls, &sep, &cfg).unwrap() - 1.0).abs() < 1e-8);
        let g = fd_gradient(&dist, &balls, &cfg).unwrap();
        for axis in 0..3 {
            assert!((g[axis] + g[3 + axis]).abs() < 1e-9);
        }
    }

    #[test]
    fn sphere_exposure_of_pair() {
        let two: BallSet = vec![Ball::new([0.0; 3], 1.0, 1.0), Ball::new([1.0, 0.0, 0.0], 1.0, 1.0)]
            .into_iter()
            .collect();
        let est = mc_boundary_integrals(&two, 100_000, 11);
        for e in est {
            assert!((e.sigma - 0.75).abs() < 3.0 * e.sigma_std_error);
        }
        let one: BallSet = vec![Ball::new([0.0; 3], 1.0, 1.0)].into_iter().collect();
        let est = mc_boundary_integrals(&one, 1000, 11);
        assert_eq!((est[0].sigma, est[0].sigma_std_error), (1.0, 0.0));
    }
}
