#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spacefill::alpha::build_alpha_complex;
use spacefill::diagnostics::scan_general_position;
use spacefill::{Ball, BallSet, Momentum};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Minimum distance from any general-position violation, relative to the
/// largest radius.
pub const GENERIC_MARGIN: f64 = 1e-3;

/// Random overlapping balls with radii in [0.8, 1.5], rejected until every
/// residual exceeds the generic margin.
pub fn random_generic(rng: &mut ChaCha8Rng, n: usize, weights: impl Fn(&mut ChaCha8Rng) -> f64) -> BallSet {
    let side = 1.2 * (n as f64).cbrt() + 0.6;
    loop {
        let balls: BallSet = (0..n)
            .map(|_| {
                let c = [
                    rng.random_range(0.0..side),
                    rng.random_range(0.0..side),
                    rng.random_range(0.0..side),
                ];
                let r = rng.random_range(0.8..1.5);
                Ball::new(c, r, weights(rng))
            })
            .collect();
        let Ok(cx) = build_alpha_complex(&balls) else {
            continue;
        };
        let scan = scan_general_position(&balls, &cx, 0.0);
        if scan.min_residual > GENERIC_MARGIN * balls.max_radius() {
            return balls;
        }
    }
}

pub fn unit_weights(_: &mut ChaCha8Rng) -> f64 {
    1.0
}

pub fn signed_weights(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-2.0..2.0)
}

pub fn random_momentum(rng: &mut ChaCha8Rng, n: usize) -> Momentum {
    Momentum::new((0..3 * n).map(|_| rng.random_range(-1.0..1.0)).collect())
}
