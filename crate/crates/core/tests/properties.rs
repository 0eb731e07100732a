mod common;

use common::*;
use proptest::prelude::*;
use spacefill::curvature::{weighted_area, weighted_gauss, weighted_mean};
use spacefill::geom::Vec3;
use spacefill::io::{parse_diagram_str, write_diagram};
use spacefill::oracles::mc_boundary_integrals;
use spacefill::sphtrig::SphericalCorner;
use spacefill::{Ball, BallSet, Diagram, Momentum};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, -1.0..1.0f64, Just(0.0)]
}

fn unit() -> impl Strategy<Value = Vec3> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("nonzero", |(x, y, z)| x * x + y * y + z * z > 1e-2)
        .prop_map(|(x, y, z)| Vec3::new(x, y, z).normalize())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagram_text_round_trips(rows in prop::collection::vec((finite(), finite(), finite(), 1e-6..1e3f64, finite()), 0..12)) {
        let balls: BallSet = rows.iter().map(|&(x, y, z, r, w)| Ball::new([x, y, z], r, w)).collect();
        let back = parse_diagram_str(&write_diagram(&balls)).unwrap();
        prop_assert_eq!(back, balls);
    }

    #[test]
    fn corner_area_is_symmetric_and_split(n0 in unit(), n1 in unit(), n2 in unit()) {
        let corner = SphericalCorner::from_normals(&[n0, n1, n2]);
        prop_assume!(corner.is_ok());
        let c = corner.unwrap();
        prop_assume!(c.area > 1e-3);
        let d = SphericalCorner::from_normals(&[n1, n2, n0]).unwrap();
        prop_assert!(c.area > 0.0 && c.area < 2.0 * std::f64::consts::PI);
        prop_assert!((c.area - d.area).abs() < 1e-12);
        prop_assert!((c.quads.iter().sum::<f64>() - c.area).abs() < 1e-9);
        for m in 0..3 {
            prop_assert!((c.quads[m] - d.quads[(m + 2) % 3]).abs() < 1e-9);
        }
    }

    #[test]
    fn measures_are_rigid_invariant(seed in any::<u64>(), angle in -3.0..3.0f64, shift in (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64)) {
        let mut r = rng(seed);
        let n = 2 + (seed % 6) as usize;
        let balls = random_generic(&mut r, n, signed_weights);
        let rot = nalgebra::Rotation3::from_axis_angle(&Vec3::z_axis(), angle);
        let offset = Vec3::new(shift.0, shift.1, shift.2);
        let moved: BallSet = balls
            .iter()
            .map(|b| Ball { center: rot * b.center + offset, ..*b })
            .collect();
        let (a, b) = (Diagram::new(balls).unwrap(), Diagram::new(moved).unwrap());
        prop_assert!((weighted_gauss(&a) - weighted_gauss(&b)).abs() < 1e-9);
        prop_assert!((weighted_area(&a) - weighted_area(&b)).abs() < 1e-9);
        prop_assert!((weighted_mean(&a) - weighted_mean(&b)).abs() < 1e-9);
    }

    #[test]
    fn unit_weight_gauss_is_quantized(seed in any::<u64>()) {
        let mut r = rng(seed);
        let balls = random_generic(&mut r, 2 + (seed % 9) as usize, unit_weights);
        let k = weighted_gauss(&Diagram::new(balls).unwrap()) / (2.0 * std::f64::consts::PI);
        prop_assert!((k - k.round()).abs() < 1e-9);
        prop_assert!(k.round() as i64 % 2 == 0);
    }

    #[test]
    fn displacement_is_linear(seed in any::<u64>(), tau in -2.0..2.0f64) {
        let mut r = rng(seed);
        let balls = random_generic(&mut r, 3, unit_weights);
        let t = random_momentum(&mut r, 3);
        let there = balls.displaced(&t, tau).unwrap();
        let back = there.displaced(&t, -tau).unwrap();
        for (a, b) in balls.iter().zip(back.iter()) {
            prop_assert!((a.center - b.center).norm() < 1e-12);
        }
        prop_assert!(balls.displaced(&Momentum::zeros(2), 1.0).is_err());
    }
}

/// Quadrupling the sample count shrinks the spread of the estimate over
/// independent seeds by about half.
#[test]
fn monte_carlo_error_shrinks_at_root_n() {
    let balls = BallSet::new(vec![
        Ball::new([0.0; 3], 1.0, 1.0),
        Ball::new([1.0, 0.0, 0.0], 1.0, 1.0),
    ]);
    let spread = |samples: u64| {
        let est: Vec<f64> = (0..200)
            .map(|s| mc_boundary_integrals(&balls, samples, s)[0].sigma)
            .collect();
        let mean = est.iter().sum::<f64>() / est.len() as f64;
        (est.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (est.len() - 1) as f64).sqrt()
    };
    let (coarse, fine) = (spread(2000), spread(8000));
    assert!(fine <= 0.6 * coarse, "{fine} vs {coarse}");
    let one = mc_boundary_integrals(&balls, 2000, 1)[0];
    let four = mc_boundary_integrals(&balls, 8000, 1)[0];
    assert!(four.sigma_std_error <= 0.6 * one.sigma_std_error);
}
