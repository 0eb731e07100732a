//! General-position checks, topological event classification and probing of
//! gradient jumps along a motion path.

use serde::Serialize;

use crate::alpha::{build_alpha_complex, AlphaComplex, Betti, Violation};
use crate::curvature::weighted_gauss;
use crate::diagram::Diagram;
use crate::error::{Condition, Error, Result};
use crate::geom::{triple_orthocenter, Ball, BallSet, Momentum, Side, Vec3};
use crate::gradient::gauss_gradient;

/// All residuals below a tolerance, plus the smallest residual overall.
#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    /// Sorted by increasing residual.
    pub violations: Vec<Violation>,
    pub min_residual: f64,
}

/// Residuals of every pair, triple and quadruple of spheres, and of every
/// vertex of the power diagram, against the corresponding degenerate state.
pub fn scan_general_position(balls: &BallSet, cx: &AlphaComplex, tol: f64) -> Scan {
    let n = balls.len();
    let mut violations = Vec::new();
    let mut min_residual = f64::INFINITY;
    let mut record = |condition: Condition, simplex: Vec<usize>, residual: f64| {
        min_residual = min_residual.min(residual);
        if residual < tol {
            violations.push(Violation {
                condition,
                simplex,
                residual,
            });
        }
    };

    for i in 0..n {
        for j in i + 1..n {
            let (bi, bj) = (&balls[i], &balls[j]);
            let d = (bi.center - bj.center).norm();
            let res = (d - (bi.radius + bj.radius))
                .abs()
                .min((d - (bi.radius - bj.radius).abs()).abs());
            record(Condition::II, vec![i, j], res);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (bi, bj, bk) = (&balls[i], &balls[j], &balls[k]);
                let Some((z, axis, h2)) = triple_orthocenter(bi, bj, bk) else {
                    continue;
                };
                let rmax = bi.radius.max(bj.radius).max(bk.radius);
                record(Condition::II, vec![i, j, k], h2.abs() / (2.0 * rmax));
                if h2 <= tol * tol {
                    continue;
                }
                let h = h2.sqrt();
                for p in [z - h * axis, z + h * axis] {
                    for l in 0..n {
                        if l == i || l == j || l == k {
                            continue;
                        }
                        let res = ((p - balls[l].center).norm() - balls[l].radius).abs();
                        let mut s = vec![i, j, k, l];
                        s.sort_unstable();
                        record(Condition::II, s, res);
                    }
                }
            }
        }
    }
    for (t, info) in &cx.triangles {
        let iv = info.interval;
        let mut five = |extra: &[Option<usize>], res: f64| {
            let mut s = t.to_vec();
            s.extend(extra.iter().flatten());
            s.sort_unstable();
            record(Condition::I, s, res);
        };
        if iv.lo.is_finite() && iv.hi.is_finite() {
            five(&[iv.lo_ball, iv.hi_ball], iv.hi - iv.lo);
        }
        if iv.lo.is_finite() && iv.lo_gap.is_finite() {
            five(&[iv.lo_ball], iv.lo_gap);
        }
        if iv.hi.is_finite() && iv.hi_gap.is_finite() {
            five(&[iv.hi_ball], iv.hi_gap);
        }
    }
    violations.sort_by(|a, b| {
        (a.condition, &a.simplex)
            .cmp(&(b.condition, &b.simplex))
            .then(a.residual.total_cmp(&b.residual))
    });
    violations.dedup_by(|a, b| a.simplex == b.simplex && a.condition == b.condition);
    violations.sort_by(|a, b| {
        a.residual
            .total_cmp(&b.residual)
            .then_with(|| a.simplex.cmp(&b.simplex))
    });
    Scan {
        violations,
        min_residual,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventClass {
    MergeSplitComponents,
    CloseBreakLoop,
    FillOpenTunnel,
    CompletePunctureShell,
    StartDrownVoid,
    InteriorNongeneric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportedViolation {
    pub condition: Condition,
    pub simplex: Vec<usize>,
    pub residual: f64,
    pub event: Option<EventClass>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyReport {
    pub violations: Vec<ReportedViolation>,
    pub min_residual: f64,
}

/// Check a ball set for near-violations of general position within `tol`
/// (a length) and classify the sphere-tangency events.
pub fn general_position_check(balls: &BallSet, tol: f64) -> Result<DegeneracyReport> {
    let cx = build_alpha_complex(balls)?;
    let scan = scan_general_position(balls, &cx, tol);
    let violations = scan
        .violations
        .into_iter()
        .map(|v| {
            let event = match v.condition {
                Condition::II => classify_event(balls, &v, tol).ok(),
                Condition::I => None,
            };
            ReportedViolation {
                condition: v.condition,
                simplex: v.simplex,
                residual: v.residual,
                event,
            }
        })
        .collect();
    Ok(DegeneracyReport {
        violations,
        min_residual: scan.min_residual,
    })
}

/// Barycentric coordinates of `p` with respect to `verts` (2, 3 or 4
/// points), computed in their affine hull.
fn barycentric(verts: &[Vec3], p: &Vec3) -> Option<Vec<f64>> {
    let base = verts[0];
    let m = verts.len() - 1;
    let e: Vec<Vec3> = verts[1..].iter().map(|v| v - base).collect();
    let q = p - base;
    let mut gram = nalgebra::DMatrix::zeros(m, m);
    let mut rhs = nalgebra::DVector::zeros(m);
    for a in 0..m {
        rhs[a] = e[a].dot(&q);
        for b in 0..m {
            gram[(a, b)] = e[a].dot(&e[b]);
        }
    }
    let sol = gram.lu().solve(&rhs)?;
    let mut out = vec![1.0 - sol.sum()];
    out.extend(sol.iter());
    Some(out)
}

/// Point of equal power (zero) to all balls of a degenerate simplex and
/// whether it lies inside the simplex of centers.
fn touching_point(balls: &BallSet, s: &[usize]) -> Result<(Vec3, bool)> {
    let b: Vec<&Ball> = s.iter().map(|&m| &balls[m]).collect();
    match s.len() {
        2 => {
            let v = b[1].center - b[0].center;
            let d = v.norm();
            let external = (d - (b[0].radius + b[1].radius)).abs() <= (d - (b[0].radius - b[1].radius).abs()).abs();
            if external {
                Ok((b[0].center + b[0].radius / d * v, true))
            } else {
                let (big, small) = if b[0].radius >= b[1].radius {
                    (b[0], b[1])
                } else {
                    (b[1], b[0])
                };
                let dir = (small.center - big.center).normalize();
                Ok((big.center + big.radius * dir, false))
            }
        }
        3 => {
            let (z, _, _) = triple_orthocenter(b[0], b[1], b[2])
                .ok_or_else(|| Error::Unclassifiable(format!("collinear centers {s:?}")))?;
            let bc = barycentric(&[b[0].center, b[1].center, b[2].center], &z)
                .ok_or_else(|| Error::Unclassifiable(format!("flat triangle {s:?}")))?;
            Ok((z, bc.iter().all(|&w| w > 0.0)))
        }
        4 => {
            let x0 = b[0].center;
            let p0 = x0.norm_squared() - b[0].radius.powi(2);
            let rows: Vec<Vec3> = (1..4).map(|m| 2.0 * (b[m].center - x0)).collect();
            let rhs = Vec3::from_iterator((1..4).map(|m| b[m].center.norm_squared() - b[m].radius.powi(2) - p0));
            let a = nalgebra::Matrix3::from_rows(&[rows[0].transpose(), rows[1].transpose(), rows[2].transpose()]);
            let y = a
                .lu()
                .solve(&rhs)
                .ok_or_else(|| Error::Unclassifiable(format!("coplanar centers {s:?}")))?;
            let verts: Vec<Vec3> = b.iter().map(|x| x.center).collect();
            let bc = barycentric(&verts, &y).ok_or_else(|| Error::Unclassifiable(format!("flat tetrahedron {s:?}")))?;
            Ok((y, bc.iter().all(|&w| w > 0.0)))
        }
        _ => Err(Error::Unclassifiable(format!("unexpected simplex {s:?}"))),
    }
}

fn betti_with_radius_change(balls: &BallSet, s: &[usize], delta: f64) -> Result<Betti> {
    let changed: BallSet = balls
        .iter()
        .enumerate()
        .map(|(m, b)| {
            if s.contains(&m) {
                Ball {
                    radius: b.radius + delta,
                    ..*b
                }
            } else {
                *b
            }
        })
        .collect();
    Ok(build_alpha_complex(&changed)?.betti())
}

/// Classify a sphere-tangency violation by the topological change it causes
/// when the balls of the simplex grow through it.
pub fn classify_event(balls: &BallSet, v: &Violation, tol: f64) -> Result<EventClass> {
    if v.condition != Condition::II {
        return Err(Error::Unclassifiable("not a sphere tangency".into()));
    }
    let s = &v.simplex;
    let (point, centered) = touching_point(balls, s)?;
    let margin = tol.max(balls.length_tolerance());
    let mut on_boundary = true;
    for (l, b) in balls.iter().enumerate() {
        if s.contains(&l) {
            continue;
        }
        let gap = (point - b.center).norm() - b.radius;
        if gap.abs() <= margin {
            return Err(Error::Unclassifiable(format!(
                "touching point of {s:?} lies on sphere {l}"
            )));
        }
        if gap < 0.0 {
            on_boundary = false;
        }
    }
    if !on_boundary || !centered {
        return Ok(EventClass::InteriorNongeneric);
    }
    let delta = (1e3 * v.residual).max(1e-6 * balls.max_radius());
    let before = betti_with_radius_change(balls, s, -delta)?;
    let after = betti_with_radius_change(balls, s, delta)?;
    let class = match s.len() {
        2 if before.b0 != after.b0 => EventClass::MergeSplitComponents,
        2 if before.b1 != after.b1 => EventClass::CloseBreakLoop,
        3 if before.b1 != after.b1 => EventClass::FillOpenTunnel,
        3 if before.b2 != after.b2 => EventClass::CompletePunctureShell,
        4 if before.b2 != after.b2 => EventClass::StartDrownVoid,
        _ => {
            return Err(Error::Unclassifiable(format!(
                "no change in Betti numbers across {s:?}"
            )))
        }
    };
    Ok(class)
}

/// One state sampled along a probe path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeSample {
    pub tau: f64,
    pub gauss: Option<f64>,
    pub grad_norm: Option<f64>,
    pub defined: bool,
    pub error: Option<String>,
}

/// A crossing of a non-generic state with one-sided limits on both sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeEvent {
    pub tau: f64,
    pub gauss_left: Option<f64>,
    pub gauss_right: Option<f64>,
    pub grad_left: Option<Vec<f64>>,
    pub grad_right: Option<Vec<f64>>,
}

impl ProbeEvent {
    pub fn gauss_jump(&self) -> Option<f64> {
        Some(self.gauss_right? - self.gauss_left?)
    }

    /// `‖G+ - G-‖ / max(1, ‖G-‖)`.
    pub fn grad_jump(&self) -> Option<f64> {
        let (l, r) = (self.grad_left.as_ref()?, self.grad_right.as_ref()?);
        let diff = l.iter().zip(r).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let base = l.iter().map(|a| a * a).sum::<f64>().sqrt();
        Some(diff / base.max(1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub samples: Vec<ProbeSample>,
    pub events: Vec<ProbeEvent>,
}

fn evaluate(balls: &BallSet, t: &Momentum, tau: f64) -> Result<(f64, Vec<f64>)> {
    let dg = Diagram::new(balls.displaced(t, tau)?)?;
    let k = weighted_gauss(&dg);
    let g = gauss_gradient(&dg)?;
    Ok((k, g.stacked()))
}

/// Combinatorial type of a state: Delaunay and alpha simplices and exposed
/// corners.
fn signature(balls: &BallSet, t: &Momentum, tau: f64) -> Option<Vec<(Vec<usize>, bool, bool)>> {
    let moved = balls.displaced(t, tau).ok()?;
    let cx = build_alpha_complex(&moved).ok()?;
    let mut sig: Vec<(Vec<usize>, bool, bool)> = cx
        .simplices()
        .into_iter()
        .map(|s| (s.vertices, s.in_alpha, false))
        .collect();
    for (tri, info) in &cx.triangles {
        for side in Side::BOTH {
            if info.exposed[side.index()] {
                sig.push((tri.to_vec(), true, side == Side::Plus));
            }
        }
    }
    Some(sig)
}

/// Sample `K` and its gradient along `x + τ t` and report one-sided limits
/// at every change of combinatorial type or degenerate sample.
pub fn gradient_jump_probe(
    balls: &BallSet,
    t: &Momentum,
    tau_min: f64,
    tau_max: f64,
    steps: usize,
) -> Result<ProbeReport> {
    if t.len() != 3 * balls.len() {
        return Err(Error::DimensionMismatch {
            expected: 3 * balls.len(),
            got: t.len(),
        });
    }
    let steps = steps.max(1);
    let taus: Vec<f64> = (0..steps)
        .map(|s| {
            if steps == 1 {
                tau_min
            } else {
                tau_min + (tau_max - tau_min) * s as f64 / (steps - 1) as f64
            }
        })
        .collect();
    let samples: Vec<ProbeSample> = taus
        .iter()
        .map(|&tau| match evaluate(balls, t, tau) {
            Ok((k, g)) => ProbeSample {
                tau,
                gauss: Some(k),
                grad_norm: Some(g.iter().map(|a| a * a).sum::<f64>().sqrt()),
                defined: true,
                error: None,
            },
            Err(e) => ProbeSample {
                tau,
                gauss: None,
                grad_norm: None,
                defined: false,
                error: Some(e.to_string()),
            },
        })
        .collect();

    let span = (tau_max - tau_min).abs().max(f64::MIN_POSITIVE);
    let delta = 1e-4 * span;
    let mut crossings: Vec<f64> = Vec::new();
    for w in taus.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let sa = signature(balls, t, a);
        if sa == signature(balls, t, b) {
            continue;
        }
        for _ in 0..200 {
            if b - a <= 1e-14 * span {
                break;
            }
            let mid = 0.5 * (a + b);
            if signature(balls, t, mid) == sa {
                a = mid;
            } else {
                b = mid;
            }
        }
        crossings.push(0.5 * (a + b));
    }
    for s in &samples {
        if !s.defined && crossings.iter().all(|c| (c - s.tau).abs() > delta) {
            crossings.push(s.tau);
        }
    }
    crossings.sort_by(f64::total_cmp);

    let limit = |tau: f64, sign: f64| -> (Option<f64>, Option<Vec<f64>>) {
        let near = evaluate(balls, t, tau + sign * delta);
        let far = evaluate(balls, t, tau + sign * 2.0 * delta);
        match (near, far) {
            (Ok((k1, g1)), Ok((k2, g2))) => (
                Some(2.0 * k1 - k2),
                Some(g1.iter().zip(&g2).map(|(a, b)| 2.0 * a - b).collect()),
            ),
            _ => (None, None),
        }
    };
    let events = crossings
        .into_iter()
        .map(|tau| {
            let (gauss_left, grad_left) = limit(tau, -1.0);
            let (gauss_right, grad_right) = limit(tau, 1.0);
            ProbeEvent {
                tau,
                gauss_left,
                gauss_right,
                grad_left,
                grad_right,
            }
        })
        .collect();
    Ok(ProbeReport { samples, events })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(c: [f64; 3]) -> Ball {
        Ball::new(c, 1.0, 1.0)
    }

    #[test]
    fn tangent_pair_flagged_and_classified() {
        let balls = BallSet::new(vec![unit([0.0; 3]), unit([2.0, 0.0, 0.0])]);
        let report = general_position_check(&balls, 1e-9).unwrap();
        assert_eq!(report.min_residual, 0.0);
        let v = &report.violations[0];
        assert_eq!((v.condition, v.simplex.clone()), (Condition::II, vec![0, 1]));
        assert_eq!(v.event, Some(EventClass::MergeSplitComponents));
        assert!(matches!(Diagram::new(balls), Err(Error::DegenerateState { .. })));
    }

    #[test]
    fn tangency_inside_a_third_ball() {
        let balls = BallSet::new(vec![
            unit([0.0; 3]),
            unit([2.0, 0.0, 0.0]),
            Ball::new([1.0, 0.0, 0.0], 0.5, 1.0),
        ]);
        let report = general_position_check(&balls, 1e-9).unwrap();
        let v = report.violations.iter().find(|v| v.simplex == vec![0, 1]).unwrap();
        assert_eq!(v.event, Some(EventClass::InteriorNongeneric));
    }

    #[test]
    fn four_spheres_through_a_point() {
        let s = 1.0 / 3f64.sqrt();
        let balls = BallSet::new(vec![
            unit([s, s, s]),
            unit([s, -s, -s]),
            unit([-s, s, -s]),
            unit([-s, -s, s]),
        ]);
        let report = general_position_check(&balls, 1e-9).unwrap();
        let v = report
            .violations
            .iter()
            .find(|v| v.condition == Condition::II && v.simplex.len() == 4)
            .unwrap();
        assert_eq!(v.event, Some(EventClass::StartDrownVoid));
    }

    #[test]
    fn generic_state_has_no_violations() {
        let balls = BallSet::new(vec![
            unit([0.0; 3]),
            Ball::new([1.2, 0.1, 0.0], 0.9, 1.0),
            Ball::new([0.5, 1.1, 0.2], 1.1, 1.0),
            Ball::new([0.4, 0.3, 1.0], 0.8, 1.0),
        ]);
        let report = general_position_check(&balls, 1e-9).unwrap();
        assert!(report.violations.is_empty());
        assert!(report.min_residual > 0.0);
    }

    #[test]
    fn tangency_path_jumps_by_multiple_of_two_pi() {
        let balls = BallSet::new(vec![unit([0.0; 3]), unit([2.5, 0.0, 0.0])]);
        let t = Momentum::new(vec![0.0, 0.0, 0.0, -1.0, 0.0, 0.0]);
        let report = gradient_jump_probe(&balls, &t, 0.0, 1.0, 11).unwrap();
        assert!(!report.samples[5].defined);
        assert_eq!(report.events.len(), 1);
        let jump = report.events[0].gauss_jump().unwrap() / std::f64::consts::TAU;
        assert!((jump + 2.0).abs() < 1e-6, "{jump}");
    }
}
