//! Fractional measures of boundary simplices: exposed sphere area, exposed
//! circle length, exposed corners and the exposed part of corner chords.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::alpha::{AlphaComplex, CircleFrame, CornerRef};
use crate::error::{Condition, Error, Result};
use crate::geom::{BallSet, Side, Vec3};
use crate::oracles::{sample_stream, unit_ball_point, MC_CHUNK};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FractionalMeasures {
    /// Exposed fraction of each sphere.
    pub sigma_i: Vec<f64>,
    /// Exposed fraction of each circle, for edges with at least one arc.
    pub sigma_ij: BTreeMap<(usize, usize), f64>,
    /// Half the number of exposed corners, for triangles with at least one.
    pub sigma_ijk: BTreeMap<[usize; 3], f64>,
    /// Fraction of the corner chord inside the Voronoi domains of the
    /// triangle, for alpha triangles.
    pub nu_ijk: BTreeMap<[usize; 3], f64>,
}

impl FractionalMeasures {
    pub fn compute(balls: &BallSet, cx: &AlphaComplex) -> Result<Self> {
        let sigma_i = (0..balls.len())
            .map(|i| sigma_i(balls, cx, i))
            .collect::<Result<Vec<_>>>()?;
        let sigma_ij = cx
            .edges
            .iter()
            .filter(|(_, e)| !e.arcs.is_empty())
            .map(|(&k, _)| (k, sigma_ij(cx, k.0, k.1)))
            .collect();
        let sigma_ijk = cx
            .triangles
            .iter()
            .filter(|(_, t)| t.on_boundary())
            .map(|(&k, t)| (k, t.exposed_count() as f64 / 2.0))
            .collect();
        let nu_ijk = cx
            .triangles
            .iter()
            .filter(|(_, t)| t.in_alpha)
            .map(|(&k, _)| (k, nu_ijk(cx, k)))
            .collect();
        Ok(FractionalMeasures {
            sigma_i,
            sigma_ij,
            sigma_ijk,
            nu_ijk,
        })
    }

    pub fn sigma_ij(&self, i: usize, j: usize) -> f64 {
        self.sigma_ij.get(&(i.min(j), i.max(j))).copied().unwrap_or(0.0)
    }
}

/// Spherical angle at `n_i` between the great circles towards `n_j`, `n_k`.
pub fn vertex_angle(ni: &Vec3, nj: &Vec3, nk: &Vec3) -> f64 {
    let tj = nj - nj.dot(ni) * ni;
    let tk = nk - nk.dot(ni) * ni;
    tj.cross(&tk).norm().atan2(tj.dot(&tk))
}

/// Exposed area fraction of sphere `i` by the Gauss–Bonnet theorem on the
/// unit sphere. Each boundary loop of the exposed region bounds, on its left,
/// a disk of area `2π - ∮κ_g - Σ turning angles`; the exposed area is the sum
/// of these disk areas modulo `4π`.
pub fn sigma_i(balls: &BallSet, cx: &AlphaComplex, i: usize) -> Result<f64> {
    let ri = balls[i].radius;
    let mut arcs = Vec::new();
    for (&(a, b), e) in &cx.edges {
        if a != i && b != i {
            continue;
        }
        let h = if a == i { e.pair.xi_i } else { e.pair.xi_j } / ri;
        for arc in &e.arcs {
            arcs.push((h, *arc));
        }
    }
    if arcs.is_empty() {
        return Ok(if cx.vertices[i].on_boundary { 1.0 } else { 0.0 });
    }

    // boundary loops: arcs are linked through shared corners
    let mut uf = crate::alpha::UnionFind::new(arcs.len());
    let mut seen: BTreeMap<CornerRef, usize> = BTreeMap::new();
    for (m, (_, arc)) in arcs.iter().enumerate() {
        for c in [arc.start, arc.end].into_iter().flatten() {
            if let Some(&other) = seen.get(&c) {
                uf.union(m, other);
            } else {
                seen.insert(c, m);
            }
        }
    }
    let loops = (0..arcs.len()).map(|m| uf.find(m)).collect::<BTreeSet<_>>().len();

    let curvature: f64 = arcs.iter().map(|(h, arc)| arc.extent * h).sum();
    let mut turning = 0.0;
    for c in seen.keys() {
        let tri = &cx.triangles[&c.triangle];
        let g = tri
            .geometry
            .as_ref()
            .ok_or(Error::DegenerateTriple(c.triangle[0], c.triangle[1], c.triangle[2]))?;
        let n = g.normals_at(c.side);
        let pos = c.triangle.iter().position(|&m| m == i).expect("corner on sphere");
        turning += vertex_angle(&n[pos], &n[(pos + 1) % 3], &n[(pos + 2) % 3]);
    }
    let area = (TAU * loops as f64 + curvature - turning).rem_euclid(4.0 * PI);
    let slack = 4.0 * PI * 1e-9;
    if area < slack || area > 4.0 * PI - slack {
        return Err(Error::DegenerateState {
            condition: Condition::II,
            simplex: vec![i],
            residual: area.min(4.0 * PI - area),
        });
    }
    Ok(area / (4.0 * PI))
}

/// Exposed circle fraction from the arc list.
pub fn sigma_ij(cx: &AlphaComplex, i: usize, j: usize) -> f64 {
    cx.boundary_arcs(i, j).iter().map(|a| a.extent).sum::<f64>() / TAU
}

/// Exposed circle fraction by clipping the circle against every other ball
/// directly, without going through corners.
pub fn sigma_ij_clipping(balls: &BallSet, i: usize, j: usize) -> Result<f64> {
    let pair = crate::geom::pair_geometry(balls, i.min(j), i.max(j))?;
    if !pair.intersects {
        return Ok(0.0);
    }
    let frame = CircleFrame::new(&pair);
    let rho = frame.radius;
    let mut intervals = Vec::new();
    for k in 0..balls.len() {
        if k == i || k == j {
            continue;
        }
        let y = balls[k].center - frame.center;
        let yp = y - y.dot(&frame.u) * frame.u;
        let m = yp.norm();
        let num = rho * rho + y.norm_squared() - balls[k].radius.powi(2);
        if m <= 1e-15 * rho {
            if num < 0.0 {
                return Ok(0.0);
            }
            continue;
        }
        let kappa = num / (2.0 * rho * m);
        if kappa >= 1.0 {
            continue;
        }
        if kappa <= -1.0 {
            return Ok(0.0);
        }
        let center = yp.dot(&frame.e2).atan2(yp.dot(&frame.e1));
        let half = kappa.acos();
        intervals.push(((center - half).rem_euclid(TAU), 2.0 * half));
    }
    Ok(1.0 - circle_union_length(&mut intervals) / TAU)
}

/// Total length of a union of circle intervals `(start, extent)`.
fn circle_union_length(intervals: &mut [(f64, f64)]) -> f64 {
    let mut pieces: Vec<(f64, f64)> = Vec::new();
    for &(s, e) in intervals.iter() {
        if s + e > TAU {
            pieces.push((s, TAU));
            pieces.push((0.0, s + e - TAU));
        } else {
            pieces.push((s, s + e));
        }
    }
    pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in pieces {
        match cur {
            Some((ca, cb)) if a <= cb => cur = Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                total += cb - ca;
                cur = Some((a, b));
            }
            None => cur = Some((a, b)),
        }
    }
    if let Some((a, b)) = cur {
        total += b - a;
    }
    total.min(TAU)
}

pub fn sigma_ijk(cx: &AlphaComplex, t: [usize; 3]) -> f64 {
    cx.triangle(t).map_or(0.0, |t| t.exposed_count() as f64 / 2.0)
}

/// Fraction of the chord `P-P+` lying in the common Voronoi domain.
pub fn nu_ijk(cx: &AlphaComplex, t: [usize; 3]) -> f64 {
    match cx.triangle(t) {
        Some(tri) if tri.half_length_sq > 0.0 => {
            let h = tri.half_length();
            tri.interval.overlap(h) / (2.0 * h)
        }
        _ => 0.0,
    }
}

/// Monte Carlo estimate of the fraction of ball `i` inside its own Voronoi
/// domain, with its standard error.
pub fn nu_i_mc(balls: &BallSet, i: usize, samples: u64, seed: u64) -> (f64, f64) {
    let bi = &balls[i];
    let chunks = samples.div_ceil(MC_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = sample_stream(seed, i as u64, chunk);
            let count = MC_CHUNK.min(samples - chunk * MC_CHUNK);
            let mut hits = 0u64;
            for _ in 0..count {
                let y = bi.center + bi.radius * unit_ball_point(&mut rng);
                let own = crate::geom::power_distance(&y, bi);
                let inside = balls
                    .iter()
                    .enumerate()
                    .all(|(l, b)| l == i || crate::geom::power_distance(&y, b) >= own);
                if inside {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let p = hits as f64 / samples as f64;
    (p, (p * (1.0 - p) / samples as f64).sqrt())
}

/// Every exposed corner of the complex, in triangle order.
pub fn exposed_corners(cx: &AlphaComplex) -> Vec<CornerRef> {
    let mut out = Vec::new();
    for (&t, info) in &cx.triangles {
        for side in Side::BOTH {
            if info.exposed[side.index()] {
                out.push(CornerRef { triangle: t, side });
            }
        }
    }
    out
}
