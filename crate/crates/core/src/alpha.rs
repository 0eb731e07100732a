//! Weighted Delaunay mosaic and alpha complex by brute-force checking of
//! Voronoi-domain intersections, plus the exposed arcs of every circle.
//!
//! For three balls the points of equal power form a line through the
//! orthocenter of the triangle, perpendicular to its plane. Every other ball
//! cuts that line to a half-line, so the common intersection of the three
//! Voronoi domains is an interval of the line. Everything else (tetrahedra,
//! edges, vertices, alpha membership, exposed corners) is read off these
//! intervals.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::error::{Condition, Result};
use crate::geom::{
    pair_geometry, power_distance, triple_geometry, triple_orthocenter, BallSet, PairGeometry, Side, TripleGeometry,
    Vec3,
};

/// Common intersection `z + s·axis, s ∈ [lo, hi]` of three Voronoi domains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    /// Ball whose domain cuts the line at `lo` (resp. `hi`).
    pub lo_ball: Option<usize>,
    pub hi_ball: Option<usize>,
    /// Distance from the bound to the next-tightest bound on the same side.
    pub lo_gap: f64,
    pub hi_gap: f64,
}

impl Interval {
    pub fn is_empty(&self) -> bool {
        self.lo.is_nan() || self.hi.is_nan() || self.lo >= self.hi
    }

    /// Squared distance from `s = 0` to the interval.
    fn dist_sq_to_origin(&self) -> f64 {
        if self.lo > 0.0 {
            self.lo * self.lo
        } else if self.hi < 0.0 {
            self.hi * self.hi
        } else {
            0.0
        }
    }

    /// Length of the overlap with `[-h, h]`.
    pub fn overlap(&self, h: f64) -> f64 {
        (self.hi.min(h) - self.lo.max(-h)).max(0.0)
    }

    pub fn contains(&self, s: f64) -> bool {
        self.lo < s && s < self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexInfo {
    pub delaunay: bool,
    /// Minimum power of ball `i` over its Voronoi domain.
    pub filtration: f64,
    pub in_alpha: bool,
    pub on_boundary: bool,
}

/// A corner `P±` of the sorted triple `triangle`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CornerRef {
    pub triangle: [usize; 3],
    pub side: Side,
}

impl CornerRef {
    /// The vertex of the triangle not in the pair `(i, j)`.
    pub fn third(&self, i: usize, j: usize) -> usize {
        *self
            .triangle
            .iter()
            .find(|&&m| m != i && m != j)
            .expect("corner triangle contains the edge")
    }
}

/// A maximal exposed piece of the circle where two spheres meet, traversed
/// counterclockwise about `u_ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub start_angle: f64,
    pub extent: f64,
    /// Corners at the two ends; `None` for a full circle.
    pub start: Option<CornerRef>,
    pub end: Option<CornerRef>,
}

impl Arc {
    pub fn is_full_circle(&self) -> bool {
        self.start.is_none()
    }
}

/// Orthonormal frame of the circle of an edge: `e1 × e2 = u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleFrame {
    pub center: Vec3,
    pub radius: f64,
    pub u: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
}

impl CircleFrame {
    pub fn new(pair: &PairGeometry) -> Self {
        let u = pair.u;
        let helper = if u.x.abs() <= u.y.abs() && u.x.abs() <= u.z.abs() {
            Vec3::x()
        } else if u.y.abs() <= u.z.abs() {
            Vec3::y()
        } else {
            Vec3::z()
        };
        let e1 = u.cross(&helper).normalize();
        let e2 = u.cross(&e1);
        CircleFrame {
            center: pair.center,
            radius: pair.circle_radius,
            u,
            e1,
            e2,
        }
    }

    pub fn angle_of(&self, p: &Vec3) -> f64 {
        let v = p - self.center;
        v.dot(&self.e2).atan2(v.dot(&self.e1)).rem_euclid(TAU)
    }

    pub fn point(&self, theta: f64) -> Vec3 {
        self.center + self.radius * (theta.cos() * self.e1 + theta.sin() * self.e2)
    }

    /// Unit tangent in the direction of increasing angle.
    pub fn tangent(&self, theta: f64) -> Vec3 {
        -theta.sin() * self.e1 + theta.cos() * self.e2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeInfo {
    pub pair: PairGeometry,
    pub delaunay: bool,
    pub filtration: f64,
    pub in_alpha: bool,
    pub on_boundary: bool,
    /// Third vertices of the incident Delaunay triangles, sorted by angle
    /// about the edge.
    pub cyclic: Vec<usize>,
    /// Number of gaps between contiguous alpha triangles around the edge.
    pub gaps: usize,
    pub arcs: Vec<Arc>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleInfo {
    pub vertices: [usize; 3],
    pub center: Vec3,
    pub axis: Vec3,
    /// Signed square of the half-length of the chord through the corners.
    pub half_length_sq: f64,
    pub interval: Interval,
    pub filtration: f64,
    pub in_alpha: bool,
    /// Whether `[P-, P+]` lie outside all other balls.
    pub exposed: [bool; 2],
    pub geometry: Option<TripleGeometry>,
}

impl TriangleInfo {
    pub fn on_boundary(&self) -> bool {
        self.exposed[0] || self.exposed[1]
    }

    pub fn exposed_count(&self) -> usize {
        self.exposed.iter().filter(|&&e| e).count()
    }

    pub fn half_length(&self) -> f64 {
        self.half_length_sq.max(0.0).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetInfo {
    pub filtration: f64,
    pub in_alpha: bool,
}

/// A near-violation of general position.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub simplex: Vec<usize>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaComplex {
    pub n: usize,
    pub vertices: Vec<VertexInfo>,
    pub edges: BTreeMap<(usize, usize), EdgeInfo>,
    pub triangles: BTreeMap<[usize; 3], TriangleInfo>,
    pub tetrahedra: BTreeMap<[usize; 4], TetInfo>,
}

/// A simplex of the mosaic with its flags.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexFlags {
    pub vertices: Vec<usize>,
    pub in_alpha: bool,
    pub on_boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerData {
    pub chi_alpha: i64,
    pub chi_surface: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Betti {
    pub b0: i64,
    pub b1: i64,
    pub b2: i64,
}

fn sorted3(i: usize, j: usize, k: usize) -> [usize; 3] {
    let mut t = [i, j, k];
    t.sort_unstable();
    t
}

fn sorted4(a: usize, b: usize, c: usize, d: usize) -> [usize; 4] {
    let mut t = [a, b, c, d];
    t.sort_unstable();
    t
}

/// `π_l(y) - π_i(y)`, nonnegative iff `y` is no closer in power to `l`.
fn power_gap(balls: &BallSet, i: usize, l: usize, y: &Vec3) -> f64 {
    power_distance(y, &balls[l]) - power_distance(y, &balls[i])
}

fn triangle_interval(balls: &BallSet, t: [usize; 3], z: &Vec3, axis: &Vec3) -> Interval {
    let [i, j, k] = t;
    let xi = balls[i].center;
    let scale = balls.max_radius().max(1.0);
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut lo2 = f64::NEG_INFINITY;
    let mut hi2 = f64::INFINITY;
    let (mut lo_ball, mut hi_ball) = (None, None);
    for l in 0..balls.len() {
        if l == i || l == j || l == k {
            continue;
        }
        let g0 = power_gap(balls, i, l, z);
        let c = 2.0 * axis.dot(&(xi - balls[l].center));
        if c.abs() <= 1e-14 * scale {
            if g0 < 0.0 {
                lo = f64::INFINITY;
                hi = f64::NEG_INFINITY;
                lo_ball = Some(l);
                hi_ball = Some(l);
            }
            continue;
        }
        let s = -g0 / c;
        if c > 0.0 {
            if s > lo {
                lo2 = lo;
                lo = s;
                lo_ball = Some(l);
            } else if s > lo2 {
                lo2 = s;
            }
        } else if s < hi {
            hi2 = hi;
            hi = s;
            hi_ball = Some(l);
        } else if s < hi2 {
            hi2 = s;
        }
    }
    Interval {
        lo,
        hi,
        lo_ball,
        hi_ball,
        lo_gap: lo - lo2,
        hi_gap: hi2 - hi,
    }
}

/// Build the mosaic, alpha complex, arcs and boundary flags.
pub fn build_alpha_complex(balls: &BallSet) -> Result<AlphaComplex> {
    let n = balls.len();
    for i in 0..n {
        for j in i + 1..n {
            pair_geometry(balls, i, j)?;
        }
    }

    // Delaunay triangles
    let triangles: Vec<TriangleInfo> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            for j in i + 1..n {
                for k in j + 1..n {
                    let Some((z, axis, h2)) = triple_orthocenter(&balls[i], &balls[j], &balls[k]) else {
                        continue;
                    };
                    let iv = triangle_interval(balls, [i, j, k], &z, &axis);
                    if iv.is_empty() {
                        continue;
                    }
                    let filtration = -h2 + iv.dist_sq_to_origin();
                    let in_alpha = filtration <= 0.0;
                    let h = h2.max(0.0).sqrt();
                    let exposed = if h2 > 0.0 {
                        [iv.contains(-h), iv.contains(h)]
                    } else {
                        [false, false]
                    };
                    let geometry = if h2 > 0.0 {
                        triple_geometry(balls, i, j, k).ok()
                    } else {
                        None
                    };
                    out.push(TriangleInfo {
                        vertices: [i, j, k],
                        center: z,
                        axis,
                        half_length_sq: h2,
                        interval: iv,
                        filtration,
                        in_alpha,
                        exposed,
                        geometry,
                    });
                }
            }
            out
        })
        .collect();

    let mut tetrahedra = BTreeMap::new();
    let mut tri_map = BTreeMap::new();
    for t in triangles {
        let [i, j, k] = t.vertices;
        let iv = t.interval;
        for (s, ball) in [(iv.lo, iv.lo_ball), (iv.hi, iv.hi_ball)] {
            let Some(l) = ball else { continue };
            tetrahedra.entry(sorted4(i, j, k, l)).or_insert_with(|| {
                let f = -t.half_length_sq + s * s;
                TetInfo {
                    filtration: f,
                    in_alpha: f <= 0.0,
                }
            });
        }
        tri_map.insert(t.vertices, t);
    }

    // Delaunay edges
    let mut tri_by_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for t in tri_map.keys() {
        let [i, j, k] = *t;
        tri_by_edge.entry((i, j)).or_default().push(k);
        tri_by_edge.entry((i, k)).or_default().push(j);
        tri_by_edge.entry((j, k)).or_default().push(i);
    }
    let mut edges = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let pair = pair_geometry(balls, i, j)?;
            let third = tri_by_edge.get(&(i, j)).cloned().unwrap_or_default();
            let base = -(balls[i].radius.powi(2) - pair.xi_i * pair.xi_i);
            let center_inside = (0..n)
                .filter(|&l| l != i && l != j)
                .all(|l| power_gap(balls, i, l, &pair.center) >= 0.0);
            if !center_inside && third.is_empty() {
                continue;
            }
            let filtration = if center_inside {
                base
            } else {
                third
                    .iter()
                    .map(|&k| tri_map[&sorted3(i, j, k)].filtration)
                    .fold(f64::INFINITY, f64::min)
            };
            let frame = CircleFrame::new(&pair);
            let mut cyclic = third;
            cyclic.sort_by(|&a, &b| {
                let ta = frame.angle_of(&balls[a].center);
                let tb = frame.angle_of(&balls[b].center);
                ta.total_cmp(&tb)
            });
            edges.insert(
                (i, j),
                EdgeInfo {
                    pair,
                    delaunay: true,
                    filtration,
                    in_alpha: filtration <= 0.0,
                    on_boundary: false,
                    cyclic,
                    gaps: 0,
                    arcs: Vec::new(),
                },
            );
        }
    }

    // vertices
    let mut vertices = Vec::with_capacity(n);
    for i in 0..n {
        let xi = balls[i].center;
        let center_inside = (0..n).filter(|&l| l != i).all(|l| power_gap(balls, i, l, &xi) >= 0.0);
        let incident: Vec<f64> = edges
            .iter()
            .filter(|((a, b), _)| *a == i || *b == i)
            .map(|(_, e)| e.filtration)
            .collect();
        let delaunay = center_inside || !incident.is_empty();
        let filtration = if center_inside {
            -balls[i].radius.powi(2)
        } else {
            incident.iter().copied().fold(f64::INFINITY, f64::min)
        };
        vertices.push(VertexInfo {
            delaunay,
            filtration,
            in_alpha: delaunay && filtration <= 0.0,
            on_boundary: false,
        });
    }

    let mut cx = AlphaComplex {
        n,
        vertices,
        edges,
        triangles: tri_map,
        tetrahedra,
    };
    cx.compute_arcs(balls);
    Ok(cx)
}

/// An interval of the circle covered by one ball, with its corner tags.
#[derive(Debug, Clone, Copy)]
struct Covered {
    start: f64,
    end: f64,
    start_tag: CornerRef,
    end_tag: CornerRef,
}

impl AlphaComplex {
    fn compute_arcs(&mut self, balls: &BallSet) {
        let n = self.n;
        let keys: Vec<(usize, usize)> = self.edges.keys().copied().collect();
        for (i, j) in keys {
            let edge = &self.edges[&(i, j)];
            if !edge.pair.intersects || !edge.in_alpha {
                continue;
            }
            let frame = CircleFrame::new(&edge.pair);
            let mut covered = Vec::new();
            let mut full = false;
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                match covered_interval(balls, &frame, i, j, k) {
                    Cover::None => {}
                    Cover::Full => {
                        full = true;
                        break;
                    }
                    Cover::Part(c) => covered.push(c),
                }
            }
            let arcs = if full { Vec::new() } else { exposed_arcs(covered) };
            let edge = self.edges.get_mut(&(i, j)).expect("edge exists");
            edge.on_boundary = !arcs.is_empty();
            edge.arcs = arcs;
        }

        // gaps around each edge
        let keys: Vec<(usize, usize)> = self.edges.keys().copied().collect();
        for (i, j) in keys {
            let edge = &self.edges[&(i, j)];
            if !edge.in_alpha {
                continue;
            }
            let frame = CircleFrame::new(&edge.pair);
            let ring = &edge.cyclic;
            let alpha_tris: Vec<bool> = ring
                .iter()
                .map(|&k| self.triangles[&sorted3(i, j, k)].in_alpha)
                .collect();
            let gaps = if !alpha_tris.iter().any(|&a| a) {
                1
            } else {
                let m = ring.len();
                // wedge w joins ring[w] and ring[w + 1]
                let filled: Vec<bool> = (0..m)
                    .map(|w| {
                        let (k1, k2) = (ring[w], ring[(w + 1) % m]);
                        if k1 == k2 {
                            return false;
                        }
                        let a1 = frame.angle_of(&balls[k1].center);
                        let a2 = frame.angle_of(&balls[k2].center);
                        let sweep = (a2 - a1).rem_euclid(TAU);
                        sweep < PI && self.tetrahedra.get(&sorted4(i, j, k1, k2)).is_some_and(|t| t.in_alpha)
                    })
                    .collect();
                let mut open_sides = 0;
                for w in 0..m {
                    if alpha_tris[w] {
                        if !filled[w] {
                            open_sides += 1;
                        }
                        if !filled[(w + m - 1) % m] {
                            open_sides += 1;
                        }
                    }
                }
                open_sides / 2
            };
            self.edges.get_mut(&(i, j)).expect("edge exists").gaps = gaps;
        }

        for i in 0..n {
            let has_arc = self
                .edges
                .iter()
                .any(|(&(a, b), e)| (a == i || b == i) && !e.arcs.is_empty());
            let untouched = (0..n).filter(|&k| k != i).all(|k| {
                let d = (balls[i].center - balls[k].center).norm();
                d >= balls[i].radius + balls[k].radius || d + balls[k].radius <= balls[i].radius
            });
            self.vertices[i].on_boundary = has_arc || untouched;
        }
    }

    pub fn triangle(&self, t: [usize; 3]) -> Option<&TriangleInfo> {
        self.triangles.get(&t)
    }

    pub fn edge(&self, i: usize, j: usize) -> Option<&EdgeInfo> {
        self.edges.get(&(i.min(j), i.max(j)))
    }

    /// Exposed arcs of the circle where spheres `i` and `j` meet.
    pub fn boundary_arcs(&self, i: usize, j: usize) -> &[Arc] {
        self.edge(i, j).map(|e| e.arcs.as_slice()).unwrap_or(&[])
    }

    /// All simplices of the mosaic with their flags, by dimension then index.
    pub fn simplices(&self) -> Vec<SimplexFlags> {
        let mut out = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.delaunay {
                out.push(SimplexFlags {
                    vertices: vec![i],
                    in_alpha: v.in_alpha,
                    on_boundary: v.on_boundary,
                });
            }
        }
        for (&(i, j), e) in &self.edges {
            out.push(SimplexFlags {
                vertices: vec![i, j],
                in_alpha: e.in_alpha,
                on_boundary: e.on_boundary,
            });
        }
        for (t, info) in &self.triangles {
            out.push(SimplexFlags {
                vertices: t.to_vec(),
                in_alpha: info.in_alpha,
                on_boundary: info.on_boundary(),
            });
        }
        for (t, info) in &self.tetrahedra {
            out.push(SimplexFlags {
                vertices: t.to_vec(),
                in_alpha: info.in_alpha,
                on_boundary: false,
            });
        }
        out
    }

    pub fn euler(&self) -> EulerData {
        let v = self.vertices.iter().filter(|v| v.in_alpha).count() as i64;
        let e = self.edges.values().filter(|e| e.in_alpha).count() as i64;
        let f = self.triangles.values().filter(|t| t.in_alpha).count() as i64;
        let t = self.tetrahedra.values().filter(|t| t.in_alpha).count() as i64;
        let chi = v - e + f - t;
        EulerData {
            chi_alpha: chi,
            chi_surface: 2 * chi,
        }
    }

    pub fn betti(&self) -> Betti {
        let mut uf = UnionFind::new(self.n);
        for (&(i, j), e) in &self.edges {
            if e.in_alpha {
                uf.union(i, j);
            }
        }
        let roots: BTreeSet<usize> = (0..self.n)
            .filter(|&i| self.vertices[i].in_alpha)
            .map(|i| uf.find(i))
            .collect();
        let b0 = roots.len() as i64;

        // complement: non-alpha tetrahedra plus the outside, joined across
        // non-alpha triangles
        let tets: Vec<[usize; 4]> = self.tetrahedra.keys().copied().collect();
        let index: BTreeMap<[usize; 4], usize> = tets.iter().enumerate().map(|(m, t)| (*t, m)).collect();
        let outside = tets.len();
        let mut cf = UnionFind::new(tets.len() + 1);
        for (t, info) in &self.triangles {
            if info.in_alpha {
                continue;
            }
            let [i, j, k] = *t;
            let side = |b: Option<usize>| match b {
                Some(l) => index[&sorted4(i, j, k, l)],
                None => outside,
            };
            let a = side(info.interval.lo_ball);
            let b = side(info.interval.hi_ball);
            let a_free = a == outside || !self.tetrahedra[&tets[a]].in_alpha;
            let b_free = b == outside || !self.tetrahedra[&tets[b]].in_alpha;
            if a_free && b_free {
                cf.union(a, b);
            }
        }
        let comps: BTreeSet<usize> = (0..=tets.len())
            .filter(|&m| m == outside || !self.tetrahedra[&tets[m]].in_alpha)
            .map(|m| cf.find(m))
            .collect();
        let b2 = comps.len() as i64 - 1;
        let chi = self.euler().chi_alpha;
        Betti {
            b0,
            b1: b0 + b2 - chi,
            b2,
        }
    }
}

enum Cover {
    None,
    Full,
    Part(Covered),
}

fn covered_interval(balls: &BallSet, frame: &CircleFrame, i: usize, j: usize, k: usize) -> Cover {
    let bk = &balls[k];
    let y = bk.center - frame.center;
    let yp = y - y.dot(&frame.u) * frame.u;
    let key = sorted3(i, j, k);
    if let Ok(tg) = triple_geometry(balls, key[0], key[1], key[2]) {
        let am = frame.angle_of(&tg.point(Side::Minus));
        let ap = frame.angle_of(&tg.point(Side::Plus));
        let theta_k = yp.dot(&frame.e2).atan2(yp.dot(&frame.e1)).rem_euclid(TAU);
        let extent = (ap - am).rem_euclid(TAU);
        let minus = CornerRef {
            triangle: key,
            side: Side::Minus,
        };
        let plus = CornerRef {
            triangle: key,
            side: Side::Plus,
        };
        let c = if (theta_k - am).rem_euclid(TAU) < extent {
            Covered {
                start: am,
                end: am + extent,
                start_tag: minus,
                end_tag: plus,
            }
        } else {
            Covered {
                start: ap,
                end: ap + (TAU - extent),
                start_tag: plus,
                end_tag: minus,
            }
        };
        return Cover::Part(c);
    }
    // no crossing: the circle is inside or outside ball k as a whole
    let probe = if yp.norm() > 0.0 {
        frame.center + frame.radius * yp.normalize()
    } else {
        frame.point(0.0)
    };
    if (probe - bk.center).norm() < bk.radius {
        Cover::Full
    } else {
        Cover::None
    }
}

fn exposed_arcs(mut covered: Vec<Covered>) -> Vec<Arc> {
    if covered.is_empty() {
        return vec![Arc {
            start_angle: 0.0,
            extent: TAU,
            start: None,
            end: None,
        }];
    }
    covered.sort_by(|a, b| a.start.total_cmp(&b.start));
    let mut merged: Vec<Covered> = Vec::new();
    for c in covered {
        match merged.last_mut() {
            Some(last) if c.start <= last.end => {
                if c.end > last.end {
                    last.end = c.end;
                    last.end_tag = c.end_tag;
                }
            }
            _ => merged.push(c),
        }
    }
    // wrap-around: the last interval may reach past the first ones
    while merged.len() > 1 {
        let first = merged[0];
        let last = merged.last_mut().expect("nonempty");
        if last.end >= first.start + TAU {
            if first.end + TAU > last.end {
                last.end = first.end + TAU;
                last.end_tag = first.end_tag;
            }
            merged.remove(0);
        } else {
            break;
        }
    }
    if merged.len() == 1 && merged[0].end - merged[0].start >= TAU {
        return Vec::new();
    }
    let m = merged.len();
    (0..m)
        .map(|a| {
            let cur = merged[a];
            let next = merged[(a + 1) % m];
            let next_start = if a + 1 == m { next.start + TAU } else { next.start };
            Arc {
                start_angle: cur.end.rem_euclid(TAU),
                extent: next_start - cur.end,
                start: Some(cur.end_tag),
                end: Some(next.start_tag),
            }
        })
        .filter(|arc| arc.extent > 0.0)
        .collect()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
