//! Spherical triangles in squared-cosine parameters.
//!
//! A spherical triangle with side lengths `φ_ij, φ_jk, φ_ki` is described by
//! `a = cos²(φ_ij/2)`, `b = cos²(φ_jk/2)`, `c = cos²(φ_ki/2)`. Its area, the
//! squared half-cosine `r` of its circumradius, and the split into three
//! quadrangles (one per vertex, cut along the perpendicular bisectors) are all
//! rational-plus-root expressions in `a, b, c`.

use crate::error::{Error, Result};
use crate::geom::Vec3;

/// `(1 + cos φ) / 2`, i.e. `cos²(φ/2)`.
pub fn squared_cosine(phi: f64) -> f64 {
    0.5 * (1.0 + phi.cos())
}

/// `4abc - (a+b+c-1)²`, the product of the four half-perimeter sines.
pub fn product_of_sines(a: f64, b: f64, c: f64) -> f64 {
    let w = a + b + c - 1.0;
    4.0 * a * b * c - w * w
}

/// Denominator of the circumradius expression.
pub fn circumradius_denominator(a: f64, b: f64, c: f64) -> f64 {
    let (a1, b1, c1) = (a - 1.0, b - 1.0, c - 1.0);
    a1 * a1 + b1 * b1 + c1 * c1 - (a - b).powi(2) - (a - c).powi(2) - (b - c).powi(2)
}

/// Squared half-cosines with their complements (squared half-sines) and the
/// two determinants the triangle formulas are built from. Keeping the
/// complements separately preserves accuracy for small and flat triangles.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Shape {
    abc: [f64; 3],
    comp: [f64; 3],
    /// Product of sines.
    u: f64,
    /// Circumradius denominator.
    v: f64,
}

/// `16 × (area)²` of a plane triangle with squared half side lengths `s`.
fn heron(s: [f64; 3]) -> f64 {
    let [x, y, z] = s.map(f64::sqrt);
    (x + y + z) * (-x + y + z) * (x - y + z) * (x + y - z)
}

impl Shape {
    fn from_abc(a: f64, b: f64, c: f64) -> Self {
        Shape {
            abc: [a, b, c],
            comp: [1.0 - a, 1.0 - b, 1.0 - c],
            u: product_of_sines(a, b, c),
            v: circumradius_denominator(a, b, c),
        }
    }

    fn from_sides(sides: [f64; 3]) -> Self {
        let comp = sides.map(|p| (0.5 * p).sin().powi(2));
        let h = 0.5 * (sides[0] + sides[1] + sides[2]);
        let u = h.sin() * (h - sides[0]).sin() * (h - sides[1]).sin() * (h - sides[2]).sin();
        Shape {
            abc: sides.map(squared_cosine),
            comp,
            u,
            v: heron(comp),
        }
    }

    fn from_normals(n: &[Vec3; 3]) -> Self {
        let pairs = [(0, 1), (1, 2), (2, 0)];
        let det = n[0].dot(&n[1].cross(&n[2]));
        let plane = (n[1] - n[0]).cross(&(n[2] - n[0]));
        Shape {
            abc: pairs.map(|(p, q)| 0.25 * (n[p] + n[q]).norm_squared()),
            comp: pairs.map(|(p, q)| 0.25 * (n[p] - n[q]).norm_squared()),
            u: 0.25 * det * det,
            v: 0.25 * plane.norm_squared(),
        }
    }

    /// The same triangle with sides listed in the order `order`.
    fn permuted(&self, order: [usize; 3]) -> Self {
        Shape {
            abc: order.map(|m| self.abc[m]),
            comp: order.map(|m| self.comp[m]),
            ..*self
        }
    }

    fn check(&self) -> Result<()> {
        if self.u > 0.0 && self.u.is_finite() {
            Ok(())
        } else {
            Err(Error::NonRealizableTriangle(self.u))
        }
    }

    fn check_circle(&self) -> Result<()> {
        self.check()?;
        if self.v <= f64::EPSILON {
            return Err(Error::NonRealizableTriangle(self.v));
        }
        Ok(())
    }

    fn area(&self) -> Result<f64> {
        self.check()?;
        let [a, b, c] = self.abc;
        Ok(2.0 * self.u.sqrt().atan2(a + b + c - 1.0))
    }

    fn ds_da(&self) -> Result<f64> {
        self.check()?;
        let [sa, sb, sc] = self.comp;
        Ok((sa - sb - sc) / (self.abc[0] * self.u.sqrt()))
    }

    /// `cos²(R/2)` and its complement `sin²(R/2)`.
    fn circle(&self) -> Result<(f64, f64)> {
        self.check_circle()?;
        let cos_r = (self.u / self.v).sqrt().min(1.0);
        let [sa, sb, sc] = self.comp;
        let sin_sq = 4.0 * sa * sb * sc / self.v;
        Ok((0.5 + 0.5 * cos_r, 0.5 * sin_sq / (1.0 + cos_r)))
    }

    fn dr_da(&self) -> Result<f64> {
        self.check_circle()?;
        let [sa, sb, sc] = self.comp;
        let num = sb * sc * (sa - sb + sc) * (sa + sb - sc);
        Ok(num / (self.u.sqrt() * self.v.powf(1.5)))
    }

    fn signs(&self) -> [f64; 3] {
        let sign = |ok: bool| if ok { 1.0 } else { -1.0 };
        let [sa, sb, sc] = self.comp;
        [sign(sb <= sa + sc), sign(sc <= sa + sb), sign(sa <= sb + sc)]
    }
}

/// Area of the spherical triangle. Takes values in `(0, 2π)`; the half-angle
/// is recovered with `atan2` so triangles with area above `π` are handled.
pub fn triangle_area(a: f64, b: f64, c: f64) -> Result<f64> {
    Shape::from_abc(a, b, c).area()
}

/// `∂S/∂a`; by symmetry `∂S/∂b = dS_da(b, a, c)` and `∂S/∂c = dS_da(c, b, a)`.
pub fn ds_da(a: f64, b: f64, c: f64) -> Result<f64> {
    Shape::from_abc(a, b, c).ds_da()
}

/// `cos²(R/2)` for the circumradius `R` of the triangle.
pub fn cap_half_radius(a: f64, b: f64, c: f64) -> Result<f64> {
    Shape::from_abc(a, b, c).circle().map(|(r, _)| r)
}

/// `∂r/∂a` of [`cap_half_radius`]; symmetric in `b, c`.
pub fn dr_da(a: f64, b: f64, c: f64) -> Result<f64> {
    Shape::from_abc(a, b, c).dr_da()
}

/// Area, `∂/∂a` and `∂/∂r` of the isosceles triangle `S(a, r, r)`, from
/// `a`, `r` and their complements `sa = 1 - a`, `sr = 1 - r`.
fn isosceles(a: f64, sa: f64, r: f64, sr: f64) -> Result<(f64, f64, f64)> {
    let root = a.sqrt();
    let u = sa / (1.0 + root) * (2.0 * sr - sa / (1.0 + root)) * (2.0 * r * (1.0 + root) - sa);
    if u.is_nan() || u <= 0.0 {
        return Err(Error::NonRealizableTriangle(u));
    }
    let su = u.sqrt();
    let area = 2.0 * su.atan2(2.0 - sa - 2.0 * sr);
    let d_a = (sa - 2.0 * sr) / (a * su);
    let d_r = -2.0 * sa / (r * su);
    Ok((area, d_a, d_r))
}

/// Side of the circumcenter relative to each vertex: `+1` when the center
/// and the vertex lie on the same side of the opposite great circle.
/// The equality case counts as `+1`.
pub fn corner_signs(a: f64, b: f64, c: f64) -> [f64; 3] {
    Shape::from_abc(a, b, c).signs()
}

/// `dφ/dd` for the angle between the normals of two spheres of radii
/// `ri, rj` at center distance `d`. `None` unless the spheres cross.
pub fn dphi_dd(ri: f64, rj: f64, d: f64) -> Option<f64> {
    let heron = (ri + rj - d) * (rj + d - ri) * (d + ri - rj) * (d + ri + rj);
    if heron > 0.0 {
        Some(2.0 * d / heron.sqrt())
    } else {
        None
    }
}

/// `da/dφ` for `a = cos²(φ/2)`.
pub fn da_dphi(phi: f64) -> f64 {
    -0.5 * phi.sin()
}

/// A spherical triangle with vertices `n_i, n_j, n_k` and its split into
/// quadrangles around the circumcenter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCorner {
    /// Side lengths `[φ_ij, φ_jk, φ_ki]`.
    pub sides: [f64; 3],
    /// Squared cosines `[a, b, c]` of the half sides.
    pub abc: [f64; 3],
    pub area: f64,
    /// `cos²(R/2)` for circumradius `R`.
    pub r: f64,
    /// `[sgm_{i,jk}, sgm_{j,ki}, sgm_{k,ij}]`.
    pub signs: [f64; 3],
    /// Isosceles areas `[A(a,r), B(b,r), C(c,r)]`.
    pub isosceles: [f64; 3],
    /// Quadrangle areas `[φ_{i,jk}, φ_{j,ki}, φ_{k,ij}]`.
    pub quads: [f64; 3],
    shape: Shape,
    /// `sin²(R/2)`.
    r_comp: f64,
}

impl SphericalCorner {
    pub fn from_sides(phi_ij: f64, phi_jk: f64, phi_ki: f64) -> Result<Self> {
        let sides = [phi_ij, phi_jk, phi_ki];
        Self::build(sides, Shape::from_sides(sides), None)
    }

    /// From the three vertex directions; they need not be exactly unit.
    pub fn from_normals(n: &[Vec3; 3]) -> Result<Self> {
        let n = &n.map(|v| v.normalize());
        let angle = |p: &Vec3, q: &Vec3| p.cross(q).norm().atan2(p.dot(q));
        let sides = [angle(&n[0], &n[1]), angle(&n[1], &n[2]), angle(&n[2], &n[0])];
        let shape = Shape::from_normals(n);
        shape.check_circle()?;
        // isosceles areas straight from the vectors stay accurate when the
        // circumcenter approaches a side
        let (z, _) = Self::circumcenter_and_midpoints(n);
        let iso = [(0, 1), (1, 2), (2, 0)].map(|(p, q)| {
            let height = z.dot(&n[p].cross(&n[q])).abs();
            2.0 * height.atan2(1.0 + n[p].dot(&n[q]) + n[q].dot(&z) + z.dot(&n[p]))
        });
        Self::build(sides, shape, Some(iso))
    }

    fn build(sides: [f64; 3], shape: Shape, iso: Option<[f64; 3]>) -> Result<Self> {
        let area = shape.area()?;
        let (r, sr) = shape.circle()?;
        let signs = shape.signs();
        let [ia, ib, ic] = match iso {
            Some(v) => v,
            None => {
                let iso = |m: usize| isosceles(shape.abc[m], shape.comp[m], r, sr).map(|t| t.0);
                [iso(0)?, iso(1)?, iso(2)?]
            }
        };
        let [si, sj, sk] = signs;
        let quads = [
            0.5 * (sk * ia + sj * ic),
            0.5 * (si * ib + sk * ia),
            0.5 * (sj * ic + si * ib),
        ];
        Ok(SphericalCorner {
            sides,
            abc: shape.abc,
            area,
            r,
            signs,
            isosceles: [ia, ib, ic],
            quads,
            shape,
            r_comp: sr,
        })
    }

    /// Fractions `α_m = φ_{m,..} / φ_ijk`.
    pub fn fractions(&self) -> [f64; 3] {
        self.quads.map(|q| q / self.area)
    }

    /// Partial derivatives of the three quadrangle areas with respect to
    /// `[a, b, c]`; row `m` belongs to quadrangle `m`.
    pub fn quad_partials(&self) -> Result<[[f64; 3]; 3]> {
        let sh = &self.shape;
        let r_abc = [
            sh.dr_da()?,
            sh.permuted([1, 0, 2]).dr_da()?,
            sh.permuted([2, 1, 0]).dr_da()?,
        ];
        let iso = |m: usize| isosceles(sh.abc[m], sh.comp[m], self.r, self.r_comp);
        let (_, aa, ar) = iso(0)?;
        let (_, bb, br) = iso(1)?;
        let (_, cc, cr) = iso(2)?;
        // total derivatives of A, B, C with respect to a, b, c
        let mut da = r_abc.map(|x| ar * x);
        let mut db = r_abc.map(|x| br * x);
        let mut dc = r_abc.map(|x| cr * x);
        da[0] += aa;
        db[1] += bb;
        dc[2] += cc;
        let [si, sj, sk] = self.signs;
        let mut out = [[0.0; 3]; 3];
        for m in 0..3 {
            out[0][m] = 0.5 * (sk * da[m] + sj * dc[m]);
            out[1][m] = 0.5 * (si * db[m] + sk * da[m]);
            out[2][m] = 0.5 * (sj * dc[m] + si * db[m]);
        }
        Ok(out)
    }

    /// Unit circumcenter and side midpoints `[m_i, m_j, m_k]` for the
    /// triangle with vertices `n`; `m_k` bisects the side opposite `n_k`.
    pub fn circumcenter_and_midpoints(n: &[Vec3; 3]) -> (Vec3, [Vec3; 3]) {
        let mut z = (n[1] - n[0]).cross(&(n[2] - n[0]));
        z /= z.norm();
        if z.dot(&n[0]) < 0.0 {
            z = -z;
        }
        let mid = |p: &Vec3, q: &Vec3| (p + q).normalize();
        (z, [mid(&n[1], &n[2]), mid(&n[2], &n[0]), mid(&n[0], &n[1])])
    }
}

/// Coefficients of the quadrangle-area derivatives along the three center
/// distances: `φ_{i,jk}' = p[0]·d_ij' + p[1]·d_jk' + p[2]·d_ki'`, and the same
/// for `q` (quadrangle at `j`) and `s` (quadrangle at `k`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadGradient {
    pub p: [f64; 3],
    pub q: [f64; 3],
    pub s: [f64; 3],
}

/// Quadrangle-area gradient for the corner of spheres with radii
/// `[r_i, r_j, r_k]` and center distances `[d_ij, d_jk, d_ki]`.
pub fn quad_area_gradient(corner: &SphericalCorner, radii: [f64; 3], dists: [f64; 3]) -> Result<QuadGradient> {
    let partials = corner.quad_partials()?;
    let pairs = [(0, 1), (1, 2), (2, 0)];
    let mut chain = [0.0; 3];
    for (m, &(x, y)) in pairs.iter().enumerate() {
        let dphi = dphi_dd(radii[x], radii[y], dists[m]).ok_or(Error::NonRealizableTriangle(0.0))?;
        chain[m] = da_dphi(corner.sides[m]) * dphi;
    }
    let row = |m: usize| [0, 1, 2].map(|e| partials[m][e] * chain[e]);
    Ok(QuadGradient {
        p: row(0),
        q: row(1),
        s: row(2),
    })
}
