//! A ball set together with everything derived from it: alpha complex,
//! fractional measures and exposed corners.

use std::collections::BTreeMap;

use crate::alpha::{build_alpha_complex, AlphaComplex, CornerRef};
use crate::diagnostics::scan_general_position;
use crate::error::{Error, Result};
use crate::geom::{BallSet, Vec3};
use crate::measures::{exposed_corners, FractionalMeasures};
use crate::sphtrig::SphericalCorner;

/// An exposed corner with its normal triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerData {
    pub corner: CornerRef,
    pub point: Vec3,
    /// Outward normals in the order of `corner.triangle`.
    pub normals: [Vec3; 3],
    pub spherical: SphericalCorner,
}

#[derive(Debug, Clone)]
pub struct Diagram {
    pub balls: BallSet,
    pub complex: AlphaComplex,
    pub measures: FractionalMeasures,
    pub corners: BTreeMap<CornerRef, CornerData>,
}

impl Diagram {
    /// Build and reject states within the geometric tolerance of a
    /// general-position violation.
    pub fn new(balls: BallSet) -> Result<Self> {
        let tol = balls.length_tolerance();
        Self::checked(balls, tol)
    }

    /// Build and reject states within `tol` (a length) of a violation.
    pub fn checked(balls: BallSet, tol: f64) -> Result<Self> {
        let complex = build_alpha_complex(&balls)?;
        let scan = scan_general_position(&balls, &complex, tol);
        if let Some(v) = scan.violations.into_iter().next() {
            return Err(Error::DegenerateState {
                condition: v.condition,
                simplex: v.simplex,
                residual: v.residual,
            });
        }
        Self::assemble(balls, complex)
    }

    /// Build without the general-position check.
    pub fn lenient(balls: BallSet) -> Result<Self> {
        let complex = build_alpha_complex(&balls)?;
        Self::assemble(balls, complex)
    }

    fn assemble(balls: BallSet, complex: AlphaComplex) -> Result<Self> {
        let measures = FractionalMeasures::compute(&balls, &complex)?;
        let mut corners = BTreeMap::new();
        for c in exposed_corners(&complex) {
            let [i, j, k] = c.triangle;
            let g = complex.triangles[&c.triangle]
                .geometry
                .ok_or(Error::DegenerateTriple(i, j, k))?;
            let normals = g.normals_at(c.side);
            let spherical = SphericalCorner::from_normals(&normals)?;
            corners.insert(
                c,
                CornerData {
                    corner: c,
                    point: g.point(c.side),
                    normals,
                    spherical,
                },
            );
        }
        Ok(Diagram {
            balls,
            complex,
            measures,
            corners,
        })
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }
}
