//! Plain-text ball files and JSON result documents.
//!
//! A diagram file holds one ball per line as `x y z r w`. Lines starting with
//! `#` and blank lines are ignored. An optional header line `n <count>` fixes
//! the number of balls. Momentum files hold one `tx ty tz` line per ball with
//! the same comment rules.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

use crate::curvature::IntrinsicVolumes;
use crate::diagnostics::{DegeneracyReport, EventClass, ProbeReport};
use crate::error::{Condition, Error, Result};
use crate::geom::{Ball, BallSet, Momentum, Vec3};
use crate::gradient::GaussGradient;

pub const SCHEMA_VERSION: &str = "spacefill.result/1";

/// Significant-digit-exact text form of a float: 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

struct Token<'a> {
    column: usize,
    text: &'a str,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (pos, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(pos),
            (true, Some(s)) => {
                out.push(Token {
                    column: line[..s].chars().count() + 1,
                    text: &line[s..pos],
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn number(tok: &Token<'_>, line: usize) -> Result<f64> {
    let v: f64 = tok.text.parse().map_err(|_| Error::Parse {
        line,
        column: tok.column,
        message: format!("malformed number '{}'", tok.text),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            column: tok.column,
            message: format!("non-finite number '{}'", tok.text),
        });
    }
    Ok(v)
}

/// Numeric rows of a file with `width` columns each, tagged by line number.
fn rows(text: &str, width: usize) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut out = Vec::new();
    let mut header = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokens(raw);
        if toks.is_empty() || toks[0].text.starts_with('#') {
            continue;
        }
        if toks[0].text == "n" {
            if header.is_some() || !out.is_empty() {
                return Err(Error::Parse {
                    line,
                    column: toks[0].column,
                    message: "header must precede all balls and appear once".into(),
                });
            }
            if toks.len() != 2 {
                return Err(Error::Parse {
                    line,
                    column: toks[0].column,
                    message: "header must be 'n <count>'".into(),
                });
            }
            let count = toks[1].text.parse::<usize>().map_err(|_| Error::Parse {
                line,
                column: toks[1].column,
                message: format!("malformed count '{}'", toks[1].text),
            })?;
            header = Some((line, count));
            continue;
        }
        if toks.len() != width {
            let column = toks.get(width).map_or(raw.chars().count() + 1, |t| t.column);
            return Err(Error::Parse {
                line,
                column,
                message: format!("expected {width} fields, found {}", toks.len()),
            });
        }
        let vals = toks.iter().map(|t| number(t, line)).collect::<Result<Vec<_>>>()?;
        out.push((line, vals));
    }
    if let Some((line, count)) = header {
        if count != out.len() {
            return Err(Error::Validation {
                line,
                message: format!("header declares {count} entries, file has {}", out.len()),
            });
        }
    }
    Ok(out)
}

pub fn parse_diagram_str(text: &str) -> Result<BallSet> {
    let rows = rows(text, 5)?;
    rows.into_iter()
        .map(|(line, v)| {
            if v[3] <= 0.0 {
                return Err(Error::Validation {
                    line,
                    message: format!("radius must be positive, got {}", v[3]),
                });
            }
            Ok(Ball::new([v[0], v[1], v[2]], v[3], v[4]))
        })
        .collect::<Result<Vec<_>>>()
        .map(BallSet::new)
}

pub fn parse_diagram(path: &Path) -> Result<BallSet> {
    parse_diagram_str(&std::fs::read_to_string(path)?)
}

pub fn parse_momentum_str(text: &str, n: usize) -> Result<Momentum> {
    let rows = rows(text, 3)?;
    if rows.len() != n {
        return Err(Error::DimensionMismatch {
            expected: 3 * n,
            got: 3 * rows.len(),
        });
    }
    Ok(Momentum::new(rows.into_iter().flat_map(|(_, v)| v).collect()))
}

pub fn parse_momentum(path: &Path, n: usize) -> Result<Momentum> {
    parse_momentum_str(&std::fs::read_to_string(path)?, n)
}

/// Diagram file text with a header and 17 significant digits per value.
pub fn write_diagram(balls: &BallSet) -> String {
    let mut out = format!("n {}\n", balls.len());
    for b in balls.iter() {
        let c = b.center;
        let fields = [c.x, c.y, c.z, b.radius, b.weight].map(format_float);
        writeln!(out, "{}", fields.join(" ")).unwrap();
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// A float serialized with 17 significant digits, or `null` if not finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format_float(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

fn vec3(v: &Vec3) -> [Num; 3] {
    [Num(v.x), Num(v.y), Num(v.z)]
}

fn vecs(vs: &[Vec3]) -> Vec<[Num; 3]> {
    vs.iter().map(vec3).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub geometric: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degeneracy: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fd_tol: Option<Num>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub input_sha256: String,
    pub seed: Option<u64>,
    pub mc_samples: Option<u64>,
    pub tolerances: Tolerances,
    pub version: String,
}

impl Provenance {
    pub fn new(input: &[u8], balls: &BallSet) -> Self {
        Provenance {
            input_sha256: sha256_hex(input),
            seed: None,
            mc_samples: None,
            tolerances: Tolerances {
                geometric: Num(balls.length_tolerance()),
                degeneracy: None,
                fd_step: None,
                fd_tol: None,
            },
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussBreakdownDoc {
    pub patches: Num,
    pub arcs: Num,
    pub corners: Num,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct IntrinsicVolumesDoc {
    #[serde(rename = "V", skip_serializing_if = "Option::is_none")]
    pub volume: Option<Num>,
    #[serde(rename = "V_std_error", skip_serializing_if = "Option::is_none")]
    pub volume_std_error: Option<Num>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub area: Option<Num>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub mean: Option<Num>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub gauss: Option<Num>,
    #[serde(rename = "K_breakdown", skip_serializing_if = "Option::is_none")]
    pub gauss_breakdown: Option<GaussBreakdownDoc>,
}

impl From<&IntrinsicVolumes> for IntrinsicVolumesDoc {
    fn from(v: &IntrinsicVolumes) -> Self {
        IntrinsicVolumesDoc {
            volume: Some(Num(v.volume)),
            volume_std_error: Some(Num(v.volume_std_error)),
            area: Some(Num(v.area)),
            mean: Some(Num(v.mean)),
            gauss: Some(Num(v.gauss)),
            gauss_breakdown: Some(GaussBreakdownDoc {
                patches: Num(v.gauss_breakdown.patches),
                arcs: Num(v.gauss_breakdown.arcs),
                corners: Num(v.gauss_breakdown.corners),
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GradientDoc {
    pub g: Vec<[Num; 3]>,
    pub d: Vec<[Num; 3]>,
    pub e: Vec<[Num; 3]>,
    pub f: Vec<[Num; 3]>,
    pub h: Vec<[Num; 3]>,
}

impl From<&GaussGradient> for GradientDoc {
    fn from(g: &GaussGradient) -> Self {
        GradientDoc {
            g: vecs(&g.g),
            d: vecs(&g.d),
            e: vecs(&g.e),
            f: vecs(&g.f),
            h: vecs(&g.h),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationDoc {
    pub condition: Condition,
    pub simplex: Vec<usize>,
    pub residual: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub event_class: Option<EventClass>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegeneracyDoc {
    pub min_residual: Num,
    pub violations: Vec<ViolationDoc>,
}

impl From<&DegeneracyReport> for DegeneracyDoc {
    fn from(r: &DegeneracyReport) -> Self {
        DegeneracyDoc {
            min_residual: Num(r.min_residual),
            violations: r
                .violations
                .iter()
                .map(|v| ViolationDoc {
                    condition: v.condition,
                    simplex: v.simplex.clone(),
                    residual: Num(v.residual),
                    event_class: v.event,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeSampleDoc {
    pub tau: Num,
    #[serde(rename = "K")]
    pub gauss: Option<Num>,
    pub grad_norm: Option<Num>,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeEventDoc {
    pub tau: Num,
    #[serde(rename = "K_left")]
    pub gauss_left: Option<Num>,
    #[serde(rename = "K_right")]
    pub gauss_right: Option<Num>,
    #[serde(rename = "K_jump")]
    pub gauss_jump: Option<Num>,
    pub grad_jump_relative: Option<Num>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeDoc {
    pub samples: Vec<ProbeSampleDoc>,
    pub events: Vec<ProbeEventDoc>,
}

impl From<&ProbeReport> for ProbeDoc {
    fn from(r: &ProbeReport) -> Self {
        ProbeDoc {
            samples: r
                .samples
                .iter()
                .map(|s| ProbeSampleDoc {
                    tau: Num(s.tau),
                    gauss: s.gauss.map(Num),
                    grad_norm: s.grad_norm.map(Num),
                    degenerate: !s.defined,
                    error: s.error.clone(),
                })
                .collect(),
            events: r
                .events
                .iter()
                .map(|e| ProbeEventDoc {
                    tau: Num(e.tau),
                    gauss_left: e.gauss_left.map(Num),
                    gauss_right: e.gauss_right.map(Num),
                    gauss_jump: e.gauss_jump().map(Num),
                    grad_jump_relative: e.grad_jump().map(Num),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FdCheckDoc {
    pub analytic: Vec<Num>,
    pub finite_difference: Vec<Num>,
    pub max_relative_error: Num,
    pub passed: bool,
}

/// Versioned output document; sections absent from a run are omitted.
#[derive(Debug, Clone, Serialize)]
pub struct ResultDocument {
    pub schema: &'static str,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intrinsic_volumes: Option<IntrinsicVolumesDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradient: Option<GradientDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degeneracy: Option<DegeneracyDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fdcheck: Option<FdCheckDoc>,
}

impl ResultDocument {
    pub fn new(provenance: Provenance) -> Self {
        ResultDocument {
            schema: SCHEMA_VERSION,
            provenance,
            intrinsic_volumes: None,
            gradient: None,
            degeneracy: None,
            probe: None,
            fdcheck: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_balls() {
        let b = parse_diagram_str("0 0 0 1 1\n1 0 0 1 1").unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[1].center, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!((b[0].radius, b[0].weight), (1.0, 1.0));
    }

    #[test]
    fn negative_radius_rejected() {
        match parse_diagram_str("0 0 0 -1 1") {
            Err(Error::Validation { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comments_and_header() {
        let text = "# two balls\nn 2\n\n0 0 0 1 1\n# middle\n1 0 0 1 2\n";
        let b = parse_diagram_str(text).unwrap();
        assert_eq!(b[1].weight, 2.0);
        match parse_diagram_str("n 3\n0 0 0 1 1\n") {
            Err(Error::Validation { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_number_location() {
        match parse_diagram_str("0 0 0 1 1\n0  x 0 1 1\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 4)),
            other => panic!("{other:?}"),
        }
        match parse_diagram_str("0 0 0 1\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 8)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let balls = BallSet::new(vec![
            Ball::new([0.1, -1.0 / 3.0, 2.0f64.sqrt()], std::f64::consts::PI, -0.7),
            Ball::new([1e-300, 123456.789, -0.0], 1e-5, 1.0 / 7.0),
        ]);
        let back = parse_diagram_str(&write_diagram(&balls)).unwrap();
        assert_eq!(back, balls);
    }

    #[test]
    fn floats_have_seventeen_digits() {
        let json = serde_json::to_string(&[Num(0.1), Num(f64::NAN)]).unwrap();
        assert_eq!(json, "[1.0000000000000001e-1,null]");
    }

    #[test]
    fn momentum_rows() {
        let t = parse_momentum_str("# t\n1 0 0\n0 0 -1\n", 2).unwrap();
        assert_eq!(t.as_slice(), &[1.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
        assert!(matches!(
            parse_momentum_str("1 0 0\n", 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
