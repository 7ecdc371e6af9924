//! Dubins path connection, arc-length truncation, and pose interpolation
//! for a constant-curvature fixed-wing vehicle.
//!
//! Altitude is interpolated linearly along planar arc-length; edge cost is
//! the planar Dubins length in meters.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Wraps an angle into `[0, 2pi)`.
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r == TAU {
        0.0
    } else {
        r
    }
}

/// Planar pose plus altitude of the sensor platform.
///
/// `x` is meters east, `y` meters north, `z` meters above the ground plane,
/// `psi` the heading in radians, always normalized to `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub psi: f64,
}

impl VehicleState {
    pub fn new(x: f64, y: f64, z: f64, psi: f64) -> Self {
        Self {
            x,
            y,
            z,
            psi: normalize_angle(psi),
        }
    }

    /// Euclidean distance in the ground plane.
    pub fn planar_distance(&self, other: &VehicleState) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Euclidean distance over (x, y, z).
    pub fn distance_3d(&self, other: &VehicleState) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentKind {
    LeftArc,
    RightArc,
    Straight,
}

/// One of the six Dubins word classes, in the fixed evaluation order used
/// for deterministic tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Word {
    Lsl,
    Rsr,
    Lsr,
    Rsl,
    Rlr,
    Lrl,
}

const WORDS: [Word; 6] = [Word::Lsl, Word::Rsr, Word::Lsr, Word::Rsl, Word::Rlr, Word::Lrl];

impl Word {
    fn kinds(self) -> [SegmentKind; 3] {
        use SegmentKind::*;
        match self {
            Word::Lsl => [LeftArc, Straight, LeftArc],
            Word::Rsr => [RightArc, Straight, RightArc],
            Word::Lsr => [LeftArc, Straight, RightArc],
            Word::Rsl => [RightArc, Straight, LeftArc],
            Word::Rlr => [RightArc, LeftArc, RightArc],
            Word::Lrl => [LeftArc, RightArc, LeftArc],
        }
    }
}

/// A Dubins edge between two poses.
///
/// `segments` hold real (meter) lengths; `total_length` always equals their
/// sum. The end pose is the result of propagating the segments from `start`,
/// with altitude interpolated linearly along arc-length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathEdge {
    pub start: VehicleState,
    pub end: VehicleState,
    pub segments: Vec<(SegmentKind, f64)>,
    pub turn_radius: f64,
    pub total_length: f64,
}

/// Normalized segment parameters for one word, or `None` if infeasible.
fn word_params(word: Word, alpha: f64, beta: f64, d: f64) -> Option<[f64; 3]> {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let c_ab = (alpha - beta).cos();

    // Guard tiny negative discriminants from rounding.
    let clamp_sq = |p_sq: f64| {
        if p_sq < -1e-9 {
            None
        } else {
            Some(p_sq.max(0.0))
        }
    };

    match word {
        Word::Lsl => {
            let p_sq = clamp_sq(2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sa - sb))?;
            let tmp = (cb - ca).atan2(d + sa - sb);
            Some([
                normalize_angle(tmp - alpha),
                p_sq.sqrt(),
                normalize_angle(beta - tmp),
            ])
        }
        Word::Rsr => {
            let p_sq = clamp_sq(2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sb - sa))?;
            let tmp = (ca - cb).atan2(d - sa + sb);
            Some([
                normalize_angle(alpha - tmp),
                p_sq.sqrt(),
                normalize_angle(tmp - beta),
            ])
        }
        Word::Lsr => {
            let p_sq = clamp_sq(-2.0 + d * d + 2.0 * c_ab + 2.0 * d * (sa + sb))?;
            let p = p_sq.sqrt();
            let tmp = (-ca - cb).atan2(d + sa + sb) - (-2.0f64).atan2(p);
            Some([
                normalize_angle(tmp - alpha),
                p,
                normalize_angle(tmp - normalize_angle(beta)),
            ])
        }
        Word::Rsl => {
            let p_sq = clamp_sq(-2.0 + d * d + 2.0 * c_ab - 2.0 * d * (sa + sb))?;
            let p = p_sq.sqrt();
            let tmp = (ca + cb).atan2(d - sa - sb) - 2.0f64.atan2(p);
            Some([
                normalize_angle(alpha - tmp),
                p,
                normalize_angle(beta - tmp),
            ])
        }
        Word::Rlr => {
            let tmp = (6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sa - sb)) / 8.0;
            if tmp.abs() > 1.0 + 1e-12 {
                return None;
            }
            let phi = (ca - cb).atan2(d - sa + sb);
            let p = normalize_angle(TAU - tmp.clamp(-1.0, 1.0).acos());
            let t = normalize_angle(alpha - phi + normalize_angle(p / 2.0));
            let q = normalize_angle(alpha - beta - t + normalize_angle(p));
            Some([t, p, q])
        }
        Word::Lrl => {
            let tmp = (6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sb - sa)) / 8.0;
            if tmp.abs() > 1.0 + 1e-12 {
                return None;
            }
            let phi = (ca - cb).atan2(d + sa - sb);
            let p = normalize_angle(TAU - tmp.clamp(-1.0, 1.0).acos());
            let t = normalize_angle(-alpha - phi + p / 2.0);
            let q = normalize_angle(normalize_angle(beta) - alpha - t + normalize_angle(p));
            Some([t, p, q])
        }
    }
}

/// Propagates a planar pose through one segment of the given length.
fn step(x: f64, y: f64, psi: f64, kind: SegmentKind, len: f64, radius: f64) -> (f64, f64, f64) {
    match kind {
        SegmentKind::Straight => (x + len * psi.cos(), y + len * psi.sin(), psi),
        SegmentKind::LeftArc => {
            let npsi = psi + len / radius;
            (
                x + radius * (npsi.sin() - psi.sin()),
                y - radius * (npsi.cos() - psi.cos()),
                normalize_angle(npsi),
            )
        }
        SegmentKind::RightArc => {
            let npsi = psi - len / radius;
            (
                x - radius * (npsi.sin() - psi.sin()),
                y + radius * (npsi.cos() - psi.cos()),
                normalize_angle(npsi),
            )
        }
    }
}

/// Shortest planar Dubins path between two poses.
///
/// All six word classes are evaluated; ties are broken by the fixed word
/// order. Identical poses yield a zero-length edge. Altitude runs linearly
/// from `from.z` to `to.z` along arc-length and does not contribute to
/// `total_length`.
pub fn connect(from: VehicleState, to: VehicleState, turn_radius: f64) -> PathEdge {
    assert!(turn_radius > 0.0, "turn radius must be positive");

    let dx = to.x - from.x;
    let dy = to.y - from.y;
    let dist = dx.hypot(dy);
    let d = dist / turn_radius;
    let theta = if dist > 0.0 { dy.atan2(dx) } else { 0.0 };
    let alpha = normalize_angle(from.psi - theta);
    let beta = normalize_angle(to.psi - theta);

    let mut best: Option<(Word, [f64; 3], f64)> = None;
    for word in WORDS {
        if let Some(params) = word_params(word, alpha, beta, d) {
            let len = params[0] + params[1] + params[2];
            if best.as_ref().map_or(true, |(_, _, l)| len < *l) {
                best = Some((word, params, len));
            }
        }
    }
    let (word, params, _) = best.expect("dubins connection must exist");

    let kinds = word.kinds();
    let mut segments = Vec::with_capacity(3);
    let mut total_length = 0.0;
    for i in 0..3 {
        let len = params[i] * turn_radius;
        if len > 0.0 {
            segments.push((kinds[i], len));
            total_length += len;
        }
    }

    let (mut x, mut y, mut psi) = (from.x, from.y, from.psi);
    for &(kind, len) in &segments {
        (x, y, psi) = step(x, y, psi, kind, len, turn_radius);
    }

    PathEdge {
        start: from,
        end: VehicleState {
            x,
            y,
            z: to.z,
            psi,
        },
        segments,
        turn_radius,
        total_length,
    }
}

/// Pose on the edge at arc-length `s`; heading tangent to the path.
pub fn pose_at(edge: &PathEdge, s: f64) -> Result<VehicleState, Error> {
    if !(0.0..=edge.total_length).contains(&s) {
        return Err(Error::ArcLengthOutOfRange {
            s,
            length: edge.total_length,
        });
    }
    if s == edge.total_length {
        return Ok(edge.end);
    }
    let z = if edge.total_length > 0.0 {
        edge.start.z + (s / edge.total_length) * (edge.end.z - edge.start.z)
    } else {
        edge.start.z
    };
    let (mut x, mut y, mut psi) = (edge.start.x, edge.start.y, edge.start.psi);
    let mut rest = s;
    for &(kind, len) in &edge.segments {
        if rest <= 0.0 {
            break;
        }
        let take = rest.min(len);
        (x, y, psi) = step(x, y, psi, kind, take, edge.turn_radius);
        rest -= take;
    }
    Ok(VehicleState { x, y, z, psi })
}

/// Prefix of the edge with `total_length == s`; the end pose is
/// `pose_at(edge, s)`.
pub fn truncate(edge: &PathEdge, s: f64) -> Result<PathEdge, Error> {
    if !(0.0..=edge.total_length).contains(&s) {
        return Err(Error::ArcLengthOutOfRange {
            s,
            length: edge.total_length,
        });
    }
    if s == edge.total_length {
        return Ok(edge.clone());
    }
    let end = pose_at(edge, s)?;
    let mut segments = Vec::new();
    let mut acc = 0.0;
    for &(kind, len) in &edge.segments {
        if acc + len < s {
            segments.push((kind, len));
            acc += len;
        } else {
            let last = s - acc;
            if last > 0.0 {
                segments.push((kind, last));
            }
            break;
        }
    }
    Ok(PathEdge {
        start: edge.start,
        end,
        segments,
        turn_radius: edge.turn_radius,
        total_length: s,
    })
}
