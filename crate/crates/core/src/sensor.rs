//! Range-dependent detection model, camera footprint projection onto the
//! ground plane, minimum-slant-range geometry for straight edges, and the
//! informed state sampler.

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::belief::BeliefGrid;
use crate::dubins::VehicleState;
use crate::Error;

/// Camera mounting geometry and detection-rate parameters.
///
/// `pitch` is measured from nadir (0 = straight down); the camera looks
/// forward along the vehicle heading. `a`, `b`, `c` shape the logistic
/// detection-rate curve and `beta` is the range beyond which measurements
/// are uninformative (rate 0.5). `v_opt` is the preferred vertical placement
/// of a target in the image frame, as a fraction between the bottom of the
/// frame and the optical axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorConfig {
    pub pitch: f64,
    pub vfov: f64,
    pub hfov: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub beta: f64,
    pub v_opt: f64,
}

impl Default for SensorConfig {
    fn default() -> Self {
        Self {
            pitch: 65f64.to_radians(),
            vfov: 40f64.to_radians(),
            hfov: 60f64.to_radians(),
            a: 1.0,
            b: 0.05,
            c: 250.0,
            beta: 250.0,
            v_opt: 0.5,
        }
    }
}

impl SensorConfig {
    pub fn validate(&self) -> Result<(), Error> {
        use std::f64::consts::{FRAC_PI_2, PI};
        if !(0.0..FRAC_PI_2).contains(&self.pitch) {
            return Err(Error::Config(format!("pitch {} outside [0, pi/2)", self.pitch)));
        }
        if !(self.vfov > 0.0 && self.vfov < PI) {
            return Err(Error::Config(format!("vfov {} outside (0, pi)", self.vfov)));
        }
        if !(self.hfov > 0.0 && self.hfov < PI) {
            return Err(Error::Config(format!("hfov {} outside (0, pi)", self.hfov)));
        }
        if !(self.beta > 0.0) {
            return Err(Error::Config(format!("beta {} <= 0", self.beta)));
        }
        if !(self.a >= 1.0) {
            return Err(Error::Config(format!("a {} < 1", self.a)));
        }
        if !(0.0..=1.0).contains(&self.v_opt) {
            return Err(Error::Config(format!("v_opt {} outside [0, 1]", self.v_opt)));
        }
        if self.pitch + self.vfov / 2.0 >= FRAC_PI_2 {
            return Err(Error::Config(
                "top-of-frame ray must hit the ground: pitch + vfov/2 < pi/2".into(),
            ));
        }
        // Keeps the detection rate near-continuous at the beta cutoff so the
        // true positive rate never drops meaningfully below the false
        // positive rate inside the sensing range.
        if self.beta.is_finite() {
            let gap = (detection_rate(self.beta, self) - 0.5).abs();
            if gap > 0.02 {
                return Err(Error::Config(format!(
                    "detection rate at beta is {:.4}, more than 0.02 from 0.5",
                    detection_rate(self.beta, self)
                )));
            }
        }
        Ok(())
    }
}

/// Detection rate `f(r)`: true positive rate of the perception system at
/// range `r`; the false positive rate is its complement. Beyond `beta` the
/// rate is 0.5 and measurements are uninformative.
pub fn detection_rate(r: f64, cfg: &SensorConfig) -> f64 {
    if r > cfg.beta {
        0.5
    } else {
        1.0 / (cfg.a + (cfg.b * (r - cfg.c)).exp())
    }
}

/// Ground projection of the camera frustum: an isosceles trapezoid for a
/// level vehicle, stored counterclockwise as near-right, far-right,
/// far-left, near-left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootprintPolygon {
    pub corners: [(f64, f64); 4],
}

impl FootprintPolygon {
    /// Point containment, boundary inclusive.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        for i in 0..4 {
            let (ax, ay) = self.corners[i];
            let (bx, by) = self.corners[(i + 1) % 4];
            let cross = (bx - ax) * (y - ay) - (by - ay) * (x - ax);
            if cross < -1e-7 {
                return false;
            }
        }
        true
    }

    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        let xs = self.corners.iter().map(|c| c.0);
        let ys = self.corners.iter().map(|c| c.1);
        (
            xs.clone().fold(f64::INFINITY, f64::min),
            ys.clone().fold(f64::INFINITY, f64::min),
            xs.fold(f64::NEG_INFINITY, f64::max),
            ys.fold(f64::NEG_INFINITY, f64::max),
        )
    }
}

/// Frame geometry shared by the footprint and edge-range computations, all
/// in the vehicle frame at altitude `z`: forward offsets of the near and far
/// frame edges and their lateral half-widths.
#[derive(Debug, Clone, Copy)]
pub struct FrameGeometry {
    pub near_fwd: f64,
    pub far_fwd: f64,
    pub near_half: f64,
    pub far_half: f64,
}

impl FrameGeometry {
    pub fn new(cfg: &SensorConfig, z: f64) -> Self {
        let lo = cfg.pitch - cfg.vfov / 2.0;
        let hi = cfg.pitch + cfg.vfov / 2.0;
        let spread = (cfg.hfov / 2.0).tan();
        Self {
            near_fwd: z * lo.tan(),
            far_fwd: z * hi.tan(),
            near_half: z / lo.cos() * spread,
            far_half: z / hi.cos() * spread,
        }
    }

    /// Lateral half-width of the footprint at forward offset `fwd`,
    /// clamped to the frame extent.
    pub fn half_width_at(&self, fwd: f64) -> f64 {
        let t = (fwd - self.near_fwd) / (self.far_fwd - self.near_fwd);
        self.near_half + t.clamp(0.0, 1.0) * (self.far_half - self.near_half)
    }
}

/// Camera footprint on the ground plane for the given vehicle pose.
pub fn footprint(state: &VehicleState, cfg: &SensorConfig) -> FootprintPolygon {
    let g = FrameGeometry::new(cfg, state.z);
    let local = [
        (g.near_fwd, -g.near_half),
        (g.far_fwd, -g.far_half),
        (g.far_fwd, g.far_half),
        (g.near_fwd, g.near_half),
    ];
    let (s, c) = state.psi.sin_cos();
    let mut corners = [(0.0, 0.0); 4];
    for (i, (fx, fy)) in local.into_iter().enumerate() {
        corners[i] = (state.x + fx * c - fy * s, state.y + fx * s + fy * c);
    }
    FootprintPolygon { corners }
}

/// Indices of every cell whose center lies inside the polygon, clipped to
/// the grid, in ascending row-major order.
pub fn cells_in_footprint(poly: &FootprintPolygon, grid: &BeliefGrid) -> Vec<usize> {
    let (minx, miny, maxx, maxy) = poly.bounds();
    let mut out = Vec::new();
    for_cells_in_rect(grid, minx, miny, maxx, maxy, |idx, cx, cy| {
        if poly.contains(cx, cy) {
            out.push(idx);
        }
    });
    out
}

/// Visits every grid cell whose center lies in the rectangle.
pub(crate) fn for_cells_in_rect(
    grid: &BeliefGrid,
    minx: f64,
    miny: f64,
    maxx: f64,
    maxy: f64,
    mut visit: impl FnMut(usize, f64, f64),
) {
    let lo = |v: f64, o: f64| ((v - o) / grid.cell_size - 0.5).ceil() as i64;
    let hi = |v: f64, o: f64| ((v - o) / grid.cell_size - 0.5).floor() as i64;
    let ix0 = lo(minx, grid.origin.0).max(0);
    let iy0 = lo(miny, grid.origin.1).max(0);
    let ix1 = hi(maxx, grid.origin.0).min(grid.width_cells as i64 - 1);
    let iy1 = hi(maxy, grid.origin.1).min(grid.height_cells as i64 - 1);
    if ix0 > ix1 || iy0 > iy1 {
        return;
    }
    for iy in (iy0 as usize)..=(iy1 as usize) {
        let cy = grid.origin.1 + (iy as f64 + 0.5) * grid.cell_size;
        for ix in (ix0 as usize)..=(ix1 as usize) {
            let cx = grid.origin.0 + (ix as f64 + 0.5) * grid.cell_size;
            visit(grid.index(ix, iy), cx, cy);
        }
    }
}

/// Lateral distance from the edge line at which a cell's closest approach
/// moves from the bottom of the image frame to its left or right edge.
pub fn transition_distance(cfg: &SensorConfig, z: f64) -> f64 {
    if cfg.pitch > cfg.vfov / 2.0 {
        // half-length of the footprint bottom edge
        z / (cfg.pitch - cfg.vfov / 2.0).cos() * (cfg.hfov / 2.0).tan()
    } else {
        z * (cfg.hfov / 2.0).tan()
    }
}

/// Minimum slant range from the vehicle to a ground point at perpendicular
/// distance `d` from an infinite straight edge flown at altitude `z`,
/// minimized over every pose whose footprint contains the point.
///
/// Returns infinity when the point never enters the sliding footprint.
pub fn min_range_to_edge(d: f64, cfg: &SensorConfig, z: f64) -> f64 {
    debug_assert!(d >= 0.0);
    let g = FrameGeometry::new(cfg, z);
    if d > g.far_half {
        return f64::INFINITY;
    }
    // Forward offset of the closest pose that still sees the point: the
    // bottom frame edge for d within its half-width, the slanted side edge
    // beyond it, never behind the closest approach abeam.
    let exit_fwd = if d <= g.near_half {
        g.near_fwd
    } else {
        g.near_fwd + (d - g.near_half) * (g.far_fwd - g.near_fwd) / (g.far_half - g.near_half)
    };
    let fwd = exit_fwd.max(0.0);
    (d * d + fwd * fwd + z * z).sqrt()
}

/// Cumulative-sum table for weighted sampling over cell indices.
///
/// Built once per plan; the weights derive from the static prior.
#[derive(Debug, Clone)]
pub struct WeightedSampler {
    cum: Vec<f64>,
    total: f64,
}

impl WeightedSampler {
    pub fn new(weights: &[f64]) -> Result<Self, Error> {
        let mut cum = Vec::with_capacity(weights.len());
        let mut total = 0.0;
        for &w in weights {
            if !(w >= 0.0) {
                return Err(Error::Config(format!("negative sampling weight {w}")));
            }
            total += w;
            cum.push(total);
        }
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::ZeroWeights);
        }
        Ok(Self { cum, total })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let u = rng.random_range(0.0..self.total);
        self.cum.partition_point(|&c| c <= u).min(self.cum.len() - 1)
    }
}

/// Deterministic part of informed sampling: shifts the pose back along the
/// heading so the target cell sits at image-frame vertical fraction `v_opt`.
pub fn informed_state(cell_center: (f64, f64), z: f64, psi: f64, cfg: &SensorConfig) -> VehicleState {
    let shift = z * (cfg.pitch - cfg.v_opt * cfg.vfov / 2.0).tan();
    VehicleState::new(
        cell_center.0 - shift * psi.cos(),
        cell_center.1 - shift * psi.sin(),
        z,
        psi,
    )
}

/// Draws a vehicle state biased toward high-reward cells: weighted cell
/// choice, uniform altitude and heading, then the `v_opt` placement shift.
pub fn informed_sample<R: Rng>(
    grid: &BeliefGrid,
    sampler: &WeightedSampler,
    cfg: &SensorConfig,
    z_range: (f64, f64),
    rng: &mut R,
) -> VehicleState {
    let idx = sampler.sample(rng);
    let z = if z_range.1 > z_range.0 {
        rng.random_range(z_range.0..=z_range.1)
    } else {
        z_range.0
    };
    let psi = rng.random_range(0.0..TAU);
    informed_state(grid.cell_center(idx), z, psi, cfg)
}

/// Slant range at which a cell is seen when placed at image fraction
/// `v_opt` from altitude `z`; the range the sampling weights assume.
pub fn optimal_range(cfg: &SensorConfig, z: f64) -> f64 {
    z / (cfg.pitch - cfg.v_opt * cfg.vfov / 2.0).cos()
}
