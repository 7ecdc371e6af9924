//! Trajectory information rewards: optimistic per-cell entropy reduction,
//! node rewards over the camera footprint, the sliding-footprint edge-reward
//! approximation, and sequential belief replay along a tree branch.

use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::belief::{bayes_update, entropy, BeliefGrid};
use crate::dubins::{normalize_angle, pose_at, PathEdge, VehicleState};
use crate::sensor::{
    detection_rate, footprint, for_cells_in_rect, optimal_range, FrameGeometry, SensorConfig,
};
use crate::Error;

/// Arc-length of the chords used to approximate edges when sweeping the
/// footprint. Bounds the chordization error of arc segments by the sagitta.
pub const CHORD_LENGTH: f64 = 25.0;

/// Weights biasing entropy reduction toward increasing (`r_p`) or
/// decreasing (`r_n`) cell probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardWeights {
    pub r_p: f64,
    pub r_n: f64,
}

impl Default for RewardWeights {
    fn default() -> Self {
        Self { r_p: 1.0, r_n: 0.2 }
    }
}

impl RewardWeights {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.r_p >= 0.0 && self.r_n >= 0.0 && (self.r_p > 0.0 || self.r_n > 0.0)) {
            return Err(Error::Config(format!(
                "reward weights ({}, {}) must be non-negative with one positive",
                self.r_p, self.r_n
            )));
        }
        Ok(())
    }
}

/// Copy-on-write view of the belief grid along one tree branch.
///
/// A lookup returns the nearest ancestor's entry for the cell, falling back
/// to the prior grid. Overlays never change once created.
#[derive(Debug)]
pub struct BeliefOverlay {
    parent: Option<Rc<BeliefOverlay>>,
    touched: HashMap<usize, f64>,
}

impl BeliefOverlay {
    pub fn root() -> Rc<Self> {
        Rc::new(Self {
            parent: None,
            touched: HashMap::new(),
        })
    }

    /// Current posterior for the cell under this overlay chain.
    pub fn prob(&self, cell: usize, grid: &BeliefGrid) -> f64 {
        let mut node = Some(self);
        while let Some(o) = node {
            if let Some(&p) = o.touched.get(&cell) {
                return p;
            }
            node = o.parent.as_deref();
        }
        grid.probs[cell]
    }

    fn child(parent: &Rc<Self>, touched: HashMap<usize, f64>) -> Rc<Self> {
        if touched.is_empty() {
            Rc::clone(parent)
        } else {
            Rc::new(Self {
                parent: Some(Rc::clone(parent)),
                touched,
            })
        }
    }
}

/// Optimistic single-cell reward: assume the measurement that matches the
/// current belief, weight the entropy reduction, and return the posterior.
/// Beyond the sensor cutoff the rates are 0.5 and the belief is unchanged.
pub fn cell_reward(p: f64, r: f64, cfg: &SensorConfig, w: &RewardWeights) -> (f64, f64) {
    let tpr = detection_rate(r, cfg);
    let fpr = 1.0 - tpr;
    if p >= 0.5 {
        let post = bayes_update(p, tpr, fpr, true);
        (w.r_p * (entropy(p) - entropy(post)).max(0.0), post)
    } else {
        let post = bayes_update(p, tpr, fpr, false);
        (w.r_n * (entropy(p) - entropy(post)).max(0.0), post)
    }
}

/// Ground-plane radius within which a cell can be inside the sensor cutoff.
fn ground_reach(beta: f64, z: f64) -> f64 {
    if beta.is_infinite() {
        f64::INFINITY
    } else if beta <= z {
        0.0
    } else {
        (beta * beta - z * z).sqrt()
    }
}

/// Reward for observing from a single pose: one optimistic update per cell
/// in the footprint, summed, with the posteriors written to a child overlay.
/// Cells beyond the cutoff contribute nothing and are not written.
pub fn node_reward(
    state: &VehicleState,
    overlay: &Rc<BeliefOverlay>,
    grid: &BeliefGrid,
    cfg: &SensorConfig,
    w: &RewardWeights,
) -> (f64, Rc<BeliefOverlay>) {
    let reach = ground_reach(cfg.beta, state.z);
    if reach <= 0.0 {
        return (0.0, Rc::clone(overlay));
    }
    let poly = footprint(state, cfg);
    let (minx, miny, maxx, maxy) = poly.bounds();
    let mut reward = 0.0;
    let mut touched = HashMap::new();
    for_cells_in_rect(
        grid,
        minx.max(state.x - reach),
        miny.max(state.y - reach),
        maxx.min(state.x + reach),
        maxy.min(state.y + reach),
        |idx, cx, cy| {
            if !poly.contains(cx, cy) {
                return;
            }
            let dx = cx - state.x;
            let dy = cy - state.y;
            let r = (dx * dx + dy * dy + state.z * state.z).sqrt();
            if r > cfg.beta {
                return;
            }
            let p = overlay.prob(idx, grid);
            let (rew, post) = cell_reward(p, r, cfg, w);
            reward += rew;
            touched.insert(idx, post);
        },
    );
    (reward, BeliefOverlay::child(overlay, touched))
}

/// Reward gathered while traversing an edge.
///
/// The edge is chordized; for every cell swept by the sliding footprint the
/// minimum slant range over the traversal is found (bottom-of-frame exit
/// geometry inside a chord, Euclidean range from the clamped pose at chord
/// ends), and one optimistic update is applied per cell at that range.
pub fn edge_reward(
    edge: &PathEdge,
    overlay: &Rc<BeliefOverlay>,
    grid: &BeliefGrid,
    cfg: &SensorConfig,
    w: &RewardWeights,
) -> (f64, Rc<BeliefOverlay>) {
    if edge.total_length == 0.0 {
        return node_reward(&edge.start, overlay, grid, cfg, w);
    }
    let n_chords = (edge.total_length / CHORD_LENGTH).ceil() as usize;
    let mut poses = Vec::with_capacity(n_chords + 1);
    for i in 0..=n_chords {
        let s = if i == n_chords {
            edge.total_length
        } else {
            edge.total_length * i as f64 / n_chords as f64
        };
        poses.push(pose_at(edge, s).expect("in-range arc length"));
    }

    let mut best_range: HashMap<usize, f64> = HashMap::new();
    for pair in poses.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let cdx = b.x - a.x;
        let cdy = b.y - a.y;
        let clen = cdx.hypot(cdy);
        if clen < 1e-9 {
            continue;
        }
        let dir = (cdx / clen, cdy / clen);
        let zm = 0.5 * (a.z + b.z);
        let reach = ground_reach(cfg.beta, zm);
        if reach <= 0.0 {
            continue;
        }
        let g = FrameGeometry::new(cfg, zm);
        let dlim = g.far_half.min(reach);
        let minx = a.x.min(b.x) - reach;
        let maxx = a.x.max(b.x) + reach;
        let miny = a.y.min(b.y) - reach;
        let maxy = a.y.max(b.y) + reach;
        for_cells_in_rect(grid, minx, miny, maxx, maxy, |idx, cx, cy| {
            let relx = cx - a.x;
            let rely = cy - a.y;
            let fwd_foot = relx * dir.0 + rely * dir.1;
            let d = (relx * dir.1 - rely * dir.0).abs();
            if d > dlim {
                return;
            }
            // forward offset of the last pose that still sees the cell
            let exit_fwd = if d <= g.near_half {
                g.near_fwd
            } else {
                g.near_fwd
                    + (d - g.near_half) * (g.far_fwd - g.near_fwd) / (g.far_half - g.near_half)
            };
            // chord parameters from which the cell is inside the frame
            let lo = (fwd_foot - g.far_fwd).max(0.0);
            let hi = (fwd_foot - exit_fwd).min(clen);
            if lo > hi {
                return;
            }
            let u = fwd_foot.clamp(lo, hi);
            let zq = a.z + (u / clen) * (b.z - a.z);
            let along = fwd_foot - u;
            let r = (along * along + d * d + zq * zq).sqrt();
            if r > cfg.beta {
                return;
            }
            best_range
                .entry(idx)
                .and_modify(|cur| *cur = cur.min(r))
                .or_insert(r);
        });
    }

    let mut cells: Vec<(usize, f64)> = best_range.into_iter().collect();
    cells.sort_unstable_by_key(|&(idx, _)| idx);
    let mut reward = 0.0;
    let mut touched = HashMap::with_capacity(cells.len());
    for (idx, r) in cells {
        let p = overlay.prob(idx, grid);
        let (rew, post) = cell_reward(p, r, cfg, w);
        reward += rew;
        touched.insert(idx, post);
    }
    (reward, BeliefOverlay::child(overlay, touched))
}

fn heading_gap(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    d.min(std::f64::consts::TAU - d)
}

/// Total reward of a contiguous path: the start observation, then per edge
/// the traversal reward and the observation at its end, threading one
/// belief overlay throughout. This is the value best paths are ranked by.
pub fn trajectory_reward(
    start: &VehicleState,
    edges: &[PathEdge],
    grid: &BeliefGrid,
    cfg: &SensorConfig,
    w: &RewardWeights,
) -> Result<f64, Error> {
    let mut prev = *start;
    for (index, e) in edges.iter().enumerate() {
        if e.start.planar_distance(&prev) > 1e-6
            || (e.start.z - prev.z).abs() > 1e-6
            || heading_gap(e.start.psi, prev.psi) > 1e-6
        {
            return Err(Error::DiscontiguousPath { index });
        }
        prev = e.end;
    }
    let mut overlay = BeliefOverlay::root();
    let (mut total, o) = node_reward(start, &overlay, grid, cfg, w);
    overlay = o;
    for e in edges {
        let (r_edge, o) = edge_reward(e, &overlay, grid, cfg, w);
        let (r_node, o) = node_reward(&e.end, &o, grid, cfg, w);
        total += r_edge + r_node;
        overlay = o;
    }
    Ok(total)
}

/// Per-cell weights for informed sampling: the reward for viewing each cell
/// once at the optimal range from mid-altitude.
pub fn sampling_weights(
    grid: &BeliefGrid,
    cfg: &SensorConfig,
    w: &RewardWeights,
    mid_z: f64,
) -> Vec<f64> {
    let r = optimal_range(cfg, mid_z);
    grid.probs
        .iter()
        .map(|&p| cell_reward(p, r, cfg, w).0)
        .collect()
}
