//! Brute-force reference implementations used to validate the fast paths:
//! a sliding-pose minimum-range search, a dense footprint-replay edge
//! reward, and an exhaustive lattice-path enumeration for small worlds.
//!
//! These stay deliberately independent of the closed-form range geometry
//! and the chordized edge sweep they are used to check.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;

use crate::belief::{BeliefGrid, GaussianCentroid};
use crate::dubins::{connect, pose_at, PathEdge, VehicleState};
use crate::information::{
    cell_reward, edge_reward, node_reward, BeliefOverlay, RewardWeights,
};
use crate::planner::{PlanConfig, SamplerKind, StopCondition};
use crate::sensor::{cells_in_footprint, footprint, FrameGeometry, SensorConfig};

/// Minimum slant range to a point at perpendicular distance `d` from a long
/// straight edge, found by sliding the vehicle in `step`-meter increments
/// and testing footprint containment at each pose.
pub fn min_range_sliding(d: f64, cfg: &SensorConfig, z: f64, step: f64) -> f64 {
    let g = FrameGeometry::new(cfg, z);
    let lo = -(g.far_fwd + 2.0 * step);
    let hi = -g.near_fwd + 2.0 * step;
    let mut best = f64::INFINITY;
    let mut s = lo;
    while s <= hi {
        let pose = VehicleState::new(s, 0.0, z, 0.0);
        if footprint(&pose, cfg).contains(0.0, d) {
            let r = (s * s + d * d + z * z).sqrt();
            if r < best {
                best = r;
            }
        }
        s += step;
    }
    best
}

/// Random geometry within the sensor invariants, with a bounded footprint
/// so sliding searches stay affordable.
pub fn random_sensor_config<R: Rng>(rng: &mut R) -> SensorConfig {
    let pitch = rng.random_range(0.0..70f64.to_radians());
    let vfov_max = (2.0 * (80f64.to_radians() - pitch)).min(60f64.to_radians());
    let vfov = rng.random_range(10f64.to_radians()..vfov_max);
    let hfov = rng.random_range(20f64.to_radians()..90f64.to_radians());
    SensorConfig {
        pitch,
        vfov,
        hfov,
        ..SensorConfig::default()
    }
}

/// Edge reward replayed densely: a pose every `step` meters, the per-cell
/// minimum slant range over all poses whose footprint contains the cell,
/// then one optimistic update per cell against the prior.
pub fn edge_reward_dense(
    edge: &PathEdge,
    grid: &BeliefGrid,
    cfg: &SensorConfig,
    w: &RewardWeights,
    step: f64,
) -> f64 {
    let mut best: HashMap<usize, f64> = HashMap::new();
    let n = (edge.total_length / step).ceil().max(1.0) as usize;
    for i in 0..=n {
        let s = if i == n {
            edge.total_length
        } else {
            edge.total_length * i as f64 / n as f64
        };
        let pose = pose_at(edge, s).expect("in-range arc length");
        for idx in cells_in_footprint(&footprint(&pose, cfg), grid) {
            let (cx, cy) = grid.cell_center(idx);
            let r = ((cx - pose.x).powi(2) + (cy - pose.y).powi(2) + pose.z * pose.z).sqrt();
            if r > cfg.beta {
                continue;
            }
            best.entry(idx)
                .and_modify(|cur| *cur = cur.min(r))
                .or_insert(r);
        }
    }
    let mut cells: Vec<(usize, f64)> = best.into_iter().collect();
    cells.sort_unstable_by_key(|&(idx, _)| idx);
    cells
        .into_iter()
        .map(|(idx, r)| cell_reward(grid.probs[idx], r, cfg, w).0)
        .sum()
}

/// A small instance for exhaustive comparison: a 10x10 grid with a
/// short-range sensor, a 4-cell-width budget, and 1-cell extensions.
pub struct ToyInstance {
    pub grid: BeliefGrid,
    pub sensor: SensorConfig,
    pub weights: RewardWeights,
    pub start: VehicleState,
    pub cfg: PlanConfig,
}

pub fn toy_instance(seed: u64) -> ToyInstance {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed ^ 0x7051);
    let cell = 50.0;
    let count = rng.random_range(1..=3);
    let centroids: Vec<GaussianCentroid> = (0..count)
        .map(|_| GaussianCentroid {
            x: rng.random_range(100.0..400.0),
            y: rng.random_range(100.0..400.0),
            peak_prob: rng.random_range(0.5..0.9),
            sigma: rng.random_range(40.0..120.0),
        })
        .collect();
    let grid = BeliefGrid::build_prior(10, 10, cell, (0.0, 0.0), &centroids, 0.1).unwrap();
    let sensor = SensorConfig {
        pitch: 65f64.to_radians(),
        vfov: 40f64.to_radians(),
        hfov: 60f64.to_radians(),
        a: 1.0,
        b: 0.08,
        c: 120.0,
        beta: 120.0,
        v_opt: 0.5,
    };
    sensor.validate().unwrap();
    let start = VehicleState::new(75.0, 75.0, 60.0, 0.0);
    let cfg = PlanConfig {
        budget: 4.0 * cell,
        stop: StopCondition::Iterations(100_000),
        extend: cell,
        near_radius: 2.0 * cell,
        turn_radius: 25.0,
        z_min: 60.0,
        z_max: 60.0,
        sampler: SamplerKind::Informed,
        edge_rewards: true,
        prune: false,
        seed,
        max_nodes: 60_000,
        near_cap: 16,
    };
    ToyInstance {
        grid,
        sensor,
        weights: RewardWeights::default(),
        start,
        cfg,
    }
}

/// Exhaustive enumeration of lattice-aligned paths: vertices are cell
/// centers crossed with the four axis headings, edges are Dubins
/// connections, and every path within the budget and edge limit is scored
/// with the shared trajectory-reward machinery. Returns the best reward.
pub fn lattice_optimum(
    grid: &BeliefGrid,
    sensor: &SensorConfig,
    weights: &RewardWeights,
    start: VehicleState,
    budget: f64,
    turn_radius: f64,
    max_edges: usize,
) -> f64 {
    let headings = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2];
    let start_cell = (
        ((start.x - grid.origin.0) / grid.cell_size).floor() as i64,
        ((start.y - grid.origin.1) / grid.cell_size).floor() as i64,
    );
    let (root_reward, root_overlay) =
        node_reward(&start, &BeliefOverlay::root(), grid, sensor, weights);
    let mut best = root_reward;

    struct Ctx<'a> {
        grid: &'a BeliefGrid,
        sensor: &'a SensorConfig,
        weights: &'a RewardWeights,
        headings: [f64; 4],
        turn_radius: f64,
        max_edges: usize,
    }

    fn dfs(
        ctx: &Ctx,
        state: VehicleState,
        cell: (i64, i64),
        remaining: f64,
        depth: usize,
        reward: f64,
        overlay: &std::rc::Rc<BeliefOverlay>,
        best: &mut f64,
    ) {
        if depth == ctx.max_edges {
            return;
        }
        let moves = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)];
        for (dx, dy) in moves {
            let nc = (cell.0 + dx, cell.1 + dy);
            if nc.0 < 0
                || nc.1 < 0
                || nc.0 >= ctx.grid.width_cells as i64
                || nc.1 >= ctx.grid.height_cells as i64
            {
                continue;
            }
            let cx = ctx.grid.origin.0 + (nc.0 as f64 + 0.5) * ctx.grid.cell_size;
            let cy = ctx.grid.origin.1 + (nc.1 as f64 + 0.5) * ctx.grid.cell_size;
            for h in ctx.headings {
                let target = VehicleState::new(cx, cy, state.z, h);
                if (dx, dy) == (0, 0) && (target.psi - state.psi).abs() < 1e-9 {
                    continue; // no zero-length self edge
                }
                let edge = connect(state, target, ctx.turn_radius);
                if edge.total_length > remaining + 1e-9 || edge.total_length == 0.0 {
                    continue;
                }
                let (er, o1) = edge_reward(&edge, overlay, ctx.grid, ctx.sensor, ctx.weights);
                let (nr, o2) = node_reward(&edge.end, &o1, ctx.grid, ctx.sensor, ctx.weights);
                let total = reward + er + nr;
                if total > *best {
                    *best = total;
                }
                dfs(
                    ctx,
                    edge.end,
                    nc,
                    remaining - edge.total_length,
                    depth + 1,
                    total,
                    &o2,
                    best,
                );
            }
        }
    }

    let ctx = Ctx {
        grid,
        sensor,
        weights,
        headings,
        turn_radius,
        max_edges,
    };
    dfs(
        &ctx,
        start,
        start_cell,
        budget,
        0,
        root_reward,
        &root_overlay,
        &mut best,
    );
    best
}
