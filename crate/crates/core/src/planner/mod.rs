//! Anytime informed tree search over the belief world, plus the
//! uniform-sampling baseline without edge rewards that shares its steering,
//! nearest-neighbor, and reward machinery.

mod kdtree;

use std::rc::Rc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::belief::{BeliefGrid, NoFlyZone};
use crate::dubins::{connect, pose_at, truncate, PathEdge, VehicleState};
use crate::information::{
    edge_reward, node_reward, sampling_weights, BeliefOverlay, RewardWeights,
};
use crate::sensor::{informed_sample, SensorConfig, WeightedSampler};
use crate::Error;
use kdtree::KdTree;

/// Extensions shorter than this are treated as unreachable.
pub const MIN_EXTENSION: f64 = 1.0;
/// Pose spacing when scanning an edge for collisions.
pub const COLLISION_STEP: f64 = 5.0;
/// Pull-back from the first colliding pose.
pub const SAFETY_MARGIN: f64 = 5.0;
/// A node is closed once its remaining budget is below this.
pub const CLOSE_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StopCondition {
    /// Fixed sample count; results are machine-independent.
    Iterations(u64),
    /// Wall-clock budget in seconds.
    Seconds(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Informed,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlannerKind {
    Tigris,
    Rig,
}

impl std::str::FromStr for PlannerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "tigris" => Ok(Self::Tigris),
            "rig" => Ok(Self::Rig),
            other => Err(Error::Config(format!("unknown planner {other:?}"))),
        }
    }
}

impl std::fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Tigris => write!(f, "tigris"),
            Self::Rig => write!(f, "rig"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanConfig {
    /// Path budget B in meters.
    pub budget: f64,
    pub stop: StopCondition,
    /// Maximum extension length per steer.
    pub extend: f64,
    /// Radius for near-node gathering and pruning; at least `extend`.
    pub near_radius: f64,
    pub turn_radius: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub sampler: SamplerKind,
    pub edge_rewards: bool,
    pub prune: bool,
    pub seed: u64,
    /// Resource cap on tree size; the search stops early when reached.
    pub max_nodes: usize,
    /// Evaluate at most this many closest near nodes per sample (0 = all).
    /// Bounds the per-iteration work the same way a shrinking near-ball
    /// would; without it the per-sample candidate set grows with the tree.
    #[serde(default = "default_near_cap")]
    pub near_cap: usize,
}

fn default_near_cap() -> usize {
    16
}

impl Default for PlanConfig {
    fn default() -> Self {
        Self {
            budget: 3000.0,
            stop: StopCondition::Iterations(4000),
            extend: 400.0,
            near_radius: 800.0,
            turn_radius: 60.0,
            z_min: 80.0,
            z_max: 120.0,
            sampler: SamplerKind::Informed,
            edge_rewards: true,
            prune: true,
            seed: 0,
            max_nodes: 400_000,
            near_cap: default_near_cap(),
        }
    }
}

impl PlanConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.budget >= 0.0) {
            return Err(Error::Config(format!("budget {} < 0", self.budget)));
        }
        if !(self.extend > 0.0) {
            return Err(Error::Config(format!("extend {} <= 0", self.extend)));
        }
        if !(self.near_radius >= self.extend) {
            return Err(Error::Config(format!(
                "near_radius {} < extend {}",
                self.near_radius, self.extend
            )));
        }
        if !(self.turn_radius > 0.0) {
            return Err(Error::Config(format!("turn_radius {} <= 0", self.turn_radius)));
        }
        if !(self.z_min <= self.z_max && self.z_min > 0.0) {
            return Err(Error::Config(format!(
                "altitude range [{}, {}] invalid",
                self.z_min, self.z_max
            )));
        }
        if let StopCondition::Seconds(t) = self.stop {
            if !(t > 0.0) {
                return Err(Error::Config(format!("planning time {t} <= 0")));
            }
        }
        if self.max_nodes == 0 {
            return Err(Error::Config("max_nodes must be positive".into()));
        }
        Ok(())
    }
}

/// Everything a plan runs against. The grid rectangle is the flight area.
pub struct World<'a> {
    pub grid: &'a BeliefGrid,
    pub sensor: &'a SensorConfig,
    pub weights: &'a RewardWeights,
    pub zones: &'a [NoFlyZone],
}

impl World<'_> {
    pub fn in_free_space(&self, x: f64, y: f64) -> bool {
        self.grid.contains_point(x, y) && !self.zones.iter().any(|z| z.contains(x, y))
    }
}

#[derive(Debug)]
pub struct TreeNode {
    pub id: usize,
    pub state: VehicleState,
    pub cost: f64,
    pub info: f64,
    pub parent: Option<usize>,
    pub edge: Option<PathEdge>,
    pub overlay: Rc<BeliefOverlay>,
    pub closed: bool,
}

pub struct PlanTree {
    pub nodes: Vec<TreeNode>,
    kd: KdTree,
    pub best: usize,
}

fn key(state: &VehicleState) -> [f64; 3] {
    [state.x, state.y, state.z]
}

impl PlanTree {
    fn new(root: TreeNode) -> Self {
        let mut kd = KdTree::new();
        kd.insert(key(&root.state), 0);
        Self {
            nodes: vec![root],
            kd,
            best: 0,
        }
    }

    fn insert(&mut self, mut node: TreeNode) -> usize {
        let id = self.nodes.len();
        node.id = id;
        self.kd.insert(key(&node.state), id);
        let best = &self.nodes[self.best];
        if node.info > best.info || (node.info == best.info && node.cost < best.cost) {
            self.best = id;
        }
        self.nodes.push(node);
        id
    }

    /// Nearest node outside the closed set.
    pub fn nearest_open(&self, q: [f64; 3]) -> Option<usize> {
        self.kd.nearest(q, &|id| !self.nodes[id].closed)
    }

    /// Open nodes within `radius`, ascending by id.
    pub fn near_open(&self, q: [f64; 3], radius: f64) -> Vec<usize> {
        self.kd.within_radius(q, radius, &|id| !self.nodes[id].closed)
    }

    /// Open nodes within `radius`, closest first, at most `cap` of them.
    pub fn near_open_capped(&self, q: [f64; 3], radius: f64, cap: usize) -> Vec<usize> {
        let mut ids = self.near_open(q, radius);
        if cap > 0 && ids.len() > cap {
            let d2 = |id: usize| {
                let s = &self.nodes[id].state;
                (s.x - q[0]).powi(2) + (s.y - q[1]).powi(2) + (s.z - q[2]).powi(2)
            };
            ids.sort_by(|&a, &b| d2(a).partial_cmp(&d2(b)).unwrap().then(a.cmp(&b)));
            ids.truncate(cap);
        }
        ids
    }

    fn near_all(&self, q: [f64; 3], radius: f64) -> Vec<usize> {
        self.kd.within_radius(q, radius, &|_| true)
    }
}

/// Discard heuristic: a nearby node that is at least as cheap and at least
/// as informative (strictly better in one) dominates the candidate. Heading
/// is ignored in the proximity test.
pub fn prune_dominated(
    tree: &PlanTree,
    state: &VehicleState,
    cost: f64,
    info: f64,
    radius: f64,
) -> bool {
    tree.near_all(key(state), radius).into_iter().any(|id| {
        let n = &tree.nodes[id];
        n.cost <= cost && n.info >= info && (n.cost < cost || n.info > info)
    })
}

struct Extension {
    state: VehicleState,
    edge: PathEdge,
    budget_saturated: bool,
}

/// Extends from a tree node toward a target: Dubins connect, truncated to
/// the extend distance, the remaining budget, and the first collision minus
/// a safety margin. `None` when no extension of at least [`MIN_EXTENSION`]
/// survives.
fn steer(from: &TreeNode, to: &VehicleState, cfg: &PlanConfig, world: &World) -> Option<Extension> {
    let cap_budget = cfg.budget - from.cost;
    let cap = cfg.extend.min(cap_budget);
    if cap < MIN_EXTENSION {
        return None;
    }
    let full = connect(from.state, *to, cfg.turn_radius);
    if full.total_length == 0.0 {
        return None;
    }
    let mut len = full.total_length.min(cap);
    let samples = (len / COLLISION_STEP).ceil().max(1.0) as usize;
    for i in 0..=samples {
        let s = if i == samples {
            len
        } else {
            len * i as f64 / samples as f64
        };
        let pose = pose_at(&full, s).expect("in-range arc length");
        if !world.in_free_space(pose.x, pose.y) {
            len = s - SAFETY_MARGIN;
            break;
        }
    }
    if len < MIN_EXTENSION {
        return None;
    }
    let budget_saturated = len == cap_budget;
    let edge = if len == full.total_length {
        full
    } else {
        truncate(&full, len).expect("in-range truncation")
    };
    Some(Extension {
        state: edge.end,
        edge,
        budget_saturated,
    })
}

/// Best path extracted from a finished tree, plus run metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanResult {
    pub planner: PlannerKind,
    pub states: Vec<VehicleState>,
    pub edges: Vec<PathEdge>,
    pub cost: f64,
    /// Reported reward: for the baseline this is the final path re-evaluated
    /// with the full trajectory reward, so comparisons are like-for-like.
    pub info: f64,
    /// Tree-internal reward of the returned node.
    pub internal_info: f64,
    /// Best reported reward over time: (iteration or seconds, reward),
    /// one entry per improvement of the internal best.
    pub curve: Vec<(f64, f64)>,
    pub node_count: usize,
    pub iterations: u64,
    pub max_node_cost: f64,
}

/// Walks parents from the tree's best node; ties were resolved at insertion
/// time toward higher info, then lower cost, then lower id.
pub fn extract_best(tree: &PlanTree) -> (Vec<VehicleState>, Vec<PathEdge>, f64, f64) {
    let mut chain = Vec::new();
    let mut cur = Some(tree.best);
    while let Some(id) = cur {
        chain.push(id);
        cur = tree.nodes[id].parent;
    }
    chain.reverse();
    let states: Vec<VehicleState> = chain.iter().map(|&id| tree.nodes[id].state).collect();
    let edges: Vec<PathEdge> = chain
        .iter()
        .filter_map(|&id| tree.nodes[id].edge.clone())
        .collect();
    let best = &tree.nodes[tree.best];
    (states, edges, best.cost, best.info)
}

/// The informed planner: informed sampling plus edge rewards.
pub fn tigris_plan(
    world: &World,
    start: VehicleState,
    cfg: &PlanConfig,
) -> Result<PlanResult, Error> {
    plan_with_tree(world, start, cfg, PlannerKind::Tigris).map(|(r, _)| r)
}

/// The baseline: uniform sampling, no edge rewards in the tree, and the
/// returned path re-evaluated with the full trajectory reward.
pub fn rig_plan(world: &World, start: VehicleState, cfg: &PlanConfig) -> Result<PlanResult, Error> {
    plan_with_tree(world, start, cfg, PlannerKind::Rig).map(|(r, _)| r)
}

pub fn plan(
    world: &World,
    start: VehicleState,
    cfg: &PlanConfig,
    kind: PlannerKind,
) -> Result<PlanResult, Error> {
    plan_with_tree(world, start, cfg, kind).map(|(r, _)| r)
}

/// Full planner entry point that also returns the search tree, which the
/// invariant tests inspect node by node.
pub fn plan_with_tree(
    world: &World,
    start: VehicleState,
    cfg: &PlanConfig,
    kind: PlannerKind,
) -> Result<(PlanResult, PlanTree), Error> {
    cfg.validate()?;
    world.sensor.validate()?;
    world.weights.validate()?;
    for z in world.zones {
        z.validate()?;
    }
    if !world.in_free_space(start.x, start.y) {
        return Err(Error::InvalidInput(
            "start state is outside free space".into(),
        ));
    }

    let mut cfg = cfg.clone();
    if kind == PlannerKind::Rig {
        cfg.sampler = SamplerKind::Uniform;
        cfg.edge_rewards = false;
    }
    let reevaluate = kind == PlannerKind::Rig;

    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let mid_z = 0.5 * (cfg.z_min + cfg.z_max);
    let sampler = match cfg.sampler {
        SamplerKind::Uniform => None,
        SamplerKind::Informed => {
            let weights = sampling_weights(world.grid, world.sensor, world.weights, mid_z);
            match WeightedSampler::new(&weights) {
                Ok(s) => Some(s),
                // a flat zero-reward prior falls back to uniform sampling
                Err(Error::ZeroWeights) => None,
                Err(e) => return Err(e),
            }
        }
    };

    let (root_info, root_overlay) = node_reward(
        &start,
        &BeliefOverlay::root(),
        world.grid,
        world.sensor,
        world.weights,
    );
    let mut tree = PlanTree::new(TreeNode {
        id: 0,
        state: start,
        cost: 0.0,
        info: root_info,
        parent: None,
        edge: None,
        overlay: root_overlay,
        closed: cfg.budget <= CLOSE_EPS,
    });

    let mut curve = vec![(0.0, root_info)];
    let mut max_node_cost = 0.0f64;
    let clock = Instant::now();
    let mut iterations = 0u64;

    'outer: loop {
        match cfg.stop {
            StopCondition::Iterations(n) => {
                if iterations >= n {
                    break;
                }
            }
            StopCondition::Seconds(t) => {
                if clock.elapsed().as_secs_f64() >= t {
                    break;
                }
            }
        }
        iterations += 1;

        let sample = match &sampler {
            Some(ws) => informed_sample(
                world.grid,
                ws,
                world.sensor,
                (cfg.z_min, cfg.z_max),
                &mut rng,
            ),
            None => uniform_state(world.grid, &cfg, &mut rng),
        };
        let Some(nearest_id) = tree.nearest_open(key(&sample)) else {
            break; // every node has exhausted the budget
        };
        let Some(first) = steer(&tree.nodes[nearest_id], &sample, &cfg, world) else {
            continue;
        };
        let feasible = first.state;

        for near_id in tree.near_open_capped(key(&feasible), cfg.near_radius, cfg.near_cap) {
            let Some(ext) = steer(&tree.nodes[near_id], &feasible, &cfg, world) else {
                continue;
            };
            let parent = &tree.nodes[near_id];
            let (edge_r, after_edge) = if cfg.edge_rewards {
                edge_reward(
                    &ext.edge,
                    &parent.overlay,
                    world.grid,
                    world.sensor,
                    world.weights,
                )
            } else {
                (0.0, Rc::clone(&parent.overlay))
            };
            let (node_r, overlay) = node_reward(
                &ext.state,
                &after_edge,
                world.grid,
                world.sensor,
                world.weights,
            );
            let info = parent.info + edge_r + node_r;
            let cost = if ext.budget_saturated {
                cfg.budget
            } else {
                (parent.cost + ext.edge.total_length).min(cfg.budget)
            };
            if cfg.prune && prune_dominated(&tree, &ext.state, cost, info, cfg.near_radius) {
                continue;
            }
            let closed = cfg.budget - cost <= CLOSE_EPS;
            max_node_cost = max_node_cost.max(cost);
            let prev_best = tree.best;
            let id = tree.insert(TreeNode {
                id: 0,
                state: ext.state,
                cost,
                info,
                parent: Some(near_id),
                edge: Some(ext.edge),
                overlay,
                closed,
            });
            if tree.best == id && tree.nodes[id].info > tree.nodes[prev_best].info {
                let x = match cfg.stop {
                    StopCondition::Iterations(_) => iterations as f64,
                    StopCondition::Seconds(_) => clock.elapsed().as_secs_f64(),
                };
                let y = if reevaluate {
                    reevaluated_reward(&tree, id, world)
                } else {
                    tree.nodes[id].info
                };
                curve.push((x, y));
            }
            if tree.nodes.len() >= cfg.max_nodes {
                break 'outer;
            }
        }
    }

    let (states, edges, cost, internal_info) = extract_best(&tree);
    let info = if reevaluate {
        reevaluated_reward(&tree, tree.best, world)
    } else {
        internal_info
    };
    let result = PlanResult {
        planner: kind,
        states,
        edges,
        cost,
        info,
        internal_info,
        curve,
        node_count: tree.nodes.len(),
        iterations,
        max_node_cost,
    };
    Ok((result, tree))
}

/// True trajectory reward of the path ending at `id`.
fn reevaluated_reward(tree: &PlanTree, id: usize, world: &World) -> f64 {
    let mut chain = Vec::new();
    let mut cur = Some(id);
    while let Some(i) = cur {
        chain.push(i);
        cur = tree.nodes[i].parent;
    }
    chain.reverse();
    let start = tree.nodes[chain[0]].state;
    let edges: Vec<PathEdge> = chain
        .iter()
        .filter_map(|&i| tree.nodes[i].edge.clone())
        .collect();
    crate::information::trajectory_reward(&start, &edges, world.grid, world.sensor, world.weights)
        .expect("tree paths are contiguous")
}

fn uniform_state<R: Rng>(grid: &BeliefGrid, cfg: &PlanConfig, rng: &mut R) -> VehicleState {
    let (w, h) = grid.extent();
    let z = if cfg.z_max > cfg.z_min {
        rng.random_range(cfg.z_min..=cfg.z_max)
    } else {
        cfg.z_min
    };
    VehicleState::new(
        rng.random_range(grid.origin.0..grid.origin.0 + w),
        rng.random_range(grid.origin.1..grid.origin.1 + h),
        z,
        rng.random_range(0.0..std::f64::consts::TAU),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::GaussianCentroid;

    fn grid_with_bumps() -> BeliefGrid {
        BeliefGrid::build_prior(
            50,
            50,
            50.0,
            (0.0, 0.0),
            &[
                GaussianCentroid {
                    x: 1800.0,
                    y: 1900.0,
                    peak_prob: 0.8,
                    sigma: 200.0,
                },
                GaussianCentroid {
                    x: 600.0,
                    y: 700.0,
                    peak_prob: 0.6,
                    sigma: 150.0,
                },
            ],
            0.1,
        )
        .unwrap()
    }

    fn small_cfg(seed: u64) -> PlanConfig {
        PlanConfig {
            stop: StopCondition::Iterations(250),
            seed,
            ..PlanConfig::default()
        }
    }

    fn start_state() -> VehicleState {
        VehicleState::new(1250.0, 1250.0, 100.0, 0.0)
    }

    #[test]
    fn steer_truncates_to_remaining_budget() {
        let grid = grid_with_bumps();
        let sensor = SensorConfig::default();
        let weights = RewardWeights::default();
        let world = World {
            grid: &grid,
            sensor: &sensor,
            weights: &weights,
            zones: &[],
        };
        let cfg = PlanConfig::default();
        let from = TreeNode {
            id: 0,
            state: start_state(),
            cost: cfg.budget - 10.0,
            info: 0.0,
            parent: None,
            edge: None,
            overlay: BeliefOverlay::root(),
            closed: false,
        };
        let target = VehicleState::new(1750.0, 1250.0, 100.0, 0.0);
        let ext = steer(&from, &target, &cfg, &world).unwrap();
        assert_eq!(ext.edge.total_length, 10.0);
        assert!(ext.budget_saturated);
        // within budget and delta: the target is reached
        let near = TreeNode { cost: 0.0, ..from };
        let target = VehicleState::new(1500.0, 1250.0, 100.0, 0.0);
        let ext = steer(&near, &target, &cfg, &world).unwrap();
        assert!(ext.state.planar_distance(&target) < 1e-6);
        assert!(!ext.budget_saturated);
    }

    #[test]
    fn steer_stops_before_a_zone() {
        let grid = grid_with_bumps();
        let sensor = SensorConfig::default();
        let weights = RewardWeights::default();
        let zones = vec![NoFlyZone::new(vec![
            (1400.0, 1000.0),
            (1500.0, 1000.0),
            (1500.0, 1500.0),
            (1400.0, 1500.0),
        ])
        .unwrap()];
        let world = World {
            grid: &grid,
            sensor: &sensor,
            weights: &weights,
            zones: &zones,
        };
        let cfg = PlanConfig::default();
        let from = TreeNode {
            id: 0,
            state: start_state(),
            cost: 0.0,
            info: 0.0,
            parent: None,
            edge: None,
            overlay: BeliefOverlay::root(),
            closed: false,
        };
        let target = VehicleState::new(1650.0, 1250.0, 100.0, 0.0);
        let ext = steer(&from, &target, &cfg, &world).unwrap();
        // dense containment check along the truncated edge
        let mut s = 0.0;
        while s <= ext.edge.total_length {
            let p = pose_at(&ext.edge, s).unwrap();
            assert!(world.in_free_space(p.x, p.y), "pose at {s} collides");
            s += 0.5;
        }
        // and it stopped short of the zone face at x = 1400
        assert!(ext.state.x < 1400.0);
    }

    #[test]
    fn prune_rules() {
        let grid = grid_with_bumps();
        let sensor = SensorConfig::default();
        let weights = RewardWeights::default();
        let world = World {
            grid: &grid,
            sensor: &sensor,
            weights: &weights,
            zones: &[],
        };
        let cfg = PlanConfig {
            stop: StopCondition::Iterations(0),
            ..PlanConfig::default()
        };
        let (_, mut tree) =
            plan_with_tree(&world, start_state(), &cfg, PlannerKind::Tigris).unwrap();
        let root_info = tree.nodes[0].info;
        let s = start_state();
        // empty neighborhood
        let far = VehicleState::new(10.0, 10.0, 100.0, 0.0);
        assert!(!prune_dominated(&tree, &far, 100.0, 0.0, cfg.near_radius));
        // co-located node with lower cost and higher info dominates
        assert!(prune_dominated(
            &tree,
            &s,
            100.0,
            root_info - 0.1,
            cfg.near_radius
        ));
        // candidate that dominates on reward survives
        assert!(!prune_dominated(
            &tree,
            &s,
            100.0,
            root_info + 0.1,
            cfg.near_radius
        ));
        // equal on both axes: no strict edge, no prune
        assert!(!prune_dominated(&tree, &s, 0.0, root_info, cfg.near_radius));
        // and a strictly dominated equal-position candidate is pruned
        tree.insert(TreeNode {
            id: 0,
            state: s,
            cost: 50.0,
            info: root_info + 1.0,
            parent: Some(0),
            edge: None,
            overlay: BeliefOverlay::root(),
            closed: false,
        });
        assert!(prune_dominated(
            &tree,
            &s,
            50.0,
            root_info + 0.5,
            cfg.near_radius
        ));
    }

    #[test]
    fn zero_budget_returns_root_only() {
        let grid = grid_with_bumps();
        let sensor = SensorConfig::default();
        let weights = RewardWeights::default();
        let world = World {
            grid: &grid,
            sensor: &sensor,
            weights: &weights,
            zones: &[],
        };
        let cfg = PlanConfig {
            budget: 0.0,
            ..small_cfg(1)
        };
        for kind in [PlannerKind::Tigris, PlannerKind::Rig] {
            let r = plan(&world, start_state(), &cfg, kind).unwrap();
            assert_eq!(r.states.len(), 1);
            assert_eq!(r.cost, 0.0);
            assert!(r.info > 0.0);
        }
    }

    #[test]
    fn start_inside_zone_is_rejected() {
        let grid = grid_with_bumps();
        let sensor = SensorConfig::default();
        let weights = RewardWeights::default();
        let zones = vec![NoFlyZone::new(vec![
            (1200.0, 1200.0),
            (1300.0, 1200.0),
            (1300.0, 1300.0),
            (1200.0, 1300.0),
        ])
        .unwrap()];
        let world = World {
            grid: &grid,
            sensor: &sensor,
            weights: &weights,
            zones: &zones,
        };
        let err = plan(&world, start_state(), &small_cfg(1), PlannerKind::Tigris).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn flat_zero_weights_fall_back_to_uniform() {
        // background 0 and no centroids: every sampling weight is zero
        let grid = BeliefGrid::build_prior(50, 50, 50.0, (0.0, 0.0), &[], 0.0).unwrap();
        let sensor = SensorConfig::default();
        let weights = RewardWeights::default();
        let world = World {
            grid: &grid,
            sensor: &sensor,
            weights: &weights,
            zones: &[],
        };
        // with pruning on, every zero-gain extension is dominated by the
        // root; the fallback still has to produce a valid result
        let r = plan(&world, start_state(), &small_cfg(3), PlannerKind::Tigris).unwrap();
        assert!(r.info >= r.curve[0].1);
        // with pruning off the uniform fallback grows the tree
        let cfg = PlanConfig {
            prune: false,
            ..small_cfg(3)
        };
        let r = plan(&world, start_state(), &cfg, PlannerKind::Tigris).unwrap();
        assert!(r.node_count > 1);
        assert!(r.info >= r.curve[0].1);
    }

    #[test]
    fn tree_invariants_hold() {
        let grid = grid_with_bumps();
        let sensor = SensorConfig::default();
        let weights = RewardWeights::default();
        let world = World {
            grid: &grid,
            sensor: &sensor,
            weights: &weights,
            zones: &[],
        };
        let cfg = small_cfg(42);
        let (result, tree) =
            plan_with_tree(&world, start_state(), &cfg, PlannerKind::Tigris).unwrap();
        assert!(tree.nodes.len() > 10);
        for node in &tree.nodes {
            assert!(node.cost <= cfg.budget, "cost {} over budget", node.cost);
            assert_eq!(node.closed, cfg.budget - node.cost <= CLOSE_EPS);
            match (node.parent, &node.edge) {
                (None, None) => {
                    assert_eq!(node.cost, 0.0);
                }
                (Some(pid), Some(edge)) => {
                    let parent = &tree.nodes[pid];
                    assert!(edge.start.planar_distance(&parent.state) < 1e-6);
                    assert!(edge.end.planar_distance(&node.state) < 1e-6);
                    let expect = if node.cost == cfg.budget {
                        cfg.budget
                    } else {
                        parent.cost + edge.total_length
                    };
                    assert!((node.cost - expect).abs() < 1e-6);
                    assert!(node.info >= parent.info - 1e-12);
                }
                _ => panic!("inconsistent parent/edge"),
            }
        }
        // best node maximizes info over all nodes
        let best_info = tree.nodes[tree.best].info;
        assert!(tree.nodes.iter().all(|n| n.info <= best_info));
        // anytime curve is non-decreasing for the informed planner
        assert!(result.curve.windows(2).all(|w| w[1].1 >= w[0].1));
        // returned path respects the budget
        assert!(result.cost <= cfg.budget);
        assert!(result.max_node_cost <= cfg.budget);
    }

    #[test]
    fn closed_nodes_never_returned_by_queries() {
        let grid = grid_with_bumps();
        let sensor = SensorConfig::default();
        let weights = RewardWeights::default();
        let world = World {
            grid: &grid,
            sensor: &sensor,
            weights: &weights,
            zones: &[],
        };
        // tiny budget so nodes close quickly
        let cfg = PlanConfig {
            budget: 450.0,
            stop: StopCondition::Iterations(400),
            ..small_cfg(9)
        };
        let (_, tree) = plan_with_tree(&world, start_state(), &cfg, PlannerKind::Tigris).unwrap();
        let closed: Vec<usize> = tree
            .nodes
            .iter()
            .filter(|n| n.closed)
            .map(|n| n.id)
            .collect();
        assert!(!closed.is_empty(), "expected some closed nodes");
        for &id in &closed {
            let q = key(&tree.nodes[id].state);
            assert_ne!(tree.nearest_open(q), Some(id));
            assert!(!tree.near_open(q, 1.0).contains(&id));
        }
    }

    #[test]
    fn identical_seeds_produce_identical_results() {
        let grid = grid_with_bumps();
        let sensor = SensorConfig::default();
        let weights = RewardWeights::default();
        let world = World {
            grid: &grid,
            sensor: &sensor,
            weights: &weights,
            zones: &[],
        };
        for kind in [PlannerKind::Tigris, PlannerKind::Rig] {
            let a = plan(&world, start_state(), &small_cfg(77), kind).unwrap();
            let b = plan(&world, start_state(), &small_cfg(77), kind).unwrap();
            assert_eq!(a, b);
            let c = plan(&world, start_state(), &small_cfg(78), kind).unwrap();
            assert!(a.curve != c.curve || a.info != c.info);
        }
    }

    #[test]
    fn extract_best_tie_breaks() {
        let grid = grid_with_bumps();
        let sensor = SensorConfig::default();
        let weights = RewardWeights::default();
        let world = World {
            grid: &grid,
            sensor: &sensor,
            weights: &weights,
            zones: &[],
        };
        let cfg = PlanConfig {
            stop: StopCondition::Iterations(0),
            ..PlanConfig::default()
        };
        let (_, mut tree) =
            plan_with_tree(&world, start_state(), &cfg, PlannerKind::Tigris).unwrap();
        // root-only tree
        let (states, edges, cost, _) = extract_best(&tree);
        assert_eq!(states.len(), 1);
        assert!(edges.is_empty());
        assert_eq!(cost, 0.0);
        // chain 1 < 2 < 5: leaf wins
        fn mk(
            from: VehicleState,
            st: VehicleState,
            cost: f64,
            info: f64,
            parent: usize,
        ) -> TreeNode {
            TreeNode {
                id: 0,
                state: st,
                cost,
                info,
                parent: Some(parent),
                edge: Some(connect(from, st, 60.0)),
                overlay: BeliefOverlay::root(),
                closed: false,
            }
        }
        let root_state = tree.nodes[0].state;
        let root_info = tree.nodes[0].info;
        let s1 = VehicleState::new(1300.0, 1250.0, 100.0, 0.0);
        let s2 = VehicleState::new(1350.0, 1250.0, 100.0, 0.0);
        let a = tree.insert(mk(root_state, s1, 100.0, root_info + 1.0, 0));
        let b = tree.insert(mk(s1, s2, 200.0, root_info + 5.0, a));
        assert_eq!(tree.best, b);
        let (states, ..) = extract_best(&tree);
        assert_eq!(states.len(), 3);
        // equal info, lower cost wins
        let best_info = tree.nodes[b].info;
        let s3 = VehicleState::new(1300.0, 1300.0, 100.0, 0.0);
        let better_cost = tree.insert(mk(root_state, s3, 90.0, best_info, 0));
        assert_eq!(tree.best, better_cost);
        // equal info and cost: earlier id stays
        let s4 = VehicleState::new(1250.0, 1300.0, 100.0, 0.0);
        tree.insert(mk(root_state, s4, 90.0, best_info, 0));
        assert_eq!(tree.best, better_cost);
    }

    #[test]
    fn rig_reports_reevaluated_reward() {
        let grid = grid_with_bumps();
        let sensor = SensorConfig::default();
        let weights = RewardWeights::default();
        let world = World {
            grid: &grid,
            sensor: &sensor,
            weights: &weights,
            zones: &[],
        };
        let r = plan(&world, start_state(), &small_cfg(5), PlannerKind::Rig).unwrap();
        // edge rewards were excluded internally, so the re-evaluated reward
        // of a multi-edge path exceeds the internal node-only estimate
        assert!(r.states.len() > 1);
        assert!(r.info > r.internal_info);

        // the informed planner's internal value IS the trajectory reward
        let t = plan(&world, start_state(), &small_cfg(5), PlannerKind::Tigris).unwrap();
        let replay = crate::information::trajectory_reward(
            &t.states[0],
            &t.edges,
            &grid,
            &sensor,
            &weights,
        )
        .unwrap();
        assert!((t.info - replay).abs() < 1e-9, "{} vs {}", t.info, replay);
    }
}
