//! Serializable experiment inputs and outputs: the scenario file, trial
//! records, and the benchmark report, all as versioned TOML documents.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::belief::{BeliefGrid, GaussianCentroid, NoFlyZone};
use crate::dubins::VehicleState;
use crate::information::RewardWeights;
use crate::planner::{PlanConfig, PlannerKind, PlanResult};
use crate::sensor::SensorConfig;
use crate::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub width_m: f64,
    pub height_m: f64,
    pub cell_size_m: f64,
    pub background: f64,
}

/// Controls used only when a scenario acts as a generation template.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GeneratorSpec {
    /// Fix the number of belief centroids instead of drawing 1..=12.
    pub fixed_centroid_count: Option<usize>,
    /// Keep-out margin from the map border as a fraction of each dimension.
    #[serde(default = "default_margin")]
    pub margin_frac: f64,
}

fn default_margin() -> f64 {
    0.1
}

/// A complete, reproducible experiment input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub schema_version: u32,
    pub seed: u64,
    pub map: MapSpec,
    #[serde(default)]
    pub centroids: Vec<GaussianCentroid>,
    pub sensor: SensorConfig,
    pub weights: RewardWeights,
    pub planner: PlanConfig,
    pub start: VehicleState,
    #[serde(default)]
    pub zones: Vec<NoFlyZone>,
    #[serde(default)]
    pub generator: GeneratorSpec,
}

impl Scenario {
    /// Desk-scale default: a quarter of the full-scale area with the same
    /// budget-to-area ratio, iteration-bounded for reproducibility.
    pub fn desk_template() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            seed: 0,
            map: MapSpec {
                width_m: 2500.0,
                height_m: 2500.0,
                cell_size_m: 50.0,
                // low enough that empty space carries little sampling
                // weight relative to the belief centroids
                background: 0.02,
            },
            centroids: Vec::new(),
            sensor: SensorConfig::default(),
            weights: RewardWeights::default(),
            planner: PlanConfig {
                // keep the full-scale budget-to-extend ratio (15 extensions
                // per budget) at desk scale
                extend: 200.0,
                near_radius: 400.0,
                ..PlanConfig::default()
            },
            start: VehicleState::new(1250.0, 1250.0, 100.0, 0.0),
            zones: Vec::new(),
            generator: GeneratorSpec {
                fixed_centroid_count: None,
                margin_frac: 0.1,
            },
        }
    }

    pub fn width_cells(&self) -> usize {
        (self.map.width_m / self.map.cell_size_m).round() as usize
    }

    pub fn height_cells(&self) -> usize {
        (self.map.height_m / self.map.cell_size_m).round() as usize
    }

    pub fn build_grid(&self) -> Result<BeliefGrid, Error> {
        BeliefGrid::build_prior(
            self.width_cells(),
            self.height_cells(),
            self.map.cell_size_m,
            (0.0, 0.0),
            &self.centroids,
            self.map.background,
        )
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema version {}",
                self.schema_version
            )));
        }
        if self.width_cells() == 0 || self.height_cells() == 0 {
            return Err(Error::Config("map has no cells".into()));
        }
        self.sensor.validate()?;
        self.weights.validate()?;
        self.planner.validate()?;
        for c in &self.centroids {
            c.validate()?;
        }
        for z in &self.zones {
            z.validate()?;
        }
        let (x, y) = (self.start.x, self.start.y);
        if !(x >= 0.0 && x <= self.map.width_m && y >= 0.0 && y <= self.map.height_m) {
            return Err(Error::Config("start state outside the map".into()));
        }
        if self.zones.iter().any(|z| z.contains(x, y)) {
            return Err(Error::Config("start state inside a no-fly zone".into()));
        }
        if self.start.z <= 0.0 {
            return Err(Error::Config("start altitude must be positive".into()));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, Error> {
        let s: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn save(&self, path: &Path) -> Result<(), Error> {
        std::fs::write(path, self.to_toml())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }
}

/// Outcome of one planner on one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_seed: u64,
    pub centroid_count: usize,
    pub planner: PlannerKind,
    pub info: f64,
    pub cost: f64,
    pub node_count: usize,
    pub max_node_cost: f64,
    pub curve: Vec<(f64, f64)>,
    /// Set when the planner failed; such trials are excluded from statistics.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannerStats {
    pub planner: PlannerKind,
    pub n: usize,
    pub mean: f64,
    pub std: f64,
}

/// Statistics for one centroid-count bucket (or the whole run).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub label: String,
    pub lo: usize,
    pub hi: usize,
    pub n: usize,
    pub stats: Vec<PlannerStats>,
    /// Mean of per-trial differences, first listed planner minus second.
    pub mean_diff: Option<f64>,
    /// `100 * (mean_a - mean_b) / mean_b`.
    pub percent_diff: Option<f64>,
    /// One-tailed paired t-test on per-trial differences.
    pub p_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub trials: usize,
    pub failed: usize,
    pub planners: Vec<PlannerKind>,
    /// Bucket groups first (1-3, 4-6, 7-9, 10-12), then the overall row.
    pub groups: Vec<GroupReport>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TrialsFile {
    pub trials: Vec<TrialRecord>,
}

/// A plan result as written to disk.
#[derive(Debug, Serialize, Deserialize)]
pub struct ResultFile {
    pub schema_version: u32,
    pub result: PlanResult,
}

impl ResultFile {
    pub fn new(result: PlanResult) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            result,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("result serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, Error> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<(), Error> {
        std::fs::write(path, self.to_toml())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}
