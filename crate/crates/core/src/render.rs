//! Static renderings of a plan: a per-cell reward heatmap (portable
//! graymap), the path polyline with headings as CSV, and a combined
//! annotated image (portable pixmap).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::belief::BeliefGrid;
use crate::dubins::pose_at;
use crate::information::{edge_reward, node_reward, sampling_weights, BeliefOverlay};
use crate::planner::PlanResult;
use crate::scenario::Scenario;
use crate::Error;

pub struct RenderedFiles {
    pub heatmap: PathBuf,
    pub path_csv: PathBuf,
    pub combined: PathBuf,
}

/// Per-cell reward heatmap as text PGM (P2), one pixel per grid cell,
/// top row = highest y.
pub fn heatmap_pgm(grid: &BeliefGrid, values: &[f64]) -> String {
    let max = values.iter().cloned().fold(0.0f64, f64::max);
    let mut out = String::new();
    let _ = writeln!(out, "P2");
    let _ = writeln!(out, "{} {}", grid.width_cells, grid.height_cells);
    let _ = writeln!(out, "255");
    for iy in (0..grid.height_cells).rev() {
        let mut row = String::new();
        for ix in 0..grid.width_cells {
            let v = values[grid.index(ix, iy)];
            let level = if max > 0.0 {
                (v / max * 255.0).round() as u8
            } else {
                0
            };
            if ix > 0 {
                row.push(' ');
            }
            let _ = write!(row, "{level}");
        }
        let _ = writeln!(out, "{row}");
    }
    out
}

/// Path polyline with per-node heading, cumulative cost, and cumulative
/// reward: header row, comma separators, LF endings.
pub fn path_csv(result: &PlanResult, scenario: &Scenario) -> Result<String, Error> {
    let grid = scenario.build_grid()?;
    let mut out = String::from("x,y,z,psi,cum_cost,cum_info\n");
    let mut overlay = BeliefOverlay::root();
    let mut cum_cost = 0.0;
    let (mut cum_info, o) = node_reward(
        &result.states[0],
        &overlay,
        &grid,
        &scenario.sensor,
        &scenario.weights,
    );
    overlay = o;
    let write_row = |s: &crate::dubins::VehicleState, cost: f64, info: f64, out: &mut String| {
        let _ = writeln!(out, "{},{},{},{},{},{}", s.x, s.y, s.z, s.psi, cost, info);
    };
    write_row(&result.states[0], cum_cost, cum_info, &mut out);
    for (i, edge) in result.edges.iter().enumerate() {
        let (er, o) = edge_reward(edge, &overlay, &grid, &scenario.sensor, &scenario.weights);
        let (nr, o) = node_reward(&edge.end, &o, &grid, &scenario.sensor, &scenario.weights);
        overlay = o;
        cum_cost += edge.total_length;
        cum_info += er + nr;
        write_row(&result.states[i + 1], cum_cost, cum_info, &mut out);
    }
    Ok(out)
}

/// Heatmap with the flown path burned in (path red, nodes green) as a text
/// PPM (P3) of the same dimensions as the grid.
pub fn combined_ppm(grid: &BeliefGrid, values: &[f64], result: &PlanResult) -> String {
    let max = values.iter().cloned().fold(0.0f64, f64::max);
    let mut pixels: Vec<[u8; 3]> = values
        .iter()
        .map(|&v| {
            let level = if max > 0.0 {
                (v / max * 255.0).round() as u8
            } else {
                0
            };
            [level; 3]
        })
        .collect();
    let mark = |pixels: &mut Vec<[u8; 3]>, x: f64, y: f64, color: [u8; 3]| {
        let ix = ((x - grid.origin.0) / grid.cell_size).floor() as i64;
        let iy = ((y - grid.origin.1) / grid.cell_size).floor() as i64;
        if ix >= 0 && iy >= 0 && (ix as usize) < grid.width_cells && (iy as usize) < grid.height_cells
        {
            pixels[grid.index(ix as usize, iy as usize)] = color;
        }
    };
    for edge in &result.edges {
        let step = (grid.cell_size / 4.0).max(1.0);
        let mut s = 0.0;
        while s <= edge.total_length {
            let p = pose_at(edge, s).expect("in-range arc length");
            mark(&mut pixels, p.x, p.y, [220, 40, 40]);
            s += step;
        }
    }
    for state in &result.states {
        mark(&mut pixels, state.x, state.y, [40, 200, 40]);
    }
    let mut out = String::new();
    let _ = writeln!(out, "P3");
    let _ = writeln!(out, "{} {}", grid.width_cells, grid.height_cells);
    let _ = writeln!(out, "255");
    for iy in (0..grid.height_cells).rev() {
        let mut row = String::new();
        for ix in 0..grid.width_cells {
            let [r, g, b] = pixels[grid.index(ix, iy)];
            if ix > 0 {
                row.push(' ');
            }
            let _ = write!(row, "{r} {g} {b}");
        }
        let _ = writeln!(out, "{row}");
    }
    out
}

/// Writes heatmap, polyline, and combined image into `out_dir`.
pub fn render(
    result: &PlanResult,
    scenario: &Scenario,
    out_dir: &Path,
) -> Result<RenderedFiles, Error> {
    std::fs::create_dir_all(out_dir)?;
    let grid = scenario.build_grid()?;
    let values = sampling_weights(
        &grid,
        &scenario.sensor,
        &scenario.weights,
        0.5 * (scenario.planner.z_min + scenario.planner.z_max),
    );
    let files = RenderedFiles {
        heatmap: out_dir.join("heatmap.pgm"),
        path_csv: out_dir.join("path.csv"),
        combined: out_dir.join("combined.ppm"),
    };
    std::fs::write(&files.heatmap, heatmap_pgm(&grid, &values))?;
    std::fs::write(&files.path_csv, path_csv(result, scenario)?)?;
    std::fs::write(&files.combined, combined_ppm(&grid, &values, result))?;
    Ok(files)
}
