//! Discretized belief grid over the search area: Gaussian-kernel priors,
//! Bayesian measurement updates, and binary Shannon entropy.

use serde::{Deserialize, Serialize};

use crate::Error;

/// Upper clamp keeping prior probabilities away from 1 so entropy terms and
/// their derivatives stay finite.
pub const PROB_CLAMP: f64 = 1e-6;

/// Gaussian bump of elevated prior probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianCentroid {
    pub x: f64,
    pub y: f64,
    pub peak_prob: f64,
    pub sigma: f64,
}

impl GaussianCentroid {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.peak_prob > 0.0 && self.peak_prob <= 1.0) {
            return Err(Error::Config(format!(
                "centroid peak_prob {} outside (0, 1]",
                self.peak_prob
            )));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::Config(format!("centroid sigma {} <= 0", self.sigma)));
        }
        Ok(())
    }
}

/// Per-cell probability that an object of interest occupies the cell.
///
/// Row-major storage; cell `(ix, iy)` has index `iy * width_cells + ix` and
/// its center at `origin + ((ix, iy) + 0.5) * cell_size`. Immutable during
/// planning: hypothetical updates live in overlays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeliefGrid {
    pub width_cells: usize,
    pub height_cells: usize,
    pub cell_size: f64,
    pub origin: (f64, f64),
    pub probs: Vec<f64>,
}

impl BeliefGrid {
    /// Builds the prior: `min(1 - eps, background + sum of kernels)` per cell.
    pub fn build_prior(
        width_cells: usize,
        height_cells: usize,
        cell_size: f64,
        origin: (f64, f64),
        centroids: &[GaussianCentroid],
        background: f64,
    ) -> Result<Self, Error> {
        if !(0.0..1.0).contains(&background) {
            return Err(Error::Config(format!(
                "background prior {background} outside [0, 1)"
            )));
        }
        if width_cells == 0 || height_cells == 0 || !(cell_size > 0.0) {
            return Err(Error::Config("degenerate grid dimensions".into()));
        }
        for c in centroids {
            c.validate()?;
        }
        let mut probs = Vec::with_capacity(width_cells * height_cells);
        for iy in 0..height_cells {
            for ix in 0..width_cells {
                let cx = origin.0 + (ix as f64 + 0.5) * cell_size;
                let cy = origin.1 + (iy as f64 + 0.5) * cell_size;
                let mut p = background;
                for c in centroids {
                    let d2 = (cx - c.x).powi(2) + (cy - c.y).powi(2);
                    p += c.peak_prob * (-d2 / (2.0 * c.sigma * c.sigma)).exp();
                }
                probs.push(p.min(1.0 - PROB_CLAMP));
            }
        }
        Ok(Self {
            width_cells,
            height_cells,
            cell_size,
            origin,
            probs,
        })
    }

    pub fn cell_count(&self) -> usize {
        self.width_cells * self.height_cells
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.width_cells + ix
    }

    pub fn cell_center(&self, index: usize) -> (f64, f64) {
        let ix = index % self.width_cells;
        let iy = index / self.width_cells;
        (
            self.origin.0 + (ix as f64 + 0.5) * self.cell_size,
            self.origin.1 + (iy as f64 + 0.5) * self.cell_size,
        )
    }

    /// Map extent `(width, height)` in meters.
    pub fn extent(&self) -> (f64, f64) {
        (
            self.width_cells as f64 * self.cell_size,
            self.height_cells as f64 * self.cell_size,
        )
    }

    /// True if the point lies within the map rectangle.
    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        let (w, h) = self.extent();
        x >= self.origin.0
            && x <= self.origin.0 + w
            && y >= self.origin.1
            && y <= self.origin.1 + h
    }
}

/// Binary Shannon entropy in bits, with `0 log 0 = 0`.
pub fn entropy(p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    let term = |q: f64| if q > 0.0 { -q * q.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Posterior for a binary measurement with the given true/false positive
/// rates. A zero denominator returns the prior unchanged.
pub fn bayes_update(prior: f64, tpr: f64, fpr: f64, measurement: bool) -> f64 {
    let (like_x, like_not) = if measurement {
        (tpr, fpr)
    } else {
        (1.0 - tpr, 1.0 - fpr)
    };
    let denom = like_x * prior + like_not * (1.0 - prior);
    if denom == 0.0 {
        prior
    } else {
        like_x * prior / denom
    }
}

/// Polygonal keep-out region in the ground plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoFlyZone {
    pub polygon: Vec<(f64, f64)>,
}

impl NoFlyZone {
    /// Validates vertex count and simplicity (no self-intersection).
    pub fn new(polygon: Vec<(f64, f64)>) -> Result<Self, Error> {
        let zone = Self { polygon };
        zone.validate()?;
        Ok(zone)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let n = self.polygon.len();
        if n < 3 {
            return Err(Error::Config("no-fly polygon needs >= 3 vertices".into()));
        }
        for i in 0..n {
            let (a1, a2) = (self.polygon[i], self.polygon[(i + 1) % n]);
            for j in (i + 1)..n {
                // skip edges sharing a vertex
                if j == i || (j + 1) % n == i || (i + 1) % n == j {
                    continue;
                }
                let (b1, b2) = (self.polygon[j], self.polygon[(j + 1) % n]);
                if segments_intersect(a1, a2, b1, b2) {
                    return Err(Error::Config("no-fly polygon self-intersects".into()));
                }
            }
        }
        Ok(())
    }

    /// Even-odd containment test.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let n = self.polygon.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (xi, yi) = self.polygon[i];
            let (xj, yj) = self.polygon[j];
            if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
                inside = !inside;
            }
            j = i;
        }
        inside
    }
}

fn segments_intersect(a1: (f64, f64), a2: (f64, f64), b1: (f64, f64), b2: (f64, f64)) -> bool {
    let cross = |o: (f64, f64), p: (f64, f64), q: (f64, f64)| {
        (p.0 - o.0) * (q.1 - o.1) - (p.1 - o.1) * (q.0 - o.0)
    };
    let d1 = cross(b1, b2, a1);
    let d2 = cross(b1, b2, a2);
    let d3 = cross(a1, a2, b1);
    let d4 = cross(a1, a2, b2);
    ((d1 > 0.0) != (d2 > 0.0)) && ((d3 > 0.0) != (d4 > 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_background_prior() {
        let g = BeliefGrid::build_prior(10, 10, 50.0, (0.0, 0.0), &[], 0.1).unwrap();
        assert!(g.probs.iter().all(|&p| p == 0.1));
    }

    #[test]
    fn kernel_peak_at_cell_center() {
        // centroid exactly on the center of cell (2, 3)
        let c = GaussianCentroid {
            x: 125.0,
            y: 175.0,
            peak_prob: 0.8,
            sigma: 100.0,
        };
        let g = BeliefGrid::build_prior(10, 10, 50.0, (0.0, 0.0), &[c], 0.0).unwrap();
        assert!((g.probs[g.index(2, 3)] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn kernel_at_one_sigma() {
        // cell center at distance sigma from the peak: 0.8 * exp(-1/2)
        let sigma = 150.0;
        let c = GaussianCentroid {
            x: 125.0,
            y: 175.0,
            peak_prob: 0.8,
            sigma,
        };
        let g = BeliefGrid::build_prior(10, 10, 50.0, (0.0, 0.0), &[c], 0.0).unwrap();
        let expected = 0.8 * (-0.5f64).exp(); // 0.48522452777010675
        assert!((expected - 0.4852).abs() < 1e-4);
        let ix = 5; // 125 + 150 = 275 = center of cell 5
        assert!((g.probs[g.index(ix, 3)] - expected).abs() < 1e-12);
    }

    #[test]
    fn prior_is_clamped_below_one() {
        let c = GaussianCentroid {
            x: 125.0,
            y: 125.0,
            peak_prob: 1.0,
            sigma: 1000.0,
        };
        let g = BeliefGrid::build_prior(5, 5, 50.0, (0.0, 0.0), &[c, c], 0.5).unwrap();
        assert!(g.probs.iter().all(|&p| p <= 1.0 - PROB_CLAMP));
    }

    #[test]
    fn entropy_reference_values() {
        assert_eq!(entropy(0.5), 1.0);
        assert_eq!(entropy(0.0), 0.0);
        assert_eq!(entropy(1.0), 0.0);
        // frozen from an arbitrary-precision evaluation of
        // -0.8 log2 0.8 - 0.2 log2 0.2
        assert!((entropy(0.8) - 0.7219280948873623).abs() < 1e-15);
    }

    #[test]
    fn bayes_reference_values() {
        assert!((bayes_update(0.5, 0.8, 0.2, true) - 0.8).abs() < 1e-15);
        assert_eq!(bayes_update(0.3, 0.5, 0.5, true), 0.3);
        assert_eq!(bayes_update(0.3, 0.5, 0.5, false), 0.3);
        // 0.9*0.8 / (0.9*0.8 + 0.1*0.2)
        let p = bayes_update(0.8, 0.9, 0.1, true);
        assert!((p - 0.972972972972973).abs() < 1e-15);
        // degenerate denominator returns the prior
        assert_eq!(bayes_update(0.0, 1.0, 0.0, true), 0.0);
        assert_eq!(bayes_update(1.0, 0.0, 1.0, true), 1.0);
    }

    #[test]
    fn prior_build_is_deterministic() {
        let cs = vec![
            GaussianCentroid {
                x: 300.0,
                y: 400.0,
                peak_prob: 0.7,
                sigma: 120.0,
            },
            GaussianCentroid {
                x: 100.0,
                y: 80.0,
                peak_prob: 0.5,
                sigma: 90.0,
            },
        ];
        let a = BeliefGrid::build_prior(20, 20, 25.0, (0.0, 0.0), &cs, 0.1).unwrap();
        let b = BeliefGrid::build_prior(20, 20, 25.0, (0.0, 0.0), &cs, 0.1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zone_validation_and_containment() {
        let square = NoFlyZone::new(vec![(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)])
            .unwrap();
        assert!(square.contains(5.0, 5.0));
        assert!(!square.contains(15.0, 5.0));
        assert!(NoFlyZone::new(vec![(0.0, 0.0), (1.0, 1.0)]).is_err());
        // bow-tie self-intersects
        assert!(
            NoFlyZone::new(vec![(0.0, 0.0), (10.0, 10.0), (10.0, 0.0), (0.0, 10.0)]).is_err()
        );
    }

    proptest! {
        #[test]
        fn bayes_output_in_unit_interval(
            prior in 0.0f64..=1.0,
            tpr in 0.0f64..=1.0,
            fpr in 0.0f64..=1.0,
            meas in proptest::bool::ANY,
        ) {
            let p = bayes_update(prior, tpr, fpr, meas);
            prop_assert!((0.0..=1.0).contains(&p), "posterior {p}");
        }

        #[test]
        fn informative_sensor_moves_probability_the_right_way(
            prior in 0.0f64..=1.0,
            tpr in 0.5f64..=1.0,
            gap in 0.0f64..=0.5,
        ) {
            let fpr = tpr - gap; // tpr >= fpr
            prop_assert!(bayes_update(prior, tpr, fpr, true) >= prior - 1e-12);
            prop_assert!(bayes_update(prior, tpr, fpr, false) <= prior + 1e-12);
        }

        #[test]
        fn entropy_is_symmetric(p in 0.0f64..=1.0) {
            prop_assert!((entropy(p) - entropy(1.0 - p)).abs() < 1e-12);
        }
    }
}
