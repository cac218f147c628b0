use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Sorted sample times starting at zero.
///
/// Suprema over time are evaluated on these points only, so they are lower
/// bounds for the supremum over the whole interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TimeGrid(Vec<f64>);

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        match times.first() {
            None => return Err(invalid("time grid is empty")),
            Some(&t0) if t0 != 0.0 => return Err(invalid(format!("time grid must start at 0, got {t0}"))),
            _ => {}
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(invalid("time grid has non-finite entries"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("time grid must be strictly increasing"));
        }
        Ok(TimeGrid(times))
    }

    /// `n_points` equally spaced times on `[0, t_end]`.
    pub fn uniform(t_end: f64, n_points: usize) -> Result<Self> {
        if n_points == 0 {
            return Err(invalid("time grid needs at least one point"));
        }
        if n_points == 1 {
            return TimeGrid::new(vec![0.0]);
        }
        if !(t_end > 0.0) {
            return Err(invalid(format!("t_end must be positive, got {t_end}")));
        }
        let last = (n_points - 1) as f64;
        let mut times: Vec<f64> = (0..n_points).map(|i| t_end * i as f64 / last).collect();
        times[n_points - 1] = t_end;
        TimeGrid::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn end(&self) -> f64 {
        *self.0.last().expect("grid is nonempty")
    }
}

impl TryFrom<Vec<f64>> for TimeGrid {
    type Error = crate::error::Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        TimeGrid::new(v)
    }
}

impl From<TimeGrid> for Vec<f64> {
    fn from(g: TimeGrid) -> Self {
        g.0
    }
}
