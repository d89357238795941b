use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares slope of `log(count + 1)` against `log B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub grid: Vec<i64>,
    pub counts: Vec<u64>,
    /// `None` when every count is zero.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub residuals: Vec<f64>,
}

/// `steps` values from `a` to `b` in geometric progression, rounded.
pub fn geometric_grid(a: i64, b: i64, steps: usize) -> Result<Vec<i64>> {
    if a < 1 || b <= a || steps < 2 {
        return Err(Error::Invalid("grid needs 1 <= a < b and at least two steps".into()));
    }
    let ratio = (b as f64 / a as f64).powf(1.0 / (steps - 1) as f64);
    let mut out: Vec<i64> = (0..steps).map(|i| (a as f64 * ratio.powi(i as i32)).round() as i64).collect();
    out.dedup();
    Ok(out)
}

/// Fits the slope of counts over a grid of at least four heights.
pub fn exponent_fit(grid: &[i64], counts: &[u64]) -> Result<ExponentFit> {
    if grid.len() != counts.len() {
        return Err(Error::ArityMismatch {
            expected: grid.len(),
            got: counts.len(),
        });
    }
    if grid.len() < 4 || grid.iter().any(|&b| b < 1) {
        return Err(Error::Invalid("need at least four positive heights".into()));
    }
    let mut fit = ExponentFit {
        grid: grid.to_vec(),
        counts: counts.to_vec(),
        slope: None,
        intercept: None,
        residuals: Vec::new(),
    };
    if counts.iter().all(|&c| c == 0) {
        return Ok(fit);
    }
    let xs: Vec<f64> = grid.iter().map(|&b| (b as f64).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64 + 1.0).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    fit.residuals = xs.iter().zip(&ys).map(|(x, y)| y - (intercept + slope * x)).collect();
    fit.slope = Some(slope);
    fit.intercept = Some(intercept);
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_count_has_slope_one() {
        let grid = geometric_grid(16, 1024, 7).unwrap();
        let counts: Vec<u64> = grid.iter().map(|&b| 2 * b as u64 + 1).collect();
        let f = exponent_fit(&grid, &counts).unwrap();
        assert!((f.slope.unwrap() - 1.0).abs() < 0.1);
        assert_eq!(f.residuals.len(), grid.len());
    }

    #[test]
    fn zero_counts_leave_slope_undefined() {
        let f = exponent_fit(&[2, 4, 8, 16], &[0, 0, 0, 0]).unwrap();
        assert!(f.slope.is_none());
        assert!(exponent_fit(&[2, 4, 8], &[1, 2, 3]).is_err());
    }

    #[test]
    fn grid_is_geometric() {
        assert_eq!(geometric_grid(32, 1024, 6).unwrap(), vec![32, 64, 128, 256, 512, 1024]);
    }
}
