//! Line families concentrated on a coordinate subspace.

use super::geometry::Line;
use super::lattice::directions_near_coordinate_subspace;
use crate::error::{Error, Result};

/// Lines through the origin, one per lattice direction within `R^{-1/2}`
/// of `V = {x_0 = … = x_{j-1} = 0}`. Each has full occupancy in
/// `N_{R^{1/2}} V ∩ B_R`.
pub fn extremal_family(n: usize, j: usize, big_r: f64) -> Result<Vec<Line>> {
    if j == 0 || j >= n {
        return Err(Error::domain(format!("extremal family needs 1 <= j <= n - 1, got j = {j}, n = {n}")));
    }
    directions_near_coordinate_subspace(n, j, big_r)?
        .into_iter()
        .map(|d| Line::new(vec![0.0; n], &d))
        .collect()
}
