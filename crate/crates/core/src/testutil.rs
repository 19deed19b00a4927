//! Fixtures shared across the crate's unit tests.

use alloc::vec;

use crate::grid::{CountyGrid, DensityGrid, RegionMask};

/// 4x4 uniform density; county 1 is the left two columns plus cell (0, 2),
/// county 2 is everything else.
pub(crate) fn fixture_f() -> (RegionMask, DensityGrid, CountyGrid) {
    let density = DensityGrid::new(4, 4, vec![1.0; 16]).unwrap();
    let counties = CountyGrid::parse("1,1,1,2\n1,1,2,2\n1,1,2,2\n1,1,2,2").unwrap();
    let mask = counties.state_mask();
    (mask, density, counties)
}
