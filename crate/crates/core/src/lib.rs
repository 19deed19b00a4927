//! Equal-population districting on raster grids.
//!
//! The crate divides a rasterized state into `m` districts of (near-)equal
//! population with axis-aligned split lines, optionally bends each dividing
//! line onto county boundaries under a population tolerance, and audits any
//! districting for packing/cracking bias with a chi-square test.
//!
//! The core is `no_std` (with `alloc`); all file and image IO lives in the
//! companion CLI crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod fairness;
pub mod grid;
mod math;
pub(crate) mod netpbm;
pub mod report;
pub mod snap;
pub mod split;
#[cfg(test)]
pub(crate) mod testutil;

pub use fairness::{audit, FairnessError, FairnessInput, FairnessReport, Verdict};
pub use grid::{ColorPalette, CountyGrid, DensityGrid, GridError, RegionMask};
pub use report::{county_split_count, population_summary, render_map, ReportError};
pub use snap::{divide_snapped, snap_split, SnapError, SnappedDivide};
pub use split::{divide_simple, Axis, DistrictMap, SplitError, SplitLine};
