//! The simple model: recursively divide a region into `m` districts using
//! only horizontal and vertical split lines that balance population.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::grid::{check_dims, DensityGrid, GridError, RegionMask};
use crate::math;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SplitError {
    #[error("region has no member cells")]
    EmptyRegion,
    #[error("no valid cut position on either axis")]
    IndivisibleRegion,
    #[error("cut leaves one side empty")]
    DegenerateCut,
    #[error("region has {cells} cells for {districts} districts")]
    TooFewCells { cells: usize, districts: u32 },
    #[error("district count must be at least 1")]
    ZeroDistricts,
    #[error("target fraction must lie strictly between 0 and 1")]
    InvalidTargetFraction,
    #[error(transparent)]
    Grid(#[from] GridError),
}

impl SplitError {
    pub fn code(&self) -> &'static str {
        match self {
            SplitError::EmptyRegion => "EMPTY_REGION",
            SplitError::IndivisibleRegion => "INDIVISIBLE_REGION",
            SplitError::DegenerateCut => "DEGENERATE_CUT",
            SplitError::TooFewCells { .. } => "TOO_FEW_CELLS",
            SplitError::ZeroDistricts => "ZERO_DISTRICTS",
            SplitError::InvalidTargetFraction => "INVALID_TARGET_FRACTION",
            SplitError::Grid(e) => e.code(),
        }
    }
}

/// Cut direction. A vertical line separates columns, a horizontal line
/// separates rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Vertical,
    Horizontal,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Vertical => Axis::Horizontal,
            Axis::Horizontal => Axis::Vertical,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Vertical => "VERTICAL",
            Axis::Horizontal => "HORIZONTAL",
        }
    }
}

/// An axis-aligned divider at cut position `index`. Side A holds the member
/// cells with column (vertical) or row (horizontal) strictly below `index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitLine {
    pub axis: Axis,
    pub index: usize,
}

impl SplitLine {
    /// Coordinate of a cell along the cut's A/B direction.
    pub(crate) fn perp_of(&self, row: usize, col: usize) -> usize {
        match self.axis {
            Axis::Vertical => col,
            Axis::Horizontal => row,
        }
    }

    /// `(row, col)` of the cell at an along-line / perpendicular coordinate
    /// pair. Walking "along" a vertical line varies the row.
    pub(crate) fn cell(&self, along: usize, perp: usize) -> (usize, usize) {
        match self.axis {
            Axis::Vertical => (along, perp),
            Axis::Horizontal => (perp, along),
        }
    }

    /// Along-line extent of the grid the line is embedded in.
    pub(crate) fn along_len(&self, width: usize, height: usize) -> usize {
        match self.axis {
            Axis::Vertical => height,
            Axis::Horizontal => width,
        }
    }

    /// Perpendicular extent of the grid the line is embedded in.
    pub(crate) fn perp_len(&self, width: usize, height: usize) -> usize {
        match self.axis {
            Axis::Vertical => width,
            Axis::Horizontal => height,
        }
    }
}

/// Per-cell district assignment; `None` marks OUTSIDE cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistrictMap {
    width: usize,
    height: usize,
    assignment: Vec<Option<u32>>,
}

impl DistrictMap {
    pub(crate) fn unassigned(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            assignment: vec![None; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn district(&self, row: usize, col: usize) -> Option<u32> {
        self.assignment[row * self.width + col]
    }

    pub(crate) fn assign(&mut self, row: usize, col: usize, district: u32) {
        self.assignment[row * self.width + col] = Some(district);
    }

    /// Number of districts, assuming ids form the range `0..count`.
    pub fn district_count(&self) -> u32 {
        self.assignment
            .iter()
            .flatten()
            .max()
            .map_or(0, |&max| max + 1)
    }

    /// Serializes to comma-separated district ids, `-1` for OUTSIDE.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in 0..self.height {
            for c in 0..self.width {
                if c > 0 {
                    out.push(',');
                }
                match self.district(r, c) {
                    Some(d) => out.push_str(&d.to_string()),
                    None => out.push_str("-1"),
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parses the CSV form produced by [`DistrictMap::to_csv`].
    pub fn parse(text: &str) -> Result<Self, GridError> {
        if text.trim().is_empty() {
            return Err(GridError::EmptyInput);
        }
        let mut width = 0usize;
        let mut height = 0usize;
        let mut assignment = Vec::new();
        for (row, line) in text.lines().enumerate() {
            let mut found = 0usize;
            for (col, tok) in line.split(',').enumerate() {
                let tok = tok.trim();
                let v: i64 = tok
                    .parse()
                    .map_err(|_| GridError::UnparseableNumber { row, col })?;
                if v < -1 || v > u32::MAX as i64 {
                    return Err(GridError::InvalidDistrictId { row, col });
                }
                assignment.push(if v == -1 { None } else { Some(v as u32) });
                found += 1;
            }
            if row == 0 {
                width = found;
            } else if found != width {
                return Err(GridError::RaggedRows {
                    row,
                    expected: width,
                    found,
                });
            }
            height += 1;
        }
        Ok(Self {
            width,
            height,
            assignment,
        })
    }

    /// Member mask of one district's cells.
    pub fn district_mask(&self, district: u32) -> RegionMask {
        let mut mask = RegionMask::empty(self.width, self.height);
        for r in 0..self.height {
            for c in 0..self.width {
                if self.district(r, c) == Some(district) {
                    mask.set(r, c, true);
                }
            }
        }
        mask
    }
}

/// Cut perpendicular to the longer bounding-box dimension; square boxes cut
/// vertically.
pub fn choose_axis(mask: &RegionMask) -> Result<Axis, SplitError> {
    let bb = mask.bounding_box().ok_or(SplitError::EmptyRegion)?;
    Ok(if bb.width() >= bb.height() {
        Axis::Vertical
    } else {
        Axis::Horizontal
    })
}

/// Returns the cut whose side-A population is closest to
/// `target_fraction * pop(mask)`. Ties break toward the smallest index. If
/// the requested axis admits no cut with both sides non-empty, the other
/// axis is tried before giving up.
pub fn best_split(
    mask: &RegionMask,
    density: &DensityGrid,
    axis: Axis,
    target_fraction: f64,
) -> Result<SplitLine, SplitError> {
    check_dims(
        mask.width(),
        mask.height(),
        density.width(),
        density.height(),
    )
    .map_err(SplitError::Grid)?;
    if !(target_fraction > 0.0 && target_fraction < 1.0) {
        return Err(SplitError::InvalidTargetFraction);
    }
    let bb = mask.bounding_box().ok_or(SplitError::EmptyRegion)?;

    let span = |a: Axis| match a {
        Axis::Vertical => bb.width(),
        Axis::Horizontal => bb.height(),
    };
    let axis = if span(axis) >= 2 {
        axis
    } else if span(axis.other()) >= 2 {
        axis.other()
    } else {
        return Err(SplitError::IndivisibleRegion);
    };

    let (lo, hi) = match axis {
        Axis::Vertical => (bb.min_col, bb.max_col),
        Axis::Horizontal => (bb.min_row, bb.max_row),
    };

    // In-mask population of each row/column position along the axis.
    let mut sums = vec![0.0f64; hi - lo + 1];
    for (r, c) in mask.cells() {
        let pos = match axis {
            Axis::Vertical => c,
            Axis::Horizontal => r,
        };
        sums[pos - lo] += density.get(r, c);
    }
    let total: f64 = sums.iter().sum();

    if total == 0.0 {
        // Any cut balances a zero-population region; the bounding-box
        // midpoint is the canonical choice, rounding the extra cell onto
        // side A.
        let span = hi - lo + 1;
        return Ok(SplitLine {
            axis,
            index: lo + span.div_ceil(2),
        });
    }

    let target = target_fraction * total;
    let mut side_a = 0.0f64;
    let mut best = None;
    for cut in (lo + 1)..=hi {
        side_a += sums[cut - 1 - lo];
        let dev = math::abs(side_a - target);
        match best {
            None => best = Some((dev, cut)),
            Some((best_dev, _)) if dev < best_dev => best = Some((dev, cut)),
            _ => {}
        }
    }
    let (_, index) = best.expect("span >= 2 yields at least one cut");
    Ok(SplitLine { axis, index })
}

/// Partitions the mask into (side A, side B) across the line.
pub fn apply_split(
    mask: &RegionMask,
    line: &SplitLine,
) -> Result<(RegionMask, RegionMask), SplitError> {
    let mut side_a = RegionMask::empty(mask.width(), mask.height());
    let mut side_b = RegionMask::empty(mask.width(), mask.height());
    for (r, c) in mask.cells() {
        if line.perp_of(r, c) < line.index {
            side_a.set(r, c, true);
        } else {
            side_b.set(r, c, true);
        }
    }
    if side_a.is_empty() || side_b.is_empty() {
        return Err(SplitError::DegenerateCut);
    }
    Ok((side_a, side_b))
}

/// District-id range a recursive call is responsible for.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DistrictSpan {
    pub first: u32,
    pub count: u32,
}

/// Shared recursion for the simple and the county-snapped model: split `m`
/// as `ceil(m/2) / floor(m/2)`, aim side A at its share of the region's own
/// population, and assign ids depth-first, A before B.
pub(crate) fn divide_with<E, F>(
    mask: &RegionMask,
    density: &DensityGrid,
    districts: u32,
    splitter: &mut F,
) -> Result<DistrictMap, E>
where
    E: From<SplitError>,
    F: FnMut(&RegionMask, &SplitLine, DistrictSpan) -> Result<(RegionMask, RegionMask), E>,
{
    check_dims(
        mask.width(),
        mask.height(),
        density.width(),
        density.height(),
    )
    .map_err(SplitError::Grid)?;
    if districts == 0 {
        return Err(SplitError::ZeroDistricts.into());
    }
    let mut map = DistrictMap::unassigned(mask.width(), mask.height());
    recurse(
        mask,
        density,
        DistrictSpan {
            first: 0,
            count: districts,
        },
        &mut map,
        splitter,
    )?;
    Ok(map)
}

fn recurse<E, F>(
    mask: &RegionMask,
    density: &DensityGrid,
    span: DistrictSpan,
    map: &mut DistrictMap,
    splitter: &mut F,
) -> Result<(), E>
where
    E: From<SplitError>,
    F: FnMut(&RegionMask, &SplitLine, DistrictSpan) -> Result<(RegionMask, RegionMask), E>,
{
    let cells = mask.cell_count();
    if (cells as u64) < span.count as u64 {
        return Err(SplitError::TooFewCells {
            cells,
            districts: span.count,
        }
        .into());
    }
    if span.count == 1 {
        for (r, c) in mask.cells() {
            map.assign(r, c, span.first);
        }
        return Ok(());
    }
    let count_a = span.count.div_ceil(2);
    let target_fraction = count_a as f64 / span.count as f64;
    let axis = choose_axis(mask)?;
    let line = best_split(mask, density, axis, target_fraction)?;
    let (side_a, side_b) = splitter(mask, &line, span)?;
    recurse(
        &side_a,
        density,
        DistrictSpan {
            first: span.first,
            count: count_a,
        },
        map,
        splitter,
    )?;
    recurse(
        &side_b,
        density,
        DistrictSpan {
            first: span.first + count_a,
            count: span.count - count_a,
        },
        map,
        splitter,
    )
}

/// Divides the mask into `districts` equal-population districts with
/// straight cuts only.
pub fn divide_simple(
    mask: &RegionMask,
    density: &DensityGrid,
    districts: u32,
) -> Result<DistrictMap, SplitError> {
    divide_with(mask, density, districts, &mut |region, line, _| {
        apply_split(region, line)
    })
}
