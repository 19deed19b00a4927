//! The improved model: bend each straight dividing line onto county
//! boundaries wherever the population tolerance allows.
//!
//! A cut line is walked once to find every point where the county context
//! changes. Each homogeneous stretch between two points becomes a segment.
//! Segments that run through the interior of a county get a candidate
//! detour along that county's boundary, together with the pocket of cells
//! (the lens) the detour would move across the line and its signed
//! population. A greedy pass then reverts detours to the straight line until
//! the total population shift fits under the tolerance.

use alloc::vec::Vec;

use crate::grid::{check_dims, CountyGrid, DensityGrid, RegionMask};
use crate::math;
use crate::split::{apply_split, divide_with, DistrictMap, SplitError, SplitLine};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SnapError {
    #[error("line does not touch the region")]
    LineOffRegion,
    #[error("segment does not run through a county interior")]
    NotInterior,
    #[error("tolerance delta must be positive")]
    NonpositiveDelta,
    #[error("tolerance must lie strictly between 0 and 0.5")]
    InvalidTolerance,
    #[error(transparent)]
    Split(#[from] SplitError),
}

impl SnapError {
    pub fn code(&self) -> &'static str {
        match self {
            SnapError::LineOffRegion => "LINE_OFF_REGION",
            SnapError::NotInterior => "NOT_INTERIOR",
            SnapError::NonpositiveDelta => "NONPOSITIVE_DELTA",
            SnapError::InvalidTolerance => "INVALID_TOLERANCE",
            SnapError::Split(e) => e.code(),
        }
    }
}

/// Path taken across a segment, reported with the wire codes 1/2/3:
/// detour on the low-coordinate side, keep the straight line, or detour on
/// the high-coordinate side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathChoice {
    LeftOrUp,
    Straight,
    RightOrDown,
}

impl PathChoice {
    pub fn as_code(self) -> u8 {
        match self {
            PathChoice::LeftOrUp => 1,
            PathChoice::Straight => 2,
            PathChoice::RightOrDown => 3,
        }
    }
}

/// Which side of the cut a detour (and its lens) lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    LeftOrUp,
    RightOrDown,
}

impl From<Side> for PathChoice {
    fn from(side: Side) -> Self {
        match side {
            Side::LeftOrUp => PathChoice::LeftOrUp,
            Side::RightOrDown => PathChoice::RightOrDown,
        }
    }
}

/// County context of a segment: interior of one county, astride a county
/// boundary, or against the region's edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Interior(u32),
    OnBoundary,
    Edge,
}

impl SegmentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SegmentKind::Interior(_) => "INTERIOR",
            SegmentKind::OnBoundary => "ON_BOUNDARY",
            SegmentKind::Edge => "EDGE",
        }
    }
}

/// One stretch of the cut line between two adjacent intersection points.
///
/// `before`/`after` are the county ids of the member cells immediately on
/// the low and high side of the cut, `None` where that side is off the
/// region. `shift` is the signed population of the lens: negative when the
/// lens lies on the low side (side A loses it), positive on the high side.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapSegment {
    pub span_start: usize,
    pub span_end: usize,
    pub before: Option<u32>,
    pub after: Option<u32>,
    pub path: PathChoice,
    pub lens: Vec<(usize, usize)>,
    pub shift: f64,
}

impl SnapSegment {
    pub fn kind(&self) -> SegmentKind {
        match (self.before, self.after) {
            (Some(b), Some(a)) if b == a => SegmentKind::Interior(b),
            (Some(_), Some(_)) => SegmentKind::OnBoundary,
            _ => SegmentKind::Edge,
        }
    }
}

/// A straight cut together with its county-snapped refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct SnappedDivide {
    pub line: SplitLine,
    pub segments: Vec<SnapSegment>,
    /// Signed population moved across the line by the kept detours;
    /// side A's population is the straight split's plus this amount.
    pub final_deviation: f64,
}

impl SnappedDivide {
    /// Intersection points along the line: region entry, every county
    /// context change, region exit.
    pub fn points(&self) -> Vec<usize> {
        let mut points: Vec<usize> = self.segments.iter().map(|s| s.span_start).collect();
        if let Some(last) = self.segments.last() {
            points.push(last.span_end);
        }
        points
    }

    /// County ids the straight line runs through or alongside.
    pub fn touched_counties(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self
            .segments
            .iter()
            .flat_map(|s| [s.before, s.after])
            .flatten()
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

/// One recorded cut of a snapped recursive division.
#[derive(Debug, Clone, PartialEq)]
pub struct DivideTrace {
    /// First district id of the region this cut divides.
    pub first_district: u32,
    /// Number of districts the region is being divided into.
    pub district_count: u32,
    pub divide: SnappedDivide,
}

fn county_at(
    line: &SplitLine,
    mask: &RegionMask,
    counties: &CountyGrid,
    along: usize,
    perp: isize,
) -> Option<u32> {
    if perp < 0 || perp as usize >= line.perp_len(mask.width(), mask.height()) {
        return None;
    }
    let (row, col) = line.cell(along, perp as usize);
    if !mask.contains(row, col) {
        return None;
    }
    Some(counties.get(row, col))
}

/// Walks the line and records every point where the county context changes.
///
/// The context at along-line coordinate `a` is the pair of county ids of the
/// member cells just before and just after the cut. Segments come back with
/// `path` set to straight, an empty lens, and zero shift; the snapping
/// pipeline fills interiors in afterwards.
pub fn line_intersections(
    line: &SplitLine,
    mask: &RegionMask,
    counties: &CountyGrid,
) -> Result<Vec<SnapSegment>, SnapError> {
    check_dims(
        mask.width(),
        mask.height(),
        counties.width(),
        counties.height(),
    )
    .map_err(SplitError::Grid)?;
    let along_len = line.along_len(mask.width(), mask.height());
    let before_perp = line.index as isize - 1;
    let after_perp = line.index as isize;

    let contexts: Vec<(Option<u32>, Option<u32>)> = (0..along_len)
        .map(|a| {
            (
                county_at(line, mask, counties, a, before_perp),
                county_at(line, mask, counties, a, after_perp),
            )
        })
        .collect();

    let entry = contexts
        .iter()
        .position(|&c| c != (None, None))
        .ok_or(SnapError::LineOffRegion)?;
    let exit = contexts.iter().rposition(|&c| c != (None, None)).unwrap() + 1;

    let mut segments = Vec::new();
    let mut start = entry;
    for a in entry + 1..=exit {
        if a == exit || contexts[a] != contexts[start] {
            segments.push(SnapSegment {
                span_start: start,
                span_end: a,
                before: contexts[start].0,
                after: contexts[start].1,
                path: PathChoice::Straight,
                lens: Vec::new(),
                shift: 0.0,
            });
            start = a;
        }
    }
    Ok(segments)
}

/// Picks the detour side for an interior segment: from a probe cell two
/// along-line units into the segment (clamped to stay inside it), scan
/// perpendicular to the cut on both sides; the side whose scan leaves the
/// county (or the region) first wins. Ties go to the low side.
pub fn initial_path(
    segment: &SnapSegment,
    line: &SplitLine,
    counties: &CountyGrid,
    mask: &RegionMask,
) -> Result<Side, SnapError> {
    let SegmentKind::Interior(county) = segment.kind() else {
        return Err(SnapError::NotInterior);
    };
    let probe = (segment.span_start + 2).min(segment.span_end - 1);
    let scan = |start_perp: isize, step: isize| -> usize {
        let mut dist = 0;
        let mut perp = start_perp;
        while county_at(line, mask, counties, probe, perp) == Some(county) {
            dist += 1;
            perp += step;
        }
        dist
    };
    let low = scan(line.index as isize - 1, -1);
    let high = scan(line.index as isize, 1);
    Ok(if high < low {
        Side::RightOrDown
    } else {
        Side::LeftOrUp
    })
}

/// Collects the lens an interior segment's detour would move: the member
/// cells of the segment's county whose along-line coordinate falls in the
/// span and which lie on the given side of the cut. Returns the cells and
/// the signed population shift.
pub fn lens_region(
    segment: &SnapSegment,
    side: Side,
    line: &SplitLine,
    counties: &CountyGrid,
    density: &DensityGrid,
    mask: &RegionMask,
) -> Result<(Vec<(usize, usize)>, f64), SnapError> {
    let SegmentKind::Interior(county) = segment.kind() else {
        return Err(SnapError::NotInterior);
    };
    let perp_len = line.perp_len(mask.width(), mask.height());
    let perp_range = match side {
        Side::LeftOrUp => 0..line.index,
        Side::RightOrDown => line.index..perp_len,
    };
    let mut cells = Vec::new();
    let mut population = 0.0f64;
    for along in segment.span_start..segment.span_end {
        for perp in perp_range.clone() {
            let (row, col) = line.cell(along, perp);
            if mask.contains(row, col) && counties.get(row, col) == county {
                cells.push((row, col));
                population += density.get(row, col);
            }
        }
    }
    let shift = match side {
        Side::LeftOrUp => -population,
        Side::RightOrDown => population,
    };
    Ok((cells, shift))
}

/// Reverts detours to the straight line until the total shift `S` satisfies
/// `|S| < delta`: each round straightens the non-straight segment whose
/// shift is closest to `S` (ties to the lowest index).
pub fn greedy_adjust(
    mut segments: Vec<SnapSegment>,
    delta: f64,
) -> Result<Vec<SnapSegment>, SnapError> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(SnapError::NonpositiveDelta);
    }
    let mut total: f64 = segments
        .iter()
        .filter(|s| s.path != PathChoice::Straight)
        .map(|s| s.shift)
        .sum();
    while math::abs(total) >= delta {
        let mut closest: Option<(f64, usize)> = None;
        for (i, seg) in segments.iter().enumerate() {
            if seg.path == PathChoice::Straight {
                continue;
            }
            let dist = math::abs(total - seg.shift);
            if closest.is_none_or(|(best, _)| dist < best) {
                closest = Some((dist, i));
            }
        }
        let Some((_, i)) = closest else {
            break; // every segment is straight: S is an empty sum
        };
        segments[i].path = PathChoice::Straight;
        total -= segments[i].shift;
    }
    Ok(segments)
}

fn kept_deviation(segments: &[SnapSegment]) -> f64 {
    segments
        .iter()
        .filter(|s| s.path != PathChoice::Straight)
        .map(|s| s.shift)
        .sum()
}

/// Replaces a straight cut with a county-snapped divide: detours are chosen
/// per interior segment, trimmed by [`greedy_adjust`], and each kept detour
/// moves its lens to the other side of the cut.
pub fn snap_split(
    mask: &RegionMask,
    density: &DensityGrid,
    counties: &CountyGrid,
    line: &SplitLine,
    delta: f64,
) -> Result<(RegionMask, RegionMask, SnappedDivide), SnapError> {
    check_dims(
        mask.width(),
        mask.height(),
        density.width(),
        density.height(),
    )
    .map_err(SplitError::Grid)?;
    if delta.is_nan() || delta <= 0.0 {
        return Err(SnapError::NonpositiveDelta);
    }
    let mut segments = line_intersections(line, mask, counties)?;
    for segment in &mut segments {
        if let SegmentKind::Interior(_) = segment.kind() {
            let side = initial_path(segment, line, counties, mask)?;
            let (lens, shift) = lens_region(segment, side, line, counties, density, mask)?;
            segment.path = side.into();
            segment.lens = lens;
            segment.shift = shift;
        }
    }
    let segments = greedy_adjust(segments, delta)?;

    let (mut side_a, mut side_b) = apply_split(mask, line)?;
    for segment in &segments {
        match segment.path {
            PathChoice::Straight => {}
            // Detour on the low side: side A's pocket joins side B.
            PathChoice::LeftOrUp => {
                for &(r, c) in &segment.lens {
                    side_a.set(r, c, false);
                    side_b.set(r, c, true);
                }
            }
            // Detour on the high side: side B's pocket joins side A.
            PathChoice::RightOrDown => {
                for &(r, c) in &segment.lens {
                    side_b.set(r, c, false);
                    side_a.set(r, c, true);
                }
            }
        }
    }
    let final_deviation = kept_deviation(&segments);
    Ok((
        side_a,
        side_b,
        SnappedDivide {
            line: *line,
            segments,
            final_deviation,
        },
    ))
}

fn snap_delta(
    mask: &RegionMask,
    density: &DensityGrid,
    districts: u32,
    tolerance: f64,
) -> Result<f64, SnapError> {
    if !(tolerance > 0.0 && tolerance < 0.5) {
        return Err(SnapError::InvalidTolerance);
    }
    if districts == 0 {
        return Err(SplitError::ZeroDistricts.into());
    }
    let state_population = mask.population(density).map_err(SplitError::Grid)?;
    Ok(tolerance * state_population / districts as f64)
}

/// The improved model: the same recursion as [`divide_simple`], with every
/// straight cut replaced by its county-snapped divide. The tolerance is
/// taken against the theoretical single-district population of the whole
/// region at every recursion level.
///
/// [`divide_simple`]: crate::split::divide_simple
pub fn divide_snapped(
    mask: &RegionMask,
    density: &DensityGrid,
    counties: &CountyGrid,
    districts: u32,
    tolerance: f64,
) -> Result<DistrictMap, SnapError> {
    divide_snapped_traced(mask, density, counties, districts, tolerance).map(|(map, _)| map)
}

/// [`divide_snapped`] plus the per-cut divide reports, in the order the
/// cuts were made (depth-first, side A before side B).
pub fn divide_snapped_traced(
    mask: &RegionMask,
    density: &DensityGrid,
    counties: &CountyGrid,
    districts: u32,
    tolerance: f64,
) -> Result<(DistrictMap, Vec<DivideTrace>), SnapError> {
    check_dims(
        mask.width(),
        mask.height(),
        counties.width(),
        counties.height(),
    )
    .map_err(SplitError::Grid)?;
    let delta = snap_delta(mask, density, districts, tolerance)?;
    let mut traces = Vec::new();
    let map = divide_with::<SnapError, _>(mask, density, districts, &mut |region, line, span| {
        let (side_a, side_b, divide) = snap_split(region, density, counties, line, delta)?;
        traces.push(DivideTrace {
            first_district: span.first,
            district_count: span.count,
            divide,
        });
        Ok((side_a, side_b))
    })?;
    Ok((map, traces))
}
