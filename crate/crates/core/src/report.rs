//! Evaluation metrics and map rendering: population balance, county
//! integrity, and district images.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::grid::{check_dims, CountyGrid, DensityGrid, GridError, OUTSIDE};
use crate::math;
use crate::netpbm;
use crate::split::DistrictMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReportError {
    #[error("map assigns no districts")]
    EmptyMap,
    #[error(transparent)]
    Grid(#[from] GridError),
}

impl ReportError {
    pub fn code(&self) -> &'static str {
        match self {
            ReportError::EmptyMap => "EMPTY_MAP",
            ReportError::Grid(e) => e.code(),
        }
    }
}

/// Per-district populations against the ideal equal share.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceSummary {
    pub per_district: Vec<f64>,
    /// Ideal district population: state population / district count.
    pub target: f64,
    /// Largest |pop - target| / target, as a percentage.
    pub max_deviation_pct: f64,
}

/// Counties whose cells span more than one district.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegritySummary {
    pub split_counties: usize,
    pub split_list: Vec<u32>,
}

/// Sums district populations and the worst percentage deviation from the
/// equal-share target.
pub fn population_summary(
    map: &DistrictMap,
    density: &DensityGrid,
) -> Result<BalanceSummary, ReportError> {
    check_dims(map.width(), map.height(), density.width(), density.height())
        .map_err(ReportError::Grid)?;
    let districts = map.district_count();
    if districts == 0 {
        return Err(ReportError::EmptyMap);
    }
    let mut per_district = vec![0.0f64; districts as usize];
    for r in 0..map.height() {
        for c in 0..map.width() {
            if let Some(d) = map.district(r, c) {
                per_district[d as usize] += density.get(r, c);
            }
        }
    }
    let total: f64 = per_district.iter().sum();
    let target = total / districts as f64;
    let max_deviation_pct = if target == 0.0 {
        0.0
    } else {
        per_district
            .iter()
            .map(|&p| math::abs(p - target) / target * 100.0)
            .fold(0.0, f64::max)
    };
    Ok(BalanceSummary {
        per_district,
        target,
        max_deviation_pct,
    })
}

/// A county is split when its in-state cells carry two or more district ids.
pub fn county_split_count(
    map: &DistrictMap,
    counties: &CountyGrid,
) -> Result<IntegritySummary, ReportError> {
    check_dims(
        map.width(),
        map.height(),
        counties.width(),
        counties.height(),
    )
    .map_err(ReportError::Grid)?;
    let mut seen: BTreeMap<u32, Option<u32>> = BTreeMap::new();
    let mut split_list = Vec::new();
    for r in 0..map.height() {
        for c in 0..map.width() {
            let county = counties.get(r, c);
            if county == OUTSIDE {
                continue;
            }
            let Some(district) = map.district(r, c) else {
                continue;
            };
            match seen.get(&county).copied() {
                None => {
                    seen.insert(county, Some(district));
                }
                Some(Some(first)) if first != district => {
                    seen.insert(county, None);
                    split_list.push(county);
                }
                _ => {}
            }
        }
    }
    split_list.sort_unstable();
    Ok(IntegritySummary {
        split_counties: split_list.len(),
        split_list,
    })
}

/// Deterministic district color: a fixed permutation into an HSV-spaced
/// table of 256 entries, distinct for ids 0..256 and never black (black is
/// reserved for OUTSIDE).
pub fn district_color(district: u32) -> [u8; 3] {
    let slot = (district as u64 * 97 + 31) % 256;
    let ring = slot / 64;
    let step = (slot % 64) as f64;
    let hue = step * (360.0 / 64.0);
    let (saturation, value) = match ring {
        0 => (0.95, 0.95),
        1 => (0.60, 0.95),
        2 => (0.95, 0.62),
        _ => (0.55, 0.72),
    };
    hsv_to_rgb(hue, saturation, value)
}

fn hsv_to_rgb(hue: f64, saturation: f64, value: f64) -> [u8; 3] {
    let chroma = value * saturation;
    let sector = hue / 60.0; // in [0, 6)
    let x = chroma * (1.0 - math::abs(sector % 2.0 - 1.0));
    let (r, g, b) = match sector as usize {
        0 => (chroma, x, 0.0),
        1 => (x, chroma, 0.0),
        2 => (0.0, chroma, x),
        3 => (0.0, x, chroma),
        4 => (x, 0.0, chroma),
        _ => (chroma, 0.0, x),
    };
    let m = value - chroma;
    let to_byte = |v: f64| math::round((v + m) * 255.0) as u8;
    [to_byte(r), to_byte(g), to_byte(b)]
}

/// Renders the district map as a binary portable-pixmap: one fixed color
/// per district id, black for OUTSIDE.
pub fn render_map(map: &DistrictMap) -> Vec<u8> {
    let mut rgb = Vec::with_capacity(map.width() * map.height() * 3);
    for r in 0..map.height() {
        for c in 0..map.width() {
            let px = match map.district(r, c) {
                Some(d) => district_color(d),
                None => [0, 0, 0],
            };
            rgb.extend_from_slice(&px);
        }
    }
    netpbm::write_p6(map.width(), map.height(), &rgb)
}
