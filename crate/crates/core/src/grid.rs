//! Population density grids, county grids, region masks, and color palettes.
//!
//! All grids are row-major with cell `(row, col)` stored at `row * width + col`.
//! County id `0` is the reserved OUTSIDE sentinel: those cells lie off the
//! state and never contribute to population sums or district assignment.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::netpbm::{self, Raster, Samples};

/// County id marking cells that lie outside the state.
pub const OUTSIDE: u32 = 0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("input contains no grid rows")]
    EmptyInput,
    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("negative density at row {row}, col {col}")]
    NegativeDensity { row: usize, col: usize },
    #[error("unparseable number at row {row}, col {col}")]
    UnparseableNumber { row: usize, col: usize },
    #[error("negative county id at row {row}, col {col}")]
    NegativeId { row: usize, col: usize },
    #[error("every cell is outside the state")]
    AllOutside,
    #[error("malformed image: {reason}")]
    MalformedImage { reason: String },
    #[error("pixel ({x}, {y}) has color ({red}, {green}, {blue}) not in the palette")]
    UnknownColor {
        x: usize,
        y: usize,
        red: u8,
        green: u8,
        blue: u8,
    },
    #[error("palette repeats color ({red}, {green}, {blue})")]
    DuplicateColor { red: u8, green: u8, blue: u8 },
    #[error("palette line {line} is malformed")]
    MalformedPalette { line: usize },
    #[error("invalid district id at row {row}, col {col}")]
    InvalidDistrictId { row: usize, col: usize },
    #[error("graymap scale must be finite and non-negative")]
    InvalidScale,
    #[error("grid is {found_width}x{found_height}, expected {expected_width}x{expected_height}")]
    DimensionMismatch {
        expected_width: usize,
        expected_height: usize,
        found_width: usize,
        found_height: usize,
    },
}

impl GridError {
    /// Stable machine-readable code, one per error family.
    pub fn code(&self) -> &'static str {
        match self {
            GridError::EmptyInput => "EMPTY_INPUT",
            GridError::RaggedRows { .. } => "RAGGED_ROWS",
            GridError::NegativeDensity { .. } => "NEGATIVE_DENSITY",
            GridError::UnparseableNumber { .. } => "UNPARSEABLE_NUMBER",
            GridError::NegativeId { .. } => "NEGATIVE_ID",
            GridError::AllOutside => "ALL_OUTSIDE",
            GridError::MalformedImage { .. } => "MALFORMED_IMAGE",
            GridError::UnknownColor { .. } => "UNKNOWN_COLOR",
            GridError::DuplicateColor { .. } => "DUPLICATE_COLOR",
            GridError::MalformedPalette { .. } => "MALFORMED_PALETTE",
            GridError::InvalidDistrictId { .. } => "INVALID_DISTRICT_ID",
            GridError::InvalidScale => "INVALID_SCALE",
            GridError::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
        }
    }
}

pub(crate) fn check_dims(
    expected_width: usize,
    expected_height: usize,
    found_width: usize,
    found_height: usize,
) -> Result<(), GridError> {
    if expected_width != found_width || expected_height != found_height {
        return Err(GridError::DimensionMismatch {
            expected_width,
            expected_height,
            found_width,
            found_height,
        });
    }
    Ok(())
}

/// Parses comma-separated rows into `(width, height, cells)`, enforcing a
/// rectangular shape. Cell parsing is delegated so density, county, and
/// district grids share the same shape handling.
fn parse_rows<T>(
    text: &str,
    mut parse_cell: impl FnMut(&str, usize, usize) -> Result<T, GridError>,
) -> Result<(usize, usize, Vec<T>), GridError> {
    if text.trim().is_empty() {
        return Err(GridError::EmptyInput);
    }
    let mut width = 0usize;
    let mut cells = Vec::new();
    let mut height = 0usize;
    for (row, line) in text.lines().enumerate() {
        let mut found = 0usize;
        for (col, tok) in line.split(',').enumerate() {
            cells.push(parse_cell(tok.trim(), row, col)?);
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
    Ok((width, height, cells))
}

/// Per-cell population mass over a rectangular raster.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    width: usize,
    height: usize,
    cells: Vec<f64>,
}

impl DensityGrid {
    pub fn new(width: usize, height: usize, cells: Vec<f64>) -> Result<Self, GridError> {
        if width == 0 || height == 0 || cells.len() != width * height {
            return Err(GridError::DimensionMismatch {
                expected_width: width,
                expected_height: height,
                found_width: cells.len().checked_div(height).unwrap_or(0),
                found_height: cells.len().checked_div(width).unwrap_or(0),
            });
        }
        for (i, &v) in cells.iter().enumerate() {
            if !v.is_finite() {
                return Err(GridError::UnparseableNumber {
                    row: i / width,
                    col: i % width,
                });
            }
            if v < 0.0 {
                return Err(GridError::NegativeDensity {
                    row: i / width,
                    col: i % width,
                });
            }
        }
        Ok(Self {
            width,
            height,
            cells,
        })
    }

    /// Parses a comma-separated grid of non-negative decimal numbers.
    pub fn parse(text: &str) -> Result<Self, GridError> {
        let (width, height, cells) = parse_rows(text, |tok, row, col| {
            let v: f64 = tok
                .parse()
                .map_err(|_| GridError::UnparseableNumber { row, col })?;
            if !v.is_finite() {
                return Err(GridError::UnparseableNumber { row, col });
            }
            if v < 0.0 {
                return Err(GridError::NegativeDensity { row, col });
            }
            Ok(v)
        })?;
        Ok(Self {
            width,
            height,
            cells,
        })
    }

    /// Maps every pixel of a portable-pixmap through the palette.
    pub fn from_pixmap(bytes: &[u8], palette: &ColorPalette) -> Result<Self, GridError> {
        let raster = netpbm::parse(bytes)?;
        let Raster {
            width,
            height,
            maxval,
            samples: Samples::Rgb(rgb),
        } = raster
        else {
            return Err(GridError::MalformedImage {
                reason: "expected a portable-pixmap (P3/P6), found a graymap".to_string(),
            });
        };
        if maxval != 255 {
            return Err(GridError::MalformedImage {
                reason: "palette-mapped pixmaps must use maxval 255".to_string(),
            });
        }
        let mut cells = Vec::with_capacity(width * height);
        for (i, px) in rgb.chunks_exact(3).enumerate() {
            let (red, green, blue) = (px[0] as u8, px[1] as u8, px[2] as u8);
            match palette.lookup(red, green, blue) {
                Some(density) => cells.push(density),
                None => {
                    return Err(GridError::UnknownColor {
                        x: i % width,
                        y: i / width,
                        red,
                        green,
                        blue,
                    })
                }
            }
        }
        Self::new(width, height, cells)
    }

    /// Reads a portable-graymap; value `v` with maxval `M` becomes density
    /// `v / M * scale`.
    pub fn from_graymap(bytes: &[u8], scale: f64) -> Result<Self, GridError> {
        if !scale.is_finite() || scale < 0.0 {
            return Err(GridError::InvalidScale);
        }
        let raster = netpbm::parse(bytes)?;
        let Raster {
            width,
            height,
            maxval,
            samples: Samples::Gray(gray),
        } = raster
        else {
            return Err(GridError::MalformedImage {
                reason: "expected a portable-graymap (P2/P5), found a pixmap".to_string(),
            });
        };
        let cells = gray
            .iter()
            .map(|&v| v as f64 / maxval as f64 * scale)
            .collect();
        Self::new(width, height, cells)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.cells[row * self.width + col]
    }

    /// Sum over every cell, in or out of any mask.
    pub fn total(&self) -> f64 {
        self.cells.iter().sum()
    }

    /// Serializes back to the comma-separated format `parse` accepts.
    pub fn to_csv(&self) -> String {
        rows_to_csv(self.width, self.height, |r, c| self.get(r, c).to_string())
    }
}

/// Per-cell county labels; `0` marks cells outside the state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountyGrid {
    width: usize,
    height: usize,
    cells: Vec<u32>,
}

impl CountyGrid {
    pub fn new(width: usize, height: usize, cells: Vec<u32>) -> Result<Self, GridError> {
        if width == 0 || height == 0 || cells.len() != width * height {
            return Err(GridError::DimensionMismatch {
                expected_width: width,
                expected_height: height,
                found_width: cells.len().checked_div(height).unwrap_or(0),
                found_height: cells.len().checked_div(width).unwrap_or(0),
            });
        }
        if cells.iter().all(|&c| c == OUTSIDE) {
            return Err(GridError::AllOutside);
        }
        Ok(Self {
            width,
            height,
            cells,
        })
    }

    /// Parses a comma-separated grid of non-negative integer county ids.
    pub fn parse(text: &str) -> Result<Self, GridError> {
        let (width, height, cells) = parse_rows(text, |tok, row, col| {
            tok.parse::<u32>().map_err(|_| {
                if tok.len() > 1
                    && tok.starts_with('-')
                    && tok[1..].bytes().all(|b| b.is_ascii_digit())
                {
                    GridError::NegativeId { row, col }
                } else {
                    GridError::UnparseableNumber { row, col }
                }
            })
        })?;
        if cells.iter().all(|&c| c == OUTSIDE) {
            return Err(GridError::AllOutside);
        }
        Ok(Self {
            width,
            height,
            cells,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.cells[row * self.width + col]
    }

    /// Mask of all in-state cells (county id != 0).
    pub fn state_mask(&self) -> RegionMask {
        RegionMask {
            width: self.width,
            height: self.height,
            member: self.cells.iter().map(|&c| c != OUTSIDE).collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        rows_to_csv(self.width, self.height, |r, c| self.get(r, c).to_string())
    }
}

fn rows_to_csv(width: usize, height: usize, cell: impl Fn(usize, usize) -> String) -> String {
    let mut out = String::new();
    for r in 0..height {
        for c in 0..width {
            if c > 0 {
                out.push(',');
            }
            out.push_str(&cell(r, c));
        }
        out.push('\n');
    }
    out
}

/// The active cell set a divider works on: the whole state at the top of the
/// recursion, one side of a cut below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMask {
    width: usize,
    height: usize,
    member: Vec<bool>,
}

/// Inclusive bounding box of a mask's member cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundingBox {
    pub min_row: usize,
    pub max_row: usize,
    pub min_col: usize,
    pub max_col: usize,
}

impl BoundingBox {
    pub fn width(&self) -> usize {
        self.max_col - self.min_col + 1
    }

    pub fn height(&self) -> usize {
        self.max_row - self.min_row + 1
    }
}

impl RegionMask {
    pub fn new(width: usize, height: usize, member: Vec<bool>) -> Result<Self, GridError> {
        if width == 0 || height == 0 || member.len() != width * height {
            return Err(GridError::DimensionMismatch {
                expected_width: width,
                expected_height: height,
                found_width: member.len().checked_div(height).unwrap_or(0),
                found_height: member.len().checked_div(width).unwrap_or(0),
            });
        }
        Ok(Self {
            width,
            height,
            member,
        })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            member: vec![false; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// True for member cells; false off the mask or off the grid entirely.
    pub fn contains(&self, row: usize, col: usize) -> bool {
        row < self.height && col < self.width && self.member[row * self.width + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, member: bool) {
        self.member[row * self.width + col] = member;
    }

    pub fn cell_count(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.member.iter().any(|&m| m)
    }

    /// Iterates member cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let width = self.width;
        self.member
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(move |(i, _)| (i / width, i % width))
    }

    pub fn bounding_box(&self) -> Option<BoundingBox> {
        let mut bb: Option<BoundingBox> = None;
        for (row, col) in self.cells() {
            match &mut bb {
                None => {
                    bb = Some(BoundingBox {
                        min_row: row,
                        max_row: row,
                        min_col: col,
                        max_col: col,
                    })
                }
                Some(bb) => {
                    bb.min_row = bb.min_row.min(row);
                    bb.max_row = bb.max_row.max(row);
                    bb.min_col = bb.min_col.min(col);
                    bb.max_col = bb.max_col.max(col);
                }
            }
        }
        bb
    }

    /// Population of the mask: sum of density over member cells.
    pub fn population(&self, density: &DensityGrid) -> Result<f64, GridError> {
        check_dims(self.width, self.height, density.width(), density.height())?;
        Ok(self.cells().map(|(r, c)| density.get(r, c)).sum())
    }
}

/// One palette entry: a color triple and the population density it encodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaletteEntry {
    pub red: u8,
    pub green: u8,
    pub blue: u8,
    pub density: f64,
}

/// Maps pixel colors of a population map to densities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ColorPalette {
    entries: Vec<PaletteEntry>,
}

impl ColorPalette {
    pub fn new(entries: Vec<PaletteEntry>) -> Result<Self, GridError> {
        for (i, e) in entries.iter().enumerate() {
            if !e.density.is_finite() || e.density < 0.0 {
                return Err(GridError::MalformedPalette { line: i + 1 });
            }
            if entries[..i]
                .iter()
                .any(|p| (p.red, p.green, p.blue) == (e.red, e.green, e.blue))
            {
                return Err(GridError::DuplicateColor {
                    red: e.red,
                    green: e.green,
                    blue: e.blue,
                });
            }
        }
        Ok(Self { entries })
    }

    /// Parses the palette file format: one `R G B density` entry per line,
    /// whitespace-separated. Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, GridError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let entry = (|| {
                let red = parts.next()?.parse::<u8>().ok()?;
                let green = parts.next()?.parse::<u8>().ok()?;
                let blue = parts.next()?.parse::<u8>().ok()?;
                let density = parts.next()?.parse::<f64>().ok()?;
                if parts.next().is_some() {
                    return None;
                }
                Some(PaletteEntry {
                    red,
                    green,
                    blue,
                    density,
                })
            })()
            .ok_or(GridError::MalformedPalette { line: i + 1 })?;
            entries.push(entry);
        }
        Self::new(entries)
    }

    pub fn lookup(&self, red: u8, green: u8, blue: u8) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| (e.red, e.green, e.blue) == (red, green, blue))
            .map(|e| e.density)
    }

    pub fn entries(&self) -> &[PaletteEntry] {
        &self.entries
    }
}
