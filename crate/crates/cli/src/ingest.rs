//! File loading: grids from CSV or netpbm images, audit requests from JSON.

use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use redistrict::grid::{ColorPalette, CountyGrid, DensityGrid};
use redistrict::split::DistrictMap;

use crate::{CliError, GridInputs};

/// The audit subcommand's JSON request. `stateRatio` defaults to the mean
/// of the ratios, `alphaAllow` to 0.05.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct AuditRequest {
    pub m: usize,
    pub n: u64,
    pub ratios: Vec<f64>,
    pub state_ratio: Option<f64>,
    pub alpha_allow: Option<f64>,
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let bytes = read_file(path)?;
    String::from_utf8(bytes).map_err(|_| {
        CliError::validation(
            "INVALID_UTF8",
            format!("{} is not UTF-8 text", path.display()),
        )
    })
}

/// Loads the density input, dispatching on the file's leading bytes:
/// P3/P6 pixmaps go through the palette, P2/P5 graymaps through the
/// brightness scale, anything else parses as CSV.
pub fn load_density(inputs: &GridInputs) -> Result<DensityGrid, CliError> {
    let bytes = read_file(&inputs.density)?;
    match bytes.first_chunk::<2>() {
        Some(b"P3") | Some(b"P6") => {
            let Some(palette_path) = &inputs.palette else {
                return Err(CliError::validation(
                    "MISSING_PALETTE",
                    format!("{} is a pixmap; pass --palette", inputs.density.display()),
                ));
            };
            let palette = ColorPalette::parse(&read_text(palette_path)?)?;
            Ok(DensityGrid::from_pixmap(&bytes, &palette)?)
        }
        Some(b"P2") | Some(b"P5") => Ok(DensityGrid::from_graymap(&bytes, inputs.gray_scale)?),
        _ => {
            let text = String::from_utf8(bytes).map_err(|_| {
                CliError::validation(
                    "INVALID_UTF8",
                    format!("{} is not UTF-8 text", inputs.density.display()),
                )
            })?;
            Ok(DensityGrid::parse(&text)?)
        }
    }
}

pub fn load_county(path: &Path) -> Result<CountyGrid, CliError> {
    Ok(CountyGrid::parse(&read_text(path)?)?)
}

pub fn load_district_map(path: &Path) -> Result<DistrictMap, CliError> {
    Ok(DistrictMap::parse(&read_text(path)?)?)
}

/// Reads the audit request from a file, or stdin when no path is given.
pub fn read_audit_request(path: Option<&Path>) -> Result<AuditRequest, CliError> {
    let text = match path {
        Some(path) => read_text(path)?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::io(Path::new("<stdin>"), e))?;
            buf
        }
    };
    serde_json::from_str(&text).map_err(|e| CliError::validation("INVALID_JSON", e.to_string()))
}
