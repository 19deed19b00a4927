//! JSON report builders and deterministic file output.
//!
//! Reports are built as `serde_json::Value` objects so serialization sorts
//! keys; combined with pretty-printing this keeps every output diff-stable.

use std::path::Path;

use serde_json::{json, Value};

use redistrict::fairness::{FairnessInput, FairnessReport};
use redistrict::report::{BalanceSummary, IntegritySummary};
use redistrict::snap::{DivideTrace, SegmentKind, SnapSegment};

use crate::CliError;

pub fn balance_json(balance: &BalanceSummary) -> Value {
    json!({
        "perDistrict": balance.per_district,
        "target": balance.target,
        "maxDeviationPct": balance.max_deviation_pct,
    })
}

pub fn integrity_json(integrity: &IntegritySummary) -> Value {
    json!({
        "splitCounties": integrity.split_counties,
        "splitList": integrity.split_list,
    })
}

fn segment_json(segment: &SnapSegment) -> Value {
    let county = match segment.kind() {
        SegmentKind::Interior(county) => json!(county),
        _ => Value::Null,
    };
    json!({
        "span": [segment.span_start, segment.span_end],
        "kind": segment.kind().as_str(),
        "county": county,
        "path": segment.path.as_code(),
        "s": segment.shift,
        "lensCells": segment.lens.len(),
    })
}

pub fn divides_json(traces: &[DivideTrace]) -> Value {
    let cuts: Vec<Value> = traces
        .iter()
        .map(|trace| {
            json!({
                "axis": trace.divide.line.axis.as_str(),
                "cut": trace.divide.line.index,
                "districtRange": [
                    trace.first_district,
                    trace.first_district + trace.district_count,
                ],
                "points": trace.divide.points(),
                "segments": trace.divide.segments.iter().map(segment_json).collect::<Vec<_>>(),
                "finalDeviation": trace.divide.final_deviation,
            })
        })
        .collect();
    Value::Array(cuts)
}

pub fn audit_json(input: &FairnessInput, report: &FairnessReport) -> Value {
    json!({
        "m": input.districts,
        "n": input.voters,
        "ratios": input.ratios,
        "stateRatio": input.state_ratio,
        "alphaAllow": input.alpha_allow,
        "standardized": report.standardized,
        "statistic": report.statistic,
        "alpha": report.alpha,
        "verdict": report.verdict.as_str(),
    })
}

pub fn write_raw(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))
}

pub fn write_json(dir: &Path, name: &str, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    write_raw(dir, name, text.as_bytes())
}
