//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (run with `-- --nocapture` to see them).

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use redistrict::fairness::{audit, chi_square_survival, FairnessInput, Verdict};
use redistrict::grid::{DensityGrid, RegionMask};
use redistrict::report::{county_split_count, population_summary};
use redistrict::snap::{divide_snapped_traced, greedy_adjust, snap_split, PathChoice, SnapSegment};
use redistrict::split::{apply_split, best_split, choose_axis, divide_simple, Axis, SplitLine};

use common::{
    bimodal64, crafted64, even_dof_survival, fixture_f, gaussian64, oracle_best_cut,
    quadrature_survival, run_cli, uniform64, whole_state64, FIXTURE_F_COUNTY, FIXTURE_F_DENSITY,
    SIZE,
};

/// Replays the division recursion step for step, checking at every split
/// that the deviation from the target stays within the largest single
/// row/column population along the executed axis. Returns the map it
/// built so the replay can be checked against the engine's.
fn replay_simple_checking_bound(
    mask: &RegionMask,
    density: &DensityGrid,
    districts: u32,
    next_id: &mut u32,
    map: &mut Vec<Vec<i64>>,
) {
    if districts == 1 {
        for (r, c) in mask.cells() {
            map[r][c] = *next_id as i64;
        }
        *next_id += 1;
        return;
    }
    let count_a = districts.div_ceil(2);
    let target_fraction = count_a as f64 / districts as f64;
    let axis = choose_axis(mask).unwrap();
    let line = best_split(mask, density, axis, target_fraction).unwrap();
    let (side_a, side_b) = apply_split(mask, &line).unwrap();

    let total = mask.population(density).unwrap();
    let deviation = (side_a.population(density).unwrap() - target_fraction * total).abs();
    let mut lanes: BTreeMap<usize, f64> = BTreeMap::new();
    for (r, c) in mask.cells() {
        let lane = match line.axis {
            Axis::Vertical => c,
            Axis::Horizontal => r,
        };
        *lanes.entry(lane).or_default() += density.get(r, c);
    }
    let lane_max = lanes.values().fold(0.0f64, |a, &b| a.max(b));
    assert!(
        deviation <= lane_max + 1e-9,
        "split deviation {deviation} exceeds lane bound {lane_max}"
    );

    replay_simple_checking_bound(&side_a, density, count_a, next_id, map);
    replay_simple_checking_bound(&side_b, density, districts - count_a, next_id, map);
}

#[test]
fn acceptance_1_simple_model_balance() {
    let mask = whole_state64().state_mask();
    for (name, density) in [
        ("uniform", uniform64()),
        ("gaussian", gaussian64()),
        ("bimodal", bimodal64()),
    ] {
        let started = Instant::now();
        let map = divide_simple(&mask, &density, 8).unwrap();
        let elapsed = started.elapsed();
        assert!(
            elapsed.as_secs_f64() < 1.0,
            "{name}: divide took {elapsed:?}"
        );

        // per-split deviation bound, via a replay of the same recursion
        let mut replayed = vec![vec![-1i64; SIZE]; SIZE];
        let mut next_id = 0;
        replay_simple_checking_bound(&mask, &density, 8, &mut next_id, &mut replayed);
        for (r, row) in replayed.iter().enumerate() {
            for (c, &got) in row.iter().enumerate() {
                let expected = map.district(r, c).map_or(-1, |d| d as i64);
                assert_eq!(got, expected, "{name}: replay diverged");
            }
        }

        if name == "uniform" {
            let balance = population_summary(&map, &density).unwrap();
            assert_eq!(balance.max_deviation_pct, 0.0, "uniform must split evenly");
        }
    }
    println!("ACCEPTANCE 1 (balance, simple model): PASS");
}

#[test]
fn acceptance_2_snapped_model_balance() {
    let (density, counties) = crafted64();
    let mask = counties.state_mask();
    let (map, _) = divide_snapped_traced(&mask, &density, &counties, 4, 0.05).unwrap();
    let balance = population_summary(&map, &density).unwrap();
    assert!(
        balance.max_deviation_pct <= 5.0,
        "max deviation {}% exceeds 5%",
        balance.max_deviation_pct
    );
    println!("ACCEPTANCE 2 (balance, improved model): PASS");
}

#[test]
fn acceptance_3_county_integrity() {
    let (density, counties) = crafted64();
    let mask = counties.state_mask();

    let straight = divide_simple(&mask, &density, 4).unwrap();
    let straight_splits = county_split_count(&straight, &counties).unwrap();
    let (snapped, traces) = divide_snapped_traced(&mask, &density, &counties, 4, 0.05).unwrap();
    let snapped_splits = county_split_count(&snapped, &counties).unwrap();
    assert!(
        snapped_splits.split_counties < straight_splits.split_counties,
        "snapped {} vs straight {}",
        snapped_splits.split_counties,
        straight_splits.split_counties
    );

    // every county untouched by any cut line stays whole
    let mut touched: Vec<u32> = traces
        .iter()
        .flat_map(|t| t.divide.touched_counties())
        .collect();
    touched.sort_unstable();
    touched.dedup();
    let untouched: Vec<u32> = (1..=16).filter(|id| !touched.contains(id)).collect();
    assert!(
        !untouched.is_empty(),
        "fixture should leave some counties untouched"
    );
    for county in untouched {
        let mut districts_seen = BTreeMap::new();
        for (r, c) in mask.cells() {
            if counties.get(r, c) == county {
                districts_seen.insert(snapped.district(r, c), ());
            }
        }
        assert_eq!(
            districts_seen.len(),
            1,
            "untouched county {county} was split"
        );
    }
    println!("ACCEPTANCE 3 (county integrity): PASS");
}

#[test]
fn acceptance_4_fairness_scenarios() {
    // four districts of sixteen voters, one packed at 14/16
    let packed = audit(&FairnessInput {
        districts: 4,
        voters: 16,
        ratios: vec![0.875, 0.375, 0.375, 0.375],
        state_ratio: 0.5,
        alpha_allow: 0.05,
    })
    .unwrap();
    assert_eq!(packed.statistic, 12.0);
    assert!((packed.alpha - 0.0173513).abs() <= 1e-6);
    assert_eq!(packed.verdict, Verdict::PackingSuspected);

    let uniform = audit(&FairnessInput {
        districts: 4,
        voters: 16,
        ratios: vec![0.5; 4],
        state_ratio: 0.5,
        alpha_allow: 0.05,
    })
    .unwrap();
    assert_eq!(uniform.verdict, Verdict::CrackingSuspected);

    let moderate = audit(&FairnessInput {
        districts: 2,
        voters: 100,
        ratios: vec![0.55, 0.45],
        state_ratio: 0.5,
        alpha_allow: 0.05,
    })
    .unwrap();
    assert!((moderate.statistic - 2.0).abs() < 1e-12);
    assert!((moderate.alpha - (-1.0f64).exp()).abs() <= 1e-9);
    assert_eq!(moderate.verdict, Verdict::Fair);
    println!("ACCEPTANCE 4 (fairness, packed/cracked/fair scenarios): PASS");
}

#[test]
fn acceptance_5_survival_function_accuracy() {
    let sample_ys = [0.1, 1.0, 2.0, 5.0, 12.0, 30.0];
    for dof in [2usize, 4, 6] {
        for y in sample_ys {
            let got = chi_square_survival(y, dof).unwrap();
            let expected = even_dof_survival(y, dof);
            assert!(
                (got - expected).abs() <= 1e-9,
                "dof {dof} y {y}: {got} vs {expected}"
            );
        }
    }
    for dof in [1usize, 3, 7] {
        for y in sample_ys {
            let got = chi_square_survival(y, dof).unwrap();
            let expected = quadrature_survival(y, dof);
            assert!(
                (got - expected).abs() <= 1e-8,
                "dof {dof} y {y}: {got} vs {expected}"
            );
        }
    }
    let p95 = chi_square_survival(3.8415, 1).unwrap();
    assert!((p95 - 0.05).abs() <= 5e-4, "dof 1 at 3.8415: {p95}");
    println!("ACCEPTANCE 5 (chi-square survival accuracy): PASS");
}

#[test]
fn acceptance_6_split_optimality_oracle() {
    let mut rng = StdRng::seed_from_u64(0xacce_0006);
    let mut mismatches = 0;
    for case in 0..1000 {
        let (width, height) = if case % 2 == 0 {
            (rng.random_range(2..=64), 1)
        } else {
            let n = rng.random_range(2..=16);
            (n, n)
        };
        let cells: Vec<f64> = (0..width * height)
            .map(|_| rng.random_range(0..100) as f64)
            .collect();
        let density = DensityGrid::new(width, height, cells).unwrap();
        let mask = RegionMask::new(width, height, vec![true; width * height]).unwrap();
        let axis = if height == 1 || rng.random::<bool>() {
            Axis::Vertical
        } else {
            Axis::Horizontal
        };
        let target_fraction = rng.random_range(0.05..0.95);
        let line = best_split(&mask, &density, axis, target_fraction).unwrap();
        let expected = oracle_best_cut(&mask, &density, axis, target_fraction).unwrap();
        if line.axis != axis || line.index != expected {
            mismatches += 1;
        }
    }
    assert_eq!(mismatches, 0);
    println!("ACCEPTANCE 6 (split optimality vs exhaustive oracle): PASS");
}

#[test]
fn acceptance_7_greedy_snap_semantics() {
    let segment = |shift: f64| SnapSegment {
        span_start: 0,
        span_end: 1,
        before: Some(1),
        after: Some(1),
        path: if shift < 0.0 {
            PathChoice::LeftOrUp
        } else {
            PathChoice::RightOrDown
        },
        lens: Vec::new(),
        shift,
    };
    let kept = |segments: &[SnapSegment]| -> f64 {
        segments
            .iter()
            .filter(|s| s.path != PathChoice::Straight)
            .map(|s| s.shift)
            .sum()
    };

    // s = [+1], delta = 1.2: kept, S = 1
    let out = greedy_adjust(vec![segment(1.0)], 1.2).unwrap();
    assert_eq!(out[0].path, PathChoice::RightOrDown);
    assert_eq!(kept(&out), 1.0);

    // s = [+1], delta = 0.4: reverted, S = 0
    let out = greedy_adjust(vec![segment(1.0)], 0.4).unwrap();
    assert_eq!(out[0].path, PathChoice::Straight);
    assert_eq!(kept(&out), 0.0);

    // s = [+2, -1], delta = 0.5: revert index 0 then index 1
    let out = greedy_adjust(vec![segment(2.0), segment(-1.0)], 0.5).unwrap();
    assert!(out.iter().all(|s| s.path == PathChoice::Straight));
    assert_eq!(kept(&out), 0.0);

    // fixture F, loose tolerance: county 1 is kept whole at 9 vs 7
    let (mask, density, counties) = fixture_f();
    let line = SplitLine {
        axis: Axis::Vertical,
        index: 2,
    };
    let (side_a, side_b, divide) =
        snap_split(&mask, &density, &counties, &line, 0.15 * 8.0).unwrap();
    assert_eq!(side_a.population(&density).unwrap(), 9.0);
    assert_eq!(side_b.population(&density).unwrap(), 7.0);
    assert_eq!(divide.final_deviation, 1.0);
    assert!(side_a.cells().all(|(r, c)| counties.get(r, c) == 1));

    // fixture F, tight tolerance: straight 8 vs 8 and county 1 split
    let (side_a, side_b, divide) =
        snap_split(&mask, &density, &counties, &line, 0.05 * 8.0).unwrap();
    assert_eq!(side_a.population(&density).unwrap(), 8.0);
    assert_eq!(side_b.population(&density).unwrap(), 8.0);
    assert_eq!(divide.final_deviation, 0.0);
    assert!(side_b.contains(0, 2), "county 1 cell stays on side B");
    println!("ACCEPTANCE 7 (greedy snap semantics): PASS");
}

#[test]
fn acceptance_8_cli_determinism() {
    let (crafted_density, crafted_counties) = crafted64();
    let fixtures: Vec<(&str, String)> = vec![
        ("band_density.csv", "1,1,1,1,1,1\n".into()),
        ("band_county.csv", "1,1,2,2,3,3\n".into()),
        ("f_density.csv", FIXTURE_F_DENSITY.into()),
        ("f_county.csv", FIXTURE_F_COUNTY.into()),
        ("crafted_density.csv", crafted_density.to_csv()),
        ("crafted_county.csv", crafted_counties.to_csv()),
        (
            "fig9.json",
            r#"{"m": 4, "n": 16, "ratios": [0.875, 0.375, 0.375, 0.375], "stateRatio": 0.5}"#
                .into(),
        ),
    ];
    let commands: Vec<Vec<&str>> = vec![
        vec![
            "split",
            "--density",
            "band_density.csv",
            "--county",
            "band_county.csv",
            "-m",
            "3",
            "--output-dir",
            "out_split",
        ],
        vec![
            "snap",
            "--density",
            "f_density.csv",
            "--county",
            "f_county.csv",
            "-m",
            "2",
            "--tolerance",
            "0.15",
            "--output-dir",
            "out_snap_f",
        ],
        vec![
            "snap",
            "--density",
            "crafted_density.csv",
            "--county",
            "crafted_county.csv",
            "-m",
            "4",
            "--output-dir",
            "out_snap_crafted",
        ],
        vec!["audit", "--input", "fig9.json"],
        vec![
            "render",
            "--districts",
            "out_snap_f/districts.csv",
            "--output",
            "map.ppm",
        ],
        vec![
            "report",
            "--districts",
            "out_snap_f/districts.csv",
            "--density",
            "f_density.csv",
            "--county",
            "f_county.csv",
            "--output-dir",
            "out_report",
        ],
    ];

    let mut runs: Vec<BTreeMap<String, Vec<u8>>> = Vec::new();
    for _ in 0..3 {
        let dir = tempfile::tempdir().unwrap();
        for (name, contents) in &fixtures {
            std::fs::write(dir.path().join(name), contents).unwrap();
        }
        let mut artifacts: BTreeMap<String, Vec<u8>> = BTreeMap::new();
        for (i, args) in commands.iter().enumerate() {
            let output = run_cli(dir.path(), args, None);
            assert!(
                output.status.success(),
                "command {args:?} failed: {}",
                String::from_utf8_lossy(&output.stderr)
            );
            artifacts.insert(format!("stdout:{i}"), output.stdout);
        }
        for entry in walk_files(dir.path()) {
            let rel = entry
                .strip_prefix(dir.path())
                .unwrap()
                .to_string_lossy()
                .into_owned();
            artifacts.insert(rel, std::fs::read(&entry).unwrap());
        }
        runs.push(artifacts);
    }
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[1], runs[2]);
    assert!(runs[0].keys().any(|k| k.ends_with("districts.csv")));
    assert!(runs[0].contains_key("map.ppm"));
    println!("ACCEPTANCE 8 (CLI determinism across runs): PASS");
}

fn walk_files(dir: &std::path::Path) -> Vec<std::path::PathBuf> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(next) = stack.pop() {
        for entry in std::fs::read_dir(&next).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                files.push(path);
            }
        }
    }
    files.sort();
    files
}

/// The simple and snapped models agree on a single-county state, where no
/// county boundary can bend any line.
#[test]
fn acceptance_bonus_models_agree_without_counties() {
    let density = gaussian64();
    let counties = whole_state64();
    let mask = counties.state_mask();
    let straight = divide_simple(&mask, &density, 8).unwrap();
    let (snapped, _) = divide_snapped_traced(&mask, &density, &counties, 8, 0.05).unwrap();
    assert_eq!(straight.to_csv(), snapped.to_csv());
}
