//! Report metrics checked against brute-force oracles on random inputs.

use std::collections::BTreeSet;

use proptest::prelude::*;
use redistrict::grid::{CountyGrid, DensityGrid};
use redistrict::report::{county_split_count, population_summary};
use redistrict::split::DistrictMap;

proptest! {
    /// county_split_count agrees with a set-based oracle: collect the
    /// district ids seen per county and count counties with two or more.
    #[test]
    fn split_count_matches_brute_force(
        width in 1usize..10,
        height in 1usize..10,
        county_ids in proptest::collection::vec(0u32..6, 1..100),
        district_ids in proptest::collection::vec(-1i64..5, 1..100),
    ) {
        let n = width * height;
        prop_assume!(county_ids.len() >= n && district_ids.len() >= n);
        prop_assume!(county_ids[..n].iter().any(|&c| c != 0));
        let counties = CountyGrid::new(width, height, county_ids[..n].to_vec()).unwrap();
        let csv: String = (0..height)
            .map(|r| {
                (0..width)
                    .map(|c| district_ids[r * width + c].to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("\n");
        let map = DistrictMap::parse(&csv).unwrap();

        let mut per_county: std::collections::BTreeMap<u32, BTreeSet<u32>> = Default::default();
        for r in 0..height {
            for c in 0..width {
                let county = counties.get(r, c);
                if county == 0 {
                    continue;
                }
                if let Some(d) = map.district(r, c) {
                    per_county.entry(county).or_default().insert(d);
                }
            }
        }
        let expected: Vec<u32> = per_county
            .iter()
            .filter(|(_, districts)| districts.len() >= 2)
            .map(|(&county, _)| county)
            .collect();

        let summary = county_split_count(&map, &counties).unwrap();
        prop_assert_eq!(summary.split_counties, expected.len());
        prop_assert_eq!(summary.split_list, expected);
    }

    /// Per-district sums add back up to the state population exactly when
    /// densities are integers.
    #[test]
    fn balance_sums_exactly(
        width in 1usize..10,
        height in 1usize..10,
        densities in proptest::collection::vec(0u32..1000, 1..100),
        district_ids in proptest::collection::vec(-1i64..5, 1..100),
    ) {
        let n = width * height;
        prop_assume!(densities.len() >= n && district_ids.len() >= n);
        prop_assume!(district_ids[..n].iter().any(|&d| d >= 0));
        let density = DensityGrid::new(
            width,
            height,
            densities[..n].iter().map(|&d| d as f64).collect(),
        )
        .unwrap();
        let csv: String = (0..height)
            .map(|r| {
                (0..width)
                    .map(|c| district_ids[r * width + c].to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("\n");
        let map = DistrictMap::parse(&csv).unwrap();

        let in_state: f64 = (0..n)
            .filter(|&i| district_ids[i] >= 0)
            .map(|i| densities[i] as f64)
            .sum();
        let summary = population_summary(&map, &density).unwrap();
        prop_assert_eq!(summary.per_district.iter().sum::<f64>(), in_state);
    }
}
