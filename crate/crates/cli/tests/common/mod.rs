//! Fixtures and oracles shared by the CLI test suites.

#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output, Stdio};

use redistrict::grid::{CountyGrid, DensityGrid, RegionMask};
use redistrict::split::Axis;

/// Fixture F: 4x4 uniform density; county 1 is the left two columns plus
/// cell (0, 2), county 2 the rest.
pub const FIXTURE_F_DENSITY: &str = "1,1,1,1\n1,1,1,1\n1,1,1,1\n1,1,1,1\n";
pub const FIXTURE_F_COUNTY: &str = "1,1,1,2\n1,1,2,2\n1,1,2,2\n1,1,2,2\n";

pub fn fixture_f() -> (RegionMask, DensityGrid, CountyGrid) {
    let density = DensityGrid::parse(FIXTURE_F_DENSITY).unwrap();
    let counties = CountyGrid::parse(FIXTURE_F_COUNTY).unwrap();
    let mask = counties.state_mask();
    (mask, density, counties)
}

pub const SIZE: usize = 64;

pub fn uniform64() -> DensityGrid {
    DensityGrid::new(SIZE, SIZE, vec![1.0; SIZE * SIZE]).unwrap()
}

/// One Gaussian population cluster centered on the grid.
pub fn gaussian64() -> DensityGrid {
    let cells = (0..SIZE * SIZE)
        .map(|i| {
            let (r, c) = ((i / SIZE) as f64, (i % SIZE) as f64);
            let d2 = (r - 31.5).powi(2) + (c - 31.5).powi(2);
            1000.0 * (-d2 / (2.0 * 10.0 * 10.0)).exp()
        })
        .collect();
    DensityGrid::new(SIZE, SIZE, cells).unwrap()
}

/// Two cities of different size plus a thin rural background.
pub fn bimodal64() -> DensityGrid {
    let cells = (0..SIZE * SIZE)
        .map(|i| {
            let (r, c) = ((i / SIZE) as f64, (i % SIZE) as f64);
            let d1 = (r - 16.0).powi(2) + (c - 16.0).powi(2);
            let d2 = (r - 44.0).powi(2) + (c - 48.0).powi(2);
            800.0 * (-d1 / (2.0 * 8.0 * 8.0)).exp()
                + 500.0 * (-d2 / (2.0 * 12.0 * 12.0)).exp()
                + 0.1
        })
        .collect();
    DensityGrid::new(SIZE, SIZE, cells).unwrap()
}

/// Single-county grid so the whole 64x64 raster is in-state.
pub fn whole_state64() -> CountyGrid {
    CountyGrid::new(SIZE, SIZE, vec![1; SIZE * SIZE]).unwrap()
}

/// Boundary wiggle used by the crafted state: a one-cell bulge or notch
/// over four separate coordinate bands.
fn wiggle(x: usize) -> isize {
    match x {
        0..=9 => 1,
        16..=21 => -1,
        32..=39 => 1,
        50..=55 => -1,
        _ => 0,
    }
}

/// Crafted acceptance state: 64x64 uniform density and a 4x4 patchwork of
/// 16 counties whose boundaries wiggle one cell around the equal-population
/// cut positions 16, 32, and 48.
pub fn crafted64() -> (DensityGrid, CountyGrid) {
    let density = uniform64();
    let mut cells = Vec::with_capacity(SIZE * SIZE);
    for r in 0..SIZE {
        for c in 0..SIZE {
            let col_band = [16isize, 32, 48]
                .iter()
                .filter(|&&b| (b + wiggle(r)) as usize <= c)
                .count() as u32;
            let row_band = [16isize, 32, 48]
                .iter()
                .filter(|&&b| (b + wiggle(c)) as usize <= r)
                .count() as u32;
            cells.push(row_band * 4 + col_band + 1);
        }
    }
    (density, CountyGrid::new(SIZE, SIZE, cells).unwrap())
}

/// Exhaustive best-cut oracle: sum side A cell by cell for every cut with
/// both sides non-empty, first minimizer wins.
pub fn oracle_best_cut(
    mask: &RegionMask,
    density: &DensityGrid,
    axis: Axis,
    target_fraction: f64,
) -> Option<usize> {
    let coord = |r: usize, c: usize| match axis {
        Axis::Vertical => c,
        Axis::Horizontal => r,
    };
    let positions: Vec<usize> = mask.cells().map(|(r, c)| coord(r, c)).collect();
    let lo = *positions.iter().min()?;
    let hi = *positions.iter().max()?;
    if lo == hi {
        return None;
    }
    let total: f64 = mask.cells().map(|(r, c)| density.get(r, c)).sum();
    let target = target_fraction * total;
    let mut best: Option<(f64, usize)> = None;
    for cut in lo + 1..=hi {
        let side_a: f64 = mask
            .cells()
            .filter(|&(r, c)| coord(r, c) < cut)
            .map(|(r, c)| density.get(r, c))
            .sum();
        let dev = (side_a - target).abs();
        if best.is_none_or(|(b, _)| dev < b) {
            best = Some((dev, cut));
        }
    }
    best.map(|(_, cut)| cut)
}

/// Closed-form chi-square survival for even dof 2k:
/// e^{-y/2} * sum_{j<k} (y/2)^j / j!
pub fn even_dof_survival(y: f64, dof: usize) -> f64 {
    assert!(dof.is_multiple_of(2));
    let x = y / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..dof / 2 {
        term *= x / j as f64;
        sum += term;
    }
    (-x).exp() * sum
}

/// Quadrature oracle for odd dof: adaptive Simpson over the upper tail of
/// the chi-square density, gamma constants hardcoded.
pub fn quadrature_survival(y: f64, dof: usize) -> f64 {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let gamma_half_dof = match dof {
        1 => sqrt_pi,
        3 => sqrt_pi / 2.0,
        7 => 15.0 * sqrt_pi / 8.0,
        _ => panic!("oracle only supports dof 1, 3, 7"),
    };
    let k = dof as f64;
    let norm = 2.0f64.powf(k / 2.0) * gamma_half_dof;
    let density = move |x: f64| x.powf(k / 2.0 - 1.0) * (-x / 2.0).exp() / norm;
    adaptive_simpson(&density, y, y + 400.0, 1e-13)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
                + recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 40)
}

/// Runs the CLI binary with the given args and stdin, capturing output.
pub fn run_cli(dir: &Path, args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_redistrict"));
    cmd.current_dir(dir).args(args);
    if let Some(input) = stdin {
        cmd.stdin(Stdio::piped());
        cmd.stdout(Stdio::piped());
        cmd.stderr(Stdio::piped());
        let mut child = cmd.spawn().expect("spawn redistrict");
        use std::io::Write;
        child
            .stdin
            .take()
            .unwrap()
            .write_all(input.as_bytes())
            .unwrap();
        child.wait_with_output().expect("wait for redistrict")
    } else {
        cmd.output().expect("run redistrict")
    }
}
