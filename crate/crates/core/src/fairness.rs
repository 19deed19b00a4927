//! Packing/cracking audit: standardize district support ratios, form the
//! chi-square statistic, and test its upper-tail probability against a
//! significance threshold.
//!
//! With `m` districts of `n` voters each and statewide support ratio `p`,
//! each district's standardized score is
//! `X_j = sqrt(n / (p (1 - p))) * (p_j - p)`, the statistic is
//! `Y = sum X_j^2`, and `alpha = P(X > Y)` for a chi-square variable `X`
//! with `m` degrees of freedom. Packed maps push `alpha` toward 0, cracked
//! maps (district ratios implausibly uniform) push it toward 1.

use alloc::vec::Vec;

use crate::math;

/// Default significance threshold for the fair band.
pub const DEFAULT_ALPHA_ALLOW: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum FairnessError {
    #[error("district has no ballots")]
    EmptyDistrict,
    #[error("ratio list is empty")]
    EmptyList,
    #[error("state ratio must lie strictly between 0 and 1")]
    DegenerateP,
    #[error("degrees of freedom must be at least 1")]
    InvalidDof,
    #[error("statistic must be non-negative")]
    NegativeY,
    #[error("expected {expected} ratios, found {found}")]
    RatioCountMismatch { expected: usize, found: usize },
    #[error("ratio at index {index} is outside [0, 1]")]
    RatioOutOfRange { index: usize },
    #[error("district count must be at least 1")]
    ZeroDistricts,
    #[error("voters per district must be at least 1")]
    ZeroVoters,
    #[error("alpha_allow must lie strictly between 0 and 0.5")]
    InvalidAlphaAllow,
}

impl FairnessError {
    pub fn code(&self) -> &'static str {
        match self {
            FairnessError::EmptyDistrict => "EMPTY_DISTRICT",
            FairnessError::EmptyList => "EMPTY_LIST",
            FairnessError::DegenerateP => "DEGENERATE_P",
            FairnessError::InvalidDof => "INVALID_DOF",
            FairnessError::NegativeY => "NEGATIVE_Y",
            FairnessError::RatioCountMismatch { .. } => "RATIO_COUNT_MISMATCH",
            FairnessError::RatioOutOfRange { .. } => "RATIO_OUT_OF_RANGE",
            FairnessError::ZeroDistricts => "ZERO_DISTRICTS",
            FairnessError::ZeroVoters => "ZERO_VOTERS",
            FairnessError::InvalidAlphaAllow => "INVALID_ALPHA_ALLOW",
        }
    }
}

/// Support ratios for one audited districting.
#[derive(Debug, Clone, PartialEq)]
pub struct FairnessInput {
    /// Number of districts.
    pub districts: usize,
    /// Voters per district (the model assumes a common size).
    pub voters: u64,
    /// Per-district support ratio for the audited party.
    pub ratios: Vec<f64>,
    /// Statewide support ratio for the audited party.
    pub state_ratio: f64,
    /// Significance threshold bounding the fair band.
    pub alpha_allow: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Fair,
    PackingSuspected,
    CrackingSuspected,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Fair => "FAIR",
            Verdict::PackingSuspected => "PACKING_SUSPECTED",
            Verdict::CrackingSuspected => "CRACKING_SUSPECTED",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FairnessReport {
    /// Standardized per-district scores X_j.
    pub standardized: Vec<f64>,
    /// Chi-square statistic Y.
    pub statistic: f64,
    /// Upper-tail probability P(X > Y).
    pub alpha: f64,
    pub verdict: Verdict,
}

/// Fraction of ballots supporting the audited party.
pub fn support_ratio(ballots: &[bool]) -> Result<f64, FairnessError> {
    if ballots.is_empty() {
        return Err(FairnessError::EmptyDistrict);
    }
    let ones = ballots.iter().filter(|&&b| b).count();
    Ok(ones as f64 / ballots.len() as f64)
}

/// Unweighted mean of the district ratios.
pub fn mean_ratio(ratios: &[f64]) -> Result<f64, FairnessError> {
    if ratios.is_empty() {
        return Err(FairnessError::EmptyList);
    }
    Ok(ratios.iter().sum::<f64>() / ratios.len() as f64)
}

/// Standardized score of one district ratio against the state ratio.
pub fn standardize(ratio: f64, state_ratio: f64, voters: u64) -> Result<f64, FairnessError> {
    if voters == 0 {
        return Err(FairnessError::ZeroVoters);
    }
    let variance = state_ratio * (1.0 - state_ratio);
    if variance.is_nan() || variance <= 0.0 {
        return Err(FairnessError::DegenerateP);
    }
    Ok(math::sqrt(voters as f64 / variance) * (ratio - state_ratio))
}

/// Sum of squared standardized scores.
pub fn chi_square_statistic(standardized: &[f64]) -> Result<f64, FairnessError> {
    if standardized.is_empty() {
        return Err(FairnessError::EmptyList);
    }
    Ok(standardized.iter().map(|x| x * x).sum())
}

/// Upper-tail probability of the chi-square distribution with `dof` degrees
/// of freedom, computed as the regularized upper incomplete gamma function
/// at `(dof / 2, y / 2)`.
pub fn chi_square_survival(y: f64, dof: usize) -> Result<f64, FairnessError> {
    if dof == 0 {
        return Err(FairnessError::InvalidDof);
    }
    if !y.is_finite() || y < 0.0 {
        return Err(FairnessError::NegativeY);
    }
    if y == 0.0 {
        return Ok(1.0);
    }
    Ok(gamma::regularized_upper(dof as f64 / 2.0, y / 2.0))
}

/// Runs the full audit: standardize, sum squares, survival probability,
/// verdict. The boundaries `alpha == alpha_allow` and
/// `1 - alpha == alpha_allow` both count as suspected.
pub fn audit(input: &FairnessInput) -> Result<FairnessReport, FairnessError> {
    if input.districts == 0 {
        return Err(FairnessError::ZeroDistricts);
    }
    if input.voters == 0 {
        return Err(FairnessError::ZeroVoters);
    }
    if input.ratios.len() != input.districts {
        return Err(FairnessError::RatioCountMismatch {
            expected: input.districts,
            found: input.ratios.len(),
        });
    }
    for (index, &r) in input.ratios.iter().enumerate() {
        if !(0.0..=1.0).contains(&r) || !r.is_finite() {
            return Err(FairnessError::RatioOutOfRange { index });
        }
    }
    if !(input.state_ratio > 0.0 && input.state_ratio < 1.0) {
        return Err(FairnessError::DegenerateP);
    }
    if !(input.alpha_allow > 0.0 && input.alpha_allow < 0.5) {
        return Err(FairnessError::InvalidAlphaAllow);
    }

    let standardized = input
        .ratios
        .iter()
        .map(|&r| standardize(r, input.state_ratio, input.voters))
        .collect::<Result<Vec<f64>, _>>()?;
    let statistic = chi_square_statistic(&standardized)?;
    let alpha = chi_square_survival(statistic, input.districts)?;
    let verdict = if alpha <= input.alpha_allow {
        Verdict::PackingSuspected
    } else if 1.0 - alpha <= input.alpha_allow {
        Verdict::CrackingSuspected
    } else {
        Verdict::Fair
    };
    Ok(FairnessReport {
        standardized,
        statistic,
        alpha,
        verdict,
    })
}

/// Regularized incomplete gamma functions: series expansion below the
/// `x < a + 1` crossover, Lentz continued fraction above it.
mod gamma {
    use crate::math;

    const MAX_ITER: usize = 800;
    const EPS: f64 = 1e-16;
    const TINY: f64 = 1e-300;

    /// Lanczos approximation (g = 7, 9 terms), valid here since a >= 0.5.
    pub(super) fn ln_gamma(z: f64) -> f64 {
        const COEFFS: [f64; 8] = [
            676.5203681218851,
            -1259.1392167224028,
            771.323_428_777_653_1,
            -176.615_029_162_140_6,
            12.507343278686905,
            -0.13857109526572012,
            9.984_369_578_019_572e-6,
            1.5056327351493116e-7,
        ];
        const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_7;
        let z = z - 1.0;
        let mut acc = 0.999_999_999_999_809_9;
        for (i, &c) in COEFFS.iter().enumerate() {
            acc += c / (z + i as f64 + 1.0);
        }
        let t = z + 7.5;
        HALF_LN_TWO_PI + (z + 0.5) * math::ln(t) - t + math::ln(acc)
    }

    /// Q(a, x) = Γ(a, x) / Γ(a) for a > 0, x > 0.
    pub(super) fn regularized_upper(a: f64, x: f64) -> f64 {
        let log_prefactor = a * math::ln(x) - x - ln_gamma(a);
        let prefactor = math::exp(log_prefactor);
        if x < a + 1.0 {
            1.0 - lower_series(a, x, prefactor)
        } else {
            upper_continued_fraction(a, x, prefactor)
        }
    }

    /// P(a, x) by its power series.
    fn lower_series(a: f64, x: f64, prefactor: f64) -> f64 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut denom = a;
        for _ in 0..MAX_ITER {
            denom += 1.0;
            term *= x / denom;
            sum += term;
            if math::abs(term) < math::abs(sum) * EPS {
                break;
            }
        }
        prefactor * sum
    }

    /// Q(a, x) by the modified Lentz continued fraction.
    fn upper_continued_fraction(a: f64, x: f64, prefactor: f64) -> f64 {
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if math::abs(d) < TINY {
                d = TINY;
            }
            c = b + an / c;
            if math::abs(c) < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if math::abs(delta - 1.0) < EPS {
                break;
            }
        }
        prefactor * h
    }
}
