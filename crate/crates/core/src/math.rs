//! Thin wrappers over `libm` so the rest of the crate stays `no_std`-clean.

pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub fn round(x: f64) -> f64 {
    libm::round(x)
}
