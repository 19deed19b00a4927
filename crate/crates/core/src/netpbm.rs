//! Minimal netpbm support: P2/P5 graymaps and P3/P6 pixmaps in, P6 out.
//!
//! Header comments (`#` to end of line) are accepted anywhere whitespace is,
//! including inside plain-format rasters. Binary rasters start after exactly
//! one whitespace byte following the maxval.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::grid::GridError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Samples {
    /// One sample per pixel.
    Gray(Vec<u16>),
    /// Three samples per pixel, row-major, RGB order.
    Rgb(Vec<u16>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Raster {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub samples: Samples,
}

fn malformed(reason: impl Into<String>) -> GridError {
    GridError::MalformedImage {
        reason: reason.into(),
    }
}

struct Tokens<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn next_uint(&mut self, what: &str) -> Result<u32, GridError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(malformed(format!("expected {what}")));
        }
        let tok = core::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        tok.parse::<u32>()
            .map_err(|_| malformed(format!("{what} out of range")))
    }
}

pub(crate) fn parse(bytes: &[u8]) -> Result<Raster, GridError> {
    if bytes.len() < 2 {
        return Err(malformed("truncated header"));
    }
    let magic = &bytes[..2];
    let (channels, ascii) = match magic {
        b"P2" => (1usize, true),
        b"P3" => (3, true),
        b"P5" => (1, false),
        b"P6" => (3, false),
        _ => return Err(malformed("unrecognized magic number")),
    };
    let mut toks = Tokens::new(&bytes[2..]);
    let width = toks.next_uint("width")? as usize;
    let height = toks.next_uint("height")? as usize;
    let maxval = toks.next_uint("maxval")?;
    if width == 0 || height == 0 {
        return Err(malformed("zero image dimension"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(malformed("maxval must be in 1..=65535"));
    }
    let maxval = maxval as u16;
    let count = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| malformed("image dimensions overflow"))?;

    let samples = if ascii {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let v = toks.next_uint("sample")?;
            if v > maxval as u32 {
                return Err(malformed("sample exceeds maxval"));
            }
            out.push(v as u16);
        }
        out
    } else {
        // One whitespace byte separates the maxval from the raster.
        let data_start = 2 + toks.pos + 1;
        if data_start > bytes.len() {
            return Err(malformed("missing raster data"));
        }
        let data = &bytes[data_start..];
        let bytes_per_sample = if maxval > 255 { 2 } else { 1 };
        if data.len() < count * bytes_per_sample {
            return Err(malformed("raster data truncated"));
        }
        let mut out = Vec::with_capacity(count);
        if bytes_per_sample == 1 {
            out.extend(data[..count].iter().map(|&b| b as u16));
        } else {
            for pair in data[..count * 2].chunks_exact(2) {
                out.push(u16::from_be_bytes([pair[0], pair[1]]));
            }
        }
        if out.iter().any(|&v| v > maxval) {
            return Err(malformed("sample exceeds maxval"));
        }
        out
    };

    Ok(Raster {
        width,
        height,
        maxval,
        samples: match channels {
            1 => Samples::Gray(samples),
            _ => Samples::Rgb(samples),
        },
    })
}

/// Encodes 8-bit RGB pixels as a binary portable-pixmap.
pub(crate) fn write_p6(width: usize, height: usize, rgb: &[u8]) -> Vec<u8> {
    debug_assert_eq!(rgb.len(), width * height * 3);
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(rgb);
    out
}
