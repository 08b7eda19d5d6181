//! Binary 8-bit PGM (P5) images of domain patterns.

use std::path::Path;

use photomag_core::imaging::{DomainImage, ImageResult};
use photomag_core::landscape::{DomainLabel, Equilibrium};

use crate::error::{CliError, Result};

pub const UNDECIDED_GRAY: u8 = 128;
pub const UNCHANGED_GRAY: u8 = 128;

pub fn label_gray(label: DomainLabel) -> u8 {
    match label {
        DomainLabel::LPlus => 255,
        DomainLabel::LPlusDown => 223,
        DomainLabel::SPlus => 191,
        DomainLabel::SPlusDown => 160,
        DomainLabel::SMinusDown => 96,
        DomainLabel::SMinus => 64,
        DomainLabel::LMinusDown => 32,
        DomainLabel::LMinus => 0,
    }
}

/// Label whose gray level is nearest to `g` (ties to the brighter one).
pub fn gray_label(g: u8) -> DomainLabel {
    let mut best = DomainLabel::LPlus;
    let mut best_d = i32::MAX;
    for l in DomainLabel::ALL {
        let d = (label_gray(l) as i32 - g as i32).abs();
        if d < best_d || (d == best_d && label_gray(l) > label_gray(best)) {
            best = l;
            best_d = d;
        }
    }
    best
}

/// m_z ∈ [−1, 1] mapped linearly onto [0, 255].
pub fn mz_gray(mz: f64) -> u8 {
    ((mz.clamp(-1.0, 1.0) + 1.0) / 2.0 * 255.0).round() as u8
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderMode {
    Labels,
    Mz,
    Difference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gray {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

pub fn render_labels(image: &DomainImage, undecided: Option<&[bool]>) -> Gray {
    let pixels = image
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| if undecided.is_some_and(|u| u[i]) { UNDECIDED_GRAY } else { label_gray(*l) })
        .collect();
    Gray { width: image.width, height: image.height, pixels }
}

pub fn render_mz(image: &DomainImage) -> Gray {
    Gray { width: image.width, height: image.height, pixels: image.mz.iter().map(|m| mz_gray(*m)).collect() }
}

/// Mid-gray where unchanged, white where m_z rose, black where it fell.
pub fn render_difference(before: &DomainImage, result: &ImageResult) -> Gray {
    let pixels = (0..before.len())
        .map(|i| {
            if !result.changed[i] {
                UNCHANGED_GRAY
            } else if result.image.mz[i] > before.mz[i] {
                255
            } else {
                0
            }
        })
        .collect();
    Gray { width: before.width, height: before.height, pixels }
}

pub fn encode(g: &Gray, comments: &[String]) -> Vec<u8> {
    let mut out = b"P5\n".to_vec();
    for c in comments {
        out.extend_from_slice(c.as_bytes());
        out.push(b'\n');
    }
    out.extend_from_slice(format!("{} {}\n255\n", g.width, g.height).as_bytes());
    out.extend_from_slice(&g.pixels);
    out
}

pub fn write(path: &Path, g: &Gray, comments: &[String]) -> Result<()> {
    std::fs::write(path, encode(g, comments)).map_err(|e| CliError::io(path, e))
}

/// Parses a binary PGM with maxval ≤ 255.
pub fn decode(bytes: &[u8]) -> Result<Gray> {
    let bad = |m: &str| CliError::Format(format!("PGM: {m}"));
    let mut pos = 0;
    let mut token = || -> Result<String> {
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            break;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };
    if token()? != "P5" {
        return Err(bad("not a binary PGM (P5)"));
    }
    let mut num = || -> Result<usize> { token()?.parse().map_err(|_| bad("bad header number")) };
    let (width, height, maxval) = (num()?, num()?, num()?);
    if width == 0 || height == 0 || maxval == 0 || maxval > 255 {
        return Err(bad("unsupported dimensions or maxval"));
    }
    let data = &bytes[pos + 1..];
    if data.len() < width * height {
        return Err(bad("pixel data truncated"));
    }
    let pixels = data[..width * height].iter().map(|&p| ((p as usize * 255) / maxval) as u8).collect();
    Ok(Gray { width, height, pixels })
}

/// Initial pattern from a label-coded PGM.
pub fn load_pattern(path: &Path, pitch_um: f64, minima: &[Equilibrium]) -> Result<DomainImage> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let g = decode(&bytes)?;
    let labels: Vec<DomainLabel> = g.pixels.iter().map(|p| gray_label(*p)).collect();
    let width = g.width;
    Ok(DomainImage::from_fn(g.width, g.height, pitch_um, minima, |x, y| {
        let i = (x / pitch_um) as usize;
        let j = (y / pitch_um) as usize;
        labels[j * width + i]
    })?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mz_levels() {
        assert_eq!(mz_gray(1.0), 255);
        assert_eq!(mz_gray(-1.0), 0);
    }

    #[test]
    fn header_format() {
        let g = Gray { width: 200, height: 200, pixels: vec![0; 40000] };
        let bytes = encode(&g, &[]);
        assert!(bytes.starts_with(b"P5\n200 200\n255\n"));
        let with_comment = encode(&g, &["# config-sha256 ab".into()]);
        assert_eq!(decode(&with_comment).unwrap(), g);
    }

    #[test]
    fn label_levels_distinct_and_invertible() {
        let mut seen = std::collections::BTreeSet::new();
        for l in DomainLabel::ALL {
            assert!(seen.insert(label_gray(l)));
            assert_ne!(label_gray(l), UNDECIDED_GRAY);
            assert_eq!(gray_label(label_gray(l)), l);
        }
    }

    #[test]
    fn decode_rejects_garbage() {
        assert!(decode(b"P2\n1 1\n255\n0").is_err());
        assert!(decode(b"P5\n2 2\n255\n\x00").is_err());
    }
}
