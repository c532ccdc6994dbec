//! Raster file format: binary PGM (P5, maxval 255) where the pixel value
//! is the class ID, plus a `<name>.meta.json` sidecar carrying the BEV
//! spec and the class palette. Masks use 0/255 with 255 = observed.
//! Write -> read -> write round trips are byte-exact.

use std::path::{Path, PathBuf};

use pseudomap_core::raster::{BevMask, BitGrid, RasterClass, SemanticRaster};
use serde::{Deserialize, Serialize};

use super::vector_json::BevSpecDto;
use crate::error::{CliError, CliResult};
use crate::io_util::{atomic_write, parse_json, read_bytes, read_string, to_json_bytes};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RasterMeta {
    /// "classes" for semantic rasters, "mask" for observability masks.
    pub kind: String,
    pub bev_spec: BevSpecDto,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub palette: Option<Vec<String>>,
}

pub fn meta_path(pgm_path: &Path) -> PathBuf {
    let stem = pgm_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    pgm_path.with_file_name(format!("{stem}.meta.json"))
}

fn class_palette() -> Vec<String> {
    RasterClass::ALL.iter().map(|c| c.as_str().to_string()).collect()
}

struct PgmData {
    width: usize,
    height: usize,
    bytes: Vec<u8>,
}

fn write_pgm(path: &Path, width: usize, height: usize, data: &[u8]) -> CliResult<()> {
    debug_assert_eq!(data.len(), width * height);
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(data);
    atomic_write(path, &out)
}

fn parse_err(path: &Path, offset: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.display().to_string(),
        message: format!("byte offset {offset}: {}", message.into()),
    }
}

/// Minimal P5 reader: whitespace and `#` comments allowed in the header.
fn read_pgm(path: &Path) -> CliResult<PgmData> {
    let bytes = read_bytes(path)?;
    if bytes.len() < 2 || &bytes[0..2] != b"P5" {
        return Err(parse_err(path, 0, "not a binary PGM (missing P5 magic)"));
    }
    let mut pos = 2usize;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        // skip whitespace and comments
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(parse_err(path, pos, "expected a decimal header field"));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("digits are utf8");
        *field = text
            .parse()
            .map_err(|_| parse_err(path, start, "header field out of range"))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(parse_err(path, pos, format!("maxval must be 255, got {maxval}")));
    }
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(parse_err(path, pos, "expected single whitespace after maxval"));
    }
    pos += 1;
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| parse_err(path, pos, "dimensions overflow"))?;
    let data = &bytes[pos..];
    if data.len() != expected {
        return Err(parse_err(
            path,
            pos,
            format!("expected {expected} data bytes, found {}", data.len()),
        ));
    }
    Ok(PgmData {
        width,
        height,
        bytes: data.to_vec(),
    })
}

fn read_meta(pgm_path: &Path, expect_kind: &str) -> CliResult<RasterMeta> {
    let path = meta_path(pgm_path);
    let text = read_string(&path)?;
    let meta: RasterMeta = parse_json(&path, &text)?;
    if meta.kind != expect_kind {
        return Err(CliError::Parse {
            path: path.display().to_string(),
            message: format!("expected kind \"{expect_kind}\", found \"{}\"", meta.kind),
        });
    }
    Ok(meta)
}

pub fn write_raster(path: &Path, raster: &SemanticRaster) -> CliResult<()> {
    let data: Vec<u8> = raster.classes().iter().map(|c| c.id()).collect();
    write_pgm(path, raster.width, raster.height, &data)?;
    let meta = RasterMeta {
        kind: "classes".into(),
        bev_spec: BevSpecDto::from_core(&raster.spec),
        palette: Some(class_palette()),
    };
    atomic_write(&meta_path(path), &to_json_bytes(&meta))
}

pub fn read_raster(path: &Path) -> CliResult<SemanticRaster> {
    let meta = read_meta(path, "classes")?;
    let spec = meta.bev_spec.to_core()?;
    let pgm = read_pgm(path)?;
    if pgm.width != spec.width_px() || pgm.height != spec.height_px() {
        return Err(CliError::Parse {
            path: path.display().to_string(),
            message: format!(
                "PGM is {}x{} but the BEV spec implies {}x{}",
                pgm.width,
                pgm.height,
                spec.width_px(),
                spec.height_px()
            ),
        });
    }
    let mut classes = Vec::with_capacity(pgm.bytes.len());
    for (i, &b) in pgm.bytes.iter().enumerate() {
        let class = RasterClass::from_id(b).ok_or_else(|| {
            parse_err(path, i, format!("invalid class id {b} (valid: 0..=4)"))
        })?;
        classes.push(class);
    }
    Ok(SemanticRaster::from_classes(spec, classes))
}

pub fn write_mask(path: &Path, mask: &BevMask) -> CliResult<()> {
    let data: Vec<u8> = mask.grid.bits().iter().map(|&b| if b { 255 } else { 0 }).collect();
    write_pgm(path, mask.grid.width, mask.grid.height, &data)?;
    let meta = RasterMeta {
        kind: "mask".into(),
        bev_spec: BevSpecDto::from_core(&mask.spec),
        palette: None,
    };
    atomic_write(&meta_path(path), &to_json_bytes(&meta))
}

pub fn read_mask(path: &Path) -> CliResult<BevMask> {
    let meta = read_meta(path, "mask")?;
    let spec = meta.bev_spec.to_core()?;
    let pgm = read_pgm(path)?;
    if pgm.width != spec.width_px() || pgm.height != spec.height_px() {
        return Err(CliError::Parse {
            path: path.display().to_string(),
            message: format!(
                "PGM is {}x{} but the BEV spec implies {}x{}",
                pgm.width,
                pgm.height,
                spec.width_px(),
                spec.height_px()
            ),
        });
    }
    let mut bits = Vec::with_capacity(pgm.bytes.len());
    for (i, &b) in pgm.bytes.iter().enumerate() {
        match b {
            0 => bits.push(false),
            255 => bits.push(true),
            other => {
                return Err(parse_err(
                    path,
                    i,
                    format!("mask bytes must be 0 or 255, found {other}"),
                ))
            }
        }
    }
    Ok(BevMask::from_grid(
        spec,
        BitGrid::from_bits(pgm.width, pgm.height, bits),
    ))
}
