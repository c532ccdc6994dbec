//! Debug PNGs: colorized class rasters with vector overlays.

use std::path::Path;

use image::{Rgb, RgbImage};
use pseudomap_core::geometry::{MapClass, VectorMap};
use pseudomap_core::raster::SemanticRaster;
use pseudomap_core::synth::class_color;

use crate::error::{CliError, CliResult};

fn to_rgb8(c: [f64; 3]) -> Rgb<u8> {
    Rgb([
        (c[0] * 255.0) as u8,
        (c[1] * 255.0) as u8,
        (c[2] * 255.0) as u8,
    ])
}

fn overlay_color(class: MapClass) -> Rgb<u8> {
    match class {
        MapClass::Divider => Rgb([255, 160, 20]),
        MapClass::Boundary => Rgb([230, 40, 40]),
        MapClass::PedCrossing => Rgb([60, 120, 255]),
    }
}

fn draw_line(img: &mut RgbImage, a: (i64, i64), b: (i64, i64), color: Rgb<u8>) {
    // Bresenham
    let (mut x0, mut y0) = a;
    let (x1, y1) = b;
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        if x0 >= 0 && y0 >= 0 && (x0 as u32) < img.width() && (y0 as u32) < img.height() {
            img.put_pixel(x0 as u32, y0 as u32, color);
        }
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}

/// Colorized raster with the map's elements drawn on top.
pub fn save_debug_png(
    path: &Path,
    raster: &SemanticRaster,
    overlay: Option<&VectorMap>,
) -> CliResult<()> {
    let mut img = RgbImage::new(raster.width as u32, raster.height as u32);
    for row in 0..raster.height {
        for col in 0..raster.width {
            img.put_pixel(col as u32, row as u32, to_rgb8(class_color(raster.get(row, col))));
        }
    }
    if let Some(map) = overlay {
        let spec = raster.spec;
        let to_px = |p: pseudomap_core::geometry::Point2| -> (i64, i64) {
            (
                ((p.x - spec.x_min) * spec.resolution - 0.5).round() as i64,
                ((spec.y_max - p.y) * spec.resolution - 0.5).round() as i64,
            )
        };
        for e in &map.elements {
            let color = overlay_color(e.class);
            for (a, b) in e.edges() {
                draw_line(&mut img, to_px(a), to_px(b), color);
            }
        }
    }
    img.save(path)
        .map_err(|e| CliError::validation(format!("writing PNG {}: {e}", path.display())))
}
