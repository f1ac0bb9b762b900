//! PNG rasters. Without the `png` feature every entry point reports a
//! usage error instead.

use crate::CliError;

#[cfg(feature = "png")]
mod imp {
    use image::{ImageFormat, Rgb, RgbImage};
    use std::io::Cursor;

    use crate::CliError;

    fn encode(img: &RgbImage) -> Result<Vec<u8>, CliError> {
        let mut buf = Cursor::new(Vec::new());
        img.write_to(&mut buf, ImageFormat::Png)
            .map_err(|e| CliError::Io(format!("png: {e}")))?;
        Ok(buf.into_inner())
    }

    /// Diverging blue-white-red map scaled to the largest |value|; NaN is
    /// drawn grey. Row 0 of `values` is the bottom of the image.
    pub fn heatmap(nx: usize, ny: usize, values: &[f64]) -> Result<Vec<u8>, CliError> {
        let vmax = values
            .iter()
            .filter(|v| v.is_finite())
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let mut img = RgbImage::new(nx as u32, ny as u32);
        for j in 0..ny {
            for i in 0..nx {
                let v = values[j * nx + i];
                let px = if v.is_nan() {
                    Rgb([128, 128, 128])
                } else {
                    // sqrt stretch keeps the far field visible
                    let s = (v / vmax).clamp(-1.0, 1.0);
                    let s = s.signum() * s.abs().sqrt();
                    let fade = (255.0 * (1.0 - s.abs())) as u8;
                    if s >= 0.0 {
                        Rgb([255, fade, fade])
                    } else {
                        Rgb([fade, fade, 255])
                    }
                };
                img.put_pixel(i as u32, (ny - 1 - j) as u32, px);
            }
        }
        encode(&img)
    }

    const W: u32 = 800;
    const H: u32 = 400;
    const COLORS: [[u8; 3]; 4] = [[200, 30, 30], [30, 30, 200], [30, 150, 30], [150, 100, 0]];

    /// Series against `t` on [min, max] of all series.
    pub fn lines(t: &[f64], series: &[Vec<f64>]) -> Result<Vec<u8>, CliError> {
        let mut img = RgbImage::from_pixel(W, H, Rgb([255, 255, 255]));
        let (t0, t1) = (t[0], t[t.len() - 1]);
        let (lo, hi) = series
            .iter()
            .flatten()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let span = if hi > lo { hi - lo } else { 1.0 };
        let to_px = |tt: f64, v: f64| {
            let x = (tt - t0) / (t1 - t0) * (W - 1) as f64;
            let y = (1.0 - (v - lo) / span) * (H - 1) as f64;
            (x, y)
        };
        for (k, s) in series.iter().enumerate() {
            let c = Rgb(COLORS[k % COLORS.len()]);
            for i in 1..s.len() {
                let (x0, y0) = to_px(t[i - 1], s[i - 1]);
                let (x1, y1) = to_px(t[i], s[i]);
                let steps = (x1 - x0).abs().max((y1 - y0).abs()).ceil().max(1.0) as usize;
                for q in 0..=steps {
                    let f = q as f64 / steps as f64;
                    let (x, y) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
                    if x >= 0.0 && y >= 0.0 && x < W as f64 && y < H as f64 {
                        img.put_pixel(x as u32, y as u32, c);
                    }
                }
            }
        }
        encode(&img)
    }
}

pub fn available() -> bool {
    cfg!(feature = "png")
}

#[cfg(feature = "png")]
pub fn heatmap_png(nx: usize, ny: usize, values: &[f64]) -> Result<Vec<u8>, CliError> {
    imp::heatmap(nx, ny, values)
}

#[cfg(feature = "png")]
pub fn line_png(t: &[f64], series: &[Vec<f64>]) -> Result<Vec<u8>, CliError> {
    imp::lines(t, series)
}

#[cfg(not(feature = "png"))]
pub fn heatmap_png(_: usize, _: usize, _: &[f64]) -> Result<Vec<u8>, CliError> {
    Err(CliError::Usage("built without png support".into()))
}

#[cfg(not(feature = "png"))]
pub fn line_png(_: &[f64], _: &[Vec<f64>]) -> Result<Vec<u8>, CliError> {
    Err(CliError::Usage("built without png support".into()))
}
