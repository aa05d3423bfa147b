//! Median-cut extraction of dominant colors.

use crate::error::{Error, Result};
use crate::model::RgbaColor;

/// 8-bit RGBA raster, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<[u8; 4]>,
}

impl Raster {
    pub fn new(width: u32, height: u32, pixels: Vec<[u8; 4]>) -> Self {
        debug_assert_eq!(pixels.len(), (width * height) as usize);
        Raster {
            width,
            height,
            pixels,
        }
    }

    pub fn solid(width: u32, height: u32, c: [u8; 4]) -> Self {
        Raster::new(width, height, vec![c; (width * height) as usize])
    }
}

struct ColorBox {
    pixels: Vec<[u8; 3]>,
    born: usize,
}

impl ColorBox {
    fn ranges(&self) -> [u8; 3] {
        let mut lo = [255u8; 3];
        let mut hi = [0u8; 3];
        for p in &self.pixels {
            for ch in 0..3 {
                lo[ch] = lo[ch].min(p[ch]);
                hi[ch] = hi[ch].max(p[ch]);
            }
        }
        [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]]
    }

    fn widest(&self) -> (usize, u8) {
        let r = self.ranges();
        let ch = (0..3).max_by(|&a, &b| r[a].cmp(&r[b]).then(b.cmp(&a))).unwrap();
        (ch, r[ch])
    }

    fn mean(&self) -> RgbaColor {
        let n = self.pixels.len() as f64;
        let mut sum = [0f64; 3];
        for p in &self.pixels {
            for ch in 0..3 {
                sum[ch] += p[ch] as f64;
            }
        }
        let q = |v: f64| (v / n).round() as u8;
        RgbaColor::rgb(q(sum[0]), q(sum[1]), q(sum[2]))
    }

    fn split(mut self, next_born: usize) -> (ColorBox, ColorBox) {
        let (ch, _) = self.widest();
        self.pixels.sort_unstable_by_key(|p| (p[ch], p[0], p[1], p[2]));
        let n = self.pixels.len();
        let mid = n / 2;
        let v = self.pixels[mid][ch];
        let lo = self.pixels.partition_point(|p| p[ch] < v);
        let hi = self.pixels.partition_point(|p| p[ch] <= v);
        // Cut at a value boundary so identical colors stay together.
        let cut = [lo, hi]
            .into_iter()
            .filter(|&c| c > 0 && c < n)
            .min_by_key(|&c| c.abs_diff(mid))
            .expect("a box with non-zero range has a value boundary");
        let right = self.pixels.split_off(cut);
        (
            ColorBox {
                pixels: self.pixels,
                born: self.born,
            },
            ColorBox {
                pixels: right,
                born: next_born,
            },
        )
    }
}

/// Up to `k` dominant colors ordered by pixel population, largest first.
///
/// Pixels with alpha below 125 are ignored unless nothing else remains.
pub fn dominant_colors(raster: &Raster, k: usize) -> Result<Vec<RgbaColor>> {
    if raster.pixels.is_empty() {
        return Err(Error::EmptyImage);
    }
    let k = k.max(1);
    let mut pixels: Vec<[u8; 3]> = raster
        .pixels
        .iter()
        .filter(|p| p[3] >= 125)
        .map(|p| [p[0], p[1], p[2]])
        .collect();
    if pixels.is_empty() {
        pixels = raster.pixels.iter().map(|p| [p[0], p[1], p[2]]).collect();
    }
    let mut boxes = vec![ColorBox { pixels, born: 0 }];
    let mut born = 1;
    while boxes.len() < k {
        let pick = boxes
            .iter()
            .enumerate()
            .filter(|(_, b)| b.widest().1 > 0)
            .max_by(|(ia, a), (ib, b)| {
                let pa = a.pixels.len() as u64 * a.widest().1 as u64;
                let pb = b.pixels.len() as u64 * b.widest().1 as u64;
                pa.cmp(&pb).then(ib.cmp(ia))
            })
            .map(|(i, _)| i);
        let Some(i) = pick else { break };
        let (a, b) = boxes.swap_remove(i).split(born);
        born += 1;
        boxes.push(a);
        boxes.push(b);
    }
    let mut out: Vec<(RgbaColor, usize, usize)> = Vec::new();
    for b in &boxes {
        let c = b.mean();
        match out.iter_mut().find(|(oc, _, _)| *oc == c) {
            Some(entry) => {
                entry.1 += b.pixels.len();
                entry.2 = entry.2.min(b.born);
            }
            None => out.push((c, b.pixels.len(), b.born)),
        }
    }
    out.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    Ok(out.into_iter().map(|(c, _, _)| c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solid_image_gives_single_color() {
        let r = Raster::solid(8, 8, [255, 0, 0, 255]);
        assert_eq!(dominant_colors(&r, 5).unwrap(), vec![RgbaColor::rgb(255, 0, 0)]);
    }

    #[test]
    fn empty_raster_errors() {
        let r = Raster::new(0, 0, vec![]);
        assert!(matches!(dominant_colors(&r, 5), Err(Error::EmptyImage)));
    }

    #[test]
    fn output_is_bounded_and_sorted() {
        let mut px = Vec::new();
        for i in 0..400u32 {
            px.push([(i * 7 % 256) as u8, (i * 13 % 256) as u8, (i * 29 % 256) as u8, 255]);
        }
        let r = Raster::new(20, 20, px);
        let colors = dominant_colors(&r, 3).unwrap();
        assert_eq!(colors.len(), 3);
    }
}
