//! IDX3 image files (`0x00000803`, big-endian counts, then one byte per pixel).

use std::path::Path;

use crate::bits::BitMatrix;
use crate::error::{Error, Result};

pub const IDX3_MAGIC: u32 = 0x0000_0803;

/// Default binarisation threshold on `pixel / 255`.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

fn read_u32(bytes: &[u8], offset: usize) -> Result<u32> {
    bytes
        .get(offset..offset + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| Error::Parse {
            offset: bytes.len(),
            message: "short read in IDX header".into(),
        })
}

/// Binarises each pixel as `pixel / 255 ≥ threshold`, one row per image.
pub fn parse_idx_images(bytes: &[u8], threshold: f64) -> Result<BitMatrix> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::invalid(format!("threshold must be in (0, 1], got {threshold}")));
    }
    let magic = read_u32(bytes, 0)?;
    if magic != IDX3_MAGIC {
        return Err(Error::Parse {
            offset: 0,
            message: format!("bad IDX3 magic 0x{magic:08x}"),
        });
    }
    let count = read_u32(bytes, 4)? as usize;
    let rows = read_u32(bytes, 8)? as usize;
    let cols = read_u32(bytes, 12)? as usize;
    let width = rows * cols;
    let body = &bytes[16..];
    if body.len() < count * width {
        return Err(Error::Parse {
            offset: bytes.len(),
            message: format!(
                "short read: {count} images of {width} pixels need {} bytes",
                count * width
            ),
        });
    }
    let mut out = BitMatrix::with_cols(width);
    let mut row = vec![false; width];
    for image in body.chunks_exact(width.max(1)).take(count) {
        for (b, &px) in row.iter_mut().zip(image) {
            *b = px as f64 / 255.0 >= threshold;
        }
        out.push_bools(&row)?;
    }
    Ok(out)
}

pub fn load_idx_images(path: impl AsRef<Path>, threshold: f64) -> Result<BitMatrix> {
    parse_idx_images(&std::fs::read(path)?, threshold)
}

/// Serialises images to IDX3.
pub fn encode_idx_images(count: usize, rows: usize, cols: usize, pixels: &[u8]) -> Result<Vec<u8>> {
    Error::check_dim("pixel count", count * rows * cols, pixels.len())?;
    let mut out = Vec::with_capacity(16 + pixels.len());
    for v in [IDX3_MAGIC, count as u32, rows as u32, cols as u32] {
        out.extend_from_slice(&v.to_be_bytes());
    }
    out.extend_from_slice(pixels);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitRow;

    fn fixture() -> Vec<u8> {
        // Built by hand: magic, count 2, 2×2, then the pixels.
        let mut b = vec![0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2];
        b.extend_from_slice(&[0, 255, 0, 255, 255, 0, 255, 0]);
        b
    }

    #[test]
    fn two_image_fixture() {
        let m = parse_idx_images(&fixture(), 0.5).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.row(0), BitRow::parse("0101").unwrap());
        assert_eq!(m.row(1), BitRow::parse("1010").unwrap());
        assert_eq!(encode_idx_images(2, 2, 2, &fixture()[16..]).unwrap(), fixture());
    }

    #[test]
    fn threshold_one_keeps_only_saturated_pixels() {
        let bytes = encode_idx_images(1, 1, 4, &[254, 255, 0, 128]).unwrap();
        let m = parse_idx_images(&bytes, 1.0).unwrap();
        assert_eq!(m.row(0), BitRow::parse("0100").unwrap());
    }

    #[test]
    fn empty_image_count() {
        let m = parse_idx_images(&encode_idx_images(0, 28, 28, &[]).unwrap(), 0.5).unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 784));
    }

    #[test]
    fn malformed_input() {
        let mut b = fixture();
        b[3] = 1;
        assert!(matches!(parse_idx_images(&b, 0.5), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(
            parse_idx_images(&fixture()[..20], 0.5),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_idx_images(&fixture()[..6], 0.5),
            Err(Error::Parse { .. })
        ));
        assert!(parse_idx_images(&fixture(), 0.0).is_err());
    }

    #[test]
    fn load_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("img.idx3");
        std::fs::write(&p, fixture()).unwrap();
        assert_eq!(load_idx_images(&p, 0.5).unwrap().rows(), 2);
        assert!(load_idx_images(dir.path().join("missing"), 0.5).is_err());
    }
}
