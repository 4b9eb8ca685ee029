//! Binary PGM (P5, maxval 255) codec.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::imgproc::raster::{BinaryMask, GrayImage};

pub fn encode_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend_from_slice(image.data());
    out
}

pub fn write_pgm(mut writer: impl Write, image: &GrayImage) -> Result<()> {
    writer.write_all(&encode_pgm(image))?;
    Ok(())
}

pub fn write_mask_pgm(writer: impl Write, mask: &BinaryMask) -> Result<()> {
    write_pgm(writer, &mask.to_gray())
}

pub fn read_pgm(mut reader: impl Read) -> Result<GrayImage> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    decode_pgm(&bytes)
}

pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::BadMagic);
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in &mut fields {
        *field = next_header_number(bytes, &mut pos)?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(Error::Format(format!("unsupported maxval {maxval}")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::TruncatedFile);
    }
    pos += 1;
    let len = width.checked_mul(height).ok_or(Error::DimensionOverflow)?;
    let end = pos.checked_add(len).ok_or(Error::DimensionOverflow)?;
    if bytes.len() < end {
        return Err(Error::TruncatedFile);
    }
    GrayImage::from_vec(width, height, bytes[pos..end].to_vec())
}

fn next_header_number(bytes: &[u8], pos: &mut usize) -> Result<usize> {
    loop {
        match bytes.get(*pos) {
            None => return Err(Error::TruncatedFile),
            Some(b'#') => {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
            }
            Some(c) if c.is_ascii_whitespace() => *pos += 1,
            Some(_) => break,
        }
    }
    let start = *pos;
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Format("expected a number in the PGM header".into()));
    }
    std::str::from_utf8(&bytes[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or(Error::DimensionOverflow)
}
