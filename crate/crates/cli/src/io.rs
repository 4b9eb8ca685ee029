use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use image::{GrayAlphaImage, ImageFormat};
use ridgeflow::imgproc::{decode_pgm, encode_pgm};
use ridgeflow::orientation::{decode_orf, write_orf};
use ridgeflow::{BinaryMask, GrayImage, OrientationField};

use crate::error::{CliError, CliResult};

/// Writes `bytes` to a temporary sibling and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut file = fs::File::create(&tmp).map_err(err)?;
    file.write_all(bytes).and_then(|_| file.sync_all()).map_err(err)?;
    drop(file);
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        err(e)
    })
}

fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::unreadable(path, e))
}

/// Reads an 8-bit PGM (P5) or PNG; PNGs with colour are converted to luma.
pub fn read_image(path: &Path) -> CliResult<GrayImage> {
    let bytes = read_bytes(path)?;
    if bytes.starts_with(b"P5") {
        return decode_pgm(&bytes).map_err(|e| CliError::unreadable(path, e));
    }
    let decoded = image::load_from_memory(&bytes).map_err(|e| CliError::unreadable(path, e))?;
    let luma = decoded.to_luma8();
    let (w, h) = luma.dimensions();
    GrayImage::from_vec(w as usize, h as usize, luma.into_raw()).map_err(|e| CliError::unreadable(path, e))
}

/// Mask from an image: grey levels above 127 are true.
pub fn read_mask(path: &Path) -> CliResult<BinaryMask> {
    Ok(read_image(path)?.map(|&v| v > 127))
}

pub fn read_field(path: &Path) -> CliResult<OrientationField> {
    decode_orf(&read_bytes(path)?).map_err(|e| CliError::unreadable(path, e))
}

pub fn write_image(path: &Path, image: &GrayImage) -> CliResult<()> {
    write_atomic(path, &encode_pgm(image))
}

pub fn write_mask(path: &Path, mask: &BinaryMask) -> CliResult<()> {
    write_image(path, &mask.to_gray())
}

pub fn write_field(path: &Path, field: &OrientationField) -> CliResult<()> {
    let mut buf = Vec::new();
    write_orf(&mut buf, field)?;
    write_atomic(path, &buf)
}

pub fn write_png(path: &Path, image: &GrayAlphaImage) -> CliResult<()> {
    let mut buf = std::io::Cursor::new(Vec::new());
    image
        .write_to(&mut buf, ImageFormat::Png)
        .map_err(|e| CliError::Write {
            path: path.to_path_buf(),
            source: std::io::Error::other(e),
        })?;
    write_atomic(path, buf.get_ref())
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })
}
