//! Binary field files.
//!
//! Layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4     | magic `RSF1` |
//! | 4     | version `u32` (= 1) |
//! | 12    | `nx, ny, nz` as `u32` |
//! | 24    | `dx, dy, dz` as `f64` |
//! | 24    | origin as 3 × `f64` |
//! | 4     | RS branch sign `i32` (±1) |
//! | 48·N  | per point `Fx.re, Fx.im, Fy.re, Fy.im, Fz.re, Fz.im`, x fastest |

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{CVec3, Grid3, Helicity, RSField};

pub const MAGIC: [u8; 4] = *b"RSF1";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 72;
const POINT_LEN: u64 = 48;

/// Serialises a field to the file format.
pub fn encode_field(f: &RSField) -> Result<Vec<u8>> {
    let g = f.grid();
    let dims = g.dims();
    let dims32: Vec<u32> = dims
        .iter()
        .map(|&n| u32::try_from(n))
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidGrid(format!("dimensions {dims:?} do not fit in u32")))?;
    let mut out = Vec::with_capacity(HEADER_LEN + f.data().len() * POINT_LEN as usize);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for n in dims32 {
        out.extend_from_slice(&n.to_le_bytes());
    }
    for v in g.spacing().into_iter().chain(g.origin()) {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&f.helicity().as_i32().to_le_bytes());
    for v in f.data() {
        for z in v {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    Ok(out)
}

fn u32_at(b: &[u8], off: usize) -> u32 {
    u32::from_le_bytes(b[off..off + 4].try_into().expect("4 bytes"))
}

fn f64_at(b: &[u8], off: usize) -> f64 {
    f64::from_le_bytes(b[off..off + 8].try_into().expect("8 bytes"))
}

/// Parses a field from bytes; `path` is only used in error messages.
pub fn decode_field(bytes: &[u8], path: &Path) -> Result<RSField> {
    let truncated = |expected: u64| Error::Truncated {
        path: path.to_path_buf(),
        expected,
        actual: bytes.len() as u64,
    };
    if bytes.len() < 4 {
        return Err(truncated(HEADER_LEN as u64));
    }
    let magic: [u8; 4] = bytes[..4].try_into().expect("4 bytes");
    if magic != MAGIC {
        return Err(Error::BadMagic {
            path: path.to_path_buf(),
            found: magic,
        });
    }
    if bytes.len() < HEADER_LEN {
        return Err(truncated(HEADER_LEN as u64));
    }
    let version = u32_at(bytes, 4);
    if version != VERSION {
        return Err(Error::UnsupportedVersion {
            path: path.to_path_buf(),
            version,
        });
    }
    let (nx, ny, nz) = (u32_at(bytes, 8), u32_at(bytes, 12), u32_at(bytes, 16));
    let overflow = || Error::DimensionOverflow {
        path: path.to_path_buf(),
        nx,
        ny,
        nz,
    };
    let payload = (nx as u64)
        .checked_mul(ny as u64)
        .and_then(|v| v.checked_mul(nz as u64))
        .and_then(|v| v.checked_mul(POINT_LEN))
        .ok_or_else(overflow)?;
    let expected = payload.checked_add(HEADER_LEN as u64).ok_or_else(overflow)?;
    if usize::try_from(expected).is_err() {
        return Err(overflow());
    }
    if (bytes.len() as u64) < expected {
        return Err(truncated(expected));
    }
    if (bytes.len() as u64) > expected {
        return Err(Error::BadHeader {
            path: path.to_path_buf(),
            msg: format!(
                "{} trailing bytes after a payload of {payload} bytes",
                bytes.len() as u64 - expected
            ),
        });
    }
    let spacing = [f64_at(bytes, 20), f64_at(bytes, 28), f64_at(bytes, 36)];
    let origin = [f64_at(bytes, 44), f64_at(bytes, 52), f64_at(bytes, 60)];
    let sign = i32::from_le_bytes(bytes[68..72].try_into().expect("4 bytes"));
    let bad = |msg: String| Error::BadHeader {
        path: path.to_path_buf(),
        msg,
    };
    let helicity = Helicity::from_i32(sign).ok_or_else(|| bad(format!("helicity sign must be +1 or -1, got {sign}")))?;
    let grid = Grid3::new([nx as usize, ny as usize, nz as usize], spacing, origin)
        .map_err(|e| bad(e.to_string()))?;
    let data: Vec<CVec3> = bytes[HEADER_LEN..]
        .chunks_exact(POINT_LEN as usize)
        .map(|p| std::array::from_fn(|c| Complex64::new(f64_at(p, 16 * c), f64_at(p, 16 * c + 8))))
        .collect();
    RSField::new(grid, data, helicity)
}

pub fn write_field(path: impl AsRef<Path>, f: &RSField) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_field(f)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn read_field(path: impl AsRef<Path>) -> Result<RSField> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_field(&bytes, path)
}
