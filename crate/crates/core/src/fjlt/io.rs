//! Plan files and raw point-set files.
//!
//! Plan layout, all integers little-endian:
//!
//! ```text
//! offset  size  field
//!      0     4  magic "FJLT"
//!      4     1  version (1)
//!      5     8  d            u64
//!     13     8  k            u64
//!     21     4  m            u32
//!     25     4  modulus      u32
//!     29     8  master seed  u64
//! ```
//!
//! Sign vectors are regenerated from the seed on load.
//!
//! A point set is a file of raw `f64` little-endian values, row-major, next
//! to a `<file>.desc` text descriptor holding `n=`, `d=` and `dtype=f64le`.

use std::fs;
use std::path::{Path, PathBuf};

use super::plan::{FjltPlan, PointSet};
use crate::error::{FjltError, Result};

pub const PLAN_MAGIC: &[u8; 4] = b"FJLT";
pub const PLAN_VERSION: u8 = 1;
pub const PLAN_LEN: usize = 37;

pub fn serialize_plan(plan: &FjltPlan) -> Vec<u8> {
    let field = plan.code().field();
    let mut out = Vec::with_capacity(PLAN_LEN);
    out.extend_from_slice(PLAN_MAGIC);
    out.push(PLAN_VERSION);
    out.extend_from_slice(&(plan.input_dim() as u64).to_le_bytes());
    out.extend_from_slice(&(plan.output_dim() as u64).to_le_bytes());
    out.extend_from_slice(&field.width().to_le_bytes());
    out.extend_from_slice(&field.modulus().to_le_bytes());
    out.extend_from_slice(&plan.master_seed().to_le_bytes());
    out
}

pub fn deserialize_plan(bytes: &[u8]) -> Result<FjltPlan> {
    if bytes.len() < 5 || &bytes[..4] != PLAN_MAGIC {
        return Err(FjltError::Format("missing FJLT magic".into()));
    }
    if bytes[4] != PLAN_VERSION {
        return Err(FjltError::Format(format!("unsupported plan version {}", bytes[4])));
    }
    if bytes.len() != PLAN_LEN {
        return Err(FjltError::Format(format!(
            "plan must be {PLAN_LEN} bytes, got {}",
            bytes.len()
        )));
    }
    let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let to_usize = |v: u64| {
        usize::try_from(v).map_err(|_| FjltError::Format(format!("dimension {v} overflows")))
    };
    let (d, k) = (to_usize(u64_at(5))?, to_usize(u64_at(13))?);
    let (m, modulus, seed) = (u32_at(21), u32_at(25), u64_at(29));

    let plan = FjltPlan::new(d, k, seed)
        .map_err(|e| FjltError::Format(format!("header describes an invalid plan: {e}")))?;
    let field = plan.code().field();
    if field.width() != m || field.modulus() != modulus {
        return Err(FjltError::Format(format!(
            "field (m={m}, modulus={modulus:#x}) does not match the code for k={k}, d={d}"
        )));
    }
    Ok(plan)
}

pub fn write_plan(path: &Path, plan: &FjltPlan) -> Result<()> {
    fs::write(path, serialize_plan(plan))?;
    Ok(())
}

pub fn read_plan(path: &Path) -> Result<FjltPlan> {
    deserialize_plan(&fs::read(path)?)
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".desc");
    PathBuf::from(s)
}

pub fn encode_descriptor(n: usize, d: usize) -> String {
    format!("n={n}\nd={d}\ndtype=f64le\n")
}

/// Parses `key=value` lines; returns `(n, d)`.
pub fn parse_descriptor(text: &str) -> Result<(usize, usize)> {
    let (mut n, mut d, mut dtype) = (None, None, None);
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| FjltError::Format(format!("descriptor line without '=': {line}")))?;
        let (key, value) = (key.trim(), value.trim());
        let parse = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| FjltError::Format(format!("bad value for {key}: {v}")))
        };
        match key {
            "n" => n = Some(parse(value)?),
            "d" => d = Some(parse(value)?),
            "dtype" => dtype = Some(value.to_string()),
            _ => return Err(FjltError::Format(format!("unknown descriptor key {key}"))),
        }
    }
    match (n, d, dtype.as_deref()) {
        (Some(n), Some(d), Some("f64le")) => Ok((n, d)),
        (_, _, Some(other)) if other != "f64le" => {
            Err(FjltError::Format(format!("unsupported dtype {other}")))
        }
        _ => Err(FjltError::Format("descriptor needs n, d and dtype".into())),
    }
}

pub fn encode_points(points: &PointSet) -> Vec<u8> {
    points.data().iter().flat_map(|v| v.to_le_bytes()).collect()
}

pub fn decode_points(bytes: &[u8], n: usize, d: usize) -> Result<PointSet> {
    let expected = n.checked_mul(d).and_then(|c| c.checked_mul(8));
    if expected != Some(bytes.len()) {
        return Err(FjltError::Format(format!(
            "point data has {} bytes, descriptor implies {n} x {d} f64",
            bytes.len()
        )));
    }
    let data: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if let Some(i) = data.iter().position(|v| !v.is_finite()) {
        return Err(FjltError::Format(format!("non-finite value at index {i}")));
    }
    PointSet::from_flat(n, d, data)
}

pub fn write_point_set(path: &Path, points: &PointSet) -> Result<()> {
    fs::write(path, encode_points(points))?;
    fs::write(sidecar_path(path), encode_descriptor(points.len(), points.dim()))?;
    Ok(())
}

pub fn read_point_set(path: &Path) -> Result<PointSet> {
    let desc = fs::read_to_string(sidecar_path(path))?;
    let (n, d) = parse_descriptor(&desc)?;
    decode_points(&fs::read(path)?, n, d)
}
