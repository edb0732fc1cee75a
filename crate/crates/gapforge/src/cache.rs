//! On-disk prime tables: magic `GFPT`, version, limit, count (all
//! little-endian), then the prime gaps as LEB128 varints.

use std::fs;
use std::path::{Path, PathBuf};

use gapforge_core::arith::PrimeTable;

use crate::error::{CliError, CliResult};

pub const MAGIC: &[u8; 4] = b"GFPT";
pub const VERSION: u32 = 1;
pub const FILE_NAME: &str = "primes.gfpt";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    /// Served from a file whose limit covers the request.
    Hit,
    /// Built and written (missing, stale or unreadable file).
    Rebuilt,
    /// No cache directory configured.
    Disabled,
}

impl CacheStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Hit => "hit",
            Self::Rebuilt => "rebuilt",
            Self::Disabled => "disabled",
        }
    }
}

pub fn encode(table: &PrimeTable) -> Vec<u8> {
    let primes = table.primes();
    let mut out = Vec::with_capacity(24 + primes.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&table.limit().to_le_bytes());
    out.extend_from_slice(&(primes.len() as u64).to_le_bytes());
    let mut prev = 0;
    for &p in primes {
        let mut gap = p - prev;
        prev = p;
        loop {
            let byte = (gap & 0x7f) as u8;
            gap >>= 7;
            if gap == 0 {
                out.push(byte);
                break;
            }
            out.push(byte | 0x80);
        }
    }
    out
}

fn bad(msg: &str) -> CliError {
    CliError::config(format!("prime cache: {msg}"))
}

pub fn decode(bytes: &[u8]) -> CliResult<PrimeTable> {
    if bytes.len() < 24 || &bytes[..4] != MAGIC {
        return Err(bad("bad magic"));
    }
    let word = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let limit = word(8);
    let count = word(16);
    let mut primes = Vec::with_capacity(count.min(1 << 28) as usize);
    let mut prev = 0u64;
    let mut gap = 0u64;
    let mut shift = 0;
    for &b in &bytes[24..] {
        if shift > 63 {
            return Err(bad("varint overflow"));
        }
        gap |= ((b & 0x7f) as u64) << shift;
        if b & 0x80 == 0 {
            prev = prev.checked_add(gap).ok_or_else(|| bad("gap overflow"))?;
            primes.push(prev);
            gap = 0;
            shift = 0;
        } else {
            shift += 7;
        }
    }
    if shift != 0 || primes.len() as u64 != count {
        return Err(bad("truncated"));
    }
    PrimeTable::from_parts(limit, primes).map_err(|e| bad(&e.to_string()))
}

pub fn cache_path(dir: &Path) -> PathBuf {
    dir.join(FILE_NAME)
}

/// Primes up to `limit`. A cached table is reused when its limit is at
/// least `limit`; otherwise it is rebuilt and replaced.
pub fn load_or_build(dir: Option<&Path>, limit: u64) -> CliResult<(PrimeTable, CacheStatus)> {
    let Some(dir) = dir else {
        return Ok((PrimeTable::new(limit), CacheStatus::Disabled));
    };
    let path = cache_path(dir);
    if let Ok(bytes) = fs::read(&path) {
        match decode(&bytes) {
            Ok(t) if t.limit() >= limit => {
                let primes = t.range(0, limit).to_vec();
                return Ok((PrimeTable::from_parts(limit, primes)?, CacheStatus::Hit));
            }
            Ok(_) => {}
            Err(e) => log::warn!("{}: {e}; rebuilding", path.display()),
        }
    }
    let table = PrimeTable::new(limit);
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, encode(&table)).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| CliError::io(&path, e))?;
    Ok((table, CacheStatus::Rebuilt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for limit in [0, 1, 2, 100, 70_000] {
            let t = PrimeTable::new(limit);
            assert_eq!(decode(&encode(&t)).unwrap(), t);
        }
        let bytes = encode(&PrimeTable::new(1000));
        assert!(decode(&bytes[..bytes.len() - 1]).is_err());
        let mut wrong = bytes.clone();
        wrong[0] = b'X';
        assert!(decode(&wrong).is_err());
        assert_eq!(&bytes[..4], b"GFPT");
        assert_eq!(u64::from_le_bytes(bytes[16..24].try_into().unwrap()), 168);
    }

    #[test]
    fn invalidated_by_larger_limit() {
        let dir = tempfile::tempdir().unwrap();
        let (a, s) = load_or_build(Some(dir.path()), 1000).unwrap();
        assert_eq!(s, CacheStatus::Rebuilt);
        let (b, s) = load_or_build(Some(dir.path()), 500).unwrap();
        assert_eq!(s, CacheStatus::Hit);
        assert_eq!(b.primes(), a.range(0, 500));
        let (c, s) = load_or_build(Some(dir.path()), 5000).unwrap();
        assert_eq!(s, CacheStatus::Rebuilt);
        assert_eq!(c.primes().len(), 669);
        let (_, s) = load_or_build(Some(dir.path()), 5000).unwrap();
        assert_eq!(s, CacheStatus::Hit);
    }
}
