//! On-disk cache for reduced bases.
//!
//! The reduction of the attack lattice depends only on `(N, q, y, strategy,
//! seed, delta)`, so one reduced basis serves every trial and every keypair
//! sharing those values. Format: a single header line
//! `NTRULAB_BASIS 1 N q y strategy seed delta`, then `2N` lines of `2N`
//! space-separated integers.

use super::LatticeBasis;
use rug::Integer;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const BASIS_CACHE_MAGIC: &str = "NTRULAB_BASIS";
pub const BASIS_CACHE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum BasisCacheError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt basis cache: {0}")]
    Corrupt(String),
}

/// Identity of a cached reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisCacheKey {
    pub n: usize,
    pub q: u64,
    pub y: f64,
    pub strategy: String,
    pub seed: u64,
    pub delta: f64,
}

impl BasisCacheKey {
    /// Deterministic file name under a cache directory.
    pub fn file_name(&self) -> String {
        format!(
            "basis_n{}_q{}_y{}_{}_s{}_d{}.txt",
            self.n, self.q, self.y, self.strategy, self.seed, self.delta
        )
    }

    pub fn path_in(&self, dir: &Path) -> PathBuf {
        dir.join(self.file_name())
    }
}

fn parse<T: std::str::FromStr>(token: &str, what: &str) -> Result<T, BasisCacheError> {
    token
        .parse()
        .map_err(|_| BasisCacheError::Corrupt(format!("bad {what} field {token:?}")))
}

pub fn write_basis_cache(
    path: &Path,
    key: &BasisCacheKey,
    basis: &LatticeBasis,
) -> Result<(), BasisCacheError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut out = Vec::new();
    writeln!(
        out,
        "{} {} {} {} {} {} {} {}",
        BASIS_CACHE_MAGIC,
        BASIS_CACHE_VERSION,
        key.n,
        key.q,
        key.y,
        key.strategy,
        key.seed,
        key.delta
    )?;
    for row in basis.rows() {
        let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_basis_cache(path: &Path) -> Result<(BasisCacheKey, LatticeBasis), BasisCacheError> {
    let file = fs::File::open(path)?;
    let mut reader = BufReader::new(file);
    let mut header = String::new();
    reader.read_line(&mut header)?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 8 {
        return Err(BasisCacheError::Corrupt(format!(
            "header has {} fields, expected 8",
            tokens.len()
        )));
    }
    if tokens[0] != BASIS_CACHE_MAGIC {
        return Err(BasisCacheError::Corrupt(format!("bad magic {:?}", tokens[0])));
    }
    let version: u32 = parse(tokens[1], "version")?;
    if version != BASIS_CACHE_VERSION {
        return Err(BasisCacheError::Corrupt(format!("unsupported version {version}")));
    }
    let key = BasisCacheKey {
        n: parse(tokens[2], "N")?,
        q: parse(tokens[3], "q")?,
        y: parse(tokens[4], "y")?,
        strategy: tokens[5].to_string(),
        seed: parse(tokens[6], "seed")?,
        delta: parse(tokens[7], "delta")?,
    };

    let expected = 2 * key.n;
    let mut rows = Vec::with_capacity(expected);
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Result<Vec<Integer>, _> =
            line.split_whitespace().map(|t| t.parse::<Integer>()).collect();
        let row = row.map_err(|e| BasisCacheError::Corrupt(format!("bad entry: {e}")))?;
        if row.len() != expected {
            return Err(BasisCacheError::Corrupt(format!(
                "row has {} entries, expected {expected}",
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != expected {
        return Err(BasisCacheError::Corrupt(format!(
            "found {} rows, expected {expected}",
            rows.len()
        )));
    }
    let basis = LatticeBasis::from_rows(rows)
        .map_err(|e| BasisCacheError::Corrupt(format!("malformed basis: {e}")))?;
    Ok((key, basis))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key() -> BasisCacheKey {
        BasisCacheKey {
            n: 2,
            q: 32,
            y: 2.5,
            strategy: "algorithm1".into(),
            seed: 7,
            delta: 0.99,
        }
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let k = key();
        let basis = LatticeBasis::from_i64_rows(&[
            &[1, 0, 3, 5],
            &[0, 1, 5, 3],
            &[0, 0, 32, 0],
            &[0, 0, 0, 32],
        ]);
        let path = k.path_in(dir.path());
        write_basis_cache(&path, &k, &basis).unwrap();
        let (k2, b2) = read_basis_cache(&path).unwrap();
        assert_eq!(k, k2);
        assert_eq!(basis, b2);
    }

    #[test]
    fn corrupt_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.txt");

        std::fs::write(&path, "WRONG 1 2 32 2.5 algorithm1 7 0.99\n").unwrap();
        assert!(matches!(read_basis_cache(&path), Err(BasisCacheError::Corrupt(_))));

        std::fs::write(&path, "NTRULAB_BASIS 1 2 32 2.5 algorithm1 7 0.99\n1 2 3\n").unwrap();
        assert!(matches!(read_basis_cache(&path), Err(BasisCacheError::Corrupt(_))));

        // truncated: too few rows
        std::fs::write(&path, "NTRULAB_BASIS 1 2 32 2.5 algorithm1 7 0.99\n1 2 3 4\n").unwrap();
        assert!(matches!(read_basis_cache(&path), Err(BasisCacheError::Corrupt(_))));
    }

    #[test]
    fn file_names_are_key_specific() {
        let a = key().file_name();
        let mut k2 = key();
        k2.seed = 8;
        assert_ne!(a, k2.file_name());
    }
}
