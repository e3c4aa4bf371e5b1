//! Storage, ingestion, caching, and counting of zeta-zero tables.
//!
//! A [`ZeroSet`] holds the imaginary parts γ of nontrivial zeros as an
//! immutable, strictly increasing `f64` table.  Published tables carry at
//! most ten significant decimals, so doubles represent them exactly; the
//! real parts are 1/2 by stated assumption (RH-verified range) and are
//! not stored.

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};

/// Binary cache magic bytes.
pub const CACHE_MAGIC: [u8; 4] = *b"ZFPZ";
/// Binary cache format version.
pub const CACHE_VERSION: u32 = 1;

/// Ordered table of zero heights with counting and range queries.
///
/// Immutable after construction; safe to share across worker threads.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    gammas: Vec<f64>,
}

impl ZeroSet {
    /// Build from a strictly increasing, positive sequence.
    pub fn new(gammas: Vec<f64>) -> Result<Self> {
        for (i, w) in gammas.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::NonMonotoneZero {
                    line: i + 2,
                    value: w[1],
                    previous: w[0],
                });
            }
        }
        if let Some(&first) = gammas.first() {
            if !(first > 0.0) {
                return Err(Error::Domain(format!(
                    "zero heights must be positive, got {first}"
                )));
            }
        }
        Ok(ZeroSet { gammas })
    }

    pub fn count(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// Height of the last zero, or 0 for an empty set.
    pub fn t_max(&self) -> f64 {
        self.gammas.last().copied().unwrap_or(0.0)
    }

    /// Height of the k-th zero (1-based, as in "the 10⁵-th zero").
    pub fn nth(&self, k: usize) -> Option<f64> {
        if k == 0 {
            None
        } else {
            self.gammas.get(k - 1).copied()
        }
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    /// N(T): number of zeros with 0 < γ ≤ T (binary search, O(log n)).
    pub fn count_upto(&self, t: f64) -> usize {
        self.gammas.partition_point(|&g| g <= t)
    }

    /// Parse the text format: one decimal per line, '#' comments and blank
    /// lines ignored, values strictly ascending.
    pub fn parse_zeros<R: BufRead>(reader: R) -> Result<Self> {
        let mut gammas = Vec::new();
        let mut prev: Option<f64> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let v: f64 = t.parse().map_err(|_| Error::NonNumericZero {
                line: idx + 1,
                token: t.to_string(),
            })?;
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::NonNumericZero {
                    line: idx + 1,
                    token: t.to_string(),
                });
            }
            if let Some(p) = prev {
                if v <= p {
                    return Err(Error::NonMonotoneZero {
                        line: idx + 1,
                        value: v,
                        previous: p,
                    });
                }
            }
            prev = Some(v);
            gammas.push(v);
        }
        Ok(ZeroSet { gammas })
    }

    /// Write the binary cache; returns the number of bytes written.
    ///
    /// Layout: magic "ZFPZ", version as u32 LE, count as u64 LE, then
    /// count f64 LE values.  Round-trips bit-exactly.
    pub fn write_cache<W: Write>(&self, mut sink: W) -> Result<u64> {
        sink.write_all(&CACHE_MAGIC)?;
        sink.write_all(&CACHE_VERSION.to_le_bytes())?;
        sink.write_all(&(self.gammas.len() as u64).to_le_bytes())?;
        for &g in &self.gammas {
            sink.write_all(&g.to_le_bytes())?;
        }
        Ok(16 + 8 * self.gammas.len() as u64)
    }

    /// Read the binary cache written by [`ZeroSet::write_cache`].
    pub fn load_cache<R: Read>(mut source: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        read_exact_or(&mut source, &mut magic, 16, 0)?;
        if magic != CACHE_MAGIC {
            return Err(Error::BadMagic { found: magic });
        }
        let mut word4 = [0u8; 4];
        read_exact_or(&mut source, &mut word4, 16, 4)?;
        let version = u32::from_le_bytes(word4);
        if version != CACHE_VERSION {
            return Err(Error::UnsupportedVersion {
                found: version,
                expected: CACHE_VERSION,
            });
        }
        let mut word8 = [0u8; 8];
        read_exact_or(&mut source, &mut word8, 16, 8)?;
        let count = u64::from_le_bytes(word8);
        let mut gammas = Vec::with_capacity(count.min(1 << 32) as usize);
        let mut buf = vec![0u8; 8 * 4096];
        let mut remaining = count;
        while remaining > 0 {
            let take = (remaining.min(4096) * 8) as usize;
            source.read_exact(&mut buf[..take]).map_err(|_| Error::Truncated {
                expected: 16 + 8 * count,
                got: 16 + 8 * (count - remaining),
            })?;
            for chunk in buf[..take].chunks_exact(8) {
                gammas.push(f64::from_le_bytes(chunk.try_into().unwrap()));
            }
            remaining -= (take / 8) as u64;
        }
        // validate the invariant on load: a cache is untrusted input
        for w in gammas.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::CorruptCache(format!(
                    "values not strictly increasing ({} after {})",
                    w[1], w[0]
                )));
            }
        }
        Ok(ZeroSet { gammas })
    }
}

fn read_exact_or<R: Read>(r: &mut R, buf: &mut [u8], expected: u64, offset: u64) -> Result<()> {
    r.read_exact(buf).map_err(|_| Error::Truncated {
        expected,
        got: offset,
    })?;
    Ok(())
}

/// Riemann–von Mangoldt smooth approximation to the zero count:
/// (T/2π)·log(T/(2πe)) + 7/8.
///
/// The paper prints the formula without the constant term; the standard
/// form used here is validated by the paper's own anchor
/// N(42653549.761) = 10⁸.
pub fn n_asymptotic(t: f64) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::Domain(format!("n_asymptotic requires T > 1, got {t}")));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(t / two_pi * (t / (two_pi * std::f64::consts::E)).ln() + 0.875)
}
