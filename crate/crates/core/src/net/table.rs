// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::sieve;

/// Largest supported network size.
pub const MAX_N: u64 = u32::MAX as u64;

/// Which links an integer `n` sends to its divisors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ModelVariant {
    /// `n -> m` weighted by the multiplicity `M(n, m)` for every divisor `1 < m < n`.
    Multiplicity,
    /// `n -> m` with weight one for every divisor `1 < m < n`.
    Simplified,
    /// `n -> p` with weight one for every distinct prime factor `p < n`.
    PrimeFactors,
}

impl ModelVariant {
    pub const ALL: [ModelVariant; 3] = [
        ModelVariant::Multiplicity,
        ModelVariant::Simplified,
        ModelVariant::PrimeFactors,
    ];

    pub fn tag(self) -> u8 {
        match self {
            ModelVariant::Multiplicity => 0,
            ModelVariant::Simplified => 1,
            ModelVariant::PrimeFactors => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(ModelVariant::Multiplicity),
            1 => Ok(ModelVariant::Simplified),
            2 => Ok(ModelVariant::PrimeFactors),
            t => Err(Error::Format(format!("unknown variant tag {t}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelVariant::Multiplicity => "mult",
            ModelVariant::Simplified => "simplified",
            ModelVariant::PrimeFactors => "prime",
        }
    }
}

impl fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Largest `k` with `m^k | n`. Zero when `m` does not divide `n` or `m >= n`.
pub fn multiplicity(n: u64, m: u64) -> u32 {
    if m < 2 || m >= n {
        return 0;
    }
    let mut rest = n;
    let mut k = 0;
    while rest.is_multiple_of(m) {
        rest /= m;
        k += 1;
    }
    k
}

/// Smallest `l >= 1` with `S0^l = 0` for a network of size `n_max`.
pub fn nilpotency_index(n_max: usize, variant: ModelVariant) -> usize {
    match variant {
        ModelVariant::Multiplicity | ModelVariant::Simplified => {
            (usize::BITS - 1 - n_max.max(1).leading_zeros()).max(1) as usize
        }
        ModelVariant::PrimeFactors => {
            if n_max >= 4 {
                2
            } else {
                1
            }
        }
    }
}

/// Per-integer out-link totals; the whole matrix-free representation of `S0`.
///
/// `q(n)` is the column sum of the adjacency matrix at `n`. Zero marks a
/// dangling node (the integer 1 and every prime).
#[derive(Clone, PartialEq, Eq)]
pub struct DivisorCountTable {
    variant: ModelVariant,
    // q[0] is padding so that q[n] is the count for the integer n.
    q: Vec<u32>,
}

impl fmt::Debug for DivisorCountTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DivisorCountTable")
            .field("n_max", &self.n_max())
            .field("variant", &self.variant)
            .finish()
    }
}

fn check_size(n_max: u64) -> Result<usize> {
    if n_max == 0 {
        return Err(Error::InvalidSize(0));
    }
    if n_max > MAX_N {
        return Err(Error::Capacity { n: n_max, max: MAX_N });
    }
    Ok(n_max as usize)
}

impl DivisorCountTable {
    /// Sieve construction in `O(N log N)` time and `N` 32-bit counters.
    pub fn build(n_max: u64, variant: ModelVariant) -> Result<Self> {
        let n = check_size(n_max)?;
        let mut q = vec![0u32; n + 1];
        match variant {
            ModelVariant::Multiplicity => {
                for m in 2..=n / 2 {
                    // nu = 1: proper multiples only
                    let mut k = 2 * m;
                    while k <= n {
                        q[k] += 1;
                        k += m;
                    }
                    // nu >= 2: every multiple of m^nu already exceeds m
                    let mut pw = m.saturating_mul(m);
                    while pw <= n {
                        let mut k = pw;
                        while k <= n {
                            q[k] += 1;
                            k += pw;
                        }
                        pw = pw.saturating_mul(m);
                    }
                }
            }
            ModelVariant::Simplified => {
                for m in 2..=n / 2 {
                    let mut k = 2 * m;
                    while k <= n {
                        q[k] += 1;
                        k += m;
                    }
                }
            }
            ModelVariant::PrimeFactors => {
                let flags = sieve::prime_flags(n / 2);
                for (p, _) in flags.iter().enumerate().filter(|(_, &f)| f) {
                    let mut k = 2 * p;
                    while k <= n {
                        q[k] += 1;
                        k += p;
                    }
                }
            }
        }
        Ok(Self { variant, q })
    }

    /// Wraps raw counts for `n = 1..=N`.
    pub fn from_counts(variant: ModelVariant, counts: &[u32]) -> Result<Self> {
        check_size(counts.len() as u64)?;
        let mut q = Vec::with_capacity(counts.len() + 1);
        q.push(0);
        q.extend_from_slice(counts);
        Ok(Self { variant, q })
    }

    pub fn n_max(&self) -> usize {
        self.q.len() - 1
    }

    pub fn variant(&self) -> ModelVariant {
        self.variant
    }

    /// Count for integer `n` (1-based).
    #[inline]
    pub fn q(&self, n: usize) -> u32 {
        self.q[n]
    }

    /// Counts with a padding slot at index 0, so `padded()[n] == q(n)`.
    #[inline]
    pub fn padded(&self) -> &[u32] {
        &self.q
    }

    /// Counts for `n = 1..=N`.
    pub fn counts(&self) -> &[u32] {
        &self.q[1..]
    }

    #[inline]
    pub fn is_dangling(&self, n: usize) -> bool {
        self.q[n] == 0
    }

    pub fn nilpotency_index(&self) -> usize {
        nilpotency_index(self.n_max(), self.variant)
    }

    pub fn stats(&self) -> NetworkStats {
        link_count(self)
    }

    const MAGIC: &'static [u8; 8] = b"IDIVNET1";

    /// Binary cache format: magic, LE u64 N, u8 variant tag, N LE u32 counts.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(Self::MAGIC)?;
        w.write_all(&(self.n_max() as u64).to_le_bytes())?;
        w.write_all(&[self.variant.tag()])?;
        let mut buf = Vec::with_capacity(4 * 8192);
        for chunk in self.counts().chunks(8192) {
            buf.clear();
            for c in chunk {
                buf.extend_from_slice(&c.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)
            .map_err(|_| Error::Format("truncated header".into()))?;
        if &magic != Self::MAGIC {
            return Err(Error::Format("bad magic, expected IDIVNET1".into()));
        }
        let mut n_buf = [0u8; 8];
        let mut tag = [0u8; 1];
        r.read_exact(&mut n_buf)
            .and_then(|_| r.read_exact(&mut tag))
            .map_err(|_| Error::Format("truncated header".into()))?;
        let n = check_size(u64::from_le_bytes(n_buf))?;
        let variant = ModelVariant::from_tag(tag[0])?;

        let mut q = Vec::with_capacity(n + 1);
        q.push(0);
        let mut buf = vec![0u8; 4 * 8192];
        let mut remaining = n;
        while remaining > 0 {
            let take = remaining.min(8192);
            r.read_exact(&mut buf[..4 * take])
                .map_err(|_| Error::Format(format!("expected {n} counts, file is short")))?;
            q.extend(
                buf[..4 * take]
                    .chunks_exact(4)
                    .map(|b| u32::from_le_bytes([b[0], b[1], b[2], b[3]])),
            );
            remaining -= take;
        }
        let mut extra = [0u8; 1];
        if r.read(&mut extra)? != 0 {
            return Err(Error::Format("trailing bytes after counts".into()));
        }
        Ok(Self { variant, q })
    }
}

/// Link totals of a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct NetworkStats {
    pub n_max: usize,
    pub variant: ModelVariant,
    /// Total link count, with multiplicity where the variant has it.
    pub n_links: u64,
    pub n_dangling: usize,
    /// Nilpotency index `l` of `S0`.
    pub l: usize,
}

pub fn link_count(table: &DivisorCountTable) -> NetworkStats {
    let (n_links, n_dangling) = table
        .counts()
        .iter()
        .fold((0u64, 0usize), |(s, d), &c| (s + c as u64, d + (c == 0) as usize));
    NetworkStats {
        n_max: table.n_max(),
        variant: table.variant(),
        n_links,
        n_dangling,
        l: table.nilpotency_index(),
    }
}
