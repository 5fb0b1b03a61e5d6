// SPDX-License-Identifier: Apache-2.0

//! Dense vectors over the integers `1..=N`.

use std::io::{Read, Write};
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::net::ModelVariant;

/// Dense real vector indexed by the integers `1..=N`.
///
/// Storage carries one padding slot at index 0 so that `v[n]` addresses the
/// integer `n` directly; the padding is always zero.
/// Compensated (Neumaier) sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    values: Vec<f64>,
}

impl ProbVector {
    pub fn zeros(n_max: usize) -> Self {
        Self {
            values: vec![0.0; n_max + 1],
        }
    }

    /// `e / N`.
    pub fn uniform(n_max: usize) -> Self {
        let mut values = vec![1.0 / n_max as f64; n_max + 1];
        values[0] = 0.0;
        Self { values }
    }

    /// Builds from values for `n = 1..=N`.
    pub fn from_values(values: &[f64]) -> Self {
        let mut v = Vec::with_capacity(values.len() + 1);
        v.push(0.0);
        v.extend_from_slice(values);
        Self { values: v }
    }

    pub(crate) fn from_padded(values: Vec<f64>) -> Self {
        debug_assert_eq!(values[0], 0.0);
        Self { values }
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    /// Values for `n = 1..=N`.
    pub fn as_slice(&self) -> &[f64] {
        &self.values[1..]
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values[1..]
    }

    pub fn padded(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn padded_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(mut self) -> Vec<f64> {
        self.values.remove(0);
        self.values
    }

    pub fn sum(&self) -> f64 {
        compensated_sum(self.as_slice().iter().copied())
    }

    pub fn l1_norm(&self) -> f64 {
        compensated_sum(self.as_slice().iter().map(|x| x.abs()))
    }

    pub fn l1_distance(&self, other: &ProbVector) -> f64 {
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    pub fn linf_distance(&self, other: &ProbVector) -> f64 {
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn scale(&mut self, factor: f64) {
        self.as_mut_slice().iter_mut().for_each(|x| *x *= factor);
    }

    /// Rescales to unit L1 norm and returns the previous norm.
    pub fn normalize(&mut self) -> f64 {
        let norm = self.l1_norm();
        if norm > 0.0 {
            self.scale(1.0 / norm);
        }
        norm
    }

    /// `self += other`.
    pub fn add_assign(&mut self, other: &ProbVector) {
        self.values
            .iter_mut()
            .zip(&other.values)
            .for_each(|(a, b)| *a += b);
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        self.as_slice().iter().filter(|&&x| x != 0.0).count()
    }

    /// Largest `n` with a nonzero entry, 0 for the zero vector.
    pub fn support_max(&self) -> usize {
        self.values.iter().rposition(|&x| x != 0.0).unwrap_or(0)
    }
}

impl Index<usize> for ProbVector {
    type Output = f64;

    #[inline]
    fn index(&self, n: usize) -> &f64 {
        &self.values[n]
    }
}

impl IndexMut<usize> for ProbVector {
    #[inline]
    fn index_mut(&mut self, n: usize) -> &mut f64 {
        &mut self.values[n]
    }
}

/// What a vector snapshot holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorKind {
    PageRank,
    /// The Krylov vector `S0^j v`.
    Krylov(u8),
}

impl VectorKind {
    fn to_byte(self) -> u8 {
        match self {
            VectorKind::PageRank => 0,
            VectorKind::Krylov(j) => {
                assert!(j < 255, "Krylov index out of range");
                j + 1
            }
        }
    }

    fn from_byte(b: u8) -> Self {
        match b {
            0 => VectorKind::PageRank,
            j => VectorKind::Krylov(j - 1),
        }
    }
}

/// A vector together with the network it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub variant: ModelVariant,
    pub kind: VectorKind,
    pub vector: ProbVector,
}

const VEC_MAGIC: &[u8; 8] = b"IDIVVEC1";

impl Snapshot {
    /// Magic, LE u64 N, u8 variant, u8 kind, then N LE f64 values.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(VEC_MAGIC)?;
        w.write_all(&(self.vector.n_max() as u64).to_le_bytes())?;
        w.write_all(&[self.variant.tag(), self.kind.to_byte()])?;
        let mut buf = Vec::with_capacity(8 * 8192);
        for chunk in self.vector.as_slice().chunks(8192) {
            buf.clear();
            for x in chunk {
                buf.extend_from_slice(&x.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut head = [0u8; 18];
        r.read_exact(&mut head)
            .map_err(|_| Error::Format("truncated vector header".into()))?;
        if &head[..8] != VEC_MAGIC {
            return Err(Error::Format("bad magic, expected IDIVVEC1".into()));
        }
        let n = u64::from_le_bytes(head[8..16].try_into().unwrap());
        if n == 0 || n > crate::net::MAX_N {
            return Err(Error::Format(format!("invalid vector length {n}")));
        }
        let n = n as usize;
        let variant = ModelVariant::from_tag(head[16])?;
        let kind = VectorKind::from_byte(head[17]);

        let mut values = Vec::with_capacity(n + 1);
        values.push(0.0);
        let mut buf = vec![0u8; 8 * 8192];
        let mut remaining = n;
        while remaining > 0 {
            let take = remaining.min(8192);
            r.read_exact(&mut buf[..8 * take])
                .map_err(|_| Error::Format(format!("expected {n} values, file is short")))?;
            values.extend(
                buf[..8 * take]
                    .chunks_exact(8)
                    .map(|b| f64::from_le_bytes(b.try_into().unwrap())),
            );
            remaining -= take;
        }
        let mut extra = [0u8; 1];
        if r.read(&mut extra)? != 0 {
            return Err(Error::Format("trailing bytes after values".into()));
        }
        Ok(Self {
            variant,
            kind,
            vector: ProbVector::from_padded(values),
        })
    }
}
