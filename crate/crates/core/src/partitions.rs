//! Partition counts, Dyson-rank distributions and `NT(r, k, n)`.
//!
//! `P(n, l, m)` counts partitions of `n` into exactly `m` parts, each at most
//! `l`, and satisfies `P(n, l, m) = P(n, l-1, m) + P(n-l, l, m-1)`. The
//! second term, `P(n-l, l, m-1)`, counts partitions of `n` whose largest
//! part is exactly `l` with exactly `m` parts; their rank is `l - m`.
//! The table is built over `l` in the outer loop with a single `(n, m)`
//! slice updated in place, and rank aggregates are accumulated on the fly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Tables up to this size also keep the full `P(n, l, m)` cube.
pub const FULL_TABLE_LIMIT: usize = 60;

/// Explicit enumeration is refused above this size.
pub const ENUMERATION_LIMIT: usize = 40;

#[derive(Clone, Debug)]
pub struct PartitionTable {
    nmax: usize,
    /// `by_rank[n][t + n]`: number of partitions of `n` with rank `t`.
    by_rank: Vec<Vec<BigInt>>,
    /// `parts_by_rank[n][t + n]`: total number of parts over those partitions.
    parts_by_rank: Vec<Vec<BigInt>>,
    full: Option<Vec<BigInt>>,
}

impl PartitionTable {
    pub fn build(nmax: usize) -> Self {
        let dim = nmax + 1;
        let mut by_rank: Vec<Vec<BigInt>> = (0..dim).map(|n| vec![BigInt::zero(); 2 * n + 1]).collect();
        let mut parts_by_rank = by_rank.clone();
        // the empty partition: rank 0, no parts
        by_rank[0][0] = BigInt::one();

        let keep_full = nmax <= FULL_TABLE_LIMIT;
        let mut full = keep_full.then(|| vec![BigInt::zero(); dim * dim * dim]);

        // slice[n][m] = P(n, l, m) for the current l
        let mut slice = vec![vec![BigInt::zero(); dim]; dim];
        slice[0][0] = BigInt::one();
        if let Some(full) = full.as_mut() {
            full[0] = BigInt::one();
        }
        for l in 1..dim {
            for n in l..dim {
                for m in 1..=n {
                    let exact = slice[n - l][m - 1].clone();
                    if exact.is_zero() {
                        continue;
                    }
                    let idx = (l as i64 - m as i64 + n as i64) as usize;
                    parts_by_rank[n][idx] += &exact * m;
                    by_rank[n][idx] += &exact;
                    slice[n][m] += exact;
                }
            }
            if let Some(full) = full.as_mut() {
                for n in 0..dim {
                    for m in 0..dim {
                        full[(n * dim + l) * dim + m] = slice[n][m].clone();
                    }
                }
            }
        }
        Self { nmax, by_rank, parts_by_rank, full }
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n > self.nmax {
            return Err(Error::OutOfRange { what: "n", value: n as i64, limit: self.nmax as i64 });
        }
        Ok(())
    }

    /// `P(n, l, m)`: partitions of `n` into exactly `m` parts each `<= l`.
    /// Only available for tables built with `nmax <= FULL_TABLE_LIMIT`.
    pub fn bounded_count(&self, n: i64, l: usize, m: usize) -> Result<BigInt> {
        let full = self.full.as_ref().ok_or_else(|| {
            Error::InvalidArgument(format!("full P(n, l, m) storage is kept only for nmax <= {FULL_TABLE_LIMIT}"))
        })?;
        if n < 0 {
            return Ok(BigInt::zero());
        }
        let n = n as usize;
        self.check_n(n)?;
        let dim = self.nmax + 1;
        let l = l.min(self.nmax);
        if m > self.nmax {
            return Ok(BigInt::zero());
        }
        Ok(full[(n * dim + l) * dim + m].clone())
    }

    /// Number of partitions of `n` with Dyson rank exactly `t`.
    pub fn rank_count(&self, t: i64, n: usize) -> Result<BigInt> {
        self.check_n(n)?;
        Ok(rank_slot(&self.by_rank[n], t, n).cloned().unwrap_or_default())
    }

    /// `NT(r, k, n)`: total number of parts over the partitions of `n`
    /// whose rank is `r` mod `k`.
    pub fn nt(&self, r: u32, k: u32, n: usize) -> Result<BigInt> {
        self.check_n(n)?;
        if k == 0 || r >= k {
            return Err(Error::InvalidArgument(format!("residue {r} modulo {k}")));
        }
        let n_i = n as i64;
        Ok(self.parts_by_rank[n]
            .iter()
            .enumerate()
            .filter(|(idx, _)| (*idx as i64 - n_i).mod_floor(&(k as i64)) == r as i64)
            .map(|(_, v)| v)
            .sum())
    }

    /// Total number of parts over all partitions of `n`.
    pub fn total_parts(&self, n: usize) -> Result<BigInt> {
        self.check_n(n)?;
        Ok(self.parts_by_rank[n].iter().sum())
    }

    /// `p(n)` read back from the rank distribution.
    pub fn partition_count(&self, n: usize) -> Result<BigInt> {
        self.check_n(n)?;
        Ok(self.by_rank[n].iter().sum())
    }
}

fn rank_slot(row: &[BigInt], t: i64, n: usize) -> Option<&BigInt> {
    let idx = t + n as i64;
    (0..row.len() as i64).contains(&idx).then(|| &row[idx as usize])
}

/// `p(0), ..., p(nmax)` by Euler's pentagonal recurrence.
pub fn p_of_n(nmax: usize) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = Vec::with_capacity(nmax + 1);
    p.push(BigInt::one());
    for n in 1..=nmax {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let mut term = p[n - g1].clone();
            if g2 <= n {
                term += &p[n - g2];
            }
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc);
    }
    p
}

/// All partitions of `n`, largest part first, in decreasing lexicographic
/// order: `[4], [3,1], [2,2], [2,1,1], [1,1,1,1]`.
pub fn enum_partitions(n: usize) -> Result<Partitions> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::OutOfRange { what: "enumeration size", value: n as i64, limit: ENUMERATION_LIMIT as i64 });
    }
    Ok(Partitions { next: Some(if n == 0 { Vec::new() } else { vec![n as u32] }) })
}

#[derive(Clone, Debug)]
pub struct Partitions {
    next: Option<Vec<u32>>,
}

impl Iterator for Partitions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.next.take()?;
        let mut a = current.clone();
        let ones = a.iter().rev().take_while(|&&x| x == 1).count();
        a.truncate(a.len() - ones);
        if let Some(last) = a.pop() {
            let v = last - 1;
            let mut remaining = ones as u32 + last;
            while remaining >= v {
                a.push(v);
                remaining -= v;
            }
            if remaining > 0 {
                a.push(remaining);
            }
            self.next = Some(a);
        }
        Some(current)
    }
}

/// Dyson rank: largest part minus number of parts (0 for the empty partition).
pub fn rank(partition: &[u32]) -> i64 {
    partition.first().map_or(0, |&l| l as i64 - partition.len() as i64)
}

/// `NT(r, k, n)` by explicit enumeration.
pub fn nt_enum(r: u32, k: u32, n: usize) -> Result<BigInt> {
    if k == 0 || r >= k {
        return Err(Error::InvalidArgument(format!("residue {r} modulo {k}")));
    }
    let total: u64 =
        enum_partitions(n)?.filter(|p| rank(p).mod_floor(&(k as i64)) == r as i64).map(|p| p.len() as u64).sum();
    Ok(BigInt::from(total))
}
