//! Segmented odd-only sieve, exact prime counting, first-occurrence prime gaps
//! and the gap-based lower bound on `v`.

use std::io::{self, Write};

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::exact_arith::{is_prime_u64, ExactRational};
use crate::rigorous::Interval;

/// Odd entries per sieve segment.
pub const SEGMENT_ENTRIES: u64 = 1 << 22;
const SEGMENT_WORDS: usize = (SEGMENT_ENTRIES / 64) as usize;
/// Spacing of stored prime counts.
pub const PI_CHECKPOINT: u64 = 1 << 20;
const CHECKPOINT_WORDS: usize = (PI_CHECKPOINT / 2 / 64) as usize;
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

/// First-occurrence record gaps as published in prime-gap tables, for
/// cross-checking sieve output only.
pub const KNOWN_MAXIMAL_GAPS: &[(u64, u64)] = &[
    (1, 2),
    (2, 3),
    (4, 7),
    (6, 23),
    (8, 89),
    (14, 113),
    (18, 523),
    (20, 887),
    (22, 1129),
    (34, 1327),
    (36, 9551),
    (44, 15683),
    (52, 19609),
    (72, 31397),
    (86, 155921),
    (96, 360653),
    (112, 370261),
    (114, 492113),
    (118, 1349533),
    (132, 1357201),
    (148, 2010733),
    (154, 4652353),
    (180, 17051707),
    (210, 20831323),
    (220, 47326693),
    (222, 122164747),
    (234, 189695659),
    (248, 191912783),
    (250, 387096133),
    (282, 436273009),
    (288, 1294268491),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrimeError {
    #[error("sieve to {limit} needs {needed} bytes, over the {budget}-byte memory budget")]
    MemoryBudget {
        limit: u64,
        needed: u64,
        budget: u64,
    },
    #[error("no prime gap of length >= {s} starts below {limit}; raise the sieve limit")]
    NotFoundBelowLimit { s: u64, limit: u64 },
    #[error("{x} is beyond the sieve limit {limit}")]
    OutOfRange { x: u64, limit: u64 },
    #[error("gap length must be at least 2, got {0}")]
    GapTooShort(u64),
    #[error("interval ({start}, {end}] contains the prime {prime}")]
    NotPrimeFree { start: u64, end: u64, prime: u64 },
}

/// A record gap: `first_prime` is the smallest prime followed by a gap of
/// exactly `gap`, and every earlier gap is shorter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapRecord {
    pub gap: u64,
    pub first_prime: u64,
}

/// All primes up to `n` by a plain sieve.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Odd primes usable for crossing off up to `limit`.
fn base_primes(limit: u64) -> Vec<u64> {
    primes_up_to(isqrt(limit)).into_iter().skip(1).collect()
}

/// Primality bits for the odd numbers `2i+1`, `i` in `[lo, lo + 64*words)`,
/// restricted to numbers `<= limit`. Bit `i - lo` is set iff `2i+1` is prime.
fn sieve_segment(lo: u64, words: usize, limit: u64, base: &[u64]) -> Vec<u64> {
    let mut seg = vec![!0u64; words];
    let len = words as u64 * 64;
    let hi = lo + len; // exclusive, in index space
    for &p in base {
        let p2 = p * p;
        if p2 > limit {
            break;
        }
        // First odd multiple of p that is >= max(p^2, 2lo+1).
        let start_n = {
            let low_n = 2 * lo + 1;
            let m = low_n.div_ceil(p) * p;
            let m = if m % 2 == 0 { m + p } else { m };
            m.max(p2)
        };
        let mut i = start_n / 2;
        while i < hi {
            let off = i - lo;
            seg[(off / 64) as usize] &= !(1u64 << (off % 64));
            i += p;
        }
    }
    if lo == 0 {
        seg[0] &= !1; // 1 is not prime
    }
    // Clear entries above the limit.
    let last = if limit == 0 { 0 } else { (limit - 1) / 2 };
    if hi > last + 1 {
        let keep = (last + 1).saturating_sub(lo);
        for (w, word) in seg.iter_mut().enumerate() {
            let base_i = w as u64 * 64;
            if base_i >= keep {
                *word = 0;
            } else if base_i + 64 > keep {
                *word &= (1u64 << (keep - base_i)) - 1;
            }
        }
    }
    seg
}

/// Primality of every integer up to `limit`, stored for odd numbers only,
/// with prime counts every [`PI_CHECKPOINT`] integers.
#[derive(Debug, Clone)]
pub struct SieveTable {
    limit: u64,
    bits: Vec<u64>,
    /// Number of odd primes below `c * PI_CHECKPOINT`.
    checkpoints: Vec<u64>,
}

/// Bytes a [`SieveTable`] up to `limit` occupies.
pub fn sieve_bytes(limit: u64) -> u64 {
    let entries = limit / 2 + 1;
    let words = entries.div_ceil(64);
    words * 8 + (limit / PI_CHECKPOINT + 2) * 8
}

pub fn build_sieve(limit: u64) -> Result<SieveTable, PrimeError> {
    build_sieve_with_budget(limit, DEFAULT_MEMORY_BUDGET)
}

pub fn build_sieve_with_budget(limit: u64, budget: u64) -> Result<SieveTable, PrimeError> {
    let limit = limit.max(2);
    let needed = sieve_bytes(limit);
    if needed > budget {
        return Err(PrimeError::MemoryBudget {
            limit,
            needed,
            budget,
        });
    }
    let entries = limit / 2 + 1;
    let words = entries.div_ceil(64) as usize;
    let base = base_primes(limit);
    let mut bits = vec![0u64; words];
    bits.par_chunks_mut(SEGMENT_WORDS)
        .enumerate()
        .for_each(|(k, chunk)| {
            let lo = k as u64 * SEGMENT_ENTRIES;
            chunk.copy_from_slice(&sieve_segment(lo, chunk.len(), limit, &base));
        });
    let mut checkpoints = Vec::with_capacity(words / CHECKPOINT_WORDS + 2);
    let mut running = 0u64;
    for block in bits.chunks(CHECKPOINT_WORDS) {
        checkpoints.push(running);
        running += block.iter().map(|w| w.count_ones() as u64).sum::<u64>();
    }
    checkpoints.push(running);
    Ok(SieveTable {
        limit,
        bits,
        checkpoints,
    })
}

impl SieveTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, n: u64) -> Result<bool, PrimeError> {
        if n > self.limit {
            return Err(PrimeError::OutOfRange {
                x: n,
                limit: self.limit,
            });
        }
        Ok(match n {
            2 => true,
            _ if n.is_multiple_of(2) => false,
            _ => {
                let i = n / 2;
                self.bits[(i / 64) as usize] >> (i % 64) & 1 == 1
            }
        })
    }

    /// Exact `pi(x)`.
    pub fn pi(&self, x: u64) -> Result<u64, PrimeError> {
        if x > self.limit {
            return Err(PrimeError::OutOfRange {
                x,
                limit: self.limit,
            });
        }
        if x < 2 {
            return Ok(0);
        }
        // Odd n <= x have index n/2 <= (x-1)/2.
        let last = (x - 1) / 2;
        let c = (last / 64) as usize / CHECKPOINT_WORDS;
        let mut count = self.checkpoints[c];
        let first_word = c * CHECKPOINT_WORDS;
        let last_word = (last / 64) as usize;
        for w in first_word..last_word {
            count += self.bits[w].count_ones() as u64;
        }
        let r = last % 64;
        let mask = if r == 63 { !0 } else { (1u64 << (r + 1)) - 1 };
        count += (self.bits[last_word] & mask).count_ones() as u64;
        Ok(count + 1)
    }

    /// Primes in `[lo, hi]`, ascending.
    pub fn primes_in(&self, lo: u64, hi: u64) -> Result<Vec<u64>, PrimeError> {
        let hi = hi.min(self.limit);
        let mut out = Vec::new();
        for n in lo..=hi {
            if self.is_prime(n)? {
                out.push(n);
            }
        }
        Ok(out)
    }
}

/// Primes up to `limit` in ascending order, streamed one segment batch at a
/// time; `visit` returns `false` to stop early.
pub fn for_each_prime(limit: u64, mut visit: impl FnMut(u64) -> bool) {
    if limit < 2 || !visit(2) {
        return;
    }
    let base = base_primes(limit);
    let entries = limit / 2 + 1;
    let segments = entries.div_ceil(SEGMENT_ENTRIES);
    let batch = (rayon::current_num_threads() as u64 * 2).max(2);
    let mut k = 0;
    while k < segments {
        let end = (k + batch).min(segments);
        let segs: Vec<(u64, Vec<u64>)> = (k..end)
            .into_par_iter()
            .map(|j| {
                let lo = j * SEGMENT_ENTRIES;
                let words = ((entries - lo).min(SEGMENT_ENTRIES)).div_ceil(64) as usize;
                (lo, sieve_segment(lo, words, limit, &base))
            })
            .collect();
        for (lo, seg) in segs {
            for (w, &word) in seg.iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    let b = word.trailing_zeros() as u64;
                    word &= word - 1;
                    let n = 2 * (lo + w as u64 * 64 + b) + 1;
                    if !visit(n) {
                        return;
                    }
                }
            }
        }
        k = end;
    }
}

/// Record gaps among primes up to `limit` (both ends of each gap `<= limit`).
/// With `stop_at = Some(g)`, scanning ends at the first gap `>= g`.
pub fn first_occurrence_gaps(limit: u64, stop_at: Option<u64>) -> Vec<GapRecord> {
    let mut records = Vec::new();
    let mut prev: Option<u64> = None;
    let mut best = 0u64;
    for_each_prime(limit, |p| {
        if let Some(q) = prev {
            let g = p - q;
            if g > best {
                best = g;
                records.push(GapRecord {
                    gap: g,
                    first_prime: q,
                });
                if stop_at.is_some_and(|t| g >= t) {
                    return false;
                }
            }
        }
        prev = Some(p);
        true
    });
    records
}

/// `rho_s` read off a record-gap table: the first record with gap `>= s`.
pub fn rho_from_table(records: &[GapRecord], s: u64) -> Option<u64> {
    records.iter().find(|r| r.gap >= s).map(|r| r.first_prime)
}

/// `rho_s = min { p_n : p_{n+1} - p_n >= s }`, from a fresh sieve to `limit`,
/// with the prime-free interval `(rho_s, rho_s + s - 1]` checked independently.
pub fn rho(s: u64, limit: u64) -> Result<u64, PrimeError> {
    if s < 2 {
        return Err(PrimeError::GapTooShort(s));
    }
    let records = first_occurrence_gaps(limit, Some(s));
    let r = rho_from_table(&records, s).ok_or(PrimeError::NotFoundBelowLimit { s, limit })?;
    verify_prime_free(r, s)?;
    Ok(r)
}

/// Checks by Miller-Rabin that `(n, n + s - 1]` holds no prime and that `n`
/// itself is prime.
pub fn verify_prime_free(n: u64, s: u64) -> Result<(), PrimeError> {
    let end = n + s - 1;
    for m in n + 1..=end {
        if is_prime_u64(m) {
            return Err(PrimeError::NotPrimeFree {
                start: n,
                end,
                prime: m,
            });
        }
    }
    assert!(is_prime_u64(n), "rho candidate {n} is not prime");
    Ok(())
}

/// The smallest `n >= 1` with `(n, n + s - 1]` prime-free, by direct scan.
pub fn rho_by_scan(s: u64) -> u64 {
    assert!(s >= 2);
    let mut n = 1u64;
    loop {
        // Largest prime in (n, n+s-1], scanning downward.
        match (n + 1..=n + s - 1).rev().find(|&m| is_prime_u64(m)) {
            None => return n,
            Some(p) => n = p,
        }
    }
}

/// `rho_{s+1} + 2s`, a lower bound on `v`.
pub fn v_lower(s: u64, limit: u64) -> Result<u64, PrimeError> {
    Ok(rho(s + 1, limit)? + 2 * s)
}

/// `5000 s (14.6 + ln s)^2`, rounded down.
pub fn dusart_gap_lower(s: u64, bits: u32) -> ExactRational {
    assert!(s >= 288, "the gap bound needs s >= 288");
    let t = Interval::from_rational(
        &ExactRational::new(BigInt::from(146), BigInt::from(10)),
        bits,
    )
    .add(&Interval::ln_int(&BigInt::from(s), bits));
    t.mul(&t).mul_int(&BigInt::from(5000 * s)).lower()
}

/// Writes `gap<TAB>first_prime` lines.
pub fn write_gap_table<W: Write>(records: &[GapRecord], mut out: W) -> io::Result<()> {
    for r in records {
        writeln!(out, "{}\t{}", r.gap, r.first_prime)?;
    }
    Ok(())
}

/// Parses the output of [`write_gap_table`].
pub fn read_gap_table(text: &str) -> Result<Vec<GapRecord>, String> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split('\t');
            let gap = it.next().and_then(|g| g.trim().parse().ok());
            let p = it.next().and_then(|g| g.trim().parse().ok());
            match (gap, p, it.next()) {
                (Some(gap), Some(first_prime), None) => Ok(GapRecord { gap, first_prime }),
                _ => Err(format!("malformed gap line: {l:?}")),
            }
        })
        .collect()
}
