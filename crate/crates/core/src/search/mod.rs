//! Exhaustive search for triples `(s, x, y)` with `y` in `[x+s+2, 2x+1]` and
//! `alpha_{s,1}, ..., alpha_{s,i_max}` all integral.
//!
//! The outer loop runs over `x`. Since `y | s x(x+1)` iff `y / gcd(y, x(x+1))`
//! divides `s`, every candidate is `y = d g` with `d | x(x+1)`, `g <= s_max` and
//! `gcd(g, x(x+1)/d) = 1`; the admissible `s` are then the multiples of `g`.
//! Higher `alpha` are tested through the `s`-independent reduced denominator
//! `A_i = y^(i) / gcd(y^(i), x^(i) (x+1)^(i))`, which must divide `C(s, i)`.

mod checkpoint;
mod factor;

use std::fmt;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use thiserror::Error;

use crate::design_functions::{
    alpha_all_integral, alpha_xy, intersection_numbers, DesignCandidate, IntersectionNumbers,
};
use crate::exact_arith::is_integral;
use crate::prime_engine::{isqrt, primes_up_to};

pub use checkpoint::{
    attested_coverage, parse_checkpoint, read_checkpoint, write_chunk, CheckpointWriter,
};
pub use factor::{factor_range, Factored};

pub const DEFAULT_CHUNK: u64 = 1 << 24;
pub const DEFAULT_I_MAX: u32 = 6;
/// Largest supported `s`: the primes up to it must fit a 128-bit mask.
pub const MAX_S: u32 = 719;
const BLOCK: u64 = 1 << 15;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("checkpoint {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("checkpoint {path}, line {line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChunkStatus {
    Pending,
    Done,
}

impl fmt::Display for ChunkStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChunkStatus::Pending => "pending",
            ChunkStatus::Done => "done",
        })
    }
}

/// A triple passing the filter, with its exact `alpha` values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hit {
    pub s: u32,
    pub x: u64,
    pub y: u64,
    pub alphas: Vec<BigInt>,
}

impl Hit {
    /// The hit at `(s, x, y)` if `alpha_{s,1..i_max}` are all integers.
    pub fn evaluate(s: u32, x: u64, y: u64, i_max: u32) -> Option<Hit> {
        let mut alphas = Vec::with_capacity(i_max as usize);
        for i in 1..=i_max {
            let a = alpha_xy(s, x as i64, y as i64, i).ok()?;
            if !is_integral(&a) {
                return None;
            }
            alphas.push(a.to_integer());
        }
        Some(Hit { s, x, y, alphas })
    }

    /// Whether the Wilson polynomial at the matching `(v, k)` has all its
    /// roots integral in `[0, k-1]`; `None` if it cannot be evaluated.
    pub fn intersection_integral(&self) -> Option<bool> {
        let c = DesignCandidate::new(self.s, self.v() as i64, self.k() as i64);
        match intersection_numbers(&c) {
            Ok(IntersectionNumbers::Integral(_)) => Some(true),
            Ok(IntersectionNumbers::NotAllIntegral) => Some(false),
            Err(_) => None,
        }
    }

    pub fn v(&self) -> u64 {
        self.y + 2 * self.s as u64 - 1
    }

    pub fn k(&self) -> u64 {
        self.x + self.s as u64
    }

    fn key(&self) -> (u32, u64, u64) {
        (self.s, self.x, self.y)
    }
}

/// One rectangle `[s_lo, s_hi] x [x_lo, x_hi]` of the search space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchChunk {
    pub s_lo: u32,
    pub s_hi: u32,
    pub x_lo: u64,
    pub x_hi: u64,
    pub status: ChunkStatus,
    pub hits: Vec<Hit>,
}

impl SearchChunk {
    pub fn pending(s_lo: u32, s_hi: u32, x_lo: u64, x_hi: u64) -> Self {
        SearchChunk {
            s_lo,
            s_hi,
            x_lo,
            x_hi,
            status: ChunkStatus::Pending,
            hits: Vec::new(),
        }
    }

    pub fn same_region(&self, o: &SearchChunk) -> bool {
        (self.s_lo, self.s_hi, self.x_lo, self.x_hi) == (o.s_lo, o.s_hi, o.x_lo, o.x_hi)
    }
}

/// Tables shared by every `x` of a search.
struct Kernel {
    s_lo: u32,
    s_hi: u32,
    i_max: u32,
    /// Position of each prime `<= s_hi` in the mask, plus one; zero otherwise.
    small_index: Vec<u8>,
    /// Mask of the primes dividing `g`, for `g <= s_hi`.
    g_mask: Vec<u128>,
    /// `C(s, i)` for `s <= s_hi`, `i <= i_max`.
    binom: Vec<Vec<u64>>,
    /// `max_s C(s, i)` over the searched `s`.
    cap: Vec<u64>,
    factor_primes: Vec<u64>,
}

impl Kernel {
    fn new(s_lo: u32, s_hi: u32, i_max: u32, x_hi: u64) -> Kernel {
        assert!(
            1 <= s_lo && s_lo <= s_hi && s_hi <= MAX_S,
            "s range [{s_lo}, {s_hi}] unsupported"
        );
        assert!((1..=8).contains(&i_max), "i_max must be in [1, 8]");
        let small = primes_up_to(s_hi as u64);
        let mut small_index = vec![0u8; s_hi as usize + 1];
        for (i, &p) in small.iter().enumerate() {
            small_index[p as usize] = i as u8 + 1;
        }
        let g_mask = (0..=s_hi as u64)
            .map(|g| {
                small
                    .iter()
                    .enumerate()
                    .filter(|&(_, &p)| g > 0 && g % p == 0)
                    .fold(0u128, |m, (i, _)| m | 1 << i)
            })
            .collect();
        let binom: Vec<Vec<u64>> = (0..=s_hi as u64)
            .map(|s| {
                let mut row = vec![1u64; i_max as usize + 1];
                for i in 1..=i_max as u64 {
                    row[i as usize] = if i > s {
                        0
                    } else {
                        (row[i as usize - 1] as u128 * (s - i + 1) as u128 / i as u128) as u64
                    };
                }
                row
            })
            .collect();
        let cap = (0..=i_max as usize)
            .map(|i| (s_lo..=s_hi).map(|s| binom[s as usize][i]).max().unwrap())
            .collect();
        Kernel {
            s_lo,
            s_hi,
            i_max,
            small_index,
            g_mask,
            binom,
            cap,
            factor_primes: primes_up_to(isqrt(x_hi + 2) + 1),
        }
    }

    fn small_bit(&self, p: u64) -> u128 {
        if p <= self.s_hi as u64 {
            match self.small_index[p as usize] {
                0 => 0,
                i => 1 << (i - 1),
            }
        } else {
            0
        }
    }

    fn run_block(&self, x_lo: u64, x_hi: u64) -> Vec<Hit> {
        let facs = factor_range(x_lo, (x_hi - x_lo + 3) as usize, &self.factor_primes);
        let mut hits = Vec::new();
        let mut pf: Vec<(u64, u32, u128)> = Vec::with_capacity(2 * factor::MAX_DISTINCT);
        let mut next = GcdTable::default();
        for (j, x) in (x_lo..=x_hi).enumerate() {
            pf.clear();
            for (p, e) in facs[j].iter().chain(facs[j + 1].iter()) {
                pf.push((p, e, self.small_bit(p)));
            }
            next.fill(&facs[j], &facs[j + 1], &facs[j + 2]);
            self.visit_x(x, &pf, &next, &mut hits);
        }
        hits
    }

    fn visit_x(&self, x: u64, pf: &[(u64, u32, u128)], next: &GcdTable, hits: &mut Vec<Hit>) {
        let y_lo = x + self.s_lo as u64 + 2;
        let y_hi = 2 * x + 1;
        if y_lo > y_hi {
            return;
        }
        let d_lo = y_lo.div_ceil(self.s_hi as u64);
        self.divisors(pf, 1, 0, y_hi, &mut |d, mask| {
            if d < d_lo {
                return;
            }
            let g_lo = y_lo.div_ceil(d).max(1);
            let g_hi = (y_hi / d).min(self.s_hi as u64);
            for g in g_lo..=g_hi {
                if self.g_mask[g as usize] & mask != 0 {
                    continue;
                }
                let y = d * g;
                let s_top = (y - x - 2).min(self.s_hi as u64);
                let s_first = (self.s_lo as u64).max(g).div_ceil(g) * g;
                if s_first > s_top {
                    continue;
                }
                self.check_y(x, y, g, s_first, s_top, next, hits);
            }
        });
    }

    /// Divisors `d <= hi` of the number factored in `pf`, each with the mask
    /// of small primes dividing `N / d`.
    fn divisors(
        &self,
        pf: &[(u64, u32, u128)],
        d: u64,
        mask: u128,
        hi: u64,
        f: &mut impl FnMut(u64, u128),
    ) {
        match pf.split_first() {
            None => f(d, mask),
            Some((&(p, e, bit), rest)) => {
                let mut dd = d;
                for j in 0..=e {
                    let m = if j < e { mask | bit } else { mask };
                    self.divisors(rest, dd, m, hi, f);
                    if j < e {
                        match dd.checked_mul(p) {
                            Some(n) if n <= hi => dd = n,
                            _ => break,
                        }
                    }
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn check_y(
        &self,
        x: u64,
        y: u64,
        g: u64,
        s_first: u64,
        s_top: u64,
        next: &GcdTable,
        hits: &mut Vec<Hit>,
    ) {
        let steps = (s_first..=s_top).step_by(g as usize);
        let mut alive: Vec<u64> = if self.i_max >= 2 {
            // y and y + 1 are coprime, so A_2 splits into their two parts.
            let cap = self.cap[2];
            let a1 = (y + 1) / next.gcd(y + 1);
            if a1 > cap {
                return;
            }
            let a2 = a1 * (y / next.gcd(y));
            if a2 > cap {
                return;
            }
            steps
                .filter(|&s| self.binom[s as usize][2].is_multiple_of(a2))
                .collect()
        } else {
            steps.collect()
        };
        for i in 3..=self.i_max {
            if alive.is_empty() {
                return;
            }
            let Some(a) = reduced_denominator(x, y, i, self.cap[i as usize]) else {
                return;
            };
            alive.retain(|&s| self.binom[s as usize][i as usize].is_multiple_of(a));
        }
        for s in alive {
            let hit = Hit::evaluate(s as u32, x, y, self.i_max);
            debug_assert!(
                hit.is_some(),
                "filter disagrees with exact alpha at ({s}, {x}, {y})"
            );
            hits.extend(hit);
        }
    }
}

/// `gcd(m, x (x+1)^2 (x+2))` from the factorisation, using exact division by
/// multiplication with `p^-1 mod 2^64`.
#[derive(Debug, Default)]
struct GcdTable {
    twos: u32,
    /// `(p, e, p^-1 mod 2^64, floor((2^64 - 1) / p))` for odd `p`.
    odd: Vec<(u64, u32, u64, u64)>,
}

impl GcdTable {
    fn fill(&mut self, x: &Factored, x1: &Factored, x2: &Factored) {
        self.twos = 0;
        self.odd.clear();
        for (f, mult) in [(x, 1), (x1, 2), (x2, 1)] {
            for (p, e) in f.iter() {
                if p == 2 {
                    self.twos += e * mult;
                } else {
                    self.odd
                        .push((p, e * mult, inverse_mod_2_64(p), u64::MAX / p));
                }
            }
        }
    }

    fn gcd(&self, m: u64) -> u64 {
        let mut g = 1u64 << m.trailing_zeros().min(self.twos);
        for &(p, e, inv, lim) in &self.odd {
            let mut t = m.wrapping_mul(inv);
            let mut v = 0;
            while v < e && t <= lim {
                g *= p;
                v += 1;
                t = t.wrapping_mul(inv);
            }
        }
        g
    }
}

fn inverse_mod_2_64(p: u64) -> u64 {
    let mut inv = p;
    for _ in 0..5 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
    }
    inv
}

/// `y^(i) / gcd(y^(i), x^(i) (x+1)^(i))` if it is at most `cap`.
fn reduced_denominator(x: u64, y: u64, i: u32, cap: u64) -> Option<u64> {
    let mut den = [1u64; 8];
    for (j, d) in den.iter_mut().enumerate().take(i as usize) {
        *d = y + j as u64;
    }
    for j in 0..i as u64 {
        for mut f in [x + j, x + 1 + j] {
            for d in den.iter_mut().take(i as usize) {
                if f == 1 {
                    break;
                }
                let g = d.gcd(&f);
                *d /= g;
                f /= g;
            }
        }
    }
    let mut prod: u128 = 1;
    for &d in den.iter().take(i as usize) {
        prod *= d as u128;
        if prod > cap as u128 {
            return None;
        }
    }
    Some(prod as u64)
}

/// Runs one chunk to completion. Hits are ordered by `(s, x, y)`.
pub fn search_chunk(chunk: SearchChunk, i_max: u32) -> SearchChunk {
    let mut out = chunk;
    out.hits.clear();
    if out.x_lo <= out.x_hi {
        assert!(out.x_lo >= 1, "x starts at 1");
        let kernel = Kernel::new(out.s_lo, out.s_hi, i_max, out.x_hi);
        let blocks: Vec<(u64, u64)> = (out.x_lo..=out.x_hi)
            .step_by(BLOCK as usize)
            .map(|lo| (lo, (lo + BLOCK - 1).min(out.x_hi)))
            .collect();
        let mut hits: Vec<Hit> = blocks
            .par_iter()
            .flat_map_iter(|&(lo, hi)| kernel.run_block(lo, hi))
            .collect();
        hits.sort_by_key(Hit::key);
        out.hits = hits;
    }
    out.status = ChunkStatus::Done;
    out
}

fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All `y` in `[x+s+2, 2x+1]` dividing `s x (x+1)`, ascending.
pub fn enumerate_candidate_y(s: u32, x: u64) -> Vec<u64> {
    assert!(x >= 1);
    let (lo, hi) = (x + s as u64 + 2, 2 * x + 1);
    if lo > hi {
        return Vec::new();
    }
    let mut pf: Vec<(u64, u32)> = Vec::new();
    for n in [s as u64, x, x + 1] {
        for (p, e) in trial_factor(n) {
            match pf.iter_mut().find(|(q, _)| *q == p) {
                Some(slot) => slot.1 += e,
                None => pf.push((p, e)),
            }
        }
    }
    let mut divs = vec![1u64];
    for (p, e) in pf {
        let mut next = Vec::new();
        for &d in &divs {
            let mut dd = d;
            for _ in 0..=e {
                if dd > hi {
                    break;
                }
                next.push(dd);
                dd *= p;
            }
        }
        divs = next;
    }
    let mut out: Vec<u64> = divs.into_iter().filter(|&d| d >= lo && d <= hi).collect();
    out.sort_unstable();
    out
}

/// Brute-force oracle: every `y` in the window, exact rational `alpha`.
pub fn verify_window(s: u32, x_lo: u64, x_hi: u64, i_max: u32) -> Vec<Hit> {
    let mut out = Vec::new();
    for x in x_lo.max(1)..=x_hi {
        for y in x + s as u64 + 2..=2 * x + 1 {
            if alpha_all_integral(s, x as i64, y as i64, i_max) {
                out.extend(Hit::evaluate(s, x, y, i_max));
            }
        }
    }
    out
}

/// A full search over `[s_lo, s_hi] x [x_lo, x_max]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub s_lo: u32,
    pub s_hi: u32,
    pub x_lo: u64,
    pub x_max: u64,
    pub chunk_size: u64,
    pub i_max: u32,
}

impl SearchConfig {
    pub fn new(s_lo: u32, s_hi: u32, x_max: u64) -> Self {
        SearchConfig {
            s_lo,
            s_hi,
            x_lo: 1,
            x_max,
            chunk_size: DEFAULT_CHUNK,
            i_max: DEFAULT_I_MAX,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::Config(m));
        if self.s_lo == 0 || self.s_lo > self.s_hi || self.s_hi > MAX_S {
            return bad(format!(
                "s range [{}, {}] must lie in [1, {MAX_S}]",
                self.s_lo, self.s_hi
            ));
        }
        if self.chunk_size == 0 {
            return bad("chunk size must be positive".into());
        }
        if self.x_lo == 0 {
            return bad("x starts at 1".into());
        }
        if self.i_max == 0 || self.i_max > 8 || self.i_max > self.s_lo {
            return bad(format!("i_max={} must be in [1, min(8, s_lo)]", self.i_max));
        }
        if self.x_max > 1 << 36 {
            return bad(format!("x_max={} too large", self.x_max));
        }
        Ok(())
    }

    /// Chunks in canonical order.
    pub fn plan(&self) -> Vec<SearchChunk> {
        let mut out = Vec::new();
        let mut lo = self.x_lo;
        while lo <= self.x_max {
            let hi = lo.saturating_add(self.chunk_size - 1).min(self.x_max);
            out.push(SearchChunk::pending(self.s_lo, self.s_hi, lo, hi));
            lo = hi + 1;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub chunks: Vec<SearchChunk>,
    /// Chunks taken from the checkpoint instead of recomputed.
    pub resumed: usize,
    /// The Wilson-polynomial root check for every hit, in hit order.
    pub intersection: Vec<Option<bool>>,
}

impl SearchOutcome {
    pub fn hits(&self) -> impl Iterator<Item = &Hit> {
        self.chunks.iter().flat_map(|c| c.hits.iter())
    }

    pub fn coverage(&self, s: u32) -> u64 {
        attested_coverage(&self.chunks, s)
    }
}

/// Runs every chunk of `cfg` in order. With a checkpoint path each finished
/// chunk is appended and synced; with `resume`, chunks already recorded as
/// done are skipped.
pub fn run_search(
    cfg: &SearchConfig,
    checkpoint: Option<&Path>,
    resume: bool,
    mut progress: impl FnMut(&SearchChunk),
) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    let previous = match (checkpoint, resume) {
        (Some(path), true) if path.exists() => read_checkpoint(path)?,
        _ => Vec::new(),
    };
    let mut writer = match checkpoint {
        Some(path) => Some(CheckpointWriter::create(path, &previous)?),
        None => None,
    };
    let mut chunks = Vec::new();
    let mut resumed = 0;
    for planned in cfg.plan() {
        if let Some(done) = previous
            .iter()
            .find(|c| c.same_region(&planned) && c.status == ChunkStatus::Done)
        {
            resumed += 1;
            progress(done);
            chunks.push(done.clone());
            continue;
        }
        let done = search_chunk(planned, cfg.i_max);
        if let Some(w) = writer.as_mut() {
            w.append(&done)?;
        }
        progress(&done);
        chunks.push(done);
    }
    let intersection = chunks
        .iter()
        .flat_map(|c| &c.hits)
        .map(Hit::intersection_integral)
        .collect();
    Ok(SearchOutcome {
        chunks,
        resumed,
        intersection,
    })
}
