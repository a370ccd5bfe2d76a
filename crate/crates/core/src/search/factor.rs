//! Factorisation of consecutive integers by a block sieve.

/// Numbers below `2^34` have at most ten distinct prime factors.
pub const MAX_DISTINCT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factored {
    pub n: u64,
    len: u8,
    primes: [u64; MAX_DISTINCT],
    exps: [u8; MAX_DISTINCT],
}

impl Factored {
    fn empty(n: u64) -> Self {
        Factored {
            n,
            len: 0,
            primes: [0; MAX_DISTINCT],
            exps: [0; MAX_DISTINCT],
        }
    }

    fn push(&mut self, p: u64, e: u8) {
        self.primes[self.len as usize] = p;
        self.exps[self.len as usize] = e;
        self.len += 1;
    }

    /// `(p, e)` pairs; primes in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        (0..self.len as usize).map(|i| (self.primes[i], self.exps[i] as u32))
    }

    pub fn product(&self) -> u64 {
        self.iter().map(|(p, e)| p.pow(e)).product()
    }
}

/// Factors every integer in `[lo, lo + len)` using `primes`, which must
/// contain all primes up to `sqrt(lo + len - 1)`.
pub fn factor_range(lo: u64, len: usize, primes: &[u64]) -> Vec<Factored> {
    assert!(lo >= 1, "factor_range starts at 1");
    let mut rest: Vec<u64> = (0..len as u64).map(|i| lo + i).collect();
    let mut out: Vec<Factored> = rest.iter().map(|&n| Factored::empty(n)).collect();
    let hi = lo + len as u64;
    for &p in primes {
        if p * p >= hi {
            break;
        }
        let first = lo.div_ceil(p) * p;
        let mut j = (first - lo) as usize;
        while j < len {
            let mut e = 0u8;
            while rest[j].is_multiple_of(p) {
                rest[j] /= p;
                e += 1;
            }
            out[j].push(p, e);
            j += p as usize;
        }
    }
    for (f, r) in out.iter_mut().zip(rest) {
        if r > 1 {
            f.push(r, 1);
        }
    }
    out
}
