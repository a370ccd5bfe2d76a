//! Integer roots of integer polynomials.
//!
//! Candidates come from the roots of the polynomial over a large prime field
//! (`gcd` with `x^q - x`, then Cantor-Zassenhaus splitting). Any integer root in
//! `[0, q)` reduces to itself mod `q`, so the candidate set is complete; every
//! candidate is then confirmed by exact evaluation over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 2^61 - 1.
const FIELD_PRIME: u64 = 2_305_843_009_213_693_951;

type Fp = Vec<u64>;

struct Field {
    q: u64,
}

impl Field {
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.q as u128) as u64
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.q - (b - a)
        }
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.q - 2)
    }

    fn reduce(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.q)).to_u64().unwrap()
    }

    fn trim(p: &mut Fp) {
        while p.last() == Some(&0) {
            p.pop();
        }
    }

    fn rem(&self, a: &[u64], m: &[u64]) -> Fp {
        let mut r = a.to_vec();
        Self::trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = self.inv(m[dm]);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = self.mul(r[top], lead_inv);
            let shift = top - dm;
            for (j, &mj) in m.iter().enumerate() {
                r[shift + j] = self.sub(r[shift + j], self.mul(c, mj));
            }
            Self::trim(&mut r);
        }
        r
    }

    fn quot(&self, a: &[u64], m: &[u64]) -> Fp {
        let mut r = a.to_vec();
        Self::trim(&mut r);
        let dm = m.len() - 1;
        if r.len() <= dm {
            return vec![];
        }
        let mut q = vec![0; r.len() - dm];
        let lead_inv = self.inv(m[dm]);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = self.mul(r[top], lead_inv);
            let shift = top - dm;
            q[shift] = c;
            for (j, &mj) in m.iter().enumerate() {
                r[shift + j] = self.sub(r[shift + j], self.mul(c, mj));
            }
            Self::trim(&mut r);
        }
        q
    }

    fn mulmod(&self, a: &[u64], b: &[u64], m: &[u64]) -> Fp {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = self.add(prod[i + j], self.mul(ai, bj));
            }
        }
        self.rem(&prod, m)
    }

    fn powmod(&self, base: &[u64], mut e: u64, m: &[u64]) -> Fp {
        let mut acc = self.rem(&[1], m);
        let mut b = self.rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &b, m);
            }
            b = self.mulmod(&b, &b, m);
            e >>= 1;
        }
        acc
    }

    fn gcd(&self, a: &[u64], b: &[u64]) -> Fp {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        Self::trim(&mut a);
        Self::trim(&mut b);
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if let Some(&lead) = a.last() {
            let li = self.inv(lead);
            for c in &mut a {
                *c = self.mul(*c, li);
            }
        }
        a
    }

    /// Distinct roots of a squarefree product of linear factors.
    fn split(&self, g: &[u64], rng: &mut ChaCha8Rng, out: &mut Vec<u64>) {
        match g.len() {
            0 | 1 => {}
            2 => {
                // g = x + c  (monic)
                out.push(self.sub(0, g[0]));
            }
            _ => loop {
                let a = rng.gen_range(0..self.q);
                let h = self.powmod(&[a, 1], (self.q - 1) / 2, g);
                let mut h = h;
                if h.is_empty() {
                    continue;
                }
                h[0] = self.sub(h[0], 1);
                let d = self.gcd(g, &h);
                if d.len() > 1 && d.len() < g.len() {
                    let other = self.quot(g, &d);
                    self.split(&d, rng, out);
                    self.split(&other, rng, out);
                    return;
                }
            },
        }
    }

    fn roots(&self, f: &[u64]) -> Vec<u64> {
        let mut f = f.to_vec();
        Self::trim(&mut f);
        if f.len() <= 1 {
            return vec![];
        }
        let lead_inv = self.inv(*f.last().unwrap());
        for c in &mut f {
            *c = self.mul(*c, lead_inv);
        }
        // gcd(f, x^q - x) keeps exactly the linear factors.
        let mut xq = self.powmod(&[0, 1], self.q, &f);
        xq.resize(xq.len().max(2), 0);
        xq[1] = self.sub(xq[1], 1);
        let g = self.gcd(&f, &xq);
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x7167_6874);
        self.split(&g, &mut rng, &mut out);
        out.sort_unstable();
        out
    }
}

/// Exact value of the integer polynomial at `z` (coefficients low to high).
pub fn eval_int(coeffs: &[BigInt], z: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * z + c)
}

/// All distinct integer roots of `coeffs` lying in `[lo, hi]`, ascending.
/// Requires `0 <= lo <= hi < 2^61 - 1`; the zero polynomial has no reported
/// roots.
pub fn integer_roots_in_range(coeffs: &[BigInt], lo: i64, hi: i64) -> Vec<i64> {
    assert!(0 <= lo && lo <= hi && (hi as u64) < FIELD_PRIME);
    let content = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if content.is_zero() {
        return vec![];
    }
    // The primitive part has a coefficient that is nonzero mod every prime.
    let field = Field { q: FIELD_PRIME };
    let reduced: Fp = coeffs
        .iter()
        .map(|c| field.reduce(&(c / &content)))
        .collect();
    field
        .roots(&reduced)
        .into_iter()
        .filter(|&r| r >= lo as u64 && r <= hi as u64)
        .map(|r| r as i64)
        .filter(|&r| eval_int(coeffs, &BigInt::from(r)).is_zero())
        .collect()
}
