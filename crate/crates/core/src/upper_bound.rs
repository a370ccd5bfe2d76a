//! Rigorous upper bounds on `v`: the exponent `psi`, the log-magnitude
//! `kappa`, the bound `v <= exp(kappa/psi) + 2s - 1`, the search over the
//! cutoff `b`, and the explicit analytic chain for `s >= 627`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::exact_arith::{floor_log, ratio, val_p_factorial, val_p_u64, ExactRational};
use crate::prime_engine::primes_up_to;
use crate::rigorous::{decimal_ceil, Interval};

pub const DEFAULT_PRECISION: u32 = 128;
const STABILITY_EXTRA_BITS: u32 = 64;
const RETRY_PRECISION: u32 = 256;

/// An exact dyadic upper bound on a real quantity, with the working precision
/// that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigorousUpper {
    pub value: ExactRational,
    pub precision_bits: u32,
}

impl RigorousUpper {
    fn of(i: &Interval) -> Self {
        RigorousUpper {
            value: i.upper(),
            precision_bits: i.bits(),
        }
    }

    pub fn ceil(&self) -> BigInt {
        self.value.ceil().to_integer()
    }

    pub fn lt(&self, x: &ExactRational) -> bool {
        self.value < *x
    }

    pub fn decimal(&self, digits: u32) -> String {
        decimal_ceil(&self.value, digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for RigorousUpper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.decimal(6))
    }
}

/// Result of one `(s, r, b)` evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub s: u64,
    pub r: u64,
    pub b: ExactRational,
    pub psi: i64,
    pub kappa_upper: RigorousUpper,
    /// Upper bound on `exp(kappa/psi)`, when `psi > 0`.
    pub exp_upper: Option<RigorousUpper>,
    /// `ceil(exp(kappa/psi)) + 2s - 1`, when `psi > 0`.
    pub v_bound: Option<BigInt>,
    pub feasible: bool,
}

/// `2 floor(s/2)`.
pub fn default_r(s: u64) -> u64 {
    2 * (s / 2)
}

/// Renders a cutoff as `n` or `n/d`.
pub fn format_cutoff(b: &ExactRational) -> String {
    if b.is_integer() {
        b.to_integer().to_string()
    } else {
        format!("{}/{}", b.numer(), b.denom())
    }
}

fn check_params(s: u64, r: u64, b: &ExactRational) {
    assert!(
        r.is_multiple_of(2) && 6 <= r && r <= s,
        "need even r with 6 <= r <= s (s={s}, r={r})"
    );
    assert!(
        *b <= ExactRational::from_integer(BigInt::from(s)),
        "need b <= s"
    );
}

fn b_floor(b: &ExactRational) -> u64 {
    let f = b.floor().to_integer();
    if f.is_negative() {
        0
    } else {
        f.to_u64().expect("cutoff fits in u64")
    }
}

/// Prime table, `pi` lookup and logarithms of primes for all `s <= s_max`.
#[derive(Debug, Clone)]
pub struct BoundEngine {
    s_max: u64,
    bits: u32,
    primes: Vec<u64>,
    /// `pi(n)` for `n <= 2 s_max + 2`.
    pi: Vec<u32>,
    ln: Vec<Interval>,
    ln_fine: Vec<Interval>,
}

impl BoundEngine {
    pub fn new(s_max: u64) -> Self {
        Self::with_precision(s_max, DEFAULT_PRECISION)
    }

    pub fn with_precision(s_max: u64, bits: u32) -> Self {
        let top = 2 * s_max + 2;
        let primes = primes_up_to(top);
        let mut pi = vec![0u32; top as usize + 1];
        let mut it = primes.iter().peekable();
        let mut count = 0;
        for (n, slot) in pi.iter_mut().enumerate() {
            if it.peek() == Some(&&(n as u64)) {
                count += 1;
                it.next();
            }
            *slot = count;
        }
        let ln_at = |b: u32| -> Vec<Interval> {
            primes
                .par_iter()
                .map(|&p| Interval::ln_int(&BigInt::from(p), b))
                .collect()
        };
        let ln = ln_at(bits);
        let ln_fine = ln_at(bits + STABILITY_EXTRA_BITS);
        BoundEngine {
            s_max,
            bits,
            primes,
            pi,
            ln,
            ln_fine,
        }
    }

    pub fn s_max(&self) -> u64 {
        self.s_max
    }

    pub fn precision(&self) -> u32 {
        self.bits
    }

    /// Exact `pi(x)` for `x <= 2 s_max + 2`.
    pub fn pi(&self, x: u64) -> u64 {
        self.pi[x as usize] as u64
    }

    /// `r - 4 - 4 pi(b)`.
    pub fn psi(&self, s: u64, r: u64, b: &ExactRational) -> i64 {
        check_params(s, r, b);
        r as i64 - 4 - 4 * self.pi(b_floor(b)) as i64
    }

    /// `kappa = sum_p c_p ln p` with exact integer `c_p`; returns the nonzero
    /// `(p, c_p)` in ascending `p`.
    pub fn kappa_coefficients(&self, s: u64, r: u64, b: &ExactRational) -> Vec<(u64, i64)> {
        check_params(s, r, b);
        assert!(s <= self.s_max, "s={s} beyond engine range {}", self.s_max);
        let bf = b_floor(b);
        let pi_b = self.pi(bf) as i64;
        let top = 2 * s - 3 * r / 2 + 2;
        let mut out = Vec::new();
        for &p in &self.primes {
            if p > top.max(2 * s - r + 2).max(s) {
                break;
            }
            let vf = |n: u64| val_p_factorial(n, p) as i64;
            // ln of (2s-3r/2+2)! s! / ((2s-r+2)! (s-r+1)! (s-r/2+1)), doubled.
            let mut c = 2
                * (vf(2 * s - 3 * r / 2 + 2) + vf(s)
                    - vf(2 * s - r + 2)
                    - vf(s - r + 1)
                    - val_p_u64(s - r / 2 + 1, p) as i64);
            if p == 2 {
                c += 2 * (s - r) as i64 - 4 * pi_b;
            }
            if p == 3 {
                c += 4 * pi_b;
            }
            if p > bf && p <= s {
                c += 2 * val_p_f_tilde(s, r, p);
            }
            if c != 0 {
                out.push((p, c));
            }
        }
        out
    }

    fn kappa_at(&self, coeffs: &[(u64, i64)], fine: bool) -> Interval {
        let table = if fine { &self.ln_fine } else { &self.ln };
        let bits = table.first().map(|i| i.bits()).unwrap_or(self.bits);
        let mut acc = Interval::from_int(0, bits);
        for &(p, c) in coeffs {
            let idx = self.primes.partition_point(|&q| q < p);
            acc = acc.add(&table[idx].mul_int(&BigInt::from(c)));
        }
        acc
    }

    /// Enclosure of `kappa^b_{s,r}` at the engine precision.
    pub fn kappa_interval(&self, s: u64, r: u64, b: &ExactRational) -> Interval {
        self.kappa_at(&self.kappa_coefficients(s, r, b), false)
    }

    pub fn kappa(&self, s: u64, r: u64, b: &ExactRational) -> RigorousUpper {
        RigorousUpper::of(&self.kappa_interval(s, r, b))
    }

    /// The bound for one cutoff `b`, with the precision check: the exponential
    /// is recomputed with 64 more bits and must agree to a relative `2^-32`,
    /// otherwise everything is redone at 256 bits.
    pub fn v_upper(&self, s: u64, r: u64, b: &ExactRational) -> BoundReport {
        let psi = self.psi(s, r, b);
        let coeffs = self.kappa_coefficients(s, r, b);
        let kappa = self.kappa_at(&coeffs, false);
        if psi <= 0 {
            return BoundReport {
                s,
                r,
                b: b.clone(),
                psi,
                kappa_upper: RigorousUpper::of(&kappa),
                exp_upper: None,
                v_bound: None,
                feasible: false,
            };
        }
        let psi_b = BigInt::from(psi);
        let e = kappa.div_int(&psi_b).exp();
        let e_fine = self.kappa_at(&coeffs, true).div_int(&psi_b).exp();
        let stable = {
            let (u, f) = (e.upper(), e_fine.upper());
            let diff = if u > f { &u - &f } else { &f - &u };
            diff * ExactRational::from_integer(BigInt::from(1u64) << 32) < f
        };
        if !stable && self.bits < RETRY_PRECISION {
            return BoundEngine::with_precision(s, RETRY_PRECISION).v_upper(s, r, b);
        }
        let exp_upper = RigorousUpper::of(&e);
        let v_bound = exp_upper.ceil() + BigInt::from(2 * s) - 1;
        BoundReport {
            s,
            r,
            b: b.clone(),
            psi,
            kappa_upper: RigorousUpper::of(&kappa),
            exp_upper: Some(exp_upper),
            v_bound: Some(v_bound),
            feasible: true,
        }
    }

    /// The smallest `v_bound` over integer `b` in `[1, s]`; ties go to the
    /// smallest `b`. Only `pi(b)` matters, so one `b` per value of `pi(b)` is
    /// evaluated.
    pub fn best_bound(&self, s: u64, r: u64) -> BoundReport {
        let mut cands: Vec<u64> = vec![1];
        cands.extend(self.primes.iter().copied().take_while(|&p| p <= s));
        let reports: Vec<BoundReport> = cands
            .par_iter()
            .map(|&b| self.v_upper(s, r, &ExactRational::from_integer(BigInt::from(b))))
            .collect();
        let mut best: Option<&BoundReport> = None;
        for rep in &reports {
            if !rep.feasible {
                continue;
            }
            best = match best {
                Some(cur) if cur.v_bound <= rep.v_bound => Some(cur),
                _ => Some(rep),
            };
        }
        best.cloned()
            .unwrap_or_else(|| reports.into_iter().next().unwrap())
    }
}

/// `val_p` of `s! r! l_{s-1}^2 l_{s-2}^2 (s-r+1)! (s-r/2+1)`.
pub fn val_p_f_tilde(s: u64, r: u64, p: u64) -> i64 {
    let lg = |n: u64| if n == 0 { 0 } else { floor_log(n, p) as i64 };
    val_p_factorial(s, p) as i64
        + val_p_factorial(r, p) as i64
        + 2 * lg(s - 1)
        + 2 * lg(s - 2)
        + val_p_factorial(s - r + 1, p) as i64
        + val_p_u64(s - r / 2 + 1, p) as i64
}

pub fn psi(s: u64, r: u64, b: &ExactRational) -> i64 {
    BoundEngine::new(s).psi(s, r, b)
}

pub fn kappa(s: u64, r: u64, b: &ExactRational) -> RigorousUpper {
    BoundEngine::new(s).kappa(s, r, b)
}

pub fn v_upper(s: u64, r: u64, b: &ExactRational) -> BoundReport {
    BoundEngine::new(s).v_upper(s, r, b)
}

pub fn best_bound(s: u64, r: u64) -> BoundReport {
    BoundEngine::new(s).best_bound(s, r)
}

fn dusart_interval(x: &ExactRational, bits: u32) -> Interval {
    let l = Interval::ln_rational(x, bits);
    let c = Interval::from_rational(&ratio(12762, 10000), bits);
    let one = Interval::from_int(1, bits);
    Interval::from_rational(x, bits)
        .div(&l)
        .mul(&one.add(&c.div(&l)))
}

/// `x/ln x (1 + 1.2762/ln x)`, rounded up.
pub fn dusart_pi_upper(x: &ExactRational) -> RigorousUpper {
    assert!(*x > ratio(1, 1), "need x > 1");
    RigorousUpper::of(&dusart_interval(x, DEFAULT_PRECISION))
}

/// `f(n) = n ln n - n + ln(n)/2`.
fn stirling_f(n: &ExactRational, bits: u32) -> Interval {
    let l = Interval::ln_rational(n, bits);
    let nn = Interval::from_rational(n, bits);
    nn.mul(&l).sub(&nn).add(&l.div_int(&BigInt::from(2)))
}

/// `(f(n), f(n) + 1)` rounded outward; `f(n) < ln n! <= f(n) + 1`.
pub fn stirling_bounds(n: u64) -> (ExactRational, ExactRational) {
    assert!(n >= 1);
    let f = stirling_f(&ratio(n as i64, 1), DEFAULT_PRECISION);
    (
        f.lower(),
        f.add(&Interval::from_int(1, DEFAULT_PRECISION)).upper(),
    )
}

/// The explicit check for `s >= 627` with `b = s`, `r = 2 floor(s/2)`, done
/// twice: by direct evaluation, and by the Dusart/Stirling chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PremeditationReport {
    pub s: u64,
    pub direct: BoundReport,
    pub direct_ok: bool,
    /// Lower bound on `s - 5 - 4 x/ln x (1 + 1.2762/ln x)` at `x = s`.
    pub analytic_psi_lower: ExactRational,
    /// Upper bound on the analytic `kappa` estimate divided by the `psi` estimate.
    pub analytic_ratio_upper: Option<ExactRational>,
    pub analytic_ok: bool,
}

impl PremeditationReport {
    pub fn holds(&self) -> bool {
        self.direct_ok && self.analytic_ok
    }
}

pub fn check_premeditation(s: u64) -> PremeditationReport {
    assert!(s >= 627, "the explicit bound is stated for s >= 627");
    let bits = DEFAULT_PRECISION;
    let r = default_r(s);
    let b = ExactRational::from_integer(BigInt::from(s));
    let threshold = ExactRational::from_integer(BigInt::from(2_000_000u64 * s));
    let direct = BoundEngine::new(s).v_upper(s, r, &b);
    let direct_ok = direct.feasible && direct.exp_upper.as_ref().is_some_and(|e| e.lt(&threshold));

    let sr = ratio(s as i64, 1);
    let pi_up = dusart_interval(&sr, bits);
    let psi_low = Interval::from_int(s - 5, bits).sub(&pi_up.mul_int(&BigInt::from(4)));
    let f = |n: ExactRational| stirling_f(&n, bits);
    let ln = |q: ExactRational| Interval::ln_rational(&q, bits);
    let two = BigInt::from(2);
    let kappa_up = f(ratio(s as i64 + 7, 2))
        .mul_int(&two)
        .add(&f(sr.clone()).mul_int(&two))
        .sub(&f(ratio(s as i64 + 2, 1)).mul_int(&two))
        .add(&Interval::from_int(4, bits))
        .sub(&ln(ratio(s as i64 + 2, 2)).mul_int(&two))
        .add(&ln(ratio(3, 2)).mul_int(&BigInt::from(4)).mul(&pi_up));
    let (analytic_ratio_upper, analytic_ok) = if psi_low.is_positive() {
        let q = kappa_up.div(&psi_low);
        let limit = ln(threshold.clone());
        (Some(q.upper()), q.upper() < limit.lower())
    } else {
        (None, false)
    };
    PremeditationReport {
        s,
        direct,
        direct_ok,
        analytic_psi_lower: psi_low.lower(),
        analytic_ratio_upper,
        analytic_ok,
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "s={} r={} b={} psi={} kappa_upper={}",
            self.s,
            self.r,
            format_cutoff(&self.b),
            self.psi,
            self.kappa_upper
        )?;
        match (&self.exp_upper, &self.v_bound) {
            (Some(e), Some(v)) => write!(f, " exp_upper={e} v_bound={v} feasible=true"),
            _ => write!(f, " feasible=false"),
        }
    }
}

/// Exact `ln` of a factorial ratio, for cross-checks: `sum ln k` over `k <= n`.
pub fn ln_factorial(n: u64, bits: u32) -> Interval {
    let mut acc = Interval::from_int(0, bits);
    for k in 2..=n {
        acc = acc.add(&Interval::ln_int(&BigInt::from(k), bits));
    }
    acc
}
