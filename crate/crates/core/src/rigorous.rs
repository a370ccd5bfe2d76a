//! Outward-rounded fixed-point interval arithmetic.
//!
//! An [`Interval`] holds integers `lo <= hi` and stands for the real interval
//! `[lo / 2^bits, hi / 2^bits]`. Every operation rounds `lo` down and `hi` up,
//! so the true value of any expression built from these operations lies in the
//! result.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact_arith::ExactRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn min_max(v: [BigInt; 4]) -> (BigInt, BigInt) {
    let mut lo = v[0].clone();
    let mut hi = v[0].clone();
    for x in &v[1..] {
        if *x < lo {
            lo = x.clone();
        }
        if *x > hi {
            hi = x.clone();
        }
    }
    (lo, hi)
}

impl Interval {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn from_int<T: Into<BigInt>>(n: T, bits: u32) -> Self {
        let v = n.into() << bits as usize;
        Interval {
            lo: v.clone(),
            hi: v,
            bits,
        }
    }

    pub fn from_rational(q: &ExactRational, bits: u32) -> Self {
        let n = q.numer() << bits as usize;
        Interval {
            lo: floor_div(&n, q.denom()),
            hi: ceil_div(&n, q.denom()),
            bits,
        }
    }

    pub fn lower(&self) -> ExactRational {
        ExactRational::new(self.lo.clone(), pow2(self.bits))
    }

    pub fn upper(&self) -> ExactRational {
        ExactRational::new(self.hi.clone(), pow2(self.bits))
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Upper endpoint rounded up to an integer.
    pub fn ceil_upper(&self) -> BigInt {
        ceil_div(&self.hi, &pow2(self.bits))
    }

    /// Lower endpoint rounded down to an integer.
    pub fn floor_lower(&self) -> BigInt {
        floor_div(&self.lo, &pow2(self.bits))
    }

    /// Strictly below `x` everywhere.
    pub fn lt(&self, x: &ExactRational) -> bool {
        self.upper() < *x
    }

    /// Width `hi - lo` in units of `2^-bits`.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    fn same(&self, o: &Interval) {
        assert_eq!(self.bits, o.bits, "interval precision mismatch");
    }

    pub fn add(&self, o: &Interval) -> Interval {
        self.same(o);
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
            bits: self.bits,
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        self.same(o);
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        self.same(o);
        let (lo, hi) = min_max([
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ]);
        let s = pow2(self.bits);
        Interval {
            lo: floor_div(&lo, &s),
            hi: ceil_div(&hi, &s),
            bits: self.bits,
        }
    }

    /// Division by an interval not containing zero.
    pub fn div(&self, o: &Interval) -> Interval {
        self.same(o);
        assert!(
            o.is_positive() || o.is_negative(),
            "division by an interval containing 0"
        );
        let s = pow2(self.bits);
        let a = [&self.lo * &s, &self.hi * &s];
        let cand = |f: fn(&BigInt, &BigInt) -> BigInt| {
            [
                f(&a[0], &o.lo),
                f(&a[0], &o.hi),
                f(&a[1], &o.lo),
                f(&a[1], &o.hi),
            ]
        };
        let (lo, _) = min_max(cand(floor_div));
        let (_, hi) = min_max(cand(ceil_div));
        Interval {
            lo,
            hi,
            bits: self.bits,
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> Interval {
        let (a, b) = (&self.lo * n, &self.hi * n);
        let (lo, hi) = if n.sign() == Sign::Minus {
            (b, a)
        } else {
            (a, b)
        };
        Interval {
            lo,
            hi,
            bits: self.bits,
        }
    }

    pub fn div_int(&self, n: &BigInt) -> Interval {
        assert!(!n.is_zero());
        let (lo, hi) = if n.is_positive() {
            (floor_div(&self.lo, n), ceil_div(&self.hi, n))
        } else {
            (floor_div(&self.hi, n), ceil_div(&self.lo, n))
        };
        Interval {
            lo,
            hi,
            bits: self.bits,
        }
    }

    /// Same interval at a coarser precision.
    pub fn round_to(&self, bits: u32) -> Interval {
        assert!(bits <= self.bits);
        let s = pow2(self.bits - bits);
        Interval {
            lo: floor_div(&self.lo, &s),
            hi: ceil_div(&self.hi, &s),
            bits,
        }
    }

    /// Natural logarithm of a positive integer.
    pub fn ln_int(n: &BigInt, bits: u32) -> Interval {
        assert!(n.is_positive(), "ln of a non-positive integer");
        let w = bits + 16;
        let k = n.bits() - 1;
        let base = BigInt::one() << k as usize;
        let (slo, shi) = two_atanh(&(n - &base), &(n + &base), w);
        let (l2lo, l2hi) = two_atanh(&BigInt::one(), &BigInt::from(3), w);
        let k = BigInt::from(k);
        Interval {
            lo: &k * l2lo + slo,
            hi: &k * l2hi + shi,
            bits: w,
        }
        .round_to(bits)
    }

    /// Natural logarithm of a positive rational.
    pub fn ln_rational(q: &ExactRational, bits: u32) -> Interval {
        Interval::ln_int(q.numer(), bits).sub(&Interval::ln_int(q.denom(), bits))
    }

    pub fn exp(&self) -> Interval {
        let (lo, _) = exp_fixed(&self.lo, self.bits);
        let (_, hi) = exp_fixed(&self.hi, self.bits);
        Interval {
            lo,
            hi,
            bits: self.bits,
        }
    }

    /// Decimal rendering of the upper endpoint with `digits` fractional digits,
    /// rounded up.
    pub fn upper_decimal(&self, digits: u32) -> String {
        decimal_ceil(&self.upper(), digits)
    }
}

/// Bounds on `2 atanh(a/b) * 2^w` for `0 <= a/b <= 1/3`.
fn two_atanh(a: &BigInt, b: &BigInt, w: u32) -> (BigInt, BigInt) {
    debug_assert!(BigInt::from(3) * a <= *b);
    let scale = pow2(w);
    let (a2, b2) = (a * a, b * b);
    let mut num = a.clone();
    let mut den = b.clone();
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut j = 0u64;
    loop {
        let d = &den * (2 * j + 1);
        let t = &num * &scale * 2;
        lo += floor_div(&t, &d);
        hi += ceil_div(&t, &d);
        num *= &a2;
        den *= &b2;
        // Remaining terms sum to at most 2 z^{2j+3} / (2j+3) * 9/8.
        if &num * &scale * 18 <= &den * (2 * j + 3) * 8 {
            hi += 1;
            return (lo, hi);
        }
        j += 1;
    }
}

/// Bounds on `exp(m / 2^bits) * 2^bits`.
fn exp_fixed(m: &BigInt, bits: u32) -> (BigInt, BigInt) {
    if m.is_negative() {
        let (l, h) = exp_fixed(&-m, bits);
        let one2 = pow2(2 * bits);
        return (floor_div(&one2, &h), ceil_div(&one2, &l));
    }
    // exp(q) = exp(q / 2^h)^(2^h) with q / 2^h < 1/16.
    let h = (m.bits() as i64 - bits as i64).max(0) as u32 + 4;
    let w = bits + 2 * h + 40;
    let scale = pow2(w);
    let t = m << (w - bits - h) as usize;
    let mut lo = scale.clone();
    let mut hi = scale.clone();
    let mut term_lo = scale.clone();
    let mut term_hi = scale.clone();
    let mut j = 1u64;
    loop {
        let d = &scale * j;
        term_lo = floor_div(&(&term_lo * &t), &d);
        term_hi = ceil_div(&(&term_hi * &t), &d);
        if term_hi <= BigInt::one() {
            // Tail after the last included term is at most twice this term.
            hi += 2 * &term_hi;
            break;
        }
        lo += &term_lo;
        hi += &term_hi;
        j += 1;
    }
    for _ in 0..h {
        lo = floor_div(&(&lo * &lo), &scale);
        hi = ceil_div(&(&hi * &hi), &scale);
    }
    let s = pow2(w - bits);
    (floor_div(&lo, &s), ceil_div(&hi, &s))
}

/// `x` rounded up to `digits` decimal places.
pub fn decimal_ceil(x: &ExactRational, digits: u32) -> String {
    let p = BigInt::from(10).pow(digits);
    let n = ceil_div(&(x.numer() * &p), x.denom());
    format_scaled(&n, &p, digits)
}

/// `x` rounded down to `digits` decimal places.
pub fn decimal_floor(x: &ExactRational, digits: u32) -> String {
    let p = BigInt::from(10).pow(digits);
    let n = floor_div(&(x.numer() * &p), x.denom());
    format_scaled(&n, &p, digits)
}

fn format_scaled(n: &BigInt, p: &BigInt, digits: u32) -> String {
    let neg = n.is_negative();
    let a = n.abs();
    let (int, frac) = a.div_rem(p);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!(
            "{sign}{int}.{:0>width$}",
            frac.to_string(),
            width = digits as usize
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            decimal_floor(&self.lower(), 12),
            decimal_ceil(&self.upper(), 12)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{rat, ratio};

    #[test]
    fn ln_of_integers_brackets_f64() {
        for n in [
            1u64,
            2,
            3,
            5,
            7,
            10,
            1000,
            65536,
            65537,
            1_294_268_491,
            u64::MAX / 3,
        ] {
            let i = Interval::ln_int(&BigInt::from(n), 80);
            let f = (n as f64).ln();
            // f64 ln is within an ulp or two of the truth.
            let slack = f.abs() * 1e-15 + 1e-20;
            let lo = ExactRational::from_float(f - slack).unwrap();
            let hi = ExactRational::from_float(f + slack).unwrap();
            assert!(lo <= i.lower() && i.upper() <= hi, "n={n}");
            assert!(i.width_ulps() < BigInt::from(1000));
        }
        assert_eq!(Interval::ln_int(&BigInt::one(), 64).lower(), rat(0));
    }

    #[test]
    fn ln2_against_known_digits() {
        // ln 2 = 0.693147180559945309417232121458176568...
        let i = Interval::ln_int(&BigInt::from(2), 120);
        assert_eq!(
            decimal_floor(&i.lower(), 30),
            "0.693147180559945309417232121458"
        );
        assert_eq!(
            decimal_ceil(&i.upper(), 30),
            "0.693147180559945309417232121459"
        );
    }

    #[test]
    fn exp_against_known_digits() {
        // e = 2.718281828459045235360287471352662497...
        let e = Interval::from_int(1, 120).exp();
        assert_eq!(
            decimal_floor(&e.lower(), 30),
            "2.718281828459045235360287471352"
        );
        assert_eq!(
            decimal_ceil(&e.upper(), 30),
            "2.718281828459045235360287471353"
        );
        let z = Interval::from_int(0, 64).exp();
        assert!(z.lower() <= rat(1) && rat(1) <= z.upper());
    }

    #[test]
    fn exp_inverts_ln() {
        for n in [3u64, 17, 1000, 15_000_000_000] {
            let back = Interval::ln_int(&BigInt::from(n), 128).exp();
            assert!(back.lower() <= rat(n) && rat(n) <= back.upper());
            assert!(back.upper() - rat(n) < ratio(1, 1u64 << 40));
        }
        let neg = Interval::ln_int(&BigInt::from(9), 100).neg().exp();
        assert!(neg.lower() <= ratio(1, 9) && ratio(1, 9) <= neg.upper());
    }

    #[test]
    fn arithmetic_rounds_outward() {
        let third = Interval::from_rational(&ratio(1, 3), 20);
        let one = third.mul_int(&BigInt::from(3));
        assert!(one.lower() <= rat(1) && rat(1) <= one.upper());
        let q = Interval::from_int(1, 20).div(&Interval::from_int(3, 20));
        assert!(q.lower() <= ratio(1, 3) && ratio(1, 3) <= q.upper());
        let q = Interval::from_int(-2, 20).div(&Interval::from_int(-3, 20));
        assert!(q.lower() <= ratio(2, 3) && ratio(2, 3) <= q.upper());
        let p = third.neg().mul(&third);
        assert!(p.lower() <= ratio(-1, 9) && ratio(-1, 9) <= p.upper());
        let d = Interval::from_int(7, 10).div_int(&BigInt::from(-2));
        assert!(d.lower() <= ratio(-7, 2) && ratio(-7, 2) <= d.upper());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_ceil(&ratio(1, 3), 3), "0.334");
        assert_eq!(decimal_floor(&ratio(-1, 3), 3), "-0.334");
        assert_eq!(decimal_ceil(&ratio(7, 1), 0), "7");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn ln_sum_rule(a in 1u64..1_000_000, b in 1u64..1_000_000) {
                let la = Interval::ln_int(&BigInt::from(a), 96);
                let lb = Interval::ln_int(&BigInt::from(b), 96);
                let lab = Interval::ln_int(&(BigInt::from(a) * b), 96);
                let sum = la.add(&lb);
                // Both enclose ln(ab), so they overlap.
                prop_assert!(sum.lower() <= lab.upper() && lab.lower() <= sum.upper());
            }

            #[test]
            fn exp_is_monotone_and_encloses(n in -4000i64..4000) {
                let x = Interval::from_rational(&ratio(n, 97), 90);
                let e = x.exp();
                let f = (n as f64 / 97.0).exp();
                let fx = ExactRational::from_float(f).unwrap();
                let tol = ExactRational::from_float(f * 1e-14).unwrap();
                prop_assert!(e.lower() <= &fx + &tol && &fx - &tol <= e.upper());
                let e2 = Interval::from_rational(&ratio(n + 1, 97), 90).exp();
                prop_assert!(e.upper() < e2.upper());
            }
        }
    }
}
