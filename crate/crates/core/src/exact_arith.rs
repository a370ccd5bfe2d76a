//! Exact integer and rational kernel: rising/falling factorials, generalized
//! binomials, `lcm{1..n}`, and p-adic valuations.
//!
//! Every value here is exact. Floating point lives in [`crate::upper_bound`].

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision fraction, always stored in lowest terms with a
/// positive denominator (zero is `0/1`).
pub type ExactRational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("valuation of zero is +infinity")]
    ValuationOfZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// Integer `n` as an [`ExactRational`].
pub fn rat<T: Into<BigInt>>(n: T) -> ExactRational {
    ExactRational::from_integer(n.into())
}

/// The fraction `n / d`, reduced. Panics if `d == 0`.
pub fn ratio<N: Into<BigInt>, D: Into<BigInt>>(n: N, d: D) -> ExactRational {
    ExactRational::new(n.into(), d.into())
}

/// `x (x+1) ... (x+n-1)`; the empty product for `n = 0` is 1.
pub fn rising_factorial(x: &ExactRational, n: u32) -> ExactRational {
    let mut acc = ExactRational::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc *= &term;
        if acc.is_zero() {
            return acc;
        }
        term += BigInt::one();
    }
    acc
}

/// `x (x-1) ... (x-n+1)`; the empty product for `n = 0` is 1.
pub fn falling_factorial(x: &ExactRational, n: u32) -> ExactRational {
    let mut acc = ExactRational::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc *= &term;
        if acc.is_zero() {
            return acc;
        }
        term -= BigInt::one();
    }
    acc
}

/// Integer rising factorial, used where no rational normalization is wanted.
pub fn rising_int(x: &BigInt, n: u32) -> BigInt {
    let mut acc = BigInt::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc *= &term;
        term += 1u32;
    }
    acc
}

/// Integer falling factorial.
pub fn falling_int(x: &BigInt, n: u32) -> BigInt {
    let mut acc = BigInt::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc *= &term;
        term -= 1u32;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Generalized binomial `falling(n, k) / k!`; `n` may be any rational, so this
/// is the polynomial `C(n, k)` evaluated at `n`.
pub fn binomial(n: &ExactRational, k: u32) -> ExactRational {
    let num = falling_factorial(n, k);
    num / rat(BigInt::from(factorial(k as u64)))
}

/// Binomial with an integer top argument, exact integer result.
pub fn binomial_int(n: i64, k: u32) -> BigInt {
    falling_int(&BigInt::from(n), k) / BigInt::from(factorial(k as u64))
}

/// `lcm{1, ..., n}`, with `ell(0) = ell(1) = 1`.
pub fn ell(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        let i = BigUint::from(i);
        let g = acc.gcd(&i);
        acc = acc / g * i;
    }
    acc
}

/// Legendre's formula: exponent of `p` in `n!`.
pub fn val_p_factorial(n: u64, p: u64) -> u64 {
    debug_assert!(p >= 2);
    let mut total = 0;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

/// Exponent of `p` in a nonzero machine integer.
pub fn val_p_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0 && p >= 2);
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// Largest `e` with `p^e <= n`, i.e. `floor(log_p n)`; zero for `n < p`.
pub fn floor_log(n: u64, p: u64) -> u32 {
    debug_assert!(p >= 2);
    let mut e = 0;
    let mut pow = p as u128;
    while pow <= n as u128 {
        e += 1;
        pow *= p as u128;
    }
    e
}

fn val_p_bigint(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut e = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            break;
        }
        rest = q;
        e += 1;
    }
    (e, rest)
}

/// p-adic valuation of a nonzero rational (negative when `p` divides the
/// denominator).
pub fn val_p(x: &ExactRational, p: u64) -> Result<i64, ArithError> {
    if x.is_zero() {
        return Err(ArithError::ValuationOfZero);
    }
    if !is_prime_u64(p) {
        return Err(ArithError::NotPrime(p));
    }
    let pb = BigInt::from(p);
    let (num_e, _) = val_p_bigint(x.numer(), &pb);
    let (den_e, _) = val_p_bigint(x.denom(), &pb);
    Ok(num_e - den_e)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    'witness: for &a in &BASES {
        let mut x = 1u64;
        let (mut base, mut e) = (a % n, d);
        while e > 0 {
            if e & 1 == 1 {
                x = mul(x, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of a rational over a fixed set of primes, plus the
/// part of the value not divisible by any of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationTable {
    pub entries: BTreeMap<u64, i64>,
    pub cofactor: ExactRational,
}

impl ValuationTable {
    /// Factor `x` over `primes`. `x` must be nonzero.
    pub fn factor_over(x: &ExactRational, primes: &[u64]) -> Result<Self, ArithError> {
        if x.is_zero() {
            return Err(ArithError::ValuationOfZero);
        }
        let mut entries = BTreeMap::new();
        let mut num = x.numer().clone();
        let mut den = x.denom().clone();
        for &p in primes {
            let pb = BigInt::from(p);
            let (en, rn) = val_p_bigint(&num, &pb);
            let (ed, rd) = val_p_bigint(&den, &pb);
            num = rn;
            den = rd;
            if en != ed {
                entries.insert(p, en - ed);
            }
        }
        Ok(ValuationTable {
            entries,
            cofactor: ExactRational::new(num, den),
        })
    }

    pub fn reconstruct(&self) -> ExactRational {
        let mut acc = self.cofactor.clone();
        for (&p, &e) in &self.entries {
            let pw = rat(BigInt::from(p).pow(e.unsigned_abs() as u32));
            if e >= 0 {
                acc *= pw;
            } else {
                acc /= pw;
            }
        }
        acc
    }
}

/// True when the rational has denominator 1.
pub fn is_integral(x: &ExactRational) -> bool {
    x.denom().is_one()
}

/// `|x|` as an exact rational.
pub fn abs(x: &ExactRational) -> ExactRational {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn primes_upto(n: u64) -> Vec<u64> {
        (2..=n).filter(|&k| (2..k).all(|d| k % d != 0)).collect()
    }

    #[test]
    fn rising_examples() {
        assert_eq!(rising_factorial(&rat(5), 2), rat(30));
        assert_eq!(rising_factorial(&ratio(7, 2), 0), rat(1));
        assert_eq!(rising_factorial(&rat(-3), 4), rat(0));
    }

    #[test]
    fn falling_examples() {
        assert_eq!(falling_factorial(&rat(7), 4), rat(840));
        assert_eq!(falling_factorial(&rat(3), 5), rat(0));
        assert_eq!(falling_factorial(&ratio(1, 2), 2), ratio(-1, 4));
    }

    #[test]
    fn falling_is_signed_rising_of_negation() {
        for n in 0..8 {
            for x in [ratio(3, 7), rat(-4), rat(11), ratio(-5, 2)] {
                let sign = if n % 2 == 0 { rat(1) } else { rat(-1) };
                assert_eq!(
                    falling_factorial(&x, n),
                    sign * rising_factorial(&-x.clone(), n)
                );
            }
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(&rat(23), 2), rat(253));
        assert_eq!(binomial(&ratio(-9, 4), 0), rat(1));
        assert_eq!(binomial(&rat(4), 6), rat(0));
        assert_eq!(binomial(&rat(-1), 3), rat(-1));
        assert_eq!(binomial_int(10, 3), BigInt::from(120));
    }

    #[test]
    fn ell_examples() {
        assert_eq!(ell(0), BigUint::from(1u32));
        assert_eq!(ell(1), BigUint::from(1u32));
        assert_eq!(ell(5), BigUint::from(60u32));
        assert_eq!(ell(10), BigUint::from(2520u32));
    }

    #[test]
    fn ell_equals_binomial_set_lcm() {
        let mut lcm = BigUint::one();
        for n in 0..=30u64 {
            for j in 0..=n {
                let c = binomial_int(n as i64, j as u32).to_biguint().unwrap();
                lcm = lcm.lcm(&c);
            }
            assert_eq!(lcm, ell(n), "n = {n}");
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(val_p_factorial(10, 2), 8);
        assert_eq!(val_p_factorial(0, 7), 0);
        assert_eq!(val_p_factorial(100, 5), 24);
    }

    #[test]
    fn legendre_matches_multiplied_out_factorial() {
        let primes = primes_upto(100);
        let mut fact = BigUint::one();
        for n in 0..=500u64 {
            if n > 0 {
                fact *= n;
            }
            let f = rat(BigInt::from(fact.clone()));
            for &p in &primes {
                assert_eq!(val_p(&f, p).unwrap(), val_p_factorial(n, p) as i64);
            }
        }
    }

    #[test]
    fn legendre_matches_summed_valuations_to_ten_thousand() {
        for &p in &primes_upto(100) {
            let mut acc = 0u64;
            for n in 1..=10_000u64 {
                acc += val_p_u64(n, p) as u64;
                assert_eq!(acc, val_p_factorial(n, p));
            }
        }
    }

    #[test]
    fn val_p_examples() {
        assert_eq!(val_p(&rat(12), 2), Ok(2));
        assert_eq!(val_p(&ratio(3, 20), 5), Ok(-1));
        assert_eq!(val_p(&rat(7), 5), Ok(0));
        assert_eq!(val_p(&rat(0), 5), Err(ArithError::ValuationOfZero));
        assert_eq!(val_p(&rat(8), 4), Err(ArithError::NotPrime(4)));
    }

    #[test]
    fn floor_log_values() {
        assert_eq!(floor_log(1, 2), 0);
        assert_eq!(floor_log(8, 2), 3);
        assert_eq!(floor_log(26, 3), 2);
        assert_eq!(floor_log(27, 3), 3);
        assert_eq!(floor_log(u64::MAX, 2), 63);
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000u64 {
            let td = n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime_u64(n), td, "n = {n}");
        }
        assert!(is_prime_u64(2_305_843_009_213_693_951));
        assert!(!is_prime_u64(3_215_031_751));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rat() -> impl Strategy<Value = ExactRational> {
            (-50i64..50, 1i64..12).prop_map(|(n, d)| ratio(n, d))
        }

        proptest! {
            #[test]
            fn rising_splits(x in small_rat(), a in 0u32..8, b in 0u32..8) {
                let lhs = rising_factorial(&x, a) * rising_factorial(&(x.clone() + rat(a)), b);
                prop_assert_eq!(lhs, rising_factorial(&x, a + b));
            }

            #[test]
            fn valuation_table_round_trips(n in -100_000i64..100_000, d in 1i64..100_000) {
                prop_assume!(n != 0);
                let x = ratio(n, d);
                let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
                let t = ValuationTable::factor_over(&x, &primes).unwrap();
                prop_assert_eq!(t.reconstruct(), x.clone());
                for (&p, &e) in &t.entries {
                    prop_assert_eq!(val_p(&x, p).unwrap(), e);
                }
            }
        }
    }
}
