//! The auxiliary quadratic form `H_{s,r}` in the `h_{s,i}`, its closed form
//! `G_{s,r}`, and the normalising constant `F_{s,r}`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::design_functions::DesignError;
use crate::exact_arith::{binomial_int, ell, factorial, rat, rising_int, ExactRational};

/// `H_{s,r}`, `G_{s,r}` and `F_{s,r}` at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxiliaryValue {
    pub s: u32,
    pub r: u32,
    pub v: i64,
    pub k: i64,
    pub h_sum: ExactRational,
    pub g_closed: ExactRational,
    pub f_const: BigUint,
}

impl AuxiliaryValue {
    pub fn at(s: u32, r: u32, v: i64, k: i64) -> Result<Self, DesignError> {
        Ok(AuxiliaryValue {
            s,
            r,
            v,
            k,
            h_sum: h_sum(s, r, v, k)?,
            g_closed: g_closed(s, r, v, k)?,
            f_const: f_const(s, r),
        })
    }

    /// `H = r!/(r/2)! * G`.
    pub fn closed_form_holds(&self) -> bool {
        self.h_sum == rat(BigInt::from(dixon_factor(self.r))) * &self.g_closed
    }
}

fn check_r(s: u32, r: u32) {
    assert!(
        r.is_multiple_of(2) && r <= s,
        "r must be even with r <= s (s={s}, r={r})"
    );
}

/// `r! / (r/2)!`.
pub fn dixon_factor(r: u32) -> BigUint {
    factorial(r as u64) / factorial(r as u64 / 2)
}

/// `sum_{i=0}^{r} (-1)^i C(r,i) h_{s,s-r+i} h_{s,s-i}`.
///
/// Each `h_{s,j}` is taken over the common denominator `y^{(s)}`, so the sum
/// is formed in integers and reduced once.
pub fn h_sum(s: u32, r: u32, v: i64, k: i64) -> Result<ExactRational, DesignError> {
    check_r(s, r);
    let x = BigInt::from(k - s as i64);
    let y = BigInt::from(v - 2 * s as i64 + 1);
    let den = rising_int(&y, s);
    if den.is_zero() {
        return Err(DesignError::ZeroDenominator { what: "h", s, v, k });
    }
    // x_rise[j] = x^{(j)}, y_tail[j] = (y+j)^{(s-j)}.
    let mut x_rise = vec![BigInt::one()];
    for j in 0..=s {
        let next = &x_rise[j as usize] * (&x + j);
        x_rise.push(next);
    }
    let mut y_tail = vec![BigInt::one(); s as usize + 1];
    for j in (0..s as usize).rev() {
        y_tail[j] = &y_tail[j + 1] * (&y + j);
    }
    let num = |j: u32| &x_rise[j as usize + 1] * &y_tail[j as usize];
    let mut acc = BigInt::zero();
    for i in 0..=r {
        let term = binomial_int(r as i64, i) * num(s - r + i) * num(s - i);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(ExactRational::new(acc, &den * &den))
}

/// `G_{s,r} = (v-k-s)^{(r/2)} (k-s)^{(s-r/2+1)} (k-s)^{(s-r+1)} / (y^{(s)} y^{(s-r/2)})`
/// with rising factorials and `y = v - 2s + 1`.
pub fn g_closed(s: u32, r: u32, v: i64, k: i64) -> Result<ExactRational, DesignError> {
    check_r(s, r);
    let x = BigInt::from(k - s as i64);
    let y = BigInt::from(v - 2 * s as i64 + 1);
    let num = rising_int(&BigInt::from(v - k - s as i64), r / 2)
        * rising_int(&x, s - r / 2 + 1)
        * rising_int(&x, s - r + 1);
    let den = rising_int(&y, s) * rising_int(&y, s - r / 2);
    if den.is_zero() {
        return Err(DesignError::ZeroDenominator { what: "G", s, v, k });
    }
    Ok(ExactRational::new(num, den))
}

/// `F_{s,r} = s!^2 l_{s-1}^2 l_{s-2}^2 r!/(r/2)!`.
pub fn f_const(s: u32, r: u32) -> BigUint {
    assert!(s >= 2, "F_(s,r) needs s >= 2");
    check_r(s, r);
    let base = factorial(s as u64) * ell(s as u64 - 1) * ell(s as u64 - 2);
    &base * &base * dixon_factor(r)
}

/// Whether every prime factor of the denominator of `F_{s,r} G_{s,r}` is at
/// most `s`. Holds at design parameters; generic window points usually fail.
pub fn fg_denominator_is_smooth(s: u32, r: u32, v: i64, k: i64) -> Result<bool, DesignError> {
    let fg = g_closed(s, r, v, k)? * rat(BigInt::from(f_const(s, r)));
    let mut d = fg.denom().magnitude().clone();
    for p in 2..=s as u64 {
        let p = BigUint::from(p);
        while (&d % &p).is_zero() {
            d /= &p;
        }
    }
    Ok(d.is_one())
}

/// Exact left side of the specialised Dixon identity,
/// `sum_i (-1)^i C(r,i) (k-r+1)^{(i)} (s-v)^{(i)} / ((-k)^{(i)} (v-s-r+1)^{(i)})`.
pub fn dixon_lhs(s: u32, r: u32, v: i64, k: i64) -> Option<ExactRational> {
    let s = s as i64;
    let mut acc = ExactRational::zero();
    for i in 0..=r {
        let num =
            rising_int(&BigInt::from(k - r as i64 + 1), i) * rising_int(&BigInt::from(s - v), i);
        let den =
            rising_int(&BigInt::from(-k), i) * rising_int(&BigInt::from(v - s - r as i64 + 1), i);
        if den.is_zero() {
            return None;
        }
        let term = rat(binomial_int(r as i64, i)) * ExactRational::new(num, den);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Some(acc)
}

/// Exact right side, `r_{(r/2)} (v-k-s)^{(r/2)} / (k_{(r/2)} (v-s-r+1)^{(r/2)})`.
pub fn dixon_rhs(s: u32, r: u32, v: i64, k: i64) -> Option<ExactRational> {
    let s = s as i64;
    let h = r / 2;
    let num = crate::exact_arith::falling_int(&BigInt::from(r), h)
        * rising_int(&BigInt::from(v - k - s), h);
    let den = crate::exact_arith::falling_int(&BigInt::from(k), h)
        * rising_int(&BigInt::from(v - s - r as i64 + 1), h);
    if den.is_zero() {
        None
    } else {
        Some(ExactRational::new(num, den))
    }
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a ExactRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
