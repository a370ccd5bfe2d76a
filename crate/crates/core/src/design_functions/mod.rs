//! Exact evaluation of the design parameter families `lambda_{s,i}`,
//! `alpha_{s,i}`, `h_{s,i}`, the Wilson polynomial, and extraction of integral
//! intersection numbers.
//!
//! Coordinates: `x = k - s`, `y = v - 2s + 1`.

mod roots;

pub use roots::{eval_int, integer_roots_in_range};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_arith::{
    binomial, factorial, falling_factorial, is_integral, rat, rising_factorial, ExactRational,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesignError {
    #[error("zero denominator evaluating {what} at s={s}, v={v}, k={k}")]
    ZeroDenominator {
        what: &'static str,
        s: u32,
        v: i64,
        k: i64,
    },
    #[error("(s={s}, v={v}, k={k}) is outside the nontriviality window k >= 2s+1, v-k >= 2s+1")]
    OutsideWindow { s: u32, v: i64, k: i64 },
    #[error("index i={i} exceeds s={s}")]
    IndexOutOfRange { s: u32, i: u32 },
    #[error("s must be at least 1")]
    DegenerateS,
}

/// A parameter triple `(s, v, k)`.
///
/// [`DesignCandidate::new`] accepts any integers (the identity suite evaluates
/// the families far outside the design range); [`DesignCandidate::nontrivial`]
/// enforces `k >= 2s+1` and `v - k >= 2s+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DesignCandidate {
    pub s: u32,
    pub v: i64,
    pub k: i64,
    checked: bool,
}

impl DesignCandidate {
    pub fn new(s: u32, v: i64, k: i64) -> Self {
        DesignCandidate {
            s,
            v,
            k,
            checked: false,
        }
    }

    pub fn nontrivial(s: u32, v: i64, k: i64) -> Result<Self, DesignError> {
        if s == 0 {
            return Err(DesignError::DegenerateS);
        }
        let w = 2 * s as i64 + 1;
        if k < w || v - k < w {
            return Err(DesignError::OutsideWindow { s, v, k });
        }
        Ok(DesignCandidate {
            s,
            v,
            k,
            checked: true,
        })
    }

    pub fn is_nontrivial(&self) -> bool {
        self.checked
    }

    pub fn x(&self) -> i64 {
        self.k - self.s as i64
    }

    pub fn y(&self) -> i64 {
        self.v - 2 * self.s as i64 + 1
    }

    fn require_window(&self) -> Result<(), DesignError> {
        if self.checked {
            Ok(())
        } else {
            DesignCandidate::nontrivial(self.s, self.v, self.k).map(|_| ())
        }
    }

    fn zero_den(&self, what: &'static str) -> DesignError {
        DesignError::ZeroDenominator {
            what,
            s: self.s,
            v: self.v,
            k: self.k,
        }
    }

    fn check_index(&self, i: u32) -> Result<(), DesignError> {
        if i > self.s {
            Err(DesignError::IndexOutOfRange { s: self.s, i })
        } else {
            Ok(())
        }
    }
}

fn divide(
    num: ExactRational,
    den: ExactRational,
    err: DesignError,
) -> Result<ExactRational, DesignError> {
    if den.is_zero() {
        Err(err)
    } else {
        Ok(num / den)
    }
}

/// `lambda_{s,i} = k^{(s+i) falling} / (s! (v-s)^{(i) falling})`.
pub fn lambda_si(c: &DesignCandidate, i: u32) -> Result<ExactRational, DesignError> {
    c.check_index(i)?;
    let s = c.s;
    let num = falling_factorial(&rat(c.k), s + i);
    let den = falling_factorial(&rat(c.v - s as i64), i) * rat(BigInt::from(factorial(s as u64)));
    divide(num, den, c.zero_den("lambda"))
}

/// `alpha_{s,i} = C(s,i) x^{(i)} (x+1)^{(i)} / y^{(i)}` (rising factorials).
pub fn alpha_si(c: &DesignCandidate, i: u32) -> Result<ExactRational, DesignError> {
    c.check_index(i)?;
    alpha_xy(c.s, c.x(), c.y(), i).map_err(|_| c.zero_den("alpha"))
}

/// `alpha_{s,i}` in search coordinates.
pub fn alpha_xy(s: u32, x: i64, y: i64, i: u32) -> Result<ExactRational, DesignError> {
    let num =
        binomial(&rat(s), i) * rising_factorial(&rat(x), i) * rising_factorial(&rat(x + 1), i);
    let den = rising_factorial(&rat(y), i);
    divide(
        num,
        den,
        DesignError::ZeroDenominator {
            what: "alpha",
            s,
            v: y + 2 * s as i64 - 1,
            k: x + s as i64,
        },
    )
}

/// `h_{s,i} = x^{(i+1)} / y^{(i)}` (rising factorials).
pub fn h_si(c: &DesignCandidate, i: u32) -> Result<ExactRational, DesignError> {
    c.check_index(i)?;
    let num = rising_factorial(&rat(c.x()), i + 1);
    let den = rising_factorial(&rat(c.y()), i);
    divide(num, den, c.zero_den("h"))
}

/// The Wilson polynomial `Phi_s(z)` as monomial coefficients, lowest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WilsonPolynomial {
    pub s: u32,
    pub coefficients: Vec<ExactRational>,
}

impl WilsonPolynomial {
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, z: &ExactRational) -> ExactRational {
        self.coefficients
            .iter()
            .rev()
            .fold(ExactRational::zero(), |acc, c| acc * z + c)
    }

    /// Scaled to leading coefficient 1.
    pub fn monic(&self) -> WilsonPolynomial {
        let d = self.degree().expect("zero polynomial has no monic form");
        let lead = self.coefficients[d].clone();
        WilsonPolynomial {
            s: self.s,
            coefficients: self.coefficients[..=d].iter().map(|c| c / &lead).collect(),
        }
    }

    /// Primitive integer multiple with the same roots.
    pub fn integer_coefficients(&self) -> Vec<BigInt> {
        let l = self
            .coefficients
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coefficients
            .iter()
            .map(|c| (c * rat(l.clone())).to_integer())
            .collect()
    }
}

/// Monomial coefficients of `z (z-1) ... (z-n+1)`.
fn falling_poly(n: u32) -> Vec<BigInt> {
    let mut p = vec![BigInt::one()];
    for j in 0..n {
        let mut next = vec![BigInt::zero(); p.len() + 1];
        for (d, c) in p.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= c * BigInt::from(j);
        }
        p = next;
    }
    p
}

fn accumulate(acc: &mut [ExactRational], scale: &ExactRational, basis: &[BigInt]) {
    for (d, b) in basis.iter().enumerate() {
        acc[d] += scale * rat(b.clone());
    }
}

/// `Phi_s(z) = sum_i (-1)^{s-i} C(v-s,i) C(k-i,s-i) C(k-i-1,s-i) / C(s,i) * C(z,i)`.
pub fn wilson_polynomial(c: &DesignCandidate) -> Result<WilsonPolynomial, DesignError> {
    c.require_window()?;
    let s = c.s;
    let mut coeffs = vec![ExactRational::zero(); s as usize + 1];
    for i in 0..=s {
        let sign = if (s - i).is_multiple_of(2) {
            rat(1)
        } else {
            rat(-1)
        };
        let w = sign
            * binomial(&rat(c.v - s as i64), i)
            * binomial(&rat(c.k - i as i64), s - i)
            * binomial(&rat(c.k - i as i64 - 1), s - i)
            / binomial(&rat(s), i)
            / rat(BigInt::from(factorial(i as u64)));
        accumulate(&mut coeffs, &w, &falling_poly(i));
    }
    Ok(WilsonPolynomial {
        s,
        coefficients: coeffs,
    })
}

/// The same polynomial assembled from the alpha values:
/// `C(v-s,s)/s! * sum_i (-1)^i alpha_{s,i} z^{(s-i) falling}`.
pub fn wilson_polynomial_alpha_form(c: &DesignCandidate) -> Result<WilsonPolynomial, DesignError> {
    c.require_window()?;
    let s = c.s;
    let front = binomial(&rat(c.v - s as i64), s) / rat(BigInt::from(factorial(s as u64)));
    let mut coeffs = vec![ExactRational::zero(); s as usize + 1];
    for i in 0..=s {
        let sign = if i % 2 == 0 { rat(1) } else { rat(-1) };
        let w = &front * sign * alpha_si(c, i)?;
        accumulate(&mut coeffs, &w, &falling_poly(s - i));
    }
    Ok(WilsonPolynomial {
        s,
        coefficients: coeffs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntersectionNumbers {
    /// All `s` roots (with multiplicity) are integers in `[0, k-1]`.
    Integral(Vec<i64>),
    NotAllIntegral,
}

/// Integer roots of `Phi_s` in `[0, k-1]`, confirmed exactly and counted with
/// multiplicity. Anything short of `s` such roots is `NotAllIntegral`.
pub fn intersection_numbers(c: &DesignCandidate) -> Result<IntersectionNumbers, DesignError> {
    let phi = wilson_polynomial(c)?;
    let ints = phi.integer_coefficients();
    let mut found = Vec::new();
    let mut remaining = phi.coefficients.clone();
    for r in integer_roots_in_range(&ints, 0, c.k - 1) {
        let root = rat(r);
        loop {
            let (q, rem) = deflate(&remaining, &root);
            if !rem.is_zero() {
                break;
            }
            remaining = q;
            found.push(r);
        }
    }
    if found.len() == c.s as usize {
        found.sort_unstable();
        Ok(IntersectionNumbers::Integral(found))
    } else {
        Ok(IntersectionNumbers::NotAllIntegral)
    }
}

/// Synthetic division by `(z - root)`: quotient and remainder.
fn deflate(p: &[ExactRational], root: &ExactRational) -> (Vec<ExactRational>, ExactRational) {
    if p.len() <= 1 {
        return (
            vec![],
            p.first().cloned().unwrap_or_else(ExactRational::zero),
        );
    }
    let mut q = vec![ExactRational::zero(); p.len() - 1];
    let mut carry = ExactRational::zero();
    for d in (0..p.len()).rev() {
        let val = &p[d] + &carry * root;
        if d == 0 {
            return (q, val);
        }
        q[d - 1] = val.clone();
        carry = val;
    }
    unreachable!()
}

/// True iff `alpha_{s,i}(x, y)` is an integer for every `i` in `1..=i_max`.
/// Tests `i = 1` first with a machine-word divisibility check.
pub fn alpha_all_integral(s: u32, x: i64, y: i64, i_max: u32) -> bool {
    if i_max == 0 {
        return true;
    }
    if x >= 0 && y >= 1 {
        let n = s as u128 * x as u128 * (x as u128 + 1);
        if !n.is_multiple_of(y as u128) {
            return false;
        }
    }
    (1..=i_max).all(|i| {
        alpha_xy(s, x, y, i)
            .map(|a| is_integral(&a))
            .unwrap_or(false)
    })
}
