//! Polynomial identity checks by exact evaluation on integer grids.
//!
//! Every identity is a polynomial identity (or becomes one after clearing
//! denominators that factor into univariate linear terms). A grid with more
//! points per variable than the degree bound in that variable, all off the
//! denominator zero set, turns agreement into a proof.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::auxiliary_h::{dixon_factor, dixon_lhs, dixon_rhs, g_closed, h_sum};
use crate::design_functions::{alpha_si, h_si, lambda_si, DesignCandidate};
use crate::exact_arith::{
    binomial, factorial, falling_factorial, rat, rising_factorial, ExactRational,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    /// `1` as a combination of the `lambda/h_{s,s}` and `alpha/h_{s,s}` bases, in `Q[v, k]`.
    Logopedia,
    /// `1` as a combination of `(k-s+1)^{(i-1)}` and `k_{(s-i)}`, in `Q[k]`.
    Cetology,
    /// `lambda_{s,i+1}/h_{s,s}` and `alpha_{s,s-i}/h_{s,s}` in closed form.
    MangeriteUnfarrowed,
    /// `alpha_{s,i}/h_{s,i}` and `h_{s,s}/h_{s,i}` in closed form.
    SpanglyPolytonalism,
    /// Terminating Dixon sum at `a = -r`.
    DixonSpecialization,
    /// `H_{s,r} = r!/(r/2)! G_{s,r}`.
    Administration,
}

impl IdentityId {
    pub const ALL: [IdentityId; 6] = [
        IdentityId::Logopedia,
        IdentityId::Cetology,
        IdentityId::MangeriteUnfarrowed,
        IdentityId::SpanglyPolytonalism,
        IdentityId::DixonSpecialization,
        IdentityId::Administration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Logopedia => "LOGOPEDIA",
            IdentityId::Cetology => "CETOLOGY",
            IdentityId::MangeriteUnfarrowed => "MANGERITE_UNFARROWED",
            IdentityId::SpanglyPolytonalism => "SPANGLY_POLYTONALISM",
            IdentityId::DixonSpecialization => "DIXON_SPECIALIZATION",
            IdentityId::Administration => "ADMINISTRATION",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

/// Deliberate corruption of the right-hand side, used to show a check can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// Add 1 to the coefficient of the first right-hand basis term.
    PerturbRhs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub s: u32,
    /// `i` or `r`, where the identity has one.
    pub extra: Option<u32>,
    /// Points per variable, in the order `(v, k)` or `(k)`.
    pub grid: Vec<usize>,
    pub degree_bounds: Vec<u32>,
    /// Coordinate values passed over because a denominator vanished there.
    pub skipped: usize,
    pub verdict: Verdict,
    pub counterexample: Option<Vec<i64>>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn grid_size(&self) -> usize {
        self.grid.iter().product()
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.grid.iter().map(|d| d.to_string()).collect();
        let bounds: Vec<String> = self.degree_bounds.iter().map(|d| d.to_string()).collect();
        write!(f, "id={} s={}", self.id, self.s)?;
        match (self.id, self.extra) {
            (IdentityId::DixonSpecialization | IdentityId::Administration, Some(r)) => {
                write!(f, " r={r}")?
            }
            (_, Some(i)) => write!(f, " i={i}")?,
            _ => {}
        }
        write!(
            f,
            " grid={} degree_bounds={} skipped={} verdict={}",
            dims.join("x"),
            bounds.join(","),
            self.skipped,
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        if let Some(p) = &self.counterexample {
            let p: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            write!(f, " counterexample=({})", p.join(","))?;
        }
        Ok(())
    }
}

/// One grid coordinate: `count` consecutive integers from `start` that pass `ok`.
struct Axis<F: Fn(i64) -> bool> {
    start: i64,
    count: usize,
    ok: F,
}

fn build_axis<F: Fn(i64) -> bool>(axis: Axis<F>) -> (Vec<i64>, usize) {
    let mut pts = Vec::with_capacity(axis.count);
    let mut skipped = 0;
    let mut c = axis.start;
    while pts.len() < axis.count {
        if (axis.ok)(c) {
            pts.push(c);
        } else {
            skipped += 1;
        }
        c += 1;
    }
    (pts, skipped)
}

/// Evaluates `sides` at every grid point; each returned pair must agree.
fn run_grid(
    id: IdentityId,
    s: u32,
    extra: Option<u32>,
    axes: Vec<(Vec<i64>, usize)>,
    degree_bounds: Vec<u32>,
    sides: impl Fn(&[i64]) -> Vec<(ExactRational, ExactRational)>,
) -> IdentityReport {
    let grid: Vec<usize> = axes.iter().map(|(p, _)| p.len()).collect();
    for (g, d) in grid.iter().zip(&degree_bounds) {
        assert!(
            *g as u64 > *d as u64,
            "{id}: grid {g} does not exceed degree {d}"
        );
    }
    let skipped = axes.iter().map(|(_, k)| k).sum();
    let mut point = vec![0i64; axes.len()];
    let mut counterexample = None;
    let total: usize = grid.iter().product();
    'outer: for mut idx in 0..total {
        for (d, (pts, _)) in axes.iter().enumerate().rev() {
            point[d] = pts[idx % pts.len()];
            idx /= pts.len();
        }
        for (l, r) in sides(&point) {
            if l != r {
                counterexample = Some(point.clone());
                break 'outer;
            }
        }
    }
    IdentityReport {
        id,
        s,
        extra,
        grid,
        degree_bounds,
        skipped,
        verdict: if counterexample.is_none() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        counterexample,
    }
}

fn fact(n: u32) -> ExactRational {
    rat(BigInt::from(factorial(n as u64)))
}

fn binom(n: i64, k: u32) -> ExactRational {
    binomial(&rat(n), k)
}

fn sign(e: u32) -> ExactRational {
    if e.is_multiple_of(2) {
        rat(1)
    } else {
        rat(-1)
    }
}

fn perturb(mutation: Mutation, rhs: ExactRational, first_term: ExactRational) -> ExactRational {
    match mutation {
        Mutation::None => rhs,
        Mutation::PerturbRhs => rhs + first_term,
    }
}

fn always(_: i64) -> bool {
    true
}

/// Right side of the two-variable identity; equals 1 identically.
fn logopedia_rhs(s: u32, v: i64, k: i64, mutation: Mutation) -> ExactRational {
    let si = s as i64;
    let y = rat(v - 2 * si + 1);
    let mut total = rat(0);
    let mut first = None;
    for i in 0..s {
        let ii = i as i64;
        let mut inner = rat(0);
        for j in i + 1..s {
            let jj = j as i64;
            inner += sign(i + j) * fact(j - i - 1) / (fact(s - i - 1) * fact(j - 1))
                * binom(k - jj - 1, s - j - 1)
                * binom(k - ii - 1, j - i - 1)
                * binom(v - si, i);
        }
        let basis = rising_factorial(&y, s - i - 1) * falling_factorial(&rat(k - 1), i);
        if first.is_none() {
            first = Some(basis.clone());
        }
        total += inner * basis;

        let mut inner = rat(0);
        for j in 1..=i {
            let jj = j as i64;
            inner += sign(i + j) * fact(i - j) / (fact(i) * fact(s - j - 1))
                * binom(k - jj - 1, i - j)
                * binom(k - 1, j - 1)
                * binom(v - si - ii - 1, s - i - 1);
        }
        total += inner
            * falling_factorial(&rat(v - si), i)
            * rising_factorial(&rat(k - si + 1), s - i - 1);
    }
    perturb(mutation, total, first.unwrap_or_else(|| rat(0)))
}

/// `1 = sum(...) y^{(s-i-1)} (k-1)_{(i)} + sum(...) (v-s)_{(i)} (k-s+1)^{(s-i-1)}` in `Q[v, k]`.
pub fn verify_two_var_identity(s: u32) -> IdentityReport {
    verify_two_var_identity_with(s, Mutation::None)
}

pub fn verify_two_var_identity_with(s: u32, mutation: Mutation) -> IdentityReport {
    assert!(s >= 2);
    let si = s as i64;
    let v_axis = build_axis(Axis {
        start: 4 * si + 2,
        count: s as usize + 1,
        ok: always,
    });
    let k_axis = build_axis(Axis {
        start: 2 * si + 2,
        count: s as usize,
        ok: always,
    });
    run_grid(
        IdentityId::Logopedia,
        s,
        None,
        vec![v_axis, k_axis],
        vec![s - 1, s - 2],
        |p| vec![(rat(1), logopedia_rhs(s, p[0], p[1], mutation))],
    )
}

fn cetology_rhs(s: u32, i: u32, k: i64, mutation: Mutation) -> ExactRational {
    let si = s as i64;
    let ii = i as i64;
    let mut a = rat(0);
    for j in 0..s - i {
        let jj = j as i64;
        a += sign(s - j) * fact(s - i - j) / fact(s - j - 1)
            * binom(k, j)
            * binom(k - jj - 1, s - i - j - 1);
    }
    let mut b = rat(0);
    for j in s - i + 1..s {
        let jj = j as i64;
        b += sign(s - j - 1) * fact(i + j - s) / fact(j)
            * binom(k - jj - 1, s - j - 1)
            * binom(k - si + ii - 1, i + j - s - 1);
    }
    let first = rising_factorial(&rat(k - si + 1), i - 1);
    let total = a * &first + b * falling_factorial(&rat(k), s - i);
    perturb(mutation, total, first)
}

/// `1 = (...) (k-s+1)^{(i-1)} + (...) k_{(s-i)}` in `Q[k]`, for `1 <= i <= s`.
pub fn verify_one_var_identity(s: u32, i: u32) -> IdentityReport {
    verify_one_var_identity_with(s, i, Mutation::None)
}

pub fn verify_one_var_identity_with(s: u32, i: u32, mutation: Mutation) -> IdentityReport {
    assert!(s >= 2 && (1..=s).contains(&i));
    let k_axis = build_axis(Axis {
        start: 2 * s as i64 + 2,
        count: (s - i + 2) as usize,
        ok: always,
    });
    run_grid(
        IdentityId::Cetology,
        s,
        Some(i),
        vec![k_axis],
        vec![s - i],
        |p| vec![(rat(1), cetology_rhs(s, i, p[0], mutation))],
    )
}

/// Denominator zeros of `lambda`, `alpha`, `h` lie at `v <= 2s-1` or `k <= s`.
fn design_v_ok(s: u32) -> impl Fn(i64) -> bool {
    move |v| v > 2 * s as i64 - 1
}

fn design_k_ok(s: u32) -> impl Fn(i64) -> bool {
    move |k| k > s as i64
}

/// For `0 <= i <= s-1`:
/// `s! lambda_{s,i+1}/h_{s,s} = y^{(s-i-1)} (k-s-1)_{(i)}` and
/// `i! i! (s-i)!/s! C(k,i) alpha_{s,s-i}/h_{s,s} = (v-s)_{(i)} (k-s+1)^{(s-i-1)}`.
pub fn verify_lambda_alpha_quotients(s: u32, i: u32) -> IdentityReport {
    verify_lambda_alpha_quotients_with(s, i, Mutation::None)
}

pub fn verify_lambda_alpha_quotients_with(s: u32, i: u32, mutation: Mutation) -> IdentityReport {
    assert!(s >= 2 && i < s);
    let si = s as i64;
    // Cleared by (v-s)_{(i+1)} x^{(s+1)} and y^{(s-i)} x^{(s+1)} respectively.
    let bound_v = s;
    let bound_k = (s + i + 1).max(2 * s - i);
    let v_axis = build_axis(Axis {
        start: 4 * si + 2,
        count: bound_v as usize + 2,
        ok: design_v_ok(s),
    });
    let k_axis = build_axis(Axis {
        start: 2 * si + 2,
        count: bound_k as usize + 2,
        ok: design_k_ok(s),
    });
    run_grid(
        IdentityId::MangeriteUnfarrowed,
        s,
        Some(i),
        vec![v_axis, k_axis],
        vec![bound_v, bound_k],
        |p| {
            let (v, k) = (p[0], p[1]);
            let c = DesignCandidate::new(s, v, k);
            let hss = h_si(&c, s).expect("grid avoids denominator zeros");
            let y = rat(c.y());
            let l1 = fact(s) * lambda_si(&c, i + 1).expect("grid avoids zeros") / &hss;
            let r1 = rising_factorial(&y, s - i - 1) * falling_factorial(&rat(k - si - 1), i);
            let l2 = fact(i) * fact(i) * fact(s - i) / fact(s)
                * binom(k, i)
                * alpha_si(&c, s - i).expect("grid avoids zeros")
                / &hss;
            let r2 =
                falling_factorial(&rat(v - si), i) * rising_factorial(&rat(k - si + 1), s - i - 1);
            let r1 = perturb(mutation, r1.clone(), r1);
            vec![(l1, r1), (l2, r2)]
        },
    )
}

/// For `1 <= i <= s`:
/// `i! (s-i)!/s! alpha_{s,i}/h_{s,i} = (k-s+1)^{(i-1)}` and
/// `(s-i)! C(v-s, s-i) h_{s,s}/h_{s,i} = k_{(s-i)}`.
pub fn verify_h_quotients(s: u32, i: u32) -> IdentityReport {
    verify_h_quotients_with(s, i, Mutation::None)
}

pub fn verify_h_quotients_with(s: u32, i: u32, mutation: Mutation) -> IdentityReport {
    assert!(s >= 2 && (1..=s).contains(&i));
    let si = s as i64;
    // Cleared by y^{(i)} x^{(i+1)} and y^{(s)} x^{(i+1)} respectively.
    let bound_v = s;
    let bound_k = (2 * i).max(s + 1);
    let v_axis = build_axis(Axis {
        start: 4 * si + 2,
        count: bound_v as usize + 2,
        ok: design_v_ok(s),
    });
    let k_axis = build_axis(Axis {
        start: 2 * si + 2,
        count: bound_k as usize + 2,
        ok: design_k_ok(s),
    });
    run_grid(
        IdentityId::SpanglyPolytonalism,
        s,
        Some(i),
        vec![v_axis, k_axis],
        vec![bound_v, bound_k],
        |p| {
            let (v, k) = (p[0], p[1]);
            let c = DesignCandidate::new(s, v, k);
            let hsi = h_si(&c, i).expect("grid avoids denominator zeros");
            let hss = h_si(&c, s).expect("grid avoids denominator zeros");
            let l1 = fact(i) * fact(s - i) / fact(s) * alpha_si(&c, i).expect("grid avoids zeros")
                / &hsi;
            let r1 = rising_factorial(&rat(k - si + 1), i - 1);
            let l2 = fact(s - i) * binom(v - si, s - i) * hss / &hsi;
            let r2 = falling_factorial(&rat(k), s - i);
            let r1 = perturb(mutation, r1.clone(), r1);
            vec![(l1, r1), (l2, r2)]
        },
    )
}

/// The terminating Dixon sum with `a = -r`, `b = k-r+1`, `c = s-v`, as a
/// rational function identity in `(v, k)`.
pub fn verify_dixon_specialization(s: u32, r: u32) -> IdentityReport {
    verify_dixon_specialization_at(s, r, 4 * s as i64 + 2, 2 * s as i64 + 2, Mutation::None)
}

pub fn verify_dixon_specialization_with(s: u32, r: u32, mutation: Mutation) -> IdentityReport {
    verify_dixon_specialization_at(s, r, 4 * s as i64 + 2, 2 * s as i64 + 2, mutation)
}

/// As [`verify_dixon_specialization`], with the grid starting at `(v0, k0)`.
/// Coordinates on the denominator zero set are skipped.
pub fn verify_dixon_specialization_at(
    s: u32,
    r: u32,
    v0: i64,
    k0: i64,
    mutation: Mutation,
) -> IdentityReport {
    assert!(r.is_multiple_of(2) && r <= s);
    let (si, ri) = (s as i64, r as i64);
    // (-k)^{(i)} and k_{(r/2)} vanish for 0 <= k < r; (v-s-r+1)^{(i)} for s <= v <= s+r-1.
    let v_ok = move |v: i64| !(si..=si + ri - 1).contains(&v);
    let k_ok = move |k: i64| !(0..ri).contains(&k);
    // Cleared by (-k)^{(r)} (v-s-r+1)^{(r)} k_{(r/2)} (v-s-r+1)^{(r/2)}.
    let bound = 3 * r / 2;
    let n = 2 * r as usize + 2;
    let v_axis = build_axis(Axis {
        start: v0,
        count: n,
        ok: v_ok,
    });
    let k_axis = build_axis(Axis {
        start: k0,
        count: n,
        ok: k_ok,
    });
    run_grid(
        IdentityId::DixonSpecialization,
        s,
        Some(r),
        vec![v_axis, k_axis],
        vec![bound, bound],
        |p| {
            let (v, k) = (p[0], p[1]);
            let l = dixon_lhs(s, r, v, k).expect("grid avoids denominator zeros");
            let rhs = dixon_rhs(s, r, v, k).expect("grid avoids denominator zeros");
            vec![(l, perturb(mutation, rhs.clone(), rhs))]
        },
    )
}

/// `H_{s,r} = r!/(r/2)! G_{s,r}` for even `r <= s`, including `s = r = 0`.
pub fn verify_closed_form(s: u32, r: u32) -> IdentityReport {
    verify_closed_form_with(s, r, Mutation::None)
}

pub fn verify_closed_form_with(s: u32, r: u32, mutation: Mutation) -> IdentityReport {
    assert!(r.is_multiple_of(2) && r <= s);
    let si = s as i64;
    // Denominators are rising factorials of y = v - 2s + 1 of length <= s; H
    // clears with y^{(s)} y^{(s)}, G with y^{(s)} y^{(s-r/2)}.
    let v_ok = move |v: i64| {
        let y = v - 2 * si + 1;
        !(y <= 0 && y > -si)
    };
    let bound_v = 4 * s - r / 2;
    let bound_k = 2 * s - r + 2;
    let nv = (4 * s as usize + 2).max(bound_v as usize + 1);
    let nk = (4 * s as usize + 2).max(bound_k as usize + 1);
    let v_axis = build_axis(Axis {
        start: 4 * si + 2,
        count: nv,
        ok: v_ok,
    });
    let k_axis = build_axis(Axis {
        start: 2 * si + 2,
        count: nk,
        ok: always,
    });
    let factor = rat(BigInt::from(dixon_factor(r)));
    run_grid(
        IdentityId::Administration,
        s,
        Some(r),
        vec![v_axis, k_axis],
        vec![bound_v, bound_k],
        |p| {
            let (v, k) = (p[0], p[1]);
            let h = h_sum(s, r, v, k).expect("grid avoids denominator zeros");
            let g = g_closed(s, r, v, k).expect("grid avoids denominator zeros");
            let rhs = &factor * &g;
            vec![(h, perturb(mutation, rhs, g))]
        },
    )
}

/// Every instance of all six families with `s` in `s_range` (the families
/// needing `s >= 2` skip smaller `s`), in a fixed order.
pub fn run_suite(
    s_range: std::ops::RangeInclusive<u32>,
    mutation: Mutation,
) -> Vec<IdentityReport> {
    let mut jobs: Vec<(IdentityId, u32, Option<u32>)> = Vec::new();
    for s in s_range {
        if s >= 2 {
            jobs.push((IdentityId::Logopedia, s, None));
            for i in 1..=s {
                jobs.push((IdentityId::Cetology, s, Some(i)));
            }
            for i in 0..s {
                jobs.push((IdentityId::MangeriteUnfarrowed, s, Some(i)));
            }
            for i in 1..=s {
                jobs.push((IdentityId::SpanglyPolytonalism, s, Some(i)));
            }
        }
        for r in (0..=s).step_by(2) {
            jobs.push((IdentityId::DixonSpecialization, s, Some(r)));
            jobs.push((IdentityId::Administration, s, Some(r)));
        }
    }
    jobs.sort();
    jobs.par_iter()
        .map(|&(id, s, extra)| run_one(id, s, extra, mutation))
        .collect()
}

pub fn run_one(id: IdentityId, s: u32, extra: Option<u32>, mutation: Mutation) -> IdentityReport {
    let e = || extra.expect("identity needs an index");
    match id {
        IdentityId::Logopedia => verify_two_var_identity_with(s, mutation),
        IdentityId::Cetology => verify_one_var_identity_with(s, e(), mutation),
        IdentityId::MangeriteUnfarrowed => verify_lambda_alpha_quotients_with(s, e(), mutation),
        IdentityId::SpanglyPolytonalism => verify_h_quotients_with(s, e(), mutation),
        IdentityId::DixonSpecialization => verify_dixon_specialization_with(s, e(), mutation),
        IdentityId::Administration => verify_closed_form_with(s, e(), mutation),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_var_examples() {
        assert!(verify_two_var_identity(2).passed());
        let r = verify_two_var_identity(5);
        assert!(r.passed());
        assert_eq!(r.grid, vec![6, 5]);
        let m = verify_two_var_identity_with(2, Mutation::PerturbRhs);
        assert_eq!(m.verdict, Verdict::Fail);
        assert!(m.counterexample.is_some());
    }

    #[test]
    fn two_var_holds_on_the_small_square() {
        // The grid {s..2s-1} x {1..s-1} also determines the polynomial.
        for s in 2..=6u32 {
            for v in s as i64..2 * s as i64 {
                for k in 1..s as i64 {
                    assert_eq!(logopedia_rhs(s, v, k, Mutation::None), rat(1));
                }
            }
        }
    }

    #[test]
    fn one_var_examples() {
        assert!(verify_one_var_identity(3, 1).passed());
        assert!(verify_one_var_identity(6, 3).passed());
        assert!(!verify_one_var_identity_with(6, 3, Mutation::PerturbRhs).passed());
        assert!(!verify_one_var_identity_with(3, 3, Mutation::PerturbRhs).passed());
    }

    #[test]
    fn quotient_examples() {
        for s in 2..=5 {
            for i in 0..s {
                assert!(verify_lambda_alpha_quotients(s, i).passed());
                assert!(!verify_lambda_alpha_quotients_with(s, i, Mutation::PerturbRhs).passed());
            }
            for i in 1..=s {
                assert!(verify_h_quotients(s, i).passed());
                assert!(!verify_h_quotients_with(s, i, Mutation::PerturbRhs).passed());
            }
        }
    }

    #[test]
    fn printed_lambda_quotient_fails_for_positive_i() {
        // (k-1)_{(i)} in place of (k-s-1)_{(i)} is wrong as soon as i >= 1.
        let c = DesignCandidate::new(5, 40, 13);
        let lhs = fact(5) * lambda_si(&c, 2).unwrap() / h_si(&c, 5).unwrap();
        assert_eq!(lhs, rat(229152));
        let printed = rising_factorial(&rat(c.y()), 3) * falling_factorial(&rat(12), 1);
        assert_eq!(printed, rat(392832));
    }

    #[test]
    fn dixon_examples() {
        let r = verify_dixon_specialization(2, 2);
        assert!(r.passed());
        assert_eq!(r.grid, vec![6, 6]);
        assert!(verify_dixon_specialization(4, 4).passed());
        assert!(verify_dixon_specialization(5, 0).passed());
        assert!(!verify_dixon_specialization_with(4, 2, Mutation::PerturbRhs).passed());
        assert!(!verify_dixon_specialization_with(3, 0, Mutation::PerturbRhs).passed());
    }

    #[test]
    fn dixon_grid_skips_denominator_zeros() {
        let r = verify_dixon_specialization_at(4, 4, 2, 0, Mutation::None);
        assert!(r.passed());
        // v in 4..=7 and k in 0..=3 are passed over.
        assert_eq!(r.skipped, 8);
        assert_eq!(r.grid, vec![10, 10]);
    }

    #[test]
    fn closed_form_examples() {
        assert!(verify_closed_form(2, 2).passed());
        assert!(verify_closed_form(3, 2).passed());
        let z = verify_closed_form(0, 0);
        assert!(z.passed());
        assert!(z
            .grid
            .iter()
            .zip(&z.degree_bounds)
            .all(|(g, d)| *g as u32 > *d));
        assert!(!verify_closed_form_with(3, 2, Mutation::PerturbRhs).passed());
        assert!(!verify_closed_form_with(0, 0, Mutation::PerturbRhs).passed());
    }

    #[test]
    fn report_line() {
        let r = verify_dixon_specialization(2, 2);
        assert_eq!(
            r.to_string(),
            "id=DIXON_SPECIALIZATION s=2 r=2 grid=6x6 degree_bounds=3,3 skipped=0 verdict=PASS"
        );
    }

    #[test]
    fn suite_through_six() {
        let reports = run_suite(0..=6, Mutation::None);
        assert!(
            reports.iter().all(|r| r.passed()),
            "{:?}",
            reports.iter().find(|r| !r.passed())
        );
        for id in IdentityId::ALL {
            assert!(reports.iter().any(|r| r.id == id));
        }
        let mutated = run_suite(2..=4, Mutation::PerturbRhs);
        assert!(mutated.iter().all(|r| !r.passed()));
    }
}
