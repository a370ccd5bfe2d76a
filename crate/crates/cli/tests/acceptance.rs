//! Acceptance criteria 1-9, one PASS/FAIL line each.
//!
//! `cargo test --test acceptance` runs all of them; `-- 4 9` runs a subset.
//! Each criterion fails if its check fails or its time budget is exceeded.

use std::fmt::Write as _;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tightdesign::auxiliary_h::{dixon_factor, g_closed, h_sum};
use tightdesign::design_functions::{
    intersection_numbers, lambda_si, DesignCandidate, IntersectionNumbers,
};
use tightdesign::exact_arith::{binomial_int, rat, ratio, ExactRational};
use tightdesign::identity_suite::{run_suite, Mutation};
use tightdesign::prime_engine::{
    build_sieve, dusart_gap_lower, first_occurrence_gaps, rho, rho_from_table, verify_prime_free,
    write_gap_table, GapRecord,
};
use tightdesign::search::{run_search, search_chunk, verify_window, SearchChunk, SearchConfig};
use tightdesign::upper_bound::{check_premeditation, default_r, BoundEngine, DEFAULT_PRECISION};

const SIEVE_LIMIT: u64 = 1_300_000_000;
const RHO_288: u64 = 1_294_268_491;
const CASE2_CEILING: u64 = 1_000_000_000;
const CASE3_CEILING: u64 = 15_000_000_000;
const DESK_X_MAX: u64 = 10_000_000;

struct Ctx {
    gaps: Option<Vec<GapRecord>>,
    dir: tempfile::TempDir,
}

impl Ctx {
    fn gaps(&mut self) -> &[GapRecord] {
        self.gaps
            .get_or_insert_with(|| first_occurrence_gaps(SIEVE_LIMIT, Some(288)))
    }
}

type Check = fn(&mut Ctx) -> (bool, String);

fn c1_witt(_: &mut Ctx) -> (bool, String) {
    let mut ok = true;
    let mut detail = String::new();
    for (k, lambda) in [(7i64, 1i64), (16, 52)] {
        let c = DesignCandidate::nontrivial(2, 23, k).unwrap();
        let l = lambda_si(&c, 2).unwrap();
        ok &= l == rat(lambda);
        let blocks = l.to_integer() * binomial_int(23, 4) / binomial_int(k, 4);
        ok &= blocks == binomial_int(23, 2);
        let _ = write!(detail, "lambda(23,{k})={l} blocks={blocks} ");
    }
    let roots = intersection_numbers(&DesignCandidate::nontrivial(2, 23, 7).unwrap()).unwrap();
    ok &= roots == IntersectionNumbers::Integral(vec![1, 3]);
    let _ = write!(detail, "roots(23,7)={roots:?}");
    (ok, detail)
}

fn c2_identities(_: &mut Ctx) -> (bool, String) {
    let clean = run_suite(0..=12, Mutation::None);
    let mutated = run_suite(0..=12, Mutation::PerturbRhs);
    let passed = clean.iter().filter(|r| r.passed()).count();
    let caught = mutated.iter().filter(|r| !r.passed()).count();
    let families: std::collections::BTreeSet<_> = clean.iter().map(|r| r.id).collect();
    let grids_ok = clean.iter().all(|r| {
        r.grid
            .iter()
            .zip(&r.degree_bounds)
            .all(|(g, d)| *g as u64 > *d as u64)
    });
    (
        passed == clean.len() && caught == mutated.len() && families.len() == 6 && grids_ok,
        format!(
            "families={} passed={passed}/{} mutations_caught={caught}/{}",
            families.len(),
            clean.len(),
            mutated.len()
        ),
    )
}

fn c3_closed_form(_: &mut Ctx) -> (bool, String) {
    let h = h_sum(2, 2, 23, 7).unwrap();
    let g = g_closed(2, 2, 23, 7).unwrap();
    let mut ok = h == ratio(1, 2) && h == rat(2) * g;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut points = 0;
    for s in 1..=10u32 {
        for r in (0..=s).step_by(2) {
            for _ in 0..100 {
                let k = 2 * s as i64 + 1 + rng.gen_range(0..500);
                let v = k + 2 * s as i64 + 1 + rng.gen_range(0..2000);
                ok &= h_sum(s, r, v, k).unwrap()
                    == rat(BigInt::from(dixon_factor(r))) * g_closed(s, r, v, k).unwrap();
                points += 1;
            }
        }
    }
    (ok, format!("h_sum(2,2,23,7)={h} random_points={points}"))
}

fn c4_primes(ctx: &mut Ctx) -> (bool, String) {
    let pi = build_sieve(1_000_000).unwrap().pi(1_000_000).unwrap();
    let r5 = rho(5, 1000).unwrap();
    let r11 = rho(11, 1000).unwrap();
    let r288 = rho_from_table(ctx.gaps(), 288);
    let free = r288.is_some_and(|r| verify_prime_free(r, 288).is_ok());
    (
        pi == 78498 && r5 == 23 && r11 == 113 && r288 == Some(RHO_288) && free,
        format!("pi(1e6)={pi} rho(5)={r5} rho(11)={r11} rho(288)={r288:?} prime_free={free}"),
    )
}

fn c5_case2(_: &mut Ctx) -> (bool, String) {
    let engine = BoundEngine::new(626);
    let ceiling = rat(CASE2_CEILING);
    let mut worst = rat(0);
    let mut bad = Vec::new();
    for s in 288..=626u64 {
        let rep = engine.v_upper(s, default_r(s), &ratio(s, 3));
        match &rep.exp_upper {
            Some(e) if rep.psi > 0 && e.lt(&ceiling) => worst = worst.max(e.value.clone()),
            _ => bad.push(s),
        }
    }
    (
        bad.is_empty(),
        format!("max_exp_upper={} failing_s={bad:?}", worst.ceil()),
    )
}

fn c6_case3(_: &mut Ctx) -> (bool, String) {
    let engine = BoundEngine::new(287);
    let ceiling = rat(CASE3_CEILING);
    let mut worst = (rat(0), 0);
    let mut bad = Vec::new();
    for s in 10..=287u64 {
        let rep = engine.best_bound(s, default_r(s));
        match &rep.exp_upper {
            Some(e) if rep.psi > 0 && e.lt(&ceiling) => {
                if e.value > worst.0 {
                    worst = (e.value.clone(), s);
                }
            }
            _ => bad.push(s),
        }
    }
    (
        bad.is_empty(),
        format!(
            "max_exp_upper={} at s={} failing_s={bad:?}",
            worst.0.ceil(),
            worst.1
        ),
    )
}

fn c7_case1(_: &mut Ctx) -> (bool, String) {
    let mut ok = true;
    let mut detail = String::new();
    for s in [627u64, 628, 1000, 5000] {
        let rep = check_premeditation(s);
        ok &= rep.holds();
        let _ = write!(detail, "s={s}:{} ", rep.holds());
    }
    let gap = dusart_gap_lower(288, DEFAULT_PRECISION);
    let target = ExactRational::from_integer(BigInt::from(2_000_000u64 * 288));
    ok &= gap > target;
    let _ = write!(detail, "gap_bound(288)>={}", gap.floor());
    (ok, detail)
}

fn c8_search(_: &mut Ctx) -> (bool, String) {
    let outcome = run_search(&SearchConfig::new(10, 287, DESK_X_MAX), None, false, |_| {}).unwrap();
    let hits = outcome.hits().count();
    let covered = (10..=287).all(|s| outcome.coverage(s) == DESK_X_MAX);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut agree = 0;
    let mut oracle_hits = 0;
    for _ in 0..20 {
        let s_lo = rng.gen_range(2..=30u32);
        let s_hi = s_lo + rng.gen_range(0..=4);
        let x_lo = rng.gen_range(1..5000u64);
        let x_hi = x_lo + rng.gen_range(0..800);
        let i_max = rng.gen_range(1..=s_lo.min(6));
        let fast = search_chunk(SearchChunk::pending(s_lo, s_hi, x_lo, x_hi), i_max).hits;
        let slow: Vec<_> = (s_lo..=s_hi)
            .flat_map(|s| verify_window(s, x_lo, x_hi, i_max))
            .collect();
        oracle_hits += slow.len();
        agree += (fast == slow) as usize;
    }
    (
        hits == 0 && covered && agree == 20,
        format!("x_max={DESK_X_MAX} hits={hits} full_coverage={covered} oracle_windows_agree={agree}/20 oracle_hits={oracle_hits}"),
    )
}

fn c9_determinism(ctx: &mut Ctx) -> (bool, String) {
    let table = ctx.dir.path().join("gaps.tsv");
    let mut buf = Vec::new();
    write_gap_table(ctx.gaps(), &mut buf).unwrap();
    std::fs::write(&table, buf).unwrap();
    let run = |name: &str, workers: &str| {
        let out = ctx.dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_tightdesign"))
            .args([
                "pipeline",
                "--s-range",
                "10..700",
                "--workers",
                workers,
                "--gap-table",
            ])
            .arg(&table)
            .arg("--output")
            .arg(&out)
            .status()
            .unwrap();
        (status.code(), std::fs::read(out).unwrap_or_default())
    };
    let (code_a, a) = run("a.txt", "1");
    let (code_b, b) = run("b.txt", "3");
    let lines = a.iter().filter(|&&c| c == b'\n').count();
    // Case 3 stays open without full search coverage, so the exit status is 1.
    (
        !a.is_empty() && a == b && lines == 691 && code_a == Some(1) && code_b == Some(1),
        format!(
            "certificates={lines} bytes={} identical={}",
            a.len(),
            a == b
        ),
    )
}

fn main() {
    let criteria: [(u32, &str, Check, u64); 9] = [
        (1, "witt_regression", c1_witt, 1),
        (2, "identity_suite", c2_identities, 60),
        (3, "closed_form", c3_closed_form, 30),
        (4, "prime_engine", c4_primes, 600),
        (5, "case2_bounds", c5_case2, 30),
        (6, "case3_bounds", c6_case3, 300),
        (7, "case1_boundary", c7_case1, 60),
        (8, "desk_search", c8_search, 900),
        (9, "determinism", c9_determinism, 120),
    ];
    let only: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut ctx = Ctx {
        gaps: None,
        dir: tempfile::tempdir().unwrap(),
    };
    let mut failed = 0;
    for (id, name, check, budget) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let (ok, detail) = check(&mut ctx);
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(budget);
        let pass = ok && in_time;
        failed += !pass as usize;
        println!(
            "criterion {id} {name}: {} time={:.2}s budget={budget}s {detail}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
