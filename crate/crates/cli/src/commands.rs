use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use tightdesign::design_functions::{
    alpha_si, intersection_numbers, lambda_si, DesignCandidate, IntersectionNumbers,
};
use tightdesign::exact_arith::{binomial_int, is_integral, ExactRational};
use tightdesign::identity_suite::{run_suite, Mutation};
use tightdesign::prime_engine::{
    dusart_gap_lower, first_occurrence_gaps, read_gap_table, rho_from_table, verify_prime_free,
    write_gap_table, GapRecord,
};
use tightdesign::search::{read_checkpoint, run_search, SearchConfig};
use tightdesign::upper_bound::{default_r, BoundEngine};

use crate::args::{
    BoundsUpperArgs, Cli, Command, GapArgs, IdentitiesArgs, PipelineArgs, SearchArgs,
};
use crate::pipeline::{run_pipeline, PipelineConfig};
use crate::CliError;

pub type Out<'a> = &'a mut (dyn Write + Send);

/// Runs one subcommand. Results go to `out`, progress to `log`. `Ok(false)`
/// means a verification failed.
pub fn run(cli: Cli, out: Out, log: Out) -> Result<bool, CliError> {
    match cli.command {
        Command::Identities(a) => with_workers(a.workers, || identities(&a, out)),
        Command::Witt => witt(out),
        Command::BoundsUpper(a) => with_workers(a.workers, || bounds_upper(&a, out)),
        Command::BoundsLower(a) => with_workers(a.workers, || bounds_lower(&a, out)),
        Command::Rho(a) => with_workers(a.workers, || rho(&a, out)),
        Command::Search(a) => with_workers(a.workers, || search(&a, out, log)),
        Command::Pipeline(a) => with_workers(a.workers, || pipeline(&a, out)),
    }
}

fn with_workers<R: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> Result<R, CliError> + Send,
) -> Result<R, CliError> {
    match workers {
        None => f(),
        Some(0) => Err(CliError::Config("--workers must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?
            .install(f),
    }
}

pub fn identities(a: &IdentitiesArgs, out: Out) -> Result<bool, CliError> {
    if a.s_max < 2 {
        return Err(CliError::Config("--s-max must be at least 2".into()));
    }
    let mutation = if a.inject_mutation {
        Mutation::PerturbRhs
    } else {
        Mutation::None
    };
    let reports = run_suite(0..=a.s_max, mutation);
    let failed = reports.iter().filter(|r| !r.passed()).count();
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    writeln!(
        out,
        "identities s_max={} checks={} failed={failed}",
        a.s_max,
        reports.len()
    )?;
    Ok(failed == 0)
}

pub fn witt(out: Out) -> Result<bool, CliError> {
    let mut ok = true;
    let mut check = |out: Out, name: &str, pass: bool, detail: String| -> Result<(), CliError> {
        ok &= pass;
        writeln!(
            out,
            "{name} {detail} {}",
            if pass { "PASS" } else { "FAIL" }
        )?;
        Ok(())
    };
    let blocks_pairs = binomial_int(23, 2);
    for (k, lambda) in [(7i64, 1u32), (16, 52)] {
        let c = DesignCandidate::nontrivial(2, 23, k).expect("Witt parameters are nontrivial");
        let l = lambda_si(&c, 2).expect("lambda at the Witt point");
        check(
            out,
            "lambda",
            l == ExactRational::from_integer(lambda.into()),
            format!("v=23 k={k} lambda={l}"),
        )?;
        let alphas: Vec<ExactRational> = (1..=2)
            .map(|i| alpha_si(&c, i).expect("alpha at the Witt point"))
            .collect();
        let shown: Vec<String> = alphas.iter().map(|a| a.to_string()).collect();
        check(
            out,
            "alpha",
            alphas.iter().all(is_integral),
            format!("v=23 k={k} alpha=[{}]", shown.join(",")),
        )?;
        let roots = intersection_numbers(&c).expect("Wilson polynomial at the Witt point");
        let (pass, shown) = match &roots {
            IntersectionNumbers::Integral(r) => {
                let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                (k != 7 || r == &[1, 3], format!("[{}]", s.join(",")))
            }
            IntersectionNumbers::NotAllIntegral => (false, "not_integral".to_string()),
        };
        check(
            out,
            "intersection",
            pass,
            format!("v=23 k={k} numbers={shown}"),
        )?;
        let num = l.to_integer() * binomial_int(23, 4);
        let den = binomial_int(k, 4);
        let exact = (&num % &den).is_zero();
        let blocks = if exact { &num / &den } else { BigInt::zero() };
        check(
            out,
            "blocks",
            exact && blocks == blocks_pairs,
            format!("v=23 k={k} blocks={blocks} binom_23_2={blocks_pairs}"),
        )?;
    }
    Ok(ok)
}

/// Parses `n` or `n/d`.
pub fn parse_cutoff(text: &str) -> Result<ExactRational, CliError> {
    let bad = || CliError::Config(format!("cutoff {text:?} is not an integer or fraction"));
    let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
    let b = match text.split_once('/') {
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err(bad());
            }
            ExactRational::new(int(n)?, d)
        }
        None => ExactRational::from_integer(int(text)?),
    };
    if b < ExactRational::one() {
        return Err(CliError::Config(format!(
            "cutoff {text} must be at least 1"
        )));
    }
    Ok(b)
}

pub fn bounds_upper(a: &BoundsUpperArgs, out: Out) -> Result<bool, CliError> {
    let (lo, hi) = (*a.s_range.start() as u64, *a.s_range.end() as u64);
    if lo < 6 {
        return Err(CliError::Config("bounds need s >= 6".into()));
    }
    if a.precision_bits < 64 {
        return Err(CliError::Config(
            "--precision-bits must be at least 64".into(),
        ));
    }
    let b = a.b.as_deref().map(parse_cutoff).transpose()?;
    let engine = BoundEngine::with_precision(hi, a.precision_bits);
    for s in lo..=hi {
        let r = a.r.unwrap_or_else(|| default_r(s));
        if r % 2 == 1 || r < 6 || r > s {
            return Err(CliError::Config(format!(
                "r={r} must be even with 6 <= r <= s={s}"
            )));
        }
        let report = match &b {
            Some(b) if *b > ExactRational::from_integer(s.into()) => {
                return Err(CliError::Config(format!("cutoff b={b} exceeds s={s}")));
            }
            Some(b) => engine.v_upper(s, r, b),
            None => engine.best_bound(s, r),
        };
        writeln!(out, "{report}")?;
    }
    Ok(true)
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes `text` to `path` through a temporary file.
fn write_atomic(path: &Path, text: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

pub fn load_gap_table(path: &Path) -> Result<Vec<GapRecord>, CliError> {
    read_gap_table(&read_text(path)?)
        .map_err(|m| CliError::Config(format!("{}: {m}", path.display())))
}

fn gap_range(range: &RangeInclusive<u32>) -> Result<(u64, u64), CliError> {
    let (lo, hi) = (*range.start() as u64, *range.end() as u64);
    if lo < 2 {
        return Err(CliError::Config("gap lengths start at 2".into()));
    }
    Ok((lo, hi))
}

/// The gap table for `a`, read or sieved up to gap `need`, and saved if asked.
fn gaps(a: &GapArgs, need: u64) -> Result<Vec<GapRecord>, CliError> {
    let table = match &a.gap_table {
        Some(p) => load_gap_table(p)?,
        None => first_occurrence_gaps(a.sieve_limit, Some(need)),
    };
    if let Some(p) = &a.save_gap_table {
        let mut buf = Vec::new();
        write_gap_table(&table, &mut buf)?;
        write_atomic(p, &buf)?;
    }
    Ok(table)
}

fn checked_rho(table: &[GapRecord], s: u64, limit: u64) -> Result<u64, CliError> {
    let r = rho_from_table(table, s)
        .ok_or(tightdesign::prime_engine::PrimeError::NotFoundBelowLimit { s, limit })?;
    verify_prime_free(r, s)?;
    Ok(r)
}

pub fn rho(a: &GapArgs, out: Out) -> Result<bool, CliError> {
    let (lo, hi) = gap_range(&a.s_range)?;
    let table = gaps(a, hi)?;
    for s in lo..=hi {
        let r = checked_rho(&table, s, a.sieve_limit)?;
        writeln!(out, "s={s} rho={r} prime_free=({r},{}]", r + s - 1)?;
    }
    Ok(true)
}

pub fn bounds_lower(a: &GapArgs, out: Out) -> Result<bool, CliError> {
    let (lo, hi) = gap_range(&a.s_range)?;
    let table = gaps(a, hi + 1)?;
    for s in lo..=hi {
        let r = checked_rho(&table, s + 1, a.sieve_limit)?;
        write!(out, "s={s} rho_next={r} v_lower={}", r + 2 * s)?;
        if s + 1 >= 288 {
            let g = dusart_gap_lower(s + 1, tightdesign::upper_bound::DEFAULT_PRECISION)
                .ceil()
                .to_integer();
            write!(
                out,
                " gap_bound_next={g} v_lower_analytic={}",
                &g + BigInt::from(2 * s)
            )?;
        }
        writeln!(out)?;
    }
    Ok(true)
}

pub fn search(a: &SearchArgs, out: Out, log: Out) -> Result<bool, CliError> {
    let cfg = SearchConfig {
        s_lo: *a.s_range.start(),
        s_hi: *a.s_range.end(),
        x_lo: 1,
        x_max: a.x_max,
        chunk_size: a.chunk_size,
        i_max: a.i_max,
    };
    let outcome = run_search(&cfg, a.checkpoint.as_deref(), a.resume, |c| {
        let _ = writeln!(
            log,
            "chunk x={}..{} s={}..{} status={} hits={}",
            c.x_lo,
            c.x_hi,
            c.s_lo,
            c.s_hi,
            c.status,
            c.hits.len()
        );
    })?;
    let mut hits = 0usize;
    for (h, inter) in outcome.hits().zip(&outcome.intersection) {
        hits += 1;
        let alphas: Vec<String> = h.alphas.iter().map(|x| x.to_string()).collect();
        let inter = inter.map_or("none".to_string(), |b| b.to_string());
        writeln!(
            out,
            "HIT s={} x={} y={} v={} k={} alphas={} intersection_integral={inter}",
            h.s,
            h.x,
            h.y,
            h.v(),
            h.k(),
            alphas.join(",")
        )?;
    }
    writeln!(
        out,
        "search s={}..{} x_max={} i_max={} chunks={} resumed={} hits={hits}",
        cfg.s_lo,
        cfg.s_hi,
        cfg.x_max,
        cfg.i_max,
        outcome.chunks.len(),
        outcome.resumed
    )?;
    Ok(hits == 0)
}

pub fn pipeline(a: &PipelineArgs, out: Out) -> Result<bool, CliError> {
    let mut cfg = PipelineConfig::new(*a.s_range.start(), *a.s_range.end());
    cfg.precision_bits = a.precision_bits;
    cfg.sieve_limit = a.sieve_limit;
    if let Some(p) = &a.gap_table {
        cfg.gaps = Some(load_gap_table(p)?);
    }
    if let Some(p) = &a.checkpoint {
        cfg.coverage = read_checkpoint(p)?;
    }
    let certs = run_pipeline(&cfg)?;
    let mut text = Vec::new();
    for c in &certs {
        writeln!(text, "{c}")?;
    }
    match &a.output {
        Some(p) => write_atomic(p, &text)?,
        None => out.write_all(&text)?,
    }
    Ok(certs.iter().all(|c| c.contradiction))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tightdesign::exact_arith::ratio;

    #[test]
    fn cutoffs() {
        assert_eq!(parse_cutoff("96").unwrap(), ratio(96, 1));
        assert_eq!(parse_cutoff("289/3").unwrap(), ratio(289, 3));
        assert_eq!(parse_cutoff("4/2").unwrap(), ratio(2, 1));
        assert!(parse_cutoff("0").is_err());
        assert!(parse_cutoff("1/0").is_err());
        assert!(parse_cutoff("x").is_err());
    }

    #[test]
    fn witt_passes() {
        let mut out = Vec::new();
        assert!(witt(&mut out).unwrap());
        assert_eq!(String::from_utf8(out).unwrap().lines().count(), 8);
    }
}
