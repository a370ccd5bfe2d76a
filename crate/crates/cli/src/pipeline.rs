//! The three-case argument and its certificates.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use tightdesign::exact_arith::{ratio, ExactRational};
use tightdesign::prime_engine::{
    dusart_gap_lower, first_occurrence_gaps, rho_from_table, verify_prime_free, GapRecord,
};
use tightdesign::search::{attested_coverage, SearchChunk};
use tightdesign::upper_bound::{
    check_premeditation, default_r, format_cutoff, BoundEngine, BoundReport,
};

use crate::CliError;

pub const CASE1_FROM: u32 = 627;
pub const CASE2_FROM: u32 = 288;
pub const PIPELINE_FROM: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    Case1Analytic,
    Case2,
    Case3,
}

impl Case {
    pub fn of(s: u32) -> Case {
        if s >= CASE1_FROM {
            Case::Case1Analytic
        } else if s >= CASE2_FROM {
            Case::Case2
        } else {
            Case::Case3
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Case1Analytic => "CASE1_ANALYTIC",
            Case::Case2 => "CASE2",
            Case::Case3 => "CASE3",
        })
    }
}

/// One line of the certificate stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub s: u32,
    pub case: Case,
    pub lower_v: Option<BigInt>,
    pub lower_source: String,
    pub upper_v: Option<BigInt>,
    pub bound: BoundReport,
    /// Case 3 only: largest `X` with `[1, X]` searched and hit-free.
    pub coverage_x: Option<u64>,
    /// Case 3 only: the `x` up to which coverage is needed.
    pub needed_x: Option<BigInt>,
    /// Case 1 only: outcome of the explicit bound check.
    pub premeditation: Option<bool>,
    pub contradiction: bool,
    pub note: Option<&'static str>,
}

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref()
        .map(|x| x.to_string())
        .unwrap_or_else(|| "none".into())
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "s={} case={} lower_v={} lower_source={} upper_v={} b={} r={} psi={} precision_bits={}",
            self.s,
            self.case,
            opt(&self.lower_v),
            self.lower_source,
            opt(&self.upper_v),
            format_cutoff(&self.bound.b),
            self.bound.r,
            self.bound.psi,
            self.bound.kappa_upper.precision_bits,
        )?;
        if let Some(p) = self.premeditation {
            write!(f, " premeditation={p}")?;
        }
        if self.case == Case::Case3 {
            write!(
                f,
                " coverage_x={} needed_x={}",
                opt(&self.coverage_x),
                opt(&self.needed_x)
            )?;
        }
        write!(f, " contradiction={}", self.contradiction)?;
        if let Some(n) = self.note {
            write!(f, " note={n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub s_lo: u32,
    pub s_hi: u32,
    pub precision_bits: u32,
    pub sieve_limit: u64,
    /// Precomputed first-occurrence gaps; computed from the sieve when absent.
    pub gaps: Option<Vec<GapRecord>>,
    /// Search chunks read from a checkpoint.
    pub coverage: Vec<SearchChunk>,
}

impl PipelineConfig {
    pub fn new(s_lo: u32, s_hi: u32) -> Self {
        PipelineConfig {
            s_lo,
            s_hi,
            precision_bits: tightdesign::upper_bound::DEFAULT_PRECISION,
            sieve_limit: crate::args::DEFAULT_SIEVE_LIMIT,
            gaps: None,
            coverage: Vec::new(),
        }
    }
}

/// Gap table reaching far enough for every `s` in the range, checked.
pub fn gaps_for(
    s_hi: u32,
    sieve_limit: u64,
    given: Option<Vec<GapRecord>>,
) -> Result<Vec<GapRecord>, CliError> {
    let need = (s_hi as u64 + 1).min(CASE2_FROM as u64);
    let gaps = match given {
        Some(g) => g,
        None => first_occurrence_gaps(sieve_limit, Some(need)),
    };
    match rho_from_table(&gaps, need) {
        Some(r) => {
            verify_prime_free(r, need)?;
            Ok(gaps)
        }
        None => Err(CliError::Config(format!(
            "no prime gap of length >= {need} below {sieve_limit}; raise --sieve-limit or pass --gap-table"
        ))),
    }
}

fn rho_checked(gaps: &[GapRecord], s: u64) -> Result<u64, CliError> {
    let r = rho_from_table(gaps, s)
        .ok_or_else(|| CliError::Config(format!("gap table does not reach gap {s}")))?;
    verify_prime_free(r, s)?;
    Ok(r)
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<Vec<Certificate>, CliError> {
    if cfg.s_lo < PIPELINE_FROM {
        return Err(CliError::Config(format!(
            "s = {} is outside the pipeline: s in [2, 9] is settled in the literature, so --s-range must start at 10 or above",
            cfg.s_lo
        )));
    }
    if cfg.s_lo > cfg.s_hi {
        return Err(CliError::Config("empty s range".into()));
    }
    let gaps = if cfg.s_lo < CASE1_FROM {
        Some(gaps_for(
            cfg.s_hi.min(CASE1_FROM - 1),
            cfg.sieve_limit,
            cfg.gaps.clone(),
        )?)
    } else {
        None
    };
    let engine = BoundEngine::with_precision(cfg.s_hi as u64, cfg.precision_bits);
    let rho_288 = match &gaps {
        Some(g) if cfg.s_hi >= CASE2_FROM => Some(rho_checked(g, CASE2_FROM as u64)?),
        _ => None,
    };
    let mut rho_next = Vec::new();
    if let Some(g) = &gaps {
        for s in cfg.s_lo..=cfg.s_hi.min(CASE2_FROM - 1) {
            rho_next.push(rho_checked(g, s as u64 + 1)?);
        }
    }
    let certs = (cfg.s_lo..=cfg.s_hi)
        .into_par_iter()
        .map(|s| match Case::of(s) {
            Case::Case1Analytic => case1(&engine, s),
            Case::Case2 => case2(&engine, s, rho_288.expect("rho_288 computed for case 2")),
            Case::Case3 => case3(&engine, s, rho_next[(s - cfg.s_lo) as usize], &cfg.coverage),
        })
        .collect();
    Ok(certs)
}

fn case1(engine: &BoundEngine, s: u32) -> Certificate {
    let s64 = s as u64;
    let prem = check_premeditation(s64);
    let bound = engine.v_upper(
        s64,
        default_r(s64),
        &ExactRational::from_integer(BigInt::from(s64)),
    );
    let lower_rho = dusart_gap_lower(s64 + 1, engine.precision())
        .ceil()
        .to_integer();
    let lower_v = lower_rho + BigInt::from(2 * s64);
    let upper_v = bound.v_bound.clone();
    let holds = prem.holds() && upper_v.as_ref().is_some_and(|u| &lower_v > u);
    Certificate {
        s,
        case: Case::Case1Analytic,
        lower_v: Some(lower_v),
        lower_source: format!("gap_bound_{}+2s", s + 1),
        upper_v,
        bound,
        coverage_x: None,
        needed_x: None,
        premeditation: Some(prem.holds()),
        contradiction: holds,
        note: None,
    }
}

fn case2(engine: &BoundEngine, s: u32, rho_288: u64) -> Certificate {
    let s64 = s as u64;
    let bound = engine.v_upper(s64, default_r(s64), &ratio(s64, 3));
    let lower_v = BigInt::from(rho_288 + 2 * s64);
    let upper_v = bound.v_bound.clone();
    let holds = upper_v.as_ref().is_some_and(|u| &lower_v > u);
    Certificate {
        s,
        case: Case::Case2,
        lower_v: Some(lower_v),
        lower_source: format!("rho_{CASE2_FROM}+2s"),
        upper_v,
        bound,
        coverage_x: None,
        needed_x: None,
        premeditation: None,
        contradiction: holds,
        note: None,
    }
}

fn case3(engine: &BoundEngine, s: u32, rho_next: u64, coverage: &[SearchChunk]) -> Certificate {
    let s64 = s as u64;
    let bound = engine.best_bound(s64, default_r(s64));
    let upper_v = bound.v_bound.clone();
    // v <= V forces y = v - 2s + 1 <= V - 2s + 1 and x <= y - s - 2.
    let needed_x = upper_v.as_ref().map(|v| v - BigInt::from(3 * s64 + 1));
    let coverage_x = attested_coverage(coverage, s);
    let covered = needed_x
        .as_ref()
        .is_some_and(|n| n.to_u64().map_or(n < &BigInt::from(0), |n| coverage_x >= n));
    let note = if !bound.feasible {
        Some("no_feasible_b")
    } else if !covered {
        Some("coverage_insufficient")
    } else {
        None
    };
    Certificate {
        s,
        case: Case::Case3,
        lower_v: Some(BigInt::from(rho_next + 2 * s64)),
        lower_source: format!("rho_{}+2s", s + 1),
        upper_v,
        bound,
        coverage_x: Some(coverage_x),
        needed_x,
        premeditation: None,
        contradiction: covered,
        note,
    }
}
