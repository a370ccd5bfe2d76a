use num_bigint::BigInt;

use tightdesign::auxiliary_h::AuxiliaryValue;
use tightdesign::design_functions::{
    alpha_si, intersection_numbers, lambda_si, DesignCandidate, IntersectionNumbers,
};
use tightdesign::exact_arith::{rat, ratio};
use tightdesign::prime_engine::{first_occurrence_gaps, rho_by_scan, rho_from_table, v_lower};
use tightdesign::search::{run_search, SearchConfig};
use tightdesign::upper_bound::{default_r, BoundEngine};

#[test]
fn search_hit_is_the_witt_complement() {
    let mut cfg = SearchConfig::new(2, 2, 40);
    cfg.i_max = 2;
    let out = run_search(&cfg, None, false, |_| {}).unwrap();
    let hits: Vec<_> = out.hits().collect();
    let witt = hits
        .iter()
        .position(|h| (h.x, h.y) == (14, 20))
        .expect("(2, 14, 20) is found");
    let h = hits[witt];
    assert_eq!((h.v(), h.k()), (23, 16));
    assert_eq!(out.intersection[witt], Some(true));

    let c = DesignCandidate::nontrivial(2, h.v() as i64, h.k() as i64).unwrap();
    assert_eq!(lambda_si(&c, 2).unwrap(), rat(52));
    for (i, a) in h.alphas.iter().enumerate() {
        assert_eq!(alpha_si(&c, i as u32 + 1).unwrap(), rat(a.clone()));
    }
    assert_eq!(
        intersection_numbers(&c).unwrap(),
        IntersectionNumbers::Integral(vec![10, 12])
    );
    let aux = AuxiliaryValue::at(2, 2, 23, 16).unwrap();
    assert!(aux.closed_form_holds());
}

#[test]
fn design_points_outside_small_bounds() {
    // The bound on v at s = 10 lies far above the prime-gap lower bound, which
    // is why the integrality search is needed in this range.
    let engine = BoundEngine::new(20);
    let rep = engine.best_bound(10, default_r(10));
    let upper = rep.v_bound.clone().unwrap();
    let lower = v_lower(10, 1_000).unwrap();
    assert_eq!(lower, 133);
    assert!(upper > BigInt::from(lower));
    assert_eq!(rep.b, ratio(1, 1));
}

#[test]
fn gap_table_agrees_with_scan() {
    let table = first_occurrence_gaps(10_000_000, None);
    for s in 2..=100 {
        assert_eq!(rho_from_table(&table, s), Some(rho_by_scan(s)), "s={s}");
    }
}
