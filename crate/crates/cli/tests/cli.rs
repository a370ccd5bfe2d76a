use std::fs;
use std::process::{Command, Output};

use tightdesign::prime_engine::first_occurrence_gaps;
use tightdesign::search::parse_checkpoint;
use tightdesign_cli::pipeline::{run_pipeline, Case, PipelineConfig};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tightdesign"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn witt_report() {
    let o = bin(&["witt"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("lambda v=23 k=7 lambda=1 PASS"));
    assert!(text.contains("lambda v=23 k=16 lambda=52 PASS"));
    assert!(text.contains("intersection v=23 k=7 numbers=[1,3] PASS"));
    assert_eq!(text.matches("blocks=253 binom_23_2=253 PASS").count(), 2);
    assert!(!text.contains("FAIL"));
}

#[test]
fn identities_exit_codes() {
    let o = bin(&["identities", "--s-max", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("failed=0\n"));
    let o = bin(&["identities", "--s-max", "3", "--inject-mutation"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counterexample=("));
    assert_eq!(bin(&["identities", "--s-max", "1"]).status.code(), Some(2));
}

#[test]
fn pipeline_rejects_small_s() {
    let o = bin(&["pipeline", "--s-range", "9..20"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("literature"));
}

#[test]
fn bad_flags_are_config_errors() {
    assert_eq!(
        bin(&["bounds-upper", "--s-range", "10", "--r", "7"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bin(&["bounds-upper", "--s-range", "10", "--b", "11"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bin(&["bounds-upper", "--s-range", "10", "--b", "1/0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bin(&[
            "search",
            "--s-range",
            "10..20",
            "--x-max",
            "100",
            "--i-max",
            "11"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        bin(&["rho", "--s-range", "300", "--sieve-limit", "1000"])
            .status
            .code(),
        Some(2)
    );
    assert_ne!(
        bin(&["search", "--x-max", "10", "--resume"]).status.code(),
        Some(0)
    );
}

#[test]
fn bounds_and_gaps() {
    let o = bin(&["bounds-upper", "--s-range", "288", "--b", "96"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    assert!(line.starts_with("s=288 r=288 b=96 psi=188 "), "{line}");
    assert!(line.contains("feasible=true"));
    let o = bin(&["bounds-upper", "--s-range", "289", "--b", "289/3"]);
    assert!(stdout(&o).starts_with("s=289 r=288 b=289/3 "));

    let o = bin(&["rho", "--s-range", "5..6"]);
    assert_eq!(
        stdout(&o),
        "s=5 rho=23 prime_free=(23,27]\ns=6 rho=23 prime_free=(23,28]\n"
    );
    let o = bin(&["bounds-lower", "--s-range", "10"]);
    assert_eq!(stdout(&o), "s=10 rho_next=113 v_lower=133\n");
}

#[test]
fn gap_table_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("gaps.tsv");
    let t = table.to_str().unwrap();
    let a = bin(&["rho", "--s-range", "2..40", "--save-gap-table", t]);
    assert_eq!(a.status.code(), Some(0));
    let b = bin(&["rho", "--s-range", "2..40", "--gap-table", t]);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(fs::read_to_string(&table)
        .unwrap()
        .starts_with("1\t2\n2\t3\n"));
    fs::write(&table, "1\tx\n").unwrap();
    assert_eq!(
        bin(&["rho", "--s-range", "2", "--gap-table", t])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn search_checkpoint_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.txt");
    let c = ck.to_str().unwrap();
    let args = [
        "search",
        "--s-range",
        "10..40",
        "--x-max",
        "30000",
        "--chunk-size",
        "7000",
        "--checkpoint",
        c,
    ];
    let o = bin(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("chunks=5 resumed=0 hits=0\n"));
    let chunks = parse_checkpoint(&fs::read_to_string(&ck).unwrap()).unwrap();
    assert_eq!(chunks.len(), 5);

    // Drop the last record and a torn partial line, then resume.
    let text = fs::read_to_string(&ck).unwrap();
    let keep: Vec<&str> = text.lines().take(3).collect();
    fs::write(&ck, format!("{}\n28001 300", keep.join("\n"))).unwrap();
    let mut resume = args.to_vec();
    resume.push("--resume");
    let o = bin(&resume);
    assert!(
        stdout(&o).ends_with("chunks=5 resumed=3 hits=0\n"),
        "{}",
        stdout(&o)
    );
    assert_eq!(
        parse_checkpoint(&fs::read_to_string(&ck).unwrap()).unwrap(),
        chunks
    );
}

#[test]
fn search_reports_witt_complement() {
    let o = bin(&["search", "--s-range", "2", "--x-max", "20", "--i-max", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(
        text.contains("HIT s=2 x=14 y=20 v=23 k=16 alphas=21,120 intersection_integral=true"),
        "{text}"
    );
}

#[test]
fn case3_needs_coverage() {
    let mut cfg = PipelineConfig::new(100, 101);
    cfg.gaps = Some(first_occurrence_gaps(10_000_000, Some(102)));
    let open = run_pipeline(&cfg).unwrap();
    assert!(open
        .iter()
        .all(|c| c.case == Case::Case3 && !c.contradiction));
    let needed = open[0].needed_x.clone().unwrap();
    let tail =
        format!("coverage_x=0 needed_x={needed} contradiction=false note=coverage_insufficient");
    assert!(open[0].to_string().ends_with(&tail), "{}", open[0]);

    cfg.coverage = parse_checkpoint("1 15000000000 10 287 done 0\n").unwrap();
    let closed = run_pipeline(&cfg).unwrap();
    for c in &closed {
        assert!(c.contradiction, "{c}");
        assert!(c.bound.feasible);
        assert!(c.note.is_none());
        assert!(c.needed_x.as_ref().unwrap() <= &15_000_000_000u64.into());
    }

    // Coverage stopping short of the bound does not count.
    cfg.coverage = parse_checkpoint("1 1000 10 287 done 0\n").unwrap();
    assert!(run_pipeline(&cfg).unwrap().iter().all(|c| !c.contradiction));
}

#[test]
fn case1_and_case2_certificates() {
    let mut cfg = PipelineConfig::new(626, 627);
    cfg.gaps = Some(first_occurrence_gaps(1_300_000_000, Some(288)));
    let certs = run_pipeline(&cfg).unwrap();
    let lines: Vec<String> = certs.iter().map(|c| c.to_string()).collect();
    assert!(
        lines[0].starts_with("s=626 case=CASE2 lower_v=1294269743 lower_source=rho_288+2s "),
        "{}",
        lines[0]
    );
    assert!(lines[0].contains(" b=626/3 r=626 "));
    assert!(lines[1].starts_with("s=627 case=CASE1_ANALYTIC "));
    assert!(lines[1].contains(" b=627 r=626 ") && lines[1].contains("premeditation=true"));
    assert!(certs
        .iter()
        .all(|c| c.contradiction && c.lower_v > c.upper_v));

    let o = bin(&["pipeline", "--s-range", "700"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("s=700 case=CASE1_ANALYTIC "));
    assert!(stdout(&o).trim_end().ends_with("contradiction=true"));
}
