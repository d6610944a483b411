use confcap::harness::{
    evaluate_gaussian, evaluate_reciprocity, gaussian_sample, run_sweep, SampleRecord, SweepConfig,
    SweepMode,
};

fn csv_of(cfg: &SweepConfig) -> String {
    run_sweep(cfg).unwrap().csv_string().unwrap()
}

#[test]
fn single_sample_is_reproducible() {
    for mode in [SweepMode::Ldc, SweepMode::Gaussian, SweepMode::Reciprocity] {
        let cfg = SweepConfig::new(mode, 1, 3);
        let a = csv_of(&cfg);
        assert_eq!(a, csv_of(&cfg));
        assert_eq!(a.lines().count(), 2, "{a}");
    }
}

#[test]
fn sweeps_are_byte_identical_across_runs_and_pool_sizes() {
    for mode in [SweepMode::Gaussian, SweepMode::Reciprocity, SweepMode::Ldc] {
        let cfg = SweepConfig::new(mode, 60, 21);
        let base = csv_of(&cfg);
        assert_eq!(base, csv_of(&cfg));
        for threads in [1, 3] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            assert_eq!(
                base,
                pool.install(|| csv_of(&cfg)),
                "{mode} on {threads} threads"
            );
        }
    }
}

#[test]
fn prefix_of_a_longer_sweep_matches() {
    let short = csv_of(&SweepConfig::new(SweepMode::Gaussian, 10, 5));
    let long = csv_of(&SweepConfig::new(SweepMode::Gaussian, 25, 5));
    assert!(long.starts_with(&short));
}

#[test]
fn worst_sample_reevaluates_to_the_reported_gap() {
    let cfg = SweepConfig::new(SweepMode::Gaussian, 200, 13);
    let out = run_sweep(&cfg).unwrap();
    let worst = out.summary.worst_gap.clone().unwrap();
    let p = gaussian_sample(&cfg, worst.index);
    assert_eq!(p.to_json(), worst.params);
    let (rec, _) = evaluate_gaussian(worst.index, &p, &cfg);
    assert_eq!(rec.tau, worst.value);
    let max = out
        .records
        .iter()
        .map(|r| match r {
            SampleRecord::Gaussian(g) => g.tau,
            _ => unreachable!(),
        })
        .fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(max, worst.value);
}

#[test]
fn reciprocity_records_match_direct_evaluation() {
    let cfg = SweepConfig::new(SweepMode::Reciprocity, 20, 4);
    let out = run_sweep(&cfg).unwrap();
    for r in &out.records {
        let SampleRecord::Reciprocity(rec) = r else {
            panic!("wrong record kind")
        };
        let p = gaussian_sample(&cfg, rec.index);
        assert_eq!(rec.channel.params(), p);
        assert_eq!(&evaluate_reciprocity(rec.index, &p, &cfg).0, rec);
    }
}

#[test]
fn csv_headers() {
    let g = csv_of(&SweepConfig::new(SweepMode::Gaussian, 1, 0));
    assert!(g.starts_with("index,h11_re,h11_im,h12_re,"), "{g}");
    assert!(g.lines().next().unwrap().ends_with(",pass"));
    let l = csv_of(&SweepConfig::new(SweepMode::Ldc, 1, 0));
    assert!(l.starts_with("index,n11,n12,n21,n22,k12,k21,"), "{l}");
}

#[test]
fn summary_serializes() {
    let out = run_sweep(&SweepConfig::new(SweepMode::Ldc, 5, 1)).unwrap();
    let v = serde_json::to_value(&out.summary).unwrap();
    assert_eq!(v["mode"], "ldc");
    assert_eq!(v["count"], 5);
    assert!(out.summary.passed());
}
