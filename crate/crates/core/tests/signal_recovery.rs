use bcibench::dsp::Paradigm;
use bcibench::eval::{evaluate, EvaluationPlan, MeterConfig, Strategy, Timing};
use bcibench::pipelines::PipelineSpec;
use bcibench::synth::{generate, SynthSpec};

fn mean_score(spec: &SynthSpec, pipeline: &str, strategy: Strategy) -> f64 {
    let (lo, hi) = spec.paradigm.default_band();
    let ds = generate(spec).unwrap().to_dataset().unwrap().bandpass(lo, hi).unwrap();
    let plan = EvaluationPlan {
        strategy,
        ..EvaluationPlan::default()
    };
    let meter = MeterConfig {
        timing: Timing::Off,
        ..MeterConfig::default()
    };
    let ev = evaluate(&ds, &[PipelineSpec::new(pipeline).unwrap()], &plan, &meter, 8).unwrap();
    assert!(ev.issues.is_empty(), "{:?}", ev.issues);
    ev.rows.iter().map(|r| r.score).sum::<f64>() / ev.rows.len() as f64
}

#[test]
fn score_non_decreasing_in_snr() {
    let cases = [
        (Paradigm::Mi, "MDM", 128.0),
        (Paradigm::Mi, "CSP+LDA", 128.0),
        (Paradigm::Ssvep, "CCA", 256.0),
    ];
    for (paradigm, pipeline, sfreq) in cases {
        let curve: Vec<f64> = [0.0, 1.0, 2.0, 5.0]
            .iter()
            .map(|&snr| {
                (0..3)
                    .map(|seed| {
                        let spec = SynthSpec {
                            paradigm,
                            n_subjects: 1,
                            n_trials_per_class: 20,
                            sfreq,
                            snr,
                            seed,
                            ..SynthSpec::default()
                        };
                        mean_score(&spec, pipeline, Strategy::WithinSession)
                    })
                    .sum::<f64>()
                    / 3.0
            })
            .collect();
        assert!(curve.windows(2).all(|w| w[1] >= w[0]), "{pipeline}: {curve:?}");
        assert!(curve[3] > curve[0] + 0.3, "{pipeline}: {curve:?}");
    }
}

#[test]
fn subject_shift_hurts_transfer() {
    let spec = SynthSpec {
        n_subjects: 5,
        n_trials_per_class: 20,
        snr: 1.0,
        subject_shift: 1.0,
        ..SynthSpec::default()
    };
    let within = mean_score(&spec, "TS+LR", Strategy::WithinSession);
    let across = mean_score(&spec, "TS+LR", Strategy::CrossSubject);
    assert!(across <= within + 0.05, "cross-subject {across} vs within {within}");
}
