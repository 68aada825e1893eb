use stochastic_decoder::codes::CodeId;
use stochastic_decoder::harness::{emit_csv, run_sweep, DecoderSpec, Simulator, SweepConfig};
use stochastic_decoder::stochastic::{StochasticConfig, UpdateMode};

const FRAMES: u64 = 1000;

#[test]
fn long_stochastic_runs_agree_with_sum_product() {
    let code = CodeId::Hamming16_11;
    let sp = Simulator::new(&SweepConfig::new(
        code,
        DecoderSpec::SumProduct { iterations: None },
        vec![4.0],
        9,
    ))
    .unwrap();
    let st_cfg = StochasticConfig::new(2000, 1, UpdateMode::Accumulation).unwrap();
    let st = Simulator::new(&SweepConfig::new(
        code,
        DecoderSpec::Stochastic(st_cfg),
        vec![4.0],
        9,
    ))
    .unwrap();
    let mut disagree = 0;
    for f in 0..FRAMES {
        let frame = sp.frame(0, f, 4.0).unwrap();
        assert_eq!(frame, st.frame(0, f, 4.0).unwrap());
        let a = sp.decode(&frame).unwrap().decisions;
        let b = st.decode(&frame).unwrap().decisions;
        disagree += u64::from(a != b);
    }
    assert!(
        disagree * 50 <= FRAMES,
        "{disagree} of {FRAMES} frames disagree"
    );
}

#[test]
fn relaxation_sweep_is_reproducible() {
    let code = CodeId::Hamming16_11;
    let mut cfg = SweepConfig::new(
        code,
        DecoderSpec::Relaxation {
            beta: 0.5,
            iterations: None,
        },
        vec![2.0, 3.0],
        77,
    );
    cfg.stop_errors = 20;
    let first = emit_csv(&run_sweep(&cfg).unwrap());
    cfg.threads = 2;
    assert_eq!(emit_csv(&run_sweep(&cfg).unwrap()), first);
    assert!(first.contains("hamming16_11,relaxation,2,"));
}

#[test]
fn product_frames_decode_to_codewords_at_high_snr() {
    let code = CodeId::Product256_121;
    let mut cfg = SweepConfig::new(code, DecoderSpec::stochastic_default(code), vec![8.0], 3);
    cfg.max_frames = 5;
    let rec = &run_sweep(&cfg).unwrap()[0];
    assert_eq!(rec.frames, 5);
    assert_eq!(rec.bit_errors, 0);
}
