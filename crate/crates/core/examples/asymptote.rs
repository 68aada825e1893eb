//! Minimum-distance asymptote of the Hamming (16,11) code next to its
//! sum-product BER.

use stochastic_decoder::codes::{CodeId, LinearCode};
use stochastic_decoder::harness::{emit_asymptote, run_sweep, DecoderSpec, SweepConfig};

fn main() -> stochastic_decoder::Result<()> {
    let code = LinearCode::extended_hamming_16_11();
    let (d, a_d) = code.min_distance()?;
    println!("d_min = {d}, A_d = {a_d}");
    let points = vec![3.0, 4.0, 5.0];
    print!("{}", emit_asymptote(&code, &points)?);

    let mut cfg = SweepConfig::new(
        CodeId::Hamming16_11,
        DecoderSpec::SumProduct { iterations: None },
        points,
        1,
    );
    cfg.stop_errors = 30;
    for r in run_sweep(&cfg)? {
        println!(
            "{} dB: sum-product BER {:.3e} over {} frames",
            r.ebn0_db, r.ber, r.frames
        );
    }
    Ok(())
}
