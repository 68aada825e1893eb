//! Decodes noisy Hamming (16,11) frames stochastically and compares each
//! with sum-product.

use stochastic_decoder::codes::CodeId;
use stochastic_decoder::harness::{DecoderSpec, Simulator, SweepConfig};
use stochastic_decoder::stochastic::{StochasticConfig, UpdateMode};

fn main() -> stochastic_decoder::Result<()> {
    let code = CodeId::Hamming16_11;
    let ebn0 = 3.0;
    let sp = Simulator::new(&SweepConfig::new(
        code,
        DecoderSpec::SumProduct { iterations: None },
        vec![ebn0],
        1,
    ))?;

    for l in [250, 1000, 4000] {
        let cfg = StochasticConfig::new(l, 1, UpdateMode::Accumulation)?;
        let st = Simulator::new(&SweepConfig::new(
            code,
            DecoderSpec::Stochastic(cfg),
            vec![ebn0],
            1,
        ))?;
        let (mut agree, mut st_errors, mut sp_errors) = (0, 0, 0);
        let frames = 500;
        for f in 0..frames {
            let frame = sp.frame(0, f, ebn0)?;
            let a = sp.decode(&frame)?;
            let b = st.decode(&frame)?;
            agree += u64::from(a.decisions == b.decisions);
            sp_errors += a.bit_errors;
            st_errors += b.bit_errors;
        }
        println!(
            "l = {l:>4}: {agree}/{frames} frames match sum-product; info-bit errors {st_errors} vs {sp_errors}"
        );
    }
    Ok(())
}
