//! Two parity checks over three equality nodes latch in the all-zero state;
//! flagging two edges as supernodes breaks the latch.

use stochastic_decoder::mass::Mass;
use stochastic_decoder::stochastic::{
    build_latching_demo, build_latching_demo_with_supernodes, StochasticConfig, StochasticDecoder,
    UpdateMode,
};

fn main() -> stochastic_decoder::Result<()> {
    // Evidence favouring ones, so a healthy decoder should leave the zero state.
    let evidence = vec![Mass::binary(0.2); 3];
    let steps = 2_000;

    let plain = build_latching_demo();
    let cfg = StochasticConfig::new(steps, 1, UpdateMode::Accumulation)?;
    let dec = StochasticDecoder::new_allowing_cycles(&plain.graph, cfg)?;
    let mut s = dec.session(&evidence, 1)?;
    for (&d, &v) in plain.internal.iter().zip(&plain.initial) {
        s.set_symbol(d, v);
    }
    let mut ones = 0;
    for _ in 0..steps {
        s.step();
        ones += plain
            .internal
            .iter()
            .filter(|&&d| s.sent_symbol(d) == 1)
            .count();
    }
    println!("plain graph: {ones} internal ones in {steps} steps");

    let fixed = build_latching_demo_with_supernodes();
    let cfg = StochasticConfig::new(100, steps / 100, UpdateMode::Accumulation)?;
    let dec = StochasticDecoder::new(&fixed.graph, cfg)?;
    let mut s = dec.session(&evidence, 1)?;
    for (&d, &v) in fixed.internal.iter().zip(&fixed.initial) {
        s.set_symbol(d, v);
    }
    let mut first = None;
    let mut ones = 0;
    for t in 1..=steps {
        s.step();
        let n = fixed
            .internal
            .iter()
            .filter(|&&d| s.sent_symbol(d) == 1)
            .count();
        ones += n;
        if n > 0 && first.is_none() {
            first = Some(t);
        }
    }
    println!("with supernodes: {ones} internal ones, first at step {first:?}");
    println!("decisions: {:?}", s.finish()?.decisions);
    Ok(())
}
