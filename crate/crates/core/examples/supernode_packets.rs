//! Replacement and accumulation estimates of a supernode over successive packets.

use stochastic_decoder::mass::Mass;
use stochastic_decoder::rng::substream;
use stochastic_decoder::stochastic::{StreamSource, Supernode, UpdateMode};

fn main() -> stochastic_decoder::Result<()> {
    let l = 32;
    let truth = Mass::binary(0.7);
    let mut source = StreamSource::new(truth.clone(), substream(9, &[]));
    let mut replace = Supernode::new(UpdateMode::Replacement, l, 2, 1)?;
    let mut accumulate = Supernode::new(UpdateMode::Accumulation, l, 2, 2)?;

    println!("packet  replacement  accumulation");
    for packet in 1..=12 {
        for _ in 0..l {
            let s = source.step();
            replace.record(s);
            accumulate.record(s);
        }
        replace.packet_update()?;
        accumulate.packet_update()?;
        println!(
            "{packet:>6}  {:>11.4}  {:>12.4}",
            replace.current_mass().get(0),
            accumulate.current_mass().get(0)
        );
    }
    println!("true P(0) = {:.4}", truth.get(0));
    Ok(())
}
