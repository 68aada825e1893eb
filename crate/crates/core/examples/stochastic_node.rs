//! One hold-rule node fed by two random streams converges to the
//! sum-product message.

use stochastic_decoder::graph::{Role, SatisfactionTable};
use stochastic_decoder::mass::Mass;
use stochastic_decoder::reference::sum_product_update;
use stochastic_decoder::rng::substream;
use stochastic_decoder::stochastic::{node_step, Histogram, StochasticNodeState, StreamSource};

fn main() -> stochastic_decoder::Result<()> {
    let parity = SatisfactionTable::parity();
    let a = Mass::binary(0.8);
    let b = Mass::binary(0.3);
    let mut sa = StreamSource::new(a.clone(), substream(5, &[0]));
    let mut sb = StreamSource::new(b.clone(), substream(5, &[1]));
    let mut state = StochasticNodeState::new([0; 3]);
    let expected = sum_product_update(&parity, Role::C, &a, &b)?;

    let mut h = Histogram::new(2);
    for step in 1..=100_000u32 {
        h.record(node_step(
            &parity,
            Role::C,
            sa.step(),
            sb.step(),
            &mut state,
        ));
        if step.is_power_of_two() && step >= 64 {
            let got = h.to_mass()?;
            println!(
                "{step:>6} steps: P(C=0) = {:.4}, |error| = {:.4}",
                got.get(0),
                got.total_variation(&expected)
            );
        }
    }
    println!("sum-product: P(C=0) = {:.4}", expected.get(0));
    Ok(())
}
