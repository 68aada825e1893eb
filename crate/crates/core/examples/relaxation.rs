//! Successive relaxation on the product code for a few values of beta.

use stochastic_decoder::channel::{to_evidence, transmit, ChannelConfig};
use stochastic_decoder::codes::{CodeId, LinearCode};
use stochastic_decoder::mass::Mass;
use stochastic_decoder::reference::{ReferenceDecoder, UpdateRule};

fn main() -> stochastic_decoder::Result<()> {
    let code = CodeId::Product256_121;
    let graph = code.graph();
    let component = LinearCode::extended_hamming_16_11();
    let info: Vec<u8> = (0..121).map(|i| (i * 7 % 3 == 0) as u8).collect();
    let word = code.encode(&component, &info)?;
    let channel = ChannelConfig::new(2.5, code.rate())?;
    let evidence: Vec<Mass> = transmit(&word, &channel, 42)
        .iter()
        .map(|&y| to_evidence(y, &channel))
        .collect();

    let hard = evidence
        .iter()
        .zip(&word)
        .filter(|(m, &b)| m.argmax() != b as usize)
        .count();
    println!("channel hard decisions: {hard} of 256 bits wrong");

    let rules = [
        ("sum-product", UpdateRule::SumProduct),
        ("relaxation beta=0.5", UpdateRule::Relaxation { beta: 0.5 }),
        (
            "relaxation beta=0.25",
            UpdateRule::Relaxation { beta: 0.25 },
        ),
    ];
    for (name, rule) in rules {
        for iterations in [4, 16, 64] {
            let out = ReferenceDecoder::new(&graph)
                .rule(rule)
                .iterations(iterations)
                .decode(&evidence)?;
            let errors = out
                .decisions
                .iter()
                .zip(&word)
                .filter(|(&d, &b)| d != b as usize)
                .count();
            println!("{name:>22}, {iterations:>2} iterations: {errors} bit errors");
        }
    }
    Ok(())
}
