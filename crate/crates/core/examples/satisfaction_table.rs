//! A four-symbol constraint, its projections, trellis view and sum-product rule.

use stochastic_decoder::graph::{Alphabet, Role, SatisfactionTable};
use stochastic_decoder::mass::Mass;
use stochastic_decoder::reference::sum_product_update;

fn main() -> stochastic_decoder::Result<()> {
    let four = Alphabet::new(4)?;
    let table = SatisfactionTable::new(
        [four; 3],
        vec![
            [0, 0, 0],
            [0, 1, 1],
            [1, 3, 2],
            [1, 2, 3],
            [2, 2, 0],
            [2, 3, 1],
            [3, 1, 2],
            [3, 0, 3],
        ],
    )?;

    for role in Role::ALL {
        for s in 0..4 {
            println!("{role:?} = {s}: {:?}", table.project(role, s));
        }
    }

    let trellis = table.to_trellis();
    println!("trellis has {} branches", trellis.branches.len());

    let a = Mass::new(vec![0.4, 0.3, 0.2, 0.1])?;
    let b = Mass::new(vec![0.1, 0.2, 0.3, 0.4])?;
    let c = sum_product_update(&table, Role::C, &a, &b)?;
    println!("sum-product message to C: {:?}", c.values());
    Ok(())
}
