//! Writes a graph to the text format, reads it back and checks its cycles.

use stochastic_decoder::codes::build_hamming_graph;
use stochastic_decoder::graph::{detect_cycles, parse_graph, write_graph};

const RING: &str = "
alphabet bit 2
table parity bit bit bit
row 0 0 0
row 0 1 1
row 1 0 1
row 1 1 0
constraint c0 parity
constraint c1 parity
variable x0 bit info
variable x1 bit parity
variable u bit internal
variable w bit internal
edge x0 c0.B
edge x1 c1.B
edge u c0.A c1.A
edge w c0.C c1.C
";

fn main() -> stochastic_decoder::Result<()> {
    let ring = parse_graph(RING)?;
    println!("ring: {} uncovered cycle(s)", detect_cycles(&ring).len());
    let covered = parse_graph(&format!("{RING}supernode-edge u\n"))?;
    println!(
        "ring with a supernode edge: {} uncovered cycle(s)",
        detect_cycles(&covered).len()
    );

    let hamming = build_hamming_graph();
    let text = write_graph(&hamming);
    let back = parse_graph(&text)?;
    println!(
        "hamming graph: {} lines, {} constraints, round trip {}",
        text.lines().count(),
        back.constraints().len(),
        if write_graph(&back) == text {
            "identical"
        } else {
            "differs"
        }
    );
    for line in text.lines().take(12) {
        println!("  {line}");
    }
    Ok(())
}
