//! A short BER sweep of the (256,121) product code with the stochastic
//! decoder, counting over the full run and over the last packet only.

use stochastic_decoder::codes::CodeId;
use stochastic_decoder::harness::{emit_csv, run_sweep, DecoderSpec, SweepConfig};
use stochastic_decoder::stochastic::{DecisionWindow, StochasticConfig, UpdateMode};

fn main() -> stochastic_decoder::Result<()> {
    let code = CodeId::Product256_121;
    let points = vec![2.5, 3.0, 3.5];
    for window in [DecisionWindow::FullRun, DecisionWindow::LastPacket] {
        let decoder = StochasticConfig::new(250, 8, UpdateMode::Accumulation)?.with_window(window);
        let mut cfg =
            SweepConfig::new(code, DecoderSpec::Stochastic(decoder), points.clone(), 2024);
        cfg.stop_errors = 20;
        cfg.max_frames = 100;
        print!("{}", emit_csv(&run_sweep(&cfg)?));
    }
    Ok(())
}
