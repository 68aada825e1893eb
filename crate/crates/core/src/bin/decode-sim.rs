fn main() {
    std::process::exit(stochastic_decoder::harness::cli::run(std::env::args_os()));
}
