use clap::Parser;
use goppa_equiv::cli::{run, RunConfig};

fn main() {
    std::process::exit(run(RunConfig::parse()));
}
