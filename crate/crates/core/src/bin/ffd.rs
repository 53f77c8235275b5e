use clap::Parser;
use ffd_core::cli::{dispatch, init_threads, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    init_threads();
    std::process::exit(dispatch(&cfg));
}
