use clap::Parser;
use mepacket::cli::{run, Cli};

fn main() {
    std::process::exit(run(&Cli::parse()));
}
