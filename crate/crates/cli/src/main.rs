use clap::Parser;
use fracnoether_cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
