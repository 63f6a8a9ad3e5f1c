use clap::Parser;
use fusionseed::cli::{self, Cli};

fn main() {
    std::process::exit(cli::run(Cli::parse()));
}
