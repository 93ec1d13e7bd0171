use clap::Parser;
use kraus_majorization::cli::{run, Cli};

fn main() {
    let out = run(Cli::parse());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
