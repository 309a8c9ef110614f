use clap::Parser;

fn main() {
    let cli = realwitness_cli::Cli::parse();
    std::process::exit(realwitness_cli::run(&cli));
}
