use clap::Parser;

fn main() {
    let cli = hetsim_cli::Cli::parse();
    std::process::exit(hetsim_cli::run(&cli));
}
