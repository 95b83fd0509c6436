use clap::Parser;

fn main() {
    let cli = qamlz_cli::Cli::parse();
    if let Err(e) = qamlz_cli::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
