use clap::Parser;

fn main() {
    let cli = walkforge::cli::Cli::parse();
    if let Err(e) = walkforge::cli::execute(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
