use clap::Parser;
use gec_xform::args::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = gec_xform::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
