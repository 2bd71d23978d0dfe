use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inv = match glhelix::cli::parse_args(&args) {
        Ok(inv) => inv,
        Err(e) => {
            eprintln!("glhelix: {e}");
            eprintln!(
                "usage: glhelix <{}> [--config <path>] [--out <dir>] [--eps <list>] \
                 [--k <int>] [--seed <int>] [--central] [key=value ...]",
                glhelix::cli::SUBCOMMANDS.join("|")
            );
            return ExitCode::from(2);
        }
    };
    match glhelix::cli::run(&inv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("glhelix {}: {e}", inv.subcommand);
            ExitCode::FAILURE
        }
    }
}
