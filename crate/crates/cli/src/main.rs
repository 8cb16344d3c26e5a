use clap::Parser;
use debranges_cli::{run, RunConfig};

fn main() {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            // help and version are not errors
            std::process::exit(if e.use_stderr() {
                debranges_cli::ExitStatus::InputError.code()
            } else {
                0
            });
        }
    };
    std::process::exit(run(&cfg));
}
