use clap::Parser;

use symcap::commands::{self, Cli, Command};
use symcap::driver;

fn main() {
    let cli = Cli::parse();
    driver::init_threads();
    let result = match &cli.command {
        Command::Precompute(args) => commands::cmd_precompute(args),
        Command::Ci(args) => commands::cmd_ci(args),
        Command::Optimize(args) => commands::cmd_optimize(args),
        Command::Threshold(args) => commands::cmd_threshold(args),
        Command::Sweep(args) => commands::cmd_sweep(args),
        Command::DegeneracyReport(args) => commands::cmd_degeneracy_report(args),
        Command::OracleCheck(args) => commands::cmd_oracle_check(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
