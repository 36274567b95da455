mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

/// Exact and Monte Carlo Haar integrals over the compact classical groups.
#[derive(Parser, Debug)]
#[command(name = "haarint", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Stochastic {
    /// Seed for every stochastic path.
    #[arg(long, env = "HAARINT_SEED")]
    pub seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List standard tableaux of a shape.
    Tableaux(commands::TableauxArgs),
    /// Integrate a monomial in matrix entries or in irrep matrix elements.
    Integral(commands::IntegralArgs),
    /// SU(2) Wigner-D monomial integrals: closed form against quadrature.
    Su2(commands::Su2Args),
    /// Table of equal-spin SU(2) moments for exploring large J.
    Su2Scan(commands::Su2ScanArgs),
    /// Average entanglement entropy of random pure states.
    Entropy(commands::EntropyArgs),
    /// Draw Haar-random group elements.
    Sample(commands::SampleArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(commands::EXIT_USAGE);
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().expect("thread pool is configured once");
    }
    let result = match cli.command {
        Command::Tableaux(a) => commands::tableaux(a),
        Command::Integral(a) => commands::integral(a),
        Command::Su2(a) => commands::su2(a),
        Command::Su2Scan(a) => commands::su2_scan(a),
        Command::Entropy(a) => commands::entropy(a),
        Command::Sample(a) => commands::sample(a),
    };
    match result {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = output::write_report(&report, cli.format, &mut out) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
