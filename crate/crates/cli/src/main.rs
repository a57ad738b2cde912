mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Iterated elimination, epistemic models and public announcements over
/// finite games.
#[derive(Parser, Debug)]
#[command(name = "epigame", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Largest model the tool will build or load.
    #[arg(long, global = true, default_value_t = 4096)]
    pub budget_states: usize,
    /// Largest total strategy count for exhaustive restriction sweeps.
    #[arg(long, global = true, default_value_t = 10)]
    pub budget_restrictions: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Iterate the elimination operator of a property profile to its outcome.
    Solve {
        game: String,
        /// One property for all players, or one per player (comma separated
        /// or repeated).
        #[arg(long = "property", short = 'p', required = true, value_delimiter = ',')]
        property: Vec<String>,
        /// Print every stage, not just the outcome.
        #[arg(long)]
        trace: bool,
    },
    /// Run iterated announcements from a game, or apply announced events to a
    /// model file.
    Announce {
        path: String,
        #[arg(long = "property", short = 'p', value_delimiter = ',')]
        property: Vec<String>,
        /// Announce rationality events instead of optimality events.
        #[arg(long)]
        rationality: bool,
        /// File of `<player> : <state> ...` lines, one per announcing player.
        #[arg(long)]
        events: Option<String>,
        /// Write the terminal model here.
        #[arg(long)]
        emit_model: Option<String>,
    },
    /// Evaluate an L_nu formula on a model.
    Eval {
        model: String,
        #[arg(long, short = 'f')]
        formula: String,
        /// Property profile behind `rat` and `O` (default sd_g).
        #[arg(long = "property", short = 'p', value_delimiter = ',')]
        property: Vec<String>,
    },
    /// Run randomized theorem checks.
    Check(CheckArgs),
    /// Verify a derivation file.
    Derive { path: String },
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    /// epist1, epist2, just, just1, notes, announce, logic or all.
    pub suite: String,
    /// Instances per check.
    #[arg(long = "random", default_value_t = 50)]
    pub random: usize,
    /// Replace the monotone profiles of the common-belief checks.
    #[arg(long)]
    pub property: Option<String>,
    /// Run a single named check.
    #[arg(long)]
    pub only: Option<String>,
    /// With --only, replay one instance.
    #[arg(long, requires = "only")]
    pub instance: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub min_players: usize,
    #[arg(long, default_value_t = 3)]
    pub max_players: usize,
    #[arg(long, default_value_t = 2)]
    pub min_strategies: usize,
    #[arg(long, default_value_t = 4)]
    pub max_strategies: usize,
    #[arg(long, default_value_t = -9, allow_negative_numbers = true)]
    pub min_payoff: i64,
    #[arg(long, default_value_t = 9, allow_negative_numbers = true)]
    pub max_payoff: i64,
    #[arg(long, default_value_t = 8)]
    pub max_states: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
