use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use foliate_cli::{load, parse_budget, render_text, run, Options, PipelineError, Stage};

#[derive(Parser)]
#[command(name = "foliate", version, about = "Genus-2 Heegaard diagrams, left orders and branched surface splitting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a diagram file
    Validate(Common),
    /// Remove waves by greedy wave moves
    Reduce(Common),
    /// Whitehead graphs, parallel arc classes and the band sum
    Whitehead(Common),
    /// Presentation of the fundamental group and its abelianization
    Pi1(Common),
    /// Truncated positive cone search
    Order(Common),
    /// Branched surface, trivial sectors and their deletion
    Branch(Common),
    /// Splitting run on the reduced branched surface
    Split(Common),
    /// Full pipeline with verdict
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// Diagram file
    file: String,
    /// Emit JSON
    #[arg(long)]
    json: bool,
    /// Radius of the truncated cone
    #[arg(long, visible_alias = "depth", default_value_t = 4)]
    cone_depth: usize,
    /// Budget overrides, e.g. `cone_nodes=100000,dehn_steps=5000`
    #[arg(long, default_value = "")]
    budget: String,
    /// Split steps
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    /// Seed for the split scheduler
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest number of ball pieces used to sign a long word
    #[arg(long, default_value_t = 2)]
    pieces: usize,
    /// Sector bound for the disk-of-contact search
    #[arg(long, default_value_t = 2)]
    contact_weight: usize,
    /// Cone constraint `word:sign`, repeatable, e.g. `--constraint 'g1 h1:+'`
    #[arg(long = "constraint")]
    constraints: Vec<String>,
    /// Write the split trace as JSON lines
    #[arg(long)]
    trace: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stage, c) = match cli.command {
        Command::Validate(c) => (Stage::Validate, c),
        Command::Reduce(c) => (Stage::Reduce, c),
        Command::Whitehead(c) => (Stage::Whitehead, c),
        Command::Pi1(c) => (Stage::Pi1, c),
        Command::Order(c) => (Stage::Order, c),
        Command::Branch(c) => (Stage::Branch, c),
        Command::Split(c) => (Stage::Split, c),
        Command::Report(c) => (Stage::Report, c),
    };
    let result = parse_budget(&c.budget).map_err(PipelineError::Io).and_then(|budget| {
        let opts = Options {
            cone_depth: c.cone_depth,
            pieces: c.pieces,
            steps: c.steps,
            seed: c.seed,
            contact_weight: c.contact_weight,
            budget,
            constraints: c.constraints.clone(),
            trace: c.trace.clone(),
            ..Options::default()
        };
        let d = load(&c.file)?;
        run(&d, &c.file, stage, &opts)
    });
    match result {
        Ok(r) => {
            if c.json {
                println!("{}", serde_json::to_string_pretty(&r).unwrap());
            } else {
                print!("{}", render_text(&r));
            }
            ExitCode::from(r.exit_code() as u8)
        }
        Err(e) => {
            if c.json {
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "error": e.to_json() })).unwrap());
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
