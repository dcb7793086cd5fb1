mod commands;
mod config;
mod http;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::OutputFormat;

/// Formalize, check and analyse scientific claims written as five-slot patterns.
#[derive(Debug, Parser)]
#[command(name = "superclaim", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Base IRI for exported nanopublications.
    #[arg(long, global = true, value_name = "IRI")]
    pub base_iri: Option<String>,
    /// Do not assume that every world accesses itself.
    #[arg(long, global = true)]
    pub no_reflexive: bool,
    /// Serve term lookups from the cache only.
    #[arg(long, global = true)]
    pub offline: bool,
    #[arg(long, global = true, value_name = "PATH")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse claim files and report errors.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Print the parsed claims in canonical form.
        #[arg(long, value_enum)]
        emit: Option<EmitFormat>,
    },
    /// Render claims as plain-English sentences.
    Gloss {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// End context readings with "(i.e. the same <context>)".
        #[arg(long)]
        explain: bool,
    },
    /// Render claims, or a qualifier's template, as formulas.
    Formula {
        files: Vec<PathBuf>,
        #[arg(long, default_value = "unicode")]
        style: String,
        /// Render the schematic template for this qualifier instead of claims.
        #[arg(long, conflicts_with = "files")]
        qualifier: Option<String>,
        /// With --qualifier: omit the context class.
        #[arg(long, requires = "qualifier")]
        no_context: bool,
    },
    /// Evaluate claims against a finite model.
    Eval {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_name = "PATH")]
        model: PathBuf,
    },
    /// Report entailments and contradictions between claims.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Qualifier and relation usage.
    Stats {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Share of slot classes bound to existing identifiers.
    Coverage {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Agreement measures over study marks.
    Agreement {
        /// Delimited rows: claim, candidate, participant, mark.
        #[arg(long, value_name = "PATH", required = true)]
        marks: Vec<PathBuf>,
        /// Delimited rows: claim, participant, rating.
        #[arg(long, value_name = "PATH")]
        confidence: Option<PathBuf>,
    },
    /// Look up identifiers for labels or for the unbound classes of a claim file.
    Resolve {
        labels: Vec<String>,
        #[arg(long, value_name = "PATH", conflicts_with = "labels")]
        claims: Option<PathBuf>,
        /// One of wikidata, bioportal, lov; repeatable.
        #[arg(long = "source", value_name = "NAME")]
        sources: Vec<String>,
        #[arg(long)]
        limit: Option<usize>,
        /// Prompt for a choice per slot and write the bound claims.
        #[arg(long, requires = "claims")]
        interactive: bool,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Export claims as nanopublications in TriG.
    Export {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Publication timestamp (xsd:dateTime); defaults to now.
        #[arg(long)]
        created: Option<String>,
        #[arg(long)]
        creator: Option<String>,
        /// Write one `<id>.trig` file per claim here instead of stdout.
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EmitFormat {
    Dsl,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
