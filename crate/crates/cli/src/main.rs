//! `tiltkit`: build quiver algebras, check modules and tilting objects, and
//! emit derived-equivalence certificates for triangular matrix algebras.

mod commands;
mod workspace;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use tiltkit::format::to_canonical_string;

use commands::{Ctx, GlueArgs, Mode, Outcome};
use workspace::{write_atomic, Workspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Field {
    #[value(name = "Q")]
    Q,
    #[value(name = "Fp")]
    Fp,
}

#[derive(Parser, Debug)]
#[command(name = "tiltkit", version, about = "Tilting theory for triangular matrix algebras")]
struct Cli {
    /// Workspace root for cached artifacts.
    #[arg(long, global = true, env = "TILTKIT_WORKSPACE")]
    workspace: Option<PathBuf>,
    /// Maximal length of projective resolutions.
    #[arg(long, global = true, default_value_t = 12)]
    bound: usize,
    #[arg(long, global = true, value_enum, default_value_t = Field::Q)]
    field: Field,
    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quiver algebras.
    Algebra {
        #[command(subcommand)]
        action: AlgebraCmd,
    },
    /// Modules.
    Module {
        #[command(subcommand)]
        action: ModuleCmd,
    },
    /// Certificate for the APR tilting module `A e_B + Tr D(A e_C)`.
    Apr {
        algebra: String,
        /// Vertices of the upper corner `B`, comma separated.
        #[arg(long)]
        e: String,
    },
    /// Whether a module or complex is tilting.
    TiltingCheck { algebra: String, object: PathBuf },
    /// Glue tilting objects along the recollement of `e`.
    Glue {
        algebra: String,
        #[arg(long)]
        e: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Object over `C`: a module or complex file, or `regular`.
        #[arg(long)]
        y: String,
        /// Object over `B`; unused in stalk mode.
        #[arg(long)]
        z: Option<String>,
        #[arg(long, default_value_t = 1)]
        shift: usize,
    },
    /// Recollement axioms and the idempotent criteria.
    Recollement {
        #[command(subcommand)]
        action: RecollementCmd,
    },
    /// Derived invariants of two algebras.
    Invariants {
        #[command(subcommand)]
        action: InvariantsCmd,
    },
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    /// Validate a presentation and store its canonical form.
    Build {
        input: PathBuf,
    },
    Info {
        algebra: String,
    },
}

#[derive(Subcommand, Debug)]
enum ModuleCmd {
    Check { algebra: String, module: PathBuf },
}

#[derive(Subcommand, Debug)]
enum RecollementCmd {
    Verify {
        algebra: String,
        #[arg(long)]
        e: String,
        /// Directory of module files over the algebra.
        corpus: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum InvariantsCmd {
    Compare { first: String, second: String },
}

fn run(cli: &Cli) -> Result<Outcome> {
    if cli.field == Field::Fp {
        bail!("unsupported field configuration: only Q is implemented");
    }
    let ctx = Ctx { workspace: Workspace::new(cli.workspace.clone()), bound: cli.bound };
    match &cli.command {
        Command::Algebra { action: AlgebraCmd::Build { input } } => commands::algebra_build(&ctx, input, None),
        Command::Algebra { action: AlgebraCmd::Info { algebra } } => commands::algebra_info(&ctx, algebra),
        Command::Module { action: ModuleCmd::Check { algebra, module } } => {
            commands::module_check(&ctx, algebra, module)
        }
        Command::Apr { algebra, e } => commands::apr(&ctx, algebra, e),
        Command::TiltingCheck { algebra, object } => commands::tilting_check(&ctx, algebra, object),
        Command::Glue { algebra, e, mode, y, z, shift } => {
            commands::glue_cmd(&ctx, &GlueArgs { algebra, e, mode: *mode, y, z: z.as_deref(), shift: *shift })
        }
        Command::Recollement { action: RecollementCmd::Verify { algebra, e, corpus } } => {
            commands::recollement_verify(&ctx, algebra, e, corpus.as_deref())
        }
        Command::Invariants { action: InvariantsCmd::Compare { first, second } } => {
            commands::invariants_cmd(&ctx, first, second)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let text = to_canonical_string(&outcome.output);
            print!("{text}");
            if let Some(out) = &cli.out {
                if let Err(e) = write_atomic(out, &text) {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(2);
                }
            }
            if outcome.valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
