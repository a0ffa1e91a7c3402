mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qhalg::lattice::DEFAULT_BUDGET;

#[derive(Parser, Debug)]
#[command(name = "qhalg", version, about = "Checks for quasi-hereditary quiver algebras")]
pub struct Cli {
    /// Q or Fp:<p>; defaults to the field of the input file (F_2 for `lattice`)
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// algebra file
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// write a Hasse diagram here
    #[arg(long, global = true)]
    pub dot: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// print a machine-readable report
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// quasi-hereditary and 1-quasi-hereditary axioms
    Check,
    /// distinguished path bases of the projectives
    Basis {
        #[arg(long)]
        vertex: Option<u32>,
    },
    /// enumerate the submodules of P:j, I:j, S:j, D:j (standard) or N:j (costandard)
    Lattice {
        #[arg(long)]
        module: String,
    },
    /// tilting generators and summand checks
    Tilting {
        #[arg(long)]
        vertex: Option<u32>,
    },
    TheoremA {
        #[arg(long)]
        vertex: Option<u32>,
    },
    TheoremB,
    #[command(name = "lemma-2-2")]
    Lemma22 {
        #[arg(long)]
        vertex: Option<u32>,
    },
    #[command(name = "lemma-3-2")]
    Lemma32,
    /// compare the Ringel dual with a candidate presentation
    Ringel {
        #[arg(long)]
        against: PathBuf,
        /// candidate vertex to summand vertex, e.g. "1=4,4=1"; defaults to
        /// swapping the minimal and maximal vertices
        #[arg(long)]
        map: Option<String>,
    },
    /// write a built-in algebra as an algebra file
    Family {
        #[arg(long, value_enum)]
        name: Family,
        #[arg(long)]
        n: Option<usize>,
        /// rows separated by `;`, entries by `,`
        #[arg(long)]
        c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long)]
        m: Option<usize>,
        /// restrict to the vertices below this one
        #[arg(long)]
        factor: Option<u32>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// linear extensions of the order
    Extensions {
        #[arg(long)]
        from: Option<u32>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    AnC,
    Sl3,
    Example4,
    Auslander,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(Some(outcome)) => {
            print!("{}", outcome.render(cli.json));
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
