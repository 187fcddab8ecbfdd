mod ops;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "wittstone", version, about = "Witt vectors, delta-rings and Stone duality checks on finite data")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Residue characteristic.
    #[arg(long, global = true, env = "WSTONE_P")]
    pub p: Option<u64>,
    /// Truncation precision m (coefficients in Z/p^m, Witt length).
    #[arg(long, global = true, env = "WSTONE_PRECISION")]
    pub precision: Option<u32>,
    /// Tower depth.
    #[arg(long, global = true, env = "WSTONE_DEPTH")]
    pub depth: Option<usize>,
    /// Seed for the ChaCha8 generator used by sampled checks.
    #[arg(long, global = true, env = "WSTONE_SEED")]
    pub seed: Option<u64>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true, env = "WSTONE_OUT")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, env = "WSTONE_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Truncated Witt vector arithmetic.
    #[command(subcommand)]
    Witt(WittCmd),
    /// Finite Stone duality for p-Boolean algebras.
    #[command(subcommand)]
    Stone(StoneCmd),
    /// Towers of finite sets.
    #[command(subcommand)]
    Profinite(ProfiniteCmd),
    /// Duality between towers and Stone delta-rings.
    #[command(subcommand)]
    Duality(DualityCmd),
    /// Faithful flatness of maps of function algebras.
    #[command(subcommand)]
    Flatness(FlatnessCmd),
    /// Sheaves on the finite site.
    #[command(subcommand)]
    Condensed(CondensedCmd),
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Describe a check of the verification suite.
    Explain {
        check_id: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum WittCmd {
    /// Witt vector sum.
    Add(WittBinary),
    /// Witt vector product.
    Mul(WittBinary),
    /// Universal addition and multiplication polynomials as JSON.
    Polys {
        #[arg(long)]
        len: usize,
    },
    /// Check the delta-ring axioms of W_m(A) with its Witt Frobenius.
    CheckDelta {
        /// Perfect F_p-algebra (JSON text or file).
        #[arg(long)]
        carrier: String,
        /// Check every pair instead of a seeded sample.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Args, Debug)]
pub struct WittBinary {
    #[arg(long)]
    pub len: usize,
    /// Base F_p-algebra (JSON text or file); defaults to F_p.
    #[arg(long)]
    pub base: Option<String>,
    /// Components as a JSON list of integers or coordinate vectors.
    #[arg(long)]
    pub lhs: String,
    #[arg(long)]
    pub rhs: String,
}

#[derive(Subcommand, Debug)]
pub enum StoneCmd {
    /// The algebra F_p^S of a finite set.
    Dual {
        #[arg(long)]
        set_size: usize,
    },
    /// Characters of an algebra and whether evaluation is an isomorphism.
    Spec {
        #[arg(long)]
        algebra: String,
    },
    /// Perfection and coperfection of an algebra.
    Perfection {
        #[arg(long)]
        algebra: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ProfiniteCmd {
    /// Surjective transitions and lifting witnesses.
    Replete {
        #[command(flatten)]
        tower: TowerSource,
    },
    /// Fiber product of two pro-maps and its universal property.
    Fiber {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 2)]
        max_cone: usize,
    },
    /// Levelwise quotient by a presented equivalence relation.
    Quotient {
        /// Presentation fixture (JSON text or file).
        #[arg(long)]
        fixture: String,
    },
}

#[derive(Args, Debug)]
pub struct TowerSource {
    /// Tower (JSON text or file).
    #[arg(long, conflicts_with = "canonical")]
    pub tower: Option<String>,
    /// A canonical tower truncated at `--depth`.
    #[arg(long, value_enum)]
    pub canonical: Option<Canonical>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Canonical {
    Ntilde,
    Cantor,
}

#[derive(Subcommand, Debug)]
pub enum DualityCmd {
    /// Round trip and functoriality over the tower corpus.
    Roundtrip {
        #[arg(long, default_value_t = 3)]
        max_level_size: usize,
    },
    /// W_m(Cont(S_n, F_p)) against Cont(S_n, Z/p^m).
    WittCont {
        #[command(flatten)]
        tower: TowerSource,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum FlatnessCmd {
    /// Faithful flatness of a ring map F_p^S -> F_p^T.
    Check {
        /// `{"matrix": {"p", "rows", "cols", "data"}}` (JSON text or file).
        #[arg(long)]
        map: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum CondensedCmd {
    /// Sheaf condition of a tabulated presheaf on every cover of a site.
    SheafCheck {
        #[arg(long)]
        site: String,
        #[arg(long)]
        presheaf: String,
        #[arg(long, default_value_t = 3)]
        max_members: usize,
    },
    /// Betti comparison for a tower against the Stone delta-rings of its own levels.
    Betti {
        #[command(flatten)]
        tower: TowerSource,
        #[arg(long)]
        level: Option<usize>,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// RunConfig JSON file; flags override its values.
    #[arg(long, env = "WSTONE_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub max_level_size: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Comma-separated acceptance criteria to run (default: all).
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u8>,
    /// Corrupt one input: delta, cover or restriction.
    #[arg(long)]
    pub inject_mutation: Option<String>,
    /// Record per-check durations (reports are then no longer reproducible byte for byte).
    #[arg(long)]
    pub timings: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match ops::run(&cli) {
        Ok(out) => match ops::emit(&cli.global, &out) {
            Ok(()) if out.passed => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
