//! `fano`: classifiers, summary tables, fixed-point censuses, tangent
//! spaces and degrees for Fano schemes of determinantal and permanental
//! loci.

mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fano_core::{FanoError, Family};

#[derive(Debug, Parser)]
#[command(name = "fano", version, about = "Fano schemes of determinantal and permanental loci")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Det,
    Perm,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Det => Family::Det,
            FamilyArg::Perm => Family::Perm,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Smoothness, irreducibility and connectedness of F_k.
    Classify {
        #[arg(value_enum)]
        family: FamilyArg,
        m: i64,
        n: i64,
        r: i64,
        k: i64,
    },
    /// Summary table for r = m = n over a range of n.
    Table {
        #[arg(value_enum)]
        family: FamilyArg,
        n_min: i64,
        n_max: i64,
    },
    /// Count coordinate k-planes on the locus.
    FixedPoints {
        m: i64,
        n: i64,
        r: i64,
        k: i64,
        /// Also group them into orbits under row and column permutations.
        #[arg(long)]
        orbits: bool,
        /// Largest m * n to enumerate.
        #[arg(long, default_value_t = fano_core::patterns::DEFAULT_MAX_CELLS)]
        cap: usize,
    },
    /// Tangent space dimension at a plane in an s-compression space.
    Tangent(TangentArgs),
    /// Degrees from intersection theory and closed formulas.
    Degree {
        #[command(subcommand)]
        mode: DegreeMode,
    },
    /// Whether a k-plane lies on the locus.
    Membership {
        file: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value_t = FamilyArg::Det)]
        family: FamilyArg,
    },
}

#[derive(Debug, Args)]
struct TangentArgs {
    /// k-plane file; omitted with --make-witness.
    #[arg(required_unless_present = "make_witness")]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FamilyArg::Det)]
    family: FamilyArg,
    #[arg(long)]
    s: i64,
    /// Minor size; defaults to the number of rows.
    #[arg(long)]
    r: Option<i64>,
    /// Print the standard witness plane as a k-plane file instead.
    #[arg(long, requires_all = ["m", "n", "k"])]
    make_witness: bool,
    #[arg(long)]
    m: Option<i64>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    k: Option<i64>,
}

#[derive(Debug, Subcommand)]
enum DegreeMode {
    /// Degree of the scheme of lines on the n x n determinant.
    F1 {
        #[arg(long)]
        n: u32,
    },
    /// Degree of Gr(a, b).
    Grassmannian {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// Degree attached to the s-compression component.
    Compression {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        s: i64,
    },
}

fn exit_code(err: &FanoError) -> u8 {
    match err {
        FanoError::Domain(_) | FanoError::Parse(_) => 2,
        FanoError::Resource(_) => 3,
        FanoError::Invariant(_) => 4,
    }
}

fn read_file(path: &PathBuf) -> Result<String, FanoError> {
    fs::read_to_string(path).map_err(|e| FanoError::Parse(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<String, FanoError> {
    let fmt = cli.format;
    match cli.command {
        Command::Classify { family, m, n, r, k } => render::classify(family.into(), m, n, r, k, fmt),
        Command::Table { family, n_min, n_max } => {
            if !(2 <= n_min && n_min <= n_max && n_max <= 12) {
                return Err(FanoError::Domain(format!(
                    "need 2 <= n_min <= n_max <= 12, got {n_min}..{n_max}"
                )));
            }
            render::table(family.into(), n_min, n_max, fmt)
        }
        Command::FixedPoints { m, n, r, k, orbits, cap } => {
            render::fixed_points(m, n, r, k, orbits, cap, fmt)
        }
        Command::Tangent(args) => {
            let family = args.family.into();
            if args.make_witness {
                let (m, n, k) = (args.m.unwrap(), args.n.unwrap(), args.k.unwrap());
                let r = args.r.unwrap_or(m);
                return render::witness(family, m, n, r, k, args.s);
            }
            let path = args.file.expect("clap enforces a file");
            let text = read_file(&path)?;
            render::tangent(&text, family, args.r, args.s, fmt)
        }
        Command::Degree { mode } => match mode {
            DegreeMode::F1 { n } => render::degree("f1", &[("n", n as i64)], fano_core::schubert::f1_degree(n)?, fmt),
            DegreeMode::Grassmannian { a, b } => render::degree(
                "grassmannian",
                &[("a", a as i64), ("b", b as i64)],
                fano_core::schubert::gr_degree(a, b)?.into(),
                fmt,
            ),
            DegreeMode::Compression { m, n, r, s } => render::degree(
                "compression",
                &[("m", m), ("n", n), ("r", r), ("s", s)],
                fano_core::schubert::compression_degree(m, n, r, s)?.into(),
                fmt,
            ),
        },
        Command::Membership { file, r, family } => {
            let text = read_file(&file)?;
            render::membership(&text, r, family.into(), fmt)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
