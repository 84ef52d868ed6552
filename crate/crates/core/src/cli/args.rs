//! Command-line grammar: `<noun> <verb> [flags]`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::dispatch::{run_batch, run_with, RunOptions};
use super::table::Table;
use super::{
    exit_code_for, Command, FormSpec, GroupArg, GsubArg, JobSpec, TauSpec, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION,
};
use crate::center::Twist;
use crate::clifford::SpaceSpec;
use crate::cohomology::Coefficients;
use crate::config::{Caps, CAP_ENV};
use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "finalg",
    version,
    about = "Exact computations with metric groups, abelian cocycles, pointed centers and finite Clifford groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Top,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Largest group order for brute-force enumeration.
    #[arg(long, global = true, env = CAP_ENV)]
    pub cap: Option<u64>,
    /// Print the JSON envelope (default).
    #[arg(long, global = true, conflicts_with = "tsv")]
    pub json: bool,
    /// Print a tab-separated table instead.
    #[arg(long, global = true)]
    pub tsv: bool,
    /// Seed for randomized subcommands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    /// Leave wall time out of the envelope.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Top {
    /// Finite abelian groups.
    Group {
        #[command(subcommand)]
        verb: GroupVerb,
    },
    /// Quadratic forms.
    Quad {
        #[command(subcommand)]
        verb: QuadVerb,
    },
    /// Orthogonal groups of metric groups.
    Orth {
        #[command(subcommand)]
        verb: OrthVerb,
    },
    /// Lagrangian subgroups and polarizations.
    Lagrangian {
        #[command(subcommand)]
        verb: LagrangianVerb,
    },
    /// Group cohomology; without a verb computes `Hⁿ`.
    Cohomology(CohomologyCmd),
    /// Pointed Drinfeld centers of Vect[L]^τ.
    Center {
        #[command(subcommand)]
        verb: CenterVerb,
    },
    /// Clifford, Pin and Spin groups over F_p.
    Clifford {
        #[command(subcommand)]
        verb: CliffordVerb,
    },
    /// Run a JSON array of job specs and print one table row per job.
    Batch {
        file: PathBuf,
        /// Worker threads (all cores by default).
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct GroupOnly {
    /// Cyclic orders, e.g. `2,4`.
    #[arg(long)]
    pub group: GroupArg,
}

#[derive(Debug, Clone, Args)]
pub struct FormArgs {
    /// Expected group of the form; checked when given.
    #[arg(long)]
    pub group: Option<GroupArg>,
    /// `ev:<group>`, `split:<n>,<p>` or `file:<path>`.
    #[arg(long)]
    pub form: FormSpec,
}

#[derive(Debug, Subcommand)]
pub enum GroupVerb {
    /// Order, exponent and invariant factors.
    Info(GroupOnly),
    /// Count the automorphisms.
    Aut(GroupOnly),
    /// List every subgroup.
    Subgroups(GroupOnly),
}

#[derive(Debug, Subcommand)]
pub enum QuadVerb {
    /// All quadratic forms on a group.
    List {
        #[command(flatten)]
        g: GroupOnly,
        #[arg(long)]
        nondegenerate: bool,
    },
    /// Nondegeneracy and isotropic elements.
    Info(FormArgs),
    /// Order, |O|, |SO| and Lagrangian count.
    Summary(FormArgs),
}

#[derive(Debug, Subcommand)]
pub enum OrthVerb {
    /// |O|, |SO| and the determinant spectrum.
    Order {
        #[command(flatten)]
        f: FormArgs,
        /// Include every isometry as a matrix.
        #[arg(long)]
        elements: bool,
    },
    /// Compare |O(split_form(n, p))| with the order formula.
    Split {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum LagrangianVerb {
    /// Lagrangian subgroups.
    List(FormArgs),
    /// One polarization per Lagrangian.
    Polarize(FormArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[arg(long)]
    pub group: Option<GroupArg>,
    #[arg(long)]
    pub degree: Option<usize>,
    /// `scalars` or `muN:<N>`.
    #[arg(long, default_value = "scalars")]
    pub coeff: Coefficients,
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct CohomologyCmd {
    #[command(subcommand)]
    pub verb: Option<CohomologyVerb>,
    #[command(flatten)]
    pub compute: ComputeArgs,
}

#[derive(Debug, Subcommand)]
pub enum CohomologyVerb {
    /// Hⁿ(A, coeff) via the normalized bar complex.
    Compute(ComputeArgs),
    /// |H³_ab(A)| against the quadratic forms on A.
    Em(GroupOnly),
    /// Coefficient and torsor groups for a subgroup of O(A,q).
    Torsor {
        #[command(flatten)]
        f: FormArgs,
        /// `trivial`, `neg` or `involution`.
        #[arg(long, default_value = "trivial")]
        gsub: GsubArg,
    },
    /// Seeded checks on random cochains and cocycles.
    Random {
        #[arg(long)]
        group: GroupArg,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        coeff: Coefficients,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

fn parse_twist(s: &str) -> std::result::Result<Twist, String> {
    match s {
        "printed" => Ok(Twist::Printed),
        "inverted" => Ok(Twist::Inverted),
        _ => Err(format!("bad twist {s:?} (expected printed or inverted)")),
    }
}

#[derive(Debug, Subcommand)]
pub enum CenterVerb {
    /// Whether Z(Vect[L]^τ) is pointed, with witnesses.
    Pointed {
        #[arg(long)]
        group: GroupArg,
        /// `trivial` or a degree-3 cochain file.
        #[arg(long, default_value = "trivial")]
        tau: TauSpec,
    },
    /// The metric group and abelian 3-cocycle of the center.
    Classify {
        #[arg(long)]
        group: GroupArg,
        #[arg(long, default_value = "trivial")]
        tau: TauSpec,
        /// Sign of `t_{ℓ₂}(ℓ₁)` in the braiding: `printed` or `inverted`.
        #[arg(long, default_value = "printed", value_parser = parse_twist)]
        twist: Twist,
    },
}

#[derive(Debug, Subcommand)]
pub enum CliffordVerb {
    /// Lipschitz, Pin and Spin groups of a quadratic space.
    Pin {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        dim: usize,
        /// `split` or `diag:<q₁>,…`.
        #[arg(long, default_value = "split")]
        form: SpaceSpec,
    },
    /// The exterior algebra module of a split space.
    Spinor {
        #[arg(long)]
        p: u64,
        /// Rank of L in L ⊕ L*.
        #[arg(long)]
        m: usize,
    },
}

fn compute_command(a: ComputeArgs) -> Result<Command> {
    match (a.group, a.degree) {
        (Some(group), Some(degree)) => Ok(Command::Cohomology {
            group,
            degree,
            coeff: a.coeff,
        }),
        _ => Err(Error::Parse("cohomology needs --group and --degree".into())),
    }
}

impl Top {
    /// The job for a single-command invocation; `None` for `batch`.
    pub fn command(self) -> Result<Option<Command>> {
        let c = match self {
            Top::Group { verb } => match verb {
                GroupVerb::Info(g) => Command::GroupInfo { group: g.group },
                GroupVerb::Aut(g) => Command::GroupAut { group: g.group },
                GroupVerb::Subgroups(g) => Command::GroupSubgroups { group: g.group },
            },
            Top::Quad { verb } => match verb {
                QuadVerb::List { g, nondegenerate } => Command::QuadList {
                    group: g.group,
                    nondegenerate,
                },
                QuadVerb::Info(f) => Command::QuadInfo {
                    group: f.group,
                    form: f.form,
                },
                QuadVerb::Summary(f) => Command::QuadSummary {
                    group: f.group,
                    form: f.form,
                },
            },
            Top::Orth { verb } => match verb {
                OrthVerb::Order { f, elements } => Command::OrthOrder {
                    group: f.group,
                    form: f.form,
                    elements,
                },
                OrthVerb::Split { n, p } => Command::OrthSplit { n, p },
            },
            Top::Lagrangian { verb } => match verb {
                LagrangianVerb::List(f) => Command::LagrangianList {
                    group: f.group,
                    form: f.form,
                },
                LagrangianVerb::Polarize(f) => Command::LagrangianPolarize {
                    group: f.group,
                    form: f.form,
                },
            },
            Top::Cohomology(c) => match c.verb {
                None => compute_command(c.compute)?,
                Some(CohomologyVerb::Compute(a)) => compute_command(a)?,
                Some(CohomologyVerb::Em(g)) => Command::CohomologyEm { group: g.group },
                Some(CohomologyVerb::Torsor { f, gsub }) => Command::CohomologyTorsor {
                    group: f.group,
                    form: f.form,
                    gsub,
                },
                Some(CohomologyVerb::Random {
                    group,
                    degree,
                    coeff,
                    samples,
                }) => Command::CohomologyRandom {
                    group,
                    degree,
                    coeff,
                    samples,
                },
            },
            Top::Center { verb } => match verb {
                CenterVerb::Pointed { group, tau } => Command::CenterPointed { group, tau },
                CenterVerb::Classify { group, tau, twist } => Command::CenterClassify { group, tau, twist },
            },
            Top::Clifford { verb } => match verb {
                CliffordVerb::Pin { p, dim, form } => Command::CliffordPin { p, dim, form },
                CliffordVerb::Spinor { p, m } => Command::CliffordSpinor { p, m },
            },
            Top::Batch { .. } => return Ok(None),
        };
        Ok(Some(c))
    }
}

impl GlobalArgs {
    fn caps(&self) -> Caps {
        match self.cap {
            Some(c) => Caps::default().with_group_order(c),
            None => Caps::default(),
        }
    }

    fn options(&self) -> RunOptions {
        RunOptions {
            timing: !self.no_timing,
        }
    }
}

fn emit(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(Error::from),
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("envelopes serialize");
    s.push('\n');
    s
}

/// Parses `args` (including the program name), runs the job and writes the
/// result. Returns the process exit code.
pub fn invoke<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let g = cli.global.clone();
    if let Top::Batch { file, workers } = &cli.command {
        return batch(file, *workers, &g, out, err);
    }
    let command = match cli.command.command() {
        Ok(Some(c)) => c,
        Ok(None) => unreachable!("batch handled above"),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code_for(&e);
        }
    };
    let spec = JobSpec {
        command,
        caps: g.caps(),
        seed: g.seed,
        output: g.output.clone(),
    };
    let env = run_with(&spec, g.options());
    if let Some(e) = &env.error {
        let _ = writeln!(err, "error: {}", e.message);
    }
    let text = if g.tsv {
        match Table::from_envelopes(std::slice::from_ref(&env)) {
            Ok(t) => t.to_tsv(),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return exit_code_for(&e);
            }
        }
    } else {
        to_json(&env)
    };
    if let Err(e) = emit(&text, spec.output.as_ref(), out) {
        let _ = writeln!(err, "error: {e}");
        return exit_code_for(&e);
    }
    env.exit_code()
}

fn batch(file: &PathBuf, workers: Option<usize>, g: &GlobalArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let jobs: Result<Vec<JobSpec>> = std::fs::read_to_string(file)
        .map_err(|e| Error::Io(format!("{}: {e}", file.display())))
        .and_then(|raw| serde_json::from_str(&raw).map_err(Error::from));
    let result = jobs.and_then(|jobs| {
        let envs = run_batch(&jobs, g.options(), workers)?;
        let table = Table::from_envelopes(&envs)?;
        let ok = envs.iter().all(|e| e.exit_code() == EXIT_OK);
        Ok((table, ok))
    });
    match result {
        Ok((table, ok)) => {
            let text = if g.tsv { table.to_tsv() } else { to_json(&table) };
            if let Err(e) = emit(&text, g.output.as_ref(), out) {
                let _ = writeln!(err, "error: {e}");
                return exit_code_for(&e);
            }
            if ok {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}
