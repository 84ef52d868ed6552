//! Job specifications, dispatch, result envelopes and batch tables behind
//! the `finalg` binary.
//!
//! A [`JobSpec`] names one operation and its inputs. [`run`] executes it and
//! wraps the payload in a [`ResultEnvelope`] together with the checks that
//! were performed. [`emit_table`] runs a homogeneous batch and flattens the
//! envelopes into rows.

pub mod args;
mod dispatch;
pub mod table;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::abelian::FiniteAbelianGroup;
use crate::center::{PointedFusionData, Twist};
use crate::clifford::SpaceSpec;
use crate::cohomology::{Check, CochainFile, Coefficients, SubgroupSpec};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::quadratic::{evaluation_form, split_form, MetricGroup, QuadraticForm};

pub use args::{invoke, Cli};
pub use dispatch::{run, run_batch, run_with, RunOptions};
pub use table::{emit_table, Table};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Serde through `Display` / `FromStr`.
mod text {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

/// A group written as `n1,n2,…`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupArg(pub FiniteAbelianGroup);

impl FromStr for GroupArg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.parse().map(GroupArg)
    }
}

impl fmt::Display for GroupArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders = self.0.orders();
        if orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = orders.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for GroupArg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        text::serialize(self, s)
    }
}

impl<'de> Deserialize<'de> for GroupArg {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        text::deserialize(d)
    }
}

/// `ev:<group>`, `split:<n>,<p>` or `file:<path>` holding a JSON
/// quadratic form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormSpec {
    Ev(FiniteAbelianGroup),
    Split { n: usize, p: u64 },
    File(PathBuf),
}

impl FromStr for FormSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(g) = s.strip_prefix("ev:") {
            return Ok(FormSpec::Ev(g.parse()?));
        }
        if let Some(rest) = s.strip_prefix("split:") {
            let bad = || Error::Parse(format!("bad split form {s:?} (expected split:<n>,<p>)"));
            let (n, p) = rest.split_once(',').ok_or_else(bad)?;
            let n = n.trim().parse().map_err(|_| bad())?;
            let p = p.trim().parse().map_err(|_| bad())?;
            return Ok(FormSpec::Split { n, p });
        }
        if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                return Err(Error::Parse("empty form file path".into()));
            }
            return Ok(FormSpec::File(PathBuf::from(path)));
        }
        Err(Error::Parse(format!(
            "bad form {s:?} (expected ev:<group>, split:<n>,<p> or file:<path>)"
        )))
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormSpec::Ev(l) => write!(f, "ev:{}", GroupArg(l.clone())),
            FormSpec::Split { n, p } => write!(f, "split:{n},{p}"),
            FormSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl Serialize for FormSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        text::serialize(self, s)
    }
}

impl<'de> Deserialize<'de> for FormSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        text::deserialize(d)
    }
}

impl FormSpec {
    pub fn quadratic_form(&self) -> Result<QuadraticForm> {
        match self {
            FormSpec::Ev(l) => Ok(evaluation_form(l).into_form()),
            FormSpec::Split { n, p } => Ok(split_form(*n, *p)?.into_form()),
            FormSpec::File(path) => {
                let raw = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                let q: QuadraticForm = serde_json::from_str(&raw)?;
                q.validate()?;
                Ok(q)
            }
        }
    }

    pub fn metric(&self) -> Result<MetricGroup> {
        MetricGroup::new(self.quadratic_form()?)
    }
}

/// `trivial` or a path to a degree-3 [`CochainFile`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TauSpec {
    Trivial,
    File(PathBuf),
}

impl FromStr for TauSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "" => Err(Error::Parse("empty τ spec".into())),
            "trivial" => Ok(TauSpec::Trivial),
            p => Ok(TauSpec::File(PathBuf::from(p.strip_prefix("file:").unwrap_or(p)))),
        }
    }
}

impl fmt::Display for TauSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauSpec::Trivial => write!(f, "trivial"),
            TauSpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl Serialize for TauSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        text::serialize(self, s)
    }
}

impl<'de> Deserialize<'de> for TauSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        text::deserialize(d)
    }
}

impl TauSpec {
    pub fn load(&self, l: &FiniteAbelianGroup) -> Result<PointedFusionData> {
        match self {
            TauSpec::Trivial => Ok(PointedFusionData::trivial(l.clone(), l.exponent().max(1))),
            TauSpec::File(path) => {
                let raw = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                let file: CochainFile = serde_json::from_str(&raw)?;
                if file.degree != 3 {
                    return Err(Error::ShapeMismatch(format!(
                        "τ must have degree 3, file has {}",
                        file.degree
                    )));
                }
                let (g, tau) = file.into_cochain()?;
                if g != *l {
                    return Err(Error::ShapeMismatch(format!("τ lives on {g}, expected {l}")));
                }
                PointedFusionData::new(g, tau)
            }
        }
    }
}

/// Subgroup of `O(A,q)` named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GsubArg {
    #[default]
    Trivial,
    Neg,
    Involution,
}

impl FromStr for GsubArg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "trivial" => Ok(GsubArg::Trivial),
            "neg" => Ok(GsubArg::Neg),
            "involution" => Ok(GsubArg::Involution),
            t => Err(Error::Parse(format!(
                "bad subgroup spec {t:?} (expected trivial, neg or involution)"
            ))),
        }
    }
}

impl fmt::Display for GsubArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GsubArg::Trivial => "trivial",
            GsubArg::Neg => "neg",
            GsubArg::Involution => "involution",
        })
    }
}

impl Serialize for GsubArg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        text::serialize(self, s)
    }
}

impl<'de> Deserialize<'de> for GsubArg {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        text::deserialize(d)
    }
}

impl From<GsubArg> for SubgroupSpec {
    fn from(g: GsubArg) -> Self {
        match g {
            GsubArg::Trivial => SubgroupSpec::Trivial,
            GsubArg::Neg => SubgroupSpec::MinusIdentity,
            GsubArg::Involution => SubgroupSpec::FirstInvolution,
        }
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// One operation with its inputs. The `command` tag is the
/// `<noun> <verb>` pair of the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", deny_unknown_fields)]
pub enum Command {
    #[serde(rename = "group info")]
    GroupInfo { group: GroupArg },
    #[serde(rename = "group aut")]
    GroupAut { group: GroupArg },
    #[serde(rename = "group subgroups")]
    GroupSubgroups { group: GroupArg },
    #[serde(rename = "quad list")]
    QuadList {
        group: GroupArg,
        #[serde(default, skip_serializing_if = "is_false")]
        nondegenerate: bool,
    },
    #[serde(rename = "quad info")]
    QuadInfo {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<GroupArg>,
        form: FormSpec,
    },
    #[serde(rename = "quad summary")]
    QuadSummary {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<GroupArg>,
        form: FormSpec,
    },
    #[serde(rename = "orth order")]
    OrthOrder {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<GroupArg>,
        form: FormSpec,
        #[serde(default, skip_serializing_if = "is_false")]
        elements: bool,
    },
    #[serde(rename = "orth split")]
    OrthSplit { n: usize, p: u64 },
    #[serde(rename = "lagrangian list")]
    LagrangianList {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<GroupArg>,
        form: FormSpec,
    },
    #[serde(rename = "lagrangian polarize")]
    LagrangianPolarize {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<GroupArg>,
        form: FormSpec,
    },
    #[serde(rename = "cohomology compute")]
    Cohomology {
        group: GroupArg,
        degree: usize,
        coeff: Coefficients,
    },
    #[serde(rename = "cohomology em")]
    CohomologyEm { group: GroupArg },
    #[serde(rename = "cohomology torsor")]
    CohomologyTorsor {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<GroupArg>,
        form: FormSpec,
        #[serde(default)]
        gsub: GsubArg,
    },
    /// Seeded property check: random cochains and cocycles of `μ_N`.
    #[serde(rename = "cohomology random")]
    CohomologyRandom {
        group: GroupArg,
        degree: usize,
        coeff: Coefficients,
        samples: usize,
    },
    #[serde(rename = "center pointed")]
    CenterPointed { group: GroupArg, tau: TauSpec },
    #[serde(rename = "center classify")]
    CenterClassify {
        group: GroupArg,
        tau: TauSpec,
        #[serde(default)]
        twist: Twist,
    },
    #[serde(rename = "clifford pin")]
    CliffordPin {
        p: u64,
        dim: usize,
        #[serde(with = "text")]
        form: SpaceSpec,
    },
    #[serde(rename = "clifford spinor")]
    CliffordSpinor { p: u64, m: usize },
}

impl Command {
    /// The `<noun> <verb>` identifier, equal to the serialized tag.
    pub fn id(&self) -> &'static str {
        match self {
            Command::GroupInfo { .. } => "group info",
            Command::GroupAut { .. } => "group aut",
            Command::GroupSubgroups { .. } => "group subgroups",
            Command::QuadList { .. } => "quad list",
            Command::QuadInfo { .. } => "quad info",
            Command::QuadSummary { .. } => "quad summary",
            Command::OrthOrder { .. } => "orth order",
            Command::OrthSplit { .. } => "orth split",
            Command::LagrangianList { .. } => "lagrangian list",
            Command::LagrangianPolarize { .. } => "lagrangian polarize",
            Command::Cohomology { .. } => "cohomology compute",
            Command::CohomologyEm { .. } => "cohomology em",
            Command::CohomologyTorsor { .. } => "cohomology torsor",
            Command::CohomologyRandom { .. } => "cohomology random",
            Command::CenterPointed { .. } => "center pointed",
            Command::CenterClassify { .. } => "center classify",
            Command::CliffordPin { .. } => "clifford pin",
            Command::CliffordSpinor { .. } => "clifford spinor",
        }
    }

    pub fn uses_seed(&self) -> bool {
        matches!(self, Command::CohomologyRandom { .. })
    }

    fn form(&self) -> Option<&FormSpec> {
        match self {
            Command::QuadInfo { form, .. }
            | Command::QuadSummary { form, .. }
            | Command::OrthOrder { form, .. }
            | Command::LagrangianList { form, .. }
            | Command::LagrangianPolarize { form, .. }
            | Command::CohomologyTorsor { form, .. } => Some(form),
            _ => None,
        }
    }

    fn tau(&self) -> Option<&TauSpec> {
        match self {
            Command::CenterPointed { tau, .. } | Command::CenterClassify { tau, .. } => Some(tau),
            _ => None,
        }
    }
}

fn env_caps() -> Caps {
    Caps::from_env().unwrap_or_default()
}

/// A command with its caps, seed and output path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default = "env_caps")]
    pub caps: Caps,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            caps: Caps::default(),
            seed: None,
            output: None,
        }
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Positive caps and existing input files.
    pub fn validate(&self) -> Result<()> {
        self.caps.validate()?;
        let path = match (self.command.form(), self.command.tau()) {
            (Some(FormSpec::File(p)), _) | (_, Some(TauSpec::File(p))) => Some(p),
            _ => None,
        };
        if let Some(p) = path {
            if !p.is_file() {
                return Err(Error::Io(format!("{}: no such file", p.display())));
            }
        }
        Ok(())
    }

    /// The echo written into the envelope: the seed is filled in for
    /// commands that draw random numbers and dropped for the others.
    pub fn canonical(&self) -> JobSpec {
        let mut out = self.clone();
        out.seed = if self.command.uses_seed() {
            Some(self.seed.unwrap_or(0))
        } else {
            None
        };
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    VerificationFailure,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub version: String,
    pub input: JobSpec,
    /// Omitted when timing is disabled, which makes output byte-stable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<serde_json::Value>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

impl ResultEnvelope {
    pub fn exit_code(&self) -> i32 {
        match (&self.status, &self.error) {
            (Status::Ok, _) => EXIT_OK,
            (Status::VerificationFailure, _) => EXIT_VERIFICATION,
            (Status::Error, Some(e)) => exit_code_for_kind(&e.kind),
            (Status::Error, None) => EXIT_VERIFICATION,
        }
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Exit code for an error kind as reported by [`Error::kind`].
pub fn exit_code_for_kind(kind: &str) -> i32 {
    match kind {
        "ParseError" | "IoError" | "ShapeMismatch" | "EvenPrime" | "NotPrime" => EXIT_USAGE,
        "CapExceeded" => EXIT_CAP,
        _ => EXIT_VERIFICATION,
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    exit_code_for_kind(e.kind())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_round_trip_through_text() {
        for s in ["ev:3", "ev:2,4", "split:2,3", "file:/tmp/q.json"] {
            assert_eq!(s.parse::<FormSpec>().unwrap().to_string(), s);
        }
        for s in ["3", "2,4", "0"] {
            assert_eq!(s.parse::<GroupArg>().unwrap().to_string(), s);
        }
        assert!("2,x".parse::<GroupArg>().is_err());
        assert!("split:2".parse::<FormSpec>().is_err());
        assert!("hyp:2".parse::<FormSpec>().is_err());
        assert_eq!("trivial".parse::<TauSpec>().unwrap(), TauSpec::Trivial);
    }

    #[test]
    fn job_spec_json_round_trip() {
        let spec = JobSpec::new(Command::OrthOrder {
            group: Some("3,3".parse().unwrap()),
            form: "ev:3".parse().unwrap(),
            elements: false,
        });
        let js = serde_json::to_string(&spec).unwrap();
        assert!(js.contains(r#""command":"orth order""#));
        assert!(js.contains(r#""form":"ev:3""#));
        let back: JobSpec = serde_json::from_str(&js).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn missing_files_are_rejected() {
        let spec = JobSpec::new(Command::QuadInfo {
            group: None,
            form: FormSpec::File("/nonexistent/q.json".into()),
        });
        assert_eq!(spec.validate().unwrap_err().kind(), "IoError");
        let caps = Caps {
            group_order: 0,
            ..Caps::default()
        };
        let spec = JobSpec::new(Command::OrthSplit { n: 1, p: 3 }).with_caps(caps);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn seed_is_recorded_only_where_used() {
        let r = JobSpec::new(Command::CohomologyRandom {
            group: "2".parse().unwrap(),
            degree: 2,
            coeff: Coefficients::MuN(4),
            samples: 1,
        });
        assert_eq!(r.canonical().seed, Some(0));
        let o = JobSpec::new(Command::OrthSplit { n: 1, p: 3 }).with_seed(5);
        assert_eq!(o.canonical().seed, None);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code_for(&Error::Parse("x".into())), EXIT_USAGE);
        assert_eq!(
            exit_code_for(&Error::CapExceeded {
                what: "x",
                limit: 1,
                actual: 2
            }),
            EXIT_CAP
        );
        assert_eq!(exit_code_for(&Error::NoSolution("x".into())), EXIT_VERIFICATION);
    }
}
