//! Job-file schema and parsing.
//!
//! A job names its task in `task` and carries the payload in a table of
//! the same name. Unknown keys are rejected everywhere; errors carry the
//! line and column of the offending input.

use serde::Deserialize;
use std::ops::Range;
use toml::Spanned;

pub const JOB_VERSION: i64 = 1;

pub type Text = Spanned<String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskName {
    VerifyFeq,
    BsSearch,
    RestrictOp,
    CheckExtensible,
    TestIdeal,
    Multiplier,
    Lct,
    JumpingNumbers,
    Vfil,
    Hodge0,
    CompareSummand,
    MustataCheck,
}

impl TaskName {
    pub const ALL: [TaskName; 12] = [
        TaskName::VerifyFeq,
        TaskName::BsSearch,
        TaskName::RestrictOp,
        TaskName::CheckExtensible,
        TaskName::TestIdeal,
        TaskName::Multiplier,
        TaskName::Lct,
        TaskName::JumpingNumbers,
        TaskName::Vfil,
        TaskName::Hodge0,
        TaskName::CompareSummand,
        TaskName::MustataCheck,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TaskName::VerifyFeq => "verify-feq",
            TaskName::BsSearch => "bs-search",
            TaskName::RestrictOp => "restrict-op",
            TaskName::CheckExtensible => "check-extensible",
            TaskName::TestIdeal => "test-ideal",
            TaskName::Multiplier => "multiplier",
            TaskName::Lct => "lct",
            TaskName::JumpingNumbers => "jumping-numbers",
            TaskName::Vfil => "vfil",
            TaskName::Hodge0 => "hodge0",
            TaskName::CompareSummand => "compare-summand",
            TaskName::MustataCheck => "mustata-check",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub version: Spanned<i64>,
    pub task: Spanned<TaskName>,
    pub ring: Ring,
    pub semigroup: Option<SemigroupSpec>,
    #[serde(rename = "verify-feq")]
    pub verify_feq: Option<VerifyFeq>,
    #[serde(rename = "bs-search")]
    pub bs_search: Option<BsSearch>,
    #[serde(rename = "restrict-op")]
    pub restrict_op: Option<RestrictOp>,
    #[serde(rename = "check-extensible")]
    pub check_extensible: Option<CheckExtensible>,
    #[serde(rename = "test-ideal")]
    pub test_ideal: Option<TestIdeal>,
    pub multiplier: Option<IdealAt>,
    pub lct: Option<IdealOnly>,
    #[serde(rename = "jumping-numbers")]
    pub jumping_numbers: Option<JumpingNumbers>,
    pub vfil: Option<Vfil>,
    pub hodge0: Option<Hodge0>,
    #[serde(rename = "compare-summand")]
    pub compare_summand: Option<IdealAt>,
    #[serde(rename = "mustata-check")]
    pub mustata_check: Option<MustataCheck>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ring {
    pub vars: Spanned<Vec<String>>,
}

/// Exactly one of `basis`, `generators`, or `weights` with `orders`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupSpec {
    /// Lattice basis; the semigroup is `L ∩ V ∩ ℕ^d`.
    pub basis: Option<Vec<Vec<i64>>>,
    /// Rational equations cutting out `V`.
    pub subspace: Option<Vec<Vec<Text>>>,
    /// Monoid generators; only graded operators accept this form.
    pub generators: Option<Vec<Vec<u32>>>,
    /// Diagonal group `diag(ζ_{n_j}^{w_{j,i}})`; the invariant lattice.
    pub weights: Option<Vec<Vec<i64>>>,
    pub orders: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Formal,
    Specialized,
    Both,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyFeq {
    pub f: Vec<Text>,
    pub kind: Option<Text>,
    pub g: Option<Text>,
    pub b: Text,
    pub mode: Option<Mode>,
    /// Generators of a monomial ideal `I`; the ring is then `K[x]/I`.
    pub quotient: Option<Vec<Vec<u32>>>,
    pub grid_bound: Option<u32>,
    pub terms: Vec<Term>,
}

/// Either `op` (a Weyl-algebra expression) or a graded operator given by
/// `theta` and `pieces`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub c: Vec<i64>,
    pub op: Option<Text>,
    pub theta: Option<Vec<String>>,
    pub declared_order: Option<u32>,
    pub pieces: Option<Vec<Piece>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub shift: Vec<i64>,
    pub num: Text,
    pub den: Text,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub max_order: u32,
    #[serde(default)]
    pub max_s_degree: u32,
    #[serde(default)]
    pub max_coeff_degree: u32,
    pub max_b_degree: u32,
    pub max_unknowns: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BsSearch {
    pub f: Vec<Text>,
    pub g: Option<Text>,
    pub kind: Option<Text>,
    pub c_vectors: Option<Vec<Vec<i64>>>,
    /// Restrict the ansatz to operators of the `[semigroup]` summand.
    #[serde(default)]
    pub summand: bool,
    pub max_order: u32,
    #[serde(default)]
    pub max_s_degree: u32,
    #[serde(default)]
    pub max_coeff_degree: u32,
    pub max_b_degree: u32,
    pub max_unknowns: Option<usize>,
}

impl BsSearch {
    pub fn bounds(&self) -> Bounds {
        Bounds {
            max_order: self.max_order,
            max_s_degree: self.max_s_degree,
            max_coeff_degree: self.max_coeff_degree,
            max_b_degree: self.max_b_degree,
            max_unknowns: self.max_unknowns,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictOp {
    pub op: Text,
    pub degree_bound: u32,
    pub s_vars: Option<Vec<String>>,
    pub apply_to: Option<Text>,
    pub s_values: Option<Vec<Text>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckExtensible {
    pub p: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestIdeal {
    pub ideal: Vec<Vec<u32>>,
    pub lambda: Text,
    pub p: u64,
    pub e_max: u32,
    pub cap: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealAt {
    pub ideal: Vec<Vec<u32>>,
    pub lambda: Text,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealOnly {
    pub ideal: Vec<Vec<u32>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpingNumbers {
    pub ideal: Vec<Vec<u32>>,
    pub bound: Text,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vfil {
    pub ideal: Vec<Vec<u32>>,
    pub alpha: Text,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hodge0 {
    pub f: Text,
    pub lambda: Text,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MustataCheck {
    pub f: Vec<Text>,
    pub tuple: Bounds,
    pub lift: Bounds,
}

/// An input error, located when the position is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            _ => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for InputError {}

/// One-based line and column of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, col)
}

/// Locates errors within one source text.
pub struct Locator<'a> {
    pub src: &'a str,
}

impl Locator<'_> {
    pub fn at(&self, span: Range<usize>, message: impl Into<String>) -> InputError {
        let (l, c) = line_col(self.src, span.start);
        InputError {
            line: Some(l),
            column: Some(c),
            message: message.into(),
        }
    }

    pub fn text(&self, t: &Text, message: impl std::fmt::Display) -> InputError {
        self.at(t.span(), format!("{message} (in \"{}\")", t.get_ref()))
    }
}

pub fn unlocated(message: impl Into<String>) -> InputError {
    InputError {
        line: None,
        column: None,
        message: message.into(),
    }
}

/// Parses and validates the envelope of a job file.
pub fn parse_job(src: &str) -> Result<JobFile, InputError> {
    let job: JobFile = toml::from_str(src).map_err(|e| {
        let message = e.message().to_string();
        match e.span() {
            Some(span) => Locator { src }.at(span, message),
            None => unlocated(message),
        }
    })?;
    let loc = Locator { src };
    if *job.version.get_ref() != JOB_VERSION {
        return Err(loc.at(
            job.version.span(),
            format!("unsupported job version {}, expected {JOB_VERSION}", job.version.get_ref()),
        ));
    }
    let present: Vec<TaskName> = TaskName::ALL.into_iter().filter(|t| job.has_payload(*t)).collect();
    let task = *job.task.get_ref();
    if !present.contains(&task) {
        return Err(loc.at(job.task.span(), format!("missing [{}] table for this task", task.as_str())));
    }
    if let Some(other) = present.iter().find(|t| **t != task) {
        return Err(loc.at(
            job.task.span(),
            format!("table [{}] does not belong to task {}", other.as_str(), task.as_str()),
        ));
    }
    if job.ring.vars.get_ref().is_empty() {
        return Err(loc.at(job.ring.vars.span(), "ring needs at least one variable"));
    }
    Ok(job)
}

impl JobFile {
    fn has_payload(&self, t: TaskName) -> bool {
        match t {
            TaskName::VerifyFeq => self.verify_feq.is_some(),
            TaskName::BsSearch => self.bs_search.is_some(),
            TaskName::RestrictOp => self.restrict_op.is_some(),
            TaskName::CheckExtensible => self.check_extensible.is_some(),
            TaskName::TestIdeal => self.test_ideal.is_some(),
            TaskName::Multiplier => self.multiplier.is_some(),
            TaskName::Lct => self.lct.is_some(),
            TaskName::JumpingNumbers => self.jumping_numbers.is_some(),
            TaskName::Vfil => self.vfil.is_some(),
            TaskName::Hodge0 => self.hodge0.is_some(),
            TaskName::CompareSummand => self.compare_summand.is_some(),
            TaskName::MustataCheck => self.mustata_check.is_some(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "version = 1\ntask = \"lct\"\n[ring]\nvars = [\"x\"]\n[lct]\nideal = [[1]]\n";

    #[test]
    fn parses_minimal_job() {
        let j = parse_job(MINIMAL).unwrap();
        assert_eq!(*j.task.get_ref(), TaskName::Lct);
        assert_eq!(j.lct.unwrap().ideal, vec![vec![1]]);
    }

    #[test]
    fn unknown_field_is_located() {
        let src = MINIMAL.replace("ideal = [[1]]", "ideal = [[1]]\nextra = 3");
        let e = parse_job(&src).unwrap_err();
        assert_eq!(e.line, Some(7));
        assert!(e.message.contains("extra"), "{e}");
    }

    #[test]
    fn task_table_must_match() {
        let src = MINIMAL.replace("[lct]", "[multiplier]\nlambda = \"1\"");
        let e = parse_job(&src).unwrap_err();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn wrong_version_is_rejected() {
        let e = parse_job(&MINIMAL.replace("version = 1", "version = 7")).unwrap_err();
        assert_eq!((e.line, e.column), (Some(1), Some(11)));
    }

    #[test]
    fn line_col_counts_from_one() {
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
        assert_eq!(line_col("ab", 0), (1, 1));
    }
}
