//! Problem manifests: a JSON document naming the problem, the Matrix Market
//! file for each operator role, and optional `p`, tolerances and seed.
//!
//! ```json
//! { "problem": "wls", "A": "A.mtx", "W": "W.mtx", "x": "x.mtx" }
//! ```
//!
//! Paths are relative to the manifest. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use opapprox_core::{Operator, Tolerances, Vector};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::mtx::read_mtx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Wls,
    WInverse,
    Owls,
    Spline,
    OpSpline,
    Smoothing,
    OpSmoothing,
    OptInverse,
    Shorted,
    Compat,
    Report,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Wls => "wls",
            Problem::WInverse => "w-inverse",
            Problem::Owls => "owls",
            Problem::Spline => "spline",
            Problem::OpSpline => "op-spline",
            Problem::Smoothing => "smoothing",
            Problem::OpSmoothing => "op-smoothing",
            Problem::OptInverse => "opt-inverse",
            Problem::Shorted => "shorted",
            Problem::Compat => "compat",
            Problem::Report => "report",
        }
    }

    /// Roles that must be present. `report` instead needs at least one
    /// complete group, see [`Manifest::report_groups`].
    pub fn required(self) -> &'static [Role] {
        use Role::*;
        match self {
            Problem::Wls => &[A, W, X],
            Problem::WInverse | Problem::Owls => &[A, W],
            Problem::Spline | Problem::Smoothing => &[T, V, F0],
            Problem::OpSpline | Problem::OpSmoothing => &[T, V, B0],
            Problem::OptInverse => &[A, W11, W22],
            Problem::Shorted | Problem::Compat => &[W, S],
            Problem::Report => &[],
        }
    }

    fn optional(self) -> &'static [Role] {
        match self {
            Problem::OptInverse => &[Role::W12],
            Problem::Report => &Role::ALL,
            _ => &[],
        }
    }

    pub fn uses_p(self) -> bool {
        matches!(self, Problem::Owls | Problem::OpSpline | Problem::Report)
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    A,
    W,
    T,
    V,
    B0,
    X,
    F0,
    W11,
    W12,
    W22,
    S,
}

impl Role {
    pub const ALL: [Role; 11] = [
        Role::A,
        Role::W,
        Role::T,
        Role::V,
        Role::B0,
        Role::X,
        Role::F0,
        Role::W11,
        Role::W12,
        Role::W22,
        Role::S,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Role::A => "A",
            Role::W => "W",
            Role::T => "T",
            Role::V => "V",
            Role::B0 => "B0",
            Role::X => "x",
            Role::F0 => "f0",
            Role::W11 => "W11",
            Role::W12 => "W12",
            Role::W22 => "W22",
            Role::S => "S",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceFields {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_rtol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_rtol: Option<f64>,
}

/// The manifest document as written on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestFile {
    pub problem: Problem,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(rename = "W", default, skip_serializing_if = "Option::is_none")]
    pub w: Option<String>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(rename = "V", default, skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[serde(rename = "B0", default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f0: Option<String>,
    #[serde(rename = "W11", default, skip_serializing_if = "Option::is_none")]
    pub w11: Option<String>,
    #[serde(rename = "W12", default, skip_serializing_if = "Option::is_none")]
    pub w12: Option<String>,
    #[serde(rename = "W22", default, skip_serializing_if = "Option::is_none")]
    pub w22: Option<String>,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceFields>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ManifestFile {
    pub fn new(problem: Problem) -> Self {
        Self {
            problem,
            a: None,
            w: None,
            t: None,
            v: None,
            b0: None,
            x: None,
            f0: None,
            w11: None,
            w12: None,
            w22: None,
            s: None,
            p: None,
            tolerances: None,
            seed: None,
        }
    }

    pub fn path(&self, role: Role) -> Option<&str> {
        match role {
            Role::A => self.a.as_deref(),
            Role::W => self.w.as_deref(),
            Role::T => self.t.as_deref(),
            Role::V => self.v.as_deref(),
            Role::B0 => self.b0.as_deref(),
            Role::X => self.x.as_deref(),
            Role::F0 => self.f0.as_deref(),
            Role::W11 => self.w11.as_deref(),
            Role::W12 => self.w12.as_deref(),
            Role::W22 => self.w22.as_deref(),
            Role::S => self.s.as_deref(),
        }
    }

    pub fn set_path(&mut self, role: Role, path: impl Into<String>) -> &mut Self {
        let slot = match role {
            Role::A => &mut self.a,
            Role::W => &mut self.w,
            Role::T => &mut self.t,
            Role::V => &mut self.v,
            Role::B0 => &mut self.b0,
            Role::X => &mut self.x,
            Role::F0 => &mut self.f0,
            Role::W11 => &mut self.w11,
            Role::W12 => &mut self.w12,
            Role::W22 => &mut self.w22,
            Role::S => &mut self.s,
        };
        *slot = Some(path.into());
        self
    }
}

/// Command-line values that take precedence over the manifest.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub rank_rtol: Option<f64>,
    pub residual_rtol: Option<f64>,
    pub seed: Option<u64>,
}

/// Groups of roles the `report` problem can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportGroup {
    /// `A`, `W`: weighted least squares chain.
    Wls,
    /// `T`, `V`: spline and smoothing chains.
    Splines,
    /// `A`, `W11`, `W22` and optionally `W12`: hat-lift check.
    Hat,
}

/// A validated manifest with every matrix loaded.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub problem: Problem,
    pub mats: BTreeMap<Role, Operator>,
    pub p: Option<f64>,
    pub tol: Tolerances,
    pub seed: u64,
    /// Roles present in the manifest but not used by the problem.
    pub unused: Vec<Role>,
}

impl Manifest {
    /// Panics if `role` is absent; callers only ask for validated roles.
    pub fn mat(&self, role: Role) -> &Operator {
        self.mats
            .get(&role)
            .unwrap_or_else(|| panic!("role {} was validated as present", role.key()))
    }

    pub fn vector(&self, role: Role) -> Vector {
        self.mat(role).column(0).into_owned()
    }

    pub fn has(&self, role: Role) -> bool {
        self.mats.contains_key(&role)
    }

    pub fn report_groups(&self) -> Vec<ReportGroup> {
        let mut g = Vec::new();
        if self.has(Role::A) && self.has(Role::W) {
            g.push(ReportGroup::Wls);
        }
        if self.has(Role::T) && self.has(Role::V) {
            g.push(ReportGroup::Splines);
        }
        if self.has(Role::A) && self.has(Role::W11) && self.has(Role::W22) {
            g.push(ReportGroup::Hat);
        }
        g
    }

    /// `W12`, or the zero block when the manifest omits it.
    pub fn w12(&self) -> Operator {
        self.mats.get(&Role::W12).cloned().unwrap_or_else(|| {
            Operator::zeros(self.mat(Role::W11).nrows(), self.mat(Role::W22).nrows())
        })
    }
}

pub fn parse_manifest(path: &Path, overrides: &Overrides) -> Result<Manifest, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let file: ManifestFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    load(&file, &dir, overrides)
}

/// Validate a parsed manifest and load its matrices from `dir`.
pub fn load(file: &ManifestFile, dir: &Path, overrides: &Overrides) -> Result<Manifest, CliError> {
    let problem = file.problem;
    if let Some(p) = file.p {
        if !(p.is_finite() && p >= 1.0) {
            return Err(CliError::Parse(format!(
                "p = {p} is not a real number >= 1"
            )));
        }
    }
    let given = file.tolerances.clone().unwrap_or_default();
    let defaults = Tolerances::default();
    let tol = Tolerances::new(
        overrides
            .rank_rtol
            .or(given.rank_rtol)
            .unwrap_or(defaults.rank_rtol),
        overrides
            .residual_rtol
            .or(given.residual_rtol)
            .unwrap_or(defaults.residual_rtol),
    )
    .map_err(|e| CliError::Parse(e.to_string()))?;

    let missing: Vec<&str> = problem
        .required()
        .iter()
        .filter(|r| file.path(**r).is_none())
        .map(|r| r.key())
        .collect();
    if !missing.is_empty() {
        return Err(CliError::Dimension(format!(
            "problem '{problem}' requires role(s) {}",
            missing.join(", ")
        )));
    }

    let mut mats = BTreeMap::new();
    let mut unused = Vec::new();
    for role in Role::ALL {
        let Some(rel) = file.path(role) else { continue };
        if !problem.required().contains(&role) && !problem.optional().contains(&role) {
            unused.push(role);
            continue;
        }
        let full: PathBuf = dir.join(rel);
        let m =
            read_mtx(&full).map_err(|e| CliError::Parse(format!("role {}: {e}", role.key())))?;
        mats.insert(role, m);
    }

    let manifest = Manifest {
        problem,
        mats,
        p: file.p,
        tol,
        seed: overrides.seed.or(file.seed).unwrap_or(0),
        unused,
    };
    check_dims(&manifest)?;
    Ok(manifest)
}

fn shape(m: &Manifest, r: Role) -> Option<(usize, usize)> {
    m.mats.get(&r).map(|x| x.shape())
}

fn dim_err(msg: String) -> CliError {
    CliError::Dimension(msg)
}

fn square(m: &Manifest, r: Role) -> Result<Option<usize>, CliError> {
    match shape(m, r) {
        Some((a, b)) if a != b => Err(dim_err(format!("{} is {a}x{b}, expected square", r.key()))),
        s => Ok(s.map(|s| s.0)),
    }
}

fn column(m: &Manifest, r: Role, len: usize) -> Result<(), CliError> {
    match shape(m, r) {
        Some(s) if s != (len, 1) => Err(dim_err(format!(
            "{} is {}x{}, expected a {len}x1 vector",
            r.key(),
            s.0,
            s.1
        ))),
        _ => Ok(()),
    }
}

fn rows(m: &Manifest, r: Role, n: usize, against: &str) -> Result<(), CliError> {
    match shape(m, r) {
        Some(s) if s.0 != n => Err(dim_err(format!(
            "{} has {} rows, {against} needs {n}",
            r.key(),
            s.0
        ))),
        _ => Ok(()),
    }
}

fn cols(m: &Manifest, r: Role, n: usize, against: &str) -> Result<(), CliError> {
    match shape(m, r) {
        Some(s) if s.1 != n => Err(dim_err(format!(
            "{} has {} columns, {against} needs {n}",
            r.key(),
            s.1
        ))),
        _ => Ok(()),
    }
}

/// Shape consistency of every loaded role.
fn check_dims(m: &Manifest) -> Result<(), CliError> {
    let w = square(m, Role::W)?;
    let w11 = square(m, Role::W11)?;
    let w22 = square(m, Role::W22)?;

    if let Some((ar, ac)) = shape(m, Role::A) {
        if let Some(n) = w {
            if n != ar {
                return Err(dim_err(format!("A has {ar} rows, W is {n}x{n}")));
            }
        }
        if let Some(n) = w11 {
            if n != ar {
                return Err(dim_err(format!("A has {ar} rows, W11 is {n}x{n}")));
            }
        }
        if let Some(n) = w22 {
            if n != ac {
                return Err(dim_err(format!("A has {ac} columns, W22 is {n}x{n}")));
            }
        }
        column(m, Role::X, ar)?;
    }
    if let (Some(a), Some(b)) = (w11, w22) {
        if let Some(s) = shape(m, Role::W12) {
            if s != (a, b) {
                return Err(dim_err(format!("W12 is {}x{}, expected {a}x{b}", s.0, s.1)));
            }
        }
    }
    if let Some((_, tc)) = shape(m, Role::T) {
        cols(m, Role::V, tc, "T")?;
    }
    if let Some((vr, _)) = shape(m, Role::V) {
        column(m, Role::F0, vr)?;
        rows(m, Role::B0, vr, "V")?;
    }
    if let Some(n) = w {
        rows(m, Role::S, n, "W")?;
    }
    Ok(())
}
