//! Dispatch a validated manifest to the solvers.

use std::collections::BTreeMap;

use opapprox_core::linalg::{numerical_rank, singular_values, Subspace};
use opapprox_core::shorted::{is_compatible, shorted};
use opapprox_core::smoothing::{
    hat_equivalence_check, operator_smoothing_min, optimal_inverse, smoothing_equivalence_report,
    smoothing_solve,
};
use opapprox_core::spline::{operator_spline_min, spline_equivalence_report, spline_solve};
use opapprox_core::wls::{owls_min, w_inverse, wls_existence_report, wlss_solve};
use opapprox_core::{Error, Operator, SchattenIndex, Tolerances};

use crate::error::CliError;
use crate::manifest::{Manifest, Problem, ReportGroup, Role};
use crate::report::F64;
use crate::residuals::{block_weight, residuals, schatten_index, weight};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ABSENT: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;

/// A finished computation before its witness is placed inline or on disk.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub problem: Problem,
    pub exists: bool,
    pub min_value: Option<f64>,
    pub witness: Option<Operator>,
    pub residuals: BTreeMap<String, f64>,
    pub conditions: BTreeMap<String, bool>,
    pub diagnostics: Vec<String>,
    pub code: u8,
}

impl Outcome {
    fn new(problem: Problem) -> Self {
        Self {
            problem,
            exists: false,
            min_value: None,
            witness: None,
            residuals: BTreeMap::new(),
            conditions: BTreeMap::new(),
            diagnostics: Vec::new(),
            code: EXIT_OK,
        }
    }

    pub fn residuals_f64(&self) -> BTreeMap<String, F64> {
        self.residuals
            .iter()
            .map(|(k, v)| (k.clone(), F64(*v)))
            .collect()
    }
}

enum Stop {
    Absent(String),
    Violation(String),
    Cli(CliError),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        match e {
            Error::NotInRange { .. } | Error::NoMinimum(_) => Stop::Absent(e.to_string()),
            Error::EquivalenceViolation(_) => Stop::Violation(e.to_string()),
            other => Stop::Cli(other.into()),
        }
    }
}

impl From<CliError> for Stop {
    fn from(e: CliError) -> Self {
        Stop::Cli(e)
    }
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rank decision and conditioning of `m` on its numerical range.
pub fn rank_note(name: &str, m: &Operator, tol: &Tolerances) -> String {
    let r = numerical_rank(m, tol);
    let s = singular_values(m);
    match (s.first(), r) {
        (Some(&top), r) if r > 0 => {
            let low = s[r - 1];
            format!(
                "rank({name}) = {r} of {}; sigma_max = {}, smallest retained sigma = {}, condition on range = {}",
                s.len(),
                sci(top),
                sci(low),
                sci(top / low)
            )
        }
        _ => format!("rank({name}) = 0 of {}", s.len()),
    }
}

fn prefixed(out: &mut BTreeMap<String, bool>, prefix: &str, map: BTreeMap<String, bool>) {
    out.extend(map.into_iter().map(|(k, v)| (format!("{prefix}.{k}"), v)));
}

/// Run the manifest's problem. Nonexistence and equivalence violations
/// still produce an outcome (exit codes 2 and 3); bad input is an error.
pub fn execute(m: &Manifest) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(m.problem);
    for role in &m.unused {
        out.diagnostics.push(format!(
            "role {} is not used by problem '{}'",
            role.key(),
            m.problem
        ));
    }
    if m.p.is_some() && !m.problem.uses_p() {
        out.diagnostics
            .push(format!("p is not used by problem '{}'", m.problem));
    }
    match solve(m, &mut out) {
        Ok(()) => {
            out.code = if out.exists { EXIT_OK } else { EXIT_ABSENT };
        }
        Err(Stop::Absent(msg)) => {
            out.exists = false;
            out.diagnostics.push(msg);
            out.code = EXIT_ABSENT;
        }
        Err(Stop::Violation(msg)) => {
            out.exists = false;
            out.witness = None;
            out.min_value = None;
            out.diagnostics.push(msg);
            out.code = EXIT_VIOLATION;
        }
        Err(Stop::Cli(e)) => return Err(e),
    }
    if let Some(w) = &out.witness {
        out.residuals = residuals(m, w, out.min_value)?;
    }
    Ok(out)
}

fn solve(m: &Manifest, out: &mut Outcome) -> Result<(), Stop> {
    let tol = &m.tol;
    let notes = &mut out.diagnostics;
    match m.problem {
        Problem::Wls => {
            let (a, x) = (m.mat(Role::A), m.vector(Role::X));
            let w = weight(m, Role::W)?;
            notes.push(rank_note("A", a, tol));
            notes.push(rank_note("W", w.matrix(), tol));
            let u = wlss_solve(a, &w, &x, tol)?;
            let r = a * &u - x;
            out.min_value = Some(w.quadratic_form(&r).max(0.0).sqrt());
            out.witness = Some(Operator::from_column_slice(u.len(), 1, u.as_slice()));
            out.exists = true;
        }
        Problem::WInverse => {
            let a = m.mat(Role::A);
            let w = weight(m, Role::W)?;
            notes.push(rank_note("A", a, tol));
            notes.push(rank_note("A*WA", &(a.adjoint() * w.matrix() * a), tol));
            let g = w_inverse(a, &w, tol)?
                .ok_or_else(|| Stop::Absent("A*W(AX - I) = 0 has no solution".into()))?;
            out.witness = Some(g);
            out.exists = true;
        }
        Problem::Owls => {
            let a = m.mat(Role::A);
            let w = weight(m, Role::W)?;
            notes.push(rank_note("A", a, tol));
            let sol = owls_min(a, &w, schatten_index(m)?, tol)?;
            notes.push(rank_note("W_/R(A)", sol.shorted_w.matrix(), tol));
            out.min_value = Some(sol.value);
            out.witness = Some(sol.x0);
            out.exists = true;
        }
        Problem::Spline => {
            let (t, v) = (m.mat(Role::T), m.mat(Role::V));
            notes.push(rank_note("T", t, tol));
            notes.push(rank_note("V", v, tol));
            let sol = spline_solve(t, v, &m.vector(Role::F0), tol)?;
            out.min_value = Some(sol.min_value);
            out.witness = Some(Operator::from_column_slice(
                sol.h.len(),
                1,
                sol.h.as_slice(),
            ));
            out.exists = true;
        }
        Problem::OpSpline => {
            let (t, v) = (m.mat(Role::T), m.mat(Role::V));
            notes.push(rank_note("T", t, tol));
            notes.push(rank_note("V", v, tol));
            let sol = operator_spline_min(t, v, m.mat(Role::B0), schatten_index(m)?, tol)?;
            out.min_value = Some(sol.value);
            out.witness = Some(sol.x0);
            out.exists = true;
        }
        Problem::Smoothing => {
            let (t, v) = (m.mat(Role::T), m.mat(Role::V));
            notes.push(rank_note(
                "T*T + V*V",
                &(t.adjoint() * t + v.adjoint() * v),
                tol,
            ));
            let sol = smoothing_solve(t, v, &m.vector(Role::F0), tol)?;
            out.min_value = Some(sol.objective);
            out.witness = Some(Operator::from_column_slice(
                sol.h.len(),
                1,
                sol.h.as_slice(),
            ));
            out.exists = true;
        }
        Problem::OpSmoothing => {
            let (t, v) = (m.mat(Role::T), m.mat(Role::V));
            notes.push(rank_note(
                "T*T + V*V",
                &(t.adjoint() * t + v.adjoint() * v),
                tol,
            ));
            let sol = operator_smoothing_min(t, v, m.mat(Role::B0), tol)?;
            out.min_value = Some(sol.value);
            out.witness = Some(sol.x0);
            out.exists = true;
        }
        Problem::OptInverse => {
            let a = m.mat(Role::A);
            if !m.has(Role::W12) {
                notes.push("W12 not given; using the zero block".into());
            }
            let bw = block_weight(m)?;
            notes.push(rank_note("A", a, tol));
            let g = optimal_inverse(a, &bw, tol)?.ok_or_else(|| {
                Stop::Absent(
                    "(A*W11A + A*W12 + W12*A + W22)X = A*W11 + W12* has no solution".into(),
                )
            })?;
            out.witness = Some(g);
            out.exists = true;
        }
        Problem::Shorted => {
            let w = weight(m, Role::W)?;
            let s = Subspace::span(m.mat(Role::S), tol);
            notes.push(format!("dim S = {} of {}", s.dim(), s.ambient_dim()));
            let sigma = shorted(&w, &s, tol)?;
            notes.push(rank_note("W_/S", sigma.matrix(), tol));
            out.witness = Some(sigma.into_matrix());
            out.exists = true;
        }
        Problem::Compat => {
            let w = weight(m, Role::W)?;
            let s = Subspace::span(m.mat(Role::S), tol);
            let cert = is_compatible(&w, &s, tol)?;
            notes.push(format!(
                "dim S = {}, dim S^perp_W = {}, dim(S + S^perp_W) = {} of {}",
                s.dim(),
                cert.s_perp_w_basis.dim(),
                cert.sum_rank,
                w.dim()
            ));
            out.conditions.insert("compatible".into(), cert.compatible);
            out.exists = cert.compatible;
            out.witness = cert.projection;
        }
        Problem::Report => report(m, out)?,
    }
    Ok(())
}

fn report(m: &Manifest, out: &mut Outcome) -> Result<(), Stop> {
    let tol = &m.tol;
    let groups = m.report_groups();
    if groups.is_empty() {
        return Err(CliError::Dimension(
            "problem 'report' needs A and W, T and V, or A with W11 and W22".into(),
        )
        .into());
    }
    let mut exists = true;
    for g in groups {
        match g {
            ReportGroup::Wls => {
                let p = m.p.map(SchattenIndex::new).transpose()?;
                let r = wls_existence_report(m.mat(Role::A), &weight(m, Role::W)?, p, tol)?;
                prefixed(&mut out.conditions, "wls", r.conditions.to_map());
                out.conditions
                    .insert("wls.compatible".into(), r.compatibility.compatible);
                if let Some(v) = r.min_value_p {
                    out.diagnostics
                        .push(format!("wls: min ||AX - I||_(p,W) = {}", sci(v)));
                }
                out.diagnostics
                    .extend(r.notes.into_iter().map(|n| format!("wls: {n}")));
                exists &= r.exists;
            }
            ReportGroup::Splines => {
                let (t, v) = (m.mat(Role::T), m.mat(Role::V));
                let s = spline_equivalence_report(t, v, tol)?;
                prefixed(&mut out.conditions, "spline", s.conditions.to_map());
                let sm = smoothing_equivalence_report(t, v, m.seed, tol)?;
                prefixed(&mut out.conditions, "smoothing", sm.conditions.to_map());
                exists &= s.exists && sm.exists;
            }
            ReportGroup::Hat => {
                let h = hat_equivalence_check(m.mat(Role::A), &block_weight(m)?, tol)?;
                prefixed(&mut out.conditions, "hat", h.to_map());
                if let Some(r) = h.z_residual {
                    out.diagnostics
                        .push(format!("hat: ||A^*W A^ Z - A^*W|| = {}", sci(r)));
                }
                exists &= h.hat_w_inverse;
            }
        }
    }
    out.exists = exists;
    Ok(())
}
