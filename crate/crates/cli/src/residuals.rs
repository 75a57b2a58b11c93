//! Residual norms recomputed from a witness.
//!
//! The same function runs when a report is produced and when it is read
//! back, so a report can be checked against its own witness.

use std::collections::BTreeMap;

use opapprox_core::linalg::{hermitian_eigen, identity, null_basis};
use opapprox_core::schatten::{schatten_norm, weighted_schatten_norm};
use opapprox_core::smoothing::{optimal_system, smoothing_objective};
use opapprox_core::{BlockWeight, Operator, PsdWeight, SchattenIndex, Subspace};

use crate::error::CliError;
use crate::manifest::{Manifest, Problem, Role};

pub fn weight(m: &Manifest, role: Role) -> Result<PsdWeight, CliError> {
    PsdWeight::new(m.mat(role).clone(), &m.tol)
        .map_err(|e| CliError::Dimension(format!("{}: {e}", role.key())))
}

pub fn block_weight(m: &Manifest) -> Result<BlockWeight, CliError> {
    BlockWeight::new(
        weight(m, Role::W11)?,
        m.w12(),
        weight(m, Role::W22)?,
        &m.tol,
    )
    .map_err(|e| CliError::Dimension(format!("block weight: {e}")))
}

pub fn schatten_index(m: &Manifest) -> Result<SchattenIndex, CliError> {
    Ok(SchattenIndex::new(m.p.unwrap_or(2.0))?)
}

fn gap(value: f64, min_value: Option<f64>) -> f64 {
    min_value.map_or(0.0, |v| (value - v).abs())
}

/// `‖P_{N(V)} T*T X‖`.
fn spline_normal(m: &Manifest, x: &Operator) -> f64 {
    let (t, v) = (m.mat(Role::T), m.mat(Role::V));
    let pn = null_basis(v, &m.tol).projector();
    (pn * t.adjoint() * t * x).norm()
}

/// `‖(T*T + V*V)X − V*B‖`.
fn smoothing_normal(m: &Manifest, x: &Operator, b: &Operator) -> f64 {
    let (t, v) = (m.mat(Role::T), m.mat(Role::V));
    ((t.adjoint() * t + v.adjoint() * v) * x - v.adjoint() * b).norm()
}

/// Named residual norms of `witness` for the manifest's problem. Value
/// gaps compare the witness against `min_value`.
pub fn residuals(
    m: &Manifest,
    witness: &Operator,
    min_value: Option<f64>,
) -> Result<BTreeMap<String, f64>, CliError> {
    let tol = &m.tol;
    let mut r = BTreeMap::new();
    let mut put = |k: &str, v: f64| {
        r.insert(k.to_string(), v);
    };
    match m.problem {
        Problem::Wls => {
            let (a, x) = (m.mat(Role::A), m.mat(Role::X));
            let w = weight(m, Role::W)?;
            let res = a * witness - x;
            put("normal_equation", (a.adjoint() * w.matrix() * &res).norm());
            let value = w
                .quadratic_form(&res.column(0).into_owned())
                .max(0.0)
                .sqrt();
            put("value_gap", gap(value, min_value));
        }
        Problem::WInverse | Problem::Owls => {
            let a = m.mat(Role::A);
            let w = weight(m, Role::W)?;
            let res = a * witness - identity::<f64>(a.nrows());
            put("normal_equation", (a.adjoint() * w.matrix() * &res).norm());
            if m.problem == Problem::Owls {
                let value = weighted_schatten_norm(&res, &w, schatten_index(m)?, tol)?;
                put("value_gap", gap(value, min_value));
            }
        }
        Problem::Spline | Problem::OpSpline => {
            let (t, v) = (m.mat(Role::T), m.mat(Role::V));
            let (rhs, p) = if m.problem == Problem::Spline {
                (m.mat(Role::F0), SchattenIndex::frobenius())
            } else {
                (m.mat(Role::B0), schatten_index(m)?)
            };
            put("interpolation", (v * witness - rhs).norm());
            put("normal_equation", spline_normal(m, witness));
            put(
                "value_gap",
                gap(schatten_norm(&(t * witness), p), min_value),
            );
        }
        Problem::Smoothing | Problem::OpSmoothing => {
            let b = if m.problem == Problem::Smoothing {
                m.mat(Role::F0)
            } else {
                m.mat(Role::B0)
            };
            put("normal_equation", smoothing_normal(m, witness, b));
            let value = smoothing_objective(m.mat(Role::T), m.mat(Role::V), b, witness);
            put("value_gap", gap(value, min_value));
        }
        Problem::OptInverse => {
            let sys = optimal_system(m.mat(Role::A), &block_weight(m)?)?;
            put("normal_equation", (&sys.lhs * witness - &sys.rhs_f).norm());
        }
        Problem::Shorted => {
            let w = weight(m, Role::W)?;
            let ps = Subspace::span(m.mat(Role::S), tol).projector();
            put("s_component", (ps * witness).norm());
            put("psd_violation", (-hermitian_eigen(witness).min()).max(0.0));
            put(
                "order_violation",
                (-hermitian_eigen(&(w.matrix() - witness)).min()).max(0.0),
            );
        }
        Problem::Compat => {
            let w = weight(m, Role::W)?;
            let ps = Subspace::span(m.mat(Role::S), tol).projector();
            put("idempotence", (witness * witness - witness).norm());
            put(
                "w_symmetry",
                (w.matrix() * witness - witness.adjoint() * w.matrix()).norm(),
            );
            put("range", (ps * witness - witness).norm());
        }
        Problem::Report => {}
    }
    Ok(r)
}
