#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_complex::Complex64;
use opapprox::mtx::write_mtx;
use opapprox::report::ResultReport;
use opapprox::{ManifestFile, Problem, Role};
use opapprox_core::Operator;

pub fn real(rows: usize, cols: usize, row_major: &[f64]) -> Operator {
    assert_eq!(row_major.len(), rows * cols);
    Operator::from_fn(rows, cols, |i, j| {
        Complex64::new(row_major[i * cols + j], 0.0)
    })
}

pub fn diag(d: &[f64]) -> Operator {
    let n = d.len();
    Operator::from_fn(n, n, |i, j| {
        Complex64::new(if i == j { d[i] } else { 0.0 }, 0.0)
    })
}

/// A manifest in a directory, with its operands written next to it.
pub struct Case {
    pub dir: PathBuf,
    pub file: ManifestFile,
    pub name: String,
}

impl Case {
    pub fn new(dir: &Path, name: &str, problem: Problem) -> Self {
        Self {
            dir: dir.to_path_buf(),
            file: ManifestFile::new(problem),
            name: name.to_string(),
        }
    }

    pub fn with(mut self, role: Role, m: &Operator) -> Self {
        let file = format!("{}_{}.mtx", self.name, role.key());
        write_mtx(m, &self.dir.join(&file)).unwrap();
        self.file.set_path(role, file);
        self
    }

    pub fn p(mut self, p: f64) -> Self {
        self.file.p = Some(p);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.file.seed = Some(seed);
        self
    }

    pub fn write(&self) -> PathBuf {
        let path = self.dir.join(format!("{}.json", self.name));
        fs::write(&path, serde_json::to_string_pretty(&self.file).unwrap()).unwrap();
        path
    }
}

pub fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_opapprox"))
}

pub fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

pub fn run_manifest(path: &Path) -> (i32, String) {
    let out = run(&[path.to_str().unwrap()]);
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
    )
}

pub fn parse(stdout: &str) -> ResultReport {
    ResultReport::from_json(stdout).expect("report parses")
}

pub fn witness(r: &ResultReport, dir: &Path) -> Operator {
    r.witness
        .as_ref()
        .expect("witness present")
        .load(dir)
        .unwrap()
}
