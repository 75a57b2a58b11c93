//! Matrix Market exchange format: dense `array` and sparse `coordinate`
//! layouts with `real`, `integer` or `complex` fields and `general`,
//! `symmetric`, `skew-symmetric` or `hermitian` symmetry.
//!
//! Vectors are `n×1` matrices. Values are written with 17 significant
//! digits, which reads back to the identical `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use opapprox_core::Operator;

#[derive(Debug, thiserror::Error)]
pub enum MtxError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn bad(line: usize, msg: impl Into<String>) -> MtxError {
    MtxError::Parse {
        line,
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Array,
    Coordinate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

impl Symmetry {
    fn mirror(self, z: Complex64) -> Complex64 {
        match self {
            Symmetry::General | Symmetry::Symmetric => z,
            Symmetry::SkewSymmetric => -z,
            Symmetry::Hermitian => z.conj(),
        }
    }
}

struct Header {
    layout: Layout,
    field: Field,
    symmetry: Symmetry,
}

fn parse_header(line: &str) -> Result<Header, MtxError> {
    let words: Vec<String> = line
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(bad(
            1,
            "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'",
        ));
    }
    let layout = match words[2].as_str() {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        other => return Err(bad(1, format!("unsupported layout '{other}'"))),
    };
    let field = match words[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        other => return Err(bad(1, format!("unsupported field '{other}'"))),
    };
    let symmetry = match words[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(bad(1, format!("unsupported symmetry '{other}'"))),
    };
    if symmetry == Symmetry::Hermitian && field != Field::Complex {
        return Err(bad(1, "hermitian symmetry requires the complex field"));
    }
    Ok(Header {
        layout,
        field,
        symmetry,
    })
}

fn number<'a>(
    tokens: &mut impl Iterator<Item = &'a str>,
    line: usize,
    field: Field,
) -> Result<f64, MtxError> {
    let tok = tokens.next().ok_or_else(|| bad(line, "missing value"))?;
    let x = match field {
        Field::Integer => tok
            .parse::<i64>()
            .map(|i| i as f64)
            .map_err(|e| bad(line, format!("'{tok}': {e}")))?,
        _ => tok
            .parse::<f64>()
            .map_err(|e| bad(line, format!("'{tok}': {e}")))?,
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad(line, format!("non-finite value '{tok}'")))
    }
}

fn value<'a>(
    tokens: &mut impl Iterator<Item = &'a str>,
    line: usize,
    field: Field,
) -> Result<Complex64, MtxError> {
    let re = number(tokens, line, field)?;
    let im = if field == Field::Complex {
        number(tokens, line, field)?
    } else {
        0.0
    };
    Ok(Complex64::new(re, im))
}

fn index(tok: Option<&str>, line: usize, bound: usize) -> Result<usize, MtxError> {
    let tok = tok.ok_or_else(|| bad(line, "missing index"))?;
    let i: usize = tok
        .parse()
        .map_err(|e| bad(line, format!("index '{tok}': {e}")))?;
    if i == 0 || i > bound {
        return Err(bad(line, format!("index {i} outside 1..={bound}")));
    }
    Ok(i - 1)
}

/// Parse Matrix Market text.
pub fn parse_mtx(text: &str) -> Result<Operator, MtxError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or_else(|| bad(1, "empty file"))?;
    let header = parse_header(first)?;
    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });

    let (size_line, size) = data.next().ok_or_else(|| bad(2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|e| bad(size_line, format!("size '{t}': {e}")))
        })
        .collect::<Result<_, _>>()?;
    let (rows, cols) = match (header.layout, dims.as_slice()) {
        (Layout::Array, [r, c]) | (Layout::Coordinate, [r, c, _]) => (*r, *c),
        _ => return Err(bad(size_line, "malformed size line")),
    };
    if header.symmetry != Symmetry::General && rows != cols {
        return Err(bad(size_line, "symmetric storage requires a square matrix"));
    }
    let mut m = Operator::zeros(rows, cols);

    match header.layout {
        Layout::Array => {
            let mut slots = Vec::new();
            for j in 0..cols {
                let start = match header.symmetry {
                    Symmetry::General => 0,
                    Symmetry::Symmetric | Symmetry::Hermitian => j,
                    Symmetry::SkewSymmetric => j + 1,
                };
                slots.extend((start..rows).map(|i| (i, j)));
            }
            let mut tokens = data.flat_map(|(n, l)| l.split_whitespace().map(move |t| (n, t)));
            let last_line = size_line;
            for (i, j) in slots {
                let (n, re_tok) = tokens
                    .next()
                    .ok_or_else(|| bad(last_line, "fewer values than the declared size"))?;
                let mut one = std::iter::once(re_tok);
                let re = number(&mut one, n, header.field)?;
                let im = if header.field == Field::Complex {
                    let (n2, im_tok) = tokens
                        .next()
                        .ok_or_else(|| bad(n, "missing imaginary part"))?;
                    number(&mut std::iter::once(im_tok), n2, header.field)?
                } else {
                    0.0
                };
                let z = Complex64::new(re, im);
                if header.symmetry == Symmetry::Hermitian && i == j && im != 0.0 {
                    return Err(bad(n, "hermitian diagonal entries must be real"));
                }
                m[(i, j)] = z;
                if i != j && header.symmetry != Symmetry::General {
                    m[(j, i)] = header.symmetry.mirror(z);
                }
            }
            if let Some((n, t)) = tokens.next() {
                return Err(bad(n, format!("unexpected trailing value '{t}'")));
            }
        }
        Layout::Coordinate => {
            let nnz = dims[2];
            let mut count = 0;
            for (n, l) in data {
                count += 1;
                if count > nnz {
                    return Err(bad(n, format!("more than the declared {nnz} entries")));
                }
                let mut tokens = l.split_whitespace();
                let i = index(tokens.next(), n, rows)?;
                let j = index(tokens.next(), n, cols)?;
                let z = value(&mut tokens, n, header.field)?;
                if tokens.next().is_some() {
                    return Err(bad(n, "too many fields"));
                }
                match header.symmetry {
                    Symmetry::General => {}
                    _ if i < j => {
                        return Err(bad(n, "symmetric storage lists the lower triangle only"))
                    }
                    Symmetry::SkewSymmetric if i == j => {
                        return Err(bad(n, "skew-symmetric storage has no diagonal"))
                    }
                    _ => {}
                }
                m[(i, j)] += z;
                if i != j && header.symmetry != Symmetry::General {
                    m[(j, i)] += header.symmetry.mirror(z);
                }
            }
            if count != nnz {
                return Err(bad(
                    size_line,
                    format!("declared {nnz} entries, found {count}"),
                ));
            }
        }
    }
    Ok(m)
}

pub fn read_mtx(path: &Path) -> Result<Operator, MtxError> {
    let text = fs::read_to_string(path).map_err(|source| MtxError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_mtx(&text)
}

/// `{:.16e}`: 17 significant digits, enough to recover every `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Dense `array general` text; the field is `real` when every imaginary
/// part is zero.
pub fn format_mtx(m: &Operator) -> String {
    let complex = m.iter().any(|z| z.im != 0.0);
    let mut out = String::new();
    let field = if complex { "complex" } else { "real" };
    let _ = writeln!(out, "%%MatrixMarket matrix array {field} general");
    let _ = writeln!(out, "{} {}", m.nrows(), m.ncols());
    for z in m.iter() {
        if complex {
            let _ = writeln!(out, "{} {}", fmt_f64(z.re), fmt_f64(z.im));
        } else {
            let _ = writeln!(out, "{}", fmt_f64(z.re));
        }
    }
    out
}

pub fn write_mtx(m: &Operator, path: &Path) -> Result<(), MtxError> {
    fs::write(path, format_mtx(m)).map_err(|source| MtxError::Io {
        path: path.display().to_string(),
        source,
    })
}
