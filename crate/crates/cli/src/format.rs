//! The `chfis-v1` dataset text format.
//!
//! ```text
//! chfis-v1
//! # comments run to end of line
//! nx 2
//! ny 2
//! x 0 1 2
//! y 0 1 2
//! z 0.3 0.5 0.6  0.7 0.4 0.6  0.8 0.5 0.6   # row-major, row = x index
//! t 0.3 0.4 0.5  0.7 0.8 0.5  0.6 0.8 0.9
//! alpha 0.7
//! beta 0.4
//! gamma 0.5
//! ```
//!
//! Sections may come in any order and span any number of lines. The
//! parameter sections are optional; `alpha_matrix`, `beta_matrix` and
//! `gamma_matrix` take one value per cell instead of a scalar.

use std::fmt::Write as _;

use chfis_core::{GeneralizedDataset, ParamValue};

pub const MAGIC: &str = "chfis-v1";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("section `{section}`: {source}")]
    Invalid {
        section: &'static str,
        #[source]
        source: chfis_core::Error,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// Parameters found in a file. Absent sections are `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileParams {
    pub alpha: Option<ParamValue>,
    pub beta: Option<ParamValue>,
    pub gamma: Option<ParamValue>,
}

impl FileParams {
    pub fn is_empty(&self) -> bool {
        self.alpha.is_none() && self.beta.is_none() && self.gamma.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetFile {
    pub dataset: GeneralizedDataset,
    pub params: FileParams,
}

const SECTIONS: [&str; 12] = [
    "nx", "ny", "x", "y", "z", "t", "alpha", "beta", "gamma", "alpha_matrix", "beta_matrix", "gamma_matrix",
];

struct Section {
    name: &'static str,
    line: usize,
    values: Vec<(usize, String)>,
}

/// Parses a `chfis-v1` document.
pub fn parse_dataset(text: &str) -> Result<DatasetFile, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((_, MAGIC)) => {}
        Some((n, other)) => return Err(syntax(n, format!("expected `{MAGIC}`, found `{other}`"))),
        None => return Err(syntax(1, format!("empty document, expected `{MAGIC}`"))),
    }

    let mut sections: Vec<Section> = Vec::new();
    for (n, line) in lines {
        for token in line.split_whitespace() {
            if let Some(&name) = SECTIONS.iter().find(|&&s| s == token) {
                if let Some(prev) = sections.iter().find(|s| s.name == name) {
                    return Err(syntax(n, format!("section `{name}` repeated (first on line {})", prev.line)));
                }
                sections.push(Section { name, line: n, values: Vec::new() });
            } else if let Some(current) = sections.last_mut() {
                current.values.push((n, token.to_string()));
            } else {
                return Err(syntax(n, format!("expected a section keyword, found `{token}`")));
            }
        }
    }

    let last_line = text.lines().count().max(1);
    let find = |name: &str| sections.iter().find(|s| s.name == name);
    let require = |name: &'static str| find(name).ok_or_else(|| syntax(last_line, format!("missing section `{name}`")));

    let count = |name: &'static str| -> Result<usize, FormatError> {
        let s = require(name)?;
        match s.values.as_slice() {
            [(n, v)] => v
                .parse::<usize>()
                .ok()
                .filter(|&c| c >= 1)
                .ok_or_else(|| syntax(*n, format!("`{name}` needs a positive integer, found `{v}`"))),
            _ => Err(syntax(s.line, format!("`{name}` takes exactly one value"))),
        }
    };
    let reals = |s: &Section| -> Result<Vec<f64>, FormatError> {
        s.values
            .iter()
            .map(|(n, v)| v.parse::<f64>().map_err(|_| syntax(*n, format!("`{}`: `{v}` is not a number", s.name))))
            .collect()
    };
    let sized = |name: &'static str, expected: usize| -> Result<Vec<f64>, FormatError> {
        let values = reals(require(name)?)?;
        if values.len() != expected {
            return Err(FormatError::Invalid {
                section: name,
                source: chfis_core::Error::ShapeMismatch { what: name, expected, found: values.len() },
            });
        }
        Ok(values)
    };

    let nx = count("nx")?;
    let ny = count("ny")?;
    let x = sized("x", nx + 1)?;
    let y = sized("y", ny + 1)?;
    let z = sized("z", (nx + 1) * (ny + 1))?;
    let t = sized("t", (nx + 1) * (ny + 1))?;
    let dataset = chfis_core::validate_dataset(x, y, z, t).map_err(|source| FormatError::Invalid {
        section: section_of(&source),
        source,
    })?;

    let param = |scalar: &'static str, matrix: &'static str| -> Result<Option<ParamValue>, FormatError> {
        match (find(scalar), find(matrix)) {
            (Some(_), Some(m)) => Err(syntax(m.line, format!("both `{scalar}` and `{matrix}` given"))),
            (Some(s), None) => match reals(s)?.as_slice() {
                [v] => Ok(Some(ParamValue::Scalar(*v))),
                _ => Err(syntax(s.line, format!("`{scalar}` takes exactly one value"))),
            },
            (None, Some(_)) => Ok(Some(ParamValue::PerCell(sized(matrix, nx * ny)?))),
            (None, None) => Ok(None),
        }
    };
    let params = FileParams {
        alpha: param("alpha", "alpha_matrix")?,
        beta: param("beta", "beta_matrix")?,
        gamma: param("gamma", "gamma_matrix")?,
    };
    Ok(DatasetFile { dataset, params })
}

fn section_of(e: &chfis_core::Error) -> &'static str {
    use chfis_core::{Axis, Error};
    match e {
        Error::NonMonotoneAxis { axis: Axis::X, .. } | Error::TooFewNodes { axis: Axis::X, .. } => "x",
        Error::NonMonotoneAxis { axis: Axis::Y, .. } | Error::TooFewNodes { axis: Axis::Y, .. } => "y",
        Error::NonFiniteValue { what, .. } | Error::ShapeMismatch { what, .. } => what,
        _ => "dataset",
    }
}

/// Formats `v` like C's `%.17g`, which round-trips every finite double.
pub fn fmt_g17(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = mantissa.strip_prefix('-').map_or(("", mantissa), |m| ("-", m));
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    if !(-4..17).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        let frac = if tail.is_empty() { String::new() } else { format!(".{tail}") };
        let esign = if exp < 0 { '-' } else { '+' };
        return format!("{sign}{head}{frac}e{esign}{:02}", exp.abs());
    }
    if exp < 0 {
        let zeros = "0".repeat((-exp - 1) as usize);
        return format!("{sign}0.{zeros}{digits}");
    }
    let point = exp as usize + 1;
    if digits.len() <= point {
        format!("{sign}{digits}{}", "0".repeat(point - digits.len()))
    } else {
        format!("{sign}{}.{}", &digits[..point], &digits[point..])
    }
}

fn push_row(out: &mut String, key: &str, values: impl IntoIterator<Item = f64>) {
    out.push_str(key);
    for v in values {
        out.push(' ');
        out.push_str(&fmt_g17(v));
    }
    out.push('\n');
}

/// Serializes a dataset and any parameters in `chfis-v1`.
pub fn write_dataset(dataset: &GeneralizedDataset, params: &FileParams) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    let _ = writeln!(out, "nx {}", dataset.n_cells_x());
    let _ = writeln!(out, "ny {}", dataset.n_cells_y());
    push_row(&mut out, "x", dataset.x().iter().copied());
    push_row(&mut out, "y", dataset.y().iter().copied());
    let ncols = dataset.y().len();
    for (key, m) in [("z", dataset.z()), ("t", dataset.t())] {
        out.push_str(key);
        out.push('\n');
        for row in m.as_slice().chunks(ncols) {
            push_row(&mut out, " ", row.iter().copied());
        }
    }
    for (scalar, matrix, value) in [
        ("alpha", "alpha_matrix", &params.alpha),
        ("beta", "beta_matrix", &params.beta),
        ("gamma", "gamma_matrix", &params.gamma),
    ] {
        match value {
            Some(ParamValue::Scalar(v)) => push_row(&mut out, scalar, [*v]),
            Some(ParamValue::PerCell(vs)) => push_row(&mut out, matrix, vs.iter().copied()),
            None => {}
        }
    }
    out
}
