//! Grid exporters: CSV tables and ASCII PGM heightmaps.

use chfis_core::{Matrix, SurfaceGrid};

use crate::format::{fmt_g17, FormatError};

pub const CSV_HEADER: &str = "x,y,f1,f2";

/// Anything laid out as values on a tensor grid.
pub trait GridSource {
    fn xs(&self) -> &[f64];
    fn ys(&self) -> &[f64];
    fn f1(&self) -> &Matrix;
    fn f2(&self) -> &Matrix;
}

impl GridSource for SurfaceGrid {
    fn xs(&self) -> &[f64] {
        &self.xs
    }
    fn ys(&self) -> &[f64] {
        &self.ys
    }
    fn f1(&self) -> &Matrix {
        &self.f1
    }
    fn f2(&self) -> &Matrix {
        &self.f2
    }
}

/// A grid read back from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct GridTable {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub f1: Matrix,
    pub f2: Matrix,
}

impl GridSource for GridTable {
    fn xs(&self) -> &[f64] {
        &self.xs
    }
    fn ys(&self) -> &[f64] {
        &self.ys
    }
    fn f1(&self) -> &Matrix {
        &self.f1
    }
    fn f2(&self) -> &Matrix {
        &self.f2
    }
}

/// Header plus one `x,y,f1,f2` row per grid point, sorted by x then y.
pub fn write_grid_csv(grid: &impl GridSource) -> String {
    let (xs, ys) = (grid.xs(), grid.ys());
    let mut out = String::with_capacity(64 * xs.len() * ys.len());
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            for (k, v) in [x, y, grid.f1()[(i, j)], grid.f2()[(i, j)]].into_iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&fmt_g17(v));
            }
            out.push('\n');
        }
    }
    out
}

/// Reads a table written by [`write_grid_csv`].
pub fn read_grid_csv(text: &str) -> Result<GridTable, FormatError> {
    let err = |line: usize, message: String| FormatError::Syntax { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, CSV_HEADER)) => {}
        Some((n, other)) => return Err(err(n, format!("expected header `{CSV_HEADER}`, found `{other}`"))),
        None => return Err(err(1, "empty grid file".into())),
    }
    let mut rows = Vec::new();
    for (n, line) in lines {
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>().map_err(|_| err(n, format!("`{f}` is not a number"))))
            .collect::<Result<_, _>>()?;
        let [x, y, f1, f2] = fields[..] else {
            return Err(err(n, format!("expected 4 fields, found {}", fields.len())));
        };
        rows.push((n, x, y, f1, f2));
    }
    if rows.is_empty() {
        return Err(err(2, "grid has no rows".into()));
    }
    let ny = rows.iter().take_while(|r| r.1 == rows[0].1).count();
    if rows.len() % ny != 0 {
        return Err(err(rows[rows.len() - 1].0, "row count is not a multiple of the y count".into()));
    }
    let nx = rows.len() / ny;
    let ys: Vec<f64> = rows[..ny].iter().map(|r| r.2).collect();
    let xs: Vec<f64> = rows.iter().step_by(ny).map(|r| r.1).collect();
    for (k, r) in rows.iter().enumerate() {
        if r.1 != xs[k / ny] || r.2 != ys[k % ny] {
            return Err(err(r.0, "rows are not a full grid sorted by x then y".into()));
        }
    }
    let monotone = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
    if !monotone(&xs) || !monotone(&ys) {
        return Err(err(rows[0].0, "grid coordinates are not strictly increasing".into()));
    }
    let f1 = Matrix::from_fn(nx, ny, |i, j| rows[i * ny + j].3);
    let f2 = Matrix::from_fn(nx, ny, |i, j| rows[i * ny + j].4);
    Ok(GridTable { xs, ys, f1, f2 })
}

const PGM_LINE: usize = 70;

/// Plain PGM of `f1`, scaled to 0..=255, with larger y at the top.
pub fn write_heightmap_pgm(grid: &impl GridSource) -> Vec<u8> {
    let (w, h) = (grid.xs().len(), grid.ys().len());
    let f1 = grid.f1();
    let (lo, hi) = f1.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let pixel = |v: f64| -> u8 {
        if hi > lo {
            ((v - lo) / (hi - lo) * 255.0).round().clamp(0.0, 255.0) as u8
        } else {
            0
        }
    };
    let mut out = format!("P2\n{w} {h}\n255\n");
    for k in 0..h {
        let j = h - 1 - k;
        let mut len = 0;
        for i in 0..w {
            let token = pixel(f1[(i, j)]).to_string();
            if len > 0 && len + 1 + token.len() > PGM_LINE {
                out.push('\n');
                len = 0;
            } else if len > 0 {
                out.push(' ');
                len += 1;
            }
            len += token.len();
            out.push_str(&token);
        }
        out.push('\n');
    }
    out.into_bytes()
}
