//! Human-readable rendering.

use selfext_core::rational::display_approx;
use selfext_core::{Mat, Rational};

/// Left-aligned columns separated by two spaces.
pub fn align<const N: usize>(rows: &[[String; N]]) -> String {
    let mut widths = [0usize; N];
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            line.push_str(cell);
            if i + 1 < N {
                line.extend(std::iter::repeat_n(' ', widths[i] - cell.chars().count() + 2));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn rational(x: &Rational) -> String {
    display_approx(x)
}

pub fn vector(v: &[Rational]) -> String {
    let cells: Vec<String> = v.iter().map(selfext_core::rational::format_rational).collect();
    format!("({})", cells.join(", "))
}

/// One line per row, entries right-aligned.
pub fn matrix(m: &Mat) -> String {
    let cells: Vec<Vec<String>> =
        m.to_rows().iter().map(|r| r.iter().map(selfext_core::rational::format_rational).collect()).collect();
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for row in cells {
        let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str("  [");
        out.push_str(&padded.join("  "));
        out.push_str("]\n");
    }
    out
}

/// Key/value lines; multi-line values start on the next line.
#[derive(Default)]
pub struct Summary {
    lines: Vec<(String, String)>,
}

impl Summary {
    pub fn new() -> Self {
        Summary::default()
    }

    pub fn row(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.lines.push((key.to_string(), value.into()));
        self
    }

    pub fn render(&self) -> String {
        let width = self.lines.iter().filter(|(_, v)| !v.contains('\n')).map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.lines {
            if v.contains('\n') {
                out.push_str(&format!("{k}:\n{v}"));
                if !v.ends_with('\n') {
                    out.push('\n');
                }
            } else {
                out.push_str(&format!("{k:<width$}  {v}\n"));
            }
        }
        out
    }
}
