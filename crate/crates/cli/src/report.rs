//! Report rendering: a flat machine-readable key=value format and
//! aligned human-readable matrix printing.
//!
//! Machine reports are line-oriented. Keys form a fixed, documented
//! order for a given command and problem structure; matrices flatten
//! row-major under `name.row.col` keys; every float renders in
//! scientific notation with 17 significant digits.

use mare_core::{ComplexScalar, DenseMatrix};

/// Ordered machine-format report under construction.
pub struct MachineReport {
    lines: Vec<String>,
}

impl MachineReport {
    pub fn new(command: &str) -> Self {
        let mut report = Self { lines: Vec::new() };
        report.push_text("schema", "mare.report.v1");
        report.push_text("command", command);
        report
    }

    pub fn push_text(&mut self, key: &str, value: &str) {
        debug_assert!(!value.contains('\n'), "machine values are single-line");
        self.lines.push(format!("{key}={value}"));
    }

    pub fn push_bool(&mut self, key: &str, value: bool) {
        self.push_text(key, if value { "true" } else { "false" });
    }

    pub fn push_int(&mut self, key: &str, value: usize) {
        self.lines.push(format!("{key}={value}"));
    }

    pub fn push_float(&mut self, key: &str, value: f64) {
        self.lines.push(format!("{key}={value:.16e}"));
    }

    pub fn push_matrix(&mut self, key: &str, m: &DenseMatrix) {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                self.push_float(&format!("{key}.{i}.{j}"), m[(i, j)]);
            }
        }
    }

    pub fn push_vector(&mut self, key: &str, v: &[f64]) {
        for (i, x) in v.iter().enumerate() {
            self.push_float(&format!("{key}.{i}"), *x);
        }
    }

    pub fn push_complex_list(&mut self, key: &str, values: &[ComplexScalar]) {
        for (i, z) in values.iter().enumerate() {
            self.push_float(&format!("{key}.{i}.re"), z.re);
            self.push_float(&format!("{key}.{i}.im"), z.im);
        }
    }

    pub fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

/// Formats a matrix with aligned columns for terminal output.
pub fn format_matrix(m: &DenseMatrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return format!("  ({} x {} empty)\n", m.rows(), m.cols());
    }
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| format!("{:.10}", m[(i, j)])).collect())
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(|c| c.len())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for row in &cells {
        out.push_str("  ");
        for (j, cell) in row.iter().enumerate() {
            if j > 0 {
                out.push_str("  ");
            }
            out.push_str(&format!("{cell:>width$}"));
        }
        out.push('\n');
    }
    out
}

/// Formats an eigenvalue list, one per line.
pub fn format_eigenvalues(values: &[ComplexScalar]) -> String {
    let mut out = String::new();
    for z in values {
        if z.im == 0.0 {
            out.push_str(&format!("  {:.10}\n", z.re));
        } else {
            out.push_str(&format!("  {:.10} {:+.10}i\n", z.re, z.im));
        }
    }
    out
}
