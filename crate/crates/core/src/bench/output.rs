//! CSV and SVG emission.

use std::fmt::Write as _;

/// `v` rounded to 12 significant digits, in positional notation.
pub fn format_sig12(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let digits = |decimals: usize| format!("{:.*}", decimals, v);
    let exp = v.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    let s = digits(decimals);
    // rounding may carry into a new leading digit
    let all: String = s.chars().filter(char::is_ascii_digit).collect();
    if decimals > 0 && all.trim_start_matches('0').len() > 12 {
        digits(decimals - 1)
    } else {
        s
    }
}

/// A table with an integer first column and optional numeric cells
/// (`None` is written as `n/a`).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<(usize, Vec<Option<f64>>)>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for (key, cells) in &self.rows {
            let _ = write!(out, "{key}");
            for c in cells {
                out.push(',');
                match c {
                    Some(v) => out.push_str(&format_sig12(*v)),
                    None => out.push_str("n/a"),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// `side x side` grayscale heatmap of `values` (row `k / side`, column
/// `k % side`, first row at the bottom). Values are clamped to `[0, 1]`;
/// darker squares are larger entries.
pub fn heatmap_svg(values: &[f64], side: usize, cell: usize) -> String {
    let size = side * cell;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" \
         viewBox=\"0 0 {size} {size}\">\n"
    );
    for (k, v) in values.iter().enumerate().take(side * side) {
        let level = (255.0 * (1.0 - v.clamp(0.0, 1.0))).round() as u8;
        let x = (k % side) * cell;
        let y = (side - 1 - k / side) * cell;
        let _ = writeln!(
            out,
            "<rect x=\"{x}\" y=\"{y}\" width=\"{cell}\" height=\"{cell}\" \
             fill=\"rgb({level},{level},{level})\"/>"
        );
    }
    out.push_str("</svg>\n");
    out
}
