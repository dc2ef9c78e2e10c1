//! ASCII and SVG pictures of the cohomology loci on a square window.
//!
//! Immaculate points are drawn in one neutral style; every other point is
//! labelled by its nonvanishing degree (or `+` when several are nonzero).
//! `O` marks the structure sheaf and `K` the canonical bundle.

use std::fmt::Write;

use exseq_core::cohomology::h_dims;
use exseq_core::{LineBundle, VarietySpec};
use serde::Serialize;

/// Cohomology of one lattice point.
#[derive(Serialize)]
pub struct LocusPoint {
    pub bundle: LineBundle,
    pub h: Vec<u64>,
}

pub fn points(spec: &VarietySpec, w: i64) -> Vec<LocusPoint> {
    (-w..=w)
        .flat_map(|j| (-w..=w).map(move |i| LineBundle::new(i, j)))
        .map(|l| LocusPoint { bundle: l, h: h_dims(spec, l).dims().to_vec() })
        .collect()
}

fn glyph(spec: &VarietySpec, l: LineBundle) -> char {
    if l == LineBundle::ZERO {
        return 'O';
    }
    if l == spec.canonical() {
        return 'K';
    }
    let degrees: Vec<usize> = h_dims(spec, l).nonzero_degrees().collect();
    match degrees.as_slice() {
        [] => '.',
        [k] => char::from_digit(*k as u32, 36).unwrap_or('?'),
        _ => '+',
    }
}

pub fn ascii(spec: &VarietySpec, w: i64) -> String {
    let mut out = format!("{spec}: '.' immaculate, digit k = only H^k nonzero, '+' several, O = O_X, K = K_X\n");
    for j in (-w..=w).rev() {
        let row: String = (-w..=w).map(|i| glyph(spec, LineBundle::new(i, j))).flat_map(|c| [c, ' ']).collect();
        let _ = writeln!(out, "{j:>4} | {}", row.trim_end());
    }
    out
}

const PALETTE: [&str; 8] = ["#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3", "#8c8c8c"];
const CELL: i64 = 14;

pub fn svg(spec: &VarietySpec, w: i64) -> String {
    let side = (2 * w + 1) * CELL;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"monospace\" font-size=\"9\">\n",
        side + 90,
        side
    );
    for j in -w..=w {
        for i in -w..=w {
            let l = LineBundle::new(i, j);
            let (x, y) = ((i + w) * CELL + CELL / 2, (w - j) * CELL + CELL / 2);
            match glyph(spec, l) {
                '.' => {
                    let _ = writeln!(out, "<circle cx=\"{x}\" cy=\"{y}\" r=\"2\" fill=\"none\" stroke=\"#999\"/>");
                }
                c @ ('O' | 'K') => {
                    let _ = writeln!(out, "<text x=\"{}\" y=\"{}\" font-weight=\"bold\">{c}</text>", x - 3, y + 3);
                }
                c => {
                    let colour = c.to_digit(36).map_or("#000", |k| PALETTE[k as usize % PALETTE.len()]);
                    let _ = writeln!(out, "<circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"{colour}\"/>");
                }
            }
        }
    }
    for k in 0..=spec.dim() as usize {
        let y = 12 + 14 * k as i64;
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{}\"/><text x=\"{}\" y=\"{}\">H^{k}</text>",
            side + 10,
            y,
            PALETTE[k % PALETTE.len()],
            side + 20,
            y + 3
        );
    }
    out.push_str("</svg>\n");
    out
}
