//! SVG pictures of a symbolic matrix.
//!
//! Every entry becomes a `g x g` subsquare. Cell `k` (row-major) holds the
//! term with `P`-index `k`; it is filled with the color of that term's
//! `A`-index, or white when the term is negated. Cells past `dim` are grey.

use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::Convention;
use crate::magic::{SymbolicMatrix, TermPattern};

pub const DEFAULT_PALETTE: [&str; 8] =
    ["#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6"];
pub const WHITE: &str = "#ffffff";
pub const GREY: &str = "#a9a9a9";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("rendering supports dims 4 and 8, got {0}")]
    UnsupportedDim(usize),
    #[error("spec is for dim {spec}, patterns are {patterns}x{patterns}")]
    DimMismatch { spec: usize, patterns: usize },
    #[error("palette needs {needed} distinct colors, got {got}")]
    Palette { needed: usize, got: usize },
    #[error("pattern at ({0}, {1}) is not a bijection onto the A-variables")]
    Pattern(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub dim: usize,
    /// Side of each subsquare in cells.
    pub grid: usize,
    pub palette: Vec<String>,
    pub cell_px: u32,
    /// Space between subsquares.
    pub gap_px: u32,
    pub grey: String,
    /// Recorded in the metadata comment only.
    pub convention: Option<Convention>,
}

impl RenderSpec {
    pub fn for_dim(dim: usize) -> Result<Self, RenderError> {
        let grid = match dim {
            4 => 2,
            8 => 3,
            _ => return Err(RenderError::UnsupportedDim(dim)),
        };
        Ok(Self {
            dim,
            grid,
            palette: DEFAULT_PALETTE[..dim].iter().map(|c| c.to_string()).collect(),
            cell_px: 12,
            gap_px: 6,
            grey: GREY.to_string(),
            convention: None,
        })
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = Some(convention);
        self
    }

    fn validate(&self) -> Result<(), RenderError> {
        if !matches!(self.dim, 4 | 8) || self.grid * self.grid < self.dim {
            return Err(RenderError::UnsupportedDim(self.dim));
        }
        let mut colors: Vec<&str> = self.palette.iter().map(String::as_str).collect();
        colors.sort_unstable();
        colors.dedup();
        let clash = colors.iter().any(|&c| c == WHITE || c == self.grey);
        if colors.len() != self.palette.len() || self.palette.len() < self.dim || clash {
            return Err(RenderError::Palette { needed: self.dim, got: colors.len() });
        }
        Ok(())
    }

    fn subsquare_px(&self) -> u32 {
        self.grid as u32 * self.cell_px
    }
}

/// What one cell of a subsquare shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellFill {
    Color(usize),
    White,
    Grey,
}

/// Row-major cell fills of the subsquare drawn for `pattern`.
pub fn cell_fills(pattern: &TermPattern, grid: usize) -> Vec<CellFill> {
    (0..grid * grid)
        .map(|k| match pattern.terms().get(k) {
            Some(&(_, s)) if s < 0 => CellFill::White,
            Some(&(a, _)) => CellFill::Color(a),
            None => CellFill::Grey,
        })
        .collect()
}

pub fn render_pattern(patterns: &SymbolicMatrix, spec: &RenderSpec) -> Result<String, RenderError> {
    spec.validate()?;
    let n = patterns.dim();
    if n != spec.dim {
        return Err(RenderError::DimMismatch { spec: spec.dim, patterns: n });
    }
    for (i, row) in patterns.rows().iter().enumerate() {
        for (j, t) in row.iter().enumerate() {
            if t.len() != n || !t.is_bijection() {
                return Err(RenderError::Pattern(i, j));
            }
        }
    }

    let step = spec.subsquare_px() + spec.gap_px;
    let side = n as u32 * step + spec.gap_px;
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#
    );
    let convention = spec.convention.map_or("unspecified", |c| c.tag());
    let _ = writeln!(
        svg,
        "<!-- dim={n} grid={g}x{g} convention={convention} layout=row-major p-index; color=a-index; white=negated; grey=unused trailing cells; palette={} -->",
        spec.palette.join(","),
        g = spec.grid,
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{side}" height="{side}" fill="{WHITE}"/>"#);
    for (i, row) in patterns.rows().iter().enumerate() {
        for (j, t) in row.iter().enumerate() {
            let (x0, y0) = (spec.gap_px + j as u32 * step, spec.gap_px + i as u32 * step);
            let _ = writeln!(svg, r#"<g class="subsquare" data-row="{i}" data-col="{j}" data-terms="{t}">"#);
            for (k, fill) in cell_fills(t, spec.grid).into_iter().enumerate() {
                let (x, y) = (x0 + (k % spec.grid) as u32 * spec.cell_px, y0 + (k / spec.grid) as u32 * spec.cell_px);
                let (kind, color) = match fill {
                    CellFill::Color(a) => ("color", spec.palette[a].as_str()),
                    CellFill::White => ("white", WHITE),
                    CellFill::Grey => ("grey", spec.grey.as_str()),
                };
                let _ = writeln!(
                    svg,
                    r#"  <rect class="cell {kind}" x="{x}" y="{y}" width="{w}" height="{w}" fill="{color}" stroke="black" stroke-width="0.5"/>"#,
                    w = spec.cell_px,
                );
            }
            svg.push_str("</g>\n");
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BasisTable;
    use crate::magic::build_symbolic;
    use std::collections::HashSet;

    fn render(dim: usize) -> (SymbolicMatrix, String) {
        let sym = build_symbolic(&BasisTable::new(dim, Convention::Classic).unwrap());
        let spec = RenderSpec::for_dim(dim).unwrap().with_convention(Convention::Classic);
        let svg = render_pattern(&sym, &spec).unwrap();
        (sym, svg)
    }

    #[test]
    fn quaternion_figure() {
        let (_, svg) = render(4);
        assert_eq!(svg.matches(r#"<g class="subsquare""#).count(), 16);
        assert_eq!(svg.matches(r#"class="cell "#).count(), 64);
        assert_eq!(svg.matches("cell grey").count(), 0);
        assert!(svg.matches("cell white").count() > 0);
    }

    #[test]
    fn octonion_figure() {
        let (sym, svg) = render(8);
        assert_eq!(svg.matches(r#"<g class="subsquare""#).count(), 64);
        assert_eq!(svg.matches(r#"class="cell "#).count(), 64 * 9);
        for block in svg.split(r#"<g class="subsquare""#).skip(1) {
            assert_eq!(block.matches("cell grey").count(), 1);
            assert_eq!(block.matches("cell color").count() + block.matches("cell white").count(), 8);
        }
        let fills: HashSet<Vec<CellFill>> = sym.rows().iter().flatten().map(|t| cell_fills(t, 3)).collect();
        assert_eq!(fills.len(), 64);
        assert_eq!(svg, render(8).1);
    }

    #[test]
    fn metadata_comment() {
        let (_, svg) = render(8);
        assert!(svg.contains("dim=8 grid=3x3 convention=classic layout=row-major"));
        assert!(svg.contains(&DEFAULT_PALETTE.join(",")));
    }

    #[test]
    fn spec_errors() {
        assert_eq!(RenderSpec::for_dim(16), Err(RenderError::UnsupportedDim(16)));
        let sym = build_symbolic(&BasisTable::new(4, Convention::Classic).unwrap());
        let spec = RenderSpec::for_dim(8).unwrap();
        assert_eq!(render_pattern(&sym, &spec), Err(RenderError::DimMismatch { spec: 8, patterns: 4 }));
        let mut dup = RenderSpec::for_dim(4).unwrap();
        dup.palette[1] = dup.palette[0].clone();
        assert!(matches!(render_pattern(&sym, &dup), Err(RenderError::Palette { .. })));
    }
}
