//! Grid data for the three gap surfaces, as CSV.
//!
//! Cells are evaluated independently (in parallel when available) and
//! emitted row-major: the first axis is the outer loop. Numbers are printed
//! with 12 significant digits and no locale dependence, so output is
//! byte-stable for fixed arguments.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::gaussian::{
    coherent_state, gap_coherent_closed_form, gap_squeezed_paper_formula, gr_real_gap, squeezed_state,
};
use crate::measures::{bloch_gap_l1, c_l1};
use crate::par::{self, Execution};
use crate::qstate::DensityMatrix;

/// Pipeline and closed form of the qubit l1 gap must agree this closely.
pub const FIG1_CROSS_CHECK: f64 = 1e-12;
/// Pipeline and closed form of the coherent-state gap must agree this closely.
pub const FIG2_CROSS_CHECK: f64 = 1e-9;
pub const DEFAULT_STEPS: usize = 101;

/// One axis of a figure grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::InvalidArgument(format!("steps must be at least 2, got {steps}")));
        }
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::InvalidArgument(format!("axis range [{min}, {max}] is empty")));
        }
        Ok(Axis { min, max, steps })
    }

    /// Point `i`, computed so that symmetric ranges hit 0 exactly.
    pub fn point(&self, i: usize) -> f64 {
        let n = (self.steps - 1) as f64;
        let i = i as f64;
        ((n - i) * self.min + i * self.max) / n
    }
}

/// A rectangular grid with one or more value columns per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureGrid {
    pub header: Vec<&'static str>,
    pub axis1: Axis,
    pub axis2: Axis,
    /// Row-major cells; `None` marks a cell outside the domain.
    pub values: Vec<Vec<Option<f64>>>,
}

impl FigureGrid {
    fn build(
        header: Vec<&'static str>,
        axis1: Axis,
        axis2: Axis,
        exec: Execution,
        cell: impl Fn(f64, f64) -> Result<Vec<Option<f64>>> + Sync + Send,
    ) -> Result<Self> {
        let total = axis1.steps * axis2.steps;
        let values = par::map_indexed(exec, total, |k| {
            cell(axis1.point(k / axis2.steps), axis2.point(k % axis2.steps))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        Ok(FigureGrid {
            header,
            axis1,
            axis2,
            values,
        })
    }

    /// Coordinates of cell `k`.
    pub fn coords(&self, k: usize) -> (f64, f64) {
        (self.axis1.point(k / self.axis2.steps), self.axis2.point(k % self.axis2.steps))
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for (k, row) in self.values.iter().enumerate() {
            let (a, b) = self.coords(k);
            out.push_str(&format_number(a));
            out.push(',');
            out.push_str(&format_number(b));
            for v in row {
                out.push(',');
                if let Some(v) = v {
                    out.push_str(&format_number(*v));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// `v` with 12 significant digits, trailing zeros dropped, `-0` printed as `0`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `C_l1(ρ) − C_l1(Re ρ)` for the Bloch states `(x, y, 0)` on `[−1,1]²`;
/// cells outside the unit disk are left empty.
pub fn fig1(steps: usize, exec: Execution) -> Result<FigureGrid> {
    let axis = Axis::new(-1.0, 1.0, steps)?;
    FigureGrid::build(vec!["x", "y", "gap"], axis, axis, exec, |x, y| {
        if x * x + y * y > 1.0 {
            return Ok(vec![None]);
        }
        let rho = DensityMatrix::bloch(x, y, 0.0)?;
        let gap = c_l1(&rho) - c_l1(&rho.real_part());
        let closed = bloch_gap_l1(x, y)?;
        if (gap - closed).abs() > FIG1_CROSS_CHECK {
            return Err(Error::InvalidArgument(format!(
                "l1 gap at ({x}, {y}) disagrees with the closed form: {gap} vs {closed}"
            )));
        }
        Ok(vec![Some(gap)])
    })
}

/// Coherent-state gap over `α ∈ range²`.
pub fn fig2(steps: usize, range: (f64, f64), exec: Execution) -> Result<FigureGrid> {
    let axis = Axis::new(range.0, range.1, steps)?;
    let header = vec!["re_alpha", "im_alpha", "gap_pipeline", "gap_closed_form"];
    FigureGrid::build(header, axis, axis, exec, |re, im| {
        let alpha = Complex::new(re, im);
        let pipeline = gr_real_gap(&coherent_state(alpha))?.gap;
        let closed = gap_coherent_closed_form(alpha);
        if (pipeline - closed).abs() > FIG2_CROSS_CHECK {
            return Err(Error::InvalidArgument(format!(
                "coherent gap at α = {alpha} disagrees with the closed form: {pipeline} vs {closed}"
            )));
        }
        Ok(vec![Some(pipeline), Some(closed)])
    })
}

/// Squeezed-vacuum gap over `ζ ∈ range²`, next to the literal printed
/// formula and their difference (`printed − pipeline`).
pub fn fig3(steps: usize, range: (f64, f64), exec: Execution) -> Result<FigureGrid> {
    let axis = Axis::new(range.0, range.1, steps)?;
    let header = vec!["re_zeta", "im_zeta", "gap_pipeline", "gap_paper_formula", "discrepancy"];
    FigureGrid::build(header, axis, axis, exec, |re, im| {
        let zeta = Complex::new(re, im);
        let pipeline = gr_real_gap(&squeezed_state(zeta))?.gap;
        let printed = gap_squeezed_paper_formula(zeta);
        Ok(vec![Some(pipeline), Some(printed), Some(printed - pipeline)])
    })
}
