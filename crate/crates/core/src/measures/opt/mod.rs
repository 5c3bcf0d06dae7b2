//! Optimization-defined measures and the solvers behind them.

mod barrier;
pub mod diagonal;
pub mod geometric;
pub mod oracle;
pub mod roof;

pub use diagonal::{
    c_robustness, c_trace_norm, c_weight, solve_diagonal_program, solve_with_growth,
    DiagonalProgram, ProgramSolution, Sense,
};
pub use geometric::c_geometric;
pub use oracle::{oracle_grid, OracleResult};
pub use roof::c_convex_roof_upper;

use crate::error::{Error, Result};
use crate::qstate::DensityMatrix;

/// Raw solver output before it is wrapped into an evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Solved {
    pub value: f64,
    pub certificate: Option<Vec<f64>>,
    pub feasibility: Option<f64>,
    pub iterations: usize,
}

impl Solved {
    pub(crate) fn exact(value: f64, certificate: Option<Vec<f64>>) -> Self {
        Solved {
            value,
            certificate,
            feasibility: None,
            iterations: 0,
        }
    }
}

pub(crate) fn check_dim(rho: &DensityMatrix, cap: usize, what: &'static str) -> Result<()> {
    if rho.dim() > cap {
        Err(Error::DimensionTooLarge {
            dim: rho.dim(),
            cap,
            what,
        })
    } else {
        Ok(())
    }
}
