//! Coherence measures on density matrices.

pub mod closed;
pub mod opt;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::xlog2x_neg;
use crate::qstate::DensityMatrix;

pub use closed::{bloch_gap_l1, c_convex_roof_pure, c_l1, c_rel_ent, c_tsallis};

/// Concave, permutation-symmetric functions for the convex-roof family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoofFn {
    /// Shannon entropy in bits.
    Shannon,
    /// `1 − max_j p_j`.
    OneMinusMax,
}

impl RoofFn {
    pub fn eval(&self, p: &[f64]) -> f64 {
        match self {
            RoofFn::Shannon => p.iter().map(|&x| xlog2x_neg(x.clamp(0.0, 1.0))).sum(),
            RoofFn::OneMinusMax => {
                let m = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (1.0 - m).max(0.0)
            }
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            RoofFn::Shannon => "shannon",
            RoofFn::OneMinusMax => "one_minus_max",
        }
    }
}

impl FromStr for RoofFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shannon" => Ok(RoofFn::Shannon),
            "one_minus_max" | "oneminusmax" => Ok(RoofFn::OneMinusMax),
            other => Err(Error::Parse(format!("unknown roof function `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureId {
    L1,
    RelEnt,
    Tsallis(f64),
    Robustness,
    Geometric,
    TraceNorm,
    Weight,
    /// Closed form on pure states; upper bound on mixed states.
    ConvexRoof(RoofFn),
}

impl MeasureId {
    /// Whether the value is computed in closed form on every state.
    pub fn is_closed_form(&self) -> bool {
        matches!(self, MeasureId::L1 | MeasureId::RelEnt | MeasureId::Tsallis(_))
    }

    /// Tolerance used for identities and inequalities involving this measure.
    pub fn tolerance(&self) -> f64 {
        if self.is_closed_form() {
            1e-9
        } else {
            1e-4
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let MeasureId::Tsallis(a) = self {
            closed::check_alpha(*a)?;
        }
        Ok(())
    }

    /// Every shipped measure used by the verification suites.
    pub fn catalog() -> Vec<MeasureId> {
        vec![
            MeasureId::L1,
            MeasureId::RelEnt,
            MeasureId::Tsallis(0.5),
            MeasureId::Tsallis(2.0),
            MeasureId::Robustness,
            MeasureId::Geometric,
            MeasureId::TraceNorm,
            MeasureId::Weight,
        ]
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureId::L1 => write!(f, "l1"),
            MeasureId::RelEnt => write!(f, "relent"),
            MeasureId::Tsallis(a) => write!(f, "tsallis:{a}"),
            MeasureId::Robustness => write!(f, "robustness"),
            MeasureId::Geometric => write!(f, "geometric"),
            MeasureId::TraceNorm => write!(f, "tracenorm"),
            MeasureId::Weight => write!(f, "weight"),
            MeasureId::ConvexRoof(r) => write!(f, "roofpure:{}", r.id()),
        }
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let id = match s {
            "l1" => MeasureId::L1,
            "relent" => MeasureId::RelEnt,
            "robustness" => MeasureId::Robustness,
            "geometric" => MeasureId::Geometric,
            "tracenorm" => MeasureId::TraceNorm,
            "weight" => MeasureId::Weight,
            _ => {
                if let Some(a) = s.strip_prefix("tsallis:") {
                    let alpha: f64 = a
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad Tsallis parameter `{a}`")))?;
                    MeasureId::Tsallis(alpha)
                } else if let Some(r) = s.strip_prefix("roofpure:") {
                    MeasureId::ConvexRoof(r.parse()?)
                } else {
                    return Err(Error::Parse(format!("unknown measure `{s}`")));
                }
            }
        };
        id.validate()?;
        Ok(id)
    }
}

/// Solver settings shared by the optimization-defined measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iters: usize,
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: 500,
            tol: 1e-9,
            restarts: 8,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("restarts must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// A measure value with solver metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub measure: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feasibility: Option<f64>,
    pub iterations: usize,
    pub flagged_upper_bound: bool,
}

pub fn evaluate(id: MeasureId, rho: &DensityMatrix, cfg: &SolverConfig) -> Result<Evaluation> {
    id.validate()?;
    let closed = |value: f64| Evaluation {
        measure: id.to_string(),
        value,
        certificate: None,
        feasibility: None,
        iterations: 0,
        flagged_upper_bound: false,
    };
    let solved = match id {
        MeasureId::L1 => return Ok(closed(c_l1(rho))),
        MeasureId::RelEnt => return Ok(closed(c_rel_ent(rho))),
        MeasureId::Tsallis(a) => return Ok(closed(c_tsallis(rho, a)?)),
        MeasureId::Robustness => opt::c_robustness(rho, cfg)?,
        MeasureId::Geometric => opt::c_geometric(rho, cfg)?,
        MeasureId::TraceNorm => opt::c_trace_norm(rho, cfg)?,
        MeasureId::Weight => opt::c_weight(rho, cfg)?,
        MeasureId::ConvexRoof(f) => {
            let pure = closed::pure_probabilities(rho).is_some() || rho.is_diagonal(0.0);
            let s = opt::c_convex_roof_upper(rho, f, cfg)?;
            return Ok(Evaluation {
                measure: id.to_string(),
                value: s.value,
                certificate: None,
                feasibility: None,
                iterations: s.iterations,
                flagged_upper_bound: !pure,
            });
        }
    };
    Ok(Evaluation {
        measure: id.to_string(),
        value: solved.value,
        certificate: solved.certificate,
        feasibility: solved.feasibility,
        iterations: solved.iterations,
        flagged_upper_bound: false,
    })
}

/// `C(ρ)`.
pub fn value(id: MeasureId, rho: &DensityMatrix, cfg: &SolverConfig) -> Result<f64> {
    evaluate(id, rho, cfg).map(|e| e.value)
}

/// `C′(ρ) = ½ [C(ρ) + C(ρ*)]`.
pub fn symmetrized(id: MeasureId, rho: &DensityMatrix, cfg: &SolverConfig) -> Result<f64> {
    let a = value(id, rho, cfg)?;
    let b = value(id, &rho.conjugate(), cfg)?;
    Ok(0.5 * (a + b))
}

/// `C(ρ) − C(Re ρ)`.
pub fn real_gap(id: MeasureId, rho: &DensityMatrix, cfg: &SolverConfig) -> Result<f64> {
    Ok(value(id, rho, cfg)? - value(id, &rho.real_part(), cfg)?)
}

/// A measure functional, optionally symmetrized under conjugation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Functional {
    pub id: MeasureId,
    pub symmetrized: bool,
}

impl Functional {
    pub fn plain(id: MeasureId) -> Self {
        Functional {
            id,
            symmetrized: false,
        }
    }

    pub fn symmetrize(id: MeasureId) -> Self {
        Functional {
            id,
            symmetrized: true,
        }
    }

    pub fn eval(&self, rho: &DensityMatrix, cfg: &SolverConfig) -> Result<f64> {
        if self.symmetrized {
            symmetrized(self.id, rho, cfg)
        } else {
            value(self.id, rho, cfg)
        }
    }

    pub fn name(&self) -> String {
        if self.symmetrized {
            format!("sym({})", self.id)
        } else {
            self.id.to_string()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::PureState;

    #[test]
    fn measure_strings_roundtrip() {
        for s in [
            "l1",
            "relent",
            "tsallis:0.5",
            "tsallis:2",
            "robustness",
            "geometric",
            "tracenorm",
            "weight",
            "roofpure:shannon",
            "roofpure:one_minus_max",
        ] {
            let id: MeasureId = s.parse().unwrap();
            assert_eq!(id.to_string().parse::<MeasureId>().unwrap(), id);
        }
        assert!("tsallis:1".parse::<MeasureId>().is_err());
        assert!("tsallis:x".parse::<MeasureId>().is_err());
        assert!("foo".parse::<MeasureId>().is_err());
        assert!("roofpure:bar".parse::<MeasureId>().is_err());
    }

    #[test]
    fn roof_functions_are_normalized() {
        for f in [RoofFn::Shannon, RoofFn::OneMinusMax] {
            assert_eq!(f.eval(&[1.0, 0.0, 0.0]), 0.0);
        }
        assert_eq!(RoofFn::OneMinusMax.eval(&[0.5, 0.5]), 0.5);
    }

    #[test]
    fn convex_roof_flags_mixed_inputs() {
        let cfg = SolverConfig::default();
        let id = MeasureId::ConvexRoof(RoofFn::Shannon);
        let pure = PureState::uniform(2).unwrap().to_density();
        assert!(!evaluate(id, &pure, &cfg).unwrap().flagged_upper_bound);
        let mixed = DensityMatrix::bloch(0.3, 0.2, 0.0).unwrap();
        assert!(evaluate(id, &mixed, &cfg).unwrap().flagged_upper_bound);
    }

    #[test]
    fn config_validation() {
        let mut cfg = SolverConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.restarts = 0;
        assert!(cfg.validate().is_err());
        cfg = SolverConfig {
            tol: 0.0,
            ..SolverConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
