//! JSON forms of states and channels.
//!
//! Schema problems (bad JSON, missing fields, wrong shapes, non-finite
//! numbers) are reported as [`Error::Parse`]; a well-formed object that
//! violates a physical invariant gets the constructor's error instead.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianChannel, GaussianState};
use crate::linalg::{CMatrix, RMatrix, C64};
use crate::qstate::{ChannelKind, DensityMatrix, KrausChannel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrausJson {
    pub dim: usize,
    pub kind: ChannelKind,
    pub kraus: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianStateJson {
    pub modes: usize,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianChannelJson {
    pub modes: usize,
    pub b: Vec<f64>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<f64>>,
    #[serde(rename = "N")]
    pub n: Vec<Vec<f64>>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn check_finite<'a>(values: impl IntoIterator<Item = &'a f64>, what: &str) -> Result<()> {
    if values.into_iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Parse(format!("non-finite number in {what}")))
    }
}

fn check_shape(rows: &[Vec<f64>], n: usize, what: &str) -> Result<()> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("{what} must be {n}x{n}")));
    }
    check_finite(rows.iter().flatten(), what)
}

fn complex_matrix(re: &[Vec<f64>], im: &[Vec<f64>], d: usize, what: &str) -> Result<CMatrix> {
    check_shape(re, d, what)?;
    check_shape(im, d, what)?;
    Ok(CMatrix::from_fn(d, d, |r, c| C64::new(re[r][c], im[r][c])))
}

fn real_matrix(rows: &[Vec<f64>], n: usize, what: &str) -> Result<RMatrix> {
    check_shape(rows, n, what)?;
    Ok(RMatrix::from_fn(n, n, |r, c| rows[r][c]))
}

fn rows_of(m: &RMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
}

fn complex_rows(m: &CMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let re = (0..m.nrows()).map(|r| m.row(r).iter().map(|z| z.re).collect()).collect();
    let im = (0..m.nrows()).map(|r| m.row(r).iter().map(|z| z.im).collect()).collect();
    (re, im)
}

pub fn density_to_json(rho: &DensityMatrix) -> DensityJson {
    let (re, im) = rho.to_json_parts();
    DensityJson { dim: rho.dim(), re, im }
}

pub fn density_from_json(j: &DensityJson) -> Result<DensityMatrix> {
    if j.dim == 0 {
        return Err(Error::Parse("dim must be at least 1".into()));
    }
    DensityMatrix::new(complex_matrix(&j.re, &j.im, j.dim, "density matrix")?)
}

pub fn parse_density(text: &str) -> Result<DensityMatrix> {
    density_from_json(&parse(text)?)
}

pub fn kraus_to_json(ch: &KrausChannel) -> KrausJson {
    KrausJson {
        dim: ch.dim(),
        kind: ch.kind(),
        kraus: ch
            .kraus()
            .iter()
            .map(|k| {
                let (re, im) = complex_rows(k);
                MatrixJson { re, im }
            })
            .collect(),
    }
}

pub fn kraus_from_json(j: &KrausJson) -> Result<KrausChannel> {
    if j.dim == 0 || j.kraus.is_empty() {
        return Err(Error::Parse("a Kraus set needs dim >= 1 and at least one operator".into()));
    }
    let ops = j
        .kraus
        .iter()
        .map(|k| complex_matrix(&k.re, &k.im, j.dim, "Kraus operator"))
        .collect::<Result<Vec<_>>>()?;
    KrausChannel::new(ops, j.kind)
}

pub fn parse_kraus(text: &str) -> Result<KrausChannel> {
    kraus_from_json(&parse(text)?)
}

pub fn gaussian_state_to_json(s: &GaussianState) -> GaussianStateJson {
    let (mean, cov) = s.to_json_parts();
    GaussianStateJson {
        modes: s.modes(),
        mean,
        cov,
    }
}

pub fn gaussian_state_from_json(j: &GaussianStateJson) -> Result<GaussianState> {
    let dim = 2 * j.modes;
    if j.modes == 0 || j.mean.len() != dim {
        return Err(Error::Parse(format!(
            "mean must have 2*modes = {dim} entries, got {}",
            j.mean.len()
        )));
    }
    check_finite(&j.mean, "mean")?;
    let cov = real_matrix(&j.cov, dim, "cov")?;
    GaussianState::new(DVector::from_vec(j.mean.clone()), cov)
}

pub fn parse_gaussian_state(text: &str) -> Result<GaussianState> {
    gaussian_state_from_json(&parse(text)?)
}

pub fn gaussian_channel_to_json(ch: &GaussianChannel) -> GaussianChannelJson {
    GaussianChannelJson {
        modes: ch.modes(),
        b: ch.b().iter().copied().collect(),
        t: rows_of(ch.t()),
        n: rows_of(ch.n()),
    }
}

pub fn gaussian_channel_from_json(j: &GaussianChannelJson) -> Result<GaussianChannel> {
    let dim = 2 * j.modes;
    if j.modes == 0 || j.b.len() != dim {
        return Err(Error::Parse(format!(
            "b must have 2*modes = {dim} entries, got {}",
            j.b.len()
        )));
    }
    check_finite(&j.b, "b")?;
    let t = real_matrix(&j.t, dim, "T")?;
    let n = real_matrix(&j.n, dim, "N")?;
    GaussianChannel::new(DVector::from_vec(j.b.clone()), t, n)
}

pub fn parse_gaussian_channel(text: &str) -> Result<GaussianChannel> {
    gaussian_channel_from_json(&parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{coherent_state, squeezed_state};
    use crate::qstate::PureState;
    use nalgebra::Complex;

    #[test]
    fn density_roundtrip() {
        let rho = PureState::uniform(3).unwrap().to_density();
        let text = serde_json::to_string(&density_to_json(&rho)).unwrap();
        assert_eq!(parse_density(&text).unwrap(), rho);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(parse_density("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_density(r#"{"dim":2,"re":[[1,0]],"im":[[0,0]]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_density(r#"{"dim":1,"re":[[NaN]],"im":[[0]]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_density(r#"{"dim":1,"re":[[1e999]],"im":[[0]]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_density(r#"{"dim":2,"re":[[1,0],[0,1]],"im":[[0,0],[0,0]]}"#),
            Err(Error::InvalidTrace(_))
        ));
    }

    #[test]
    fn kraus_roundtrip() {
        let ch = KrausChannel::full_dephasing(2).unwrap();
        let text = serde_json::to_string(&kraus_to_json(&ch)).unwrap();
        assert!(text.contains("\"kind\":\"channel\""));
        assert_eq!(parse_kraus(&text).unwrap(), ch);
    }

    #[test]
    fn gaussian_roundtrips() {
        let s = squeezed_state(Complex::new(0.2, 0.3));
        let text = serde_json::to_string(&gaussian_state_to_json(&s)).unwrap();
        let back = parse_gaussian_state(&text).unwrap();
        assert!((back.cov() - s.cov()).amax() < 1e-15);
        assert!(matches!(
            parse_gaussian_state(r#"{"modes":1,"mean":[0,0,0],"cov":[[1,0],[0,1]]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_gaussian_state(r#"{"modes":1,"mean":[0,0],"cov":[[0.5,0],[0,0.5]]}"#),
            Err(Error::Uncertainty(_))
        ));
        let ch = GaussianChannel::identity(1);
        let text = serde_json::to_string(&gaussian_channel_to_json(&ch)).unwrap();
        assert!(text.contains("\"T\""));
        assert_eq!(parse_gaussian_channel(&text).unwrap(), ch);
        let _ = coherent_state(Complex::new(1.0, 0.0));
    }
}
