//! Canonical JSON forms for the core types, plus the matrix and vector file
//! formats consumed by the command line.
//!
//! A quadratic function is stored in plain ambient coordinates: fields `dim`,
//! constraints `C` and `d`, then `Q`, `b`, `c` with the value `½xᵀQx + bᵀx + c`
//! on the feasible set `{Cx = d}`. The everywhere-infinite function is stored
//! as `{dim, infeasible: true}`. Bifunctions add `src_dim`, `dst_dim` and
//! `polarity`; Gauss maps store `A`, `mu`, `Sigma` row-major. All floats are
//! rounded to 12 significant digits so that repeated serialization of the
//! same object is reproducible text.

use serde::{Deserialize, Serialize};

use crate::bifunction::{Polarity, QuadBifunction};
use crate::error::{Error, Result};
use crate::gauss::{ExtGaussState, GaussMap};
use crate::numeric::{Matrix, Vector};
use crate::pcqf::Pcqf;
use crate::DEFAULT_TOL;

pub const SIGNIFICANT_DIGITS: i32 = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant decimal digits and collapses
/// negative zero, so equal values print as equal text. Routed through decimal
/// formatting: scaling by powers of ten would misround whenever the scale
/// factor itself is inexact.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    let text = format!("{:.*e}", (SIGNIFICANT_DIGITS - 1) as usize, x);
    let v: f64 = text.parse().expect("formatted float reparses");
    if v == 0.0 { 0.0 } else { v }
}

fn round_all(values: &[f64]) -> Vec<f64> {
    values.iter().map(|&v| round_sig(v)).collect()
}

fn check_finite(name: &str, values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::ImproperInput(format!("{name} contains a non-finite entry")));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixRepr {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl MatrixRepr {
    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixRepr { rows: m.rows(), cols: m.cols(), data: round_all(m.data()) }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: self.data.len(),
            });
        }
        check_finite("matrix data", &self.data)?;
        Ok(Matrix::new(self.rows, self.cols, self.data.clone()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PcqfRepr {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub infeasible: bool,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<MatrixRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<f64>>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<MatrixRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

pub fn pcqf_to_repr(f: &Pcqf) -> PcqfRepr {
    let dim = f.ambient_dim();
    if f.is_infeasible() {
        return PcqfRepr {
            dim,
            infeasible: true,
            constraints: None,
            d: None,
            q: None,
            b: None,
            c: None,
        };
    }
    // recenter the offset form ½(x-p)ᵀS(x-p) + lᵀ(x-p) + c0 at the origin
    let (s, l, c0, p) = f.ambient_form();
    let sp = &s * &p;
    let b = &l - &sp;
    let c = 0.5 * p.dot(&sp) - l.dot(&p) + c0;
    let (cm, d) = f.domain().constraint_rows(DEFAULT_TOL);
    PcqfRepr {
        dim,
        infeasible: false,
        constraints: Some(MatrixRepr::from_matrix(&cm)),
        d: Some(round_all(d.as_slice())),
        q: Some(MatrixRepr::from_matrix(&s)),
        b: Some(round_all(b.as_slice())),
        c: Some(round_sig(c)),
    }
}

pub fn pcqf_from_repr(r: &PcqfRepr) -> Result<Pcqf> {
    if r.infeasible {
        return Ok(Pcqf::infeasible(r.dim));
    }
    let missing = |name: &str| Error::ImproperInput(format!("missing field {name}"));
    let cm = r.constraints.as_ref().ok_or_else(|| missing("C"))?.to_matrix()?;
    let d = r.d.as_ref().ok_or_else(|| missing("d"))?;
    let q = r.q.as_ref().ok_or_else(|| missing("Q"))?.to_matrix()?;
    let b = r.b.as_ref().ok_or_else(|| missing("b"))?;
    let c = r.c.ok_or_else(|| missing("c"))?;
    if cm.cols() != r.dim {
        return Err(Error::DimensionMismatch { expected: r.dim, got: cm.cols() });
    }
    if d.len() != cm.rows() {
        return Err(Error::DimensionMismatch { expected: cm.rows(), got: d.len() });
    }
    if q.rows() != r.dim || q.cols() != r.dim {
        return Err(Error::DimensionMismatch { expected: r.dim, got: q.rows() });
    }
    if b.len() != r.dim {
        return Err(Error::DimensionMismatch { expected: r.dim, got: b.len() });
    }
    check_finite("d", d)?;
    check_finite("b", b)?;
    if !c.is_finite() {
        return Err(Error::ImproperInput("c is not finite".into()));
    }
    Pcqf::from_ambient(&q, &Vector::new(b.clone()), c, &cm, &Vector::new(d.clone()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BifunctionRepr {
    pub src_dim: usize,
    pub dst_dim: usize,
    pub polarity: String,
    #[serde(flatten)]
    pub graph: PcqfRepr,
}

pub fn bifunction_to_repr(f: &QuadBifunction) -> BifunctionRepr {
    BifunctionRepr {
        src_dim: f.src_dim(),
        dst_dim: f.dst_dim(),
        polarity: match f.polarity() {
            Polarity::Convex => "convex".into(),
            Polarity::Concave => "concave".into(),
        },
        graph: pcqf_to_repr(f.graph()),
    }
}

pub fn bifunction_from_repr(r: &BifunctionRepr) -> Result<QuadBifunction> {
    let polarity = match r.polarity.as_str() {
        "convex" => Polarity::Convex,
        "concave" => Polarity::Concave,
        other => {
            return Err(Error::ImproperInput(format!(
                "polarity must be convex or concave, got {other:?}"
            )))
        }
    };
    if r.graph.dim != r.src_dim + r.dst_dim {
        return Err(Error::DimensionMismatch {
            expected: r.src_dim + r.dst_dim,
            got: r.graph.dim,
        });
    }
    QuadBifunction::from_graph(r.src_dim, r.dst_dim, pcqf_from_repr(&r.graph)?, polarity)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussMapRepr {
    #[serde(rename = "A")]
    pub a: MatrixRepr,
    pub mu: Vec<f64>,
    #[serde(rename = "Sigma")]
    pub sigma: MatrixRepr,
}

pub fn gauss_to_repr(f: &GaussMap) -> GaussMapRepr {
    GaussMapRepr {
        a: MatrixRepr::from_matrix(f.a()),
        mu: round_all(f.mu().as_slice()),
        sigma: MatrixRepr::from_matrix(f.sigma()),
    }
}

pub fn gauss_from_repr(r: &GaussMapRepr) -> Result<GaussMap> {
    check_finite("mu", &r.mu)?;
    GaussMap::new(r.a.to_matrix()?, Vector::new(r.mu.clone()), r.sigma.to_matrix()?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtGaussStateRepr {
    pub mu: Vec<f64>,
    #[serde(rename = "Sigma")]
    pub sigma: MatrixRepr,
    pub fibre: MatrixRepr,
}

pub fn ext_state_to_repr(s: &ExtGaussState) -> ExtGaussStateRepr {
    ExtGaussStateRepr {
        mu: round_all(s.mu().as_slice()),
        sigma: MatrixRepr::from_matrix(s.sigma()),
        fibre: MatrixRepr::from_matrix(s.fibre()),
    }
}

pub fn ext_state_from_repr(r: &ExtGaussStateRepr) -> Result<ExtGaussState> {
    check_finite("mu", &r.mu)?;
    ExtGaussState::new(Vector::new(r.mu.clone()), r.sigma.to_matrix()?, &r.fibre.to_matrix()?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    text.push('\n');
    text
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::ImproperInput(format!("invalid JSON: {e}")))
}

pub fn pcqf_to_json(f: &Pcqf) -> String {
    to_json(&pcqf_to_repr(f))
}

pub fn pcqf_from_json(text: &str) -> Result<Pcqf> {
    pcqf_from_repr(&from_json(text)?)
}

pub fn bifunction_to_json(f: &QuadBifunction) -> String {
    to_json(&bifunction_to_repr(f))
}

pub fn bifunction_from_json(text: &str) -> Result<QuadBifunction> {
    bifunction_from_repr(&from_json(text)?)
}

pub fn gauss_to_json(f: &GaussMap) -> String {
    to_json(&gauss_to_repr(f))
}

pub fn gauss_from_json(text: &str) -> Result<GaussMap> {
    gauss_from_repr(&from_json(text)?)
}

pub fn ext_state_to_json(s: &ExtGaussState) -> String {
    to_json(&ext_state_to_repr(s))
}

pub fn ext_state_from_json(text: &str) -> Result<ExtGaussState> {
    ext_state_from_repr(&from_json(text)?)
}

pub fn matrix_to_json(m: &Matrix) -> String {
    to_json(&MatrixRepr::from_matrix(m))
}

pub fn matrix_from_json(text: &str) -> Result<Matrix> {
    from_json::<MatrixRepr>(text)?.to_matrix()
}

/// Reads a vector from the matrix file format: a single column or a single
/// row is accepted.
pub fn vector_from_json(text: &str) -> Result<Vector> {
    let m = matrix_from_json(text)?;
    if m.rows() != 1 && m.cols() != 1 && !(m.rows() == 0 || m.cols() == 0) {
        return Err(Error::ImproperInput(format!(
            "expected a vector shape, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(Vector::new(m.data().to_vec()))
}
