//! Outcome records for identity checks and their JSON form.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::Serializer;
use serde::{Deserialize, Deserializer, Serialize};

use crate::fps::{Deg, PolySeries};
use crate::qcore::MultiPoly;

/// Witness strings are cut to this many characters.
pub const WITNESS_CAP: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    ExactSeries,
    ExactPoly,
    NumericComplex,
    Quadrature,
}

impl Mode {
    pub fn is_exact(self) -> bool {
        matches!(self, Mode::ExactSeries | Mode::ExactPoly)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::ExactSeries => "exact-series",
            Mode::ExactPoly => "exact-poly",
            Mode::NumericComplex => "numeric-complex",
            Mode::Quadrature => "quadrature",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ExactPass,
    Pass,
    Fail,
}

impl Status {
    pub fn passed(self) -> bool {
        self != Status::Fail
    }
}

/// `"exact-zero"`, a number, or `null` in JSON.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Residual {
    ExactZero,
    Value(f64),
    Unknown,
}

impl Serialize for Residual {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Residual::ExactZero => s.serialize_str("exact-zero"),
            Residual::Value(v) => s.serialize_f64(*v),
            Residual::Unknown => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Residual {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Null => Ok(Residual::Unknown),
            serde_json::Value::String(s) if s == "exact-zero" => Ok(Residual::ExactZero),
            serde_json::Value::Number(n) => Ok(Residual::Value(n.as_f64().unwrap_or(f64::NAN))),
            other => Err(serde::de::Error::custom(format!("bad residual {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: String,
    pub paper_ref: String,
    pub mode: Mode,
    pub order: u32,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub residual: Residual,
    pub witness: Option<String>,
    pub elapsed_ms: Option<u64>,
}

impl IdentityReport {
    pub fn new(id: &str, paper_ref: &str, mode: Mode, order: u32, params: BTreeMap<String, String>) -> Self {
        Self {
            id: id.to_string(),
            paper_ref: paper_ref.to_string(),
            mode,
            order,
            params,
            status: Status::Fail,
            residual: Residual::Unknown,
            witness: None,
            elapsed_ms: None,
        }
    }

    /// Records the outcome of an exact comparison: `None` means equal.
    pub fn exact_outcome(mut self, witness: Option<String>) -> Self {
        match witness {
            None => {
                self.status = Status::ExactPass;
                self.residual = Residual::ExactZero;
                self.witness = None;
            }
            Some(w) => {
                self.status = Status::Fail;
                self.residual = Residual::Unknown;
                self.witness = Some(cap_witness(&w));
            }
        }
        self
    }

    /// Records a numeric residual against a tolerance.
    pub fn numeric_outcome(mut self, residual: f64, tol: f64, witness: impl FnOnce() -> String) -> Self {
        self.residual = Residual::Value(residual);
        if residual.is_finite() && residual <= tol {
            self.status = Status::Pass;
            self.witness = None;
        } else {
            self.status = Status::Fail;
            self.witness = Some(cap_witness(&witness()));
        }
        self
    }

    pub fn failed(mut self, reason: &str) -> Self {
        self.status = Status::Fail;
        self.residual = Residual::Unknown;
        self.witness = Some(cap_witness(reason));
        self
    }

    pub fn passed(&self) -> bool {
        self.status.passed()
    }
}

pub fn cap_witness(w: &str) -> String {
    if w.chars().count() <= WITNESS_CAP {
        w.to_string()
    } else {
        w.chars().take(WITNESS_CAP).collect()
    }
}

fn deg_label(vars: &[String], d: Deg) -> String {
    match vars {
        [v] => format!("{v}^{}", d.0),
        [v, w] => format!("{v}^{} {w}^{}", d.0, d.1),
        _ => format!("{d:?}"),
    }
}

/// Compares two series coefficient by coefficient. Returns a witness naming
/// the first differing degree and the difference, or `None` when equal.
pub fn series_witness(lhs: &PolySeries, rhs: &PolySeries) -> Option<String> {
    match lhs.first_difference(rhs) {
        Ok(None) => None,
        Ok(Some((d, diff))) => Some(format!("coefficient of {} differs by {}", deg_label(lhs.vars(), d), diff)),
        Err(e) => Some(e.to_string()),
    }
}

/// Compares two polynomials; the witness carries the difference.
pub fn poly_witness(label: &str, lhs: &MultiPoly, rhs: &MultiPoly) -> Option<String> {
    if lhs == rhs {
        None
    } else {
        Some(format!("{label}: sides differ by {}", lhs.sub_ref(rhs)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = IdentityReport::new("x", "ref", Mode::ExactSeries, 4, BTreeMap::new()).exact_outcome(None);
        let j = serde_json::to_string(&r).unwrap();
        assert!(j.contains(r#""status":"exact-pass""#));
        assert!(j.contains(r#""residual":"exact-zero""#));
        assert!(j.contains(r#""mode":"exact-series""#));
        assert!(j.contains(r#""elapsed_ms":null"#));
        let back: IdentityReport = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn numeric_outcomes() {
        let r = IdentityReport::new("x", "", Mode::Quadrature, 0, BTreeMap::new());
        assert_eq!(r.clone().numeric_outcome(1e-12, 1e-10, String::new).status, Status::Pass);
        let f = r.numeric_outcome(f64::NAN, 1e-10, || "nan".into());
        assert_eq!(f.status, Status::Fail);
        assert_eq!(f.witness.as_deref(), Some("nan"));
    }

    #[test]
    fn witness_is_capped() {
        let long = "x".repeat(2000);
        let r = IdentityReport::new("x", "", Mode::ExactPoly, 0, BTreeMap::new()).exact_outcome(Some(long));
        assert_eq!(r.witness.unwrap().len(), WITNESS_CAP);
    }
}
