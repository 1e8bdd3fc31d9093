//! Stable JSON output schema for the CLI.
//!
//! Field names are part of the interface: `m`, `d`, `form` (integer strings),
//! `invariants` (`values`, `factored`, `weights`), `wgcd`, `minimal`,
//! `lambda` (`primes`: prime -> exact exponent), `point_normalized`,
//! `height` (`decimal`, `argmax_index`), `defined_over_base`,
//! `extension_note`. Commands fill the subset that applies; absent fields
//! are omitted, not null.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use wmod_core::arith::factorize;
use wmod_core::reduction::{ReductionReport, SuperellipticCurve};
use wmod_core::weighted::{PrimeExponentMap, WeightedPoint};

use crate::error::CliError;
use crate::store::HeightInfo;

#[derive(Debug, Clone, Serialize)]
pub struct InvariantsOut {
    pub values: Vec<String>,
    pub factored: Vec<String>,
    pub weights: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaOut {
    pub primes: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Response {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantsOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wgcd: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<LambdaOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_normalized: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height: Option<HeightInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defined_over_base: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension_note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realization_mismatch: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scaling: Option<String>,
}

impl Response {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("response serializes")
    }

    pub fn with_curve(mut self, curve: &SuperellipticCurve) -> Result<Self, CliError> {
        self.m = Some(curve.exponent());
        self.d = Some(curve.degree());
        self.form = Some(
            curve
                .form()
                .integer_coeffs()?
                .iter()
                .map(|c| c.to_string())
                .collect(),
        );
        Ok(self)
    }

    pub fn with_invariants(mut self, point: &WeightedPoint) -> Self {
        self.invariants = Some(InvariantsOut {
            values: point.coords().iter().map(|c| c.to_string()).collect(),
            factored: point.coords().iter().map(factored_string).collect(),
            weights: point.weights().weights().to_vec(),
        });
        self
    }

    pub fn with_normalized(mut self, point: &WeightedPoint) -> Result<Self, CliError> {
        let normalized = point.normalize()?;
        let height = normalized.weighted_height()?;
        self.point_normalized = Some(
            normalized
                .coords()
                .iter()
                .map(|c| c.to_string())
                .collect(),
        );
        self.height = Some(HeightInfo {
            decimal: height.decimal(12),
            argmax_index: height.argmax(),
        });
        Ok(self)
    }

    pub fn with_report(mut self, report: &ReductionReport) -> Result<Self, CliError> {
        self.mode = Some(report.mode().to_string());
        self.lambda = Some(lambda_out(report.lambda()));
        self.defined_over_base = Some(report.defined_over_base());
        self.extension_note = report.extension_note().map(str::to_string);
        if report.realization_mismatch() {
            self.realization_mismatch = Some(true);
        }
        // `form` always describes the realized equation; drop it when the
        // reduction is not realized over the base field.
        match report.realized_equation() {
            Some(realized) => self = self.with_curve(realized)?,
            None => self.form = None,
        }
        self.with_normalized(report.output_point())
    }
}

pub fn lambda_out(map: &PrimeExponentMap) -> LambdaOut {
    LambdaOut {
        primes: map
            .factors()
            .iter()
            .map(|(p, e)| (p.to_string(), rational_string(e)))
            .collect(),
    }
}

fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact prime factorization display for a rational value, e.g.
/// `-2^15 * 3^5` or `7 / 2^3`. Zero stays `0`; units stay `1` or `-1`.
pub fn factored_string(value: &BigRational) -> String {
    use num_traits::Zero;
    if value.is_zero() {
        return "0".to_string();
    }
    let numer = factorize(value.numer()).expect("nonzero").to_string();
    if value.denom().is_one() {
        numer
    } else {
        let denom = factorize(value.denom()).expect("nonzero").to_string();
        format!("{numer} / {denom}")
    }
}
