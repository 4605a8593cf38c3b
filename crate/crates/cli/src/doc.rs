//! JSON document formats for point sets and analysis results, plus the
//! string codecs shared by all subcommands. Exact rationals travel as
//! strings like "3/4" so nothing is ever rounded.

use std::str::FromStr;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use quasitomo_core::model_set::FinitePointSet;
use quasitomo_core::{CycloRat, OrderData, QtError, QtResult};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DocumentMetadata {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub window_shift: Vec<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

/// A finite point set with exact coefficients, ready for storage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSetDocument {
    pub schema_version: String,
    pub order: u32,
    /// Coefficient vector of the translation, exact rational strings.
    pub translation: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Integer coefficient vectors, one per lattice point.
    pub points: Vec<Vec<i64>>,
    #[serde(default)]
    pub metadata: DocumentMetadata,
}

impl Default for DocumentMetadata {
    fn default() -> Self {
        DocumentMetadata { window_shift: Vec::new(), radius: None, timestamp: None }
    }
}

pub fn rational_to_string(q: &BigRational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> QtResult<BigRational> {
    BigRational::from_str(s.trim())
        .map_err(|e| QtError::BadArgument(format!("cannot parse rational '{}': {}", s, e)))
}

pub fn coeff_strings(z: &CycloRat) -> Vec<String> {
    z.coeffs().iter().map(rational_to_string).collect()
}

pub fn element_from_strings(order: u32, coeffs: &[String]) -> QtResult<CycloRat> {
    let phi = OrderData::get(order)?.phi;
    if coeffs.len() != phi {
        return Err(QtError::BadArgument(format!(
            "expected {} coefficients for order {}, got {}",
            phi,
            order,
            coeffs.len()
        )));
    }
    let parsed: Vec<BigRational> = coeffs.iter().map(|s| parse_rational(s)).collect::<QtResult<_>>()?;
    CycloRat::from_zeta_coeffs(order, &parsed)
}

/// Parse "a,b,c" into an exact element; entries may be rationals.
pub fn element_from_csv(order: u32, csv: &str) -> QtResult<CycloRat> {
    let parts: Vec<String> = csv.split(',').map(|s| s.trim().to_string()).collect();
    element_from_strings(order, &parts)
}

/// Parse "a,b;c,d;…" into a list of exact elements.
pub fn elements_from_arg(order: u32, arg: &str) -> QtResult<Vec<CycloRat>> {
    arg.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| element_from_csv(order, s))
        .collect()
}

fn integer_coeffs(z: &CycloRat) -> QtResult<Vec<i64>> {
    z.coeffs()
        .iter()
        .map(|c| {
            if !c.is_integer() {
                return Err(QtError::BadArgument(format!(
                    "point coefficient {} is not an integer",
                    c
                )));
            }
            c.to_integer().to_i64().ok_or_else(|| {
                QtError::BadArgument("point coefficient exceeds the storable range".into())
            })
        })
        .collect()
}

pub fn point_set_to_document(
    f: &FinitePointSet,
    preset: Option<String>,
    metadata: DocumentMetadata,
) -> QtResult<PointSetDocument> {
    Ok(PointSetDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        order: f.order(),
        translation: coeff_strings(f.translation()),
        preset,
        points: f.points().iter().map(integer_coeffs).collect::<QtResult<_>>()?,
        metadata,
    })
}

pub fn document_to_point_set(doc: &PointSetDocument) -> QtResult<FinitePointSet> {
    let translation = element_from_strings(doc.order, &doc.translation)?;
    let phi = OrderData::get(doc.order)?.phi;
    let points: Vec<CycloRat> = doc
        .points
        .iter()
        .map(|v| {
            if v.len() != phi {
                return Err(QtError::BadArgument(format!(
                    "point vector length {} does not match φ = {}",
                    v.len(),
                    phi
                )));
            }
            CycloRat::from_integer_coeffs(doc.order, v)
        })
        .collect::<QtResult<_>>()?;
    FinitePointSet::new(doc.order, translation, points)
}

/// A polygon with exact vertices, as written by `upolygon` and read by `render`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonDocument {
    pub schema_version: String,
    pub order: u32,
    pub vertices: Vec<Vec<String>>,
}

/// Two point sets with equal X-rays, as written by `switch`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwitchDocument {
    pub schema_version: String,
    pub f1: PointSetDocument,
    pub f2: PointSetDocument,
}

pub fn document_to_polygon(
    doc: &PolygonDocument,
) -> QtResult<quasitomo_core::polygon::PolygonInPlane> {
    let vertices: Vec<CycloRat> = doc
        .vertices
        .iter()
        .map(|v| element_from_strings(doc.order, v))
        .collect::<QtResult<_>>()?;
    quasitomo_core::polygon::PolygonInPlane::new(doc.order, vertices)
}

pub fn timestamp_now() -> String {
    match std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH) {
        Ok(d) => d.as_secs().to_string(),
        Err(_) => "0".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_round_trip() {
        let f = FinitePointSet::new(
            8,
            CycloRat::zero(8).unwrap(),
            vec![
                CycloRat::from_integer_coeffs(8, &[1, 0, -2, 3]).unwrap(),
                CycloRat::zero(8).unwrap(),
            ],
        )
        .unwrap();
        let doc = point_set_to_document(&f, Some("ab".into()), DocumentMetadata::default())
            .unwrap();
        let json = serde_json::to_string(&doc).unwrap();
        let back: PointSetDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
        let f2 = document_to_point_set(&back).unwrap();
        assert_eq!(f2.points(), f.points());
    }

    #[test]
    fn rational_strings() {
        let q = parse_rational("-3/4").unwrap();
        assert_eq!(rational_to_string(&q), "-3/4");
        assert_eq!(rational_to_string(&parse_rational("5").unwrap()), "5");
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn csv_elements() {
        let z = element_from_csv(4, "1/2,-3").unwrap();
        assert_eq!(z.coeffs()[0], parse_rational("1/2").unwrap());
        assert!(element_from_csv(4, "1,2,3").is_err(), "φ(4) = 2 coefficients required");
        let list = elements_from_arg(4, "1,0;0,1").unwrap();
        assert_eq!(list.len(), 2);
    }
}
