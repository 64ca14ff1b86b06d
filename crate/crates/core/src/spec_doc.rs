//! Versioned configuration documents: a degeneration scenario as a single
//! structured file. Unknown fields are rejected, all indices are validated
//! on ingest, and rationals travel as `"p/q"` strings so exactness survives
//! serialization.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::DualComplex;
use crate::fan::Fan;
use crate::normal_bundle::StratumData;
use crate::scenarios::{
    ConjugationSpec, LoopKind, LoopSpec, Model, ScenarioData, StratumEntry, StratumExpectation,
};
use crate::{IMat, IVec, Int, Rat};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("unsupported schema version {0} (expected {SCHEMA_VERSION})")]
    Schema(u32),
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("bad rational literal {0:?}")]
    BadRational(String),
    #[error("index out of range in {context}: {index}")]
    IndexRange { context: String, index: usize },
    #[error("{0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, DocError>;

// ---------------------------------------------------------------------------
// document model

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub schema: u32,
    pub name: String,
    pub complex: ComplexDoc,
    #[serde(default)]
    pub models: Vec<ModelDoc>,
    #[serde(default)]
    pub strata: Vec<StratumDoc>,
    #[serde(default)]
    pub loops: Vec<LoopDoc>,
    #[serde(default)]
    pub edge_params: Vec<EdgeParamDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub vertices: Vec<VertexDoc>,
    /// maximal faces as zero-based vertex index lists
    pub faces: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub name: String,
    pub multiplicity: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub name: String,
    pub order: Vec<usize>,
    pub table: Vec<TableRowDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRowDoc {
    pub curve: Vec<usize>,
    pub values: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDoc {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    /// zero-based ray index lists
    pub maximal_cones: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumDoc {
    pub id: String,
    pub ambient_dim: usize,
    /// absent when the stratum carries no toric structure: it cannot be
    /// certified and the checker reports that
    #[serde(default, rename = "fanZ", skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanDoc>,
    #[serde(rename = "J_size")]
    pub j_size: usize,
    /// rows for the non-derived cutting components
    pub lambda: Vec<Vec<i64>>,
    pub cartier: Vec<bool>,
    pub connected_intersections: bool,
    /// conormal summands established to fail nefness
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expect_non_nef: Vec<usize>,
    /// the stratum fan is an affine chart, established incomplete
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expect_incomplete: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopDoc {
    pub name: String,
    pub kind: String,
    /// vertex monodromy: the cyclic neighbour sequence; discriminant loops:
    /// the face vertices
    pub vertex_sequence: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint_face: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<(usize, usize)>,
    pub models: Vec<String>,
    pub basis: Vec<String>,
    pub origin: String,
    #[serde(default)]
    pub invert: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugate_pre_basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_change: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_pre: Option<Vec<Vec<i64>>>,
    pub expected: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub annotation: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeParamDoc {
    pub edge: Vec<usize>,
    /// clamp position as an exact rational string
    pub a: String,
}

// ---------------------------------------------------------------------------
// rationals as strings

pub fn rat_to_string(r: &Rat) -> String {
    use num_traits::One;
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_string(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int =
        |t: &str| Int::from_str(t).map_err(|_| DocError::BadRational(s.to_string()));
    match s.split_once('/') {
        None => Ok(Rat::from(parse_int(s)?)),
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d == Int::from(0) {
                return Err(DocError::BadRational(s.to_string()));
            }
            Ok(Rat::new(parse_int(num)?, d))
        }
    }
}

// ---------------------------------------------------------------------------
// conversions

fn mat_to_rows(m: &IMat) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| {
                    let s = m.get(r, c).to_string();
                    s.parse::<i64>().expect("scenario matrices stay small")
                })
                .collect()
        })
        .collect()
}

fn rows_to_mat(rows: &[Vec<i64>]) -> Result<IMat> {
    let r = rows.len();
    let c = rows.first().map(|x| x.len()).unwrap_or(0);
    for row in rows {
        if row.len() != c {
            return Err(DocError::Inconsistent("ragged matrix rows".into()));
        }
    }
    let mut entries = Vec::with_capacity(r * c);
    for row in rows {
        entries.extend(row.iter().map(|&v| Int::from(v)));
    }
    Ok(IMat::new(r, c, entries))
}

pub fn fan_to_doc(fan: &Fan) -> FanDoc {
    FanDoc {
        dim: fan.dim(),
        rays: fan
            .rays()
            .iter()
            .map(|r| {
                r.entries()
                    .iter()
                    .map(|e| e.to_string().parse::<i64>().expect("small ray entries"))
                    .collect()
            })
            .collect(),
        maximal_cones: fan.max_cones().to_vec(),
    }
}

pub fn fan_from_doc(doc: &FanDoc) -> Result<Fan> {
    for (ci, cone) in doc.maximal_cones.iter().enumerate() {
        for &l in cone {
            if l >= doc.rays.len() {
                return Err(DocError::IndexRange {
                    context: format!("maximal cone {ci}"),
                    index: l,
                });
            }
        }
    }
    for ray in &doc.rays {
        if ray.len() != doc.dim {
            return Err(DocError::Inconsistent(format!(
                "ray {ray:?} does not have dimension {}",
                doc.dim
            )));
        }
    }
    Ok(Fan::new(
        doc.dim,
        doc.rays.iter().map(|r| IVec::from_i64(r)).collect(),
        doc.maximal_cones.clone(),
    ))
}

pub fn stratum_to_doc(entry: &StratumEntry) -> StratumDoc {
    let s = &entry.data;
    let rows = (1..s.j_count())
        .map(|j| {
            (0..s.n_rays())
                .map(|l| {
                    s.lambda
                        .get(j, l)
                        .to_string()
                        .parse::<i64>()
                        .expect("small lambda entries")
                })
                .collect()
        })
        .collect();
    let (expect_non_nef, expect_incomplete) = match &entry.expectation {
        StratumExpectation::Certified => (Vec::new(), false),
        StratumExpectation::NotCertified {
            non_nef,
            incomplete,
        } => (non_nef.clone(), *incomplete),
    };
    StratumDoc {
        id: s.name.clone(),
        ambient_dim: s.ambient_dim,
        fan: Some(fan_to_doc(&s.fan_z)),
        j_size: s.j_count(),
        lambda: rows,
        cartier: s.cartier.clone(),
        connected_intersections: s.connected_intersections,
        expect_non_nef,
        expect_incomplete,
    }
}

pub fn stratum_from_doc(doc: &StratumDoc) -> Result<Option<StratumData>> {
    let fan = match &doc.fan {
        None => return Ok(None),
        Some(f) => fan_from_doc(f)?,
    };
    let partial: Vec<IVec> = doc.lambda.iter().map(|r| IVec::from_i64(r)).collect();
    let s = StratumData::new(
        doc.id.clone(),
        doc.ambient_dim,
        fan,
        &partial,
        doc.cartier.clone(),
        doc.connected_intersections,
    )
    .map_err(|e| DocError::Inconsistent(format!("stratum {}: {e}", doc.id)))?;
    if s.j_count() != doc.j_size {
        return Err(DocError::Inconsistent(format!(
            "stratum {}: j_size {} does not match ambient/stratum dimensions",
            doc.id, doc.j_size
        )));
    }
    Ok(Some(s))
}

pub fn from_scenario(data: &ScenarioData) -> SpecDocument {
    let complex = ComplexDoc {
        vertices: (0..data.complex.n_vertices())
            .map(|v| VertexDoc {
                name: data.complex.vertex_name(v).to_string(),
                multiplicity: data
                    .complex
                    .multiplicity(v)
                    .to_string()
                    .parse()
                    .expect("small multiplicities"),
            })
            .collect(),
        faces: data.complex.maximal_faces(),
    };
    let models = data
        .models
        .iter()
        .map(|m| ModelDoc {
            name: m.name.clone(),
            order: m.order.clone(),
            table: m
                .table
                .iter()
                .map(|(curve, row)| TableRowDoc {
                    curve: curve.clone(),
                    values: row
                        .entries()
                        .iter()
                        .map(|v| v.to_string().parse().expect("small table entries"))
                        .collect(),
                })
                .collect(),
        })
        .collect();
    let loops = data
        .loops
        .iter()
        .map(|l| {
            let (kind, vertex_sequence, center, pair, models, basepoint) = match &l.kind {
                LoopKind::Vertex {
                    model,
                    center,
                    cycle,
                } => (
                    "vertex".to_string(),
                    cycle.clone(),
                    Some(*center),
                    None,
                    vec![model.clone()],
                    vec![*center],
                ),
                LoopKind::Codim1 { face, pair, models } => {
                    // basepoint in the maximal face on the near side
                    let (i0, _) = crate::scenarios::far_vertices(&data.complex, face);
                    let mut f = face.clone();
                    f.push(i0);
                    f.sort_unstable();
                    (
                        "codim1".to_string(),
                        face.clone(),
                        None,
                        Some(*pair),
                        vec![models.0.clone(), models.1.clone()],
                        f,
                    )
                }
            };
            LoopDoc {
                name: l.name.clone(),
                kind,
                vertex_sequence,
                basepoint_face: Some(basepoint),
                center,
                pair,
                models,
                basis: l.basis.clone(),
                origin: l.origin.clone(),
                invert: l.invert,
                conjugate_pre_basis: l.conjugation.as_ref().map(|c| c.pre_basis.clone()),
                expected_change: l
                    .conjugation
                    .as_ref()
                    .map(|c| mat_to_rows(&c.expected_change)),
                expected_pre: l.conjugation.as_ref().map(|c| mat_to_rows(&c.expected_pre)),
                expected: mat_to_rows(&l.expected),
                annotation: l.annotation.clone(),
            }
        })
        .collect();
    SpecDocument {
        schema: SCHEMA_VERSION,
        name: data.name.clone(),
        complex,
        models,
        strata: data.strata.iter().map(stratum_to_doc).collect(),
        loops,
        edge_params: data
            .edge_params
            .iter()
            .map(|(edge, a)| EdgeParamDoc {
                edge: edge.clone(),
                a: rat_to_string(a),
            })
            .collect(),
    }
}

pub fn to_scenario(doc: &SpecDocument) -> Result<ScenarioData> {
    if doc.schema != SCHEMA_VERSION {
        return Err(DocError::Schema(doc.schema));
    }
    let n = doc.complex.vertices.len();
    for (fi, face) in doc.complex.faces.iter().enumerate() {
        for &v in face {
            if v >= n {
                return Err(DocError::IndexRange {
                    context: format!("face {fi}"),
                    index: v,
                });
            }
        }
    }
    let complex = DualComplex::new(
        doc.complex.vertices.iter().map(|v| v.name.clone()).collect(),
        doc.complex
            .vertices
            .iter()
            .map(|v| Int::from(v.multiplicity))
            .collect(),
        &doc.complex.faces,
    );
    let mut models = Vec::new();
    for m in &doc.models {
        for &o in &m.order {
            if o >= n {
                return Err(DocError::IndexRange {
                    context: format!("model {} order", m.name),
                    index: o,
                });
            }
        }
        let mut table = BTreeMap::new();
        for row in &m.table {
            for &v in &row.curve {
                if v >= n {
                    return Err(DocError::IndexRange {
                        context: format!("model {} curve", m.name),
                        index: v,
                    });
                }
            }
            if row.values.len() != n {
                return Err(DocError::Inconsistent(format!(
                    "model {}: table row needs one value per component",
                    m.name
                )));
            }
            let mut curve = row.curve.clone();
            curve.sort_unstable();
            table.insert(curve, IVec::from_i64(&row.values));
        }
        models.push(Model {
            name: m.name.clone(),
            order: m.order.clone(),
            table,
        });
    }
    let mut loops = Vec::new();
    for l in &doc.loops {
        let kind = match l.kind.as_str() {
            "vertex" => {
                let center = l.center.ok_or_else(|| {
                    DocError::Inconsistent(format!("loop {}: vertex loop needs a center", l.name))
                })?;
                if l.models.len() != 1 {
                    return Err(DocError::Inconsistent(format!(
                        "loop {}: vertex loop names one model",
                        l.name
                    )));
                }
                LoopKind::Vertex {
                    model: l.models[0].clone(),
                    center,
                    cycle: l.vertex_sequence.clone(),
                }
            }
            "codim1" => {
                let pair = l.pair.ok_or_else(|| {
                    DocError::Inconsistent(format!("loop {}: discriminant loop needs a pair", l.name))
                })?;
                if l.models.len() != 2 {
                    return Err(DocError::Inconsistent(format!(
                        "loop {}: discriminant loop names two models",
                        l.name
                    )));
                }
                LoopKind::Codim1 {
                    face: l.vertex_sequence.clone(),
                    pair,
                    models: (l.models[0].clone(), l.models[1].clone()),
                }
            }
            other => {
                return Err(DocError::Inconsistent(format!(
                    "loop {}: unknown kind {other:?}",
                    l.name
                )))
            }
        };
        for &v in &l.vertex_sequence {
            if v >= n {
                return Err(DocError::IndexRange {
                    context: format!("loop {}", l.name),
                    index: v,
                });
            }
        }
        if let Some(bp) = &l.basepoint_face {
            if !complex.has_face(bp) {
                return Err(DocError::Inconsistent(format!(
                    "loop {}: basepoint face {bp:?} is not a face of the complex",
                    l.name
                )));
            }
        }
        let conjugation = match (&l.conjugate_pre_basis, &l.expected_change, &l.expected_pre) {
            (None, None, None) => None,
            (Some(pre_basis), Some(change), Some(pre)) => Some(ConjugationSpec {
                pre_basis: pre_basis.clone(),
                expected_change: rows_to_mat(change)?,
                expected_pre: rows_to_mat(pre)?,
            }),
            _ => {
                return Err(DocError::Inconsistent(format!(
                    "loop {}: conjugation fields must appear together",
                    l.name
                )))
            }
        };
        loops.push(LoopSpec {
            name: l.name.clone(),
            kind,
            basis: l.basis.clone(),
            origin: l.origin.clone(),
            invert: l.invert,
            conjugation,
            expected: rows_to_mat(&l.expected)?,
            annotation: l.annotation.clone(),
        });
    }
    let mut strata = Vec::new();
    for s in &doc.strata {
        if let Some(data) = stratum_from_doc(s)? {
            let expectation = if s.expect_non_nef.is_empty() && !s.expect_incomplete {
                StratumExpectation::Certified
            } else {
                StratumExpectation::NotCertified {
                    non_nef: s.expect_non_nef.clone(),
                    incomplete: s.expect_incomplete,
                }
            };
            strata.push(StratumEntry { data, expectation });
        }
    }
    let mut edge_params = BTreeMap::new();
    for e in &doc.edge_params {
        for &v in &e.edge {
            if v >= n {
                return Err(DocError::IndexRange {
                    context: "edge parameter".into(),
                    index: v,
                });
            }
        }
        edge_params.insert(e.edge.clone(), rat_from_string(&e.a)?);
    }
    Ok(ScenarioData {
        name: doc.name.clone(),
        complex,
        models,
        loops,
        strata,
        edge_params,
    })
}

pub fn parse(text: &str) -> Result<SpecDocument> {
    let doc: SpecDocument = serde_json::from_str(text)?;
    if doc.schema != SCHEMA_VERSION {
        return Err(DocError::Schema(doc.schema));
    }
    Ok(doc)
}

pub fn to_json(doc: &SpecDocument) -> String {
    serde_json::to_string_pretty(doc).expect("document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{base_report, k3::quartic_k3};

    #[test]
    fn rational_strings() {
        assert_eq!(rat_to_string(&crate::rat(1, 3)), "1/3");
        assert_eq!(rat_to_string(&crate::rat(-2, 1)), "-2");
        assert_eq!(rat_from_string("1/3").unwrap(), crate::rat(1, 3));
        assert_eq!(rat_from_string("-5").unwrap(), crate::rat(-5, 1));
        assert_eq!(rat_from_string("4/6").unwrap(), crate::rat(2, 3));
        assert!(rat_from_string("1/0").is_err());
        assert!(rat_from_string("x").is_err());
    }

    #[test]
    fn export_ingest_identical_report() {
        let (data, _) = quartic_k3().unwrap();
        let doc = from_scenario(&data);
        let json = to_json(&doc);
        let parsed = parse(&json).unwrap();
        let back = to_scenario(&parsed).unwrap();
        let report_a = base_report(&data).unwrap().to_json();
        let report_b = base_report(&back).unwrap().to_json();
        assert_eq!(report_a, report_b);
    }

    #[test]
    fn unknown_fields_rejected() {
        let (data, _) = quartic_k3().unwrap();
        let mut value: serde_json::Value =
            serde_json::from_str(&to_json(&from_scenario(&data))).unwrap();
        value
            .as_object_mut()
            .unwrap()
            .insert("surprise".into(), serde_json::json!(1));
        let text = serde_json::to_string(&value).unwrap();
        assert!(parse(&text).is_err());
    }

    #[test]
    fn bad_indices_rejected() {
        let (data, _) = quartic_k3().unwrap();
        let mut doc = from_scenario(&data);
        doc.complex.faces.push(vec![0, 99]);
        assert!(matches!(
            to_scenario(&doc),
            Err(DocError::IndexRange { .. })
        ));
    }

    #[test]
    fn wrong_schema_rejected() {
        let (data, _) = quartic_k3().unwrap();
        let mut doc = from_scenario(&data);
        doc.schema = 2;
        assert!(matches!(to_scenario(&doc), Err(DocError::Schema(2))));
    }

    #[test]
    fn fanless_stratum_is_uncertifiable() {
        let doc = StratumDoc {
            id: "no-fan".into(),
            ambient_dim: 3,
            fan: None,
            j_size: 1,
            lambda: vec![],
            cartier: vec![true],
            connected_intersections: true,
            expect_non_nef: vec![],
            expect_incomplete: false,
        };
        assert!(stratum_from_doc(&doc).unwrap().is_none());
    }
}
