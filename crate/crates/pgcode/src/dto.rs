//! JSON shapes written by the subcommands. Field elements are element ids,
//! flats are lists of basis rows.

use std::time::Duration;

use pgcode_core::bounds::BoundTable;
use pgcode_core::classify::{SpaceType, Witness};
use pgcode_core::code::{Codeword, SecantSpectrum};
use pgcode_core::decompose::{Decomposition, FailureReport};
use pgcode_core::field::FieldElement;
use pgcode_core::geometry::{Hyperplane, ProjSpace, Subspace};
use pgcode_core::verify::{Spectrum, Status, VerificationReport};
use serde::Serialize;
use serde_json::{Map, Value};

pub type Rows = Vec<Vec<usize>>;

pub fn rows(s: &Subspace) -> Rows {
    s.rows().iter().map(|r| ids(r)).collect()
}

pub fn ids(v: &[FieldElement]) -> Vec<usize> {
    v.iter().map(|x| x.id()).collect()
}

#[derive(Debug, Serialize)]
pub struct SpaceInfo {
    pub n: usize,
    pub q: usize,
    pub p: u32,
    pub h: u32,
}

impl SpaceInfo {
    pub fn of(s: &ProjSpace) -> Self {
        SpaceInfo { n: s.n(), q: s.q(), p: s.field().p(), h: s.field().h() }
    }
}

#[derive(Debug, Serialize)]
pub struct LineTerm {
    pub coeff: u16,
    pub line: Rows,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessDto {
    Lines { lines: Vec<LineTerm> },
    Odd { center: Rows, lines: Vec<Rows> },
    Cone { vertex: Rows, plane: Rows, base: Box<TypeDto> },
}

impl WitnessDto {
    pub fn of(w: &Witness) -> Self {
        match w {
            Witness::Lines(ls) => WitnessDto::Lines {
                lines: ls.iter().map(|(a, l)| LineTerm { coeff: a.0, line: rows(l) }).collect(),
            },
            Witness::Odd { center, lines } => {
                WitnessDto::Odd { center: rows(center), lines: lines.iter().map(rows).collect() }
            }
            Witness::Cone { vertex, plane, base } => {
                WitnessDto::Cone { vertex: rows(vertex), plane: rows(plane), base: Box::new(TypeDto::of(base)) }
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TypeDto {
    pub tag: &'static str,
    pub weight: usize,
    pub witness: Option<WitnessDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternative: Option<WitnessDto>,
}

impl TypeDto {
    pub fn of(t: &SpaceType) -> Self {
        TypeDto {
            tag: t.tag.name(),
            weight: t.weight,
            witness: t.witness.as_ref().map(WitnessDto::of),
            alternative: t.alternative.as_ref().map(WitnessDto::of),
        }
    }
}

/// Big integers go out as decimal strings.
#[derive(Debug, Serialize)]
pub struct BoundsDto {
    pub branch: &'static str,
    #[serde(rename = "A")]
    pub a: Option<u64>,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "floorB")]
    pub floor_b: String,
    #[serde(rename = "D")]
    pub d: Option<String>,
    #[serde(rename = "floorD")]
    pub floor_d: Option<String>,
}

impl BoundsDto {
    pub fn of(t: &BoundTable) -> Self {
        BoundsDto {
            branch: t.branch.name(),
            a: t.a_q,
            b: t.b.to_string(),
            floor_b: t.floor_b.to_string(),
            d: t.d.as_ref().map(|d| d.to_string()),
            floor_d: t.floor_d.as_ref().map(|d| d.to_string()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SecantCount {
    pub size: usize,
    pub lines: usize,
}

pub fn secants(s: &SecantSpectrum) -> Vec<SecantCount> {
    s.counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(size, &lines)| SecantCount { size, lines })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct Classification {
    pub space: SpaceInfo,
    pub flat: Option<Rows>,
    pub tag: &'static str,
    pub weight: usize,
    pub witness: Option<WitnessDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternative: Option<WitnessDto>,
    pub bounds: Option<BoundsDto>,
    pub within_b: Option<bool>,
    pub secants: Vec<SecantCount>,
}

#[derive(Debug, Serialize)]
pub struct PointValue {
    pub point_index: usize,
    pub value: u16,
}

#[derive(Debug, Serialize)]
pub struct TermDto {
    pub coeff: u16,
    pub dual_coords: Vec<usize>,
}

pub fn terms(ts: &[(pgcode_core::field::PrimeFieldElement, Hyperplane)]) -> Vec<TermDto> {
    ts.iter().map(|(a, h)| TermDto { coeff: a.0, dual_coords: ids(&h.dual_coords) }).collect()
}

#[derive(Debug, Serialize)]
pub struct DecompositionDto {
    pub vertex: Rows,
    pub plane: Rows,
    pub values: Vec<PointValue>,
    pub terms: Vec<TermDto>,
    pub base_type: &'static str,
}

impl DecompositionDto {
    pub fn of(d: &Decomposition) -> Self {
        DecompositionDto {
            vertex: rows(&d.vertex),
            plane: rows(&d.plane),
            values: d.values.iter().map(|&(i, v)| PointValue { point_index: i, value: v.0 }).collect(),
            terms: terms(&d.terms),
            base_type: d.base_type.name(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FailureDto {
    pub status: &'static str,
    pub input: String,
    pub error: String,
    pub weight: Option<usize>,
    pub secants: Option<Vec<SecantCount>>,
    pub trace: Vec<String>,
    /// The input in sparse form.
    pub codeword: String,
}

impl FailureDto {
    pub fn of(input: &str, c: &Codeword, error: String, report: Option<&FailureReport>) -> Self {
        let spectrum = SecantSpectrum { counts: match report {
            Some(r) => r.spectrum.clone(),
            None => c.secant_spectrum().counts,
        } };
        FailureDto {
            status: "failed",
            input: input.to_string(),
            error,
            weight: Some(c.weight()),
            secants: Some(secants(&spectrum)),
            trace: report.map(|r| r.trace.clone()).unwrap_or_default(),
            codeword: String::new(),
        }
    }
}

/// Sidecar describing how a constructed word was built.
#[derive(Debug, Serialize)]
pub struct RecipeDto {
    pub family: String,
    pub space: SpaceInfo,
    pub seed: Option<u64>,
    pub weight: usize,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub params: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<Rows>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plane: Option<Rows>,
    /// Values of the base plane word in its own point order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_values: Option<Vec<u16>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermDto>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionDto>,
}

#[derive(Debug, Serialize)]
pub struct Constructed {
    pub family: String,
    pub weight: usize,
    pub output: String,
    pub recipe: String,
}

#[derive(Debug, Serialize)]
pub struct WeightCount {
    pub weight: usize,
    pub count: u64,
}

#[derive(Debug, Serialize)]
pub struct SpectrumDto {
    pub space: SpaceInfo,
    pub dimension: usize,
    pub words: u64,
    pub min_weight: Option<usize>,
    pub second_weight: usize,
    pub histogram: Vec<WeightCount>,
    pub hyperplane_words: u64,
    pub difference_words: u64,
    pub gap_weights: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u128>,
}

impl SpectrumDto {
    pub fn of(s: &Spectrum, space: &ProjSpace, timing: bool) -> Self {
        SpectrumDto {
            space: SpaceInfo::of(space),
            dimension: s.dimension,
            words: s.words,
            min_weight: s.min_weight(),
            second_weight: s.second_weight(),
            histogram: s.histogram.iter().map(|(&weight, &count)| WeightCount { weight, count }).collect(),
            hyperplane_words: s.hyperplane_words,
            difference_words: s.difference_words,
            gap_weights: s.gap_weights(),
            runtime_ms: runtime(s.runtime, timing),
        }
    }
}

fn runtime(d: Option<Duration>, timing: bool) -> Option<u128> {
    d.filter(|_| timing).map(|d| d.as_millis())
}

#[derive(Debug, Serialize)]
pub struct ReportDto {
    pub claim_id: String,
    pub parameters: Map<String, Value>,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub evidence: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u128>,
}

fn pairs(v: &[(String, String)]) -> Map<String, Value> {
    v.iter().map(|(k, x)| (k.clone(), Value::String(x.clone()))).collect()
}

impl ReportDto {
    pub fn of(r: &VerificationReport, timing: bool) -> Self {
        let (witness, reason) = match &r.status {
            Status::Verified => (None, None),
            Status::Falsified { witness } => (Some(witness.clone()), None),
            Status::Skipped { reason } => (None, Some(reason.clone())),
        };
        ReportDto {
            claim_id: r.claim_id.clone(),
            parameters: pairs(&r.parameters),
            status: r.status.name(),
            witness,
            reason,
            evidence: pairs(&r.evidence),
            runtime_ms: runtime(r.runtime, timing),
        }
    }
}
