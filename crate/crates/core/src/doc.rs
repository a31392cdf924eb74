//! JSON instance documents: complexes, pairs, towers, scattered instances,
//! index sets and pattern elements. Integers that can grow (incidence
//! numbers, chain coefficients, torsion orders, pattern values) travel as
//! decimal strings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::algebra::{CanonicalGroup, TailPolicy};
use crate::axioms::{Attachment, ScatteredInstance};
use crate::complexes::{Cell, CellComplex, ChainMap, ComplexError, Pair, Subcomplex, ValidationReport};
use crate::ideals::{PairedIdeals, SemilinearSet, SetExpr};
use crate::kdirect::PatternElement;
use crate::towers::{Tower, TowersError};

/// Arbitrary precision integer written as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Int;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an integer as a decimal string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                BigInt::from_str(v).map(Int).map_err(|_| E::custom(format!("not a decimal integer: {v:?}")))
            }
        }
        d.deserialize_str(V)
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int(BigInt::from(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub id: String,
    pub dim: usize,
    /// `(face id, incidence number)`.
    #[serde(default)]
    pub boundary: Vec<(String, Int)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub cells: Vec<CellDoc>,
}

/// Chain map given by the image chain of each source cell; unlisted cells go to zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub images: BTreeMap<String, Vec<(String, Int)>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case", deny_unknown_fields)]
pub enum TailDoc {
    TruncatedUnknown,
    EventuallyConstant { from: usize },
    EventuallyPeriodic { from: usize, period: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealsDoc {
    Horizontal,
    Vertical,
    Discrete,
    Clustered,
}

impl IdealsDoc {
    pub fn ideals(self) -> PairedIdeals {
        match self {
            IdealsDoc::Horizontal => PairedIdeals::horizontal(),
            IdealsDoc::Vertical => PairedIdeals::vertical(),
            IdealsDoc::Discrete => PairedIdeals::discrete(),
            IdealsDoc::Clustered => PairedIdeals::clustered(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub region: SetExpr,
    pub value: Vec<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceDocument {
    Complex {
        name: String,
        cells: Vec<CellDoc>,
    },
    /// `sub` lists cells whose closure is the subcomplex.
    Pair {
        name: String,
        cells: Vec<CellDoc>,
        sub: Vec<String>,
    },
    /// `bondings[i]` maps `levels[i + 1]` to `levels[i]`; levels name entries of `complexes`.
    Tower {
        name: String,
        complexes: BTreeMap<String, ComplexDoc>,
        levels: Vec<String>,
        bondings: Vec<MapDoc>,
        tail: TailDoc,
    },
    Scattered {
        name: String,
        component: ComplexDoc,
        basepoint: String,
        attachment: Attachment,
        size: usize,
    },
    Set {
        name: String,
        set: SetExpr,
        ideals: IdealsDoc,
    },
    Pattern {
        name: String,
        group: GroupDoc,
        pieces: Vec<PieceDoc>,
        ideals: IdealsDoc,
    },
}

/// Loading failures, split the way the command line reports them.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DocError {
    /// Malformed JSON, missing fields, unresolved ids.
    #[error("schema error: {0}")]
    Schema(String),
    /// Well-formed but mathematically invalid, e.g. `∂∂ ≠ 0`.
    #[error("validation error: {message}")]
    Validation { message: String, cells: Vec<String> },
}

impl From<ComplexError> for DocError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::Invalid(r) => invalid(&r),
            ComplexError::NotAChainMap { ref cell } | ComplexError::BadImage { ref cell } => {
                DocError::Validation { message: e.to_string(), cells: vec![cell.clone()] }
            }
            ComplexError::NotClosed { ref cell, ref face } => {
                DocError::Validation { message: e.to_string(), cells: vec![cell.clone(), face.clone()] }
            }
            other => DocError::Schema(other.to_string()),
        }
    }
}

impl From<TowersError> for DocError {
    fn from(e: TowersError) -> Self {
        match e {
            TowersError::Complex(c) => c.into(),
            TowersError::NotCellular { ref cell, .. } => {
                DocError::Validation { message: e.to_string(), cells: vec![cell.clone()] }
            }
            TowersError::TooShort { .. } | TowersError::ZeroPeriod => DocError::Schema(e.to_string()),
            other => DocError::Validation { message: other.to_string(), cells: vec![] },
        }
    }
}

fn invalid(r: &ValidationReport) -> DocError {
    DocError::Validation { message: r.to_string(), cells: r.cells() }
}

/// A document turned into library objects.
#[derive(Clone, Debug)]
pub enum Instance {
    Complex(Arc<CellComplex>),
    Pair(Pair),
    Tower(Tower),
    Scattered(ScatteredInstance),
    Set(SemilinearSet, PairedIdeals),
    Pattern(PatternElement, PairedIdeals),
}

impl ComplexDoc {
    pub fn build(&self) -> Result<CellComplex, DocError> {
        build_cells(&self.cells)
    }

    pub fn from_complex(k: &CellComplex) -> Self {
        ComplexDoc { cells: cells_of(k) }
    }
}

fn build_cells(cells: &[CellDoc]) -> Result<CellComplex, DocError> {
    let cells = cells
        .iter()
        .map(|c| Cell {
            id: c.id.clone(),
            dim: c.dim,
            boundary: c.boundary.iter().map(|(f, v)| (f.clone(), v.0.clone())).collect(),
        })
        .collect();
    Ok(CellComplex::new_valid(cells)?)
}

pub fn cells_of(k: &CellComplex) -> Vec<CellDoc> {
    k.to_cells()
        .into_iter()
        .map(|c| CellDoc {
            id: c.id,
            dim: c.dim,
            boundary: c.boundary.into_iter().map(|(f, v)| (f, Int(v))).collect(),
        })
        .collect()
}

impl MapDoc {
    fn build(&self, source: &Arc<CellComplex>, target: &Arc<CellComplex>) -> Result<ChainMap, DocError> {
        for (id, chain) in &self.images {
            if source.lookup(id).is_none() {
                return Err(DocError::Schema(format!("map image given for unknown cell {id}")));
            }
            if let Some((t, _)) = chain.iter().find(|(t, _)| target.lookup(t).is_none()) {
                return Err(DocError::Schema(format!("image of {id} names unknown cell {t}")));
            }
        }
        let assignments: Vec<(String, Vec<(String, BigInt)>)> = self
            .images
            .iter()
            .map(|(id, chain)| (id.clone(), chain.iter().map(|(t, v)| (t.clone(), v.0.clone())).collect()))
            .collect();
        Ok(ChainMap::new(source.clone(), target.clone(), &assignments)?)
    }
}

impl InstanceDocument {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        serde_json::from_str(text).map_err(|e| DocError::Schema(e.to_string()))
    }

    /// Parses a file holding one document or an array of them.
    pub fn parse_many(text: &str) -> Result<Vec<Self>, DocError> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| DocError::Schema(e.to_string()))?;
        let items = match v {
            serde_json::Value::Array(xs) => xs,
            one => vec![one],
        };
        items
            .into_iter()
            .map(|x| serde_json::from_value(x).map_err(|e| DocError::Schema(e.to_string())))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn name(&self) -> &str {
        match self {
            InstanceDocument::Complex { name, .. }
            | InstanceDocument::Pair { name, .. }
            | InstanceDocument::Tower { name, .. }
            | InstanceDocument::Scattered { name, .. }
            | InstanceDocument::Set { name, .. }
            | InstanceDocument::Pattern { name, .. } => name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            InstanceDocument::Complex { .. } => "complex",
            InstanceDocument::Pair { .. } => "pair",
            InstanceDocument::Tower { .. } => "tower",
            InstanceDocument::Scattered { .. } => "scattered",
            InstanceDocument::Set { .. } => "set",
            InstanceDocument::Pattern { .. } => "pattern",
        }
    }

    pub fn build(&self) -> Result<Instance, DocError> {
        match self {
            InstanceDocument::Complex { cells, .. } => Ok(Instance::Complex(Arc::new(build_cells(cells)?))),
            InstanceDocument::Pair { cells, sub, .. } => {
                let k = Arc::new(build_cells(cells)?);
                let mut ids = Vec::with_capacity(sub.len());
                for id in sub {
                    ids.push(k.lookup(id).ok_or_else(|| DocError::Schema(format!("subcomplex names unknown cell {id}")))?);
                }
                let s = Subcomplex::closure(k.clone(), ids);
                Ok(Instance::Pair(Pair::new(k, s)?))
            }
            InstanceDocument::Tower { complexes, levels, bondings, tail, .. } => {
                let mut built: BTreeMap<&str, Arc<CellComplex>> = BTreeMap::new();
                for (name, c) in complexes {
                    built.insert(name, Arc::new(c.build()?));
                }
                let levels: Vec<Arc<CellComplex>> = levels
                    .iter()
                    .map(|l| built.get(l.as_str()).cloned().ok_or_else(|| DocError::Schema(format!("unknown level complex {l}"))))
                    .collect::<Result<_, _>>()?;
                if bondings.len() + 1 != levels.len() {
                    return Err(DocError::Schema(format!(
                        "{} levels need {} bondings, found {}",
                        levels.len(),
                        levels.len().saturating_sub(1),
                        bondings.len()
                    )));
                }
                let maps = bondings
                    .iter()
                    .enumerate()
                    .map(|(i, b)| b.build(&levels[i + 1], &levels[i]))
                    .collect::<Result<Vec<_>, _>>()?;
                let tail = match *tail {
                    TailDoc::TruncatedUnknown => TailPolicy::TruncatedUnknown,
                    TailDoc::EventuallyConstant { from } => TailPolicy::EventuallyConstant { from },
                    TailDoc::EventuallyPeriodic { from, period } => TailPolicy::EventuallyPeriodic { from, period },
                };
                Ok(Instance::Tower(Tower::new(levels, maps, tail)?))
            }
            InstanceDocument::Scattered { name, component, basepoint, attachment, size } => {
                let c = Arc::new(component.build()?);
                let s = ScatteredInstance::new(name.clone(), c, basepoint, *attachment, *size).map_err(DocError::Schema)?;
                Ok(Instance::Scattered(s))
            }
            InstanceDocument::Set { set, ideals, .. } => Ok(Instance::Set(set.eval(), ideals.ideals())),
            InstanceDocument::Pattern { group, pieces, ideals, .. } => {
                let g = CanonicalGroup::new(group.rank, group.torsion.iter().map(|t| t.0.clone()).collect());
                if g.generators() != group.rank + group.torsion.len() {
                    return Err(DocError::Schema("torsion orders must exceed 1".into()));
                }
                let pieces = pieces
                    .iter()
                    .map(|p| (p.region.eval(), p.value.iter().map(|v| v.0.clone()).collect()))
                    .collect();
                let x = PatternElement::new(g, pieces).map_err(|e| DocError::Validation { message: e.to_string(), cells: vec![] })?;
                Ok(Instance::Pattern(x, ideals.ideals()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::standard::torus;

    #[test]
    fn integers_are_strings() {
        let d = InstanceDocument::Complex { name: "t".into(), cells: cells_of(&torus()) };
        let json = d.to_json();
        assert!(json.contains("\"-1\""));
        assert_eq!(InstanceDocument::parse(&json).unwrap(), d);
        let bad = json.replacen("\"-1\"", "-1", 1);
        assert!(matches!(InstanceDocument::parse(&bad), Err(DocError::Schema(_))));
    }

    #[test]
    fn huge_coefficients_survive() {
        let big = "123456789012345678901234567890";
        let text = format!(
            r#"{{"kind":"complex","name":"c","cells":[{{"id":"v","dim":0}},{{"id":"e","dim":1,"boundary":[["v","{big}"],["v","-{big}"]]}}]}}"#
        );
        let d = InstanceDocument::parse(&text).unwrap();
        assert!(d.to_json().contains(big));
        assert!(matches!(d.build().unwrap(), Instance::Complex(_)));
    }

    #[test]
    fn invalid_boundary_names_cells() {
        let text = r#"{"kind":"complex","name":"bad","cells":[
            {"id":"v","dim":0},{"id":"w","dim":0},
            {"id":"e","dim":1,"boundary":[["w","1"],["v","-1"]]},
            {"id":"f","dim":2,"boundary":[["e","1"]]}]}"#;
        match InstanceDocument::parse(text).unwrap().build() {
            Err(DocError::Validation { cells, .. }) => assert_eq!(cells, vec!["f".to_string()]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unresolved_ids_are_schema_errors() {
        let text = r#"{"kind":"pair","name":"p","cells":[{"id":"v","dim":0}],"sub":["x"]}"#;
        assert!(matches!(InstanceDocument::parse(text).unwrap().build(), Err(DocError::Schema(_))));
        let text = r#"{"kind":"complex","name":"c","cells":[{"id":"e","dim":1,"boundary":[["v","1"]]}]}"#;
        assert!(matches!(InstanceDocument::parse(text).unwrap().build(), Err(DocError::Schema(_))));
    }
}
