//! JSON documents for fans and group maps.
//!
//! Integers whose magnitude fits in 53 bits are written as JSON numbers and
//! everything larger as decimal strings. Both forms are accepted on input.

use std::fmt;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::abelian::{FgaGroup, GroupHom};
use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::intlinalg::{IntMatrix, IntVector};
use crate::kmfan::{from_classical, FreeSubgroup, KmFan};

pub const SCHEMA_VERSION: &str = "1";

/// An arbitrary precision integer in JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.bits() <= 53 {
            s.serialize_i64(i64::try_from(&self.0).expect("53 bits fit"))
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Int, D::Error> {
        struct IntVisitor;
        impl Visitor<'_> for IntVisitor {
            type Value = Int;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Int, E> {
                v.trim().parse::<BigInt>().map(Int).map_err(|_| E::custom(format!("bad integer {v:?}")))
            }
        }
        d.deserialize_any(IntVisitor)
    }
}

pub fn ints(v: &[BigInt]) -> Vec<Int> {
    v.iter().cloned().map(Int).collect()
}

fn big(v: &[Int]) -> IntVector {
    v.iter().map(|x| x.0.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion_invariants: Vec<Int>,
}

impl GroupDoc {
    pub fn of(g: &FgaGroup) -> GroupDoc {
        GroupDoc { free_rank: g.free_rank(), torsion_invariants: ints(g.torsion_invariants()) }
    }

    pub fn to_group(&self) -> Result<FgaGroup> {
        FgaGroup::new(self.free_rank, big(&self.torsion_invariants))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDoc {
    pub rays: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumDoc {
    pub cone_index: usize,
    pub generators: Vec<Vec<Int>>,
}

/// One fan per document. Rays live in the free coordinates of `N`; lattice
/// generators in the full coordinates (free part first, then one coordinate
/// per torsion invariant). When `lattice_data` is absent and `N` is a
/// lattice, the fan is read as classical and closed under faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub schema_version: String,
    pub group: GroupDoc,
    pub cones: Vec<ConeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_data: Option<Vec<DatumDoc>>,
}

impl FanDocument {
    pub fn of(fan: &KmFan) -> FanDocument {
        FanDocument {
            schema_version: SCHEMA_VERSION.into(),
            group: GroupDoc::of(fan.group()),
            cones: fan.cones().iter().map(|c| ConeDoc { rays: c.generators().iter().map(|r| ints(r)).collect() }).collect(),
            lattice_data: Some(
                fan.data()
                    .iter()
                    .enumerate()
                    .map(|(i, d)| DatumDoc { cone_index: i, generators: d.basis().iter().map(|g| ints(g)).collect() })
                    .collect(),
            ),
        }
    }

    /// Builds the fan without checking the axioms; run
    /// [`crate::kmfan::validate`] on the result.
    pub fn to_fan(&self) -> Result<KmFan> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidArgument(format!("unsupported schema_version {:?}", self.schema_version)));
        }
        let group = self.group.to_group()?;
        let r = group.free_rank();
        let mut cones = Vec::with_capacity(self.cones.len());
        for (i, c) in self.cones.iter().enumerate() {
            let rays: Vec<IntVector> = c.rays.iter().map(|v| big(v)).collect();
            if rays.iter().any(|v| v.len() != r) {
                return Err(Error::DimensionMismatch(format!("cone {i} has a ray of the wrong length")));
            }
            cones.push(Cone::from_generators(&rays, r)?);
        }
        let Some(entries) = &self.lattice_data else {
            if !group.is_lattice() {
                return Err(Error::InvalidArgument("lattice_data is required when N has torsion".into()));
            }
            return from_classical(&group, &cones);
        };
        let mut gens: Vec<Option<Vec<IntVector>>> = vec![None; cones.len()];
        for e in entries {
            let slot = gens
                .get_mut(e.cone_index)
                .ok_or_else(|| Error::InvalidArgument(format!("cone_index {} is out of range", e.cone_index)))?;
            if slot.is_some() {
                return Err(Error::InvalidArgument(format!("cone {} has two lattice data", e.cone_index)));
            }
            let g: Vec<IntVector> = e.generators.iter().map(|v| big(v)).collect();
            if g.iter().any(|v| v.len() != group.dim()) {
                return Err(Error::DimensionMismatch(format!("a generator for cone {} has the wrong length", e.cone_index)));
            }
            *slot = Some(g);
        }
        let data = gens
            .into_iter()
            .enumerate()
            .map(|(i, g)| {
                let g = g.ok_or_else(|| Error::InvalidArgument(format!("cone {i} has no lattice data")))?;
                FreeSubgroup::new(&group, &g)
            })
            .collect::<Result<Vec<_>>>()?;
        KmFan::from_parts(group, cones, data)
    }
}

pub fn parse_fan(text: &str) -> Result<KmFan> {
    let doc: FanDocument = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    doc.to_fan()
}

/// Pretty printed document with a trailing newline. Integer vectors stay on
/// one line.
pub fn serialize_fan(fan: &KmFan) -> String {
    let pretty = serde_json::to_string_pretty(&FanDocument::of(fan)).expect("documents serialize");
    let lines: Vec<&str> = pretty.lines().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < lines.len() {
        let l = lines[i];
        if l.ends_with('[') {
            let close = (i + 1..lines.len()).find(|&j| !is_scalar_line(lines[j]));
            if let Some(j) = close.filter(|&j| j > i + 1 && lines[j].trim_start().starts_with(']')) {
                let items: Vec<&str> = lines[i + 1..j].iter().map(|x| x.trim().trim_end_matches(',')).collect();
                out.push_str(&format!("{}{}]{}\n", l, items.join(", "), &lines[j].trim_start()[1..]));
                i = j + 1;
                continue;
            }
        }
        out.push_str(l);
        out.push('\n');
        i += 1;
    }
    out
}

fn is_scalar_line(l: &str) -> bool {
    let t = l.trim().trim_end_matches(',');
    !t.is_empty() && !t.contains(['[', ']', '{', '}', ':'])
}

/// A group map between the groups of two fan documents. `source` and
/// `target` are paths relative to the directory of the hom document; the
/// matrix has one row per coordinate of the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDocument {
    pub schema_version: String,
    pub source: String,
    pub target: String,
    pub matrix: Vec<Vec<Int>>,
}

impl HomDocument {
    pub fn resolve(&self, hom_path: &Path) -> (PathBuf, PathBuf) {
        let dir = hom_path.parent().unwrap_or(Path::new(""));
        (dir.join(&self.source), dir.join(&self.target))
    }

    pub fn to_hom(&self, source: &FgaGroup, target: &FgaGroup) -> Result<GroupHom> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidArgument(format!("unsupported schema_version {:?}", self.schema_version)));
        }
        let rows: Vec<IntVector> = self.matrix.iter().map(|r| big(r)).collect();
        if rows.len() != target.dim() || rows.iter().any(|r| r.len() != source.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "matrix must be {}x{} for a map {source} -> {target}",
                target.dim(),
                source.dim()
            )));
        }
        GroupHom::new(source.clone(), target.clone(), IntMatrix::from_rows(&rows, source.dim()))
    }
}

pub fn matrix_rows(m: &IntMatrix) -> Vec<Vec<Int>> {
    m.row_vectors().iter().map(|r| ints(r)).collect()
}
