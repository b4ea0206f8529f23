//! KM fans: fans over a finitely generated abelian group with a lattice datum
//! on every cone.

mod constructions;
mod datum;
mod invariants;
mod morphisms;

use std::fmt;

use num_bigint::BigInt;

use crate::abelian::FgaGroup;
use crate::cones::{canonical_order, Cone};
use crate::error::{Error, Result};
use crate::intlinalg::IntVector;

pub use constructions::{
    atoroidal_split, canonical_resolution, coarse_fan, contract, dilate, from_classical, from_monoids,
    inflate, monoid_presentation, pairing, product, rigidify, roots, star, transport, zero_fan,
    zero_fan_map, AtoroidalSplit, CoarseFan, MonoidDatum, Product, Rigidification,
};
pub use datum::{FreeSubgroup, LatticeDatum};
pub use invariants::{
    compatible_lifting, construct_lifting, fundamental_group, is_lifting, isotropy, local_presentation,
    local_presentation_with_lifting,
    strata, LocalPresentation, StratumInfo,
};
pub use morphisms::{
    has_reduced_fibers, is_equidimensional, is_proper, is_representable, is_semi_tame, is_tame,
    torsion_map, torsor_group, validate_hom, HomRefusal, KmFanHom,
};

/// A KM fan. Cones live in `N̄_R = R^{free rank}`; `data[i]` is the lattice
/// `F_σ` of `cones[i]`, a subgroup of `N`. Cones are kept in canonical
/// order, so two fans are equal exactly when they have the same cones and
/// data.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KmFan {
    group: FgaGroup,
    cones: Vec<Cone>,
    data: Vec<FreeSubgroup>,
}

/// One reason a candidate fan fails the axioms. Indices refer to the cone
/// list after canonical sorting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyFan,
    DimensionMismatch { cone: usize },
    NonSharp { cone: usize },
    Duplicate { cone: usize },
    MissingFace { cone: usize, face: Cone },
    BadIntersection { first: usize, second: usize },
    NotTorsionFree { cone: usize },
    NotInSpan { cone: usize },
    InfiniteIndex { cone: usize, rank: usize, dim: usize },
    Incompatible { cone: usize, face: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyFan => write!(f, "the fan has no cones"),
            Violation::DimensionMismatch { cone } => write!(f, "cone {cone} lives in the wrong space"),
            Violation::NonSharp { cone } => write!(f, "cone {cone} is not sharp"),
            Violation::Duplicate { cone } => write!(f, "cone {cone} is listed twice"),
            Violation::MissingFace { cone, face } => write!(f, "a face {face:?} of cone {cone} is missing"),
            Violation::BadIntersection { first, second } => {
                write!(f, "cones {first} and {second} do not meet in a common face")
            }
            Violation::NotTorsionFree { cone } => write!(f, "the lattice of cone {cone} has torsion"),
            Violation::NotInSpan { cone } => write!(f, "the lattice of cone {cone} leaves the span of the cone"),
            Violation::InfiniteIndex { cone, rank, dim } => {
                write!(f, "the lattice of cone {cone} has rank {rank} but the cone has dimension {dim}")
            }
            Violation::Incompatible { cone, face } => {
                write!(f, "the lattice of face {face} is not the restriction of the lattice of cone {cone}")
            }
        }
    }
}

impl fmt::Debug for KmFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "KmFan over {}", self.group)?;
        for (c, d) in self.cones.iter().zip(&self.data) {
            writeln!(f, "  {c:?}  {d:?}")?;
        }
        Ok(())
    }
}

impl KmFan {
    /// Canonicalizes without checking the axioms; see [`validate`].
    pub fn from_parts(group: FgaGroup, cones: Vec<Cone>, data: Vec<FreeSubgroup>) -> Result<KmFan> {
        if cones.len() != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} cones but {} lattice data",
                cones.len(),
                data.len()
            )));
        }
        if data.iter().any(|d| d.ambient() != &group) {
            return Err(Error::DimensionMismatch("lattice datum in another group".into()));
        }
        let mut pairs: Vec<(Cone, FreeSubgroup)> = cones.into_iter().zip(data).collect();
        pairs.sort_by(|a, b| canonical_order(&a.0, &b.0));
        let (cones, data) = pairs.into_iter().unzip();
        Ok(KmFan { group, cones, data })
    }

    /// Builds and validates a fan from cones and generators of their lattices.
    pub fn new(group: FgaGroup, cones: Vec<Cone>, lattice_gens: Vec<Vec<IntVector>>) -> Result<KmFan> {
        let data = lattice_gens
            .iter()
            .map(|g| FreeSubgroup::new(&group, g))
            .collect::<Result<Vec<_>>>()?;
        let fan = KmFan::from_parts(group, cones, data)?;
        fan.checked()
    }

    pub(crate) fn checked(self) -> Result<KmFan> {
        let v = validate(&self);
        if let Some(first) = v.first() {
            return Err(Error::InvalidFan(first.to_string()));
        }
        Ok(self)
    }

    pub fn group(&self) -> &FgaGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.free_rank()
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn data(&self) -> &[FreeSubgroup] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn cone_index(&self, c: &Cone) -> Option<usize> {
        self.cones.binary_search_by(|x| canonical_order(x, c)).ok()
    }

    pub fn datum_of(&self, c: &Cone) -> Option<&FreeSubgroup> {
        self.cone_index(c).map(|i| &self.data[i])
    }

    /// Indices of the one-dimensional cones.
    pub fn rays(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.cones[i].dim() == 1).collect()
    }

    /// Generator of `F_ρ` pointing into the ray `ρ`.
    pub fn ray_generator(&self, i: usize) -> Option<IntVector> {
        self.data[i].ray_generator(&self.cones[i])
    }

    pub fn maximal_cones(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                !(0..self.len()).any(|j| j != i && self.cones[j].dim() > self.cones[i].dim()
                    && self.cones[i].is_face_of(&self.cones[j]))
            })
            .collect()
    }

    /// Indices of the faces of cone `i` (including `i`).
    pub fn faces_of(&self, i: usize) -> Vec<usize> {
        self.cones[i].faces().iter().filter_map(|f| self.cone_index(f)).collect()
    }

    /// The smallest cone containing a point of `N̄_R`.
    pub fn minimal_cone_containing(&self, v: &[BigInt]) -> Option<usize> {
        (0..self.len())
            .filter(|&i| self.cones[i].contains_point(v))
            .min_by_key(|&i| self.cones[i].dim())
    }

    /// The smallest cone containing a cone.
    pub fn minimal_cone_containing_cone(&self, c: &Cone) -> Option<usize> {
        (0..self.len())
            .filter(|&i| self.cones[i].contains_cone(c))
            .min_by_key(|&i| self.cones[i].dim())
    }

    /// True when the ambient group is a lattice and every `F_σ = Span σ ∩ N`.
    pub fn is_classical(&self) -> bool {
        self.group.is_lattice()
            && self.cones.iter().zip(&self.data).all(|(c, d)| {
                let sat = FreeSubgroup::new(&self.group, &c.span_sublattice().col_vectors()).expect("lattice");
                &sat == d
            })
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(Cone::is_simplicial)
    }

    /// Every monoid `P_σ` is free.
    pub fn is_smooth(&self) -> bool {
        monoid_presentation(self).iter().all(|m| m.monoid.is_sharp() && crate::monoids::is_free_monoid(&m.monoid).unwrap_or(false))
    }

    /// The lattices `F_σ` together generate a finite-index subgroup of `N`.
    pub fn is_atoroidal(&self) -> bool {
        let gens: Vec<IntVector> = self.data.iter().flat_map(|d| d.free_projections()).collect();
        crate::intlinalg::rank(&crate::intlinalg::IntMatrix::from_cols(&gens, self.rank())) == self.rank()
    }

    /// Every maximal cone is full-dimensional.
    pub fn is_nondegenerate(&self) -> bool {
        self.maximal_cones().iter().all(|&i| self.cones[i].dim() == self.rank())
    }

    /// Membership in the fine support `∪ (F_σ ∩ σ)`.
    pub fn support_contains(&self, n: &[BigInt]) -> Result<bool> {
        let n = self.group.element(n)?;
        let r = self.rank();
        Ok(self
            .cones
            .iter()
            .zip(&self.data)
            .any(|(c, d)| c.contains_point(&n[..r]) && d.contains(&n)))
    }

    /// Membership of `n̄ ∈ N̄` in the coarse support `∪ σ`.
    pub fn coarse_support_contains(&self, v: &[BigInt]) -> Result<bool> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} in rank {}",
                v.len(),
                self.rank()
            )));
        }
        Ok(self.cones.iter().any(|c| c.contains_point(v)))
    }
}

/// All violated axioms, in a deterministic order.
pub fn validate(fan: &KmFan) -> Vec<Violation> {
    let mut out = Vec::new();
    let r = fan.rank();
    if fan.cones.is_empty() {
        out.push(Violation::EmptyFan);
        return out;
    }
    for (i, c) in fan.cones.iter().enumerate() {
        if c.ambient_rank() != r {
            out.push(Violation::DimensionMismatch { cone: i });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (i, c) in fan.cones.iter().enumerate() {
        if !c.is_sharp() {
            out.push(Violation::NonSharp { cone: i });
        }
        if i > 0 && &fan.cones[i - 1] == c {
            out.push(Violation::Duplicate { cone: i });
        }
    }
    for (i, c) in fan.cones.iter().enumerate() {
        for f in c.faces() {
            if fan.cone_index(&f).is_none() {
                out.push(Violation::MissingFace { cone: i, face: f });
            }
        }
    }
    for i in 0..fan.len() {
        for j in i + 1..fan.len() {
            let (a, b) = (&fan.cones[i], &fan.cones[j]);
            let m = a.intersect(b).expect("same ambient");
            if !(m.is_face_of(a) && m.is_face_of(b)) {
                out.push(Violation::BadIntersection { first: i, second: j });
            }
        }
    }
    for (i, (c, d)) in fan.cones.iter().zip(&fan.data).enumerate() {
        if !d.is_torsion_free() {
            out.push(Violation::NotTorsionFree { cone: i });
            continue;
        }
        let eq = c.equations();
        if d.free_projections().iter().any(|p| eq.iter().any(|e| crate::intlinalg::dot(e, p) != BigInt::from(0))) {
            out.push(Violation::NotInSpan { cone: i });
            continue;
        }
        if d.rank() != c.dim() {
            out.push(Violation::InfiniteIndex { cone: i, rank: d.rank(), dim: c.dim() });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (i, c) in fan.cones.iter().enumerate() {
        for f in c.faces() {
            let j = fan.cone_index(&f).expect("faces checked");
            if j != i && fan.data[i].restrict_to_span(&f) != fan.data[j] {
                out.push(Violation::Incompatible { cone: i, face: j });
            }
        }
    }
    out
}
