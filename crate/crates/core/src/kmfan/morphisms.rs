use std::fmt;

use super::KmFan;
use crate::abelian::{dd_of_hom, hom_kernel_cokernel, is_tame_hom, quotient, FgaGroup, GroupHom};
use crate::cones::{union_covers, Cone};
use crate::error::{Error, Result};
use crate::intlinalg::rank;

/// A map of KM fans: a group map `f : N → N'` sending each cone into a cone
/// and each `F_σ` into the lattice of that cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmFanHom {
    source: KmFan,
    target: KmFan,
    hom: GroupHom,
    /// For each source cone, the smallest target cone containing its image.
    cone_images: Vec<usize>,
}

/// Why a group map is not a map of KM fans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomRefusal {
    pub cone: Option<usize>,
    pub reason: String,
}

impl fmt::Display for HomRefusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cone {
            Some(c) => write!(f, "cone {c}: {}", self.reason),
            None => write!(f, "{}", self.reason),
        }
    }
}

impl From<HomRefusal> for Error {
    fn from(r: HomRefusal) -> Error {
        Error::InvalidMorphism(r.to_string())
    }
}

pub fn validate_hom(source: &KmFan, target: &KmFan, hom: &GroupHom) -> Result<KmFanHom, HomRefusal> {
    if hom.source() != source.group() || hom.target() != target.group() {
        return Err(HomRefusal { cone: None, reason: "group map does not match the fans' groups".into() });
    }
    let m = hom.free_matrix();
    let mut cone_images = Vec::with_capacity(source.len());
    for (i, (c, d)) in source.cones().iter().zip(source.data()).enumerate() {
        let img = c.image(&m).expect("matching ranks");
        let Some(t) = target.minimal_cone_containing_cone(&img) else {
            return Err(HomRefusal { cone: Some(i), reason: "image of the cone lies in no cone of the target".into() });
        };
        let ft = &target.data()[t];
        if d.basis().iter().any(|g| !ft.contains(&hom.apply(g))) {
            return Err(HomRefusal { cone: Some(i), reason: "image of the lattice leaves the target lattice".into() });
        }
        cone_images.push(t);
    }
    Ok(KmFanHom { source: source.clone(), target: target.clone(), hom: hom.clone(), cone_images })
}

impl KmFanHom {
    pub fn source(&self) -> &KmFan {
        &self.source
    }

    pub fn target(&self) -> &KmFan {
        &self.target
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn cone_images(&self) -> &[usize] {
        &self.cone_images
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &KmFanHom) -> Result<KmFanHom> {
        if self.target != other.source {
            return Err(Error::InvalidMorphism("maps do not compose".into()));
        }
        Ok(validate_hom(&self.source, &other.target, &self.hom.then(&other.hom)?)?)
    }

    fn image_cone(&self, i: usize) -> Cone {
        self.source.cones()[i].image(&self.hom.free_matrix()).expect("matching ranks")
    }
}

fn require_finite_cokernel(f: &KmFanHom) -> Result<()> {
    if !hom_kernel_cokernel(&f.hom).cokernel.is_finite() {
        return Err(Error::InfiniteCokernel);
    }
    Ok(())
}

/// Each cone maps onto a cone of the target.
pub fn is_equidimensional(f: &KmFanHom) -> Result<bool> {
    require_finite_cokernel(f)?;
    Ok((0..f.source.len()).all(|i| f.image_cone(i) == f.target.cones()[f.cone_images[i]]))
}

/// For an equidimensional map, whether each `F_σ` maps onto `F'_{σ'}`;
/// `None` when the map is not equidimensional.
pub fn has_reduced_fibers(f: &KmFanHom) -> Result<Option<bool>> {
    if !is_equidimensional(f)? {
        return Ok(None);
    }
    Ok(Some((0..f.source.len()).all(|i| {
        let img = f.source.data()[i].image(&f.hom).expect("source group");
        img == f.target.data()[f.cone_images[i]]
    })))
}

/// Cones correspond bijectively, `f_R` is injective on each cone, and each
/// `F_σ → F'_{σ'}` is an isomorphism.
pub fn is_semi_tame(f: &KmFanHom) -> bool {
    let (s, t) = (&f.source, &f.target);
    if s.len() != t.len() {
        return false;
    }
    let mut seen = vec![false; t.len()];
    let m = f.hom.free_matrix();
    for i in 0..s.len() {
        let j = f.cone_images[i];
        if seen[j] || f.image_cone(i) != t.cones()[j] {
            return false;
        }
        seen[j] = true;
        let c = &s.cones()[i];
        let span = c.span_sublattice();
        if rank(&m.mul(&span).expect("dimension")) != c.dim() {
            return false;
        }
        let img = s.data()[i].image(&f.hom).expect("source group");
        if img != t.data()[j] || img.rank() != s.data()[i].rank() {
            return false;
        }
    }
    true
}

pub fn is_tame(f: &KmFanHom) -> bool {
    is_semi_tame(f) && is_tame_hom(&f.hom)
}

/// `D(f)` for a tame map.
pub fn torsor_group(f: &KmFanHom) -> Result<FgaGroup> {
    if !is_tame(f) {
        return Err(Error::NotTame);
    }
    Ok(dd_of_hom(&f.hom)?.group)
}

/// The induced map `N/F_σ → N'/F'_{σ'}` for source cone `i`.
pub fn torsion_map(f: &KmFanHom, i: usize) -> GroupHom {
    let q = quotient(f.source.group(), &f.source.data()[i].subgroup()).expect("subgroup of N");
    let qt = quotient(f.target.group(), &f.target.data()[f.cone_images[i]].subgroup()).expect("subgroup of N'");
    let m = qt
        .proj
        .matrix()
        .mul(f.hom.matrix())
        .and_then(|x| x.mul(&q.lift))
        .expect("dimension");
    GroupHom::new(q.group, qt.group, m).expect("well defined on the quotient")
}

/// Every `(N/F_σ)_tor → (N'/F'_{σ'})_tor` is injective.
pub fn is_representable(f: &KmFanHom) -> bool {
    (0..f.source.len()).all(|i| {
        let kc = hom_kernel_cokernel(&torsion_map(f, i));
        kc.kernel.as_group().0.is_lattice()
    })
}

/// For every maximal target cone `τ'`, the cones mapping into `τ'` cover
/// `f_R⁻¹(τ')`.
pub fn is_proper(f: &KmFanHom) -> Result<bool> {
    let m = f.hom.free_matrix();
    for j in f.target.maximal_cones() {
        let tau = &f.target.cones()[j];
        let pre = tau.preimage(&m)?;
        let pieces: Vec<Cone> = (0..f.source.len())
            .filter(|&i| tau.contains_cone(&f.image_cone(i)))
            .map(|i| f.source.cones()[i].clone())
            .collect();
        if !union_covers(&pre, &pieces)? {
            return Ok(false);
        }
    }
    Ok(true)
}
