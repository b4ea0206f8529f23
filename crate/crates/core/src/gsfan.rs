//! GS fans (a classical fan in `L` with `β : L → N`), folding them into
//! lattice KM fans, and unfolding KM fans along the colimit of their lattice
//! data.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::abelian::{cokernel, hom_kernel_cokernel, FgaGroup, GroupHom};
use crate::cones::{Cone, Location};
use crate::error::{Error, Result};
use crate::intlinalg::{primitive, rank, solve_integer, solve_rational, IntMatrix, IntVector};
use crate::kmfan::{atoroidal_split, rigidify, validate_hom, FreeSubgroup, KmFan, KmFanHom};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsFan {
    fan: KmFan,
    beta: GroupHom,
}

impl GsFan {
    /// `fan` must be classical over a lattice `L`; `β : L → N` a map of
    /// lattices with finite cokernel.
    pub fn new(fan: KmFan, beta: GroupHom) -> Result<GsFan> {
        if !fan.is_classical() {
            return Err(Error::InvalidArgument("the fan of a GS fan must be classical".into()));
        }
        if beta.source() != fan.group() {
            return Err(Error::DimensionMismatch("β must start at the fan's lattice".into()));
        }
        if !beta.target().is_lattice() {
            return Err(Error::NonLattice);
        }
        if !hom_kernel_cokernel(&beta).cokernel.is_finite() {
            return Err(Error::InfiniteCokernel);
        }
        Ok(GsFan { fan, beta })
    }

    pub fn fan(&self) -> &KmFan {
        &self.fan
    }

    pub fn beta(&self) -> &GroupHom {
        &self.beta
    }

    fn image(&self, i: usize) -> Cone {
        self.fan.cones()[i].image(self.beta.matrix()).expect("matching ranks")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoldViolation {
    /// `β_R` is not injective on the span of the cone.
    NotInjective { cone: usize },
    /// The images of two cones have overlapping relative interiors.
    Overlap { first: usize, second: usize },
}

impl fmt::Display for FoldViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoldViolation::NotInjective { cone } => write!(f, "β is not injective on cone {cone}"),
            FoldViolation::Overlap { first, second } => {
                write!(f, "the images of cones {first} and {second} overlap in their interiors")
            }
        }
    }
}

/// Empty when the GS fan can be folded.
pub fn fold_violations(g: &GsFan) -> Vec<FoldViolation> {
    let mut out = Vec::new();
    let m = g.beta.matrix();
    for (i, c) in g.fan.cones().iter().enumerate() {
        if rank(&m.mul(&c.span_sublattice()).expect("dimension")) != c.dim() {
            out.push(FoldViolation::NotInjective { cone: i });
        }
    }
    let images: Vec<Cone> = (0..g.fan.len()).map(|i| g.image(i)).collect();
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let meet = images[i].intersect(&images[j]).expect("same ambient");
            let p = meet.relative_interior_point();
            let interior = |c: &Cone| matches!(c.locate_int(&p), Ok(Location::Interior));
            if interior(&images[i]) && interior(&images[j]) {
                out.push(FoldViolation::Overlap { first: i, second: j });
            }
        }
    }
    out
}

pub fn is_foldable(g: &GsFan) -> bool {
    fold_violations(g).is_empty()
}

/// The lattice KM fan `(N, {β_R(σ)}, {β(L_σ)})` and the tame map `β` to it.
pub fn fold(g: &GsFan) -> Result<(KmFan, KmFanHom)> {
    if !is_foldable(g) {
        return Err(Error::NotFoldable);
    }
    let n = g.beta.target();
    let cones: Vec<Cone> = (0..g.fan.len()).map(|i| g.image(i)).collect();
    let data = g.fan.data().iter().map(|d| d.image(&g.beta)).collect::<Result<Vec<_>>>()?;
    let folded = KmFan::from_parts(n.clone(), cones, data)?.checked()?;
    let hom = validate_hom(&g.fan, &folded, &g.beta)?;
    Ok((folded, hom))
}

/// `L̃ = colim F_σ` with its structure maps and the induced `β : L̃ → N`.
#[derive(Clone, Debug)]
pub struct Unfolding {
    pub colimit: FgaGroup,
    /// `i_σ : F_σ → L̃`, with `F_σ` in the coordinates of its basis; indexed
    /// like the cones of the fan.
    pub structure_maps: Vec<GroupHom>,
    pub beta: GroupHom,
    /// `U(F)`: the cones `i(σ)` with data `i_σ(F_σ)`.
    pub fan: KmFan,
}

/// Coordinates of the elements of `sub` in the basis of `sup`.
fn basis_coordinates(sup: &FreeSubgroup, sub: &FreeSubgroup) -> Vec<IntVector> {
    let r = sup.ambient().free_rank();
    let pm = IntMatrix::from_cols(&sup.free_projections(), r);
    sub.free_projections()
        .iter()
        .map(|v| solve_integer(&pm, v).expect("dimension").expect("sublattice"))
        .collect()
}

pub fn lattice_data_colimit(fan: &KmFan) -> Unfolding {
    let data = fan.data();
    let dims: Vec<usize> = data.iter().map(FreeSubgroup::rank).collect();
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    let total: usize = dims.iter().sum();
    // One relation per basis vector of F_τ and per pair τ < σ.
    let mut rels: Vec<IntVector> = Vec::new();
    for s in 0..fan.len() {
        for t in fan.faces_of(s) {
            if t == s {
                continue;
            }
            for (k, coords) in basis_coordinates(&data[s], &data[t]).into_iter().enumerate() {
                let mut rel = vec![BigInt::zero(); total];
                for (j, x) in coords.into_iter().enumerate() {
                    rel[offsets[s] + j] = x;
                }
                rel[offsets[t] + k] -= BigInt::one();
                rels.push(rel);
            }
        }
    }
    let cok = cokernel(&IntMatrix::from_cols(&rels, total));
    let colimit = cok.group.clone();
    let structure_maps: Vec<GroupHom> = (0..fan.len())
        .map(|s| {
            let cols: Vec<usize> = (offsets[s]..offsets[s] + dims[s]).collect();
            GroupHom::new(FgaGroup::lattice(dims[s]), colimit.clone(), cok.proj.select_cols(&cols))
                .expect("map out of a lattice")
        })
        .collect();
    let all: Vec<IntVector> = data.iter().flat_map(|d| d.basis().iter().cloned()).collect();
    let b = IntMatrix::from_cols(&all, fan.group().dim());
    let beta = GroupHom::new(colimit.clone(), fan.group().clone(), b.mul(&cok.lift).expect("dimension"))
        .expect("relations map to zero in N");
    let unfolded = unfolded_fan(fan, &colimit, &structure_maps);
    Unfolding { colimit, structure_maps, beta, fan: unfolded }
}

fn unfolded_fan(fan: &KmFan, colimit: &FgaGroup, maps: &[GroupHom]) -> KmFan {
    let rt = colimit.free_rank();
    let r = fan.rank();
    let mut cones = Vec::new();
    let mut data = Vec::new();
    for (s, (c, d)) in fan.cones().iter().zip(fan.data()).enumerate() {
        let pm = IntMatrix::from_cols(&d.free_projections(), r);
        let im = maps[s].free_matrix();
        let rays: Vec<IntVector> = c
            .rays()
            .iter()
            .map(|v| {
                let x = solve_rational(&pm, v).expect("dimension").expect("ray in the span");
                let y = clear_denominators(&x);
                im.mul_vec(&y).expect("dimension")
            })
            .collect();
        cones.push(Cone::from_generators(&rays, rt).expect("rank"));
        data.push(FreeSubgroup::new(colimit, &maps[s].images()).expect("elements of the colimit"));
    }
    KmFan::from_parts(colimit.clone(), cones, data)
        .and_then(KmFan::checked)
        .expect("the unfolding is a KM fan")
}

fn clear_denominators(x: &[BigRational]) -> IntVector {
    let l = x.iter().fold(BigInt::one(), |l, q| num_integer::lcm(l, q.denom().clone()));
    primitive(&x.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect::<Vec<_>>())
}

/// `U(F)` and the semi-tame map `β : U(F) → F`.
pub fn unfold(fan: &KmFan) -> (KmFan, KmFanHom) {
    let u = lattice_data_colimit(fan);
    let hom = validate_hom(&u.fan, fan, &u.beta).expect("β maps the unfolding onto the fan");
    (u.fan, hom)
}

/// `U^rig(F)`, with `β̄ : U^rig(F) → F` when `N` is a lattice.
pub fn rigidified_unfold(fan: &KmFan) -> (KmFan, Option<KmFanHom>) {
    let u = lattice_data_colimit(fan);
    let rig = rigidify(&u.fan).fan;
    if !fan.group().is_lattice() {
        return (rig, None);
    }
    let k = u.colimit.free_rank();
    let free: Vec<usize> = (0..k).collect();
    let bbar = GroupHom::new(rig.group().clone(), fan.group().clone(), u.beta.matrix().select_cols(&free))
        .expect("map of lattices");
    let hom = validate_hom(&rig, fan, &bbar).expect("β̄ maps the rigidified unfolding onto the fan");
    (rig, Some(hom))
}

/// Whether every `ī_σ : F_σ → L̄̃` is saturated, computed on the atoroidal
/// part of the fan.
pub fn is_gs_representable(fan: &KmFan) -> Result<bool> {
    if !fan.group().is_lattice() {
        return Err(Error::NonLattice);
    }
    let g = atoroidal_split(fan)?.atoroidal;
    let u = lattice_data_colimit(&g);
    Ok(u.structure_maps.iter().all(|i| cokernel(&i.free_matrix()).group.is_lattice()))
}

/// Folds `(U^rig(F), β̄)` and compares with `F`.
pub fn fold_unfold_roundtrip(fan: &KmFan) -> Result<bool> {
    if !fan.group().is_lattice() {
        return Err(Error::PreconditionsFail("the fan's group has torsion".into()));
    }
    if !fan.is_atoroidal() {
        return Err(Error::PreconditionsFail("the fan is not atoroidal".into()));
    }
    if !is_gs_representable(fan)? {
        return Err(Error::PreconditionsFail("the fan is not GS representable".into()));
    }
    let (rig, bbar) = rigidified_unfold(fan);
    let bbar = bbar.expect("lattice fan");
    let g = GsFan::new(rig, bbar.hom().clone())?;
    let (folded, _) = fold(&g)?;
    Ok(&folded == fan)
}
