use num_bigint::BigInt;

use super::{torsion_map, FreeSubgroup, KmFan, KmFanHom};
use crate::abelian::{dd_of_hom, hom_kernel_cokernel, quotient, FgaGroup, GroupHom, Subgroup};
use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::intlinalg::{complement_basis, IntMatrix, IntVector};
use crate::monoids::{dual_monoid, AffineMonoid};

/// The torus orbit of one cone: `N/F_σ ≅ Z^k ⊕ (isotropy)`; the band is
/// `E(isotropy)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumInfo {
    pub cone: Cone,
    pub torus_rank: usize,
    pub isotropy: FgaGroup,
    pub band: FgaGroup,
}

pub fn strata(fan: &KmFan) -> Vec<StratumInfo> {
    fan.cones()
        .iter()
        .zip(fan.data())
        .map(|(c, d)| {
            let q = quotient(fan.group(), &d.subgroup()).expect("subgroup of N");
            let isotropy = q.group.torsion_subgroup();
            StratumInfo {
                cone: c.clone(),
                torus_rank: q.group.free_rank(),
                band: crate::abelian::ext_group(&isotropy),
                isotropy,
            }
        })
        .collect()
}

/// `(N/F_σ)_tor`.
pub fn isotropy(fan: &KmFan, sigma: &Cone) -> Result<FgaGroup> {
    let i = fan.cone_index(sigma).ok_or(Error::ConeNotInFan)?;
    Ok(quotient(fan.group(), &fan.data()[i].subgroup())?.group.torsion_subgroup())
}

/// `N / Σ F_σ`.
pub fn fundamental_group(fan: &KmFan) -> FgaGroup {
    let gens: Vec<IntVector> = fan.data().iter().flat_map(|d| d.basis().iter().cloned()).collect();
    let h = Subgroup::new(fan.group().clone(), gens).expect("elements of N");
    quotient(fan.group(), &h).expect("subgroup of N").group
}

/// `L ⊆ N` torsion-free of finite index with `L ∩ Span σ = F_σ`.
pub fn is_lifting(fan: &KmFan, sigma: &Cone, l: &FreeSubgroup) -> Result<bool> {
    let i = fan.cone_index(sigma).ok_or(Error::ConeNotInFan)?;
    if l.ambient() != fan.group() {
        return Err(Error::DimensionMismatch("lifting in another group".into()));
    }
    Ok(l.is_torsion_free() && l.rank() == fan.rank() && l.restrict_to_span(sigma) == fan.data()[i])
}

/// `F_σ` plus a complement of `Span σ ∩ N̄` placed in the free coordinates.
pub fn construct_lifting(fan: &KmFan, sigma: &Cone) -> Result<FreeSubgroup> {
    let i = fan.cone_index(sigma).ok_or(Error::ConeNotInFan)?;
    let n = fan.group();
    let mut gens = fan.data()[i].basis().to_vec();
    for c in complement_basis(&sigma.span_sublattice()).col_vectors() {
        let mut x = c;
        x.resize(n.dim(), BigInt::from(0));
        gens.push(x);
    }
    FreeSubgroup::new(n, &gens)
}

/// A lifting of `F_σ` compatible with a lifting `L'` of the image cone:
/// `f⁻¹(L')` when the torsion map of `σ` is injective, otherwise
/// `L'' ∩ f⁻¹(L')` for a constructed lifting `L''`. `None` when `L'` is not
/// a lifting.
pub fn compatible_lifting(f: &KmFanHom, sigma: &Cone, lp: &FreeSubgroup) -> Result<Option<FreeSubgroup>> {
    let i = f.source().cone_index(sigma).ok_or(Error::ConeNotInFan)?;
    let tau = &f.target().cones()[f.cone_images()[i]];
    if !is_lifting(f.target(), tau, lp)? {
        return Ok(None);
    }
    let pre = lp.preimage(f.hom())?;
    let kc = hom_kernel_cokernel(&torsion_map(f, i));
    if kc.kernel.as_group().0.is_lattice() && is_lifting(f.source(), sigma, &pre)? {
        return Ok(Some(pre));
    }
    let own = construct_lifting(f.source(), sigma)?;
    Ok(Some(own.intersect(&pre)?))
}

/// The local model `[U_σ(L) / (N/L)]` of one cone.
#[derive(Clone, Debug)]
pub struct LocalPresentation {
    pub cone: Cone,
    pub lifting: FreeSubgroup,
    /// `σ` in the coordinates of the lifting's basis.
    pub local_cone: Cone,
    /// `σ∨ ∩ L∨` in the dual basis of the lifting.
    pub monoid: AffineMonoid,
    pub monoid_generators: Vec<IntVector>,
    /// `E(N/L)`.
    pub stabilizer: FgaGroup,
    /// `L∨ → E(N/L)`, the connecting map of `0 → L → N → N/L → 0`.
    pub action: GroupHom,
}

pub fn local_presentation(fan: &KmFan, sigma: &Cone) -> Result<LocalPresentation> {
    let lifting = construct_lifting(fan, sigma)?;
    local_presentation_with_lifting(fan, sigma, lifting)
}

/// Local presentation with a caller-chosen lifting.
pub fn local_presentation_with_lifting(fan: &KmFan, sigma: &Cone, lifting: FreeSubgroup) -> Result<LocalPresentation> {
    if !is_lifting(fan, sigma, &lifting)? {
        return Err(Error::InvalidArgument("not a lifting of the cone".into()));
    }
    let r = fan.rank();
    let b = IntMatrix::from_cols(&lifting.free_projections(), r);
    let local_cone = sigma.preimage(&b)?;
    let monoid = dual_monoid(&local_cone, r)?;
    let monoid_generators = monoid.hilbert_basis();
    let l_group = FgaGroup::lattice(r);
    let incl = GroupHom::new(l_group, fan.group().clone(), IntMatrix::from_cols(lifting.basis(), fan.group().dim()))?;
    let dd = dd_of_hom(&incl)?;
    Ok(LocalPresentation {
        cone: sigma.clone(),
        lifting,
        local_cone,
        monoid,
        monoid_generators,
        stabilizer: dd.group.clone(),
        action: dd.source_dual_to_d,
    })
}
