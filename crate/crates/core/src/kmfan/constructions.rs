use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{validate_hom, FreeSubgroup, KmFan, KmFanHom};
use crate::abelian::{direct_sum, quotient, FgaGroup, GroupHom};
use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::intlinalg::{
    complement_basis, dot, saturate, unimodular_inverse, IntMatrix, IntVector,
};
use crate::monoids::AffineMonoid;

/// The classical fan of the given cones (closed under faces) over a lattice.
pub fn from_classical(group: &FgaGroup, cones: &[Cone]) -> Result<KmFan> {
    if !group.is_lattice() {
        return Err(Error::TorsionAmbient);
    }
    let r = group.free_rank();
    let mut all: HashSet<Cone> = HashSet::new();
    for c in cones {
        if c.ambient_rank() != r {
            return Err(Error::DimensionMismatch(format!(
                "cone in rank {} for a lattice of rank {r}",
                c.ambient_rank()
            )));
        }
        all.extend(c.faces());
    }
    if all.is_empty() {
        all.insert(Cone::zero(r));
    }
    let cones: Vec<Cone> = all.into_iter().collect();
    let data = cones
        .iter()
        .map(|c| FreeSubgroup::new(group, &c.span_sublattice().col_vectors()))
        .collect::<Result<Vec<_>>>()?;
    KmFan::from_parts(group.clone(), cones, data)?.checked()
}

/// The fan with the single cone `{0}`.
pub fn zero_fan(group: &FgaGroup) -> KmFan {
    let r = group.free_rank();
    KmFan::from_parts(group.clone(), vec![Cone::zero(r)], vec![FreeSubgroup::zero(group)])
        .expect("one cone, one datum")
}

/// The identity of `N`, viewed as a map from the zero fan into `fan`.
pub fn zero_fan_map(fan: &KmFan) -> Result<KmFanHom> {
    Ok(validate_hom(&zero_fan(fan.group()), fan, &GroupHom::identity(fan.group()))?)
}

#[derive(Clone, Debug)]
pub struct CoarseFan {
    pub fan: KmFan,
    /// `π : F → F̄`, the projection `N → N̄`.
    pub projection: KmFanHom,
}

/// The classical fan on `N̄` with the same cones.
pub fn coarse_fan(fan: &KmFan) -> CoarseFan {
    let nbar = FgaGroup::lattice(fan.rank());
    let coarse = from_classical(&nbar, fan.cones()).expect("cones of a fan form a fan");
    let pi = free_projection(fan.group());
    let projection = validate_hom(fan, &coarse, &pi).expect("projection respects the lattices");
    CoarseFan { fan: coarse, projection }
}

#[derive(Clone, Debug)]
pub struct Rigidification {
    pub fan: KmFan,
    /// `q : F → F^rig`, the projection `N → N̄`.
    pub quotient: KmFanHom,
}

/// The fan over `N̄` with the projected lattices `q(F_σ)`.
pub fn rigidify(fan: &KmFan) -> Rigidification {
    let nbar = FgaGroup::lattice(fan.rank());
    let q = free_projection(fan.group());
    let data: Vec<FreeSubgroup> = fan.data().iter().map(|d| d.image(&q).expect("source is N")).collect();
    let rig = KmFan::from_parts(nbar, fan.cones().to_vec(), data).expect("same cones");
    let quotient = validate_hom(fan, &rig, &q).expect("projection respects the lattices");
    Rigidification { fan: rig, quotient }
}

fn free_projection(n: &FgaGroup) -> GroupHom {
    let r = n.free_rank();
    let mut m = IntMatrix::zeros(r, n.dim());
    for i in 0..r {
        m[(i, i)] = BigInt::one();
    }
    GroupHom::new(n.clone(), FgaGroup::lattice(r), m).expect("projection onto the free part")
}

/// Replaces each `F_σ` by the lattice generated by `a_ρ g_ρ` over the rays of
/// `σ`, where `g_ρ` generates `F_ρ`. Requires a simplicial fan.
fn ray_scaled(fan: &KmFan, scale: &dyn Fn(usize) -> BigInt) -> Result<(KmFan, KmFanHom)> {
    let r = fan.rank();
    let gens_of_ray: HashMap<usize, IntVector> = fan
        .rays()
        .into_iter()
        .map(|i| {
            let g = fan.ray_generator(i).expect("rank one datum along its ray");
            (i, fan.group().scale(&scale(i), &g))
        })
        .collect();
    let data = fan
        .cones()
        .iter()
        .map(|c| {
            let gens: Vec<IntVector> = c
                .rays()
                .iter()
                .map(|v| {
                    let ray = Cone::from_generators(std::slice::from_ref(v), r).expect("ray");
                    gens_of_ray[&fan.cone_index(&ray).expect("rays of a fan cone are in the fan")].clone()
                })
                .collect();
            FreeSubgroup::new(fan.group(), &gens)
        })
        .collect::<Result<Vec<_>>>()?;
    let new = KmFan::from_parts(fan.group().clone(), fan.cones().to_vec(), data)?.checked()?;
    let hom = validate_hom(&new, fan, &GroupHom::identity(fan.group()))?;
    Ok((new, hom))
}

/// The root fan `aF` of a smooth fan. `a` holds one positive integer per ray,
/// in the order of [`KmFan::rays`].
pub fn roots(fan: &KmFan, a: &[BigInt]) -> Result<(KmFan, KmFanHom)> {
    if !fan.is_smooth() {
        return Err(Error::NotSmooth);
    }
    let rays = fan.rays();
    if a.len() != rays.len() {
        return Err(Error::DimensionMismatch(format!("{} multipliers for {} rays", a.len(), rays.len())));
    }
    if a.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidArgument("root multipliers must be positive".into()));
    }
    let by_ray: HashMap<usize, BigInt> = rays.into_iter().zip(a.iter().cloned()).collect();
    ray_scaled(fan, &|i| by_ray[&i].clone())
}

/// The canonical smooth refinement of the lattices of a simplicial fan.
pub fn canonical_resolution(fan: &KmFan) -> Result<(KmFan, KmFanHom)> {
    if !fan.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    ray_scaled(fan, &|_| BigInt::one())
}

/// `aF`: every lattice scaled by `a`.
pub fn dilate(fan: &KmFan, a: &BigInt) -> Result<(KmFan, KmFanHom)> {
    if !a.is_positive() {
        return Err(Error::InvalidArgument("dilation factor must be positive".into()));
    }
    let data = fan.data().iter().map(|d| d.scaled(a)).collect();
    let new = KmFan::from_parts(fan.group().clone(), fan.cones().to_vec(), data)?.checked()?;
    let hom = validate_hom(&new, fan, &GroupHom::identity(fan.group()))?;
    Ok((new, hom))
}

fn check_finite_index(i: &GroupHom) -> Result<()> {
    let kc = crate::abelian::hom_kernel_cokernel(i);
    if !i.is_injective() || !kc.cokernel.is_finite() {
        return Err(Error::NotFiniteIndex);
    }
    Ok(())
}

/// Pushes `fan` along a finite-index inclusion `i : N → N'`.
pub fn inflate(fan: &KmFan, i: &GroupHom) -> Result<(KmFan, KmFanHom)> {
    if i.source() != fan.group() {
        return Err(Error::DimensionMismatch("inclusion must start at the fan's group".into()));
    }
    check_finite_index(i)?;
    let m = i.free_matrix();
    let cones = fan.cones().iter().map(|c| c.image(&m)).collect::<Result<Vec<_>>>()?;
    let data = fan.data().iter().map(|d| d.image(i)).collect::<Result<Vec<_>>>()?;
    let new = KmFan::from_parts(i.target().clone(), cones, data)?.checked()?;
    let hom = validate_hom(fan, &new, i)?;
    Ok((new, hom))
}

/// Pulls `fan` back along a finite-index inclusion `j : N' → N`.
pub fn contract(fan: &KmFan, j: &GroupHom) -> Result<(KmFan, KmFanHom)> {
    if j.target() != fan.group() {
        return Err(Error::DimensionMismatch("inclusion must end at the fan's group".into()));
    }
    check_finite_index(j)?;
    let m = j.free_matrix();
    let cones = fan.cones().iter().map(|c| c.preimage(&m)).collect::<Result<Vec<_>>>()?;
    let data = fan.data().iter().map(|d| d.preimage(j)).collect::<Result<Vec<_>>>()?;
    let new = KmFan::from_parts(j.source().clone(), cones, data)?.checked()?;
    let hom = validate_hom(&new, fan, j)?;
    Ok((new, hom))
}

/// Transports a fan along an isomorphism of groups.
pub fn transport(fan: &KmFan, iso: &GroupHom) -> Result<KmFan> {
    if !iso.is_isomorphism() {
        return Err(Error::InvalidArgument("transport needs an isomorphism".into()));
    }
    Ok(inflate(fan, iso)?.0)
}

/// The star of `τ`: the cones containing `τ`, pushed to `N/F_τ`.
pub fn star(fan: &KmFan, tau: &Cone) -> Result<KmFan> {
    let t = fan.cone_index(tau).ok_or(Error::ConeNotInFan)?;
    let q = quotient(fan.group(), &fan.data()[t].subgroup())?;
    let m = q.proj.free_matrix();
    let mut cones = Vec::new();
    let mut data = Vec::new();
    for (c, d) in fan.cones().iter().zip(fan.data()) {
        if tau.is_face_of(c) {
            cones.push(c.image(&m)?);
            data.push(d.image(&q.proj)?);
        }
    }
    KmFan::from_parts(q.group, cones, data)?.checked()
}

#[derive(Clone, Debug)]
pub struct Product {
    pub fan: KmFan,
    pub projections: [KmFanHom; 2],
    pub injections: [GroupHom; 2],
}

pub fn product(a: &KmFan, b: &KmFan) -> Result<Product> {
    let ds = direct_sum(a.group(), b.group());
    let mut cones = Vec::new();
    let mut data = Vec::new();
    for (ca, da) in a.cones().iter().zip(a.data()) {
        for (cb, db) in b.cones().iter().zip(b.data()) {
            cones.push(ca.product(cb));
            data.push(da.image(&ds.inj[0])?.sum(&db.image(&ds.inj[1])?)?);
        }
    }
    let fan = KmFan::from_parts(ds.group.clone(), cones, data)?.checked()?;
    let p0 = validate_hom(&fan, a, &ds.proj[0])?;
    let p1 = validate_hom(&fan, b, &ds.proj[1])?;
    Ok(Product { fan, projections: [p0, p1], injections: ds.inj })
}

/// The map `(f, g) : H → F × G` into a product.
pub fn pairing(p: &Product, f: &KmFanHom, g: &KmFanHom) -> Result<KmFanHom> {
    if f.source() != g.source() {
        return Err(Error::InvalidMorphism("pairing of maps with different sources".into()));
    }
    if f.target() != p.projections[0].target() || g.target() != p.projections[1].target() {
        return Err(Error::InvalidMorphism("pairing into the wrong product".into()));
    }
    let a = p.injections[0].matrix().mul(f.hom().matrix())?;
    let b = p.injections[1].matrix().mul(g.hom().matrix())?;
    let mut m = a;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            m[(i, j)] = &m[(i, j)] + &b[(i, j)];
        }
    }
    let hom = GroupHom::new(f.source().group().clone(), p.fan.group().clone(), m)?;
    Ok(validate_hom(f.source(), &p.fan, &hom)?)
}

/// `F ≅ G × (zero fan on B)` with `G` atoroidal.
#[derive(Clone, Debug)]
pub struct AtoroidalSplit {
    pub atoroidal: KmFan,
    /// The free group `B` carrying the zero fan.
    pub torus: FgaGroup,
    /// `N → A ⊕ B`, where `A` is the group of `atoroidal`.
    pub iso: GroupHom,
    /// `A → N`.
    pub inclusion: GroupHom,
}

pub fn atoroidal_split(fan: &KmFan) -> Result<AtoroidalSplit> {
    let n = fan.group();
    let r = n.free_rank();
    let k = n.dim() - r;
    let gens: Vec<IntVector> = fan.data().iter().flat_map(|d| d.free_projections()).collect();
    let s = saturate(&IntMatrix::from_cols(&gens, r));
    let s = if gens.is_empty() { IntMatrix::zeros(r, 0) } else { s };
    let sdim = s.cols();
    let m = s.hcat(&complement_basis(&s))?;
    let minv = unimodular_inverse(&m)?;
    let a = FgaGroup::new(sdim, n.torsion_invariants().to_vec())?;
    let b = FgaGroup::lattice(r - sdim);
    // N → A: top rows of M⁻¹ on the free part, identity on torsion.
    let mut to_a = IntMatrix::zeros(a.dim(), n.dim());
    let mut to_b = IntMatrix::zeros(b.dim(), n.dim());
    for j in 0..r {
        for i in 0..sdim {
            to_a[(i, j)] = minv[(i, j)].clone();
        }
        for i in sdim..r {
            to_b[(i - sdim, j)] = minv[(i, j)].clone();
        }
    }
    let mut incl = IntMatrix::zeros(n.dim(), a.dim());
    for t in 0..k {
        to_a[(sdim + t, r + t)] = BigInt::one();
        incl[(r + t, sdim + t)] = BigInt::one();
    }
    for i in 0..r {
        for j in 0..sdim {
            incl[(i, j)] = s[(i, j)].clone();
        }
    }
    let to_a = GroupHom::new(n.clone(), a.clone(), to_a)?;
    let to_b = GroupHom::new(n.clone(), b.clone(), to_b)?;
    let inclusion = GroupHom::new(a.clone(), n.clone(), incl)?;
    let ds = direct_sum(&a, &b);
    let iso_m = {
        let x = ds.inj[0].matrix().mul(to_a.matrix())?;
        let y = ds.inj[1].matrix().mul(to_b.matrix())?;
        let mut z = x;
        for i in 0..z.rows() {
            for j in 0..z.cols() {
                z[(i, j)] = &z[(i, j)] + &y[(i, j)];
            }
        }
        z
    };
    let iso = GroupHom::new(n.clone(), ds.group.clone(), iso_m)?;
    let top = to_a.free_matrix();
    let cones = fan
        .cones()
        .iter()
        .map(|c| {
            let rays: Vec<IntVector> = c.rays().iter().map(|v| top.mul_vec(v)).collect::<Result<_>>()?;
            Cone::from_generators(&rays, sdim)
        })
        .collect::<Result<Vec<_>>>()?;
    let data = fan.data().iter().map(|d| d.image(&to_a)).collect::<Result<Vec<_>>>()?;
    let atoroidal = KmFan::from_parts(a, cones, data)?.checked()?;
    Ok(AtoroidalSplit { atoroidal, torus: b, iso, inclusion })
}

/// The monoid `P_σ = σ ∩ F_σ` of one cone.
#[derive(Clone, Debug)]
pub struct MonoidDatum {
    pub cone: Cone,
    /// `σ ∩ M` in `N̄`, where `M = F̄_σ ⊕ C` for a complement `C` of
    /// `Span σ ∩ N̄`; its points in `Span σ` are exactly `F̄_σ ∩ σ`.
    pub monoid: AffineMonoid,
    /// Minimal generators of `P_σ`, as elements of `N`.
    pub generators: Vec<IntVector>,
}

pub fn monoid_presentation(fan: &KmFan) -> Vec<MonoidDatum> {
    fan.cones()
        .iter()
        .zip(fan.data())
        .map(|(c, d)| {
            let monoid = monoid_of(c, d);
            let generators = monoid
                .hilbert_basis()
                .iter()
                .map(|h| d.lift_free(h).expect("Hilbert basis lies in the lattice"))
                .collect();
            MonoidDatum { cone: c.clone(), monoid, generators }
        })
        .collect()
}

fn monoid_of(c: &Cone, d: &FreeSubgroup) -> AffineMonoid {
    let mut gens = d.free_projections();
    gens.extend(complement_basis(&c.span_sublattice()).col_vectors());
    AffineMonoid::with_lattice(c.clone(), &gens).expect("datum of full rank in the span")
}

/// Rebuilds a fan from generators of its monoids `P_σ ⊆ N`.
pub fn from_monoids(group: &FgaGroup, monoids: &[Vec<IntVector>]) -> Result<KmFan> {
    let r = group.free_rank();
    let mut cones = Vec::new();
    let mut data = Vec::new();
    for (i, gens) in monoids.iter().enumerate() {
        let gens: Vec<IntVector> = gens.iter().map(|g| group.element(g)).collect::<Result<_>>()?;
        let proj: Vec<IntVector> = gens.iter().map(|g| g[..r].to_vec()).collect();
        let cone = Cone::from_generators(&proj, r)?;
        if !cone.is_sharp() {
            return Err(Error::InvalidFan(format!("monoid {i} is not sharp")));
        }
        let d = FreeSubgroup::new(group, &gens)?;
        if !d.is_torsion_free() {
            return Err(Error::InvalidFan(format!("the group of monoid {i} has torsion")));
        }
        let m = monoid_of(&cone, &d);
        let nonzero: Vec<IntVector> = proj.into_iter().filter(|p| p.iter().any(|x| !x.is_zero())).collect();
        let grading: IntVector = cone.facets().iter().fold(vec![BigInt::zero(); r], |acc, f| {
            acc.iter().zip(f).map(|(a, b)| a + b).collect()
        });
        let mut memo = HashMap::new();
        for h in m.hilbert_basis() {
            if !generated(&h, &nonzero, &cone, &grading, &mut memo) {
                return Err(Error::InvalidFan(format!("monoid {i} is not saturated in its group")));
            }
        }
        cones.push(cone);
        data.push(d);
    }
    KmFan::from_parts(group.clone(), cones, data)?.checked()
}

/// Whether `x` is a sum of the given generators of a sharp cone's monoid.
fn generated(
    x: &IntVector,
    gens: &[IntVector],
    cone: &Cone,
    grading: &[BigInt],
    memo: &mut HashMap<IntVector, bool>,
) -> bool {
    if x.iter().all(Zero::is_zero) {
        return true;
    }
    if let Some(&b) = memo.get(x) {
        return b;
    }
    let gx = dot(grading, x);
    let mut found = false;
    for g in gens {
        let y: IntVector = x.iter().zip(g).map(|(a, b)| a - b).collect();
        if cone.contains_point(&y) && dot(grading, &y) < gx && generated(&y, gens, cone, grading, memo) {
            found = true;
            break;
        }
    }
    memo.insert(x.clone(), found);
    found
}
