use num_bigint::BigInt;
use num_traits::Zero;

use super::group::{cokernel, FgaGroup};
use crate::error::{Error, Result};
use crate::intlinalg::{kernel_basis, lattice_basis, solve_integer, IntMatrix, IntVector};

/// A homomorphism `source → target` given by an integer matrix acting on
/// coordinates. Rows belonging to torsion coordinates of the target are
/// stored reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupHom {
    source: FgaGroup,
    target: FgaGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: FgaGroup, target: FgaGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a map {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source,
                target
            )));
        }
        let r = source.free_rank();
        for (i, d) in source.torsion_invariants().iter().enumerate() {
            let img: IntVector = matrix.col(r + i).iter().map(|x| x * d).collect();
            if target.reduce(&img) != target.zero() {
                return Err(Error::NotAHomomorphism(format!(
                    "generator of order {d} is sent to an element of different order"
                )));
            }
        }
        let cols: Vec<IntVector> = matrix.col_vectors().iter().map(|c| target.reduce(c)).collect();
        let matrix = IntMatrix::from_cols(&cols, target.dim());
        Ok(GroupHom { source, target, matrix })
    }

    pub fn identity(g: &FgaGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.dim()) }
    }

    pub fn zero(source: &FgaGroup, target: &FgaGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.dim(), source.dim()),
        }
    }

    pub fn source(&self) -> &FgaGroup {
        &self.source
    }

    pub fn target(&self) -> &FgaGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> IntVector {
        self.target.reduce(&self.matrix.mul_vec(x).expect("element of the source"))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.target != other.source {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        GroupHom::new(self.source.clone(), other.target.clone(), other.matrix.mul(&self.matrix)?)
    }

    /// Images of the standard generators.
    pub fn images(&self) -> Vec<IntVector> {
        self.matrix.col_vectors()
    }

    pub fn image(&self) -> Subgroup {
        Subgroup { ambient: self.target.clone(), generators: self.images() }
    }

    pub fn is_injective(&self) -> bool {
        hom_kernel_cokernel(self).kernel.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        hom_kernel_cokernel(self).cokernel.is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Some preimage of `y`, or `None` when `y` is not in the image.
    pub fn preimage_of(&self, y: &[BigInt]) -> Result<Option<IntVector>> {
        let y = self.target.element(y)?;
        let a = self.matrix.hcat(&self.target.relation_matrix())?;
        Ok(solve_integer(&a, &y)?.map(|x| self.source.reduce(&x[..self.source.dim()])))
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_isomorphism() {
            return Err(Error::InvalidArgument("map is not an isomorphism".into()));
        }
        let cols: Vec<IntVector> = (0..self.target.dim())
            .map(|j| self.preimage_of(&self.target.generator(j)).map(|x| x.expect("surjective")))
            .collect::<Result<_>>()?;
        GroupHom::new(
            self.target.clone(),
            self.source.clone(),
            IntMatrix::from_cols(&cols, self.source.dim()),
        )
    }

    /// The map on free quotients `N/N_tor → N'/N'_tor`.
    pub fn free_matrix(&self) -> IntMatrix {
        let rs: Vec<usize> = (0..self.target.free_rank()).collect();
        let cs: Vec<usize> = (0..self.source.free_rank()).collect();
        self.matrix.select_rows(&rs).select_cols(&cs)
    }
}

/// A subgroup of `ambient` given by generators.
#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient: FgaGroup,
    generators: Vec<IntVector>,
}

impl Subgroup {
    pub fn new(ambient: FgaGroup, generators: Vec<IntVector>) -> Result<Self> {
        let generators = generators
            .iter()
            .map(|g| {
                if g.len() != ambient.dim() {
                    Err(Error::GeneratorOutsideAmbient(format!(
                        "generator of length {} in {}",
                        g.len(),
                        ambient
                    )))
                } else {
                    Ok(ambient.reduce(g))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Subgroup { ambient, generators })
    }

    pub fn whole(ambient: &FgaGroup) -> Self {
        let generators = (0..ambient.dim()).map(|i| ambient.generator(i)).collect();
        Subgroup { ambient: ambient.clone(), generators }
    }

    pub fn zero(ambient: &FgaGroup) -> Self {
        Subgroup { ambient: ambient.clone(), generators: Vec::new() }
    }

    pub fn ambient(&self) -> &FgaGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    /// Generators together with the ambient relations, as columns.
    fn full_matrix(&self) -> IntMatrix {
        IntMatrix::from_cols(&self.generators, self.ambient.dim())
            .hcat(&self.ambient.relation_matrix())
            .expect("same row count")
    }

    /// Canonical basis of the preimage of this subgroup in `Z^dim`.
    pub fn preimage_basis(&self) -> Vec<IntVector> {
        lattice_basis(&self.full_matrix().col_vectors(), self.ambient.dim())
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        if x.len() != self.ambient.dim() {
            return false;
        }
        matches!(solve_integer(&self.full_matrix(), x), Ok(Some(_)))
    }

    /// Coefficients `c` with `Σ c_i g_i = x`, or `None`.
    pub fn coefficients(&self, x: &[BigInt]) -> Option<IntVector> {
        if x.len() != self.ambient.dim() {
            return None;
        }
        let c = solve_integer(&self.full_matrix(), x).ok()??;
        Some(c[..self.generators.len()].to_vec())
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn same_as(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.preimage_basis() == other.preimage_basis()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| g.iter().all(Zero::is_zero))
    }

    /// `self + other`.
    pub fn sum(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch("subgroups of different groups".into()));
        }
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        Ok(Subgroup { ambient: self.ambient.clone(), generators: g })
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch("subgroups of different groups".into()));
        }
        let n = self.ambient.dim();
        let a = self.preimage_basis();
        let b = other.preimage_basis();
        let ma = IntMatrix::from_cols(&a, n);
        let mb = IntMatrix::from_cols(&b, n);
        let k = kernel_basis(&ma.hcat(&mb)?);
        let gens: Vec<IntVector> = k
            .col_vectors()
            .iter()
            .map(|c| ma.mul_vec(&c[..a.len()]).expect("dimension"))
            .collect();
        Subgroup::new(self.ambient.clone(), gens)
    }

    /// The subgroup as an abstract group together with its inclusion.
    pub fn as_group(&self) -> (FgaGroup, GroupHom) {
        let n = self.ambient.dim();
        let basis = self.preimage_basis();
        let s = basis.len();
        let p = IntMatrix::from_cols(&basis, n);
        let rel = self.ambient.relation_matrix();
        let coeffs: Vec<IntVector> = rel
            .col_vectors()
            .iter()
            .map(|r| solve_integer(&p, r).expect("dimension").expect("relation lies in preimage"))
            .collect();
        let c = cokernel(&IntMatrix::from_cols(&coeffs, s));
        let incl = p.mul(&c.lift).expect("dimension");
        let hom = GroupHom::new(c.group.clone(), self.ambient.clone(), incl)
            .expect("inclusion is well defined");
        (c.group, hom)
    }

    /// Preimage under `f : M → ambient`.
    pub fn preimage(&self, f: &GroupHom) -> Result<Subgroup> {
        if f.target() != &self.ambient {
            return Err(Error::DimensionMismatch("preimage along a map to another group".into()));
        }
        let m = f.source().dim();
        let a = f.matrix().hcat(&self.full_matrix())?;
        let k = kernel_basis(&a);
        let mut gens: Vec<IntVector> = k.col_vectors().iter().map(|c| c[..m].to_vec()).collect();
        // Relations of the source map to zero and are already covered; keep
        // the generators canonical anyway.
        gens.retain(|g| g.iter().any(|x| !x.is_zero()));
        Subgroup::new(f.source().clone(), gens)
    }

    /// Image under `f : ambient → M`.
    pub fn image_under(&self, f: &GroupHom) -> Result<Subgroup> {
        if f.source() != &self.ambient {
            return Err(Error::DimensionMismatch("image along a map from another group".into()));
        }
        Subgroup::new(f.target().clone(), self.generators.iter().map(|g| f.apply(g)).collect())
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for Subgroup {}

/// A quotient `N/H` with its projection and a set-theoretic section.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FgaGroup,
    pub proj: GroupHom,
    /// `N.dim × group.dim`: representatives in `N` of the generators.
    pub lift: IntMatrix,
}

impl Quotient {
    pub fn lift_of(&self, y: &[BigInt]) -> IntVector {
        self.proj.source().reduce(&self.lift.mul_vec(y).expect("element of the quotient"))
    }
}

pub fn quotient(n: &FgaGroup, h: &Subgroup) -> Result<Quotient> {
    if h.ambient() != n {
        return Err(Error::GeneratorOutsideAmbient(format!("subgroup of {} taken in {}", h.ambient(), n)));
    }
    if h.is_trivial() {
        let id = IntMatrix::identity(n.dim());
        return Ok(Quotient { group: n.clone(), proj: GroupHom::identity(n), lift: id });
    }
    let c = cokernel(&h.full_matrix());
    let proj = GroupHom::new(n.clone(), c.group.clone(), c.proj)?;
    Ok(Quotient { group: c.group, proj, lift: c.lift })
}

/// `N∨ = Hom(N, Z)`.
pub fn dual_group(n: &FgaGroup) -> FgaGroup {
    FgaGroup::lattice(n.free_rank())
}

/// `E(N) = Ext¹(N, Z) ≅ N_tor`.
pub fn ext_group(n: &FgaGroup) -> FgaGroup {
    n.torsion_subgroup()
}

/// `f∨ : N'∨ → N∨`.
pub fn dual_hom(f: &GroupHom) -> GroupHom {
    GroupHom::new(dual_group(f.target()), dual_group(f.source()), f.free_matrix().transpose())
        .expect("dual of a homomorphism")
}

#[derive(Clone, Debug)]
pub struct KernelCokernel {
    pub kernel: Subgroup,
    pub cokernel: FgaGroup,
    pub cok_proj: GroupHom,
}

pub fn hom_kernel_cokernel(f: &GroupHom) -> KernelCokernel {
    let kernel = Subgroup::zero(f.target()).preimage(f).expect("matching groups");
    let q = quotient(f.target(), &f.image()).expect("image lives in the target");
    KernelCokernel { kernel, cokernel: q.group, cok_proj: q.proj }
}

/// Finite cokernel and injective on torsion (equivalently, torsion-free kernel).
pub fn is_tame_hom(f: &GroupHom) -> bool {
    let kc = hom_kernel_cokernel(f);
    kc.cokernel.is_finite() && kc.kernel.as_group().0.is_lattice()
}

/// `N_1 ⊕ N_2` with injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FgaGroup,
    pub inj: [GroupHom; 2],
    pub proj: [GroupHom; 2],
}

/// Free coordinates are laid out as `(free a, free b)`; only the torsion
/// parts are renormalized.
pub fn direct_sum(a: &FgaGroup, b: &FgaGroup) -> DirectSum {
    let (ra, rb) = (a.free_rank(), b.free_rank());
    let (ka, kb) = (a.torsion_invariants().len(), b.torsion_invariants().len());
    let mut orders: Vec<BigInt> = Vec::new();
    orders.extend(a.torsion_invariants().iter().cloned());
    orders.extend(b.torsion_invariants().iter().cloned());
    let t = cokernel(&IntMatrix::diagonal(&orders));
    let group = FgaGroup::new(ra + rb, t.group.torsion_invariants().to_vec()).expect("normal form");
    let kt = group.dim() - ra - rb;
    // Naive coordinates: Z^{ra+rb} ⊕ tors(a) ⊕ tors(b).
    let naive_dim = a.dim() + b.dim();
    let mut to_normal = IntMatrix::zeros(group.dim(), naive_dim);
    let mut to_naive = IntMatrix::zeros(naive_dim, group.dim());
    for i in 0..ra + rb {
        to_normal[(i, i)] = 1.into();
        to_naive[(i, i)] = 1.into();
    }
    for i in 0..kt {
        for j in 0..ka + kb {
            to_normal[(ra + rb + i, ra + rb + j)] = t.proj[(i, j)].clone();
            to_naive[(ra + rb + j, ra + rb + i)] = t.lift[(j, i)].clone();
        }
    }
    let pos_a: Vec<usize> = (0..ra).chain((0..ka).map(|i| ra + rb + i)).collect();
    let pos_b: Vec<usize> = (ra..ra + rb).chain((0..kb).map(|i| ra + rb + ka + i)).collect();
    let place = |pos: &[usize]| {
        let mut m = IntMatrix::zeros(naive_dim, pos.len());
        for (j, &p) in pos.iter().enumerate() {
            m[(p, j)] = 1.into();
        }
        m
    };
    let pa = place(&pos_a);
    let pb = place(&pos_b);
    let inj_a = GroupHom::new(a.clone(), group.clone(), to_normal.mul(&pa).unwrap()).unwrap();
    let inj_b = GroupHom::new(b.clone(), group.clone(), to_normal.mul(&pb).unwrap()).unwrap();
    let proj_a = GroupHom::new(group.clone(), a.clone(), pa.transpose().mul(&to_naive).unwrap()).unwrap();
    let proj_b = GroupHom::new(group.clone(), b.clone(), pb.transpose().mul(&to_naive).unwrap()).unwrap();
    DirectSum { group, inj: [inj_a, inj_b], proj: [proj_a, proj_b] }
}
