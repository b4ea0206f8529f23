use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::abelian::{GroupHom, Subgroup};
use crate::abelian::FgaGroup;
use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::intlinalg::{kernel_basis, lattice_basis, rank, solve_integer, IntMatrix, IntVector};

/// A subgroup of `N` that is (expected to be) free, stored by a canonical
/// basis: the Hermite basis of its free projection, lifted back into `N`.
///
/// Lattice data `F_σ` and liftings `L` are both of this kind. When the
/// generated subgroup has torsion the generators are kept as given and
/// [`FreeSubgroup::is_torsion_free`] reports `false`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FreeSubgroup {
    ambient: FgaGroup,
    basis: Vec<IntVector>,
    torsion_free: bool,
}

pub type LatticeDatum = FreeSubgroup;

impl std::fmt::Debug for FreeSubgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self
            .basis
            .iter()
            .map(|g| format!("({})", g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "<{}>", gens.join(" "))
    }
}

impl FreeSubgroup {
    pub fn new(ambient: &FgaGroup, gens: &[IntVector]) -> Result<Self> {
        let sub = Subgroup::new(ambient.clone(), gens.to_vec())?;
        let (g, _) = sub.as_group();
        let gens: Vec<IntVector> = sub.generators().to_vec();
        if !g.is_lattice() {
            return Ok(FreeSubgroup { ambient: ambient.clone(), basis: gens, torsion_free: false });
        }
        let r = ambient.free_rank();
        let proj: Vec<IntVector> = gens.iter().map(|x| x[..r].to_vec()).collect();
        let pm = IntMatrix::from_cols(&proj, r);
        let gm = IntMatrix::from_cols(&gens, ambient.dim());
        let basis = lattice_basis(&proj, r)
            .iter()
            .map(|p| {
                let c = solve_integer(&pm, p).expect("dimension").expect("in the projected lattice");
                ambient.reduce(&gm.mul_vec(&c).expect("dimension"))
            })
            .collect();
        Ok(FreeSubgroup { ambient: ambient.clone(), basis, torsion_free: true })
    }

    pub fn zero(ambient: &FgaGroup) -> Self {
        FreeSubgroup { ambient: ambient.clone(), basis: Vec::new(), torsion_free: true }
    }

    pub fn ambient(&self) -> &FgaGroup {
        &self.ambient
    }

    /// Canonical basis (or the raw generators when not torsion-free).
    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion_free
    }

    pub fn rank(&self) -> usize {
        if self.torsion_free {
            self.basis.len()
        } else {
            rank(&IntMatrix::from_cols(&self.free_projections(), self.ambient.free_rank()))
        }
    }

    pub fn free_projections(&self) -> Vec<IntVector> {
        let r = self.ambient.free_rank();
        self.basis.iter().map(|x| x[..r].to_vec()).collect()
    }

    pub fn subgroup(&self) -> Subgroup {
        Subgroup::new(self.ambient.clone(), self.basis.clone()).expect("elements of the ambient group")
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.subgroup().contains(x)
    }

    pub fn is_subgroup_of(&self, other: &FreeSubgroup) -> bool {
        self.basis.iter().all(|g| other.contains(g))
    }

    /// Image under a homomorphism.
    pub fn image(&self, f: &GroupHom) -> Result<FreeSubgroup> {
        if f.source() != &self.ambient {
            return Err(Error::DimensionMismatch("image along a map from another group".into()));
        }
        let gens: Vec<IntVector> = self.basis.iter().map(|g| f.apply(g)).collect();
        FreeSubgroup::new(f.target(), &gens)
    }

    /// Preimage of a subgroup of the target of `f`.
    pub fn preimage(&self, f: &GroupHom) -> Result<FreeSubgroup> {
        let p = self.subgroup().preimage(f)?;
        FreeSubgroup::new(f.source(), p.generators())
    }

    /// `Span τ ∩ self` for a cone `τ` in the free coordinates.
    pub fn restrict_to_span(&self, tau: &Cone) -> FreeSubgroup {
        let r = self.ambient.free_rank();
        let pm = IntMatrix::from_cols(&self.free_projections(), r);
        let eq = IntMatrix::from_rows(tau.equations(), r);
        let k = kernel_basis(&eq.mul(&pm).expect("dimension"));
        let gm = IntMatrix::from_cols(&self.basis, self.ambient.dim());
        let gens: Vec<IntVector> =
            k.col_vectors().iter().map(|c| gm.mul_vec(c).expect("dimension")).collect();
        FreeSubgroup::new(&self.ambient, &gens).expect("elements of the ambient group")
    }

    pub fn intersect(&self, other: &FreeSubgroup) -> Result<FreeSubgroup> {
        let i = self.subgroup().intersection(&other.subgroup())?;
        FreeSubgroup::new(&self.ambient, i.generators())
    }

    pub fn sum(&self, other: &FreeSubgroup) -> Result<FreeSubgroup> {
        let mut g = self.basis.clone();
        g.extend(other.basis.iter().cloned());
        FreeSubgroup::new(&self.ambient, &g)
    }

    pub fn scaled(&self, a: &BigInt) -> FreeSubgroup {
        let gens: Vec<IntVector> = self.basis.iter().map(|g| self.ambient.scale(a, g)).collect();
        FreeSubgroup::new(&self.ambient, &gens).expect("elements of the ambient group")
    }

    /// The unique element with the given free projection, when the subgroup is
    /// torsion-free and contains one.
    pub fn lift_free(&self, v: &[BigInt]) -> Option<IntVector> {
        if !self.torsion_free {
            return None;
        }
        let r = self.ambient.free_rank();
        let pm = IntMatrix::from_cols(&self.free_projections(), r);
        let c = solve_integer(&pm, v).ok()??;
        let gm = IntMatrix::from_cols(&self.basis, self.ambient.dim());
        Some(self.ambient.reduce(&gm.mul_vec(&c).expect("dimension")))
    }

    /// The element of a rank-one datum whose free projection points into the
    /// given ray.
    pub(crate) fn ray_generator(&self, ray: &Cone) -> Option<IntVector> {
        if self.basis.len() != 1 {
            return None;
        }
        let g = &self.basis[0];
        let r = self.ambient.free_rank();
        let d = &ray.rays()[0];
        let along = g[..r].iter().zip(d).map(|(a, b)| a * b).sum::<BigInt>();
        if along.is_negative() {
            Some(self.ambient.neg(g))
        } else if along.is_zero() {
            None
        } else {
            Some(g.clone())
        }
    }
}
