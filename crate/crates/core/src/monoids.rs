//! Affine monoids `C ∩ M` of lattice points in a rational cone `C`, where
//! `M ⊆ Z^r` is a full-rank sublattice (usually `Z^r` itself).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::abelian::{FgaGroup, GroupHom, Subgroup};
use crate::cones::{dual_cone, Cone};
use crate::error::{Error, Result};
use crate::intlinalg::{
    dot, hnf_rows, kernel_basis, lattice_basis, smith_normal_form, solve_integer, solve_rational,
    unimodular_inverse, IntMatrix, IntVector,
};

/// Largest simplicial cone multiplicity the Hilbert basis routine will
/// enumerate.
const MAX_MULTIPLICITY: u64 = 1 << 22;

pub struct AffineMonoid {
    rank: usize,
    cone: Cone,
    /// Columns form a basis of the full-rank sublattice `M`.
    lattice: IntMatrix,
    hilbert: OnceLock<(Vec<IntVector>, Vec<IntVector>)>,
}

impl Clone for AffineMonoid {
    fn clone(&self) -> Self {
        AffineMonoid {
            rank: self.rank,
            cone: self.cone.clone(),
            lattice: self.lattice.clone(),
            hilbert: self.hilbert.clone(),
        }
    }
}

impl PartialEq for AffineMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.cone == other.cone && self.lattice_hnf() == other.lattice_hnf()
    }
}

impl Eq for AffineMonoid {}

impl fmt::Debug for AffineMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AffineMonoid")
            .field("cone", &self.cone)
            .field("lattice", &self.lattice_hnf())
            .finish()
    }
}

impl AffineMonoid {
    /// `cone ∩ Z^r`.
    pub fn new(cone: Cone) -> Self {
        let rank = cone.ambient_rank();
        AffineMonoid { rank, cone, lattice: IntMatrix::identity(rank), hilbert: OnceLock::new() }
    }

    /// `cone ∩ M` for a full-rank sublattice `M` given by generators.
    pub fn with_lattice(cone: Cone, lattice_gens: &[IntVector]) -> Result<Self> {
        let rank = cone.ambient_rank();
        let basis = lattice_basis(lattice_gens, rank);
        if basis.len() != rank {
            return Err(Error::NotFiniteIndex);
        }
        Ok(AffineMonoid {
            rank,
            cone,
            lattice: IntMatrix::from_cols(&basis, rank),
            hilbert: OnceLock::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn lattice_hnf(&self) -> Vec<IntVector> {
        hnf_rows(&self.lattice.col_vectors(), self.rank)
    }

    pub fn is_sharp(&self) -> bool {
        self.cone.is_sharp()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.cone.contains_point(x) && matches!(solve_integer(&self.lattice, x), Ok(Some(_)))
    }

    /// Basis of the unit group `lineality ∩ M`.
    pub fn unit_basis(&self) -> Vec<IntVector> {
        self.hilbert_parts().1.clone()
    }

    /// Minimal generators of the sharp part, lifted canonically.
    pub fn sharp_hilbert_basis(&self) -> Vec<IntVector> {
        self.hilbert_parts().0.clone()
    }

    /// Sharp generators followed by `u` and `-u` for each unit basis vector.
    pub fn hilbert_basis(&self) -> Vec<IntVector> {
        let (sharp, units) = self.hilbert_parts();
        let mut out = sharp.clone();
        out.extend(units.iter().cloned());
        out.extend(units.iter().map(|u| u.iter().map(|x| -x).collect::<IntVector>()));
        out
    }

    /// Basis of the group `M^gp ∩ Span`, i.e. the group generated by the monoid.
    pub fn group_basis(&self) -> Vec<IntVector> {
        let local = self.cone.preimage(&self.lattice).expect("square lattice basis");
        let s = local.span_sublattice();
        let b = self.lattice.mul(&s).expect("dimension");
        lattice_basis(&b.col_vectors(), self.rank)
    }

    fn hilbert_parts(&self) -> &(Vec<IntVector>, Vec<IntVector>) {
        self.hilbert.get_or_init(|| {
            let local = self.cone.preimage(&self.lattice).expect("square lattice basis");
            let (sharp, units) = hilbert_basis_of_cone(&local);
            let map = |v: &Vec<IntVector>| -> Vec<IntVector> {
                v.iter().map(|y| self.lattice.mul_vec(y).expect("dimension")).collect()
            };
            let mut sharp = map(&sharp);
            sharp.sort();
            let units = hnf_rows(&map(&units), self.rank);
            (sharp, units)
        })
    }
}

/// `σ∨ ∩ Z^r`.
pub fn dual_monoid(sigma: &Cone, rank: usize) -> Result<AffineMonoid> {
    if sigma.ambient_rank() != rank {
        return Err(Error::DimensionMismatch(format!(
            "cone of ambient rank {} in a lattice of rank {rank}",
            sigma.ambient_rank()
        )));
    }
    Ok(AffineMonoid::new(dual_cone(sigma)))
}

pub fn hilbert_basis(m: &AffineMonoid) -> Vec<IntVector> {
    m.hilbert_basis()
}

/// The face `m ∩ τ^⊥`, where `τ` is a face of the cone dual to `m`'s cone.
pub fn face_of_monoid(m: &AffineMonoid, tau: &Cone) -> Result<AffineMonoid> {
    let sigma = dual_cone(m.cone());
    if !tau.is_face_of(&sigma) {
        return Err(Error::NotAFace);
    }
    let mut eqs = m.cone().equations().to_vec();
    eqs.extend(tau.generators());
    let c = Cone::from_inequalities(m.cone().facets(), &eqs, m.rank)?;
    Ok(AffineMonoid { rank: m.rank, cone: c, lattice: m.lattice.clone(), hilbert: OnceLock::new() })
}

/// `{p ∈ m : a(p) = 0}` for `a : Z^r → E` with `E` finite.
pub fn kernel_submonoid(m: &AffineMonoid, a: &GroupHom) -> Result<AffineMonoid> {
    if a.source() != &FgaGroup::lattice(m.rank) {
        return Err(Error::DimensionMismatch(format!(
            "map must start at Z^{} (it starts at {})",
            m.rank,
            a.source()
        )));
    }
    if !a.target().is_finite() {
        return Err(Error::InvalidArgument("target of the map must be finite".into()));
    }
    let k = m.lattice.cols();
    let restricted = GroupHom::new(FgaGroup::lattice(k), a.target().clone(), a.matrix().mul(&m.lattice)?)?;
    let ker = Subgroup::zero(a.target()).preimage(&restricted)?;
    let gens: Vec<IntVector> =
        ker.generators().iter().map(|c| m.lattice.mul_vec(c)).collect::<Result<_>>()?;
    AffineMonoid::with_lattice(m.cone.clone(), &gens)
}

/// Whether a sharp monoid is isomorphic to `N^n`.
pub fn is_free_monoid(m: &AffineMonoid) -> Result<bool> {
    if !m.is_sharp() {
        return Err(Error::NotSharp);
    }
    let hb = m.hilbert_basis();
    let gp = m.group_basis();
    Ok(hb.len() == gp.len() && lattice_basis(&hb, m.rank) == gp)
}

// ------------------------------------------------------------ Hilbert bases

/// Hilbert basis of `c ∩ Z^d`: (sharp generators, unit basis).
pub(crate) fn hilbert_basis_of_cone(c: &Cone) -> (Vec<IntVector>, Vec<IntVector>) {
    let units: Vec<IntVector> = c.lineality().to_vec();
    let sb = c.span_sublattice();
    let s = sb.cols();
    let k = units.len();
    if s == k {
        return (Vec::new(), units);
    }
    let coords = |v: &IntVector| solve_integer(&sb, v).expect("dimension").expect("vector in span");
    let lc = IntMatrix::from_cols(&units.iter().map(coords).collect::<Vec<_>>(), s);
    let p = smith_normal_form(&lc).u;
    let pinv = unimodular_inverse(&p).expect("unimodular");
    let tail: Vec<usize> = (k..s).collect();
    let proj = p.select_rows(&tail);
    let complement = sb.mul(&pinv.select_cols(&tail)).expect("dimension");

    let e = s - k;
    let rays: Vec<IntVector> = c
        .rays()
        .iter()
        .map(|r| crate::intlinalg::primitive(&proj.mul_vec(&coords(r)).expect("dimension")))
        .collect();
    let sharp = sharp_hilbert_basis(&rays, e);
    let lifted = sharp
        .iter()
        .map(|h| reduce_mod_hnf(&complement.mul_vec(h).expect("dimension"), &units))
        .collect();
    (lifted, units)
}

/// Canonical representative of `x` modulo the lattice with Hermite basis `h`.
fn reduce_mod_hnf(x: &[BigInt], h: &[IntVector]) -> IntVector {
    let mut v = x.to_vec();
    for row in h {
        let Some(c) = row.iter().position(|a| !a.is_zero()) else { continue };
        let q = v[c].div_floor(&row[c]);
        for (a, b) in v.iter_mut().zip(row) {
            *a -= &q * b;
        }
    }
    v
}

/// Hilbert basis of the sharp full-dimensional cone in `Z^e` spanned by the
/// primitive vectors `rays`.
fn sharp_hilbert_basis(rays: &[IntVector], e: usize) -> Vec<IntVector> {
    if e == 0 {
        return Vec::new();
    }
    let mut rays = rays.to_vec();
    rays.sort();
    rays.dedup();
    let cone = Cone::from_generators(&rays, e).expect("dimension");
    let rays = cone.rays().to_vec();
    let mut cands: Vec<IntVector> = rays.clone();
    for simplex in triangulate(&rays, e) {
        let v = IntMatrix::from_cols(&simplex.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>(), e);
        for p in parallelepiped_points(&v) {
            if !cands.contains(&p) {
                cands.push(p);
            }
        }
    }
    // A positive grading orders the reducibility test.
    let grading: IntVector = cone.facets().iter().fold(vec![BigInt::zero(); e], |acc, f| {
        acc.iter().zip(f).map(|(a, b)| a + b).collect()
    });
    cands.sort_by_key(|x| dot(&grading, x));
    let mut basis: Vec<IntVector> = Vec::new();
    for x in &cands {
        let reducible = basis.iter().any(|h| {
            let diff: IntVector = x.iter().zip(h).map(|(a, b)| a - b).collect();
            diff.iter().any(|t| !t.is_zero()) && cone.contains_point(&diff)
        });
        if !reducible {
            basis.push(x.clone());
        }
    }
    basis.sort();
    basis
}

/// Placing triangulation of a sharp full-dimensional cone by its rays.
fn triangulate(rays: &[IntVector], e: usize) -> Vec<Vec<usize>> {
    let mut init: Vec<usize> = Vec::new();
    for i in 0..rays.len() {
        let mut trial: Vec<IntVector> = init.iter().map(|&j| rays[j].clone()).collect();
        trial.push(rays[i].clone());
        if crate::intlinalg::rank(&IntMatrix::from_rows(&trial, e)) == trial.len() {
            init.push(i);
        }
        if init.len() == e {
            break;
        }
    }
    let mut simplices = vec![init.clone()];
    for v in 0..rays.len() {
        if init.contains(&v) {
            continue;
        }
        // Boundary facets: (e-1)-subsets lying in exactly one simplex.
        let mut count: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
        for s in &simplices {
            for &o in s {
                let f: Vec<usize> = s.iter().copied().filter(|&i| i != o).collect();
                count.entry(f).and_modify(|c| c.0 += 1).or_insert((1, o));
            }
        }
        let mut added = Vec::new();
        for (f, (c, o)) in count {
            if c != 1 {
                continue;
            }
            let rows: Vec<IntVector> = f.iter().map(|&i| rays[i].clone()).collect();
            let mut u = kernel_basis(&IntMatrix::from_rows(&rows, e)).col(0);
            if dot(&u, &rays[o]).is_negative() {
                u = u.iter().map(|x| -x).collect();
            }
            if dot(&u, &rays[v]).is_negative() {
                let mut s = f.clone();
                s.push(v);
                s.sort();
                added.push(s);
            }
        }
        simplices.extend(added);
    }
    simplices
}

/// Nonzero lattice points of `{Σ λ_i v_i : 0 ≤ λ_i < 1}` for the columns
/// `v_i` of a nonsingular square matrix.
fn parallelepiped_points(v: &IntMatrix) -> Vec<IntVector> {
    let e = v.rows();
    let snf = smith_normal_form(v);
    let diag: Vec<BigInt> = (0..e).map(|i| snf.d[(i, i)].clone()).collect();
    let mult: BigInt = diag.iter().product();
    assert!(
        mult.abs().to_u64().is_some_and(|m| m <= MAX_MULTIPLICITY),
        "simplicial cone of multiplicity {mult} is too large to enumerate"
    );
    let uinv = unimodular_inverse(&snf.u).expect("unimodular");
    let mut out = Vec::new();
    let mut c = vec![BigInt::zero(); e];
    loop {
        let x = uinv.mul_vec(&c).expect("dimension");
        let lam = solve_rational(v, &x).expect("dimension").expect("nonsingular");
        let frac: Vec<BigRational> = lam.iter().map(|l| l - l.floor()).collect();
        let mut p = vec![BigRational::zero(); e];
        for (j, f) in frac.iter().enumerate() {
            for (i, pi) in p.iter_mut().enumerate() {
                *pi += f * BigRational::from_integer(v[(i, j)].clone());
            }
        }
        let p: IntVector = p.iter().map(|x| x.to_integer()).collect();
        if p.iter().any(|t| !t.is_zero()) {
            out.push(p);
        }
        // Next tuple in ⊕ Z/d_i.
        let mut i = 0;
        loop {
            if i == e {
                return out;
            }
            c[i] += BigInt::one();
            if c[i] < diag[i] {
                break;
            }
            c[i] = BigInt::zero();
            i += 1;
        }
    }
}
