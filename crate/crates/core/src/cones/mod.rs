//! Rational polyhedral cones in `Z^r ⊗ R`.
//!
//! A [`Cone`] is kept in a canonical form: primitive extreme rays taken in
//! the orthogonal complement of the lineality space and sorted, a Hermite
//! basis of the lineality space, primitive facet normals lying in the span,
//! and a Hermite basis of the orthogonal complement. Equal cones therefore
//! compare equal as values.

mod dd;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::{dot, saturate, IntMatrix, IntVector};
use dd::hrep_to_vrep;

pub type RatVector = Vec<BigRational>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cone {
    ambient_rank: usize,
    rays: Vec<IntVector>,
    lineality: Vec<IntVector>,
    facets: Vec<IntVector>,
    equations: Vec<IntVector>,
}

/// Position of a vector relative to a cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Outside,
    /// In the relative interior of the given proper face.
    Boundary(Cone),
    Interior,
}

fn check_len(v: &[IntVector], n: usize) -> Result<()> {
    match v.iter().find(|x| x.len() != n) {
        Some(x) => Err(Error::DimensionMismatch(format!(
            "vector of length {} in ambient rank {n}",
            x.len()
        ))),
        None => Ok(()),
    }
}

impl Cone {
    /// The cone generated by `gens` in `Z^n ⊗ R`.
    pub fn from_generators(gens: &[IntVector], n: usize) -> Result<Cone> {
        check_len(gens, n)?;
        let dual = hrep_to_vrep(gens, &[], n);
        Ok(Self::from_hrep_canonical(dual.rays, dual.lineality, n))
    }

    /// `{x : a·x ≥ 0 for a in ineqs, e·x = 0 for e in eqs}`.
    pub fn from_inequalities(ineqs: &[IntVector], eqs: &[IntVector], n: usize) -> Result<Cone> {
        check_len(ineqs, n)?;
        check_len(eqs, n)?;
        let v = hrep_to_vrep(ineqs, eqs, n);
        Ok(Self::from_vrep_canonical(v.rays, v.lineality, n))
    }

    /// From canonical facets and equations (as produced by the conversion).
    fn from_hrep_canonical(facets: Vec<IntVector>, equations: Vec<IntVector>, n: usize) -> Cone {
        let v = hrep_to_vrep(&facets, &equations, n);
        Cone { ambient_rank: n, rays: v.rays, lineality: v.lineality, facets, equations }
    }

    /// From canonical rays and lineality.
    fn from_vrep_canonical(rays: Vec<IntVector>, lineality: Vec<IntVector>, n: usize) -> Cone {
        let h = hrep_to_vrep(&rays, &lineality, n);
        Cone { ambient_rank: n, rays, lineality, facets: h.rays, equations: h.lineality }
    }

    pub fn zero(n: usize) -> Cone {
        Self::from_generators(&[], n).expect("no generators")
    }

    pub fn full(n: usize) -> Cone {
        Self::from_inequalities(&[], &[], n).expect("no constraints")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[IntVector] {
        &self.lineality
    }

    pub fn facets(&self) -> &[IntVector] {
        &self.facets
    }

    pub fn equations(&self) -> &[IntVector] {
        &self.equations
    }

    /// Rays together with `±` the lineality basis.
    pub fn generators(&self) -> Vec<IntVector> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(l.iter().map(|x| -x).collect());
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.ambient_rank - self.equations.len()
    }

    pub fn is_sharp(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    /// Sharp with linearly independent rays.
    pub fn is_simplicial(&self) -> bool {
        self.is_sharp() && self.rays.len() == self.dim()
    }

    /// Saturated basis of `Span σ ∩ Z^r`, as columns.
    pub fn span_sublattice(&self) -> IntMatrix {
        let g = IntMatrix::from_cols(&self.generators(), self.ambient_rank);
        saturate(&g)
    }

    /// The sum of the rays: a point in the relative interior.
    pub fn relative_interior_point(&self) -> IntVector {
        let mut p = vec![BigInt::zero(); self.ambient_rank];
        for r in &self.rays {
            for (a, b) in p.iter_mut().zip(r) {
                *a += b;
            }
        }
        p
    }

    pub fn contains_point(&self, v: &[BigInt]) -> bool {
        v.len() == self.ambient_rank
            && self.equations.iter().all(|e| dot(e, v).is_zero())
            && self.facets.iter().all(|f| !dot(f, v).is_negative())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators().iter().all(|g| self.contains_point(g))
    }

    /// Classifies a rational vector.
    pub fn locate(&self, v: &[BigRational]) -> Result<Location> {
        if v.len() != self.ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient rank {}",
                v.len(),
                self.ambient_rank
            )));
        }
        let rdot = |a: &IntVector| -> BigRational {
            a.iter().zip(v).map(|(x, y)| BigRational::from_integer(x.clone()) * y).sum()
        };
        if self.equations.iter().any(|e| !rdot(e).is_zero()) {
            return Ok(Location::Outside);
        }
        let mut active = Vec::new();
        for f in &self.facets {
            let s = rdot(f);
            if s.is_negative() {
                return Ok(Location::Outside);
            }
            if s.is_zero() {
                active.push(f.clone());
            }
        }
        if active.is_empty() {
            return Ok(Location::Interior);
        }
        let mut eqs = self.equations.clone();
        eqs.extend(active);
        Ok(Location::Boundary(Cone::from_inequalities(&self.facets, &eqs, self.ambient_rank)?))
    }

    pub fn locate_int(&self, v: &[BigInt]) -> Result<Location> {
        let r: RatVector = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        self.locate(&r)
    }

    /// The smallest face containing `v`, or `None` when `v` is outside.
    pub fn face_containing(&self, v: &[BigInt]) -> Result<Option<Cone>> {
        Ok(match self.locate_int(v)? {
            Location::Outside => None,
            Location::Interior => Some(self.clone()),
            Location::Boundary(f) => Some(f),
        })
    }

    /// All faces, ordered by dimension and then by rays.
    pub fn faces(&self) -> Vec<Cone> {
        let n = self.rays.len();
        let zero_set = |idx: &[usize]| -> Vec<usize> {
            // Indices of facets vanishing on the given rays.
            (0..self.facets.len())
                .filter(|&f| idx.iter().all(|&r| dot(&self.facets[f], &self.rays[r]).is_zero()))
                .collect()
        };
        let closure = |idx: &[usize]| -> Vec<usize> {
            let fs = zero_set(idx);
            (0..n).filter(|&r| fs.iter().all(|&f| dot(&self.facets[f], &self.rays[r]).is_zero())).collect()
        };
        let mut seen: Vec<Vec<usize>> = vec![closure(&[])];
        let mut queue = seen.clone();
        while let Some(face) = queue.pop() {
            for r in 0..n {
                if face.contains(&r) {
                    continue;
                }
                let mut s = face.clone();
                s.push(r);
                let c = closure(&s);
                if !seen.contains(&c) {
                    seen.push(c.clone());
                    queue.push(c);
                }
            }
        }
        let mut out: Vec<Cone> = seen
            .iter()
            .map(|idx| {
                let rays = idx.iter().map(|&i| self.rays[i].clone()).collect();
                Cone::from_vrep_canonical(rays, self.lineality.clone(), self.ambient_rank)
            })
            .collect();
        out.sort_by(canonical_order);
        out
    }

    /// Whether `self` is a face of `sigma`.
    pub fn is_face_of(&self, sigma: &Cone) -> bool {
        if self.ambient_rank != sigma.ambient_rank {
            return false;
        }
        matches!(sigma.face_containing(&self.relative_interior_point()), Ok(Some(f)) if f == *self)
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if self.ambient_rank != other.ambient_rank {
            return Err(Error::DimensionMismatch("cones in different ambient ranks".into()));
        }
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        Cone::from_inequalities(&ineqs, &eqs, self.ambient_rank)
    }

    /// Image under a linear map `Z^r → Z^s` given by an `s × r` matrix.
    pub fn image(&self, m: &IntMatrix) -> Result<Cone> {
        if m.cols() != self.ambient_rank {
            return Err(Error::DimensionMismatch("matrix does not act on the cone".into()));
        }
        let gens: Vec<IntVector> =
            self.generators().iter().map(|g| m.mul_vec(g)).collect::<Result<_>>()?;
        Cone::from_generators(&gens, m.rows())
    }

    /// Preimage under a linear map `Z^s → Z^r` given by an `r × s` matrix.
    pub fn preimage(&self, m: &IntMatrix) -> Result<Cone> {
        if m.rows() != self.ambient_rank {
            return Err(Error::DimensionMismatch("matrix does not land in the cone".into()));
        }
        let mt = m.transpose();
        let ineqs: Vec<IntVector> = self.facets.iter().map(|f| mt.mul_vec(f)).collect::<Result<_>>()?;
        let eqs: Vec<IntVector> = self.equations.iter().map(|e| mt.mul_vec(e)).collect::<Result<_>>()?;
        Cone::from_inequalities(&ineqs, &eqs, m.cols())
    }

    /// `σ × τ` in `Z^{r+s}`.
    pub fn product(&self, other: &Cone) -> Cone {
        let (r, s) = (self.ambient_rank, other.ambient_rank);
        let mut gens: Vec<IntVector> = self
            .generators()
            .into_iter()
            .map(|mut g| {
                g.resize(r + s, BigInt::zero());
                g
            })
            .collect();
        for g in other.generators() {
            let mut v = vec![BigInt::zero(); r];
            v.extend(g);
            gens.push(v);
        }
        Cone::from_generators(&gens, r + s).expect("dimension")
    }
}

/// Order by dimension, then rays, then lineality.
pub fn canonical_order(a: &Cone, b: &Cone) -> Ordering {
    a.dim()
        .cmp(&b.dim())
        .then_with(|| a.rays.cmp(&b.rays))
        .then_with(|| a.lineality.cmp(&b.lineality))
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[IntVector]| {
            v.iter()
                .map(|r| format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "Cone[{}", show(&self.rays))?;
        if !self.lineality.is_empty() {
            write!(f, " ; lin {}", show(&self.lineality))?;
        }
        write!(f, "]")
    }
}

pub fn dual_cone(c: &Cone) -> Cone {
    let mut gens = c.facets.clone();
    for e in &c.equations {
        gens.push(e.clone());
        gens.push(e.iter().map(|x| -x).collect());
    }
    Cone::from_generators(&gens, c.ambient_rank).expect("dimension")
}

pub fn faces(c: &Cone) -> Vec<Cone> {
    c.faces()
}

pub fn span_sublattice(c: &Cone) -> IntMatrix {
    c.span_sublattice()
}

pub fn contains(c: &Cone, v: &[BigRational]) -> Result<Location> {
    c.locate(v)
}

pub fn intersect(a: &Cone, b: &Cone) -> Result<Cone> {
    a.intersect(b)
}

/// Whether `target` is the union of `pieces` as a point set.
pub fn union_covers(target: &Cone, pieces: &[Cone]) -> Result<bool> {
    let n = target.ambient_rank;
    for p in pieces {
        if p.ambient_rank != n {
            return Err(Error::DimensionMismatch("pieces in a different ambient rank".into()));
        }
        if !target.contains_cone(p) {
            return Err(Error::PieceOutsideTarget);
        }
    }
    // Lower-dimensional pieces have empty interior in Span(target) and cannot
    // help cover it.
    let full: Vec<&Cone> = pieces.iter().filter(|p| p.dim() == target.dim()).collect();
    if full.is_empty() {
        return Ok(false);
    }
    let mut hyperplanes: Vec<IntVector> = Vec::new();
    for p in &full {
        for f in &p.facets {
            if !hyperplanes.contains(f) {
                hyperplanes.push(f.clone());
            }
        }
    }
    let mut cells = vec![target.clone()];
    for h in &hyperplanes {
        let neg_h: IntVector = h.iter().map(|x| -x).collect();
        let mut next = Vec::new();
        for c in cells {
            let gens = c.generators();
            let has_pos = gens.iter().any(|g| dot(h, g).is_positive());
            let has_neg = gens.iter().any(|g| dot(h, g).is_negative());
            if !(has_pos && has_neg) {
                next.push(c);
                continue;
            }
            for side in [h, &neg_h] {
                let mut ineqs = c.facets.clone();
                ineqs.push(side.clone());
                let piece = Cone::from_inequalities(&ineqs, &c.equations, n)?;
                if piece.dim() == target.dim() {
                    next.push(piece);
                }
            }
        }
        cells = next;
    }
    Ok(cells
        .iter()
        .all(|c| {
            let p = c.relative_interior_point();
            full.iter().any(|piece| piece.contains_point(&p))
        }))
}
