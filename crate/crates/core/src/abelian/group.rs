use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::{smith_normal_form, unimodular_inverse, IntMatrix, IntVector};

/// A finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with
/// `2 ≤ d_1 | d_2 | … | d_k`.
///
/// Elements are coordinate vectors of length `r + k` whose torsion
/// coordinates lie in `[0, d_i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FgaGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgaGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        let two = BigInt::from(2);
        for (i, d) in torsion.iter().enumerate() {
            if *d < two {
                return Err(Error::InvalidGroup(format!("torsion invariant {d} is below 2")));
            }
            if i > 0 && !d.is_multiple_of(&torsion[i - 1]) {
                return Err(Error::InvalidGroup(format!(
                    "torsion invariants {} and {d} violate divisibility",
                    torsion[i - 1]
                )));
            }
        }
        Ok(FgaGroup { free_rank, torsion })
    }

    pub fn lattice(rank: usize) -> Self {
        FgaGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn trivial() -> Self {
        Self::lattice(0)
    }

    /// `Z/d` (trivial for `d = ±1`, `Z` for `d = 0`).
    pub fn cyclic(d: i64) -> Self {
        Self::from_invariants(0, &[BigInt::from(d)])
    }

    /// Normal form of `Z^r ⊕ ⊕ Z/a_i` for arbitrary `a_i` (zero means `Z`).
    pub fn from_invariants(free_rank: usize, orders: &[BigInt]) -> Self {
        let k = orders.len();
        let mut rel = IntMatrix::zeros(free_rank + k, k);
        for (i, a) in orders.iter().enumerate() {
            rel[(free_rank + i, i)] = a.clone();
        }
        cokernel(&rel).group
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_invariants(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of coordinates of an element.
    pub fn dim(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_lattice(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, d| a * d)
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_order())
    }

    pub fn torsion_subgroup(&self) -> FgaGroup {
        FgaGroup { free_rank: 0, torsion: self.torsion.clone() }
    }

    /// Relation matrix `R` with `self = Z^dim / im R`; its columns are
    /// `d_i e_{r+i}`.
    pub fn relation_matrix(&self) -> IntMatrix {
        let mut r = IntMatrix::zeros(self.dim(), self.torsion.len());
        for (i, d) in self.torsion.iter().enumerate() {
            r[(self.free_rank + i, i)] = d.clone();
        }
        r
    }

    pub fn zero(&self) -> IntVector {
        vec![BigInt::zero(); self.dim()]
    }

    /// Image of the `i`-th standard generator.
    pub fn generator(&self, i: usize) -> IntVector {
        let mut v = self.zero();
        v[i] = BigInt::one();
        self.reduce(&v)
    }

    /// Reduces the torsion coordinates of an integer vector of length `dim`.
    pub fn reduce(&self, x: &[BigInt]) -> IntVector {
        debug_assert_eq!(x.len(), self.dim());
        let mut v = x.to_vec();
        for (i, d) in self.torsion.iter().enumerate() {
            v[self.free_rank + i] = v[self.free_rank + i].mod_floor(d);
        }
        v
    }

    /// Checks the length of `x` and returns its reduced form.
    pub fn element(&self, x: &[BigInt]) -> Result<IntVector> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "element of length {} in a group with {} coordinates",
                x.len(),
                self.dim()
            )));
        }
        Ok(self.reduce(x))
    }

    pub fn is_element(&self, x: &[BigInt]) -> bool {
        x.len() == self.dim() && self.reduce(x) == x
    }

    pub fn add(&self, x: &[BigInt], y: &[BigInt]) -> IntVector {
        let s: IntVector = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, x: &[BigInt]) -> IntVector {
        let s: IntVector = x.iter().map(|a| -a).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, c: &BigInt, x: &[BigInt]) -> IntVector {
        let s: IntVector = x.iter().map(|a| c * a).collect();
        self.reduce(&s)
    }

    /// The free coordinates of an element.
    pub fn free_part<'a>(&self, x: &'a [BigInt]) -> &'a [BigInt] {
        &x[..self.free_rank]
    }

    pub fn is_torsion_element(&self, x: &[BigInt]) -> bool {
        self.free_part(x).iter().all(Zero::is_zero)
    }
}

impl fmt::Debug for FgaGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FgaGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `Z^n / im(a)` in normal form, with a projection and a section on the
/// level of coordinates.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: FgaGroup,
    /// `group.dim × n`; sends `x ∈ Z^n` to (unreduced) coordinates of its class.
    pub proj: IntMatrix,
    /// `n × group.dim`; sends coordinates to a representative in `Z^n`.
    pub lift: IntMatrix,
}

impl Cokernel {
    /// Reduced class of `x ∈ Z^n`.
    pub fn class_of(&self, x: &[BigInt]) -> IntVector {
        self.group.reduce(&self.proj.mul_vec(x).expect("cokernel dimension"))
    }
}

/// Cokernel of `a : Z^m → Z^n`.
pub fn cokernel(a: &IntMatrix) -> Cokernel {
    let n = a.rows();
    let s = smith_normal_form(a);
    let uinv = unimodular_inverse(&s.u).expect("Smith transform is unimodular");
    let mut free_idx: Vec<usize> = (s.rank..n).collect();
    let mut tors_idx = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..s.rank {
        let d = &s.d[(i, i)];
        if !d.is_one() {
            tors_idx.push(i);
            torsion.push(d.clone());
        }
    }
    let free_rank = free_idx.len();
    free_idx.extend(tors_idx);
    let proj = s.u.select_rows(&free_idx);
    let lift = uinv.select_cols(&free_idx);
    Cokernel { group: FgaGroup { free_rank, torsion }, proj, lift }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlinalg::ivec;

    #[test]
    fn normal_form_validation() {
        assert!(FgaGroup::new(1, ivec(&[2, 4])).is_ok());
        assert!(FgaGroup::new(0, ivec(&[2, 3])).is_err());
        assert!(FgaGroup::new(0, ivec(&[1])).is_err());
    }

    #[test]
    fn from_invariants_normalizes() {
        let g = FgaGroup::from_invariants(1, &ivec(&[2, 3]));
        assert_eq!(g, FgaGroup::new(1, ivec(&[6])).unwrap());
        let g = FgaGroup::from_invariants(0, &ivec(&[4, 6, 1, 0]));
        assert_eq!(g, FgaGroup::new(1, ivec(&[2, 12])).unwrap());
    }

    #[test]
    fn cokernel_sections() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[1, 3], &[0, 0]]);
        let c = cokernel(&a);
        assert_eq!(c.group.free_rank(), 1);
        assert_eq!(c.group.torsion_invariants(), ivec(&[6]).as_slice());
        // proj . lift is the identity on coordinates, proj kills the image.
        let pl = c.proj.mul(&c.lift).unwrap();
        for j in 0..c.group.dim() {
            assert_eq!(c.group.reduce(&pl.col(j)), c.group.generator(j));
        }
        for col in a.col_vectors() {
            assert_eq!(c.class_of(&col), c.group.zero());
        }
    }
}
