use num_bigint::BigInt;
use num_traits::Zero;

use super::group::{cokernel, Cokernel, FgaGroup};
use super::hom::{dual_group, ext_group, is_tame_hom, GroupHom};
use crate::error::{Error, Result};
use crate::intlinalg::{dot, kernel_basis, solve_integer, IntMatrix, IntVector};

/// `D(f)` together with the maps of the sequences
/// `0 → E(Cok f) → D(f) → (Ker f)∨ → 0` and `N∨ → D(f) → E(N')`.
#[derive(Clone, Debug)]
pub struct DerivedDual {
    pub group: FgaGroup,
    pub ext_cokernel: FgaGroup,
    pub ext_cokernel_to_d: GroupHom,
    pub kernel_dual: FgaGroup,
    pub d_to_kernel_dual: GroupHom,
    pub source_dual_to_d: GroupHom,
    pub d_to_target_ext: GroupHom,
}

/// Columns of `m` written in the basis given by the columns of `basis`.
fn coordinates(basis: &IntMatrix, m: &IntMatrix) -> IntMatrix {
    let cols: Vec<IntVector> = m
        .col_vectors()
        .iter()
        .map(|c| {
            solve_integer(basis, c)
                .expect("dimension")
                .expect("vector lies in the lattice")
        })
        .collect();
    IntMatrix::from_cols(&cols, basis.cols())
}

/// `ker(a) / im(b)` for integer matrices with `a b = 0`, plus the kernel basis.
fn homology(a: &IntMatrix, b: &IntMatrix) -> (IntMatrix, Cokernel) {
    let z = kernel_basis(a);
    let c = cokernel(&coordinates(&z, b));
    (z, c)
}

pub fn dd_of_hom(f: &GroupHom) -> Result<DerivedDual> {
    if !is_tame_hom(f) {
        return Err(Error::NotTame);
    }
    let (n, np) = (f.source(), f.target());
    let a = n.dim();
    let r = n.relation_matrix();
    let rp = np.relation_matrix();
    let kp = rp.cols();
    let fm = f.matrix().clone();
    // Chain lift: F R = R' G.
    let g = coordinates(&rp, &fm.mul(&r)?);

    // Total complex Z^k → Z^a ⊕ Z^k' → Z^b and its dual.
    let d_minus = r.vcat(&g.neg())?;
    let d_zero = fm.hcat(&rp)?;
    let delta_minus = d_zero.transpose();
    let delta_zero = d_minus.transpose();

    let (z0, dc) = homology(&delta_zero, &delta_minus);
    let group = dc.group.clone();
    // Cocycle representatives of the generators of D.
    let reps = z0.mul(&dc.lift)?;
    let to_d = |t: &[BigInt]| -> IntVector {
        let c = solve_integer(&z0, t).expect("dimension").expect("cocycle");
        dc.class_of(&c)
    };

    // N∨ → D: φ ↦ (φ on free coordinates, 0).
    let rn = n.free_rank();
    let cols: Vec<IntVector> = (0..rn)
        .map(|i| {
            let mut t = vec![BigInt::zero(); a + kp];
            t[i] = 1.into();
            to_d(&t)
        })
        .collect();
    let source_dual_to_d =
        GroupHom::new(dual_group(n), group.clone(), IntMatrix::from_cols(&cols, group.dim()))?;

    // D → E(N'): (u, v) ↦ v.
    let tail: Vec<usize> = (a..a + kp).collect();
    let d_to_target_ext = GroupHom::new(group.clone(), ext_group(np), reps.select_rows(&tail))?;

    // D → (Ker f)∨ by pairing against free generators of H⁰(C) ≅ Ker f.
    let (y, hc) = homology(&d_zero, &d_minus);
    let kernel_dual = FgaGroup::lattice(hc.group.free_rank());
    let cycles = y.mul(&hc.lift)?;
    let mut kd = IntMatrix::zeros(kernel_dual.dim(), group.dim());
    for i in 0..kernel_dual.dim() {
        let c = cycles.col(i);
        for j in 0..group.dim() {
            kd[(i, j)] = dot(&c, &reps.col(j));
        }
    }
    let d_to_kernel_dual = GroupHom::new(group.clone(), kernel_dual.clone(), kd)?;

    // E(Cok f) = ker(K^T) / im(d0^T) where K spans ker d0.
    let kk = kernel_basis(&d_zero);
    let (w, ec) = homology(&kk.transpose(), &delta_minus);
    let ext_cokernel = ec.group.clone();
    let ereps = w.mul(&ec.lift)?;
    let cols: Vec<IntVector> = ereps.col_vectors().iter().map(|t| to_d(t)).collect();
    let ext_cokernel_to_d =
        GroupHom::new(ext_cokernel.clone(), group.clone(), IntMatrix::from_cols(&cols, group.dim()))?;

    Ok(DerivedDual {
        group,
        ext_cokernel,
        ext_cokernel_to_d,
        kernel_dual,
        d_to_kernel_dual,
        source_dual_to_d,
        d_to_target_ext,
    })
}

/// For a lattice `N` and `g : N∨ → A` with `A` finite, the extension
/// `0 → N → N' → E(A) → 0` with `N' = D(g)`.
pub fn finite_quotient_extension(n: &FgaGroup, g: &GroupHom) -> Result<(FgaGroup, GroupHom)> {
    if !n.is_lattice() {
        return Err(Error::NonLattice);
    }
    if g.source() != &dual_group(n) {
        return Err(Error::DimensionMismatch(format!("map must start at {}", dual_group(n))));
    }
    if !g.target().is_finite() {
        return Err(Error::InvalidArgument("target of the map must be finite".into()));
    }
    let dd = dd_of_hom(g)?;
    let inc = GroupHom::new(n.clone(), dd.group.clone(), dd.source_dual_to_d.matrix().clone())?;
    Ok((dd.group, inc))
}
