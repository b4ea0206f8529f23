//! Finitely generated abelian groups in invariant-factor normal form, their
//! homomorphisms, duals, `Ext¹(-, Z)`, and the group `D(f)` attached to a
//! tame map.

mod derived;
mod group;
mod hom;

pub use derived::{dd_of_hom, finite_quotient_extension, DerivedDual};
pub use group::{cokernel, Cokernel, FgaGroup};
pub use hom::{
    direct_sum, dual_group, dual_hom, ext_group, hom_kernel_cokernel, is_tame_hom, quotient,
    DirectSum, GroupHom, KernelCokernel, Quotient, Subgroup,
};

/// A subgroup `H ⊆ N` as an abstract group with its inclusion.
pub fn subgroup_as_group(h: &Subgroup) -> (FgaGroup, GroupHom) {
    h.as_group()
}
