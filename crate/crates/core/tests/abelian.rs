use kmfan::abelian::*;
use kmfan::intlinalg::{ivec, lattice_basis, rank, IntMatrix, IntVector};
use kmfan::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn grp(r: usize, t: &[i64]) -> FgaGroup {
    FgaGroup::new(r, ivec(t)).unwrap()
}

fn hom(s: &FgaGroup, t: &FgaGroup, m: &[&[i64]]) -> GroupHom {
    let mat = if m.is_empty() { IntMatrix::zeros(t.dim(), s.dim()) } else { IntMatrix::from_i64(m) };
    GroupHom::new(s.clone(), t.clone(), mat).unwrap()
}

fn p22_map() -> GroupHom {
    hom(&grp(2, &[]), &grp(1, &[2]), &[&[1, -1], &[1, 0]])
}

#[test]
fn quotient_examples() {
    let z = grp(1, &[]);
    let q = quotient(&z, &Subgroup::new(z.clone(), vec![ivec(&[2])]).unwrap()).unwrap();
    assert_eq!(q.group, grp(0, &[2]));

    let n = grp(1, &[2]);
    let h = Subgroup::new(n.clone(), vec![ivec(&[1, 1])]).unwrap();
    let q = quotient(&n, &h).unwrap();
    assert_eq!(q.group, grp(0, &[2]));
    assert!(q.proj.is_surjective());

    let z2 = grp(2, &[]);
    let h = Subgroup::new(z2.clone(), vec![ivec(&[1, 1]), ivec(&[-1, 0])]).unwrap();
    assert_eq!(quotient(&z2, &h).unwrap().group, FgaGroup::trivial());
}

#[test]
fn quotient_rejects_foreign_generators() {
    let z = grp(1, &[]);
    assert!(matches!(Subgroup::new(z.clone(), vec![ivec(&[1, 0])]), Err(Error::GeneratorOutsideAmbient(_))));
    let h = Subgroup::new(grp(2, &[]), vec![ivec(&[1, 0])]).unwrap();
    assert!(matches!(quotient(&z, &h), Err(Error::GeneratorOutsideAmbient(_))));
}

#[test]
fn dual_and_ext_examples() {
    assert_eq!(dual_group(&grp(2, &[3])), grp(2, &[]));
    assert_eq!(dual_group(&grp(0, &[2])), FgaGroup::trivial());
    assert_eq!(dual_group(&FgaGroup::trivial()), FgaGroup::trivial());
    assert_eq!(ext_group(&grp(1, &[])), FgaGroup::trivial());
    assert_eq!(ext_group(&grp(0, &[6])), grp(0, &[6]));
    assert_eq!(ext_group(&grp(2, &[2, 4])), grp(0, &[2, 4]));
}

/// Ext¹(A, Z) from a free resolution: dualize `0 → Z^k → Z^k → A → 0`
/// and take the cokernel of the transposed relation matrix.
#[test]
fn ext_matches_resolution() {
    let a = grp(2, &[2, 4]);
    let r = a.relation_matrix();
    let tors: Vec<usize> = (a.free_rank()..a.dim()).collect();
    let square = r.select_rows(&tors);
    assert_eq!(cokernel(&square.transpose()).group, ext_group(&a));
}

#[test]
fn kernel_cokernel_examples() {
    let z = grp(1, &[]);
    let two = hom(&z, &z, &[&[2]]);
    let kc = hom_kernel_cokernel(&two);
    assert!(kc.kernel.is_trivial());
    assert_eq!(kc.cokernel, grp(0, &[2]));

    let kc = hom_kernel_cokernel(&p22_map());
    assert_eq!(kc.kernel.preimage_basis(), lattice_basis(&[ivec(&[2, 2])], 2));
    assert!(kc.kernel.contains(&ivec(&[2, 2])));
    assert!(!kc.kernel.contains(&ivec(&[1, 1])));
    assert_eq!(kc.cokernel, FgaGroup::trivial());

    let zero = hom(&z, &z, &[]);
    let kc = hom_kernel_cokernel(&zero);
    assert_eq!(kc.kernel.as_group().0, z);
    assert_eq!(kc.cokernel, z);
}

#[test]
fn tame_examples() {
    let z = grp(1, &[]);
    assert!(is_tame_hom(&hom(&z, &z, &[&[2]])));
    assert!(!is_tame_hom(&hom(&grp(1, &[2]), &z, &[&[1, 0]])));
    assert!(is_tame_hom(&p22_map()));
    assert!(!is_tame_hom(&hom(&z, &grp(2, &[]), &[&[1], &[0]])));
}

#[test]
fn dd_examples() {
    let proj = hom(&grp(2, &[]), &grp(1, &[]), &[&[1, 0]]);
    assert_eq!(dd_of_hom(&proj).unwrap().group, grp(1, &[]));
    let z = grp(1, &[]);
    assert_eq!(dd_of_hom(&hom(&z, &z, &[&[2]])).unwrap().group, grp(0, &[2]));
    let d = dd_of_hom(&p22_map()).unwrap();
    assert_eq!(d.group, grp(1, &[]));
    assert_eq!(d.ext_cokernel, FgaGroup::trivial());
    assert!(d.d_to_kernel_dual.is_isomorphism());

    let bad = hom(&grp(1, &[2]), &z, &[&[1, 0]]);
    assert_eq!(dd_of_hom(&bad).unwrap_err(), Error::NotTame);
}

#[test]
fn special_formulas() {
    // Surjective: D = (Ker f)∨; injective: D = E(Cok f).
    let f = hom(&grp(2, &[2]), &grp(1, &[4]), &[&[1, 0, 0], &[0, 1, 2]]);
    let d = dd_of_hom(&f).unwrap();
    assert!(f.is_surjective());
    assert!(d.d_to_kernel_dual.is_isomorphism());
    let g = hom(&grp(1, &[2]), &grp(1, &[4]), &[&[3, 0], &[1, 2]]);
    assert!(g.is_injective());
    let d = dd_of_hom(&g).unwrap();
    assert!(d.ext_cokernel_to_d.is_isomorphism());
    assert_eq!(d.group, ext_group(&hom_kernel_cokernel(&g).cokernel));
}

#[test]
fn finite_quotient_extension_examples() {
    let z = grp(1, &[]);
    let a = grp(0, &[2]);
    let (np, inc) = finite_quotient_extension(&z, &hom(&z, &a, &[])).unwrap();
    assert_eq!(np, grp(1, &[2]));
    let e = inc.apply(&ivec(&[1]));
    assert_eq!(e[0].abs(), BigInt::one());
    assert!(inc.is_injective());
    assert!(hom_kernel_cokernel(&inc).cokernel == grp(0, &[2]));

    let (np, inc) = finite_quotient_extension(&z, &hom(&z, &a, &[&[1]])).unwrap();
    assert_eq!(np, z);
    assert_eq!(inc.apply(&ivec(&[1]))[0].abs(), BigInt::from(2));

    let (np, inc) = finite_quotient_extension(&z, &GroupHom::zero(&z, &FgaGroup::trivial())).unwrap();
    assert_eq!(np, z);
    assert!(inc.is_isomorphism());

    assert_eq!(
        finite_quotient_extension(&grp(1, &[2]), &hom(&z, &a, &[])).unwrap_err(),
        Error::NonLattice
    );
}

#[test]
fn extension_recovers_the_finite_group() {
    // E(N'/N) ≅ A.
    let n = grp(2, &[]);
    let a = grp(0, &[2, 6]);
    let g = hom(&n, &a, &[&[1, 1], &[3, 2]]);
    let (np, inc) = finite_quotient_extension(&n, &g).unwrap();
    assert!(inc.is_injective());
    let cok = hom_kernel_cokernel(&inc).cokernel;
    assert_eq!(ext_group(&cok), a);
    assert_eq!(np.free_rank(), 2);
}

#[test]
fn direct_sum_splits() {
    let a = grp(1, &[2]);
    let b = grp(0, &[3]);
    let s = direct_sum(&a, &b);
    assert_eq!(s.group, grp(1, &[6]));
    for (i, g) in [&a, &b].iter().enumerate() {
        let id = s.inj[i].then(&s.proj[i]).unwrap();
        assert_eq!(id, GroupHom::identity(g));
    }
    assert!(s.inj[0].then(&s.proj[1]).unwrap().matrix().is_zero());
}

#[test]
fn subgroup_as_group_and_intersection() {
    let n = grp(1, &[4]);
    let h = Subgroup::new(n.clone(), vec![ivec(&[0, 2]), ivec(&[2, 0])]).unwrap();
    let (g, incl) = subgroup_as_group(&h);
    assert_eq!(g, grp(1, &[2]));
    assert!(incl.is_injective());
    let k = Subgroup::new(n.clone(), vec![ivec(&[1, 1])]).unwrap();
    let i = h.intersection(&k).unwrap();
    assert!(i.contains(&ivec(&[2, 2])));
    assert!(!i.contains(&ivec(&[1, 1])));
    assert!(!i.contains(&ivec(&[0, 2])));
}

// ---------------------------------------------------------------- properties

/// All normal forms of finite groups of order `n`.
fn finite_groups(n: u64) -> Vec<Vec<u64>> {
    fn go(rest: u64, prev: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        // acc is built from the largest invariant down; each new one divides the previous.
        if rest == 1 {
            let mut v = acc.clone();
            v.reverse();
            out.push(v);
            return;
        }
        for d in 2..=rest {
            if rest % d == 0 && (prev == 0 || prev % d == 0) {
                acc.push(d);
                go(rest / d, d, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, 0, &mut Vec::new(), &mut out);
    out
}

#[test]
fn ext_is_an_involution_on_finite_groups() {
    let mut count = 0;
    for n in 1..=36u64 {
        for inv in finite_groups(n) {
            let t: Vec<i64> = inv.iter().map(|&x| x as i64).collect();
            let a = grp(0, &t);
            assert_eq!(a.order(), Some(BigInt::from(n)));
            assert_eq!(ext_group(&ext_group(&a)), a);
            count += 1;
        }
    }
    // Sum over n ≤ 36 of the number of abelian groups of order n.
    assert_eq!(count, 62);
}

fn torsion_list() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(2i64..=8, 0..=2)
}

/// A group in normal form from arbitrary small orders.
fn group_strategy(max_rank: usize) -> impl Strategy<Value = FgaGroup> {
    (0..=max_rank, torsion_list()).prop_map(|(r, t)| FgaGroup::from_invariants(r, &ivec(&t)))
}

/// A homomorphism between the given groups with free-part matrix `m`
/// and random torsion images chosen to be well defined.
fn hom_strategy(max_rank: usize, tame_rank: bool) -> impl Strategy<Value = GroupHom> {
    (group_strategy(max_rank), group_strategy(max_rank))
        .prop_filter("target rank bound", move |(s, t)| !tame_rank || t.free_rank() <= s.free_rank())
        .prop_flat_map(|(s, t)| {
            let entries = prop::collection::vec(-3i64..=3, s.dim() * t.dim());
            (Just(s), Just(t), entries)
        })
        .prop_map(|(s, t, e)| {
            let mut m = IntMatrix::zeros(t.dim(), s.dim());
            let (rs, rt) = (s.free_rank(), t.free_rank());
            for i in 0..t.dim() {
                for j in 0..s.dim() {
                    let x = BigInt::from(e[i * s.dim() + j]);
                    m[(i, j)] = if j < rs {
                        x
                    } else if i < rt {
                        BigInt::zero()
                    } else {
                        let d = &s.torsion_invariants()[j - rs];
                        let dp = &t.torsion_invariants()[i - rt];
                        x * (dp / d.gcd(dp))
                    };
                }
            }
            GroupHom::new(s, t, m).unwrap()
        })
}

/// Index of a full-rank sublattice of `Z^n`, from its Hermite basis.
fn lattice_index(gens: &[IntVector], n: usize) -> Option<BigInt> {
    let b = lattice_basis(gens, n);
    if b.len() < n {
        return None;
    }
    let mut prod = BigInt::one();
    for row in &b {
        // Hermite rows are echelon; the pivot is the first nonzero entry.
        let p = row.iter().find(|x| !x.is_zero()).unwrap();
        prod *= p.abs();
    }
    Some(prod)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn quotient_is_presentation_independent(
        n in group_strategy(3),
        coeffs in prop::collection::vec(prop::collection::vec(-4i64..=4, 5), 1..=3),
        mix in prop::collection::vec(-2i64..=2, 9),
    ) {
        let gens: Vec<IntVector> = coeffs.iter().map(|c| n.reduce(&ivec(&c[..n.dim()].iter().copied().chain(std::iter::repeat(0)).take(n.dim()).collect::<Vec<_>>()))).collect();
        // Second presentation: add integer combinations of the generators.
        let mut other = gens.clone();
        for (k, g) in gens.iter().enumerate() {
            for (l, h) in gens.iter().enumerate() {
                let c = BigInt::from(mix[(3 * k + l) % mix.len()]);
                let v: IntVector = g.iter().zip(h).map(|(a, b)| a + &c * b).collect();
                other.push(n.reduce(&v));
            }
        }
        other.reverse();
        let q1 = quotient(&n, &Subgroup::new(n.clone(), gens).unwrap()).unwrap();
        let q2 = quotient(&n, &Subgroup::new(n.clone(), other).unwrap()).unwrap();
        prop_assert_eq!(q1.group, q2.group);
    }

    #[test]
    fn dd_ranks_and_orders(f in hom_strategy(3, true)) {
        prop_assume!(is_tame_hom(&f));
        let d = dd_of_hom(&f).unwrap();
        // Ker f rank from the free matrix; Cok f order from a Hermite basis.
        let ker_rank = f.source().free_rank() - rank(&f.free_matrix());
        prop_assert_eq!(d.group.free_rank(), ker_rank);
        let mut gens = f.images();
        gens.extend(f.target().relation_matrix().col_vectors());
        let cok_order = lattice_index(&gens, f.target().dim()).unwrap();
        prop_assert_eq!(d.group.torsion_order(), cok_order);
    }

    #[test]
    fn gsequence_is_exact(f in hom_strategy(3, true)) {
        prop_assume!(is_tame_hom(&f));
        let d = dd_of_hom(&f).unwrap();
        prop_assert!(d.ext_cokernel_to_d.is_injective());
        prop_assert!(d.d_to_kernel_dual.is_surjective());
        let comp = d.ext_cokernel_to_d.then(&d.d_to_kernel_dual).unwrap();
        prop_assert!(comp.matrix().is_zero());
        let ker = hom_kernel_cokernel(&d.d_to_kernel_dual).kernel;
        let img = d.ext_cokernel_to_d.image();
        prop_assert!(ker == img);
    }

    #[test]
    fn les_is_exact_at_d(f in hom_strategy(3, true)) {
        prop_assume!(is_tame_hom(&f));
        let d = dd_of_hom(&f).unwrap();
        for g in d.source_dual_to_d.images() {
            prop_assert_eq!(d.d_to_target_ext.apply(&g), d.d_to_target_ext.target().zero());
        }
        let ker = hom_kernel_cokernel(&d.d_to_target_ext).kernel;
        let img = d.source_dual_to_d.image();
        for g in ker.generators() {
            prop_assert!(img.contains(g));
        }
    }

    #[test]
    fn tame_maps_compose(f in hom_strategy(2, true), seed in prop::collection::vec(-3i64..=3, 16)) {
        prop_assume!(is_tame_hom(&f));
        // Second factor with matching source, built like the strategy above.
        let s = f.target().clone();
        let t = FgaGroup::from_invariants(s.free_rank().min(1), &ivec(&[2]));
        let mut m = IntMatrix::zeros(t.dim(), s.dim());
        for i in 0..t.dim() {
            for j in 0..s.dim() {
                let x = BigInt::from(seed[(i * s.dim() + j) % seed.len()]);
                m[(i, j)] = if j < s.free_rank() {
                    x
                } else if i < t.free_rank() {
                    BigInt::zero()
                } else {
                    let dd = &s.torsion_invariants()[j - s.free_rank()];
                    let dp = &t.torsion_invariants()[i - t.free_rank()];
                    x * (dp / dd.gcd(dp))
                };
            }
        }
        let g = GroupHom::new(s, t, m).unwrap();
        prop_assume!(is_tame_hom(&g));
        prop_assert!(is_tame_hom(&f.then(&g).unwrap()));
    }

    #[test]
    fn homomorphism_laws(f in hom_strategy(3, false), x in prop::collection::vec(-9i64..=9, 5), y in prop::collection::vec(-9i64..=9, 5)) {
        let s = f.source();
        let x = s.reduce(&ivec(&x[..s.dim()]));
        let y = s.reduce(&ivec(&y[..s.dim()]));
        prop_assert_eq!(f.apply(&s.add(&x, &y)), f.target().add(&f.apply(&x), &f.apply(&y)));
        let kc = hom_kernel_cokernel(&f);
        for g in kc.kernel.generators() {
            prop_assert_eq!(f.apply(g), f.target().zero());
        }
        prop_assert!(kc.cok_proj.is_surjective());
    }
}
