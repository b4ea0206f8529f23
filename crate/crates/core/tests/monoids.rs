use std::collections::{HashMap, HashSet};

use kmfan::abelian::{FgaGroup, GroupHom};
use kmfan::cones::{dual_cone, Cone};
use kmfan::intlinalg::{dot, ivec, IntMatrix, IntVector};
use kmfan::monoids::*;
use kmfan::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn cone(gens: &[&[i64]], n: usize) -> Cone {
    let g: Vec<IntVector> = gens.iter().map(|v| ivec(v)).collect();
    Cone::from_generators(&g, n).unwrap()
}

fn vecs(v: &[&[i64]]) -> Vec<IntVector> {
    v.iter().map(|x| ivec(x)).collect()
}

fn sub(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Lattice points of a sharp cone in the box `[-r, r]^n`.
fn box_points(c: &Cone, r: i64) -> Vec<IntVector> {
    let n = c.ambient_rank();
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.iter().map(|p| ivec(p)).filter(|p| c.contains_point(p)).collect()
}

/// Irreducible lattice points of a sharp cone, by searching for a summand
/// `y` with `ℓ(y) ≤ ℓ(x)` inside the bounding box of the polytope
/// `{y ∈ c : ℓ(y) ≤ ℓ(x)}`, whose vertices are `0` and `ℓ(x)/ℓ(v) · v` for
/// the rays `v`.
fn is_irreducible(c: &Cone, x: &[BigInt]) -> bool {
    let ell: IntVector = dual_cone(c).rays().iter().fold(vec![BigInt::zero(); x.len()], |a, f| {
        a.iter().zip(f).map(|(p, q)| p + q).collect()
    });
    let lx = BigRational::from_integer(dot(&ell, x));
    let mut bound = 0i64;
    for v in c.rays() {
        let t = &lx / BigRational::from_integer(dot(&ell, v));
        for coord in v {
            let m = (&t * BigRational::from_integer(coord.clone())).abs().ceil().to_integer();
            bound = bound.max(m.to_i64().unwrap());
        }
    }
    !box_points(c, bound).iter().any(|y| {
        y.iter().any(|t| !t.is_zero()) && y.as_slice() != x && c.contains_point(&sub(x, y))
    })
}

/// Brute-force Hilbert basis: irreducibles of the box.
fn oracle_hilbert_basis(c: &Cone, r: i64) -> HashSet<IntVector> {
    box_points(c, r)
        .into_iter()
        .filter(|x| x.iter().any(|t| !t.is_zero()) && is_irreducible(c, x))
        .collect()
}

fn representable(x: &IntVector, hb: &[IntVector], m: &AffineMonoid, memo: &mut HashMap<IntVector, bool>) -> bool {
    if x.iter().all(Zero::is_zero) {
        return true;
    }
    if let Some(&b) = memo.get(x) {
        return b;
    }
    let ok = hb.iter().any(|h| {
        let y = sub(x, h);
        m.contains(&y) && representable(&y, hb, m, memo)
    });
    memo.insert(x.clone(), ok);
    ok
}

#[test]
fn dual_monoid_examples() {
    let q = cone(&[&[1, 0], &[0, 1]], 2);
    let m = dual_monoid(&q, 2).unwrap();
    assert_eq!(hilbert_basis(&m), vecs(&[&[0, 1], &[1, 0]]));

    let s = cone(&[&[1, 0], &[1, 2]], 2);
    let m = dual_monoid(&s, 2).unwrap();
    let hb = hilbert_basis(&m);
    assert_eq!(hb, vecs(&[&[0, 1], &[1, 0], &[2, -1]]));
    let oracle = oracle_hilbert_basis(m.cone(), 5);
    assert_eq!(oracle, hb.iter().cloned().collect());

    let z = dual_monoid(&Cone::zero(1), 1).unwrap();
    assert_eq!(z.unit_basis(), vecs(&[&[1]]));
    assert!(z.sharp_hilbert_basis().is_empty());
    assert!(matches!(dual_monoid(&q, 3), Err(Error::DimensionMismatch(_))));
}

#[test]
fn hilbert_basis_examples() {
    let n2 = AffineMonoid::new(cone(&[&[1, 0], &[0, 1]], 2));
    assert_eq!(hilbert_basis(&n2), vecs(&[&[0, 1], &[1, 0]]));
    let a1 = AffineMonoid::new(cone(&[&[2, -1], &[0, 1]], 2));
    assert_eq!(hilbert_basis(&a1), vecs(&[&[0, 1], &[1, 0], &[2, -1]]));
    let half = AffineMonoid::new(cone(&[&[1, 0], &[0, 1], &[0, -1]], 2));
    assert_eq!(half.sharp_hilbert_basis(), vecs(&[&[1, 0]]));
    assert_eq!(half.unit_basis(), vecs(&[&[0, 1]]));
    assert_eq!(hilbert_basis(&half), vecs(&[&[1, 0], &[0, 1], &[0, -1]]));
}

#[test]
fn hilbert_basis_with_units_in_three_dimensions() {
    // Wedge {x ≥ 0, x + 2y ≥ 0} × R with a slanted lineality.
    let c = Cone::from_inequalities(&vecs(&[&[1, 0, 0], &[1, 2, 0]]), &[], 3).unwrap();
    let m = AffineMonoid::new(c.clone());
    assert_eq!(m.unit_basis(), vecs(&[&[0, 0, 1]]));
    let sharp = m.sharp_hilbert_basis();
    // Points of the sharp quotient cone⟨(0,1),(2,-1)⟩: (0,1),(1,0),(2,-1).
    assert_eq!(sharp, vecs(&[&[0, 1, 0], &[1, 0, 0], &[2, -1, 0]]));
    for h in &sharp {
        assert!(c.contains_point(h));
    }
}

#[test]
fn higher_multiplicity() {
    // cone⟨(1,0),(1,5)⟩: dual is cone⟨(0,1),(5,-1)⟩ with a long chain of generators.
    let s = cone(&[&[1, 0], &[1, 5]], 2);
    let m = dual_monoid(&s, 2).unwrap();
    let hb = hilbert_basis(&m);
    assert_eq!(hb.iter().cloned().collect::<HashSet<_>>(), oracle_hilbert_basis(m.cone(), 6));
    let t = cone(&[&[3, 1], &[-1, 4]], 2);
    let m = AffineMonoid::new(t);
    let hb = hilbert_basis(&m);
    assert_eq!(hb.iter().cloned().collect::<HashSet<_>>(), oracle_hilbert_basis(m.cone(), 5));
}

#[test]
fn face_examples() {
    let q = cone(&[&[1, 0], &[0, 1]], 2);
    let m = dual_monoid(&q, 2).unwrap();
    let f = face_of_monoid(&m, &cone(&[&[1, 0]], 2)).unwrap();
    assert_eq!(hilbert_basis(&f), vecs(&[&[0, 1]]));
    for p in box_points(m.cone(), 4) {
        // Orthogonality oracle: p lies in the face iff p·e1 = 0.
        assert_eq!(f.contains(&p), p[0].is_zero());
    }
    assert_eq!(face_of_monoid(&m, &Cone::zero(2)).unwrap(), m);
    let top = face_of_monoid(&m, &q).unwrap();
    assert!(hilbert_basis(&top).is_empty());
    assert_eq!(
        face_of_monoid(&m, &cone(&[&[1, 1]], 2)).unwrap_err(),
        Error::NotAFace
    );
    // Units of a non-sharp monoid survive in the top face.
    let s = cone(&[&[1, 0]], 2);
    let m = dual_monoid(&s, 2).unwrap();
    let top = face_of_monoid(&m, &s).unwrap();
    assert_eq!(top.unit_basis(), vecs(&[&[0, 1]]));
}

#[test]
fn kernel_submonoid_examples() {
    let z = FgaGroup::lattice(1);
    let z2 = FgaGroup::cyclic(2);
    let n = AffineMonoid::new(cone(&[&[1]], 1));
    let a = GroupHom::new(z.clone(), z2.clone(), IntMatrix::from_i64(&[&[1]])).unwrap();
    let q = kernel_submonoid(&n, &a).unwrap();
    assert_eq!(hilbert_basis(&q), vecs(&[&[2]]));
    let zero = GroupHom::zero(&z, &z2);
    assert_eq!(kernel_submonoid(&n, &zero).unwrap(), n);

    let n2 = AffineMonoid::new(cone(&[&[1, 0], &[0, 1]], 2));
    let a = GroupHom::new(FgaGroup::lattice(2), z2, IntMatrix::from_i64(&[&[1, 1]])).unwrap();
    let q = kernel_submonoid(&n2, &a).unwrap();
    let hb = hilbert_basis(&q);
    assert_eq!(hb, vecs(&[&[0, 2], &[1, 1], &[2, 0]]));
    // Box enumeration oracle: irreducible even-sum points of N².
    let evens: Vec<IntVector> = box_points(n2.cone(), 4)
        .into_iter()
        .filter(|p| (&p[0] + &p[1]) % 2 == BigInt::zero() && p.iter().any(|t| !t.is_zero()))
        .collect();
    let irr: HashSet<IntVector> = evens
        .iter()
        .filter(|x| !evens.iter().any(|y| y != *x && evens.contains(&sub(x, y))))
        .cloned()
        .collect();
    assert_eq!(irr, hb.iter().cloned().collect());
}

#[test]
fn free_monoid_examples() {
    let n2 = AffineMonoid::new(cone(&[&[1, 0], &[0, 1]], 2));
    assert!(is_free_monoid(&n2).unwrap());
    let a1 = AffineMonoid::new(cone(&[&[2, -1], &[0, 1]], 2));
    assert!(!is_free_monoid(&a1).unwrap());
    assert!(is_free_monoid(&AffineMonoid::new(cone(&[&[1]], 1))).unwrap());
    let half = AffineMonoid::new(cone(&[&[1, 0], &[0, 1], &[0, -1]], 2));
    assert_eq!(is_free_monoid(&half).unwrap_err(), Error::NotSharp);
    // Free but not full-dimensional.
    assert!(is_free_monoid(&AffineMonoid::new(cone(&[&[1, 1, 0]], 3))).unwrap());
    // The Hilbert basis also contains (1,0), so three generators in rank 2.
    let m = AffineMonoid::new(cone(&[&[1, 1], &[1, -1]], 2));
    assert!(!is_free_monoid(&m).unwrap());
}

#[test]
fn zero_monoid() {
    let m = AffineMonoid::new(Cone::zero(2));
    assert!(hilbert_basis(&m).is_empty());
    assert!(is_free_monoid(&m).unwrap());
}

// ---------------------------------------------------------------- properties

fn sharp_cone(n: usize) -> impl Strategy<Value = Cone> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n), 1..=4).prop_map(move |g| {
        let gens: Vec<IntVector> = g
            .iter()
            .map(|v| {
                let mut w = ivec(v);
                w[0] = BigInt::from(1) + w[0].abs();
                w
            })
            .collect();
        Cone::from_generators(&gens, n).unwrap()
    })
}

fn cone_any_rank() -> impl Strategy<Value = Cone> {
    (1usize..=3).prop_flat_map(sharp_cone)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hilbert_basis_is_irreducible_and_complete(c in cone_any_rank()) {
        let m = AffineMonoid::new(c.clone());
        let hb = hilbert_basis(&m);
        for h in &hb {
            prop_assert!(c.contains_point(h));
            prop_assert!(is_irreducible(&c, h));
        }
        let mut memo = HashMap::new();
        let r = if c.ambient_rank() == 3 { 4 } else { 6 };
        for p in box_points(&c, r) {
            prop_assert!(representable(&p, &hb, &m, &mut memo));
        }
    }

    #[test]
    fn sharp_dual_monoid_generates_the_lattice(c in cone_any_rank()) {
        let n = c.ambient_rank();
        let m = dual_monoid(&c, n).unwrap();
        prop_assert_eq!(m.group_basis(), kmfan::intlinalg::lattice_basis(&hilbert_basis(&m), n));
        if c.is_full_dimensional() {
            // σ full-dimensional ⇒ σ∨ sharp; σ sharp ⇒ S_σ^gp = Z^n.
            prop_assert!(m.is_sharp());
        }
        prop_assert_eq!(m.group_basis().len(), n);
    }

    #[test]
    fn kernel_submonoid_is_dense(c in sharp_cone(2), row in prop::collection::vec(0i64..6, 2), order in 2i64..=6) {
        let m = AffineMonoid::new(c.clone());
        let e = FgaGroup::cyclic(order);
        let a = GroupHom::new(FgaGroup::lattice(2), e.clone(), IntMatrix::from_i64(&[&row])).unwrap();
        let q = kernel_submonoid(&m, &a).unwrap();
        let qb = hilbert_basis(&q);
        for g in &qb {
            prop_assert_eq!(a.apply(g), e.zero());
            prop_assert!(m.contains(g));
        }
        let mut memo = HashMap::new();
        for h in hilbert_basis(&m) {
            let scaled: IntVector = h.iter().map(|x| x * BigInt::from(order)).collect();
            prop_assert!(representable(&scaled, &qb, &q, &mut memo));
        }
    }
}
