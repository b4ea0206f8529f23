#![allow(dead_code)]
pub mod golden;

use kmfan::abelian::{FgaGroup, GroupHom};
use kmfan::cones::Cone;
use kmfan::intlinalg::{ivec, IntMatrix, IntVector};
use kmfan::kmfan::{canonical_resolution, from_classical, inflate, roots, validate_hom, FreeSubgroup, KmFan, KmFanHom};
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn cone(gens: &[&[i64]], n: usize) -> Cone {
    let g: Vec<IntVector> = gens.iter().map(|v| ivec(v)).collect();
    Cone::from_generators(&g, n).unwrap()
}

pub fn vecs(v: &[&[i64]]) -> Vec<IntVector> {
    v.iter().map(|x| ivec(x)).collect()
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn z_plus_z2() -> FgaGroup {
    FgaGroup::new(1, vec![big(2)]).unwrap()
}

/// The fan of P(2,2)-type: N = Z ⊕ Z/2, F₊ = <(1,1)>, F₋ = <(-1,0)>.
pub fn p22() -> KmFan {
    let n = z_plus_z2();
    KmFan::new(
        n,
        vec![Cone::zero(1), cone(&[&[1]], 1), cone(&[&[-1]], 1)],
        vec![vec![], vecs(&[&[1, 1]]), vecs(&[&[-1, 0]])],
    )
    .unwrap()
}

/// Two rays e₁, e₂ in Z² without the quadrant.
pub fn p22_source() -> KmFan {
    from_classical(&FgaGroup::lattice(2), &[cone(&[&[1, 0]], 2), cone(&[&[0, 1]], 2)]).unwrap()
}

pub fn p22_map() -> KmFanHom {
    let f = GroupHom::new(FgaGroup::lattice(2), z_plus_z2(), IntMatrix::from_i64(&[&[1, -1], &[1, 0]])).unwrap();
    validate_hom(&p22_source(), &p22(), &f).unwrap()
}

pub fn a1() -> KmFan {
    from_classical(&FgaGroup::lattice(1), &[cone(&[&[1]], 1)]).unwrap()
}

pub fn a2() -> KmFan {
    from_classical(&FgaGroup::lattice(2), &[cone(&[&[1, 0], &[0, 1]], 2)]).unwrap()
}

pub fn point_fan() -> KmFan {
    kmfan::kmfan::zero_fan(&FgaGroup::trivial())
}

pub fn times(k: i64) -> GroupHom {
    GroupHom::new(FgaGroup::lattice(1), FgaGroup::lattice(1), IntMatrix::from_i64(&[&[k]])).unwrap()
}

fn cross(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// 0 for angles in [0, π), 1 for [π, 2π).
fn half_plane(v: &[i64]) -> u8 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) { 0 } else { 1 }
}

/// A random classical fan in rank 2: rays sorted by angle, each sector kept
/// with some probability when it is strictly convex.
pub fn random_classical_rank2(rng: &mut ChaCha8Rng) -> KmFan {
    let m = rng.gen_range(1..=5);
    let mut rays: Vec<[i64; 2]> = Vec::new();
    while rays.len() < m {
        let v: [i64; 2] = [rng.gen_range(-3..=3), rng.gen_range(-3..=3)];
        if v == [0, 0] {
            continue;
        }
        let g = gcd(v[0].abs(), v[1].abs());
        let v = [v[0] / g, v[1] / g];
        if !rays.contains(&v) {
            rays.push(v);
        }
    }
    rays.sort_by(|a, b| {
        half_plane(a).cmp(&half_plane(b)).then_with(|| 0.cmp(&cross(a, b)))
    });
    let mut cones: Vec<Cone> = rays.iter().map(|r| cone(&[r], 2)).collect();
    if rays.len() >= 2 {
        for i in 0..rays.len() {
            let (a, b) = (rays[i], rays[(i + 1) % rays.len()]);
            if (rays.len() > 2 || i == 0) && cross(&a, &b) > 0 && rng.gen_bool(0.7) {
                cones.push(cone(&[&a, &b], 2));
            }
        }
    }
    from_classical(&FgaGroup::lattice(2), &cones).unwrap()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// A random valid KM fan, usually non-classical and often with torsion.
pub fn random_fan(seed: u64) -> KmFan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fan = if rng.gen_bool(0.2) {
        let mut cs = vec![];
        if rng.gen_bool(0.7) {
            cs.push(cone(&[&[1]], 1));
        }
        if rng.gen_bool(0.7) {
            cs.push(cone(&[&[-1]], 1));
        }
        from_classical(&FgaGroup::lattice(1), &cs).unwrap()
    } else {
        random_classical_rank2(&mut rng)
    };
    if rng.gen_bool(0.6) {
        fan = canonical_resolution(&fan).unwrap().0;
        let a: Vec<BigInt> = fan.rays().iter().map(|_| big(rng.gen_range(1..=3))).collect();
        fan = roots(&fan, &a).unwrap().0;
    }
    if rng.gen_bool(0.6) {
        let r = fan.rank();
        let k = rng.gen_range(2..=4);
        let target = FgaGroup::new(r, vec![big(k)]).unwrap();
        loop {
            let mut rows: Vec<Vec<i64>> = (0..r).map(|_| (0..r).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            rows.push((0..r).map(|_| rng.gen_range(0..k)).collect());
            let refs: Vec<&[i64]> = rows.iter().map(|x| x.as_slice()).collect();
            let m = IntMatrix::from_i64(&refs);
            let free = m.select_rows(&(0..r).collect::<Vec<_>>());
            if free.determinant().unwrap() == big(0) {
                continue;
            }
            let i = GroupHom::new(fan.group().clone(), target.clone(), m).unwrap();
            fan = inflate(&fan, &i).unwrap().0;
            break;
        }
    }
    fan
}

/// A random element of `n` with small coordinates.
pub fn random_element(rng: &mut ChaCha8Rng, n: &FgaGroup, bound: i64) -> IntVector {
    let x: Vec<i64> = (0..n.dim()).map(|_| rng.gen_range(-bound..=bound)).collect();
    n.reduce(&ivec(&x))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random classical fan in `Z^rank` built from a few simplicial cones that
/// pairwise meet in common faces.
pub fn random_classical_fan(rng: &mut ChaCha8Rng, rank: usize) -> KmFan {
    let mut accepted: Vec<Cone> = Vec::new();
    for _ in 0..8 {
        let d = rng.gen_range(1..=rank);
        let gens: Vec<IntVector> = (0..d)
            .map(|_| ivec(&(0..rank).map(|_| rng.gen_range(-2..=2)).collect::<Vec<i64>>()))
            .collect();
        if kmfan::intlinalg::rank(&IntMatrix::from_cols(&gens, rank)) != d {
            continue;
        }
        let c = Cone::from_generators(&gens, rank).unwrap();
        let ok = accepted.iter().all(|a| {
            let m = a.intersect(&c).unwrap();
            m.is_face_of(a) && m.is_face_of(&c)
        });
        if ok {
            accepted.push(c);
        }
    }
    from_classical(&FgaGroup::lattice(rank), &accepted).unwrap()
}

/// A random foldable GS fan whose folding is atoroidal, with `L` of rank at
/// most 3.
pub fn random_gs_fan(seed: u64) -> kmfan::gsfan::GsFan {
    use kmfan::gsfan::{is_foldable, GsFan};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    loop {
        attempts += 1;
        let k = rng.gen_range(1..=3);
        let n = if attempts > 40 { k } else { rng.gen_range(1..=k) };
        let fan = random_classical_fan(&mut rng, k);
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..k).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let refs: Vec<&[i64]> = rows.iter().map(|x| x.as_slice()).collect();
        let m = IntMatrix::from_i64(&refs);
        if kmfan::intlinalg::rank(&m) != n {
            continue;
        }
        let beta = GroupHom::new(FgaGroup::lattice(k), FgaGroup::lattice(n), m.clone()).unwrap();
        let Ok(g) = GsFan::new(fan.clone(), beta) else { continue };
        if !is_foldable(&g) {
            continue;
        }
        let rays: Vec<IntVector> = fan.cones().iter().flat_map(|c| c.rays().to_vec()).collect();
        let images: Vec<IntVector> = rays.iter().map(|r| m.mul_vec(r).unwrap()).collect();
        if images.is_empty() || kmfan::intlinalg::rank(&IntMatrix::from_cols(&images, n)) != n {
            continue;
        }
        return g;
    }
}

/// Complete fan with rays (1,2), (1,-2), (-1,0).
pub fn three_rays_fan() -> KmFan {
    from_classical(
        &FgaGroup::lattice(2),
        &[
            cone(&[&[1, 2], &[1, -2]], 2),
            cone(&[&[1, -2], &[-1, 0]], 2),
            cone(&[&[1, 2], &[-1, 0]], 2),
        ],
    )
    .unwrap()
}

/// Same cones, with `F_σ₁ = <(1,2), (1,-2)>`.
pub fn unsaturated_fan() -> KmFan {
    let f = three_rays_fan();
    let s1 = cone(&[&[1, 2], &[1, -2]], 2);
    let data: Vec<FreeSubgroup> = f
        .cones()
        .iter()
        .zip(f.data())
        .map(|(c, d)| {
            if c == &s1 {
                FreeSubgroup::new(f.group(), &vecs(&[&[1, 2], &[1, -2]])).unwrap()
            } else {
                d.clone()
            }
        })
        .collect();
    KmFan::from_parts(f.group().clone(), f.cones().to_vec(), data).unwrap()
}

pub fn p1_fan() -> KmFan {
    from_classical(&FgaGroup::lattice(1), &[cone(&[&[1]], 1), cone(&[&[-1]], 1)]).unwrap()
}

pub fn a1_sing() -> KmFan {
    from_classical(&FgaGroup::lattice(2), &[cone(&[&[1, 0], &[1, 2]], 2)]).unwrap()
}

