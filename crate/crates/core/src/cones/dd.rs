//! Double description: extreme rays and lineality of `{x : A x ≥ 0, E x = 0}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::intlinalg::{
    dot, hnf_rows, kernel_basis, primitive, rank, solve_rational, IntMatrix, IntVector,
};

/// Result of a conversion: primitive extreme rays (sorted, in the
/// orthogonal complement of the lineality space) and a Hermite basis of the
/// lineality space.
pub(crate) struct Vrep {
    pub rays: Vec<IntVector>,
    pub lineality: Vec<IntVector>,
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

fn scale_to_integer(v: &[BigRational]) -> IntVector {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: IntVector = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    primitive(&ints)
}

pub(crate) fn hrep_to_vrep(ineqs: &[IntVector], eqs: &[IntVector], n: usize) -> Vrep {
    let mut all: Vec<IntVector> = ineqs.to_vec();
    all.extend(eqs.iter().cloned());
    let lin_m = kernel_basis(&IntMatrix::from_rows(&all, n));
    let lineality = hnf_rows(&lin_m.col_vectors(), n);

    // Work inside W = {E x = 0} ∩ L^⊥ with an integer basis.
    let mut wrows: Vec<IntVector> = eqs.to_vec();
    wrows.extend(lineality.iter().cloned());
    let b = kernel_basis(&IntMatrix::from_rows(&wrows, n));
    let d = b.cols();
    if d == 0 {
        return Vrep { rays: Vec::new(), lineality };
    }
    let bt = b.transpose();
    let cons: Vec<IntVector> = ineqs
        .iter()
        .map(|a| bt.mul_vec(a).expect("dimension"))
        .filter(|a| a.iter().any(|x| !x.is_zero()))
        .collect();
    let m = cons.len();

    // Initial simplicial cone on d independent constraints.
    let mut basis_idx: Vec<usize> = Vec::new();
    for i in 0..m {
        let mut trial: Vec<IntVector> = basis_idx.iter().map(|&j| cons[j].clone()).collect();
        trial.push(cons[i].clone());
        if rank(&IntMatrix::from_rows(&trial, d)) == trial.len() {
            basis_idx.push(i);
            if basis_idx.len() == d {
                break;
            }
        }
    }
    assert_eq!(basis_idx.len(), d, "cone is pointed after removing the lineality space");
    let a0 = IntMatrix::from_rows(&basis_idx.iter().map(|&j| cons[j].clone()).collect::<Vec<_>>(), d);
    let mut rays: Vec<(IntVector, Bits)> = (0..d)
        .map(|j| {
            let mut e = vec![BigInt::zero(); d];
            e[j] = BigInt::one();
            let x = solve_rational(&a0, &e).expect("dimension").expect("invertible");
            let r = scale_to_integer(&x);
            let mut z = Bits::new(m);
            for (k, &i) in basis_idx.iter().enumerate() {
                if k != j {
                    z.set(i);
                }
            }
            (r, z)
        })
        .collect();

    let mut done = vec![false; m];
    for &i in &basis_idx {
        done[i] = true;
    }
    for i in 0..m {
        if done[i] {
            continue;
        }
        done[i] = true;
        let a = &cons[i];
        let vals: Vec<BigInt> = rays.iter().map(|(r, _)| dot(a, r)).collect();
        let mut next: Vec<(IntVector, Bits)> = Vec::new();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].1.and(&rays[q].1);
                if d >= 2 && common.count() < d - 2 {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|k| k == p || k == q || !common.subset_of(&rays[k].1));
                if !adjacent {
                    continue;
                }
                let (rp, rq) = (&rays[p].0, &rays[q].0);
                let v: IntVector = rq
                    .iter()
                    .zip(rp)
                    .map(|(x, y)| &vals[p] * x - &vals[q] * y)
                    .collect();
                if v.iter().all(Zero::is_zero) {
                    continue;
                }
                let mut z = common;
                z.set(i);
                next.push((primitive(&v), z));
            }
        }
        for (k, (r, z)) in rays.into_iter().enumerate() {
            if vals[k].is_zero() {
                let mut z = z;
                z.set(i);
                next.push((r, z));
            } else if vals[k].is_positive() {
                next.push((r, z));
            }
        }
        rays = next;
    }

    let mut out: Vec<IntVector> =
        rays.iter().map(|(y, _)| primitive(&b.mul_vec(y).expect("dimension"))).collect();
    out.sort();
    out.dedup();
    Vrep { rays: out, lineality }
}
