//! The affine groups `GMF(m,q)` of pairs `(X, Y)` and their conjugation by
//! the ambient upper-triangular group.

use crate::group::{AffinePair, FiniteGroup, Subgroup};
use crate::linalg::Mat;

/// Conjugation of `(X, Y)` by the block matrix `[[A, B], [0, C]]` with
/// `A` in GL(2,q), `B` a 2 x m matrix and `C` in GL(m,q):
/// `(A^-1 X A, A^-1 (X - 1) B + A^-1 Y C)`.
pub fn gamma_conj(p: &AffinePair, a: &Mat, b: &Mat, c: &Mat) -> AffinePair {
    let ai = a.inv().expect("A is invertible");
    let x = ai.mul_unchecked(&p.x).mul_unchecked(a);
    let x_minus_1 = p.x.sub(&Mat::identity(p.x.field(), 2)).unwrap();
    let y = ai
        .mul_unchecked(&x_minus_1)
        .mul_unchecked(b)
        .add(&ai.mul_unchecked(&p.y).mul_unchecked(c))
        .unwrap();
    AffinePair { x, y }
}

/// The normal subgroup `M = {(1, Y)}` of a `GMF` group.
pub fn translations(group: &FiniteGroup) -> Subgroup {
    let members: Vec<u32> = group
        .ids()
        .filter(|&x| {
            group
                .element(x)
                .as_affine()
                .is_some_and(|a| a.x.is_identity())
        })
        .collect();
    group.subgroup_from_members(&members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_mat(f: &Field, rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
        let data = (0..rows * cols)
            .map(|_| rng.gen_range(0..f.order()) as u16)
            .collect();
        Mat::from_vec(f, rows, cols, data)
    }

    fn random_invertible(f: &Field, rng: &mut ChaCha8Rng, n: usize) -> Mat {
        loop {
            let m = random_mat(f, rng, n, n);
            if m.rank() == n {
                return m;
            }
        }
    }

    // The formula against the literal block-matrix conjugation.
    #[test]
    fn formula_matches_block_conjugation() {
        let f = Field::of_order(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in 1..=3 {
            for _ in 0..50 {
                let x = loop {
                    let x = random_invertible(&f, &mut rng, 2);
                    if x.det().unwrap() == 1 {
                        break x;
                    }
                };
                let p = AffinePair::new(x, random_mat(&f, &mut rng, 2, m));
                let a = random_invertible(&f, &mut rng, 2);
                let b = random_mat(&f, &mut rng, 2, m);
                let c = random_invertible(&f, &mut rng, m);

                let mut gamma = Mat::identity(&f, 2 + m);
                gamma.put(0, 0, &a);
                gamma.put(0, 2, &b);
                gamma.put(2, 2, &c);
                let block = gamma
                    .inv()
                    .unwrap()
                    .mul_unchecked(&p.to_block())
                    .mul_unchecked(&gamma);
                assert_eq!(gamma_conj(&p, &a, &b, &c).to_block(), block);
            }
        }
    }
}
