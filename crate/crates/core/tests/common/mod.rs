#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use reducible_grw::codes::gabidulin;
use reducible_grw::linalg::all_vectors;
use reducible_grw::reduction::{cartesian, reducible, OffDiagonal};
use reducible_grw::{seeded_rng, FieldTower, LinearCode, Mat, Reduction, Scalar};

pub fn tower(p: u32, m: usize) -> Arc<FieldTower> {
    Arc::new(FieldTower::new(p, m).unwrap())
}

pub fn random_scalar(f: &FieldTower, rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_index(rng.gen_range(0..f.order()))
}

pub fn random_mat(f: &FieldTower, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Mat {
    Mat::from_vec(rows, cols, (0..rows * cols).map(|_| random_scalar(f, rng)).collect())
}

pub fn random_base_mat(f: &FieldTower, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Mat {
    Mat::from_vec(rows, cols, (0..rows * cols).map(|_| f.base(rng.gen_range(0..f.p()))).collect())
}

/// Random full-rank `k x n` generator.
pub fn random_code(f: &Arc<FieldTower>, n: usize, k: usize, rng: &mut ChaCha8Rng) -> LinearCode {
    loop {
        let g = random_mat(f, k, n, rng);
        if let Ok(c) = LinearCode::new(f.clone(), g) {
            return c;
        }
    }
}

pub fn random_invertible_base(f: &FieldTower, n: usize, rng: &mut ChaCha8Rng) -> Mat {
    loop {
        let a = random_base_mat(f, n, n, rng);
        if a.inverse(f).is_some() {
            return a;
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub seed: u64,
    pub reduction: Reduction,
    pub cartesian: bool,
    /// Both main components are Gabidulin (MRD).
    pub mrd_mains: bool,
}

/// 50 two-block reducible codes over `F_{2^m}`, `m ∈ {2, 3}`, block lengths
/// at most 3: Gabidulin or random main components, zero or random
/// off-diagonal block.
pub fn reducible_corpus() -> Vec<Instance> {
    (0..50u64)
        .map(|seed| {
            let mut rng = seeded_rng(seed, 10);
            let m = 2 + (seed % 2) as usize;
            let f = tower(2, m);
            let gab = seed % 3 != 2;
            let mut mains = Vec::new();
            for _ in 0..2 {
                if gab {
                    let n = rng.gen_range(1..=m.min(3));
                    let k = rng.gen_range(1..=n);
                    mains.push(gabidulin(f.clone(), n, k, None).unwrap());
                } else {
                    let n = rng.gen_range(1..=3);
                    let k = rng.gen_range(1..=n);
                    mains.push(random_code(&f, n, k, &mut rng));
                }
            }
            let cart = seed % 5 == 0;
            let reduction = if cart {
                cartesian(&mains).unwrap()
            } else {
                reducible(&mains, &OffDiagonal::Random { seed }).unwrap()
            };
            Instance { seed, reduction, cartesian: cart, mrd_mains: gab }
        })
        .collect()
}

/// Minimum rank weight by scanning every nonzero message.
pub fn brute_min_rank_weight(code: &LinearCode) -> Option<usize> {
    let f = code.field();
    let alphabet: Vec<Scalar> = f.elements().collect();
    all_vectors(&alphabet, code.k())
        .filter(|x| x.iter().any(|s| !s.is_zero()))
        .map(|x| reducible_grw::rankmetric::rank_weight(f, &code.encode(&x).unwrap()))
        .min()
}

/// Every `F_q`-subspace of `F_q^n` of dimension `d`, brute force: all
/// `d`-tuples of base vectors, kept when independent and new.
pub fn brute_base_subspaces(f: &FieldTower, n: usize, d: usize) -> Vec<Mat> {
    let base: Vec<Scalar> = f.base_elements().collect();
    let vectors: Vec<Vec<Scalar>> = all_vectors(&base, n).collect();
    let mut seen: Vec<Mat> = Vec::new();
    let mut idx = vec![0usize; d];
    loop {
        let rows: Vec<Vec<Scalar>> = idx.iter().map(|&i| vectors[i].clone()).collect();
        let m = Mat::from_rows(n, &rows);
        if m.rank(f) == d {
            let canon = m.rref(f).basis();
            if !seen.contains(&canon) {
                seen.push(canon);
            }
        }
        let mut pos = d;
        loop {
            if pos == 0 {
                return seen;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < vectors.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
