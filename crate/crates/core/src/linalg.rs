//! Dense exact linear algebra over a [`FieldTower`].
//!
//! Matrices over `F_q` are ordinary [`Mat`]s whose entries happen to lie in
//! the base field; since `F_q ⊂ F_{q^m}`, rank and row reduction agree over
//! both fields.

use std::ops::{Index, IndexMut};

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldTower, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Reduced row echelon form of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// Same shape as the input; zero rows at the bottom.
    pub mat: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Rref {
    /// The nonzero rows, i.e. the canonical basis of the row space.
    pub fn basis(&self) -> Mat {
        self.mat.row_range(0, self.rank)
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Scalar::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data has wrong length");
        Mat { rows, cols, data }
    }

    /// Builds a matrix from row vectors; `cols` fixes the width when there
    /// are no rows.
    pub fn from_rows(cols: usize, rows: &[Vec<Scalar>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Mat { rows: rows.len(), cols, data }
    }

    pub fn row_vector(v: &[Scalar]) -> Self {
        Mat { rows: 1, cols: v.len(), data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Scalar] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn row_range(&self, start: usize, end: usize) -> Mat {
        Mat {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        let mut out = Mat::zeros(rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                out[(i, j)] = self[(r, c)];
            }
        }
        out
    }

    pub fn set_block(&mut self, row0: usize, col0: usize, block: &Mat) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(row0 + r, col0 + c)] = block[(r, c)];
            }
        }
    }

    pub fn vstack(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Mat { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn hstack(&self, other: &Mat) -> Result<Mat> {
        if self.rows != other.rows {
            return Err(Error::Dimension("row counts differ".into()));
        }
        let mut out = Mat::zeros(self.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(0, self.cols, other);
        Ok(out)
    }

    pub fn is_over_base(&self, f: &FieldTower) -> bool {
        self.data.iter().all(|&x| f.in_base_field(x))
    }

    pub fn map(&self, mut g: impl FnMut(Scalar) -> Scalar) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| g(x)).collect() }
    }

    pub fn mul(&self, f: &FieldTower, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out[(i, j)], f.mul(a, other[(k, j)]));
                    out[(i, j)] = v;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, f: &FieldTower, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} rows",
                x.len(),
                self.rows
            )));
        }
        let mut out = vec![Scalar::ZERO; self.cols];
        for (r, &a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(a, g));
            }
        }
        Ok(out)
    }

    pub fn add(&self, f: &FieldTower, other: &Mat) -> Result<Mat> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension("shapes differ".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, f: &FieldTower, s: Scalar) -> Mat {
        self.map(|x| f.mul(s, x))
    }

    pub fn neg(&self, f: &FieldTower) -> Mat {
        self.map(|x| f.neg(x))
    }

    /// Entrywise `x -> x^{q^i}`.
    pub fn frobenius(&self, f: &FieldTower, i: usize) -> Mat {
        self.map(|x| f.frobenius(x, i))
    }

    pub fn rref(&self, f: &FieldTower) -> Rref {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(pr) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..a.cols {
                    a.data.swap(pr * a.cols + j, r * a.cols + j);
                }
            }
            let inv = f.inv(a[(r, c)]).expect("pivot is nonzero");
            for j in c..a.cols {
                a[(r, j)] = f.mul(inv, a[(r, j)]);
            }
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let factor = a[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                let nf = f.neg(factor);
                for j in c..a.cols {
                    let v = f.add(a[(i, j)], f.mul(nf, a[(r, j)]));
                    a[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { mat: a, rank: r, pivots }
    }

    pub fn rank(&self, f: &FieldTower) -> usize {
        self.rref(f).rank
    }

    /// Basis of `{ v : M v^T = 0 }`, returned in RREF.
    pub fn kernel(&self, f: &FieldTower) -> Mat {
        let red = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !red.pivots.contains(c)).collect();
        let mut basis = Mat::zeros(free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            basis[(b, fc)] = Scalar::ONE;
            for (i, &pc) in red.pivots.iter().enumerate() {
                basis[(b, pc)] = f.neg(red.mat[(i, fc)]);
            }
        }
        basis.rref(f).basis()
    }

    /// Some solution of `M x^T = b^T` (free variables set to zero).
    pub fn solve(&self, f: &FieldTower, b: &[Scalar]) -> Result<Vec<Scalar>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} equations",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (i, &bi) in b.iter().enumerate() {
            aug[(i, self.cols)] = bi;
        }
        let red = aug.rref(f);
        if red.pivots.last() == Some(&self.cols) {
            return Err(Error::Inconsistent);
        }
        let mut x = vec![Scalar::ZERO; self.cols];
        for (i, &pc) in red.pivots.iter().enumerate() {
            x[pc] = red.mat[(i, self.cols)];
        }
        Ok(x)
    }

    /// Some `X` with `M X = B`, column by column.
    pub fn solve_matrix(&self, f: &FieldTower, b: &Mat) -> Result<Mat> {
        let mut x = Mat::zeros(self.cols, b.cols);
        for c in 0..b.cols {
            let col: Vec<Scalar> = (0..b.rows).map(|r| b[(r, c)]).collect();
            let sol = self.solve(f, &col)?;
            for (r, v) in sol.into_iter().enumerate() {
                x[(r, c)] = v;
            }
        }
        Ok(x)
    }

    pub fn inverse(&self, f: &FieldTower) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Mat::zeros(0, 0));
        }
        let aug = self.hstack(&Mat::identity(n)).ok()?;
        let red = aug.rref(f);
        if red.rank < n || red.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(red.mat.submatrix(0..n, n..2 * n))
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, f: &FieldTower, v: &[Scalar]) -> bool {
        let r = self.rank(f);
        let stacked = self.vstack(&Mat::row_vector(v)).expect("same width");
        stacked.rank(f) == r
    }

    /// Same row space.
    pub fn same_row_space(&self, f: &FieldTower, other: &Mat) -> bool {
        self.cols == other.cols && self.rref(f).basis() == other.rref(f).basis()
    }
}

/// Uniform solution of `M x^T = b^T`: a particular solution plus a uniformly
/// drawn element of the kernel of `M` over the full field.
pub fn solve_affine<R: Rng + ?Sized>(
    f: &FieldTower,
    m: &Mat,
    b: &[Scalar],
    rng: &mut R,
) -> Result<Vec<Scalar>> {
    let mut x = m.solve(f, b)?;
    let ker = m.kernel(f);
    for row in ker.iter_rows() {
        let lambda = Scalar::from_index(rng.gen_range(0..f.order()));
        for (xi, &k) in x.iter_mut().zip(row) {
            *xi = f.add(*xi, f.mul(lambda, k));
        }
    }
    Ok(x)
}

/// `dim(rowspace(U) ∩ rowspace(W))`.
pub fn intersect_dim(f: &FieldTower, u: &Mat, w: &Mat) -> Result<usize> {
    if u.cols() != w.cols() {
        return Err(Error::Dimension(format!(
            "ambient dimensions {} and {} differ",
            u.cols(),
            w.cols()
        )));
    }
    let stacked = u.vstack(w)?;
    Ok(u.rank(f) + w.rank(f) - stacked.rank(f))
}

/// Gaussian binomial `[n d]_q`, saturating at `u128::MAX`.
pub fn gaussian_binomial(n: usize, d: usize, q: u64) -> u128 {
    if d > n {
        return 0;
    }
    let q = q as u128;
    let pow = |e: usize| -> Option<u128> { q.checked_pow(e as u32) };
    let mut acc: u128 = 1;
    for i in 0..d {
        let (Some(num), Some(den)) = (pow(n - i), pow(i + 1)) else {
            return u128::MAX;
        };
        match acc.checked_mul(num - 1) {
            Some(v) => acc = v / (den - 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Cap on how many objects an exhaustive search may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Default for Budget {
    fn default() -> Self {
        Budget(10_000_000)
    }
}

impl Budget {
    pub fn check(&self, what: impl Into<String>, count: u128) -> Result<()> {
        if count > self.0 {
            Err(Error::Budget { what: what.into(), count, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

/// Every `d`-dimensional subspace of `K^n`, where `K` is either the base field
/// or the full field of a tower, each yielded once as its RREF basis.
///
/// Pivot sets are visited in lexicographic order; within a pivot set the free
/// entries run through an odometer.
pub struct SubspaceIter {
    alphabet: Vec<Scalar>,
    n: usize,
    d: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    odometer: Vec<usize>,
    done: bool,
}

impl SubspaceIter {
    /// Subspaces of `F_q^n` (base field entries).
    pub fn base(f: &FieldTower, n: usize, d: usize, budget: Budget) -> Result<Self> {
        Self::new(f.base_elements().collect(), n, d, budget)
    }

    /// Subspaces of `F_{q^m}^n`.
    pub fn full(f: &FieldTower, n: usize, d: usize, budget: Budget) -> Result<Self> {
        Self::new(f.elements().collect(), n, d, budget)
    }

    fn new(alphabet: Vec<Scalar>, n: usize, d: usize, budget: Budget) -> Result<Self> {
        if d > n {
            return Err(Error::Dimension(format!("subspace dimension {d} exceeds ambient {n}")));
        }
        let count = gaussian_binomial(n, d, alphabet.len() as u64);
        budget.check(
            format!("[{n} {d}]_{} subspaces", alphabet.len()),
            count,
        )?;
        let mut it = SubspaceIter {
            alphabet,
            n,
            d,
            pivots: (0..d).collect(),
            free: Vec::new(),
            odometer: Vec::new(),
            done: false,
        };
        it.reset_free();
        Ok(it)
    }

    pub fn count(n: usize, d: usize, q: u64) -> u128 {
        gaussian_binomial(n, d, q)
    }

    fn reset_free(&mut self) {
        self.free.clear();
        for (i, &p) in self.pivots.iter().enumerate() {
            for c in p + 1..self.n {
                if !self.pivots.contains(&c) {
                    self.free.push((i, c));
                }
            }
        }
        self.odometer = vec![0; self.free.len()];
    }

    fn next_pivots(&mut self) -> bool {
        let d = self.d;
        if d == 0 {
            return false;
        }
        let mut i = d;
        while i > 0 {
            i -= 1;
            if self.pivots[i] < self.n - d + i {
                self.pivots[i] += 1;
                for j in i + 1..d {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }

    fn current(&self) -> Mat {
        let mut m = Mat::zeros(self.d, self.n);
        for (i, &p) in self.pivots.iter().enumerate() {
            m[(i, p)] = Scalar::ONE;
        }
        for (&(r, c), &k) in self.free.iter().zip(&self.odometer) {
            m[(r, c)] = self.alphabet[k];
        }
        m
    }

    fn advance(&mut self) {
        let q = self.alphabet.len();
        for k in self.odometer.iter_mut() {
            *k += 1;
            if *k < q {
                return;
            }
            *k = 0;
        }
        if self.next_pivots() {
            self.reset_free();
        } else {
            self.done = true;
        }
    }
}

impl Iterator for SubspaceIter {
    type Item = Mat;

    fn next(&mut self) -> Option<Mat> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

/// All vectors of `K^n` in odometer order (`K` given as an alphabet).
pub fn all_vectors(alphabet: &[Scalar], n: usize) -> impl Iterator<Item = Vec<Scalar>> + '_ {
    let q = alphabet.len() as u64;
    let total = q.pow(n as u32);
    (0..total).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let s = alphabet[(idx % q) as usize];
                idx /= q;
                s
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn f2() -> FieldTower {
        FieldTower::new(2, 1).unwrap()
    }

    fn mat(f: &FieldTower, rows: &[&[u32]]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(
            cols,
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| f.base(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn rref_examples() {
        let f = f2();
        let id = Mat::identity(3);
        assert_eq!(id.rref(&f).mat, id);
        assert_eq!(id.rank(&f), 3);
        let z = Mat::zeros(2, 3);
        assert_eq!(z.rref(&f).mat, z);
        assert_eq!(z.rank(&f), 0);
        let m = mat(&f, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let r = m.rref(&f);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn kernel_examples() {
        let f = f2();
        assert_eq!(Mat::identity(3).kernel(&f).rows(), 0);
        assert_eq!(Mat::zeros(1, 4).kernel(&f).rows(), 4);
        let k = mat(&f, &[&[1, 1, 1]]).kernel(&f);
        assert_eq!(k.rows(), 2);
        // enumerate F_2^3 for the independent check
        let expected = mat(&f, &[&[1, 1, 0], &[1, 0, 1]]);
        assert!(k.same_row_space(&f, &expected));
    }

    #[test]
    fn intersect_examples() {
        let f = f2();
        let u = mat(&f, &[&[1, 1, 0]]);
        let w = mat(&f, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(intersect_dim(&f, &u, &w).unwrap(), 1);
        assert_eq!(intersect_dim(&f, &w, &w).unwrap(), 2);
        let c = mat(&f, &[&[0, 0, 1]]);
        assert_eq!(intersect_dim(&f, &c, &w).unwrap(), 0);
        assert!(intersect_dim(&f, &c, &Mat::zeros(1, 2)).is_err());
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(3, 0, 2), 1);
        assert_eq!(gaussian_binomial(3, 1, 2), 7);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(5, 2, 3), 1210);
        assert_eq!(gaussian_binomial(2, 3, 2), 0);
        assert_eq!(gaussian_binomial(200, 100, 1 << 20), u128::MAX);
    }

    /// Brute force: distinct row spaces spanned by d-tuples of vectors.
    fn brute_count(f: &FieldTower, n: usize, d: usize) -> usize {
        let vecs: Vec<Vec<Scalar>> = all_vectors(&f.base_elements().collect::<Vec<_>>(), n).collect();
        let mut seen = HashSet::new();
        let mut idx = vec![0usize; d];
        loop {
            let rows: Vec<Vec<Scalar>> = idx.iter().map(|&i| vecs[i].clone()).collect();
            let m = Mat::from_rows(n, &rows);
            let r = m.rref(f);
            if r.rank == d {
                seen.insert(r.basis());
            }
            let mut k = 0;
            loop {
                if k == d {
                    return seen.len();
                }
                idx[k] += 1;
                if idx[k] < vecs.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if d == 0 {
                return 1;
            }
        }
    }

    #[test]
    fn subspace_enumeration_counts_and_canonical() {
        let f = f2();
        for (n, d) in [(3, 0), (3, 1), (4, 2), (3, 3), (4, 1)] {
            let all: Vec<Mat> = SubspaceIter::base(&f, n, d, Budget::default()).unwrap().collect();
            assert_eq!(all.len() as u128, gaussian_binomial(n, d, 2));
            assert_eq!(all.len(), brute_count(&f, n, d));
            let distinct: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
            for m in &all {
                assert_eq!(m.rref(&f).mat, *m);
                assert_eq!(m.rank(&f), d);
            }
        }
        let f3 = FieldTower::new(3, 1).unwrap();
        assert_eq!(SubspaceIter::base(&f3, 4, 2, Budget::default()).unwrap().count(), 130);
        let f4 = FieldTower::new(2, 2).unwrap();
        assert_eq!(SubspaceIter::full(&f4, 3, 1, Budget::default()).unwrap().count(), 21);
    }

    #[test]
    fn subspace_budget_is_explicit() {
        let f = f2();
        let err = SubspaceIter::base(&f, 4, 2, Budget(10)).err().unwrap();
        assert_eq!(err, Error::Budget { what: "[4 2]_2 subspaces".into(), count: 35, cap: 10 });
    }

    #[test]
    fn solve_affine_examples() {
        use rand::SeedableRng;
        let f = f2();
        let m = mat(&f, &[&[1, 1]]);
        let mut hits = HashSet::new();
        for seed in 0..50 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x = solve_affine(&f, &m, &[Scalar::ONE], &mut rng).unwrap();
            assert!(x == vec![Scalar::ONE, Scalar::ZERO] || x == vec![Scalar::ZERO, Scalar::ONE]);
            hits.insert(x);
        }
        assert_eq!(hits.len(), 2);

        let inv = mat(&f, &[&[1, 1], &[0, 1]]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let x = solve_affine(&f, &inv, &[Scalar::ZERO, Scalar::ONE], &mut rng).unwrap();
        assert_eq!(x, vec![Scalar::ONE, Scalar::ONE]);

        let zero = Mat::zeros(1, 2);
        assert_eq!(zero.solve(&f, &[Scalar::ONE]), Err(Error::Inconsistent));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = FieldTower::new(3, 2).unwrap();
        let g = f.primitive();
        let a = Mat::from_rows(2, &[vec![g, Scalar::ONE], vec![Scalar::ZERO, f.mul(g, g)]]);
        let ai = a.inverse(&f).unwrap();
        assert_eq!(a.mul(&f, &ai).unwrap(), Mat::identity(2));
        assert!(Mat::zeros(2, 2).inverse(&f).is_none());
    }
}
