//! Reducible codes: block-upper-triangular generator matrices, their main,
//! row and column components, the dual reduction and changes of reduction.

use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::Arc;

use rand::Rng;

use crate::codes::{gabidulin, LinearCode};
use crate::error::{Error, Result};
use crate::field::{FieldTower, Scalar};
use crate::linalg::{Budget, Mat};
use crate::rankmetric::rank_weight;

/// A reducible code together with one reduction.
///
/// Row block `i` has `k_i` rows and is zero on column blocks `j < i`; the
/// diagonal block `G_{i,i}` has full row rank. Blocks with `k_i = 0` or
/// `n_i = 0` are allowed.
#[derive(Clone, Debug)]
pub struct Reduction {
    code: LinearCode,
    n_blocks: Vec<usize>,
    k_blocks: Vec<usize>,
}

fn prefix(v: &[usize], i: usize) -> usize {
    v[..i].iter().sum()
}

/// Off-diagonal blocks for [`reducible`].
#[derive(Clone, Debug)]
pub enum OffDiagonal {
    Zero,
    /// Uniform entries from a stream of the given seed.
    Random { seed: u64 },
    /// `(i, j) -> G_{i,j}` for `i < j`; missing blocks are zero.
    Explicit(BTreeMap<(usize, usize), Mat>),
}

impl Reduction {
    pub fn new(code: LinearCode, n_blocks: Vec<usize>, k_blocks: Vec<usize>) -> Result<Self> {
        if n_blocks.len() != k_blocks.len() || n_blocks.is_empty() {
            return Err(Error::Code("block lists must be nonempty and of equal length".into()));
        }
        if n_blocks.iter().sum::<usize>() != code.n() || k_blocks.iter().sum::<usize>() != code.k() {
            return Err(Error::Code(format!(
                "blocks sum to n={}, k={} but code has n={}, k={}",
                n_blocks.iter().sum::<usize>(),
                k_blocks.iter().sum::<usize>(),
                code.n(),
                code.k()
            )));
        }
        let r = Reduction { code, n_blocks, k_blocks };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        let f = self.code.field();
        let g = self.code.generator();
        for i in 0..self.l() {
            for row in self.row_range(i) {
                if let Some(c) = (0..self.col_range(i).start).find(|&c| !g[(row, c)].is_zero()) {
                    return Err(Error::Code(format!(
                        "row {} (block {}) has a nonzero entry in column {} left of its diagonal block",
                        row + 1,
                        i + 1,
                        c + 1
                    )));
                }
            }
            let gii = self.block(i, i);
            if gii.rank(f) != self.k_blocks[i] {
                return Err(Error::Code(format!("diagonal block {} is rank deficient", i + 1)));
            }
        }
        Ok(())
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn field(&self) -> &FieldTower {
        self.code.field()
    }

    pub fn l(&self) -> usize {
        self.n_blocks.len()
    }

    pub fn n_blocks(&self) -> &[usize] {
        &self.n_blocks
    }

    pub fn k_blocks(&self) -> &[usize] {
        &self.k_blocks
    }

    pub fn row_range(&self, i: usize) -> Range<usize> {
        let s = prefix(&self.k_blocks, i);
        s..s + self.k_blocks[i]
    }

    pub fn col_range(&self, j: usize) -> Range<usize> {
        let s = prefix(&self.n_blocks, j);
        s..s + self.n_blocks[j]
    }

    /// `G_{i,j}`; zero for `i > j`.
    pub fn block(&self, i: usize, j: usize) -> Mat {
        self.code.generator().submatrix(self.row_range(i), self.col_range(j))
    }

    /// `C_i`, generated by `G_{i,i}`.
    pub fn main_component(&self, i: usize) -> LinearCode {
        LinearCode::new(self.code.field_arc().clone(), self.block(i, i)).expect("diagonal blocks have full rank")
    }

    pub fn main_components(&self) -> Vec<LinearCode> {
        (0..self.l()).map(|i| self.main_component(i)).collect()
    }

    /// `C_i'`, generated by `(0, ..., 0, G_{i,i}, ..., G_{i,l})`.
    pub fn row_component(&self, i: usize) -> LinearCode {
        let g = self.code.generator();
        let rows = g.row_range(self.row_range(i).start, self.row_range(i).end);
        LinearCode::new(self.code.field_arc().clone(), rows).expect("row blocks have full rank")
    }

    pub fn row_components(&self) -> Vec<LinearCode> {
        (0..self.l()).map(|i| self.row_component(i)).collect()
    }

    /// `Ĉ_j`, spanned by `G_{1,j}, ..., G_{j,j}`; may have dimension above `k_j`.
    pub fn column_component(&self, j: usize) -> LinearCode {
        let rows = self.code.generator().submatrix(0..prefix(&self.k_blocks, j + 1), self.col_range(j));
        LinearCode::spanned_by(self.code.field_arc().clone(), &rows)
    }

    pub fn column_components(&self) -> Vec<LinearCode> {
        (0..self.l()).map(|j| self.column_component(j)).collect()
    }

    pub fn is_cartesian(&self) -> bool {
        (0..self.l()).all(|i| (i + 1..self.l()).all(|j| self.block(i, j).is_zero()))
    }

    /// Block-lower-triangular generator of `C^⊥` with `H_{i,i}` generating
    /// `C_i^⊥`.
    ///
    /// Row block `i` is built from `H_{i,i} = ker G_{i,i}` by solving, for
    /// `a = i-1, ..., 1`, `G_{a,a} H_{i,a}^T = -Σ_{a<j≤i} G_{a,j} H_{i,j}^T`.
    pub fn dual_reduction(&self) -> DualReduction {
        let f = self.field();
        let l = self.l();
        let n = self.code.n();
        let dual_k: Vec<usize> = (0..l).map(|i| self.n_blocks[i] - self.k_blocks[i]).collect();
        let mut h = Mat::zeros(dual_k.iter().sum(), n);
        let mut row0 = 0;
        for i in 0..l {
            let hii = self.block(i, i).kernel(f);
            let mut hb: Vec<Option<Mat>> = vec![None; l];
            hb[i] = Some(hii);
            for a in (0..i).rev() {
                let mut rhs = Mat::zeros(self.k_blocks[a], dual_k[i]);
                for j in a + 1..=i {
                    let hij = hb[j].as_ref().unwrap();
                    let t = self.block(a, j).mul(f, &hij.transpose()).unwrap();
                    rhs = rhs.add(f, &t).unwrap();
                }
                let x = self
                    .block(a, a)
                    .solve_matrix(f, &rhs.neg(f))
                    .expect("full row rank diagonal block");
                hb[a] = Some(x.transpose());
            }
            for (j, b) in hb.iter().enumerate().take(i + 1) {
                h.set_block(row0, self.col_range(j).start, b.as_ref().unwrap());
            }
            row0 += dual_k[i];
        }
        let code = LinearCode::new(self.code.field_arc().clone(), h).expect("dual rows are independent");
        DualReduction { code, n_blocks: self.n_blocks.clone(), k_blocks: dual_k }
    }
}

/// Block-lower-triangular reduction of the dual of a reducible code.
#[derive(Clone, Debug)]
pub struct DualReduction {
    code: LinearCode,
    n_blocks: Vec<usize>,
    k_blocks: Vec<usize>,
}

impl DualReduction {
    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn n_blocks(&self) -> &[usize] {
        &self.n_blocks
    }

    pub fn k_blocks(&self) -> &[usize] {
        &self.k_blocks
    }

    pub fn block(&self, i: usize, j: usize) -> Mat {
        let rs = prefix(&self.k_blocks, i);
        let cs = prefix(&self.n_blocks, j);
        self.code
            .generator()
            .submatrix(rs..rs + self.k_blocks[i], cs..cs + self.n_blocks[j])
    }

    /// Reverses both block orders, giving an ordinary (upper triangular)
    /// reduction of a code rank equivalent to `C^⊥`. The code is the dual
    /// with its coordinate blocks reversed.
    pub fn reversed(&self) -> Reduction {
        let l = self.n_blocks.len();
        let n = self.code.n();
        let k = self.code.k();
        let nb: Vec<usize> = self.n_blocks.iter().rev().copied().collect();
        let kb: Vec<usize> = self.k_blocks.iter().rev().copied().collect();
        let mut g = Mat::zeros(k, n);
        for i in 0..l {
            for j in 0..l {
                let b = self.block(l - 1 - i, l - 1 - j);
                g.set_block(prefix(&kb, i), prefix(&nb, j), &b);
            }
        }
        let code = LinearCode::new(self.code.field_arc().clone(), g).expect("row permutation of a basis");
        Reduction::new(code, nb, kb).expect("reversal of a lower triangular form")
    }
}

fn random_mat<R: Rng>(f: &FieldTower, rows: usize, cols: usize, rng: &mut R) -> Mat {
    let data = (0..rows * cols)
        .map(|_| Scalar::from_index(rng.gen_range(0..f.order())))
        .collect();
    Mat::from_vec(rows, cols, data)
}

/// Assembles a reduction from main components and off-diagonal blocks.
pub fn reducible(mains: &[LinearCode], off: &OffDiagonal) -> Result<Reduction> {
    let first = mains
        .first()
        .ok_or_else(|| Error::Code("a reduction needs at least one block".into()))?;
    let field = first.field_arc().clone();
    if mains.iter().any(|c| *c.field() != *field) {
        return Err(Error::Code("main components live over different fields".into()));
    }
    let nb: Vec<usize> = mains.iter().map(|c| c.n()).collect();
    let kb: Vec<usize> = mains.iter().map(|c| c.k()).collect();
    let mut g = Mat::zeros(kb.iter().sum(), nb.iter().sum());
    let mut rng = match off {
        OffDiagonal::Random { seed } => Some(crate::seeded_rng(*seed, 1)),
        _ => None,
    };
    for i in 0..mains.len() {
        let r0 = prefix(&kb, i);
        g.set_block(r0, prefix(&nb, i), mains[i].generator());
        for j in i + 1..mains.len() {
            let b = match off {
                OffDiagonal::Zero => continue,
                OffDiagonal::Random { .. } => random_mat(&field, kb[i], nb[j], rng.as_mut().unwrap()),
                OffDiagonal::Explicit(map) => match map.get(&(i, j)) {
                    None => continue,
                    Some(b) if b.shape() != (kb[i], nb[j]) => {
                        return Err(Error::Dimension(format!(
                            "block ({},{}) should be {}x{}",
                            i + 1,
                            j + 1,
                            kb[i],
                            nb[j]
                        )))
                    }
                    Some(b) => b.clone(),
                },
            };
            g.set_block(r0, prefix(&nb, j), &b);
        }
    }
    let code = LinearCode::new(field, g)?;
    Reduction::new(code, nb, kb)
}

pub fn cartesian(components: &[LinearCode]) -> Result<Reduction> {
    reducible(components, &OffDiagonal::Zero)
}

/// `C_opt`: `k` copies of the one-dimensional code `<(alpha_1, ..., alpha_m)>`.
pub fn c_opt(field: Arc<FieldTower>, k: usize) -> Result<Reduction> {
    if k == 0 {
        return Err(Error::Code("C_opt needs k >= 1".into()));
    }
    let m = field.m();
    let one = gabidulin(field, m, 1, None)?;
    cartesian(&vec![one; k])
}

/// Plotkin-type combinations of two codes of the same length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotkinMode {
    /// `(u, u + v)`
    Sum,
    /// `(u, alpha u + v)`
    Scaled(Scalar),
    /// `(u, u^[i] + v)`
    Frobenius(usize),
}

/// The length-`2n` code generated by `(u | f(u))` for the rows `u` of `G_1`
/// and `(0 | v)` for the rows `v` of `G_2`, as a two-block reduction.
pub fn plotkin(c1: &LinearCode, c2: &LinearCode, mode: PlotkinMode) -> Result<Reduction> {
    let f = c1.field();
    if *f != *c2.field() || c1.n() != c2.n() {
        return Err(Error::Code("Plotkin components need the same field and length".into()));
    }
    let g1 = c1.generator();
    let top = match mode {
        PlotkinMode::Sum => g1.clone(),
        PlotkinMode::Scaled(a) => {
            if f.in_base_field(a) {
                return Err(Error::Code(
                    "scaling by a base-field element only gives a cartesian product up to equivalence".into(),
                ));
            }
            g1.scale(f, a)
        }
        PlotkinMode::Frobenius(i) => {
            if i == 0 || i >= f.m() {
                return Err(Error::Code(format!("Frobenius exponent must lie in 1..{}", f.m())));
            }
            g1.frobenius(f, i)
        }
    };
    let mut off = BTreeMap::new();
    off.insert((0, 1), top);
    reducible(&[c1.clone(), c2.clone()], &OffDiagonal::Explicit(off))
}

/// `Ḡ = A G` for an invertible block-upper-triangular `A` over `F_{q^m}`.
pub fn transform_reduction(r: &Reduction, a: &Mat) -> Result<Reduction> {
    let f = r.field();
    let k = r.code().k();
    if a.shape() != (k, k) {
        return Err(Error::Dimension(format!("transform must be {k}x{k}")));
    }
    for i in 0..r.l() {
        for j in 0..i {
            if !a.submatrix(r.row_range(i), r.row_range(j)).is_zero() {
                return Err(Error::Code(format!("transform block ({},{}) below the diagonal is nonzero", i + 1, j + 1)));
            }
        }
        let aii = a.submatrix(r.row_range(i), r.row_range(i));
        if aii.rows() > 0 && aii.inverse(f).is_none() {
            return Err(Error::Code(format!("transform diagonal block {} is singular", i + 1)));
        }
    }
    let g = a.mul(f, r.code().generator())?;
    let code = LinearCode::new(r.code().field_arc().clone(), g)?;
    Reduction::new(code, r.n_blocks().to_vec(), r.k_blocks().to_vec())
}

/// A random invertible block-upper-triangular `k x k` matrix for `r`'s row
/// blocks.
pub fn random_block_transform(r: &Reduction, seed: u64) -> Mat {
    let f = r.field();
    let mut rng = crate::seeded_rng(seed, 2);
    let k = r.code().k();
    let mut a = Mat::zeros(k, k);
    for i in 0..r.l() {
        let ri = r.row_range(i);
        loop {
            let d = random_mat(f, ri.len(), ri.len(), &mut rng);
            if ri.is_empty() || d.inverse(f).is_some() {
                a.set_block(ri.start, ri.start, &d);
                break;
            }
        }
        for j in i + 1..r.l() {
            let rj = r.row_range(j);
            a.set_block(ri.start, rj.start, &random_mat(f, ri.len(), rj.len(), &mut rng));
        }
    }
    a
}

/// A reduction of the same code whose row components attain the minimum
/// rank distance: `min_i d_{R,1}(C̄_i') = d_{R,1}(C)`.
///
/// Takes a minimum-weight codeword `c = x G`, the first block `i0` where `x`
/// is nonzero, and clears the later blocks of `x` with `A_{i0,j}`.
pub fn exact_reduction_for_d1(r: &Reduction, budget: Budget) -> Result<Reduction> {
    let f = r.field();
    let code = r.code();
    let k = code.k();
    if k == 0 {
        return Ok(r.clone());
    }
    let mut best: Option<(usize, Vec<Scalar>)> = None;
    for x in crate::linalg::SubspaceIter::full(f, k, 1, budget)? {
        let c = code.encode(x.row(0))?;
        let w = rank_weight(f, &c);
        if best.as_ref().is_none_or(|(b, _)| w < *b) {
            best = Some((w, x.row(0).to_vec()));
        }
    }
    let (_, x) = best.expect("k >= 1");
    let i0 = (0..r.l())
        .find(|&i| r.row_range(i).any(|p| !x[p].is_zero()))
        .expect("x is nonzero");
    let ri = r.row_range(i0);
    let p = ri.clone().find(|&p| !x[p].is_zero()).unwrap();
    let inv = f.inv(x[p]).unwrap();
    let mut a = Mat::identity(k);
    for j in i0 + 1..r.l() {
        for col in r.row_range(j) {
            a[(p, col)] = f.neg(f.mul(x[col], inv));
        }
    }
    let a_inv = a.inverse(f).expect("unipotent");
    transform_reduction(r, &a_inv)
}
