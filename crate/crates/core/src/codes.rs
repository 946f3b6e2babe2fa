//! Linear codes over `F_{q^m}` and the direct constructions: Gabidulin codes,
//! duals and transposed Gabidulin codes. Constructions with block structure
//! live in [`crate::reduction`].

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldTower, Scalar};
use crate::linalg::{all_vectors, Budget, Mat};
use crate::rankmetric::{galois_closure, matrix_rep, rank_weight, GaloisClosedSpace};

/// An `F_{q^m}`-linear code given by a full-rank `k x n` generator matrix.
/// `k = 0` is allowed (the zero code).
#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Arc<FieldTower>,
    gen: Mat,
}

impl LinearCode {
    pub fn new(field: Arc<FieldTower>, gen: Mat) -> Result<Self> {
        if gen.data().iter().any(|&x| !field.contains(x)) {
            return Err(Error::Code("generator entry outside the field".into()));
        }
        let r = gen.rank(&field);
        if r != gen.rows() {
            return Err(Error::Code(format!(
                "generator has {} rows but rank {r}",
                gen.rows()
            )));
        }
        Ok(LinearCode { field, gen })
    }

    /// The code spanned by arbitrary rows, normalised to its RREF basis.
    pub fn spanned_by(field: Arc<FieldTower>, rows: &Mat) -> Self {
        let gen = rows.rref(&field).basis();
        LinearCode { field, gen }
    }

    pub fn full_space(field: Arc<FieldTower>, n: usize) -> Self {
        LinearCode { field, gen: Mat::identity(n) }
    }

    pub fn zero(field: Arc<FieldTower>, n: usize) -> Self {
        LinearCode { field, gen: Mat::zeros(0, n) }
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldTower> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn generator(&self) -> &Mat {
        &self.gen
    }

    /// Canonical generator (RREF), equal for equal codes.
    pub fn canonical(&self) -> Mat {
        self.gen.rref(&self.field).mat
    }

    pub fn same_code(&self, other: &LinearCode) -> bool {
        *self.field == *other.field && self.n() == other.n() && self.canonical() == other.canonical()
    }

    pub fn contains(&self, c: &[Scalar]) -> bool {
        c.len() == self.n() && self.gen.row_space_contains(&self.field, c)
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.gen.iter_rows().all(|r| other.contains(r))
    }

    pub fn encode(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        self.gen.left_mul_vec(&self.field, x)
    }

    pub fn closure(&self) -> GaloisClosedSpace {
        galois_closure(&self.field, &self.gen)
    }

    /// `d_{R,k}(C) = dim(C*)`.
    pub fn closure_dim(&self) -> usize {
        self.closure().dim()
    }

    pub fn is_degenerate(&self) -> bool {
        self.closure_dim() < self.n()
    }

    /// `C^⊥`, generated by an RREF kernel basis of `G`.
    pub fn dual(&self) -> LinearCode {
        LinearCode { field: self.field.clone(), gen: self.gen.kernel(&self.field) }
    }

    /// All codewords, in message-odometer order.
    pub fn codewords(&self, budget: Budget) -> Result<Vec<Vec<Scalar>>> {
        let count = (self.field.order() as u128).saturating_pow(self.k() as u32);
        budget.check(format!("{} codewords", self.k()), count)?;
        let alphabet: Vec<Scalar> = self.field.elements().collect();
        all_vectors(&alphabet, self.k())
            .map(|x| self.encode(&x))
            .collect()
    }

    /// Smallest rank weight of a nonzero codeword, by scanning one codeword
    /// per projective point of the message space.
    pub fn min_rank_distance(&self, budget: Budget) -> Result<Option<(usize, Vec<Scalar>)>> {
        let f = &*self.field;
        let mut best: Option<(usize, Vec<Scalar>)> = None;
        for x in crate::linalg::SubspaceIter::full(f, self.k(), 1.min(self.k()), budget)? {
            if x.rows() == 0 {
                break;
            }
            let c = self.encode(x.row(0))?;
            let w = rank_weight(f, &c);
            if best.as_ref().is_none_or(|(b, _)| w < *b) {
                best = Some((w, c));
            }
        }
        Ok(best)
    }
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.same_code(other)
    }
}

/// Gabidulin code with rows `(beta_j^[r])_j`, `r = 0..k-1`. Points default to
/// `alpha_1..alpha_n`.
pub fn gabidulin(
    field: Arc<FieldTower>,
    n: usize,
    k: usize,
    points: Option<&[Scalar]>,
) -> Result<LinearCode> {
    let f = &*field;
    if n > f.m() {
        return Err(Error::Code(format!("Gabidulin length {n} exceeds m = {}", f.m())));
    }
    if k > n {
        return Err(Error::Code(format!("Gabidulin dimension {k} exceeds length {n}")));
    }
    let beta: Vec<Scalar> = match points {
        Some(p) if p.len() != n => {
            return Err(Error::Code(format!("{} evaluation points for length {n}", p.len())))
        }
        Some(p) => p.to_vec(),
        None => f.basis()[..n].to_vec(),
    };
    if matrix_rep(f, &beta).rank(f) != n {
        return Err(Error::Code("evaluation points are dependent over the base field".into()));
    }
    let mut g = Mat::zeros(k, n);
    for r in 0..k {
        for (j, &b) in beta.iter().enumerate() {
            g[(r, j)] = f.frobenius(b, r);
        }
    }
    LinearCode::new(field, g)
}

/// The `F_q`-linear code obtained by transposing the matrix representations
/// of an `F_{q^n}`-linear Gabidulin code of length `m` and dimension `k`.
///
/// Only the minimum rank distance is known for these codes; no weights beyond
/// the first are computed here.
#[derive(Clone, Debug)]
pub struct TransposedGabidulin {
    small: Arc<FieldTower>,
    source: LinearCode,
}

impl TransposedGabidulin {
    pub fn new(small: Arc<FieldTower>, n: usize, k: usize) -> Result<Self> {
        let m = small.m();
        if n <= m {
            return Err(Error::Code(format!("transposed Gabidulin needs n > m, got n={n}, m={m}")));
        }
        let big = Arc::new(FieldTower::new(small.p(), n)?);
        let source = gabidulin(big, m, k, None)?;
        Ok(TransposedGabidulin { small, source })
    }

    pub fn source(&self) -> &LinearCode {
        &self.source
    }

    /// Number of codewords, `q^{nk}`.
    pub fn size(&self) -> u128 {
        (self.source.field().order() as u128).saturating_pow(self.source.k() as u32)
    }

    /// `m - k + 1`, inherited from the source since `rank(M^T) = rank(M)`.
    pub fn min_distance(&self) -> usize {
        self.source.n() - self.source.k() + 1
    }

    /// Every codeword as an `m x n` matrix over `F_q` (rows index the basis of
    /// `F_{q^m}`, columns the `n` coordinates).
    pub fn matrices(&self, budget: Budget) -> Result<Vec<Mat>> {
        let big = self.source.field();
        Ok(self
            .source
            .codewords(budget)?
            .into_iter()
            .map(|c| matrix_rep(big, &c).transpose())
            .collect())
    }

    /// Codewords as vectors in `F_{q^m}^n`.
    pub fn vectors(&self, budget: Budget) -> Result<Vec<Vec<Scalar>>> {
        let f = &*self.small;
        Ok(self
            .matrices(budget)?
            .into_iter()
            .map(|mt| {
                (0..mt.cols())
                    .map(|j| f.sum((0..mt.rows()).map(|i| f.mul(f.alpha(i), mt[(i, j)]))))
                    .collect()
            })
            .collect())
    }

    /// Minimum rank of a nonzero listed matrix.
    pub fn scan_min_distance(&self, budget: Budget) -> Result<usize> {
        let f = &*self.small;
        Ok(self
            .matrices(budget)?
            .iter()
            .map(|mt| mt.rank(f))
            .filter(|&r| r > 0)
            .min()
            .unwrap_or(0))
    }
}
