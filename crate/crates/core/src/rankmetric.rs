//! Matrix representation, rank weight, Frobenius powers of vectors and
//! Galois closures.

use crate::error::{Error, Result};
use crate::field::{FieldTower, Scalar};
use crate::linalg::Mat;

/// `M(c)`: column `j` holds the alpha-coordinates of `c_j`.
pub fn matrix_rep(f: &FieldTower, c: &[Scalar]) -> Mat {
    let m = f.m();
    let mut out = Mat::zeros(m, c.len());
    for (j, &x) in c.iter().enumerate() {
        for (i, d) in f.alpha_coords(x).into_iter().enumerate() {
            out[(i, j)] = f.base(d);
        }
    }
    out
}

pub fn rank_weight(f: &FieldTower, c: &[Scalar]) -> usize {
    matrix_rep(f, c).rank(f)
}

pub fn frobenius_vec(f: &FieldTower, c: &[Scalar], i: usize) -> Vec<Scalar> {
    c.iter().map(|&x| f.frobenius(x, i)).collect()
}

/// Componentwise trace `c + c^[1] + ... + c^[m-1]`.
pub fn vector_trace(f: &FieldTower, c: &[Scalar]) -> Vec<Scalar> {
    c.iter().map(|&x| f.trace(x)).collect()
}

/// An `F_{q^m}`-linear space with a generator matrix over `F_q`, stored as its
/// RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaloisClosedSpace {
    basis: Mat,
}

impl GaloisClosedSpace {
    /// The space spanned by rows over `F_q`; errors on entries outside `F_q`.
    pub fn from_base_rows(f: &FieldTower, rows: &Mat) -> Result<Self> {
        if !rows.is_over_base(f) {
            return Err(Error::Field("Galois closed space needs a generator over the base field".into()));
        }
        Ok(GaloisClosedSpace { basis: rows.rref(f).basis() })
    }

    pub fn zero(n: usize) -> Self {
        GaloisClosedSpace { basis: Mat::zeros(0, n) }
    }

    pub fn full(n: usize) -> Self {
        GaloisClosedSpace { basis: Mat::identity(n) }
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// RREF basis over `F_q`.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn contains(&self, f: &FieldTower, v: &[Scalar]) -> bool {
        self.basis.row_space_contains(f, v)
    }

    /// Image under the projection onto the coordinates `cols`.
    pub fn project(&self, f: &FieldTower, cols: std::ops::Range<usize>) -> GaloisClosedSpace {
        let sub = self.basis.submatrix(0..self.basis.rows(), cols);
        GaloisClosedSpace { basis: sub.rref(f).basis() }
    }

    /// `dim(self ∩ rowspace(g))` over `F_{q^m}`.
    pub fn intersect_dim(&self, f: &FieldTower, g: &Mat) -> Result<usize> {
        crate::linalg::intersect_dim(f, &self.basis, g)
    }
}

/// `D* = D + D^[1] + ... + D^[m-1]` for `D = rowspace(g)`.
///
/// The sum is grown one Frobenius step at a time until it stops growing. The
/// RREF of a Frobenius-stable space is itself Frobenius-fixed, hence already
/// a basis over `F_q`.
pub fn galois_closure(f: &FieldTower, g: &Mat) -> GaloisClosedSpace {
    let mut d = g.rref(f).basis();
    loop {
        let stacked = d.vstack(&d.frobenius(f, 1)).expect("same width");
        let next = stacked.rref(f).basis();
        if next.rows() == d.rows() {
            break;
        }
        d = next;
    }
    debug_assert!(d.is_over_base(f));
    GaloisClosedSpace { basis: d }
}

/// `wt_R(D) = dim(D*)`.
pub fn subspace_rank_weight(f: &FieldTower, g: &Mat) -> usize {
    galois_closure(f, g).dim()
}
