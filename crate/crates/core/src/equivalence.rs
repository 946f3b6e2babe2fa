//! Rank equivalences `φ(v_i) = β w_i` between Galois closed spaces, the
//! explicit equivalence onto `C_opt`, and the product characterizations.

use std::sync::Arc;

use rand::Rng;

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::field::{FieldTower, Scalar};
use crate::grw::grw_table;
use crate::linalg::{Budget, Mat};
use crate::rankmetric::{galois_closure, rank_weight, vector_trace};
use crate::reduction::{c_opt, cartesian, Reduction};

/// The `F_{q^m}`-linear map sending `v_i` to `beta * w_i`, where the rows `v_i`
/// and `w_i` are `F_q` bases of the source and target closed spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankEquivalenceMap {
    source: Mat,
    target: Mat,
    beta: Scalar,
}

impl RankEquivalenceMap {
    pub fn new(f: &FieldTower, source: Mat, target: Mat, beta: Scalar) -> Result<Self> {
        if source.rows() != target.rows() {
            return Err(Error::Dimension(format!(
                "source basis has {} vectors, target basis {}",
                source.rows(),
                target.rows()
            )));
        }
        if !source.is_over_base(f) || !target.is_over_base(f) {
            return Err(Error::Field("equivalence bases must lie over the base field".into()));
        }
        if source.rank(f) != source.rows() || target.rank(f) != target.rows() {
            return Err(Error::Code("equivalence bases must be linearly independent".into()));
        }
        if beta.is_zero() || !f.contains(beta) {
            return Err(Error::Field("equivalence scalar must be a nonzero field element".into()));
        }
        Ok(RankEquivalenceMap { source, target, beta })
    }

    pub fn identity(n: usize) -> Self {
        RankEquivalenceMap { source: Mat::identity(n), target: Mat::identity(n), beta: Scalar::ONE }
    }

    pub fn source(&self) -> &Mat {
        &self.source
    }

    pub fn target(&self) -> &Mat {
        &self.target
    }

    pub fn beta(&self) -> Scalar {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.source.rows()
    }

    pub fn apply(&self, f: &FieldTower, c: &[Scalar]) -> Result<Vec<Scalar>> {
        if c.len() != self.source.cols() {
            return Err(Error::Dimension(format!("vector of length {} for a map on length {}", c.len(), self.source.cols())));
        }
        let lambda = self
            .source
            .transpose()
            .solve(f, c)
            .map_err(|_| Error::Code("vector outside the source space".into()))?;
        let image = self.target.left_mul_vec(f, &lambda)?;
        Ok(image.into_iter().map(|x| f.mul(self.beta, x)).collect())
    }

    /// Applies the map to every row of `g`.
    pub fn apply_rows(&self, f: &FieldTower, g: &Mat) -> Result<Mat> {
        let rows = g.iter_rows().map(|r| self.apply(f, r)).collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_rows(self.target.cols(), &rows))
    }

    /// `other ∘ self`; `other` must be defined on the target of `self`.
    pub fn then(&self, f: &FieldTower, other: &RankEquivalenceMap) -> Result<Self> {
        if !self.target.same_row_space(f, &other.source) {
            return Err(Error::Code("maps do not compose: target and source differ".into()));
        }
        let rows = self
            .target
            .iter_rows()
            .map(|w| {
                let lambda = other.source.transpose().solve(f, w)?;
                other.target.left_mul_vec(f, &lambda)
            })
            .collect::<Result<Vec<_>>>()?;
        let target = Mat::from_rows(other.target.cols(), &rows);
        RankEquivalenceMap::new(f, self.source.clone(), target, f.mul(self.beta, other.beta))
    }

    pub fn inverse(&self, f: &FieldTower) -> Self {
        let beta = f.inv(self.beta).expect("beta is nonzero");
        RankEquivalenceMap { source: self.target.clone(), target: self.source.clone(), beta }
    }

    /// Whether `wt_R` is preserved on `c`.
    pub fn preserves_weight(&self, f: &FieldTower, c: &[Scalar]) -> Result<bool> {
        Ok(rank_weight(f, &self.apply(f, c)?) == rank_weight(f, c))
    }
}

/// Checks carried out while building the map onto `C_opt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptCertificate {
    /// `Σ_i β_i^[l-1] α_i^[j-1] = δ_{j,l}` and `(α_i) = e_1 B^{-1}`.
    pub two_bases: bool,
    /// The `km` trace vectors are over `F_q` and independent.
    pub trace_basis: bool,
    /// `b_s = Σ_i α_i v_{s,i}` for every `s`.
    pub reconstruction: bool,
    /// `ψ(C) = C_opt` by RREF comparison.
    pub image_is_c_opt: bool,
    pub weights_checked: usize,
    pub weights_preserved: bool,
}

impl OptCertificate {
    pub fn certified(&self) -> bool {
        self.two_bases && self.trace_basis && self.reconstruction && self.image_is_c_opt && self.weights_preserved
    }
}

/// The rank equivalence `ψ: C* → F_{q^m}^{km}` with `ψ(v_{s,i}) = e_{(s-1)m+i}`,
/// `v_{s,i} = Tr(β_i b_s)`, for a code with `d_{R,r} = rm` for all `r`.
///
/// That hypothesis is equivalent to `dim C* = km`, since `d_{R,r} <= rm` and
/// consecutive weights differ by at most `m`.
pub fn to_c_opt(code: &LinearCode) -> Result<(RankEquivalenceMap, OptCertificate)> {
    let f = code.field();
    let (k, m) = (code.k(), f.m());
    if k == 0 {
        return Err(Error::Hypothesis("the zero code has no C_opt counterpart".into()));
    }
    let closure = code.closure();
    if closure.dim() != k * m {
        return Err(Error::Hypothesis(format!(
            "d_{{R,k}} = {} but km = {}: not every weight equals rm",
            closure.dim(),
            k * m
        )));
    }

    let a = Mat::from_vec(m, m, (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| f.frobenius(f.alpha(i), j)).collect());
    let a_inv = a.inverse(f).ok_or_else(|| Error::Field("alpha Moore matrix is singular".into()))?;
    let beta: Vec<Scalar> = a_inv.row(0).to_vec();
    let b = Mat::from_vec(m, m, (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| f.frobenius(beta[i], j)).collect());
    let two_bases = b.transpose().mul(f, &a)? == Mat::identity(m)
        && b.inverse(f).is_some_and(|bi| bi.row(0) == f.basis());

    let mut rows = Vec::with_capacity(k * m);
    for s in 0..k {
        let bs = code.generator().row(s);
        for &bi in &beta {
            let scaled: Vec<Scalar> = bs.iter().map(|&x| f.mul(bi, x)).collect();
            rows.push(vector_trace(f, &scaled));
        }
    }
    let v = Mat::from_rows(code.n(), &rows);
    let trace_basis = v.is_over_base(f) && v.rank(f) == k * m && v.same_row_space(f, closure.basis());
    if !trace_basis {
        return Err(Error::Inconsistent);
    }
    let reconstruction = (0..k).all(|s| {
        let sum: Vec<Scalar> = (0..code.n())
            .map(|c| f.sum((0..m).map(|i| f.mul(f.alpha(i), v[(s * m + i, c)]))))
            .collect();
        sum == code.generator().row(s)
    });

    let psi = RankEquivalenceMap::new(f, v, Mat::identity(k * m), Scalar::ONE)?;
    let image = psi.apply_rows(f, code.generator())?;
    let target = c_opt(code.field_arc().clone(), k)?;
    let image_is_c_opt = image.same_row_space(f, target.code().generator());

    let (weights_checked, weights_preserved) = weight_scan(code, &psi)?;
    Ok((
        psi,
        OptCertificate { two_bases, trace_basis, reconstruction, image_is_c_opt, weights_checked, weights_preserved },
    ))
}

/// Every codeword when `q^{mk} <= 10^4`, otherwise 1000 seeded samples.
fn weight_scan(code: &LinearCode, psi: &RankEquivalenceMap) -> Result<(usize, bool)> {
    let f = code.field();
    let size = (f.order() as u128).saturating_pow(code.k() as u32);
    let words = if size <= 10_000 {
        code.codewords(Budget(10_000))?
    } else {
        let mut rng = crate::seeded_rng(0, 3);
        (0..1000)
            .map(|_| {
                let x: Vec<Scalar> = (0..code.k()).map(|_| Scalar::from_index(rng.gen_range(0..f.order()))).collect();
                code.encode(&x)
            })
            .collect::<Result<Vec<_>>>()?
    };
    let mut ok = true;
    for c in &words {
        ok &= psi.preserves_weight(f, c)?;
    }
    Ok((words.len(), ok))
}

/// Outcome of testing whether `C = ⊕ C_i'` is equivalent to `∏ C_i`.
#[derive(Clone, Debug)]
pub struct ProductCharacterization {
    pub equivalent: bool,
    /// `dim C* = d_{R,k}(C)`
    pub closure_dim: usize,
    /// `Σ dim C_i'* = Σ d_{R,k_i}(C_i')`
    pub sum_of_closures: usize,
    /// When equivalent: `ψ` sending the stacked `F_q` bases of the `C_i'*` to the
    /// canonical basis, and the product `∏ ψ(C_i')`.
    pub witness: Option<(RankEquivalenceMap, Reduction)>,
}

pub fn product_characterization(parts: &[LinearCode]) -> Result<ProductCharacterization> {
    let first = parts.first().ok_or_else(|| Error::Code("empty decomposition".into()))?;
    let f = first.field_arc().clone();
    let n = first.n();
    if parts.iter().any(|p| *p.field() != *f || p.n() != n) {
        return Err(Error::Code("decomposition parts must share field and length".into()));
    }
    let mut stacked = Mat::zeros(0, n);
    let mut closures = Mat::zeros(0, n);
    for p in parts {
        stacked = stacked.vstack(p.generator())?;
        closures = closures.vstack(p.closure().basis())?;
    }
    let k: usize = parts.iter().map(|p| p.k()).sum();
    if stacked.rank(&f) != k {
        return Err(Error::Code("decomposition is not a direct sum".into()));
    }
    let whole = galois_closure(&f, &stacked);
    let sum_of_closures = closures.rows();
    // condition 2: the sum of the closures is direct
    let direct = closures.rank(&f) == sum_of_closures;
    // condition 3: d_{R,k}(C) = Σ d_{R,k_i}(C_i')
    let additive = whole.dim() == sum_of_closures;
    assert_eq!(direct, additive, "conditions 2 and 3 disagree");
    let witness = if additive {
        let t = sum_of_closures;
        let psi = RankEquivalenceMap::new(&f, closures, Mat::identity(t), Scalar::ONE)?;
        let mut offset = 0;
        let mut blocks = Vec::with_capacity(parts.len());
        for p in parts {
            let width = p.closure_dim();
            let image = psi.apply_rows(&f, p.generator())?;
            if !image.submatrix(0..image.rows(), 0..offset).is_zero()
                || !image.submatrix(0..image.rows(), offset + width..t).is_zero()
            {
                return Err(Error::Inconsistent);
            }
            blocks.push(LinearCode::new(f.clone(), image.submatrix(0..image.rows(), offset..offset + width))?);
            offset += width;
        }
        Some((psi, cartesian(&blocks)?))
    } else {
        None
    };
    Ok(ProductCharacterization { equivalent: additive, closure_dim: whole.dim(), sum_of_closures, witness })
}

/// Whether `C = C_1 × ... × C_l` exactly. All four equivalent conditions are
/// evaluated and must agree.
pub fn exact_product_test(r: &Reduction) -> bool {
    let mains = r.main_components();
    let cols = r.column_components();
    let product = cartesian(&mains).expect("main components form a product");
    let c1 = r.code().same_code(product.code());
    let hat = cartesian(&cols).expect("column components form a product");
    let c2 = r.code().same_code(hat.code());
    let c3 = mains.iter().zip(&cols).all(|(c, h)| c.k() == h.k());
    let c4 = (0..r.l()).all(|j| (0..j).all(|i| r.block(i, j).iter_rows().all(|row| mains[j].contains(row))));
    assert!(c1 == c2 && c2 == c3 && c3 == c4, "product conditions disagree: {c1} {c2} {c3} {c4}");
    c1
}

/// What survives a rank equivalence `c ↦ cA` between two reductions.
#[derive(Clone, Debug)]
pub struct EquivalenceInvariants {
    pub image: Reduction,
    /// `A_{i,j} = 0` for `i > j`.
    pub block_upper_triangular: bool,
    /// `c ↦ c A_{i,i}` maps `C_i` onto `C_i'` and preserves its GRWs.
    pub main_witnesses: Vec<RankEquivalenceMap>,
    pub main_equivalent: Vec<bool>,
    /// `c ↦ c A` maps each row component onto its counterpart.
    pub row_equivalent: Vec<bool>,
}

impl EquivalenceInvariants {
    pub fn holds(&self) -> bool {
        self.block_upper_triangular
            && self.main_equivalent.iter().all(|&b| b)
            && self.row_equivalent.iter().all(|&b| b)
    }
}

/// Applies `c ↦ cA` (with `A` an invertible `n x n` matrix over `F_q`) to a
/// reduction whose main components are not rank degenerate, and checks that
/// main and row components are carried to rank-equivalent ones.
pub fn reduction_equivalence_invariants(r: &Reduction, a: &Mat, budget: Budget) -> Result<EquivalenceInvariants> {
    let f = r.field();
    let arc: Arc<FieldTower> = r.code().field_arc().clone();
    let n = r.code().n();
    if a.shape() != (n, n) || !a.is_over_base(f) || a.inverse(f).is_none() {
        return Err(Error::Code(format!("equivalence matrix must be an invertible {n}x{n} matrix over F_q")));
    }
    if let Some(i) = r.main_components().iter().position(|c| c.is_degenerate()) {
        return Err(Error::Hypothesis(format!("main component {} is rank degenerate", i + 1)));
    }
    let g = r.code().generator().mul(f, a)?;
    let image = Reduction::new(LinearCode::new(arc.clone(), g)?, r.n_blocks().to_vec(), r.k_blocks().to_vec())
        .map_err(|e| Error::Hypothesis(format!("the map does not send the reduction rows to a reduction: {e}")))?;
    let block_upper_triangular = (0..r.l())
        .all(|i| (0..i).all(|j| a.submatrix(r.col_range(i), r.col_range(j)).is_zero()));

    let mut main_witnesses = Vec::new();
    let mut main_equivalent = Vec::new();
    for i in 0..r.l() {
        let ci = r.main_component(i);
        let ci_img = image.main_component(i);
        let aii = a.submatrix(r.col_range(i), r.col_range(i));
        let w = RankEquivalenceMap::new(f, Mat::identity(aii.rows()), aii, Scalar::ONE)?;
        let mapped = LinearCode::new(arc.clone(), w.apply_rows(f, ci.generator())?)?;
        let same = mapped.same_code(&ci_img) && grw_table(&ci, budget)?.0 == grw_table(&ci_img, budget)?.0;
        main_witnesses.push(w);
        main_equivalent.push(same);
    }
    let whole = RankEquivalenceMap::new(f, Mat::identity(n), a.clone(), Scalar::ONE)?;
    let mut row_equivalent = Vec::new();
    for i in 0..r.l() {
        let ri = r.row_component(i);
        let ri_img = image.row_component(i);
        let mapped = LinearCode::new(arc.clone(), whole.apply_rows(f, ri.generator())?)?;
        row_equivalent.push(mapped.same_code(&ri_img) && grw_table(&ri, budget)?.0 == grw_table(&ri_img, budget)?.0);
    }
    Ok(EquivalenceInvariants { image, block_upper_triangular, main_witnesses, main_equivalent, row_equivalent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::gabidulin;
    use crate::reduction::{plotkin, PlotkinMode};

    fn tower(p: u32, m: usize) -> Arc<FieldTower> {
        Arc::new(FieldTower::new(p, m).unwrap())
    }

    #[test]
    fn identity_and_scaling() {
        let f = tower(2, 2);
        let id = RankEquivalenceMap::identity(3);
        let c = vec![Scalar::from_index(1), Scalar::from_index(2), Scalar::from_index(3)];
        assert_eq!(id.apply(&f, &c).unwrap(), c);
        let scaled = RankEquivalenceMap::new(&f, Mat::identity(3), Mat::identity(3), Scalar::from_index(2)).unwrap();
        assert!(scaled.preserves_weight(&f, &c).unwrap());
        let back = scaled.then(&f, &scaled.inverse(&f)).unwrap();
        assert_eq!(back.apply(&f, &c).unwrap(), c);
    }

    #[test]
    fn outside_source_is_rejected() {
        let f = tower(2, 2);
        let map = RankEquivalenceMap::new(&f, Mat::from_rows(2, &[vec![Scalar::ONE, Scalar::ZERO]]), Mat::identity(1), Scalar::ONE)
            .unwrap();
        assert!(map.apply(&f, &[Scalar::ZERO, Scalar::ONE]).is_err());
    }

    #[test]
    fn c_opt_maps_to_itself() {
        let f = tower(2, 2);
        let c = c_opt(f, 2).unwrap();
        let (psi, cert) = to_c_opt(c.code()).unwrap();
        assert!(cert.certified(), "{cert:?}");
        assert_eq!(psi.dim(), 4);
    }

    #[test]
    fn to_c_opt_refuses_small_weights() {
        let f = tower(2, 2);
        let g = gabidulin(f, 2, 2, None).unwrap();
        assert!(matches!(to_c_opt(&g), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn plotkin_sum_is_a_product() {
        let f = tower(2, 3);
        let c1 = gabidulin(f.clone(), 3, 1, None).unwrap();
        let c2 = gabidulin(f, 3, 2, None).unwrap();
        let r = plotkin(&c1, &c2, PlotkinMode::Sum).unwrap();
        let pc = product_characterization(&r.row_components()).unwrap();
        assert!(pc.equivalent);
        assert!(pc.witness.is_some());
    }

    #[test]
    fn product_test_on_cartesian() {
        let f = tower(2, 2);
        let a = gabidulin(f.clone(), 2, 1, None).unwrap();
        let r = cartesian(&[a.clone(), a]).unwrap();
        assert!(exact_product_test(&r));
    }

    #[test]
    fn identity_transform_keeps_everything() {
        let f = tower(2, 2);
        let a = gabidulin(f.clone(), 2, 1, None).unwrap();
        let r = cartesian(&[a.clone(), a]).unwrap();
        let inv = reduction_equivalence_invariants(&r, &Mat::identity(4), Budget::default()).unwrap();
        assert!(inv.holds());
    }
}
