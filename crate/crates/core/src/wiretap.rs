//! Coset coding over a code `C` and what a wiretapper observing `W = XB^T`
//! learns: `I(S;W) = dim(C ∩ V)` with `V` the row space of `B`, plus the
//! block-wise bounds for reducible codes.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use rand::Rng;

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{all_vectors, intersect_dim, solve_affine, Budget, Mat};
use crate::rankmetric::GaloisClosedSpace;
use crate::reduction::Reduction;

/// Largest joint state space enumerated exactly.
pub const MAX_ATOMS: u128 = 1_000_000;

/// A uniformly random `c` with `c G^T = x`.
pub fn coset_encode(code: &LinearCode, x: &[Scalar], seed: u64) -> Result<Vec<Scalar>> {
    if x.len() != code.k() {
        return Err(Error::Dimension(format!("message of length {} for k = {}", x.len(), code.k())));
    }
    let mut rng = crate::seeded_rng(seed, 4);
    solve_affine(code.field(), code.generator(), x, &mut rng)
}

/// `x = c G^T`.
pub fn coset_decode(code: &LinearCode, c: &[Scalar]) -> Result<Vec<Scalar>> {
    if c.len() != code.n() {
        return Err(Error::Dimension(format!("word of length {} for n = {}", c.len(), code.n())));
    }
    let f = code.field();
    Ok(code
        .generator()
        .iter_rows()
        .map(|g| f.sum(g.iter().zip(c).map(|(&a, &b)| f.mul(a, b))))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeakageReport {
    pub mu: usize,
    /// `dim(C ∩ V)`, in `F_{q^m}` packets.
    pub leakage: usize,
    /// Largest `r` with `d_{R,r}(C) <= mu`, when a weight table is supplied.
    pub worst_case_r: Option<usize>,
    /// Smallest bound from the block-projection theorem, when a reduction is
    /// supplied and some composition is admissible.
    pub stronger_bound: Option<usize>,
}

impl fmt::Display for LeakageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        write!(
            f,
            "mu={} leakage={} worst_case_r={} stronger_bound={}",
            self.mu,
            self.leakage,
            show(self.worst_case_r),
            show(self.stronger_bound)
        )
    }
}

fn check_wiretap(code: &LinearCode, b: &Mat) -> Result<()> {
    if b.cols() != code.n() {
        return Err(Error::Dimension(format!("wiretap matrix has {} columns, code length {}", b.cols(), code.n())));
    }
    if !b.is_over_base(code.field()) {
        return Err(Error::Field("wiretap matrix has entries outside the base field".into()));
    }
    Ok(())
}

/// `table` is `d_{R,1..k}(C)`.
pub fn worst_case_r(table: &[usize], mu: usize) -> usize {
    table.iter().take_while(|&&d| d <= mu).count()
}

pub fn leakage_exact(code: &LinearCode, b: &Mat, table: Option<&[usize]>) -> Result<LeakageReport> {
    check_wiretap(code, b)?;
    let leakage = intersect_dim(code.field(), code.generator(), b)?;
    Ok(LeakageReport { mu: b.rows(), leakage, worst_case_r: table.map(|t| worst_case_r(t, b.rows())), stronger_bound: None })
}

/// `leakage_exact` plus the best block-projection bound of `r`.
pub fn leakage_with_reduction(r: &Reduction, b: &Mat, budget: Budget) -> Result<LeakageReport> {
    let code = r.code();
    let table = crate::grw::grw_table(code, budget)?.0;
    let mut rep = leakage_exact(code, b, Some(&table))?;
    let v = GaloisClosedSpace::from_base_rows(code.field(), b)?;
    let tables = main_tables(r, budget)?;
    rep.stronger_bound = composition_search(r, &v, &tables)?.map(|(_, bound)| bound);
    Ok(rep)
}

/// `H(Y)` in `log_Q` units for a histogram of equally likely draws out of
/// `total = Q^n`. Every atom probability must be a power of `q`.
fn entropy(counts: &HashMap<Vec<Scalar>, u64>, total: u64, q: u64, m: i128) -> Result<Ratio<i128>> {
    let mut h = Ratio::from_integer(0i128);
    for &c in counts.values() {
        let mut ratio = total / c;
        if ratio * c != total {
            return Err(Error::Inconsistent);
        }
        let mut e = 0i128;
        while ratio > 1 {
            if !ratio.is_multiple_of(q) {
                return Err(Error::Inconsistent);
            }
            ratio /= q;
            e += 1;
        }
        // p log_Q(1/p) with p = q^{-e}
        h += Ratio::new(c as i128, total as i128) * Ratio::new(e, m);
    }
    Ok(h)
}

/// `I(S;W)` in `log_{q^m}` units by exact enumeration of the joint law. With
/// `S` uniform and `X` uniform on the coset of `S`, `X` is uniform on
/// `F_{q^m}^n`, so enumerating every `x` once weights each pair correctly.
pub fn leakage_empirical(code: &LinearCode, b: &Mat, budget: Budget) -> Result<Ratio<i128>> {
    check_wiretap(code, b)?;
    let f = code.field();
    let total = (f.order() as u128).saturating_pow(code.n() as u32);
    Budget(budget.0.min(MAX_ATOMS)).check(format!("joint law over {} words", code.n()), total)?;
    let alphabet: Vec<Scalar> = f.elements().collect();
    let bt = b.transpose();
    let mut s_counts: HashMap<Vec<Scalar>, u64> = HashMap::new();
    let mut w_counts: HashMap<Vec<Scalar>, u64> = HashMap::new();
    let mut joint: HashMap<Vec<Scalar>, u64> = HashMap::new();
    for x in all_vectors(&alphabet, code.n()) {
        let s = coset_decode(code, &x)?;
        let w = Mat::row_vector(&x).mul(f, &bt)?.row(0).to_vec();
        let mut sw = s.clone();
        sw.extend_from_slice(&w);
        *s_counts.entry(s).or_default() += 1;
        *w_counts.entry(w).or_default() += 1;
        *joint.entry(sw).or_default() += 1;
    }
    let (q, m) = (f.p() as u64, f.m() as i128);
    let total = total as u64;
    Ok(entropy(&s_counts, total, q, m)? + entropy(&w_counts, total, q, m)? - entropy(&joint, total, q, m)?)
}

/// Plug-in estimate of `I(S;W)` from `trials` seeded samples of `(S, X)`.
/// Biased upwards for small sample sizes; for spaces too large to enumerate.
pub fn leakage_sampled(code: &LinearCode, b: &Mat, trials: usize, seed: u64) -> Result<f64> {
    check_wiretap(code, b)?;
    let f = code.field();
    let mut rng = crate::seeded_rng(seed, 5);
    let bt = b.transpose();
    let mut s_counts: HashMap<Vec<Scalar>, u64> = HashMap::new();
    let mut w_counts: HashMap<Vec<Scalar>, u64> = HashMap::new();
    let mut joint: HashMap<Vec<Scalar>, u64> = HashMap::new();
    for _ in 0..trials {
        let s: Vec<Scalar> = (0..code.k()).map(|_| Scalar::from_index(rng.gen_range(0..f.order()))).collect();
        let x = solve_affine(f, code.generator(), &s, &mut rng)?;
        let w = Mat::row_vector(&x).mul(f, &bt)?.row(0).to_vec();
        let mut sw = s.clone();
        sw.extend_from_slice(&w);
        *s_counts.entry(s).or_default() += 1;
        *w_counts.entry(w).or_default() += 1;
        *joint.entry(sw).or_default() += 1;
    }
    let base = (f.order() as f64).ln();
    let h = |counts: &HashMap<Vec<Scalar>, u64>| {
        counts
            .values()
            .map(|&c| {
                let p = c as f64 / trials as f64;
                -p * p.ln() / base
            })
            .sum::<f64>()
    };
    Ok(h(&s_counts) + h(&w_counts) - h(&joint))
}

/// `d_{R,0..k_i}(C_i)` for every main component.
pub fn main_tables(r: &Reduction, budget: Budget) -> Result<Vec<Vec<usize>>> {
    r.main_components().iter().map(|c| crate::grw::grw_table_with_zero(c, budget)).collect()
}

fn projection_dims(r: &Reduction, v: &GaloisClosedSpace) -> Result<Vec<usize>> {
    let f = r.field();
    if v.ambient() != r.code().n() {
        return Err(Error::Dimension(format!("closed space in length {}, code length {}", v.ambient(), r.code().n())));
    }
    Ok((0..r.l()).map(|i| v.project(f, r.col_range(i)).dim()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongerBound {
    /// `Σ r_i - #{ i : dim π_i(V) < d_{R,r_i}(C_i) }`
    pub bound: usize,
    /// `dim π_i(V) < d_{R,1}(C_i)` for every block with `k_i > 0`, which forces
    /// zero leakage.
    pub zero_leakage: bool,
    /// `#{ i : dim π_i(V) < d_{R,r_i}(C_i) } > 0`, so `dim(C ∩ V) < Σ r_i`.
    pub strict: bool,
}

/// The block-projection bound for one composition `r_1..r_l`. `tables[i]` is
/// `d_{R,0..k_i}(C_i)`.
pub fn stronger_security_bound(
    r: &Reduction,
    v: &GaloisClosedSpace,
    composition: &[usize],
    tables: &[Vec<usize>],
) -> Result<StrongerBound> {
    let l = r.l();
    if composition.len() != l || tables.len() != l {
        return Err(Error::Dimension(format!("need {l} composition parts and tables")));
    }
    let dims = projection_dims(r, v)?;
    let mut total = 0usize;
    let mut strict_count = 0usize;
    let mut zero_leakage = true;
    for i in 0..l {
        let t = &tables[i];
        if t.len() != r.k_blocks()[i] + 1 {
            return Err(Error::Dimension(format!("table {} has {} entries for k_i = {}", i + 1, t.len(), r.k_blocks()[i])));
        }
        let ri = composition[i];
        let d = *t.get(ri).ok_or_else(|| Error::Hypothesis(format!("r_{} = {ri} exceeds k_{}", i + 1, i + 1)))?;
        if dims[i] > d {
            return Err(Error::Hypothesis(format!(
                "dim π_{}(V) = {} exceeds d_{{R,{ri}}}(C_{}) = {d}",
                i + 1,
                dims[i],
                i + 1
            )));
        }
        total += ri;
        if dims[i] < d {
            strict_count += 1;
        }
        if t.len() > 1 && dims[i] >= t[1] {
            zero_leakage = false;
        }
    }
    Ok(StrongerBound { bound: total - strict_count, zero_leakage, strict: strict_count > 0 })
}

/// The admissible composition with the smallest bound, or `None` when some
/// block has `dim π_i(V) > dim C_i*`. Blocks contribute independently, and
/// within a block the smallest admissible `r_i` is optimal.
pub fn composition_search(
    r: &Reduction,
    v: &GaloisClosedSpace,
    tables: &[Vec<usize>],
) -> Result<Option<(Vec<usize>, usize)>> {
    let dims = projection_dims(r, v)?;
    let mut comp = Vec::with_capacity(r.l());
    for (i, t) in tables.iter().enumerate() {
        match t.iter().position(|&d| d >= dims[i]) {
            Some(ri) => comp.push(ri),
            None => return Ok(None),
        }
    }
    let b = stronger_security_bound(r, v, &comp, tables)?;
    Ok(Some((comp, b.bound)))
}

/// `#{ i : π_i(V) = F_{q^m}^m }` for `C_opt` with `k` blocks of length `m`.
pub fn c_opt_bound(r: &Reduction, v: &GaloisClosedSpace) -> Result<usize> {
    let m = r.field().m();
    if r.n_blocks().iter().any(|&n| n != m) {
        return Err(Error::Hypothesis(format!("C_opt blocks have length m = {m}")));
    }
    Ok(projection_dims(r, v)?.into_iter().filter(|&d| d == m).count())
}
