//! Exact generalized rank weights and the report type shared with the bounds.
//!
//! Two independent oracles:
//! * subcodes: `d_{R,r} = min { dim D* : D ⊆ C, dim D = r }`, enumerating the
//!   `r`-dimensional subspaces of the message space `F_{q^m}^k`;
//! * closed spaces: `d_{R,r} = min { dim V : V = V*, dim(C ∩ V) >= r }`,
//!   enumerating `F_q`-subspaces of `F_q^n` by increasing dimension.

use std::fmt;

use crate::codes::LinearCode;
use crate::error::Result;
use crate::linalg::{gaussian_binomial, Budget, SubspaceIter};
use crate::rankmetric::subspace_rank_weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    OracleSubcode,
    OracleClosedSpace,
    ThmGrwBounds,
    CartesianCorollary,
    ThmEstimates,
    Singleton,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::OracleSubcode => "oracle-subcode",
            Method::OracleClosedSpace => "oracle-closed-space",
            Method::ThmGrwBounds => "thm-grw-bounds",
            Method::CartesianCorollary => "cartesian-corollary",
            Method::ThmEstimates => "thm-estimates",
            Method::Singleton => "singleton",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrwEntry {
    pub r: usize,
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrwReport {
    pub n: usize,
    pub m: usize,
    pub entries: Vec<GrwEntry>,
    pub is_mrd: bool,
    pub defect: usize,
    pub mrd_rank: Option<usize>,
    pub degenerate: bool,
}

impl GrwReport {
    /// Report for a fully known table `d_1..d_k`.
    pub fn from_exact(n: usize, m: usize, table: &[usize], method: Method, degenerate: bool) -> Self {
        let k = table.len();
        let entries = table
            .iter()
            .enumerate()
            .map(|(i, &d)| GrwEntry { r: i + 1, lower: d, upper: d, exact: Some(d), method })
            .collect();
        let s = crate::bounds::singleton_check(n, m, k, table.first().copied().unwrap_or(n + 1));
        GrwReport {
            n,
            m,
            entries,
            is_mrd: s.is_mrd,
            defect: s.defect,
            mrd_rank: Some(crate::bounds::mrd_rank_from_table(n, table)),
            degenerate,
        }
    }

    /// Report for interval bounds `lower[r-1] <= d_r <= upper[r-1]`.
    pub fn from_bounds(n: usize, m: usize, lower: &[usize], upper: &[usize], method: Method, degenerate: bool) -> Self {
        assert_eq!(lower.len(), upper.len());
        let k = lower.len();
        let entries: Vec<GrwEntry> = lower
            .iter()
            .zip(upper)
            .enumerate()
            .map(|(i, (&lo, &up))| {
                assert!(lo <= up, "lower {lo} > upper {up} at r={}", i + 1);
                GrwEntry { r: i + 1, lower: lo, upper: up, exact: (lo == up).then_some(lo), method }
            })
            .collect();
        let s = crate::bounds::singleton_check(n, m, k, lower.first().copied().unwrap_or(n + 1));
        let mrd_rank = entries
            .iter()
            .all(|e| e.exact.is_some())
            .then(|| crate::bounds::mrd_rank_from_table(n, lower));
        GrwReport { n, m, entries, is_mrd: s.is_mrd, defect: s.defect, mrd_rank, degenerate }
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    pub fn exact_table(&self) -> Option<Vec<usize>> {
        self.entries.iter().map(|e| e.exact).collect()
    }
}

impl fmt::Display for GrwReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let exact = e.exact.map_or("-".to_string(), |d| d.to_string());
            writeln!(f, "r={} lower={} upper={} exact={} method={}", e.r, e.lower, e.upper, exact, e.method)?;
        }
        let rank = self.mrd_rank.map_or("-".to_string(), |r| r.to_string());
        write!(
            f,
            "mrd={} defect={} mrd_rank={} degenerate={}",
            self.is_mrd, self.defect, rank, self.degenerate
        )
    }
}

/// Number of subspaces the subcode oracle visits for all `r`.
pub fn subcode_cost(code: &LinearCode) -> u128 {
    let q = code.field().order() as u64;
    (1..=code.k()).fold(0u128, |acc, r| acc.saturating_add(gaussian_binomial(code.k(), r, q)))
}

/// Worst-case number of subspaces the closed-space oracle visits.
pub fn closed_space_cost(code: &LinearCode) -> u128 {
    let q = code.field().p() as u64;
    (0..=code.n()).fold(0u128, |acc, d| acc.saturating_add(gaussian_binomial(code.n(), d, q)))
}

/// `d_{R,r}` by the subcode oracle.
pub fn grw_subcodes(code: &LinearCode, r: usize, budget: Budget) -> Result<usize> {
    let f = code.field();
    assert!(1 <= r && r <= code.k(), "r = {r} outside 1..={}", code.k());
    if r == code.k() {
        return Ok(code.closure_dim());
    }
    let mut best = usize::MAX;
    for x in SubspaceIter::full(f, code.k(), r, budget)? {
        let d = x.mul(f, code.generator())?;
        best = best.min(subspace_rank_weight(f, &d));
        if best == r {
            break;
        }
    }
    Ok(best)
}

/// The whole table `d_1..d_k` by the subcode oracle.
pub fn grw_table_subcodes(code: &LinearCode, budget: Budget) -> Result<Vec<usize>> {
    budget.check(format!("subcode oracle over k={}", code.k()), subcode_cost(code))?;
    (1..=code.k()).map(|r| grw_subcodes(code, r, budget)).collect()
}

/// The whole table `d_1..d_k` by the closed-space oracle. Dimensions are
/// scanned upwards and the scan stops once every `r` has been reached.
pub fn grw_table_closed_spaces(code: &LinearCode, budget: Budget) -> Result<Vec<usize>> {
    let f = code.field();
    let (n, k) = (code.n(), code.k());
    let g = code.generator();
    let mut table: Vec<Option<usize>> = vec![None; k];
    let mut spent: u128 = 0;
    let mut reached = 0;
    for d in 0..=n {
        if reached == k {
            break;
        }
        spent = spent.saturating_add(gaussian_binomial(n, d, f.p() as u64));
        budget.check(format!("closed-space oracle up to [{n} {d}]_{}", f.p()), spent)?;
        for v in SubspaceIter::base(f, n, d, Budget(u128::MAX))? {
            let joint = v.vstack(g)?.rank(f);
            let meet = d + k - joint;
            while reached < meet {
                table[reached] = Some(d);
                reached += 1;
            }
            if reached == k {
                break;
            }
        }
    }
    Ok(table.into_iter().map(|d| d.expect("V = F^n meets C in dimension k")).collect())
}

/// `d_{R,r}` by the closed-space oracle.
pub fn grw_closed_spaces(code: &LinearCode, r: usize, budget: Budget) -> Result<usize> {
    assert!(1 <= r && r <= code.k());
    let table = grw_table_closed_spaces(code, budget)?;
    Ok(table[r - 1])
}

/// Exact table from whichever oracle is cheaper for this code.
pub fn grw_table(code: &LinearCode, budget: Budget) -> Result<(Vec<usize>, Method)> {
    if code.k() == 0 {
        return Ok((Vec::new(), Method::OracleSubcode));
    }
    if subcode_cost(code) <= closed_space_cost(code) {
        Ok((grw_table_subcodes(code, budget)?, Method::OracleSubcode))
    } else {
        Ok((grw_table_closed_spaces(code, budget)?, Method::OracleClosedSpace))
    }
}

/// `d_{R,0..k}` with the leading `0`, the form used by min-plus compositions.
pub fn grw_table_with_zero(code: &LinearCode, budget: Budget) -> Result<Vec<usize>> {
    let (t, _) = grw_table(code, budget)?;
    let mut out = Vec::with_capacity(t.len() + 1);
    out.push(0);
    out.extend(t);
    Ok(out)
}

/// Exact report for a code.
pub fn grw_report(code: &LinearCode, budget: Budget) -> Result<GrwReport> {
    let (t, method) = grw_table(code, budget)?;
    Ok(GrwReport::from_exact(code.n(), code.field().m(), &t, method, code.is_degenerate()))
}
