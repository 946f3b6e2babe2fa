//! Parameters and construction of reducible codes with MRD main components
//! and length `n > m`.

use std::fmt;
use std::sync::Arc;

use crate::codes::{gabidulin, LinearCode};
use crate::error::{Error, Result};
use crate::field::FieldTower;
use crate::reduction::{reducible, OffDiagonal, Reduction};

fn div_ceil(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MrdCase {
    /// `t = 0`
    Aligned,
    /// `t > 0` and `t' <= s`
    ShortBlocksFew,
    /// `t > 0` and `t' > s`
    ShortBlocksMany,
}

impl MrdCase {
    pub fn number(self) -> u8 {
        match self {
            MrdCase::Aligned => 1,
            MrdCase::ShortBlocksFew => 2,
            MrdCase::ShortBlocksMany => 3,
        }
    }
}

/// What the distance theorem guarantees for a plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MrdVerdict {
    /// Branch `t <= s or t k' > m s`: `d_{R,1} = ⌊m(n-k)/n + 1⌋`; MRD iff
    /// `n | mk`.
    Exact { d1: usize, mrd: bool },
    /// Remaining branch: `d_{R,1} >= ⌊m(n-k)/n⌋` (Singleton defect at most 1).
    AlmostMrd { d1_lower: usize },
    /// Neither `t <= l` nor `n >= m^2`.
    NotCovered,
}

impl fmt::Display for MrdVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MrdVerdict::Exact { d1, mrd } => write!(f, "exact d1={d1} mrd={mrd}"),
            MrdVerdict::AlmostMrd { d1_lower } => write!(f, "almost-mrd d1>={d1_lower}"),
            MrdVerdict::NotCovered => write!(f, "not-covered"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MrdPlan {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub t: usize,
    pub k_prime: usize,
    pub s: usize,
    pub a: i64,
    pub b: i64,
    pub t_prime: i64,
    pub case: MrdCase,
    /// `(length, dimension)` of each main component, in block order.
    pub components: Vec<(usize, usize)>,
    /// Lower bound on `d_{R,1}` from the minimum over main components.
    pub d1_case_bound: i64,
    pub verdict: MrdVerdict,
}

/// Derives `l, t, k', s, a, b, t'` from `n = lm - t`, `k = lk' - s` and
/// picks the component shapes.
pub fn mrd_plan(m: usize, n: usize, k: usize) -> Result<MrdPlan> {
    if m == 0 || n <= m {
        return Err(Error::Hypothesis(format!("the MRD family needs n > m, got n={n}, m={m}")));
    }
    if k == 0 || k > n {
        return Err(Error::Hypothesis(format!("dimension must satisfy 1 <= k <= n, got k={k}")));
    }
    let (mi, ni, ki) = (m as i64, n as i64, k as i64);
    let l = div_ceil(ni, mi);
    let t = l * mi - ni;
    let kp = div_ceil(ki, l);
    let s = l * kp - ki;
    let a = div_ceil(ki * mi, ni) - kp;
    let b = div_ceil(t, l) - 1;
    let tp = l * (mi - b) - ni;
    assert_eq!(ni, l * mi - t);
    assert!((0..mi).contains(&t));
    assert_eq!(ki, l * kp - s);
    assert!((0..l).contains(&s));
    assert!(0 < tp && tp <= l, "t' = {tp} out of (0, {l}]");

    let case = if t == 0 {
        MrdCase::Aligned
    } else if tp <= s {
        MrdCase::ShortBlocksFew
    } else {
        MrdCase::ShortBlocksMany
    };
    let mut comps: Vec<(i64, i64)> = Vec::new();
    let mut push = |count: i64, len: i64, dim: i64| {
        for _ in 0..count {
            comps.push((len, dim));
        }
    };
    let d1_case_bound = match case {
        MrdCase::Aligned => {
            push(l - s, mi, kp);
            push(s, mi, kp - 1);
            mi - kp + 1
        }
        MrdCase::ShortBlocksFew => {
            push(l - s, mi - b, kp);
            push(s - tp, mi - b, kp - 1);
            push(tp, mi - b - 1, kp - 1);
            mi - b - kp + 1
        }
        MrdCase::ShortBlocksMany => {
            push(l - tp, mi - b, kp);
            push(tp - s, mi - b - 1, kp);
            push(s, mi - b - 1, kp - 1);
            mi - b - kp
        }
    };
    assert_eq!(comps.iter().map(|c| c.0).sum::<i64>(), ni);
    assert_eq!(comps.iter().map(|c| c.1).sum::<i64>(), ki);
    for &(len, dim) in &comps {
        assert!(0 <= dim && dim <= len && len <= mi, "component [{len},{dim}] violates dim <= len <= m");
    }

    let covered = t <= l || ni >= mi * mi;
    let verdict = if !covered {
        MrdVerdict::NotCovered
    } else if t <= s || t * kp > mi * s {
        let d1 = ((mi * (ni - ki) + ni) / ni) as usize;
        MrdVerdict::Exact { d1, mrd: (mi * ki) % ni == 0 }
    } else {
        MrdVerdict::AlmostMrd { d1_lower: ((mi * (ni - ki)) / ni) as usize }
    };

    Ok(MrdPlan {
        m,
        n,
        k,
        l: l as usize,
        t: t as usize,
        k_prime: kp as usize,
        s: s as usize,
        a,
        b,
        t_prime: tp,
        case,
        components: comps.iter().map(|&(x, y)| (x as usize, y as usize)).collect(),
        d1_case_bound,
        verdict,
    })
}

impl fmt::Display for MrdPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "plan m={} n={} k={} l={} t={} k'={} s={} a={} b={} t'={} case={}",
            self.m, self.n, self.k, self.l, self.t, self.k_prime, self.s, self.a, self.b, self.t_prime,
            self.case.number()
        )?;
        let comps: Vec<String> = self.components.iter().map(|(n, k)| format!("[{n},{k}]")).collect();
        writeln!(f, "components {}", comps.join(" "))?;
        write!(f, "d1_case_bound={} verdict={}", self.d1_case_bound, self.verdict)
    }
}

/// Instantiates a plan with Gabidulin main components.
pub fn build_mrd_reducible(field: Arc<FieldTower>, plan: &MrdPlan, off: &OffDiagonal) -> Result<Reduction> {
    if field.m() != plan.m {
        return Err(Error::Field(format!("plan is for m={}, field has m={}", plan.m, field.m())));
    }
    let mains = plan
        .components
        .iter()
        .map(|&(len, dim)| {
            assert!(dim <= len, "planned component [{len},{dim}]");
            gabidulin(field.clone(), len, dim, None)
        })
        .collect::<Result<Vec<LinearCode>>>()?;
    reducible(&mains, off)
}
