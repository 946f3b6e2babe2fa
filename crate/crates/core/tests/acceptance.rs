//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if a criterion outside `KNOWN_UNATTAINABLE` fails.

mod common;

use std::sync::Arc;
use std::time::Instant;

use common::*;
use num_rational::Ratio;
use rand::Rng;
use reducible_grw::bounds::{
    d1_or_n_plus_1, dual_grw_upper, exact_with_bounds, grw_estimates_mrd, mrd_rank_from_table, mrd_rank_via_dual,
    singleton_check,
};
use reducible_grw::codes::gabidulin;
use reducible_grw::equivalence::{product_characterization, to_c_opt};
use reducible_grw::grw::{grw_table, grw_table_closed_spaces, grw_table_subcodes};
use reducible_grw::linalg::SubspaceIter;
use reducible_grw::mrd::{build_mrd_reducible, mrd_plan, MrdVerdict};
use reducible_grw::reduction::{
    c_opt, exact_reduction_for_d1, plotkin, random_block_transform, reducible, transform_reduction, OffDiagonal,
    PlotkinMode,
};
use reducible_grw::wiretap::{c_opt_bound, leakage_empirical, leakage_exact, main_tables, stronger_security_bound};
use reducible_grw::{seeded_rng, Budget, GaloisClosedSpace, LinearCode, Mat, Scalar};

/// Criteria whose statement cannot hold; see the decisions ledger.
const KNOWN_UNATTAINABLE: &[usize] = &[11];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn budget() -> Budget {
    Budget::default()
}

fn c1_gabidulin() -> Outcome {
    let f = tower(2, 4);
    for k in 1..=3 {
        let code = gabidulin(f.clone(), 4, k, None).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let (t, method) = grw_table(&code, budget()).map_err(|e| e.to_string())?;
        let want: Vec<usize> = (1..=k).map(|r| 4 - k + r).collect();
        ensure(t == want, || format!("k={k}: {t:?} != {want:?}"))?;
        ensure(start.elapsed().as_secs() < 60, || format!("k={k} took {:?}", start.elapsed()))?;
        let _ = method;
    }
    Ok("k=1..3 tables equal n-k+r".into())
}

fn c2_c_opt() -> Outcome {
    let f = tower(2, 2);
    let mut rng = seeded_rng(0, 11);
    for k in 1..=3 {
        let r = c_opt(f.clone(), k).map_err(|e| e.to_string())?;
        let code = r.code();
        let (t, _) = grw_table(code, budget()).map_err(|e| e.to_string())?;
        let want: Vec<usize> = (1..=k).map(|r| 2 * r).collect();
        ensure(t == want, || format!("k={k}: {t:?} != {want:?}"))?;
        ensure(!code.is_degenerate(), || format!("k={k}: flagged degenerate"))?;
        let scrambled = loop {
            let a = random_invertible_base(&f, code.n(), &mut rng);
            let x = random_invertible_full(&f, k, &mut rng);
            let g = x.mul(&f, &code.generator().mul(&f, &a).unwrap()).unwrap();
            let s = LinearCode::new(f.clone(), g).map_err(|e| e.to_string())?;
            if !s.same_code(code) {
                break s;
            }
        };
        let (psi, cert) = to_c_opt(&scrambled).map_err(|e| e.to_string())?;
        ensure(cert.certified() && cert.image_is_c_opt, || format!("k={k}: certificate {cert:?}"))?;
        let image = LinearCode::spanned_by(f.clone(), &psi.apply_rows(&f, scrambled.generator()).unwrap());
        ensure(image.same_code(code), || format!("k={k}: image differs from C_opt"))?;
    }
    Ok("tables rm, non-degenerate, scrambled copies mapped back".into())
}

fn c3_oracles() -> Outcome {
    let mut rng = seeded_rng(0, 12);
    for i in 0..50 {
        let p = [2, 3][rng.gen_range(0..2)];
        let m = rng.gen_range(2..=3);
        let n = rng.gen_range(1..=5);
        let k = rng.gen_range(1..=n.min(3));
        let f = tower(p, m);
        let code = random_code(&f, n, k, &mut rng);
        let a = grw_table_subcodes(&code, budget()).map_err(|e| e.to_string())?;
        let b = grw_table_closed_spaces(&code, budget()).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("code {i} (p={p} m={m} n={n} k={k}): {a:?} vs {b:?}"))?;
    }
    Ok("50 codes agree".into())
}

fn c4_sandwich() -> Outcome {
    let mut tight = 0;
    for inst in reducible_corpus() {
        let r = &inst.reduction;
        let (exact, bounds) = exact_with_bounds(r, budget()).map_err(|e| e.to_string())?;
        let k1 = r.k_blocks()[0];
        let k2 = r.k_blocks()[1];
        for (e, b) in exact.entries.iter().zip(&bounds.entries) {
            let d = e.exact.unwrap();
            ensure(b.lower <= d && d <= b.upper, || format!("seed {} r={}: {} <= {d} <= {}", inst.seed, e.r, b.lower, b.upper))?;
            if inst.cartesian {
                ensure(b.lower == d && b.upper == d, || format!("seed {} r={}: cartesian not tight", inst.seed, e.r))?;
            }
            if inst.mrd_mains && k1 <= k2 && e.r > k1 {
                ensure(b.lower == d && b.upper == d, || {
                    format!("seed {} r={}: mrd case not tight ({}, {d}, {})", inst.seed, e.r, b.lower, b.upper)
                })?;
                tight += 1;
            }
        }
    }
    Ok(format!("50 codes, {tight} tight entries in the MRD ranges"))
}

fn mrd_grid() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for m in 2..=3 {
        for n in m + 1..=6 {
            for k in 1..=n {
                out.push((m, n, k));
            }
        }
    }
    out
}

fn c5_mrd_family() -> Outcome {
    let (mut exact, mut almost, mut skipped) = (0, 0, 0);
    for (m, n, k) in mrd_grid() {
        let plan = match mrd_plan(m, n, k) {
            Ok(p) => p,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let f = tower(2, m);
        let seed = (m * 100 + n * 10 + k) as u64;
        let r = build_mrd_reducible(f, &plan, &OffDiagonal::Random { seed }).map_err(|e| e.to_string())?;
        let d1 = d1_or_n_plus_1(r.code(), budget()).map_err(|e| e.to_string())?;
        match plan.verdict {
            MrdVerdict::Exact { d1: want, mrd } => {
                let formula = (m * (n - k)) / n + 1;
                ensure(want == formula, || format!("({m},{n},{k}): plan says {want}, formula {formula}"))?;
                ensure(d1 == want, || format!("({m},{n},{k}): d1 = {d1}, expected {want}"))?;
                ensure(mrd == (m * k % n == 0), || format!("({m},{n},{k}): mrd flag {mrd}"))?;
                if mrd {
                    ensure(singleton_check(n, m, k, d1).is_mrd, || format!("({m},{n},{k}): not MRD"))?;
                }
                exact += 1;
            }
            MrdVerdict::AlmostMrd { d1_lower } => {
                ensure(d1_lower == m * (n - k) / n, || format!("({m},{n},{k}): lower {d1_lower}"))?;
                ensure(d1 >= d1_lower, || format!("({m},{n},{k}): d1 = {d1} < {d1_lower}"))?;
                almost += 1;
            }
            MrdVerdict::NotCovered => skipped += 1,
        }
    }
    Ok(format!("{exact} exact-branch and {almost} almost-MRD plans, {skipped} outside the hypotheses"))
}

fn c6_estimates() -> Outcome {
    let mut count = 0;
    for (m, n, k) in mrd_grid() {
        let Ok(plan) = mrd_plan(m, n, k) else { continue };
        if plan.verdict == MrdVerdict::NotCovered {
            continue;
        }
        let f = tower(2, m);
        let r = build_mrd_reducible(f, &plan, &OffDiagonal::Zero).map_err(|e| e.to_string())?;
        let est = grw_estimates_mrd(&plan).map_err(|e| e.to_string())?;
        let (t, _) = grw_table(r.code(), budget()).map_err(|e| e.to_string())?;
        ensure(est == t, || format!("({m},{n},{k}): estimates {est:?} vs exact {t:?}"))?;
        count += 1;
    }
    Ok(format!("{count} cartesian builds match"))
}

/// Every code of the grid with its weight table.
fn leakage_grid() -> Vec<(LinearCode, Vec<usize>)> {
    let f = tower(2, 2);
    let mut out = Vec::new();
    for n in 1..=3 {
        for k in 1..=n.min(2) {
            for g in SubspaceIter::full(&f, n, k, budget()).unwrap() {
                let code = LinearCode::new(f.clone(), g).unwrap();
                let (t, _) = grw_table(&code, budget()).unwrap();
                out.push((code, t));
            }
        }
    }
    out
}

fn all_wiretaps(code: &LinearCode) -> Vec<Mat> {
    let n = code.n();
    (0..=n).flat_map(|mu| SubspaceIter::base(code.field(), n, mu, budget()).unwrap()).collect()
}

fn c7_leakage_identity(grid: &[(LinearCode, Vec<usize>)]) -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for (code, _) in grid {
        for b in all_wiretaps(code) {
            let want = leakage_exact(code, &b, None).map_err(|e| e.to_string())?.leakage;
            let got = leakage_empirical(code, &b, budget()).map_err(|e| e.to_string())?;
            ensure(got == Ratio::from_integer(want as i128), || {
                format!("n={} k={} mu={}: I(S;W) = {got}, dim = {want}", code.n(), code.k(), b.rows())
            })?;
            pairs += 1;
        }
    }
    ensure(start.elapsed().as_secs() < 600, || format!("took {:?}", start.elapsed()))?;
    Ok(format!("{} codes, {pairs} wiretap matrices, zero discrepancies", grid.len()))
}

fn c8_worst_case(grid: &[(LinearCode, Vec<usize>)]) -> Outcome {
    for (code, t) in grid {
        let taps = all_wiretaps(code);
        for b in &taps {
            if b.rows() < t[0] {
                let l = leakage_exact(code, b, None).unwrap().leakage;
                ensure(l == 0, || format!("n={} k={}: mu={} < d1 leaks {l}", code.n(), code.k(), b.rows()))?;
            }
        }
        for (i, &d) in t.iter().enumerate() {
            let r = i + 1;
            let hit = taps
                .iter()
                .any(|b| b.rows() == d && leakage_exact(code, b, None).unwrap().leakage >= r);
            ensure(hit, || format!("n={} k={}: no {d}-row wiretap leaks {r}", code.n(), code.k()))?;
        }
    }
    Ok(format!("{} codes", grid.len()))
}

fn c9_stronger_security() -> Outcome {
    let f = tower(2, 2);
    let r = c_opt(f.clone(), 2).map_err(|e| e.to_string())?;
    let (t, _) = grw_table(r.code(), budget()).map_err(|e| e.to_string())?;
    let tables = main_tables(&r, budget()).map_err(|e| e.to_string())?;
    let lines: Vec<Mat> = SubspaceIter::base(&f, 2, 1, budget()).unwrap().collect();
    let mut count = 0;
    for v1 in &lines {
        for v2 in &lines {
            let mut b = Mat::zeros(2, 4);
            b.set_block(0, 0, v1);
            b.set_block(1, 2, v2);
            let v = GaloisClosedSpace::from_base_rows(&f, &b).map_err(|e| e.to_string())?;
            ensure(v.dim() == 2 && v.dim() >= t[0] && t[0] == 2, || format!("dim V = {}, d1 = {}", v.dim(), t[0]))?;
            let bound = c_opt_bound(&r, &v).map_err(|e| e.to_string())?;
            let general = stronger_security_bound(&r, &v, &[1, 1], &tables).map_err(|e| e.to_string())?;
            let leak = leakage_exact(r.code(), &b, None).map_err(|e| e.to_string())?.leakage;
            ensure(bound == 0 && general.bound == 0 && leak == 0, || {
                format!("bound {bound}, theorem bound {}, leakage {leak}", general.bound)
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} product wiretaps: dim V = 2 = d1, bound 0 = leakage"))
}

fn c10_duality() -> Outcome {
    let mut covered = 0;
    for inst in reducible_corpus() {
        let r = &inst.reduction;
        let code = r.code();
        let (t, _) = grw_table(code, budget()).map_err(|e| e.to_string())?;
        let from_table = mrd_rank_from_table(code.n(), &t);
        let from_dual = mrd_rank_via_dual(code, budget()).map_err(|e| e.to_string())?;
        ensure(from_table == from_dual, || format!("seed {}: r(C) {from_table} vs {from_dual}", inst.seed))?;
        let upper = dual_grw_upper(r, budget()).map_err(|e| e.to_string())?;
        let (dual_t, _) = grw_table(&code.dual(), budget()).map_err(|e| e.to_string())?;
        // the column-component duals only reach r <= n - Σ k̂_j
        ensure(upper.len() <= dual_t.len(), || format!("seed {}: {} bounds for {} weights", inst.seed, upper.len(), dual_t.len()))?;
        covered += upper.len();
        for (i, (u, d)) in upper.iter().zip(&dual_t).enumerate() {
            ensure(d <= u, || format!("seed {} r={}: dual weight {d} > bound {u}", inst.seed, i + 1))?;
        }
    }
    Ok(format!("50 codes, {covered} dual weights bounded"))
}

/// `d_{R,1}(C_1 x C_2)` and `d_{R,1}(C)` for the example pair built on `alpha`.
fn example_pair(alpha: Scalar, scaled_u: bool) -> Result<(usize, usize, bool), String> {
    let f = tower(2, 3);
    let fr = |i| f.frobenius(alpha, i);
    let u = if scaled_u { alpha } else { Scalar::ONE };
    let z = Scalar::ZERO;
    let c1 = LinearCode::new(f.clone(), Mat::from_rows(3, &[vec![u, z, z]])).map_err(|e| e.to_string())?;
    let mode = if scaled_u { PlotkinMode::Frobenius(1) } else { PlotkinMode::Scaled(alpha) };
    let c2 = Mat::from_rows(3, &[vec![z, fr(0), fr(1)], vec![z, fr(1), fr(2)]]);
    let c2 = LinearCode::new(f.clone(), c2).map_err(|e| e.to_string())?;
    plotkin_d1s(&c1, &c2, mode)
}

/// The same pair with `C_2` spanned by its first generator only.
fn example_pair_one_generator(alpha: Scalar, scaled_u: bool) -> Result<(usize, usize, bool), String> {
    let f = tower(2, 3);
    let z = Scalar::ZERO;
    let u = if scaled_u { alpha } else { Scalar::ONE };
    let c1 = LinearCode::new(f.clone(), Mat::from_rows(3, &[vec![u, z, z]])).map_err(|e| e.to_string())?;
    let c2 = Mat::from_rows(3, &[vec![z, alpha, f.frobenius(alpha, 1)]]);
    let c2 = LinearCode::new(f.clone(), c2).map_err(|e| e.to_string())?;
    let mode = if scaled_u { PlotkinMode::Frobenius(1) } else { PlotkinMode::Scaled(alpha) };
    plotkin_d1s(&c1, &c2, mode)
}

fn plotkin_d1s(c1: &LinearCode, c2: &LinearCode, mode: PlotkinMode) -> Result<(usize, usize, bool), String> {
    let r = plotkin(c1, c2, mode).map_err(|e| e.to_string())?;
    let prod = reducible_grw::reduction::cartesian(&[c1.clone(), c2.clone()]).map_err(|e| e.to_string())?;
    let d_prod = d1_or_n_plus_1(prod.code(), budget()).map_err(|e| e.to_string())?;
    let d = d1_or_n_plus_1(r.code(), budget()).map_err(|e| e.to_string())?;
    let pc = product_characterization(&r.row_components()).map_err(|e| e.to_string())?;
    Ok((d_prod, d, pc.equivalent))
}

fn c11_plotkin() -> Outcome {
    let f = tower(2, 3);
    // (u, u + v) always gives a product
    let mut rng = seeded_rng(0, 13);
    for i in 0..20 {
        let n = rng.gen_range(1..=3);
        let c1 = random_code(&f, n, rng.gen_range(1..=n), &mut rng);
        let c2 = random_code(&f, n, rng.gen_range(1..=n), &mut rng);
        let r = plotkin(&c1, &c2, PlotkinMode::Sum).map_err(|e| e.to_string())?;
        let pc = product_characterization(&r.row_components()).map_err(|e| e.to_string())?;
        ensure(pc.equivalent, || format!("(u,u+v) instance {i} not a product"))?;
    }
    let y = Scalar::from_index(2);
    let (p2, c2, e2) = example_pair(y, false)?;
    let (p3, c3, e3) = example_pair(y, true)?;
    let (o2p, o2, o2e) = example_pair_one_generator(y, false)?;
    let (o3p, o3, o3e) = example_pair_one_generator(y, true)?;
    let detail = format!(
        "as stated: scaled d1(prod)={p2} d1(C)={c2} product={e2}, frobenius d1(prod)={p3} d1(C)={c3} product={e3}; \
         with C_2 = <(0,a,a^[1])>: scaled d1(prod)={o2p} d1(C)={o2} product={o2e}, frobenius d1(prod)={o3p} d1(C)={o3} product={o3e}"
    );
    // C_2 as stated spans {0} x F^2, so (0,0,0,0,1,0) lies in C and d1(C) = 1.
    ensure(p2 == 1 && c2 == 2 && p3 == 1 && c3 == 2, || detail.clone())?;
    Ok(detail)
}

fn c12_reductions() -> Outcome {
    let corpus = reducible_corpus();
    for i in 0..100u64 {
        let inst = &corpus[(i % 50) as usize];
        let r = &inst.reduction;
        let a = random_block_transform(r, 1000 + i);
        let t = transform_reduction(r, &a).map_err(|e| e.to_string())?;
        ensure(t.code().same_code(r.code()), || format!("pair {i}: code changed"))?;
        for (x, y) in t.main_components().iter().zip(r.main_components()) {
            ensure(x.same_code(&y), || format!("pair {i}: main component changed"))?;
        }
        for (x, y) in t.column_components().iter().zip(r.column_components()) {
            ensure(x.same_code(&y), || format!("pair {i}: column component changed"))?;
        }
    }
    let f = tower(2, 2);
    let mut rng = seeded_rng(0, 14);
    for i in 0..50 {
        let mains: Vec<LinearCode> = (0..2)
            .map(|_| {
                let n = rng.gen_range(1..=3);
                random_code(&f, n, rng.gen_range(1..=n), &mut rng)
            })
            .collect();
        let r = reducible(&mains, &OffDiagonal::Random { seed: 500 + i }).map_err(|e| e.to_string())?;
        let d1 = d1_or_n_plus_1(r.code(), budget()).map_err(|e| e.to_string())?;
        let e = exact_reduction_for_d1(&r, budget()).map_err(|e| e.to_string())?;
        ensure(e.code().same_code(r.code()), || format!("code {i}: exact reduction changed the code"))?;
        let mut best = usize::MAX;
        for c in e.row_components() {
            best = best.min(d1_or_n_plus_1(&c, budget()).map_err(|e| e.to_string())?);
        }
        ensure(best == d1, || format!("code {i}: min row-component d1 {best} vs d1(C) {d1}"))?;
    }
    Ok("100 transforms keep main and column components; 50 exact reductions attain d1".into())
}

fn random_invertible_full(f: &Arc<reducible_grw::FieldTower>, n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Mat {
    loop {
        let a = random_mat(f, n, n, rng);
        if a.inverse(f).is_some() {
            return a;
        }
    }
}

fn main() {
    let grid = leakage_grid();
    let criteria: Vec<(usize, &str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, "Gabidulin weights", Box::new(c1_gabidulin)),
        (2, "C_opt weights and equivalence", Box::new(c2_c_opt)),
        (3, "oracle equivalence", Box::new(c3_oracles)),
        (4, "reducible bounds sandwich", Box::new(c4_sandwich)),
        (5, "MRD family distance", Box::new(c5_mrd_family)),
        (6, "estimates on cartesian builds", Box::new(c6_estimates)),
        (7, "leakage identity", Box::new(|| c7_leakage_identity(&grid))),
        (8, "worst-case guarantee", Box::new(|| c8_worst_case(&grid))),
        (9, "stronger security", Box::new(c9_stronger_security)),
        (10, "duality and MRD rank", Box::new(c10_duality)),
        (11, "Plotkin examples", Box::new(c11_plotkin)),
        (12, "reduction propositions", Box::new(c12_reductions)),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match &outcome {
            Ok(detail) => println!("PASS {id:>2} {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                let known = KNOWN_UNATTAINABLE.contains(id);
                println!("FAIL {id:>2} {name} ({secs:.2}s){}: {detail}", if known { " [known]" } else { "" });
                if !known {
                    unexpected.push(*id);
                }
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
