//! Acceptance criteria. Runs every criterion, prints one line each, and
//! exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use pou_core::instances;
use pou_core::kuhn::{euclidean_refine, KuhnGrid};
use pou_core::metric::{
    distance_profile, is_subset, optimal_lebesgue, rho_multiplicity, Cover, MetricSpace,
};
use pou_core::metric::top_two_bound_check;
use pou_core::partition::{
    build_partition, compute_cp, critical_residual, empirical_lipschitz,
    interpolated_vector_bound, lq_distance, per_function_lipschitz, rooted_partial_sum_lipschitz,
    vector_lipschitz, worst_partial_sum_lipschitz, PartitionOfUnity,
};
use pou_core::refine::{default_params, disjoint_decomposition, in_b_set, shrink_cover};

/// Grid step of the optimality examples.
const EXAMPLE_STEP: f64 = 0.005;
/// Fraction of the bound the examples must reach.
const SHARPNESS: f64 = 0.98;
/// Slack on "never exceeds the bound" comparisons.
const BOUND_SLACK: f64 = 1e-9;
/// Tolerance of the l1 identity.
const L1_IDENTITY_TOL: f64 = 1e-12;
/// Points in the C_p grid oracle.
const CP_GRID_POINTS: usize = 1_000_000;
const CP_ORACLE_TOL: f64 = 1e-8;
const CP_CLOSED_FORM_TOL: f64 = 1e-10;
const CP_RESIDUAL_TOL: f64 = 1e-8;
const EXAMPLE_BUDGET: Duration = Duration::from_secs(10);
const KUHN_BUDGET: Duration = Duration::from_secs(30);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("optimality, general metric spaces", c1_general_optimality),
        ("optimality, approximate midpoints", c2_midpoint_optimality),
        ("l1 identity", c3_l1_identity),
        ("lq interpolation", c4_lq_interpolation),
        ("C_p constant", c5_cp),
        ("shrinking", c6_shrinking),
        ("disjoint decomposition", c7_decomposition),
        ("Kuhn refinement", c8_kuhn),
        ("roots", c9_roots),
        ("top-two sum", c10_top_two),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let status = if out.pass { "PASS" } else { "FAIL" };
        if !out.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} [{status}] {name}: {} ({:.2}s)",
            i + 1,
            out.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

fn pou_of(inst: &instances::Instance, p: f64) -> PartitionOfUnity {
    build_partition(&inst.space, &inst.cover, p).unwrap()
}

fn c1_general_optimality() -> Outcome {
    let start = Instant::now();
    let (l, m) = (1.0, 3usize);
    let inst = instances::general_example(l, m, EXAMPLE_STEP);
    let lstar = optimal_lebesgue(&inst.space, &inst.cover).unwrap();
    let pou = pou_of(&inst, 1.0);
    let worst = worst_partial_sum_lipschitz(&pou, &inst.space).constant;
    let target = (m as f64 - 1.0) / l;
    let bound = (m as f64 - 1.0).max(1.0) / l;
    let elapsed = start.elapsed();
    let pass = (lstar - l).abs() < 1e-12
        && inst.cover.multiplicity() == m
        && worst >= SHARPNESS * target
        && worst <= bound + BOUND_SLACK
        && elapsed < EXAMPLE_BUDGET;
    outcome(pass, format!("L_* = {lstar}, empirical {worst:.6}, bound {bound}"))
}

fn c2_midpoint_optimality() -> Outcome {
    let start = Instant::now();
    let l = 1.0;
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [2usize, 3, 5] {
        let inst = instances::midpoint_example(l, m, EXAMPLE_STEP);
        let lstar = optimal_lebesgue(&inst.space, &inst.cover).unwrap();
        let pou = pou_of(&inst, 1.0);
        let worst = worst_partial_sum_lipschitz(&pou, &inst.space).constant;
        let target = (m as f64 - 1.0) / (2.0 * l);
        pass &= (lstar - l).abs() < 1e-9
            && inst.cover.multiplicity() == m
            && worst >= SHARPNESS * target
            && worst <= target + BOUND_SLACK;
        parts.push(format!("M={m}: {worst:.6}/{target}"));
    }
    pass &= start.elapsed() < EXAMPLE_BUDGET;
    outcome(pass, parts.join(", "))
}

fn c3_l1_identity() -> Outcome {
    let mut worst_gap = 0.0f64;
    let mut witness_mismatch = 0;
    for seed in 0..200u64 {
        let mut rng = common::rng(seed);
        use rand::Rng;
        let n = rng.gen_range(2..=40);
        let k = rng.gen_range(1..=6);
        let space = common::random_space(&mut rng, n);
        let cover = common::random_cover(&mut rng, n, k, 0.4);
        let pou = build_partition(&space, &cover, 1.0).unwrap();
        for x in 0..n {
            for y in 0..n {
                let l1 = lq_distance(&pou, x, y, 1.0).unwrap();
                let best = common::best_subset_gain(pou.row(x), pou.row(y));
                worst_gap = worst_gap.max((l1 - 2.0 * best).abs());
                let mu_star: f64 = (0..pou.n_members())
                    .filter(|&a| pou.get(x, a) > pou.get(y, a))
                    .map(|a| pou.get(x, a) - pou.get(y, a))
                    .sum();
                if (mu_star - best).abs() > L1_IDENTITY_TOL {
                    witness_mismatch += 1;
                }
            }
        }
    }
    outcome(
        worst_gap <= L1_IDENTITY_TOL && witness_mismatch == 0,
        format!("200 instances, max |l1 - 2 max_mu| = {worst_gap:.2e}, mu* mismatches {witness_mismatch}"),
    )
}

fn c4_lq_interpolation() -> Outcome {
    let (l, m) = (1.0, 3usize);
    let inst = instances::general_example(l, m, EXAMPLE_STEP);
    let pou = pou_of(&inst, 1.0);
    let s = worst_partial_sum_lipschitz(&pou, &inst.space).constant;
    let s_inf = per_function_lipschitz(&pou, &inst.space).constant;
    let mut pass = true;
    let mut parts = Vec::new();
    for q in [1.0, 2.0, 4.0, f64::INFINITY] {
        let v = vector_lipschitz(&pou, &inst.space, q).unwrap().constant;
        let bound = interpolated_vector_bound(s, s_inf, q);
        pass &= v <= bound + BOUND_SLACK;
        if q == 1.0 {
            pass &= v >= SHARPNESS * 2.0 * (m as f64 - 1.0) / l;
        }
        parts.push(format!("q={q}: {v:.5}<={bound:.5}"));
    }
    outcome(pass, parts.join(", "))
}

fn c5_cp() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for p in [1.0, 1.5, 2.0, 3.0, 10.0] {
        let c = compute_cp(p).unwrap();
        let oracle = common::cp_grid_oracle(p, CP_GRID_POINTS);
        let residual = if p == 1.0 { 0.0 } else { critical_residual(p, c.maximizer) };
        pass &= (c.value - oracle).abs() <= CP_ORACLE_TOL
            && c.value >= 1.0
            && c.value < 2.0
            && residual.abs() <= CP_RESIDUAL_TOL;
        parts.push(format!("C_{p} = {:.10}", c.value));
    }
    pass &= compute_cp(1.0).unwrap().value == 1.0;
    let c2 = compute_cp(2.0).unwrap().value;
    pass &= (c2 - (1.0 + 2f64.sqrt()) / 2.0).abs() <= CP_CLOSED_FORM_TOL;
    outcome(pass, parts.join(", "))
}

/// Exact rho-multiplicity through the maximal cliques of the graph
/// `d(x, y) <= rho` (Bron-Kerbosch with pivoting). Members met is monotone in
/// the set, so maximal cliques suffice.
fn rho_multiplicity_by_cliques(space: &MetricSpace, family: &[Vec<usize>], rho: f64) -> usize {
    let n = space.len();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && space.dist(i, j) <= rho).collect())
        .collect();
    let hits = |clique: &[usize]| family.iter().filter(|m| m.iter().any(|x| clique.contains(x))).count();
    fn bk(
        adj: &[Vec<bool>],
        r: &mut Vec<usize>,
        p: Vec<usize>,
        x: Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if p.is_empty() && x.is_empty() {
            visit(r);
            return;
        }
        let pivot = *p.iter().chain(&x).max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count()).unwrap();
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
        let (mut p, mut x) = (p, x);
        for v in candidates {
            r.push(v);
            let np = p.iter().copied().filter(|&u| adj[v][u]).collect();
            let nx = x.iter().copied().filter(|&u| adj[v][u]).collect();
            bk(adj, r, np, nx, visit);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
    let mut best = 0;
    let mut visit = |c: &[usize]| best = best.max(hits(c));
    bk(&adj, &mut Vec::new(), (0..n).collect(), Vec::new(), &mut visit);
    best
}

fn c6_shrinking() -> Outcome {
    let mut violations = 0;
    let mut finite = 0;
    for seed in 0..100u64 {
        let mut rng = common::rng(1_000 + seed);
        use rand::Rng;
        let space = common::random_space(&mut rng, 30);
        let k = rng.gen_range(2..=6);
        let cover = common::random_cover(&mut rng, 30, k, 0.45);
        let l = optimal_lebesgue(&space, &cover).unwrap();
        let r = shrink_cover(&space, &cover).unwrap();
        let measured = r.measure(&space).unwrap();
        if measured.lebesgue < l / 3.0 {
            violations += 1;
        }
        if l.is_finite() {
            finite += 1;
            let rho = l / 3.0;
            let exact = rho_multiplicity_by_cliques(&space, r.members(), rho);
            let reported = rho_multiplicity(&space, r.members(), rho).value;
            if exact > cover.multiplicity() || reported > exact {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!("100 covers of 30-point spaces ({finite} with finite L), {violations} violations"),
    )
}

fn check_decomposition(space: &MetricSpace, cover: &Cover, brute: bool) -> Result<(), String> {
    let pou = build_partition(space, cover, 1.0).unwrap();
    let params = default_params(cover.multiplicity()).unwrap();
    let d = disjoint_decomposition(space, &pou, &params).map_err(|e| e.to_string())?;
    let n = space.len();
    let mut covered = vec![false; n];
    for f in &d.families {
        for b in &f.sets {
            for &x in &b.points {
                covered[x] = true;
            }
            if !(0..cover.len()).any(|a| is_subset(&b.points, cover.member(a))) {
                return Err(format!("set {:?} escapes the cover", b.mu));
            }
        }
        if !(f.separation > 0.0) {
            return Err(format!("family {} not separated", f.k));
        }
    }
    if let Some(x) = covered.iter().position(|c| !c) {
        return Err(format!("point {x} uncovered"));
    }
    if brute {
        let k = cover.len();
        let mut expected = Vec::new();
        for mask in 1u32..(1 << k) {
            let mu: Vec<usize> = (0..k).filter(|a| mask & (1 << a) != 0).collect();
            let pts: Vec<usize> = (0..n).filter(|&x| in_b_set(pou.row(x), &mu, &params)).collect();
            if !pts.is_empty() {
                expected.push((mu, pts));
            }
        }
        expected.sort();
        let mut got: Vec<(Vec<usize>, Vec<usize>)> = d
            .families
            .iter()
            .flat_map(|f| f.sets.iter().map(|b| (b.mu_index.clone(), b.points.clone())))
            .collect();
        got.sort();
        if got != expected {
            return Err("recursion differs from brute force".into());
        }
    }
    Ok(())
}

fn c7_decomposition() -> Outcome {
    let mut errors = Vec::new();
    let inst = instances::integer_line(11, &[(0, 6), (4, 10)]);
    let pou = pou_of(&inst, 1.0);
    let d = disjoint_decomposition(&inst.space, &pou, &default_params(2).unwrap()).unwrap();
    let f1: Vec<Vec<usize>> = d.family(1).map(|f| f.sets.iter().map(|b| b.points.clone()).collect()).unwrap_or_default();
    let f2: Vec<Vec<usize>> = d.family(2).map(|f| f.sets.iter().map(|b| b.points.clone()).collect()).unwrap_or_default();
    if f1 != [vec![0, 1, 2, 3], vec![7, 8, 9, 10]] || f2 != [vec![4, 5, 6]] || d.family(1).unwrap().separation != 4.0 {
        errors.push("fixture mismatch".to_string());
    }
    if let Err(e) = check_decomposition(&inst.space, &inst.cover, true) {
        errors.push(format!("fixture: {e}"));
    }
    let mut brute_checked = 0;
    for seed in 0..50u64 {
        let mut rng = common::rng(2_000 + seed);
        use rand::Rng;
        let n = rng.gen_range(5..=30);
        let space = common::random_space(&mut rng, n);
        let k = rng.gen_range(2..=6);
        let cover = common::ball_cover(&mut rng, &space, k, 4);
        let brute = cover.len() <= 4;
        brute_checked += brute as usize;
        if let Err(e) = check_decomposition(&space, &cover, brute) {
            errors.push(format!("seed {seed}: {e}"));
        }
    }
    outcome(
        errors.is_empty(),
        if errors.is_empty() {
            format!("fixture + 50 random covers ({brute_checked} brute-forced)")
        } else {
            errors.join("; ")
        },
    )
}

fn c8_kuhn() -> Outcome {
    let start = Instant::now();
    let l = 1.0;
    let inst = instances::strip_cloud(41, 4.0, 1.0, 3.0);
    let r = match euclidean_refine(&inst.space, &inst.cover, l) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let m = r.refinement.measure(&inst.space).unwrap();
    let n = 2.0f64;
    let lebesgue_floor = l / ((n + 1.0) * (8.0 * n).sqrt());
    let lip_bound = (8.0 * n).sqrt() / l;
    let worst_lip = (0..r.pou.n_members())
        .map(|a| empirical_lipschitz(&r.pou.column(a), &inst.space).unwrap().constant)
        .fold(0.0, f64::max);
    let heights_ok = (1..=6).all(|d| {
        KuhnGrid::new(d, l / 2.0).unwrap().simplex_geometry().min_height >= l / (8.0 * d as f64).sqrt()
    });
    let pass = m.multiplicity <= 3
        && m.lebesgue >= lebesgue_floor
        && worst_lip <= lip_bound + BOUND_SLACK
        && heights_ok
        && start.elapsed() < KUHN_BUDGET;
    outcome(
        pass,
        format!(
            "multiplicity {}, Lebesgue {:.4} >= {:.4}, max Lipschitz {:.4} <= {lip_bound}, heights ok: {heights_ok}",
            m.multiplicity, m.lebesgue, lebesgue_floor, worst_lip
        ),
    )
}

fn c9_roots() -> Outcome {
    let l = 1.0;
    let mut violations = 0;
    let mut worst_ratio = 0.0f64;
    let mut cases = 0;
    let roots_bound = |m: usize, p: f64, amp: bool| {
        let b = 2f64.powf((p - 1.0) / p) * (2.0 * m as f64 - 1.0).powf(1.0 / p) / l;
        if amp {
            b / 2f64.powf(1.0 / p)
        } else {
            b
        }
    };
    for p in [1.0, 2.0, 3.0] {
        let inst = instances::general_example(l, 3, EXAMPLE_STEP);
        let pou = pou_of(&inst, p);
        let c = rooted_partial_sum_lipschitz(&pou, &inst.space).constant;
        let b = roots_bound(3, p, false);
        worst_ratio = worst_ratio.max(c / b);
        violations += (c > b + BOUND_SLACK) as usize;
        cases += 1;
        for m in [2usize, 3, 5] {
            let inst = instances::midpoint_example(l, m, EXAMPLE_STEP);
            let pou = pou_of(&inst, p);
            let c = rooted_partial_sum_lipschitz(&pou, &inst.space).constant;
            for amp in [false, true] {
                let b = roots_bound(m, p, amp);
                worst_ratio = worst_ratio.max(c / b);
                violations += (c > b + BOUND_SLACK) as usize;
                cases += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!("{cases} cases, {violations} violations, max empirical/bound {worst_ratio:.4}"),
    )
}

fn c10_top_two() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for h in [0.1, 0.01] {
        let pts = common::grid(0.0, 2.0, h);
        let space = MetricSpace::line(&pts).unwrap();
        for (a, b) in [(1.2, 0.8), (1.5, 0.5), (1.05, 0.95), (1.9, 0.3)] {
            let tol = 1e-9;
            let left: Vec<usize> = (0..pts.len()).filter(|&i| pts[i] < a - tol).collect();
            let right: Vec<usize> = (0..pts.len()).filter(|&i| pts[i] > b + tol).collect();
            let cover = Cover::from_sets(&space, vec![left, right]).unwrap();
            let r = top_two_bound_check(&space, &cover).unwrap();
            // Independent recomputation of min(delta_(1) + delta_(2)).
            let prof = distance_profile(&space, &cover).unwrap();
            let min_sum = (0..space.len())
                .map(|x| prof.get(x, 0) + prof.get(x, 1))
                .fold(f64::INFINITY, f64::min);
            let ok = r.first_dominates
                && (r.min_top_two_sum - min_sum).abs() < 1e-12
                && min_sum >= 2.0 * r.lebesgue - 2.0 * h - 1e-12;
            pass &= ok;
            if (a, b) == (1.2, 0.8) {
                parts.push(format!("h={h}: min sum {min_sum:.3} vs 2L_*-2h {:.3}", 2.0 * r.lebesgue - 2.0 * h));
            }
        }
    }
    outcome(pass, parts.join(", "))
}
