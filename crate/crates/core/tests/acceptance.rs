//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` still run and still print FAIL;
//! they only stop failing the process while they keep failing. Any other
//! failure, or an unexpected pass of a listed criterion, exits nonzero.

use std::panic::{AssertUnwindSafe, catch_unwind};
use std::time::{Duration, Instant};

use gapdex::cli::{power_check, run_with_env};
use gapdex::montecarlo::lemmas::{
    HALF_LIMIT_TOLERANCE, verify_half_limit, verify_inequalities, verify_lemma31, verify_uniform_ratio,
    verify_uniform_ratio_with_offset,
};
use gapdex::montecarlo::{default_grid, substream};
use gapdex::{Sample, SimConfig, cluster_split, decompose, simulate_cluster_statistic, truncated_moments};
use serde::Deserialize;

/// Criterion 7 demands |skewness(10) − 2| < 0.05; the exact value is
/// 1.946031, so that clause cannot hold.
const KNOWN_UNATTAINABLE: &[u32] = &[7];

type Criterion = (u32, &'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn c1_decomposition_identity() -> Verdict {
    let start = Instant::now();
    let mut worst_var = 0.0_f64;
    let mut worst_std = 0.0_f64;
    for k in 0..1000 {
        let mut s = substream(101, k);
        let n = 2 + (s.next_u64() % 199) as usize;
        let scale = 10f64.powf(6.0 * s.next_open01() - 3.0);
        let shift = 100.0 * (2.0 * s.next_open01() - 1.0);
        let rounded = k % 5 == 0;
        let values: Vec<f64> = loop {
            let v: Vec<f64> = (0..n)
                .map(|_| {
                    let z = s.next_std_normal();
                    let z = if rounded { z.round() } else { z };
                    shift + scale * z
                })
                .collect();
            if v.iter().any(|&x| x != v[0]) {
                break v;
            }
        };
        let sample = Sample::new(&values).unwrap();
        let d = decompose(&sample).unwrap();
        let raw: f64 = d.components.iter().map(|c| c.raw).sum();
        let standardized: f64 = d.components.iter().map(|c| c.standardized).sum();
        let var = sample.variance();
        worst_var = worst_var.max((raw - var).abs() / var);
        worst_std = worst_std.max((standardized - 1.0).abs());
    }
    let elapsed = start.elapsed();
    verdict(
        worst_var <= 1e-10 && worst_std <= 1e-10 && within(elapsed, 5),
        format!("max rel err {worst_var:.2e}, max |sum std - 1| {worst_std:.2e}, {elapsed:.2?}"),
    )
}

fn c2_hand_splits() -> Verdict {
    let a = cluster_split(&Sample::new(&[0.0, 1.0, 2.0, 10.0]).unwrap()).unwrap();
    let b = cluster_split(&Sample::new(&[0.0, 3.0, 4.0, 7.0]).unwrap()).unwrap();
    let ok = a.j == 3 && (a.statistic - 13.5 / 15.6875).abs() <= 1e-12 && b.j == 1 && (b.statistic - 0.42).abs() <= 1e-12;
    verdict(
        ok,
        format!("{{0,1,2,10}}: j={} I={}; {{0,3,4,7}}: j={} I={}", a.j, a.statistic, b.j, b.statistic),
    )
}

#[derive(Deserialize)]
struct GoldenRun {
    n: usize,
    reps: usize,
    seed: u64,
    ks_distance: f64,
}

#[derive(Deserialize)]
struct Golden {
    runs: Vec<GoldenRun>,
}

fn golden() -> Golden {
    serde_json::from_str(include_str!("fixtures/golden_ks.json")).unwrap()
}

fn c3_gumbel_convergence() -> Verdict {
    let start = Instant::now();
    let reps = 20_000;
    let seed = 1;
    let golden = golden();
    let mut ks = Vec::new();
    let mut golden_ok = true;
    for n in [100, 500, 2000, 5000] {
        let cfg = SimConfig::new(n, reps, seed, default_grid()).unwrap();
        let d = simulate_cluster_statistic(&cfg).unwrap().ks_distance;
        let frozen = golden
            .runs
            .iter()
            .find(|g| g.n == n && g.reps == reps && g.seed == seed)
            .expect("golden entry")
            .ks_distance;
        golden_ok &= (d - frozen).abs() <= 2.0 / (reps as f64).sqrt();
        ks.push(d);
    }
    let threshold = golden.runs.iter().find(|g| g.n == 5000).unwrap().ks_distance + 2.0 / (reps as f64).sqrt();
    let decreasing = ks.windows(2).all(|w| w[1] < w[0]);
    let elapsed = start.elapsed();
    verdict(
        decreasing && ks[3] < threshold && golden_ok && within(elapsed, 600),
        format!(
            "KS {:.4} > {:.4} > {:.4} > {:.4}; n=5000 below {threshold:.4}; {elapsed:.2?}",
            ks[0], ks[1], ks[2], ks[3]
        ),
    )
}

fn c4_half_limit() -> Verdict {
    let start = Instant::now();
    let r = verify_half_limit(2000, 20_000, 1, &[-1.0, 0.0, 1.0, 2.0], HALF_LIMIT_TOLERANCE).unwrap();
    let elapsed = start.elapsed();
    let worst = r.cases.iter().map(|c| (c.observed - c.reference).abs()).fold(0.0, f64::max);
    verdict(
        r.overall_pass && within(elapsed, 300),
        format!("max |F_n - F| = {worst:.4} (tolerance 0.03), {elapsed:.2?}"),
    )
}

fn c5_lemma31() -> Verdict {
    let start = Instant::now();
    let mut cells = 0;
    let mut failing = Vec::new();
    for eps in [0.5, 1.0, 2.0] {
        let r = verify_lemma31(1000, &[501, 900, 990, 999], eps, 10_000, 1).unwrap();
        for c in &r.cases {
            cells += 1;
            if !c.pass {
                failing.push(format!("(i={}, eps={eps})", c.parameters["i"]));
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        cells == 12 && failing.is_empty() && within(elapsed, 180),
        format!("{}/{cells} cells within bound + 3SE {failing:?}, {elapsed:.2?}", cells - failing.len()),
    )
}

fn c6_inequalities() -> Verdict {
    let start = Instant::now();
    let suites = gapdex::bounds::inequality_suite();
    let report = verify_inequalities();
    let elapsed = start.elapsed();
    let min_margin = suites.iter().map(|s| s.worst.margin()).fold(f64::INFINITY, f64::min);
    let points: usize = suites.iter().map(|s| s.points).sum();
    verdict(
        report.overall_pass && suites.iter().all(|s| s.failures == 0) && min_margin > 0.0 && within(elapsed, 1),
        format!(
            "{} suites, {points} points, smallest margin {min_margin:.3e}, {elapsed:.2?}",
            suites.len()
        ),
    )
}

/// Composite Simpson approximation of `∫_0^L f`.
fn simpson(f: impl Fn(f64) -> f64, upper: f64, intervals: usize) -> f64 {
    let h = upper / intervals as f64;
    let mut acc = f(0.0) + f(upper);
    for k in 1..intervals {
        acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// Mean and variance of `Z | Z > z` by quadrature of the shifted density
/// `exp(−zt − t²/2)`, independent of any error-function routine.
fn quadrature_moments(z: f64) -> (f64, f64) {
    let w = |t: f64| (-z * t - 0.5 * t * t).exp();
    let upper = 40.0;
    let n = 200_000;
    let m0 = simpson(w, upper, n);
    let m1 = simpson(|t| t * w(t), upper, n) / m0;
    let m2 = simpson(|t| t * t * w(t), upper, n) / m0;
    (z + m1, m2 - m1 * m1)
}

fn c7_truncated_facts() -> Verdict {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut var_below_one = true;
    for k in 0..=40 {
        let z = -2.0 + 0.25 * k as f64;
        let m = truncated_moments(z).unwrap();
        let (mean, var) = quadrature_moments(z);
        worst = worst.max((m.mean - mean).abs()).max((m.variance - var).abs());
        if z > 0.0 {
            var_below_one &= m.variance < 1.0;
        }
    }
    let skew10 = truncated_moments(10.0).unwrap().skewness;
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-8 && var_below_one && (skew10 - 2.0).abs() < 0.05 && within(elapsed, 5),
        format!(
            "max |moment - quadrature| {worst:.2e}; variance < 1 on z > 0: {var_below_one}; \
             skewness(10) = {skew10:.6}, |skew - 2| = {:.4} vs 0.05; {elapsed:.2?}",
            (skew10 - 2.0).abs()
        ),
    )
}

fn c8_uniform_ratio() -> Verdict {
    let start = Instant::now();
    let good = verify_uniform_ratio(50, 200, 7).unwrap();
    let control = verify_uniform_ratio_with_offset(50, 200, 7, 1).unwrap();
    let elapsed = start.elapsed();
    let ks = |r: &gapdex::montecarlo::lemmas::LemmaCheckReport| {
        r.cases.iter().find(|c| c.label.contains("ks")).map_or(f64::NAN, |c| c.observed)
    };
    verdict(
        good.overall_pass && !control.overall_pass && within(elapsed, 10),
        format!(
            "KS {:.4} (pass), mis-specified exponent KS {:.4} (fails), {elapsed:.2?}",
            ks(&good),
            ks(&control)
        ),
    )
}

fn c9_determinism() -> Verdict {
    let start = Instant::now();
    let commands: Vec<Vec<&str>> = vec![
        vec!["simulate", "--n", "300", "--reps", "2000", "--seed", "3"],
        vec!["simulate", "--n", "300", "--reps", "2000", "--seed", "3", "--half", "--grid", "-1:2:0.5"],
        vec!["simulate", "--n", "100", "--reps", "500", "--format", "csv"],
        vec!["verify", "--check", "inequalities"],
        vec!["verify", "--check", "truncated"],
        vec!["verify", "--check", "lemma31", "--n", "400", "--reps", "1000", "--seed", "5"],
        vec!["verify", "--check", "half-limit", "--n", "300", "--reps", "1000"],
        vec!["verify", "--check", "uniform-ratio", "--reps", "100", "--seed", "9"],
        vec!["verify", "--check", "scaling", "--n", "100,1000", "--reps", "200"],
        vec!["verify", "--check", "power", "--n", "200", "--reps", "50", "--format", "csv"],
    ];
    let mut mismatches = Vec::new();
    for cmd in &commands {
        let invoke = |threads: &str| {
            let mut args = vec!["gapdex"];
            args.extend(cmd);
            args.extend(["--threads", threads]);
            run_with_env(args, Some("17"))
        };
        let a = invoke("1");
        let b = invoke("1");
        let c = invoke("8");
        if a.stdout.is_empty() || a != b || a != c {
            mismatches.push(cmd.join(" "));
        }
    }
    let elapsed = start.elapsed();
    verdict(
        mismatches.is_empty() && within(elapsed, 60),
        format!(
            "{} commands x (1, 1, 8 workers), mismatches {mismatches:?}, {elapsed:.2?}",
            commands.len()
        ),
    )
}

fn c10_power() -> Verdict {
    let start = Instant::now();
    let r = power_check(500, 200, 1).unwrap();
    let elapsed = start.elapsed();
    verdict(
        r.overall_pass && within(elapsed, 120),
        format!(
            "mixture median p {:.3e}; null rejection rate at 5% = {:.3}; {elapsed:.2?}",
            r.cases[0].observed, r.cases[1].observed
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "decomposition identity", c1_decomposition_identity),
        (2, "hand-evaluated splits", c2_hand_splits),
        (3, "Gumbel convergence", c3_gumbel_convergence),
        (4, "half-sample limit", c4_half_limit),
        (5, "order-statistic spacing bound", c5_lemma31),
        (6, "analytic inequality suites", c6_inequalities),
        (7, "truncated-normal facts", c7_truncated_facts),
        (8, "uniform-ratio identity", c8_uniform_ratio),
        (9, "determinism", c9_determinism),
        (10, "power sanity", c10_power),
    ];
    let mut unexpected = 0;
    for (id, name, check) in criteria {
        let v = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| verdict(false, "panicked"));
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let tag = match (v.pass, known) {
            (true, false) => "",
            (false, true) => " [known unattainable]",
            (true, true) => " [unexpected pass: remove from KNOWN_UNATTAINABLE]",
            (false, false) => "",
        };
        println!(
            "{} criterion {id:>2} {name}: {}{tag}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        if v.pass == known {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criterion result(s) differ from expectation");
        std::process::exit(1);
    }
}
