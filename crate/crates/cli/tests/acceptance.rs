//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines show up in plain `cargo test` output.

#[path = "common/quad.rs"]
#[allow(dead_code)]
mod quad;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use jpdprof::enumeration::{log_probs, profile_from_log_probs};
use jpdprof::fit::contribution_cdf;
use jpdprof::sum::CompensatedSum;
use jpdprof::{
    binary_log_moments, corpus, enumerate_profile, generate, liapounov_ratio, mass_threshold,
    parse_bif, sample_summary, search_top_states, skewness, theoretical_normal, top_k_exact,
    verify_against_enumeration, EnumOptions, Exec, Family, GenSpec, HistogramSpec, Network,
    NormalModel, SampleOptions, SearchOptions, StopRule,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS_SEED: u64 = 0x5eed_0001;
const CORPUS_SIZE: usize = 24;

struct Report {
    lines: Vec<(String, bool)>,
}

impl Report {
    fn record(&mut self, id: &str, pass: bool, detail: String) {
        let tag = if pass { "PASS" } else { "FAIL" };
        let line = format!("[{tag}] {id}: {detail}");
        println!("{line}");
        self.lines.push((line, pass));
    }

    fn skip(&mut self, id: &str, detail: &str) {
        println!("[SKIP] {id}: {detail}");
    }
}

fn identical(n: usize, probs: &[f64]) -> Network {
    generate(&GenSpec {
        family: Family::Identical {
            probs: probs.to_vec(),
        },
        n,
        k: probs.len(),
        max_in_degree: 0,
        seed: 1,
    })
    .unwrap()
}

fn mean_var(lnp: &[f64]) -> (f64, f64) {
    let n = lnp.len() as f64;
    let mean = lnp.iter().copied().collect::<CompensatedSum>().value() / n;
    let var = lnp
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .collect::<CompensatedSum>()
        .value()
        / n;
    (mean, var)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn c1_conservation(r: &mut Report, nets: &[(GenSpec, Network)]) {
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    let mut states = 0u64;
    let mut failed = Vec::new();
    for (spec, net) in nets {
        let t0 = Instant::now();
        match enumerate_profile(net, &HistogramSpec::default(), &EnumOptions::default()) {
            Ok(p) => {
                let el = t0.elapsed();
                slowest = slowest.max(el);
                states = states.max(p.state_count);
                let err = (p.total_mass - 1.0).abs();
                worst = worst.max(err);
                if err > 1e-9 || el > Duration::from_secs(10) {
                    failed.push(spec.seed);
                }
            }
            Err(e) => failed.push({
                eprintln!("enumeration failed: {e}");
                spec.seed
            }),
        }
    }
    r.record(
        "1 conservation",
        failed.is_empty(),
        format!(
            "{} corpus networks (largest {states} states): max |mass-1| = {worst:.2e} (tol 1e-9), slowest {:.2} s (limit 10 s)",
            nets.len(),
            slowest.as_secs_f64()
        ),
    );
}

fn c2_moments(r: &mut Report) {
    // mpmath closed forms, rounded to f64
    const MU: f64 = -1.203_972_804_325_936;
    const SIGMA2: f64 = 1.206_948_960_812_582;
    const OMEGA3: f64 = 1.325_968_960_143_907_3;
    let m = binary_log_moments(0.1).unwrap();
    let closed = rel(m.mu, MU) < 1e-9 && rel(m.sigma2, SIGMA2) < 1e-9 && rel(m.omega3, OMEGA3) < 1e-9;
    let rounded = (m.mu + 1.203_973).abs() < 5e-7 && (m.sigma2 - 1.206_949).abs() < 5e-7;

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let q: f64 = rng.random_range(1e-6..1.0 - 1e-6);
        let m = binary_log_moments(q).unwrap();
        if m.sigma2 > 0.0 {
            worst = worst.max(rel(m.sigma2.powf(1.5), m.omega3));
        }
    }
    r.record(
        "2 closed-form moments",
        closed && rounded && worst < 1e-12,
        format!(
            "q=0.1 -> ({:.9}, {:.9}, {:.9}); max rel |sigma^3-omega^3| over 1000 q = {worst:.1e} (tol 1e-12); \
             quoted omega^3 1.326120 disagrees with sigma^3 = {:.6}; closed form used",
            m.mu,
            m.sigma2,
            m.omega3,
            m.sigma2.powf(1.5)
        ),
    );
}

fn c3_c4_identities(r: &mut Report, nets: &[(GenSpec, Network)]) {
    let mut worst_mean = 0.0f64;
    let mut worst_var = 0.0f64;
    let mut with_parents = 0;
    let mut permutation = 0;
    let mut failures = 0;
    let mut extra = vec![
        identical(10, &[0.1, 0.9]),
        identical(10, &[0.3, 0.7]),
        identical(8, &[0.05, 0.15, 0.8]),
    ];
    extra.push(
        generate(&GenSpec {
            family: Family::Identical {
                probs: vec![0.2, 0.5, 0.3],
            },
            n: 9,
            k: 3,
            max_in_degree: 3,
            seed: 11,
        })
        .unwrap(),
    );
    let all = nets
        .iter()
        .map(|(s, n)| (matches!(s.family, Family::Identical { .. }), n))
        .chain(extra.iter().map(|n| (true, n)));
    for (is_perm, net) in all {
        let lnp = log_probs(net, &EnumOptions::default()).unwrap();
        let (mean, var) = mean_var(&lnp);
        let Ok(nm) = theoretical_normal(net) else {
            failures += 1;
            continue;
        };
        if net.variables().iter().any(|v| !v.parents().is_empty()) {
            with_parents += 1;
        }
        worst_mean = worst_mean.max((nm.xi - mean).abs());
        if is_perm {
            permutation += 1;
            worst_var = worst_var.max((nm.phi2 - var).abs());
        }
    }
    r.record(
        "3 exact-mean identity",
        failures == 0 && worst_mean <= 1e-9,
        format!(
            "max |xi - mean ln p| = {worst_mean:.2e} (tol 1e-9) over {} networks, {with_parents} with parents{}",
            nets.len() + extra.len(),
            if failures > 0 { format!(", {failures} without a model") } else { String::new() }
        ),
    );
    r.record(
        "4 variance identity",
        failures == 0 && worst_var <= 1e-9,
        format!("max |phi2 - var ln p| = {worst_var:.2e} (tol 1e-9) over {permutation} permutation-column networks"),
    );
}

fn c5_skewness(r: &mut Report) {
    let nm = theoretical_normal(&identical(10, &[0.1, 0.9])).unwrap();
    let g = skewness(&nm).unwrap();
    r.record(
        "5 skewness",
        (6.9e7..=7.7e7).contains(&g),
        format!("gamma = {g:.6e} (band [6.9e7, 7.7e7])"),
    );
}

fn c6_liapounov(r: &mut Report) {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for &q in &[0.1, 0.3, 0.02] {
        for &n in &[1usize, 10, 100, 10_000] {
            let net = identical(n, &[q, 1.0 - q]);
            let moments = jpdprof::moments::network_log_moments(&net).unwrap();
            let ratio = liapounov_ratio(&moments).unwrap().ratio;
            let err = rel(ratio, 1.0 / (n as f64).sqrt());
            worst = worst.max(err);
            if q == 0.1 {
                parts.push(format!("n={n}: {ratio:.6e}"));
            }
        }
    }
    r.record(
        "6 Liapounov identity",
        worst <= 1e-12,
        format!("{}; max rel error {worst:.1e} (tol 1e-12)", parts.join(", ")),
    );
}

fn c7_coverage(r: &mut Report) {
    // binomial sums: 0.9^10, + 10 * 0.9^9 * 0.1, + 45 * 0.9^8 * 0.01 (exact decimals)
    let oracle = [(1u64, 0.348_678_440_1), (11, 0.736_098_929_1), (56, 0.929_809_173_6)];
    let net = identical(10, &[0.1, 0.9]);
    let profile = enumerate_profile(&net, &HistogramSpec::default(), &EnumOptions::default()).unwrap();
    let search = search_top_states(&net, StopRule::MaxStates(56), &SearchOptions::default()).unwrap();
    let mut acc = CompensatedSum::new();
    let mut searched = Vec::new();
    for s in &search.states {
        acc.add(s.prob);
        searched.push(acc.value());
    }
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, want) in oracle {
        let e = profile.coverage_at_rank(k).unwrap();
        let s = searched[k as usize - 1];
        ok &= (e - want).abs() <= 1e-9 && (s - want).abs() <= 1e-9;
        parts.push(format!("top-{k}: enum {e:.9} search {s:.9}"));
    }
    r.record("7 coverage closed forms", ok, format!("{} (tol 1e-9)", parts.join("; ")));
}

/// `ln t` from the raw contribution density `exp(x) * N(x; xi, phi2)` on
/// `(-inf, 0]`, by quadrature and bisection.
fn quadrature_threshold(xi: f64, phi2: f64, f: f64) -> f64 {
    let sd = phi2.sqrt();
    let peak = (xi + phi2).min(0.0);
    let log_g = |x: f64| x - (x - xi) * (x - xi) / (2.0 * phi2);
    let top = log_g(peak);
    let g = move |x: f64| (log_g(x) - top).exp();
    let lo = peak - 40.0 * sd;
    let total = quad::integrate(g, lo, 0.0, 1e-15);
    let mass = |t: f64| quad::integrate(g, lo, t, 1e-15) / total;
    let (mut a, mut b) = (lo, 0.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if mass(m) < f {
            a = m;
        } else {
            b = m;
        }
        if b - a < 1e-12 {
            break;
        }
    }
    0.5 * (a + b)
}

fn c8_threshold(r: &mut Report) {
    let xis = [-40.0, -20.0, -12.0, -5.0, -1.0];
    let phi2s = [0.5, 2.0, 6.0, 12.0, 30.0];
    let fs = [0.001, 0.01, 0.1, 0.5, 0.9];
    let mut worst_q = 0.0f64;
    let mut worst_rt = 0.0f64;
    for &xi in &xis {
        for &phi2 in &phi2s {
            let nm = NormalModel::new(xi, phi2);
            for &f in &fs {
                let t = mass_threshold(&nm, f).unwrap();
                worst_q = worst_q.max((t.ln_t - quadrature_threshold(xi, phi2, f)).abs());
                worst_rt = worst_rt.max((contribution_cdf(&nm, t.ln_t).unwrap() - f).abs());
            }
        }
    }
    r.record(
        "8 threshold consistency",
        worst_q <= 1e-6 && worst_rt <= 1e-8,
        format!(
            "125 grid points: max |ln t - quadrature| = {worst_q:.2e} (tol 1e-6), max |CDF(ln t) - f| = {worst_rt:.2e} (tol 1e-8)"
        ),
    );
}

fn c9_search(r: &mut Report, nets: &[(GenSpec, Network)]) {
    let rules = [
        StopRule::MaxStates(1),
        StopRule::MaxStates(11),
        StopRule::MaxStates(100),
        StopRule::ResidualMass(0.5),
        StopRule::ResidualMass(0.1),
        StopRule::ResidualMass(0.01),
        StopRule::ProbabilityFloor(0.1),
        StopRule::ProbabilityFloor(0.01),
        StopRule::ProbabilityFloor(0.001),
    ];
    let mut runs = 0;
    let mut failures = Vec::new();
    for (spec, net) in nets {
        for rule in rules {
            runs += 1;
            let v = verify_against_enumeration(net, rule, &SearchOptions::default(), &EnumOptions::default());
            if !v.passed {
                failures.push(format!("seed {} {rule:?}: {}", spec.seed, v.failures.join("; ")));
            }
        }
    }
    // search ordering uses cumulative mass directly, so check it against
    // top_k_exact for one case with mixed ties as well
    let net = identical(12, &[0.25, 0.25, 0.5]);
    let exact = top_k_exact(&net, 300, &EnumOptions::default()).unwrap();
    let found = search_top_states(&net, StopRule::MaxStates(300), &SearchOptions::default()).unwrap();
    if exact.iter().map(|s| s.index).ne(found.states.iter().map(|s| s.index)) {
        failures.push("tied 3-outcome network: order differs".into());
    }
    for f in failures.iter().take(5) {
        eprintln!("  {f}");
    }
    r.record(
        "9 search/enumeration equivalence",
        failures.is_empty(),
        format!("{runs} (network, rule) pairs plus a tie case, {} failure(s)", failures.len()),
    );
}

fn c10_sampling(r: &mut Report) {
    let net = identical(10, &[0.1, 0.9]);
    let nm = theoretical_normal(&net).unwrap();
    let m = 100_000;
    let s = sample_summary(
        &net,
        m,
        &HistogramSpec::default(),
        Some(&nm),
        &SampleOptions {
            seed: 20_240_601,
            exec: Exec::default(),
        },
    )
    .unwrap();
    let band = 3.0 * (nm.phi2 / m as f64).sqrt();
    let ks = s.ks.unwrap();
    r.record(
        "10 sampling soundness",
        (s.mean - nm.xi).abs() <= band && ks < 0.02,
        format!(
            "mean {:.5} vs xi {:.5} (band {band:.4}); KS {ks:.4} (< 0.02, lattice-grouped; ungrouped {:.4})",
            s.mean,
            nm.xi,
            s.ks_raw.unwrap()
        ),
    );
}

fn run_cli(threads: usize, out: &Path, args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_jpdprof"))
        .arg("--threads")
        .arg(threads.to_string())
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn artifacts(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().is_some_and(|n| n != "manifest.json"))
        .map(|p| (p.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&p).unwrap()))
        .collect()
}

fn c11_determinism(r: &mut Report) {
    let tmp = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 2] = [
        &["analyze", "--generate", "dirichlet:n=18,k=2,alpha=0.5,indeg=2,seed=3"],
        &[
            "analyze",
            "--generate",
            "identical:n=40,k=2,p=0.2,0.8",
            "--sample",
            "200000",
            "--seed",
            "9",
        ],
    ];
    let mut ok = true;
    let mut files = 0;
    for (i, args) in runs.iter().enumerate() {
        let a = tmp.path().join(format!("{i}-t1"));
        let b = tmp.path().join(format!("{i}-t8"));
        let ran = run_cli(1, &a, args);
        // the second analyze exits 0 via the sampling fallback
        let ran = ran & run_cli(8, &b, args);
        let (fa, fb) = (artifacts(&a), artifacts(&b));
        files += fa.len();
        ok &= ran && !fa.is_empty() && fa == fb;
    }
    r.record(
        "11 determinism",
        ok,
        format!("analyze at --threads 1 vs 8: {files} artifact files compared byte for byte (manifest excluded)"),
    );
}

fn c12_alarm(r: &mut Report) {
    let (Ok(path), Ok(subset)) = (std::env::var("JPDPROF_ALARM"), std::env::var("JPDPROF_ALARM_SUBSET")) else {
        r.skip(
            "12 ALARM reproduction",
            "set JPDPROF_ALARM=<file.bif> and JPDPROF_ALARM_SUBSET=<13 comma-separated names> to run",
        );
        return;
    };
    let text = std::fs::read_to_string(&path).unwrap();
    let net = parse_bif(&text).unwrap();
    let names: Vec<&str> = subset.split(',').map(str::trim).collect();
    let sub = net.subnetwork(&names).unwrap();
    let lnp = log_probs(&sub, &EnumOptions::default()).unwrap();
    let p = profile_from_log_probs(&lnp, &HistogramSpec::default(), Exec::default()).unwrap();
    let top = |k| p.coverage_at_rank(k).unwrap();
    let (t1, t11, t49) = (top(1), top(11), top(49));
    r.record(
        "12 ALARM reproduction",
        (t1 - 0.52).abs() <= 0.05
            && (t11 - 0.75).abs() <= 0.05
            && (t49 - 0.91).abs() <= 0.05
            && p.spread_orders >= 20.0,
        format!(
            "{} variables, {} states: top-1 {t1:.3}, top-11 {t11:.3}, top-49 {t49:.3}, spread {:.1} orders",
            sub.len(),
            p.state_count,
            p.spread_orders
        ),
    );
}

fn main() {
    let mut r = Report { lines: Vec::new() };
    let nets = corpus(CORPUS_SEED, CORPUS_SIZE);
    c1_conservation(&mut r, &nets);
    c2_moments(&mut r);
    c3_c4_identities(&mut r, &nets);
    c5_skewness(&mut r);
    c6_liapounov(&mut r);
    c7_coverage(&mut r);
    c8_threshold(&mut r);
    c9_search(&mut r, &nets);
    c10_sampling(&mut r);
    c11_determinism(&mut r);
    c12_alarm(&mut r);
    let failed = r.lines.iter().filter(|(_, p)| !p).count();
    println!("acceptance: {} passed, {failed} failed", r.lines.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
