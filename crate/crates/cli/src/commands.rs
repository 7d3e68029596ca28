use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{ArgGroup, Args};
use jpdprof::enumeration::{
    self, profile_from_log_probs, DEFAULT_BIN_WIDTH, DEFAULT_STATE_CAP,
};
use jpdprof::fit::{fit_mass_weighted, fit_uniform, RankEstimate};
use jpdprof::moments::network_log_moments;
use jpdprof::sampling::sample_log_probs;
use jpdprof::search::{SearchOptions, VerificationReport, DEFAULT_NODE_CAP};
use jpdprof::sum::CompensatedSum;
use jpdprof::{
    coverage_at_mass, epsilon_rank_estimate, liapounov_ratio, mass_threshold, sample_summary,
    search_top_states, theoretical_normal, verify_against_enumeration, write_native, EnumError,
    EnumOptions, Exec, HistogramSpec, LiapounovReport, MassProfile, Network, NormalModel,
    SampleOptions, SampleSummary, StopRule, ThresholdResult, ZeroPolicy,
};
use serde::Serialize;
use serde_json::json;

use crate::input::{self, parse_gen_spec, NetArgs, Source};
use crate::output::Artifacts;
use crate::CliError;

#[derive(Debug, Clone, Args, Serialize)]
pub struct HistArgs {
    /// Histogram bin width, in decades of p.
    #[arg(long, default_value_t = DEFAULT_BIN_WIDTH)]
    pub bin_width: f64,
    /// Fixed histogram range `LO:HI` in log10 p (default: fitted to the data).
    #[arg(long, value_name = "LO:HI", value_parser = parse_range, allow_hyphen_values = true)]
    pub range: Option<(f64, f64)>,
    /// Fail when the network has zero-probability states.
    #[arg(long)]
    pub reject_zero: bool,
}

impl HistArgs {
    fn spec(&self) -> Result<HistogramSpec, CliError> {
        let spec = HistogramSpec {
            bin_width: self.bin_width,
            range: self.range,
            zero_policy: if self.reject_zero {
                ZeroPolicy::Reject
            } else {
                ZeroPolicy::Count
            },
        };
        spec.validate().map_err(|e| CliError::input(e.to_string()))?;
        Ok(spec)
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("`{lo}` is not a number"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("`{hi}` is not a number"))?;
    Ok((lo, hi))
}

fn resolve_seed(seed: Option<u64>, art: &mut Artifacts) -> u64 {
    seed.unwrap_or_else(|| {
        let s = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_nanos() as u64);
        art.notice(format!("no --seed given; using {s}"));
        s
    })
}

fn params<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).unwrap_or(serde_json::Value::Null)
}

fn prepare(net: &NetArgs, out: &Path) -> Result<(input::Loaded, Artifacts), CliError> {
    let loaded = input::load(net)?;
    let art = Artifacts::create(out)?;
    Ok((loaded, art))
}

// ---------------------------------------------------------------- theory

#[derive(Serialize)]
struct MomentRow<'a> {
    variable: &'a str,
    outcomes: usize,
    columns: usize,
    mu: f64,
    sigma2: f64,
    omega3: f64,
}

#[derive(Serialize)]
struct TheoryReport {
    variables: usize,
    /// null when the count exceeds 2^64
    state_count: Option<u64>,
    log10_state_count: f64,
    model: NormalModel,
    sd: f64,
    /// Skewness of the lognormal law of p; null when it overflows.
    skewness: Option<f64>,
    contribution_mode: f64,
    /// `xi + phi2 >= 0`: the contribution curve is cut off at ln p = 0.
    contribution_peak_at_cutoff: bool,
    state_law_kept_mass: Option<f64>,
    contribution_law_kept_mass: Option<f64>,
}

#[derive(Serialize)]
struct CurveRow {
    ln_p: f64,
    log10_p: f64,
    state_density: f64,
    contribution_density: f64,
}

fn moment_rows(net: &Network, art: &mut Artifacts) -> Result<Option<LiapounovReport>, CliError> {
    let moments = match network_log_moments(net) {
        Ok(m) => m,
        Err(e) => {
            art.notice(format!("theoretical model skipped: {e}"));
            return Ok(None);
        }
    };
    let rows = net.variables().iter().zip(&moments).map(|(v, m)| MomentRow {
        variable: v.name(),
        outcomes: v.outcome_count(),
        columns: v.column_count(),
        mu: m.mu,
        sigma2: m.sigma2,
        omega3: m.omega3,
    });
    art.csv("moments.csv", rows)?;
    match liapounov_ratio(&moments) {
        Ok(report) => {
            art.json("liapounov.json", &report)?;
            Ok(Some(report))
        }
        Err(e) => {
            art.notice(format!("Liapounov ratio skipped: {e}"));
            Ok(None)
        }
    }
}

fn write_theory(
    net: &Network,
    art: &mut Artifacts,
    curve_points: usize,
) -> Result<Option<NormalModel>, CliError> {
    moment_rows(net, art)?;
    let Ok(nm) = theoretical_normal(net) else {
        return Ok(None);
    };
    let report = TheoryReport {
        variables: net.len(),
        state_count: net.state_count(),
        log10_state_count: net.ln_state_count() * std::f64::consts::LOG10_E,
        model: nm,
        sd: nm.sd(),
        skewness: nm.skewness().ok().filter(|s| s.is_finite()),
        contribution_mode: nm.contribution_mode(),
        contribution_peak_at_cutoff: nm.xi + nm.phi2 >= 0.0,
        state_law_kept_mass: nm.state_law().ok().map(|l| l.kept_mass()),
        contribution_law_kept_mass: nm.contribution_law().ok().map(|l| l.kept_mass()),
    };
    art.json("theory.json", &report)?;
    if nm.is_degenerate() {
        art.notice("all states are equally probable; no curves");
        return Ok(Some(nm));
    }
    let lo = nm.xi.min(nm.xi + nm.phi2) - 6.0 * nm.sd();
    let n = curve_points.max(2);
    let rows = (0..n).map(|i| {
        let ln_p = lo - lo * i as f64 / (n - 1) as f64;
        CurveRow {
            ln_p,
            log10_p: ln_p * std::f64::consts::LOG10_E,
            state_density: nm.density_log(ln_p).unwrap_or(f64::NAN),
            contribution_density: nm.contribution_log(ln_p).unwrap_or(f64::NAN),
        }
    });
    art.csv("curves.csv", rows)?;
    Ok(Some(nm))
}

// ------------------------------------------------------------- enumeration

#[derive(Serialize)]
struct FitReport {
    source: &'static str,
    /// Fit over states: the law of ln p for a uniformly chosen state.
    uniform: Option<NormalModel>,
    /// Fit weighted by p: the mass contribution curve.
    mass_weighted: Option<NormalModel>,
    theoretical: Option<NormalModel>,
}

#[derive(Serialize)]
struct MassTarget {
    f: f64,
    states: u64,
}

#[derive(Serialize)]
struct ProfileSummary {
    state_count: u64,
    positive_count: u64,
    zero_state_count: u64,
    total_mass: f64,
    max_prob: f64,
    min_positive_prob: f64,
    spread_orders: f64,
    top_mass: Vec<(u64, f64)>,
    states_for_mass: Vec<MassTarget>,
}

fn fit_report(source: &'static str, lnp: &[f64], theory: Option<NormalModel>) -> FitReport {
    FitReport {
        source,
        uniform: fit_uniform(lnp).ok(),
        mass_weighted: fit_mass_weighted(lnp).ok(),
        theoretical: theory,
    }
}

fn write_profile(
    profile: &MassProfile,
    lnp: &[f64],
    theory: Option<NormalModel>,
    art: &mut Artifacts,
) -> Result<(), CliError> {
    art.json("profile.json", profile)?;
    art.csv("histogram.csv", &profile.histogram.bins)?;
    art.csv("decades.csv", &profile.decades)?;
    art.csv("coverage.csv", &profile.coverage)?;
    art.json("fit.json", &fit_report("enumeration", lnp, theory))?;
    let summary = ProfileSummary {
        state_count: profile.state_count,
        positive_count: profile.positive_count,
        zero_state_count: profile.zero_state_count,
        total_mass: profile.total_mass,
        max_prob: profile.max_prob,
        min_positive_prob: profile.min_positive_prob,
        spread_orders: profile.spread_orders,
        top_mass: [1, 11, 49, 56, 100]
            .into_iter()
            .filter_map(|r| profile.coverage_at_rank(r).map(|m| (r, m)))
            .collect(),
        states_for_mass: [0.5, 0.75, 0.9, 0.99]
            .into_iter()
            .filter_map(|f| coverage_at_mass(profile, f).ok().map(|states| MassTarget { f, states }))
            .collect(),
    };
    art.json("summary.json", &summary)
}

fn print_profile(p: &MassProfile) {
    say!("states            {}", p.state_count);
    say!("positive states   {}", p.positive_count);
    say!("total mass        {}", p.total_mass);
    say!("max probability   {:.6e}", p.max_prob);
    say!("min probability   {:.6e}", p.min_positive_prob);
    say!("spread (decades)  {:.2}", p.spread_orders);
    for r in [1u64, 11, 49] {
        if let Some(m) = p.coverage_at_rank(r) {
            say!("top-{r:<3} mass     {m:.6}");
        }
    }
}

fn print_theory(nm: &NormalModel) {
    say!("xi                {:.6}", nm.xi);
    say!("phi2              {:.6}", nm.phi2);
    say!("contribution mode {:.6}", nm.contribution_mode());
}

fn write_sample(
    net: &Network,
    m: usize,
    seed: u64,
    spec: &HistogramSpec,
    reference: Option<&NormalModel>,
    art: &mut Artifacts,
) -> Result<SampleSummary, CliError> {
    let opts = SampleOptions {
        seed,
        exec: Exec::default(),
    };
    let s = sample_summary(net, m, spec, reference, &opts)
        .map_err(|e| CliError::input(e.to_string()))?;
    art.json("sample.json", &s)?;
    art.csv("sample_histogram.csv", &s.histogram.bins)?;
    Ok(s)
}

fn print_sample(s: &SampleSummary) {
    say!("draws             {}", s.m);
    say!("zero draws        {}", s.zero_count);
    say!("sample mean ln p  {:.6}", s.mean);
    say!("sample var ln p   {:.6}", s.variance);
    if let Some(ks) = s.ks {
        say!("KS (grouped)      {ks:.5}");
    }
}

// ----------------------------------------------------------------- analyze

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub net: NetArgs,
    #[command(flatten)]
    pub hist: HistArgs,
    /// Largest number of states enumerated exactly.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub cap: u64,
    /// Above the cap, sample this many states instead of failing.
    #[arg(long, value_name = "M")]
    pub sample: Option<usize>,
    /// Seed for --sample (default: from the clock, recorded in the manifest).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Points on the theoretical curves.
    #[arg(long, default_value_t = 401)]
    pub curve_points: usize,
}

pub fn analyze(a: &AnalyzeArgs, out: &Path) -> Result<(), CliError> {
    let spec = a.hist.spec()?;
    let (loaded, mut art) = prepare(&a.net, out)?;
    let net = &loaded.net;
    art.bytes("network.json", write_native(net).as_bytes())?;
    let theory = write_theory(net, &mut art, a.curve_points)?;
    if let Some(nm) = &theory {
        print_theory(nm);
    }

    let mut seed = None;
    let mut status = Ok(());
    let opts = EnumOptions {
        cap: a.cap,
        exec: Exec::default(),
    };
    match enumeration::log_probs(net, &opts) {
        Ok(lnp) => match profile_from_log_probs(&lnp, &spec, Exec::default()) {
            Ok(p) => {
                write_profile(&p, &lnp, theory, &mut art)?;
                print_profile(&p);
            }
            Err(e) => status = Err(CliError::input(e.to_string())),
        },
        Err(e @ EnumError::CapExceeded { .. }) => match a.sample {
            Some(m) => {
                art.notice(format!("{e}; sampling {m} states instead"));
                let s = resolve_seed(a.seed, &mut art);
                seed = Some(s);
                let summary = write_sample(net, m, s, &spec, theory.as_ref(), &mut art)?;
                print_sample(&summary);
            }
            None => {
                let msg = format!("{e}; enumeration skipped (use --cap or --sample)");
                art.notice(msg.clone());
                status = Err(CliError::cap(msg));
            }
        },
        Err(e) => status = Err(CliError::input(e.to_string())),
    }
    art.finish("analyze", params(a), Some(&loaded.source), json!({ "sample": seed }))?;
    status
}

// ------------------------------------------------------------------ sample

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub net: NetArgs,
    #[command(flatten)]
    pub hist: HistArgs,
    /// Number of uniformly drawn states.
    #[arg(short, long, default_value_t = 100_000)]
    pub m: usize,
    /// Default: from the clock, recorded in the manifest.
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn sample(a: &SampleArgs, out: &Path) -> Result<(), CliError> {
    let spec = a.hist.spec()?;
    let (loaded, mut art) = prepare(&a.net, out)?;
    let seed = resolve_seed(a.seed, &mut art);
    let theory = theoretical_normal(&loaded.net).ok();
    if theory.is_none() {
        art.notice("no theoretical model (zero CPT entries); KS uses the sample's own fit");
    }
    let s = write_sample(&loaded.net, a.m, seed, &spec, theory.as_ref(), &mut art)?;
    print_sample(&s);
    art.finish("sample", params(a), Some(&loaded.source), json!({ "sample": seed }))
}

// --------------------------------------------------------------------- fit

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    #[command(flatten)]
    pub net: NetArgs,
    /// Largest number of states enumerated exactly.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub cap: u64,
    /// Fit from this many sampled states instead of enumerating.
    #[arg(long, value_name = "M")]
    pub sample: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn fit(a: &FitArgs, out: &Path) -> Result<(), CliError> {
    let (loaded, mut art) = prepare(&a.net, out)?;
    let net = &loaded.net;
    let theory = theoretical_normal(net).ok();
    let mut seed = None;
    let mut status = Ok(());
    let opts = EnumOptions {
        cap: a.cap,
        exec: Exec::default(),
    };
    let report = match a.sample {
        Some(m) => {
            if m < 2 {
                return Err(CliError::input("--sample needs at least 2 draws"));
            }
            let s = resolve_seed(a.seed, &mut art);
            seed = Some(s);
            let opts = SampleOptions {
                seed: s,
                exec: Exec::default(),
            };
            Some(fit_report("sampling", &sample_log_probs(net, m, &opts), theory))
        }
        None => match enumeration::log_probs(net, &opts) {
            Ok(lnp) => Some(fit_report("enumeration", &lnp, theory)),
            Err(e) => {
                let msg = e.to_string();
                art.notice(msg.clone());
                status = Err(match e {
                    EnumError::CapExceeded { .. } => CliError::cap(format!("{msg} (use --sample)")),
                    _ => CliError::input(msg),
                });
                None
            }
        },
    };
    if let Some(r) = &report {
        art.json("fit.json", r)?;
        if let Some(u) = &r.uniform {
            say!("fitted xi         {:.6}", u.xi);
            say!("fitted phi2       {:.6}", u.phi2);
        }
        if let Some(t) = &r.theoretical {
            say!("theoretical xi    {:.6}", t.xi);
            say!("theoretical phi2  {:.6}", t.phi2);
        }
    }
    art.finish("fit", params(a), Some(&loaded.source), json!({ "sample": seed }))?;
    status
}

// --------------------------------------------------------------- threshold

#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("target").required(true).args(["f", "epsilon"])))]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub net: NetArgs,
    /// Mean of ln p (use with --phi2 instead of a network).
    #[arg(long, requires = "phi2", conflicts_with_all = ["input", "generate"], allow_hyphen_values = true)]
    pub xi: Option<f64>,
    /// Variance of ln p.
    #[arg(long, requires = "xi")]
    pub phi2: Option<f64>,
    /// Mass fraction carried by states below the threshold.
    #[arg(long)]
    pub f: Option<f64>,
    /// Like --f, and also estimate how many top states cover 1 - epsilon.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Number of states for the rank estimate (default: the network's).
    #[arg(long)]
    pub states: Option<u64>,
    /// Use the enumeration fit instead of the closed-form moments.
    #[arg(long, conflicts_with = "xi")]
    pub fitted: bool,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub cap: u64,
}

#[derive(Serialize)]
struct ThresholdReport {
    model: NormalModel,
    model_source: &'static str,
    result: ThresholdResult,
    rank_estimate: Option<RankEstimate>,
}

pub fn threshold(a: &ThresholdArgs, out: &Path) -> Result<(), CliError> {
    let (model, model_source, loaded) = match (a.xi, a.phi2) {
        (Some(xi), Some(phi2)) => (NormalModel::new(xi, phi2), "parameters", None),
        _ => {
            if a.net.input.is_none() && a.net.generate.is_none() {
                return Err(CliError::input(
                    "give a network, or both --xi and --phi2",
                ));
            }
            let loaded = input::load(&a.net)?;
            let (nm, src) = if a.fitted {
                let lnp = enumeration::log_probs(
                    &loaded.net,
                    &EnumOptions {
                        cap: a.cap,
                        exec: Exec::default(),
                    },
                )
                .map_err(|e| match e {
                    EnumError::CapExceeded { .. } => CliError::cap(e.to_string()),
                    _ => CliError::input(e.to_string()),
                })?;
                let nm = fit_uniform(&lnp).map_err(|e| CliError::input(e.to_string()))?;
                (nm, "enumeration_fit")
            } else {
                let nm = theoretical_normal(&loaded.net).map_err(|e| CliError::input(e.to_string()))?;
                (nm, "closed_form")
            };
            (nm, src, Some(loaded))
        }
    };
    let f = a.f.or(a.epsilon).expect("clap requires one");
    let result = mass_threshold(&model, f).map_err(|e| CliError::input(e.to_string()))?;
    let rank_estimate = match a.epsilon {
        None => None,
        Some(eps) => {
            let n = a
                .states
                .map(|s| (s as f64).ln())
                .or(loaded.as_ref().map(|l| l.net.ln_state_count()))
                .ok_or_else(|| CliError::input("--epsilon without a network needs --states"))?;
            Some(epsilon_rank_estimate(&model, eps, n).map_err(|e| CliError::input(e.to_string()))?)
        }
    };
    let mut art = Artifacts::create(out)?;
    let report = ThresholdReport {
        model,
        model_source,
        result,
        rank_estimate,
    };
    art.json("threshold.json", &report)?;
    say!("ln t              {:.8}", result.ln_t);
    say!("t                 {:.6e}", result.t);
    say!("l (truncated)     {:.8}", result.l);
    say!("l (untruncated)   {:.8}", result.l_untruncated);
    say!("1 - l             {:.6e}", result.upper_fraction);
    if let Some(r) = &report.rank_estimate {
        say!("states for 1-eps  {:.2}", r.states);
    }
    art.finish(
        "threshold",
        params(a),
        loaded.as_ref().map(|l| &l.source),
        json!({}),
    )
}

// -------------------------------------------------------------------- topk

#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("rule").required(true).args(["k", "epsilon", "floor"])))]
pub struct TopkArgs {
    #[command(flatten)]
    pub net: NetArgs,
    /// Emit this many states.
    #[arg(long)]
    pub k: Option<usize>,
    /// Emit until the remaining mass is at most epsilon.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Emit every state with probability at least this.
    #[arg(long)]
    pub floor: Option<f64>,
    /// Frontier size at which the search gives up (exit code 4).
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    pub node_cap: usize,
    /// Assign variables with the most extreme CPT entries first.
    #[arg(long)]
    pub reorder: bool,
    /// Check the result against exact enumeration.
    #[arg(long)]
    pub verify: bool,
    /// Enumeration cap for --verify.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub cap: u64,
}

#[derive(Serialize)]
struct TopkRow {
    rank: usize,
    index: u64,
    prob: f64,
    log_prob: f64,
    cumulative_mass: f64,
    assignment: String,
}

#[derive(Serialize)]
struct TopkReport {
    rule: StopRule,
    emitted: usize,
    accounted_mass: f64,
    residual_bound: f64,
    nodes_expanded: u64,
    nodes_generated: u64,
    max_frontier: usize,
    truncated: bool,
    verification: Option<VerificationReport>,
}

pub fn topk(a: &TopkArgs, out: &Path) -> Result<(), CliError> {
    let rule = match (a.k, a.epsilon, a.floor) {
        (Some(k), _, _) => StopRule::MaxStates(k),
        (_, Some(e), _) => StopRule::ResidualMass(e),
        (_, _, Some(t)) => StopRule::ProbabilityFloor(t),
        _ => unreachable!("clap requires one rule"),
    };
    rule.validate().map_err(|e| CliError::input(e.to_string()))?;
    let (loaded, mut art) = prepare(&a.net, out)?;
    let net = &loaded.net;
    let opts = SearchOptions {
        node_cap: a.node_cap,
        reorder: a.reorder,
    };
    let r = search_top_states(net, rule, &opts).map_err(|e| CliError::input(e.to_string()))?;

    let mut cum = CompensatedSum::new();
    let rows: Vec<TopkRow> = r
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            cum.add(s.prob);
            let assignment = s
                .assignment
                .outcomes()
                .iter()
                .zip(net.variables())
                .map(|(&o, v)| format!("{}={}", v.name(), v.outcomes()[o]))
                .collect::<Vec<_>>()
                .join(";");
            TopkRow {
                rank: i + 1,
                index: s.index.0,
                prob: s.prob,
                log_prob: s.log_prob,
                cumulative_mass: cum.value(),
                assignment,
            }
        })
        .collect();
    art.csv("topk.csv", &rows)?;

    let verification = a.verify.then(|| {
        verify_against_enumeration(
            net,
            rule,
            &opts,
            &EnumOptions {
                cap: a.cap,
                exec: Exec::default(),
            },
        )
    });
    let report = TopkReport {
        rule,
        emitted: r.states.len(),
        accounted_mass: r.accounted_mass,
        residual_bound: r.residual_bound,
        nodes_expanded: r.nodes_expanded,
        nodes_generated: r.nodes_generated,
        max_frontier: r.max_frontier,
        truncated: r.truncated,
        verification,
    };
    art.json("topk.json", &report)?;
    say!("states emitted    {}", report.emitted);
    say!("accounted mass    {:.12}", report.accounted_mass);
    say!("residual bound    {:.3e}", report.residual_bound);
    say!("nodes expanded    {}", report.nodes_expanded);

    let mut status = Ok(());
    if let Some(v) = &report.verification {
        if v.passed {
            say!("verification      passed");
        } else {
            for f in &v.failures {
                art.notice(format!("verification: {f}"));
            }
            status = Err(CliError::failed("search disagrees with enumeration"));
        }
    }
    if r.truncated {
        art.notice(format!(
            "node cap {} reached; result is partial",
            a.node_cap
        ));
        status = Err(CliError::truncated("search truncated by the node cap"));
    }
    art.finish("topk", params(a), Some(&loaded.source), json!({}))?;
    status
}

// ---------------------------------------------------------------- generate

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenerateArgs {
    /// Generator spec, e.g. `identical:n=10,k=2,p=0.1,0.9,seed=3`.
    pub spec: String,
    /// File name inside the output directory.
    #[arg(long, default_value = "network.json")]
    pub name: PathBuf,
}

pub fn generate(a: &GenerateArgs, out: &Path) -> Result<(), CliError> {
    let spec = parse_gen_spec(&a.spec)?;
    let net = jpdprof::generate(&spec).map_err(|e| CliError::input(e.to_string()))?;
    let mut art = Artifacts::create(out)?;
    let name = a.name.to_string_lossy().into_owned();
    art.bytes(&name, write_native(&net).as_bytes())?;
    say!("{}", art.dir().join(&name).display());
    let source = Source::Generated(spec.clone());
    art.finish("generate", params(a), Some(&source), json!({ "generator": spec.seed }))
}

// --------------------------------------------------------------- check-clt

#[derive(Debug, Clone, Args, Serialize)]
pub struct CltArgs {
    #[command(flatten)]
    pub net: NetArgs,
}

pub fn check_clt(a: &CltArgs, out: &Path) -> Result<(), CliError> {
    let (loaded, mut art) = prepare(&a.net, out)?;
    let net = &loaded.net;
    let moments = network_log_moments(net).map_err(|e| CliError::input(e.to_string()))?;
    let report = liapounov_ratio(&moments).map_err(|e| CliError::input(e.to_string()))?;
    moment_rows(net, &mut art)?;
    say!("variables         {}", net.len());
    say!("Liapounov ratio   {:.6e}", report.ratio);
    say!("n^(-1/2)          {:.6e}", (net.len() as f64).powf(-0.5));
    if report.multi_valued {
        say!("note: some variables have more than two distinct log entries");
    }
    art.finish("check-clt", params(a), Some(&loaded.source), json!({}))
}
