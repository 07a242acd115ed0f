//! Command-line experiments. Each subcommand builds a report with the
//! computed results and a set of named checks; the report goes to standard
//! output (or `--out`) and a one-screen summary to standard error.
//!
//! Exit status: 0 all checks pass, 1 a check failed, 2 invalid arguments,
//! 3 a resource budget was exceeded.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{random_state, StateVector};
use crate::circuit::{
    check_ancilla_disentangled, circuit_query_count, compare_with_switch, contains_all_permutations,
    control_superposition, count_queries_circuit, embed_label_control, minimal_supersequence_length,
    run_fixed_circuit, supersequence_upper_bound, CircuitControl,
};
use crate::construct::{
    all_scores, build_low_dim_set_n3, build_standard_set, build_standard_set_with_root, pairwise_deviation,
    perturb_set, property_deviation, random_dense_set, sampled_pairwise_deviation, set_from_json, set_to_json,
    BuildOptions, Representation, UnitarySet, PROMISE_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::perm::{factorial, label_to_permutation};
use crate::periodic::{compare_period, run_with_phase_function, PhaseFunction};
use crate::router::{build_router_network, route, simulate_switch_via_routers};
use crate::switch::{
    count_queries_switch, majority_vote_from_distribution, n_switch_apply, run_algorithm_basis, run_algorithm_mixed,
    run_algorithm_pure, OutcomeDistribution,
};

/// Above this target dimension the mixed-input distribution is taken from the
/// Hilbert-Schmidt scores instead of averaging over basis states.
const BASIS_AVERAGE_LIMIT: usize = 1 << 16;

#[derive(Parser, Debug)]
#[command(name = "qswitch", version, about = "Quantum n-switch experiments")]
pub struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, global = true, default_value_t = crate::construct::DEFAULT_DENSE_BUDGET)]
    pub dense_budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetMode {
    Exact,
    LowDim,
    Perturbed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    Mixed,
    Random,
    Basis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Repr {
    Structured,
    Monomial,
    Dense,
}

impl From<Repr> for Representation {
    fn from(r: Repr) -> Self {
        match r {
            Repr::Structured => Representation::Structured,
            Repr::Monomial => Representation::Monomial,
            Repr::Dense => Representation::Dense,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FunctionKind {
    Modular,
    Linear,
    Constant,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide which permutation-phase property a set has.
    Discriminate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        y: usize,
        #[arg(long, value_enum, default_value_t = SetMode::Exact)]
        mode: SetMode,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = InputKind::Mixed)]
        input: InputKind,
        #[arg(long, default_value_t = 0)]
        basis_index: usize,
        #[arg(long, default_value_t = 1)]
        repetitions: usize,
        #[arg(long, value_enum, default_value_t = Repr::Monomial)]
        representation: Repr,
        /// Unitary set fixture (JSON); overrides n, y and mode.
        #[arg(long)]
        set: Option<PathBuf>,
    },
    /// Fixed-order circuit against the switch.
    CompareCircuit {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        y: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Shortest sequence containing every permutation.
    Supersequence {
        #[arg(long)]
        n: usize,
    },
    /// Router network and the switch built from two routers.
    Router {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Periodic phase functions on the control register.
    Period {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = FunctionKind::Modular)]
        function: FunctionKind,
        /// Period for the modular function; defaults to n!.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 1)]
        y: usize,
    },
    /// Pairwise commutation phases and the permutation property.
    Pairwise {
        #[arg(long)]
        n: usize,
        /// Values of y to check; five seeded samples when omitted.
        #[arg(long, value_delimiter = ',')]
        y: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Repr::Structured)]
        representation: Repr,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Writes a unitary set as JSON.
    ExportSet {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        y: usize,
        #[arg(long, value_enum, default_value_t = SetMode::Exact)]
        mode: SetMode,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = Repr::Monomial)]
        representation: Repr,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub parameters: Value,
    pub results: Value,
    pub checks: BTreeMap<String, bool>,
    pub passed: bool,
    pub wall_time_ms: u128,
}

impl ExperimentReport {
    fn new(experiment: &str, parameters: Value, results: Value, checks: BTreeMap<String, bool>) -> Self {
        let passed = checks.values().all(|&c| c);
        Self {
            experiment: experiment.to_string(),
            parameters,
            results,
            checks,
            passed,
            wall_time_ms: 0,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Distribution rows when the report has one, the checks otherwise.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(Value::Array(probs)) = self.results.get("distribution") {
            out.push_str("outcome,probability\n");
            for (s, p) in probs.iter().enumerate() {
                let _ = writeln!(out, "{s},{p}");
            }
        } else {
            out.push_str("check,passed\n");
            for (name, ok) in &self.checks {
                let _ = writeln!(out, "{name},{ok}");
            }
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} ({} checks, {} ms)\n",
            self.experiment,
            if self.passed { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.wall_time_ms
        );
        for (name, ok) in self.checks.iter().filter(|(_, ok)| !**ok) {
            let _ = writeln!(s, "  failed: {name} = {ok}");
        }
        s
    }
}

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> Result<ExperimentReport> {
    if cli.tolerance.is_nan() || cli.tolerance <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Discriminate {
            n,
            y,
            mode,
            epsilon,
            input,
            basis_index,
            repetitions,
            representation,
            set,
        } => {
            let built = match set {
                Some(path) => set_from_json(&std::fs::read_to_string(path)?)?,
                None => build_set(cli, *n, *y, *mode, *epsilon, *representation)?,
            };
            discriminate(cli, &built, *mode, *epsilon, *input, *basis_index, *repetitions)?
        }
        Command::CompareCircuit { n, y, trials } => compare_circuit(cli, *n, *y, *trials)?,
        Command::Supersequence { n } => supersequence(*n)?,
        Command::Router { n, trials } => router(cli, *n, *trials)?,
        Command::Period { n, function, r, y } => period(cli, *n, *function, *r, *y)?,
        Command::Pairwise {
            n,
            y,
            representation,
            samples,
        } => pairwise(cli, *n, y, *representation, *samples)?,
        Command::ExportSet {
            n,
            y,
            mode,
            epsilon,
            representation,
        } => {
            let set = build_set(cli, *n, *y, *mode, *epsilon, *representation)?;
            let results: Value = serde_json::from_str(&set_to_json(&set)?)?;
            ExperimentReport::new(
                "export-set",
                json!({"n": n, "y": y, "mode": format!("{mode:?}"), "epsilon": epsilon, "seed": cli.seed}),
                results,
                BTreeMap::new(),
            )
        }
    };
    report.wall_time_ms = start.elapsed().as_millis();
    Ok(report)
}

fn build_set(cli: &Cli, n: usize, y: usize, mode: SetMode, epsilon: f64, repr: Repr) -> Result<UnitarySet> {
    let opts = BuildOptions {
        representation: repr.into(),
        dense_budget: cli.dense_budget,
        ..BuildOptions::default()
    };
    match mode {
        SetMode::Exact => build_standard_set(n, y, opts),
        SetMode::LowDim => {
            if n != 3 {
                return Err(Error::invalid("the six-dimensional set exists for n = 3 only"));
            }
            build_low_dim_set_n3(y)
        }
        SetMode::Perturbed => {
            let base = if n == 3 {
                build_low_dim_set_n3(y)?
            } else {
                build_standard_set(n, y, BuildOptions { representation: Representation::Dense, ..opts })?
            };
            perturb_set(&base, epsilon, cli.seed)
        }
    }
}

fn set_summary(set: &UnitarySet) -> Value {
    json!({
        "n": set.n(),
        "d": set.d(),
        "representation": set.representation(),
        "claimed_y": set.claimed_y(),
        "exact": set.is_exact(),
    })
}

fn discriminate(
    cli: &Cli,
    set: &UnitarySet,
    mode: SetMode,
    epsilon: f64,
    input: InputKind,
    basis_index: usize,
    repetitions: usize,
) -> Result<ExperimentReport> {
    let tol = cli.tolerance;
    let order = set.order();
    let (dist, method) = match input {
        InputKind::Mixed if set.d() > BASIS_AVERAGE_LIMIT => {
            (OutcomeDistribution::new(all_scores(set)?)?, "hilbert-schmidt")
        }
        InputKind::Mixed => (run_algorithm_mixed(set)?, "basis-average"),
        InputKind::Basis => (run_algorithm_basis(set, basis_index)?, "basis-state"),
        InputKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let psi = random_state(vec![set.d()], &mut rng)?;
            (run_algorithm_pure(set, &psi)?, "random-pure")
        }
    };
    let inferred = dist.probs().iter().position(|&p| p >= PROMISE_THRESHOLD);
    let ledger = count_queries_switch(set, &StateVector::uniform(order)?)?;
    let total: f64 = dist.probs().iter().sum();

    let mut checks = BTreeMap::new();
    checks.insert("normalized".to_string(), (total - 1.0).abs() <= tol);
    checks.insert("switch_queries_equal_n".to_string(), ledger.total_queries == Some(set.n()));
    let mut results = json!({
        "set": set_summary(set),
        "method": method,
        "distribution": dist.probs(),
        "inferred_y": inferred,
        "query_ledger": ledger,
    });
    if let Some(y) = set.claimed_y() {
        let p_y = dist.probs()[y];
        let promise = p_y >= PROMISE_THRESHOLD;
        results["p_claimed"] = json!(p_y);
        results["promise_holds"] = json!(promise);
        results["promise_violation"] = json!(!promise);
        if set.is_exact() {
            checks.insert("claimed_outcome_certain".to_string(), (p_y - 1.0).abs() <= tol);
        }
        if promise {
            checks.insert("inferred_matches_claim".to_string(), inferred == Some(y));
            checks.insert("off_claim_mass_at_most_third".to_string(), dist.mass_off(y) <= 1.0 / 3.0 + tol);
            let vote = majority_vote_from_distribution(&dist, repetitions.max(1), cli.seed)?;
            results["majority_vote"] = json!(vote);
        }
    }
    Ok(ExperimentReport::new(
        "discriminate",
        json!({
            "n": set.n(),
            "y": set.claimed_y(),
            "d": set.d(),
            "mode": format!("{mode:?}"),
            "epsilon": epsilon,
            "input": format!("{input:?}"),
            "repetitions": repetitions,
            "seed": cli.seed,
            "tolerance": tol,
        }),
        results,
        checks,
    ))
}

fn circuit_set(n: usize, y: usize) -> Result<UnitarySet> {
    match n {
        0 => Err(Error::invalid("n must be at least 1")),
        1 | 2 => build_standard_set(n, y, BuildOptions::default()),
        3 => build_low_dim_set_n3(y),
        // any useful d makes n^n d^{n+1} amplitudes too many
        _ => Err(Error::BudgetExceeded(format!(
            "circuit simulation holds n^n d^(n+1) amplitudes; n = {n} is out of reach"
        ))),
    }
}

fn compare_circuit(cli: &Cli, n: usize, y: usize, trials: usize) -> Result<ExperimentReport> {
    let set = circuit_set(n, y)?;
    let order = set.order();
    let d = set.d();
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut worst: f64 = 0.0;
    let mut all_disentangled = true;
    for _ in 0..trials {
        let control = random_state(vec![order], &mut rng)?;
        let psi = random_state(vec![d], &mut rng)?;
        let anc = (0..n).map(|_| random_state(vec![d], &mut rng)).collect::<Result<Vec<_>>>()?;
        worst = worst.max(compare_with_switch(&set, &control, &psi, &anc)?);
        let circuit = run_fixed_circuit(&set, &embed_label_control(&control, n)?, &psi, &anc)?;
        all_disentangled &= check_ancilla_disentangled(&circuit)?.disentangled;
    }
    let uniform = embed_label_control(&StateVector::uniform(order)?, n)?;
    let switch_ledger = count_queries_switch(&set, &StateVector::uniform(order)?)?;
    let circuit_ledger = count_queries_circuit(&uniform, n)?;

    let mut checks = BTreeMap::new();
    checks.insert("circuit_matches_switch".to_string(), worst <= cli.tolerance);
    checks.insert("ancillae_disentangle".to_string(), all_disentangled);
    checks.insert("switch_queries_equal_n".to_string(), switch_ledger.total_queries == Some(n));
    checks.insert(
        "circuit_queries_equal_n_squared".to_string(),
        circuit_ledger.total.total_queries == Some(circuit_query_count(n)?),
    );
    let mut results = json!({
        "set": set_summary(&set),
        "max_deviation": worst,
        "switch_queries": switch_ledger.total_queries,
        "circuit_queries": circuit_ledger.total.total_queries,
    });
    if n == 3 {
        let psi = StateVector::basis(vec![d], 0)?;
        let anc: Vec<StateVector> = (0..n).map(|_| random_state(vec![d], &mut rng)).collect::<Result<_>>()?;
        let mut cases = serde_json::Map::new();
        for (name, strings, expect) in [
            ("002+020+200", vec!["002", "020", "200"], true),
            ("002+021", vec!["002", "021"], false),
        ] {
            let controls: Vec<CircuitControl> =
                strings.iter().map(|s| CircuitControl::parse(s)).collect::<Result<_>>()?;
            let state = run_fixed_circuit(&set, &control_superposition(&controls)?, &psi, &anc)?;
            let verdict = check_ancilla_disentangled(&state)?;
            let counts_agree = count_queries_circuit(&control_superposition(&controls)?, n)?.on_target.flags_factorize;
            cases.insert(name.to_string(), json!({"disentangled": verdict.disentangled, "purity": verdict.purity}));
            checks.insert(format!("ancillae_{name}"), verdict.disentangled == expect);
            checks.insert(format!("ancillae_{name}_match_counts"), verdict.disentangled == counts_agree);
        }
        results["count_cases"] = Value::Object(cases);
    }
    Ok(ExperimentReport::new(
        "compare-circuit",
        json!({"n": n, "y": y, "trials": trials, "seed": cli.seed, "tolerance": cli.tolerance}),
        results,
        checks,
    ))
}

fn supersequence(n: usize) -> Result<ExperimentReport> {
    let (m, witness) = minimal_supersequence_length(n)?;
    let bound = supersequence_upper_bound(n)?;
    let mut checks = BTreeMap::new();
    checks.insert("witness_contains_all".to_string(), contains_all_permutations(&witness, n)?);
    checks.insert(
        "witness_is_tight".to_string(),
        !contains_all_permutations(&witness[..m - 1], n)?,
    );
    checks.insert("within_upper_bound".to_string(), m <= bound);
    Ok(ExperimentReport::new(
        "supersequence",
        json!({"n": n}),
        json!({"minimal_length": m, "witness": witness, "upper_bound": bound, "circuit_queries": circuit_query_count(n)?}),
        checks,
    ))
}

fn router(cli: &Cli, n: usize, trials: usize) -> Result<ExperimentReport> {
    let network = build_router_network(n)?;
    let order = factorial(n)?;
    let mut routing_ok = true;
    for x in 0..order {
        let sigma = label_to_permutation(x, n)?;
        for (j, &s) in sigma.iter().enumerate() {
            routing_ok &= route(&network, x, j)? == s;
        }
    }
    let d = 2;
    let set = random_dense_set(n, d, cli.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed.wrapping_add(1));
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let control = random_state(vec![order], &mut rng)?;
        let psi = random_state(vec![d], &mut rng)?;
        let via = simulate_switch_via_routers(&set, &control, &psi)?;
        let direct = n_switch_apply(&set, &StateVector::product(&[&control, &psi])?)?;
        worst = worst.max(via.max_abs_diff(&direct)?);
    }
    let mut checks = BTreeMap::new();
    checks.insert("routing_matches_labels".to_string(), routing_ok);
    checks.insert("swap_count".to_string(), network.swaps.len() == n * (n - 1) / 2);
    checks.insert("routers_match_switch".to_string(), worst <= cli.tolerance);
    Ok(ExperimentReport::new(
        "router",
        json!({"n": n, "trials": trials, "seed": cli.seed, "d": d, "tolerance": cli.tolerance}),
        json!({"network": network.swaps, "swap_count": network.swaps.len(), "max_deviation": worst}),
        checks,
    ))
}

fn period(cli: &Cli, n: usize, function: FunctionKind, r: Option<usize>, y: usize) -> Result<ExperimentReport> {
    let order = factorial(n)?;
    let mut checks = BTreeMap::new();
    let results = match function {
        FunctionKind::Modular => {
            let r = r.unwrap_or(order);
            let c = compare_period(n, r)?;
            checks.insert("p0_matches_formula".to_string(), (c.simulated_p0 - c.analytic_p0).abs() <= cli.tolerance);
            let mut table = Vec::new();
            for divisor in (1..=order).filter(|q| order % q == 0) {
                let row = compare_period(n, divisor)?;
                checks.insert(
                    format!("p0_matches_formula_r{divisor}"),
                    (row.simulated_p0 - row.analytic_p0).abs() <= cli.tolerance,
                );
                table.push(json!({"r": divisor, "simulated_p0": row.simulated_p0, "analytic_p0": row.analytic_p0, "total_variation": row.total_variation}));
            }
            json!({
                "distribution": c.simulated,
                "uniform_period_distribution": c.uniform,
                "simulated_p0": c.simulated_p0,
                "analytic_p0": c.analytic_p0,
                "total_variation": c.total_variation,
                "table": table,
            })
        }
        FunctionKind::Linear => {
            let dist = run_with_phase_function(&PhaseFunction::linear(n, y)?)?;
            checks.insert("delta_at_y".to_string(), (dist.probs()[y % order] - 1.0).abs() <= cli.tolerance);
            json!({"distribution": dist.probs()})
        }
        FunctionKind::Constant => {
            let dist = run_with_phase_function(&PhaseFunction::constant(n, 0)?)?;
            checks.insert("delta_at_zero".to_string(), (dist.probs()[0] - 1.0).abs() <= cli.tolerance);
            json!({"distribution": dist.probs()})
        }
    };
    Ok(ExperimentReport::new(
        "period",
        json!({"n": n, "function": format!("{function:?}"), "r": r, "y": y, "tolerance": cli.tolerance}),
        results,
        checks,
    ))
}

/// Tolerance for the commutation checks.
const PAIRWISE_TOL: f64 = 1e-10;

fn pairwise(cli: &Cli, n: usize, ys: &[usize], repr: Repr, samples: usize) -> Result<ExperimentReport> {
    let order = factorial(n)?;
    let ys: Vec<usize> = if ys.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        let mut v = sample(&mut rng, order, order.min(5)).into_vec();
        v.sort_unstable();
        v
    } else {
        ys.to_vec()
    };
    if let Some(&bad) = ys.iter().find(|&&y| y >= order) {
        return Err(Error::out_of_range("y", bad, order));
    }
    let opts = BuildOptions {
        representation: repr.into(),
        dense_budget: cli.dense_budget,
        ..BuildOptions::default()
    };
    let mut checks = BTreeMap::new();
    let mut rows = Vec::new();
    for &y in &ys {
        // clock from omega^{+y}: U_k U_j = omega^{y k!} U_j U_k
        let plain = build_standard_set_with_root(n, y as i64, opts)?;
        let plain_dev = pairwise_deviation(&plain, y as i64)?;
        // clock from omega^{-y}: U_j U_k = omega^{y k!} U_k U_j, property P_y
        let set = build_standard_set(n, y, opts)?;
        let swapped_dev = pairwise_deviation(&set, -(y as i64))?;
        let prop_dev = property_deviation(&set, y)?;
        let sampled = if repr == Repr::Structured {
            Some(sampled_pairwise_deviation(&plain, y as i64, samples, cli.seed)?)
        } else {
            None
        };
        checks.insert(format!("y{y}_relations_root_plus_y"), plain_dev <= PAIRWISE_TOL);
        checks.insert(format!("y{y}_relations_root_minus_y"), swapped_dev <= PAIRWISE_TOL);
        checks.insert(format!("y{y}_property"), prop_dev <= PAIRWISE_TOL);
        if let Some(s) = sampled {
            checks.insert(format!("y{y}_sampled_entries"), s <= PAIRWISE_TOL);
        }
        rows.push(json!({
            "y": y,
            "relation_deviation_root_plus_y": plain_dev,
            "relation_deviation_root_minus_y": swapped_dev,
            "property_deviation": prop_dev,
            "sampled_entry_deviation": sampled,
            "d": set.d(),
        }));
    }
    Ok(ExperimentReport::new(
        "pairwise",
        json!({"n": n, "y": ys, "representation": format!("{repr:?}").to_lowercase(), "samples": samples, "seed": cli.seed}),
        json!({"rows": rows, "order": order}),
        checks,
    ))
}

fn emit(cli: &Cli, report: &ExperimentReport) -> Result<()> {
    let body = match cli.format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv(),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    eprint!("{}", report.summary());
    Ok(())
}

/// Parses `args`, runs, writes the report and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli).and_then(|r| emit(&cli, &r).map(|_| r)) {
        Ok(report) => i32::from(!report.passed),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
