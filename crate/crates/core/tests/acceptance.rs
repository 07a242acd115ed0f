use std::process::Command;
use std::time::{Duration, Instant};

use qswitch::algebra::{generalized_pauli, random_state, root_of_unity, tensor, MonomialUnitary, PauliKind, StateVector};
use qswitch::circuit::{
    check_ancilla_disentangled, circuit_query_count, compare_with_switch, contains_all_permutations,
    control_superposition, count_queries_circuit, embed_label_control, minimal_supersequence_length,
    run_fixed_circuit, supersequence_upper_bound, CircuitControl,
};
use qswitch::construct::{
    build_low_dim_set_n3, build_standard_set, build_standard_set_with_root, infer_property, pairwise_deviation,
    perturb_set, property_deviation, property_score, random_dense_set, sampled_pairwise_deviation, BuildOptions,
    Representation, UnitarySet, PROMISE_THRESHOLD,
};
use qswitch::perm::{
    factorial, factoradic_to_label, label_to_factoradic, label_to_permutation, permutation_to_label, Factoradic,
    PermutationLabel,
};
use qswitch::periodic::{analytic_p0, run_with_phase_function, PhaseFunction};
use qswitch::router::{build_router_network, route, simulate_switch_via_routers};
use qswitch::switch::{
    count_queries_switch, majority_vote_from_distribution, n_switch_apply, run_algorithm_mixed, run_algorithm_pure,
    OutcomeDistribution,
};
use qswitch::Error;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Five distinct values of y (all of them when there are fewer).
fn sampled_ys(n: usize, seed: u64) -> Vec<usize> {
    let order = factorial(n).unwrap();
    let mut ys = sample(&mut rng(seed), order, order.min(5)).into_vec();
    ys.sort_unstable();
    ys
}

fn structured() -> BuildOptions {
    BuildOptions::with_representation(Representation::Structured)
}

fn criterion_1() -> Check {
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for n in 2..=3 {
        for y in 0..factorial(n).unwrap() {
            let mut sets = vec![ok(build_standard_set(n, y, BuildOptions::default()))?];
            if n == 3 {
                sets.push(ok(build_low_dim_set_n3(y))?);
            }
            for set in &sets {
                let mut r = rng((n * 100 + y) as u64);
                for _ in 0..10 {
                    let psi = ok(random_state(vec![set.d()], &mut r))?;
                    let dist = ok(run_algorithm_pure(set, &psi))?;
                    worst = worst.max((dist.probs()[y] - 1.0).abs());
                    runs += 1;
                }
                let mixed = ok(run_algorithm_mixed(set))?;
                worst = worst.max((mixed.probs()[y] - 1.0).abs());
                runs += 1;
            }
        }
    }
    ensure!(worst <= 1e-9, "max |p_y - 1| = {worst:e}");
    Ok(format!("{runs} runs, max |p_y - 1| = {worst:.1e}"))
}

/// `U_k` assembled from explicit generalized Paulis with clock root `omega^c`.
fn explicit_standard(n: usize, c: i64) -> Vec<MonomialUnitary> {
    let order = factorial(n).unwrap();
    let w = root_of_unity(order, 1);
    let x = generalized_pauli(PauliKind::X, order, 1, w).unwrap();
    let z = |p: i64| generalized_pauli(PauliKind::Z, order, c * p, w).unwrap();
    let id = MonomialUnitary::identity(order);
    if n == 1 {
        return vec![MonomialUnitary::identity(1)];
    }
    (0..n)
        .map(|k| {
            let kf = factorial(k).unwrap() as i64;
            let factors: Vec<MonomialUnitary> = (0..n - 1)
                .map(|i| {
                    if k == n - 1 || i < k {
                        z(kf)
                    } else if i == k {
                        x.clone()
                    } else {
                        id.clone()
                    }
                })
                .collect();
            tensor(&factors).unwrap()
        })
        .collect()
}

fn criterion_2() -> Check {
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for n in 1..=4 {
        let order = factorial(n).unwrap();
        for y in sampled_ys(n, n as u64) {
            // clock from omega^{+y}: U_k U_j = omega^{y k!} U_j U_k
            let set = ok(build_standard_set_with_root(n, y as i64, structured()))?;
            worst = worst.max(ok(pairwise_deviation(&set, y as i64))?);
            // clock from omega^{-y}: U_j U_k = omega^{y k!} U_k U_j, and P_y
            let py = ok(build_standard_set(n, y, structured()))?;
            worst = worst.max(ok(pairwise_deviation(&py, -(y as i64)))?);

            // independent entrywise check on explicit arrays
            let explicit = explicit_standard(n, y as i64);
            for (u, e) in set.unitaries().iter().zip(&explicit) {
                worst = worst.max(ok(ok(u.to_monomial())?.max_abs_diff(e))?);
            }
            for k in 1..n {
                let phase = root_of_unity(order, (y * factorial(k).unwrap()) as i64);
                for j in 0..k {
                    let lhs = ok(explicit[k].multiply(&explicit[j]))?;
                    let rhs = ok(ok(explicit[j].multiply(&explicit[k]))?.scaled(phase))?;
                    worst = worst.max(ok(lhs.max_abs_diff(&rhs))?);
                    pairs += 1;
                }
            }
        }
    }
    ensure!(worst <= 1e-10, "max entrywise deviation {worst:e}");
    Ok(format!("{pairs} pairs (n <= 4), max deviation {worst:.1e}"))
}

fn criterion_3() -> Check {
    let c = ok(label_to_factoradic(21, 4))?;
    ensure!(c.descending() == vec![3, 1, 1], "21 -> {:?}", c.descending());
    ensure!(factoradic_to_label(&ok(Factoradic::from_descending(&[3, 1, 1]))?) == 21, "(3,1,1) -/-> 21");
    let arrangement = ok(PermutationLabel::new(21, 4))?.arrangement();
    ensure!(arrangement == "U_0U_2U_1U_3", "label 21 arranged as {arrangement}");
    ensure!(ok(permutation_to_label(&ok(label_to_permutation(21, 4))?))? == 21, "21 does not round-trip");
    for n in 1..=6 {
        let order = factorial(n).unwrap();
        let mut seen = vec![false; order];
        for x in 0..order {
            let back = ok(permutation_to_label(&ok(label_to_permutation(x, n))?))?;
            ensure!(back == x, "n={n}: {x} -> {back}");
            ensure!(!std::mem::replace(&mut seen[back], true), "n={n}: {back} hit twice");
        }
    }
    Ok("label 21 <-> (3,1,1) <-> U_0U_2U_1U_3; bijective for n <= 6".into())
}

fn count_case_verdicts(set: &UnitarySet) -> Result<(bool, bool), String> {
    let d = set.d();
    let psi = ok(StateVector::basis(vec![d], 0))?;
    let anc: Vec<StateVector> = (0..3).map(|_| StateVector::basis(vec![d], 0).unwrap()).collect();
    let run = |strings: &[&str]| -> Result<bool, String> {
        let controls: Vec<CircuitControl> = strings.iter().map(|s| CircuitControl::parse(s).unwrap()).collect();
        let state = ok(run_fixed_circuit(set, &ok(control_superposition(&controls))?, &psi, &anc))?;
        Ok(ok(check_ancilla_disentangled(&state))?.disentangled)
    };
    Ok((run(&["002", "020", "200"])?, run(&["002", "021"])?))
}

fn criterion_4() -> Check {
    let set = ok(build_low_dim_set_n3(1))?;
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    let mut min_purity: f64 = 1.0;
    for _ in 0..100 {
        let control = ok(random_state(vec![6], &mut r))?;
        let psi = ok(random_state(vec![6], &mut r))?;
        let anc: Vec<StateVector> = (0..3).map(|_| random_state(vec![6], &mut r).unwrap()).collect();
        worst = worst.max(ok(compare_with_switch(&set, &control, &psi, &anc))?);
        let state = ok(run_fixed_circuit(&set, &ok(embed_label_control(&control, 3))?, &psi, &anc))?;
        let verdict = ok(check_ancilla_disentangled(&state))?;
        ensure!(verdict.disentangled, "ancillae entangled, purity {}", verdict.purity);
        min_purity = min_purity.min(verdict.purity);
    }
    ensure!(worst <= 1e-9, "circuit deviates from switch by {worst:e}");
    for s in [set, ok(random_dense_set(3, 2, 44))?] {
        let (equal_counts, mixed_counts) = count_case_verdicts(&s)?;
        ensure!(equal_counts, "002+020+200 should disentangle (d = {})", s.d());
        ensure!(!mixed_counts, "002+021 should not disentangle (d = {})", s.d());
    }
    Ok(format!(
        "100 trials, max deviation {worst:.1e}, min ancilla purity {min_purity:.12}; unequal-count cases as expected"
    ))
}

fn criterion_5() -> Check {
    let mut totals = Vec::new();
    for n in 1..=3 {
        let order = factorial(n).unwrap();
        let set = ok(build_standard_set(n, 0, BuildOptions::default()))?;
        let control = ok(StateVector::uniform(order))?;
        let switch = ok(count_queries_switch(&set, &control))?;
        ensure!(switch.flags_factorize && switch.total_queries == Some(n), "switch ledger {switch:?}");
        let circuit = ok(count_queries_circuit(&ok(embed_label_control(&control, n))?, n))?;
        ensure!(circuit.total.total_queries == Some(n * n), "circuit total {:?}", circuit.total.total_queries);
        ensure!(ok(circuit_query_count(n))? == n * n, "circuit_query_count({n})");
        ensure!(
            circuit.on_target.counts.values().all(|v| v.iter().all(|&c| c == 1)),
            "target uses per branch are not all ones"
        );
        ensure!(circuit.total.counts.values().all(|v| v.iter().all(|&c| c == n)), "per-unitary uses differ from n");
        totals.push(format!("n={n}: {} vs {}", n, n * n));
    }
    Ok(totals.join(", "))
}

fn criterion_6() -> Check {
    let (m1, _) = ok(minimal_supersequence_length(1))?;
    ensure!(m1 == 1, "n=1 gave {m1}");
    let (m2, w2) = ok(minimal_supersequence_length(2))?;
    ensure!(m2 == 3 && ok(contains_all_permutations(&w2, 2))?, "n=2 gave {m2} {w2:?}");
    let (m3, w3) = ok(minimal_supersequence_length(3))?;
    let bound = ok(supersequence_upper_bound(3))?;
    ensure!(bound == 9, "bound(3) = {bound}");
    ensure!(ok(contains_all_permutations(&w3, 3))?, "witness {w3:?} misses a permutation");
    ensure!(!ok(contains_all_permutations(&w3[..m3 - 1], 3))?, "witness {w3:?} is not tight");
    ensure!(m3 <= bound, "n=3 minimum {m3} exceeds {bound}");
    Ok(format!("m = 1, 3, {m3} for n = 1, 2, 3 (bound 9); witness {w3:?}"))
}

fn criterion_7() -> Check {
    let mut checked = 0;
    for n in 1..=5 {
        let net = ok(build_router_network(n))?;
        ensure!(net.swaps.len() == n * (n - 1) / 2, "n={n}: {} swaps", net.swaps.len());
        for x in 0..factorial(n).unwrap() {
            let sigma = ok(label_to_permutation(x, n))?;
            for (j, &s) in sigma.iter().enumerate() {
                ensure!(ok(route(&net, x, j))? == s, "n={n} x={x} j={j}");
                checked += 1;
            }
        }
    }
    let set = ok(random_dense_set(3, 3, 70))?;
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let control = ok(random_state(vec![6], &mut r))?;
        let psi = ok(random_state(vec![3], &mut r))?;
        let via = ok(simulate_switch_via_routers(&set, &control, &psi))?;
        let direct = ok(n_switch_apply(&set, &ok(StateVector::product(&[&control, &psi]))?))?;
        worst = worst.max(ok(via.max_abs_diff(&direct))?);
    }
    ensure!(worst <= 1e-9, "routers deviate by {worst:e}");
    Ok(format!("{checked} routes exact (n <= 5), 50 trials max deviation {worst:.1e}"))
}

fn criterion_8() -> Check {
    let mut worst: f64 = 0.0;
    for n in 2..=4 {
        let order = factorial(n).unwrap();
        for r in (1..=order).filter(|r| order.is_multiple_of(*r)) {
            let dist = ok(run_with_phase_function(&ok(PhaseFunction::modular(n, r))?))?;
            let formula = ok(analytic_p0(r, order))?;
            if r == 1 {
                ensure!(formula == 1.0 && (dist.probs()[0] - 1.0).abs() <= 1e-9, "r = 1 at n={n}");
            }
            worst = worst.max((dist.probs()[0] - formula).abs());
        }
    }
    ensure!(worst <= 1e-9, "simulated p_0 off the formula by {worst:e}");
    for y in 0..6 {
        let phase = ok(run_with_phase_function(&ok(PhaseFunction::linear(3, y))?))?;
        let exact = ok(run_algorithm_mixed(&ok(build_low_dim_set_n3(y))?))?;
        let delta = ok(OutcomeDistribution::delta(6, y))?;
        ensure!(ok(phase.max_abs_diff(&delta))? <= 1e-9, "g = xy, y={y} is not a delta");
        ensure!(ok(phase.max_abs_diff(&exact))? <= 1e-9, "g = xy, y={y} differs from the switch run");
    }
    Ok(format!("p_0 matches the closed form for every divisor r (n = 2..4), max error {worst:.1e}"))
}

fn criterion_9() -> Check {
    let mut qualifying = 0;
    let mut rejected = 0;
    for y in 0..6 {
        let base = ok(build_low_dim_set_n3(y))?;
        for (i, eps) in [0.01, 0.05, 0.1, 0.3, 0.6, 1.0, 2.0].into_iter().enumerate() {
            for seed in 0..3u64 {
                let set = ok(perturb_set(&base, eps, seed * 31 + i as u64))?;
                let score = ok(property_score(&set, y))?.score;
                if score >= PROMISE_THRESHOLD {
                    qualifying += 1;
                    let inferred = ok(infer_property(&set))?;
                    ensure!(inferred == Some(y), "eps={eps} seed={seed}: inferred {inferred:?}, wanted {y}");
                    let mixed = ok(run_algorithm_mixed(&set))?;
                    ensure!(mixed.mass_off(y) <= 1.0 / 3.0 + 1e-9, "off-claim mass {}", mixed.mass_off(y));
                } else {
                    rejected += 1;
                }
            }
        }
    }
    ensure!(qualifying > 0, "no perturbed set met the promise");

    let y = 2;
    let mut probs = vec![0.3 / 5.0; 6];
    probs[y] = 0.7;
    let dist = ok(OutcomeDistribution::new(probs))?;
    let error_rate = |k: usize| -> Result<f64, String> {
        let mut wrong = 0;
        for trial in 0..200u64 {
            if ok(majority_vote_from_distribution(&dist, k, 1000 + trial))? != y {
                wrong += 1;
            }
        }
        Ok(wrong as f64 / 200.0)
    };
    let (e1, e31) = (error_rate(1)?, error_rate(31)?);
    ensure!(e31 < e1, "majority error k=31 {e31} not below k=1 {e1}");
    Ok(format!(
        "{qualifying} perturbed sets met the promise and were identified ({rejected} below 2/3); majority error {e1:.3} (k=1) vs {e31:.3} (k=31)"
    ))
}

fn criterion_10() -> Check {
    let n = 5;
    let mut worst: f64 = 0.0;
    for y in sampled_ys(n, 10) {
        let set = ok(build_standard_set_with_root(n, y as i64, structured()))?;
        worst = worst.max(ok(pairwise_deviation(&set, y as i64))?);
        worst = worst.max(ok(sampled_pairwise_deviation(&set, y as i64, 256, y as u64))?);
        let py = ok(build_standard_set(n, y, structured()))?;
        worst = worst.max(ok(pairwise_deviation(&py, -(y as i64)))?);
        worst = worst.max(ok(property_deviation(&py, y))?);
    }
    ensure!(worst <= 1e-10, "n=5 deviation {worst:e}");
    let dense = build_standard_set(n, 1, BuildOptions::with_representation(Representation::Dense));
    ensure!(matches!(dense, Err(Error::BudgetExceeded(_))), "dense build at n=5 was not refused");
    let status = ok(Command::new(env!("CARGO_BIN_EXE_qswitch"))
        .args(["pairwise", "--n", "5", "--representation", "dense"])
        .output())?
    .status
    .code();
    ensure!(status == Some(3), "dense mode exit status {status:?}");
    Ok(format!("d = 120^4 symbolic, max deviation {worst:.1e}; dense mode exits with 3"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("deterministic discrimination", Duration::from_secs(5), criterion_1),
        ("pairwise phase relations", Duration::from_secs(10), criterion_2),
        ("factoradic labeling", Duration::from_secs(1), criterion_3),
        ("circuit vs switch", Duration::from_secs(30), criterion_4),
        ("query counting", Duration::from_secs(1), criterion_5),
        ("supersequence bounds", Duration::from_secs(60), criterion_6),
        ("router equivalence", Duration::from_secs(30), criterion_7),
        ("periodic phase formula", Duration::from_secs(5), criterion_8),
        ("noisy promise", Duration::from_secs(60), criterion_9),
        ("scale guard", Duration::from_secs(60), criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if elapsed <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
            Err(e) => (false, e),
        };
        failures += usize::from(!pass);
        println!(
            "criterion {:>2} {}: {} [{:.2?}] {}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            elapsed,
            detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
