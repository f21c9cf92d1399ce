//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p gardenhose --test acceptance`.

mod oracles;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gardenhose::bounds::{counting_existence_bound, injectivity, injectivity_lower_bound};
use gardenhose::families::{build_eq, build_from_protocol, build_generic, build_ip, build_maj, build_xor, transcript_pipe};
use gardenhose::message::{alice_message, bob_decide};
use gardenhose::randomized::{
    binomial_majority_tail, derandomize, exact_error, hoeffding_bound, majority_error, union_bound_threshold,
    RandomizedStrategy,
};
use gardenhose::search::{decode_sat, encode_sat, witness_assignment};
use gardenhose::tm::library::{eq_machine, irreversible_machine, parity_machine};
use gardenhose::tm::{compile, enumerate_boundary, simulate_tm};
use gardenhose::{brute_force_gh, Error, ProtocolTree, SearchConfig, Side, Strategy, TruthTable, Wiring};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

/// Name, time budget, check.
type Criterion = (&'static str, Duration, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn verifies(st: &Strategy, table: &TruthTable) -> Check {
    ensure!(st.verify(table).map_err(|e| e.to_string())?.is_ok(), "strategy does not verify");
    Ok(())
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn xor_one() -> Check {
    let st = build_xor(1).map_err(|e| e.to_string())?;
    ensure!(st.pipes() == 3, "XOR_1 uses {} pipes", st.pipes());
    verifies(&st, &TruthTable::xor(1))
}

fn equality() -> Check {
    for n in 1..=8 {
        let st = build_eq(n).map_err(|e| e.to_string())?;
        ensure!(st.pipes() <= 3 * n + 1, "EQ_{n} uses {} pipes", st.pipes());
        verifies(&st, &TruthTable::eq(n))?;
    }
    Ok(())
}

fn inner_product() -> Check {
    for n in 1..=6 {
        let st = build_ip(n).map_err(|e| e.to_string())?;
        ensure!(st.pipes() <= 4 * n + 1, "IP_{n} uses {} pipes", st.pipes());
        verifies(&st, &TruthTable::ip(n))?;
    }
    Ok(())
}

fn majority() -> Check {
    for n in 1..=5 {
        let st = build_maj(n).map_err(|e| e.to_string())?;
        ensure!(st.pipes() <= (n + 2) * (n + 2), "MAJ_{n} uses {} pipes", st.pipes());
        verifies(&st, &TruthTable::maj(n))?;
    }
    Ok(())
}

fn generic() -> Check {
    let mut tables: Vec<TruthTable> = (0..16).map(|i| TruthTable::nth_total(1, i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in 2..=3 {
        for _ in 0..50 {
            tables.push(TruthTable::total_fn(n, |_, _| rng.gen()));
        }
    }
    for table in &tables {
        let st = build_generic(table).map_err(|e| e.to_string())?;
        ensure!(st.pipes() == (1 << table.n()) + 1, "generic uses {} pipes", st.pipes());
        verifies(&st, table)?;
    }
    Ok(())
}

fn protocol_tree() -> Check {
    let tree = ProtocolTree::from_fns(1, 2, |_, input| input == 1, |v, _| v == "01" || v == "10")
        .map_err(|e| e.to_string())?;
    let st = build_from_protocol(&tree).map_err(|e| e.to_string())?;
    ensure!(st.pipes() <= 7, "protocol strategy uses {} pipes", st.pipes());
    verifies(&st, &TruthTable::xor(1))?;
    for x in 0..2 {
        for y in 0..2 {
            let t = tree.transcript(x, y);
            let want: Vec<usize> = (1..=t.len()).map(|k| transcript_pipe(&t[..k])).collect();
            let got = st.evaluate(x, y).pipes();
            ensure!(got.starts_with(&want), "x={x} y={y}: pipes {got:?}, transcript {t}");
        }
    }
    Ok(())
}

fn tm_compiler() -> Check {
    let cases = (1..=4).map(|n| (parity_machine(n), n)).chain((2..=3).map(|n| (eq_machine(n), n)));
    for (m, n) in cases {
        ensure!(oracles::is_reversible(&m, n), "fixture is not reversible at n={n}");
        let layout = enumerate_boundary(&m, n).map_err(|e| e.to_string())?;
        let st = compile(&m, n).map_err(|e| e.to_string())?;
        let boundary = layout.boundary(Side::Alice).count() + layout.boundary(Side::Bob).count();
        ensure!(st.pipes() == 2 * boundary, "pipe law fails at n={n}");
        for x in 0..1 << n {
            for y in 0..1 << n {
                let want = simulate_tm(&m, n, x, y).map_err(|e| e.to_string())?;
                ensure!(st.exit_side(x, y).bit() == want, "n={n} x={x} y={y}");
            }
        }
    }
    match compile(&irreversible_machine(), 1) {
        Err(Error::ReversibilityViolation(_)) => Ok(()),
        other => Err(format!("irreversible machine gave {other:?}")),
    }
}

fn oracle() -> Check {
    for i in 0..16 {
        let table = TruthTable::nth_total(1, i);
        let report = brute_force_gh(&table, &SearchConfig::default()).map_err(|e| e.to_string())?;
        let s_min = report.s_min().ok_or(format!("table {i}: no exact answer"))?;
        let naive = oracles::naive_gh(&table, 4);
        ensure!(naive == Some(s_min), "table {i}: search {s_min}, naive {naive:?}");
        verifies(report.witness().unwrap(), &table)?;
        let bound = injectivity_lower_bound(&table).map_err(|e| e.to_string())?;
        ensure!(s_min as u64 >= bound, "table {i}: s_min {s_min} below bound {bound}");
    }
    let xor = brute_force_gh(&TruthTable::xor(1), &SearchConfig::default()).map_err(|e| e.to_string())?;
    ensure!(xor.s_min().is_some_and(|s| s <= 3), "s_min(XOR_1) = {:?}", xor.s_min());
    Ok(())
}

fn sat() -> Check {
    let table = TruthTable::xor(1);
    let witness = build_xor(1).map_err(|e| e.to_string())?;
    let cnf = encode_sat(&table, 3);
    ensure!(cnf.check_model(&witness_assignment(&cnf, &witness)), "witness assignment violates the CNF");
    let s_min = brute_force_gh(&table, &SearchConfig::default())
        .map_err(|e| e.to_string())?
        .s_min()
        .ok_or("no exact s_min")?;
    let below = encode_sat(&table, s_min - 1);
    let dpll = oracles::dpll(below.num_vars(), &below.clauses);
    ensure!(dpll.is_none(), "CNF at s_min-1 is satisfiable");
    ensure!(!oracles::naive_exists(&table, s_min - 1), "naive oracle finds a strategy at s_min-1");
    let model = oracles::dpll(cnf.num_vars(), &cnf.clauses).ok_or("CNF at s=3 unsatisfiable")?;
    let lits: Vec<i32> = (1..model.len()).map(|v| if model[v] { v as i32 } else { -(v as i32) }).collect();
    let decoded = decode_sat(&lits, &cnf.varmap).map_err(|e| e.to_string())?;
    verifies(&decoded, &table)
}

fn randomized() -> Check {
    // seeds 0..3 are XOR_1; seed 3 leaves the tap open and always outputs 0
    let xor = build_xor(1).map_err(|e| e.to_string())?;
    let zero = Strategy::new(1, 3, vec![Wiring::empty(Side::Alice, 3); 2], vec![Wiring::empty(Side::Bob, 3); 2])
        .map_err(|e| e.to_string())?;
    let rs = RandomizedStrategy::new(2, vec![xor.clone(), xor.clone(), xor.clone(), zero]).map_err(|e| e.to_string())?;
    let table = TruthTable::xor(1);
    let profile = exact_error(&rs, &table).map_err(|e| e.to_string())?;
    ensure!(profile.worst_case() == &ratio(1, 4), "worst case {}", profile.worst_case());
    for (x, y, p) in profile.defined() {
        let want = if x != y { ratio(1, 4) } else { ratio(0, 1) };
        ensure!(p == &want, "cell ({x},{y}) has error {p}");
    }
    ensure!(binomial_majority_tail(&ratio(1, 4), 3) == ratio(5, 32), "majority tail is not 5/32");
    let maj = majority_error(&rs, &table, 3).map_err(|e| e.to_string())?;
    ensure!(maj.worst_case() == &ratio(5, 32), "majority worst case {}", maj.worst_case());
    for k in (1..40).step_by(2) {
        let maj = majority_error(&rs, &table, k).map_err(|e| e.to_string())?;
        for (x, y, p) in profile.defined() {
            let delta = 0.5 - p.to_f64().unwrap();
            let err = maj.get(x, y).unwrap().to_f64().unwrap();
            ensure!(err <= hoeffding_bound(delta, k) + 1e-12, "Hoeffding fails at k={k}");
        }
    }
    // one bad seed in sixteen is below 2^-3
    let mut seeds = vec![xor; 16];
    seeds[0] = rs.seed(3).clone();
    let rs = RandomizedStrategy::new(4, seeds).map_err(|e| e.to_string())?;
    let profile = exact_error(&rs, &table).map_err(|e| e.to_string())?;
    ensure!(profile.worst_case() < &union_bound_threshold(1), "instance is not below the union bound");
    let r = derandomize(&rs, &table).map_err(|e| e.to_string())?.ok_or("no seed returned")?;
    verifies(rs.seed(r), &table)
}

fn bounds() -> Check {
    for n in 1..=4 {
        for table in [TruthTable::eq(n), TruthTable::ip(n)] {
            ensure!(injectivity(&table).map_err(|e| e.to_string())? == (true, true), "EQ/IP not injective at n={n}");
        }
    }
    let eq8 = injectivity_lower_bound(&TruthTable::eq(8)).map_err(|e| e.to_string())?;
    ensure!(eq8 == 4, "injectivity bound for EQ_8 is {eq8}");
    let c3 = counting_existence_bound(3).map_err(|e| e.to_string())?;
    ensure!(c3 == 2, "counting bound for n=3 is {c3}");
    Ok(())
}

fn model_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=3);
        let pipes = rng.gen_range(1..=10);
        let st = oracles::random_strategy(&mut rng, n, pipes);
        let mut perm: Vec<usize> = (1..=pipes).collect();
        rand::seq::SliceRandom::shuffle(&mut perm[..], &mut rng);
        let (x, y) = (rng.gen_range(0..1 << n), rng.gen_range(0..1 << n));
        ensure!(st.relabel(&perm).exit_side(x, y) == st.exit_side(x, y), "relabeling changed the output");
    }
    for _ in 0..500 {
        let n = rng.gen_range(1..=3);
        let pipes = rng.gen_range(0..=16);
        let st = oracles::random_strategy(&mut rng, n, pipes);
        for x in 0..1 << n {
            for y in 0..1 << n {
                let r = st.evaluate(x, y);
                ensure!(r.hops <= pipes, "{} hops on {pipes} pipes", r.hops);
                ensure!(r.exit == oracles::walk_strategy(&st, x, y), "evaluate disagrees with the walk");
            }
        }
    }
    for n in 1..=4 {
        for st in [build_eq(n), build_ip(n), build_xor(n)] {
            let st = st.map_err(|e| e.to_string())?;
            let s = st.pipes();
            let bound = (s + 1) * (usize::BITS - (s + 1).leading_zeros()) as usize;
            for x in 0..1 << n {
                let msg = alice_message(&st, x);
                ensure!(msg.len() <= bound, "message of {} bits above {bound}", msg.len());
                for y in 0..1 << n {
                    let out = bob_decide(&msg, st.bob(y)).map_err(|e| e.to_string())?;
                    ensure!(out == st.exit_side(x, y).bit(), "bob_decide disagrees at n={n}");
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("xor-three-pipes", Duration::from_millis(1), xor_one),
        ("equality-family", Duration::from_secs(5), equality),
        ("inner-product-family", Duration::from_secs(5), inner_product),
        ("majority-family", Duration::from_secs(5), majority),
        ("generic-construction", Duration::from_secs(10), generic),
        ("protocol-tree", Duration::from_secs(1), protocol_tree),
        ("tm-compiler", Duration::from_secs(30), tm_compiler),
        ("search-oracle", Duration::from_secs(60), oracle),
        ("sat-encoding", Duration::from_secs(10), sat),
        ("randomized", Duration::from_secs(5), randomized),
        ("bounds", Duration::from_millis(1), bounds),
        ("model-properties", Duration::from_secs(30), model_properties),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(()) if elapsed <= *budget => "PASS".to_string(),
            Ok(()) => format!("FAIL (over budget of {budget:?})"),
            Err(e) => format!("FAIL ({e})"),
        };
        if verdict != "PASS" {
            failed += 1;
        }
        println!("criterion {:>2} {name}: {verdict} in {elapsed:.3?}", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
