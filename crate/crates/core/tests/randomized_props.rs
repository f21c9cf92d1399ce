mod oracles;

use gardenhose::families::build_generic;
use gardenhose::randomized::{
    derandomize, exact_error, hoeffding_bound, majority_error, union_bound_threshold, RandomizedStrategy,
};
use gardenhose::{Side, Strategy, TruthTable};
use proptest::strategy::Strategy as _;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_table(rng: &mut ChaCha8Rng, n: usize) -> TruthTable {
    TruthTable::total_fn(n, |_, _| rng.gen())
}

/// Mixes a correct strategy with random ones: seed `r` is random iff `bad(r)`.
fn mixture(seed: u64, n: usize, rho: u32, bad: impl Fn(usize) -> bool) -> (RandomizedStrategy, TruthTable) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = random_table(&mut rng, n);
    let good = build_generic(&table).unwrap();
    let rs = RandomizedStrategy::from_fn(rho, |r| {
        if bad(r) {
            oracles::random_strategy(&mut rng, n, good.pipes())
        } else {
            good.clone()
        }
    })
    .unwrap();
    (rs, table)
}

fn wrong(st: &Strategy, table: &TruthTable, x: usize, y: usize) -> bool {
    (oracles::walk_strategy(st, x, y) == Side::Bob) != table.get(x, y).unwrap()
}

/// Majority error by enumerating every `k`-tuple of seeds.
fn majority_by_tuples(rs: &RandomizedStrategy, table: &TruthTable, x: usize, y: usize, k: u32) -> BigRational {
    let seeds = rs.seeds().len();
    let total = seeds.pow(k);
    let mut bad = 0u64;
    for mut t in 0..total {
        let mut wrong_votes = 0;
        for _ in 0..k {
            wrong_votes += wrong(rs.seed(t % seeds), table, x, y) as u32;
            t /= seeds;
        }
        bad += (2 * wrong_votes > k) as u64;
    }
    BigRational::new(BigInt::from(bad), BigInt::from(total))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn exact_error_counts_wrong_seeds(seed in any::<u64>(), n in 1usize..=2, rho in 0u32..=3, mask in any::<u8>()) {
        let (rs, table) = mixture(seed, n, rho, |r| mask >> r & 1 == 1);
        let profile = exact_error(&rs, &table).unwrap();
        let mut worst = BigRational::zero();
        for (x, y, _) in table.defined_cells() {
            let count = rs.seeds().iter().filter(|st| wrong(st, &table, x, y)).count();
            let want = BigRational::new(BigInt::from(count), BigInt::from(1u64 << rho));
            prop_assert_eq!(profile.get(x, y).unwrap(), &want);
            worst = worst.max(want);
        }
        prop_assert_eq!(profile.worst_case(), &worst);
    }

    #[test]
    fn majority_matches_tuple_enumeration(seed in any::<u64>(), rho in 0u32..=2, mask in any::<u8>(), k in prop::sample::select(vec![1u64, 3, 5])) {
        let (rs, table) = mixture(seed, 1, rho, |r| mask >> r & 1 == 1);
        let maj = majority_error(&rs, &table, k).unwrap();
        let single = exact_error(&rs, &table).unwrap();
        for (x, y, p) in maj.defined() {
            prop_assert_eq!(p, &majority_by_tuples(&rs, &table, x, y, k as u32));
            if k == 1 {
                prop_assert_eq!(p, single.get(x, y).unwrap());
            }
        }
    }

    #[test]
    fn majority_error_obeys_hoeffding(seed in any::<u64>(), rho in 1u32..=4, mask in any::<u16>(), k in (0u64..12).prop_map(|j| 2 * j + 1)) {
        let (rs, table) = mixture(seed, 1, rho, |r| mask >> r & 1 == 1);
        let single = exact_error(&rs, &table).unwrap();
        let maj = majority_error(&rs, &table, k).unwrap();
        for (x, y, p) in single.defined() {
            let delta = 0.5 - p.to_f64().unwrap();
            if delta > 0.0 {
                let err = maj.get(x, y).unwrap().to_f64().unwrap();
                prop_assert!(err <= hoeffding_bound(delta, k) + 1e-12, "p={p} k={k} err={err}");
            }
        }
    }

    #[test]
    fn derandomization_below_the_union_bound_finds_a_correct_seed(seed in any::<u64>(), n in 1usize..=2, bad_seed in 0usize..64) {
        // one bad seed out of 2^(2n+2) keeps the error below 2^(-2n-1)
        let rho = 2 * n as u32 + 2;
        let (rs, table) = mixture(seed, n, rho, |r| r == bad_seed % (1 << rho));
        prop_assert!(exact_error(&rs, &table).unwrap().worst_case() < &union_bound_threshold(n));
        let r = derandomize(&rs, &table).unwrap().expect("some seed is correct");
        prop_assert!(table.defined_cells().all(|(x, y, _)| !wrong(rs.seed(r), &table, x, y)));
    }

    #[test]
    fn derandomize_reports_exactly_the_first_correct_seed(seed in any::<u64>(), rho in 0u32..=3, mask in any::<u8>()) {
        let (rs, table) = mixture(seed, 1, rho, |r| mask >> r & 1 == 1);
        let first = rs
            .seeds()
            .iter()
            .position(|st| table.defined_cells().all(|(x, y, _)| !wrong(st, &table, x, y)));
        prop_assert_eq!(derandomize(&rs, &table).unwrap(), first);
    }
}
