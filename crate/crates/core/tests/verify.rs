use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ramsey_mult::constructions::{build_named, build_omega};
use ramsey_mult::counting::{count_solutions_with, CountQuery};
use ramsey_mult::verify::{
    auxiliary_t, check_witness, find_in_pattern_m, find_in_pattern_m_general, minimize, stability_check,
    verify_lemma31, PatternM, PatternT, StabilityStatus,
};
use ramsey_mult::{DiscreteColouring, EquationSpec, Exec};

/// Every 2-colouring of the distinct elements of T with c(l) != c(k) has a
/// monochromatic x * y = z with a | z (and x != y when `distinct` is set).
fn lemma31_oracle(a: u64, l: u64, k: u64, distinct: bool) -> bool {
    let t = PatternT::new(a, l, k).unwrap();
    let elems = t.distinct();
    let n = elems.len();
    (0u32..1 << n).all(|mask| {
        let c = |v: u64| (mask >> elems.iter().position(|&e| e == v).unwrap()) & 1;
        if c(l) == c(k) {
            return true;
        }
        elems.iter().any(|&x| {
            elems.iter().any(|&y| {
                let z = x * y;
                (!distinct || x != y) && z % a == 0 && elems.contains(&z) && c(x) == c(y) && c(y) == c(z)
            })
        })
    })
}

#[test]
fn lemma31_sweep() {
    let mut admissible = 0;
    for a in 2..=12 {
        for l in 2..=12 {
            for k in 2..=12 {
                let rep = verify_lemma31(a, l, k).unwrap();
                if rep.side_conditions && l != k {
                    admissible += 1;
                    assert!(rep.holds, "({a}, {l}, {k})");
                    assert_eq!(rep.nondegenerate_holds, Some(true), "({a}, {l}, {k})");
                }
            }
        }
    }
    assert_eq!(admissible, 959);
}

proptest! {
    #[test]
    fn lemma31_matches_oracle(a in 2u64..=12, l in 2u64..=12, k in 2u64..=12) {
        prop_assume!(l != k);
        let rep = verify_lemma31(a, l, k).unwrap();
        prop_assert_eq!(rep.holds, lemma31_oracle(a, l, k, false));
        if rep.side_conditions {
            prop_assert_eq!(rep.nondegenerate_holds, Some(lemma31_oracle(a, l, k, true)));
        }
    }

    #[test]
    fn pattern_witnesses_verify(seed in any::<u64>(), s in 1u32..=3, w in 1u32..=48, b in (1u64..8).prop_map(|h| 2 * h + 1)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = PatternM::random(b, s, w, 2, &mut rng).unwrap();
        if let Some(found) = find_in_pattern_m(&m) {
            let check = check_witness(&EquationSpec::schur(), &m, &found.solution);
            prop_assert!(check.ok(), "{:?} {:?}", found, check);
        }
        for eq in ["1,1", "1,2", "1,1,1"] {
            let eq: EquationSpec = eq.parse().unwrap();
            let t = auxiliary_t(&eq, 2, 12).unwrap();
            if let Some(found) = find_in_pattern_m_general(&eq, &m, t).unwrap() {
                let check = check_witness(&eq, &m, &found.solution);
                prop_assert!(check.ok(), "{} {:?} {:?}", eq, found, check);
            }
        }
    }

    #[test]
    fn general_finder_specialises_to_xy_eq_z(seed in any::<u64>(), s in 1u32..=3, w in 8u32..=64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = PatternM::random(3, s, w, 2, &mut rng).unwrap();
        let eq = EquationSpec::schur();
        let t = auxiliary_t(&eq, 2, 4).unwrap();
        prop_assert_eq!(t, 1);
        let plain = find_in_pattern_m(&m).map(|f| (f.j0, f.d, f.case));
        let general = find_in_pattern_m_general(&eq, &m, t).unwrap().map(|f| (f.j0, f.d, f.case));
        prop_assert_eq!(plain, general);
    }
}

#[test]
fn case_two_uses_distinct_powers_of_two() {
    let eq: EquationSpec = "1,1,1".parse().unwrap();
    let t = auxiliary_t(&eq, 2, 12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = 0;
    for _ in 0..400 {
        // One colour in every row forces the second case once r = 2.
        let rows: Vec<u8> = (0..2 * 200).map(|i| 1 + (i % 2) as u8).collect();
        let powers: Vec<u8> = (0..200).map(|_| rng.gen_range(1..=2)).collect();
        let m = PatternM::new(3, 2, 200, 2, rows, powers).unwrap();
        let Some(found) = find_in_pattern_m_general(&eq, &m, t).unwrap() else { continue };
        assert!(check_witness(&eq, &m, &found.solution).ok());
        if found.case == 2 {
            seen += 1;
            let tail = &found.solution.xs[1..];
            assert!(tail.iter().all(|x| x.count_ones() == 1));
            assert_ne!(tail[0], tail[1]);
        }
    }
    assert!(seen > 0);
}

fn oracle_minimum(eq: &EquationSpec, r: u8, n: u64) -> u64 {
    let len = (n - 1) as u32;
    let mut best = u64::MAX;
    for code in 0..u64::from(r).pow(len) {
        let mut v = code;
        let colours = (0..len)
            .map(|_| {
                let c = (v % u64::from(r)) as u8 + 1;
                v /= u64::from(r);
                c
            })
            .collect();
        let c = DiscreteColouring::new(2, r, colours).unwrap();
        best = best.min(count_solutions_with(&CountQuery::new(eq.clone(), 2, n).with_colouring(&c), Exec::Sequential).unwrap().total);
    }
    best
}

#[test]
fn minimize_matches_enumeration() {
    let eq = EquationSpec::schur();
    for r in 1..=3u8 {
        for n in 2..=12u64 {
            let rep = minimize(&eq, r, n, 64, Exec::default()).unwrap();
            assert_eq!(rep.minimum, oracle_minimum(&eq, r, n), "r = {r}, N = {n}");
            assert_eq!(rep.recounted, rep.minimum);
        }
    }
}

#[test]
fn minimize_monotone() {
    let eq: EquationSpec = "1,1".parse().unwrap();
    let mut grid = Vec::new();
    for r in 1..=3u8 {
        grid.push((2..=26u64).map(|n| minimize(&eq, r, n, 64, Exec::default()).unwrap().minimum).collect::<Vec<_>>());
    }
    for row in &grid {
        assert!(row.windows(2).all(|w| w[0] <= w[1]));
    }
    for ((a, b), c) in grid[0].iter().zip(&grid[1]).zip(&grid[2]) {
        assert!(a >= b && b >= c);
    }
}

#[test]
fn minimize_product_schur_boundary() {
    let eq = EquationSpec::schur();
    let at31 = minimize(&eq, 2, 31, 64, Exec::default()).unwrap();
    assert_eq!(at31.minimum, 0);
    let at32 = minimize(&eq, 2, 32, 64, Exec::default()).unwrap();
    assert_eq!((at32.minimum, at32.participating, at32.recounted), (1, 26, 1));
}

#[test]
fn minimize_is_deterministic_across_policies() {
    let eq: EquationSpec = "1,2".parse().unwrap();
    let a = minimize(&eq, 2, 40, 64, Exec::Sequential).unwrap();
    let b = minimize(&eq, 2, 40, 64, Exec::Parallel).unwrap();
    assert_eq!((a.minimum, a.witness), (b.minimum, b.witness));
}

#[test]
fn stability_examples() {
    let c = build_named("improved2", 10_000).unwrap();
    assert_eq!(stability_check(&c, Exec::default()).unwrap().status, StabilityStatus::Pass);

    let constant = DiscreteColouring::new(2, 2, vec![1; 99]).unwrap();
    let rep = stability_check(&constant, Exec::default()).unwrap();
    let brute = (2..=100u64).flat_map(|x| (2..=100u64).map(move |y| x * y)).filter(|&z| z <= 100).count() as u64;
    assert_eq!(rep.monochromatic, brute);
    assert_eq!(rep.monochromatic, 283);
    assert_eq!((rep.prefix_end, rep.vacuous, rep.status), (Some(0), true, StabilityStatus::Pass));

    let rbbr = DiscreteColouring::from_word(1, 2, "RBBR").unwrap();
    let omega = build_omega(&rbbr, 31).unwrap();
    assert_eq!(stability_check(&omega, Exec::default()).unwrap().status, StabilityStatus::NotApplicable);

    let three = DiscreteColouring::new(2, 3, vec![1; 10]).unwrap();
    assert!(stability_check(&three, Exec::default()).is_err());
}

#[test]
fn stability_random_colourings() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut failures = Vec::new();
    for trial in 0..1000 {
        let colours = (2..=10_000).map(|_| rng.gen_range(1..=2)).collect();
        let c = DiscreteColouring::new(2, 2, colours).unwrap();
        let rep = stability_check(&c, Exec::default()).unwrap();
        if rep.status == StabilityStatus::Fail {
            failures.push((trial, rep));
        }
    }
    assert!(failures.is_empty(), "counterexamples: {failures:?}");
}
