mod common;

use std::collections::HashSet;

use fractalseq::construction::{construct_type1, translate_type2, Branch, BranchPolicy};
use fractalseq::inverse::ThetaInterval;
use fractalseq::seqcore::rank_stream;
use fractalseq::{
    annotate_ranks, check_doubly_fractal_prefix, compare_affine, generate_signature, lower_trim,
    signature_values, theta_interval_from_prefix, upper_trim, ExactNumber, Sequence,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_sequence(max_len: usize, max_term: u64) -> impl Strategy<Value = Sequence> {
    prop::collection::vec(1..=max_term, 0..max_len).prop_map(|v| Sequence::new(v).unwrap())
}

fn arb_theta() -> impl Strategy<Value = ExactNumber> {
    prop_oneof![
        (1..=50i64, 1..=50i64).prop_map(|(p, q)| ExactNumber::rational(p, q).unwrap()),
        (
            -4..=4i64,
            prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
            prop::sample::select(vec![2i64, 3, 5, 7, 13]),
            1..=5i64
        )
            .prop_filter_map("positive surd", |(a, b, d, c)| ExactNumber::surd(
                a, b, d, c
            )
            .ok()),
    ]
}

proptest! {
    #[test]
    fn trims_commute_with_prefixes(s in arb_sequence(400, 30), cut in 0usize..400) {
        let p = s.prefix(cut);
        prop_assert!(upper_trim(&p).is_prefix_of(&upper_trim(&s)));
        prop_assert!(lower_trim(&p).is_prefix_of(&lower_trim(&s)));
    }

    #[test]
    fn lower_trim_shifts_survivors(s in arb_sequence(300, 10)) {
        let expected: Vec<u64> = s.iter().filter(|&t| t > 1).map(|t| t - 1).collect();
        let trimmed = lower_trim(&s);
        prop_assert_eq!(trimmed.terms(), &expected[..]);
    }

    #[test]
    fn upper_trim_drops_one_per_distinct_value(s in arb_sequence(300, 40)) {
        let distinct: HashSet<u64> = s.iter().collect();
        prop_assert_eq!(upper_trim(&s).len(), s.len() - distinct.len());
    }

    #[test]
    fn ranks_count_up_per_value(s in arb_sequence(300, 8)) {
        let ann = annotate_ranks(&s);
        for v in 1..=8u64 {
            let ranks: Vec<u64> = ann.iter().filter(|a| a.value == v).map(|a| a.rank).collect();
            let expected: Vec<u64> = (1..=ranks.len() as u64).collect();
            prop_assert_eq!(ranks, expected);
        }
    }

    #[test]
    fn compare_affine_flips_under_swap(theta in arb_theta(), e1 in -50i64..50, f1 in -50i64..50, e2 in -50i64..50, f2 in -50i64..50) {
        let fwd = compare_affine(e1, f1, e2, f2, &theta);
        prop_assert_eq!(fwd.reverse(), compare_affine(e2, f2, e1, f1, &theta));
        prop_assert_eq!(compare_affine(e1, f1, e1, f1, &theta), std::cmp::Ordering::Equal);
    }

    #[test]
    fn emission_is_nondecreasing_with_correct_ranks(theta in arb_theta()) {
        let terms = generate_signature(&theta, 600).unwrap();
        let mut saw_tie = false;
        for w in terms.windows(2) {
            let ord = compare_affine(w[0].value as i64, w[0].rank as i64, w[1].value as i64, w[1].rank as i64, &theta);
            prop_assert_ne!(ord, std::cmp::Ordering::Greater);
            saw_tie |= ord == std::cmp::Ordering::Equal;
        }
        if !theta.is_rational() {
            prop_assert!(!saw_tie);
        }
        let values = Sequence::new(terms.iter().map(|t| t.value).collect()).unwrap();
        prop_assert_eq!(annotate_ranks(&values), terms);
    }

    #[test]
    fn intervals_refine_along_a_signature(theta in arb_theta(), a in 1usize..200, b in 1usize..200) {
        let (short, long) = (a.min(b), a.max(b));
        let s = signature_values(&theta, long).unwrap();
        let iv_short = theta_interval_from_prefix(&s.prefix(short));
        let iv_long = theta_interval_from_prefix(&s);
        prop_assert!(iv_long.is_subset_of(&iv_short));
        prop_assert!(iv_long.contains(&theta));
    }
}

#[test]
fn rational_ties_do_occur() {
    let theta = ExactNumber::rational(3, 2).unwrap();
    let terms = generate_signature(&theta, 50).unwrap();
    assert!(terms.windows(2).any(|w| {
        compare_affine(
            w[0].value as i64,
            w[0].rank as i64,
            w[1].value as i64,
            w[1].rank as i64,
            &theta,
        ) == std::cmp::Ordering::Equal
    }));
}

#[test]
fn trims_commute_with_prefixes_at_length_ten_thousand() {
    let mut rng = ChaCha8Rng::seed_from_u64(common::SEED);
    for _ in 0..5 {
        let terms: Vec<u64> = (0..10_000).map(|_| rng.gen_range(1..=200)).collect();
        let s = Sequence::new(terms).unwrap();
        let cut = rng.gen_range(0..10_000);
        assert!(upper_trim(&s.prefix(cut)).is_prefix_of(&upper_trim(&s)));
        assert!(lower_trim(&s.prefix(cut)).is_prefix_of(&lower_trim(&s)));
    }
}

#[test]
fn signatures_are_doubly_fractal_at_depth() {
    let mut rng = ChaCha8Rng::seed_from_u64(common::SEED ^ 1);
    let mut thetas = common::random_rationals(&mut rng, 10);
    thetas.extend(common::random_surds(&mut rng, 10));
    for theta in thetas {
        let s = signature_values(&theta, 5000).unwrap();
        let report = check_doubly_fractal_prefix(&s);
        assert!(report.is_ok(), "{theta}: {report:?}");
    }
}

/// Every branch path must be a signature prefix: non-empty interval, and the
/// interior witness regenerates it exactly.
#[test]
fn every_construction_path_is_a_signature_prefix() {
    for (n, blocks) in [(2, 9), (3, 8), (4, 7), (5, 6), (6, 5), (9, 4)] {
        let states = construct_type1(n, blocks, &BranchPolicy::All).unwrap();
        assert!(states.len() >= 2);
        for state in states {
            let s = state.sequence();
            let iv = theta_interval_from_prefix(&s);
            let mid = iv
                .witness()
                .unwrap_or_else(|| panic!("n={n} {:?}: EMPTY", state.branch_log()));
            let theta = ExactNumber::from_rational(mid).unwrap();
            assert_eq!(
                signature_values(&theta, s.len()).unwrap(),
                s,
                "n={n} {:?}",
                state.branch_log()
            );
            assert!(state.plans().iter().all(|p| {
                let strip =
                    |v: &[u64], x: u64| v.iter().copied().filter(|&y| y != x).collect::<Vec<_>>();
                strip(p.t.terms(), p.special) == strip(p.t_prime.terms(), 1)
            }));
        }
    }
}

#[test]
fn distinct_branch_paths_give_distinct_sequences() {
    let states = construct_type1(3, 8, &BranchPolicy::All).unwrap();
    let distinct: HashSet<Vec<u64>> = states.iter().map(|s| s.terms().to_vec()).collect();
    assert_eq!(distinct.len(), states.len());
}

#[test]
fn type2_is_the_rank_stream_for_ten_thousand_terms() {
    for policy in [
        BranchPolicy::default(),
        BranchPolicy::Fixed(Branch::FreshFirst),
        BranchPolicy::Explicit(vec![
            Branch::FreshFirst,
            Branch::OneFirst,
            Branch::FreshFirst,
        ]),
    ] {
        let type2 = translate_type2(3, 10_000, &policy).unwrap();
        assert_eq!(type2.len(), 10_000);
        let mut source = construct_type1(3, 2, &policy).unwrap().remove(0);
        let mut blocks = 2;
        while source.len() < 10_000 {
            blocks += 1;
            source = construct_type1(3, blocks, &policy).unwrap().remove(0);
        }
        assert_eq!(type2, rank_stream(&source.sequence()).prefix(10_000));
        assert!(check_doubly_fractal_prefix(&type2).is_ok());
    }
}

/// All reduced fractions in `(0, bound)` with denominator at most `max_den`,
/// walked down the Stern-Brocot tree.
fn stern_brocot(bound: i64, max_den: i64) -> Vec<BigRational> {
    let mut out = Vec::new();
    // (left, right) as (p, q) pairs; right = 1/0 stands for infinity
    let mut stack = vec![((0i64, 1i64), (1i64, 0i64))];
    while let Some(((lp, lq), (rp, rq))) = stack.pop() {
        let (mp, mq) = (lp + rp, lq + rq);
        if mq > max_den || mp >= bound * mq {
            // right subtree only grows the value, left only the denominator
            if mq <= max_den {
                stack.push(((lp, lq), (mp, mq)));
            }
            continue;
        }
        out.push(BigRational::new(BigInt::from(mp), BigInt::from(mq)));
        stack.push(((lp, lq), (mp, mq)));
        stack.push(((mp, mq), (rp, rq)));
    }
    out
}

#[test]
fn stern_brocot_enumeration_is_complete() {
    let got: HashSet<BigRational> = stern_brocot(3, 7).into_iter().collect();
    let mut expected = HashSet::new();
    for q in 1..=7i64 {
        for p in 1..3 * q {
            expected.insert(BigRational::new(BigInt::from(p), BigInt::from(q)));
        }
    }
    assert_eq!(got, expected);
}

/// Completeness on short prefixes: the recovered interval is empty exactly
/// when no rational reproduces the prefix. The orderings of a prefix of
/// length <= 12 change only at rationals with denominator <= 12, so scanning
/// denominators up to 60 visits every ordering cell and its endpoints.
#[test]
fn empty_interval_iff_no_rational_reproduces_prefix() {
    let mut rng = ChaCha8Rng::seed_from_u64(common::SEED ^ 2);
    let mut prefixes: Vec<Sequence> = Vec::new();
    let mut thetas = common::random_rationals(&mut rng, 15);
    thetas.extend(common::random_surds(&mut rng, 15));
    for theta in &thetas {
        let len = rng.gen_range(3..=12);
        let s = signature_values(theta, len).unwrap();
        prefixes.push(s.clone());
        // mutate one term to get (mostly) non-signature prefixes
        let mut t = s.into_terms();
        let i = rng.gen_range(1..t.len());
        t[i] = rng.gen_range(1..=t.iter().max().unwrap() + 1);
        prefixes.push(Sequence::new(t).unwrap());
    }
    for t in [
        &[1u64, 3][..],
        &[1, 1, 3],
        &[1, 2, 1, 1],
        &[1, 2, 3, 1, 2],
        &[1, 2, 2],
    ] {
        prefixes.push(Sequence::new(t.to_vec()).unwrap());
    }

    let mut empties = 0;
    for p in &prefixes {
        let iv = theta_interval_from_prefix(p);
        let bound = p.max_term().unwrap() as i64 + 1;
        let reproducing: Vec<BigRational> = stern_brocot(bound, 60)
            .into_iter()
            .filter(|r| {
                signature_values(&ExactNumber::from_rational(r.clone()).unwrap(), p.len()).unwrap()
                    == *p
            })
            .collect();
        for r in &reproducing {
            assert!(
                iv.contains_rational(r),
                "{p}: {r} reproduces but {iv} misses it"
            );
        }
        if iv.is_empty() {
            empties += 1;
            assert!(
                reproducing.is_empty(),
                "{p}: EMPTY but {} reproduces",
                reproducing[0]
            );
        } else {
            // a degenerate closed interval may hold only a tie point that reorders
            if iv.lower().map(|l| &l.value) != iv.upper().map(|h| &h.value) {
                assert!(
                    !reproducing.is_empty(),
                    "{p}: {iv} but no rational reproduces it"
                );
                let mid = ExactNumber::from_rational(iv.witness().unwrap()).unwrap();
                assert_eq!(signature_values(&mid, p.len()).unwrap(), *p);
            }
        }
    }
    assert!(empties > 0);
    assert!(matches!(
        theta_interval_from_prefix(&prefixes[0]),
        ThetaInterval::Range { .. }
    ));
}
