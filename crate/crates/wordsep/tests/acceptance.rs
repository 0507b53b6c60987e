//! The acceptance gate: sixteen behavioral criteria, one test per
//! criterion, each printing a single verdict line with its timing
//! (visible with `--show-output`). Tolerances are pinned here, not
//! configurable, so a regression cannot be waved through.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use wordsep::afa::{
    bounded_machine, encoding_machine, set_machine, singleton_vs_set_machine,
    subtraction_machine, three_state_machine,
};
use wordsep::baseline::min_separating_dfa_size;
use wordsep::exactnum::{rat, ComplexFloat, Matrix, Rational, Vector};
use wordsep::freegroup::{
    in_derived1, in_derived2, pair_to_element, reduced_words_of_length,
};
use wordsep::mcqfa::{
    equal_count_final_gap, free_rotation_machine, free_rotation_product,
    random_real_orthogonal_machine, rotation_machine, spin_lift_machine, swap_pair_machine,
    tensor_machines,
};
use wordsep::wordmap::{build_separating_mcqfa, estimate_alpha, inner_product_identity_check,
    Su2Params};
use wordsep::words::{all_words_up_to, Word, WordPair};

fn verdict(n: u32, what: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("criterion {n:02} ({what}): pass in {elapsed:?} (budget {budget:?})");
    assert!(
        elapsed <= budget,
        "criterion {n} blew its {budget:?} budget: took {elapsed:?}"
    );
}

fn unary(n: usize) -> Word {
    Word::new(vec![0; n], 1).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let syms: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2)).collect();
    Word::new(syms, 2).unwrap()
}

/// Distinct random binary words, none equal to any in `avoid`.
fn random_distinct_words(
    rng: &mut ChaCha8Rng,
    count: usize,
    max_len: usize,
    avoid: &[Word],
) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::with_capacity(count);
    while out.len() < count {
        let w = random_word(rng, max_len);
        if !avoid.contains(&w) && !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

#[test]
fn criterion_01_unary_rotation_counter_floats() {
    let started = Instant::now();
    for d in 0..=20u32 {
        for t in 1..=20u32 {
            let m = rotation_machine(d, t).unwrap();
            let hit = m.run(&unary(d as usize)).unwrap().accept_probability;
            let miss = m
                .run(&unary((d + t) as usize))
                .unwrap()
                .accept_probability;
            assert!((hit - 1.0).abs() <= 1e-9, "d={d} t={t}: accept(a^d)={hit}");
            assert!(miss.abs() <= 1e-9, "d={d} t={t}: accept(a^(d+t))={miss}");
        }
    }
    verdict(1, "unary rotation counter", started, Duration::from_secs(1));
}

#[test]
fn criterion_02_swap_pair_final_states() {
    let started = Instant::now();
    let m = swap_pair_machine();
    let ab = Word::parse("ab", 2).unwrap();
    let ba = Word::parse("ba", 2).unwrap();
    let f_ab = m.run(&ab).unwrap().final_state;
    let f_ba = m.run(&ba).unwrap().final_state;
    let expect = |v: &Vector<ComplexFloat>, e0: f64, e1: f64, tag: &str| {
        assert!(
            (v.get(0) - ComplexFloat::new(e0, 0.0)).norm() <= 1e-12
                && (v.get(1) - ComplexFloat::new(e1, 0.0)).norm() <= 1e-12,
            "{tag}: final state {:?} differs from ({e0},{e1})",
            v.entries()
        );
    };
    expect(&f_ab, 0.0, 1.0, "ab");
    expect(&f_ba, 1.0, 0.0, "ba");
    verdict(2, "swap-pair final states", started, Duration::from_secs(1));
}

#[test]
fn criterion_03_real_orthogonal_doubled_word_blindness() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for trial in 0..1000 {
        let m = random_real_orthogonal_machine(&mut rng);
        let na = rng.gen_range(0..=3usize);
        let nb = rng.gen_range(0..=(6 - na));
        let mut blocks = vec![0u8; na];
        blocks.resize(na + nb, 1);
        let word_of = |order: &[u8]| {
            let syms: Vec<u8> = order.iter().flat_map(|&b| [b, b]).collect();
            Word::new(syms, 2).unwrap()
        };
        blocks.shuffle(&mut rng);
        let x = word_of(&blocks);
        blocks.shuffle(&mut rng);
        let y = word_of(&blocks);
        let gap = equal_count_final_gap(&m, &x, &y).unwrap();
        assert!(
            gap <= 1e-9,
            "trial {trial}: gap {gap} for x={} y={}",
            x.display_letters(),
            y.display_letters()
        );
    }
    verdict(
        3,
        "real machines blind to doubled equal-count words",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_04_affine_subtraction_counter_exact() {
    let started = Instant::now();
    for d in 0..=50u32 {
        for t in 1..=50u32 {
            let m = subtraction_machine(d, t).unwrap();
            let hit = m.run(&unary(d as usize)).unwrap().accept_probability;
            let miss = m
                .run(&unary((d + t) as usize))
                .unwrap()
                .accept_probability;
            assert!(hit.is_one(), "d={d} t={t}: accept(a^d) = {hit}");
            assert!(miss.is_zero(), "d={d} t={t}: accept(a^(d+t)) = {miss}");
        }
    }
    verdict(4, "affine subtraction counter", started, Duration::from_secs(5));
}

#[test]
fn criterion_05_exact_pair_separation_exhaustive() {
    let started = Instant::now();
    let words = all_words_up_to(2, 8);
    words.par_iter().for_each(|x| {
        for y in &words {
            if x == y {
                continue;
            }
            let m = encoding_machine(x, y).unwrap();
            let ax = m.run(x).unwrap().accept_probability;
            let ay = m.run(y).unwrap().accept_probability;
            assert!(
                ax.is_one() && ay.is_zero(),
                "x={} y={}: accept(x)={ax} accept(y)={ay}",
                x.display_letters(),
                y.display_letters()
            );
        }
    });
    verdict(
        5,
        "exact pair separation, all binary pairs to length 8",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_06_two_state_bounded_error_sweep() {
    let started = Instant::now();
    let xs = all_words_up_to(2, 5);
    let zs = all_words_up_to(2, 7);
    for k in [1u64, 10, 100] {
        let limit = rat((k + 1) as i64, (2 * k + 1) as i64);
        xs.par_iter().for_each(|x| {
            let m = bounded_machine(x, 2, k).unwrap();
            assert!(m.run(x).unwrap().accept_probability.is_one());
            for z in &zs {
                if z == x {
                    continue;
                }
                let az = m.run(z).unwrap().accept_probability;
                assert!(
                    az <= limit,
                    "k={k} x={} z={}: accept={az} > {limit}",
                    x.display_letters(),
                    z.display_letters()
                );
            }
        });
    }
    // Same construction on a ternary alphabet behaves identically.
    let xs3 = all_words_up_to(3, 3);
    let zs3 = all_words_up_to(3, 4);
    let limit = rat(2, 3);
    xs3.par_iter().for_each(|x| {
        let m = bounded_machine(x, 3, 1).unwrap();
        assert!(m.run(x).unwrap().accept_probability.is_one());
        for z in &zs3 {
            if z == x {
                continue;
            }
            let az = m.run(z).unwrap().accept_probability;
            assert!(az <= limit, "ternary x={} z={}: accept={az}",
                x.display_letters(), z.display_letters());
        }
    });
    verdict(
        6,
        "two-state one-sided error bound (k+1)/(2k+1)",
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_07_three_state_sharpened_bound_sweep() {
    let started = Instant::now();
    let xs = all_words_up_to(2, 5);
    let zs = all_words_up_to(2, 7);
    for k in [1u64, 10, 100] {
        let limit = rat(2, (2 * k + 1) as i64);
        xs.par_iter().for_each(|x| {
            let m = three_state_machine(x, 2, k).unwrap();
            assert!(m.run(x).unwrap().accept_probability.is_one());
            for z in &zs {
                if z == x {
                    continue;
                }
                let az = m.run(z).unwrap().accept_probability;
                assert!(
                    az <= limit,
                    "k={k} x={} z={}: accept={az} > {limit}",
                    x.display_letters(),
                    z.display_letters()
                );
            }
        });
    }
    verdict(
        7,
        "three-state sharpened bound 2/(2k+1)",
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_08_singleton_vs_set_exact_random() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for trial in 0..200 {
        let x = random_word(&mut rng, 8);
        let size = rng.gen_range(1..=4usize);
        let ys = random_distinct_words(&mut rng, size, 8, std::slice::from_ref(&x));
        let m = singleton_vs_set_machine(&x, &ys).unwrap();
        assert!(
            m.run(&x).unwrap().accept_probability.is_one(),
            "trial {trial}: accept(x) ≠ 1 for x={}",
            x.display_letters()
        );
        for y in &ys {
            let ay = m.run(y).unwrap().accept_probability;
            assert!(
                ay.is_zero(),
                "trial {trial}: accept({}) = {ay} ≠ 0",
                y.display_letters()
            );
        }
    }
    verdict(
        8,
        "one word against a random set, exactly",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_09_set_membership_bounds_random() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let zs = all_words_up_to(2, 7);
    let mut instances: Vec<Vec<Word>> = Vec::new();
    for _ in 0..100 {
        let size = rng.gen_range(1..=3usize);
        instances.push(random_distinct_words(&mut rng, size, 6, &[]));
    }
    let plain_limit = rat(2, 3);
    let sharp_limit = rat(2, 201);
    instances.par_iter().for_each(|xset| {
        let plain = set_machine(xset, 1, false).unwrap();
        let sharp = set_machine(xset, 100, true).unwrap();
        for x in xset {
            assert!(plain.run(x).unwrap().accept_probability.is_one());
            assert!(sharp.run(x).unwrap().accept_probability.is_one());
        }
        for z in &zs {
            if xset.contains(z) {
                continue;
            }
            let ap = plain.run(z).unwrap().accept_probability;
            let ash = sharp.run(z).unwrap().accept_probability;
            assert!(ap <= plain_limit, "plain accept({}) = {ap}", z.display_letters());
            assert!(ash <= sharp_limit, "sharp accept({}) = {ash}", z.display_letters());
        }
    });
    verdict(
        9,
        "set membership bounds, plain 2/3 and sharpened 2/201",
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_10_free_rotation_rejects_only_its_word() {
    let started = Instant::now();
    let xs = all_words_up_to(2, 5);
    let ys = all_words_up_to(2, 7);
    xs.par_iter().for_each(|x| {
        let m = free_rotation_machine(x).unwrap();
        assert!(
            m.run(x).unwrap().accept_probability.is_zero(),
            "accept({}) ≠ 0",
            x.display_letters()
        );
        for y in &ys {
            if y == x {
                continue;
            }
            let ay = m.run(y).unwrap().accept_probability;
            assert!(
                ay > Rational::zero(),
                "x={} y={}: accept = 0",
                x.display_letters(),
                y.display_letters()
            );
        }
    });
    verdict(
        10,
        "free-rotation machine zero only on its own word",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_11_tensor_set_machines_exact_and_float() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let zs = all_words_up_to(2, 6);
    let mut instances: Vec<Vec<Word>> = Vec::new();
    for _ in 0..50 {
        let size = rng.gen_range(1..=3usize);
        instances.push(random_distinct_words(&mut rng, size, 6, &[]));
    }
    instances.par_iter().for_each(|xset| {
        let exact_parts: Vec<_> = xset
            .iter()
            .map(|x| free_rotation_machine(x).unwrap())
            .collect();
        let exact = tensor_machines(&exact_parts, 0.0).unwrap();
        assert_eq!(exact.n_states(), 3usize.pow(xset.len() as u32));
        let float_parts: Vec<_> = xset
            .iter()
            .map(|x| spin_lift_machine(x).unwrap())
            .collect();
        let lifted = tensor_machines(&float_parts, 1e-9).unwrap();
        assert_eq!(lifted.n_states(), 2usize.pow(xset.len() as u32));
        for z in &zs {
            let e = exact.run(z).unwrap().accept_probability;
            let f = lifted.run(z).unwrap().accept_probability;
            if xset.contains(z) {
                assert!(e.is_zero(), "member {} got {e}", z.display_letters());
                assert!(f <= 1e-9, "member {} got float {f}", z.display_letters());
            } else {
                assert!(e > Rational::zero(), "non-member {} got 0", z.display_letters());
                assert!(f > 1e-6, "non-member {} got float {f}", z.display_letters());
            }
        }
    });
    verdict(
        11,
        "tensored set machines, exact oracle and float lift agree",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_12_derived_series_classification() {
    let started = Instant::now();
    let words = all_words_up_to(2, 6);
    let indexed: Vec<(usize, &Word)> = words.iter().enumerate().collect();
    indexed.par_iter().for_each(|&(i, x)| {
        for y in &words[i + 1..] {
            let omega = pair_to_element(x, y).unwrap();
            assert!(
                !in_derived2(&omega),
                "x={} y={}: quotient element in second derived subgroup",
                x.display_letters(),
                y.display_letters()
            );
            let pair = WordPair::new(x.clone(), y.clone()).unwrap();
            assert_eq!(
                in_derived1(&omega),
                pair.classify().is_hard(),
                "x={} y={}: commutator membership disagrees with classification",
                x.display_letters(),
                y.display_letters()
            );
        }
    });
    verdict(
        12,
        "derived-series membership matches pair classification",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_13_rotation_generators_are_free() {
    let started = Instant::now();
    let identity = Matrix::<Rational>::identity(3);
    for len in 1..=8usize {
        reduced_words_of_length(len)
            .par_iter()
            .for_each(|omega| {
                let product = free_rotation_product(omega);
                assert!(
                    product != identity,
                    "reduced word {omega} realized the identity rotation"
                );
            });
    }
    verdict(
        13,
        "no reduced word collapses the free rotation pair",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_14_inner_product_identity_random() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for trial in 0..1000 {
        let x = random_word(&mut rng, 8);
        let y = random_word(&mut rng, 8);
        let random_su2 = |rng: &mut ChaCha8Rng| {
            Su2Params {
                colatitude: rng.gen_range(0.0..PI),
                longitude: rng.gen_range(0.0..(2.0 * PI)),
                angle: rng.gen_range(0.0..PI),
            }
            .realize()
        };
        let ua = random_su2(&mut rng);
        let ub = random_su2(&mut rng);
        let psi: f64 = rng.gen_range(0.0..(2.0 * PI));
        let (p1, p2) = (rng.gen_range(0.0..(2.0 * PI)), rng.gen_range(0.0..(2.0 * PI)));
        let u0 = Vector::from(vec![
            ComplexFloat::from_polar(psi.cos(), p1),
            ComplexFloat::from_polar(psi.sin(), p2),
        ]);
        let err = inner_product_identity_check(&x, &y, &ua, &ub, &u0).unwrap();
        assert!(err <= 1e-10, "trial {trial}: identity error {err}");
    }
    verdict(
        14,
        "final-state inner product equals the quotient word map",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_15_word_map_regression_and_evidence_sweep() {
    let started = Instant::now();
    let x = Word::parse("ab", 2).unwrap();
    let y = Word::parse("ba", 2).unwrap();
    let omega = pair_to_element(&x, &y).unwrap();
    let estimate = estimate_alpha(&omega, 64, 60, 0).unwrap();
    assert!(
        estimate.alpha_hat >= PI / 2.0 - 1e-3,
        "regression pair only reached α̂ = {}",
        estimate.alpha_hat
    );
    let (_machine, residual) = build_separating_mcqfa(&x, &y, &estimate).unwrap();
    assert!(residual <= 1e-6, "certificate residual {residual}");

    // Evidence only: the sweep must run and stay in range, but low
    // estimates on other pairs are recorded, not failed.
    let words = all_words_up_to(2, 4);
    let mut hard_pairs = Vec::new();
    for (i, wx) in words.iter().enumerate() {
        for wy in &words[i + 1..] {
            let pair = WordPair::new(wx.clone(), wy.clone()).unwrap();
            if pair.classify().is_hard() {
                hard_pairs.push(pair);
            }
        }
    }
    assert_eq!(hard_pairs.len(), 34);
    let estimates: Vec<f64> = hard_pairs
        .iter()
        .map(|pair| {
            let omega = pair_to_element(&pair.x, &pair.y).unwrap();
            estimate_alpha(&omega, 16, 40, 0).unwrap().alpha_hat
        })
        .collect();
    for (pair, alpha) in hard_pairs.iter().zip(&estimates) {
        assert!(
            (0.0..=PI + 1e-9).contains(alpha),
            "{}|{}: α̂ = {alpha} out of range",
            pair.x.display_letters(),
            pair.y.display_letters()
        );
    }
    verdict(
        15,
        "word-map quarter-turn regression and evidence sweep",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_16_minimal_dfa_baseline() {
    let started = Instant::now();
    let ab = Word::parse("ab", 2).unwrap();
    let ba = Word::parse("ba", 2).unwrap();
    assert_eq!(min_separating_dfa_size(&ab, &ba, 4).unwrap(), Some(2));
    let a = Word::parse("a", 1).unwrap();
    let aa = Word::parse("aa", 1).unwrap();
    assert_eq!(min_separating_dfa_size(&a, &aa, 4).unwrap(), Some(2));
    verdict(
        16,
        "brute-force DFA baseline sizes",
        started,
        Duration::from_secs(5),
    );
}
