//! Cross-module properties checked against independent oracles.
//!
//! The oracles here (reduced-word enumeration, the subword criterion for
//! Bruhat order, long division by `x_i - x_{i+1}`) are deliberately written
//! from scratch in this file and share no code with the library, so an
//! implementation bug cannot hide on both sides of an assertion.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use grothkit_core::laurent::{ExponentVector, LaurentPoly, Term};
use grothkit_core::perm::{HeckeWord, Permutation};
use grothkit_core::pipedream::{
    bottom_diagram, diagram_weight, diagram_word, hecke_subsets, transfer_diagram, BoxRef, Diagram,
};

// ---------------------------------------------------------------------------
// oracles

/// All reduced words of `w`, by peeling descents; independent of HeckeWord.
fn reduced_words(w: &Permutation, memo: &mut HashMap<Permutation, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
    if let Some(hit) = memo.get(w) {
        return hit.clone();
    }
    let mut words = Vec::new();
    if w.is_identity() {
        words.push(Vec::new());
    } else {
        for i in w.descent_positions() {
            let shorter = w.mult_right_s(i).unwrap();
            for mut word in reduced_words(&shorter, memo) {
                word.push(i);
                words.push(word);
            }
        }
    }
    memo.insert(w.clone(), words.clone());
    words
}

/// Ordinary (not 0-Hecke) right multiplication along a word.
fn apply_word(n: usize, word: &[usize]) -> Permutation {
    let mut line: Vec<usize> = (1..=n).collect();
    for &i in word {
        line.swap(i - 1, i);
    }
    Permutation::from_one_line(&line).unwrap()
}

/// Subword criterion: `u <= v` iff some reduced word of `v` contains a
/// reduced word of `u` as a subsequence. One reduced word of `v` suffices.
fn subword_leq(u: &Permutation, v: &Permutation, memo: &mut HashMap<Permutation, Vec<Vec<usize>>>) -> bool {
    let word = reduced_words(v, memo)
        .into_iter()
        .next()
        .expect("every permutation has a reduced word");
    let m = word.len();
    let target = u.length();
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != target {
            continue;
        }
        let picked: Vec<usize> = (0..m).filter(|k| mask & (1 << k) != 0).map(|k| word[k]).collect();
        if &apply_word(u.n(), &picked) == u {
            return true;
        }
    }
    false
}

/// Long division of `num` by `x_i - x_{i+1}`, eliminating the highest
/// `x_i` exponent first; panics if the division is not exact.
fn divide_by_x_difference(num: &LaurentPoly, i: usize) -> LaurentPoly {
    let n = num.n();
    let divisor = LaurentPoly::var_x(n, i)
        .sub(&LaurentPoly::var_x(n, i + 1))
        .unwrap();
    let mut rem = num.clone();
    let mut quo = LaurentPoly::zero(n);
    let mut guard = 0;
    while !rem.is_zero() {
        guard += 1;
        assert!(guard <= 100_000, "division oracle failed to terminate");
        let (exps, coeff) = rem
            .terms()
            .max_by_key(|(e, _)| e.x_exps()[i - 1])
            .map(|(e, c)| (e.clone(), c.clone()))
            .unwrap();
        let mut x = exps.x_exps().to_vec();
        x[i - 1] -= 1;
        let q = LaurentPoly::from_terms(
            n,
            [Term {
                coeff,
                exps: ExponentVector::new(x, exps.y_exps().to_vec()),
            }],
        )
        .unwrap();
        rem = rem.sub(&q.mul(&divisor).unwrap()).unwrap();
        quo = quo.add(&q).unwrap();
    }
    quo
}

fn random_monomial(rng: &mut StdRng, n: usize, span: i32) -> LaurentPoly {
    let exps = ExponentVector::new(
        (0..n).map(|_| rng.gen_range(-span..=span)).collect(),
        (0..n).map(|_| rng.gen_range(-span..=span)).collect(),
    );
    let mut coeff = rng.gen_range(-9i64..=9);
    if coeff == 0 {
        coeff = 1;
    }
    LaurentPoly::monomial(n, coeff, exps)
}

fn random_poly(rng: &mut StdRng, n: usize, span: i32, max_terms: usize) -> LaurentPoly {
    let count = rng.gen_range(0..=max_terms);
    let mut poly = LaurentPoly::zero(n);
    for _ in 0..count {
        poly = poly.add(&random_monomial(rng, n, span)).unwrap();
    }
    poly
}

// ---------------------------------------------------------------------------
// permutation properties

#[test]
fn bruhat_matches_subword_oracle() {
    let mut memo = HashMap::new();
    for n in 2..=4 {
        for u in Permutation::all(n) {
            for v in Permutation::all(n) {
                assert_eq!(
                    u.bruhat_leq(&v).unwrap(),
                    subword_leq(&u, &v, &mut memo),
                    "dot criterion disagrees with subword oracle at u={u}, v={v}"
                );
            }
        }
    }
}

#[test]
fn lifting_closure() {
    // if both u and v grow under s_i and u s_i <= v s_i, then u <= v
    for n in 2..=4 {
        for u in Permutation::all(n) {
            for v in Permutation::all(n) {
                for i in 1..n {
                    if u.is_descent(i) || v.is_descent(i) {
                        continue;
                    }
                    let us = u.mult_right_s(i).unwrap();
                    let vs = v.mult_right_s(i).unwrap();
                    if us.bruhat_leq(&vs).unwrap() {
                        assert!(
                            u.bruhat_leq(&v).unwrap(),
                            "lifting closure fails at u={u}, v={v}, i={i}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn reduced_words_evaluate_back() {
    let mut memo = HashMap::new();
    for w in Permutation::all(4) {
        let words = reduced_words(&w, &mut memo);
        assert!(!words.is_empty());
        for word in words {
            assert_eq!(word.len(), w.length());
            let hecke = HeckeWord::new(word.clone()).evaluate(4).unwrap();
            assert_eq!(hecke, w, "reduced word {word:?} does not evaluate to {w}");
            assert_eq!(apply_word(4, &word), w);
        }
    }
}

#[test]
fn demazure_product_is_associative() {
    let mut memo = HashMap::new();
    // extend * to pairs of permutations by folding a reduced word
    let mut star = |a: &Permutation, b: &Permutation| -> Permutation {
        let word = reduced_words(b, &mut memo).into_iter().next().unwrap();
        let mut acc = a.clone();
        for i in word {
            acc = acc.demazure_star(i).unwrap();
        }
        acc
    };

    let s3: Vec<Permutation> = Permutation::all(3).collect();
    for a in &s3 {
        for b in &s3 {
            for c in &s3 {
                let left = {
                    let ab = star(a, b);
                    star(&ab, c)
                };
                let right = {
                    let bc = star(b, c);
                    star(a, &bc)
                };
                assert_eq!(left, right, "associativity fails at ({a}, {b}, {c})");
            }
        }
    }

    let s4: Vec<Permutation> = Permutation::all(4).collect();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..200 {
        let a = &s4[rng.gen_range(0..s4.len())];
        let b = &s4[rng.gen_range(0..s4.len())];
        let c = &s4[rng.gen_range(0..s4.len())];
        let ab = star(a, b);
        let bc = star(b, c);
        assert_eq!(star(&ab, c), star(a, &bc));
    }
}

// ---------------------------------------------------------------------------
// operator properties

#[test]
fn divided_difference_matches_division_oracle() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..300 {
        let f = random_monomial(&mut rng, 3, 5);
        let i = rng.gen_range(1..3);
        let numerator = f.sub(&f.swap_x(i).unwrap()).unwrap();
        assert_eq!(
            f.divided_difference(i).unwrap(),
            divide_by_x_difference(&numerator, i)
        );
    }
    for _ in 0..100 {
        let f = random_poly(&mut rng, 3, 3, 6);
        let i = rng.gen_range(1..3);
        let numerator = f.sub(&f.swap_x(i).unwrap()).unwrap();
        assert_eq!(
            f.divided_difference(i).unwrap(),
            divide_by_x_difference(&numerator, i)
        );
    }
}

#[test]
fn isobaric_coxeter_relations() {
    let mut rng = StdRng::seed_from_u64(13);
    let pi = |f: &LaurentPoly, i: usize| f.isobaric_pi(i).unwrap();
    for _ in 0..40 {
        let f = random_poly(&mut rng, 4, 2, 5);
        for i in 1..4 {
            assert_eq!(pi(&pi(&f, i), i), pi(&f, i), "idempotence fails at i={i}");
        }
        assert_eq!(pi(&pi(&f, 1), 3), pi(&pi(&f, 3), 1), "commutation fails");
        for i in 1..3 {
            assert_eq!(
                pi(&pi(&pi(&f, i), i + 1), i),
                pi(&pi(&pi(&f, i + 1), i), i + 1),
                "braid relation fails at i={i}"
            );
        }
    }
}

#[test]
fn specialization_eliminates_x() {
    let mut cache = grothkit_core::GrothCache::new(3);
    for u in Permutation::all(3) {
        for v in Permutation::all(3) {
            let poly = cache.specialize(&u, &v).unwrap();
            for (exps, _) in poly.terms() {
                assert!(exps.x_exps().iter().all(|&e| e == 0));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// diagram properties

#[test]
fn bottom_diagrams_carry_reduced_words_up_to_rank_six() {
    for n in 1..=6 {
        for w in Permutation::all(n) {
            let d = bottom_diagram(&w);
            assert_eq!(d.len(), w.length());
            let word = diagram_word(&d);
            assert_eq!(word.len(), w.length());
            assert_eq!(word.evaluate(n).unwrap(), w, "word of D({w}) is not reduced");
        }
    }
}

#[test]
fn hecke_evaluation_is_monotone_on_chains() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..300 {
        let n = rng.gen_range(3..=5usize);
        let perms: Vec<Permutation> = Permutation::all(n).collect();
        let v = &perms[rng.gen_range(0..perms.len())];
        let boxes: Vec<BoxRef> = bottom_diagram(v).boxes().collect();
        let outer: Vec<BoxRef> = boxes.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
        let inner: Vec<BoxRef> = outer.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
        let outer = Diagram::new(n, outer).unwrap();
        let inner = Diagram::new(n, inner).unwrap();
        let big = diagram_word(&outer).evaluate(n).unwrap();
        let small = diagram_word(&inner).evaluate(n).unwrap();
        assert!(
            small.bruhat_leq(&big).unwrap(),
            "chain monotonicity fails inside D({v})"
        );
    }
}

#[test]
fn pruning_is_invisible_at_rank_four() {
    for u in Permutation::all(4) {
        for v in Permutation::all(4) {
            assert_eq!(
                hecke_subsets(&u, &v, false).unwrap(),
                hecke_subsets(&u, &v, true).unwrap(),
                "pruned enumeration differs at ({u}, {v})"
            );
        }
    }
}

#[test]
fn transfer_preserves_weight_and_word_small_rank() {
    for n in 2..=3 {
        for v in Permutation::all(n) {
            let Some(&r) = v.descent_positions().last() else {
                continue;
            };
            let v_short = v.mult_right_s(r).unwrap();
            let source: Vec<BoxRef> = bottom_diagram(&v_short).boxes().collect();
            let m = source.len();
            let mut images = HashSet::new();
            for mask in 0u32..(1 << m) {
                let chosen = source
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, &b)| b);
                let d = Diagram::new(n, chosen).unwrap();
                let image = transfer_diagram(&d, &v).unwrap();
                assert_eq!(image.len(), d.len());
                assert!(!image.contains(BoxRef::new(r, 1)));
                assert!(image.is_subset_of(&bottom_diagram(&v)));
                assert_eq!(
                    diagram_weight(&v_short, &d).unwrap(),
                    diagram_weight(&v, &image).unwrap()
                );
                assert_eq!(
                    diagram_word(&d).letters().to_vec(),
                    diagram_word(&image).letters().to_vec()
                );
                images.insert(serde_json::to_string(&image).unwrap());
            }
            assert_eq!(images.len(), 1 << m, "transfer map is not injective at v={v}");
        }
    }
}

#[test]
fn subset_sizes_never_undershoot_the_length() {
    for u in Permutation::all(3) {
        for v in Permutation::all(3) {
            for d in hecke_subsets(&u, &v, false).unwrap() {
                assert!(d.len() >= u.length());
            }
        }
    }
}

#[test]
fn coefficients_survive_a_big_integer_stress() {
    // (x1 + y1)^40 has coefficients far beyond u64; binomial row must match
    let n = 1;
    let base = LaurentPoly::var_x(n, 1).add(&LaurentPoly::var_y(n, 1)).unwrap();
    let mut power = LaurentPoly::one(n);
    for _ in 0..40 {
        power = power.mul(&base).unwrap();
    }
    assert_eq!(power.num_terms(), 41);
    let mut expected = BigInt::from(1);
    for (k, (exps, coeff)) in power.terms().enumerate() {
        assert_eq!(exps.x_exps()[0] as usize, k);
        assert_eq!(coeff, &expected);
        expected = expected * (40 - k) / (k + 1);
    }
}
