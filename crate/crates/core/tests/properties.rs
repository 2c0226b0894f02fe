use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use orbit_braid::abelian::{smith_normal_form, IntMatrix};
use orbit_braid::combing::{project_qn, section_sn, section_sprime, Comber};
use orbit_braid::presentation::{artin_presentation, orbit_presentation, Presentation};
use orbit_braid::word::{Generator, Letter, Word};
use proptest::prelude::*;

struct Fixture {
    presentation: Presentation,
    comber: Comber,
}

fn orbit(n: u32) -> &'static Fixture {
    static CACHE: OnceLock<Vec<Fixture>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        (1..=4)
            .map(|n| {
                let presentation = orbit_presentation(n).unwrap();
                let comber = Comber::for_presentation(&presentation).unwrap();
                Fixture { presentation, comber }
            })
            .collect()
    })[n as usize - 1]
}

fn artin(n: u32) -> &'static Fixture {
    static CACHE: OnceLock<Vec<Fixture>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        (2..=5)
            .map(|n| {
                let presentation = artin_presentation(n).unwrap();
                let comber = Comber::for_presentation(&presentation).unwrap();
                Fixture { presentation, comber }
            })
            .collect()
    })[n as usize - 2]
}

fn word_over(gens: &[Generator], raw: &[(usize, bool)]) -> Word {
    Word::reduce(raw.iter().map(|&(k, inv)| Letter::new(gens[k % gens.len()], if inv { -1 } else { 1 })))
}

fn raw_word(max_len: usize) -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..64, any::<bool>()), 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduce_is_idempotent(raw in raw_word(24)) {
        let gens = &orbit(3).presentation.generators;
        let w = word_over(gens, &raw);
        prop_assert_eq!(Word::reduce(w.letters().iter().copied()), w.clone());
        prop_assert!(w.letters().windows(2).all(|p| p[0] != p[1].inv()));
    }

    #[test]
    fn word_group_laws(a in raw_word(12), b in raw_word(12), c in raw_word(12)) {
        let gens = &orbit(3).presentation.generators;
        let (u, v, w) = (word_over(gens, &a), word_over(gens, &b), word_over(gens, &c));
        prop_assert_eq!(u.concat(&v).concat(&w), u.concat(&v.concat(&w)));
        prop_assert_eq!(u.invert().invert(), u.clone());
        prop_assert!(u.concat(&u.invert()).is_identity());
        for &g in gens {
            prop_assert_eq!(u.invert().exponent_sum(g), -u.exponent_sum(g));
        }
    }

    #[test]
    fn homomorphisms_respect_products(a in raw_word(10), b in raw_word(10), images in prop::collection::vec(raw_word(4), 4)) {
        let gens = &orbit(2).presentation.generators;
        let map: HashMap<Generator, Word> = gens.iter().zip(&images).map(|(&g, raw)| (g, word_over(gens, raw))).collect();
        let (u, v) = (word_over(gens, &a), word_over(gens, &b));
        let lhs = u.concat(&v).apply_homomorphism(&map).unwrap();
        let rhs = u.apply_homomorphism(&map).unwrap().concat(&v.apply_homomorphism(&map).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn text_syntax_round_trips(raw in raw_word(16)) {
        let gens = &orbit(3).presentation.generators;
        let w = word_over(gens, &raw);
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
    }

    #[test]
    fn scan_agrees_with_literal_rewriting(n in 2u32..=3, raw in raw_word(10)) {
        let f = orbit(n);
        let w = word_over(&f.presentation.generators, &raw);
        prop_assert_eq!(f.comber.comb(&w).unwrap(), f.comber.comb_by_rewriting(&w).unwrap());
    }

    #[test]
    fn scan_agrees_with_literal_rewriting_artin(n in 3u32..=4, raw in raw_word(10)) {
        let f = artin(n);
        let w = word_over(&f.presentation.generators, &raw);
        prop_assert_eq!(f.comber.comb(&w).unwrap(), f.comber.comb_by_rewriting(&w).unwrap());
    }

    #[test]
    fn comb_is_idempotent(n in 1u32..=4, raw in raw_word(10)) {
        let f = orbit(n);
        let nf = f.comber.comb(&word_over(&f.presentation.generators, &raw)).unwrap();
        prop_assert_eq!(f.comber.comb(&nf.flatten()).unwrap(), nf);
    }

    #[test]
    fn comb_is_multiplicative(n in 2u32..=4, a in raw_word(6), b in raw_word(6)) {
        let f = orbit(n);
        let gens = &f.presentation.generators;
        let (u, v) = (word_over(gens, &a), word_over(gens, &b));
        let split = f.comber.comb(&u).unwrap().flatten().concat(&f.comber.comb(&v).unwrap().flatten());
        prop_assert!(f.comber.words_equal(&u.concat(&v), &split).unwrap());
    }

    #[test]
    fn relator_insertion_short_words(n in 2u32..=4, a in raw_word(6), b in raw_word(6), pick in any::<prop::sample::Index>()) {
        let f = orbit(n);
        let gens = &f.presentation.generators;
        let (u, v) = (word_over(gens, &a), word_over(gens, &b));
        let r = pick.get(&f.presentation.relators);
        prop_assert_eq!(f.comber.comb(&u.concat(r).concat(&v)).unwrap(), f.comber.comb(&u.concat(&v)).unwrap());
    }

    #[test]
    fn relator_insertion_artin(n in 3u32..=5, a in raw_word(6), b in raw_word(6), pick in any::<prop::sample::Index>()) {
        let f = artin(n);
        let gens = &f.presentation.generators;
        let (u, v) = (word_over(gens, &a), word_over(gens, &b));
        let r = pick.get(&f.presentation.relators);
        prop_assert_eq!(f.comber.comb(&u.concat(r).concat(&v)).unwrap(), f.comber.comb(&u.concat(&v)).unwrap());
    }

    #[test]
    fn kernel_prefix_is_untouched(n in 2u32..=4, k in 2u32..=4, top in raw_word(12), rest in raw_word(12)) {
        // a level-k word followed by lower letters is already combed at level k
        let f = orbit(n);
        let k = k.min(n);
        let tower = f.comber.tower();
        let lower: Vec<Generator> = (1..k).flat_map(|j| tower.alphabet(j).to_vec()).collect();
        let a = word_over(tower.alphabet(k), &top);
        let b = word_over(&lower, &rest);
        let nf = f.comber.comb(&a.concat(&b)).unwrap();
        let nb = f.comber.comb(&b).unwrap();
        prop_assert_eq!(nf.level(k), &a);
        for j in 1..k {
            prop_assert_eq!(nf.level(j), nb.level(j));
        }
        for j in k + 1..=n {
            prop_assert!(nf.level(j).is_identity());
        }
    }

    #[test]
    fn sections_split_the_projection(n in 2u32..=4, raw in raw_word(20)) {
        let gens = &orbit(n - 1).presentation.generators;
        let w = word_over(gens, &raw);
        prop_assert_eq!(project_qn(&section_sn(&w), n).unwrap(), w.clone());
        prop_assert_eq!(project_qn(&section_sprime(&w, n).unwrap(), n).unwrap(), w);
    }

    #[test]
    fn theta_decomposition_is_stable(n in 1u32..=4, raw in raw_word(10)) {
        let f = orbit(n);
        let w = word_over(&f.presentation.generators, &raw);
        let (e, rem) = f.comber.theta_decompose(&w).unwrap();
        prop_assert_eq!(rem.exponent_sum(Generator::rho(1, 0)), 0);
        let (e2, rem2) = f.comber.theta_decompose(&rem).unwrap();
        prop_assert_eq!(e2, 0);
        prop_assert_eq!(f.comber.comb(&rem2).unwrap(), f.comber.comb(&rem).unwrap());
        let theta = orbit_braid::presentation::element_theta(n).unwrap();
        prop_assert!(f.comber.words_equal(&theta.pow(e).concat(&rem), &w).unwrap());
    }

    #[test]
    fn smith_form_verifies(rows in 0usize..5, cols in 0usize..5, seed in prop::collection::vec(-6i64..=6, 25)) {
        let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect()).collect();
        let m = if rows == 0 { IntMatrix::zeros(0, cols) } else { IntMatrix::from_rows(&data) };
        prop_assert!(smith_normal_form(&m).verify(&m));
    }

    #[test]
    fn smith_form_is_permutation_invariant(
        seed in prop::collection::vec(-9i64..=9, 16),
        rperm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
        cperm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let data: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| seed[i * 4 + j]).collect()).collect();
        let shuffled: Vec<Vec<i64>> = rperm.iter().map(|&i| cperm.iter().map(|&j| data[i][j]).collect()).collect();
        let d1: Vec<BigInt> = smith_normal_form(&IntMatrix::from_rows(&data)).d;
        let d2: Vec<BigInt> = smith_normal_form(&IntMatrix::from_rows(&shuffled)).d;
        prop_assert_eq!(d1, d2);
    }
}
