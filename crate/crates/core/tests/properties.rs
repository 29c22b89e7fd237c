use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tadet::orbits::TimedAutomorphism;
use tadet::pipeline::clock_realloc;
use tadet::rational::{q, qf, Q};
use tadet::regions::region_of;
use tadet::ta::automaton::TimedWord;
use tadet::ta::{parse_automaton, parse_word, to_nta};
use tadet::workbench::random::random_one_clock;

fn rational() -> impl Strategy<Value = Q> {
    (-40i64..40, 1i64..9).prop_map(|(n, d)| qf(n, d))
}

fn automorphism() -> impl Strategy<Value = TimedAutomorphism> {
    (prop::collection::btree_set(0i64..24, 1..4), prop::collection::btree_set(0i64..24, 1..4), -30i64..30).prop_filter_map(
        "same anchor count",
        |(src, img, base)| {
            (src.len() == img.len()).then(|| {
                let lifts = src.iter().zip(&img).map(|(s, g)| (qf(*s, 24), qf(base, 7) + qf(*g, 24))).collect();
                TimedAutomorphism::from_lifts(lifts).unwrap()
            })
        },
    )
}

proptest! {
    #[test]
    fn automorphisms_commute_with_unit_shift(pi in automorphism(), x in rational()) {
        prop_assert_eq!(pi.apply(&(&x + q(1))), pi.apply(&x) + q(1));
        prop_assert_eq!(pi.inverse().apply(&pi.apply(&x)), x);
    }

    #[test]
    fn automorphisms_are_monotone(pi in automorphism(), x in rational(), y in rational()) {
        prop_assert_eq!(x.cmp(&y), pi.apply(&x).cmp(&pi.apply(&y)));
        // integer differences survive
        prop_assert_eq!(pi.apply(&(&x + q(3))) - pi.apply(&x), q(3));
    }

    #[test]
    fn words_print_and_parse(deltas in prop::collection::vec((0i64..20, 1i64..7, 0usize..3), 0..6)) {
        let mut t = q(0);
        let mut w = TimedWord::default();
        for (n, d, s) in deltas {
            t = t + qf(n, d);
            w.push(["a", "b", "c"][s], t.clone());
        }
        prop_assert_eq!(parse_word(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn valuations_satisfy_their_region(v in prop::collection::vec((0i64..40, 1i64..6), 1..4), m in 0i64..4) {
        let v: Vec<Q> = v.into_iter().map(|(n, d)| qf(n, d)).collect();
        let r = region_of(&v, m);
        prop_assert!(r.to_constraint().eval(&v));
        prop_assert_eq!(region_of(&r.realiser(), m), r);
    }

    #[test]
    fn automata_print_and_parse(seed in any::<u64>(), n in 1usize..4, m in 0i64..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_one_clock(&mut rng, n, m, 2);
        let text = to_nta(&a);
        let b = parse_automaton(&text).unwrap();
        prop_assert_eq!(to_nta(&b), text);
    }

    #[test]
    fn reallocation_covers_the_support(
        mu in prop::collection::vec(0i64..6, 1..4),
        keep in prop::collection::vec(any::<bool>(), 4),
    ) {
        let mu: Vec<Q> = mu.into_iter().map(|n| qf(n, 2)).collect();
        let t = q(3);
        let mut support: Vec<Q> = mu.iter().zip(&keep).filter(|(_, k)| **k).map(|(u, _)| u.clone()).collect();
        support.push(t.clone());
        support.sort();
        support.dedup();
        prop_assume!(support.len() <= mu.len());
        let (out, resets) = clock_realloc(&mu, &support, &t).unwrap();
        for (i, u) in out.iter().enumerate() {
            prop_assert!(support.contains(u));
            prop_assert_eq!(resets.contains(&i), *u == t);
        }
    }
}
