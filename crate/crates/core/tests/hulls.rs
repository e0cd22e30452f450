use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

use mpd_core::functional::{minkowski, minkowski_with_witness};
use mpd_core::hull::{in_lower_hull, in_upper_hull, membership, separate, HullSide, Membership};
use mpd_core::rat::{int, rat};
use mpd_core::sample;
use mpd_core::{ExtRat, FinitePoset, Rat, Valuation};

fn posets() -> Vec<FinitePoset> {
    vec![
        FinitePoset::chain(&["a", "b"]).unwrap(),
        FinitePoset::discrete(&["a", "b"]).unwrap(),
        FinitePoset::new(&["a", "b", "c"], &[("a", "b"), ("a", "c")], 16).unwrap(),
    ]
}

fn combination(gens: &[Valuation], weights: &[Rat]) -> Valuation {
    let mut out = Valuation::zero(gens[0].poset());
    for (w, g) in weights.iter().zip(gens) {
        out = out.add(&g.scale(w).unwrap()).unwrap();
    }
    out
}

fn random_weights(rng: &mut sample::SampleRng, n: usize) -> Vec<Rat> {
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| rat(w, total)).collect()
}

#[test]
fn separating_a_heavier_point_on_a_chain() {
    let p = FinitePoset::chain(&["a", "b"]).unwrap();
    let gens = vec![Valuation::new(&p, vec![rat(1, 2), int(0)]).unwrap()];
    let mu = Valuation::dirac(&p, "b").unwrap();
    let cert = separate(HullSide::Lower, &mu, &gens).unwrap();
    assert!(cert.verify(&mu, &gens).unwrap());
    // δ_b sits above the generator, so it is in the upper hull
    assert!(in_upper_hull(&mu, &gens).unwrap());
}

#[test]
fn minkowski_on_a_point() {
    let p = FinitePoset::discrete(&["a"]).unwrap();
    let gens = vec![Valuation::new(&p, vec![rat(1, 2)]).unwrap()];
    let a = Valuation::new(&p, vec![rat(1, 4)]).unwrap();
    assert_eq!(minkowski(&gens, &a).unwrap(), ExtRat::Fin(rat(1, 2)));
    let q = FinitePoset::discrete(&["a", "b"]).unwrap();
    let only_a = vec![Valuation::dirac(&q, "a").unwrap()];
    let b = Valuation::dirac(&q, "b").unwrap();
    let v = minkowski_with_witness(&only_a, &b).unwrap();
    assert_eq!(v.value, ExtRat::Inf);
    assert!(v.witness.is_none());
}

proptest! {
    #[test]
    fn membership_is_a_verified_dichotomy(seed in any::<u64>(), k in 0usize..3, upper in any::<bool>()) {
        let p = &posets()[k];
        let side = if upper { HullSide::Upper } else { HullSide::Lower };
        let mut rng = sample::rng(seed);
        let gens: Vec<Valuation> = (0..rng.gen_range(1..=3)).map(|_| sample::subprobability(&mut rng, p, 4)).collect();
        let mu = sample::subprobability(&mut rng, p, 4);
        match membership(side, &mu, &gens).unwrap() {
            Membership::Member(w) => {
                prop_assert!(w.iter().all(|x| *x >= Rat::zero()));
                prop_assert_eq!(w.iter().sum::<Rat>(), Rat::one());
                let c = combination(&gens, &w);
                let below = match side {
                    HullSide::Lower => mu.leq(&c).unwrap(),
                    HullSide::Upper => c.leq(&mu).unwrap(),
                };
                prop_assert!(below);
                prop_assert!(separate(side, &mu, &gens).is_err());
            }
            Membership::Separated(cert) => prop_assert!(cert.verify(&mu, &gens).unwrap()),
        }
    }

    #[test]
    fn convex_combinations_are_in_both_hulls(seed in any::<u64>(), k in 0usize..3) {
        let p = &posets()[k];
        let mut rng = sample::rng(seed);
        let gens: Vec<Valuation> = (0..3).map(|_| sample::subprobability(&mut rng, p, 4)).collect();
        let w = random_weights(&mut rng, 3);
        let c = combination(&gens, &w);
        prop_assert!(in_lower_hull(&c, &gens).unwrap());
        prop_assert!(in_upper_hull(&c, &gens).unwrap());
        let shrunk = c.scale(&sample::unit_rat(&mut rng, 4)).unwrap();
        prop_assert!(in_lower_hull(&shrunk, &gens).unwrap());
    }

    #[test]
    fn minkowski_is_sublinear_and_gauges_the_lower_hull(seed in any::<u64>(), k in 0usize..3) {
        let p = &posets()[k];
        let mut rng = sample::rng(seed);
        let gens: Vec<Valuation> = (0..rng.gen_range(1..=3)).map(|_| sample::subprobability(&mut rng, p, 4)).collect();
        let a = sample::subprobability(&mut rng, p, 4);
        let b = sample::subprobability(&mut rng, p, 4);
        let (na, nb) = (minkowski(&gens, &a).unwrap(), minkowski(&gens, &b).unwrap());
        prop_assert!(minkowski(&gens, &a.add(&b).unwrap()).unwrap() <= na.clone() + nb);
        let r = rat(rng.gen_range(0..=5), rng.gen_range(1..=3));
        prop_assert_eq!(minkowski(&gens, &a.scale(&r).unwrap()).unwrap(), na.scale(&r));
        prop_assert_eq!(na <= ExtRat::one(), in_lower_hull(&a, &gens).unwrap());
    }
}
