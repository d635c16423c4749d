use proptest::prelude::*;

use rearrange::contraction::{
    dist_sq, phi_from_setmap, phi_of, phi_value, Contraction, Fold, FoldChain, PlContraction,
};
use rearrange::experiments::translate_demo;
use rearrange::nd::{markuslem_check, Ball};
use rearrange::rearrange::{
    dirichlet_energy, equimeasurable_check, layer_cake_reconstruct, lp_distance_pow, polarize_grid,
    rearrange_step, GridFunction1D, StepFunction,
};
use rearrange::setmap::{polarize, solynin_1d, steiner_1d};
use rearrange::{q, ExactUnion, Orientation, Rational, SetMap1D};

fn rat(den: i64, range: i64) -> impl Strategy<Value = Rational> {
    (-range * den..=range * den).prop_map(move |n| q(n, den))
}

fn union() -> impl Strategy<Value = ExactUnion> {
    prop::collection::vec((rat(8, 4), rat(8, 4)), 0..5).prop_map(|pairs| {
        ExactUnion::from_pairs(
            pairs
                .into_iter()
                .map(|(a, b)| if a <= b { (a, b) } else { (b, a) }),
        )
    })
}

fn interval() -> impl Strategy<Value = ExactUnion> {
    (rat(8, 4), 1i64..32).prop_map(|(a, len)| ExactUnion::interval(a.clone(), a + q(len, 8)))
}

fn orientation() -> impl Strategy<Value = Orientation> {
    prop_oneof![Just(Orientation::Positive), Just(Orientation::Negative)]
}

fn union_map() -> impl Strategy<Value = SetMap1D<Rational>> {
    (rat(4, 3), orientation(), 0..4u8).prop_map(|(c, o, k)| match k {
        0 => SetMap1D::reflection(c),
        1 => SetMap1D::polarization(c, o),
        2 => SetMap1D::steiner(c),
        _ => SetMap1D::solynin(c, o),
    })
}

fn any_map() -> impl Strategy<Value = SetMap1D<Rational>> {
    prop_oneof![
        union_map(),
        (rat(4, 3), 1i64..8).prop_map(|(c, b)| SetMap1D::brock(c, q(b, 8)).unwrap())
    ]
}

fn step_function() -> impl Strategy<Value = StepFunction<Rational, ExactUnion>> {
    (
        prop::collection::vec(union(), 1..4),
        prop::collection::btree_set(1i64..10, 1..4),
    )
        .prop_map(|(pieces, levels)| {
            let mut levels: Vec<Rational> = levels.into_iter().map(|k| q(k, 1)).collect();
            levels.reverse();
            let k = levels.len().min(pieces.len());
            StepFunction::from_pieces(levels[..k].to_vec(), pieces[..k].to_vec()).unwrap()
        })
}

fn fold() -> impl Strategy<Value = Fold<Rational>> {
    ((-2i64..=2, -2i64..=2), rat(4, 2), orientation())
        .prop_filter("nonzero normal", |((a, b), _, _)| *a != 0 || *b != 0)
        .prop_map(|((a, b), c, o)| Fold::new(vec![q(a, 1), q(b, 1)], c, o).unwrap())
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rat(8, 3), 2)
}

fn grid_function() -> impl Strategy<Value = GridFunction1D<Rational>> {
    (-8i64..=0, prop::collection::vec(0i64..=5, 1..12)).prop_map(|(o, v)| {
        GridFunction1D::new(q(o, 2), q(1, 2), v.into_iter().map(|x| q(x, 1)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn union_measure_is_inclusion_exclusion(a in union(), b in union()) {
        prop_assert_eq!(a.union(&b).measure() + a.intersect(&b).measure(), a.measure() + b.measure());
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert!(a.subtract(&b).intersect(&b).measure() == q(0, 1));
    }

    #[test]
    fn union_json_round_trip(a in union()) {
        let text = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(rearrange::io::from_json::<ExactUnion>(&text).unwrap(), a);
    }

    #[test]
    fn union_maps_preserve_measure_and_order(map in union_map(), a in union(), extra in union()) {
        let b = a.union(&extra);
        let (ia, ib) = (map.apply(&a).unwrap(), map.apply(&b).unwrap());
        prop_assert_eq!(ia.measure(), a.measure());
        prop_assert!(ia.is_essential_subset(&ib));
    }

    #[test]
    fn brock_preserves_measure_on_intervals(c in rat(4, 3), b in 1i64..8, a in interval()) {
        let map = SetMap1D::brock(c, q(b, 8)).unwrap();
        prop_assert_eq!(map.apply(&a).unwrap().measure(), a.measure());
    }

    #[test]
    fn polarization_is_idempotent(a in union(), c in rat(4, 3), o in orientation()) {
        let once = polarize(&a, &c, o);
        prop_assert_eq!(polarize(&once, &c, o), once);
    }

    #[test]
    fn steiner_is_a_centered_interval(a in union(), c in rat(4, 3)) {
        let s = steiner_1d(&a, &c);
        if a.measure() > q(0, 1) {
            prop_assert_eq!(s.len(), 1);
            prop_assert_eq!(s.components()[0].midpoint(), c);
        }
        prop_assert_eq!(s.measure(), a.measure());
    }

    #[test]
    fn solynin_keeps_the_right_part(a in union(), c in rat(4, 3)) {
        let s = solynin_1d(&a, &c);
        prop_assert!(a.clip_at_least(&c).is_essential_subset(&s));
        prop_assert_eq!(s.measure(), a.measure());
    }

    #[test]
    fn phi_is_recovered_from_the_set_map(map in any_map(), t in rat(4, 4), r in 1i64..12) {
        prop_assert_eq!(phi_from_setmap(&map, &t, &q(r, 4)).unwrap(), phi_value(&map, &t));
    }

    #[test]
    fn pl_composition_evaluates_pointwise(f in any_map(), g in any_map(), t in rat(8, 5)) {
        let (pf, pg) = (phi_of(&f), phi_of(&g));
        let h: PlContraction<Rational> = pf.compose(&pg);
        prop_assert!(h.is_one_lipschitz());
        prop_assert_eq!(h.eval(&t), pf.eval(&pg.eval(&t)));
    }

    #[test]
    fn folds_are_one_lipschitz(folds in prop::collection::vec(fold(), 1..5), x in point(), y in point()) {
        let chain = FoldChain::new(folds);
        prop_assert!(dist_sq(&chain.apply(&x), &chain.apply(&y)) <= dist_sq(&x, &y));
    }

    #[test]
    fn chains_identify_mirror_balls(folds in prop::collection::vec(fold(), 1..5), x in point(), r in 1i64..8) {
        let chain = FoldChain::new(folds);
        prop_assert!(markuslem_check(&chain, &Ball::new(x, q(r, 4)).unwrap()).unwrap());
    }

    #[test]
    fn step_rearrangement_bridge(map in union_map(), f in step_function(), g in step_function()) {
        let tf = rearrange_step(&map, &f).unwrap();
        prop_assert!(tf.essentially_eq(&layer_cake_reconstruct(&map, &f).unwrap()));
        prop_assert!(equimeasurable_check(&tf, &f));
        let tg = rearrange_step(&map, &g).unwrap();
        for p in [1, 2] {
            prop_assert!(lp_distance_pow(&tf, &tg, p) <= lp_distance_pow(&f, &g, p));
        }
    }

    #[test]
    fn monotone_step_rearrangement(map in union_map(), f in step_function(), extra in union()) {
        let g = f.map_sets(|s| s.union(&extra));
        prop_assert!(f.le(&g));
        prop_assert!(rearrange_step(&map, &f).unwrap().le(&rearrange_step(&map, &g).unwrap()));
    }

    #[test]
    fn grid_polarization_keeps_values_and_lowers_energy(f in grid_function(), k in -16i64..=16) {
        let c = q(k, 4);
        let p = polarize_grid(&f, &c).unwrap();
        prop_assert_eq!(p.nonzero_values_sorted(), f.nonzero_values_sorted());
        for e in [1, 2, 3] {
            prop_assert!(dirichlet_energy(&p, e) <= dirichlet_energy(&f, e));
        }
    }

    #[test]
    fn translation_by_two_polarizations(a in union(), shift in 0i64..40) {
        let r = translate_demo(&q(shift, 8), &a).unwrap();
        prop_assert!(r.equal);
        prop_assert_eq!(r.output(), &a.translate(&q(shift, 8)));
    }
}
