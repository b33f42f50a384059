mod common;

use igt_core::grp::{projective_normalize, ClosureMode, Element, FiniteGroup, DEFAULT_CAP};
use igt_core::CycElt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn groups() -> Vec<(&'static str, std::sync::Arc<FiniteGroup>)> {
    vec![
        ("S3", common::s3()),
        ("C6", common::c6()),
        ("Q8", common::q8()),
        ("SL(2,3)", common::sl23()),
        ("77b", common::group_77b()),
    ]
}

#[test]
fn fixture_orders() {
    let orders: Vec<usize> = groups().iter().map(|(_, g)| g.order()).collect();
    assert_eq!(orders, vec![6, 6, 8, 24, 768]);
}

#[test]
fn products_stay_in_the_table() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (name, g) in groups() {
        for _ in 0..200 {
            let (a, b) = (rng.gen_range(0..g.order()), rng.gen_range(0..g.order()));
            let ab = g.element(a).mul(g.element(b));
            assert_eq!(g.index_of(&ab), Some(g.mul(a, b)), "{name}");
        }
    }
}

#[test]
fn class_equation() {
    for (name, g) in groups() {
        let sizes: Vec<usize> = g.classes().iter().map(|c| c.size()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), g.order(), "{name}");
        assert!(sizes.iter().all(|s| g.order() % s == 0), "{name}");
        for c in g.classes() {
            assert_eq!(
                g.centralizer_order(g.class_of(c.representative)) * c.size(),
                g.order()
            );
        }
    }
}

#[test]
fn words_reevaluate() {
    for (name, g) in groups() {
        for i in 0..g.order() {
            assert_eq!(g.eval_word(g.word(i)).unwrap(), i, "{name}");
            assert_eq!(g.index_of(&g.realize_word(i)), Some(i), "{name}");
        }
    }
}

#[test]
fn projective_normalization_ignores_scalars() {
    let g = common::group_77b();
    let scalars = [
        CycElt::from_int(24, -1),
        CycElt::zeta_pow(24, 5),
        CycElt::from_int(24, 3),
    ];
    for i in (0..g.order()).step_by(37) {
        let m = g.matrix(i).unwrap();
        for s in &scalars {
            assert_eq!(projective_normalize(&m.scale(s)), projective_normalize(m));
        }
    }
}

#[test]
fn projective_order_times_kernel() {
    for (name, g) in [
        ("C6", common::c6()),
        ("Q8", common::q8()),
        ("77b", common::group_77b()),
    ] {
        let gens: Vec<Element> = (0..g.num_generators())
            .map(|k| g.element(g.generator_index(k)).clone())
            .collect();
        let p = FiniteGroup::closure(&gens, ClosureMode::Projective, DEFAULT_CAP).unwrap();
        let s = g.scalar_subgroup().unwrap();
        assert_eq!(p.order() * s.order(), g.order(), "{name}");
    }
}
