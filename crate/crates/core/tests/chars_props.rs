mod common;

use std::sync::Arc;

use igt_core::chars::{
    center_of_character, character_of_rep, decompose, det_char, dixon_schneider, ext_power_char,
    inner_product, sym_power_char, CharacterTable, ClassFunction, Decomposition,
};
use igt_core::grp::{is_subgroup_equal, ClosureMode, Element, FiniteGroup, DEFAULT_CAP};
use igt_core::repmod::{ext_power_rep, sym_power_rep, Rep};
use igt_core::CycElt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn projective_77b() -> Arc<FiniteGroup> {
    let gens: Vec<Element> = common::sigmas().into_iter().map(Element::Matrix).collect();
    Arc::new(FiniteGroup::closure(&gens, ClosureMode::Projective, DEFAULT_CAP).unwrap())
}

fn tables() -> Vec<(&'static str, Arc<FiniteGroup>, CharacterTable)> {
    let mut out: Vec<(&'static str, Arc<FiniteGroup>)> = vec![
        ("S3", common::s3()),
        ("C6", common::c6()),
        ("Q8", common::q8()),
        ("SL(2,3)", common::sl23()),
        ("77b projective", projective_77b()),
        ("77b linear", common::group_77b()),
    ];
    out.drain(..)
        .map(|(name, g)| {
            let t = dixon_schneider(&g).unwrap();
            (name, g, t)
        })
        .collect()
}

fn kronecker(i: usize, j: usize) -> BigRational {
    BigRational::from_integer(((i == j) as i64).into())
}

#[test]
fn orthogonality_and_degrees() {
    for (name, g, t) in tables() {
        assert_eq!(t.len(), g.num_classes(), "{name}");
        assert_eq!(t.degrees()[0], 1);
        assert!(
            t.irr(0).values().iter().all(CycElt::is_one),
            "{name}: trivial character first"
        );
        let sq: u64 = t.degrees().iter().map(|&d| d as u64 * d as u64).sum();
        assert_eq!(sq, g.order() as u64, "{name}");
        for i in 0..t.len() {
            for j in 0..t.len() {
                assert_eq!(
                    inner_product(&g, t.irr(i), t.irr(j)).unwrap(),
                    kronecker(i, j),
                    "{name} rows {i},{j}"
                );
            }
        }
        let n = t.conductor();
        for a in 0..g.num_classes() {
            for b in 0..g.num_classes() {
                let mut s = CycElt::zero(n);
                for chi in t.irreducibles() {
                    s = &s + &(chi.value(a) * &chi.value(b).conj());
                }
                let want = if a == b {
                    g.centralizer_order(a) as i64
                } else {
                    0
                };
                assert_eq!(s, CycElt::from_int(n, want), "{name} columns {a},{b}");
            }
        }
    }
}

#[test]
fn known_degrees() {
    let degrees: Vec<Vec<u32>> = tables()
        .into_iter()
        .take(4)
        .map(|(_, _, t)| t.degrees().to_vec())
        .collect();
    assert_eq!(degrees[0], vec![1, 1, 2]);
    assert_eq!(degrees[1], vec![1; 6]);
    assert_eq!(degrees[2], vec![1, 1, 1, 1, 2]);
    assert_eq!(degrees[3], vec![1, 1, 1, 2, 2, 2, 3]);
}

#[test]
fn decompose_inverts_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, g, t) in tables().into_iter().take(5) {
        for _ in 0..10 {
            let mult: Vec<u32> = (0..t.len()).map(|_| rng.gen_range(0..3)).collect();
            let d = Decomposition { mult: mult.clone() };
            assert_eq!(
                decompose(&g, &d.character(&t), &t).unwrap().mult,
                mult,
                "{name}"
            );
        }
    }
}

#[test]
fn top_exterior_power_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (name, g, t) in tables().into_iter().take(5) {
        for chi in t.irreducibles() {
            let d = chi.degree_int().unwrap() as u32;
            let det = ext_power_char(&g, chi, d);
            assert!(det.degree().is_one(), "{name}");
            for _ in 0..30 {
                let (a, b) = (rng.gen_range(0..g.order()), rng.gen_range(0..g.order()));
                if !g.commutes(a, b) {
                    continue;
                }
                assert_eq!(
                    det.at(&g, g.mul(a, b)),
                    &(det.at(&g, a) * det.at(&g, b)),
                    "{name}"
                );
            }
        }
    }
}

#[test]
fn power_characters_match_modules_on_77b() {
    let g = common::group_77b();
    let m = Arc::new(Rep::defining(g.clone()).unwrap());
    let chi = m.character();
    assert_eq!(chi.degree_int(), Some(6));
    let sym = sym_power_rep(&m, 2).unwrap();
    assert_eq!(sym_power_char(&g, &chi.conj(), 2), character_of_rep(&sym));
    let ext = ext_power_rep(&m, 2).unwrap();
    assert_eq!(ext_power_char(&g, &chi, 2), character_of_rep(&ext));
}

#[test]
fn det_character_matches_matrix_determinants_on_77b() {
    let g = common::group_77b();
    let t = dixon_schneider(&g).unwrap();
    let m = Rep::defining(g.clone()).unwrap();
    let dec = decompose(&g, &m.character(), &t).unwrap();
    let det = det_char(&g, &dec, &t);
    for e in 0..g.order() {
        assert_eq!(
            det.at(&g, e),
            &m.element_matrix(e)
                .det()
                .unwrap()
                .embed(det.conductor())
                .unwrap()
        );
    }
}

#[test]
fn center_of_defining_character_is_the_scalars() {
    let g = common::group_77b();
    let chi = character_of_rep(&Rep::defining(g.clone()).unwrap());
    let z = center_of_character(&g, &chi).unwrap();
    assert!(is_subgroup_equal(&z, &g.scalar_subgroup().unwrap()));
    assert_eq!(z.order(), 2);
}

#[test]
fn non_characters_are_rejected() {
    let g = common::s3();
    let t = dixon_schneider(&g).unwrap();
    let half = ClassFunction::new(vec![
        CycElt::from_int(6, 1),
        CycElt::from_int(6, 0),
        CycElt::from_int(6, 0),
    ])
    .unwrap();
    assert!(decompose(&g, &half, &t).is_err());
}
