#![allow(dead_code)]

use std::sync::Arc;

use igt_core::grp::{ClosureMode, Element, FiniteGroup, DEFAULT_CAP};
use igt_core::linalg::Mat;
use igt_core::repmod::{ext_power_rep, sym_power_rep, Rep};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn mat(n: u32, rows: &[&[&str]]) -> Mat {
    Mat::parse(
        n,
        &rows
            .iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

pub fn perm_group(gens: &[&[u32]]) -> Arc<FiniteGroup> {
    let gens: Vec<Element> = gens
        .iter()
        .map(|p| Element::perm_one_based(p).unwrap())
        .collect();
    Arc::new(FiniteGroup::closure(&gens, ClosureMode::Linear, DEFAULT_CAP).unwrap())
}

pub fn matrix_group(gens: Vec<Mat>) -> Arc<FiniteGroup> {
    let gens: Vec<Element> = gens.into_iter().map(Element::Matrix).collect();
    Arc::new(FiniteGroup::closure(&gens, ClosureMode::Linear, DEFAULT_CAP).unwrap())
}

pub fn s3() -> Arc<FiniteGroup> {
    perm_group(&[&[2, 1, 3], &[2, 3, 1]])
}

pub fn c6() -> Arc<FiniteGroup> {
    matrix_group(vec![mat(6, &[&["z", "0"], &["0", "z^5"]])])
}

pub fn q8() -> Arc<FiniteGroup> {
    matrix_group(vec![
        mat(4, &[&["z", "0"], &["0", "-z"]]),
        mat(4, &[&["0", "1"], &["-1", "0"]]),
    ])
}

/// SL(2,3) permuting the nonzero vectors of F_3².
pub fn sl23() -> Arc<FiniteGroup> {
    perm_group(&[&[4, 8, 3, 7, 2, 6, 1, 5], &[6, 3, 1, 7, 4, 2, 8, 5]])
}

/// The five 77b generators, transposed into the column convention.
pub fn sigmas() -> Vec<Mat> {
    let raw: [&[&[&str]]; 5] = [
        &[
            &["0", "-1", "0", "0", "0", "0"],
            &["-1", "0", "0", "0", "0", "0"],
            &["0", "0", "0", "-1", "0", "0"],
            &["0", "0", "-1", "0", "0", "0"],
            &["0", "0", "0", "0", "1", "0"],
            &["0", "0", "0", "0", "0", "1"],
        ],
        &[
            &["0", "0", "0", "-1", "0", "0"],
            &["0", "1", "0", "0", "0", "0"],
            &["1", "0", "0", "0", "0", "0"],
            &["0", "0", "-1", "0", "0", "0"],
            &["0", "0", "0", "0", "1/2*z^6-1/2", "-1/2*z^6-1/2"],
            &["0", "0", "0", "0", "-1/2*z^6+1/2", "-1/2*z^6-1/2"],
        ],
        &[
            &["0", "0", "1", "0", "0", "0"],
            &["0", "0", "0", "-1", "0", "0"],
            &["-1", "0", "0", "0", "0", "0"],
            &["0", "1", "0", "0", "0", "0"],
            &["0", "0", "0", "0", "z^6", "0"],
            &["0", "0", "0", "0", "0", "-z^6"],
        ],
        &[
            &["1/2", "-1/2", "-1/2", "-1/2", "0", "0"],
            &["-1/2", "-1/2", "-1/2", "1/2", "0", "0"],
            &["-1/2", "-1/2", "1/2", "-1/2", "0", "0"],
            &["-1/2", "1/2", "-1/2", "-1/2", "0", "0"],
            &[
                "0",
                "0",
                "0",
                "0",
                "-1/2*z^5+1/2*z^3+1/2*z",
                "-1/2*z^5-1/2*z^3+1/2*z",
            ],
            &[
                "0",
                "0",
                "0",
                "0",
                "1/2*z^5+1/2*z^3-1/2*z",
                "1/2*z^5-1/2*z^3-1/2*z",
            ],
        ],
        &[
            &["-1/2", "-1/2", "1/2", "-1/2", "0", "0"],
            &["-1/2", "-1/2", "-1/2", "1/2", "0", "0"],
            &["1/2", "-1/2", "-1/2", "-1/2", "0", "0"],
            &["-1/2", "1/2", "-1/2", "-1/2", "0", "0"],
            &["0", "0", "0", "0", "-1", "0"],
            &["0", "0", "0", "0", "0", "-1"],
        ],
    ];
    raw.iter().map(|m| mat(24, m).transpose()).collect()
}

pub fn group_77b() -> Arc<FiniteGroup> {
    matrix_group(sigmas())
}

/// Small fixture groups with a faithful module each.
pub fn fixture_modules() -> Vec<(&'static str, Arc<Rep>)> {
    let perm = |g: Arc<FiniteGroup>| Arc::new(Rep::permutation(g, 1).unwrap());
    let def = |g: Arc<FiniteGroup>| Arc::new(Rep::defining(g).unwrap());
    vec![
        ("S3", perm(s3())),
        ("C6", def(c6())),
        ("Q8", def(q8())),
        ("SL(2,3)", perm(sl23())),
    ]
}

/// A seeded module of dimension at most 12 over one of the fixture groups,
/// built from permutation, defining, regular, symmetric and exterior pieces.
pub fn random_module(seed: u64) -> Arc<Rep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (_, base) = fixture_modules().swap_remove(rng.gen_range(0..4));
    random_module_over(&base, &mut rng)
}

/// Two seeded modules over the same fixture group.
pub fn random_pair(seed: u64) -> (Arc<Rep>, Arc<Rep>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (_, base) = fixture_modules().swap_remove(rng.gen_range(0..4));
    (
        random_module_over(&base, &mut rng),
        random_module_over(&base, &mut rng),
    )
}

pub fn random_module_over(base: &Arc<Rep>, rng: &mut ChaCha8Rng) -> Arc<Rep> {
    let g = base.group().clone();
    let mut pieces: Vec<Rep> = Vec::new();
    let mut dim = 0;
    let parts = rng.gen_range(1..=3);
    for _ in 0..parts {
        let piece = match rng.gen_range(0..4) {
            0 => Rep::new(g.clone(), base.generator_matrices().to_vec()).unwrap(),
            1 if base.dim() <= 3 => sym_power_rep(base, 2).unwrap(),
            2 if base.dim() >= 2 && base.dim() <= 4 => ext_power_rep(base, 2).unwrap(),
            3 if g.order() <= 8 => Rep::regular(g.clone(), base.conductor()).unwrap(),
            _ => Rep::new(g.clone(), base.generator_matrices().to_vec()).unwrap(),
        };
        if dim + piece.dim() > 12 && !pieces.is_empty() {
            break;
        }
        dim += piece.dim();
        pieces.push(piece);
    }
    let mut acc = pieces.remove(0);
    for p in &pieces {
        acc = Rep::direct_sum(&acc, p).unwrap();
    }
    Arc::new(acc)
}
