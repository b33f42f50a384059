//! Projective representations through a central cover E → G.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::chars::{center_of_character, CharacterTable, ClassFunction, Decomposition};
use crate::cyclo::CycElt;
use crate::error::{Error, Result};
use crate::grp::{is_subgroup_equal, CentralKernel, ClosureMode, Element, FiniteGroup};
use crate::repmod::Rep;

/// Default bound on the number of candidate characters `pfr_classify` enumerates.
pub const PFR_CAP: usize = 1_000_000;

/// E with a central kernel H; G = E/H.
#[derive(Debug, Clone)]
pub struct CoverContext {
    pub group: Arc<FiniteGroup>,
    pub kernel: CentralKernel,
}

impl CoverContext {
    pub fn new(group: Arc<FiniteGroup>, kernel: CentralKernel) -> CoverContext {
        CoverContext { group, kernel }
    }

    pub fn quotient_order(&self) -> usize {
        self.group.order() / self.kernel.subgroup().order()
    }

    /// The Schur-cover requirement H ⊆ E′ ∩ Z(E).
    pub fn check_schur_cover(&self) -> Result<()> {
        if !self.kernel.in_derived_subgroup(&self.group) {
            return Err(Error::Precondition(
                "kernel is not contained in the derived subgroup".into(),
            ));
        }
        Ok(())
    }
}

/// ρ(h) is scalar for every h ∈ H.
pub fn is_p_projective(r: &Rep, ctx: &CoverContext) -> bool {
    ctx.kernel
        .subgroup()
        .members()
        .iter()
        .all(|&h| r.element_matrix(h).as_scalar().is_some())
}

/// Values μ(h)/μ(1) over H.
fn central_character(g: &FiniteGroup, mu: &ClassFunction, ctx: &CoverContext) -> Vec<CycElt> {
    let dinv = mu.degree().inv().expect("irreducible of degree zero");
    ctx.kernel
        .subgroup()
        .members()
        .iter()
        .map(|&h| mu.at(g, h) * &dinv)
        .collect()
}

/// All constituents restrict to H through the same central character.
pub fn char_is_p_projective(
    dec: &Decomposition,
    table: &CharacterTable,
    ctx: &CoverContext,
) -> bool {
    let mut seen: Option<Vec<CycElt>> = None;
    for (i, _) in dec.constituents() {
        let c = central_character(&ctx.group, table.irr(i), ctx);
        match &seen {
            Some(s) if *s != c => return false,
            Some(_) => {}
            None => seen = Some(c),
        }
    }
    true
}

/// Z(χ) = H.
pub fn is_projectively_faithful(chi: &ClassFunction, ctx: &CoverContext) -> Result<bool> {
    let z = center_of_character(&ctx.group, chi)?;
    Ok(is_subgroup_equal(&z, ctx.kernel.subgroup()))
}

/// twist[ε][μ] = index of ε·μ in the table, for each linear ε.
fn twist_table(table: &CharacterTable) -> Result<Vec<Vec<usize>>> {
    let index: HashMap<&[CycElt], usize> = table
        .irreducibles()
        .iter()
        .enumerate()
        .map(|(i, c)| (c.values(), i))
        .collect();
    table
        .linear_characters()
        .into_iter()
        .map(|e| {
            (0..table.len())
                .map(|m| {
                    let prod = table.irr(e).mul(table.irr(m))?;
                    index.get(prod.values()).copied().ok_or_else(|| {
                        Error::Invariant("twist of an irreducible is not irreducible".into())
                    })
                })
                .collect()
        })
        .collect()
}

/// Lexicographically least multiplicity vector in the twisting orbit.
pub fn twist_representative(dec: &Decomposition, table: &CharacterTable) -> Result<Decomposition> {
    Ok(orbit_min(&dec.mult, &twist_table(table)?))
}

fn orbit_min(mult: &[u32], twists: &[Vec<usize>]) -> Decomposition {
    let mut best = mult.to_vec();
    for tw in twists {
        let mut v = vec![0; mult.len()];
        for (m, &k) in mult.iter().enumerate() {
            v[tw[m]] += k;
        }
        if v < best {
            best = v;
        }
    }
    Decomposition { mult: best }
}

/// p-projectively faithful characters of degree `dim`, modulo linear twists.
pub fn pfr_classify(
    ctx: &CoverContext,
    table: &CharacterTable,
    dim: u32,
    cap: usize,
) -> Result<Vec<Decomposition>> {
    let g = &ctx.group;
    let twists = twist_table(table)?;
    // Irreducibles grouped by their central character on H; constituents of a
    // p-projective character all lie in one group.
    let mut groups: Vec<(Vec<CycElt>, Vec<usize>)> = Vec::new();
    for i in 0..table.len() {
        let c = central_character(g, table.irr(i), ctx);
        match groups.iter_mut().find(|(k, _)| *k == c) {
            Some((_, v)) => v.push(i),
            None => groups.push((c, vec![i])),
        }
    }
    let mut found = BTreeSet::new();
    let mut count = 0usize;
    for (_, members) in &groups {
        let mut mult = vec![0u32; table.len()];
        let mut err = None;
        enumerate(members, table.degrees(), dim, 0, &mut mult, &mut |m| {
            count += 1;
            if count > cap {
                err = Some(Error::CapExceeded {
                    cap,
                    what: "p-projective candidate characters".into(),
                });
                return false;
            }
            let dec = Decomposition { mult: m.to_vec() };
            match is_projectively_faithful(&dec.character(table), ctx) {
                Ok(true) => {
                    found.insert(orbit_min(m, &twists).mult);
                }
                Ok(false) => {}
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            }
            true
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(found
        .into_iter()
        .map(|mult| Decomposition { mult })
        .collect())
}

fn enumerate(
    members: &[usize],
    degrees: &[u32],
    remaining: u32,
    at: usize,
    mult: &mut Vec<u32>,
    visit: &mut dyn FnMut(&[u32]) -> bool,
) -> bool {
    if remaining == 0 {
        return visit(mult);
    }
    if at == members.len() {
        return true;
    }
    let i = members[at];
    let d = degrees[i];
    let mut k = 0;
    loop {
        mult[i] = k;
        if !enumerate(members, degrees, remaining - k * d, at + 1, mult, visit) {
            mult[i] = 0;
            return false;
        }
        if (k + 1) * d > remaining {
            break;
        }
        k += 1;
    }
    mult[i] = 0;
    true
}

/// The image of a matrix representation in PGL(V).
pub fn projective_image(r: &Rep, cap: usize) -> Result<FiniteGroup> {
    let gens: Vec<Element> = r
        .generator_matrices()
        .iter()
        .cloned()
        .map(Element::Matrix)
        .collect();
    FiniteGroup::closure(&gens, ClosureMode::Projective, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::{character_of_rep, decompose, dixon_schneider};
    use crate::grp::DEFAULT_CAP;
    use crate::linalg::Mat;

    fn mat(n: u32, rows: &[&[&str]]) -> Mat {
        Mat::parse(
            n,
            &rows
                .iter()
                .map(|r| r.iter().map(|s| s.to_string()).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn q8() -> Arc<FiniteGroup> {
        let i = mat(4, &[&["z", "0"], &["0", "-z"]]);
        let j = mat(4, &[&["0", "1"], &["-1", "0"]]);
        Arc::new(
            FiniteGroup::closure(
                &[Element::Matrix(i), Element::Matrix(j)],
                ClosureMode::Linear,
                DEFAULT_CAP,
            )
            .unwrap(),
        )
    }

    fn center_ctx(g: &Arc<FiniteGroup>) -> CoverContext {
        let z = g.scalar_subgroup().unwrap();
        CoverContext::new(g.clone(), CentralKernel::new(g, z.generators()).unwrap())
    }

    #[test]
    fn q8_regular_is_not_p_projective() {
        let g = q8();
        let ctx = center_ctx(&g);
        assert_eq!(ctx.quotient_order(), 4);
        assert!(ctx.check_schur_cover().is_ok());
        let reg = Rep::regular(g.clone(), 4).unwrap();
        assert!(!is_p_projective(&reg, &ctx));
        let table = dixon_schneider(&g).unwrap();
        let dec = decompose(&g, &character_of_rep(&reg), &table).unwrap();
        assert!(!char_is_p_projective(&dec, &table, &ctx));
        let def = Rep::defining(g.clone()).unwrap();
        assert!(is_p_projective(&def, &ctx));
        assert!(is_projectively_faithful(&character_of_rep(&def), &ctx).unwrap());
    }

    #[test]
    fn q8_classes() {
        let g = q8();
        let ctx = center_ctx(&g);
        let table = dixon_schneider(&g).unwrap();
        let two = pfr_classify(&ctx, &table, 2, PFR_CAP).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].mult, vec![0, 0, 0, 0, 1]);
        assert!(pfr_classify(&ctx, &table, 1, PFR_CAP).unwrap().is_empty());
        assert!(matches!(
            pfr_classify(&ctx, &table, 4, 1),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn trivial_and_cyclic() {
        let c4 = Arc::new(
            FiniteGroup::closure(
                &[Element::Matrix(mat(4, &[&["z"]]))],
                ClosureMode::Linear,
                DEFAULT_CAP,
            )
            .unwrap(),
        );
        let ctx = CoverContext::new(c4.clone(), CentralKernel::trivial());
        let r = Rep::defining(c4.clone()).unwrap();
        assert!(is_p_projective(&r, &ctx));
        // Every linear character has Z(χ) = E, so it is never projectively faithful on E ≠ 1.
        assert!(!is_projectively_faithful(&character_of_rep(&r), &ctx).unwrap());
        let triv = ClassFunction::trivial(&c4, 4);
        assert!(!is_projectively_faithful(&triv, &ctx).unwrap());
    }

    #[test]
    fn projective_images() {
        let g = Arc::new(
            FiniteGroup::closure(
                &[Element::Matrix(mat(4, &[&["1", "0"], &["0", "-1"]]))],
                ClosureMode::Linear,
                DEFAULT_CAP,
            )
            .unwrap(),
        );
        assert_eq!(
            projective_image(&Rep::defining(g).unwrap(), DEFAULT_CAP)
                .unwrap()
                .order(),
            2
        );
        let s = Arc::new(
            FiniteGroup::closure(
                &[Element::Matrix(mat(4, &[&["z", "0"], &["0", "z"]]))],
                ClosureMode::Linear,
                DEFAULT_CAP,
            )
            .unwrap(),
        );
        assert_eq!(s.order(), 4);
        assert_eq!(
            projective_image(&Rep::defining(s).unwrap(), DEFAULT_CAP)
                .unwrap()
                .order(),
            1
        );
    }
}
