//! Finite groups by explicit enumeration.
//!
//! Elements are indexed in breadth-first order from the identity (index 0).
//! Each element carries the word of generator indices that reaches it, and a
//! right-multiplication table by generators; general products walk the word
//! of the right factor through that table.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;

use crate::cyclo::CycElt;
use crate::error::{Error, Result};
use crate::linalg::Mat;

pub const DEFAULT_CAP: usize = 1_000_000;

/// A concrete group element: a permutation of {0..k-1} or an invertible matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Perm(Vec<u32>),
    Matrix(Mat),
}

impl Element {
    /// Permutation from 1-based images.
    pub fn perm_one_based(images: &[u32]) -> Result<Element> {
        let k = images.len();
        let mut seen = vec![false; k];
        let mut out = Vec::with_capacity(k);
        for &x in images {
            if x == 0 || x as usize > k || seen[x as usize - 1] {
                return Err(Error::Precondition(format!(
                    "{images:?} is not a permutation of 1..{k}"
                )));
            }
            seen[x as usize - 1] = true;
            out.push(x - 1);
        }
        Ok(Element::Perm(out))
    }

    fn identity_like(&self) -> Element {
        match self {
            Element::Perm(p) => Element::Perm((0..p.len() as u32).collect()),
            Element::Matrix(m) => Element::Matrix(Mat::identity(m.conductor(), m.rows())),
        }
    }

    /// Product in the order `self · other`; permutations compose as maps,
    /// `(a·b)(x) = a(b(x))`, so permutation matrices multiply the same way.
    pub fn mul(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Perm(a), Element::Perm(b)) => {
                Element::Perm(b.iter().map(|&x| a[x as usize]).collect())
            }
            (Element::Matrix(a), Element::Matrix(b)) => Element::Matrix(a * b),
            _ => panic!("mixed element realizations"),
        }
    }

    pub fn as_matrix(&self) -> Option<&Mat> {
        match self {
            Element::Matrix(m) => Some(m),
            Element::Perm(_) => None,
        }
    }

    pub fn as_perm(&self) -> Option<&[u32]> {
        match self {
            Element::Perm(p) => Some(p),
            Element::Matrix(_) => None,
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Perm(p) => write!(f, "Perm{:?}", p.iter().map(|x| x + 1).collect::<Vec<_>>()),
            Element::Matrix(m) => write!(f, "{m:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosureMode {
    Linear,
    Projective,
}

/// Scales a matrix so that its first nonzero entry (row-major) is 1.
pub fn projective_normalize(m: &Mat) -> Mat {
    match m.entries().iter().find(|e| !e.is_zero()) {
        Some(lead) if !lead.is_one() => m.scale(&lead.inv().expect("nonzero lead")),
        _ => m.clone(),
    }
}

#[derive(Debug, Clone)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub order: u32,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    mode: ClosureMode,
    generators: Vec<Element>,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    words: Vec<Vec<usize>>,
    parent: Vec<Option<(usize, usize)>>,
    right: Vec<usize>,
    powers: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    exponent: u64,
}

impl FiniteGroup {
    /// Breadth-first closure of the generators. In projective mode matrices
    /// are normalized before hashing, so the result is the image in PGL.
    pub fn closure(generators: &[Element], mode: ClosureMode, cap: usize) -> Result<FiniteGroup> {
        let Some(first) = generators.first() else {
            return Err(Error::Precondition("no generators given".into()));
        };
        let same_kind = generators.iter().all(|g| match (first, g) {
            (Element::Perm(a), Element::Perm(b)) => a.len() == b.len(),
            (Element::Matrix(a), Element::Matrix(b)) => {
                a.is_square() && (a.rows(), a.conductor()) == (b.rows(), b.conductor())
            }
            _ => false,
        });
        if !same_kind {
            return Err(Error::MixedRealizations);
        }
        let norm = |e: Element| match (mode, e) {
            (ClosureMode::Projective, Element::Matrix(m)) => {
                Element::Matrix(projective_normalize(&m))
            }
            (_, e) => e,
        };
        for g in generators {
            if let Element::Matrix(m) = g {
                if m.det()?.is_zero() {
                    return Err(Error::Precondition("generator matrix is singular".into()));
                }
            }
        }
        let gens: Vec<Element> = generators.iter().cloned().map(norm).collect();
        let ngens = gens.len();
        let id = first.identity_like();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut words = vec![vec![]];
        let mut parent = vec![None];
        let mut right = Vec::new();
        let mut i = 0;
        while i < elements.len() {
            for (g, gen) in gens.iter().enumerate() {
                let prod = norm(elements[i].mul(gen));
                let j = match index.get(&prod) {
                    Some(&j) => j,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::CapExceeded {
                                cap,
                                what: "group closure".into(),
                            });
                        }
                        let j = elements.len();
                        let mut w = words[i].clone();
                        w.push(g);
                        words.push(w);
                        parent.push(Some((i, g)));
                        index.insert(prod.clone(), j);
                        elements.push(prod);
                        j
                    }
                };
                right.push(j);
            }
            i += 1;
        }
        debug_assert_eq!(right.len(), elements.len() * ngens);
        let mut grp = FiniteGroup {
            mode,
            generators: gens,
            elements,
            index,
            words,
            parent,
            right,
            powers: vec![],
            inverse: vec![],
            classes: vec![],
            class_of: vec![],
            exponent: 1,
        };
        grp.compute_powers();
        grp.compute_classes();
        Ok(grp)
    }

    fn compute_powers(&mut self) {
        let n = self.order();
        let mut powers = Vec::with_capacity(n);
        for i in 0..n {
            let mut p = vec![0, i];
            while *p.last().unwrap() != 0 {
                let next = self.mul(*p.last().unwrap(), i);
                p.push(next);
            }
            p.pop();
            powers.push(p);
        }
        self.inverse = powers
            .iter()
            .map(|p| if p.len() == 1 { 0 } else { p[p.len() - 1] })
            .collect();
        self.exponent = powers
            .iter()
            .fold(1u64, |acc, p| acc.lcm(&(p.len() as u64)));
        self.powers = powers;
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        let mut class_id = vec![usize::MAX; n];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if class_id[start] != usize::MAX {
                continue;
            }
            let c = raw.len();
            class_id[start] = c;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for g in 0..self.generators.len() {
                    let y = self.conjugate_by_generator(x, g);
                    if class_id[y] == usize::MAX {
                        class_id[y] = c;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            raw.push(members);
        }
        let mut classes: Vec<ConjugacyClass> = raw
            .into_iter()
            .map(|members| ConjugacyClass {
                representative: members[0],
                order: self.powers[members[0]].len() as u32,
                members,
            })
            .collect();
        classes.sort_by_key(|c| (c.representative != 0, c.order, c.size(), c.representative));
        let mut class_of = vec![0; n];
        for (ci, c) in classes.iter().enumerate() {
            for &m in &c.members {
                class_of[m] = ci;
            }
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    /// g⁻¹·x·g for the generator g.
    fn conjugate_by_generator(&self, x: usize, g: usize) -> usize {
        let gi = self.generator_index(g);
        let ginv = if self.inverse.is_empty() {
            self.naive_inverse(gi)
        } else {
            self.inverse[gi]
        };
        self.right_gen(self.mul(ginv, x), g)
    }

    fn naive_inverse(&self, i: usize) -> usize {
        let mut p = i;
        let mut prev = 0;
        while p != 0 {
            prev = p;
            p = self.mul(p, i);
        }
        prev
    }

    pub fn mode(&self) -> ClosureMode {
        self.mode
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Element index of the g-th generator.
    pub fn generator_index(&self, g: usize) -> usize {
        self.right[g]
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Index of an element, normalizing first in projective mode.
    pub fn index_of(&self, e: &Element) -> Option<usize> {
        match (self.mode, e) {
            (ClosureMode::Projective, Element::Matrix(m)) => self
                .index
                .get(&Element::Matrix(projective_normalize(m)))
                .copied(),
            _ => self.index.get(e).copied(),
        }
    }

    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    /// The (element, generator) pair whose product first produced element i.
    pub fn parent(&self, i: usize) -> Option<(usize, usize)> {
        self.parent[i]
    }

    pub fn right_gen(&self, i: usize, g: usize) -> usize {
        self.right[i * self.generators.len() + g]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.words[b]
            .iter()
            .fold(a, |acc, &g| self.right_gen(acc, g))
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn conjugate(&self, x: usize, by: usize) -> usize {
        self.mul(self.mul(self.inverse[by], x), by)
    }

    pub fn element_order(&self, i: usize) -> u32 {
        self.powers[i].len() as u32
    }

    pub fn pow(&self, i: usize, k: i64) -> usize {
        let p = &self.powers[i];
        p[k.rem_euclid(p.len() as i64) as usize]
    }

    /// Index map e ↦ eᵏ.
    pub fn power_map(&self, k: i64) -> Vec<usize> {
        (0..self.order()).map(|i| self.pow(i, k)).collect()
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    /// Class index of (rep of class c)ᵏ.
    pub fn class_power(&self, c: usize, k: i64) -> usize {
        self.class_of[self.pow(self.classes[c].representative, k)]
    }

    pub fn centralizer_order(&self, c: usize) -> usize {
        self.order() / self.classes[c].size()
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order()
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Evaluates a word of generator indices.
    pub fn eval_word(&self, word: &[usize]) -> Result<usize> {
        let k = self.generators.len();
        word.iter().try_fold(0, |acc, &g| {
            if g >= k {
                Err(Error::Precondition(format!(
                    "generator index {g} out of range"
                )))
            } else {
                Ok(self.right_gen(acc, g))
            }
        })
    }

    /// Recomputes element i from its word by multiplying realizations.
    pub fn realize_word(&self, i: usize) -> Element {
        let id = self.elements[0].clone();
        let e = self.words[i]
            .iter()
            .fold(id, |acc, &g| acc.mul(&self.generators[g]));
        match (self.mode, e) {
            (ClosureMode::Projective, Element::Matrix(m)) => {
                Element::Matrix(projective_normalize(&m))
            }
            (_, e) => e,
        }
    }

    /// The subgroup generated by the given element indices.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Subgroup {
        let mut members = vec![0usize];
        let mut seen = HashSet::from([0usize]);
        let mut chosen = Vec::new();
        for &g in gens {
            if seen.contains(&g) {
                continue;
            }
            chosen.push(g);
            let mut queue: VecDeque<usize> = members.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &h in &chosen {
                    let y = self.mul(x, h);
                    if seen.insert(y) {
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        members.sort_unstable();
        Subgroup {
            members,
            generators: chosen,
        }
    }

    /// The set of elements satisfying the predicate, which must be a subgroup.
    pub fn subgroup_where(&self, pred: impl Fn(usize) -> bool) -> Result<Subgroup> {
        let set: Vec<usize> = (0..self.order()).filter(|&i| pred(i)).collect();
        self.subgroup_from_set(&set)
    }

    /// Checks that a set of indices is a subgroup and returns it.
    pub fn subgroup_from_set(&self, set: &[usize]) -> Result<Subgroup> {
        if !set.contains(&0) {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        let sub = self.subgroup_generated(set);
        if sub.order() != set.len() {
            return Err(Error::NotASubgroup(format!(
                "set of size {} generates a subgroup of order {}",
                set.len(),
                sub.order()
            )));
        }
        Ok(sub)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: (0..self.order()).collect(),
            generators: (0..self.num_generators())
                .map(|g| self.generator_index(g))
                .collect(),
        }
    }

    /// Elements whose matrix is a scalar multiple of the identity.
    pub fn scalar_subgroup(&self) -> Result<Subgroup> {
        self.subgroup_where(|i| match &self.elements[i] {
            Element::Matrix(m) => m.as_scalar().is_some(),
            Element::Perm(_) => i == 0,
        })
    }

    /// Smallest normal subgroup containing the given elements.
    pub fn normal_closure(&self, gens: &[usize]) -> Subgroup {
        let mut sub = self.subgroup_generated(gens);
        loop {
            let extra: Vec<usize> = sub
                .generators
                .iter()
                .flat_map(|&h| (0..self.num_generators()).map(move |g| (h, g)))
                .map(|(h, g)| self.conjugate(h, self.generator_index(g)))
                .filter(|c| !sub.contains(*c))
                .collect();
            if extra.is_empty() {
                return sub;
            }
            let mut all = sub.generators.clone();
            all.extend(extra);
            sub = self.subgroup_generated(&all);
        }
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let k = self.num_generators();
        let mut comms = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                let (x, y) = (self.generator_index(a), self.generator_index(b));
                let c = self.mul(self.mul(self.inverse[x], self.inverse[y]), self.mul(x, y));
                comms.push(c);
            }
        }
        self.normal_closure(&comms)
    }

    /// Maps every element of this matrix group to its image in `proj`.
    pub fn projective_map(&self, proj: &FiniteGroup) -> Result<Vec<usize>> {
        self.elements
            .iter()
            .map(|e| {
                proj.index_of(e).ok_or_else(|| {
                    Error::Invariant("element has no image in the projective group".into())
                })
            })
            .collect()
    }

    /// The matrix of element i (matrix groups only).
    pub fn matrix(&self, i: usize) -> Option<&Mat> {
        self.elements[i].as_matrix()
    }

    pub fn conductor(&self) -> Option<u32> {
        self.elements[0].as_matrix().map(Mat::conductor)
    }

    /// Scalar of element i if its matrix is scalar.
    pub fn scalar_of(&self, i: usize) -> Option<CycElt> {
        self.matrix(i).and_then(Mat::as_scalar)
    }
}

/// A subgroup as a sorted list of element indices of its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<usize>,
    generators: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// Number of distinct images under an index map.
    pub fn image_order(&self, map: &[usize]) -> usize {
        self.members
            .iter()
            .map(|&i| map[i])
            .collect::<HashSet<_>>()
            .len()
    }

    pub fn image(&self, map: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .members
            .iter()
            .map(|&i| map[i])
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        v.sort_unstable();
        v
    }
}

pub fn is_subgroup_equal(a: &Subgroup, b: &Subgroup) -> bool {
    a.members == b.members
}

/// A central subgroup H of E, the kernel of a cover E → G.
#[derive(Debug, Clone)]
pub struct CentralKernel {
    subgroup: Subgroup,
    central: bool,
}

impl CentralKernel {
    pub fn new(group: &FiniteGroup, gens: &[usize]) -> Result<CentralKernel> {
        let subgroup = group.subgroup_generated(gens);
        for &h in subgroup.generators() {
            for g in 0..group.num_generators() {
                if !group.commutes(h, group.generator_index(g)) {
                    return Err(Error::Precondition(format!(
                        "kernel element {h} is not central"
                    )));
                }
            }
        }
        Ok(CentralKernel {
            subgroup,
            central: true,
        })
    }

    pub fn trivial() -> CentralKernel {
        CentralKernel {
            subgroup: Subgroup {
                members: vec![0],
                generators: vec![],
            },
            central: true,
        }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn is_central(&self) -> bool {
        self.central
    }

    /// Whether H lies in the derived subgroup E′.
    pub fn in_derived_subgroup(&self, group: &FiniteGroup) -> bool {
        let d = group.derived_subgroup();
        self.subgroup.members().iter().all(|&h| d.contains(h))
    }
}
