//! Matrix representations of enumerated groups and their invariant subspaces.
//!
//! A [`Rep`] assigns a matrix to each generator. Derived modules (dual,
//! symmetric powers of the dual, exterior powers, restrictions to stable
//! subspaces) compute their element matrices from the parent on demand.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chars::{CharacterTable, ClassFunction, Decomposition};
use crate::cyclo::{root_of_unity, CycElt};
use crate::error::{Error, Result};
use crate::grp::{Element, FiniteGroup};
use crate::linalg::{eigenprojection, intersect, Mat, Subspace, Vector};

/// Element matrices are memoized when |G|·dim² stays below this.
const CACHE_LIMIT: usize = 4_000_000;

pub const DEFAULT_RETRY_CAP: usize = 200;

#[derive(Clone)]
enum Kind {
    Explicit,
    Dual(Arc<Rep>),
    /// Degree-d polynomial functions on the parent, (e·P)(x) = P(ρ(e)⁻¹x).
    SymPower(Arc<Rep>, Arc<Vec<Vec<u32>>>),
    ExtPower(Arc<Rep>, Arc<Vec<Vec<usize>>>),
    Restricted(Arc<Rep>, Subspace),
}

#[derive(Clone)]
pub struct Rep {
    group: Arc<FiniteGroup>,
    dim: usize,
    n: u32,
    kind: Kind,
    gens: Vec<Mat>,
    cache: Arc<OnceLock<Vec<Mat>>>,
}

impl fmt::Debug for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            Kind::Explicit => "explicit",
            Kind::Dual(_) => "dual",
            Kind::SymPower(..) => "symmetric power of the dual",
            Kind::ExtPower(..) => "exterior power",
            Kind::Restricted(..) => "restriction",
        };
        write!(
            f,
            "Rep({kind}, dim {}, |G| = {})",
            self.dim,
            self.group.order()
        )
    }
}

impl Rep {
    /// Representation given by generator matrices; checks that they define a
    /// homomorphism on the enumerated group.
    pub fn new(group: Arc<FiniteGroup>, gens: Vec<Mat>) -> Result<Rep> {
        if gens.len() != group.num_generators() {
            return Err(Error::Dimension(format!(
                "{} matrices for {} generators",
                gens.len(),
                group.num_generators()
            )));
        }
        let Some(first) = gens.first() else {
            return Err(Error::Precondition("group without generators".into()));
        };
        let (dim, n) = (first.rows(), first.conductor());
        for m in &gens {
            if !m.is_square() || m.rows() != dim {
                return Err(Error::Dimension(
                    "generator matrices must share one square shape".into(),
                ));
            }
            if m.conductor() != n {
                return Err(Error::ConductorMismatch(n, m.conductor()));
            }
        }
        let rep = Rep {
            group,
            dim,
            n,
            kind: Kind::Explicit,
            gens,
            cache: Arc::new(OnceLock::new()),
        };
        rep.validate()?;
        Ok(rep)
    }

    /// The same module over Q(ζ_m); n must divide m.
    pub fn embed(&self, m: u32) -> Result<Rep> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.embed(m))
            .collect::<Result<Vec<_>>>()?;
        Rep::new(self.group.clone(), gens)
    }

    /// The defining representation of a linear matrix group.
    pub fn defining(group: Arc<FiniteGroup>) -> Result<Rep> {
        let gens = (0..group.num_generators())
            .map(|g| {
                group
                    .matrix(group.generator_index(g))
                    .cloned()
                    .ok_or_else(|| Error::Precondition("not a matrix group".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        if group.mode() == crate::grp::ClosureMode::Projective {
            return Err(Error::Precondition(
                "a projective closure has no defining linear representation".into(),
            ));
        }
        Rep::new(group, gens)
    }

    /// Permutation matrices of a permutation group, e_x ↦ e_{g(x)}.
    pub fn permutation(group: Arc<FiniteGroup>, n: u32) -> Result<Rep> {
        let gens = (0..group.num_generators())
            .map(|g| match group.element(group.generator_index(g)) {
                Element::Perm(p) => Ok(Mat::from_fn(n, p.len(), p.len(), |i, j| {
                    if p[j] as usize == i {
                        CycElt::one(n)
                    } else {
                        CycElt::zero(n)
                    }
                })),
                Element::Matrix(_) => Err(Error::Precondition("not a permutation group".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Rep::new(group, gens)
    }

    /// Left regular representation, e_h ↦ e_{gh}.
    pub fn regular(group: Arc<FiniteGroup>, n: u32) -> Result<Rep> {
        let k = group.order();
        let gens = (0..group.num_generators())
            .map(|g| {
                let gi = group.generator_index(g);
                let mut m = Mat::zeros(n, k, k);
                for h in 0..k {
                    m.set(group.mul(gi, h), h, CycElt::one(n));
                }
                m
            })
            .collect();
        Rep::new(group, gens)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(a: &Rep, b: &Rep) -> Result<Rep> {
        let n = a.n;
        let (da, db) = (a.dim, b.dim);
        let gens = a
            .gens
            .iter()
            .zip(&b.gens)
            .map(|(x, y)| {
                Mat::from_fn(n, da + db, da + db, |i, j| match (i < da, j < da) {
                    (true, true) => x.get(i, j).clone(),
                    (false, false) => y.get(i - da, j - da).clone(),
                    _ => CycElt::zero(n),
                })
            })
            .collect();
        Rep::new(a.group.clone(), gens)
    }

    fn derived(&self, kind: Kind, dim: usize) -> Rep {
        let mut r = Rep {
            group: self.group.clone(),
            dim,
            n: self.n,
            kind,
            gens: vec![],
            cache: Arc::new(OnceLock::new()),
        };
        r.gens = (0..self.group.num_generators())
            .map(|g| r.compute_matrix(self.group.generator_index(g)))
            .collect();
        r
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn generator_matrices(&self) -> &[Mat] {
        &self.gens
    }

    /// Monomial exponent vectors indexing the basis of a symmetric power.
    pub fn monomials(&self) -> Option<&[Vec<u32>]> {
        match &self.kind {
            Kind::SymPower(_, m) => Some(m),
            _ => None,
        }
    }

    /// Index sets indexing the basis of an exterior power.
    pub fn wedge_basis(&self) -> Option<&[Vec<usize>]> {
        match &self.kind {
            Kind::ExtPower(_, s) => Some(s),
            _ => None,
        }
    }

    pub fn ambient_subspace(&self) -> Option<&Subspace> {
        match &self.kind {
            Kind::Restricted(_, s) => Some(s),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let g = &self.group;
        for (k, m) in self.gens.iter().enumerate() {
            let o = g.element_order(g.generator_index(k));
            if !m.pow(o as u64)?.is_identity() {
                return Err(Error::Precondition(format!(
                    "generator {k} does not satisfy ρ(g)^{o} = I"
                )));
            }
        }
        if g.order() * self.dim * self.dim <= CACHE_LIMIT {
            let all = self.all_by_parent();
            for i in 0..g.order() {
                for (k, m) in self.gens.iter().enumerate() {
                    if &all[i] * m != all[g.right_gen(i, k)] {
                        return Err(Error::Precondition(
                            "generator matrices do not define a homomorphism".into(),
                        ));
                    }
                }
            }
            let _ = self.cache.set(all);
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..50 {
                let a = rng.gen_range(0..g.order());
                let b = rng.gen_range(0..g.order());
                if &self.word_matrix(a) * &self.word_matrix(b) != self.word_matrix(g.mul(a, b)) {
                    return Err(Error::Precondition(
                        "generator matrices do not define a homomorphism".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn all_by_parent(&self) -> Vec<Mat> {
        let g = &self.group;
        let mut all = Vec::with_capacity(g.order());
        all.push(Mat::identity(self.n, self.dim));
        for i in 1..g.order() {
            let (p, k) = g.parent(i).expect("non-identity has a parent");
            all.push(&all[p] * &self.gens[k]);
        }
        all
    }

    fn word_matrix(&self, i: usize) -> Mat {
        self.group
            .word(i)
            .iter()
            .fold(Mat::identity(self.n, self.dim), |acc, &k| {
                &acc * &self.gens[k]
            })
    }

    /// ρ(e) for the element of index e.
    pub fn element_matrix(&self, e: usize) -> Mat {
        if let Some(all) = self.cache.get() {
            return all[e].clone();
        }
        self.compute_matrix(e)
    }

    fn compute_matrix(&self, e: usize) -> Mat {
        let g = &self.group;
        match &self.kind {
            Kind::Explicit => self.word_matrix(e),
            Kind::Dual(p) => p.element_matrix(g.inverse(e)).transpose(),
            Kind::SymPower(p, monos) => sym_matrix(&p.element_matrix(g.inverse(e)), monos),
            Kind::ExtPower(p, subsets) => ext_matrix(&p.element_matrix(e), subsets),
            Kind::Restricted(p, s) => p.element_matrix(e).restrict_to(s).expect("stable subspace"),
        }
    }

    /// Fills the element-matrix cache when it fits the memory budget.
    pub fn memoize(&self) {
        if self.group.order() * self.dim * self.dim <= CACHE_LIMIT {
            self.cache.get_or_init(|| {
                (0..self.group.order())
                    .map(|e| self.compute_matrix(e))
                    .collect()
            });
        }
    }

    pub fn character(&self) -> ClassFunction {
        crate::chars::character_of_rep(self)
    }

    /// Applies a word of generator indices to a vector, first letter first.
    pub fn apply_word(&self, word: &[usize], v: &[CycElt]) -> Vector {
        word.iter()
            .fold(v.to_vec(), |acc, &k| self.gens[k].mul_vec(&acc))
    }

    /// Restriction to a generator-stable subspace, in its echelon coordinates.
    pub fn restrict(self: &Arc<Self>, space: &Subspace) -> Result<Rep> {
        if space.ambient() != self.dim {
            return Err(Error::Dimension(
                "subspace lives in a different module".into(),
            ));
        }
        if !space.is_stable_under(&self.gens) {
            return Err(Error::Precondition(
                "subspace is not stable under the generators".into(),
            ));
        }
        Ok(self.derived(Kind::Restricted(self.clone(), space.clone()), space.dim()))
    }
}

pub fn dual_rep(m: &Arc<Rep>) -> Rep {
    m.derived(Kind::Dual(m.clone()), m.dim)
}

/// Degree-d exponent vectors in x₀ > … > x_{k−1} lexicographic order.
pub fn monomial_basis(vars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>, vars: usize) {
        if i + 1 == vars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            rec(i + 1, left - a, cur, out, vars);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if vars > 0 {
        rec(0, d, &mut Vec::new(), &mut out, vars);
    }
    out
}

/// t-subsets of 0..k in colex order.
pub fn wedge_subsets(k: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(i + 1, k, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, t, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

/// Polynomial functions of degree d on the module: Sym^d of the dual, acting
/// on monomials in x₀ > … order by (e·P)(x) = P(ρ(e)⁻¹x).
pub fn sym_power_rep(m: &Arc<Rep>, d: u32) -> Result<Rep> {
    if d == 0 {
        return Err(Error::Precondition(
            "symmetric power degree must be positive".into(),
        ));
    }
    let monos = monomial_basis(m.dim, d);
    let dim = monos.len();
    Ok(m.derived(Kind::SymPower(m.clone(), Arc::new(monos)), dim))
}

pub fn ext_power_rep(m: &Arc<Rep>, t: usize) -> Result<Rep> {
    if t == 0 || t > m.dim {
        return Err(Error::Dimension(format!(
            "exterior power {t} of a {}-dimensional module",
            m.dim
        )));
    }
    let subsets = wedge_subsets(m.dim, t);
    let dim = subsets.len();
    Ok(m.derived(Kind::ExtPower(m.clone(), Arc::new(subsets)), dim))
}

/// Matrix of P ↦ P(Bx) on the given monomial basis.
fn sym_matrix(b: &Mat, monos: &[Vec<u32>]) -> Mat {
    let n = b.conductor();
    let k = b.rows();
    let index: HashMap<&[u32], usize> = monos
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_slice(), i))
        .collect();
    let mut out = Mat::zeros(n, monos.len(), monos.len());
    for (c, mono) in monos.iter().enumerate() {
        let mut poly: HashMap<Vec<u32>, CycElt> = HashMap::from([(vec![0u32; k], CycElt::one(n))]);
        for (i, &pw) in mono.iter().enumerate() {
            for _ in 0..pw {
                let mut next: HashMap<Vec<u32>, CycElt> = HashMap::new();
                for (exp, coef) in &poly {
                    for j in 0..k {
                        let bij = b.get(i, j);
                        if bij.is_zero() {
                            continue;
                        }
                        let mut e = exp.clone();
                        e[j] += 1;
                        let t = coef * bij;
                        match next.get_mut(&e) {
                            Some(v) => *v = &*v + &t,
                            None => {
                                next.insert(e, t);
                            }
                        }
                    }
                }
                poly = next;
            }
        }
        for (exp, coef) in poly {
            if !coef.is_zero() {
                out.set(index[exp.as_slice()], c, coef);
            }
        }
    }
    out
}

/// Matrix of ∧ᵗA on the given index sets: entry (J, I) is the minor A[J, I].
fn ext_matrix(a: &Mat, subsets: &[Vec<usize>]) -> Mat {
    let n = a.conductor();
    let t = subsets[0].len();
    Mat::from_fn(n, subsets.len(), subsets.len(), |r, c| {
        let (rows, cols) = (&subsets[r], &subsets[c]);
        Mat::from_fn(n, t, t, |i, j| a.get(rows[i], cols[j]).clone())
            .det()
            .expect("square minor")
    })
}

/// An isotypic component with its projector.
#[derive(Debug, Clone)]
pub struct IsotypicComponent {
    pub mu_index: usize,
    pub degree: u32,
    pub multiplicity: u32,
    pub space: Subspace,
    pub projector: Mat,
}

/// Embeds a class function into the module's conductor.
fn mu_in(rep: &Rep, mu: &ClassFunction) -> Result<ClassFunction> {
    if !rep.n.is_multiple_of(mu.conductor()) {
        return Err(Error::ConductorMismatch(rep.n, mu.conductor()));
    }
    mu.embed(rep.n)
}

/// Projector (deg μ/|G|)·Σ_e conj(μ(e))·ρ(e) and its image.
pub fn isotypic_projection(
    rep: &Rep,
    table: &CharacterTable,
    mu_index: usize,
) -> Result<IsotypicComponent> {
    let g = rep.group();
    let mu = mu_in(rep, table.irr(mu_index))?;
    let n = rep.n;
    let mut acc = Mat::zeros(n, rep.dim, rep.dim);
    for (c, cl) in g.classes().iter().enumerate() {
        let w = mu.value(c).conj();
        if w.is_zero() {
            continue;
        }
        let mut sum = Mat::zeros(n, rep.dim, rep.dim);
        for &e in &cl.members {
            sum = sum.add(&rep.element_matrix(e))?;
        }
        acc = acc.add(&sum.scale(&w))?;
    }
    let degree = table.degrees()[mu_index];
    let projector = acc.scale_rational(&BigRational::new(
        BigInt::from(degree),
        BigInt::from(g.order()),
    ));
    let space = Subspace::column_space(&projector);
    if !space.dim().is_multiple_of(degree as usize) {
        return Err(Error::Invariant(
            "isotypic component dimension is not a multiple of the degree".into(),
        ));
    }
    let multiplicity = (space.dim() / degree as usize) as u32;
    Ok(IsotypicComponent {
        mu_index,
        degree,
        multiplicity,
        space,
        projector,
    })
}

/// Intertwiners X with ρ_b(g)·X = X·ρ_a(g) for all generators, as dim_b × dim_a matrices.
pub fn hom_space(a: &Rep, b: &Rep) -> Result<Vec<Mat>> {
    if !Arc::ptr_eq(a.group(), b.group()) && a.group().order() != b.group().order() {
        return Err(Error::Precondition("modules over different groups".into()));
    }
    if a.n != b.n {
        return Err(Error::ConductorMismatch(a.n, b.n));
    }
    let (da, db, n) = (a.dim, b.dim, a.n);
    let unknowns = da * db;
    let mut space = Subspace::full(n, unknowns);
    for (ma, mb) in a.gens.iter().zip(&b.gens) {
        let mut rows = Vec::with_capacity(unknowns);
        for i in 0..db {
            for j in 0..da {
                let mut row = vec![CycElt::zero(n); unknowns];
                for k in 0..db {
                    let c = mb.get(i, k);
                    if !c.is_zero() {
                        row[k * da + j] = &row[k * da + j] + c;
                    }
                }
                for k in 0..da {
                    let c = ma.get(k, j);
                    if !c.is_zero() {
                        row[i * da + k] = &row[i * da + k] - c;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            continue;
        }
        let eqs = Mat::from_rows(n, rows)?;
        let ns = eqs.nullspace();
        space = intersect(&[space, ns])?;
        if space.dim() == 0 {
            break;
        }
    }
    Ok(space
        .basis_rows()
        .into_iter()
        .map(|v| Mat::from_fn(n, db, da, |i, j| v[i * da + j].clone()))
        .collect())
}

pub fn commutant(m: &Rep) -> Result<Vec<Mat>> {
    hom_space(m, m)
}

/// Cyclic submodule generated by v, with the generator word reaching each
/// spanning vector (first letter applied first).
pub fn spin_with_words(m: &Rep, v: &[CycElt]) -> (Subspace, Vec<(Vec<usize>, Vector)>) {
    let n = m.n;
    let mut space = Subspace::zero(n, m.dim);
    let mut found: Vec<(Vec<usize>, Vector)> = Vec::new();
    if v.iter().all(CycElt::is_zero) {
        return (space, found);
    }
    space = Subspace::span(n, m.dim, &[v.to_vec()]);
    found.push((vec![], v.to_vec()));
    let mut head = 0;
    while head < found.len() && space.dim() < m.dim {
        let (word, w) = found[head].clone();
        for (k, g) in m.gens.iter().enumerate() {
            let u = g.mul_vec(&w);
            if !space.contains(&u) {
                let mut rows = space.basis_rows();
                rows.push(u.clone());
                space = Subspace::span(n, m.dim, &rows);
                let mut wd = word.clone();
                wd.push(k);
                found.push((wd, u));
            }
        }
        head += 1;
    }
    (space, found)
}

pub fn spin(m: &Rep, v: &[CycElt]) -> Subspace {
    spin_with_words(m, v).0
}

/// Multiplicity of λ = ζ_o^j as an eigenvalue of ρ(e) in a module affording
/// μ: (1/o)·Σ_k μ(eᵏ)·λ^{−k}.
fn eigen_multiplicity(
    g: &FiniteGroup,
    mu: &ClassFunction,
    e: usize,
    j: i64,
) -> Result<BigRational> {
    let o = g.element_order(e);
    let n = mu.conductor();
    let mut s = CycElt::zero(n);
    for k in 0..o as i64 {
        s = s + mu.at(g, g.pow(e, k)) * &root_of_unity(n, o, -j * k)?;
    }
    s.scale(&BigRational::new(BigInt::from(1), BigInt::from(o)))
        .to_rational()
        .ok_or_else(|| Error::NotACharacter("non-rational eigenvalue multiplicity".into()))
}

/// A simple submodule W₀ of an isotypic component and a basis of Hom(W₀, M).
#[derive(Debug, Clone)]
pub struct Anchor {
    pub simple: Subspace,
    /// dim M × deg μ matrices acting on W₀'s echelon coordinates.
    pub hom_basis: Vec<Mat>,
    /// Whether the eigenvalue-multiplicity-one route succeeded.
    pub deterministic: bool,
    pub attempts: usize,
}

/// Finds vectors u₁…u_f spanning w ⊗ K^f inside the component, then builds
/// W₀ = spin(u₁) and the intertwiners ω(u₁) ↦ ω(u_j).
pub fn anchor(
    m: &Rep,
    comp: &IsotypicComponent,
    table: &CharacterTable,
    seed: u64,
    cap: usize,
) -> Result<Anchor> {
    let g = m.group().clone();
    let f = comp.multiplicity as usize;
    let d = comp.degree as usize;
    if f == 0 {
        return Err(Error::Precondition("empty isotypic component".into()));
    }
    let mu = mu_in(m, table.irr(comp.mu_index))?;
    let n = m.n;
    let ambient = Arc::new(m.clone());
    let local = ambient.restrict(&comp.space)?;
    let basis = comp.space.basis_rows();
    let to_ambient = |c: &[CycElt]| -> Vector {
        let mut v = vec![CycElt::zero(n); m.dim];
        for (ci, b) in c.iter().zip(&basis) {
            if ci.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = &*x + &(ci * y);
                }
            }
        }
        v
    };

    // Stage 1: an element with an eigenvalue of multiplicity one in μ.
    let mut pure: Option<Subspace> = None;
    let mut attempts = 0;
    'outer: for cl in g.classes() {
        let e = cl.representative;
        let o = g.element_order(e);
        for j in 0..o as i64 {
            if eigen_multiplicity(&g, &mu, e, j)? == BigRational::from_integer(1.into()) {
                let p = eigenprojection(&local.element_matrix(e), o, &root_of_unity(n, o, j)?)?;
                pure = Some(Subspace::column_space(&p));
                break 'outer;
            }
        }
    }
    let deterministic = pure.is_some();

    // Stage 2: shrink an image of the enveloping algebra to rank f.
    if pure.is_none() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairs = Vec::new();
        for cl in g.classes().iter().skip(1) {
            let e = cl.representative;
            let o = g.element_order(e);
            for j in 0..o as i64 {
                let mult = eigen_multiplicity(&g, &mu, e, j)?;
                if mult > BigRational::from_integer(0.into())
                    && mult < BigRational::from_integer((d as i64).into())
                {
                    pairs.push((e, o, j));
                }
            }
        }
        if pairs.is_empty() {
            return Err(Error::RetryCapExceeded {
                attempts: 0,
                detail: "no splitting eigenspace".into(),
            });
        }
        let proj = |(e, o, j): (usize, u32, i64)| -> Result<Mat> {
            eigenprojection(&local.element_matrix(e), o, &root_of_unity(n, o, j)?)
        };
        let mut b = proj(pairs[0])?;
        let mut rank = b.rank();
        while rank > f {
            attempts += 1;
            if attempts > cap {
                return Err(Error::RetryCapExceeded {
                    attempts: cap,
                    detail: format!("rank stuck at {rank}, target {f}"),
                });
            }
            let h = rng.gen_range(0..g.order());
            let &pair = pairs.choose(&mut rng).expect("nonempty");
            let conj =
                &(&local.element_matrix(h) * &proj(pair)?) * &local.element_matrix(g.inverse(h));
            let c = &(&b * &conj) * &b;
            let rc = c.rank();
            if rc > 0 && rc < rank {
                b = c;
                rank = rc;
            }
        }
        pure = Some(Subspace::column_space(&b));
    }
    let pure = pure.expect("set above");
    if pure.dim() != f {
        return Err(Error::Invariant(format!(
            "pure eigenspace has dimension {} instead of {f}",
            pure.dim()
        )));
    }
    let us: Vec<Vector> = pure.basis_rows().iter().map(|c| to_ambient(c)).collect();
    let (simple, spun) = spin_with_words(m, &us[0]);
    if simple.dim() != d {
        return Err(Error::Invariant(format!(
            "spun submodule has dimension {} instead of {d}",
            simple.dim()
        )));
    }
    let words: Vec<Vec<usize>> = spun.iter().map(|(w, _)| w.clone()).collect();
    // K: coordinates of the spun vectors in W₀'s echelon basis.
    let k_cols: Vec<Vector> = spun
        .iter()
        .map(|(_, v)| simple.coordinates(v).expect("in span"))
        .collect();
    let k_inv = Mat::from_cols(n, d, &k_cols).inverse()?;
    let hom_basis = us
        .iter()
        .map(|u| {
            let cols: Vec<Vector> = words.iter().map(|w| m.apply_word(w, u)).collect();
            &Mat::from_cols(n, m.dim, &cols) * &k_inv
        })
        .collect::<Vec<_>>();
    let w0 = ambient.restrict(&simple)?;
    for h in &hom_basis {
        for (a, b) in w0.gens.iter().zip(&m.gens) {
            if (b * h) != (h * a) {
                return Err(Error::Invariant(
                    "constructed map is not an intertwiner".into(),
                ));
            }
        }
    }
    if !crate::chars::character_of_rep(&w0).embed(n)?.eq(&mu) {
        return Err(Error::Invariant("anchor does not afford μ".into()));
    }
    Ok(Anchor {
        simple,
        hom_basis,
        deterministic,
        attempts,
    })
}

/// A simple submodule of an isotypic component.
pub fn simple_submodule(
    m: &Rep,
    comp: &IsotypicComponent,
    table: &CharacterTable,
    seed: u64,
) -> Result<Subspace> {
    Ok(anchor(m, comp, table, seed, DEFAULT_RETRY_CAP)?.simple)
}

#[derive(Debug, Clone)]
pub struct GrassBlock {
    pub component: IsotypicComponent,
    /// c_μ, the multiplicity of μ in η.
    pub rank: u32,
    pub anchor: Anchor,
}

/// The parametrization of Gr(η, M) by per-μ coefficient blocks.
#[derive(Debug, Clone)]
pub struct GrassData {
    pub eta: Decomposition,
    pub blocks: Vec<GrassBlock>,
    pub dimension: u64,
}

pub fn grassmannian_data(
    m: &Rep,
    table: &CharacterTable,
    chi: &Decomposition,
    eta: &Decomposition,
    seed: u64,
) -> Result<GrassData> {
    let mut blocks = Vec::new();
    let mut dimension = 0;
    for (i, &c) in eta.mult.iter().enumerate() {
        let f = chi.mult[i];
        if c > f {
            return Err(Error::Precondition("η is not a constituent of χ".into()));
        }
        if c == 0 {
            continue;
        }
        let component = isotypic_projection(m, table, i)?;
        if component.multiplicity != f {
            return Err(Error::Invariant(
                "component multiplicity differs from the decomposition".into(),
            ));
        }
        let anchor = anchor(m, &component, table, seed, DEFAULT_RETRY_CAP)?;
        dimension += c as u64 * (f - c) as u64;
        blocks.push(GrassBlock {
            component,
            rank: c,
            anchor,
        });
    }
    Ok(GrassData {
        eta: eta.clone(),
        blocks,
        dimension,
    })
}

/// Submodule spanned by Σ_j a_ij·hom_j(W₀) over all rows of each block.
pub fn submodule_at(m: &Rep, gd: &GrassData, coords: &[Mat]) -> Result<Subspace> {
    if coords.len() != gd.blocks.len() {
        return Err(Error::Dimension(format!(
            "{} coordinate blocks for {} constituents",
            coords.len(),
            gd.blocks.len()
        )));
    }
    let n = m.n;
    let mut vectors = Vec::new();
    for (a, block) in coords.iter().zip(&gd.blocks) {
        let a = a.embed(n)?;
        let f = block.anchor.hom_basis.len();
        if a.rows() != block.rank as usize || a.cols() != f {
            return Err(Error::Dimension(format!(
                "coordinate block must be {}x{f}",
                block.rank
            )));
        }
        if a.rank() != a.rows() {
            return Err(Error::RankDeficient(format!(
                "block of rank {} < {}",
                a.rank(),
                a.rows()
            )));
        }
        for i in 0..a.rows() {
            let mut h = Mat::zeros(n, m.dim, block.component.degree as usize);
            for (j, hj) in block.anchor.hom_basis.iter().enumerate() {
                if !a.get(i, j).is_zero() {
                    h = h.add(&hj.scale(a.get(i, j)))?;
                }
            }
            for c in 0..h.cols() {
                vectors.push(h.col(c));
            }
        }
    }
    Ok(Subspace::span(n, m.dim, &vectors))
}

/// ⋂_g ker(ρ(g) − μ(g)·I) for a linear character μ.
pub fn common_eigenspace(m: &Rep, mu: &ClassFunction) -> Result<Subspace> {
    let mu = if m.n.is_multiple_of(mu.conductor()) {
        mu.embed(m.n)?
    } else {
        return Err(Error::ConductorMismatch(m.n, mu.conductor()));
    };
    if !mu.degree().is_one() {
        return Err(Error::Precondition("character is not linear".into()));
    }
    let g = m.group();
    let spaces: Vec<Subspace> = m
        .gens
        .iter()
        .enumerate()
        .map(|(k, mat)| {
            let lam = mu.at(g, g.generator_index(k));
            mat.sub(&Mat::scalar(lam, m.dim))
                .expect("square")
                .nullspace()
        })
        .collect();
    intersect(&spaces)
}

/// Sign and index set of e_i ∧ e_I, or None if i ∈ I.
fn wedge_insert(i: usize, set: &[usize]) -> Option<(bool, Vec<usize>)> {
    if set.contains(&i) {
        return None;
    }
    let before = set.iter().filter(|&&x| x < i).count();
    let mut s = set.to_vec();
    s.push(i);
    s.sort_unstable();
    Some((before % 2 == 1, s))
}

/// ω is decomposable iff {v : v ∧ ω = 0} has dimension t.
pub fn pure_tensor_test(omega: &[CycElt], dim: usize, t: usize) -> Result<bool> {
    let subsets = wedge_subsets(dim, t);
    if omega.len() != subsets.len() {
        return Err(Error::Dimension(format!(
            "expected {} wedge coordinates",
            subsets.len()
        )));
    }
    if omega.iter().all(CycElt::is_zero) {
        return Err(Error::Precondition("zero tensor".into()));
    }
    let n = omega[0].conductor();
    if t == dim {
        return Ok(true);
    }
    let upper = wedge_subsets(dim, t + 1);
    let upper_index: HashMap<&[usize], usize> = upper
        .iter()
        .enumerate()
        .map(|(k, s)| (s.as_slice(), k))
        .collect();
    let mut m = Mat::zeros(n, upper.len(), dim);
    for i in 0..dim {
        for (c, set) in omega.iter().zip(&subsets) {
            if c.is_zero() {
                continue;
            }
            if let Some((neg, s)) = wedge_insert(i, set) {
                let r = upper_index[s.as_slice()];
                let v = if neg {
                    m.get(r, i) - c
                } else {
                    m.get(r, i) + c
                };
                m.set(r, i, v);
            }
        }
    }
    Ok(m.nullspace().dim() == t)
}

/// A quadric in Plücker coordinates: Σ c·p_I·p_J over wedge-basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluckerQuadric {
    pub terms: Vec<(usize, usize, CycElt)>,
}

#[derive(Debug, Clone)]
pub struct PluckerEquations {
    pub subsets: Vec<Vec<usize>>,
    /// Linear forms in the Plücker coordinates vanishing on P(u).
    pub linear: Vec<Vector>,
    pub quadrics: Vec<PluckerQuadric>,
}

pub const PLUCKER_CAP: usize = 200_000;

/// Emits the equations of P(u) ∩ Gr(t, dim): linear forms cutting out u and
/// a linearly independent set of Plücker quadrics.
pub fn plucker_generators(t: usize, dim: usize, u: &Subspace) -> Result<PluckerEquations> {
    let subsets = wedge_subsets(dim, t);
    if u.ambient() != subsets.len() {
        return Err(Error::Dimension(
            "subspace does not live in the exterior power".into(),
        ));
    }
    let n = u.conductor();
    let index: HashMap<&[usize], usize> = subsets
        .iter()
        .enumerate()
        .map(|(k, s)| (s.as_slice(), k))
        .collect();
    let linear = if u.dim() == u.ambient() {
        vec![]
    } else {
        u.annihilator().basis_rows()
    };
    let mut quadrics = Vec::new();
    if t >= 2 && t < dim {
        let lower = wedge_subsets(dim, t - 1);
        let upper = wedge_subsets(dim, t + 1);
        if lower.len() * upper.len() > PLUCKER_CAP {
            return Err(Error::CapExceeded {
                cap: PLUCKER_CAP,
                what: "Plücker relations".into(),
            });
        }
        let pairs: Vec<(usize, usize)> = (0..subsets.len())
            .flat_map(|a| (a..subsets.len()).map(move |b| (a, b)))
            .collect();
        let pair_index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut rows: Vec<Vector> = Vec::new();
        for big_i in &lower {
            for big_j in &upper {
                // Σ_k (−1)^k p_{I ∪ j_k} p_{J ∖ j_k}
                let mut row = vec![CycElt::zero(n); pairs.len()];
                let mut any = false;
                for (k, &jk) in big_j.iter().enumerate() {
                    let Some((neg, left)) = wedge_insert(jk, big_i) else {
                        continue;
                    };
                    let right: Vec<usize> = big_j.iter().copied().filter(|&x| x != jk).collect();
                    let (a, b) = (index[left.as_slice()], index[right.as_slice()]);
                    let key = pair_index[&(a.min(b), a.max(b))];
                    let sign = (k % 2 == 1) ^ neg;
                    let one = CycElt::one(n);
                    row[key] = if sign {
                        &row[key] - &one
                    } else {
                        &row[key] + &one
                    };
                    any = true;
                }
                if any && row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        if !rows.is_empty() {
            let space = Subspace::span(n, pairs.len(), &rows);
            for r in space.basis_rows() {
                let terms = r
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (pairs[k].0, pairs[k].1, c.clone()))
                    .collect();
                quadrics.push(PluckerQuadric { terms });
            }
        }
    }
    Ok(PluckerEquations {
        subsets,
        linear,
        quadrics,
    })
}
