//! Polynomials over Q(ζₙ) and the search for invariant complete intersections.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::chars::{constituents_of_degree, decompose, CharacterTable, Decomposition};
use crate::cyclo::{parse_element, parse_rational, CycElt};
use crate::error::{Error, Result};
use crate::grp::{Element, FiniteGroup, Subgroup};
use crate::lex::{Cursor, Tok};
use crate::linalg::{Mat, Subspace, Vector};
use crate::repmod::{
    grassmannian_data, monomial_basis, submodule_at, sym_power_rep, GrassData, Rep,
};

/// Variable naming: `x0…x{k−1}` or `y1…yk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vars {
    pub prefix: char,
    pub base: usize,
    pub count: usize,
}

impl Vars {
    pub fn x(count: usize) -> Vars {
        Vars {
            prefix: 'x',
            base: 0,
            count,
        }
    }

    pub fn y(count: usize) -> Vars {
        Vars {
            prefix: 'y',
            base: 1,
            count,
        }
    }

    fn lookup(&self, ident: &str) -> Option<usize> {
        let rest = ident.strip_prefix(self.prefix)?;
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let k: usize = rest.parse().ok()?;
        (k >= self.base && k - self.base < self.count).then(|| k - self.base)
    }
}

/// A polynomial as a map from exponent vectors to nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    vars: Vars,
    n: u32,
    terms: BTreeMap<Vec<u32>, CycElt>,
}

impl MPoly {
    pub fn zero(vars: Vars, n: u32) -> MPoly {
        MPoly {
            vars,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vars, c: CycElt) -> MPoly {
        let mut p = MPoly::zero(vars, c.conductor());
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.count], c);
        }
        p
    }

    pub fn var(vars: Vars, n: u32, i: usize) -> MPoly {
        let mut e = vec![0; vars.count];
        e[i] = 1;
        MPoly {
            vars,
            n,
            terms: BTreeMap::from([(e, CycElt::one(n))]),
        }
    }

    pub fn from_terms(
        vars: Vars,
        n: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, CycElt)>,
    ) -> MPoly {
        let mut p = MPoly::zero(vars, n);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: &CycElt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = &*v + c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &CycElt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> CycElt {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| CycElt::zero(self.n))
    }

    /// Total degree if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c);
        }
        p
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.scale(&CycElt::from_int(self.n, -1)))
    }

    pub fn scale(&self, c: &CycElt) -> MPoly {
        MPoly::from_terms(
            self.vars,
            self.n,
            self.terms.iter().map(|(e, x)| (e.clone(), x * c)),
        )
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut p = MPoly::zero(self.vars, self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_term(e, &(ca * cb));
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::constant(self.vars, CycElt::one(self.n));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes x_i ↦ forms[i].
    pub fn substitute(&self, forms: &[MPoly]) -> MPoly {
        let target = forms.first().map_or(self.vars, |f| f.vars);
        let mut out = MPoly::zero(target, self.n);
        let mut cache: HashMap<(usize, u32), MPoly> = HashMap::new();
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let pw = cache.entry((i, k)).or_insert_with(|| forms[i].pow(k));
                    t = t.mul(pw);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Coefficients on a monomial basis; fails if a term falls outside it.
    pub fn to_vector(&self, monos: &[Vec<u32>]) -> Result<Vector> {
        let index: HashMap<&[u32], usize> = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.as_slice(), i))
            .collect();
        let mut v = vec![CycElt::zero(self.n); monos.len()];
        for (e, c) in &self.terms {
            let &i = index.get(e.as_slice()).ok_or_else(|| {
                Error::Precondition(format!(
                    "term {} outside the monomial basis",
                    self.mono_str(e)
                ))
            })?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn from_vector(vars: Vars, n: u32, monos: &[Vec<u32>], v: &[CycElt]) -> MPoly {
        MPoly::from_terms(vars, n, monos.iter().cloned().zip(v.iter().cloned()))
    }

    fn mono_str(&self, e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| {
                let v = format!("{}{}", self.vars.prefix, i + self.vars.base);
                if k == 1 {
                    v
                } else {
                    format!("{v}^{k}")
                }
            })
            .collect();
        parts.join("*")
    }

    /// Terms in descending graded-lex order.
    pub fn sorted_terms(&self) -> Vec<(&Vec<u32>, &CycElt)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| {
            let (da, db) = (a.0.iter().sum::<u32>(), b.0.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        t
    }

    /// Scales so that the leading coefficient (descending graded-lex) is 1.
    pub fn monic(&self) -> MPoly {
        match self.sorted_terms().first() {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    pub fn equal_up_to_scalar(&self, other: &MPoly) -> bool {
        !self.is_zero() && !other.is_zero() && self.monic() == other.monic()
    }

    pub fn parse(text: &str, vars: Vars, n: u32) -> Result<MPoly> {
        let mut cur = Cursor::new(text)?;
        let mut acc = MPoly::zero(vars, n);
        let mut negative = if cur.eat(&Tok::Minus) {
            true
        } else {
            cur.eat(&Tok::Plus);
            false
        };
        loop {
            let mut term = parse_factor(&mut cur, vars, n)?;
            while cur.eat(&Tok::Star) {
                term = term.mul(&parse_factor(&mut cur, vars, n)?);
            }
            acc = if negative {
                acc.sub(&term)
            } else {
                acc.add(&term)
            };
            if cur.eat(&Tok::Plus) {
                negative = false;
            } else if cur.eat(&Tok::Minus) {
                negative = true;
            } else if cur.at_end() {
                return Ok(acc);
            } else {
                return Err(cur.error("expected '+', '-' or '*'"));
            }
        }
    }
}

fn parse_factor(cur: &mut Cursor, vars: Vars, n: u32) -> Result<MPoly> {
    match cur.peek().cloned() {
        Some(Tok::Int(_)) => {
            let r = parse_rational(cur)?;
            Ok(MPoly::constant(vars, CycElt::from_rational(n, &r)))
        }
        Some(Tok::LParen) => {
            cur.bump();
            let c = parse_element(cur, n)?;
            if !cur.eat(&Tok::RParen) {
                return Err(cur.error("expected ')'"));
            }
            Ok(MPoly::constant(vars, c))
        }
        Some(Tok::Ident(s)) if s == "z" => {
            cur.bump();
            let k = if cur.eat(&Tok::Caret) {
                cur.expect_small_uint()?
            } else {
                1
            };
            Ok(MPoly::constant(vars, CycElt::zeta_pow(n, k as i64)))
        }
        Some(Tok::Ident(s)) => {
            let Some(i) = vars.lookup(&s) else {
                return Err(cur.error(format!("unknown variable {s:?}")));
            };
            cur.bump();
            let k = if cur.eat(&Tok::Caret) {
                cur.expect_small_uint()? as u32
            } else {
                1
            };
            Ok(MPoly::var(vars, n, i).pow(k))
        }
        _ => Err(cur.error("expected a coefficient, z, a variable or '('")),
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let mono = self.mono_str(e);
            let (neg, body) = match c.to_rational() {
                Some(r) => {
                    let a = r.abs();
                    let s = if a.denom() == &BigInt::from(1) {
                        a.numer().to_string()
                    } else {
                        format!("{}/{}", a.numer(), a.denom())
                    };
                    (
                        r.is_negative(),
                        if s == "1" && !mono.is_empty() {
                            String::new()
                        } else {
                            s
                        },
                    )
                }
                None => (false, format!("({c})")),
            };
            let sep = match (k == 0, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let joiner = if body.is_empty() || mono.is_empty() {
                ""
            } else {
                "*"
            };
            write!(f, "{sep}{body}{joiner}{mono}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An ideal file: `conductor = N`, `variables = K`, then one polynomial per
/// line; `#` starts a comment.
#[derive(Debug, Clone)]
pub struct IdealFile {
    pub conductor: u32,
    pub variables: usize,
    pub polys: Vec<MPoly>,
}

impl IdealFile {
    pub fn parse(text: &str) -> Result<IdealFile> {
        let mut conductor = None;
        let mut variables = None;
        let mut polys = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let header = |key: &str| -> Option<Result<u64>> {
                let rest = line.strip_prefix(key)?.trim_start().strip_prefix('=')?;
                Some(rest.trim().parse::<u64>().map_err(|_| Error::Syntax {
                    pos: 0,
                    msg: format!("line {}: bad {key}", lineno + 1),
                }))
            };
            if let Some(v) = header("conductor") {
                conductor = Some(v? as u32);
                continue;
            }
            if let Some(v) = header("variables") {
                variables = Some(v? as usize);
                continue;
            }
            let (Some(n), Some(k)) = (conductor, variables) else {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: format!("line {}: polynomial before the header", lineno + 1),
                });
            };
            let p = MPoly::parse(line, Vars::x(k), n).map_err(|e| match e {
                Error::Syntax { pos, msg } => Error::Syntax {
                    pos,
                    msg: format!("line {}: {msg}", lineno + 1),
                },
                other => other,
            })?;
            polys.push(p);
        }
        let (Some(conductor), Some(variables)) = (conductor, variables) else {
            return Err(Error::Syntax {
                pos: 0,
                msg: "missing conductor or variables header".into(),
            });
        };
        Ok(IdealFile {
            conductor,
            variables,
            polys,
        })
    }
}

/// (e·P)(x) = P(ρ(e)⁻¹x) for the module `r` whose coordinates are the variables.
pub fn apply_action(r: &Rep, e: usize, p: &MPoly) -> Result<MPoly> {
    if p.vars.count != r.dim() {
        return Err(Error::Dimension(format!(
            "{} variables for a {}-dimensional module",
            p.vars.count,
            r.dim()
        )));
    }
    let b = r.element_matrix(r.group().inverse(e)).embed(p.n)?;
    let forms: Vec<MPoly> = (0..r.dim())
        .map(|i| {
            MPoly::from_terms(
                p.vars,
                p.n,
                (0..r.dim()).map(|j| {
                    let mut ex = vec![0; r.dim()];
                    ex[j] = 1;
                    (ex, b.get(i, j).clone())
                }),
            )
        })
        .collect();
    Ok(p.substitute(&forms))
}

fn common_degree(polys: &[MPoly]) -> Result<u32> {
    let mut d = None;
    for p in polys {
        let pd = p
            .homogeneous_degree()
            .ok_or_else(|| Error::Precondition(format!("{p} is not homogeneous")))?;
        if d.is_some_and(|d| d != pd) {
            return Err(Error::Precondition(
                "polynomials of different degrees".into(),
            ));
        }
        d = Some(pd);
    }
    d.ok_or_else(|| Error::Precondition("empty polynomial list".into()))
}

/// Span of homogeneous polynomials of one degree in the monomial basis.
pub fn poly_span(polys: &[MPoly]) -> Result<(u32, Subspace)> {
    let d = common_degree(polys)?;
    let monos = monomial_basis(polys[0].vars.count, d);
    let n = polys[0].n;
    let vecs = polys
        .iter()
        .map(|p| p.to_vector(&monos))
        .collect::<Result<Vec<_>>>()?;
    Ok((d, Subspace::span(n, monos.len(), &vecs)))
}

/// Polynomials from the echelon basis of a subspace of R_d.
pub fn subspace_polys(vars: Vars, d: u32, s: &Subspace) -> Vec<MPoly> {
    let monos = monomial_basis(vars.count, d);
    s.basis_rows()
        .iter()
        .map(|v| MPoly::from_vector(vars, s.conductor(), &monos, v))
        .collect()
}

/// True iff every generator maps each polynomial into their span.
pub fn invariance_check(r: &Rep, polys: &[MPoly]) -> Result<bool> {
    let (_, span) = poly_span(polys)?;
    let d = common_degree(polys)?;
    let monos = monomial_basis(r.dim(), d);
    for k in 0..r.group().num_generators() {
        let g = r.group().generator_index(k);
        for p in polys {
            if !span.contains(&apply_action(r, g, p)?.to_vector(&monos)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub label: String,
    pub coords: Vec<Mat>,
    pub space: Subspace,
    pub polys: Vec<MPoly>,
}

#[derive(Debug, Clone)]
pub struct IdealFamily {
    pub degree: u32,
    pub codim: u32,
    pub eta: Decomposition,
    pub grass: GrassData,
    pub samples: Vec<Sample>,
}

fn subsets(f: usize, c: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, f: usize, c: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == c {
            out.push(cur.clone());
            return;
        }
        for i in start..f {
            cur.push(i);
            rec(i + 1, f, c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, f, c, &mut Vec::new(), &mut out);
    out
}

/// Standard points (identity on a column subset) of a c×f block, in lex order.
pub fn standard_points(n: u32, c: usize, f: usize) -> Vec<Mat> {
    subsets(f, c)
        .into_iter()
        .map(|cols| {
            Mat::from_fn(n, c, f, |i, j| {
                if cols[i] == j {
                    CycElt::one(n)
                } else {
                    CycElt::zero(n)
                }
            })
        })
        .collect()
}

/// The all-ones point; for c > 1 the Vandermonde rows (j+1)^i keep full rank.
pub fn ones_point(n: u32, c: usize, f: usize) -> Mat {
    Mat::from_fn(n, c, f, |i, j| {
        CycElt::from_int(n, (j as i64 + 1).pow(i as u32))
    })
}

/// All families of t-dimensional submodules of R_d = Sym^d M^∨ with samples.
pub fn invariant_families(
    m: &Arc<Rep>,
    table: &CharacterTable,
    d: u32,
    t: u32,
    seed: u64,
) -> Result<Vec<IdealFamily>> {
    let rd = sym_power_rep(m, d)?;
    rd.memoize();
    let g = m.group();
    let chi = decompose(g, &rd.character(), table)?;
    let n = m.conductor();
    let vars = Vars::x(m.dim());
    let mut out = Vec::new();
    for eta in constituents_of_degree(&chi, table.degrees(), t) {
        let grass = grassmannian_data(&rd, table, &chi, &eta, seed)?;
        let per_block: Vec<Vec<Mat>> = grass
            .blocks
            .iter()
            .map(|b| standard_points(n, b.rank as usize, b.anchor.hom_basis.len()))
            .collect();
        let count = per_block.iter().map(Vec::len).max().unwrap_or(0);
        let mut choices: Vec<(String, Vec<Mat>)> = (0..count)
            .map(|k| {
                (
                    format!("e{k}"),
                    per_block
                        .iter()
                        .map(|pts| pts[k.min(pts.len() - 1)].clone())
                        .collect(),
                )
            })
            .collect();
        let ones = grass
            .blocks
            .iter()
            .map(|b| ones_point(n, b.rank as usize, b.anchor.hom_basis.len()))
            .collect();
        choices.push(("ones".into(), ones));
        let mut seen = HashSet::new();
        let mut samples = Vec::new();
        for (label, coords) in choices {
            if !seen.insert(coords.clone()) {
                continue;
            }
            let space = submodule_at(&rd, &grass, &coords)?;
            let polys = subspace_polys(vars, d, &space);
            samples.push(Sample {
                label,
                coords,
                space,
                polys,
            });
        }
        out.push(IdealFamily {
            degree: d,
            codim: t,
            eta,
            grass,
            samples,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SymplecticResult {
    /// Agreement set of the two determinant characters in the linear group.
    pub linear: Subgroup,
    /// Its image in the projective group, as sorted element indices there.
    pub projective: Vec<usize>,
    /// Whether each generator's projective image lies in the subgroup.
    pub generators_inside: Vec<bool>,
    /// Number of distinct values of det ρ(e) / det(ρ_d(e)|N).
    pub ratio_values: usize,
    /// Whether t·d equals the number of variables.
    pub td_matches: bool,
}

/// The subgroup on which det ρ and the determinant of the action on the
/// submodule agree, pushed to the projective image.
pub fn symplectic_subgroup(
    m: &Arc<Rep>,
    proj: &FiniteGroup,
    d: u32,
    submodule: &Subspace,
) -> Result<SymplecticResult> {
    let g = m.group();
    let rd = Arc::new(sym_power_rep(m, d)?);
    let on_n = rd.restrict(submodule)?;
    let map = (0..g.order())
        .map(|e| {
            proj.index_of(&Element::Matrix(m.element_matrix(e)))
                .ok_or_else(|| {
                    Error::Invariant("element has no image in the projective group".into())
                })
        })
        .collect::<Result<Vec<usize>>>()?;
    let mut ratios = HashSet::new();
    let mut agree = vec![false; g.order()];
    for e in 0..g.order() {
        let a = m.element_matrix(e).det()?;
        let b = on_n.element_matrix(e).det()?;
        agree[e] = a == b;
        ratios.insert(&a * &b.inv()?);
    }
    let linear = g.subgroup_where(|e| agree[e])?;
    let projective = linear.image(&map);
    let generators_inside = (0..g.num_generators())
        .map(|k| projective.binary_search(&map[g.generator_index(k)]).is_ok())
        .collect();
    Ok(SymplecticResult {
        linear,
        projective,
        generators_inside,
        ratio_values: ratios.len(),
        td_matches: submodule.dim() as u32 * d == m.dim() as u32,
    })
}

/// How off-diagonal entries of a quadric's symmetric matrix are formed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum GramConvention {
    /// G_ij = ½·coeff(xᵢxⱼ), so that xᵀGx = q.
    #[default]
    Half,
    /// G_ij = coeff(xᵢxⱼ), the unhalved coefficient matrix.
    Coefficient,
}

/// Symmetric matrix G with xᵀGx = q (off-diagonal entries are half coefficients).
pub fn gram_matrix(q: &MPoly) -> Result<Mat> {
    gram_matrix_with(q, GramConvention::Half)
}

pub fn gram_matrix_with(q: &MPoly, conv: GramConvention) -> Result<Mat> {
    if q.homogeneous_degree() != Some(2) {
        return Err(Error::Precondition(format!("{q} is not a quadric")));
    }
    let k = q.vars.count;
    let n = q.n;
    let half = match conv {
        GramConvention::Half => BigRational::new(1.into(), 2.into()),
        GramConvention::Coefficient => BigRational::from_integer(1.into()),
    };
    let mut g = Mat::zeros(n, k, k);
    for (e, c) in q.terms() {
        let idx: Vec<usize> = e
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| std::iter::repeat_n(i, p as usize))
            .collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            g.set(i, i, c.clone());
        } else {
            g.set(i, j, c.scale(&half));
            g.set(j, i, c.scale(&half));
        }
    }
    Ok(g)
}

/// det of Σ yᵢ·Gram(qᵢ) as a form in y₁…y_m, by Laplace expansion over column subsets.
pub fn symbolic_det(grams: &[Mat]) -> Result<MPoly> {
    let Some(first) = grams.first() else {
        return Err(Error::Precondition("no matrices".into()));
    };
    let k = first.rows();
    if k > 20 {
        return Err(Error::Dimension(
            "symbolic determinant limited to 20 rows".into(),
        ));
    }
    let n = first.conductor();
    let yv = Vars::y(grams.len());
    let entry = |i: usize, j: usize| -> MPoly {
        MPoly::from_terms(
            yv,
            n,
            grams.iter().enumerate().map(|(t, g)| {
                let mut e = vec![0; grams.len()];
                e[t] = 1;
                (e, g.get(i, j).clone())
            }),
        )
    };
    let mut dp: Vec<Option<MPoly>> = vec![None; 1 << k];
    dp[0] = Some(MPoly::constant(yv, CycElt::one(n)));
    for mask in 0usize..(1 << k) {
        let Some(cur) = dp[mask].take() else { continue };
        if cur.is_zero() {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == k {
            dp[mask] = Some(cur);
            continue;
        }
        for c in 0..k {
            if mask & (1 << c) != 0 {
                continue;
            }
            let e = entry(row, c);
            if e.is_zero() {
                continue;
            }
            let above = (mask >> (c + 1)).count_ones();
            let mut term = cur.mul(&e);
            if above % 2 == 1 {
                term = term.scale(&CycElt::from_int(n, -1));
            }
            let slot = &mut dp[mask | (1 << c)];
            *slot = Some(match slot.take() {
                Some(s) => s.add(&term),
                None => term,
            });
        }
    }
    Ok(dp[(1 << k) - 1]
        .take()
        .unwrap_or_else(|| MPoly::zero(yv, n)))
}

/// Δ(y) = det Gram(y₁q₁ + y₂q₂ + y₃q₃), made monic in lex order.
pub fn discriminant_curve(qs: &[MPoly]) -> Result<MPoly> {
    discriminant_curve_with(qs, GramConvention::Half)
}

pub fn discriminant_curve_with(qs: &[MPoly], conv: GramConvention) -> Result<MPoly> {
    if qs.len() != 3 {
        return Err(Error::Precondition(format!(
            "expected 3 quadrics, got {}",
            qs.len()
        )));
    }
    let grams = qs
        .iter()
        .map(|q| gram_matrix_with(q, conv))
        .collect::<Result<Vec<_>>>()?;
    Ok(symbolic_det(&grams)?.monic())
}

#[derive(Debug, Clone)]
pub struct PencilReport {
    /// w₁ and w₂: images of W₀'s basis under the two hom-basis maps, so both
    /// triples carry the same matrices of the group action.
    pub w1: Vec<MPoly>,
    pub w2: Vec<MPoly>,
    /// Coordinates flagged as degenerate: (1, 0) and (0, 1).
    pub degenerate: Vec<(i64, i64)>,
}

pub fn isotrivial_family_report(fam: &IdealFamily) -> Result<PencilReport> {
    if fam.grass.dimension != 1 {
        return Err(Error::NotAPencil(format!(
            "family has dimension {}",
            fam.grass.dimension
        )));
    }
    let [block] = fam.grass.blocks.as_slice() else {
        return Err(Error::NotAPencil(format!(
            "{} constituent blocks",
            fam.grass.blocks.len()
        )));
    };
    if block.anchor.hom_basis.len() != 2 || block.rank != 1 {
        return Err(Error::NotAPencil(format!(
            "block of rank {} with multiplicity {}",
            block.rank,
            block.anchor.hom_basis.len()
        )));
    }
    let vars = fam.samples[0].polys[0].vars();
    let n = vars_conductor(fam);
    let monos = monomial_basis(vars.count, fam.degree);
    let images = |h: &Mat| -> Vec<MPoly> {
        (0..h.cols())
            .map(|c| MPoly::from_vector(vars, n, &monos, &h.col(c)))
            .collect()
    };
    Ok(PencilReport {
        w1: images(&block.anchor.hom_basis[0]),
        w2: images(&block.anchor.hom_basis[1]),
        degenerate: vec![(1, 0), (0, 1)],
    })
}

fn vars_conductor(fam: &IdealFamily) -> u32 {
    fam.samples[0].space.conductor()
}

/// Finds λ with span{w₁ₖ + λ·w₂ₖ} equal to the given subspace; None if the
/// subspace is not a member of the pencil (or is the member at λ = ∞).
pub fn locate_in_pencil(fam: &IdealFamily, target: &Subspace) -> Result<Option<CycElt>> {
    isotrivial_family_report(fam)?;
    let block = &fam.grass.blocks[0];
    let (h1, h2) = (&block.anchor.hom_basis[0], &block.anchor.hom_basis[1]);
    let (n, rows, deg) = (h1.conductor(), h1.rows(), h1.cols());
    let Some(v) = target.basis_rows().into_iter().next() else {
        return Ok(None);
    };
    // Solve v = Σ αₖ w₁ₖ + Σ βₖ w₂ₖ through the nullspace of [w₁ | w₂ | v].
    let aug = Mat::from_fn(n, rows, 2 * deg + 1, |i, j| match j {
        j if j < deg => h1.get(i, j).clone(),
        j if j < 2 * deg => h2.get(i, j - deg).clone(),
        _ => v[i].clone(),
    });
    let Some(s) = aug
        .nullspace()
        .basis_rows()
        .into_iter()
        .find(|s| !s[2 * deg].is_zero())
    else {
        return Ok(None);
    };
    let scale = (-&s[2 * deg]).inv()?;
    let coef: Vec<CycElt> = s[..2 * deg].iter().map(|x| x * &scale).collect();
    let Some(k) = (0..deg).find(|&k| !coef[k].is_zero()) else {
        return Ok(None);
    };
    let lambda = &coef[deg + k] * &coef[k].inv()?;
    let member: Vec<Vector> = (0..deg)
        .map(|c| {
            h1.col(c)
                .iter()
                .zip(h2.col(c))
                .map(|(a, b)| a + &(&b * &lambda))
                .collect()
        })
        .collect();
    Ok((Subspace::span(n, rows, &member) == *target).then_some(lambda))
}
