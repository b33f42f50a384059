//! Class functions, irreducible character tables and the usual operations on
//! characters.
//!
//! Tables are computed by the Dixon–Schneider method: common eigenvectors of
//! the class-multiplication matrices are found over a prime field F_p with
//! p ≡ 1 (mod exponent), and each value is lifted to Q(ζ_exponent) from the
//! eigenvalue multiplicities of ρ(g).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclo::{root_of_unity, CycElt};
use crate::error::{Error, Result};
use crate::grp::{FiniteGroup, Subgroup};
use crate::repmod::Rep;

/// A function on conjugacy classes, in the class order of its group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassFunction {
    values: Vec<CycElt>,
}

impl ClassFunction {
    pub fn new(values: Vec<CycElt>) -> Result<ClassFunction> {
        let Some(first) = values.first() else {
            return Err(Error::Precondition("class function without values".into()));
        };
        let n = values
            .iter()
            .fold(first.conductor(), |acc, v| acc.lcm(&v.conductor()));
        let values = values
            .iter()
            .map(|v| v.embed(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassFunction { values })
    }

    pub fn trivial(g: &FiniteGroup, n: u32) -> ClassFunction {
        ClassFunction {
            values: vec![CycElt::one(n); g.num_classes()],
        }
    }

    pub fn values(&self) -> &[CycElt] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &CycElt {
        &self.values[class]
    }

    pub fn degree(&self) -> &CycElt {
        &self.values[0]
    }

    /// Degree as an integer, when it is one.
    pub fn degree_int(&self) -> Option<i64> {
        let r = self.values[0].to_rational()?;
        r.is_integer().then(|| r.to_integer().to_i64()).flatten()
    }

    pub fn conductor(&self) -> u32 {
        self.values[0].conductor()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn embed(&self, m: u32) -> Result<ClassFunction> {
        Ok(ClassFunction {
            values: self
                .values
                .iter()
                .map(|v| v.embed(m))
                .collect::<Result<_>>()?,
        })
    }

    fn common(&self, other: &ClassFunction) -> Result<(ClassFunction, ClassFunction)> {
        if self.len() != other.len() {
            return Err(Error::Dimension(
                "class functions of different groups".into(),
            ));
        }
        let n = self.conductor().lcm(&other.conductor());
        Ok((self.embed(n)?, other.embed(n)?))
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        let (a, b) = self.common(other)?;
        Ok(ClassFunction {
            values: a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<ClassFunction> {
        let (a, b) = self.common(other)?;
        Ok(ClassFunction {
            values: a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect(),
        })
    }

    /// Pointwise product (tensor product of characters).
    pub fn mul(&self, other: &ClassFunction) -> Result<ClassFunction> {
        let (a, b) = self.common(other)?;
        Ok(ClassFunction {
            values: a.values.iter().zip(&b.values).map(|(x, y)| x * y).collect(),
        })
    }

    pub fn scale_int(&self, k: i64) -> ClassFunction {
        let n = self.conductor();
        ClassFunction {
            values: self
                .values
                .iter()
                .map(|v| v * &CycElt::from_int(n, k))
                .collect(),
        }
    }

    pub fn conj(&self) -> ClassFunction {
        ClassFunction {
            values: self.values.iter().map(CycElt::conj).collect(),
        }
    }

    /// Value on a group element.
    pub fn at(&self, g: &FiniteGroup, element: usize) -> &CycElt {
        &self.values[g.class_of(element)]
    }
}

impl fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", v.join(", "))
    }
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    irreducibles: Vec<ClassFunction>,
    degrees: Vec<u32>,
    prime: u64,
}

impl CharacterTable {
    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irreducibles
    }

    pub fn irr(&self, i: usize) -> &ClassFunction {
        &self.irreducibles[i]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    /// The prime used for the modular eigenvector computation.
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn conductor(&self) -> u32 {
        self.irreducibles[0].conductor()
    }

    /// Indices of the degree-one characters.
    pub fn linear_characters(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degrees[i] == 1).collect()
    }

    /// Exact check of both orthogonality relations.
    pub fn verify_orthogonality(&self, g: &FiniteGroup) -> bool {
        let r = self.len();
        for i in 0..r {
            for j in 0..r {
                let want = if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                match inner_product(g, &self.irreducibles[i], &self.irreducibles[j]) {
                    Ok(v) if v == want => {}
                    _ => return false,
                }
            }
        }
        let n = self.conductor();
        for a in 0..r {
            for b in 0..r {
                let mut s = CycElt::zero(n);
                for mu in &self.irreducibles {
                    s = s + mu.value(a) * &mu.value(b).conj();
                }
                let want = if a == b {
                    g.centralizer_order(a) as i64
                } else {
                    0
                };
                if s != CycElt::from_int(n, want) {
                    return false;
                }
            }
        }
        true
    }
}

/// Multiplicity vector of a character over a table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decomposition {
    pub mult: Vec<u32>,
}

impl Decomposition {
    pub fn degree(&self, table: &CharacterTable) -> u32 {
        self.mult
            .iter()
            .zip(table.degrees())
            .map(|(m, d)| m * d)
            .sum()
    }

    pub fn character(&self, table: &CharacterTable) -> ClassFunction {
        let n = table.conductor();
        let k = table.irr(0).len();
        let mut values = vec![CycElt::zero(n); k];
        for (m, mu) in self.mult.iter().zip(table.irreducibles()) {
            if *m == 0 {
                continue;
            }
            let f = CycElt::from_int(n, *m as i64);
            for (v, x) in values.iter_mut().zip(mu.values()) {
                *v = &*v + &(&f * x);
            }
        }
        ClassFunction { values }
    }

    /// Pairing Σ e_μ f_μ.
    pub fn pairing(&self, other: &Decomposition) -> u64 {
        self.mult
            .iter()
            .zip(&other.mult)
            .map(|(a, b)| (*a as u64) * (*b as u64))
            .sum()
    }

    pub fn constituents(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, &m)| (i, m))
    }
}

/// ⟨a, b⟩ = (1/|G|) Σ_classes |cl|·a·conj(b); fails if the value is not rational.
pub fn inner_product(g: &FiniteGroup, a: &ClassFunction, b: &ClassFunction) -> Result<BigRational> {
    let (a, b) = a.common(b)?;
    if a.len() != g.num_classes() {
        return Err(Error::Dimension(
            "class function does not match the group".into(),
        ));
    }
    let n = a.conductor();
    let mut s = CycElt::zero(n);
    for (c, cl) in g.classes().iter().enumerate() {
        let t = a.value(c) * &b.value(c).conj();
        if !t.is_zero() {
            s = s + t.scale(&BigRational::from_integer(BigInt::from(cl.size())));
        }
    }
    let s = s.scale(&BigRational::new(BigInt::one(), BigInt::from(g.order())));
    s.to_rational()
        .ok_or_else(|| Error::NotACharacter(format!("pairing is not rational: {s}")))
}

pub fn decompose(
    g: &FiniteGroup,
    chi: &ClassFunction,
    table: &CharacterTable,
) -> Result<Decomposition> {
    let mut mult = Vec::with_capacity(table.len());
    for mu in table.irreducibles() {
        let m = inner_product(g, chi, mu)?;
        if !m.is_integer() || m.is_negative() {
            return Err(Error::NotACharacter(format!(
                "multiplicity {m} is not a nonnegative integer"
            )));
        }
        mult.push(
            m.to_integer()
                .to_u32()
                .ok_or_else(|| Error::NotACharacter("multiplicity overflow".into()))?,
        );
    }
    let d = Decomposition { mult };
    let rebuilt = d.character(table);
    let (x, y) = rebuilt.common(chi)?;
    if x != y {
        return Err(Error::NotACharacter(
            "not in the span of the irreducibles".into(),
        ));
    }
    Ok(d)
}

/// All sub-multiplicity vectors of total degree t, in lexicographic order.
pub fn constituents_of_degree(dec: &Decomposition, degrees: &[u32], t: u32) -> Vec<Decomposition> {
    fn rec(
        i: usize,
        left: u32,
        dec: &[u32],
        deg: &[u32],
        cur: &mut Vec<u32>,
        out: &mut Vec<Decomposition>,
    ) {
        if i == dec.len() {
            if left == 0 {
                out.push(Decomposition { mult: cur.clone() });
            }
            return;
        }
        for c in 0..=dec[i] {
            if c * deg[i] > left {
                break;
            }
            cur.push(c);
            rec(i + 1, left - c * deg[i], dec, deg, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if t == 0 {
        return out;
    }
    rec(0, t, &dec.mult, degrees, &mut Vec::new(), &mut out);
    out
}

/// Exterior power character by the Newton identity
/// t·λ_t(g) = Σ_{i=1}^t (−1)^{i−1} λ_{t−i}(g)·χ(gⁱ).
pub fn ext_power_char(g: &FiniteGroup, chi: &ClassFunction, t: u32) -> ClassFunction {
    power_char(g, chi, t, true)
}

/// Symmetric power character: d·h_d(g) = Σ_{k=1}^d χ(gᵏ)·h_{d−k}(g).
pub fn sym_power_char(g: &FiniteGroup, chi: &ClassFunction, d: u32) -> ClassFunction {
    power_char(g, chi, d, false)
}

fn power_char(g: &FiniteGroup, chi: &ClassFunction, t: u32, alternating: bool) -> ClassFunction {
    let n = chi.conductor();
    let values = (0..g.num_classes())
        .map(|c| {
            let mut lam = vec![CycElt::one(n)];
            for k in 1..=t as i64 {
                let mut s = CycElt::zero(n);
                for i in 1..=k {
                    let term = &lam[(k - i) as usize] * chi.value(g.class_power(c, i));
                    s = if alternating && i % 2 == 0 {
                        s - term
                    } else {
                        s + term
                    };
                }
                lam.push(s.scale(&BigRational::new(BigInt::one(), BigInt::from(k))));
            }
            lam.pop().unwrap()
        })
        .collect();
    ClassFunction { values }
}

/// det(η) = ∏ det(μ)^{e_μ}.
pub fn det_char(g: &FiniteGroup, dec: &Decomposition, table: &CharacterTable) -> ClassFunction {
    let mut acc = ClassFunction::trivial(g, table.conductor());
    for (i, m) in dec.constituents() {
        let mu = table.irr(i);
        let d = ext_power_char(g, mu, table.degrees()[i]);
        for _ in 0..m {
            acc = acc.mul(&d).expect("same group");
        }
    }
    acc
}

/// Z(χ): elements where χ(e)/χ(1) is a root of unity.
pub fn center_of_character(g: &FiniteGroup, chi: &ClassFunction) -> Result<Subgroup> {
    let d = chi.degree();
    if d.is_zero() {
        return Err(Error::Precondition("character of degree zero".into()));
    }
    let dinv = d.inv()?;
    let central: Vec<bool> = chi
        .values()
        .iter()
        .map(|v| (v * &dinv).is_root_of_unity())
        .collect();
    g.subgroup_where(|i| central[g.class_of(i)])
        .map_err(|e| Error::NotACharacter(format!("center is not a subgroup ({e})")))
}

pub fn character_of_rep(r: &Rep) -> ClassFunction {
    let g = r.group();
    let values = g
        .classes()
        .iter()
        .map(|c| r.element_matrix(c.representative).trace().expect("square"))
        .collect();
    ClassFunction { values }
}

// ---------- modular arithmetic ----------

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Least prime p ≡ 1 (mod e) with p > 2√|G|.
pub fn ds_prime(exponent: u64, order: usize) -> u64 {
    let mut p = 1;
    loop {
        p += exponent;
        if (p * p) as u128 > 4 * order as u128 && is_prime(p) {
            return p;
        }
    }
}

fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("primitive root exists")
}

/// Row-reduces a list of row vectors mod p; returns the reduced rows and pivots.
fn rref_mod(mut rows: Vec<Vec<u64>>, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        let prow = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Nullspace of a square matrix (rows) mod p.
fn nullspace_mod(m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let cols = m.first().map_or(0, Vec::len);
    let (r, pivots) = rref_mod(m, p);
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; cols];
        v[f] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - r[i][f]) % p;
        }
        out.push(v);
    }
    out
}

/// Complete irreducible character table, trivial character first, the rest
/// sorted by degree and then by values.
pub fn dixon_schneider(g: &FiniteGroup) -> Result<CharacterTable> {
    let r = g.num_classes();
    let order = g.order();
    let e = g.exponent();
    let p = ds_prime(e, order);
    let sizes: Vec<u64> = g.classes().iter().map(|c| c.size() as u64).collect();

    // a[j][k][l] = #{x ∈ C_j : x⁻¹·g_l ∈ C_k}; M_j has entries (k, l) ↦ a[j][k][l].
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    for l in 0..r {
        let gl = g.classes()[l].representative;
        for x in 0..order {
            let j = g.class_of(x);
            let k = g.class_of(g.mul(g.inverse(x), gl));
            a[j][k][l] += 1;
        }
    }
    for aj in a.iter_mut() {
        for row in aj.iter_mut() {
            for v in row.iter_mut() {
                *v %= p;
            }
        }
    }

    // Split common eigenspaces. Each space is an RREF row basis.
    let mut pending_left = 0;
    let mut done: Vec<Vec<u64>> = Vec::new();
    let mut pending: Vec<(Vec<Vec<u64>>, Vec<usize>)> = {
        let id: Vec<Vec<u64>> = (0..r)
            .map(|i| (0..r).map(|j| u64::from(i == j)).collect())
            .collect();
        vec![(id, (0..r).collect())]
    };
    for mj in a.iter().skip(1) {
        if pending.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for (basis, pivots) in pending {
            let s = basis.len();
            // Restricted action in basis coordinates: column i = coords of M·b_i.
            let images: Vec<Vec<u64>> = basis
                .iter()
                .map(|b| {
                    (0..r)
                        .map(|k| (0..r).fold(0, |acc, l| (acc + mj[k][l] * b[l]) % p))
                        .collect()
                })
                .collect();
            let a_res: Vec<Vec<u64>> = (0..s)
                .map(|row| (0..s).map(|col| images[col][pivots[row]]).collect())
                .collect();
            let mut found = 0;
            for lam in 0..p {
                if found == s {
                    break;
                }
                let shifted: Vec<Vec<u64>> = (0..s)
                    .map(|i| {
                        (0..s)
                            .map(|k| {
                                if i == k {
                                    (a_res[i][k] + p - lam) % p
                                } else {
                                    a_res[i][k]
                                }
                            })
                            .collect()
                    })
                    .collect();
                let ns = nullspace_mod(shifted, p);
                if ns.is_empty() {
                    continue;
                }
                found += ns.len();
                let vecs: Vec<Vec<u64>> = ns
                    .iter()
                    .map(|c| {
                        (0..r)
                            .map(|k| (0..s).fold(0, |acc, i| (acc + c[i] * basis[i][k]) % p))
                            .collect()
                    })
                    .collect();
                let (rb, pv) = rref_mod(vecs, p);
                if rb.len() == 1 {
                    done.push(rb.into_iter().next().unwrap());
                } else {
                    next.push((rb, pv));
                }
            }
            if found != s {
                return Err(Error::Invariant(
                    "class matrix is not diagonalizable mod p".into(),
                ));
            }
        }
        pending = next;
    }
    for (basis, _) in pending.drain(..) {
        if basis.len() == 1 {
            done.extend(basis);
        } else {
            pending_left += 1;
        }
    }
    if pending_left > 0 || done.len() != r {
        return Err(Error::Invariant(format!(
            "Dixon–Schneider split {} of {r} characters",
            done.len()
        )));
    }

    let inv_class: Vec<usize> = (0..r)
        .map(|c| g.class_of(g.inverse(g.classes()[c].representative)))
        .collect();
    let root = primitive_root(p);
    let omega = pow_mod(root, (p - 1) / e, p);
    let n = e as u32;
    let mut irreducibles = Vec::with_capacity(r);
    let mut degrees = Vec::with_capacity(r);
    for w in done {
        let w0 = inv_mod(w[0], p);
        let w: Vec<u64> = w.iter().map(|x| x * w0 % p).collect();
        let mut s = 0;
        for k in 0..r {
            s = (s + w[k] * w[inv_class[k]] % p * inv_mod(sizes[k] % p, p)) % p;
        }
        let d2 = (order as u64 % p) * inv_mod(s, p) % p;
        let d = (1..=p / 2)
            .find(|d| d * d % p == d2)
            .ok_or_else(|| Error::Invariant("degree is not a square mod p".into()))?;
        let chi_p: Vec<u64> = (0..r)
            .map(|k| d * w[k] % p * inv_mod(sizes[k] % p, p) % p)
            .collect();
        let mut values = Vec::with_capacity(r);
        for k in 0..r {
            let o = g.classes()[k].order as u64;
            let zeta = pow_mod(omega, e / o, p);
            let zinv = inv_mod(zeta, p);
            let oinv = inv_mod(o % p, p);
            let mut v = CycElt::zero(n);
            for j in 0..o {
                let zj = pow_mod(zinv, j, p);
                let mut m = 0;
                for l in 0..o {
                    m = (m + chi_p[g.class_power(k, l as i64)] * pow_mod(zj, l, p)) % p;
                }
                let m = m * oinv % p;
                if m > d {
                    return Err(Error::Invariant(format!(
                        "eigenvalue multiplicity {m} exceeds degree {d}"
                    )));
                }
                if m > 0 {
                    v = v + &CycElt::from_int(n, m as i64) * &root_of_unity(n, o as u32, j as i64)?;
                }
            }
            values.push(v);
        }
        irreducibles.push(ClassFunction { values });
        degrees.push(d as u32);
    }
    let mut idx: Vec<usize> = (0..r).collect();
    idx.sort_by(|&x, &y| {
        let tx = irreducibles[x].values.iter().all(CycElt::is_one);
        let ty = irreducibles[y].values.iter().all(CycElt::is_one);
        ty.cmp(&tx)
            .then(degrees[x].cmp(&degrees[y]))
            .then_with(|| irreducibles[x].cmp(&irreducibles[y]))
    });
    let irreducibles: Vec<ClassFunction> = idx.iter().map(|&i| irreducibles[i].clone()).collect();
    let degrees: Vec<u32> = idx.iter().map(|&i| degrees[i]).collect();
    if degrees
        .iter()
        .map(|&d| (d as usize) * (d as usize))
        .sum::<usize>()
        != order
    {
        return Err(Error::Invariant(
            "sum of squared degrees differs from the group order".into(),
        ));
    }
    Ok(CharacterTable {
        irreducibles,
        degrees,
        prime: p,
    })
}
