//! Dense exact linear algebra over Q(ζₙ).
//!
//! Matrices act on column vectors. Subspaces are stored by a basis of row
//! vectors in reduced row echelon form, so equal subspaces have identical
//! representations.

use std::fmt;
use std::ops::Mul;

use num_rational::BigRational;

use crate::cyclo::{root_of_unity, CycElt};
use crate::error::{Error, Result};

pub type Vector = Vec<CycElt>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    n: u32,
    data: Vec<CycElt>,
}

impl Mat {
    pub fn zeros(n: u32, rows: usize, cols: usize) -> Mat {
        let z = CycElt::zero(n);
        Mat {
            rows,
            cols,
            n,
            data: vec![z; rows * cols],
        }
    }

    pub fn identity(n: u32, k: usize) -> Mat {
        let mut m = Mat::zeros(n, k, k);
        for i in 0..k {
            m.data[i * k + i] = CycElt::one(n);
        }
        m
    }

    pub fn scalar(c: &CycElt, k: usize) -> Mat {
        let mut m = Mat::zeros(c.conductor(), k, k);
        for i in 0..k {
            m.data[i * k + i] = c.clone();
        }
        m
    }

    /// Builds a matrix from rows; every entry must live in Q(ζₙ) (rational
    /// entries of other conductors are re-embedded).
    pub fn from_rows(n: u32, rows: Vec<Vec<CycElt>>) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension(format!(
                    "ragged rows: {} vs {c}",
                    row.len()
                )));
            }
            for e in row {
                data.push(e.embed(n)?);
            }
        }
        Ok(Mat {
            rows: r,
            cols: c,
            n,
            data,
        })
    }

    pub fn from_fn(
        n: u32,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> CycElt,
    ) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat {
            rows,
            cols,
            n,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(n: u32, rows: usize, cols: &[Vector]) -> Mat {
        Mat::from_fn(n, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    /// Parses a matrix of cyclotomic literals.
    pub fn parse(n: u32, rows: &[Vec<String>]) -> Result<Mat> {
        let parsed = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| CycElt::parse(s, n))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Mat::from_rows(n, parsed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycElt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycElt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycElt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[CycElt] {
        &self.data
    }

    pub fn embed(&self, m: u32) -> Result<Mat> {
        if m == self.n {
            return Ok(self.clone());
        }
        let data = self
            .data
            .iter()
            .map(|e| e.embed(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            n: m,
            data,
        })
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.n, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.n != other.n {
            return Err(Error::ConductorMismatch(self.n, other.n));
        }
        let mut acc: Vec<Option<CycElt>> = vec![None; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let p = a * b;
                    let slot = &mut acc[i * other.cols + j];
                    *slot = Some(match slot.take() {
                        Some(s) => s + p,
                        None => p,
                    });
                }
            }
        }
        let z = CycElt::zero(self.n);
        let data = acc
            .into_iter()
            .map(|e| e.unwrap_or_else(|| z.clone()))
            .collect();
        Ok(Mat {
            rows: self.rows,
            cols: other.cols,
            n: self.n,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[CycElt]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = CycElt::zero(self.n);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s = s + a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Mat, f: impl Fn(&CycElt, &CycElt) -> CycElt) -> Result<Mat> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("shape mismatch".into()));
        }
        if self.n != other.n {
            return Err(Error::ConductorMismatch(self.n, other.n));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            n: self.n,
            data,
        })
    }

    pub fn scale(&self, c: &CycElt) -> Mat {
        let data = self.data.iter().map(|a| a * c).collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            n: self.n,
            data,
        }
    }

    pub fn scale_rational(&self, r: &BigRational) -> Mat {
        let data = self.data.iter().map(|a| a.scale(r)).collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            n: self.n,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycElt::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// The scalar c when the matrix equals c·I.
    pub fn as_scalar(&self) -> Option<CycElt> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                let ok = if i == j { e == c } else { e.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c.clone())
    }

    pub fn trace(&self) -> Result<CycElt> {
        if !self.is_square() {
            return Err(Error::Dimension("trace of a non-square matrix".into()));
        }
        Ok((0..self.rows).fold(CycElt::zero(self.n), |s, i| s + self.get(i, i)))
    }

    pub fn pow(&self, k: u64) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Dimension("power of a non-square matrix".into()));
        }
        let mut acc = Mat::identity(self.n, self.rows);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.matmul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.matmul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<CycElt> {
        if !self.is_square() {
            return Err(Error::Dimension(
                "determinant of a non-square matrix".into(),
            ));
        }
        let k = self.rows;
        let mut a: Vec<Vec<CycElt>> = self.row_vecs();
        let mut det = CycElt::one(self.n);
        for c in 0..k {
            let Some(p) = (c..k).find(|&r| !a[r][c].is_zero()) else {
                return Ok(CycElt::zero(self.n));
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let piv = a[c][c].clone();
            det = &det * &piv;
            let inv = piv.inv()?;
            for r in c + 1..k {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] * &inv;
                for j in c..k {
                    if !a[c][j].is_zero() {
                        let t = &f * &a[c][j];
                        a[r][j] = &a[r][j] - &t;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let k = self.rows;
        let aug = Mat::from_fn(self.n, k, 2 * k, |i, j| {
            if j < k {
                self.get(i, j).clone()
            } else if j - k == i {
                CycElt::one(self.n)
            } else {
                CycElt::zero(self.n)
            }
        });
        let (r, rank, pivots) = aug.rref();
        if rank < k || pivots[..k] != (0..k).collect::<Vec<_>>()[..] {
            return Err(Error::Singular);
        }
        Ok(Mat::from_fn(self.n, k, k, |i, j| r.get(i, j + k).clone()))
    }

    /// Reduced row echelon form with leading-entry pivoting; returns the
    /// reduced matrix, the rank and the pivot columns.
    pub fn rref(&self) -> (Mat, usize, Vec<usize>) {
        let mut a: Vec<Vec<CycElt>> = self.row_vecs();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].inv().expect("nonzero pivot");
            if !inv.is_one() {
                for j in c..self.cols {
                    if !a[r][j].is_zero() {
                        a[r][j] = &a[r][j] * &inv;
                    }
                }
            }
            let prow = a[r].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for j in c..self.cols {
                    if !prow[j].is_zero() {
                        row[j] = &row[j] - &(&f * &prow[j]);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let m =
            Mat::from_rows(self.n, a).unwrap_or_else(|_| Mat::zeros(self.n, self.rows, self.cols));
        let m = if self.rows == 0 {
            Mat::zeros(self.n, 0, self.cols)
        } else {
            m
        };
        (m, r, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// {v : self·v = 0}.
    pub fn nullspace(&self) -> Subspace {
        let (r, rank, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![CycElt::zero(self.n); self.cols];
            v[f] = CycElt::one(self.n);
            for (i, &p) in pivots.iter().enumerate().take(rank) {
                v[p] = -r.get(i, f);
            }
            basis.push(v);
        }
        Subspace::span(self.n, self.cols, &basis)
    }

    pub fn vstack(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.embed(self.n)?.data);
        Ok(Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            n: self.n,
            data,
        })
    }

    /// Restriction of the operator to a stable subspace, in the coordinates of
    /// the subspace's echelon basis. Fails when the subspace is not stable.
    pub fn restrict_to(&self, space: &Subspace) -> Result<Mat> {
        let k = space.dim();
        let mut cols = Vec::with_capacity(k);
        for b in space.basis_rows() {
            let img = self.mul_vec(&b);
            let coords = space.coordinates(&img).ok_or_else(|| {
                Error::Precondition("subspace is not stable under the operator".into())
            })?;
            cols.push(coords);
        }
        Ok(Mat::from_cols(self.n, k, &cols))
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Mat[{}x{} over Q(z{})]\n{}",
            self.rows, self.cols, self.n, self
        )
    }
}

/// Lagrange-interpolation projector onto the λ-eigenspace of an operator of
/// finite order: ∏_{μ^order = 1, μ ≠ λ} (m − μI)/(λ − μ).
pub fn eigenprojection(m: &Mat, order: u32, lambda: &CycElt) -> Result<Mat> {
    if !m.is_square() {
        return Err(Error::Dimension(
            "eigenprojection of a non-square matrix".into(),
        ));
    }
    let n = m.conductor();
    let lambda = lambda.embed(n)?;
    if !m.pow(order as u64)?.is_identity() {
        return Err(Error::Precondition(format!(
            "operator does not satisfy m^{order} = I"
        )));
    }
    if !lambda.pow(order as u64).is_one() {
        return Err(Error::Precondition(format!(
            "eigenvalue is not an {order}-th root of unity"
        )));
    }
    let k = m.rows();
    let mut p = Mat::identity(n, k);
    for j in 0..order as i64 {
        let mu = root_of_unity(n, order, j)?;
        if mu == lambda {
            continue;
        }
        let factor = m.sub(&Mat::scalar(&mu, k))?.scale(&(&lambda - &mu).inv()?);
        p = p.matmul(&factor)?;
    }
    Ok(p)
}

/// A subspace of Q(ζₙ)^ambient, held as a canonical RREF row basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: u32, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Mat::zeros(n, 0, ambient),
            pivots: vec![],
        }
    }

    pub fn full(n: u32, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Mat::identity(n, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors.
    pub fn span(n: u32, ambient: usize, vectors: &[Vector]) -> Subspace {
        if vectors.is_empty() {
            return Subspace::zero(n, ambient);
        }
        let m = Mat::from_rows(n, vectors.to_vec()).expect("vectors of equal length");
        assert_eq!(
            m.cols(),
            ambient,
            "vector length differs from ambient dimension"
        );
        Self::row_space(&m)
    }

    pub fn row_space(m: &Mat) -> Subspace {
        let (r, rank, pivots) = m.rref();
        let rows: Vec<Vector> = (0..rank).map(|i| r.row(i).to_vec()).collect();
        let basis = if rank == 0 {
            Mat::zeros(m.conductor(), 0, m.cols())
        } else {
            Mat::from_rows(m.conductor(), rows).expect("rectangular")
        };
        Subspace {
            ambient: m.cols(),
            basis,
            pivots,
        }
    }

    pub fn column_space(m: &Mat) -> Subspace {
        Self::row_space(&m.transpose())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn conductor(&self) -> u32 {
        self.basis.conductor()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vector> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of v in the echelon basis, if v lies in the subspace.
    pub fn coordinates(&self, v: &[CycElt]) -> Option<Vector> {
        if v.len() != self.ambient {
            return None;
        }
        let n = self.conductor();
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = vec![CycElt::zero(n); self.ambient];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, b) in self.basis.row(i).iter().enumerate() {
                if !b.is_zero() {
                    rebuilt[j] = &rebuilt[j] + &(c * b);
                }
            }
        }
        (rebuilt.as_slice() == v).then_some(coords)
    }

    pub fn contains(&self, v: &[CycElt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis_rows().iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        Subspace::span(self.conductor(), self.ambient, &rows)
    }

    /// Linear forms vanishing on the subspace, as a subspace of the dual.
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.conductor(), self.ambient);
        }
        self.basis.nullspace()
    }

    /// True iff every operator maps the subspace into itself.
    pub fn is_stable_under(&self, ops: &[Mat]) -> bool {
        ops.iter().all(|m| {
            self.basis_rows()
                .iter()
                .all(|b| self.contains(&m.mul_vec(b)))
        })
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in {})\n{}",
            self.dim(),
            self.ambient,
            self.basis
        )
    }
}

/// Intersection of subspaces of a common ambient space.
pub fn intersect(spaces: &[Subspace]) -> Result<Subspace> {
    let Some(first) = spaces.first() else {
        return Err(Error::Precondition(
            "intersection of an empty family".into(),
        ));
    };
    if spaces.iter().any(|s| s.ambient() != first.ambient()) {
        return Err(Error::Dimension("ambient dimensions differ".into()));
    }
    let n = first.conductor();
    let mut rows = Vec::new();
    for s in spaces {
        rows.extend(s.annihilator().basis_rows());
    }
    if rows.is_empty() {
        return Ok(Subspace::full(n, first.ambient()));
    }
    let m = Mat::from_rows(n, rows)?;
    Ok(m.nullspace())
}
