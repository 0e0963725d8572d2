//! Dense exact-rational matrices with canonical kernel/image/cokernel bases.
//!
//! Every rank computed anywhere in this crate flows through this module. All
//! arithmetic is over `BigRational`, so entries stay in lowest terms with a
//! positive denominator and ranks are exact. Subspaces are normalized to
//! reduced row echelon form, which makes equality of subspaces a structural
//! comparison.

use num::{BigRational, One, Signed, Zero};

use crate::error::{EngineError, Result};

pub type Rational = BigRational;

/// Shorthand for an exact rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for an exact rational fraction.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// A dense rows×cols matrix over the rationals, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl std::fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        RationalMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer-literal constructor, mostly for tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Rational> {
        (0..self.cols).map(|c| self.get(r, c).clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c).clone() + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c) * &v[c])
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.cols, "vstack shape mismatch");
        let mut rows: Vec<Vec<Rational>> = (0..self.rows).map(|r| self.row(r)).collect();
        rows.extend((0..other.rows).map(|r| other.row(r)));
        Self::from_rows(rows)
    }

    /// Reduced row echelon form. Returns (rref, pivot column indices).
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..m.cols {
            if lead >= m.rows {
                break;
            }
            let pivot_row = (lead..m.rows).find(|&r| !m.get(r, col).is_zero());
            let pivot_row = match pivot_row {
                Some(r) => r,
                None => continue,
            };
            for c in 0..m.cols {
                let tmp = m.get(pivot_row, c).clone();
                m.set(pivot_row, c, m.get(lead, c).clone());
                m.set(lead, c, tmp);
            }
            let inv = {
                let p = m.get(lead, col).clone();
                Rational::one() / p
            };
            for c in 0..m.cols {
                let v = m.get(lead, c) * &inv;
                m.set(lead, c, v);
            }
            for r in 0..m.rows {
                if r != lead && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    for c in 0..m.cols {
                        let v = m.get(r, c).clone() - &f * m.get(lead, c);
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (m, pivots)
    }

    /// Rank of the matrix (dimension of its column space).
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of {v : Mv = 0}.
    pub fn kernel_basis(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<usize> = pivots.clone();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &pc) in pivot_set.iter().enumerate() {
                let coeff = r.get(row, free).clone();
                if !coeff.is_zero() {
                    v[pc] = -coeff;
                }
            }
            basis.push(v);
        }
        Subspace::from_rows(self.cols, basis)
    }

    /// Canonical basis of the column space.
    pub fn image_basis(&self) -> Subspace {
        let cols: Vec<Vec<Rational>> = (0..self.cols).map(|c| self.col(c)).collect();
        Subspace::from_rows(self.rows, cols)
    }

    /// Completes the image of `self` to the ambient target space.
    ///
    /// Returns representatives (standard basis vectors on the non-pivot
    /// coordinates of the image) together with the projection matrix that
    /// kills the image and maps the j-th representative to the j-th
    /// coordinate.
    pub fn cokernel(&self) -> (Subspace, RationalMatrix) {
        cokernel_of(&self.image_basis())
    }

    /// Solves `self * x = b`; `None` when inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Self::zero(self.rows, self.cols + 1);
        for (r, rhs) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, rhs.clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }
}

/// Cokernel of an arbitrary subspace of the ambient space.
pub fn cokernel_of(image: &Subspace) -> (Subspace, RationalMatrix) {
    let ambient = image.ambient_dim();
    let pivots = image.pivots();
    let reps: Vec<usize> = (0..ambient).filter(|c| !pivots.contains(c)).collect();
    // projection: v minus its image part, read off on the representative
    // coordinates. Because the image basis is in RREF with pivot coordinates
    // `pivots`, the image component of v is determined by v's pivot coords.
    let mut proj = RationalMatrix::zero(reps.len(), ambient);
    for (k, &rc) in reps.iter().enumerate() {
        proj.set(k, rc, Rational::one());
    }
    for (row, &pc) in pivots.iter().enumerate() {
        // subtract (v[pc] * image_row) from v; only representative coords matter
        for (k, &rc) in reps.iter().enumerate() {
            let v = proj.get(k, pc).clone() - image.basis_entry(row, rc);
            proj.set(k, pc, v);
        }
    }
    let rep_rows: Vec<Vec<Rational>> = reps
        .iter()
        .map(|&rc| {
            let mut v = vec![Rational::zero(); ambient];
            v[rc] = Rational::one();
            v
        })
        .collect();
    (Subspace::from_rows_unchecked(ambient, rep_rows, reps), proj)
}

/// A linear subspace with a canonical reduced-row-echelon basis.
///
/// Two equal subspaces always hold identical stored bases, so `==` is a
/// genuine subspace equality test.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "Subspace dim {} in ambient {} [",
            self.dim(),
            self.ambient
        )?;
        for b in &self.basis {
            let row: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = Rational::one();
                v
            })
            .collect();
        Subspace::from_rows(ambient, rows)
    }

    /// Canonicalizes a spanning set into an RREF basis.
    pub fn from_rows(ambient: usize, rows: Vec<Vec<Rational>>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ambient, "spanning vector has wrong dimension");
        }
        if rows.is_empty() {
            return Subspace::zero(ambient);
        }
        let (rref, pivots) = RationalMatrix::from_rows(rows).rref();
        let basis: Vec<Vec<Rational>> = (0..pivots.len()).map(|r| rref.row(r)).collect();
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    fn from_rows_unchecked(ambient: usize, basis: Vec<Vec<Rational>>, pivots: Vec<usize>) -> Self {
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    fn basis_entry(&self, row: usize, col: usize) -> Rational {
        self.basis[row][col].clone()
    }

    /// Reduces `v` against the basis; the remainder is zero iff `v` lies in
    /// the subspace.
    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut w = v.to_vec();
        for (row, &pc) in self.pivots.iter().enumerate() {
            if !w[pc].is_zero() {
                let f = w[pc].clone();
                for (c, entry) in w.iter_mut().enumerate() {
                    let nv = entry.clone() - &f * &self.basis[row][c];
                    *entry = nv;
                }
            }
        }
        w
    }

    /// Membership test. Errors on a dimension mismatch.
    pub fn member(&self, v: &[Rational]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(EngineError::DimensionMismatch {
                expected: self.ambient,
                got: v.len(),
            });
        }
        Ok(self.reduce(v).iter().all(|x| x.is_zero()))
    }

    /// Coordinates of `v` in the stored basis, when `v` is a member.
    pub fn coordinates_of(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if v.len() != self.ambient {
            return None;
        }
        let coords: Vec<Rational> = self.pivots.iter().map(|&pc| v[pc].clone()).collect();
        let mut check = vec![Rational::zero(); self.ambient];
        for (row, c) in coords.iter().enumerate() {
            for (j, entry) in check.iter_mut().enumerate() {
                let nv = entry.clone() + c * &self.basis[row][j];
                *entry = nv;
            }
        }
        if check == v {
            Some(coords)
        } else {
            None
        }
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.basis.clone();
        rows.extend(other.basis.clone());
        Subspace::from_rows(self.ambient, rows)
    }

    /// The subspace as a matrix whose rows are the basis vectors.
    pub fn as_matrix(&self) -> RationalMatrix {
        if self.basis.is_empty() {
            RationalMatrix::zero(0, self.ambient)
        } else {
            RationalMatrix::from_rows(self.basis.clone())
        }
    }
}

/// Renders a rational without superfluous "/1".
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// True when the rational is a (possibly negative) integer.
pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Extracts an i64 from an integral rational.
pub fn to_i64(x: &Rational) -> Option<i64> {
    if !is_integer(x) {
        return None;
    }
    let n = x.numer();
    let digits = n.to_string();
    digits.parse::<i64>().ok().filter(|_| n.abs().bits() < 63)
}
