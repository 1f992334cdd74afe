//! Dense and sparse exact linear algebra.
//!
//! Everything downstream reduces to four primitives over an exact field:
//! reduced row echelon form with deterministic lowest-index pivoting, kernel
//! bases, linear solves, and quotient presentations.  A quotient of `k^n` by a
//! span of relation vectors is materialised as an explicit
//! projection/section pair ([`QuotientPresentation`]), so that maps between
//! quotients are honest matrices and well-definedness is checked, never
//! assumed.

use crate::field::Scalar;
use std::collections::BTreeMap;
use std::fmt;

/// Dense column-major-free matrix: `data[r * cols + c]`, acting on column
/// vectors (`v ↦ M v`).
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Scalar> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Scalar> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{}", self.at(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Scalar> Matrix<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r);
        }
        Matrix { rows: nrows, cols: ncols, data }
    }

    /// Builds the matrix whose `j`-th column is `cols[j]`.
    pub fn from_cols(ncols_rows: usize, cols: Vec<Vec<F>>) -> Self {
        let mut m = Matrix::zero(ncols_rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), ncols_rows, "bad column length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> Vec<F> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut t = Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &F) -> Matrix<F> {
        let data = self.data.iter().map(|a| a.mul(s)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix<F> {
        self.scale(&F::one().neg())
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out: Matrix<F> = Matrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(r, c).add(&a.mul(b));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![F::zero(); self.rows];
        for r in 0..self.rows {
            let mut acc = F::zero();
            for c in 0..self.cols {
                let a = self.at(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    acc = acc.add(&a.mul(&v[c]));
                }
            }
            out[r] = acc;
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zero(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.at(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.at(r, c).clone());
            }
        }
        out
    }

    /// Reduced row echelon form with deterministic pivoting: columns are
    /// scanned left to right and the first row with a nonzero entry becomes
    /// the pivot row.  Returns the RREF and the pivot column indices.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for pc in 0..m.cols {
            if pr >= m.rows {
                break;
            }
            let Some(sel) = (pr..m.rows).find(|&r| !m.at(r, pc).is_zero()) else {
                continue;
            };
            if sel != pr {
                for c in 0..m.cols {
                    let a = m.at(pr, c).clone();
                    let b = m.at(sel, c).clone();
                    m.set(pr, c, b);
                    m.set(sel, c, a);
                }
            }
            let inv = m.at(pr, pc).inv();
            for c in 0..m.cols {
                let v = m.at(pr, c).mul(&inv);
                m.set(pr, c, v);
            }
            for r in 0..m.rows {
                if r == pr || m.at(r, pc).is_zero() {
                    continue;
                }
                let factor = m.at(r, pc).clone();
                for c in 0..m.cols {
                    let v = m.at(r, c).sub(&factor.mul(m.at(pr, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(pc);
            pr += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column, ordered by the
    /// free column index; the vector for free column `j` has a `1` in slot
    /// `j`.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for j in 0..self.cols {
            if is_pivot[j] {
                continue;
            }
            let mut vec = vec![F::zero(); self.cols];
            vec[j] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                vec[p] = r.at(row, j).neg();
            }
            basis.push(vec);
        }
        basis
    }

    /// Solves `M x = b` for one particular solution (free variables zero).
    /// Returns `None` if the system is inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(self.rows, b.len());
        let aug = self.hstack(&Matrix::from_cols(self.rows, vec![b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.at(row, self.cols).clone();
        }
        Some(x)
    }

    /// Solves `M X = B` column by column; `None` if any column is
    /// inconsistent.
    pub fn solve_matrix(&self, b: &Matrix<F>) -> Option<Matrix<F>> {
        assert_eq!(self.rows, b.rows);
        let mut cols = Vec::with_capacity(b.cols);
        for j in 0..b.cols {
            cols.push(self.solve(&b.column(j))?);
        }
        Some(Matrix::from_cols(self.cols, cols))
    }

    /// Echelonised basis of the column span, as columns of the result.
    pub fn column_space_basis(&self) -> Matrix<F> {
        let rows: Vec<Vec<F>> = (0..self.cols).map(|c| self.column(c)).collect();
        let (r, pivots) = Matrix::from_rows(rows).rref();
        let basis: Vec<Vec<F>> = (0..pivots.len()).map(|i| r.row(i)).collect();
        Matrix::from_cols(self.rows, basis)
    }
}

/// Sparse vector over ambient basis indices.
pub type SparseVec<F> = BTreeMap<usize, F>;

pub fn sparse_add_assign<F: Scalar>(dst: &mut SparseVec<F>, idx: usize, v: &F) {
    if v.is_zero() {
        return;
    }
    let entry = dst.entry(idx).or_insert_with(F::zero);
    *entry = entry.add(v);
    if entry.is_zero() {
        dst.remove(&idx);
    }
}

pub fn sparse_to_dense<F: Scalar>(v: &SparseVec<F>, n: usize) -> Vec<F> {
    let mut out = vec![F::zero(); n];
    for (&i, x) in v {
        out[i] = x.clone();
    }
    out
}

/// Row echelon form for very sparse relation sets over a large ambient space.
///
/// Rows are kept as sorted index→coefficient maps; the result is fully
/// reduced (each pivot column is zero in every other row) with pivot columns
/// strictly increasing.  Deterministic: rows are inserted in input order and
/// reductions use the unique row with the matching pivot.
#[derive(Clone)]
pub struct SparseEchelon<F: Scalar> {
    /// pivot column → reduced row with leading coefficient 1 at that column.
    pub rows: BTreeMap<usize, SparseVec<F>>,
    pub ncols: usize,
}

impl<F: Scalar> SparseEchelon<F> {
    pub fn new(ncols: usize) -> Self {
        SparseEchelon { rows: BTreeMap::new(), ncols }
    }

    /// Reduces `v` against the current rows, returning the residue.
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut v = v.clone();
        loop {
            let Some((&lead, coeff)) = v.iter().next() else {
                return v;
            };
            let Some(row) = self.rows.get(&lead) else {
                // Leading term has no pivot row; residue settled at `lead`,
                // but later terms may still reduce.  Full reduction walks all
                // entries.
                return self.reduce_tail(v, lead);
            };
            let c = coeff.clone();
            for (&i, x) in row {
                let delta = c.mul(x).neg();
                sparse_add_assign(&mut v, i, &delta);
            }
        }
    }

    fn reduce_tail(&self, mut v: SparseVec<F>, settled: usize) -> SparseVec<F> {
        loop {
            let next = v.range((settled + 1)..).find_map(|(&i, c)| {
                self.rows.get(&i).map(|row| (i, c.clone(), row.clone()))
            });
            let Some((i, c, row)) = next else {
                return v;
            };
            for (&j, x) in &row {
                let delta = c.mul(x).neg();
                sparse_add_assign(&mut v, j, &delta);
            }
            debug_assert!(!v.contains_key(&i));
        }
    }

    /// Inserts `v` if independent of the current rows.  Returns `true` when
    /// the rank grew.
    pub fn insert(&mut self, v: &SparseVec<F>) -> bool {
        let mut res = self.reduce(v);
        let Some((&lead, coeff)) = res.iter().next() else {
            return false;
        };
        let inv = coeff.inv();
        for x in res.values_mut() {
            *x = x.mul(&inv);
        }
        // Back-substitute into existing rows so the form stays reduced.
        let keys: Vec<usize> = self.rows.keys().copied().collect();
        for k in keys {
            let row = self.rows.get(&k).unwrap();
            if let Some(c) = row.get(&lead).cloned() {
                let mut updated = row.clone();
                for (&i, x) in &res {
                    let delta = c.mul(x).neg();
                    sparse_add_assign(&mut updated, i, &delta);
                }
                self.rows.insert(k, updated);
            }
        }
        self.rows.insert(lead, res);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }
}

/// A quotient `k^ambient / span(relations)` presented by explicit matrices.
///
/// `proj · sect = identity` on the quotient and `ker(proj) = span(relations)`
/// hold by construction.  The quotient basis is the set of non-pivot ambient
/// coordinates of the echelonised relations, in increasing index order, so
/// the presentation is deterministic.
#[derive(Clone)]
pub struct QuotientPresentation<F: Scalar> {
    pub ambient: usize,
    pub dim: usize,
    /// `dim × ambient`: coordinates of an ambient vector in the quotient.
    pub proj: Matrix<F>,
    /// `ambient × dim`: preferred lift of each quotient basis vector.
    pub sect: Matrix<F>,
    /// Echelonised relations, for membership tests and witnesses.
    pub relations: SparseEchelon<F>,
}

impl<F: Scalar> QuotientPresentation<F> {
    pub fn from_relations(ambient: usize, relations: impl IntoIterator<Item = SparseVec<F>>) -> Self {
        let mut ech = SparseEchelon::new(ambient);
        for r in relations {
            ech.insert(&r);
        }
        Self::from_echelon(ambient, ech)
    }

    pub fn from_echelon(ambient: usize, ech: SparseEchelon<F>) -> Self {
        let free: Vec<usize> = (0..ambient).filter(|i| !ech.rows.contains_key(i)).collect();
        let dim = free.len();
        let mut proj = Matrix::zero(dim, ambient);
        let mut sect = Matrix::zero(ambient, dim);
        let slot: BTreeMap<usize, usize> = free.iter().copied().enumerate().map(|(j, i)| (i, j)).collect();
        for (j, &i) in free.iter().enumerate() {
            proj.set(j, i, F::one());
            sect.set(i, j, F::one());
        }
        for (&pivot, row) in &ech.rows {
            // e_pivot ≡ −Σ_{i free} row[i] e_i  modulo the relations.
            for (&i, c) in row {
                if i == pivot {
                    continue;
                }
                let j = slot[&i];
                proj.set(j, pivot, c.neg());
            }
        }
        QuotientPresentation { ambient, dim, proj, sect, relations: ech }
    }

    /// Full space, no relations.
    pub fn full(ambient: usize) -> Self {
        Self::from_relations(ambient, Vec::new())
    }

    pub fn project_sparse(&self, v: &SparseVec<F>) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim];
        for (&i, c) in v {
            for r in 0..self.dim {
                let p = self.proj.at(r, i);
                if !p.is_zero() {
                    out[r] = out[r].add(&p.mul(c));
                }
            }
        }
        out
    }
}

/// Failure witness for a map that does not descend to the quotients.
#[derive(Clone, Debug)]
pub struct IllDefinedWitness {
    /// Index (in input order) of the offending source relation.
    pub relation_index: usize,
    /// Its image in the target quotient, which should have been zero.
    pub image_in_target: Vec<String>,
}

/// Induces a map between quotient presentations from an ambient-level map.
///
/// `ambient_map(i)` must give the image of the `i`-th source ambient basis
/// vector as a sparse vector in the target ambient space.  Each source
/// relation is pushed through and projected to the target; any nonzero
/// residue aborts the construction with a witness.
pub fn induce_map<F: Scalar>(
    src: &QuotientPresentation<F>,
    dst: &QuotientPresentation<F>,
    ambient_map: impl Fn(usize) -> SparseVec<F>,
) -> Result<Matrix<F>, IllDefinedWitness> {
    let images: Vec<SparseVec<F>> = (0..src.ambient).map(&ambient_map).collect();
    for (k, (_, rel)) in src.relations.rows.iter().enumerate() {
        let mut img: SparseVec<F> = BTreeMap::new();
        for (&i, c) in rel {
            for (&j, x) in &images[i] {
                sparse_add_assign(&mut img, j, &c.mul(x));
            }
        }
        let coords = dst.project_sparse(&img);
        if coords.iter().any(|v| !v.is_zero()) {
            return Err(IllDefinedWitness {
                relation_index: k,
                image_in_target: coords.iter().map(|v| format!("{v}")).collect(),
            });
        }
    }
    // Matrix = dst.proj ∘ ambient_map ∘ src.sect; the section columns are
    // single ambient basis vectors, so this is a column lookup.
    let mut cols = Vec::with_capacity(src.dim);
    for j in 0..src.dim {
        let i = (0..src.ambient)
            .find(|&i| !src.sect.at(i, j).is_zero())
            .expect("section column cannot be zero");
        cols.push(dst.project_sparse(&images[i]));
    }
    Ok(Matrix::from_cols(dst.dim, cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rat, Scalar};

    fn rm(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rat::from_i64(x)).collect()).collect())
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rm(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(rm(&[&[1, 0], &[0, 1]]).rank(), 2);
        assert_eq!(Matrix::<Rat>::zero(3, 3).rank(), 0);
    }

    #[test]
    fn kernel_over_f2() {
        let m = Matrix::<Fp>::from_rows(vec![vec![Fp::new(1, 2), Fp::new(1, 2)]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![Fp::new(1, 2), Fp::new(1, 2)]);
    }

    #[test]
    fn solve_scalar_equation() {
        let m = rm(&[&[2]]);
        let x = m.solve(&[Rat::from_i64(1)]).unwrap();
        assert_eq!(x, vec![Rat::parse("1/2").unwrap()]);
        assert!(rm(&[&[0]]).solve(&[Rat::from_i64(1)]).is_none());
    }

    #[test]
    fn quotient_by_diagonal() {
        // k^2 / span{(1,-1)}: dimension 1, both basis vectors map to the
        // same class.
        let rel: SparseVec<Rat> =
            [(0, Rat::from_i64(1)), (1, Rat::from_i64(-1))].into_iter().collect();
        let q = QuotientPresentation::from_relations(2, vec![rel]);
        assert_eq!(q.dim, 1);
        let e0: SparseVec<Rat> = [(0, Rat::from_i64(1))].into_iter().collect();
        let e1: SparseVec<Rat> = [(1, Rat::from_i64(1))].into_iter().collect();
        assert_eq!(q.project_sparse(&e0), q.project_sparse(&e1));
        let pi_sigma = q.proj.mul(&q.sect);
        assert_eq!(pi_sigma, Matrix::identity(1));
    }

    #[test]
    fn induce_detects_ill_defined_maps() {
        // Source k^2/span{e0 - e1}; the swap-with-sign map e0 ↦ e0,
        // e1 ↦ -e1 to the full k^2 does not descend.
        let rel: SparseVec<Rat> =
            [(0, Rat::from_i64(1)), (1, Rat::from_i64(-1))].into_iter().collect();
        let src = QuotientPresentation::from_relations(2, vec![rel]);
        let dst = QuotientPresentation::<Rat>::full(2);
        let bad = induce_map(&src, &dst, |i| {
            let sign = if i == 0 { 1 } else { -1 };
            [(i, Rat::from_i64(sign))].into_iter().collect()
        });
        assert!(bad.is_err());
        // The identity does descend from the quotient to itself.
        let good = induce_map(&src, &src, |i| [(i, Rat::from_i64(1))].into_iter().collect());
        assert_eq!(good.unwrap(), Matrix::identity(1));
    }

    #[test]
    fn sparse_echelon_matches_dense_rank() {
        let rows: Vec<SparseVec<Rat>> = vec![
            [(0, Rat::from_i64(1)), (2, Rat::from_i64(2))].into_iter().collect(),
            [(0, Rat::from_i64(2)), (2, Rat::from_i64(4))].into_iter().collect(),
            [(1, Rat::from_i64(1)), (2, Rat::from_i64(1))].into_iter().collect(),
        ];
        let mut ech = SparseEchelon::new(3);
        for r in &rows {
            ech.insert(r);
        }
        assert_eq!(ech.rank(), 2);
        assert!(ech.contains(&rows[1]));
    }
}
