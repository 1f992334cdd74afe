//! Finite-dimensional algebras and coalgebras by structure constants, and
//! relative tensor constructions over a designated subalgebra.
//!
//! An [`Algebra`] stores the full multiplication table `e_i e_j` as dense
//! vectors; a [`Coalgebra`] stores the comultiplication sparsely, since the
//! iterated coproduct expansions that drive the chain-level formulas stay
//! small exactly when the comultiplication is sparse.

use crate::field::Scalar;
use crate::linalg::{sparse_add_assign, Matrix, QuotientPresentation, SparseVec};
use crate::report::Check;
use crate::tensor::{basis_vec, dense_add_assign, dense_is_zero, Shape};

/// Unital associative algebra with a fixed basis.
#[derive(Clone, Debug)]
pub struct Algebra<F: Scalar> {
    pub dim: usize,
    /// `mult[i][j]` = coordinates of `e_i e_j`.
    pub mult: Vec<Vec<Vec<F>>>,
    pub unit: Vec<F>,
}

impl<F: Scalar> Algebra<F> {
    pub fn mul_basis(&self, i: usize, j: usize) -> &Vec<F> {
        &self.mult[i][j]
    }

    /// Product of two dense vectors.
    pub fn mul_vec(&self, a: &[F], b: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                dense_add_assign(&mut out, &self.mult[i][j], &x.mul(y));
            }
        }
        out
    }

    pub fn mul_many(&self, factors: &[&[F]]) -> Vec<F> {
        let mut acc = self.unit.clone();
        for f in factors {
            acc = self.mul_vec(&acc, f);
        }
        acc
    }

    /// Left multiplication operator `a ↦ v·a` is `right_mul`; `a ↦ a·v` uses
    /// `left_mul`.  Both as matrices on coordinates.
    pub fn left_mul_matrix(&self, v: &[F]) -> Matrix<F> {
        let cols = (0..self.dim).map(|j| self.mul_vec(v, &basis_vec::<F>(self.dim, j))).collect();
        Matrix::from_cols(self.dim, cols)
    }

    pub fn right_mul_matrix(&self, v: &[F]) -> Matrix<F> {
        let cols = (0..self.dim).map(|j| self.mul_vec(&basis_vec::<F>(self.dim, j), v)).collect();
        Matrix::from_cols(self.dim, cols)
    }

    pub fn verify(&self, label: &str) -> Vec<Check> {
        let mut checks = Vec::new();
        let mut assoc: Result<(), String> = Ok(());
        'outer: for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let lhs = self.mul_vec(&self.mult[i][j], &basis_vec::<F>(self.dim, k));
                    let rhs = self.mul_vec(&basis_vec::<F>(self.dim, i), &self.mult[j][k]);
                    if lhs != rhs {
                        assoc = Err(format!("associativity fails at basis triple ({i},{j},{k})"));
                        break 'outer;
                    }
                }
            }
        }
        checks.push(Check::of(format!("{label}: multiplication associative"), assoc));
        let mut unital: Result<(), String> = Ok(());
        for i in 0..self.dim {
            let e = basis_vec::<F>(self.dim, i);
            if self.mul_vec(&self.unit, &e) != e || self.mul_vec(&e, &self.unit) != e {
                unital = Err(format!("unit fails at basis element {i}"));
                break;
            }
        }
        checks.push(Check::of(format!("{label}: unit element"), unital));
        checks
    }
}

/// Coassociative counital coalgebra with a fixed basis; the comultiplication
/// is stored sparsely as `Δ(e_i) = Σ c · e_j ⊗ e_k`.
#[derive(Clone, Debug)]
pub struct Coalgebra<F: Scalar> {
    pub dim: usize,
    /// `comult[i]` = list of `(j, k, c)` terms of `Δ(e_i)`.
    pub comult: Vec<Vec<(usize, usize, F)>>,
    pub counit: Vec<F>,
}

impl<F: Scalar> Coalgebra<F> {
    /// Sweedler expansion of `Δ(v)` for a dense vector `v`.
    pub fn delta(&self, v: &[F]) -> Vec<(F, usize, usize)> {
        let mut acc: SparseVec<F> = SparseVec::new();
        let shape = Shape(vec![self.dim, self.dim]);
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, k, c) in &self.comult[i] {
                sparse_add_assign(&mut acc, shape.flatten(&[*j, *k]), &x.mul(c));
            }
        }
        acc.into_iter()
            .map(|(flat, c)| {
                let idx = shape.unflatten(flat);
                (c, idx[0], idx[1])
            })
            .collect()
    }

    /// Expansion of the iterated coproduct `Δ^{(n)}(v)` as a combination of
    /// basis tuples of length `n`; `n = 1` is the identity.
    pub fn delta_n(&self, v: &[F], n: usize) -> Vec<(F, Vec<usize>)> {
        assert!(n >= 1);
        let mut acc: SparseVec<F> = SparseVec::new();
        let shape = Shape(vec![self.dim; n]);
        self.delta_n_into(v, n, &shape, &mut acc);
        acc.into_iter().map(|(flat, c)| (c, shape.unflatten(flat))).collect()
    }

    fn delta_n_into(&self, v: &[F], n: usize, shape: &Shape, acc: &mut SparseVec<F>) {
        // Expand by repeatedly applying Δ to the last tensorand; by
        // coassociativity every expansion order yields the same result.
        let mut terms: Vec<(F, Vec<usize>)> =
            v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (x.clone(), vec![i])).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for (c, idx) in terms {
                let last = *idx.last().unwrap();
                for (j, k, d) in &self.comult[last] {
                    let mut idx2 = idx[..idx.len() - 1].to_vec();
                    idx2.push(*j);
                    idx2.push(*k);
                    next.push((c.mul(d), idx2));
                }
            }
            terms = next;
        }
        for (c, idx) in terms {
            sparse_add_assign(acc, shape.flatten(&idx), &c);
        }
    }

    pub fn counit_of(&self, v: &[F]) -> F {
        let mut acc = F::zero();
        for (x, e) in v.iter().zip(&self.counit) {
            acc = acc.add(&x.mul(e));
        }
        acc
    }

    pub fn verify(&self, label: &str) -> Vec<Check> {
        let mut checks = Vec::new();
        let shape = Shape(vec![self.dim; 3]);
        let mut coassoc: Result<(), String> = Ok(());
        for i in 0..self.dim {
            // (Δ ⊗ id)Δ vs (id ⊗ Δ)Δ on e_i.
            let mut left: SparseVec<F> = SparseVec::new();
            let mut right: SparseVec<F> = SparseVec::new();
            for (j, k, c) in &self.comult[i] {
                for (a, b, d) in &self.comult[*j] {
                    sparse_add_assign(&mut left, shape.flatten(&[*a, *b, *k]), &c.mul(d));
                }
                for (a, b, d) in &self.comult[*k] {
                    sparse_add_assign(&mut right, shape.flatten(&[*j, *a, *b]), &c.mul(d));
                }
            }
            if left != right {
                coassoc = Err(format!("coassociativity fails at basis element {i}"));
                break;
            }
        }
        checks.push(Check::of(format!("{label}: comultiplication coassociative"), coassoc));
        let mut counital: Result<(), String> = Ok(());
        for i in 0..self.dim {
            let mut l = vec![F::zero(); self.dim];
            let mut r = vec![F::zero(); self.dim];
            for (j, k, c) in &self.comult[i] {
                dense_add_assign(&mut l, &basis_vec::<F>(self.dim, *k), &c.mul(&self.counit[*j]));
                dense_add_assign(&mut r, &basis_vec::<F>(self.dim, *j), &c.mul(&self.counit[*k]));
            }
            let e = basis_vec::<F>(self.dim, i);
            if l != e || r != e {
                counital = Err(format!("counit fails at basis element {i}"));
                break;
            }
        }
        checks.push(Check::of(format!("{label}: counit"), counital));
        checks
    }
}

/// Module side marker for [`SidedModule`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A one-sided module over an algebra, given by its action on basis pairs.
#[derive(Clone, Debug)]
pub struct SidedModule<F: Scalar> {
    pub dim: usize,
    pub side: Side,
    /// `action[i]` = matrix of the action of the algebra basis vector `e_i`
    /// on module coordinates.
    pub action: Vec<Matrix<F>>,
}

impl<F: Scalar> SidedModule<F> {
    /// Action of a dense algebra vector as a matrix on module coordinates.
    pub fn act_matrix(&self, a: &[F]) -> Matrix<F> {
        let mut out = Matrix::zero(self.dim, self.dim);
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.action[i].scale(c));
            }
        }
        out
    }

    pub fn act(&self, a: &[F], m: &[F]) -> Vec<F> {
        self.act_matrix(a).apply(m)
    }

    /// Checks unitality and (one-sided) associativity against `alg`.
    pub fn verify(&self, alg: &Algebra<F>, label: &str) -> Vec<Check> {
        let mut checks = Vec::new();
        let unit_act = self.act_matrix(&alg.unit);
        checks.push(Check::of(
            format!("{label}: unit acts as identity"),
            if unit_act == Matrix::identity(self.dim) {
                Ok(())
            } else {
                Err("unit action is not the identity matrix".into())
            },
        ));
        let mut assoc: Result<(), String> = Ok(());
        'outer: for i in 0..alg.dim {
            for j in 0..alg.dim {
                let prod = self.act_matrix(&alg.mult[i][j]);
                let composed = match self.side {
                    Side::Left => self.action[i].mul(&self.action[j]),
                    Side::Right => self.action[j].mul(&self.action[i]),
                };
                if prod != composed {
                    assoc = Err(format!("action fails associativity at basis pair ({i},{j})"));
                    break 'outer;
                }
            }
        }
        checks.push(Check::of(format!("{label}: action associative"), assoc));
        checks
    }
}

/// Subalgebra given by an echelonised list of basis vectors in the ambient
/// algebra's coordinates.
#[derive(Clone, Debug)]
pub struct Subalgebra<F: Scalar> {
    pub basis: Vec<Vec<F>>,
}

impl<F: Scalar> Subalgebra<F> {
    pub fn from_span(span: &[Vec<F>]) -> Self {
        let m = Matrix::from_rows(span.to_vec());
        let (r, pivots) = m.rref();
        Subalgebra { basis: (0..pivots.len()).map(|i| r.row(i)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Checks closure under multiplication and membership of the unit.
    pub fn verify_closed(&self, alg: &Algebra<F>, label: &str) -> Vec<Check> {
        let mat = Matrix::from_cols(alg.dim, self.basis.clone());
        let mut result: Result<(), String> = Ok(());
        'outer: for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                if mat.solve(&alg.mul_vec(a, b)).is_none() {
                    result = Err(format!("product of subalgebra basis elements {i} and {j} leaves the span"));
                    break 'outer;
                }
            }
        }
        let mut checks = vec![Check::of(format!("{label}: closed under multiplication"), result)];
        checks.push(Check::of(
            format!("{label}: contains the unit"),
            if mat.solve(&alg.unit).is_some() { Ok(()) } else { Err("unit is outside the span".into()) },
        ));
        checks
    }
}

/// Tensor product `V ⊗_R W` of a right module and a left module over the same
/// algebra, as a quotient presentation of `V ⊗_k W`.
pub fn tensor_over<F: Scalar>(
    v: &SidedModule<F>,
    w: &SidedModule<F>,
    r_basis: &[Vec<F>],
) -> QuotientPresentation<F> {
    assert_eq!(v.side, Side::Right);
    assert_eq!(w.side, Side::Left);
    let shape = Shape(vec![v.dim, w.dim]);
    let mut relations = Vec::new();
    for r in r_basis {
        let vr = v.act_matrix(r);
        let rw = w.act_matrix(r);
        for i in 0..v.dim {
            for j in 0..w.dim {
                // (v_i · r) ⊗ w_j − v_i ⊗ (r · w_j)
                let mut rel: SparseVec<F> = SparseVec::new();
                for (a, c) in vr.column(i).iter().enumerate() {
                    sparse_add_assign(&mut rel, shape.flatten(&[a, j]), c);
                }
                for (b, c) in rw.column(j).iter().enumerate() {
                    sparse_add_assign(&mut rel, shape.flatten(&[i, b]), &c.neg());
                }
                if !rel.is_empty() {
                    relations.push(rel);
                }
            }
        }
    }
    QuotientPresentation::from_relations(shape.total(), relations)
}

/// Quotient of a coordinate space by the span of explicit vectors.
pub fn quotient_module<F: Scalar>(ambient: usize, killed: &[Vec<F>]) -> QuotientPresentation<F> {
    let relations = killed.iter().map(|v| {
        let mut rel: SparseVec<F> = SparseVec::new();
        for (i, c) in v.iter().enumerate() {
            sparse_add_assign(&mut rel, i, c);
        }
        rel
    });
    QuotientPresentation::from_relations(ambient, relations.collect::<Vec<_>>())
}

/// Coinvariants `M / [M, R]` of a bimodule: quotient by all
/// `m·r − r·m` for basis `m` and subalgebra basis `r`.
pub fn coinvariants<F: Scalar>(
    dim: usize,
    left: &SidedModule<F>,
    right: &SidedModule<F>,
    r_basis: &[Vec<F>],
) -> QuotientPresentation<F> {
    assert_eq!(left.side, Side::Left);
    assert_eq!(right.side, Side::Right);
    assert_eq!(left.dim, dim);
    assert_eq!(right.dim, dim);
    let mut relations = Vec::new();
    for r in r_basis {
        let lm = left.act_matrix(r);
        let rm = right.act_matrix(r);
        for i in 0..dim {
            let mut diff = rm.column(i);
            let l = lm.column(i);
            for (d, x) in diff.iter_mut().zip(&l) {
                *d = d.sub(x);
            }
            if !dense_is_zero(&diff) {
                let mut rel: SparseVec<F> = SparseVec::new();
                for (j, c) in diff.iter().enumerate() {
                    sparse_add_assign(&mut rel, j, c);
                }
                relations.push(rel);
            }
        }
    }
    QuotientPresentation::from_relations(dim, relations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rat, Scalar};

    /// Group algebra of the cyclic group of order `n` over the rationals.
    fn cyclic_group_algebra(n: usize) -> (Algebra<Rat>, Coalgebra<Rat>) {
        let mult = (0..n)
            .map(|i| (0..n).map(|j| basis_vec::<Rat>(n, (i + j) % n)).collect())
            .collect();
        let alg = Algebra { dim: n, mult, unit: basis_vec::<Rat>(n, 0) };
        let comult = (0..n).map(|i| vec![(i, i, Rat::from_i64(1))]).collect();
        let coalg = Coalgebra { dim: n, comult, counit: vec![Rat::from_i64(1); n] };
        (alg, coalg)
    }

    #[test]
    fn cyclic_group_algebra_verifies() {
        let (alg, coalg) = cyclic_group_algebra(3);
        for c in alg.verify("C3").into_iter().chain(coalg.verify("C3")) {
            assert!(c.ok, "{}: {:?}", c.name, c.witness);
        }
    }

    #[test]
    fn iterated_coproduct_of_grouplike() {
        let (_, coalg) = cyclic_group_algebra(2);
        let g = basis_vec::<Rat>(2, 1);
        let terms = coalg.delta_n(&g, 4);
        assert_eq!(terms, vec![(Rat::from_i64(1), vec![1, 1, 1, 1])]);
    }

    #[test]
    fn tensor_over_group_algebra_collapses() {
        // kC2 ⊗_{kC2} kC2 ≅ kC2: the balanced tensor product over the whole
        // algebra has dimension 2.
        let (alg, _) = cyclic_group_algebra(2);
        let left = SidedModule {
            dim: 2,
            side: Side::Left,
            action: (0..2).map(|i| alg.left_mul_matrix(&basis_vec::<Rat>(2, i))).collect(),
        };
        let right = SidedModule {
            dim: 2,
            side: Side::Right,
            action: (0..2).map(|i| alg.right_mul_matrix(&basis_vec::<Rat>(2, i))).collect(),
        };
        let full: Vec<Vec<Rat>> = (0..2).map(|i| basis_vec::<Rat>(2, i)).collect();
        let q = tensor_over(&right, &left, &full);
        assert_eq!(q.dim, 2);
    }

    #[test]
    fn coinvariants_of_commutative_action_are_everything() {
        let (alg, _) = cyclic_group_algebra(2);
        let left = SidedModule {
            dim: 2,
            side: Side::Left,
            action: (0..2).map(|i| alg.left_mul_matrix(&basis_vec::<Rat>(2, i))).collect(),
        };
        let right = SidedModule {
            dim: 2,
            side: Side::Right,
            action: (0..2).map(|i| alg.right_mul_matrix(&basis_vec::<Rat>(2, i))).collect(),
        };
        let full: Vec<Vec<Rat>> = (0..2).map(|i| basis_vec::<Rat>(2, i)).collect();
        let q = coinvariants(2, &left, &right, &full);
        assert_eq!(q.dim, 2);
    }
}
