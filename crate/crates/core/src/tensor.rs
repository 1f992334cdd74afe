//! Multi-slot tensor bookkeeping.
//!
//! Ambient spaces are tensor products of small coordinate spaces ("slots").
//! A [`Shape`] flattens multi-indices to single ambient indices in row-major
//! order, and the expansion helpers turn a product of dense slot vectors into
//! a sparse ambient vector.  All the chain-level formulas in this crate are
//! evaluated term by term with these helpers and only then assembled into
//! matrices between quotient presentations.

use crate::field::Scalar;
use crate::linalg::{sparse_add_assign, SparseVec};

/// Row-major multi-index layout over a list of slot dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape(pub Vec<usize>);

impl Shape {
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.0.len());
        let mut out = 0;
        for (i, (&x, &d)) in idx.iter().zip(&self.0).enumerate() {
            assert!(x < d, "index {x} out of bounds for slot {i} of size {d}");
            out = out * d + x;
        }
        out
    }

    pub fn unflatten(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for (k, &d) in self.0.iter().enumerate().rev() {
            out[k] = i % d;
            i /= d;
        }
        out
    }
}

/// Accumulates `coeff · (f_1 ⊗ … ⊗ f_k)` into `out`, where `factors[j]` is a
/// dense vector over slot `j` of `shape`.
pub fn accumulate_product<F: Scalar>(
    shape: &Shape,
    coeff: &F,
    factors: &[Vec<F>],
    out: &mut SparseVec<F>,
) {
    assert_eq!(factors.len(), shape.rank());
    if coeff.is_zero() {
        return;
    }
    fn rec<F: Scalar>(
        shape: &Shape,
        factors: &[Vec<F>],
        slot: usize,
        idx: &mut Vec<usize>,
        c: F,
        out: &mut SparseVec<F>,
    ) {
        if slot == factors.len() {
            sparse_add_assign(out, shape.flatten(idx), &c);
            return;
        }
        for (i, v) in factors[slot].iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            idx.push(i);
            rec(shape, factors, slot + 1, idx, c.mul(v), out);
            idx.pop();
        }
    }
    rec(shape, factors, 0, &mut Vec::new(), coeff.clone(), out);
}

/// Dense basis vector of length `n`.
pub fn basis_vec<F: Scalar>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

pub fn dense_add_assign<F: Scalar>(dst: &mut [F], src: &[F], coeff: &F) {
    assert_eq!(dst.len(), src.len());
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = d.add(&s.mul(coeff));
        }
    }
}

pub fn dense_is_zero<F: Scalar>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rat, Scalar};

    #[test]
    fn flatten_roundtrip() {
        let s = Shape(vec![2, 3, 4]);
        for i in 0..s.total() {
            assert_eq!(s.flatten(&s.unflatten(i)), i);
        }
        assert_eq!(s.flatten(&[1, 2, 3]), 23);
    }

    #[test]
    fn product_accumulation() {
        let s = Shape(vec![2, 2]);
        let mut out = SparseVec::new();
        let a = vec![Rat::from_i64(1), Rat::from_i64(2)];
        let b = vec![Rat::from_i64(0), Rat::from_i64(3)];
        accumulate_product(&s, &Rat::from_i64(1), &[a, b], &mut out);
        // (e0 + 2 e1) ⊗ (3 e1) = 3 e01 + 6 e11.
        assert_eq!(out.get(&s.flatten(&[0, 1])), Some(&Rat::from_i64(3)));
        assert_eq!(out.get(&s.flatten(&[1, 1])), Some(&Rat::from_i64(6)));
        assert_eq!(out.len(), 2);
    }
}
