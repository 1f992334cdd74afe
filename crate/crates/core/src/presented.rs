//! Presented relative tensor spaces of the form
//! `H̄^{⊗s} ⊗_{Hᴸ} (tail)`, where `H̄ = H / Hᴸ` carries its canonical
//! `Hᴸ`-bimodule structure by multiplication and the tail is any quotient of
//! a product of coordinate slots with a left `Hᴸ`-action.
//!
//! The ambient space is `H^{⊗s} ⊗ tail-ambient`; the relations are
//!
//! 1. a barred slot holding a target-subalgebra element is zero,
//! 2. consecutive barred slots are balanced over the target subalgebra,
//! 3. the last barred slot is balanced against the tail action,
//! 4. the tail's own relations, tensored with every barred tuple.
//!
//! All downstream chain spaces (the resolution, the module complexes, and
//! the mixed-size complexes of a cleft extension) are instances of this one
//! builder.

use crate::field::Scalar;
use crate::linalg::{sparse_add_assign, QuotientPresentation, SparseVec};
use crate::tensor::{accumulate_product, basis_vec, Shape};
use crate::weak_hopf::WeakHopf;

#[derive(Clone)]
pub struct BarredSpace<F: Scalar> {
    /// Number of barred Hopf slots.
    pub s: usize,
    /// Full ambient shape: `s` copies of `dim H` followed by the tail slots.
    pub shape: Shape,
    pub pres: QuotientPresentation<F>,
}

/// Builds `H̄^{⊗s} ⊗_{Hᴸ} tail`.
///
/// `hl_act_tail(l, t)` must give the sparse tail vector `l · t` for a dense
/// subalgebra element `l` and a tail ambient basis index `t`; it is only
/// consulted when `s ≥ 1` and the tail is nonempty.
pub fn barred_tensor_space<F: Scalar>(
    h: &WeakHopf<F>,
    s: usize,
    tail_shape: &[usize],
    tail_relations: &[SparseVec<F>],
    hl_act_tail: impl Fn(&[F], usize) -> SparseVec<F>,
) -> BarredSpace<F> {
    let dim = h.dim();
    let mut slots = vec![dim; s];
    slots.extend_from_slice(tail_shape);
    let shape = Shape(slots);
    let tail_sh = Shape(tail_shape.to_vec());
    let tail_total = if tail_shape.is_empty() { 1 } else { tail_sh.total() };
    let barred_total = dim.pow(s as u32);
    let barred_sh = Shape(vec![dim; s]);

    let mut relations: Vec<SparseVec<F>> = Vec::new();
    let flatten_full = |barred: &[usize], tail_flat: usize| -> usize {
        // Row-major: barred block is the high part, tail the low part.
        let mut idx = 0;
        for (k, &b) in barred.iter().enumerate() {
            let _ = k;
            idx = idx * dim + b;
        }
        idx * tail_total + tail_flat
    };

    // (1) Target-subalgebra elements vanish in a barred slot.
    for slot in 0..s {
        for l in &h.hl_basis {
            for rest in 0..barred_total / dim {
                for t in 0..tail_total {
                    let mut rel: SparseVec<F> = SparseVec::new();
                    let mut others = barred_sh_partial(&barred_sh, slot, rest);
                    for (j, c) in l.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        others[slot] = j;
                        sparse_add_assign(&mut rel, flatten_full(&others, t), c);
                    }
                    if !rel.is_empty() {
                        relations.push(rel);
                    }
                }
            }
        }
    }

    // (2) Balancing between consecutive barred slots.
    for slot in 0..s.saturating_sub(1) {
        for l in &h.hl_basis {
            for full in 0..barred_total {
                for t in 0..tail_total {
                    let idx = barred_sh.unflatten(full);
                    let (a, b) = (idx[slot], idx[slot + 1]);
                    let mut rel: SparseVec<F> = SparseVec::new();
                    // (h_a l) in `slot`:
                    let al = h.alg.mul_vec(&basis_vec::<F>(dim, a), l);
                    for (j, c) in al.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut m = idx.clone();
                        m[slot] = j;
                        sparse_add_assign(&mut rel, flatten_full(&m, t), c);
                    }
                    // minus h_a ⊗ (l h_b):
                    let lb = h.alg.mul_vec(l, &basis_vec::<F>(dim, b));
                    for (j, c) in lb.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut m = idx.clone();
                        m[slot + 1] = j;
                        sparse_add_assign(&mut rel, flatten_full(&m, t), &c.neg());
                    }
                    if !rel.is_empty() {
                        relations.push(rel);
                    }
                }
            }
        }
    }

    // (3) Balancing of the last barred slot against the tail action.
    if s >= 1 && !tail_shape.is_empty() {
        for l in &h.hl_basis {
            for full in 0..barred_total {
                for t in 0..tail_total {
                    let idx = barred_sh.unflatten(full);
                    let a = idx[s - 1];
                    let mut rel: SparseVec<F> = SparseVec::new();
                    let al = h.alg.mul_vec(&basis_vec::<F>(dim, a), l);
                    for (j, c) in al.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut m = idx.clone();
                        m[s - 1] = j;
                        sparse_add_assign(&mut rel, flatten_full(&m, t), c);
                    }
                    for (&tj, c) in &hl_act_tail(l, t) {
                        sparse_add_assign(&mut rel, flatten_full(&idx, tj), &c.neg());
                    }
                    if !rel.is_empty() {
                        relations.push(rel);
                    }
                }
            }
        }
    }

    // (4) Tail relations under every barred tuple.
    for full in 0..barred_total {
        let idx = barred_sh.unflatten(full);
        for r in tail_relations {
            let mut rel: SparseVec<F> = SparseVec::new();
            for (&t, c) in r {
                sparse_add_assign(&mut rel, flatten_full(&idx, t), c);
            }
            if !rel.is_empty() {
                relations.push(rel);
            }
        }
    }

    let pres = QuotientPresentation::from_relations(shape.total(), relations);
    BarredSpace { s, shape, pres }
}

/// Fills every barred slot except `slot` from the flattened index `rest`
/// over the remaining `s − 1` slots; the `slot` entry is left as 0 for the
/// caller to overwrite.
fn barred_sh_partial(barred_sh: &Shape, slot: usize, rest: usize) -> Vec<usize> {
    let s = barred_sh.0.len();
    if s == 0 {
        return Vec::new();
    }
    let reduced = Shape(vec![barred_sh.0[0]; s - 1]);
    let rest_idx = if s == 1 { Vec::new() } else { reduced.unflatten(rest) };
    let mut out = Vec::with_capacity(s);
    let mut k = 0;
    for i in 0..s {
        if i == slot {
            out.push(0);
        } else {
            out.push(rest_idx[k]);
            k += 1;
        }
    }
    out
}

/// Convenience: accumulates `coeff · (f_1 ⊗ … ⊗ f_{s} ⊗ tail_vec)` into a
/// sparse ambient vector of a [`BarredSpace`], where the tail is itself given
/// as sparse entries over the tail shape.
pub fn accumulate_with_tail<F: Scalar>(
    space: &BarredSpace<F>,
    coeff: &F,
    barred_factors: &[Vec<F>],
    tail: &SparseVec<F>,
    out: &mut SparseVec<F>,
) {
    assert_eq!(barred_factors.len(), space.s);
    let dim = if space.s > 0 { space.shape.0[0] } else { 1 };
    let tail_total: usize = space.shape.0[space.s..].iter().product::<usize>().max(1);
    let barred_sh = Shape(vec![dim; space.s]);
    let mut acc: SparseVec<F> = SparseVec::new();
    if space.s == 0 {
        acc.insert(0, F::one());
    } else {
        accumulate_product(&barred_sh, &F::one(), barred_factors, &mut acc);
    }
    for (&b, cb) in &acc {
        for (&t, ct) in tail {
            sparse_add_assign(out, b * tail_total + t, &coeff.mul(&cb.mul(ct)));
        }
    }
}
