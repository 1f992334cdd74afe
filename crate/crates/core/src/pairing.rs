//! Cup and cap products on the reduced (co)chain complexes of a cleft
//! crossed product.
//!
//! On the reduced cochain spaces `X̄^{r,s}(E)` the cup product inserts the
//! middle barred slots between the two factors through the section and its
//! convolution inverse:
//!
//! `(β·β′)(h̄_{1,s″} ⊗ ā_{1,r″}) = (−1)^{r′s} γ⁻¹_×(h_{s+1,s″}⁽¹⁾) ·
//!   β(h̄_{1s} ⊗ h_{s+1,s″}⁽²⁾·ā_{1r}) · γ_×(h_{s+1,s″}⁽³⁾) ·
//!   β′(h̄_{s+1,s″}⁽⁴⁾ ⊗ ā_{r+1,r″})`,
//!
//! and the cap product of `y = h̄_{1s} ⊗ [m ⊗ ā_{1r}] ∈ X̄_{r,s}(M)` with
//! `β ∈ X̄^{r′,s′}(E)` is
//!
//! `y∗β = (−1)^{rs′+r′s′} h̄_{s′+1,s}⁽⁴⁾ ⊗ [m·γ⁻¹_×(h_{s′+1,s}⁽¹⁾) ·
//!   β(h̄_{1s′} ⊗ h_{s′+1,s}⁽²⁾·ā_{1r′}) · γ_×(h_{s′+1,s}⁽³⁾) ⊗ ā_{r′+1,r}]`.
//!
//! When the cocycle is valued in the stable subalgebra both operations
//! descend to (co)homology; the products `h_{⋯}⁽²⁾·ā` act sequentially with
//! the innermost factor first, and `γ⁻¹_×` multiplies in reversed order.

use crate::canonical::{accumulate_chain, chain_shape, eval_at, factor_through};
use crate::cleft::{CleftChains, CleftContext, CleftModule};
use crate::cleft_cochain::{CleftCochains, CoSpace};
use crate::field::Scalar;
use crate::linalg::{induce_map, Matrix, SparseVec};
use crate::presented::{accumulate_with_tail, BarredSpace};
use crate::tensor::basis_vec;

fn sign_pow<F: Scalar>(n: usize) -> F {
    if n % 2 == 0 {
        F::one()
    } else {
        F::one().neg()
    }
}

/// Value matrix of a cochain on its ambient domain.
fn on_ambient<F: Scalar>(space: &CoSpace<F>, coords: &[F], mdim: usize) -> Matrix<F> {
    let mut beta = Matrix::zero(mdim, space.hom.domain.dim);
    for (c, b) in coords.iter().zip(&space.hom.basis) {
        beta = beta.add(&b.scale(c));
    }
    beta.mul(&space.hom.pres_proj())
}

/// Cup product of two reduced cochains with regular coefficients, as
/// coordinates in the target bidegree `(r+r′, s+s′)`.
pub fn cup_coords<F: Scalar>(
    ctx: &CleftContext<F>,
    cm: &CleftModule<F>,
    src1: &CoSpace<F>,
    c1: &[F],
    src2: &CoSpace<F>,
    c2: &[F],
    dst: &CoSpace<F>,
) -> Vec<F> {
    let hd = ctx.hopf().dim();
    let ad = ctx.base().dim;
    let md = cm.over_e.dim;
    let (r, s) = (src1.r, src1.s);
    let (rp, sp) = (src2.r, src2.s);
    let ss = s + sp;
    let eh = |i: usize| basis_vec::<F>(hd, i);
    let ea = |i: usize| basis_vec::<F>(ad, i);
    let amb1 = on_ambient(src1, c1, md);
    let amb2 = on_ambient(src2, c2, md);
    let sign = sign_pow::<F>(rp * s);
    let total = dst.shape.total().max(1);
    let mut w = Matrix::zero(md, total);
    for flat in 0..total {
        let idx = dst.shape.unflatten(flat);
        // idx[0..ss] are barred slots, idx[ss..ss+rr] the reduced tail.
        let splits: Vec<Vec<(F, Vec<usize>)>> =
            (s..ss).map(|i| ctx.hopf().coalg.delta_n(&eh(idx[i]), 3 + r)).collect();
        let mut val = vec![F::zero(); md];
        crate::cyclic::for_each_combo(&splits, &mut |c, legs| {
            // Leg layout per middle slot: γ⁻¹ | r diagonal actions | γ | barred.
            let firsts: Vec<Vec<F>> = legs.iter().map(|l| eh(l[0])).collect();
            let first_refs: Vec<&[F]> = firsts.iter().map(|v| v.as_slice()).collect();
            let ginv = ctx.cp.gamma_inv_prod(&first_refs);
            let mut factors1: Vec<Vec<F>> = (0..s).map(|i| eh(idx[i])).collect();
            for t in 0..r {
                let mut a = ea(idx[ss + t]);
                for l in legs.iter().rev() {
                    a = ctx.cp.measure.act(&eh(l[1 + t]), &a);
                }
                factors1.push(a);
            }
            let refs1: Vec<&[F]> = factors1.iter().map(|v| v.as_slice()).collect();
            let v1 = eval_at(&amb1, &src1.shape, &refs1);
            let lasts: Vec<Vec<F>> = legs.iter().map(|l| eh(l[1 + r])).collect();
            let last_refs: Vec<&[F]> = lasts.iter().map(|v| v.as_slice()).collect();
            let gpl = ctx.cp.gamma_prod(&last_refs);
            let mut factors2: Vec<Vec<F>> = legs.iter().map(|l| eh(l[2 + r])).collect();
            for t in 0..rp {
                factors2.push(ea(idx[ss + r + t]));
            }
            let refs2: Vec<&[F]> = factors2.iter().map(|v| v.as_slice()).collect();
            let v2 = eval_at(&amb2, &src2.shape, &refs2);
            let term = ctx.cp.mul(&ctx.cp.mul(&ctx.cp.mul(&ginv, &v1), &gpl), &v2);
            for (a, x) in val.iter_mut().zip(&term) {
                *a = a.add(&sign.mul(c).mul(x));
            }
        });
        for i in 0..md {
            w.set(i, flat, val[i].clone());
        }
    }
    let v = factor_through(&w, &dst.hom.domain)
        .unwrap_or_else(|| panic!("cup value does not kill the domain relations"));
    dst.hom.coords(&v).unwrap_or_else(|| panic!("cup value leaves the constrained subspace"))
}

/// Matrix of capping with a fixed reduced cochain:
/// `X̄_{r,s}(M) → X̄_{r−r′, s−s′}(M)`.
pub fn cap_matrix<F: Scalar>(
    ctx: &CleftContext<F>,
    cm: &CleftModule<F>,
    beta_space: &CoSpace<F>,
    beta: &[F],
    src: &BarredSpace<F>,
    dst: &BarredSpace<F>,
    r: usize,
    s: usize,
) -> Matrix<F> {
    let hd = ctx.hopf().dim();
    let ad = ctx.base().dim;
    let md = cm.over_e.dim;
    let (rp, sp) = (beta_space.r, beta_space.s);
    assert!(r >= rp && s >= sp);
    let eh = |i: usize| basis_vec::<F>(hd, i);
    let ea = |i: usize| basis_vec::<F>(ad, i);
    let amb = on_ambient(beta_space, beta, md);
    let sign = sign_pow::<F>(r * sp + rp * sp);
    let src_tail = chain_shape(ctx.base(), &cm.over_a, r);
    let dst_tail = chain_shape(ctx.base(), &cm.over_a, r - rp);
    induce_map(&src.pres, &dst.pres, |flat| {
        let tail = flat % src_tail.total();
        let idx = src_tail.unflatten(tail);
        let mut barred = vec![0usize; s];
        let mut hi = flat / src_tail.total();
        for t in (0..s).rev() {
            barred[t] = hi % hd;
            hi /= hd;
        }
        let em = basis_vec::<F>(md, idx[0]);
        let splits: Vec<Vec<(F, Vec<usize>)>> =
            (sp..s).map(|i| ctx.hopf().coalg.delta_n(&eh(barred[i]), 3 + rp)).collect();
        let mut out: SparseVec<F> = SparseVec::new();
        crate::cyclic::for_each_combo(&splits, &mut |c, legs| {
            let firsts: Vec<Vec<F>> = legs.iter().map(|l| eh(l[0])).collect();
            let first_refs: Vec<&[F]> = firsts.iter().map(|v| v.as_slice()).collect();
            let ginv = ctx.cp.gamma_inv_prod(&first_refs);
            let mut factors: Vec<Vec<F>> = (0..sp).map(|i| eh(barred[i])).collect();
            for t in 0..rp {
                let mut a = ea(idx[1 + t]);
                for l in legs.iter().rev() {
                    a = ctx.cp.measure.act(&eh(l[1 + t]), &a);
                }
                factors.push(a);
            }
            let refs: Vec<&[F]> = factors.iter().map(|v| v.as_slice()).collect();
            let bval = eval_at(&amb, &beta_space.shape, &refs);
            let lasts: Vec<Vec<F>> = legs.iter().map(|l| eh(l[1 + rp])).collect();
            let last_refs: Vec<&[F]> = lasts.iter().map(|v| v.as_slice()).collect();
            let gpl = ctx.cp.gamma_prod(&last_refs);
            let m2 = cm.over_e.rmul(
                &cm.over_e.rmul(&cm.over_e.rmul(&em, &ginv), &bval),
                &gpl,
            );
            let mut tail_sv: SparseVec<F> = SparseVec::new();
            {
                let rest: Vec<Vec<F>> = (rp + 1..=r).map(|t| ea(idx[t])).collect();
                let rest_refs: Vec<&[F]> = rest.iter().map(|v| v.as_slice()).collect();
                accumulate_chain(&dst_tail, &sign.mul(c), &m2, &rest_refs, &mut tail_sv);
            }
            let barred_factors: Vec<Vec<F>> = legs.iter().map(|l| eh(l[2 + rp])).collect();
            accumulate_with_tail(dst, &F::one(), &barred_factors, &tail_sv, &mut out);
        });
        out
    })
    .unwrap_or_else(|w| panic!("cap ill-defined at ({r},{s}) by ({rp},{sp}): {w:?}"))
}

/// Cup product on the graded total cochain complex.
pub fn cup_total<F: Scalar>(
    ctx: &CleftContext<F>,
    cm: &CleftModule<F>,
    cochains: &CleftCochains<F>,
    n1: usize,
    z1: &[F],
    n2: usize,
    z2: &[F],
) -> Vec<F> {
    let n = n1 + n2;
    let mut out = vec![F::zero(); cochains.total.dims[n]];
    for &((r1, s1), o1) in &cochains.layout[n1] {
        let sp1 = &cochains.spaces[&(r1, s1)];
        let c1 = &z1[o1..o1 + sp1.hom.dim()];
        if c1.iter().all(|x| x.is_zero()) {
            continue;
        }
        for &((r2, s2), o2) in &cochains.layout[n2] {
            let sp2 = &cochains.spaces[&(r2, s2)];
            let c2 = &z2[o2..o2 + sp2.hom.dim()];
            if c2.iter().all(|x| x.is_zero()) {
                continue;
            }
            let key = (r1 + r2, s1 + s2);
            if let Some(&(_, off)) = cochains.layout[n].iter().find(|(k, _)| *k == key) {
                let dst = &cochains.spaces[&key];
                let v = cup_coords(ctx, cm, sp1, c1, sp2, c2, dst);
                for (i, x) in v.iter().enumerate() {
                    out[off + i] = out[off + i].add(x);
                }
            }
        }
    }
    out
}

/// Cap product of a total chain with a total cochain.
pub fn cap_total<F: Scalar>(
    ctx: &CleftContext<F>,
    cm: &CleftModule<F>,
    chains: &CleftChains<F>,
    cochains: &CleftCochains<F>,
    n: usize,
    y: &[F],
    np: usize,
    beta: &[F],
) -> Vec<F> {
    assert!(n >= np);
    let m = n - np;
    let mut out = vec![F::zero(); chains.total.dims[m]];
    for &((r, s), oy) in &chains.layout[n] {
        let src = &chains.spaces[&(r, s)];
        let yc = &y[oy..oy + src.pres.dim];
        if yc.iter().all(|x| x.is_zero()) {
            continue;
        }
        for &((rp, sp), ob) in &cochains.layout[np] {
            if rp > r || sp > s {
                continue;
            }
            let bsp = &cochains.spaces[&(rp, sp)];
            let bc = &beta[ob..ob + bsp.hom.dim()];
            if bc.iter().all(|x| x.is_zero()) {
                continue;
            }
            let key = (r - rp, s - sp);
            let dst = &chains.spaces[&key];
            if dst.pres.dim == 0 {
                continue;
            }
            let map = cap_matrix(ctx, cm, bsp, bc, src, dst, r, s);
            let v = map.apply(yc);
            if let Some(&(_, off)) = chains.layout[m].iter().find(|(k, _)| *k == key) {
                for (i, x) in v.iter().enumerate() {
                    out[off + i] = out[off + i].add(x);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{cyclic_group_algebra, dual_numbers};
    use crate::cleft::{cleft_chains, cleft_context_of};
    use crate::cleft_cochain::cleft_cochains;
    use crate::crossed::{trivial_representation_measure, WeakMeasure};
    use crate::field::Rat;

    fn smash_context() -> CleftContext<Rat> {
        let h = cyclic_group_algebra::<Rat>(2);
        let a = dual_numbers::<Rat>();
        let mut flip = Matrix::identity(2);
        flip.set(1, 1, Rat::one().neg());
        let action = vec![Matrix::identity(2), flip];
        cleft_context_of(&WeakMeasure::new(h, a, action)).unwrap()
    }

    fn trivial_base_context() -> CleftContext<Rat> {
        let h = cyclic_group_algebra::<Rat>(2);
        cleft_context_of(&trivial_representation_measure(&h)).unwrap()
    }

    /// Basis of the total cocycles in cochain degree `n`.
    fn cocycles(cochains: &crate::cleft_cochain::CleftCochains<Rat>, n: usize) -> Vec<Vec<Rat>> {
        cochains.total.d[n].kernel_basis()
    }

    /// Whether `v` is a coboundary in degree `n ≥ 1`.
    fn is_coboundary(
        cochains: &crate::cleft_cochain::CleftCochains<Rat>,
        n: usize,
        v: &[Rat],
    ) -> bool {
        if n == 0 {
            return v.iter().all(|x| x.is_zero());
        }
        cochains.total.d[n - 1].solve(v).is_some()
    }

    #[test]
    fn cup_product_preserves_cocycles_and_coboundaries() {
        for ctx in [smash_context(), trivial_base_context()] {
            let cm = CleftModule::regular(&ctx);
            let cochains = cleft_cochains(&ctx, &cm, 4).unwrap();
            for n1 in 0..=2usize {
                for n2 in 0..=(2 - n1) {
                    let n = n1 + n2;
                    let z1s = cocycles(&cochains, n1);
                    let z2s = cocycles(&cochains, n2);
                    for z1 in &z1s {
                        for z2 in &z2s {
                            let w = cup_total(&ctx, &cm, &cochains, n1, z1, n2, z2);
                            assert!(
                                cochains.total.d[n].apply(&w).iter().all(|x| x.is_zero()),
                                "cup of cocycles fails at ({n1},{n2})"
                            );
                        }
                    }
                    // Cup with a coboundary (either side) is a coboundary.
                    if n1 >= 1 {
                        for col in 0..cochains.total.d[n1 - 1].cols {
                            let b = cochains.total.d[n1 - 1].column(col);
                            for z2 in &z2s {
                                let w = cup_total(&ctx, &cm, &cochains, n1, &b, n2, z2);
                                assert!(
                                    is_coboundary(&cochains, n, &w),
                                    "coboundary ∪ cocycle not a coboundary at ({n1},{n2})"
                                );
                            }
                        }
                    }
                    if n2 >= 1 {
                        for col in 0..cochains.total.d[n2 - 1].cols {
                            let b = cochains.total.d[n2 - 1].column(col);
                            for z1 in &z1s {
                                let w = cup_total(&ctx, &cm, &cochains, n1, z1, n2, &b);
                                assert!(
                                    is_coboundary(&cochains, n, &w),
                                    "cocycle ∪ coboundary not a coboundary at ({n1},{n2})"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cap_product_descends_and_is_associative_at_class_level() {
        for ctx in [smash_context(), trivial_base_context()] {
            let cm = CleftModule::regular(&ctx);
            let chains = cleft_chains(&ctx, &cm, 4).unwrap();
            let cochains = cleft_cochains(&ctx, &cm, 4).unwrap();
            let cycles = |n: usize| -> Vec<Vec<Rat>> {
                if n == 0 {
                    (0..chains.total.dims[0])
                        .map(|i| {
                            let mut v = vec![Rat::zero(); chains.total.dims[0]];
                            v[i] = Rat::one();
                            v
                        })
                        .collect()
                } else {
                    chains.total.d[n - 1].kernel_basis()
                }
            };
            let is_chain_boundary = |n: usize, v: &[Rat]| -> bool {
                chains.total.d[n].solve(v).is_some()
            };
            // Descent: cycle ∗ cocycle is a cycle; cycle ∗ coboundary and
            // boundary ∗ cocycle are boundaries.
            for np in 0..=2usize {
                let n = 2;
                let zb = cocycles(&cochains, np);
                for y in &cycles(n) {
                    for b in &zb {
                        let w = cap_total(&ctx, &cm, &chains, &cochains, n, y, np, b);
                        if n - np >= 1 {
                            assert!(
                                chains.total.d[n - np - 1].apply(&w).iter().all(|x| x.is_zero()),
                                "cycle ∗ cocycle is not a cycle at degree {np}"
                            );
                        }
                    }
                    if np >= 1 {
                        for col in 0..cochains.total.d[np - 1].cols {
                            let b = cochains.total.d[np - 1].column(col);
                            let w = cap_total(&ctx, &cm, &chains, &cochains, n, y, np, &b);
                            assert!(
                                is_chain_boundary(n - np, &w),
                                "cycle ∗ coboundary is not a boundary at degree {np}"
                            );
                        }
                    }
                }
            }
            // Associativity at class level: (y ∗ β) ∗ β′ − y ∗ (β·β′) is a
            // boundary for cycles and cocycles.
            for (n1, n2) in [(1usize, 1usize), (1, 0), (0, 1), (0, 0)] {
                let n = 2;
                let m = n - n1 - n2;
                for y in &cycles(n) {
                    for b1 in &cocycles(&cochains, n1) {
                        for b2 in &cocycles(&cochains, n2) {
                            let lhs = {
                                let w = cap_total(&ctx, &cm, &chains, &cochains, n, y, n1, b1);
                                cap_total(&ctx, &cm, &chains, &cochains, n - n1, &w, n2, b2)
                            };
                            let rhs = {
                                let bb = cup_total(&ctx, &cm, &cochains, n1, b1, n2, b2);
                                cap_total(&ctx, &cm, &chains, &cochains, n, y, n1 + n2, &bb)
                            };
                            let diff: Vec<Rat> =
                                lhs.iter().zip(&rhs).map(|(a, b)| a.sub(b)).collect();
                            assert!(
                                is_chain_boundary(m, &diff),
                                "cap associativity fails at ({n1},{n2})"
                            );
                        }
                    }
                }
            }
        }
    }
}
