//! Canonical example constructors.
//!
//! These builders produce the structures used throughout the test suite and
//! the CLI: group algebras of cyclic groups, groupoid algebras of pair
//! groupoids (including the discrete case, a product of base fields), and
//! measured/cocycle data for the standard crossed products.

use crate::algebra::{Algebra, Coalgebra};
use crate::field::Scalar;
use crate::linalg::Matrix;
use crate::tensor::basis_vec;
use crate::weak_hopf::WeakHopf;

/// Group algebra of the cyclic group of order `n`: basis `g^0 … g^{n-1}`,
/// group-like coproduct, antipode `g ↦ g^{-1}`.
pub fn cyclic_group_algebra<F: Scalar>(n: usize) -> WeakHopf<F> {
    assert!(n >= 1);
    let mult: Vec<Vec<Vec<F>>> =
        (0..n).map(|i| (0..n).map(|j| basis_vec::<F>(n, (i + j) % n)).collect()).collect();
    let alg = Algebra { dim: n, mult, unit: basis_vec::<F>(n, 0) };
    let comult = (0..n).map(|i| vec![(i, i, F::one())]).collect();
    let coalg = Coalgebra { dim: n, comult, counit: vec![F::one(); n] };
    let mut antipode = Matrix::zero(n, n);
    for i in 0..n {
        antipode.set((n - i) % n, i, F::one());
    }
    WeakHopf::new(alg, coalg, antipode)
}

/// Groupoid algebra of the pair groupoid on `n` objects: basis `e_{xy}` of
/// arrows `y → x`, product `e_{xy} e_{zw} = δ_{yz} e_{xw}`, group-like
/// coproduct, antipode `e_{xy} ↦ e_{yx}`.
///
/// For `n = 1` this is the base field; the counital subalgebras have
/// dimension `n` (the span of the identity arrows), so for `n ≥ 2` the
/// coproduct of the unit is not `1 ⊗ 1` and the structure is genuinely weak.
pub fn pair_groupoid_algebra<F: Scalar>(n: usize) -> WeakHopf<F> {
    assert!(n >= 1);
    let dim = n * n;
    let idx = |x: usize, y: usize| x * n + y;
    let mut mult = vec![vec![vec![F::zero(); dim]; dim]; dim];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    if y == z {
                        mult[idx(x, y)][idx(z, w)] = basis_vec::<F>(dim, idx(x, w));
                    }
                }
            }
        }
    }
    let mut unit = vec![F::zero(); dim];
    for x in 0..n {
        unit[idx(x, x)] = F::one();
    }
    let alg = Algebra { dim, mult, unit };
    let comult = (0..dim).map(|i| vec![(i, i, F::one())]).collect();
    let coalg = Coalgebra { dim, comult, counit: vec![F::one(); dim] };
    let mut antipode = Matrix::zero(dim, dim);
    for x in 0..n {
        for y in 0..n {
            antipode.set(idx(y, x), idx(x, y), F::one());
        }
    }
    WeakHopf::new(alg, coalg, antipode)
}

/// Product of `n` copies of the base field, as the groupoid algebra of the
/// discrete groupoid on `n` objects: orthogonal idempotents `e_x`, group-like
/// coproduct, identity antipode.
pub fn field_product_algebra<F: Scalar>(n: usize) -> WeakHopf<F> {
    assert!(n >= 1);
    let mult: Vec<Vec<Vec<F>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { basis_vec::<F>(n, i) } else { vec![F::zero(); n] })
                .collect()
        })
        .collect();
    let alg = Algebra { dim: n, mult, unit: vec![F::one(); n] };
    let comult = (0..n).map(|i| vec![(i, i, F::one())]).collect();
    let coalg = Coalgebra { dim: n, comult, counit: vec![F::one(); n] };
    WeakHopf::new(alg, coalg, Matrix::identity(n))
}

/// Reinterprets every structure constant of a prime-field weak Hopf algebra
/// in `F_p`.  The generic builders produce modulus-free sentinel scalars;
/// without pinning, arithmetic would behave like characteristic zero.
pub fn pin_hopf_modulus(h: &WeakHopf<crate::field::Fp>, p: u64) -> WeakHopf<crate::field::Fp> {
    use crate::field::Fp;
    let pin = |x: &Fp| Fp::new(x.value, p);
    let alg = Algebra {
        dim: h.alg.dim,
        mult: h.alg.mult.iter().map(|r| r.iter().map(|v| v.iter().map(pin).collect()).collect()).collect(),
        unit: h.alg.unit.iter().map(pin).collect(),
    };
    let coalg = Coalgebra {
        dim: h.coalg.dim,
        comult: h
            .coalg
            .comult
            .iter()
            .map(|t| t.iter().map(|(a, b, c)| (*a, *b, pin(c))).collect())
            .collect(),
        counit: h.coalg.counit.iter().map(pin).collect(),
    };
    let mut antipode = Matrix::zero(h.antipode.rows, h.antipode.cols);
    for r in 0..antipode.rows {
        for c in 0..antipode.cols {
            antipode.set(r, c, pin(h.antipode.at(r, c)));
        }
    }
    WeakHopf::new(alg, coalg, antipode)
}

/// The sign-action smash product data: `H = kC₂` measuring `A = k[x]/(x²)`
/// by `g · x = −x`.  Over the rationals this is the standard non-semisimple
/// cleft-extension fixture.
pub fn sign_smash_measure<F: Scalar>() -> crate::crossed::WeakMeasure<F> {
    let h = cyclic_group_algebra::<F>(2);
    let a = dual_numbers::<F>();
    let mut flip = Matrix::identity(2);
    flip.set(1, 1, F::one().neg());
    crate::crossed::WeakMeasure::new(h, a, vec![Matrix::identity(2), flip])
}

/// Truncated polynomial algebra `k[x]/(x²)`: basis `{1, x}`.
pub fn dual_numbers<F: Scalar>() -> Algebra<F> {
    let mult = vec![
        vec![basis_vec::<F>(2, 0), basis_vec::<F>(2, 1)],
        vec![basis_vec::<F>(2, 1), vec![F::zero(); 2]],
    ];
    Algebra { dim: 2, mult, unit: basis_vec::<F>(2, 0) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rat};

    #[test]
    fn cyclic_group_algebra_is_weak_hopf() {
        let h = cyclic_group_algebra::<Rat>(2);
        for c in h.verify("C2") {
            assert!(c.ok, "{}: {:?}", c.name, c.witness);
        }
        assert_eq!(h.hl_basis.len(), 1);
        assert_eq!(h.hr_basis.len(), 1);
    }

    #[test]
    fn cyclic_group_algebra_over_f2() {
        let h = pin_hopf_modulus(&cyclic_group_algebra::<Fp>(2), 2);
        for c in h.verify("F2C2") {
            assert!(c.ok, "{}: {:?}", c.name, c.witness);
        }
    }

    #[test]
    fn pair_groupoid_is_genuinely_weak() {
        let h = pair_groupoid_algebra::<Rat>(2);
        for c in h.verify("pair(2)") {
            assert!(c.ok, "{}: {:?}", c.name, c.witness);
        }
        assert_eq!(h.hl_basis.len(), 2);
        // Δ(1) ≠ 1 ⊗ 1 exactly when the counital subalgebra is bigger
        // than the scalars.
        let d1 = h.coalg.delta(&h.alg.unit);
        assert_eq!(d1.len(), 2);
    }

    #[test]
    fn field_product_verifies() {
        let h = field_product_algebra::<Rat>(2);
        for c in h.verify("QxQ") {
            assert!(c.ok, "{}: {:?}", c.name, c.witness);
        }
        assert_eq!(h.hl_basis.len(), 2);
    }
}
