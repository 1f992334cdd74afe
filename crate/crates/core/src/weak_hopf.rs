//! Weak bialgebras and weak Hopf algebras.
//!
//! A weak bialgebra relaxes the unitality/counitality compatibilities of a
//! bialgebra: the coproduct of the unit need not be `1 ⊗ 1` and the counit
//! need not be multiplicative.  The failure is controlled by four canonical
//! projections (source/target counital maps and their twisted variants),
//! whose images are the counital subalgebras used as the base rings of every
//! relative construction downstream.
//!
//! Nothing here is trusted: [`WeakHopf::verify`] re-derives every axiom and
//! structural identity on basis elements and reports each as a named check.

use crate::algebra::{Algebra, Coalgebra, quotient_module};
use crate::field::Scalar;
use crate::linalg::{sparse_add_assign, Matrix, SparseVec};
use crate::report::Check;
use crate::tensor::{basis_vec, dense_add_assign, Shape};

/// Weak Hopf algebra with precomputed projections and counital subalgebras.
#[derive(Clone, Debug)]
pub struct WeakHopf<F: Scalar> {
    pub alg: Algebra<F>,
    pub coalg: Coalgebra<F>,
    /// Antipode as a matrix on coordinates.
    pub antipode: Matrix<F>,
    /// Target counital projection `h ↦ ε(1⁽¹⁾h) 1⁽²⁾`.
    pub pi_l: Matrix<F>,
    /// Source counital projection `h ↦ 1⁽¹⁾ ε(h 1⁽²⁾)`.
    pub pi_r: Matrix<F>,
    /// Twisted target projection `h ↦ 1⁽¹⁾ ε(1⁽²⁾h)`.
    pub pi_l_bar: Matrix<F>,
    /// Twisted source projection `h ↦ ε(h 1⁽¹⁾) 1⁽²⁾`.
    pub pi_r_bar: Matrix<F>,
    /// Echelonised basis of the target subalgebra (image of `pi_l`).
    pub hl_basis: Vec<Vec<F>>,
    /// Echelonised basis of the source subalgebra (image of `pi_r`).
    pub hr_basis: Vec<Vec<F>>,
}

/// Echelonised basis of the column space of `m`, as dense vectors.
pub fn image_basis<F: Scalar>(m: &Matrix<F>) -> Vec<Vec<F>> {
    let rows: Vec<Vec<F>> = (0..m.cols).map(|c| m.column(c)).collect();
    let (r, pivots) = Matrix::from_rows(rows).rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

impl<F: Scalar> WeakHopf<F> {
    pub fn new(alg: Algebra<F>, coalg: Coalgebra<F>, antipode: Matrix<F>) -> Self {
        assert_eq!(alg.dim, coalg.dim);
        let dim = alg.dim;
        let unit_delta = coalg.delta(&alg.unit);
        let mut pi_l = Matrix::zero(dim, dim);
        let mut pi_r = Matrix::zero(dim, dim);
        let mut pi_l_bar = Matrix::zero(dim, dim);
        let mut pi_r_bar = Matrix::zero(dim, dim);
        for m in 0..dim {
            let e = basis_vec::<F>(dim, m);
            let mut col_l = vec![F::zero(); dim];
            let mut col_r = vec![F::zero(); dim];
            let mut col_lb = vec![F::zero(); dim];
            let mut col_rb = vec![F::zero(); dim];
            for (c, j, k) in &unit_delta {
                let ej = basis_vec::<F>(dim, *j);
                let ek = basis_vec::<F>(dim, *k);
                // ε(1⁽¹⁾ h) 1⁽²⁾
                let s = coalg.counit_of(&alg.mul_vec(&ej, &e));
                dense_add_assign(&mut col_l, &ek, &c.mul(&s));
                // 1⁽¹⁾ ε(h 1⁽²⁾)
                let s = coalg.counit_of(&alg.mul_vec(&e, &ek));
                dense_add_assign(&mut col_r, &ej, &c.mul(&s));
                // 1⁽¹⁾ ε(1⁽²⁾ h)
                let s = coalg.counit_of(&alg.mul_vec(&ek, &e));
                dense_add_assign(&mut col_lb, &ej, &c.mul(&s));
                // ε(h 1⁽¹⁾) 1⁽²⁾
                let s = coalg.counit_of(&alg.mul_vec(&e, &ej));
                dense_add_assign(&mut col_rb, &ek, &c.mul(&s));
            }
            for i in 0..dim {
                pi_l.set(i, m, col_l[i].clone());
                pi_r.set(i, m, col_r[i].clone());
                pi_l_bar.set(i, m, col_lb[i].clone());
                pi_r_bar.set(i, m, col_rb[i].clone());
            }
        }
        let hl_basis = image_basis(&pi_l);
        let hr_basis = image_basis(&pi_r);
        WeakHopf { alg, coalg, antipode, pi_l, pi_r, pi_l_bar, pi_r_bar, hl_basis, hr_basis }
    }

    pub fn dim(&self) -> usize {
        self.alg.dim
    }

    pub fn apply_antipode(&self, v: &[F]) -> Vec<F> {
        self.antipode.apply(v)
    }

    /// Verifies the weak bialgebra axioms, the antipode axioms, and the
    /// structural identities about the canonical projections that later
    /// constructions rely on.
    pub fn verify(&self, label: &str) -> Vec<Check> {
        let dim = self.dim();
        let mut checks = Vec::new();
        checks.extend(self.alg.verify(label));
        checks.extend(self.coalg.verify(label));

        // Δ is multiplicative: Δ(ab) = Δ(a)Δ(b).
        let shape2 = Shape(vec![dim, dim]);
        let mut mult_ok: Result<(), String> = Ok(());
        'mult: for i in 0..dim {
            for j in 0..dim {
                let mut lhs: SparseVec<F> = SparseVec::new();
                for (c, a, b) in self.coalg.delta(&self.alg.mult[i][j]) {
                    sparse_add_assign(&mut lhs, shape2.flatten(&[a, b]), &c);
                }
                let mut rhs: SparseVec<F> = SparseVec::new();
                let di = self.coalg.delta(&basis_vec::<F>(dim, i));
                let dj = self.coalg.delta(&basis_vec::<F>(dim, j));
                for (c, a, b) in &di {
                    for (c2, a2, b2) in &dj {
                        let prod_a = &self.alg.mult[*a][*a2];
                        let prod_b = &self.alg.mult[*b][*b2];
                        let coeff = c.mul(c2);
                        for (x, ca) in prod_a.iter().enumerate() {
                            if ca.is_zero() {
                                continue;
                            }
                            for (y, cb) in prod_b.iter().enumerate() {
                                if cb.is_zero() {
                                    continue;
                                }
                                sparse_add_assign(
                                    &mut rhs,
                                    shape2.flatten(&[x, y]),
                                    &coeff.mul(&ca.mul(cb)),
                                );
                            }
                        }
                    }
                }
                if lhs != rhs {
                    mult_ok = Err(format!("coproduct not multiplicative at basis pair ({i},{j})"));
                    break 'mult;
                }
            }
        }
        checks.push(Check::of(format!("{label}: coproduct multiplicative"), mult_ok));

        // Weak unit compatibility: Δ²(1) agrees with both of its partial
        // multiplications of Δ(1) ⊗ Δ(1).
        let shape3 = Shape(vec![dim, dim, dim]);
        let d1 = self.coalg.delta(&self.alg.unit);
        let mut d2_unit: SparseVec<F> = SparseVec::new();
        for (c, idx) in self.coalg.delta_n(&self.alg.unit, 3) {
            sparse_add_assign(&mut d2_unit, shape3.flatten(&idx), &c);
        }
        let mut mixed_a: SparseVec<F> = SparseVec::new(); // 1⁽¹⁾ ⊗ 1⁽²⁾1⁽¹''⁾ ⊗ 1⁽²''⁾
        let mut mixed_b: SparseVec<F> = SparseVec::new(); // 1⁽¹⁾ ⊗ 1⁽¹''⁾1⁽²⁾ ⊗ 1⁽²''⁾
        for (c, j, k) in &d1 {
            for (c2, j2, k2) in &d1 {
                let coeff = c.mul(c2);
                for (mid, cm) in self.alg.mult[*k][*j2].iter().enumerate() {
                    if !cm.is_zero() {
                        sparse_add_assign(&mut mixed_a, shape3.flatten(&[*j, mid, *k2]), &coeff.mul(cm));
                    }
                }
                for (mid, cm) in self.alg.mult[*j2][*k].iter().enumerate() {
                    if !cm.is_zero() {
                        sparse_add_assign(&mut mixed_b, shape3.flatten(&[*j, mid, *k2]), &coeff.mul(cm));
                    }
                }
            }
        }
        checks.push(Check::of(
            format!("{label}: weak unit-coproduct compatibility"),
            if d2_unit == mixed_a && d2_unit == mixed_b {
                Ok(())
            } else {
                Err("iterated unit coproduct differs from its split forms".into())
            },
        ));

        // Weak counit multiplicativity on triples.
        let mut counit_ok: Result<(), String> = Ok(());
        'tri: for h in 0..dim {
            for l in 0..dim {
                for m in 0..dim {
                    let direct = self
                        .coalg
                        .counit_of(&self.alg.mul_vec(&self.alg.mult[h][l], &basis_vec::<F>(dim, m)));
                    let mut split1 = F::zero();
                    let mut split2 = F::zero();
                    for (c, a, b) in self.coalg.delta(&basis_vec::<F>(dim, l)) {
                        let hl1 = self.coalg.counit_of(&self.alg.mult[h][a]);
                        let l2m = self.coalg.counit_of(&self.alg.mult[b][m]);
                        split1 = split1.add(&c.mul(&hl1.mul(&l2m)));
                        let hl2 = self.coalg.counit_of(&self.alg.mult[h][b]);
                        let l1m = self.coalg.counit_of(&self.alg.mult[a][m]);
                        split2 = split2.add(&c.mul(&hl2.mul(&l1m)));
                    }
                    if direct != split1 || direct != split2 {
                        counit_ok = Err(format!("counit splitting fails at basis triple ({h},{l},{m})"));
                        break 'tri;
                    }
                }
            }
        }
        checks.push(Check::of(format!("{label}: weak counit multiplicativity"), counit_ok));

        // Antipode axioms.
        let mut conv_l = Matrix::zero(dim, dim); // h ↦ h⁽¹⁾S(h⁽²⁾)
        let mut conv_r = Matrix::zero(dim, dim); // h ↦ S(h⁽¹⁾)h⁽²⁾
        let mut conv_3 = Matrix::zero(dim, dim); // h ↦ S(h⁽¹⁾)h⁽²⁾S(h⁽³⁾)
        for i in 0..dim {
            let mut cl = vec![F::zero(); dim];
            let mut cr = vec![F::zero(); dim];
            for (c, a, b) in self.coalg.delta(&basis_vec::<F>(dim, i)) {
                let sb = self.antipode.column(b);
                let sa = self.antipode.column(a);
                dense_add_assign(&mut cl, &self.alg.mul_vec(&basis_vec::<F>(dim, a), &sb), &c);
                dense_add_assign(&mut cr, &self.alg.mul_vec(&sa, &basis_vec::<F>(dim, b)), &c);
            }
            let mut c3 = vec![F::zero(); dim];
            for (c, idx) in self.coalg.delta_n(&basis_vec::<F>(dim, i), 3) {
                let sa = self.antipode.column(idx[0]);
                let sc = self.antipode.column(idx[2]);
                let mid = basis_vec::<F>(dim, idx[1]);
                c3_add(&mut c3, &self.alg, &sa, &mid, &sc, &c);
            }
            for r in 0..dim {
                conv_l.set(r, i, cl[r].clone());
                conv_r.set(r, i, cr[r].clone());
                conv_3.set(r, i, c3[r].clone());
            }
        }
        checks.push(Check::of(
            format!("{label}: antipode left convolution identity"),
            if conv_l == self.pi_l { Ok(()) } else { Err("h⁽¹⁾S(h⁽²⁾) differs from the target projection".into()) },
        ));
        checks.push(Check::of(
            format!("{label}: antipode right convolution identity"),
            if conv_r == self.pi_r { Ok(()) } else { Err("S(h⁽¹⁾)h⁽²⁾ differs from the source projection".into()) },
        ));
        checks.push(Check::of(
            format!("{label}: antipode threefold convolution identity"),
            if conv_3 == self.antipode { Ok(()) } else { Err("S(h⁽¹⁾)h⁽²⁾S(h⁽³⁾) differs from S(h)".into()) },
        ));
        checks.push(Check::of(
            format!("{label}: antipode links twisted and plain projections"),
            if self.antipode.mul(&self.pi_l_bar) == self.pi_l
                && self.antipode.mul(&self.pi_r_bar) == self.pi_r
            {
                Ok(())
            } else {
                Err("S composed with a twisted projection differs from the plain one".into())
            },
        ));

        checks.extend(self.verify_structure_identities(label));
        checks
    }

    /// Structural identities about the projections and counital subalgebras
    /// that the relative tensor and crossed-product constructions rely on.
    pub fn verify_structure_identities(&self, label: &str) -> Vec<Check> {
        let dim = self.dim();
        let mut checks = Vec::new();

        // Projections are idempotent.
        checks.push(Check::of(
            format!("{label}: counital projections idempotent"),
            if self.pi_l.mul(&self.pi_l) == self.pi_l && self.pi_r.mul(&self.pi_r) == self.pi_r {
                Ok(())
            } else {
                Err("a counital projection is not idempotent".into())
            },
        ));

        // Images of the twisted projections are the swapped counital
        // subalgebras.
        let lb_img = image_basis(&self.pi_l_bar);
        let rb_img = image_basis(&self.pi_r_bar);
        checks.push(Check::of(
            format!("{label}: twisted projection images are the counital subalgebras"),
            if rb_img == self.hl_basis && lb_img == self.hr_basis {
                Ok(())
            } else {
                Err("image of a twisted projection differs from the expected subalgebra".into())
            },
        ));

        // The two counital subalgebras commute elementwise.
        let mut commute: Result<(), String> = Ok(());
        'comm: for (i, l) in self.hl_basis.iter().enumerate() {
            for (j, r) in self.hr_basis.iter().enumerate() {
                if self.alg.mul_vec(l, r) != self.alg.mul_vec(r, l) {
                    commute = Err(format!("target basis {i} and source basis {j} do not commute"));
                    break 'comm;
                }
            }
        }
        checks.push(Check::of(format!("{label}: counital subalgebras commute"), commute));

        // Δ(target subalgebra) ⊆ H ⊗ target subalgebra.
        let hl_quot = quotient_module(dim, &self.hl_basis);
        let mut delta_stable: Result<(), String> = Ok(());
        for (i, l) in self.hl_basis.iter().enumerate() {
            // Apply (id ⊗ quotient-by-target) to Δ(l) and require zero.
            let mut residue: SparseVec<F> = SparseVec::new();
            let shape = Shape(vec![dim, hl_quot.dim]);
            for (c, a, b) in self.coalg.delta(l) {
                let coords = hl_quot.proj.apply(&basis_vec::<F>(dim, b));
                for (k, x) in coords.iter().enumerate() {
                    sparse_add_assign(&mut residue, shape.flatten(&[a, k]), &c.mul(x));
                }
            }
            if !residue.is_empty() {
                delta_stable = Err(format!("coproduct of target-subalgebra basis {i} leaves H ⊗ target"));
                break;
            }
        }
        checks.push(Check::of(format!("{label}: coproduct preserves the target subalgebra on the right"), delta_stable));

        // Coproduct absorbs target-subalgebra factors:
        // h⁽¹⁾l⁽¹⁾ ⊗ h⁽²⁾l⁽²⁾ = h⁽¹⁾l ⊗ h⁽²⁾ for l in the target subalgebra.
        let shape2 = Shape(vec![dim, dim]);
        let mut absorb: Result<(), String> = Ok(());
        'absorb: for h in 0..dim {
            let dh = self.coalg.delta(&basis_vec::<F>(dim, h));
            for (i, l) in self.hl_basis.iter().enumerate() {
                let dl = self.coalg.delta(l);
                let mut lhs: SparseVec<F> = SparseVec::new();
                for (c, a, b) in &dh {
                    for (c2, a2, b2) in &dl {
                        let coeff = c.mul(c2);
                        let pa = &self.alg.mult[*a][*a2];
                        let pb = &self.alg.mult[*b][*b2];
                        for (x, ca) in pa.iter().enumerate() {
                            if ca.is_zero() {
                                continue;
                            }
                            for (y, cb) in pb.iter().enumerate() {
                                if !cb.is_zero() {
                                    sparse_add_assign(&mut lhs, shape2.flatten(&[x, y]), &coeff.mul(&ca.mul(cb)));
                                }
                            }
                        }
                    }
                }
                let mut rhs: SparseVec<F> = SparseVec::new();
                for (c, a, b) in &dh {
                    let al = self.alg.mul_vec(&basis_vec::<F>(dim, *a), l);
                    for (x, ca) in al.iter().enumerate() {
                        if !ca.is_zero() {
                            sparse_add_assign(&mut rhs, shape2.flatten(&[x, *b]), &c.mul(ca));
                        }
                    }
                }
                if lhs != rhs {
                    absorb = Err(format!("absorption fails at basis {h} with target basis {i}"));
                    break 'absorb;
                }
            }
        }
        checks.push(Check::of(format!("{label}: coproduct absorbs right target-subalgebra factors"), absorb));

        // Twisted source projection against products:
        // π̄ᴿ(hl) = π̄ᴿ(π̄ᴿ(h)l), πᴿ(hl) = πᴿ(π̄ᴿ(h)l), and
        // π̄ᴿ(hm) = π̄ᴿ(h)m for m in the target subalgebra.
        let mut proj_prod: Result<(), String> = Ok(());
        'pp: for h in 0..dim {
            let eh = basis_vec::<F>(dim, h);
            let rb_h = self.pi_r_bar.apply(&eh);
            for l in 0..dim {
                let el = basis_vec::<F>(dim, l);
                let hl = self.alg.mul_vec(&eh, &el);
                let rb_hl = self.pi_r_bar.apply(&hl);
                let r_hl = self.pi_r.apply(&hl);
                let via = self.alg.mul_vec(&rb_h, &el);
                if rb_hl != self.pi_r_bar.apply(&via) || r_hl != self.pi_r.apply(&via) {
                    proj_prod = Err(format!("projection product identity fails at basis pair ({h},{l})"));
                    break 'pp;
                }
            }
            for (i, m) in self.hl_basis.iter().enumerate() {
                let hm = self.alg.mul_vec(&eh, m);
                if self.pi_r_bar.apply(&hm) != self.alg.mul_vec(&rb_h, m) {
                    proj_prod = Err(format!("twisted projection is not right target-linear at ({h}, target {i})"));
                    break 'pp;
                }
            }
        }
        checks.push(Check::of(format!("{label}: projections compatible with products"), proj_prod));

        // π̄ᴸ(h⁽¹⁾) ⊗ h⁽²⁾ = 1⁽¹⁾ ⊗ 1⁽²⁾h.
        let d1 = self.coalg.delta(&self.alg.unit);
        let mut split_unit: Result<(), String> = Ok(());
        for h in 0..dim {
            let mut lhs: SparseVec<F> = SparseVec::new();
            for (c, a, b) in self.coalg.delta(&basis_vec::<F>(dim, h)) {
                let lb = self.pi_l_bar.apply(&basis_vec::<F>(dim, a));
                for (x, cx) in lb.iter().enumerate() {
                    if !cx.is_zero() {
                        sparse_add_assign(&mut lhs, shape2.flatten(&[x, b]), &c.mul(cx));
                    }
                }
            }
            let mut rhs: SparseVec<F> = SparseVec::new();
            for (c, j, k) in &d1 {
                let kh = self.alg.mul_vec(&basis_vec::<F>(dim, *k), &basis_vec::<F>(dim, h));
                for (y, cy) in kh.iter().enumerate() {
                    if !cy.is_zero() {
                        sparse_add_assign(&mut rhs, shape2.flatten(&[*j, y]), &c.mul(cy));
                    }
                }
            }
            if lhs != rhs {
                split_unit = Err(format!("twisted-projection expansion of the coproduct fails at basis {h}"));
                break;
            }
        }
        checks.push(Check::of(format!("{label}: twisted projection reconstructs the unit coproduct"), split_unit));

        checks
    }
}

fn c3_add<F: Scalar>(acc: &mut [F], alg: &Algebra<F>, a: &[F], b: &[F], c: &[F], coeff: &F) {
    let prod = alg.mul_vec(&alg.mul_vec(a, b), c);
    dense_add_assign(acc, &prod, coeff);
}
