//! Weak measures of a weak Hopf algebra on an algebra, twisted two-cocycles
//! with convolution inverses, and the unitary crossed product they generate.
//!
//! The crossed product is realized on a basis of the image of the canonical
//! idempotent on `A ⊗ H`; every structural map (multiplication, the section
//! `γ`, its convolution inverse, the algebra embedding `j_ν`, and the
//! comodule structure `δ_E`) is conjugated through the inclusion/retraction
//! pair of that image, and every property used downstream is re-verified on
//! each instance rather than trusted.

use crate::algebra::{Algebra, Subalgebra};
use crate::field::Scalar;
use crate::linalg::Matrix;
use crate::report::Check;
use crate::tensor::{basis_vec, dense_add_assign, Shape};
use crate::weak_hopf::WeakHopf;

/// A linear map `H ⊗ A → A`, given by one matrix per Hopf basis element.
#[derive(Clone)]
pub struct WeakMeasure<F: Scalar> {
    pub hopf: WeakHopf<F>,
    pub alg: Algebra<F>,
    /// `action[i]` = matrix of `e_i · (−)` on `A`.
    pub action: Vec<Matrix<F>>,
}

/// A map `H ⊗ H → A` tabulated on basis pairs.
pub type PairMap<F> = Vec<Vec<Vec<F>>>;

impl<F: Scalar> WeakMeasure<F> {
    pub fn new(hopf: WeakHopf<F>, alg: Algebra<F>, action: Vec<Matrix<F>>) -> Self {
        assert_eq!(action.len(), hopf.dim());
        WeakMeasure { hopf, alg, action }
    }

    /// Matrix of `h · (−)` for a dense Hopf vector.
    pub fn act_matrix(&self, h: &[F]) -> Matrix<F> {
        let mut out = Matrix::zero(self.alg.dim, self.alg.dim);
        for (i, c) in h.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.action[i].scale(c));
            }
        }
        out
    }

    pub fn act(&self, h: &[F], a: &[F]) -> Vec<F> {
        self.act_matrix(h).apply(a)
    }

    /// `h · 1_A` for a dense Hopf vector.
    pub fn act_on_unit(&self, h: &[F]) -> Vec<F> {
        self.act(h, &self.alg.unit)
    }

    /// Whether the action is associative outright (`h·(l·a) = hl·a`), which
    /// upgrades the weak module algebra to a genuine module algebra.
    pub fn is_module(&self) -> bool {
        let hd = self.hopf.dim();
        for i in 0..hd {
            for j in 0..hd {
                let composed = self.action[i].mul(&self.action[j]);
                let merged = self.act_matrix(&self.hopf.alg.mult[i][j]);
                if composed != merged {
                    return false;
                }
            }
        }
        true
    }

    /// The weak module algebra axioms, plus the standard consequences used
    /// by the crossed-product construction.
    pub fn verify_weak_module_algebra(&self, label: &str) -> Vec<Check> {
        let hd = self.hopf.dim();
        let ad = self.alg.dim;
        let e = |i: usize| basis_vec::<F>(hd, i);
        let ea = |i: usize| basis_vec::<F>(ad, i);
        let mut checks = Vec::new();

        checks.push(Check::of(
            format!("{label}: unit of H acts as the identity"),
            if self.act_matrix(&self.hopf.alg.unit) == Matrix::identity(ad) {
                Ok(())
            } else {
                Err("1 · a ≠ a".into())
            },
        ));

        let mut mult: Result<(), String> = Ok(());
        'mul: for i in 0..hd {
            for a in 0..ad {
                for b in 0..ad {
                    let lhs = self.act(&e(i), &self.alg.mul_basis(a, b).clone());
                    let mut rhs = vec![F::zero(); ad];
                    for (c, j, k) in self.hopf.coalg.delta(&e(i)) {
                        let prod =
                            self.alg.mul_vec(&self.action[j].column(a), &self.action[k].column(b));
                        dense_add_assign(&mut rhs, &prod, &c);
                    }
                    if lhs != rhs {
                        mult = Err(format!("fails at Hopf element {i} on algebra pair ({a},{b})"));
                        break 'mul;
                    }
                }
            }
        }
        checks.push(Check::of(format!("{label}: action is multiplicative along the coproduct"), mult));

        let mut unit_cmp: Result<(), String> = Ok(());
        'un: for i in 0..hd {
            for j in 0..hd {
                let lhs = self.act(&e(i), &self.act_on_unit(&e(j)));
                let rhs = self.act_on_unit(&self.hopf.alg.mult[i][j]);
                if lhs != rhs {
                    unit_cmp = Err(format!("h·(l·1) ≠ hl·1 at basis pair ({i},{j})"));
                    break 'un;
                }
            }
        }
        checks.push(Check::of(format!("{label}: action composes on the unit"), unit_cmp));

        // Consequences on the unit orbit.
        let mut conseq: Result<(), String> = Ok(());
        'co: for i in 0..hd {
            let h1 = self.act_on_unit(&e(i));
            let pl = self.hopf.pi_l.apply(&e(i));
            let plb = self.hopf.pi_l_bar.apply(&e(i));
            for a in 0..ad {
                if self.act(&pl, &ea(a)) != self.alg.mul_vec(&h1, &ea(a)) {
                    conseq = Err(format!("target projection acts ≠ left multiplication by h·1 at ({i},{a})"));
                    break 'co;
                }
                if self.act(&plb, &ea(a)) != self.alg.mul_vec(&ea(a), &h1) {
                    conseq =
                        Err(format!("bar target projection acts ≠ right multiplication by h·1 at ({i},{a})"));
                    break 'co;
                }
            }
            if self.act_on_unit(&pl) != h1 || self.act_on_unit(&plb) != h1 {
                conseq = Err(format!("projections change h·1 at basis element {i}"));
                break 'co;
            }
            for j in 0..hd {
                let lhs = self.act(&e(i), &self.act_on_unit(&e(j)));
                let mut rhs1 = vec![F::zero(); ad];
                let mut rhs2 = vec![F::zero(); ad];
                for (c, x, y) in self.hopf.coalg.delta(&e(i)) {
                    let eps_y = self.hopf.coalg.counit_of(&self.hopf.alg.mult[y][j]);
                    dense_add_assign(&mut rhs1, &self.act_on_unit(&basis_vec::<F>(hd, x)), &c.mul(&eps_y));
                    let eps_x = self.hopf.coalg.counit_of(&self.hopf.alg.mult[x][j]);
                    dense_add_assign(&mut rhs2, &self.act_on_unit(&basis_vec::<F>(hd, y)), &c.mul(&eps_x));
                }
                if lhs != rhs1 || lhs != rhs2 {
                    conseq = Err(format!("counit expansion of h·(l·1) fails at ({i},{j})"));
                    break 'co;
                }
            }
        }
        checks.push(Check::of(format!("{label}: unit-orbit consequences"), conseq));
        checks
    }

    /// `u₂(h ⊗ l) = hl · 1_A`, the convolution unit for cocycles.
    pub fn u2(&self) -> PairMap<F> {
        let hd = self.hopf.dim();
        (0..hd)
            .map(|i| (0..hd).map(|j| self.act_on_unit(&self.hopf.alg.mult[i][j])).collect())
            .collect()
    }
}

/// Bilinear evaluation of a [`PairMap`] on dense Hopf vectors.
pub fn eval_pair<F: Scalar>(map: &PairMap<F>, ad: usize, h: &[F], l: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(); ad];
    for (i, c) in h.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (j, d) in l.iter().enumerate() {
            if !d.is_zero() {
                dense_add_assign(&mut out, &map[i][j], &c.mul(d));
            }
        }
    }
    out
}

/// Convolution `(f * g)(h ⊗ l) = f(h⁽¹⁾⊗l⁽¹⁾) g(h⁽²⁾⊗l⁽²⁾)` of pair maps.
pub fn convolve_pair<F: Scalar>(m: &WeakMeasure<F>, f: &PairMap<F>, g: &PairMap<F>) -> PairMap<F> {
    let hd = m.hopf.dim();
    let ad = m.alg.dim;
    let e = |i: usize| basis_vec::<F>(hd, i);
    (0..hd)
        .map(|i| {
            (0..hd)
                .map(|j| {
                    let mut out = vec![F::zero(); ad];
                    for (c, i1, i2) in m.hopf.coalg.delta(&e(i)) {
                        for (d, j1, j2) in m.hopf.coalg.delta(&e(j)) {
                            let prod = m.alg.mul_vec(&f[i1][j1], &g[i2][j2]);
                            dense_add_assign(&mut out, &prod, &c.mul(&d));
                        }
                    }
                    out
                })
                .collect()
        })
        .collect()
}

/// A cocycle together with its convolution inverse relative to `u₂`.
#[derive(Clone)]
pub struct CocyclePair<F: Scalar> {
    pub f: PairMap<F>,
    pub f_inv: PairMap<F>,
}

impl<F: Scalar> CocyclePair<F> {
    /// The defining convolution identities of the inverse pair.
    pub fn verify(&self, m: &WeakMeasure<F>, label: &str) -> Vec<Check> {
        let u2 = m.u2();
        let named: [(&str, PairMap<F>, &PairMap<F>); 6] = [
            ("f * f⁻¹ = u₂", convolve_pair(m, &self.f, &self.f_inv), &u2),
            ("f⁻¹ * f = u₂", convolve_pair(m, &self.f_inv, &self.f), &u2),
            ("u₂ * f⁻¹ = f⁻¹", convolve_pair(m, &u2, &self.f_inv), &self.f_inv),
            ("f⁻¹ * u₂ = f⁻¹", convolve_pair(m, &self.f_inv, &u2), &self.f_inv),
            ("f * u₂ = f", convolve_pair(m, &self.f, &u2), &self.f),
            ("u₂ * f = f", convolve_pair(m, &u2, &self.f), &self.f),
        ];
        named
            .into_iter()
            .map(|(name, got, want)| {
                Check::of(
                    format!("{label}: {name}"),
                    if &got == want { Ok(()) } else { Err("convolution identity fails".into()) },
                )
            })
            .collect()
    }
}

/// The trivial cocycle `f = u₂` of a genuine module algebra; its convolution
/// inverse is itself.
pub fn trivial_cocycle<F: Scalar>(m: &WeakMeasure<F>) -> Result<CocyclePair<F>, String> {
    if !m.is_module() {
        return Err("the action is only weak: h·(l·a) ≠ hl·a, so u₂ is not a cocycle inverse of itself".into());
    }
    let u2 = m.u2();
    Ok(CocyclePair { f: u2.clone(), f_inv: u2 })
}

/// Failure value of [`invert_cocycle`].
#[derive(Debug)]
pub struct NotInvertible {
    pub reason: String,
}

/// Solves the four convolution constraints for `f⁻¹` as one linear system.
/// Also reports whether the solution is unique (the homogeneous system has
/// only the zero solution).
pub fn invert_cocycle<F: Scalar>(
    m: &WeakMeasure<F>,
    f: &PairMap<F>,
) -> Result<(CocyclePair<F>, bool), NotInvertible> {
    let hd = m.hopf.dim();
    let ad = m.alg.dim;
    let n = ad * hd * hd;
    let e = |i: usize| basis_vec::<F>(hd, i);
    let u2 = m.u2();
    // Unknown x is indexed by (i, j, a-coordinate): column (i·hd + j)·ad + t.
    let col = |i: usize, j: usize, t: usize| (i * hd + j) * ad + t;

    // One block row per constraint per target pair (i, j) per A-coordinate.
    let mut rows: Vec<Vec<F>> = Vec::new();
    let mut rhs: Vec<F> = Vec::new();
    let mut push_block = |left: bool, other: &PairMap<F>, target: Option<&PairMap<F>>| {
        for i in 0..hd {
            for j in 0..hd {
                // Matrix of the map x ↦ (other * x) (left) or (x * other)
                // evaluated at (e_i ⊗ e_j), as `ad` rows over the unknowns.
                let mut block = vec![vec![F::zero(); n]; ad];
                for (c, i1, i2) in m.hopf.coalg.delta(&e(i)) {
                    for (d, j1, j2) in m.hopf.coalg.delta(&e(j)) {
                        let (fixed, xi, xj) =
                            if left { (&other[i1][j1], i2, j2) } else { (&other[i2][j2], i1, j1) };
                        let mul =
                            if left { m.alg.left_mul_matrix(fixed) } else { m.alg.right_mul_matrix(fixed) };
                        let scaled = mul.scale(&c.mul(&d));
                        for r in 0..ad {
                            for t in 0..ad {
                                let cell = scaled.at(r, t).clone();
                                if !cell.is_zero() {
                                    let slot = &mut block[r][col(xi, xj, t)];
                                    *slot = slot.add(&cell);
                                }
                            }
                        }
                    }
                }
                for (r, mut row) in block.into_iter().enumerate() {
                    match target {
                        Some(t) => rhs.push(t[i][j][r].clone()),
                        None => {
                            // Constraint of the form (u₂ * x) − x = 0.
                            let slot = &mut row[col(i, j, r)];
                            *slot = slot.sub(&F::one());
                            rhs.push(F::zero());
                        }
                    }
                    rows.push(row);
                }
            }
        }
    };
    push_block(true, f, Some(&u2)); // f * x = u₂
    push_block(false, f, Some(&u2)); // x * f = u₂
    push_block(true, &u2, None); // u₂ * x = x
    push_block(false, &u2, None); // x * u₂ = x

    let sys = Matrix::from_rows(rows);
    let sol = sys
        .solve(&rhs)
        .ok_or_else(|| NotInvertible { reason: "the convolution constraints are inconsistent".into() })?;
    let unique = sys.kernel_basis().is_empty();
    let f_inv: PairMap<F> =
        (0..hd).map(|i| (0..hd).map(|j| sol[col(i, j, 0)..col(i, j, 0) + ad].to_vec()).collect()).collect();
    Ok((CocyclePair { f: f.clone(), f_inv }, unique))
}

/// The hypotheses required before the crossed product may be built.
pub fn verify_crossed_hypotheses<F: Scalar>(
    m: &WeakMeasure<F>,
    f: &PairMap<F>,
    label: &str,
) -> Vec<Check> {
    let hd = m.hopf.dim();
    let ad = m.alg.dim;
    let e = |i: usize| basis_vec::<F>(hd, i);
    let ea = |i: usize| basis_vec::<F>(ad, i);
    let delta_unit = m.hopf.coalg.delta(&m.hopf.alg.unit);
    let mut checks = Vec::new();

    let u2 = m.u2();
    checks.push(Check::of(
        format!("{label}: hypothesis 1 (f absorbs u₂ on the right)"),
        if convolve_pair(m, f, &u2) == *f { Ok(()) } else { Err("f * u₂ ≠ f".into()) },
    ));

    let mut h2: Result<(), String> = Ok(());
    let mut h3: Result<(), String> = Ok(());
    for i in 0..hd {
        let want = m.act_on_unit(&e(i));
        let mut got2 = vec![F::zero(); ad];
        for (c, x, y) in m.hopf.coalg.delta(&e(i)) {
            for (d, u, v) in &delta_unit {
                let acted = m.act(&basis_vec::<F>(hd, x), &m.act_on_unit(&basis_vec::<F>(hd, *u)));
                let prod = m.alg.mul_vec(&acted, &f[y][*v]);
                dense_add_assign(&mut got2, &prod, &c.mul(d));
            }
        }
        if got2 != want && h2.is_ok() {
            h2 = Err(format!("fails at basis element {i}"));
        }
        let mut got3 = vec![F::zero(); ad];
        for (d, u, v) in &delta_unit {
            let prod = m.alg.mul_vec(&m.act_on_unit(&basis_vec::<F>(hd, *u)), &f[*v][i]);
            dense_add_assign(&mut got3, &prod, d);
        }
        if got3 != want && h3.is_ok() {
            h3 = Err(format!("fails at basis element {i}"));
        }
    }
    checks.push(Check::of(format!("{label}: hypothesis 2 (left unit normalization)"), h2));
    checks.push(Check::of(format!("{label}: hypothesis 3 (right unit normalization)"), h3));

    let mut h4: Result<(), String> = Ok(());
    for a in 0..ad {
        // ∇(a ⊗ 1) against 1⁽¹⁾·a ⊗ 1⁽²⁾ in A ⊗ H.
        let nabla = nabla_of(m, &ea(a), &m.hopf.alg.unit);
        let mut want = vec![F::zero(); ad * hd];
        for (d, u, v) in &delta_unit {
            let acted = m.act(&basis_vec::<F>(hd, *u), &ea(a));
            for (t, c) in acted.iter().enumerate() {
                want[t * hd + *v] = want[t * hd + *v].add(&c.mul(d));
            }
        }
        if nabla != want {
            h4 = Err(format!("a × 1 ≠ 1⁽¹⁾·a ⊗ 1⁽²⁾ at algebra basis element {a}"));
            break;
        }
    }
    checks.push(Check::of(format!("{label}: hypothesis 4 (unit column of the idempotent)"), h4));

    let mut cocycle: Result<(), String> = Ok(());
    'cc: for i in 0..hd {
        for j in 0..hd {
            for k in 0..hd {
                let mut lhs = vec![F::zero(); ad];
                let mut rhs = vec![F::zero(); ad];
                for (c, i1, i2) in m.hopf.coalg.delta(&e(i)) {
                    for (d, j1, j2) in m.hopf.coalg.delta(&e(j)) {
                        let merged = m.hopf.alg.mult[i2][j2].clone();
                        let second = eval_pair(f, ad, &merged, &e(k));
                        let prod = m.alg.mul_vec(&f[i1][j1], &second);
                        dense_add_assign(&mut lhs, &prod, &c.mul(&d));
                    }
                }
                // Right side: (h⁽¹⁾·f(l⁽¹⁾⊗m⁽¹⁾)) f(h⁽²⁾ ⊗ l⁽²⁾m⁽²⁾).
                for (c, i1, i2) in m.hopf.coalg.delta(&e(i)) {
                    for (d, j1, j2) in m.hopf.coalg.delta(&e(j)) {
                        for (g, k1, k2) in m.hopf.coalg.delta(&e(k)) {
                            let acted = m.act(&basis_vec::<F>(hd, i1), &f[j1][k1]);
                            let tail = eval_pair(f, ad, &e(i2), &m.hopf.alg.mult[j2][k2]);
                            let prod = m.alg.mul_vec(&acted, &tail);
                            dense_add_assign(&mut rhs, &prod, &c.mul(&d).mul(&g));
                        }
                    }
                }
                if lhs != rhs {
                    cocycle = Err(format!("cocycle identity fails at triple ({i},{j},{k})"));
                    break 'cc;
                }
            }
        }
    }
    let mut twisted: Result<(), String> = Ok(());
    'tw: for i in 0..hd {
        for j in 0..hd {
            for a in 0..ad {
                let mut lhs = vec![F::zero(); ad];
                let mut rhs = vec![F::zero(); ad];
                for (c, i1, i2) in m.hopf.coalg.delta(&e(i)) {
                    for (d, j1, j2) in m.hopf.coalg.delta(&e(j)) {
                        let acted = m.act(&m.hopf.alg.mult[i2][j2], &ea(a));
                        dense_add_assign(&mut lhs, &m.alg.mul_vec(&f[i1][j1], &acted), &c.mul(&d));
                        let nested = m.act(&basis_vec::<F>(hd, i1), &m.act(&basis_vec::<F>(hd, j1), &ea(a)));
                        dense_add_assign(&mut rhs, &m.alg.mul_vec(&nested, &f[i2][j2]), &c.mul(&d));
                    }
                }
                if lhs != rhs {
                    twisted = Err(format!("twisted module condition fails at ({i},{j},{a})"));
                    break 'tw;
                }
            }
        }
    }
    checks.push(Check::of(format!("{label}: hypothesis 5a (twisted cocycle identity)"), cocycle));
    checks.push(Check::of(format!("{label}: hypothesis 5b (twisted module condition)"), twisted));
    checks
}

/// `∇(a ⊗ h) = a(h⁽¹⁾·1_A) ⊗ h⁽²⁾` on dense inputs, as an `A ⊗ H` vector.
fn nabla_of<F: Scalar>(m: &WeakMeasure<F>, a: &[F], h: &[F]) -> Vec<F> {
    let hd = m.hopf.dim();
    let ad = m.alg.dim;
    let mut out = vec![F::zero(); ad * hd];
    for (c, h1, h2) in m.hopf.coalg.delta(h) {
        let left = m.alg.mul_vec(a, &m.act_on_unit(&basis_vec::<F>(hd, h1)));
        for (t, x) in left.iter().enumerate() {
            out[t * hd + h2] = out[t * hd + h2].add(&x.mul(&c));
        }
    }
    out
}

/// The unitary crossed product together with all of its structural maps,
/// presented on a basis of the image of the canonical idempotent.
pub struct CrossedProduct<F: Scalar> {
    pub measure: WeakMeasure<F>,
    pub cocycle: CocyclePair<F>,
    /// Shape `[dim A, dim H]` of the ambient space `A ⊗ H`.
    pub ambient: Shape,
    pub nabla: Matrix<F>,
    /// Ambient coordinates of the product basis: `(dim A·dim H) × dim E`.
    pub incl: Matrix<F>,
    /// Retraction with `retr ∘ incl = id` and `incl ∘ retr = ∇`.
    pub retr: Matrix<F>,
    /// The crossed product as a plain algebra on the presented basis.
    pub alg: Algebra<F>,
    /// `γ(h) = 1_A × h`, one column per Hopf basis element.
    pub gamma: Matrix<F>,
    pub gamma_inv: Matrix<F>,
    /// `j_ν(a) = a × 1`, one column per `A` basis element.
    pub j_nu: Matrix<F>,
    /// Comodule structure `E → E ⊗ H` (row-major `E`-then-`H` indexing).
    pub delta_e: Matrix<F>,
}

impl<F: Scalar> CrossedProduct<F> {
    pub fn dim(&self) -> usize {
        self.alg.dim
    }

    /// Product of dense presented vectors.
    pub fn mul(&self, x: &[F], y: &[F]) -> Vec<F> {
        self.alg.mul_vec(x, y)
    }

    pub fn mul_many(&self, factors: &[&[F]]) -> Vec<F> {
        self.alg.mul_many(factors)
    }

    pub fn gamma_of(&self, h: &[F]) -> Vec<F> {
        self.gamma.apply(h)
    }

    pub fn gamma_inv_of(&self, h: &[F]) -> Vec<F> {
        self.gamma_inv.apply(h)
    }

    pub fn j_nu_of(&self, a: &[F]) -> Vec<F> {
        self.j_nu.apply(a)
    }

    /// `γ_×(h₁,…,h_s) = γ(h₁)⋯γ(h_s)` on dense factors.
    pub fn gamma_prod(&self, hs: &[&[F]]) -> Vec<F> {
        let mut acc = self.alg.unit.clone();
        for h in hs {
            acc = self.mul(&acc, &self.gamma_of(h));
        }
        acc
    }

    /// `γ⁻¹_×(h₁,…,h_s) = γ⁻¹(h_s)⋯γ⁻¹(h₁)` on dense factors.
    pub fn gamma_inv_prod(&self, hs: &[&[F]]) -> Vec<F> {
        let mut acc = self.alg.unit.clone();
        for h in hs.iter().rev() {
            acc = self.mul(&acc, &self.gamma_inv_of(h));
        }
        acc
    }

    /// Ambient product on `A ⊗ H` by the crossed-product formula.
    pub fn ambient_product(&self, x: &[F], y: &[F]) -> Vec<F> {
        ambient_product(&self.measure, &self.cocycle.f, x, y)
    }
}

/// Crossed-product multiplication on ambient `A ⊗ H` vectors.
fn ambient_product<F: Scalar>(m: &WeakMeasure<F>, f: &PairMap<F>, x: &[F], y: &[F]) -> Vec<F> {
    let hd = m.hopf.dim();
    let ad = m.alg.dim;
    let mut out = vec![F::zero(); ad * hd];
    for (xi, xc) in x.iter().enumerate() {
        if xc.is_zero() {
            continue;
        }
        let (a, h) = (xi / hd, xi % hd);
        for (yi, yc) in y.iter().enumerate() {
            if yc.is_zero() {
                continue;
            }
            let (b, l) = (yi / hd, yi % hd);
            let coeff = xc.mul(yc);
            for (c, hidx) in m.hopf.coalg.delta_n(&basis_vec::<F>(hd, h), 3) {
                for (d, l1, l2) in m.hopf.coalg.delta(&basis_vec::<F>(hd, l)) {
                    let acted = m.action[hidx[0]].column(b);
                    let left = m.alg.mul_vec(&basis_vec::<F>(ad, a), &acted);
                    let a_part = m.alg.mul_vec(&left, &f[hidx[1]][l1]);
                    let h_part = m.hopf.alg.mult[hidx[2]][l2].clone();
                    let total = coeff.mul(&c).mul(&d);
                    for (t, av) in a_part.iter().enumerate() {
                        if av.is_zero() {
                            continue;
                        }
                        for (u, hv) in h_part.iter().enumerate() {
                            if !hv.is_zero() {
                                out[t * hd + u] = out[t * hd + u].add(&total.mul(&av.mul(hv)));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Builds the crossed product. Fails with the name of the first violated
/// hypothesis or structural property.
pub fn build_crossed_product<F: Scalar>(
    measure: &WeakMeasure<F>,
    cocycle: &CocyclePair<F>,
) -> Result<CrossedProduct<F>, String> {
    for check in verify_crossed_hypotheses(measure, &cocycle.f, "crossed product") {
        if !check.ok {
            return Err(format!("{} — {}", check.name, check.witness.clone().unwrap_or_default()));
        }
    }
    for check in cocycle.verify(measure, "cocycle pair") {
        if !check.ok {
            return Err(format!("{} — {}", check.name, check.witness.clone().unwrap_or_default()));
        }
    }
    let hd = measure.hopf.dim();
    let ad = measure.alg.dim;
    let ambient = Shape(vec![ad, hd]);

    let nabla_cols: Vec<Vec<F>> = (0..ad * hd)
        .map(|i| nabla_of(measure, &basis_vec::<F>(ad, i / hd), &basis_vec::<F>(hd, i % hd)))
        .collect();
    let nabla = Matrix::from_cols(ad * hd, nabla_cols);
    if nabla.mul(&nabla) != nabla {
        return Err("canonical idempotent on A ⊗ H is not idempotent".into());
    }
    let incl = nabla.column_space_basis();
    let dim_e = incl.cols;
    let retr = incl.solve_matrix(&nabla).ok_or("idempotent image does not retract onto its column basis")?;

    let e_basis: Vec<Vec<F>> = (0..dim_e).map(|u| incl.column(u)).collect();
    let mult: Vec<Vec<Vec<F>>> = e_basis
        .iter()
        .map(|x| e_basis.iter().map(|y| retr.apply(&ambient_product(measure, &cocycle.f, x, y))).collect())
        .collect();
    let mut unit_amb = vec![F::zero(); ad * hd];
    for (t, a) in measure.alg.unit.iter().enumerate() {
        for (u, h) in measure.hopf.alg.unit.iter().enumerate() {
            unit_amb[t * hd + u] = a.mul(h);
        }
    }
    let unit = retr.apply(&nabla.apply(&unit_amb));
    let alg = Algebra { dim: dim_e, mult, unit };

    let gamma_cols: Vec<Vec<F>> = (0..hd)
        .map(|h| {
            let mut amb = vec![F::zero(); ad * hd];
            for (t, a) in measure.alg.unit.iter().enumerate() {
                amb[t * hd + h] = a.clone();
            }
            retr.apply(&nabla.apply(&amb))
        })
        .collect();
    let gamma = Matrix::from_cols(dim_e, gamma_cols);
    let j_cols: Vec<Vec<F>> = (0..ad)
        .map(|a| {
            let mut amb = vec![F::zero(); ad * hd];
            for (u, h) in measure.hopf.alg.unit.iter().enumerate() {
                amb[a * hd + u] = h.clone();
            }
            retr.apply(&nabla.apply(&amb))
        })
        .collect();
    let j_nu = Matrix::from_cols(dim_e, j_cols);

    let gamma_inv_cols: Vec<Vec<F>> = (0..hd)
        .map(|h| {
            let mut out = vec![F::zero(); dim_e];
            for (c, idx) in measure.hopf.coalg.delta_n(&basis_vec::<F>(hd, h), 3) {
                let s1 = measure.hopf.apply_antipode(&basis_vec::<F>(hd, idx[0]));
                let s2 = measure.hopf.apply_antipode(&basis_vec::<F>(hd, idx[1]));
                let fv = eval_pair(&cocycle.f_inv, ad, &s2, &basis_vec::<F>(hd, idx[2]));
                let term = alg.mul_vec(&j_nu.apply(&fv), &gamma.apply(&s1));
                dense_add_assign(&mut out, &term, &c);
            }
            out
        })
        .collect();
    let gamma_inv = Matrix::from_cols(dim_e, gamma_inv_cols);

    let delta_cols: Vec<Vec<F>> = (0..dim_e)
        .map(|u| {
            let amb = incl.column(u);
            let mut out = vec![F::zero(); dim_e * hd];
            for (i, c) in amb.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (a, h) = (i / hd, i % hd);
                for (d, h1, h2) in measure.hopf.coalg.delta(&basis_vec::<F>(hd, h)) {
                    let first =
                        retr.apply(&nabla_of(measure, &basis_vec::<F>(ad, a), &basis_vec::<F>(hd, h1)));
                    for (t, x) in first.iter().enumerate() {
                        out[t * hd + h2] = out[t * hd + h2].add(&x.mul(&c.mul(&d)));
                    }
                }
            }
            out
        })
        .collect();
    let delta_e = Matrix::from_cols(dim_e * hd, delta_cols);

    let cp = CrossedProduct {
        measure: measure.clone(),
        cocycle: cocycle.clone(),
        ambient,
        nabla,
        incl,
        retr,
        alg,
        gamma,
        gamma_inv,
        j_nu,
        delta_e,
    };
    for check in cp.verify_bundle("crossed product") {
        if !check.ok {
            return Err(format!("{} — {}", check.name, check.witness.clone().unwrap_or_default()));
        }
    }
    Ok(cp)
}

impl<F: Scalar> CrossedProduct<F> {
    /// Convolution `(φ * ψ)(h) = φ(h⁽¹⁾) ψ(h⁽²⁾)` of maps `H → E`.
    pub fn convolve_to_e(&self, phi: &Matrix<F>, psi: &Matrix<F>) -> Matrix<F> {
        let hd = self.measure.hopf.dim();
        let cols: Vec<Vec<F>> = (0..hd)
            .map(|h| {
                let mut out = vec![F::zero(); self.dim()];
                for (c, h1, h2) in self.measure.hopf.coalg.delta(&basis_vec::<F>(hd, h)) {
                    let term = self.mul(&phi.column(h1), &psi.column(h2));
                    dense_add_assign(&mut out, &term, &c);
                }
                out
            })
            .collect();
        Matrix::from_cols(self.dim(), cols)
    }

    /// `δ_E` applied to a dense presented vector, as an `E ⊗ H` vector.
    pub fn delta_e_of(&self, x: &[F]) -> Vec<F> {
        self.delta_e.apply(x)
    }

    /// Structural properties of the bundle (idempotent, algebra, section
    /// maps, comodule structure).
    pub fn verify_bundle(&self, label: &str) -> Vec<Check> {
        let hd = self.measure.hopf.dim();
        let ad = self.measure.alg.dim;
        let de = self.dim();
        let e = |i: usize| basis_vec::<F>(hd, i);
        let ea = |i: usize| basis_vec::<F>(ad, i);
        let eu = |i: usize| basis_vec::<F>(de, i);
        let mut checks = Vec::new();

        checks.push(Check::of(
            format!("{label}: canonical idempotent squares to itself"),
            if self.nabla.mul(&self.nabla) == self.nabla { Ok(()) } else { Err("∇² ≠ ∇".into()) },
        ));

        // ∇ is left and right A-linear for the bimodule structure on A ⊗ H.
        let mut a_linear: Result<(), String> = Ok(());
        'lin: for a in 0..ad {
            let mut left = Matrix::zero(ad * hd, ad * hd);
            let mut right: Matrix<F> = Matrix::zero(ad * hd, ad * hd);
            for i in 0..ad * hd {
                let (b, h) = (i / hd, i % hd);
                let prod = self.measure.alg.mul_basis(a, b).clone();
                for (t, c) in prod.iter().enumerate() {
                    left.set(t * hd + h, i, c.clone());
                }
                for (c, h1, h2) in self.measure.hopf.coalg.delta(&e(h)) {
                    let acted = self.measure.act(&e(h1), &ea(a));
                    let ap = self.measure.alg.mul_vec(&ea(b), &acted);
                    for (t, x) in ap.iter().enumerate() {
                        let cur = right.at(t * hd + h2, i).clone();
                        right.set(t * hd + h2, i, cur.add(&x.mul(&c)));
                    }
                }
            }
            if self.nabla.mul(&left) != left.mul(&self.nabla)
                || self.nabla.mul(&right) != right.mul(&self.nabla)
            {
                a_linear = Err(format!("fails at algebra basis element {a}"));
                break 'lin;
            }
        }
        checks.push(Check::of(format!("{label}: idempotent commutes with both A-actions"), a_linear));

        checks.extend(self.alg.verify(&format!("{label}: product algebra")));

        // j_ν is a unital algebra map.
        let mut j_mult: Result<(), String> = Ok(());
        'jm: for a in 0..ad {
            for b in 0..ad {
                let lhs = self.mul(&self.j_nu.column(a), &self.j_nu.column(b));
                let rhs = self.j_nu.apply(&self.measure.alg.mul_basis(a, b).clone());
                if lhs != rhs {
                    j_mult = Err(format!("fails at pair ({a},{b})"));
                    break 'jm;
                }
            }
        }
        checks.push(Check::of(format!("{label}: algebra embedding is multiplicative"), j_mult));
        checks.push(Check::of(
            format!("{label}: algebra embedding is unitary"),
            if self.j_nu.apply(&self.measure.alg.unit) == self.alg.unit {
                Ok(())
            } else {
                Err("j(1_A) ≠ 1_E".into())
            },
        ));

        // j(a)·x and x·j(a) agree with the ambient bimodule actions.
        let mut bimod: Result<(), String> = Ok(());
        'bi: for a in 0..ad {
            for u in 0..de {
                let amb = self.incl.column(u);
                let mut left_amb = vec![F::zero(); ad * hd];
                let mut right_amb = vec![F::zero(); ad * hd];
                for (i, c) in amb.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (b, h) = (i / hd, i % hd);
                    let prod = self.measure.alg.mul_basis(a, b).clone();
                    for (t, x) in prod.iter().enumerate() {
                        left_amb[t * hd + h] = left_amb[t * hd + h].add(&x.mul(c));
                    }
                    for (d, h1, h2) in self.measure.hopf.coalg.delta(&e(h)) {
                        let acted = self.measure.act(&e(h1), &ea(a));
                        let ap = self.measure.alg.mul_vec(&ea(b), &acted);
                        for (t, x) in ap.iter().enumerate() {
                            right_amb[t * hd + h2] = right_amb[t * hd + h2].add(&x.mul(&c.mul(&d)));
                        }
                    }
                }
                if self.mul(&self.j_nu.column(a), &eu(u)) != self.retr.apply(&left_amb)
                    || self.mul(&eu(u), &self.j_nu.column(a)) != self.retr.apply(&right_amb)
                {
                    bimod = Err(format!("fails at ({a},{u})"));
                    break 'bi;
                }
            }
        }
        checks.push(Check::of(format!("{label}: embedding realizes the A-bimodule actions"), bimod));

        // a × h = j(a)γ(h).
        let mut eq1: Result<(), String> = Ok(());
        'e1: for a in 0..ad {
            for h in 0..hd {
                let lhs = self.retr.apply(&nabla_of(&self.measure, &ea(a), &e(h)));
                let rhs = self.mul(&self.j_nu.column(a), &self.gamma.column(h));
                if lhs != rhs {
                    eq1 = Err(format!("a × h ≠ j(a)γ(h) at ({a},{h})"));
                    break 'e1;
                }
            }
        }
        checks.push(Check::of(format!("{label}: product basis factorizes through the section"), eq1));

        // χ(h ⊗ a) = γ(h) j(a)  and  F_f(h ⊗ l) = γ(h)γ(l), in ambient form.
        let mut chi_ok: Result<(), String> = Ok(());
        'ch: for h in 0..hd {
            for a in 0..ad {
                let mut chi = vec![F::zero(); ad * hd];
                for (c, h1, h2) in self.measure.hopf.coalg.delta(&e(h)) {
                    let acted = self.measure.act(&e(h1), &ea(a));
                    for (t, x) in acted.iter().enumerate() {
                        chi[t * hd + h2] = chi[t * hd + h2].add(&x.mul(&c));
                    }
                }
                let rhs = self.incl.apply(&self.mul(&self.gamma.column(h), &self.j_nu.column(a)));
                if chi != rhs {
                    chi_ok = Err(format!("entwining map ≠ γ(h)j(a) at ({h},{a})"));
                    break 'ch;
                }
            }
        }
        checks.push(Check::of(format!("{label}: entwining map factorizes"), chi_ok));
        let mut ff_ok: Result<(), String> = Ok(());
        'ff: for h in 0..hd {
            for l in 0..hd {
                let mut ff = vec![F::zero(); ad * hd];
                for (c, h1, h2) in self.measure.hopf.coalg.delta(&e(h)) {
                    for (d, l1, l2) in self.measure.hopf.coalg.delta(&e(l)) {
                        let fv = &self.cocycle.f[h1][l1];
                        let hh = &self.measure.hopf.alg.mult[h2][l2];
                        for (t, x) in fv.iter().enumerate() {
                            for (u, y) in hh.iter().enumerate() {
                                ff[t * hd + u] = ff[t * hd + u].add(&x.mul(y).mul(&c.mul(&d)));
                            }
                        }
                    }
                }
                let rhs = self.incl.apply(&self.mul(&self.gamma.column(h), &self.gamma.column(l)));
                if ff != rhs {
                    ff_ok = Err(format!("cocycle lift ≠ γ(h)γ(l) at ({h},{l})"));
                    break 'ff;
                }
            }
        }
        checks.push(Check::of(format!("{label}: cocycle lift factorizes"), ff_ok));

        // γ * γ⁻¹ = γ ∘ Πᴸ and γ⁻¹ * γ = γ ∘ Πᴿ.
        let conv1 = self.convolve_to_e(&self.gamma, &self.gamma_inv);
        let conv2 = self.convolve_to_e(&self.gamma_inv, &self.gamma);
        checks.push(Check::of(
            format!("{label}: section convolution inverse (target side)"),
            if conv1 == self.gamma.mul(&self.measure.hopf.pi_l) {
                Ok(())
            } else {
                Err("γ*γ⁻¹ ≠ γ∘Πᴸ".into())
            },
        ));
        checks.push(Check::of(
            format!("{label}: section convolution inverse (source side)"),
            if conv2 == self.gamma.mul(&self.measure.hopf.pi_r) {
                Ok(())
            } else {
                Err("γ⁻¹*γ ≠ γ∘Πᴿ".into())
            },
        ));

        // Comodule structure.
        let mut counit_ok = true;
        let mut coassoc_ok = true;
        for u in 0..de {
            let d1 = self.delta_e_of(&eu(u));
            let mut back = vec![F::zero(); de];
            for (i, c) in d1.iter().enumerate() {
                if !c.is_zero() {
                    let (t, h) = (i / hd, i % hd);
                    back[t] = back[t].add(&c.mul(&self.measure.hopf.coalg.counit[h]));
                }
            }
            if back != eu(u) {
                counit_ok = false;
            }
            // (δ ⊗ id)δ vs (id ⊗ Δ)δ in E ⊗ H ⊗ H.
            let mut lhs = vec![F::zero(); de * hd * hd];
            let mut rhs = vec![F::zero(); de * hd * hd];
            for (i, c) in d1.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (t, h) = (i / hd, i % hd);
                let inner = self.delta_e_of(&eu(t));
                for (j, x) in inner.iter().enumerate() {
                    if !x.is_zero() {
                        let (v, g) = (j / hd, j % hd);
                        lhs[(v * hd + g) * hd + h] = lhs[(v * hd + g) * hd + h].add(&x.mul(c));
                    }
                }
                for (d, h1, h2) in self.measure.hopf.coalg.delta(&e(h)) {
                    rhs[(t * hd + h1) * hd + h2] = rhs[(t * hd + h1) * hd + h2].add(&c.mul(&d));
                }
            }
            if lhs != rhs {
                coassoc_ok = false;
            }
        }
        checks.push(Check::of(
            format!("{label}: comodule counit"),
            if counit_ok { Ok(()) } else { Err("(id ⊗ ε)δ ≠ id".into()) },
        ));
        checks.push(Check::of(
            format!("{label}: comodule coassociativity"),
            if coassoc_ok { Ok(()) } else { Err("(δ⊗id)δ ≠ (id⊗Δ)δ".into()) },
        ));

        // Multiplication is colinear: δ(xy) = δ(x)δ(y) in E ⊗ H.
        let mut colin: Result<(), String> = Ok(());
        'cl: for u in 0..de {
            for v in 0..de {
                let lhs = self.delta_e_of(&self.mul(&eu(u), &eu(v)));
                let du = self.delta_e_of(&eu(u));
                let dv = self.delta_e_of(&eu(v));
                let mut rhs = vec![F::zero(); de * hd];
                for (i, c) in du.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (t, h) = (i / hd, i % hd);
                    for (j, d) in dv.iter().enumerate() {
                        if d.is_zero() {
                            continue;
                        }
                        let (w, g) = (j / hd, j % hd);
                        let ep = self.mul(&eu(t), &eu(w));
                        let hp = self.measure.hopf.alg.mult[h][g].clone();
                        for (x, a) in ep.iter().enumerate() {
                            for (y, b) in hp.iter().enumerate() {
                                rhs[x * hd + y] = rhs[x * hd + y].add(&a.mul(b).mul(&c.mul(d)));
                            }
                        }
                    }
                }
                if lhs != rhs {
                    colin = Err(format!("fails at basis pair ({u},{v})"));
                    break 'cl;
                }
            }
        }
        checks.push(Check::of(format!("{label}: multiplication is colinear"), colin));

        // The six equivalent weak-comodule-algebra conditions.
        let d_unit = self.delta_e_of(&self.alg.unit);
        let delta_unit_h = self.measure.hopf.coalg.delta(&self.measure.hopf.alg.unit);
        let mut w1 = vec![F::zero(); de * hd * hd];
        let mut w2 = vec![F::zero(); de * hd * hd];
        let mut w_lhs = vec![F::zero(); de * hd * hd];
        for (i, c) in d_unit.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (t, h) = (i / hd, i % hd);
            let inner = self.delta_e_of(&eu(t));
            for (j, x) in inner.iter().enumerate() {
                if !x.is_zero() {
                    let (v, g) = (j / hd, j % hd);
                    w_lhs[(v * hd + g) * hd + h] = w_lhs[(v * hd + g) * hd + h].add(&x.mul(c));
                }
            }
            for (d, u1, u2) in &delta_unit_h {
                let hr = self.measure.hopf.alg.mult[h][*u1].clone();
                let hl = self.measure.hopf.alg.mult[*u1][h].clone();
                for (y, b) in hr.iter().enumerate() {
                    w1[(t * hd + y) * hd + *u2] = w1[(t * hd + y) * hd + *u2].add(&b.mul(&c.mul(d)));
                }
                for (y, b) in hl.iter().enumerate() {
                    w2[(t * hd + y) * hd + *u2] = w2[(t * hd + y) * hd + *u2].add(&b.mul(&c.mul(d)));
                }
            }
        }
        checks.push(Check::of(
            format!("{label}: weak comodule algebra condition 1"),
            if w_lhs == w1 { Ok(()) } else { Err("unit coaction fails the right-absorption form".into()) },
        ));
        checks.push(Check::of(
            format!("{label}: weak comodule algebra condition 2"),
            if w_lhs == w2 { Ok(()) } else { Err("unit coaction fails the left-absorption form".into()) },
        ));
        let mut w3: Result<(), String> = Ok(());
        let mut w4: Result<(), String> = Ok(());
        for u in 0..de {
            let du = self.delta_e_of(&eu(u));
            let mut lhs3 = vec![F::zero(); de * hd];
            let mut lhs4 = vec![F::zero(); de * hd];
            for (i, c) in du.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (t, h) = (i / hd, i % hd);
                let prb = self.measure.hopf.pi_r_bar.apply(&e(h));
                let pl = self.measure.hopf.pi_l.apply(&e(h));
                for (y, b) in prb.iter().enumerate() {
                    lhs3[t * hd + y] = lhs3[t * hd + y].add(&b.mul(c));
                }
                for (y, b) in pl.iter().enumerate() {
                    lhs4[t * hd + y] = lhs4[t * hd + y].add(&b.mul(c));
                }
            }
            let mut rhs3 = vec![F::zero(); de * hd];
            let mut rhs4 = vec![F::zero(); de * hd];
            for (i, c) in d_unit.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (t, h) = (i / hd, i % hd);
                let prod = self.mul(&eu(u), &eu(t));
                for (x, a) in prod.iter().enumerate() {
                    rhs3[x * hd + h] = rhs3[x * hd + h].add(&a.mul(c));
                }
                let prod2 = self.mul(&eu(t), &eu(u));
                for (x, a) in prod2.iter().enumerate() {
                    rhs4[x * hd + h] = rhs4[x * hd + h].add(&a.mul(c));
                }
            }
            if lhs3 != rhs3 && w3.is_ok() {
                w3 = Err(format!("fails at basis element {u}"));
            }
            if lhs4 != rhs4 && w4.is_ok() {
                w4 = Err(format!("fails at basis element {u}"));
            }
        }
        checks.push(Check::of(format!("{label}: weak comodule algebra condition 3"), w3));
        checks.push(Check::of(format!("{label}: weak comodule algebra condition 4"), w4));
        let mut lhs5 = vec![F::zero(); de * hd];
        let mut lhs6 = vec![F::zero(); de * hd];
        for (i, c) in d_unit.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (t, h) = (i / hd, i % hd);
            for (y, b) in self.measure.hopf.pi_r_bar.apply(&e(h)).iter().enumerate() {
                lhs5[t * hd + y] = lhs5[t * hd + y].add(&b.mul(c));
            }
            for (y, b) in self.measure.hopf.pi_l.apply(&e(h)).iter().enumerate() {
                lhs6[t * hd + y] = lhs6[t * hd + y].add(&b.mul(c));
            }
        }
        checks.push(Check::of(
            format!("{label}: weak comodule algebra condition 5"),
            if lhs5 == d_unit { Ok(()) } else { Err("source projection moves δ(1)".into()) },
        ));
        checks.push(Check::of(
            format!("{label}: weak comodule algebra condition 6"),
            if lhs6 == d_unit { Ok(()) } else { Err("target projection moves δ(1)".into()) },
        ));

        // δ(γ⁻¹(h)) = γ⁻¹(h⁽²⁾) ⊗ S(h⁽¹⁾).
        let mut coact_inv: Result<(), String> = Ok(());
        for h in 0..hd {
            let lhs = self.delta_e_of(&self.gamma_inv.column(h));
            let mut rhs = vec![F::zero(); de * hd];
            for (c, h1, h2) in self.measure.hopf.coalg.delta(&e(h)) {
                let ge = self.gamma_inv.column(h2);
                let sh = self.measure.hopf.apply_antipode(&e(h1));
                for (t, x) in ge.iter().enumerate() {
                    for (y, b) in sh.iter().enumerate() {
                        rhs[t * hd + y] = rhs[t * hd + y].add(&x.mul(b).mul(&c));
                    }
                }
            }
            if lhs != rhs {
                coact_inv = Err(format!("fails at basis element {h}"));
                break;
            }
        }
        checks.push(Check::of(format!("{label}: coaction on the section inverse"), coact_inv));
        checks
    }
}

/// The minimal stable subalgebra `K = span{h·1_A}` with its stability and
/// span-comparison checks.
pub fn minimal_stable_subalgebra<F: Scalar>(
    m: &WeakMeasure<F>,
    label: &str,
) -> (Subalgebra<F>, Vec<Check>) {
    let hd = m.hopf.dim();
    let span: Vec<Vec<F>> = (0..hd).map(|i| m.act_on_unit(&basis_vec::<F>(hd, i))).collect();
    let sub = Subalgebra::from_span(&span);
    let mut checks = sub.verify_closed(&m.alg, label);
    let mat = Matrix::from_cols(m.alg.dim, sub.basis.clone());
    let mut stable: Result<(), String> = Ok(());
    'st: for i in 0..hd {
        for k in &sub.basis {
            if mat.solve(&m.act(&basis_vec::<F>(hd, i), k)).is_none() {
                stable = Err(format!("action of basis element {i} leaves the span"));
                break 'st;
            }
        }
    }
    checks.push(Check::of(format!("{label}: stable under the action"), stable));
    // The same span arises from the two canonical subalgebras of H.
    for (name, basis) in
        [("target subalgebra orbit", &m.hopf.hl_basis), ("source subalgebra orbit", &m.hopf.hr_basis)]
    {
        let other = Subalgebra::from_span(&basis.iter().map(|l| m.act_on_unit(l)).collect::<Vec<_>>());
        checks.push(Check::of(
            format!("{label}: equals the {name}"),
            if other.basis == sub.basis { Ok(()) } else { Err("orbit spans differ".into()) },
        ));
    }
    (sub, checks)
}

/// The trivial representation: the target subalgebra of `H` as a module
/// algebra via `h · l = Πᴸ(hl)`, as a weak measure on an abstract copy.
pub fn trivial_representation_measure<F: Scalar>(h: &WeakHopf<F>) -> WeakMeasure<F> {
    let hl = Matrix::from_cols(h.dim(), h.hl_basis.clone());
    let n = h.hl_basis.len();
    let coords = |v: &[F]| -> Vec<F> { hl.solve(v).expect("target subalgebra is not closed") };
    let mult: Vec<Vec<Vec<F>>> = (0..n)
        .map(|i| (0..n).map(|j| coords(&h.alg.mul_vec(&h.hl_basis[i], &h.hl_basis[j]))).collect())
        .collect();
    let unit = coords(&h.alg.unit);
    let alg = Algebra { dim: n, mult, unit };
    let action: Vec<Matrix<F>> = (0..h.dim())
        .map(|i| {
            let cols: Vec<Vec<F>> = (0..n)
                .map(|j| {
                    let prod = h.alg.mul_vec(&basis_vec::<F>(h.dim(), i), &h.hl_basis[j]);
                    coords(&h.pi_l.apply(&prod))
                })
                .collect();
            Matrix::from_cols(n, cols)
        })
        .collect();
    WeakMeasure::new(h.clone(), alg, action)
}

/// The exhaustive identity suite for cleft sections: commutation rules for
/// `γ`, `γ⁻¹`, and the embedding, evaluated on every basis tuple.
/// `smax` bounds the tensor degree of the chain-level identities.
pub fn verify_cleft_identities<F: Scalar>(cp: &CrossedProduct<F>, smax: usize, label: &str) -> Vec<Check> {
    let m = &cp.measure;
    let hd = m.hopf.dim();
    let ad = m.alg.dim;
    let de = cp.dim();
    let e = |i: usize| basis_vec::<F>(hd, i);
    let ea = |i: usize| basis_vec::<F>(ad, i);
    let mut checks = Vec::new();

    // γ(h) j(a) = j(h⁽¹⁾·a) γ(h⁽²⁾)  and  γ(h)γ(l) = j(f(h⁽¹⁾⊗l⁽¹⁾)) γ(h⁽²⁾l⁽²⁾).
    let mut c1: Result<(), String> = Ok(());
    'c1: for h in 0..hd {
        for a in 0..ad {
            let lhs = cp.mul(&cp.gamma.column(h), &cp.j_nu.column(a));
            let mut rhs = vec![F::zero(); de];
            for (c, h1, h2) in m.hopf.coalg.delta(&e(h)) {
                let term = cp.mul(&cp.j_nu_of(&m.act(&e(h1), &ea(a))), &cp.gamma.column(h2));
                dense_add_assign(&mut rhs, &term, &c);
            }
            if lhs != rhs {
                c1 = Err(format!("fails at ({h},{a})"));
                break 'c1;
            }
        }
    }
    checks.push(Check::of(format!("{label}: section slides past the embedding"), c1));
    let mut c2: Result<(), String> = Ok(());
    'c2: for h in 0..hd {
        for l in 0..hd {
            let lhs = cp.mul(&cp.gamma.column(h), &cp.gamma.column(l));
            let mut rhs = vec![F::zero(); de];
            for (c, h1, h2) in m.hopf.coalg.delta(&e(h)) {
                for (d, l1, l2) in m.hopf.coalg.delta(&e(l)) {
                    let term = cp.mul(
                        &cp.j_nu_of(&cp.cocycle.f[h1][l1]),
                        &cp.gamma_of(&m.hopf.alg.mult[h2][l2]),
                    );
                    dense_add_assign(&mut rhs, &term, &c.mul(&d));
                }
            }
            if lhs != rhs {
                c2 = Err(format!("fails at ({h},{l})"));
                break 'c2;
            }
        }
    }
    checks.push(Check::of(format!("{label}: section products factor through the cocycle"), c2));

    // f(hl ⊗ m) = f(h ⊗ lm) for l in either canonical subalgebra.
    let mut c3: Result<(), String> = Ok(());
    'c3: for basis in [&m.hopf.hl_basis, &m.hopf.hr_basis] {
        for l in basis {
            for h in 0..hd {
                for mm in 0..hd {
                    let lhs = eval_pair(&cp.cocycle.f, ad, &m.hopf.alg.mul_vec(&e(h), l), &e(mm));
                    let rhs = eval_pair(&cp.cocycle.f, ad, &e(h), &m.hopf.alg.mul_vec(l, &e(mm)));
                    if lhs != rhs {
                        c3 = Err(format!("fails at ({h},{mm})"));
                        break 'c3;
                    }
                }
            }
        }
    }
    checks.push(Check::of(format!("{label}: cocycle slides subalgebra factors"), c3));

    // γ(hS(1⁽¹⁾)) γ(1⁽²⁾l) = γ(h)γ(l).
    let delta_unit = m.hopf.coalg.delta(&m.hopf.alg.unit);
    let mut c4: Result<(), String> = Ok(());
    'c4: for h in 0..hd {
        for l in 0..hd {
            let mut lhs = vec![F::zero(); de];
            for (c, u1, u2) in &delta_unit {
                let left = m.hopf.alg.mul_vec(&e(h), &m.hopf.apply_antipode(&basis_vec::<F>(hd, *u1)));
                let right = m.hopf.alg.mult[*u2][l].clone();
                let term = cp.mul(&cp.gamma_of(&left), &cp.gamma_of(&right));
                dense_add_assign(&mut lhs, &term, c);
            }
            if lhs != cp.mul(&cp.gamma.column(h), &cp.gamma.column(l)) {
                c4 = Err(format!("fails at ({h},{l})"));
                break 'c4;
            }
        }
    }
    checks.push(Check::of(format!("{label}: unit-split section product"), c4));

    // j(a)γ(h1⁽¹⁾) j(b)γ(S(1⁽²⁾)l) = j(a)γ(h) j(b)γ(l).
    let mut c5: Result<(), String> = Ok(());
    'c5: for a in 0..ad {
        for b in 0..ad {
            for h in 0..hd {
                for l in 0..hd {
                    let mut lhs = vec![F::zero(); de];
                    for (c, u1, u2) in &delta_unit {
                        let g1 = cp.gamma_of(&m.hopf.alg.mult[h][*u1]);
                        let g2 = cp
                            .gamma_of(&m.hopf.alg.mul_vec(&m.hopf.apply_antipode(&basis_vec::<F>(hd, *u2)), &e(l)));
                        let term =
                            cp.mul_many(&[&cp.j_nu.column(a), &g1, &cp.j_nu.column(b), &g2]);
                        dense_add_assign(&mut lhs, &term, c);
                    }
                    let rhs = cp.mul_many(&[
                        &cp.j_nu.column(a),
                        &cp.gamma.column(h),
                        &cp.j_nu.column(b),
                        &cp.gamma.column(l),
                    ]);
                    if lhs != rhs {
                        c5 = Err(format!("fails at ({a},{b},{h},{l})"));
                        break 'c5;
                    }
                }
            }
        }
    }
    checks.push(Check::of(format!("{label}: interleaved unit split"), c5));

    // γ multiplicativity against subalgebra factors; γ(l) = j(l·1); central
    // behaviour of source-subalgebra sections.
    let mut c6: Result<(), String> = Ok(());
    'c6: for basis in [&m.hopf.hl_basis, &m.hopf.hr_basis] {
        for l in basis {
            for h in 0..hd {
                if cp.mul(&cp.gamma_of(&e(h)), &cp.gamma_of(l))
                    != cp.gamma_of(&m.hopf.alg.mul_vec(&e(h), l))
                    || cp.mul(&cp.gamma_of(l), &cp.gamma_of(&e(h)))
                        != cp.gamma_of(&m.hopf.alg.mul_vec(l, &e(h)))
                {
                    c6 = Err(format!("fails at Hopf element {h}"));
                    break 'c6;
                }
            }
        }
    }
    checks.push(Check::of(format!("{label}: section is multiplicative on subalgebra factors"), c6));
    let mut c7: Result<(), String> = Ok(());
    for l in &m.hopf.hl_basis {
        if cp.gamma_of(l) != cp.j_nu_of(&m.act_on_unit(l)) {
            c7 = Err("γ(l) ≠ j(l·1)".into());
            break;
        }
    }
    checks.push(Check::of(format!("{label}: target-subalgebra sections embed"), c7));
    let mut c8: Result<(), String> = Ok(());
    'c8: for l in &m.hopf.hr_basis {
        for a in 0..ad {
            if cp.mul(&cp.j_nu.column(a), &cp.gamma_of(l)) != cp.mul(&cp.gamma_of(l), &cp.j_nu.column(a)) {
                c8 = Err(format!("fails at algebra element {a}"));
                break 'c8;
            }
        }
    }
    checks.push(Check::of(format!("{label}: source-subalgebra sections commute with A"), c8));

    // Coaction variants with a target-subalgebra factor inserted.
    let mut c9: Result<(), String> = Ok(());
    'c9: for l in &m.hopf.hl_basis {
        for a in 0..ad {
            for b in 0..ad {
                for h in 0..hd {
                    let front = cp.mul_many(&[&cp.j_nu.column(a), &cp.gamma_of(l), &cp.j_nu.column(b)]);
                    let x = cp.mul(&front, &cp.gamma.column(h));
                    let lhs = cp.delta_e_of(&x);
                    let mut rhs = vec![F::zero(); de * hd];
                    for (c, h1, h2) in m.hopf.coalg.delta(&e(h)) {
                        let part = cp.mul(&front, &cp.gamma.column(h1));
                        for (t, v) in part.iter().enumerate() {
                            rhs[t * hd + h2] = rhs[t * hd + h2].add(&v.mul(&c));
                        }
                    }
                    if lhs != rhs {
                        c9 = Err(format!("fails at ({a},{b},{h})"));
                        break 'c9;
                    }
                    let back = cp.mul(&cp.j_nu.column(b), &cp.gamma_of(l));
                    let y = cp.mul_many(&[&cp.j_nu.column(a), &cp.gamma.column(h), &back]);
                    let lhs2 = cp.delta_e_of(&y);
                    let mut rhs2 = vec![F::zero(); de * hd];
                    for (c, h1, h2) in m.hopf.coalg.delta(&e(h)) {
                        let part = cp.mul_many(&[&cp.j_nu.column(a), &cp.gamma.column(h1), &back]);
                        for (t, v) in part.iter().enumerate() {
                            rhs2[t * hd + h2] = rhs2[t * hd + h2].add(&v.mul(&c));
                        }
                    }
                    if lhs2 != rhs2 {
                        c9 = Err(format!("fails on the mirrored form at ({a},{b},{h})"));
                        break 'c9;
                    }
                }
            }
        }
    }
    checks.push(Check::of(format!("{label}: coaction ignores embedded target factors"), c9));
    // δ(j(A)γ(Hᴸ)) lands in E ⊗ Hᴸ.
    let hl_mat = Matrix::from_cols(hd, m.hopf.hl_basis.clone());
    let mut c10: Result<(), String> = Ok(());
    'c10: for a in 0..ad {
        for l in &m.hopf.hl_basis {
            let d = cp.delta_e_of(&cp.mul(&cp.j_nu.column(a), &cp.gamma_of(l)));
            // Each H-leg must lie in the target subalgebra span.
            for t in 0..de {
                let leg: Vec<F> = (0..hd).map(|y| d[t * hd + y].clone()).collect();
                if hl_mat.solve(&leg).is_none() {
                    c10 = Err(format!("H-leg escapes the target subalgebra at ({a})"));
                    break 'c10;
                }
            }
        }
    }
    checks.push(Check::of(format!("{label}: embedded target part coacts inside the subalgebra"), c10));

    // j(a)γ⁻¹(h) = γ⁻¹(h⁽¹⁾) j(h⁽²⁾·a).
    let mut c11: Result<(), String> = Ok(());
    'c11: for a in 0..ad {
        for h in 0..hd {
            let lhs = cp.mul(&cp.j_nu.column(a), &cp.gamma_inv.column(h));
            let mut rhs = vec![F::zero(); de];
            for (c, h1, h2) in m.hopf.coalg.delta(&e(h)) {
                let term = cp.mul(&cp.gamma_inv.column(h1), &cp.j_nu_of(&m.act(&e(h2), &ea(a))));
                dense_add_assign(&mut rhs, &term, &c);
            }
            if lhs != rhs {
                c11 = Err(format!("fails at ({a},{h})"));
                break 'c11;
            }
        }
    }
    checks.push(Check::of(format!("{label}: embedding slides past the section inverse"), c11));

    // γ⁻¹(hl) = γ(S(l))γ⁻¹(h) and γ⁻¹(lh) = γ⁻¹(h)γ(S(l)) for target factors.
    let mut c12: Result<(), String> = Ok(());
    'c12: for l in &m.hopf.hl_basis {
        let sl = m.hopf.apply_antipode(l);
        for h in 0..hd {
            if cp.gamma_inv_of(&m.hopf.alg.mul_vec(&e(h), l))
                != cp.mul(&cp.gamma_of(&sl), &cp.gamma_inv.column(h))
                || cp.gamma_inv_of(&m.hopf.alg.mul_vec(l, &e(h)))
                    != cp.mul(&cp.gamma_inv.column(h), &cp.gamma_of(&sl))
            {
                c12 = Err(format!("fails at Hopf element {h}"));
                break 'c12;
            }
        }
    }
    checks.push(Check::of(format!("{label}: section inverse twists target factors"), c12));

    checks.extend(relative_chain_identities(cp, smax, label));
    checks.extend(barred_sandwich_identity(cp, smax, label));
    checks
}

/// Presentation of `E ⊗_A Ẽ^{⊗_A s}` where `Ẽ = E / j(A)`: used by the
/// chain-level sliding identities.
fn e_tilde_space<F: Scalar>(cp: &CrossedProduct<F>, s: usize) -> crate::linalg::QuotientPresentation<F> {
    use crate::linalg::{sparse_add_assign as sadd, SparseVec};
    let de = cp.dim();
    let ad = cp.measure.alg.dim;
    let shape = Shape(vec![de; s + 1]);
    let mut relations: Vec<SparseVec<F>> = Vec::new();
    // Slots 1..=s kill the embedded copy of A.
    for slot in 1..=s {
        for a in 0..ad {
            let ja = cp.j_nu.column(a);
            let rest_sh = Shape(vec![de; s]);
            for rest in 0..de.pow(s as u32) {
                let rest_idx = rest_sh.unflatten(rest);
                let mut rel: SparseVec<F> = SparseVec::new();
                for (j, c) in ja.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut idx = Vec::with_capacity(s + 1);
                    let mut k = 0;
                    for t in 0..=s {
                        if t == slot {
                            idx.push(j);
                        } else {
                            idx.push(rest_idx[k]);
                            k += 1;
                        }
                    }
                    sadd(&mut rel, shape.flatten(&idx), c);
                }
                if !rel.is_empty() {
                    relations.push(rel);
                }
            }
        }
    }
    // Balancing over A between consecutive slots.
    for slot in 0..s {
        for a in 0..ad {
            let ja = cp.j_nu.column(a);
            for full in 0..shape.total() {
                let idx = shape.unflatten(full);
                let mut rel: SparseVec<F> = SparseVec::new();
                let xa = cp.mul(&basis_vec::<F>(de, idx[slot]), &ja);
                for (j, c) in xa.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut m2 = idx.clone();
                    m2[slot] = j;
                    sadd(&mut rel, shape.flatten(&m2), c);
                }
                let ay = cp.mul(&ja, &basis_vec::<F>(de, idx[slot + 1]));
                for (j, c) in ay.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut m2 = idx.clone();
                    m2[slot + 1] = j;
                    sadd(&mut rel, shape.flatten(&m2), &c.neg());
                }
                if !rel.is_empty() {
                    relations.push(rel);
                }
            }
        }
    }
    crate::linalg::QuotientPresentation::from_relations(shape.total(), relations)
}

/// The two chain-level identities in `E ⊗_A Ẽ^{⊗_A s}`: the embedding slides
/// through a full inverse chain, and a section chain cancels its inverse.
fn relative_chain_identities<F: Scalar>(cp: &CrossedProduct<F>, smax: usize, label: &str) -> Vec<Check> {
    let m = &cp.measure;
    let hd = m.hopf.dim();
    let ad = m.alg.dim;
    let de = cp.dim();
    let mut slide: Result<(), String> = Ok(());
    let mut cancel: Result<(), String> = Ok(());
    for s in 1..=smax {
        let pres = e_tilde_space(cp, s);
        let shape = Shape(vec![de; s + 1]);
        let tuple_sh = Shape(vec![hd; s]);
        let project = |terms: &[(F, Vec<Vec<F>>)]| -> Vec<F> {
            let mut amb: crate::linalg::SparseVec<F> = crate::linalg::SparseVec::new();
            for (c, factors) in terms {
                crate::tensor::accumulate_product(&shape, c, factors, &mut amb);
            }
            pres.project_sparse(&amb)
        };
        'tuples: for flat in 0..hd.pow(s as u32) {
            let hs = tuple_sh.unflatten(flat);
            // Expand each h_t with Δ²; combined expansion over independent slots.
            let mut expansions: Vec<Vec<(F, Vec<usize>)>> = Vec::new();
            for &t in &hs {
                expansions.push(m.hopf.coalg.delta_n(&basis_vec::<F>(hd, t), 2));
            }
            let mut expansions3: Vec<Vec<(F, Vec<usize>)>> = Vec::new();
            for &t in &hs {
                expansions3.push(m.hopf.coalg.delta_n(&basis_vec::<F>(hd, t), 3));
            }
            for a in 0..ad {
                let ja = cp.j_nu.column(a);
                // LHS: γ⁻¹_×(h⁽¹⁾) ⊗ γ̃(h₁⁽²⁾) ⊗ … ⊗ γ̃(h_s⁽²⁾)·j(a);
                // RHS: j(a) γ⁻¹_×(h⁽¹⁾) ⊗ γ̃(h⁽²⁾).
                let mut lhs_terms: Vec<(F, Vec<Vec<F>>)> = Vec::new();
                let mut rhs_terms: Vec<(F, Vec<Vec<F>>)> = Vec::new();
                let mut stack: Vec<(F, Vec<usize>)> = vec![(F::one(), Vec::new())];
                for exp in &expansions {
                    let mut next = Vec::new();
                    for (c, picked) in &stack {
                        for (d, idx) in exp {
                            let mut p = picked.clone();
                            p.extend_from_slice(idx);
                            next.push((c.mul(d), p));
                        }
                    }
                    stack = next;
                }
                for (c, picked) in &stack {
                    // picked = [h1^(1), h1^(2), h2^(1), h2^(2), …]
                    let first_vecs: Vec<Vec<F>> =
                        (0..s).map(|t| basis_vec::<F>(hd, picked[2 * t])).collect();
                    let refs: Vec<&[F]> = first_vecs.iter().map(|v| v.as_slice()).collect();
                    let head = cp.gamma_inv_prod(&refs);
                    let mut factors_l = vec![head.clone()];
                    let mut factors_r = vec![cp.mul(&ja, &head)];
                    for t in 0..s {
                        let g = cp.gamma.column(picked[2 * t + 1]);
                        if t == s - 1 {
                            factors_l.push(cp.mul(&g, &ja));
                        } else {
                            factors_l.push(g.clone());
                        }
                        factors_r.push(g);
                    }
                    lhs_terms.push((c.clone(), factors_l));
                    rhs_terms.push((c.clone(), factors_r));
                }
                if project(&lhs_terms) != project(&rhs_terms) && slide.is_ok() {
                    slide = Err(format!("fails at degree {s} on tuple {hs:?} with algebra element {a}"));
                    break 'tuples;
                }
            }
            // Cancellation: γ_×(h⁽¹⁾)γ⁻¹_×(h⁽²⁾) ⊗ γ̃(h⁽³⁾) = 1 ⊗ γ̃(h).
            let mut l_terms: Vec<(F, Vec<Vec<F>>)> = Vec::new();
            let mut stack3: Vec<(F, Vec<usize>)> = vec![(F::one(), Vec::new())];
            for exp in &expansions3 {
                let mut next = Vec::new();
                for (c, picked) in &stack3 {
                    for (d, idx) in exp {
                        let mut p = picked.clone();
                        p.extend_from_slice(idx);
                        next.push((c.mul(d), p));
                    }
                }
                stack3 = next;
            }
            for (c, picked) in &stack3 {
                let ones: Vec<Vec<F>> = (0..s).map(|t| basis_vec::<F>(hd, picked[3 * t])).collect();
                let twos: Vec<Vec<F>> = (0..s).map(|t| basis_vec::<F>(hd, picked[3 * t + 1])).collect();
                let one_refs: Vec<&[F]> = ones.iter().map(|v| v.as_slice()).collect();
                let two_refs: Vec<&[F]> = twos.iter().map(|v| v.as_slice()).collect();
                let head = cp.mul(&cp.gamma_prod(&one_refs), &cp.gamma_inv_prod(&two_refs));
                let mut factors = vec![head];
                for t in 0..s {
                    factors.push(cp.gamma.column(picked[3 * t + 2]));
                }
                l_terms.push((c.clone(), factors));
            }
            let mut factors = vec![cp.alg.unit.clone()];
            for &t in &hs {
                factors.push(cp.gamma.column(t));
            }
            let r_terms: Vec<(F, Vec<Vec<F>>)> = vec![(F::one(), factors)];
            if project(&l_terms) != project(&r_terms) && cancel.is_ok() {
                cancel = Err(format!("fails at degree {s} on tuple {hs:?}"));
            }
        }
    }
    vec![
        Check::of(format!("{label}: embedding slides through inverse chains"), slide),
        Check::of(format!("{label}: section chains cancel their inverses"), cancel),
    ]
}

/// Sandwich identity in `E ⊗ H̄^{⊗_{Hᴸ}s}`: a source-subalgebra section
/// conjugated through an inverse chain reduces to a projection acting on the
/// barred tuple.
fn barred_sandwich_identity<F: Scalar>(cp: &CrossedProduct<F>, smax: usize, label: &str) -> Vec<Check> {
    use crate::presented::barred_tensor_space;
    let m = &cp.measure;
    let hd = m.hopf.dim();
    let de = cp.dim();
    let delta_unit = m.hopf.coalg.delta(&m.hopf.alg.unit);
    let mut result: Result<(), String> = Ok(());
    for s in 1..=smax {
        let barred = barred_tensor_space(&m.hopf, s, &[], &[], |_l, _t| crate::linalg::SparseVec::new());
        let bdim = barred.pres.dim;
        let barred_sh = Shape(vec![hd; s]);
        let tuple_sh = Shape(vec![hd; s]);
        let project_tuple = |factors: &[Vec<F>]| -> Vec<F> {
            let mut amb: crate::linalg::SparseVec<F> = crate::linalg::SparseVec::new();
            crate::tensor::accumulate_product(&barred_sh, &F::one(), factors, &mut amb);
            barred.pres.project_sparse(&amb)
        };
        'tuples: for flat in 0..hd.pow(s as u32) {
            let hs = tuple_sh.unflatten(flat);
            for z in &m.hopf.hr_basis {
                // LHS: γ⁻¹_×(h⁽¹⁾) γ(z) γ_×(h⁽²⁾) ⊗ h̄⁽³⁾ in E ⊗ H̄^{⊗s}.
                let mut lhs = vec![vec![F::zero(); bdim]; de];
                let mut stack: Vec<(F, Vec<usize>)> = vec![(F::one(), Vec::new())];
                for &t in &hs {
                    let exp = m.hopf.coalg.delta_n(&basis_vec::<F>(hd, t), 3);
                    let mut next = Vec::new();
                    for (c, picked) in &stack {
                        for (d, idx) in &exp {
                            let mut p = picked.clone();
                            p.extend_from_slice(idx);
                            next.push((c.mul(d), p));
                        }
                    }
                    stack = next;
                }
                for (c, picked) in &stack {
                    let ones: Vec<Vec<F>> = (0..s).map(|t| basis_vec::<F>(hd, picked[3 * t])).collect();
                    let twos: Vec<Vec<F>> = (0..s).map(|t| basis_vec::<F>(hd, picked[3 * t + 1])).collect();
                    let one_refs: Vec<&[F]> = ones.iter().map(|v| v.as_slice()).collect();
                    let head = cp.mul_many(&[
                        &cp.gamma_inv_prod(&one_refs),
                        &cp.gamma_of(z),
                        &cp.gamma_prod(&twos.iter().map(|v| v.as_slice()).collect::<Vec<_>>()),
                    ]);
                    let tuple: Vec<Vec<F>> =
                        (0..s).map(|t| basis_vec::<F>(hd, picked[3 * t + 2])).collect();
                    let coords = project_tuple(&tuple);
                    for (ei, ev) in head.iter().enumerate() {
                        if ev.is_zero() {
                            continue;
                        }
                        for (qi, qv) in coords.iter().enumerate() {
                            lhs[ei][qi] = lhs[ei][qi].add(&c.mul(&ev.mul(qv)));
                        }
                    }
                }
                // RHS: γ(1⁽¹⁾) ⊗ Π̄ᴿ(z)·h̄_{1s}·1⁽²⁾.
                let mut rhs = vec![vec![F::zero(); bdim]; de];
                let prb_z = m.hopf.pi_r_bar.apply(z);
                for (c, u1, u2) in &delta_unit {
                    let head = cp.gamma.column(*u1);
                    let mut tuple: Vec<Vec<F>> =
                        hs.iter().map(|&t| basis_vec::<F>(hd, t)).collect();
                    tuple[0] = m.hopf.alg.mul_vec(&prb_z, &tuple[0]);
                    let last = tuple[s - 1].clone();
                    tuple[s - 1] = m.hopf.alg.mul_vec(&last, &basis_vec::<F>(hd, *u2));
                    let coords = project_tuple(&tuple);
                    for (ei, ev) in head.iter().enumerate() {
                        if ev.is_zero() {
                            continue;
                        }
                        for (qi, qv) in coords.iter().enumerate() {
                            rhs[ei][qi] = rhs[ei][qi].add(&c.mul(&ev.mul(qv)));
                        }
                    }
                }
                if lhs != rhs {
                    result = Err(format!("fails at degree {s} on tuple {hs:?}"));
                    break 'tuples;
                }
            }
        }
    }
    vec![Check::of(format!("{label}: sandwiched source sections project"), result)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{cyclic_group_algebra, dual_numbers, pair_groupoid_algebra};
    use crate::field::Rat;
    use crate::report::Report;

    fn scalar_line_measure() -> WeakMeasure<Rat> {
        // A = Q with the trivial action of QC₂.
        let h = cyclic_group_algebra::<Rat>(2);
        let alg = Algebra { dim: 1, mult: vec![vec![vec![Rat::one()]]], unit: vec![Rat::one()] };
        let action = vec![Matrix::identity(1), Matrix::identity(1)];
        WeakMeasure::new(h, alg, action)
    }

    fn sign_action_measure() -> WeakMeasure<Rat> {
        // A = Q[x]/(x²), C₂ acting by x ↦ −x.
        let h = cyclic_group_algebra::<Rat>(2);
        let a = dual_numbers::<Rat>();
        let mut flip = Matrix::identity(2);
        flip.set(1, 1, Rat::one().neg());
        let action = vec![Matrix::identity(2), flip];
        WeakMeasure::new(h, a, action)
    }

    #[test]
    fn trivial_action_gives_group_algebra() {
        let m = scalar_line_measure();
        Report { checks: m.verify_weak_module_algebra("scalar line") }.expect_ok("crossed");
        assert!(m.is_module());
        let f = trivial_cocycle(&m).unwrap();
        Report { checks: f.verify(&m, "trivial cocycle") }.expect_ok("crossed");
        let cp = build_crossed_product(&m, &f).unwrap();
        assert_eq!(cp.dim(), 2);
        // Trivial cocycle on a Hopf fixture: γ⁻¹ = γ ∘ S.
        assert_eq!(cp.gamma_inv, cp.gamma.mul(&cp.measure.hopf.antipode));
        Report { checks: verify_cleft_identities(&cp, 2, "scalar line") }.expect_ok("crossed");
    }

    #[test]
    fn sign_action_smash_product() {
        let m = sign_action_measure();
        Report { checks: m.verify_weak_module_algebra("sign action") }.expect_ok("crossed");
        assert!(m.is_module());
        let f = trivial_cocycle(&m).unwrap();
        let cp = build_crossed_product(&m, &f).unwrap();
        assert_eq!(cp.dim(), 4);
        assert_eq!(cp.gamma_inv, cp.gamma.mul(&cp.measure.hopf.antipode));
        Report { checks: verify_cleft_identities(&cp, 2, "sign action") }.expect_ok("crossed");
        let (k, checks) = minimal_stable_subalgebra(&m, "sign action base");
        Report { checks }.expect_ok("crossed");
        assert_eq!(k.dim(), 1);
    }

    #[test]
    fn trivial_representation_crossed_product() {
        let h = pair_groupoid_algebra::<Rat>(2);
        let m = trivial_representation_measure(&h);
        Report { checks: m.verify_weak_module_algebra("trivial representation") }.expect_ok("crossed");
        assert!(m.is_module());
        let f = trivial_cocycle(&m).unwrap();
        let cp = build_crossed_product(&m, &f).unwrap();
        assert_eq!(cp.dim(), cp.nabla.rank());
        Report { checks: verify_cleft_identities(&cp, 2, "trivial representation") }.expect_ok("crossed");
        let (k, checks) = minimal_stable_subalgebra(&m, "trivial representation base");
        Report { checks }.expect_ok("crossed");
        assert_eq!(k.dim(), 2);
    }

    #[test]
    fn cocycle_inversion_solves_and_detects_failure() {
        let m = sign_action_measure();
        let u2 = m.u2();
        let (pair, unique) = invert_cocycle(&m, &u2).unwrap();
        assert!(unique);
        assert_eq!(pair.f_inv, u2);
        // The zero map has no convolution inverse.
        let zero: PairMap<Rat> = vec![vec![vec![Rat::zero(); 2]; 2]; 2];
        assert!(invert_cocycle(&m, &zero).is_err());
    }

    #[test]
    fn weak_only_action_is_reported() {
        // Q × Q with the second C₂ generator acting by the non-unital
        // projection (x, y) ↦ (x, 0): multiplicative, but h·(l·1) ≠ hl·1.
        let h = cyclic_group_algebra::<Rat>(2);
        let alg = Algebra {
            dim: 2,
            mult: vec![
                vec![vec![Rat::one(), Rat::zero()], vec![Rat::zero(), Rat::zero()]],
                vec![vec![Rat::zero(), Rat::zero()], vec![Rat::zero(), Rat::one()]],
            ],
            unit: vec![Rat::one(), Rat::one()],
        };
        let mut proj = Matrix::zero(2, 2);
        proj.set(0, 0, Rat::one());
        let action = vec![Matrix::identity(2), proj];
        let m = WeakMeasure::new(h, alg, action);
        let checks = m.verify_weak_module_algebra("broken unit composition");
        assert!(checks.iter().any(|c| !c.ok && c.name.contains("composes on the unit")));
        assert!(trivial_cocycle(&m).is_err());
    }
}
