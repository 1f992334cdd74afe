//! Chain-level machinery: complexes, homology, homotopies, double and mixed
//! complexes, cyclic-type bicomplexes, and spectral sequences of filtered
//! complexes.
//!
//! Dimensions of homology are computed as `dim ker dₙ − rank dₙ₊₁`; both
//! numbers come from exact row reduction, so every reported dimension is an
//! exact integer, never an estimate.

use crate::field::Scalar;
use crate::linalg::Matrix;
use crate::report::Check;
use std::collections::BTreeMap;

/// A non-negatively graded chain complex `X_0 ← X_1 ← …`.
#[derive(Clone, Debug)]
pub struct ChainComplex<F: Scalar> {
    /// `dims[n]` = dim X_n.
    pub dims: Vec<usize>,
    /// `d[n]` : X_{n+1} → X_n.
    pub d: Vec<Matrix<F>>,
}

impl<F: Scalar> ChainComplex<F> {
    pub fn top_degree(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    /// The differential leaving degree `n` (into degree `n−1`); degree 0
    /// maps to the zero space.
    pub fn differential_from(&self, n: usize) -> Option<&Matrix<F>> {
        if n == 0 || n > self.top_degree() {
            None
        } else {
            Some(&self.d[n - 1])
        }
    }

    pub fn verify_complex(&self, label: &str) -> Check {
        for n in 0..self.d.len() {
            assert_eq!(self.d[n].rows, self.dims[n], "differential shape at degree {}", n + 1);
            assert_eq!(self.d[n].cols, self.dims[n + 1]);
        }
        for n in 1..self.d.len() {
            if !self.d[n - 1].mul(&self.d[n]).is_zero() {
                return Check::fail(
                    format!("{label}: differential squares to zero"),
                    format!("d∘d ≠ 0 leaving degree {}", n + 1),
                );
            }
        }
        Check::pass(format!("{label}: differential squares to zero"))
    }

    /// Homology dimensions in degrees `0..=nmax`; requires the complex to be
    /// built at least one degree higher than `nmax`.
    /// A complex that is merely truncated (rather than genuinely zero) above
    /// `nmax + 1` must be built at least one degree higher than `nmax` or the
    /// top boundary group would be underestimated.
    pub fn homology_dims(&self, nmax: usize) -> Vec<usize> {
        (0..=nmax)
            .map(|n| {
                let cycles = match self.differential_from(n) {
                    None => self.dims[n],
                    Some(d) => self.dims[n] - d.rank(),
                };
                let boundaries = self.differential_from(n + 1).map_or(0, |d| d.rank());
                cycles - boundaries
            })
            .collect()
    }
}

/// A non-negatively graded cochain complex `X⁰ → X¹ → …`.
#[derive(Clone, Debug)]
pub struct CochainComplex<F: Scalar> {
    pub dims: Vec<usize>,
    /// `d[n]` : Xⁿ → Xⁿ⁺¹.
    pub d: Vec<Matrix<F>>,
}

impl<F: Scalar> CochainComplex<F> {
    pub fn top_degree(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn verify_complex(&self, label: &str) -> Check {
        for n in 0..self.d.len() {
            assert_eq!(self.d[n].cols, self.dims[n]);
            assert_eq!(self.d[n].rows, self.dims[n + 1]);
        }
        for n in 1..self.d.len() {
            if !self.d[n].mul(&self.d[n - 1]).is_zero() {
                return Check::fail(
                    format!("{label}: codifferential squares to zero"),
                    format!("d∘d ≠ 0 entering degree {}", n + 1),
                );
            }
        }
        Check::pass(format!("{label}: codifferential squares to zero"))
    }

    pub fn cohomology_dims(&self, nmax: usize) -> Vec<usize> {
        (0..=nmax)
            .map(|n| {
                let cycles = if n < self.d.len() { self.dims[n] - self.d[n].rank() } else { self.dims[n] };
                let boundaries = if n >= 1 { self.d[n - 1].rank() } else { 0 };
                cycles - boundaries
            })
            .collect()
    }
}

/// Verifies that `h` is a chain homotopy between chain maps `f` and `g` on a
/// complex `x` (all maps into a complex `y` with the same grading):
/// `f_n − g_n = d^Y_{n+1} h_n + h_{n−1} d^X_n` in degrees `0..=nmax`.
pub fn homotopy_check<F: Scalar>(
    x: &ChainComplex<F>,
    y: &ChainComplex<F>,
    f: &[Matrix<F>],
    g: &[Matrix<F>],
    h: &[Matrix<F>],
    nmax: usize,
    label: &str,
) -> Check {
    for n in 0..=nmax {
        let mut rhs = y.d[n].mul(&h[n]);
        if n >= 1 {
            rhs = rhs.add(&h[n - 1].mul(&x.d[n - 1]));
        }
        if f[n].sub(&g[n]) != rhs {
            return Check::fail(
                format!("{label}: homotopy identity"),
                format!("fails in degree {n}"),
            );
        }
    }
    Check::pass(format!("{label}: homotopy identity"))
}

/// First-quadrant double complex with anticommuting differentials.
#[derive(Clone, Debug, Default)]
pub struct DoubleComplex<F: Scalar> {
    /// `(r, s) → dim`; missing entries are zero.
    pub dims: BTreeMap<(usize, usize), usize>,
    /// Horizontal differential `(r, s) → (r−1, s)`.
    pub dh: BTreeMap<(usize, usize), Matrix<F>>,
    /// Vertical differential `(r, s) → (r, s−1)`.
    pub dv: BTreeMap<(usize, usize), Matrix<F>>,
}

/// Layout of a total-complex degree: the `(r, s)` components in order with
/// their coordinate offsets.
pub type TotalLayout = Vec<Vec<((usize, usize), usize)>>;

impl<F: Scalar> DoubleComplex<F> {
    pub fn dim_at(&self, r: usize, s: usize) -> usize {
        *self.dims.get(&(r, s)).unwrap_or(&0)
    }

    /// Total complex in degrees `0..=nmax`; components of a total degree are
    /// ordered by increasing `s`.  The stored component maps must already
    /// anticommute (signs are part of the maps); verification is the
    /// `d² = 0` check on the result.
    pub fn total(&self, nmax: usize) -> (ChainComplex<F>, TotalLayout) {
        let mut layout: TotalLayout = Vec::new();
        let mut dims = Vec::new();
        for n in 0..=nmax {
            let mut offset = 0;
            let mut comps = Vec::new();
            for s in 0..=n {
                let r = n - s;
                let d = self.dim_at(r, s);
                if d > 0 {
                    comps.push(((r, s), offset));
                    offset += d;
                }
            }
            layout.push(comps);
            dims.push(offset);
        }
        let mut diffs = Vec::new();
        for n in 1..=nmax {
            let mut m = Matrix::zero(dims[n - 1], dims[n]);
            for &((r, s), src_off) in &layout[n] {
                let mut place = |map: &Matrix<F>, tr: usize, ts: usize| {
                    if map.rows == 0 {
                        return;
                    }
                    if let Some(&(_, dst_off)) =
                        layout[n - 1].iter().find(|&&(c, _)| c == (tr, ts))
                    {
                        for i in 0..map.rows {
                            for j in 0..map.cols {
                                let v = map.at(i, j);
                                if !v.is_zero() {
                                    m.set(dst_off + i, src_off + j, v.clone());
                                }
                            }
                        }
                    } else {
                        assert!(map.is_zero(), "component map targets a zero slot");
                    }
                };
                if r >= 1 {
                    if let Some(map) = self.dh.get(&(r, s)) {
                        place(map, r - 1, s);
                    }
                }
                if s >= 1 {
                    if let Some(map) = self.dv.get(&(r, s)) {
                        place(map, r, s - 1);
                    }
                }
            }
            diffs.push(m);
        }
        (ChainComplex { dims, d: diffs }, layout)
    }

    /// Column-filtration subspaces of the total complex: level `p` spans the
    /// components with `s ≤ p`.  Returns, per degree, the nested list of
    /// basis matrices for `p = 0..=nmax`.
    pub fn column_filtration(&self, layout: &TotalLayout, dims: &[usize], nmax: usize) -> Vec<Vec<Matrix<F>>> {
        let mut filt = Vec::new();
        for n in 0..layout.len() {
            let mut levels = Vec::new();
            for p in 0..=nmax {
                let mut cols = Vec::new();
                for &((r, s), off) in &layout[n] {
                    if s <= p {
                        let d = self.dim_at(r, s);
                        for j in 0..d {
                            let mut v = vec![F::zero(); dims[n]];
                            v[off + j] = F::one();
                            cols.push(v);
                        }
                    }
                }
                levels.push(Matrix::from_cols(dims[n], cols));
            }
            filt.push(levels);
        }
        filt
    }
}

/// A mixed complex: a chain complex `(X, b)` with a degree-raising operator
/// `B` satisfying `B² = 0` and `bB + Bb = 0`.
#[derive(Clone, Debug)]
pub struct MixedComplex<F: Scalar> {
    pub chain: ChainComplex<F>,
    /// `b_op[n]` : X_n → X_{n+1}.
    pub b_op: Vec<Matrix<F>>,
}

impl<F: Scalar> MixedComplex<F> {
    pub fn verify(&self, label: &str) -> Vec<Check> {
        let mut checks = vec![self.chain.verify_complex(label)];
        let top = self.chain.top_degree();
        let mut bb: Result<(), String> = Ok(());
        for n in 0..self.b_op.len().saturating_sub(1).min(top) {
            if !self.b_op[n + 1].mul(&self.b_op[n]).is_zero() {
                bb = Err(format!("B² ≠ 0 leaving degree {n}"));
                break;
            }
        }
        checks.push(Check::of(format!("{label}: degree-raising operator squares to zero"), bb));
        let mut anti: Result<(), String> = Ok(());
        for n in 0..self.b_op.len() {
            // b_{n+1} B_n + B_{n-1} b_n = 0 on X_n.
            if n + 1 > self.chain.d.len() {
                break;
            }
            let mut acc = self.chain.d[n].mul(&self.b_op[n]);
            if n >= 1 {
                acc = acc.add(&self.b_op[n - 1].mul(&self.chain.d[n - 1]));
            }
            if !acc.is_zero() {
                anti = Err(format!("bB + Bb ≠ 0 on degree {n}"));
                break;
            }
        }
        checks.push(Check::of(format!("{label}: mixed anticommutation"), anti));
        checks
    }
}

/// Which cyclic-type bicomplex to assemble from a mixed complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicKind {
    /// Columns `i ≥ 0`; finite in every degree (cyclic homology).
    Cyclic,
    /// Columns `i ≤ 0`; an infinite tower truncated to `i ≥ −t` (negative
    /// cyclic homology).
    Negative,
    /// All columns, truncated below at `i ≥ −t` (periodic cyclic homology).
    Periodic,
}

/// Totalisation of the cyclic-type bicomplex of a mixed complex.
///
/// Degree `N` holds one copy of `X_{N−2i}` per admissible column `i`; the
/// differential sends the column-`i` component `c` to `b(c)` in column `i`
/// plus `B(c)` in column `i − 1`.  For the truncated towers the result is a
/// window approximation; [`cyclic_homology_dims`] reports whether enlarging
/// the window changes the answer.
pub fn cyclic_total<F: Scalar>(
    mixed: &MixedComplex<F>,
    kind: CyclicKind,
    nmax: usize,
    trunc: usize,
) -> ChainComplex<F> {
    let maxdeg = mixed.chain.top_degree();
    let columns = |n: usize| -> Vec<i64> {
        let n = n as i64;
        let lo = match kind {
            CyclicKind::Cyclic => 0,
            CyclicKind::Negative | CyclicKind::Periodic => -(trunc as i64),
        };
        let hi = match kind {
            CyclicKind::Negative => 0,
            CyclicKind::Cyclic | CyclicKind::Periodic => n / 2,
        };
        (lo..=hi).filter(|i| n - 2 * i >= 0 && n - 2 * i <= maxdeg as i64).collect()
    };
    let mut dims = Vec::new();
    let mut offsets: Vec<BTreeMap<i64, usize>> = Vec::new();
    for n in 0..=nmax {
        let mut off = BTreeMap::new();
        let mut total = 0;
        for i in columns(n) {
            off.insert(i, total);
            total += mixed.chain.dims[(n as i64 - 2 * i) as usize];
        }
        offsets.push(off);
        dims.push(total);
    }
    let mut diffs = Vec::new();
    for n in 1..=nmax {
        let mut m = Matrix::zero(dims[n - 1], dims[n]);
        for (&i, &src_off) in &offsets[n] {
            let deg = (n as i64 - 2 * i) as usize;
            // b component stays in column i.
            if deg >= 1 {
                if let Some(&dst_off) = offsets[n - 1].get(&i) {
                    let b = &mixed.chain.d[deg - 1];
                    for r in 0..b.rows {
                        for c in 0..b.cols {
                            let v = b.at(r, c);
                            if !v.is_zero() {
                                m.set(dst_off + r, src_off + c, v.clone());
                            }
                        }
                    }
                }
            }
            // B component moves to column i − 1 (same total degree − 1).
            if deg < mixed.b_op.len() {
                if let Some(&dst_off) = offsets[n - 1].get(&(i - 1)) {
                    let bb = &mixed.b_op[deg];
                    for r in 0..bb.rows {
                        for c in 0..bb.cols {
                            let v = bb.at(r, c);
                            if !v.is_zero() {
                                m.set(dst_off + r, src_off + c, v.clone());
                            }
                        }
                    }
                }
            }
        }
        diffs.push(m);
    }
    ChainComplex { dims, d: diffs }
}

/// Totalisation of the negative or periodic tower of a *bounded* mixed
/// complex, with internal degree `m` representing total degree `m − shift`.
/// Every admissible column of each degree is included — boundedness of the
/// chain direction makes them finite — so this is the exact tower, not a
/// window.
fn shifted_tower<F: Scalar>(
    cut: &MixedComplex<F>,
    kind: CyclicKind,
    internal_nmax: usize,
    shift: i64,
) -> ChainComplex<F> {
    let top = cut.chain.top_degree() as i64;
    let columns = |m: usize| -> Vec<i64> {
        let n = m as i64 - shift;
        let hi = match kind {
            CyclicKind::Negative => 0,
            CyclicKind::Periodic => n.div_euclid(2),
            CyclicKind::Cyclic => unreachable!("the cyclic bicomplex needs no shift"),
        };
        let lo = (n - top + 1).div_euclid(2);
        (lo..=hi).filter(|i| (0..=top).contains(&(n - 2 * i))).collect()
    };
    let mut dims = Vec::new();
    let mut offsets: Vec<BTreeMap<i64, usize>> = Vec::new();
    for m in 0..=internal_nmax {
        let mut off = BTreeMap::new();
        let mut total = 0;
        for i in columns(m) {
            off.insert(i, total);
            total += cut.chain.dims[(m as i64 - shift - 2 * i) as usize];
        }
        offsets.push(off);
        dims.push(total);
    }
    let mut diffs = Vec::new();
    for m in 1..=internal_nmax {
        let mut mat = Matrix::zero(dims[m - 1], dims[m]);
        for (&i, &src_off) in &offsets[m] {
            let deg = (m as i64 - shift - 2 * i) as usize;
            if deg >= 1 {
                if let Some(&dst_off) = offsets[m - 1].get(&i) {
                    copy_block(&mut mat, &cut.chain.d[deg - 1], dst_off, src_off);
                }
            }
            if deg < cut.b_op.len() {
                if let Some(&dst_off) = offsets[m - 1].get(&(i - 1)) {
                    copy_block(&mut mat, &cut.b_op[deg], dst_off, src_off);
                }
            }
        }
        diffs.push(mat);
    }
    ChainComplex { dims, d: diffs }
}

fn copy_block<F: Scalar>(dst: &mut Matrix<F>, block: &Matrix<F>, row_off: usize, col_off: usize) {
    for r in 0..block.rows {
        for c in 0..block.cols {
            let v = block.at(r, c);
            if !v.is_zero() {
                dst.set(row_off + r, col_off + c, v.clone());
            }
        }
    }
}

/// Good truncation of a mixed complex at chain degree `t`: degrees below `t`
/// are kept, degree `t` becomes `X_t / im(b_{t+1})`, everything above is
/// dropped.  The result is again a mixed complex, and the projection is a
/// quasi-isomorphism on the Hochschild level — hence induces isomorphisms in
/// cyclic, negative cyclic and periodic homology — precisely when the
/// Hochschild homology of the input vanishes in degrees above `t`.
pub fn good_truncation<F: Scalar>(mixed: &MixedComplex<F>, t: usize) -> MixedComplex<F> {
    assert!(t + 1 <= mixed.chain.top_degree(), "truncation degree must leave a boundary above");
    let top_q = crate::algebra::quotient_module::<F>(
        mixed.chain.dims[t],
        &(0..mixed.chain.d[t].cols).map(|j| mixed.chain.d[t].column(j)).collect::<Vec<_>>(),
    );
    let mut dims: Vec<usize> = mixed.chain.dims[..t].to_vec();
    dims.push(top_q.dim);
    let mut d: Vec<Matrix<F>> = mixed.chain.d[..t.saturating_sub(1)].to_vec();
    if t >= 1 {
        // b out of the truncated top, through the preferred section.
        d.push(mixed.chain.d[t - 1].mul(&top_q.sect));
    }
    let mut b_op: Vec<Matrix<F>> = mixed.b_op[..t.saturating_sub(1).min(mixed.b_op.len())].to_vec();
    if t >= 1 && t - 1 < mixed.b_op.len() {
        // B into the truncated top, composed with the projection.
        b_op.push(top_q.proj.mul(&mixed.b_op[t - 1]));
    }
    // B out of the top degree is dropped.
    MixedComplex { chain: ChainComplex { dims, d }, b_op }
}

/// Homology dimensions of a cyclic-type totalisation together with a window
/// flag.
///
/// For the cyclic bicomplex the answer only involves chain degrees up to
/// `nmax + 2`, so it is `"exact"` whenever the mixed complex is built that
/// high.  The negative and periodic towers extend infinitely in the chain
/// direction; they are approximated through [`good_truncation`] at degree
/// `trunc`, whose towers are finite and computed exactly.  The result is
/// `"stabilized"` when truncating at `trunc` and `trunc + 1` agree in all
/// reported degrees — which certifies the answer whenever the Hochschild
/// homology vanishes above `trunc` — and `"truncated"` when they disagree or
/// the built window cannot accommodate the wider cut.
pub fn cyclic_homology_dims<F: Scalar>(
    mixed: &MixedComplex<F>,
    kind: CyclicKind,
    nmax: usize,
    trunc: usize,
) -> (Vec<usize>, &'static str) {
    if kind == CyclicKind::Cyclic {
        let dims = cyclic_total(mixed, kind, nmax + 1, 0).homology_dims(nmax);
        return (dims, "exact");
    }
    let top = mixed.chain.top_degree();
    assert!(trunc + 1 <= top, "mixed complex too shallow for truncation degree {trunc}");
    let tower = |t: usize| -> Vec<usize> {
        let cut = good_truncation(mixed, t);
        // The towers live in all total degrees, including negative ones;
        // the cycle condition at degree 0 maps into degree −1.  Build with
        // an internal shift of 2 (true degree = internal − 2) so that the
        // map out of true degree 0 is part of the complex, then discard the
        // two synthetic bottom degrees.
        let shifted = shifted_tower(&cut, kind, nmax + 3, 2);
        shifted.homology_dims(nmax + 2)[2..].to_vec()
    };
    let dims = tower(trunc);
    if trunc + 2 > top {
        return (dims, "truncated");
    }
    let wider = tower(trunc + 1);
    let flag = if dims == wider { "stabilized" } else { "truncated" };
    (dims, flag)
}

// ───────────────────────── spectral sequences ──────────────────────────

/// One page entry: the subquotient dimension, chosen ambient representatives
/// of its basis, and the data needed to express ambient vectors in the basis.
#[derive(Clone, Debug)]
pub struct PageEntry<F: Scalar> {
    pub dim: usize,
    /// Columns: ambient representatives of the page basis.
    pub reps: Matrix<F>,
    /// Columns: basis of the cycle subspace Z at this position.
    z_basis: Matrix<F>,
    /// Projection from Z-coordinates onto the page quotient.
    z_proj: Matrix<F>,
}

/// A single page of a spectral sequence with its differentials.
#[derive(Clone, Debug)]
pub struct Page<F: Scalar> {
    pub r: usize,
    pub entries: BTreeMap<(usize, usize), PageEntry<F>>,
    /// `d_r` leaving position `(p, q)`.
    pub maps: BTreeMap<(usize, usize), Matrix<F>>,
}

impl<F: Scalar> Page<F> {
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.entries.get(&(p, q)).map_or(0, |e| e.dim)
    }
}

fn echelon_cols<F: Scalar>(m: &Matrix<F>) -> Matrix<F> {
    m.column_space_basis()
}

/// `{x ∈ col(u) : d x ∈ col(w)}` as an echelonised column basis.
fn preimage_within<F: Scalar>(u: &Matrix<F>, d: &Matrix<F>, w: &Matrix<F>) -> Matrix<F> {
    if u.cols == 0 {
        return Matrix::zero(u.rows, 0);
    }
    let du = d.mul(u);
    // Quotient of the target by col(w): kernel of (proj ∘ d ∘ u).
    let wq = crate::algebra::quotient_module::<F>(d.rows, &(0..w.cols).map(|j| w.column(j)).collect::<Vec<_>>());
    let m = wq.proj.mul(&du);
    let ker = m.kernel_basis();
    let cols: Vec<Vec<F>> = ker.iter().map(|c| u.apply(c)).collect();
    echelon_cols(&Matrix::from_cols(u.rows, cols))
}

fn sum_spaces<F: Scalar>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    echelon_cols(&a.hstack(b))
}

/// Spectral sequence of a filtered chain complex.
///
/// `filt[n][p]` spans the filtration level `p` of degree `n` (levels
/// `0..=pmax`, increasing and exhaustive).  Pages `1..=rmax` are returned;
/// positions are `(p, q)` with total degree `p + q ≤ nmax`.
pub fn chain_spectral_pages<F: Scalar>(
    complex: &ChainComplex<F>,
    filt: &[Vec<Matrix<F>>],
    nmax: usize,
    rmax: usize,
) -> Vec<Page<F>> {
    let pmax = filt[0].len() - 1;
    let zero_mat = |n: i64| -> Matrix<F> {
        let dim = if n < 0 || n as usize >= complex.dims.len() { 0 } else { complex.dims[n as usize] };
        Matrix::zero(dim, 0)
    };
    let level = |n: i64, p: i64| -> Matrix<F> {
        if n < 0 || n as usize >= filt.len() || p < 0 {
            zero_mat(n)
        } else {
            let p = (p as usize).min(pmax);
            filt[n as usize][p].clone()
        }
    };
    // z[r][(p, n)] = Z^r_{p, n−p}, computed for r = 0..=rmax.
    let mut z: Vec<BTreeMap<(i64, i64), Matrix<F>>> = Vec::new();
    for r in 0..=rmax + 1 {
        let mut layer = BTreeMap::new();
        for n in 0..=(nmax as i64 + 1) {
            for p in -1..=(pmax as i64) {
                let u = level(n, p);
                let m = if n == 0 {
                    // No outgoing differential: everything is a cycle for
                    // every r.
                    echelon_cols(&u)
                } else if r == 0 {
                    echelon_cols(&u)
                } else {
                    let d = &complex.d[(n - 1) as usize];
                    preimage_within(&u, d, &level(n - 1, p - r as i64))
                };
                layer.insert((p, n), m);
            }
        }
        z.push(layer);
    }
    let mut pages = Vec::new();
    for r in 1..=rmax {
        let mut entries = BTreeMap::new();
        let mut maps = BTreeMap::new();
        for n in 0..=(nmax as i64) {
            for p in 0..=(pmax as i64) {
                let q = n - p;
                if q < 0 {
                    continue;
                }
                let zc = &z[r][&(p, n)];
                // Boundary part: Z^{r−1}_{p−1, q+1} + d Z^{r−1}_{p+r−1, q−r+2}.
                let lower = &z[r - 1][&((p - 1).max(-1), n)];
                let dsrc = if n + 1 <= nmax as i64 + 1 {
                    let a = p + r as i64 - 1;
                    if a <= pmax as i64 {
                        z[r - 1].get(&(a, n + 1)).cloned()
                    } else {
                        // Above the top level the filtration is exhaustive,
                        // so the cycle space lives in the whole degree with
                        // the shifted boundary condition.
                        Some(preimage_within(
                            &level(n + 1, pmax as i64),
                            &complex.d[n as usize],
                            &level(n, a - r as i64 + 1),
                        ))
                    }
                } else {
                    None
                };
                let mut bpart = echelon_cols(lower);
                if let Some(src) = dsrc {
                    if n + 1 >= 1 && src.cols > 0 {
                        let d = &complex.d[n as usize];
                        bpart = sum_spaces(&bpart, &echelon_cols(&d.mul(&src)));
                    }
                }
                // Present E^r = Z / (B ∩ Z);  B ⊆ Z holds by construction.
                let entry = present_subquotient(zc, &bpart);
                entries.insert((p as usize, q as usize), entry);
            }
        }
        // Differentials d_r: (p, q) → (p−r, q+r−1).
        let keys: Vec<(usize, usize)> = entries.keys().copied().collect();
        for (p, q) in keys {
            let n = p + q;
            if n == 0 {
                continue;
            }
            let src: &PageEntry<F> = &entries[&(p, q)];
            let tp = p as i64 - r as i64;
            let tq = q as i64 + r as i64 - 1;
            let d = &complex.d[n - 1];
            let mut cols = Vec::new();
            let mut ok = true;
            for j in 0..src.dim {
                let x = src.reps.column(j);
                let y = d.apply(&x);
                if tp < 0 || tq < 0 {
                    if !crate::tensor::dense_is_zero(&y) {
                        ok = false;
                    }
                    continue;
                }
                let dst = &entries[&(tp as usize, tq as usize)];
                match dst.z_basis.solve(&y) {
                    Some(c) => cols.push(dst.z_proj.apply(&c)),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            assert!(ok, "page differential leaves the cycle space at ({p},{q}) on page {r}");
            if tp >= 0 && tq >= 0 {
                let dst_dim = entries[&(tp as usize, tq as usize)].dim;
                maps.insert((p, q), Matrix::from_cols(dst_dim, cols));
            }
        }
        pages.push(Page { r, entries, maps });
    }
    pages
}

fn present_subquotient<F: Scalar>(zc: &Matrix<F>, bpart: &Matrix<F>) -> PageEntry<F> {
    use crate::linalg::QuotientPresentation;
    // Express the boundary part in Z-coordinates and quotient.
    let mut rels = Vec::new();
    for j in 0..bpart.cols {
        let c = zc
            .solve(&bpart.column(j))
            .expect("boundary space must lie inside the cycle space");
        let sparse: crate::linalg::SparseVec<F> =
            c.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect();
        rels.push(sparse);
    }
    let q = QuotientPresentation::from_relations(zc.cols, rels);
    let reps = zc.mul(&q.sect);
    PageEntry { dim: q.dim, reps, z_basis: zc.clone(), z_proj: q.proj }
}

/// Spectral sequence of a cochain complex with a decreasing filtration
/// (`filt[n][p]` spans `F^p Xⁿ ⊇ F^{p+1} Xⁿ`, levels `0..=pmax` with
/// `F^0` the whole space).  Differentials move `(p, q) → (p+r, q−r+1)`.
pub fn cochain_spectral_pages<F: Scalar>(
    complex: &CochainComplex<F>,
    filt: &[Vec<Matrix<F>>],
    nmax: usize,
    rmax: usize,
) -> Vec<Page<F>> {
    let pmax = filt[0].len() - 1;
    let level = |n: i64, p: i64| -> Matrix<F> {
        let dim = if n < 0 || n as usize >= complex.dims.len() { 0 } else { complex.dims[n as usize] };
        if n < 0 || n as usize >= filt.len() {
            return Matrix::zero(dim, 0);
        }
        if p <= 0 {
            return filt[n as usize][0].clone();
        }
        if p as usize > pmax {
            // Beyond the last level the filtration is zero.
            return Matrix::zero(dim, 0);
        }
        filt[n as usize][p as usize].clone()
    };
    let mut z: Vec<BTreeMap<(i64, i64), Matrix<F>>> = Vec::new();
    for r in 0..=rmax + 1 {
        let mut layer = BTreeMap::new();
        for n in 0..=(nmax as i64 + 1) {
            for p in 0..=(pmax as i64 + 1) {
                let u = level(n, p);
                let m = if r == 0 || n as usize >= complex.d.len() {
                    echelon_cols(&u)
                } else {
                    preimage_within(&u, &complex.d[n as usize], &level(n + 1, p + r as i64))
                };
                layer.insert((p, n), m);
            }
        }
        z.push(layer);
    }
    let mut pages = Vec::new();
    for r in 1..=rmax {
        let mut entries = BTreeMap::new();
        let mut maps = BTreeMap::new();
        for n in 0..=(nmax as i64) {
            for p in 0..=(pmax as i64) {
                let q = n - p;
                if q < 0 {
                    continue;
                }
                let zc = &z[r][&(p, n)];
                let higher = &z[r - 1][&((p + 1).min(pmax as i64 + 1), n)];
                let mut bpart = echelon_cols(higher);
                if n >= 1 {
                    let psrc = p - r as i64 + 1;
                    let src = if psrc >= 0 {
                        z[r - 1][&(psrc, n - 1)].clone()
                    } else {
                        // Below the bottom filtration level the cycle
                        // condition references `F^{psrc+r−1}` on the whole
                        // space, which the stored layers do not cover.
                        preimage_within(
                            &level(n - 1, 0),
                            &complex.d[(n - 1) as usize],
                            &level(n, psrc + r as i64 - 1),
                        )
                    };
                    if src.cols > 0 {
                        let d = &complex.d[(n - 1) as usize];
                        bpart = sum_spaces(&bpart, &echelon_cols(&d.mul(&src)));
                    }
                }
                entries.insert((p as usize, q as usize), present_subquotient(zc, &bpart));
            }
        }
        let keys: Vec<(usize, usize)> = entries.keys().copied().collect();
        for (p, q) in keys {
            let n = p + q;
            if n >= complex.d.len() {
                continue;
            }
            let src: &PageEntry<F> = &entries[&(p, q)];
            let tp = p + r;
            let tq = q as i64 - r as i64 + 1;
            if p + q + 1 > nmax {
                // Target degree is outside the computed window.
                continue;
            }
            let d = &complex.d[n];
            let mut cols = Vec::new();
            let mut in_window = true;
            for j in 0..src.dim {
                let y = d.apply(&src.reps.column(j));
                if tq < 0 || tp > pmax {
                    // The target filtration level is zero there, so the
                    // differential must vanish.
                    assert!(
                        crate::tensor::dense_is_zero(&y),
                        "page differential escapes the window at ({p},{q}) on page {r}"
                    );
                    in_window = false;
                    continue;
                }
                let dst = &entries[&(tp, tq as usize)];
                let c = dst.z_basis.solve(&y).expect("page differential leaves the cycle space");
                cols.push(dst.z_proj.apply(&c));
            }
            if in_window && tq >= 0 && tp <= pmax {
                let dst_dim = entries[&(tp, tq as usize)].dim;
                maps.insert((p, q), Matrix::from_cols(dst_dim, cols));
            }
        }
        pages.push(Page { r, entries, maps });
    }
    pages
}

/// Internal consistency of consecutive pages: the dimensions of page `r+1`
/// must equal the homology of `(page r, d_r)` at every position in range.
pub fn verify_page_transition<F: Scalar>(pages: &[Page<F>], nmax: usize, label: &str, chain: bool) -> Check {
    for w in pages.windows(2) {
        let (cur, next) = (&w[0], &w[1]);
        let r = cur.r;
        for (&(p, q), entry) in &cur.entries {
            if p + q + 1 > nmax {
                continue;
            }
            let out_rank = cur.maps.get(&(p, q)).map_or(0, |m| m.rank());
            let in_pos = if chain {
                ((p + r) as i64, q as i64 - r as i64 + 1)
            } else {
                (p as i64 - r as i64, q as i64 + r as i64 - 1)
            };
            let in_rank = if in_pos.0 >= 0 && in_pos.1 >= 0 {
                cur.maps.get(&(in_pos.0 as usize, in_pos.1 as usize)).map_or(0, |m| m.rank())
            } else {
                0
            };
            let expected = entry.dim - out_rank - in_rank;
            let got = next.entries.get(&(p, q)).map_or(0, |e| e.dim);
            if expected != got {
                return Check::fail(
                    format!("{label}: page recurrence"),
                    format!("page {} → {} mismatch at ({p},{q}): expected {expected}, got {got}", r, r + 1),
                );
            }
        }
    }
    Check::pass(format!("{label}: page recurrence"))
}
