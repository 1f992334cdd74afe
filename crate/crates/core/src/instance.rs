//! JSON instance format: serialization, parsing, and eager validation.
//!
//! An instance file describes everything needed to build a crossed product
//! `E = A ×ρ H` over an exact field: the weak Hopf algebra `H`, the base
//! algebra `A`, the measuring action, an optional cocycle pair (`"trivial"`
//! selects the convolution unit), the stable subalgebra `K` (`"minimal"`
//! resolves to the unit orbit), and the coefficient module (`"regular"`
//! selects `M = E`).
//!
//! Conventions:
//! * Rationals are serialized as `"p/q"` strings (plain integers also
//!   accepted); prime-field elements as integers.  Exactness survives
//!   serialization.
//! * All tensors are nested row-major arrays: `mult[i][j]` is the coordinate
//!   vector of `e_i e_j`, `comult[i][j][k]` the coefficient of `e_j ⊗ e_k`
//!   in the coproduct of `e_i`, `antipode[r][c]` an ordinary matrix entry,
//!   `action[h][r][c]` the matrix of `e_h · (−)` on `A`.
//! * Parsing is eager: every verification suite runs before a parsed
//!   instance is returned, and the first failed check is reported by name
//!   with a witness.
//!
//! Failures are classified so that callers (the CLI, the C ABI) can map
//! them to distinct exit/error codes: malformed data, violated axioms, and
//! structurally valid but unsupported inputs.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Algebra, Coalgebra, Subalgebra};
use crate::canonical::Bimodule;
use crate::cleft::{CleftContext, CleftModule};
use crate::crossed::{
    build_crossed_product, invert_cocycle, minimal_stable_subalgebra, trivial_cocycle, CocyclePair,
    CrossedProduct, WeakMeasure,
};
use crate::field::{Fp, Rat, Scalar};
use crate::linalg::Matrix;
use crate::weak_hopf::WeakHopf;

/// The scalar field of an instance: `"Q"` or `{"Fp": p}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDesc {
    Name(String),
    Prime {
        #[serde(rename = "Fp")]
        p: u64,
    },
}

/// How an instance failed to load.  The three variants are surfaced as
/// distinct process exit codes by the CLI and as distinct error codes by
/// the C ABI.
#[derive(Debug, Clone)]
pub enum InstanceError {
    /// Malformed file: bad JSON, ragged tensors, unknown field, bad scalar.
    Parse(String),
    /// Well-formed data violating a verified axiom; carries the name of the
    /// first failed check and its witness.
    Axiom { check: String, witness: String },
    /// Valid structure the engine cannot process (e.g. a cocycle without a
    /// convolution inverse, or one not valued in `K` when a reduced complex
    /// is requested).
    Unsupported(String),
}

impl std::fmt::Display for InstanceError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InstanceError::Parse(m) => write!(f, "parse error: {m}"),
            InstanceError::Axiom { check, witness } => write!(f, "axiom failure: {check} — {witness}"),
            InstanceError::Unsupported(m) => write!(f, "unsupported: {m}"),
        }
    }
}

impl std::error::Error for InstanceError {}

/// Scalars that can round-trip through the JSON instance format.
pub trait JsonScalar: Scalar {
    /// Checks that this scalar type is the one named by the descriptor.
    fn accept(desc: &FieldDesc) -> Result<(), String>;
    fn decode(v: &Value, desc: &FieldDesc) -> Result<Self, String>;
    fn encode(&self) -> Value;
}

impl JsonScalar for Rat {
    fn accept(desc: &FieldDesc) -> Result<(), String> {
        match desc {
            FieldDesc::Name(n) if n == "Q" => Ok(()),
            other => Err(format!("expected field \"Q\", found {other:?}")),
        }
    }

    fn decode(v: &Value, _desc: &FieldDesc) -> Result<Self, String> {
        match v {
            Value::String(s) => Rat::parse(s),
            Value::Number(n) => n
                .as_i64()
                .map(Rat::from_i64)
                .ok_or_else(|| format!("non-integer numeric literal {n} for a rational")),
            other => Err(format!("expected \"p/q\" string or integer, found {other}")),
        }
    }

    fn encode(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl JsonScalar for Fp {
    fn accept(desc: &FieldDesc) -> Result<(), String> {
        match desc {
            FieldDesc::Prime { p } if *p >= 2 => Ok(()),
            FieldDesc::Prime { p } => Err(format!("modulus {p} is too small")),
            other => Err(format!("expected {{\"Fp\": p}}, found {other:?}")),
        }
    }

    fn decode(v: &Value, desc: &FieldDesc) -> Result<Self, String> {
        let p = match desc {
            FieldDesc::Prime { p } => *p,
            _ => unreachable!("accept() runs first"),
        };
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|x| Fp::new(x as i128, p))
                .ok_or_else(|| format!("non-integer literal {n} for a prime-field element")),
            other => Err(format!("expected an integer, found {other}")),
        }
    }

    fn encode(&self) -> Value {
        Value::Number((self.value as i64).into())
    }
}

/// Weak Hopf algebra block: dimension plus all structure tensors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HopfBlock {
    pub dim: usize,
    pub unit: Vec<Value>,
    pub mult: Vec<Vec<Vec<Value>>>,
    pub comult: Vec<Vec<Vec<Value>>>,
    pub counit: Vec<Value>,
    pub antipode: Vec<Vec<Value>>,
}

/// Base algebra block.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraBlock {
    pub dim: usize,
    pub unit: Vec<Value>,
    pub mult: Vec<Vec<Vec<Value>>>,
}

/// The cocycle: the literal `"trivial"` (the convolution unit `u₂`, valid
/// when the measuring is a genuine module action) or an explicit bilinear
/// map `f[i][j] ∈ A`; the convolution inverse is solved for at parse time.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CocycleDesc {
    Named(String),
    Explicit { f: Vec<Vec<Vec<Value>>> },
}

impl Default for CocycleDesc {
    fn default() -> Self {
        CocycleDesc::Named("trivial".into())
    }
}

/// The stable subalgebra: `"minimal"` (the orbit of `1_A`) or an explicit
/// basis, which is verified to be closed, stable, and equal to the orbit.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KDesc {
    Named(String),
    Basis(Vec<Vec<Value>>),
}

impl Default for KDesc {
    fn default() -> Self {
        KDesc::Named("minimal".into())
    }
}

/// Coefficient module: `"regular"` (`M = E`) or explicit left/right action
/// matrices indexed by the basis of `E`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModuleDesc {
    Named(String),
    Explicit { dim: usize, left: Vec<Vec<Vec<Value>>>, right: Vec<Vec<Vec<Value>>> },
}

impl Default for ModuleDesc {
    fn default() -> Self {
        ModuleDesc::Named("regular".into())
    }
}

/// A complete serialized instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub field: FieldDesc,
    pub hopf: HopfBlock,
    pub base: AlgebraBlock,
    /// `action[h]` = matrix of `e_h · (−)` on `A`, row-major.
    pub action: Vec<Vec<Vec<Value>>>,
    #[serde(default)]
    pub cocycle: CocycleDesc,
    #[serde(default, rename = "K")]
    pub k: KDesc,
    #[serde(default)]
    pub module: ModuleDesc,
}

/// A fully validated instance: every verification suite has already run.
pub struct ParsedInstance<F: Scalar> {
    pub measure: WeakMeasure<F>,
    pub cocycle: CocyclePair<F>,
    pub ctx: CleftContext<F>,
    pub module: CleftModule<F>,
    pub module_is_regular: bool,
}

fn decode_vec<F: JsonScalar>(v: &[Value], len: usize, desc: &FieldDesc, what: &str) -> Result<Vec<F>, InstanceError> {
    if v.len() != len {
        return Err(InstanceError::Parse(format!("{what}: expected length {len}, found {}", v.len())));
    }
    v.iter()
        .map(|x| F::decode(x, desc).map_err(|e| InstanceError::Parse(format!("{what}: {e}"))))
        .collect()
}

fn decode_matrix<F: JsonScalar>(
    rows: &[Vec<Value>],
    nrows: usize,
    ncols: usize,
    desc: &FieldDesc,
    what: &str,
) -> Result<Matrix<F>, InstanceError> {
    if rows.len() != nrows {
        return Err(InstanceError::Parse(format!("{what}: expected {nrows} rows, found {}", rows.len())));
    }
    let mut m = Matrix::zero(nrows, ncols);
    for (r, row) in rows.iter().enumerate() {
        let dense = decode_vec::<F>(row, ncols, desc, &format!("{what} row {r}"))?;
        for (c, x) in dense.into_iter().enumerate() {
            m.set(r, c, x);
        }
    }
    Ok(m)
}

fn decode_mult<F: JsonScalar>(
    t: &[Vec<Vec<Value>>],
    dim: usize,
    desc: &FieldDesc,
    what: &str,
) -> Result<Vec<Vec<Vec<F>>>, InstanceError> {
    if t.len() != dim {
        return Err(InstanceError::Parse(format!("{what}: expected {dim} slices, found {}", t.len())));
    }
    t.iter()
        .enumerate()
        .map(|(i, slice)| {
            if slice.len() != dim {
                return Err(InstanceError::Parse(format!(
                    "{what}[{i}]: expected {dim} rows, found {}",
                    slice.len()
                )));
            }
            slice
                .iter()
                .enumerate()
                .map(|(j, row)| decode_vec::<F>(row, dim, desc, &format!("{what}[{i}][{j}]")))
                .collect()
        })
        .collect()
}

fn first_failure(checks: &[crate::report::Check]) -> Result<(), InstanceError> {
    match checks.iter().find(|c| !c.ok) {
        None => Ok(()),
        Some(c) => Err(InstanceError::Axiom {
            check: c.name.clone(),
            witness: c.witness.clone().unwrap_or_default(),
        }),
    }
}

fn encode_vec<F: JsonScalar>(v: &[F]) -> Vec<Value> {
    v.iter().map(|x| x.encode()).collect()
}

fn encode_matrix<F: JsonScalar>(m: &Matrix<F>) -> Vec<Vec<Value>> {
    (0..m.rows).map(|r| (0..m.cols).map(|c| m.at(r, c).encode()).collect()).collect()
}

fn encode_mult<F: JsonScalar>(t: &[Vec<Vec<F>>]) -> Vec<Vec<Vec<Value>>> {
    t.iter().map(|slice| slice.iter().map(|row| encode_vec(row)).collect()).collect()
}

/// Serializes a measure (plus optional explicit cocycle) to the file format.
pub fn instance_of_measure<F: JsonScalar>(
    field: FieldDesc,
    m: &WeakMeasure<F>,
    explicit_f: Option<&crate::crossed::PairMap<F>>,
) -> InstanceFile {
    let h = &m.hopf;
    let hd = h.dim();
    let mut comult = vec![vec![vec![Value::from(0); hd]; hd]; hd];
    for (i, terms) in h.coalg.comult.iter().enumerate() {
        for (j, k, c) in terms {
            comult[i][*j][*k] = c.encode();
        }
    }
    InstanceFile {
        field,
        hopf: HopfBlock {
            dim: hd,
            unit: encode_vec(&h.alg.unit),
            mult: encode_mult(&h.alg.mult),
            comult,
            counit: encode_vec(&h.coalg.counit),
            antipode: encode_matrix(&h.antipode),
        },
        base: AlgebraBlock {
            dim: m.alg.dim,
            unit: encode_vec(&m.alg.unit),
            mult: encode_mult(&m.alg.mult),
        },
        action: m.action.iter().map(encode_matrix).collect(),
        cocycle: match explicit_f {
            None => CocycleDesc::default(),
            Some(f) => CocycleDesc::Explicit { f: encode_mult(f) },
        },
        k: KDesc::default(),
        module: ModuleDesc::default(),
    }
}

/// Parses and validates an instance.  Every verification suite runs before
/// this returns; the error variant tells the caller whether the file was
/// malformed, violated an axiom (by check name), or is unsupported.
pub fn validate<F: JsonScalar>(file: &InstanceFile) -> Result<ParsedInstance<F>, InstanceError> {
    F::accept(&file.field).map_err(InstanceError::Parse)?;
    let desc = &file.field;

    // --- H block ---
    let hd = file.hopf.dim;
    if hd == 0 {
        return Err(InstanceError::Parse("hopf.dim must be positive".into()));
    }
    let h_alg = Algebra {
        dim: hd,
        mult: decode_mult::<F>(&file.hopf.mult, hd, desc, "hopf.mult")?,
        unit: decode_vec::<F>(&file.hopf.unit, hd, desc, "hopf.unit")?,
    };
    let comult_dense = decode_mult::<F>(&file.hopf.comult, hd, desc, "hopf.comult")?;
    let comult = comult_dense
        .iter()
        .map(|slice| {
            slice
                .iter()
                .enumerate()
                .flat_map(|(j, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(move |(k, c)| (j, k, c.clone()))
                        .collect::<Vec<_>>()
                })
                .collect()
        })
        .collect();
    let coalg = Coalgebra { dim: hd, comult, counit: decode_vec::<F>(&file.hopf.counit, hd, desc, "hopf.counit")? };
    let antipode = decode_matrix::<F>(&file.hopf.antipode, hd, hd, desc, "hopf.antipode")?;
    let hopf = WeakHopf::new(h_alg, coalg, antipode);
    first_failure(&hopf.verify("H"))?;
    first_failure(&hopf.verify_structure_identities("H"))?;

    // --- A block and the measuring ---
    let ad = file.base.dim;
    if ad == 0 {
        return Err(InstanceError::Parse("base.dim must be positive".into()));
    }
    let base = Algebra {
        dim: ad,
        mult: decode_mult::<F>(&file.base.mult, ad, desc, "base.mult")?,
        unit: decode_vec::<F>(&file.base.unit, ad, desc, "base.unit")?,
    };
    if file.action.len() != hd {
        return Err(InstanceError::Parse(format!(
            "action: expected {hd} matrices, found {}",
            file.action.len()
        )));
    }
    let action: Vec<Matrix<F>> = file
        .action
        .iter()
        .enumerate()
        .map(|(i, m)| decode_matrix::<F>(m, ad, ad, desc, &format!("action[{i}]")))
        .collect::<Result<_, _>>()?;
    let measure = WeakMeasure::new(hopf, base, action);
    first_failure(&measure.verify_weak_module_algebra("action"))?;

    // --- cocycle ---
    let cocycle = match &file.cocycle {
        CocycleDesc::Named(n) if n == "trivial" => {
            trivial_cocycle(&measure).map_err(InstanceError::Unsupported)?
        }
        CocycleDesc::Named(n) => {
            return Err(InstanceError::Parse(format!("unknown cocycle selector {n:?}")));
        }
        CocycleDesc::Explicit { f } => {
            if f.len() != hd {
                return Err(InstanceError::Parse(format!("cocycle.f: expected {hd} slices, found {}", f.len())));
            }
            let pair: crate::crossed::PairMap<F> = f
                .iter()
                .enumerate()
                .map(|(i, slice)| {
                    if slice.len() != hd {
                        return Err(InstanceError::Parse(format!(
                            "cocycle.f[{i}]: expected {hd} rows, found {}",
                            slice.len()
                        )));
                    }
                    slice
                        .iter()
                        .enumerate()
                        .map(|(j, row)| decode_vec::<F>(row, ad, desc, &format!("cocycle.f[{i}][{j}]")))
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            let (pair, _) = invert_cocycle(&measure, &pair).map_err(|e| {
                InstanceError::Unsupported(format!("cocycle has no convolution inverse: {}", e.reason))
            })?;
            pair
        }
    };
    first_failure(&cocycle.verify(&measure, "cocycle"))?;

    // --- crossed product ---
    let cp: CrossedProduct<F> = build_crossed_product(&measure, &cocycle)
        .map_err(|e| match e.split_once(" — ") {
            Some((check, witness)) => InstanceError::Axiom { check: check.into(), witness: witness.into() },
            None => InstanceError::Axiom { check: "crossed product construction".into(), witness: e },
        })?;

    // --- K ---
    let (minimal, k_checks) = minimal_stable_subalgebra(&measure, "K");
    first_failure(&k_checks)?;
    if let KDesc::Basis(rows) = &file.k {
        let span: Vec<Vec<F>> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| decode_vec::<F>(r, ad, desc, &format!("K[{i}]")))
            .collect::<Result<_, _>>()?;
        let given = Subalgebra::from_span(&span);
        first_failure(&given.verify_closed(&measure.alg, "K"))?;
        if given.basis != minimal.basis {
            return Err(InstanceError::Axiom {
                check: "K: stable subalgebra equals the unit orbit".into(),
                witness: "the given span differs from the orbit of the unit under the action".into(),
            });
        }
    } else if let KDesc::Named(n) = &file.k {
        if n != "minimal" {
            return Err(InstanceError::Parse(format!("unknown K selector {n:?}")));
        }
    }

    let ctx = CleftContext::new(cp);

    // --- module ---
    let (module, module_is_regular) = match &file.module {
        ModuleDesc::Named(n) if n == "regular" => (CleftModule::regular(&ctx), true),
        ModuleDesc::Named(n) => {
            return Err(InstanceError::Parse(format!("unknown module selector {n:?}")));
        }
        ModuleDesc::Explicit { dim, left, right } => {
            let de = ctx.cp.dim();
            let decode_side = |t: &[Vec<Vec<Value>>], what: &str| -> Result<Vec<Matrix<F>>, InstanceError> {
                if t.len() != de {
                    return Err(InstanceError::Parse(format!(
                        "{what}: expected {de} matrices, found {}",
                        t.len()
                    )));
                }
                t.iter()
                    .enumerate()
                    .map(|(i, m)| decode_matrix::<F>(m, *dim, *dim, desc, &format!("{what}[{i}]")))
                    .collect()
            };
            let bm = Bimodule {
                dim: *dim,
                left: decode_side(left, "module.left")?,
                right: decode_side(right, "module.right")?,
            };
            first_failure(&verify_bimodule(&ctx.cp.alg, &bm))?;
            (CleftModule::new(&ctx, bm), false)
        }
    };

    Ok(ParsedInstance { measure, cocycle, ctx, module, module_is_regular })
}

/// Checks associativity and unitality of explicit bimodule data.
fn verify_bimodule<F: Scalar>(alg: &Algebra<F>, bm: &Bimodule<F>) -> Vec<crate::report::Check> {
    use crate::report::Check;
    let n = alg.dim;
    let mut result: Result<(), String> = Ok(());
    'outer: for i in 0..n {
        for j in 0..n {
            let lij = bm.lmul_matrix(&alg.mult[i][j]);
            if bm.left[i].mul(&bm.left[j]) != lij {
                result = Err(format!("left action not multiplicative at ({i},{j})"));
                break 'outer;
            }
            let rij = bm.rmul_matrix(&alg.mult[i][j]);
            if bm.right[j].mul(&bm.right[i]) != rij {
                result = Err(format!("right action not multiplicative at ({i},{j})"));
                break 'outer;
            }
            if bm.left[i].mul(&bm.right[j]) != bm.right[j].mul(&bm.left[i]) {
                result = Err(format!("left and right actions do not commute at ({i},{j})"));
                break 'outer;
            }
        }
    }
    if result.is_ok() {
        let id = Matrix::identity(bm.dim);
        if bm.lmul_matrix(&alg.unit) != id || bm.rmul_matrix(&alg.unit) != id {
            result = Err("the unit does not act as the identity".into());
        }
    }
    vec![Check::of("module: bimodule axioms", result)]
}

/// Reads and parses an instance file as raw JSON (no field dispatch yet).
pub fn read_instance_file(path: &std::path::Path) -> Result<InstanceFile, InstanceError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InstanceError::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InstanceError::Parse(format!("invalid JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{cyclic_group_algebra, dual_numbers, pair_groupoid_algebra, pin_hopf_modulus};
    use crate::crossed::trivial_representation_measure;
    use crate::tensor::basis_vec;

    fn smash_measure() -> WeakMeasure<Rat> {
        let h = cyclic_group_algebra::<Rat>(2);
        let a = dual_numbers::<Rat>();
        let mut flip = Matrix::identity(2);
        flip.set(1, 1, Rat::one().neg());
        WeakMeasure::new(h, a, vec![Matrix::identity(2), flip])
    }

    #[test]
    fn builder_instances_round_trip_and_validate() {
        // [TRIVIAL] serialize → parse → identical structures, suites pass.
        let fixtures: Vec<(&str, WeakMeasure<Rat>)> = vec![
            ("smash", smash_measure()),
            ("trivial C2", trivial_representation_measure(&cyclic_group_algebra::<Rat>(2))),
            ("pair(2)", trivial_representation_measure(&pair_groupoid_algebra::<Rat>(2))),
        ];
        for (label, m) in fixtures {
            let file = instance_of_measure(FieldDesc::Name("Q".into()), &m, None);
            let text = serde_json::to_string_pretty(&file).unwrap();
            let back: InstanceFile = serde_json::from_str(&text).unwrap();
            let parsed = validate::<Rat>(&back).unwrap_or_else(|e| panic!("{label}: {e}"));
            assert_eq!(parsed.measure.hopf.alg.mult, m.hopf.alg.mult, "{label}");
            assert_eq!(parsed.measure.alg.mult, m.alg.mult, "{label}");
            assert_eq!(parsed.measure.action, m.action, "{label}");
            assert!(parsed.module_is_regular);
        }
    }

    #[test]
    fn prime_field_instances_round_trip() {
        let m = trivial_representation_measure(&pin_hopf_modulus(&cyclic_group_algebra::<Fp>(2), 2));
        let file = instance_of_measure(FieldDesc::Prime { p: 2 }, &m, None);
        let text = serde_json::to_string(&file).unwrap();
        let back: InstanceFile = serde_json::from_str(&text).unwrap();
        let parsed = validate::<Fp>(&back).unwrap();
        assert_eq!(parsed.ctx.cp.dim(), 2);
        // Field mismatch is a parse error, not a panic.
        assert!(matches!(validate::<Rat>(&back), Err(InstanceError::Parse(_))));
    }

    #[test]
    fn corrupted_instances_fail_with_named_checks() {
        // [TRIVIAL] negative controls: each corruption trips a named check.
        let m = smash_measure();
        let good = instance_of_measure(FieldDesc::Name("Q".into()), &m, None);

        // Broken counit: ε(g) changed so that counit multiplicativity fails.
        let mut broken = good.clone();
        broken.hopf.counit[1] = Value::String("2".into());
        match validate::<Rat>(&broken) {
            Err(InstanceError::Axiom { check, .. }) => {
                assert!(check.contains("counit"), "unexpected check: {check}")
            }
            other => panic!("expected a counit axiom failure, got {:?}", other.err()),
        }

        // Non-invertible cocycle: f ≡ 0 has no convolution inverse.
        let zero_f = vec![vec![vec![Value::String("0".into()); 2]; 2]; 2];
        let mut nonunit = good.clone();
        nonunit.cocycle = CocycleDesc::Explicit { f: zero_f };
        match validate::<Rat>(&nonunit) {
            Err(InstanceError::Unsupported(msg)) => {
                assert!(msg.contains("convolution inverse"), "unexpected message: {msg}")
            }
            other => panic!("expected an unsupported-cocycle error, got {:?}", other.err()),
        }

        // Unstable K: a line that is not the unit orbit.
        let mut badk = good.clone();
        badk.k = KDesc::Basis(vec![encode_vec(&basis_vec::<Rat>(2, 1))]);
        match validate::<Rat>(&badk) {
            Err(InstanceError::Axiom { check, .. }) => {
                assert!(check.contains("K"), "unexpected check: {check}")
            }
            other => panic!("expected a K axiom failure, got {:?}", other.err()),
        }

        // Ragged tensor: parse error.
        let mut ragged = good;
        ragged.hopf.mult[0].pop();
        assert!(matches!(validate::<Rat>(&ragged), Err(InstanceError::Parse(_))));
    }
}
