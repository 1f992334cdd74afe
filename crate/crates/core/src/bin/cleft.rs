//! Command-line front end.
//!
//! Commands: `build` emits instance files from the bundled example
//! builders; `verify` runs every verification suite on an instance; the
//! remaining commands front one engine operation each (`hh`/`hcoh` the
//! reduced Hochschild (co)homology, `whh`/`whcoh` weak Hopf algebra
//! (co)homology of a coefficient module, `ss` the filtration spectral
//! sequence, `cyclic` the mixed complex and its cyclic/negative/periodic
//! towers, `cup`/`cap` the products).
//!
//! Exit codes: 0 all checks pass; 1 a reported check failed; 2 malformed
//! input; 3 axiom violation (named check); 4 structurally valid but
//! unsupported input.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use cleft_core::algebra::Side;
use cleft_core::builders::{
    cyclic_group_algebra, field_product_algebra, pair_groupoid_algebra, pin_hopf_modulus,
    sign_smash_measure,
};
use cleft_core::cleft::{
    cleft_chains, conjugation_matrix, tail_complex, tail_homology_module,
};
use cleft_core::cleft_cochain::{cleft_cochains, tail_cohomology_module};
use cleft_core::complex::{cyclic_homology_dims, CyclicKind};
use cleft_core::crossed::{trivial_representation_measure, WeakMeasure};
use cleft_core::cyclic::cleft_mixed;
use cleft_core::field::{Fp, Rat, Scalar};
use cleft_core::hopf_homology::{
    cohomology_of_module, counit_module, homology_of_module, trivial_representation,
};
use cleft_core::instance::{
    instance_of_measure, read_instance_file, validate, FieldDesc, InstanceError, InstanceFile,
    JsonScalar, ParsedInstance,
};
use cleft_core::linalg::Matrix;
use cleft_core::pairing::{cap_total, cup_total};
use cleft_core::report::Check;
use cleft_core::tensor::basis_vec;

#[derive(Parser)]
#[command(name = "cleft", about = "Exact homological algebra for weak Hopf crossed products")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit an instance file from a bundled example builder.
    Build {
        /// One of: group_algebra, pair_groupoid, field_product,
        /// trivial_representation, smash_product.
        builder: String,
        /// Size parameter (group order / object count).
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Scalar field: "Q" or "F<p>".
        #[arg(long, default_value = "Q")]
        field: String,
        /// Hopf algebra selector for trivial_representation.
        #[arg(long, default_value = "group_algebra")]
        hopf: String,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every verification suite on an instance.
    Verify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Hochschild homology of the crossed product relative to K.
    Hh {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        /// Additionally check conjugation by this H basis element.
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Hochschild cohomology of the crossed product relative to K.
    Hcoh {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long)]
        json: bool,
    },
    /// Weak Hopf algebra homology of a coefficient module.
    Whh {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        /// Coefficients: "trivial" or "counit".
        #[arg(long, default_value = "trivial")]
        module: String,
        #[arg(long)]
        json: bool,
    },
    /// Weak Hopf algebra cohomology of a coefficient module.
    Whcoh {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long, default_value = "trivial")]
        module: String,
        #[arg(long)]
        json: bool,
    },
    /// Spectral sequence of the column filtration, both variances.
    Ss {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long)]
        json: bool,
    },
    /// Mixed complex and cyclic/negative/periodic homology.
    Cyclic {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long, default_value_t = 1)]
        trunc: usize,
        #[arg(long)]
        json: bool,
    },
    /// Cup products of cocycles up to a total degree.
    Cup {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        nmax: usize,
        #[arg(long)]
        json: bool,
    },
    /// Cap products against cycles up to a total degree.
    Cap {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        nmax: usize,
        #[arg(long)]
        json: bool,
    },
}

const EXIT_CHECKS: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_AXIOM: u8 = 3;
const EXIT_UNSUPPORTED: u8 = 4;

/// Everything a command reports: named checks plus dimension tables.  The
/// JSON rendering and the human table are generated from this one value.
#[derive(Serialize)]
struct Output {
    instance: String,
    command: String,
    checks: Vec<Check>,
    dims: BTreeMap<String, Vec<usize>>,
    notes: BTreeMap<String, String>,
}

impl Output {
    fn new(instance: &str, command: &str) -> Self {
        Output {
            instance: instance.into(),
            command: command.into(),
            checks: Vec::new(),
            dims: BTreeMap::new(),
            notes: BTreeMap::new(),
        }
    }

    fn render(&self, json: bool) -> ExitCode {
        if json {
            println!("{}", serde_json::to_string_pretty(self).expect("report serialization"));
        } else {
            println!("{} {}", self.command, self.instance);
            for c in &self.checks {
                match (&c.ok, &c.witness) {
                    (true, _) => println!("  ok   {}", c.name),
                    (false, Some(w)) => println!("  FAIL {} — {}", c.name, w),
                    (false, None) => println!("  FAIL {}", c.name),
                }
            }
            for (name, dims) in &self.dims {
                let cells: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
                println!("  {name} = [{}]", cells.join(", "));
            }
            for (name, note) in &self.notes {
                println!("  {name}: {note}");
            }
        }
        if self.checks.iter().all(|c| c.ok) {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(EXIT_CHECKS)
        }
    }
}

fn fail(err: InstanceError) -> ExitCode {
    eprintln!("{err}");
    match err {
        InstanceError::Parse(_) => ExitCode::from(EXIT_PARSE),
        InstanceError::Axiom { .. } => ExitCode::from(EXIT_AXIOM),
        InstanceError::Unsupported(_) => ExitCode::from(EXIT_UNSUPPORTED),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(err) => fail(err),
    }
}

fn parse_field(s: &str) -> Result<FieldDesc, InstanceError> {
    if s == "Q" {
        return Ok(FieldDesc::Name("Q".into()));
    }
    if let Some(p) = s.strip_prefix('F').and_then(|p| p.parse::<u64>().ok()) {
        if p >= 2 {
            return Ok(FieldDesc::Prime { p });
        }
    }
    Err(InstanceError::Parse(format!("unknown field {s:?}; use \"Q\" or \"F<p>\"")))
}

fn run(cmd: Cmd) -> Result<ExitCode, InstanceError> {
    match cmd {
        Cmd::Build { builder, n, field, hopf, out } => build(&builder, n, &field, &hopf, out.as_deref()),
        Cmd::Verify { file, json } => dispatch(&file, json, &|p, o| verify_all(p, o)),
        Cmd::Hh { file, nmax, h, json } => dispatch(&file, json, &move |p, o| hh(p, o, nmax, h)),
        Cmd::Hcoh { file, nmax, json } => dispatch(&file, json, &move |p, o| hcoh(p, o, nmax)),
        Cmd::Whh { file, nmax, module, json } => {
            dispatch(&file, json, &move |p, o| weak_hopf_dims(p, o, nmax, &module, false))
        }
        Cmd::Whcoh { file, nmax, module, json } => {
            dispatch(&file, json, &move |p, o| weak_hopf_dims(p, o, nmax, &module, true))
        }
        Cmd::Ss { file, nmax, json } => dispatch(&file, json, &move |p, o| spectral(p, o, nmax)),
        Cmd::Cyclic { file, nmax, trunc, json } => {
            dispatch(&file, json, &move |p, o| cyclic(p, o, nmax, trunc))
        }
        Cmd::Cup { file, nmax, json } => dispatch(&file, json, &move |p, o| cup(p, o, nmax)),
        Cmd::Cap { file, nmax, json } => dispatch(&file, json, &move |p, o| cap(p, o, nmax)),
    }
}

// ───────────────────────────── build ─────────────────────────────

fn build(
    builder: &str,
    n: usize,
    field: &str,
    hopf_sel: &str,
    out: Option<&std::path::Path>,
) -> Result<ExitCode, InstanceError> {
    let desc = parse_field(field)?;
    let file = match &desc {
        FieldDesc::Name(_) => build_instance::<Rat>(builder, n, hopf_sel, desc.clone(), |h| h)?,
        FieldDesc::Prime { p } => {
            let p = *p;
            build_instance::<Fp>(builder, n, hopf_sel, desc.clone(), move |h| pin_hopf_modulus(&h, p))?
        }
    };
    let text = serde_json::to_string_pretty(&file).expect("instance serialization");
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| InstanceError::Parse(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn build_instance<F: JsonScalar>(
    builder: &str,
    n: usize,
    hopf_sel: &str,
    desc: FieldDesc,
    pin: impl Fn(cleft_core::weak_hopf::WeakHopf<F>) -> cleft_core::weak_hopf::WeakHopf<F>,
) -> Result<InstanceFile, InstanceError> {
    let hopf_by_name = |name: &str| -> Result<cleft_core::weak_hopf::WeakHopf<F>, InstanceError> {
        match name {
            "group_algebra" => Ok(pin(cyclic_group_algebra::<F>(n))),
            "pair_groupoid" => Ok(pin(pair_groupoid_algebra::<F>(n))),
            "field_product" => Ok(pin(field_product_algebra::<F>(n))),
            other => Err(InstanceError::Parse(format!("unknown Hopf selector {other:?}"))),
        }
    };
    let measure: WeakMeasure<F> = match builder {
        "group_algebra" | "pair_groupoid" | "field_product" => {
            trivial_representation_measure(&hopf_by_name(builder)?)
        }
        "trivial_representation" => trivial_representation_measure(&hopf_by_name(hopf_sel)?),
        "smash_product" => sign_smash_measure::<F>(),
        other => {
            return Err(InstanceError::Parse(format!(
                "unknown builder {other:?}; expected group_algebra, pair_groupoid, field_product, trivial_representation, or smash_product"
            )))
        }
    };
    let file = instance_of_measure(desc, &measure, None);
    // Builders must emit instances that pass their own validation.
    validate::<F>(&file)?;
    Ok(file)
}

// ─────────────────────────── dispatch ───────────────────────────

type Handler = dyn Fn(&ParsedInstanceEither, &mut Output) -> Result<(), InstanceError>;

/// A parsed instance over either supported field.
enum ParsedInstanceEither {
    Q(ParsedInstance<Rat>),
    P(ParsedInstance<Fp>),
}

fn dispatch(path: &std::path::Path, json: bool, f: &Handler) -> Result<ExitCode, InstanceError> {
    let file = read_instance_file(path)?;
    let parsed = match &file.field {
        FieldDesc::Name(_) => ParsedInstanceEither::Q(validate::<Rat>(&file)?),
        FieldDesc::Prime { .. } => ParsedInstanceEither::P(validate::<Fp>(&file)?),
    };
    let mut out = Output::new(&path.display().to_string(), command_name(f));
    f(&parsed, &mut out)?;
    Ok(out.render(json))
}

// The handler closures carry no name; the command string is filled in by
// each handler instead.
fn command_name(_f: &Handler) -> &'static str {
    ""
}

macro_rules! with_parsed {
    ($parsed:expr, $p:ident => $body:expr) => {
        match $parsed {
            ParsedInstanceEither::Q($p) => $body,
            ParsedInstanceEither::P($p) => $body,
        }
    };
}

// ─────────────────────────── commands ───────────────────────────

fn verify_all(parsed: &ParsedInstanceEither, out: &mut Output) -> Result<(), InstanceError> {
    out.command = "verify".into();
    with_parsed!(parsed, p => {
        let m = &p.measure;
        out.checks.extend(m.hopf.verify("H"));
        out.checks.extend(m.hopf.verify_structure_identities("H"));
        out.checks.extend(m.verify_weak_module_algebra("action"));
        out.checks.extend(p.cocycle.verify(m, "cocycle"));
        out.checks.extend(cleft_core::crossed::verify_crossed_hypotheses(m, &p.cocycle.f, "crossed product"));
        out.checks.extend(p.ctx.cp.verify_bundle("crossed product"));
        out.checks.extend(cleft_core::crossed::verify_cleft_identities(&p.ctx.cp, 2, "cleft section"));
        let (_, kc) = cleft_core::crossed::minimal_stable_subalgebra(m, "K");
        out.checks.extend(kc);
        out.notes.insert("E dimension".into(), p.ctx.cp.dim().to_string());
        out.notes.insert("K dimension".into(), p.ctx.k.basis.len().to_string());
        out.notes.insert(
            "cocycle valued in K".into(),
            if p.ctx.f_k_valued { "yes".into() } else { "no".into() },
        );
    });
    Ok(())
}

fn require_reduced<T>(r: Result<T, String>) -> Result<T, InstanceError> {
    r.map_err(InstanceError::Unsupported)
}

fn hh(
    parsed: &ParsedInstanceEither,
    out: &mut Output,
    nmax: usize,
    h_elt: Option<usize>,
) -> Result<(), InstanceError> {
    out.command = "hh".into();
    with_parsed!(parsed, p => {
        let chains = require_reduced(cleft_chains(&p.ctx, &p.module, nmax + 1))?;
        out.checks.push(chains.total.verify_complex("reduced complex"));
        out.dims.insert("H_n".into(), chains.total.homology_dims(nmax));
        if let Some(idx) = h_elt {
            let hd = p.ctx.hopf().dim();
            if idx >= hd {
                return Err(InstanceError::Parse(format!("--h {idx} out of range (H has dimension {hd})")));
            }
            let hv = basis_vec(hd, idx);
            let tail = tail_complex(&p.ctx, &p.module, nmax + 1);
            let conj: Vec<Matrix<_>> =
                (0..=nmax + 1).map(|r| conjugation_matrix(&p.ctx, &p.module, r, &hv)).collect();
            let mut ok: Result<(), String> = Ok(());
            for r in 1..=nmax + 1 {
                if conj[r - 1].mul(&tail.complex.d[r - 1]) != tail.complex.d[r - 1].mul(&conj[r]) {
                    ok = Err(format!("fails at tail degree {r}"));
                    break;
                }
            }
            out.checks.push(Check::of(format!("conjugation by basis element {idx} is a chain map"), ok));
        }
    });
    Ok(())
}

fn hcoh(parsed: &ParsedInstanceEither, out: &mut Output, nmax: usize) -> Result<(), InstanceError> {
    out.command = "hcoh".into();
    with_parsed!(parsed, p => {
        let cochains = require_reduced(cleft_cochains(&p.ctx, &p.module, nmax + 1))?;
        out.checks.push(cochains.total.verify_complex("reduced cochain complex"));
        out.dims.insert("H^n".into(), cochains.total.cohomology_dims(nmax));
    });
    Ok(())
}

fn weak_hopf_dims(
    parsed: &ParsedInstanceEither,
    out: &mut Output,
    nmax: usize,
    module: &str,
    cohomology: bool,
) -> Result<(), InstanceError> {
    out.command = if cohomology { "whcoh".into() } else { "whh".into() };
    with_parsed!(parsed, p => {
        let h = p.ctx.hopf();
        let side = if cohomology { Side::Right } else { Side::Left };
        let coeff = match module {
            "trivial" => trivial_representation(h),
            "counit" => counit_module(h, side),
            other => return Err(InstanceError::Parse(format!("unknown module selector {other:?}"))),
        };
        if cohomology {
            out.dims.insert("H^n(H, M)".into(), cohomology_of_module(h, &coeff, nmax));
        } else {
            out.dims.insert("H_n(H, M)".into(), homology_of_module(h, &coeff, nmax));
        }
    });
    Ok(())
}

fn spectral(parsed: &ParsedInstanceEither, out: &mut Output, nmax: usize) -> Result<(), InstanceError> {
    out.command = "ss".into();
    with_parsed!(parsed, p => {
        let chains = require_reduced(cleft_chains(&p.ctx, &p.module, nmax + 2))?;
        let filt = chains.double.column_filtration(&chains.layout, &chains.total.dims, nmax + 2);
        let pages = cleft_core::complex::chain_spectral_pages(&chains.total, &filt, nmax, 2);
        let e2 = &pages[1];
        let mut homological: Result<(), String> = Ok(());
        'h: for s in 0..=nmax {
            for r in 0..=(nmax - s) {
                let row: Vec<usize> =
                    (0..=(nmax - s)).map(|rr| e2.dim(s, rr)).collect();
                out.dims.entry(format!("E2[s={s}]")).or_insert(row);
                let th = tail_homology_module(&p.ctx, &p.module, r);
                if e2.dim(s, r) != homology_of_module(p.ctx.hopf(), &th.module, s)[s] {
                    homological = Err(format!("mismatch at tail degree {r}, Hopf degree {s}"));
                    break 'h;
                }
            }
        }
        out.checks.push(Check::of(
            "second page equals Hopf homology of the tail homology",
            homological,
        ));

        let cochains = require_reduced(cleft_cochains(&p.ctx, &p.module, nmax + 2))?;
        let filt = cochain_filtration(&cochains, nmax + 2);
        let pages = cleft_core::complex::cochain_spectral_pages(&cochains.total, &filt, nmax, 2);
        let e2 = &pages[1];
        let mut cohomological: Result<(), String> = Ok(());
        'c: for s in 0..=nmax {
            for r in 0..=(nmax - s) {
                let row: Vec<usize> =
                    (0..=(nmax - s)).map(|rr| e2.dim(s, rr)).collect();
                out.dims.entry(format!("E_2[s={s}]")).or_insert(row);
                let th = tail_cohomology_module(&p.ctx, &p.module, r);
                if e2.dim(s, r) != cohomology_of_module(p.ctx.hopf(), &th.module, s)[s] {
                    cohomological = Err(format!("mismatch at tail degree {r}, Hopf degree {s}"));
                    break 'c;
                }
            }
        }
        out.checks.push(Check::of(
            "second page equals Hopf cohomology of the tail cohomology",
            cohomological,
        ));
    });
    Ok(())
}

/// Decreasing filtration of the cochain total by the number of barred slots.
fn cochain_filtration<F: cleft_core::field::Scalar>(
    cochains: &cleft_core::cleft_cochain::CleftCochains<F>,
    pmax: usize,
) -> Vec<Vec<Matrix<F>>> {
    let mut filt = Vec::new();
    for n in 0..cochains.layout.len() {
        let dim = cochains.total.dims[n];
        let mut levels = Vec::new();
        for plevel in 0..=pmax {
            let mut cols = Vec::new();
            for &((r, s), off) in &cochains.layout[n] {
                if s >= plevel {
                    for j in 0..cochains.spaces[&(r, s)].hom.dim() {
                        let mut v = vec![F::zero(); dim];
                        v[off + j] = F::one();
                        cols.push(v);
                    }
                }
            }
            levels.push(Matrix::from_cols(dim, cols));
        }
        filt.push(levels);
    }
    filt
}

fn cyclic(
    parsed: &ParsedInstanceEither,
    out: &mut Output,
    nmax: usize,
    trunc: usize,
) -> Result<(), InstanceError> {
    out.command = "cyclic".into();
    with_parsed!(parsed, p => {
        if !p.module_is_regular {
            return Err(InstanceError::Unsupported(
                "the cyclic theory is defined for the regular module M = E only".into(),
            ));
        }
        let mixed = require_reduced(cleft_mixed(&p.ctx, nmax + 2))?;
        out.checks.extend(mixed.verify("mixed complex"));
        let (hc, hc_flag) = cyclic_homology_dims(&mixed, CyclicKind::Cyclic, nmax, 0);
        let (hn, hn_flag) = cyclic_homology_dims(&mixed, CyclicKind::Negative, nmax, trunc);
        let (hp, hp_flag) = cyclic_homology_dims(&mixed, CyclicKind::Periodic, nmax, trunc);
        out.dims.insert("HC_n".into(), hc);
        out.dims.insert("HN_n".into(), hn);
        out.dims.insert("HP_n".into(), hp);
        out.notes.insert("HC_n status".into(), hc_flag.into());
        out.notes.insert("HN_n status".into(), hn_flag.into());
        out.notes.insert("HP_n status".into(), hp_flag.into());
    });
    Ok(())
}

fn cup(parsed: &ParsedInstanceEither, out: &mut Output, nmax: usize) -> Result<(), InstanceError> {
    out.command = "cup".into();
    with_parsed!(parsed, p => {
        let cochains = require_reduced(cleft_cochains(&p.ctx, &p.module, nmax + 1))?;
        let total = &cochains.total;
        let cocycles = |n: usize| -> Vec<Vec<_>> {
            if n < total.d.len() {
                total.d[n].kernel_basis()
            } else {
                Vec::new()
            }
        };
        let mut checked = 0usize;
        let mut result: Result<(), String> = Ok(());
        'outer: for n1 in 0..=nmax {
            for n2 in 0..=(nmax - n1) {
                for z1 in cocycles(n1) {
                    for z2 in cocycles(n2) {
                        let prod = cup_total(&p.ctx, &p.module, &cochains, n1, &z1, n2, &z2);
                        let m = n1 + n2;
                        if m < total.d.len() && !total.d[m].apply(&prod).iter().all(|c| c.is_zero()) {
                            result = Err(format!("a product of cocycles in degrees ({n1},{n2}) is not a cocycle"));
                            break 'outer;
                        }
                        checked += 1;
                    }
                }
            }
        }
        out.checks.push(Check::of("cup products of cocycles are cocycles", result));
        out.notes.insert("products checked".into(), checked.to_string());
        out.dims.insert("H^n".into(), total.cohomology_dims(nmax));
    });
    Ok(())
}

fn cap(parsed: &ParsedInstanceEither, out: &mut Output, nmax: usize) -> Result<(), InstanceError> {
    out.command = "cap".into();
    with_parsed!(parsed, p => {
        let chains = require_reduced(cleft_chains(&p.ctx, &p.module, nmax + 1))?;
        let cochains = require_reduced(cleft_cochains(&p.ctx, &p.module, nmax + 1))?;
        let cycles = |n: usize| -> Vec<Vec<_>> {
            if n == 0 {
                (0..chains.total.dims[0]).map(|i| basis_vec(chains.total.dims[0], i)).collect()
            } else {
                chains.total.d[n - 1].kernel_basis()
            }
        };
        let cocycles = |n: usize| -> Vec<Vec<_>> {
            if n < cochains.total.d.len() {
                cochains.total.d[n].kernel_basis()
            } else {
                Vec::new()
            }
        };
        let mut checked = 0usize;
        let mut result: Result<(), String> = Ok(());
        'outer: for n in 0..=nmax {
            for np in 0..=n {
                for y in cycles(n) {
                    for beta in cocycles(np) {
                        let z = cap_total(&p.ctx, &p.module, &chains, &cochains, n, &y, np, &beta);
                        let m = n - np;
                        let boundary_ok = if m == 0 {
                            true
                        } else {
                            chains.total.d[m - 1].apply(&z).iter().all(|c| c.is_zero())
                        };
                        if !boundary_ok {
                            result = Err(format!("a cap of a cycle in degrees ({n},{np}) is not a cycle"));
                            break 'outer;
                        }
                        checked += 1;
                    }
                }
            }
        }
        out.checks.push(Check::of("cap products of cycles against cocycles are cycles", result));
        out.notes.insert("products checked".into(), checked.to_string());
        out.dims.insert("H_n".into(), chains.total.homology_dims(nmax));
    });
    Ok(())
}
