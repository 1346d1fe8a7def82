mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cupform_core::graded_algebra::{GradedAlgebra, Verdict};
use cupform_core::intersection_form::{
    self as forms, double_class, invariants, ks_sum, realize_recipe, IntegralSymmetricForm, Ks, Parity,
};
use cupform_core::io;
use cupform_core::multilinear::{dim_space, FormKind, MultilinearForm};
use cupform_core::obstruction::{
    build_block, factor_composite, lemma32_subspace, min_sufficient_m, obstruction_report,
    threshold_check, verify_special_witness, CountingCase, ObstructionVerdict, WitnessVerdict,
};
use cupform_core::rational::{self, to_fraction_string};

use report::{Outcome, Report};

#[derive(Parser)]
#[command(name = "cupform", version, about = "Exact cup-product form and intersection-form toolkit")]
struct Cli {
    /// Print the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the constructed object (form, matrix, witness, algebra, recipe) here.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of the space of q-ary forms on Q^m.
    Dims {
        #[arg(long)]
        kind: FormKind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
    },
    /// Evaluate a form on q vectors, each given as comma-separated rationals.
    EvalForm {
        form: PathBuf,
        #[arg(long = "vec", required = true, allow_hyphen_values = true)]
        vecs: Vec<String>,
    },
    /// Pull a form back along a matrix tau (columns are tau(e_i)).
    Pullback { form: PathBuf, matrix: PathBuf },
    /// Check a (U, phi) witness for the special-function property.
    CheckWitness { form: PathBuf, witness: PathBuf },
    /// Build the real Jordan block of a block file.
    BuildBlock { block: PathBuf },
    /// Run the subspace construction on a blocks file.
    Lemma32 {
        blocks: PathBuf,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Evaluate the parameter-count inequality, or find the stable threshold.
    Threshold {
        #[arg(long)]
        kind: FormKind,
        #[arg(long)]
        q: usize,
        #[arg(long, required_unless_present = "find_min")]
        m: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), default_value_t = 1)]
        case: u8,
        #[arg(long, conflicts_with = "m")]
        find_min: bool,
    },
    /// Write n = p * q with q odd and at least 3.
    Factor { n: u64 },
    /// Check witnesses against the necessary conditions for a flat embedding.
    Obstruct {
        form: PathBuf,
        #[arg(long = "beta-w")]
        beta_w: u64,
        #[arg(required = true)]
        witnesses: Vec<PathBuf>,
    },
    /// Build the graded algebra of a form and dump it.
    BuildAlgebra {
        form: PathBuf,
        #[arg(long)]
        p: usize,
    },
    /// Run every verifier on an algebra dump.
    VerifyAlgebra { algebra: PathBuf },
    /// Invariants and (for indefinite unimodular forms) the normal form.
    ClassifyForm { form: PathBuf },
    /// Orthogonal direct sum of two integral forms.
    FormSum { left: PathBuf, right: PathBuf },
    /// Negate an integral form.
    FormNegate { form: PathBuf },
    /// Sum of KS values in Z/2.
    KsSum {
        #[arg(required = true, value_parser = clap::value_parser!(u8).range(0..=1))]
        values: Vec<u8>,
    },
    /// Connected-sum recipe realising an indefinite unimodular form.
    Recipe {
        form: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        ks: Option<u8>,
    },
    /// Homeomorphism type of the double of a manifold with the given form.
    Double {
        #[arg(long, required_unless_present = "form")]
        parity: Option<Parity>,
        #[arg(long, required_unless_present = "form")]
        rank: Option<usize>,
        #[arg(conflicts_with_all = ["parity", "rank"])]
        form: Option<PathBuf>,
    },
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

fn load_form(path: &Path) -> anyhow::Result<MultilinearForm> {
    io::parse_form(&read(path)?).with_context(|| format!("parsing form {}", path.display()))
}

fn load_integral(path: &Path) -> anyhow::Result<IntegralSymmetricForm> {
    io::parse_integral_form(&read(path)?).with_context(|| format!("parsing matrix form {}", path.display()))
}

fn write_out(out: Option<&Path>, contents: &str) -> anyhow::Result<Value> {
    match out {
        Some(path) => {
            fs::write(path, format!("{contents}\n")).with_context(|| format!("writing {}", path.display()))?;
            Ok(Value::String(path_str(path)))
        }
        None => Ok(Value::Null),
    }
}

fn fraction_rows(rows: &[Vec<cupform_core::Rational>]) -> Value {
    rows.iter()
        .map(|r| r.iter().map(to_fraction_string).collect::<Vec<_>>())
        .collect()
}

fn witness_json(v: &WitnessVerdict) -> Value {
    json!({
        "valid": v.valid(),
        "failed_clause": v.failed.map(|c| c.label()),
        "reason": v.reason,
    })
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Pass => json!({ "passed": true }),
        Verdict::Fail(c) => json!({
            "passed": false,
            "degrees": c.degrees,
            "basis": c.basis,
            "detail": c.detail,
        }),
    }
}

fn invariants_json(inv: &forms::FormInvariants) -> Value {
    json!({
        "rank": inv.rank,
        "b_plus": inv.b_plus,
        "b_minus": inv.b_minus,
        "signature": inv.signature,
        "parity": inv.parity.to_string(),
        "determinant": inv.determinant.to_string(),
        "unimodular": inv.unimodular,
        "indefinite": inv.indefinite,
    })
}

fn decomposition_json(dec: &forms::CanonicalDecomposition) -> Value {
    match *dec {
        forms::CanonicalDecomposition::Odd { plus, minus } => json!({
            "parity": "odd", "plus": plus, "minus": minus, "label": dec.to_string(),
        }),
        forms::CanonicalDecomposition::Even { e8, h } => json!({
            "parity": "even", "e8": e8, "h": h, "label": dec.to_string(),
        }),
    }
}

const ODD_SMOOTHING_NOTE: &str =
    "two homeomorphism types, distinguished by KS; at most one of these two homeomorphism types carries a smooth structure";
const EVEN_UNIQUE_NOTE: &str = "unique manifold up to homeomorphism";

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let out = cli.out.as_deref();
    let report = match &cli.command {
        Command::Dims { kind, m, q } => {
            let dim = dim_space(*kind, *m, *q);
            Report::new(
                "dims",
                json!({ "kind": kind.as_str(), "m": m, "q": q }),
                json!({ "dim": dim }),
            )
        }
        Command::EvalForm { form, vecs } => {
            let f = load_form(form)?;
            let args = vecs
                .iter()
                .map(|v| v.split(',').map(|x| rational::parse(x.trim())).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let value = f.eval(&args)?;
            let brute = f.eval_bruteforce(&args)?;
            if value != brute {
                bail!("internal error: evaluators disagree ({value} vs {brute})");
            }
            Report::new(
                "eval-form",
                json!({ "form": path_str(form), "vectors": fraction_rows(&args) }),
                json!({ "value": to_fraction_string(&value), "bruteforce_agrees": true }),
            )
        }
        Command::Pullback { form, matrix } => {
            let f = load_form(form)?;
            let tau = io::parse_matrix(&read(matrix)?)?;
            let g = f.pullback(&tau)?;
            let written = write_out(out, &io::write_form(&g))?;
            let components: Value = g
                .components()
                .map(|(t, v)| json!({ "idx": t.0, "value": to_fraction_string(v) }))
                .collect();
            Report::new(
                "pullback",
                json!({ "form": path_str(form), "matrix": path_str(matrix) }),
                json!({
                    "kind": g.kind().as_str(), "m": g.m(), "q": g.q(),
                    "components": components, "written": written,
                }),
            )
        }
        Command::CheckWitness { form, witness } => {
            let f = load_form(form)?;
            let sm = io::parse_witness(&read(witness)?)?;
            let v = verify_special_witness(&f, &sm)?;
            let ok = v.valid();
            Report::new(
                "check-witness",
                json!({ "form": path_str(form), "witness": path_str(witness) }),
                witness_json(&v),
            )
            .verdict(if ok { "valid" } else { "invalid" }, Outcome::from_pass(ok))
        }
        Command::BuildBlock { block } => {
            let spec = io::parse_block(&read(block)?)?;
            let j = build_block(&spec);
            let written = write_out(out, &io::write_matrix(&j))?;
            Report::new(
                "build-block",
                json!({ "block": path_str(block) }),
                json!({
                    "type": spec.block_type(),
                    "size": spec.size(),
                    "matrix": fraction_rows(&j.to_rows()),
                    "written": written,
                }),
            )
        }
        Command::Lemma32 { blocks, m } => {
            let input = io::parse_blocks(&read(blocks)?)?;
            let m = m.unwrap_or(input.m);
            let c = lemma32_subspace(&input.blocks, m, input.extension.as_ref())?;
            let written = write_out(out, &io::write_witness(&c.subspace))?;
            let ok = c.all_passed();
            Report::new(
                "lemma32",
                json!({ "blocks": path_str(blocks), "m": m }),
                json!({
                    "block_type": c.block_type,
                    "total_size": c.total_size,
                    "subspace_dim": c.subspace.dim(),
                    "dimension_ok": c.dimension_ok,
                    "image_disjoint": c.image_disjoint,
                    "injective": c.injective,
                    "written": written,
                }),
            )
            .verdict(if ok { "all flags pass" } else { "flag failed" }, Outcome::from_pass(ok))
        }
        Command::Threshold { kind, q, m, case, find_min } => {
            if *find_min {
                let m_star = min_sufficient_m(*kind, *q)?;
                let at = |m: u64| -> anyhow::Result<Value> {
                    let one = threshold_check(*kind, *q, m, CountingCase::One)?;
                    let two = threshold_check(*kind, *q, m, CountingCase::Two)?;
                    Ok(json!({ "m": m, "case1": one.satisfied, "case2": two.satisfied }))
                };
                let below = if m_star > 0 { at(m_star - 1)? } else { Value::Null };
                Report::new(
                    "threshold",
                    json!({ "kind": kind.as_str(), "q": q, "find_min": true }),
                    json!({ "min_sufficient_m": m_star, "at": at(m_star)?, "below": below }),
                )
            } else {
                let m = m.expect("clap enforces --m without --find-min");
                let r = threshold_check(*kind, *q, m, CountingCase::from_number(*case)?)?;
                Report::new(
                    "threshold",
                    json!({ "kind": kind.as_str(), "q": q, "m": m, "case": case }),
                    json!({
                        "sub_dim": r.sub_dim,
                        "lhs": r.lhs.to_string(),
                        "rhs": r.rhs.to_string(),
                        "satisfied": r.satisfied,
                    }),
                )
                .verdict(if r.satisfied { "satisfied" } else { "not satisfied" }, Outcome::Success)
            }
        }
        Command::Factor { n } => {
            let (p, q) = factor_composite(*n)?;
            Report::new("factor", json!({ "n": n }), json!({ "p": p, "q": q }))
        }
        Command::Obstruct { form, beta_w, witnesses } => {
            let f = load_form(form)?;
            let maps = witnesses
                .iter()
                .map(|w| io::parse_witness(&read(w)?).with_context(|| format!("parsing witness {}", w.display())))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let r = obstruction_report(&f, *beta_w, &maps)?;
            let (verdict, outcome, which) = match r.verdict {
                ObstructionVerdict::Satisfiable { witness } => ("satisfiable", Outcome::Success, json!(witness)),
                ObstructionVerdict::NotCertified => ("not certified", Outcome::VerificationFailed, Value::Null),
            };
            Report::new(
                "obstruct",
                json!({
                    "form": path_str(form),
                    "beta_w": beta_w,
                    "witnesses": witnesses.iter().map(|w| path_str(w)).collect::<Vec<_>>(),
                }),
                json!({
                    "beta_p": r.beta_p,
                    "required_min_dim": r.required_min_dim,
                    "witness_results": r.witness_results.iter().map(witness_json).collect::<Vec<_>>(),
                    "satisfying_witness": which,
                }),
            )
            .verdict(verdict, outcome)
        }
        Command::BuildAlgebra { form, p } => {
            let f = load_form(form)?;
            let a = GradedAlgebra::build(&f, *p)?;
            let written = write_out(out, &io::write_algebra(&a, &f))?;
            let dims: Vec<usize> = a.grades().iter().map(|g| g.dim()).collect();
            let nonzero: usize = a.tables().map(|(_, t)| t.iter().filter(|x| **x != rational::zero()).count()).sum();
            Report::new(
                "build-algebra",
                json!({ "form": path_str(form), "p": p }),
                json!({
                    "top_degree": a.top_degree(),
                    "grade_dims": dims,
                    "nonzero_constants": nonzero,
                    "written": written,
                }),
            )
        }
        Command::VerifyAlgebra { algebra } => {
            let (a, f) = io::parse_algebra(&read(algebra)?)?;
            let comm = a.verify_graded_commutativity();
            let assoc = a.verify_associativity();
            let unit = a.verify_unit();
            let duality = a.verify_poincare_duality();
            let cond = a.verify_condition_ii(&f);
            let ok = comm.passed() && assoc.passed() && unit.passed() && duality.passed() && cond.passed();
            let duality_entries: Vec<Value> = duality
                .entries
                .iter()
                .map(|e| json!({ "degree": e.degree, "rank": e.rank, "passed": e.passed }))
                .collect();
            Report::new(
                "verify-algebra",
                json!({ "algebra": path_str(algebra) }),
                json!({
                    "graded_commutativity": verdict_json(&comm),
                    "associativity": verdict_json(&assoc),
                    "unit": verdict_json(&unit),
                    "poincare_duality": {
                        "passed": duality.passed(),
                        "top_is_one_dimensional": duality.top_is_one_dimensional,
                        "pairings": duality_entries,
                    },
                    "condition_ii": verdict_json(&cond),
                }),
            )
            .verdict(if ok { "all verifiers pass" } else { "verification failed" }, Outcome::from_pass(ok))
        }
        Command::ClassifyForm { form } => {
            let q = load_integral(form)?;
            let inv = invariants(&q)?;
            let (classification, note) = if !inv.unimodular {
                (Value::Null, "not unimodular: no classification".to_string())
            } else if !inv.indefinite {
                (Value::Null, "definite: only invariants are reported".to_string())
            } else {
                let dec = forms::decomposition_from_invariants(&inv)?;
                let note = match inv.parity {
                    Parity::Odd => ODD_SMOOTHING_NOTE,
                    Parity::Even => EVEN_UNIQUE_NOTE,
                };
                (decomposition_json(&dec), note.to_string())
            };
            Report::new(
                "classify-form",
                json!({ "form": path_str(form) }),
                json!({ "invariants": invariants_json(&inv), "classification": classification, "note": note }),
            )
        }
        Command::FormSum { left, right } => {
            let s = load_integral(left)?.direct_sum(&load_integral(right)?);
            let written = write_out(out, &io::write_integral_form(&s))?;
            Report::new(
                "form-sum",
                json!({ "left": path_str(left), "right": path_str(right) }),
                json!({ "matrix": s.rows(), "invariants": invariants_json(&invariants(&s)?), "written": written }),
            )
        }
        Command::FormNegate { form } => {
            let n = load_integral(form)?.negate();
            let written = write_out(out, &io::write_integral_form(&n))?;
            Report::new(
                "form-negate",
                json!({ "form": path_str(form) }),
                json!({ "matrix": n.rows(), "invariants": invariants_json(&invariants(&n)?), "written": written }),
            )
        }
        Command::KsSum { values } => {
            let total = values
                .iter()
                .map(|&v| Ks::from_u8(v))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .fold(Ks::ZERO, ks_sum);
            Report::new("ks-sum", json!({ "values": values }), json!({ "ks": total.value() }))
        }
        Command::Recipe { form, ks } => {
            let q = load_integral(form)?;
            let dec = forms::classify_indefinite(&q)?;
            let ks = ks.map(Ks::from_u8).transpose()?;
            let recipe = realize_recipe(&dec, ks)?;
            let written = write_out(out, &serde_json::to_string_pretty(&io::RecipeFile::from_recipe(&recipe))?)?;
            let summands: Vec<Value> = recipe
                .summands
                .iter()
                .map(|(p, c)| json!({ "piece": p.name(), "count": c }))
                .collect();
            let inv = invariants(&recipe.form())?;
            Report::new(
                "recipe",
                json!({ "form": path_str(form), "ks": ks.map(Ks::value) }),
                json!({
                    "decomposition": decomposition_json(&dec),
                    "summands": summands,
                    "label": recipe.to_string(),
                    "recipe_ks": recipe.ks().value(),
                    "recipe_invariants": invariants_json(&inv),
                    "written": written,
                }),
            )
        }
        Command::Double { parity, rank, form } => {
            let (parity, rank, source) = match form {
                Some(path) => {
                    let inv = invariants(&load_integral(path)?)?;
                    (inv.parity, 2 * inv.rank, Value::String(path_str(path)))
                }
                None => (
                    parity.expect("clap enforces --parity"),
                    rank.expect("clap enforces --rank"),
                    Value::Null,
                ),
            };
            let class = double_class(parity, rank)?;
            Report::new(
                "double",
                json!({ "parity": parity.to_string(), "rank": rank, "form": source }),
                json!({ "class": class.to_string(), "embeds_in": class.embeds_in() }),
            )
        }
    };
    Ok(report)
}

fn main() -> ExitCode {
    if let Err(e) = forms::validate_e8(&IntegralSymmetricForm::e8()) {
        eprintln!("error: built-in E8 matrix failed validation: {e}");
        return ExitCode::from(2);
    }
    // clap exits with status 2 on usage errors, matching the input-error code
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                println!("{}", report.to_text());
            }
            ExitCode::from(report.outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
