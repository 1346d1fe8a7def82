//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain values and returns a JSON string. The
//! `*_json` functions hold the logic and are tested natively; the
//! `#[wasm_bindgen]` wrappers only convert errors into exceptions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use cupform_core::graded_algebra::{GradedAlgebra, Verdict};
use cupform_core::intersection_form::{
    self as forms, double_class, invariants, realize_recipe, CanonicalDecomposition, IntegralSymmetricForm, Ks,
};
use cupform_core::multilinear::{canonical_tuples, FormKind, MultilinearForm};
use cupform_core::obstruction::{min_sufficient_m, threshold_check, CountingCase};
use cupform_core::rational::{from_frac, to_fraction_string};

type Out = Result<String, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn decomposition(dec: &CanonicalDecomposition) -> Value {
    match *dec {
        CanonicalDecomposition::Odd { plus, minus } => json!({ "plus": plus, "minus": minus, "label": dec.to_string() }),
        CanonicalDecomposition::Even { e8, h } => json!({ "e8": e8, "h": h, "label": dec.to_string() }),
    }
}

/// Invariants, normal form, recipes and double of an integral matrix
/// given as JSON rows, e.g. `[[0,1],[1,0]]`.
pub fn classify_json(matrix: &str) -> Out {
    let rows: Vec<Vec<i64>> = serde_json::from_str(matrix).map_err(err)?;
    let q = IntegralSymmetricForm::new(rows).map_err(err)?;
    let inv = invariants(&q).map_err(err)?;
    let mut report = json!({
        "rank": inv.rank,
        "b_plus": inv.b_plus,
        "b_minus": inv.b_minus,
        "signature": inv.signature,
        "parity": inv.parity.to_string(),
        "determinant": inv.determinant.to_string(),
        "unimodular": inv.unimodular,
        "indefinite": inv.indefinite,
        "double": double_class(inv.parity, 2 * inv.rank).map_err(err)?.to_string(),
    });
    if let Ok(dec) = forms::classify_indefinite(&q) {
        let recipes: Vec<String> = match dec {
            CanonicalDecomposition::Odd { .. } => [Ks::ZERO, Ks::ONE]
                .iter()
                .map(|&ks| realize_recipe(&dec, Some(ks)).map(|r| format!("KS {}: {r}", ks.value())))
                .collect::<Result<_, _>>()
                .map_err(err)?,
            CanonicalDecomposition::Even { .. } => vec![realize_recipe(&dec, None).map_err(err)?.to_string()],
        };
        report["classification"] = decomposition(&dec);
        report["recipes"] = json!(recipes);
    }
    Ok(report.to_string())
}

/// Both counting inequalities at `m`, and the stable threshold for `(kind, q)`.
pub fn threshold_json(kind: &str, q: usize, m: u64) -> Out {
    let kind: FormKind = kind.parse().map_err(err)?;
    let case = |c: CountingCase| -> Result<Value, String> {
        let r = threshold_check(kind, q, m, c).map_err(err)?;
        Ok(json!({
            "sub_dim": r.sub_dim,
            "lhs": r.lhs.to_string(),
            "rhs": r.rhs.to_string(),
            "satisfied": r.satisfied,
        }))
    };
    Ok(json!({
        "kind": kind.as_str(),
        "q": q,
        "m": m,
        "case1": case(CountingCase::One)?,
        "case2": case(CountingCase::Two)?,
        "min_sufficient_m": min_sufficient_m(kind, q).map_err(err)?,
    })
    .to_string())
}

fn verdict(v: &Verdict) -> Value {
    match v {
        Verdict::Pass => json!("pass"),
        Verdict::Fail(c) => json!(format!("fail: {}", c.detail)),
    }
}

/// Builds the graded algebra of a seeded random form and runs every verifier.
pub fn random_algebra_json(p: usize, q: usize, m: usize, seed: u32) -> Out {
    let kind = if p % 2 == 1 { FormKind::Skew } else { FormKind::Symmetric };
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from(seed));
    let mut comps = Vec::new();
    for t in canonical_tuples(kind, m, q) {
        if rng.gen_bool(0.7) {
            comps.push((t.0, from_frac(rng.gen_range(-5..=5), rng.gen_range(1..=3))));
        }
    }
    let form = MultilinearForm::from_components(kind, m, q, comps).map_err(err)?;
    let a = GradedAlgebra::build(&form, p).map_err(err)?;
    let components: Vec<Value> = form
        .components()
        .map(|(t, v)| json!({ "idx": t.0, "value": to_fraction_string(v) }))
        .collect();
    Ok(json!({
        "kind": kind.as_str(),
        "form": components,
        "top_degree": a.top_degree(),
        "grade_dims": a.grades().iter().map(|g| g.dim()).collect::<Vec<_>>(),
        "commutativity": verdict(&a.verify_graded_commutativity()),
        "associativity": verdict(&a.verify_associativity()),
        "unit": verdict(&a.verify_unit()),
        "duality": if a.verify_poincare_duality().passed() { "pass" } else { "fail" },
        "q_fold_products": verdict(&a.verify_condition_ii(&form)),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn classify(matrix: &str) -> Result<String, JsValue> {
    classify_json(matrix).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn threshold(kind: &str, q: usize, m: u32) -> Result<String, JsValue> {
    threshold_json(kind, q, u64::from(m)).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn random_algebra(p: usize, q: usize, m: usize, seed: u32) -> Result<String, JsValue> {
    random_algebra_json(p, q, m, seed).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn classifies_hyperbolic_plane() {
        let r = parse(&classify_json("[[0,1],[1,0]]").unwrap());
        assert_eq!(r["classification"]["h"], 1);
        assert_eq!(r["double"], "#2 S²×S²");
    }

    #[test]
    fn odd_form_gets_two_recipes() {
        let r = parse(&classify_json("[[1,0],[0,-1]]").unwrap());
        assert_eq!(r["recipes"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn rejects_bad_matrix() {
        assert!(classify_json("[[0,1],[2,0]]").is_err());
        assert!(classify_json("not json").is_err());
    }

    #[test]
    fn threshold_example() {
        let r = parse(&threshold_json("skew", 3, 1000).unwrap());
        assert_eq!(r["case1"]["satisfied"], false);
        assert_eq!(r["min_sufficient_m"], 945_054);
    }

    #[test]
    fn random_algebras_verify() {
        for seed in 0..5 {
            let r = parse(&random_algebra_json(3, 3, 3, seed).unwrap());
            assert_eq!(r["associativity"], "pass");
            assert_eq!(r["duality"], "pass");
            let r = parse(&random_algebra_json(2, 5, 2, seed).unwrap());
            assert_eq!(r["q_fold_products"], "pass");
        }
    }
}
