//! JSON file formats.
//!
//! Rationals travel as `"p/q"` strings; integers are accepted on input too.
//! Field order in every emitted document is fixed by the struct layouts
//! below, so identical values always serialise to identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded_algebra::{GradeBasis, GradedAlgebra};
use crate::intersection_form::{IntegralSymmetricForm, Recipe};
use crate::linalg::MatrixQ;
use crate::multilinear::{FormKind, IndexTuple, MultilinearForm};
use crate::obstruction::{BlockSpec, SubspaceMap};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalRepr {
    Text(String),
    Int(i64),
}

impl RationalRepr {
    pub fn parse(&self) -> Result<Rational> {
        match self {
            RationalRepr::Text(s) => rational::parse(s),
            RationalRepr::Int(n) => Ok(rational::from_int(*n)),
        }
    }
}

impl From<&Rational> for RationalRepr {
    fn from(x: &Rational) -> Self {
        RationalRepr::Text(rational::to_fraction_string(x))
    }
}

fn parse_vec(v: &[RationalRepr]) -> Result<Vec<Rational>> {
    v.iter().map(RationalRepr::parse).collect()
}

fn parse_rows(rows: &[Vec<RationalRepr>]) -> Result<Vec<Vec<Rational>>> {
    rows.iter().map(|r| parse_vec(r)).collect()
}

fn repr_rows(m: &MatrixQ) -> Vec<Vec<RationalRepr>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(RationalRepr::from).collect())
        .collect()
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("file documents always serialise")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentFile {
    pub idx: Vec<usize>,
    pub value: RationalRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormFile {
    pub kind: FormKind,
    pub m: usize,
    pub q: usize,
    pub components: Vec<ComponentFile>,
}

impl FormFile {
    pub fn from_form(f: &MultilinearForm) -> Self {
        Self {
            kind: f.kind(),
            m: f.m(),
            q: f.q(),
            components: f
                .components()
                .map(|(t, v)| ComponentFile {
                    idx: t.0.clone(),
                    value: v.into(),
                })
                .collect(),
        }
    }

    pub fn to_form(&self) -> Result<MultilinearForm> {
        let comps = self
            .components
            .iter()
            .map(|c| Ok((c.idx.clone(), c.value.parse()?)))
            .collect::<Result<Vec<_>>>()?;
        MultilinearForm::from_components(self.kind, self.m, self.q, comps)
    }
}

pub fn parse_form(text: &str) -> Result<MultilinearForm> {
    from_json::<FormFile>(text)?.to_form()
}

pub fn write_form(f: &MultilinearForm) -> String {
    to_json(&FormFile::from_form(f))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub matrix: Vec<Vec<RationalRepr>>,
}

pub fn parse_matrix(text: &str) -> Result<MatrixQ> {
    let file: MatrixFile = from_json(text)?;
    MatrixQ::from_rows(parse_rows(&file.matrix)?)
}

pub fn write_matrix(m: &MatrixQ) -> String {
    to_json(&MatrixFile { matrix: repr_rows(m) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub m: usize,
    #[serde(rename = "U_basis")]
    pub u_basis: Vec<Vec<RationalRepr>>,
    /// `m` rows of `k` entries: column `j` is the image of `U_basis[j]`.
    pub phi: Vec<Vec<RationalRepr>>,
}

impl WitnessFile {
    pub fn from_map(sm: &SubspaceMap) -> Self {
        Self {
            m: sm.ambient_dim(),
            u_basis: sm
                .basis()
                .iter()
                .map(|u| u.iter().map(RationalRepr::from).collect())
                .collect(),
            phi: repr_rows(sm.phi()),
        }
    }

    pub fn to_map(&self) -> Result<SubspaceMap> {
        let basis = parse_rows(&self.u_basis)?;
        let k = basis.len();
        let rows = parse_rows(&self.phi)?;
        let phi = if rows.is_empty() {
            MatrixQ::zeros(self.m, k)
        } else {
            MatrixQ::from_rows(rows)?
        };
        // an m x 0 matrix has no way to carry its row count in JSON
        let phi = if k == 0 { MatrixQ::zeros(self.m, 0) } else { phi };
        SubspaceMap::new(self.m, basis, phi)
    }
}

pub fn parse_witness(text: &str) -> Result<SubspaceMap> {
    from_json::<WitnessFile>(text)?.to_map()
}

pub fn write_witness(sm: &SubspaceMap) -> String {
    to_json(&WitnessFile::from_map(sm))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockFile {
    #[serde(rename = "type")]
    pub block_type: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<RationalRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<RationalRepr>,
}

impl BlockFile {
    pub fn from_spec(spec: &BlockSpec) -> Self {
        let t = spec.block_type();
        Self {
            block_type: t,
            k: (t != 6).then(|| spec.size()),
            l: (t == 6).then(|| spec.size_parameter()),
            a: Some((&spec.a()).into()),
            b: spec.b().as_ref().map(RationalRepr::from),
        }
    }

    pub fn to_spec(&self) -> Result<BlockSpec> {
        let size = match self.block_type {
            6 => self.l.or(self.k),
            _ => self.k.or(self.l),
        }
        .unwrap_or(1);
        let a = match (&self.a, self.block_type) {
            (Some(a), _) => a.parse()?,
            (None, 1) => rational::one(),
            (None, 2) => -rational::one(),
            (None, t) => return Err(Error::InvalidSpec(format!("type {t} block needs \"a\""))),
        };
        let b = self.b.as_ref().map(RationalRepr::parse).transpose()?;
        BlockSpec::new(self.block_type, size, a, b)
    }
}

pub fn parse_block(text: &str) -> Result<BlockSpec> {
    from_json::<BlockFile>(text)?.to_spec()
}

/// Input of the subspace construction: blocks of one type, the ambient
/// dimension, and optionally the `(m - l) x l` rows of `φ` below the blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlocksFile {
    pub m: usize,
    pub blocks: Vec<BlockFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<Vec<Vec<RationalRepr>>>,
}

pub struct BlocksInput {
    pub m: usize,
    pub blocks: Vec<BlockSpec>,
    pub extension: Option<MatrixQ>,
}

pub fn parse_blocks(text: &str) -> Result<BlocksInput> {
    let file: BlocksFile = from_json(text)?;
    let blocks = file.blocks.iter().map(BlockFile::to_spec).collect::<Result<Vec<_>>>()?;
    let extension = match &file.extension {
        Some(rows) if !rows.is_empty() => Some(MatrixQ::from_rows(parse_rows(rows)?)?),
        _ => None,
    };
    Ok(BlocksInput {
        m: file.m,
        blocks,
        extension,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralFormFile {
    pub matrix: Vec<Vec<i64>>,
}

pub fn parse_integral_form(text: &str) -> Result<IntegralSymmetricForm> {
    IntegralSymmetricForm::new(from_json::<IntegralFormFile>(text)?.matrix)
}

pub fn write_integral_form(q: &IntegralSymmetricForm) -> String {
    to_json(&IntegralFormFile { matrix: q.rows() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandFile {
    pub piece: String,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeFile {
    pub summands: Vec<SummandFile>,
}

impl RecipeFile {
    pub fn from_recipe(r: &Recipe) -> Self {
        Self {
            summands: r
                .summands
                .iter()
                .map(|(p, c)| SummandFile {
                    piece: p.name().to_string(),
                    count: *c,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeFile {
    pub degree: usize,
    pub dual: bool,
    pub basis: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantFile {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: RationalRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductFile {
    pub left: usize,
    pub right: usize,
    pub constants: Vec<ConstantFile>,
}

/// Dump of a built algebra: grades with their bases, and all non-zero
/// structure constants `e_i ∪ e_j = Σ_k c_k e_k` for each pair of degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub kind: FormKind,
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub top_degree: usize,
    pub form: FormFile,
    pub grades: Vec<GradeFile>,
    pub products: Vec<ProductFile>,
}

impl AlgebraFile {
    pub fn from_algebra(a: &GradedAlgebra, form: &MultilinearForm) -> Self {
        let grades = a
            .grades()
            .iter()
            .enumerate()
            .map(|(s, g)| GradeFile {
                degree: s * a.p(),
                dual: g.dual,
                basis: g.tuples.iter().map(|t| t.0.clone()).collect(),
            })
            .collect();
        let products = a
            .tables()
            .map(|(&(s, t), table)| {
                let (dt, du) = (a.grades()[t].dim(), a.grades()[s + t].dim());
                let constants = table
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
                    .map(|(pos, v)| ConstantFile {
                        i: pos / (dt * du),
                        j: (pos / du) % dt,
                        k: pos % du,
                        value: v.into(),
                    })
                    .collect();
                ProductFile {
                    left: s * a.p(),
                    right: t * a.p(),
                    constants,
                }
            })
            .collect();
        Self {
            kind: a.kind(),
            m: a.m(),
            p: a.p(),
            q: a.q(),
            top_degree: a.top_degree(),
            form: FormFile::from_form(form),
            grades,
            products,
        }
    }

    pub fn to_algebra(&self) -> Result<(GradedAlgebra, MultilinearForm)> {
        let p = self.p;
        if p == 0 {
            return Err(Error::InvalidShape("p must be positive".into()));
        }
        if self.top_degree != p * self.q {
            return Err(Error::InvalidShape(format!(
                "top degree {} is not p*q = {}",
                self.top_degree,
                p * self.q
            )));
        }
        let mut grades = vec![None; self.q + 1];
        for g in &self.grades {
            if g.degree % p != 0 || g.degree / p > self.q {
                return Err(Error::DegreeMismatch(g.degree));
            }
            grades[g.degree / p] = Some(GradeBasis {
                dual: g.dual,
                tuples: g.basis.iter().cloned().map(IndexTuple).collect(),
            });
        }
        let grades: Vec<GradeBasis> = grades
            .into_iter()
            .enumerate()
            .map(|(s, g)| g.ok_or(Error::DegreeMismatch(s * p)))
            .collect::<Result<_>>()?;
        let mut tables = BTreeMap::new();
        for prod in &self.products {
            if prod.left % p != 0 || prod.right % p != 0 {
                return Err(Error::DegreeMismatch(if prod.left % p != 0 { prod.left } else { prod.right }));
            }
            let (s, t) = (prod.left / p, prod.right / p);
            if s + t > self.q {
                return Err(Error::InvalidShape(format!(
                    "product of degrees {} and {} exceeds the top degree",
                    prod.left, prod.right
                )));
            }
            let (ds, dt, du) = (grades[s].dim(), grades[t].dim(), grades[s + t].dim());
            let mut table = vec![rational::zero(); ds * dt * du];
            for c in &prod.constants {
                if c.i >= ds || c.j >= dt || c.k >= du {
                    return Err(Error::InvalidShape(format!(
                        "constant ({}, {}, {}) out of range for degrees {} x {}",
                        c.i, c.j, c.k, prod.left, prod.right
                    )));
                }
                table[(c.i * dt + c.j) * du + c.k] = c.value.parse()?;
            }
            tables.insert((s, t), table);
        }
        let algebra = GradedAlgebra::from_parts(self.kind, self.m, p, self.q, grades, tables)?;
        Ok((algebra, self.form.to_form()?))
    }
}

pub fn parse_algebra(text: &str) -> Result<(GradedAlgebra, MultilinearForm)> {
    from_json::<AlgebraFile>(text)?.to_algebra()
}

pub fn write_algebra(a: &GradedAlgebra, form: &MultilinearForm) -> String {
    to_json(&AlgebraFile::from_algebra(a, form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_frac, from_int};
    use proptest::prelude::*;

    #[test]
    fn form_file_rejects_non_canonical() {
        let text = r#"{"kind":"skew","m":3,"q":2,"components":[{"idx":[2,1],"value":"1/2"}]}"#;
        assert_eq!(parse_form(text), Err(Error::NonCanonical(vec![2, 1])));
        let ok = r#"{"kind":"skew","m":3,"q":2,"components":[{"idx":[1,2],"value":"1/2"},{"idx":[2,3],"value":3}]}"#;
        let f = parse_form(ok).unwrap();
        assert_eq!(f.component(&IndexTuple(vec![1, 2])), from_frac(1, 2));
        assert_eq!(f.component(&IndexTuple(vec![2, 3])), from_int(3));
    }

    #[test]
    fn block_file_defaults() {
        let j = parse_block(r#"{"type": 5, "k": 2, "a": "1"}"#).unwrap();
        assert_eq!(j, BlockSpec::Jordan { k: 2, a: from_int(1) });
        let c = parse_block(r#"{"type": 6, "l": 1, "a": "0", "b": "-3/2"}"#).unwrap();
        assert_eq!(c.size(), 2);
        assert_eq!(parse_block(r#"{"type": 2}"#).unwrap(), BlockSpec::Reflection);
        assert!(parse_block(r#"{"type": 3}"#).is_err());
        assert_eq!(BlockFile::from_spec(&c).to_spec().unwrap(), c);
    }

    #[test]
    fn witness_file_shapes() {
        let text = r#"{"m": 2, "U_basis": [["1","0"]], "phi": [["1"],["1"]]}"#;
        let w = parse_witness(text).unwrap();
        assert_eq!(w.dim(), 1);
        assert_eq!(w.image(0), vec![from_int(1), from_int(1)]);
        assert_eq!(parse_witness(&write_witness(&w)).unwrap(), w);
        let bad = r#"{"m": 2, "U_basis": [["1","0"]], "phi": [["1","2"],["1","0"]]}"#;
        assert!(parse_witness(bad).is_err());
    }

    #[test]
    fn algebra_round_trip() {
        let f = MultilinearForm::from_components(
            FormKind::Skew,
            3,
            3,
            [(vec![1, 2, 3], from_frac(2, 5))],
        )
        .unwrap();
        let a = GradedAlgebra::build(&f, 3).unwrap();
        let text = write_algebra(&a, &f);
        let (back, form) = parse_algebra(&text).unwrap();
        assert_eq!(back, a);
        assert_eq!(form, f);
        assert_eq!(write_algebra(&back, &form), text);
    }

    proptest! {
        #[test]
        fn form_file_round_trip(vals in prop::collection::vec((-9i64..=9, 1i64..=9), 4)) {
            let tuples = crate::multilinear::canonical_tuples(FormKind::Symmetric, 2, 3);
            let f = MultilinearForm::from_components(
                FormKind::Symmetric, 2, 3,
                tuples.into_iter().map(|t| t.0).zip(vals.into_iter().map(|(n, d)| from_frac(n, d))),
            ).unwrap();
            let text = write_form(&f);
            let back = parse_form(&text).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(write_form(&back), text);
        }
    }
}
