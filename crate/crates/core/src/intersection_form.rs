//! Integral symmetric bilinear forms: invariants, the classification of
//! indefinite unimodular forms, and Kirby–Siebenmann bookkeeping for
//! simply-connected closed 4-manifolds.

use std::fmt;
use std::ops::Add;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, MatrixQ};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegralSymmetricForm {
    n: usize,
    entries: Vec<i64>,
}

impl IntegralSymmetricForm {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NonSquare {
                rows: n,
                cols: rows.iter().map(Vec::len).find(|&c| c != n).unwrap_or(n),
            });
        }
        let entries: Vec<i64> = rows.into_iter().flatten().collect();
        let form = Self { n, entries };
        if !(0..n).all(|i| (0..i).all(|j| form.get(i, j) == form.get(j, i))) {
            return Err(Error::NotSymmetric);
        }
        Ok(form)
    }

    /// The empty form of rank 0.
    pub fn empty() -> Self {
        Self { n: 0, entries: Vec::new() }
    }

    pub fn diagonal(values: &[i64]) -> Self {
        let n = values.len();
        let mut entries = vec![0; n * n];
        for (i, v) in values.iter().enumerate() {
            entries[i * n + i] = *v;
        }
        Self { n, entries }
    }

    /// The hyperbolic plane `[[0, 1], [1, 0]]`.
    pub fn hyperbolic() -> Self {
        Self {
            n: 2,
            entries: vec![0, 1, 1, 0],
        }
    }

    /// Positive definite even unimodular form of rank 8 (validated).
    pub fn e8() -> Self {
        e8_form().clone()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn to_matrix(&self) -> MatrixQ {
        MatrixQ::from_i64_rows(&self.rows()).unwrap_or_else(|_| MatrixQ::zeros(0, 0))
    }

    /// `Q(a, a)` for an integer vector.
    pub fn evaluate(&self, a: &[i64]) -> i64 {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .map(|(i, j)| a[i] * self.get(i, j) * a[j])
            .sum()
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut entries = vec![0; n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                entries[i * n + j] = self.get(i, j);
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                entries[(self.n + i) * n + self.n + j] = other.get(i, j);
            }
        }
        Self { n, entries }
    }

    pub fn negate(&self) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    /// `k` copies of `self`.
    pub fn repeat(&self, k: usize) -> Self {
        (0..k).fold(Self::empty(), |acc, _| acc.direct_sum(self))
    }
}

/// The Dynkin-diagram Gram matrix of E8: arms of length 4, 2 and 1 around a
/// trivalent node.
fn e8_form() -> &'static IntegralSymmetricForm {
    static E8: OnceLock<IntegralSymmetricForm> = OnceLock::new();
    E8.get_or_init(|| {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
        let mut rows = vec![vec![0i64; 8]; 8];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (a, b) in edges {
            rows[a][b] = -1;
            rows[b][a] = -1;
        }
        let form = IntegralSymmetricForm::new(rows).expect("E8 matrix is symmetric");
        validate_e8(&form).expect("E8 Gram matrix failed validation");
        form
    })
}

/// Confirms the rank-8 form is even, unimodular with det 1 and positive
/// definite.
pub fn validate_e8(form: &IntegralSymmetricForm) -> Result<()> {
    let inv = invariants(form)?;
    let ok = inv.rank == 8
        && inv.signature == 8
        && inv.parity == Parity::Even
        && inv.determinant == BigInt::one();
    if ok {
        Ok(())
    } else {
        Err(Error::InconsistentInvariants(format!("E8 candidate has {inv:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::Parse(format!("unknown parity {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormInvariants {
    pub rank: usize,
    pub b_plus: usize,
    pub b_minus: usize,
    pub signature: i64,
    pub parity: Parity,
    pub determinant: BigInt,
    pub unimodular: bool,
    pub indefinite: bool,
}

pub fn invariants(form: &IntegralSymmetricForm) -> Result<FormInvariants> {
    let matrix = form.to_matrix();
    let diag = linalg::congruence_diagonalize(&matrix)?;
    let det = linalg::determinant(&matrix)?;
    // integer matrix, so the rational determinant is an integer
    let determinant = det.to_integer();
    // Q(a, a) ≡ Σ Q_ii a_i² (mod 2), so evenness is read off the diagonal
    let parity = if (0..form.dim()).all(|i| form.get(i, i) % 2 == 0) {
        Parity::Even
    } else {
        Parity::Odd
    };
    Ok(FormInvariants {
        rank: form.dim(),
        b_plus: diag.positives,
        b_minus: diag.negatives,
        signature: diag.positives as i64 - diag.negatives as i64,
        parity,
        unimodular: determinant.abs().is_one(),
        indefinite: diag.positives > 0 && diag.negatives > 0,
        determinant,
    })
}

/// Normal form of an indefinite unimodular form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CanonicalDecomposition {
    /// `plus ⟨+1⟩ ⊕ minus ⟨-1⟩`
    Odd { plus: usize, minus: usize },
    /// `e8 E8 ⊕ h H`, negative `e8` meaning copies of `-E8`.
    Even { e8: i64, h: usize },
}

impl CanonicalDecomposition {
    pub fn parity(&self) -> Parity {
        match self {
            CanonicalDecomposition::Odd { .. } => Parity::Odd,
            CanonicalDecomposition::Even { .. } => Parity::Even,
        }
    }

    /// The canonical representative matrix.
    pub fn to_form(&self) -> IntegralSymmetricForm {
        match *self {
            CanonicalDecomposition::Odd { plus, minus } => {
                let mut diag = vec![1; plus];
                diag.extend(std::iter::repeat_n(-1, minus));
                IntegralSymmetricForm::diagonal(&diag)
            }
            CanonicalDecomposition::Even { e8, h } => {
                let block = if e8 >= 0 {
                    IntegralSymmetricForm::e8()
                } else {
                    IntegralSymmetricForm::e8().negate()
                };
                block
                    .repeat(e8.unsigned_abs() as usize)
                    .direct_sum(&IntegralSymmetricForm::hyperbolic().repeat(h))
            }
        }
    }
}

impl fmt::Display for CanonicalDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalDecomposition::Odd { plus, minus } => write!(f, "{plus}<+1> + {minus}<-1>"),
            CanonicalDecomposition::Even { e8, h } => write!(f, "{e8}E8 + {h}H"),
        }
    }
}

fn require_indefinite_unimodular(form: &IntegralSymmetricForm) -> Result<FormInvariants> {
    let inv = invariants(form)?;
    if !inv.unimodular {
        return Err(Error::NotUnimodular(inv.determinant.to_string()));
    }
    if !inv.indefinite {
        return Err(Error::NotIndefinite);
    }
    Ok(inv)
}

/// Reads off the normal form of an indefinite unimodular form from its
/// rank, signature and parity.
pub fn classify_indefinite(form: &IntegralSymmetricForm) -> Result<CanonicalDecomposition> {
    let inv = require_indefinite_unimodular(form)?;
    decomposition_from_invariants(&inv)
}

pub fn decomposition_from_invariants(inv: &FormInvariants) -> Result<CanonicalDecomposition> {
    match inv.parity {
        Parity::Odd => Ok(CanonicalDecomposition::Odd {
            plus: inv.b_plus,
            minus: inv.b_minus,
        }),
        Parity::Even => {
            let sigma = inv.signature;
            let excess = inv.rank as i64 - sigma.abs();
            if sigma % 8 != 0 || excess % 2 != 0 || excess < 0 {
                return Err(Error::InconsistentInvariants(format!(
                    "even form with rank {} and signature {sigma}",
                    inv.rank
                )));
            }
            Ok(CanonicalDecomposition::Even {
                e8: sigma / 8,
                h: (excess / 2) as usize,
            })
        }
    }
}

/// Isomorphism test for indefinite unimodular forms, complete by the
/// classification: equal rank, signature and parity.
pub fn is_isomorphic_indefinite(a: &IntegralSymmetricForm, b: &IntegralSymmetricForm) -> Result<bool> {
    let ia = require_indefinite_unimodular(a)?;
    let ib = require_indefinite_unimodular(b)?;
    Ok((ia.rank, ia.signature, ia.parity) == (ib.rank, ib.signature, ib.parity))
}

/// An element of `Z/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ks(bool);

impl Ks {
    pub const ZERO: Ks = Ks(false);
    pub const ONE: Ks = Ks(true);

    pub fn from_u8(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Ks::ZERO),
            1 => Ok(Ks::ONE),
            _ => Err(Error::Parse(format!("KS must be 0 or 1, got {v}"))),
        }
    }

    pub fn value(self) -> u8 {
        u8::from(self.0)
    }
}

impl Add for Ks {
    type Output = Ks;

    // addition in Z/2 is xor
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Ks) -> Ks {
        Ks(self.0 ^ rhs.0)
    }
}

impl std::iter::Sum for Ks {
    fn sum<I: Iterator<Item = Ks>>(iter: I) -> Ks {
        iter.fold(Ks::ZERO, Add::add)
    }
}

/// Kirby–Siebenmann invariant of a connected sum.
pub fn ks_sum(a: Ks, b: Ks) -> Ks {
    a + b
}

/// Building blocks of the connected-sum recipes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Piece {
    /// Non-smoothable manifold with form `⟨+1⟩`.
    X1,
    /// Non-smoothable manifold with form `⟨-1⟩`.
    XMinus1,
    Cp2,
    Cp2Bar,
    XE8,
    XMinusE8,
    S2xS2,
}

impl Piece {
    pub fn name(self) -> &'static str {
        match self {
            Piece::X1 => "X1",
            Piece::XMinus1 => "X-1",
            Piece::Cp2 => "CP2",
            Piece::Cp2Bar => "CP2bar",
            Piece::XE8 => "X_E8",
            Piece::XMinusE8 => "X_-E8",
            Piece::S2xS2 => "S2xS2",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        [
            Piece::X1,
            Piece::XMinus1,
            Piece::Cp2,
            Piece::Cp2Bar,
            Piece::XE8,
            Piece::XMinusE8,
            Piece::S2xS2,
        ]
        .into_iter()
        .find(|p| p.name() == name)
        .ok_or_else(|| Error::Parse(format!("unknown piece {name:?}")))
    }

    pub fn form(self) -> IntegralSymmetricForm {
        match self {
            Piece::X1 | Piece::Cp2 => IntegralSymmetricForm::diagonal(&[1]),
            Piece::XMinus1 | Piece::Cp2Bar => IntegralSymmetricForm::diagonal(&[-1]),
            Piece::XE8 => IntegralSymmetricForm::e8(),
            Piece::XMinusE8 => IntegralSymmetricForm::e8().negate(),
            Piece::S2xS2 => IntegralSymmetricForm::hyperbolic(),
        }
    }

    /// KS of the piece: 1 for the fake projective planes and for the
    /// `±E8` manifolds (σ/8 odd), 0 for the smooth ones.
    pub fn ks(self) -> Ks {
        match self {
            Piece::X1 | Piece::XMinus1 | Piece::XE8 | Piece::XMinusE8 => Ks::ONE,
            Piece::Cp2 | Piece::Cp2Bar | Piece::S2xS2 => Ks::ZERO,
        }
    }
}

/// A connected sum, as a multiset of pieces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Recipe {
    pub summands: Vec<(Piece, usize)>,
}

impl Recipe {
    fn push(&mut self, piece: Piece, count: usize) {
        if count > 0 {
            self.summands.push((piece, count));
        }
    }

    /// Intersection form of the connected sum.
    pub fn form(&self) -> IntegralSymmetricForm {
        self.summands
            .iter()
            .fold(IntegralSymmetricForm::empty(), |acc, (p, c)| acc.direct_sum(&p.form().repeat(*c)))
    }

    /// KS of the connected sum, by additivity.
    pub fn ks(&self) -> Ks {
        self.summands
            .iter()
            .flat_map(|(p, c)| std::iter::repeat_n(p.ks(), *c))
            .sum()
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|(p, c)| format!("{c} {}", p.name()))
            .collect();
        f.write_str(&parts.join(" # "))
    }
}

/// A connected sum realising the decomposition (and, for odd forms, the
/// requested KS invariant).
pub fn realize_recipe(dec: &CanonicalDecomposition, ks: Option<Ks>) -> Result<Recipe> {
    let mut recipe = Recipe::default();
    match *dec {
        CanonicalDecomposition::Odd { plus, minus } => {
            if plus + minus == 0 {
                return Err(Error::EmptyDecomposition);
            }
            match ks.unwrap_or(Ks::ZERO) {
                Ks::ZERO => {
                    recipe.push(Piece::Cp2, plus);
                    recipe.push(Piece::Cp2Bar, minus);
                }
                _ if plus > 0 => {
                    recipe.push(Piece::X1, 1);
                    recipe.push(Piece::Cp2, plus - 1);
                    recipe.push(Piece::Cp2Bar, minus);
                }
                _ => {
                    recipe.push(Piece::XMinus1, 1);
                    recipe.push(Piece::Cp2Bar, minus - 1);
                }
            }
        }
        CanonicalDecomposition::Even { e8, h } => {
            if ks.is_some() {
                return Err(Error::KsNotApplicable);
            }
            if e8 == 0 && h == 0 {
                return Err(Error::EmptyDecomposition);
            }
            let piece = if e8 >= 0 { Piece::XE8 } else { Piece::XMinusE8 };
            recipe.push(piece, e8.unsigned_abs() as usize);
            recipe.push(Piece::S2xS2, h);
        }
    }
    Ok(recipe)
}

/// Homeomorphism type of the double `DM = M ∪ -M`, whose form has rank
/// `2k`, signature 0 and KS 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DoubleClass {
    Sphere,
    /// `#k S²×S²`
    Untwisted(usize),
    /// `#(k-1) S²×S² # S²×̃S²`
    Twisted(usize),
}

impl DoubleClass {
    /// Every double embeds in the twisted bundle `S²×̃S³`.
    pub fn embeds_in(&self) -> &'static str {
        "S²×̃S³"
    }
}

impl fmt::Display for DoubleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DoubleClass::Sphere => f.write_str("S⁴"),
            DoubleClass::Untwisted(k) => write!(f, "#{k} S²×S²"),
            DoubleClass::Twisted(1) => f.write_str("S²×̃S²"),
            DoubleClass::Twisted(k) => write!(f, "#{} S²×S² # S²×̃S²", k - 1),
        }
    }
}

pub fn double_class(parity: Parity, rank: usize) -> Result<DoubleClass> {
    if rank % 2 == 1 {
        return Err(Error::OddRank(rank));
    }
    let k = rank / 2;
    Ok(match (parity, k) {
        (_, 0) => DoubleClass::Sphere,
        (Parity::Even, k) => DoubleClass::Untwisted(k),
        (Parity::Odd, k) => DoubleClass::Twisted(k),
    })
}
