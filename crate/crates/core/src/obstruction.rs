//! Witness checking for special functions, real Jordan block constructors,
//! and the dimension-counting thresholds behind the obstruction.
//!
//! Whether a form is special is never decided here; only a supplied witness
//! `(U, φ)` is checked.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::linalg::{self, MatrixQ};
use crate::multilinear::{canonical_tuples, FormKind, MultilinearForm};
use crate::rational::Rational;

/// A subspace `U ⊂ Q^m` (given by a basis) and a linear map `φ: U -> Q^m`.
///
/// `phi` is the `m x k` matrix whose column `j` is `φ(u_j)` in standard
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceMap {
    m: usize,
    basis: Vec<Vec<Rational>>,
    phi: MatrixQ,
}

impl SubspaceMap {
    pub fn new(m: usize, basis: Vec<Vec<Rational>>, phi: MatrixQ) -> Result<Self> {
        if let Some(bad) = basis.iter().find(|u| u.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: bad.len(),
            });
        }
        if phi.rows() != m || phi.cols() != basis.len() {
            return Err(Error::InvalidShape(format!(
                "phi must be {m}x{}, got {}x{}",
                basis.len(),
                phi.rows(),
                phi.cols()
            )));
        }
        Ok(Self { m, basis, phi })
    }

    /// `φ = -id` on all of `Q^m`.
    pub fn negation(m: usize) -> Self {
        let basis = (0..m).map(|j| MatrixQ::identity(m).column(j)).collect();
        let mut phi = MatrixQ::identity(m);
        for i in 0..m {
            phi[(i, i)] = -Rational::one();
        }
        Self { m, basis, phi }
    }

    /// The zero map on `span{e_1, .., e_k}`.
    pub fn zero_map(m: usize, k: usize) -> Self {
        let id = MatrixQ::identity(m);
        let basis = (0..k).map(|j| id.column(j)).collect();
        Self {
            m,
            basis,
            phi: MatrixQ::zeros(m, k),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn phi(&self) -> &MatrixQ {
        &self.phi
    }

    pub fn image(&self, j: usize) -> Vec<Rational> {
        self.phi.column(j)
    }

    fn basis_matrix(&self) -> MatrixQ {
        MatrixQ::from_columns(self.m, &self.basis).expect("basis vectors have length m")
    }

    /// Re-expresses the same map in the basis `u'_j = Σ_i change[i][j] u_i`.
    pub fn rebased(&self, change: &MatrixQ) -> Result<SubspaceMap> {
        let basis = &self.basis_matrix() * change;
        let phi = &self.phi * change;
        SubspaceMap::new(self.m, (0..basis.cols()).map(|j| basis.column(j)).collect(), phi)
    }
}

/// `φ(x) != x` for every non-zero `x ∈ U`.
pub fn is_fixed_point_free(sm: &SubspaceMap) -> Result<bool> {
    let basis = sm.basis_matrix();
    if linalg::rank(&basis) != sm.dim() {
        return Err(Error::DegenerateBasis);
    }
    Ok(linalg::rank(&sm.phi.try_sub(&basis)?) == sm.dim())
}

/// Which clause of the special-function definition a witness violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessClause {
    /// `dim U >= m/3` (or the required dimension in a report).
    Dimension,
    /// `φ` has no non-zero fixed vector.
    FixedPointFree,
    /// `F(x_1, .., x_q) = F(φ x_1, .., φ x_q)` on `U`.
    Invariance,
}

impl WitnessClause {
    pub fn label(self) -> &'static str {
        match self {
            WitnessClause::Dimension => "a",
            WitnessClause::FixedPointFree => "b",
            WitnessClause::Invariance => "c",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessVerdict {
    pub failed: Option<WitnessClause>,
    pub reason: String,
}

impl WitnessVerdict {
    pub fn valid(&self) -> bool {
        self.failed.is_none()
    }

    fn ok(reason: impl Into<String>) -> Self {
        Self {
            failed: None,
            reason: reason.into(),
        }
    }

    fn fail(clause: WitnessClause, reason: impl Into<String>) -> Self {
        Self {
            failed: Some(clause),
            reason: reason.into(),
        }
    }
}

/// Finds a canonical tuple of basis vectors of `U` on which the invariance
/// identity fails. Checking canonical tuples is complete by multilinearity.
fn invariance_violation(form: &MultilinearForm, sm: &SubspaceMap) -> Result<Option<Vec<usize>>> {
    let k = sm.dim();
    if k == 0 {
        return Ok(None);
    }
    let images: Vec<Vec<Rational>> = (0..k).map(|j| sm.image(j)).collect();
    for tuple in canonical_tuples(form.kind(), k, form.q()) {
        let xs: Vec<Vec<Rational>> = tuple.0.iter().map(|&i| sm.basis[i - 1].clone()).collect();
        let ys: Vec<Vec<Rational>> = tuple.0.iter().map(|&i| images[i - 1].clone()).collect();
        if form.eval(&xs)? != form.eval(&ys)? {
            return Ok(Some(tuple.0));
        }
    }
    Ok(None)
}

fn check_witness(
    form: &MultilinearForm,
    sm: &SubspaceMap,
    dimension_ok: bool,
    dimension_reason: String,
) -> Result<WitnessVerdict> {
    if sm.ambient_dim() != form.m() {
        return Err(Error::DimensionMismatch {
            expected: form.m(),
            got: sm.ambient_dim(),
        });
    }
    if !dimension_ok {
        return Ok(WitnessVerdict::fail(WitnessClause::Dimension, dimension_reason));
    }
    if !is_fixed_point_free(sm)? {
        return Ok(WitnessVerdict::fail(
            WitnessClause::FixedPointFree,
            "phi fixes a non-zero vector of U",
        ));
    }
    if let Some(tuple) = invariance_violation(form, sm)? {
        return Ok(WitnessVerdict::fail(
            WitnessClause::Invariance,
            format!("F(u) != F(phi u) on basis tuple {tuple:?}"),
        ));
    }
    Ok(WitnessVerdict::ok(format!(
        "dim U = {}, phi fixed-point free, F invariant on all basis tuples",
        sm.dim()
    )))
}

/// Checks whether `(U, φ)` witnesses that `F` is special.
pub fn verify_special_witness(form: &MultilinearForm, sm: &SubspaceMap) -> Result<WitnessVerdict> {
    let ok = 3 * sm.dim() >= sm.ambient_dim();
    let reason = format!("dim U = {} < m/3 = {}/3", sm.dim(), sm.ambient_dim());
    check_witness(form, sm, ok, reason)
}

/// A real Jordan block, classified into the six types used by the argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockSpec {
    /// `J_1(1)`
    Unipotent,
    /// `J_1(-1)`
    Reflection,
    /// `J_1(a)` with `|a| > 1`
    Expanding(Rational),
    /// `J_1(a)` with `|a| < 1`
    Contracting(Rational),
    /// `J_k(a)` with `k > 1`
    Jordan { k: usize, a: Rational },
    /// `C_l(a, b)` with `b != 0`
    Rotation { l: usize, a: Rational, b: Rational },
}

impl BlockSpec {
    /// Builds a spec from its type number and parameters, validating the
    /// type constraints.
    pub fn new(block_type: u8, size: usize, a: Rational, b: Option<Rational>) -> Result<Self> {
        let one = Rational::one();
        let spec = match block_type {
            1..=4 if size != 1 => {
                return Err(Error::InvalidSpec(format!("type {block_type} blocks have size 1")))
            }
            1 if a == one => BlockSpec::Unipotent,
            2 if a == -one.clone() => BlockSpec::Reflection,
            3 if a.abs() > one => BlockSpec::Expanding(a),
            4 if a.abs() < one => BlockSpec::Contracting(a),
            5 if size > 1 => BlockSpec::Jordan { k: size, a },
            6 => match b {
                Some(b) if !b.is_zero() && size >= 1 => BlockSpec::Rotation { l: size, a, b },
                _ => return Err(Error::InvalidSpec("type 6 needs l >= 1 and b != 0".into())),
            },
            1..=6 => {
                return Err(Error::InvalidSpec(format!(
                    "parameters violate type {block_type} (size {size}, a = {a})"
                )))
            }
            other => return Err(Error::InvalidSpec(format!("unknown block type {other}"))),
        };
        Ok(spec)
    }

    pub fn block_type(&self) -> u8 {
        match self {
            BlockSpec::Unipotent => 1,
            BlockSpec::Reflection => 2,
            BlockSpec::Expanding(_) => 3,
            BlockSpec::Contracting(_) => 4,
            BlockSpec::Jordan { .. } => 5,
            BlockSpec::Rotation { .. } => 6,
        }
    }

    /// Side length of the square block.
    pub fn size(&self) -> usize {
        match self {
            BlockSpec::Jordan { k, .. } => *k,
            BlockSpec::Rotation { l, .. } => 2 * l,
            _ => 1,
        }
    }

    /// The size parameter as written in a block file (`k` or `l`).
    pub fn size_parameter(&self) -> usize {
        match self {
            BlockSpec::Rotation { l, .. } => *l,
            _ => self.size(),
        }
    }

    pub fn a(&self) -> Rational {
        match self {
            BlockSpec::Unipotent => Rational::one(),
            BlockSpec::Reflection => -Rational::one(),
            BlockSpec::Expanding(a) | BlockSpec::Contracting(a) => a.clone(),
            BlockSpec::Jordan { a, .. } | BlockSpec::Rotation { a, .. } => a.clone(),
        }
    }

    pub fn b(&self) -> Option<Rational> {
        match self {
            BlockSpec::Rotation { b, .. } => Some(b.clone()),
            _ => None,
        }
    }
}

/// `J_k(a)` (a on the diagonal, 1 above it) or `C_l(a, b)` (2x2 blocks
/// `[[a, b], [-b, a]]` on the diagonal, 2x2 identities above them).
pub fn build_block(spec: &BlockSpec) -> MatrixQ {
    let n = spec.size();
    let mut m = MatrixQ::zeros(n, n);
    match spec {
        BlockSpec::Rotation { l, a, b } => {
            for i in 0..*l {
                let o = 2 * i;
                m[(o, o)] = a.clone();
                m[(o, o + 1)] = b.clone();
                m[(o + 1, o)] = -b.clone();
                m[(o + 1, o + 1)] = a.clone();
                if i + 1 < *l {
                    m[(o, o + 2)] = Rational::one();
                    m[(o + 1, o + 3)] = Rational::one();
                }
            }
        }
        _ => {
            let a = spec.a();
            for i in 0..n {
                m[(i, i)] = a.clone();
                if i + 1 < n {
                    m[(i, i + 1)] = Rational::one();
                }
            }
        }
    }
    m
}

/// Result of [`lemma32_subspace`]: the subspace `V'` with its map, and the
/// three properties recomputed from scratch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceConstruction {
    pub block_type: u8,
    pub total_size: usize,
    pub subspace: SubspaceMap,
    pub dimension_ok: bool,
    pub image_disjoint: bool,
    pub injective: bool,
}

impl SubspaceConstruction {
    pub fn all_passed(&self) -> bool {
        self.dimension_ok && self.image_disjoint && self.injective
    }
}

/// Builds `φ: V -> Q^m` with matrix `[J; E]` (`J` the block-diagonal sum of
/// `blocks`, `E` the optional `(m - l) x l` extension, zero by default) and
/// extracts `V' ⊂ V` with `φ(V') ∩ V' = 0`:
/// all of `V` for unipotent blocks, the even-indexed block vectors otherwise.
pub fn lemma32_subspace(
    blocks: &[BlockSpec],
    m: usize,
    extension: Option<&MatrixQ>,
) -> Result<SubspaceConstruction> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::InvalidSpec("no blocks given".into()))?
        .block_type();
    if let Some(other) = blocks.iter().map(BlockSpec::block_type).find(|&t| t != first) {
        return Err(Error::MixedTypes(first, other));
    }
    if !matches!(first, 1 | 5 | 6) {
        return Err(Error::InvalidSpec(format!(
            "construction needs blocks of type 1, 5 or 6, got {first}"
        )));
    }
    let l: usize = blocks.iter().map(BlockSpec::size).sum();
    if l > m {
        return Err(Error::InvalidSpec(format!("total block size {l} exceeds m = {m}")));
    }

    let mut phi = MatrixQ::zeros(m, l);
    let mut offset = 0;
    for block in blocks {
        let j = build_block(block);
        for r in 0..j.rows() {
            for c in 0..j.cols() {
                phi[(offset + r, offset + c)] = j[(r, c)].clone();
            }
        }
        offset += block.size();
    }
    if let Some(e) = extension {
        if e.rows() != m - l || e.cols() != l {
            return Err(Error::InvalidShape(format!(
                "extension must be {}x{l}, got {}x{}",
                m - l,
                e.rows(),
                e.cols()
            )));
        }
        for r in 0..e.rows() {
            for c in 0..l {
                phi[(l + r, c)] = e[(r, c)].clone();
            }
        }
    }

    // columns of V (standard basis e_1..e_l) that span V'
    let chosen: Vec<usize> = if first == 1 {
        (0..l).collect()
    } else {
        let mut cols = Vec::new();
        let mut offset = 0;
        for block in blocks {
            cols.extend((1..block.size()).step_by(2).map(|j| offset + j));
            offset += block.size();
        }
        cols
    };

    let id = MatrixQ::identity(m);
    let basis: Vec<Vec<Rational>> = chosen.iter().map(|&c| id.column(c)).collect();
    let images: Vec<Vec<Rational>> = chosen.iter().map(|&c| phi.column(c)).collect();
    let image_matrix = MatrixQ::from_columns(m, &images)?;
    let subspace = SubspaceMap::new(m, basis, image_matrix.clone())?;

    let k = chosen.len();
    let image_rank = linalg::rank(&image_matrix);
    let joint_rank = linalg::rank(&subspace.basis_matrix().hconcat(&image_matrix)?);
    Ok(SubspaceConstruction {
        block_type: first,
        total_size: l,
        dimension_ok: 3 * k >= l,
        // dim(V' ∩ φV') = dim V' + dim φV' - dim(V' + φV')
        image_disjoint: k + image_rank == joint_rank,
        injective: image_rank == k,
        subspace,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountingCase {
    /// Blocks of type 1, 5 or 6 dominate; `m_1 = floor(m / 54)`.
    One,
    /// Blocks of type 2, 3 or 4 dominate; `m_2 = floor(m / 18)`.
    Two,
}

impl CountingCase {
    pub fn number(self) -> u8 {
        match self {
            CountingCase::One => 1,
            CountingCase::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(CountingCase::One),
            2 => Ok(CountingCase::Two),
            _ => Err(Error::Parse(format!("case must be 1 or 2, got {n}"))),
        }
    }

    fn divisor(self) -> u64 {
        match self {
            CountingCase::One => 54,
            CountingCase::Two => 18,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdReport {
    pub kind: FormKind,
    pub q: usize,
    pub case: CountingCase,
    pub m: u64,
    /// `m_1` or `m_2`.
    pub sub_dim: u64,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub satisfied: bool,
}

fn check_odd_q(q: usize) -> Result<()> {
    if q.is_multiple_of(2) {
        return Err(Error::EvenQ(q));
    }
    if q < 3 {
        return Err(Error::QTooSmall(q));
    }
    Ok(())
}

/// Dimension of the space of forms of arity `q` on `Q^n`.
fn form_space_dim(kind: FormKind, n: u64, q: u64) -> BigUint {
    match kind {
        FormKind::Skew => binomial(n, q),
        FormKind::Symmetric if n == 0 => BigUint::zero(),
        FormKind::Symmetric => binomial(n + q - 1, q),
    }
}

/// Evaluates the parameter-count inequality of the given case exactly.
///
/// Case 1: `m² + D(m) - D(m_1) < D(m)`;
/// case 2: `m² + m_2 + (m - m_2) m_2 + D(m) - D(m_2) < D(m)`,
/// with `D(n)` the dimension of the form space on `Q^n`.
pub fn threshold_check(kind: FormKind, q: usize, m: u64, case: CountingCase) -> Result<ThresholdReport> {
    check_odd_q(q)?;
    let sub_dim = m / case.divisor();
    let total = form_space_dim(kind, m, q as u64);
    let sub = form_space_dim(kind, sub_dim, q as u64);
    let m_big = BigUint::from(m);
    let mut lhs = &m_big * &m_big + &total - &sub;
    if case == CountingCase::Two {
        let s = BigUint::from(sub_dim);
        lhs += &s + BigUint::from(m - sub_dim) * &s;
    }
    Ok(ThresholdReport {
        kind,
        q,
        case,
        m,
        sub_dim,
        satisfied: lhs < total,
        lhs,
        rhs: total,
    })
}

fn both_cases(kind: FormKind, q: usize, m: u64) -> Result<bool> {
    Ok(threshold_check(kind, q, m, CountingCase::One)?.satisfied
        && threshold_check(kind, q, m, CountingCase::Two)?.satisfied)
}

/// Smallest `m` from which both counting inequalities hold for every larger
/// dimension as well.
///
/// Within a run of `m` sharing the same `floor(m / d)` the left side only
/// grows, so each inequality first fails at the end of a run. The search
/// therefore runs over run indices `j` (testing the last `m` of run `j`),
/// by exponential bracketing and bisection, and the answer is the start of
/// the first fully satisfied run. Just below the first such run the
/// inequality can hold sporadically, so the first `m` where it holds need
/// not be the stable threshold.
pub fn min_sufficient_m(kind: FormKind, q: usize) -> Result<u64> {
    check_odd_q(q)?;
    let stable = |case: CountingCase| -> Result<u64> {
        let d = case.divisor();
        let run_ok = |j: u64| -> Result<bool> {
            Ok(threshold_check(kind, q, d * j + d - 1, case)?.satisfied)
        };
        let mut hi = 1u64;
        while !run_ok(hi)? {
            hi *= 2;
        }
        let mut lo = hi / 2;
        // invariant: run lo fails (or lo == 0 unchecked), run hi holds
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if run_ok(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if lo == 0 && run_ok(0)? {
            return Ok(0);
        }
        Ok(d * hi)
    };
    let m = stable(CountingCase::One)?.max(stable(CountingCase::Two)?);
    debug_assert!(both_cases(kind, q, m)?);
    debug_assert!(m == 0 || !both_cases(kind, q, m - 1)?);
    Ok(m)
}

/// `ceil(max(0, β_p - β_{p+1}(W)) / 2)`.
pub fn required_witness_dim(beta_p: u64, beta_p1_w: u64) -> u64 {
    beta_p.saturating_sub(beta_p1_w).div_ceil(2)
}

/// Writes a composite `n` (not a power of two) as `p * q` with `q` its
/// smallest odd prime factor, so `p >= 2` and `q >= 3` is odd.
pub fn factor_composite(n: u64) -> Result<(u64, u64)> {
    let smallest_factor = |n: u64| (2..).take_while(|d| d * d <= n).find(|d| n.is_multiple_of(*d));
    if n < 4 || smallest_factor(n).is_none() {
        return Err(Error::NotComposite(n));
    }
    if n.is_power_of_two() {
        return Err(Error::PowerOfTwo(n));
    }
    let mut odd = n;
    while odd.is_multiple_of(2) {
        odd /= 2;
    }
    let q = smallest_factor(odd).unwrap_or(odd);
    Ok((n / q, q))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObstructionVerdict {
    /// Some supplied witness satisfies all the necessary conditions.
    Satisfiable { witness: usize },
    /// No supplied witness passes; this certifies nothing either way.
    NotCertified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub beta_p: u64,
    pub beta_p1_w: u64,
    pub required_min_dim: u64,
    pub witness_results: Vec<WitnessVerdict>,
    pub verdict: ObstructionVerdict,
}

/// Checks each witness `(V, φ)` against the necessary conditions for a flat
/// embedding: `dim V >= (β_p - β_{p+1}(W)) / 2`, `φ` fixed-point free and
/// `x_1 ∪ .. ∪ x_q = φx_1 ∪ .. ∪ φx_q` on `V`, where the `q`-fold cup
/// product on `H^p = Q^m` is the form `F`.
pub fn obstruction_report(
    form: &MultilinearForm,
    beta_p1_w: u64,
    witnesses: &[SubspaceMap],
) -> Result<ObstructionReport> {
    let beta_p = form.m() as u64;
    let required = required_witness_dim(beta_p, beta_p1_w);
    let witness_results = witnesses
        .iter()
        .map(|sm| {
            let ok = sm.dim() as u64 >= required;
            let reason = format!("dim V = {} < required {required}", sm.dim());
            check_witness(form, sm, ok, reason)
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = match witness_results.iter().position(WitnessVerdict::valid) {
        Some(witness) => ObstructionVerdict::Satisfiable { witness },
        None => ObstructionVerdict::NotCertified,
    };
    Ok(ObstructionReport {
        beta_p,
        beta_p1_w,
        required_min_dim: required,
        witness_results,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_frac, from_int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> Rational {
        from_int(n)
    }

    fn random_form(kind: FormKind, m: usize, arity: usize, rng: &mut ChaCha8Rng) -> MultilinearForm {
        let comps = canonical_tuples(kind, m, arity)
            .into_iter()
            .map(|t| (t.0, from_frac(rng.gen_range(-3..=3), rng.gen_range(1..=3))));
        MultilinearForm::from_components(kind, m, arity, comps).unwrap()
    }

    #[test]
    fn fixed_point_examples() {
        assert!(is_fixed_point_free(&SubspaceMap::negation(3)).unwrap());
        let id = SubspaceMap::new(2, vec![vec![q(1), q(0)]], MatrixQ::from_i64_rows(&[vec![1], vec![0]]).unwrap())
            .unwrap();
        assert!(!is_fixed_point_free(&id).unwrap());
        let shear = SubspaceMap::new(2, vec![vec![q(1), q(0)]], MatrixQ::from_i64_rows(&[vec![1], vec![1]]).unwrap())
            .unwrap();
        assert!(is_fixed_point_free(&shear).unwrap());
        let degenerate = SubspaceMap::new(
            2,
            vec![vec![q(1), q(1)], vec![q(2), q(2)]],
            MatrixQ::zeros(2, 2),
        )
        .unwrap();
        assert_eq!(is_fixed_point_free(&degenerate), Err(Error::DegenerateBasis));
    }

    #[test]
    fn negation_witness_by_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let even = random_form(FormKind::Skew, 4, 2, &mut rng);
        assert!(verify_special_witness(&even, &SubspaceMap::negation(4)).unwrap().valid());
        let odd = MultilinearForm::from_components(FormKind::Skew, 3, 3, [(vec![1, 2, 3], q(2))]).unwrap();
        let v = verify_special_witness(&odd, &SubspaceMap::negation(3)).unwrap();
        assert_eq!(v.failed, Some(WitnessClause::Invariance));
    }

    #[test]
    fn zero_form_accepts_any_free_witness() {
        let f = MultilinearForm::zero(FormKind::Symmetric, 6, 3).unwrap();
        assert!(verify_special_witness(&f, &SubspaceMap::zero_map(6, 2)).unwrap().valid());
        let v = verify_special_witness(&f, &SubspaceMap::zero_map(6, 1)).unwrap();
        assert_eq!(v.failed, Some(WitnessClause::Dimension));
        let wrong = SubspaceMap::zero_map(5, 2);
        assert!(matches!(
            verify_special_witness(&f, &wrong),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rebasing_keeps_verdict() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_form(FormKind::Symmetric, 3, 4, &mut rng);
        let w = SubspaceMap::negation(3);
        let change = MatrixQ::from_i64_rows(&[vec![1, 2, 0], vec![0, 1, 3], vec![1, 0, 1]]).unwrap();
        let moved = w.rebased(&change).unwrap();
        assert_eq!(
            verify_special_witness(&f, &w).unwrap().valid(),
            verify_special_witness(&f, &moved).unwrap().valid()
        );
        assert!(verify_special_witness(&f, &moved).unwrap().valid());
    }

    #[test]
    fn block_matrices() {
        let j2 = build_block(&BlockSpec::new(5, 2, q(1), None).unwrap());
        assert_eq!(j2, MatrixQ::from_i64_rows(&[vec![1, 1], vec![0, 1]]).unwrap());
        let c1 = build_block(&BlockSpec::new(6, 1, q(3), Some(q(-2))).unwrap());
        assert_eq!(c1, MatrixQ::from_i64_rows(&[vec![3, -2], vec![2, 3]]).unwrap());
        let c2 = build_block(&BlockSpec::new(6, 2, q(0), Some(q(1))).unwrap());
        assert_eq!(
            c2,
            MatrixQ::from_i64_rows(&[
                vec![0, 1, 1, 0],
                vec![-1, 0, 0, 1],
                vec![0, 0, 0, 1],
                vec![0, 0, -1, 0],
            ])
            .unwrap()
        );
        let r = build_block(&BlockSpec::new(2, 1, q(-1), None).unwrap());
        assert_eq!(r, MatrixQ::from_i64_rows(&[vec![-1]]).unwrap());
    }

    #[test]
    fn block_spec_validation() {
        assert!(BlockSpec::new(3, 1, from_frac(1, 2), None).is_err());
        assert!(BlockSpec::new(4, 1, from_frac(1, 2), None).is_ok());
        assert!(BlockSpec::new(4, 1, q(-1), None).is_err());
        assert!(BlockSpec::new(5, 1, q(2), None).is_err());
        assert!(BlockSpec::new(6, 1, q(2), Some(q(0))).is_err());
        assert!(BlockSpec::new(6, 1, q(2), None).is_err());
        assert!(BlockSpec::new(1, 1, q(2), None).is_err());
        assert!(BlockSpec::new(7, 1, q(2), None).is_err());
        assert!(BlockSpec::new(1, 2, q(1), None).is_err());
    }

    #[test]
    fn lemma32_jordan_block() {
        let b = BlockSpec::new(5, 2, q(5), None).unwrap();
        let c = lemma32_subspace(&[b], 3, None).unwrap();
        assert_eq!(c.subspace.basis(), &[vec![q(0), q(1), q(0)]]);
        assert_eq!(c.subspace.image(0), vec![q(1), q(5), q(0)]);
        assert!(c.all_passed());
    }

    #[test]
    fn lemma32_rotation_block() {
        let b = BlockSpec::new(6, 2, q(0), Some(q(1))).unwrap();
        let c = lemma32_subspace(&[b], 4, None).unwrap();
        assert_eq!(c.subspace.dim(), 2);
        assert_eq!(c.subspace.basis()[0], vec![q(0), q(1), q(0), q(0)]);
        assert_eq!(c.subspace.basis()[1], vec![q(0), q(0), q(0), q(1)]);
        assert!(c.all_passed());
    }

    #[test]
    fn lemma32_unipotent_needs_extension() {
        let blocks = vec![BlockSpec::Unipotent; 3];
        let bare = lemma32_subspace(&blocks, 5, None).unwrap();
        assert_eq!(bare.subspace.dim(), 3);
        assert!(bare.dimension_ok);
        assert!(!bare.image_disjoint);
        // φ(v) = v + Ev with E of rank 2 < 3 still fixes a vector
        let low = MatrixQ::from_i64_rows(&[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert!(!lemma32_subspace(&blocks, 5, Some(&low)).unwrap().image_disjoint);
        let ext = MatrixQ::from_i64_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let good = lemma32_subspace(&blocks, 6, Some(&ext)).unwrap();
        assert!(good.all_passed());
        assert!(is_fixed_point_free(&good.subspace).unwrap());
    }

    #[test]
    fn lemma32_rejects_bad_input() {
        let mixed = vec![BlockSpec::Unipotent, BlockSpec::new(5, 2, q(0), None).unwrap()];
        assert_eq!(lemma32_subspace(&mixed, 5, None), Err(Error::MixedTypes(1, 5)));
        assert!(lemma32_subspace(&[BlockSpec::Reflection], 2, None).is_err());
        assert!(lemma32_subspace(&[BlockSpec::new(5, 4, q(0), None).unwrap()], 3, None).is_err());
    }

    #[test]
    fn threshold_examples() {
        let r = threshold_check(FormKind::Skew, 3, 1000, CountingCase::One).unwrap();
        assert_eq!(r.sub_dim, 18);
        assert!(!r.satisfied);
        let r = threshold_check(FormKind::Skew, 3, 1_000_000, CountingCase::One).unwrap();
        assert_eq!(r.sub_dim, 18518);
        assert!(r.satisfied);
        let r = threshold_check(FormKind::Skew, 3, 54, CountingCase::One).unwrap();
        assert_eq!(r.sub_dim, 1);
        assert!(!r.satisfied);
        assert_eq!(threshold_check(FormKind::Skew, 4, 10, CountingCase::One), Err(Error::EvenQ(4)));
        assert_eq!(threshold_check(FormKind::Skew, 1, 10, CountingCase::One), Err(Error::QTooSmall(1)));
    }

    #[test]
    fn case_one_reduces_to_square_versus_binomial() {
        for m in [100u64, 5000, 123_456, 2_000_000] {
            let r = threshold_check(FormKind::Skew, 3, m, CountingCase::One).unwrap();
            assert_eq!(r.satisfied, BigUint::from(m * m) < binomial(m / 54, 3));
            let r = threshold_check(FormKind::Symmetric, 3, m, CountingCase::One).unwrap();
            assert_eq!(r.satisfied, BigUint::from(m * m) < binomial(m / 54 + 2, 3));
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(required_witness_dim(10, 4), 3);
        assert_eq!(required_witness_dim(4, 10), 0);
        assert_eq!(required_witness_dim(7, 0), 4);
        assert_eq!(factor_composite(12).unwrap(), (4, 3));
        assert_eq!(factor_composite(9).unwrap(), (3, 3));
        assert_eq!(factor_composite(10).unwrap(), (2, 5));
        assert_eq!(factor_composite(35).unwrap(), (7, 5));
        assert_eq!(factor_composite(16), Err(Error::PowerOfTwo(16)));
        assert_eq!(factor_composite(4), Err(Error::PowerOfTwo(4)));
        assert_eq!(factor_composite(13), Err(Error::NotComposite(13)));
        assert_eq!(factor_composite(2), Err(Error::NotComposite(2)));
        assert_eq!(factor_composite(1), Err(Error::NotComposite(1)));
    }

    #[test]
    fn report_verdicts() {
        let zero = MultilinearForm::zero(FormKind::Skew, 6, 3).unwrap();
        let r = obstruction_report(&zero, 2, &[SubspaceMap::zero_map(6, 2)]).unwrap();
        assert_eq!(r.required_min_dim, 2);
        assert_eq!(r.verdict, ObstructionVerdict::Satisfiable { witness: 0 });

        let f = MultilinearForm::from_components(FormKind::Skew, 3, 3, [(vec![1, 2, 3], q(1))]).unwrap();
        let r = obstruction_report(&f, 0, &[SubspaceMap::negation(3)]).unwrap();
        assert_eq!(r.verdict, ObstructionVerdict::NotCertified);
        assert_eq!(r.witness_results[0].failed, Some(WitnessClause::Invariance));

        let even = MultilinearForm::from_components(FormKind::Symmetric, 3, 2, [(vec![1, 2], q(1))]).unwrap();
        let r = obstruction_report(&even, 1, &[SubspaceMap::zero_map(3, 0), SubspaceMap::negation(3)]).unwrap();
        assert_eq!(r.verdict, ObstructionVerdict::Satisfiable { witness: 1 });
        assert_eq!(r.witness_results[0].failed, Some(WitnessClause::Dimension));
    }
}
