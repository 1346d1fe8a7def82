//! The Poincaré duality algebra attached to a multilinear form.
//!
//! For `q = 2r + 1` odd and a form `F` of arity `q` on `V = Q^m`, the algebra
//! lives in degrees `0, p, 2p, .., qp`:
//!
//! ```text
//! A_{sp} = Λ^s V            for 0 <= s <= r
//! A_{sp} = (Λ^{q-s} V)*     for r+1 <= s <= q
//! ```
//!
//! with `Λ` replaced by `Sym` when `p` is even. Products are
//!
//! ```text
//! s+t <= r              u ∪ v = u ∧ v
//! s,t <= r < s+t        (u ∪ v)(w) = F(u ∧ v ∧ w)
//! s <= r < t            (u ∪ v)(w) = v(w ∧ u)
//! t <= r < s            (u ∪ v)(w) = u(v ∧ w)
//! ```
//!
//! and the top grade `(Λ^0 V)* = Q*` is identified with `Q` by `w ↦ w(1)`.
//!
//! Bases are canonical index tuples; dual grades use the dual basis in the
//! same order. Structure constants are stored densely per pair of grades.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, MatrixQ};
use crate::multilinear::{canonical_tuples, canonicalize_unchecked, FormKind, IndexTuple, MultilinearForm};
use crate::rational::Rational;

/// Basis of one grade `A_{sp}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradeBasis {
    /// `true` when the grade is a dual space `(Λ^{q-s} V)*`.
    pub dual: bool,
    pub tuples: Vec<IndexTuple>,
}

impl GradeBasis {
    pub fn dim(&self) -> usize {
        self.tuples.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    kind: FormKind,
    m: usize,
    p: usize,
    q: usize,
    grades: Vec<GradeBasis>,
    tables: BTreeMap<(usize, usize), Vec<Rational>>,
}

/// A homogeneous element: coordinates in the basis of `A_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub degree: usize,
    pub coords: Vec<Rational>,
}

impl AlgebraElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Degrees of the basis elements involved.
    pub degrees: Vec<usize>,
    /// Their positions in the respective grade bases.
    pub basis: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Counterexample),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// One row of a [`DualityReport`]: the pairing `A_i x A_{n-i} -> A_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityEntry {
    pub degree: usize,
    pub pairing: MatrixQ,
    pub rank: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub top_is_one_dimensional: bool,
    pub entries: Vec<DualityEntry>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.top_is_one_dimensional && self.entries.iter().all(|e| e.passed)
    }
}

impl GradedAlgebra {
    /// Builds the algebra for `F` with grading step `p`.
    pub fn build(form: &MultilinearForm, p: usize) -> Result<Self> {
        let q = form.q();
        if q.is_multiple_of(2) {
            return Err(Error::EvenQ(q));
        }
        if q < 3 {
            return Err(Error::QTooSmall(q));
        }
        if p == 0 {
            return Err(Error::InvalidShape("grading step p must be positive".into()));
        }
        let expected = if p % 2 == 1 { FormKind::Skew } else { FormKind::Symmetric };
        if form.kind() != expected {
            return Err(Error::WrongKindForParity {
                p,
                expected: expected.as_str(),
            });
        }
        let kind = form.kind();
        let m = form.m();
        let r = q / 2;

        let grades: Vec<GradeBasis> = (0..=q)
            .map(|s| {
                let dual = s > r;
                let len = if dual { q - s } else { s };
                GradeBasis {
                    dual,
                    tuples: canonical_tuples(kind, m, len),
                }
            })
            .collect();
        let lookup: Vec<HashMap<&IndexTuple, usize>> = grades
            .iter()
            .map(|g| g.tuples.iter().enumerate().map(|(i, t)| (t, i)).collect())
            .collect();
        let concat = |parts: &[&IndexTuple]| -> Vec<usize> {
            parts.iter().flat_map(|t| t.0.iter().copied()).collect()
        };

        let mut tables = BTreeMap::new();
        for s in 0..=q {
            for t in 0..=q - s {
                let u = s + t;
                let (ds, dt, du) = (grades[s].dim(), grades[t].dim(), grades[u].dim());
                let mut table = vec![Rational::zero(); ds * dt * du];
                let at = |a: usize, b: usize, c: usize| (a * dt + b) * du + c;
                let sign = |k: i8| -> Rational {
                    if k > 0 { Rational::one() } else { -Rational::one() }
                };
                if s <= r && t <= r && u <= r {
                    // u ∧ v
                    for (a, i) in grades[s].tuples.iter().enumerate() {
                        for (b, j) in grades[t].tuples.iter().enumerate() {
                            let (k, sg) = canonicalize_unchecked(kind, &concat(&[i, j]));
                            if sg != 0 {
                                table[at(a, b, lookup[u][&k])] = sign(sg);
                            }
                        }
                    }
                } else if s <= r && t <= r {
                    // (u ∪ v)(w) = F(u ∧ v ∧ w)
                    for (a, i) in grades[s].tuples.iter().enumerate() {
                        for (b, j) in grades[t].tuples.iter().enumerate() {
                            for (c, k) in grades[u].tuples.iter().enumerate() {
                                table[at(a, b, c)] = form.basis_value(&concat(&[i, j, k]))?;
                            }
                        }
                    }
                } else if s <= r {
                    // (u ∪ v)(w) = v(w ∧ u)
                    for (a, i) in grades[s].tuples.iter().enumerate() {
                        for (c, k) in grades[u].tuples.iter().enumerate() {
                            let (l, sg) = canonicalize_unchecked(kind, &concat(&[k, i]));
                            if sg != 0 {
                                table[at(a, lookup[t][&l], c)] = sign(sg);
                            }
                        }
                    }
                } else if t <= r {
                    // (u ∪ v)(w) = u(v ∧ w)
                    for (b, j) in grades[t].tuples.iter().enumerate() {
                        for (c, k) in grades[u].tuples.iter().enumerate() {
                            let (l, sg) = canonicalize_unchecked(kind, &concat(&[j, k]));
                            if sg != 0 {
                                table[at(lookup[s][&l], b, c)] = sign(sg);
                            }
                        }
                    }
                }
                // s, t > r cannot happen with s + t <= q = 2r + 1.
                tables.insert((s, t), table);
            }
        }

        Ok(Self {
            kind,
            m,
            p,
            q,
            grades,
            tables,
        })
    }

    /// Assembles an algebra from raw parts without recomputing anything.
    ///
    /// Only shapes are validated; the algebraic properties are left to the
    /// verifiers, which is what makes hand-edited dumps checkable.
    pub fn from_parts(
        kind: FormKind,
        m: usize,
        p: usize,
        q: usize,
        grades: Vec<GradeBasis>,
        tables: BTreeMap<(usize, usize), Vec<Rational>>,
    ) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidShape("p and q must be positive".into()));
        }
        if grades.len() != q + 1 {
            return Err(Error::InvalidShape(format!(
                "expected {} grades, got {}",
                q + 1,
                grades.len()
            )));
        }
        for (&(s, t), table) in &tables {
            if s + t > q {
                return Err(Error::InvalidShape(format!("table ({s}, {t}) exceeds top grade")));
            }
            let expected = grades[s].dim() * grades[t].dim() * grades[s + t].dim();
            if table.len() != expected {
                return Err(Error::InvalidShape(format!(
                    "table ({s}, {t}) has {} entries, expected {expected}",
                    table.len()
                )));
            }
        }
        let mut tables = tables;
        for s in 0..=q {
            for t in 0..=q - s {
                let len = grades[s].dim() * grades[t].dim() * grades[s + t].dim();
                tables.entry((s, t)).or_insert_with(|| vec![Rational::zero(); len]);
            }
        }
        Ok(Self {
            kind,
            m,
            p,
            q,
            grades,
            tables,
        })
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Top degree `n = pq`.
    pub fn top_degree(&self) -> usize {
        self.p * self.q
    }

    /// Bases indexed by step `s` (degree `s * p`).
    pub fn grades(&self) -> &[GradeBasis] {
        &self.grades
    }

    /// Dense structure constants for `A_{sp} x A_{tp} -> A_{(s+t)p}`, laid
    /// out as `[a][b][c]`.
    pub fn table(&self, s: usize, t: usize) -> Option<&[Rational]> {
        self.tables.get(&(s, t)).map(Vec::as_slice)
    }

    pub fn tables(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<Rational>)> {
        self.tables.iter()
    }

    /// Mutable access to one structure constant (for building negative
    /// controls).
    pub fn structure_constant_mut(
        &mut self,
        s: usize,
        t: usize,
        a: usize,
        b: usize,
        c: usize,
    ) -> Option<&mut Rational> {
        let (dt, du) = (self.grades.get(t)?.dim(), self.grades.get(s + t)?.dim());
        self.tables.get_mut(&(s, t))?.get_mut((a * dt + b) * du + c)
    }

    /// Dimension of `A_degree` (zero off the grid of multiples of `p`).
    pub fn grade_dim(&self, degree: usize) -> usize {
        match self.step(degree) {
            Some(s) => self.grades[s].dim(),
            None => 0,
        }
    }

    fn step(&self, degree: usize) -> Option<usize> {
        (degree.is_multiple_of(self.p) && degree <= self.top_degree()).then_some(degree / self.p)
    }

    fn degree_sign(&self, s: usize, t: usize) -> bool {
        // (-1)^{deg a * deg b} is negative iff both degrees are odd
        (s * self.p) % 2 == 1 && (t * self.p) % 2 == 1
    }

    pub fn unit(&self) -> AlgebraElement {
        AlgebraElement {
            degree: 0,
            coords: vec![Rational::one(); self.grades[0].dim()],
        }
    }

    pub fn basis_element(&self, degree: usize, index: usize) -> Result<AlgebraElement> {
        let s = self.step(degree).ok_or(Error::DegreeMismatch(degree))?;
        let dim = self.grades[s].dim();
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: index,
            });
        }
        let mut coords = vec![Rational::zero(); dim];
        coords[index] = Rational::one();
        Ok(AlgebraElement { degree, coords })
    }

    /// `e_a ∪ e_b` for basis elements of `A_{sp}` and `A_{tp}` (`s + t <= q`).
    fn basis_product(&self, s: usize, t: usize, a: usize, b: usize) -> &[Rational] {
        let (dt, du) = (self.grades[t].dim(), self.grades[s + t].dim());
        let start = (a * dt + b) * du;
        &self.tables[&(s, t)][start..start + du]
    }

    fn product_coords(&self, s: usize, t: usize, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let du = self.grades[s + t].dim();
        let mut out = vec![Rational::zero(); du];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let coeff = xa * yb;
                for (o, c) in out.iter_mut().zip(self.basis_product(s, t, a, b)) {
                    if !c.is_zero() {
                        *o += &coeff * c;
                    }
                }
            }
        }
        out
    }

    pub fn cup(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        let s = self.step(x.degree).ok_or(Error::DegreeMismatch(x.degree))?;
        let t = self.step(y.degree).ok_or(Error::DegreeMismatch(y.degree))?;
        for (e, st) in [(x, s), (y, t)] {
            if e.coords.len() != self.grades[st].dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.grades[st].dim(),
                    got: e.coords.len(),
                });
            }
        }
        let degree = x.degree + y.degree;
        if s + t > self.q {
            return Ok(AlgebraElement {
                degree,
                coords: Vec::new(),
            });
        }
        Ok(AlgebraElement {
            degree,
            coords: self.product_coords(s, t, &x.coords, &y.coords),
        })
    }

    /// `a ∪ b = (-1)^{deg a deg b} b ∪ a` over all pairs of basis elements.
    pub fn verify_graded_commutativity(&self) -> Verdict {
        for s in 0..=self.q {
            for t in 0..=self.q - s {
                let negate = self.degree_sign(s, t);
                for a in 0..self.grades[s].dim() {
                    for b in 0..self.grades[t].dim() {
                        let ab = self.basis_product(s, t, a, b);
                        let ba = self.basis_product(t, s, b, a);
                        let ok = ab
                            .iter()
                            .zip(ba)
                            .all(|(x, y)| if negate { *x == -y } else { x == y });
                        if !ok {
                            return Verdict::Fail(Counterexample {
                                degrees: vec![s * self.p, t * self.p],
                                basis: vec![a, b],
                                detail: format!(
                                    "e{a} (deg {}) and e{b} (deg {}) do not graded-commute",
                                    s * self.p,
                                    t * self.p
                                ),
                            });
                        }
                    }
                }
            }
        }
        Verdict::Pass
    }

    /// `(a ∪ b) ∪ c = a ∪ (b ∪ c)` over all triples of basis elements.
    pub fn verify_associativity(&self) -> Verdict {
        let q = self.q;
        for s in 0..=q {
            for t in 0..=q - s {
                for k in 0..=q - s - t {
                    let du = self.grades[s + t + k].dim();
                    for a in 0..self.grades[s].dim() {
                        for b in 0..self.grades[t].dim() {
                            let ab = self.basis_product(s, t, a, b);
                            for c in 0..self.grades[k].dim() {
                                let mut left = vec![Rational::zero(); du];
                                for (x, coeff) in ab.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                                    for (o, v) in left.iter_mut().zip(self.basis_product(s + t, k, x, c)) {
                                        if !v.is_zero() {
                                            *o += coeff * v;
                                        }
                                    }
                                }
                                let bc = self.basis_product(t, k, b, c);
                                let mut right = vec![Rational::zero(); du];
                                for (y, coeff) in bc.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                                    for (o, v) in right.iter_mut().zip(self.basis_product(s, t + k, a, y)) {
                                        if !v.is_zero() {
                                            *o += coeff * v;
                                        }
                                    }
                                }
                                if left != right {
                                    return Verdict::Fail(Counterexample {
                                        degrees: vec![s * self.p, t * self.p, k * self.p],
                                        basis: vec![a, b, c],
                                        detail: format!("(e{a} e{b}) e{c} != e{a} (e{b} e{c})"),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Verdict::Pass
    }

    /// `A_0 = Q` and its generator is a two-sided unit.
    pub fn verify_unit(&self) -> Verdict {
        if self.grades[0].dim() != 1 {
            return Verdict::Fail(Counterexample {
                degrees: vec![0],
                basis: vec![],
                detail: format!("A_0 has dimension {}", self.grades[0].dim()),
            });
        }
        for s in 0..=self.q {
            for a in 0..self.grades[s].dim() {
                let mut e = vec![Rational::zero(); self.grades[s].dim()];
                e[a] = Rational::one();
                if self.basis_product(0, s, 0, a) != e.as_slice()
                    || self.basis_product(s, 0, a, 0) != e.as_slice()
                {
                    return Verdict::Fail(Counterexample {
                        degrees: vec![0, s * self.p],
                        basis: vec![0, a],
                        detail: format!("1 does not act as the identity on e{a}"),
                    });
                }
            }
        }
        Verdict::Pass
    }

    /// Checks that every pairing `A_i x A_{n-i} -> A_n = Q` is perfect.
    pub fn verify_poincare_duality(&self) -> DualityReport {
        let q = self.q;
        let top_is_one_dimensional = self.grades[q].dim() == 1;
        let entries = (0..=q)
            .map(|s| {
                let (rows, cols) = (self.grades[s].dim(), self.grades[q - s].dim());
                let mut pairing = MatrixQ::zeros(rows, cols);
                if top_is_one_dimensional {
                    for a in 0..rows {
                        for b in 0..cols {
                            pairing[(a, b)] = self.basis_product(s, q - s, a, b)[0].clone();
                        }
                    }
                }
                let rank = linalg::rank(&pairing);
                DualityEntry {
                    degree: s * self.p,
                    passed: top_is_one_dimensional && rows == cols && rank == rows,
                    pairing,
                    rank,
                }
            })
            .collect();
        DualityReport {
            top_is_one_dimensional,
            entries,
        }
    }

    /// `F(v_1, .., v_q) = v_1 ∪ .. ∪ v_q` on every canonical tuple of basis
    /// vectors of `A_p = V`, reading `A_{pq}` as `Q`.
    pub fn verify_condition_ii(&self, form: &MultilinearForm) -> Verdict {
        let q = self.q;
        let fail = |detail: String| {
            Verdict::Fail(Counterexample {
                degrees: vec![self.p],
                basis: vec![],
                detail,
            })
        };
        if form.q() != q || form.kind() != self.kind || self.grades[1].dim() != form.m() {
            return fail("form does not match the algebra's shape".into());
        }
        if self.grades[q].dim() != 1 {
            return fail("top grade is not one-dimensional".into());
        }
        for tuple in canonical_tuples(self.kind, form.m(), q) {
            let idx = tuple.as_slice();
            let mut acc = vec![Rational::zero(); self.grades[1].dim()];
            acc[idx[0] - 1] = Rational::one();
            for (step, &i) in idx.iter().enumerate().skip(1) {
                let mut e = vec![Rational::zero(); self.grades[1].dim()];
                e[i - 1] = Rational::one();
                acc = self.product_coords(step, 1, &acc, &e);
            }
            let expected = form.component(&tuple);
            if acc[0] != expected {
                return Verdict::Fail(Counterexample {
                    degrees: vec![self.p; q],
                    basis: idx.iter().map(|i| i - 1).collect(),
                    detail: format!("product of {idx:?} is {}, F gives {expected}", acc[0]),
                });
            }
        }
        Verdict::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::dim_space;
    use crate::rational::{from_frac, from_int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_form(kind: FormKind, m: usize, q: usize, rng: &mut ChaCha8Rng) -> MultilinearForm {
        let comps = canonical_tuples(kind, m, q)
            .into_iter()
            .map(|t| (t.0, from_frac(rng.gen_range(-4..=4), rng.gen_range(1..=3))));
        MultilinearForm::from_components(kind, m, q, comps).unwrap()
    }

    fn kind_for(p: usize) -> FormKind {
        if p % 2 == 1 { FormKind::Skew } else { FormKind::Symmetric }
    }

    fn cube_form() -> MultilinearForm {
        MultilinearForm::from_components(FormKind::Symmetric, 2, 3, [(vec![1, 1, 1], from_int(1))])
            .unwrap()
    }

    #[test]
    fn grade_dimensions_of_small_example() {
        let a = GradedAlgebra::build(&cube_form(), 2).unwrap();
        let dims: Vec<usize> = (0..=6).map(|d| a.grade_dim(d)).collect();
        assert_eq!(dims, vec![1, 0, 2, 0, 2, 0, 1]);
        assert_eq!(a.top_degree(), 6);
        assert_eq!(a.grade_dim(7), 0);
    }

    #[test]
    fn cube_of_generator() {
        let a = GradedAlgebra::build(&cube_form(), 2).unwrap();
        let e1 = a.basis_element(2, 0).unwrap();
        let sq = a.cup(&e1, &e1).unwrap();
        assert_eq!(sq.degree, 4);
        assert_eq!(sq.coords, vec![from_int(1), from_int(0)]);
        let cube = a.cup(&sq, &e1).unwrap();
        assert_eq!(cube.degree, 6);
        assert_eq!(cube.coords, vec![from_int(1)]);
    }

    #[test]
    fn unit_and_overflow() {
        let a = GradedAlgebra::build(&cube_form(), 2).unwrap();
        let x = AlgebraElement {
            degree: 4,
            coords: vec![from_frac(2, 3), from_int(-1)],
        };
        assert_eq!(a.cup(&a.unit(), &x).unwrap(), x);
        assert_eq!(a.cup(&x, &a.unit()).unwrap(), x);
        let big = a.cup(&x, &x).unwrap();
        assert_eq!(big.degree, 8);
        assert!(big.is_zero());
        assert_eq!(a.cup(&x, &a.basis_element(2, 0).unwrap()).unwrap().degree, 6);
        let odd = AlgebraElement { degree: 3, coords: vec![] };
        assert_eq!(a.cup(&odd, &x), Err(Error::DegreeMismatch(3)));
    }

    #[test]
    fn odd_square_vanishes() {
        let f = MultilinearForm::zero(FormKind::Skew, 1, 3).unwrap();
        let a = GradedAlgebra::build(&f, 3).unwrap();
        assert_eq!(a.grade_dim(3), 1);
        assert_eq!(a.grade_dim(6), 1);
        let v = a.basis_element(3, 0).unwrap();
        assert!(a.cup(&v, &v).unwrap().is_zero());
    }

    #[test]
    fn build_preconditions() {
        let even_q = MultilinearForm::zero(FormKind::Symmetric, 2, 4).unwrap();
        assert_eq!(GradedAlgebra::build(&even_q, 2), Err(Error::EvenQ(4)));
        let q1 = MultilinearForm::zero(FormKind::Symmetric, 2, 1).unwrap();
        assert_eq!(GradedAlgebra::build(&q1, 2), Err(Error::QTooSmall(1)));
        assert!(matches!(
            GradedAlgebra::build(&cube_form(), 3),
            Err(Error::WrongKindForParity { p: 3, .. })
        ));
    }

    #[test]
    fn zero_form_duality_is_evaluation() {
        let f = MultilinearForm::zero(FormKind::Symmetric, 2, 3).unwrap();
        let a = GradedAlgebra::build(&f, 2).unwrap();
        let report = a.verify_poincare_duality();
        assert!(report.passed());
        assert_eq!(report.entries[1].pairing, MatrixQ::identity(2));
        assert!(a.verify_condition_ii(&f).passed());
    }

    #[test]
    fn grade_dimensions_follow_binomials() {
        for (p, q, m) in [(2, 3, 3), (3, 5, 3), (2, 5, 2), (1, 3, 4)] {
            let kind = kind_for(p);
            let f = MultilinearForm::zero(kind, m, q).unwrap();
            let a = GradedAlgebra::build(&f, p).unwrap();
            let r = q / 2;
            for s in 0..=q {
                let expected = if s <= r { dim_space(kind, m, s) } else { dim_space(kind, m, q - s) };
                assert_eq!(a.grade_dim(s * p), expected);
            }
        }
    }

    #[test]
    fn random_algebras_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, q, m) in [(3, 3, 2), (2, 3, 3), (3, 5, 3), (2, 5, 2)] {
            let f = random_form(kind_for(p), m, q, &mut rng);
            let a = GradedAlgebra::build(&f, p).unwrap();
            assert!(a.verify_graded_commutativity().passed(), "comm {p} {q} {m}");
            assert!(a.verify_associativity().passed(), "assoc {p} {q} {m}");
            assert!(a.verify_unit().passed());
            assert!(a.verify_poincare_duality().passed());
            assert!(a.verify_condition_ii(&f).passed());
        }
    }

    #[test]
    fn odd_degree_signs_appear() {
        // p odd: two degree-p generators anticommute
        let f = MultilinearForm::from_components(FormKind::Skew, 3, 3, [(vec![1, 2, 3], from_int(1))])
            .unwrap();
        let a = GradedAlgebra::build(&f, 3).unwrap();
        let e1 = a.basis_element(3, 0).unwrap();
        let e2 = a.basis_element(3, 1).unwrap();
        let x = a.cup(&e1, &e2).unwrap();
        let y = a.cup(&e2, &e1).unwrap();
        assert!(!x.is_zero());
        assert_eq!(x.coords, y.coords.iter().map(|c| -c).collect::<Vec<_>>());
    }

    #[test]
    fn corrupted_constant_is_caught() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = random_form(FormKind::Skew, 3, 3, &mut rng);
        assert!(!f.is_zero());
        let mut a = GradedAlgebra::build(&f, 3).unwrap();
        *a.structure_constant_mut(1, 2, 0, 0, 0).unwrap() += from_int(1);
        match a.verify_graded_commutativity() {
            Verdict::Fail(c) => assert_eq!(c.degrees, vec![3, 6]),
            Verdict::Pass => panic!("corruption not detected"),
        }
        assert!(!a.verify_associativity().passed());
    }

    #[test]
    fn dimension_mismatch_breaks_duality() {
        let f = cube_form();
        let a = GradedAlgebra::build(&f, 2).unwrap();
        let mut grades = a.grades().to_vec();
        grades[2].tuples.pop();
        let tables = a
            .tables()
            .filter(|((s, t), _)| *s != 2 && *t != 2 && s + t != 2)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        let broken = GradedAlgebra::from_parts(a.kind(), 2, 2, 3, grades, tables).unwrap();
        let report = broken.verify_poincare_duality();
        assert!(!report.passed());
        assert!(!report.entries[1].passed);
    }
}
