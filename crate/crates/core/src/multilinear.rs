//! Skew-symmetric and symmetric multilinear forms on `Q^m`.
//!
//! A form of arity `q` is stored by its components `F_{i1..iq} =
//! F(e_{i1}, .., e_{iq})` on canonical index tuples: strictly increasing for
//! skew forms, weakly increasing for symmetric ones. Indices are 1-based.
//! Absent components are zero.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial_usize;
use crate::error::{Error, Result};
use crate::linalg::{self, MatrixQ};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Skew,
    Symmetric,
}

impl FormKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FormKind::Skew => "skew",
            FormKind::Symmetric => "symmetric",
        }
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skew" => Ok(FormKind::Skew),
            "symmetric" => Ok(FormKind::Symmetric),
            other => Err(Error::Parse(format!("unknown form kind {other:?}"))),
        }
    }
}

/// A tuple of 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexTuple(pub Vec<usize>);

impl IndexTuple {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_canonical(&self, kind: FormKind) -> bool {
        self.0.windows(2).all(|w| match kind {
            FormKind::Skew => w[0] < w[1],
            FormKind::Symmetric => w[0] <= w[1],
        })
    }
}

/// Dimension of `(Λ^q Q^m)*` or `(Sym^q Q^m)*`.
pub fn dim_space(kind: FormKind, m: usize, q: usize) -> usize {
    match kind {
        FormKind::Skew => binomial_usize(m, q),
        FormKind::Symmetric => {
            if m == 0 {
                usize::from(q == 0)
            } else {
                binomial_usize(m + q - 1, q)
            }
        }
    }
}

/// Sorts `indices` into canonical order and returns the coefficient picked up:
/// the sign of the sorting permutation (or 0 on a repeat) for skew forms,
/// always 1 for symmetric ones.
pub fn canonicalize(kind: FormKind, indices: &[usize], m: usize) -> Result<(IndexTuple, i8)> {
    if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > m) {
        return Err(Error::IndexOutOfRange { index: bad, m });
    }
    Ok(canonicalize_unchecked(kind, indices))
}

pub(crate) fn canonicalize_unchecked(kind: FormKind, indices: &[usize]) -> (IndexTuple, i8) {
    let mut sorted = indices.to_vec();
    match kind {
        FormKind::Symmetric => {
            sorted.sort_unstable();
            (IndexTuple(sorted), 1)
        }
        FormKind::Skew => {
            // insertion sort, counting transpositions
            let mut swaps = 0usize;
            for i in 1..sorted.len() {
                let mut j = i;
                while j > 0 && sorted[j - 1] > sorted[j] {
                    sorted.swap(j - 1, j);
                    swaps += 1;
                    j -= 1;
                }
            }
            let coefficient = if sorted.windows(2).any(|w| w[0] == w[1]) {
                0
            } else if swaps.is_multiple_of(2) {
                1
            } else {
                -1
            };
            (IndexTuple(sorted), coefficient)
        }
    }
}

/// All canonical tuples of length `q` over `1..=m`, in lexicographic order.
pub fn canonical_tuples(kind: FormKind, m: usize, q: usize) -> Vec<IndexTuple> {
    fn extend(
        kind: FormKind,
        m: usize,
        q: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<IndexTuple>,
    ) {
        if prefix.len() == q {
            out.push(IndexTuple(prefix.clone()));
            return;
        }
        let start = match (prefix.last(), kind) {
            (None, _) => 1,
            (Some(&l), FormKind::Skew) => l + 1,
            (Some(&l), FormKind::Symmetric) => l,
        };
        for i in start..=m {
            prefix.push(i);
            extend(kind, m, q, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(dim_space(kind, m, q));
    extend(kind, m, q, &mut Vec::with_capacity(q), &mut out);
    out
}

/// A skew-symmetric or symmetric `q`-multilinear function on `Q^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearForm {
    kind: FormKind,
    m: usize,
    q: usize,
    components: BTreeMap<IndexTuple, Rational>,
}

impl MultilinearForm {
    pub fn zero(kind: FormKind, m: usize, q: usize) -> Result<Self> {
        if m == 0 || q == 0 {
            return Err(Error::InvalidShape(format!(
                "form needs m >= 1 and q >= 1 (got m = {m}, q = {q})"
            )));
        }
        Ok(Self {
            kind,
            m,
            q,
            components: BTreeMap::new(),
        })
    }

    /// Builds a form from `(tuple, value)` pairs; tuples must be canonical.
    pub fn from_components<I>(kind: FormKind, m: usize, q: usize, components: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Rational)>,
    {
        let mut f = Self::zero(kind, m, q)?;
        for (idx, value) in components {
            f.set(&idx, value)?;
        }
        Ok(f)
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Sets a component; the tuple must be canonical and in range.
    pub fn set(&mut self, indices: &[usize], value: Rational) -> Result<()> {
        if indices.len() != self.q {
            return Err(Error::ArityMismatch {
                expected: self.q,
                got: indices.len(),
            });
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > self.m) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                m: self.m,
            });
        }
        let tuple = IndexTuple(indices.to_vec());
        if !tuple.is_canonical(self.kind) {
            return Err(Error::NonCanonical(indices.to_vec()));
        }
        if value.is_zero() {
            self.components.remove(&tuple);
        } else {
            self.components.insert(tuple, value);
        }
        Ok(())
    }

    /// Component on a canonical tuple (zero if absent).
    pub fn component(&self, tuple: &IndexTuple) -> Rational {
        self.components.get(tuple).cloned().unwrap_or_else(Rational::zero)
    }

    /// `F(e_{i1}, .., e_{iq})` for arbitrary (not necessarily sorted) indices.
    pub fn basis_value(&self, indices: &[usize]) -> Result<Rational> {
        if indices.len() != self.q {
            return Err(Error::ArityMismatch {
                expected: self.q,
                got: indices.len(),
            });
        }
        let (tuple, coefficient) = canonicalize(self.kind, indices, self.m)?;
        Ok(match coefficient {
            0 => Rational::zero(),
            1 => self.component(&tuple),
            _ => -self.component(&tuple),
        })
    }

    /// Non-zero components in canonical order.
    pub fn components(&self) -> impl Iterator<Item = (&IndexTuple, &Rational)> {
        self.components.iter()
    }

    pub fn nonzero_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn check_args(&self, args: &[Vec<Rational>]) -> Result<()> {
        if args.len() != self.q {
            return Err(Error::ArityMismatch {
                expected: self.q,
                got: args.len(),
            });
        }
        if let Some(bad) = args.iter().find(|a| a.len() != self.m) {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: bad.len(),
            });
        }
        Ok(())
    }

    /// Evaluates `F(x_1, .., x_q)`.
    ///
    /// Skew forms use `q x q` minors of the coordinate matrix; symmetric forms
    /// sum over the distinct arrangements of each stored multiset.
    pub fn eval(&self, args: &[Vec<Rational>]) -> Result<Rational> {
        self.check_args(args)?;
        let mut total = Rational::zero();
        for (tuple, value) in &self.components {
            let coefficient = match self.kind {
                FormKind::Skew => {
                    let minor = MatrixQ::from_vec(
                        self.q,
                        self.q,
                        tuple
                            .0
                            .iter()
                            .flat_map(|&i| args.iter().map(move |x| x[i - 1].clone()))
                            .collect(),
                    )?;
                    linalg::determinant(&minor)?
                }
                FormKind::Symmetric => arrangement_sum(tuple.as_slice(), args),
            };
            if !coefficient.is_zero() {
                total += coefficient * value;
            }
        }
        Ok(total)
    }

    /// Reference evaluation: expands by multilinearity over all `m^q` index
    /// functions and reduces every basis value through [`canonicalize`].
    pub fn eval_bruteforce(&self, args: &[Vec<Rational>]) -> Result<Rational> {
        self.check_args(args)?;
        let mut total = Rational::zero();
        let mut idx = vec![1usize; self.q];
        loop {
            let weight = idx
                .iter()
                .zip(args)
                .fold(Rational::one(), |acc, (&i, x)| acc * &x[i - 1]);
            if !weight.is_zero() {
                total += weight * self.basis_value(&idx)?;
            }
            // odometer increment
            let mut pos = self.q;
            loop {
                if pos == 0 {
                    return Ok(total);
                }
                pos -= 1;
                if idx[pos] < self.m {
                    idx[pos] += 1;
                    break;
                }
                idx[pos] = 1;
            }
        }
    }

    /// `(τ*F)(x_1, .., x_q) = F(τ x_1, .., τ x_q)`.
    pub fn pullback(&self, tau: &MatrixQ) -> Result<MultilinearForm> {
        if tau.rows() != self.m || tau.cols() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: if tau.rows() != self.m { tau.rows() } else { tau.cols() },
            });
        }
        let images: Vec<Vec<Rational>> = (0..self.m).map(|j| tau.column(j)).collect();
        let mut out = MultilinearForm::zero(self.kind, self.m, self.q)?;
        for tuple in canonical_tuples(self.kind, self.m, self.q) {
            let args: Vec<Vec<Rational>> =
                tuple.0.iter().map(|&i| images[i - 1].clone()).collect();
            let value = self.eval(&args)?;
            if !value.is_zero() {
                out.components.insert(tuple, value);
            }
        }
        Ok(out)
    }
}

/// Sum over the distinct assignments of the multiset `tuple` to argument
/// positions of `prod_k x_k[assigned_k]`.
fn arrangement_sum(tuple: &[usize], args: &[Vec<Rational>]) -> Rational {
    let mut values: Vec<(usize, usize)> = Vec::new();
    for &i in tuple {
        match values.last_mut() {
            Some((v, c)) if *v == i => *c += 1,
            _ => values.push((i, 1)),
        }
    }
    fn go(pos: usize, values: &mut [(usize, usize)], args: &[Vec<Rational>]) -> Rational {
        if pos == args.len() {
            return Rational::one();
        }
        let mut acc = Rational::zero();
        for k in 0..values.len() {
            if values[k].1 == 0 {
                continue;
            }
            let x = &args[pos][values[k].0 - 1];
            if x.is_zero() {
                continue;
            }
            values[k].1 -= 1;
            acc += x * go(pos + 1, values, args);
            values[k].1 += 1;
        }
        acc
    }
    go(0, &mut values, args)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_frac, from_int};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| from_int(x)).collect()
    }

    fn basis(m: usize, i: usize) -> Vec<Rational> {
        let mut e = vec![Rational::zero(); m];
        e[i - 1] = Rational::one();
        e
    }

    #[test]
    fn dimension_formulas() {
        assert_eq!(dim_space(FormKind::Skew, 4, 3), 4);
        assert_eq!(dim_space(FormKind::Symmetric, 2, 3), 4);
        assert_eq!(dim_space(FormKind::Skew, 3, 4), 0);
        assert_eq!(dim_space(FormKind::Skew, 3, 0), 1);
        for kind in [FormKind::Skew, FormKind::Symmetric] {
            for m in 1..6 {
                for q in 0..5 {
                    assert_eq!(canonical_tuples(kind, m, q).len(), dim_space(kind, m, q));
                }
            }
        }
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(
            canonicalize(FormKind::Skew, &[2, 1], 2).unwrap(),
            (IndexTuple(vec![1, 2]), -1)
        );
        assert_eq!(canonicalize(FormKind::Skew, &[1, 1, 3], 3).unwrap().1, 0);
        assert_eq!(
            canonicalize(FormKind::Symmetric, &[3, 1, 2], 3).unwrap(),
            (IndexTuple(vec![1, 2, 3]), 1)
        );
        assert_eq!(
            canonicalize(FormKind::Skew, &[3, 1, 2], 3).unwrap(),
            (IndexTuple(vec![1, 2, 3]), 1)
        );
        assert_eq!(
            canonicalize(FormKind::Skew, &[1, 4], 3),
            Err(Error::IndexOutOfRange { index: 4, m: 3 })
        );
    }

    #[test]
    fn set_rejects_non_canonical() {
        let mut f = MultilinearForm::zero(FormKind::Skew, 3, 2).unwrap();
        assert_eq!(
            f.set(&[2, 1], from_int(1)),
            Err(Error::NonCanonical(vec![2, 1]))
        );
        assert_eq!(f.set(&[1, 1], from_int(1)), Err(Error::NonCanonical(vec![1, 1])));
        let mut g = MultilinearForm::zero(FormKind::Symmetric, 3, 2).unwrap();
        assert!(g.set(&[1, 1], from_int(1)).is_ok());
    }

    #[test]
    fn eval_examples() {
        let f = MultilinearForm::from_components(FormKind::Skew, 3, 2, [(vec![1, 2], from_int(1))])
            .unwrap();
        let args = [v(&[1, 2, 0]), v(&[0, 1, 1])];
        assert_eq!(f.eval(&args).unwrap(), from_int(1));
        assert_eq!(f.eval_bruteforce(&args).unwrap(), from_int(1));
        assert!(f.eval(&[v(&[1, 2, 3]), v(&[1, 2, 3])]).unwrap().is_zero());
        assert_eq!(f.eval(&[basis(3, 1), basis(3, 2)]).unwrap(), from_int(1));
        assert_eq!(f.eval(&[basis(3, 2), basis(3, 1)]).unwrap(), from_int(-1));

        assert_eq!(
            f.eval(&[v(&[1, 2, 0])]),
            Err(Error::ArityMismatch { expected: 2, got: 1 })
        );
        assert_eq!(
            f.eval(&[v(&[1, 2]), v(&[1, 2])]),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        );
    }

    #[test]
    fn one_dimensional_symmetric() {
        let c = from_frac(3, 7);
        let f = MultilinearForm::from_components(FormKind::Symmetric, 1, 3, [(vec![1, 1, 1], c.clone())])
            .unwrap();
        let args = [v(&[2]), v(&[-5]), vec![from_frac(1, 2)]];
        let expected = from_int(2) * from_int(-5) * from_frac(1, 2) * c;
        assert_eq!(f.eval(&args).unwrap(), expected);
        assert_eq!(f.eval_bruteforce(&args).unwrap(), expected);
    }

    #[test]
    fn components_read_back_on_basis() {
        let f = MultilinearForm::from_components(
            FormKind::Symmetric,
            3,
            3,
            [(vec![1, 1, 2], from_int(4)), (vec![2, 3, 3], from_frac(-1, 2))],
        )
        .unwrap();
        for tuple in canonical_tuples(FormKind::Symmetric, 3, 3) {
            let args: Vec<_> = tuple.0.iter().map(|&i| basis(3, i)).collect();
            assert_eq!(f.eval(&args).unwrap(), f.component(&tuple));
        }
    }

    #[test]
    fn pullback_identity_and_determinant() {
        let f = MultilinearForm::from_components(FormKind::Skew, 3, 3, [(vec![1, 2, 3], from_int(5))])
            .unwrap();
        assert_eq!(f.pullback(&MatrixQ::identity(3)).unwrap(), f);
        let tau = MatrixQ::from_i64_rows(&[vec![1, 2, 0], vec![0, 3, 1], vec![4, 0, 1]]).unwrap();
        let det = linalg::determinant(&tau).unwrap();
        let pulled = f.pullback(&tau).unwrap();
        assert_eq!(pulled.component(&IndexTuple(vec![1, 2, 3])), det * from_int(5));
    }

    fn rat() -> impl Strategy<Value = Rational> {
        (-5i64..=5, 1i64..=4).prop_map(|(n, d)| from_frac(n, d))
    }

    fn form(kind: FormKind, m: usize, q: usize) -> impl Strategy<Value = MultilinearForm> {
        let tuples = canonical_tuples(kind, m, q);
        prop::collection::vec(rat(), tuples.len()).prop_map(move |vals| {
            MultilinearForm::from_components(
                kind,
                m,
                q,
                tuples.iter().map(|t| t.0.clone()).zip(vals),
            )
            .unwrap()
        })
    }

    fn vectors(count: usize, m: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
        prop::collection::vec(prop::collection::vec(rat(), m), count)
    }

    fn kind() -> impl Strategy<Value = FormKind> {
        prop_oneof![Just(FormKind::Skew), Just(FormKind::Symmetric)]
    }

    fn case() -> impl Strategy<Value = (MultilinearForm, Vec<Vec<Rational>>)> {
        (kind(), 1usize..=4, 1usize..=3)
            .prop_flat_map(|(k, m, q)| (form(k, m, q), vectors(q, m)))
    }

    proptest! {
        #[test]
        fn eval_matches_bruteforce((f, args) in case()) {
            prop_assert_eq!(f.eval(&args).unwrap(), f.eval_bruteforce(&args).unwrap());
        }

        #[test]
        fn eval_is_multilinear((f, args) in case(), y in prop::collection::vec(rat(), 4), a in rat(), b in rat(), slot in 0usize..3) {
            let slot = slot % f.q();
            let y: Vec<Rational> = y.into_iter().take(f.m()).collect();
            let mut mixed = args.clone();
            mixed[slot] = args[slot].iter().zip(&y).map(|(x, y)| &a * x + &b * y).collect();
            let mut with_y = args.clone();
            with_y[slot] = y;
            let lhs = f.eval(&mixed).unwrap();
            let rhs = &a * f.eval(&args).unwrap() + &b * f.eval(&with_y).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn transposition_behaviour((f, args) in case()) {
            prop_assume!(f.q() >= 2);
            let mut swapped = args.clone();
            swapped.swap(0, 1);
            let a = f.eval(&args).unwrap();
            let b = f.eval(&swapped).unwrap();
            match f.kind() {
                FormKind::Skew => prop_assert_eq!(a, -b),
                FormKind::Symmetric => prop_assert_eq!(a, b),
            }
        }

        #[test]
        fn pullback_composes(
            (f, _) in case(),
            t in prop::collection::vec(-2i64..=2, 16),
            r in prop::collection::vec(-2i64..=2, 16),
        ) {
            let m = f.m();
            let tau = MatrixQ::from_vec(m, m, t[..m * m].iter().map(|&x| from_int(x)).collect()).unwrap();
            let rho = MatrixQ::from_vec(m, m, r[..m * m].iter().map(|&x| from_int(x)).collect()).unwrap();
            let twice = f.pullback(&rho).unwrap().pullback(&tau).unwrap();
            let once = f.pullback(&(&rho * &tau)).unwrap();
            prop_assert_eq!(twice, once);
        }

        #[test]
        fn top_degree_pullback_scales_by_determinant(c in rat(), t in prop::collection::vec(-3i64..=3, 9)) {
            let f = MultilinearForm::from_components(FormKind::Skew, 3, 3, [(vec![1, 2, 3], c)]).unwrap();
            let tau = MatrixQ::from_vec(3, 3, t.iter().map(|&x| from_int(x)).collect()).unwrap();
            let det = linalg::determinant(&tau).unwrap();
            let pulled = f.pullback(&tau).unwrap();
            let cols: Vec<_> = (0..3).map(|j| tau.column(j)).collect();
            prop_assert_eq!(pulled.component(&IndexTuple(vec![1, 2, 3])), &det * f.component(&IndexTuple(vec![1, 2, 3])));
            prop_assert_eq!(f.eval_bruteforce(&cols).unwrap(), det * f.component(&IndexTuple(vec![1, 2, 3])));
        }
    }
}
