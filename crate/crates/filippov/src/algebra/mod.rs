//! The central data model: Lie n-algebras given by exact structure
//! constants on strictly increasing basis tuples, optionally paired with an
//! invariant symmetric bilinear form.
//!
//! Antisymmetry is structural: only canonical (sorted) tuples are stored,
//! and every evaluation applies the permutation sign on the fly, so there is
//! nothing to get out of sync.

mod checks;
mod ops;
mod report;

pub use checks::{check_isometry, check_morphism};
pub use report::{Violation, ViolationKind, ViolationReport};

use std::borrow::Borrow;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{BilinearForm, Matrix, Rational};

/// A strictly increasing tuple of 0-based basis indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexTuple(Vec<usize>);

impl IndexTuple {
    /// Wraps an already strictly increasing index list.
    pub fn from_sorted(indices: Vec<usize>) -> Result<Self> {
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::RepeatedIndex { index: w[1] });
            }
        }
        Ok(IndexTuple(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }
}

impl Borrow<[usize]> for IndexTuple {
    fn borrow(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Sorts `buf` in place, returning the sign of the sorting permutation, or
/// `None` when an index repeats.
pub(crate) fn sort_with_sign(buf: &mut [usize]) -> Option<i8> {
    let mut sign = 1i8;
    for i in 1..buf.len() {
        let mut j = i;
        while j > 0 && buf[j - 1] > buf[j] {
            buf.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if buf.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

/// A Lie n-algebra candidate: a vector space of dimension `dim` with an
/// alternating n-linear bracket given by structure constants. Whether the
/// n-Jacobi identity actually holds is decided by [`NAlgebra::check_jacobi`].
#[derive(Clone, PartialEq, Eq)]
pub struct NAlgebra {
    arity: usize,
    dim: usize,
    table: BTreeMap<IndexTuple, Vec<Rational>>,
}

impl NAlgebra {
    /// The abelian algebra: every bracket vanishes.
    pub fn abelian(arity: usize, dim: usize) -> Result<Self> {
        if arity < 2 {
            return Err(Error::ArityTooSmall {
                min: 2,
                found: arity,
            });
        }
        Ok(NAlgebra {
            arity,
            dim,
            table: BTreeMap::new(),
        })
    }

    /// Builds an algebra from raw `(indices, coefficients)` entries.
    ///
    /// Indices are 0-based and may come in any order; each entry is sorted
    /// to its canonical tuple with the permutation sign applied, entries on
    /// the same tuple are summed, and zero results are dropped. A repeated
    /// index is an error unless its coefficient vector is zero.
    pub fn from_entries(
        arity: usize,
        dim: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, Vec<Rational>)>,
    ) -> Result<Self> {
        let mut algebra = NAlgebra::abelian(arity, dim)?;
        for (indices, coeffs) in entries {
            if indices.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: indices.len(),
                });
            }
            if coeffs.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: coeffs.len(),
                });
            }
            if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
                return Err(Error::IndexOutOfRange { index: bad, dim });
            }
            let zero = coeffs.iter().all(Rational::is_zero);
            let mut sorted = indices;
            match sort_with_sign(&mut sorted) {
                None => {
                    if zero {
                        continue;
                    }
                    let dup = sorted
                        .windows(2)
                        .find(|w| w[0] == w[1])
                        .map(|w| w[0])
                        .unwrap_or(0);
                    return Err(Error::RepeatedIndex { index: dup });
                }
                Some(sign) => {
                    if zero {
                        continue;
                    }
                    let key = IndexTuple(sorted);
                    let slot = algebra
                        .table
                        .entry(key)
                        .or_insert_with(|| vec![Rational::zero(); dim]);
                    for (s, c) in slot.iter_mut().zip(&coeffs) {
                        let signed = c.with_sign(sign);
                        *s += signed;
                    }
                }
            }
        }
        algebra.drop_zero_entries();
        Ok(algebra)
    }

    fn drop_zero_entries(&mut self) {
        self.table.retain(|_, v| !v.iter().all(Rational::is_zero));
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_abelian(&self) -> bool {
        self.table.is_empty()
    }

    pub fn table(&self) -> &BTreeMap<IndexTuple, Vec<Rational>> {
        &self.table
    }

    /// Bracket of basis vectors in the given (possibly unsorted) order.
    /// Returns `None` when the result is zero.
    pub fn basis_bracket(&self, indices: &[usize]) -> Option<(i8, &[Rational])> {
        let mut buf = indices.to_vec();
        let sign = sort_with_sign(&mut buf)?;
        self.table.get(buf.as_slice()).map(|v| (sign, v.as_slice()))
    }

    /// Buffer-reusing variant of [`NAlgebra::basis_bracket`]; sorts `buf` in
    /// place.
    pub(crate) fn basis_bracket_buf(&self, buf: &mut Vec<usize>) -> Option<(i8, &Vec<Rational>)> {
        let sign = sort_with_sign(buf)?;
        self.table.get(buf.as_slice()).map(|v| (sign, v))
    }

    /// Full multilinear antisymmetric expansion of the bracket on arbitrary
    /// vectors. The coefficient of each stored tuple is the corresponding
    /// minor determinant of the argument matrix.
    pub fn bracket(&self, args: &[&[Rational]]) -> Result<Vec<Rational>> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: args.len(),
            });
        }
        for a in args {
            if a.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: a.len(),
                });
            }
        }
        let n = self.arity;
        let mut out = vec![Rational::zero(); self.dim];
        for (key, value) in &self.table {
            let mut minor = Matrix::zeros(n, n);
            for (a, arg) in args.iter().enumerate() {
                for (b, &idx) in key.indices().iter().enumerate() {
                    minor[(a, b)] = arg[idx].clone();
                }
            }
            let coeff = minor.det();
            if coeff.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(value) {
                if !v.is_zero() {
                    let delta = &coeff * v;
                    *o += delta;
                }
            }
        }
        Ok(out)
    }

    /// Convenience wrapper for owned argument vectors.
    pub fn bracket_of(&self, args: &[Vec<Rational>]) -> Result<Vec<Rational>> {
        let slices: Vec<&[Rational]> = args.iter().map(Vec::as_slice).collect();
        self.bracket(&slices)
    }

    /// `[w, e_{t_1}, .., e_{t_{n-1}}]` for a general first argument.
    pub(crate) fn bracket_with_first(&self, w: &[Rational], t: &[usize]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        let mut buf = Vec::with_capacity(self.arity);
        for (k, wk) in w.iter().enumerate() {
            if wk.is_zero() || t.contains(&k) {
                continue;
            }
            buf.clear();
            buf.push(k);
            buf.extend_from_slice(t);
            if let Some((sign, c)) = self.basis_bracket_buf(&mut buf) {
                let f = wk.with_sign(sign);
                for (o, ci) in out.iter_mut().zip(c) {
                    if !ci.is_zero() {
                        let delta = &f * ci;
                        *o += delta;
                    }
                }
            }
        }
        out
    }

    /// The matrix of `ad_{e_{t_1}, .., e_{t_{n-1}}}` acting on the right
    /// slot: column `j` is `[e_t.., e_j]`.
    pub fn adjoint_matrix(&self, t: &[usize]) -> Matrix {
        let mut a = Matrix::zeros(self.dim, self.dim);
        let mut buf = Vec::with_capacity(self.arity);
        for j in 0..self.dim {
            if t.contains(&j) {
                continue;
            }
            buf.clear();
            buf.extend_from_slice(t);
            buf.push(j);
            if let Some((sign, c)) = self.basis_bracket_buf(&mut buf) {
                for (i, ci) in c.iter().enumerate() {
                    if !ci.is_zero() {
                        a[(i, j)] = ci.with_sign(sign);
                    }
                }
            }
        }
        a
    }

    /// All `(n-1)`-tuples obtained by dropping one index from a stored key.
    /// Brackets `[w, e_t..]` vanish for every tuple outside this set.
    pub(crate) fn one_hole_tuples(&self) -> Vec<Vec<usize>> {
        let mut set = std::collections::BTreeSet::new();
        for key in self.table.keys() {
            for pos in 0..key.len() {
                let mut t = key.indices().to_vec();
                t.remove(pos);
                set.insert(t);
            }
        }
        set.into_iter().collect()
    }

    /// All `(n-2)`-tuples obtained by dropping two indices from a stored key.
    pub(crate) fn two_hole_tuples(&self) -> Vec<Vec<usize>> {
        let mut set = std::collections::BTreeSet::new();
        for key in self.table.keys() {
            let idx = key.indices();
            for a in 0..idx.len() {
                for b in a + 1..idx.len() {
                    let mut t = idx.to_vec();
                    t.remove(b);
                    t.remove(a);
                    set.insert(t);
                }
            }
        }
        set.into_iter().collect()
    }
}

impl fmt::Debug for NAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "NAlgebra(arity {}, dim {}) {{", self.arity, self.dim)?;
        for (key, value) in &self.table {
            write!(f, "  {key} -> (")?;
            for (i, c) in value.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}")?;
            }
            writeln!(f, ")")?;
        }
        write!(f, "}}")
    }
}

/// An algebra together with a symmetric bilinear form on the same space.
#[derive(Clone, PartialEq, Eq)]
pub struct MetricNAlgebra {
    pub algebra: NAlgebra,
    pub form: BilinearForm,
}

impl MetricNAlgebra {
    pub fn new(algebra: NAlgebra, form: BilinearForm) -> Result<Self> {
        if form.dim() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: form.dim(),
            });
        }
        Ok(MetricNAlgebra { algebra, form })
    }

    pub fn arity(&self) -> usize {
        self.algebra.arity()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn signature(&self) -> (usize, usize, usize) {
        self.form.signature()
    }

    /// Fails unless both the Jacobi and the invariance check come back
    /// empty. Used by constructors to refuse invalid inputs.
    pub fn verify_valid(&self, context: &'static str) -> Result<()> {
        let jacobi = self.algebra.check_jacobi();
        if !jacobi.is_empty() {
            return Err(Error::FailedCheck {
                context,
                check: "jacobi",
                witnesses: jacobi.len(),
            });
        }
        let metric = self.check_metric()?;
        if !metric.is_empty() {
            return Err(Error::FailedCheck {
                context,
                check: "metric",
                witnesses: metric.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for MetricNAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Metric{:?} with {:?}", self.algebra, self.form)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn unit(dim: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); dim];
        v[i] = Rational::one();
        v
    }

    #[test]
    fn normalization_applies_permutation_signs() {
        // Odd permutation flips the sign, even permutation keeps it.
        let c = unit(4, 3);
        let odd = NAlgebra::from_entries(3, 4, vec![(vec![1, 0, 2], c.clone())]).unwrap();
        let even = NAlgebra::from_entries(3, 4, vec![(vec![2, 0, 1], c.clone())]).unwrap();
        let canonical = IndexTuple::from_sorted(vec![0, 1, 2]).unwrap();
        assert_eq!(odd.table()[&canonical][3], q(-1));
        assert_eq!(even.table()[&canonical][3], q(1));
    }

    #[test]
    fn normalization_rejects_repeated_indices_with_nonzero_value() {
        let c = unit(4, 3);
        let err = NAlgebra::from_entries(3, 4, vec![(vec![0, 0, 1], c)]);
        assert!(matches!(err, Err(Error::RepeatedIndex { index: 0 })));
        // A zero coefficient vector on a repeated tuple is silently dropped.
        let ok = NAlgebra::from_entries(3, 4, vec![(vec![0, 0, 1], vec![Rational::zero(); 4])]);
        assert!(ok.unwrap().is_abelian());
    }

    #[test]
    fn normalization_sums_duplicates_and_drops_zeros() {
        let alg = NAlgebra::from_entries(
            2,
            3,
            vec![
                (vec![0, 1], unit(3, 2)),
                (vec![1, 0], unit(3, 2)), // cancels the first entry
            ],
        )
        .unwrap();
        assert!(alg.is_abelian());
    }

    #[test]
    fn bracket_vanishes_on_repeated_argument() {
        let alg = NAlgebra::from_entries(3, 4, vec![(vec![0, 1, 2], unit(4, 3))]).unwrap();
        let x = unit(4, 0);
        let y = unit(4, 1);
        let out = alg.bracket(&[&x, &y, &x]).unwrap();
        assert!(out.iter().all(Rational::is_zero));
    }

    #[test]
    fn bracket_is_multilinear_on_a_sample() {
        let alg = NAlgebra::from_entries(2, 3, vec![(vec![0, 1], unit(3, 2))]).unwrap();
        let x: Vec<Rational> = vec![q(2), q(3), q(0)];
        let y: Vec<Rational> = vec![q(1), q(-1), q(0)];
        // [x, y] = (2*(-1) - 3*1) e3 = -5 e3.
        let out = alg.bracket(&[&x, &y]).unwrap();
        assert_eq!(out, vec![q(0), q(0), q(-5)]);
    }

    #[test]
    fn index_tuple_requires_strict_increase() {
        assert!(IndexTuple::from_sorted(vec![0, 1, 1]).is_err());
        assert!(IndexTuple::from_sorted(vec![1, 0]).is_err());
        assert!(IndexTuple::from_sorted(vec![0, 2, 5]).is_ok());
    }
}
