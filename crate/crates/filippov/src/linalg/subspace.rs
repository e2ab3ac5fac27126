//! Subspaces of rational coordinate space in a canonical representation.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rational};

/// A subspace of `Q^n`, stored as the canonical reduced row-echelon basis
/// (basis vectors are the rows; zero rows are dropped). Two equal subspaces
/// therefore have structurally identical representations, so `==` decides
/// subspace equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given row vectors, canonicalized.
    pub fn span(ambient: usize, rows: &[Vec<Rational>]) -> Result<Self> {
        for row in rows {
            if row.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: row.len(),
                });
            }
        }
        let m = Matrix::from_rows(rows.to_vec())?;
        Ok(Self::span_of_matrix(ambient, &m))
    }

    pub fn span_of_matrix(ambient: usize, m: &Matrix) -> Self {
        debug_assert!(m.rows() == 0 || m.cols() == ambient);
        let red = m.rref();
        let mut rows = Vec::with_capacity(red.rank);
        for i in 0..red.rank {
            rows.push(red.reduced.row_vec(i));
        }
        Subspace {
            ambient,
            basis: Matrix::from_rows(rows).expect("rows share the ambient length"),
            pivots: red.pivots,
        }
    }

    /// The solution space `{x : m * x = 0}`, canonicalized.
    pub fn kernel_of(m: &Matrix) -> Self {
        let vectors = m.kernel_vectors();
        Self::span(m.cols(), &vectors).expect("kernel vectors have the right length")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.basis.row_iter()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; the returned remainder is zero exactly
    /// when `v` lies in the subspace.
    pub fn reduce_vector(&self, v: &[Rational]) -> Vec<Rational> {
        let mut rem = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            if rem[p].is_zero() {
                continue;
            }
            let f = rem[p].clone();
            for j in 0..self.ambient {
                let delta = &f * &self.basis[(row, j)];
                rem[j] -= delta;
            }
        }
        rem
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        self.reduce_vector(v).iter().all(Rational::is_zero)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis_rows().all(|row| self.contains_vector(row))
    }

    /// Coordinates of `v` in the canonical basis, when `v` lies in the span.
    pub fn coordinates_of(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        if self.contains_vector(v) {
            Some(coords)
        } else {
            None
        }
    }

    /// Linear combination of the basis rows with the given coefficients.
    pub fn lift(&self, coords: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.ambient];
        for (c, row) in coords.iter().zip(self.basis_rows()) {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                let delta = c * r;
                *o += delta;
            }
        }
        out
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut rows: Vec<Vec<Rational>> = self.basis_rows().map(<[Rational]>::to_vec).collect();
        rows.extend(other.basis_rows().map(<[Rational]>::to_vec));
        Subspace::span(self.ambient, &rows)
    }

    /// Intersection computed through standard-dot-product complements:
    /// `(a n b) = (a* + b*)*`, valid because the standard form on `Q^n` is
    /// positive definite.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let a_perp = self.std_perp();
        let b_perp = other.std_perp();
        Ok(a_perp.sum(&b_perp)?.std_perp())
    }

    /// Orthogonal complement for the standard dot product.
    pub fn std_perp(&self) -> Subspace {
        if self.rank() == 0 {
            return Subspace::full(self.ambient);
        }
        Subspace::kernel_of(&self.basis)
    }

    /// Greedy complement of `self` inside `outer`: walks the canonical rows
    /// of `outer` and keeps those independent of everything kept so far.
    /// Deterministic, and minimal in the lexicographic-echelon sense.
    pub fn complement_within(&self, outer: &Subspace) -> Result<Subspace> {
        self.check_ambient(outer)?;
        if !outer.contains(self) {
            return Err(Error::NotContained);
        }
        let mut acc: Vec<Vec<Rational>> = self.basis_rows().map(<[Rational]>::to_vec).collect();
        let mut kept: Vec<Vec<Rational>> = Vec::new();
        let mut acc_space = self.clone();
        for row in outer.basis_rows() {
            if !acc_space.contains_vector(row) {
                kept.push(row.to_vec());
                acc.push(row.to_vec());
                acc_space = Subspace::span(self.ambient, &acc)?;
            }
        }
        Subspace::span(self.ambient, &kept)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subspace(dim {} of {}) {:?}",
            self.rank(),
            self.ambient,
            self.basis
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn vecq(vals: &[i64]) -> Vec<Rational> {
        vals.iter().map(|&v| q(v)).collect()
    }

    #[test]
    fn neutral_elements() {
        let a = Subspace::span(3, &[vecq(&[1, 2, 0])]).unwrap();
        assert_eq!(a.sum(&Subspace::zero(3)).unwrap(), a);
        assert_eq!(a.intersect(&Subspace::full(3)).unwrap(), a);
    }

    #[test]
    fn sum_of_axes() {
        let e1 = Subspace::span(3, &[vecq(&[1, 0, 0])]).unwrap();
        let e2 = Subspace::span(3, &[vecq(&[0, 1, 0])]).unwrap();
        assert_eq!(e1.sum(&e2).unwrap().rank(), 2);
    }

    #[test]
    fn intersection_example() {
        // Solving x*(e1+e2) = y*e1 + z*e2 by hand forces y = z = x, so the
        // intersection is the line through e1+e2.
        let diag = Subspace::span(3, &[vecq(&[1, 1, 0])]).unwrap();
        let plane = Subspace::span(3, &[vecq(&[1, 0, 0]), vecq(&[0, 1, 0])]).unwrap();
        assert_eq!(diag.intersect(&plane).unwrap(), diag);
    }

    #[test]
    fn nullspace_is_canonical() {
        let m = Matrix::from_rows(vec![vecq(&[1, 2]), vecq(&[2, 4])]).unwrap();
        let kernel = Subspace::kernel_of(&m);
        let expected = Subspace::span(2, &[vecq(&[-2, 1])]).unwrap();
        assert_eq!(kernel, expected);
    }

    #[test]
    fn complements() {
        let inner = Subspace::span(3, &[vecq(&[1, 0, 0])]).unwrap();
        let outer = Subspace::full(3);
        let c = inner.complement_within(&outer).unwrap();
        assert_eq!(c.rank(), 2);
        assert_eq!(inner.sum(&c).unwrap(), outer);
        assert!(inner.intersect(&c).unwrap().is_zero());
        assert!(inner.complement_within(&inner).unwrap().is_zero());
        let not_inside = Subspace::span(3, &[vecq(&[0, 0, 1])]).unwrap();
        assert!(not_inside.complement_within(&inner).is_err());
    }

    fn arb_subspace(dim: usize) -> impl Strategy<Value = Subspace> {
        proptest::collection::vec(proptest::collection::vec(-3i64..4, dim), 0..=dim).prop_map(
            move |rows| {
                let rows: Vec<Vec<Rational>> =
                    rows.into_iter().map(|r| r.into_iter().map(q).collect()).collect();
                Subspace::span(dim, &rows).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn dimension_formula(a in arb_subspace(4), b in arb_subspace(4)) {
            let sum = a.sum(&b).unwrap();
            let meet = a.intersect(&b).unwrap();
            prop_assert_eq!(sum.rank() + meet.rank(), a.rank() + b.rank());
            prop_assert!(sum.contains(&a) && sum.contains(&b));
            prop_assert!(a.contains(&meet) && b.contains(&meet));
        }

        #[test]
        fn double_std_perp_is_identity(a in arb_subspace(4)) {
            prop_assert_eq!(a.std_perp().std_perp(), a);
        }
    }
}
