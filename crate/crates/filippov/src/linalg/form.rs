//! Symmetric bilinear forms, signatures, and orthogonal complements.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rational, Subspace};

/// A symmetric bilinear form on `Q^n`, stored by its Gram matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct BilinearForm {
    gram: Matrix,
}

impl BilinearForm {
    pub fn new(gram: Matrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch {
                expected: gram.rows(),
                found: gram.cols(),
            });
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(BilinearForm { gram })
    }

    pub fn identity(dim: usize) -> Self {
        BilinearForm {
            gram: Matrix::identity(dim),
        }
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        BilinearForm {
            gram: Matrix::diagonal(entries),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `<x, y>` for column vectors `x`, `y`.
    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        let gy = self.gram.mul_vec(y)?;
        if x.len() != gy.len() {
            return Err(Error::DimensionMismatch {
                expected: gy.len(),
                found: x.len(),
            });
        }
        let mut acc = Rational::zero();
        for (a, b) in x.iter().zip(&gy) {
            if !a.is_zero() && !b.is_zero() {
                let prod = a * b;
                acc += prod;
            }
        }
        Ok(acc)
    }

    /// `<e_i, v>` without materializing the basis vector.
    pub fn inner_with_basis(&self, v: &[Rational], basis_index: usize) -> Rational {
        let mut acc = Rational::zero();
        for (j, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let prod = c * &self.gram[(j, basis_index)];
                acc += prod;
            }
        }
        acc
    }

    /// Simultaneous row/column (congruence) diagonalization. Returns the
    /// diagonal entries together with the basis rows realizing them, so that
    /// `<b_i, b_j> = diag_i * delta_ij`. Zero diagonals with surviving
    /// off-diagonal pairing are resolved by folding one null direction onto
    /// the other, which turns the hyperbolic pair into a `+/-` pair.
    pub fn orthogonal_basis(&self) -> (Vec<Rational>, Vec<Vec<Rational>>) {
        let d = self.dim();
        let mut m = self.gram.clone();
        let mut basis: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                let mut v = vec![Rational::zero(); d];
                v[i] = Rational::one();
                v
            })
            .collect();

        let add_row_col = |m: &mut Matrix, basis: &mut Vec<Vec<Rational>>,
                           dst: usize,
                           src: usize,
                           f: &Rational| {
            for j in 0..d {
                let delta = f * &m[(src, j)];
                m[(dst, j)] += delta;
            }
            for i in 0..d {
                let delta = f * &m[(i, src)];
                m[(i, dst)] += delta;
            }
            let src_row = basis[src].clone();
            for (b, s) in basis[dst].iter_mut().zip(&src_row) {
                let delta = f * s;
                *b += delta;
            }
        };
        let swap = |m: &mut Matrix, basis: &mut Vec<Vec<Rational>>, a: usize, b: usize| {
            if a == b {
                return;
            }
            for j in 0..d {
                let tmp = m[(a, j)].clone();
                m[(a, j)] = m[(b, j)].clone();
                m[(b, j)] = tmp;
            }
            for i in 0..d {
                let tmp = m[(i, a)].clone();
                m[(i, a)] = m[(i, b)].clone();
                m[(i, b)] = tmp;
            }
            basis.swap(a, b);
        };

        for k in 0..d {
            if m[(k, k)].is_zero() {
                if let Some(i) = (k + 1..d).find(|&i| !m[(i, i)].is_zero()) {
                    swap(&mut m, &mut basis, k, i);
                } else {
                    // All remaining diagonal entries vanish; look for a
                    // hyperbolic pair.
                    let mut pair = None;
                    'outer: for i in k..d {
                        for j in i + 1..d {
                            if !m[(i, j)].is_zero() {
                                pair = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    let Some((i, j)) = pair else {
                        break; // remaining block is identically zero
                    };
                    add_row_col(&mut m, &mut basis, i, j, &Rational::one());
                    swap(&mut m, &mut basis, k, i);
                }
            }
            let piv = m[(k, k)].clone();
            let inv = piv.recip().expect("pivot is nonzero");
            for i in k + 1..d {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = -(m[(i, k)].clone() * &inv);
                add_row_col(&mut m, &mut basis, i, k, &f);
            }
        }

        let diag = (0..d).map(|i| m[(i, i)].clone()).collect();
        (diag, basis)
    }

    /// Inertia `(p, q, r)`: the counts of positive, negative and zero
    /// entries in any congruence diagonalization (well defined by Sylvester's
    /// law of inertia).
    pub fn signature(&self) -> (usize, usize, usize) {
        let (diag, _) = self.orthogonal_basis();
        let p = diag.iter().filter(|e| e.is_positive()).count();
        let q = diag.iter().filter(|e| e.is_negative()).count();
        (p, q, self.dim() - p - q)
    }

    pub fn radical(&self) -> Subspace {
        Subspace::kernel_of(&self.gram)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().is_zero()
    }

    pub fn is_positive_definite(&self) -> bool {
        let (p, _, _) = self.signature();
        p == self.dim()
    }

    /// `{v : <v, w> = 0 for all w in s}`.
    pub fn orthogonal_complement(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.ambient_dim(),
            });
        }
        if s.rank() == 0 {
            return Ok(Subspace::full(self.dim()));
        }
        let constraints = s.basis().matmul(&self.gram)?;
        Ok(Subspace::kernel_of(&constraints))
    }

    /// Gram matrix of the form pulled back to the basis of `s`.
    pub fn restrict(&self, s: &Subspace) -> Result<BilinearForm> {
        if s.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.ambient_dim(),
            });
        }
        let b = s.basis();
        let gram = b.matmul(&self.gram)?.matmul(&b.transpose())?;
        BilinearForm::new(gram)
    }

    /// Block-diagonal sum of two forms.
    pub fn direct_sum(&self, other: &BilinearForm) -> BilinearForm {
        let d1 = self.dim();
        let d = d1 + other.dim();
        let gram = Matrix::from_fn(d, d, |i, j| {
            if i < d1 && j < d1 {
                self.gram[(i, j)].clone()
            } else if i >= d1 && j >= d1 {
                other.gram[(i - d1, j - d1)].clone()
            } else {
                Rational::zero()
            }
        });
        BilinearForm { gram }
    }
}

impl std::fmt::Debug for BilinearForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BilinearForm {:?}", self.gram)
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

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn signature_of_diagonal_forms() {
        assert_eq!(BilinearForm::identity(4).signature(), (4, 0, 0));
        let g = BilinearForm::diagonal(&vecq(&[1, 1, -1]));
        assert_eq!(g.signature(), (2, 1, 0));
        let degenerate = BilinearForm::diagonal(&vecq(&[1, 0]));
        assert_eq!(degenerate.signature(), (1, 0, 1));
        assert!(!degenerate.is_nondegenerate());
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        // Congruence oracle by hand: in the basis (e1+e2, e1-e2) the form
        // diag(2, -2), so the inertia is (1, 1, 0).
        let g = BilinearForm::new(mat(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(g.signature(), (1, 1, 0));
        let (diag, basis) = g.orthogonal_basis();
        for (i, bi) in basis.iter().enumerate() {
            for (j, bj) in basis.iter().enumerate() {
                let val = g.inner(bi, bj).unwrap();
                if i == j {
                    assert_eq!(val, diag[i]);
                    assert!(!val.is_zero());
                } else {
                    assert!(val.is_zero());
                }
            }
        }
    }

    #[test]
    fn complement_examples() {
        let id3 = BilinearForm::identity(3);
        assert!(id3
            .orthogonal_complement(&Subspace::full(3))
            .unwrap()
            .is_zero());
        let e1 = Subspace::span(3, &[vecq(&[1, 0, 0])]).unwrap();
        let perp = id3.orthogonal_complement(&e1).unwrap();
        let expected =
            Subspace::span(3, &[vecq(&[0, 1, 0]), vecq(&[0, 0, 1])]).unwrap();
        assert_eq!(perp, expected);
    }

    #[test]
    fn null_vector_is_self_orthogonal() {
        // Hyperbolic pairing <u,v> = 1, <u,u> = <v,v> = 0: the line through
        // u is its own complement.
        let g = BilinearForm::new(mat(&[&[0, 1], &[1, 0]])).unwrap();
        let u = Subspace::span(2, &[vecq(&[1, 0])]).unwrap();
        assert_eq!(g.orthogonal_complement(&u).unwrap(), u);
        let restricted = g.restrict(&u).unwrap();
        assert!(restricted.gram().is_zero());
    }

    #[test]
    fn restriction_examples() {
        let g = BilinearForm::diagonal(&vecq(&[1, 1, -1]));
        assert_eq!(g.restrict(&Subspace::full(3)).unwrap(), g);
        // <e1+e3, e1+e3> = 1 - 1 = 0.
        let isotropic = Subspace::span(3, &[vecq(&[1, 0, 1])]).unwrap();
        assert!(g.restrict(&isotropic).unwrap().gram().is_zero());
    }

    fn invertible_matrix(dim: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-3i64..4, dim * dim)
            .prop_map(move |vals| {
                let mut m = Matrix::identity(dim);
                for (k, v) in vals.into_iter().enumerate() {
                    m[(k / dim, k % dim)] = q(v);
                }
                m
            })
            .prop_filter("invertible", |m| !m.det().is_zero())
    }

    fn symmetric_form(dim: usize) -> impl Strategy<Value = BilinearForm> {
        proptest::collection::vec(-3i64..4, dim * (dim + 1) / 2).prop_map(move |vals| {
            let mut m = Matrix::zeros(dim, dim);
            let mut it = vals.into_iter();
            for i in 0..dim {
                for j in i..dim {
                    let v = q(it.next().unwrap());
                    m[(i, j)] = v.clone();
                    m[(j, i)] = v;
                }
            }
            BilinearForm::new(m).unwrap()
        })
    }

    proptest! {
        #[test]
        fn signature_is_congruence_invariant(
            g in symmetric_form(4),
            p in invertible_matrix(4),
        ) {
            let congruent = BilinearForm::new(
                p.transpose().matmul(g.gram()).unwrap().matmul(&p).unwrap()
            ).unwrap();
            prop_assert_eq!(g.signature(), congruent.signature());
        }

        #[test]
        fn double_complement_for_nondegenerate(
            g in symmetric_form(4).prop_filter("nondegenerate", |g| g.is_nondegenerate()),
            rows in proptest::collection::vec(proptest::collection::vec(-3i64..4, 4), 0..4),
        ) {
            let rows: Vec<Vec<Rational>> =
                rows.into_iter().map(|r| r.into_iter().map(q).collect()).collect();
            let s = Subspace::span(4, &rows).unwrap();
            let perp = g.orthogonal_complement(&s).unwrap();
            prop_assert_eq!(s.rank() + perp.rank(), 4);
            prop_assert_eq!(g.orthogonal_complement(&perp).unwrap(), s);
        }
    }
}
