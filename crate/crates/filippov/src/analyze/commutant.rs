//! The commutant of the adjoint representation.
//!
//! A projection onto an orthogonal ideal summand commutes with every left
//! multiplication and is symmetric for the invariant form, so the commutant
//! is the solver substrate of the decomposition machinery. It is computed
//! by intersecting the commuting conditions one adjoint at a time, shrinking
//! the parameter space as it goes; adjoints that already commute with the
//! current basis cost a cheap verification only.

use crate::algebra::MetricNAlgebra;
use crate::linalg::{Matrix, Rational, Subspace};

/// Basis of the commutant `{M : M ad_T = ad_T M for all basis tuples T}`,
/// together with the basis of its subspace of form-symmetric elements.
#[derive(Clone, Debug)]
pub struct CommutantBasis {
    pub full: Vec<Matrix>,
    pub b_symmetric: Vec<Matrix>,
}

fn matrix_to_vec(m: &Matrix) -> Vec<Rational> {
    let d = m.rows();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.extend(m.row(i).iter().cloned());
    }
    out
}

fn vec_to_matrix(d: usize, v: &[Rational]) -> Matrix {
    Matrix::from_fn(d, d, |i, j| v[i * d + j].clone())
}

/// Canonicalizes a spanning set of d x d matrices through the subspace
/// machinery, so the returned basis is deterministic.
fn canonical_matrix_basis(d: usize, mats: Vec<Matrix>) -> Vec<Matrix> {
    let rows: Vec<Vec<Rational>> = mats.iter().map(matrix_to_vec).collect();
    let space = Subspace::span(d * d, &rows).expect("vectorized matrices share the length");
    space.basis_rows().map(|r| vec_to_matrix(d, r)).collect()
}

/// Solves `sum_k p_k mats[k] = 0`: returns a basis of coefficient vectors.
fn kernel_of_value_maps(d: usize, mats: &[Matrix]) -> Vec<Vec<Rational>> {
    let k = mats.len();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if mats.iter().any(|m| !m[(i, j)].is_zero()) {
                rows.push(mats.iter().map(|m| m[(i, j)].clone()).collect());
            }
        }
    }
    if rows.is_empty() {
        // No constraints: every coefficient vector works.
        return (0..k)
            .map(|i| {
                let mut v = vec![Rational::zero(); k];
                v[i] = Rational::one();
                v
            })
            .collect();
    }
    let m = Matrix::from_rows(rows).expect("constraint rows share the length");
    Subspace::kernel_of(&m)
        .basis_rows()
        .map(<[Rational]>::to_vec)
        .collect()
}

fn combine(basis: &[Matrix], combos: &[Vec<Rational>]) -> Vec<Matrix> {
    combos
        .iter()
        .map(|c| {
            let d = basis[0].rows();
            let mut out = Matrix::zeros(d, d);
            for (coeff, b) in c.iter().zip(basis) {
                if coeff.is_zero() {
                    continue;
                }
                for i in 0..d {
                    for j in 0..d {
                        if !b[(i, j)].is_zero() {
                            let delta = coeff * &b[(i, j)];
                            out[(i, j)] += delta;
                        }
                    }
                }
            }
            out
        })
        .collect()
}

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.matmul(b)
        .and_then(|ab| b.matmul(a).and_then(|ba| ab.sub(&ba)))
        .expect("square matrices of equal size")
}

fn nnz(m: &Matrix) -> usize {
    let mut count = 0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m[(i, j)].is_zero() {
                count += 1;
            }
        }
    }
    count
}

/// Direct solve of `M A = A M` over all of `End(V)`: kernel of the sparse
/// Sylvester system, restricted to the rows that can be nonzero.
fn solve_first(d: usize, a: &Matrix) -> Vec<Matrix> {
    let mut col_nonzero = vec![false; d];
    let mut row_nonzero = vec![false; d];
    for i in 0..d {
        for j in 0..d {
            if !a[(i, j)].is_zero() {
                row_nonzero[i] = true;
                col_nonzero[j] = true;
            }
        }
    }
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if !row_nonzero[i] && !col_nonzero[j] {
                continue;
            }
            let mut r = vec![Rational::zero(); d * d];
            for l in 0..d {
                if !a[(l, j)].is_zero() {
                    r[i * d + l] += &a[(l, j)];
                }
                if !a[(i, l)].is_zero() {
                    r[l * d + j] -= &a[(i, l)];
                }
            }
            if r.iter().any(|c| !c.is_zero()) {
                rows.push(r);
            }
        }
    }
    if rows.is_empty() {
        return (0..d * d)
            .map(|p| {
                let mut v = vec![Rational::zero(); d * d];
                v[p] = Rational::one();
                vec_to_matrix(d, &v)
            })
            .collect();
    }
    let m = Matrix::from_rows(rows).expect("rows share the length");
    Subspace::kernel_of(&m)
        .basis_rows()
        .map(|r| vec_to_matrix(d, r))
        .collect()
}

/// Computes the commutant basis and its form-symmetric subspace.
///
/// Precondition (not re-verified here): the algebra passes its Jacobi
/// check, so the adjoints actually generate the structure in question.
pub fn commutant(malg: &MetricNAlgebra) -> CommutantBasis {
    let d = malg.dim();
    let alg = &malg.algebra;
    let mut adjoints: Vec<Matrix> = alg
        .one_hole_tuples()
        .iter()
        .map(|t| alg.adjoint_matrix(t))
        .filter(|a| !a.is_zero())
        .collect();
    adjoints.sort_by_key(|a| std::cmp::Reverse(nnz(a)));

    let mut basis: Option<Vec<Matrix>> = None;
    for a in &adjoints {
        match basis {
            None => basis = Some(solve_first(d, a)),
            Some(ref bs) => {
                if bs.is_empty() {
                    break;
                }
                let commutators: Vec<Matrix> = bs.iter().map(|b| commutator(b, a)).collect();
                if commutators.iter().all(Matrix::is_zero) {
                    continue;
                }
                let combos = kernel_of_value_maps(d, &commutators);
                basis = Some(combine(bs, &combos));
            }
        }
    }
    let full = match basis {
        Some(bs) => canonical_matrix_basis(d, bs),
        None => {
            // Abelian algebra: everything commutes.
            let mut all = Vec::with_capacity(d * d);
            for p in 0..d * d {
                let mut v = vec![Rational::zero(); d * d];
                v[p] = Rational::one();
                all.push(vec_to_matrix(d, &v));
            }
            all
        }
    };

    // Form-symmetric subspace: g M = (g M)^T within the commutant.
    let b_symmetric = if full.is_empty() {
        Vec::new()
    } else {
        let g = malg.form.gram();
        let defects: Vec<Matrix> = full
            .iter()
            .map(|b| {
                let gb = g.matmul(b).expect("square matrices");
                gb.sub(&gb.transpose()).expect("same shape")
            })
            .collect();
        let combos = kernel_of_value_maps(d, &defects);
        canonical_matrix_basis(d, combine(&full, &combos))
    };

    CommutantBasis { full, b_symmetric }
}

/// Dimension of the quotient of the commutant by its trace radical.
///
/// In characteristic zero the radical of a matrix algebra is the kernel of
/// the trace form `(x, y) -> tr(x y)`: power traces of trace-radical
/// elements vanish, so they are nilpotent. A quotient of dimension one
/// leaves no room for idempotents other than 0 and 1, which certifies
/// indecomposability.
pub fn radical_quotient_dim(basis: &[Matrix]) -> usize {
    let k = basis.len();
    if k == 0 {
        return 0;
    }
    let mut gram = Matrix::zeros(k, k);
    for a in 0..k {
        for b in a..k {
            let t = basis[a]
                .matmul(&basis[b])
                .expect("square matrices")
                .trace();
            gram[(a, b)] = t.clone();
            gram[(b, a)] = t;
        }
    }
    gram.rank()
}

/// Basis of the centre of the commutant (elements commuting with every
/// basis element).
pub fn centre_of(basis: &[Matrix]) -> Vec<Matrix> {
    let k = basis.len();
    if k == 0 {
        return Vec::new();
    }
    let d = basis[0].rows();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for b in basis {
        let commutators: Vec<Matrix> = basis.iter().map(|a| commutator(a, b)).collect();
        for i in 0..d {
            for j in 0..d {
                if commutators.iter().any(|c| !c[(i, j)].is_zero()) {
                    rows.push(commutators.iter().map(|c| c[(i, j)].clone()).collect());
                }
            }
        }
    }
    let combos = if rows.is_empty() {
        (0..k)
            .map(|i| {
                let mut v = vec![Rational::zero(); k];
                v[i] = Rational::one();
                v
            })
            .collect()
    } else {
        let m = Matrix::from_rows(rows).expect("rows share the length");
        Subspace::kernel_of(&m)
            .basis_rows()
            .map(<[Rational]>::to_vec)
            .collect::<Vec<_>>()
    };
    canonical_matrix_basis(d, combine(basis, &combos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::NAlgebra;
    use crate::construct::{simple, SignVector};
    use crate::linalg::BilinearForm;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn commutant_of_simple_is_scalars() {
        let s3 = simple(3, &SignVector::all_plus(3), &q(1)).unwrap();
        let com = commutant(&s3);
        assert_eq!(com.full.len(), 1);
        assert_eq!(com.b_symmetric.len(), 1);
        assert!(com.full[0].scale(&com.full[0][(0, 0)].recip().unwrap()).is_identity());
        assert_eq!(radical_quotient_dim(&com.full), 1);
    }

    #[test]
    fn commutant_of_abelian_is_everything() {
        let alg = NAlgebra::abelian(3, 2).unwrap();
        let malg = MetricNAlgebra::new(alg, BilinearForm::identity(2)).unwrap();
        let com = commutant(&malg);
        assert_eq!(com.full.len(), 4);
        assert_eq!(com.b_symmetric.len(), 3);
    }

    #[test]
    fn block_projections_commute_in_a_direct_sum() {
        let s3 = simple(3, &SignVector::all_plus(3), &q(1)).unwrap();
        let sum = s3.direct_sum(&s3).unwrap();
        let com = commutant(&sum);
        assert_eq!(com.full.len(), 2);
        assert_eq!(com.b_symmetric.len(), 2);
        // The two block projections belong to the symmetric commutant span.
        let p1 = Matrix::from_fn(8, 8, |i, j| {
            if i == j && i < 4 {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let rows: Vec<Vec<Rational>> = com.b_symmetric.iter().map(matrix_to_vec).collect();
        let space = Subspace::span(64, &rows).unwrap();
        assert!(space.contains_vector(&matrix_to_vec(&p1)));
        assert_eq!(radical_quotient_dim(&com.full), 2);
    }
}
