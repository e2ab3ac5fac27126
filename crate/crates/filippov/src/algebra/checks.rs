//! Verification of the n-Jacobi identity, metric invariance, homomorphisms
//! and isometries.
//!
//! Both sides of each identity are multilinear and alternating, so checking
//! canonical basis tuples is sufficient. The checks only walk tuple pairs on
//! which at least one side can be nonzero; everything else is `0 = 0`. That
//! keeps them fast on the sparse tables produced by the constructors without
//! giving up completeness: a violating pair always has a nonzero side.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::algebra::{IndexTuple, MetricNAlgebra, NAlgebra, Violation, ViolationReport};
use crate::error::{Error, Result};
use crate::linalg::{for_each_combination, BilinearForm, Matrix, Rational};

/// Materialized canonical k-subsets of `{0, .., n-1}`.
fn combination_list(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_combination(n, k, |c| out.push(c.to_vec()));
    out
}

impl NAlgebra {
    /// Checks the n-Jacobi identity
    /// `[x_1..x_{n-1}, [y_1..y_n]] = sum_i [y_1, .., [x_1..x_{n-1}, y_i], .., y_n]`
    /// on all canonical basis tuples. The report lists every violating pair.
    ///
    /// Tuple pairs are evaluated in parallel; the witness list is sorted
    /// afterwards, so the report is identical to a sequential run.
    pub fn check_jacobi(&self) -> ViolationReport {
        let n = self.arity();
        let d = self.dim();
        if self.table().is_empty() {
            return ViolationReport::empty();
        }
        let keys: Vec<IndexTuple> = self.table().keys().cloned().collect();

        // Pairs with a possibly nonzero left-hand side: y must be a stored
        // tuple; x ranges over every canonical (n-1)-tuple.
        let xs = combination_list(d, n - 1);
        let mut violations: Vec<Violation> = xs
            .par_iter()
            .flat_map_iter(|x| {
                keys.iter().filter_map(move |y| {
                    self.jacobi_defect(x, y.indices()).map(|mismatch| {
                        Violation::Jacobi {
                            x: IndexTuple::from_sorted(x.clone()).expect("sorted"),
                            y: y.clone(),
                            mismatch,
                        }
                    })
                })
            })
            .collect();

        // Pairs with a possibly nonzero right-hand side: x must complete to
        // a stored tuple by one index, and y must contain such a completion.
        // Stored y tuples were already covered above.
        let mut x_set: BTreeSet<Vec<usize>> = BTreeSet::new();
        for key in &keys {
            for pos in 0..key.len() {
                let mut x = key.indices().to_vec();
                x.remove(pos);
                x_set.insert(x);
            }
        }
        let x_list: Vec<Vec<usize>> = x_set.into_iter().collect();
        let stage2: Vec<Violation> = x_list
            .par_iter()
            .flat_map_iter(|x| {
                let mut completions: Vec<bool> = vec![false; d];
                let mut any = false;
                let mut buf = Vec::with_capacity(n);
                for c in 0..d {
                    if x.binary_search(&c).is_ok() {
                        continue;
                    }
                    buf.clear();
                    buf.extend_from_slice(x);
                    buf.push(c);
                    buf.sort_unstable();
                    if self.table().contains_key(buf.as_slice()) {
                        completions[c] = true;
                        any = true;
                    }
                }
                let mut found = Vec::new();
                if any {
                    for_each_combination(d, n, |y| {
                        if self.table().contains_key(y) {
                            return;
                        }
                        if !y.iter().any(|&c| completions[c]) {
                            return;
                        }
                        if let Some(mismatch) = self.jacobi_defect(x, y) {
                            found.push(Violation::Jacobi {
                                x: IndexTuple::from_sorted(x.clone()).expect("sorted"),
                                y: IndexTuple::from_sorted(y.to_vec())
                                    .expect("combination is sorted"),
                                mismatch,
                            });
                        }
                    });
                }
                found
            })
            .collect();
        violations.extend(stage2);

        ViolationReport::new(violations)
    }

    /// `[x, [y]] - sum_i [y_1, .., [x, y_i], .., y_n]` on canonical tuples
    /// `x` (length n-1) and `y` (length n); `None` when it vanishes.
    fn jacobi_defect(&self, x: &[usize], y: &[usize]) -> Option<Vec<Rational>> {
        let d = self.dim();
        let n = self.arity();
        let mut acc = vec![Rational::zero(); d];
        let mut buf: Vec<usize> = Vec::with_capacity(n);

        if let Some(inner) = self.table().get(y) {
            for (j, cj) in inner.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                buf.clear();
                buf.extend_from_slice(x);
                buf.push(j);
                if let Some((sign, outer)) = self.basis_bracket_buf(&mut buf) {
                    let f = cj.with_sign(sign);
                    for (a, v) in acc.iter_mut().zip(outer) {
                        if !v.is_zero() {
                            let delta = &f * v;
                            *a += delta;
                        }
                    }
                }
            }
        }

        let mut ybuf: Vec<usize> = y.to_vec();
        for i in 0..n {
            buf.clear();
            buf.extend_from_slice(x);
            buf.push(y[i]);
            let Some((s1, inner)) = self.basis_bracket_buf(&mut buf) else {
                continue;
            };
            for (j, cj) in inner.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                ybuf.copy_from_slice(y);
                ybuf[i] = j;
                let mut term = ybuf.clone();
                if let Some((s2, outer)) = self.basis_bracket_buf(&mut term) {
                    let f = cj.with_sign(s1 * s2);
                    for (a, v) in acc.iter_mut().zip(outer) {
                        if !v.is_zero() {
                            let delta = &f * v;
                            *a -= delta;
                        }
                    }
                }
            }
        }

        if acc.iter().all(Rational::is_zero) {
            None
        } else {
            Some(acc)
        }
    }
}

impl MetricNAlgebra {
    /// Checks that every left multiplication is skewsymmetric for the form:
    /// `<[x, e_y], e_z> + <e_y, [x, e_z]> = 0` on all canonical basis
    /// tuples. Requires a nondegenerate form.
    pub fn check_metric(&self) -> Result<ViolationReport> {
        let radical = self.form.radical();
        if !radical.is_zero() {
            return Err(Error::DegenerateForm {
                radical: radical.rank(),
            });
        }
        let alg = &self.algebra;
        let d = alg.dim();

        // Only triples where one of the two brackets can be nonzero matter.
        let mut triples: BTreeSet<(Vec<usize>, usize, usize)> = BTreeSet::new();
        for key in alg.table().keys() {
            for pos in 0..key.len() {
                let mut x = key.indices().to_vec();
                let k = x.remove(pos);
                for other in 0..d {
                    triples.insert((x.clone(), k.min(other), k.max(other)));
                }
            }
        }

        let triples: Vec<(Vec<usize>, usize, usize)> = triples.into_iter().collect();
        let violations: Vec<Violation> = triples
            .into_par_iter()
            .filter_map(|(x, y, z)| {
                let mut buf = Vec::with_capacity(alg.arity());
                let mut t = Rational::zero();
                buf.extend_from_slice(&x);
                buf.push(y);
                if let Some((sign, c)) = alg.basis_bracket_buf(&mut buf) {
                    t += self.form.inner_with_basis(c, z).with_sign(sign);
                }
                buf.clear();
                buf.extend_from_slice(&x);
                buf.push(z);
                if let Some((sign, c)) = alg.basis_bracket_buf(&mut buf) {
                    t += self.form.inner_with_basis(c, y).with_sign(sign);
                }
                if t.is_zero() {
                    None
                } else {
                    Some(Violation::Metric {
                        x: IndexTuple::from_sorted(x).expect("sorted"),
                        y,
                        z,
                        mismatch: t,
                    })
                }
            })
            .collect();
        Ok(ViolationReport::new(violations))
    }
}

/// Checks `phi([e_t..]_a) = [phi(e_t)..]_b` on every canonical basis tuple
/// of `a`. `phi` maps `a`-coordinates to `b`-coordinates (columns are images
/// of basis vectors).
pub fn check_morphism(phi: &Matrix, a: &NAlgebra, b: &NAlgebra) -> Result<ViolationReport> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch {
            expected: a.arity(),
            found: b.arity(),
        });
    }
    if phi.rows() != b.dim() || phi.cols() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim() * a.dim(),
            found: phi.rows() * phi.cols(),
        });
    }
    let columns: Vec<Vec<Rational>> = (0..a.dim()).map(|j| phi.column(j)).collect();
    let tuples = combination_list(a.dim(), a.arity());
    let violations: Vec<Violation> = tuples
        .into_par_iter()
        .filter_map(|t| {
            let lhs = match a.table().get(t.as_slice()) {
                Some(v) => phi.mul_vec(v).expect("dimensions agree"),
                None => vec![Rational::zero(); b.dim()],
            };
            let args: Vec<&[Rational]> = t.iter().map(|&i| columns[i].as_slice()).collect();
            let rhs = b.bracket(&args).expect("dimensions agree");
            let mismatch: Vec<Rational> = lhs.iter().zip(&rhs).map(|(l, r)| l - r).collect();
            if mismatch.iter().any(|c| !c.is_zero()) {
                Some(Violation::NotHomomorphism {
                    tuple: IndexTuple::from_sorted(t).expect("sorted"),
                    mismatch,
                })
            } else {
                None
            }
        })
        .collect();
    Ok(ViolationReport::new(violations))
}

/// Checks `phi^T * gram_b * phi = gram_a`, i.e. that `phi` pulls the form
/// on `b` back to the form on `a`.
pub fn check_isometry(
    phi: &Matrix,
    a: &BilinearForm,
    b: &BilinearForm,
) -> Result<ViolationReport> {
    if phi.rows() != b.dim() || phi.cols() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim() * a.dim(),
            found: phi.rows() * phi.cols(),
        });
    }
    let pulled = phi.transpose().matmul(b.gram())?.matmul(phi)?;
    let mut violations = Vec::new();
    for i in 0..a.dim() {
        for j in i..a.dim() {
            let mismatch = &pulled[(i, j)] - &a.gram()[(i, j)];
            if !mismatch.is_zero() {
                violations.push(Violation::Skew {
                    row: i,
                    col: j,
                    mismatch,
                });
            }
        }
    }
    Ok(ViolationReport::new(violations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::combinations;
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn unit(dim: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); dim];
        v[i] = Rational::one();
        v
    }

    /// Independent oracle: evaluates the Jacobi identity on every canonical
    /// tuple pair through the public multilinear `bracket`, with no pruning.
    fn naive_jacobi_violations(alg: &NAlgebra) -> Vec<(Vec<usize>, Vec<usize>)> {
        let n = alg.arity();
        let d = alg.dim();
        let basis: Vec<Vec<Rational>> = (0..d).map(|i| unit(d, i)).collect();
        let mut bad = Vec::new();
        for x in combinations(d, n - 1) {
            for y in combinations(d, n) {
                let inner: Vec<Rational> = alg
                    .bracket(&y.iter().map(|&i| basis[i].as_slice()).collect::<Vec<_>>())
                    .unwrap();
                let mut args: Vec<&[Rational]> =
                    x.iter().map(|&i| basis[i].as_slice()).collect();
                args.push(&inner);
                let lhs = alg.bracket(&args).unwrap();

                let mut rhs = vec![Rational::zero(); d];
                for i in 0..n {
                    let mut xa: Vec<&[Rational]> =
                        x.iter().map(|&i| basis[i].as_slice()).collect();
                    xa.push(basis[y[i]].as_slice());
                    let moved = alg.bracket(&xa).unwrap();
                    let mut ya: Vec<&[Rational]> =
                        y.iter().map(|&i| basis[i].as_slice()).collect();
                    ya[i] = &moved;
                    let term = alg.bracket(&ya).unwrap();
                    for (r, t) in rhs.iter_mut().zip(term) {
                        *r += t;
                    }
                }
                if lhs != rhs {
                    bad.push((x.clone(), y.clone()));
                }
            }
        }
        bad
    }

    /// Independent oracle for the invariance check.
    fn naive_metric_violations(malg: &MetricNAlgebra) -> Vec<(Vec<usize>, usize, usize)> {
        let n = malg.arity();
        let d = malg.dim();
        let basis: Vec<Vec<Rational>> = (0..d).map(|i| unit(d, i)).collect();
        let mut bad = Vec::new();
        for x in combinations(d, n - 1) {
            for y in 0..d {
                for z in y..d {
                    let mut a1: Vec<&[Rational]> =
                        x.iter().map(|&i| basis[i].as_slice()).collect();
                    a1.push(basis[y].as_slice());
                    let b1 = malg.algebra.bracket(&a1).unwrap();
                    let mut a2: Vec<&[Rational]> =
                        x.iter().map(|&i| basis[i].as_slice()).collect();
                    a2.push(basis[z].as_slice());
                    let b2 = malg.algebra.bracket(&a2).unwrap();
                    let t = malg.form.inner(&b1, &basis[z]).unwrap()
                        + malg.form.inner(&basis[y], &b2).unwrap();
                    if !t.is_zero() {
                        bad.push((x.clone(), y, z));
                    }
                }
            }
        }
        bad
    }

    /// The 4-dimensional arity-3 table with all signs +1, except that the
    /// [e1,e2,e3] entry is redirected to `target * e_basis`.
    fn s3_like(basis: usize, target: i64) -> NAlgebra {
        let entries = vec![
            (vec![1, 2, 3], {
                let mut v = vec![Rational::zero(); 4];
                v[0] = q(-1);
                v
            }),
            (vec![0, 2, 3], {
                let mut v = vec![Rational::zero(); 4];
                v[1] = q(1);
                v
            }),
            (vec![0, 1, 3], {
                let mut v = vec![Rational::zero(); 4];
                v[2] = q(-1);
                v
            }),
            (vec![0, 1, 2], {
                let mut v = vec![Rational::zero(); 4];
                v[basis] = q(target);
                v
            }),
        ];
        NAlgebra::from_entries(3, 4, entries).unwrap()
    }

    #[test]
    fn abelian_algebra_satisfies_jacobi() {
        let alg = NAlgebra::abelian(4, 5).unwrap();
        assert!(alg.check_jacobi().is_empty());
    }

    #[test]
    fn simple_table_satisfies_jacobi_and_redirected_entry_breaks_it() {
        assert!(s3_like(3, 1).check_jacobi().is_empty());
        // Scaling a single entry does NOT break the identity: over the
        // reals the scaled table is the same algebra in a rescaled basis.
        // The brute-force oracle below agrees.
        let scaled = s3_like(3, 2);
        assert!(scaled.check_jacobi().is_empty());
        assert!(naive_jacobi_violations(&scaled).is_empty());
        // Redirecting [e1,e2,e3] to e1 does break it: for x = (e1, e2) and
        // y = (e1, e2, e4) the left side vanishes while the right side is
        // [[e2,e3,e1], e2, e4] = -e3.
        let broken = s3_like(0, 1);
        let report = broken.check_jacobi();
        assert!(!report.is_empty());
        let naive = naive_jacobi_violations(&broken);
        assert_eq!(report.len(), naive.len());
    }

    #[test]
    fn metric_check_on_diagonal_forms() {
        let alg = s3_like(3, 1);
        let good = MetricNAlgebra::new(alg.clone(), BilinearForm::identity(4)).unwrap();
        assert!(good.check_metric().unwrap().is_empty());

        let bad_form = BilinearForm::diagonal(&[q(1), q(1), q(1), q(-1)]);
        let bad = MetricNAlgebra::new(alg, bad_form).unwrap();
        let report = bad.check_metric().unwrap();
        assert!(!report.is_empty());
        assert_eq!(report.len(), naive_metric_violations(&bad).len());
    }

    #[test]
    fn metric_check_rejects_degenerate_forms() {
        let alg = NAlgebra::abelian(3, 2).unwrap();
        let degenerate = BilinearForm::diagonal(&[q(1), q(0)]);
        let malg = MetricNAlgebra::new(alg, degenerate).unwrap();
        assert!(matches!(
            malg.check_metric(),
            Err(Error::DegenerateForm { radical: 1 })
        ));
    }

    #[test]
    fn scaling_is_not_a_morphism_for_higher_arity() {
        // The bracket is n-homogeneous: scaling by 2 multiplies the left
        // side by 2 and the right side by 2^n.
        let alg = s3_like(3, 1);
        let two = Matrix::identity(4).scale(&q(2));
        let report = check_morphism(&two, &alg, &alg).unwrap();
        assert!(!report.is_empty());
        let id = Matrix::identity(4);
        assert!(check_morphism(&id, &alg, &alg).unwrap().is_empty());
    }

    #[test]
    fn isometry_check_detects_scaling() {
        let g = BilinearForm::identity(3);
        let ok = check_isometry(&Matrix::identity(3), &g, &g).unwrap();
        assert!(ok.is_empty());
        let two = Matrix::identity(3).scale(&q(2));
        assert!(!check_isometry(&two, &g, &g).unwrap().is_empty());
    }

    fn arb_table(arity: usize, dim: usize) -> impl Strategy<Value = NAlgebra> {
        let tuples = combinations(dim, arity);
        let count = tuples.len();
        proptest::collection::vec(
            proptest::collection::vec(-2i64..3, dim),
            count,
        )
        .prop_map(move |values| {
            let entries: Vec<(Vec<usize>, Vec<Rational>)> = tuples
                .iter()
                .cloned()
                .zip(values.into_iter().map(|row| row.into_iter().map(q).collect()))
                .collect();
            NAlgebra::from_entries(arity, dim, entries).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// The pruned Jacobi check agrees with the brute-force oracle on
        /// random (usually invalid) tables.
        #[test]
        fn jacobi_check_matches_naive_oracle(alg in arb_table(3, 4)) {
            let fast: Vec<(Vec<usize>, Vec<usize>)> = alg
                .check_jacobi()
                .iter()
                .map(|v| match v {
                    Violation::Jacobi { x, y, .. } => {
                        (x.indices().to_vec(), y.indices().to_vec())
                    }
                    _ => unreachable!(),
                })
                .collect();
            let naive = naive_jacobi_violations(&alg);
            prop_assert_eq!(fast, naive);
        }

        /// Same for the invariance check, against a random diagonal form.
        #[test]
        fn metric_check_matches_naive_oracle(
            alg in arb_table(3, 4),
            diag in proptest::collection::vec(prop_oneof![Just(1i64), Just(-1), Just(2)], 4),
        ) {
            let form = BilinearForm::diagonal(&diag.into_iter().map(q).collect::<Vec<_>>());
            let malg = MetricNAlgebra::new(alg, form).unwrap();
            let fast: Vec<(Vec<usize>, usize, usize)> = malg
                .check_metric()
                .unwrap()
                .iter()
                .map(|v| match v {
                    Violation::Metric { x, y, z, .. } => (x.indices().to_vec(), *y, *z),
                    _ => unreachable!(),
                })
                .collect();
            let naive = naive_metric_violations(&malg);
            prop_assert_eq!(fast, naive);
        }

        /// Alternation on random vectors: a repeated argument kills the
        /// bracket.
        #[test]
        fn bracket_alternates_on_random_vectors(
            alg in arb_table(3, 4),
            x in proptest::collection::vec(-3i64..4, 4),
            y in proptest::collection::vec(-3i64..4, 4),
        ) {
            let x: Vec<Rational> = x.into_iter().map(q).collect();
            let y: Vec<Rational> = y.into_iter().map(q).collect();
            let out = alg.bracket(&[&x, &y, &x]).unwrap();
            prop_assert!(out.iter().all(Rational::is_zero));
        }
    }
}
