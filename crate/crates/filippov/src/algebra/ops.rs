//! Structure operations: derived ideal, centralisers, ideals and closures,
//! direct sums, coisotropic quotients, arity reduction and transport.

use rayon::prelude::*;

use crate::algebra::{IndexTuple, MetricNAlgebra, NAlgebra, Violation, ViolationReport};
use crate::error::{Error, Result};
use crate::linalg::{for_each_combination, Matrix, Rational, Subspace};

impl NAlgebra {
    /// The derived ideal `[V, .., V]`: the span of all basis brackets.
    pub fn derived_ideal(&self) -> Subspace {
        let rows: Vec<Vec<Rational>> = self.table().values().cloned().collect();
        Subspace::span(self.dim(), &rows).expect("table values have length dim")
    }

    /// The centraliser `Z(W) = {z : [z, w, e_.., e_..] = 0 for all w in W}`,
    /// computed as the kernel of the stacked constraint maps. The centre is
    /// `centraliser(full space)`.
    pub fn centraliser(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.ambient_dim(),
            });
        }
        let d = self.dim();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut buf = Vec::with_capacity(self.arity());
        for w in s.basis_rows() {
            for t in self.two_hole_tuples() {
                // The linear map z -> [z, w, e_t..]; stack its nonzero rows.
                let mut a = Matrix::zeros(d, d);
                let mut nonzero = false;
                for j in 0..d {
                    if t.contains(&j) {
                        continue;
                    }
                    for (k, wk) in w.iter().enumerate() {
                        if wk.is_zero() || k == j || t.contains(&k) {
                            continue;
                        }
                        buf.clear();
                        buf.push(j);
                        buf.push(k);
                        buf.extend_from_slice(&t);
                        if let Some((sign, c)) = self.basis_bracket_buf(&mut buf) {
                            let f = wk.with_sign(sign);
                            for (i, ci) in c.iter().enumerate() {
                                if !ci.is_zero() {
                                    let delta = &f * ci;
                                    a[(i, j)] += delta;
                                    nonzero = true;
                                }
                            }
                        }
                    }
                }
                if nonzero {
                    for i in 0..d {
                        if (0..d).any(|j| !a[(i, j)].is_zero()) {
                            rows.push(a.row_vec(i));
                        }
                    }
                }
            }
        }
        if rows.is_empty() {
            return Ok(Subspace::full(d));
        }
        Ok(Subspace::kernel_of(&Matrix::from_rows(rows)?))
    }

    /// The centre `{z : [z, V, .., V] = 0}`.
    pub fn centre(&self) -> Subspace {
        self.centraliser(&Subspace::full(self.dim()))
            .expect("ambient dimensions agree")
    }

    /// Empty report iff `[s, V, .., V]` stays inside `s`.
    pub fn is_ideal(&self, s: &Subspace) -> Result<ViolationReport> {
        if s.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.ambient_dim(),
            });
        }
        let mut violations = Vec::new();
        for (row_idx, w) in s.basis_rows().enumerate() {
            for t in self.one_hole_tuples() {
                let v = self.bracket_with_first(w, &t);
                if !s.contains_vector(&v) {
                    violations.push(Violation::NotIdeal {
                        generator: row_idx,
                        tuple: IndexTuple::from_sorted(t).expect("sorted"),
                        residue: s.reduce_vector(&v),
                    });
                }
            }
        }
        Ok(ViolationReport::new(violations))
    }

    /// Empty report iff `[s, .., s]` stays inside `s`.
    pub fn is_subalgebra(&self, s: &Subspace) -> Result<ViolationReport> {
        if s.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.ambient_dim(),
            });
        }
        let rows: Vec<&[Rational]> = s.basis_rows().collect();
        let mut violations = Vec::new();
        for_each_combination(s.rank(), self.arity(), |t| {
            let args: Vec<&[Rational]> = t.iter().map(|&i| rows[i]).collect();
            let v = self.bracket(&args).expect("dimensions agree");
            if !s.contains_vector(&v) {
                violations.push(Violation::NotClosed {
                    rows: IndexTuple::from_sorted(t.to_vec()).expect("sorted"),
                    residue: s.reduce_vector(&v),
                });
            }
        });
        Ok(ViolationReport::new(violations))
    }

    /// The smallest ideal containing `s`: the fixed point of
    /// `s <- s + [s, V, .., V]`.
    pub fn ideal_closure(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.ambient_dim(),
            });
        }
        let tuples = self.one_hole_tuples();
        let mut current = s.clone();
        loop {
            let before = current.rank();
            let mut rows: Vec<Vec<Rational>> =
                current.basis_rows().map(<[Rational]>::to_vec).collect();
            for w in current.basis_rows() {
                for t in &tuples {
                    rows.push(self.bracket_with_first(w, t));
                }
            }
            let next = Subspace::span(self.dim(), &rows)?;
            if next.rank() == before {
                return Ok(next);
            }
            current = next;
        }
    }

    /// The arity-(n-1) bracket `[x_1..x_{n-1}]_z := [x_1..x_{n-1}, z]`.
    /// Satisfies the (n-1)-Jacobi identity whenever `self` satisfies the
    /// n-Jacobi identity, and `z` is central in the result.
    pub fn reduce_by_element(&self, z: &[Rational]) -> Result<NAlgebra> {
        let n = self.arity();
        if n < 3 {
            return Err(Error::ArityTooSmall { min: 3, found: n });
        }
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: z.len(),
            });
        }
        let mut entries: Vec<(Vec<usize>, Vec<Rational>)> = Vec::new();
        for (key, value) in self.table() {
            for (pos, &k) in key.indices().iter().enumerate() {
                if z[k].is_zero() {
                    continue;
                }
                // Moving index k from its sorted slot to the last argument
                // costs (n-1-pos) transpositions.
                let sign = if (n - 1 - pos) % 2 == 0 { 1 } else { -1 };
                let f = z[k].with_sign(sign);
                let mut t = key.indices().to_vec();
                t.remove(pos);
                entries.push((t, value.iter().map(|c| &f * c).collect()));
            }
        }
        NAlgebra::from_entries(n - 1, self.dim(), entries)
    }

    /// The unique structure making `phi` an isomorphism from `self` onto the
    /// result: `[phi(x_1), .., phi(x_n)]_new = phi([x_1, .., x_n])`.
    pub fn transport(&self, phi: &Matrix) -> Result<NAlgebra> {
        let d = self.dim();
        if phi.rows() != d || phi.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: phi.rows().max(phi.cols()),
            });
        }
        let psi = phi.inverse()?;
        let psi_cols: Vec<Vec<Rational>> = (0..d).map(|j| psi.column(j)).collect();
        let mut tuples: Vec<Vec<usize>> = Vec::new();
        for_each_combination(d, self.arity(), |t| tuples.push(t.to_vec()));
        let entries: Vec<(Vec<usize>, Vec<Rational>)> = tuples
            .into_par_iter()
            .filter_map(|t| {
                let args: Vec<&[Rational]> = t.iter().map(|&i| psi_cols[i].as_slice()).collect();
                let w = self.bracket(&args).expect("dimensions agree");
                if w.iter().all(Rational::is_zero) {
                    return None;
                }
                let image = phi.mul_vec(&w).expect("dimensions agree");
                Some((t, image))
            })
            .collect();
        NAlgebra::from_entries(self.arity(), d, entries)
    }

    /// Block direct sum: mixed brackets vanish.
    pub fn direct_sum(&self, other: &NAlgebra) -> Result<NAlgebra> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: other.arity(),
            });
        }
        let d1 = self.dim();
        let d = d1 + other.dim();
        let mut entries: Vec<(Vec<usize>, Vec<Rational>)> = Vec::new();
        for (key, value) in self.table() {
            let mut v = value.clone();
            v.resize(d, Rational::zero());
            entries.push((key.indices().to_vec(), v));
        }
        for (key, value) in other.table() {
            let shifted: Vec<usize> = key.indices().iter().map(|&i| i + d1).collect();
            let mut v = vec![Rational::zero(); d1];
            v.extend(value.iter().cloned());
            entries.push((shifted, v));
        }
        NAlgebra::from_entries(self.arity(), d, entries)
    }
}

impl MetricNAlgebra {
    /// Orthogonal direct sum: mixed brackets and mixed inner products are
    /// zero. The zero-dimensional algebra is the identity.
    pub fn direct_sum(&self, other: &MetricNAlgebra) -> Result<MetricNAlgebra> {
        let algebra = self.algebra.direct_sum(&other.algebra)?;
        let form = self.form.direct_sum(&other.form);
        MetricNAlgebra::new(algebra, form)
    }

    /// The quotient `I / I^perp` of a coisotropic ideal, realized on the
    /// lexicographically first echelon complement of `I^perp` inside `I`.
    ///
    /// Returns the quotient algebra and the projection matrix `P` with
    /// `P x` = quotient coordinates of `x` (elements of `I^perp` and of the
    /// chosen complement of `I` in `V` project to zero). Well-definedness of
    /// the induced bracket is verified rather than assumed.
    pub fn quotient_coisotropic(&self, ideal: &Subspace) -> Result<(MetricNAlgebra, Matrix)> {
        let d = self.dim();
        if ideal.ambient_dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: ideal.ambient_dim(),
            });
        }
        let ideal_report = self.algebra.is_ideal(ideal)?;
        if !ideal_report.is_empty() {
            return Err(Error::NotIdeal {
                witnesses: ideal_report.len(),
            });
        }
        let radical = self.form.orthogonal_complement(ideal)?;
        if !ideal.contains(&radical) {
            return Err(Error::NotCoisotropic);
        }

        // Well-definedness: a bracket with one argument in I^perp and the
        // rest in I must land back in I^perp.
        let ideal_rows: Vec<&[Rational]> = ideal.basis_rows().collect();
        let n = self.arity();
        for p in radical.basis_rows() {
            let mut ill = false;
            for_each_combination(ideal_rows.len(), n - 1, |t| {
                if ill {
                    return;
                }
                let mut args: Vec<&[Rational]> = Vec::with_capacity(n);
                args.push(p);
                args.extend(t.iter().map(|&i| ideal_rows[i]));
                let v = self.algebra.bracket(&args).expect("dimensions agree");
                if !radical.contains_vector(&v) {
                    ill = true;
                }
            });
            if ill {
                return Err(Error::QuotientIllDefined);
            }
        }

        let section = radical.complement_within(ideal)?;
        let rest = ideal.complement_within(&Subspace::full(d))?;
        let k = section.rank();

        let mut rows: Vec<Vec<Rational>> = section.basis_rows().map(<[Rational]>::to_vec).collect();
        rows.extend(radical.basis_rows().map(<[Rational]>::to_vec));
        rows.extend(rest.basis_rows().map(<[Rational]>::to_vec));
        let m = Matrix::from_rows(rows)?;
        if m.rows() != d {
            return Err(Error::Construction(
                "complement bases do not span the ambient space".to_string(),
            ));
        }
        let minv_t = m.transpose().inverse()?;
        let projection = Matrix::from_fn(k, d, |i, j| minv_t[(i, j)].clone());

        let section_rows: Vec<&[Rational]> = section.basis_rows().collect();
        let mut entries: Vec<(Vec<usize>, Vec<Rational>)> = Vec::new();
        let mut ill = false;
        for_each_combination(k, n, |t| {
            if ill {
                return;
            }
            let args: Vec<&[Rational]> = t.iter().map(|&i| section_rows[i]).collect();
            let v = self.algebra.bracket(&args).expect("dimensions agree");
            let coords = projection.mul_vec(&v).expect("dimensions agree");
            // The part of v outside the section must lie in the radical.
            let lifted = section.lift(&coords);
            let residue: Vec<Rational> = v.iter().zip(&lifted).map(|(a, b)| a - b).collect();
            if !radical.contains_vector(&residue) {
                ill = true;
                return;
            }
            if coords.iter().any(|c| !c.is_zero()) {
                entries.push((t.to_vec(), coords));
            }
        });
        if ill {
            return Err(Error::QuotientIllDefined);
        }

        let q_alg = NAlgebra::from_entries(n, k, entries)?;
        let q_form = self.form.restrict(&section)?;
        if !q_form.is_nondegenerate() {
            let radical_dim = q_form.radical().rank();
            return Err(Error::DegenerateForm {
                radical: radical_dim,
            });
        }
        Ok((MetricNAlgebra::new(q_alg, q_form)?, projection))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::checks::check_morphism;
    use crate::linalg::BilinearForm;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn unit(dim: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); dim];
        v[i] = Rational::one();
        v
    }

    /// The arity-3, dimension-4 table with all signs +1.
    fn s3() -> NAlgebra {
        crate::construct::simple(3, &crate::construct::SignVector::all_plus(3), &q(1))
            .unwrap()
            .algebra
    }

    #[test]
    fn derived_ideal_of_abelian_is_zero() {
        let alg = NAlgebra::abelian(3, 4).unwrap();
        assert!(alg.derived_ideal().is_zero());
        assert_eq!(alg.centre(), Subspace::full(4));
    }

    #[test]
    fn derived_and_centre_of_simple() {
        let alg = s3();
        assert_eq!(alg.derived_ideal(), Subspace::full(4));
        assert!(alg.centre().is_zero());
    }

    #[test]
    fn lines_in_simple_are_not_ideals_and_close_to_everything() {
        let alg = s3();
        let line = Subspace::span(4, &[unit(4, 0)]).unwrap();
        let report = alg.is_ideal(&line).unwrap();
        assert!(!report.is_empty());
        assert_eq!(alg.ideal_closure(&line).unwrap(), Subspace::full(4));
        // The full space is always an ideal, and closures of ideals are
        // fixed points.
        assert!(alg.is_ideal(&Subspace::full(4)).unwrap().is_empty());
        let derived = alg.derived_ideal();
        assert!(alg.is_ideal(&derived).unwrap().is_empty());
        assert_eq!(alg.ideal_closure(&derived).unwrap(), derived);
    }

    #[test]
    fn reduction_of_s4_by_e5_carries_the_s3_table() {
        let s4 = crate::construct::simple(4, &crate::construct::SignVector::all_plus(4), &q(1))
            .unwrap()
            .algebra;
        let reduced = s4.reduce_by_element(&unit(5, 4)).unwrap();
        assert_eq!(reduced.arity(), 3);
        assert!(reduced.check_jacobi().is_empty());
        // e5 is central in the reduced algebra.
        let e5_line = Subspace::span(5, &[unit(5, 4)]).unwrap();
        assert!(reduced.centre().contains(&e5_line));
        // The derived ideal is span(e1..e4) and carries exactly the s3 table.
        let derived = reduced.derived_ideal();
        let expected =
            Subspace::span(5, &[unit(5, 0), unit(5, 1), unit(5, 2), unit(5, 3)]).unwrap();
        assert_eq!(derived, expected);
        let s3_table = s3();
        for (key, value) in s3_table.table() {
            let red_value = reduced
                .table()
                .get(key.indices())
                .expect("tuple present in the reduction");
            assert_eq!(&red_value[..4], value.as_slice());
            assert!(red_value[4].is_zero());
        }
    }

    #[test]
    fn reduction_by_zero_is_abelian_and_arity2_is_rejected() {
        let alg = s3();
        let zero = vec![Rational::zero(); 4];
        assert!(alg.reduce_by_element(&zero).unwrap().is_abelian());
        let lie = NAlgebra::abelian(2, 3).unwrap();
        assert!(matches!(
            lie.reduce_by_element(&unit(3, 0)),
            Err(Error::ArityTooSmall { .. })
        ));
    }

    #[test]
    fn transport_round_trip_and_morphism() {
        let alg = s3();
        // Swap e1 and e2.
        let mut phi = Matrix::zeros(4, 4);
        phi[(0, 1)] = q(1);
        phi[(1, 0)] = q(1);
        phi[(2, 2)] = q(1);
        phi[(3, 3)] = q(1);
        let moved = alg.transport(&phi).unwrap();
        assert!(check_morphism(&phi, &alg, &moved).unwrap().is_empty());
        assert!(moved.check_jacobi().is_empty());
        let back = moved.transport(&phi.inverse().unwrap()).unwrap();
        assert_eq!(back, alg);
        // Identity transport is the identity on tables.
        assert_eq!(alg.transport(&Matrix::identity(4)).unwrap(), alg);
    }

    #[test]
    fn direct_sum_block_structure() {
        let a = MetricNAlgebra::new(s3(), BilinearForm::identity(4)).unwrap();
        let b = MetricNAlgebra::new(NAlgebra::abelian(3, 2).unwrap(), BilinearForm::identity(2))
            .unwrap();
        let sum = a.direct_sum(&b).unwrap();
        assert_eq!(sum.dim(), 6);
        assert!(sum.algebra.check_jacobi().is_empty());
        assert!(sum.check_metric().unwrap().is_empty());
        assert_eq!(sum.algebra.centre().rank(), 2);
        // Zero-dimensional identity.
        let zero = MetricNAlgebra::new(
            NAlgebra::abelian(3, 0).unwrap(),
            BilinearForm::identity(0),
        )
        .unwrap();
        let same = a.direct_sum(&zero).unwrap();
        assert_eq!(same.algebra, a.algebra);
        assert_eq!(same.form, a.form);

        let double = a.direct_sum(&a).unwrap();
        assert_eq!(double.dim(), 8);
        assert_eq!(double.algebra.derived_ideal(), Subspace::full(8));
        assert!(double.algebra.centre().is_zero());
    }

    #[test]
    fn quotient_by_full_space_is_the_identity_operation() {
        let a = MetricNAlgebra::new(s3(), BilinearForm::identity(4)).unwrap();
        let (quotient, projection) = a.quotient_coisotropic(&Subspace::full(4)).unwrap();
        assert_eq!(quotient.algebra, a.algebra);
        assert_eq!(quotient.form, a.form);
        assert!(projection.is_identity());
    }

    #[test]
    fn quotient_rejects_non_ideals() {
        let a = MetricNAlgebra::new(s3(), BilinearForm::identity(4)).unwrap();
        let line = Subspace::span(4, &[unit(4, 0)]).unwrap();
        assert!(matches!(
            a.quotient_coisotropic(&line),
            Err(Error::NotIdeal { .. })
        ));
    }
}
