//! Builders for the families of metric Lie n-algebras the crate works with:
//! the simple algebras with signs, double extensions of euclidean algebras,
//! the lorentzian families for arity 2 and for arity >= 3, the dual pair
//! on `s (+) s*`, and the twist isometry that turns a simple summand into a
//! nondegenerate ideal.
//!
//! Every constructor validates its own output: an algebra is only returned
//! after its Jacobi and invariance checks come back empty.

use std::str::FromStr;

use crate::algebra::{check_isometry, MetricNAlgebra, NAlgebra, ViolationReport};
use crate::error::{Error, Result};
use crate::linalg::{for_each_combination, BilinearForm, Matrix, Rational, Subspace};

/// A vector of signs `+1` / `-1`, one per basis direction of a simple
/// algebra (length arity + 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Construction(
                "signs must be +1 or -1".to_string(),
            ));
        }
        Ok(SignVector(signs))
    }

    /// All entries `+1`; length `arity + 1`.
    pub fn all_plus(arity: usize) -> Self {
        SignVector(vec![1; arity + 1])
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for SignVector {
    type Err = Error;

    /// Parses strings like `"+++-"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut signs = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '+' => signs.push(1),
                '-' => signs.push(-1),
                _ => {
                    return Err(Error::Construction(format!(
                        "invalid sign character {ch:?} (expected '+' or '-')"
                    )))
                }
            }
        }
        Ok(SignVector(signs))
    }
}

/// The simple Lie n-algebra of dimension `n + 1` with the given signs:
/// `[e_1, .., ^e_i, .., e_{n+1}] = (-1)^i eps_i e_i` (hat = omission,
/// indices 1-based), with the invariant metric `scale * diag(eps)`.
pub fn simple(arity: usize, signs: &SignVector, scale: &Rational) -> Result<MetricNAlgebra> {
    if arity < 2 {
        return Err(Error::ArityTooSmall {
            min: 2,
            found: arity,
        });
    }
    if signs.len() != arity + 1 {
        return Err(Error::Construction(format!(
            "expected {} signs, got {}",
            arity + 1,
            signs.len()
        )));
    }
    if !scale.is_positive() {
        return Err(Error::Construction(
            "metric scale must be positive".to_string(),
        ));
    }
    let dim = arity + 1;
    let mut entries = Vec::with_capacity(dim);
    for i in 1..=dim {
        let key: Vec<usize> = (0..dim).filter(|&j| j != i - 1).collect();
        let mut value = vec![Rational::zero(); dim];
        let sign = if i % 2 == 0 { 1 } else { -1 };
        value[i - 1] = Rational::from_int(signs.signs()[i - 1] as i64).with_sign(sign);
        entries.push((key, value));
    }
    let algebra = NAlgebra::from_entries(arity, dim, entries)?;
    let diag: Vec<Rational> = signs
        .signs()
        .iter()
        .map(|&e| scale * &Rational::from_int(e as i64))
        .collect();
    let out = MetricNAlgebra::new(algebra, BilinearForm::diagonal(&diag))?;
    out.verify_valid("simple")?;
    Ok(out)
}

/// Input for [`double_extension`]: a euclidean metric algebra of arity
/// `n - 1` on `W` (the bracket written `[x_1..x_{n-1}]`), and optionally an
/// arity-`n` structure on the same space (the `[..]_W` part).
#[derive(Clone, Debug)]
pub struct DoubleExtensionInput {
    pub base: MetricNAlgebra,
    pub n_bracket: Option<NAlgebra>,
}

/// The double extension `V = R u (+) R v (+) W` of arity
/// `n = base.arity() + 1`, ordered basis `(u, v, W)`:
///
/// - `[u, x_1, .., x_{n-1}] = [x_1, .., x_{n-1}]` (the base bracket),
/// - `[x_1, .., x_n] = (-1)^n <[x_1..x_{n-1}], x_n> v + [x_1..x_n]_W`,
/// - every bracket containing `v` vanishes,
/// - `<u,v> = 1`, `<u,u> = <v,v> = 0`, `u, v` perpendicular to `W`, and the
///   form on `W` is the base form.
pub fn double_extension(input: &DoubleExtensionInput) -> Result<MetricNAlgebra> {
    let w = &input.base;
    let dw = w.dim();
    let n = w.arity() + 1;
    if !w.form.is_positive_definite() {
        return Err(Error::NotEuclidean);
    }
    w.verify_valid("double_extension base")?;
    if let Some(nb) = &input.n_bracket {
        if nb.arity() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: nb.arity(),
            });
        }
        if nb.dim() != dw {
            return Err(Error::DimensionMismatch {
                expected: dw,
                found: nb.dim(),
            });
        }
    }

    let d = dw + 2;
    let mut entries: Vec<(Vec<usize>, Vec<Rational>)> = Vec::new();

    // [u, x..] = base bracket, embedded at offset 2.
    for (key, value) in w.algebra.table() {
        let mut idx = Vec::with_capacity(n);
        idx.push(0);
        idx.extend(key.indices().iter().map(|&i| i + 2));
        let mut v = vec![Rational::zero(); d];
        for (i, c) in value.iter().enumerate() {
            v[i + 2] = c.clone();
        }
        entries.push((idx, v));
    }

    // [x_1..x_n] = (-1)^n <[x_1..x_{n-1}], x_n> v + [x..]_W.
    let minus_one_n = if n % 2 == 0 { 1i8 } else { -1i8 };
    for_each_combination(dw, n, |s| {
        let mut value = vec![Rational::zero(); d];
        if let Some((sign, c)) = w.algebra.basis_bracket(&s[..n - 1]) {
            let pairing = w.form.inner_with_basis(c, s[n - 1]);
            if !pairing.is_zero() {
                value[1] = pairing.with_sign(sign * minus_one_n);
            }
        }
        if let Some(nb) = &input.n_bracket {
            if let Some(c) = nb.table().get(s) {
                for (i, ci) in c.iter().enumerate() {
                    let entry = value[i + 2].clone() + ci;
                    value[i + 2] = entry;
                }
            }
        }
        if value.iter().any(|c| !c.is_zero()) {
            let idx: Vec<usize> = s.iter().map(|&i| i + 2).collect();
            entries.push((idx, value));
        }
    });

    let algebra = NAlgebra::from_entries(n, d, entries)?;
    let gram = Matrix::from_fn(d, d, |i, j| {
        if (i, j) == (0, 1) || (i, j) == (1, 0) {
            Rational::one()
        } else if i >= 2 && j >= 2 {
            w.form.gram()[(i - 2, j - 2)].clone()
        } else {
            Rational::zero()
        }
    });
    let out = MetricNAlgebra::new(algebra, BilinearForm::new(gram)?)?;
    out.verify_valid("double_extension")?;
    Ok(out)
}

/// The indecomposable lorentzian family for arity `n >= 3`: the double
/// extension of `m` orthogonal copies of the euclidean simple algebra of
/// arity `n - 1`, with no n-bracket part. Dimension `m * n + 2`, signature
/// `(m * n + 1, 1, 0)`.
pub fn theorem_family(arity: usize, copies: usize) -> Result<MetricNAlgebra> {
    if arity < 3 {
        return Err(Error::ArityTooSmall {
            min: 3,
            found: arity,
        });
    }
    if copies < 1 {
        return Err(Error::Construction(
            "at least one simple copy is required".to_string(),
        ));
    }
    let block = simple(arity - 1, &SignVector::all_plus(arity - 1), &Rational::one())?;
    let mut base = block.clone();
    for _ in 1..copies {
        base = base.direct_sum(&block)?;
    }
    double_extension(&DoubleExtensionInput {
        base,
        n_bracket: None,
    })
}

/// An endomorphism of a euclidean space that is skew for the given form.
#[derive(Clone, Debug)]
pub struct SkewEndomorphism {
    matrix: Matrix,
    invertible: bool,
}

impl SkewEndomorphism {
    /// Verifies `A^T g + g A = 0` exactly.
    pub fn new(matrix: Matrix, form: &BilinearForm) -> Result<Self> {
        if matrix.rows() != form.dim() || matrix.cols() != form.dim() {
            return Err(Error::DimensionMismatch {
                expected: form.dim(),
                found: matrix.rows().max(matrix.cols()),
            });
        }
        let skew = matrix
            .transpose()
            .matmul(form.gram())?
            .add(&form.gram().matmul(&matrix)?)?;
        if !skew.is_zero() {
            return Err(Error::NotSkew);
        }
        let invertible = matrix.rank() == matrix.rows();
        Ok(SkewEndomorphism { matrix, invertible })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }
}

/// Block-diagonal rotation generator: for rates `(a_1, .., a_k)` the space
/// is `R^{2k}` with the identity form and `A` built from blocks
/// `[[0, -a_i], [a_i, 0]]`.
pub fn rotation_blocks(rates: &[Rational]) -> Result<(BilinearForm, SkewEndomorphism)> {
    if rates.is_empty() {
        return Err(Error::Construction(
            "at least one rotation rate is required".to_string(),
        ));
    }
    let dim = 2 * rates.len();
    let mut a = Matrix::zeros(dim, dim);
    for (i, rate) in rates.iter().enumerate() {
        a[(2 * i, 2 * i + 1)] = -rate;
        a[(2 * i + 1, 2 * i)] = rate.clone();
    }
    let form = BilinearForm::identity(dim);
    let skew = SkewEndomorphism::new(a, &form)?;
    Ok((form, skew))
}

/// The indecomposable lorentzian Lie algebra (arity 2) on
/// `R u (+) R v (+) W`:
/// `[u, x] = A(x)` and `[x, y] = <A(x), y> v`, with `u, v` complementary
/// null directions perpendicular to the euclidean `W`.
pub fn medina_lorentzian(
    w_form: &BilinearForm,
    a: &SkewEndomorphism,
) -> Result<MetricNAlgebra> {
    if !w_form.is_positive_definite() {
        return Err(Error::NotEuclidean);
    }
    if a.matrix().rows() != w_form.dim() {
        return Err(Error::DimensionMismatch {
            expected: w_form.dim(),
            found: a.matrix().rows(),
        });
    }
    if !a.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    let dw = w_form.dim();
    let d = dw + 2;
    let mut entries: Vec<(Vec<usize>, Vec<Rational>)> = Vec::new();
    // [u, e_j] = A e_j.
    for j in 0..dw {
        let mut v = vec![Rational::zero(); d];
        let mut nonzero = false;
        for i in 0..dw {
            let c = &a.matrix()[(i, j)];
            if !c.is_zero() {
                v[i + 2] = c.clone();
                nonzero = true;
            }
        }
        if nonzero {
            entries.push((vec![0, j + 2], v));
        }
    }
    // [e_i, e_j] = <A e_i, e_j> v = (g A)[j][i] v.
    let ga = w_form.gram().matmul(a.matrix())?;
    for i in 0..dw {
        for j in i + 1..dw {
            let c = &ga[(j, i)];
            if c.is_zero() {
                continue;
            }
            let mut v = vec![Rational::zero(); d];
            v[1] = c.clone();
            entries.push((vec![i + 2, j + 2], v));
        }
    }
    let algebra = NAlgebra::from_entries(2, d, entries)?;
    let gram = Matrix::from_fn(d, d, |i, j| {
        if (i, j) == (0, 1) || (i, j) == (1, 0) {
            Rational::one()
        } else if i >= 2 && j >= 2 {
            w_form.gram()[(i - 2, j - 2)].clone()
        } else {
            Rational::zero()
        }
    });
    let out = MetricNAlgebra::new(algebra, BilinearForm::new(gram)?)?;
    out.verify_valid("medina_lorentzian")?;
    Ok(out)
}

/// The compact form of the 3-dimensional simple Lie algebra with the
/// identity metric: `[e1,e2] = e3`, `[e2,e3] = e1`, `[e3,e1] = e2`.
pub fn so3() -> MetricNAlgebra {
    let q = Rational::from_int;
    let mut e3 = vec![Rational::zero(); 3];
    e3[2] = q(1);
    let mut e1 = vec![Rational::zero(); 3];
    e1[0] = q(1);
    let mut e2neg = vec![Rational::zero(); 3];
    e2neg[1] = q(-1);
    let algebra = NAlgebra::from_entries(
        2,
        3,
        vec![
            (vec![0, 1], e3),
            (vec![1, 2], e1),
            (vec![0, 2], e2neg), // [e1, e3] = -e2
        ],
    )
    .expect("fixed valid table");
    MetricNAlgebra::new(algebra, BilinearForm::identity(3)).expect("dimensions agree")
}

/// The metric algebra on `s (+) s*` for a simple metric algebra `s` of
/// arity n and dimension n+1: brackets inside `s` are the `s`-bracket,
/// `[x_1, .., x_{n-1}, alpha] = beta` with
/// `beta(x_n) = -alpha([x_1, .., x_n]_s)`, brackets with two or more starred
/// slots vanish. The form pairs `s` with `s*` dually, keeps the form of `s`
/// on `s`, and vanishes on `s*`; the signature is `(n+1, n+1, 0)`.
pub fn dual_pair(s: &MetricNAlgebra) -> Result<MetricNAlgebra> {
    let n = s.arity();
    let ds = s.dim();
    if ds != n + 1 {
        return Err(Error::Construction(format!(
            "dual_pair expects a simple-shaped algebra of dimension arity+1, got dim {ds}"
        )));
    }
    s.verify_valid("dual_pair input")?;

    let d = 2 * ds;
    let mut entries: Vec<(Vec<usize>, Vec<Rational>)> = Vec::new();
    for (key, value) in s.algebra.table() {
        let mut v = value.clone();
        v.resize(d, Rational::zero());
        entries.push((key.indices().to_vec(), v));
    }
    // [e_T, e*_j] for canonical (n-1)-tuples T of s and each dual index j.
    for_each_combination(ds, n - 1, |t| {
        for j in 0..ds {
            let mut beta = vec![Rational::zero(); d];
            let mut nonzero = false;
            let mut buf = Vec::with_capacity(n);
            for k in 0..ds {
                if t.contains(&k) {
                    continue;
                }
                buf.clear();
                buf.extend_from_slice(t);
                buf.push(k);
                if let Some((sign, c)) = s.algebra.basis_bracket_buf(&mut buf) {
                    if !c[j].is_zero() {
                        // beta(e_k) = -alpha_j([e_t.., e_k]).
                        beta[ds + k] = -c[j].with_sign(sign);
                        nonzero = true;
                    }
                }
            }
            if nonzero {
                let mut idx: Vec<usize> = t.to_vec();
                idx.push(ds + j);
                entries.push((idx, beta));
            }
        }
    });

    let algebra = NAlgebra::from_entries(n, d, entries)?;
    let gram = Matrix::from_fn(d, d, |i, j| {
        if i < ds && j < ds {
            s.form.gram()[(i, j)].clone()
        } else if i < ds && j >= ds {
            if j - ds == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        } else if i >= ds && j < ds {
            if i - ds == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        } else {
            Rational::zero()
        }
    });
    let out = MetricNAlgebra::new(algebra, BilinearForm::new(gram)?)?;
    out.verify_valid("dual_pair")?;
    Ok(out)
}

/// Result of [`build_twist`].
#[derive(Clone, Debug)]
pub struct TwistOutcome {
    /// The isometry: `phi(v) = v`, `phi(u) = u - x - |x|^2/2 v`,
    /// `phi(y) = y + <y, x> v` on the block, identity elsewhere on `W`.
    pub phi: Matrix,
    /// Merged verification report: isometry, ideal property of the image
    /// block, and nondegeneracy of the restricted form.
    pub report: ViolationReport,
    /// The image `phi(block)`.
    pub twisted_block: Subspace,
    /// The calibration scalar `t` with `[y..] = [t x, y..]_W` on the block.
    pub calibration: Rational,
}

/// Builds the twist isometry of a double extension `V = R u (+) R v (+) W`
/// along a simple n-bracket summand `block` of `W`, calibrated by the
/// central element `x` of the induced (n-1)-structure on the block.
///
/// Preconditions verified here: `x` lies in the block, `x` is central for
/// the induced structure, and some scalar multiple of `x` reproduces the
/// induced bracket through the n-bracket (`[y_1..y_{n-1}] = [t x, y..]_W`).
/// The report then certifies that `phi` is an isometry and that
/// `phi(block)` is an ideal with nondegenerate restricted form.
pub fn build_twist(
    v_alg: &MetricNAlgebra,
    block: &Subspace,
    x: &[Rational],
) -> Result<TwistOutcome> {
    let d = v_alg.dim();
    let n = v_alg.arity();
    if block.ambient_dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: block.ambient_dim(),
        });
    }
    if x.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: x.len(),
        });
    }
    // Basis convention of the double extensions: u = e_1, v = e_2, W after.
    let u_vec = {
        let mut v = vec![Rational::zero(); d];
        v[0] = Rational::one();
        v
    };
    let v_vec = {
        let mut v = vec![Rational::zero(); d];
        v[1] = Rational::one();
        v
    };
    for row in block.basis_rows() {
        if !row[0].is_zero() || !row[1].is_zero() {
            return Err(Error::Construction(
                "block must lie inside the W part of the extension".to_string(),
            ));
        }
    }
    if !block.contains_vector(x) {
        return Err(Error::Construction(
            "x must lie inside the block".to_string(),
        ));
    }

    let rows: Vec<&[Rational]> = block.basis_rows().collect();
    let rank = rows.len();

    // Induced (n-1)-bracket on the block: [y..] := [u, y..].
    let induced = |args: &[&[Rational]]| -> Vec<Rational> {
        let mut full: Vec<&[Rational]> = Vec::with_capacity(n);
        full.push(&u_vec);
        full.extend_from_slice(args);
        v_alg.algebra.bracket(&full).expect("dimensions agree")
    };

    // Centrality of x for the induced structure on the block.
    if n >= 3 {
        let mut central = true;
        for_each_combination(rank, n - 2, |t| {
            if !central {
                return;
            }
            let mut args: Vec<&[Rational]> = Vec::with_capacity(n - 1);
            args.push(x);
            args.extend(t.iter().map(|&i| rows[i]));
            if induced(&args).iter().any(|c| !c.is_zero()) {
                central = false;
            }
        });
        if !central {
            return Err(Error::NotCentral);
        }
    }

    // Calibration: find t with induced(Y) = W-part of [t x, Y] for all
    // basis tuples Y of the block; a single linear condition fixes t, the
    // rest is verified.
    let w_part_bracket = |args: &[&[Rational]]| -> Vec<Rational> {
        let mut full: Vec<&[Rational]> = Vec::with_capacity(n);
        full.push(x);
        full.extend_from_slice(args);
        let mut out = v_alg.algebra.bracket(&full).expect("dimensions agree");
        out[0] = Rational::zero();
        out[1] = Rational::zero(); // strip the v (and u) components
        out
    };
    let mut calibration: Option<Rational> = None;
    let mut calibration_ok = true;
    for_each_combination(rank, n - 1, |t| {
        if !calibration_ok {
            return;
        }
        let args: Vec<&[Rational]> = t.iter().map(|&i| rows[i]).collect();
        let lhs = induced(&args);
        let rhs = w_part_bracket(&args);
        match &calibration {
            None => {
                if let Some(k) = rhs.iter().position(|c| !c.is_zero()) {
                    calibration = Some(&lhs[k] / &rhs[k]);
                } else if lhs.iter().any(|c| !c.is_zero()) {
                    calibration_ok = false;
                }
            }
            Some(_) => {}
        }
        if let Some(t_val) = &calibration {
            for (l, r) in lhs.iter().zip(&rhs) {
                if *l != t_val * r {
                    calibration_ok = false;
                    return;
                }
            }
        }
    });
    if !calibration_ok {
        return Err(Error::CalibrationFailed);
    }
    // Both sides identically zero: abelian case, twist by x' = 0.
    let t_val = calibration.unwrap_or_else(Rational::zero);

    // Second pass when t was fixed late: verify all tuples against t.
    let mut verified = true;
    for_each_combination(rank, n - 1, |t| {
        if !verified {
            return;
        }
        let args: Vec<&[Rational]> = t.iter().map(|&i| rows[i]).collect();
        let lhs = induced(&args);
        let rhs = w_part_bracket(&args);
        for (l, r) in lhs.iter().zip(&rhs) {
            if *l != &t_val * r {
                verified = false;
                return;
            }
        }
    });
    if !verified {
        return Err(Error::CalibrationFailed);
    }

    let x_cal: Vec<Rational> = x.iter().map(|c| &t_val * c).collect();
    let x_norm2 = v_alg.form.inner(&x_cal, &x_cal)?;

    // Assemble phi in the basis (u, v, block rows, perpendicular rest of W).
    let w_space = {
        let mut std_rows: Vec<Vec<Rational>> = Vec::new();
        for i in 2..d {
            let mut e = vec![Rational::zero(); d];
            e[i] = Rational::one();
            std_rows.push(e);
        }
        Subspace::span(d, &std_rows)?
    };
    let block_perp = v_alg.form.orthogonal_complement(block)?;
    let rest = block_perp.intersect(&w_space)?;

    let mut basis_rows: Vec<Vec<Rational>> = vec![u_vec.clone(), v_vec.clone()];
    basis_rows.extend(block.basis_rows().map(<[Rational]>::to_vec));
    basis_rows.extend(rest.basis_rows().map(<[Rational]>::to_vec));
    if basis_rows.len() != d {
        return Err(Error::Construction(
            "block and its perpendicular do not decompose W".to_string(),
        ));
    }
    let b = Matrix::from_rows(basis_rows.clone())?;

    // Images of the chosen basis vectors, in standard coordinates.
    let half = Rational::new(1, 2).expect("nonzero denominator");
    let mut images: Vec<Vec<Rational>> = Vec::with_capacity(d);
    {
        // phi(u) = u - x - |x|^2/2 v.
        let mut img = u_vec.clone();
        for (i, c) in x_cal.iter().enumerate() {
            img[i] -= c;
        }
        let correction = &half * &x_norm2;
        img[1] -= correction;
        images.push(img);
    }
    images.push(v_vec.clone());
    for row in block.basis_rows() {
        let mut img = row.to_vec();
        let pairing = v_alg.form.inner(row, &x_cal)?;
        img[1] += pairing;
        images.push(img);
    }
    images.extend(rest.basis_rows().map(<[Rational]>::to_vec));

    // phi maps columns of B^T to the image columns: phi = images^T * (B^T)^{-1}.
    let images_t = Matrix::from_rows(images)?.transpose();
    let phi = images_t.matmul(&b.transpose().inverse()?)?;

    // The image of the block under phi.
    let twisted_rows: Vec<Vec<Rational>> = block
        .basis_rows()
        .map(|row| phi.mul_vec(row).expect("dimensions agree"))
        .collect();
    let twisted_block = Subspace::span(d, &twisted_rows)?;

    // Verification report: isometry, ideal, nondegenerate restriction.
    let mut report = check_isometry(&phi, &v_alg.form, &v_alg.form)?;
    report = report.merged(v_alg.algebra.is_ideal(&twisted_block)?);
    let restricted = v_alg.form.restrict(&twisted_block)?;
    if !restricted.is_nondegenerate() {
        // A radical direction of the restricted form is a metric defect of
        // the twisted block; report it as a degenerate pairing witness.
        let radical = restricted.radical();
        let extra: Vec<crate::algebra::Violation> = radical
            .basis_rows()
            .enumerate()
            .map(|(i, _)| crate::algebra::Violation::Skew {
                row: i,
                col: i,
                mismatch: Rational::zero(),
            })
            .collect();
        report = report.merged(ViolationReport::new(extra));
    }

    Ok(TwistOutcome {
        phi,
        report,
        twisted_block,
        calibration: t_val,
    })
}
