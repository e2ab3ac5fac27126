//! Shared helpers for the integration suites: a deterministic RNG and
//! exact rational isometries via the Cayley transform.

use filippov::{BilinearForm, Matrix, Rational};

/// SplitMix64: deterministic across platforms, good enough to scatter test
/// vectors.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// A small rational with numerator in -4..=4 and denominator in 1..=3.
    pub fn rational(&mut self) -> Rational {
        let num = self.below(9) as i64 - 4;
        let den = self.below(3) as i64 + 1;
        Rational::new(num, den).expect("nonzero denominator")
    }

    /// A small rational vector of the given length.
    pub fn vector(&mut self, dim: usize) -> Vec<Rational> {
        (0..dim).map(|_| self.rational()).collect()
    }
}

/// An exact isometry of `g` through the Cayley transform of a g-skew
/// matrix: `Q = (I - S)(I + S)^{-1}` with `S = A - g^{-1} A^T g`.
pub fn random_isometry(g: &BilinearForm, rng: &mut TestRng) -> Matrix {
    let d = g.dim();
    let ginv = g.gram().inverse().expect("nondegenerate form");
    loop {
        let a = Matrix::from_fn(d, d, |_, _| {
            // Sparse small entries keep the transform mild.
            if rng.below(3) == 0 {
                rng.rational()
            } else {
                Rational::zero()
            }
        });
        let skew = a
            .sub(&ginv.matmul(&a.transpose()).unwrap().matmul(g.gram()).unwrap())
            .unwrap();
        let plus = Matrix::identity(d).add(&skew).unwrap();
        if plus.det().is_zero() {
            continue;
        }
        let q = Matrix::identity(d)
            .sub(&skew)
            .unwrap()
            .matmul(&plus.inverse().unwrap())
            .unwrap();
        let pulled = q.transpose().matmul(g.gram()).unwrap().matmul(&q).unwrap();
        assert_eq!(&pulled, g.gram(), "Cayley transform must be an isometry");
        return q;
    }
}

/// The i-th standard basis vector.
pub fn unit(dim: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[i] = Rational::one();
    v
}

/// An exact isometry of the identity form: a signed permutation composed
/// with rational Givens rotations built from Pythagorean triples. Mixes
/// coordinates while keeping entries small.
pub fn random_orthogonal(dim: usize, rotations: usize, rng: &mut TestRng) -> Matrix {
    // Signed permutation.
    let mut perm: Vec<usize> = (0..dim).collect();
    for i in (1..dim).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    let mut q = Matrix::zeros(dim, dim);
    for (col, &row) in perm.iter().enumerate() {
        q[(row, col)] = if rng.below(2) == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
    }
    // Rational rotations in random coordinate planes.
    let triples: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (20, 21, 29)];
    for _ in 0..rotations {
        let i = rng.below(dim as u64) as usize;
        let mut j = rng.below(dim as u64 - 1) as usize;
        if j >= i {
            j += 1;
        }
        let (a, b, c) = triples[rng.below(4) as usize];
        let cos = Rational::new(a, c).unwrap();
        let sin = Rational::new(b, c).unwrap();
        let mut g = Matrix::identity(dim);
        g[(i, i)] = cos.clone();
        g[(j, j)] = cos;
        g[(i, j)] = -sin.clone();
        g[(j, i)] = sin;
        q = g.matmul(&q).unwrap();
    }
    let check = q.transpose().matmul(&q).unwrap();
    assert!(check.is_identity(), "orthogonal construction must be exact");
    q
}
