//! Exact rational linear algebra: scalars, matrices, canonical subspaces
//! and symmetric bilinear forms. Everything downstream is built on these
//! four types; no floating point appears anywhere.

mod form;
mod matrix;
mod rational;
mod subspace;

pub use form::BilinearForm;
pub use matrix::{Matrix, Rref};
pub use rational::Rational;
pub use subspace::Subspace;

/// Calls `f` with every k-subset of `{0, .., n-1}` in lexicographic order.
/// The slice passed to `f` is a scratch buffer; copy it if you keep it.
pub(crate) fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        f(&c);
        // Advance to the next combination, rightmost index first.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if c[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Collects every k-subset of `{0, .., n-1}`.
#[cfg(test)]
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_combination(n, k, |c| out.push(c.to_vec()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(4, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 4).len(), 0);
        assert_eq!(combinations(17, 4).len(), 2380);
        let all = combinations(4, 2);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted, "combinations come out lexicographically");
    }
}
