//! Subspaces of `F^n`: canonical bases, membership, and exhaustive enumeration.

use std::ops::ControlFlow;

use crate::field::FiniteField;
use crate::matrix::Matrix;

/// A subspace of `F^ambient`, stored by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: FiniteField> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn span<'a>(ambient: usize, vectors: impl IntoIterator<Item = &'a Vec<F>>) -> Self {
        let rows: Vec<Vec<F>> = vectors.into_iter().cloned().collect();
        let ech = Matrix::from_rows(ambient, &rows).echelon();
        let basis = (0..ech.pivots.len())
            .map(|r| ech.reduced.row(r).to_vec())
            .collect();
        Subspace {
            ambient,
            basis,
            pivots: ech.pivots,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after clearing the pivot coordinates; zero iff `v` is in the span.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let f = out[p];
            if !f.is_zero() {
                for (o, &b) in out.iter_mut().zip(row) {
                    *o -= f * b;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace<F>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn join(&self, other: &Subspace<F>) -> Subspace<F> {
        Subspace::span(self.ambient, self.basis.iter().chain(other.basis.iter()))
    }
}

/// Calls `f` on every linear combination of `basis`, in lexicographic
/// coefficient order (the zero combination first).
pub fn for_each_combination<F: FiniteField, B>(
    len: usize,
    basis: &[Vec<F>],
    mut f: impl FnMut(&[F], Vec<F>) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let k = basis.len();
    let p = F::CHARACTERISTIC;
    let mut digits = vec![0u32; k];
    loop {
        let coeffs: Vec<F> = digits.iter().map(|&d| F::from_u64(d as u64)).collect();
        let mut v = vec![F::zero(); len];
        for (c, b) in coeffs.iter().zip(basis) {
            if !c.is_zero() {
                for (o, &x) in v.iter_mut().zip(b) {
                    *o += *c * x;
                }
            }
        }
        f(&coeffs, v)?;
        // increment, least significant digit last
        let mut i = k;
        loop {
            if i == 0 {
                return ControlFlow::Continue(());
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Enumerates every subspace of `F^m` exactly once as a basis matrix whose
/// columns are the basis vectors (`m x k`), by dimension then pivot set then
/// free entries.
pub fn for_each_subspace<F: FiniteField, B>(
    m: usize,
    f: &mut impl FnMut(&Matrix<F>) -> ControlFlow<B>,
) -> ControlFlow<B> {
    for k in 0..=m {
        let mut pivots: Vec<usize> = (0..k).collect();
        loop {
            // free positions: (row, col) with col > pivot[row], col not a pivot
            let mut free = Vec::new();
            for (r, &p) in pivots.iter().enumerate() {
                for c in p + 1..m {
                    if !pivots.contains(&c) {
                        free.push((r, c));
                    }
                }
            }
            let total = (F::CHARACTERISTIC as u64).pow(free.len() as u32);
            for code in 0..total {
                let mut rows = vec![vec![F::zero(); m]; k];
                for (r, &p) in pivots.iter().enumerate() {
                    rows[r][p] = F::one();
                }
                let mut c = code;
                for &(r, col) in free.iter().rev() {
                    rows[r][col] = F::from_u64(c % F::CHARACTERISTIC as u64);
                    c /= F::CHARACTERISTIC as u64;
                }
                let basis = Matrix::from_columns(m, &rows);
                f(&basis)?;
            }
            if !next_combination(&mut pivots, m) {
                break;
            }
        }
    }
    ControlFlow::Continue(())
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Enumerates every subspace of `F^m` containing the column span of `base`,
/// each as a basis matrix `[base-basis | extra]`.
pub fn for_each_superspace<F: FiniteField, B>(
    base: &Matrix<F>,
    f: &mut impl FnMut(&Matrix<F>) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let m = base.rows();
    let base = base.image_matrix();
    let section = base.complement_columns();
    let q = section.cols();
    for_each_subspace::<F, B>(q, &mut |sub: &Matrix<F>| {
        let lifted = &section * sub;
        let full = Matrix::hstack(m, &[&base, &lifted]);
        f(&full)
    })
}

/// Number of subspaces of `F_q^m` (sum of Gaussian binomials), used by tests.
pub fn count_subspaces(q: u64, m: u32) -> u64 {
    let gauss = |k: u32| -> u64 {
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..k {
            num *= q.pow(m - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        num / den
    };
    (0..=m).map(gauss).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    type F2 = Fp<2>;
    type F3 = Fp<3>;

    fn count<F: FiniteField>(m: usize) -> u64 {
        let mut n = 0u64;
        let mut seen = std::collections::HashSet::new();
        let _ = for_each_subspace::<F, ()>(m, &mut |b| {
            n += 1;
            let s = Subspace::span(m, &b.columns());
            assert_eq!(s.dim(), b.cols());
            seen.insert(format!("{:?}", s.basis()));
            ControlFlow::Continue(())
        });
        assert_eq!(seen.len() as u64, n, "duplicate subspace emitted");
        n
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for m in 0..=4 {
            assert_eq!(count::<F2>(m), count_subspaces(2, m as u32));
        }
        for m in 0..=3 {
            assert_eq!(count::<F3>(m), count_subspaces(3, m as u32));
        }
        assert_eq!(count_subspaces(2, 2), 5);
    }

    #[test]
    fn superspaces_contain_base() {
        let base: Matrix<F2> = Matrix::from_u32_rows(1, &[vec![1], vec![0], vec![0]]);
        let b = Subspace::span(3, &base.columns());
        let mut n = 0;
        let _ = for_each_superspace::<F2, ()>(&base, &mut |s| {
            assert!(Subspace::span(3, &s.columns()).contains_subspace(&b));
            n += 1;
            ControlFlow::Continue(())
        });
        // subspaces of F_2^3 containing a line = subspaces of F_2^2
        assert_eq!(n, 5);
    }

    #[test]
    fn combinations_cover_span() {
        let basis = vec![vec![F3::new(1), F3::new(0)], vec![F3::new(1), F3::new(1)]];
        let mut vs = Vec::new();
        let _ = for_each_combination::<F3, ()>(2, &basis, |_, v| {
            vs.push(v);
            ControlFlow::Continue(())
        });
        assert_eq!(vs.len(), 9);
        vs.sort();
        vs.dedup();
        assert_eq!(vs.len(), 9);
    }

    #[test]
    fn membership_and_join() {
        let a = Subspace::span(3, &[vec![F2::new(1), F2::new(1), F2::new(0)]]);
        let b = Subspace::span(3, &[vec![F2::new(0), F2::new(1), F2::new(1)]]);
        let j = a.join(&b);
        assert_eq!(j.dim(), 2);
        assert!(j.contains(&[F2::new(1), F2::new(0), F2::new(1)]));
        assert!(!a.contains(&[F2::new(1), F2::new(0), F2::new(1)]));
    }
}
