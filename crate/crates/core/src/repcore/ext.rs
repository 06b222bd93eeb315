//! `Ext¹(C, A)` as cocycles modulo coboundaries, with explicit middle terms.
//!
//! An extension `0 -> A -> E -> C -> 0` is realized on `E_v = A_v ⊕ C_v` with
//! arrow maps `[[A_i, ξ_i], [0, C_i]]`, where `ξ_i : C_{i+1} -> A_i`.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::matrix::Matrix;
use crate::subspace::{for_each_combination, Subspace};

use super::exact::Ses;
use super::hom::factor_through_target;
use super::module::Module;
use super::morphism::Morphism;

#[derive(Clone, Debug)]
pub struct ExtSpace<F> {
    right: Module<F>,
    left: Module<F>,
    offsets: Vec<usize>,
    len: usize,
    coboundaries: Subspace<F>,
    reps: Vec<Vec<F>>,
}

impl<F: FiniteField> ExtSpace<F> {
    /// Extensions of `right` by `left`, i.e. sequences `0 -> left -> E -> right -> 0`.
    pub fn new(right: &Module<F>, left: &Module<F>) -> Result<Self> {
        right.same_presentation(left)?;
        let (c, a) = (right, left);
        let n = c.n();
        let mut offsets = Vec::with_capacity(n);
        let mut len = 0;
        for i in 0..n.saturating_sub(1) {
            offsets.push(len);
            len += a.dim(i) * c.dim(i + 1);
        }
        let unit = |k: usize| {
            let mut v = vec![F::zero(); len];
            v[k] = F::one();
            v
        };

        // cocycle condition: the top-right block of every relation path vanishes
        let mut eqs: Vec<Vec<F>> = Vec::new();
        for &(lo, hi) in c.presentation().relations() {
            let (lo, hi) = (lo - 1, hi - 1);
            let rows = a.dim(lo);
            let cols = c.dim(hi);
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut columns: Vec<Vec<F>> = Vec::with_capacity(len);
            for k in 0..len {
                let xi = unit(k);
                let block = relation_block(a, c, &offsets, &xi, lo, hi);
                columns.push(block.as_slice().to_vec());
            }
            let lin = Matrix::from_columns(rows * cols, &columns);
            for r in 0..lin.rows() {
                eqs.push(lin.row(r).to_vec());
            }
        }
        let cocycle_basis = Matrix::from_rows(len, &eqs).nullspace();

        // coboundaries: ξ_i = A_i h_{i+1} - h_i C_i
        let mut cob: Vec<Vec<F>> = Vec::new();
        for v in 0..n {
            for r in 0..a.dim(v) {
                for s in 0..c.dim(v) {
                    let mut xi = vec![F::zero(); len];
                    if v >= 1 {
                        // contributes A_{v-1} h_v at arrow v-1
                        let i = v - 1;
                        for rr in 0..a.dim(i) {
                            let val = a.arrow(i)[(rr, r)];
                            xi[offsets[i] + rr * c.dim(i + 1) + s] += val;
                        }
                    }
                    if v + 1 < n {
                        // contributes -h_v C_v at arrow v
                        let i = v;
                        for cc in 0..c.dim(i + 1) {
                            let val = c.arrow(i)[(s, cc)];
                            xi[offsets[i] + r * c.dim(i + 1) + cc] -= val;
                        }
                    }
                    cob.push(xi);
                }
            }
        }
        let coboundaries = Subspace::span(len, &cob);

        let mut running = coboundaries.clone();
        let mut reps = Vec::new();
        for z in cocycle_basis {
            if !running.contains(&z) {
                running = running.join(&Subspace::span(len, std::slice::from_ref(&z)));
                reps.push(z);
            }
        }
        Ok(ExtSpace {
            right: c.clone(),
            left: a.clone(),
            offsets,
            len,
            coboundaries,
            reps,
        })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn right(&self) -> &Module<F> {
        &self.right
    }

    pub fn left(&self) -> &Module<F> {
        &self.left
    }

    /// Cocycle representatives of a basis of the extension space.
    pub fn basis(&self) -> &[Vec<F>] {
        &self.reps
    }

    pub fn cocycle(&self, coeffs: &[F]) -> Vec<F> {
        let mut xi = vec![F::zero(); self.len];
        for (c, r) in coeffs.iter().zip(&self.reps) {
            for (x, &y) in xi.iter_mut().zip(r) {
                *x += *c * y;
            }
        }
        xi
    }

    /// Whether the cocycle `xi` is a coboundary, i.e. the extension splits.
    pub fn is_trivial_cocycle(&self, xi: &[F]) -> bool {
        self.coboundaries.contains(xi)
    }

    /// The extension whose class has the given coordinates.
    pub fn extension(&self, coeffs: &[F]) -> Ses<F> {
        self.realize(&self.cocycle(coeffs))
    }

    pub fn realize(&self, xi: &[F]) -> Ses<F> {
        let blocks: Vec<Matrix<F>> = (0..self.right.n().saturating_sub(1))
            .map(|i| self.xi_block(xi, i))
            .collect();
        realize_blocks(&self.right, &self.left, &blocks)
            .expect("cocycle middle terms are extensions")
    }

    /// The cocycle `xi` split into one `left.dim(i) × right.dim(i + 1)` block per arrow.
    pub fn xi_blocks(&self, xi: &[F]) -> Vec<Matrix<F>> {
        (0..self.right.n().saturating_sub(1))
            .map(|i| self.xi_block(xi, i))
            .collect()
    }

    fn xi_block(&self, xi: &[F], i: usize) -> Matrix<F> {
        let (r, cc) = (self.left.dim(i), self.right.dim(i + 1));
        Matrix::from_fn(r, cc, |a, b| xi[self.offsets[i] + a * cc + b])
    }

    /// Visits every extension class once (the split class first) with its
    /// coordinates and a realizing sequence.
    pub fn for_each_class<B>(
        &self,
        mut f: impl FnMut(&[F], Ses<F>) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        for_each_combination::<F, B>(self.len, &self.reps, |coeffs, xi| {
            f(coeffs, self.realize(&xi))
        })
    }
}

/// Top-right block of the relation path `hi -> lo` in the middle term of `xi`.
fn relation_block<F: FiniteField>(
    a: &Module<F>,
    c: &Module<F>,
    offsets: &[usize],
    xi: &[F],
    lo: usize,
    hi: usize,
) -> Matrix<F> {
    let mut acc = Matrix::zeros(a.dim(lo), c.dim(hi));
    for i in lo..hi {
        let rows = a.dim(i);
        let cols = c.dim(i + 1);
        let block = Matrix::from_fn(rows, cols, |r, s| xi[offsets[i] + r * cols + s]);
        if block.is_zero() {
            continue;
        }
        let term = &(&a.path_map(i, lo) * &block) * &c.path_map(hi, i + 1);
        acc = &acc + &term;
    }
    acc
}

/// The extension of `right` by `left` glued by the per-arrow blocks `ξ_i : right_{i+1} -> left_i`.
/// Fails if the blocks do not satisfy the relations.
pub fn realize_blocks<F: FiniteField>(
    right: &Module<F>,
    left: &Module<F>,
    blocks: &[Matrix<F>],
) -> Result<Ses<F>> {
    right.same_presentation(left)?;
    let (a, c) = (left, right);
    let n = c.n();
    if blocks.len() != n.saturating_sub(1) {
        return Err(Error::Mismatch(
            "one gluing block per arrow expected".into(),
        ));
    }
    let dims: Vec<usize> = (0..n).map(|v| a.dim(v) + c.dim(v)).collect();
    let mut arrows = Vec::with_capacity(blocks.len());
    for (i, xi) in blocks.iter().enumerate() {
        if xi.shape() != (a.dim(i), c.dim(i + 1)) {
            return Err(Error::Mismatch(format!(
                "gluing block {i} has shape {:?}",
                xi.shape()
            )));
        }
        let mut m = Matrix::zeros(dims[i], dims[i + 1]);
        m.set_block(0, 0, a.arrow(i));
        m.set_block(0, a.dim(i + 1), xi);
        m.set_block(a.dim(i), a.dim(i + 1), c.arrow(i));
        arrows.push(m);
    }
    let e = Module::new(c.presentation(), dims, arrows)?;
    let incl = (0..n)
        .map(|v| {
            let mut m = Matrix::zeros(e.dim(v), a.dim(v));
            m.set_block(0, 0, &Matrix::identity(a.dim(v)));
            m
        })
        .collect();
    let proj = (0..n)
        .map(|v| {
            let mut m = Matrix::zeros(c.dim(v), e.dim(v));
            m.set_block(0, a.dim(v), &Matrix::identity(c.dim(v)));
            m
        })
        .collect();
    let i = Morphism::new_unchecked(a, &e, incl);
    let p = Morphism::new_unchecked(&e, c, proj);
    Ses::new(i, p)
}

pub fn ext_dim<F: FiniteField>(right: &Module<F>, left: &Module<F>) -> Result<usize> {
    Ok(ExtSpace::new(right, left)?.dim())
}

/// Whether the deflation of `ses` admits a section.
pub fn is_split<F: FiniteField>(ses: &Ses<F>) -> Result<bool> {
    let id = Morphism::identity(ses.right());
    Ok(factor_through_target(&id, ses.deflation())?.is_some())
}
