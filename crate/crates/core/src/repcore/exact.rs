use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::matrix::Matrix;

use super::module::Module;
use super::morphism::Morphism;

/// The submodule of `m` whose space at vertex `v` is the column span of
/// `bases[v]` (columns independent), with its inclusion. The spans must be
/// closed under the arrows.
pub fn submodule_from_bases<F: FiniteField>(
    m: &Module<F>,
    bases: &[Matrix<F>],
) -> Result<(Module<F>, Morphism<F>)> {
    let n = m.n();
    let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
    let mut arrows = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let pushed = m.arrow(i) * &bases[i + 1];
        let a = bases[i].solve(&pushed).ok_or_else(|| {
            Error::Inconsistent("subspaces are not closed under the arrows".into())
        })?;
        arrows.push(a);
    }
    let sub = Module::new_unchecked(m.presentation(), dims, arrows);
    let incl = Morphism::new_unchecked(&sub, m, bases.to_vec());
    Ok((sub, incl))
}

/// The quotient of `m` by the submodule spanned by `bases`, with the projection.
pub fn quotient_by_bases<F: FiniteField>(
    m: &Module<F>,
    bases: &[Matrix<F>],
) -> Result<(Module<F>, Morphism<F>)> {
    let n = m.n();
    let mut sections = Vec::with_capacity(n);
    let mut projections = Vec::with_capacity(n);
    for (v, b) in bases.iter().enumerate() {
        let img = b.image_matrix();
        let comp = img.complement_columns();
        let full = Matrix::hstack(m.dim(v), &[&img, &comp]);
        let inv = full
            .inverse()
            .ok_or_else(|| Error::Inconsistent("complement does not give a basis".into()))?;
        let q = comp.cols();
        let rows: Vec<usize> = (img.cols()..img.cols() + q).collect();
        projections.push(inv.select_rows(&rows));
        sections.push(comp);
    }
    let arrows = (0..n.saturating_sub(1))
        .map(|i| &(&projections[i] * m.arrow(i)) * &sections[i + 1])
        .collect();
    let dims = sections.iter().map(|s| s.cols()).collect();
    let quot = Module::new_unchecked(m.presentation(), dims, arrows);
    let proj = Morphism::new_unchecked(m, &quot, projections);
    Ok((quot, proj))
}

/// Kernel `K` of `f` with the inclusion `K -> source(f)`.
pub fn kernel<F: FiniteField>(f: &Morphism<F>) -> (Module<F>, Morphism<F>) {
    let bases: Vec<Matrix<F>> = f.components().iter().map(|c| c.kernel_matrix()).collect();
    submodule_from_bases(f.source(), &bases).expect("kernels are submodules")
}

/// Cokernel `C` of `f` with the projection `target(f) -> C`.
pub fn cokernel<F: FiniteField>(f: &Morphism<F>) -> (Module<F>, Morphism<F>) {
    let bases: Vec<Matrix<F>> = f.components().iter().map(|c| c.image_matrix()).collect();
    quotient_by_bases(f.target(), &bases).expect("images are submodules")
}

/// Image factorization `f = ι ∘ e` with `e : source ↠ Im` and `ι : Im ↪ target`.
pub fn image<F: FiniteField>(f: &Morphism<F>) -> (Module<F>, Morphism<F>, Morphism<F>) {
    let bases: Vec<Matrix<F>> = f.components().iter().map(|c| c.image_matrix()).collect();
    let (im, iota) = submodule_from_bases(f.target(), &bases).expect("images are submodules");
    let comps = f
        .components()
        .iter()
        .zip(&bases)
        .map(|(c, b)| b.solve(c).expect("f lands in its image"))
        .collect();
    let e = Morphism::new_unchecked(f.source(), &im, comps);
    (im, e, iota)
}

/// A short exact sequence `0 -> A -i-> B -p-> C -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ses<F> {
    i: Morphism<F>,
    p: Morphism<F>,
}

impl<F: FiniteField> Ses<F> {
    pub fn new(i: Morphism<F>, p: Morphism<F>) -> Result<Self> {
        if i.target() != p.source() {
            return Err(Error::Mismatch(
                "inflation target is not deflation source".into(),
            ));
        }
        if !i.is_injective() {
            return Err(Error::InvalidMorphism("inflation is not injective".into()));
        }
        if !p.is_surjective() {
            return Err(Error::InvalidMorphism("deflation is not surjective".into()));
        }
        if !p.after(&i).is_zero() {
            return Err(Error::InvalidMorphism(
                "composite of the sequence is nonzero".into(),
            ));
        }
        // with i injective and p surjective, exactness in the middle is a dimension count
        for v in 0..i.source().n() {
            if i.source().dim(v) + p.target().dim(v) != i.target().dim(v) {
                return Err(Error::InvalidMorphism(format!(
                    "not exact at vertex {}",
                    v + 1
                )));
            }
        }
        Ok(Ses { i, p })
    }

    pub fn from_inflation(i: Morphism<F>) -> Result<Self> {
        let (_, p) = cokernel(&i);
        Ses::new(i, p)
    }

    pub fn from_deflation(p: Morphism<F>) -> Result<Self> {
        let (_, i) = kernel(&p);
        Ses::new(i, p)
    }

    pub fn split(a: &Module<F>, c: &Module<F>) -> Result<Self> {
        let ds = super::DirectSum::new(a.presentation(), &[a, c])?;
        Ses::new(ds.injections[0].clone(), ds.projections[1].clone())
    }

    pub fn inflation(&self) -> &Morphism<F> {
        &self.i
    }

    pub fn deflation(&self) -> &Morphism<F> {
        &self.p
    }

    pub fn left(&self) -> &Module<F> {
        self.i.source()
    }

    pub fn middle(&self) -> &Module<F> {
        self.i.target()
    }

    pub fn right(&self) -> &Module<F> {
        self.p.target()
    }
}
