use crate::error::Result;
use crate::field::FiniteField;
use crate::matrix::Matrix;
use crate::serialcat::{hom_closed, CategoryCtx, Interval, Obj, ObjMap};
use crate::subcat::Subcategory;

/// The ideal quotient of the module category by the morphisms factoring
/// through `add(ideal)`.
///
/// In canonical bases the ideal is spanned by elementary matrices: the
/// canonical map `a -> b` lies in it iff it is a nonzero composite
/// `a -> w -> b` of canonical maps with `w ∈ ideal`.
#[derive(Clone, Copy)]
pub struct Quotient<'a, F> {
    ctx: &'a CategoryCtx<F>,
    ideal: &'a Subcategory,
}

impl<'a, F: FiniteField> Quotient<'a, F> {
    pub fn new(ctx: &'a CategoryCtx<F>, ideal: &'a Subcategory) -> Self {
        Quotient { ctx, ideal }
    }

    pub fn ctx(&self) -> &'a CategoryCtx<F> {
        self.ctx
    }

    pub fn ideal(&self) -> &'a Subcategory {
        self.ideal
    }

    /// Whether the canonical map `a -> b` factors through the ideal.
    pub fn factors(&self, a: Interval, b: Interval) -> bool {
        hom_closed(a, b)
            && self
                .ideal
                .iter()
                .any(|w| self.ctx.compose_canonical(a, w, b))
    }

    /// Positions `(i, j)` with `Hom(a_j, b_i) ≠ 0` that survive in the quotient.
    pub fn stable_positions(&self, a: &Obj, b: &Obj) -> Vec<(usize, usize)> {
        positions(a, b, |x, y| hom_closed(x, y) && !self.factors(x, y))
    }

    /// Positions `(i, j)` whose canonical map lies in the ideal.
    pub fn ideal_positions(&self, a: &Obj, b: &Obj) -> Vec<(usize, usize)> {
        positions(a, b, |x, y| self.factors(x, y))
    }

    /// Basis of the ideal `W(a, b)`: elementary maps, ordered by position.
    pub fn w_ideal(&self, a: &Obj, b: &Obj) -> Vec<ObjMap<F>> {
        elementary(a, b, &self.ideal_positions(a, b))
    }

    /// Elementary maps at the stable positions; their classes form a basis of the quotient space.
    pub fn stable_basis(&self, a: &Obj, b: &Obj) -> Vec<ObjMap<F>> {
        elementary(a, b, &self.stable_positions(a, b))
    }

    pub fn quotient_dim(&self, a: &Obj, b: &Obj) -> usize {
        self.stable_positions(a, b).len()
    }

    /// Coordinates of the class of `f` in the stable basis.
    pub fn coords(&self, f: &ObjMap<F>) -> Vec<F> {
        self.stable_positions(&f.source, &f.target)
            .into_iter()
            .map(|(i, j)| f.scalars[(i, j)])
            .collect()
    }

    pub fn is_zero(&self, f: &ObjMap<F>) -> bool {
        self.coords(f).iter().all(|c| c.is_zero())
    }

    /// The representative of the class of `f` supported on stable positions.
    pub fn reduce(&self, f: &ObjMap<F>) -> ObjMap<F> {
        let mut g = f.clone();
        for (i, j) in self.ideal_positions(&f.source, &f.target) {
            g.scalars[(i, j)] = F::zero();
        }
        g
    }

    /// Whether `g ↦ image(g)` is injective on the quotient classes spanned by `basis`.
    pub fn injective_on(
        &self,
        basis: &[ObjMap<F>],
        mut image: impl FnMut(&ObjMap<F>) -> Result<ObjMap<F>>,
    ) -> Result<bool> {
        if basis.is_empty() {
            return Ok(true);
        }
        let cols = basis
            .iter()
            .map(|g| image(g).map(|h| self.coords(&h)))
            .collect::<Result<Vec<_>>>()?;
        let len = cols[0].len();
        if len == 0 {
            return Ok(false);
        }
        Ok(Matrix::from_columns(len, &cols).rank() == basis.len())
    }

    /// `f` is W-monic: every map from its source to `W` extends along `f`.
    pub fn is_w_monic(&self, f: &ObjMap<F>) -> Result<bool> {
        for w in self.ideal.iter() {
            let wo = Obj::single(w);
            let need = hom_rank(&f.source, &wo);
            if need == 0 {
                continue;
            }
            let basis = elementary::<F>(&f.target, &wo, &positions(&f.target, &wo, hom_closed));
            let cols = basis
                .iter()
                .map(|g| g.after(self.ctx, f).map(|h| h.scalars.as_slice().to_vec()))
                .collect::<Result<Vec<_>>>()?;
            if cols.is_empty() || Matrix::from_columns(f.source.len(), &cols).rank() < need {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `f` is W-epic: every map from `W` to its target lifts along `f`.
    pub fn is_w_epic(&self, f: &ObjMap<F>) -> Result<bool> {
        for w in self.ideal.iter() {
            let wo = Obj::single(w);
            let need = hom_rank(&wo, &f.target);
            if need == 0 {
                continue;
            }
            let basis = elementary::<F>(&wo, &f.source, &positions(&wo, &f.source, hom_closed));
            let cols = basis
                .iter()
                .map(|g| f.after(self.ctx, g).map(|h| h.scalars.as_slice().to_vec()))
                .collect::<Result<Vec<_>>>()?;
            if cols.is_empty() || Matrix::from_columns(f.target.len(), &cols).rank() < need {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn positions(a: &Obj, b: &Obj, keep: impl Fn(Interval, Interval) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, y) in b.iter().enumerate() {
        for (j, x) in a.iter().enumerate() {
            if keep(x, y) {
                out.push((i, j));
            }
        }
    }
    out
}

fn hom_rank(a: &Obj, b: &Obj) -> usize {
    positions(a, b, hom_closed).len()
}

/// Elementary maps `a -> b`, one per position.
pub(crate) fn elementary<F: FiniteField>(
    a: &Obj,
    b: &Obj,
    pos: &[(usize, usize)],
) -> Vec<ObjMap<F>> {
    pos.iter()
        .map(|&(i, j)| {
            let mut m = ObjMap::zero(a, b);
            m.scalars[(i, j)] = F::one();
            m
        })
        .collect()
}

/// Elementary maps spanning all of `Hom(a, b)`.
pub(crate) fn hom_elementary<F: FiniteField>(a: &Obj, b: &Obj) -> Vec<ObjMap<F>> {
    elementary(a, b, &positions(a, b, hom_closed))
}
