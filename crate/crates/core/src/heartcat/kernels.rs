use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::matrix::Matrix;
use crate::serialcat::{Obj, ObjMap};
use crate::subspace::Subspace;

use super::quotient::hom_elementary;
use super::{Approx, Heart};

impl<F: FiniteField> Heart<'_, F> {
    /// The kernel of `f : A -> B` in the heart, as `k : C⁻ -> A`.
    ///
    /// `C` is the pullback of `f` along the `B⁺` deflation `W_B -> B`, with
    /// leg `g : C -> A`. Then `C -> T₁ -> S₁` is an `(S, T)`-approximation,
    /// `V₁ -> W₁ -> T₁` a `(U, V)`-approximation, and `C⁻` the pullback of
    /// `C -> T₁` along `W₁ -> T₁`. The kernel map is `g ∘ c⁻`.
    pub fn kernel_in_heart(&self, f: &ObjMap<F>) -> Result<(Obj, ObjMap<F>)> {
        self.require_member(&f.source)?;
        self.require_member(&f.target)?;
        let ctx = self.ctx;
        let w = self.plus_deflation(&f.target)?;
        let (c, g) = pullback(ctx, f, &w)?;

        let iota = self.approx_sum(&c, Approx::RightST)?;
        let p = self.approx_sum(&iota.target, Approx::LeftUV)?;
        let (cm, cminus) = pullback(ctx, &iota, &p)?;
        if !self.contains(&cm) {
            return Err(Error::Inconsistent(format!(
                "kernel object {cm} is not in the heart"
            )));
        }
        Ok((cm, g.after(ctx, &cminus)?))
    }

    /// The cokernel of `f : A -> B` in the heart, as `q : B -> C⁺` (dual construction).
    pub fn cokernel_in_heart(&self, f: &ObjMap<F>) -> Result<(Obj, ObjMap<F>)> {
        self.require_member(&f.source)?;
        self.require_member(&f.target)?;
        let ctx = self.ctx;
        let w = self.minus_inflation(&f.source)?;
        let (c, h) = pushout(ctx, f, &w)?;

        let p = self.approx_sum(&c, Approx::LeftUV)?;
        let iota = self.approx_sum(&p.source, Approx::RightST)?;
        let (cp, cplus) = pushout(ctx, &p, &iota)?;
        if !self.contains(&cp) {
            return Err(Error::Inconsistent(format!(
                "cokernel object {cp} is not in the heart"
            )));
        }
        Ok((cp, cplus.after(ctx, &h)?))
    }

    /// Sum of approximation maps over the summands of `o`: `o -> T₀` for
    /// [`Approx::RightST`], `U₀ -> o` for [`Approx::LeftUV`].
    fn approx_sum(&self, o: &Obj, kind: Approx) -> Result<ObjMap<F>> {
        let maps = o
            .iter()
            .map(|x| {
                self.approximation(kind, x).map(|c| match kind {
                    Approx::RightST => c.inflation,
                    Approx::LeftUV => c.deflation,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if maps.is_empty() {
            return Ok(ObjMap::zero(o, o));
        }
        ObjMap::direct_sum(&maps)
    }

    /// Checks that `k : K -> A` has the universal property of a kernel of `f`
    /// in the heart, probing with every surviving indecomposable. Returns a
    /// description of the first violation.
    pub fn kernel_violation(&self, f: &ObjMap<F>, k: &ObjMap<F>) -> Result<Option<String>> {
        let (ctx, q) = (self.ctx, self.quotient());
        if !q.is_zero(&f.after(ctx, k)?) {
            return Ok(Some("f ∘ k is nonzero in the heart".into()));
        }
        for d in self.survivors.iter() {
            let dobj = Obj::single(d);
            let homs = hom_elementary::<F>(&dobj, &f.source);
            let killed = kernel_of(
                &homs,
                |e| Ok(q.coords(&f.after(ctx, e)?)),
                f.source.len(),
                |e| e.scalars.column(0),
            )?;
            let mut reach: Vec<Vec<F>> = Vec::new();
            for e in hom_elementary::<F>(&dobj, &k.source) {
                reach.push(k.after(ctx, &e)?.scalars.column(0));
            }
            for e in q.w_ideal(&dobj, &f.source) {
                reach.push(e.scalars.column(0));
            }
            let span = Subspace::span(f.source.len(), &reach);
            if killed.iter().any(|v| !span.contains(v)) {
                return Ok(Some(format!(
                    "a map from {d} killed by f does not factor through the kernel"
                )));
            }
            let basis = q.stable_basis(&dobj, &k.source);
            if !q.injective_on(&basis, |c| k.after(ctx, c))? {
                return Ok(Some(format!(
                    "factorizations from {d} through the kernel are not unique"
                )));
            }
        }
        Ok(None)
    }

    /// Dual of [`Self::kernel_violation`] for `q : B -> C`.
    pub fn cokernel_violation(&self, f: &ObjMap<F>, c: &ObjMap<F>) -> Result<Option<String>> {
        let (ctx, qt) = (self.ctx, self.quotient());
        if !qt.is_zero(&c.after(ctx, f)?) {
            return Ok(Some("c ∘ f is nonzero in the heart".into()));
        }
        for d in self.survivors.iter() {
            let dobj = Obj::single(d);
            let homs = hom_elementary::<F>(&f.target, &dobj);
            let killed = kernel_of(
                &homs,
                |e| Ok(qt.coords(&e.after(ctx, f)?)),
                f.target.len(),
                |e| e.scalars.row(0).to_vec(),
            )?;
            let mut reach: Vec<Vec<F>> = Vec::new();
            for e in hom_elementary::<F>(&c.target, &dobj) {
                reach.push(e.after(ctx, c)?.scalars.row(0).to_vec());
            }
            for e in qt.w_ideal(&f.target, &dobj) {
                reach.push(e.scalars.row(0).to_vec());
            }
            let span = Subspace::span(f.target.len(), &reach);
            if killed.iter().any(|v| !span.contains(v)) {
                return Ok(Some(format!(
                    "a map to {d} killing f does not factor through the cokernel"
                )));
            }
            let basis = qt.stable_basis(&c.target, &dobj);
            if !qt.injective_on(&basis, |g| g.after(ctx, c))? {
                return Ok(Some(format!(
                    "factorizations to {d} through the cokernel are not unique"
                )));
            }
        }
        Ok(None)
    }
}

/// Pullback of `f : A -> B` along `w : W -> B`, as the kernel of
/// `(f, -w) : A ⊕ W -> B`; returns the object and its leg to `A`.
fn pullback<F: FiniteField>(
    ctx: &crate::serialcat::CategoryCtx<F>,
    f: &ObjMap<F>,
    w: &ObjMap<F>,
) -> Result<(Obj, ObjMap<F>)> {
    let parts = [f.source.clone(), w.source.clone()];
    let row = ObjMap::from_blocks(
        &parts,
        std::slice::from_ref(&f.target),
        &[vec![f.clone(), w.neg()]],
    )?;
    let (p, incl) = row.kernel(ctx)?;
    let (_, _, proj) = ObjMap::<F>::sum_structure(&parts);
    Ok((p, proj[0].after(ctx, &incl)?))
}

/// Pushout of `f : A -> B` along `w : A -> W`, as the cokernel of
/// `(f; -w) : A -> B ⊕ W`; returns the object and the leg from `B`.
fn pushout<F: FiniteField>(
    ctx: &crate::serialcat::CategoryCtx<F>,
    f: &ObjMap<F>,
    w: &ObjMap<F>,
) -> Result<(Obj, ObjMap<F>)> {
    let parts = [f.target.clone(), w.target.clone()];
    let col = ObjMap::from_blocks(
        std::slice::from_ref(&f.source),
        &parts,
        &[vec![f.clone()], vec![w.neg()]],
    )?;
    let (p, proj) = col.cokernel(ctx)?;
    let (_, inj, _) = ObjMap::<F>::sum_structure(&parts);
    Ok((p, proj.after(ctx, &inj[0])?))
}

/// Vectors `flat(Σ c_e e)` over the solutions `c` of `Σ c_e image(e) = 0`.
fn kernel_of<F: FiniteField>(
    basis: &[ObjMap<F>],
    mut image: impl FnMut(&ObjMap<F>) -> Result<Vec<F>>,
    len: usize,
    flat: impl Fn(&ObjMap<F>) -> Vec<F>,
) -> Result<Vec<Vec<F>>> {
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let cols = basis.iter().map(&mut image).collect::<Result<Vec<_>>>()?;
    let rows = cols[0].len();
    let sols: Vec<Vec<F>> = if rows == 0 {
        (0..basis.len())
            .map(|i| {
                (0..basis.len())
                    .map(|j| if i == j { F::one() } else { F::zero() })
                    .collect()
            })
            .collect()
    } else {
        Matrix::from_columns(rows, &cols).nullspace()
    };
    let flats: Vec<Vec<F>> = basis.iter().map(flat).collect();
    Ok(sols
        .iter()
        .map(|c| {
            let mut v = vec![F::zero(); len];
            for (ci, fv) in c.iter().zip(&flats) {
                for (o, &x) in v.iter_mut().zip(fv) {
                    *o += *ci * x;
                }
            }
            v
        })
        .collect())
}
