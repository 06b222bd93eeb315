use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::serialcat::{Obj, ObjMap};

use super::Heart;

impl<F: FiniteField> Heart<'_, F> {
    /// Criterion test for epimorphisms: `f` is epic in the heart iff the
    /// cokernel `C_f` of `(f, w) : A -> B ⊕ W^A` lies in `add U`, where
    /// `A -> W^A` is the sum of the `B⁻` inflations. Returns `C_f` as well.
    pub fn epi_by_criterion(&self, f: &ObjMap<F>) -> Result<(bool, Obj)> {
        self.require_member(&f.source)?;
        self.require_member(&f.target)?;
        let w = self.minus_inflation(&f.source)?;
        let targets = [f.target.clone(), w.target.clone()];
        let col = ObjMap::from_blocks(
            std::slice::from_ref(&f.source),
            &targets,
            &[vec![f.clone()], vec![w]],
        )?;
        let (c, _) = col.cokernel(self.ctx)?;
        Ok((self.tp.u().contains_obj(&c), c))
    }

    /// Direct test: `Hom(B, C)/W -> Hom(A, C)/W` is injective for every
    /// surviving indecomposable `C` of the heart.
    pub fn epi_by_hom(&self, f: &ObjMap<F>) -> Result<bool> {
        self.require_member(&f.source)?;
        self.require_member(&f.target)?;
        let q = self.quotient();
        for c in self.survivors.iter() {
            let basis = q.stable_basis(&f.target, &Obj::single(c));
            if !q.injective_on(&basis, |g| g.after(self.ctx, f))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `f` is an epimorphism in the heart; both tests must agree.
    pub fn is_epi(&self, f: &ObjMap<F>) -> Result<bool> {
        let (a, c) = self.epi_by_criterion(f)?;
        let b = self.epi_by_hom(f)?;
        if a != b {
            return Err(Error::Inconsistent(format!(
                "epi tests disagree on a map {} -> {} (cokernel {c}: {a}, hom test: {b})",
                f.source, f.target
            )));
        }
        Ok(a)
    }

    /// Criterion test for monomorphisms: `f` is monic in the heart iff the
    /// kernel `K` of `(f, w) : A ⊕ W_B -> B` lies in `add T`, where
    /// `W_B -> B` is the sum of the `B⁺` deflations. Returns `K` as well.
    pub fn mono_by_criterion(&self, f: &ObjMap<F>) -> Result<(bool, Obj)> {
        self.require_member(&f.source)?;
        self.require_member(&f.target)?;
        let w = self.plus_deflation(&f.target)?;
        let sources = [f.source.clone(), w.source.clone()];
        let row = ObjMap::from_blocks(
            &sources,
            std::slice::from_ref(&f.target),
            &[vec![f.clone(), w]],
        )?;
        let (k, _) = row.kernel(self.ctx)?;
        Ok((self.tp.t().contains_obj(&k), k))
    }

    /// Direct test: `Hom(C, A)/W -> Hom(C, B)/W` is injective for every
    /// surviving indecomposable `C`.
    pub fn mono_by_hom(&self, f: &ObjMap<F>) -> Result<bool> {
        self.require_member(&f.source)?;
        self.require_member(&f.target)?;
        let q = self.quotient();
        for c in self.survivors.iter() {
            let basis = q.stable_basis(&Obj::single(c), &f.source);
            if !q.injective_on(&basis, |g| f.after(self.ctx, g))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_mono(&self, f: &ObjMap<F>) -> Result<bool> {
        let (a, k) = self.mono_by_criterion(f)?;
        let b = self.mono_by_hom(f)?;
        if a != b {
            return Err(Error::Inconsistent(format!(
                "mono tests disagree on a map {} -> {} (kernel {k}: {a}, hom test: {b})",
                f.source, f.target
            )));
        }
        Ok(a)
    }

    pub fn is_w_monic(&self, f: &ObjMap<F>) -> Result<bool> {
        self.quotient().is_w_monic(f)
    }

    pub fn is_w_epic(&self, f: &ObjMap<F>) -> Result<bool> {
        self.quotient().is_w_epic(f)
    }
}
