use std::collections::HashMap;
use std::marker::PhantomData;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::matrix::Matrix;
use crate::repcore::{
    decompose_with, ext_dim as brute_ext_dim, hom_dim as brute_hom_dim, realize_blocks,
    DecomposeOptions, DirectSum, ExtSpace, Module, Morphism, QuiverPresentation, Ses,
};

use super::interval::{Interval, Obj};

/// The module category of a linear Nakayama algebra, with every
/// indecomposable listed and Hom/Ext between them tabulated.
#[derive(Clone, Debug)]
pub struct CategoryCtx<F> {
    pres: Arc<QuiverPresentation>,
    indecs: Vec<Interval>,
    index: HashMap<Interval, usize>,
    hom: Vec<Vec<bool>>,
    ext: Vec<Vec<bool>>,
    modules: Vec<Module<F>>,
    decompose: DecomposeOptions,
    _field: PhantomData<F>,
}

impl<F: FiniteField> CategoryCtx<F> {
    pub fn generate(pres: QuiverPresentation) -> Result<Self> {
        let pres = Arc::new(pres);
        let n = pres.n();
        let mut indecs = Vec::new();
        for lo in 1..=n {
            for hi in lo..=n {
                if pres.path_nonzero(lo, hi) {
                    indecs.push(Interval::new(lo, hi)?);
                }
            }
        }
        let index = indecs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let modules = indecs
            .iter()
            .map(|x| Module::interval(&pres, x.lo(), x.hi()))
            .collect::<Result<Vec<_>>>()?;
        let mut ctx = CategoryCtx {
            pres,
            indecs,
            index,
            hom: Vec::new(),
            ext: Vec::new(),
            modules,
            decompose: DecomposeOptions::default(),
            _field: PhantomData,
        };
        let k = ctx.indecs.len();
        ctx.hom = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| hom_closed(ctx.indecs[i], ctx.indecs[j]))
                    .collect()
            })
            .collect();
        ctx.ext = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| ctx.ext_closed(ctx.indecs[i], ctx.indecs[j]))
                    .collect()
            })
            .collect();
        Ok(ctx)
    }

    pub fn with_decompose_options(mut self, opts: DecomposeOptions) -> Self {
        self.decompose = opts;
        self
    }

    pub fn decompose_options(&self) -> &DecomposeOptions {
        &self.decompose
    }

    pub fn presentation(&self) -> &Arc<QuiverPresentation> {
        &self.pres
    }

    pub fn field_char(&self) -> u32 {
        F::CHARACTERISTIC
    }

    pub fn indecomposables(&self) -> &[Interval] {
        &self.indecs
    }

    pub fn contains(&self, x: Interval) -> bool {
        self.index.contains_key(&x)
    }

    pub fn check(&self, x: Interval) -> Result<usize> {
        self.index.get(&x).copied().ok_or_else(|| {
            Error::UnknownIndecomposable(format!("{x} is not an indecomposable of this algebra"))
        })
    }

    pub fn check_obj(&self, o: &Obj) -> Result<()> {
        o.iter().try_for_each(|x| self.check(x).map(|_| ()))
    }

    fn idx(&self, x: Interval) -> usize {
        self.index[&x]
    }

    /// The interval module of `x`, with identity arrow maps on its support.
    pub fn module(&self, x: Interval) -> &Module<F> {
        &self.modules[self.idx(x)]
    }

    pub fn hom_dim(&self, x: Interval, y: Interval) -> usize {
        usize::from(self.hom[self.idx(x)][self.idx(y)])
    }

    /// `dim Ext¹(x, y)`: classes of sequences `0 -> y -> Z -> x -> 0`.
    pub fn ext_dim(&self, x: Interval, y: Interval) -> usize {
        usize::from(self.ext[self.idx(x)][self.idx(y)])
    }

    pub fn hom_dim_obj(&self, x: &Obj, y: &Obj) -> usize {
        x.iter()
            .map(|a| y.iter().map(|b| self.hom_dim(a, b)).sum::<usize>())
            .sum()
    }

    pub fn ext_dim_obj(&self, x: &Obj, y: &Obj) -> usize {
        x.iter()
            .map(|a| y.iter().map(|b| self.ext_dim(a, b)).sum::<usize>())
            .sum()
    }

    /// Projective cover of the simple at `top`: the longest admissible interval with that top.
    pub fn projective_cover(&self, top: usize) -> Interval {
        let lo = (1..=top)
            .find(|&lo| self.pres.path_nonzero(lo, top))
            .expect("simples are admissible");
        Interval::new(lo, top).expect("valid interval")
    }

    /// Injective envelope of the simple at `socle`.
    pub fn injective_envelope(&self, socle: usize) -> Interval {
        let hi = (socle..=self.pres.n())
            .rev()
            .find(|&hi| self.pres.path_nonzero(socle, hi))
            .expect("simples are admissible");
        Interval::new(socle, hi).expect("valid interval")
    }

    pub fn is_projective(&self, x: Interval) -> bool {
        self.projective_cover(x.top()) == x
    }

    pub fn is_injective(&self, x: Interval) -> bool {
        self.injective_envelope(x.socle()) == x
    }

    /// Kernel of the projective cover of `x`, if nonzero.
    pub fn syzygy(&self, x: Interval) -> Option<Interval> {
        let p = self.projective_cover(x.top());
        (x.lo() > p.lo()).then(|| Interval::new(p.lo(), x.lo() - 1).expect("valid interval"))
    }

    fn ext_closed(&self, x: Interval, y: Interval) -> bool {
        // Ext¹(x, y) = coker(Hom(P, y) -> Hom(Ωx, y)) for 0 -> Ωx -> P -> x -> 0
        let Some(omega) = self.syzygy(x) else {
            return false;
        };
        if !hom_closed(omega, y) {
            return false;
        }
        let p = self.projective_cover(x.top());
        let restriction_nonzero = hom_closed(p, y) && compose_closed(omega, y);
        !restriction_nonzero
    }

    /// The canonical morphism `x -> y` (identity scalars on the overlap), when `Hom(x, y) ≠ 0`.
    pub fn canonical(&self, x: Interval, y: Interval) -> Option<Morphism<F>> {
        if !hom_closed(x, y) {
            return None;
        }
        let (mx, my) = (self.module(x), self.module(y));
        let comps = (1..=self.pres.n())
            .map(|v| {
                let (r, c) = (my.dim(v - 1), mx.dim(v - 1));
                if r == 1 && c == 1 && y.lo() <= v && v <= x.hi() {
                    Matrix::identity(1)
                } else {
                    Matrix::zeros(r, c)
                }
            })
            .collect();
        Some(Morphism::new(mx, my, comps).expect("canonical maps are natural"))
    }

    /// Whether canonical `x -> y` followed by canonical `y -> z` is nonzero
    /// (then it is canonical `x -> z`).
    pub fn compose_canonical(&self, x: Interval, y: Interval, z: Interval) -> bool {
        hom_closed(x, y) && hom_closed(y, z) && compose_closed(x, z)
    }

    pub fn realize(&self, o: &Obj) -> Module<F> {
        self.realize_sum(o).sum
    }

    /// The direct sum of the canonical interval modules of `o`, in order.
    pub fn realize_sum(&self, o: &Obj) -> DirectSum<F> {
        let parts: Vec<&Module<F>> = o.iter().map(|x| self.module(x)).collect();
        DirectSum::new(&self.pres, &parts).expect("same presentation")
    }

    /// The isomorphism class of `m` from path-map ranks, without splitting maps.
    pub fn isoclass(&self, m: &Module<F>) -> Result<Obj> {
        m.same_presentation(self.module(self.indecs[0]))?;
        let mut parts = Vec::new();
        for ((lo, hi), k) in m.interval_multiplicities() {
            parts.extend(std::iter::repeat_n(Interval::new(lo, hi)?, k));
        }
        Ok(Obj::new(parts))
    }

    pub fn identify(&self, m: &Module<F>) -> Result<Obj> {
        Ok(self.identify_iso(m)?.0)
    }

    /// Decomposes `m` and returns `o` with an isomorphism `realize(o) -> m`.
    pub fn identify_iso(&self, m: &Module<F>) -> Result<(Obj, Morphism<F>)> {
        m.same_presentation(self.module(self.indecs[0]))?;
        let d = decompose_with(m, &self.decompose)?;
        let parts: Vec<Interval> = d
            .pieces
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<_>>()?;
        let obj = Obj::new(parts);
        let iso = if d.inclusions.is_empty() {
            Morphism::zero(&self.realize(&obj), m)
        } else {
            let refs: Vec<&Morphism<F>> = d.inclusions.iter().collect();
            Morphism::row(&refs)?
        };
        Ok((obj, iso))
    }

    /// Decomposed middle terms over all classes of `Ext¹(x, y)`, split first, duplicates removed.
    pub fn extensions(&self, x: Interval, y: Interval) -> Result<Vec<Obj>> {
        let ext = ExtSpace::new(self.module(x), self.module(y))?;
        let mut out: Vec<Obj> = Vec::new();
        let mut err = None;
        let _ = ext.for_each_class::<()>(|_, ses| match self.identify(ses.middle()) {
            Ok(o) => {
                if !out.contains(&o) {
                    out.push(o);
                }
                ControlFlow::Continue(())
            }
            Err(e) => {
                err = Some(e);
                ControlFlow::Break(())
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// The extension `0 -> realize(left) -> E -> realize(right) -> 0` whose class has
    /// coordinate `scalars[(j, i)]` on the basis class of `Ext¹(right_i, left_j)`.
    pub fn extension_from_scalars(
        &self,
        right: &Obj,
        left: &Obj,
        scalars: &Matrix<F>,
    ) -> Result<Ses<F>> {
        if scalars.shape() != (left.len(), right.len()) {
            return Err(Error::Mismatch(
                "extension coordinates have the wrong shape".into(),
            ));
        }
        let (mr, ml) = (self.realize(right), self.realize(left));
        let n = self.pres.n();
        // row offset of each left summand, column offset of each right summand, per vertex
        let offsets = |o: &Obj| -> Vec<Vec<usize>> {
            (1..=n)
                .map(|v| {
                    let mut acc = 0;
                    o.iter()
                        .map(|x| {
                            let at = acc;
                            acc += usize::from(x.contains(v));
                            at
                        })
                        .collect()
                })
                .collect()
        };
        let (lo, ro) = (offsets(left), offsets(right));
        let mut blocks: Vec<Matrix<F>> = (0..n.saturating_sub(1))
            .map(|i| Matrix::zeros(ml.dim(i), mr.dim(i + 1)))
            .collect();
        for (j, a) in left.iter().enumerate() {
            for (i, u) in right.iter().enumerate() {
                let c = scalars[(j, i)];
                if c.is_zero() {
                    continue;
                }
                if self.ext_dim(u, a) == 0 {
                    return Err(Error::Mismatch(format!("Ext({u}, {a}) vanishes")));
                }
                let pair = ExtSpace::new(self.module(u), self.module(a))?;
                let xi = pair.cocycle(&[F::one()]);
                for (k, b) in pair.xi_blocks(&xi).iter().enumerate() {
                    if b.rows() == 1 && b.cols() == 1 && !b[(0, 0)].is_zero() {
                        blocks[k][(lo[k][j], ro[k + 1][i])] += c * b[(0, 0)];
                    }
                }
            }
        }
        realize_blocks(&mr, &ml, &blocks)
    }

    /// Basis of `Hom(realize(x), realize(y))`: one canonical map per pair of
    /// summands with nonzero Hom, ordered by (target summand, source summand).
    pub fn hom_basis(&self, x: &Obj, y: &Obj) -> Vec<Morphism<F>> {
        let sx = self.realize_sum(x);
        let sy = self.realize_sum(y);
        let mut out = Vec::new();
        for (i, b) in y.iter().enumerate() {
            for (j, a) in x.iter().enumerate() {
                if let Some(c) = self.canonical(a, b) {
                    out.push(sy.injections[i].after(&c).after(&sx.projections[j]));
                }
            }
        }
        out
    }

    /// Morphism `realize(x) -> realize(y)` from a scalar matrix (rows: summands
    /// of `y`, columns: summands of `x`); entries where Hom vanishes must be zero.
    pub fn morphism_from_scalars(
        &self,
        x: &Obj,
        y: &Obj,
        scalars: &Matrix<F>,
    ) -> Result<Morphism<F>> {
        if scalars.shape() != (y.len(), x.len()) {
            return Err(Error::Mismatch("scalar matrix has the wrong shape".into()));
        }
        let sx = self.realize_sum(x);
        let sy = self.realize_sum(y);
        let mut acc = Morphism::zero(&sx.sum, &sy.sum);
        for (i, b) in y.iter().enumerate() {
            for (j, a) in x.iter().enumerate() {
                let s = scalars[(i, j)];
                if s.is_zero() {
                    continue;
                }
                let c = self
                    .canonical(a, b)
                    .ok_or_else(|| Error::Mismatch(format!("no morphism {a} -> {b}")))?;
                acc = acc.add(
                    &sy.injections[i]
                        .after(&c)
                        .after(&sx.projections[j])
                        .scale(s),
                )?;
            }
        }
        Ok(acc)
    }

    /// Inverse of [`Self::morphism_from_scalars`].
    pub fn scalars_of(&self, x: &Obj, y: &Obj, f: &Morphism<F>) -> Matrix<F> {
        let sx = self.realize_sum(x);
        let sy = self.realize_sum(y);
        Matrix::from_fn(y.len(), x.len(), |i, j| {
            let (a, b) = (x.parts()[j], y.parts()[i]);
            if !hom_closed(a, b) {
                return F::zero();
            }
            let block = sy.projections[i].after(f).after(&sx.injections[j]);
            // the canonical map is 1 at the socle vertex of b
            block.component(b.lo() - 1)[(0, 0)]
        })
    }

    /// Checks the closed-form tables against linear algebra on the realized modules.
    pub fn validate_tables(&self) -> Result<()> {
        for &x in &self.indecs {
            for &y in &self.indecs {
                let h = brute_hom_dim(self.module(x), self.module(y))?;
                if h != self.hom_dim(x, y) {
                    return Err(Error::Inconsistent(format!(
                        "hom({x},{y}): table {} vs {h}",
                        self.hom_dim(x, y)
                    )));
                }
                let e = brute_ext_dim(self.module(x), self.module(y))?;
                if e != self.ext_dim(x, y) {
                    return Err(Error::Inconsistent(format!(
                        "ext({x},{y}): table {} vs {e}",
                        self.ext_dim(x, y)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `Hom([a,b],[c,d]) ≠ 0` iff `a ≤ c ≤ b ≤ d`.
pub fn hom_closed(x: Interval, y: Interval) -> bool {
    x.lo() <= y.lo() && y.lo() <= x.hi() && x.hi() <= y.hi()
}

/// Whether a nonzero composite `x -> y -> z` of canonical maps can survive:
/// it does iff the socle of `z` lies at or below the top of `x`.
fn compose_closed(x: Interval, z: Interval) -> bool {
    z.lo() <= x.hi()
}
