use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::matrix::Matrix;
use crate::repcore::{cokernel, kernel, Morphism, Ses};

use super::ctx::{hom_closed, CategoryCtx};
use super::interval::Obj;

/// A morphism between realized objects, written in canonical bases: entry
/// `(i, j)` is the coefficient of the canonical map from summand `j` of the
/// source to summand `i` of the target.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "F: FiniteField", deserialize = "F: FiniteField"))]
pub struct ObjMap<F> {
    pub source: Obj,
    pub target: Obj,
    pub scalars: Matrix<F>,
}

impl<F: FiniteField> ObjMap<F> {
    pub fn new(source: Obj, target: Obj, scalars: Matrix<F>) -> Result<Self> {
        if scalars.shape() != (target.len(), source.len()) {
            return Err(Error::Mismatch(format!(
                "scalar matrix of shape {:?} for a map {} -> {}",
                scalars.shape(),
                source,
                target
            )));
        }
        for (i, b) in target.iter().enumerate() {
            for (j, a) in source.iter().enumerate() {
                if !scalars[(i, j)].is_zero() && !hom_closed(a, b) {
                    return Err(Error::Mismatch(format!(
                        "nonzero entry for {a} -> {b}, where Hom vanishes"
                    )));
                }
            }
        }
        Ok(ObjMap {
            source,
            target,
            scalars,
        })
    }

    pub fn zero(source: &Obj, target: &Obj) -> Self {
        ObjMap {
            source: source.clone(),
            target: target.clone(),
            scalars: Matrix::zeros(target.len(), source.len()),
        }
    }

    pub fn identity(o: &Obj) -> Self {
        ObjMap {
            source: o.clone(),
            target: o.clone(),
            scalars: Matrix::identity(o.len()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scalars.is_zero()
    }

    pub fn to_morphism(&self, ctx: &CategoryCtx<F>) -> Result<Morphism<F>> {
        ctx.morphism_from_scalars(&self.source, &self.target, &self.scalars)
    }

    pub fn from_morphism(
        ctx: &CategoryCtx<F>,
        source: &Obj,
        target: &Obj,
        m: &Morphism<F>,
    ) -> Result<Self> {
        if m.source() != &ctx.realize(source) || m.target() != &ctx.realize(target) {
            return Err(Error::Mismatch(
                "morphism endpoints are not the realized objects".into(),
            ));
        }
        let map = ObjMap {
            source: source.clone(),
            target: target.clone(),
            scalars: ctx.scalars_of(source, target, m),
        };
        debug_assert_eq!(&map.to_morphism(ctx).expect("valid scalars"), m);
        Ok(map)
    }

    /// `self ∘ inner`, using the canonical composition rule.
    pub fn after(&self, ctx: &CategoryCtx<F>, inner: &ObjMap<F>) -> Result<ObjMap<F>> {
        if inner.target != self.source {
            return Err(Error::Mismatch("composition endpoints do not match".into()));
        }
        let (x, y, z) = (&inner.source, &self.source, &self.target);
        let scalars = Matrix::from_fn(z.len(), x.len(), |i, j| {
            let mut acc = F::zero();
            for k in 0..y.len() {
                let (g, f) = (self.scalars[(i, k)], inner.scalars[(k, j)]);
                if !g.is_zero()
                    && !f.is_zero()
                    && ctx.compose_canonical(x.parts()[j], y.parts()[k], z.parts()[i])
                {
                    acc += g * f;
                }
            }
            acc
        });
        Ok(ObjMap {
            source: x.clone(),
            target: z.clone(),
            scalars,
        })
    }

    pub fn add(&self, other: &ObjMap<F>) -> Result<ObjMap<F>> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Mismatch("maps are not parallel".into()));
        }
        Ok(ObjMap {
            scalars: &self.scalars + &other.scalars,
            ..self.clone()
        })
    }

    pub fn scale(&self, s: F) -> ObjMap<F> {
        ObjMap {
            scalars: self.scalars.scale(s),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> ObjMap<F> {
        self.scale(-F::one())
    }

    pub fn sub(&self, other: &ObjMap<F>) -> Result<ObjMap<F>> {
        self.add(&other.neg())
    }

    /// Assembles a map `⊕ sources -> ⊕ targets` from blocks `grid[i][j] : sources[j] -> targets[i]`.
    /// Both sums are taken in sorted (canonical) order.
    pub fn from_blocks(
        sources: &[Obj],
        targets: &[Obj],
        grid: &[Vec<ObjMap<F>>],
    ) -> Result<ObjMap<F>> {
        if grid.len() != targets.len() || grid.iter().any(|r| r.len() != sources.len()) {
            return Err(Error::Mismatch("block grid has the wrong shape".into()));
        }
        let (source, cpos) = sorted_sum(sources);
        let (target, rpos) = sorted_sum(targets);
        let mut scalars = Matrix::zeros(target.len(), source.len());
        let mut r0 = 0;
        for (i, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (j, blk) in row.iter().enumerate() {
                if blk.source != sources[j] || blk.target != targets[i] {
                    return Err(Error::Mismatch(format!(
                        "block ({i}, {j}) has the wrong endpoints"
                    )));
                }
                for r in 0..targets[i].len() {
                    for c in 0..sources[j].len() {
                        scalars[(rpos[r0 + r], cpos[c0 + c])] = blk.scalars[(r, c)];
                    }
                }
                c0 += sources[j].len();
            }
            r0 += targets[i].len();
        }
        Ok(ObjMap {
            source,
            target,
            scalars,
        })
    }

    /// Block-diagonal sum of maps.
    pub fn direct_sum(maps: &[ObjMap<F>]) -> Result<ObjMap<F>> {
        let sources: Vec<Obj> = maps.iter().map(|m| m.source.clone()).collect();
        let targets: Vec<Obj> = maps.iter().map(|m| m.target.clone()).collect();
        let grid: Vec<Vec<ObjMap<F>>> = (0..maps.len())
            .map(|i| {
                (0..maps.len())
                    .map(|j| {
                        if i == j {
                            maps[i].clone()
                        } else {
                            ObjMap::zero(&sources[j], &targets[i])
                        }
                    })
                    .collect()
            })
            .collect();
        ObjMap::from_blocks(&sources, &targets, &grid)
    }

    /// The sorted sum of `parts` with its injections and projections.
    pub fn sum_structure(parts: &[Obj]) -> (Obj, Vec<ObjMap<F>>, Vec<ObjMap<F>>) {
        let inj = (0..parts.len())
            .map(|k| {
                let col: Vec<Vec<ObjMap<F>>> = parts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        vec![if i == k {
                            ObjMap::identity(p)
                        } else {
                            ObjMap::zero(&parts[k], p)
                        }]
                    })
                    .collect();
                ObjMap::from_blocks(&parts[k..=k], parts, &col).expect("consistent blocks")
            })
            .collect::<Vec<_>>();
        let proj = (0..parts.len())
            .map(|k| {
                let row: Vec<ObjMap<F>> = parts
                    .iter()
                    .enumerate()
                    .map(|(j, p)| {
                        if j == k {
                            ObjMap::identity(p)
                        } else {
                            ObjMap::zero(p, &parts[k])
                        }
                    })
                    .collect();
                ObjMap::from_blocks(parts, &parts[k..=k], &[row]).expect("consistent blocks")
            })
            .collect::<Vec<_>>();
        (sorted_sum(parts).0, inj, proj)
    }

    pub fn is_injective(&self, ctx: &CategoryCtx<F>) -> Result<bool> {
        Ok(self.to_morphism(ctx)?.is_injective())
    }

    pub fn is_surjective(&self, ctx: &CategoryCtx<F>) -> Result<bool> {
        Ok(self.to_morphism(ctx)?.is_surjective())
    }

    /// The kernel, identified, with its inclusion.
    pub fn kernel(&self, ctx: &CategoryCtx<F>) -> Result<(Obj, ObjMap<F>)> {
        let (k, incl) = kernel(&self.to_morphism(ctx)?);
        let (ko, iso) = ctx.identify_iso(&k)?;
        let map = ObjMap::from_morphism(ctx, &ko, &self.source, &incl.after(&iso))?;
        Ok((ko, map))
    }

    /// The cokernel, identified, with its projection.
    pub fn cokernel(&self, ctx: &CategoryCtx<F>) -> Result<(Obj, ObjMap<F>)> {
        let (c, proj) = cokernel(&self.to_morphism(ctx)?);
        let (co, iso) = ctx.identify_iso(&c)?;
        let inv = iso
            .inverse()
            .ok_or_else(|| Error::Inconsistent("identification is not an isomorphism".into()))?;
        let map = ObjMap::from_morphism(ctx, &self.target, &co, &inv.after(&proj))?;
        Ok((co, map))
    }
}

/// A short exact sequence between realized objects, in canonical bases.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "F: FiniteField", deserialize = "F: FiniteField"))]
pub struct Conflation<F> {
    pub inflation: ObjMap<F>,
    pub deflation: ObjMap<F>,
}

impl<F: FiniteField> Conflation<F> {
    pub fn left(&self) -> &Obj {
        &self.inflation.source
    }

    pub fn middle(&self) -> &Obj {
        &self.inflation.target
    }

    pub fn right(&self) -> &Obj {
        &self.deflation.target
    }

    /// Builds the conflation from a sequence whose middle is `realize(mid)`
    /// and whose ends are arbitrary modules, identifying the ends.
    pub fn from_ses(ctx: &CategoryCtx<F>, mid: &Obj, ses: &Ses<F>) -> Result<Self> {
        let (left, li) = ctx.identify_iso(ses.left())?;
        let (right, ri) = ctx.identify_iso(ses.right())?;
        let rinv = ri
            .inverse()
            .ok_or_else(|| Error::Inconsistent("identification is not an isomorphism".into()))?;
        let infl = ses.inflation().after(&li);
        let defl = rinv.after(ses.deflation());
        Ok(Conflation {
            inflation: ObjMap::from_morphism(ctx, &left, mid, &infl)?,
            deflation: ObjMap::from_morphism(ctx, mid, &right, &defl)?,
        })
    }

    /// Builds the conflation from an arbitrary sequence, identifying all three terms.
    pub fn identify(ctx: &CategoryCtx<F>, ses: &Ses<F>) -> Result<Self> {
        let (mid, iso) = ctx.identify_iso(ses.middle())?;
        let inv = iso
            .inverse()
            .ok_or_else(|| Error::Inconsistent("identification is not an isomorphism".into()))?;
        let moved = Ses::new(inv.after(ses.inflation()), ses.deflation().after(&iso))?;
        Conflation::from_ses(ctx, &mid, &moved)
    }

    /// Realizes and validates the sequence `0 -> left -> middle -> right -> 0`.
    pub fn to_ses(&self, ctx: &CategoryCtx<F>) -> Result<Ses<F>> {
        if self.inflation.target != self.deflation.source {
            return Err(Error::Mismatch(
                "inflation and deflation do not share a middle term".into(),
            ));
        }
        for o in [self.left(), self.middle(), self.right()] {
            ctx.check_obj(o)?;
        }
        Ses::new(
            self.inflation.to_morphism(ctx)?,
            self.deflation.to_morphism(ctx)?,
        )
    }

    /// Termwise direct sum.
    pub fn direct_sum(parts: &[Conflation<F>]) -> Result<Self> {
        let inf: Vec<ObjMap<F>> = parts.iter().map(|c| c.inflation.clone()).collect();
        let def: Vec<ObjMap<F>> = parts.iter().map(|c| c.deflation.clone()).collect();
        Ok(Conflation {
            inflation: ObjMap::direct_sum(&inf)?,
            deflation: ObjMap::direct_sum(&def)?,
        })
    }

    pub fn split(left: &Obj, right: &Obj) -> Self {
        let mid = left.oplus(right);
        let inflation = ObjMap {
            source: left.clone(),
            target: mid.clone(),
            scalars: Matrix::from_fn(mid.len(), left.len(), |_, _| F::zero()),
        };
        let deflation = ObjMap::zero(&mid, right);
        let mut c = Conflation {
            inflation,
            deflation,
        };
        // place each summand at its sorted position in the middle term
        let mut used = vec![false; mid.len()];
        let mut slot = |x| {
            let k = (0..mid.len())
                .find(|&k| !used[k] && mid.parts()[k] == x)
                .expect("summand occurs in the sum");
            used[k] = true;
            k
        };
        for (j, x) in left.iter().enumerate() {
            let k = slot(x);
            c.inflation.scalars[(k, j)] = F::one();
        }
        for (i, x) in right.iter().enumerate() {
            let k = slot(x);
            c.deflation.scalars[(i, k)] = F::one();
        }
        c
    }
}

/// Sorted concatenation of `parts`, with the sorted position of each concatenated summand.
fn sorted_sum(parts: &[Obj]) -> (Obj, Vec<usize>) {
    let concat: Vec<_> = parts.iter().flat_map(|o| o.iter()).collect();
    let mut order: Vec<usize> = (0..concat.len()).collect();
    order.sort_by_key(|&k| concat[k]);
    let mut pos = vec![0; concat.len()];
    for (s, &k) in order.iter().enumerate() {
        pos[k] = s;
    }
    (Obj::new(concat), pos)
}
