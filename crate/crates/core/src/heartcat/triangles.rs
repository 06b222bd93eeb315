use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::FiniteField;
use crate::matrix::Matrix;
use crate::pairs::TwinPair;
use crate::serialcat::{CategoryCtx, Conflation, Interval, Obj};
use crate::subcat::Subcategory;
use crate::subspace::for_each_combination;

use super::quotient::Quotient;
use super::witness::{expect, expect_in, replay_conflation, replay_heart_object, HeartWitness};
use super::Heart;

/// Shapes whose extension space has more classes than this are skipped and
/// reported as truncated.
pub const MAX_CLASSES_PER_SHAPE: u64 = 1 << 12;

/// An enumeration stops once it has visited this many classes.
pub const MAX_CLASSES_PER_ENUMERATION: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriangleKind {
    Epi,
    Mono,
}

/// An epi-triangle `A -> B -> U₀` (`A, B ∈ add H`, first map W-monic,
/// `U₀ ∈ add U`) or a mono-triangle `T₀ -> A -> B` (`A, B ∈ add H`, second
/// map W-epic, `T₀ ∈ add T`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: FiniteField", deserialize = "F: FiniteField"))]
pub struct EpiTriangle<F> {
    pub kind: TriangleKind,
    pub conflation: Conflation<F>,
    /// Heart witnesses for the two terms required to lie in `H`.
    pub witnesses: Vec<HeartWitness<F>>,
}

impl<F: FiniteField> EpiTriangle<F> {
    /// The term certified to lie in `epi.U` (third) or `T_mono` (first).
    pub fn certified(&self) -> &Obj {
        match self.kind {
            TriangleKind::Epi => self.conflation.right(),
            TriangleKind::Mono => self.conflation.left(),
        }
    }

    /// Termwise direct sum of triangles of one kind.
    pub fn direct_sum(parts: &[EpiTriangle<F>]) -> Result<EpiTriangle<F>> {
        let kind = parts.first().map_or(TriangleKind::Epi, |t| t.kind);
        if parts.iter().any(|t| t.kind != kind) {
            return Err(crate::Error::Mismatch(
                "cannot sum epi- and mono-triangles".into(),
            ));
        }
        let conflations: Vec<Conflation<F>> = parts.iter().map(|t| t.conflation.clone()).collect();
        let mut witnesses: Vec<HeartWitness<F>> = Vec::new();
        for w in parts.iter().flat_map(|t| &t.witnesses) {
            if !witnesses.iter().any(|v| v.id == w.id) {
                witnesses.push(w.clone());
            }
        }
        witnesses.sort_by_key(|w| w.id);
        Ok(EpiTriangle {
            kind,
            conflation: Conflation::direct_sum(&conflations)?,
            witnesses,
        })
    }

    pub fn replay(&self, ctx: &CategoryCtx<F>, tp: &TwinPair<F>) -> Result<()> {
        let c = &self.conflation;
        replay_conflation(ctx, c)?;
        let q = Quotient::new(ctx, &tp.w);
        match self.kind {
            TriangleKind::Epi => {
                replay_heart_object(ctx, tp, c.left(), &self.witnesses)?;
                replay_heart_object(ctx, tp, c.middle(), &self.witnesses)?;
                expect(q.is_w_monic(&c.inflation)?, "first map is not W-monic")?;
                expect_in(c.right(), tp.u(), "third term")
            }
            TriangleKind::Mono => {
                replay_heart_object(ctx, tp, c.middle(), &self.witnesses)?;
                replay_heart_object(ctx, tp, c.right(), &self.witnesses)?;
                expect(q.is_w_epic(&c.deflation)?, "second map is not W-epic")?;
                expect_in(c.left(), tp.t(), "first term")
            }
        }
    }
}

/// Coverage of a bounded enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumSummary {
    /// Pairs of end terms whose extension classes were examined.
    pub shapes: usize,
    pub classes: u64,
    /// Shapes skipped because they had too many classes.
    pub truncated: usize,
    /// Whether the enumeration stopped at [`MAX_CLASSES_PER_ENUMERATION`].
    pub exhausted: bool,
}

impl std::fmt::Display for EnumSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} shapes, {} classes, {} shapes truncated",
            self.shapes, self.classes, self.truncated
        )?;
        if self.exhausted {
            write!(f, ", class budget exhausted")?;
        }
        Ok(())
    }
}

impl<F: FiniteField> Heart<'_, F> {
    /// Enumerates indecomposable-free epi- or mono-triangles within the search bounds.
    ///
    /// Epi: first the trivial triangles `x -> x -> 0` (`x ∈ H \ W`) and
    /// `0 -> u -> u` (`u ∈ H ∩ U`). Then `A` runs over nonzero objects of
    /// `add(H \ W)` and `U₀` over objects built from indecomposables of `U`
    /// with an extension against `A`; every extension class in which each
    /// summand of both ends takes part is realized, and kept when the middle
    /// term lies in `add H` and the first map is W-monic. Any other
    /// epi-triangle is, up to summands of `W` in `A`, a direct sum of these.
    /// Mono is dual. Order: total dimension, then the end terms
    /// lexicographically, then class coordinates.
    pub fn enum_triangles<B>(
        &self,
        kind: TriangleKind,
        mut visit: impl FnMut(EpiTriangle<F>) -> ControlFlow<B>,
    ) -> Result<(EnumSummary, Option<B>)> {
        let ctx = self.ctx;
        let mut summary = EnumSummary::default();
        let m = self.bounds.mult;
        let cap = self.bounds.dim_cap;
        let free_class = match kind {
            TriangleKind::Epi => self.tp.u(),
            TriangleKind::Mono => self.tp.t(),
        };

        let mut trivial: Vec<(Obj, Obj)> = Vec::new();
        for x in self.survivors.iter() {
            let o = Obj::single(x);
            trivial.push(match kind {
                TriangleKind::Epi => (o, Obj::zero()),
                TriangleKind::Mono => (Obj::zero(), o),
            });
        }
        for x in free_class.iter().filter(|&x| self.classes.h.contains(x)) {
            let o = Obj::single(x);
            trivial.push(match kind {
                TriangleKind::Epi => (Obj::zero(), o),
                TriangleKind::Mono => (o, Obj::zero()),
            });
        }
        for (left, right) in trivial {
            let c = Conflation::split(&left, &right);
            let t = EpiTriangle {
                kind,
                witnesses: self.witnesses_for(c.middle())?,
                conflation: c,
            };
            if let ControlFlow::Break(b) = visit(t) {
                return Ok((summary, Some(b)));
            }
        }

        let heart_side = objects_upto(&self.survivors.iter().collect::<Vec<_>>(), m, cap);
        // ext pairs are oriented (third term, first term)
        let ext = |x: Interval, y: Interval| match kind {
            TriangleKind::Epi => ctx.ext_dim(y, x) > 0,
            TriangleKind::Mono => ctx.ext_dim(x, y) > 0,
        };
        for d in 2..=cap {
            for x in heart_side.iter().filter(|x| x.total_dim() < d) {
                if summary.classes >= MAX_CLASSES_PER_ENUMERATION {
                    summary.exhausted = true;
                    return Ok((summary, None));
                }
                let eligible: Vec<Interval> = free_class
                    .iter()
                    .filter(|&y| x.iter().any(|a| ext(a, y)))
                    .collect();
                let free_side = objects_of_dim(&eligible, m, d - x.total_dim());
                for y in &free_side {
                    let (right, left) = match kind {
                        TriangleKind::Epi => (y.clone(), x.clone()),
                        TriangleKind::Mono => (x.clone(), y.clone()),
                    };
                    let pos = ext_positions(ctx, &right, &left);
                    let required = Required::Both;
                    if !coverable(&pos, left.len(), right.len(), required) {
                        continue;
                    }
                    summary.shapes += 1;
                    let mut out = None;
                    let flow =
                        for_each_class::<F, Result<()>>(&pos, &left, &right, required, |xs| {
                            summary.classes += 1;
                            match self.realize_triangle(kind, &right, &left, xs) {
                                Ok(Some(t)) => {
                                    if let ControlFlow::Break(b) = visit(t) {
                                        out = Some(b);
                                        return ControlFlow::Break(Ok(()));
                                    }
                                    ControlFlow::Continue(())
                                }
                                Ok(None) => ControlFlow::Continue(()),
                                Err(e) => ControlFlow::Break(Err(e)),
                            }
                        });
                    match flow {
                        ClassFlow::TooMany => summary.truncated += 1,
                        ClassFlow::Done(ControlFlow::Break(r)) => {
                            r?;
                            return Ok((summary, out));
                        }
                        ClassFlow::Done(ControlFlow::Continue(())) => {}
                    }
                }
            }
        }
        Ok((summary, None))
    }

    fn realize_triangle(
        &self,
        kind: TriangleKind,
        right: &Obj,
        left: &Obj,
        xs: &Matrix<F>,
    ) -> Result<Option<EpiTriangle<F>>> {
        let ctx = self.ctx;
        let ses = ctx.extension_from_scalars(right, left, xs)?;
        if !self.contains(&ctx.isoclass(ses.middle())?) {
            return Ok(None);
        }
        let c = Conflation::identify(ctx, &ses)?;
        let q = self.quotient();
        let heart_terms = match kind {
            TriangleKind::Epi => {
                if !q.is_w_monic(&c.inflation)? {
                    return Ok(None);
                }
                c.left().oplus(c.middle())
            }
            TriangleKind::Mono => {
                if !q.is_w_epic(&c.deflation)? {
                    return Ok(None);
                }
                c.middle().oplus(c.right())
            }
        };
        Ok(Some(EpiTriangle {
            kind,
            witnesses: self.witnesses_for(&heart_terms)?,
            conflation: c,
        }))
    }
}

/// Nonzero objects with summands from `ids`, each of multiplicity at most
/// `mult`, of total dimension at most `cap`; sorted by dimension then lexicographically.
pub(crate) fn objects_upto(ids: &[Interval], mult: usize, cap: usize) -> Vec<Obj> {
    let mut out = Vec::new();
    let mut counts = vec![0usize; ids.len()];
    loop {
        let mut i = 0;
        loop {
            if i == ids.len() {
                out.sort_by(|a: &Obj, b: &Obj| (a.total_dim(), a).cmp(&(b.total_dim(), b)));
                return out;
            }
            counts[i] += 1;
            if counts[i] <= mult {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
        let o: Obj = ids
            .iter()
            .zip(&counts)
            .flat_map(|(&x, &c)| std::iter::repeat_n(x, c))
            .collect();
        if o.total_dim() <= cap {
            out.push(o);
        }
    }
}

pub(crate) fn objects_of_dim(ids: &[Interval], mult: usize, dim: usize) -> Vec<Obj> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        ids: &[Interval],
        mult: usize,
        left: usize,
        cur: &mut Vec<Interval>,
        out: &mut Vec<Obj>,
    ) {
        if left == 0 {
            if !cur.is_empty() {
                out.push(Obj::new(cur.clone()));
            }
            return;
        }
        let Some((&x, rest)) = ids.split_first() else {
            return;
        };
        for c in 0..=mult {
            if c * x.len() > left {
                break;
            }
            cur.extend(std::iter::repeat_n(x, c));
            rec(rest, mult, left - c * x.len(), cur, out);
            cur.truncate(cur.len() - c);
        }
    }
    rec(ids, mult, dim, &mut cur, &mut out);
    out.sort();
    out
}

/// Positions `(j, i)` with `Ext¹(right_i, left_j) ≠ 0`.
pub(crate) fn ext_positions<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    right: &Obj,
    left: &Obj,
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (j, a) in left.iter().enumerate() {
        for (i, u) in right.iter().enumerate() {
            if ctx.ext_dim(u, a) > 0 {
                out.push((j, i));
            }
        }
    }
    out
}

/// Which lines of a class matrix must be nonzero.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Required {
    Rows,
    Columns,
    Both,
}

impl Required {
    fn rows(self) -> bool {
        matches!(self, Required::Rows | Required::Both)
    }

    fn columns(self) -> bool {
        matches!(self, Required::Columns | Required::Both)
    }
}

pub(crate) fn coverable(pos: &[(usize, usize)], rows: usize, cols: usize, req: Required) -> bool {
    (!req.rows() || (0..rows).all(|j| pos.iter().any(|p| p.0 == j)))
        && (!req.columns() || (0..cols).all(|i| pos.iter().any(|p| p.1 == i)))
}

pub(crate) enum ClassFlow<B> {
    TooMany,
    Done(ControlFlow<B>),
}

/// Visits the class matrices supported on `pos` (rows indexed by `left`,
/// columns by `right`) that the requirement keeps, up to automorphisms of
/// repeated summands.
///
/// For a required side, the lines belonging to copies of one indecomposable
/// must be linearly independent: otherwise an automorphism makes one of them
/// zero and the class splits off a copy. Row operations among copies act on
/// classes by isomorphisms of conflations, so on the row side (column side
/// when only columns are required) only lines in reduced echelon form are
/// visited.
pub(crate) fn for_each_class<F: FiniteField, B>(
    pos: &[(usize, usize)],
    left: &Obj,
    right: &Obj,
    req: Required,
    mut f: impl FnMut(&Matrix<F>) -> ControlFlow<B>,
) -> ClassFlow<B> {
    let (rows, cols) = (left.len(), right.len());
    let k = pos.len() as u32;
    let total = (F::CHARACTERISTIC as u64).checked_pow(k);
    if total.is_none_or(|t| t > MAX_CLASSES_PER_SHAPE) {
        return ClassFlow::TooMany;
    }
    let row_groups = copy_groups(left);
    let col_groups = copy_groups(right);
    let units: Vec<Vec<F>> = (0..pos.len())
        .map(|i| {
            (0..pos.len())
                .map(|j| if i == j { F::one() } else { F::zero() })
                .collect()
        })
        .collect();
    ClassFlow::Done(for_each_combination::<F, B>(
        pos.len(),
        &units,
        |coeffs, _| {
            let mut m = Matrix::zeros(rows, cols);
            for (&(j, i), &c) in pos.iter().zip(coeffs) {
                m[(j, i)] = c;
            }
            let t = m.transpose();
            let ok = (!req.rows() || row_groups.iter().all(|g| independent(&m, g, req.rows())))
                && (!req.columns() || col_groups.iter().all(|g| independent(&t, g, !req.rows())));
            if ok {
                f(&m)
            } else {
                ControlFlow::Continue(())
            }
        },
    ))
}

/// Index ranges of the copies of each indecomposable in a sorted object.
fn copy_groups(o: &Obj) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (k, x) in o.iter().enumerate() {
        match out.last_mut() {
            Some(g) if o.parts()[g[0]] == x => g.push(k),
            _ => out.push(vec![k]),
        }
    }
    out
}

/// Whether the rows `g` of `m` are independent, and in reduced echelon form if `canonical`.
fn independent<F: FiniteField>(m: &Matrix<F>, g: &[usize], canonical: bool) -> bool {
    let block = m.select_rows(g);
    let e = block.echelon();
    e.pivots.len() == g.len() && (!canonical || e.reduced == block)
}

/// Indecomposables of `class` outside `other`.
pub(crate) fn outside(o: &Obj, a: &Subcategory, b: &Subcategory) -> Option<Interval> {
    o.iter().find(|&x| !a.contains(x) && !b.contains(x))
}
