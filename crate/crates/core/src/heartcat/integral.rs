use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::FiniteField;
use crate::pairs::TwinPair;
use crate::serialcat::{CategoryCtx, Conflation, Interval, Obj};
use crate::subcat::{subcat_in_star, Subcategory, Verdict};

use super::triangles::{
    ext_positions, for_each_class, objects_of_dim, ClassFlow, EnumSummary, Required,
};
use super::witness::{expect, expect_eq, expect_in, replay_conflation};
use super::{EpiTriangle, Heart, TriangleKind, MAX_CLASSES_PER_ENUMERATION};

/// Which of the two equivalent integrality conditions a certificate violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `B⁻ ∩ (T ★ epi.U) ⊆ U`
    Epi,
    /// `B⁺ ∩ (T_mono ★ U) ⊆ T`
    Mono,
}

/// Why a heart is integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralRoute {
    /// Every indecomposable of the heart lies in `W`.
    ZeroHeart,
    /// `U ⊆ S ★ T`.
    UInStar,
    /// `T ⊆ U ★ V`.
    TInStar,
    /// `Ind U ⊆ Ind S ∪ Ind W`, so `epi.U ⊆ S ⊕ W`.
    UInSW,
    /// `Ind T ⊆ Ind V ∪ Ind W`, so `T_mono ⊆ V ⊕ W`.
    TInVW,
    /// The surviving indecomposables are pairwise orthogonal in the quotient,
    /// which is then a product of copies of the category of vector spaces.
    Semisimple,
}

/// An object `Z ∈ B⁻ ∩ (T ★ epi.U)` outside `add U`, or the dual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: FiniteField", deserialize = "F: FiniteField"))]
pub struct NonIntegralCertificate<F> {
    pub side: Side,
    pub z: Obj,
    /// `T₀ -> Z -> U₀`.
    pub conflation: Conflation<F>,
    /// Certifies `U₀ ∈ epi.U` (epi side) or `T₀ ∈ T_mono` (mono side).
    pub triangle: EpiTriangle<F>,
    /// `B⁻` (epi side) or `B⁺` (mono side) conflations for the summands of `Z`.
    pub z_witnesses: Vec<(Interval, Conflation<F>)>,
    /// A summand of `Z` outside `U` (epi side) or `T` (mono side).
    pub offending: Interval,
}

impl<F: FiniteField> NonIntegralCertificate<F> {
    pub fn replay(&self, ctx: &CategoryCtx<F>, tp: &TwinPair<F>) -> Result<()> {
        let c = &self.conflation;
        replay_conflation(ctx, c)?;
        expect_eq(c.middle(), &self.z, "middle term")?;
        self.triangle.replay(ctx, tp)?;
        expect(
            self.z.multiplicity(self.offending) > 0,
            "offending summand is not a summand of Z",
        )?;
        for x in self.z.support() {
            let (_, w) = self
                .z_witnesses
                .iter()
                .find(|(y, _)| *y == x)
                .ok_or_else(|| {
                    crate::Error::ReplayMismatch(format!("no witness for the summand {x} of Z"))
                })?;
            replay_conflation(ctx, w)?;
            expect_in(w.middle(), &tp.w, "middle of a witness for Z")?;
            match self.side {
                Side::Epi => {
                    expect_eq(w.left(), &Obj::single(x), "B- witness for Z")?;
                    expect_in(w.right(), tp.s(), "right end of a B- witness for Z")?;
                }
                Side::Mono => {
                    expect_eq(w.right(), &Obj::single(x), "B+ witness for Z")?;
                    expect_in(w.left(), tp.v(), "left end of a B+ witness for Z")?;
                }
            }
        }
        match self.side {
            Side::Epi => {
                expect(
                    self.triangle.kind == TriangleKind::Epi,
                    "expected an epi-triangle",
                )?;
                expect_in(c.left(), tp.t(), "first term")?;
                expect_eq(c.right(), self.triangle.certified(), "third term")?;
                expect(
                    !tp.u().contains(self.offending),
                    "offending summand lies in U",
                )
            }
            Side::Mono => {
                expect(
                    self.triangle.kind == TriangleKind::Mono,
                    "expected a mono-triangle",
                )?;
                expect_eq(c.left(), self.triangle.certified(), "first term")?;
                expect_in(c.right(), tp.u(), "third term")?;
                expect(
                    !tp.t().contains(self.offending),
                    "offending summand lies in T",
                )
            }
        }
    }
}

impl<F: FiniteField> Heart<'_, F> {
    /// Decides whether the heart is integral.
    ///
    /// Holds only through a named route; Fails with a certificate found by
    /// bounded search on either side; otherwise undecided.
    pub fn check_integral(&self) -> Result<Verdict<IntegralRoute, NonIntegralCertificate<F>>> {
        if let Some(v) = self.taint() {
            return Ok(v);
        }
        if let Some(r) = self.integral_route()? {
            return Ok(Verdict::Holds(r));
        }
        let mut notes = Vec::new();
        for side in [Side::Epi, Side::Mono] {
            let r = super::tainted::<_, (), ()>(&self.bounds, self.search_certificate(side))?;
            match r {
                Ok((Some(cert), _)) => return Ok(Verdict::Fails(cert)),
                Ok((None, s)) => notes.push(format!("{side:?} side: {s}")),
                Err(Verdict::UnknownWithinBound(u)) => notes.push(u.detail),
                Err(_) => unreachable!("tainted only yields undecided verdicts"),
            }
        }
        Ok(Verdict::UnknownWithinBound(self.unresolved(format!(
            "no sufficient condition applies and no certificate was found ({})",
            notes.join("; ")
        ))))
    }

    /// The first applicable sufficient condition for integrality.
    pub fn integral_route(&self) -> Result<Option<IntegralRoute>> {
        let tp = self.tp;
        if self.is_zero_heart() {
            return Ok(Some(IntegralRoute::ZeroHeart));
        }
        if subcat_in_star(self.ctx, tp.u(), tp.s(), tp.t(), &self.bounds)?.is_holds() {
            return Ok(Some(IntegralRoute::UInStar));
        }
        if subcat_in_star(self.ctx, tp.t(), tp.u(), tp.v(), &self.bounds)?.is_holds() {
            return Ok(Some(IntegralRoute::TInStar));
        }
        if self.u_in_sw() {
            return Ok(Some(IntegralRoute::UInSW));
        }
        if self.t_in_vw() {
            return Ok(Some(IntegralRoute::TInVW));
        }
        if self.is_semisimple() {
            return Ok(Some(IntegralRoute::Semisimple));
        }
        Ok(None)
    }

    pub(crate) fn u_in_sw(&self) -> bool {
        self.tp.u().is_subset(&self.tp.s().oplus(&self.classes.w))
    }

    pub(crate) fn t_in_vw(&self) -> bool {
        self.tp.t().is_subset(&self.tp.v().oplus(&self.classes.w))
    }

    /// Whether distinct surviving indecomposables have no nonzero maps between
    /// them in the quotient (each has endomorphism ring the field itself).
    pub fn is_semisimple(&self) -> bool {
        let q = self.quotient();
        let ids: Vec<Interval> = self.survivors.iter().collect();
        ids.iter().all(|&x| {
            ids.iter()
                .all(|&y| x == y || q.quotient_dim(&Obj::single(x), &Obj::single(y)) == 0)
        })
    }

    /// Bounded search for a certificate on one side.
    ///
    /// Epi side: the third terms `U₀` of enumerated epi-triangles and their
    /// direct sums are extended by objects `T₀ ∈ add T` built from
    /// indecomposables with an extension against `U₀`, every summand of `T₀`
    /// taking part in the class (a summand that does not splits off and lies
    /// in `T ∩ B⁻ ⊆ U`). Middle terms in `B⁻` with a summand outside `U` are
    /// certificates. The search runs after each dimension level of the
    /// triangle enumeration and stops at the first level yielding one; there
    /// the smallest total dimension wins, ties broken lexicographically.
    /// Mono side is dual.
    pub fn search_certificate(
        &self,
        side: Side,
    ) -> Result<(Option<NonIntegralCertificate<F>>, EnumSummary)> {
        let kind = match side {
            Side::Epi => TriangleKind::Epi,
            Side::Mono => TriangleKind::Mono,
        };
        let mut search = CertSearch {
            heart: self,
            side,
            base: Vec::new(),
            searched: BTreeSet::new(),
            summary: EnumSummary::default(),
            closure_cut: false,
        };
        let mut level = 0;
        let mut failure = None;
        let (enumerated, found) = self.enum_triangles(kind, |t| {
            let l = triangle_level(&t);
            if l > level {
                level = l;
                match search.flush() {
                    Ok(Some(cert)) => return ControlFlow::Break(Some(cert)),
                    Ok(None) => {}
                    Err(e) => {
                        failure = Some(e);
                        return ControlFlow::Break(None);
                    }
                }
            }
            let o = t.certified().clone();
            if !o.is_zero() && !search.base.iter().any(|(b, _)| *b == o) {
                search.base.push((o, t));
            }
            ControlFlow::Continue(())
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        let cert = match found {
            Some(cert) => cert,
            None => search.flush()?,
        };
        let mut summary = search.summary;
        summary.shapes += enumerated.shapes;
        summary.classes += enumerated.classes;
        summary.truncated += enumerated.truncated + usize::from(search.closure_cut);
        summary.exhausted |= enumerated.exhausted;
        Ok((cert, summary))
    }
}

/// `0` for the trivial triangles, otherwise the total dimension of the end terms.
fn triangle_level<F: FiniteField>(t: &EpiTriangle<F>) -> usize {
    let (l, r) = (t.conflation.left(), t.conflation.right());
    if l.is_zero() || r.is_zero() {
        0
    } else {
        l.total_dim() + r.total_dim()
    }
}

struct CertSearch<'h, 'a, F> {
    heart: &'h Heart<'a, F>,
    side: Side,
    /// Certified objects with a triangle for each.
    base: Vec<(Obj, EpiTriangle<F>)>,
    /// Sums already extended.
    searched: BTreeSet<Obj>,
    summary: EnumSummary,
    closure_cut: bool,
}

impl<F: FiniteField> CertSearch<'_, '_, F> {
    /// Extends every sum of certified objects not extended before; returns
    /// the best certificate among them.
    fn flush(&mut self) -> Result<Option<NonIntegralCertificate<F>>> {
        let h = self.heart;
        let (ctx, side) = (h.ctx, self.side);
        let objs: Vec<Obj> = self.base.iter().map(|(o, _)| o.clone()).collect();
        let (sums, complete) =
            sum_closure(&objs, h.bounds.mult, h.bounds.dim_cap.saturating_sub(1));
        self.closure_cut |= !complete;

        let (other_class, bad_class): (&Subcategory, &Subcategory) = match side {
            Side::Epi => (h.tp.t(), h.tp.u()),
            Side::Mono => (h.tp.u(), h.tp.t()),
        };
        let mut shapes: Vec<(usize, Obj, Obj)> = Vec::new();
        for o in sums.keys() {
            if !self.searched.insert(o.clone()) {
                continue;
            }
            let eligible: Vec<Interval> = other_class
                .iter()
                .filter(|&y| match side {
                    Side::Epi => o.iter().any(|u| ctx.ext_dim(u, y) > 0),
                    Side::Mono => o.iter().any(|t| ctx.ext_dim(y, t) > 0),
                })
                .collect();
            for d in 1..=h.bounds.dim_cap.saturating_sub(o.total_dim()) {
                for y in objects_of_dim(&eligible, h.bounds.mult, d) {
                    shapes.push((o.total_dim() + d, o.clone(), y));
                }
            }
        }
        shapes.sort();

        let table = match side {
            Side::Epi => &h.classes.bminus,
            Side::Mono => &h.classes.bplus,
        };
        let mut best: Option<(usize, NonIntegralCertificate<F>)> = None;
        for (dim, o, y) in shapes {
            if best.as_ref().is_some_and(|(bd, _)| *bd < dim) {
                break;
            }
            if self.summary.classes >= MAX_CLASSES_PER_ENUMERATION {
                self.summary.exhausted = true;
                break;
            }
            let (right, left, req) = match side {
                Side::Epi => (o.clone(), y.clone(), Required::Rows),
                Side::Mono => (y.clone(), o.clone(), Required::Columns),
            };
            let pos = ext_positions(ctx, &right, &left);
            self.summary.shapes += 1;
            let mut err = None;
            let summary = &mut self.summary;
            let flow = for_each_class::<F, ()>(&pos, &left, &right, req, |xs| {
                summary.classes += 1;
                let step = || -> Result<Option<NonIntegralCertificate<F>>> {
                    let ses = ctx.extension_from_scalars(&right, &left, xs)?;
                    let z = ctx.isoclass(ses.middle())?;
                    let Some(offending) = z.iter().find(|&x| !bad_class.contains(x)) else {
                        return Ok(None);
                    };
                    let mut z_witnesses = Vec::new();
                    for x in z.support() {
                        match table.get(x) {
                            Some(Verdict::Holds(w)) => z_witnesses.push((x, w.clone())),
                            _ => return Ok(None),
                        }
                    }
                    if best.as_ref().is_some_and(|(_, b)| b.z <= z) {
                        return Ok(None);
                    }
                    let parts: Vec<EpiTriangle<F>> =
                        sums[&o].iter().map(|&k| self.base[k].1.clone()).collect();
                    Ok(Some(NonIntegralCertificate {
                        side,
                        z,
                        conflation: Conflation::identify(ctx, &ses)?,
                        triangle: EpiTriangle::direct_sum(&parts)?,
                        z_witnesses,
                        offending,
                    }))
                };
                match step() {
                    Ok(Some(cert)) => {
                        best = Some((dim, cert));
                        ControlFlow::Continue(())
                    }
                    Ok(None) => ControlFlow::Continue(()),
                    Err(e) => {
                        err = Some(e);
                        ControlFlow::Break(())
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            if let ClassFlow::TooMany = flow {
                self.summary.truncated += 1;
            }
        }
        Ok(best.map(|(_, c)| c))
    }
}

/// Largest number of sums of certified objects kept by the certificate search.
const MAX_SUMS: usize = 1 << 14;

/// Direct sums of objects from `base` (summand multiplicity at most `mult`,
/// total dimension at most `cap`), each with the indices of one decomposition.
/// The flag is false when the set was cut off at [`MAX_SUMS`].
fn sum_closure(base: &[Obj], mult: usize, cap: usize) -> (BTreeMap<Obj, Vec<usize>>, bool) {
    let mut out: BTreeMap<Obj, Vec<usize>> = BTreeMap::new();
    let mut frontier: Vec<(Obj, Vec<usize>)> = Vec::new();
    // a sum is extended once per last index, so every sorted decomposition is reached
    let mut seen: BTreeSet<(Obj, usize)> = BTreeSet::new();
    for (k, o) in base.iter().enumerate() {
        if o.total_dim() <= cap {
            out.entry(o.clone()).or_insert_with(|| vec![k]);
            seen.insert((o.clone(), k));
            frontier.push((o.clone(), vec![k]));
        }
    }
    while let Some((o, parts)) = frontier.pop() {
        let last = *parts.last().expect("nonempty decomposition");
        for (k, b) in base.iter().enumerate().skip(last) {
            let sum = o.oplus(b);
            if sum.total_dim() > cap || sum.support().iter().any(|&x| sum.multiplicity(x) > mult) {
                continue;
            }
            if !seen.insert((sum.clone(), k)) {
                continue;
            }
            if !out.contains_key(&sum) && out.len() >= MAX_SUMS {
                return (out, false);
            }
            let mut p = parts.clone();
            p.push(k);
            out.entry(sum.clone()).or_insert_with(|| p.clone());
            frontier.push((sum, p));
        }
    }
    (out, true)
}
