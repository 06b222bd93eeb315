//! The heart `H/W` of a twin cotorsion pair as computable data.
//!
//! Morphisms of the heart are [`ObjMap`]s between objects of `add H`, taken
//! modulo the ideal of maps factoring through `W`.

mod abelian;
mod epimono;
mod integral;
mod kernels;
mod probe;
mod quotient;
mod triangles;
mod witness;

pub use abelian::{AbelianRoute, Cond1Entry, NonAbelianCertificate};
pub use integral::{IntegralRoute, NonIntegralCertificate, Side};
pub use probe::{BadSquare, MAX_PROBE_SQUARES};
pub use quotient::Quotient;
pub use triangles::{
    EnumSummary, EpiTriangle, TriangleKind, MAX_CLASSES_PER_ENUMERATION, MAX_CLASSES_PER_SHAPE,
};
pub use witness::HeartWitness;

use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::pairs::{compute_hearts, HeartClasses, TwinPair};
use crate::serialcat::{CategoryCtx, Conflation, Interval, Obj, ObjMap};
use crate::subcat::{
    find_left_approx, find_right_approx, SearchBounds, Subcategory, Unresolved, Verdict,
};

/// A twin pair together with its computed hearts.
pub struct Heart<'a, F> {
    ctx: &'a CategoryCtx<F>,
    tp: &'a TwinPair<F>,
    classes: HeartClasses<F>,
    survivors: Subcategory,
    bounds: SearchBounds,
    approx: RefCell<HashMap<(Approx, Interval), Conflation<F>>>,
}

/// Approximation conflations used by the kernel and cokernel constructions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) enum Approx {
    /// `x -> T₀ -> S₀`
    RightST,
    /// `V₀ -> U₀ -> x`
    LeftUV,
}

impl<'a, F: FiniteField> Heart<'a, F> {
    pub fn new(
        ctx: &'a CategoryCtx<F>,
        tp: &'a TwinPair<F>,
        bounds: &SearchBounds,
    ) -> Result<Self> {
        let classes = compute_hearts(ctx, tp, bounds)?;
        Ok(Self::from_classes(ctx, tp, classes, bounds))
    }

    pub fn from_classes(
        ctx: &'a CategoryCtx<F>,
        tp: &'a TwinPair<F>,
        classes: HeartClasses<F>,
        bounds: &SearchBounds,
    ) -> Self {
        let survivors = classes.heart_minus_w();
        Heart {
            ctx,
            tp,
            classes,
            survivors,
            bounds: *bounds,
            approx: RefCell::new(HashMap::new()),
        }
    }

    pub fn ctx(&self) -> &'a CategoryCtx<F> {
        self.ctx
    }

    pub fn twin(&self) -> &'a TwinPair<F> {
        self.tp
    }

    pub fn classes(&self) -> &HeartClasses<F> {
        &self.classes
    }

    pub fn bounds(&self) -> &SearchBounds {
        &self.bounds
    }

    /// Indecomposables of `H` that are nonzero in the quotient.
    pub fn survivors(&self) -> &Subcategory {
        &self.survivors
    }

    pub fn quotient(&self) -> Quotient<'_, F> {
        Quotient::new(self.ctx, &self.classes.w)
    }

    pub fn is_zero_heart(&self) -> bool {
        self.survivors.is_empty()
    }

    pub fn contains(&self, o: &Obj) -> bool {
        self.classes.h_contains(o)
    }

    pub(crate) fn require_member(&self, o: &Obj) -> Result<()> {
        match o.iter().find(|&x| !self.classes.h.contains(x)) {
            Some(x) => Err(Error::Mismatch(format!("{x} is not in the heart"))),
            None => Ok(()),
        }
    }

    /// `V_x -> W_x -> x` witnessing `x ∈ B⁺`.
    pub fn plus_witness(&self, x: Interval) -> Result<&Conflation<F>> {
        match self.classes.bplus.get(x) {
            Some(Verdict::Holds(c)) => Ok(c),
            _ => Err(Error::MissingWitness(format!("no B+ conflation for {x}"))),
        }
    }

    /// `x -> W^x -> S^x` witnessing `x ∈ B⁻`.
    pub fn minus_witness(&self, x: Interval) -> Result<&Conflation<F>> {
        match self.classes.bminus.get(x) {
            Some(Verdict::Holds(c)) => Ok(c),
            _ => Err(Error::MissingWitness(format!("no B- conflation for {x}"))),
        }
    }

    /// The sum of the `B⁺` deflations `W_o -> o` over the summands of `o`.
    pub(crate) fn plus_deflation(&self, o: &Obj) -> Result<ObjMap<F>> {
        let maps = o
            .iter()
            .map(|x| self.plus_witness(x).map(|c| c.deflation.clone()))
            .collect::<Result<Vec<_>>>()?;
        sum_or_zero(&maps, o, true)
    }

    /// The sum of the `B⁻` inflations `o -> W^o` over the summands of `o`.
    pub(crate) fn minus_inflation(&self, o: &Obj) -> Result<ObjMap<F>> {
        let maps = o
            .iter()
            .map(|x| self.minus_witness(x).map(|c| c.inflation.clone()))
            .collect::<Result<Vec<_>>>()?;
        sum_or_zero(&maps, o, false)
    }

    /// An approximation conflation of `x`, cached.
    pub(crate) fn approximation(&self, kind: Approx, x: Interval) -> Result<Conflation<F>> {
        if let Some(c) = self.approx.borrow().get(&(kind, x)) {
            return Ok(c.clone());
        }
        let tp = self.tp;
        let v = match kind {
            Approx::RightST => find_right_approx(self.ctx, x, tp.t(), tp.s(), &self.bounds)?,
            Approx::LeftUV => find_left_approx(self.ctx, x, tp.u(), tp.v(), &self.bounds)?,
        };
        match v {
            Verdict::Holds(c) => {
                self.approx.borrow_mut().insert((kind, x), c.clone());
                Ok(c)
            }
            _ => Err(Error::MissingWitness(format!(
                "no {kind:?} approximation of {x}"
            ))),
        }
    }

    pub(crate) fn unresolved(&self, detail: impl Into<String>) -> Unresolved {
        Unresolved {
            bounds: self.bounds,
            detail: detail.into(),
        }
    }

    /// Verdict returned when some class membership could not be decided.
    pub(crate) fn taint<H, C>(&self) -> Option<Verdict<H, C>> {
        if self.classes.is_exact() {
            return None;
        }
        let names: Vec<String> = self
            .classes
            .unresolved()
            .iter()
            .map(|(c, x)| format!("{x} in {c}"))
            .collect();
        Some(Verdict::UnknownWithinBound(self.unresolved(format!(
            "undecided memberships: {}",
            names.join(", ")
        ))))
    }
}

fn sum_or_zero<F: FiniteField>(maps: &[ObjMap<F>], o: &Obj, into: bool) -> Result<ObjMap<F>> {
    if maps.is_empty() {
        return Ok(ObjMap::zero(o, o));
    }
    let m = ObjMap::direct_sum(maps)?;
    debug_assert!(if into { &m.target == o } else { &m.source == o });
    Ok(m)
}

/// Turns a missing witness or an exceeded bound into an undecided verdict.
pub(crate) fn tainted<T, H, C>(
    bounds: &SearchBounds,
    r: Result<T>,
) -> Result<std::result::Result<T, Verdict<H, C>>> {
    match r {
        Ok(t) => Ok(Ok(t)),
        Err(
            e @ (Error::MissingWitness(_)
            | Error::EnumerationRefused { .. }
            | Error::DecompositionInconclusive { .. }),
        ) => Ok(Err(Verdict::UnknownWithinBound(Unresolved {
            bounds: *bounds,
            detail: e.to_string(),
        }))),
        Err(e) => Err(e),
    }
}
