use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::pairs::TwinPair;
use crate::serialcat::{CategoryCtx, Conflation, Interval, Obj};
use crate::subcat::Subcategory;

use super::Heart;

/// Evidence that an indecomposable lies in `H = B⁺ ∩ B⁻`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: FiniteField", deserialize = "F: FiniteField"))]
pub struct HeartWitness<F> {
    pub id: Interval,
    /// `V -> W -> id` with `V ∈ add V`, `W ∈ add W`.
    pub plus: Conflation<F>,
    /// `id -> W -> S` with `W ∈ add W`, `S ∈ add S`.
    pub minus: Conflation<F>,
}

impl<F: FiniteField> HeartWitness<F> {
    pub fn replay(&self, ctx: &CategoryCtx<F>, tp: &TwinPair<F>) -> Result<()> {
        let id = Obj::single(self.id);
        replay_conflation(ctx, &self.plus)?;
        replay_conflation(ctx, &self.minus)?;
        expect_eq(
            self.plus.right(),
            &id,
            "B+ witness ends in the wrong object",
        )?;
        expect_in(self.plus.middle(), &tp.w, "middle of the B+ witness")?;
        expect_in(self.plus.left(), tp.v(), "left end of the B+ witness")?;
        expect_eq(
            self.minus.left(),
            &id,
            "B- witness starts in the wrong object",
        )?;
        expect_in(self.minus.middle(), &tp.w, "middle of the B- witness")?;
        expect_in(self.minus.right(), tp.s(), "right end of the B- witness")
    }
}

impl<F: FiniteField> Heart<'_, F> {
    /// Heart witnesses for the distinct summands of `o`.
    pub fn witnesses_for(&self, o: &Obj) -> Result<Vec<HeartWitness<F>>> {
        o.support()
            .into_iter()
            .map(|x| {
                Ok(HeartWitness {
                    id: x,
                    plus: self.plus_witness(x)?.clone(),
                    minus: self.minus_witness(x)?.clone(),
                })
            })
            .collect()
    }
}

/// Checks that `witnesses` cover every summand of `o` and replay.
pub(crate) fn replay_heart_object<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    tp: &TwinPair<F>,
    o: &Obj,
    witnesses: &[HeartWitness<F>],
) -> Result<()> {
    for x in o.support() {
        let w = witnesses
            .iter()
            .find(|w| w.id == x)
            .ok_or_else(|| Error::ReplayMismatch(format!("no heart witness for {x}")))?;
        w.replay(ctx, tp)?;
    }
    Ok(())
}

pub(crate) fn replay_conflation<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    c: &Conflation<F>,
) -> Result<()> {
    c.to_ses(ctx).map(|_| ()).map_err(|e| {
        Error::ReplayMismatch(format!(
            "{} -> {} -> {} is not exact: {e}",
            c.left(),
            c.middle(),
            c.right()
        ))
    })
}

pub(crate) fn expect_in(o: &Obj, class: &Subcategory, what: &str) -> Result<()> {
    match o.iter().find(|&x| !class.contains(x)) {
        Some(x) => Err(Error::ReplayMismatch(format!(
            "{what}: summand {x} is not in {}",
            class.name()
        ))),
        None => Ok(()),
    }
}

pub(crate) fn expect_eq(a: &Obj, b: &Obj, what: &str) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ReplayMismatch(format!("{what}: {a} vs {b}")))
    }
}

pub(crate) fn expect(cond: bool, what: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::ReplayMismatch(what.into()))
    }
}
