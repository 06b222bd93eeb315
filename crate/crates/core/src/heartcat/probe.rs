use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::FiniteField;
use crate::serialcat::{Obj, ObjMap};
use crate::subcat::Verdict;

use crate::subspace::Subspace;

use super::quotient::hom_elementary;
use super::triangles::{objects_upto, MAX_CLASSES_PER_SHAPE};
use super::witness::{expect, expect_eq};
use super::Heart;

/// Number of pullbacks the direct probe computes before giving up.
pub const MAX_PROBE_SQUARES: usize = 1 << 12;

/// A pullback square `P -> B`, `P -> C` over `b : B -> D`, `d : C -> D`
/// with `d` epic in the heart but the leg `P -> B` not epic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: FiniteField", deserialize = "F: FiniteField"))]
pub struct BadSquare<F> {
    pub b: ObjMap<F>,
    pub d: ObjMap<F>,
    pub pullback: Obj,
    pub leg: ObjMap<F>,
}

impl<F: FiniteField> BadSquare<F> {
    /// Rechecks the square in `heart`: `d` is epic, the pullback and its leg
    /// agree with the kernel of `(b, -d)` modulo `W`, and the leg is not epic.
    pub fn replay(&self, heart: &Heart<'_, F>) -> Result<()> {
        if let Some(Verdict::UnknownWithinBound(u)) = heart.taint::<(), ()>() {
            return Err(crate::Error::MissingWitness(u.detail));
        }
        expect(
            self.b.target == self.d.target,
            "b and d have different targets",
        )?;
        expect(heart.is_epi(&self.d)?, "d is not an epimorphism")?;
        let parts = [self.b.source.clone(), self.d.source.clone()];
        let f = ObjMap::from_blocks(
            &parts,
            std::slice::from_ref(&self.d.target),
            &[vec![self.b.clone(), self.d.neg()]],
        )?;
        let (p, k) = heart.kernel_in_heart(&f)?;
        expect_eq(&p, &self.pullback, "pullback object")?;
        let (_, _, proj) = ObjMap::<F>::sum_structure(&parts);
        let leg = proj[0].after(heart.ctx(), &k)?;
        let same = leg.source == self.leg.source
            && leg.target == self.leg.target
            && heart.quotient().is_zero(&leg.sub(&self.leg)?);
        expect(same, "leg differs from the pullback leg")?;
        expect(!heart.is_epi(&self.leg)?, "the leg is an epimorphism")
    }
}

impl<F: FiniteField> Heart<'_, F> {
    /// Searches pullback squares directly for an epimorphism whose pullback is
    /// not epic. Never reports a universal Holds.
    pub fn probe_integral_direct(&self) -> Result<Verdict<(), BadSquare<F>>> {
        if let Some(v) = self.taint() {
            return Ok(v);
        }
        let objs = objects_upto(
            &self.survivors.iter().collect::<Vec<_>>(),
            self.bounds.mult,
            self.bounds.dim_cap,
        );
        let mut by_dim: BTreeMap<usize, Vec<&Obj>> = BTreeMap::new();
        for o in &objs {
            by_dim.entry(o.total_dim()).or_default().push(o);
        }
        let dims: Vec<usize> = by_dim.keys().copied().collect();
        let max = dims.last().copied().unwrap_or(0);
        let mut epi_cache: HashMap<(Obj, Obj), Option<Vec<ObjMap<F>>>> = HashMap::new();
        let mut squares = 0usize;
        let mut truncated = 0usize;
        // triples (D, C, B) by total dimension, so small squares come first
        'outer: for level in 0..=3 * max {
            for &dd_dim in &dims {
                for &c_dim in &dims {
                    let Some(b_dim) = level.checked_sub(dd_dim + c_dim) else {
                        continue;
                    };
                    let Some(bs) = by_dim.get(&b_dim) else {
                        continue;
                    };
                    for &dd in &by_dim[&dd_dim] {
                        for &c in &by_dim[&c_dim] {
                            let key = (c.clone(), dd.clone());
                            if !epi_cache.contains_key(&key) {
                                let mut epis = Vec::new();
                                let skipped =
                                    self.for_each_class_map(c, dd, &mut truncated, |d| {
                                        if self.is_epi(d)? {
                                            epis.push(d.clone());
                                        }
                                        Ok(ControlFlow::Continue(()))
                                    })?;
                                epi_cache.insert(key.clone(), (!skipped).then_some(epis));
                            }
                            let Some(epis) = &epi_cache[&key] else {
                                continue;
                            };
                            for d in epis {
                                for &b_obj in bs {
                                    if squares >= MAX_PROBE_SQUARES {
                                        break 'outer;
                                    }
                                    if let Some(s) =
                                        self.probe_squares(b_obj, d, &mut squares, &mut truncated)?
                                    {
                                        return Ok(Verdict::Fails(s));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let budget = if squares >= MAX_PROBE_SQUARES {
            ", square budget exhausted"
        } else {
            ""
        };
        Ok(Verdict::UnknownWithinBound(self.unresolved(format!(
            "no bad square among {squares} squares over {} objects ({truncated} map spaces truncated{budget})",
            objs.len()
        ))))
    }

    /// Tests the squares over `d` with every class of maps `b_obj -> D`.
    fn probe_squares(
        &self,
        b_obj: &Obj,
        d: &ObjMap<F>,
        squares: &mut usize,
        truncated: &mut usize,
    ) -> Result<Option<BadSquare<F>>> {
        let dd = &d.target;
        let through_d = self.factoring_through(b_obj, d)?;
        let mut bad = None;
        self.for_each_class_map(b_obj, dd, truncated, |b| {
            // a map factoring through d gives a split leg
            if through_d.contains(b.scalars.as_slice()) {
                return Ok(ControlFlow::Continue(()));
            }
            *squares += 1;
            let parts = [b.source.clone(), d.source.clone()];
            let f = ObjMap::from_blocks(
                &parts,
                std::slice::from_ref(dd),
                &[vec![b.clone(), d.neg()]],
            )?;
            let (p, k) = self.kernel_in_heart(&f)?;
            let (_, _, proj) = ObjMap::<F>::sum_structure(&parts);
            let leg = proj[0].after(self.ctx, &k)?;
            if !self.is_epi(&leg)? {
                bad = Some(BadSquare {
                    b: b.clone(),
                    d: d.clone(),
                    pullback: p,
                    leg,
                });
                return Ok(ControlFlow::Break(()));
            }
            Ok(ControlFlow::Continue(()))
        })?;
        Ok(bad)
    }

    /// Maps `b -> D` of the form `d ∘ e` plus a map factoring through `W`, as a subspace of flattened matrices.
    fn factoring_through(&self, b: &Obj, d: &ObjMap<F>) -> Result<Subspace<F>> {
        let mut gens = Vec::new();
        for e in hom_elementary::<F>(b, &d.source) {
            gens.push(d.after(self.ctx, &e)?.scalars.as_slice().to_vec());
        }
        for e in self.quotient().w_ideal(b, &d.target) {
            gens.push(e.scalars.as_slice().to_vec());
        }
        Ok(Subspace::span(b.len() * d.target.len(), &gens))
    }

    /// Visits one representative of every class in `Hom(a, b)/W`. Returns
    /// true if the space was too large and skipped.
    fn for_each_class_map(
        &self,
        a: &Obj,
        b: &Obj,
        truncated: &mut usize,
        mut f: impl FnMut(&ObjMap<F>) -> Result<ControlFlow<()>>,
    ) -> Result<bool> {
        let q = self.quotient();
        let pos = q.stable_positions(a, b);
        let too_many = (F::CHARACTERISTIC as u64)
            .checked_pow(pos.len() as u32)
            .is_none_or(|t| t > MAX_CLASSES_PER_SHAPE);
        if too_many {
            *truncated += 1;
            return Ok(true);
        }
        let units: Vec<Vec<F>> = (0..pos.len())
            .map(|i| {
                (0..pos.len())
                    .map(|j| if i == j { F::one() } else { F::zero() })
                    .collect()
            })
            .collect();
        let mut err = None;
        let _ = crate::subspace::for_each_combination::<F, ()>(pos.len(), &units, |coeffs, _| {
            let mut m = ObjMap::zero(a, b);
            for (&(i, j), &c) in pos.iter().zip(coeffs) {
                m.scalars[(i, j)] = c;
            }
            match f(&m) {
                Ok(flow) => flow,
                Err(e) => {
                    err = Some(e);
                    ControlFlow::Break(())
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(false),
        }
    }
}
