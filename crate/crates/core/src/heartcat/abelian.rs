use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::FiniteField;
use crate::pairs::TwinPair;
use crate::serialcat::{CategoryCtx, Interval};
use crate::subcat::{find_left_approx, find_right_approx, SearchBounds, Subcategory, Verdict};

use super::triangles::outside;
use super::witness::expect;
use super::{EpiTriangle, Heart, NonIntegralCertificate, TriangleKind};

/// Why a heart is abelian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbelianRoute {
    ZeroHeart,
    /// Pairwise orthogonal surviving indecomposables with field endomorphisms.
    Semisimple,
    /// `H ⊆ H₁` in the quotient and `Ind U ⊆ Ind S ∪ Ind W`.
    ContainedInFirst,
    /// `H ⊆ H₂` in the quotient and `Ind T ⊆ Ind V ∪ Ind W`.
    ContainedInSecond,
}

/// An indecomposable outside `W` on which `H` and `H₁ ∩ H₂` disagree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cond1Entry {
    pub id: Interval,
    pub in_h: bool,
    pub in_h1: bool,
    pub in_h2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: FiniteField", deserialize = "F: FiniteField"))]
#[serde(tag = "condition", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum NonAbelianCertificate<F> {
    /// The heart differs from the intersection of the two smaller hearts.
    HeartsDiffer { entries: Vec<Cond1Entry> },
    /// An epi-triangle whose third term has a summand outside `S ⊕ W`.
    EpiOutsideSW {
        triangle: EpiTriangle<F>,
        summand: Interval,
    },
    /// A mono-triangle whose first term has a summand outside `V ⊕ W`.
    MonoOutsideVW {
        triangle: EpiTriangle<F>,
        summand: Interval,
    },
    /// The heart is not even integral.
    NotIntegral {
        certificate: NonIntegralCertificate<F>,
    },
}

impl<F: FiniteField> NonAbelianCertificate<F> {
    /// Replays the certificate. Memberships in the hearts are recomputed for
    /// the listed indecomposables only.
    pub fn replay(
        &self,
        ctx: &CategoryCtx<F>,
        tp: &TwinPair<F>,
        bounds: &SearchBounds,
    ) -> Result<()> {
        match self {
            NonAbelianCertificate::HeartsDiffer { entries } => {
                expect(!entries.is_empty(), "no differing indecomposable listed")?;
                for e in entries {
                    expect(!tp.w.contains(e.id), format!("{} lies in W", e.id))?;
                    let m = memberships(ctx, tp, e.id, bounds)?;
                    expect(
                        m == (e.in_h, e.in_h1, e.in_h2),
                        format!("memberships of {} recomputed as {m:?}", e.id),
                    )?;
                    expect(
                        e.in_h != (e.in_h1 && e.in_h2),
                        format!("{} does not differ", e.id),
                    )?;
                }
                Ok(())
            }
            NonAbelianCertificate::EpiOutsideSW { triangle, summand } => {
                expect(
                    triangle.kind == TriangleKind::Epi,
                    "expected an epi-triangle",
                )?;
                triangle.replay(ctx, tp)?;
                expect(
                    triangle.certified().multiplicity(*summand) > 0,
                    "not a summand of the third term",
                )?;
                expect(
                    !tp.s().contains(*summand) && !tp.w.contains(*summand),
                    format!("{summand} lies in S ⊕ W"),
                )
            }
            NonAbelianCertificate::MonoOutsideVW { triangle, summand } => {
                expect(
                    triangle.kind == TriangleKind::Mono,
                    "expected a mono-triangle",
                )?;
                triangle.replay(ctx, tp)?;
                expect(
                    triangle.certified().multiplicity(*summand) > 0,
                    "not a summand of the first term",
                )?;
                expect(
                    !tp.v().contains(*summand) && !tp.w.contains(*summand),
                    format!("{summand} lies in V ⊕ W"),
                )
            }
            NonAbelianCertificate::NotIntegral { certificate } => certificate.replay(ctx, tp),
        }
    }
}

/// Memberships of `x` in `H`, `H₁` and `H₂`, recomputed from scratch.
fn memberships<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    tp: &TwinPair<F>,
    x: Interval,
    bounds: &SearchBounds,
) -> Result<(bool, bool, bool)> {
    let (s, t, u, v) = (tp.s(), tp.t(), tp.u(), tp.v());
    let heart =
        |core: &Subcategory, right_end: &Subcategory, left_end: &Subcategory| -> Result<bool> {
            let plus = find_left_approx(ctx, x, core, left_end, bounds)?;
            let minus = find_right_approx(ctx, x, core, right_end, bounds)?;
            if plus.is_unknown() || minus.is_unknown() {
                return Err(crate::Error::MissingWitness(format!(
                    "membership of {x} is undecided"
                )));
            }
            Ok(plus.is_holds() && minus.is_holds())
        };
    Ok((
        heart(&tp.w, s, v)?,
        heart(&s.inter(t), s, t)?,
        heart(&u.inter(v), u, v)?,
    ))
}

impl<F: FiniteField> Heart<'_, F> {
    /// Indecomposables outside `W` lying in exactly one of `H` and `H₁ ∩ H₂`.
    pub fn hearts_difference(&self) -> Vec<Cond1Entry> {
        let c = &self.classes;
        let mut ids: Vec<Interval> = c.h.oplus(&c.h1.inter(&c.h2)).minus(&c.w).iter().collect();
        ids.sort();
        ids.into_iter()
            .map(|id| Cond1Entry {
                id,
                in_h: c.h.contains(id),
                in_h1: c.h1.contains(id),
                in_h2: c.h2.contains(id),
            })
            .filter(|e| e.in_h != (e.in_h1 && e.in_h2))
            .collect()
    }

    /// The condition that third terms of epi-triangles lie in `S ⊕ W`
    /// (first terms of mono-triangles in `V ⊕ W` for [`TriangleKind::Mono`]).
    ///
    /// Holds outright when `Ind U ⊆ Ind S ∪ Ind W` (dually `Ind T ⊆ Ind V ∪
    /// Ind W`); otherwise the enumerated triangles are searched for a
    /// counterexample.
    pub fn triangle_condition(
        &self,
        kind: TriangleKind,
    ) -> Result<Verdict<(), NonAbelianCertificate<F>>> {
        if let Some(v) = self.taint() {
            return Ok(v);
        }
        let (implied, a) = match kind {
            TriangleKind::Epi => (self.u_in_sw(), self.tp.s()),
            TriangleKind::Mono => (self.t_in_vw(), self.tp.v()),
        };
        if implied {
            return Ok(Verdict::Holds(()));
        }
        let w = &self.classes.w;
        let found = self.enum_triangles(kind, |t| match outside(t.certified(), a, w) {
            Some(x) => ControlFlow::Break((t, x)),
            None => ControlFlow::Continue(()),
        });
        let (summary, found) =
            match super::tainted::<_, (), NonAbelianCertificate<F>>(&self.bounds, found)? {
                Ok(r) => r,
                Err(v) => return Ok(v),
            };
        Ok(match found {
            Some((triangle, summand)) => Verdict::Fails(match kind {
                TriangleKind::Epi => NonAbelianCertificate::EpiOutsideSW { triangle, summand },
                TriangleKind::Mono => NonAbelianCertificate::MonoOutsideVW { triangle, summand },
            }),
            None => Verdict::UnknownWithinBound(
                self.unresolved(format!("no {kind:?} counterexample ({summary})")),
            ),
        })
    }

    /// Decides whether the heart is abelian.
    pub fn check_abelian(&self) -> Result<Verdict<AbelianRoute, NonAbelianCertificate<F>>> {
        if let Some(v) = self.taint() {
            return Ok(v);
        }
        if self.is_zero_heart() {
            return Ok(Verdict::Holds(AbelianRoute::ZeroHeart));
        }
        let entries = self.hearts_difference();
        if !entries.is_empty() {
            return Ok(Verdict::Fails(NonAbelianCertificate::HeartsDiffer {
                entries,
            }));
        }
        if self.is_semisimple() {
            return Ok(Verdict::Holds(AbelianRoute::Semisimple));
        }
        let c = &self.classes;
        if self.survivors.is_subset(&c.h1) && self.u_in_sw() {
            return Ok(Verdict::Holds(AbelianRoute::ContainedInFirst));
        }
        if self.survivors.is_subset(&c.h2) && self.t_in_vw() {
            return Ok(Verdict::Holds(AbelianRoute::ContainedInSecond));
        }

        let mut notes = vec!["the hearts agree".to_string()];
        for kind in [TriangleKind::Epi, TriangleKind::Mono] {
            match self.triangle_condition(kind)? {
                Verdict::Fails(cert) => return Ok(Verdict::Fails(cert)),
                Verdict::Holds(()) => notes.push(format!("{kind:?} condition holds")),
                Verdict::UnknownWithinBound(u) => notes.push(u.detail),
            }
        }
        match self.check_integral()? {
            Verdict::Fails(certificate) => Ok(Verdict::Fails(NonAbelianCertificate::NotIntegral {
                certificate,
            })),
            v => {
                notes.push(format!("integral: {}", v.label()));
                Ok(Verdict::UnknownWithinBound(
                    self.unresolved(notes.join("; ")),
                ))
            }
        }
    }
}
