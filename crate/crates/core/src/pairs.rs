//! Cotorsion pairs, twin cotorsion pairs and the classes defining their hearts.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::FiniteField;
use crate::serialcat::{CategoryCtx, Conflation, Interval, Obj};
use crate::subcat::{
    find_left_approx, find_right_approx, NoApproximation, SearchBounds, Subcategory, Unresolved,
    Verdict,
};

pub type Membership<F> = Verdict<Conflation<F>, NoApproximation>;

/// A verified cotorsion pair with its approximation conflations
/// `V_B -> U_B -> B` (left) and `B -> V^B -> U^B` (right) for every indecomposable `B`.
#[derive(Clone, Debug)]
pub struct CotorsionPair<F> {
    pub u: Subcategory,
    pub v: Subcategory,
    pub left: Vec<(Interval, Conflation<F>)>,
    pub right: Vec<(Interval, Conflation<F>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: FiniteField", deserialize = "F: FiniteField"))]
pub enum CotorsionFailure<F> {
    /// `Ext¹(u, v) ≠ 0`, witnessed by a non-split conflation `v -> Z -> u`.
    Orthogonality {
        u: Interval,
        v: Interval,
        nonsplit: Conflation<F>,
    },
    /// No conflation `V₀ -> U₀ -> b` exists.
    NoLeftApproximation(NoApproximation),
    /// No conflation `b -> V₀ -> U₀` exists.
    NoRightApproximation(NoApproximation),
}

pub fn verify_cotorsion<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    u: &Subcategory,
    v: &Subcategory,
    bounds: &SearchBounds,
) -> Result<Verdict<CotorsionPair<F>, CotorsionFailure<F>>> {
    for a in u.iter() {
        for b in v.iter() {
            if ctx.ext_dim(a, b) != 0 {
                let ext = crate::repcore::ExtSpace::new(ctx.module(a), ctx.module(b))?;
                let ses = ext.extension(&[F::one()]);
                let (mid, iso) = ctx.identify_iso(ses.middle())?;
                let inv = iso.inverse().ok_or_else(|| {
                    crate::Error::Inconsistent("identification is not an isomorphism".into())
                })?;
                let moved = crate::repcore::Ses::new(
                    inv.after(ses.inflation()),
                    ses.deflation().after(&iso),
                )?;
                let nonsplit = Conflation::from_ses(ctx, &mid, &moved)?;
                return Ok(Verdict::Fails(CotorsionFailure::Orthogonality {
                    u: a,
                    v: b,
                    nonsplit,
                }));
            }
        }
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut missing = Vec::new();
    for &b in ctx.indecomposables() {
        match find_left_approx(ctx, b, u, v, bounds)? {
            Verdict::Holds(c) => left.push((b, c)),
            Verdict::Fails(n) => {
                return Ok(Verdict::Fails(CotorsionFailure::NoLeftApproximation(n)))
            }
            Verdict::UnknownWithinBound(_) => missing.push(format!("left {b}")),
        }
        match find_right_approx(ctx, b, v, u, bounds)? {
            Verdict::Holds(c) => right.push((b, c)),
            Verdict::Fails(n) => {
                return Ok(Verdict::Fails(CotorsionFailure::NoRightApproximation(n)))
            }
            Verdict::UnknownWithinBound(_) => missing.push(format!("right {b}")),
        }
    }
    if !missing.is_empty() {
        return Ok(Verdict::UnknownWithinBound(Unresolved {
            bounds: *bounds,
            detail: format!("approximations not witnessed: {}", missing.join(", ")),
        }));
    }
    Ok(Verdict::Holds(CotorsionPair {
        u: u.clone(),
        v: v.clone(),
        left,
        right,
    }))
}

/// Two cotorsion pairs `(S, T)`, `(U, V)` with `S ⊆ U`, and `W = U ∩ T`.
#[derive(Clone, Debug)]
pub struct TwinPair<F> {
    pub st: CotorsionPair<F>,
    pub uv: CotorsionPair<F>,
    pub w: Subcategory,
}

impl<F> TwinPair<F> {
    pub fn s(&self) -> &Subcategory {
        &self.st.u
    }

    pub fn t(&self) -> &Subcategory {
        &self.st.v
    }

    pub fn u(&self) -> &Subcategory {
        &self.uv.u
    }

    pub fn v(&self) -> &Subcategory {
        &self.uv.v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: FiniteField", deserialize = "F: FiniteField"))]
pub enum TwinFailure<F> {
    FirstPair(CotorsionFailure<F>),
    SecondPair(CotorsionFailure<F>),
    /// An indecomposable of `S` outside `U`.
    NotNested(Interval),
}

pub fn verify_twin<F: FiniteField>(
    st: CotorsionPair<F>,
    uv: CotorsionPair<F>,
) -> Verdict<TwinPair<F>, TwinFailure<F>> {
    if let Some(x) = st.u.iter().find(|&x| !uv.u.contains(x)) {
        return Verdict::Fails(TwinFailure::NotNested(x));
    }
    let w = uv.u.inter(&st.v).named("W");
    Verdict::Holds(TwinPair { st, uv, w })
}

/// Verifies both pairs and the nesting in one go.
pub fn verify_twin_from_classes<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    s: &Subcategory,
    t: &Subcategory,
    u: &Subcategory,
    v: &Subcategory,
    bounds: &SearchBounds,
) -> Result<Verdict<TwinPair<F>, TwinFailure<F>>> {
    let st = match verify_cotorsion(ctx, s, t, bounds)? {
        Verdict::Holds(p) => p,
        Verdict::Fails(f) => return Ok(Verdict::Fails(TwinFailure::FirstPair(f))),
        Verdict::UnknownWithinBound(u) => return Ok(Verdict::UnknownWithinBound(u)),
    };
    let uv = match verify_cotorsion(ctx, u, v, bounds)? {
        Verdict::Holds(p) => p,
        Verdict::Fails(f) => return Ok(Verdict::Fails(TwinFailure::SecondPair(f))),
        Verdict::UnknownWithinBound(u) => return Ok(Verdict::UnknownWithinBound(u)),
    };
    Ok(verify_twin(st, uv))
}

/// `x ∈ B⁺`: a conflation `V₀ -> W₀ -> x` with `V₀ ∈ add V`, `W₀ ∈ add W`.
pub fn membership_bplus<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    x: Interval,
    tp: &TwinPair<F>,
    bounds: &SearchBounds,
) -> Result<Membership<F>> {
    find_left_approx(ctx, x, &tp.w, tp.v(), bounds)
}

/// `x ∈ B⁻`: a conflation `x -> W₀ -> S₀` with `W₀ ∈ add W`, `S₀ ∈ add S`.
pub fn membership_bminus<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    x: Interval,
    tp: &TwinPair<F>,
    bounds: &SearchBounds,
) -> Result<Membership<F>> {
    find_right_approx(ctx, x, &tp.w, tp.s(), bounds)
}

/// Membership table of one class over all indecomposables.
#[derive(Clone, Debug)]
pub struct ClassTable<F> {
    pub name: String,
    pub rows: Vec<(Interval, Membership<F>)>,
}

impl<F> ClassTable<F> {
    pub fn members(&self) -> impl Iterator<Item = Interval> + '_ {
        self.rows
            .iter()
            .filter(|(_, m)| m.is_holds())
            .map(|(x, _)| *x)
    }

    pub fn unresolved(&self) -> impl Iterator<Item = Interval> + '_ {
        self.rows
            .iter()
            .filter(|(_, m)| m.is_unknown())
            .map(|(x, _)| *x)
    }

    pub fn get(&self, x: Interval) -> Option<&Membership<F>> {
        self.rows.iter().find(|(y, _)| *y == x).map(|(_, m)| m)
    }
}

/// `B⁺`, `B⁻` and the hearts of the twin pair and of its two constituent pairs.
#[derive(Clone, Debug)]
pub struct HeartClasses<F> {
    pub w: Subcategory,
    pub bplus: ClassTable<F>,
    pub bminus: ClassTable<F>,
    pub h: Subcategory,
    /// `S ∩ T`, the ideal killed in the heart of `(S, T)`.
    pub core1: Subcategory,
    pub b1plus: ClassTable<F>,
    pub b1minus: ClassTable<F>,
    pub h1: Subcategory,
    /// `U ∩ V`, the ideal killed in the heart of `(U, V)`.
    pub core2: Subcategory,
    pub b2plus: ClassTable<F>,
    pub b2minus: ClassTable<F>,
    pub h2: Subcategory,
}

impl<F: FiniteField> HeartClasses<F> {
    /// Indecomposables whose membership in some class stayed unresolved.
    pub fn unresolved(&self) -> Vec<(String, Interval)> {
        [
            &self.bplus,
            &self.bminus,
            &self.b1plus,
            &self.b1minus,
            &self.b2plus,
            &self.b2minus,
        ]
        .iter()
        .flat_map(|t| {
            t.unresolved()
                .map(|x| (t.name.clone(), x))
                .collect::<Vec<_>>()
        })
        .collect()
    }

    pub fn is_exact(&self) -> bool {
        self.unresolved().is_empty()
    }

    /// Indecomposables of the heart that survive in the quotient by `W`.
    pub fn heart_minus_w(&self) -> Subcategory {
        self.h.minus(&self.w).named("H \\ W")
    }

    pub fn h1_minus_core(&self) -> Subcategory {
        self.h1.minus(&self.core1).named("H1 \\ S∩T")
    }

    pub fn h2_minus_core(&self) -> Subcategory {
        self.h2.minus(&self.core2).named("H2 \\ U∩V")
    }

    /// Membership of an object in `H`, summand by summand.
    pub fn h_contains(&self, o: &Obj) -> bool {
        self.h.contains_obj(o)
    }
}

fn table<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    name: &str,
    mut f: impl FnMut(Interval) -> Result<Membership<F>>,
) -> Result<ClassTable<F>> {
    let rows = ctx
        .indecomposables()
        .iter()
        .map(|&x| f(x).map(|m| (x, m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassTable {
        name: name.to_string(),
        rows,
    })
}

fn intersect_members<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    name: &str,
    a: &ClassTable<F>,
    b: &ClassTable<F>,
) -> Result<Subcategory> {
    let ids: Vec<Interval> = a
        .members()
        .filter(|&x| b.get(x).is_some_and(|m| m.is_holds()))
        .collect();
    Subcategory::new(ctx, name, ids)
}

pub fn compute_hearts<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    tp: &TwinPair<F>,
    bounds: &SearchBounds,
) -> Result<HeartClasses<F>> {
    let (s, t, u, v) = (tp.s(), tp.t(), tp.u(), tp.v());
    let bplus = table(ctx, "B+", |x| membership_bplus(ctx, x, tp, bounds))?;
    let bminus = table(ctx, "B-", |x| membership_bminus(ctx, x, tp, bounds))?;
    let h = intersect_members(ctx, "H", &bplus, &bminus)?;

    let core1 = s.inter(t).named("S∩T");
    let b1plus = table(ctx, "B1+", |x| find_left_approx(ctx, x, &core1, t, bounds))?;
    let b1minus = table(ctx, "B1-", |x| find_right_approx(ctx, x, &core1, s, bounds))?;
    let h1 = intersect_members(ctx, "H1", &b1plus, &b1minus)?;

    let core2 = u.inter(v).named("U∩V");
    let b2plus = table(ctx, "B2+", |x| find_left_approx(ctx, x, &core2, v, bounds))?;
    let b2minus = table(ctx, "B2-", |x| find_right_approx(ctx, x, &core2, u, bounds))?;
    let h2 = intersect_members(ctx, "H2", &b2plus, &b2minus)?;

    Ok(HeartClasses {
        w: tp.w.clone(),
        bplus,
        bminus,
        h,
        core1,
        b1plus,
        b1minus,
        h1,
        core2,
        b2plus,
        b2minus,
        h2,
    })
}
