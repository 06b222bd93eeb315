//! Summand-closed subcategories, Ext-orthogonals, `X ★ Y` membership and
//! approximation search.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::matrix::Matrix;
use crate::repcore::{cokernel, for_each_submodule, kernel, Morphism};
use crate::serialcat::{hom_closed, CategoryCtx, Conflation, Interval, Obj, ObjMap};

/// A subcategory closed under direct summands, given by its indecomposables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subcategory {
    name: String,
    ids: BTreeSet<Interval>,
}

impl Subcategory {
    pub fn new<F: FiniteField>(
        ctx: &CategoryCtx<F>,
        name: impl Into<String>,
        ids: impl IntoIterator<Item = Interval>,
    ) -> Result<Self> {
        let ids: BTreeSet<Interval> = ids.into_iter().collect();
        for &x in &ids {
            ctx.check(x)?;
        }
        Ok(Subcategory {
            name: name.into(),
            ids,
        })
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Subcategory {
            name: name.into(),
            ids: BTreeSet::new(),
        }
    }

    pub fn all<F: FiniteField>(ctx: &CategoryCtx<F>) -> Self {
        Subcategory {
            name: "all".into(),
            ids: ctx.indecomposables().iter().copied().collect(),
        }
    }

    pub fn projectives<F: FiniteField>(ctx: &CategoryCtx<F>) -> Self {
        Subcategory {
            name: "proj".into(),
            ids: ctx
                .indecomposables()
                .iter()
                .copied()
                .filter(|&x| ctx.is_projective(x))
                .collect(),
        }
    }

    pub fn injectives<F: FiniteField>(ctx: &CategoryCtx<F>) -> Self {
        Subcategory {
            name: "inj".into(),
            ids: ctx
                .indecomposables()
                .iter()
                .copied()
                .filter(|&x| ctx.is_injective(x))
                .collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn ids(&self) -> &BTreeSet<Interval> {
        &self.ids
    }

    pub fn iter(&self) -> impl Iterator<Item = Interval> + '_ {
        self.ids.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, x: Interval) -> bool {
        self.ids.contains(&x)
    }

    /// Membership of an object in `add` of this class.
    pub fn contains_obj(&self, o: &Obj) -> bool {
        o.iter().all(|x| self.contains(x))
    }

    pub fn is_subset(&self, other: &Subcategory) -> bool {
        self.ids.is_subset(&other.ids)
    }

    pub fn oplus(&self, other: &Subcategory) -> Subcategory {
        Subcategory {
            name: format!("{} ⊕ {}", self.name, other.name),
            ids: self.ids.union(&other.ids).copied().collect(),
        }
    }

    pub fn inter(&self, other: &Subcategory) -> Subcategory {
        Subcategory {
            name: format!("{} ∩ {}", self.name, other.name),
            ids: self.ids.intersection(&other.ids).copied().collect(),
        }
    }

    pub fn minus(&self, other: &Subcategory) -> Subcategory {
        Subcategory {
            name: format!("{} \\ {}", self.name, other.name),
            ids: self.ids.difference(&other.ids).copied().collect(),
        }
    }

    /// `{y : Ext¹(x, y) = 0 for all x here}`.
    pub fn right_perp<F: FiniteField>(&self, ctx: &CategoryCtx<F>) -> Subcategory {
        Subcategory {
            name: format!("{}^⊥", self.name),
            ids: ctx
                .indecomposables()
                .iter()
                .copied()
                .filter(|&y| self.iter().all(|x| ctx.ext_dim(x, y) == 0))
                .collect(),
        }
    }

    /// `{x : Ext¹(x, y) = 0 for all y here}`.
    pub fn left_perp<F: FiniteField>(&self, ctx: &CategoryCtx<F>) -> Subcategory {
        Subcategory {
            name: format!("^⊥{}", self.name),
            ids: ctx
                .indecomposables()
                .iter()
                .copied()
                .filter(|&x| self.iter().all(|y| ctx.ext_dim(x, y) == 0))
                .collect(),
        }
    }
}

impl fmt::Display for Subcategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.ids.iter().map(|x| x.to_string()).collect();
        write!(f, "{} = {{{}}}", self.name, ids.join(", "))
    }
}

impl fmt::Debug for Subcategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Largest multiplicity of any indecomposable in an enumerated object.
    pub mult: usize,
    /// Largest total dimension of any enumerated module.
    pub dim_cap: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            mult: 2,
            dim_cap: 24,
        }
    }
}

impl SearchBounds {
    pub fn new(mult: usize, dim_cap: usize) -> Result<Self> {
        if mult == 0 || dim_cap == 0 {
            return Err(Error::Mismatch("search bounds must be positive".into()));
        }
        Ok(SearchBounds { mult, dim_cap })
    }
}

/// Why a bounded search stopped without a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unresolved {
    pub bounds: SearchBounds,
    pub detail: String,
}

/// Three-valued outcome of a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict<H, C> {
    Holds(H),
    Fails(C),
    UnknownWithinBound(Unresolved),
}

impl<H, C> Verdict<H, C> {
    pub fn is_holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::UnknownWithinBound(_))
    }

    pub fn holds(&self) -> Option<&H> {
        match self {
            Verdict::Holds(h) => Some(h),
            _ => None,
        }
    }

    pub fn fails(&self) -> Option<&C> {
        match self {
            Verdict::Fails(c) => Some(c),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds(_) => "holds",
            Verdict::Fails(_) => "fails",
            Verdict::UnknownWithinBound(_) => "unknown",
        }
    }
}

/// No submodule of `z` has both sub and quotient in the required classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarRefutation {
    pub z: Obj,
    pub submodules_checked: usize,
}

/// Decides `z ∈ X ★ Y`: some conflation `X₀ -> z -> Y₀` with `X₀ ∈ add X`,
/// `Y₀ ∈ add Y`. Exact, by complete submodule enumeration of `z`.
pub fn star_member<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    z: &Obj,
    x: &Subcategory,
    y: &Subcategory,
    bounds: &SearchBounds,
) -> Result<Verdict<Conflation<F>, StarRefutation>> {
    ctx.check_obj(z)?;
    if x.contains_obj(z) {
        return Ok(Verdict::Holds(Conflation::split(z, &Obj::zero())));
    }
    if y.contains_obj(z) {
        return Ok(Verdict::Holds(Conflation::split(&Obj::zero(), z)));
    }
    let m = ctx.realize(z);
    // composition factors of X₀ lie in the supports of X, and likewise for Y₀
    let mut checked = 0usize;
    let mut outcome: Result<Option<Conflation<F>>> = Ok(None);
    let _ = for_each_submodule::<F, ()>(&m, bounds.dim_cap, |sub, incl| {
        checked += 1;
        if !dims_fit(sub.dims(), x) {
            return ControlFlow::Continue(());
        }
        let quotient_dims: Vec<usize> = m
            .dims()
            .iter()
            .zip(sub.dims())
            .map(|(a, b)| a - b)
            .collect();
        if !dims_fit(&quotient_dims, y) {
            return ControlFlow::Continue(());
        }
        let step = || -> Result<Option<Conflation<F>>> {
            let (so, _) = ctx.identify_iso(sub)?;
            if !x.contains_obj(&so) {
                return Ok(None);
            }
            let (_, proj) = cokernel(incl);
            let (qo, _) = ctx.identify_iso(proj.target())?;
            if !y.contains_obj(&qo) {
                return Ok(None);
            }
            let ses = crate::repcore::Ses::new(incl.clone(), proj)?;
            Ok(Some(Conflation::from_ses(ctx, z, &ses)?))
        };
        match step() {
            Ok(None) => ControlFlow::Continue(()),
            other => {
                outcome = other;
                ControlFlow::Break(())
            }
        }
    })?;
    match outcome? {
        Some(c) => Ok(Verdict::Holds(c)),
        None => Ok(Verdict::Fails(StarRefutation {
            z: z.clone(),
            submodules_checked: checked,
        })),
    }
}

/// Cheap necessary condition: each vertex with nonzero dimension must lie in
/// the support of some indecomposable of `class`.
fn dims_fit(dims: &[usize], class: &Subcategory) -> bool {
    dims.iter()
        .enumerate()
        .all(|(v, &d)| d == 0 || class.iter().any(|x| x.contains(v + 1)))
}

/// An indecomposable of `a` outside `X ★ Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarCounterexample {
    pub indecomposable: Interval,
    pub refutation: StarRefutation,
}

/// One conflation `X -> ? -> Y` through each indecomposable of a class.
pub type StarWitnesses<F> = Vec<(Interval, Conflation<F>)>;

/// Decides `a ⊆ X ★ Y` at the level of indecomposables, which suffices for
/// all of `add a` because direct sums of conflations are conflations.
pub fn subcat_in_star<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    a: &Subcategory,
    x: &Subcategory,
    y: &Subcategory,
    bounds: &SearchBounds,
) -> Result<Verdict<StarWitnesses<F>, StarCounterexample>> {
    let mut witnesses = Vec::with_capacity(a.len());
    for id in a.iter() {
        match star_member(ctx, &Obj::single(id), x, y, bounds)? {
            Verdict::Holds(c) => witnesses.push((id, c)),
            Verdict::Fails(r) => {
                return Ok(Verdict::Fails(StarCounterexample {
                    indecomposable: id,
                    refutation: r,
                }))
            }
            Verdict::UnknownWithinBound(u) => return Ok(Verdict::UnknownWithinBound(u)),
        }
    }
    Ok(Verdict::Holds(witnesses))
}

/// Exhaustive evidence that an indecomposable has no approximation
/// conflation of the requested shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoApproximation {
    pub target: Interval,
    /// Every candidate multiplicity-free object, smallest first.
    pub candidates_checked: usize,
}

/// Searches for a conflation `V₀ -> U₀ -> b` with `U₀ ∈ add u`, `V₀ ∈ add v`.
///
/// Any such conflation can be normalized (by automorphisms of `U₀` and by
/// splitting off summands mapped to zero, which land in the kernel) to one
/// where `U₀` is multiplicity free, every summand maps nonzero to `b`, and
/// the deflation is the sum of canonical maps. The search runs over exactly
/// these candidates, smallest total dimension first, so a negative answer is
/// definitive unless the dimension cap cut candidates off.
pub fn find_left_approx<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    b: Interval,
    u: &Subcategory,
    v: &Subcategory,
    bounds: &SearchBounds,
) -> Result<Verdict<Conflation<F>, NoApproximation>> {
    ctx.check(b)?;
    let eligible: Vec<Interval> = u.iter().filter(|&x| hom_closed(x, b)).collect();
    // surjective iff some summand reaches the top of b
    let cands = subsets_by_size(&eligible, |s| s.iter().any(|x| x.top() == b.top()));
    approx_search(b, cands, bounds, |src| {
        let target = Obj::single(b);
        let map = ObjMap::new(
            src.clone(),
            target.clone(),
            Matrix::from_fn(1, src.len(), |_, _| F::one()),
        )?;
        let f = map.to_morphism(ctx)?;
        let (k, ki) = kernel(&f);
        let (ko, kiso) = ctx.identify_iso(&k)?;
        if !v.contains_obj(&ko) {
            return Ok(None);
        }
        let infl = ki.after(&kiso);
        Ok(Some(Conflation {
            inflation: ObjMap::from_morphism(ctx, &ko, src, &infl)?,
            deflation: map,
        }))
    })
}

/// Searches for a conflation `b -> T₀ -> S₀` with `T₀ ∈ add t`, `S₀ ∈ add s`
/// (dual normalization of [`find_left_approx`]).
pub fn find_right_approx<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    b: Interval,
    t: &Subcategory,
    s: &Subcategory,
    bounds: &SearchBounds,
) -> Result<Verdict<Conflation<F>, NoApproximation>> {
    ctx.check(b)?;
    let eligible: Vec<Interval> = t.iter().filter(|&x| hom_closed(b, x)).collect();
    // injective iff some summand keeps the socle of b
    let cands = subsets_by_size(&eligible, |set| set.iter().any(|x| x.socle() == b.socle()));
    approx_search(b, cands, bounds, |tgt| {
        let source = Obj::single(b);
        let map = ObjMap::new(
            source.clone(),
            tgt.clone(),
            Matrix::from_fn(tgt.len(), 1, |_, _| F::one()),
        )?;
        let f = map.to_morphism(ctx)?;
        let (c, cp) = cokernel(&f);
        let (co, ciso) = ctx.identify_iso(&c)?;
        if !s.contains_obj(&co) {
            return Ok(None);
        }
        let inv = ciso
            .inverse()
            .ok_or_else(|| Error::Inconsistent("identification is not an isomorphism".into()))?;
        let defl: Morphism<F> = inv.after(&cp);
        Ok(Some(Conflation {
            inflation: map,
            deflation: ObjMap::from_morphism(ctx, tgt, &co, &defl)?,
        }))
    })
}

fn approx_search<F: FiniteField>(
    b: Interval,
    cands: Vec<Obj>,
    bounds: &SearchBounds,
    mut try_one: impl FnMut(&Obj) -> Result<Option<Conflation<F>>>,
) -> Result<Verdict<Conflation<F>, NoApproximation>> {
    let mut truncated = false;
    let mut checked = 0;
    for c in &cands {
        if c.total_dim() > bounds.dim_cap {
            truncated = true;
            continue;
        }
        checked += 1;
        if let Some(w) = try_one(c)? {
            return Ok(Verdict::Holds(w));
        }
    }
    if truncated {
        Ok(Verdict::UnknownWithinBound(Unresolved {
            bounds: *bounds,
            detail: format!("no approximation of {b} among candidates within the dimension cap"),
        }))
    } else {
        Ok(Verdict::Fails(NoApproximation {
            target: b,
            candidates_checked: checked,
        }))
    }
}

/// Nonempty subsets of `ids` satisfying `keep`, as objects ordered by total
/// dimension and then lexicographically.
fn subsets_by_size(ids: &[Interval], keep: impl Fn(&[Interval]) -> bool) -> Vec<Obj> {
    assert!(ids.len() < 32, "too many candidate summands");
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << ids.len()) {
        let set: Vec<Interval> = (0..ids.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| ids[i])
            .collect();
        if keep(&set) {
            out.push(Obj::new(set));
        }
    }
    out.sort_by(|a, b| a.total_dim().cmp(&b.total_dim()).then_with(|| a.cmp(b)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::repcore::QuiverPresentation;

    type F2 = Fp<2>;
    type F3 = Fp<3>;

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    fn ctx<F: FiniteField>() -> CategoryCtx<F> {
        CategoryCtx::generate(QuiverPresentation::new(6, [(1, 5), (2, 6)]).unwrap()).unwrap()
    }

    fn sub<F: FiniteField>(c: &CategoryCtx<F>, ids: &[&str]) -> Subcategory {
        Subcategory::new(c, "X", ids.iter().map(|s| iv(s))).unwrap()
    }

    #[test]
    fn set_laws() {
        let c = ctx::<F2>();
        let a = sub(&c, &["[3,4]"]);
        let b = sub(&c, &["[4,4]"]);
        assert_eq!(a.oplus(&b).ids(), sub(&c, &["[3,4]", "[4,4]"]).ids());
        assert_eq!(a.oplus(&a).ids(), a.ids());
        assert_eq!(a.oplus(&Subcategory::empty("0")).ids(), a.ids());
        assert!(Subcategory::new(&c, "bad", [iv("[1,5]")]).is_err());
    }

    #[test]
    fn perpendiculars() {
        let c = ctx::<F2>();
        let all = Subcategory::all(&c);
        assert_eq!(Subcategory::empty("0").right_perp(&c).ids(), all.ids());
        assert_eq!(Subcategory::projectives(&c).right_perp(&c).ids(), all.ids());
        assert!(!sub(&c, &["[4,5]"]).right_perp(&c).contains(iv("[3,3]")));
        assert_eq!(Subcategory::injectives(&c).left_perp(&c).ids(), all.ids());
    }

    #[test]
    fn star_membership() {
        let c = ctx::<F2>();
        let b = SearchBounds::default();
        let z = Obj::single(iv("[3,5]"));
        let v = star_member(&c, &z, &sub(&c, &["[3,3]"]), &sub(&c, &["[4,5]"]), &b).unwrap();
        let w = v.holds().unwrap();
        assert_eq!(w.left(), &Obj::single(iv("[3,3]")));
        assert_eq!(w.right(), &Obj::single(iv("[4,5]")));
        w.to_ses(&c).unwrap();
        let v = star_member(&c, &z, &sub(&c, &["[4,5]"]), &sub(&c, &["[3,3]"]), &b).unwrap();
        assert!(v.is_fails());
        let v = star_member(&c, &z, &sub(&c, &["[3,5]"]), &Subcategory::empty("0"), &b).unwrap();
        assert!(v.is_holds());
    }

    #[test]
    fn approximations_with_trivial_classes() {
        let c = ctx::<F3>();
        let b = SearchBounds::default();
        let all = Subcategory::all(&c);
        let p = iv("[2,5]");
        let v = find_left_approx(&c, p, &all, &all, &b).unwrap();
        let w = v.holds().unwrap();
        assert_eq!(w.middle(), &Obj::single(p));
        assert!(w.left().is_zero());
        let v = find_left_approx(&c, iv("[3,4]"), &Subcategory::empty("0"), &all, &b).unwrap();
        assert!(v.is_fails());
        let v = find_right_approx(&c, iv("[3,6]"), &all, &all, &b).unwrap();
        assert!(v.holds().unwrap().right().is_zero());
        let v = find_right_approx(&c, iv("[3,4]"), &Subcategory::empty("0"), &all, &b).unwrap();
        assert!(v.is_fails());
    }

    #[test]
    fn projective_covers_are_left_approximations() {
        let c = ctx::<F2>();
        let b = SearchBounds::default();
        let proj = Subcategory::projectives(&c);
        let all = Subcategory::all(&c);
        for &x in c.indecomposables() {
            let w = find_left_approx(&c, x, &proj, &all, &b).unwrap();
            let w = w.holds().unwrap();
            w.to_ses(&c).unwrap();
            assert_eq!(w.middle(), &Obj::single(c.projective_cover(x.top())));
        }
    }
}
