mod common;

use common::*;
use cotorsion_core::heartcat::Heart;
use cotorsion_core::pairs::{compute_hearts, verify_twin_from_classes, TwinPair};
use cotorsion_core::serialcat::{CategoryCtx, Obj, ObjMap};
use cotorsion_core::subcat::{SearchBounds, Subcategory, Verdict};
use cotorsion_core::{FiniteField, Gf2, Gf3};

const FIXTURES: [(&str, &Fixture); 3] = [
    ("nonintegral", &NONINTEGRAL),
    ("abelian", &ABELIAN),
    ("w_equals_t", &W_EQUALS_T),
];

fn hearts<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    fx: &Fixture,
) -> (TwinPair<F>, cotorsion_core::pairs::HeartClasses<F>) {
    let tp = twin(ctx, fx);
    let hc = compute_hearts(ctx, &tp, &SearchBounds::default()).unwrap();
    assert!(hc.is_exact());
    (tp, hc)
}

#[test]
fn heart_sets_of_the_fixtures() {
    let ctx = nakayama::<Gf2>();
    let expected: [(&Fixture, &[&str], &[&str]); 3] = [
        (
            &NONINTEGRAL,
            &["[3,4]", "[3,5]", "[4,4]"],
            &["[3,4]", "[3,5]", "[5,5]"],
        ),
        (&ABELIAN, &["[3,5]"], &["[3,5]"]),
        (
            &W_EQUALS_T,
            &["[3,4]", "[3,5]", "[4,4]", "[4,5]", "[5,5]"],
            &["[3,4]", "[3,5]", "[5,5]"],
        ),
    ];
    for (fx, h, h1) in expected {
        let (_, hc) = hearts(&ctx, fx);
        assert_eq!(ids(&hc.heart_minus_w()), h.to_vec());
        assert_eq!(ids(&hc.h1_minus_core()), h1.to_vec());
    }
}

#[test]
fn core_equals_u_and_t_when_u_is_t() {
    let ctx = nakayama::<Gf2>();
    let tp = twin(&ctx, &W_EQUALS_T);
    assert_eq!(tp.w.ids(), tp.u().ids());
    assert_eq!(tp.w.ids(), tp.t().ids());
}

#[test]
fn hearts_do_not_depend_on_the_field() {
    let c2 = nakayama::<Gf2>();
    let c3 = nakayama::<Gf3>();
    for (name, fx) in FIXTURES {
        let (_, a) = hearts(&c2, fx);
        let (_, b) = hearts(&c3, fx);
        assert_eq!(a.h.ids(), b.h.ids(), "{name}");
        assert_eq!(a.h1.ids(), b.h1.ids(), "{name}");
        assert_eq!(a.h2.ids(), b.h2.ids(), "{name}");
    }
}

#[test]
fn heart_meets_u_and_t_in_the_core() {
    let ctx = nakayama::<Gf2>();
    for (name, fx) in FIXTURES {
        let (tp, hc) = hearts(&ctx, fx);
        assert_eq!(hc.h.inter(tp.u()).ids(), tp.w.ids(), "{name}: H ∩ U");
        assert_eq!(hc.h.inter(tp.t()).ids(), tp.w.ids(), "{name}: H ∩ T");
    }
}

#[test]
fn twin_pair_inclusions_and_orthogonality() {
    let ctx = nakayama::<Gf2>();
    for (name, fx) in FIXTURES {
        let tp = twin(&ctx, fx);
        assert!(tp.s().is_subset(tp.u()), "{name}: S ⊆ U");
        assert!(tp.v().is_subset(tp.t()), "{name}: V ⊆ T");
        for s in tp.s().iter() {
            for v in tp.v().iter() {
                assert_eq!(ctx.ext_dim(s, v), 0, "{name}: Ext({s}, {v})");
            }
        }
    }
}

#[test]
fn classes_are_closed_under_extensions() {
    let ctx = nakayama::<Gf2>();
    for (name, fx) in FIXTURES {
        let tp = twin(&ctx, fx);
        for class in [tp.s(), tp.t(), tp.u(), tp.v()] {
            for x in class.iter() {
                for y in class.iter() {
                    for mid in ctx.extensions(x, y).unwrap() {
                        assert!(
                            class.contains_obj(&mid),
                            "{name}: {x} by {y} gives {mid} outside {}",
                            class.name()
                        );
                    }
                }
            }
        }
    }
}

/// Span of `g ∘ e` over an elementary basis `e` of `Hom(a, g.source)`, as flattened scalars.
fn composites<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    a: &Obj,
    g: &ObjMap<F>,
    after: bool,
) -> Vec<Vec<F>> {
    let (src, tgt) = if after {
        (a, &g.source)
    } else {
        (&g.target, a)
    };
    let mut out = Vec::new();
    for e in elementary(ctx, src, tgt) {
        let c = if after {
            g.after(ctx, &e).unwrap()
        } else {
            e.after(ctx, g).unwrap()
        };
        out.push(c.scalars.as_slice().to_vec());
    }
    out
}

fn elementary<F: FiniteField>(ctx: &CategoryCtx<F>, a: &Obj, b: &Obj) -> Vec<ObjMap<F>> {
    let mut out = Vec::new();
    for (j, x) in a.iter().enumerate() {
        for (i, y) in b.iter().enumerate() {
            if ctx.hom_dim(x, y) > 0 {
                let mut m = ObjMap::zero(a, b);
                m.scalars[(i, j)] = F::one();
                out.push(m);
            }
        }
    }
    out
}

fn in_span<F: FiniteField>(len: usize, gens: &[Vec<F>], v: &[F]) -> bool {
    cotorsion_core::subspace::Subspace::span(len, gens).contains(v)
}

#[test]
fn maps_from_u_and_to_t_factor_through_the_witnesses() {
    let ctx = nakayama::<Gf2>();
    for (name, fx) in FIXTURES {
        let tp = twin(&ctx, fx);
        let heart = Heart::new(&ctx, &tp, &SearchBounds::default()).unwrap();
        for a in heart.classes().h.iter() {
            let ao = Obj::single(a);
            let w = &heart.plus_witness(a).unwrap().deflation;
            let w2 = &heart.minus_witness(a).unwrap().inflation;
            for u in tp.u().iter() {
                let uo = Obj::single(u);
                let gens = composites(&ctx, &uo, w, true);
                for f in elementary(&ctx, &uo, &ao) {
                    assert!(
                        in_span(ao.len(), &gens, f.scalars.as_slice()),
                        "{name}: {u} -> {a}"
                    );
                }
            }
            for t in tp.t().iter() {
                let to = Obj::single(t);
                let gens = composites(&ctx, &to, w2, false);
                for f in elementary(&ctx, &ao, &to) {
                    assert!(
                        in_span(ao.len(), &gens, f.scalars.as_slice()),
                        "{name}: {a} -> {t}"
                    );
                }
            }
        }
    }
}

#[test]
fn witness_deflations_are_w_epic_and_inflations_w_monic() {
    let ctx = nakayama::<Gf2>();
    for (name, fx) in FIXTURES {
        let tp = twin(&ctx, fx);
        let heart = Heart::new(&ctx, &tp, &SearchBounds::default()).unwrap();
        for a in heart.classes().h.iter() {
            assert!(
                heart
                    .is_w_epic(&heart.plus_witness(a).unwrap().deflation)
                    .unwrap(),
                "{name}: {a}"
            );
            assert!(
                heart
                    .is_w_monic(&heart.minus_witness(a).unwrap().inflation)
                    .unwrap(),
                "{name}: {a}"
            );
        }
    }
}

/// Whether every map between the two objects factoring through `ideal` is
/// spanned by composites through indecomposables of `ideal`, computed with
/// actual module homomorphisms.
fn ideal_by_morphisms<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    ideal: &Subcategory,
    a: &Obj,
    b: &Obj,
) -> Vec<Vec<F>> {
    let mut out = Vec::new();
    for w in ideal.iter() {
        let wo = Obj::single(w);
        for f in ctx.hom_basis(a, &wo) {
            for g in ctx.hom_basis(&wo, b) {
                out.push(ctx.scalars_of(a, b, &g.after(&f)).as_slice().to_vec());
            }
        }
    }
    out
}

#[test]
fn factoring_through_w_or_the_small_cores_agree_on_the_small_hearts() {
    let ctx = nakayama::<Gf2>();
    for (name, fx) in FIXTURES {
        let (tp, hc) = hearts(&ctx, fx);
        for (h, core) in [(&hc.h1, &hc.core1), (&hc.h2, &hc.core2)] {
            for a in h.iter() {
                for b in h.iter() {
                    let (ao, bo) = (Obj::single(a), Obj::single(b));
                    let via_w = cotorsion_core::subspace::Subspace::span(
                        1,
                        &ideal_by_morphisms(&ctx, &tp.w, &ao, &bo),
                    );
                    let via_core = cotorsion_core::subspace::Subspace::span(
                        1,
                        &ideal_by_morphisms(&ctx, core, &ao, &bo),
                    );
                    assert_eq!(via_w.dim(), via_core.dim(), "{name}: {a} -> {b}");
                }
            }
        }
    }
}

#[test]
fn w_ideal_matches_composites_of_module_maps() {
    let ctx = nakayama::<Gf2>();
    for (name, fx) in FIXTURES {
        let tp = twin(&ctx, fx);
        let heart = Heart::new(&ctx, &tp, &SearchBounds::default()).unwrap();
        let q = heart.quotient();
        for a in ctx.indecomposables() {
            for b in ctx.indecomposables() {
                let (ao, bo) = (Obj::single(*a), Obj::single(*b));
                let oracle = cotorsion_core::subspace::Subspace::span(
                    1,
                    &ideal_by_morphisms(&ctx, &tp.w, &ao, &bo),
                );
                let ours: Vec<Vec<Gf2>> = q
                    .w_ideal(&ao, &bo)
                    .iter()
                    .map(|m| m.scalars.as_slice().to_vec())
                    .collect();
                let ours = cotorsion_core::subspace::Subspace::span(1, &ours);
                assert_eq!(oracle.dim(), ours.dim(), "{name}: {a} -> {b}");
                assert_eq!(q.quotient_dim(&ao, &bo), ctx.hom_dim(*a, *b) - ours.dim());
            }
        }
    }
}

#[test]
fn zero_heart_for_projectives_and_everything() {
    let ctx = nakayama::<Gf2>();
    let p = Subcategory::projectives(&ctx);
    let all = Subcategory::all(&ctx);
    let tp = match verify_twin_from_classes(&ctx, &p, &all, &p, &all, &SearchBounds::default())
        .unwrap()
    {
        Verdict::Holds(tp) => tp,
        other => panic!("{other:?}"),
    };
    let heart = Heart::new(&ctx, &tp, &SearchBounds::default()).unwrap();
    assert!(heart.is_zero_heart());
    let q = heart.quotient();
    for a in heart.classes().h.iter() {
        for b in heart.classes().h.iter() {
            assert_eq!(q.quotient_dim(&Obj::single(a), &Obj::single(b)), 0);
        }
    }
}
