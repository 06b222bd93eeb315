//! Interval modules of a linear Nakayama algebra and closed-form Hom/Ext.

mod ctx;
mod interval;
mod objmap;

pub use ctx::{hom_closed, CategoryCtx};
pub use interval::{Interval, Obj};
pub use objmap::{Conflation, ObjMap};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FiniteField, Fp};
    use crate::repcore::{hom_space, Morphism, QuiverPresentation};

    type F2 = Fp<2>;
    type F3 = Fp<3>;

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    fn nakayama6<F: FiniteField>() -> CategoryCtx<F> {
        CategoryCtx::generate(QuiverPresentation::new(6, [(1, 5), (2, 6)]).unwrap()).unwrap()
    }

    #[test]
    fn eighteen_indecomposables() {
        let ctx = nakayama6::<F2>();
        assert_eq!(ctx.indecomposables().len(), 18);
        assert!(!ctx.contains(iv("[1,5]")));
        assert!(ctx.contains(iv("[3,6]")));
        let pi: Vec<Interval> = ctx
            .indecomposables()
            .iter()
            .copied()
            .filter(|&x| ctx.is_projective(x) && ctx.is_injective(x))
            .collect();
        assert_eq!(pi, vec![iv("[1,4]"), iv("[2,5]"), iv("[3,6]")]);
    }

    #[test]
    fn small_presentations() {
        let a2 = CategoryCtx::<F2>::generate(QuiverPresentation::new(2, []).unwrap()).unwrap();
        assert_eq!(
            a2.indecomposables(),
            &[iv("[1,1]"), iv("[1,2]"), iv("[2,2]")]
        );
        let a3 =
            CategoryCtx::<F2>::generate(QuiverPresentation::new(3, [(1, 3)]).unwrap()).unwrap();
        assert_eq!(
            a3.indecomposables(),
            &[
                iv("[1,1]"),
                iv("[1,2]"),
                iv("[2,2]"),
                iv("[2,3]"),
                iv("[3,3]")
            ]
        );
    }

    #[test]
    fn tables_match_linear_algebra() {
        nakayama6::<F2>().validate_tables().unwrap();
        nakayama6::<F3>().validate_tables().unwrap();
        let free = CategoryCtx::<F2>::generate(QuiverPresentation::new(4, []).unwrap()).unwrap();
        free.validate_tables().unwrap();
    }

    #[test]
    fn closed_forms() {
        let ctx = nakayama6::<F2>();
        assert_eq!(ctx.hom_dim(iv("[3,4]"), iv("[3,5]")), 1);
        assert_eq!(ctx.hom_dim(iv("[3,5]"), iv("[4,4]")), 0);
        assert_eq!(ctx.ext_dim(iv("[4,5]"), iv("[3,3]")), 1);
        assert_eq!(ctx.ext_dim(iv("[3,4]"), iv("[3,4]")), 0);
        for &x in ctx.indecomposables() {
            for p in ["[1,4]", "[2,5]", "[3,6]"] {
                assert_eq!(ctx.ext_dim(iv(p), x), 0);
                assert_eq!(ctx.ext_dim(x, iv(p)), 0);
            }
        }
    }

    #[test]
    fn canonical_composition() {
        let ctx = nakayama6::<F2>();
        let all = ctx.indecomposables().to_vec();
        for &x in &all {
            for &y in &all {
                for &z in &all {
                    let (Some(f), Some(g)) = (ctx.canonical(x, y), ctx.canonical(y, z)) else {
                        continue;
                    };
                    let gf = g.after(&f);
                    if ctx.compose_canonical(x, y, z) {
                        assert_eq!(Some(gf), ctx.canonical(x, z));
                    } else {
                        assert!(gf.is_zero());
                    }
                }
            }
        }
        assert!(ctx.compose_canonical(iv("[3,4]"), iv("[3,5]"), iv("[4,5]")));
        assert!(!ctx.compose_canonical(iv("[3,3]"), iv("[3,4]"), iv("[4,4]")));
    }

    #[test]
    fn extension_middles() {
        let ctx = nakayama6::<F3>();
        let m = ctx.extensions(iv("[4,5]"), iv("[3,3]")).unwrap();
        assert_eq!(
            m,
            vec![
                Obj::new(vec![iv("[3,3]"), iv("[4,5]")]),
                Obj::single(iv("[3,5]"))
            ]
        );
        let m = ctx.extensions(iv("[4,4]"), iv("[3,3]")).unwrap();
        assert!(m.contains(&Obj::single(iv("[3,4]"))));
        let m = ctx.extensions(iv("[1,4]"), iv("[3,3]")).unwrap();
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn realize_identify_round_trip() {
        let ctx = nakayama6::<F2>();
        let o = Obj::new(vec![iv("[3,5]"), iv("[4,4]"), iv("[3,5]"), iv("[1,2]")]);
        let (back, iso) = ctx.identify_iso(&ctx.realize(&o)).unwrap();
        assert_eq!(back, o);
        assert!(iso.is_iso());
        assert!(ctx.realize(&Obj::zero()).is_zero());
        assert_eq!(
            ctx.identify(&ctx.realize(&Obj::zero())).unwrap(),
            Obj::zero()
        );
    }

    #[test]
    fn scalar_matrices() {
        let ctx = nakayama6::<F3>();
        let x = Obj::new(vec![iv("[3,4]"), iv("[4,4]")]);
        let y = Obj::new(vec![iv("[3,5]"), iv("[4,5]")]);
        let basis = ctx.hom_basis(&x, &y);
        let brute = hom_space(&ctx.realize(&x), &ctx.realize(&y)).unwrap();
        assert_eq!(basis.len(), brute.len());
        let s = crate::Matrix::from_u32_rows(2, &[vec![2, 0], vec![1, 1]]);
        let f = ctx.morphism_from_scalars(&x, &y, &s).unwrap();
        assert_eq!(ctx.scalars_of(&x, &y, &f), s);
        let bad = crate::Matrix::from_u32_rows(2, &[vec![0, 1], vec![0, 0]]);
        assert!(ctx.morphism_from_scalars(&x, &y, &bad).is_err());
        assert!(Morphism::identity(&ctx.realize(&x)).is_iso());
    }
}
