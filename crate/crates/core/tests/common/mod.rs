#![allow(dead_code)]

use cotorsion_core::pairs::{verify_twin_from_classes, TwinPair};
use cotorsion_core::repcore::QuiverPresentation;
use cotorsion_core::serialcat::{CategoryCtx, Interval, Obj};
use cotorsion_core::subcat::{SearchBounds, Subcategory, Verdict};
use cotorsion_core::FiniteField;

pub const PROJ_INJ: [&str; 3] = ["[1,4]", "[2,5]", "[3,6]"];

pub fn iv(s: &str) -> Interval {
    s.parse().unwrap()
}

pub fn obj(ids: &[&str]) -> Obj {
    ids.iter().map(|s| iv(s)).collect()
}

pub fn nakayama<F: FiniteField>() -> CategoryCtx<F> {
    CategoryCtx::generate(QuiverPresentation::new(6, [(1, 5), (2, 6)]).unwrap()).unwrap()
}

pub fn class<F: FiniteField>(ctx: &CategoryCtx<F>, name: &str, extra: &[&str]) -> Subcategory {
    let ids = PROJ_INJ.iter().chain(extra).map(|s| iv(s));
    Subcategory::new(ctx, name, ids).unwrap()
}

pub fn ids(s: &Subcategory) -> Vec<String> {
    s.iter().map(|x| x.to_string()).collect()
}

pub struct Fixture {
    pub s: &'static [&'static str],
    pub t: &'static [&'static str],
    pub u: &'static [&'static str],
    pub v: &'static [&'static str],
}

/// Non-integral heart; the surviving indecomposables are [3,4], [3,5], [4,4].
pub const NONINTEGRAL: Fixture = Fixture {
    s: &["[1,3]", "[1,2]", "[5,6]", "[1,1]", "[2,2]", "[6,6]"],
    t: &[
        "[1,3]", "[2,4]", "[4,6]", "[1,2]", "[2,3]", "[5,6]", "[2,2]", "[3,3]", "[6,6]",
    ],
    u: &[
        "[1,3]", "[4,6]", "[1,2]", "[4,5]", "[5,6]", "[1,1]", "[2,2]", "[5,5]", "[6,6]",
    ],
    v: &["[1,3]", "[4,6]", "[1,2]", "[5,6]", "[2,2]", "[6,6]"],
};

/// Abelian heart with the single surviving indecomposable [3,5].
pub const ABELIAN: Fixture = Fixture {
    s: &["[1,3]", "[1,2]", "[1,1]", "[2,2]", "[6,6]"],
    t: &[
        "[1,3]", "[2,4]", "[4,6]", "[1,2]", "[2,3]", "[3,4]", "[5,6]", "[2,2]", "[3,3]", "[4,4]",
        "[6,6]",
    ],
    u: &[
        "[1,3]", "[1,2]", "[5,6]", "[1,1]", "[2,2]", "[5,5]", "[6,6]",
    ],
    v: &[
        "[1,3]", "[4,6]", "[1,2]", "[2,3]", "[5,6]", "[2,2]", "[3,3]", "[6,6]",
    ],
};

/// A twin pair with W = U = T.
pub const W_EQUALS_T: Fixture = Fixture {
    s: &["[1,3]", "[1,2]", "[5,6]", "[1,1]", "[6,6]"],
    t: &[
        "[1,3]", "[2,4]", "[4,6]", "[1,2]", "[2,3]", "[5,6]", "[1,1]", "[2,2]", "[3,3]", "[6,6]",
    ],
    u: &[
        "[1,3]", "[2,4]", "[4,6]", "[1,2]", "[2,3]", "[5,6]", "[1,1]", "[2,2]", "[3,3]", "[6,6]",
    ],
    v: &["[2,4]", "[4,6]", "[2,3]", "[5,6]", "[6,6]"],
};

pub fn twin<F: FiniteField>(ctx: &CategoryCtx<F>, fx: &Fixture) -> TwinPair<F> {
    let s = class(ctx, "S", fx.s);
    let t = class(ctx, "T", fx.t);
    let u = class(ctx, "U", fx.u);
    let v = class(ctx, "V", fx.v);
    match verify_twin_from_classes(ctx, &s, &t, &u, &v, &SearchBounds::default()).unwrap() {
        Verdict::Holds(tp) => tp,
        other => panic!("fixture is not a twin cotorsion pair: {other:?}"),
    }
}
