mod common;

use common::*;
use cotorsion_core::repcore::{decompose, decompose_with, DecomposeOptions, Module, Morphism};
use cotorsion_core::serialcat::{CategoryCtx, Interval, Obj};
use cotorsion_core::{Error, FiniteField, Gf2, Gf3, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All objects of total dimension at most `cap`, any multiplicities.
fn objects_upto(ids: &[Interval], cap: usize) -> Vec<Obj> {
    fn rec(ids: &[Interval], left: usize, cur: &mut Vec<Interval>, out: &mut Vec<Obj>) {
        let Some((&x, rest)) = ids.split_first() else {
            out.push(Obj::new(cur.clone()));
            return;
        };
        let mut used = 0;
        loop {
            rec(rest, left - used, cur, out);
            if used + x.len() > left {
                break;
            }
            used += x.len();
            cur.push(x);
        }
        cur.truncate(cur.len() - used / x.len());
    }
    let mut out = Vec::new();
    rec(ids, cap, &mut Vec::new(), &mut out);
    out.retain(|o| !o.is_zero());
    out.sort();
    out
}

fn random_invertible<F: FiniteField>(rng: &mut ChaCha8Rng, n: usize) -> Matrix<F> {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| {
            F::from_u64(rng.gen_range(0..F::CHARACTERISTIC as u64))
        });
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// `realize(o)` in a random basis at every vertex.
fn scrambled<F: FiniteField>(ctx: &CategoryCtx<F>, o: &Obj, rng: &mut ChaCha8Rng) -> Module<F> {
    let m = ctx.realize(o);
    let g: Vec<Matrix<F>> = m
        .dims()
        .iter()
        .map(|&d| random_invertible(rng, d))
        .collect();
    m.change_basis(&g).unwrap().0
}

fn pieces_obj(pieces: &[(usize, usize)]) -> Obj {
    pieces
        .iter()
        .map(|&(lo, hi)| Interval::new(lo, hi).unwrap())
        .collect()
}

fn check_decomposition<F: FiniteField>(
    m: &Module<F>,
    d: &cotorsion_core::repcore::Decomposition<F>,
) {
    let k = d.pieces.len();
    let mut sum = Morphism::zero(m, m);
    for i in 0..k {
        for j in 0..k {
            let pi = d.projections[i].after(&d.inclusions[j]);
            if i == j {
                assert!(pi.is_iso(), "p{i} ∘ i{i} is not an isomorphism");
                assert_eq!(
                    pi,
                    Morphism::identity(pi.source()),
                    "p{i} ∘ i{i} is not the identity"
                );
            } else {
                assert!(pi.is_zero(), "p{i} ∘ i{j} is nonzero");
            }
        }
        let e = d.inclusions[i].after(&d.projections[i]);
        assert_eq!(e.after(&e), e, "piece {i} does not give an idempotent");
        sum = sum.add(&e).unwrap();
    }
    assert_eq!(sum, Morphism::identity(m));
}

fn serial_and_generic_agree<F: FiniteField>(seed: u64) -> (usize, usize) {
    let ctx = nakayama::<F>();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let generic = DecomposeOptions {
        serial_fast_path: false,
        ..DecomposeOptions::default()
    };
    let (mut agreed, mut inconclusive) = (0, 0);
    for o in objects_upto(ctx.indecomposables(), 8) {
        let m = scrambled(&ctx, &o, &mut rng);
        let serial = decompose(&m).unwrap();
        assert_eq!(pieces_obj(&serial.pieces), o);
        check_decomposition(&m, &serial);
        assert_eq!(ctx.isoclass(&m).unwrap(), o);
        match decompose_with(&m, &generic) {
            Ok(g) => {
                assert_eq!(pieces_obj(&g.pieces), o, "generic path on {o}");
                check_decomposition(&m, &g);
                agreed += 1;
            }
            Err(Error::DecompositionInconclusive { .. }) => inconclusive += 1,
            Err(e) => panic!("{o}: {e}"),
        }
    }
    (agreed, inconclusive)
}

#[test]
fn serial_and_generic_decompositions_agree_up_to_dimension_eight() {
    let (agreed, inconclusive) = serial_and_generic_agree::<Gf2>(0);
    assert_eq!(inconclusive, 0, "{agreed} agreed");
}

#[test]
fn serial_and_generic_decompositions_agree_over_f3() {
    let (agreed, inconclusive) = serial_and_generic_agree::<Gf3>(7);
    assert_eq!(inconclusive, 0, "{agreed} agreed");
}

#[test]
fn decomposing_a_piece_returns_it() {
    let ctx = nakayama::<Gf2>();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for o in objects_upto(ctx.indecomposables(), 6) {
        let m = scrambled(&ctx, &o, &mut rng);
        let d = decompose(&m).unwrap();
        for (k, incl) in d.inclusions.iter().enumerate() {
            let again = decompose(incl.source()).unwrap();
            assert_eq!(again.pieces, vec![d.pieces[k]], "{o}");
            check_decomposition(incl.source(), &again);
        }
        // decomposing the realized pieces gives the same multiset
        let rebuilt = ctx.realize(&pieces_obj(&d.pieces));
        assert_eq!(decompose(&rebuilt).unwrap().pieces, d.pieces);
    }
}

#[test]
fn isoclass_and_identify_agree() {
    let ctx = nakayama::<Gf3>();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for o in objects_upto(ctx.indecomposables(), 7) {
        let m = scrambled(&ctx, &o, &mut rng);
        assert_eq!(ctx.isoclass(&m).unwrap(), ctx.identify(&m).unwrap(), "{o}");
        let (id, iso) = ctx.identify_iso(&m).unwrap();
        assert_eq!(id, o);
        assert!(iso.is_iso());
    }
}

#[test]
fn interval_multiplicities_count_summands() {
    let ctx = nakayama::<Gf2>();
    for o in objects_upto(ctx.indecomposables(), 6) {
        let m = ctx.realize(&o);
        for ((lo, hi), k) in m.interval_multiplicities() {
            assert_eq!(o.multiplicity(Interval::new(lo, hi).unwrap()), k, "{o}");
        }
        let total: usize = m.interval_multiplicities().iter().map(|&(_, k)| k).sum();
        assert_eq!(total, o.len(), "{o}");
    }
}
