//! Krull-Schmidt decomposition into interval modules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::matrix::Matrix;

use super::exact::{kernel, submodule_from_bases};
use super::hom::{express_in_span, hom_space};
use super::module::Module;
use super::morphism::Morphism;

pub const DEFAULT_EXHAUSTION_CAP: usize = 12;

/// Exhaustive idempotent search is also refused once the endomorphism
/// algebra has more than this many elements.
const MAX_EXHAUSTIVE_ELEMENTS: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecomposeOptions {
    pub exhaustion_cap: usize,
    pub seed: u64,
    pub random_attempts: usize,
    pub serial_fast_path: bool,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            exhaustion_cap: DEFAULT_EXHAUSTION_CAP,
            seed: 0,
            random_attempts: 32,
            serial_fast_path: true,
        }
    }
}

/// `M ≅ ⊕ [lo_k, hi_k]`, with `Σ inclusions[k] ∘ projections[k] = id_M` and
/// each inclusion starting at the canonical interval module.
#[derive(Clone, Debug)]
pub struct Decomposition<F> {
    pub pieces: Vec<(usize, usize)>,
    pub inclusions: Vec<Morphism<F>>,
    pub projections: Vec<Morphism<F>>,
}

pub fn decompose<F: FiniteField>(m: &Module<F>) -> Result<Decomposition<F>> {
    decompose_with(m, &DecomposeOptions::default())
}

pub fn decompose_with<F: FiniteField>(
    m: &Module<F>,
    opts: &DecomposeOptions,
) -> Result<Decomposition<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let raw = split(m, opts, &mut rng)?;
    let pres = m.presentation();
    let mut pieces: Vec<((usize, usize), Morphism<F>)> = Vec::with_capacity(raw.len());
    for incl in raw {
        let piece = incl.source();
        let (lo, hi) = piece
            .as_interval()
            .ok_or_else(|| Error::Inconsistent("split produced a non-interval piece".into()))?;
        let canon = Module::interval(pres, lo, hi)?;
        let top = hi - 1;
        let comps = (0..m.n())
            .map(|v| {
                if lo - 1 <= v && v <= top {
                    piece.path_map(top, v)
                } else {
                    Matrix::zeros(0, 0)
                }
            })
            .collect();
        let iso = Morphism::new(&canon, piece, comps)?;
        pieces.push(((lo, hi), incl.after(&iso)));
    }
    pieces.sort_by_key(|(iv, _)| *iv);
    let (intervals, inclusions): (Vec<_>, Vec<_>) = pieces.into_iter().unzip();
    if inclusions.is_empty() {
        return Ok(Decomposition {
            pieces: intervals,
            inclusions,
            projections: Vec::new(),
        });
    }
    let refs: Vec<&Morphism<F>> = inclusions.iter().collect();
    let row = Morphism::row(&refs)?;
    let inv = row
        .inverse()
        .ok_or_else(|| Error::Inconsistent("pieces do not recombine to the module".into()))?;
    let ds = super::DirectSum::new(
        pres,
        &inclusions.iter().map(|i| i.source()).collect::<Vec<_>>(),
    )?;
    let projections = ds.projections.iter().map(|p| p.after(&inv)).collect();
    Ok(Decomposition {
        pieces: intervals,
        inclusions,
        projections,
    })
}

fn split<F: FiniteField>(
    x: &Module<F>,
    opts: &DecomposeOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Morphism<F>>> {
    if x.is_zero() {
        return Ok(Vec::new());
    }
    if x.as_interval().is_some() {
        return Ok(vec![Morphism::identity(x)]);
    }
    if opts.serial_fast_path {
        if let Some(parts) = split_serial(x, opts, rng)? {
            return Ok(parts);
        }
    }
    split_fitting(x, opts, rng)
}

/// Splits off the uniserial submodule generated by an element of maximal
/// reach; `None` if no retraction onto it exists.
fn split_serial<F: FiniteField>(
    x: &Module<F>,
    opts: &DecomposeOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<Morphism<F>>>> {
    let n = x.n();
    let mut best: Option<(usize, usize)> = None;
    for b in 0..n {
        if x.dim(b) == 0 {
            continue;
        }
        let a = (0..=b)
            .find(|&v| !x.path_map(b, v).is_zero())
            .expect("identity path is nonzero");
        if best.is_none_or(|(bb, ba)| b - a > bb - ba) {
            best = Some((b, a));
        }
    }
    let (b, a) = best.expect("nonzero module has a nonzero vertex");
    let reach = x.path_map(b, a);
    let j = (0..reach.cols())
        .find(|&j| (0..reach.rows()).any(|r| !reach[(r, j)].is_zero()))
        .expect("nonzero path map has a nonzero column");
    let mut gen = vec![F::zero(); x.dim(b)];
    gen[j] = F::one();
    let bases: Vec<Matrix<F>> = (0..n)
        .map(|v| {
            if a <= v && v <= b {
                let img = x.path_map(b, v).mul_vec(&gen);
                Matrix::from_columns(x.dim(v), &[img])
            } else {
                Matrix::zeros(x.dim(v), 0)
            }
        })
        .collect();
    let (u, iota) = submodule_from_bases(x, &bases)?;
    let retractions = hom_space(x, &u)?;
    let composites: Vec<Morphism<F>> = retractions.iter().map(|r| r.after(&iota)).collect();
    let Some(coeffs) = express_in_span(&composites, &Morphism::identity(&u)) else {
        return Ok(None);
    };
    let r = Morphism::combination(x, &u, &retractions, &coeffs);
    let (_, kappa) = kernel(&r);
    let mut out = vec![iota];
    for part in split(kappa.source(), opts, rng)? {
        out.push(kappa.after(&part));
    }
    Ok(Some(out))
}

fn fitting_split<F: FiniteField>(
    x: &Module<F>,
    phi: &Morphism<F>,
) -> Option<(Morphism<F>, Morphism<F>)> {
    let total = x.total_dim();
    let powered: Vec<Matrix<F>> = phi.components().iter().map(|c| c.pow(total)).collect();
    let im: Vec<Matrix<F>> = powered.iter().map(|c| c.image_matrix()).collect();
    let rank: usize = im.iter().map(|b| b.cols()).sum();
    if rank == 0 || rank == total {
        return None;
    }
    let ker: Vec<Matrix<F>> = powered.iter().map(|c| c.kernel_matrix()).collect();
    let (_, i_im) = submodule_from_bases(x, &im).ok()?;
    let (_, i_ker) = submodule_from_bases(x, &ker).ok()?;
    Some((i_im, i_ker))
}

fn split_fitting<F: FiniteField>(
    x: &Module<F>,
    opts: &DecomposeOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Morphism<F>>> {
    let end = hom_space(x, x)?;
    let d = end.len();
    let p = F::CHARACTERISTIC as u64;
    let mut found = None;
    for _ in 0..opts.random_attempts {
        let coeffs: Vec<F> = (0..d).map(|_| F::from_u64(rng.gen_range(0..p))).collect();
        let phi = Morphism::combination(x, x, &end, &coeffs);
        if let Some(s) = fitting_split(x, &phi) {
            found = Some(s);
            break;
        }
    }
    if found.is_none() {
        let elements = p.checked_pow(d as u32);
        let feasible =
            d <= opts.exhaustion_cap && elements.is_some_and(|e| e <= MAX_EXHAUSTIVE_ELEMENTS);
        if !feasible {
            return Err(Error::DecompositionInconclusive {
                dim: d,
                cap: opts.exhaustion_cap,
            });
        }
        let mut digits = vec![0u64; d];
        'outer: loop {
            let coeffs: Vec<F> = digits.iter().map(|&v| F::from_u64(v)).collect();
            let phi = Morphism::combination(x, x, &end, &coeffs);
            if let Some(s) = fitting_split(x, &phi) {
                found = Some(s);
                break;
            }
            for dg in digits.iter_mut() {
                *dg += 1;
                if *dg < p {
                    continue 'outer;
                }
                *dg = 0;
            }
            break;
        }
    }
    let Some((i_im, i_ker)) = found else {
        // local endomorphism ring, yet not an interval module
        return Err(Error::Inconsistent(
            "module with local endomorphisms is not an interval".into(),
        ));
    };
    let mut out = Vec::new();
    for incl in [i_im, i_ker] {
        for part in split(incl.source(), opts, rng)? {
            out.push(incl.after(&part));
        }
    }
    Ok(out)
}
