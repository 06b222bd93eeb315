use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::matrix::Matrix;
use crate::subspace::{for_each_subspace, for_each_superspace};

use super::exact::submodule_from_bases;
use super::module::Module;
use super::morphism::Morphism;

/// Default refusal threshold on the total dimension of the ambient module.
pub const DEFAULT_SUBMODULE_DIM_CAP: usize = 24;

/// Visits every submodule of `m` exactly once with its inclusion.
///
/// The subspace at the top vertex is chosen first; each lower vertex then
/// ranges over the subspaces containing the image of the choice above it.
pub fn for_each_submodule<F: FiniteField, B>(
    m: &Module<F>,
    dim_cap: usize,
    mut f: impl FnMut(&Module<F>, &Morphism<F>) -> ControlFlow<B>,
) -> Result<ControlFlow<B>> {
    let total = m.total_dim();
    if total > dim_cap {
        return Err(Error::EnumerationRefused {
            dim: total,
            cap: dim_cap,
        });
    }
    let n = m.n();
    let mut chosen: Vec<Matrix<F>> = vec![Matrix::zeros(0, 0); n];
    let top = n - 1;
    let flow = for_each_subspace::<F, B>(m.dim(top), &mut |s: &Matrix<F>| {
        chosen[top] = s.clone();
        descend(m, top, &mut chosen, &mut f)
    });
    Ok(flow)
}

fn descend<F: FiniteField, B>(
    m: &Module<F>,
    v: usize,
    chosen: &mut Vec<Matrix<F>>,
    f: &mut impl FnMut(&Module<F>, &Morphism<F>) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if v == 0 {
        let (sub, incl) =
            submodule_from_bases(m, chosen).expect("enumerated subspaces are arrow-closed");
        return f(&sub, &incl);
    }
    let pushed = m.arrow(v - 1) * &chosen[v];
    for_each_superspace::<F, B>(&pushed, &mut |s: &Matrix<F>| {
        chosen[v - 1] = s.clone();
        descend(m, v - 1, chosen, f)
    })
}

pub fn submodules<F: FiniteField>(
    m: &Module<F>,
    dim_cap: usize,
) -> Result<Vec<(Module<F>, Morphism<F>)>> {
    let mut out = Vec::new();
    let _ = for_each_submodule::<F, ()>(m, dim_cap, |s, i| {
        out.push((s.clone(), i.clone()));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}
