use crate::error::Result;
use crate::field::FiniteField;
use crate::matrix::Matrix;

use super::module::Module;
use super::morphism::Morphism;

/// A basis of `Hom(M, N)`: the nullspace of the naturality system, in
/// increasing free-variable order of the flattened components.
pub fn hom_space<F: FiniteField>(m: &Module<F>, n: &Module<F>) -> Result<Vec<Morphism<F>>> {
    m.same_presentation(n)?;
    let verts = m.n();
    let mut offsets = Vec::with_capacity(verts);
    let mut total = 0;
    for v in 0..verts {
        offsets.push(total);
        total += n.dim(v) * m.dim(v);
    }
    if total == 0 {
        return Ok(Vec::new());
    }
    let idx = |v: usize, r: usize, c: usize| offsets[v] + r * m.dim(v) + c;
    let mut rows: Vec<Vec<F>> = Vec::new();
    for i in 0..verts.saturating_sub(1) {
        // N_i f_{i+1} - f_i M_i = 0, entry (r, c)
        let (na, ma) = (n.arrow(i), m.arrow(i));
        for r in 0..n.dim(i) {
            for c in 0..m.dim(i + 1) {
                let mut eq = vec![F::zero(); total];
                for k in 0..n.dim(i + 1) {
                    let a = na[(r, k)];
                    if !a.is_zero() {
                        eq[idx(i + 1, k, c)] += a;
                    }
                }
                for k in 0..m.dim(i) {
                    let b = ma[(k, c)];
                    if !b.is_zero() {
                        eq[idx(i, r, k)] -= b;
                    }
                }
                if eq.iter().any(|x| !x.is_zero()) {
                    rows.push(eq);
                }
            }
        }
    }
    let sys = Matrix::from_rows(total, &rows);
    sys.nullspace()
        .into_iter()
        .map(|v| Morphism::from_flat(m, n, &v))
        .collect()
}

pub fn hom_dim<F: FiniteField>(m: &Module<F>, n: &Module<F>) -> Result<usize> {
    Ok(hom_space(m, n)?.len())
}

/// Coefficients expressing `f` in the span of `basis`, if it lies there.
pub fn express_in_span<F: FiniteField>(basis: &[Morphism<F>], f: &Morphism<F>) -> Option<Vec<F>> {
    if basis.is_empty() {
        return f.is_zero().then(Vec::new);
    }
    let len = f.flatten().len();
    let cols: Vec<Vec<F>> = basis.iter().map(|b| b.flatten()).collect();
    Matrix::from_columns(len, &cols).solve_vec(&f.flatten())
}

/// Some `h : A -> B` with `g ∘ h = f`, for `f : A -> C` and `g : B -> C`.
pub fn factor_through_target<F: FiniteField>(
    f: &Morphism<F>,
    g: &Morphism<F>,
) -> Result<Option<Morphism<F>>> {
    let basis = hom_space(f.source(), g.source())?;
    let images: Vec<Morphism<F>> = basis.iter().map(|h| g.after(h)).collect();
    Ok(express_in_span(&images, f)
        .map(|c| Morphism::combination(f.source(), g.source(), &basis, &c)))
}

/// Some `h : B -> C` with `h ∘ g = f`, for `f : A -> C` and `g : A -> B`.
pub fn factor_through_source<F: FiniteField>(
    f: &Morphism<F>,
    g: &Morphism<F>,
) -> Result<Option<Morphism<F>>> {
    let basis = hom_space(g.target(), f.target())?;
    let images: Vec<Morphism<F>> = basis.iter().map(|h| h.after(g)).collect();
    Ok(express_in_span(&images, f)
        .map(|c| Morphism::combination(g.target(), f.target(), &basis, &c)))
}
