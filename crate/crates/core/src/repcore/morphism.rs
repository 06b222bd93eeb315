use std::fmt;

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::matrix::Matrix;

use super::module::Module;

/// A homomorphism of representations, one matrix per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism<F> {
    source: Module<F>,
    target: Module<F>,
    comps: Vec<Matrix<F>>,
}

impl<F: FiniteField> Morphism<F> {
    pub fn new(source: &Module<F>, target: &Module<F>, comps: Vec<Matrix<F>>) -> Result<Self> {
        source.same_presentation(target)?;
        let n = source.n();
        if comps.len() != n {
            return Err(Error::InvalidMorphism(format!(
                "expected {n} components, got {}",
                comps.len()
            )));
        }
        for (v, c) in comps.iter().enumerate() {
            if c.shape() != (target.dim(v), source.dim(v)) {
                return Err(Error::InvalidMorphism(format!(
                    "component at vertex {} has shape {:?}, expected {:?}",
                    v + 1,
                    c.shape(),
                    (target.dim(v), source.dim(v))
                )));
            }
        }
        for i in 0..n.saturating_sub(1) {
            if target.arrow(i) * &comps[i + 1] != &comps[i] * source.arrow(i) {
                return Err(Error::InvalidMorphism(format!(
                    "naturality fails for arrow {} -> {}",
                    i + 2,
                    i + 1
                )));
            }
        }
        Ok(Morphism {
            source: source.clone(),
            target: target.clone(),
            comps,
        })
    }

    pub(crate) fn new_unchecked(
        source: &Module<F>,
        target: &Module<F>,
        comps: Vec<Matrix<F>>,
    ) -> Self {
        debug_assert!(Morphism::new(source, target, comps.clone()).is_ok());
        Morphism {
            source: source.clone(),
            target: target.clone(),
            comps,
        }
    }

    pub fn zero(source: &Module<F>, target: &Module<F>) -> Self {
        let comps = (0..source.n())
            .map(|v| Matrix::zeros(target.dim(v), source.dim(v)))
            .collect();
        Morphism {
            source: source.clone(),
            target: target.clone(),
            comps,
        }
    }

    pub fn identity(m: &Module<F>) -> Self {
        let comps = m.dims().iter().map(|&d| Matrix::identity(d)).collect();
        Morphism {
            source: m.clone(),
            target: m.clone(),
            comps,
        }
    }

    pub fn source(&self) -> &Module<F> {
        &self.source
    }

    pub fn target(&self) -> &Module<F> {
        &self.target
    }

    pub fn component(&self, v: usize) -> &Matrix<F> {
        &self.comps[v]
    }

    pub fn components(&self) -> &[Matrix<F>] {
        &self.comps
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Morphism<F>) -> Result<Morphism<F>> {
        if inner.target != self.source {
            return Err(Error::Mismatch("composition endpoints do not match".into()));
        }
        let comps = self
            .comps
            .iter()
            .zip(&inner.comps)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Morphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            comps,
        })
    }

    /// `self ∘ inner`, panicking on mismatched endpoints.
    pub fn after(&self, inner: &Morphism<F>) -> Morphism<F> {
        self.compose(inner)
            .expect("composition endpoints do not match")
    }

    fn check_parallel(&self, other: &Morphism<F>) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Mismatch("morphisms are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Morphism<F>) -> Result<Morphism<F>> {
        self.check_parallel(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Morphism {
            comps,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Morphism<F>) -> Result<Morphism<F>> {
        self.check_parallel(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Morphism {
            comps,
            ..self.clone()
        })
    }

    pub fn scale(&self, s: F) -> Morphism<F> {
        Morphism {
            comps: self.comps.iter().map(|a| a.scale(s)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Morphism<F> {
        self.scale(-F::one())
    }

    /// `Σ coeffs[j] · basis[j]`, all parallel to `self`'s shape (`zero` when empty).
    pub fn combination(
        source: &Module<F>,
        target: &Module<F>,
        basis: &[Morphism<F>],
        coeffs: &[F],
    ) -> Morphism<F> {
        let mut comps: Vec<Matrix<F>> = (0..source.n())
            .map(|v| Matrix::zeros(target.dim(v), source.dim(v)))
            .collect();
        for (b, &c) in basis.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for (acc, m) in comps.iter_mut().zip(&b.comps) {
                *acc = &*acc + &m.scale(c);
            }
        }
        Morphism {
            source: source.clone(),
            target: target.clone(),
            comps,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn is_injective(&self) -> bool {
        self.comps.iter().all(|c| c.is_injective())
    }

    pub fn is_surjective(&self) -> bool {
        self.comps.iter().all(|c| c.is_surjective())
    }

    pub fn is_iso(&self) -> bool {
        self.source.dims() == self.target.dims() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<Morphism<F>> {
        if !self.is_iso() {
            return None;
        }
        let comps = self
            .comps
            .iter()
            .map(|c| c.inverse())
            .collect::<Option<Vec<_>>>()?;
        Some(Morphism {
            source: self.target.clone(),
            target: self.source.clone(),
            comps,
        })
    }

    pub fn rank(&self) -> usize {
        self.comps.iter().map(|c| c.rank()).sum()
    }

    /// All entries, vertex by vertex in row-major order.
    pub fn flatten(&self) -> Vec<F> {
        self.comps
            .iter()
            .flat_map(|c| c.as_slice().iter().copied())
            .collect()
    }

    pub fn flat_len(source: &Module<F>, target: &Module<F>) -> usize {
        (0..source.n()).map(|v| source.dim(v) * target.dim(v)).sum()
    }

    pub fn from_flat(source: &Module<F>, target: &Module<F>, flat: &[F]) -> Result<Morphism<F>> {
        if flat.len() != Self::flat_len(source, target) {
            return Err(Error::InvalidMorphism(
                "flat vector has the wrong length".into(),
            ));
        }
        let mut off = 0;
        let comps = (0..source.n())
            .map(|v| {
                let (r, c) = (target.dim(v), source.dim(v));
                let m = Matrix::from_fn(r, c, |i, j| flat[off + i * c + j]);
                off += r * c;
                m
            })
            .collect();
        Morphism::new(source, target, comps)
    }

    /// `f1 ⊕ f2 ⊕ ...` between the direct sums of sources and targets.
    pub fn direct_sum(parts: &[&Morphism<F>]) -> Result<Morphism<F>> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Mismatch("direct sum of no morphisms".into()))?;
        let pres = first.source.presentation().clone();
        let srcs: Vec<&Module<F>> = parts.iter().map(|p| &p.source).collect();
        let tgts: Vec<&Module<F>> = parts.iter().map(|p| &p.target).collect();
        let source = Module::direct_sum(&pres, &srcs)?;
        let target = Module::direct_sum(&pres, &tgts)?;
        let comps = (0..source.n())
            .map(|v| {
                let blocks: Vec<&Matrix<F>> = parts.iter().map(|p| &p.comps[v]).collect();
                Matrix::block_diag(&blocks)
            })
            .collect();
        Ok(Morphism::new_unchecked(&source, &target, comps))
    }

    /// The morphism `⊕ sources -> ⊕ targets` with block `(i, j)` equal to
    /// `blocks[i][j] : sources[j] -> targets[i]`.
    pub fn from_blocks(
        sources: &[&Module<F>],
        targets: &[&Module<F>],
        blocks: &[Vec<Morphism<F>>],
    ) -> Result<Morphism<F>> {
        let pres = sources
            .first()
            .or(targets.first())
            .ok_or_else(|| Error::Mismatch("block morphism needs at least one module".into()))?
            .presentation()
            .clone();
        if blocks.len() != targets.len() || blocks.iter().any(|row| row.len() != sources.len()) {
            return Err(Error::Mismatch("block grid has the wrong shape".into()));
        }
        for (i, row) in blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if &b.source != sources[j] || &b.target != targets[i] {
                    return Err(Error::Mismatch(format!(
                        "block ({i},{j}) has wrong endpoints"
                    )));
                }
            }
        }
        let source = Module::direct_sum(&pres, sources)?;
        let target = Module::direct_sum(&pres, targets)?;
        let comps = (0..pres.n())
            .map(|v| {
                let mut m = Matrix::zeros(target.dim(v), source.dim(v));
                let mut r0 = 0;
                for (i, t) in targets.iter().enumerate() {
                    let mut c0 = 0;
                    for (j, s) in sources.iter().enumerate() {
                        m.set_block(r0, c0, &blocks[i][j].comps[v]);
                        c0 += s.dim(v);
                    }
                    r0 += t.dim(v);
                }
                m
            })
            .collect();
        Ok(Morphism::new_unchecked(&source, &target, comps))
    }

    /// `(f1 f2 ...) : A1 ⊕ A2 ⊕ ... -> B`.
    pub fn row(parts: &[&Morphism<F>]) -> Result<Morphism<F>> {
        let target = parts
            .first()
            .ok_or_else(|| Error::Mismatch("empty row".into()))?
            .target
            .clone();
        let sources: Vec<&Module<F>> = parts.iter().map(|p| &p.source).collect();
        let row: Vec<Morphism<F>> = parts.iter().map(|p| (*p).clone()).collect();
        Morphism::from_blocks(&sources, &[&target], &[row])
    }

    /// `(f1; f2; ...) : A -> B1 ⊕ B2 ⊕ ...`.
    pub fn column(parts: &[&Morphism<F>]) -> Result<Morphism<F>> {
        let source = parts
            .first()
            .ok_or_else(|| Error::Mismatch("empty column".into()))?
            .source
            .clone();
        let targets: Vec<&Module<F>> = parts.iter().map(|p| &p.target).collect();
        let grid: Vec<Vec<Morphism<F>>> = parts.iter().map(|p| vec![(*p).clone()]).collect();
        Morphism::from_blocks(&[&source], &targets, &grid)
    }
}

/// Injections and projections of a direct sum `parts[0] ⊕ parts[1] ⊕ ...`.
pub struct DirectSum<F> {
    pub sum: Module<F>,
    pub injections: Vec<Morphism<F>>,
    pub projections: Vec<Morphism<F>>,
}

impl<F: FiniteField> DirectSum<F> {
    pub fn new(
        pres: &std::sync::Arc<super::QuiverPresentation>,
        parts: &[&Module<F>],
    ) -> Result<Self> {
        let sum = Module::direct_sum(pres, parts)?;
        let n = pres.n();
        let mut offsets = vec![0usize; n];
        let mut injections = Vec::with_capacity(parts.len());
        let mut projections = Vec::with_capacity(parts.len());
        for p in parts {
            let inj: Vec<Matrix<F>> = (0..n)
                .map(|v| {
                    let mut m = Matrix::zeros(sum.dim(v), p.dim(v));
                    m.set_block(offsets[v], 0, &Matrix::identity(p.dim(v)));
                    m
                })
                .collect();
            let proj: Vec<Matrix<F>> = inj.iter().map(|m| m.transpose()).collect();
            for (v, o) in offsets.iter_mut().enumerate() {
                *o += p.dim(v);
            }
            injections.push(Morphism::new_unchecked(p, &sum, inj));
            projections.push(Morphism::new_unchecked(&sum, p, proj));
        }
        Ok(DirectSum {
            sum,
            injections,
            projections,
        })
    }
}

impl<F: fmt::Debug> fmt::Debug for Morphism<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism(")?;
        let mut first = true;
        for (v, c) in self.comps.iter().enumerate() {
            if c.rows() > 0 && c.cols() > 0 {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "{}: {:?}", v + 1, c)?;
            }
        }
        write!(f, ")")
    }
}
