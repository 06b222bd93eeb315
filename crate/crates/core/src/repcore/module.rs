use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::matrix::Matrix;

use super::quiver::QuiverPresentation;

/// A representation of a bound linear quiver.
///
/// Vertices are indexed `0..n` here (vertex `v` of the quiver is index
/// `v - 1`). Arrow `i` goes from index `i + 1` to index `i` and is stored as
/// a `dims[i] x dims[i + 1]` matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Module<F> {
    pres: Arc<QuiverPresentation>,
    dims: Vec<usize>,
    arrows: Vec<Matrix<F>>,
}

impl<F: FiniteField> Module<F> {
    pub fn new(
        pres: &Arc<QuiverPresentation>,
        dims: Vec<usize>,
        arrows: Vec<Matrix<F>>,
    ) -> Result<Self> {
        let n = pres.n();
        if dims.len() != n {
            return Err(Error::InvalidModule(format!(
                "expected {n} dimensions, got {}",
                dims.len()
            )));
        }
        if arrows.len() + 1 != n {
            return Err(Error::InvalidModule(format!(
                "expected {} arrow maps, got {}",
                n - 1,
                arrows.len()
            )));
        }
        for (i, a) in arrows.iter().enumerate() {
            if a.shape() != (dims[i], dims[i + 1]) {
                return Err(Error::InvalidModule(format!(
                    "arrow {} -> {} has shape {:?}, expected {:?}",
                    i + 2,
                    i + 1,
                    a.shape(),
                    (dims[i], dims[i + 1])
                )));
            }
        }
        let m = Module {
            pres: pres.clone(),
            dims,
            arrows,
        };
        for &(a, b) in pres.relations() {
            if !m.path_map(b - 1, a - 1).is_zero() {
                return Err(Error::InvalidModule(format!(
                    "relation [{a},{b}] does not vanish"
                )));
            }
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        pres: &Arc<QuiverPresentation>,
        dims: Vec<usize>,
        arrows: Vec<Matrix<F>>,
    ) -> Self {
        let m = Module {
            pres: pres.clone(),
            dims,
            arrows,
        };
        debug_assert!(Module::new(pres, m.dims.clone(), m.arrows.clone()).is_ok());
        m
    }

    pub fn zero(pres: &Arc<QuiverPresentation>) -> Self {
        let n = pres.n();
        Module {
            pres: pres.clone(),
            dims: vec![0; n],
            arrows: (0..n.saturating_sub(1))
                .map(|_| Matrix::zeros(0, 0))
                .collect(),
        }
    }

    /// The uniserial module supported on vertices `lo..=hi` (1-based) with
    /// identity arrow maps.
    pub fn interval(pres: &Arc<QuiverPresentation>, lo: usize, hi: usize) -> Result<Self> {
        let n = pres.n();
        if lo < 1 || lo > hi || hi > n {
            return Err(Error::InvalidModule(format!(
                "[{lo},{hi}] is not an interval of 1..={n}"
            )));
        }
        if !pres.path_nonzero(lo, hi) {
            return Err(Error::InvalidModule(format!(
                "[{lo},{hi}] contains a zero relation"
            )));
        }
        let dims: Vec<usize> = (1..=n).map(|v| usize::from(lo <= v && v <= hi)).collect();
        let arrows = (0..n - 1)
            .map(|i| {
                let (r, c) = (dims[i], dims[i + 1]);
                if r == 1 && c == 1 {
                    Matrix::identity(1)
                } else {
                    Matrix::zeros(r, c)
                }
            })
            .collect();
        Ok(Module {
            pres: pres.clone(),
            dims,
            arrows,
        })
    }

    pub fn presentation(&self) -> &Arc<QuiverPresentation> {
        &self.pres
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn arrow(&self, i: usize) -> &Matrix<F> {
        &self.arrows[i]
    }

    pub fn arrows(&self) -> &[Matrix<F>] {
        &self.arrows
    }

    /// The composite of arrows from index `from` down to index `to` (`to <= from`).
    pub fn path_map(&self, from: usize, to: usize) -> Matrix<F> {
        assert!(to <= from);
        let mut acc = Matrix::identity(self.dims[from]);
        for i in (to..from).rev() {
            acc = &self.arrows[i] * &acc;
        }
        acc
    }

    /// The interval summands `(lo, hi)` (1-based) with their multiplicities,
    /// read off the ranks of the path maps: a summand `[a, b]` contributes
    /// to the rank of the path from `j` down to `i` exactly when `a <= i`
    /// and `j <= b`.
    #[allow(clippy::needless_range_loop)]
    pub fn interval_multiplicities(&self) -> Vec<((usize, usize), usize)> {
        let n = self.n();
        let mut r = vec![vec![0usize; n]; n];
        for j in 0..n {
            let mut acc = Matrix::identity(self.dims[j]);
            r[j][j] = self.dims[j];
            for i in (0..j).rev() {
                acc = &self.arrows[i] * &acc;
                r[j][i] = acc.rank();
                if r[j][i] == 0 {
                    break;
                }
            }
        }
        let rank = |j: usize, i: Option<usize>| -> isize {
            match i {
                Some(i) if j < n => r[j][i] as isize,
                _ => 0,
            }
        };
        let mut out = Vec::new();
        for a in 0..n {
            for b in a..n {
                let m = rank(b, Some(a)) - rank(b, a.checked_sub(1)) - rank(b + 1, Some(a))
                    + rank(b + 1, a.checked_sub(1));
                if m > 0 {
                    out.push(((a + 1, b + 1), m as usize));
                }
            }
        }
        out
    }

    /// Support as a 1-based interval, if the support is nonempty and connected.
    pub fn support(&self) -> Option<(usize, usize)> {
        let lo = self.dims.iter().position(|&d| d > 0)?;
        let hi = self.dims.iter().rposition(|&d| d > 0)?;
        self.dims[lo..=hi]
            .iter()
            .all(|&d| d > 0)
            .then_some((lo + 1, hi + 1))
    }

    /// If this module is isomorphic to an interval module, that interval.
    ///
    /// Over a linear quiver these are exactly the indecomposables: one
    /// dimensional on a connected support with every internal arrow nonzero.
    pub fn as_interval(&self) -> Option<(usize, usize)> {
        let (lo, hi) = self.support()?;
        let ok = (lo - 1..hi).all(|v| self.dims[v] == 1)
            && (lo - 1..hi - 1).all(|i| !self.arrows[i].is_zero());
        ok.then_some((lo, hi))
    }

    pub fn same_presentation(&self, other: &Module<F>) -> Result<()> {
        if Arc::ptr_eq(&self.pres, &other.pres) || self.pres == other.pres {
            Ok(())
        } else {
            Err(Error::Mismatch(
                "modules over different presentations".into(),
            ))
        }
    }

    pub fn direct_sum(pres: &Arc<QuiverPresentation>, parts: &[&Module<F>]) -> Result<Self> {
        for p in parts {
            if p.pres.as_ref() != pres.as_ref() {
                return Err(Error::Mismatch(
                    "direct sum over different presentations".into(),
                ));
            }
        }
        let n = pres.n();
        let dims: Vec<usize> = (0..n)
            .map(|v| parts.iter().map(|p| p.dims[v]).sum())
            .collect();
        let arrows = (0..n.saturating_sub(1))
            .map(|i| {
                let blocks: Vec<&Matrix<F>> = parts.iter().map(|p| &p.arrows[i]).collect();
                Matrix::block_diag(&blocks)
            })
            .collect();
        Ok(Module {
            pres: pres.clone(),
            dims,
            arrows,
        })
    }

    /// Transports the module structure along per-vertex invertible maps
    /// `g_v`, returning `M'` and the isomorphism `M -> M'`.
    pub fn change_basis(&self, g: &[Matrix<F>]) -> Result<(Module<F>, super::Morphism<F>)> {
        let mut inv = Vec::with_capacity(g.len());
        for (v, gv) in g.iter().enumerate() {
            if gv.shape() != (self.dims[v], self.dims[v]) {
                return Err(Error::Mismatch("change of basis has wrong shape".into()));
            }
            inv.push(
                gv.inverse()
                    .ok_or_else(|| Error::Mismatch("change of basis is singular".into()))?,
            );
        }
        let arrows = (0..self.arrows.len())
            .map(|i| &(&g[i] * &self.arrows[i]) * &inv[i + 1])
            .collect();
        let m = Module::new_unchecked(&self.pres, self.dims.clone(), arrows);
        let iso = super::Morphism::new(self, &m, g.to_vec())?;
        Ok((m, iso))
    }
}

impl<F: fmt::Debug> fmt::Debug for Module<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module(dims={:?}", self.dims)?;
        for (i, a) in self.arrows.iter().enumerate() {
            if self.dims[i] > 0 && self.dims[i + 1] > 0 {
                write!(f, ", {}->{}: {:?}", i + 2, i + 1, a)?;
            }
        }
        write!(f, ")")
    }
}
