//! Bloch Hamiltonian families, Brillouin-zone sampling, and spectral flattening.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{ceye, dagger, eigh, max_abs, CMat, C64};

/// Hermiticity-closure tolerance enforced at construction: H(-R) = H(R)^dag.
pub const CLOSURE_TOL: f64 = 1e-13;
/// Default spectral-gap tolerance for flattening.
pub const DEFAULT_GAP_TOL: f64 = 1e-6;
/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 7;

/// Tight-binding Bloch Hamiltonian family H(k) = sum_R e^{i k . R} H_R.
///
/// The hopping map is closed under R -> -R with H_{-R} = H_R^dag, so every
/// evaluation is Hermitian by construction. The Fermi level is fixed at 0;
/// models must be shifted by the caller.
#[derive(Debug, Clone)]
pub struct BlochModel {
    dim: usize,
    bands: usize,
    hoppings: BTreeMap<Vec<i64>, CMat>,
}

impl BlochModel {
    pub fn new(dim: usize, bands: usize, hoppings: BTreeMap<Vec<i64>, CMat>) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::InvalidModel(format!(
                "dim {dim} exceeds supported maximum {MAX_DIM}"
            )));
        }
        if bands == 0 {
            return Err(Error::InvalidModel("bands must be >= 1".into()));
        }
        if hoppings.is_empty() {
            return Err(Error::InvalidModel("no hoppings given".into()));
        }
        if dim == 0 && hoppings.len() != 1 {
            return Err(Error::InvalidModel(
                "a 0-dimensional model must have exactly one hopping entry".into(),
            ));
        }
        for (r, h) in &hoppings {
            if r.len() != dim {
                return Err(Error::InvalidModel(format!(
                    "hopping R={r:?} has length {}, expected dim {dim}",
                    r.len()
                )));
            }
            if h.shape() != [bands, bands] {
                return Err(Error::InvalidModel(format!(
                    "hopping R={r:?} has shape {:?}, expected {bands}x{bands}",
                    h.shape()
                )));
            }
            let neg: Vec<i64> = r.iter().map(|x| -x).collect();
            let conj = hoppings
                .get(&neg)
                .ok_or_else(|| Error::MissingConjugate { r: r.clone() })?;
            let residual = max_abs(&(conj - &dagger(h)));
            if residual >= CLOSURE_TOL {
                return Err(Error::NonHermitian {
                    r: r.clone(),
                    residual,
                });
            }
        }
        Ok(Self {
            dim,
            bands,
            hoppings,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    pub fn hoppings(&self) -> &BTreeMap<Vec<i64>, CMat> {
        &self.hoppings
    }

    /// H(k) = sum_R e^{i k . R} H_R. Hermitian and 2pi-periodic per axis.
    pub fn eval(&self, k: &[f64]) -> Result<CMat> {
        if k.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: k.len(),
            });
        }
        let mut h = CMat::zeros((self.bands, self.bands));
        for (r, hr) in &self.hoppings {
            let phase: f64 = r.iter().zip(k).map(|(&ri, &ki)| ri as f64 * ki).sum();
            let factor = C64::from_polar(1.0, phase);
            h.zip_mut_with(hr, |acc, &x| *acc += factor * x);
        }
        Ok(h)
    }

    /// Minimum over the grid of the smallest |eigenvalue| of H(k).
    pub fn min_gap(&self, grid: &KGrid) -> Result<f64> {
        if grid.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: grid.dim(),
            });
        }
        let mut gap = f64::INFINITY;
        for k in grid.points() {
            let h = self.eval(&k)?;
            let (vals, _) = eigh(&h)?;
            for v in vals.iter() {
                gap = gap.min(v.abs());
            }
        }
        Ok(gap)
    }

    /// Spectrally flatten to Q(k) = I - 2 P(k), P the filled-band projector.
    pub fn flatten(&self, grid: &KGrid, gap_tol: f64) -> Result<FlattenedSample> {
        if grid.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: grid.dim(),
            });
        }
        let mut q = Vec::with_capacity(grid.len());
        let mut filled: Option<(usize, Vec<f64>)> = None;
        for k in grid.points() {
            let h = self.eval(&k)?;
            let (qk, nk) = flatten_matrix_at(&h, gap_tol, &k)?;
            match &filled {
                None => filled = Some((nk, k)),
                Some((n0, k0)) => {
                    if nk != *n0 {
                        return Err(Error::InconsistentFilling {
                            first: *n0,
                            first_k: k0.clone(),
                            other: nk,
                            k,
                        });
                    }
                }
            }
            q.push(qk);
        }
        let (filled, _) = filled.expect("grid is never empty");
        Ok(FlattenedSample {
            grid: grid.clone(),
            bands: self.bands,
            filled,
            q,
        })
    }
}

/// Flatten one Hermitian matrix: Q = I - 2 P. Returns (Q, negative count).
pub fn flatten_matrix(h: &CMat, gap_tol: f64) -> Result<(CMat, usize)> {
    flatten_matrix_at(h, gap_tol, &[])
}

fn flatten_matrix_at(h: &CMat, gap_tol: f64, k: &[f64]) -> Result<(CMat, usize)> {
    let n = h.nrows();
    let (vals, vecs) = eigh(h)?;
    let gap = vals.iter().fold(f64::INFINITY, |g, v| g.min(v.abs()));
    if gap <= gap_tol {
        return Err(Error::GapClosed { k: k.to_vec(), gap });
    }
    let filled = vals.iter().filter(|&&v| v < 0.0).count();
    // Eigenvalues come ascending, so the filled states are the first columns.
    let mut q = ceye(n);
    for j in 0..filled {
        let col = vecs.column(j);
        for a in 0..n {
            for b in 0..n {
                q[(a, b)] -= 2.0 * col[a] * col[b].conj();
            }
        }
    }
    Ok((q, filled))
}

/// Uniform torus sampling k = 2 pi (j_1, ..., j_d) / m of the Brillouin zone.
///
/// Linear indices run with axis 0 fastest. Contains k = 0 always; for even m
/// it contains every time-reversal-invariant momentum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGrid {
    dim: usize,
    m: usize,
}

impl KGrid {
    pub fn new(dim: usize, m: usize) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::InvalidModel(format!(
                "grid dim {dim} exceeds supported maximum {MAX_DIM}"
            )));
        }
        if m < 2 {
            return Err(Error::InvalidModel(
                "grid needs at least 2 points per axis".into(),
            ));
        }
        Ok(Self { dim, m })
    }

    /// Default resolution per dimension: 201 points for d=1, 61 per axis for
    /// d=2; higher dimensions use small compromise grids.
    pub fn default_for(dim: usize) -> Self {
        let m = match dim {
            0 => 2,
            1 => 201,
            2 => 61,
            3 => 12,
            4 => 8,
            _ => 4,
        };
        Self { dim, m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.m
    }

    pub fn is_even(&self) -> bool {
        self.m.is_multiple_of(2)
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn axis_value(&self, j: usize) -> f64 {
        2.0 * std::f64::consts::PI * j as f64 / self.m as f64
    }

    /// Per-axis indices of a linear index (axis 0 fastest).
    pub fn indices(&self, lin: usize) -> Vec<usize> {
        let mut rest = lin;
        (0..self.dim)
            .map(|_| {
                let j = rest % self.m;
                rest /= self.m;
                j
            })
            .collect()
    }

    pub fn linear_index(&self, indices: &[usize]) -> usize {
        indices
            .iter()
            .rev()
            .fold(0, |acc, &j| acc * self.m + (j % self.m))
    }

    pub fn point(&self, lin: usize) -> Vec<f64> {
        self.indices(lin)
            .iter()
            .map(|&j| self.axis_value(j))
            .collect()
    }

    /// Linear index of -k for the given linear index of k.
    pub fn neg_index(&self, lin: usize) -> usize {
        let neg: Vec<usize> = self
            .indices(lin)
            .iter()
            .map(|&j| (self.m - j) % self.m)
            .collect();
        self.linear_index(&neg)
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(|lin| self.point(lin))
    }
}

/// Flattened family Q(k) with Q^2 = I sampled on a grid.
#[derive(Debug, Clone)]
pub struct FlattenedSample {
    grid: KGrid,
    bands: usize,
    filled: usize,
    q: Vec<CMat>,
}

impl FlattenedSample {
    /// Constant reference family Q(k) = Q for all k.
    pub fn constant(grid: KGrid, q: CMat) -> Result<Self> {
        let n = q.nrows();
        if q.ncols() != n {
            return Err(Error::InvalidModel(
                "reference matrix must be square".into(),
            ));
        }
        let herm = max_abs(&(&q - &dagger(&q)));
        if herm >= 1e-12 {
            return Err(Error::InvalidModel(format!(
                "reference is not Hermitian: residual {herm:.3e}"
            )));
        }
        let invol = max_abs(&(&q.dot(&q) - &ceye(n)));
        if invol >= 1e-10 {
            return Err(Error::InvalidModel(format!(
                "reference does not square to the identity: residual {invol:.3e}"
            )));
        }
        let trace: f64 = (0..n).map(|i| q[(i, i)].re).sum();
        let filled = ((n as f64 - trace) / 2.0).round() as usize;
        let q = vec![q; grid.len()];
        Ok(Self {
            grid,
            bands: n,
            filled,
            q,
        })
    }

    pub(crate) fn from_parts(grid: KGrid, bands: usize, filled: usize, q: Vec<CMat>) -> Self {
        debug_assert_eq!(q.len(), grid.len());
        Self {
            grid,
            bands,
            filled,
            q,
        }
    }

    pub fn grid(&self) -> &KGrid {
        &self.grid
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    pub fn filled(&self) -> usize {
        self.filled
    }

    pub fn q(&self, lin: usize) -> &CMat {
        &self.q[lin]
    }
}
