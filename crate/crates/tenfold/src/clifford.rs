//! Anticommuting orthogonal complex structures, their nesting, and the
//! minimal-geodesic construction with its midpoint identities.

use crate::error::{Error, Result};
use crate::linalg::{kron_r, max_abs_r, reye, rmat, RMat};

/// Residual budget for generated sets (orthogonality, squares, Clifford
/// relations, midpoint identities).
pub const GENERATED_TOL: f64 = 1e-12;
/// Acceptance tolerance of is_complex_structure.
pub const STRUCTURE_TOL: f64 = 1e-10;
/// Largest supported chain length (N = 2^k = 1024).
pub const MAX_K: usize = 10;

pub fn epsilon() -> RMat {
    rmat(&[&[0.0, -1.0], &[1.0, 0.0]])
}

pub fn rho1() -> RMat {
    rmat(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// An ordered chain J_1..J_k of N×N real matrices intended to satisfy
/// J_iJ_j + J_jJ_i = -2 delta_ij I with each J_i orthogonal.
#[derive(Debug, Clone)]
pub struct ComplexStructureSet {
    n: usize,
    j: Vec<RMat>,
}

impl ComplexStructureSet {
    /// Wrap an explicit chain; only shapes are validated here, the algebraic
    /// relations are measured by clifford_residual.
    pub fn from_matrices(j: Vec<RMat>) -> Result<Self> {
        let n = match j.first() {
            Some(m) => m.nrows(),
            None => return Err(Error::InvalidModel("empty complex-structure set".into())),
        };
        for m in &j {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: m.nrows().max(m.ncols()),
                });
            }
        }
        Ok(Self { n, j })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Chain length k.
    pub fn len(&self) -> usize {
        self.j.len()
    }

    pub fn is_empty(&self) -> bool {
        self.j.is_empty()
    }

    /// J_i with the 1-based index used throughout (1 ≤ i ≤ k).
    pub fn j(&self, i: usize) -> &RMat {
        assert!(
            i >= 1 && i <= self.j.len(),
            "J index {i} out of 1..={}",
            self.j.len()
        );
        &self.j[i - 1]
    }

    pub fn matrices(&self) -> &[RMat] {
        &self.j
    }
}

/// Build the tensor chain J_i = rho1^{⊗(i-1)} ⊗ epsilon ⊗ I^{⊗(k-i)} with
/// N = 2^k. The recipe trades minimal dimension for transparent correctness.
pub fn generate(k: usize) -> Result<ComplexStructureSet> {
    if !(1..=MAX_K).contains(&k) {
        return Err(Error::IndexOutOfRange {
            index: k,
            limit: MAX_K,
        });
    }
    let eps = epsilon();
    let rho = rho1();
    let id2 = reye(2);
    let mut j = Vec::with_capacity(k);
    for i in 1..=k {
        let mut m = reye(1);
        for _ in 0..i - 1 {
            m = kron_r(&m, &rho);
        }
        m = kron_r(&m, &eps);
        for _ in 0..k - i {
            m = kron_r(&m, &id2);
        }
        j.push(m);
    }
    Ok(ComplexStructureSet { n: 1 << k, j })
}

/// max_{i,j} ‖J_iJ_j + J_jJ_i + 2 delta_ij I‖_max.
pub fn clifford_residual(set: &ComplexStructureSet) -> f64 {
    let eye2 = reye(set.n()).mapv(|x| 2.0 * x);
    let mut worst: f64 = 0.0;
    for a in 0..set.len() {
        for b in a..set.len() {
            let ja = &set.j[a];
            let jb = &set.j[b];
            let mut anti = ja.dot(jb) + jb.dot(ja);
            if a == b {
                anti += &eye2;
            }
            worst = worst.max(max_abs_r(&anti));
        }
    }
    worst
}

/// max_i ‖J_iᵀJ_i - I‖_max.
pub fn orthogonality_residual(set: &ComplexStructureSet) -> f64 {
    let eye = reye(set.n());
    set.j
        .iter()
        .map(|m| max_abs_r(&(&m.t().dot(m) - &eye)))
        .fold(0.0, f64::max)
}

/// A minimal geodesic L(λ) = start·(cos λ I + sin λ A): from I to -I along
/// A = J_1 when i = 0, and from J_i to -J_i along A_i = -J_iJ_{i+1} when
/// i ≥ 1. Closed form is exact because A² = -I.
#[derive(Debug, Clone)]
pub struct GeodesicCurve {
    index: usize,
    start: RMat,
    generator: RMat,
}

impl GeodesicCurve {
    pub fn index(&self) -> usize {
        self.index
    }

    /// L(0): I for i = 0, J_i for i ≥ 1.
    pub fn start(&self) -> &RMat {
        &self.start
    }

    /// The tangent generator A.
    pub fn generator(&self) -> &RMat {
        &self.generator
    }

    pub fn eval(&self, lambda: f64) -> RMat {
        let (s, c) = lambda.sin_cos();
        let rot = reye(self.start.nrows()).mapv(|x| c * x) + self.generator.mapv(|x| s * x);
        self.start.dot(&rot)
    }
}

/// The geodesic through the chain at index i; needs J_{i+1} when i ≥ 1.
pub fn geodesic_curve(set: &ComplexStructureSet, i: usize) -> Result<GeodesicCurve> {
    let limit = set.len() - 1;
    if i == 0 {
        return Ok(GeodesicCurve {
            index: 0,
            start: reye(set.n()),
            generator: set.j(1).clone(),
        });
    }
    if i > limit {
        return Err(Error::IndexOutOfRange { index: i, limit });
    }
    let ji = set.j(i);
    let a = ji.dot(set.j(i + 1)).mapv(|x| -x);
    Ok(GeodesicCurve {
        index: i,
        start: ji.clone(),
        generator: a,
    })
}

/// L(λ) for the geodesic at index i.
pub fn geodesic(set: &ComplexStructureSet, i: usize, lambda: f64) -> Result<RMat> {
    Ok(geodesic_curve(set, i)?.eval(lambda))
}

/// ‖L(π/2) - J_{i+1}‖_max (target J_1 for i = 0): the midpoint identity.
pub fn midpoint_residual(set: &ComplexStructureSet, i: usize) -> Result<f64> {
    let mid = geodesic(set, i, std::f64::consts::FRAC_PI_2)?;
    let target = if i == 0 { set.j(1) } else { set.j(i + 1) };
    Ok(max_abs_r(&(&mid - target)))
}

/// Residual report of the complex-structure test for one candidate J against
/// a fixed prefix J_1..J_m.
#[derive(Debug, Clone, Copy)]
pub struct StructureCheck {
    pub orthogonal_residual: f64,
    pub square_residual: f64,
    pub anticommute_residual: f64,
    pub ok: bool,
}

/// True iff J is orthogonal, J² = -I, and J anticommutes with every prefix
/// element, all within 1e-10.
pub fn is_complex_structure(j: &RMat, prefix: &[RMat]) -> StructureCheck {
    let n = j.nrows();
    assert_eq!(j.ncols(), n, "candidate must be square");
    for p in prefix {
        assert_eq!((p.nrows(), p.ncols()), (n, n), "prefix shape mismatch");
    }
    let eye = reye(n);
    let orthogonal_residual = max_abs_r(&(&j.t().dot(j) - &eye));
    let square_residual = max_abs_r(&(&j.dot(j) + &eye));
    let anticommute_residual = prefix
        .iter()
        .map(|p| max_abs_r(&(j.dot(p) + p.dot(j))))
        .fold(0.0, f64::max);
    let ok = orthogonal_residual < STRUCTURE_TOL
        && square_residual < STRUCTURE_TOL
        && anticommute_residual < STRUCTURE_TOL;
    StructureCheck {
        orthogonal_residual,
        square_residual,
        anticommute_residual,
        ok,
    }
}
