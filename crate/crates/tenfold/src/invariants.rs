//! Topological invariants realizing the Z / Z2 table entries at desk scale:
//! lattice Chern number, chiral winding number, Majorana Z2 via Pfaffians,
//! Kane-Mele Z2 via Wannier-center flow, and the 0D negative-eigenvalue count.

use std::f64::consts::PI;
use std::fmt;

use ndarray::s;
use ndarray_linalg::SVD;

use crate::error::{Error, Result};
use crate::linalg::{
    ceye, dagger, det, eigh, eigvalsh, hermitian_residual, imag_part, max_abs, max_abs_r,
    real_part, takagi_symmetric_unitary, unitarize, unitary_eigenphases, CMat, RMat, C64,
};
use crate::model::{BlochModel, FlattenedSample, KGrid};
use crate::symmetry::{self, AZClass, AZLabel, AntiunitaryKind, SymmetrySpec};
use crate::table::{self, InvariantGroup};

/// Link-overlap determinants below this modulus abort with SingularLink.
pub const LINK_DET_TOL: f64 = 1e-10;
/// Eigenvalues below this magnitude count as zero (gapless) in 0D.
pub const ZERO_EIG_TOL: f64 = 1e-10;
/// Antisymmetry acceptance for Pfaffian inputs.
pub const ANTISYMMETRY_TOL: f64 = 1e-10;
/// A winding phase step at or beyond pi·(1 - 1e-9) means the branch cut was
/// reached; the grid is too coarse to track the phase.
pub const BRANCH_GUARD: f64 = PI * (1.0 - 1e-9);
/// Smallest acceptable circular gap in a Wilson-loop phase spectrum.
pub const MIN_WILSON_GAP: f64 = 1e-6;

/// Which invariant a result carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InvariantKind {
    Chern,
    Winding,
    MajoranaZ2,
    KaneMeleZ2,
    NegativeCount,
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InvariantKind::Chern => "chern",
            InvariantKind::Winding => "winding",
            InvariantKind::MajoranaZ2 => "majorana_z2",
            InvariantKind::KaneMeleZ2 => "kane_mele_z2",
            InvariantKind::NegativeCount => "negative_count",
        };
        write!(f, "{s}")
    }
}

/// An integer invariant with the distance from the raw computed value to the
/// reported integer (majorana_z2 is ±1, kane_mele_z2 is 0/1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantResult {
    pub kind: InvariantKind,
    pub value: i64,
    pub residual: f64,
}

/// Dispatch outcome: a computed invariant, or the marker that the expected
/// group is trivial so nothing is computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InvariantOutcome {
    Computed(InvariantResult),
    NoInvariant,
}

/// Filled-band frames (columns spanning the Q = -1 eigenspace) at every grid
/// point of a flattened sample.
pub fn filled_frames(sample: &FlattenedSample) -> Result<Vec<CMat>> {
    let filled = sample.filled();
    let mut frames = Vec::with_capacity(sample.grid().len());
    for lin in 0..sample.grid().len() {
        let (_, vecs) = eigh(sample.q(lin))?;
        frames.push(vecs.slice(s![.., ..filled]).to_owned());
    }
    Ok(frames)
}

/// Lattice Chern number of the filled bands over a 2D grid: sum over
/// plaquettes of the principal-branch argument of the link-determinant
/// product, oriented (k_x then k_y) right-handed.
pub fn chern(sample: &FlattenedSample) -> Result<InvariantResult> {
    if sample.grid().dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: sample.grid().dim(),
        });
    }
    let frames = filled_frames(sample)?;
    chern_from_frames(&frames, sample.grid())
}

/// Chern number from explicit filled-band frames (one n×filled matrix per
/// grid point). Exposed separately so gauge transformations can be applied
/// to the frames directly.
pub fn chern_from_frames(frames: &[CMat], grid: &KGrid) -> Result<InvariantResult> {
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: grid.dim(),
        });
    }
    let m = grid.points_per_axis();
    chern_on_torus(frames, m, m)
}

/// Core lattice field-strength sum on an nx×ny torus; frames are indexed
/// lin = iy·nx + ix (first axis fastest), plaquettes oriented first-axis
/// then second-axis right-handed.
pub fn chern_on_torus(frames: &[CMat], nx: usize, ny: usize) -> Result<InvariantResult> {
    if frames.len() != nx * ny {
        return Err(Error::DimensionMismatch {
            expected: nx * ny,
            got: frames.len(),
        });
    }
    let idx = |ix: usize, iy: usize| iy * nx + ix;
    let link = |a: usize, b: usize| -> Result<C64> { det(&dagger(&frames[a]).dot(&frames[b])) };
    let mut ux = vec![C64::new(0.0, 0.0); nx * ny];
    let mut uy = vec![C64::new(0.0, 0.0); nx * ny];
    for iy in 0..ny {
        for ix in 0..nx {
            let here = idx(ix, iy);
            let lx = link(here, idx((ix + 1) % nx, iy))?;
            if lx.norm() < LINK_DET_TOL {
                return Err(Error::SingularLink {
                    ix,
                    iy,
                    modulus: lx.norm(),
                });
            }
            let ly = link(here, idx(ix, (iy + 1) % ny))?;
            if ly.norm() < LINK_DET_TOL {
                return Err(Error::SingularLink {
                    ix,
                    iy,
                    modulus: ly.norm(),
                });
            }
            ux[here] = lx;
            uy[here] = ly;
        }
    }
    let mut total = 0.0;
    for iy in 0..ny {
        for ix in 0..nx {
            let here = idx(ix, iy);
            let right = idx((ix + 1) % nx, iy);
            let up = idx(ix, (iy + 1) % ny);
            let plaquette = ux[here] * uy[right] * ux[up].conj() * uy[here].conj();
            total += plaquette.arg();
        }
    }
    let raw = total / (2.0 * PI);
    let value = raw.round();
    Ok(InvariantResult {
        kind: InvariantKind::Chern,
        value: value as i64,
        residual: (raw - value).abs(),
    })
}

/// Split the chiral matrix into its +1 and -1 eigenframes (in that order).
/// Accepts any unitary whose square is a global phase; the rephased matrix
/// must be Hermitian with balanced eigenvalue counts.
pub fn chiral_frames(u_s: &CMat) -> Result<(CMat, CMat)> {
    crate::linalg::check_unitary(u_s, symmetry::SPEC_UNITARY_TOL)?;
    let n = u_s.nrows();
    let s2 = u_s.dot(u_s);
    let phase2 = s2[[0, 0]];
    if (phase2.norm() - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidRepresentation {
            residual: (phase2.norm() - 1.0).abs(),
        });
    }
    let phase2 = phase2 / phase2.norm();
    let scaled_eye = ceye(n).mapv(|z| z * phase2);
    let resid = max_abs(&(&s2 - &scaled_eye));
    if resid > 1e-8 {
        return Err(Error::InvalidRepresentation { residual: resid });
    }
    // Rephase so the matrix squares to I exactly, hence is Hermitian unitary.
    let alpha = phase2.arg() / 2.0;
    let r = u_s.mapv(|z| z * C64::from_polar(1.0, -alpha));
    let herm = hermitian_residual(&r);
    if herm > 1e-8 {
        return Err(Error::InvalidRepresentation { residual: herm });
    }
    let (vals, vecs) = eigh(&r)?;
    let minus = vals.iter().filter(|&&v| v < 0.0).count();
    let plus = n - minus;
    if plus != minus {
        return Err(Error::UnequalChiralBlocks { plus, minus });
    }
    let v_minus = vecs.slice(s![.., ..minus]).to_owned();
    let v_plus = vecs.slice(s![.., minus..]).to_owned();
    Ok((v_plus, v_minus))
}

/// Chiral winding number over a 1D loop: branch-continuous accumulation of
/// arg det q(k) with q = V₊† H V₋ in the chiral eigenbasis.
pub fn winding(model: &BlochModel, u_s: &CMat, grid: &KGrid, tol: f64) -> Result<InvariantResult> {
    if model.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: model.dim(),
        });
    }
    let residual = symmetry::residual_chiral(model, u_s, grid)?;
    if residual >= tol {
        return Err(Error::ChiralViolation { residual, tol });
    }
    let (v_plus, v_minus) = chiral_frames(u_s)?;
    let m = grid.len();
    let mut dets = Vec::with_capacity(m);
    for lin in 0..m {
        let h = model.eval(&grid.point(lin))?;
        let q = dagger(&v_plus).dot(&h).dot(&v_minus);
        let d = det(&q)?;
        if d.norm() < LINK_DET_TOL {
            let (_, sv, _) = q.svd(false, false)?;
            let gap = sv.iter().copied().fold(f64::INFINITY, f64::min);
            return Err(Error::GapClosed {
                k: grid.point(lin),
                gap,
            });
        }
        dets.push(d);
    }
    let mut total = 0.0;
    for j in 0..m {
        let delta = (dets[(j + 1) % m] / dets[j]).arg();
        if delta.abs() >= BRANCH_GUARD {
            return Err(Error::BranchTooCoarse { segment: j, delta });
        }
        total += delta;
    }
    let raw = total / (2.0 * PI);
    let value = raw.round();
    Ok(InvariantResult {
        kind: InvariantKind::Winding,
        value: value as i64,
        residual: (raw - value).abs(),
    })
}

/// Pfaffian of a real antisymmetric matrix by skew-symmetric (Parlett-Reid)
/// elimination to tridiagonal form with pivot-product sign tracking.
/// Odd dimension returns 0 by definition.
pub fn pfaffian(a: &RMat) -> Result<f64> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.ncols(),
        });
    }
    let residual = max_abs_r(&(a + &a.t()));
    if residual >= ANTISYMMETRY_TOL {
        return Err(Error::NotAntisymmetric { residual });
    }
    if n % 2 == 1 {
        return Ok(0.0);
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut m = a.clone();
    let mut pf = 1.0;
    for k in (0..n - 1).step_by(2) {
        // Pivot: largest |entry| in column k below the diagonal pair.
        let mut p = k + 1;
        for j in k + 2..n {
            if m[[j, k]].abs() > m[[p, k]].abs() {
                p = j;
            }
        }
        if m[[p, k]] == 0.0 {
            return Ok(0.0);
        }
        if p != k + 1 {
            for c in 0..n {
                m.swap([k + 1, c], [p, c]);
            }
            for r in 0..n {
                m.swap([r, k + 1], [r, p]);
            }
            pf = -pf;
        }
        pf *= m[[k, k + 1]];
        let pivot = m[[k + 1, k]];
        if k + 2 < n {
            // Congruence eliminating column k below k+1 (and row k by
            // skewness); Pf is preserved because the elementary factor has
            // unit determinant.
            let tau: Vec<f64> = (k + 2..n).map(|i| m[[i, k]] / pivot).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| m[[i, k + 1]]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    m[[i, j]] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
    }
    Ok(pf)
}

/// Majorana Z2 index of a gapped 1D particle-hole-symmetric model with
/// C² = +1: sign(Pf[A(0)]·Pf[A(π)]) in the Majorana basis where iH(k*) is
/// real antisymmetric at the invariant momenta.
pub fn majorana_z2(
    model: &BlochModel,
    u_c: &CMat,
    grid: &KGrid,
    tol: f64,
    gap_tol: f64,
) -> Result<InvariantResult> {
    if model.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: model.dim(),
        });
    }
    let residual = symmetry::residual_antiunitary(model, u_c, AntiunitaryKind::C, grid)?;
    if residual >= tol {
        return Err(Error::SymmetryViolation {
            kind: "C",
            residual,
            tol,
        });
    }
    if symmetry::square_sign(u_c)? != 1 {
        return Err(Error::Unsupported(
            "majorana_z2 needs a particle-hole symmetry with C² = +1".into(),
        ));
    }
    // C² = +1 makes U_C symmetric unitary, so U_C = V·Vᵀ (Takagi); in the
    // basis W = V† the Bloch matrix at an invariant momentum is purely
    // imaginary: H' = V†HV with conj(H') = -H'.
    let v = takagi_symmetric_unitary(u_c)?;
    let vd = dagger(&v);
    let mut product = 1.0;
    for k_star in [0.0, PI] {
        let h = model.eval(&[k_star])?;
        let evals = eigvalsh(&h)?;
        let gap = evals.iter().fold(f64::INFINITY, |acc, &e| acc.min(e.abs()));
        if gap <= gap_tol {
            return Err(Error::GapClosed {
                k: vec![k_star],
                gap,
            });
        }
        let h_maj = vd.dot(&h).dot(&v);
        let realness = max_abs_r(&real_part(&h_maj));
        if realness >= tol {
            return Err(Error::SymmetryViolation {
                kind: "C",
                residual: realness,
                tol,
            });
        }
        let a = imag_part(&h_maj);
        product *= pfaffian(&a)?;
    }
    if product == 0.0 {
        return Err(Error::GapClosed {
            k: vec![0.0],
            gap: 0.0,
        });
    }
    Ok(InvariantResult {
        kind: InvariantKind::MajoranaZ2,
        value: if product > 0.0 { 1 } else { -1 },
        residual: 0.0,
    })
}

fn circular_phases(w: &CMat) -> Result<Vec<f64>> {
    let mut phases: Vec<f64> = unitary_eigenphases(w)?
        .into_iter()
        .map(|p| p.rem_euclid(2.0 * PI))
        .collect();
    phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(phases)
}

/// Center and width of the largest circular gap of sorted phases in [0, 2π).
fn largest_gap(phases: &[f64]) -> (f64, f64) {
    let n = phases.len();
    let mut best_width = -1.0;
    let mut best_center = 0.0;
    for j in 0..n {
        let a = phases[j];
        let b = if j + 1 < n {
            phases[j + 1]
        } else {
            phases[0] + 2.0 * PI
        };
        let width = b - a;
        if width > best_width {
            best_width = width;
            best_center = (a + b) / 2.0 % (2.0 * PI);
        }
    }
    (best_center, best_width)
}

/// Kane-Mele Z2 via Wannier-charge-center flow: Wilson-loop eigenphases over
/// k_x for each k_y line in half the Brillouin zone; the invariant is the
/// parity of crossings of the largest-gap line by the phase bands between
/// k_y = 0 and k_y = π.
pub fn kane_mele_z2(sample: &FlattenedSample, u_t: &CMat, tol: f64) -> Result<InvariantResult> {
    let grid = sample.grid();
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: grid.dim(),
        });
    }
    if u_t.nrows() != sample.bands() || u_t.ncols() != sample.bands() {
        return Err(Error::DimensionMismatch {
            expected: sample.bands(),
            got: u_t.nrows().max(u_t.ncols()),
        });
    }
    if symmetry::square_sign(u_t)? != -1 {
        return Err(Error::Unsupported(
            "kane_mele_z2 needs a time-reversal symmetry with T² = -1".into(),
        ));
    }
    if !sample.filled().is_multiple_of(2) {
        return Err(Error::Unsupported(format!(
            "kane_mele_z2 needs Kramers pairs: filled count {} is odd",
            sample.filled()
        )));
    }
    if !grid.is_even() {
        return Err(Error::Unsupported(format!(
            "kane_mele_z2 needs an even grid so the k_y lines include π; got m={}",
            grid.points_per_axis()
        )));
    }
    // Time reversal must hold on the flattened sample itself.
    let ut_d = dagger(u_t);
    let mut worst: f64 = 0.0;
    for lin in 0..grid.len() {
        let q_neg = sample.q(grid.neg_index(lin));
        let mapped = u_t.dot(&q_neg.map(|z| z.conj())).dot(&ut_d);
        worst = worst.max(max_abs(&(&mapped - sample.q(lin))));
    }
    if worst >= tol {
        return Err(Error::SymmetryViolation {
            kind: "T",
            residual: worst,
            tol,
        });
    }

    let frames = filled_frames(sample)?;
    let m = grid.points_per_axis();
    let lines = m / 2 + 1;
    let filled = sample.filled();

    let mut line_phases = Vec::with_capacity(lines);
    let mut gap_centers = Vec::with_capacity(lines);
    for iy in 0..lines {
        let mut w = ceye(filled);
        for ix in 0..m {
            let here = grid.linear_index(&[ix, iy]);
            let next = grid.linear_index(&[(ix + 1) % m, iy]);
            let overlap = dagger(&frames[here]).dot(&frames[next]);
            let (_, sv, _) = overlap.svd(false, false)?;
            let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
            if smin < LINK_DET_TOL {
                return Err(Error::SingularLink {
                    ix,
                    iy,
                    modulus: smin,
                });
            }
            w = w.dot(&unitarize(&overlap)?);
        }
        let phases = circular_phases(&w)?;
        let (center, width) = largest_gap(&phases);
        if width < MIN_WILSON_GAP {
            return Err(Error::DegenerateWilsonPhases {
                line: iy,
                gap: width,
            });
        }
        line_phases.push(phases);
        gap_centers.push(center);
    }

    // Count phases of each next line inside the positive arc swept by the
    // gap center; the parity is the invariant.
    let two_pi = 2.0 * PI;
    let mut crossings = 0usize;
    for i in 0..lines - 1 {
        let g0 = gap_centers[i];
        let span = (gap_centers[i + 1] - g0).rem_euclid(two_pi);
        for &x in &line_phases[i + 1] {
            if (x - g0).rem_euclid(two_pi) < span {
                crossings += 1;
            }
        }
    }
    Ok(InvariantResult {
        kind: InvariantKind::KaneMeleZ2,
        value: (crossings % 2) as i64,
        residual: 0.0,
    })
}

/// Number of negative eigenvalues of a 0D Hermitian matrix.
pub fn negative_count(h: &CMat) -> Result<InvariantResult> {
    let herm = hermitian_residual(h);
    if herm >= 1e-10 {
        return Err(Error::NonHermitian {
            r: vec![],
            residual: herm,
        });
    }
    let evals = eigvalsh(h)?;
    let gap = evals.iter().fold(f64::INFINITY, |acc, &e| acc.min(e.abs()));
    if gap < ZERO_EIG_TOL {
        return Err(Error::GapClosed { k: vec![], gap });
    }
    let count = evals.iter().filter(|&&e| e < 0.0).count();
    Ok(InvariantResult {
        kind: InvariantKind::NegativeCount,
        value: count as i64,
        residual: 0.0,
    })
}

fn chiral_matrix(spec: &SymmetrySpec, label: AZLabel) -> Result<CMat> {
    if let Some(u_s) = spec.chiral() {
        return Ok(u_s.clone());
    }
    if let (Some(u_t), Some(u_c)) = (spec.tr(), spec.ph()) {
        return Ok(u_t.dot(&u_c.map(|z| z.conj())));
    }
    Err(Error::Unsupported(format!(
        "class {label} at d=1 needs a chiral matrix (supplied or implied by T and C)"
    )))
}

/// Dispatch on (class, d, group_at): Z at d=0 → negative_count; chiral Z at
/// d=1 → winding; Z at d=2 → chern; Z2 at d=1 class D → majorana_z2; Z2 at
/// d=2 class AII → kane_mele_z2; trivial group → NoInvariant. Anything else
/// is Unsupported with the expected group named.
pub fn invariant_for(
    model: &BlochModel,
    spec: &SymmetrySpec,
    az: &AZClass,
    d: i64,
    grid: &KGrid,
    tol: f64,
    gap_tol: f64,
) -> Result<InvariantOutcome> {
    let group = table::group_at(az.family(), az.s() as i64, d);
    let computed = match (group, d) {
        (InvariantGroup::Zero, _) => return Ok(InvariantOutcome::NoInvariant),
        (InvariantGroup::Z, 0) => negative_count(&model.eval(&[])?)?,
        (InvariantGroup::Z, 1) if az.label.is_chiral() => {
            let u_s = chiral_matrix(spec, az.label)?;
            winding(model, &u_s, grid, tol)?
        }
        (InvariantGroup::Z, 2) => chern(&model.flatten(grid, gap_tol)?)?,
        (InvariantGroup::Z2, 1) if az.label == AZLabel::D => {
            let u_c = spec.ph().ok_or_else(|| {
                Error::Unsupported("majorana_z2 needs the particle-hole matrix".into())
            })?;
            majorana_z2(model, u_c, grid, tol, gap_tol)?
        }
        (InvariantGroup::Z2, 2) if az.label == AZLabel::AII => {
            let u_t = spec.tr().ok_or_else(|| {
                Error::Unsupported("kane_mele_z2 needs the time-reversal matrix".into())
            })?;
            kane_mele_z2(&model.flatten(grid, gap_tol)?, u_t, tol)?
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "no invariant routine for class {} at d={d}; expected group {group}",
                az.label
            )))
        }
    };
    Ok(InvariantOutcome::Computed(computed))
}
