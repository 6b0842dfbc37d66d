//! Gapped interpolation h(k,θ) between a flattened family and a reference,
//! symmetric extension to the full θ circle by the discrete-symmetry partner
//! formulas, and the pump (loop) invariant.

use std::f64::consts::PI;

use ndarray::s;

use crate::error::{Error, Result};
use crate::invariants::{self, InvariantResult};
use crate::linalg::{dagger, eigh, eigvalsh, max_abs, CMat};
use crate::model::{FlattenedSample, KGrid};
use crate::symmetry::AZClass;
use crate::symmetry::AntiunitaryKind;
use crate::table::{self, InvariantGroup, TableIndex};

/// Endpoint slices must satisfy the symmetry within this residual before a
/// symmetric extension is attempted.
pub const ENDPOINT_TOL: f64 = 1e-8;
/// Default θ sampling of the half interval [0, π].
pub const DEFAULT_THETA_STEPS: usize = 64;
/// Default obstruction threshold for the pre-flattened path spectrum. The
/// linear path is sampled, not solved; a closing is only resolvable down to
/// roughly the sampling resolution, so this is deliberately coarse.
pub const DEFAULT_PATH_GAP_TOL: f64 = 0.05;

/// A sampled family h(k,θ): flattened matrices over the k-grid of the base,
/// at θ values covering either the half interval [0, π] or the full circle
/// [-π, π).
#[derive(Debug, Clone)]
pub struct InterpolationFamily {
    base: FlattenedSample,
    reference: FlattenedSample,
    theta: Vec<f64>,
    /// Indexed t_idx · grid.len() + lin.
    values: Vec<CMat>,
    min_gap: f64,
    full: bool,
    sym: Option<(AntiunitaryKind, CMat)>,
    extension_residual: f64,
}

impl InterpolationFamily {
    pub fn base(&self) -> &FlattenedSample {
        &self.base
    }

    pub fn reference(&self) -> &FlattenedSample {
        &self.reference
    }

    pub fn grid(&self) -> &KGrid {
        self.base.grid()
    }

    pub fn bands(&self) -> usize {
        self.base.bands()
    }

    pub fn filled(&self) -> usize {
        self.base.filled()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.theta
    }

    pub fn theta_len(&self) -> usize {
        self.theta.len()
    }

    pub fn value(&self, t_idx: usize, lin: usize) -> &CMat {
        &self.values[t_idx * self.grid().len() + lin]
    }

    /// Smallest |eigenvalue| seen along the pre-flattened interpolation path.
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    /// True when θ covers the full circle [-π, π).
    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn sym(&self) -> Option<(AntiunitaryKind, &CMat)> {
        self.sym.as_ref().map(|(k, u)| (*k, u))
    }

    /// Largest endpoint symmetry residual recorded by extend_symmetric
    /// (0 for half families).
    pub fn extension_residual(&self) -> f64 {
        self.extension_residual
    }

    /// (max‖h(k,0) - Q_base(k)‖, max‖h(k,±π) - Q_ref(k)‖) over the k-grid.
    pub fn endpoint_residuals(&self) -> (f64, f64) {
        let zero_idx = self
            .theta
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let pi_idx = self
            .theta
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1.abs() - PI)
                    .abs()
                    .partial_cmp(&(b.1.abs() - PI).abs())
                    .unwrap()
            })
            .map(|(i, _)| i)
            .unwrap();
        let mut at_zero: f64 = 0.0;
        let mut at_pi: f64 = 0.0;
        for lin in 0..self.grid().len() {
            at_zero = at_zero.max(max_abs(&(self.value(zero_idx, lin) - self.base.q(lin))));
            at_pi = at_pi.max(max_abs(&(self.value(pi_idx, lin) - self.reference.q(lin))));
        }
        (at_zero, at_pi)
    }

    /// Read an already-flattened 2D sample as a full pump family with the
    /// second axis as θ (cyclic order preserved; θ relabeled to [-π, π)).
    pub fn from_flattened_2d(sample: &FlattenedSample) -> Result<Self> {
        let grid2 = sample.grid();
        if grid2.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: grid2.dim(),
            });
        }
        let m = grid2.points_per_axis();
        let k_grid = KGrid::new(1, m)?;
        let mut values = Vec::with_capacity(m * m);
        let mut base_q = Vec::with_capacity(m);
        let mut ref_q = Vec::with_capacity(m);
        for iy in 0..m {
            for ix in 0..m {
                let q = sample.q(grid2.linear_index(&[ix, iy])).clone();
                if iy == 0 {
                    base_q.push(q.clone());
                }
                values.push(q);
            }
        }
        // The "reference" slice of a generic 2D sample is its iy = m/2 line;
        // it is recorded only so the accessors stay meaningful.
        for ix in 0..m {
            ref_q.push(sample.q(grid2.linear_index(&[ix, m / 2])).clone());
        }
        let theta: Vec<f64> = (0..m)
            .map(|iy| {
                let raw = grid2.axis_value(iy);
                if raw >= PI {
                    raw - 2.0 * PI
                } else {
                    raw
                }
            })
            .collect();
        let base =
            FlattenedSample::from_parts(k_grid.clone(), sample.bands(), sample.filled(), base_q);
        let reference = FlattenedSample::from_parts(k_grid, sample.bands(), sample.filled(), ref_q);
        Ok(Self {
            base,
            reference,
            theta,
            values,
            min_gap: 1.0,
            full: true,
            sym: None,
            extension_residual: 0.0,
        })
    }

    /// The same family traversed with θ → -θ (cyclic index reversal);
    /// reverses the pump orientation.
    pub fn theta_reversed(&self) -> Self {
        let nt = self.theta.len();
        let nk = self.grid().len();
        let mut values = Vec::with_capacity(self.values.len());
        for t in 0..nt {
            let src = (nt - t) % nt;
            for lin in 0..nk {
                values.push(self.value(src, lin).clone());
            }
        }
        Self {
            base: self.base.clone(),
            reference: self.reference.clone(),
            theta: self.theta.clone(),
            values,
            min_gap: self.min_gap,
            full: self.full,
            sym: self.sym.clone(),
            extension_residual: self.extension_residual,
        }
    }
}

/// Interpolate h(k, tπ) = flatten((1-t)·Q_base(k) + t·Q_ref(k)) over
/// t = 0..1 in `theta_steps` steps (θ ∈ [0, π], steps+1 slices). Records the
/// smallest pre-flattened |eigenvalue| along the path; a value at or below
/// gap_tol is an obstruction.
pub fn build_interpolation(
    base: &FlattenedSample,
    reference: &FlattenedSample,
    theta_steps: usize,
    gap_tol: f64,
) -> Result<InterpolationFamily> {
    if theta_steps == 0 {
        return Err(Error::InvalidModel("theta_steps must be at least 1".into()));
    }
    if base.grid() != reference.grid() {
        return Err(Error::InvalidModel(
            "base and reference samples use different k-grids".into(),
        ));
    }
    if base.bands() != reference.bands() {
        return Err(Error::DimensionMismatch {
            expected: base.bands(),
            got: reference.bands(),
        });
    }
    let grid = base.grid();
    let n = base.bands();
    let mut values = Vec::with_capacity((theta_steps + 1) * grid.len());
    let mut theta = Vec::with_capacity(theta_steps + 1);
    let mut min_gap = f64::INFINITY;
    for j in 0..=theta_steps {
        let t = j as f64 / theta_steps as f64;
        let th = t * PI;
        theta.push(th);
        for lin in 0..grid.len() {
            let path = base.q(lin).mapv(|z| z * (1.0 - t)) + reference.q(lin).mapv(|z| z * t);
            let (vals, vecs) = eigh(&path)?;
            let gap = vals.iter().fold(f64::INFINITY, |acc, &e| acc.min(e.abs()));
            if gap <= gap_tol {
                return Err(Error::Obstruction {
                    k: grid.point(lin),
                    theta: th,
                    gap,
                });
            }
            min_gap = min_gap.min(gap);
            let negatives = vals.iter().filter(|&&e| e < 0.0).count();
            if negatives != base.filled() {
                // A level crossed zero between samples: the path left the
                // gapped component even though no sampled gap fell below tol.
                return Err(Error::Obstruction {
                    k: grid.point(lin),
                    theta: th,
                    gap,
                });
            }
            // Q = I - 2·P_filled, built from the spectral projector.
            let filled_frame = vecs.slice(s![.., ..negatives]).to_owned();
            let q =
                crate::linalg::ceye(n) - filled_frame.dot(&dagger(&filled_frame)).mapv(|z| z * 2.0);
            values.push(q);
        }
    }
    Ok(InterpolationFamily {
        base: base.clone(),
        reference: reference.clone(),
        theta,
        values,
        min_gap,
        full: false,
        sym: None,
        extension_residual: 0.0,
    })
}

/// The printed partner map: σ·[U† m U]ᵀ with σ = -1 for C and +1 for T
/// (plain transpose, no conjugation).
pub fn partner_map(u: &CMat, kind: AntiunitaryKind, m: &CMat) -> CMat {
    let transformed = dagger(u).dot(m).dot(u);
    let transposed = transformed.t().to_owned();
    match kind {
        AntiunitaryKind::T => transposed,
        AntiunitaryKind::C => transposed.mapv(|z| -z),
    }
}

/// Gap between the printed transpose-form partner map and the conventional
/// conjugation form σ·U·conj(m)·U†. Zero (to rounding) for Hermitian m and
/// symmetric or antisymmetric unitary U.
pub fn partner_form_gap(u: &CMat, kind: AntiunitaryKind, m: &CMat) -> f64 {
    let printed = partner_map(u, kind, m);
    let sigma = kind.sigma();
    let conjugation = u
        .dot(&m.map(|z| z.conj()))
        .dot(&dagger(u))
        .mapv(|z| z * sigma);
    max_abs(&(&printed - &conjugation))
}

/// Extend a half family (θ ∈ [0, π]) to the full circle [-π, π) by the
/// symmetry partner formula h(k,θ) = σ·[U† h(-k,-θ) U]ᵀ. Both endpoints must
/// already satisfy the symmetry: the θ = 0 and θ = π slices are the fixed
/// points of the extension.
pub fn extend_symmetric(
    half: &InterpolationFamily,
    kind: AntiunitaryKind,
    u: &CMat,
) -> Result<InterpolationFamily> {
    if half.is_full() {
        return Err(Error::InvalidModel(
            "family already covers the full θ circle".into(),
        ));
    }
    crate::linalg::check_unitary(u, crate::symmetry::SPEC_UNITARY_TOL)?;
    let grid = half.grid();
    let steps = half.theta_len() - 1;
    let mut extension_residual: f64 = 0.0;
    for (t_idx, endpoint) in [(0usize, 0.0), (steps, PI)] {
        let mut worst: f64 = 0.0;
        for lin in 0..grid.len() {
            let partner = partner_map(u, kind, half.value(t_idx, grid.neg_index(lin)));
            worst = worst.max(max_abs(&(&partner - half.value(t_idx, lin))));
        }
        if worst >= ENDPOINT_TOL {
            return Err(Error::EndpointAsymmetry {
                endpoint,
                residual: worst,
            });
        }
        extension_residual = extension_residual.max(worst);
    }

    let nk = grid.len();
    let mut theta = Vec::with_capacity(2 * steps);
    let mut values = Vec::with_capacity(2 * steps * nk);
    for i in 0..2 * steps {
        let th = -PI + i as f64 * PI / steps as f64;
        theta.push(th);
        if i >= steps {
            // Non-negative θ: reuse the half-family slice.
            let src = i - steps;
            for lin in 0..nk {
                values.push(half.value(src, lin).clone());
            }
        } else {
            // Negative θ: partner of the slice at -θ = π - i·π/steps.
            let src = steps - i;
            for lin in 0..nk {
                values.push(partner_map(u, kind, half.value(src, grid.neg_index(lin))));
            }
        }
    }
    Ok(InterpolationFamily {
        base: half.base.clone(),
        reference: half.reference.clone(),
        theta,
        values,
        min_gap: half.min_gap,
        full: true,
        sym: Some((kind, u.clone())),
        extension_residual,
    })
}

/// Chern number of a full 1D-base family over the (k,θ) torus, oriented
/// k then θ right-handed.
pub fn pump_chern(family: &InterpolationFamily) -> Result<InvariantResult> {
    let grid = family.grid();
    if grid.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: grid.dim(),
        });
    }
    if !family.is_full() {
        return Err(Error::InvalidModel(
            "pump needs the full θ circle; extend the family first".into(),
        ));
    }
    let nk = grid.len();
    let nt = family.theta_len();
    let filled = family.filled();
    let mut frames = Vec::with_capacity(nk * nt);
    for t in 0..nt {
        for lin in 0..nk {
            let h = family.value(t, lin);
            let evals = eigvalsh(h)?;
            let gap = evals.iter().fold(f64::INFINITY, |acc, &e| acc.min(e.abs()));
            if gap < 1e-10 {
                return Err(Error::GapClosed {
                    k: vec![grid.point(lin)[0], family.theta[t]],
                    gap,
                });
            }
            let (_, vecs) = eigh(h)?;
            frames.push(vecs.slice(s![.., ..filled]).to_owned());
        }
    }
    invariants::chern_on_torus(&frames, nk, nt)
}

/// Group-level consistency of suspension and loop shifts at (az, d).
#[derive(Debug, Clone, Copy)]
pub struct SuspensionReport {
    /// The base classification cell (s, d) and its group.
    pub base: (TableIndex, InvariantGroup),
    /// The (1,1)-shifted cell (s+1, d+1); its group must equal the base's.
    pub shifted: (TableIndex, InvariantGroup),
    /// The cell (s, d+1) where the pump invariant of the suspended family
    /// lives.
    pub pump: (TableIndex, InvariantGroup),
    pub consistent: bool,
}

/// Check group_at(s, d) = group_at(s+1, d+1) and report the pump cell
/// (s, d+1) alongside.
pub fn suspension_consistency(az: &AZClass, d: i64) -> SuspensionReport {
    let family = az.family();
    let s = az.s() as i64;
    let base_idx = TableIndex::new(family, s, d);
    let shifted_idx = table::suspend_shift(table::loop_shift(base_idx));
    let pump_idx = table::suspend_shift(base_idx);
    let base_group = table::group_at(family, s, d);
    let shifted_group = table::group_at(family, shifted_idx.s() as i64, shifted_idx.d() as i64);
    let pump_group = table::group_at(family, pump_idx.s() as i64, pump_idx.d() as i64);
    SuspensionReport {
        base: (base_idx, base_group),
        shifted: (shifted_idx, shifted_group),
        pump: (pump_idx, pump_group),
        consistent: base_group == shifted_group,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::invariants::InvariantKind;
    use crate::linalg::{ceye, cmat, hermitian_residual, C64};
    use crate::model::DEFAULT_GAP_TOL;
    use crate::symmetry::AZLabel;

    fn sigma_x() -> CMat {
        cmat(&[
            &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        ])
    }

    fn sigma_z() -> CMat {
        cmat(&[
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            &[C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
        ])
    }

    fn ssh_sample(v: f64, w: f64, m: usize) -> FlattenedSample {
        let grid = KGrid::new(1, m).unwrap();
        builtin::ssh(v, w)
            .model()
            .flatten(&grid, DEFAULT_GAP_TOL)
            .unwrap()
    }

    fn constant_sample(q: CMat, m: usize) -> FlattenedSample {
        FlattenedSample::constant(KGrid::new(1, m).unwrap(), q).unwrap()
    }

    #[test]
    fn constant_family_is_flat() {
        let sample = constant_sample(sigma_z(), 16);
        let family = build_interpolation(&sample, &sample, 8, 0.05).unwrap();
        assert_eq!(family.theta_len(), 9);
        assert!((family.min_gap() - 1.0).abs() < 1e-12);
        for t in 0..family.theta_len() {
            for lin in 0..16 {
                assert!(max_abs(&(family.value(t, lin) - sample.q(lin))) < 1e-12);
            }
        }
        let (e0, e1) = family.endpoint_residuals();
        assert!(e0 < 1e-12 && e1 < 1e-12);
    }

    #[test]
    fn trivial_ssh_interpolates_to_sigma_x() {
        // SSH(1.5, 1.0) has winding 0, like the constant sigma_x reference.
        let base = ssh_sample(1.5, 1.0, 201);
        let reference = constant_sample(sigma_x(), 201);
        let family = build_interpolation(&base, &reference, 64, 0.05).unwrap();
        assert!(family.min_gap() > 0.2, "min gap {}", family.min_gap());
        let (e0, e1) = family.endpoint_residuals();
        assert!(e0 < 1e-10 && e1 < 1e-10);
        // Every slice is itself flattened: Hermitian with Q² = I.
        for t in [0, 32, 64] {
            for lin in [0, 50, 100] {
                let q = family.value(t, lin);
                assert!(hermitian_residual(q) < 1e-12);
                assert!(max_abs(&(&q.dot(q) - &ceye(2))) < 1e-10);
            }
        }
    }

    #[test]
    fn winding_mismatch_obstructs() {
        // SSH(0.5, 1.0) has winding 1; the constant reference has winding 0.
        let base = ssh_sample(0.5, 1.0, 201);
        let reference = constant_sample(sigma_x(), 201);
        match build_interpolation(&base, &reference, 64, 0.05) {
            Err(Error::Obstruction { theta, gap, .. }) => {
                assert!((0.0..=PI).contains(&theta));
                assert!(gap <= 0.05);
            }
            other => panic!("expected Obstruction, got {other:?}"),
        }
    }

    #[test]
    fn mismatched_inputs_are_rejected() {
        let base = ssh_sample(1.5, 1.0, 16);
        let reference = constant_sample(sigma_x(), 32);
        assert!(matches!(
            build_interpolation(&base, &reference, 8, 0.05),
            Err(Error::InvalidModel(_))
        ));
        assert!(matches!(
            build_interpolation(&base, &constant_sample(sigma_x(), 16), 0, 0.05),
            Err(Error::InvalidModel(_))
        ));
    }

    #[test]
    fn symmetric_extension_of_a_constant_family_is_constant() {
        // Q = sigma_z is particle-hole symmetric under U = sigma_x:
        // -[U† sigma_z U]ᵀ = sigma_z.
        let sample = constant_sample(sigma_z(), 16);
        let half = build_interpolation(&sample, &sample, 8, 0.05).unwrap();
        let full = extend_symmetric(&half, AntiunitaryKind::C, &sigma_x()).unwrap();
        assert!(full.is_full());
        assert_eq!(full.theta_len(), 16);
        assert!(full.extension_residual() < 1e-12);
        for t in 0..full.theta_len() {
            for lin in 0..16 {
                assert!(max_abs(&(full.value(t, lin) - sample.q(lin))) < 1e-12);
            }
        }
    }

    #[test]
    fn ssh_extension_satisfies_the_partner_relation_everywhere() {
        let base = ssh_sample(1.5, 1.0, 64);
        // sigma_x is PH-symmetric under U = sigma_z: -[sigma_z sigma_x sigma_z]ᵀ = sigma_x.
        let reference = constant_sample(sigma_x(), 64);
        let half = build_interpolation(&base, &reference, 32, 0.05).unwrap();
        let full = extend_symmetric(&half, AntiunitaryKind::C, &sigma_z()).unwrap();
        let grid = full.grid();
        let nt = full.theta_len();
        let mut worst: f64 = 0.0;
        for t in 0..nt {
            // -θ index: θ_i = -π + iπ/steps maps to index (nt - i) mod nt.
            let t_neg = (nt - t) % nt;
            for lin in 0..grid.len() {
                let partner = partner_map(
                    &sigma_z(),
                    AntiunitaryKind::C,
                    full.value(t_neg, grid.neg_index(lin)),
                );
                worst = worst.max(max_abs(&(&partner - full.value(t, lin))));
            }
        }
        assert!(worst < 1e-12, "partner relation residual {worst}");
    }

    #[test]
    fn asymmetric_reference_is_rejected() {
        // SSH(1.5, 1) is PH-symmetric under sigma_z, but sigma_z itself
        // (as reference) anticommutes... -[sigma_z·sigma_z·sigma_z]ᵀ = -sigma_z ≠ sigma_z.
        let base = ssh_sample(1.5, 1.0, 64);
        let reference = constant_sample(sigma_z(), 64);
        let half = build_interpolation(&base, &reference, 32, 0.4).unwrap();
        match extend_symmetric(&half, AntiunitaryKind::C, &sigma_z()) {
            Err(Error::EndpointAsymmetry { endpoint, residual }) => {
                assert_eq!(endpoint, PI);
                assert!(residual > 1.0);
            }
            other => panic!("expected EndpointAsymmetry, got {other:?}"),
        }
    }

    #[test]
    fn partner_forms_agree_for_hermitian_input() {
        let h = cmat(&[
            &[C64::new(0.3, 0.0), C64::new(0.2, -0.7)],
            &[C64::new(0.2, 0.7), C64::new(-0.3, 0.0)],
        ]);
        for kind in [AntiunitaryKind::T, AntiunitaryKind::C] {
            // sigma_x is symmetric, epsilon = i·sigma_y is antisymmetric.
            assert!(partner_form_gap(&sigma_x(), kind, &h) < 1e-14);
            let eps = cmat(&[
                &[C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
                &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            ]);
            assert!(partner_form_gap(&eps, kind, &h) < 1e-14);
        }
    }

    #[test]
    fn constant_family_pumps_zero() {
        let sample = constant_sample(sigma_z(), 16);
        let half = build_interpolation(&sample, &sample, 8, 0.05).unwrap();
        let full = extend_symmetric(&half, AntiunitaryKind::C, &sigma_x()).unwrap();
        let r = pump_chern(&full).unwrap();
        assert_eq!((r.kind, r.value), (InvariantKind::Chern, 0));
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn qwz_read_as_pump_reproduces_its_chern_number() {
        let grid = KGrid::new(2, 31).unwrap();
        let sample = builtin::qwz(1.0)
            .model()
            .flatten(&grid, DEFAULT_GAP_TOL)
            .unwrap();
        let family = InterpolationFamily::from_flattened_2d(&sample).unwrap();
        let r = pump_chern(&family).unwrap();
        assert_eq!(r.value, 1);
        let reversed = family.theta_reversed();
        let r_rev = pump_chern(&reversed).unwrap();
        assert_eq!(r_rev.value, -1);
    }

    #[test]
    fn pump_requires_a_full_family() {
        let sample = constant_sample(sigma_z(), 16);
        let half = build_interpolation(&sample, &sample, 8, 0.05).unwrap();
        assert!(matches!(pump_chern(&half), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn consistency_reports_match_the_table() {
        let a = AZClass {
            label: AZLabel::A,
            t_sq: None,
            c_sq: None,
        };
        let report = suspension_consistency(&a, 1);
        assert!(report.consistent);
        assert_eq!(report.pump.1, InvariantGroup::Z);

        let d = AZClass {
            label: AZLabel::D,
            t_sq: None,
            c_sq: Some(1),
        };
        let report = suspension_consistency(&d, 0);
        assert!(report.consistent);
        assert_eq!(report.pump.1, InvariantGroup::Z2);

        let aiii = AZClass {
            label: AZLabel::AIII,
            t_sq: None,
            c_sq: None,
        };
        let report = suspension_consistency(&aiii, 0);
        assert!(report.consistent);
        assert_eq!(report.pump.1, InvariantGroup::Z);

        // (1,1) periodicity makes every cell consistent; spot-check a Z2 one.
        let aii = AZClass {
            label: AZLabel::AII,
            t_sq: Some(-1),
            c_sq: None,
        };
        assert!(suspension_consistency(&aii, 2).consistent);
    }
}
