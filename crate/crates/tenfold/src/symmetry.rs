//! Verification of candidate time-reversal (T), particle-hole (C), and chiral
//! (S) symmetries of a BlochModel, and assignment of the Altland-Zirnbauer
//! class and symmetry index s.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{check_unitary, dagger, max_abs, CMat};
use crate::model::{BlochModel, KGrid};
use crate::table::{self, InvariantGroup};

/// Unitarity tolerance for supplied symmetry matrices.
pub const SPEC_UNITARY_TOL: f64 = 1e-12;
/// Tolerance for recognizing U·conj(U) = ±I.
pub const SQUARE_TOL: f64 = 1e-10;
/// Default residual tolerance for accepting a symmetry (absolute, max-norm).
pub const DEFAULT_CLASS_TOL: f64 = 1e-8;
/// The implied chiral product of two accepted antiunitaries is allowed this
/// multiple of tol before being declared inconsistent.
const IMPLIED_CHIRAL_FACTOR: f64 = 10.0;

/// Symmetry family of an Altland-Zirnbauer class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Complex,
    Real,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Complex => write!(f, "complex"),
            Family::Real => write!(f, "real"),
        }
    }
}

/// Cartan label of the ten Altland-Zirnbauer classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AZLabel {
    A,
    AIII,
    AI,
    BDI,
    D,
    DIII,
    AII,
    CII,
    C,
    CI,
}

impl AZLabel {
    pub const ALL: [AZLabel; 10] = [
        AZLabel::A,
        AZLabel::AIII,
        AZLabel::AI,
        AZLabel::BDI,
        AZLabel::D,
        AZLabel::DIII,
        AZLabel::AII,
        AZLabel::CII,
        AZLabel::C,
        AZLabel::CI,
    ];

    pub fn family(self) -> Family {
        match self {
            AZLabel::A | AZLabel::AIII => Family::Complex,
            _ => Family::Real,
        }
    }

    /// Symmetry index s: row order of the classification table within each
    /// family (complex A=0, AIII=1; real AI=0 through CI=7).
    pub fn s(self) -> u8 {
        match self {
            AZLabel::A => 0,
            AZLabel::AIII => 1,
            AZLabel::AI => 0,
            AZLabel::BDI => 1,
            AZLabel::D => 2,
            AZLabel::DIII => 3,
            AZLabel::AII => 4,
            AZLabel::CII => 5,
            AZLabel::C => 6,
            AZLabel::CI => 7,
        }
    }

    pub fn from_family_s(family: Family, s: u8) -> Option<AZLabel> {
        AZLabel::ALL
            .iter()
            .copied()
            .find(|l| l.family() == family && l.s() == s)
    }

    /// Classes with a chiral symmetry (T·C product or standalone S).
    pub fn is_chiral(self) -> bool {
        matches!(
            self,
            AZLabel::AIII | AZLabel::BDI | AZLabel::DIII | AZLabel::CII | AZLabel::CI
        )
    }
}

impl fmt::Display for AZLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AZLabel::A => "A",
            AZLabel::AIII => "AIII",
            AZLabel::AI => "AI",
            AZLabel::BDI => "BDI",
            AZLabel::D => "D",
            AZLabel::DIII => "DIII",
            AZLabel::AII => "AII",
            AZLabel::CII => "CII",
            AZLabel::C => "C",
            AZLabel::CI => "CI",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for AZLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AZLabel::ALL
            .iter()
            .copied()
            .find(|l| l.to_string() == s)
            .ok_or_else(|| Error::InvalidModel(format!("unknown class label {s:?}")))
    }
}

/// Which antiunitary condition to test: T commutes with H (sigma = +1),
/// C anticommutes (sigma = -1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AntiunitaryKind {
    T,
    C,
}

impl AntiunitaryKind {
    pub fn sigma(self) -> f64 {
        match self {
            AntiunitaryKind::T => 1.0,
            AntiunitaryKind::C => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AntiunitaryKind::T => "T",
            AntiunitaryKind::C => "C",
        }
    }
}

/// Candidate symmetry representations. Antiunitaries act as U followed by
/// complex conjugation; the chiral matrix acts unitarily.
#[derive(Debug, Clone, Default)]
pub struct SymmetrySpec {
    tr: Option<CMat>,
    ph: Option<CMat>,
    chiral: Option<CMat>,
}

impl SymmetrySpec {
    pub fn new(tr: Option<CMat>, ph: Option<CMat>, chiral: Option<CMat>) -> Self {
        Self { tr, ph, chiral }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn tr(&self) -> Option<&CMat> {
        self.tr.as_ref()
    }

    pub fn ph(&self) -> Option<&CMat> {
        self.ph.as_ref()
    }

    pub fn chiral(&self) -> Option<&CMat> {
        self.chiral.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.tr.is_none() && self.ph.is_none() && self.chiral.is_none()
    }

    /// Check shapes and unitarity (within 1e-12) of every supplied matrix.
    pub fn validate(&self, bands: usize) -> Result<()> {
        for u in [&self.tr, &self.ph, &self.chiral].into_iter().flatten() {
            if u.nrows() != bands || u.ncols() != bands {
                return Err(Error::DimensionMismatch {
                    expected: bands,
                    got: u.nrows().max(u.ncols()),
                });
            }
            check_unitary(u, SPEC_UNITARY_TOL)?;
        }
        Ok(())
    }
}

fn check_shape(model: &BlochModel, u: &CMat, grid: &KGrid) -> Result<()> {
    if grid.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: grid.dim(),
        });
    }
    if u.nrows() != model.bands() || u.ncols() != model.bands() {
        return Err(Error::DimensionMismatch {
            expected: model.bands(),
            got: u.nrows().max(u.ncols()),
        });
    }
    check_unitary(u, SPEC_UNITARY_TOL)
}

/// Max over the grid of the antiunitary symmetry residual
/// ‖U·conj(H(-k))·U† - sigma·H(k)‖_max.
pub fn residual_antiunitary(
    model: &BlochModel,
    u: &CMat,
    kind: AntiunitaryKind,
    grid: &KGrid,
) -> Result<f64> {
    check_shape(model, u, grid)?;
    let sigma = kind.sigma();
    let ud = dagger(u);
    let mut worst: f64 = 0.0;
    for lin in 0..grid.len() {
        let h = model.eval(&grid.point(lin))?;
        let h_neg = model.eval(&grid.point(grid.neg_index(lin)))?;
        let lhs = u.dot(&h_neg.map(|z| z.conj())).dot(&ud);
        let diff = &lhs - &h.map(|z| z * sigma);
        worst = worst.max(max_abs(&diff));
    }
    Ok(worst)
}

/// Max over the grid of the chiral residual ‖U_S·H(k)·U_S† + H(k)‖_max.
pub fn residual_chiral(model: &BlochModel, u_s: &CMat, grid: &KGrid) -> Result<f64> {
    check_shape(model, u_s, grid)?;
    let ud = dagger(u_s);
    let mut worst: f64 = 0.0;
    for lin in 0..grid.len() {
        let h = model.eval(&grid.point(lin))?;
        let diff = &u_s.dot(&h).dot(&ud) + &h;
        worst = worst.max(max_abs(&diff));
    }
    Ok(worst)
}

/// Sign of the antiunitary square: U·conj(U) = ±I within 1e-10.
pub fn square_sign(u: &CMat) -> Result<i8> {
    check_unitary(u, SPEC_UNITARY_TOL)?;
    let p = u.dot(&u.map(|z| z.conj()));
    let eye = crate::linalg::ceye(p.nrows());
    let plus = max_abs(&(&p - &eye));
    let minus = max_abs(&(&p + &eye));
    if plus < SQUARE_TOL {
        Ok(1)
    } else if minus < SQUARE_TOL {
        Ok(-1)
    } else {
        Err(Error::InvalidRepresentation {
            residual: plus.min(minus),
        })
    }
}

/// Outcome of one symmetry residual check.
#[derive(Debug, Clone, Copy)]
pub struct SymmetryCheck {
    pub residual: f64,
    pub accepted: bool,
    /// Squared sign of the antiunitary (absent for chiral checks).
    pub square: Option<i8>,
}

/// The assigned class: Cartan label plus the antiunitary squared signs that
/// produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AZClass {
    pub label: AZLabel,
    pub t_sq: Option<i8>,
    pub c_sq: Option<i8>,
}

impl AZClass {
    pub fn family(&self) -> Family {
        self.label.family()
    }

    pub fn s(&self) -> u8 {
        self.label.s()
    }
}

/// Full classification report: the class plus per-symmetry residuals, so
/// rejected (treated-as-absent) symmetries remain visible.
#[derive(Debug, Clone)]
pub struct Classification {
    pub class: AZClass,
    pub tr: Option<SymmetryCheck>,
    pub ph: Option<SymmetryCheck>,
    pub chiral: Option<SymmetryCheck>,
    /// True when the chiral check came from the product U_T·conj(U_C)
    /// rather than a supplied matrix.
    pub chiral_implied: bool,
}

fn label_from_pattern(t_sq: Option<i8>, c_sq: Option<i8>, chiral: bool) -> Result<AZLabel> {
    match (t_sq, c_sq, chiral) {
        (None, None, false) => Ok(AZLabel::A),
        (None, None, true) => Ok(AZLabel::AIII),
        (Some(1), None, false) => Ok(AZLabel::AI),
        (Some(1), Some(1), true) => Ok(AZLabel::BDI),
        (None, Some(1), false) => Ok(AZLabel::D),
        (Some(-1), Some(1), true) => Ok(AZLabel::DIII),
        (Some(-1), None, false) => Ok(AZLabel::AII),
        (Some(-1), Some(-1), true) => Ok(AZLabel::CII),
        (None, Some(-1), false) => Ok(AZLabel::C),
        (Some(1), Some(-1), true) => Ok(AZLabel::CI),
        _ => Err(Error::ClassificationConflict(format!(
            "pattern (T²={}, C²={}, chiral={}) matches no class",
            t_sq.map_or("none".into(), |v| format!("{v:+}")),
            c_sq.map_or("none".into(), |v| format!("{v:+}")),
            chiral,
        ))),
    }
}

/// Test each supplied symmetry against the model on the grid, accept those
/// with residual < tol, and map the accepted pattern to a class label.
pub fn classify(
    model: &BlochModel,
    spec: &SymmetrySpec,
    grid: &KGrid,
    tol: f64,
) -> Result<Classification> {
    spec.validate(model.bands())?;

    let run_anti = |u: Option<&CMat>, kind| -> Result<Option<SymmetryCheck>> {
        match u {
            None => Ok(None),
            Some(u) => {
                let residual = residual_antiunitary(model, u, kind, grid)?;
                let accepted = residual < tol;
                let square = if accepted {
                    Some(square_sign(u)?)
                } else {
                    None
                };
                Ok(Some(SymmetryCheck {
                    residual,
                    accepted,
                    square,
                }))
            }
        }
    };

    let tr_check = run_anti(spec.tr(), AntiunitaryKind::T)?;
    let ph_check = run_anti(spec.ph(), AntiunitaryKind::C)?;
    let t_accepted = tr_check.is_some_and(|c| c.accepted);
    let c_accepted = ph_check.is_some_and(|c| c.accepted);
    let t_sq = tr_check.and_then(|c| c.square);
    let c_sq = ph_check.and_then(|c| c.square);

    let mut chiral_implied = false;
    let chiral_check = match spec.chiral() {
        Some(u_s) => {
            let residual = residual_chiral(model, u_s, grid)?;
            let accepted = residual < tol;
            if !accepted && t_accepted && c_accepted {
                return Err(Error::ClassificationConflict(format!(
                    "supplied chiral matrix fails (residual {residual:.3e}) while \
                     both antiunitaries pass"
                )));
            }
            Some(SymmetryCheck {
                residual,
                accepted,
                square: None,
            })
        }
        None if t_accepted && c_accepted => {
            chiral_implied = true;
            let u_t = spec.tr().expect("accepted T has a matrix");
            let u_c = spec.ph().expect("accepted C has a matrix");
            let implied = u_t.dot(&u_c.map(|z| z.conj()));
            let residual = residual_chiral(model, &implied, grid)?;
            if residual >= IMPLIED_CHIRAL_FACTOR * tol {
                return Err(Error::ClassificationConflict(format!(
                    "implied chiral product U_T·conj(U_C) fails (residual {residual:.3e}) \
                     although T and C both pass"
                )));
            }
            Some(SymmetryCheck {
                residual,
                accepted: true,
                square: None,
            })
        }
        None => None,
    };
    let chiral_accepted = chiral_check.is_some_and(|c| c.accepted);

    let label = label_from_pattern(
        if t_accepted { t_sq } else { None },
        if c_accepted { c_sq } else { None },
        chiral_accepted,
    )?;

    Ok(Classification {
        class: AZClass {
            label,
            t_sq: if t_accepted { t_sq } else { None },
            c_sq: if c_accepted { c_sq } else { None },
        },
        tr: tr_check,
        ph: ph_check,
        chiral: chiral_check,
        chiral_implied,
    })
}

/// Expected classification group for class `az` in dimension `d`.
pub fn expected_group(az: &AZClass, d: i64) -> InvariantGroup {
    table::group_at(az.family(), az.s() as i64, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::linalg::{ceye, cmat, C64};

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

    fn epsilon() -> CMat {
        cmat(&[
            &[C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        ])
    }

    fn constant_model(h: CMat) -> BlochModel {
        let mut hoppings = std::collections::BTreeMap::new();
        hoppings.insert(vec![], h);
        BlochModel::new(0, 2, hoppings).unwrap()
    }

    #[test]
    fn square_signs_of_small_unitaries() {
        assert_eq!(square_sign(&ceye(2)).unwrap(), 1);
        assert_eq!(square_sign(&epsilon()).unwrap(), -1);
        assert_eq!(square_sign(&sigma_x()).unwrap(), 1);
    }

    #[test]
    fn square_sign_rejects_mixed_phase() {
        // U = [[0,i],[1,0]]: U·conj(U) = diag(i, -i), neither +I nor -I.
        let u = cmat(&[
            &[C64::new(0.0, 0.0), C64::new(0.0, 1.0)],
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        ]);
        let err = square_sign(&u).unwrap_err();
        assert!(matches!(err, Error::InvalidRepresentation { .. }));
    }

    #[test]
    fn ssh_antiunitary_residuals_vanish() {
        let ssh = builtin::ssh(0.5, 1.0);
        let grid = KGrid::new(1, 64).unwrap();
        let r_t = residual_antiunitary(ssh.model(), &ceye(2), AntiunitaryKind::T, &grid).unwrap();
        assert!(r_t < 1e-12, "T residual {r_t}");
        let r_c = residual_antiunitary(ssh.model(), &sigma_z(), AntiunitaryKind::C, &grid).unwrap();
        assert!(r_c < 1e-12, "C residual {r_c}");
    }

    #[test]
    fn qwz_has_no_time_reversal() {
        let qwz = builtin::qwz(1.0);
        let grid = KGrid::new(2, 16).unwrap();
        let r = residual_antiunitary(qwz.model(), &ceye(2), AntiunitaryKind::T, &grid).unwrap();
        assert!(r > 0.5, "expected order-1 residual, got {r}");
    }

    #[test]
    fn chiral_residuals_match_hand_values() {
        let ssh = builtin::ssh(0.7, 1.3);
        let grid = KGrid::new(1, 64).unwrap();
        let r = residual_chiral(ssh.model(), &sigma_z(), &grid).unwrap();
        assert!(r < 1e-12, "SSH chiral residual {r}");

        let m = constant_model(sigma_z());
        let grid0 = KGrid::new(0, 2).unwrap();
        let r_commuting = residual_chiral(&m, &sigma_z(), &grid0).unwrap();
        assert!((r_commuting - 2.0).abs() < 1e-14);
        let r_anticommuting = residual_chiral(&m, &sigma_x(), &grid0).unwrap();
        assert!(r_anticommuting < 1e-14);
    }

    #[test]
    fn residual_rejects_non_unitary() {
        let ssh = builtin::ssh(0.5, 1.0);
        let grid = KGrid::new(1, 8).unwrap();
        let bad = cmat(&[
            &[C64::new(2.0, 0.0), C64::new(0.0, 0.0)],
            &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ]);
        let err = residual_antiunitary(ssh.model(), &bad, AntiunitaryKind::T, &grid).unwrap_err();
        assert!(matches!(err, Error::NonUnitary { .. }));
    }

    #[test]
    fn ssh_classifies_as_bdi() {
        let ssh = builtin::ssh(0.5, 1.0);
        let grid = KGrid::new(1, 64).unwrap();
        let spec = SymmetrySpec::new(Some(ceye(2)), Some(sigma_z()), Some(sigma_z()));
        let cls = classify(ssh.model(), &spec, &grid, DEFAULT_CLASS_TOL).unwrap();
        assert_eq!(cls.class.label, AZLabel::BDI);
        assert_eq!(cls.class.family(), Family::Real);
        assert_eq!(cls.class.s(), 1);
        assert_eq!(cls.class.t_sq, Some(1));
        assert_eq!(cls.class.c_sq, Some(1));
        assert!(!cls.chiral_implied);
    }

    #[test]
    fn qwz_rejects_the_ssh_spec_and_lands_in_a() {
        let qwz = builtin::qwz(1.0);
        let grid = KGrid::new(2, 16).unwrap();
        let spec = SymmetrySpec::new(Some(ceye(2)), Some(sigma_z()), Some(sigma_z()));
        let cls = classify(qwz.model(), &spec, &grid, DEFAULT_CLASS_TOL).unwrap();
        assert_eq!(cls.class.label, AZLabel::A);
        assert_eq!(cls.class.family(), Family::Complex);
        assert_eq!(cls.class.s(), 0);
        assert!(!cls.tr.unwrap().accepted);
        assert!(!cls.ph.unwrap().accepted);
        assert!(!cls.chiral.unwrap().accepted);
    }

    #[test]
    fn real_kitaev_chain_admits_bdi_with_implied_chiral() {
        let kitaev = builtin::kitaev(1.0, 1.0, 1.0);
        let grid = KGrid::new(1, 64).unwrap();
        let tau_x = sigma_x();
        let spec = SymmetrySpec::new(Some(ceye(2)), Some(tau_x), None);
        let cls = classify(kitaev.model(), &spec, &grid, DEFAULT_CLASS_TOL).unwrap();
        assert_eq!(cls.class.label, AZLabel::BDI);
        assert!(cls.chiral_implied);
        assert!(cls.chiral.unwrap().accepted);
    }

    #[test]
    fn kitaev_canonical_spec_is_class_d() {
        let kitaev = builtin::kitaev(1.0, 1.0, 1.0);
        let grid = KGrid::new(1, 64).unwrap();
        let cls = classify(kitaev.model(), kitaev.spec(), &grid, DEFAULT_CLASS_TOL).unwrap();
        assert_eq!(cls.class.label, AZLabel::D);
        assert_eq!(cls.class.t_sq, None);
        assert_eq!(cls.class.c_sq, Some(1));
    }

    #[test]
    fn failing_supplied_chiral_with_passing_antiunitaries_conflicts() {
        let ssh = builtin::ssh(0.5, 1.0);
        let grid = KGrid::new(1, 64).unwrap();
        let spec = SymmetrySpec::new(Some(ceye(2)), Some(sigma_z()), Some(sigma_x()));
        let err = classify(ssh.model(), &spec, &grid, DEFAULT_CLASS_TOL).unwrap_err();
        assert!(matches!(err, Error::ClassificationConflict(_)));
    }

    #[test]
    fn chiral_with_single_antiunitary_conflicts() {
        // H = sigma_x constant: T = conjugation passes (real matrix), S = sigma_z
        // anticommutes, but no particle-hole partner is supplied.
        let m = constant_model(sigma_x());
        let grid = KGrid::new(0, 2).unwrap();
        let spec = SymmetrySpec::new(Some(ceye(2)), None, Some(sigma_z()));
        let err = classify(&m, &spec, &grid, DEFAULT_CLASS_TOL).unwrap_err();
        assert!(matches!(err, Error::ClassificationConflict(_)));
    }

    #[test]
    fn label_s_bijection_is_table_row_order() {
        let expected: [(AZLabel, Family, u8); 10] = [
            (AZLabel::A, Family::Complex, 0),
            (AZLabel::AIII, Family::Complex, 1),
            (AZLabel::AI, Family::Real, 0),
            (AZLabel::BDI, Family::Real, 1),
            (AZLabel::D, Family::Real, 2),
            (AZLabel::DIII, Family::Real, 3),
            (AZLabel::AII, Family::Real, 4),
            (AZLabel::CII, Family::Real, 5),
            (AZLabel::C, Family::Real, 6),
            (AZLabel::CI, Family::Real, 7),
        ];
        for (label, family, s) in expected {
            assert_eq!(label.family(), family);
            assert_eq!(label.s(), s);
            assert_eq!(AZLabel::from_family_s(family, s), Some(label));
        }
    }

    #[test]
    fn expected_group_matches_table_rows() {
        let d_class = AZClass {
            label: AZLabel::D,
            t_sq: None,
            c_sq: Some(1),
        };
        assert_eq!(expected_group(&d_class, 1), InvariantGroup::Z2);
        let a_class = AZClass {
            label: AZLabel::A,
            t_sq: None,
            c_sq: None,
        };
        assert_eq!(expected_group(&a_class, 3), InvariantGroup::Zero);
        let cii_class = AZClass {
            label: AZLabel::CII,
            t_sq: Some(-1),
            c_sq: Some(-1),
        };
        assert_eq!(expected_group(&cii_class, 1), InvariantGroup::Z);
    }

    #[test]
    fn bhz_canonical_spec_is_class_aii() {
        // BHZ carries T = [[0,I],[-I,0]] with T^2 = -1 and nothing else.
        let bhz = builtin::bhz(1.0);
        let grid = KGrid::new(2, 16).unwrap();
        let cls = classify(bhz.model(), bhz.spec(), &grid, DEFAULT_CLASS_TOL).unwrap();
        assert_eq!(cls.class.label, AZLabel::AII);
        assert_eq!(cls.class.t_sq, Some(-1));
    }

    #[test]
    fn labels_parse_back_from_display() {
        for label in AZLabel::ALL {
            let round: AZLabel = label.to_string().parse().unwrap();
            assert_eq!(round, label);
        }
        assert!("XYZ".parse::<AZLabel>().is_err());
    }
}
