//! The periodic-table engine: classifying-space data, the Bott-clock group
//! lookup pi0(R_{s-d}), loop/suspension index shifts, and regeneration of the
//! full classification grid against an embedded reference copy.

use std::fmt;

use crate::symmetry::{AZLabel, Family};

/// Classification group of a symmetry class at a given dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InvariantGroup {
    Z,
    Z2,
    Zero,
}

impl fmt::Display for InvariantGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantGroup::Z => write!(f, "Z"),
            InvariantGroup::Z2 => write!(f, "Z2"),
            InvariantGroup::Zero => write!(f, "0"),
        }
    }
}

/// (family, s, d) coordinates, stored reduced mod the family period
/// (2 complex, 8 real).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TableIndex {
    family: Family,
    s: u8,
    d: u8,
}

impl TableIndex {
    pub fn new(family: Family, s: i64, d: i64) -> Self {
        let p = period(family) as i64;
        Self {
            family,
            s: s.rem_euclid(p) as u8,
            d: d.rem_euclid(p) as u8,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn s(&self) -> u8 {
        self.s
    }

    pub fn d(&self) -> u8 {
        self.d
    }
}

impl fmt::Display for TableIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},s={},d={}", self.family, self.s, self.d)
    }
}

/// One row of the classifying-space table: coset label and its pi0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyingSpace {
    pub family: Family,
    pub s: u8,
    pub label: &'static str,
    pub pi0: InvariantGroup,
}

use InvariantGroup::{Zero as O, Z, Z2};

pub const COMPLEX_SPACES: [ClassifyingSpace; 2] = [
    ClassifyingSpace {
        family: Family::Complex,
        s: 0,
        label: "U(2n)/(U(n)×U(n))×Z",
        pi0: Z,
    },
    ClassifyingSpace {
        family: Family::Complex,
        s: 1,
        label: "U(n)",
        pi0: O,
    },
];

pub const REAL_SPACES: [ClassifyingSpace; 8] = [
    ClassifyingSpace {
        family: Family::Real,
        s: 0,
        label: "{O(2n)/(O(n)×O(n))}×Z",
        pi0: Z,
    },
    ClassifyingSpace {
        family: Family::Real,
        s: 1,
        label: "O(16n)",
        pi0: Z2,
    },
    ClassifyingSpace {
        family: Family::Real,
        s: 2,
        label: "O(16n)/U(8n)",
        pi0: Z2,
    },
    ClassifyingSpace {
        family: Family::Real,
        s: 3,
        label: "U(8n)/Sp(4n)",
        pi0: O,
    },
    ClassifyingSpace {
        family: Family::Real,
        s: 4,
        label: "{Sp(4n)/(Sp(2n)×Sp(2n))}×Z",
        pi0: Z,
    },
    ClassifyingSpace {
        family: Family::Real,
        s: 5,
        label: "Sp(2n)",
        pi0: O,
    },
    ClassifyingSpace {
        family: Family::Real,
        s: 6,
        label: "Sp(2n)/U(2n)",
        pi0: O,
    },
    ClassifyingSpace {
        family: Family::Real,
        s: 7,
        label: "U(2n)/O(2n)",
        pi0: O,
    },
];

/// Reference copy of the classification table, complex rows (A, AIII),
/// columns d = 0..7.
pub const TABLE1_COMPLEX: [(AZLabel, [InvariantGroup; 8]); 2] = [
    (AZLabel::A, [Z, O, Z, O, Z, O, Z, O]),
    (AZLabel::AIII, [O, Z, O, Z, O, Z, O, Z]),
];

/// Reference copy of the classification table, real rows, columns d = 0..7.
pub const TABLE1_REAL: [(AZLabel, [InvariantGroup; 8]); 8] = [
    (AZLabel::AI, [Z, O, O, O, Z, O, Z2, Z2]),
    (AZLabel::BDI, [Z2, Z, O, O, O, Z, O, Z2]),
    (AZLabel::D, [Z2, Z2, Z, O, O, O, Z, O]),
    (AZLabel::DIII, [O, Z2, Z2, Z, O, O, O, Z]),
    (AZLabel::AII, [Z, O, Z2, Z2, Z, O, O, O]),
    (AZLabel::CII, [O, Z, O, Z2, Z2, Z, O, O]),
    (AZLabel::C, [O, O, Z, O, Z2, Z2, Z, O]),
    (AZLabel::CI, [O, O, O, Z, O, Z2, Z2, Z]),
];

pub fn period(family: Family) -> u8 {
    match family {
        Family::Complex => 2,
        Family::Real => 8,
    }
}

pub fn classifying_spaces(family: Family) -> &'static [ClassifyingSpace] {
    match family {
        Family::Complex => &COMPLEX_SPACES,
        Family::Real => &REAL_SPACES,
    }
}

pub fn classifying_space(family: Family, s: i64) -> &'static ClassifyingSpace {
    let spaces = classifying_spaces(family);
    &spaces[s.rem_euclid(period(family) as i64) as usize]
}

/// pi0 of the classifying space at index s (reduced mod the family period).
pub fn pi0(family: Family, s: i64) -> InvariantGroup {
    classifying_space(family, s).pi0
}

/// The Bott clock: the classification group at (s, d) is pi0 at index s - d.
pub fn group_at(family: Family, s: i64, d: i64) -> InvariantGroup {
    pi0(family, s - d)
}

/// Looping shifts the symmetry index: (family, s, d) -> (family, s+1, d).
pub fn loop_shift(idx: TableIndex) -> TableIndex {
    TableIndex::new(idx.family(), idx.s() as i64 + 1, idx.d() as i64)
}

/// Suspension shifts the dimension index: (family, s, d) -> (family, s, d+1).
pub fn suspend_shift(idx: TableIndex) -> TableIndex {
    TableIndex::new(idx.family(), idx.s() as i64, idx.d() as i64 + 1)
}

/// One cell where the generated table deviates from a reference copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableMismatch {
    pub index: TableIndex,
    pub generated: InvariantGroup,
    pub expected: InvariantGroup,
}

impl fmt::Display for TableMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: generated {} expected {}",
            self.index, self.generated, self.expected
        )
    }
}

fn diff_family(rows: &[(AZLabel, [InvariantGroup; 8])], out: &mut Vec<TableMismatch>) {
    for (label, row) in rows {
        for (d, &expected) in row.iter().enumerate() {
            let idx = TableIndex::new(label.family(), label.s() as i64, d as i64);
            let generated = group_at(label.family(), label.s() as i64, d as i64);
            if generated != expected {
                out.push(TableMismatch {
                    index: idx,
                    generated,
                    expected,
                });
            }
        }
    }
}

/// Diff the Bott-clock generated grid against a reference copy of the table.
pub fn diff_against(
    complex_rows: &[(AZLabel, [InvariantGroup; 8]); 2],
    real_rows: &[(AZLabel, [InvariantGroup; 8]); 8],
) -> Vec<TableMismatch> {
    let mut out = Vec::new();
    diff_family(complex_rows, &mut out);
    diff_family(real_rows, &mut out);
    out
}

/// Regenerate all 80 table entries from the Bott clock and diff them against
/// the embedded reference copy. Empty diff on success.
pub fn generate_table() -> Vec<TableMismatch> {
    diff_against(&TABLE1_COMPLEX, &TABLE1_REAL)
}

/// Outcome of the three table-level periodicity identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodicityReport {
    /// group_at(s+1, d+1) = group_at(s, d) everywhere.
    pub one_one: bool,
    /// group_at(s + period, d) = group_at(s, d) everywhere.
    pub s_periodic: bool,
    /// group_at(s, d + period) = group_at(s, d) everywhere.
    pub d_periodic: bool,
}

impl PeriodicityReport {
    pub fn all_pass(&self) -> bool {
        self.one_one && self.s_periodic && self.d_periodic
    }
}

/// Exhaustively check (1,1) periodicity and the s/d periodicities for both
/// families.
pub fn check_periodicities() -> PeriodicityReport {
    let mut report = PeriodicityReport {
        one_one: true,
        s_periodic: true,
        d_periodic: true,
    };
    for family in [Family::Complex, Family::Real] {
        let p = period(family) as i64;
        for s in 0..p {
            for d in 0..p {
                let g = group_at(family, s, d);
                report.one_one &= group_at(family, s + 1, d + 1) == g;
                report.s_periodic &= group_at(family, s + p, d) == g;
                report.d_periodic &= group_at(family, s, d + p) == g;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi0_examples() {
        assert_eq!(pi0(Family::Real, 0), Z);
        assert_eq!(pi0(Family::Real, 3), O);
        assert_eq!(pi0(Family::Complex, 1), O);
    }

    #[test]
    fn group_at_examples() {
        assert_eq!(group_at(Family::Real, 4, 2), Z2); // AII, d=2
        assert_eq!(group_at(Family::Real, 0, 0), Z); // AI, d=0
        assert_eq!(group_at(Family::Complex, 1, 3), Z); // AIII, d=3
    }

    #[test]
    fn shifts_wrap_mod_period() {
        assert_eq!(
            loop_shift(TableIndex::new(Family::Real, 7, 3)),
            TableIndex::new(Family::Real, 0, 3)
        );
        assert_eq!(
            loop_shift(TableIndex::new(Family::Complex, 1, 0)),
            TableIndex::new(Family::Complex, 0, 0)
        );
        assert_eq!(
            suspend_shift(TableIndex::new(Family::Real, 2, 7)),
            TableIndex::new(Family::Real, 2, 0)
        );
        let twice = suspend_shift(suspend_shift(TableIndex::new(Family::Real, 0, 0)));
        assert_eq!(twice, TableIndex::new(Family::Real, 0, 2));
    }

    #[test]
    fn shifted_lookups_match_table_rows() {
        // Looping (real, 2, 0) lands on the DIII row at d=0.
        let idx = loop_shift(TableIndex::new(Family::Real, 2, 0));
        assert_eq!(group_at(idx.family(), idx.s() as i64, idx.d() as i64), O);
        // Suspending (real, 2, 1) lands on the D row at d=2.
        let idx = suspend_shift(TableIndex::new(Family::Real, 2, 1));
        assert_eq!(group_at(idx.family(), idx.s() as i64, idx.d() as i64), Z);
    }

    #[test]
    fn generated_rows_match_reference_rows() {
        let d_row: Vec<InvariantGroup> = (0..8).map(|d| group_at(Family::Real, 2, d)).collect();
        assert_eq!(d_row, vec![Z2, Z2, Z, O, O, O, Z, O]);
        let ci_row: Vec<InvariantGroup> = (0..8).map(|d| group_at(Family::Real, 7, d)).collect();
        assert_eq!(ci_row, vec![O, O, O, Z, O, Z2, Z2, Z]);
        let a_row: Vec<InvariantGroup> = (0..8).map(|d| group_at(Family::Complex, 0, d)).collect();
        assert_eq!(a_row, vec![Z, O, Z, O, Z, O, Z, O]);
    }

    #[test]
    fn generate_table_has_empty_diff() {
        assert!(generate_table().is_empty());
    }

    #[test]
    fn diff_names_a_corrupted_cell() {
        let mut corrupted = TABLE1_REAL;
        corrupted[2].1[3] = Z; // D row, d=3 is really 0
        let diff = diff_against(&TABLE1_COMPLEX, &corrupted);
        assert_eq!(diff.len(), 1);
        assert_eq!(diff[0].index, TableIndex::new(Family::Real, 2, 3));
        assert_eq!(diff[0].generated, O);
        assert_eq!(diff[0].expected, Z);
    }

    #[test]
    fn periodicities_hold() {
        let report = check_periodicities();
        assert!(report.one_one);
        assert!(report.s_periodic);
        assert!(report.d_periodic);
    }

    #[test]
    fn every_real_column_has_the_fixed_group_multiset() {
        for d in 0..8 {
            let mut z = 0;
            let mut z2 = 0;
            let mut zero = 0;
            for s in 0..8 {
                match group_at(Family::Real, s, d) {
                    Z => z += 1,
                    Z2 => z2 += 1,
                    O => zero += 1,
                }
            }
            assert_eq!((z, z2, zero), (2, 2, 4), "column d={d}");
        }
    }

    #[test]
    fn group_depends_only_on_s_minus_d() {
        for family in [Family::Complex, Family::Real] {
            let p = period(family) as i64;
            for s in 0..p {
                for d in 0..p {
                    assert_eq!(group_at(family, s, d), pi0(family, (s - d).rem_euclid(p)),);
                }
            }
        }
    }

    #[test]
    fn loop_then_suspend_preserves_groups() {
        for family in [Family::Complex, Family::Real] {
            let p = period(family) as i64;
            for s in 0..p {
                for d in 0..p {
                    let idx = TableIndex::new(family, s, d);
                    let moved = suspend_shift(loop_shift(idx));
                    assert_eq!(
                        group_at(family, moved.s() as i64, moved.d() as i64),
                        group_at(family, s, d)
                    );
                }
            }
        }
    }

    #[test]
    fn rendering_is_exact() {
        assert_eq!(Z.to_string(), "Z");
        assert_eq!(Z2.to_string(), "Z2");
        assert_eq!(O.to_string(), "0");
    }

    #[test]
    fn classifying_space_labels_are_verbatim() {
        assert_eq!(classifying_space(Family::Real, 2).label, "O(16n)/U(8n)");
        assert_eq!(classifying_space(Family::Real, 9).label, "O(16n)");
        assert_eq!(
            classifying_space(Family::Complex, 0).label,
            "U(2n)/(U(n)×U(n))×Z"
        );
    }
}
