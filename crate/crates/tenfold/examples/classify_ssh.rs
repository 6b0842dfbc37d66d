//! Classify the dimerized chain and compute the invariant its class admits.
use tenfold::builtin;
use tenfold::invariants::{invariant_for, InvariantOutcome};
use tenfold::model::{KGrid, DEFAULT_GAP_TOL};
use tenfold::symmetry::{classify, expected_group, DEFAULT_CLASS_TOL};

fn main() -> Result<(), tenfold::Error> {
    let b = builtin::ssh(0.5, 1.0);
    let grid = KGrid::default_for(b.model().dim());
    let report = classify(b.model(), b.spec(), &grid, DEFAULT_CLASS_TOL)?;
    let d = b.model().dim() as i64;
    println!(
        "{} -> {}",
        report.class.label,
        expected_group(&report.class, d)
    );

    let outcome = invariant_for(
        b.model(),
        b.spec(),
        &report.class,
        d,
        &grid,
        DEFAULT_CLASS_TOL,
        DEFAULT_GAP_TOL,
    )?;
    if let InvariantOutcome::Computed(r) = outcome {
        println!("{} = {}", r.kind, r.value);
    }
    Ok(())
}
