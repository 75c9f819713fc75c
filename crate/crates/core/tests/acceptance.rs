//! The eight acceptance criteria, one line each.

use biharm::acceptance::{self, AcceptanceOptions};

#[test]
fn acceptance_criteria() {
    let outcomes = acceptance::run_all(&AcceptanceOptions::default());
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
