use std::io::Write;

use pxharm::acceptance::run_all;

#[test]
fn acceptance() {
    let outcomes = run_all();
    // Direct stderr writes bypass libtest capture, so the lines always show.
    let mut err = std::io::stderr().lock();
    for o in &outcomes {
        writeln!(err, "{}", o.line()).unwrap();
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
