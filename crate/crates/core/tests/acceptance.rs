//! Acceptance suite: runs every check of the property suite at full size and
//! prints one pass/fail line per criterion. Run with `--nocapture` to see the
//! lines as they complete:
//!
//! ```text
//! cargo test --test acceptance -- --nocapture
//! ```

use wittkit::selftest::{run_with, CheckResult};

fn run_criterion(index: usize) -> CheckResult {
    // Criteria are independent; run the suite once per process and memoize.
    use std::sync::OnceLock;
    static RESULTS: OnceLock<Vec<CheckResult>> = OnceLock::new();
    let results = RESULTS.get_or_init(|| {
        run_with(false, |r| {
            println!("{}", r.line());
        })
    });
    results[index - 1].clone()
}

macro_rules! criterion_test {
    ($name:ident, $index:expr) => {
        #[test]
        fn $name() {
            let r = run_criterion($index);
            println!("{}", r.line());
            assert!(r.passed, "criterion {} failed: {}", r.index, r.detail);
        }
    };
}

criterion_test!(criterion_1_oracle_equivalence, 1);
criterion_test!(criterion_2_order_law, 2);
criterion_test!(criterion_3_witt_ring_axioms, 3);
criterion_test!(criterion_4_decomposition_bijectivity, 4);
criterion_test!(criterion_5_verschiebung_matrix_agreement, 5);
criterion_test!(criterion_6_ses_ladder, 6);
criterion_test!(criterion_7_colimit_towers, 7);
criterion_test!(criterion_8_nerve_homology, 8);
criterion_test!(criterion_9_power_maps, 9);
