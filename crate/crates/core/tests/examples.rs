macro_rules! example {
    ($module:ident, $file:literal, $test:ident) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(mub_bases_example, "mub_bases.rs", mub_bases_example_runs);
example!(
    verify_attack_example,
    "verify_attack.rs",
    verify_attack_example_runs
);
example!(
    info_curves_example,
    "info_curves.rs",
    info_curves_example_runs
);
example!(crossing_example, "crossing.rs", crossing_example_runs);
example!(
    dimension_scan_example,
    "dimension_scan.rs",
    dimension_scan_example_runs
);
example!(eve_states_example, "eve_states.rs", eve_states_example_runs);
example!(
    optimality_oracle_example,
    "optimality_oracle.rs",
    optimality_oracle_example_runs
);
