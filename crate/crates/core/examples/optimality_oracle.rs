// Checks that no sampled ancilla configuration gives Eve more information
// than the closed form.
//
// ```text
// cargo run --release --example optimality_oracle
// ```

use mub_eavesdrop::oracle::{enumerate_symmetric_roots, stochastic_search};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for root in enumerate_symmetric_roots(3, 0.1)? {
        println!(
            "root x = {:+.9} y = {:+.9}  I_AE = {:.9}",
            root.x, root.y, root.info
        );
    }
    for dist in [0.05, 0.1, 0.2, 0.3] {
        let out = stochastic_search(3, dist, 2_000, 42)?;
        println!(
            "D = {dist:.2}: best sampled {:.9}, closed form {:.9}, gap {:+.2e}",
            out.best_found_info, out.closed_form_info, out.gap
        );
        assert!(out.passes());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
