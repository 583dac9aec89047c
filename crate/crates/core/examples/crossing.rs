// Disturbance at which Eve learns as much as Bob.
//
// ```text
// cargo run --example crossing
// ```

use mub_eavesdrop::infocurves::crossing;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut previous = 0.0;
    for d in [2, 3, 5, 7, 11] {
        let c = crossing(d, 1e-12)?;
        println!(
            "d = {d:>2}: D_c = {:.6}  info = {:.6} dits  ({} bisections)",
            c.d_c, c.info_at_crossing, c.iterations
        );
        assert!(c.d_c > previous);
        previous = c.d_c;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
