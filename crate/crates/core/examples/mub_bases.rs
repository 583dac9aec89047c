// Builds the maximal sets of mutually unbiased bases and certifies them.
//
// ```text
// cargo run --example mub_bases
// ```

use mub_eavesdrop::mub::{mub_bases, verify_mub};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for d in [2, 3, 5, 7] {
        let set = mub_bases(d)?;
        let residual = verify_mub(&set);
        println!(
            "d = {d}: {} bases, {} states, max residual {residual:.2e}",
            set.num_bases(),
            set.num_states()
        );
        assert!(residual < 1e-10);
    }

    // the twelve qutrit signal states in wire format
    let qutrit = mub_bases(3)?;
    println!("{}", qutrit.to_json()?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
