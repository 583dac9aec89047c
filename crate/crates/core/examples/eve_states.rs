// Eve's conditional states and the Holevo quantity of her ensemble for
// each qutrit basis.
//
// ```text
// cargo run --example eve_states
// ```

use mub_eavesdrop::analysis::{
    eve_conditional_state, eve_information_computational, holevo_per_basis, Branch,
};
use mub_eavesdrop::attack::build_isometry;
use mub_eavesdrop::mub::mub_bases;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let set = mub_bases(3)?;
    let iso = build_isometry(3, 0.1)?;

    let rho = eve_conditional_state(&iso, &set, 0, 0, Branch::All)?;
    println!("Eve's state for |0>: entropy {:.6} trits", rho.entropy(3.0));
    let branch = eve_conditional_state(&iso, &set, 0, 0, Branch::Bob(0))?;
    println!(
        "  given Bob saw 0: purity check trace {:.3}",
        branch.trace()
    );

    let chi = holevo_per_basis(&iso, &set)?;
    let acc = eve_information_computational(&iso)?;
    for (b, h) in chi.iter().enumerate() {
        println!("basis {b}: Holevo {h:.9} dits");
    }
    println!("canonical-frame information {acc:.9} dits");
    assert!(chi.iter().all(|h| *h >= acc - 1e-12));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
