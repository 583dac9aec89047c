// Constructs Eve's symmetric attack at the qutrit crossing disturbance and
// checks it by simulating all twelve signal states.
//
// ```text
// cargo run --example verify_attack
// ```

use mub_eavesdrop::analysis::verify_attack;
use mub_eavesdrop::attack::build_isometry;
use mub_eavesdrop::mub::mub_bases;
use mub_eavesdrop::output::to_rounded_json;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let iso = build_isometry(3, 0.227)?;
    println!("{}", to_rounded_json(&iso.summary())?);

    let report = verify_attack(3, 0.227, &mub_bases(3)?)?;
    for s in &report.disturbance_per_state {
        println!("{:>8}  D = {:.12}", s.label, s.disturbance);
    }
    println!("spread            {:.2e}", report.max_disturbance_spread);
    println!("unitarity         {:?}", report.unitarity_residuals);
    println!("symmetry          {:?}", report.symmetry_residuals);
    println!(
        "I_AE simulated {:.12} / closed form {:.12}",
        report.eve_info_computational, report.eve_info_closed_form
    );
    assert!(report.passes(1e-9));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
