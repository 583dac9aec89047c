// Alice–Bob and Alice–Eve information for qubits and qutrits, written as
// CSV to stdout.
//
// ```text
// cargo run --example info_curves > curves.csv
// ```

use mub_eavesdrop::infocurves::{sweep_curves, uniform_grid};
use mub_eavesdrop::output::write_curves_csv;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for d in [2, 3] {
        println!("# d = {d}");
        let points = sweep_curves(d, &uniform_grid(d, 21))?;
        let mut csv = Vec::new();
        write_curves_csv(&mut csv, &points)?;
        print!("{}", String::from_utf8(csv)?);
    }

    // the qutrit curves are better for Alice and Bob at every shared D
    let q2 = sweep_curves(2, &uniform_grid(2, 50))?;
    for p in &q2[1..q2.len() - 1] {
        let q3 = &sweep_curves(3, &[p.disturbance])?[0];
        assert!(q3.i_ae < p.i_ae && q3.i_ab > p.i_ab);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
