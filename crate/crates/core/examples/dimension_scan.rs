// Eve's information at `D = 0.1` as the dimension grows; it approaches `D`.
//
// ```text
// cargo run --example dimension_scan
// ```

use mub_eavesdrop::infocurves::dimension_scan;
use mub_eavesdrop::mub::is_prime;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dims: Vec<usize> = (2..=60)
        .filter(|&d| is_prime(d))
        .chain([1_009, 10_007])
        .collect();
    let scan = dimension_scan(0.1, &dims)?;
    for (d, info) in &scan {
        println!("{d:>6}  {info:.9}");
    }
    assert!(scan.windows(2).all(|w| w[1].1 < w[0].1));
    let (_, last) = scan.last().copied().unwrap_or_default();
    assert!((last - 0.1).abs() < 0.01);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
