//! Conditioning of the nodal basis on random cells.
//!
//! cargo run --release --example unisolvence [SAMPLES] [SEED]

use symcurl::analysis::unisolvence_study;
use symcurl::polyspace::CellKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let samples = args.first().map(|s| s.parse()).transpose()?.unwrap_or(100);
    let seed = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(0);
    println!("cell,k,samples,min_cond,median_cond,max_cond,max_residual,passed");
    for (kind, degrees) in [(CellKind::Tet, 1..=3), (CellKind::Hex, 1..=2)] {
        for k in degrees {
            let r = unisolvence_study(kind, k, samples, seed)?;
            println!(
                "{},{k},{samples},{:.3e},{:.3e},{:.3e},{:.3e},{}",
                kind.name(),
                r.min_condition,
                r.median_condition,
                r.max_condition,
                r.max_residual,
                r.passed
            );
        }
    }
    Ok(())
}
