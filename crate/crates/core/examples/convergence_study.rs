//! Interpolation error of the trigonometric field under uniform refinement,
//! for both cell kinds and degrees 1 and 2.
//!
//! cargo run --release --example convergence_study [BASE] [LEVELS]

use symcurl::analysis::{convergence_study, TrigField};
use symcurl::polyspace::CellKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>());
    let base = args.next().transpose()?.unwrap_or(4);
    let levels = args.next().transpose()?.unwrap_or(3);
    for kind in [CellKind::Tet, CellKind::Hex] {
        for k in [1, 2] {
            let t = std::time::Instant::now();
            let report = convergence_study(&TrigField, kind, k, base, levels)?;
            println!("# {} k={k} base={base} ({:.1?})", kind.name(), t.elapsed());
            print!("{}", report.to_csv());
        }
    }
    Ok(())
}
