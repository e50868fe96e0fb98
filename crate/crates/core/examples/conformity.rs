//! sym-jump of random finite element functions across interior faces.
//! The raw jump `[U] × n` is printed alongside; it does not vanish.
//!
//! cargo run --release --example conformity [N] [K]

use symcurl::analysis::{face_defect, unit_cube};
use symcurl::polyspace::CellKind;
use symcurl::space::GlobalSpace;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let k = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(2);
    for kind in [CellKind::Tet, CellKind::Hex] {
        let space = GlobalSpace::new(unit_cube(kind, n)?, k)?;
        println!("{} n={n} k={k}: {} cells, {} DOFs", kind.name(), space.mesh().num_cells(), space.dimension());
        for seed in 0..3 {
            let u = space.random_function(seed);
            let d = face_defect(&u)?;
            println!(
                "  seed {seed}: {} faces, max |sym| {:.2e}, max |dev sym| {:.2e}, max raw {:.3}, normalized {:.2e}",
                d.faces.len(),
                d.max_sym,
                d.max_dev_sym,
                d.max_raw,
                d.normalized_sym
            );
        }
    }
    Ok(())
}
