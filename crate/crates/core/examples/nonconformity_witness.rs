//! The identity indicator of one cell: its sym-jump vanishes on every face,
//! while the raw jump `[U] × n` has norm √2 on each interior face of the cell.
//!
//! cargo run --example nonconformity_witness

use symcurl::analysis::{nonconformity_witness, unit_cube};
use symcurl::polyspace::CellKind;
use symcurl::space::GlobalSpace;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (kind, n, cell) in [(CellKind::Tet, 1, 0), (CellKind::Tet, 2, 13), (CellKind::Hex, 2, 0)] {
        let space = GlobalSpace::new(unit_cube(kind, n)?, 1)?;
        let w = nonconformity_witness(&space, cell)?;
        println!("{} n={n}, cell {cell}:", kind.name());
        for f in &w.faces {
            println!("  face {:>3}: |[U] x n| = {:.15}, |sym| = {:.1e}", f.face, f.raw, f.sym);
        }
        println!(
            "  max deviation from sqrt 2 {:.1e}, elsewhere {:.1e}, passed {}",
            w.max_raw_deviation, w.max_elsewhere, w.passed
        );
    }
    Ok(())
}
