//! DOF tables of the tetrahedral and hexahedral elements for k = 1..4,
//! followed by the first functionals of the unit tetrahedron at k = 1.
//!
//! cargo run --example element_info

use symcurl::analysis::info_table;
use symcurl::element::{expected_dof_count, reference_mesh, tet_dofs};
use symcurl::polyspace::CellKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for kind in [CellKind::Tet, CellKind::Hex] {
        for k in 1..=4 {
            let table = info_table(kind, k)?;
            let total: usize = table.iter().map(|r| r.2).sum();
            println!("{} k={k}: {total} DOFs (expected {})", kind.name(), expected_dof_count(kind, k));
            for (entity, class, n) in table {
                println!("  {entity:<8} {class:<28} {n:>5}");
            }
        }
    }

    let mesh = reference_mesh(CellKind::Tet);
    println!("\nunit tet, k=1, first 12 functionals");
    for (i, d) in tet_dofs(&mesh, 0, 1)?.iter().take(12).enumerate() {
        let w = d.weight.to_array().map(|x| if x.abs() < 1e-15 { 0.0 } else { x });
        println!(
            "{i:>3} {:?} {:<2} {:<28} at {:?}  W = {:?}",
            d.owner.kind,
            d.owner.id,
            d.class.name(),
            d.point.0,
            w
        );
    }
    Ok(())
}
