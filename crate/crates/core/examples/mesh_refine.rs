//! Reads a small mesh, refines it uniformly and reports entity counts and
//! shape regularity per level; the finest mesh is written to stdout.
//!
//! cargo run --example mesh_refine [MESH.m3]

use symcurl::mesh::{generate_unit_cube_tets, load_mesh, save_mesh};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut mesh = match std::env::args().nth(1) {
        Some(path) => load_mesh(&std::fs::read_to_string(path)?)?,
        None => generate_unit_cube_tets(1)?,
    };
    println!("level,vertices,edges,faces,cells,h,worst_shape,volume");
    for level in 0..3 {
        if level > 0 {
            mesh = mesh.refine_uniform()?;
        }
        let shape = (0..mesh.num_cells())
            .map(|c| mesh.cell_geometry(c).shape_ratio())
            .fold(0.0, f64::max);
        println!(
            "{level},{},{},{},{},{:.4},{:.3},{:.12}",
            mesh.num_vertices(),
            mesh.num_edges(),
            mesh.num_faces(),
            mesh.num_cells(),
            mesh.max_diameter(),
            shape,
            mesh.total_volume()
        );
    }
    let text = save_mesh(&mesh);
    println!("\n{} lines of .m3 output, first 5:", text.lines().count());
    for line in text.lines().take(5) {
        println!("{line}");
    }
    Ok(())
}
