//! Interpolates the trigonometric field, writes the coefficient vector as
//! `.fef`, reads it back and evaluates both at a point.
//!
//! cargo run --example interpolate_fef [OUT.fef]

use symcurl::analysis::{errors, unit_cube, MatrixField, TrigField};
use symcurl::polyspace::CellKind;
use symcurl::space::{load_fef, save_fef, GlobalSpace};
use symcurl::tensor3::Vec3;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "trig.fef".into());
    let space = GlobalSpace::new(unit_cube(CellKind::Hex, 3)?, 2)?;
    let u = space.interpolate(|x| TrigField.value(x))?;
    let e = errors(&TrigField, &u)?;
    println!("dimension {}, L2 error {:.3e}, sym Curl error {:.3e}", space.dimension(), e.l2, e.symcurl);

    std::fs::write(&out, save_fef(&u))?;
    let v = load_fef(&space, &std::fs::read_to_string(&out)?)?;
    assert_eq!(u.coeffs(), v.coeffs());

    let x = Vec3::new(0.3, 0.45, 0.8);
    let cell = (0..space.mesh().num_cells()).find(|&c| space.contains(c, &x)).unwrap();
    println!("U({:?})   = {:+.5?}", x.0, TrigField.value(&x).0);
    println!("U_h({:?}) = {:+.5?}", x.0, v.evaluate(cell, &x)?.0);
    println!("wrote {out}");
    Ok(())
}
