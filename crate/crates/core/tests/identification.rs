//! Every cell that sees a shared global DOF must measure the same value from
//! its own local polynomial.

use symcurl::analysis::{unit_cube, MatrixField, PolyField};
use symcurl::polyspace::CellKind;
use symcurl::space::{FeFunction, GlobalSpace};

fn check_incarnations(u: &FeFunction<'_>) -> f64 {
    let space = u.space();
    let scale = u.max_coeff().max(1.0);
    let mut worst: f64 = 0.0;
    for cell in 0..space.mesh().num_cells() {
        let poly = u.local_poly(cell).unwrap();
        let dofs = space.cell_dofs(cell).unwrap();
        for (i, d) in dofs.iter().enumerate() {
            let g = space.local_to_global(cell)[i];
            let measured = d.apply(&poly.value(&d.point));
            worst = worst.max((measured - u.coeffs()[g]).abs() / scale);
        }
    }
    worst
}

#[test]
fn shared_dofs_agree_across_cells() {
    for (kind, n, k) in [
        (CellKind::Tet, 2, 1),
        (CellKind::Tet, 1, 2),
        (CellKind::Tet, 1, 3),
        (CellKind::Hex, 2, 1),
        (CellKind::Hex, 2, 2),
    ] {
        let space = GlobalSpace::new(unit_cube(kind, n).unwrap(), k).unwrap();
        for seed in 0..20 {
            let field = PolyField::random(k, seed);
            let u = space.interpolate(|x| field.value(x)).unwrap();
            let w = check_incarnations(&u);
            assert!(w < 1e-12, "{} k={k} poly seed {seed}: {w:e}", kind.name());
            let u = space.random_function(seed);
            let w = check_incarnations(&u);
            assert!(w < 1e-12, "{} k={k} random seed {seed}: {w:e}", kind.name());
        }
    }
}

#[test]
fn shared_functionals_are_identical_across_cells() {
    let space = GlobalSpace::new(unit_cube(CellKind::Tet, 2).unwrap(), 2).unwrap();
    let mut seen = std::collections::HashMap::new();
    for cell in 0..space.mesh().num_cells() {
        for (i, d) in space.cell_dofs(cell).unwrap().into_iter().enumerate() {
            if !d.class.is_shared() {
                continue;
            }
            let g = space.local_to_global(cell)[i];
            let entry = seen.entry(g).or_insert_with(|| (d.point, d.weight));
            assert_eq!(entry.0, d.point);
            assert_eq!(entry.1, d.weight);
        }
    }
    assert!(!seen.is_empty());
}
