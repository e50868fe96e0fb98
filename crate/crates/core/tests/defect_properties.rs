use symcurl::analysis::{face_defect, unit_cube, MatrixField, TrigField};
use symcurl::polyspace::CellKind;
use symcurl::space::GlobalSpace;

#[test]
fn defects_scale_with_the_function() {
    let space = GlobalSpace::new(unit_cube(CellKind::Tet, 1).unwrap(), 2).unwrap();
    let u = space.random_function(11);
    let d = face_defect(&u).unwrap();
    for s in [-3.0, 0.5, 1e6] {
        let ds = face_defect(&u.scaled(s)).unwrap();
        assert!((ds.max_raw - s.abs() * d.max_raw).abs() <= 1e-12 * s.abs() * d.max_raw);
        assert!(ds.normalized_sym < 1e-10);
    }
    assert_eq!(face_defect(&space.zero_function()).unwrap().max_raw, 0.0);
}

#[test]
fn interpolants_of_continuous_fields_are_continuous() {
    // private functionals of neighbouring cells sample the same field values
    for kind in [CellKind::Tet, CellKind::Hex] {
        for k in [1, 2] {
            let space = GlobalSpace::new(unit_cube(kind, 2).unwrap(), k).unwrap();
            let u = space.interpolate(|x| TrigField.value(x)).unwrap();
            let d = face_defect(&u).unwrap();
            assert!(d.max_raw < 1e-12, "{} k={k}: {d:?}", kind.name());
            // random members of the space are not
            assert!(face_defect(&space.random_function(5)).unwrap().max_raw > 1e-2);
        }
    }
}

#[test]
fn one_report_per_interior_face() {
    for (kind, interior) in [(CellKind::Tet, 72), (CellKind::Hex, 12)] {
        let mesh = unit_cube(kind, 2).unwrap();
        assert_eq!(mesh.interior_faces().count(), interior);
        let space = GlobalSpace::new(mesh, 1).unwrap();
        let d = face_defect(&space.random_function(0)).unwrap();
        assert_eq!(d.faces.len(), interior);
        assert!(d.faces.iter().all(|f| f.cells[0] < f.cells[1]));
    }
}
