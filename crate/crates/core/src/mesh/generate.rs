use super::OrientedMesh;
use crate::error::MeshError;
use crate::polyspace::{hex_corner_bits, CellKind};
use crate::tensor3::Vec3;

fn lattice_vertices(n: usize) -> Vec<Vec3> {
    let h = 1.0 / n as f64;
    let mut v = Vec::with_capacity((n + 1).pow(3));
    for k in 0..=n {
        for j in 0..=n {
            for i in 0..=n {
                v.push(Vec3::new(i as f64 * h, j as f64 * h, k as f64 * h));
            }
        }
    }
    v
}

fn corner_ids(n: usize, i: usize, j: usize, k: usize) -> [usize; 8] {
    let id = |a: usize, b: usize, c: usize| a + (n + 1) * (b + (n + 1) * c);
    std::array::from_fn(|c| {
        let b = hex_corner_bits(c);
        id(i + b[0], j + b[1], k + b[2])
    })
}

/// `n³` sub-cubes of the unit cube, each split into the 6 Kuhn tetrahedra
/// along the main diagonal.
pub fn generate_unit_cube_tets(n: usize) -> Result<OrientedMesh, MeshError> {
    if n == 0 {
        return Err(MeshError::EmptyGrid);
    }
    // Kuhn simplices: walk from corner 0 to corner 7 one axis at a time.
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut cells = Vec::with_capacity(6 * n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let corners = corner_ids(n, i, j, k);
                for p in PERMS {
                    let mut bits = 0usize;
                    let mut tet = vec![corners[0]];
                    for axis in p {
                        bits |= 1 << axis;
                        tet.push(corners[bits]);
                    }
                    cells.push(tet);
                }
            }
        }
    }
    OrientedMesh::new(CellKind::Tet, lattice_vertices(n), cells)
}

/// `n³` axis-aligned hexahedra covering the unit cube.
pub fn generate_unit_cube_hexes(n: usize) -> Result<OrientedMesh, MeshError> {
    if n == 0 {
        return Err(MeshError::EmptyGrid);
    }
    let mut cells = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                cells.push(corner_ids(n, i, j, k).to_vec());
            }
        }
    }
    OrientedMesh::new(CellKind::Hex, lattice_vertices(n), cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kuhn_counts() {
        let m1 = generate_unit_cube_tets(1).unwrap();
        assert_eq!((m1.num_cells(), m1.num_vertices()), (6, 8));
        let m2 = generate_unit_cube_tets(2).unwrap();
        assert_eq!(m2.num_cells(), 48);
        assert!((m2.total_volume() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kuhn_incidence_audit() {
        // brute force: count cells containing each face's vertex set
        let m = generate_unit_cube_tets(2).unwrap();
        for f in 0..m.num_faces() {
            let verts = &m.face(f).sorted;
            let count = m
                .cells()
                .iter()
                .filter(|c| verts.iter().all(|v| c.contains(v)))
                .count();
            assert_eq!(count, m.face_cells(f).len());
            let on_boundary = (0..3).any(|d| {
                [0.0, 1.0].iter().any(|b| verts.iter().all(|&w| m.vertex(w)[d] == *b))
            });
            assert_eq!(count, if on_boundary { 1 } else { 2 }, "face {verts:?}");
        }
    }

    #[test]
    fn hex_counts() {
        let m = generate_unit_cube_hexes(1).unwrap();
        assert_eq!((m.num_cells(), m.num_faces(), m.num_edges()), (1, 6, 12));
        let m2 = generate_unit_cube_hexes(2).unwrap();
        let center = (0..m2.num_vertices())
            .find(|&v| m2.vertex(v) == Vec3::new(0.5, 0.5, 0.5))
            .unwrap();
        assert_eq!(m2.vertex_cells(center).len(), 8);
        assert!(!m2.is_boundary_vertex(center));
    }

    #[test]
    fn hex_face_normals_are_axis_aligned() {
        let m = generate_unit_cube_hexes(3).unwrap();
        assert_eq!(m.num_cells(), 27);
        for f in 0..m.num_faces() {
            let n = m.face_frame(f).normal;
            let hits = (0..3).filter(|&d| (n[d].abs() - 1.0).abs() < 1e-14).count();
            assert_eq!(hits, 1, "{n:?}");
            // the sign follows (v_b - v_a) × (v_c - v_a) for the sorted ids
            let s = &m.face(f).sorted;
            let expected = (m.vertex(s[1]) - m.vertex(s[0]))
                .cross(&(m.vertex(s[2]) - m.vertex(s[0])))
                .normalized()
                .unwrap();
            assert_eq!(n, expected);
        }
    }

    #[test]
    fn structured_hexes_pass_three_normal_check() {
        let m = generate_unit_cube_hexes(2).unwrap();
        assert!(m.three_normal_check().unwrap().iter().all(|&b| b));
    }

    #[test]
    fn sheared_vertex_fails_three_normal_check() {
        let m = generate_unit_cube_hexes(2).unwrap();
        let center = (0..m.num_vertices())
            .find(|&v| m.vertex(v) == Vec3::new(0.5, 0.5, 0.5))
            .unwrap();
        let mut verts = m.vertices().to_vec();
        verts[center] = Vec3::new(0.6, 0.55, 0.5);
        let sheared = m.with_vertices(verts).unwrap();
        let ok = sheared.three_normal_check().unwrap();
        assert!(!ok[center]);
        // corners of the cube touch no perturbed face
        assert!(ok[0]);
        // and the strict constructor refuses it
        assert!(matches!(
            OrientedMesh::new(CellKind::Hex, sheared.vertices().to_vec(), sheared.cells().to_vec()),
            Err(MeshError::NonAxisAlignedHex { .. })
        ));
    }

    #[test]
    fn zero_subdivisions_rejected() {
        assert!(matches!(generate_unit_cube_tets(0), Err(MeshError::EmptyGrid)));
    }
}
