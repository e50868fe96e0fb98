use std::collections::HashMap;

use super::OrientedMesh;
use crate::error::MeshError;
use crate::polyspace::{hex_corner_bits, CellKind};
use crate::tensor3::Vec3;

/// Hands out one new vertex per set of parent vertices (edge midpoints, face
/// and cell centers), shared between all cells that touch the set.
struct MidpointTable<'a> {
    parent: &'a [Vec3],
    vertices: Vec<Vec3>,
    index: HashMap<Vec<usize>, usize>,
}

impl<'a> MidpointTable<'a> {
    fn new(parent: &'a [Vec3]) -> Self {
        MidpointTable {
            parent,
            vertices: parent.to_vec(),
            index: HashMap::new(),
        }
    }

    fn center_of(&mut self, mut ids: Vec<usize>) -> usize {
        ids.sort_unstable();
        ids.dedup();
        if ids.len() == 1 {
            return ids[0];
        }
        if let Some(&i) = self.index.get(&ids) {
            return i;
        }
        let c = ids
            .iter()
            .fold(Vec3::ZERO, |acc, &v| acc + self.parent[v])
            * (1.0 / ids.len() as f64);
        let i = self.vertices.len();
        self.vertices.push(c);
        self.index.insert(ids, i);
        i
    }
}

impl OrientedMesh {
    /// Uniform refinement: red refinement of every tetrahedron into 8
    /// children, midpoint subdivision of every hexahedron into 8 boxes.
    pub fn refine_uniform(&self) -> Result<OrientedMesh, MeshError> {
        let mut table = MidpointTable::new(&self.vertices);
        let mut cells = Vec::with_capacity(8 * self.num_cells());
        match self.kind {
            CellKind::Tet => {
                for cell in &self.cells {
                    red_refine(cell, &mut table, &mut cells);
                }
            }
            CellKind::Hex => {
                for cell in &self.cells {
                    // 3×3×3 sub-lattice; along each axis index 0 and 2 pick one
                    // parent corner side, index 1 averages both
                    let point = |table: &mut MidpointTable, idx: [usize; 3]| {
                        let ids: Vec<usize> = (0..8)
                            .filter(|&c| {
                                let b = hex_corner_bits(c);
                                (0..3).all(|d| idx[d] == 1 || idx[d] == 2 * b[d])
                            })
                            .map(|c| cell[c])
                            .collect();
                        table.center_of(ids)
                    };
                    for child in 0..8 {
                        let o = hex_corner_bits(child);
                        let corners: Vec<usize> = (0..8)
                            .map(|c| {
                                let b = hex_corner_bits(c);
                                point(&mut table, [o[0] + b[0], o[1] + b[1], o[2] + b[2]])
                            })
                            .collect();
                        cells.push(corners);
                    }
                }
            }
        }
        OrientedMesh::new(self.kind, table.vertices, cells)
    }
}

fn red_refine(cell: &[usize], table: &mut MidpointTable, out: &mut Vec<Vec<usize>>) {
    let v = cell;
    let mut m = [[0usize; 4]; 4];
    for i in 0..4 {
        m[i][i] = v[i];
        for j in i + 1..4 {
            let id = table.center_of(vec![v[i], v[j]]);
            m[i][j] = id;
            m[j][i] = id;
        }
    }
    // corner children
    for i in 0..4 {
        out.push((0..4).map(|j| m[i][j]).collect());
    }
    // inner octahedron: pick the shortest of the three diagonals m_ij–m_kl
    // joining midpoints of opposite edges; near-ties go to the pair with the
    // lowest vertex index
    let diagonals = [([0, 1], [2, 3]), ([0, 2], [1, 3]), ([0, 3], [1, 2])];
    let length = |(a, b): ([usize; 2], [usize; 2])| {
        (table.vertices[m[a[0]][a[1]]] - table.vertices[m[b[0]][b[1]]]).norm()
    };
    let key = |d: ([usize; 2], [usize; 2])| {
        let (p, q) = (m[d.0[0]][d.0[1]], m[d.1[0]][d.1[1]]);
        (p.min(q), p.max(q))
    };
    let mut best = diagonals[0];
    for &d in &diagonals[1..] {
        let (lb, ld) = (length(best), length(d));
        let tie = (lb - ld).abs() <= 1e-12 * lb.max(ld);
        if (!tie && ld < lb) || (tie && key(d) < key(best)) {
            best = d;
        }
    }
    let (p, q) = (m[best.0[0]][best.0[1]], m[best.1[0]][best.1[1]]);
    // equator: the other four midpoints, ordered cyclically; consecutive
    // midpoints share a parent vertex
    let mut equator: Vec<[usize; 2]> = diagonals
        .iter()
        .filter(|&&d| d != best)
        .flat_map(|&(a, b)| [a, b])
        .collect();
    let mut ring = vec![equator.remove(0)];
    while !equator.is_empty() {
        let last = *ring.last().unwrap();
        let next = equator
            .iter()
            .position(|e| e.iter().any(|x| last.contains(x)))
            .expect("octahedron equator is a 4-cycle");
        ring.push(equator.remove(next));
    }
    for i in 0..4 {
        let (a, b) = (ring[i], ring[(i + 1) % 4]);
        out.push(vec![p, q, m[a[0]][a[1]], m[b[0]][b[1]]]);
    }
}

#[cfg(test)]
mod tests {
    use crate::mesh::{generate_unit_cube_hexes, generate_unit_cube_tets};

    #[test]
    fn refinement_counts_and_volume() {
        let t = generate_unit_cube_tets(1).unwrap();
        let r = t.refine_uniform().unwrap();
        assert_eq!(r.num_cells(), 48);
        assert!((r.total_volume() - t.total_volume()).abs() < 1e-12);
        let h = generate_unit_cube_hexes(1).unwrap();
        let rh = h.refine_uniform().unwrap();
        assert_eq!(rh.num_cells(), 8);
        assert_eq!(rh.num_vertices(), 27);
        assert!((rh.total_volume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diameters_halve_on_structured_input() {
        for mesh in [generate_unit_cube_tets(1).unwrap(), generate_unit_cube_hexes(2).unwrap()] {
            let mut m = mesh;
            for _ in 0..2 {
                let r = m.refine_uniform().unwrap();
                assert!((r.max_diameter() - m.max_diameter() / 2.0).abs() < 1e-12);
                m = r;
            }
        }
    }

    #[test]
    fn refined_tets_stay_conforming_and_shape_regular() {
        let m = generate_unit_cube_tets(1).unwrap();
        let r = m.refine_uniform().unwrap().refine_uniform().unwrap();
        assert_eq!(r.num_cells(), 6 * 64);
        // every interior face has two cells, and the count of boundary faces
        // equals that of the structured 4×4×4 Kuhn mesh
        let reference = generate_unit_cube_tets(4).unwrap();
        let boundary = |m: &crate::mesh::OrientedMesh| (0..m.num_faces()).filter(|&f| m.is_boundary_face(f)).count();
        assert_eq!(boundary(&r), boundary(&reference));
        let worst = |m: &crate::mesh::OrientedMesh| {
            (0..m.num_cells()).map(|c| m.cell_geometry(c).shape_ratio()).fold(0.0, f64::max)
        };
        // the first refinement may introduce a second shape class; after
        // that the worst shape ratio is stable
        let once = m.refine_uniform().unwrap();
        assert!(worst(&once) < 1.5 * worst(&m));
        assert!(worst(&r) <= worst(&once) + 1e-9);
    }
}
