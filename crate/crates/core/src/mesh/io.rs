//! The `.m3` mesh text format.
//!
//! ```text
//! m3 <tet|hex> <#vertices> <#cells>
//! v x y z                      (one line per vertex)
//! c i0 i1 i2 i3 [i4 .. i7]     (one line per cell, 0-based)
//! ```
//!
//! Hex corners are listed in lexicographic order of the unit-box pattern
//! (0,0,0), (1,0,0), (0,1,0), (1,1,0), (0,0,1), ... Blank lines are
//! ignored and `#` starts a comment.

use std::fmt::Write;

use super::OrientedMesh;
use crate::error::MeshError;
use crate::polyspace::CellKind;
use crate::tensor3::Vec3;

pub fn load_mesh(text: &str) -> Result<OrientedMesh, MeshError> {
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("").trim();
        (!content.is_empty()).then_some((i + 1, content))
    });

    let (_, header) = lines
        .next()
        .ok_or_else(|| MeshError::MalformedHeader("empty input".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "m3" {
        return Err(MeshError::MalformedHeader(header.to_string()));
    }
    let kind: CellKind = tokens[1].parse().map_err(MeshError::MalformedHeader)?;
    let nv: usize = tokens[2]
        .parse()
        .map_err(|_| MeshError::MalformedHeader(header.to_string()))?;
    let nc: usize = tokens[3]
        .parse()
        .map_err(|_| MeshError::MalformedHeader(header.to_string()))?;

    let mut vertices = Vec::with_capacity(nv);
    let mut cells = Vec::with_capacity(nc);
    for (line, content) in lines {
        let mut it = content.split_whitespace();
        let tag = it.next().unwrap_or_default();
        let rest: Vec<&str> = it.collect();
        let parse_err = |message: String| MeshError::Parse { line, message };
        match tag {
            "v" => {
                if !cells.is_empty() {
                    return Err(parse_err("vertex after the first cell".into()));
                }
                if rest.len() != 3 {
                    return Err(parse_err(format!("expected 3 coordinates, found {}", rest.len())));
                }
                let mut xyz = [0.0; 3];
                for (d, tok) in rest.iter().enumerate() {
                    xyz[d] = tok
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| parse_err(format!("bad coordinate `{tok}`")))?;
                }
                vertices.push(Vec3(xyz));
            }
            "c" => {
                if rest.len() != kind.vertex_count() {
                    return Err(MeshError::MixedCellKinds {
                        line,
                        expected: kind,
                        found: rest.len(),
                    });
                }
                let mut cell = Vec::with_capacity(rest.len());
                for tok in rest {
                    let idx: usize = tok
                        .parse()
                        .map_err(|_| parse_err(format!("bad vertex index `{tok}`")))?;
                    if idx >= nv {
                        return Err(MeshError::IndexOutOfRange {
                            cell: cells.len(),
                            index: idx,
                            vertices: nv,
                        });
                    }
                    cell.push(idx);
                }
                cells.push(cell);
            }
            other => return Err(parse_err(format!("unknown record `{other}`"))),
        }
    }
    if vertices.len() != nv || cells.len() != nc {
        return Err(MeshError::MalformedHeader(format!(
            "header announces {nv} vertices and {nc} cells, found {} and {}",
            vertices.len(),
            cells.len()
        )));
    }
    OrientedMesh::new(kind, vertices, cells)
}

pub fn save_mesh(mesh: &OrientedMesh) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "m3 {} {} {}",
        mesh.kind().name(),
        mesh.num_vertices(),
        mesh.num_cells()
    )
    .unwrap();
    for v in mesh.vertices() {
        // Display for f64 is the shortest string that round-trips
        writeln!(out, "v {} {} {}", v[0], v[1], v[2]).unwrap();
    }
    for cell in mesh.cells() {
        out.push('c');
        for i in cell {
            write!(out, " {i}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_unit_cube_hexes, generate_unit_cube_tets};

    const SINGLE_TET: &str = "# one tetrahedron\nm3 tet 4 1\nv 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nc 0 1 2 3 # cell\n";

    #[test]
    fn single_tet_file() {
        let m = load_mesh(SINGLE_TET).unwrap();
        assert_eq!(m.num_faces(), 4);
        assert!((0..4).all(|f| m.is_boundary_face(f)));
    }

    #[test]
    fn round_trip_generated_meshes() {
        for m in [
            generate_unit_cube_tets(2).unwrap(),
            generate_unit_cube_hexes(2).unwrap(),
        ] {
            let text = save_mesh(&m);
            let back = load_mesh(&text).unwrap();
            assert_eq!(back.vertices(), m.vertices());
            assert_eq!(back.cells(), m.cells());
            assert_eq!(save_mesh(&back), text);
        }
    }

    #[test]
    fn round_trip_awkward_coordinates() {
        let text = "m3 tet 4 1\nv 0.1 0.2 0.30000000000000004\nv 1e-7 0 0\nv 0 1.2345678901234567 0\nv 0 0 1\nc 0 1 2 3\n";
        let m = load_mesh(text).unwrap();
        let back = load_mesh(&save_mesh(&m)).unwrap();
        assert_eq!(back.vertices(), m.vertices());
    }

    #[test]
    fn index_out_of_range() {
        let mut text = String::from("m3 hex 8 1\n");
        for c in 0..8 {
            let b = crate::polyspace::hex_corner_bits(c);
            text += &format!("v {} {} {}\n", b[0], b[1], b[2]);
        }
        text += "c 0 1 2 3 4 5 6 99\n";
        assert!(matches!(
            load_mesh(&text),
            Err(MeshError::IndexOutOfRange { index: 99, .. })
        ));
    }

    #[test]
    fn distinct_errors() {
        assert!(matches!(load_mesh("m4 tet 1 1"), Err(MeshError::MalformedHeader(_))));
        assert!(matches!(load_mesh(""), Err(MeshError::MalformedHeader(_))));
        assert!(matches!(
            load_mesh("m3 tet 4 1\nv 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nc 0 1 2 3 0 1 2 3\n"),
            Err(MeshError::MixedCellKinds { line: 6, .. })
        ));
        assert!(matches!(
            load_mesh("m3 tet 4 1\nv 0 0 zero\n"),
            Err(MeshError::Parse { line: 2, .. })
        ));
        // three tets glued along one face
        let nonconf = "m3 tet 6 3\nv 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nv 0 0 -1\nv 1 1 1\nc 0 1 2 3\nc 0 1 2 4\nc 0 1 2 5\n";
        assert!(matches!(load_mesh(nonconf), Err(MeshError::NonConforming(_))));
        // a hex with corners out of lexicographic order
        let mut text = String::from("m3 hex 8 1\n");
        for c in [0usize, 1, 3, 2, 4, 5, 7, 6] {
            let b = crate::polyspace::hex_corner_bits(c);
            text += &format!("v {} {} {}\n", b[0], b[1], b[2]);
        }
        text += "c 0 1 2 3 4 5 6 7\n";
        assert!(matches!(load_mesh(&text), Err(MeshError::NonAxisAlignedHex { cell: 0 })));
    }
}
