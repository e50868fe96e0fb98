//! Conforming tetrahedral and axis-aligned hexahedral grids with derived
//! topology and globally fixed orientation frames.
//!
//! Edges and faces are numbered by the lexicographic order of their sorted
//! global vertex tuples, so numbering and frames are a pure function of the
//! connectivity. Frames are stored per global entity; every cell sees the
//! same frame object for a shared entity.

mod generate;
mod io;
mod refine;

pub use generate::{generate_unit_cube_hexes, generate_unit_cube_tets};
pub use io::{load_mesh, save_mesh};

use std::collections::HashMap;

use serde::Serialize;

use crate::error::MeshError;
use crate::polyspace::{hex_corner_bits, CellKind};
use crate::tensor3::{EdgeFrame, FaceFrame, Mat3, Vec3, VertexFrame};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Vertex,
    Edge,
    Face,
    Cell,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    /// Global vertex ids in ascending order.
    pub sorted: Vec<usize>,
    /// The same vertices in cyclic order around the face.
    pub cyclic: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellGeometry {
    pub cell: usize,
    pub vertices: Vec<Vec3>,
    pub volume: f64,
    /// Diameter `h_T`: largest vertex distance.
    pub diameter: f64,
    /// Radius `ρ_T` of the largest inscribed ball.
    pub inradius: f64,
}

impl CellGeometry {
    pub fn shape_ratio(&self) -> f64 {
        self.diameter / self.inradius
    }
}

#[derive(Clone, Debug)]
pub struct OrientedMesh {
    kind: CellKind,
    vertices: Vec<Vec3>,
    cells: Vec<Vec<usize>>,
    edges: Vec<[usize; 2]>,
    faces: Vec<Face>,
    cell_edges: Vec<Vec<usize>>,
    cell_faces: Vec<Vec<usize>>,
    face_cells: Vec<Vec<usize>>,
    edge_faces: Vec<Vec<usize>>,
    edge_cells: Vec<Vec<usize>>,
    vertex_cells: Vec<Vec<usize>>,
    face_frames: Vec<FaceFrame>,
    edge_frames: Vec<EdgeFrame>,
    vertex_frames: Option<Vec<VertexFrame>>,
    boundary_vertex: Vec<bool>,
    boundary_edge: Vec<bool>,
}

/// Relative tolerance for geometric predicates (box alignment, planarity).
const GEOM_TOL: f64 = 1e-10;

impl OrientedMesh {
    /// Builds a mesh and derives its topology and frames. Hexahedra must be
    /// axis-aligned boxes with corners in lexicographic order.
    pub fn new(kind: CellKind, vertices: Vec<Vec3>, cells: Vec<Vec<usize>>) -> Result<Self, MeshError> {
        let mesh = Self::new_general(kind, vertices, cells)?;
        if kind == CellKind::Hex {
            for c in 0..mesh.num_cells() {
                if mesh.cell_box(c).is_none() {
                    return Err(MeshError::NonAxisAlignedHex { cell: c });
                }
            }
        }
        Ok(mesh)
    }

    /// Like [`OrientedMesh::new`] but accepts general (e.g. sheared)
    /// hexahedra. Such meshes support topology queries and
    /// [`OrientedMesh::three_normal_check`], but no finite element space.
    pub fn new_general(
        kind: CellKind,
        vertices: Vec<Vec3>,
        cells: Vec<Vec<usize>>,
    ) -> Result<Self, MeshError> {
        let nv = vertices.len();
        for (c, cell) in cells.iter().enumerate() {
            if cell.len() != kind.vertex_count() {
                return Err(MeshError::MixedCellKinds {
                    line: 0,
                    expected: kind,
                    found: cell.len(),
                });
            }
            for &v in cell {
                if v >= nv {
                    return Err(MeshError::IndexOutOfRange {
                        cell: c,
                        index: v,
                        vertices: nv,
                    });
                }
            }
            let mut s = cell.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != cell.len() {
                return Err(MeshError::DegenerateCell { cell: c });
            }
        }

        let mut mesh = OrientedMesh {
            kind,
            vertices,
            cells,
            edges: Vec::new(),
            faces: Vec::new(),
            cell_edges: Vec::new(),
            cell_faces: Vec::new(),
            face_cells: Vec::new(),
            edge_faces: Vec::new(),
            edge_cells: Vec::new(),
            vertex_cells: Vec::new(),
            face_frames: Vec::new(),
            edge_frames: Vec::new(),
            vertex_frames: None,
            boundary_vertex: Vec::new(),
            boundary_edge: Vec::new(),
        };
        for c in 0..mesh.num_cells() {
            let g = mesh.cell_geometry(c);
            if !(g.volume > 1e-14 * g.diameter.powi(3)) {
                return Err(MeshError::DegenerateCell { cell: c });
            }
        }
        mesh.derive_topology()?;
        mesh.derive_frames()?;
        Ok(mesh)
    }

    fn derive_topology(&mut self) -> Result<(), MeshError> {
        let kind = self.kind;
        let mut edge_set: Vec<[usize; 2]> = Vec::new();
        let mut face_set: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for cell in &self.cells {
            for e in kind.edges() {
                let (a, b) = (cell[e[0]], cell[e[1]]);
                edge_set.push([a.min(b), a.max(b)]);
            }
            for f in kind.faces() {
                let cyclic: Vec<usize> = f.iter().map(|&l| cell[l]).collect();
                let mut sorted = cyclic.clone();
                sorted.sort_unstable();
                face_set.push((sorted, cyclic));
            }
        }
        edge_set.sort_unstable();
        edge_set.dedup();
        face_set.sort_by(|a, b| a.0.cmp(&b.0));
        face_set.dedup_by(|a, b| a.0 == b.0);

        let edge_index: HashMap<[usize; 2], usize> =
            edge_set.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let face_index: HashMap<Vec<usize>, usize> = face_set
            .iter()
            .enumerate()
            .map(|(i, f)| (f.0.clone(), i))
            .collect();

        let ne = edge_set.len();
        let nf = face_set.len();
        let mut face_cells = vec![Vec::new(); nf];
        let mut edge_cells = vec![Vec::new(); ne];
        let mut vertex_cells = vec![Vec::new(); self.vertices.len()];
        let mut cell_edges = Vec::with_capacity(self.cells.len());
        let mut cell_faces = Vec::with_capacity(self.cells.len());
        for (c, cell) in self.cells.iter().enumerate() {
            let ce: Vec<usize> = kind
                .edges()
                .iter()
                .map(|e| {
                    let (a, b) = (cell[e[0]], cell[e[1]]);
                    edge_index[&[a.min(b), a.max(b)]]
                })
                .collect();
            let cf: Vec<usize> = kind
                .faces()
                .iter()
                .map(|f| {
                    let mut s: Vec<usize> = f.iter().map(|&l| cell[l]).collect();
                    s.sort_unstable();
                    face_index[&s]
                })
                .collect();
            for &e in &ce {
                edge_cells[e].push(c);
            }
            for &f in &cf {
                face_cells[f].push(c);
            }
            for &v in cell {
                vertex_cells[v].push(c);
            }
            cell_edges.push(ce);
            cell_faces.push(cf);
        }
        for (f, cells) in face_cells.iter().enumerate() {
            if cells.len() > 2 {
                return Err(MeshError::NonConforming(format!(
                    "face {:?} is shared by {} cells",
                    face_set[f].0,
                    cells.len()
                )));
            }
        }

        let mut edge_faces = vec![Vec::new(); ne];
        for (f, (sorted, cyclic)) in face_set.iter().enumerate() {
            let m = cyclic.len();
            for i in 0..m {
                let (a, b) = (cyclic[i], cyclic[(i + 1) % m]);
                let e = *edge_index.get(&[a.min(b), a.max(b)]).ok_or_else(|| {
                    MeshError::NonConforming(format!("face {sorted:?} has an unknown edge"))
                })?;
                edge_faces[e].push(f);
            }
        }

        let mut boundary_vertex = vec![false; self.vertices.len()];
        let mut boundary_edge = vec![false; ne];
        for (f, cells) in face_cells.iter().enumerate() {
            if cells.len() == 1 {
                let cyc = &face_set[f].1;
                let m = cyc.len();
                for i in 0..m {
                    boundary_vertex[cyc[i]] = true;
                    let (a, b) = (cyc[i], cyc[(i + 1) % m]);
                    boundary_edge[edge_index[&[a.min(b), a.max(b)]]] = true;
                }
            }
        }

        self.edges = edge_set;
        self.faces = face_set
            .into_iter()
            .map(|(sorted, cyclic)| Face { sorted, cyclic })
            .collect();
        self.cell_edges = cell_edges;
        self.cell_faces = cell_faces;
        self.face_cells = face_cells;
        self.edge_faces = edge_faces;
        self.edge_cells = edge_cells;
        self.vertex_cells = vertex_cells;
        self.boundary_vertex = boundary_vertex;
        self.boundary_edge = boundary_edge;
        Ok(())
    }

    /// Face normal from the three lowest global vertex ids `a < b < c`:
    /// `n ∝ (v_b - v_a) × (v_c - v_a)`, tangents along `v_b - v_a` and
    /// `v_c - v_a`. Edge tangents point from the lower to the higher global
    /// vertex id. Hexahedral vertices get the canonical axis triple.
    fn derive_frames(&mut self) -> Result<(), MeshError> {
        let mut face_frames = Vec::with_capacity(self.faces.len());
        for (f, face) in self.faces.iter().enumerate() {
            let [a, b, c] = [face.sorted[0], face.sorted[1], face.sorted[2]];
            let (va, vb, vc) = (self.vertices[a], self.vertices[b], self.vertices[c]);
            let u = vb - va;
            let w = vc - va;
            let cross = u.cross(&w);
            if cross.norm() <= 1e-12 * u.norm() * w.norm() {
                return Err(MeshError::DegenerateFace { face: f });
            }
            face_frames.push(FaceFrame {
                normal: cross.normalized().ok_or(MeshError::DegenerateFace { face: f })?,
                a1: u.normalized().ok_or(MeshError::DegenerateFace { face: f })?,
                a2: w.normalized().ok_or(MeshError::DegenerateFace { face: f })?,
            });
        }
        let mut edge_frames = Vec::with_capacity(self.edges.len());
        for &[lo, hi] in &self.edges {
            let t = (self.vertices[hi] - self.vertices[lo])
                .normalized()
                .ok_or(MeshError::DegenerateCell { cell: self.edge_cells[edge_frames.len()][0] })?;
            edge_frames.push(EdgeFrame::from_tangent(t)?);
        }
        self.face_frames = face_frames;
        self.edge_frames = edge_frames;
        self.vertex_frames = match self.kind {
            CellKind::Hex => Some(vec![VertexFrame::canonical(); self.vertices.len()]),
            CellKind::Tet => None,
        };
        Ok(())
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }
    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }
    pub fn vertex(&self, v: usize) -> Vec3 {
        self.vertices[v]
    }
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }
    pub fn cell(&self, c: usize) -> &[usize] {
        &self.cells[c]
    }
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }
    /// Edge as `[low, high]` global vertex ids.
    pub fn edge(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }
    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }
    /// Global edge ids of a cell, in local edge order.
    pub fn cell_edges(&self, c: usize) -> &[usize] {
        &self.cell_edges[c]
    }
    /// Global face ids of a cell, in local face order.
    pub fn cell_faces(&self, c: usize) -> &[usize] {
        &self.cell_faces[c]
    }
    pub fn face_cells(&self, f: usize) -> &[usize] {
        &self.face_cells[f]
    }
    pub fn edge_faces(&self, e: usize) -> &[usize] {
        &self.edge_faces[e]
    }
    pub fn edge_cells(&self, e: usize) -> &[usize] {
        &self.edge_cells[e]
    }
    pub fn vertex_cells(&self, v: usize) -> &[usize] {
        &self.vertex_cells[v]
    }
    pub fn face_frame(&self, f: usize) -> &FaceFrame {
        &self.face_frames[f]
    }
    pub fn edge_frame(&self, e: usize) -> &EdgeFrame {
        &self.edge_frames[e]
    }
    pub fn vertex_frame(&self, v: usize) -> Option<&VertexFrame> {
        self.vertex_frames.as_ref().map(|f| &f[v])
    }
    pub fn is_boundary_face(&self, f: usize) -> bool {
        self.face_cells[f].len() == 1
    }
    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.boundary_edge[e]
    }
    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }
    pub fn interior_faces(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_faces()).filter(|&f| self.face_cells[f].len() == 2)
    }

    pub fn cell_vertices(&self, c: usize) -> Vec<Vec3> {
        self.cells[c].iter().map(|&v| self.vertices[v]).collect()
    }

    /// Lower and upper corner if the hexahedron is an axis-aligned box with
    /// lexicographically ordered corners; `None` otherwise (or for tets).
    pub fn cell_box(&self, c: usize) -> Option<(Vec3, Vec3)> {
        if self.kind != CellKind::Hex {
            return None;
        }
        let v = self.cell_vertices(c);
        let (lo, hi) = (v[0], v[7]);
        let ext = hi - lo;
        if (0..3).any(|d| !(ext[d] > 0.0)) {
            return None;
        }
        let tol = GEOM_TOL * ext.max_abs();
        for (corner, p) in v.iter().enumerate() {
            let b = hex_corner_bits(corner);
            for d in 0..3 {
                let expect = if b[d] == 1 { hi[d] } else { lo[d] };
                if (p[d] - expect).abs() > tol {
                    return None;
                }
            }
        }
        Some((lo, hi))
    }

    pub fn cell_geometry(&self, c: usize) -> CellGeometry {
        let v = self.cell_vertices(c);
        let mut diameter: f64 = 0.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                diameter = diameter.max((v[i] - v[j]).norm());
            }
        }
        let (volume, inradius) = match self.kind {
            CellKind::Tet => {
                let vol = Mat3::from_rows([v[1] - v[0], v[2] - v[0], v[3] - v[0]]).det().abs() / 6.0;
                let area: f64 = CellKind::Tet
                    .faces()
                    .iter()
                    .map(|f| 0.5 * (v[f[1]] - v[f[0]]).cross(&(v[f[2]] - v[f[0]])).norm())
                    .sum();
                (vol, 3.0 * vol / area)
            }
            CellKind::Hex => {
                // parallelepiped spanned at corner 0; exact for boxes
                let e = [v[1] - v[0], v[2] - v[0], v[4] - v[0]];
                let vol = Mat3::from_rows(e).det().abs();
                let min_height = (0..3)
                    .map(|i| {
                        let n = e[(i + 1) % 3].cross(&e[(i + 2) % 3]);
                        if n.norm() == 0.0 {
                            0.0
                        } else {
                            vol / n.norm()
                        }
                    })
                    .fold(f64::INFINITY, f64::min);
                (vol, 0.5 * min_height)
            }
        };
        CellGeometry {
            cell: c,
            vertices: v,
            volume,
            diameter,
            inradius,
        }
    }

    /// Largest cell diameter.
    pub fn max_diameter(&self) -> f64 {
        (0..self.num_cells())
            .map(|c| self.cell_geometry(c).diameter)
            .fold(0.0, f64::max)
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.num_cells()).map(|c| self.cell_geometry(c).volume).sum()
    }

    /// For every vertex: does each incident face lie in a plane orthogonal
    /// to one of the three vertex-frame axes?
    pub fn three_normal_check(&self) -> Result<Vec<bool>, MeshError> {
        if self.kind != CellKind::Hex {
            return Err(MeshError::WrongCellKind {
                expected: CellKind::Hex,
                found: self.kind,
            });
        }
        let frames = self.vertex_frames.as_ref().expect("hex meshes carry vertex frames");
        let mut ok = vec![true; self.num_vertices()];
        for face in &self.faces {
            let pts: Vec<Vec3> = face.sorted.iter().map(|&v| self.vertices[v]).collect();
            let scale = pts
                .iter()
                .flat_map(|p| pts.iter().map(move |q| (*p - *q).norm()))
                .fold(0.0, f64::max);
            for &v in &face.sorted {
                let orthogonal_to_some_axis = frames[v].axes.iter().any(|axis| {
                    let h0 = pts[0].dot(axis);
                    pts.iter().all(|p| (p.dot(axis) - h0).abs() <= GEOM_TOL * scale)
                });
                if !orthogonal_to_some_axis {
                    ok[v] = false;
                }
            }
        }
        Ok(ok)
    }

    /// Replaces vertex coordinates without touching connectivity. Intended
    /// for building perturbed test geometries.
    pub fn with_vertices(&self, vertices: Vec<Vec3>) -> Result<Self, MeshError> {
        Self::new_general(self.kind, vertices, self.cells.clone())
    }

    /// Local vertex index of global vertex `v` in cell `c`.
    pub fn local_vertex(&self, c: usize, v: usize) -> Option<usize> {
        self.cells[c].iter().position(|&x| x == v)
    }
}
