//! The local finite element: ordered degree-of-freedom functionals, the
//! local DOF matrix with its nodal basis, and kernel audits of the
//! pointwise condition sets the functionals are built from.
//!
//! Every functional has the form `ℓ(U) = Σ w · leftᵀ U(L) right` with the
//! vectors taken from global entity frames, so two cells sharing an entity
//! produce literally the same linear map.

mod kernel;
mod local;

pub use kernel::{
    kernel_audit, kernel_basis, random_unit, sym_devsym_kernels, ConditionSet, FrameDraw,
    KernelAudit, KERNEL_TOL,
};
pub use local::{local_dof_matrix, nodal_basis, Conditioning, LocalElement, CONDITION_CUTOFF};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::ElementError;
use crate::mesh::{EntityKind, OrientedMesh};
use crate::polyspace::{lattice, CellKind, LatticePoint, SubEntity};
use crate::tensor3::{Mat3, Vec3};

/// How vertex degrees of freedom are formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexScheme {
    /// Off-diagonal entries, diagonal differences and a private trace.
    Continuous,
    /// Joint normal conditions, per-edge conditions and a private identity
    /// sum; needs a vertex frame whose axes are normal to all incident faces.
    ThreeNormal,
}

impl VertexScheme {
    pub fn default_for(kind: CellKind) -> Self {
        match kind {
            CellKind::Tet => VertexScheme::Continuous,
            CellKind::Hex => VertexScheme::ThreeNormal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SharingClass {
    SharedVertexOffdiag,
    SharedVertexDiag,
    SharedVertexHexjoint,
    SharedVertexHexedge,
    SharedEdgePlane,
    SharedEdgeFace,
    SharedFaceNormal,
    PrivateVertexTrace,
    PrivateEdgeIdentity,
    PrivateFaceTangential,
    PrivateInterior,
    PrivateVertexIdentityHex,
}

impl SharingClass {
    pub const ALL: [SharingClass; 12] = [
        SharingClass::SharedVertexOffdiag,
        SharingClass::SharedVertexDiag,
        SharingClass::SharedVertexHexjoint,
        SharingClass::SharedVertexHexedge,
        SharingClass::SharedEdgePlane,
        SharingClass::SharedEdgeFace,
        SharingClass::SharedFaceNormal,
        SharingClass::PrivateVertexTrace,
        SharingClass::PrivateEdgeIdentity,
        SharingClass::PrivateFaceTangential,
        SharingClass::PrivateInterior,
        SharingClass::PrivateVertexIdentityHex,
    ];

    pub fn is_shared(self) -> bool {
        matches!(
            self,
            SharingClass::SharedVertexOffdiag
                | SharingClass::SharedVertexDiag
                | SharingClass::SharedVertexHexjoint
                | SharingClass::SharedVertexHexedge
                | SharingClass::SharedEdgePlane
                | SharingClass::SharedEdgeFace
                | SharingClass::SharedFaceNormal
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            SharingClass::SharedVertexOffdiag => "shared_vertex_offdiag",
            SharingClass::SharedVertexDiag => "shared_vertex_diag",
            SharingClass::SharedVertexHexjoint => "shared_vertex_hexjoint",
            SharingClass::SharedVertexHexedge => "shared_vertex_hexedge",
            SharingClass::SharedEdgePlane => "shared_edge_plane",
            SharingClass::SharedEdgeFace => "shared_edge_face",
            SharingClass::SharedFaceNormal => "shared_face_normal",
            SharingClass::PrivateVertexTrace => "private_vertex_trace",
            SharingClass::PrivateEdgeIdentity => "private_edge_identity",
            SharingClass::PrivateFaceTangential => "private_face_tangential",
            SharingClass::PrivateInterior => "private_interior",
            SharingClass::PrivateVertexIdentityHex => "private_vertex_identity_hex",
        }
    }
}

/// Entity (with global id) and Lagrange point a functional is attached to.
/// Interior points are owned by the cell itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Owner {
    pub kind: EntityKind,
    pub id: usize,
    pub point: usize,
}

/// One addend `weight · leftᵀ U right`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Term {
    pub weight: f64,
    pub left: Vec3,
    pub right: Vec3,
}

impl Term {
    pub fn new(weight: f64, left: Vec3, right: Vec3) -> Self {
        Term { weight, left, right }
    }

    /// Entry selector `U ↦ U_ij`.
    pub fn entry(i: usize, j: usize) -> Self {
        Term::new(1.0, Vec3::unit(i), Vec3::unit(j))
    }
}

/// Matrix `W` with `Σ w · leftᵀ U right = W : U`.
pub fn weight_matrix(terms: &[Term]) -> Mat3 {
    terms
        .iter()
        .fold(Mat3::zeros(), |acc, t| acc + t.left.outer(&t.right) * t.weight)
}

/// Identifies the cross-cell equivalence class of a shared functional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ShareKey {
    pub owner: Owner,
    pub class: SharingClass,
    pub partner: Option<usize>,
    pub component: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DofFunctional {
    pub owner: Owner,
    pub class: SharingClass,
    /// Global face id for edge-face functionals, global edge id for
    /// hexahedral vertex-edge functionals.
    pub partner: Option<usize>,
    /// Position within the class at this owner and partner.
    pub component: usize,
    /// Evaluation point `L`.
    pub point: Vec3,
    pub terms: Vec<Term>,
    /// `W` with `ℓ(U) = W : U(L)`.
    pub weight: Mat3,
}

impl DofFunctional {
    fn new(
        owner: Owner,
        class: SharingClass,
        partner: Option<usize>,
        component: usize,
        point: Vec3,
        terms: Vec<Term>,
    ) -> Self {
        let weight = weight_matrix(&terms);
        DofFunctional {
            owner,
            class,
            partner,
            component,
            point,
            terms,
            weight,
        }
    }

    /// Applies the functional to a value `U(L)`.
    pub fn apply(&self, u: &Mat3) -> f64 {
        self.weight.ddot(u)
    }

    /// Applies the functional to a matrix field.
    pub fn apply_field(&self, field: impl Fn(&Vec3) -> Mat3) -> f64 {
        self.apply(&field(&self.point))
    }

    pub fn share_key(&self) -> Option<ShareKey> {
        self.class.is_shared().then_some(ShareKey {
            owner: self.owner,
            class: self.class,
            partner: self.partner,
            component: self.component,
        })
    }
}

/// Functionals at one point on an edge with frame `(t, n_{E,1}, n_{E,2})`:
/// two plane conditions, three per face normal, one identity condition.
pub fn edge_point_conditions(t: Vec3, edge_normals: [Vec3; 2], face_normals: &[Vec3]) -> Vec<Vec<Term>> {
    let mut out = vec![
        vec![Term::new(1.0, edge_normals[0], t)],
        vec![Term::new(1.0, edge_normals[1], t)],
    ];
    for &n in face_normals {
        out.extend(edge_face_conditions(t, n));
    }
    out.push(vec![Term::new(1.0, t, t)]);
    out
}

/// The three conditions tying an edge tangent `t` to an adjacent face with
/// normal `n`; the conormal is `∂ = t × n` so that `t = n × ∂`.
pub fn edge_face_conditions(t: Vec3, n: Vec3) -> [Vec<Term>; 3] {
    let d = t.cross(&n);
    let nt = n.cross(&t);
    [
        vec![Term::new(1.0, t, nt)],
        vec![Term::new(1.0, n, nt)],
        vec![Term::new(1.0, t, n.cross(&d)), Term::new(1.0, d, nt)],
    ]
}

/// The five conformity conditions of a face with frame `(a1, a2, n)`.
pub fn face_conformity_conditions(a1: Vec3, a2: Vec3, n: Vec3) -> [Vec<Term>; 5] {
    [
        vec![Term::new(1.0, a1, n.cross(&a1))],
        vec![Term::new(1.0, a2, n.cross(&a2))],
        vec![Term::new(1.0, a1, n.cross(&a2)), Term::new(1.0, a2, n.cross(&a1))],
        vec![Term::new(1.0, n, n.cross(&a1))],
        vec![Term::new(1.0, n, n.cross(&a2))],
    ]
}

/// The four complementary (tangential) conditions of a face.
pub fn face_tangential_conditions(a1: Vec3, a2: Vec3, n: Vec3) -> [Vec<Term>; 4] {
    [
        vec![Term::new(1.0, a1, n.cross(&a2)), Term::new(-1.0, a2, n.cross(&a1))],
        vec![Term::new(1.0, a1, n)],
        vec![Term::new(1.0, a2, n)],
        vec![Term::new(1.0, n, n)],
    ]
}

/// Off-diagonal selectors in row-major order.
pub const OFFDIAG: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];

/// Vertex conditions of the continuous scheme: 6 off-diagonals, 2 diagonal
/// differences, the trace.
pub fn vertex_conditions() -> Vec<Vec<Term>> {
    let mut out: Vec<Vec<Term>> = OFFDIAG.iter().map(|&(i, j)| vec![Term::entry(i, j)]).collect();
    out.push(vec![Term::entry(0, 0), Term::new(-1.0, Vec3::unit(1), Vec3::unit(1))]);
    out.push(vec![Term::entry(1, 1), Term::new(-1.0, Vec3::unit(2), Vec3::unit(2))]);
    out.push((0..3).map(|i| Term::entry(i, i)).collect());
    out
}

/// The two joint conditions at a three-normal vertex.
pub fn hex_joint_conditions(n: [Vec3; 3]) -> [Vec<Term>; 2] {
    [
        vec![
            Term::new(1.0, n[1], n[0].cross(&n[2])),
            Term::new(1.0, n[2], n[0].cross(&n[1])),
        ],
        vec![
            Term::new(1.0, n[2], n[1].cross(&n[0])),
            Term::new(1.0, n[0], n[1].cross(&n[2])),
        ],
    ]
}

/// Identity-controlling condition at a three-normal vertex.
pub fn hex_identity_condition(n: [Vec3; 3]) -> Vec<Term> {
    vec![
        Term::new(1.0, n[0], n[1].cross(&n[2])),
        Term::new(1.0, n[1], n[0].cross(&n[2])),
        Term::new(1.0, n[2], n[0].cross(&n[1])),
    ]
}

/// Lattice point with a cell-independent key: global vertex ids with their
/// integer weights, sorted by vertex id.
struct KeyedPoint {
    key: Vec<(usize, u64)>,
    denominator: u64,
    tag: SubEntity,
}

impl KeyedPoint {
    fn new(p: &LatticePoint, cell: &[usize]) -> Self {
        let mut key: Vec<(usize, u64)> = p.weights.iter().map(|&(l, w)| (cell[l], w)).collect();
        key.sort_unstable();
        KeyedPoint {
            key,
            denominator: p.denominator,
            tag: p.tag,
        }
    }

    /// Physical position, summed in global-id order so that every cell
    /// computes bit-identical coordinates.
    fn position(&self, mesh: &OrientedMesh) -> Vec3 {
        let d = self.denominator as f64;
        self.key
            .iter()
            .fold(Vec3::ZERO, |acc, &(v, w)| acc + mesh.vertex(v) * (w as f64 / d))
    }
}

/// Ordered DOF functionals of a tetrahedron (continuous vertex scheme).
pub fn tet_dofs(mesh: &OrientedMesh, cell: usize, k: usize) -> Result<Vec<DofFunctional>, ElementError> {
    if mesh.kind() != CellKind::Tet {
        return Err(ElementError::SchemeMismatch {
            scheme: VertexScheme::Continuous,
            kind: mesh.kind(),
        });
    }
    cell_dofs(mesh, cell, k, VertexScheme::Continuous)
}

/// Ordered DOF functionals of an axis-aligned hexahedron (three-normal
/// vertex scheme).
pub fn hex_dofs(mesh: &OrientedMesh, cell: usize, k: usize) -> Result<Vec<DofFunctional>, ElementError> {
    cell_dofs(mesh, cell, k, VertexScheme::ThreeNormal)
}

/// Ordered DOF functionals of any cell: vertices, edges, faces, interior;
/// within each kind by global entity id, then Lagrange point index, then
/// item order.
pub fn cell_dofs(
    mesh: &OrientedMesh,
    cell: usize,
    k: usize,
    scheme: VertexScheme,
) -> Result<Vec<DofFunctional>, ElementError> {
    let kind = mesh.kind();
    if scheme == VertexScheme::ThreeNormal {
        if kind != CellKind::Hex {
            return Err(ElementError::SchemeMismatch { scheme, kind });
        }
        check_three_normal(mesh, cell)?;
    }
    let lat = lattice(kind, k)?;
    let verts = mesh.cell(cell);
    let points: Vec<KeyedPoint> = lat.points.iter().map(|p| KeyedPoint::new(p, verts)).collect();

    // rank of every point within its entity, by key order
    let mut groups: BTreeMap<(u8, usize), Vec<usize>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        let g = match p.tag {
            SubEntity::Vertex(l) => (0, l),
            SubEntity::Edge { edge, .. } => (1, edge),
            SubEntity::Face { face, .. } => (2, face),
            SubEntity::Interior { .. } => (3, 0),
        };
        groups.entry(g).or_default().push(i);
    }
    let mut rank = vec![0usize; points.len()];
    for members in groups.values_mut() {
        members.sort_by(|&a, &b| points[a].key.cmp(&points[b].key));
        for (r, &i) in members.iter().enumerate() {
            rank[i] = r;
        }
    }

    let mut out = Vec::with_capacity(9 * lat.points.len());

    // vertices, by global id
    let mut local_vertices: Vec<usize> = (0..verts.len()).collect();
    local_vertices.sort_by_key(|&l| verts[l]);
    for l in local_vertices {
        let v = verts[l];
        let x = mesh.vertex(v);
        let owner = Owner {
            kind: EntityKind::Vertex,
            id: v,
            point: 0,
        };
        match scheme {
            VertexScheme::Continuous => {
                let conds = vertex_conditions();
                for (c, terms) in conds.into_iter().enumerate() {
                    let (class, component) = match c {
                        0..=5 => (SharingClass::SharedVertexOffdiag, c),
                        6 | 7 => (SharingClass::SharedVertexDiag, c - 6),
                        _ => (SharingClass::PrivateVertexTrace, 0),
                    };
                    out.push(DofFunctional::new(owner, class, None, component, x, terms));
                }
            }
            VertexScheme::ThreeNormal => {
                let frame = mesh
                    .vertex_frame(v)
                    .ok_or(ElementError::MissingFrames { vertex: v })?;
                for (c, terms) in hex_joint_conditions(frame.axes).into_iter().enumerate() {
                    out.push(DofFunctional::new(owner, SharingClass::SharedVertexHexjoint, None, c, x, terms));
                }
                let mut edges: Vec<usize> = mesh
                    .cell_edges(cell)
                    .iter()
                    .copied()
                    .filter(|&e| mesh.edge(e).contains(&v))
                    .collect();
                edges.sort_unstable();
                for e in edges {
                    let f = mesh.edge_frame(e);
                    for (c, n) in [f.n1, f.n2].into_iter().enumerate() {
                        out.push(DofFunctional::new(
                            owner,
                            SharingClass::SharedVertexHexedge,
                            Some(e),
                            c,
                            x,
                            vec![Term::new(1.0, n, f.tangent)],
                        ));
                    }
                }
                out.push(DofFunctional::new(
                    owner,
                    SharingClass::PrivateVertexIdentityHex,
                    None,
                    0,
                    x,
                    hex_identity_condition(frame.axes),
                ));
            }
        }
    }

    // edges, by global id
    let cell_edges = mesh.cell_edges(cell);
    let cell_faces = mesh.cell_faces(cell);
    let mut local_edges: Vec<usize> = (0..cell_edges.len()).collect();
    local_edges.sort_by_key(|&l| cell_edges[l]);
    for le in local_edges {
        let e = cell_edges[le];
        let frame = mesh.edge_frame(e);
        let t = frame.tangent;
        // the two faces of this cell containing the edge, by global id
        let pair = kind.edges()[le];
        let mut faces: Vec<usize> = kind
            .faces()
            .iter()
            .enumerate()
            .filter(|(_, f)| f.contains(&pair[0]) && f.contains(&pair[1]))
            .map(|(lf, _)| cell_faces[lf])
            .collect();
        faces.sort_unstable();
        for i in &groups.get(&(1, le)).cloned().unwrap_or_default() {
            let p = &points[*i];
            let x = p.position(mesh);
            let owner = Owner {
                kind: EntityKind::Edge,
                id: e,
                point: rank[*i],
            };
            for (c, n) in [frame.n1, frame.n2].into_iter().enumerate() {
                out.push(DofFunctional::new(
                    owner,
                    SharingClass::SharedEdgePlane,
                    None,
                    c,
                    x,
                    vec![Term::new(1.0, n, t)],
                ));
            }
            for &f in &faces {
                let n = mesh.face_frame(f).normal;
                for (c, terms) in edge_face_conditions(t, n).into_iter().enumerate() {
                    out.push(DofFunctional::new(owner, SharingClass::SharedEdgeFace, Some(f), c, x, terms));
                }
            }
            out.push(DofFunctional::new(
                owner,
                SharingClass::PrivateEdgeIdentity,
                None,
                0,
                x,
                vec![Term::new(1.0, t, t)],
            ));
        }
    }

    // faces, by global id
    let mut local_faces: Vec<usize> = (0..cell_faces.len()).collect();
    local_faces.sort_by_key(|&l| cell_faces[l]);
    for lf in local_faces {
        let f = cell_faces[lf];
        let fr = mesh.face_frame(f);
        for i in &groups.get(&(2, lf)).cloned().unwrap_or_default() {
            let p = &points[*i];
            let x = p.position(mesh);
            let owner = Owner {
                kind: EntityKind::Face,
                id: f,
                point: rank[*i],
            };
            for (c, terms) in face_conformity_conditions(fr.a1, fr.a2, fr.normal).into_iter().enumerate() {
                out.push(DofFunctional::new(owner, SharingClass::SharedFaceNormal, None, c, x, terms));
            }
            for (c, terms) in face_tangential_conditions(fr.a1, fr.a2, fr.normal).into_iter().enumerate() {
                out.push(DofFunctional::new(owner, SharingClass::PrivateFaceTangential, None, c, x, terms));
            }
        }
    }

    // interior
    for i in &groups.get(&(3, 0)).cloned().unwrap_or_default() {
        let x = points[*i].position(mesh);
        let owner = Owner {
            kind: EntityKind::Cell,
            id: cell,
            point: rank[*i],
        };
        for a in 0..3 {
            for b in 0..3 {
                out.push(DofFunctional::new(
                    owner,
                    SharingClass::PrivateInterior,
                    None,
                    3 * a + b,
                    x,
                    vec![Term::entry(a, b)],
                ));
            }
        }
    }
    Ok(out)
}

/// Every face of the cell must be orthogonal to one vertex-frame axis at
/// each of its vertices.
fn check_three_normal(mesh: &OrientedMesh, cell: usize) -> Result<(), ElementError> {
    if mesh.cell_box(cell).is_some() {
        return Ok(());
    }
    let ok = mesh
        .three_normal_check()
        .map_err(|_| ElementError::NotABox { cell })?;
    for &v in mesh.cell(cell) {
        if !ok[v] {
            return Err(ElementError::ThreeNormalViolated { vertex: v });
        }
    }
    Err(ElementError::NotABox { cell })
}

/// Number of functionals per (owner entity kind, sharing class).
pub fn dof_table(dofs: &[DofFunctional]) -> Vec<(EntityKind, SharingClass, usize)> {
    let mut counts: BTreeMap<(EntityKind, SharingClass), usize> = BTreeMap::new();
    for d in dofs {
        *counts.entry((d.owner.kind, d.class)).or_default() += 1;
    }
    counts.into_iter().map(|((e, c), n)| (e, c, n)).collect()
}

/// Expected local dimension `9 · dim Π_k`.
pub fn expected_dof_count(kind: CellKind, k: usize) -> usize {
    9 * kind.scalar_dim(k)
}

/// Single reference cell: the unit tetrahedron or the unit cube.
pub fn reference_mesh(kind: CellKind) -> OrientedMesh {
    let (vertices, cell) = match kind {
        CellKind::Tet => (
            vec![Vec3::ZERO, Vec3::unit(0), Vec3::unit(1), Vec3::unit(2)],
            vec![0, 1, 2, 3],
        ),
        CellKind::Hex => (
            (0..8)
                .map(|c| {
                    let b = crate::polyspace::hex_corner_bits(c);
                    Vec3::new(b[0] as f64, b[1] as f64, b[2] as f64)
                })
                .collect(),
            (0..8).collect(),
        ),
    };
    OrientedMesh::new(kind, vertices, vec![cell]).expect("reference cell is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_unit_cube_hexes, generate_unit_cube_tets};

    #[test]
    fn tet_counts() {
        let m = reference_mesh(CellKind::Tet);
        let expected = [36, 90, 180, 315];
        for k in 1..=4 {
            let dofs = tet_dofs(&m, 0, k).unwrap();
            assert_eq!(dofs.len(), expected[k - 1]);
            assert_eq!(dofs.len(), expected_dof_count(CellKind::Tet, k));
        }
        // k = 1: everything sits at vertices
        assert!(tet_dofs(&m, 0, 1).unwrap().iter().all(|d| d.owner.kind == EntityKind::Vertex));
        // k = 3: 36 vertex + 108 edge + 36 face
        let d3 = tet_dofs(&m, 0, 3).unwrap();
        let count = |kind| d3.iter().filter(|d| d.owner.kind == kind).count();
        assert_eq!(
            [count(EntityKind::Vertex), count(EntityKind::Edge), count(EntityKind::Face)],
            [36, 108, 36]
        );
    }

    #[test]
    fn hex_counts() {
        let m = reference_mesh(CellKind::Hex);
        let expected = [72, 243, 576, 1125];
        for k in 1..=4 {
            assert_eq!(hex_dofs(&m, 0, k).unwrap().len(), expected[k - 1]);
        }
        let d2 = hex_dofs(&m, 0, 2).unwrap();
        let count = |kind| d2.iter().filter(|d| d.owner.kind == kind).count();
        assert_eq!(
            [
                count(EntityKind::Vertex),
                count(EntityKind::Edge),
                count(EntityKind::Face),
                count(EntityKind::Cell)
            ],
            [72, 108, 54, 9]
        );
    }

    #[test]
    fn canonical_joint_conditions_expand_to_entries() {
        // n_i = e_i: n2ᵀU(n1×n3) + n3ᵀU(n1×n2) = -U22 + U33,
        //            n3ᵀU(n2×n1) + n1ᵀU(n2×n3) = -U33 + U11
        let axes = [Vec3::unit(0), Vec3::unit(1), Vec3::unit(2)];
        let [a, b] = hex_joint_conditions(axes);
        let mut wa = Mat3::zeros();
        wa.0[1][1] = -1.0;
        wa.0[2][2] = 1.0;
        let mut wb = Mat3::zeros();
        wb.0[2][2] = -1.0;
        wb.0[0][0] = 1.0;
        assert_eq!(weight_matrix(&a), wa);
        assert_eq!(weight_matrix(&b), wb);
        // identity sum: U11 - U22 + U33
        let id = weight_matrix(&hex_identity_condition(axes));
        let mut wi = Mat3::zeros();
        wi.0[0][0] = 1.0;
        wi.0[1][1] = -1.0;
        wi.0[2][2] = 1.0;
        assert_eq!(id, wi);
    }

    #[test]
    fn ordering_vertices_then_edges_then_faces() {
        let m = generate_unit_cube_tets(1).unwrap();
        let d = tet_dofs(&m, 3, 3).unwrap();
        let rank = |k: EntityKind| match k {
            EntityKind::Vertex => 0,
            EntityKind::Edge => 1,
            EntityKind::Face => 2,
            EntityKind::Cell => 3,
        };
        for w in d.windows(2) {
            let a = (rank(w[0].owner.kind), w[0].owner.id, w[0].owner.point);
            let b = (rank(w[1].owner.kind), w[1].owner.id, w[1].owner.point);
            assert!(a <= b);
        }
    }

    #[test]
    fn shared_functionals_agree_across_cells() {
        // every share key seen from two cells carries the same point and weight
        for m in [generate_unit_cube_tets(2).unwrap(), generate_unit_cube_hexes(2).unwrap()] {
            let mut seen: std::collections::HashMap<ShareKey, (Vec3, Mat3)> = Default::default();
            for c in 0..m.num_cells() {
                for d in cell_dofs(&m, c, 3, VertexScheme::default_for(m.kind())).unwrap() {
                    if let Some(key) = d.share_key() {
                        let prev = seen.entry(key).or_insert((d.point, d.weight));
                        assert_eq!(prev.0, d.point);
                        assert_eq!(prev.1, d.weight);
                    }
                }
            }
        }
    }

    #[test]
    fn three_normal_scheme_rejected_on_tets() {
        let m = reference_mesh(CellKind::Tet);
        assert!(matches!(
            hex_dofs(&m, 0, 1),
            Err(ElementError::SchemeMismatch { .. })
        ));
    }

    #[test]
    fn sheared_hex_reports_vertex() {
        let m = generate_unit_cube_hexes(2).unwrap();
        let center = (0..m.num_vertices())
            .find(|&v| m.vertex(v) == Vec3::new(0.5, 0.5, 0.5))
            .unwrap();
        let mut verts = m.vertices().to_vec();
        verts[center] = Vec3::new(0.6, 0.55, 0.5);
        let sheared = m.with_vertices(verts).unwrap();
        let cell = sheared.vertex_cells(center)[0];
        let ok = sheared.three_normal_check().unwrap();
        match hex_dofs(&sheared, cell, 1) {
            Err(ElementError::ThreeNormalViolated { vertex }) => {
                assert!(!ok[vertex] && sheared.cell(cell).contains(&vertex))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shared_functionals_vanish_on_identity() {
        let m = generate_unit_cube_tets(1).unwrap();
        for d in tet_dofs(&m, 0, 4).unwrap() {
            let v = d.apply(&Mat3::identity());
            if d.class.is_shared() {
                assert!(v.abs() < 1e-14, "{:?} {}", d.class, v);
            }
        }
        let h = reference_mesh(CellKind::Hex);
        for d in hex_dofs(&h, 0, 3).unwrap() {
            if d.class.is_shared() {
                assert!(d.apply(&Mat3::identity()).abs() < 1e-14);
            }
        }
    }
}
