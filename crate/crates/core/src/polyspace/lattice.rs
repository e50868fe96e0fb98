use super::{hex_corner_bits, CellKind};
use crate::error::PolyError;
use crate::tensor3::Vec3;

/// The local subentity a lattice point lies in the relative interior of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubEntity {
    Vertex(usize),
    Edge { edge: usize, index: usize },
    Face { face: usize, index: usize },
    Interior { index: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticePoint {
    /// Integer lattice coordinates in `0..=k`.
    pub multi_index: [usize; 3],
    /// Position in the reference cell (unit tetrahedron or unit cube).
    pub reference: Vec3,
    /// Nonzero integer weights of local vertices; the point is
    /// `Σ w · vertex / denominator`. Barycentric for tets, trilinear for hexes.
    pub weights: Vec<(usize, u64)>,
    pub denominator: u64,
    pub tag: SubEntity,
}

impl LatticePoint {
    /// Maps the point onto a physical cell with the given vertex coordinates.
    pub fn map(&self, vertices: &[Vec3]) -> Vec3 {
        let d = self.denominator as f64;
        self.weights
            .iter()
            .fold(Vec3::ZERO, |acc, &(v, w)| acc + vertices[v] * (w as f64 / d))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LagrangeLattice {
    pub kind: CellKind,
    pub degree: usize,
    pub points: Vec<LatticePoint>,
}

impl LagrangeLattice {
    pub fn count(&self, pred: impl Fn(&SubEntity) -> bool) -> usize {
        self.points.iter().filter(|p| pred(&p.tag)).count()
    }
}

/// Equispaced principal lattice (tet) or tensor lattice (hex) of degree `k`,
/// each point tagged with its owning subentity.
pub fn lattice(kind: CellKind, k: usize) -> Result<LagrangeLattice, PolyError> {
    if k == 0 {
        return Err(PolyError::ZeroDegree);
    }
    let mut points = Vec::with_capacity(kind.scalar_dim(k));
    let mut counters = EntityCounters::new(kind);
    let kk = k as u64;
    for l in 0..=k {
        for j in 0..=k {
            for i in 0..=k {
                let (weights, denominator) = match kind {
                    CellKind::Tet => {
                        if i + j + l > k {
                            continue;
                        }
                        let bary = [(k - i - j - l) as u64, i as u64, j as u64, l as u64];
                        let w: Vec<_> = bary
                            .iter()
                            .enumerate()
                            .filter(|(_, &b)| b > 0)
                            .map(|(v, &b)| (v, b))
                            .collect();
                        (w, kk)
                    }
                    CellKind::Hex => {
                        let idx = [i as u64, j as u64, l as u64];
                        let w: Vec<_> = (0..8)
                            .filter_map(|c| {
                                let bits = hex_corner_bits(c);
                                let w: u64 = (0..3)
                                    .map(|d| if bits[d] == 1 { idx[d] } else { kk - idx[d] })
                                    .product();
                                (w > 0).then_some((c, w))
                            })
                            .collect();
                        (w, kk * kk * kk)
                    }
                };
                let support: Vec<usize> = weights.iter().map(|&(v, _)| v).collect();
                let tag = counters.classify(&support);
                points.push(LatticePoint {
                    multi_index: [i, j, l],
                    reference: Vec3::new(i as f64, j as f64, l as f64) * (1.0 / k as f64),
                    weights,
                    denominator,
                    tag,
                });
            }
        }
    }
    Ok(LagrangeLattice {
        kind,
        degree: k,
        points,
    })
}

struct EntityCounters {
    kind: CellKind,
    edges: Vec<usize>,
    faces: Vec<usize>,
    interior: usize,
}

impl EntityCounters {
    fn new(kind: CellKind) -> Self {
        EntityCounters {
            kind,
            edges: vec![0; kind.edges().len()],
            faces: vec![0; kind.faces().len()],
            interior: 0,
        }
    }

    /// `support` is the sorted set of local vertices with nonzero weight.
    fn classify(&mut self, support: &[usize]) -> SubEntity {
        let n = support.len();
        let (edge_n, face_n, cell_n) = match self.kind {
            CellKind::Tet => (2, 3, 4),
            CellKind::Hex => (2, 4, 8),
        };
        if n == 1 {
            SubEntity::Vertex(support[0])
        } else if n == edge_n {
            let edge = self
                .kind
                .edges()
                .iter()
                .position(|e| e[0] == support[0] && e[1] == support[1])
                .expect("support of an edge point is a local edge");
            let index = self.edges[edge];
            self.edges[edge] += 1;
            SubEntity::Edge { edge, index }
        } else if n == face_n && n < cell_n {
            let face = self
                .kind
                .faces()
                .iter()
                .position(|f| {
                    let mut s = f.to_vec();
                    s.sort_unstable();
                    s == support
                })
                .expect("support of a face point is a local face");
            let index = self.faces[face];
            self.faces[face] += 1;
            SubEntity::Face { face, index }
        } else {
            let index = self.interior;
            self.interior += 1;
            SubEntity::Interior { index }
        }
    }
}
