//! Polynomial spaces on tetrahedra (complete polynomials of degree `k`) and
//! axis-aligned hexahedra (tensor-product polynomials of degree `k` in each
//! direction), their Lagrange lattices, and quadrature.

mod basis;
mod lattice;
mod quadrature;

pub use basis::{curl_from_jacobian, matrix_poly_eval, row_curl, MatrixPoly, ScalarBasis};
pub use lattice::{lattice, LagrangeLattice, LatticePoint, SubEntity};
pub use quadrature::{quadrature, QuadDomain, Quadrature};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Tet,
    Hex,
}

impl CellKind {
    pub fn vertex_count(self) -> usize {
        match self {
            CellKind::Tet => 4,
            CellKind::Hex => 8,
        }
    }

    /// Local edges as pairs of local vertex indices.
    pub fn edges(self) -> &'static [[usize; 2]] {
        match self {
            CellKind::Tet => &TET_EDGES,
            CellKind::Hex => &HEX_EDGES,
        }
    }

    /// Local faces as cyclically ordered local vertex indices.
    pub fn faces(self) -> &'static [&'static [usize]] {
        match self {
            CellKind::Tet => &TET_FACES,
            CellKind::Hex => &HEX_FACES,
        }
    }

    /// Dimension of the scalar polynomial space of degree `k`.
    pub fn scalar_dim(self, k: usize) -> usize {
        match self {
            CellKind::Tet => (k + 1) * (k + 2) * (k + 3) / 6,
            CellKind::Hex => (k + 1).pow(3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CellKind::Tet => "tet",
            CellKind::Hex => "hex",
        }
    }
}

impl std::str::FromStr for CellKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tet" => Ok(CellKind::Tet),
            "hex" => Ok(CellKind::Hex),
            other => Err(format!("unknown cell kind `{other}`")),
        }
    }
}

const TET_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
const TET_FACES: [&[usize]; 4] = [&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]];

// Hex corners are numbered lexicographically: corner c sits at
// (c & 1, (c >> 1) & 1, (c >> 2) & 1) of the unit box.
const HEX_EDGES: [[usize; 2]; 12] = [
    [0, 1],
    [2, 3],
    [4, 5],
    [6, 7],
    [0, 2],
    [1, 3],
    [4, 6],
    [5, 7],
    [0, 4],
    [1, 5],
    [2, 6],
    [3, 7],
];
const HEX_FACES: [&[usize]; 6] = [
    &[0, 2, 6, 4],
    &[1, 3, 7, 5],
    &[0, 1, 5, 4],
    &[2, 3, 7, 6],
    &[0, 1, 3, 2],
    &[4, 5, 7, 6],
];

/// Position of hex corner `c` in the unit box.
pub fn hex_corner_bits(c: usize) -> [usize; 3] {
    [c & 1, (c >> 1) & 1, (c >> 2) & 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_faces_are_planar_in_the_unit_box() {
        for face in CellKind::Hex.faces() {
            let bits: Vec<_> = face.iter().map(|&c| hex_corner_bits(c)).collect();
            let fixed = (0..3).filter(|&d| bits.iter().all(|b| b[d] == bits[0][d])).count();
            assert_eq!(fixed, 1);
            // cyclic: consecutive corners differ in exactly one coordinate
            for i in 0..4 {
                let (a, b) = (bits[i], bits[(i + 1) % 4]);
                assert_eq!((0..3).filter(|&d| a[d] != b[d]).count(), 1);
            }
        }
        for e in CellKind::Hex.edges() {
            let (a, b) = (hex_corner_bits(e[0]), hex_corner_bits(e[1]));
            assert_eq!((0..3).filter(|&d| a[d] != b[d]).count(), 1);
        }
    }

    #[test]
    fn scalar_dimensions() {
        assert_eq!(
            (1..=4).map(|k| CellKind::Tet.scalar_dim(k)).collect::<Vec<_>>(),
            vec![4, 10, 20, 35]
        );
        assert_eq!(CellKind::Hex.scalar_dim(2), 27);
    }
}
