use nalgebra::DMatrix;
use serde::Serialize;

use super::{cell_dofs, DofFunctional, VertexScheme};
use crate::error::ElementError;
use crate::mesh::OrientedMesh;
use crate::polyspace::{CellKind, MatrixPoly, ScalarBasis};
use crate::tensor3::Vec3;

/// Largest accepted 1-norm condition estimate of the DOF matrix.
pub const CONDITION_CUTOFF: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Conditioning {
    /// `‖M‖₁ ‖M⁻¹‖₁`.
    pub condition: f64,
    /// `‖M N − I‖_∞` (max row sum).
    pub residual: f64,
}

/// A cell's element: basis, functionals and nodal coefficient matrix.
#[derive(Clone, Debug)]
pub struct LocalElement {
    pub cell: usize,
    pub degree: usize,
    pub basis: ScalarBasis,
    pub dofs: Vec<DofFunctional>,
    /// Column `j` holds the flat coefficients (`9 m + 3 a + b`) of the
    /// nodal function dual to functional `j`.
    pub nodal: DMatrix<f64>,
    pub conditioning: Conditioning,
}

/// Monomial basis adapted to the cell.
pub fn cell_basis(mesh: &OrientedMesh, cell: usize, k: usize) -> Result<ScalarBasis, ElementError> {
    let v = mesh.cell_vertices(cell);
    match mesh.kind() {
        CellKind::Tet => Ok(ScalarBasis::tet(k, &[v[0], v[1], v[2], v[3]])?),
        CellKind::Hex => {
            let (lo, hi) = mesh.cell_box(cell).ok_or(ElementError::NotABox { cell })?;
            Ok(ScalarBasis::hex(k, lo, hi)?)
        }
    }
}

/// `M[i][9m + 3a + b] = ψ_m(L_i) · W_i[a][b]`, i.e. `M_ij = ℓ_i(φ_j)` for
/// the matrix basis `φ_{9m+3a+b} = ψ_m E_ab`.
pub fn local_dof_matrix(basis: &ScalarBasis, dofs: &[DofFunctional]) -> DMatrix<f64> {
    let n = 9 * basis.dim();
    let mut m = DMatrix::zeros(dofs.len(), n);
    let mut psi = vec![0.0; basis.dim()];
    for (i, d) in dofs.iter().enumerate() {
        basis.eval_into(&d.point, &mut psi);
        for (mi, &p) in psi.iter().enumerate() {
            for a in 0..3 {
                for b in 0..3 {
                    m[(i, 9 * mi + 3 * a + b)] = p * d.weight.0[a][b];
                }
            }
        }
    }
    m
}

fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn norm_inf(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverts the DOF matrix and checks biorthogonality.
pub fn nodal_basis(
    cell: usize,
    basis: ScalarBasis,
    dofs: Vec<DofFunctional>,
) -> Result<LocalElement, ElementError> {
    let m = local_dof_matrix(&basis, &dofs);
    if m.nrows() != m.ncols() {
        return Err(ElementError::Singular { cell });
    }
    let inv = m.clone().lu().try_inverse().ok_or(ElementError::Singular { cell })?;
    let condition = norm1(&m) * norm1(&inv);
    if !condition.is_finite() || condition > CONDITION_CUTOFF {
        return Err(ElementError::IllConditioned { cell, condition });
    }
    let n = m.nrows();
    let residual = norm_inf(&(&m * &inv - DMatrix::<f64>::identity(n, n)));
    Ok(LocalElement {
        cell,
        degree: basis.degree(),
        basis,
        dofs,
        nodal: inv,
        conditioning: Conditioning { condition, residual },
    })
}

impl LocalElement {
    pub fn new(
        mesh: &OrientedMesh,
        cell: usize,
        k: usize,
        scheme: VertexScheme,
    ) -> Result<Self, ElementError> {
        let dofs = cell_dofs(mesh, cell, k, scheme)?;
        let basis = cell_basis(mesh, cell, k)?;
        nodal_basis(cell, basis, dofs)
    }

    pub fn len(&self) -> usize {
        self.dofs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dofs.is_empty()
    }

    /// Polynomial `Σ_j c_j N_j` for local DOF values `c`.
    pub fn polynomial(&self, local_coeffs: &[f64]) -> MatrixPoly {
        let c = nalgebra::DVector::from_column_slice(local_coeffs);
        let flat = &self.nodal * c;
        MatrixPoly::from_flat(self.basis.clone(), flat.as_slice()).expect("nodal matrix is square")
    }

    /// Nodal function dual to functional `j`.
    pub fn nodal_function(&self, j: usize) -> MatrixPoly {
        MatrixPoly::from_flat(self.basis.clone(), self.nodal.column(j).as_slice())
            .expect("nodal matrix is square")
    }

    /// Local DOF values of a field.
    pub fn interpolate(&self, field: impl Fn(&Vec3) -> crate::tensor3::Mat3) -> Vec<f64> {
        self.dofs.iter().map(|d| d.apply_field(&field)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::reference_mesh;
    use crate::mesh::generate_unit_cube_hexes;
    use crate::tensor3::Mat3;

    #[test]
    fn unit_tet_biorthogonality() {
        let m = reference_mesh(CellKind::Tet);
        for k in 1..=3 {
            let el = LocalElement::new(&m, 0, k, VertexScheme::Continuous).unwrap();
            assert!(el.conditioning.condition.is_finite());
            assert!(el.conditioning.residual < 1e-8);
            // independent check: apply every functional to every nodal function
            for j in [0, el.len() / 2, el.len() - 1] {
                let p = el.nodal_function(j);
                for (i, d) in el.dofs.iter().enumerate() {
                    let v = d.apply(&p.value(&d.point));
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((v - expect).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn k2_hex_biorthogonality() {
        let m = generate_unit_cube_hexes(1).unwrap();
        let el = LocalElement::new(&m, 0, 2, VertexScheme::ThreeNormal).unwrap();
        assert_eq!(el.len(), 243);
        assert!(el.conditioning.residual < 1e-8);
    }

    #[test]
    fn constants_are_reproduced() {
        let m = reference_mesh(CellKind::Tet);
        let el = LocalElement::new(&m, 0, 1, VertexScheme::Continuous).unwrap();
        let c = Mat3([[1.0, -2.0, 0.5], [3.0, 0.25, -1.0], [0.0, 4.0, 2.0]]);
        let p = el.polynomial(&el.interpolate(|_| c));
        for x in [Vec3::new(0.1, 0.2, 0.3), Vec3::new(0.0, 0.0, 0.9)] {
            assert!((p.value(&x) - c).max_abs() < 1e-10);
        }
    }

    #[test]
    fn hex_continuous_scheme_is_unisolvent_too() {
        let m = reference_mesh(CellKind::Hex);
        let el = LocalElement::new(&m, 0, 2, VertexScheme::Continuous).unwrap();
        assert!(el.conditioning.residual < 1e-8);
    }
}
