use rayon::prelude::*;
use serde::Serialize;

use super::MatrixField;
use crate::error::{AnalysisError, ElementError};
use crate::mesh::OrientedMesh;
use crate::polyspace::{quadrature, CellKind, QuadDomain, Quadrature};
use crate::space::FeFunction;
use crate::tensor3::{sym, Vec3};

/// Cell rule of exactness `degree`.
pub fn cell_quadrature(mesh: &OrientedMesh, cell: usize, degree: usize) -> Result<Quadrature, AnalysisError> {
    let v = mesh.cell_vertices(cell);
    Ok(match mesh.kind() {
        CellKind::Tet => quadrature(QuadDomain::Tetrahedron, degree)
            .map_err(ElementError::from)?
            .map_tet(&[v[0], v[1], v[2], v[3]]),
        CellKind::Hex => {
            let (lo, hi) = mesh.cell_box(cell).ok_or(ElementError::NotABox { cell })?;
            quadrature(QuadDomain::Cube, degree)
                .map_err(ElementError::from)?
                .map_box(lo, hi)
        }
    })
}

/// Quadrature exactness used for error norms.
pub fn error_exactness(k: usize) -> usize {
    (2 * k + 2).max(6)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Errors {
    /// `‖U − U_h‖_{L²}`.
    pub l2: f64,
    /// `‖sym Curl(U − U_h)‖_{L²}`, cellwise.
    pub symcurl: f64,
}

/// Both error norms in one pass; cell contributions are summed in cell order.
pub fn errors(field: &dyn MatrixField, f: &FeFunction<'_>) -> Result<Errors, AnalysisError> {
    let space = f.space();
    let mesh = space.mesh();
    let degree = error_exactness(space.degree());
    let parts: Vec<(f64, f64)> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let poly = f.local_poly(c)?;
            let q = cell_quadrature(mesh, c, degree)?;
            let mut l2 = 0.0;
            let mut sc = 0.0;
            for (x, w) in q.points.iter().zip(&q.weights) {
                let e = field.value(x) - poly.value(x);
                l2 += w * e.frobenius().powi(2);
                let ec = field.sym_curl(x) - sym(&poly.curl(x));
                sc += w * ec.frobenius().powi(2);
            }
            Ok((l2, sc))
        })
        .collect::<Result<_, AnalysisError>>()?;
    let (l2, sc) = parts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    Ok(Errors {
        l2: l2.sqrt(),
        symcurl: sc.sqrt(),
    })
}

pub fn l2_error(field: &dyn MatrixField, f: &FeFunction<'_>) -> Result<f64, AnalysisError> {
    Ok(errors(field, f)?.l2)
}

pub fn symcurl_error(field: &dyn MatrixField, f: &FeFunction<'_>) -> Result<f64, AnalysisError> {
    Ok(errors(field, f)?.symcurl)
}

/// Centroid of a cell.
pub fn cell_center(mesh: &OrientedMesh, cell: usize) -> Vec3 {
    let v = mesh.cell_vertices(cell);
    v.iter().fold(Vec3::ZERO, |a, p| a + *p) * (1.0 / v.len() as f64)
}
