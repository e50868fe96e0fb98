use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::AnalysisError;
use crate::mesh::OrientedMesh;
use crate::polyspace::{quadrature, CellKind, MatrixPoly, QuadDomain, Quadrature};
use crate::space::FeFunction;
use crate::tensor3::{anti, conformity_defect, dev, Mat3};

/// Jump defects on one interior face. The jump is `U_a - U_b` with `a < b`
/// the two cell ids; every reported quantity is a norm and so does not
/// depend on that labelling.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceDefect {
    pub face: usize,
    pub cells: [usize; 2],
    /// Max over quadrature points of `‖sym([U] Anti n)‖_F`.
    pub max_sym: f64,
    /// Max of `‖dev sym([U] Anti n)‖_F`.
    pub max_dev_sym: f64,
    /// Max of `‖[U] Anti n‖_F`.
    pub max_raw: f64,
    /// `∫_F ‖sym([U] Anti n)‖_F²`.
    pub integrated_sym_sq: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectReport {
    pub faces: Vec<FaceDefect>,
    pub max_sym: f64,
    pub max_dev_sym: f64,
    pub max_raw: f64,
    /// `‖coeffs‖_∞` of the measured function.
    pub coeff_max: f64,
    /// `max_sym / coeff_max` (0 for the zero function).
    pub normalized_sym: f64,
    pub normalized_dev_sym: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl DefectReport {
    pub const CSV_HEADER: &'static str = "face,cell_a,cell_b,max_sym,max_dev_sym,max_raw,integrated_sym_sq";

    /// Per-face CSV rows (without header).
    pub fn csv_rows(&self, prefix: &str) -> String {
        let mut out = String::new();
        for f in &self.faces {
            writeln!(
                out,
                "{prefix}{},{},{},{:e},{:e},{:e},{:e}",
                f.face, f.cells[0], f.cells[1], f.max_sym, f.max_dev_sym, f.max_raw, f.integrated_sym_sq
            )
            .unwrap();
        }
        out
    }
}

/// Face rule of exactness `degree` mapped onto face `f`.
pub fn face_quadrature(mesh: &OrientedMesh, f: usize, degree: usize) -> Result<Quadrature, AnalysisError> {
    let c = &mesh.face(f).cyclic;
    let p = |i: usize| mesh.vertex(c[i]);
    let q = match mesh.kind() {
        CellKind::Tet => quadrature(QuadDomain::Triangle, degree)
            .map_err(crate::error::ElementError::from)?
            .map_planar(p(0), p(1) - p(0), p(2) - p(0)),
        CellKind::Hex => quadrature(QuadDomain::Square, degree)
            .map_err(crate::error::ElementError::from)?
            .map_planar(p(0), p(1) - p(0), p(3) - p(0)),
    };
    Ok(q)
}

fn face_defect_with(
    mesh: &OrientedMesh,
    polys: &[MatrixPoly],
    f: usize,
    degree: usize,
) -> Result<FaceDefect, AnalysisError> {
    let cells = mesh.face_cells(f);
    let (a, b) = (cells[0].min(cells[1]), cells[0].max(cells[1]));
    let n = mesh.face_frame(f).normal;
    let an = anti(&n);
    let q = face_quadrature(mesh, f, degree)?;
    let mut out = FaceDefect {
        face: f,
        cells: [a, b],
        max_sym: 0.0,
        max_dev_sym: 0.0,
        max_raw: 0.0,
        integrated_sym_sq: 0.0,
    };
    for (x, w) in q.points.iter().zip(&q.weights) {
        let jump: Mat3 = polys[a].value(x) - polys[b].value(x);
        let s = conformity_defect(&jump, &n);
        let fs = s.frobenius();
        out.max_sym = out.max_sym.max(fs);
        out.max_dev_sym = out.max_dev_sym.max(dev(&s).frobenius());
        out.max_raw = out.max_raw.max((jump * an).frobenius());
        out.integrated_sym_sq += w * fs * fs;
    }
    Ok(out)
}

/// Jump defects on every interior face, using face rules of exactness `2k`.
pub fn face_defect(f: &FeFunction<'_>) -> Result<DefectReport, AnalysisError> {
    let space = f.space();
    let mesh = space.mesh();
    let polys = f.local_polys()?;
    let degree = 2 * space.degree();
    let interior: Vec<usize> = mesh.interior_faces().collect();
    let faces: Vec<FaceDefect> = interior
        .par_iter()
        .map(|&face| face_defect_with(mesh, &polys, face, degree))
        .collect::<Result<_, _>>()?;
    let max = |g: fn(&FaceDefect) -> f64| faces.iter().map(g).fold(0.0, f64::max);
    let (max_sym, max_dev_sym, max_raw) = (max(|d| d.max_sym), max(|d| d.max_dev_sym), max(|d| d.max_raw));
    let coeff_max = f.max_coeff();
    let norm = |v: f64| if coeff_max > 0.0 { v / coeff_max } else { v };
    Ok(DefectReport {
        faces,
        max_sym,
        max_dev_sym,
        max_raw,
        coeff_max,
        normalized_sym: norm(max_sym),
        normalized_dev_sym: norm(max_dev_sym),
        seed: None,
    })
}
