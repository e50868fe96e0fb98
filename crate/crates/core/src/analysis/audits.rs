use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{face_defect, DefectReport};
use crate::element::{
    kernel_audit, random_unit, reference_mesh, sym_devsym_kernels, ConditionSet, FrameDraw,
    LocalElement, VertexScheme,
};
use crate::error::{AnalysisError, ElementError};
use crate::mesh::OrientedMesh;
use crate::polyspace::CellKind;
use crate::space::GlobalSpace;
use crate::tensor3::Vec3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaRow {
    pub set: ConditionSet,
    pub draws: usize,
    pub expected: usize,
    pub min_dimension: usize,
    pub max_dimension: usize,
    pub max_identity_residual: f64,
    pub max_conformity_defect: Option<f64>,
    pub failures: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymDevSymRow {
    pub samples: usize,
    pub sym_dimensions: [usize; 2],
    pub dev_sym_dimensions: [usize; 2],
    pub max_projection_residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub seed: u64,
    pub rows: Vec<LemmaRow>,
    pub sym_dev_sym: SymDevSymRow,
    pub passed: bool,
}

/// Every condition set under `draws` random frame instantiations.
pub fn lemma_rows(seed: u64, draws: usize) -> Vec<LemmaRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ConditionSet::ALL
        .into_iter()
        .map(|set| {
            let audits: Vec<_> = (0..draws)
                .map(|_| kernel_audit(set, &FrameDraw::random(set, &mut rng)))
                .collect();
            let failures = audits.iter().filter(|a| !a.passed()).count();
            LemmaRow {
                set,
                draws,
                expected: set.expected_dimension(),
                min_dimension: audits.iter().map(|a| a.dimension).min().unwrap_or(0),
                max_dimension: audits.iter().map(|a| a.dimension).max().unwrap_or(0),
                max_identity_residual: audits.iter().map(|a| a.identity_residual).fold(0.0, f64::max),
                max_conformity_defect: audits
                    .iter()
                    .filter_map(|a| a.conformity_defect)
                    .reduce(f64::max),
                failures,
                passed: failures == 0 && draws > 0,
            }
        })
        .collect()
}

/// Kernels of `U ↦ sym(U Anti n)` and `U ↦ dev sym(U Anti n)` for random
/// unit `n`: both 4-dimensional and equal.
pub fn sym_devsym_audit(seed: u64, samples: usize) -> SymDevSymRow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ds = [usize::MAX, 0];
    let mut dd = [usize::MAX, 0];
    let mut residual: f64 = 0.0;
    for _ in 0..samples {
        let n = random_unit(&mut rng);
        let (ks, kd, r) = sym_devsym_kernels(&n);
        ds = [ds[0].min(ks.len()), ds[1].max(ks.len())];
        dd = [dd[0].min(kd.len()), dd[1].max(kd.len())];
        residual = residual.max(r);
    }
    SymDevSymRow {
        samples,
        sym_dimensions: ds,
        dev_sym_dimensions: dd,
        max_projection_residual: residual,
        passed: samples > 0 && ds == [4, 4] && dd == [4, 4] && residual < 1e-10,
    }
}

pub fn lemma_suite(seed: u64, draws: usize, normals: usize) -> LemmaReport {
    let rows = lemma_rows(seed, draws);
    let sym_dev_sym = sym_devsym_audit(seed.wrapping_add(1), normals);
    let passed = rows.iter().all(|r| r.passed) && sym_dev_sym.passed;
    LemmaReport {
        seed,
        rows,
        sym_dev_sym,
        passed,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnisolvenceReport {
    pub cell: CellKind,
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    pub min_condition: f64,
    pub median_condition: f64,
    pub max_condition: f64,
    pub max_residual: f64,
    pub failures: usize,
    pub passed: bool,
}

/// Largest `h/ρ` accepted for random tetrahedra.
pub const MAX_RANDOM_SHAPE: f64 = 50.0;

/// Random non-degenerate single-cell mesh: a tetrahedron with vertices in
/// the unit cube (shape ratio at most [`MAX_RANDOM_SHAPE`]) or a box with
/// extents in `[0.1, 1]`.
pub fn random_cell<R: Rng + ?Sized>(kind: CellKind, rng: &mut R) -> OrientedMesh {
    let mut point = || Vec3::new(rng.gen(), rng.gen(), rng.gen());
    match kind {
        CellKind::Tet => loop {
            let v = vec![point(), point(), point(), point()];
            if let Ok(m) = OrientedMesh::new(CellKind::Tet, v, vec![vec![0, 1, 2, 3]]) {
                if m.cell_geometry(0).shape_ratio() <= MAX_RANDOM_SHAPE {
                    return m;
                }
            }
        },
        CellKind::Hex => {
            let lo = point();
            let ext = point() * 0.9 + Vec3::new(0.1, 0.1, 0.1);
            let v = (0..8)
                .map(|c| {
                    let b = crate::polyspace::hex_corner_bits(c);
                    Vec3(std::array::from_fn(|d| lo[d] + b[d] as f64 * ext[d]))
                })
                .collect();
            OrientedMesh::new(CellKind::Hex, v, vec![(0..8).collect()]).expect("box is valid")
        }
    }
}

/// Builds the nodal basis on `samples` random cells and records conditioning
/// and biorthogonality residuals (threshold `1e-8`).
pub fn unisolvence_study(kind: CellKind, k: usize, samples: usize, seed: u64) -> Result<UnisolvenceReport, AnalysisError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let meshes: Vec<OrientedMesh> = (0..samples).map(|_| random_cell(kind, &mut rng)).collect();
    let results: Vec<Result<(f64, f64), ElementError>> = meshes
        .par_iter()
        .map(|m| {
            LocalElement::new(m, 0, k, VertexScheme::default_for(kind))
                .map(|e| (e.conditioning.condition, e.conditioning.residual))
        })
        .collect();
    if let Some(Err(e @ ElementError::Poly(_))) = results.first() {
        return Err(e.clone().into());
    }
    let mut conds: Vec<f64> = Vec::new();
    let mut max_residual: f64 = 0.0;
    let mut failures = 0;
    for r in results {
        match r {
            Ok((c, res)) => {
                conds.push(c);
                max_residual = max_residual.max(res);
                if res >= 1e-8 {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    conds.sort_by(f64::total_cmp);
    let pick = |i: usize| conds.get(i).copied().unwrap_or(f64::NAN);
    Ok(UnisolvenceReport {
        cell: kind,
        k,
        samples,
        seed,
        min_condition: pick(0),
        median_condition: pick(conds.len() / 2),
        max_condition: conds.last().copied().unwrap_or(f64::NAN),
        max_residual,
        failures,
        passed: failures == 0 && samples > 0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessFace {
    pub face: usize,
    pub raw: f64,
    pub sym: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub cell: usize,
    pub faces: Vec<WitnessFace>,
    /// Largest `|raw − √2|` over the cell's interior faces.
    pub max_raw_deviation: f64,
    pub max_sym: f64,
    /// Largest defect of any kind on faces not touching the cell.
    pub max_elsewhere: f64,
    pub passed: bool,
}

/// Jump defects of the identity indicator of `cell`: on each of the cell's
/// interior faces the raw jump `‖I Anti n‖_F = √2` while the symmetric
/// defect vanishes.
pub fn nonconformity_witness(space: &GlobalSpace, cell: usize) -> Result<WitnessReport, AnalysisError> {
    let f = space.identity_indicator(cell)?;
    let report: DefectReport = face_defect(&f)?;
    let own: Vec<WitnessFace> = report
        .faces
        .iter()
        .filter(|d| d.cells.contains(&cell))
        .map(|d| WitnessFace {
            face: d.face,
            raw: d.max_raw,
            sym: d.max_sym,
        })
        .collect();
    if own.is_empty() {
        return Err(AnalysisError::NoInteriorFace { cell });
    }
    let max_elsewhere = report
        .faces
        .iter()
        .filter(|d| !d.cells.contains(&cell))
        .map(|d| d.max_raw.max(d.max_sym))
        .fold(0.0, f64::max);
    let max_raw_deviation = own
        .iter()
        .map(|w| (w.raw - std::f64::consts::SQRT_2).abs())
        .fold(0.0, f64::max);
    let max_sym = own.iter().map(|w| w.sym).fold(0.0, f64::max);
    Ok(WitnessReport {
        cell,
        faces: own,
        max_raw_deviation,
        max_sym,
        max_elsewhere,
        passed: max_raw_deviation <= 1e-12 && max_sym < 1e-12 && max_elsewhere == 0.0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConformityReport {
    pub k: usize,
    pub cells: usize,
    pub dimension: usize,
    pub threshold: f64,
    pub worst_normalized_sym: f64,
    pub worst_normalized_dev_sym: f64,
    pub samples: Vec<DefectReport>,
    pub passed: bool,
}

/// Threshold on normalized symmetric defects of random functions.
pub const CONFORMITY_TOL: f64 = 1e-10;

/// Face defects of `samples` random functions with seeds `seed, seed+1, …`.
pub fn conformity_study(space: &GlobalSpace, samples: usize, seed: u64) -> Result<ConformityReport, AnalysisError> {
    let mut reports = Vec::with_capacity(samples);
    for s in 0..samples as u64 {
        let f = space.random_function(seed + s);
        let mut r = face_defect(&f)?;
        r.seed = Some(seed + s);
        reports.push(r);
    }
    let worst_normalized_sym = reports.iter().map(|r| r.normalized_sym).fold(0.0, f64::max);
    let worst_normalized_dev_sym = reports.iter().map(|r| r.normalized_dev_sym).fold(0.0, f64::max);
    Ok(ConformityReport {
        k: space.degree(),
        cells: space.mesh().num_cells(),
        dimension: space.dimension(),
        threshold: CONFORMITY_TOL,
        worst_normalized_sym,
        worst_normalized_dev_sym,
        passed: samples > 0 && worst_normalized_sym < CONFORMITY_TOL && worst_normalized_dev_sym < CONFORMITY_TOL,
        samples: reports,
    })
}

/// DOF table of a single reference cell.
pub fn info_table(kind: CellKind, k: usize) -> Result<Vec<(String, String, usize)>, AnalysisError> {
    let mesh = reference_mesh(kind);
    let dofs = crate::element::cell_dofs(&mesh, 0, k, VertexScheme::default_for(kind))?;
    Ok(crate::element::dof_table(&dofs)
        .into_iter()
        .map(|(e, c, n)| (format!("{e:?}").to_lowercase(), c.name().to_string(), n))
        .collect())
}
