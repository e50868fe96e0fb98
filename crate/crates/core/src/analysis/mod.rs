//! Verification engine: conformity defects, the H(Curl) nonconformity
//! witness, error norms, convergence studies and pointwise lemma audits.

mod audits;
mod convergence;
mod defect;
mod fields;
mod norms;

pub use audits::{
    conformity_study, info_table, lemma_rows, lemma_suite, nonconformity_witness, random_cell,
    sym_devsym_audit, unisolvence_study, ConformityReport, LemmaReport, LemmaRow, SymDevSymRow,
    UnisolvenceReport, WitnessFace, WitnessReport, CONFORMITY_TOL, MAX_RANDOM_SHAPE,
};
pub use convergence::{convergence_study, unit_cube, ConvergenceReport, ConvergenceRow};
pub use defect::{face_defect, face_quadrature, DefectReport, FaceDefect};
pub use fields::{AntiField, ConstantField, FieldSpec, MatrixField, PolyField, TrigField, POLY_FIELD_SEED};
pub use norms::{cell_center, cell_quadrature, error_exactness, errors, l2_error, symcurl_error, Errors};
