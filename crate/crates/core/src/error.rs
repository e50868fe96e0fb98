use thiserror::Error;

use crate::polyspace::CellKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("frame vector is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("degenerate frame")]
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("polynomial degree must be at least 1")]
    ZeroDegree,
    #[error("coefficient list has length {found}, basis has dimension {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("degenerate cell geometry")]
    DegenerateCell,
    #[error("quadrature of exactness {degree} fails on monomial {exponents:?} (relative error {error:e})")]
    QuadratureInexact {
        degree: usize,
        exponents: [u32; 3],
        error: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cell {cell} references vertex {index}, but the mesh has {vertices} vertices")]
    IndexOutOfRange {
        cell: usize,
        index: usize,
        vertices: usize,
    },
    #[error("non-conforming connectivity: {0}")]
    NonConforming(String),
    #[error("line {line}: cell has {found} vertices in a {expected:?} mesh")]
    MixedCellKinds {
        line: usize,
        expected: CellKind,
        found: usize,
    },
    #[error("hexahedron {cell} is not an axis-aligned box in lexicographic corner order")]
    NonAxisAlignedHex { cell: usize },
    #[error("cell {cell} has zero volume")]
    DegenerateCell { cell: usize },
    #[error("face {face} is degenerate (collinear vertices)")]
    DegenerateFace { face: usize },
    #[error("operation requires a {expected:?} mesh, found {found:?}")]
    WrongCellKind { expected: CellKind, found: CellKind },
    #[error("edge frame: {0}")]
    Frame(#[from] FrameError),
    #[error("subdivision count must be at least 1")]
    EmptyGrid,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElementError {
    #[error("polynomial basis: {0}")]
    Poly(#[from] PolyError),
    #[error("vertex {vertex}: incident faces are not orthogonal to the vertex frame")]
    ThreeNormalViolated { vertex: usize },
    #[error("vertex {vertex} has no vertex frame")]
    MissingFrames { vertex: usize },
    #[error("cell {cell} is not an axis-aligned box")]
    NotABox { cell: usize },
    #[error("cell {cell}: DOF matrix is singular")]
    Singular { cell: usize },
    #[error("cell {cell}: DOF matrix condition estimate {condition:e} exceeds the cutoff")]
    IllConditioned { cell: usize, condition: f64 },
    #[error("{scheme:?} vertex degrees of freedom are not available on {kind:?} cells")]
    SchemeMismatch {
        scheme: crate::element::VertexScheme,
        kind: CellKind,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error(transparent)]
    Element(#[from] ElementError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("vertex {vertex} lies on the boundary")]
    BoundaryVertex { vertex: usize },
    #[error("point {point:?} lies outside cell {cell}")]
    OutsideCell { cell: usize, point: [f64; 3] },
    #[error("coefficient vector has length {found}, space has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Element(#[from] ElementError),
    #[error("a convergence study needs at least 2 levels, got {levels}")]
    TooFewLevels { levels: usize },
    #[error("unknown field `{0}` (expected `trig` or `poly:D`)")]
    UnknownField(String),
    #[error("cell {cell} has no interior face")]
    NoInteriorFace { cell: usize },
}
