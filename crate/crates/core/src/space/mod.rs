//! Global finite element space: identification of local functionals across
//! cells, global enumeration, finite element functions and interpolation.
//!
//! Shared functionals are identified by their [`ShareKey`]; since all their
//! vectors come from global entity frames, the coupling coefficient is
//! always `+1`. Private functionals get one global index per cell.

mod fef;

pub use fef::{load_fef, save_fef};

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::element::{cell_dofs, DofFunctional, LocalElement, ShareKey, SharingClass, VertexScheme};
use crate::error::{ElementError, SpaceError};
use crate::mesh::{EntityKind, OrientedMesh};
use crate::polyspace::{CellKind, MatrixPoly};
use crate::tensor3::{Mat3, Vec3};

/// Equivalence class of local functionals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GlobalKey {
    Shared(ShareKey),
    Private { cell: usize, local: usize },
}

/// One global degree of freedom.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GlobalDof {
    pub key: GlobalKey,
    pub class: SharingClass,
    pub owner_kind: EntityKind,
    pub owner_id: usize,
    /// Lowest cell id carrying the functional, and its local index there.
    pub representative: (usize, usize),
}

#[derive(Clone, Debug)]
pub struct GlobalSpace {
    mesh: OrientedMesh,
    degree: usize,
    scheme: VertexScheme,
    dofs: Vec<GlobalDof>,
    local_to_global: Vec<Vec<usize>>,
}

/// Sort key placing every global functional after its owning entity.
fn enumeration_order(d: &DofFunctional, key: &GlobalKey) -> (EntityKind, usize, usize, SharingClass, GlobalKey) {
    (d.owner.kind, d.owner.id, d.owner.point, d.class, *key)
}

impl GlobalSpace {
    /// Space with the natural vertex scheme of the mesh: continuous on
    /// tetrahedra, three-normal on hexahedra.
    pub fn new(mesh: OrientedMesh, k: usize) -> Result<Self, SpaceError> {
        let scheme = VertexScheme::default_for(mesh.kind());
        Self::with_scheme(mesh, k, scheme)
    }

    pub fn with_scheme(mesh: OrientedMesh, k: usize, scheme: VertexScheme) -> Result<Self, SpaceError> {
        let per_cell: Vec<Vec<DofFunctional>> = (0..mesh.num_cells())
            .into_par_iter()
            .map(|c| cell_dofs(&mesh, c, k, scheme))
            .collect::<Result<_, ElementError>>()?;

        let mut table: BTreeMap<_, (GlobalDof, Vec<(usize, usize)>)> = BTreeMap::new();
        for (c, dofs) in per_cell.iter().enumerate() {
            for (i, d) in dofs.iter().enumerate() {
                let key = match d.share_key() {
                    Some(s) => GlobalKey::Shared(s),
                    None => GlobalKey::Private { cell: c, local: i },
                };
                let entry = table.entry(enumeration_order(d, &key)).or_insert_with(|| {
                    (
                        GlobalDof {
                            key,
                            class: d.class,
                            owner_kind: d.owner.kind,
                            owner_id: d.owner.id,
                            representative: (c, i),
                        },
                        Vec::new(),
                    )
                });
                entry.1.push((c, i));
            }
        }
        let mut local_to_global: Vec<Vec<usize>> =
            per_cell.iter().map(|d| vec![usize::MAX; d.len()]).collect();
        let mut dofs = Vec::with_capacity(table.len());
        for (g, (dof, uses)) in table.into_values().enumerate() {
            for (c, i) in uses {
                local_to_global[c][i] = g;
            }
            dofs.push(dof);
        }
        Ok(GlobalSpace {
            mesh,
            degree: k,
            scheme,
            dofs,
            local_to_global,
        })
    }

    pub fn mesh(&self) -> &OrientedMesh {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn scheme(&self) -> VertexScheme {
        self.scheme
    }

    pub fn dimension(&self) -> usize {
        self.dofs.len()
    }

    pub fn dofs(&self) -> &[GlobalDof] {
        &self.dofs
    }

    /// Global index of every local functional of a cell, in local order.
    pub fn local_to_global(&self, cell: usize) -> &[usize] {
        &self.local_to_global[cell]
    }

    pub fn cell_dofs(&self, cell: usize) -> Result<Vec<DofFunctional>, SpaceError> {
        Ok(cell_dofs(&self.mesh, cell, self.degree, self.scheme)?)
    }

    pub fn local_element(&self, cell: usize) -> Result<LocalElement, SpaceError> {
        Ok(LocalElement::new(&self.mesh, cell, self.degree, self.scheme)?)
    }

    /// Distinct global functionals owned by an interior vertex, counting
    /// each incident cell's private functionals there.
    pub fn interior_vertex_dof_count(&self, vertex: usize) -> Result<usize, SpaceError> {
        if self.mesh.is_boundary_vertex(vertex) {
            return Err(SpaceError::BoundaryVertex { vertex });
        }
        let mut seen: Vec<usize> = Vec::new();
        for &c in self.mesh.vertex_cells(vertex) {
            let local = self.cell_dofs(c)?;
            for (i, d) in local.iter().enumerate() {
                if d.owner.kind == EntityKind::Vertex && d.owner.id == vertex {
                    seen.push(self.local_to_global[c][i]);
                }
            }
        }
        seen.sort_unstable();
        seen.dedup();
        Ok(seen.len())
    }

    /// `I_h U`: every global coefficient is its functional applied to the
    /// field, evaluated once by the representative cell.
    pub fn interpolate<F>(&self, field: F) -> Result<FeFunction<'_>, SpaceError>
    where
        F: Fn(&Vec3) -> Mat3 + Sync,
    {
        let values: Vec<Vec<(usize, f64)>> = (0..self.mesh.num_cells())
            .into_par_iter()
            .map(|c| {
                let local = self.cell_dofs(c)?;
                Ok(local
                    .iter()
                    .enumerate()
                    .filter_map(|(i, d)| {
                        let g = self.local_to_global[c][i];
                        (self.dofs[g].representative == (c, i)).then(|| (g, d.apply_field(&field)))
                    })
                    .collect())
            })
            .collect::<Result<_, SpaceError>>()?;
        let mut coeffs = vec![0.0; self.dimension()];
        for (g, v) in values.into_iter().flatten() {
            coeffs[g] = v;
        }
        Ok(FeFunction { space: self, coeffs })
    }

    /// The function equal to the identity on `cell` and zero elsewhere: the
    /// cell's private functionals take their values on `I`, all other
    /// coefficients are zero.
    ///
    /// Panics if a shared functional of the cell does not vanish on `I`.
    pub fn identity_indicator(&self, cell: usize) -> Result<FeFunction<'_>, SpaceError> {
        let local = self.cell_dofs(cell)?;
        let id = Mat3::identity();
        let mut coeffs = vec![0.0; self.dimension()];
        for (i, d) in local.iter().enumerate() {
            let v = d.apply(&id);
            if d.class.is_shared() {
                assert!(
                    v.abs() < 1e-12,
                    "shared functional {:?} at {:?} is {v} on the identity",
                    d.class,
                    d.owner
                );
            } else {
                coeffs[self.local_to_global[cell][i]] = v;
            }
        }
        Ok(FeFunction { space: self, coeffs })
    }

    pub fn zero_function(&self) -> FeFunction<'_> {
        FeFunction {
            space: self,
            coeffs: vec![0.0; self.dimension()],
        }
    }

    /// Coefficients i.i.d. uniform on `[-1, 1]`.
    pub fn random_function(&self, seed: u64) -> FeFunction<'_> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        FeFunction {
            space: self,
            coeffs: (0..self.dimension()).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
        }
    }

    pub fn function(&self, coeffs: Vec<f64>) -> Result<FeFunction<'_>, SpaceError> {
        if coeffs.len() != self.dimension() {
            return Err(SpaceError::DimensionMismatch {
                expected: self.dimension(),
                found: coeffs.len(),
            });
        }
        Ok(FeFunction { space: self, coeffs })
    }

    /// Is `x` in the closure of `cell` (up to a relative tolerance)?
    pub fn contains(&self, cell: usize, x: &Vec3) -> bool {
        const TOL: f64 = 1e-10;
        match self.mesh.kind() {
            CellKind::Tet => {
                let v = self.mesh.cell_vertices(cell);
                let jac = Mat3::from_cols([v[1] - v[0], v[2] - v[0], v[3] - v[0]]);
                let Some(lam) = solve3(&jac, &(*x - v[0])) else {
                    return false;
                };
                let l0 = 1.0 - lam[0] - lam[1] - lam[2];
                l0 >= -TOL && (0..3).all(|d| lam[d] >= -TOL)
            }
            CellKind::Hex => match self.mesh.cell_box(cell) {
                Some((lo, hi)) => (0..3).all(|d| {
                    let tol = TOL * (hi[d] - lo[d]);
                    x[d] >= lo[d] - tol && x[d] <= hi[d] + tol
                }),
                None => false,
            },
        }
    }
}

fn solve3(a: &Mat3, b: &Vec3) -> Option<Vec3> {
    let det = a.det();
    if det == 0.0 {
        return None;
    }
    // Cramer's rule
    let mut x = [0.0; 3];
    for (i, xi) in x.iter_mut().enumerate() {
        let mut m = *a;
        for r in 0..3 {
            m.0[r][i] = b[r];
        }
        *xi = m.det() / det;
    }
    Some(Vec3(x))
}

/// A finite element function: global coefficient vector over a space.
#[derive(Clone, Debug)]
pub struct FeFunction<'s> {
    space: &'s GlobalSpace,
    coeffs: Vec<f64>,
}

impl<'s> FeFunction<'s> {
    pub fn space(&self) -> &'s GlobalSpace {
        self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// `‖coeffs‖_∞`.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scaled(&self, s: f64) -> FeFunction<'s> {
        FeFunction {
            space: self.space,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Restriction of the global vector to a cell's local functionals.
    pub fn local_coeffs(&self, cell: usize) -> Vec<f64> {
        self.space.local_to_global[cell]
            .iter()
            .map(|&g| self.coeffs[g])
            .collect()
    }

    /// The cell's polynomial `Σ_j c_j N_j`.
    pub fn local_poly(&self, cell: usize) -> Result<MatrixPoly, SpaceError> {
        let el = self.space.local_element(cell)?;
        Ok(el.polynomial(&self.local_coeffs(cell)))
    }

    /// Local polynomials of all cells, computed in parallel.
    pub fn local_polys(&self) -> Result<Vec<MatrixPoly>, SpaceError> {
        (0..self.space.mesh.num_cells())
            .into_par_iter()
            .map(|c| self.local_poly(c))
            .collect()
    }

    pub fn evaluate(&self, cell: usize, x: &Vec3) -> Result<Mat3, SpaceError> {
        if !self.space.contains(cell, x) {
            return Err(SpaceError::OutsideCell { cell, point: x.0 });
        }
        Ok(self.local_poly(cell)?.value(x))
    }
}
