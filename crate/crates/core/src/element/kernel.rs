use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use super::{
    edge_face_conditions, face_conformity_conditions, face_tangential_conditions,
    hex_identity_condition, hex_joint_conditions, vertex_conditions, weight_matrix, Term,
};
use crate::tensor3::{anti, dev, sym, Mat3, Vec3};

/// Singular values below `KERNEL_TOL · σ_max` count as kernel.
pub const KERNEL_TOL: f64 = 1e-10;

/// Named pointwise condition sets, viewed as linear maps on `ℝ^{3×3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ConditionSet {
    /// Five conformity conditions of a face.
    Face5,
    /// Face conformity plus the four tangential conditions.
    Face9,
    /// Two plane conditions and three conditions for each of two faces.
    Edge8,
    /// `Edge8` plus `tᵀUt`.
    Edge9,
    /// Off-diagonal entries and diagonal differences.
    Vertex8,
    /// `Vertex8` plus the trace.
    Vertex9,
    /// Two joint conditions and two conditions per edge at a three-normal vertex.
    HexVertex8,
    /// `HexVertex8` plus the identity sum.
    HexVertex9,
}

impl ConditionSet {
    pub const ALL: [ConditionSet; 8] = [
        ConditionSet::Face5,
        ConditionSet::Face9,
        ConditionSet::Edge8,
        ConditionSet::Edge9,
        ConditionSet::Vertex8,
        ConditionSet::Vertex9,
        ConditionSet::HexVertex8,
        ConditionSet::HexVertex9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConditionSet::Face5 => "face-5",
            ConditionSet::Face9 => "face-9",
            ConditionSet::Edge8 => "edge-8",
            ConditionSet::Edge9 => "edge-9",
            ConditionSet::Vertex8 => "vertex-8",
            ConditionSet::Vertex9 => "vertex-9",
            ConditionSet::HexVertex8 => "hexvertex-8",
            ConditionSet::HexVertex9 => "hexvertex-9",
        }
    }

    /// Null-space dimension the set is expected to have.
    pub fn expected_dimension(self) -> usize {
        match self {
            ConditionSet::Face5 => 4,
            ConditionSet::Edge8 | ConditionSet::Vertex8 | ConditionSet::HexVertex8 => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for ConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConditionSet {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ConditionSet::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown condition set `{s}`"))
    }
}

/// Concrete frame vectors a condition set is instantiated with.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum FrameDraw {
    Face {
        a1: Vec3,
        a2: Vec3,
        n: Vec3,
    },
    Edge {
        t: Vec3,
        edge_normals: [Vec3; 2],
        face_normals: [Vec3; 2],
    },
    /// Vertex conditions are frame-free; `probes` are the normals the
    /// conformity check is run with.
    Vertex { probes: Vec<Vec3> },
    /// `tangents[i]` is the edge opposite the face with normal `normals[i]`.
    HexVertex {
        normals: [Vec3; 3],
        tangents: [Vec3; 3],
        edge_normals: [[Vec3; 2]; 3],
    },
}

/// Uniformly distributed unit vector.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let r = v.norm();
        if r > 0.1 && r <= 1.0 {
            return v * (1.0 / r);
        }
    }
}

/// Random unit vector orthogonal to the unit vector `t`.
fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, t: Vec3) -> Vec3 {
    loop {
        let r = random_unit(rng);
        let p = r - t * r.dot(&t);
        if let Some(u) = p.normalized().filter(|_| p.norm() > 0.1) {
            return u;
        }
    }
}

/// Random unit triple with `|det| ≥ min_det`.
fn random_basis<R: Rng + ?Sized>(rng: &mut R, min_det: f64) -> [Vec3; 3] {
    loop {
        let b = [random_unit(rng), random_unit(rng), random_unit(rng)];
        if Mat3::from_cols(b).det().abs() >= min_det {
            return b;
        }
    }
}

impl FrameDraw {
    pub fn random<R: Rng + ?Sized>(set: ConditionSet, rng: &mut R) -> Self {
        match set {
            ConditionSet::Face5 | ConditionSet::Face9 => {
                let [a1, a2, n] = random_basis(rng, 0.1);
                FrameDraw::Face { a1, a2, n }
            }
            ConditionSet::Edge8 | ConditionSet::Edge9 => {
                let t = random_unit(rng);
                let m1 = random_orthogonal(rng, t);
                let m2 = t.cross(&m1);
                let (n1, n2) = loop {
                    let n1 = random_orthogonal(rng, t);
                    let n2 = random_orthogonal(rng, t);
                    if n1.cross(&n2).norm() > 0.1 {
                        break (n1, n2);
                    }
                };
                FrameDraw::Edge {
                    t,
                    edge_normals: [m1, m2],
                    face_normals: [n1, n2],
                }
            }
            ConditionSet::Vertex8 | ConditionSet::Vertex9 => FrameDraw::Vertex {
                probes: (0..20).map(|_| random_unit(rng)).collect(),
            },
            ConditionSet::HexVertex8 | ConditionSet::HexVertex9 => {
                let normals = random_basis(rng, 0.2);
                let tangents: [Vec3; 3] = std::array::from_fn(|i| {
                    normals[(i + 1) % 3]
                        .cross(&normals[(i + 2) % 3])
                        .normalized()
                        .expect("independent normals")
                });
                let edge_normals = std::array::from_fn(|i| {
                    let m1 = random_orthogonal(rng, tangents[i]);
                    [m1, tangents[i].cross(&m1)]
                });
                FrameDraw::HexVertex {
                    normals,
                    tangents,
                    edge_normals,
                }
            }
        }
    }
}

/// Plane conditions of one edge.
fn plane_conditions(t: Vec3, normals: [Vec3; 2]) -> Vec<Vec<Term>> {
    normals.iter().map(|&m| vec![Term::new(1.0, m, t)]).collect()
}

/// The stacked conditions of a set under a frame draw.
pub fn conditions(set: ConditionSet, draw: &FrameDraw) -> Vec<Vec<Term>> {
    match (set, draw) {
        (ConditionSet::Face5, FrameDraw::Face { a1, a2, n }) => {
            face_conformity_conditions(*a1, *a2, *n).to_vec()
        }
        (ConditionSet::Face9, FrameDraw::Face { a1, a2, n }) => {
            let mut c = face_conformity_conditions(*a1, *a2, *n).to_vec();
            c.extend(face_tangential_conditions(*a1, *a2, *n));
            c
        }
        (
            ConditionSet::Edge8 | ConditionSet::Edge9,
            FrameDraw::Edge {
                t,
                edge_normals,
                face_normals,
            },
        ) => {
            let mut c = plane_conditions(*t, *edge_normals);
            for &n in face_normals {
                c.extend(edge_face_conditions(*t, n));
            }
            if set == ConditionSet::Edge9 {
                c.push(vec![Term::new(1.0, *t, *t)]);
            }
            c
        }
        (ConditionSet::Vertex8 | ConditionSet::Vertex9, FrameDraw::Vertex { .. }) => {
            let mut c = vertex_conditions();
            if set == ConditionSet::Vertex8 {
                c.pop();
            }
            c
        }
        (
            ConditionSet::HexVertex8 | ConditionSet::HexVertex9,
            FrameDraw::HexVertex {
                normals,
                tangents,
                edge_normals,
            },
        ) => {
            let mut c = hex_joint_conditions(*normals).to_vec();
            for i in 0..3 {
                c.extend(plane_conditions(tangents[i], edge_normals[i]));
            }
            if set == ConditionSet::HexVertex9 {
                c.push(hex_identity_condition(*normals));
            }
            c
        }
        _ => panic!("frame draw does not match condition set {set}"),
    }
}

/// Orthonormal null-space basis (Frobenius inner product) of the conditions
/// `U ↦ W_i : U`, together with all singular values in descending order.
pub fn kernel_basis(weights: &[Mat3]) -> (Vec<Mat3>, Vec<f64>) {
    // pad with zero rows so the thin SVD returns a full 9×9 V
    let rows = weights.len().max(9);
    let mut a = DMatrix::<f64>::zeros(rows, 9);
    for (i, w) in weights.iter().enumerate() {
        for (j, x) in w.to_array().into_iter().enumerate() {
            a[(i, j)] = x;
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut pairs: Vec<(f64, usize)> = svd.singular_values.iter().copied().zip(0..).collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let smax = pairs[0].0;
    let basis = pairs
        .iter()
        .filter(|(s, _)| *s < KERNEL_TOL * smax || smax == 0.0)
        .map(|&(_, i)| Mat3::from_row_slice(v_t.row(i).transpose().as_slice()))
        .collect();
    (basis, pairs.into_iter().map(|p| p.0).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelAudit {
    pub set: ConditionSet,
    pub dimension: usize,
    pub expected: usize,
    pub singular_values: Vec<f64>,
    /// Distance of the identity from the null space, relative to `‖I‖_F`.
    pub identity_residual: f64,
    /// Largest `‖sym(U Anti n)‖_F` over the conformity sub-kernels of the
    /// set; `None` for the unisolvent sets.
    pub conformity_defect: Option<f64>,
    pub kernel: Vec<Mat3>,
}

impl KernelAudit {
    pub fn passed(&self) -> bool {
        let identity_ok = match self.expected {
            1 => self.identity_residual < 1e-10,
            _ => true,
        };
        self.dimension == self.expected
            && identity_ok
            && self.conformity_defect.map_or(true, |d| d < 1e-10)
    }
}

fn project(basis: &[Mat3], u: &Mat3) -> Mat3 {
    basis
        .iter()
        .fold(Mat3::zeros(), |acc, b| acc + *b * b.ddot(u))
}

fn max_defect(basis: &[Mat3], normals: &[Vec3]) -> f64 {
    let mut worst: f64 = 0.0;
    for u in basis {
        for n in normals {
            worst = worst.max(sym(&(*u * anti(n))).frobenius());
        }
    }
    worst
}

fn kernel_of(conds: &[Vec<Term>]) -> Vec<Mat3> {
    let w: Vec<Mat3> = conds.iter().map(|t| weight_matrix(t)).collect();
    kernel_basis(&w).0
}

/// Largest defect over the conformity statements attached to a set.
fn conformity(set: ConditionSet, draw: &FrameDraw, kernel: &[Mat3]) -> Option<f64> {
    match (set, draw) {
        (ConditionSet::Face5, FrameDraw::Face { n, .. }) => Some(max_defect(kernel, &[*n])),
        // per face: its three conditions and the two plane conditions
        (
            ConditionSet::Edge8,
            FrameDraw::Edge {
                t,
                edge_normals,
                face_normals,
            },
        ) => Some(
            face_normals
                .iter()
                .map(|&n| {
                    let mut c = plane_conditions(*t, *edge_normals);
                    c.extend(edge_face_conditions(*t, n));
                    max_defect(&kernel_of(&c), &[n])
                })
                .fold(0.0, f64::max),
        ),
        (ConditionSet::Vertex8, FrameDraw::Vertex { probes }) => Some(max_defect(kernel, probes)),
        // per face F_i: the joint conditions and the conditions of the two
        // edges bounding F_i at the vertex
        (
            ConditionSet::HexVertex8,
            FrameDraw::HexVertex {
                normals,
                tangents,
                edge_normals,
            },
        ) => Some(
            (0..3)
                .map(|i| {
                    let mut c = hex_joint_conditions(*normals).to_vec();
                    for j in (0..3).filter(|&j| j != i) {
                        c.extend(plane_conditions(tangents[j], edge_normals[j]));
                    }
                    max_defect(&kernel_of(&c), &[normals[i]])
                })
                .fold(0.0, f64::max),
        ),
        _ => None,
    }
}

/// Null space of a condition set under one frame draw, with the checks
/// attached to it.
pub fn kernel_audit(set: ConditionSet, draw: &FrameDraw) -> KernelAudit {
    let conds = conditions(set, draw);
    let w: Vec<Mat3> = conds.iter().map(|t| weight_matrix(t)).collect();
    let (kernel, singular_values) = kernel_basis(&w);
    let id = Mat3::identity();
    let identity_residual = (id - project(&kernel, &id)).frobenius() / id.frobenius();
    KernelAudit {
        set,
        dimension: kernel.len(),
        expected: set.expected_dimension(),
        singular_values,
        identity_residual,
        conformity_defect: conformity(set, draw, &kernel),
        kernel,
    }
}

/// Kernels of `U ↦ sym(U Anti n)` and `U ↦ dev sym(U Anti n)` and the
/// largest mutual projection residual between them.
pub fn sym_devsym_kernels(n: &Vec3) -> (Vec<Mat3>, Vec<Mat3>, f64) {
    let map_rows = |f: &dyn Fn(&Mat3) -> Mat3| -> Vec<Mat3> {
        // row r of the 9×9 matrix is the functional U ↦ f(U)_r
        let images: Vec<[f64; 9]> = (0..9)
            .map(|j| f(&Mat3::unit(j / 3, j % 3)).to_array())
            .collect();
        (0..9)
            .map(|r| Mat3::from_row_slice(&std::array::from_fn::<f64, 9, _>(|j| images[j][r])))
            .collect()
    };
    let a = anti(n);
    let ks = kernel_basis(&map_rows(&|u| sym(&(*u * a)))).0;
    let kd = kernel_basis(&map_rows(&|u| dev(&sym(&(*u * a))))).0;
    let mut residual: f64 = 0.0;
    for u in &ks {
        residual = residual.max((*u - project(&kd, u)).frobenius());
    }
    for u in &kd {
        residual = residual.max((*u - project(&ks, u)).frobenius());
    }
    (ks, kd, residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor3::conformity_defect;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn expected_dimensions_for_fifty_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for set in ConditionSet::ALL {
            for _ in 0..50 {
                let audit = kernel_audit(set, &FrameDraw::random(set, &mut rng));
                assert!(audit.passed(), "{set}: {audit:?}");
            }
        }
    }

    #[test]
    fn face5_kernel_matches_brute_force_defect() {
        // oracle: the 9×9 map U ↦ sym(U Anti n) written out entrywise
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let draw = FrameDraw::random(ConditionSet::Face5, &mut rng);
            let FrameDraw::Face { n, .. } = draw else { unreachable!() };
            let audit = kernel_audit(ConditionSet::Face5, &draw);
            let mut rows = Vec::new();
            for a in 0..3 {
                for b in 0..3 {
                    let mut w = Mat3::zeros();
                    for i in 0..3 {
                        for j in 0..3 {
                            w.0[i][j] = conformity_defect(&Mat3::unit(i, j), &n).0[a][b];
                        }
                    }
                    rows.push(w);
                }
            }
            let (brute, _) = kernel_basis(&rows);
            assert_eq!(brute.len(), audit.dimension);
            for u in &audit.kernel {
                assert!((*u - project(&brute, u)).frobenius() < 1e-10);
            }
        }
    }

    #[test]
    fn sym_and_devsym_kernels_coincide() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = random_unit(&mut rng);
            let (ks, kd, res) = sym_devsym_kernels(&n);
            assert_eq!((ks.len(), kd.len()), (4, 4));
            assert!(res < 1e-10);
        }
    }

    #[test]
    fn names_round_trip() {
        for set in ConditionSet::ALL {
            assert_eq!(set.name().parse::<ConditionSet>().unwrap(), set);
        }
        assert!("edge-7".parse::<ConditionSet>().is_err());
    }
}
