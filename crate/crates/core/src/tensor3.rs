//! Small dense 3-vectors and 3×3 matrices, plus the tensor operators the
//! element is built from: `anti`, `sym`, `dev`, `trace` and the face jump
//! defect `sym(U anti(n))`.
//!
//! All matrices use row-major semantics: `m[i][j]` is row `i`, column `j`.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::FrameError;

/// Tolerance on unit length and orthogonality of frame vectors.
pub const FRAME_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    /// Canonical basis vector `e_i` (0-based).
    pub fn unit(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Vec3(v)
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }
    pub fn y(&self) -> f64 {
        self.0[1]
    }
    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Returns `None` for vectors whose length is not a positive finite number.
    pub fn normalized(&self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(*self * (1.0 / n))
        } else {
            None
        }
    }

    /// Dyadic product `self ⊗ other`, i.e. `self · otherᵀ`.
    pub fn outer(&self, other: &Vec3) -> Mat3 {
        let mut m = Mat3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[i] * other.0[j];
            }
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const fn zeros() -> Self {
        Mat3([[0.0; 3]; 3])
    }

    pub const fn identity() -> Self {
        Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    /// The matrix unit `E_ij` with a single one in row `i`, column `j`.
    pub fn unit(i: usize, j: usize) -> Self {
        let mut m = Mat3::zeros();
        m.0[i][j] = 1.0;
        m
    }

    pub fn from_rows(rows: [Vec3; 3]) -> Self {
        Mat3([rows[0].0, rows[1].0, rows[2].0])
    }

    pub fn from_cols(cols: [Vec3; 3]) -> Self {
        Mat3::from_rows(cols).transpose()
    }

    /// Builds a matrix from its row-major entries.
    pub fn from_row_slice(v: &[f64]) -> Self {
        assert_eq!(v.len(), 9);
        let mut m = Mat3::zeros();
        for (k, x) in v.iter().enumerate() {
            m.0[k / 3][k % 3] = *x;
        }
        m
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3(self.0[i])
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn transpose(&self) -> Mat3 {
        let mut t = Mat3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        Vec3([self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v)])
    }

    /// Frobenius inner product `A : B`.
    pub fn ddot(&self, other: &Mat3) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.0[i][j] * other.0[i][j];
            }
        }
        s
    }

    pub fn frobenius(&self) -> f64 {
        self.ddot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn det(&self) -> f64 {
        self.row(0).dot(&self.row(1).cross(&self.row(2)))
    }

    /// Row-major entries.
    pub fn to_array(&self) -> [f64; 9] {
        let mut out = [0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                out[3 * i + j] = self.0[i][j];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Mat3 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(mut self, o: Mat3) -> Mat3 {
        self += o;
        self
    }
}

impl AddAssign for Mat3 {
    fn add_assign(&mut self, o: Mat3) {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] += o.0[i][j];
            }
        }
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(mut self, o: Mat3) -> Mat3 {
        self -= o;
        self
    }
}

impl SubAssign for Mat3 {
    fn sub_assign(&mut self, o: Mat3) {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] -= o.0[i][j];
            }
        }
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        self * -1.0
    }
}

impl Mul<f64> for Mat3 {
    type Output = Mat3;
    fn mul(mut self, s: f64) -> Mat3 {
        for row in self.0.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        self
    }
}

impl Mul<Mat3> for f64 {
    type Output = Mat3;
    fn mul(self, m: Mat3) -> Mat3 {
        m * self
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut p = Mat3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                p.0[i][j] = (0..3).map(|l| self.0[i][l] * o.0[l][j]).sum();
            }
        }
        p
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        self.mul_vec(&v)
    }
}

/// The skew matrix with `anti(a) b = a × b`.
pub fn anti(a: &Vec3) -> Mat3 {
    let [a1, a2, a3] = a.0;
    Mat3([[0.0, -a3, a2], [a3, 0.0, -a1], [-a2, a1, 0.0]])
}

pub fn sym(a: &Mat3) -> Mat3 {
    (*a + a.transpose()) * 0.5
}

pub fn trace(a: &Mat3) -> f64 {
    a.0[0][0] + a.0[1][1] + a.0[2][2]
}

/// Deviatoric part `A - trace(A)/3 · I`.
pub fn dev(a: &Mat3) -> Mat3 {
    *a - Mat3::identity() * (trace(a) / 3.0)
}

/// `sym(U anti(n))`: vanishes on a face with normal `n` iff the jump `U`
/// is admissible for H(sym Curl).
pub fn conformity_defect(u: &Mat3, n: &Vec3) -> Mat3 {
    sym(&(*u * anti(n)))
}

/// `U anti(n)`: the tangential trace whose vanishing characterises H(Curl).
pub fn curl_defect(u: &Mat3, n: &Vec3) -> Mat3 {
    *u * anti(n)
}

pub fn is_unit(v: &Vec3) -> bool {
    (v.norm() - 1.0).abs() <= FRAME_TOL
}

/// Deterministic orthonormal completion of a unit vector `t`.
///
/// `n1` is the normalized projection of the canonical axis least aligned
/// with `t` (lowest axis index on ties) and `n2 = t × n1`.
pub fn orthonormal_complement(t: &Vec3) -> Result<(Vec3, Vec3), FrameError> {
    if !t.is_finite() || !is_unit(t) {
        return Err(FrameError::NotUnit { norm: t.norm() });
    }
    let mut axis = 0;
    for j in 1..3 {
        if t[j].abs() < t[axis].abs() {
            axis = j;
        }
    }
    let e = Vec3::unit(axis);
    let n1 = (e - *t * t.dot(&e))
        .normalized()
        .ok_or(FrameError::Degenerate)?;
    let n2 = t.cross(&n1);
    Ok((n1, n2))
}

/// Normal and tangent pair attached to a face of the grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceFrame {
    pub normal: Vec3,
    pub a1: Vec3,
    pub a2: Vec3,
}

/// Unit tangent and two unit normals attached to an edge; `n2 = t × n1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeFrame {
    pub tangent: Vec3,
    pub n1: Vec3,
    pub n2: Vec3,
}

/// Three face normals shared by every cell at a hexahedral-grid vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexFrame {
    pub axes: [Vec3; 3],
}

impl VertexFrame {
    pub fn canonical() -> Self {
        VertexFrame {
            axes: [Vec3::unit(0), Vec3::unit(1), Vec3::unit(2)],
        }
    }
}

impl EdgeFrame {
    pub fn from_tangent(tangent: Vec3) -> Result<Self, FrameError> {
        let (n1, n2) = orthonormal_complement(&tangent)?;
        Ok(EdgeFrame { tangent, n1, n2 })
    }

    pub fn is_valid(&self) -> bool {
        is_unit(&self.tangent)
            && is_unit(&self.n1)
            && is_unit(&self.n2)
            && self.tangent.dot(&self.n1).abs() <= FRAME_TOL
            && (self.tangent.cross(&self.n1) - self.n2).max_abs() <= FRAME_TOL
    }
}

impl FaceFrame {
    pub fn is_valid(&self) -> bool {
        is_unit(&self.normal)
            && is_unit(&self.a1)
            && is_unit(&self.a2)
            && Mat3::from_cols([self.a1, self.a2, self.normal]).det().abs() > FRAME_TOL
    }
}

/// Frame of any grid entity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum EntityFrame {
    Face(FaceFrame),
    Edge(EdgeFrame),
    Vertex(VertexFrame),
}
