use serde::{Deserialize, Serialize};

use super::CellKind;
use crate::error::PolyError;
use crate::tensor3::{Mat3, Vec3};

/// Monomial basis in cell-local affine coordinates `ξ = (x - origin) ⊙ inv_scale`.
///
/// Coordinates are shifted to the cell center and scaled by the cell size so
/// the evaluation matrix stays well conditioned on small cells; the span is
/// the same as that of monomials in physical coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarBasis {
    kind: CellKind,
    degree: usize,
    exponents: Vec<[u32; 3]>,
    origin: Vec3,
    inv_scale: [f64; 3],
}

impl ScalarBasis {
    /// Complete polynomials of degree `degree` on the tetrahedron `vertices`.
    pub fn tet(degree: usize, vertices: &[Vec3; 4]) -> Result<Self, PolyError> {
        if degree == 0 {
            return Err(PolyError::ZeroDegree);
        }
        let mut diameter: f64 = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                diameter = diameter.max((vertices[i] - vertices[j]).norm());
            }
        }
        let volume = Mat3::from_rows([
            vertices[1] - vertices[0],
            vertices[2] - vertices[0],
            vertices[3] - vertices[0],
        ])
        .det()
        .abs()
            / 6.0;
        if !(volume > 1e-14 * diameter.powi(3)) {
            return Err(PolyError::DegenerateCell);
        }
        let origin = (vertices[0] + vertices[1] + vertices[2] + vertices[3]) * 0.25;
        let k = degree as u32;
        let mut exponents = Vec::new();
        for total in 0..=k {
            for a in (0..=total).rev() {
                for b in (0..=total - a).rev() {
                    exponents.push([a, b, total - a - b]);
                }
            }
        }
        let s = 1.0 / diameter;
        Ok(ScalarBasis {
            kind: CellKind::Tet,
            degree,
            exponents,
            origin,
            inv_scale: [s; 3],
        })
    }

    /// Tensor-product polynomials of degree `degree` per direction on the box
    /// `[lower, upper]`.
    pub fn hex(degree: usize, lower: Vec3, upper: Vec3) -> Result<Self, PolyError> {
        if degree == 0 {
            return Err(PolyError::ZeroDegree);
        }
        let mut inv_scale = [0.0; 3];
        for d in 0..3 {
            let w = upper[d] - lower[d];
            if !(w > 0.0) {
                return Err(PolyError::DegenerateCell);
            }
            inv_scale[d] = 2.0 / w;
        }
        let k = degree as u32;
        let mut exponents = Vec::with_capacity((degree + 1).pow(3));
        for c in 0..=k {
            for b in 0..=k {
                for a in 0..=k {
                    exponents.push([a, b, c]);
                }
            }
        }
        Ok(ScalarBasis {
            kind: CellKind::Hex,
            degree,
            exponents,
            origin: (lower + upper) * 0.5,
            inv_scale,
        })
    }

    /// Basis on the reference cell (unit tetrahedron or unit cube).
    pub fn reference(kind: CellKind, degree: usize) -> Result<Self, PolyError> {
        match kind {
            CellKind::Tet => Self::tet(
                degree,
                &[Vec3::ZERO, Vec3::unit(0), Vec3::unit(1), Vec3::unit(2)],
            ),
            CellKind::Hex => Self::hex(degree, Vec3::ZERO, Vec3::new(1.0, 1.0, 1.0)),
        }
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[[u32; 3]] {
        &self.exponents
    }

    fn local(&self, x: &Vec3) -> [f64; 3] {
        let d = *x - self.origin;
        [
            d[0] * self.inv_scale[0],
            d[1] * self.inv_scale[1],
            d[2] * self.inv_scale[2],
        ]
    }

    fn powers(&self, xi: &[f64; 3]) -> Vec<[f64; 3]> {
        let mut p = vec![[1.0; 3]; self.degree + 1];
        for e in 1..=self.degree {
            for d in 0..3 {
                p[e][d] = p[e - 1][d] * xi[d];
            }
        }
        p
    }

    pub fn eval_into(&self, x: &Vec3, out: &mut [f64]) {
        let p = self.powers(&self.local(x));
        for (o, e) in out.iter_mut().zip(&self.exponents) {
            *o = p[e[0] as usize][0] * p[e[1] as usize][1] * p[e[2] as usize][2];
        }
    }

    pub fn eval(&self, x: &Vec3) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.eval_into(x, &mut out);
        out
    }

    /// Physical-space gradients of every basis function.
    pub fn eval_grad(&self, x: &Vec3) -> Vec<Vec3> {
        let p = self.powers(&self.local(x));
        let pw = |e: u32, d: usize| p[e as usize][d];
        // d/dξ ξ^e = e ξ^(e-1)
        let dpw = |e: u32, d: usize| {
            if e == 0 {
                0.0
            } else {
                e as f64 * p[e as usize - 1][d]
            }
        };
        self.exponents
            .iter()
            .map(|&[a, b, c]| {
                Vec3([
                    dpw(a, 0) * pw(b, 1) * pw(c, 2) * self.inv_scale[0],
                    pw(a, 0) * dpw(b, 1) * pw(c, 2) * self.inv_scale[1],
                    pw(a, 0) * pw(b, 1) * dpw(c, 2) * self.inv_scale[2],
                ])
            })
            .collect()
    }
}

/// `Σ c_i φ_i(x)` for matrix coefficients `c_i`.
pub fn matrix_poly_eval(basis: &ScalarBasis, coeffs: &[Mat3], x: &Vec3) -> Result<Mat3, PolyError> {
    check_len(basis, coeffs)?;
    let phi = basis.eval(x);
    Ok(coeffs
        .iter()
        .zip(&phi)
        .fold(Mat3::zeros(), |acc, (c, p)| acc + *c * *p))
}

/// Row-wise curl of the matrix polynomial `Σ c_i φ_i` at `x`.
pub fn row_curl(basis: &ScalarBasis, coeffs: &[Mat3], x: &Vec3) -> Result<Mat3, PolyError> {
    check_len(basis, coeffs)?;
    let grads = basis.eval_grad(x);
    // jac[d] = ∂_d U
    let mut jac = [Mat3::zeros(); 3];
    for (c, g) in coeffs.iter().zip(&grads) {
        for d in 0..3 {
            jac[d] += *c * g[d];
        }
    }
    Ok(curl_from_jacobian(&jac))
}

/// Row-wise curl given the partial derivatives `jac[d] = ∂U/∂x_d`.
pub fn curl_from_jacobian(jac: &[Mat3; 3]) -> Mat3 {
    let mut out = Mat3::zeros();
    for i in 0..3 {
        out.0[i][0] = jac[1].0[i][2] - jac[2].0[i][1];
        out.0[i][1] = jac[2].0[i][0] - jac[0].0[i][2];
        out.0[i][2] = jac[0].0[i][1] - jac[1].0[i][0];
    }
    out
}

fn check_len(basis: &ScalarBasis, coeffs: &[Mat3]) -> Result<(), PolyError> {
    if coeffs.len() != basis.dim() {
        return Err(PolyError::LengthMismatch {
            expected: basis.dim(),
            found: coeffs.len(),
        });
    }
    Ok(())
}

/// A matrix-valued polynomial on one cell.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPoly {
    pub basis: ScalarBasis,
    pub coeffs: Vec<Mat3>,
}

impl MatrixPoly {
    pub fn new(basis: ScalarBasis, coeffs: Vec<Mat3>) -> Result<Self, PolyError> {
        check_len(&basis, &coeffs)?;
        Ok(MatrixPoly { basis, coeffs })
    }

    /// Builds a polynomial from a flat coefficient vector ordered as
    /// `9 * basis_index + 3 * row + col`.
    pub fn from_flat(basis: ScalarBasis, flat: &[f64]) -> Result<Self, PolyError> {
        if flat.len() != 9 * basis.dim() {
            return Err(PolyError::LengthMismatch {
                expected: 9 * basis.dim(),
                found: flat.len(),
            });
        }
        let coeffs = flat.chunks_exact(9).map(Mat3::from_row_slice).collect();
        Ok(MatrixPoly { basis, coeffs })
    }

    pub fn value(&self, x: &Vec3) -> Mat3 {
        matrix_poly_eval(&self.basis, &self.coeffs, x).expect("length checked at construction")
    }

    pub fn curl(&self, x: &Vec3) -> Mat3 {
        row_curl(&self.basis, &self.coeffs, x).expect("length checked at construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor3::anti;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tet(rng: &mut ChaCha8Rng) -> [Vec3; 4] {
        loop {
            let v: [Vec3; 4] =
                std::array::from_fn(|_| Vec3::new(rng.gen(), rng.gen(), rng.gen()));
            let vol = Mat3::from_rows([v[1] - v[0], v[2] - v[0], v[3] - v[0]]).det().abs();
            if vol > 0.05 {
                return v;
            }
        }
    }

    #[test]
    fn linear_basis_spans_barycentrics() {
        // degree-1 basis combined by the inverse evaluation matrix gives the
        // vertex indicator functions
        let v = [Vec3::ZERO, Vec3::unit(0), Vec3::unit(1), Vec3::unit(2)];
        let b = ScalarBasis::tet(1, &v).unwrap();
        let m = nalgebra::DMatrix::from_fn(4, 4, |i, j| b.eval(&v[i])[j]);
        let inv = m.try_inverse().unwrap();
        for i in 0..4 {
            let phi = b.eval(&v[i]);
            for j in 0..4 {
                let val: f64 = (0..4).map(|l| phi[l] * inv[(l, j)]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((val - expected).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn constant_has_zero_gradient() {
        let b = ScalarBasis::reference(CellKind::Tet, 3).unwrap();
        let g = b.eval_grad(&Vec3::new(0.2, 0.1, 0.3));
        assert_eq!(b.exponents()[0], [0, 0, 0]);
        assert_eq!(g[0], Vec3::ZERO);
    }

    #[test]
    fn gradients_match_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 1..=4 {
            for kind in [CellKind::Tet, CellKind::Hex] {
                for _ in 0..25 {
                    let basis = match kind {
                        CellKind::Tet => ScalarBasis::tet(k, &random_tet(&mut rng)).unwrap(),
                        CellKind::Hex => ScalarBasis::hex(
                            k,
                            Vec3::new(0.1, -0.2, 0.3),
                            Vec3::new(0.6, 0.4, 0.7),
                        )
                        .unwrap(),
                    };
                    let c: Vec<f64> = (0..basis.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let x = Vec3::new(rng.gen(), rng.gen(), rng.gen());
                    let f = |p: &Vec3| -> f64 {
                        basis.eval(p).iter().zip(&c).map(|(a, b)| a * b).sum()
                    };
                    let analytic = basis
                        .eval_grad(&x)
                        .iter()
                        .zip(&c)
                        .fold(Vec3::ZERO, |acc, (g, ci)| acc + *g * *ci);
                    let h = 1e-6;
                    for d in 0..3 {
                        let e = Vec3::unit(d) * h;
                        let fd = (f(&(x + e)) - f(&(x - e))) / (2.0 * h);
                        let scale = analytic.max_abs().max(1.0);
                        assert!(
                            (fd - analytic[d]).abs() <= 1e-6 * scale,
                            "k={k} {kind:?} d={d}: fd {fd} vs {}",
                            analytic[d]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn matrix_eval_matches_entrywise_scalar_eval() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let basis = ScalarBasis::reference(CellKind::Tet, 3).unwrap();
        let coeffs: Vec<Mat3> = (0..basis.dim())
            .map(|_| Mat3::from_row_slice(&(0..9).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>()))
            .collect();
        let x = Vec3::new(0.1, 0.25, 0.4);
        let u = matrix_poly_eval(&basis, &coeffs, &x).unwrap();
        let phi = basis.eval(&x);
        for i in 0..3 {
            for j in 0..3 {
                let s: f64 = coeffs.iter().zip(&phi).map(|(c, p)| c.0[i][j] * p).sum();
                assert!((s - u.0[i][j]).abs() < 1e-13);
            }
        }
        assert_eq!(
            matrix_poly_eval(&basis, &vec![Mat3::zeros(); basis.dim()], &x).unwrap(),
            Mat3::zeros()
        );
        assert!(matches!(
            matrix_poly_eval(&basis, &coeffs[1..], &x),
            Err(PolyError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn constant_identity_polynomial() {
        let basis = ScalarBasis::reference(CellKind::Hex, 2).unwrap();
        let mut coeffs = vec![Mat3::zeros(); basis.dim()];
        coeffs[0] = Mat3::identity();
        let p = MatrixPoly::new(basis, coeffs).unwrap();
        for x in [Vec3::ZERO, Vec3::new(0.3, 0.9, 0.5)] {
            assert_eq!(p.value(&x), Mat3::identity());
            assert_eq!(p.curl(&x), Mat3::zeros());
        }
    }

    /// Interpolates a matrix field that is linear in x by solving for the
    /// monomial coefficients at the four vertices.
    fn linear_poly(f: impl Fn(&Vec3) -> Mat3) -> MatrixPoly {
        let v = [Vec3::ZERO, Vec3::unit(0), Vec3::unit(1), Vec3::unit(2)];
        let basis = ScalarBasis::tet(1, &v).unwrap();
        let m = nalgebra::DMatrix::from_fn(4, 4, |i, j| basis.eval(&v[i])[j]);
        let inv = m.try_inverse().unwrap();
        let coeffs = (0..4)
            .map(|j| (0..4).fold(Mat3::zeros(), |acc, i| acc + f(&v[i]) * inv[(j, i)]))
            .collect();
        MatrixPoly::new(basis, coeffs).unwrap()
    }

    #[test]
    fn curl_of_anti_x_is_twice_identity() {
        // hand oracle: row 1 of anti(x) is (0, -x3, x2), whose curl is
        // (∂2 x2 - ∂3(-x3), 0, 0) = (2, 0, 0); likewise for rows 2 and 3
        let p = linear_poly(|x| anti(x));
        let c = p.curl(&Vec3::new(0.2, 0.3, 0.1));
        assert!((c - Mat3::identity() * 2.0).max_abs() < 1e-12);
    }

    #[test]
    fn curl_of_stacked_gradients_vanishes() {
        // rows are gradients of scalar polynomials f_i of degree 2
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let basis = ScalarBasis::reference(CellKind::Tet, 3).unwrap();
        let scalar: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..basis.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        // build gradient field coefficients by differentiating monomials exactly;
        // easiest route: represent rows of grad f in the same monomial basis
        let exps = basis.exponents().to_vec();
        let index_of = |e: [u32; 3]| exps.iter().position(|x| *x == e);
        let mut coeffs = vec![Mat3::zeros(); basis.dim()];
        let s = basis.inv_scale;
        for (i, f) in scalar.iter().enumerate() {
            for (m, e) in exps.iter().enumerate() {
                for d in 0..3 {
                    if e[d] == 0 {
                        continue;
                    }
                    let mut lower = *e;
                    lower[d] -= 1;
                    let target = index_of(lower).unwrap();
                    coeffs[target].0[i][d] += f[m] * e[d] as f64 * s[d];
                }
            }
        }
        for _ in 0..10 {
            let x = Vec3::new(rng.gen(), rng.gen(), rng.gen()) * 0.3;
            let c = row_curl(&basis, &coeffs, &x).unwrap();
            assert!(c.max_abs() < 1e-12, "{c:?}");
        }
    }
}
