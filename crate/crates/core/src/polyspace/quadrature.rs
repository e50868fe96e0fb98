use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use crate::error::PolyError;
use crate::tensor3::{Mat3, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadDomain {
    /// Reference triangle `(0,0), (1,0), (0,1)` embedded in the z = 0 plane.
    Triangle,
    /// Unit square `[0,1]²` embedded in the z = 0 plane.
    Square,
    /// Reference tetrahedron with vertices `0, e1, e2, e3`.
    Tetrahedron,
    /// Unit cube `[0,1]³`.
    Cube,
}

/// Point/weight pairs on a reference or physical domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature {
    pub points: Vec<Vec3>,
    pub weights: Vec<f64>,
    pub exactness: usize,
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
fn gauss_01(n: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("at least one point"));
    rule.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect()
}

/// Collapsed (Duffy) tensor Gauss rule exact for polynomials of degree `d`,
/// validated on every monomial of total degree `≤ d` before it is returned.
pub fn quadrature(domain: QuadDomain, d: usize) -> Result<Quadrature, PolyError> {
    let d = d.max(1);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    match domain {
        QuadDomain::Square | QuadDomain::Cube => {
            let g = gauss_01(d / 2 + 1);
            let zs: &[(f64, f64)] = if domain == QuadDomain::Cube { &g } else { &[(0.0, 1.0)] };
            for &(z, wz) in zs {
                for &(y, wy) in &g {
                    for &(x, wx) in &g {
                        points.push(Vec3::new(x, y, z));
                        weights.push(wx * wy * wz);
                    }
                }
            }
        }
        QuadDomain::Triangle => {
            // x = u, y = v (1 - u), Jacobian (1 - u)
            let g = gauss_01((d + 1) / 2 + 1);
            for &(u, wu) in &g {
                for &(v, wv) in &g {
                    points.push(Vec3::new(u, v * (1.0 - u), 0.0));
                    weights.push(wu * wv * (1.0 - u));
                }
            }
        }
        QuadDomain::Tetrahedron => {
            // x = u, y = v (1 - u), z = w (1 - u)(1 - v), Jacobian (1 - u)² (1 - v)
            let g = gauss_01((d + 2) / 2 + 1);
            for &(u, wu) in &g {
                for &(v, wv) in &g {
                    for &(w, ww) in &g {
                        points.push(Vec3::new(u, v * (1.0 - u), w * (1.0 - u) * (1.0 - v)));
                        weights.push(wu * wv * ww * (1.0 - u).powi(2) * (1.0 - v));
                    }
                }
            }
        }
    }
    let q = Quadrature {
        points,
        weights,
        exactness: d,
    };
    q.validate(domain)?;
    Ok(q)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Exact integral of `x^a y^b z^c` over the reference domain.
fn monomial_integral(domain: QuadDomain, [a, b, c]: [u32; 3]) -> f64 {
    match domain {
        QuadDomain::Square => {
            if c > 0 {
                0.0
            } else {
                1.0 / f64::from((a + 1) * (b + 1))
            }
        }
        QuadDomain::Cube => 1.0 / f64::from((a + 1) * (b + 1) * (c + 1)),
        QuadDomain::Triangle => {
            if c > 0 {
                0.0
            } else {
                factorial(a) * factorial(b) / factorial(a + b + 2)
            }
        }
        QuadDomain::Tetrahedron => {
            factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3)
        }
    }
}

impl Quadrature {
    fn validate(&self, domain: QuadDomain) -> Result<(), PolyError> {
        let d = self.exactness as u32;
        for a in 0..=d {
            for b in 0..=d - a {
                for c in 0..=d - a - b {
                    let approx: f64 = self
                        .points
                        .iter()
                        .zip(&self.weights)
                        .map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32) * p[2].powi(c as i32))
                        .sum();
                    let exact = monomial_integral(domain, [a, b, c]);
                    let error = if exact == 0.0 {
                        approx.abs()
                    } else {
                        ((approx - exact) / exact).abs()
                    };
                    if error > 1e-12 {
                        return Err(PolyError::QuadratureInexact {
                            degree: self.exactness,
                            exponents: [a, b, c],
                            error,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(&Vec3) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }

    /// Maps a reference-tetrahedron rule onto the tetrahedron `v`.
    pub fn map_tet(&self, v: &[Vec3; 4]) -> Quadrature {
        let jac = Mat3::from_cols([v[1] - v[0], v[2] - v[0], v[3] - v[0]]);
        self.map_affine(v[0], jac, jac.det().abs())
    }

    /// Maps a unit-cube rule onto the box `[lower, upper]`.
    pub fn map_box(&self, lower: Vec3, upper: Vec3) -> Quadrature {
        let e = upper - lower;
        let jac = Mat3([[e[0], 0.0, 0.0], [0.0, e[1], 0.0], [0.0, 0.0, e[2]]]);
        self.map_affine(lower, jac, (e[0] * e[1] * e[2]).abs())
    }

    /// Maps a planar rule (triangle or square) onto the surface spanned by
    /// `origin + s·u + t·v`; weights carry the area element `|u × v|`.
    pub fn map_planar(&self, origin: Vec3, u: Vec3, v: Vec3) -> Quadrature {
        let jac = Mat3::from_cols([u, v, Vec3::ZERO]);
        self.map_affine(origin, jac, u.cross(&v).norm())
    }

    fn map_affine(&self, origin: Vec3, jac: Mat3, scale: f64) -> Quadrature {
        Quadrature {
            points: self.points.iter().map(|p| origin + jac * *p).collect(),
            weights: self.weights.iter().map(|w| w * scale).collect(),
            exactness: self.exactness,
        }
    }
}
