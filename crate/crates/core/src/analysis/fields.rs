use std::f64::consts::PI;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::AnalysisError;
use crate::polyspace::curl_from_jacobian;
use crate::tensor3::{anti, sym, Mat3, Vec3};

/// A smooth matrix field with known derivatives.
pub trait MatrixField: Sync {
    fn value(&self, x: &Vec3) -> Mat3;

    /// `[∂₁U, ∂₂U, ∂₃U]`.
    fn jacobian(&self, x: &Vec3) -> [Mat3; 3];

    /// Row-wise curl.
    fn curl(&self, x: &Vec3) -> Mat3 {
        curl_from_jacobian(&self.jacobian(x))
    }

    fn sym_curl(&self, x: &Vec3) -> Mat3 {
        sym(&self.curl(x))
    }

    fn name(&self) -> String;
}

/// `U_ij(x) = sin(π(x₁ + 2x₂ + 3x₃) + i + 2j)` with 1-based `i, j`.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrigField;

impl TrigField {
    const DIR: [f64; 3] = [1.0, 2.0, 3.0];

    fn phase(x: &Vec3, i: usize, j: usize) -> f64 {
        PI * (x[0] + 2.0 * x[1] + 3.0 * x[2]) + (i + 1) as f64 + 2.0 * (j + 1) as f64
    }
}

impl MatrixField for TrigField {
    fn value(&self, x: &Vec3) -> Mat3 {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| Self::phase(x, i, j).sin())))
    }

    fn jacobian(&self, x: &Vec3) -> [Mat3; 3] {
        let c = Mat3(std::array::from_fn(|i| std::array::from_fn(|j| Self::phase(x, i, j).cos())));
        std::array::from_fn(|d| c * (PI * Self::DIR[d]))
    }

    fn name(&self) -> String {
        "trig".into()
    }
}

/// `Σ_α C_α x^α` over exponents of total degree `≤ degree`.
#[derive(Clone, Debug)]
pub struct PolyField {
    pub degree: usize,
    pub terms: Vec<([u32; 3], Mat3)>,
}

impl PolyField {
    /// Coefficients i.i.d. uniform on `[-1, 1]`.
    pub fn random(degree: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut terms = Vec::new();
        let d = degree as u32;
        for a in 0..=d {
            for b in 0..=d - a {
                for c in 0..=d - a - b {
                    let m = Mat3(std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-1.0..=1.0))));
                    terms.push(([a, b, c], m));
                }
            }
        }
        PolyField { degree, terms }
    }
}

fn pow(x: f64, e: u32) -> f64 {
    x.powi(e as i32)
}

impl MatrixField for PolyField {
    fn value(&self, x: &Vec3) -> Mat3 {
        self.terms.iter().fold(Mat3::zeros(), |acc, (e, m)| {
            acc + *m * (pow(x[0], e[0]) * pow(x[1], e[1]) * pow(x[2], e[2]))
        })
    }

    fn jacobian(&self, x: &Vec3) -> [Mat3; 3] {
        let mut out = [Mat3::zeros(); 3];
        for (e, m) in &self.terms {
            for d in 0..3 {
                if e[d] == 0 {
                    continue;
                }
                let mut s = e[d] as f64;
                for q in 0..3 {
                    s *= pow(x[q], if q == d { e[q] - 1 } else { e[q] });
                }
                out[d] += *m * s;
            }
        }
        out
    }

    fn name(&self) -> String {
        format!("poly:{}", self.degree)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConstantField(pub Mat3);

impl MatrixField for ConstantField {
    fn value(&self, _: &Vec3) -> Mat3 {
        self.0
    }

    fn jacobian(&self, _: &Vec3) -> [Mat3; 3] {
        [Mat3::zeros(); 3]
    }

    fn name(&self) -> String {
        "constant".into()
    }
}

/// `U(x) = Anti(x)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct AntiField;

impl MatrixField for AntiField {
    fn value(&self, x: &Vec3) -> Mat3 {
        anti(x)
    }

    fn jacobian(&self, _: &Vec3) -> [Mat3; 3] {
        std::array::from_fn(|d| anti(&Vec3::unit(d)))
    }

    fn name(&self) -> String {
        "anti".into()
    }
}

/// Field selector accepted on the command line: `trig` or `poly:D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Trig,
    Poly(usize),
}

/// Seed of the polynomial behind `poly:D`.
pub const POLY_FIELD_SEED: u64 = 0;

impl FieldSpec {
    pub fn build(self) -> Box<dyn MatrixField> {
        match self {
            FieldSpec::Trig => Box::new(TrigField),
            FieldSpec::Poly(d) => Box::new(PolyField::random(d, POLY_FIELD_SEED)),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = AnalysisError;
    fn from_str(s: &str) -> Result<Self, AnalysisError> {
        if s == "trig" {
            return Ok(FieldSpec::Trig);
        }
        s.strip_prefix("poly:")
            .and_then(|d| d.parse().ok())
            .map(FieldSpec::Poly)
            .ok_or_else(|| AnalysisError::UnknownField(s.to_string()))
    }
}
