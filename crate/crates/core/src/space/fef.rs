//! `.fef` text format for finite element functions:
//!
//! ```text
//! fef <k> <dimension>
//! <coefficient>        (one per line, in global DOF order)
//! ```

use std::fmt::Write;

use super::{FeFunction, GlobalSpace};
use crate::error::SpaceError;

pub fn save_fef(f: &FeFunction<'_>) -> String {
    let mut out = String::with_capacity(24 * f.coeffs().len() + 32);
    writeln!(out, "fef {} {}", f.space().degree(), f.coeffs().len()).unwrap();
    for c in f.coeffs() {
        writeln!(out, "{c}").unwrap();
    }
    out
}

/// Parses a `.fef` file against a space of matching degree and dimension.
pub fn load_fef<'s>(space: &'s GlobalSpace, text: &str) -> Result<FeFunction<'s>, SpaceError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or(SpaceError::Parse {
        line: 1,
        message: "empty input".into(),
    })?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let bad_header = || SpaceError::Parse {
        line,
        message: format!("expected `fef <k> <dimension>`, found `{header}`"),
    };
    if tokens.len() != 3 || tokens[0] != "fef" {
        return Err(bad_header());
    }
    let k: usize = tokens[1].parse().map_err(|_| bad_header())?;
    let dim: usize = tokens[2].parse().map_err(|_| bad_header())?;
    if k != space.degree() {
        return Err(SpaceError::Parse {
            line,
            message: format!("degree {k} does not match the space degree {}", space.degree()),
        });
    }
    let mut coeffs = Vec::with_capacity(dim);
    for (line, l) in lines {
        let c: f64 = l.parse().map_err(|_| SpaceError::Parse {
            line,
            message: format!("bad coefficient `{l}`"),
        })?;
        coeffs.push(c);
    }
    if coeffs.len() != dim {
        return Err(SpaceError::Parse {
            line,
            message: format!("header announces {dim} coefficients, found {}", coeffs.len()),
        });
    }
    space.function(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_unit_cube_tets;

    #[test]
    fn round_trip_is_exact() {
        let s = GlobalSpace::new(generate_unit_cube_tets(1).unwrap(), 2).unwrap();
        let f = s.random_function(5);
        let text = save_fef(&f);
        assert!(text.starts_with(&format!("fef 2 {}\n", s.dimension())));
        let g = load_fef(&s, &text).unwrap();
        assert_eq!(g.coeffs(), f.coeffs());
    }

    #[test]
    fn mismatches_are_reported() {
        let s = GlobalSpace::new(generate_unit_cube_tets(1).unwrap(), 1).unwrap();
        assert!(matches!(load_fef(&s, "fef 2 3\n1\n2\n3\n"), Err(SpaceError::Parse { line: 1, .. })));
        assert!(matches!(load_fef(&s, "fef 1 2\n1\nx\n"), Err(SpaceError::Parse { line: 3, .. })));
        assert!(matches!(
            load_fef(&s, "fef 1 2\n1\n2\n"),
            Err(SpaceError::DimensionMismatch { found: 2, .. })
        ));
    }
}
