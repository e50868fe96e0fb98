//! Acceptance checks 1-9. Each check prints one line:
//!
//!   PASS [n] description: measured values
//!
//! cargo test --release --test acceptance

use std::io::Write;
use std::process::Command;

use symcurl::analysis::{
    conformity_study, convergence_study, errors, lemma_suite, nonconformity_witness, MatrixField,
    unisolvence_study, unit_cube, PolyField, TrigField,
};
use symcurl::element::VertexScheme;
use symcurl::polyspace::CellKind;
use symcurl::space::GlobalSpace;
use symcurl::tensor3::Vec3;

struct Outcome {
    id: usize,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn report(outcomes: &[Outcome]) -> bool {
    // bypasses libtest output capture
    let mut out = std::io::stdout().lock();
    for o in outcomes {
        writeln!(
            out,
            "{} [{}] {}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.title,
            o.detail
        )
        .unwrap();
    }
    outcomes.iter().all(|o| o.passed)
}

fn criterion_1() -> Outcome {
    let expected = [
        (CellKind::Tet, [36, 90, 180, 315]),
        (CellKind::Hex, [72, 243, 576, 1125]),
    ];
    let mut passed = true;
    let mut seen = Vec::new();
    for (kind, counts) in expected {
        for (k, want) in (1..=4).zip(counts) {
            let out = Command::new(env!("CARGO_BIN_EXE_elem"))
                .args(["info", "--cell", kind.name(), "--k", &k.to_string()])
                .output()
                .expect("run elem");
            let stdout = String::from_utf8_lossy(&out.stdout);
            let total = stdout
                .lines()
                .find_map(|l| l.strip_prefix("total "))
                .and_then(|l| l.split_whitespace().next())
                .and_then(|n| n.parse::<usize>().ok());
            passed &= out.status.success() && total == Some(want);
            seen.push(format!("{}{k}={}", kind.name(), total.map_or("?".into(), |t| t.to_string())));
        }
    }
    Outcome {
        id: 1,
        title: "DOF counts printed by `elem info`",
        passed,
        detail: seen.join(" "),
    }
}

fn criterion_2_3() -> (Outcome, Outcome) {
    let r = lemma_suite(0, 50, 1000);
    let mut passed = true;
    let mut parts = Vec::new();
    for row in &r.rows {
        let dims_ok = row.draws == 50
            && row.min_dimension == row.expected
            && row.max_dimension == row.expected;
        // the identity spans every one-dimensional kernel
        let id_ok = row.expected != 1 || row.max_identity_residual < 1e-10;
        passed &= dims_ok && id_ok;
        parts.push(format!("{}:{}..{}", row.set, row.min_dimension, row.max_dimension));
    }
    let lemmas = Outcome {
        id: 2,
        title: "null-space dimensions over 50 random frames",
        passed,
        detail: parts.join(" "),
    };
    let s = &r.sym_dev_sym;
    let sds = Outcome {
        id: 3,
        title: "sym and dev-sym kernels coincide for 1000 normals",
        passed: s.samples == 1000
            && s.sym_dimensions == [4, 4]
            && s.dev_sym_dimensions == [4, 4]
            && s.max_projection_residual < 1e-10,
        detail: format!(
            "dims {:?}/{:?}, projection residual {:.2e}",
            s.sym_dimensions, s.dev_sym_dimensions, s.max_projection_residual
        ),
    };
    (lemmas, sds)
}

fn criterion_4() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for k in 1..=3 {
        let r = unisolvence_study(CellKind::Tet, k, 100, 0).expect("unisolvence study");
        passed &= r.samples == 100 && r.failures == 0 && r.max_residual < 1e-8;
        parts.push(format!("k={k} residual {:.2e} max cond {:.1e}", r.max_residual, r.max_condition));
    }
    Outcome {
        id: 4,
        title: "biorthogonality on 100 random tets",
        passed,
        detail: parts.join(", "),
    }
}

fn criterion_5() -> Outcome {
    let mut passed = true;
    let mut worst: f64 = 0.0;
    for kind in [CellKind::Tet, CellKind::Hex] {
        for k in [1, 2] {
            let space = GlobalSpace::new(unit_cube(kind, 2).unwrap(), k).unwrap();
            let r = conformity_study(&space, 20, 0).expect("conformity study");
            passed &= r.samples.len() == 20
                && r.worst_normalized_sym < 1e-10
                && r.worst_normalized_dev_sym < 1e-10;
            worst = worst.max(r.worst_normalized_sym).max(r.worst_normalized_dev_sym);
        }
    }
    Outcome {
        id: 5,
        title: "sym and dev-sym face defects of random functions",
        passed,
        detail: format!("worst normalized defect {worst:.2e}"),
    }
}

fn criterion_6() -> Outcome {
    let mut passed = true;
    let mut witnesses = 0;
    let mut worst_raw: f64 = 0.0;
    let mut worst_sym: f64 = 0.0;
    for (kind, n) in [(CellKind::Tet, 1), (CellKind::Tet, 2), (CellKind::Hex, 2)] {
        for k in [1, 2] {
            let space = GlobalSpace::new(unit_cube(kind, n).unwrap(), k).unwrap();
            for cell in 0..space.mesh().num_cells() {
                let w = nonconformity_witness(&space, cell).expect("witness");
                passed &= !w.faces.is_empty()
                    && w.faces.iter().all(|f| (f.raw - 2f64.sqrt()).abs() <= 1e-12 && f.sym < 1e-12);
                worst_raw = worst_raw.max(w.max_raw_deviation);
                worst_sym = worst_sym.max(w.max_sym);
                witnesses += 1;
            }
        }
    }
    Outcome {
        id: 6,
        title: "identity indicators: raw jump sqrt 2, sym jump zero",
        passed,
        detail: format!("{witnesses} cells, max |raw - sqrt 2| {worst_raw:.1e}, max sym {worst_sym:.1e}"),
    }
}

fn criterion_7() -> Outcome {
    let center = Vec3::new(0.5, 0.5, 0.5);
    let mut counts = Vec::new();
    for scheme in [VertexScheme::ThreeNormal, VertexScheme::Continuous] {
        let mesh = unit_cube(CellKind::Hex, 2).unwrap();
        let v = (0..mesh.num_vertices())
            .find(|&v| (mesh.vertex(v) - center).norm() < 1e-14)
            .expect("center vertex");
        let space = GlobalSpace::with_scheme(mesh, 1, scheme).unwrap();
        counts.push(space.interior_vertex_dof_count(v).unwrap());
    }
    Outcome {
        id: 7,
        title: "DOFs at the interior vertex of cube-hex:2",
        passed: counts == [22, 16],
        detail: format!("three-normal {}, continuous {}", counts[0], counts[1]),
    }
}

fn criterion_8() -> Outcome {
    let mut passed = true;
    let mut worst: f64 = 0.0;
    let cases = [
        (CellKind::Tet, 2, 1),
        (CellKind::Tet, 2, 2),
        (CellKind::Tet, 1, 3),
        (CellKind::Hex, 2, 1),
        (CellKind::Hex, 2, 2),
        (CellKind::Hex, 1, 3),
    ];
    for (kind, n, k) in cases {
        let space = GlobalSpace::new(unit_cube(kind, n).unwrap(), k).unwrap();
        for degree in 0..=k {
            for seed in 0..3 {
                let field = PolyField::random(degree, seed);
                let u = space.interpolate(|x| field.value(x)).unwrap();
                let e = errors(&field, &u).unwrap();
                passed &= e.l2 < 1e-9;
                worst = worst.max(e.l2);
            }
        }
    }
    Outcome {
        id: 8,
        title: "polynomials of degree <= k are reproduced",
        passed,
        detail: format!("worst L2 error {worst:.2e}"),
    }
}

fn criterion_9() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for kind in [CellKind::Tet, CellKind::Hex] {
        for k in [1, 2] {
            let r = convergence_study(&TrigField, kind, k, 4, 3).expect("convergence study");
            let (l2, sc) = r.final_rates();
            passed &= (l2 - (k + 1) as f64).abs() <= 0.2;
            if k == 1 {
                passed &= (sc - 1.0).abs() <= 0.3;
                parts.push(format!("{} k=1 L2 {l2:.3} symcurl {sc:.3}", kind.name()));
            } else {
                parts.push(format!("{} k={k} L2 {l2:.3}", kind.name()));
            }
        }
    }
    Outcome {
        id: 9,
        title: "trig field rates, 3 levels from cube:4",
        passed,
        detail: parts.join(", "),
    }
}

#[test]
fn acceptance() {
    let (c2, c3) = criterion_2_3();
    let outcomes = vec![
        criterion_1(),
        c2,
        c3,
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ];
    assert!(report(&outcomes), "acceptance criteria failed");
}
