//! Null spaces of the pointwise condition sets under random frames, and the
//! coincidence of the sym and dev-sym conformity kernels.
//!
//! cargo run --example lemma_audit [SEED]

use symcurl::analysis::lemma_suite;
use symcurl::element::{kernel_audit, ConditionSet, FrameDraw};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0);

    // one draw in detail
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let audit = kernel_audit(ConditionSet::Face5, &FrameDraw::random(ConditionSet::Face5, &mut rng));
    let sv: Vec<String> = audit.singular_values.iter().map(|s| format!("{s:.3e}")).collect();
    println!("face-5 singular values: {}", sv.join(" "));
    for (i, b) in audit.kernel.iter().enumerate() {
        println!("  kernel[{i}] = {:+.4?}", b.0);
    }

    let report = lemma_suite(seed, 50, 1000);
    println!("\nset,expected,min_dim,max_dim,identity_residual,conformity_defect,passed");
    for r in &report.rows {
        println!(
            "{},{},{},{},{:.2e},{},{}",
            r.set,
            r.expected,
            r.min_dimension,
            r.max_dimension,
            r.max_identity_residual,
            r.max_conformity_defect.map(|d| format!("{d:.2e}")).unwrap_or_default(),
            r.passed
        );
    }
    let s = &report.sym_dev_sym;
    println!(
        "sym/dev-sym: {} normals, kernel dims {:?} / {:?}, projection residual {:.2e}",
        s.samples, s.sym_dimensions, s.dev_sym_dimensions, s.max_projection_residual
    );
    println!("all passed: {}", report.passed);
    Ok(())
}
