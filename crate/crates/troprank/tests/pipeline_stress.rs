//! Long-running pipeline diagnostics, run explicitly with `-- --ignored`.

use troprank::{kapranov_rank3_5col, sample_with_rank};

#[test]
#[ignore = "stress diagnostic; the acceptance suite covers the gate"]
fn pipeline_stress_all_heights() {
    let mut failures = Vec::new();
    let start = std::time::Instant::now();
    for g in 4..=8usize {
        for seed in 0..100u64 {
            let a = match sample_with_rank(g, 5, 3, seed) {
                Ok(a) => a,
                Err(e) => {
                    failures.push(format!("{}x5 seed {}: sample: {}", g, seed, e));
                    continue;
                }
            };
            match kapranov_rank3_5col(&a) {
                Ok(c) if c.verified => {}
                Ok(_) => failures.push(format!("{}x5 seed {}: unverified", g, seed)),
                Err(e) => failures.push(format!("{}x5 seed {}: {}\n{}", g, seed, e, a)),
            }
        }
        eprintln!("g={} done at {:?}", g, start.elapsed());
    }
    assert!(
        failures.is_empty(),
        "{} failures:\n{}",
        failures.len(),
        failures.join("\n")
    );
}
