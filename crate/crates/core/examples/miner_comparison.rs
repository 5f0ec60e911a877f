//! Times FP-Growth against Apriori on a generated dense database and checks
//! that both return the same itemsets.
//!
//! `cargo run --release --example miner_comparison [N] [THREADS]`

use freqkg::bench::{Benchmark, REFERENCE_APRIORI_SECONDS, REFERENCE_FPGROWTH_SECONDS};
use freqkg::txdb::generate_dense;
use freqkg::MiningConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(50_000);
    let threads: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);

    let db = generate_dense(n, 50, 8, 42)?;
    let config = MiningConfig::new(0.01, 0.6)?;
    let report = Benchmark { repetitions: 3, threads, corrupt_fpgrowth: false }.run(&db, &config)?;
    print!("{}", report.render_text());
    println!(
        "\nfor comparison, the original inspection study measured {REFERENCE_APRIORI_SECONDS} s (Apriori) \
         vs {REFERENCE_FPGROWTH_SECONDS} s (FP-Growth) on its own data"
    );
    Ok(())
}
