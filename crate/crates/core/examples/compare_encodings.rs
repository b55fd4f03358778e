//! Gap of the logical, multi-body and 2-body encodings of small instances.

use parity_anneal::anneal::{compare_encodings, CompareOptions, GapScanOptions};
use parity_anneal::cli::find_instance;

fn main() -> parity_anneal::Result<()> {
    let opts = CompareOptions {
        scan: GapScanOptions {
            grid_size: 101,
            levels: 2,
            ..Default::default()
        },
    };
    for label in ["(2,1,1)", "(3,1,1)", "(3,1,2)"] {
        let inst = find_instance(label)?;
        for r in compare_encodings(&inst, &opts)? {
            match (r.min_gap, r.s_star, &r.optimum) {
                (Some(g), Some(s), Some(z)) => {
                    println!(
                        "{label} {:>9} {:>2} qubits  gap {g:.5} at s = {s:.3}  optimum {z}",
                        r.encoding.to_string(),
                        r.n_qubits
                    )
                }
                _ => println!(
                    "{label} {:>9} {:>2} qubits  skipped: {}",
                    r.encoding.to_string(),
                    r.n_qubits,
                    r.skipped.unwrap_or_default()
                ),
            }
        }
    }
    Ok(())
}
