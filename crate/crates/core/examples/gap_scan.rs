//! Minimum spectral gap along the transverse-field path.

use parity_anneal::anneal::{gap_scan, GapScanOptions};
use parity_anneal::cli::find_instance;
use parity_anneal::IsingHamiltonian;

fn main() -> parity_anneal::Result<()> {
    let one = IsingHamiltonian::from_terms(1, [(vec![0], 1.0)])?;
    let scan = gap_scan(
        &one,
        &GapScanOptions {
            levels: 2,
            ..Default::default()
        },
    )?;
    println!(
        "single spin: gap {:.6} at s = {:.4} (sqrt 2 = {:.6})",
        scan.min_gap,
        scan.s_star,
        2f64.sqrt()
    );

    let h = find_instance("(4,2,1)#1")?.hamiltonian()?;
    let scan = gap_scan(
        &h,
        &GapScanOptions {
            grid_size: 101,
            levels: 4,
            ..Default::default()
        },
    )?;
    println!(
        "(4,2,1)#1: gap {:.5} at s = {:.3}, biased {}",
        scan.min_gap, scan.s_star, scan.biased
    );
    for (s, l) in scan.grid.iter().zip(&scan.levels).step_by(20) {
        println!(
            "  s = {s:.2}  {:?}",
            l.iter().map(|e| format!("{e:+.3}")).collect::<Vec<_>>()
        );
    }
    Ok(())
}
