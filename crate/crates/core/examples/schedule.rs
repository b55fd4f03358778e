//! A linear ramp with a pause placed just after the minimum gap.

use parity_anneal::anneal::{gap_scan, GapScanOptions, Schedule};
use parity_anneal::cli::find_instance;

fn main() -> parity_anneal::Result<()> {
    let h = find_instance("(3,1,2)")?.hamiltonian()?;
    let scan = gap_scan(
        &h,
        &GapScanOptions {
            levels: 2,
            ..Default::default()
        },
    )?;
    let s_pause = (scan.s_star + 0.05).min(0.95);
    let sch = Schedule::with_pause(20.0, s_pause, 10.0)?;
    println!(
        "min gap {:.4} at s = {:.3}; pausing at {s_pause:.3}",
        scan.min_gap, scan.s_star
    );
    println!("breakpoints {:?}", sch.breakpoints());
    for t in (0..=30).step_by(3) {
        println!("  t = {t:>2} us  s = {:.3}", sch.s_at(f64::from(t)));
    }
    println!("pauses {:?}", sch.pauses());
    Ok(())
}
