//! Builds a paint-shop instance, prints its Ising form and the best colorings.

use parity_anneal::ising::brute_force_ground_states;
use parity_anneal::paintshop::{count_switches, enumerate_instances, PaintShopInstance};

fn main() -> parity_anneal::Result<()> {
    // Four cars, two models; one of each must come out black.
    let inst = PaintShopInstance::new(4, vec![vec![0, 2], vec![1, 3]], vec![1, 1], 1.0)?;
    let h = inst.hamiltonian()?;
    println!("{}  ({} spins)\n{h}", inst.label(), h.n());
    if let Some(w) = inst.penalty_warning() {
        println!("warning: {w}");
    }
    let gs = brute_force_ground_states(&h)?;
    for z in &gs.states {
        println!(
            "{z}  E = {:.3}  switches = {}",
            gs.energy,
            count_switches(z)
        );
    }

    let all = enumerate_instances(2, 4)?;
    println!("\n{} non-trivial instances with 2..=4 cars:", all.len());
    for i in &all {
        print!("{} ", i.label());
    }
    println!();
    Ok(())
}
