//! Simulated annealing on the embedded square plaquette, with chain fixing.

use parity_anneal::cli::square_plaquette;
use parity_anneal::ising::brute_force_ground_states;
use parity_anneal::pegasus::{build_original, embed_problem, generate_pegasus};
use parity_anneal::sampler::{
    chain_states, distribution_stats, gs_fraction, simulated_anneal, AnnealParams,
};

fn main() -> parity_anneal::Result<()> {
    let g = generate_pegasus(3, &[])?;
    let (e, t) = build_original(&g)?;
    let one = e.select(&t.plaquettes[0].qubits())?;
    let h2 = square_plaquette();
    let emb = embed_problem(&h2, &one, &g)?;
    let gs = brute_force_ground_states(&h2)?.states;
    println!(
        "{} physical spins, chain strength {:.3}",
        emb.hamiltonian.n(),
        emb.chain_strength
    );

    for sweeps in [1, 4, 16, 64, 256] {
        let set = simulated_anneal(&emb.hamiltonian, &AnnealParams::new(2000, sweeps), 7)?;
        let f = gs_fraction(&set, &gs, &emb.chain_map, 7)?;
        let breaks = chain_states(&set, &emb.chain_map)?.break_rate;
        let mean = breaks.iter().sum::<f64>() / breaks.len() as f64;
        println!(
            "{sweeps:>4} sweeps: raw {:.3}  fixed {:.3}  break rate {mean:.3}",
            f.raw, f.logical
        );
    }

    let set = simulated_anneal(&emb.hamiltonian, &AnnealParams::new(8000, 64), 7)?;
    let st = distribution_stats(&set, &gs, &emb.chain_map, 7)?;
    println!(
        "ground-state histogram (uniform would be {:.1} each):",
        st.uniform_reference
    );
    for c in &st.counts {
        println!("  {}  {}", c.state, c.count);
    }
    println!("chi-square {:.2}", st.chi_square);
    Ok(())
}
