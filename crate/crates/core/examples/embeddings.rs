//! Original vs dense plaquette embeddings on P_3, and a defect.

use parity_anneal::pegasus::{build_dense, build_original, generate_pegasus, validate_embedding};

fn main() -> parity_anneal::Result<()> {
    let g = generate_pegasus(3, &[])?;
    for (name, (e, t)) in [
        ("original", build_original(&g)?),
        ("dense", build_dense(&g)?),
    ] {
        let one = e.select(&t.plaquettes[0].qubits())?;
        println!(
            "{name}: {} qubit sites, {} plaquettes, one plaquette uses {} spins (chains up to {})",
            t.sites.len(),
            t.plaquettes.len(),
            one.num_nodes(),
            one.max_chain_len()
        );
        for (id, chain) in &one.chains {
            println!("  chain {id}: {chain:?}");
        }
        println!("  valid: {}", validate_embedding(&e, &g).is_valid());
    }

    // Knock out one node of the first chain and rebuild.
    let (e, _) = build_original(&g)?;
    let dead = e.chains.values().next().unwrap()[0];
    let gd = g.with_defects([dead])?;
    let (ed, td) = build_original(&gd)?;
    println!(
        "\nwith node {dead} dead: {} missing sites, {} chains, valid {}",
        td.missing.len(),
        ed.chains.len(),
        validate_embedding(&ed, &gd).is_valid()
    );
    Ok(())
}
