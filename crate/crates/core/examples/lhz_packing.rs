//! Largest LHZ triangle on each derived topology, then embeds one.

use parity_anneal::parity::{compile, ParityForm};
use parity_anneal::pegasus::{
    build_embedding, embed_problem, find_largest_lhz, generate_pegasus, place_lhz, EmbeddingStyle,
};
use parity_anneal::IsingHamiltonian;

fn main() -> parity_anneal::Result<()> {
    for m in 3..=6 {
        let g = generate_pegasus(m, &[])?;
        for style in [EmbeddingStyle::Original, EmbeddingStyle::Dense] {
            let (_, t) = build_embedding(&g, style)?;
            let pl = find_largest_lhz(&t);
            println!(
                "P_{m} {style:>8}: {} plaquette sites, largest triangle N = {}",
                t.plaquettes.len(),
                pl.n
            );
        }
    }

    let g = generate_pegasus(4, &[])?;
    let (e, t) = build_embedding(&g, EmbeddingStyle::Original)?;
    let pl = find_largest_lhz(&t);
    let n = pl.n;
    let mut h = IsingHamiltonian::new(n);
    for i in 0..n {
        for j in i + 1..n {
            h.add_term(&[i, j], if (i + j) % 2 == 0 { 1.0 } else { -1.0 })?;
        }
    }
    let (c, h2) = compile(&h, ParityForm::TwoBody, 1.0)?;
    let sites = place_lhz(&t, &pl, &c)?;
    let emb = embed_problem(&h2, &e.select(&sites)?, &g)?;
    println!(
        "\nN = {n} on P_4: {} logical-side spins, {} physical spins, chain strength {:.3}",
        h2.n(),
        emb.hamiltonian.n(),
        emb.chain_strength
    );
    Ok(())
}
