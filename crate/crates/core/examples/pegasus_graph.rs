//! Generates Pegasus graphs and walks the diamond rows of P_4.

use parity_anneal::pegasus::{check_diamond_contract, extract_diamonds, generate_pegasus};

fn main() -> parity_anneal::Result<()> {
    for m in 2..=6 {
        let g = generate_pegasus(m, &[])?;
        println!("P_{m}: {} nodes, {} edges", g.num_nodes(), g.num_edges());
    }
    let g = generate_pegasus(4, &[])?;
    let rows = extract_diamonds(&g);
    for (r, row) in rows.iter().enumerate() {
        let first = &row[0];
        println!(
            "row {r}: {} diamonds, first external {:?} internal {:?}",
            row.len(),
            first.external,
            first.internal
        );
    }
    println!(
        "contract violations: {}",
        check_diamond_contract(&g, &rows).len()
    );

    let q = g.nodes().nth(10).unwrap();
    println!(
        "node {q} = {:?}, degree {}",
        g.coord(q),
        g.neighbors(q).count()
    );
    Ok(())
}
