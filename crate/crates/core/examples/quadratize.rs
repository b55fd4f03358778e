//! Turns plaquette constraints into 2-body terms and round-trips states.

use parity_anneal::ising::brute_force_ground_states;
use parity_anneal::parity::{compile, plaquette_hamiltonian, Form, ParityForm, PlaquetteKind};
use parity_anneal::{IsingHamiltonian, SpinAssignment};

fn main() -> parity_anneal::Result<()> {
    let square = plaquette_hamiltonian(5, PlaquetteKind::Square, Form::Odd, &[0, 1, 2, 3], 4)?;
    println!("odd square:\n{square}");
    for x in brute_force_ground_states(&square)?.states {
        println!("  {x}");
    }

    let h = IsingHamiltonian::from_terms(
        3,
        [(vec![0, 1], 1.0), (vec![1, 2], 1.0), (vec![0, 2], -1.0)],
    )?;
    let (c, h2) = compile(&h, ParityForm::TwoBody, 2.0)?;
    println!(
        "\n2-body form on {} spins, flip mask {:?}",
        h2.n(),
        c.flip_mask()
    );
    for bits in 0..8 {
        let z = SpinAssignment::from_bits(3, bits);
        let x = c.encode(&z)?;
        let d = c.decode(&x)?;
        println!(
            "  {z} -> {x} -> {} valid={}  E = {:+.2} / {:+.2}",
            d.logical,
            d.valid,
            h.energy(&z)?,
            h2.energy(&x)?
        );
    }
    Ok(())
}
