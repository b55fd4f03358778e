//! Compiles a 4-spin all-to-all problem onto the LHZ triangle.

use parity_anneal::parity::{compile_lhz, to_multibody, tune_penalty, ParityForm};
use parity_anneal::IsingHamiltonian;

fn main() -> parity_anneal::Result<()> {
    let h = IsingHamiltonian::from_terms(
        4,
        [
            (vec![0, 1], 1.0),
            (vec![0, 2], -0.5),
            (vec![1, 3], 0.75),
            (vec![2, 3], 1.0),
            (vec![0], 0.25),
        ],
    )?;
    let c = compile_lhz(&h)?;
    println!(
        "N = {}  K = {}  plaquettes = {}",
        c.logical_n(),
        c.num_qubits(),
        c.plaquettes().len()
    );
    for q in c.parity_qubits() {
        println!(
            "  qubit {}  field {:+.2}  at {:?}",
            q.label, q.field_coefficient, q.grid_pos
        );
    }
    for (a, p) in c.plaquettes().iter().enumerate() {
        let labels: Vec<String> = p.members.iter().map(ToString::to_string).collect();
        println!(
            "  {:?} {:?}: {}  (qubits {:?})",
            p.kind,
            p.form,
            labels.join(" "),
            c.members(a)
        );
    }
    let lambda = tune_penalty(&c, ParityForm::Multibody)?;
    let hm = to_multibody(&c.with_penalty(lambda)?)?;
    println!("tuned penalty {lambda:.4}, multi-body order {}", hm.order());
    Ok(())
}
