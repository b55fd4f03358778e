use super::{add_local_fields, Form, ParityCompilation, PlaquetteKind};
use crate::error::{invalid, Error, Result};
use crate::ising::IsingHamiltonian;

/// (c0, ca, cm) of the square (c0 + ca·a + cm·Σm)², with a² = m² = 1.
pub(super) fn square_coefficients(kind: PlaquetteKind, form: Form) -> Option<(f64, f64, f64)> {
    match (kind, form) {
        (PlaquetteKind::Square, Form::Odd) => Some((0.0, 2.0, 1.0)),
        (PlaquetteKind::Triangle, Form::Odd) => Some((1.0, 2.0, 1.0)),
        (PlaquetteKind::Triangle, Form::Even) => Some((1.0, -2.0, -1.0)),
        (PlaquetteKind::Square, Form::Even) => None,
    }
}

/// Quadratic penalty of one plaquette over `n` spins, with minimum 0.
///
/// Odd square: (2a + Σm)². Odd triangle: (1 + 2a + Σm)².
/// Even triangle: (1 − 2a − Σm)². An even square has no single-auxiliary form.
pub fn plaquette_hamiltonian(
    n: usize,
    kind: PlaquetteKind,
    form: Form,
    members: &[usize],
    aux: usize,
) -> Result<IsingHamiltonian> {
    let (c0, ca, cm) = square_coefficients(kind, form).ok_or_else(|| {
        invalid("even square plaquette needs two auxiliary spins; flip one member first")
    })?;
    let mut h = IsingHamiltonian::new(n);
    h.add_term(&[], c0 * c0 + ca * ca + cm * cm * members.len() as f64)?;
    if c0 != 0.0 {
        h.add_term(&[aux], 2.0 * c0 * ca)?;
        for &m in members {
            h.add_term(&[m], 2.0 * c0 * cm)?;
        }
    }
    for (k, &m) in members.iter().enumerate() {
        h.add_term(&[aux, m], 2.0 * ca * cm)?;
        for &m2 in &members[k + 1..] {
            h.add_term(&[m, m2], 2.0 * cm * cm)?;
        }
    }
    Ok(h)
}

/// 2-body Hamiltonian over K parity spins followed by one auxiliary per plaquette.
pub fn quadratize(c: &ParityCompilation, mask: &[bool]) -> Result<IsingHamiltonian> {
    if mask.len() != c.num_qubits() {
        return Err(Error::Dimension {
            expected: c.num_qubits(),
            got: mask.len(),
        });
    }
    let c = c.with_flip_mask(mask)?;
    let n = c.num_two_body_spins();
    let mut h = IsingHamiltonian::new(n);
    add_local_fields(&c, &mut h)?;
    for (a, p) in c.plaquettes().iter().enumerate() {
        let ph = plaquette_hamiltonian(n, p.kind, p.form, c.members(a), p.aux)
            .map_err(|e| invalid(format!("plaquette {a}: {e}")))?;
        h.add(&ph.scaled(c.penalty()))?;
    }
    Ok(h)
}
