use super::quadratize::square_coefficients;
use super::{Form, ParityCompilation};
use crate::error::{invalid, Error, Result};
use crate::gf2::{self, BitRow};
use crate::ising::SpinAssignment;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub logical: SpinAssignment,
    /// Every plaquette parity condition holds.
    pub valid: bool,
    /// Labels only determine the logical state up to a global flip; the
    /// last logical spin was pinned to +1.
    pub global_flip_ambiguous: bool,
}

impl ParityCompilation {
    /// Physical spins for logical state `z`: K parity spins (in the flipped
    /// frame) followed by the energy-minimizing auxiliary of each plaquette.
    pub fn encode(&self, z: &SpinAssignment) -> Result<SpinAssignment> {
        if z.len() != self.logical_n() {
            return Err(Error::Dimension {
                expected: self.logical_n(),
                got: z.len(),
            });
        }
        let mut x = SpinAssignment::all_up(self.num_two_body_spins());
        for (i, q) in self.parity_qubits().iter().enumerate() {
            let v = z.product(q.label.indices());
            x.set(i, if q.flipped { -v } else { v });
        }
        for (a, p) in self.plaquettes().iter().enumerate() {
            let Some((c0, ca, cm)) = square_coefficients(p.kind, p.form) else {
                continue;
            };
            let sum: f64 = self.members(a).iter().map(|&i| f64::from(x.get(i))).sum();
            let cost = |s: f64| (c0 + ca * s + cm * sum).powi(2);
            if cost(-1.0) < cost(1.0) {
                x.set(p.aux, -1);
            }
        }
        Ok(x)
    }

    /// Whether every plaquette holds on the first K spins of `x`.
    pub fn is_valid(&self, x: &SpinAssignment) -> Result<bool> {
        if x.len() < self.num_qubits() {
            return Err(Error::Dimension {
                expected: self.num_qubits(),
                got: x.len(),
            });
        }
        Ok(self.plaquettes().iter().enumerate().all(|(a, p)| {
            let prod = x.product(self.members(a));
            prod == if p.form == Form::Odd { -1 } else { 1 }
        }))
    }

    /// Reads the logical state from the first K spins of `x`.
    ///
    /// Uses singleton qubits when present; otherwise solves the label system
    /// over a fixed independent subset of qubits.
    pub fn decode(&self, x: &SpinAssignment) -> Result<Decoded> {
        let valid = self.is_valid(x)?;
        let n = self.logical_n();
        let raw = |i: usize| {
            let v = x.get(i);
            if self.parity_qubits()[i].flipped {
                -v
            } else {
                v
            }
        };
        let reference = self.reference_qubits();
        let rows: Vec<BitRow> = reference
            .iter()
            .map(|&i| {
                BitRow::from_indices(n, self.parity_qubits()[i].label.indices().iter().copied())
            })
            .collect();
        let rank = rows.len();
        let all_even = self.parity_qubits().iter().all(|q| q.label.len() % 2 == 0);
        let mut rows = rows;
        let mut rhs: Vec<bool> = reference.iter().map(|&i| raw(i) == -1).collect();
        let ambiguous = if rank == n {
            false
        } else if rank + 1 == n && all_even && n > 0 {
            rows.push(BitRow::from_indices(n, [n - 1]));
            rhs.push(false);
            true
        } else {
            return Err(invalid(format!(
                "labels span rank {rank} of {n} logical spins; no reference set determines the logical state"
            )));
        };
        let y = gf2::solve(n, &rows, &rhs)
            .ok_or_else(|| invalid("reference qubits are inconsistent"))?;
        let logical = SpinAssignment::new(y.iter().map(|&b| if b { -1 } else { 1 }).collect())?;
        Ok(Decoded {
            logical,
            valid,
            global_flip_ambiguous: ambiguous,
        })
    }

    /// Linearly independent qubits used for decoding, singletons first.
    pub fn reference_qubits(&self) -> Vec<usize> {
        let n = self.logical_n();
        let mut order: Vec<usize> = (0..self.num_qubits()).collect();
        order.sort_by_key(|&i| (self.parity_qubits()[i].label.len() != 1, i));
        let rows: Vec<BitRow> = order
            .iter()
            .map(|&i| {
                BitRow::from_indices(n, self.parity_qubits()[i].label.indices().iter().copied())
            })
            .collect();
        gf2::independent_rows(&rows)
            .into_iter()
            .map(|r| order[r])
            .collect()
    }
}
