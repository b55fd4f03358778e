use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::gap::{gap_scan, GapScanOptions};
use crate::error::{invalid, Error, Result};
use crate::ising::{brute_force_ground_states, IsingHamiltonian, SpinAssignment};
use crate::paintshop::PaintShopInstance;
use crate::parity::{
    compile_lhz, hamiltonian, solve_flip_mask, tune_penalty, ParityCompilation, ParityForm,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Encoding {
    #[serde(rename = "logical")]
    Logical,
    #[serde(rename = "multibody")]
    Multibody,
    #[serde(rename = "2body")]
    TwoBody,
}

impl Encoding {
    pub const ALL: [Self; 3] = [Self::Logical, Self::Multibody, Self::TwoBody];

    /// Qubits needed for `n` logical spins.
    pub fn qubit_count(self, n: usize) -> usize {
        match self {
            Self::Logical => n,
            Self::Multibody => n * (n + 1) / 2,
            Self::TwoBody => n * n,
        }
    }

    fn parity_form(self) -> Option<ParityForm> {
        match self {
            Self::Logical => None,
            Self::Multibody => Some(ParityForm::Multibody),
            Self::TwoBody => Some(ParityForm::TwoBody),
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Logical => "logical",
            Self::Multibody => "multibody",
            Self::TwoBody => "2body",
        })
    }
}

impl FromStr for Encoding {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logical" => Ok(Self::Logical),
            "multibody" => Ok(Self::Multibody),
            "2body" => Ok(Self::TwoBody),
            _ => Err(invalid(format!("unknown encoding {s:?}"))),
        }
    }
}

/// A logical problem in one encoding, with the compilation needed to decode it.
#[derive(Clone, Debug)]
pub struct EncodedProblem {
    pub encoding: Encoding,
    pub hamiltonian: IsingHamiltonian,
    pub compilation: Option<ParityCompilation>,
}

impl EncodedProblem {
    /// Compiles `h` with a tuned penalty; 2-body uses the solved flip mask.
    pub fn build(h: &IsingHamiltonian, encoding: Encoding) -> Result<Self> {
        let Some(form) = encoding.parity_form() else {
            return Ok(Self {
                encoding,
                hamiltonian: h.clone(),
                compilation: None,
            });
        };
        let mut c = compile_lhz(h)?;
        if form == ParityForm::TwoBody {
            c = c.with_flip_mask(&solve_flip_mask(&c)?)?;
        }
        let c = c.with_penalty(tune_penalty(&c, form)?)?;
        Ok(Self {
            encoding,
            hamiltonian: hamiltonian(&c, form)?,
            compilation: Some(c),
        })
    }

    pub fn penalty(&self) -> Option<f64> {
        self.compilation.as_ref().map(ParityCompilation::penalty)
    }

    /// Logical reading of a physical state in this encoding.
    pub fn decode(&self, x: &SpinAssignment) -> Result<SpinAssignment> {
        match &self.compilation {
            None => Ok(x.clone()),
            Some(c) => Ok(c.decode(x)?.logical),
        }
    }

    /// Brute-force ground states decoded to logical states, sorted and deduplicated.
    pub fn decoded_ground_states(&self) -> Result<Vec<SpinAssignment>> {
        let gs = brute_force_ground_states(&self.hamiltonian)?;
        let mut out = gs
            .states
            .iter()
            .map(|x| self.decode(x))
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct CompareOptions {
    pub scan: GapScanOptions,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            scan: GapScanOptions {
                levels: 2,
                ..Default::default()
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodingRow {
    pub instance: String,
    pub encoding: Encoding,
    pub n_qubits: usize,
    pub penalty: Option<f64>,
    pub min_gap: Option<f64>,
    pub s_star: Option<f64>,
    /// Logical state decoded from the classical ground state at s = 1.
    pub optimum: Option<SpinAssignment>,
    /// Reason the encoding was not simulated.
    pub skipped: Option<String>,
}

/// Adds `bias` to the last spin when `h` has several ground states; returns
/// the Hamiltonian and whether the bias was applied.
pub fn resolve_degeneracy(h: &IsingHamiltonian, bias: f64) -> Result<(IsingHamiltonian, bool)> {
    if brute_force_ground_states(h)?.states.len() > 1 {
        Ok((h.add_last_spin_bias(bias)?, true))
    } else {
        Ok((h.clone(), false))
    }
}

/// Minimum gap of the logical, multi-body and 2-body encodings of `inst`.
///
/// The last logical spin is biased before compilation when the logical
/// ground state is degenerate, so all encodings share one optimum.
pub fn compare_encodings(
    inst: &PaintShopInstance,
    opts: &CompareOptions,
) -> Result<Vec<EncodingRow>> {
    let (h, _) = resolve_degeneracy(&inst.hamiltonian()?, opts.scan.bias)?;
    let unresolved = brute_force_ground_states(&h)?.states.len() > 1;
    Encoding::ALL
        .iter()
        .map(|&encoding| {
            let n_qubits = encoding.qubit_count(h.n());
            let mut row = EncodingRow {
                instance: inst.label(),
                encoding,
                n_qubits,
                penalty: None,
                min_gap: None,
                s_star: None,
                optimum: None,
                skipped: None,
            };
            if n_qubits > opts.scan.cap {
                row.skipped = Some(format!(
                    "{n_qubits} qubits exceeds the simulation cap of {}",
                    opts.scan.cap
                ));
                return Ok(row);
            }
            if unresolved {
                row.skipped =
                    Some("degeneracy unresolved: the last-spin bias leaves several optima".into());
                return Ok(row);
            }
            let problem = EncodedProblem::build(&h, encoding)?;
            let scan = gap_scan(&problem.hamiltonian, &opts.scan)?;
            let gs = brute_force_ground_states(&problem.hamiltonian)?;
            if gs.states.len() != 1 {
                return Err(invalid(format!(
                    "{encoding} encoding of {} keeps a degenerate optimum",
                    inst.label()
                )));
            }
            row.penalty = problem.penalty();
            row.min_gap = Some(scan.min_gap);
            row.s_star = Some(scan.s_star);
            row.optimum = Some(problem.decode(&gs.states[0])?);
            Ok(row)
        })
        .collect()
}
