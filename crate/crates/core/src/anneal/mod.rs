//! Transverse-field annealing Hamiltonians H(s) = (1 − s)·Σσx + s·H_f and
//! their low-lying spectra.

mod compare;
mod gap;
mod schedule;
mod spectrum;

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::ising::IsingHamiltonian;

pub use compare::{
    compare_encodings, resolve_degeneracy, CompareOptions, EncodedProblem, Encoding, EncodingRow,
};
pub use gap::{gap_scan, GapScan, GapScanOptions, GapSummary};
pub use schedule::Schedule;
pub use spectrum::{low_spectrum, SpectrumOptions};

/// Default qubit limit for exact simulation.
pub const SIMULATION_CAP: usize = 20;

/// Classical energies of H_f, shared by every point on the path.
#[derive(Clone, Debug)]
pub struct AnnealingPath {
    n: usize,
    energies: Vec<f64>,
}

impl AnnealingPath {
    pub fn new(h_f: &IsingHamiltonian) -> Result<Self> {
        Self::with_cap(h_f, SIMULATION_CAP)
    }

    pub fn with_cap(h_f: &IsingHamiltonian, cap: usize) -> Result<Self> {
        if h_f.n() == 0 {
            return Err(invalid("annealing needs at least one qubit"));
        }
        let energies = h_f.spectrum(cap)?;
        Ok(Self {
            n: h_f.n(),
            energies,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classical_energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn at(&self, s: f64) -> Result<TransverseFieldOperator<'_>> {
        if !(0.0..=1.0).contains(&s) {
            return Err(invalid(format!("s = {s} outside [0, 1]")));
        }
        Ok(TransverseFieldOperator {
            n: self.n,
            s,
            energies: &self.energies,
        })
    }
}

/// Builds the path for `h_f` and returns the operator at `s`; see [`AnnealingPath`]
/// to reuse the classical energies across many `s`.
pub fn interpolated_hamiltonian(h_f: &IsingHamiltonian, s: f64) -> Result<OwnedOperator> {
    let path = AnnealingPath::new(h_f)?;
    path.at(s)?;
    Ok(OwnedOperator { path, s })
}

#[derive(Clone, Debug)]
pub struct OwnedOperator {
    path: AnnealingPath,
    s: f64,
}

impl OwnedOperator {
    pub fn view(&self) -> TransverseFieldOperator<'_> {
        TransverseFieldOperator {
            n: self.path.n,
            s: self.s,
            energies: &self.path.energies,
        }
    }
}

/// (1 − s)·Σσx + s·diag(E), applied matrix-free.
#[derive(Clone, Copy, Debug)]
pub struct TransverseFieldOperator<'a> {
    n: usize,
    s: f64,
    energies: &'a [f64],
}

impl TransverseFieldOperator<'_> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn transverse(&self) -> f64 {
        1.0 - self.s
    }

    pub fn diagonal(&self, x: usize) -> f64 {
        self.s * self.energies[x]
    }

    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        let t = self.transverse();
        let s = self.s;
        let n = self.n;
        let e = self.energies;
        let kernel = |(x, o): (usize, &mut f64)| {
            let mut acc = s * e[x] * v[x];
            if t != 0.0 {
                let mut flips = 0.0;
                for i in 0..n {
                    flips += v[x ^ (1 << i)];
                }
                acc += t * flips;
            }
            *o = acc;
        };
        if self.dim() >= 1 << 14 {
            use rayon::prelude::*;
            out.par_iter_mut().enumerate().for_each(kernel);
        } else {
            out.iter_mut().enumerate().for_each(kernel);
        }
    }

    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        if self.n > 14 {
            return Err(Error::OverCap { n: self.n, cap: 14 });
        }
        let d = self.dim();
        let t = self.transverse();
        Ok(DMatrix::from_fn(d, d, |r, c| {
            if r == c {
                self.diagonal(r)
            } else if (r ^ c).count_ones() == 1 {
                t
            } else {
                0.0
            }
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_matches_apply() {
        let h = IsingHamiltonian::from_terms(
            3,
            [(vec![0, 1], -1.0), (vec![2], 0.4), (vec![0, 1, 2], 0.3)],
        )
        .unwrap();
        let path = AnnealingPath::new(&h).unwrap();
        let op = path.at(0.3).unwrap();
        let m = op.to_dense().unwrap();
        let v: Vec<f64> = (0..8).map(|i| (i as f64 * 0.7).sin()).collect();
        let mut out = vec![0.0; 8];
        op.apply(&v, &mut out);
        let expect = &m * nalgebra::DVector::from_vec(v);
        for i in 0..8 {
            assert!((out[i] - expect[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_s_and_cap() {
        let h = IsingHamiltonian::new(2);
        assert!(interpolated_hamiltonian(&h, 1.5).is_err());
        assert!(matches!(
            interpolated_hamiltonian(&IsingHamiltonian::new(21), 0.5),
            Err(Error::OverCap { .. })
        ));
    }
}
