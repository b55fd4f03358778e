use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spectrum::{low_spectrum, SpectrumOptions};
use super::{AnnealingPath, SIMULATION_CAP};
use crate::error::{invalid, Error, Result};
use crate::ising::{IsingHamiltonian, ENERGY_TOL};

#[derive(Clone, Debug)]
pub struct GapScanOptions {
    pub grid_size: usize,
    /// Eigenvalues recorded per grid point (at least 2).
    pub levels: usize,
    /// Bias added to the last spin when the classical ground state is degenerate.
    pub bias: f64,
    /// Golden-section stops once the bracket is narrower than this.
    pub refine_tol: f64,
    pub cap: usize,
    pub spectrum: SpectrumOptions,
}

impl Default for GapScanOptions {
    fn default() -> Self {
        Self {
            grid_size: 201,
            levels: 8,
            bias: 0.01,
            refine_tol: 1e-4,
            cap: SIMULATION_CAP,
            spectrum: SpectrumOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapScan {
    pub grid: Vec<f64>,
    pub levels: Vec<Vec<f64>>,
    pub min_gap: f64,
    pub s_star: f64,
    /// Whether the last-spin bias was applied.
    pub biased: bool,
    pub n_qubits: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapSummary {
    pub encoding: String,
    pub n_qubits: usize,
    pub min_gap: f64,
    pub s_star: f64,
}

impl GapScan {
    pub fn gaps(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels.iter().map(|l| l[1] - l[0])
    }

    /// `s,eps0,eps1,...` rows, one per grid point.
    pub fn to_csv(&self) -> String {
        let k = self.levels.first().map_or(0, Vec::len);
        let mut out = String::from("s");
        for i in 0..k {
            let _ = write!(out, ",eps{i}");
        }
        out.push('\n');
        for (s, l) in self.grid.iter().zip(&self.levels) {
            let _ = write!(out, "{s}");
            for e in l {
                let _ = write!(out, ",{e:.12e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn summary(&self, encoding: &str) -> GapSummary {
        GapSummary {
            encoding: encoding.into(),
            n_qubits: self.n_qubits,
            min_gap: self.min_gap,
            s_star: self.s_star,
        }
    }
}

/// Scans ε₁ − ε₀ on a uniform grid over s ∈ [0, 1] and refines the minimum
/// by golden-section search on the bracketing interval.
pub fn gap_scan(h_f: &IsingHamiltonian, opts: &GapScanOptions) -> Result<GapScan> {
    if opts.grid_size < 3 {
        return Err(invalid(format!("grid size {} is below 3", opts.grid_size)));
    }
    if opts.levels < 2 {
        return Err(invalid("gap scan needs at least 2 levels"));
    }
    let mut path = AnnealingPath::with_cap(h_f, opts.cap)?;
    let mut biased = false;
    if is_degenerate(path.classical_energies()) {
        path = AnnealingPath::with_cap(&h_f.add_last_spin_bias(opts.bias)?, opts.cap)?;
        biased = true;
    }
    let step = 1.0 / (opts.grid_size - 1) as f64;
    let grid: Vec<f64> = (0..opts.grid_size)
        .map(|i| {
            if i + 1 == opts.grid_size {
                1.0
            } else {
                i as f64 * step
            }
        })
        .collect();
    let levels = grid
        .par_iter()
        .map(|&s| low_spectrum(&path.at(s)?, opts.levels, &opts.spectrum))
        .collect::<Result<Vec<_>>>()?;
    let (i_min, grid_min) = levels
        .iter()
        .map(|l| l[1] - l[0])
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid is non-empty");

    let gap_at = |s: f64| -> Result<f64> {
        let l = low_spectrum(&path.at(s)?, 2, &opts.spectrum)?;
        Ok(l[1] - l[0])
    };
    let lo = grid[i_min.saturating_sub(1)];
    let hi = grid[(i_min + 1).min(grid.len() - 1)];
    let (s_ref, g_ref) = golden_section(gap_at, lo, hi, opts.refine_tol)?;
    let (min_gap, s_star) = if g_ref < grid_min {
        (g_ref, s_ref)
    } else {
        (grid_min, grid[i_min])
    };
    if min_gap < 1e-10 {
        return Err(Error::Degenerate(min_gap));
    }
    Ok(GapScan {
        grid,
        levels,
        min_gap,
        s_star,
        biased,
        n_qubits: path.n(),
    })
}

fn is_degenerate(energies: &[f64]) -> bool {
    let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    energies.iter().filter(|&&e| e <= min + ENERGY_TOL).count() > 1
}

/// Minimizes `f` on [lo, hi]; returns the best point evaluated.
fn golden_section(
    f: impl Fn(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    let mut best = if fa <= fb { (a, fa) } else { (b, fb) };
    while hi - lo > tol {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a)?;
            if fa < best.1 {
                best = (a, fa);
            }
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b)?;
            if fb < best.1 {
                best = (b, fb);
            }
        }
    }
    Ok(best)
}
