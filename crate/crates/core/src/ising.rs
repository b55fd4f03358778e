//! Arbitrary-order Ising Hamiltonians over ±1 spins.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Absolute tolerance used whenever two energies are compared.
pub const ENERGY_TOL: f64 = 1e-9;

/// Default spin-count limit for exhaustive enumeration.
pub const BRUTE_FORCE_CAP: usize = 24;

/// A configuration of ±1 spins.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinAssignment(Vec<i8>);

impl SpinAssignment {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if let Some(v) = values.iter().find(|&&v| v != 1 && v != -1) {
            return Err(invalid(format!("spin value {v} is not ±1")));
        }
        Ok(Self(values))
    }

    pub fn all_up(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Bit `i` set means spin `i` is −1, so index 0 is the all-up state.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        Self(
            (0..n)
                .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn to_bits(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == -1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// Converts {0,1} values with s = 2b − 1.
    pub fn from_binary(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .map(|&b| match b {
                0 => Ok(-1),
                1 => Ok(1),
                _ => Err(invalid(format!("binary value {b} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, v: i8) {
        assert!(v == 1 || v == -1, "spin value {v} is not ±1");
        self.0[i] = v;
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub fn product(&self, indices: &[usize]) -> i8 {
        indices.iter().map(|&i| self.0[i]).product()
    }

    /// Elementwise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(Self(
            self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect(),
        ))
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl TryFrom<Vec<i8>> for SpinAssignment {
    type Error = Error;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SpinAssignment> for Vec<i8> {
    fn from(s: SpinAssignment) -> Self {
        s.0
    }
}

impl fmt::Display for SpinAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.0 {
            f.write_str(if v == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for SpinAssignment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(invalid(format!("unexpected spin character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}

/// Sum of coefficient · product of spins over terms keyed by sorted index sets.
///
/// The empty index set holds the constant offset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsingHamiltonian {
    n: usize,
    terms: BTreeMap<Vec<usize>, f64>,
}

impl IsingHamiltonian {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I, T>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, f64)>,
        T: AsRef<[usize]>,
    {
        let mut h = Self::new(n);
        for (idx, c) in terms {
            h.add_term(idx.as_ref(), c)?;
        }
        Ok(h)
    }

    /// Adds `coeff` to the term over `indices`, creating it if needed.
    pub fn add_term(&mut self, indices: &[usize], coeff: f64) -> Result<()> {
        if !coeff.is_finite() {
            return Err(invalid(format!("non-finite coefficient {coeff}")));
        }
        let mut key = indices.to_vec();
        key.sort_unstable();
        if key.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid(format!("repeated spin index in {indices:?}")));
        }
        if let Some(&i) = key.last() {
            if i >= self.n {
                return Err(invalid(format!(
                    "spin index {i} out of range for n = {}",
                    self.n
                )));
            }
        }
        *self.terms.entry(key).or_insert(0.0) += coeff;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.terms.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, indices: &[usize]) -> f64 {
        let mut key = indices.to_vec();
        key.sort_unstable();
        self.terms.get(&key).copied().unwrap_or(0.0)
    }

    pub fn offset(&self) -> f64 {
        self.coefficient(&[])
    }

    /// Largest term order (0 for a constant-only Hamiltonian).
    pub fn order(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Drops terms whose coefficient is exactly zero.
    pub fn pruned(&self) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(_, &c)| c != 0.0)
                .map(|(k, &c)| (k.clone(), c))
                .collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, &c)| (k.clone(), c * factor))
                .collect(),
        }
    }

    /// Adds every term of `other`, which may have fewer spins.
    pub fn add(&mut self, other: &Self) -> Result<()> {
        if other.n > self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: other.n,
            });
        }
        for (k, c) in other.terms() {
            self.add_term(k, c)?;
        }
        Ok(())
    }

    pub fn energy(&self, x: &SpinAssignment) -> Result<f64> {
        check_len(self.n, x.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(k, &c)| c * f64::from(x.product(k)))
            .sum())
    }

    /// Term masks for bit-encoded evaluation; requires n ≤ 64.
    pub fn masks(&self) -> Result<TermMasks> {
        if self.n > 64 {
            return Err(Error::OverCap { n: self.n, cap: 64 });
        }
        Ok(TermMasks(
            self.terms
                .iter()
                .map(|(k, &c)| (k.iter().fold(0u64, |m, &i| m | 1 << i), c))
                .collect(),
        ))
    }

    /// All 2^n energies indexed by [`SpinAssignment::to_bits`].
    pub fn spectrum(&self, cap: usize) -> Result<Vec<f64>> {
        if self.n > cap {
            return Err(Error::OverCap { n: self.n, cap });
        }
        let masks = self.masks()?;
        Ok((0..1u64 << self.n)
            .into_par_iter()
            .map(|b| masks.energy(b))
            .collect())
    }

    pub fn add_last_spin_bias(&self, eps: f64) -> Result<Self> {
        if self.n == 0 {
            return Err(invalid("cannot bias a Hamiltonian without spins"));
        }
        if eps == 0.0 {
            return Err(invalid("bias must be non-zero"));
        }
        let mut h = self.clone();
        h.add_term(&[self.n - 1], eps)?;
        Ok(h)
    }

    /// Multiplies each coefficient by the product of `g` over its indices.
    ///
    /// `energy(h, x) == energy(h.gauge_transform(g), x ⊙ g)`.
    pub fn gauge_transform(&self, g: &SpinAssignment) -> Result<Self> {
        check_len(self.n, g.len())?;
        Ok(Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, &c)| (k.clone(), c * f64::from(g.product(k))))
                .collect(),
        })
    }
}

/// Bit-mask form of a Hamiltonian: a term contributes −c when an odd number
/// of its spins are down.
#[derive(Clone, Debug)]
pub struct TermMasks(Vec<(u64, f64)>);

impl TermMasks {
    pub fn energy(&self, bits: u64) -> f64 {
        self.0
            .iter()
            .map(|&(m, c)| {
                if (bits & m).count_ones() & 1 == 1 {
                    -c
                } else {
                    c
                }
            })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundStates {
    pub energy: f64,
    pub states: Vec<SpinAssignment>,
}

pub fn brute_force_ground_states(h: &IsingHamiltonian) -> Result<GroundStates> {
    brute_force_ground_states_with_cap(h, BRUTE_FORCE_CAP)
}

/// Exhaustive minimum over all 2^n states, ties within [`ENERGY_TOL`].
pub fn brute_force_ground_states_with_cap(
    h: &IsingHamiltonian,
    cap: usize,
) -> Result<GroundStates> {
    let n = h.n();
    if n > cap {
        return Err(Error::OverCap { n, cap });
    }
    let masks = h.masks()?;
    let total = 1u64 << n;
    let chunk = (total / 256).max(1 << 10);
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
    let partial: Vec<(f64, Vec<u64>)> = starts
        .par_iter()
        .map(|&lo| {
            let hi = (lo + chunk).min(total);
            let mut best = f64::INFINITY;
            let mut states = Vec::new();
            for b in lo..hi {
                let e = masks.energy(b);
                if e < best - ENERGY_TOL {
                    best = e;
                    states.clear();
                    states.push(b);
                } else if e <= best + ENERGY_TOL {
                    states.push(b);
                }
            }
            (best, states)
        })
        .collect();
    let energy = partial.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let states = partial
        .into_iter()
        .flat_map(|(_, s)| s)
        .filter(|&b| masks.energy(b) <= energy + ENERGY_TOL)
        .map(|b| SpinAssignment::from_bits(n, b))
        .collect();
    Ok(GroundStates { energy, states })
}

impl fmt::Display for IsingHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for (k, c) in &self.terms {
            for (pos, i) in k.iter().enumerate() {
                if pos > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{i}")?;
            }
            if !k.is_empty() {
                f.write_str(" ")?;
            }
            writeln!(f, ": {c:.16e}")?;
        }
        Ok(())
    }
}

impl FromStr for IsingHamiltonian {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut h: Option<Self> = None;
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse {
                line: lineno + 1,
                msg,
            };
            let Some(ham) = h.as_mut() else {
                let count = line
                    .strip_prefix('n')
                    .and_then(|r| r.trim().parse::<usize>().ok())
                    .ok_or_else(|| perr(format!("expected header `n <count>`, found {line:?}")))?;
                h = Some(Self::new(count));
                continue;
            };
            let (lhs, rhs) = line
                .split_once(':')
                .ok_or_else(|| perr("missing `:`".into()))?;
            let indices = lhs
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|e| perr(format!("bad index {t:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let coeff: f64 = rhs
                .trim()
                .parse()
                .map_err(|e| perr(format!("bad coefficient: {e}")))?;
            ham.add_term(&indices, coeff)
                .map_err(|e| perr(e.to_string()))?;
        }
        h.ok_or_else(|| Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })
    }
}
