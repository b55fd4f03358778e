use std::collections::HashSet;

use super::{hamiltonian, ParityCompilation, ParityForm};
use crate::error::{invalid, Result};
use crate::ising::{SpinAssignment, BRUTE_FORCE_CAP};

/// Smallest penalty tried by [`tune_penalty`].
pub const PENALTY_FLOOR: f64 = 0.25;

/// Required gap between the best invalid state and the second-lowest valid state.
pub const PENALTY_MARGIN: f64 = 1e-6;

/// Energies split as E(x) = base(x) + Λ·pen(x) over every physical state.
struct Profile {
    base: Vec<f64>,
    pen: Vec<f64>,
    valid: Vec<usize>,
    invalid: Vec<usize>,
}

impl Profile {
    fn new(c: &ParityCompilation, form: ParityForm) -> Result<Self> {
        let e1 = hamiltonian(&c.with_penalty(1.0)?, form)?.spectrum(BRUTE_FORCE_CAP)?;
        let e2 = hamiltonian(&c.with_penalty(2.0)?, form)?.spectrum(BRUTE_FORCE_CAP)?;
        let pen: Vec<f64> = e1.iter().zip(&e2).map(|(a, b)| b - a).collect();
        let base: Vec<f64> = e1.iter().zip(&pen).map(|(a, p)| a - p).collect();
        let width = match form {
            ParityForm::Multibody => c.num_qubits(),
            ParityForm::TwoBody => c.num_two_body_spins(),
        };
        let n = c.logical_n();
        let valid_set: HashSet<usize> = (0..1u64 << n)
            .map(|b| {
                let x = c.encode(&SpinAssignment::from_bits(n, b))?;
                let x = SpinAssignment::new(x.values()[..width].to_vec())?;
                Ok(x.to_bits() as usize)
            })
            .collect::<Result<_>>()?;
        let mut valid: Vec<usize> = valid_set.into_iter().collect();
        valid.sort_unstable();
        let invalid = (0..base.len())
            .filter(|i| valid.binary_search(i).is_err())
            .collect();
        Ok(Self {
            base,
            pen,
            valid,
            invalid,
        })
    }

    fn energy(&self, x: usize, lambda: f64) -> f64 {
        self.base[x] + lambda * self.pen[x]
    }

    fn holds(&self, lambda: f64) -> bool {
        let mut v: Vec<f64> = self.valid.iter().map(|&x| self.energy(x, lambda)).collect();
        v.sort_by(f64::total_cmp);
        let second = v.get(1).or(v.first()).copied().unwrap_or(f64::NEG_INFINITY);
        self.invalid
            .iter()
            .all(|&x| self.energy(x, lambda) >= second + PENALTY_MARGIN)
    }
}

/// Whether penalty `lambda` puts every invalid state above the two lowest valid ones.
pub fn penalty_condition(c: &ParityCompilation, form: ParityForm, lambda: f64) -> Result<bool> {
    Ok(Profile::new(c, form)?.holds(lambda))
}

/// Smallest penalty, found by doubling from [`PENALTY_FLOOR`] then bisecting,
/// for which [`penalty_condition`] holds in the given compiled form.
pub fn tune_penalty(c: &ParityCompilation, form: ParityForm) -> Result<f64> {
    let prof = Profile::new(c, form)?;
    if prof.holds(PENALTY_FLOOR) {
        return Ok(PENALTY_FLOOR);
    }
    let mut hi = PENALTY_FLOOR;
    while !prof.holds(hi) {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(invalid("penalty scan diverged"));
        }
    }
    let mut lo = hi / 2.0;
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if prof.holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::super::compile_lhz;
    use super::*;
    use crate::ising::IsingHamiltonian;

    #[test]
    fn zero_logical_returns_floor() {
        let c = compile_lhz(&IsingHamiltonian::new(3)).unwrap();
        for form in [ParityForm::Multibody, ParityForm::TwoBody] {
            let c = if form == ParityForm::TwoBody {
                c.with_flip_mask(&super::super::solve_flip_mask(&c).unwrap())
                    .unwrap()
            } else {
                c.clone()
            };
            assert_eq!(tune_penalty(&c, form).unwrap(), PENALTY_FLOOR);
        }
    }

    #[test]
    fn strong_fields_need_larger_penalty() {
        let h = IsingHamiltonian::from_terms(
            3,
            [(vec![0, 1], 3.0), (vec![1, 2], -2.0), (vec![0], 1.0)],
        )
        .unwrap();
        let c = compile_lhz(&h).unwrap();
        let lambda = tune_penalty(&c, ParityForm::Multibody).unwrap();
        assert!(lambda > PENALTY_FLOOR);
        assert!(penalty_condition(&c, ParityForm::Multibody, lambda).unwrap());
        assert!(!penalty_condition(&c, ParityForm::Multibody, lambda * 0.999).unwrap());
        assert!(penalty_condition(&c, ParityForm::Multibody, 2.0 * lambda).unwrap());
    }
}
