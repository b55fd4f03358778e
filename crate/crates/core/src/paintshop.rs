//! Two-colour multi-car paint shop instances.
//!
//! Spin +1 paints a car black. Group `j` must contain exactly `k[j]` black cars.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::ising::{IsingHamiltonian, SpinAssignment, BRUTE_FORCE_CAP, ENERGY_TOL};

/// Which black counts are considered trivial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Nontriviality {
    /// Require 0 < k < |G|.
    #[default]
    Strict,
    /// Only exclude k = |G|; k = 0 is allowed.
    FullOnly,
}

impl Nontriviality {
    fn k_range(self, size: usize) -> std::ops::Range<usize> {
        match self {
            Self::Strict => 1..size,
            Self::FullOnly => 0..size,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaintShopInstance {
    cars: usize,
    groups: Vec<Vec<usize>>,
    k: Vec<usize>,
    lambda: f64,
    /// Disambiguates grouping patterns that share a label.
    #[serde(default)]
    variant: Option<usize>,
}

impl PaintShopInstance {
    pub fn new(cars: usize, groups: Vec<Vec<usize>>, k: Vec<usize>, lambda: f64) -> Result<Self> {
        Self::with_rule(cars, groups, k, lambda, Nontriviality::Strict)
    }

    pub fn with_rule(
        cars: usize,
        mut groups: Vec<Vec<usize>>,
        k: Vec<usize>,
        lambda: f64,
        rule: Nontriviality,
    ) -> Result<Self> {
        if cars < 2 {
            return Err(invalid(format!("need at least 2 cars, got {cars}")));
        }
        if groups.len() != k.len() {
            return Err(Error::Dimension {
                expected: groups.len(),
                got: k.len(),
            });
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid(format!("lambda must be positive, got {lambda}")));
        }
        let mut seen = vec![false; cars];
        for g in &mut groups {
            g.sort_unstable();
            for &i in g.iter() {
                if i >= cars || std::mem::replace(&mut seen[i], true) {
                    return Err(invalid(format!(
                        "groups do not partition 0..{cars}: position {i}"
                    )));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(invalid(format!("position {i} belongs to no group")));
        }
        for (g, &kj) in groups.iter().zip(&k) {
            if !rule.k_range(g.len()).contains(&kj) {
                return Err(invalid(format!("trivial group {g:?} with k = {kj}")));
            }
        }
        Ok(Self {
            cars,
            groups,
            k,
            lambda,
            variant: None,
        })
    }

    pub fn cars(&self) -> usize {
        self.cars
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn k(&self) -> &[usize] {
        &self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid(format!("lambda must be positive, got {lambda}")));
        }
        Ok(Self {
            lambda,
            ..self.clone()
        })
    }

    /// `(C,#groups,k)` with a `#v` suffix for grouping variants; unequal
    /// black counts are listed as `[k1,k2,..]`.
    pub fn label(&self) -> String {
        let k = if self.k.windows(2).all(|w| w[0] == w[1]) {
            self.k[0].to_string()
        } else {
            format!(
                "[{}]",
                self.k
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            )
        };
        let base = format!("({},{},{k})", self.cars, self.groups.len());
        match self.variant {
            Some(v) => format!("{base}#{v}"),
            None => base,
        }
    }

    pub fn hamiltonian(&self) -> Result<IsingHamiltonian> {
        make_instance(self)
    }

    /// Exact energy gap between the best infeasible and the best feasible
    /// colouring; non-positive means the penalty does not enforce feasibility.
    pub fn feasibility_margin(&self) -> Result<f64> {
        if self.cars > BRUTE_FORCE_CAP {
            return Err(Error::OverCap {
                n: self.cars,
                cap: BRUTE_FORCE_CAP,
            });
        }
        let energies = self.hamiltonian()?.spectrum(BRUTE_FORCE_CAP)?;
        let (mut feas, mut infeas) = (f64::INFINITY, f64::INFINITY);
        for (b, e) in energies.into_iter().enumerate() {
            let z = SpinAssignment::from_bits(self.cars, b as u64);
            if check_feasibility(self, &z)? {
                feas = feas.min(e);
            } else {
                infeas = infeas.min(e);
            }
        }
        Ok(infeas - feas)
    }

    /// Warning text when some infeasible colouring ties or beats every feasible one.
    pub fn penalty_warning(&self) -> Option<String> {
        match self.feasibility_margin() {
            Ok(m) if m <= ENERGY_TOL => Some(format!(
                "instance {}: lambda = {} does not separate feasible from infeasible colourings (margin {m:.3})",
                self.label(),
                self.lambda
            )),
            _ => None,
        }
    }
}

/// −(1/(C−1))·Σ s_i s_{i+1} + λ·Σ_j [(|G_j| − 2k_j)·Σ_{G_j} s + Σ_{pairs in G_j} s s'].
pub fn make_instance(inst: &PaintShopInstance) -> Result<IsingHamiltonian> {
    let c = inst.cars;
    let mut h = IsingHamiltonian::new(c);
    let bond = -1.0 / (c - 1) as f64;
    for i in 0..c - 1 {
        h.add_term(&[i, i + 1], bond)?;
    }
    for (g, &kj) in inst.groups.iter().zip(&inst.k) {
        let field = inst.lambda * (g.len() as f64 - 2.0 * kj as f64);
        for (a, &i) in g.iter().enumerate() {
            if field != 0.0 {
                h.add_term(&[i], field)?;
            }
            for &j in &g[a + 1..] {
                h.add_term(&[i, j], inst.lambda)?;
            }
        }
    }
    Ok(h)
}

pub fn count_switches(z: &SpinAssignment) -> usize {
    z.values().windows(2).filter(|w| w[0] != w[1]).count()
}

pub fn check_feasibility(inst: &PaintShopInstance, z: &SpinAssignment) -> Result<bool> {
    if z.len() != inst.cars {
        return Err(Error::Dimension {
            expected: inst.cars,
            got: z.len(),
        });
    }
    Ok(inst
        .groups
        .iter()
        .zip(&inst.k)
        .all(|(g, &kj)| g.iter().filter(|&&i| z.get(i) == 1).count() == kj))
}

/// All non-trivial instances with `c_min..=c_max` cars, one per set partition
/// (canonical restricted-growth order) and black-count vector, λ = 1.
pub fn enumerate_instances(c_min: usize, c_max: usize) -> Result<Vec<PaintShopInstance>> {
    enumerate_instances_with(c_min, c_max, 1.0, Nontriviality::Strict)
}

pub fn enumerate_instances_with(
    c_min: usize,
    c_max: usize,
    lambda: f64,
    rule: Nontriviality,
) -> Result<Vec<PaintShopInstance>> {
    if c_min < 2 || c_min > c_max || c_max > BRUTE_FORCE_CAP {
        return Err(invalid(format!(
            "car range {c_min}..={c_max} outside 2..={BRUTE_FORCE_CAP}"
        )));
    }
    let mut out = Vec::new();
    for cars in c_min..=c_max {
        let mut batch = Vec::new();
        for groups in set_partitions(cars) {
            if groups.iter().any(|g| rule.k_range(g.len()).is_empty()) {
                continue;
            }
            for k in k_vectors(&groups, rule) {
                batch.push(PaintShopInstance::with_rule(
                    cars,
                    groups.clone(),
                    k,
                    lambda,
                    rule,
                )?);
            }
        }
        let labels: Vec<String> = batch.iter().map(PaintShopInstance::label).collect();
        let mut next: std::collections::HashMap<&str, usize> = std::collections::HashMap::new();
        for (inst, label) in batch.iter_mut().zip(&labels) {
            if labels.iter().filter(|l| *l == label).count() > 1 {
                let v = next.entry(label.as_str()).or_insert(0);
                *v += 1;
                inst.variant = Some(*v);
            }
        }
        out.extend(batch);
    }
    Ok(out)
}

/// Set partitions of 0..n as restricted growth strings; blocks ordered by first element.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            let blocks = rgs.iter().max().map_or(0, |m| m + 1);
            let mut groups = vec![Vec::new(); blocks];
            for (pos, &b) in rgs.iter().enumerate() {
                groups[b].push(pos);
            }
            out.push(groups);
            return;
        }
        let limit = rgs.iter().max().map_or(0, |m| m + 1);
        for b in 0..=limit {
            rgs.push(b);
            rec(i + 1, n, rgs, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::with_capacity(n), &mut out);
    out
}

fn k_vectors(groups: &[Vec<usize>], rule: Nontriviality) -> Vec<Vec<usize>> {
    groups.iter().fold(vec![Vec::new()], |acc, g| {
        acc.iter()
            .flat_map(|prefix| {
                rule.k_range(g.len()).map(move |kj| {
                    let mut v = prefix.clone();
                    v.push(kj);
                    v
                })
            })
            .collect()
    })
}

impl fmt::Display for PaintShopInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups = serde_json::to_string(&self.groups).map_err(|_| fmt::Error)?;
        let k = serde_json::to_string(&self.k).map_err(|_| fmt::Error)?;
        write!(
            f,
            "C={}; groups={groups}; k={k}; lambda={}",
            self.cars, self.lambda
        )
    }
}

impl FromStr for PaintShopInstance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut cars, mut groups, mut k, mut lambda) = (None, None, None, 1.0);
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| invalid(format!("expected key=value, found {part:?}")))?;
            let value = value.trim();
            match key.trim() {
                "C" => cars = Some(value.parse().map_err(|e| invalid(format!("C: {e}")))?),
                "groups" => groups = Some(serde_json::from_str(value)?),
                "k" => k = Some(serde_json::from_str(value)?),
                "lambda" => lambda = value.parse().map_err(|e| invalid(format!("lambda: {e}")))?,
                other => return Err(invalid(format!("unknown instance key {other:?}"))),
            }
        }
        Self::new(
            cars.ok_or_else(|| invalid("missing C"))?,
            groups.ok_or_else(|| invalid("missing groups"))?,
            k.ok_or_else(|| invalid("missing k"))?,
            lambda,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::brute_force_ground_states;

    fn s(t: &str) -> SpinAssignment {
        t.parse().unwrap()
    }

    fn inst311() -> PaintShopInstance {
        PaintShopInstance::new(3, vec![vec![0, 1, 2]], vec![1], 1.0).unwrap()
    }

    #[test]
    fn instance_311_ground_states() {
        let gs = brute_force_ground_states(&inst311().hamiltonian().unwrap()).unwrap();
        assert_eq!(gs.states, vec![s("--+"), s("+--")]);
        assert!(gs.states.iter().all(|z| count_switches(z) == 1));
    }

    #[test]
    fn instance_211_ties() {
        let inst = PaintShopInstance::new(2, vec![vec![0, 1]], vec![1], 1.0).unwrap();
        let h = inst.hamiltonian().unwrap();
        for b in 0..4 {
            assert_eq!(h.energy(&SpinAssignment::from_bits(2, b)).unwrap(), 0.0);
        }
        assert_eq!(inst.feasibility_margin().unwrap(), 0.0);
        assert!(inst.penalty_warning().is_some());
        assert!(inst311().penalty_warning().is_none());
    }

    #[test]
    fn bracket_identity() {
        for size in 1..=5usize {
            for kj in 0..=size {
                let t = 2.0 * kj as f64 - size as f64;
                for b in 0..1u64 << size {
                    let z = SpinAssignment::from_bits(size, b);
                    let sum: f64 = z.values().iter().map(|&v| f64::from(v)).sum();
                    let mut pairs = 0.0;
                    for i in 0..size {
                        for j in i + 1..size {
                            pairs += f64::from(z.get(i) * z.get(j));
                        }
                    }
                    let bracket = (size as f64 - 2.0 * kj as f64) * sum + pairs;
                    let square = (sum - t).powi(2) / 2.0 - (size as f64 + t * t) / 2.0;
                    assert!((bracket - square).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn enumeration_small() {
        let two = enumerate_instances(2, 2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].label(), "(2,1,1)");
        let labels: Vec<String> = enumerate_instances(2, 4)
            .unwrap()
            .iter()
            .map(|i| i.label())
            .collect();
        assert_eq!(
            labels,
            [
                "(2,1,1)",
                "(3,1,1)",
                "(3,1,2)",
                "(4,1,1)",
                "(4,1,2)",
                "(4,1,3)",
                "(4,2,1)#1",
                "(4,2,1)#2",
                "(4,2,1)#3"
            ]
        );
        let patterns: Vec<Vec<Vec<usize>>> = enumerate_instances(4, 4)
            .unwrap()
            .into_iter()
            .filter(|i| i.groups().len() == 2)
            .map(|i| i.groups().to_vec())
            .collect();
        assert_eq!(
            patterns,
            vec![
                vec![vec![0, 1], vec![2, 3]],
                vec![vec![0, 2], vec![1, 3]],
                vec![vec![0, 3], vec![1, 2]]
            ]
        );
    }

    #[test]
    fn singleton_groups_excluded() {
        assert!(PaintShopInstance::new(3, vec![vec![0, 1], vec![2]], vec![1, 0], 1.0).is_err());
        assert!(enumerate_instances(2, 5)
            .unwrap()
            .iter()
            .all(|i| i.groups().iter().all(|g| g.len() >= 2)));
        let loose = enumerate_instances_with(2, 2, 1.0, Nontriviality::FullOnly).unwrap();
        assert_eq!(loose.len(), 2 + 1);
    }

    #[test]
    fn switches_and_feasibility() {
        assert_eq!(count_switches(&s("+++")), 0);
        assert_eq!(count_switches(&s("+-+")), 2);
        assert!(check_feasibility(&inst311(), &s("+--")).unwrap());
        assert!(!check_feasibility(&inst311(), &s("++-")).unwrap());
    }

    #[test]
    fn feasible_count_is_binomial_product() {
        fn binom(n: usize, k: usize) -> usize {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for inst in enumerate_instances(2, 5).unwrap() {
            let c = inst.cars();
            let count = (0..1u64 << c)
                .filter(|&b| check_feasibility(&inst, &SpinAssignment::from_bits(c, b)).unwrap())
                .count();
            let expect: usize = inst
                .groups()
                .iter()
                .zip(inst.k())
                .map(|(g, &k)| binom(g.len(), k))
                .product();
            assert_eq!(count, expect, "{}", inst.label());
        }
    }

    #[test]
    fn energy_and_switch_argmin_agree_on_feasible_set() {
        for inst in enumerate_instances(2, 5).unwrap() {
            let c = inst.cars();
            let h = inst.hamiltonian().unwrap();
            let feasible: Vec<SpinAssignment> = (0..1u64 << c)
                .map(|b| SpinAssignment::from_bits(c, b))
                .filter(|z| check_feasibility(&inst, z).unwrap())
                .collect();
            let emin = feasible
                .iter()
                .map(|z| h.energy(z).unwrap())
                .fold(f64::INFINITY, f64::min);
            let smin = feasible.iter().map(count_switches).min().unwrap();
            for z in &feasible {
                let by_energy = h.energy(z).unwrap() <= emin + ENERGY_TOL;
                assert_eq!(by_energy, count_switches(z) == smin, "{} {z}", inst.label());
            }
        }
    }

    #[test]
    fn penalty_above_threshold_enforces_feasibility() {
        for inst in enumerate_instances(2, 5).unwrap() {
            let c = inst.cars();
            let inst = inst.with_lambda(2.0 / (c - 1) as f64 + 1e-3).unwrap();
            assert!(inst.feasibility_margin().unwrap() > 0.0, "{}", inst.label());
            let gs = brute_force_ground_states(&inst.hamiltonian().unwrap()).unwrap();
            let smin = (0..1u64 << c)
                .map(|b| SpinAssignment::from_bits(c, b))
                .filter(|z| check_feasibility(&inst, z).unwrap())
                .map(|z| count_switches(&z))
                .min()
                .unwrap();
            for z in &gs.states {
                assert!(check_feasibility(&inst, z).unwrap());
                assert_eq!(count_switches(z), smin);
            }
        }
    }

    #[test]
    fn objective_differs_from_scaled_switches_by_constant() {
        for inst in enumerate_instances(2, 4).unwrap() {
            let c = inst.cars();
            let h = inst.hamiltonian().unwrap();
            let offsets: Vec<f64> = (0..1u64 << c)
                .map(|b| SpinAssignment::from_bits(c, b))
                .filter(|z| check_feasibility(&inst, z).unwrap())
                .map(|z| h.energy(&z).unwrap() - 2.0 * count_switches(&z) as f64 / (c - 1) as f64)
                .collect();
            assert!(
                offsets.iter().all(|o| (o - offsets[0]).abs() < 1e-9),
                "{}",
                inst.label()
            );
        }
    }

    #[test]
    fn instance_text_round_trip() {
        let inst =
            PaintShopInstance::new(4, vec![vec![0, 3], vec![1, 2]], vec![1, 1], 1.5).unwrap();
        let text = inst.to_string();
        assert_eq!(text, "C=4; groups=[[0,3],[1,2]]; k=[1,1]; lambda=1.5");
        assert_eq!(text.parse::<PaintShopInstance>().unwrap(), inst);
    }
}
