//! Simulated-annealing sampling with gauge averaging, chain-break analysis
//! and ground-state statistics.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::ising::{IsingHamiltonian, SpinAssignment};
use crate::pegasus::ChainMap;

/// Samples per gauge when none is given.
pub const GAUGE_PERIOD: usize = 100;
/// Steps of the default temperature ladder.
pub const LADDER_STEPS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealParams {
    pub num_samples: usize,
    /// Metropolis sweeps per sample, spread evenly over the ladder.
    pub sweeps: usize,
    /// Descending temperatures; `None` picks [`default_ladder`].
    pub temperatures: Option<Vec<f64>>,
    pub gauge_period: usize,
}

impl Default for AnnealParams {
    fn default() -> Self {
        Self {
            num_samples: 1000,
            sweeps: 1000,
            temperatures: None,
            gauge_period: GAUGE_PERIOD,
        }
    }
}

impl AnnealParams {
    pub fn new(num_samples: usize, sweeps: usize) -> Self {
        Self {
            num_samples,
            sweeps,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.sweeps == 0 {
            return Err(invalid("sweeps must be at least 1"));
        }
        if self.gauge_period == 0 {
            return Err(invalid("gauge period must be at least 1"));
        }
        if let Some(t) = &self.temperatures {
            if t.is_empty() || t.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                return Err(invalid("temperatures must be positive and finite"));
            }
            if t.windows(2).any(|w| w[1] > w[0]) {
                return Err(invalid("temperatures must be descending"));
            }
        }
        Ok(())
    }

    /// Short hex digest of the parameter set.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("params serialize");
        hex::encode(&Sha256::digest(json)[..8])
    }
}

/// Geometric ladder from max|coefficient| down to 0.05 · min nonzero |coefficient|.
pub fn default_ladder(h: &IsingHamiltonian) -> Vec<f64> {
    let mags: Vec<f64> = h
        .terms()
        .filter(|(k, c)| !k.is_empty() && *c != 0.0)
        .map(|(_, c)| c.abs())
        .collect();
    let (hot, cold) = match mags.iter().copied().reduce(f64::max) {
        Some(max) => (
            max,
            0.05 * mags.iter().copied().fold(f64::INFINITY, f64::min),
        ),
        None => (1.0, 1.0),
    };
    let ratio = (cold / hot).powf(1.0 / (LADDER_STEPS - 1) as f64);
    (0..LADDER_STEPS)
        .map(|i| hot * ratio.powi(i as i32))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub samples: Vec<SpinAssignment>,
    pub energies: Vec<f64>,
    pub seed: u64,
    pub params: AnnealParams,
    /// Gauge applied to each block of `gauge_period` samples.
    pub gauges: Vec<SpinAssignment>,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample file: a `# seed=.. params=.. nodes=..` header, then one `+`/`-` row per sample.
    pub fn to_text(&self, nodes: &[usize]) -> String {
        let mut out = String::new();
        let ids: Vec<String> = nodes.iter().map(usize::to_string).collect();
        let _ = writeln!(
            out,
            "# seed={} params={} nodes={}",
            self.seed,
            self.params.hash(),
            ids.join(",")
        );
        for s in &self.samples {
            let _ = writeln!(out, "{s}");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleFile {
    pub seed: u64,
    pub params_hash: String,
    pub nodes: Vec<usize>,
    pub samples: Vec<SpinAssignment>,
}

impl std::str::FromStr for SampleFile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty sample file".into(),
        })?;
        let mut fields: HashMap<&str, &str> = HashMap::new();
        for part in header.trim_start_matches('#').split_whitespace() {
            if let Some((k, v)) = part.split_once('=') {
                fields.insert(k, v);
            }
        }
        let field = |k: &str| {
            fields.get(k).copied().ok_or_else(|| Error::Parse {
                line: 1,
                msg: format!("header lacks {k}"),
            })
        };
        let seed = field("seed")?.parse().map_err(|e| Error::Parse {
            line: 1,
            msg: format!("seed: {e}"),
        })?;
        let nodes = match field("nodes")? {
            "" => Vec::new(),
            list => list
                .split(',')
                .map(|t| {
                    t.parse().map_err(|e| Error::Parse {
                        line: 1,
                        msg: format!("node {t:?}: {e}"),
                    })
                })
                .collect::<Result<_>>()?,
        };
        let samples = lines
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                let x: SpinAssignment = l.trim().parse().map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: format!("{e}"),
                })?;
                if x.len() != nodes.len() {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: format!("{} spins, header lists {}", x.len(), nodes.len()),
                    });
                }
                Ok(x)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            seed,
            params_hash: field("params")?.to_string(),
            nodes,
            samples,
        })
    }
}

struct Couplings {
    fields: Vec<f64>,
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl Couplings {
    fn new(h: &IsingHamiltonian) -> Result<Self> {
        let n = h.n();
        let mut fields = vec![0.0; n];
        let mut neighbors = vec![Vec::new(); n];
        for (k, c) in h.terms() {
            match *k {
                [] => {}
                [i] => fields[i] += c,
                [i, j] => {
                    neighbors[i].push((j, c));
                    neighbors[j].push((i, c));
                }
                _ => {
                    return Err(invalid(format!(
                        "sampler needs a 2-body Hamiltonian, got a term over {k:?}"
                    )))
                }
            }
        }
        Ok(Self { fields, neighbors })
    }

    fn gauged(&self, g: &[i8]) -> Self {
        let sign = |i: usize| f64::from(g[i]);
        Self {
            fields: self
                .fields
                .iter()
                .enumerate()
                .map(|(i, &f)| f * sign(i))
                .collect(),
            neighbors: self
                .neighbors
                .iter()
                .enumerate()
                .map(|(i, nb)| {
                    nb.iter()
                        .map(|&(j, c)| (j, c * sign(i) * sign(j)))
                        .collect()
                })
                .collect(),
        }
    }

    fn anneal(&self, temperatures: &[f64], sweeps: usize, rng: &mut ChaCha8Rng) -> Vec<i8> {
        let n = self.fields.len();
        let mut s: Vec<i8> = (0..n)
            .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
            .collect();
        for sweep in 0..sweeps {
            let beta = 1.0 / temperatures[sweep * temperatures.len() / sweeps];
            for i in 0..n {
                let local = self.fields[i]
                    + self.neighbors[i]
                        .iter()
                        .map(|&(j, c)| c * f64::from(s[j]))
                        .sum::<f64>();
                let delta = -2.0 * f64::from(s[i]) * local;
                if delta <= 0.0 || rng.gen::<f64>() < (-beta * delta).exp() {
                    s[i] = -s[i];
                }
            }
        }
        s
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random gauge for block `b`, drawn from its own stream.
fn block_gauge(n: usize, seed: u64, b: usize) -> SpinAssignment {
    let mut rng = stream_rng(seed, 2 * b as u64 + 1);
    SpinAssignment::new(
        (0..n)
            .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
            .collect(),
    )
    .expect("±1")
}

/// Metropolis annealing, one independent restart per sample. Every
/// `gauge_period` samples a fresh random gauge is applied and the results are
/// mapped back before they are returned.
pub fn simulated_anneal(
    h: &IsingHamiltonian,
    params: &AnnealParams,
    seed: u64,
) -> Result<SampleSet> {
    simulated_anneal_pregauged(h, params, seed, &SpinAssignment::all_up(h.n()))
}

/// As [`simulated_anneal`] for a Hamiltonian already gauged by `pre`: block
/// gauges are composed with `pre`, so sampling `h.gauge_transform(pre)` this
/// way yields exactly the samples of `h`, each multiplied by `pre`.
pub fn simulated_anneal_pregauged(
    h: &IsingHamiltonian,
    params: &AnnealParams,
    seed: u64,
    pre: &SpinAssignment,
) -> Result<SampleSet> {
    params.validate()?;
    if pre.len() != h.n() {
        return Err(Error::Dimension {
            expected: h.n(),
            got: pre.len(),
        });
    }
    let ladder = params
        .temperatures
        .clone()
        .unwrap_or_else(|| default_ladder(h));
    let base = Couplings::new(h)?;
    let blocks = params.num_samples.div_ceil(params.gauge_period);
    let gauges: Vec<SpinAssignment> = (0..blocks)
        .map(|b| block_gauge(h.n(), seed, b).hadamard(pre))
        .collect::<Result<_>>()?;
    let gauged: Vec<Couplings> = gauges.iter().map(|g| base.gauged(g.values())).collect();
    let samples: Vec<SpinAssignment> = (0..params.num_samples)
        .into_par_iter()
        .map(|i| {
            let b = i / params.gauge_period;
            let mut rng = stream_rng(seed, 2 * i as u64);
            let raw = gauged[b].anneal(&ladder, params.sweeps, &mut rng);
            let g = gauges[b].values();
            SpinAssignment::new(raw.iter().zip(g).map(|(s, g)| s * g).collect()).expect("±1")
        })
        .collect();
    let energies = samples.iter().map(|x| h.energy(x)).collect::<Result<_>>()?;
    Ok(SampleSet {
        samples,
        energies,
        seed,
        params: params.clone(),
        gauges,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainState {
    Up,
    Down,
    Broken,
}

impl ChainState {
    pub fn value(self) -> Option<i8> {
        match self {
            Self::Up => Some(1),
            Self::Down => Some(-1),
            Self::Broken => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    /// `states[sample][chain]`, chains in id order.
    pub states: Vec<Vec<ChainState>>,
    pub break_rate: Vec<f64>,
}

impl ChainReport {
    pub fn unbroken(&self, sample: usize) -> bool {
        self.states[sample].iter().all(|s| *s != ChainState::Broken)
    }
}

pub fn chain_state(x: &SpinAssignment, chain: &[usize]) -> ChainState {
    let first = x.get(chain[0]);
    if chain.iter().any(|&i| x.get(i) != first) {
        ChainState::Broken
    } else if first == 1 {
        ChainState::Up
    } else {
        ChainState::Down
    }
}

fn check_width(x: &SpinAssignment, map: &ChainMap) -> Result<()> {
    if x.len() != map.width() {
        return Err(Error::Dimension {
            expected: map.width(),
            got: x.len(),
        });
    }
    Ok(())
}

pub fn chain_states(set: &SampleSet, map: &ChainMap) -> Result<ChainReport> {
    let mut states = Vec::with_capacity(set.len());
    let mut broken = vec![0usize; map.chains.len()];
    for x in &set.samples {
        check_width(x, map)?;
        let row: Vec<ChainState> = map.chains.values().map(|c| chain_state(x, c)).collect();
        for (k, s) in row.iter().enumerate() {
            broken[k] += usize::from(*s == ChainState::Broken);
        }
        states.push(row);
    }
    let total = set.len().max(1) as f64;
    Ok(ChainReport {
        states,
        break_rate: broken.iter().map(|&b| b as f64 / total).collect(),
    })
}

/// Seeded coin for chain `id`.
fn coin(seed: u64, id: usize) -> i8 {
    if stream_rng(seed, id as u64).gen::<bool>() {
        1
    } else {
        -1
    }
}

/// Collapses every chain to its majority value; exact ties use a coin seeded
/// by (`seed`, chain id).
pub fn majority_fix(x: &SpinAssignment, map: &ChainMap, seed: u64) -> Result<SpinAssignment> {
    check_width(x, map)?;
    let vals = map
        .chains
        .iter()
        .map(
            |(&id, c)| match c.iter().map(|&i| i32::from(x.get(i))).sum::<i32>() {
                0 => coin(seed, id),
                s => s.signum() as i8,
            },
        )
        .collect();
    SpinAssignment::new(vals)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GsFraction {
    /// Unbroken samples whose chain values are a ground state.
    pub raw: f64,
    /// Samples whose majority-fixed values are a ground state.
    pub logical: f64,
}

pub fn gs_fraction(
    set: &SampleSet,
    exact_gs: &[SpinAssignment],
    map: &ChainMap,
    seed: u64,
) -> Result<GsFraction> {
    if exact_gs.is_empty() {
        return Err(invalid("ground-state set is empty"));
    }
    let (mut raw, mut logical) = (0usize, 0usize);
    for x in &set.samples {
        if map.chain_values(x).is_some_and(|v| exact_gs.contains(&v)) {
            raw += 1;
        }
        if exact_gs.contains(&majority_fix(x, map, seed)?) {
            logical += 1;
        }
    }
    let total = set.len().max(1) as f64;
    Ok(GsFraction {
        raw: raw as f64 / total,
        logical: logical as f64 / total,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateCount {
    pub state: SpinAssignment,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionStats {
    /// One entry per exact ground state, in the given order.
    pub counts: Vec<StateCount>,
    pub gs_samples: usize,
    /// Count each state would have under a uniform distribution.
    pub uniform_reference: f64,
    pub chi_square: f64,
    /// Per qubit (mean, variance) of its fixed value over ground-state samples.
    pub magnetization: Vec<(f64, f64)>,
}

pub fn distribution_stats(
    set: &SampleSet,
    exact_gs: &[SpinAssignment],
    map: &ChainMap,
    seed: u64,
) -> Result<DistributionStats> {
    if exact_gs.is_empty() {
        return Err(invalid("ground-state set is empty"));
    }
    let index: HashMap<&SpinAssignment, usize> =
        exact_gs.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut counts = vec![0usize; exact_gs.len()];
    let width = map.chains.len();
    let (mut sum, mut sq) = (vec![0.0; width], vec![0.0; width]);
    for x in &set.samples {
        let fixed = majority_fix(x, map, seed)?;
        if let Some(&i) = index.get(&fixed) {
            counts[i] += 1;
            for (q, &v) in fixed.values().iter().enumerate() {
                sum[q] += f64::from(v);
                sq[q] += f64::from(v) * f64::from(v);
            }
        }
    }
    let gs_samples: usize = counts.iter().sum();
    let uniform_reference = gs_samples as f64 / exact_gs.len() as f64;
    let chi_square = if gs_samples == 0 {
        0.0
    } else {
        counts
            .iter()
            .map(|&c| (c as f64 - uniform_reference).powi(2) / uniform_reference)
            .sum()
    };
    let n = gs_samples.max(1) as f64;
    let magnetization = sum
        .iter()
        .zip(&sq)
        .map(|(&s, &q)| {
            let mean = s / n;
            (mean, q / n - mean * mean)
        })
        .collect();
    Ok(DistributionStats {
        counts: exact_gs
            .iter()
            .cloned()
            .zip(counts)
            .map(|(state, count)| StateCount { state, count })
            .collect(),
        gs_samples,
        uniform_reference,
        chi_square,
        magnetization,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    fn identity(n: usize) -> ChainMap {
        ChainMap {
            nodes: (0..n).collect(),
            chains: (0..n).map(|i| (i, vec![i])).collect(),
        }
    }

    fn s(text: &str) -> SpinAssignment {
        text.parse().unwrap()
    }

    #[test]
    fn single_field_is_always_up() {
        let h = IsingHamiltonian::from_terms(1, [(vec![0], -1.0)]).unwrap();
        let set = simulated_anneal(&h, &AnnealParams::new(50, 20), 3).unwrap();
        assert!(set.samples.iter().all(|x| x.get(0) == 1));
    }

    #[test]
    fn same_seed_same_samples() {
        let h = IsingHamiltonian::from_terms(
            4,
            [
                (vec![0, 1], 1.0),
                (vec![1, 2], -0.5),
                (vec![2, 3], 0.7),
                (vec![3], 0.2),
            ],
        )
        .unwrap();
        let p = AnnealParams {
            gauge_period: 7,
            ..AnnealParams::new(40, 30)
        };
        assert_eq!(
            simulated_anneal(&h, &p, 9).unwrap(),
            simulated_anneal(&h, &p, 9).unwrap()
        );
        assert_ne!(
            simulated_anneal(&h, &p, 9).unwrap().samples,
            simulated_anneal(&h, &p, 10).unwrap().samples
        );
        assert_eq!(simulated_anneal(&h, &p, 9).unwrap().gauges.len(), 6);
    }

    #[test]
    fn rejects_bad_params() {
        let h = IsingHamiltonian::new(2);
        assert!(simulated_anneal(&h, &AnnealParams::new(1, 0), 0).is_err());
        let p = AnnealParams {
            temperatures: Some(vec![1.0, 2.0]),
            ..AnnealParams::new(1, 5)
        };
        assert!(simulated_anneal(&h, &p, 0).is_err());
        let h3 = IsingHamiltonian::from_terms(3, [(vec![0, 1, 2], 1.0)]).unwrap();
        assert!(simulated_anneal(&h3, &AnnealParams::new(1, 5), 0).is_err());
    }

    #[test]
    fn ladder_spans_coefficients() {
        let h = IsingHamiltonian::from_terms(2, [(vec![0], 2.0), (vec![0, 1], -0.5)]).unwrap();
        let l = default_ladder(&h);
        assert_eq!(l.len(), LADDER_STEPS);
        assert!((l[0] - 2.0).abs() < 1e-12);
        assert!((l[LADDER_STEPS - 1] - 0.025).abs() < 1e-12);
    }

    #[test]
    fn chain_states_and_fix() {
        let map = ChainMap {
            nodes: (0..6).collect(),
            chains: BTreeMap::from([(0, vec![0, 1, 2, 3]), (1, vec![4, 5])]),
        };
        assert_eq!(chain_state(&s("++++"), &[0, 1, 2, 3]), ChainState::Up);
        assert_eq!(chain_state(&s("++-+"), &[0, 1, 2, 3]), ChainState::Broken);
        assert_eq!(majority_fix(&s("++-+--"), &map, 1).unwrap(), s("+-"));
        let tie = majority_fix(&s("++--+-"), &map, 5).unwrap();
        assert_eq!(tie, majority_fix(&s("++--+-"), &map, 5).unwrap());
        assert_eq!(tie.get(0), coin(5, 0));
        assert!(majority_fix(&s("++"), &map, 0).is_err());
    }

    #[test]
    fn all_aligned_means_no_breaks() {
        let map = ChainMap {
            nodes: (0..4).collect(),
            chains: BTreeMap::from([(0, vec![0, 1]), (1, vec![2, 3])]),
        };
        let set = SampleSet {
            samples: vec![s("++--"), s("----")],
            energies: vec![0.0; 2],
            seed: 0,
            params: AnnealParams::default(),
            gauges: vec![],
        };
        assert_eq!(chain_states(&set, &map).unwrap().break_rate, vec![0.0, 0.0]);
    }

    fn synthetic(samples: Vec<SpinAssignment>) -> SampleSet {
        let n = samples.len();
        SampleSet {
            samples,
            energies: vec![0.0; n],
            seed: 0,
            params: AnnealParams::default(),
            gauges: vec![],
        }
    }

    #[test]
    fn fractions_at_the_extremes() {
        let gs = vec![s("+-"), s("-+")];
        let map = identity(2);
        let all = synthetic(vec![s("+-"), s("-+"), s("+-")]);
        assert_eq!(
            gs_fraction(&all, &gs, &map, 0).unwrap(),
            GsFraction {
                raw: 1.0,
                logical: 1.0
            }
        );
        let none = synthetic(vec![s("++"), s("--")]);
        assert_eq!(
            gs_fraction(&none, &gs, &map, 0).unwrap(),
            GsFraction {
                raw: 0.0,
                logical: 0.0
            }
        );
        assert!(gs_fraction(&all, &[], &map, 0).is_err());
    }

    #[test]
    fn uniform_set_is_flat() {
        let gs: Vec<SpinAssignment> = (0..8).map(|b| SpinAssignment::from_bits(3, b)).collect();
        let samples = (0..10_000).map(|i| gs[i % 8].clone()).collect();
        let st = distribution_stats(&synthetic(samples), &gs, &identity(3), 0).unwrap();
        assert!(st.counts.iter().all(|c| c.count == 1250));
        assert_eq!(st.uniform_reference, 1250.0);
        assert_eq!(st.chi_square, 0.0);
        assert!(st.magnetization.iter().all(|&(m, v)| m == 0.0 && v == 1.0));
    }

    #[test]
    fn sample_file_round_trip() {
        let h = IsingHamiltonian::from_terms(3, [(vec![0, 1], 1.0)]).unwrap();
        let set = simulated_anneal(&h, &AnnealParams::new(5, 10), 4).unwrap();
        let text = set.to_text(&[10, 11, 12]);
        let file: SampleFile = text.parse().unwrap();
        assert_eq!(file.seed, 4);
        assert_eq!(file.nodes, vec![10, 11, 12]);
        assert_eq!(file.samples, set.samples);
        assert_eq!(file.params_hash, set.params.hash());
        assert!("# seed=1 params=x nodes=1,2\n+\n"
            .parse::<SampleFile>()
            .is_err());
    }
}
