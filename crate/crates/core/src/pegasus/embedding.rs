use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::diamond::{cell_node, connected_within, h, v, Slot};
use super::graph::PegasusGraph;
use crate::error::{invalid, Error, Result};
use crate::ising::{IsingHamiltonian, SpinAssignment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingStyle {
    Original,
    Dense,
}

impl EmbeddingStyle {
    pub fn max_chain_len(self) -> usize {
        match self {
            Self::Original => 4,
            Self::Dense => 5,
        }
    }
}

impl fmt::Display for EmbeddingStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Original => "original",
            Self::Dense => "dense",
        })
    }
}

impl FromStr for EmbeddingStyle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original" => Ok(Self::Original),
            "dense" => Ok(Self::Dense),
            _ => Err(invalid(format!("unknown embedding style {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteKind {
    Parity,
    Aux,
}

/// A qubit position of the derived topology. Parity sites form a square
/// grid; the auxiliary site (a, b) serves the plaquette whose lowest corner
/// is parity site (a, b).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub kind: SiteKind,
    pub a: i64,
    pub b: i64,
}

/// (row offset, cell offset, slot) relative to an anchor cell.
type ChainTemplate = [(i64, i64, Slot)];

const ORIGINAL_PARITY: [(i64, i64, Slot); 4] =
    [(0, 0, v(0)), (0, 0, v(2)), (0, 0, h(1)), (0, 0, h(3))];
const ORIGINAL_AUX: [(i64, i64, Slot); 4] =
    [(0, 0, v(1)), (0, 0, v(3)), (0, 0, h(0)), (0, 0, h(2))];
const DENSE_PARITY: [[(i64, i64, Slot); 2]; 2] =
    [[(0, 0, h(3)), (1, 1, v(2))], [(0, 0, h(1)), (1, 2, v(0))]];
const DENSE_AUX: [[(i64, i64, Slot); 2]; 2] =
    [[(1, 2, h(0)), (1, 2, v(1))], [(1, 2, h(2)), (1, 2, v(3))]];

/// Anchor cell and template of a site.
fn template(style: EmbeddingStyle, site: Site) -> (i64, i64, &'static ChainTemplate) {
    match style {
        EmbeddingStyle::Original => {
            let t: &ChainTemplate = match site.kind {
                SiteKind::Parity => &ORIGINAL_PARITY,
                SiteKind::Aux => &ORIGINAL_AUX,
            };
            (site.a, site.a + site.b, t)
        }
        EmbeddingStyle::Dense => {
            let col = site.b + 3 * site.a;
            let c = col.rem_euclid(2) as usize;
            let t: &ChainTemplate = match site.kind {
                SiteKind::Parity => &DENSE_PARITY[c],
                SiteKind::Aux => &DENSE_AUX[c],
            };
            (site.a, col.div_euclid(2), t)
        }
    }
}

/// Physical nodes of `site`, or `None` if it falls off the graph.
pub fn site_chain(g: &PegasusGraph, style: EmbeddingStyle, site: Site) -> Option<Vec<usize>> {
    let (r, j, t) = template(style, site);
    t.iter()
        .map(|&(dr, dj, slot)| cell_node(g, r + dr, j + dj, slot))
        .collect()
}

/// Sites anchored at cell (row, pos).
fn anchored_sites(style: EmbeddingStyle, row: i64, pos: i64) -> Vec<Site> {
    let at = |a, b| [SiteKind::Parity, SiteKind::Aux].map(|kind| Site { kind, a, b });
    match style {
        EmbeddingStyle::Original => at(row, pos - row).to_vec(),
        EmbeddingStyle::Dense => (0..2)
            .flat_map(|c| at(row, 2 * pos + c - 3 * row))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaquetteSite {
    pub a: i64,
    pub b: i64,
    /// Sites (a, b), (a, b + 1), (a + 1, b), (a + 1, b + 1).
    pub members: [usize; 4],
    pub aux: usize,
}

impl PlaquetteSite {
    pub fn qubits(&self) -> [usize; 5] {
        let [p, q, r, s] = self.members;
        [p, q, r, s, self.aux]
    }
}

/// The logical hardware graph an embedding style induces on a Pegasus graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DerivedTopology {
    pub style: EmbeddingStyle,
    pub sites: Vec<Site>,
    pub plaquettes: Vec<PlaquetteSite>,
    /// Site pairs joined by at least one usable hardware edge.
    pub edges: BTreeSet<(usize, usize)>,
    /// Sites whose chain touches a defect.
    pub missing: BTreeSet<usize>,
}

impl DerivedTopology {
    pub fn num_qubits(&self) -> usize {
        self.sites.len() - self.missing.len()
    }

    pub fn site_index(&self, site: Site) -> Option<usize> {
        self.sites.binary_search(&site).ok()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Plaquette sites whose five qubits are all present.
    pub fn complete_plaquettes(&self) -> impl Iterator<Item = &PlaquetteSite> + '_ {
        self.plaquettes
            .iter()
            .filter(|p| p.qubits().iter().all(|q| !self.missing.contains(q)))
    }

    /// A topology with every qubit marked missing.
    pub fn all_missing(&self) -> Self {
        Self {
            missing: (0..self.sites.len()).collect(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub a: usize,
    pub b: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStrength {
    /// Prefactor p of c = p · RMS(coefficients) · sqrt(mean degree).
    pub prefactor: f64,
    /// Fixed c overriding the rule.
    pub fixed: Option<f64>,
}

impl Default for ChainStrength {
    fn default() -> Self {
        Self {
            prefactor: 1.414,
            fixed: None,
        }
    }
}

/// Chains of physical nodes per qubit and the hardware edges realizing each
/// required coupling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub style: EmbeddingStyle,
    pub chains: BTreeMap<usize, Vec<usize>>,
    pub couplings: Vec<Coupling>,
    pub chain_strength: ChainStrength,
}

impl Embedding {
    pub fn num_nodes(&self) -> usize {
        self.chains.values().map(Vec::len).sum()
    }

    pub fn nodes(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.chains.values().flatten().copied().collect();
        out.sort_unstable();
        out
    }

    pub fn max_chain_len(&self) -> usize {
        self.chains.values().map(Vec::len).max().unwrap_or(0)
    }

    /// Sub-embedding over `ids`, relabelled 0..ids.len() in the given order.
    pub fn select(&self, ids: &[usize]) -> Result<Self> {
        let mut relabel = HashMap::new();
        let mut chains = BTreeMap::new();
        for (new, &id) in ids.iter().enumerate() {
            let chain = self
                .chains
                .get(&id)
                .ok_or_else(|| Error::Embedding(format!("qubit {id} has no chain")))?;
            if relabel.insert(id, new).is_some() {
                return Err(invalid(format!("qubit {id} selected twice")));
            }
            chains.insert(new, chain.clone());
        }
        let couplings = self
            .couplings
            .iter()
            .filter_map(|c| {
                let (a, b) = (*relabel.get(&c.a)?, *relabel.get(&c.b)?);
                Some(Coupling {
                    a: a.min(b),
                    b: a.max(b),
                    edges: c.edges.clone(),
                })
            })
            .collect();
        Ok(Self {
            style: self.style,
            chains,
            couplings,
            chain_strength: self.chain_strength,
        })
    }

    /// Positions of each chain's nodes within the sorted node list.
    pub fn chain_map(&self) -> ChainMap {
        let nodes = self.nodes();
        let pos: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let chains = self
            .chains
            .iter()
            .map(|(&id, c)| (id, c.iter().map(|q| pos[q]).collect()))
            .collect();
        ChainMap { nodes, chains }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Chains expressed as indices into a compact, node-sorted spin vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainMap {
    pub nodes: Vec<usize>,
    pub chains: BTreeMap<usize, Vec<usize>>,
}

impl ChainMap {
    pub fn width(&self) -> usize {
        self.nodes.len()
    }

    /// Common value of every chain, or `None` if some chain is broken.
    pub fn chain_values(&self, x: &SpinAssignment) -> Option<SpinAssignment> {
        let vals: Option<Vec<i8>> = self
            .chains
            .values()
            .map(|c| {
                let s = x.get(c[0]);
                c.iter().all(|&i| x.get(i) == s).then_some(s)
            })
            .collect();
        SpinAssignment::new(vals?).ok()
    }

    /// Physical state with every chain set to its qubit's value.
    pub fn spread(&self, q: &SpinAssignment) -> Result<SpinAssignment> {
        if q.len() != self.chains.len() {
            return Err(Error::Dimension {
                expected: self.chains.len(),
                got: q.len(),
            });
        }
        let mut x = SpinAssignment::all_up(self.width());
        for (k, c) in self.chains.values().enumerate() {
            for &i in c {
                x.set(i, q.get(k));
            }
        }
        Ok(x)
    }
}

fn build(g: &PegasusGraph, style: EmbeddingStyle) -> Result<(Embedding, DerivedTopology)> {
    let m = g.m() as i64;
    let mut sites = BTreeMap::new();
    for row in -2..=2 * (m - 2) + 2 {
        for pos in -3..3 * (m - 1) + 3 {
            for site in anchored_sites(style, row, pos) {
                if let Some(chain) = site_chain(g, style, site) {
                    sites.insert(site, chain);
                }
            }
        }
    }
    let index: HashMap<Site, usize> = sites.keys().enumerate().map(|(i, s)| (*s, i)).collect();
    let at = |kind, a, b| index.get(&Site { kind, a, b }).copied();
    let plaquettes: Vec<PlaquetteSite> = sites
        .keys()
        .filter(|s| s.kind == SiteKind::Aux)
        .filter_map(|s| {
            let (a, b) = (s.a, s.b);
            let p = SiteKind::Parity;
            let members = [
                at(p, a, b)?,
                at(p, a, b + 1)?,
                at(p, a + 1, b)?,
                at(p, a + 1, b + 1)?,
            ];
            Some(PlaquetteSite {
                a,
                b,
                members,
                aux: index[s],
            })
        })
        .collect();
    if plaquettes.is_empty() {
        return Err(Error::Embedding(format!(
            "P_{} is too small for one {style} plaquette",
            g.m()
        )));
    }
    // Only auxiliaries serving a plaquette are qubits.
    let used_aux: BTreeSet<usize> = plaquettes.iter().map(|p| p.aux).collect();
    let kept: Vec<(Site, Vec<usize>)> = sites
        .into_iter()
        .enumerate()
        .filter(|(i, (s, _))| s.kind == SiteKind::Parity || used_aux.contains(i))
        .map(|(_, sc)| sc)
        .collect();
    let index: HashMap<Site, usize> = kept.iter().enumerate().map(|(i, (s, _))| (*s, i)).collect();
    let at = |kind, a, b| index.get(&Site { kind, a, b }).copied();
    let plaquettes: Vec<PlaquetteSite> = plaquettes
        .iter()
        .map(|p| {
            let (a, b, q) = (p.a, p.b, SiteKind::Parity);
            let get = |a, b| at(q, a, b).expect("member kept");
            PlaquetteSite {
                a,
                b,
                members: [get(a, b), get(a, b + 1), get(a + 1, b), get(a + 1, b + 1)],
                aux: at(SiteKind::Aux, a, b).expect("aux kept"),
            }
        })
        .collect();

    let missing: BTreeSet<usize> = kept
        .iter()
        .enumerate()
        .filter(|(_, (_, c))| c.iter().any(|&q| g.is_defect(q)))
        .map(|(i, _)| i)
        .collect();
    let owner: HashMap<usize, usize> = kept
        .iter()
        .enumerate()
        .filter(|(i, _)| !missing.contains(i))
        .flat_map(|(i, (_, c))| c.iter().map(move |&q| (q, i)))
        .collect();
    let mut pair_edges: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (p, q) in g.edges() {
        if let (Some(&a), Some(&b)) = (owner.get(&p), owner.get(&q)) {
            if a != b {
                pair_edges
                    .entry((a.min(b), a.max(b)))
                    .or_default()
                    .push((p, q));
            }
        }
    }
    let topology = DerivedTopology {
        style,
        sites: kept.iter().map(|(s, _)| *s).collect(),
        plaquettes,
        edges: pair_edges.keys().copied().collect(),
        missing,
    };

    let mut required = BTreeSet::new();
    for p in topology.complete_plaquettes() {
        let q = p.qubits();
        for i in 0..5 {
            for j in i + 1..5 {
                required.insert((q[i].min(q[j]), q[i].max(q[j])));
            }
        }
    }
    let couplings = required
        .into_iter()
        .map(|(a, b)| Coupling {
            a,
            b,
            edges: pair_edges.get(&(a, b)).cloned().unwrap_or_default(),
        })
        .collect();
    let chains = kept
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !topology.missing.contains(i))
        .map(|(i, (_, c))| (i, c))
        .collect();
    let embedding = Embedding {
        style,
        chains,
        couplings,
        chain_strength: ChainStrength::default(),
    };
    Ok((embedding, topology))
}

/// Four-spin loops for parity qubits and auxiliaries, one plaquette per diamond.
pub fn build_original(g: &PegasusGraph) -> Result<(Embedding, DerivedTopology)> {
    build(g, EmbeddingStyle::Original)
}

/// Two-spin chains straddling adjacent rows; fewer spins per plaquette and a larger grid.
pub fn build_dense(g: &PegasusGraph) -> Result<(Embedding, DerivedTopology)> {
    build(g, EmbeddingStyle::Dense)
}

pub fn build_embedding(
    g: &PegasusGraph,
    style: EmbeddingStyle,
) -> Result<(Embedding, DerivedTopology)> {
    build(g, style)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Overlap {
        node: usize,
        chains: (usize, usize),
    },
    Disconnected {
        chain: usize,
    },
    EmptyChain {
        chain: usize,
    },
    UnknownNode {
        chain: usize,
        node: usize,
    },
    UsesDefect {
        chain: usize,
        node: usize,
    },
    ChainTooLong {
        chain: usize,
        len: usize,
        max: usize,
    },
    NoCoupling {
        a: usize,
        b: usize,
    },
    BadCouplingEdge {
        a: usize,
        b: usize,
        edge: (usize, usize),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Overlap { node, chains } => write!(
                f,
                "overlap: node {node} in chains {} and {}",
                chains.0, chains.1
            ),
            Self::Disconnected { chain } => write!(f, "chain {chain} is disconnected"),
            Self::EmptyChain { chain } => write!(f, "chain {chain} is empty"),
            Self::UnknownNode { chain, node } => {
                write!(f, "chain {chain} uses node {node} outside the graph")
            }
            Self::UsesDefect { chain, node } => {
                write!(f, "chain uses defect: chain {chain}, node {node}")
            }
            Self::ChainTooLong { chain, len, max } => {
                write!(f, "chain {chain} has length {len} > {max}")
            }
            Self::NoCoupling { a, b } => write!(f, "coupling ({a},{b}) has no hardware edge"),
            Self::BadCouplingEdge { a, b, edge } => {
                write!(
                    f,
                    "coupling ({a},{b}): edge {edge:?} does not join the two chains"
                )
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks disjointness, connectivity, defects, chain length and couplings.
pub fn validate_embedding(e: &Embedding, g: &PegasusGraph) -> ValidationReport {
    let mut violations = Vec::new();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for (&id, chain) in &e.chains {
        for &q in chain {
            if let Some(prev) = owner.insert(q, id) {
                if prev != id {
                    violations.push(Violation::Overlap {
                        node: q,
                        chains: (prev, id),
                    });
                }
            }
        }
    }
    let per_chain: Vec<Vec<Violation>> = e
        .chains
        .par_iter()
        .map(|(&chain, nodes)| {
            let mut out = Vec::new();
            if nodes.is_empty() {
                out.push(Violation::EmptyChain { chain });
                return out;
            }
            for &node in nodes {
                if !g.contains(node) {
                    out.push(Violation::UnknownNode { chain, node });
                } else if g.is_defect(node) {
                    out.push(Violation::UsesDefect { chain, node });
                }
            }
            let max = e.style.max_chain_len();
            if nodes.len() > max {
                out.push(Violation::ChainTooLong {
                    chain,
                    len: nodes.len(),
                    max,
                });
            }
            let set: BTreeSet<usize> = nodes.iter().copied().collect();
            if !connected_within(g, &set, nodes) {
                out.push(Violation::Disconnected { chain });
            }
            out
        })
        .collect();
    violations.extend(per_chain.into_iter().flatten());
    for c in &e.couplings {
        let (Some(ca), Some(cb)) = (e.chains.get(&c.a), e.chains.get(&c.b)) else {
            violations.push(Violation::NoCoupling { a: c.a, b: c.b });
            continue;
        };
        if c.edges.is_empty() {
            violations.push(Violation::NoCoupling { a: c.a, b: c.b });
        }
        for &(p, q) in &c.edges {
            let joins =
                (ca.contains(&p) && cb.contains(&q)) || (ca.contains(&q) && cb.contains(&p));
            if !joins || !g.has_edge(p, q) {
                violations.push(Violation::BadCouplingEdge {
                    a: c.a,
                    b: c.b,
                    edge: (p, q),
                });
            }
        }
    }
    ValidationReport { violations }
}

/// Position and size of an LHZ triangle inside a derived topology.
///
/// Logical label (i) sits at triangle point (i, i) and (i, j) at (i, j);
/// `transform` picks one of the eight grid symmetries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LhzPlacement {
    pub n: usize,
    pub anchor: (i64, i64),
    pub transform: u8,
}

fn apply_transform(t: u8, (p, q): (i64, i64)) -> (i64, i64) {
    let (p, q) = if t & 4 != 0 { (q, p) } else { (p, q) };
    let p = if t & 1 != 0 { -p } else { p };
    let q = if t & 2 != 0 { -q } else { q };
    (p, q)
}

impl LhzPlacement {
    fn point(&self, rel: (i64, i64)) -> (i64, i64) {
        let (p, q) = apply_transform(self.transform, rel);
        (self.anchor.0 + p, self.anchor.1 + q)
    }

    /// Grid coordinate of the plaquette site whose lowest relative corner is `rel`.
    fn plaquette_at(&self, rel: (i64, i64)) -> (i64, i64) {
        [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(dp, dq)| self.point((rel.0 + dp, rel.1 + dq)))
            .min()
            .expect("four corners")
    }
}

struct Lookup<'a> {
    t: &'a DerivedTopology,
    parity: HashMap<(i64, i64), usize>,
    plaquette: HashMap<(i64, i64), usize>,
}

impl<'a> Lookup<'a> {
    fn new(t: &'a DerivedTopology) -> Self {
        let parity = t
            .sites
            .iter()
            .enumerate()
            .filter(|(i, s)| s.kind == SiteKind::Parity && !t.missing.contains(i))
            .map(|(i, s)| ((s.a, s.b), i))
            .collect();
        let plaquette = t
            .plaquettes
            .iter()
            .enumerate()
            .map(|(i, p)| ((p.a, p.b), i))
            .collect();
        Self {
            t,
            parity,
            plaquette,
        }
    }

    /// Whether every point, plaquette site and coupling of the triangle is present.
    fn fits(&self, pl: &LhzPlacement) -> bool {
        let n = pl.n as i64;
        for p in 0..n {
            for q in p..n {
                if !self.parity.contains_key(&pl.point((p, q))) {
                    return false;
                }
            }
        }
        for p in 0..n - 1 {
            for q in p..n - 1 {
                let Some(&k) = self.plaquette.get(&pl.plaquette_at((p, q))) else {
                    return false;
                };
                let site = &self.t.plaquettes[k];
                if self.t.missing.contains(&site.aux) {
                    return false;
                }
                let mut used: Vec<usize> = [(p, q), (p, q + 1), (p + 1, q), (p + 1, q + 1)]
                    .into_iter()
                    .filter(|&(a, b)| a <= b)
                    .map(|r| self.parity[&pl.point(r)])
                    .collect();
                used.push(site.aux);
                for i in 0..used.len() {
                    for j in i + 1..used.len() {
                        if !self.t.has_edge(used[i], used[j]) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Largest complete LHZ triangle, scanning every anchor and symmetry with a
/// binary search over the size.
pub fn find_largest_lhz(t: &DerivedTopology) -> LhzPlacement {
    let look = Lookup::new(t);
    let anchors: Vec<(i64, i64)> = look.parity.keys().copied().collect();
    let upper = anchors.len();
    anchors
        .par_iter()
        .flat_map_iter(|&anchor| (0..8u8).map(move |transform| (anchor, transform)))
        .map(|(anchor, transform)| {
            let ok = |n: usize| {
                look.fits(&LhzPlacement {
                    n,
                    anchor,
                    transform,
                })
            };
            let (mut lo, mut hi) = (1, upper + 1);
            // Invariant: fits(lo), !fits(hi).
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if ok(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            LhzPlacement {
                n: lo,
                anchor,
                transform,
            }
        })
        .max_by(|x, y| {
            x.n.cmp(&y.n)
                .then_with(|| (y.anchor, y.transform).cmp(&(x.anchor, x.transform)))
        })
        .unwrap_or_default()
}

/// Topology site of every 2-body spin of an LHZ compilation placed at `pl`:
/// K parity qubits followed by one auxiliary per plaquette.
pub fn place_lhz(
    t: &DerivedTopology,
    pl: &LhzPlacement,
    c: &crate::parity::ParityCompilation,
) -> Result<Vec<usize>> {
    if c.logical_n() != pl.n {
        return Err(Error::Embedding(format!(
            "placement holds N = {}, compilation has N = {}",
            pl.n,
            c.logical_n()
        )));
    }
    let look = Lookup::new(t);
    if !look.fits(pl) {
        return Err(Error::Embedding(format!(
            "triangle of size {} does not fit at {:?}",
            pl.n, pl.anchor
        )));
    }
    let rel_point = |i: usize| -> (i64, i64) {
        let idx = c.parity_qubits()[i].label.indices();
        match *idx {
            [a] => (a as i64, a as i64),
            [a, b] => (a as i64, b as i64),
            _ => (i64::MAX, i64::MAX),
        }
    };
    let mut out = Vec::with_capacity(c.num_two_body_spins());
    for i in 0..c.num_qubits() {
        let r = rel_point(i);
        if r.0 == i64::MAX {
            return Err(Error::Embedding(format!(
                "qubit {} is not an LHZ label",
                c.parity_qubits()[i].label
            )));
        }
        out.push(look.parity[&pl.point(r)]);
    }
    for p in 0..c.plaquettes().len() {
        let pts: Vec<(i64, i64)> = c.members(p).iter().map(|&i| rel_point(i)).collect();
        let corner = (
            pts.iter().map(|x| x.0).min().unwrap_or(0),
            pts.iter().map(|x| x.1).min().unwrap_or(0),
        );
        let k = look.plaquette[&pl.plaquette_at(corner)];
        out.push(t.plaquettes[k].aux);
    }
    Ok(out)
}

/// A physical Ising problem over the embedding's nodes in sorted order.
#[derive(Clone, Debug)]
pub struct EmbeddedProblem {
    pub hamiltonian: IsingHamiltonian,
    pub chain_map: ChainMap,
    pub chain_strength: f64,
    /// Ferromagnetic spanning-tree edges as compact index pairs.
    pub chain_edges: Vec<(usize, usize)>,
}

impl EmbeddedProblem {
    /// Energy contributed by the chain couplings.
    pub fn chain_energy(&self, x: &SpinAssignment) -> f64 {
        self.chain_edges
            .iter()
            .map(|&(a, b)| -self.chain_strength * f64::from(x.get(a) * x.get(b)))
            .sum()
    }
}

/// c = p · RMS(nonzero fields and couplings) · sqrt(mean degree), degree
/// floored at 1; p when every coefficient is zero.
pub fn chain_strength(h2: &IsingHamiltonian, prefactor: f64) -> f64 {
    let coeffs: Vec<f64> = h2
        .terms()
        .filter(|(k, c)| !k.is_empty() && *c != 0.0)
        .map(|(_, c)| c)
        .collect();
    if coeffs.is_empty() || h2.n() == 0 {
        return prefactor;
    }
    let rms = (coeffs.iter().map(|c| c * c).sum::<f64>() / coeffs.len() as f64).sqrt();
    let pairs = h2
        .terms()
        .filter(|(k, c)| k.len() == 2 && *c != 0.0)
        .count();
    let mean_degree = (2.0 * pairs as f64 / h2.n() as f64).max(1.0);
    prefactor * rms * mean_degree.sqrt()
}

/// Spreads `h2` over chain `i` for qubit `i`: fields split evenly over chain
/// nodes, couplings evenly over inter-chain edges, spanning-tree chain edges
/// at −c.
pub fn embed_problem(
    h2: &IsingHamiltonian,
    e: &Embedding,
    g: &PegasusGraph,
) -> Result<EmbeddedProblem> {
    if h2.order() > 2 {
        return Err(invalid(format!(
            "embedding needs a 2-body Hamiltonian, got order {}",
            h2.order()
        )));
    }
    let ids: Vec<usize> = (0..h2.n()).collect();
    for &i in &ids {
        if !e.chains.contains_key(&i) {
            return Err(Error::Embedding(format!("qubit {i} has no chain")));
        }
    }
    let sub = e.select(&ids)?;
    let map = sub.chain_map();
    let pos: HashMap<usize, usize> = map.nodes.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let c = sub
        .chain_strength
        .fixed
        .unwrap_or_else(|| chain_strength(h2, sub.chain_strength.prefactor));
    let mut out = IsingHamiltonian::new(map.width());
    for (k, coeff) in h2.terms() {
        match *k {
            [] => out.add_term(&[], coeff)?,
            [i] => {
                let chain = &map.chains[&i];
                for &q in chain {
                    out.add_term(&[q], coeff / chain.len() as f64)?;
                }
            }
            [i, j] => {
                let (ci, cj) = (&sub.chains[&i], &sub.chains[&j]);
                let edges: Vec<(usize, usize)> = ci
                    .iter()
                    .flat_map(|&p| {
                        cj.iter()
                            .filter(move |&&q| g.has_edge(p, q))
                            .map(move |&q| (p, q))
                    })
                    .collect();
                if edges.is_empty() {
                    return Err(Error::Embedding(format!(
                        "no hardware edge for coupling ({i},{j})"
                    )));
                }
                for (p, q) in &edges {
                    out.add_term(&[pos[p], pos[q]], coeff / edges.len() as f64)?;
                }
            }
            _ => unreachable!("order checked"),
        }
    }
    let mut chain_edges = Vec::new();
    for (id, chain) in &sub.chains {
        let tree = spanning_tree(g, chain)
            .ok_or_else(|| Error::Embedding(format!("chain {id} is disconnected")))?;
        for (p, q) in tree {
            let (a, b) = (pos[&p], pos[&q]);
            out.add_term(&[a, b], -c)?;
            chain_edges.push((a.min(b), a.max(b)));
        }
    }
    Ok(EmbeddedProblem {
        hamiltonian: out,
        chain_map: map,
        chain_strength: c,
        chain_edges,
    })
}

fn spanning_tree(g: &PegasusGraph, chain: &[usize]) -> Option<Vec<(usize, usize)>> {
    let set: BTreeSet<usize> = chain.iter().copied().collect();
    let mut seen = BTreeSet::from([chain[0]]);
    let mut queue = VecDeque::from([chain[0]]);
    let mut tree = Vec::new();
    while let Some(p) = queue.pop_front() {
        for q in g.neighbors(p) {
            if set.contains(&q) && seen.insert(q) {
                tree.push((p, q));
                queue.push_back(q);
            }
        }
    }
    (seen.len() == set.len()).then_some(tree)
}
