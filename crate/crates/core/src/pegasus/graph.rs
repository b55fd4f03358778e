use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Standard shift of vertical qubits, indexed by k.
pub const VERTICAL_OFFSETS: [usize; 12] = [2, 2, 2, 2, 10, 10, 10, 10, 6, 6, 6, 6];
/// Standard shift of horizontal qubits, indexed by k.
pub const HORIZONTAL_OFFSETS: [usize; 12] = [6, 6, 6, 6, 2, 2, 2, 2, 10, 10, 10, 10];

/// Pegasus coordinate: orientation `u` (0 vertical, 1 horizontal), tile
/// column/row `w`, track `k` in 0..12 and position `z` along the line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PegasusCoord {
    pub u: usize,
    pub w: usize,
    pub k: usize,
    pub z: usize,
}

/// Cell coordinate of the K4,4 tiling: type `t` in 0..3, cell row `y` and
/// column `x` in 0..m−1, orientation `u`, index `k` in 0..4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NiceCoord {
    pub t: usize,
    pub y: usize,
    pub x: usize,
    pub u: usize,
    pub k: usize,
}

impl NiceCoord {
    pub fn to_pegasus(self) -> PegasusCoord {
        let NiceCoord { t, y, x, u, k } = self;
        let (w, kk) = match (t, u) {
            (0, 0) => (x, 4 + k),
            (0, _) => (y + 1, 4 + k),
            (1, 0) => (x, 8 + k),
            (1, _) => (y + 1, k),
            (_, 0) => (x + 1, k),
            (_, _) => (y, 8 + k),
        };
        let z = if u == 0 { y } else { x };
        PegasusCoord { u, w, k: kk, z }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PegasusGraph {
    m: usize,
    adjacency: BTreeMap<usize, BTreeSet<usize>>,
    defects: BTreeSet<usize>,
}

/// Standard Pegasus P_m restricted to the fabric, nodes numbered
/// ((u·m + w)·12 + k)·(m − 1) + z.
pub fn generate_pegasus(m: usize, defects: &[usize]) -> Result<PegasusGraph> {
    if m < 2 {
        return Err(invalid(format!("Pegasus size must be at least 2, got {m}")));
    }
    let mut g = PegasusGraph {
        m,
        adjacency: BTreeMap::new(),
        defects: BTreeSet::new(),
    };
    let coords: Vec<PegasusCoord> = (0..2)
        .flat_map(|u| {
            (0..m).flat_map(move |w| {
                (0..12).flat_map(move |k| (0..m - 1).map(move |z| PegasusCoord { u, w, k, z }))
            })
        })
        .filter(|c| g.in_fabric(*c))
        .collect();
    for &c in &coords {
        g.adjacency.insert(g.linear(c), BTreeSet::new());
    }
    for &c in &coords {
        let q = g.linear(c);
        if c.z + 1 < m - 1 {
            g.add_edge(q, g.linear(PegasusCoord { z: c.z + 1, ..c }));
        }
        if c.k % 2 == 0 {
            g.add_edge(q, g.linear(PegasusCoord { k: c.k + 1, ..c }));
        }
        if c.u == 0 {
            for (k1, &h_off) in HORIZONTAL_OFFSETS.iter().enumerate() {
                let w1 = c.z + usize::from(k1 < VERTICAL_OFFSETS[c.k]);
                let Some(z1) = c.w.checked_sub(usize::from(c.k < h_off)) else {
                    continue;
                };
                let other = PegasusCoord {
                    u: 1,
                    w: w1,
                    k: k1,
                    z: z1,
                };
                if w1 < m && z1 < m - 1 && g.in_fabric(other) {
                    g.add_edge(q, g.linear(other));
                }
            }
        }
    }
    for &d in defects {
        if !g.adjacency.contains_key(&d) {
            return Err(invalid(format!("defect {d} is not a node of P_{m}")));
        }
        g.defects.insert(d);
    }
    Ok(g)
}

impl PegasusGraph {
    fn in_fabric(&self, c: PegasusCoord) -> bool {
        !(c.w == 0 && c.k < 2) && !(c.w == self.m - 1 && c.k >= 10)
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        debug_assert!(self.adjacency.contains_key(&a) && self.adjacency.contains_key(&b));
        self.adjacency.entry(a).or_default().insert(b);
        self.adjacency.entry(b).or_default().insert(a);
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn linear(&self, c: PegasusCoord) -> usize {
        ((c.u * self.m + c.w) * 12 + c.k) * (self.m - 1) + c.z
    }

    pub fn coord(&self, q: usize) -> PegasusCoord {
        let m1 = self.m - 1;
        let z = q % m1;
        let rest = q / m1;
        let k = rest % 12;
        let rest = rest / 12;
        PegasusCoord {
            u: rest / self.m,
            w: rest % self.m,
            k,
            z,
        }
    }

    /// Linear id of a cell coordinate, if that node exists.
    pub fn nice(&self, c: NiceCoord) -> Option<usize> {
        if c.x + 1 >= self.m || c.y + 1 >= self.m {
            return None;
        }
        let q = self.linear(c.to_pegasus());
        self.contains(q).then_some(q)
    }

    pub fn contains(&self, q: usize) -> bool {
        self.adjacency.contains_key(&q)
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, q: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.get(&q).into_iter().flatten().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency.get(&a).is_some_and(|s| s.contains(&b))
    }

    /// Edges as `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .flat_map(|(&a, s)| s.range(a + 1..).map(move |&b| (a, b)))
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn defects(&self) -> &BTreeSet<usize> {
        &self.defects
    }

    pub fn is_defect(&self, q: usize) -> bool {
        self.defects.contains(&q)
    }

    pub fn usable_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes().filter(|q| !self.defects.contains(q))
    }

    pub fn with_defects(&self, defects: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut g = self.clone();
        for d in defects {
            if !g.contains(d) {
                return Err(invalid(format!("defect {d} is not a node of P_{}", self.m)));
            }
            g.defects.insert(d);
        }
        Ok(g)
    }
}

/// Parses defect lists: one node id per line, optionally prefixed by `defect`.
pub fn parse_defects(text: &str) -> Result<Vec<usize>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let id = l.strip_prefix("defect").unwrap_or(l).trim();
            id.parse().map_err(|e| Error::Parse {
                line: i + 1,
                msg: format!("bad node id {id:?}: {e}"),
            })
        })
        .collect()
}

impl fmt::Display for PegasusGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pegasus {}", self.m)?;
        for (a, b) in self.edges() {
            writeln!(f, "{a} {b}")?;
        }
        for d in &self.defects {
            writeln!(f, "defect {d}")?;
        }
        Ok(())
    }
}

impl FromStr for PegasusGraph {
    type Err = Error;

    /// Reads the edge-list format and checks it against the generated P_m.
    fn from_str(s: &str) -> Result<Self> {
        let mut m = None;
        let mut edges = BTreeSet::new();
        let mut defects = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: i + 1, msg };
            let parts: Vec<&str> = line.split_whitespace().collect();
            let num = |t: &str| t.parse::<usize>().map_err(|e| perr(format!("{t:?}: {e}")));
            match parts.as_slice() {
                ["pegasus", v] => m = Some(num(v)?),
                ["defect", v] => defects.push(num(v)?),
                [a, b] => {
                    let (a, b) = (num(a)?, num(b)?);
                    edges.insert((a.min(b), a.max(b)));
                }
                _ => return Err(perr(format!("unrecognized line {line:?}"))),
            }
        }
        let m = m.ok_or_else(|| Error::Parse {
            line: 0,
            msg: "missing `pegasus m` header".into(),
        })?;
        let g = generate_pegasus(m, &defects)?;
        let expected: BTreeSet<(usize, usize)> = g.edges().collect();
        if expected != edges {
            return Err(invalid(format!("edge list does not match P_{m}")));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_index_round_trips() {
        let g = generate_pegasus(4, &[]).unwrap();
        for q in g.nodes() {
            assert_eq!(g.linear(g.coord(q)), q);
        }
    }

    #[test]
    fn rejects_small_m_and_bad_defect() {
        assert!(generate_pegasus(1, &[]).is_err());
        assert!(generate_pegasus(2, &[0]).is_err());
    }

    #[test]
    fn every_cell_is_complete_bipartite() {
        let g = generate_pegasus(4, &[]).unwrap();
        for t in 0..3 {
            for y in 0..3 {
                for x in 0..3 {
                    for kv in 0..4 {
                        for kh in 0..4 {
                            let v = g
                                .nice(NiceCoord {
                                    t,
                                    y,
                                    x,
                                    u: 0,
                                    k: kv,
                                })
                                .unwrap();
                            let h = g
                                .nice(NiceCoord {
                                    t,
                                    y,
                                    x,
                                    u: 1,
                                    k: kh,
                                })
                                .unwrap();
                            assert!(g.has_edge(v, h));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn all_defective_leaves_nothing_usable() {
        let g = generate_pegasus(2, &[]).unwrap();
        let all: Vec<usize> = g.nodes().collect();
        let g = g.with_defects(all).unwrap();
        assert_eq!(g.usable_nodes().count(), 0);
    }

    #[test]
    fn text_round_trip() {
        let g = generate_pegasus(2, &[]).unwrap();
        let d = g.nodes().nth(3).unwrap();
        let g = g.with_defects([d]).unwrap();
        let back: PegasusGraph = g.to_string().parse().unwrap();
        assert_eq!(back, g);
        assert_eq!(parse_defects("defect 5\n7 # x\n\n").unwrap(), vec![5, 7]);
    }
}
