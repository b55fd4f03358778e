use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::graph::{NiceCoord, PegasusGraph};

/// One of the eight qubits of a cell: `u` = 0 vertical (external), 1 horizontal (internal).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub u: usize,
    pub k: usize,
}

pub(crate) const fn v(k: usize) -> Slot {
    Slot { u: 0, k }
}

pub(crate) const fn h(k: usize) -> Slot {
    Slot { u: 1, k }
}

/// Node at cell (`row`, `pos`), if the cell lies inside P_m.
///
/// Rows run 0..=2(m−2); position `pos = 3x + t` walks the cells of a row.
pub fn cell_node(g: &PegasusGraph, row: i64, pos: i64, slot: Slot) -> Option<usize> {
    if row < 0 || pos < 0 {
        return None;
    }
    let (t, x) = ((pos % 3) as usize, (pos / 3) as usize);
    let y = usize::try_from(row - x as i64).ok()?;
    g.nice(NiceCoord {
        t,
        y,
        x,
        u: slot.u,
        k: slot.k,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diamond {
    pub row: usize,
    pub position: usize,
    pub external: [usize; 4],
    pub internal: [usize; 4],
    /// Some node of the diamond is a defect.
    pub defective: bool,
}

impl Diamond {
    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.external.iter().chain(&self.internal).copied()
    }
}

/// Diamonds of `g` grouped by row, rows numbered 0..=2(m−2).
pub fn extract_diamonds(g: &PegasusGraph) -> Vec<Vec<Diamond>> {
    let m = g.m() as i64;
    (0..=2 * (m - 2))
        .map(|row| {
            (0..3 * (m - 1))
                .filter_map(|pos| {
                    let ext: Option<Vec<usize>> =
                        (0..4).map(|k| cell_node(g, row, pos, v(k))).collect();
                    let int: Option<Vec<usize>> =
                        (0..4).map(|k| cell_node(g, row, pos, h(k))).collect();
                    let (ext, int) = (ext?, int?);
                    let mut d = Diamond {
                        row: row as usize,
                        position: pos as usize,
                        external: ext.try_into().ok()?,
                        internal: int.try_into().ok()?,
                        defective: false,
                    };
                    let defective = d.nodes().any(|q| g.is_defect(q));
                    d.defective = defective;
                    Some(d)
                })
                .collect()
        })
        .collect()
}

/// Violations of the diamond contract: every internal node adjacent to all
/// four externals, and externals of row-adjacent diamonds connected inside
/// the pair.
pub fn check_diamond_contract(g: &PegasusGraph, rows: &[Vec<Diamond>]) -> Vec<String> {
    let mut out = Vec::new();
    for row in rows {
        for d in row {
            for &i in &d.internal {
                for &e in &d.external {
                    if !g.has_edge(i, e) {
                        out.push(format!(
                            "diamond ({},{}): internal {i} not adjacent to external {e}",
                            d.row, d.position
                        ));
                    }
                }
            }
        }
        for pair in row.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if b.position != a.position + 1 {
                continue;
            }
            let nodes: BTreeSet<usize> = a.nodes().chain(b.nodes()).collect();
            let targets: Vec<usize> = a.external.iter().chain(&b.external).copied().collect();
            if !connected_within(g, &nodes, &targets) {
                out.push(format!(
                    "diamonds ({},{}) and ({},{}): externals not connectable",
                    a.row, a.position, b.row, b.position
                ));
            }
        }
    }
    out
}

/// Whether all `targets` fall in one component of the subgraph induced by `nodes`.
pub(crate) fn connected_within(
    g: &PegasusGraph,
    nodes: &BTreeSet<usize>,
    targets: &[usize],
) -> bool {
    let Some(&start) = targets.first() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        for n in g.neighbors(q) {
            if nodes.contains(&n) && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    targets.iter().all(|t| seen.contains(t))
}
