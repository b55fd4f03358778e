//! Dense linear algebra over GF(2) with bit-packed rows.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRow(Vec<u64>);

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len.div_ceil(64)])
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut r = Self::zeros(len);
        for i in ones {
            r.toggle(i);
        }
        r
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn toggle(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn first_one(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }
}

/// Solves `rows · x = rhs` over GF(2). Free variables are set to 0.
///
/// Returns `None` when the system is inconsistent.
pub fn solve(cols: usize, rows: &[BitRow], rhs: &[bool]) -> Option<Vec<bool>> {
    assert_eq!(rows.len(), rhs.len());
    // Augmented column sits at index `cols`.
    let mut aug: Vec<BitRow> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut a = BitRow::zeros(cols + 1);
            for c in (0..cols).filter(|&c| r.get(c)) {
                a.toggle(c);
            }
            if b {
                a.toggle(cols);
            }
            a
        })
        .collect();
    let pivots = eliminate(&mut aug, cols);
    if aug.iter().skip(pivots.len()).any(|r| r.get(cols)) {
        return None;
    }
    let mut x = vec![false; cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r].get(cols);
    }
    Some(x)
}

/// Reduced row echelon form restricted to the first `cols` columns.
/// Returns pivot columns; pivot rows are moved to the front.
fn eliminate(m: &mut [BitRow], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i].get(c)) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[BitRow]) -> usize {
    independent_rows(rows).len()
}

/// Greedy maximal set of linearly independent rows, in input order.
pub fn independent_rows(rows: &[BitRow]) -> Vec<usize> {
    // Incremental basis keyed by leading bit.
    let mut basis: Vec<BitRow> = Vec::new();
    let mut chosen = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        while let Some(lead) = r.first_one() {
            match basis.iter().find(|b| b.first_one() == Some(lead)) {
                Some(b) => r.xor_assign(b),
                None => {
                    basis.push(r);
                    chosen.push(i);
                    break;
                }
            }
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(len: usize, ones: &[usize]) -> BitRow {
        BitRow::from_indices(len, ones.iter().copied())
    }

    #[test]
    fn solves_small_system() {
        let rows = [row(3, &[0, 1]), row(3, &[1, 2])];
        let x = solve(3, &rows, &[true, false]).unwrap();
        assert_ne!(x[0], x[1]);
        assert_eq!(x[1], x[2]);
    }

    #[test]
    fn detects_inconsistency() {
        let rows = [row(2, &[0, 1]), row(2, &[0, 1])];
        assert!(solve(2, &rows, &[true, false]).is_none());
        assert!(solve(2, &rows, &[true, true]).is_some());
    }

    #[test]
    fn rank_of_cycle() {
        // Edges of a triangle are dependent.
        let rows = [row(3, &[0, 1]), row(3, &[1, 2]), row(3, &[0, 2])];
        assert_eq!(rank(&rows), 2);
        assert_eq!(independent_rows(&rows), vec![0, 1]);
    }

    #[test]
    fn wide_rows() {
        let rows: Vec<BitRow> = (0..130).map(|i| row(130, &[i])).collect();
        let rhs: Vec<bool> = (0..130).map(|i| i % 3 == 0).collect();
        assert_eq!(solve(130, &rows, &rhs).unwrap(), rhs);
    }
}
