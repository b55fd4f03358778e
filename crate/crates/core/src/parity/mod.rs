//! Parity (LHZ) compilation of logical Ising problems.
//!
//! Physical spins live in the flipped frame: a qubit with `flipped = true`
//! stores the negated product of its logical spins.

mod codec;
mod penalty;
mod quadratize;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gf2::{self, BitRow};
use crate::ising::{IsingHamiltonian, BRUTE_FORCE_CAP};

pub use codec::Decoded;
pub use penalty::{penalty_condition, tune_penalty, PENALTY_FLOOR, PENALTY_MARGIN};
pub use quadratize::{plaquette_hamiltonian, quadratize};

/// Which compiled form a Hamiltonian takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityForm {
    /// One 3- or 4-body term per plaquette over the K parity qubits.
    Multibody,
    /// Quadratized plaquettes with one auxiliary spin each.
    #[serde(rename = "2body")]
    TwoBody,
}

impl std::str::FromStr for ParityForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multibody" => Ok(Self::Multibody),
            "2body" => Ok(Self::TwoBody),
            _ => Err(invalid(format!(
                "unknown form {s:?}, expected multibody or 2body"
            ))),
        }
    }
}

/// Sorted, non-empty set of logical indices carried by a parity qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Label(Vec<usize>);

impl Label {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(invalid("empty parity label"));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(format!(
                "label {indices:?} is not strictly increasing"
            )));
        }
        Ok(Self(indices))
    }

    pub fn single(i: usize) -> Self {
        Self(vec![i])
    }

    pub fn pair(i: usize, j: usize) -> Self {
        assert!(i < j, "pair label needs i < j");
        Self(vec![i, j])
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl TryFrom<Vec<usize>> for Label {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Label> for Vec<usize> {
    fn from(l: Label) -> Self {
        l.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityQubit {
    pub label: Label,
    #[serde(rename = "field")]
    pub field_coefficient: f64,
    pub flipped: bool,
    pub grid_pos: Option<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaquetteKind {
    Triangle,
    Square,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plaquette {
    pub kind: PlaquetteKind,
    pub members: Vec<Label>,
    /// Index of the auxiliary spin in the quadratized Hamiltonian.
    pub aux: usize,
    pub form: Form,
}

impl Plaquette {
    pub fn new(members: Vec<Label>) -> Result<Self> {
        let kind = match members.len() {
            3 => PlaquetteKind::Triangle,
            4 => PlaquetteKind::Square,
            k => return Err(invalid(format!("plaquette with {k} members"))),
        };
        Ok(Self {
            kind,
            members,
            aux: 0,
            form: Form::Even,
        })
    }
}

/// True iff every logical index occurs an even number of times across members.
pub fn plaquette_parity_check(p: &Plaquette) -> bool {
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for i in p.members.iter().flat_map(|l| l.indices()) {
        *count.entry(*i).or_default() += 1;
    }
    count.values().all(|c| c % 2 == 0)
}

#[derive(Clone, Debug, Deserialize)]
struct RawCompilation {
    logical_n: usize,
    parity_qubits: Vec<ParityQubit>,
    plaquettes: Vec<Plaquette>,
    penalty: f64,
    #[serde(default)]
    offset: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCompilation")]
pub struct ParityCompilation {
    logical_n: usize,
    parity_qubits: Vec<ParityQubit>,
    plaquettes: Vec<Plaquette>,
    penalty: f64,
    /// Constant carried over from the logical Hamiltonian.
    offset: f64,
    #[serde(skip)]
    index: BTreeMap<Label, usize>,
    #[serde(skip)]
    members: Vec<Vec<usize>>,
}

impl TryFrom<RawCompilation> for ParityCompilation {
    type Error = Error;
    fn try_from(r: RawCompilation) -> Result<Self> {
        let mut c = Self::new(r.logical_n, r.parity_qubits, r.plaquettes, r.penalty)?;
        c.offset = r.offset;
        Ok(c)
    }
}

impl ParityCompilation {
    /// Validates and canonicalizes: qubits sorted by label, plaquettes sorted
    /// by member indices, aux ids assigned after the parity qubits, forms
    /// recomputed from the flip flags.
    pub fn new(
        logical_n: usize,
        mut parity_qubits: Vec<ParityQubit>,
        plaquettes: Vec<Plaquette>,
        penalty: f64,
    ) -> Result<Self> {
        if !(penalty > 0.0 && penalty.is_finite()) {
            return Err(invalid(format!("penalty must be positive, got {penalty}")));
        }
        parity_qubits.sort_by(|a, b| a.label.cmp(&b.label));
        if let Some(w) = parity_qubits.windows(2).find(|w| w[0].label == w[1].label) {
            return Err(invalid(format!("duplicate parity label {}", w[0].label)));
        }
        if let Some(q) = parity_qubits
            .iter()
            .find(|q| q.label.indices().iter().any(|&i| i >= logical_n))
        {
            return Err(invalid(format!(
                "label {} exceeds logical_n = {logical_n}",
                q.label
            )));
        }
        let index: BTreeMap<Label, usize> = parity_qubits
            .iter()
            .enumerate()
            .map(|(i, q)| (q.label.clone(), i))
            .collect();

        let mut keyed = Vec::with_capacity(plaquettes.len());
        for mut p in plaquettes {
            let kind = Plaquette::new(p.members.clone())?.kind;
            if kind != p.kind {
                return Err(invalid(format!(
                    "plaquette kind {:?} does not match its members",
                    p.kind
                )));
            }
            if !plaquette_parity_check(&p) {
                return Err(invalid(format!(
                    "plaquette {} violates the parity condition",
                    fmt_members(&p)
                )));
            }
            let mut idx = Vec::with_capacity(p.members.len());
            for l in &p.members {
                idx.push(
                    *index
                        .get(l)
                        .ok_or_else(|| invalid(format!("unknown plaquette member {l}")))?,
                );
            }
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid(format!(
                    "repeated member in plaquette {}",
                    fmt_members(&p)
                )));
            }
            p.form = form_of(&idx, &parity_qubits);
            keyed.push((sorted, idx, p));
        }
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = keyed.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(invalid(format!(
                "duplicate plaquette {}",
                fmt_members(&w[0].2)
            )));
        }

        let k = parity_qubits.len();
        let mut covered = vec![false; k];
        for (_, idx, _) in &keyed {
            for &i in idx {
                covered[i] = true;
            }
        }
        if let Some(i) = covered.iter().position(|c| !c) {
            return Err(invalid(format!(
                "parity qubit {} is in no plaquette",
                parity_qubits[i].label
            )));
        }
        if keyed.len() + logical_n < k {
            return Err(invalid(format!(
                "{} plaquettes is fewer than K - N = {}",
                keyed.len(),
                k - logical_n
            )));
        }

        let mut members = Vec::with_capacity(keyed.len());
        let mut plaquettes = Vec::with_capacity(keyed.len());
        for (a, (_, idx, mut p)) in keyed.into_iter().enumerate() {
            p.aux = k + a;
            members.push(idx);
            plaquettes.push(p);
        }
        Ok(Self {
            logical_n,
            parity_qubits,
            plaquettes,
            penalty,
            offset: 0.0,
            index,
            members,
        })
    }

    pub fn logical_n(&self) -> usize {
        self.logical_n
    }

    /// K, the number of parity qubits.
    pub fn num_qubits(&self) -> usize {
        self.parity_qubits.len()
    }

    /// K plus one auxiliary spin per plaquette.
    pub fn num_two_body_spins(&self) -> usize {
        self.parity_qubits.len() + self.plaquettes.len()
    }

    pub fn parity_qubits(&self) -> &[ParityQubit] {
        &self.parity_qubits
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    /// Member qubit indices of plaquette `p`, in the plaquette's member order.
    pub fn members(&self, p: usize) -> &[usize] {
        &self.members[p]
    }

    pub fn penalty(&self) -> f64 {
        self.penalty
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn qubit_index(&self, label: &Label) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn flip_mask(&self) -> Vec<bool> {
        self.parity_qubits.iter().map(|q| q.flipped).collect()
    }

    pub fn with_penalty(&self, penalty: f64) -> Result<Self> {
        if !(penalty > 0.0 && penalty.is_finite()) {
            return Err(invalid(format!("penalty must be positive, got {penalty}")));
        }
        Ok(Self {
            penalty,
            ..self.clone()
        })
    }

    /// Replaces the flip flags and recomputes every plaquette form.
    pub fn with_flip_mask(&self, mask: &[bool]) -> Result<Self> {
        if mask.len() != self.num_qubits() {
            return Err(Error::Dimension {
                expected: self.num_qubits(),
                got: mask.len(),
            });
        }
        let mut c = self.clone();
        for (q, &f) in c.parity_qubits.iter_mut().zip(mask) {
            q.flipped = f;
        }
        for (p, idx) in c.plaquettes.iter_mut().zip(&c.members) {
            p.form = form_of(idx, &c.parity_qubits);
        }
        Ok(c)
    }

    /// Number of parity-qubit assignments satisfying every plaquette.
    pub fn count_valid_assignments(&self) -> Result<u64> {
        let k = self.num_qubits();
        if k > BRUTE_FORCE_CAP {
            return Err(Error::OverCap {
                n: k,
                cap: BRUTE_FORCE_CAP,
            });
        }
        let masks: Vec<(u64, u32)> = self
            .members
            .iter()
            .zip(&self.plaquettes)
            .map(|(idx, p)| {
                (
                    idx.iter().fold(0u64, |m, &i| m | 1 << i),
                    u32::from(p.form == Form::Odd),
                )
            })
            .collect();
        Ok((0..1u64 << k)
            .filter(|&b| {
                masks
                    .iter()
                    .all(|&(m, odd)| (b & m).count_ones() & 1 == odd)
            })
            .count() as u64)
    }
}

fn form_of(members: &[usize], qubits: &[ParityQubit]) -> Form {
    if members.iter().filter(|&&i| qubits[i].flipped).count() % 2 == 1 {
        Form::Odd
    } else {
        Form::Even
    }
}

fn fmt_members(p: &Plaquette) -> String {
    p.members
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// All-to-all LHZ triangle for a logical Hamiltonian with fields and pair couplings.
pub fn compile_lhz(h: &IsingHamiltonian) -> Result<ParityCompilation> {
    let n = h.n();
    if let Some((k, _)) = h.terms().find(|(k, _)| k.len() > 2) {
        return Err(invalid(format!(
            "term over {k:?} has order {}; the LHZ triangle accepts only fields and pair couplings \
             (supply an explicit plaquette set via ParityCompilation::new for higher orders)",
            k.len()
        )));
    }
    if n < 2 {
        return Err(invalid("the LHZ triangle needs at least 2 logical spins"));
    }
    let mut qubits = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        qubits.push(ParityQubit {
            label: Label::single(i),
            field_coefficient: h.coefficient(&[i]),
            flipped: false,
            grid_pos: Some((0, 2 * i)),
        });
        for j in i + 1..n {
            qubits.push(ParityQubit {
                label: Label::pair(i, j),
                field_coefficient: h.coefficient(&[i, j]),
                flipped: false,
                grid_pos: Some((j - i, i + j)),
            });
        }
    }
    let mut plaquettes = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n - 1 {
        plaquettes.push(Plaquette::new(vec![
            Label::single(i),
            Label::single(i + 1),
            Label::pair(i, i + 1),
        ])?);
    }
    for i in 0..n.saturating_sub(2) {
        plaquettes.push(Plaquette::new(vec![
            Label::pair(i, i + 1),
            Label::pair(i + 1, i + 2),
            Label::pair(i, i + 2),
        ])?);
    }
    for j in 2..n.saturating_sub(1) {
        for i in 0..j - 1 {
            plaquettes.push(Plaquette::new(vec![
                Label::pair(i, j),
                Label::pair(i, j + 1),
                Label::pair(i + 1, j),
                Label::pair(i + 1, j + 1),
            ])?);
        }
    }
    let mut c = ParityCompilation::new(n, qubits, plaquettes, 1.0)?;
    c.offset = h.offset();
    Ok(c)
}

/// Flip mask giving every square plaquette an odd number of flipped members,
/// from the GF(2) system over square-plaquette membership.
pub fn solve_flip_mask(c: &ParityCompilation) -> Result<Vec<bool>> {
    let k = c.num_qubits();
    let rows: Vec<BitRow> = c
        .plaquettes
        .iter()
        .zip(&c.members)
        .filter(|(p, _)| p.kind == PlaquetteKind::Square)
        .map(|(_, idx)| BitRow::from_indices(k, idx.iter().copied()))
        .collect();
    let rhs = vec![true; rows.len()];
    gf2::solve(k, &rows, &rhs)
        .ok_or_else(|| invalid("no flip mask makes every square plaquette odd"))
}

/// Local fields plus one multi-body term per plaquette: −Λ for even form, +Λ for odd.
pub fn to_multibody(c: &ParityCompilation) -> Result<IsingHamiltonian> {
    let mut h = IsingHamiltonian::new(c.num_qubits());
    add_local_fields(c, &mut h)?;
    for (p, idx) in c.plaquettes.iter().zip(&c.members) {
        let sign = match p.form {
            Form::Even => -1.0,
            Form::Odd => 1.0,
        };
        h.add_term(idx, sign * c.penalty)?;
    }
    Ok(h)
}

fn add_local_fields(c: &ParityCompilation, h: &mut IsingHamiltonian) -> Result<()> {
    if c.offset != 0.0 {
        h.add_term(&[], c.offset)?;
    }
    for (i, q) in c.parity_qubits.iter().enumerate() {
        if q.field_coefficient != 0.0 {
            let sign = if q.flipped { -1.0 } else { 1.0 };
            h.add_term(&[i], sign * q.field_coefficient)?;
        }
    }
    Ok(())
}

/// Compiles `h` in the requested form with penalty `penalty`.
///
/// The 2-body form applies the solved flip mask first; the returned
/// compilation carries the flips used.
pub fn compile(
    h: &IsingHamiltonian,
    form: ParityForm,
    penalty: f64,
) -> Result<(ParityCompilation, IsingHamiltonian)> {
    let c = compile_lhz(h)?.with_penalty(penalty)?;
    match form {
        ParityForm::Multibody => {
            let hm = to_multibody(&c)?;
            Ok((c, hm))
        }
        ParityForm::TwoBody => {
            let mask = solve_flip_mask(&c)?;
            let c = c.with_flip_mask(&mask)?;
            let h2 = quadratize(&c, &mask)?;
            Ok((c, h2))
        }
    }
}

/// Compiled Hamiltonian of `c` in its current frame.
pub fn hamiltonian(c: &ParityCompilation, form: ParityForm) -> Result<IsingHamiltonian> {
    match form {
        ParityForm::Multibody => to_multibody(c),
        ParityForm::TwoBody => quadratize(c, &c.flip_mask()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::{brute_force_ground_states, SpinAssignment};

    fn labels(v: &[&[usize]]) -> Vec<Label> {
        v.iter().map(|l| Label::new(l.to_vec()).unwrap()).collect()
    }

    #[test]
    fn parity_check_examples() {
        let p = Plaquette::new(labels(&[&[0], &[1, 2], &[0, 3], &[1, 2, 3]])).unwrap();
        assert!(plaquette_parity_check(&p));
        let p = Plaquette::new(labels(&[&[0, 1], &[1, 2], &[2, 3], &[0, 3]])).unwrap();
        assert!(plaquette_parity_check(&p));
        let p = Plaquette::new(labels(&[&[0, 1], &[1, 2], &[2, 3]])).unwrap();
        assert!(!plaquette_parity_check(&p));
    }

    #[test]
    fn lhz_two_spins() {
        let h =
            IsingHamiltonian::from_terms(2, [(vec![0], 0.5), (vec![1], -0.5), (vec![0, 1], 1.0)])
                .unwrap();
        let c = compile_lhz(&h).unwrap();
        assert_eq!(c.num_qubits(), 3);
        assert_eq!(c.plaquettes().len(), 1);
        assert_eq!(c.plaquettes()[0].kind, PlaquetteKind::Triangle);
        assert_eq!(c.plaquettes()[0].members, labels(&[&[0], &[1], &[0, 1]]));
        let fields: Vec<f64> = c
            .parity_qubits()
            .iter()
            .map(|q| q.field_coefficient)
            .collect();
        assert_eq!(fields, vec![0.5, 1.0, -0.5]);
    }

    #[test]
    fn lhz_counts() {
        for (n, k, p) in [(4, 10, 6), (5, 15, 10)] {
            let c = compile_lhz(&IsingHamiltonian::new(n)).unwrap();
            assert_eq!(c.num_qubits(), k);
            assert_eq!(c.plaquettes().len(), p);
        }
    }

    #[test]
    fn lhz_rejects_higher_order() {
        let h = IsingHamiltonian::from_terms(3, [(vec![0, 1, 2], 1.0)]).unwrap();
        assert!(compile_lhz(&h).unwrap_err().to_string().contains("order 3"));
    }

    #[test]
    fn unused_fields_are_zero() {
        let h = IsingHamiltonian::from_terms(3, [(vec![0, 2], 2.0)]).unwrap();
        let c = compile_lhz(&h).unwrap();
        for q in c.parity_qubits() {
            let expect = if q.label.indices() == [0, 2] {
                2.0
            } else {
                0.0
            };
            assert_eq!(q.field_coefficient, expect);
        }
    }

    #[test]
    fn flip_mask_single_square_and_triangle() {
        let sq = ParityCompilation::new(
            3,
            labels(&[&[0], &[1], &[0, 2], &[1, 2]])
                .into_iter()
                .map(|label| ParityQubit {
                    label,
                    field_coefficient: 0.0,
                    flipped: false,
                    grid_pos: None,
                })
                .collect(),
            vec![Plaquette::new(labels(&[&[0], &[1], &[0, 2], &[1, 2]])).unwrap()],
            1.0,
        )
        .unwrap();
        let mask = solve_flip_mask(&sq).unwrap();
        assert_eq!(mask.iter().filter(|&&f| f).count() % 2, 1);

        let tri = compile_lhz(&IsingHamiltonian::new(2)).unwrap();
        assert_eq!(solve_flip_mask(&tri).unwrap(), vec![false; 3]);
        assert_eq!(tri.plaquettes()[0].form, Form::Even);
    }

    #[test]
    fn flip_mask_lhz4_every_square_odd() {
        let c = compile_lhz(&IsingHamiltonian::new(4)).unwrap();
        let mask = solve_flip_mask(&c).unwrap();
        let c = c.with_flip_mask(&mask).unwrap();
        for (a, p) in c.plaquettes().iter().enumerate() {
            let flips = c.members(a).iter().filter(|&&i| mask[i]).count();
            if p.kind == PlaquetteKind::Square {
                assert_eq!(flips % 2, 1);
                assert_eq!(p.form, Form::Odd);
            }
        }
    }

    #[test]
    fn multibody_triangle_terms() {
        let c = compile_lhz(&IsingHamiltonian::new(2)).unwrap();
        let h = to_multibody(&c).unwrap();
        assert_eq!(h.coefficient(&[0, 1, 2]), -1.0);

        // Flip qubit (0,1) (index 1 in label order).
        let hl = IsingHamiltonian::from_terms(2, [(vec![0, 1], 0.7), (vec![0], 0.2)]).unwrap();
        let c = compile_lhz(&hl).unwrap();
        let even = to_multibody(&c).unwrap();
        let odd = to_multibody(&c.with_flip_mask(&[false, true, false]).unwrap()).unwrap();
        assert_eq!(odd.coefficient(&[0, 1, 2]), 1.0);
        assert_eq!(odd.coefficient(&[1]), -0.7);
        let ge = brute_force_ground_states(&even).unwrap();
        let go = brute_force_ground_states(&odd).unwrap();
        let mapped: Vec<SpinAssignment> = ge
            .states
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.flip(1);
                s
            })
            .collect();
        let mut a = mapped;
        let mut b = go.states;
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_logical_gives_penalty_only() {
        let c = compile_lhz(&IsingHamiltonian::new(3))
            .unwrap()
            .with_penalty(2.0)
            .unwrap();
        let h = to_multibody(&c).unwrap();
        assert!(h.terms().all(|(k, coeff)| k.len() >= 3 && coeff == -2.0));
        assert_eq!(h.num_terms(), c.plaquettes().len());
    }

    #[test]
    fn validation_errors() {
        let q = |l: &[usize]| ParityQubit {
            label: Label::new(l.to_vec()).unwrap(),
            field_coefficient: 0.0,
            flipped: false,
            grid_pos: None,
        };
        let bad = Plaquette::new(labels(&[&[0, 1], &[1, 2], &[2]])).unwrap();
        assert!(
            ParityCompilation::new(3, vec![q(&[0, 1]), q(&[1, 2]), q(&[2])], vec![bad], 1.0)
                .is_err()
        );
        let tri = Plaquette::new(labels(&[&[0], &[1], &[0, 1]])).unwrap();
        assert!(ParityCompilation::new(
            2,
            vec![q(&[0]), q(&[1]), q(&[0, 1])],
            vec![tri.clone()],
            0.0
        )
        .is_err());
        let err = ParityCompilation::new(
            2,
            vec![q(&[0]), q(&[1]), q(&[0, 1]), q(&[0, 1])],
            vec![tri],
            1.0,
        );
        assert!(err.is_err());
        assert!(Label::new(vec![2, 1]).is_err());
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let h = IsingHamiltonian::from_terms(3, [(vec![0, 1], 1.5), (vec![2], -1.0)]).unwrap();
        let c = compile_lhz(&h).unwrap();
        let mask = solve_flip_mask(&c).unwrap();
        let c = c.with_flip_mask(&mask).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: ParityCompilation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}
