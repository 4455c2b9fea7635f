//! Bipartite correlations of four-mode states: the seven Alice/Bob channels,
//! mutual information, conditional mutual information under an eavesdropper,
//! and negativity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cascade::ModeLabel::{self, EarlyB, EarlyX, LateB, LateX};
use crate::cascade::MODE_COUNT;
use crate::error::{Error, Result};
use crate::qmath::{
    partial_trace, partial_transpose, trace_norm, vn_entropy, DensityMatrix, SubsystemShape,
};

/// Negative MI/CMI round-off in `[MI_CLAMP, 0)` is reported as 0.
pub const MI_CLAMP: f64 = -1e-9;
/// Allowed gap between the two CMI evaluation paths.
pub const CMI_PATH_TOL: f64 = 1e-10;

/// A subset of the four modes, stored as a bitmask over [`ModeLabel::ordinal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ModeSet(u8);

impl ModeSet {
    pub const EMPTY: ModeSet = ModeSet(0);
    pub const ALL: ModeSet = ModeSet((1 << MODE_COUNT) - 1);

    pub fn of(modes: &[ModeLabel]) -> Self {
        modes.iter().fold(Self::EMPTY, |s, &m| s.with(m))
    }

    pub fn with(self, m: ModeLabel) -> Self {
        ModeSet(self.0 | 1 << m.ordinal())
    }

    pub fn contains(self, m: ModeLabel) -> bool {
        self.0 & (1 << m.ordinal()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ModeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ModeSet(self.0 & other.0)
    }

    pub fn complement(self) -> Self {
        ModeSet(!self.0 & Self::ALL.0)
    }

    pub fn iter(self) -> impl Iterator<Item = ModeLabel> {
        ModeLabel::ALL
            .into_iter()
            .filter(move |&m| self.contains(m))
    }

    /// Subsystem indices, ascending.
    pub fn indices(self) -> Vec<usize> {
        self.iter().map(ModeLabel::ordinal).collect()
    }
}

impl fmt::Display for ModeSet {
    /// `EB+EX`, or `none` for the empty set.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("none");
        }
        let tags: Vec<&str> = self.iter().map(ModeLabel::short).collect();
        f.write_str(&tags.join("+"))
    }
}

impl FromStr for ModeSet {
    type Err = Error;

    /// Parses lists such as `EarlyB,LateX`, `eb+lx` or `none`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.eq_ignore_ascii_case("none") {
            return Ok(Self::EMPTY);
        }
        s.split([',', '+'])
            .map(|part| part.trim().parse::<ModeLabel>())
            .try_fold(Self::EMPTY, |set, m| Ok(set.with(m?)))
    }
}

impl Serialize for ModeSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ModeSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let modes = Vec::<ModeLabel>::deserialize(de)?;
        Ok(ModeSet::of(&modes))
    }
}

/// An unordered bipartition of the four modes, in canonical orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Channel {
    id: u8,
    p1: ModeSet,
    p2: ModeSet,
}

/// Alice's side of channels 1..=7.
const CHANNEL_P1: [&[ModeLabel]; 7] = [
    &[EarlyB],
    &[EarlyX],
    &[LateB],
    &[LateX],
    &[EarlyB, EarlyX],
    &[EarlyB, LateB],
    &[EarlyB, LateX],
];

impl Channel {
    pub fn from_id(id: u8) -> Result<Self> {
        if !(1..=7).contains(&id) {
            return Err(Error::InvalidChannel(format!("id {id} not in 1..=7")));
        }
        let p1 = ModeSet::of(CHANNEL_P1[id as usize - 1]);
        Ok(Self {
            id,
            p1,
            p2: p1.complement(),
        })
    }

    /// The canonical channel matching `{p1, p2}` in either orientation.
    pub fn from_parts(p1: ModeSet, p2: ModeSet) -> Result<Self> {
        if p1.is_empty() || p2.is_empty() {
            return Err(Error::InvalidChannel("both sides must be nonempty".into()));
        }
        if !p1.intersection(p2).is_empty() {
            return Err(Error::InvalidChannel("overlapping subsets".into()));
        }
        if p1.union(p2) != ModeSet::ALL {
            return Err(Error::InvalidChannel("missing modes".into()));
        }
        enumerate_channels()
            .into_iter()
            .find(|ch| ch.p1 == p1 || ch.p2 == p1)
            .ok_or_else(|| Error::InvalidChannel(format!("{p1}|{p2}")))
    }

    pub fn id(&self) -> u8 {
        self.id
    }

    pub fn p1(&self) -> ModeSet {
        self.p1
    }

    pub fn p2(&self) -> ModeSet {
        self.p2
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CH{} {}|{}", self.id, self.p1, self.p2)
    }
}

/// The seven quantum channels: four 1|3 splits with Alice holding EarlyB,
/// EarlyX, LateB, LateX, then the 2|2 splits pairing EarlyB with EarlyX,
/// LateB and LateX.
pub fn enumerate_channels() -> Vec<Channel> {
    (1..=7).map(|id| Channel::from_id(id).unwrap()).collect()
}

/// Alice, Bob and Eve's modes; Eve holds part of Bob's original side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EveSplit {
    alice: ModeSet,
    bob: ModeSet,
    eve: ModeSet,
}

impl EveSplit {
    pub fn new(alice: ModeSet, bob: ModeSet, eve: ModeSet) -> Result<Self> {
        if !alice.intersection(bob).is_empty()
            || !alice.intersection(eve).is_empty()
            || !bob.intersection(eve).is_empty()
        {
            return Err(Error::InvalidSplit("overlapping subsets".into()));
        }
        if alice.union(bob).union(eve) != ModeSet::ALL {
            return Err(Error::InvalidSplit("missing modes".into()));
        }
        if alice.is_empty() {
            return Err(Error::InvalidSplit("alice holds no mode".into()));
        }
        if bob.is_empty() {
            return Err(Error::InvalidSplit("bob holds no mode".into()));
        }
        Ok(Self { alice, bob, eve })
    }

    /// Bob keeps every mode not held by Alice or Eve.
    pub fn with_eve(alice: ModeSet, eve: ModeSet) -> Result<Self> {
        if !alice.intersection(eve).is_empty() {
            return Err(Error::InvalidSplit("overlapping subsets".into()));
        }
        Self::new(alice, alice.union(eve).complement(), eve)
    }

    /// Eve takes `eve` out of Bob's side of `ch`.
    pub fn from_channel(ch: &Channel, eve: ModeSet) -> Result<Self> {
        Self::with_eve(ch.p1(), eve)
    }

    pub fn alice(&self) -> ModeSet {
        self.alice
    }

    pub fn bob(&self) -> ModeSet {
        self.bob
    }

    pub fn eve(&self) -> ModeSet {
        self.eve
    }

    /// Column tag such as `A=EB_E=EX`.
    pub fn tag(&self) -> String {
        format!("A={}_E={}", self.alice, self.eve)
    }
}

fn check_four_modes(rho: &DensityMatrix) -> Result<()> {
    let dim = 1 << MODE_COUNT;
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: rho.dim(),
        });
    }
    Ok(())
}

/// Entropy in bits of the reduced state on `modes`.
pub fn subset_entropy(rho: &DensityMatrix, modes: ModeSet) -> Result<f64> {
    check_four_modes(rho)?;
    match modes.len() {
        0 => Ok(0.0),
        MODE_COUNT => vn_entropy(rho),
        _ => {
            let reduced =
                partial_trace(rho, &SubsystemShape::qubits(MODE_COUNT), &modes.indices())?;
            vn_entropy(&reduced)
        }
    }
}

fn clamp_info(x: f64) -> f64 {
    if (MI_CLAMP..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

/// `S(a) + S(b) − S(a∪b)` for disjoint mode sets.
pub fn mutual_information_between(rho: &DensityMatrix, a: ModeSet, b: ModeSet) -> Result<f64> {
    if !a.intersection(b).is_empty() {
        return Err(Error::InvalidSplit("overlapping subsets".into()));
    }
    let s = subset_entropy(rho, a)? + subset_entropy(rho, b)? - subset_entropy(rho, a.union(b))?;
    Ok(clamp_info(s))
}

/// `I(ρ₁:ρ₂) = S(ρ₁) + S(ρ₂) − S(ρ₁₂)` across a channel.
pub fn mutual_information(rho: &DensityMatrix, ch: &Channel) -> Result<f64> {
    mutual_information_between(rho, ch.p1(), ch.p2())
}

/// Mean mutual information over the seven channels.
pub fn average_mutual_information(rho: &DensityMatrix) -> Result<f64> {
    let channels = enumerate_channels();
    let total = channels
        .iter()
        .map(|ch| mutual_information(rho, ch))
        .sum::<Result<f64>>()?;
    Ok(total / channels.len() as f64)
}

/// `I(Alice:Bob|Eve) = I(Alice : Bob∪Eve) − I(Alice : Eve)`.
///
/// Cross-checked against `S(AE) + S(BE) − S(E) − S(ABE)`; the two must agree
/// within [`CMI_PATH_TOL`].
pub fn conditional_mutual_information(rho: &DensityMatrix, split: &EveSplit) -> Result<f64> {
    let (a, b, e) = (split.alice, split.bob, split.eve);
    let eq5 =
        mutual_information_between(rho, a, b.union(e))? - mutual_information_between(rho, a, e)?;

    let entropies = subset_entropy(rho, a.union(e))? + subset_entropy(rho, b.union(e))?
        - subset_entropy(rho, e)?
        - subset_entropy(rho, a.union(b).union(e))?;

    if (eq5 - entropies).abs() > CMI_PATH_TOL {
        return Err(Error::InconsistentCmi { eq5, entropies });
    }
    Ok(clamp_info(eq5))
}

/// `(‖ρ^{T_{p1}}‖₁ − 1)/2`
pub fn negativity(rho: &DensityMatrix, ch: &Channel) -> Result<f64> {
    check_four_modes(rho)?;
    let pt = partial_transpose(rho, &SubsystemShape::qubits(MODE_COUNT), &ch.p1().indices())?;
    let n = (trace_norm(&pt)? - 1.0) / 2.0;
    Ok(if (-1e-10..0.0).contains(&n) { 0.0 } else { n })
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// `h(p) = −p log₂ p − (1−p) log₂(1−p)`
pub fn binary_entropy(p: f64) -> f64 {
    shannon_entropy(&[p, 1.0 - p])
}
