//! Frames of discernment, basic belief assignments and coarsening.
//!
//! A [`Bba`] distributes a unit of belief mass over the non-empty subsets of
//! a [`FrameOfDiscernment`]. For a target subset `x` the belief, disbelief,
//! uncertainty, base rate and pignistic expectation functions reduce the bba
//! to numbers; coarsening turns them into an [`Opinion`] on `{x, not x}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::opinion::{clip, Opinion, EPS_ADD};

/// Largest frame supported by the bitmask subset encoding.
pub const MAX_ATOMS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("invalid bba: {0}")]
    InvalidBba(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("target subset is empty")]
    EmptyTarget,
    #[error("subset does not belong to the frame")]
    ForeignSubset,
    #[error("coarsening target must be a non-empty proper subset of the frame")]
    ImproperTarget,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Subset of a frame, encoded as a bitmask over atom indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn atom(index: usize) -> Self {
        assert!(index < MAX_ATOMS, "atom index {index} out of range");
        Subset(1 << index)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    /// Atom indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..MAX_ATOMS).filter(move |i| self.0 >> i & 1 == 1)
    }
}

/// Ordered list of distinct atom labels, `2 <= n <= 64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameOfDiscernment {
    atoms: Vec<String>,
}

impl FrameOfDiscernment {
    pub fn new<S: Into<String>>(atoms: impl IntoIterator<Item = S>) -> Result<Self, FrameError> {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.len() < 2 {
            return Err(FrameError::InvalidFrame(format!(
                "need at least 2 atoms, got {}",
                atoms.len()
            )));
        }
        if atoms.len() > MAX_ATOMS {
            return Err(FrameError::InvalidFrame(format!(
                "at most {MAX_ATOMS} atoms supported, got {}",
                atoms.len()
            )));
        }
        for (i, atom) in atoms.iter().enumerate() {
            if atom.is_empty() || atom == "*" || atom.contains(',') {
                return Err(FrameError::InvalidFrame(format!("bad atom label `{atom}`")));
            }
            if atoms[..i].contains(atom) {
                return Err(FrameError::InvalidFrame(format!("duplicate atom `{atom}`")));
            }
        }
        Ok(Self { atoms })
    }

    /// Frame `{t1, ..., tn}`.
    pub fn numbered(n: usize) -> Result<Self, FrameError> {
        Self::new((1..=n).map(|i| format!("t{i}")))
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The whole frame as a subset.
    pub fn theta(&self) -> Subset {
        if self.atoms.len() == MAX_ATOMS {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << self.atoms.len()) - 1)
        }
    }

    pub fn contains(&self, x: Subset) -> bool {
        x.is_subset_of(self.theta())
    }

    pub fn complement(&self, x: Subset) -> Subset {
        Subset(self.theta().0 & !x.0)
    }

    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    /// Parses `"*"` (the whole frame) or comma-joined atom labels.
    pub fn parse_subset(&self, text: &str) -> Result<Subset, FrameError> {
        let text = text.trim();
        if text == "*" {
            return Ok(self.theta());
        }
        let mut bits = 0u64;
        for label in text.split(',').map(str::trim) {
            let i = self
                .index_of(label)
                .ok_or_else(|| FrameError::UnknownAtom(label.to_string()))?;
            bits |= 1 << i;
        }
        Ok(Subset(bits))
    }

    /// Inverse of [`parse_subset`](Self::parse_subset).
    pub fn format_subset(&self, x: Subset) -> String {
        if x == self.theta() {
            return "*".to_string();
        }
        x.indices()
            .map(|i| self.atoms[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// `a(x) = |x| / |Theta|`.
    pub fn base_rate(&self, x: Subset) -> Result<f64, FrameError> {
        if !self.contains(x) {
            return Err(FrameError::ForeignSubset);
        }
        Ok(x.len() as f64 / self.len() as f64)
    }
}

/// Basic belief assignment: masses on non-empty subsets summing to one.
///
/// Only focal elements (strictly positive mass) are stored, keyed in
/// ascending bitmask order.
#[derive(Debug, Clone, PartialEq)]
pub struct Bba {
    frame: FrameOfDiscernment,
    masses: BTreeMap<Subset, f64>,
}

impl Bba {
    pub fn new(
        frame: FrameOfDiscernment,
        masses: impl IntoIterator<Item = (Subset, f64)>,
    ) -> Result<Self, FrameError> {
        let mut map = BTreeMap::new();
        for (x, m) in masses {
            if x.is_empty() {
                return Err(FrameError::InvalidBba("the empty set cannot carry mass".into()));
            }
            if !frame.contains(x) {
                return Err(FrameError::ForeignSubset);
            }
            if !m.is_finite() || !(0.0..=1.0 + EPS_ADD).contains(&m) {
                return Err(FrameError::InvalidBba(format!("mass {m} outside [0, 1]")));
            }
            if m > 0.0 {
                *map.entry(x).or_insert(0.0) += m;
            }
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > EPS_ADD {
            return Err(FrameError::InvalidBba(format!(
                "masses sum to {total}, expected 1"
            )));
        }
        Ok(Self { frame, masses: map })
    }

    pub fn vacuous(frame: FrameOfDiscernment) -> Self {
        let theta = frame.theta();
        Self {
            frame,
            masses: BTreeMap::from([(theta, 1.0)]),
        }
    }

    pub fn frame(&self) -> &FrameOfDiscernment {
        &self.frame
    }

    pub fn mass(&self, x: Subset) -> f64 {
        self.masses.get(&x).copied().unwrap_or(0.0)
    }

    /// Focal elements with their masses, in ascending key order.
    pub fn focal_elements(&self) -> impl Iterator<Item = (Subset, f64)> + '_ {
        self.masses.iter().map(|(k, v)| (*k, *v))
    }

    fn target(&self, x: Subset) -> Result<Subset, FrameError> {
        if x.is_empty() {
            return Err(FrameError::EmptyTarget);
        }
        if !self.frame.contains(x) {
            return Err(FrameError::ForeignSubset);
        }
        Ok(x)
    }

    fn sum_where(&self, pred: impl Fn(Subset) -> bool) -> f64 {
        self.focal_elements()
            .filter(|(y, _)| pred(*y))
            .map(|(_, m)| m)
            .sum()
    }

    /// Mass committed to non-empty subsets of `x`.
    pub fn belief(&self, x: Subset) -> Result<f64, FrameError> {
        let x = self.target(x)?;
        Ok(self.sum_where(|y| y.is_subset_of(x)))
    }

    /// Mass committed to subsets disjoint from `x`.
    pub fn disbelief(&self, x: Subset) -> Result<f64, FrameError> {
        let x = self.target(x)?;
        Ok(self.sum_where(|y| y.is_disjoint(x)))
    }

    /// Mass on subsets that overlap `x` without being contained in it.
    pub fn uncertainty(&self, x: Subset) -> Result<f64, FrameError> {
        let x = self.target(x)?;
        Ok(self.sum_where(|y| !y.is_disjoint(x) && !y.is_subset_of(x)))
    }

    pub fn base_rate(&self, x: Subset) -> Result<f64, FrameError> {
        self.frame.base_rate(x)
    }

    /// Pignistic expectation `sum_y m(y) |x & y| / |y|`.
    pub fn prob_expectation(&self, x: Subset) -> Result<f64, FrameError> {
        if !self.frame.contains(x) {
            return Err(FrameError::ForeignSubset);
        }
        Ok(self
            .focal_elements()
            .map(|(y, m)| m * x.intersection(y).len() as f64 / y.len() as f64)
            .sum())
    }

    pub fn classify(&self) -> BbaClass {
        let theta = self.frame.theta();
        let others: Vec<Subset> = self
            .focal_elements()
            .map(|(y, _)| y)
            .filter(|y| *y != theta)
            .collect();
        let pairwise_disjoint = others
            .iter()
            .enumerate()
            .all(|(i, y)| others[i + 1..].iter().all(|z| y.is_disjoint(*z)));
        let has_theta = self.masses.contains_key(&theta);
        BbaClass {
            vacuous: others.is_empty(),
            bayesian: !has_theta && others.iter().all(|y| y.len() == 1),
            dogmatic: !has_theta,
            dirichlet: others.iter().all(|y| y.len() == 1),
            cluster_dirichlet: pairwise_disjoint,
        }
    }

    fn coarsening_inputs(&self, x: Subset) -> Result<CoarseningInputs, FrameError> {
        let x = self.target(x)?;
        if x == self.frame.theta() {
            return Err(FrameError::ImproperTarget);
        }
        Ok(CoarseningInputs {
            b: self.belief(x)?,
            d: self.disbelief(x)?,
            u: self.uncertainty(x)?,
            a: self.base_rate(x)?,
            e: self.prob_expectation(x)?,
        })
    }

    /// Smooth coarsening of the frame into `{x, not x}`.
    ///
    /// The result keeps the pignistic expectation and base rate of `x`.
    pub fn smooth_coarsen(&self, x: Subset) -> Result<Opinion, FrameError> {
        let CoarseningInputs { b, u, a, e, .. } = self.coarsening_inputs(x)?;
        let projected = b + a * u;
        if e <= projected {
            if projected <= 0.0 {
                // 0 <= E <= b + au = 0
                return Ok(Opinion::from_parts_unchecked(0.0, 1.0, 0.0, a));
            }
            Ok(clip(e, a, e * u / projected))
        } else {
            let rest = 1.0 - projected;
            if rest <= 0.0 {
                return Ok(Opinion::from_parts_unchecked(1.0, 0.0, 0.0, a));
            }
            Ok(clip(e, a, (1.0 - e) * u / rest))
        }
    }

    /// Stable coarsening: `(b(x), d(x), u(x), a(x))` verbatim. Only defined
    /// for (cluster) Dirichlet bbas whose target is a focal element.
    pub fn stable_coarsen(&self, x: Subset) -> Result<Opinion, FrameError> {
        let CoarseningInputs { b, d, u, a, .. } = self.coarsening_inputs(x)?;
        let class = self.classify();
        if !class.cluster_dirichlet {
            return Err(FrameError::PreconditionViolated(
                "stable coarsening needs a (cluster) Dirichlet bba".into(),
            ));
        }
        if !self.masses.contains_key(&x) {
            return Err(FrameError::PreconditionViolated(format!(
                "target {{{}}} is not a focal element",
                self.frame.format_subset(x)
            )));
        }
        Opinion::new(b, d, u, a)
            .map_err(|e| FrameError::PreconditionViolated(e.to_string()))
    }

    /// Parses the JSON frame format:
    /// `{"atoms": ["t1","t2"], "masses": {"t1": 0.5, "*": 0.5}}`.
    pub fn from_json_str(text: &str) -> Result<Self, FrameError> {
        let file: BbaFile =
            serde_json::from_str(text).map_err(|e| FrameError::InvalidBba(e.to_string()))?;
        let frame = FrameOfDiscernment::new(file.atoms)?;
        let masses = file
            .masses
            .iter()
            .map(|(k, m)| Ok((frame.parse_subset(k)?, *m)))
            .collect::<Result<Vec<_>, FrameError>>()?;
        Bba::new(frame, masses)
    }

    pub fn to_json_string(&self) -> String {
        let file = BbaFile {
            atoms: self.frame.atoms.clone(),
            masses: self
                .focal_elements()
                .map(|(k, m)| (self.frame.format_subset(k), m))
                .collect(),
        };
        serde_json::to_string(&file).expect("bba serializes")
    }
}

impl fmt::Display for Bba {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .focal_elements()
            .map(|(k, m)| format!("m({{{}}})={}", self.frame.format_subset(k), m))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct BbaFile {
    atoms: Vec<String>,
    masses: BTreeMap<String, f64>,
}

struct CoarseningInputs {
    b: f64,
    d: f64,
    u: f64,
    a: f64,
    e: f64,
}

/// Most specific bba category, in the order the flags are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbaKind {
    Vacuous,
    Bayesian,
    Dogmatic,
    Dirichlet,
    ClusterDirichlet,
    General,
}

/// Overlapping bba categories; every Bayesian bba is also dogmatic and
/// Dirichlet, and every Dirichlet bba is cluster Dirichlet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BbaClass {
    /// `m(Theta) = 1`.
    pub vacuous: bool,
    /// All focal elements are atoms.
    pub bayesian: bool,
    /// `m(Theta) = 0`.
    pub dogmatic: bool,
    /// Focal elements are `Theta` and/or atoms.
    pub dirichlet: bool,
    /// Focal elements are `Theta` and/or pairwise disjoint subsets.
    pub cluster_dirichlet: bool,
}

impl BbaClass {
    pub fn kind(&self) -> BbaKind {
        if self.vacuous {
            BbaKind::Vacuous
        } else if self.bayesian {
            BbaKind::Bayesian
        } else if self.dirichlet {
            BbaKind::Dirichlet
        } else if self.cluster_dirichlet {
            BbaKind::ClusterDirichlet
        } else if self.dogmatic {
            BbaKind::Dogmatic
        } else {
            BbaKind::General
        }
    }
}
