//! The six cluster geometries and their symmetry metadata.
//!
//! Basis states are addressed by 1-based *labels* in the fixed enumeration
//! used throughout the crate: the all-up state first, then states grouped by
//! the number of down spins, all-down last. For N=3:
//!
//! ```text
//! 1 ↑↑↑  2 ↑↑↓  3 ↑↓↑  4 ↓↑↑  5 ↑↓↓  6 ↓↑↓  7 ↓↓↑  8 ↓↓↓
//! ```
//!
//! Matrix row `k` (0-based) corresponds to label `k + 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unordered site pair, 1-based, stored with `.0 < .1`.
pub type SitePair = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Triangle,
    Chain3,
    Pyramid,
    Square,
    Star,
    Chain4,
}

impl Geometry {
    pub const ALL: [Geometry; 6] = [
        Geometry::Triangle,
        Geometry::Chain3,
        Geometry::Pyramid,
        Geometry::Square,
        Geometry::Star,
        Geometry::Chain4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Triangle => "triangle",
            Geometry::Chain3 => "chain3",
            Geometry::Pyramid => "pyramid",
            Geometry::Square => "square",
            Geometry::Star => "star",
            Geometry::Chain4 => "chain4",
        }
    }

    pub fn n_sites(self) -> usize {
        match self {
            Geometry::Triangle | Geometry::Chain3 => 3,
            _ => 4,
        }
    }

    pub fn cluster(self) -> ClusterGeometry {
        ClusterGeometry::new(self)
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Geometry::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownGeometry(s.to_string()))
    }
}

/// A product state of N spins along z. Bit `site - 1` set means spin down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    bits: u8,
    n_sites: u8,
}

impl SpinConfig {
    /// Parses `u`/`d` (or `↑`/`↓`) characters, site 1 first.
    pub fn parse(s: &str) -> Option<Self> {
        let mut bits = 0u8;
        let mut n = 0u8;
        for ch in s.chars() {
            match ch {
                'u' | '↑' => {}
                'd' | '↓' => bits |= 1 << n,
                _ => return None,
            }
            n += 1;
        }
        (n > 0 && n <= 8).then_some(SpinConfig { bits, n_sites: n })
    }

    pub fn n_sites(self) -> usize {
        self.n_sites as usize
    }

    pub fn is_down(self, site: usize) -> bool {
        self.bits & (1 << (site - 1)) != 0
    }

    /// σᶻ eigenvalue at `site`: +1 for up, −1 for down.
    pub fn sz(self, site: usize) -> f64 {
        if self.is_down(site) {
            -1.0
        } else {
            1.0
        }
    }

    pub fn flip(self, site: usize) -> Self {
        SpinConfig {
            bits: self.bits ^ (1 << (site - 1)),
            n_sites: self.n_sites,
        }
    }

    pub fn flip_all(self) -> Self {
        let mask = ((1u16 << self.n_sites) - 1) as u8;
        SpinConfig {
            bits: self.bits ^ mask,
            n_sites: self.n_sites,
        }
    }

    pub fn n_down(self) -> u32 {
        self.bits.count_ones()
    }
}

impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for site in 1..=self.n_sites() {
            f.write_str(if self.is_down(site) { "↓" } else { "↑" })?;
        }
        Ok(())
    }
}

const BASIS3: [&str; 8] = ["uuu", "uud", "udu", "duu", "udd", "dud", "ddu", "ddd"];

const BASIS4: [&str; 16] = [
    "uuuu", "uuud", "uudu", "uduu", "duuu", "uudd", "uddu", "dduu", "duud", "udud", "dudu", "dddu", "ddud", "dudd",
    "uddd", "dddd",
];

/// The basis enumeration for `n_sites` spins, label 1 first.
pub fn basis_order(n_sites: usize) -> Result<Vec<SpinConfig>> {
    let table: &[&str] = match n_sites {
        3 => &BASIS3,
        4 => &BASIS4,
        n => return Err(Error::UnsupportedSize(n)),
    };
    Ok(table
        .iter()
        .map(|s| SpinConfig::parse(s).expect("static basis table"))
        .collect())
}

/// Static description of one cluster.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterGeometry {
    pub name: Geometry,
    pub n_sites: usize,
    /// Bonds carrying the Ising coupling J.
    pub h0_edges: Vec<SitePair>,
    /// Pair classes sharing one W̃ value, in the order of `RegWeights::w`.
    pub w_classes: Vec<Vec<SitePair>>,
    /// Whether the universal 3-body term Q̃ is part of the ansatz.
    pub q_included: bool,
    pub basis_order: Vec<SpinConfig>,
    /// Groups of basis labels (1-based) with equal ground-state components.
    pub component_classes: Vec<Vec<usize>>,
}

fn pairs(list: &[(usize, usize)]) -> Vec<SitePair> {
    list.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect()
}

impl ClusterGeometry {
    pub fn new(name: Geometry) -> Self {
        let n_sites = name.n_sites();
        let (h0_edges, w_classes, component_classes): (Vec<SitePair>, Vec<Vec<SitePair>>, Vec<Vec<usize>>) = match name
        {
            Geometry::Triangle => (
                pairs(&[(1, 2), (2, 3), (1, 3)]),
                vec![pairs(&[(1, 2), (2, 3), (1, 3)])],
                vec![vec![1, 8], vec![2, 3, 4, 5, 6, 7]],
            ),
            Geometry::Chain3 => (
                pairs(&[(1, 2), (2, 3)]),
                vec![pairs(&[(1, 2), (2, 3)]), pairs(&[(1, 3)])],
                vec![vec![1, 8], vec![2, 4, 5, 7], vec![3, 6]],
            ),
            Geometry::Pyramid => {
                let all = pairs(&[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
                (
                    all.clone(),
                    vec![all],
                    vec![vec![1, 16], vec![2, 3, 4, 5, 12, 13, 14, 15], vec![6, 7, 8, 9, 10, 11]],
                )
            }
            Geometry::Square => (
                pairs(&[(1, 2), (2, 3), (3, 4), (1, 4)]),
                vec![pairs(&[(1, 2), (2, 3), (3, 4), (1, 4)]), pairs(&[(1, 3), (2, 4)])],
                vec![
                    vec![1, 16],
                    vec![2, 3, 4, 5, 12, 13, 14, 15],
                    vec![6, 7, 8, 9],
                    vec![10, 11],
                ],
            ),
            // Site 2 is the hub.
            Geometry::Star => (
                pairs(&[(1, 2), (2, 3), (2, 4)]),
                vec![pairs(&[(1, 2), (2, 3), (2, 4)]), pairs(&[(1, 3), (1, 4), (3, 4)])],
                vec![
                    vec![1, 16],
                    vec![2, 3, 5, 12, 13, 15],
                    vec![4, 14],
                    vec![6, 7, 8, 9, 10, 11],
                ],
            ),
            Geometry::Chain4 => (
                pairs(&[(1, 2), (2, 3), (3, 4)]),
                vec![
                    pairs(&[(1, 2), (3, 4)]),
                    pairs(&[(2, 3)]),
                    pairs(&[(1, 3), (2, 4)]),
                    pairs(&[(1, 4)]),
                ],
                vec![
                    vec![1, 16],
                    vec![2, 5, 12, 15],
                    vec![3, 4, 13, 14],
                    vec![6, 8],
                    vec![7, 9],
                    vec![10, 11],
                ],
            ),
        };
        ClusterGeometry {
            name,
            n_sites,
            h0_edges,
            w_classes,
            q_included: n_sites == 4,
            basis_order: basis_order(n_sites).expect("tabulated size"),
            component_classes,
        }
    }

    /// Hilbert-space dimension 2^N.
    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    /// Number of independent regularization strengths (W̃ classes plus Q̃).
    pub fn n_unknowns(&self) -> usize {
        self.w_classes.len() + usize::from(self.q_included)
    }

    pub fn n_component_classes(&self) -> usize {
        self.component_classes.len()
    }

    /// 1-based label of a spin configuration.
    pub fn label_of(&self, config: SpinConfig) -> usize {
        self.basis_order
            .iter()
            .position(|&c| c == config)
            .map(|k| k + 1)
            .expect("configuration of matching size")
    }

    /// Configuration of a 1-based basis label.
    pub fn config(&self, label: usize) -> Result<SpinConfig> {
        self.check_label(label)?;
        Ok(self.basis_order[label - 1])
    }

    fn check_label(&self, label: usize) -> Result<()> {
        if label == 0 || label > self.dim() {
            return Err(Error::BasisIndexOutOfRange {
                index: label,
                dim: self.dim(),
            });
        }
        Ok(())
    }

    /// Index into `component_classes` of the class holding `label`.
    pub fn component_class_of(&self, label: usize) -> Result<usize> {
        self.check_label(label)?;
        Ok(self
            .component_classes
            .iter()
            .position(|class| class.contains(&label))
            .expect("component classes partition the basis"))
    }

    /// First (smallest) label of each component class.
    pub fn class_representatives(&self) -> Vec<usize> {
        self.component_classes.iter().map(|c| c[0]).collect()
    }

    /// Index into `w_classes` of the class containing the pair, if any.
    pub fn w_class_of(&self, pair: SitePair) -> Option<usize> {
        let key = (pair.0.min(pair.1), pair.0.max(pair.1));
        self.w_classes.iter().position(|c| c.contains(&key))
    }
}

/// Looks a geometry up by name.
pub fn catalog(name: &str) -> Result<ClusterGeometry> {
    Ok(name.parse::<Geometry>()?.cluster())
}
