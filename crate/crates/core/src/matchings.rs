//! `k`-admissible tuples of perfect matchings on `[n]²` and the augmented
//! graph `L*(n,k,r)`.
//!
//! The sampler draws a uniform pairing per matching, repairs conflicts
//! (lattice edges, or edges already used by an earlier matching) with local
//! two-edge switchings, and then runs a few sweeps of an admissibility-
//! preserving switch chain whose stationary law is uniform over admissible
//! tuples.

use std::fmt;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::lattice::{Lattice, TorusPoint};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Deterministic,
    Sampled { seed: u64 },
}

/// `r` perfect matchings on the `n²` torus vertices, stored as partner maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingTuple {
    n: u32,
    partners: Vec<Vec<u32>>,
    provenance: Provenance,
}

impl MatchingTuple {
    /// The empty tuple (`r = 0`), which leaves `L(n,k)` unchanged.
    pub fn empty(n: u32) -> Self {
        MatchingTuple {
            n,
            partners: Vec::new(),
            provenance: Provenance::Deterministic,
        }
    }

    /// Wraps raw partner maps. Only lengths are checked here; use
    /// [`check_admissible`] for the structural invariants.
    pub fn from_partners(n: u32, partners: Vec<Vec<u32>>, provenance: Provenance) -> Result<Self> {
        let size = n as usize * n as usize;
        if let Some(bad) = partners.iter().position(|p| p.len() != size) {
            return Err(Error::MatchingConstruction(format!(
                "matching {bad} has {} entries, expected {size}",
                partners[bad].len()
            )));
        }
        if partners.iter().flatten().any(|&u| u as usize >= size) {
            return Err(Error::MatchingConstruction(
                "partner index out of range".into(),
            ));
        }
        Ok(MatchingTuple {
            n,
            partners,
            provenance,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.partners.len()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    #[inline]
    pub fn partner(&self, j: usize, v: usize) -> usize {
        self.partners[j][v] as usize
    }

    pub fn partners(&self, j: usize) -> &[u32] {
        &self.partners[j]
    }

    /// Whether `u` and `v` are matched by some matching of the tuple.
    pub fn are_matched(&self, u: usize, v: usize) -> bool {
        self.partners.iter().any(|p| p[u] as usize == v)
    }

    pub fn to_document(&self) -> MatchingDocument {
        MatchingDocument {
            n: self.n,
            r: self.r(),
            partners: self.partners.clone(),
            seed: match self.provenance {
                Provenance::Deterministic => None,
                Provenance::Sampled { seed } => Some(seed.to_string()),
            },
        }
    }

    pub fn from_document(doc: MatchingDocument) -> Result<Self> {
        if doc.partners.len() != doc.r {
            return Err(Error::MatchingConstruction(format!(
                "document declares r = {} but lists {} matchings",
                doc.r,
                doc.partners.len()
            )));
        }
        let provenance = match doc.seed {
            None => Provenance::Deterministic,
            Some(s) => Provenance::Sampled {
                seed: s
                    .parse()
                    .map_err(|_| Error::MatchingConstruction(format!("bad seed {s:?}")))?,
            },
        };
        Self::from_partners(doc.n, doc.partners, provenance)
    }
}

/// JSON form `{n, r, partners, seed}`; `seed` is a decimal string, or null
/// for the deterministic construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingDocument {
    pub n: u32,
    pub r: usize,
    pub partners: Vec<Vec<u32>>,
    pub seed: Option<String>,
}

fn require_even(n: u32) -> Result<()> {
    if !n.is_multiple_of(2) {
        return Err(Error::MatchingConstruction(format!(
            "perfect matchings of [n]^2 need even n, got {n}"
        )));
    }
    Ok(())
}

/// Cyclic construction: matching `j` pairs `(x, y)` with
/// `(n/2 + (x + j) mod n/2, y)` for `x < n/2`. Matching edges stay within a
/// row, so they never coincide with stencil edges.
pub fn deterministic_admissible(n: u32, k: u32, r: usize) -> Result<MatchingTuple> {
    require_even(n)?;
    Lattice::stencil(n, k)?;
    let half = n / 2;
    if r > half as usize {
        return Err(Error::MatchingConstruction(format!(
            "cyclic construction needs r <= n/2 = {half}, got r = {r}"
        )));
    }
    let size = n as usize * n as usize;
    let partners = (0..r as u32)
        .map(|j| {
            let mut p = vec![0u32; size];
            for y in 0..n {
                for x in 0..half {
                    let u = TorusPoint { x, y }.index(n);
                    let v = TorusPoint {
                        x: half + (x + j) % half,
                        y,
                    }
                    .index(n);
                    p[u] = v as u32;
                    p[v] = u as u32;
                }
            }
            p
        })
        .collect();
    Ok(MatchingTuple {
        n,
        partners,
        provenance: Provenance::Deterministic,
    })
}

/// Tuning for [`sample_admissible_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerOptions {
    /// Switch attempts allowed per matching, as a multiple of
    /// `initial conflicts + 1`.
    pub repair_cap_factor: u64,
    /// Sweeps of the uniformizing switch chain after repair; one sweep is
    /// `n²/2` attempts per matching.
    pub mixing_sweeps: u32,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions {
            repair_cap_factor: 100,
            mixing_sweeps: 8,
        }
    }
}

pub fn sample_admissible(n: u32, k: u32, r: usize, seed: u64) -> Result<MatchingTuple> {
    sample_admissible_with(n, k, r, seed, SamplerOptions::default())
}

pub fn sample_admissible_with(
    n: u32,
    k: u32,
    r: usize,
    seed: u64,
    opts: SamplerOptions,
) -> Result<MatchingTuple> {
    require_even(n)?;
    let lattice = Lattice::stencil(n, k)?;
    let size = n as usize * n as usize;
    // every vertex must keep some admissible partner
    if 4 * k as usize + r + 1 >= size - 1 {
        return Err(Error::MatchingConstruction(format!(
            "4k+r+1 = {} leaves no room on {size} vertices",
            4 * k as usize + r + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut partners: Vec<Vec<u32>> = Vec::with_capacity(r);
    let mut order: Vec<u32> = (0..size as u32).collect();
    for _ in 0..r {
        order.shuffle(&mut rng);
        let mut p = vec![0u32; size];
        for pair in order.chunks_exact(2) {
            p[pair[0] as usize] = pair[1];
            p[pair[1] as usize] = pair[0];
        }
        repair(
            &lattice,
            &partners,
            &mut p,
            opts.repair_cap_factor,
            &mut rng,
        )?;
        partners.push(p);
    }
    let attempts = u64::from(opts.mixing_sweeps) * (size as u64 / 2);
    for j in 0..r {
        let (before, rest) = partners.split_at_mut(j);
        let (current, after) = rest.split_first_mut().unwrap();
        let others: Vec<&[u32]> = before
            .iter()
            .chain(after.iter())
            .map(|p| p.as_slice())
            .collect();
        mix(&lattice, &others, current, attempts, &mut rng);
    }
    Ok(MatchingTuple {
        n,
        partners,
        provenance: Provenance::Sampled { seed },
    })
}

#[inline]
fn forbidden<P: AsRef<[u32]>>(lattice: &Lattice, others: &[P], u: usize, v: usize) -> bool {
    let n = lattice.n();
    u == v
        || lattice.is_edge(TorusPoint::from_index(u, n), TorusPoint::from_index(v, n))
        || others.iter().any(|p| p.as_ref()[u] as usize == v)
}

fn repair<R: Rng>(
    lattice: &Lattice,
    earlier: &[Vec<u32>],
    p: &mut [u32],
    cap_factor: u64,
    rng: &mut R,
) -> Result<()> {
    let size = p.len();
    let mut conflicts: Vec<usize> = (0..size)
        .filter(|&u| u < p[u] as usize && forbidden(lattice, earlier, u, p[u] as usize))
        .collect();
    let cap = cap_factor * (conflicts.len() as u64 + 1);
    let mut attempts = 0u64;
    while !conflicts.is_empty() {
        let slot = rng.random_range(0..conflicts.len());
        let u = conflicts[slot];
        let v = p[u] as usize;
        // stale entry: an earlier switch already fixed this edge
        if !forbidden(lattice, earlier, u, v) {
            conflicts.swap_remove(slot);
            continue;
        }
        attempts += 1;
        if attempts > cap {
            return Err(Error::SamplingFailed { attempts: cap });
        }
        let a = rng.random_range(0..size);
        let b = p[a] as usize;
        if a == u || a == v {
            continue;
        }
        if forbidden(lattice, earlier, u, a) || forbidden(lattice, earlier, v, b) {
            continue;
        }
        p[u] = a as u32;
        p[a] = u as u32;
        p[v] = b as u32;
        p[b] = v as u32;
        conflicts.swap_remove(slot);
    }
    Ok(())
}

/// Switch chain: pick ordered vertices `a, c` with partners `b, d`, propose
/// `{a,c}, {b,d}` in place of `{a,b}, {c,d}`, accept when admissible. The
/// proposal is symmetric, so the uniform law on admissible matchings is
/// stationary.
fn mix<R: Rng>(lattice: &Lattice, others: &[&[u32]], p: &mut [u32], attempts: u64, rng: &mut R) {
    let size = p.len();
    for _ in 0..attempts {
        let a = rng.random_range(0..size);
        let c = rng.random_range(0..size);
        let b = p[a] as usize;
        let d = p[c] as usize;
        if c == a || c == b {
            continue;
        }
        if forbidden(lattice, others, a, c) || forbidden(lattice, others, b, d) {
            continue;
        }
        p[a] = c as u32;
        p[c] = a as u32;
        p[b] = d as u32;
        p[d] = b as u32;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    SizeMismatch {
        expected: u32,
        found: u32,
    },
    FixedPoint {
        matching: usize,
        vertex: usize,
    },
    NotInvolution {
        matching: usize,
        vertex: usize,
    },
    LatticeEdge {
        matching: usize,
        u: usize,
        v: usize,
    },
    DuplicateEdge {
        first: usize,
        second: usize,
        u: usize,
        v: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SizeMismatch { expected, found } => {
                write!(f, "tuple is for n = {found}, lattice has n = {expected}")
            }
            Violation::FixedPoint { matching, vertex } => {
                write!(f, "matching {matching} leaves vertex {vertex} unmatched")
            }
            Violation::NotInvolution { matching, vertex } => {
                write!(f, "matching {matching} is not symmetric at vertex {vertex}")
            }
            Violation::LatticeEdge { matching, u, v } => {
                write!(f, "matching {matching} uses lattice edge {{{u},{v}}}")
            }
            Violation::DuplicateEdge {
                first,
                second,
                u,
                v,
            } => write!(f, "matchings {first} and {second} share edge {{{u},{v}}}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub violations: Vec<Violation>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every tuple invariant against `L(n,k)`.
pub fn check_admissible(m: &MatchingTuple, lattice: &Lattice) -> AdmissibilityReport {
    let mut report = AdmissibilityReport::default();
    if m.n != lattice.n() {
        report.violations.push(Violation::SizeMismatch {
            expected: lattice.n(),
            found: m.n,
        });
        return report;
    }
    let n = m.n;
    for (j, p) in m.partners.iter().enumerate() {
        for u in 0..p.len() {
            let v = p[u] as usize;
            if v == u {
                report.violations.push(Violation::FixedPoint {
                    matching: j,
                    vertex: u,
                });
            } else if p[v] as usize != u {
                report.violations.push(Violation::NotInvolution {
                    matching: j,
                    vertex: u,
                });
            } else if u < v {
                if lattice.is_edge(TorusPoint::from_index(u, n), TorusPoint::from_index(v, n)) {
                    report
                        .violations
                        .push(Violation::LatticeEdge { matching: j, u, v });
                }
                for (i, q) in m.partners.iter().enumerate().skip(j + 1) {
                    if q[u] as usize == v {
                        report.violations.push(Violation::DuplicateEdge {
                            first: j,
                            second: i,
                            u,
                            v,
                        });
                    }
                }
            }
        }
    }
    report
}

pub fn is_admissible(m: &MatchingTuple, lattice: &Lattice) -> bool {
    check_admissible(m, lattice).is_admissible()
}

/// `L*(n,k,r)`: the stencil lattice plus an admissible matching tuple;
/// `(4k + r + 2)`-regular.
#[derive(Clone, Debug)]
pub struct AugmentedGraph {
    lattice: Lattice,
    matchings: MatchingTuple,
}

impl AugmentedGraph {
    pub fn new(lattice: Lattice, matchings: MatchingTuple) -> Result<Self> {
        if lattice.reach().is_none() {
            return Err(Error::InvalidParameter(
                "augmentation is defined for the stencil lattice L(n,k)".into(),
            ));
        }
        let report = check_admissible(&matchings, &lattice);
        if let Some(v) = report.violations.first() {
            return Err(Error::Inadmissible(v.to_string()));
        }
        Ok(AugmentedGraph { lattice, matchings })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matchings(&self) -> &MatchingTuple {
        &self.matchings
    }

    pub fn n(&self) -> u32 {
        self.lattice.n()
    }

    pub fn k(&self) -> u32 {
        self.lattice.reach().expect("stencil lattice")
    }

    pub fn r(&self) -> usize {
        self.matchings.r()
    }
}

pub fn augmented_graph(lattice: Lattice, m: MatchingTuple) -> Result<AugmentedGraph> {
    AugmentedGraph::new(lattice, m)
}

impl Graph for AugmentedGraph {
    fn num_vertices(&self) -> usize {
        self.lattice.num_vertices()
    }

    fn degree(&self, _v: usize) -> usize {
        self.lattice.lattice_degree() + self.matchings.r()
    }

    #[inline]
    fn for_each_neighbour(&self, v: usize, mut f: impl FnMut(usize)) {
        self.lattice.for_each_neighbour(v, &mut f);
        for p in &self.matchings.partners {
            f(p[v] as usize);
        }
    }

    fn regular_degree(&self) -> Option<usize> {
        Some(self.degree(0))
    }

    fn active_neighbour_counts(&self, active: &FixedBitSet) -> Vec<u32> {
        let mut counts = self.lattice.active_neighbour_counts(active);
        for p in &self.matchings.partners {
            for (v, c) in counts.iter_mut().enumerate() {
                *c += active.contains(p[v] as usize) as u32;
            }
        }
        counts
    }
}
