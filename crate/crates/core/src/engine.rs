//! The bootstrap processes `B_j(G;A)` and `M_r(G;A)`.
//!
//! Three independent routes to the final state are provided:
//! [`run_synchronous`] iterates [`step_synchronous`] literally,
//! [`run_to_fixpoint`] is the frontier-queue algorithm used everywhere else,
//! and [`final_inactive_via_core`] computes the surviving inactive set as a
//! k-core (regular graphs only). They must agree exactly.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::{Error, Result};

/// Activation rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// `B_j`: activate with at least `j` active neighbours.
    Neighbour { j: u32 },
    /// `M_r`: activate when active minus inactive neighbours is at least `r`,
    /// i.e. with at least `⌈(deg + r) / 2⌉` active neighbours.
    Majority { r: u32 },
}

impl Rule {
    pub fn neighbour(j: u32) -> Result<Self> {
        if j == 0 {
            return Err(Error::InvalidParameter(
                "j-neighbour rule needs j >= 1".into(),
            ));
        }
        Ok(Rule::Neighbour { j })
    }

    pub fn majority(r: u32) -> Self {
        Rule::Majority { r }
    }

    /// Active neighbours needed by an inactive vertex of the given degree.
    #[inline]
    pub fn threshold(&self, degree: usize) -> u32 {
        match *self {
            Rule::Neighbour { j } => j,
            Rule::Majority { r } => (degree as u32 + r).div_ceil(2),
        }
    }
}

/// Dense active/inactive flags over the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActivationState {
    bits: FixedBitSet,
}

impl ActivationState {
    pub fn all_inactive(n: usize) -> Self {
        ActivationState {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn all_active(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        ActivationState { bits }
    }

    pub fn from_active(n: usize, active: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::all_inactive(n);
        for v in active {
            s.activate(v);
        }
        s
    }

    pub fn from_bits(bits: FixedBitSet) -> Self {
        ActivationState { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn is_active(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    #[inline]
    pub fn activate(&mut self, v: usize) {
        self.bits.insert(v);
    }

    pub fn deactivate(&mut self, v: usize) {
        self.bits.set(v, false);
    }

    pub fn active_count(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn inactive_count(&self) -> usize {
        self.len() - self.active_count()
    }

    pub fn all_are_active(&self) -> bool {
        self.bits.is_full()
    }

    pub fn active(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn inactive(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.zeroes()
    }

    pub fn is_subset(&self, other: &ActivationState) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    /// The inactive vertices as a set.
    pub fn inactive_set(&self) -> FixedBitSet {
        let mut s = self.bits.clone();
        s.toggle_range(..);
        s
    }
}

/// Outcome of running a process to its fixpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinalState {
    pub state: ActivationState,
    /// Synchronous rounds in which at least one vertex activated.
    pub rounds: u32,
    pub disseminated: bool,
}

impl FinalState {
    pub fn inactive_count(&self) -> usize {
        self.state.inactive_count()
    }
}

fn check_size<G: Graph>(g: &G, s: &ActivationState) {
    assert_eq!(
        g.num_vertices(),
        s.len(),
        "activation state sized for a different graph"
    );
}

/// One synchronous round: every inactive vertex meeting the threshold
/// activates simultaneously.
pub fn step_synchronous<G: Graph>(g: &G, rule: Rule, s: &ActivationState) -> ActivationState {
    check_size(g, s);
    let mut next = s.clone();
    for v in s.inactive() {
        let mut active = 0u32;
        g.for_each_neighbour(v, |u| active += s.is_active(u) as u32);
        if active >= rule.threshold(g.degree(v)) {
            next.activate(v);
        }
    }
    next
}

/// Literal round-by-round iteration until nothing changes.
pub fn run_synchronous<G: Graph>(g: &G, rule: Rule, initial: &ActivationState) -> FinalState {
    let mut state = initial.clone();
    let mut rounds = 0;
    loop {
        let next = step_synchronous(g, rule, &state);
        if next == state {
            break;
        }
        state = next;
        rounds += 1;
    }
    let disseminated = state.all_are_active();
    FinalState {
        state,
        rounds,
        disseminated,
    }
}

/// Frontier-queue evaluation, `O(|V| + |E|)`. Activations are processed in
/// generations so that `rounds` matches synchronous semantics.
pub fn run_to_fixpoint<G: Graph>(g: &G, rule: Rule, initial: &ActivationState) -> FinalState {
    check_size(g, initial);
    let regular = g.regular_degree();
    let threshold = |v: usize| match regular {
        Some(d) => rule.threshold(d),
        None => rule.threshold(g.degree(v)),
    };
    let mut counts = g.active_neighbour_counts(initial.bits());
    let mut state = initial.clone();
    let mut frontier: Vec<usize> = initial
        .inactive()
        .filter(|&v| counts[v] >= threshold(v))
        .collect();
    for &v in &frontier {
        state.activate(v);
    }
    let mut rounds = 0;
    let mut next = Vec::new();
    while !frontier.is_empty() {
        rounds += 1;
        for &v in &frontier {
            g.for_each_neighbour(v, |u| {
                if !state.is_active(u) {
                    counts[u] += 1;
                    if counts[u] >= threshold(u) {
                        state.activate(u);
                        next.push(u);
                    }
                }
            });
        }
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    let disseminated = state.all_are_active();
    FinalState {
        state,
        rounds,
        disseminated,
    }
}

pub fn disseminates<G: Graph>(g: &G, rule: Rule, initial: &ActivationState) -> bool {
    run_to_fixpoint(g, rule, initial).disseminated
}

/// The final inactive set of a regular graph as the `(d - j + 1)`-core of the
/// subgraph induced by the initially inactive vertices. Peeling proceeds in
/// index order.
pub fn final_inactive_via_core<G: Graph>(
    g: &G,
    rule: Rule,
    initial: &ActivationState,
) -> Result<FixedBitSet> {
    check_size(g, initial);
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    let j = i64::from(rule.threshold(d));
    let core = d as i64 - j + 1;
    Ok(peel_to_core(g, initial.inactive_set(), core))
}

/// Largest subset of `members` in which every vertex has at least
/// `min_degree` neighbours inside the subset.
pub fn peel_to_core<G: Graph>(g: &G, mut members: FixedBitSet, min_degree: i64) -> FixedBitSet {
    let n = g.num_vertices();
    let mut deg = vec![0i64; n];
    for v in members.ones() {
        g.for_each_neighbour(v, |u| {
            if members.contains(u) {
                deg[v] += 1;
            }
        });
    }
    let mut queue: VecDeque<usize> = members.ones().filter(|&v| deg[v] < min_degree).collect();
    let mut queued = FixedBitSet::with_capacity(n);
    for &v in &queue {
        queued.insert(v);
    }
    while let Some(v) = queue.pop_front() {
        members.set(v, false);
        g.for_each_neighbour(v, |u| {
            if members.contains(u) && !queued.contains(u) {
                deg[u] -= 1;
                if deg[u] < min_degree {
                    queued.insert(u);
                    queue.push_back(u);
                }
            }
        });
    }
    members
}

/// Each vertex independently active with probability `p`. Vertex `v` is
/// active iff the `v`-th uniform draw of the seeded stream is below `p`, so
/// sets drawn from one seed are nested in `p`.
pub fn random_initial(n_vertices: usize, p: f64, seed: u64) -> Result<ActivationState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "probability {p} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = ActivationState::all_inactive(n_vertices);
    for v in 0..n_vertices {
        if rng.random::<f64>() < p {
            s.activate(v);
        }
    }
    Ok(s)
}
