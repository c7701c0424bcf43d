//! Cell-level diagnostics: components of cell sets under the ℓ1 and ℓ∞
//! adjacencies, ε-ubiquity, diameter statistics, and the stable-collection
//! conditions satisfied by the final inactive set of `L*(n,k,r)`.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::growth::Verdict;
use crate::lattice::{Cell, Metric, Tessellation, TorusPoint};
use crate::matchings::AugmentedGraph;
use crate::{Error, Result};

pub const A: f64 = 1e8;
pub const B: f64 = 1e6;
pub const B_PRIME: f64 = 11.0 * B;

/// A set of cells of the `side × side` cell torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSet {
    side: u32,
    bits: FixedBitSet,
}

impl CellSet {
    pub fn empty(side: u32) -> Self {
        CellSet {
            side,
            bits: FixedBitSet::with_capacity((side * side) as usize),
        }
    }

    pub fn full(side: u32) -> Self {
        let mut s = Self::empty(side);
        s.bits.insert_range(..);
        s
    }

    pub fn from_cells(side: u32, cells: impl IntoIterator<Item = Cell>) -> Self {
        let mut s = Self::empty(side);
        for c in cells {
            s.insert(c);
        }
        s
    }

    /// Cells of `tess` containing at least one vertex of `vertices`.
    pub fn touching(tess: &Tessellation, vertices: &FixedBitSet) -> Self {
        let mut s = Self::empty(tess.cells_per_axis());
        for v in vertices.ones() {
            s.insert(tess.cell_of(TorusPoint::from_index(v, tess.n())));
        }
        s
    }

    pub fn side(&self) -> u32 {
        self.side
    }

    fn index(&self, c: Cell) -> usize {
        assert!(
            c.i < self.side && c.j < self.side,
            "cell ({}, {}) outside the grid",
            c.i,
            c.j
        );
        (c.j * self.side + c.i) as usize
    }

    fn cell(&self, idx: usize) -> Cell {
        Cell::new(idx as u32 % self.side, idx as u32 / self.side)
    }

    pub fn insert(&mut self, c: Cell) {
        let i = self.index(c);
        self.bits.insert(i);
    }

    pub fn remove(&mut self, c: Cell) {
        let i = self.index(c);
        self.bits.set(i, false);
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.bits.contains(self.index(c))
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Cell> + '_ {
        self.bits.ones().map(|i| self.cell(i))
    }

    pub fn complement(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        CellSet {
            side: self.side,
            bits,
        }
    }
}

fn offsets(metric: Metric) -> &'static [(i64, i64)] {
    match metric {
        Metric::L1 => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
        Metric::LInf => &[
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
        ],
    }
}

fn shift(c: Cell, dx: i64, dy: i64, side: u32) -> Cell {
    let p = TorusPoint::wrap(i64::from(c.i) + dx, i64::from(c.j) + dy, side);
    Cell::new(p.x, p.y)
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub id: usize,
    pub cells: Vec<Cell>,
    /// ℓ∞ diameter in the cell torus.
    pub diameter: u32,
    pub size: usize,
    /// The component lifts to a planar set whose bounding box is narrower
    /// than the torus in both directions.
    pub embeds: bool,
}

/// Largest cyclic distance between two values of a sorted, deduplicated
/// set on a ring of length `n`.
fn ring_diameter(sorted: &[u32], n: u32) -> u32 {
    let mut best = 0;
    for &a in sorted {
        let target = (a + n / 2) % n;
        let pos = sorted.partition_point(|&b| b < target);
        for cand in [pos, pos + sorted.len() - 1] {
            let b = sorted[cand % sorted.len()];
            best = best.max(crate::lattice::axis_distance(a, b, n));
        }
    }
    best
}

/// ℓ∞ torus diameter of a set of cells.
pub fn linf_diameter(cells: &[Cell], side: u32) -> u32 {
    if cells.is_empty() {
        return 0;
    }
    let mut xs: Vec<u32> = cells.iter().map(|c| c.i).collect();
    let mut ys: Vec<u32> = cells.iter().map(|c| c.j).collect();
    xs.sort_unstable();
    xs.dedup();
    ys.sort_unstable();
    ys.dedup();
    ring_diameter(&xs, side).max(ring_diameter(&ys, side))
}

fn embeds(cells: &[Cell], set: &CellSet, metric: Metric) -> bool {
    let side = set.side;
    let mut lift: HashMap<Cell, (i64, i64)> = HashMap::with_capacity(cells.len());
    lift.insert(cells[0], (0, 0));
    let mut queue = VecDeque::from([cells[0]]);
    let (mut lo, mut hi) = ((0i64, 0i64), (0i64, 0i64));
    while let Some(c) = queue.pop_front() {
        let (x, y) = lift[&c];
        for &(dx, dy) in offsets(metric) {
            let d = shift(c, dx, dy, side);
            if !set.contains(d) {
                continue;
            }
            let want = (x + dx, y + dy);
            match lift.get(&d) {
                Some(&got) if got != want => return false,
                Some(_) => {}
                None => {
                    lift.insert(d, want);
                    lo = (lo.0.min(want.0), lo.1.min(want.1));
                    hi = (hi.0.max(want.0), hi.1.max(want.1));
                    queue.push_back(d);
                }
            }
        }
    }
    hi.0 - lo.0 + 1 < i64::from(side) && hi.1 - lo.1 + 1 < i64::from(side)
}

/// Maximal connected components of `set` under the given adjacency, in
/// order of their smallest cell index.
pub fn components(set: &CellSet, metric: Metric) -> Vec<ComponentSummary> {
    let side = set.side;
    let total = (side * side) as usize;
    let mut uf = UnionFind::new(total);
    for c in set.iter() {
        for &(dx, dy) in offsets(metric) {
            let d = shift(c, dx, dy, side);
            if set.contains(d) {
                uf.union(set.index(c), set.index(d));
            }
        }
    }
    let mut by_root: HashMap<usize, usize> = HashMap::new();
    let mut groups: Vec<Vec<Cell>> = Vec::new();
    for idx in set.bits.ones() {
        let root = uf.find(idx);
        let id = *by_root.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[id].push(set.cell(idx));
    }
    groups
        .into_iter()
        .enumerate()
        .map(|(id, cells)| {
            let sub = CellSet::from_cells(side, cells.iter().copied());
            ComponentSummary {
                id,
                diameter: linf_diameter(&cells, side),
                size: cells.len(),
                embeds: embeds(&cells, &sub, metric),
                cells,
            }
        })
        .collect()
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {eps}"
        )));
    }
    Ok(())
}

/// `A / ln(1/ε) · ln(n̂² / j)`
pub fn diameter_bound(eps: f64, side: u32, j: usize) -> f64 {
    let cells = f64::from(side) * f64::from(side);
    A / (1.0 / eps).ln() * (cells / j as f64).ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrefixCheck {
    pub j: usize,
    pub diameter: u32,
    pub bound: f64,
    pub ok: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constants {
    pub a: f64,
    pub b: f64,
    pub b_prime: f64,
}

pub const CONSTANTS: Constants = Constants {
    a: A,
    b: B,
    b_prime: B_PRIME,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UbiquityReport {
    pub side: u32,
    pub epsilon: f64,
    pub size: usize,
    pub connected: bool,
    pub density_ok: bool,
    /// `(1 - Aε) n̂²`
    pub required_size: f64,
    /// Complement ℓ∞-components by decreasing diameter, `D_j` against the
    /// bound for `j`.
    pub prefix_bounds: Vec<PrefixCheck>,
    pub prefix_ok: bool,
    pub max_complement_diameter: u32,
    pub max_diameter_bound: f64,
    pub max_diameter_ok: bool,
    /// Complement components with diameter above `n̂/2`.
    pub large_components: usize,
    pub constants: Constants,
    pub ubiquitous: bool,
}

/// Connectivity, density and the whole-component form of the diameter
/// condition for `z`.
pub fn check_ubiquity(z: &CellSet, eps: f64) -> Result<UbiquityReport> {
    check_eps(eps)?;
    let side = z.side;
    let total = f64::from(side) * f64::from(side);
    let size = z.len();
    let connected = components(z, Metric::L1).len() == 1;
    let required_size = (1.0 - A * eps) * total;
    let density_ok = size as f64 >= required_size;

    let mut diams: Vec<u32> = components(&z.complement(), Metric::LInf)
        .iter()
        .map(|c| c.diameter)
        .collect();
    diams.sort_unstable_by(|a, b| b.cmp(a));
    let prefix_bounds: Vec<PrefixCheck> = diams
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let bound = diameter_bound(eps, side, i + 1);
            PrefixCheck {
                j: i + 1,
                diameter: d,
                bound,
                ok: f64::from(d) <= bound,
            }
        })
        .collect();
    let prefix_ok = prefix_bounds.iter().all(|p| p.ok);
    let max_complement_diameter = diams.first().copied().unwrap_or(0);
    let max_diameter_bound = diameter_bound(eps, side, 1);
    Ok(UbiquityReport {
        side,
        epsilon: eps,
        size,
        connected,
        density_ok,
        required_size,
        prefix_bounds,
        prefix_ok,
        max_complement_diameter,
        max_diameter_bound,
        max_diameter_ok: f64::from(max_complement_diameter) <= max_diameter_bound,
        large_components: diams.iter().filter(|&&d| d > side / 2).count(),
        constants: CONSTANTS,
        ubiquitous: connected && density_ok && prefix_ok,
    })
}

pub const EXACT_MAX_SIDE: u32 = 8;
pub const EXACT_MAX_COMPLEMENT: usize = 20;

/// The full diameter condition over arbitrary collections of disjoint
/// ℓ∞-connected subsets of the complement, by exhaustive search. Limited to
/// `n̂ ≤ 8` and complements of at most 20 cells.
pub fn check_ubiquity_exact(
    z: &CellSet,
    eps: f64,
    bound: impl Fn(f64, u32, usize) -> f64,
) -> Result<bool> {
    check_eps(eps)?;
    let side = z.side;
    let comp: Vec<Cell> = z.complement().iter().collect();
    if side > EXACT_MAX_SIDE || comp.len() > EXACT_MAX_COMPLEMENT {
        return Err(Error::InvalidParameter(format!(
            "exact check needs side <= {EXACT_MAX_SIDE} and at most {EXACT_MAX_COMPLEMENT} complement cells"
        )));
    }
    let s = comp.len();
    if s == 0 {
        return Ok(true);
    }
    let adj: Vec<u32> = (0..s)
        .map(|a| {
            (0..s).fold(0u32, |m, b| {
                let d = linf_diameter(&[comp[a], comp[b]], side);
                if a != b && d <= 1 {
                    m | 1 << b
                } else {
                    m
                }
            })
        })
        .collect();
    let connected = |mask: u32| {
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u32 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj[v] & mask & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == mask
    };
    let diam = |mask: u32| {
        let cells: Vec<Cell> = (0..s)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| comp[i])
            .collect();
        linf_diameter(&cells, side)
    };
    let sets: Vec<(u32, u32)> = (1u32..1 << s)
        .filter(|&m| connected(m))
        .map(|m| (m, diam(m)))
        .collect();
    let diam_of: HashMap<u32, u32> = sets.iter().copied().collect();
    let max_d = sets.iter().map(|&(_, d)| d).max().unwrap_or(0);
    for delta in 1..=max_d {
        // locally minimal connected sets of diameter >= delta
        let minimal: Vec<u32> = sets
            .iter()
            .filter(|&&(m, d)| {
                d >= delta
                    && (0..s).filter(|&i| m >> i & 1 == 1).all(|i| {
                        let rest = m & !(1 << i);
                        rest == 0 || diam_of.get(&rest).is_none_or(|&dr| dr < delta)
                    })
            })
            .map(|&(m, _)| m)
            .collect();
        let full = (1u32 << s) - 1;
        let mut memo = HashMap::new();
        let count = max_packing(full, &minimal, &mut memo);
        if count > 0 && f64::from(delta) > bound(eps, side, count) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn max_packing(avail: u32, sets: &[u32], memo: &mut HashMap<u32, usize>) -> usize {
    if avail == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&avail) {
        return v;
    }
    let low = avail & avail.wrapping_neg();
    let mut best = max_packing(avail & !low, sets, memo);
    for &m in sets {
        if m & low != 0 && m & !avail == 0 {
            best = best.max(1 + max_packing(avail & !m, sets, memo));
        }
    }
    memo.insert(avail, best);
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiameterRow {
    pub d: u32,
    /// Cells in ℓ∞-components of diameter exactly `d`.
    pub n_d: usize,
    /// `Σ_{i ≥ d} N_i`
    pub n_prime_d: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiameterStats {
    pub side: u32,
    pub rows: Vec<DiameterRow>,
}

impl DiameterStats {
    pub fn n(&self, d: u32) -> usize {
        self.rows.get(d as usize).map_or(0, |r| r.n_d)
    }

    pub fn n_prime(&self, d: u32) -> usize {
        self.rows.get(d as usize).map_or(0, |r| r.n_prime_d)
    }

    /// `(B n̂² ε^⌈(d+1)/4⌉, B′ n̂² ε^⌈(d+1)/5⌉)` for every row; for reporting.
    pub fn claim_bounds(&self, eps: f64) -> Vec<(u32, f64, f64)> {
        let cells = f64::from(self.side).powi(2);
        self.rows
            .iter()
            .map(|r| {
                let e4 = eps.powi((r.d + 1).div_ceil(4) as i32);
                let e5 = eps.powi((r.d + 1).div_ceil(5) as i32);
                (r.d, B * cells * e4, B_PRIME * cells * e5)
            })
            .collect()
    }
}

/// `N_d` and `N′_d` over the ℓ∞-components of `set`, for `0 ≤ d ≤ ⌊n̂/2⌋`.
pub fn component_diameter_stats(set: &CellSet) -> DiameterStats {
    let max_d = set.side / 2;
    let mut n_d = vec![0usize; max_d as usize + 1];
    for c in components(set, Metric::LInf) {
        n_d[c.diameter as usize] += c.size;
    }
    let mut rows = Vec::with_capacity(n_d.len());
    let mut acc = 0;
    for d in (0..=max_d).rev() {
        acc += n_d[d as usize];
        rows.push(DiameterRow {
            d,
            n_d: n_d[d as usize],
            n_prime_d: acc,
        });
    }
    rows.reverse();
    DiameterStats {
        side: set.side,
        rows,
    }
}

/// Vertices of the given cells that some matching pairs with a member of
/// `targets`.
fn matched_into(
    g: &AugmentedGraph,
    tess: &Tessellation,
    cells: &[Cell],
    targets: &FixedBitSet,
) -> Vec<usize> {
    let n = tess.n();
    let m = g.matchings();
    let mut out = Vec::new();
    for &c in cells {
        for v in tess.vertices(c) {
            let i = v.index(n);
            if (0..m.r()).any(|j| targets.contains(m.partner(j, i))) {
                out.push(i);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeedStableComponent {
    pub summary: ComponentSummary,
    pub matched_vertices: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeedStableReport {
    pub verdict: Verdict,
    /// Components that must carry four matched vertices.
    pub checked: Vec<NeedStableComponent>,
    /// Components exempt because their diameter exceeds `n̂/2`.
    pub large: usize,
    /// Components of small diameter exempt because they wind around the
    /// torus.
    pub winding: usize,
}

/// For every ℓ∞-component of the cells touching `u_core` that has diameter
/// at most `n̂/2` and embeds in a planar rectangle, at least four of its
/// vertices are matched into `u_core`. `u_core` is taken as given; the
/// caller is responsible for it being the final inactive set.
pub fn check_lemma_needstable(
    g: &AugmentedGraph,
    u_core: &FixedBitSet,
    tess: &Tessellation,
) -> NeedStableReport {
    let mut report = NeedStableReport {
        verdict: Verdict::Pass,
        checked: Vec::new(),
        large: 0,
        winding: 0,
    };
    let (n, k, r, t) = (
        u64::from(g.n()),
        u64::from(g.k()),
        g.r() as u64,
        u64::from(tess.t()),
    );
    if tess.n() != g.n() {
        report.verdict = Verdict::Skipped("tessellation and graph sizes differ".into());
        return report;
    }
    if n % 2 != 0 || !(2 * r < 2 * k + 2 && 2 * k + 2 <= t && 2 * t <= n) {
        report.verdict = Verdict::Skipped(format!(
            "needs even n and 2r < 2k+2 <= t <= n/2, got n={n}, k={k}, r={r}, t={t}"
        ));
        return report;
    }
    let touched = CellSet::touching(tess, u_core);
    let half = tess.cells_per_axis() / 2;
    let mut failures = Vec::new();
    for comp in components(&touched, Metric::LInf) {
        if comp.diameter > half {
            report.large += 1;
            continue;
        }
        if !comp.embeds {
            report.winding += 1;
            continue;
        }
        let matched = matched_into(g, tess, &comp.cells, u_core).len();
        if matched < 4 {
            failures.push(format!(
                "component {} has {matched} matched vertices",
                comp.id
            ));
        }
        report.checked.push(NeedStableComponent {
            summary: comp,
            matched_vertices: matched,
        });
    }
    if !failures.is_empty() {
        report.verdict = Verdict::Fail(failures.join("; "));
    }
    report
}

/// Each of the disjoint ℓ∞-connected cell sets has at least four vertices
/// matched into the union of all of them.
pub fn stable_collections_check(
    g: &AugmentedGraph,
    tess: &Tessellation,
    sets: &[Vec<Cell>],
) -> Result<bool> {
    let side = tess.cells_per_axis();
    let mut union = CellSet::empty(side);
    for (idx, s) in sets.iter().enumerate() {
        for &c in s {
            if union.contains(c) {
                return Err(Error::InvalidParameter(format!(
                    "cell ({}, {}) appears in two sets",
                    c.i, c.j
                )));
            }
            union.insert(c);
        }
        let own = CellSet::from_cells(side, s.iter().copied());
        if components(&own, Metric::LInf).len() != 1 {
            return Err(Error::InvalidParameter(format!(
                "set {idx} is empty or not l-infinity connected"
            )));
        }
    }
    let n = tess.n();
    let mut targets = FixedBitSet::with_capacity(n as usize * n as usize);
    for c in union.iter() {
        for v in tess.vertices(c) {
            targets.insert(v.index(n));
        }
    }
    Ok(sets
        .iter()
        .all(|s| matched_into(g, tess, s, &targets).len() >= 4))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn component_examples() {
        let full = CellSet::full(5);
        let c = components(&full, Metric::L1);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].size, 25);
        assert!(!c[0].embeds);
        let diag = CellSet::from_cells(6, [Cell::new(1, 1), Cell::new(2, 2)]);
        assert_eq!(components(&diag, Metric::LInf).len(), 1);
        assert_eq!(components(&diag, Metric::L1).len(), 2);
        assert!(components(&CellSet::empty(4), Metric::L1).is_empty());
    }

    #[test]
    fn components_wrap_around() {
        let s = CellSet::from_cells(6, [Cell::new(0, 3), Cell::new(5, 3)]);
        let c = components(&s, Metric::L1);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].diameter, 1);
        assert!(c[0].embeds);
        let band = CellSet::from_cells(6, (0..6).map(|j| Cell::new(2, j)));
        let c = components(&band, Metric::LInf);
        assert_eq!(c[0].diameter, 3);
        assert!(!c[0].embeds);
    }

    #[test]
    fn diameter_matches_pairwise() {
        let side = 9;
        let cells = [
            Cell::new(0, 0),
            Cell::new(8, 1),
            Cell::new(4, 2),
            Cell::new(6, 7),
        ];
        let mut best = 0;
        for a in &cells {
            for b in &cells {
                let d = crate::lattice::axis_distance(a.i, b.i, side)
                    .max(crate::lattice::axis_distance(a.j, b.j, side));
                best = best.max(d);
            }
        }
        assert_eq!(linf_diameter(&cells, side), best);
    }

    #[test]
    fn ubiquity_examples() {
        let full = CellSet::full(10);
        for eps in [1e-12, 1e-3, 0.5] {
            let r = check_ubiquity(&full, eps).unwrap();
            assert!(r.ubiquitous && r.prefix_bounds.is_empty());
        }
        let mut z = CellSet::full(10);
        z.remove(Cell::new(3, 3));
        let eps_ok = 1.0 / (A * 100.0);
        let r = check_ubiquity(&z, eps_ok).unwrap();
        assert!(r.density_ok && r.prefix_ok);
        let r = check_ubiquity(&z, eps_ok * 0.999).unwrap();
        assert!(!r.density_ok);
        assert!(check_ubiquity(&z, 1.0).is_err());
        assert!(check_ubiquity(&z, 0.0).is_err());
    }

    #[test]
    fn exact_check_agrees_on_small_cases() {
        // a tight bound so both outcomes occur
        let bound = |_: f64, side: u32, j: usize| (f64::from(side * side) / j as f64).ln() / 2.0;
        let mut z = CellSet::full(6);
        for c in [Cell::new(0, 0), Cell::new(1, 0), Cell::new(2, 0)] {
            z.remove(c);
        }
        // one component of diameter 2 against ln(36)/2 = 1.79
        assert!(!check_ubiquity_exact(&z, 0.1, bound).unwrap());
        let mut z = CellSet::full(6);
        z.remove(Cell::new(2, 2));
        z.remove(Cell::new(4, 4));
        assert!(check_ubiquity_exact(&z, 0.1, bound).unwrap());
        assert!(check_ubiquity_exact(&CellSet::full(9), 0.1, diameter_bound).is_err());
    }

    #[test]
    fn stats_examples() {
        let empty = component_diameter_stats(&CellSet::empty(8));
        assert!(empty.rows.iter().all(|r| r.n_d == 0 && r.n_prime_d == 0));
        let three = CellSet::from_cells(8, [Cell::new(0, 0), Cell::new(3, 3), Cell::new(6, 0)]);
        let s = component_diameter_stats(&three);
        assert_eq!((s.n(0), s.n_prime(0), s.n_prime(1)), (3, 3, 0));
        let domino = CellSet::from_cells(8, [Cell::new(2, 2), Cell::new(3, 2)]);
        assert_eq!(component_diameter_stats(&domino).n(1), 2);
    }
}
