//! Torus geometry: the lattice families `L(n,k)`, `L1(n)` and `L∞(n)`, the
//! torus metrics, and the `t`-tessellation of `[n]²` into cells.
//!
//! Vertices are stored densely as `y * n + x`. [`TorusPoint`] is the
//! coordinate view used at API boundaries.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::{Error, Result};

/// A vertex of the `n × n` torus, always stored in canonical form
/// (`0 ≤ x, y < n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusPoint {
    pub x: u32,
    pub y: u32,
}

impl TorusPoint {
    /// Reduces arbitrary integer coordinates modulo `n`.
    pub fn wrap(x: i64, y: i64, n: u32) -> Self {
        let n = i64::from(n);
        TorusPoint {
            x: x.rem_euclid(n) as u32,
            y: y.rem_euclid(n) as u32,
        }
    }

    pub fn index(self, n: u32) -> usize {
        self.y as usize * n as usize + self.x as usize
    }

    pub fn from_index(idx: usize, n: u32) -> Self {
        let n = n as usize;
        TorusPoint {
            x: (idx % n) as u32,
            y: (idx / n) as u32,
        }
    }

    pub fn offset(self, dx: i64, dy: i64, n: u32) -> Self {
        TorusPoint::wrap(i64::from(self.x) + dx, i64::from(self.y) + dy, n)
    }
}

/// The torus metrics. `L1` is graph distance in `L1(n)`, `LInf` in `L∞(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    L1,
    LInf,
}

/// Cyclic distance between two coordinates on a ring of length `n`.
#[inline]
pub fn axis_distance(a: u32, b: u32, n: u32) -> u32 {
    let d = a.abs_diff(b);
    d.min(n - d)
}

pub fn torus_distance(u: TorusPoint, v: TorusPoint, metric: Metric, n: u32) -> u32 {
    let dx = axis_distance(u.x, v.x, n);
    let dy = axis_distance(u.y, v.y, n);
    match metric {
        Metric::L1 => dx + dy,
        Metric::LInf => dx.max(dy),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `L(n,k)`: `(x,y) ~ (x,y) + w` for `w ∈ {-k..k} × {-1,1}`.
    Stencil { k: u32 },
    /// The square lattice.
    L1,
    /// The square lattice with diagonals.
    LInf,
}

/// One of the implicit torus graphs. Immutable once built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    n: u32,
    family: Family,
}

impl Lattice {
    /// `L(n,k)`. Fails when `2k + 1 > n`, where neighbourhoods would wrap.
    pub fn stencil(n: u32, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if 2 * u64::from(k) + 1 > u64::from(n) {
            return Err(Error::WrappedNeighbourhood { n, k });
        }
        Ok(Lattice {
            n,
            family: Family::Stencil { k },
        })
    }

    pub fn l1(n: u32) -> Result<Self> {
        Self::small_family(n, Family::L1)
    }

    pub fn linf(n: u32) -> Result<Self> {
        Self::small_family(n, Family::LInf)
    }

    fn small_family(n: u32, family: Family) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "torus side must be at least 3, got {n}"
            )));
        }
        Ok(Lattice { n, family })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Horizontal reach `k` for `L(n,k)`, `None` for the other families.
    pub fn reach(&self) -> Option<u32> {
        match self.family {
            Family::Stencil { k } => Some(k),
            _ => None,
        }
    }

    pub fn lattice_degree(&self) -> usize {
        match self.family {
            Family::Stencil { k } => 4 * k as usize + 2,
            Family::L1 => 4,
            Family::LInf => 8,
        }
    }

    pub fn neighbours(&self, v: TorusPoint) -> Vec<TorusPoint> {
        let mut out = Vec::with_capacity(self.lattice_degree());
        self.for_each_offset(|dx, dy| out.push(v.offset(dx, dy, self.n)));
        out
    }

    #[inline]
    fn for_each_offset(&self, mut f: impl FnMut(i64, i64)) {
        match self.family {
            Family::Stencil { k } => {
                let k = i64::from(k);
                for dy in [-1, 1] {
                    for dx in -k..=k {
                        f(dx, dy);
                    }
                }
            }
            Family::L1 => {
                for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    f(dx, dy);
                }
            }
            Family::LInf => {
                for dy in -1..=1 {
                    for dx in -1..=1 {
                        if dx != 0 || dy != 0 {
                            f(dx, dy);
                        }
                    }
                }
            }
        }
    }

    /// Whether `u` and `v` are adjacent in this lattice.
    pub fn is_edge(&self, u: TorusPoint, v: TorusPoint) -> bool {
        let n = self.n;
        let dx = axis_distance(u.x, v.x, n);
        let dy = axis_distance(u.y, v.y, n);
        match self.family {
            Family::Stencil { k } => dy == 1 && dx <= k,
            Family::L1 => dx + dy == 1,
            Family::LInf => dx.max(dy) == 1,
        }
    }

    /// Active-neighbour counts for `L(n,k)` via cyclic sliding windows over
    /// each row, `O(n²)` regardless of `k`.
    fn stencil_counts(&self, k: u32, active: &fixedbitset::FixedBitSet) -> Vec<u32> {
        let n = self.n as usize;
        let k = k as usize;
        let mut window = vec![0u32; n * n];
        for y in 0..n {
            let row = y * n;
            let mut sum: u32 = 0;
            // window centred on x = 0 covers columns n-k..n and 0..=k
            for dx in 0..=k {
                sum += active.contains(row + dx) as u32;
            }
            for dx in 1..=k {
                sum += active.contains(row + n - dx) as u32;
            }
            window[row] = sum;
            for x in 1..n {
                let enter = (x + k) % n;
                let leave = (x + n - k - 1) % n;
                sum += active.contains(row + enter) as u32;
                sum -= active.contains(row + leave) as u32;
                window[row + x] = sum;
            }
        }
        let mut counts = vec![0u32; n * n];
        for y in 0..n {
            let above = ((y + 1) % n) * n;
            let below = ((y + n - 1) % n) * n;
            let row = y * n;
            for x in 0..n {
                counts[row + x] = window[above + x] + window[below + x];
            }
        }
        counts
    }
}

impl Graph for Lattice {
    fn num_vertices(&self) -> usize {
        self.n as usize * self.n as usize
    }

    fn degree(&self, _v: usize) -> usize {
        self.lattice_degree()
    }

    #[inline]
    fn for_each_neighbour(&self, v: usize, mut f: impl FnMut(usize)) {
        let n = self.n as usize;
        let (x, y) = (v % n, v / n);
        match self.family {
            Family::Stencil { k } => {
                let k = k as usize;
                for ny in [(y + n - 1) % n, (y + 1) % n] {
                    let row = ny * n;
                    for dx in 0..=2 * k {
                        f(row + (x + n - k + dx) % n);
                    }
                }
            }
            _ => {
                let p = TorusPoint::from_index(v, self.n);
                self.for_each_offset(|dx, dy| f(p.offset(dx, dy, self.n).index(self.n)));
            }
        }
    }

    fn regular_degree(&self) -> Option<usize> {
        Some(self.lattice_degree())
    }

    fn active_neighbour_counts(&self, active: &fixedbitset::FixedBitSet) -> Vec<u32> {
        match self.family {
            Family::Stencil { k } => self.stencil_counts(k, active),
            _ => crate::graph::count_by_iteration(self, active),
        }
    }
}

/// Cell coordinates `(i, j)` in the `n̂ × n̂` cell grid; `i` indexes columns
/// (x), `j` rows (y).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub i: u32,
    pub j: u32,
}

impl Cell {
    pub fn new(i: u32, j: u32) -> Self {
        Cell { i, j }
    }
}

/// The `t`-tessellation `T(n,t)`: boundaries `a_i = i·t` for `i < n̂` and
/// `a_n̂ = n`, so the last row and column of cells absorb the remainder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tessellation {
    n: u32,
    t: u32,
    bounds: Vec<u32>,
}

pub fn tessellate(n: u32, t: u32) -> Result<Tessellation> {
    if t == 0 || t > n {
        return Err(Error::InvalidParameter(format!(
            "tessellation needs 1 <= t <= n, got t={t}, n={n}"
        )));
    }
    let cells = n / t;
    let mut bounds: Vec<u32> = (0..cells).map(|i| i * t).collect();
    bounds.push(n);
    Ok(Tessellation { n, t, bounds })
}

impl Tessellation {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// `n̂ = ⌊n/t⌋`, the number of cells per axis.
    pub fn cells_per_axis(&self) -> u32 {
        self.bounds.len() as u32 - 1
    }

    pub fn num_cells(&self) -> usize {
        let c = self.cells_per_axis() as usize;
        c * c
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    /// Coordinate range covered by cell index `i` along one axis.
    pub fn span(&self, i: u32) -> Range<u32> {
        self.bounds[i as usize]..self.bounds[i as usize + 1]
    }

    fn axis_cell(&self, coord: u32) -> u32 {
        let last = self.cells_per_axis() - 1;
        (coord / self.t).min(last)
    }

    pub fn cell_of(&self, v: TorusPoint) -> Cell {
        Cell {
            i: self.axis_cell(v.x),
            j: self.axis_cell(v.y),
        }
    }

    pub fn cell_index(&self, c: Cell) -> usize {
        c.j as usize * self.cells_per_axis() as usize + c.i as usize
    }

    pub fn cell_from_index(&self, idx: usize) -> Cell {
        let m = self.cells_per_axis() as usize;
        Cell {
            i: (idx % m) as u32,
            j: (idx / m) as u32,
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.num_cells()).map(|idx| self.cell_from_index(idx))
    }

    pub fn vertices(&self, c: Cell) -> impl Iterator<Item = TorusPoint> {
        let xs = self.span(c.i);
        let ys = self.span(c.j);
        ys.flat_map(move |y| xs.clone().map(move |x| TorusPoint { x, y }))
    }

    pub fn cell_size(&self, c: Cell) -> usize {
        self.span(c.i).len() * self.span(c.j).len()
    }

    /// Distance between cells in the cell-grid torus `[n̂]²`.
    pub fn cell_distance(&self, a: Cell, b: Cell, metric: Metric) -> u32 {
        let m = self.cells_per_axis();
        torus_distance(
            TorusPoint { x: a.i, y: a.j },
            TorusPoint { x: b.i, y: b.j },
            metric,
            m,
        )
    }

    /// Torus ℓ1 distance from a vertex to the nearest vertex of a cell.
    pub fn vertex_cell_distance(&self, v: TorusPoint, c: Cell) -> u32 {
        span_distance(v.x, self.span(c.i), self.n) + span_distance(v.y, self.span(c.j), self.n)
    }
}

/// Cyclic distance from `coord` to the nearest point of `span`.
pub(crate) fn span_distance(coord: u32, span: Range<u32>, n: u32) -> u32 {
    if span.contains(&coord) {
        return 0;
    }
    axis_distance(coord, span.start, n).min(axis_distance(coord, span.end - 1, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn pt(x: u32, y: u32) -> TorusPoint {
        TorusPoint { x, y }
    }

    #[test]
    fn stencil_neighbours_of_origin() {
        let lat = Lattice::stencil(10, 2).unwrap();
        let got: BTreeSet<_> = lat.neighbours(pt(0, 0)).into_iter().collect();
        let mut want = BTreeSet::new();
        for i in -2i64..=2 {
            want.insert(TorusPoint::wrap(i, 1, 10));
            want.insert(TorusPoint::wrap(i, 9, 10));
        }
        assert_eq!(got, want);
        assert_eq!(got.len(), 10);
    }

    #[test]
    fn l1_and_linf_neighbours() {
        let l1 = Lattice::l1(5).unwrap();
        let got: BTreeSet<_> = l1.neighbours(pt(0, 0)).into_iter().collect();
        let want: BTreeSet<_> = [pt(1, 0), pt(4, 0), pt(0, 1), pt(0, 4)]
            .into_iter()
            .collect();
        assert_eq!(got, want);
        let linf = Lattice::linf(3).unwrap();
        let got: BTreeSet<_> = linf.neighbours(pt(1, 1)).into_iter().collect();
        assert_eq!(got.len(), 8);
    }

    #[test]
    fn wrapped_neighbourhood_is_rejected() {
        assert!(matches!(
            Lattice::stencil(4, 2),
            Err(Error::WrappedNeighbourhood { n: 4, k: 2 })
        ));
        assert!(Lattice::stencil(5, 2).is_ok());
    }

    #[test]
    fn distances() {
        assert_eq!(torus_distance(pt(0, 0), pt(3, 4), Metric::L1, 10), 7);
        assert_eq!(torus_distance(pt(0, 0), pt(9, 0), Metric::L1, 10), 1);
        assert_eq!(torus_distance(pt(0, 0), pt(3, 4), Metric::LInf, 10), 4);
    }

    #[test]
    fn tessellation_with_remainder() {
        let tess = tessellate(10, 3).unwrap();
        assert_eq!(tess.cells_per_axis(), 3);
        assert_eq!(tess.bounds(), &[0, 3, 6, 10]);
        assert_eq!(tess.span(2), 6..10);
        assert_eq!(tess.cell_of(pt(0, 0)), Cell::new(0, 0));
        assert_eq!(tess.cell_of(pt(9, 9)), Cell::new(2, 2));
        for i in 0..3 {
            let len = tess.span(i).len() as u32;
            assert!((3..6).contains(&len));
        }
        let even = tessellate(9, 3).unwrap();
        assert!(even.cells().all(|c| even.cell_size(c) == 9));
        assert!(tessellate(10, 11).is_err());
        assert!(tessellate(10, 0).is_err());
    }

    #[test]
    fn cells_partition_the_torus() {
        for (n, t) in [(10, 3), (17, 4), (12, 12), (7, 1)] {
            let tess = tessellate(n, t).unwrap();
            let mut seen = vec![0u8; (n * n) as usize];
            for c in tess.cells() {
                for v in tess.vertices(c) {
                    assert_eq!(tess.cell_of(v), c);
                    seen[v.index(n)] += 1;
                }
            }
            assert!(seen.iter().all(|&s| s == 1));
            assert_eq!(tess.num_cells(), ((n / t) * (n / t)) as usize);
        }
    }

    #[test]
    fn adjacent_vertices_lie_in_nearby_cells() {
        // 2k + 2 <= t keeps every stencil edge within cell-ℓ∞ distance 1
        let (n, k, t) = (40, 3, 8);
        let lat = Lattice::stencil(n, k).unwrap();
        let tess = tessellate(n, t).unwrap();
        for idx in 0..(n * n) as usize {
            let v = TorusPoint::from_index(idx, n);
            for u in lat.neighbours(v) {
                let d = tess.cell_distance(tess.cell_of(u), tess.cell_of(v), Metric::LInf);
                assert!(d <= 1);
            }
        }
    }

    #[test]
    fn sliding_counts_match_iteration() {
        let lat = Lattice::stencil(11, 3).unwrap();
        let mut active = fixedbitset::FixedBitSet::with_capacity(121);
        for v in (0..121).filter(|v| v % 3 == 0 || v % 7 == 1) {
            active.insert(v);
        }
        assert_eq!(
            lat.active_neighbour_counts(&active),
            crate::graph::count_by_iteration(&lat, &active)
        );
    }

    #[test]
    fn vertex_cell_distance_wraps() {
        let tess = tessellate(12, 4).unwrap();
        assert_eq!(tess.vertex_cell_distance(pt(11, 0), Cell::new(0, 0)), 1);
        assert_eq!(tess.vertex_cell_distance(pt(2, 2), Cell::new(0, 0)), 0);
        assert_eq!(tess.vertex_cell_distance(pt(6, 6), Cell::new(0, 0)), 6);
    }
}
