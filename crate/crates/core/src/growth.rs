//! Deterministic growth: the shapes `S^k_m(a,b)`, `m`-good vertices, good and
//! seed cells of a tessellation, goodness-forcing configurations, and
//! executable checks of the one-step growth lemma and of cell-level growth.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::engine::{run_to_fixpoint, ActivationState, Rule};
use crate::lattice::{tessellate, Cell, Lattice, Metric, Tessellation, TorusPoint};
use crate::{Error, Result};

/// Parameters of the `m`-goodness predicate and the `r`-majority rule it is
/// paired with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GoodnessParams {
    pub k: u32,
    pub m: u32,
    pub r: u32,
}

impl GoodnessParams {
    pub fn new(k: u32, m: u32, r: u32) -> Result<Self> {
        if m == 0 || m > k {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= m <= k, got m={m}, k={k}"
            )));
        }
        Ok(GoodnessParams { k, m, r })
    }

    /// `⌈k/m⌉`
    pub fn step(&self) -> u32 {
        self.k.div_ceil(self.m)
    }

    /// Active vertices required in each of the four segments, `2⌈k/m⌉`.
    pub fn quota(&self) -> u32 {
        2 * self.step()
    }

    /// Whether goodness can hold at all, i.e. the quota fits in a segment.
    pub fn satisfiable(&self) -> bool {
        self.quota() <= self.k
    }

    /// Hypotheses shared by the growth statements: `1 ≤ m < k` and
    /// `r ≤ ⌈k/m⌉`.
    pub fn growth_preconditions(&self) -> std::result::Result<(), String> {
        if !(1 <= self.m && self.m < self.k) {
            return Err(format!("need 1 <= m < k, got m={}, k={}", self.m, self.k));
        }
        if self.r > self.step() {
            return Err(format!(
                "need r <= ceil(k/m) = {}, got r={}",
                self.step(),
                self.r
            ));
        }
        if !self.satisfiable() {
            return Err(format!(
                "goodness quota 2*ceil(k/m) = {} exceeds the segment length k = {}",
                self.quota(),
                self.k
            ));
        }
        Ok(())
    }

    /// `32 m k²`, the goodness radius of a cell.
    pub fn cell_radius(&self) -> u64 {
        32 * u64::from(self.m) * u64::from(self.k).pow(2)
    }
}

/// Half-widths `x_0, …, x_{m+a+1}` of `S^k_m(a,b)`; row `-i` mirrors row `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeRows {
    half_widths: Vec<u64>,
}

impl ShapeRows {
    /// `m + a + 1`
    pub fn height(&self) -> u64 {
        self.half_widths.len() as u64 - 1
    }

    /// `x_i` for `|i| ≤ m+a+1`, `None` outside the shape.
    pub fn half_width(&self, i: i64) -> Option<u64> {
        self.half_widths.get(i.unsigned_abs() as usize).copied()
    }

    pub fn nonnegative(&self) -> &[u64] {
        &self.half_widths
    }

    /// `Σ_{|i|≤m+a+1} (2x_i + 1)`
    pub fn point_count(&self) -> u64 {
        let row = |x: u64| 2 * x + 1;
        row(self.half_widths[0]) + 2 * self.half_widths[1..].iter().map(|&x| row(x)).sum::<u64>()
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        self.half_width(y).is_some_and(|w| x.unsigned_abs() <= w)
    }

    /// Every point of `self` is a point of `other`.
    pub fn is_subset(&self, other: &ShapeRows) -> bool {
        self.half_widths
            .iter()
            .enumerate()
            .all(|(i, &w)| other.half_widths.get(i).is_some_and(|&v| w <= v))
    }
}

pub fn shape_rows(k: u32, m: u32, a: u32, b: u32) -> Result<ShapeRows> {
    if m == 0 || m > k {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= m <= k, got m={m}, k={k}"
        )));
    }
    let (k, m, a) = (u64::from(k), u64::from(m), u64::from(a));
    let step = k.div_ceil(m);
    let top = m + a + 1;
    let mut xs = vec![0u64; top as usize + 1];
    xs[top as usize] = u64::from(b);
    for i in (0..top).rev() {
        let inc = if i >= m { k } else { i * step };
        xs[i as usize] = xs[i as usize + 1] + inc;
    }
    Ok(ShapeRows { half_widths: xs })
}

/// A translate of `S^k_m(a,b)` centred at `center`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeSpec {
    pub k: u32,
    pub m: u32,
    pub a: u32,
    pub b: u32,
    pub center: TorusPoint,
}

impl ShapeSpec {
    pub fn rows(&self) -> Result<ShapeRows> {
        shape_rows(self.k, self.m, self.a, self.b)
    }
}

/// Points of `S^k_m(a,b)` in `Z²`, row by row from the bottom.
pub fn shape_points_z2(rows: &ShapeRows) -> Vec<(i64, i64)> {
    let h = rows.height() as i64;
    let mut out = Vec::with_capacity(rows.point_count() as usize);
    for y in -h..=h {
        let w = rows.half_width(y).unwrap() as i64;
        out.extend((-w..=w).map(|x| (x, y)));
    }
    out
}

/// The translated shape on the `n × n` torus. Errors if the projection is
/// not injective.
pub fn shape_points(spec: &ShapeSpec, n: u32) -> Result<Vec<TorusPoint>> {
    let rows = spec.rows()?;
    let width = 2 * rows.nonnegative()[0] + 1;
    let height = 2 * rows.height() + 1;
    if width > u64::from(n) || height > u64::from(n) {
        return Err(Error::ShapeOverlap(format!(
            "{width} x {height} bounding box does not fit a torus of side {n}"
        )));
    }
    let (cx, cy) = (i64::from(spec.center.x), i64::from(spec.center.y));
    Ok(shape_points_z2(&rows)
        .into_iter()
        .map(|(x, y)| TorusPoint::wrap(cx + x, cy + y, n))
        .collect())
}

pub fn plant_shape(state: &mut ActivationState, spec: &ShapeSpec, n: u32) -> Result<()> {
    for p in shape_points(spec, n)? {
        state.activate(p.index(n));
    }
    Ok(())
}

fn check_torus(n: u32, k: u32) -> Result<()> {
    if 2 * u64::from(k) + 1 > u64::from(n) {
        return Err(Error::WrappedNeighbourhood { n, k });
    }
    Ok(())
}

fn count_segment(state: &ActivationState, n: u32, x0: i64, y: i64, len: u32) -> u32 {
    (0..i64::from(len))
        .filter(|d| state.is_active(TorusPoint::wrap(x0 + d, y, n).index(n)))
        .count() as u32
}

/// Each of `v ± {1..k} × {±1}` holds at least `2⌈k/m⌉` active vertices.
pub fn is_m_good(v: TorusPoint, state: &ActivationState, params: GoodnessParams, n: u32) -> bool {
    let k = params.k;
    let quota = params.quota();
    let (x, y) = (i64::from(v.x), i64::from(v.y));
    let k64 = i64::from(k);
    [
        (x + 1, y + 1),
        (x + 1, y - 1),
        (x - k64, y + 1),
        (x - k64, y - 1),
    ]
    .into_iter()
    .all(|(x0, yy)| count_segment(state, n, x0, yy, k) >= quota)
}

/// Goodness of every vertex, computed with cyclic prefix sums per row.
pub fn good_map(state: &ActivationState, params: GoodnessParams, n: u32) -> Result<FixedBitSet> {
    check_torus(n, params.k)?;
    let nu = n as usize;
    let k = params.k as usize;
    let quota = params.quota();
    // prefix[y][x'] = active count in row y over columns [0, x') of the doubled row
    let prefix: Vec<Vec<u32>> = (0..nu)
        .map(|y| {
            let mut p = Vec::with_capacity(2 * nu + 1);
            p.push(0u32);
            for x in 0..2 * nu {
                let last = *p.last().unwrap();
                p.push(last + u32::from(state.is_active(y * nu + x % nu)));
            }
            p
        })
        .collect();
    // active count in row y over the cyclic window starting at `start` of length k
    let window = |y: usize, start: usize| prefix[y][start + k] - prefix[y][start];
    let mut good = FixedBitSet::with_capacity(nu * nu);
    for y in 0..nu {
        let up = (y + 1) % nu;
        let down = (y + nu - 1) % nu;
        for x in 0..nu {
            let right = x + 1;
            let left = x + nu - k;
            if window(up, right) >= quota
                && window(down, right) >= quota
                && window(up, left) >= quota
                && window(down, left) >= quota
            {
                good.insert(y * nu + x);
            }
        }
    }
    Ok(good)
}

/// Visits every vertex within torus ℓ1 distance `radius` of cell `c`, each
/// exactly once, stopping early when `f` returns `false`.
fn visit_neighbourhood(
    tess: &Tessellation,
    c: Cell,
    radius: u64,
    mut f: impl FnMut(TorusPoint) -> bool,
) -> bool {
    let n = tess.n();
    let n64 = u64::from(n);
    let xs = tess.span(c.i);
    let ys = tess.span(c.j);
    let rows_below = radius.min(n64);
    let mut seen_rows = FixedBitSet::with_capacity(n as usize);
    let y_lo = i64::from(ys.start) - rows_below as i64;
    let y_hi = i64::from(ys.end - 1) + rows_below as i64;
    for yy in y_lo..=y_hi {
        let y = yy.rem_euclid(i64::from(n)) as u32;
        if seen_rows.contains(y as usize) {
            continue;
        }
        // the smallest vertical offset of this row from the cell span
        let dy = crate::lattice::span_distance(y, ys.clone(), n);
        if u64::from(dy) > radius {
            continue;
        }
        seen_rows.insert(y as usize);
        let reach = radius - u64::from(dy);
        let width = xs.len() as u64 + 2 * reach;
        if width >= n64 {
            for x in 0..n {
                if !f(TorusPoint { x, y }) {
                    return false;
                }
            }
        } else {
            let x0 = i64::from(xs.start) - reach as i64;
            for d in 0..width as i64 {
                if !f(TorusPoint::wrap(x0 + d, i64::from(y), n)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every vertex inside or within ℓ1 distance `32mk²` of `c` is good or
/// active. Reads only vertices within `32mk² + k + 1` of `c`.
pub fn is_good_cell(
    c: Cell,
    state: &ActivationState,
    params: GoodnessParams,
    tess: &Tessellation,
) -> bool {
    let n = tess.n();
    visit_neighbourhood(tess, c, params.cell_radius(), |v| {
        state.is_active(v.index(n)) || is_m_good(v, state, params, n)
    })
}

/// [`is_good_cell`] against a precomputed [`good_map`].
pub fn is_good_cell_with(
    c: Cell,
    state: &ActivationState,
    good: &FixedBitSet,
    params: GoodnessParams,
    tess: &Tessellation,
) -> bool {
    let n = tess.n();
    visit_neighbourhood(tess, c, params.cell_radius(), |v| {
        let i = v.index(n);
        state.is_active(i) || good.contains(i)
    })
}

/// Goodness of every cell, indexed by [`Tessellation::cell_index`].
pub fn good_cells(
    state: &ActivationState,
    params: GoodnessParams,
    tess: &Tessellation,
) -> Result<FixedBitSet> {
    let good = good_map(state, params, tess.n())?;
    let mut out = FixedBitSet::with_capacity(tess.num_cells());
    for c in tess.cells() {
        if is_good_cell_with(c, state, &good, params, tess) {
            out.insert(tess.cell_index(c));
        }
    }
    Ok(out)
}

/// Some translate of `S^k_m(0,0)` lies inside `c` and is fully active.
pub fn is_seed_cell(
    c: Cell,
    state: &ActivationState,
    k: u32,
    m: u32,
    tess: &Tessellation,
) -> Result<bool> {
    Ok(find_seed(c, state, k, m, tess)?.is_some())
}

/// Centre of the first fully active in-cell translate of `S^k_m(0,0)`, in
/// row-major order of centres.
pub fn find_seed(
    c: Cell,
    state: &ActivationState,
    k: u32,
    m: u32,
    tess: &Tessellation,
) -> Result<Option<TorusPoint>> {
    let rows = shape_rows(k, m, 0, 0)?;
    let n = tess.n() as usize;
    let xs = tess.span(c.i);
    let ys = tess.span(c.j);
    let (w, h) = (xs.len(), ys.len());
    let hw = rows.nonnegative()[0] as usize;
    let hh = rows.height() as usize;
    if 2 * hw + 1 > w || 2 * hh + 1 > h {
        return Ok(None);
    }
    // run lengths of active vertices to the left and right, within the cell
    let mut left = vec![0u32; w * h];
    let mut right = vec![0u32; w * h];
    for ly in 0..h {
        let y = ys.start as usize + ly;
        let active = |lx: usize| state.is_active(y * n + xs.start as usize + lx);
        for lx in 0..w {
            left[ly * w + lx] = if active(lx) {
                1 + if lx > 0 { left[ly * w + lx - 1] } else { 0 }
            } else {
                0
            };
        }
        for lx in (0..w).rev() {
            right[ly * w + lx] = if active(lx) {
                1 + if lx + 1 < w {
                    right[ly * w + lx + 1]
                } else {
                    0
                }
            } else {
                0
            };
        }
    }
    for cy in hh..h - hh {
        for cx in hw..w - hw {
            let fits = (-(hh as i64)..=hh as i64).all(|i| {
                let need = rows.half_width(i).unwrap() as u32 + 1;
                let idx = (cy as i64 + i) as usize * w + cx;
                left[idx] >= need && right[idx] >= need
            });
            if fits {
                return Ok(Some(TorusPoint {
                    x: xs.start + cx as u32,
                    y: ys.start + cy as u32,
                }));
            }
        }
    }
    Ok(None)
}

/// Explicit configurations that make every vertex `m`-good.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ForcingPattern {
    /// Every `s`-th column, `s = max(1, ⌊k / 2⌈k/m⌉⌋)`.
    Columns,
    /// Columns with `x mod k < 2⌈k/m⌉`.
    Blocks,
}

impl ForcingPattern {
    pub const ALL: [ForcingPattern; 2] = [ForcingPattern::Columns, ForcingPattern::Blocks];

    pub fn name(self) -> &'static str {
        match self {
            ForcingPattern::Columns => "columns",
            ForcingPattern::Blocks => "blocks",
        }
    }

    /// Horizontal period; the pattern is consistent on tori whose side is a
    /// multiple of it.
    pub fn period(self, params: GoodnessParams) -> u32 {
        match self {
            ForcingPattern::Columns => (params.k / params.quota()).max(1),
            ForcingPattern::Blocks => params.k,
        }
    }

    pub fn column_active(self, x: u32, params: GoodnessParams) -> bool {
        match self {
            ForcingPattern::Columns => x.is_multiple_of(self.period(params)),
            ForcingPattern::Blocks => x % params.k < params.quota(),
        }
    }

    pub fn state(self, params: GoodnessParams, n: u32) -> Result<ActivationState> {
        if !n.is_multiple_of(self.period(params)) {
            return Err(Error::InvalidParameter(format!(
                "torus side {n} is not a multiple of the pattern period {}",
                self.period(params)
            )));
        }
        let nu = n as usize;
        let cols: Vec<usize> = (0..n)
            .filter(|&x| self.column_active(x, params))
            .map(|x| x as usize)
            .collect();
        Ok(ActivationState::from_active(
            nu * nu,
            (0..nu).flat_map(|y| cols.iter().map(move |&x| y * nu + x)),
        ))
    }
}

/// Outcome of an executable check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail(String),
    /// Hypotheses not met; nothing was asserted.
    Skipped(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub k: u32,
    pub m: u32,
    pub a: u32,
    pub b: u32,
    pub r: u32,
    pub pattern: ForcingPattern,
    pub n: u32,
    pub verdict: Verdict,
    pub rounds: u32,
    /// The forcing pattern alone, without the planted shape, already
    /// activates the target.
    pub pattern_alone_suffices: bool,
}

fn round_up(x: u64, to: u64) -> u64 {
    x.div_ceil(to) * to
}

/// Plants an active `S^k_m(a,b)` on top of a forcing pattern, runs the
/// `r`-majority process on `L(n,k)` and checks that `S^k_m(a+1,b)` ends up
/// active.
pub fn verify_lemma_growcloud(
    k: u32,
    m: u32,
    a: u32,
    b: u32,
    r: u32,
    pattern: ForcingPattern,
) -> GrowthReport {
    let mut report = GrowthReport {
        k,
        m,
        a,
        b,
        r,
        pattern,
        n: 0,
        verdict: Verdict::Pass,
        rounds: 0,
        pattern_alone_suffices: false,
    };
    let params = GoodnessParams { k, m, r };
    if let Err(why) = params.growth_preconditions() {
        report.verdict = Verdict::Skipped(why);
        return report;
    }
    match growcloud_inner(params, a, b, pattern, &mut report) {
        Ok(v) => report.verdict = v,
        Err(e) => report.verdict = Verdict::Fail(e.to_string()),
    }
    report
}

fn growcloud_inner(
    params: GoodnessParams,
    a: u32,
    b: u32,
    pattern: ForcingPattern,
    report: &mut GrowthReport,
) -> Result<Verdict> {
    let GoodnessParams { k, m, r } = params;
    let need = 4 * (u64::from(b) + u64::from(m + a + 2) * u64::from(k));
    let n = round_up(
        need.max(2 * u64::from(k) + 1),
        u64::from(pattern.period(params)),
    ) as u32;
    report.n = n;
    let center = TorusPoint { x: n / 2, y: n / 2 };
    let source = ShapeSpec { k, m, a, b, center };
    let target = ShapeSpec { a: a + 1, ..source };
    let target_points = shape_points(&target, n)?;

    let base = pattern.state(params, n)?;
    let mut initial = base.clone();
    plant_shape(&mut initial, &source, n)?;

    if let Some(bad) = target_points
        .iter()
        .find(|&&v| !initial.is_active(v.index(n)) && !is_m_good(v, &initial, params, n))
    {
        return Ok(Verdict::Fail(format!(
            "target vertex ({}, {}) is neither good nor active",
            bad.x, bad.y
        )));
    }

    let lattice = Lattice::stencil(n, k)?;
    let rule = Rule::majority(r);
    let fin = run_to_fixpoint(&lattice, rule, &initial);
    report.rounds = fin.rounds;
    let alone = run_to_fixpoint(&lattice, rule, &base);
    report.pattern_alone_suffices = target_points
        .iter()
        .all(|v| alone.state.is_active(v.index(n)));

    let missed = target_points
        .iter()
        .filter(|v| !fin.state.is_active(v.index(n)))
        .count();
    Ok(if missed == 0 {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("{missed} target vertices stayed inactive"))
    })
}

/// `S(a,b) ⊆ S(a,b+1) ⊆ … ⊆ S(a,b+k) ⊆ S(a+1,b)`.
pub fn chain_inclusions(k: u32, m: u32, a: u32, b: u32) -> Result<bool> {
    let mut prev = shape_rows(k, m, a, b)?;
    for j in 1..=k {
        let next = shape_rows(k, m, a, b + j)?;
        if !prev.is_subset(&next) {
            return Ok(false);
        }
        prev = next;
    }
    Ok(prev.is_subset(&shape_rows(k, m, a + 1, b)?))
}

/// Cell-level growth instance: a torus, an initial state and a target set
/// of cells.
#[derive(Clone, Debug)]
pub struct CellScenario {
    pub params: GoodnessParams,
    pub tess: Tessellation,
    pub initial: ActivationState,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellGrowthReport {
    pub verdict: Verdict,
    pub seed_cells: usize,
    pub rounds: u32,
    /// The initial state with all seeds removed would still fill the cells.
    pub pattern_alone_suffices: Option<bool>,
}

fn l1_connected(cells: &[Cell], tess: &Tessellation) -> bool {
    if cells.is_empty() {
        return false;
    }
    let mut reached = vec![false; cells.len()];
    reached[0] = true;
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        for j in 0..cells.len() {
            if !reached[j] && tess.cell_distance(cells[i], cells[j], Metric::L1) == 1 {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.into_iter().all(|x| x)
}

/// Runs the `r`-majority process on `L(n,k)` and checks that every cell of
/// the scenario becomes active. Skips when the cells are not
/// ℓ1-connected, not all good, or contain no seed.
pub fn verify_corollary_growcells(s: &CellScenario) -> CellGrowthReport {
    let mut report = CellGrowthReport {
        verdict: Verdict::Pass,
        seed_cells: 0,
        rounds: 0,
        pattern_alone_suffices: None,
    };
    let skip = |why: String| Verdict::Skipped(format!("preconditions unmet: {why}"));
    let p = s.params;
    let n = s.tess.n();
    if let Err(why) = p.growth_preconditions() {
        report.verdict = skip(why);
        return report;
    }
    if !l1_connected(&s.cells, &s.tess) {
        report.verdict = skip("cell set is empty or not l1-connected".into());
        return report;
    }
    let good = match good_map(&s.initial, p, n) {
        Ok(g) => g,
        Err(e) => {
            report.verdict = skip(e.to_string());
            return report;
        }
    };
    if let Some(c) = s
        .cells
        .iter()
        .find(|&&c| !is_good_cell_with(c, &s.initial, &good, p, &s.tess))
    {
        report.verdict = skip(format!("cell ({}, {}) is not good", c.i, c.j));
        return report;
    }
    let mut seeds = Vec::new();
    for &c in &s.cells {
        match find_seed(c, &s.initial, p.k, p.m, &s.tess) {
            Ok(Some(v)) => seeds.push(v),
            Ok(None) => {}
            Err(e) => {
                report.verdict = skip(e.to_string());
                return report;
            }
        }
    }
    report.seed_cells = seeds.len();
    let lattice = match Lattice::stencil(n, p.k) {
        Ok(l) => l,
        Err(e) => {
            report.verdict = skip(e.to_string());
            return report;
        }
    };
    let rule = Rule::majority(p.r);
    let covered = |st: &ActivationState| {
        s.cells
            .iter()
            .flat_map(|&c| s.tess.vertices(c))
            .filter(|v| !st.is_active(v.index(n)))
            .count()
    };
    if seeds.is_empty() {
        let alone = run_to_fixpoint(&lattice, rule, &s.initial);
        report.pattern_alone_suffices = Some(covered(&alone.state) == 0);
        report.verdict = skip("no seed cell".into());
        return report;
    }
    let fin = run_to_fixpoint(&lattice, rule, &s.initial);
    report.rounds = fin.rounds;
    let missed = covered(&fin.state);
    report.verdict = if missed == 0 {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("{missed} vertices of the cell set stayed inactive"))
    };
    report
}

/// A `side × side` block of cells in a torus of `side + 2` cells per axis,
/// with a forcing pattern everywhere and, if `seeded`, an active
/// `S^k_m(0,0)` in the middle cell. The cell side is the smallest multiple
/// of the pattern period that is at least `4mk + 1`.
pub fn block_scenario(
    params: GoodnessParams,
    pattern: ForcingPattern,
    side: u32,
    seeded: bool,
) -> Result<CellScenario> {
    if side == 0 {
        return Err(Error::InvalidParameter(
            "block side must be positive".into(),
        ));
    }
    let period = u64::from(pattern.period(params));
    let t = round_up(4 * u64::from(params.m) * u64::from(params.k) + 1, period) as u32;
    let per_axis = side + 2;
    let n = t * per_axis;
    let tess = tessellate(n, t)?;
    let mut initial = pattern.state(params, n)?;
    let mid = Cell::new(1 + side / 2, 1 + side / 2);
    if seeded {
        let xs = tess.span(mid.i);
        let ys = tess.span(mid.j);
        let center = TorusPoint {
            x: (xs.start + xs.end) / 2,
            y: (ys.start + ys.end) / 2,
        };
        let spec = ShapeSpec {
            k: params.k,
            m: params.m,
            a: 0,
            b: 0,
            center,
        };
        plant_shape(&mut initial, &spec, n)?;
    }
    let cells = (1..=side)
        .flat_map(|j| (1..=side).map(move |i| Cell::new(i, j)))
        .collect();
    Ok(CellScenario {
        params,
        tess,
        initial,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::random_initial;

    #[test]
    fn recurrence_examples() {
        let r = shape_rows(5, 5, 2, 7).unwrap();
        assert_eq!(r.nonnegative(), &[32, 32, 31, 29, 26, 22, 17, 12, 7]);
        let r = shape_rows(5, 2, 0, 0).unwrap();
        assert_eq!(r.nonnegative(), &[8, 8, 5, 0]);
        assert_eq!(r.point_count(), 75);
        assert_eq!(shape_points_z2(&r).len(), 75);
        assert!(shape_rows(3, 0, 0, 0).is_err());
        assert!(shape_rows(3, 4, 0, 0).is_err());
    }

    #[test]
    fn shape_bounds() {
        for k in 1..=12u32 {
            for m in 1..=k {
                let (k64, m64) = (u64::from(k), u64::from(m));
                let s0 = shape_rows(k, m, 0, 0).unwrap();
                assert!(s0.point_count() <= 25 * m64 * m64 * k64);
                assert!(s0.nonnegative()[0] <= 2 * m64 * k64 && s0.height() <= 2 * m64);
                for a in 0..4 {
                    for b in 0..4 {
                        let s = shape_rows(k, m, a, b).unwrap();
                        let x0 = s.nonnegative()[0];
                        assert!(x0 <= u64::from(b) + (m64 + u64::from(a)) * k64);
                        assert_eq!(s.height(), m64 + u64::from(a) + 1);
                        let mid = &s.nonnegative()[m as usize..];
                        assert!(mid.windows(2).all(|w| w[0] > w[1]));
                    }
                }
            }
        }
    }

    #[test]
    fn large_shape_contains_square() {
        for k in 1..=6u32 {
            for m in 1..=k {
                for a in 0..=10i64 {
                    let s = shape_rows(k, m, 2 * a as u32, 0).unwrap();
                    for y in -a..=a {
                        for x in -a..=a {
                            assert!(s.contains(x, y));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn chain_holds() {
        for k in 2..=8 {
            for m in 1..=k {
                for a in 0..3 {
                    for b in 0..3 {
                        assert!(chain_inclusions(k, m, a, b).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn shape_overlap_is_an_error() {
        let spec = ShapeSpec {
            k: 5,
            m: 2,
            a: 0,
            b: 0,
            center: TorusPoint { x: 0, y: 0 },
        };
        assert!(matches!(
            shape_points(&spec, 16),
            Err(Error::ShapeOverlap(_))
        ));
        let pts = shape_points(&spec, 17).unwrap();
        let mut idx: Vec<_> = pts.iter().map(|p| p.index(17)).collect();
        idx.sort_unstable();
        idx.dedup();
        assert_eq!(idx.len(), 75);
    }

    #[test]
    fn goodness_extremes() {
        let n = 20;
        let p = GoodnessParams::new(4, 2, 2).unwrap();
        let on = ActivationState::all_active(400);
        let off = ActivationState::all_inactive(400);
        assert!(good_map(&on, p, n).unwrap().is_full());
        assert_eq!(good_map(&off, p, n).unwrap().count_ones(..), 0);
        let v = TorusPoint { x: 3, y: 19 };
        assert!(is_m_good(v, &on, p, n) && !is_m_good(v, &off, p, n));
    }

    #[test]
    fn forcing_patterns_make_everything_good() {
        for k in 2..=12u32 {
            for m in 2..k {
                let p = GoodnessParams::new(k, m, 1).unwrap();
                if !p.satisfiable() {
                    continue;
                }
                for pat in ForcingPattern::ALL {
                    let n = round_up(2 * u64::from(k) + 1, u64::from(pat.period(p))) as u32 * 2;
                    let st = pat.state(p, n).unwrap();
                    let g = good_map(&st, p, n).unwrap();
                    assert!(g.is_full(), "k={k} m={m} {pat:?}");
                }
            }
        }
    }

    #[test]
    fn good_map_agrees_with_direct_check() {
        let n = 23;
        let p = GoodnessParams::new(5, 2, 1).unwrap();
        for seed in 0..5 {
            let st = random_initial(529, 0.6, seed).unwrap();
            let g = good_map(&st, p, n).unwrap();
            for i in 0..529 {
                assert_eq!(
                    g.contains(i),
                    is_m_good(TorusPoint::from_index(i, n), &st, p, n)
                );
            }
        }
    }

    #[test]
    fn neighbourhood_visit_is_exact() {
        let tess = tessellate(30, 7).unwrap();
        for c in [Cell::new(0, 0), Cell::new(3, 2), Cell::new(1, 3)] {
            for radius in [0u64, 3, 9, 40] {
                let mut seen = vec![0u32; 900];
                visit_neighbourhood(&tess, c, radius, |v| {
                    seen[v.index(30)] += 1;
                    true
                });
                for (i, &got) in seen.iter().enumerate() {
                    let v = TorusPoint::from_index(i, 30);
                    let want = u32::from(u64::from(tess.vertex_cell_distance(v, c)) <= radius);
                    assert_eq!(got, want, "{c:?} r={radius} {v:?}");
                }
            }
        }
    }

    #[test]
    fn good_cell_cases() {
        let p = GoodnessParams::new(4, 2, 2).unwrap();
        let n = 2 * 1024 + 200;
        let tess = tessellate(n, 100).unwrap();
        let nn = n as usize * n as usize;
        let c = Cell::new(0, 0);
        let mut st = ActivationState::all_active(nn);
        assert!(is_good_cell(c, &st, p, &tess));
        // an inactive vertex next to another inactive one is bad
        st.deactivate(TorusPoint { x: 50, y: 50 }.index(n));
        st.deactivate(TorusPoint { x: 51, y: 51 }.index(n));
        assert!(!is_good_cell(c, &st, p, &tess));
    }

    #[test]
    fn good_cell_is_local() {
        let p = GoodnessParams::new(4, 2, 2).unwrap();
        let radius = p.cell_radius() + u64::from(p.k) + 1;
        let n = 2 * radius as u32 + 120;
        let tess = tessellate(n, 60).unwrap();
        let nn = n as usize * n as usize;
        let c = Cell::new(0, 0);
        let mut st = ActivationState::all_active(nn);
        // a bad inactive pair just outside the goodness radius
        let far = p.cell_radius() as i64 + 2;
        for v in [
            TorusPoint::wrap(-far, 0, n),
            TorusPoint::wrap(-far - 1, -1, n),
        ] {
            st.deactivate(v.index(n));
        }
        let base = is_good_cell(c, &st, p, &tess);
        assert!(base);
        let mut rng = 0x9e37_79b9_7f4a_7c15u64;
        let mut flipped = 0;
        while flipped < 200 {
            rng = rng
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let i = (rng >> 17) as usize % nn;
            let v = TorusPoint::from_index(i, n);
            if u64::from(tess.vertex_cell_distance(v, c)) <= radius {
                continue;
            }
            let mut s2 = st.clone();
            if s2.is_active(i) {
                s2.deactivate(i);
            } else {
                s2.activate(i);
            }
            assert_eq!(is_good_cell(c, &s2, p, &tess), base);
            flipped += 1;
        }
        // moving the pair one step inward makes the cell bad
        let mut st = ActivationState::all_active(nn);
        let near = p.cell_radius() as i64;
        for v in [
            TorusPoint::wrap(-near, 0, n),
            TorusPoint::wrap(-near - 1, -1, n),
        ] {
            st.deactivate(v.index(n));
        }
        assert!(!is_good_cell(c, &st, p, &tess));
    }

    #[test]
    fn seed_detection() {
        let (k, m) = (3, 2);
        let t = 4 * m * k + 1;
        let n = 3 * t;
        let tess = tessellate(n, t).unwrap();
        let nn = (n * n) as usize;
        let off = ActivationState::all_inactive(nn);
        assert!(!is_seed_cell(Cell::new(1, 1), &off, k, m, &tess).unwrap());
        let mut st = off.clone();
        let center = TorusPoint {
            x: t + t / 2,
            y: t + t / 2,
        };
        plant_shape(
            &mut st,
            &ShapeSpec {
                k,
                m,
                a: 0,
                b: 0,
                center,
            },
            n,
        )
        .unwrap();
        assert_eq!(
            find_seed(Cell::new(1, 1), &st, k, m, &tess).unwrap(),
            Some(center)
        );
        assert!(!is_seed_cell(Cell::new(0, 1), &st, k, m, &tess).unwrap());
        // removing one shape vertex kills the seed
        st.deactivate(center.offset(0, 2, n).index(n));
        assert!(!is_seed_cell(Cell::new(1, 1), &st, k, m, &tess).unwrap());
        // cells narrower than the 11-wide shape are never seeds
        let small = tessellate(30, 10).unwrap();
        let on = ActivationState::all_active(900);
        assert!(small
            .cells()
            .all(|c| !is_seed_cell(c, &on, k, m, &small).unwrap()));
    }

    #[test]
    fn growcloud_example() {
        for pat in ForcingPattern::ALL {
            let r = verify_lemma_growcloud(6, 2, 1, 0, 3, pat);
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        }
        let r = verify_lemma_growcloud(6, 6, 0, 0, 1, ForcingPattern::Columns);
        assert!(matches!(r.verdict, Verdict::Skipped(_)));
        let r = verify_lemma_growcloud(6, 2, 0, 0, 4, ForcingPattern::Columns);
        assert!(matches!(r.verdict, Verdict::Skipped(_)));
    }

    #[test]
    fn growcells_examples() {
        let p = GoodnessParams::new(8, 4, 2).unwrap();
        for pat in ForcingPattern::ALL {
            let s = block_scenario(p, pat, 3, true).unwrap();
            let r = verify_corollary_growcells(&s);
            assert_eq!(r.verdict, Verdict::Pass, "{pat:?}");
            assert_eq!(r.seed_cells, 1);

            let single = CellScenario {
                cells: vec![Cell::new(2, 2)],
                ..s.clone()
            };
            assert!(verify_corollary_growcells(&single).verdict.is_pass());

            let bare = block_scenario(p, pat, 3, false).unwrap();
            let r = verify_corollary_growcells(&bare);
            assert!(matches!(r.verdict, Verdict::Skipped(_)));
            assert_eq!(r.pattern_alone_suffices, Some(false));
        }
    }
}
