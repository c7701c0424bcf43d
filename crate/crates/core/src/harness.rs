//! Reproducible Monte Carlo experiments: configuration, per-trial seeding,
//! trials, scans over `p`, the coupled lattice/augmented run, and the JSONL
//! and CSV writers.
//!
//! Seeds: trial `i` of a run with base seed `s` uses `derive(s, i)`; its
//! initial set is drawn from `derive(trial, 1)` and its matchings from
//! `derive(trial, 2)`, where `derive` is a SplitMix64 finaliser over the
//! pair. Trial seeds do not depend on `p`, so the initial sets of one trial
//! are nested across a scan.

use std::io::Write;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::{random_initial, run_to_fixpoint, FinalState, Rule};
use crate::growth::Verdict;
use crate::lattice::{tessellate, Lattice, Metric, Tessellation};
use crate::matchings::{
    deterministic_admissible, sample_admissible, AugmentedGraph, MatchingTuple,
};
use crate::ubiquity::{check_lemma_needstable, components, CellSet};
use crate::{Error, Result};

pub const THREADS_ENV: &str = "MAJPERC_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    /// `L(n,k)`
    Lattice,
    /// `L*(n,k,r)`
    Star,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchingSource {
    Det,
    Sample,
}

/// One experiment. The process is the `r`-majority rule on the chosen graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub graph: GraphKind,
    pub p_grid: Vec<f64>,
    pub trials: u32,
    pub base_seed: u64,
    pub matching: MatchingSource,
    /// One matching tuple for every trial instead of a fresh one per trial.
    pub fixed_matching: bool,
    /// Tessellation side; `None` selects `min(100k³, ⌊n/2⌋)`.
    pub t: Option<u32>,
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(n: u32, k: u32, r: u32, graph: GraphKind) -> Self {
        ExperimentConfig {
            n,
            k,
            r,
            graph,
            p_grid: vec![0.5],
            trials: 1,
            base_seed: 0,
            matching: MatchingSource::Sample,
            fixed_matching: false,
            t: None,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || 2 * u64::from(self.k) + 1 > u64::from(self.n) {
            return Err(Error::WrappedNeighbourhood {
                n: self.n,
                k: self.k,
            });
        }
        if self.graph == GraphKind::Star && !self.n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "matchings need even n, got {}",
                self.n
            )));
        }
        if let Some(&p) = self.p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidParameter(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        if self.p_grid.is_empty() {
            return Err(Error::InvalidParameter("empty p grid".into()));
        }
        if let Some(t) = self.t {
            if t == 0 || t > self.n {
                return Err(Error::InvalidParameter(format!(
                    "need 1 <= t <= n, got t={t}"
                )));
            }
        }
        Ok(())
    }

    /// Tessellation side and whether the default was capped at `⌊n/2⌋`.
    pub fn resolved_t(&self) -> (u32, bool) {
        match self.t {
            Some(t) => (t, false),
            None => default_t(self.n, self.k),
        }
    }

    /// SHA-256 of the canonical JSON form, hex encoded. Thread count and
    /// output options are not part of it.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&canonical);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn rule(&self) -> Rule {
        Rule::majority(self.r)
    }

    /// Hypotheses of the four-matched-vertices check: `n` even and
    /// `2r < 2k+2 ≤ t ≤ n/2`.
    pub fn needstable_applicable(&self) -> bool {
        let (t, _) = self.resolved_t();
        let (n, k, r, t) = (
            u64::from(self.n),
            u64::from(self.k),
            u64::from(self.r),
            u64::from(t),
        );
        self.graph == GraphKind::Star
            && n % 2 == 0
            && 2 * r < 2 * k + 2
            && 2 * k + 2 <= t
            && 2 * t <= n
    }
}

/// `min(100k³, ⌊n/2⌋)`, never below 1, with a flag when the cap applied.
pub fn default_t(n: u32, k: u32) -> (u32, bool) {
    let full = 100 * u64::from(k).pow(3);
    let cap = u64::from((n / 2).max(1));
    if full > cap {
        (cap as u32, true)
    } else {
        (full as u32, false)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for stream `index` under `parent`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    splitmix(splitmix(parent) ^ index.wrapping_mul(0xd1b5_4a32_d192_ed03))
}

pub fn trial_seed(base: u64, trial: u64) -> u64 {
    derive_seed(base, trial)
}

pub const INITIAL_STREAM: u64 = 1;
pub const MATCHING_STREAM: u64 = 2;

/// Threads from `MAJPERC_THREADS`, else the configured count, else all
/// cores.
pub fn resolve_threads(configured: Option<usize>) -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .or(configured)
        .unwrap_or_else(rayon::current_num_threads)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentBrief {
    pub size: usize,
    pub diam: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Skip,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    #[serde(with = "decimal")]
    pub seed: u64,
    pub disseminated: bool,
    pub rounds: u32,
    pub inactive: u64,
    pub components: Vec<ComponentBrief>,
    pub lemma42: CheckStatus,
    pub config_hash: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

mod decimal {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

impl TrialRecord {
    pub fn is_valid(&self) -> bool {
        self.error.is_none()
    }
}

/// A graph ready to run: the lattice, or the lattice with its matchings.
pub enum Instance {
    Lattice(Lattice),
    Star(AugmentedGraph),
}

impl Instance {
    pub fn run(&self, rule: Rule, initial: &crate::ActivationState) -> FinalState {
        match self {
            Instance::Lattice(g) => run_to_fixpoint(g, rule, initial),
            Instance::Star(g) => run_to_fixpoint(g, rule, initial),
        }
    }

    pub fn num_vertices(&self) -> usize {
        match self {
            Instance::Lattice(g) => crate::Graph::num_vertices(g),
            Instance::Star(g) => crate::Graph::num_vertices(g),
        }
    }
}

pub fn build_matchings(cfg: &ExperimentConfig, seed: u64) -> Result<MatchingTuple> {
    match cfg.matching {
        MatchingSource::Det => deterministic_admissible(cfg.n, cfg.k, cfg.r as usize),
        MatchingSource::Sample => sample_admissible(cfg.n, cfg.k, cfg.r as usize, seed),
    }
}

/// Matchings shared by all trials under `fixed_matching`.
fn fixed_matchings(cfg: &ExperimentConfig) -> Result<Option<MatchingTuple>> {
    if cfg.graph == GraphKind::Star && (cfg.fixed_matching || cfg.matching == MatchingSource::Det) {
        return build_matchings(cfg, derive_seed(cfg.base_seed, u64::MAX)).map(Some);
    }
    Ok(None)
}

/// The graph of trial `trial` as the scan builds it.
pub fn trial_instance(cfg: &ExperimentConfig, trial: u64) -> Result<Instance> {
    let fixed = fixed_matchings(cfg)?;
    instance_for(cfg, trial_seed(cfg.base_seed, trial), fixed.as_ref())
}

/// The initial set of trial `trial` at probability `p`.
pub fn trial_initial(cfg: &ExperimentConfig, trial: u64, p: f64) -> Result<crate::ActivationState> {
    let n = cfg.n as usize;
    random_initial(
        n * n,
        p,
        derive_seed(trial_seed(cfg.base_seed, trial), INITIAL_STREAM),
    )
}

fn instance_for(
    cfg: &ExperimentConfig,
    trial_seed: u64,
    fixed: Option<&MatchingTuple>,
) -> Result<Instance> {
    let lattice = Lattice::stencil(cfg.n, cfg.k)?;
    Ok(match cfg.graph {
        GraphKind::Lattice => Instance::Lattice(lattice),
        GraphKind::Star => {
            let m = match fixed {
                Some(m) => m.clone(),
                None => build_matchings(cfg, derive_seed(trial_seed, MATCHING_STREAM))?,
            };
            Instance::Star(AugmentedGraph::new(lattice, m)?)
        }
    })
}

fn inactive_components(tess: &Tessellation, inactive: &FixedBitSet) -> Vec<ComponentBrief> {
    components(&CellSet::touching(tess, inactive), Metric::LInf)
        .into_iter()
        .map(|c| ComponentBrief {
            size: c.size,
            diam: c.diameter,
        })
        .collect()
}

fn record_from(
    cfg: &ExperimentConfig,
    hash: &str,
    trial: u64,
    seed: u64,
    instance: &Instance,
    p: f64,
    tess: &Tessellation,
) -> Result<TrialRecord> {
    let start = Instant::now();
    let initial = random_initial(
        instance.num_vertices(),
        p,
        derive_seed(seed, INITIAL_STREAM),
    )?;
    let fin = instance.run(cfg.rule(), &initial);
    let inactive = fin.state.inactive_set();
    let lemma42 = match instance {
        Instance::Star(g) if cfg.needstable_applicable() => {
            match check_lemma_needstable(g, &inactive, tess).verdict {
                Verdict::Pass => CheckStatus::Pass,
                Verdict::Skipped(_) => CheckStatus::Skip,
                Verdict::Fail(_) => CheckStatus::Fail,
            }
        }
        _ => CheckStatus::Skip,
    };
    Ok(TrialRecord {
        trial,
        seed,
        disseminated: fin.disseminated,
        rounds: fin.rounds,
        inactive: inactive.count_ones(..) as u64,
        components: inactive_components(tess, &inactive),
        lemma42,
        config_hash: hash.to_string(),
        error: None,
        wall_time: start.elapsed(),
    })
}

fn failed_record(hash: &str, trial: u64, seed: u64, err: &Error) -> TrialRecord {
    TrialRecord {
        trial,
        seed,
        disseminated: false,
        rounds: 0,
        inactive: 0,
        components: Vec::new(),
        lemma42: CheckStatus::Skip,
        config_hash: hash.to_string(),
        error: Some(err.to_string()),
        wall_time: Duration::ZERO,
    }
}

/// All grid points of one trial, sharing its graph.
fn trial_over_grid(
    cfg: &ExperimentConfig,
    hash: &str,
    trial: u64,
    fixed: Option<&MatchingTuple>,
    tess: &Tessellation,
) -> Vec<TrialRecord> {
    let seed = trial_seed(cfg.base_seed, trial);
    let instance = match instance_for(cfg, seed, fixed) {
        Ok(i) => i,
        Err(e) => {
            return cfg
                .p_grid
                .iter()
                .map(|_| failed_record(hash, trial, seed, &e))
                .collect()
        }
    };
    cfg.p_grid
        .iter()
        .map(|&p| {
            record_from(cfg, hash, trial, seed, &instance, p, tess)
                .unwrap_or_else(|e| failed_record(hash, trial, seed, &e))
        })
        .collect()
}

/// Trial `trial_index` at the first grid point.
pub fn run_trial(cfg: &ExperimentConfig, trial_index: u64) -> Result<TrialRecord> {
    cfg.validate()?;
    let fixed = fixed_matchings(cfg)?;
    let tess = tessellate(cfg.n, cfg.resolved_t().0)?;
    let one = ExperimentConfig {
        p_grid: vec![cfg.p_grid[0]],
        ..cfg.clone()
    };
    Ok(trial_over_grid(&one, &cfg.hash(), trial_index, fixed.as_ref(), &tess).remove(0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanPoint {
    pub p: f64,
    pub trials: u32,
    pub disseminated: u32,
    pub invalid: u32,
    pub freq: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub points: Vec<ScanPoint>,
    pub config_hash: String,
    /// Adjacent grid points whose frequencies decrease beyond both Wilson
    /// intervals.
    pub monotonicity_violations: Vec<(f64, f64)>,
    pub lemma42_failures: u32,
    /// Records indexed `[grid point][trial]`.
    #[serde(skip)]
    pub records: Vec<Vec<TrialRecord>>,
}

impl ScanResult {
    pub fn monotone(&self) -> bool {
        self.monotonicity_violations.is_empty()
    }
}

const WILSON_Z: f64 = 1.959_963_984_540_054;

/// Wilson score interval at 95% for `successes` out of `n`.
pub fn wilson_interval(successes: u32, n: u32) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (s, n) = (f64::from(successes), f64::from(n));
    let z2 = WILSON_Z * WILSON_Z;
    let phat = s / n;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    (
        (center - half).max(0.0).min(phat),
        (center + half).min(1.0).max(phat),
    )
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
}

/// Every trial at every grid point. Trials run in parallel; results are
/// collected in trial order, so the outcome does not depend on the thread
/// count.
pub fn run_scan(cfg: &ExperimentConfig) -> Result<ScanResult> {
    cfg.validate()?;
    let hash = cfg.hash();
    let fixed = fixed_matchings(cfg)?;
    let tess = tessellate(cfg.n, cfg.resolved_t().0)?;
    let per_trial: Vec<Vec<TrialRecord>> = pool(resolve_threads(cfg.threads))?.install(|| {
        (0..u64::from(cfg.trials))
            .into_par_iter()
            .map(|i| trial_over_grid(cfg, &hash, i, fixed.as_ref(), &tess))
            .collect()
    });
    let mut records: Vec<Vec<TrialRecord>> =
        vec![Vec::with_capacity(cfg.trials as usize); cfg.p_grid.len()];
    for row in per_trial {
        for (g, rec) in row.into_iter().enumerate() {
            records[g].push(rec);
        }
    }
    let points: Vec<ScanPoint> = cfg
        .p_grid
        .iter()
        .zip(&records)
        .map(|(&p, recs)| {
            let valid = recs.iter().filter(|r| r.is_valid()).count() as u32;
            let hits = recs
                .iter()
                .filter(|r| r.is_valid() && r.disseminated)
                .count() as u32;
            let (lo, hi) = wilson_interval(hits, valid);
            ScanPoint {
                p,
                trials: valid,
                disseminated: hits,
                invalid: recs.len() as u32 - valid,
                freq: if valid == 0 {
                    0.0
                } else {
                    f64::from(hits) / f64::from(valid)
                },
                wilson_lo: lo,
                wilson_hi: hi,
            }
        })
        .collect();
    let monotonicity_violations = monotonicity_violations(&points);
    let lemma42_failures = records
        .iter()
        .flatten()
        .filter(|r| r.lemma42 == CheckStatus::Fail)
        .count() as u32;
    Ok(ScanResult {
        points,
        config_hash: hash,
        monotonicity_violations,
        lemma42_failures,
        records,
    })
}

/// Pairs of grid points `p < p'` (adjacent in increasing order) with
/// `freq(p') < freq(p)` and disjoint Wilson intervals.
pub fn monotonicity_violations(points: &[ScanPoint]) -> Vec<(f64, f64)> {
    let mut sorted: Vec<&ScanPoint> = points.iter().collect();
    sorted.sort_by(|a, b| a.p.total_cmp(&b.p));
    sorted
        .windows(2)
        .filter(|w| w[1].freq < w[0].freq && w[1].wilson_hi < w[0].wilson_lo)
        .map(|w| (w[0].p, w[1].p))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoupledRecord {
    /// `M_r` on `L*(n,k,r)`.
    pub star: TrialRecord,
    /// `M_{2r}` on `L(n,k)`.
    pub lattice: TrialRecord,
    pub inclusion_holds: bool,
}

/// Runs `M_r(L*)` and `M_{2r}(L)` from one initial set and checks that the
/// lattice run's final active set is contained in the augmented run's.
pub fn coupled_trial(cfg: &ExperimentConfig, trial_index: u64) -> Result<CoupledRecord> {
    cfg.validate()?;
    if cfg.graph != GraphKind::Star {
        return Err(Error::InvalidParameter(
            "coupled runs need the augmented graph".into(),
        ));
    }
    let hash = cfg.hash();
    let p = cfg.p_grid[0];
    let seed = trial_seed(cfg.base_seed, trial_index);
    let fixed = fixed_matchings(cfg)?;
    let tess = tessellate(cfg.n, cfg.resolved_t().0)?;
    let star = instance_for(cfg, seed, fixed.as_ref())?;
    let lattice = Lattice::stencil(cfg.n, cfg.k)?;
    let initial = random_initial(star.num_vertices(), p, derive_seed(seed, INITIAL_STREAM))?;

    let star_rec = record_from(cfg, &hash, trial_index, seed, &star, p, &tess)?;
    let star_fin = star.run(cfg.rule(), &initial);
    let lat_start = Instant::now();
    let lat_fin = run_to_fixpoint(&lattice, Rule::majority(2 * cfg.r), &initial);
    let lat_inactive = lat_fin.state.inactive_set();
    let lat_rec = TrialRecord {
        trial: trial_index,
        seed,
        disseminated: lat_fin.disseminated,
        rounds: lat_fin.rounds,
        inactive: lat_inactive.count_ones(..) as u64,
        components: inactive_components(&tess, &lat_inactive),
        lemma42: CheckStatus::Skip,
        config_hash: hash,
        error: None,
        wall_time: lat_start.elapsed(),
    };
    let inclusion_holds = lat_fin.state.is_subset(&star_fin.state);
    if !inclusion_holds {
        return Err(Error::InvariantViolation(format!(
            "trial {trial_index}: lattice final active set is not contained in the augmented one"
        )));
    }
    Ok(CoupledRecord {
        star: star_rec,
        lattice: lat_rec,
        inclusion_holds,
    })
}

/// `a:b:step`, inclusive of `b` up to rounding; values rounded to 12
/// decimals.
pub fn parse_p_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParameter(format!("p grid must look like a:b:step, got {spec:?}"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [a, b, step] = parts[..] else {
        return Err(bad());
    };
    if step.is_nan() || step <= 0.0 || b < a {
        return Err(bad());
    }
    let count = ((b - a) / step + 1e-9).floor() as u64;
    Ok((0..=count)
        .map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// One JSON object per line, with the grid point prefixed when the scan has
/// more than one.
pub fn write_trials_jsonl<W: Write>(
    mut w: W,
    cfg: &ExperimentConfig,
    records: &[Vec<TrialRecord>],
) -> Result<()> {
    let multi = cfg.p_grid.len() > 1;
    for (p, recs) in cfg.p_grid.iter().zip(records) {
        for r in recs {
            if multi {
                let mut v = serde_json::Map::new();
                v.insert("p".into(), serde_json::json!(p));
                if let serde_json::Value::Object(rest) = serde_json::to_value(r)? {
                    v.extend(rest);
                }
                serde_json::to_writer(&mut w, &v)?;
            } else {
                serde_json::to_writer(&mut w, r)?;
            }
            w.write_all(b"\n")?;
        }
    }
    Ok(())
}

pub const SCAN_CSV_HEADER: &str = "p,trials,disseminated,freq,wilson_lo,wilson_hi,config_hash";

pub fn write_scan_csv<W: Write>(mut w: W, scan: &ScanResult) -> Result<()> {
    writeln!(w, "{SCAN_CSV_HEADER}")?;
    for pt in &scan.points {
        writeln!(
            w,
            "{},{},{},{:.6},{:.6},{:.6},{}",
            pt.p, pt.trials, pt.disseminated, pt.freq, pt.wilson_lo, pt.wilson_hi, scan.config_hash
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(graph: GraphKind) -> ExperimentConfig {
        ExperimentConfig {
            p_grid: vec![0.0, 1.0],
            trials: 4,
            base_seed: 11,
            ..ExperimentConfig::new(32, 2, 1, graph)
        }
    }

    #[test]
    fn endpoints() {
        for g in [GraphKind::Lattice, GraphKind::Star] {
            let scan = run_scan(&small(g)).unwrap();
            assert_eq!(scan.points[0].freq, 0.0);
            assert_eq!(scan.points[1].freq, 1.0);
            assert!(scan.records[0].iter().all(|r| r.inactive == 32 * 32));
            assert!(scan.records[1].iter().all(|r| r.rounds == 0));
        }
    }

    #[test]
    fn trials_are_deterministic() {
        let cfg = ExperimentConfig {
            p_grid: vec![0.7],
            ..small(GraphKind::Star)
        };
        let a = run_trial(&cfg, 3).unwrap();
        let b = run_trial(&cfg, 3).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_ne!(trial_seed(11, 3), trial_seed(11, 4));
    }

    #[test]
    fn hash_ignores_threads() {
        let a = small(GraphKind::Star);
        let b = ExperimentConfig {
            threads: Some(7),
            ..a.clone()
        };
        let c = ExperimentConfig {
            base_seed: 12,
            ..a.clone()
        };
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn wilson_contains_estimate() {
        for n in [1u32, 5, 50, 200] {
            for s in 0..=n {
                let (lo, hi) = wilson_interval(s, n);
                let f = f64::from(s) / f64::from(n);
                assert!(lo <= f && f <= hi && lo >= 0.0 && hi <= 1.0);
            }
        }
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }

    #[test]
    fn p_grid_parsing() {
        let g = parse_p_grid("0.05:0.5:0.05").unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(g[2], 0.15);
        assert_eq!(*g.last().unwrap(), 0.5);
        assert_eq!(parse_p_grid("0:1:1").unwrap(), vec![0.0, 1.0]);
        assert!(parse_p_grid("0:1").is_err());
        assert!(parse_p_grid("1:0:0.1").is_err());
    }

    #[test]
    fn default_tessellation() {
        assert_eq!(default_t(256, 6), (128, true));
        assert_eq!(default_t(100_000, 2), (800, false));
    }

    #[test]
    fn coupled_endpoints() {
        let mut cfg = ExperimentConfig::new(32, 2, 1, GraphKind::Star);
        cfg.p_grid = vec![1.0];
        let c = coupled_trial(&cfg, 0).unwrap();
        assert!(c.star.disseminated && c.lattice.disseminated);
        cfg.p_grid = vec![0.0];
        let c = coupled_trial(&cfg, 0).unwrap();
        assert_eq!((c.star.inactive, c.lattice.inactive), (1024, 1024));
    }

    #[test]
    fn monotonicity_detector() {
        let pt = |p, s| {
            let (lo, hi) = wilson_interval(s, 100);
            ScanPoint {
                p,
                trials: 100,
                disseminated: s,
                invalid: 0,
                freq: f64::from(s) / 100.0,
                wilson_lo: lo,
                wilson_hi: hi,
            }
        };
        assert!(monotonicity_violations(&[pt(0.1, 10), pt(0.2, 8)]).is_empty());
        assert_eq!(
            monotonicity_violations(&[pt(0.1, 60), pt(0.2, 10)]),
            vec![(0.1, 0.2)]
        );
    }
}
