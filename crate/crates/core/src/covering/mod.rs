//! Exact covering-radius engines and the classical bounds.
//!
//! Three independent engines compute `max_u min_c d(u, c)`:
//!
//! * [`covering_radius_direct`] scans the whole space against every
//!   codeword (also works for non-linear word sets).
//! * [`covering_radius_syndrome`] walks the whole space in Gray order,
//!   keeping the minimum weight seen in each coset (keyed by syndrome).
//! * [`covering_radius_bfs`] visits vectors in increasing weight until every
//!   coset has been hit.
//!
//! Exceeding a budget is reported as [`Error::BudgetExceeded`] by the
//! engines; [`covering_radius`] turns that into an interval report instead.

mod bfs;
mod bounds;
mod direct;
mod syndrome;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use bfs::{covering_radius_bfs, minimum_weight_search};
pub use bounds::{
    ball_covering_lower_bound, bound_report, delsarte_bound, mattson_split, mattson_stack,
    sphere_covering_lower_bound, BoundReport, MattsonUpper,
};
pub use direct::{covering_radius_direct, covering_radius_of_words};
pub use syndrome::{build_coset_table, covering_radius_syndrome, CosetLeaderTable, SyndromeMap};

use crate::error::{Error, Result};
use crate::linalg::{LinearCode, DEFAULT_CODEWORD_DIM_LIMIT};
use crate::ring::WeightMetric;

/// Work limits and parallelism for the engines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub max_distance_evals: u128,
    pub max_syndrome_vectors: u128,
    pub max_table_entries: u128,
    pub max_bfs_vectors: u128,
    pub codeword_dim_limit: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            threads: None,
            max_distance_evals: 1 << 34,
            max_syndrome_vectors: 1 << 32,
            max_table_entries: 1 << 28,
            max_bfs_vectors: 1 << 30,
            codeword_dim_limit: DEFAULT_CODEWORD_DIM_LIMIT,
        }
    }
}

impl SearchConfig {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub(crate) fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match self.threads {
            Some(t) if t > 0 => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
                Ok(pool) => pool.install(f),
                Err(_) => f(),
            },
            _ => f(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    SyndromeTable,
    WeightBfs,
    BoundOnly,
}

/// Engine selection for [`covering_radius`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodChoice {
    Auto,
    Direct,
    Syndrome,
    Bfs { r_cap: u32 },
}

impl FromStr for MethodChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(MethodChoice::Auto),
            "direct" => Ok(MethodChoice::Direct),
            "syndrome" => Ok(MethodChoice::Syndrome),
            "bfs" => Ok(MethodChoice::Bfs { r_cap: u32::MAX }),
            other => Err(Error::InvalidParameters(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub vectors_visited: u128,
    pub distance_evaluations: u128,
    pub wall_time_ms: f64,
}

/// Result of a covering-radius computation: an exact value with a deep hole,
/// or an interval when the search could not finish.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusReport {
    pub metric: WeightMetric,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<u32>,
    /// `[lo, hi]`; `hi = null` means unbounded. Present only when not exact.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub interval: Option<(u32, Option<u32>)>,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    pub stats: SearchStats,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl RadiusReport {
    pub(crate) fn exact(
        metric: WeightMetric,
        value: u32,
        method: Method,
        witness: Option<String>,
        stats: SearchStats,
    ) -> Self {
        Self {
            metric,
            value: Some(value),
            interval: None,
            method,
            witness,
            stats,
            note: None,
        }
    }

    pub(crate) fn bounded(metric: WeightMetric, lo: u32, hi: Option<u32>, method: Method, stats: SearchStats) -> Self {
        Self {
            metric,
            value: None,
            interval: Some((lo, hi)),
            method,
            witness: None,
            stats,
            note: None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.value.is_some()
    }

    pub fn lower(&self) -> u32 {
        self.value.unwrap_or_else(|| self.interval.map_or(0, |i| i.0))
    }

    pub fn upper(&self) -> Option<u32> {
        match self.value {
            Some(v) => Some(v),
            None => self.interval.and_then(|i| i.1),
        }
    }
}

impl fmt::Display for RadiusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.value, self.interval) {
            (Some(v), _) => write!(f, "r_{} = {v}", self.metric)?,
            (None, Some((lo, Some(hi)))) => write!(f, "{lo} <= r_{} <= {hi}", self.metric)?,
            (None, Some((lo, None))) => write!(f, "r_{} >= {lo}", self.metric)?,
            (None, None) => write!(f, "r_{} unknown", self.metric)?,
        }
        if let Some(w) = &self.witness {
            write!(f, " (deep hole {w})")?;
        }
        Ok(())
    }
}

pub(crate) struct Timer(Instant);

impl Timer {
    pub(crate) fn start() -> Self {
        Timer(Instant::now())
    }
    pub(crate) fn ms(&self) -> f64 {
        self.0.elapsed().as_secs_f64() * 1e3
    }
}

pub(crate) fn check_budget(what: &'static str, needed: Option<u128>, limit: u128) -> Result<u128> {
    match needed {
        Some(v) if v <= limit => Ok(v),
        Some(v) => Err(Error::BudgetExceeded { what, needed: v, limit }),
        None => Err(Error::BudgetExceeded {
            what,
            needed: u128::MAX,
            limit,
        }),
    }
}

/// Interval from bounds alone: a ball-counting lower bound and, for
/// homogeneous/Lee weight over Z2 and Z4, the Delsarte bound when the dual
/// is small enough.
pub fn bound_only_report(code: &LinearCode, metric: WeightMetric, cfg: &SearchConfig) -> Result<RadiusReport> {
    let timer = Timer::start();
    let size = code.size().unwrap_or(u128::MAX);
    let lower = ball_covering_lower_bound(code.ring(), code.len(), size, metric)?;
    let trivial = metric.max_element_weight(code.ring())? * code.len() as u32;
    // weights scale by 2^{s-2} beyond Z4, where counting distinct dual
    // weights no longer bounds the radius
    let hw_like = match code.ring().s() {
        1 => true,
        2 => matches!(metric, WeightMetric::Homogeneous | WeightMetric::Lee),
        _ => false,
    };
    let upper = if hw_like {
        match delsarte_bound(code, cfg) {
            Ok(d) => d.min(trivial),
            Err(_) => trivial,
        }
    } else {
        trivial
    };
    let stats = SearchStats {
        wall_time_ms: timer.ms(),
        ..Default::default()
    };
    Ok(RadiusReport::bounded(metric, lower, Some(upper), Method::BoundOnly, stats))
}

/// Runs the chosen engine; budget overruns degrade to [`bound_only_report`]
/// with a note naming the engine that gave up.
pub fn covering_radius(
    code: &LinearCode,
    metric: WeightMetric,
    method: MethodChoice,
    cfg: &SearchConfig,
) -> Result<RadiusReport> {
    metric.validate(code.ring())?;
    let choice = match method {
        MethodChoice::Auto => auto_choice(code, cfg),
        m => m,
    };
    let outcome = match choice {
        MethodChoice::Direct => covering_radius_direct(code, metric, cfg),
        MethodChoice::Syndrome => covering_radius_syndrome(code, metric, cfg),
        MethodChoice::Bfs { r_cap } => covering_radius_bfs(code, metric, r_cap, cfg),
        MethodChoice::Auto => bound_only_report(code, metric, cfg),
    };
    match outcome {
        Err(e @ Error::BudgetExceeded { .. }) => {
            let mut r = bound_only_report(code, metric, cfg)?;
            r.note = Some(e.to_string());
            Ok(r)
        }
        other => other,
    }
}

fn auto_choice(code: &LinearCode, cfg: &SearchConfig) -> MethodChoice {
    let ring = code.ring();
    let space = ring.space_size(code.len());
    let size = code.size();
    let pairs = space.zip(size).and_then(|(a, b)| a.checked_mul(b));
    if pairs.is_some_and(|p| p <= cfg.max_distance_evals.min(1 << 26)) {
        return MethodChoice::Direct;
    }
    let cosets_bits = ring.s() * code.len() as u32 - code.two_dimension();
    let cosets_fit = cosets_bits < 64 && (1u128 << cosets_bits) <= cfg.max_table_entries;
    if !cosets_fit {
        return MethodChoice::Auto;
    }
    if space.is_some_and(|v| v <= cfg.max_syndrome_vectors.min(1 << 24)) {
        MethodChoice::Syndrome
    } else {
        MethodChoice::Bfs { r_cap: u32::MAX }
    }
}

/// Histogram of coset-leader weights; the largest key is the covering radius.
pub fn coset_weight_distribution(
    code: &LinearCode,
    metric: WeightMetric,
    cfg: &SearchConfig,
) -> Result<BTreeMap<u32, u64>> {
    Ok(build_coset_table(code, metric, cfg)?.distribution())
}
