use std::ops::ControlFlow;

use super::syndrome::{SyndromeMap, SyndromeState};
use super::{check_budget, Method, RadiusReport, SearchConfig, SearchStats, Timer};
use crate::error::{Error, Result};
use crate::linalg::LinearCode;
use crate::ring::{RingSpec, WeightMetric, ZqVector};

/// Enumerates the vectors of one exact weight in lexicographic order,
/// keeping the syndrome of the current vector up to date.
struct WeightWalker<'a> {
    map: &'a SyndromeMap,
    table: Vec<u32>,
    max_w: u32,
    mask: u8,
    u: Vec<u8>,
    st: SyndromeState,
    visited: u128,
    limit: u128,
}

enum Stop {
    Found,
    Budget,
}

impl<'a> WeightWalker<'a> {
    fn new(map: &'a SyndromeMap, ring: RingSpec, metric: WeightMetric, limit: u128) -> Result<Self> {
        let n = map.len();
        let u = vec![0u8; n];
        let st = map.state(&u);
        Ok(Self {
            map,
            table: metric.weight_table(ring)?,
            max_w: metric.max_element_weight(ring)?,
            mask: ring.mask(),
            u,
            st,
            visited: 0,
            limit,
        })
    }

    fn walk(&mut self, weight: u32, visit: &mut impl FnMut(&[u8], u64) -> bool) -> ControlFlow<Stop> {
        self.descend(0, weight, visit)
    }

    fn descend(&mut self, pos: usize, remaining: u32, visit: &mut impl FnMut(&[u8], u64) -> bool) -> ControlFlow<Stop> {
        let n = self.u.len();
        if pos == n {
            if remaining != 0 {
                return ControlFlow::Continue(());
            }
            self.visited += 1;
            if self.visited > self.limit {
                return ControlFlow::Break(Stop::Budget);
            }
            return if visit(&self.u, self.st.index) {
                ControlFlow::Break(Stop::Found)
            } else {
                ControlFlow::Continue(())
            };
        }
        if remaining > self.max_w * (n - pos) as u32 {
            return ControlFlow::Continue(());
        }
        let q = self.table.len();
        for x in 0..q {
            let w = self.table[x];
            if w > remaining {
                continue;
            }
            self.set(pos, x as u8);
            let flow = self.descend(pos + 1, remaining - w, visit);
            if flow.is_break() {
                self.set(pos, 0);
                return flow;
            }
        }
        self.set(pos, 0);
        ControlFlow::Continue(())
    }

    #[inline]
    fn set(&mut self, pos: usize, x: u8) {
        let old = self.u[pos];
        if old != x {
            self.map.apply(&mut self.st, pos, x.wrapping_sub(old) & self.mask);
            self.u[pos] = x;
        }
    }
}

/// Covering radius by visiting vectors in order of increasing weight until
/// every coset has been reached; the last weight needed is the radius.
///
/// Only weights up to `r_cap` are tried. The witness is the lexicographically
/// first minimum-weight leader of a deepest coset.
pub fn covering_radius_bfs(
    code: &LinearCode,
    metric: WeightMetric,
    r_cap: u32,
    cfg: &SearchConfig,
) -> Result<RadiusReport> {
    let ring = code.ring();
    metric.validate(ring)?;
    let n = code.len();
    let cosets_bits = (ring.s() * n as u32).saturating_sub(code.two_dimension());
    let cosets = check_budget(
        "weight search (coset bitmap)",
        (cosets_bits < 64).then(|| 1u128 << cosets_bits),
        cfg.max_table_entries,
    )? as u64;
    let timer = Timer::start();
    let map = SyndromeMap::new(code)?;
    let mut walker = WeightWalker::new(&map, ring, metric, cfg.max_bfs_vectors)?;
    let cap = r_cap.min(metric.max_element_weight(ring)? * n as u32);

    let mut covered = vec![0u64; cosets.div_ceil(64) as usize];
    let mut remaining = cosets;
    for w in 0..=cap {
        let mut witness: Option<Vec<u8>> = None;
        let flow = walker.walk(w, &mut |u, s| {
            let (word, bit) = ((s / 64) as usize, 1u64 << (s % 64));
            if covered[word] & bit == 0 {
                covered[word] |= bit;
                remaining -= 1;
                if witness.is_none() {
                    witness = Some(u.to_vec());
                }
            }
            remaining == 0
        });
        let stats = SearchStats {
            vectors_visited: walker.visited,
            distance_evaluations: 0,
            wall_time_ms: timer.ms(),
        };
        match flow {
            ControlFlow::Break(Stop::Found) => {
                let hole = ZqVector::new(ring, witness.expect("a coset was covered")).expect("reduced");
                return Ok(RadiusReport::exact(metric, w, Method::WeightBfs, Some(hole.to_string()), stats));
            }
            ControlFlow::Break(Stop::Budget) => {
                let mut r = RadiusReport::bounded(metric, w, None, Method::WeightBfs, stats);
                r.note = Some(format!("vector budget {} exhausted at weight {w}", cfg.max_bfs_vectors));
                return Ok(r);
            }
            ControlFlow::Continue(()) => {}
        }
    }
    let stats = SearchStats {
        vectors_visited: walker.visited,
        distance_evaluations: 0,
        wall_time_ms: timer.ms(),
    };
    let mut r = RadiusReport::bounded(metric, cap + 1, None, Method::WeightBfs, stats);
    r.note = Some(format!("cosets remain uncovered up to weight {cap}"));
    Ok(r)
}

/// Smallest weight of a nonzero codeword, searching weights `1..=cap`.
///
/// Returns `Ok(None)` if no codeword of weight at most `cap` exists.
pub fn minimum_weight_search(code: &LinearCode, metric: WeightMetric, cap: u32, budget: u128) -> Result<Option<usize>> {
    let ring = code.ring();
    metric.validate(ring)?;
    let map = SyndromeMap::new(code)?;
    let mut walker = WeightWalker::new(&map, ring, metric, budget)?;
    for w in 1..=cap {
        match walker.walk(w, &mut |_, s| s == 0) {
            ControlFlow::Break(Stop::Found) => return Ok(Some(w as usize)),
            ControlFlow::Break(Stop::Budget) => {
                return Err(Error::BudgetExceeded {
                    what: "minimum weight search (vectors)",
                    needed: walker.visited,
                    limit: budget,
                })
            }
            ControlFlow::Continue(()) => {}
        }
    }
    Ok(None)
}
