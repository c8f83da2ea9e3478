use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU16, AtomicU64, Ordering};

use rayon::prelude::*;

use super::{check_budget, Method, RadiusReport, SearchConfig, SearchStats, Timer};
use crate::error::{Error, Result};
use crate::linalg::LinearCode;
use crate::ring::{GrayWalker, RingSpec, WeightMetric, ZqVector};

/// Tables at most this large also keep a leader for every coset.
const WITNESS_TABLE_LIMIT: u64 = 1 << 22;
const EMPTY16: u16 = u16::MAX;
const RANK_BITS: u32 = 48;

/// Dense coset index built from a standard-form generator matrix of C⊥.
///
/// A dual row `h` at level `l` is divisible by `2^l`, so `h·u >> l` takes
/// `2^{s-l}` values; the fields are packed side by side. The packed index
/// ranges over exactly `[0, |Z^n| / |C|)` and is constant on cosets of C.
#[derive(Clone, Debug)]
pub struct SyndromeMap {
    ring: RingSpec,
    n: usize,
    rows: Vec<Vec<u8>>,
    levels: Vec<u32>,
    offsets: Vec<u32>,
    bits: u32,
    /// Top bit of every field, for lane-wise addition.
    high: u64,
    /// Packed change of the index when `delta` is added at `pos`,
    /// stored at `pos * q + delta`.
    addends: Vec<u64>,
}

#[derive(Clone, Debug)]
pub(crate) struct SyndromeState {
    pub(crate) index: u64,
}

/// Adds packed fields lane by lane, each modulo its own width.
#[inline]
fn lane_add(x: u64, y: u64, high: u64) -> u64 {
    ((x & !high) + (y & !high)) ^ ((x ^ y) & high)
}

impl SyndromeMap {
    pub fn new(code: &LinearCode) -> Result<Self> {
        let ring = code.ring();
        let n = code.len();
        let dual = code.dual();
        let sf = dual.standard_form();
        let rows: Vec<Vec<u8>> = sf
            .rows_in_code_order(ring)
            .into_iter()
            .map(ZqVector::into_coords)
            .collect();
        let levels = sf.levels.clone();
        let mut offsets = Vec::with_capacity(rows.len());
        let mut bits = 0u32;
        for &l in &levels {
            offsets.push(bits);
            bits += ring.s() - l;
        }
        if bits > 63 {
            return Err(Error::BudgetExceeded {
                what: "syndrome width (bits)",
                needed: bits as u128,
                limit: 63,
            });
        }
        let high = offsets
            .iter()
            .zip(&levels)
            .fold(0u64, |acc, (&off, &l)| acc | 1u64 << (off + ring.s() - l - 1));
        let q = ring.modulus() as usize;
        let mut map = Self {
            ring,
            n,
            rows,
            levels,
            offsets,
            bits,
            high,
            addends: Vec::with_capacity(n * q),
        };
        for pos in 0..n {
            for delta in 0..q {
                let packed = map.rows.iter().enumerate().fold(0u64, |acc, (j, h)| {
                    let v = ring.reduce(h[pos] as i64 * delta as i64);
                    acc | map.field(j, v)
                });
                map.addends.push(packed);
            }
        }
        Ok(map)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn num_cosets(&self) -> u64 {
        1u64 << self.bits
    }

    #[inline]
    fn field(&self, j: usize, val: u8) -> u64 {
        ((val >> self.levels[j]) as u64) << self.offsets[j]
    }

    pub(crate) fn state(&self, u: &[u8]) -> SyndromeState {
        let index = self.rows.iter().enumerate().fold(0u64, |acc, (j, h)| {
            acc | self.field(j, crate::ring::dot_raw(self.ring, h, u))
        });
        SyndromeState { index }
    }

    /// Adds `delta` to coordinate `pos` of the tracked vector.
    #[inline]
    pub(crate) fn apply(&self, st: &mut SyndromeState, pos: usize, delta: u8) {
        let add = self.addends[pos * self.ring.modulus() as usize + delta as usize];
        st.index = lane_add(st.index, add, self.high);
    }

    pub fn syndrome(&self, u: &ZqVector) -> u64 {
        self.state(u.coords()).index
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

enum Store {
    /// `(weight << 48) | lex rank` of the best vector seen per coset.
    Witnessed(Vec<AtomicU64>),
    WeightOnly(Vec<AtomicU16>),
}

/// Minimum weight (and, for small tables, a lexicographically first leader)
/// of every coset of a code.
pub struct CosetLeaderTable {
    metric: WeightMetric,
    map: SyndromeMap,
    store: Store,
    complete: bool,
    stats: SearchStats,
}

impl CosetLeaderTable {
    pub fn metric(&self) -> WeightMetric {
        self.metric
    }

    pub fn syndrome_map(&self) -> &SyndromeMap {
        &self.map
    }

    pub fn num_cosets(&self) -> u64 {
        self.map.num_cosets()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    pub fn weight(&self, syndrome: u64) -> Option<u32> {
        match &self.store {
            Store::Witnessed(v) => {
                let x = v.get(syndrome as usize)?.load(Ordering::Relaxed);
                (x != u64::MAX).then_some((x >> RANK_BITS) as u32)
            }
            Store::WeightOnly(v) => {
                let x = v.get(syndrome as usize)?.load(Ordering::Relaxed);
                (x != EMPTY16).then_some(x as u32)
            }
        }
    }

    /// Lexicographically first minimum-weight vector of the coset, when the
    /// table keeps leaders.
    pub fn leader(&self, syndrome: u64) -> Option<ZqVector> {
        match &self.store {
            Store::Witnessed(v) => {
                let x = v.get(syndrome as usize)?.load(Ordering::Relaxed);
                (x != u64::MAX).then(|| {
                    let rank = x & ((1u64 << RANK_BITS) - 1);
                    ZqVector::from_lex_rank(self.map.ring, self.map.n, rank as u128)
                })
            }
            Store::WeightOnly(_) => None,
        }
    }

    /// Weight of the coset containing `u`, i.e. its distance to the code.
    pub fn coset_weight(&self, u: &ZqVector) -> Option<u32> {
        self.weight(self.map.syndrome(u))
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        (0..self.num_cosets()).filter_map(|s| self.weight(s).map(|w| (s, w)))
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.entries().map(|(_, w)| w).max()
    }

    pub fn distribution(&self) -> BTreeMap<u32, u64> {
        let mut out = BTreeMap::new();
        for (_, w) in self.entries() {
            *out.entry(w).or_insert(0) += 1;
        }
        out
    }

    /// Lexicographically first vector lying in a coset of weight `target`.
    fn first_vector_in_weight_class(&self, target: u32) -> Option<ZqVector> {
        let ring = self.map.ring;
        let q = ring.modulus() as u8;
        let mask = ring.mask();
        let mut u = vec![0u8; self.map.n];
        let mut st = self.map.state(&u);
        loop {
            if self.weight(st.index) == Some(target) {
                return Some(ZqVector::new(ring, u).expect("reduced"));
            }
            let mut pos = u.len();
            loop {
                if pos == 0 {
                    return None;
                }
                pos -= 1;
                let old = u[pos];
                let new = if old + 1 < q { old + 1 } else { 0 };
                u[pos] = new;
                self.map.apply(&mut st, pos, new.wrapping_sub(old) & mask);
                if new != 0 {
                    break;
                }
            }
        }
    }
}

/// Walks all of Z_{2^s}^n in Gray order, updating syndrome and weight by one
/// coordinate per step, and keeps the minimum weight per coset.
pub fn build_coset_table(code: &LinearCode, metric: WeightMetric, cfg: &SearchConfig) -> Result<CosetLeaderTable> {
    let ring = code.ring();
    metric.validate(ring)?;
    let n = code.len();
    let space = check_budget(
        "syndrome search (vectors)",
        ring.space_size(n),
        cfg.max_syndrome_vectors,
    )?;
    let cosets_bits = (ring.s() * n as u32).saturating_sub(code.two_dimension());
    check_budget(
        "syndrome table (entries)",
        (cosets_bits < 127).then(|| 1u128 << cosets_bits),
        cfg.max_table_entries,
    )?;
    let table = metric.weight_table(ring)?;
    let max_w = metric.max_element_weight(ring)? as u64 * n as u64;
    if max_w >= EMPTY16 as u64 {
        return Err(Error::InvalidParameters("weights exceed table width".into()));
    }
    let timer = Timer::start();
    let map = SyndromeMap::new(code)?;
    let cosets = map.num_cosets();
    let witnessed = cosets <= WITNESS_TABLE_LIMIT && space < (1u128 << RANK_BITS);
    let store = if witnessed {
        Store::Witnessed((0..cosets).map(|_| AtomicU64::new(u64::MAX)).collect())
    } else {
        Store::WeightOnly((0..cosets).map(|_| AtomicU16::new(EMPTY16)).collect())
    };

    let q = ring.modulus() as usize;
    let mask = ring.mask();
    let mut prefix_len = 0usize;
    while prefix_len < n && q.pow(prefix_len as u32) < 256 {
        prefix_len += 1;
    }
    let chunks = q.pow(prefix_len as u32) as u64;
    let suffix = n - prefix_len;
    let powers: Vec<u64> = (0..n)
        .map(|pos| (q as u64).saturating_pow((n - 1 - pos) as u32))
        .collect();

    let record = |index: u64, w: u32, rank: u64| match &store {
        Store::Witnessed(v) => {
            let packed = ((w as u64) << RANK_BITS) | rank;
            let slot = &v[index as usize];
            if packed < slot.load(Ordering::Relaxed) {
                slot.fetch_min(packed, Ordering::Relaxed);
            }
        }
        Store::WeightOnly(v) => {
            let slot = &v[index as usize];
            let w = w as u16;
            if w < slot.load(Ordering::Relaxed) {
                slot.fetch_min(w, Ordering::Relaxed);
            }
        }
    };

    let walk_chunk = |chunk: u64| {
        let mut u = vec![0u8; n];
        let mut rest = chunk;
        for i in (0..prefix_len).rev() {
            u[i] = (rest % q as u64) as u8;
            rest /= q as u64;
        }
        let mut st = map.state(&u);
        let mut w: u32 = u.iter().map(|&x| table[x as usize]).sum();
        let mut rank: u64 = if witnessed {
            u.iter().fold(0u64, |acc, &x| acc * q as u64 + x as u64)
        } else {
            0
        };
        record(st.index, w, rank);
        let mut walker = GrayWalker::new(q as u8, suffix);
        while let Some(step) = walker.step() {
            let pos = prefix_len + step.pos;
            map.apply(&mut st, pos, step.new.wrapping_sub(step.old) & mask);
            w = w + table[step.new as usize] - table[step.old as usize];
            if witnessed {
                if step.new > step.old {
                    rank += powers[pos];
                } else {
                    rank -= powers[pos];
                }
            }
            record(st.index, w, rank);
        }
    };

    cfg.install(|| (0..chunks).into_par_iter().for_each(walk_chunk));

    let mut out = CosetLeaderTable {
        metric,
        map,
        store,
        complete: false,
        stats: SearchStats::default(),
    };
    out.complete = (0..cosets).all(|s| out.weight(s).is_some());
    out.stats = SearchStats {
        vectors_visited: space,
        distance_evaluations: 0,
        wall_time_ms: timer.ms(),
    };
    Ok(out)
}

/// Covering radius as the largest coset-leader weight.
///
/// The witness is the lexicographically first vector of the whole space
/// lying in a coset of maximal weight.
pub fn covering_radius_syndrome(code: &LinearCode, metric: WeightMetric, cfg: &SearchConfig) -> Result<RadiusReport> {
    let timer = Timer::start();
    let table = build_coset_table(code, metric, cfg)?;
    assert!(table.is_complete(), "every coset is visited by a full walk");
    let radius = table.max_weight().expect("at least one coset");
    let witness = table.first_vector_in_weight_class(radius).map(|v| v.to_string());
    let mut stats = table.stats();
    stats.wall_time_ms = timer.ms();
    Ok(RadiusReport::exact(metric, radius, Method::SyndromeTable, witness, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::covering_radius_direct;
    use crate::families::{repetition_alpha, repetition_beta, simplex_alpha};

    #[test]
    fn examples() {
        let cfg = SearchConfig::default();
        // 2 3 3 3 is at Lee distance 5 from each of the four codewords
        let r = covering_radius_syndrome(&simplex_alpha(1).unwrap(), WeightMetric::Lee, &cfg).unwrap();
        assert_eq!(r.value, Some(5));
        let r = covering_radius_syndrome(&simplex_alpha(1).unwrap(), WeightMetric::Euclidean, &cfg).unwrap();
        assert_eq!(r.value, Some(8));
        let r = covering_radius_syndrome(&LinearCode::zero(RingSpec::Z4, 1), WeightMetric::Lee, &cfg).unwrap();
        assert_eq!(r.value, Some(2));
        assert_eq!(r.witness.as_deref(), Some("2"));
    }

    #[test]
    fn syndrome_is_a_dense_coset_invariant() {
        let code = LinearCode::from_rows(RingSpec::Z4, &[vec![1, 2, 0, 3], vec![0, 2, 2, 0]]).unwrap();
        let map = SyndromeMap::new(&code).unwrap();
        assert_eq!(map.num_cosets() as u128, 256 / code.size().unwrap());
        let words = code.enumerate_codewords(26).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for u in crate::ring::enumerate_vectors(RingSpec::Z4, 4, crate::ring::VectorOrder::Lexicographic, 1 << 20).unwrap() {
            let s = map.syndrome(&u);
            assert!(s < map.num_cosets());
            seen.insert(s);
            for c in words.iter() {
                assert_eq!(map.syndrome(&u.add(c).unwrap()), s);
            }
        }
        assert_eq!(seen.len() as u64, map.num_cosets());
    }

    #[test]
    fn table_leaders_are_minimal_and_lex_first() {
        let cfg = SearchConfig::default();
        let code = repetition_beta(3).unwrap();
        let table = build_coset_table(&code, WeightMetric::Lee, &cfg).unwrap();
        assert!(table.is_complete());
        assert_eq!(table.num_cosets(), 16);
        let words = code.enumerate_codewords(26).unwrap();
        for (s, w) in table.entries().collect::<Vec<_>>() {
            let leader = table.leader(s).unwrap();
            assert_eq!(leader.weight(WeightMetric::Lee).unwrap(), w);
            // oracle: the coset's members, sorted
            let mut members: Vec<_> = words.iter().map(|c| leader.add(c).unwrap()).collect();
            members.sort();
            let min = members.iter().map(|v| v.weight(WeightMetric::Lee).unwrap()).min().unwrap();
            assert_eq!(min, w);
            let first = members.iter().find(|v| v.weight(WeightMetric::Lee).unwrap() == w).unwrap();
            assert_eq!(first, &leader);
        }
    }

    #[test]
    fn agrees_with_direct_across_thread_counts() {
        for code in [repetition_alpha(4).unwrap(), repetition_beta(5).unwrap(), LinearCode::zero(RingSpec::Z4, 3)] {
            for m in WeightMetric::ALL {
                let d = covering_radius_direct(&code, m, &SearchConfig::default()).unwrap();
                for t in [1, 2, 5] {
                    let s = covering_radius_syndrome(&code, m, &SearchConfig::default().with_threads(t)).unwrap();
                    assert_eq!(s.value, d.value);
                    assert_eq!(s.witness, d.witness);
                }
            }
        }
    }

    #[test]
    fn weight_only_store_gives_same_radius() {
        // 4^12 / 2 = 2^23 cosets is past the witness store
        let code = LinearCode::from_rows(RingSpec::Z4, &[vec![2; 12]]).unwrap();
        let table = build_coset_table(&code, WeightMetric::Lee, &SearchConfig::default()).unwrap();
        assert!(table.leader(0).is_none());
        // 1^12 is at distance 12 from both 0 and 2^12
        assert_eq!(table.max_weight(), Some(12));
    }

    #[test]
    fn budgets() {
        let cfg = SearchConfig {
            max_table_entries: 8,
            ..Default::default()
        };
        assert!(matches!(
            build_coset_table(&repetition_beta(3).unwrap(), WeightMetric::Lee, &cfg),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
