use rayon::prelude::*;

use super::{check_budget, Method, RadiusReport, SearchConfig, SearchStats, Timer};
use crate::error::{Error, Result};
use crate::linalg::LinearCode;
use crate::ring::{RingSpec, WeightMetric, ZqVector};

/// Covering radius by scanning all (2^s)^n vectors against every codeword.
pub fn covering_radius_direct(code: &LinearCode, metric: WeightMetric, cfg: &SearchConfig) -> Result<RadiusReport> {
    metric.validate(code.ring())?;
    let pairs = code
        .ring()
        .space_size(code.len())
        .zip(code.size())
        .and_then(|(a, b)| a.checked_mul(b));
    check_budget("direct search (distance evaluations)", pairs, cfg.max_distance_evals)?;
    let words = code.enumerate_codewords(cfg.codeword_dim_limit)?;
    covering_radius_of_words(code.ring(), code.len(), &words.words, metric, cfg)
}

/// Covering radius of an arbitrary (possibly non-linear) set of words.
///
/// The witness is the lexicographically first vector at maximal distance.
pub fn covering_radius_of_words(
    ring: RingSpec,
    n: usize,
    words: &[ZqVector],
    metric: WeightMetric,
    cfg: &SearchConfig,
) -> Result<RadiusReport> {
    if words.is_empty() {
        return Err(Error::InvalidParameters("covering radius of an empty word set".into()));
    }
    if let Some(w) = words.iter().find(|w| w.ring() != ring || w.len() != n) {
        return Err(Error::Mismatch(format!("word `{w}` is not a {ring} vector of length {n}")));
    }
    metric.validate(ring)?;
    let space = ring.space_size(n);
    let pairs = space.and_then(|s| s.checked_mul(words.len() as u128));
    let evals = check_budget("direct search (distance evaluations)", pairs, cfg.max_distance_evals)?;
    let timer = Timer::start();

    let table = metric.weight_table(ring)?;
    let q = ring.modulus() as usize;
    let m = words.len();
    // column-major copy: cols[i * m + c] = words[c][i]
    let mut cols = vec![0u8; n * m];
    for (c, w) in words.iter().enumerate() {
        for (i, &x) in w.coords().iter().enumerate() {
            cols[i * m + c] = x;
        }
    }
    let mask = ring.mask();

    let mut prefix_len = 0usize;
    while prefix_len < n && q.pow(prefix_len as u32) < 256 {
        prefix_len += 1;
    }
    let chunks = q.pow(prefix_len as u32) as u64;
    let suffix_size = (q as u128).pow((n - prefix_len) as u32);

    let scan_chunk = |chunk: u64| -> (u32, u128) {
        let mut u = vec![0u8; n];
        let mut rest = chunk;
        for i in (0..prefix_len).rev() {
            u[i] = (rest % q as u64) as u8;
            rest /= q as u64;
        }
        let mut dist = vec![0u32; m];
        for (i, &x) in u.iter().enumerate() {
            for (d, &cw) in dist.iter_mut().zip(&cols[i * m..(i + 1) * m]) {
                *d += table[(x.wrapping_sub(cw) & mask) as usize];
            }
        }
        let base = chunk as u128 * suffix_size;
        let mut best: Option<(u32, u128)> = None;
        let mut local: u128 = 0;
        loop {
            let d = *dist.iter().min().expect("non-empty");
            if best.is_none_or(|b| d > b.0) {
                best = Some((d, base + local));
            }
            // lexicographic successor on the suffix, updating distances
            let mut pos = n;
            let mut advanced = false;
            while pos > prefix_len {
                pos -= 1;
                let old = u[pos];
                let new = if (old as usize) + 1 < q { old + 1 } else { 0 };
                u[pos] = new;
                let col = &cols[pos * m..(pos + 1) * m];
                for (d, &cw) in dist.iter_mut().zip(col) {
                    *d = *d + table[(new.wrapping_sub(cw) & mask) as usize]
                        - table[(old.wrapping_sub(cw) & mask) as usize];
                }
                if new != 0 {
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
            local += 1;
        }
        best.expect("chunk holds at least one vector")
    };

    let best = cfg.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(scan_chunk)
            .reduce(|| (0u32, u128::MAX), merge_best)
    });
    let witness = ZqVector::from_lex_rank(ring, n, best.1);
    let stats = SearchStats {
        vectors_visited: space.unwrap_or(0),
        distance_evaluations: evals,
        wall_time_ms: timer.ms(),
    };
    Ok(RadiusReport::exact(metric, best.0, Method::Direct, Some(witness.to_string()), stats))
}

/// Larger distance wins; ties go to the smaller lexicographic rank.
pub(crate) fn merge_best(a: (u32, u128), b: (u32, u128)) -> (u32, u128) {
    match a.0.cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}
