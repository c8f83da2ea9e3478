use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{covering_radius, MethodChoice, SearchConfig};
use crate::error::{Error, Result};
use crate::linalg::LinearCode;
use crate::ring::{RingSpec, WeightMetric, ZqVector};

/// Smallest `r` with `code_size * sum_{i<=r} C(m, i) >= 2^m`, where
/// `m = 2^{s-1} n` is the length of the binary image.
///
/// Over Z2 and Z4 this is the classical sphere-covering lower bound for the
/// homogeneous radius. Beyond Z4 the binary image is not onto, and the
/// inequality can fail (the full space Z8 already violates it).
pub fn sphere_covering_lower_bound(n: usize, code_size: u128, s: u32) -> u32 {
    assert!(code_size >= 1, "a code has at least one word");
    let m = (1usize << (s - 1)) * n;
    let target = BigUint::one() << m;
    let size = BigUint::from(code_size);
    let mut binom = BigUint::one();
    let mut sum = BigUint::zero();
    for r in 0..=m {
        if r > 0 {
            binom = binom * BigUint::from(m - r + 1) / BigUint::from(r);
        }
        sum += &binom;
        if &size * &sum >= target {
            return r as u32;
        }
    }
    m as u32
}

/// Sizes of the balls of every radius around a point of `ring^n`.
fn ball_sizes(ring: RingSpec, n: usize, metric: WeightMetric) -> Result<Vec<BigUint>> {
    let table = metric.weight_table(ring)?;
    let max_w = *table.iter().max().expect("non-empty ring") as usize;
    let mut single = vec![0u64; max_w + 1];
    for &w in &table {
        single[w as usize] += 1;
    }
    // weight enumerator of one coordinate, raised to the n-th power
    let mut poly = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); poly.len() + max_w];
        for (i, a) in poly.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in single.iter().enumerate() {
                if b != 0 {
                    next[i + j] += a * b;
                }
            }
        }
        poly = next;
    }
    let mut acc = BigUint::zero();
    Ok(poly
        .into_iter()
        .map(|c| {
            acc += c;
            acc.clone()
        })
        .collect())
}

/// Smallest `r` such that `|C|` balls of radius `r` can cover `ring^n`
/// under `metric`; a valid lower bound for every ring and metric.
pub fn ball_covering_lower_bound(ring: RingSpec, n: usize, code_size: u128, metric: WeightMetric) -> Result<u32> {
    metric.validate(ring)?;
    if code_size == 0 {
        return Err(Error::InvalidParameters("code size must be positive".into()));
    }
    let space = BigUint::from(ring.modulus()).pow(n as u32);
    let size = BigUint::from(code_size);
    let balls = ball_sizes(ring, n, metric)?;
    let r = balls
        .iter()
        .position(|b| &size * b >= space)
        .expect("the largest ball is the whole space");
    Ok(r as u32)
}

/// Number of distinct nonzero homogeneous weights among the codewords of the
/// dual; over Z2 and Z4 this bounds the homogeneous (= Lee) covering radius.
pub fn delsarte_bound(code: &LinearCode, cfg: &SearchConfig) -> Result<u32> {
    let dual = code.dual();
    let words = dual.enumerate_codewords(cfg.codeword_dim_limit)?;
    let weights: BTreeSet<u32> = words
        .iter()
        .map(|c| c.weight(WeightMetric::Homogeneous).expect("homogeneous weight is always defined"))
        .filter(|&w| w != 0)
        .collect();
    Ok(weights.len() as u32)
}

/// Code generated by `[[0, G1], [G0, A]]`, with the columns of `c0` first.
pub fn mattson_stack(c0: &LinearCode, c1: &LinearCode, a: &[Vec<u8>]) -> Result<LinearCode> {
    let ring = c0.ring();
    if c1.ring() != ring {
        return Err(Error::Mismatch(format!("codes over {} and {}", ring, c1.ring())));
    }
    let g0 = c0.generators();
    if a.len() != g0.len() {
        return Err(Error::Mismatch(format!(
            "connecting matrix has {} rows, expected {}",
            a.len(),
            g0.len()
        )));
    }
    if let Some(row) = a.iter().find(|r| r.len() != c1.len()) {
        return Err(Error::Mismatch(format!(
            "connecting matrix row has {} columns, expected {}",
            row.len(),
            c1.len()
        )));
    }
    let mut rows = Vec::with_capacity(g0.len() + c1.generators().len());
    for g in c1.generators() {
        let mut row = vec![0u8; c0.len()];
        row.extend_from_slice(g.coords());
        rows.push(ZqVector::new(ring, row)?);
    }
    for (g, extra) in g0.iter().zip(a) {
        let mut row = g.coords().to_vec();
        row.extend_from_slice(extra);
        rows.push(ZqVector::new(ring, row)?);
    }
    LinearCode::new(ring, c0.len() + c1.len(), rows)
}

/// Reads a generator matrix as `[[0, G1], [G0, A]]`: the first `top_rows`
/// rows must vanish on the first `split` columns. Returns `(C0, C1)`.
pub fn mattson_split(code: &LinearCode, top_rows: usize, split: usize) -> Result<(LinearCode, LinearCode)> {
    let ring = code.ring();
    let n = code.len();
    let gens = code.generators();
    if split == 0 || split >= n || top_rows > gens.len() {
        return Err(Error::InvalidParameters(format!(
            "cannot split {} rows x {n} columns at {top_rows}:{split}",
            gens.len()
        )));
    }
    let (top, bottom) = gens.split_at(top_rows);
    if let Some(i) = top.iter().position(|g| g.coords()[..split].iter().any(|&x| x != 0)) {
        return Err(Error::InvalidParameters(format!(
            "row {i} is nonzero on the first {split} columns"
        )));
    }
    let part = |rows: &[ZqVector], range: std::ops::Range<usize>| -> Result<LinearCode> {
        let len = range.len();
        let sub: Vec<ZqVector> = rows
            .iter()
            .map(|g| ZqVector::new(ring, g.coords()[range.clone()].to_vec()))
            .collect::<Result<_>>()?;
        if sub.is_empty() {
            Ok(LinearCode::zero(ring, len))
        } else {
            LinearCode::new(ring, len, sub)
        }
    };
    Ok((part(bottom, 0..split)?, part(top, split..n)?))
}

/// Upper bound `r(C0) + r(C1)` from a block decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MattsonUpper {
    pub value: u32,
    pub top_rows: usize,
    pub split_column: usize,
    pub c0_radius: u32,
    pub c1_radius: u32,
    /// Whether both component radii were computed exactly.
    pub exact_components: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub metric: WeightMetric,
    /// Binary-image sphere-covering bound on the homogeneous radius.
    pub sphere_covering_lb: u32,
    /// Ball-counting bound under `metric` itself.
    pub ball_lb: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delsarte_ub: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mattson_ub: Option<MattsonUpper>,
}

/// Collects the bounds that apply to `code` under `metric`. `mattson` gives
/// an optional `(top_rows, split_column)` decomposition.
pub fn bound_report(
    code: &LinearCode,
    metric: WeightMetric,
    mattson: Option<(usize, usize)>,
    cfg: &SearchConfig,
) -> Result<BoundReport> {
    let ring = code.ring();
    metric.validate(ring)?;
    let size = code.size().unwrap_or(u128::MAX);
    let sphere_covering_lb = sphere_covering_lower_bound(code.len(), size, ring.s());
    let ball_lb = ball_covering_lower_bound(ring, code.len(), size, metric)?;
    let delsarte_applies = match ring.s() {
        1 => true,
        2 => matches!(metric, WeightMetric::Homogeneous | WeightMetric::Lee),
        _ => false,
    };
    let delsarte_ub = if delsarte_applies {
        match delsarte_bound(code, cfg) {
            Ok(v) => Some(v),
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let mattson_ub = match mattson {
        None => None,
        Some((rows, split)) => {
            let (c0, c1) = mattson_split(code, rows, split)?;
            let r0 = covering_radius(&c0, metric, MethodChoice::Auto, cfg)?;
            let r1 = covering_radius(&c1, metric, MethodChoice::Auto, cfg)?;
            match (r0.upper(), r1.upper()) {
                (Some(a), Some(b)) => Some(MattsonUpper {
                    value: a + b,
                    top_rows: rows,
                    split_column: split,
                    c0_radius: a,
                    c1_radius: b,
                    exact_components: r0.is_exact() && r1.is_exact(),
                }),
                _ => None,
            }
        }
    };
    Ok(BoundReport {
        metric,
        sphere_covering_lb,
        ball_lb,
        delsarte_ub,
        mattson_ub,
    })
}
