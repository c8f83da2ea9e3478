//! Elements and vectors of Z_{2^s}, the four weight functions, the Z4 Gray
//! map, and deterministic enumeration of the ambient space.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ring Z_{2^s}. Coordinates are stored as `u8`, so `s` is capped at 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct RingSpec {
    s: u32,
}

impl RingSpec {
    pub const Z2: RingSpec = RingSpec { s: 1 };
    pub const Z4: RingSpec = RingSpec { s: 2 };

    pub fn new(s: u32) -> Result<Self> {
        if (1..=8).contains(&s) {
            Ok(Self { s })
        } else {
            Err(Error::InvalidRing(s))
        }
    }

    pub fn s(self) -> u32 {
        self.s
    }

    pub fn modulus(self) -> u32 {
        1 << self.s
    }

    pub(crate) fn mask(self) -> u8 {
        (self.modulus() - 1) as u8
    }

    /// The element 2^{s-1}, the unique element of order two.
    pub fn half(self) -> u8 {
        (1u32 << (self.s - 1)) as u8
    }

    pub fn reduce(self, x: i64) -> u8 {
        x.rem_euclid(self.modulus() as i64) as u8
    }

    /// 2-adic valuation of `x`; zero has valuation `s`.
    pub fn valuation(self, x: u8) -> u32 {
        if x == 0 {
            self.s
        } else {
            x.trailing_zeros()
        }
    }

    /// Multiplicative inverse of an odd element.
    pub fn unit_inverse(self, u: u8) -> u8 {
        debug_assert!(u & 1 == 1);
        // Newton iteration: each step doubles the number of correct low bits.
        let mut inv: u32 = u as u32;
        for _ in 0..3 {
            inv = inv.wrapping_mul(2u32.wrapping_sub((u as u32).wrapping_mul(inv)));
        }
        (inv & self.mask() as u32) as u8
    }

    /// Number of vectors in Z_{2^s}^n, or `None` on overflow.
    pub fn space_size(self, n: usize) -> Option<u128> {
        let bits = (self.s as usize).checked_mul(n)?;
        if bits >= 128 {
            None
        } else {
            Some(1u128 << bits)
        }
    }
}

impl TryFrom<u32> for RingSpec {
    type Error = Error;
    fn try_from(s: u32) -> Result<Self> {
        RingSpec::new(s)
    }
}

impl From<RingSpec> for u32 {
    fn from(r: RingSpec) -> u32 {
        r.s
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{}", self.modulus())
    }
}

/// A vector over Z_{2^s} with every coordinate reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZqVector {
    ring: RingSpec,
    coords: Vec<u8>,
}

impl ZqVector {
    pub fn new(ring: RingSpec, coords: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = coords.iter().find(|&&c| c as u32 >= ring.modulus()) {
            return Err(Error::CoordinateOutOfRange {
                value: bad as i64,
                modulus: ring.modulus(),
            });
        }
        Ok(Self { ring, coords })
    }

    /// Builds a vector reducing every entry mod 2^s.
    pub fn from_i64s(ring: RingSpec, xs: &[i64]) -> Self {
        Self {
            ring,
            coords: xs.iter().map(|&x| ring.reduce(x)).collect(),
        }
    }

    pub(crate) fn from_raw(ring: RingSpec, coords: Vec<u8>) -> Self {
        debug_assert!(coords.iter().all(|&c| (c as u32) < ring.modulus()));
        Self { ring, coords }
    }

    pub fn zeros(ring: RingSpec, n: usize) -> Self {
        Self {
            ring,
            coords: vec![0; n],
        }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u8> {
        self.coords
    }

    pub fn get(&self, i: usize) -> u8 {
        self.coords[i]
    }

    pub fn set(&mut self, i: usize, x: i64) {
        self.coords[i] = self.ring.reduce(x);
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check_compatible(&self, other: &ZqVector) -> Result<()> {
        if self.ring != other.ring || self.len() != other.len() {
            return Err(Error::Mismatch(format!(
                "{} vector of length {} vs {} vector of length {}",
                self.ring,
                self.len(),
                other.ring,
                other.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &ZqVector) -> Result<ZqVector> {
        self.check_compatible(other)?;
        let mask = self.ring.mask();
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.wrapping_add(*b) & mask)
            .collect();
        Ok(Self::from_raw(self.ring, coords))
    }

    pub fn sub(&self, other: &ZqVector) -> Result<ZqVector> {
        self.check_compatible(other)?;
        let mask = self.ring.mask();
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.wrapping_sub(*b) & mask)
            .collect();
        Ok(Self::from_raw(self.ring, coords))
    }

    pub fn scale(&self, k: i64) -> ZqVector {
        let k = self.ring.reduce(k);
        let mask = self.ring.mask();
        let coords = self.coords.iter().map(|a| a.wrapping_mul(k) & mask).collect();
        Self::from_raw(self.ring, coords)
    }

    /// Standard inner product, reduced mod 2^s.
    pub fn dot(&self, other: &ZqVector) -> Result<u8> {
        self.check_compatible(other)?;
        Ok(dot_raw(self.ring, &self.coords, &other.coords))
    }

    pub fn weight(&self, metric: WeightMetric) -> Result<u32> {
        let table = metric.weight_table(self.ring)?;
        Ok(self.coords.iter().map(|&c| table[c as usize]).sum())
    }

    /// Position of this vector in lexicographic order (first coordinate most
    /// significant).
    pub fn lex_rank(&self) -> u128 {
        let q = self.ring.modulus() as u128;
        self.coords.iter().fold(0u128, |acc, &c| acc * q + c as u128)
    }

    pub fn from_lex_rank(ring: RingSpec, n: usize, mut rank: u128) -> ZqVector {
        let q = ring.modulus() as u128;
        let mut coords = vec![0u8; n];
        for c in coords.iter_mut().rev() {
            *c = (rank % q) as u8;
            rank /= q;
        }
        Self::from_raw(ring, coords)
    }

    /// Parses the vector text format: decimal coordinates separated by spaces.
    pub fn parse(ring: RingSpec, line: &str) -> Result<ZqVector> {
        let mut coords = Vec::new();
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| Error::Parse {
                line: 0,
                msg: format!("not an integer: `{tok}`"),
            })?;
            if v < 0 || v >= ring.modulus() as i64 {
                return Err(Error::CoordinateOutOfRange {
                    value: v,
                    modulus: ring.modulus(),
                });
            }
            coords.push(v as u8);
        }
        Ok(Self::from_raw(ring, coords))
    }
}

impl fmt::Display for ZqVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.coords {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        Ok(())
    }
}

pub(crate) fn dot_raw(ring: RingSpec, a: &[u8], b: &[u8]) -> u8 {
    let sum = a
        .iter()
        .zip(b)
        .fold(0u32, |acc, (&x, &y)| acc.wrapping_add(x as u32 * y as u32));
    (sum & ring.mask() as u32) as u8
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMetric {
    Hamming,
    Lee,
    Homogeneous,
    Euclidean,
}

impl WeightMetric {
    pub const ALL: [WeightMetric; 4] = [
        WeightMetric::Hamming,
        WeightMetric::Lee,
        WeightMetric::Homogeneous,
        WeightMetric::Euclidean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WeightMetric::Hamming => "hamming",
            WeightMetric::Lee => "lee",
            WeightMetric::Homogeneous => "homogeneous",
            WeightMetric::Euclidean => "euclidean",
        }
    }

    /// Lee weight is restricted to Z4; over Z2 it coincides with Hamming.
    pub fn validate(self, ring: RingSpec) -> Result<()> {
        if self == WeightMetric::Lee && ring.s() > 2 {
            return Err(Error::MetricUnsupported {
                metric: "Lee",
                modulus: ring.modulus(),
            });
        }
        Ok(())
    }

    pub fn element_weight(self, ring: RingSpec, x: u8) -> Result<u32> {
        self.validate(ring)?;
        let q = ring.modulus();
        let x = x as u32 & (q - 1);
        Ok(match self {
            WeightMetric::Hamming => (x != 0) as u32,
            WeightMetric::Lee => x.min(q - x),
            WeightMetric::Homogeneous => homogeneous_weight(x as u8, ring),
            WeightMetric::Euclidean => (x * x).min((q - x) * (q - x)),
        })
    }

    /// Per-element weights indexed by ring element.
    pub fn weight_table(self, ring: RingSpec) -> Result<Vec<u32>> {
        (0..ring.modulus())
            .map(|x| self.element_weight(ring, x as u8))
            .collect()
    }

    /// Largest weight a single coordinate can carry.
    pub fn max_element_weight(self, ring: RingSpec) -> Result<u32> {
        Ok(self.weight_table(ring)?.into_iter().max().unwrap_or(0))
    }
}

impl fmt::Display for WeightMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightMetric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hamming" | "h" => Ok(WeightMetric::Hamming),
            "lee" | "l" => Ok(WeightMetric::Lee),
            "homogeneous" | "hw" => Ok(WeightMetric::Homogeneous),
            "euclidean" | "e" => Ok(WeightMetric::Euclidean),
            other => Err(Error::InvalidParameters(format!("unknown metric `{other}`"))),
        }
    }
}

/// Homogeneous weight of a single element of Z_{2^s}.
///
/// Zero has weight 0, the element 2^{s-1} has weight 2^{s-1}, and every other
/// element has weight 2^{s-2}. For s = 1 the only nonzero element is 2^{s-1},
/// so the weight is Hamming weight.
pub fn homogeneous_weight(x: u8, ring: RingSpec) -> u32 {
    let x = x & ring.mask();
    if x == 0 {
        0
    } else if x == ring.half() {
        1 << (ring.s() - 1)
    } else {
        1 << (ring.s() - 2)
    }
}

pub fn weight(v: &ZqVector, metric: WeightMetric) -> Result<u32> {
    v.weight(metric)
}

pub fn distance(u: &ZqVector, v: &ZqVector, metric: WeightMetric) -> Result<u32> {
    u.sub(v)?.weight(metric)
}

/// The Gray map Z4^n -> Z2^{2n}: 0 -> 00, 1 -> 01, 2 -> 11, 3 -> 10.
pub fn gray_map(v: &ZqVector) -> Result<ZqVector> {
    if v.ring() != RingSpec::Z4 {
        return Err(Error::RequiresZ4(v.ring().modulus()));
    }
    let mut out = Vec::with_capacity(2 * v.len());
    for &c in v.coords() {
        let pair: [u8; 2] = match c {
            0 => [0, 0],
            1 => [0, 1],
            2 => [1, 1],
            _ => [1, 0],
        };
        out.extend_from_slice(&pair);
    }
    Ok(ZqVector::from_raw(RingSpec::Z2, out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorOrder {
    Lexicographic,
    GrayCode,
}

/// Streams all (2^s)^n vectors in the requested order.
///
/// Fails up front when the stream length exceeds `budget`.
pub fn enumerate_vectors(
    ring: RingSpec,
    n: usize,
    order: VectorOrder,
    budget: u128,
) -> Result<VectorStream> {
    let total = ring.space_size(n).ok_or(Error::BudgetExceeded {
        what: "vector enumeration",
        needed: u128::MAX,
        limit: budget,
    })?;
    if total > budget {
        return Err(Error::BudgetExceeded {
            what: "vector enumeration",
            needed: total,
            limit: budget,
        });
    }
    Ok(VectorStream {
        order,
        current: Some(ZqVector::zeros(ring, n)),
        gray: GrayWalker::new(ring.modulus() as u8, n),
    })
}

pub struct VectorStream {
    order: VectorOrder,
    current: Option<ZqVector>,
    gray: GrayWalker,
}

impl Iterator for VectorStream {
    type Item = ZqVector;

    fn next(&mut self) -> Option<ZqVector> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let more = match self.order {
            VectorOrder::Lexicographic => lex_increment(&mut next.coords, out.ring.modulus() as u8),
            VectorOrder::GrayCode => match self.gray.step() {
                Some(step) => {
                    next.coords[step.pos] = step.new;
                    true
                }
                None => false,
            },
        };
        if more {
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Advances `coords` to its lexicographic successor. Returns false on wrap.
pub(crate) fn lex_increment(coords: &mut [u8], q: u8) -> bool {
    for c in coords.iter_mut().rev() {
        if *c + 1 < q {
            *c += 1;
            return true;
        }
        *c = 0;
    }
    false
}

/// One move of a Gray walk: coordinate `pos` changes from `old` to `new`,
/// where `new = old ± 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrayStep {
    pub pos: usize,
    pub old: u8,
    pub new: u8,
}

/// Reflected q-ary Gray code over `n` digits starting at zero. The last
/// coordinate moves fastest.
#[derive(Clone, Debug)]
pub struct GrayWalker {
    q: u8,
    digits: Vec<u8>,
    up: Vec<bool>,
}

impl GrayWalker {
    pub fn new(q: u8, n: usize) -> Self {
        Self {
            q,
            digits: vec![0; n],
            up: vec![true; n],
        }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn step(&mut self) -> Option<GrayStep> {
        let n = self.digits.len();
        for j in 0..n {
            let pos = n - 1 - j;
            let d = self.digits[pos];
            if self.up[pos] && d + 1 < self.q {
                self.digits[pos] = d + 1;
                return Some(GrayStep { pos, old: d, new: d + 1 });
            }
            if !self.up[pos] && d > 0 {
                self.digits[pos] = d - 1;
                return Some(GrayStep { pos, old: d, new: d - 1 });
            }
            self.up[pos] = !self.up[pos];
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn z4(xs: &[u8]) -> ZqVector {
        ZqVector::new(RingSpec::Z4, xs.to_vec()).unwrap()
    }

    #[test]
    fn homogeneous_examples() {
        let z8 = RingSpec::new(3).unwrap();
        assert_eq!(homogeneous_weight(2, RingSpec::Z4), 2);
        assert_eq!(homogeneous_weight(0, z8), 0);
        assert_eq!(homogeneous_weight(3, z8), 2);
        assert_eq!(homogeneous_weight(4, z8), 4);
        assert_eq!(homogeneous_weight(1, RingSpec::Z2), 1);
    }

    #[test]
    fn homogeneous_equals_lee_on_z4() {
        for x in 0..4u8 {
            assert_eq!(
                homogeneous_weight(x, RingSpec::Z4),
                WeightMetric::Lee.element_weight(RingSpec::Z4, x).unwrap()
            );
        }
    }

    #[test]
    fn all_metrics_collapse_on_z2() {
        for m in WeightMetric::ALL {
            assert_eq!(m.weight_table(RingSpec::Z2).unwrap(), vec![0, 1]);
        }
    }

    #[test]
    fn weight_examples() {
        assert_eq!(z4(&[0, 1, 2, 3]).weight(WeightMetric::Lee).unwrap(), 4);
        for m in WeightMetric::ALL {
            assert_eq!(z4(&[0, 0, 0]).weight(m).unwrap(), 0);
        }
        assert_eq!(z4(&[1, 2]).weight(WeightMetric::Euclidean).unwrap(), 5);
        assert_eq!(z4(&[1, 2, 3]).weight(WeightMetric::Hamming).unwrap(), 3);
    }

    #[test]
    fn lee_rejected_above_z4() {
        let z8 = RingSpec::new(3).unwrap();
        let v = ZqVector::new(z8, vec![1, 5]).unwrap();
        assert!(matches!(
            v.weight(WeightMetric::Lee),
            Err(Error::MetricUnsupported { .. })
        ));
        assert_eq!(v.weight(WeightMetric::Euclidean).unwrap(), 1 + 9);
    }

    #[test]
    fn distance_examples() {
        let lee = WeightMetric::Lee;
        assert_eq!(distance(&z4(&[1, 1]), &z4(&[1, 1]), lee).unwrap(), 0);
        assert_eq!(
            distance(&z4(&[0, 0]), &z4(&[2, 2]), WeightMetric::Euclidean).unwrap(),
            8
        );
        assert_eq!(distance(&z4(&[3, 0]), &z4(&[1, 1]), lee).unwrap(), 3);
        assert!(distance(&z4(&[3, 0]), &z4(&[1]), lee).is_err());
        let z8 = ZqVector::zeros(RingSpec::new(3).unwrap(), 2);
        assert!(distance(&z4(&[3, 0]), &z8, WeightMetric::Hamming).is_err());
    }

    #[test]
    fn gray_map_examples() {
        assert_eq!(gray_map(&z4(&[2])).unwrap().coords(), &[1, 1]);
        assert_eq!(gray_map(&z4(&[0, 0])).unwrap().coords(), &[0, 0, 0, 0]);
        assert_eq!(gray_map(&z4(&[1, 3])).unwrap().coords(), &[0, 1, 1, 0]);
        let z8 = ZqVector::zeros(RingSpec::new(3).unwrap(), 1);
        assert!(matches!(gray_map(&z8), Err(Error::RequiresZ4(8))));
    }

    #[test]
    fn unit_inverses() {
        for s in 1..=8 {
            let r = RingSpec::new(s).unwrap();
            for u in (1..r.modulus()).step_by(2) {
                let inv = r.unit_inverse(u as u8) as u32;
                assert_eq!((u * inv) % r.modulus(), 1, "s={s} u={u}");
            }
        }
    }

    #[test]
    fn lex_enumeration() {
        let v: Vec<_> = enumerate_vectors(RingSpec::Z4, 1, VectorOrder::Lexicographic, 1 << 20)
            .unwrap()
            .map(|v| v.coords()[0])
            .collect();
        assert_eq!(v, vec![0, 1, 2, 3]);
        let all: Vec<_> = enumerate_vectors(RingSpec::Z4, 2, VectorOrder::Lexicographic, 1 << 20)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0].coords(), &[0, 0]);
        assert_eq!(all[15].coords(), &[3, 3]);
        for (i, v) in all.iter().enumerate() {
            assert_eq!(v.lex_rank(), i as u128);
        }
    }

    #[test]
    fn gray_enumeration_single_steps() {
        for n in 0..=4 {
            let all: Vec<_> = enumerate_vectors(RingSpec::Z4, n, VectorOrder::GrayCode, 1 << 20)
                .unwrap()
                .collect();
            assert_eq!(all.len(), 4usize.pow(n as u32));
            let distinct: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
            for w in all.windows(2) {
                let diff = w[1].sub(&w[0]).unwrap();
                let changed: Vec<_> = diff.coords().iter().filter(|&&c| c != 0).collect();
                assert_eq!(changed.len(), 1);
                assert!(*changed[0] == 1 || *changed[0] == 3);
            }
        }
    }

    #[test]
    fn enumeration_counts_distinct_up_to_8() {
        for order in [VectorOrder::Lexicographic, VectorOrder::GrayCode] {
            let set: HashSet<_> = enumerate_vectors(RingSpec::Z4, 8, order, 1 << 20)
                .unwrap()
                .collect();
            assert_eq!(set.len(), 1 << 16);
        }
    }

    #[test]
    fn enumeration_budget_is_reported() {
        let err = enumerate_vectors(RingSpec::Z4, 11, VectorOrder::Lexicographic, 1 << 20)
            .err()
            .unwrap();
        assert!(matches!(err, Error::BudgetExceeded { needed, .. } if needed == 1 << 22));
    }

    #[test]
    fn vector_text_format() {
        let v = ZqVector::parse(RingSpec::Z4, "0 1 2 3").unwrap();
        assert_eq!(v.to_string(), "0 1 2 3");
        assert!(ZqVector::parse(RingSpec::Z4, "0 4").is_err());
        assert!(ZqVector::parse(RingSpec::Z4, "0 x").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn z4vec(n: usize) -> impl Strategy<Value = ZqVector> {
            proptest::collection::vec(0u8..4, n).prop_map(|c| ZqVector::new(RingSpec::Z4, c).unwrap())
        }

        proptest! {
            #[test]
            fn gray_isometry((u, v) in (0usize..8).prop_flat_map(|n| (z4vec(n), z4vec(n)))) {
                let lee = distance(&u, &v, WeightMetric::Lee).unwrap();
                let ham = distance(&gray_map(&u).unwrap(), &gray_map(&v).unwrap(), WeightMetric::Hamming).unwrap();
                prop_assert_eq!(lee, ham);
            }

            #[test]
            fn distance_symmetric_and_reflexive((u, v) in (0usize..8).prop_flat_map(|n| (z4vec(n), z4vec(n)))) {
                for m in WeightMetric::ALL {
                    prop_assert_eq!(distance(&u, &v, m).unwrap(), distance(&v, &u, m).unwrap());
                    prop_assert_eq!(distance(&u, &u, m).unwrap(), 0);
                }
            }
        }
    }

    #[test]
    fn triangle_inequality_exhaustive() {
        let z8 = RingSpec::new(3).unwrap();
        for (ring, metrics) in [
            (RingSpec::Z4, vec![WeightMetric::Hamming, WeightMetric::Lee, WeightMetric::Homogeneous]),
            (z8, vec![WeightMetric::Hamming, WeightMetric::Homogeneous]),
        ] {
            let n = if ring == RingSpec::Z4 { 3 } else { 2 };
            let all: Vec<_> = enumerate_vectors(ring, n, VectorOrder::Lexicographic, 1 << 20)
                .unwrap()
                .collect();
            for m in metrics {
                let d = |a: &ZqVector, b: &ZqVector| distance(a, b, m).unwrap();
                for a in &all {
                    for b in &all {
                        for c in all.iter().step_by(3) {
                            assert!(d(a, c) <= d(a, b) + d(b, c), "{m} {a} {b} {c}");
                        }
                    }
                }
            }
        }
    }
}
