//! Constructors for the repetition, block-repetition, simplex and MacDonald
//! families over Z4, each audited against its declared parameter tuple.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::covering::minimum_weight_search;
use crate::error::{Error, Result};
use crate::linalg::LinearCode;
use crate::ring::{RingSpec, WeightMetric, ZqVector};

/// Largest simplex/MacDonald order `k` built by default (length 4^k).
pub const DEFAULT_MAX_K: u32 = 4;

type Rows = Vec<Vec<u8>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    RepetitionAlpha { n: usize },
    RepetitionBeta { n: usize },
    /// Blocks of 1s, 2s and 3s of sizes `m`, `n2`, `n3`.
    BlockRepetition { m: usize, n2: usize, n3: usize },
    BlockRep3n { n: usize },
    BlockRep2n { n: usize },
    BlockRepMN { m: usize, n: usize },
    SimplexAlpha { k: u32 },
    SimplexBeta { k: u32 },
    MacDonaldAlpha { k: u32, u: u32 },
    /// `allow_u1` admits u = 1, deleting the block `[0; G_1^β]` with
    /// `G_1^β = [1]`.
    MacDonaldBeta {
        k: u32,
        u: u32,
        #[serde(default)]
        allow_u1: bool,
    },
    DualOf { of: Box<FamilySpec> },
}

impl FamilySpec {
    pub fn name(&self) -> String {
        match self {
            FamilySpec::RepetitionAlpha { .. } => "repetition-alpha".into(),
            FamilySpec::RepetitionBeta { .. } => "repetition-beta".into(),
            FamilySpec::BlockRepetition { .. } => "block-repetition".into(),
            FamilySpec::BlockRep3n { .. } => "brep3n".into(),
            FamilySpec::BlockRep2n { .. } => "brep2n".into(),
            FamilySpec::BlockRepMN { .. } => "brepmn".into(),
            FamilySpec::SimplexAlpha { .. } => "simplex-alpha".into(),
            FamilySpec::SimplexBeta { .. } => "simplex-beta".into(),
            FamilySpec::MacDonaldAlpha { .. } => "macdonald-alpha".into(),
            FamilySpec::MacDonaldBeta { .. } => "macdonald-beta".into(),
            FamilySpec::DualOf { of } => format!("dual-{}", of.name()),
        }
    }

    pub fn params(&self) -> BTreeMap<String, i64> {
        let mut p = BTreeMap::new();
        let mut put = |k: &str, v: i64| {
            p.insert(k.to_string(), v);
        };
        match *self {
            FamilySpec::RepetitionAlpha { n }
            | FamilySpec::RepetitionBeta { n }
            | FamilySpec::BlockRep3n { n }
            | FamilySpec::BlockRep2n { n } => put("n", n as i64),
            FamilySpec::BlockRepetition { m, n2, n3 } => {
                put("m", m as i64);
                put("n2", n2 as i64);
                put("n3", n3 as i64);
            }
            FamilySpec::BlockRepMN { m, n } => {
                put("m", m as i64);
                put("n", n as i64);
            }
            FamilySpec::SimplexAlpha { k } | FamilySpec::SimplexBeta { k } => put("k", k as i64),
            FamilySpec::MacDonaldAlpha { k, u } | FamilySpec::MacDonaldBeta { k, u, .. } => {
                put("k", k as i64);
                put("u", u as i64);
            }
            FamilySpec::DualOf { ref of } => return of.params(),
        }
        p
    }

    /// Builds the family from a name and `key=value` parameters.
    pub fn from_name(name: &str, params: &BTreeMap<String, i64>) -> Result<FamilySpec> {
        if let Some(inner) = name.strip_prefix("dual-") {
            return Ok(FamilySpec::DualOf {
                of: Box::new(FamilySpec::from_name(inner, params)?),
            });
        }
        let get = |key: &str| -> Result<i64> {
            params
                .get(key)
                .copied()
                .ok_or_else(|| Error::InvalidParameters(format!("{name} needs parameter `{key}`")))
        };
        let size = |key: &str| -> Result<usize> {
            let v = get(key)?;
            usize::try_from(v).map_err(|_| Error::InvalidParameters(format!("`{key}` must be >= 0")))
        };
        let order = |key: &str| -> Result<u32> {
            let v = get(key)?;
            u32::try_from(v).map_err(|_| Error::InvalidParameters(format!("`{key}` must be >= 0")))
        };
        Ok(match name {
            "repetition-alpha" => FamilySpec::RepetitionAlpha { n: size("n")? },
            "repetition-beta" => FamilySpec::RepetitionBeta { n: size("n")? },
            "block-repetition" => FamilySpec::BlockRepetition {
                m: size("m")?,
                n2: size("n2")?,
                n3: params.get("n3").map_or(Ok(0), |_| size("n3"))?,
            },
            "brep3n" => FamilySpec::BlockRep3n { n: size("n")? },
            "brep2n" => FamilySpec::BlockRep2n { n: size("n")? },
            "brepmn" => FamilySpec::BlockRepMN {
                m: size("m")?,
                n: size("n")?,
            },
            "simplex-alpha" => FamilySpec::SimplexAlpha { k: order("k")? },
            "simplex-beta" => FamilySpec::SimplexBeta { k: order("k")? },
            "macdonald-alpha" => FamilySpec::MacDonaldAlpha {
                k: order("k")?,
                u: order("u")?,
            },
            "macdonald-beta" => FamilySpec::MacDonaldBeta {
                k: order("k")?,
                u: order("u")?,
                allow_u1: params.get("allow_u1").is_some_and(|&v| v != 0),
            },
            other => return Err(Error::InvalidParameters(format!("unknown family `{other}`"))),
        })
    }

    /// Parameter tuple stated for the family, where one is stated.
    pub fn declared(&self) -> Result<DeclaredParameters> {
        let pow2 = |e: u32| 1usize << e;
        Ok(match *self {
            FamilySpec::RepetitionAlpha { n } => DeclaredParameters::new(n, 1)
                .with_hamming(n)
                .with_lee(2 * n),
            FamilySpec::RepetitionBeta { n } => DeclaredParameters::new(n, 2).with_hamming(n).with_lee(n),
            FamilySpec::BlockRep3n { n } => DeclaredParameters::new(3 * n, 2)
                .with_hamming(2 * n)
                .with_lee(4 * n)
                .with_euclidean(6 * n),
            FamilySpec::BlockRep2n { n } => DeclaredParameters::new(2 * n, 2)
                .with_hamming(n)
                .with_lee(2 * n)
                .with_euclidean(4 * n),
            FamilySpec::BlockRepMN { m, n } => DeclaredParameters::new(m + n, 2)
                .with_hamming(m)
                .with_lee((2 * m).min(m + 2 * n))
                .with_euclidean((4 * m).min(m + 4 * n)),
            FamilySpec::BlockRepetition { m, n2, n3 } => {
                if n3 == 0 {
                    FamilySpec::BlockRepMN { m, n: n2 }.declared()?
                } else if m == n2 && n2 == n3 {
                    FamilySpec::BlockRep3n { n: m }.declared()?
                } else {
                    DeclaredParameters::new(m + n2 + n3, 2)
                }
            }
            FamilySpec::SimplexAlpha { k } => DeclaredParameters::new(pow2(2 * k), 2 * k as usize)
                .with_hamming(pow2(2 * k - 1))
                .with_lee(pow2(2 * k))
                .with_euclidean(3 * pow2(2 * k - 1)),
            FamilySpec::SimplexBeta { k } => {
                let len = pow2(k - 1) * (pow2(k) - 1);
                let d = DeclaredParameters::new(len, 2 * k as usize)
                    .with_hamming(pow2(2 * (k - 1)))
                    .with_lee(len);
                if k <= 3 {
                    d.with_euclidean(pow2(k) * (3 * pow2(k) / 4 - 1))
                } else {
                    d
                }
            }
            FamilySpec::MacDonaldAlpha { k, u } => {
                DeclaredParameters::new(pow2(2 * k) - pow2(2 * u), 2 * k as usize)
            }
            FamilySpec::MacDonaldBeta { k, u, .. } => DeclaredParameters::new(
                (pow2(k - 1) - pow2(u - 1)) * (pow2(k) + pow2(u) - 1),
                2 * k as usize,
            ),
            FamilySpec::DualOf { ref of } => match **of {
                FamilySpec::SimplexAlpha { k } => {
                    DeclaredParameters::new(pow2(2 * k), pow2(2 * k + 1) - 2 * k as usize)
                }
                FamilySpec::SimplexBeta { k } => DeclaredParameters::new(
                    pow2(k - 1) * (pow2(k) - 1),
                    pow2(2 * k) - pow2(k) - 2 * k as usize,
                )
                .with_lee(3),
                _ => {
                    let inner = of.declared()?;
                    DeclaredParameters::new(inner.length, 2 * inner.length - inner.two_dimension)
                }
            },
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        for (k, v) in self.params() {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

/// Length, 2-dimension and minimum distances; `None` where nothing is stated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredParameters {
    pub length: usize,
    pub two_dimension: usize,
    pub d_hamming: Option<usize>,
    pub d_lee: Option<usize>,
    pub d_euclidean: Option<usize>,
}

impl DeclaredParameters {
    fn new(length: usize, two_dimension: usize) -> Self {
        Self {
            length,
            two_dimension,
            d_hamming: None,
            d_lee: None,
            d_euclidean: None,
        }
    }
    fn with_hamming(mut self, d: usize) -> Self {
        self.d_hamming = Some(d);
        self
    }
    fn with_lee(mut self, d: usize) -> Self {
        self.d_lee = Some(d);
        self
    }
    fn with_euclidean(mut self, d: usize) -> Self {
        self.d_euclidean = Some(d);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AuditStatus {
    Verified {
        declared: DeclaredParameters,
        measured: DeclaredParameters,
    },
    Mismatch {
        declared: DeclaredParameters,
        measured: DeclaredParameters,
    },
    Skipped {
        reason: String,
    },
}

impl AuditStatus {
    pub fn is_verified(&self) -> bool {
        matches!(self, AuditStatus::Verified { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMetadata {
    pub family: String,
    pub params: BTreeMap<String, i64>,
    pub length: usize,
    pub two_dimension: u32,
    pub audited_parameters: AuditStatus,
}

#[derive(Clone, Debug)]
pub struct Constructed {
    pub code: LinearCode,
    pub metadata: FamilyMetadata,
    /// Indices (in the parent simplex matrix) of the columns removed to form
    /// a MacDonald code.
    pub deleted_columns: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug)]
pub struct ConstructOptions {
    pub max_k: u32,
    /// Audit by enumeration only when 2-dimension is at most this.
    pub audit_dim_limit: u32,
    /// Audit by weight-ordered search for duals only up to this length.
    pub audit_dual_length_limit: usize,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        Self {
            max_k: DEFAULT_MAX_K,
            audit_dim_limit: 16,
            audit_dual_length_limit: 64,
        }
    }
}

fn z4_code(rows: Rows) -> LinearCode {
    let n = rows.first().map_or(0, |r| r.len());
    let gens = rows
        .into_iter()
        .map(|r| ZqVector::new(RingSpec::Z4, r).expect("entries in Z4"))
        .collect();
    LinearCode::new(RingSpec::Z4, n, gens).expect("rectangular")
}

fn block_row(blocks: &[(u8, usize)]) -> Vec<u8> {
    blocks
        .iter()
        .flat_map(|&(v, len)| std::iter::repeat_n(v, len))
        .collect()
}

/// Generator rows of S_k^α.
pub fn simplex_alpha_rows(k: u32) -> Rows {
    if k == 1 {
        return vec![vec![0, 1, 2, 3]];
    }
    let below = simplex_alpha_rows(k - 1);
    let len = below[0].len();
    let mut rows = vec![block_row(&[(0, len), (1, len), (2, len), (3, len)])];
    for r in &below {
        rows.push(r.repeat(4));
    }
    rows
}

/// Generator rows of S_k^β, with `G_1^β = [1]` as the base below `G_2^β`.
pub fn simplex_beta_rows(k: u32) -> Rows {
    match k {
        1 => vec![vec![1]],
        2 => vec![vec![1, 1, 1, 1, 0, 2], vec![0, 1, 2, 3, 1, 1]],
        _ => {
            let alpha = simplex_alpha_rows(k - 1);
            let beta = simplex_beta_rows(k - 1);
            let (la, lb) = (alpha[0].len(), beta[0].len());
            let mut rows = vec![block_row(&[(1, la), (0, lb), (2, lb)])];
            for (a, b) in alpha.iter().zip(&beta) {
                let mut r = a.clone();
                r.extend_from_slice(b);
                r.extend_from_slice(b);
                rows.push(r);
            }
            rows
        }
    }
}

fn column(rows: &Rows, c: usize) -> Vec<u8> {
    rows.iter().map(|r| r[c]).collect()
}

/// Matches each column of `block` (in order) with the leftmost unused equal
/// column of `parent`. Fails if some block column has no match.
pub fn match_deleted_columns(parent: &Rows, block: &Rows) -> Result<Vec<usize>> {
    let n = parent.first().map_or(0, |r| r.len());
    let m = block.first().map_or(0, |r| r.len());
    let mut used = vec![false; n];
    let mut out = Vec::with_capacity(m);
    for c in 0..m {
        let target = column(block, c);
        let hit = (0..n)
            .find(|&j| !used[j] && column(parent, j) == target)
            .ok_or_else(|| {
                Error::InvalidParameters(format!("deleted column {target:?} not present in parent matrix"))
            })?;
        used[hit] = true;
        out.push(hit);
    }
    Ok(out)
}

/// `[0; G_u]` padded with `k - u` zero rows on top.
fn zero_stacked(k: u32, small: Rows) -> Rows {
    let len = small[0].len();
    let mut rows = vec![vec![0u8; len]; (k - small.len() as u32) as usize];
    rows.extend(small);
    rows
}

fn macdonald(parent: Rows, block: Rows) -> Result<(LinearCode, Vec<usize>)> {
    let cols = match_deleted_columns(&parent, &block)?;
    let code = z4_code(parent).delete_columns(&cols)?;
    Ok((code, cols))
}

fn check_k(k: u32, min: u32, opts: &ConstructOptions) -> Result<()> {
    if k < min || k > opts.max_k {
        return Err(Error::InvalidParameters(format!(
            "k={k} outside {min}..={} (raise max_k to build larger codes)",
            opts.max_k
        )));
    }
    Ok(())
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidParameters(format!("{name} must be >= 1")));
    }
    Ok(())
}

/// Covering radius `ceil(n(q-1)/q)` quoted for length-`n` codes over the
/// field with `q` elements, kept as a formula for cross-checks.
pub fn field_radius_formula(n: u64, q: u64) -> u64 {
    (n * (q - 1)).div_ceil(q)
}

pub fn repetition_alpha(n: usize) -> Result<LinearCode> {
    positive("n", n)?;
    Ok(z4_code(vec![vec![2; n]]))
}

pub fn repetition_beta(n: usize) -> Result<LinearCode> {
    positive("n", n)?;
    Ok(z4_code(vec![vec![1; n]]))
}

/// Single generator `1…1 | 2…2 | 3…3` with block sizes `m`, `n2`, `n3`.
pub fn block_repetition(m: usize, n2: usize, n3: usize) -> Result<LinearCode> {
    positive("m", m)?;
    Ok(z4_code(vec![block_row(&[(1, m), (2, n2), (3, n3)])]))
}

pub fn simplex_alpha(k: u32) -> Result<LinearCode> {
    check_k(k, 1, &ConstructOptions::default())?;
    Ok(z4_code(simplex_alpha_rows(k)))
}

pub fn simplex_beta(k: u32) -> Result<LinearCode> {
    check_k(k, 2, &ConstructOptions::default())?;
    Ok(z4_code(simplex_beta_rows(k)))
}

pub fn macdonald_alpha(k: u32, u: u32) -> Result<LinearCode> {
    Ok(construct(&FamilySpec::MacDonaldAlpha { k, u }, &ConstructOptions::default())?.code)
}

pub fn macdonald_beta(k: u32, u: u32, allow_u1: bool) -> Result<LinearCode> {
    Ok(construct(&FamilySpec::MacDonaldBeta { k, u, allow_u1 }, &ConstructOptions::default())?.code)
}

fn build(spec: &FamilySpec, opts: &ConstructOptions) -> Result<(LinearCode, Option<Vec<usize>>)> {
    Ok(match *spec {
        FamilySpec::RepetitionAlpha { n } => (repetition_alpha(n)?, None),
        FamilySpec::RepetitionBeta { n } => (repetition_beta(n)?, None),
        FamilySpec::BlockRepetition { m, n2, n3 } => (block_repetition(m, n2, n3)?, None),
        FamilySpec::BlockRep3n { n } => {
            positive("n", n)?;
            (block_repetition(n, n, n)?, None)
        }
        FamilySpec::BlockRep2n { n } => {
            positive("n", n)?;
            (block_repetition(n, n, 0)?, None)
        }
        FamilySpec::BlockRepMN { m, n } => {
            positive("n", n)?;
            (block_repetition(m, n, 0)?, None)
        }
        FamilySpec::SimplexAlpha { k } => {
            check_k(k, 1, opts)?;
            (z4_code(simplex_alpha_rows(k)), None)
        }
        FamilySpec::SimplexBeta { k } => {
            check_k(k, 2, opts)?;
            (z4_code(simplex_beta_rows(k)), None)
        }
        FamilySpec::MacDonaldAlpha { k, u } => {
            check_k(k, 2, opts)?;
            if u < 1 || u >= k {
                return Err(Error::InvalidParameters(format!("need 1 <= u <= k-1, got k={k} u={u}")));
            }
            let (code, cols) = macdonald(simplex_alpha_rows(k), zero_stacked(k, simplex_alpha_rows(u)))?;
            (code, Some(cols))
        }
        FamilySpec::MacDonaldBeta { k, u, allow_u1 } => {
            check_k(k, 2, opts)?;
            if u < 1 || u >= k {
                return Err(Error::InvalidParameters(format!("need 1 <= u <= k-1, got k={k} u={u}")));
            }
            if u == 1 && !allow_u1 {
                return Err(Error::InvalidParameters(
                    "macdonald-beta with u=1 needs the allow_u1 flag (G_1^beta = [1])".into(),
                ));
            }
            let (code, cols) = macdonald(simplex_beta_rows(k), zero_stacked(k, simplex_beta_rows(u)))?;
            (code, Some(cols))
        }
        FamilySpec::DualOf { ref of } => (build(of, opts)?.0.dual(), None),
    })
}

/// Builds the code for `spec` and audits its parameters where affordable.
pub fn construct(spec: &FamilySpec, opts: &ConstructOptions) -> Result<Constructed> {
    let (code, deleted_columns) = build(spec, opts)?;
    let declared = spec.declared()?;
    let audited_parameters = audit(spec, &code, declared, opts)?;
    let metadata = FamilyMetadata {
        family: spec.name(),
        params: spec.params(),
        length: code.len(),
        two_dimension: code.two_dimension(),
        audited_parameters,
    };
    Ok(Constructed {
        code,
        metadata,
        deleted_columns,
    })
}

fn min_nonzero_weight(code: &LinearCode, metric: WeightMetric, dim_limit: u32) -> Result<Option<usize>> {
    let words = code.enumerate_codewords(dim_limit)?;
    let table = metric.weight_table(code.ring())?;
    Ok(words
        .iter()
        .filter(|w| !w.is_zero())
        .map(|w| w.coords().iter().map(|&c| table[c as usize] as usize).sum())
        .min())
}

fn audit(
    spec: &FamilySpec,
    code: &LinearCode,
    declared: DeclaredParameters,
    opts: &ConstructOptions,
) -> Result<AuditStatus> {
    let mut measured = DeclaredParameters::new(code.len(), code.two_dimension() as usize);
    let is_dual = matches!(spec, FamilySpec::DualOf { .. });
    if is_dual {
        if declared.d_lee.is_some() {
            if code.len() > opts.audit_dual_length_limit {
                return Ok(AuditStatus::Skipped {
                    reason: format!("dual of length {} beyond audit limit", code.len()),
                });
            }
            measured.d_lee = minimum_weight_search(code, WeightMetric::Lee, 4, 1 << 30)?;
        }
    } else {
        if code.two_dimension() > opts.audit_dim_limit {
            return Ok(AuditStatus::Skipped {
                reason: format!("2-dimension {} beyond audit limit {}", code.two_dimension(), opts.audit_dim_limit),
            });
        }
        let lim = opts.audit_dim_limit;
        if declared.d_hamming.is_some() {
            measured.d_hamming = min_nonzero_weight(code, WeightMetric::Hamming, lim)?;
        }
        if declared.d_lee.is_some() {
            measured.d_lee = min_nonzero_weight(code, WeightMetric::Lee, lim)?;
        }
        if declared.d_euclidean.is_some() {
            measured.d_euclidean = min_nonzero_weight(code, WeightMetric::Euclidean, lim)?;
        }
    }
    Ok(if measured == declared {
        AuditStatus::Verified { declared, measured }
    } else {
        AuditStatus::Mismatch { declared, measured }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn field_formula() {
        assert_eq!(field_radius_formula(5, 2), 3);
        assert_eq!(field_radius_formula(6, 4), 5);
        // when q divides n it is the Hamming radius of the binary repetition code
        for n in [2usize, 4, 6] {
            let rep = LinearCode::from_rows(RingSpec::Z2, &[vec![1; n]]).unwrap();
            let r = crate::covering::covering_radius_direct(&rep, WeightMetric::Hamming, &Default::default()).unwrap();
            assert_eq!(r.value, Some(field_radius_formula(n as u64, 2) as u32));
        }
    }

    fn words(c: &LinearCode) -> BTreeSet<Vec<u8>> {
        c.enumerate_codewords(26)
            .unwrap()
            .iter()
            .map(|w| w.coords().to_vec())
            .collect()
    }

    fn verified(spec: FamilySpec) -> Constructed {
        let c = construct(&spec, &ConstructOptions::default()).unwrap();
        assert!(
            c.metadata.audited_parameters.is_verified(),
            "{spec}: {:?}",
            c.metadata.audited_parameters
        );
        c
    }

    #[test]
    fn repetition_examples() {
        assert_eq!(words(&repetition_alpha(1).unwrap()), [vec![0], vec![2]].into());
        let c = verified(FamilySpec::RepetitionAlpha { n: 2 });
        assert_eq!(words(&c.code), [vec![0, 0], vec![2, 2]].into());
        assert_eq!(repetition_alpha(3).unwrap().size(), Some(2));
        assert_eq!(words(&repetition_beta(1).unwrap()).len(), 4);
        let c = verified(FamilySpec::RepetitionBeta { n: 2 });
        assert_eq!(words(&c.code), [vec![0, 0], vec![1, 1], vec![2, 2], vec![3, 3]].into());
        verified(FamilySpec::RepetitionBeta { n: 4 });
        assert!(repetition_beta(0).is_err());
        assert!(repetition_alpha(0).is_err());
    }

    #[test]
    fn block_repetition_examples() {
        let c = block_repetition(1, 1, 1).unwrap();
        assert_eq!(c.generators()[0].coords(), &[1, 2, 3]);
        for w in c.enumerate_codewords(26).unwrap().iter().filter(|w| !w.is_zero()) {
            assert_eq!(w.weight(WeightMetric::Lee).unwrap(), 4);
        }
        let c = verified(FamilySpec::BlockRepetition { m: 2, n2: 2, n3: 0 });
        assert_eq!(c.metadata.length, 4);
        assert!(block_repetition(0, 1, 1).is_err());
        for n in 1..=4 {
            verified(FamilySpec::BlockRep3n { n });
            verified(FamilySpec::BlockRep2n { n });
        }
        for (m, n) in [(1, 1), (2, 1), (2, 2), (4, 1), (1, 3)] {
            verified(FamilySpec::BlockRepMN { m, n });
        }
        verified(FamilySpec::BlockRepetition { m: 1, n2: 2, n3: 3 });
    }

    #[test]
    fn simplex_alpha_examples() {
        let c = simplex_alpha(1).unwrap();
        assert_eq!(c.generators()[0].coords(), &[0, 1, 2, 3]);
        let c2 = simplex_alpha(2).unwrap();
        assert_eq!(c2.len(), 16);
        assert_eq!(c2.size(), Some(16));
        assert_eq!(
            c2.generators()[0].coords(),
            &block_row(&[(0, 4), (1, 4), (2, 4), (3, 4)])[..]
        );
        assert_eq!(min_nonzero_weight(&c2, WeightMetric::Hamming, 26).unwrap(), Some(8));
        for k in 1..=3 {
            verified(FamilySpec::SimplexAlpha { k });
        }
        assert!(simplex_alpha(0).is_err());
        assert!(simplex_alpha(5).is_err());
    }

    #[test]
    fn simplex_alpha_constant_lee_weight() {
        for k in 1..=3 {
            let c = simplex_alpha(k).unwrap();
            for w in c.enumerate_codewords(26).unwrap().iter().filter(|w| !w.is_zero()) {
                assert_eq!(w.weight(WeightMetric::Lee).unwrap(), 1 << (2 * k));
            }
        }
    }

    #[test]
    fn simplex_alpha_columns_are_all_of_z4k() {
        for k in 1..=3 {
            let rows = simplex_alpha_rows(k);
            let cols: BTreeSet<_> = (0..rows[0].len()).map(|c| column(&rows, c)).collect();
            assert_eq!(cols.len(), 1 << (2 * k));
        }
    }

    #[test]
    fn simplex_beta_examples() {
        let c = simplex_beta(2).unwrap();
        assert_eq!(c.len(), 6);
        assert_eq!(c.generators()[0].coords(), &[1, 1, 1, 1, 0, 2]);
        assert_eq!(c.generators()[1].coords(), &[0, 1, 2, 3, 1, 1]);
        assert_eq!(min_nonzero_weight(&c, WeightMetric::Lee, 26).unwrap(), Some(6));
        assert_eq!(simplex_beta(3).unwrap().len(), 28);
        assert!(simplex_beta(1).is_err());
    }

    #[test]
    fn simplex_beta_recursion_reproduces_base_case() {
        // the general recursion with G_1^β = [1] yields the stated G_2^β
        let alpha = simplex_alpha_rows(1);
        let beta = simplex_beta_rows(1);
        let mut rows = vec![block_row(&[(1, 4), (0, 1), (2, 1)])];
        let mut r = alpha[0].clone();
        r.extend_from_slice(&beta[0]);
        r.extend_from_slice(&beta[0]);
        rows.push(r);
        assert_eq!(rows, simplex_beta_rows(2));
    }

    #[test]
    fn simplex_beta_parameter_audit() {
        for k in 2..=3 {
            let c = construct(&FamilySpec::SimplexBeta { k }, &ConstructOptions::default()).unwrap();
            match &c.metadata.audited_parameters {
                AuditStatus::Verified { .. } => {}
                other => panic!("k={k}: {other:?}"),
            }
        }
    }

    #[test]
    fn macdonald_examples() {
        let c = verified(FamilySpec::MacDonaldAlpha { k: 2, u: 1 });
        assert_eq!(c.code.len(), 12);
        let c = verified(FamilySpec::MacDonaldBeta { k: 3, u: 2, allow_u1: false });
        assert_eq!(c.code.len(), 22);
        assert!(construct(&FamilySpec::MacDonaldAlpha { k: 2, u: 2 }, &ConstructOptions::default()).is_err());
        assert!(construct(&FamilySpec::MacDonaldBeta { k: 2, u: 1, allow_u1: false }, &ConstructOptions::default()).is_err());
        let c = verified(FamilySpec::MacDonaldBeta { k: 2, u: 1, allow_u1: true });
        assert_eq!(c.code.len(), 5);
        verified(FamilySpec::MacDonaldAlpha { k: 3, u: 1 });
        verified(FamilySpec::MacDonaldAlpha { k: 3, u: 2 });
        verified(FamilySpec::MacDonaldBeta { k: 3, u: 1, allow_u1: true });
    }

    #[test]
    fn macdonald_deletion_is_the_zero_stacked_block() {
        for (k, u, beta) in [(2, 1, false), (3, 1, false), (3, 2, false), (3, 2, true), (4, 3, true), (2, 1, true)] {
            let (parent, small) = if beta {
                (simplex_beta_rows(k), simplex_beta_rows(u))
            } else {
                (simplex_alpha_rows(k), simplex_alpha_rows(u))
            };
            let block = zero_stacked(k, small);
            let cols = match_deleted_columns(&parent, &block).unwrap();
            let mut deleted: Vec<_> = cols.iter().map(|&c| column(&parent, c)).collect();
            let mut expected: Vec<_> = (0..block[0].len()).map(|c| column(&block, c)).collect();
            deleted.sort();
            expected.sort();
            assert_eq!(deleted, expected);
            let spec = if beta {
                FamilySpec::MacDonaldBeta { k, u, allow_u1: true }
            } else {
                FamilySpec::MacDonaldAlpha { k, u }
            };
            let built = construct(&spec, &ConstructOptions::default()).unwrap();
            assert_eq!(built.deleted_columns.as_ref(), Some(&cols));
            assert_eq!(built.code.len(), spec.declared().unwrap().length);
        }
    }

    #[test]
    fn dual_parameters() {
        for k in 1..=2 {
            let c = verified(FamilySpec::DualOf { of: Box::new(FamilySpec::SimplexAlpha { k }) });
            assert_eq!(c.metadata.two_dimension, (1 << (2 * k + 1)) - 2 * k);
        }
        for k in 2..=3 {
            verified(FamilySpec::DualOf { of: Box::new(FamilySpec::SimplexBeta { k }) });
        }
    }

    #[test]
    fn family_names_round_trip() {
        let mut p = BTreeMap::new();
        p.insert("k".to_string(), 2);
        p.insert("u".to_string(), 1);
        p.insert("allow_u1".to_string(), 1);
        for name in ["simplex-alpha", "simplex-beta", "macdonald-alpha", "macdonald-beta", "dual-simplex-beta"] {
            let spec = FamilySpec::from_name(name, &p).unwrap();
            assert_eq!(spec.name(), name);
        }
        assert!(FamilySpec::from_name("hamming", &p).is_err());
        assert!(FamilySpec::from_name("repetition-beta", &p).is_err());
        let json = serde_json::to_string(&FamilySpec::SimplexAlpha { k: 2 }).unwrap();
        assert_eq!(json, r#"{"family":"simplex-alpha","k":2}"#);
    }
}
