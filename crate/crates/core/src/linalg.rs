//! Generator-matrix algebra over Z_{2^s}.
//!
//! Every code is kept as a list of generator rows together with an eagerly
//! computed standard form: a column permutation and row-reduced generators
//! arranged in blocks with pivots 1, 2, 4, ..., 2^{s-1}. The 2-basis, the
//! codeword enumeration, the dual and the binary residue/torsion codes are
//! all derived from that form.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{dot_raw, RingSpec, ZqVector};

/// Default cap on the 2-dimension of a code whose words are materialized.
pub const DEFAULT_CODEWORD_DIM_LIMIT: u32 = 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardForm {
    /// Reduced generators in permuted column order; row `i` has its pivot
    /// `2^levels[i]` in column `i`.
    pub rows: Vec<Vec<u8>>,
    /// Pivot level of each row, non-decreasing.
    pub levels: Vec<u32>,
    /// Column `j` of the standard form is column `permutation[j]` of the code.
    pub permutation: Vec<usize>,
    /// Block sizes k_0, ..., k_{s-1}.
    pub block_sizes: Vec<usize>,
}

impl StandardForm {
    pub fn two_dimension(&self, ring: RingSpec) -> u32 {
        self.levels.iter().map(|l| ring.s() - l).sum()
    }

    /// Standard-form rows mapped back to the code's own coordinates.
    pub fn rows_in_code_order(&self, ring: RingSpec) -> Vec<ZqVector> {
        self.rows
            .iter()
            .map(|row| ZqVector::from_raw(ring, unpermute(row, &self.permutation)))
            .collect()
    }
}

fn unpermute(row: &[u8], perm: &[usize]) -> Vec<u8> {
    let mut out = vec![0u8; row.len()];
    for (j, &orig) in perm.iter().enumerate() {
        out[orig] = row[j];
    }
    out
}

fn sub_scaled(ring: RingSpec, target: &mut [u8], src: &[u8], t: u8) {
    let mask = ring.mask();
    for (a, &b) in target.iter_mut().zip(src) {
        *a = a.wrapping_sub(t.wrapping_mul(b)) & mask;
    }
}

/// Reduces a generator matrix to standard form by greedy pivoting: for each
/// level `i` the columns are scanned left to right (rows top-down) for an
/// entry of 2-adic valuation exactly `i`.
pub fn standard_form(ring: RingSpec, n: usize, generators: &[Vec<u8>]) -> StandardForm {
    let mut m: Vec<Vec<u8>> = generators.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut levels = Vec::new();
    let mut p = 0usize;
    for level in 0..ring.s() {
        loop {
            let found = (p..n).find_map(|c| {
                (p..m.len())
                    .find(|&r| m[r][c] != 0 && ring.valuation(m[r][c]) == level)
                    .map(|r| (r, c))
            });
            let Some((r, c)) = found else { break };
            m.swap(r, p);
            if c != p {
                for row in m.iter_mut() {
                    row.swap(c, p);
                }
                perm.swap(c, p);
            }
            let unit = m[p][p] >> level;
            let inv = ring.unit_inverse(unit);
            let mask = ring.mask();
            for x in m[p].iter_mut() {
                *x = x.wrapping_mul(inv) & mask;
            }
            let pivot_row = m[p].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == p {
                    continue;
                }
                let t = row[p] >> level;
                if t != 0 {
                    sub_scaled(ring, row, &pivot_row, t);
                }
            }
            levels.push(level);
            p += 1;
        }
    }
    m.truncate(p);
    debug_assert!(m.iter().skip(p).all(|r| r.iter().all(|&x| x == 0)));
    let mut block_sizes = vec![0usize; ring.s() as usize];
    for &l in &levels {
        block_sizes[l as usize] += 1;
    }
    StandardForm {
        rows: m,
        levels,
        permutation: perm,
        block_sizes,
    }
}

/// A linear code over Z_{2^s} given by generator rows.
#[derive(Clone, Debug)]
pub struct LinearCode {
    ring: RingSpec,
    n: usize,
    generators: Vec<ZqVector>,
    standard: StandardForm,
}

impl LinearCode {
    pub fn new(ring: RingSpec, n: usize, generators: Vec<ZqVector>) -> Result<Self> {
        for g in &generators {
            if g.ring() != ring || g.len() != n {
                return Err(Error::Mismatch(format!(
                    "generator `{g}` is not a {ring} vector of length {n}"
                )));
            }
        }
        let raw: Vec<Vec<u8>> = generators.iter().map(|g| g.coords().to_vec()).collect();
        let standard = standard_form(ring, n, &raw);
        Ok(Self {
            ring,
            n,
            generators,
            standard,
        })
    }

    pub fn from_rows(ring: RingSpec, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        let gens = rows.iter().map(|r| ZqVector::from_i64s(ring, r)).collect();
        Self::new(ring, n, gens)
    }

    /// The code {0} of length `n`.
    pub fn zero(ring: RingSpec, n: usize) -> Self {
        Self::new(ring, n, Vec::new()).expect("no generators")
    }

    /// The whole ambient space Z_{2^s}^n.
    pub fn full_space(ring: RingSpec, n: usize) -> Self {
        let gens = (0..n)
            .map(|i| {
                let mut v = ZqVector::zeros(ring, n);
                v.set(i, 1);
                v
            })
            .collect();
        Self::new(ring, n, gens).expect("unit vectors")
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn generators(&self) -> &[ZqVector] {
        &self.generators
    }

    pub fn standard_form(&self) -> &StandardForm {
        &self.standard
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.standard.block_sizes
    }

    pub fn two_dimension(&self) -> u32 {
        self.standard.two_dimension(self.ring)
    }

    /// |C| = 2^k, or `None` if it does not fit in a u128.
    pub fn size(&self) -> Option<u128> {
        let k = self.two_dimension();
        (k < 128).then(|| 1u128 << k)
    }

    /// Free codes have only unit pivots.
    pub fn is_free(&self) -> bool {
        self.standard.levels.iter().all(|&l| l == 0)
    }

    /// Rows of a 2-basis: every codeword is a unique Z2-combination of them
    /// and twice any row is a Z2-combination of the rows after it.
    ///
    /// Block `t` holds `2^{t-i}` times the level-`i` standard rows for
    /// every `i <= t`.
    pub fn two_basis(&self) -> Vec<ZqVector> {
        let rows = self.standard.rows_in_code_order(self.ring);
        let mut out = Vec::with_capacity(self.two_dimension() as usize);
        for t in 0..self.ring.s() {
            for (row, &level) in rows.iter().zip(&self.standard.levels) {
                if level <= t {
                    out.push(row.scale(1i64 << (t - level)));
                }
            }
        }
        out
    }

    /// Materializes all 2^k codewords by walking a binary Gray code over the
    /// 2-basis coefficients.
    pub fn enumerate_codewords(&self, dim_limit: u32) -> Result<CodewordSet> {
        let k = self.two_dimension();
        if k > dim_limit {
            return Err(Error::BudgetExceeded {
                what: "codeword enumeration (2-dimension)",
                needed: k as u128,
                limit: dim_limit as u128,
            });
        }
        let basis = self.two_basis();
        let mask = self.ring.mask();
        let mut current = vec![0u8; self.n];
        let mut coeffs = vec![false; k as usize];
        let mut words = Vec::with_capacity(1usize << k);
        words.push(ZqVector::from_raw(self.ring, current.clone()));
        for step in 1u64..(1u64 << k) {
            let j = step.trailing_zeros() as usize;
            coeffs[j] = !coeffs[j];
            let b = basis[j].coords();
            if coeffs[j] {
                for (a, &x) in current.iter_mut().zip(b) {
                    *a = a.wrapping_add(x) & mask;
                }
            } else {
                for (a, &x) in current.iter_mut().zip(b) {
                    *a = a.wrapping_sub(x) & mask;
                }
            }
            words.push(ZqVector::from_raw(self.ring, current.clone()));
        }
        Ok(CodewordSet {
            ring: self.ring,
            n: self.n,
            words,
        })
    }

    /// Generator matrix of C⊥.
    ///
    /// Column operations bring the standard form to `[diag(2^{l_i}) | 0]`;
    /// the kernel is then read off the accumulated column transform. The
    /// result is checked for orthogonality and for
    /// `dim(C) + dim(C⊥) = s·n` before it is returned.
    pub fn dual(&self) -> LinearCode {
        let ring = self.ring;
        let n = self.n;
        let s = ring.s();
        let mut rows = self.standard.rows.clone();
        let t = rows.len();
        let levels = &self.standard.levels;
        // columns of U stored as vectors
        let mut u_cols: Vec<Vec<u8>> = (0..n)
            .map(|c| {
                let mut col = vec![0u8; n];
                col[c] = 1;
                col
            })
            .collect();
        let mask = ring.mask();
        for i in (0..t).rev() {
            let l = levels[i];
            for c in (i + 1)..n {
                let f = rows[i][c] >> l;
                if f == 0 {
                    continue;
                }
                for row in rows.iter_mut().take(i + 1) {
                    row[c] = row[c].wrapping_sub(f.wrapping_mul(row[i])) & mask;
                }
                let (lo, hi) = u_cols.split_at_mut(c);
                sub_scaled(ring, &mut hi[0], &lo[i], f);
            }
        }
        let mut gens = Vec::new();
        for (i, col) in u_cols.iter().enumerate() {
            let scale = if i < t {
                if levels[i] == 0 {
                    continue;
                }
                1i64 << (s - levels[i])
            } else {
                1
            };
            let v = ZqVector::from_raw(ring, unpermute(col, &self.standard.permutation));
            gens.push(v.scale(scale));
        }
        let dual = LinearCode::new(ring, n, gens).expect("shape preserved");
        for g in &self.generators {
            for h in &dual.generators {
                assert_eq!(dot_raw(ring, g.coords(), h.coords()), 0, "dual generator not orthogonal");
            }
        }
        assert_eq!(
            self.two_dimension() + dual.two_dimension(),
            s * n as u32,
            "dual dimension mismatch"
        );
        dual
    }

    /// Binary code of mod-2 reductions (Z4 only).
    pub fn residue_code(&self) -> Result<LinearCode> {
        if self.ring != RingSpec::Z4 {
            return Err(Error::RequiresZ4(self.ring.modulus()));
        }
        let gens = self
            .generators
            .iter()
            .map(|g| ZqVector::from_raw(RingSpec::Z2, g.coords().iter().map(|&x| x & 1).collect()))
            .collect();
        LinearCode::new(RingSpec::Z2, self.n, gens)
    }

    /// Binary code {c : 2c ∈ C} (Z4 only).
    pub fn torsion_code(&self) -> Result<LinearCode> {
        if self.ring != RingSpec::Z4 {
            return Err(Error::RequiresZ4(self.ring.modulus()));
        }
        let rows = self.standard.rows_in_code_order(self.ring);
        let gens = rows
            .iter()
            .zip(&self.standard.levels)
            .map(|(row, &level)| {
                let coords = row.coords().iter().map(|&x| (x >> level) & 1).collect();
                ZqVector::from_raw(RingSpec::Z2, coords)
            })
            .collect();
        LinearCode::new(RingSpec::Z2, self.n, gens)
    }

    /// Bilinearity reduces the check to generator pairs.
    pub fn is_self_orthogonal(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, g)| {
            self.generators[i..]
                .iter()
                .all(|h| dot_raw(self.ring, g.coords(), h.coords()) == 0)
        })
    }

    pub fn contains(&self, v: &ZqVector) -> bool {
        // v ∈ C iff v is orthogonal to C⊥.
        v.ring() == self.ring
            && v.len() == self.n
            && self
                .dual()
                .generators
                .iter()
                .all(|h| dot_raw(self.ring, h.coords(), v.coords()) == 0)
    }

    /// Code whose column `i` is column `perm[i]` of this one.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<LinearCode> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|&c| c >= self.n || std::mem::replace(&mut seen[c], true)) {
            return Err(Error::InvalidParameters(format!("{perm:?} is not a permutation of {} columns", self.n)));
        }
        let gens = self
            .generators
            .iter()
            .map(|g| ZqVector::from_raw(self.ring, perm.iter().map(|&c| g.coords()[c]).collect()))
            .collect();
        LinearCode::new(self.ring, self.n, gens)
    }

    /// Code with the signs of the given coordinates changed.
    pub fn negate_coordinates(&self, cols: &[usize]) -> Result<LinearCode> {
        if let Some(&c) = cols.iter().find(|&&c| c >= self.n) {
            return Err(Error::InvalidParameters(format!("bad column index {c}")));
        }
        let mask = self.ring.mask();
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let mut coords = g.coords().to_vec();
                for &c in cols {
                    coords[c] = coords[c].wrapping_neg() & mask;
                }
                ZqVector::from_raw(self.ring, coords)
            })
            .collect();
        LinearCode::new(self.ring, self.n, gens)
    }

    /// Code with the given columns removed.
    pub fn delete_columns(&self, cols: &[usize]) -> Result<LinearCode> {
        let mut keep = vec![true; self.n];
        for &c in cols {
            if c >= self.n || !keep[c] {
                return Err(Error::InvalidParameters(format!("bad column index {c}")));
            }
            keep[c] = false;
        }
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let coords = g
                    .coords()
                    .iter()
                    .zip(&keep)
                    .filter(|(_, &k)| k)
                    .map(|(&x, _)| x)
                    .collect();
                ZqVector::from_raw(self.ring, coords)
            })
            .collect();
        LinearCode::new(self.ring, self.n - cols.len(), gens)
    }

    /// Parses the generator matrix file format: a header line `s n`
    /// followed by one generator row per line.
    pub fn parse_matrix(text: &str) -> Result<LinearCode> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `s n` header".into(),
        })?;
        let nums: Vec<&str> = header.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `s n`".into(),
            });
        }
        let parse_int = |tok: &str| -> Result<usize> {
            tok.parse().map_err(|_| Error::Parse {
                line: hline,
                msg: format!("not an integer: `{tok}`"),
            })
        };
        let ring = RingSpec::new(parse_int(nums[0])? as u32)?;
        let n = parse_int(nums[1])?;
        let mut gens = Vec::new();
        for (ln, line) in lines {
            let v = ZqVector::parse(ring, line).map_err(|e| Error::Parse {
                line: ln,
                msg: e.to_string(),
            })?;
            if v.len() != n {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("expected {n} coordinates, found {}", v.len()),
                });
            }
            gens.push(v);
        }
        LinearCode::new(ring, n, gens)
    }

    pub fn to_matrix_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.ring.s(), self.n)?;
        for g in &self.generators {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// All words of a code, in Gray order over the 2-basis coefficients.
#[derive(Clone, Debug)]
pub struct CodewordSet {
    pub ring: RingSpec,
    pub n: usize,
    pub words: Vec<ZqVector>,
}

impl CodewordSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ZqVector> {
        self.words.iter()
    }

    pub fn sorted(&self) -> Vec<ZqVector> {
        let mut w = self.words.clone();
        w.sort();
        w
    }
}
