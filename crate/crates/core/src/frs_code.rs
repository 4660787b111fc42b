//! Folded Reed-Solomon code parameters and encoder.
//!
//! An (n, k) Reed-Solomon codeword over `F_q`, evaluated at the points
//! `γ^0, γ^1, …, γ^{n−1}`, is folded into an m × N matrix (N = n/m): column
//! j stacks the m consecutive evaluations starting at `γ^{jm}`. Agreement
//! between words is counted column-wise (a column agrees only when all m
//! entries match), which is what buys folding its decoding advantage.

use crate::error::{Error, Result};
use crate::gf::{element_order, find_primitive, poly_eval, FieldCtx, FieldElem};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Validated parameters of a folded Reed-Solomon code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrsParams {
    ctx: FieldCtx,
    gamma: FieldElem,
    n: usize,
    m: usize,
    k: usize,
    num_columns: usize,
}

impl FrsParams {
    /// Validates and fixes a parameter set; see [`make_params`].
    pub fn new(ctx: &FieldCtx, gamma: FieldElem, n: usize, m: usize, k: usize) -> Result<Self> {
        let q = ctx.order();
        if n as u64 > q - 1 {
            return Err(Error::BadCodeParams(format!(
                "unfolded length n = {n} exceeds q - 1 = {}",
                q - 1
            )));
        }
        if m == 0 || n == 0 || n % m != 0 {
            return Err(Error::BadCodeParams(format!(
                "folding parameter m = {m} must divide n = {n} (both positive)"
            )));
        }
        if k < 1 || k >= n {
            return Err(Error::BadCodeParams(format!(
                "degree parameter k = {k} must satisfy 1 <= k < n = {n}"
            )));
        }
        if gamma.value() == 0 || gamma.value() >= q {
            return Err(Error::BadCodeParams(format!(
                "gamma = {} is not a nonzero field element",
                gamma.value()
            )));
        }
        // Distinct evaluation points need order(gamma) >= n; this is also
        // what lets the candidate solver treat gamma^0..gamma^{k-1} as
        // distinct.
        let ord = element_order(ctx, gamma)?;
        if (ord as usize) < n {
            return Err(Error::BadCodeParams(format!(
                "gamma = {} has multiplicative order {ord} < n = {n}",
                gamma.value()
            )));
        }
        Ok(FrsParams {
            ctx: ctx.clone(),
            gamma,
            n,
            m,
            k,
            num_columns: n / m,
        })
    }

    /// Parameters with γ defaulted to the smallest primitive element, the
    /// canonical choice when the caller has no reason to pick another.
    pub fn with_default_gamma(ctx: &FieldCtx, n: usize, m: usize, k: usize) -> Result<Self> {
        let gamma = find_primitive(ctx);
        Self::new(ctx, gamma, n, m, k)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn gamma(&self) -> FieldElem {
        self.gamma
    }

    /// Unfolded length n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Folding parameter m.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Degree parameter: messages are polynomials of degree < k.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Folded block length N = n/m.
    pub fn num_columns(&self) -> usize {
        self.num_columns
    }

    /// Rate k/n.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Evaluation points γ^0, …, γ^{n−1} in order.
    pub(crate) fn eval_points(&self) -> Vec<FieldElem> {
        let mut pts = Vec::with_capacity(self.n);
        let mut acc = self.ctx.one();
        for _ in 0..self.n {
            pts.push(acc);
            acc = self.ctx.mul(acc, self.gamma);
        }
        pts
    }
}

/// Validated parameter constructor.
pub fn make_params(
    ctx: &FieldCtx,
    gamma: FieldElem,
    n: usize,
    m: usize,
    k: usize,
) -> Result<FrsParams> {
    FrsParams::new(ctx, gamma, n, m, k)
}

/// An m × N folded word stored column-major: `columns[j][i]` is row i of
/// column j, i.e. the evaluation at γ^{jm+i} for a true codeword.
///
/// Serializes as a bare JSON array of N arrays of m canonical integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    columns: Vec<Vec<FieldElem>>,
}

impl Codeword {
    /// Wraps pre-built columns, enforcing a rectangular m × N shape.
    pub fn from_columns(columns: Vec<Vec<FieldElem>>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::ShapeMismatch("a word needs at least one column".to_string()));
        }
        let m = columns[0].len();
        if m == 0 {
            return Err(Error::ShapeMismatch("columns must be nonempty".to_string()));
        }
        if let Some(bad) = columns.iter().find(|c| c.len() != m) {
            return Err(Error::ShapeMismatch(format!(
                "ragged word: expected {m} rows per column, found a column with {}",
                bad.len()
            )));
        }
        Ok(Codeword { columns })
    }

    /// Builds a word from canonical integers, validating each against the
    /// field of `params` and the m × N shape.
    pub fn from_ints(params: &FrsParams, raw: &[Vec<u64>]) -> Result<Self> {
        if raw.len() != params.num_columns() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} columns, got {}",
                params.num_columns(),
                raw.len()
            )));
        }
        let mut columns = Vec::with_capacity(raw.len());
        for col in raw {
            if col.len() != params.m() {
                return Err(Error::ShapeMismatch(format!(
                    "expected {} rows per column, got {}",
                    params.m(),
                    col.len()
                )));
            }
            columns.push(
                col.iter()
                    .map(|&v| params.ctx().elem(v))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(Codeword { columns })
    }

    pub fn columns(&self) -> &[Vec<FieldElem>] {
        &self.columns
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn rows(&self) -> usize {
        self.columns[0].len()
    }

    /// The unfolded symbol at position r (column r / m, row r mod m).
    pub fn symbol(&self, r: usize) -> FieldElem {
        self.columns[r / self.rows()][r % self.rows()]
    }

    /// Full validation against a parameter set: m × N shape and every entry
    /// in range for the field. Deserialized words must pass through this
    /// before arithmetic.
    pub fn validate(&self, params: &FrsParams) -> Result<()> {
        self.check_shape(params)?;
        for col in &self.columns {
            for e in col {
                params.ctx().elem(e.value())?;
            }
        }
        Ok(())
    }

    fn check_shape(&self, params: &FrsParams) -> Result<()> {
        if self.num_columns() != params.num_columns() || self.rows() != params.m() {
            return Err(Error::ShapeMismatch(format!(
                "word is {}x{}, parameters require {}x{}",
                self.rows(),
                self.num_columns(),
                params.m(),
                params.num_columns()
            )));
        }
        Ok(())
    }
}

impl Serialize for Codeword {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.columns.len()))?;
        for col in &self.columns {
            let ints: Vec<u64> = col.iter().map(|e| e.value()).collect();
            seq.serialize_element(&ints)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Codeword {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<Vec<u64>> = Vec::deserialize(deserializer)?;
        // Range checks against a specific field happen in from_ints or when
        // the caller validates against params; deserialization alone is
        // structural.
        let columns: Vec<Vec<FieldElem>> = raw
            .iter()
            .map(|col| col.iter().map(|&v| FieldElem::from_raw(v)).collect())
            .collect();
        Codeword::from_columns(columns).map_err(serde::de::Error::custom)
    }
}

/// Encodes a message polynomial (coefficient list of length exactly k,
/// little-endian) into its m × N folded word.
pub fn encode(params: &FrsParams, f: &[FieldElem]) -> Result<Codeword> {
    if f.len() != params.k() {
        return Err(Error::WrongLength {
            what: "message coefficient list",
            expected: params.k(),
            got: f.len(),
        });
    }
    if let Some(bad) = f.iter().find(|c| c.value() >= params.ctx().order()) {
        return Err(Error::ElementOutOfRange {
            value: bad.value(),
            order: params.ctx().order(),
        });
    }
    let pts = params.eval_points();
    let mut columns = Vec::with_capacity(params.num_columns());
    for j in 0..params.num_columns() {
        let mut col = Vec::with_capacity(params.m());
        for i in 0..params.m() {
            col.push(poly_eval(params.ctx(), f, pts[j * params.m() + i]));
        }
        columns.push(col);
    }
    Ok(Codeword { columns })
}

/// Number of columns where two words agree in all m entries.
pub fn agreement(params: &FrsParams, c: &Codeword, y: &Codeword) -> Result<usize> {
    c.check_shape(params)?;
    y.check_shape(params)?;
    Ok(c
        .columns
        .iter()
        .zip(&y.columns)
        .filter(|(a, b)| a == b)
        .count())
}
