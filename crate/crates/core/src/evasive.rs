//! Pseudorandom subspace-evasive subsets of F_q^k, the pruned subcode they
//! induce, and Monte Carlo audits of their advertised behavior.
//!
//! A set descriptor is a random polynomial P over K = F_{q^k} together with
//! a cutoff r: a vector a ∈ F_q^k belongs to the set when P(Σ aᵢβⁱ) lies in
//! the span of 1, β, …, β^{r−1}, i.e. when its top k−r coordinates vanish.
//! Low-dimensional affine subspaces are expected to meet such a set in at
//! most deg(P) points, which caps the decoder's list size; that property is
//! probabilistic, so this module audits it by sampling rather than
//! certifying it.

use crate::decoder::{list_decode, DecodeResult};
use crate::derive_seed;
use crate::error::{Error, Result};
use crate::frs_code::FrsParams;
use crate::gf::{checked_pow_u64, digits_of, rref_in_place, ExtCtx, FieldCtx, FieldElem};
use crate::interp::Variant;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Descriptor of one sampled set: the tower K, the polynomial P over K
/// (canonical-integer coefficients, exact degree ≥ 1), and the cutoff r.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SetRepr", into = "SetRepr")]
pub struct EvasiveSet {
    base: FieldCtx,
    k: usize,
    kctx: ExtCtx,
    p: Vec<FieldElem>,
    r: usize,
    seed: u64,
}

/// Wire form: enough to rebuild the exact same set anywhere. Field elements
/// of K travel as canonical integers in [0, q^k); the K-modulus as base-field
/// integers in [0, q).
#[derive(Serialize, Deserialize)]
struct SetRepr {
    p: u64,
    e: u32,
    q: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base_modulus: Option<Vec<u64>>,
    k: usize,
    r: usize,
    modulus: Vec<u64>,
    poly: Vec<u64>,
    seed: u64,
}

impl From<EvasiveSet> for SetRepr {
    fn from(set: EvasiveSet) -> SetRepr {
        SetRepr {
            p: set.base.characteristic(),
            e: set.base.extension_degree(),
            q: set.base.order(),
            base_modulus: set.base.modulus().map(|m| m.to_vec()),
            k: set.k,
            r: set.r,
            modulus: set.kctx.modulus().iter().map(|c| c.value()).collect(),
            poly: set.p.iter().map(|c| c.value()).collect(),
            seed: set.seed,
        }
    }
}

impl TryFrom<SetRepr> for EvasiveSet {
    type Error = Error;

    fn try_from(repr: SetRepr) -> Result<EvasiveSet> {
        let base = crate::gf::make_field(repr.p, repr.e, repr.base_modulus.as_deref())?;
        if base.order() != repr.q {
            return Err(Error::BadEvasiveParams(format!(
                "declared field order {} but p^e = {}",
                repr.q,
                base.order()
            )));
        }
        if repr.modulus.len() != repr.k + 1 {
            return Err(Error::BadEvasiveParams(format!(
                "extension modulus has degree {} but k = {}",
                repr.modulus.len().saturating_sub(1),
                repr.k
            )));
        }
        let melems: Vec<FieldElem> = repr
            .modulus
            .iter()
            .map(|&c| base.elem(c))
            .collect::<Result<_>>()?;
        let kctx = ExtCtx::with_modulus(&base, &melems)?;
        EvasiveSet::build(base, kctx, repr.r, repr.poly, repr.seed)
    }
}

impl EvasiveSet {
    fn build(
        base: FieldCtx,
        kctx: ExtCtx,
        r: usize,
        poly: Vec<u64>,
        seed: u64,
    ) -> Result<EvasiveSet> {
        let k = kctx.degree();
        if r < 1 || r > k {
            return Err(Error::BadEvasiveParams(format!(
                "cutoff r = {r} outside 1..={k}"
            )));
        }
        if poly.len() < 2 {
            return Err(Error::BadEvasiveParams(
                "polynomial must have degree at least 1".to_string(),
            ));
        }
        if *poly.last().unwrap() == 0 {
            return Err(Error::BadEvasiveParams(
                "leading polynomial coefficient is zero".to_string(),
            ));
        }
        let p: Vec<FieldElem> = poly
            .iter()
            .map(|&c| kctx.elem(c))
            .collect::<Result<_>>()?;
        Ok(EvasiveSet {
            base,
            k,
            kctx,
            p,
            r,
            seed,
        })
    }

    /// Fixture constructor from explicit canonical-integer coefficients of P
    /// (little-endian over K). The extension uses the deterministic smallest
    /// irreducible modulus, like [`sample_evasive`].
    pub fn from_parts(ctx: &FieldCtx, k: usize, r: usize, poly: &[u64], seed: u64) -> Result<Self> {
        if k < 1 {
            return Err(Error::BadEvasiveParams("ambient dimension k = 0".to_string()));
        }
        let kctx = ExtCtx::new(ctx, k)?;
        EvasiveSet::build(ctx.clone(), kctx, r, poly.to_vec(), seed)
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    /// Ambient dimension: members are length-k vectors over the base field.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn kctx(&self) -> &ExtCtx {
        &self.kctx
    }

    /// Coefficients of P over K, little-endian, exact degree.
    pub fn poly(&self) -> &[FieldElem] {
        &self.p
    }

    pub fn degree(&self) -> usize {
        self.p.len() - 1
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn member_tester(&self) -> Membership<'_> {
        Membership::new(self)
    }
}

/// Reusable digit-level membership tester; avoids re-deriving P's digit
/// vectors per point when auditing millions of them.
struct Membership<'a> {
    set: &'a EvasiveSet,
    p_digits: Vec<Vec<u64>>,
    acc: Vec<u64>,
    scratch: Vec<u64>,
}

impl<'a> Membership<'a> {
    fn new(set: &'a EvasiveSet) -> Self {
        let q = set.base.order();
        let p_digits = set
            .p
            .iter()
            .map(|c| digits_of(c.value(), q, set.k))
            .collect();
        Membership {
            set,
            p_digits,
            acc: vec![0; set.k],
            scratch: vec![0; 2 * set.k.max(1) - 1],
        }
    }

    /// Is the point with these base-q digits in the set? Horner over K on
    /// raw digit vectors, then a tail-zero check on coordinates r..k.
    fn contains_digits(&mut self, x: &[u64]) -> bool {
        let k = self.set.k;
        let top = self.p_digits.len() - 1;
        self.acc.copy_from_slice(&self.p_digits[top]);
        for i in (0..top).rev() {
            self.set.kctx.mul_digits(&self.acc, x, &mut self.scratch);
            let ci = &self.p_digits[i];
            for j in 0..k {
                self.acc[j] = self
                    .set
                    .base
                    .add(FieldElem::from_raw(self.scratch[j]), FieldElem::from_raw(ci[j]))
                    .value();
            }
        }
        self.acc[self.set.r..].iter().all(|&d| d == 0)
    }
}

/// Draws P of exact degree `t_p` with coefficients uniform over K (the
/// leading one redrawn until nonzero) from a deterministic seeded generator.
/// Identical inputs reproduce the identical set.
pub fn sample_evasive(
    ctx: &FieldCtx,
    k: usize,
    r: usize,
    t_p: usize,
    seed: u64,
) -> Result<EvasiveSet> {
    if k < 1 {
        return Err(Error::BadEvasiveParams("ambient dimension k = 0".to_string()));
    }
    if r < 1 || r > k {
        return Err(Error::BadEvasiveParams(format!(
            "cutoff r = {r} outside 1..={k}"
        )));
    }
    if t_p < 1 {
        return Err(Error::BadEvasiveParams(
            "polynomial degree must be at least 1 (constant P is all-or-nothing)".to_string(),
        ));
    }
    let kctx = ExtCtx::new(ctx, k)?;
    let order = kctx.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut poly: Vec<u64> = (0..=t_p).map(|_| rng.gen_range(0..order)).collect();
    while poly[t_p] == 0 {
        poly[t_p] = rng.gen_range(0..order);
    }
    EvasiveSet::build(ctx.clone(), kctx, r, poly, seed)
}

/// Membership of a length-k vector over the base field.
pub fn evasive_contains(set: &EvasiveSet, v: &[FieldElem]) -> Result<bool> {
    if v.len() != set.k {
        return Err(Error::WrongLength {
            what: "point",
            expected: set.k,
            got: v.len(),
        });
    }
    let q = set.base.order();
    let mut digits = Vec::with_capacity(set.k);
    for c in v {
        if c.value() >= q {
            return Err(Error::ElementOutOfRange {
                value: c.value(),
                order: q,
            });
        }
        digits.push(c.value());
    }
    Ok(set.member_tester().contains_digits(&digits))
}

/// Result of counting set members inside one affine subspace. `rank` is the
/// rank of the supplied basis; when it is lower than the number of basis
/// vectors the span was still enumerated correctly, just over fewer points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubspaceCount {
    pub count: u64,
    pub rank: usize,
}

/// Counts members of the set in span(basis) + offset by walking all
/// q^rank points. Errors when that enumeration exceeds `cap`.
pub fn subspace_intersection_count(
    set: &EvasiveSet,
    basis: &[Vec<FieldElem>],
    offset: Option<&[FieldElem]>,
    cap: u64,
) -> Result<SubspaceCount> {
    let ctx = &set.base;
    let q = ctx.order();
    let k = set.k;
    let check = |v: &[FieldElem]| -> Result<()> {
        if v.len() != k {
            return Err(Error::WrongLength {
                what: "subspace vector",
                expected: k,
                got: v.len(),
            });
        }
        match v.iter().find(|c| c.value() >= q) {
            Some(c) => Err(Error::ElementOutOfRange {
                value: c.value(),
                order: q,
            }),
            None => Ok(()),
        }
    };
    for v in basis {
        check(v)?;
    }
    if let Some(z) = offset {
        check(z)?;
    }

    let mut rows: Vec<Vec<FieldElem>> = basis.to_vec();
    rref_in_place(ctx, &mut rows);
    rows.retain(|row| row.iter().any(|c| c.value() != 0));
    let rank = rows.len();

    let points = checked_pow_u64(q, rank as u32).filter(|&p| p <= cap);
    let Some(total) = points else {
        return Err(Error::CapExceeded {
            needed: checked_pow_u64(q, rank as u32).unwrap_or(u64::MAX),
            cap,
        });
    };

    let zero_offset = vec![ctx.zero(); k];
    let z = offset.unwrap_or(&zero_offset);
    let mut tester = set.member_tester();
    let mut coeffs = vec![0u64; rank];
    let mut point = vec![0u64; k];
    let mut count = 0u64;
    for _ in 0..total {
        for (j, pd) in point.iter_mut().enumerate() {
            let mut acc = z[j];
            for (c, row) in coeffs.iter().zip(&rows) {
                acc = ctx.add(acc, ctx.mul(FieldElem::from_raw(*c), row[j]));
            }
            *pd = acc.value();
        }
        if tester.contains_digits(&point) {
            count += 1;
        }
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < q {
                break;
            }
            *c = 0;
        }
    }
    Ok(SubspaceCount { count, rank })
}

/// Extends `prefix` (the first k−3s coordinates) to a full set member by the
/// lexicographically smallest suffix, scanning at most q^{3s} candidates.
/// The set must have been built with cutoff r = k − 2s.
pub fn systematic_evasive_encode(
    set: &EvasiveSet,
    prefix: &[FieldElem],
    s: usize,
    cap: u64,
) -> Result<Vec<FieldElem>> {
    let k = set.k;
    let q = set.base.order();
    if s < 1 || 3 * s > k {
        return Err(Error::BadEvasiveParams(format!(
            "suffix width 3s = {} does not fit in k = {k}",
            3 * s
        )));
    }
    if set.r != k - 2 * s {
        return Err(Error::BadEvasiveParams(format!(
            "systematic encoding needs cutoff r = k - 2s = {}, set has r = {}",
            k - 2 * s,
            set.r
        )));
    }
    if prefix.len() != k - 3 * s {
        return Err(Error::WrongLength {
            what: "message prefix",
            expected: k - 3 * s,
            got: prefix.len(),
        });
    }
    for c in prefix {
        if c.value() >= q {
            return Err(Error::ElementOutOfRange {
                value: c.value(),
                order: q,
            });
        }
    }
    let suffix_len = 3 * s;
    let total = checked_pow_u64(q, suffix_len as u32).filter(|&t| t <= cap);
    let Some(total) = total else {
        return Err(Error::CapExceeded {
            needed: checked_pow_u64(q, suffix_len as u32).unwrap_or(u64::MAX),
            cap,
        });
    };

    let mut tester = set.member_tester();
    let mut point = vec![0u64; k];
    for (j, c) in prefix.iter().enumerate() {
        point[j] = c.value();
    }
    // Lexicographic order on the suffix tuple = ascending big-endian
    // counter, so the rightmost coordinate cycles fastest.
    for w in 0..total {
        let mut rest = w;
        for j in (0..suffix_len).rev() {
            point[k - suffix_len + j] = rest % q;
            rest /= q;
        }
        if tester.contains_digits(&point) {
            return Ok(point.into_iter().map(|d| FieldElem::from_raw(d)).collect());
        }
    }
    Err(Error::NoCompletingSuffix)
}

/// List decoding restricted to the subcode of messages whose coefficient
/// vectors lie in the set: decode, then filter the candidate list by
/// membership. The space and statistics are reported unfiltered.
pub fn subcode_list_decode(
    set: &EvasiveSet,
    params: &FrsParams,
    s: usize,
    y: &crate::frs_code::Codeword,
    variant: Variant,
    cap: u64,
) -> Result<DecodeResult> {
    if set.k != params.k() {
        return Err(Error::ShapeMismatch(format!(
            "set dimension {} != message length {}",
            set.k,
            params.k()
        )));
    }
    if set.base != *params.ctx() {
        return Err(Error::ShapeMismatch(
            "set and code live over different fields".to_string(),
        ));
    }
    let mut res = list_decode(params, s, y, variant, cap)?;
    let mut tester = set.member_tester();
    let mut digits = vec![0u64; set.k];
    res.candidates.retain(|f| {
        for (d, c) in digits.iter_mut().zip(f) {
            *d = c.value();
        }
        tester.contains_digits(&digits)
    });
    Ok(res)
}

/// One seed's audit: set size (exact when q^k fits under the enumeration
/// cap, otherwise estimated from `size_samples` uniform draws) and the
/// intersection profile over `trials` random s-dimensional subspaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvasiveAudit {
    pub seed: u64,
    pub trials: u64,
    pub max_intersection: u64,
    pub mean_size: f64,
    pub set_size: u64,
    pub size_exact: bool,
    pub membership_rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_samples: Option<u64>,
}

/// Audits one sampled set: measures |S| and, per trial, the intersection
/// with a random subspace spanned by `s` uniform vectors. Subspace
/// enumeration still respects `enum_cap`. Deterministic in (set, seed).
pub fn audit_set(
    set: &EvasiveSet,
    s: usize,
    trials: u64,
    seed: u64,
    enum_cap: u64,
    size_samples: u64,
) -> Result<EvasiveAudit> {
    let ctx = &set.base;
    let q = ctx.order();
    let k = set.k;
    let total = checked_pow_u64(q, k as u32);

    let (set_size, size_exact, membership_rate, samples) = match total.filter(|&t| t <= enum_cap) {
        Some(t) => {
            let mut tester = set.member_tester();
            let mut point = vec![0u64; k];
            let mut count = 0u64;
            for _ in 0..t {
                if tester.contains_digits(&point) {
                    count += 1;
                }
                for d in point.iter_mut() {
                    *d += 1;
                    if *d < q {
                        break;
                    }
                    *d = 0;
                }
            }
            (count, true, count as f64 / t as f64, None)
        }
        None => {
            if size_samples == 0 {
                return Err(Error::BadEvasiveParams(
                    "set too large to enumerate and size_samples = 0".to_string(),
                ));
            }
            // The sampling stream's index sits past every per-trial index so
            // the draws are independent of the subspace draws below.
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, trials));
            let mut tester = set.member_tester();
            let mut point = vec![0u64; k];
            let mut hits = 0u64;
            for _ in 0..size_samples {
                for d in point.iter_mut() {
                    *d = rng.gen_range(0..q);
                }
                if tester.contains_digits(&point) {
                    hits += 1;
                }
            }
            let rate = hits as f64 / size_samples as f64;
            let est = match total {
                Some(t) => (rate * t as f64).round() as u64,
                None => (rate * (q as f64).powi(k as i32)).round() as u64,
            };
            (est, false, rate, Some(size_samples))
        }
    };

    let mut max_intersection = 0u64;
    let mut sum = 0u64;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, trial));
        let basis: Vec<Vec<FieldElem>> = (0..s)
            .map(|_| {
                (0..k)
                    .map(|_| ctx.elem(rng.gen_range(0..q)).unwrap())
                    .collect()
            })
            .collect();
        let sc = subspace_intersection_count(set, &basis, None, enum_cap)?;
        max_intersection = max_intersection.max(sc.count);
        sum += sc.count;
    }
    let mean_size = if trials == 0 {
        0.0
    } else {
        sum as f64 / trials as f64
    };

    Ok(EvasiveAudit {
        seed,
        trials,
        max_intersection,
        mean_size,
        set_size,
        size_exact,
        membership_rate,
        size_samples: samples,
    })
}
