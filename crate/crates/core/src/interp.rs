//! Interpolation of the decoding polynomial Q.
//!
//! Q(X, Y₁, …, Y_s) = A₀(X) + A₁(X)Y₁ + … + A_s(X)Y_s is degree 1 in the Y
//! variables. It is required to vanish whenever X is an evaluation point
//! γ^{im+j} (column i, row j ≤ m−s) and Y₁…Y_s take the s received values
//! sliding down that column from row j. Degree caps on the A_u make the
//! number of unknown coefficients strictly exceed the number of vanishing
//! conditions, so a nonzero Q always exists; it is found as a canonical
//! kernel vector of one homogeneous linear system.
//!
//! Two variants: affine (A₀ free, degree ≤ D+k−1) and linear (A₀ = 0), which
//! trades decoding radius for a solution space that is linear rather than
//! affine.

use crate::error::{Error, Result};
use crate::frs_code::{Codeword, FrsParams};
use crate::gf::{kernel_vector, poly_eval, FieldCtx, FieldElem};
use std::fmt;
use std::str::FromStr;

/// Which interpolation shape to use: `Affine` permits a Y-free term A₀;
/// `Linear` forces A₀ = 0.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Affine,
    Linear,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "affine" => Ok(Variant::Affine),
            "linear" => Ok(Variant::Linear),
            other => Err(Error::BadCodeParams(format!(
                "unknown variant {other:?}, expected \"affine\" or \"linear\""
            ))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Affine => "affine",
            Variant::Linear => "linear",
        })
    }
}

/// The interpolated polynomial: s+1 coefficient lists A₀, …, A_s.
///
/// Stored zero-padded to the degree caps: `lists()[0]` has length D+k
/// (degree ≤ D+k−1) and `lists()[u]` for u ≥ 1 has length D+1 (degree ≤ D),
/// where D is `degree_bound()`. At least one coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearQ {
    s: usize,
    degree_bound: usize,
    variant: Variant,
    a: Vec<Vec<FieldElem>>,
}

impl LinearQ {
    /// Assembles a LinearQ from explicit coefficient lists (shorter lists are
    /// zero-padded to the caps). Intended for adversarial or hand-built Q;
    /// decoding paths get theirs from [`interpolate`].
    pub fn from_parts(
        params: &FrsParams,
        s: usize,
        degree_bound: usize,
        variant: Variant,
        lists: Vec<Vec<FieldElem>>,
    ) -> Result<LinearQ> {
        if s < 1 || s > params.m() {
            return Err(Error::BadCodeParams(format!(
                "window parameter s = {s} must satisfy 1 <= s <= m = {}",
                params.m()
            )));
        }
        if lists.len() != s + 1 {
            return Err(Error::WrongLength {
                what: "coefficient list count",
                expected: s + 1,
                got: lists.len(),
            });
        }
        let q = params.ctx().order();
        let mut a = Vec::with_capacity(s + 1);
        for (u, list) in lists.into_iter().enumerate() {
            let cap = if u == 0 {
                degree_bound + params.k()
            } else {
                degree_bound + 1
            };
            if list.len() > cap {
                return Err(Error::WrongLength {
                    what: "coefficient list",
                    expected: cap,
                    got: list.len(),
                });
            }
            if let Some(bad) = list.iter().find(|c| c.value() >= q) {
                return Err(Error::ElementOutOfRange {
                    value: bad.value(),
                    order: q,
                });
            }
            let mut padded = list;
            padded.resize(cap, params.ctx().zero());
            a.push(padded);
        }
        if variant == Variant::Linear && a[0].iter().any(|c| c.value() != 0) {
            return Err(Error::BadCodeParams(
                "linear variant requires the Y-free coefficient list to be zero".to_string(),
            ));
        }
        let q = LinearQ {
            s,
            degree_bound,
            variant,
            a,
        };
        if q.is_zero() {
            return Err(Error::BadCodeParams(
                "interpolation polynomial must be nonzero".to_string(),
            ));
        }
        Ok(q)
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// The s+1 coefficient lists, zero-padded to their caps.
    pub fn lists(&self) -> &[Vec<FieldElem>] {
        &self.a
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|list| list.iter().all(|c| c.value() == 0))
    }

    /// Evaluates Q at X = x, (Y₁, …, Y_s) = window.
    pub fn eval_condition(&self, ctx: &FieldCtx, x: FieldElem, window: &[FieldElem]) -> FieldElem {
        debug_assert_eq!(window.len(), self.s);
        let mut acc = poly_eval(ctx, &self.a[0], x);
        for (u, &y) in window.iter().enumerate() {
            let au = poly_eval(ctx, &self.a[u + 1], x);
            acc = ctx.add(acc, ctx.mul(au, y));
        }
        acc
    }

    // Replaces the coefficient lists wholesale; normalization uses this to
    // shift out a common X power while keeping caps and variant.
    pub(crate) fn with_lists(&self, a: Vec<Vec<FieldElem>>) -> LinearQ {
        debug_assert_eq!(a.len(), self.a.len());
        LinearQ {
            s: self.s,
            degree_bound: self.degree_bound,
            variant: self.variant,
            a,
        }
    }
}

fn check_s(params: &FrsParams, s: usize) -> Result<()> {
    if s < 1 || s > params.m() {
        return Err(Error::BadCodeParams(format!(
            "window parameter s = {s} must satisfy 1 <= s <= m = {}",
            params.m()
        )));
    }
    Ok(())
}

fn degree_bound_for_conditions(
    conditions: usize,
    k: usize,
    s: usize,
    variant: Variant,
) -> Result<usize> {
    let d = match variant {
        // Largest D with (D+1)(s+1) + k - 1 monomials still forced to exceed
        // the condition count.
        Variant::Affine => {
            if conditions + 1 < k + s + 1 {
                return Err(Error::DegenerateDegreeBound { conditions, k, s });
            }
            (conditions - k + 1) / (s + 1)
        }
        // A₀ = 0 removes the k-1 extra monomials; (D+1)s must exceed the
        // conditions.
        Variant::Linear => conditions / s,
    };
    if d < 1 {
        return Err(Error::DegenerateDegreeBound { conditions, k, s });
    }
    Ok(d)
}

/// The degree cap D for the A_u coefficient lists.
///
/// Affine: D = ⌊(N(m−s+1) − k + 1)/(s+1)⌋; linear: D = ⌊N(m−s+1)/s⌋.
/// Errors when the parameters force D < 1, in which case interpolation-based
/// decoding is vacuous.
pub fn degree_bound(params: &FrsParams, s: usize, variant: Variant) -> Result<usize> {
    check_s(params, s)?;
    let conditions = params.num_columns() * (params.m() - s + 1);
    degree_bound_for_conditions(conditions, params.k(), s, variant)
}

/// (conditions, unknowns) of the interpolation system: N(m−s+1) vanishing
/// conditions against (D+k) + s(D+1) unknown coefficients (affine) or s(D+1)
/// (linear). Unknowns always strictly exceed conditions.
pub fn system_shape(params: &FrsParams, s: usize, variant: Variant) -> Result<(usize, usize)> {
    let d = degree_bound(params, s, variant)?;
    let conditions = params.num_columns() * (params.m() - s + 1);
    let unknowns = match variant {
        Variant::Affine => (d + params.k()) + s * (d + 1),
        Variant::Linear => s * (d + 1),
    };
    Ok((conditions, unknowns))
}

// One vanishing condition: Q(x, w₁, …, w_s) = 0 as a row of coefficients in
// the unknown layout [A₀ | A₁ | … | A_s] (A₀ block absent in the linear
// variant).
fn condition_row(
    ctx: &FieldCtx,
    x: FieldElem,
    window: &[FieldElem],
    d: usize,
    k: usize,
    variant: Variant,
) -> Vec<FieldElem> {
    let s = window.len();
    let ncols = match variant {
        Variant::Affine => (d + k) + s * (d + 1),
        Variant::Linear => s * (d + 1),
    };
    let mut row = Vec::with_capacity(ncols);
    if variant == Variant::Affine {
        let mut xp = ctx.one();
        for _ in 0..d + k {
            row.push(xp);
            xp = ctx.mul(xp, x);
        }
    }
    for &w in window {
        let mut xp = ctx.one();
        for _ in 0..=d {
            row.push(ctx.mul(xp, w));
            xp = ctx.mul(xp, x);
        }
    }
    row
}

fn assemble_q(
    params: &FrsParams,
    s: usize,
    d: usize,
    variant: Variant,
    kernel: Vec<FieldElem>,
) -> LinearQ {
    let k = params.k();
    let mut a = Vec::with_capacity(s + 1);
    let mut it = kernel.into_iter();
    if variant == Variant::Affine {
        a.push(it.by_ref().take(d + k).collect::<Vec<_>>());
    } else {
        a.push(vec![params.ctx().zero(); d + k]);
    }
    for _ in 0..s {
        a.push(it.by_ref().take(d + 1).collect::<Vec<_>>());
    }
    debug_assert!(it.next().is_none());
    LinearQ {
        s,
        degree_bound: d,
        variant,
        a,
    }
}

fn solve_system(
    params: &FrsParams,
    s: usize,
    d: usize,
    variant: Variant,
    rows: &mut [Vec<FieldElem>],
    ncols: usize,
) -> Result<LinearQ> {
    let kernel = kernel_vector(params.ctx(), rows, ncols).ok_or_else(|| {
        Error::Internal(
            "interpolation system has no kernel despite unknowns > conditions".to_string(),
        )
    })?;
    let q = assemble_q(params, s, d, variant, kernel);
    debug_assert!(!q.is_zero());
    Ok(q)
}

/// Interpolates a nonzero Q vanishing on every length-s window of the
/// received word: for column i and offset j ∈ [0, m−s], the condition is
/// Q(γ^{im+j}, y_{im+j}, …, y_{im+j+s−1}) = 0.
///
/// Deterministic: the kernel vector is chosen canonically, so identical
/// inputs give identical Q.
pub fn interpolate(params: &FrsParams, s: usize, y: &Codeword, variant: Variant) -> Result<LinearQ> {
    check_s(params, s)?;
    y.validate(params)?;
    let d = degree_bound(params, s, variant)?;
    let (conditions, ncols) = system_shape(params, s, variant)?;
    let ctx = params.ctx();
    let m = params.m();
    let k = params.k();
    let pts = params.eval_points();
    let mut rows = Vec::with_capacity(conditions);
    for i in 0..params.num_columns() {
        let col = &y.columns()[i];
        for j in 0..=m - s {
            let x = pts[i * m + j];
            rows.push(condition_row(ctx, x, &col[j..j + s], d, k, variant));
        }
    }
    debug_assert!(ncols > rows.len());
    solve_system(params, s, d, variant, &mut rows, ncols)
}

/// Interpolation for list recovery: position i supplies a set of candidate
/// columns instead of a single received column, and every candidate
/// contributes its own block of m−s+1 vanishing conditions.
///
/// Candidate sets are deduplicated and sorted internally (their order must
/// not affect the result), and the degree cap grows to keep the unknown
/// count above the enlarged condition count T = Σ|Sᵢ|(m−s+1):
/// D = ⌊(T−k+1)/(s+1)⌋. Affine only.
pub fn interpolate_list_recovery(
    params: &FrsParams,
    s: usize,
    sets: &[Vec<Vec<FieldElem>>],
) -> Result<LinearQ> {
    check_s(params, s)?;
    let sets = canonical_sets(params, sets)?;
    let m = params.m();
    let k = params.k();
    let ctx = params.ctx();
    let conditions: usize = sets.iter().map(|set| set.len() * (m - s + 1)).sum();
    let d = degree_bound_for_conditions(conditions, k, s, Variant::Affine)?;
    let ncols = (d + k) + s * (d + 1);
    debug_assert!(ncols > conditions);
    let pts = params.eval_points();
    let mut rows = Vec::with_capacity(conditions);
    for (i, set) in sets.iter().enumerate() {
        for cand in set {
            for j in 0..=m - s {
                let x = pts[i * m + j];
                rows.push(condition_row(ctx, x, &cand[j..j + s], d, k, Variant::Affine));
            }
        }
    }
    solve_system(params, s, d, Variant::Affine, &mut rows, ncols)
}

/// The condition count T = Σ|Sᵢ|(m−s+1) after deduplication, exposed so the
/// recovery threshold can be derived from the same counting as the system.
pub fn list_recovery_conditions(
    params: &FrsParams,
    s: usize,
    sets: &[Vec<Vec<FieldElem>>],
) -> Result<usize> {
    check_s(params, s)?;
    let sets = canonical_sets(params, sets)?;
    Ok(sets.iter().map(|set| set.len() * (params.m() - s + 1)).sum())
}

// Validates shape/range and produces per-position candidate lists sorted by
// entry values with exact duplicates removed.
fn canonical_sets(
    params: &FrsParams,
    sets: &[Vec<Vec<FieldElem>>],
) -> Result<Vec<Vec<Vec<FieldElem>>>> {
    if sets.len() != params.num_columns() {
        return Err(Error::ShapeMismatch(format!(
            "expected {} candidate sets, got {}",
            params.num_columns(),
            sets.len()
        )));
    }
    let q = params.ctx().order();
    let mut out = Vec::with_capacity(sets.len());
    for (position, set) in sets.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::EmptyRecoverySet { position });
        }
        for cand in set {
            if cand.len() != params.m() {
                return Err(Error::ShapeMismatch(format!(
                    "candidate column at position {position} has {} entries, expected m = {}",
                    cand.len(),
                    params.m()
                )));
            }
            if let Some(bad) = cand.iter().find(|c| c.value() >= q) {
                return Err(Error::ElementOutOfRange {
                    value: bad.value(),
                    order: q,
                });
            }
        }
        let mut canon: Vec<Vec<FieldElem>> = set.clone();
        canon.sort();
        canon.dedup();
        out.push(canon);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frs_code::encode;
    use crate::gf::make_field;
    use proptest::prelude::*;

    fn params_n12(q: u64, m: usize, k: usize) -> FrsParams {
        let ctx = make_field(q, 1, None).unwrap();
        FrsParams::with_default_gamma(&ctx, 12, m, k).unwrap()
    }

    // Every interpolation condition, evaluated directly against the word.
    fn check_all_conditions(params: &FrsParams, s: usize, y: &Codeword, q: &LinearQ) {
        let ctx = params.ctx();
        let m = params.m();
        for i in 0..params.num_columns() {
            let col = &y.columns()[i];
            for j in 0..=m - s {
                let x = ctx.pow(params.gamma(), (i * m + j) as u64);
                let v = q.eval_condition(ctx, x, &col[j..j + s]);
                assert_eq!(v.value(), 0, "condition (i={i}, j={j}) violated");
            }
        }
    }

    fn check_degree_caps(params: &FrsParams, q: &LinearQ) {
        let d = q.degree_bound();
        assert_eq!(q.lists().len(), q.s() + 1);
        assert_eq!(q.lists()[0].len(), d + params.k());
        for u in 1..=q.s() {
            assert_eq!(q.lists()[u].len(), d + 1);
        }
        if q.variant() == Variant::Linear {
            assert!(q.lists()[0].iter().all(|c| c.value() == 0));
        }
    }

    #[test]
    fn degree_bound_worked_examples() {
        // N=3, m=4, k=3 over F_13 (n=12).
        let p = params_n12(13, 4, 3);
        assert_eq!(degree_bound(&p, 2, Variant::Affine).unwrap(), 2);
        assert_eq!(degree_bound(&p, 2, Variant::Linear).unwrap(), 4);

        // N=10, m=1, k=4 over F_17 (n=10).
        let ctx = make_field(17, 1, None).unwrap();
        let p = FrsParams::with_default_gamma(&ctx, 10, 1, 4).unwrap();
        assert_eq!(degree_bound(&p, 1, Variant::Affine).unwrap(), 3);
    }

    #[test]
    fn degree_bound_degenerate_combinations() {
        // N=1, m=2, s=2, k=1: one condition cannot support s+1 = 3 unknowns
        // minus the cap... the affine formula demands C - k + 1 >= s + 1.
        let ctx = make_field(5, 1, None).unwrap();
        let p = FrsParams::with_default_gamma(&ctx, 2, 2, 1).unwrap();
        assert!(matches!(
            degree_bound(&p, 2, Variant::Affine),
            Err(Error::DegenerateDegreeBound { conditions: 1, k: 1, s: 2 })
        ));
        // Linear with conditions < s also degenerates.
        assert!(matches!(
            degree_bound(&p, 2, Variant::Linear),
            Err(Error::DegenerateDegreeBound { .. })
        ));
        // s out of range.
        assert!(degree_bound(&p, 3, Variant::Affine).is_err());
        assert!(degree_bound(&p, 0, Variant::Affine).is_err());
    }

    #[test]
    fn system_shape_worked_example() {
        let p = params_n12(13, 4, 3);
        assert_eq!(system_shape(&p, 2, Variant::Affine).unwrap(), (9, 11));
        // Linear: D=4, unknowns 2*(4+1)=10 > 9.
        assert_eq!(system_shape(&p, 2, Variant::Linear).unwrap(), (9, 10));
    }

    #[test]
    fn interpolate_clean_word_annihilates_message() {
        // With y = encode(f), Q(X, f(X), f(gammaX), ...) must be identically
        // zero as a polynomial, not just at the interpolation points.
        let p = params_n12(13, 4, 3);
        let ctx = p.ctx().clone();
        let f: Vec<FieldElem> = [2u64, 5, 1].iter().map(|&v| ctx.elem(v).unwrap()).collect();
        let y = encode(&p, &f).unwrap();
        for variant in [Variant::Affine, Variant::Linear] {
            let q = interpolate(&p, 2, &y, variant).unwrap();
            assert!(!q.is_zero());
            check_degree_caps(&p, &q);
            check_all_conditions(&p, 2, &y, &q);

            // Identity check via explicit polynomial arithmetic.
            let mut acc: Vec<FieldElem> = q.lists()[0].clone();
            for u in 1..=2usize {
                let dilated =
                    crate::gf::poly_dilate(&ctx, &f, ctx.pow(p.gamma(), (u - 1) as u64));
                let term = crate::gf::poly_mul_elems(&ctx, &q.lists()[u], &dilated);
                acc = crate::gf::poly_add_elems(&ctx, &acc, &term);
            }
            assert!(crate::gf::poly_is_zero(&acc), "variant {variant} identity");
        }
    }

    #[test]
    fn interpolate_zero_word_satisfies_conditions() {
        let p = params_n12(13, 4, 3);
        let ctx = p.ctx().clone();
        let zero = encode(&p, &vec![ctx.zero(); 3]).unwrap();
        let q = interpolate(&p, 2, &zero, Variant::Affine).unwrap();
        assert!(!q.is_zero());
        check_all_conditions(&p, 2, &zero, &q);
    }

    #[test]
    fn interpolate_is_deterministic() {
        let p = params_n12(13, 2, 4);
        let ctx = p.ctx().clone();
        let f: Vec<FieldElem> = [7u64, 0, 3, 9].iter().map(|&v| ctx.elem(v).unwrap()).collect();
        let mut y = encode(&p, &f).unwrap();
        // Corrupt one column so the system is not the clean-word special case.
        let mut cols = y.columns().to_vec();
        cols[3][0] = ctx.add(cols[3][0], ctx.one());
        y = Codeword::from_columns(cols).unwrap();
        let q1 = interpolate(&p, 2, &y, Variant::Affine).unwrap();
        let q2 = interpolate(&p, 2, &y, Variant::Affine).unwrap();
        assert_eq!(q1, q2);
    }

    #[test]
    fn singleton_recovery_sets_reduce_to_interpolation() {
        let p = params_n12(13, 4, 3);
        let ctx = p.ctx().clone();
        let f: Vec<FieldElem> = [1u64, 4, 0].iter().map(|&v| ctx.elem(v).unwrap()).collect();
        let y = encode(&p, &f).unwrap();
        let sets: Vec<Vec<Vec<FieldElem>>> =
            y.columns().iter().map(|c| vec![c.clone()]).collect();
        let via_recovery = interpolate_list_recovery(&p, 2, &sets).unwrap();
        let direct = interpolate(&p, 2, &y, Variant::Affine).unwrap();
        assert_eq!(via_recovery, direct);
    }

    #[test]
    fn list_recovery_worked_example_counts() {
        // N=3, m=4, s=2, k=3, two candidates everywhere: T=18, D=5,
        // monomial count 20 > 18.
        let p = params_n12(13, 4, 3);
        let ctx = p.ctx().clone();
        let f1: Vec<FieldElem> = [0u64, 1, 0].iter().map(|&v| ctx.elem(v).unwrap()).collect();
        let f2: Vec<FieldElem> = [5u64, 0, 2].iter().map(|&v| ctx.elem(v).unwrap()).collect();
        let y1 = encode(&p, &f1).unwrap();
        let y2 = encode(&p, &f2).unwrap();
        let sets: Vec<Vec<Vec<FieldElem>>> = (0..3)
            .map(|i| vec![y1.columns()[i].clone(), y2.columns()[i].clone()])
            .collect();
        assert_eq!(list_recovery_conditions(&p, 2, &sets).unwrap(), 18);
        let q = interpolate_list_recovery(&p, 2, &sets).unwrap();
        assert_eq!(q.degree_bound(), 5);
        assert_eq!(q.lists()[0].len() + 2 * q.lists()[1].len(), 8 + 12);

        // Q annihilates both contributing messages.
        for f in [&f1, &f2] {
            let mut acc: Vec<FieldElem> = q.lists()[0].clone();
            for u in 1..=2usize {
                let dilated =
                    crate::gf::poly_dilate(&ctx, f, ctx.pow(p.gamma(), (u - 1) as u64));
                let term = crate::gf::poly_mul_elems(&ctx, &q.lists()[u], &dilated);
                acc = crate::gf::poly_add_elems(&ctx, &acc, &term);
            }
            assert!(crate::gf::poly_is_zero(&acc));
        }
    }

    #[test]
    fn list_recovery_rejects_empty_and_ragged_sets() {
        let p = params_n12(13, 4, 3);
        let ctx = p.ctx().clone();
        let f: Vec<FieldElem> = [1u64, 1, 1].iter().map(|&v| ctx.elem(v).unwrap()).collect();
        let y = encode(&p, &f).unwrap();
        let mut sets: Vec<Vec<Vec<FieldElem>>> =
            y.columns().iter().map(|c| vec![c.clone()]).collect();
        sets[1] = vec![];
        assert!(matches!(
            interpolate_list_recovery(&p, 2, &sets),
            Err(Error::EmptyRecoverySet { position: 1 })
        ));
        sets[1] = vec![vec![ctx.zero(); 3]];
        assert!(matches!(
            interpolate_list_recovery(&p, 2, &sets),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn duplicate_candidates_do_not_change_the_system() {
        let p = params_n12(13, 4, 3);
        let ctx = p.ctx().clone();
        let f: Vec<FieldElem> = [3u64, 3, 0].iter().map(|&v| ctx.elem(v).unwrap()).collect();
        let y = encode(&p, &f).unwrap();
        let singleton: Vec<Vec<Vec<FieldElem>>> =
            y.columns().iter().map(|c| vec![c.clone()]).collect();
        let doubled: Vec<Vec<Vec<FieldElem>>> = y
            .columns()
            .iter()
            .map(|c| vec![c.clone(), c.clone()])
            .collect();
        assert_eq!(
            interpolate_list_recovery(&p, 2, &singleton).unwrap(),
            interpolate_list_recovery(&p, 2, &doubled).unwrap()
        );
    }

    #[test]
    fn from_parts_validates() {
        let p = params_n12(13, 2, 3);
        let ctx = p.ctx().clone();
        let one = ctx.one();
        // Valid: pads to caps.
        let q = LinearQ::from_parts(&p, 1, 1, Variant::Affine, vec![vec![], vec![one]]).unwrap();
        assert_eq!(q.lists()[0].len(), 4);
        assert_eq!(q.lists()[1].len(), 2);
        // All zero rejected.
        assert!(LinearQ::from_parts(&p, 1, 1, Variant::Affine, vec![vec![], vec![]]).is_err());
        // Linear with nonzero Y-free part rejected.
        assert!(
            LinearQ::from_parts(&p, 1, 1, Variant::Linear, vec![vec![one], vec![one]]).is_err()
        );
        // Over-cap list rejected.
        assert!(LinearQ::from_parts(
            &p,
            1,
            1,
            Variant::Affine,
            vec![vec![], vec![one, one, one]]
        )
        .is_err());
        // Wrong list count.
        assert!(LinearQ::from_parts(&p, 2, 1, Variant::Affine, vec![vec![], vec![one]]).is_err());
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("affine".parse::<Variant>().unwrap(), Variant::Affine);
        assert_eq!("linear".parse::<Variant>().unwrap(), Variant::Linear);
        assert!("cubic".parse::<Variant>().is_err());
        assert_eq!(Variant::Affine.to_string(), "affine");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn interpolation_conditions_always_hold(
            raw in proptest::collection::vec(0u64..13, 12),
            s in 1usize..=2,
            affine in proptest::bool::ANY,
        ) {
            let p = params_n12(13, 2, 3);
            let ctx = p.ctx().clone();
            let cols: Vec<Vec<FieldElem>> = raw
                .chunks(2)
                .map(|ch| ch.iter().map(|&v| ctx.elem(v).unwrap()).collect())
                .collect();
            let y = Codeword::from_columns(cols).unwrap();
            let variant = if affine { Variant::Affine } else { Variant::Linear };
            let q = interpolate(&p, s, &y, variant).unwrap();
            prop_assert!(!q.is_zero());
            check_degree_caps(&p, &q);
            check_all_conditions(&p, s, &y, &q);
        }
    }
}
