//! Candidate-message recovery from an interpolation polynomial.
//!
//! A message f (degree < k) survives decoding only if
//! Λ(X) = A₀(X) + A₁(X)f(X) + A₂(X)f(γX) + … + A_s(X)f(γ^{s−1}X)
//! is the zero polynomial. Reading off the coefficient of X^r gives, for
//! each r < k, an equation in f_0, …, f_r whose f_r-coefficient is B(γ^r)
//! with B(X) = a_{1,0} + a_{2,0}X + … + a_{s,0}X^{s−1}: a lower-triangular
//! system. Rows with B(γ^r) ≠ 0 force f_r; rows with B(γ^r) = 0 leave f_r
//! free (their residual constraints are dropped, so the result is an affine
//! superset of the true solution set, shrunk later by pruning). Since the
//! γ^r are distinct and B ≠ 0 has degree < s, at most s−1 positions are
//! free.

use crate::error::{Error, Result};
use crate::frs_code::FrsParams;
use crate::gf::{element_order, poly_eval, FieldCtx, FieldElem};
use crate::interp::{LinearQ, Variant};

/// B(X): the constant terms of A₁, …, A_s after normalization, as a
/// polynomial of degree ≤ s−1. Its values at γ^r decide which message
/// coefficients are forced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPoly {
    coeffs: Vec<FieldElem>,
}

impl BPoly {
    /// Coefficients b_0, …, b_{s−1} (b_i multiplies X^i).
    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.value() == 0)
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElem) -> FieldElem {
        poly_eval(ctx, &self.coeffs, x)
    }
}

/// Factors out the largest common power X^v from all coefficient lists, so
/// that afterwards at least one A_i has a nonzero constant term. Identically
/// zero lists are unaffected. Idempotent.
pub fn normalize_q(q: &LinearQ) -> LinearQ {
    let v = q
        .lists()
        .iter()
        .filter_map(|list| list.iter().position(|c| c.value() != 0))
        .min()
        .expect("LinearQ constructors guarantee a nonzero coefficient");
    if v == 0 {
        return q.clone();
    }
    let shifted: Vec<Vec<FieldElem>> = q
        .lists()
        .iter()
        .map(|list| {
            let mut out: Vec<FieldElem> = list[v.min(list.len())..].to_vec();
            out.resize(list.len(), FieldElem::default());
            out
        })
        .collect();
    q.with_lists(shifted)
}

/// Reads off B(X) from a (normalized) Q: coefficient i is the constant term
/// of A_{i+1}. Meaningful after [`normalize_q`]; on a non-normalized Q it
/// simply reports the current constant terms.
pub fn compute_b(q: &LinearQ) -> BPoly {
    let coeffs: Vec<FieldElem> = (1..=q.s())
        .map(|u| q.lists()[u].first().copied().unwrap_or_default())
        .collect();
    BPoly { coeffs }
}

/// The affine space Mx + z ⊆ F_q^k of candidate message coefficient
/// vectors, of dimension d ≤ s−1, together with the row indices where the
/// triangular solve left a coefficient free.
///
/// Rows `free_positions[j]` of M form the d×d identity and z vanishes
/// there, so distinct x give distinct points and membership is decided by
/// reading the free coordinates. An explicitly `empty` space (no solution
/// at all) is distinct from a zero-dimensional space holding one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolutionSpace {
    k: usize,
    basis: Vec<Vec<FieldElem>>,
    offset: Vec<FieldElem>,
    free_positions: Vec<usize>,
    empty: bool,
}

impl AffineSolutionSpace {
    pub(crate) fn new_empty(k: usize) -> Self {
        AffineSolutionSpace {
            k,
            basis: vec![Vec::new(); k],
            offset: vec![FieldElem::default(); k],
            free_positions: Vec::new(),
            empty: true,
        }
    }

    /// Dimension d; 0 both for a unique solution and for the empty space.
    pub fn dim(&self) -> usize {
        self.free_positions.len()
    }

    /// Message length k (number of rows of M).
    pub fn message_len(&self) -> usize {
        self.k
    }

    /// The k×d basis matrix M, row-major.
    pub fn basis_matrix(&self) -> &[Vec<FieldElem>] {
        &self.basis
    }

    /// The offset vector z (length k).
    pub fn offset(&self) -> &[FieldElem] {
        &self.offset
    }

    /// Row indices where the solve left the coefficient free, ascending.
    pub fn free_positions(&self) -> &[usize] {
        &self.free_positions
    }

    /// True when the triangular system is contradictory and no message
    /// satisfies it.
    pub fn is_empty_space(&self) -> bool {
        self.empty
    }

    /// The point Mx + z for a coordinate vector x of length d.
    pub fn point(&self, ctx: &FieldCtx, x: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if self.empty {
            return Err(Error::ShapeMismatch(
                "empty solution space has no points".to_string(),
            ));
        }
        if x.len() != self.dim() {
            return Err(Error::WrongLength {
                what: "coordinate vector",
                expected: self.dim(),
                got: x.len(),
            });
        }
        let mut out = Vec::with_capacity(self.k);
        for r in 0..self.k {
            let mut acc = self.offset[r];
            for (j, &xj) in x.iter().enumerate() {
                acc = ctx.add(acc, ctx.mul(self.basis[r][j], xj));
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Membership test: the identity submatrix makes the only viable
    /// coordinates x_j = f[free_positions[j]], so one reconstruction decides.
    pub fn contains(&self, ctx: &FieldCtx, f: &[FieldElem]) -> bool {
        if self.empty || f.len() != self.k {
            return false;
        }
        let x: Vec<FieldElem> = self.free_positions.iter().map(|&r| f[r]).collect();
        match self.point(ctx, &x) {
            Ok(p) => p == f,
            Err(_) => false,
        }
    }

    /// All q^d points of the space, enumerated in coordinate-counter order
    /// (first coordinate fastest). Errors with `CapExceeded` when q^d > cap.
    pub fn enumerate(&self, ctx: &FieldCtx, cap: u64) -> Result<Vec<Vec<FieldElem>>> {
        if self.empty {
            return Ok(Vec::new());
        }
        let total = self.size(ctx);
        match total {
            Some(t) if t <= cap => {}
            other => {
                return Err(Error::CapExceeded {
                    needed: other.unwrap_or(u64::MAX),
                    cap,
                })
            }
        }
        let d = self.dim();
        let q = ctx.order();
        let mut out = Vec::with_capacity(total.unwrap() as usize);
        let mut x = vec![ctx.zero(); d];
        loop {
            out.push(self.point(ctx, &x).expect("coordinates sized to dim"));
            // Odometer increment, first coordinate fastest.
            let mut carry = true;
            for xi in x.iter_mut() {
                let next = xi.value() + 1;
                if next < q {
                    *xi = ctx.elem(next).unwrap();
                    carry = false;
                    break;
                }
                *xi = ctx.zero();
            }
            if carry {
                break;
            }
        }
        Ok(out)
    }

    /// Number of points, q^d, or None if it overflows u64. Empty space: 0.
    pub fn size(&self, ctx: &FieldCtx) -> Option<u64> {
        if self.empty {
            return Some(0);
        }
        let mut acc = 1u64;
        for _ in 0..self.dim() {
            acc = acc.checked_mul(ctx.order())?;
        }
        Some(acc)
    }
}

/// Runs the triangular solve: normalizes Q, computes B, and sweeps
/// r = 0, …, k−1 forcing or freeing each f_r. Cost O(k²·s) field operations.
///
/// The returned space contains every degree-<k solution of the annihilation
/// identity; it may contain non-solutions from dropped free-row residuals,
/// which downstream pruning removes.
pub fn solve_candidates(params: &FrsParams, q: &LinearQ) -> Result<AffineSolutionSpace> {
    let ctx = params.ctx();
    let k = params.k();
    let s = q.s();
    // The r-sweep needs gamma^0..gamma^{k-1} pairwise distinct; code
    // parameters already guarantee order >= n > k, but verify defensively
    // since Q may come from anywhere.
    if (element_order(ctx, params.gamma())? as usize) < k {
        return Err(Error::BadCodeParams(format!(
            "gamma must have multiplicative order at least k = {k}"
        )));
    }
    let nq = normalize_q(q);
    let b = compute_b(&nq);
    let a = nq.lists();
    if b.is_zero() {
        // Normalization put a nonzero constant term somewhere; with B = 0 it
        // can only be a_{0,0}, making the X^0 equation a_{0,0} = 0
        // contradictory.
        debug_assert!(a[0][0].value() != 0);
        return Ok(AffineSolutionSpace::new_empty(k));
    }

    let mut pow_gamma = Vec::with_capacity(k);
    let mut acc = ctx.one();
    for _ in 0..k {
        pow_gamma.push(acc);
        acc = ctx.mul(acc, params.gamma());
    }

    let mut basis: Vec<Vec<FieldElem>> = Vec::with_capacity(k);
    let mut offset: Vec<FieldElem> = Vec::with_capacity(k);
    let mut free_positions: Vec<usize> = Vec::new();
    for r in 0..k {
        // Accumulate the affine form of a_{0,r} + sum_{i<r} c_i f_i under
        // the solved expressions f_i = basis[i]·x + offset[i], with
        // c_i = sum_u a_{u,r-i} (gamma^i)^{u-1}.
        let mut con = a[0].get(r).copied().unwrap_or_default();
        let mut vec_part = vec![ctx.zero(); free_positions.len()];
        for i in 0..r {
            let mut c = ctx.zero();
            let mut w = ctx.one();
            for u in 1..=s {
                if let Some(&coef) = a[u].get(r - i) {
                    if coef.value() != 0 {
                        c = ctx.add(c, ctx.mul(coef, w));
                    }
                }
                w = ctx.mul(w, pow_gamma[i]);
            }
            if c.value() == 0 {
                continue;
            }
            con = ctx.add(con, ctx.mul(c, offset[i]));
            for (j, &mij) in basis[i].iter().enumerate() {
                if mij.value() != 0 {
                    vec_part[j] = ctx.add(vec_part[j], ctx.mul(c, mij));
                }
            }
        }
        let bg = b.eval(ctx, pow_gamma[r]);
        if bg.value() != 0 {
            // Forced: f_r = -(con + vec_part·x)/B(gamma^r).
            let neg_inv = ctx.neg(ctx.inv(bg)?);
            offset.push(ctx.mul(con, neg_inv));
            basis.push(vec_part.iter().map(|&v| ctx.mul(v, neg_inv)).collect());
        } else {
            // Free: new coordinate; the residual constraint is dropped.
            free_positions.push(r);
            let mut row = vec![ctx.zero(); free_positions.len()];
            *row.last_mut().unwrap() = ctx.one();
            basis.push(row);
            offset.push(ctx.zero());
        }
    }
    let d = free_positions.len();
    for row in &mut basis {
        row.resize(d, ctx.zero());
    }
    if d + 1 > s {
        // B != 0 of degree <= s-1 cannot vanish at k distinct points unless
        // d <= s-1; anything else is a bug.
        return Err(Error::Internal(format!(
            "solution space dimension {d} exceeds s-1 = {}",
            s - 1
        )));
    }
    Ok(AffineSolutionSpace {
        k,
        basis,
        offset,
        free_positions,
        empty: false,
    })
}

// Λ(X) = A₀(X) + Σ_u A_u(X) f(γ^{u−1}X) as an explicit coefficient list;
// the zero polynomial exactly when f survives Q. Test and oracle plumbing,
// not a decoding path.
#[cfg(test)]
pub(crate) fn candidate_residual(params: &FrsParams, q: &LinearQ, f: &[FieldElem]) -> Vec<FieldElem> {
    let ctx = params.ctx();
    let mut acc: Vec<FieldElem> = q.lists()[0].clone();
    for u in 1..=q.s() {
        let dilated = crate::gf::poly_dilate(ctx, f, ctx.pow(params.gamma(), (u - 1) as u64));
        let term = crate::gf::poly_mul_elems(ctx, &q.lists()[u], &dilated);
        acc = crate::gf::poly_add_elems(ctx, &acc, &term);
    }
    acc
}

/// The adversarial interpolation polynomial showing the dimension bound is
/// tight: A₀ = 0 and A₁, …, A_s the coefficients of (Y−1)(Y−γ)⋯(Y−γ^{s−2}),
/// so B(X) = ∏_{j<s−1}(X−γ^j) vanishes at γ^0, …, γ^{s−2} and every
/// polynomial of degree ≤ s−2 survives. Requires 2 ≤ s ≤ m and k ≥ s−1.
pub fn tightness_witness(params: &FrsParams, s: usize) -> Result<LinearQ> {
    if s < 2 || s > params.m() {
        return Err(Error::BadCodeParams(format!(
            "tightness witness needs 2 <= s <= m, got s = {s}, m = {}",
            params.m()
        )));
    }
    let ctx = params.ctx();
    // Expand prod_{j=0}^{s-2} (Y - gamma^j) into coefficients of Y^0..Y^{s-1}.
    let mut poly = vec![ctx.one()];
    let mut root = ctx.one();
    for _ in 0..s - 1 {
        let mut next = vec![ctx.zero(); poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] = ctx.add(next[i + 1], c);
            next[i] = ctx.sub(next[i], ctx.mul(c, root));
        }
        poly = next;
        root = ctx.mul(root, params.gamma());
    }
    let mut lists = vec![Vec::new()];
    for u in 0..s {
        lists.push(vec![poly[u]]);
    }
    LinearQ::from_parts(params, s, 0, Variant::Affine, lists)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frs_code::make_params;
    use crate::gf::{make_field, poly_is_zero};
    use proptest::prelude::*;

    fn f5_params(n: usize, m: usize, k: usize) -> FrsParams {
        let ctx = make_field(5, 1, None).unwrap();
        make_params(&ctx, ctx.elem(2).unwrap(), n, m, k).unwrap()
    }

    fn elems(ctx: &FieldCtx, vs: &[u64]) -> Vec<FieldElem> {
        vs.iter().map(|&v| ctx.elem(v).unwrap()).collect()
    }

    #[test]
    fn normalize_examples() {
        let p = f5_params(4, 2, 2);
        let ctx = p.ctx().clone();
        // A0 = X^2, A1 = X: common factor X.
        let q = LinearQ::from_parts(
            &p,
            1,
            2,
            Variant::Affine,
            vec![elems(&ctx, &[0, 0, 1]), elems(&ctx, &[0, 1])],
        )
        .unwrap();
        let n = normalize_q(&q);
        assert_eq!(n.lists()[0], elems(&ctx, &[0, 1, 0, 0])); // X (padded to D+k)
        assert_eq!(n.lists()[1], elems(&ctx, &[1, 0, 0])); // 1
        // Idempotent.
        assert_eq!(normalize_q(&n), n);

        // Constant A1: unchanged.
        let q = LinearQ::from_parts(&p, 1, 1, Variant::Affine, vec![vec![], elems(&ctx, &[1])])
            .unwrap();
        assert_eq!(normalize_q(&q), q);

        // A0 = 0, A1 = A2 = X^3 with s = 2.
        let q = LinearQ::from_parts(
            &p,
            2,
            3,
            Variant::Affine,
            vec![vec![], elems(&ctx, &[0, 0, 0, 1]), elems(&ctx, &[0, 0, 0, 1])],
        )
        .unwrap();
        let n = normalize_q(&q);
        assert_eq!(n.lists()[1], elems(&ctx, &[1, 0, 0, 0]));
        assert_eq!(n.lists()[2], elems(&ctx, &[1, 0, 0, 0]));
    }

    #[test]
    fn compute_b_examples() {
        let p = f5_params(4, 2, 2);
        let ctx = p.ctx().clone();
        // A1 = 1, A2 = X: B = 1.
        let q = LinearQ::from_parts(
            &p,
            2,
            1,
            Variant::Affine,
            vec![vec![], elems(&ctx, &[1]), elems(&ctx, &[0, 1])],
        )
        .unwrap();
        let b = compute_b(&q);
        assert_eq!(b.coeffs(), elems(&ctx, &[1, 0]));
        assert!(!b.is_zero());

        // A0 = 1, A1 = X: B = 0 (nothing to normalize away).
        let q = LinearQ::from_parts(
            &p,
            1,
            1,
            Variant::Affine,
            vec![elems(&ctx, &[1]), elems(&ctx, &[0, 1])],
        )
        .unwrap();
        assert!(compute_b(&normalize_q(&q)).is_zero());
    }

    #[test]
    fn unique_solution_example() {
        // s=1, A1 = 1, A0 = -(1+X) over F_5, k=2: forces f = 1+X exactly.
        let p = f5_params(4, 2, 2);
        let ctx = p.ctx().clone();
        let q = LinearQ::from_parts(
            &p,
            1,
            1,
            Variant::Affine,
            vec![elems(&ctx, &[4, 4]), elems(&ctx, &[1])],
        )
        .unwrap();
        let space = solve_candidates(&p, &q).unwrap();
        assert!(!space.is_empty_space());
        assert_eq!(space.dim(), 0);
        assert_eq!(space.offset(), elems(&ctx, &[1, 1]));
        assert_eq!(space.size(&ctx), Some(1));
        let pts = space.enumerate(&ctx, 10).unwrap();
        assert_eq!(pts, vec![elems(&ctx, &[1, 1])]);
        assert!(poly_is_zero(&candidate_residual(&p, &q, &pts[0])));
    }

    #[test]
    fn tightness_witness_frees_constants() {
        // s=2 over F_5, gamma=2, k=3: A1=4, A2=1, B = 4+X vanishes only at 1,
        // so exactly f_0 is free and the space is the constants.
        let p = f5_params(4, 2, 3);
        let ctx = p.ctx().clone();
        let q = tightness_witness(&p, 2).unwrap();
        assert_eq!(q.lists()[1], elems(&ctx, &[4]));
        assert_eq!(q.lists()[2], elems(&ctx, &[1]));
        let b = compute_b(&q);
        assert_eq!(b.eval(&ctx, ctx.elem(1).unwrap()).value(), 0);
        assert_eq!(b.eval(&ctx, ctx.elem(2).unwrap()).value(), 1);
        assert_eq!(b.eval(&ctx, ctx.elem(4).unwrap()).value(), 3);

        let space = solve_candidates(&p, &q).unwrap();
        assert_eq!(space.dim(), 1);
        assert_eq!(space.free_positions(), &[0]);
        let members = space.enumerate(&ctx, 100).unwrap();
        assert_eq!(members.len(), 5);
        for c in 0..5u64 {
            let f = elems(&ctx, &[c, 0, 0]);
            assert!(space.contains(&ctx, &f));
            assert!(poly_is_zero(&candidate_residual(&p, &q, &f)));
        }
        // And nothing else: exhaustive containment over all 125 messages.
        for w in 0..125u64 {
            let f = elems(&ctx, &[w % 5, (w / 5) % 5, w / 25]);
            let solves = poly_is_zero(&candidate_residual(&p, &q, &f));
            assert_eq!(solves, space.contains(&ctx, &f));
        }
    }

    #[test]
    fn contradictory_q_yields_empty_space() {
        // s=1, A0 = 1, A1 = X: B = 0 and the constant equation reads 1 = 0.
        let p = f5_params(4, 2, 2);
        let ctx = p.ctx().clone();
        let q = LinearQ::from_parts(
            &p,
            1,
            1,
            Variant::Affine,
            vec![elems(&ctx, &[1]), elems(&ctx, &[0, 1])],
        )
        .unwrap();
        let space = solve_candidates(&p, &q).unwrap();
        assert!(space.is_empty_space());
        assert_eq!(space.dim(), 0);
        assert_eq!(space.size(&ctx), Some(0));
        assert!(space.enumerate(&ctx, 10).unwrap().is_empty());
        assert!(!space.contains(&ctx, &elems(&ctx, &[0, 0])));
        assert!(space.point(&ctx, &[]).is_err());
    }

    #[test]
    fn identity_submatrix_on_free_rows() {
        let p = f5_params(4, 2, 3);
        let q = tightness_witness(&p, 2).unwrap();
        let space = solve_candidates(&p, &q).unwrap();
        let ctx = p.ctx();
        for (j, &r) in space.free_positions().iter().enumerate() {
            for jj in 0..space.dim() {
                let want = if j == jj { ctx.one() } else { ctx.zero() };
                assert_eq!(space.basis_matrix()[r][jj], want);
            }
            assert_eq!(space.offset()[r], ctx.zero());
        }
    }

    #[test]
    fn enumerate_respects_cap() {
        let p = f5_params(4, 2, 3);
        let q = tightness_witness(&p, 2).unwrap();
        let space = solve_candidates(&p, &q).unwrap();
        let err = space.enumerate(p.ctx(), 4).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { needed: 5, cap: 4 }));
    }

    #[test]
    fn linear_variant_space_contains_zero() {
        // Interpolate a corrupted word with the linear variant; the solved
        // space must pass through the origin (z = 0).
        let ctx = make_field(13, 1, None).unwrap();
        let p = FrsParams::with_default_gamma(&ctx, 12, 4, 3).unwrap();
        let f = elems(&ctx, &[5, 1, 9]);
        let y = crate::frs_code::encode(&p, &f).unwrap();
        let mut cols = y.columns().to_vec();
        cols[0][1] = ctx.add(cols[0][1], ctx.one());
        let y = crate::frs_code::Codeword::from_columns(cols).unwrap();
        let q = crate::interp::interpolate(&p, 2, &y, Variant::Linear).unwrap();
        let space = solve_candidates(&p, &q).unwrap();
        assert!(!space.is_empty_space());
        assert!(space.offset().iter().all(|z| z.value() == 0));
        assert!(space.contains(&ctx, &elems(&ctx, &[0, 0, 0])));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn random_q_spaces_are_sound(
            raw in proptest::collection::vec(0u64..5, 1 + 2 + 2),
            s in 1usize..=2,
        ) {
            // Random Q with s in {1,2} over F_5, k=3: the space always has
            // d <= s-1 (or is empty), carries the identity submatrix, and
            // contains every true solution (exhaustive over 125 messages).
            let p = f5_params(4, 2, 3);
            let ctx = p.ctx().clone();
            let d = 1usize;
            let a0 = elems(&ctx, &raw[0..1]);
            let a1 = elems(&ctx, &raw[1..3]);
            let a2 = elems(&ctx, &raw[3..5]);
            let lists = if s == 1 { vec![a0, a1] } else { vec![a0, a1, a2] };
            let q = match LinearQ::from_parts(&p, s, d, Variant::Affine, lists) {
                Ok(q) => q,
                Err(_) => return Ok(()), // all-zero draw
            };
            let space = solve_candidates(&p, &q).unwrap();
            prop_assert!(space.dim() + 1 <= s || space.is_empty_space());
            for w in 0..125u64 {
                let f = elems(&ctx, &[w % 5, (w / 5) % 5, w / 25]);
                if poly_is_zero(&candidate_residual(&p, &q, &f)) {
                    prop_assert!(space.contains(&ctx, &f));
                }
            }
        }
    }
}
