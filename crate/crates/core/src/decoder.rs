//! The end-to-end list decoder: interpolate, solve, enumerate, prune; plus
//! agreement thresholds, list recovery, radius formulas, and a brute-force
//! oracle for desk-scale cross-checking.

use crate::error::{Error, Result};
use crate::frs_code::{agreement, encode, Codeword, FrsParams};
use crate::gf::FieldElem;
use crate::interp::{
    degree_bound, interpolate, interpolate_list_recovery, list_recovery_conditions, Variant,
};
use crate::solver::{solve_candidates, AffineSolutionSpace};
use std::time::Instant;

/// Wall-clock timings of the pipeline stages plus the number of space
/// members enumerated during pruning. Timings are observational; nothing is
/// asserted on them.
#[derive(Clone, Debug, Default)]
pub struct DecodeStats {
    pub interp_secs: f64,
    pub solve_secs: f64,
    pub prune_secs: f64,
    pub enumerated: u64,
}

/// Decoder output: the pruned candidate list (deduplicated, sorted by the
/// canonical integer encoding of the coefficient vector), the affine space
/// it was drawn from, the threshold used, and stage statistics.
#[derive(Clone, Debug)]
pub struct DecodeResult {
    pub candidates: Vec<Vec<FieldElem>>,
    pub space: AffineSolutionSpace,
    pub t_min: usize,
    pub stats: DecodeStats,
}

/// Minimum column agreement that guarantees a message satisfies the
/// annihilation identity and therefore lands in the solution space.
///
/// Affine: t_min = ⌊(D+k−1)/(m−s+1)⌋ + 1 (smallest integer t with
/// t(m−s+1) > D+k−1). Linear: t_min = ⌈(D+k)/(m−s+1)⌉ (smallest t with
/// t(m−s+1) ≥ D+k).
pub fn decode_threshold(params: &FrsParams, s: usize, variant: Variant) -> Result<usize> {
    let d = degree_bound(params, s, variant)?;
    let k = params.k();
    let w = params.m() - s + 1;
    Ok(match variant {
        Variant::Affine => (d + k - 1) / w + 1,
        Variant::Linear => (d + k).div_ceil(w),
    })
}

/// Sorts coefficient vectors by their canonical integer encoding
/// Σ f_i q^i, i.e. lexicographically from the highest coefficient down.
fn sort_candidates(list: &mut Vec<Vec<FieldElem>>) {
    list.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    list.dedup();
}

/// Full pipeline over a received word. `cap` bounds the number of space
/// members enumerated during pruning (the space holds q^d of them).
pub fn list_decode(
    params: &FrsParams,
    s: usize,
    y: &Codeword,
    variant: Variant,
    cap: u64,
) -> Result<DecodeResult> {
    y.validate(params)?;
    let t_min = decode_threshold(params, s, variant)?;
    let ctx = params.ctx();

    let t0 = Instant::now();
    let q = interpolate(params, s, y, variant)?;
    let interp_secs = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let space = solve_candidates(params, &q)?;
    let solve_secs = t1.elapsed().as_secs_f64();

    let t2 = Instant::now();
    let members = space.enumerate(ctx, cap)?;
    let enumerated = members.len() as u64;
    let mut candidates = Vec::new();
    for f in members {
        let cw = encode(params, &f)?;
        if agreement(params, &cw, y)? >= t_min {
            candidates.push(f);
        }
    }
    sort_candidates(&mut candidates);
    let prune_secs = t2.elapsed().as_secs_f64();

    Ok(DecodeResult {
        candidates,
        space,
        t_min,
        stats: DecodeStats {
            interp_secs,
            solve_secs,
            prune_secs,
            enumerated,
        },
    })
}

/// Exhaustive oracle: every message polynomial whose encoding agrees with
/// `y` in at least `t` columns, by enumerating all q^k messages. Errors when
/// q^k exceeds `cap`. Output sorted canonically like [`list_decode`].
pub fn brute_force_decode(
    params: &FrsParams,
    y: &Codeword,
    t: usize,
    cap: u64,
) -> Result<Vec<Vec<FieldElem>>> {
    y.validate(params)?;
    let ctx = params.ctx();
    let q = ctx.order();
    let k = params.k();
    let mut total = 1u64;
    for _ in 0..k {
        total = match total.checked_mul(q) {
            Some(v) => v,
            None => {
                return Err(Error::CapExceeded {
                    needed: u64::MAX,
                    cap,
                })
            }
        };
    }
    if total > cap {
        return Err(Error::CapExceeded { needed: total, cap });
    }

    let pts = params.eval_points();
    let n = params.n();
    let m = params.m();
    let mut f = vec![ctx.zero(); k];
    // Incremental evaluation: evals[r] = f(gamma^r). Bumping f_0 adds 1 to
    // every evaluation; any other counter step recomputes from scratch
    // (1/q of the steps), which keeps the sweep near-linear overall.
    let mut evals: Vec<FieldElem> = vec![ctx.zero(); n];
    let mut out = Vec::new();
    let mut first = true;
    loop {
        if first {
            first = false;
        } else {
            let mut carried = 0usize;
            let mut done = true;
            for i in 0..k {
                let next = f[i].value() + 1;
                if next < q {
                    f[i] = ctx.elem(next).unwrap();
                    done = false;
                    break;
                }
                f[i] = ctx.zero();
                carried = i + 1;
            }
            if done {
                break;
            }
            if carried == 0 {
                let one = ctx.one();
                for e in evals.iter_mut() {
                    *e = ctx.add(*e, one);
                }
            } else {
                for (r, e) in evals.iter_mut().enumerate() {
                    *e = crate::gf::poly_eval(ctx, &f, pts[r]);
                }
            }
        }
        let mut agree = 0usize;
        for j in 0..params.num_columns() {
            let col = &y.columns()[j];
            if (0..m).all(|i| evals[j * m + i] == col[i]) {
                agree += 1;
            }
        }
        if agree >= t {
            out.push(f.clone());
        }
    }
    // Counter order with f_0 fastest ascends in encoding from the low
    // coefficient, which is not the canonical order; sort to match.
    sort_candidates(&mut out);
    Ok(out)
}

/// Minimum t for which list recovery against these candidate sets is
/// complete: the affine threshold computed from the enlarged condition count
/// T = Σ|Sᵢ|(m−s+1), i.e. ⌊(D+k−1)/(m−s+1)⌋ + 1 with D = ⌊(T−k+1)/(s+1)⌋.
pub fn recover_threshold(
    params: &FrsParams,
    s: usize,
    sets: &[Vec<Vec<FieldElem>>],
) -> Result<usize> {
    let conditions = list_recovery_conditions(params, s, sets)?;
    let k = params.k();
    if conditions + 1 < k + s + 1 {
        return Err(Error::DegenerateDegreeBound {
            conditions,
            k,
            s,
        });
    }
    let d = (conditions - k + 1) / (s + 1);
    if d < 1 {
        return Err(Error::DegenerateDegreeBound {
            conditions,
            k,
            s,
        });
    }
    Ok((d + k - 1) / (params.m() - s + 1) + 1)
}

/// List recovery: position i supplies a set Sᵢ of candidate columns; returns
/// every message whose encoding hits its set in at least `t` positions.
/// Requires t at or above [`recover_threshold`], which is what guarantees
/// such messages reach the solution space.
pub fn list_recover(
    params: &FrsParams,
    s: usize,
    sets: &[Vec<Vec<FieldElem>>],
    t: usize,
    cap: u64,
) -> Result<Vec<Vec<FieldElem>>> {
    let t_min = recover_threshold(params, s, sets)?;
    if t < t_min {
        return Err(Error::ThresholdTooSmall { t, t_min });
    }
    let ctx = params.ctx();
    let q = interpolate_list_recovery(params, s, sets)?;
    let space = solve_candidates(params, &q)?;
    let members = space.enumerate(ctx, cap)?;
    let mut out = Vec::new();
    for f in members {
        let cw = encode(params, &f)?;
        let hits = cw
            .columns()
            .iter()
            .zip(sets)
            .filter(|(col, set)| set.iter().any(|cand| cand == *col))
            .count();
        if hits >= t {
            out.push(f);
        }
    }
    sort_candidates(&mut out);
    Ok(out)
}

/// Agreement fraction needed by the degree-1 affine decoder:
/// 1/(s+1) + (s/(s+1))·mR/(m−s+1).
pub fn agreement_fraction_degree1(s: usize, m: usize, rate: f64) -> f64 {
    let x = m as f64 * rate / (m - s + 1) as f64;
    1.0 / (s as f64 + 1.0) + (s as f64 / (s as f64 + 1.0)) * x
}

/// Agreement fraction needed by the multiplicity-based decoder:
/// (mR/(m−s+1))^{s/(s+1)}. Lies at or below the degree-1 fraction by the
/// weighted AM-GM inequality.
pub fn agreement_fraction_multiplicity(s: usize, m: usize, rate: f64) -> f64 {
    let x = m as f64 * rate / (m - s + 1) as f64;
    x.powf(s as f64 / (s as f64 + 1.0))
}

/// Agreement fraction needed by the linear (A₀ = 0) variant:
/// 1/s + mR/(m−s+1).
pub fn agreement_fraction_linear(s: usize, m: usize, rate: f64) -> f64 {
    let x = m as f64 * rate / (m - s + 1) as f64;
    1.0 / s as f64 + x
}
