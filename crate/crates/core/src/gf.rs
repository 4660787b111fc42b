//! Exact arithmetic over finite fields: prime fields `F_p`, extensions
//! `F_{p^e}` in a polynomial basis, and towers `K = F_{q^k}` built on top of
//! either.
//!
//! Elements are canonical integers in `[0, q)`: the base-`p` digit vector of
//! the residue polynomial, little-endian (digit `i` is the coefficient of
//! `X^i`). This makes serialization bit-exact and element comparison a plain
//! integer comparison. Contexts are immutable after construction and every
//! operation is a pure function, so contexts may be shared freely across
//! threads.
//!
//! No asymptotically fast arithmetic: schoolbook polynomial products and
//! textbook extended Euclid throughout. Intended scale is small fields
//! (desk-scale experiments), where lookup tables cover the hot paths.

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// A field element: a canonical integer in `[0, q)`.
///
/// Elements carry no pointer to their context; all operations go through the
/// context that created them, and mixing contexts is a caller error (caught
/// by debug assertions on the value range where cheap).
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FieldElem(u64);

impl FieldElem {
    pub fn value(self) -> u64 {
        self.0
    }

    // Unvalidated constructor for deserialization paths inside the crate;
    // callers re-validate against a concrete field before arithmetic.
    pub(crate) fn from_raw(v: u64) -> FieldElem {
        FieldElem(v)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// ---------------------------------------------------------------------------
// Integer helpers: primality, factorization, modular arithmetic.
// ---------------------------------------------------------------------------

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set below is exact for all u64.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division. Adequate for desk-scale orders;
/// callers should not hand this cryptographic-size inputs.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        if *n % p == 0 {
            let mut mult = 0;
            while *n % p == 0 {
                *n /= p;
                mult += 1;
            }
            out.push((p, mult));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5u64;
    while p.saturating_mul(p) <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn checked_pow_u64(base: u64, degree: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..degree {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub(crate) fn digits_of(mut v: u64, base: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(v % base);
        v /= base;
    }
    out
}

pub(crate) fn undigits(ds: &[u64], base: u64) -> u64 {
    ds.iter().rev().fold(0u64, |acc, &d| acc * base + d)
}

// ---------------------------------------------------------------------------
// Generic polynomial engine over raw canonical values.
//
// Both the prime-field extension arithmetic (digits over F_p) and the tower
// arithmetic (digits over F_q) are instances of the same construction, so the
// polynomial routines are written once against this minimal field interface.
// ---------------------------------------------------------------------------

pub(crate) trait Arith {
    fn size(&self) -> u64;
    fn add_raw(&self, a: u64, b: u64) -> u64;
    fn sub_raw(&self, a: u64, b: u64) -> u64;
    fn mul_raw(&self, a: u64, b: u64) -> u64;
    /// Inverse of a nonzero element; callers must not pass zero.
    fn inv_raw(&self, a: u64) -> u64;
}

struct PrimeArith {
    p: u64,
}

impl Arith for PrimeArith {
    fn size(&self) -> u64 {
        self.p
    }
    fn add_raw(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        mulmod(a, b, self.p)
    }
    fn inv_raw(&self, a: u64) -> u64 {
        debug_assert!(a != 0 && a < self.p);
        // Extended Euclid on integers; p prime guarantees gcd 1.
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        t0.rem_euclid(self.p as i128) as u64
    }
}

fn poly_deg(c: &[u64]) -> Option<usize> {
    c.iter().rposition(|&x| x != 0)
}

fn poly_trim(mut c: Vec<u64>) -> Vec<u64> {
    let len = poly_deg(&c).map_or(0, |d| d + 1);
    c.truncate(len);
    c
}

fn poly_mul<A: Arith>(ar: &A, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = ar.add_raw(out[i + j], ar.mul_raw(ai, bj));
        }
    }
    out
}

/// Long division: returns (quotient, remainder) with deg(rem) < deg(den).
fn poly_divmod<A: Arith>(ar: &A, num: &[u64], den: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let dd = poly_deg(den).expect("division by zero polynomial");
    let mut rem = num.to_vec();
    if poly_deg(&rem).map_or(true, |dn| dn < dd) {
        return (Vec::new(), poly_trim(rem));
    }
    let dn = poly_deg(&rem).unwrap();
    let lead_inv = ar.inv_raw(den[dd]);
    let mut quot = vec![0u64; dn - dd + 1];
    for i in (dd..=dn).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        let coef = ar.mul_raw(c, lead_inv);
        quot[i - dd] = coef;
        for (j, &dj) in den.iter().enumerate().take(dd + 1) {
            rem[i - dd + j] = ar.sub_raw(rem[i - dd + j], ar.mul_raw(coef, dj));
        }
    }
    rem.truncate(dd);
    (quot, poly_trim(rem))
}

fn poly_sub<A: Arith>(ar: &A, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = ar.sub_raw(x, y);
    }
    poly_trim(out)
}

/// Irreducibility over the base field by trial division against every monic
/// polynomial of degree up to deg/2. Exponential in the degree; fine at the
/// scale contexts are built at.
fn is_irreducible<A: Arith>(ar: &A, poly: &[u64]) -> bool {
    let d = match poly_deg(poly) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let q = ar.size();
    for dd in 1..=d / 2 {
        let count = checked_pow_u64(q, dd as u32).expect("divisor space overflows u64");
        for w in 0..count {
            let mut den = digits_of(w, q, dd);
            den.push(1);
            let (_, rem) = poly_divmod(ar, poly, &den);
            if rem.is_empty() {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree `d` with the smallest canonical integer
/// encoding (coefficient digits read as a base-q number, leading 1 included).
/// Deterministic across runs, so independently built contexts agree.
fn smallest_irreducible<A: Arith>(ar: &A, d: usize) -> Vec<u64> {
    let q = ar.size();
    let count = checked_pow_u64(q, d as u32).expect("modulus search space overflows u64");
    for w in 0..count {
        let mut cand = digits_of(w, q, d);
        cand.push(1);
        if is_irreducible(ar, &cand) {
            return cand;
        }
    }
    unreachable!("an irreducible of every degree exists over a finite field");
}

/// Product of two digit vectors modulo a monic modulus, all length `e`
/// (modulus length `e+1`).
fn ext_mul<A: Arith>(ar: &A, modulus: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
    let e = modulus.len() - 1;
    debug_assert!(a.len() == e && b.len() == e);
    let mut prod = vec![0u64; 2 * e - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = ar.add_raw(prod[i + j], ar.mul_raw(ai, bj));
        }
    }
    reduce_by_monic(ar, modulus, &mut prod);
    prod.truncate(e);
    prod
}

/// In-place reduction of `prod` by a monic modulus; afterwards only the low
/// `modulus.len()-1` entries are meaningful.
fn reduce_by_monic<A: Arith>(ar: &A, modulus: &[u64], prod: &mut [u64]) {
    let e = modulus.len() - 1;
    for i in (e..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (j, &mj) in modulus.iter().enumerate().take(e) {
            prod[i - e + j] = ar.sub_raw(prod[i - e + j], ar.mul_raw(c, mj));
        }
    }
}

/// Inverse of a digit vector modulo a monic irreducible modulus, or None for
/// the zero element. Extended Euclid over the coefficient field.
fn ext_inv<A: Arith>(ar: &A, modulus: &[u64], a: &[u64]) -> Option<Vec<u64>> {
    let e = modulus.len() - 1;
    let mut r0 = modulus.to_vec();
    let mut r1 = poly_trim(a.to_vec());
    if r1.is_empty() {
        return None;
    }
    let mut t0: Vec<u64> = Vec::new();
    let mut t1: Vec<u64> = vec![1];
    while poly_deg(&r1).unwrap() > 0 {
        let (q, r) = poly_divmod(ar, &r0, &r1);
        let t = poly_sub(ar, &t0, &poly_mul(ar, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
        debug_assert!(!r1.is_empty(), "modulus not irreducible");
    }
    let c_inv = ar.inv_raw(r1[0]);
    let mut out: Vec<u64> = t1.iter().map(|&t| ar.mul_raw(t, c_inv)).collect();
    out.resize(e, 0);
    Some(out)
}

// ---------------------------------------------------------------------------
// Dense exact linear algebra over a field context, shared by the
// interpolation system and subspace handling. Desk-scale cubic elimination.
// ---------------------------------------------------------------------------

/// Reduces `rows` to reduced row-echelon form in place. Pivot selection is
/// deterministic (first row with a nonzero entry in the leftmost open
/// column), so identical inputs give identical reduced forms. Returns the
/// pivot column indices in order; their count is the rank.
pub(crate) fn rref_in_place(ctx: &FieldCtx, rows: &mut [Vec<FieldElem>]) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot_row) = (rank..nrows).find(|&i| rows[i][col].value() != 0) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = ctx
            .inv(rows[rank][col])
            .expect("pivot entry is nonzero by selection");
        for j in col..ncols {
            rows[rank][j] = ctx.mul(rows[rank][j], inv);
        }
        for i in 0..nrows {
            if i == rank {
                continue;
            }
            let factor = rows[i][col];
            if factor.value() == 0 {
                continue;
            }
            for j in col..ncols {
                let t = ctx.mul(factor, rows[rank][j]);
                rows[i][j] = ctx.sub(rows[i][j], t);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

/// A canonical nonzero kernel vector of the row system, or None when the
/// matrix has full column rank. Canonical choice: the highest-index free
/// variable is set to 1, all other free variables to 0, pivot variables by
/// back-substitution. `rows` is consumed as scratch.
pub(crate) fn kernel_vector(
    ctx: &FieldCtx,
    rows: &mut [Vec<FieldElem>],
    ncols: usize,
) -> Option<Vec<FieldElem>> {
    if rows.is_empty() {
        // No constraints: every vector is in the kernel; pick the canonical
        // one consistent with the free-variable rule.
        if ncols == 0 {
            return None;
        }
        let mut x = vec![FieldElem(0); ncols];
        x[ncols - 1] = FieldElem(1 % ctx.order());
        return Some(x);
    }
    debug_assert!(rows.iter().all(|r| r.len() == ncols));
    let pivots = rref_in_place(ctx, rows);
    if pivots.len() == ncols {
        return None;
    }
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let jfree = (0..ncols).rev().find(|&j| !is_pivot[j]).unwrap();
    let mut x = vec![FieldElem(0); ncols];
    x[jfree] = FieldElem(1 % ctx.order());
    for (t, &c) in pivots.iter().enumerate() {
        // RREF row t reads: x[c] + sum over free j of rows[t][j] x[j] = 0,
        // and only x[jfree] among the free variables is nonzero.
        x[c] = ctx.neg(rows[t][jfree]);
    }
    Some(x)
}

// Convenience polynomial arithmetic on FieldElem coefficient lists; test
// oracles use these to re-check identities through an independent path.

#[cfg(test)]
pub(crate) fn poly_mul_elems(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let ar: Vec<u64> = a.iter().map(|e| e.0).collect();
    let br: Vec<u64> = b.iter().map(|e| e.0).collect();
    poly_mul(ctx, &ar, &br).into_iter().map(FieldElem).collect()
}

#[cfg(test)]
pub(crate) fn poly_add_elems(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(FieldElem(0));
            let y = b.get(i).copied().unwrap_or(FieldElem(0));
            ctx.add(x, y)
        })
        .collect()
}

/// Coefficients of f(cX): the i-th coefficient is scaled by c^i.
#[cfg(test)]
pub(crate) fn poly_dilate(ctx: &FieldCtx, f: &[FieldElem], c: FieldElem) -> Vec<FieldElem> {
    let mut scale = FieldElem(1 % ctx.order());
    f.iter()
        .map(|&fi| {
            let out = ctx.mul(fi, scale);
            scale = ctx.mul(scale, c);
            out
        })
        .collect()
}

#[cfg(test)]
pub(crate) fn poly_is_zero(f: &[FieldElem]) -> bool {
    f.iter().all(|e| e.0 == 0)
}

// ---------------------------------------------------------------------------
// FieldCtx: F_p and F_{p^e} over a prime characteristic.
// ---------------------------------------------------------------------------

/// Lookup tables for small extension fields (q <= TABLE_LIMIT); they turn
/// every arithmetic op into one array read, which the tower arithmetic and
/// evasive-set audits lean on heavily.
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>, // inv[0] is unused
}

const TABLE_LIMIT: u64 = 256;

/// A finite field `F_{p^e}` with a fixed polynomial basis.
///
/// For `e = 1` this is the prime field `F_p` (no modulus). For `e > 1`,
/// elements are residues modulo a monic irreducible of degree `e` over
/// `F_p`, encoded as canonical integers via their base-`p` digit vectors.
#[derive(Clone)]
pub struct FieldCtx {
    p: u64,
    e: u32,
    q: u64,
    /// Length e+1, monic; empty when e == 1.
    modulus: Vec<u64>,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Builds a field context.
///
/// With `e = 1` the result is the prime field `F_p` and `modulus` must be
/// `None`. With `e > 1` and no modulus, the lexicographically smallest monic
/// irreducible of degree `e` over `F_p` is found by exhaustive search
/// (deterministic, so independently constructed contexts are identical). A
/// supplied modulus must be monic of degree `e` with coefficients below `p`,
/// and is verified irreducible by trial division.
pub fn make_field(p: u64, e: u32, modulus: Option<&[u64]>) -> Result<FieldCtx> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if e < 1 {
        return Err(Error::BadExtensionDegree(e));
    }
    let q = checked_pow_u64(p, e).ok_or(Error::FieldTooLarge { base: p, degree: e })?;
    let ar = PrimeArith { p };
    let modulus = match (e, modulus) {
        (1, None) => Vec::new(),
        (1, Some(_)) => {
            return Err(Error::BadModulus(
                "prime fields take no modulus polynomial".to_string(),
            ))
        }
        (_, None) => smallest_irreducible(&ar, e as usize),
        (_, Some(m)) => {
            if m.len() != e as usize + 1 {
                return Err(Error::BadModulus(format!(
                    "need {} coefficients for degree {e}, got {}",
                    e + 1,
                    m.len()
                )));
            }
            if m[e as usize] != 1 {
                return Err(Error::BadModulus("modulus must be monic".to_string()));
            }
            if m.iter().any(|&c| c >= p) {
                return Err(Error::BadModulus(format!("coefficients must lie below p = {p}")));
            }
            if !is_irreducible(&ar, m) {
                return Err(Error::BadModulus("modulus is reducible".to_string()));
            }
            m.to_vec()
        }
    };
    let mut ctx = FieldCtx {
        p,
        e,
        q,
        modulus,
        tables: None,
    };
    if e > 1 && q <= TABLE_LIMIT {
        ctx.tables = Some(Arc::new(ctx.build_tables()));
    }
    Ok(ctx)
}

impl FieldCtx {
    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        let mut neg = vec![0u16; q];
        let mut inv = vec![0u16; q];
        for a in 0..q as u64 {
            neg[a as usize] = self.slow_neg(a) as u16;
            if a != 0 {
                inv[a as usize] = self.slow_inv(a) as u16;
            }
            for b in 0..q as u64 {
                add[(a * self.q + b) as usize] = self.slow_add(a, b) as u16;
                mul[(a * self.q + b) as usize] = self.slow_mul(a, b) as u16;
            }
        }
        Tables { add, mul, neg, inv }
    }

    // Digit-vector arithmetic, used directly for large extensions and to
    // seed the tables for small ones.
    fn slow_add(&self, a: u64, b: u64) -> u64 {
        let e = self.e as usize;
        let ar = PrimeArith { p: self.p };
        let da = digits_of(a, self.p, e);
        let db = digits_of(b, self.p, e);
        let sum: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| ar.add_raw(x, y)).collect();
        undigits(&sum, self.p)
    }

    fn slow_neg(&self, a: u64) -> u64 {
        let e = self.e as usize;
        let da = digits_of(a, self.p, e);
        let neg: Vec<u64> = da.iter().map(|&x| if x == 0 { 0 } else { self.p - x }).collect();
        undigits(&neg, self.p)
    }

    fn slow_mul(&self, a: u64, b: u64) -> u64 {
        let e = self.e as usize;
        let ar = PrimeArith { p: self.p };
        let da = digits_of(a, self.p, e);
        let db = digits_of(b, self.p, e);
        undigits(&ext_mul(&ar, &self.modulus, &da, &db), self.p)
    }

    fn slow_inv(&self, a: u64) -> u64 {
        let e = self.e as usize;
        let ar = PrimeArith { p: self.p };
        let da = digits_of(a, self.p, e);
        let inv = ext_inv(&ar, &self.modulus, &da).expect("nonzero element");
        undigits(&inv, self.p)
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.e
    }

    /// The modulus polynomial (little-endian, length e+1), or None for a
    /// prime field.
    pub fn modulus(&self) -> Option<&[u64]> {
        if self.e == 1 {
            None
        } else {
            Some(&self.modulus)
        }
    }

    /// Checked constructor for an element from its canonical integer.
    pub fn elem(&self, value: u64) -> Result<FieldElem> {
        if value < self.q {
            Ok(FieldElem(value))
        } else {
            Err(Error::ElementOutOfRange {
                value,
                order: self.q,
            })
        }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1 % self.q)
    }

    /// Element from its base-p coefficient vector (little-endian, length e).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() != self.e as usize {
            return Err(Error::WrongLength {
                what: "coefficient vector",
                expected: self.e as usize,
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::ElementOutOfRange {
                value: *coeffs.iter().find(|&&c| c >= self.p).unwrap(),
                order: self.p,
            });
        }
        Ok(FieldElem(undigits(coeffs, self.p)))
    }

    /// Base-p coefficient vector of an element (little-endian, length e).
    pub fn coeffs(&self, a: FieldElem) -> Vec<u64> {
        digits_of(a.0, self.p, self.e as usize)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add_raw(a.0, b.0))
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.sub_raw(a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg_raw(a.0))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul_raw(a.0, b.0))
    }

    /// Multiplicative inverse; zero is a `DivisionByZero` error.
    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElem(self.inv_raw(a.0)))
    }

    pub fn pow(&self, a: FieldElem, mut exp: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u64) -> u64 {
        debug_assert!(a < self.q);
        if self.e == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else if let Some(t) = &self.tables {
            t.neg[a as usize] as u64
        } else {
            self.slow_neg(a)
        }
    }
}

impl Arith for FieldCtx {
    fn size(&self) -> u64 {
        self.q
    }

    #[inline]
    fn add_raw(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if self.e == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if let Some(t) = &self.tables {
            t.add[(a * self.q + b) as usize] as u64
        } else {
            self.slow_add(a, b)
        }
    }

    #[inline]
    fn sub_raw(&self, a: u64, b: u64) -> u64 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if self.e == 1 {
            mulmod(a, b, self.p)
        } else if let Some(t) = &self.tables {
            t.mul[(a * self.q + b) as usize] as u64
        } else {
            self.slow_mul(a, b)
        }
    }

    #[inline]
    fn inv_raw(&self, a: u64) -> u64 {
        debug_assert!(a != 0 && a < self.q);
        if self.e == 1 {
            PrimeArith { p: self.p }.inv_raw(a)
        } else if let Some(t) = &self.tables {
            t.inv[a as usize] as u64
        } else {
            self.slow_inv(a)
        }
    }
}

/// Multiplicative inverse of `a`, erroring on zero.
pub fn elem_inv(ctx: &FieldCtx, a: FieldElem) -> Result<FieldElem> {
    ctx.inv(a)
}

/// The smallest element (by canonical integer) of multiplicative order q−1.
/// Verified through the factorization of q−1, not by iterating all powers.
pub fn find_primitive(ctx: &FieldCtx) -> FieldElem {
    let q = ctx.order();
    let group = q - 1;
    let factors = factorize(group);
    for v in 1..q {
        let a = FieldElem(v);
        let generates = factors
            .iter()
            .all(|&(r, _)| ctx.pow(a, group / r) != ctx.one());
        if generates {
            return a;
        }
    }
    // q >= 2 always leaves at least the element 1 for the trivial group.
    unreachable!("the multiplicative group of a finite field is cyclic");
}

/// Multiplicative order of `a`: the smallest t >= 1 with a^t = 1.
pub fn element_order(ctx: &FieldCtx, a: FieldElem) -> Result<u64> {
    if a.value() == 0 {
        return Err(Error::DivisionByZero);
    }
    let group = ctx.order() - 1;
    let mut t = group;
    for (r, mult) in factorize(group) {
        for _ in 0..mult {
            if t % r == 0 && ctx.pow(a, t / r) == ctx.one() {
                t /= r;
            } else {
                break;
            }
        }
    }
    Ok(t)
}

/// Horner evaluation of Σ coeffs[i]·x^i; the empty list is the zero
/// polynomial.
pub fn poly_eval(ctx: &FieldCtx, coeffs: &[FieldElem], x: FieldElem) -> FieldElem {
    let mut acc = ctx.zero();
    for &c in coeffs.iter().rev() {
        acc = ctx.add(ctx.mul(acc, x), c);
    }
    acc
}

// ---------------------------------------------------------------------------
// ExtCtx: a tower K = F_{q^k} over an arbitrary FieldCtx base.
// ---------------------------------------------------------------------------

/// A degree-`k` extension `K = F_{q^k}` of a `FieldCtx` base, in the
/// polynomial basis `1, β, …, β^{k−1}` where β is the residue of the
/// adjoined variable.
///
/// Elements are canonical integers in `[0, q^k)` via base-`q` digit vectors,
/// so the vector-space coordinates of an element with respect to the basis
/// are exactly its digits; no basis conversion happens anywhere.
#[derive(Clone)]
pub struct ExtCtx {
    base: FieldCtx,
    degree: usize,
    /// Raw canonical base-field values, length degree+1, monic.
    modulus: Vec<u64>,
    order: u64,
}

impl PartialEq for ExtCtx {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.modulus == other.modulus
    }
}

impl Eq for ExtCtx {}

impl fmt::Debug for ExtCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtCtx")
            .field("base_order", &self.base.order())
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl ExtCtx {
    /// Extension with the lexicographically smallest monic irreducible of
    /// degree `degree` over the base (deterministic).
    pub fn new(base: &FieldCtx, degree: usize) -> Result<Self> {
        if degree < 1 {
            return Err(Error::BadExtensionDegree(0));
        }
        let order = checked_pow_u64(base.order(), degree as u32).ok_or(Error::FieldTooLarge {
            base: base.order(),
            degree: degree as u32,
        })?;
        let modulus = smallest_irreducible(base, degree);
        Ok(ExtCtx {
            base: base.clone(),
            degree,
            modulus,
            order,
        })
    }

    /// Extension with a caller-supplied monic irreducible modulus
    /// (little-endian base elements, length degree+1).
    pub fn with_modulus(base: &FieldCtx, modulus: &[FieldElem]) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::BadModulus("modulus must have degree >= 1".to_string()));
        }
        let degree = modulus.len() - 1;
        let order = checked_pow_u64(base.order(), degree as u32).ok_or(Error::FieldTooLarge {
            base: base.order(),
            degree: degree as u32,
        })?;
        let raw: Vec<u64> = modulus.iter().map(|c| c.value()).collect();
        if raw[degree] != 1 {
            return Err(Error::BadModulus("modulus must be monic".to_string()));
        }
        if raw.iter().any(|&c| c >= base.order()) {
            return Err(Error::BadModulus(
                "modulus coefficients must be base-field elements".to_string(),
            ));
        }
        if !is_irreducible(base, &raw) {
            return Err(Error::BadModulus("modulus is reducible".to_string()));
        }
        Ok(ExtCtx {
            base: base.clone(),
            degree,
            modulus: raw,
            order,
        })
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The modulus as base-field elements (little-endian, length degree+1).
    pub fn modulus(&self) -> Vec<FieldElem> {
        self.modulus.iter().map(|&c| FieldElem(c)).collect()
    }

    /// β, the residue of the adjoined variable: digit vector (0, 1, 0, …).
    pub fn beta(&self) -> FieldElem {
        FieldElem(self.base.order() % self.order)
    }

    pub fn elem(&self, value: u64) -> Result<FieldElem> {
        if value < self.order {
            Ok(FieldElem(value))
        } else {
            Err(Error::ElementOutOfRange {
                value,
                order: self.order,
            })
        }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1 % self.order)
    }

    /// Embeds a coordinate vector over the base field (length `degree`) as a
    /// K element; the coordinates become the base-q digits directly.
    pub fn from_vec(&self, coords: &[FieldElem]) -> Result<FieldElem> {
        if coords.len() != self.degree {
            return Err(Error::WrongLength {
                what: "coordinate vector",
                expected: self.degree,
                got: coords.len(),
            });
        }
        if coords.iter().any(|c| c.value() >= self.base.order()) {
            return Err(Error::ElementOutOfRange {
                value: coords.iter().map(|c| c.value()).max().unwrap(),
                order: self.base.order(),
            });
        }
        let raw: Vec<u64> = coords.iter().map(|c| c.value()).collect();
        Ok(FieldElem(undigits(&raw, self.base.order())))
    }

    /// Coordinates of a K element with respect to the polynomial basis.
    pub fn to_vec(&self, a: FieldElem) -> Vec<FieldElem> {
        digits_of(a.value(), self.base.order(), self.degree)
            .into_iter()
            .map(FieldElem)
            .collect()
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let da = digits_of(a.0, self.base.order(), self.degree);
        let db = digits_of(b.0, self.base.order(), self.degree);
        let sum: Vec<u64> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| self.base.add_raw(x, y))
            .collect();
        FieldElem(undigits(&sum, self.base.order()))
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let da = digits_of(a.0, self.base.order(), self.degree);
        let db = digits_of(b.0, self.base.order(), self.degree);
        let diff: Vec<u64> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| self.base.sub_raw(x, y))
            .collect();
        FieldElem(undigits(&diff, self.base.order()))
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.sub(self.zero(), a)
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let da = digits_of(a.0, self.base.order(), self.degree);
        let db = digits_of(b.0, self.base.order(), self.degree);
        let prod = ext_mul(&self.base, &self.modulus, &da, &db);
        FieldElem(undigits(&prod, self.base.order()))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        let da = digits_of(a.0, self.base.order(), self.degree);
        match ext_inv(&self.base, &self.modulus, &da) {
            Some(inv) => Ok(FieldElem(undigits(&inv, self.base.order()))),
            None => Err(Error::DivisionByZero),
        }
    }

    pub fn pow(&self, a: FieldElem, mut exp: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Horner evaluation over K.
    pub fn poly_eval(&self, coeffs: &[FieldElem], x: FieldElem) -> FieldElem {
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }

    // Allocation-light digit-level kernel for hot loops (membership testing
    // enumerates millions of points). `prod` is caller-provided scratch of
    // length >= 2*degree−1; on return the low `degree` entries hold a·b.
    #[inline]
    pub(crate) fn mul_digits(&self, a: &[u64], b: &[u64], prod: &mut [u64]) {
        let e = self.degree;
        debug_assert!(a.len() == e && b.len() == e && prod.len() >= 2 * e - 1);
        for x in prod.iter_mut() {
            *x = 0;
        }
        for i in 0..e {
            let ai = a[i];
            if ai == 0 {
                continue;
            }
            for j in 0..e {
                let t = self.base.mul_raw(ai, b[j]);
                prod[i + j] = self.base.add_raw(prod[i + j], t);
            }
        }
        for i in (e..2 * e - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..e {
                let t = self.base.mul_raw(c, self.modulus[j]);
                prod[i - e + j] = self.base.sub_raw(prod[i - e + j], t);
            }
        }
    }
}
