//! Exact integer linear algebra: sparse vectors, echelon lattices and Smith
//! normal form. Everything is generic over [`Int`], so computations run in
//! checked `i64` and are retried over `BigInt` when a value leaves that range.

mod dense;
mod lattice;
mod snf;

pub use dense::IntMatrix;
pub use snf::{smith_normal_form, SnfResult};

pub(crate) use lattice::{reduce_columns, Lattice};
pub(crate) use snf::SparseSnf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive};

use crate::error::{Error, Result};

pub trait Int:
    Clone
    + fmt::Debug
    + fmt::Display
    + Eq
    + Ord
    + Send
    + Sync
    + Signed
    + Integer
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + From<i64>
    + ToPrimitive
    + 'static
{
}

impl Int for i64 {}
impl Int for BigInt {}

const OVERFLOW: Error = Error::Overflow("integer linear algebra");

pub(crate) fn add<T: Int>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(OVERFLOW)
}

pub(crate) fn sub<T: Int>(a: &T, b: &T) -> Result<T> {
    a.checked_sub(b).ok_or(OVERFLOW)
}

pub(crate) fn mul<T: Int>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(OVERFLOW)
}

pub(crate) fn neg<T: Int>(a: &T) -> Result<T> {
    T::zero().checked_sub(a).ok_or(OVERFLOW)
}

/// Truncating division with remainder; `|rem| < |b|`.
pub(crate) fn div_rem<T: Int>(a: &T, b: &T) -> Result<(T, T)> {
    if *b == neg(&T::one())? {
        return Ok((neg(a)?, T::zero()));
    }
    Ok(a.div_rem(b))
}

/// `(g, s, t)` with `g = gcd(a, b) >= 0` and `s a + t b = g`.
pub(crate) fn ext_gcd<T: Int>(a: &T, b: &T) -> Result<(T, T, T)> {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (T::one(), T::zero());
    let (mut t0, mut t1) = (T::zero(), T::one());
    while !r1.is_zero() {
        let (q, r) = div_rem(&r0, &r1)?;
        let s2 = sub(&s0, &mul(&q, &s1)?)?;
        let t2 = sub(&t0, &mul(&q, &t1)?)?;
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        Ok((neg(&r0)?, neg(&s0)?, neg(&t0)?))
    } else {
        Ok((r0, s0, t0))
    }
}

pub(crate) fn to_i64<T: Int>(x: &T) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow("narrowing a result to 64 bits"))
}

/// Sparse integer vector: `(index, value)` pairs sorted by index, no zero values.
pub(crate) type SparseVec<T> = Vec<(usize, T)>;

pub(crate) fn sparse_from_i64<T: Int>(v: &[(usize, i64)]) -> SparseVec<T> {
    v.iter().map(|(i, x)| (*i, T::from(*x))).collect()
}

pub(crate) fn sparse_to_i64<T: Int>(v: &[(usize, T)]) -> Result<SparseVec<i64>> {
    v.iter().map(|(i, x)| Ok((*i, to_i64(x)?))).collect()
}

pub(crate) fn convert_sparse<T: Int, U: Int>(v: &[(usize, T)]) -> SparseVec<U> {
    v.iter()
        .map(|(i, x)| (*i, U::from_str_radix(&x.to_string(), 10).ok().expect("integer text round-trips")))
        .collect()
}

pub(crate) fn sparse_get<T: Int>(v: &[(usize, T)], index: usize) -> T {
    match v.binary_search_by_key(&index, |(i, _)| *i) {
        Ok(k) => v[k].1.clone(),
        Err(_) => T::zero(),
    }
}

/// `a x + b y`.
pub(crate) fn lin_comb<T: Int>(a: &T, x: &[(usize, T)], b: &T, y: &[(usize, T)]) -> Result<SparseVec<T>> {
    let scale = |c: &T, v: &T| if c.is_one() { Ok(v.clone()) } else { mul(c, v) };
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        let (idx, val) = if take_x {
            let r = (x[i].0, scale(a, &x[i].1)?);
            i += 1;
            r
        } else if take_y {
            let r = (y[j].0, scale(b, &y[j].1)?);
            j += 1;
            r
        } else {
            let r = (x[i].0, add(&scale(a, &x[i].1)?, &scale(b, &y[j].1)?)?);
            i += 1;
            j += 1;
            r
        };
        if !val.is_zero() {
            out.push((idx, val));
        }
    }
    Ok(out)
}

/// `y + c x`.
pub(crate) fn axpy<T: Int>(y: &[(usize, T)], c: &T, x: &[(usize, T)]) -> Result<SparseVec<T>> {
    if c.is_zero() {
        return Ok(y.to_vec());
    }
    lin_comb(&T::one(), y, c, x)
}

pub(crate) fn sparse_dot<T: Int>(x: &[(usize, T)], y: &[(usize, T)]) -> Result<T> {
    let (mut i, mut j) = (0, 0);
    let mut acc = T::zero();
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = add(&acc, &mul(&x[i].1, &y[j].1)?)?;
                i += 1;
                j += 1;
            }
        }
    }
    Ok(acc)
}

/// Runs `f` in 64-bit arithmetic and again over `BigInt` if that overflows.
pub(crate) fn with_escalation<R>(
    f64: impl FnOnce() -> Result<R>,
    fbig: impl FnOnce() -> Result<R>,
) -> Result<R> {
    match f64() {
        Err(Error::Overflow(_)) => fbig(),
        other => other,
    }
}
