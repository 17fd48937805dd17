//! Convolution kernels shared by the exact and residue coefficient backends.
//!
//! Truncated products dispatch between schoolbook convolution and a Karatsuba
//! split; both routes produce identical coefficients, so the choice is purely
//! a performance decision. The schoolbook path skips zero multiplicands, which
//! makes sparse-times-dense products (pentagonal factors, dilated series)
//! cheap without a separate code path.

use num_bigint::BigInt;
use num_traits::Zero;

/// Coefficient arithmetic for one backend. Implementations must be exact
/// ring operations; the kernels rely on associativity for correctness.
pub(crate) trait CoeffOps {
    type Elem: Clone + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// Exact big-integer coefficients.
pub(crate) struct ExactOps;

impl CoeffOps for ExactOps {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
}

/// Residues modulo a machine-word modulus; elements are kept in `0..modulus`.
pub(crate) struct ResidueOps {
    pub modulus: u64,
}

impl CoeffOps for ResidueOps {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: u64, b: &u64) -> u64 {
        ((a as u128 + *b as u128) % self.modulus as u128) as u64
    }
    fn sub(&self, a: u64, b: &u64) -> u64 {
        ((a as u128 + (self.modulus - *b) as u128) % self.modulus as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }
}

/// Below this operand length the schoolbook loop wins.
const KARATSUBA_THRESHOLD: usize = 32;

/// First `out_len` coefficients of `a * b`.
pub(crate) fn mul_trunc<C: CoeffOps>(ops: &C, a: &[C::Elem], b: &[C::Elem], out_len: usize) -> Vec<C::Elem> {
    let a = &a[..a.len().min(out_len)];
    let b = &b[..b.len().min(out_len)];
    if a.len().min(b.len()) <= KARATSUBA_THRESHOLD {
        return schoolbook_trunc(ops, a, b, out_len);
    }
    let mut full = karatsuba_full(ops, a, b);
    full.truncate(out_len);
    while full.len() < out_len {
        full.push(ops.zero());
    }
    full
}

fn schoolbook_trunc<C: CoeffOps>(ops: &C, a: &[C::Elem], b: &[C::Elem], out_len: usize) -> Vec<C::Elem> {
    let mut out = vec![ops.zero(); out_len];
    for (i, ai) in a.iter().enumerate() {
        if i >= out_len {
            break;
        }
        if ops.is_zero(ai) {
            continue;
        }
        let jmax = b.len().min(out_len - i);
        for (j, bj) in b[..jmax].iter().enumerate() {
            if ops.is_zero(bj) {
                continue;
            }
            let prod = ops.mul(ai, bj);
            let cur = std::mem::replace(&mut out[i + j], ops.zero());
            out[i + j] = ops.add(cur, &prod);
        }
    }
    out
}

fn schoolbook_full<C: CoeffOps>(ops: &C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    schoolbook_trunc(ops, a, b, a.len() + b.len() - 1)
}

fn add_at<C: CoeffOps>(ops: &C, target: &mut [C::Elem], src: Vec<C::Elem>, offset: usize) {
    for (k, v) in src.into_iter().enumerate() {
        let cur = std::mem::replace(&mut target[offset + k], ops.zero());
        target[offset + k] = ops.add(cur, &v);
    }
}

fn elementwise_sum<C: CoeffOps>(ops: &C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut v = a.get(k).cloned().unwrap_or_else(|| ops.zero());
        if let Some(bk) = b.get(k) {
            v = ops.add(v, bk);
        }
        out.push(v);
    }
    out
}

/// Full product `a * b`, length `a.len() + b.len() - 1`.
fn karatsuba_full<C: CoeffOps>(ops: &C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    let (la, lb) = (a.len(), b.len());
    if la.min(lb) <= KARATSUBA_THRESHOLD {
        return schoolbook_full(ops, a, b);
    }
    let m = la.max(lb) / 2;
    let mut out = vec![ops.zero(); la + lb - 1];
    if la <= m {
        // only b is long enough to split
        add_at(ops, &mut out, karatsuba_full(ops, a, &b[..m]), 0);
        add_at(ops, &mut out, karatsuba_full(ops, a, &b[m..]), m);
        return out;
    }
    if lb <= m {
        add_at(ops, &mut out, karatsuba_full(ops, &a[..m], b), 0);
        add_at(ops, &mut out, karatsuba_full(ops, &a[m..], b), m);
        return out;
    }
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = karatsuba_full(ops, a0, b0);
    let z2 = karatsuba_full(ops, a1, b1);
    let mut z1 = karatsuba_full(
        ops,
        &elementwise_sum(ops, a0, a1),
        &elementwise_sum(ops, b0, b1),
    );
    for (k, v) in z0.iter().enumerate() {
        let cur = std::mem::replace(&mut z1[k], ops.zero());
        z1[k] = ops.sub(cur, v);
    }
    for (k, v) in z2.iter().enumerate() {
        let cur = std::mem::replace(&mut z1[k], ops.zero());
        z1[k] = ops.sub(cur, v);
    }
    add_at(ops, &mut out, z0, 0);
    add_at(ops, &mut out, z1, m);
    add_at(ops, &mut out, z2, 2 * m);
    out
}

/// Coefficients of `1 / f` to `f.len()` terms given the inverse of `f[0]`.
///
/// Recurrence: `c[0] = inv0`, `c[n] = -inv0 * sum_{k >= 1} f[k] c[n-k]`.
/// Only the nonzero entries of `f` enter the sum, so inverting a sparse
/// series (a pentagonal-number product, say) costs O(n * nnz).
pub(crate) fn invert_unit<C: CoeffOps>(ops: &C, f: &[C::Elem], inv0: C::Elem) -> Vec<C::Elem> {
    let n = f.len();
    let nonzero: Vec<(usize, &C::Elem)> = f
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, v)| !ops.is_zero(v))
        .collect();
    let mut out = Vec::with_capacity(n);
    out.push(inv0.clone());
    for k in 1..n {
        let mut acc = ops.zero();
        for &(j, fj) in &nonzero {
            if j > k {
                break;
            }
            let prod = ops.mul(fj, &out[k - j]);
            acc = ops.add(acc, &prod);
        }
        let scaled = ops.mul(&acc, &inv0);
        out.push(ops.sub(ops.zero(), &scaled));
    }
    out
}
