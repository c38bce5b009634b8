//! Recalibration of star germs.
//!
//! A star with d = n * delta prongs carries the natural cyclic listing
//! (1, 2, ..., d). Recalibration rearranges the prongs so that the
//! first-return dynamics (label shift by delta) acquires rotation number
//! a'/n mod 1 instead of 1/n, where a' is the coprime-adjusted slope.

use crate::exact::Q;
use crate::ordtree::{CyclicOrderTree, NodeTag, TreeError};
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecalError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("{0} is not coprime to {1}")]
    NotCoprime(u64, u64),
    #[error("shift must be nonzero modulo the star degree")]
    DegenerateShift,
}

/// Removes from `delta` every prime it shares with `n`.
fn coprime_part(mut e: u64, n: u64) -> u64 {
    loop {
        let g = e.gcd(&n);
        if g == 1 {
            return e;
        }
        e /= g;
    }
}

/// Modular inverse in [0, m), for gcd(x, m) = 1.
fn inverse_mod(x: i64, m: u64) -> u64 {
    let m = m as i64;
    let (mut r0, mut r1) = (m, x.rem_euclid(m));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "inverse of non-unit");
    t0.rem_euclid(m) as u64
}

/// Smallest a' = a + k*n, k >= 0, with a' = 1 modulo the coprime part of
/// delta relative to n. Then gcd(a', n * delta) = 1.
pub fn adjust_coprime(a: u64, n: u64, delta: u64) -> Result<u64, RecalError> {
    if n == 0 || delta == 0 {
        return Err(RecalError::ZeroModulus);
    }
    if a.gcd(&n) != 1 {
        return Err(RecalError::NotCoprime(a, n));
    }
    let e = coprime_part(delta, n);
    if e == 1 {
        return Ok(a);
    }
    // k * n = 1 - a (mod e); n is invertible mod e by construction
    let rhs = (1i64 - a as i64).rem_euclid(e as i64) as u64;
    let k = (inverse_mod(n as i64, e) * rhs) % e;
    Ok(a + k * n)
}

/// Inverse of `a` modulo `d`, normalized to minimal absolute value;
/// on a tie the positive representative wins.
pub fn minimal_inverse(a: u64, d: u64) -> Result<i64, RecalError> {
    if d == 0 {
        return Err(RecalError::ZeroModulus);
    }
    if a.gcd(&d) != 1 {
        return Err(RecalError::NotCoprime(a, d));
    }
    if d == 1 {
        return Ok(0);
    }
    let b0 = inverse_mod(a as i64, d) as i64;
    let alt = b0 - d as i64;
    Ok(if b0.abs() <= alt.abs() { b0 } else { alt })
}

/// Natural listing (1, 2, ..., d).
pub fn natural_listing(d: usize) -> Vec<usize> {
    (1..=d).collect()
}

/// Recalibrated listing (1, b+1, 2b+1, ..., (d-1)b+1), entries reduced
/// into {1, ..., d}.
pub fn recalibrated_listing(d: usize, b: i64) -> Vec<usize> {
    let m = d as i64;
    (0..m)
        .map(|j| {
            let v = (j * b + 1).rem_euclid(m);
            if v == 0 { d } else { v as usize }
        })
        .collect()
}

/// Exact rotation number of the label shift x -> x + shift acting on a
/// cyclic listing of {1, ..., d}: total forward displacement of the
/// orbit of 1 over one period, divided by d * period.
pub fn star_rotation_number(listing: &[usize], shift: u64) -> Result<Q, RecalError> {
    let d = listing.len();
    if d == 0 {
        return Err(RecalError::DegenerateShift);
    }
    let step = (shift % d as u64) as usize;
    if step == 0 {
        // shifts by multiples of d act trivially
        return Ok(Q::zero());
    }
    let mut pos = vec![0usize; d + 1];
    for (p, &label) in listing.iter().enumerate() {
        pos[label] = p;
    }
    let mut x = 1usize;
    let mut displacement = 0u64;
    let mut period = 0u64;
    loop {
        let next = (x - 1 + step) % d + 1;
        displacement += ((pos[next] + d - pos[x]) % d) as u64;
        period += 1;
        x = next;
        if x == 1 {
            break;
        }
    }
    Ok(Q::new(displacement.into(), (d as u64 * period).into()))
}

/// A full recalibration record for a star of degree d = n * delta.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarCalibration {
    pub n: u64,
    pub delta: u64,
    pub a: u64,
    pub a_prime: u64,
    pub d: u64,
    pub b: i64,
}

impl StarCalibration {
    pub fn new(n: u64, delta: u64, a: u64) -> Result<Self, RecalError> {
        let a_prime = adjust_coprime(a, n, delta)?;
        let d = n * delta;
        let b = minimal_inverse(a_prime % d, d)?;
        Ok(StarCalibration { n, delta, a, a_prime, d, b })
    }

    pub fn listing(&self) -> Vec<usize> {
        recalibrated_listing(self.d as usize, self.b)
    }

    pub fn natural_rotation(&self) -> Q {
        star_rotation_number(&natural_listing(self.d as usize), self.delta).unwrap()
    }

    pub fn recalibrated_rotation(&self) -> Q {
        star_rotation_number(&self.listing(), self.delta).unwrap()
    }
}

/// Replaces the local order at each named node by the recalibrated
/// rearrangement of its current listing: new position j holds the germ
/// from old position listing[j] - 1. Nodes must be regular of degree d
/// and already carry an order.
pub fn recalibrate_tree(
    tree: &mut CyclicOrderTree,
    nodes: &[String],
    calib: &StarCalibration,
) -> Result<(), TreeError> {
    let pattern = calib.listing();
    for id in nodes {
        let v = tree.node(id)?;
        if tree.tag(v) != NodeTag::Regular || tree.degree(v) != calib.d as usize {
            return Err(TreeError::NotRecalibratable(id.clone()));
        }
        let old = tree
            .vertex_order(v)
            .ok_or_else(|| TreeError::MissingLocalOrder(id.clone()))?
            .to_vec();
        let new: Vec<_> = pattern.iter().map(|&l| old[l - 1]).collect();
        tree.set_vertex_order(v, new)?;
    }
    Ok(())
}
