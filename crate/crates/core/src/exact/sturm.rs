//! Sturm sequences for exact real-root counting of rational polynomials.

use super::poly::QPoly;
use super::Q;
use num_traits::{Signed, Zero};

/// Sturm chain of the square-free part of a polynomial.
pub struct SturmChain {
    chain: Vec<QPoly>,
}

impl SturmChain {
    pub fn new(p: &QPoly) -> Self {
        let p0 = p.square_free();
        let mut chain = vec![p0.clone()];
        if p0.degree().unwrap_or(0) >= 1 {
            chain.push(p0.derivative());
            loop {
                let n = chain.len();
                let r = chain[n - 2].rem(&chain[n - 1]).neg();
                if r.is_zero() {
                    break;
                }
                chain.push(r);
            }
        }
        SturmChain { chain }
    }

    pub fn polynomial(&self) -> &QPoly {
        &self.chain[0]
    }

    /// Sign variations at x, zero entries skipped.
    pub fn variations(&self, x: &Q) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for p in &self.chain {
            let v = p.eval(x);
            if v.is_zero() {
                continue;
            }
            let pos = v.is_positive();
            if let Some(l) = last {
                if l != pos {
                    count += 1;
                }
            }
            last = Some(pos);
        }
        count
    }

    /// Distinct real roots in the interval with the given endpoint rules.
    pub fn count_roots(&self, a: &Q, b: &Q, include_a: bool, include_b: bool) -> usize {
        assert!(a < b, "empty or reversed interval");
        // V(a) - V(b) counts roots in (a, b] for the zero-skip convention.
        let mut n = self.variations(a) as isize - self.variations(b) as isize;
        if include_a && self.polynomial().eval(a).is_zero() {
            n += 1;
        }
        if !include_b && self.polynomial().eval(b).is_zero() {
            n -= 1;
        }
        assert!(n >= 0, "inconsistent Sturm count");
        n as usize
    }

    pub fn is_root(&self, x: &Q) -> bool {
        self.polynomial().eval(x).is_zero()
    }
}
