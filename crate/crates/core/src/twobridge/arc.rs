//! Exact definiteness of the symmetrized Seifert pairing on the closed
//! arc of unit-circle parameters with angle in [2pi/n, 2pi - 2pi/n].
//!
//! The Hermitian pairing (1-u)S + (1-conj(u))S^T degenerates exactly at
//! unit-circle roots of det(S - t S^T), so its signature is constant on
//! any root-free arc. The test is: certify the arc root-free by exact
//! root counting in the Chebyshev variable z = t + 1/t (Sturm chains,
//! with the arc endpoint handled through the minimal polynomial of
//! 2 cos(2pi/n)), then read the sign off one sample at t = -1 via
//! leading principal minors. No floating point anywhere.

use super::{
    f_block, f_prime_block, reversed_pattern, seifert_det_poly, EvenCf, Orientation,
    TwoBridgeError,
};
use crate::exact::mat::{det_bareiss, IntMat};
use crate::exact::poly::{IntPoly, QPoly};
use crate::exact::sturm::SturmChain;
use crate::exact::{q, Q, Z};
use num_traits::Signed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArcVerdict {
    /// Root-free arc; sign fixed by the sample at t = -1.
    Definite { positive: bool },
    /// t = -1 (always on the arc) degenerates the pairing.
    RootAtMinusOne { multiplicity: usize },
    /// Degeneracy exactly at angle 2pi/n.
    RootAtEndpoint,
    /// Degeneracies strictly inside the arc; the bracket (in z) isolates
    /// one of them, collapsed to a point when the root is rational.
    InteriorRoot { count: usize, bracket: (Q, Q) },
    /// Root-free arc but the sample pairing is indefinite.
    MixedSample { minors: Vec<Z> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcAssessment {
    pub n: u64,
    pub definite: bool,
    pub verdict: ArcVerdict,
}

impl ArcAssessment {
    fn new(n: u64, verdict: ArcVerdict) -> Self {
        let definite = matches!(verdict, ArcVerdict::Definite { .. });
        ArcAssessment { n, definite, verdict }
    }
}

pub fn definite_on_arc(s: &IntMat, n: u64) -> Result<ArcAssessment, TwoBridgeError> {
    if n < 2 {
        return Err(TwoBridgeError::ArcTooSmall);
    }
    assert_eq!(s.rows, s.cols);
    assert!(s.rows >= 1);
    let delta = seifert_det_poly(s);
    if delta.is_zero() {
        return Err(TwoBridgeError::DegenerateOnArc);
    }
    // roots at t = 0 and t = 1 are never on the arc
    let p = delta.shift_down(delta.order_at_zero());
    let (p, _) = p.strip_root(1);
    let (p, at_minus_one) = p.strip_root(-1);
    if at_minus_one > 0 {
        return Ok(ArcAssessment::new(n, ArcVerdict::RootAtMinusOne { multiplicity: at_minus_one }));
    }
    if p.degree().unwrap_or(0) > 0 {
        // what is left is +1-symmetric of even degree, so unit-circle
        // roots are exactly the roots of its Chebyshev reduction c
        // inside [-2, 2]; the closed arc is z in [-2, w], w = 2cos(2pi/n)
        let c = p.symmetric_to_cos_poly().to_qpoly();
        let chain = SturmChain::new(&c);
        let neg_two = q(-2, 1);
        if n > 2 {
            let psi = IntPoly::cyclotomic(n).symmetric_to_cos_poly().to_qpoly();
            // psi is (a rational multiple of) the minimal polynomial of
            // w, so c(w) = 0 exactly when psi divides c
            if c.rem(&psi).is_zero() {
                return Ok(ArcAssessment::new(n, ArcVerdict::RootAtEndpoint));
            }
            let interior = if psi.degree() == Some(1) {
                // n = 3, 4, 6: w itself is rational
                let w = -&psi.coeff(0) / &psi.coeff(1);
                let count = chain.count_roots(&neg_two, &w, true, false);
                if count > 0 {
                    let bracket = isolate_root(&chain, neg_two.clone(), w);
                    Some((count, bracket))
                } else {
                    None
                }
            } else {
                let lo = clear_below_endpoint(&psi, &chain);
                let count = chain.count_roots(&neg_two, &lo, true, true);
                if count > 0 {
                    let bracket = isolate_root(&chain, neg_two.clone(), lo);
                    Some((count, bracket))
                } else {
                    None
                }
            };
            if let Some((count, bracket)) = interior {
                return Ok(ArcAssessment::new(n, ArcVerdict::InteriorRoot { count, bracket }));
            }
        }
        // n = 2: the arc is the single point t = -1, already root-free
    }
    Ok(ArcAssessment::new(n, sample_at_minus_one(s)))
}

/// Shrinks a bracket around the largest root w of psi until no root of
/// the chain's polynomial is left in it, then returns the lower end,
/// a rational strictly between every arc-interior root and w.
fn clear_below_endpoint(psi: &QPoly, chain: &SturmChain) -> Q {
    let psi_chain = SturmChain::new(psi);
    let (mut lo, mut hi) = (q(-2, 1), q(2, 1));
    let above = |m: &Q, h: &Q| psi_chain.count_roots(m, h, false, true) >= 1;
    // psi is irreducible of degree >= 2 here, so no bisection midpoint
    // ever lands on a root of psi
    while psi_chain.count_roots(&lo, &hi, false, true) > 1 {
        let mid = (&lo + &hi) / q(2, 1);
        if above(&mid, &hi) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    while chain.count_roots(&lo, &hi, true, true) > 0 {
        let mid = (&lo + &hi) / q(2, 1);
        if above(&mid, &hi) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Bisects (a, b), whose endpoints are not roots, down to a bracket
/// holding exactly one root of the chain's polynomial. A rational root
/// hit head-on comes back as a collapsed bracket.
fn isolate_root(chain: &SturmChain, mut a: Q, mut b: Q) -> (Q, Q) {
    while chain.count_roots(&a, &b, false, false) > 1 {
        let mid = (&a + &b) / q(2, 1);
        if chain.is_root(&mid) {
            return (mid.clone(), mid);
        }
        if chain.count_roots(&a, &mid, false, false) > 0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    (a, b)
}

fn sample_at_minus_one(s: &IntMat) -> ArcVerdict {
    let dim = s.rows;
    let mut minors = Vec::with_capacity(dim);
    for k in 1..=dim {
        let sub: Vec<Vec<Z>> =
            (0..k).map(|i| (0..k).map(|j| &s[(i, j)] + &s[(j, i)]).collect()).collect();
        minors.push(det_bareiss(&sub));
    }
    let positive = minors.iter().all(|m| m.is_positive());
    let negative =
        minors.iter().enumerate().all(|(i, m)| if i % 2 == 0 { m.is_negative() } else { m.is_positive() });
    if positive || negative {
        ArcVerdict::Definite { positive }
    } else {
        ArcVerdict::MixedSample { minors }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockId {
    Torus { index: usize, k: u64 },
    Plumbing { index: usize, l: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionBound {
    pub n: u64,
    pub block: BlockId,
    pub verdict: ArcVerdict,
}

/// Smallest cover degree n >= 2 at which some subsurface block of the
/// reversed-orientation surface stops being definite on the arc,
/// together with the offending block. Genus-one torus blocks (k = 1)
/// stay definite for every n; a fraction whose only blocks are those
/// has no finite bound and is reported as NoObstruction.
pub fn lspace_obstruction_bound(cf: &EvenCf) -> Result<ObstructionBound, TwoBridgeError> {
    if cf.orientation != Orientation::Reversed {
        return Err(TwoBridgeError::Unsupported(
            "obstruction bound applies to the reversed orientation".into(),
        ));
    }
    let (ks, ls) = reversed_pattern(cf.coefficients())?;
    let mut blocks: Vec<BlockId> = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        if k >= 2 {
            blocks.push(BlockId::Torus { index: i, k });
        }
        if i < ls.len() {
            blocks.push(BlockId::Plumbing { index: i, l: ls[i] });
        }
    }
    if blocks.is_empty() {
        return Err(TwoBridgeError::NoObstruction);
    }
    // every torus block with k >= 2 fails by n = 4 and every plumbing
    // block at a finite n, so the search halts
    for n in 2.. {
        for b in &blocks {
            let m = match b {
                BlockId::Torus { k, .. } => f_block(*k),
                BlockId::Plumbing { l, .. } => f_prime_block(*l),
            };
            let a = definite_on_arc(&m, n)?;
            if !a.definite {
                return Ok(ObstructionBound { n, block: b.clone(), verdict: a.verdict });
            }
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reversed(cs: &[i64]) -> EvenCf {
        EvenCf::new(cs.to_vec(), Orientation::Reversed).unwrap()
    }

    #[test]
    fn genus_one_torus_block_always_definite() {
        for n in 2..=12 {
            let a = definite_on_arc(&f_block(1), n).unwrap();
            assert_eq!(a.verdict, ArcVerdict::Definite { positive: false }, "n = {n}");
        }
    }

    #[test]
    fn torus_blocks_follow_the_genus_bound() {
        for k in 2..=6u64 {
            for n in 3..=9u64 {
                let a = definite_on_arc(&f_block(k), n).unwrap();
                let expect = n * (k - 1) < 2 * k;
                assert_eq!(a.definite, expect, "k = {k}, n = {n}");
            }
        }
    }

    #[test]
    fn torus_two_block_degenerates_at_the_endpoint() {
        // det(F(2) - t F(2)^T) = (t^2 + 1)(t - 1): roots at angle pi/2
        let a = definite_on_arc(&f_block(2), 4).unwrap();
        assert_eq!(a.verdict, ArcVerdict::RootAtEndpoint);
        let a = definite_on_arc(&f_block(2), 3).unwrap();
        assert_eq!(a.verdict, ArcVerdict::Definite { positive: false });
    }

    #[test]
    fn plumbing_block_endpoint_and_interior_failures() {
        // the plumbing block F'(l) degenerates at angle arccos(l/(l+1))
        for n in 2..=5 {
            assert!(definite_on_arc(&f_prime_block(1), n).unwrap().definite, "n = {n}");
        }
        assert_eq!(definite_on_arc(&f_prime_block(1), 6).unwrap().verdict, ArcVerdict::RootAtEndpoint);

        for n in 2..=7 {
            assert!(definite_on_arc(&f_prime_block(2), n).unwrap().definite, "n = {n}");
        }
        match definite_on_arc(&f_prime_block(2), 8).unwrap().verdict {
            ArcVerdict::InteriorRoot { count, bracket } => {
                assert_eq!(count, 1);
                // the bracket pins z = 2 cos(arccos(2/3)) = 4/3
                assert!(bracket.0 <= q(4, 3) && q(4, 3) <= bracket.1);
            }
            v => panic!("expected an interior root, got {v:?}"),
        }

        assert!(definite_on_arc(&f_prime_block(3), 8).unwrap().definite);
        assert!(!definite_on_arc(&f_prime_block(3), 9).unwrap().definite);
    }

    #[test]
    fn sample_sign_paths() {
        // positive-definite sample: canonical [2] has S = [1]
        let s = IntMat::from_i64(&[&[1]]);
        for n in [2, 7, 12] {
            assert_eq!(
                definite_on_arc(&s, n).unwrap().verdict,
                ArcVerdict::Definite { positive: true }
            );
        }
        // det(S - tS^T) = (t + 1)^2
        let s = IntMat::from_i64(&[&[1, 2], &[0, 1]]);
        assert_eq!(
            definite_on_arc(&s, 5).unwrap().verdict,
            ArcVerdict::RootAtMinusOne { multiplicity: 2 }
        );
        // det = t, root-free circle, indefinite sample
        let s = IntMat::from_i64(&[&[0, 1], &[0, 0]]);
        match definite_on_arc(&s, 4).unwrap().verdict {
            ArcVerdict::MixedSample { minors } => assert_eq!(minors, vec![Z::from(0), Z::from(-1)]),
            v => panic!("expected a mixed sample, got {v:?}"),
        }
    }

    #[test]
    fn degenerate_and_invalid_inputs() {
        let zero = IntMat::from_i64(&[&[0]]);
        assert_eq!(definite_on_arc(&zero, 3), Err(TwoBridgeError::DegenerateOnArc));
        assert_eq!(definite_on_arc(&f_block(1), 1), Err(TwoBridgeError::ArcTooSmall));
    }

    #[test]
    fn obstruction_bounds_for_small_fractions() {
        let b = lspace_obstruction_bound(&reversed(&[2, 2, 2])).unwrap();
        assert_eq!(b.n, 6);
        assert_eq!(b.block, BlockId::Plumbing { index: 0, l: 1 });
        assert_eq!(b.verdict, ArcVerdict::RootAtEndpoint);

        let b = lspace_obstruction_bound(&reversed(&[4, 2, 4])).unwrap();
        assert_eq!(b.n, 4);
        assert_eq!(b.block, BlockId::Torus { index: 0, k: 2 });

        assert_eq!(lspace_obstruction_bound(&reversed(&[6, 2, 6])).unwrap().n, 3);
        assert_eq!(lspace_obstruction_bound(&reversed(&[2, 4, 2])).unwrap().n, 8);
        assert_eq!(lspace_obstruction_bound(&reversed(&[2, 6, 2])).unwrap().n, 9);
        assert_eq!(lspace_obstruction_bound(&reversed(&[2, 2, 2, 2, 2])).unwrap().n, 6);
    }

    #[test]
    fn bound_failure_modes() {
        assert_eq!(lspace_obstruction_bound(&reversed(&[2])), Err(TwoBridgeError::NoObstruction));
        let canonical = EvenCf::new(vec![2, 2, 2], Orientation::Canonical).unwrap();
        assert!(matches!(
            lspace_obstruction_bound(&canonical),
            Err(TwoBridgeError::Unsupported(_))
        ));
        assert!(matches!(
            lspace_obstruction_bound(&reversed(&[2, 2])),
            Err(TwoBridgeError::Unsupported(_))
        ));
    }
}
