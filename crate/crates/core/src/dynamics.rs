//! Piecewise linear circle dynamics over exact rationals.
//!
//! Maps are stored as lifts: finitely many rational breakpoints in
//! [0, 1) with rational values, extended by f(x + 1) = f(x) + 1. All
//! evaluation is exact, so translation numbers of maps with periodic
//! orbits come out as exact fractions rather than floating estimates.

use crate::circord::CircularOrder;
use crate::exact::{frac_mod1, Q};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DynError {
    #[error("a map needs at least one breakpoint")]
    Empty,
    #[error("breakpoint listed twice with different values")]
    InconsistentPair,
    #[error("values must increase strictly with the breakpoints")]
    NotMonotone,
    #[error("value spread must stay under one period")]
    PeriodOverflow,
    #[error("the permutation does not preserve the circular order")]
    NotOrderPreserving,
    #[error("the permutation is not a bijection of the order's elements")]
    NotAPermutation,
    #[error("circular order must be valid")]
    InvalidOrder,
}

/// An increasing PL homeomorphism lift of a circle map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLCircleMap {
    breaks: Vec<Q>,
    values: Vec<Q>,
}

impl PLCircleMap {
    /// Builds a map from (point, value) pairs. Points are reduced into
    /// [0, 1) with values adjusted by the same integer; the reduced
    /// breakpoints must be distinct (or repeated consistently) and the
    /// values strictly increasing with spread less than 1.
    pub fn from_pairs(pairs: &[(Q, Q)]) -> Result<Self, DynError> {
        if pairs.is_empty() {
            return Err(DynError::Empty);
        }
        let mut reduced: Vec<(Q, Q)> = pairs
            .iter()
            .map(|(x, y)| {
                let shift = x.floor();
                (x - &shift, y - &shift)
            })
            .collect();
        reduced.sort_by(|a, b| a.0.cmp(&b.0));
        let mut breaks = Vec::new();
        let mut values = Vec::new();
        for (x, y) in reduced {
            if breaks.last() == Some(&x) {
                if values.last() != Some(&y) {
                    return Err(DynError::InconsistentPair);
                }
                continue;
            }
            breaks.push(x);
            values.push(y);
        }
        for w in values.windows(2) {
            if w[0] >= w[1] {
                return Err(DynError::NotMonotone);
            }
        }
        if values.len() > 1 {
            let spread = values.last().unwrap() - &values[0];
            if spread >= Q::one() {
                return Err(DynError::PeriodOverflow);
            }
        }
        Ok(PLCircleMap { breaks, values })
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breaks
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    /// Exact evaluation of the lift.
    pub fn eval(&self, x: &Q) -> Q {
        let b0 = &self.breaks[0];
        let offset = (x - b0).floor();
        let t = x - &offset; // in [b0, b0 + 1)
        let m = self.breaks.len();
        // find piece: largest i with breaks[i] <= t, using the wrapped
        // endpoint breaks[0] + 1 past the last stored breakpoint
        let i = match self.breaks.binary_search_by(|b| b.cmp(&t)) {
            Ok(i) => i,
            Err(0) => unreachable!("t >= b0 by construction"),
            Err(i) => i - 1,
        };
        let (x0, y0) = (&self.breaks[i], &self.values[i]);
        let (x1, y1) = if i + 1 < m {
            (self.breaks[i + 1].clone(), self.values[i + 1].clone())
        } else {
            (b0 + Q::one(), &self.values[0] + Q::one())
        };
        if m == 1 {
            // single pair: rigid translation
            return y0 + (t - x0) + offset;
        }
        let slope = (&y1 - y0) / (&x1 - x0);
        y0 + slope * (t - x0) + offset
    }

    /// self after other: x -> self(other(x)).
    pub fn compose(&self, other: &PLCircleMap) -> PLCircleMap {
        let inv = other.inverse();
        let mut pairs = Vec::new();
        for b in &other.breaks {
            pairs.push((b.clone(), self.eval(&other.eval(b))));
        }
        for b in &self.breaks {
            let pre = inv.eval(b);
            pairs.push((pre.clone(), self.eval(&other.eval(&pre))));
        }
        PLCircleMap::from_pairs(&pairs).expect("composition of homeomorphisms")
    }

    pub fn inverse(&self) -> PLCircleMap {
        let pairs: Vec<(Q, Q)> =
            self.breaks.iter().cloned().zip(self.values.iter().cloned()).map(|(b, v)| (v, b)).collect();
        PLCircleMap::from_pairs(&pairs).expect("inverse of homeomorphism")
    }

    pub fn pow(&self, k: i64) -> PLCircleMap {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = PLCircleMap::identity();
        for _ in 0..k.unsigned_abs() {
            out = base.compose(&out);
        }
        out
    }

    pub fn identity() -> PLCircleMap {
        PLCircleMap { breaks: vec![Q::zero()], values: vec![Q::zero()] }
    }

    /// Translation number of the lift. The orbit of 0 is followed until
    /// a fractional part repeats, which certifies an exact rational
    /// value; failing that within the budget, a width-2/N interval
    /// bracket around the Birkhoff average is returned.
    pub fn translation_number(&self, budget: usize) -> TranslationNumber {
        let mut seen: HashMap<Q, (usize, Q)> = HashMap::new();
        let mut x = Q::zero();
        for i in 0..budget {
            let f = frac_mod1(&x);
            if let Some((j, prev)) = seen.get(&f) {
                let num = &x - prev;
                let den = Q::from_integer(((i - j) as i64).into());
                return TranslationNumber::Exact(num / den);
            }
            seen.insert(f, (i, x.clone()));
            x = self.eval(&x);
        }
        let n = Q::from_integer((budget as i64).into());
        let avg = &x / &n;
        let err = n.recip();
        TranslationNumber::Interval {
            lo: &avg - &err,
            hi: avg + err,
            iterations: budget,
        }
    }

    /// Whether the lift fixes a point (equivalently, the translation
    /// number is zero). Solved piecewise in closed form.
    pub fn has_fixed_point(&self) -> bool {
        let m = self.breaks.len();
        if m == 1 {
            return self.values[0] == self.breaks[0];
        }
        for i in 0..m {
            let (x0, y0) = (self.breaks[i].clone(), self.values[i].clone());
            let (x1, y1) = if i + 1 < m {
                (self.breaks[i + 1].clone(), self.values[i + 1].clone())
            } else {
                (&self.breaks[0] + Q::one(), &self.values[0] + Q::one())
            };
            let slope = (&y1 - &y0) / (&x1 - &x0);
            if slope.is_one() {
                if y0 == x0 {
                    return true;
                }
            } else {
                // y0 + s (x - x0) = x
                let x_star = (&y0 - &slope * &x0) / (Q::one() - &slope);
                if x_star >= x0 && x_star <= x1 && self.eval(&x_star) == x_star {
                    return true;
                }
            }
        }
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TranslationNumber {
    Exact(Q),
    Interval { lo: Q, hi: Q, iterations: usize },
}

impl TranslationNumber {
    pub fn exact(&self) -> Option<&Q> {
        match self {
            TranslationNumber::Exact(q) => Some(q),
            _ => None,
        }
    }

    /// Fractional part for exact values, None for brackets.
    pub fn mod_one(&self) -> Option<Q> {
        self.exact().map(frac_mod1)
    }
}

/// Realizes an order automorphism as a PL circle map: the elements are
/// pinned at p/n following the canonical listing of the order, and the
/// permutation's action on those points is interpolated linearly, with
/// lift chosen so consecutive gaps stay in (0, 1).
pub fn dynamic_realization(
    order: &CircularOrder,
    g: &BTreeMap<String, String>,
) -> Result<PLCircleMap, DynError> {
    if !order.is_valid() {
        return Err(DynError::InvalidOrder);
    }
    let listing = order.to_cyclic_listing();
    let n = listing.len() as i64;
    let pos: HashMap<&str, i64> = listing
        .iter()
        .enumerate()
        .map(|(p, id)| (id.as_str(), p as i64))
        .collect();
    if g.len() != listing.len() {
        return Err(DynError::NotAPermutation);
    }
    let mut images = Vec::with_capacity(listing.len());
    let mut hit = vec![false; listing.len()];
    for id in &listing {
        let img = g.get(id).ok_or(DynError::NotAPermutation)?;
        let q = *pos.get(img.as_str()).ok_or(DynError::NotAPermutation)?;
        if std::mem::replace(&mut hit[q as usize], true) {
            return Err(DynError::NotAPermutation);
        }
        images.push(q);
    }
    // order preservation: successive images must advance by the same
    // cyclic gaps as the source points, i.e. the lifted values increase
    // by (q_p - q_{p-1}) mod n with total one full turn
    let mut pairs = Vec::with_capacity(listing.len());
    let mut y = Q::new(images[0].into(), n.into());
    pairs.push((Q::new(0.into(), 1.into()), y.clone()));
    let mut total = 0i64;
    for p in 1..listing.len() {
        let gap = (images[p] - images[p - 1]).rem_euclid(n);
        if gap == 0 {
            return Err(DynError::NotAPermutation);
        }
        total += gap;
        y = y + Q::new(gap.into(), n.into());
        pairs.push((Q::new((p as i64).into(), n.into()), y.clone()));
    }
    total += (images[0] - images[listing.len() - 1]).rem_euclid(n);
    if n > 1 && total != n {
        return Err(DynError::NotOrderPreserving);
    }
    PLCircleMap::from_pairs(&pairs).map_err(|_| DynError::NotOrderPreserving)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn rigid(p: i64, den: i64) -> PLCircleMap {
        PLCircleMap::from_pairs(&[(q(0, 1), q(p, den))]).unwrap()
    }

    #[test]
    fn rigid_rotation_translation_number() {
        let f = rigid(2, 5);
        match f.translation_number(100) {
            TranslationNumber::Exact(t) => assert_eq!(t, q(2, 5)),
            other => panic!("expected exact, got {other:?}"),
        }
        assert!(!f.has_fixed_point());
        assert!(rigid(0, 1).has_fixed_point());
    }

    #[test]
    fn evaluation_commutes_with_deck_translation() {
        let f = PLCircleMap::from_pairs(&[
            (q(0, 1), q(1, 4)),
            (q(1, 2), q(9, 10)),
        ])
        .unwrap();
        for x in [q(0, 1), q(1, 3), q(7, 10), q(-2, 7)] {
            assert_eq!(f.eval(&(&x + q(1, 1))), f.eval(&x) + q(1, 1));
            assert_eq!(f.eval(&(&x - q(3, 1))), f.eval(&x) - q(3, 1));
        }
    }

    #[test]
    fn inverse_undoes_the_map() {
        let f = PLCircleMap::from_pairs(&[
            (q(0, 1), q(1, 3)),
            (q(1, 4), q(1, 2)),
            (q(2, 3), q(11, 10)),
        ])
        .unwrap();
        let g = f.inverse();
        for x in [q(0, 1), q(1, 5), q(3, 7), q(9, 10)] {
            assert_eq!(g.eval(&f.eval(&x)), x);
            assert_eq!(f.eval(&g.eval(&x)), x);
        }
        let id = f.compose(&g);
        for x in [q(0, 1), q(2, 9)] {
            assert_eq!(id.eval(&x), x);
        }
    }

    #[test]
    fn power_additivity_of_translation_number() {
        let f = rigid(1, 3);
        let f2 = f.pow(2);
        assert_eq!(f2.translation_number(50).exact().unwrap(), &q(2, 3));
        let back = f.pow(-1);
        assert_eq!(back.translation_number(50).exact().unwrap(), &q(-1, 3));
    }

    #[test]
    fn period_overflow_is_rejected() {
        let res = PLCircleMap::from_pairs(&[(q(0, 1), q(0, 1)), (q(1, 2), q(3, 2))]);
        assert_eq!(res, Err(DynError::PeriodOverflow));
        let res = PLCircleMap::from_pairs(&[(q(0, 1), q(1, 2)), (q(1, 2), q(1, 4))]);
        assert_eq!(res, Err(DynError::NotMonotone));
    }

    #[test]
    fn realization_of_recalibrated_star_shift() {
        let listing: Vec<String> = ["1", "6", "5", "4", "3", "2"].iter().map(|s| s.to_string()).collect();
        let order = CircularOrder::from_cyclic_listing(&listing).unwrap();
        let g: BTreeMap<String, String> = (1..=6)
            .map(|x| (x.to_string(), ((x + 1) % 6 + 1).to_string()))
            .collect();
        let f = dynamic_realization(&order, &g).unwrap();
        assert_eq!(f.translation_number(100).exact().unwrap(), &q(2, 3));
    }

    #[test]
    fn realization_rejects_order_breaking_swap() {
        let listing: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let order = CircularOrder::from_cyclic_listing(&listing).unwrap();
        let swap: BTreeMap<String, String> = [("a", "b"), ("b", "a"), ("c", "c"), ("d", "d")]
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect();
        assert_eq!(dynamic_realization(&order, &swap), Err(DynError::NotOrderPreserving));
    }

    #[test]
    fn interval_bracket_when_budget_runs_out() {
        // golden-mean-like rotation by 13/34 runs 34 steps before repeat
        let f = rigid(13, 34);
        match f.translation_number(10) {
            TranslationNumber::Interval { lo, hi, iterations } => {
                assert_eq!(iterations, 10);
                assert!(lo <= q(13, 34) && q(13, 34) <= hi);
            }
            other => panic!("expected interval, got {other:?}"),
        }
    }
}
