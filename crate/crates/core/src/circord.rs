//! Circular orders on finite sets.
//!
//! A circular order is a map c : E^3 -> {-1, 0, +1} that vanishes exactly
//! on triples with a repeated entry, changes by the sign of a permutation
//! of its arguments, and satisfies the cocycle identity
//! c(e2,e3,e4) - c(e1,e3,e4) + c(e1,e2,e4) - c(e1,e2,e3) = 0.
//! Storage keeps one sign per ascending index triple; the rest follows by
//! antisymmetry.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

pub type ElementId = String;

/// Default cap for brute-force automorphism search.
pub const DEFAULT_AUT_BOUND: usize = 9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircordError {
    #[error("element index {0} out of range for {1} elements")]
    IndexOutOfRange(usize, usize),
    #[error("unknown element id {0:?}")]
    UnknownElement(String),
    #[error("duplicate element id {0:?}")]
    DuplicateElement(String),
    #[error("sign {0} outside -1..=1")]
    BadSign(i64),
    #[error("no entry for triple ({0}, {1}, {2})")]
    MissingTriple(usize, usize, usize),
    #[error("{size} elements exceeds brute-force bound {bound}")]
    SizeLimit { size: usize, bound: usize },
    #[error("table is not a circular order")]
    NotCircular,
    #[error("need at least one element")]
    Empty,
}

/// Raw total table, the exchange format: entries may list any index
/// triple, in any order, redundantly.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawOrderTable {
    pub elements: Vec<ElementId>,
    pub triples: Vec<(usize, usize, usize, i8)>,
}

/// Validated storage: one sign (+-1) per ascending triple of indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircularOrder {
    elements: Vec<ElementId>,
    signs: Vec<i8>,
}

fn binom3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

fn rank(i: usize, j: usize, k: usize) -> usize {
    debug_assert!(i < j && j < k);
    i + j * (j - 1) / 2 + k * (k - 1) * (k - 2) / 6
}

/// Orientation of three distinct positions on a cycle of length `len`:
/// +1 when p2 and p3 follow p1 in ascending cyclic order.
pub fn cyclic_sign(len: usize, p1: usize, p2: usize, p3: usize) -> i8 {
    debug_assert!(p1 != p2 && p2 != p3 && p1 != p3);
    let d2 = (p2 + len - p1) % len;
    let d3 = (p3 + len - p1) % len;
    if d2 < d3 {
        1
    } else {
        -1
    }
}

/// Sorts a triple of distinct values, returning (sorted, permutation sign).
fn sort3(a: usize, b: usize, c: usize) -> ([usize; 3], i8) {
    let mut v = [a, b, c];
    let mut sign = 1i8;
    if v[0] > v[1] {
        v.swap(0, 1);
        sign = -sign;
    }
    if v[1] > v[2] {
        v.swap(1, 2);
        sign = -sign;
    }
    if v[0] > v[1] {
        v.swap(0, 1);
        sign = -sign;
    }
    ([v[0], v[1], v[2]], sign)
}

impl CircularOrder {
    /// Order induced by a cyclic listing: c(x,y,z) = +1 when y and z
    /// follow x in listing direction.
    pub fn from_cyclic_listing(listing: &[ElementId]) -> Result<Self, CircordError> {
        if listing.is_empty() {
            return Err(CircordError::Empty);
        }
        let mut seen = HashMap::new();
        for (i, e) in listing.iter().enumerate() {
            if seen.insert(e.clone(), i).is_some() {
                return Err(CircordError::DuplicateElement(e.clone()));
            }
        }
        Ok(CircularOrder {
            elements: listing.to_vec(),
            signs: vec![1; binom3(listing.len())],
        })
    }

    /// Builds from a raw table; fails with `NotCircular` when the table
    /// is antisymmetry-inconsistent or violates the cocycle identity.
    pub fn from_raw(raw: &RawOrderTable) -> Result<Self, CircordError> {
        match canonicalize(raw)? {
            Some(c) if c.is_valid() => Ok(c),
            _ => Err(CircordError::NotCircular),
        }
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Result<usize, CircordError> {
        self.elements
            .iter()
            .position(|e| e == id)
            .ok_or_else(|| CircordError::UnknownElement(id.to_string()))
    }

    /// c on element indices.
    pub fn eval_idx(&self, a: usize, b: usize, c: usize) -> i8 {
        let n = self.len();
        assert!(a < n && b < n && c < n);
        if a == b || b == c || a == c {
            return 0;
        }
        let ([i, j, k], sign) = sort3(a, b, c);
        self.signs[rank(i, j, k)] * sign
    }

    /// c on element ids.
    pub fn eval(&self, a: &str, b: &str, c: &str) -> Result<i8, CircordError> {
        Ok(self.eval_idx(self.index_of(a)?, self.index_of(b)?, self.index_of(c)?))
    }

    /// Flips the stored sign of one ascending triple (test and
    /// counterexample construction aid; the result is usually invalid).
    pub fn flip_triple(&mut self, i: usize, j: usize, k: usize) {
        assert!(i < j && j < k && k < self.len());
        self.signs[rank(i, j, k)] = -self.signs[rank(i, j, k)];
    }

    /// Cocycle identity over all ascending index quadruples.
    pub fn is_valid(&self) -> bool {
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let s = self.eval_idx(j, k, l) as i32 - self.eval_idx(i, k, l) as i32
                            + self.eval_idx(i, j, l) as i32
                            - self.eval_idx(i, j, k) as i32;
                        if s != 0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// A cyclic listing realizing this order (valid orders only): the
    /// first element followed by the rest sorted by y < z iff
    /// c(first, y, z) = +1.
    pub fn to_cyclic_listing(&self) -> Vec<ElementId> {
        let n = self.len();
        if n == 0 {
            return vec![];
        }
        let mut rest: Vec<usize> = (1..n).collect();
        rest.sort_by(|&a, &b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else if self.eval_idx(0, a, b) >= 0 {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let mut out = vec![self.elements[0].clone()];
        out.extend(rest.into_iter().map(|i| self.elements[i].clone()));
        out
    }

    /// Canonical raw form: elements sorted by id, ascending triples in
    /// lexicographic order.
    pub fn to_raw_canonical(&self) -> RawOrderTable {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.elements[a].cmp(&self.elements[b]));
        let elements: Vec<ElementId> = order.iter().map(|&i| self.elements[i].clone()).collect();
        let mut triples = Vec::with_capacity(binom3(self.len()));
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                for k in j + 1..self.len() {
                    triples.push((i, j, k, self.eval_idx(order[i], order[j], order[k])));
                }
            }
        }
        RawOrderTable { elements, triples }
    }

    /// All order-preserving permutations, by pruned backtracking over
    /// images. Errors out above the brute-force bound.
    pub fn automorphism_group_bounded(
        &self,
        bound: usize,
    ) -> Result<Vec<OrderAutomorphism>, CircordError> {
        let n = self.len();
        if n > bound {
            return Err(CircordError::SizeLimit { size: n, bound });
        }
        let mut found = Vec::new();
        let mut partial: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.search(&mut partial, &mut used, &mut found);
        found.sort_by(|a, b| a.image.cmp(&b.image));
        Ok(found)
    }

    pub fn automorphism_group(&self) -> Result<Vec<OrderAutomorphism>, CircordError> {
        self.automorphism_group_bounded(DEFAULT_AUT_BOUND)
    }

    fn search(
        &self,
        partial: &mut Vec<usize>,
        used: &mut [bool],
        found: &mut Vec<OrderAutomorphism>,
    ) {
        let n = self.len();
        let pos = partial.len();
        if pos == n {
            found.push(OrderAutomorphism { image: partial.clone() });
            return;
        }
        'cand: for cand in 0..n {
            if used[cand] {
                continue;
            }
            for i in 0..pos {
                for j in i + 1..pos {
                    if self.eval_idx(partial[i], partial[j], cand) != self.eval_idx(i, j, pos) {
                        continue 'cand;
                    }
                }
            }
            partial.push(cand);
            used[cand] = true;
            self.search(partial, used, found);
            partial.pop();
            used[cand] = false;
        }
    }

    /// The induced circular order on Aut(E, c) with the given basepoint.
    ///
    /// Cases, for g1, g2, g3 in the group and stabilizer G_e:
    /// equal arguments give 0; three distinct cosets evaluate c at the
    /// orbit points g_i(e); two equal cosets compare the stabilizer
    /// element g_i^{-1} g_j in the order induced by <_e; three equal
    /// cosets sort g^{-1} g_i inside G_e. On finite sets the stabilizer
    /// is trivial, so the last two cases are unreachable, but they are
    /// implemented as stated.
    pub fn circular_order_on_aut(&self, basepoint: &str) -> Result<AutOrder, CircordError> {
        let e = self.index_of(basepoint)?;
        let group = self.automorphism_group()?;
        let m = group.len();
        let mut signs = vec![0i8; binom3(m)];
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    signs[rank(i, j, k)] =
                        self.aut_triple_sign(e, &group[i], &group[j], &group[k]);
                }
            }
        }
        let elements: Vec<ElementId> = (0..m).map(|i| format!("g{i}")).collect();
        Ok(AutOrder {
            basepoint: e,
            group,
            order: CircularOrder { elements, signs },
        })
    }

    fn aut_triple_sign(
        &self,
        e: usize,
        g1: &OrderAutomorphism,
        g2: &OrderAutomorphism,
        g3: &OrderAutomorphism,
    ) -> i8 {
        if g1 == g2 || g2 == g3 || g1 == g3 {
            return 0;
        }
        let (x1, x2, x3) = (g1.image[e], g2.image[e], g3.image[e]);
        if x1 != x2 && x2 != x3 && x1 != x3 {
            return self.eval_idx(x1, x2, x3);
        }
        let gs = [g1, g2, g3];
        let xs = [x1, x2, x3];
        // exactly two equal cosets, or all three
        let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
        let equal: Vec<(usize, usize)> =
            pairs.iter().copied().filter(|&(i, j)| xs[i] == xs[j]).collect();
        if equal.len() == 1 {
            let (i, j) = equal[0];
            let h = gs[i].inverse().compose(gs[j]);
            let parity = if (j - i) % 2 == 0 { -1 } else { 1 };
            return parity * self.stabilizer_sign(e, &h);
        }
        // all cosets equal: order h_i = g1^{-1} g_i inside the stabilizer
        let hs: Vec<OrderAutomorphism> = gs.iter().map(|g| g1.inverse().compose(g)).collect();
        let mut perm = [0usize, 1, 2];
        perm.sort_by(|&a, &b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else {
                let d = hs[a].inverse().compose(&hs[b]);
                if self.stabilizer_sign(e, &d) >= 0 {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            }
        });
        let inversions = (perm[0] > perm[1]) as u32
            + (perm[0] > perm[2]) as u32
            + (perm[1] > perm[2]) as u32;
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Sign of a nontrivial stabilizer element under the first-moved-point
    /// rule for the linear order <_e on E minus the basepoint.
    fn stabilizer_sign(&self, e: usize, h: &OrderAutomorphism) -> i8 {
        debug_assert_eq!(h.image[e], e);
        let mut moved: Vec<usize> = (0..self.len())
            .filter(|&x| x != e && h.image[x] != x)
            .collect();
        if moved.is_empty() {
            return 0;
        }
        moved.sort_by(|&a, &b| {
            if self.eval_idx(e, a, b) >= 0 {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let first = moved[0];
        self.eval_idx(e, first, h.image[first])
    }
}

/// Permutation of element indices, i -> image[i].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderAutomorphism {
    pub image: Vec<usize>,
}

impl OrderAutomorphism {
    pub fn identity(n: usize) -> Self {
        OrderAutomorphism { image: (0..n).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        OrderAutomorphism { image: inv }
    }

    /// (self.compose(other))(x) = self(other(x)).
    pub fn compose(&self, other: &OrderAutomorphism) -> Self {
        OrderAutomorphism {
            image: other.image.iter().map(|&v| self.image[v]).collect(),
        }
    }
}

/// Automorphism group of a circular order together with its induced
/// circular order; element "gi" of `order` is `group[i]`.
#[derive(Clone, Debug)]
pub struct AutOrder {
    pub basepoint: usize,
    pub group: Vec<OrderAutomorphism>,
    pub order: CircularOrder,
}

/// Checks both circular-order axioms on a raw total table: exhaustive
/// antisymmetry consistency, vanishing exactly on repeated entries, and
/// the cocycle identity. Index errors and missing triples are input
/// errors, not refutations.
pub fn validate_circular_order(raw: &RawOrderTable) -> Result<bool, CircordError> {
    Ok(canonicalize(raw)?.is_some_and(|c| c.is_valid()))
}

/// Folds raw entries into ascending-triple storage. `Ok(None)` means the
/// table is well-formed but provably not antisymmetric / not vanishing
/// correctly.
fn canonicalize(raw: &RawOrderTable) -> Result<Option<CircularOrder>, CircordError> {
    let n = raw.elements.len();
    if n == 0 {
        return Err(CircordError::Empty);
    }
    let mut seen = HashMap::new();
    for e in &raw.elements {
        if seen.insert(e.clone(), ()).is_some() {
            return Err(CircordError::DuplicateElement(e.clone()));
        }
    }
    let mut signs: Vec<Option<i8>> = vec![None; binom3(n)];
    for &(a, b, c, s) in &raw.triples {
        for idx in [a, b, c] {
            if idx >= n {
                return Err(CircordError::IndexOutOfRange(idx, n));
            }
        }
        if !(-1..=1).contains(&s) {
            return Err(CircordError::BadSign(s as i64));
        }
        if a == b || b == c || a == c {
            if s != 0 {
                return Ok(None);
            }
            continue;
        }
        if s == 0 {
            return Ok(None);
        }
        let ([i, j, k], parity) = sort3(a, b, c);
        let canon = s * parity;
        match signs[rank(i, j, k)] {
            None => signs[rank(i, j, k)] = Some(canon),
            Some(prev) if prev != canon => return Ok(None),
            Some(_) => {}
        }
    }
    let mut resolved = Vec::with_capacity(signs.len());
    for (pos, s) in signs.iter().enumerate() {
        match s {
            Some(v) => resolved.push(*v),
            None => {
                // locate the missing ascending triple for the error message
                for i in 0..n {
                    for j in i + 1..n {
                        for k in j + 1..n {
                            if rank(i, j, k) == pos {
                                return Err(CircordError::MissingTriple(i, j, k));
                            }
                        }
                    }
                }
                unreachable!()
            }
        }
    }
    Ok(Some(CircularOrder { elements: raw.elements.clone(), signs: resolved }))
}
