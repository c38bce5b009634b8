//! Braid-word bookkeeping for open-book hypotheses: word statistics,
//! a provenance-carrying ledger of fractional Dehn twist coefficients,
//! quasipositivity certificate checking, and the small arithmetic
//! predicates consumed by the surgery hypotheses.
//!
//! Twist coefficients are never computed here; they enter the ledger as
//! recorded values or user assertions and are transported only by the
//! full-twist shift rule. The quasipositivity checker verifies a
//! supplied band decomposition by free reduction alone; it does not
//! search and it does not apply braid relations.

use crate::exact::{q, Q};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BraidError {
    #[error("braid group needs at least 2 strands, got {0}")]
    TooFewStrands(usize),
    #[error("generator index {letter} out of range for {strands} strands")]
    LetterOutOfRange { letter: i64, strands: usize },
    #[error("unreadable braid token {0:?}")]
    BadToken(String),
    #[error("strand counts differ: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("degeneracy slope with zero twisting coefficient")]
    ZeroTwistingCoefficient,
    #[error("invalid surgery slope: {0}")]
    InvalidSlope(String),
}

/// Word in the braid group on `strands` strands. A letter +i is the
/// positive half-twist of strands i, i+1 (1-indexed); -i its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i64>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i64>) -> Result<Self, BraidError> {
        if strands < 2 {
            return Err(BraidError::TooFewStrands(strands));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(BraidError::LetterOutOfRange { letter: l, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Result<Self, BraidError> {
        Self::new(strands, vec![])
    }

    /// Text form `s1 S2 s1`: lowercase = positive letter, uppercase =
    /// inverse, whitespace separated.
    pub fn parse(strands: usize, text: &str) -> Result<Self, BraidError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (sign, digits) = match tok.chars().next() {
                Some('s') => (1, &tok[1..]),
                Some('S') => (-1, &tok[1..]),
                _ => return Err(BraidError::BadToken(tok.into())),
            };
            let idx: i64 =
                digits.parse().map_err(|_| BraidError::BadToken(tok.into()))?;
            if idx < 1 {
                return Err(BraidError::BadToken(tok.into()));
            }
            letters.push(sign * idx);
        }
        Self::new(strands, letters)
    }

    pub fn to_text(&self) -> String {
        self.letters
            .iter()
            .map(|&l| {
                if l > 0 {
                    format!("s{l}")
                } else {
                    format!("S{}", -l)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch(self.strands, other.strands));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord::new(self.strands, letters)
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    pub fn repeat(&self, n: usize) -> BraidWord {
        let mut letters = Vec::with_capacity(self.letters.len() * n);
        for _ in 0..n {
            letters.extend_from_slice(&self.letters);
        }
        BraidWord { strands: self.strands, letters }
    }

    /// Cancels adjacent inverse pairs until none remain.
    pub fn free_reduced(&self) -> BraidWord {
        let mut stack: Vec<i64> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if stack.last() == Some(&-l) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        BraidWord { strands: self.strands, letters: stack }
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|&l| l.signum()).sum()
    }

    /// Where each strand ends: position i (0-indexed) maps to
    /// permutation()[i].
    pub fn permutation(&self) -> Vec<usize> {
        let mut occupant: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            occupant.swap(i, i + 1);
        }
        let mut ends = vec![0; self.strands];
        for (slot, &strand) in occupant.iter().enumerate() {
            ends[strand] = slot;
        }
        ends
    }

    /// Number of link components of the braid closure.
    pub fn closure_components(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut cycles = 0;
        for start in 0..self.strands {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut at = start;
            while !seen[at] {
                seen[at] = true;
                at = perm[at];
            }
        }
        cycles
    }
}

/// The full twist (s1 s2 ... s_{w-1})^w, central in the braid group.
pub fn full_twist(strands: usize) -> Result<BraidWord, BraidError> {
    let round = BraidWord::new(strands, (1..strands as i64).collect())?;
    Ok(round.repeat(strands))
}

/// Appends k full twists (inverse twists for negative k).
pub fn full_twist_compose(b: &BraidWord, k: i64) -> BraidWord {
    let twist = full_twist(b.strands).expect("word already validated");
    let tail = if k >= 0 {
        twist.repeat(k as usize)
    } else {
        twist.inverse().repeat(-k as usize)
    };
    b.concat(&tail).expect("same strand count")
}

/// How a twist-coefficient value entered the ledger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// established value, recorded directly
    Cataloged,
    /// claimed by the caller, unchecked
    Asserted,
    /// transported from `base` by appending `twists` full twists
    Shifted { base: Box<FdtcRecord>, twists: i64 },
}

/// Ledger entry pairing a braid with its fractional Dehn twist
/// coefficient and the justification for the value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdtcRecord {
    pub word: BraidWord,
    pub value: Q,
    pub provenance: Provenance,
}

impl FdtcRecord {
    pub fn cataloged(word: BraidWord, value: Q) -> Self {
        FdtcRecord { word, value, provenance: Provenance::Cataloged }
    }

    pub fn asserted(word: BraidWord, value: Q) -> Self {
        FdtcRecord { word, value, provenance: Provenance::Asserted }
    }
}

/// Twist coefficient of C^k b is k plus that of b. Consecutive shifts
/// collapse onto the original base record, so shifting by k and then
/// by -k returns the base record exactly.
pub fn fdtc_shift(rec: &FdtcRecord, k: i64) -> FdtcRecord {
    if k == 0 {
        return rec.clone();
    }
    let (base, total) = match &rec.provenance {
        Provenance::Shifted { base, twists } => (base.as_ref(), twists + k),
        _ => (rec, k),
    };
    if total == 0 {
        return base.clone();
    }
    FdtcRecord {
        word: full_twist_compose(&base.word, total),
        value: &base.value + q(total, 1),
        provenance: Provenance::Shifted { base: Box::new(base.clone()), twists: total },
    }
}

/// Band generator a_{1,l+2} = (s1^-1 ... sl^-1) s_{l+1} (sl ... s1) on
/// l + 2 strands.
pub fn band_generator(l: usize) -> BraidWord {
    assert!(l >= 1);
    let strands = l + 2;
    let mut letters: Vec<i64> = (1..=l as i64).map(|i| -i).collect();
    letters.push(l as i64 + 1);
    letters.extend((1..=l as i64).rev());
    BraidWord::new(strands, letters).expect("indices in range by construction")
}

/// The three-strand family s1^p s2^q a13^r, carrying its recorded
/// twist coefficient 1.
pub fn bpqr(p: usize, q_exp: usize, r: usize) -> (BraidWord, FdtcRecord) {
    assert!(p >= 1 && q_exp >= 1 && r >= 1);
    let s1 = BraidWord::new(3, vec![1]).unwrap();
    let s2 = BraidWord::new(3, vec![2]).unwrap();
    let a13 = band_generator(1);
    let word = s1
        .repeat(p)
        .concat(&s2.repeat(q_exp))
        .and_then(|w| w.concat(&a13.repeat(r)))
        .unwrap();
    let record = FdtcRecord::cataloged(word.clone(), q(1, 1));
    (word, record)
}

/// Claimed factorization of a braid into conjugated positive
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasipositiveDecomposition {
    /// (conjugator w_i, generator index k_i): band w_i s_{k_i} w_i^-1
    pub bands: Vec<(BraidWord, usize)>,
}

/// Checks that the expanded band product freely reduces to the same
/// word as the target. Certificate verification only: free reduction,
/// no braid relations.
pub fn is_quasipositive_form(
    d: &QuasipositiveDecomposition,
    target: &BraidWord,
) -> Result<bool, BraidError> {
    let mut product = BraidWord::identity(target.strands())?;
    for (conj, k) in &d.bands {
        if conj.strands() != target.strands() {
            return Err(BraidError::StrandMismatch(conj.strands(), target.strands()));
        }
        let gen = BraidWord::new(target.strands(), vec![*k as i64])?;
        let band = conj.concat(&gen)?.concat(&conj.inverse())?;
        product = product.concat(&band)?;
    }
    Ok(product.free_reduced().letters() == target.free_reduced().letters())
}

/// The surgery hypotheses, named by what they require of the twist
/// coefficient c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    /// c is neither 0 nor the reciprocal of a nonzero integer
    AvoidsZeroAndReciprocals,
    /// |c| > 1
    ExceedsUnitMagnitude,
    /// appending k full twists avoids the degenerate window around -c
    TwistStaysNondegenerate { k: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypothesisFailure {
    ZeroCoefficient,
    ReciprocalOfInteger { m: i64 },
    MagnitudeAtMostOne,
    ForbiddenTwist { forbidden: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisOutcome {
    pub passes: bool,
    pub failure: Option<HypothesisFailure>,
}

fn outcome(failure: Option<HypothesisFailure>) -> HypothesisOutcome {
    HypothesisOutcome { passes: failure.is_none(), failure }
}

pub fn hypothesis_check(c: &Q, h: &Hypothesis) -> HypothesisOutcome {
    match h {
        Hypothesis::AvoidsZeroAndReciprocals => {
            if c.is_zero() {
                return outcome(Some(HypothesisFailure::ZeroCoefficient));
            }
            if c.numer().abs() == 1.into() {
                let m: i64 = (c.denom() * c.numer()).try_into().expect("small denominator");
                return outcome(Some(HypothesisFailure::ReciprocalOfInteger { m }));
            }
            outcome(None)
        }
        Hypothesis::ExceedsUnitMagnitude => {
            if c.abs() <= q(1, 1) {
                outcome(Some(HypothesisFailure::MagnitudeAtMostOne))
            } else {
                outcome(None)
            }
        }
        Hypothesis::TwistStaysNondegenerate { k } => {
            let floor: i64 = c.floor().to_integer().try_into().expect("small coefficient");
            let forbidden: Vec<i64> = if c.is_integer() {
                vec![-floor - 1, -floor, -floor + 1]
            } else {
                vec![-floor - 1, -floor]
            };
            if forbidden.contains(k) {
                outcome(Some(HypothesisFailure::ForbiddenTwist { forbidden }))
            } else {
                outcome(None)
            }
        }
    }
}

/// Twist coefficient d/c read off a degeneracy slope c mu + d lambda.
pub fn degeneracy_to_fdtc(c: i64, d: i64) -> Result<Q, BraidError> {
    if c == 0 {
        return Err(BraidError::ZeroTwistingCoefficient);
    }
    Ok(q(d, c))
}

/// The degeneracy slope is meridional exactly when d = 0.
pub fn meridional_check(_c: i64, d: i64) -> bool {
    d == 0
}

/// n |p d - q c| >= 2 for a primitive surgery class alpha = (p, q)
/// against the degeneracy class delta = (c, d).
pub fn well_adapted_check(
    n: u64,
    alpha: (i64, i64),
    delta: (i64, i64),
) -> Result<bool, BraidError> {
    let (p, qq) = alpha;
    if p == 0 && qq == 0 {
        return Err(BraidError::InvalidSlope("alpha = (0, 0)".into()));
    }
    if p.gcd(&qq) != 1 {
        return Err(BraidError::InvalidSlope(format!("alpha = ({p}, {qq}) is not primitive")));
    }
    if n == 0 {
        return Err(BraidError::InvalidSlope("multiplicity n must be positive".into()));
    }
    let (c, d) = delta;
    Ok(n as i128 * (p as i128 * d as i128 - qq as i128 * c as i128).unsigned_abs() as i128 >= 2)
}
