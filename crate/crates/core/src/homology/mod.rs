//! Cohomological lifting certificates for cyclic branched quotients.
//!
//! The input is a presentation 2-complex with optional orbifold cells:
//! each orbifold cell is a disk attached along a power of a meridian
//! generator. Given a homomorphism to Z/n, the certificate machinery
//! checks it is a well-defined epimorphism, evaluates the obstruction
//! cocycle on the 2-cells, and then either produces an integral cochain
//! trivializing n times the cocycle or reports the equation that
//! obstructs it.

pub mod snf;

use crate::dynamics::{PLCircleMap, TranslationNumber};
use crate::exact::mat::IntMat;
use crate::exact::{frac_mod1, Q, Z};
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use snf::{cokernel, solve_integer};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error("duplicate generator {0:?}")]
    DuplicateGenerator(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("no value assigned to generator {0:?}")]
    MissingValue(String),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("cone order must be positive")]
    ZeroConeOrder,
    #[error("cone order {given} is not the order of {value} modulo {modulus}")]
    WrongConeOrder { given: u64, value: i64, modulus: u64 },
}

/// A finite presentation with cone points: relator cells are attached
/// along arbitrary words, orbifold cells along n_i-th powers of single
/// generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbifoldPresentation {
    pub generators: Vec<String>,
    /// Words as (generator, exponent) letters.
    pub relators: Vec<Vec<(String, i64)>>,
    /// (generator, cone order) pairs.
    #[serde(default)]
    pub orbifold_cells: Vec<(String, u64)>,
}

impl OrbifoldPresentation {
    fn gen_index(&self) -> Result<BTreeMap<&str, usize>, HomologyError> {
        let mut idx = BTreeMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            if idx.insert(g.as_str(), i).is_some() {
                return Err(HomologyError::DuplicateGenerator(g.clone()));
            }
        }
        Ok(idx)
    }

    fn exponent_rows(&self) -> Result<Vec<Vec<Z>>, HomologyError> {
        let idx = self.gen_index()?;
        let mut rows = Vec::new();
        for rel in &self.relators {
            let mut row = vec![Z::zero(); self.generators.len()];
            for (g, e) in rel {
                let &i = idx
                    .get(g.as_str())
                    .ok_or_else(|| HomologyError::UnknownGenerator(g.clone()))?;
                row[i] += Z::from(*e);
            }
            rows.push(row);
        }
        Ok(rows)
    }

    /// Matrix of the coboundary C^1 -> C^2 in the cell basis: relator
    /// cells first, then orbifold cells.
    pub fn coboundary(&self) -> Result<IntMat, HomologyError> {
        let idx = self.gen_index()?;
        let mut rows = self.exponent_rows()?;
        for (g, order) in &self.orbifold_cells {
            if *order == 0 {
                return Err(HomologyError::ZeroConeOrder);
            }
            let &i = idx
                .get(g.as_str())
                .ok_or_else(|| HomologyError::UnknownGenerator(g.clone()))?;
            let mut row = vec![Z::zero(); self.generators.len()];
            row[i] = Z::from(*order);
            rows.push(row);
        }
        Ok(IntMat::from_rows(rows))
    }
}

/// Torsion coefficients (invariant factors > 1) and free rank of the
/// second integral cohomology of the presentation complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology2 {
    pub torsion: Vec<Z>,
    pub free_rank: usize,
}

pub fn second_cohomology(pres: &OrbifoldPresentation) -> Result<Cohomology2, HomologyError> {
    let (torsion, free_rank) = cokernel(&pres.coboundary()?);
    Ok(Cohomology2 { torsion, free_rank })
}

/// Value of the obstruction cocycle on an orbifold cell of cone order
/// n_i whose meridian maps to a_i in Z/n: the exact integer
/// -(n_i * a_i) / n. The cone order must equal the order of a_i.
pub fn milnor_cocycle_value(n_i: u64, a_i: i64, n: u64) -> Result<Z, HomologyError> {
    if n == 0 {
        return Err(HomologyError::ZeroModulus);
    }
    if n_i == 0 {
        return Err(HomologyError::ZeroConeOrder);
    }
    let g = (a_i.rem_euclid(n as i64) as u64).gcd(&n);
    if n_i != n / g {
        return Err(HomologyError::WrongConeOrder { given: n_i, value: a_i, modulus: n });
    }
    let prod = Z::from(n_i) * Z::from(a_i);
    let (q, r) = prod.div_rem(&Z::from(n));
    debug_assert!(r.is_zero());
    Ok(-q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftOutcome {
    Certified(LiftCertificate),
    Refuted(LiftRefutation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftCertificate {
    pub modulus: u64,
    /// Integral 1-cochain with coboundary equal to modulus * omega.
    pub eta: BTreeMap<String, Z>,
    /// Obstruction cocycle on the 2-cells, relators first.
    pub omega: Vec<Z>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftRefutation {
    /// The assignment does not kill a relator, so it is not a
    /// homomorphism; the residue is the relator's image in Z/n.
    RelatorNotKilled { relator: usize, residue: Z },
    /// The image subgroup is proper.
    NotSurjective { gcd: Z },
    /// A cone order disagrees with the order of the meridian image.
    ConeOrderMismatch { cell: usize, given: u64, value: i64 },
    /// The integral system has no solution; the index points at a row
    /// of the Smith-transformed system witnessing the obstruction.
    NoIntegralLift { obstruction_row: usize },
}

/// Runs the full lifting pipeline for a homomorphism onto Z/n given by
/// meridian values. On success the certificate carries eta and omega
/// with coboundary(eta) = n * omega re-verified by multiplication.
pub fn lifting_certificate(
    pres: &OrbifoldPresentation,
    n: u64,
    values: &BTreeMap<String, i64>,
) -> Result<LiftOutcome, HomologyError> {
    if n == 0 {
        return Err(HomologyError::ZeroModulus);
    }
    let nz = Z::from(n);
    for g in values.keys() {
        if !pres.generators.contains(g) {
            return Err(HomologyError::UnknownGenerator(g.clone()));
        }
    }
    let mut a = Vec::with_capacity(pres.generators.len());
    for g in &pres.generators {
        let v = values
            .get(g)
            .copied()
            .ok_or_else(|| HomologyError::MissingValue(g.clone()))?;
        a.push(v);
    }
    // homomorphism: relators must die in Z/n
    for (ri, row) in pres.exponent_rows()?.iter().enumerate() {
        let total: Z = row.iter().zip(&a).map(|(e, &ai)| e * Z::from(ai)).sum();
        let residue = total.mod_floor(&nz);
        if !residue.is_zero() {
            return Ok(LiftOutcome::Refuted(LiftRefutation::RelatorNotKilled {
                relator: ri,
                residue,
            }));
        }
    }
    // surjectivity onto Z/n
    let mut g = nz.clone();
    for &ai in &a {
        g = g.gcd(&Z::from(ai));
    }
    if g != Z::from(1) {
        return Ok(LiftOutcome::Refuted(LiftRefutation::NotSurjective { gcd: g }));
    }
    // obstruction cocycle
    let gen_pos: BTreeMap<&str, usize> = pres
        .generators
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut omega = vec![Z::zero(); pres.relators.len()];
    for (ci, (gname, order)) in pres.orbifold_cells.iter().enumerate() {
        let gi = gen_pos[gname.as_str()];
        match milnor_cocycle_value(*order, a[gi], n) {
            Ok(v) => omega.push(v),
            Err(HomologyError::WrongConeOrder { .. }) => {
                return Ok(LiftOutcome::Refuted(LiftRefutation::ConeOrderMismatch {
                    cell: ci,
                    given: *order,
                    value: a[gi],
                }))
            }
            Err(e) => return Err(e),
        }
    }
    // integral trivialization of n * omega
    let matrix = pres.coboundary()?;
    let rhs: Vec<Z> = omega.iter().map(|w| w * &nz).collect();
    let eta_vec = match solve_integer(&matrix, &rhs) {
        Ok(x) => x,
        Err(f) => {
            return Ok(LiftOutcome::Refuted(LiftRefutation::NoIntegralLift {
                obstruction_row: f.row,
            }))
        }
    };
    assert_eq!(matrix.apply(&eta_vec), rhs, "solver output failed re-verification");
    for (gname, _) in &pres.orbifold_cells {
        let gi = gen_pos[gname.as_str()];
        assert_eq!(
            eta_vec[gi],
            Z::from(-a[gi]),
            "orbifold rows must pin eta on meridians"
        );
    }
    let eta = pres
        .generators
        .iter()
        .cloned()
        .zip(eta_vec.iter().cloned())
        .collect();
    Ok(LiftOutcome::Certified(LiftCertificate { modulus: n, eta, omega }))
}

/// Whether a one-sided condition on a translation number is certified,
/// certified to fail, or undecided by an interval bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Tri {
    Yes,
    No,
    Unknown,
}

fn bracket_excludes_integers(lo: &Q, hi: &Q) -> bool {
    // the closed interval [lo, hi] misses every integer
    hi.floor() < lo.ceil()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Detection {
    Detected {
        rot_mu: Q,
        rot_alpha: Q,
        /// integer removed from alpha's translation number by the lift
        /// normalization; the remaining fractional part is nonzero
        lift_shift: Z,
        fractional: Q,
    },
    NotDetected {
        reason: NonDetection,
    },
    Inconclusive {
        mu: TranslationNumber,
        alpha: TranslationNumber,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonDetection {
    /// The meridian's rotation number is nonzero mod 1.
    MeridianRotates,
    /// The tested slope's translation number is an integer for every
    /// lift.
    SlopeIntegral,
}

/// Order-detection certificate for a pair of circle actions: detected
/// when the meridian map has rotation number 0 mod 1 while the tested
/// slope does not. Interval brackets can refute but never certify the
/// meridian condition.
pub fn order_detection_certificate(
    mu: &PLCircleMap,
    alpha: &PLCircleMap,
    budget: usize,
) -> Detection {
    let t_mu = mu.translation_number(budget);
    let t_alpha = alpha.translation_number(budget);
    let mu_ok = match &t_mu {
        TranslationNumber::Exact(q) => {
            if frac_mod1(q).is_zero() {
                Tri::Yes
            } else {
                Tri::No
            }
        }
        TranslationNumber::Interval { lo, hi, .. } => {
            if bracket_excludes_integers(lo, hi) {
                Tri::No
            } else {
                Tri::Unknown
            }
        }
    };
    let alpha_ok = match &t_alpha {
        TranslationNumber::Exact(q) => {
            if frac_mod1(q).is_zero() {
                Tri::No
            } else {
                Tri::Yes
            }
        }
        TranslationNumber::Interval { lo, hi, .. } => {
            if bracket_excludes_integers(lo, hi) {
                Tri::Yes
            } else {
                Tri::Unknown
            }
        }
    };
    match (mu_ok, alpha_ok) {
        (Tri::No, _) => Detection::NotDetected { reason: NonDetection::MeridianRotates },
        (_, Tri::No) => Detection::NotDetected { reason: NonDetection::SlopeIntegral },
        (Tri::Yes, Tri::Yes) => {
            let rot_mu = t_mu.exact().unwrap().clone();
            match t_alpha {
                TranslationNumber::Exact(rot_alpha) => {
                    let shift = rot_alpha.floor();
                    let fractional = &rot_alpha - &shift;
                    Detection::Detected {
                        rot_mu,
                        rot_alpha,
                        lift_shift: shift.to_integer(),
                        fractional,
                    }
                }
                TranslationNumber::Interval { lo, hi, .. } => {
                    // bracket excludes integers, so the floor is pinned
                    let shift = lo.floor();
                    let mid = (&lo + &hi) / Q::from_integer(2.into());
                    Detection::Detected {
                        rot_mu,
                        rot_alpha: mid.clone(),
                        lift_shift: shift.to_integer(),
                        fractional: mid - shift,
                    }
                }
            }
        }
        (m, a) => {
            debug_assert!(m == Tri::Unknown || a == Tri::Unknown);
            Detection::Inconclusive { mu: t_mu, alpha: t_alpha }
        }
    }
}
