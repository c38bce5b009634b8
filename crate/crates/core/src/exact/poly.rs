//! Integer and rational polynomials in one variable, with the symmetric
//! (reciprocal) reduction t^j + t^{-j} -> p_j(z), z = t + 1/t, used for
//! exact root location on the unit circle, and cyclotomic polynomials.

use super::mat::ExactDomain;
use super::{Q, Z};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Polynomial over the integers; empty coefficient list is the zero
/// polynomial, otherwise the last entry is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<Z>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<Z>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Z::from(c)).collect())
    }

    pub fn monomial(coeff: Z, degree: usize) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Z::zero(); degree + 1];
        coeffs[degree] = coeff;
        IntPoly { coeffs }
    }

    pub fn constant(c: Z) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Z] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Z {
        self.coeffs.get(i).cloned().unwrap_or_else(Z::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Z> {
        self.coeffs.last()
    }

    pub fn eval_z(&self, x: &Z) -> Z {
        let mut acc = Z::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_q(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Q::from_integer(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Z::from(i + 1))
                .collect(),
        )
    }

    /// Coefficient reversal t^deg * p(1/t).
    pub fn reciprocal(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }

    /// p = +- t^deg p(1/t)?
    pub fn symmetry(&self) -> Option<i8> {
        if self.is_zero() {
            return Some(1);
        }
        let r = self.reciprocal();
        if r == *self {
            Some(1)
        } else if r == -self.clone() {
            Some(-1)
        } else {
            None
        }
    }

    /// Multiplicity of t = 0 as a root.
    pub fn order_at_zero(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divide by t^k; requires the k lowest coefficients to vanish.
    pub fn shift_down(&self, k: usize) -> IntPoly {
        assert!(self.order_at_zero() >= k || self.is_zero());
        if self.is_zero() {
            return IntPoly::zero();
        }
        IntPoly::new(self.coeffs[k..].to_vec())
    }

    /// Sign-normalize so the leading coefficient is positive.
    pub fn leading_positive(&self) -> IntPoly {
        match self.leading() {
            Some(l) if l.is_negative() => -self.clone(),
            _ => self.clone(),
        }
    }

    /// Long division; panics unless the division is exact over Z.
    pub fn exact_div_poly(&self, d: &IntPoly) -> IntPoly {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut rem = self.coeffs.clone();
        let dd = d.degree().unwrap();
        let nd = self.degree().unwrap();
        assert!(nd >= dd, "degree too small for exact division");
        let lead = d.leading().unwrap();
        let mut quot = vec![Z::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd];
            if c.is_zero() {
                continue;
            }
            let (qc, r) = num_integer::Integer::div_rem(c, lead);
            assert!(r.is_zero(), "non-exact polynomial division");
            for j in 0..=dd {
                let sub = &qc * &d.coeffs[j];
                rem[k + j] -= sub;
            }
            quot[k] = qc;
        }
        assert!(rem.iter().all(Zero::is_zero), "nonzero remainder in exact division");
        IntPoly::new(quot)
    }

    /// Divides out (t - root)^m for root in {1, -1}, returning (quotient, m).
    pub fn strip_root(&self, root: i64) -> (IntPoly, usize) {
        assert!(root == 1 || root == -1);
        let lin = IntPoly::from_i64(&[-root, 1]);
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() && p.eval_z(&Z::from(root)).is_zero() {
            p = p.exact_div_poly(&lin);
            m += 1;
        }
        (p, m)
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().cloned().map(Q::from_integer).collect())
    }

    /// Cyclotomic polynomial Phi_n.
    pub fn cyclotomic(n: u64) -> IntPoly {
        assert!(n >= 1);
        let mut num = vec![Z::zero(); n as usize + 1];
        num[0] = -Z::one();
        num[n as usize] = Z::one();
        let mut phi = IntPoly::new(num);
        for d in 1..n {
            if n % d == 0 {
                phi = phi.exact_div_poly(&IntPoly::cyclotomic(d));
            }
        }
        phi
    }

    /// For p symmetric of even degree 2e, returns P with
    /// p(e^{i t}) * e^{-i e t} = P(2 cos t). Panics if p is not symmetric
    /// of even degree.
    pub fn symmetric_to_cos_poly(&self) -> IntPoly {
        assert_eq!(self.symmetry(), Some(1), "not a +1-symmetric polynomial");
        if self.is_zero() {
            return IntPoly::zero();
        }
        let deg = self.degree().unwrap();
        assert!(deg % 2 == 0, "symmetric reduction needs even degree");
        let e = deg / 2;
        // p_j(z) realizes t^j + t^{-j}; p_0 = 2, p_1 = z.
        let mut p_prev = IntPoly::from_i64(&[2]);
        let mut p_cur = IntPoly::from_i64(&[0, 1]);
        let z = p_cur.clone();
        let mut acc = IntPoly::constant(self.coeff(e));
        for j in 1..=e {
            let pj = if j == 1 {
                p_cur.clone()
            } else {
                let next = &(&z * &p_cur) - &p_prev;
                p_prev = std::mem::replace(&mut p_cur, next);
                p_cur.clone()
            };
            acc = &acc + &(&IntPoly::constant(self.coeff(e - j)) * &pj);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly::constant(Z::one())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![Z::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Zero for IntPoly {
    fn zero() -> Self {
        IntPoly::zero()
    }
    fn is_zero(&self) -> bool {
        IntPoly::is_zero(self)
    }
}

impl One for IntPoly {
    fn one() -> Self {
        IntPoly::one()
    }
}

impl Add for IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: IntPoly) -> IntPoly {
        &self + &rhs
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: IntPoly) -> IntPoly {
        &self - &rhs
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: IntPoly) -> IntPoly {
        &self * &rhs
    }
}

impl ExactDomain for IntPoly {
    fn exact_div(&self, other: &Self) -> Self {
        self.exact_div_poly(other)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Polynomial over the rationals, for Sturm sequences.
#[derive(Clone, PartialEq)]
pub struct QPoly {
    coeffs: Vec<Q>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::new(vec![]);
        }
        QPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Q::from_integer(Z::from(i + 1)))
                .collect(),
        )
    }

    /// Euclidean remainder.
    pub fn rem(&self, d: &QPoly) -> QPoly {
        assert!(!d.is_zero());
        let dd = d.degree().unwrap();
        let lead = d.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let qc = rem.last().unwrap() / &lead;
            for j in 0..=dd {
                let sub = &qc * &d.coeffs[j];
                rem[k + j] -= sub;
            }
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
            if rem.len() <= dd {
                break;
            }
        }
        QPoly::new(rem)
    }

    /// Polynomial gcd, monic.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.coeffs.last().unwrap().clone();
        QPoly::new(a.coeffs.into_iter().map(|c| c / &lead).collect())
    }

    /// Square-free part self / gcd(self, self').
    pub fn square_free(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.div_exact(&g)
    }

    fn div_exact(&self, d: &QPoly) -> QPoly {
        let dd = d.degree().unwrap();
        let nd = self.degree().unwrap();
        let lead = d.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Q::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            let qc = c / &lead;
            for j in 0..=dd {
                let sub = &qc * &d.coeffs[j];
                rem[k + j] -= sub;
            }
            quot[k] = qc;
        }
        assert!(rem.iter().all(Zero::is_zero), "non-exact rational division");
        QPoly::new(quot)
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly{:?}", self.coeffs)
    }
}
