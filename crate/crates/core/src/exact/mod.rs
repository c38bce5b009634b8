//! Exact arithmetic support: big rationals with a fraction-string syntax,
//! integer matrices, integer/rational polynomials and Sturm sequences.

pub mod mat;
pub mod poly;
pub mod sturm;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Z = BigInt;
pub type Q = BigRational;

pub fn zint(v: i64) -> Z {
    Z::from(v)
}

/// Reduced rational n/d. Panics on d = 0.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

pub fn q_from_z(n: Z) -> Q {
    Q::from_integer(n)
}

/// Fractional part in [0, 1).
pub fn frac_mod1(x: &Q) -> Q {
    let f = x - q_from_z(x.floor().to_integer());
    debug_assert!(!f.is_negative() && f < Q::one());
    f
}

/// Renders a reduced rational as "p" or "p/q".
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses "p" or "p/q" (reduced on the way in).
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<Z>().ok().map(Q::from_integer),
        Some((n, d)) => {
            let n = n.trim().parse::<Z>().ok()?;
            let d = d.trim().parse::<Z>().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_strings_round_trip() {
        for s in ["0", "5", "-3", "2/3", "-1/2", "22/7"] {
            let v = parse_q(s).unwrap();
            assert_eq!(format_q(&v), s);
        }
        assert_eq!(format_q(&parse_q("4/6").unwrap()), "2/3");
        assert_eq!(format_q(&parse_q("3/-6").unwrap()), "-1/2");
        assert!(parse_q("1/0").is_none());
        assert!(parse_q("x").is_none());
    }

    #[test]
    fn frac_mod1_lands_in_unit_interval() {
        assert_eq!(frac_mod1(&q(7, 3)), q(1, 3));
        assert_eq!(frac_mod1(&q(-1, 3)), q(2, 3));
        assert_eq!(frac_mod1(&q(4, 1)), q(0, 1));
    }
}
