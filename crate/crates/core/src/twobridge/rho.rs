//! Floating-point side of the two-bridge pipeline: the one-parameter
//! family of 2x2 representations used for the triple-two pattern, and
//! numeric eigenvalue counts of the Hermitian pairing at a unit-circle
//! sample. Everything here reports residuals instead of silently
//! trusting the arithmetic; exact certification lives in `arc`.

use super::TwoBridgeError;
use crate::exact::{frac_mod1, q, Q};
use crate::exact::mat::IntMat;
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

type M2 = [[Complex64; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[Complex64::ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn inv(a: &M2) -> M2 {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]]
}

fn max_diff(a: &M2, b: &M2) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// Image of the commutator-shaped word
/// w = y x y^-1 x^-1 y x y x^-1 y^-1 x y under
/// x -> [[m, 1], [0, m^-1]], y -> [[m, 0], [s, m^-1]] with m = e^{i
/// theta} and s = 3 - 4 cos^2 theta, together with consistency
/// residuals and the resulting trace verdict.
#[derive(Clone, Debug)]
pub struct RhoAssessment {
    pub theta: f64,
    /// off-diagonal parameter s = 3 - 4 cos^2 theta
    pub s: f64,
    /// upper bound 4 sin^2 theta of the excluded trace window
    pub trace_window: f64,
    pub rho_w: M2,
    /// max-norm of rho(w) rho(x) - rho(x) rho(w)
    pub relation_residual: f64,
    /// max-norm against the closed form
    /// [[-cos 3t + i sin 3t, 1 + 2 cos 2t], [0, -cos 3t - i sin 3t]]
    pub closed_form_residual: f64,
    /// max-norm of rho(y^-1 x y) - rho(x y x^-1)
    pub symmetry_residual: f64,
    /// s lies outside [0, 4 sin^2 theta], so the pair is conjugate
    /// into the real points and the trace argument applies
    pub conjugate_to_real: bool,
    /// attached by `rho_theta_at_pi_over` on a positive verdict
    pub rotation_claim: Option<Q>,
}

const VERDICT_EPS: f64 = 1e-9;

pub fn rho_theta(theta: f64) -> Result<RhoAssessment, TwoBridgeError> {
    if theta.sin().abs() < 1e-12 {
        return Err(TwoBridgeError::AngleOnRealAxis);
    }
    let m = Complex64::new(theta.cos(), theta.sin());
    let s = 3.0 - 4.0 * theta.cos() * theta.cos();
    let sc = Complex64::new(s, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let x: M2 = [[m, one], [Complex64::ZERO, one / m]];
    let y: M2 = [[m, Complex64::ZERO], [sc, one / m]];
    let xi = inv(&x);
    let yi = inv(&y);
    let word = [&y, &x, &yi, &xi, &y, &x, &y, &xi, &yi, &x, &y];
    let mut w = [[one, Complex64::ZERO], [Complex64::ZERO, one]];
    for g in word {
        w = mul(&w, g);
    }
    let (c3, s3, c2) = ((3.0 * theta).cos(), (3.0 * theta).sin(), (2.0 * theta).cos());
    let closed: M2 = [
        [Complex64::new(-c3, s3), Complex64::new(1.0 + 2.0 * c2, 0.0)],
        [Complex64::ZERO, Complex64::new(-c3, -s3)],
    ];
    let trace_window = 4.0 * theta.sin() * theta.sin();
    Ok(RhoAssessment {
        theta,
        s,
        trace_window,
        rho_w: w,
        relation_residual: max_diff(&mul(&w, &x), &mul(&x, &w)),
        closed_form_residual: max_diff(&w, &closed),
        symmetry_residual: max_diff(&mul(&mul(&yi, &x), &y), &mul(&mul(&x, &y), &xi)),
        conjugate_to_real: s < -VERDICT_EPS || s > trace_window + VERDICT_EPS,
        rotation_claim: None,
    })
}

/// Same as `rho_theta` at theta = pi/n, claiming rotation number 1/n
/// when the verdict is positive.
pub fn rho_theta_at_pi_over(n: u64) -> Result<RhoAssessment, TwoBridgeError> {
    assert!(n >= 1);
    let mut a = rho_theta(std::f64::consts::PI / n as f64)?;
    if a.conjugate_to_real {
        a.rotation_claim = Some(q(1, n as i64));
    }
    Ok(a)
}

/// Eigenvalue signs of the Hermitian pairing
/// (1 - u)S + (1 - conj(u))S^T at u = e^{2 pi i angle}, computed
/// through the 2n x 2n real symmetric doubling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianSample {
    pub angle: Q,
    pub dim: usize,
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

impl HermitianSample {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

pub fn levine_tristram_form(s: &IntMat, angle: &Q) -> Result<HermitianSample, TwoBridgeError> {
    assert_eq!(s.rows, s.cols);
    if frac_mod1(angle).is_zero() {
        return Err(TwoBridgeError::DegenerateParameter);
    }
    let n = s.rows;
    let phase = 2.0 * std::f64::consts::PI * angle.to_f64().expect("angle fits in f64");
    let u = Complex64::new(phase.cos(), phase.sin());
    let (a, b) = (Complex64::new(1.0, 0.0) - u, Complex64::new(1.0, 0.0) - u.conj());
    let mut form = vec![vec![Complex64::ZERO; n]; n];
    for i in 0..n {
        for j in 0..n {
            let sij = s[(i, j)].to_f64().expect("entry fits in f64");
            let sji = s[(j, i)].to_f64().expect("entry fits in f64");
            form[i][j] = a * sij + b * sji;
        }
    }
    for i in 0..n {
        for j in 0..n {
            assert!(
                (form[i][j] - form[j][i].conj()).norm() <= 1e-12,
                "pairing failed to be Hermitian"
            );
        }
    }
    // [[Re, -Im], [Im, Re]] has each eigenvalue of the form twice
    let doubled = DMatrix::<f64>::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, bj) = (i / n, j / n);
        let e = form[i % n][j % n];
        match (bi, bj) {
            (0, 0) | (1, 1) => e.re,
            (0, 1) => -e.im,
            _ => e.im,
        }
    });
    let eigenvalues = doubled.symmetric_eigenvalues();
    let (mut pos, mut neg, mut nul) = (0usize, 0usize, 0usize);
    for v in eigenvalues.iter() {
        if *v > 1e-9 {
            pos += 1;
        } else if *v < -1e-9 {
            neg += 1;
        } else {
            nul += 1;
        }
    }
    assert!(pos % 2 == 0 && neg % 2 == 0 && nul % 2 == 0, "doubling must pair eigenvalues");
    Ok(HermitianSample {
        angle: angle.clone(),
        dim: n,
        positive: pos / 2,
        negative: neg / 2,
        null: nul / 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twobridge::{f_block, f_prime_block};

    #[test]
    fn residuals_stay_at_machine_precision() {
        for i in 1..=60 {
            let theta = 0.05 * i as f64;
            if theta.sin().abs() < 1e-3 {
                continue;
            }
            let a = rho_theta(theta).unwrap();
            assert!(a.relation_residual <= 1e-12, "theta = {theta}");
            assert!(a.closed_form_residual <= 1e-12, "theta = {theta}");
            assert!(a.symmetry_residual <= 1e-12, "theta = {theta}");
        }
    }

    #[test]
    fn verdict_flips_at_pi_over_six() {
        // s(pi/6) = 0 sits inside the excluded window
        let a = rho_theta(std::f64::consts::PI / 6.0).unwrap();
        assert!(a.s.abs() < 1e-12);
        assert!(!a.conjugate_to_real);
        for n in 2..=6 {
            assert!(!rho_theta_at_pi_over(n).unwrap().conjugate_to_real, "n = {n}");
        }
        for n in 7..=24 {
            let a = rho_theta_at_pi_over(n).unwrap();
            assert!(a.conjugate_to_real && a.s < 0.0, "n = {n}");
            assert_eq!(a.rotation_claim, Some(q(1, n as i64)));
        }
    }

    #[test]
    fn real_axis_rejected() {
        assert!(matches!(rho_theta(0.0), Err(TwoBridgeError::AngleOnRealAxis)));
        assert!(matches!(
            rho_theta(std::f64::consts::PI),
            Err(TwoBridgeError::AngleOnRealAxis)
        ));
    }

    #[test]
    fn hermitian_counts_for_torus_blocks() {
        // Hopf band at u = -1: 1x1 form [-4]
        let h = levine_tristram_form(&f_block(1), &q(1, 2)).unwrap();
        assert_eq!((h.positive, h.negative, h.null), (0, 1, 0));
        // genus-2 block at u = -1 is negative definite
        let h = levine_tristram_form(&f_block(2), &q(1, 2)).unwrap();
        assert_eq!((h.positive, h.negative, h.null), (0, 3, 0));
    }

    #[test]
    fn signature_steps_match_the_root_angles() {
        // det(F(3) - t F(3)^T) vanishes at angles 1/6 and 1/3 of a
        // turn; the count is (0,5) near the half turn and climbs by one
        // eigenvalue per crossing toward 1
        let at = |num: i64, den: i64| levine_tristram_form(&f_block(3), &q(num, den)).unwrap();
        assert_eq!((at(1, 2).positive, at(1, 2).negative), (0, 5));
        assert_eq!((at(1, 5).positive, at(1, 5).negative), (1, 4));
        assert_eq!(at(1, 5).signature(), -3);
        assert_eq!((at(3, 10).positive, at(3, 10).negative), (1, 4));
        assert_eq!((at(1, 10).positive, at(1, 10).negative), (2, 3));
        // plumbing block loses an eigenvalue pair past arccos(2/3)
        let h = levine_tristram_form(&f_prime_block(2), &q(1, 2)).unwrap();
        assert_eq!((h.positive, h.negative, h.null), (0, 3, 0));
    }

    #[test]
    fn integral_parameter_rejected() {
        assert!(matches!(
            levine_tristram_form(&f_block(1), &q(2, 1)),
            Err(TwoBridgeError::DegenerateParameter)
        ));
    }
}
