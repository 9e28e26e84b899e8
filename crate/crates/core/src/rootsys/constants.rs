//! Normalization constants `kappa_g` and `kappa_theta`.
//!
//! Both are exact rationals times powers of `pi`, stored as a [`PiMonomial`].

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{q, qi, Rational};

use super::{dot, RootSystem};

/// `coeff * sqrt(pi)^sqrt_pi_power * (2 pi)^(two_pi_half_power / 2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiMonomial {
    #[serde(with = "crate::rational::serde_rational")]
    pub coeff: Rational,
    pub sqrt_pi_power: i64,
    pub two_pi_half_power: i64,
}

impl PiMonomial {
    pub fn to_f64(&self) -> f64 {
        let pi = std::f64::consts::PI;
        crate::rational::to_f64(&self.coeff)
            * pi.sqrt().powi(self.sqrt_pi_power as i32)
            * (2.0 * pi).sqrt().powi(self.two_pi_half_power as i32)
    }
}

/// `kappa_g = (2 pi)^N / Delta(rho)` with long roots of length² 2, and `K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KappaG {
    pub kappa: PiMonomial,
    /// `Delta(rho)` in the long-root-length² 2 normalization.
    #[serde(with = "crate::rational::serde_rational")]
    pub delta_rho: Rational,
    /// `K = prod_(alpha > 0) <theta, theta> / <alpha, alpha>`.
    #[serde(with = "crate::rational::serde_bigint")]
    pub k: BigInt,
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn kappa_constants(rs: &RootSystem) -> KappaG {
    let n = rs.num_positive_roots();
    let theta = rs.long_root_norm().clone();
    let scale = qi(2) / &theta;
    let delta_rho = rs
        .delta_g(&rs.weyl_vector())
        .expect("rho has the right length")
        * num_traits::pow(scale, n);
    let mut k = Rational::one();
    for a in rs.positive_roots() {
        k *= &theta / dot(a, a);
    }
    debug_assert!(k.is_integer());
    KappaG {
        kappa: PiMonomial {
            coeff: delta_rho.recip(),
            sqrt_pi_power: 0,
            two_pi_half_power: 2 * n as i64,
        },
        delta_rho,
        k: k.to_integer(),
    }
}

/// `prod l_i! / K`, which equals `Delta(rho)` in [`kappa_constants`].
pub fn delta_rho_from_exponents(rs: &RootSystem, k: &BigInt) -> Rational {
    let num = rs
        .coxeter_exponents()
        .iter()
        .fold(BigInt::one(), |acc, &l| acc * factorial(l as u64));
    Rational::new(num, k.clone())
}

/// `Gamma(1 + x)` for `x` a nonnegative multiple of 1/2, as `(rational, sqrt pi power)`.
fn gamma_one_plus(x: &Rational) -> (Rational, i64) {
    let twice = (x * qi(2)).to_integer().to_u64().expect("small argument");
    if twice.is_multiple_of(2) {
        (Rational::from_integer(factorial(twice / 2)), 0)
    } else {
        // Gamma(m + 1/2) = (2m)! / (4^m m!) sqrt(pi) with m = (twice + 1) / 2
        let m = twice.div_ceil(2);
        let num = factorial(2 * m);
        let den = num_traits::pow(BigInt::from(4), m as usize) * factorial(m);
        (Rational::new(num, den), 1)
    }
}

/// `(2 pi)^(n(n-1) theta / 2) n! / prod_(j=1..n) Gamma(1 + j theta) / Gamma(1 + theta)`
/// for `theta` in {1/2, 1, 2}.
pub fn kappa_theta(theta: &Rational, n: u64) -> Result<PiMonomial> {
    if ![q(1, 2), qi(1), qi(2)].contains(theta) {
        return Err(Error::Unsupported(format!(
            "theta must be 1/2, 1 or 2, got {}",
            crate::rational::fmt(theta)
        )));
    }
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    let (g1, p1) = gamma_one_plus(theta);
    let mut coeff = Rational::from_integer(factorial(n));
    let mut sqrt_pi = 0i64;
    for j in 1..=n {
        let (gj, pj) = gamma_one_plus(&(qi(j as i64) * theta));
        coeff = coeff * &g1 / gj;
        sqrt_pi += p1 - pj;
    }
    let half = (qi((n * (n - 1)) as i64) * theta).to_integer();
    let two_pi_half_power = half.to_i64().expect("small exponent");
    debug_assert!(!coeff.is_zero());
    Ok(PiMonomial {
        coeff,
        sqrt_pi_power: sqrt_pi,
        two_pi_half_power,
    })
}
