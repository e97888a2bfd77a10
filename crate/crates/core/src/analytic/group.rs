//! The birational involutions of the kernel curve, checked in exact
//! rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AnalyticError;

type Point = (BigRational, BigRational);

/// `ξ(x, y) = (x, x/y)`.
pub fn xi((x, y): &Point) -> Point {
    (x.clone(), x / y)
}

/// `η(x, y) = (y/x, y)`.
pub fn eta((x, y): &Point) -> Point {
    (y / x, y.clone())
}

/// `(ξ∘η)(x, y) = (y/x, 1/x)`.
pub fn compose_xi_eta(p: &Point) -> Point {
    xi(&eta(p))
}

fn q(z: &BigRational, x: &BigRational, y: &BigRational) -> BigRational {
    let six = BigRational::from_integer(BigInt::from(6));
    let one = BigRational::one();
    let a = z * (x + &one) / &six;
    let b = z * x * x / &six - x + z / &six;
    let c = z * x * (x + &one) / &six;
    a * y * y + b * y + c
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let num: i64 = rng.random_range(-1000..=1000);
        let den: i64 = rng.random_range(1..=1000);
        if num != 0 {
            return BigRational::new(BigInt::from(num), BigInt::from(den));
        }
    }
}

/// Checks at `samples` random nonzero rational points that `ξ` and `η` are
/// involutions, `(ξ∘η)³` is the identity while `ξ∘η` and `(ξ∘η)²` are not
/// (the group has order six), and that both maps preserve the kernel curve:
/// `Q(ξ(x,y)) = (x/y²) Q(x,y)` and `Q(η(x,y)) = (y/x²) Q(x,y)`.
pub fn group_order_check(samples: usize) -> Result<bool, AnalyticError> {
    if samples == 0 {
        return Err(AnalyticError::NoSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a09e667);
    let z = BigRational::new(BigInt::from(2), BigInt::from(7));
    for _ in 0..samples {
        let p = (random_rational(&mut rng), random_rational(&mut rng));
        if xi(&xi(&p)) != p || eta(&eta(&p)) != p {
            return Ok(false);
        }
        let r1 = compose_xi_eta(&p);
        let r2 = compose_xi_eta(&r1);
        let r3 = compose_xi_eta(&r2);
        if r3 != p {
            return Ok(false);
        }
        // r1 = p or r2 = p only at the fixed points y = x², x³ = 1.
        let fixed = p.1 == &p.0 * &p.0;
        if !fixed && (r1 == p || r2 == p) {
            return Ok(false);
        }
        let (x, y) = &p;
        let base = q(&z, x, y);
        let (xx, xy) = xi(&p);
        let (ex, ey) = eta(&p);
        if q(&z, &xx, &xy) != x / (y * y) * &base || q(&z, &ex, &ey) != y / (x * x) * &base {
            return Ok(false);
        }
        if base.is_zero() && !q(&z, &xx, &xy).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn composition_closed_form() {
        let p = (r(3, 5), r(-7, 2));
        assert_eq!(compose_xi_eta(&p), (r(-7, 2) / r(3, 5), r(5, 3)));
    }

    #[test]
    fn order_six() {
        assert_eq!(group_order_check(200), Ok(true));
        assert!(group_order_check(0).is_err());
    }
}
