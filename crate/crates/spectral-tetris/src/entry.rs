//! Symbolic matrix entries: sqrt of a nonnegative scalar times a root of unity.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{FrameError, Result};
use crate::scalar::Scalar;

/// One structurally nonzero entry, `sqrt(radicand) * exp(2*pi*i*p/q)`.
///
/// The root of unity is stored canonically: `0 <= p < q` and `gcd(p, q) = 1`
/// (a power of zero collapses to order 1), so symbolically equal entries
/// compare equal. `|value|^2` equals the radicand exactly by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    radicand: Scalar,
    root_order: u32,
    root_power: u32,
}

impl Entry {
    pub fn new(radicand: Scalar, root_order: u32, root_power: u32) -> Result<Self> {
        if root_order == 0 {
            return Err(FrameError::InvalidEntry("root order must be positive".into()));
        }
        if radicand.is_negative() {
            return Err(FrameError::InvalidEntry(format!(
                "negative radicand {radicand}"
            )));
        }
        let power = root_power % root_order;
        let (root_power, root_order) = if power == 0 {
            (0, 1)
        } else {
            let g = power.gcd(&root_order);
            (power / g, root_order / g)
        };
        Ok(Entry {
            radicand,
            root_order,
            root_power,
        })
    }

    /// Real positive entry `sqrt(radicand)`.
    pub fn real(radicand: Scalar) -> Result<Self> {
        Entry::new(radicand, 1, 0)
    }

    /// Real negative entry `-sqrt(radicand)`.
    pub fn real_negative(radicand: Scalar) -> Result<Self> {
        Entry::new(radicand, 2, 1)
    }

    pub fn radicand(&self) -> &Scalar {
        &self.radicand
    }

    pub fn root_order(&self) -> u32 {
        self.root_order
    }

    pub fn root_power(&self) -> u32 {
        self.root_power
    }

    pub fn is_real(&self) -> bool {
        self.root_order <= 2
    }

    /// Materializes to a complex float. Quarter-turn phases are exact.
    pub fn value(&self) -> Complex64 {
        let magnitude = self.radicand.to_f64().sqrt();
        let phase = match (self.root_power, self.root_order) {
            (0, 1) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            (p, q) => {
                let theta = TAU * (p as f64) / (q as f64);
                Complex64::new(theta.cos(), theta.sin())
            }
        };
        phase * magnitude
    }

    pub fn magnitude_squared(&self) -> f64 {
        self.radicand.to_f64()
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.root_power, self.root_order) {
            (0, 1) => write!(f, "sqrt({})", self.radicand),
            (1, 2) => write!(f, "-sqrt({})", self.radicand),
            (p, q) => write!(f, "sqrt({})*w{}^{}", self.radicand, q, p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn canonical_roots() {
        let e = Entry::new(Scalar::one(), 3, 4).unwrap();
        assert_eq!((e.root_power(), e.root_order()), (1, 3));
        let e = Entry::new(Scalar::one(), 4, 2).unwrap();
        assert_eq!((e.root_power(), e.root_order()), (1, 2));
        let e = Entry::new(Scalar::one(), 6, 6).unwrap();
        assert_eq!((e.root_power(), e.root_order()), (0, 1));
    }

    #[test]
    fn value_sqrt_five_eighths() {
        let e = Entry::real(Scalar::from_rat(5, 8)).unwrap();
        assert!((e.value().re - 0.7905694150420949).abs() < 1e-15);
        assert_eq!(e.value().im, 0.0);
    }

    #[test]
    fn value_omega2_is_exactly_minus_one() {
        let e = Entry::new(Scalar::one(), 2, 1).unwrap();
        assert_eq!(e.value(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn value_omega3_squared() {
        let e = Entry::new(Scalar::from_rat(5, 12), 3, 2).unwrap();
        let want = Complex64::new(-0.5, -(3.0f64).sqrt() / 2.0) * (5.0f64 / 12.0).sqrt();
        assert!((e.value() - want).norm() < 1e-15);
    }

    #[test]
    fn rejects_negative_radicand() {
        assert!(Entry::real(Scalar::from_rat(-1, 2)).is_err());
    }
}
