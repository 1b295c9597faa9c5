use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::zeta_core::arith::gcd;

/// A Dirichlet character stored as its value table on residues `0..q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    values: Vec<Complex64>,
}

const UNIT_TOL: f64 = 1e-12;

impl DirichletCharacter {
    /// Validates the table: zero exactly off the unit group, roots of unity on
    /// it, and completely multiplicative.
    pub fn from_values(values: Vec<Complex64>) -> Result<Self> {
        let q = values.len();
        if q == 0 {
            return Err(Error::InvalidCharacter("empty value table".into()));
        }
        let units: Vec<usize> = (0..q).filter(|&a| gcd(a as u64, q as u64) == 1).collect();
        for (a, v) in values.iter().enumerate() {
            let coprime = gcd(a as u64, q as u64) == 1;
            if coprime && (v.norm() - 1.0).abs() > UNIT_TOL {
                return Err(Error::InvalidCharacter(format!(
                    "value at {a} must have modulus 1, got {v}"
                )));
            }
            if !coprime && *v != Complex64::new(0.0, 0.0) {
                return Err(Error::InvalidCharacter(format!(
                    "value at {a} must vanish since gcd({a}, {q}) > 1"
                )));
            }
        }
        for &a in &units {
            for &b in &units {
                let lhs = values[(a * b) % q];
                let rhs = values[a] * values[b];
                if (lhs - rhs).norm() > 1e-9 {
                    return Err(Error::InvalidCharacter(format!(
                        "not multiplicative at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(DirichletCharacter { values })
    }

    /// The principal character mod `q`; `q = 1` gives χ ≡ 1.
    pub fn principal(q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidCharacter("modulus must be positive".into()));
        }
        let values = (0..q)
            .map(|a| {
                if gcd(a as u64, q as u64) == 1 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self::from_values(values)
    }

    /// The nontrivial character mod 4.
    pub fn chi4() -> Self {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        DirichletCharacter {
            values: vec![z, one, z, -one],
        }
    }

    /// The Legendre symbol `(·/p)` for an odd prime `p`.
    pub fn legendre(p: usize) -> Result<Self> {
        if p < 3 || !crate::zeta_core::arith::is_prime(p as u64) {
            return Err(Error::InvalidCharacter(format!("{p} is not an odd prime")));
        }
        let mut values = vec![Complex64::new(-1.0, 0.0); p];
        values[0] = Complex64::new(0.0, 0.0);
        for x in 1..p {
            values[(x * x) % p] = Complex64::new(1.0, 0.0);
        }
        Self::from_values(values)
    }

    pub fn modulus(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, n: u64) -> Complex64 {
        self.values[(n % self.values.len() as u64) as usize]
    }

    pub fn is_principal(&self) -> bool {
        self.values
            .iter()
            .all(|v| *v == Complex64::new(0.0, 0.0) || (v - 1.0).norm() < UNIT_TOL)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_tables_validate() {
        let c = DirichletCharacter::chi4();
        assert!(DirichletCharacter::from_values(c.values().to_vec()).is_ok());
        assert!(!c.is_principal());
        assert!(DirichletCharacter::principal(1).unwrap().is_principal());
        let l5 = DirichletCharacter::legendre(5).unwrap();
        assert_eq!(l5.at(4).re, 1.0);
        assert_eq!(l5.at(2).re, -1.0);
        assert_eq!(l5.at(10).re, 0.0);
    }

    #[test]
    fn rejects_bad_tables() {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        // nonzero at a non-unit
        assert!(DirichletCharacter::from_values(vec![z, one, one, one]).is_err());
        // not multiplicative mod 5: χ(2)=i but χ(4) should be -1
        let i = Complex64::i();
        assert!(DirichletCharacter::from_values(vec![z, one, i, -i, one]).is_err());
        assert!(DirichletCharacter::from_values(vec![]).is_err());
    }
}
